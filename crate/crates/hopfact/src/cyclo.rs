//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! A [`CycNum`] stores exact rational coordinates in the power basis
//! 1, zeta, ..., zeta^(phi(N)-1) of Q(zeta_N), reduced modulo the N-th
//! cyclotomic polynomial, so equality of representations is equality of
//! field elements at a fixed conductor.  Arithmetic between different
//! conductors coerces both operands into Q(zeta_lcm) first.

use crate::error::{HopfError, Result};
use crate::poly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Euler's totient.
pub fn phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut result = n;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// An element of Q(zeta_N) with exact rational coordinates.
#[derive(Clone)]
pub struct CycNum {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

fn reduce_mod_phi(n: u64, mut v: Vec<BigRational>) -> Vec<BigRational> {
    let deg = phi(n) as usize;
    if v.len() > deg {
        let cp = poly::cyclotomic(n);
        while v.len() > deg {
            let c = v.pop().unwrap();
            if !c.is_zero() {
                let base = v.len() - deg;
                for i in 0..deg {
                    let t = &c * BigRational::from(cp[i].clone());
                    v[base + i] -= t;
                }
            }
        }
    }
    v.resize(deg, BigRational::zero());
    v
}

impl CycNum {
    /// Build from raw power-basis coordinates at the given conductor,
    /// reducing modulo the cyclotomic polynomial.
    pub fn from_coeffs(conductor: u64, coeffs: Vec<BigRational>) -> CycNum {
        assert!(conductor >= 1);
        CycNum { conductor, coeffs: reduce_mod_phi(conductor, coeffs) }
    }

    pub fn zero() -> CycNum {
        CycNum { conductor: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> CycNum {
        CycNum { conductor: 1, coeffs: vec![BigRational::one()] }
    }

    pub fn from_rational(r: BigRational) -> CycNum {
        CycNum { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_i64(x: i64) -> CycNum {
        CycNum::from_rational(BigRational::from(BigInt::from(x)))
    }

    pub fn from_ratio(p: i64, q: i64) -> CycNum {
        assert!(q != 0);
        CycNum::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// zeta_N^k in canonical form; k may be any integer.
    pub fn root(n: u64, k: i64) -> CycNum {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        CycNum::from_coeffs(n, v)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Some(r) when the element lies in Q.
    pub fn try_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Coerce into Q(zeta_n); n must be a multiple of the current conductor.
    pub fn coerce(&self, n: u64) -> CycNum {
        assert!(n % self.conductor == 0);
        if n == self.conductor {
            return self.clone();
        }
        let step = (n / self.conductor) as usize;
        let mut v = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[j * step] = c.clone();
            }
        }
        CycNum::from_coeffs(n, v)
    }

    fn lift(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
        if a.conductor == b.conductor {
            (a.clone(), b.clone())
        } else {
            let l = lcm(a.conductor, b.conductor);
            (a.coerce(l), b.coerce(l))
        }
    }

    pub fn add(&self, other: &CycNum) -> CycNum {
        let (mut a, b) = CycNum::lift(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &CycNum) -> CycNum {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycNum) -> CycNum {
        let (a, b) = CycNum::lift(self, other);
        let n = a.conductor;
        let mut v = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        CycNum::from_coeffs(n, v)
    }

    /// Multiplicative inverse, computed by solving self * x = 1 as a linear
    /// system over the power basis.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(HopfError::DivisionByZero { conductor: self.conductor });
        }
        let n = self.conductor;
        let deg = self.coeffs.len();
        if deg == 1 {
            return Ok(CycNum {
                conductor: n,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        // Columns of m are the coordinates of self * zeta^j.
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(deg);
        let mut cur = self.clone();
        for _ in 0..deg {
            cols.push(cur.coeffs.clone());
            // multiply by zeta: shift up and reduce
            let mut shifted = vec![BigRational::zero(); cur.coeffs.len() + 1];
            for (i, c) in cur.coeffs.iter().enumerate() {
                shifted[i + 1] = c.clone();
            }
            cur = CycNum::from_coeffs(n, shifted);
        }
        // Solve M x = e0 by Gaussian elimination on the augmented system.
        let mut aug: Vec<Vec<BigRational>> = (0..deg)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..deg).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        let mut piv_rows: Vec<usize> = Vec::new();
        let mut used = vec![false; deg];
        for col in 0..deg {
            let mut sel = None;
            for (r, row) in aug.iter().enumerate() {
                if !used[r] && !row[col].is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let r = match sel {
                Some(r) => r,
                None => continue,
            };
            used[r] = true;
            piv_rows.push(r);
            let p = aug[r][col].clone();
            for i in col..=deg {
                aug[r][i] /= &p;
            }
            for rr in 0..deg {
                if rr != r && !aug[rr][col].is_zero() {
                    let f = aug[rr][col].clone();
                    for i in col..=deg {
                        let t = &f * &aug[r][i];
                        aug[rr][i] -= t;
                    }
                }
            }
        }
        if piv_rows.len() != deg {
            // self is a zero divisor, impossible in a field; defensive.
            return Err(HopfError::DivisionByZero { conductor: n });
        }
        let mut x = vec![BigRational::zero(); deg];
        for col in 0..deg {
            let r = piv_rows[col];
            x[col] = aug[r][deg].clone();
        }
        Ok(CycNum { conductor: n, coeffs: x })
    }

    pub fn div(&self, other: &CycNum) -> Result<CycNum> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = CycNum::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Smallest t >= 1 with self^t = 1, or None when self is not a root of
    /// unity.  The roots of unity in Q(zeta_N) all have order dividing
    /// lcm(2, N), so testing t <= 2N is exhaustive.
    pub fn order_of(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let bound = 2 * self.conductor;
        let mut acc = self.clone();
        for t in 1..=bound {
            if acc.is_one() {
                return Some(t);
            }
            acc = acc.mul(self);
        }
        None
    }

    /// Human-readable form, e.g. "1/2 + 3·ζ6^2".
    pub fn pretty(&self) -> String {
        format!("{}", self)
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &CycNum) -> bool {
        let (a, b) = CycNum::lift(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNum {}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new(); // (is_negative, magnitude text)
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            let text = if k == 0 {
                fmt_rat(&mag)
            } else {
                let base = if k == 1 {
                    format!("ζ{}", self.conductor)
                } else {
                    format!("ζ{}^{}", self.conductor, k)
                };
                if mag.is_one() {
                    base
                } else {
                    format!("{}·{}", fmt_rat(&mag), base)
                }
            };
            parts.push((negative, text));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (neg, text)) in parts.iter().enumerate() {
            if i == 0 {
                if *neg {
                    out.push('-');
                }
            } else {
                out.push_str(if *neg { " - " } else { " + " });
            }
            out.push_str(text);
        }
        write!(f, "{}", out)
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({})", self)
    }
}

fn parse_rat(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|e| format!("bad numerator: {}", e))?;
        let q: BigInt = q.trim().parse().map_err(|e| format!("bad denominator: {}", e))?;
        if q.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(p, q))
    } else {
        let p: BigInt = s.parse().map_err(|e| format!("bad integer: {}", e))?;
        Ok(BigRational::from(p))
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CycNum", 2)?;
        st.serialize_field("conductor", &self.conductor)?;
        let strs: Vec<String> = self.coeffs.iter().map(fmt_rat).collect();
        st.serialize_field("coeffs", &strs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            conductor: u64,
            coeffs: Vec<String>,
        }
        let r = Repr::deserialize(d)?;
        if r.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let want = phi(r.conductor) as usize;
        if r.coeffs.len() != want {
            return Err(D::Error::custom(format!(
                "coeffs length {} does not match phi({}) = {}",
                r.coeffs.len(),
                r.conductor,
                want
            )));
        }
        let mut v = Vec::with_capacity(want);
        for s in &r.coeffs {
            v.push(parse_rat(s).map_err(D::Error::custom)?);
        }
        Ok(CycNum::from_coeffs(r.conductor, v))
    }
}
