//! Polynomial support: integer cyclotomic polynomials and dense polynomials
//! over the cyclotomic field.

use crate::cyclo::CycNum;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Long division by a monic divisor, asserting that the remainder vanishes.
fn zdiv_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    assert!(rem.len() > dn);
    let qn = rem.len() - dn;
    let mut quo = vec![BigInt::zero(); qn];
    for k in (0..qn).rev() {
        let c = rem[k + dn].clone();
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
        quo[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quo
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            d.push(i);
            if i != n / i {
                d.push(n / i);
            }
        }
        i += 1;
    }
    d.sort_unstable();
    d
}

/// The N-th cyclotomic polynomial, little-endian integer coefficients.
///
/// Computed as (x^N - 1) / prod_{d | N, d < N} Phi_d and cached.
pub fn cyclotomic(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut p: Vec<BigInt> = vec![BigInt::zero(); (n + 1) as usize];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            let q = cyclotomic(d);
            p = zdiv_exact(&p, &q);
        }
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// Dense polynomial over the cyclotomic field, little-endian, trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    c: Vec<CycNum>,
}

impl CPoly {
    pub fn new(mut c: Vec<CycNum>) -> CPoly {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        CPoly { c }
    }

    pub fn zero() -> CPoly {
        CPoly { c: vec![] }
    }

    pub fn one() -> CPoly {
        CPoly::new(vec![CycNum::one()])
    }

    pub fn monomial(k: usize, coeff: CycNum) -> CPoly {
        let mut c = vec![CycNum::zero(); k + 1];
        c[k] = coeff;
        CPoly::new(c)
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> CycNum {
        self.c.get(k).cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&other.coeff(k)));
        }
        CPoly::new(out)
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).sub(&other.coeff(k)));
        }
        CPoly::new(out)
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        if self.is_zero() || other.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![CycNum::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        CPoly::new(out)
    }

    pub fn scale(&self, s: &CycNum) -> CPoly {
        CPoly::new(self.c.iter().map(|a| a.mul(s)).collect())
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divrem(&self, d: &CPoly) -> (CPoly, CPoly) {
        let dd = d.deg().expect("division by zero polynomial");
        let lead_inv = d.c[dd].inv().expect("leading coefficient invertible");
        let mut rem = self.c.clone();
        if rem.len() <= dd {
            return (CPoly::zero(), CPoly::new(rem));
        }
        let qn = rem.len() - dd;
        let mut quo = vec![CycNum::zero(); qn];
        for k in (0..qn).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if !c.is_zero() {
                for i in 0..=dd {
                    rem[k + i] = rem[k + i].sub(&c.mul(&d.c[i]));
                }
            }
            quo[k] = c;
        }
        (CPoly::new(quo), CPoly::new(rem))
    }

    pub fn monic(&self) -> CPoly {
        match self.deg() {
            None => CPoly::zero(),
            Some(d) => {
                let inv = self.c[d].inv().expect("leading coefficient invertible");
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(a: &CPoly, b: &CPoly) -> CPoly {
        let mut f = a.clone();
        let mut g = b.clone();
        while !g.is_zero() {
            let (_, r) = f.divrem(&g);
            f = g;
            g = r;
        }
        f.monic()
    }

    pub fn eval(&self, x: &CycNum) -> CycNum {
        let mut acc = CycNum::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn small(p: &[i64]) -> Vec<BigInt> {
        p.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_small_cases() {
        assert_eq!(cyclotomic(1), small(&[-1, 1]));
        assert_eq!(cyclotomic(2), small(&[1, 1]));
        assert_eq!(cyclotomic(3), small(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), small(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), small(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), small(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_degrees_are_totients() {
        for (n, phi) in [(5u64, 4usize), (8, 4), (9, 6), (10, 4), (15, 8), (20, 8)] {
            assert_eq!(cyclotomic(n).len() - 1, phi);
        }
    }

    #[test]
    fn product_over_divisors_recovers_power() {
        // prod_{d|12} Phi_d = x^12 - 1
        let mut p = small(&[1]);
        for d in divisors(12) {
            p = zmul(&p, &cyclotomic(d));
        }
        let mut expect = vec![BigInt::zero(); 13];
        expect[0] = BigInt::from(-1);
        expect[12] = BigInt::one();
        assert_eq!(p, expect);
    }

    #[test]
    fn cpoly_divrem_roundtrip() {
        let f = CPoly::new(vec![
            CycNum::from_i64(2),
            CycNum::from_i64(-3),
            CycNum::from_i64(0),
            CycNum::from_i64(1),
        ]);
        let d = CPoly::new(vec![CycNum::from_i64(-1), CycNum::from_i64(1)]);
        let (q, r) = f.divrem(&d);
        assert_eq!(f, q.mul(&d).add(&r));
        assert!(r.deg().map(|x| x.to_u64().unwrap() < 1).unwrap_or(true));
    }

    #[test]
    fn cpoly_gcd_of_shared_root() {
        // gcd(x^2 - 1, x^2 + x) = x + 1 up to normalization... both vanish at -1.
        let a = CPoly::new(vec![CycNum::from_i64(-1), CycNum::zero(), CycNum::one()]);
        let b = CPoly::new(vec![CycNum::zero(), CycNum::one(), CycNum::one()]);
        let g = CPoly::gcd(&a, &b);
        assert_eq!(g, CPoly::new(vec![CycNum::one(), CycNum::one()]));
    }
}
