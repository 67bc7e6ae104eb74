//! Root extraction for the restricted class of cyclotomic numbers of the
//! form (positive rational) x (root of unity).  Every eigenvalue and scalar
//! that the catalogs and isomorphism search produce has this shape; values
//! outside it are reported as unresolved by the callers rather than guessed.

use crate::cyclo::{lcm, CycNum};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Exact nonnegative d-th root of a nonnegative rational, if it is rational.
pub(crate) fn rational_nth_root(r: &BigRational, d: u64) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let q = r.denom();
    let rn = n.nth_root(d as u32);
    let rq = q.nth_root(d as u32);
    if &rn.pow(d as u32) == n && &rq.pow(d as u32) == q {
        Some(BigRational::new(rn, rq))
    } else {
        None
    }
}

/// All z with z^d = rho among numbers of the form q·ξ with q a positive
/// rational and ξ a root of unity.  Complete for that class; deterministic
/// order.
pub(crate) fn nth_roots_full(rho: &CycNum, d: u64) -> Vec<CycNum> {
    assert!(d >= 1);
    if rho.is_zero() {
        return vec![CycNum::zero()];
    }
    let mut out: Vec<CycNum> = Vec::new();
    let l0 = lcm(2, rho.conductor());
    for k in 0..l0 {
        let eta = CycNum::root(l0, k as i64);
        let t = rho.mul(&eta.inv().unwrap());
        let Some(r) = t.try_rational() else { continue };
        let rabs = r.abs();
        if rabs.is_zero() {
            continue;
        }
        let Some(q) = rational_nth_root(&rabs, d) else { continue };
        let qc = CycNum::from_rational(q);
        let qd = qc.pow(d as i64).unwrap();
        let rem = rho.mul(&qd.inv().unwrap());
        let Some(rem_ord) = rem.order_of() else { continue };
        let l1 = lcm(2, d * rem_ord);
        for j in 0..l1 {
            let xi = CycNum::root(l1, j as i64);
            if xi.pow(d as i64).unwrap() == rem {
                let z = qc.mul(&xi);
                if !out.contains(&z) {
                    out.push(z);
                }
            }
        }
    }
    out.sort_by_key(|z| serde_json::to_string(z).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots_of_minus_one() {
        let r = nth_roots_full(&CycNum::from_i64(-1), 2);
        assert_eq!(r.len(), 2);
        for z in &r {
            assert_eq!(z.mul(z), CycNum::from_i64(-1));
        }
    }

    #[test]
    fn cube_roots_of_rational() {
        let r = nth_roots_full(&CycNum::from_ratio(27, 8), 3);
        // 3/2 times each cube root of unity
        assert_eq!(r.len(), 3);
        for z in &r {
            assert_eq!(z.pow(3).unwrap(), CycNum::from_ratio(27, 8));
        }
        assert!(r.contains(&CycNum::from_ratio(3, 2)));
    }

    #[test]
    fn roots_of_root_of_unity() {
        let rho = CycNum::root(3, 1);
        let r = nth_roots_full(&rho, 2);
        // solutions are the two square roots, both 6th roots of unity
        assert_eq!(r.len(), 2);
        for z in &r {
            assert_eq!(z.mul(z), rho);
        }
    }

    #[test]
    fn mixed_rational_times_root() {
        let rho = CycNum::from_ratio(4, 9).mul(&CycNum::root(4, 1));
        let r = nth_roots_full(&rho, 2);
        assert!(!r.is_empty());
        for z in &r {
            assert_eq!(z.mul(z), rho);
        }
        assert!(r.contains(&CycNum::from_ratio(2, 3).mul(&CycNum::root(8, 1))));
    }

    #[test]
    fn no_roots_outside_the_class() {
        // sqrt(2) is not rational x root of unity
        assert!(nth_roots_full(&CycNum::from_i64(2), 2).is_empty());
    }
}
