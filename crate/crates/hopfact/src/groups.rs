//! Finite abelian groups, their duals, characters, and bicharacters.
//!
//! Groups are kept in invariant-factor form (each cyclic order divides the
//! next), so dual groups and canonical comparisons come for free.  Desk-scale
//! orders make exhaustive element scans acceptable for kernels, closures, and
//! bicharacter solving.

use crate::cyclo::{gcd, lcm, CycNum};
use crate::error::{HopfError, Result};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::fmt;

/// Finite abelian group presented by cyclic factor orders in
/// invariant-factor form: factors[0] | factors[1] | ... (all > 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbGroup {
    factors: Vec<u64>,
}

fn prime_power_split(mut m: u64) -> Vec<(u64, u64)> {
    // returns (p, p^a) pairs
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut q = 1;
            while m % p == 0 {
                m /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, m));
    }
    out
}

impl AbGroup {
    /// Normalize an arbitrary cyclic-factor list to invariant-factor form.
    pub fn new(orders: &[u64]) -> AbGroup {
        AbGroup::new_with_embedding(orders).0
    }

    /// Normalize and also return the images of the original generators
    /// inside the normalized group (the canonical isomorphism).
    pub fn new_with_embedding(orders: &[u64]) -> (AbGroup, Vec<GrpElt>) {
        assert!(orders.iter().all(|&m| m >= 1), "cyclic orders must be positive");
        // Bucket prime powers per prime, sorted descending.
        // buckets[p] = vec of (p^a, original generator index), descending in a.
        let mut per_prime: std::collections::BTreeMap<u64, Vec<(u64, usize)>> =
            std::collections::BTreeMap::new();
        for (idx, &m) in orders.iter().enumerate() {
            for (p, q) in prime_power_split(m) {
                per_prime.entry(p).or_default().push((q, idx));
            }
        }
        let mut rank_count = 0usize;
        for v in per_prime.values_mut() {
            v.sort_by(|a, b| b.0.cmp(&a.0));
            rank_count = rank_count.max(v.len());
        }
        // Invariant factor j (ascending) collects rank (rank_count-1-j) powers.
        let mut factors = vec![1u64; rank_count];
        for v in per_prime.values() {
            for (r, (q, _)) in v.iter().enumerate() {
                factors[rank_count - 1 - r] *= q;
            }
        }
        let group = AbGroup { factors };
        // Embed each original generator: its p^a part maps to d_j/p^a in slot j.
        let mut images = vec![vec![0u64; group.factors.len()]; orders.len()];
        for v in per_prime.values() {
            for (r, (q, idx)) in v.iter().enumerate() {
                let j = rank_count - 1 - r;
                let d = group.factors[j];
                images[*idx][j] = (images[*idx][j] + d / q) % d;
            }
        }
        let elts = images
            .into_iter()
            .map(|exps| GrpElt { parent: group.clone(), exps })
            .collect();
        (group, elts)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn identity(&self) -> GrpElt {
        GrpElt { parent: self.clone(), exps: vec![0; self.factors.len()] }
    }

    /// The ℓ-th standard generator.
    pub fn gen(&self, l: usize) -> GrpElt {
        let mut exps = vec![0u64; self.factors.len()];
        exps[l] = 1 % self.factors[l];
        GrpElt { parent: self.clone(), exps }
    }

    pub fn elt(&self, exps: &[i64]) -> GrpElt {
        assert_eq!(exps.len(), self.factors.len(), "exponent vector length mismatch");
        let exps = exps
            .iter()
            .zip(&self.factors)
            .map(|(&e, &m)| e.rem_euclid(m as i64) as u64)
            .collect();
        GrpElt { parent: self.clone(), exps }
    }

    /// All group elements, in lexicographic exponent order.
    pub fn elements(&self) -> Vec<GrpElt> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = vec![0u64; self.factors.len()];
        loop {
            out.push(GrpElt { parent: self.clone(), exps: cur.clone() });
            let mut l = self.factors.len();
            loop {
                if l == 0 {
                    return out;
                }
                l -= 1;
                cur[l] += 1;
                if cur[l] < self.factors[l] {
                    break;
                }
                cur[l] = 0;
                if l == 0 {
                    return out;
                }
            }
        }
    }

    /// All characters, in lexicographic exponent order.
    pub fn characters(&self) -> Vec<Character> {
        self.elements()
            .into_iter()
            .map(|e| Character { parent: self.clone(), exps: e.exps })
            .collect()
    }

    pub fn trivial_character(&self) -> Character {
        Character { parent: self.clone(), exps: vec![0; self.factors.len()] }
    }

    pub fn character(&self, exps: &[i64]) -> Character {
        let e = self.elt(exps);
        Character { parent: self.clone(), exps: e.exps }
    }

    /// Exponent of the group: lcm of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |a, &m| lcm(a, m))
    }
}

impl fmt::Debug for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let parts: Vec<String> = self.factors.iter().map(|m| format!("Z{}", m)).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl Serialize for AbGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.factors.len()))?;
        for m in &self.factors {
            seq.serialize_element(m)?;
        }
        seq.end()
    }
}

/// A group element: one residue per invariant factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrpElt {
    parent: AbGroup,
    exps: Vec<u64>,
}

impl GrpElt {
    pub fn parent(&self) -> &AbGroup {
        &self.parent
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &GrpElt) -> GrpElt {
        assert_eq!(self.parent, other.parent, "elements of different groups");
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(&self.parent.factors)
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect();
        GrpElt { parent: self.parent.clone(), exps }
    }

    pub fn inv(&self) -> GrpElt {
        let exps = self
            .exps
            .iter()
            .zip(&self.parent.factors)
            .map(|(&a, &m)| (m - a) % m)
            .collect();
        GrpElt { parent: self.parent.clone(), exps }
    }

    pub fn pow(&self, k: i64) -> GrpElt {
        let exps = self
            .exps
            .iter()
            .zip(&self.parent.factors)
            .map(|(&a, &m)| ((a as i128 * k as i128).rem_euclid(m as i128)) as u64)
            .collect();
        GrpElt { parent: self.parent.clone(), exps }
    }

    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.parent.factors)
            .fold(1, |acc, (&a, &m)| lcm(acc, m / gcd(a, m)))
    }
}

impl fmt::Debug for GrpElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|e| e.to_string()).collect();
        write!(f, "g({})", parts.join(","))
    }
}

/// A multiplicative character: generator g_ℓ maps to ζ_{m_ℓ}^{e_ℓ}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    parent: AbGroup,
    exps: Vec<u64>,
}

impl Character {
    pub fn parent(&self) -> &AbGroup {
        &self.parent
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Character) -> Character {
        assert_eq!(self.parent, other.parent, "characters of different groups");
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(&self.parent.factors)
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect();
        Character { parent: self.parent.clone(), exps }
    }

    pub fn inv(&self) -> Character {
        let exps = self
            .exps
            .iter()
            .zip(&self.parent.factors)
            .map(|(&a, &m)| (m - a) % m)
            .collect();
        Character { parent: self.parent.clone(), exps }
    }

    pub fn pow(&self, k: i64) -> Character {
        let exps = self
            .exps
            .iter()
            .zip(&self.parent.factors)
            .map(|(&a, &m)| ((a as i128 * k as i128).rem_euclid(m as i128)) as u64)
            .collect();
        Character { parent: self.parent.clone(), exps }
    }

    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.parent.factors)
            .fold(1, |acc, (&a, &m)| lcm(acc, m / gcd(a, m)))
    }

    pub fn eval(&self, g: &GrpElt) -> Result<CycNum> {
        char_eval(self, g)
    }

    /// Reconstruct a character from its values on the standard generators.
    pub fn from_values(parent: &AbGroup, vals: &[CycNum]) -> Result<Character> {
        if vals.len() != parent.rank() {
            return Err(HopfError::ConstraintViolated(format!(
                "expected {} generator values, got {}",
                parent.rank(),
                vals.len()
            )));
        }
        let mut exps = Vec::with_capacity(vals.len());
        for (v, &m) in vals.iter().zip(&parent.factors) {
            exps.push(discrete_log(v, m).ok_or_else(|| {
                HopfError::ConstraintViolated(format!(
                    "value {} is not a root of unity of order dividing {}",
                    v, m
                ))
            })?);
        }
        Ok(Character { parent: parent.clone(), exps })
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|e| e.to_string()).collect();
        write!(f, "chi({})", parts.join(","))
    }
}

impl Serialize for GrpElt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.exps.len()))?;
        for e in &self.exps {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.exps.len()))?;
        for e in &self.exps {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

/// Find e with ζ_m^e = v, if v is such a root of unity.
fn discrete_log(v: &CycNum, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let mut acc = CycNum::one();
    let z = CycNum::root(m, 1);
    for e in 0..m {
        if acc == *v {
            return Some(e);
        }
        acc = acc.mul(&z);
    }
    None
}

/// Standard dual generators: χ_ℓ(g_t) = ζ_{m_ℓ}^{[ℓ=t]}.
pub fn dual_generators(g: &AbGroup) -> Vec<Character> {
    (0..g.rank())
        .map(|l| {
            let mut exps = vec![0u64; g.rank()];
            exps[l] = 1 % g.factors[l];
            Character { parent: g.clone(), exps }
        })
        .collect()
}

/// Multiplicative evaluation χ(g).
pub fn char_eval(chi: &Character, g: &GrpElt) -> Result<CycNum> {
    if chi.parent != g.parent {
        return Err(HopfError::ParentMismatch);
    }
    let parent = &chi.parent;
    let l = parent.exponent();
    let mut total: u64 = 0;
    for ((&e, &a), &m) in chi.exps.iter().zip(&g.exps).zip(&parent.factors) {
        if m == 1 {
            continue;
        }
        let step = l / m;
        total = (total + (e as u128 * a as u128 % m as u128) as u64 * step) % l;
    }
    Ok(CycNum::root(l.max(1), total as i64))
}

/// Closure of a generating set: all products of the generators.
pub fn subgroup_closure(g: &AbGroup, gens: &[GrpElt]) -> Vec<GrpElt> {
    let mut seen: std::collections::BTreeSet<Vec<u64>> = std::collections::BTreeSet::new();
    let mut frontier = vec![g.identity()];
    seen.insert(g.identity().exps.clone());
    while let Some(x) = frontier.pop() {
        for gen in gens {
            assert_eq!(*gen.parent(), *g, "generator from a different group");
            let y = x.mul(gen);
            if seen.insert(y.exps.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().map(|exps| GrpElt { parent: g.clone(), exps }).collect()
}

/// Closure of characters under multiplication.
pub fn character_closure(g: &AbGroup, gens: &[Character]) -> Vec<Character> {
    let as_elts: Vec<GrpElt> = gens
        .iter()
        .map(|c| GrpElt { parent: g.clone(), exps: c.exps.clone() })
        .collect();
    subgroup_closure(g, &as_elts)
        .into_iter()
        .map(|e| Character { parent: g.clone(), exps: e.exps })
        .collect()
}

/// A bicharacter on a group 𝔗: β(g_i, g_j) = ζ_{gcd(m_i,m_j)}^{table[i][j]}.
/// Bimultiplicativity is automatic for this storage form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bicharacter {
    support: AbGroup,
    table: Vec<Vec<u64>>,
}

/// Result of [`beta_props`]: structural facts about a bicharacter.
#[derive(Clone, Debug, Serialize)]
pub struct BetaProps {
    pub alternating: bool,
    pub nondegenerate: bool,
    /// All elements of Ker β = {σ : β(σ,τ)=1 for all τ}.
    pub kernel: Vec<GrpElt>,
}

impl Bicharacter {
    pub fn new(support: &AbGroup, table: Vec<Vec<i64>>) -> Bicharacter {
        let k = support.rank();
        assert_eq!(table.len(), k, "bicharacter table must be square of group rank");
        let mut t = Vec::with_capacity(k);
        for (i, row) in table.iter().enumerate() {
            assert_eq!(row.len(), k, "bicharacter table must be square of group rank");
            let mut r = Vec::with_capacity(k);
            for (j, &e) in row.iter().enumerate() {
                let g = gcd(support.factors[i], support.factors[j]);
                r.push(e.rem_euclid(g as i64) as u64);
            }
            t.push(r);
        }
        Bicharacter { support: support.clone(), table: t }
    }

    pub fn trivial(support: &AbGroup) -> Bicharacter {
        let k = support.rank();
        Bicharacter { support: support.clone(), table: vec![vec![0; k]; k] }
    }

    pub fn support(&self) -> &AbGroup {
        &self.support
    }

    pub fn table(&self) -> &[Vec<u64>] {
        &self.table
    }

    /// Reconstruct from values on generator pairs.
    pub fn from_values(support: &AbGroup, vals: &[Vec<CycNum>]) -> Result<Bicharacter> {
        let k = support.rank();
        if vals.len() != k || vals.iter().any(|r| r.len() != k) {
            return Err(HopfError::ConstraintViolated(
                "bicharacter value table must be square of group rank".into(),
            ));
        }
        let mut table = Vec::with_capacity(k);
        for i in 0..k {
            let mut row = Vec::with_capacity(k);
            for j in 0..k {
                let g = gcd(support.factors[i], support.factors[j]);
                row.push(discrete_log(&vals[i][j], g).ok_or_else(|| {
                    HopfError::ConstraintViolated(format!(
                        "value {} at ({},{}) is not a root of unity of order dividing {}",
                        vals[i][j], i, j, g
                    ))
                })? as i64);
            }
            table.push(row);
        }
        Ok(Bicharacter::new(support, table))
    }

    pub fn eval(&self, s: &GrpElt, t: &GrpElt) -> CycNum {
        assert_eq!(*s.parent(), self.support, "left argument not in the support group");
        assert_eq!(*t.parent(), self.support, "right argument not in the support group");
        let l = self.support.exponent().max(1);
        let mut total: u128 = 0;
        for i in 0..self.support.rank() {
            if s.exps[i] == 0 {
                continue;
            }
            for j in 0..self.support.rank() {
                if t.exps[j] == 0 || self.table[i][j] == 0 {
                    continue;
                }
                let g = gcd(self.support.factors[i], self.support.factors[j]);
                let step = l / g;
                let e = self.table[i][j] as u128 * s.exps[i] as u128 % g as u128
                    * t.exps[j] as u128
                    % g as u128;
                total = (total + e * step as u128) % l as u128;
            }
        }
        CycNum::root(l, total as i64)
    }
}

impl Serialize for Bicharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Bicharacter", 2)?;
        st.serialize_field("support", &self.support)?;
        st.serialize_field("table", &self.table)?;
        st.end()
    }
}

/// Alternation, nondegeneracy, and the kernel of a bicharacter.
pub fn beta_props(beta: &Bicharacter) -> BetaProps {
    let g = &beta.support;
    let k = g.rank();
    let mut alternating = true;
    for i in 0..k {
        if beta.table[i][i] != 0 {
            alternating = false;
        }
        for j in (i + 1)..k {
            let m = gcd(g.factors[i], g.factors[j]);
            if m != 0 && (beta.table[i][j] + beta.table[j][i]) % m != 0 {
                alternating = false;
            }
        }
    }
    let gens: Vec<GrpElt> = (0..k).map(|l| g.gen(l)).collect();
    let kernel: Vec<GrpElt> = g
        .elements()
        .into_iter()
        .filter(|x| gens.iter().all(|t| beta.eval(x, t).is_one()))
        .collect();
    let nondegenerate = kernel.len() == 1;
    BetaProps { alternating, nondegenerate, kernel }
}

/// A homomorphism between abelian groups, stored by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub domain: AbGroup,
    pub codomain: AbGroup,
    pub images: Vec<GrpElt>,
}

impl GroupHom {
    pub fn apply(&self, g: &GrpElt) -> GrpElt {
        assert_eq!(*g.parent(), self.domain, "argument not in the domain");
        let mut out = self.codomain.identity();
        for (l, im) in self.images.iter().enumerate() {
            out = out.mul(&im.pow(g.exps[l] as i64));
        }
        out
    }
}

/// Solve β(f(g_ℓ), τ_j) = evals[ℓ][j] for a homomorphism f: domain → 𝔗,
/// where τ_j runs over the standard generators of the support of β.
/// Unique when β is nondegenerate.
pub fn solve_f(beta: &Bicharacter, domain: &AbGroup, evals: &[Vec<CycNum>]) -> Result<GroupHom> {
    let support = &beta.support;
    if evals.len() != domain.rank() {
        return Err(HopfError::NoSolution(format!(
            "need {} rows of target values, got {}",
            domain.rank(),
            evals.len()
        )));
    }
    let gens: Vec<GrpElt> = (0..support.rank()).map(|j| support.gen(j)).collect();
    let all = support.elements();
    let mut images = Vec::with_capacity(domain.rank());
    for (l, row) in evals.iter().enumerate() {
        if row.len() != support.rank() {
            return Err(HopfError::NoSolution(format!(
                "row {} must give one value per support generator",
                l
            )));
        }
        let mut found: Vec<&GrpElt> = Vec::new();
        for cand in &all {
            if gens.iter().zip(row).all(|(t, v)| beta.eval(cand, t) == *v) {
                found.push(cand);
            }
        }
        match found.len() {
            0 => {
                return Err(HopfError::NoSolution(format!(
                    "no element of the support realizes the values required for generator {}",
                    l
                )))
            }
            1 => images.push(found[0].clone()),
            n => {
                return Err(HopfError::NoSolution(format!(
                    "{} candidates for generator {}; the bicharacter is degenerate",
                    n, l
                )))
            }
        }
    }
    // f must respect the generator orders to extend to a homomorphism.
    for (l, im) in images.iter().enumerate() {
        let m = domain.factors[l];
        if !im.pow(m as i64).is_identity() {
            return Err(HopfError::NoSolution(format!(
                "candidate image of generator {} does not respect its order {}",
                l, m
            )));
        }
    }
    Ok(GroupHom { domain: domain.clone(), codomain: support.clone(), images })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_to_invariant_factors() {
        assert_eq!(AbGroup::new(&[6, 4]).factors(), &[2, 12]);
        assert_eq!(AbGroup::new(&[3, 1, 2]).factors(), &[6]);
        assert_eq!(AbGroup::new(&[2, 2]).factors(), &[2, 2]);
        assert_eq!(AbGroup::new(&[4, 6, 5]).factors(), &[2, 60]);
        assert_eq!(AbGroup::new(&[1, 1]).factors(), &[] as &[u64]);
        assert_eq!(AbGroup::new(&[12]).factors(), &[12]);
    }

    #[test]
    fn embedding_is_an_isomorphism() {
        for orders in [vec![6, 4], vec![3, 3], vec![2, 6, 5], vec![8, 12, 18]] {
            let (g, images) = AbGroup::new_with_embedding(&orders);
            assert_eq!(g.order(), orders.iter().product::<u64>());
            for (im, &m) in images.iter().zip(&orders) {
                assert_eq!(im.order(), m, "generator order must be preserved");
            }
            let closure = subgroup_closure(&g, &images);
            assert_eq!(closure.len() as u64, g.order(), "images must generate");
        }
    }

    #[test]
    fn dual_generators_basics() {
        let z3 = AbGroup::new(&[3]);
        let d = dual_generators(&z3);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].eval(&z3.gen(0)).unwrap(), CycNum::root(3, 1));

        let v4 = AbGroup::new(&[2, 2]);
        let d = dual_generators(&v4);
        assert_eq!(d.len(), 2);
        let closure = character_closure(&v4, &d);
        assert_eq!(closure.len(), 4);

        let z33 = AbGroup::new(&[3, 3]);
        let d = dual_generators(&z33);
        assert!(d[0].eval(&z33.gen(1)).unwrap().is_one());
        assert_eq!(d[0].eval(&z33.gen(0)).unwrap(), CycNum::root(3, 1));
        assert!(d[1].eval(&z33.gen(0)).unwrap().is_one());
    }

    #[test]
    fn character_evaluation() {
        let z3 = AbGroup::new(&[3]);
        let eps = z3.trivial_character();
        for g in z3.elements() {
            assert!(eps.eval(&g).unwrap().is_one());
        }
        let chi = z3.character(&[1]);
        assert_eq!(chi.eval(&z3.elt(&[2])).unwrap(), CycNum::root(3, 2));

        // two-generator evaluation: chi(g)=omega, chi(h)=1 on Z_3 x Z_3
        let z33 = AbGroup::new(&[3, 3]);
        let chi = z33.character(&[1, 0]);
        assert_eq!(chi.eval(&z33.elt(&[1, 0])).unwrap(), CycNum::root(3, 1));
        assert!(chi.eval(&z33.elt(&[0, 1])).unwrap().is_one());
        assert_eq!(chi.eval(&z33.elt(&[2, 2])).unwrap(), CycNum::root(3, 2));
    }

    #[test]
    fn characters_evaluated_across_mismatched_parents_error() {
        let z3 = AbGroup::new(&[3]);
        let z4 = AbGroup::new(&[4]);
        let chi = z3.character(&[1]);
        assert!(matches!(chi.eval(&z4.gen(0)), Err(HopfError::ParentMismatch)));
    }

    #[test]
    fn character_from_values_roundtrip() {
        let g = AbGroup::new(&[2, 12]);
        let chi = g.character(&[1, 7]);
        let vals: Vec<CycNum> = (0..2).map(|l| chi.eval(&g.gen(l)).unwrap()).collect();
        let back = Character::from_values(&g, &vals).unwrap();
        assert_eq!(back, chi);
        // a non-root value is rejected
        assert!(Character::from_values(&g, &[CycNum::from_i64(2), CycNum::one()]).is_err());
    }

    #[test]
    fn standard_symplectic_beta_is_alternating_nondegenerate() {
        let t = AbGroup::new(&[3, 3]);
        let beta = Bicharacter::new(&t, vec![vec![0, 1], vec![-1, 0]]);
        let props = beta_props(&beta);
        assert!(props.alternating);
        assert!(props.nondegenerate);
        assert_eq!(props.kernel.len(), 1);
        assert_eq!(beta.eval(&t.gen(0), &t.gen(1)), CycNum::root(3, 1));
        assert_eq!(beta.eval(&t.gen(1), &t.gen(0)), CycNum::root(3, 2));
        // bimultiplicativity spot check on all pairs
        for a in t.elements() {
            for b in t.elements() {
                for c in t.elements() {
                    let lhs = beta.eval(&a.mul(&b), &c);
                    let rhs = beta.eval(&a, &c).mul(&beta.eval(&b, &c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn trivial_beta_is_degenerate_with_full_kernel() {
        let t = AbGroup::new(&[2, 2]);
        let beta = Bicharacter::trivial(&t);
        let props = beta_props(&beta);
        assert!(props.alternating);
        assert!(!props.nondegenerate);
        assert_eq!(props.kernel.len(), 4);
    }

    #[test]
    fn z2_z4_admits_no_nondegenerate_alternating_beta() {
        let t = AbGroup::new(&[2, 4]);
        // exhaust all exponent tables
        for t11 in 0..2i64 {
            for t12 in 0..2i64 {
                for t21 in 0..2i64 {
                    for t22 in 0..4i64 {
                        let beta =
                            Bicharacter::new(&t, vec![vec![t11, t12], vec![t21, t22]]);
                        let props = beta_props(&beta);
                        if props.alternating {
                            assert!(
                                !props.nondegenerate,
                                "no alternating bicharacter on Z2xZ4 can be nondegenerate"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn solve_f_dual_pair_fixture() {
        // Support Z_3 x Z_3 with beta(mu,nu)=omega^-1, beta(nu,mu)=omega.
        let t = AbGroup::new(&[3, 3]);
        let beta = Bicharacter::new(&t, vec![vec![0, -1], vec![1, 0]]);
        // Domain Z_3 x Z_3 with mu(g)=w, mu(h)=1, nu(g)=1, nu(h)=w.
        let domain = AbGroup::new(&[3, 3]);
        let w = CycNum::root(3, 1);
        let evals = vec![
            vec![w.clone(), CycNum::one()], // values for f(g): mu(g), nu(g)
            vec![CycNum::one(), w.clone()], // values for f(h): mu(h), nu(h)
        ];
        let f = solve_f(&beta, &domain, &evals).unwrap();
        // f(g) = nu, f(h) = mu^-1
        assert_eq!(f.images[0], t.elt(&[0, 1]));
        assert_eq!(f.images[1], t.elt(&[-1, 0]));
        // round-trip the defining property
        for (l, row) in evals.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(beta.eval(&f.images[l], &t.gen(j)), *v);
            }
        }
    }

    #[test]
    fn solve_f_trivial_values_give_identity() {
        let t = AbGroup::new(&[3, 3]);
        let beta = Bicharacter::new(&t, vec![vec![0, 1], vec![-1, 0]]);
        let domain = AbGroup::new(&[5]);
        let evals = vec![vec![CycNum::one(), CycNum::one()]];
        let f = solve_f(&beta, &domain, &evals).unwrap();
        assert!(f.images[0].is_identity());
    }

    #[test]
    fn solve_f_detects_unattained_values() {
        let t = AbGroup::new(&[3, 3]);
        let beta = Bicharacter::new(&t, vec![vec![0, 1], vec![-1, 0]]);
        let domain = AbGroup::new(&[4]);
        // No element can produce a 4th root of unity in a 3-group pairing.
        let evals = vec![vec![CycNum::root(4, 1), CycNum::one()]];
        assert!(matches!(
            solve_f(&beta, &domain, &evals),
            Err(HopfError::NoSolution(_))
        ));
    }

    #[test]
    fn solve_f_roundtrip_exhaustive_small() {
        // For the symplectic beta on Z_2 x Z_2, every homomorphism image set
        // is recovered from its evaluation table.
        let t = AbGroup::new(&[2, 2]);
        let beta = Bicharacter::new(&t, vec![vec![0, 1], vec![1, 0]]);
        assert!(beta_props(&beta).nondegenerate);
        let domain = AbGroup::new(&[2]);
        for target in t.elements() {
            let evals =
                vec![(0..2).map(|j| beta.eval(&target, &t.gen(j))).collect::<Vec<_>>()];
            let f = solve_f(&beta, &domain, &evals).unwrap();
            assert_eq!(f.images[0], target);
        }
    }

    #[test]
    fn subgroup_closure_and_hom_apply() {
        let g = AbGroup::new(&[4, 2]);
        let h = subgroup_closure(&g, &[g.elt(&[2, 0]), g.elt(&[0, 1])]);
        assert_eq!(h.len(), 4);
        let hom = GroupHom {
            domain: AbGroup::new(&[2]),
            codomain: g.clone(),
            images: vec![g.elt(&[2, 1])],
        };
        assert_eq!(hom.apply(&AbGroup::new(&[2]).elt(&[1])), g.elt(&[2, 1]));
        assert!(hom.apply(&AbGroup::new(&[2]).identity()).is_identity());
    }

    #[test]
    fn element_order_and_pow() {
        let g = AbGroup::new(&[2, 12]);
        assert_eq!(g.elt(&[1, 3]).order(), 4);
        assert_eq!(g.elt(&[0, 1]).order(), 12);
        assert_eq!(g.elt(&[1, 0]).order(), 2);
        assert_eq!(g.identity().order(), 1);
        assert_eq!(g.elt(&[1, 5]).pow(-1), g.elt(&[1, 7]));
        assert!(g.elt(&[1, 6]).pow(2).is_identity());
    }
}
