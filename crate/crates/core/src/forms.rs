//! Sparse mod-p linear forms, conditions `(φ, E)`, and separation checks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::fp::{compute_l, Alphabet, Modulus, TargetSet};

/// A linear form `Σ a_z x_z` over F_p with finitely many nonzero coefficients.
///
/// Coordinates are 0-based and unbounded; the ambient dimension is never
/// stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    p: Modulus,
    coeffs: BTreeMap<usize, u32>,
}

impl LinearForm {
    pub fn zero(p: Modulus) -> Self {
        LinearForm { p, coeffs: BTreeMap::new() }
    }

    /// The coordinate form `x_z`.
    pub fn coordinate(p: Modulus, z: usize) -> Self {
        Self::from_terms(p, [(z, 1)])
    }

    /// Builds a form from `(coordinate, coefficient)` pairs; repeated
    /// coordinates accumulate and zero coefficients are dropped.
    pub fn from_terms(p: Modulus, terms: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut form = Self::zero(p);
        for (z, c) in terms {
            form.add_term(z, p.reduce(c));
        }
        form
    }

    pub fn modulus(&self) -> Modulus {
        self.p
    }

    pub fn coeff(&self, z: usize) -> u32 {
        self.coeffs.get(&z).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.coeffs.iter().map(|(&z, &c)| (z, c))
    }

    /// `Z(φ)`.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn support_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, z: usize, c: u32) {
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(z).or_insert(0);
        *entry = self.p.add(*entry, c);
        if *entry == 0 {
            self.coeffs.remove(&z);
        }
    }

    pub fn scaled(&self, c: u32) -> LinearForm {
        let c = c % self.p.get();
        if c == 0 {
            return Self::zero(self.p);
        }
        LinearForm {
            p: self.p,
            coeffs: self.coeffs.iter().map(|(&z, &a)| (z, self.p.mul(a, c))).collect(),
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &LinearForm, c: u32) -> LinearForm {
        debug_assert_eq!(self.p, other.p);
        let mut out = self.clone();
        for (z, a) in other.terms() {
            out.add_term(z, self.p.mul(a, c));
        }
        out
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.add_scaled(other, self.p.get() - 1)
    }

    pub fn evaluate(&self, x: impl Fn(usize) -> u32) -> u32 {
        self.coeffs
            .iter()
            .fold(0, |acc, (&z, &c)| self.p.add(acc, self.p.mul(c, x(z) % self.p.get())))
    }

    /// Restriction to the coordinates for which `keep` holds.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> LinearForm {
        LinearForm {
            p: self.p,
            coeffs: self.coeffs.iter().filter(|(z, _)| keep(**z)).map(|(&z, &c)| (z, c)).collect(),
        }
    }

    pub fn support_disjoint(&self, other: &LinearForm) -> bool {
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.coeffs.keys().all(|z| !large.coeffs.contains_key(z))
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (z, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *c == 1 {
                write!(f, "x{z}")?;
            } else {
                write!(f, "{c}x{z}")?;
            }
        }
        Ok(())
    }
}

/// `a_1 φ_1 + … + a_k φ_k`.
pub fn combine(coeffs: &[u32], forms: &[LinearForm]) -> Result<LinearForm> {
    if coeffs.len() != forms.len() {
        return Err(Error::invalid(format!(
            "{} coefficients for {} forms",
            coeffs.len(),
            forms.len()
        )));
    }
    let Some(first) = forms.first() else {
        return Err(Error::invalid("combination of an empty family"));
    };
    let p = first.modulus();
    if forms.iter().any(|f| f.modulus() != p) {
        return Err(Error::invalid("forms use different moduli"));
    }
    Ok(coeffs
        .iter()
        .zip(forms)
        .fold(LinearForm::zero(p), |acc, (&a, f)| acc.add_scaled(f, a)))
}

/// Support distance `|Z(φ − ψ)|`.
pub fn distance(a: &LinearForm, b: &LinearForm) -> usize {
    let p = a.modulus();
    let mut n = 0;
    let mut ia = a.coeffs.iter().peekable();
    let mut ib = b.coeffs.iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => return n,
            (Some(_), None) => {
                ia.next();
                n += 1;
            }
            (None, Some(_)) => {
                ib.next();
                n += 1;
            }
            (Some((za, ca)), Some((zb, cb))) => {
                if za < zb {
                    ia.next();
                    n += 1;
                } else if zb < za {
                    ib.next();
                    n += 1;
                } else {
                    if p.sub(**ca, **cb) != 0 {
                        n += 1;
                    }
                    ia.next();
                    ib.next();
                }
            }
        }
    }
}

/// A single condition `φ(x) ∈ E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Condition {
    pub form: LinearForm,
    pub target: TargetSet,
}

impl Condition {
    pub fn new(form: LinearForm, target: TargetSet) -> Result<Self> {
        if form.modulus() != target.modulus() {
            return Err(Error::invalid("form and target use different moduli"));
        }
        Ok(Condition { form, target })
    }
}

/// An ordered conjunction of conditions over the cube `S^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionSystem {
    p: Modulus,
    alphabet: Alphabet,
    conditions: Vec<Condition>,
}

impl ConditionSystem {
    pub fn new(alphabet: Alphabet, conditions: Vec<Condition>) -> Result<Self> {
        let p = alphabet.modulus();
        if conditions.iter().any(|c| c.form.modulus() != p || c.target.modulus() != p) {
            return Err(Error::invalid("all conditions must use the alphabet's modulus"));
        }
        Ok(ConditionSystem { p, alphabet, conditions })
    }

    pub fn modulus(&self) -> Modulus {
        self.p
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn forms(&self) -> Vec<LinearForm> {
        self.conditions.iter().map(|c| c.form.clone()).collect()
    }

    /// `∪ Z(φ_i)`, sorted.
    pub fn coordinates(&self) -> Vec<usize> {
        let set: BTreeSet<usize> =
            self.conditions.iter().flat_map(|c| c.form.support_iter()).collect();
        set.into_iter().collect()
    }

    /// The subsystem formed by the listed condition indices, in that order.
    pub fn subsystem(&self, indices: &[usize]) -> ConditionSystem {
        ConditionSystem {
            p: self.p,
            alphabet: self.alphabet.clone(),
            conditions: indices.iter().map(|&i| self.conditions[i].clone()).collect(),
        }
    }

    pub fn with_condition(&self, extra: Condition) -> Result<ConditionSystem> {
        let mut conditions = self.conditions.clone();
        conditions.push(extra);
        ConditionSystem::new(self.alphabet.clone(), conditions)
    }

    /// `max_t L(S, E_t)`, or 0 for an empty system.
    pub fn l_max(&self) -> usize {
        let mut cache: HashMap<&TargetSet, usize> = HashMap::new();
        self.conditions
            .iter()
            .map(|c| *cache.entry(&c.target).or_insert_with(|| compute_l(&self.alphabet, &c.target).l))
            .max()
            .unwrap_or(0)
    }
}

pub fn support(form: &LinearForm) -> BTreeSet<usize> {
    form.support()
}

/// `min_{i<j} |Z(φ_i − φ_j)|`.
pub fn pairwise_min_distance(system: &ConditionSystem) -> Result<usize> {
    let forms = system.forms();
    min_pairwise_distance(&forms).ok_or_else(|| Error::invalid("pairwise distance needs at least two conditions"))
}

pub(crate) fn min_pairwise_distance(forms: &[LinearForm]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            let d = distance(&forms[i], &forms[j]);
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best
}

/// `p^m` as u128, saturating.
pub(crate) fn pow_sat(p: u32, m: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..m {
        acc = acc.saturating_mul(p as u128);
    }
    acc
}

/// Number of projective coefficient vectors, `(p^k − 1)/(p − 1)`, saturating.
pub(crate) fn projective_count(p: u32, k: usize) -> u128 {
    let full = pow_sat(p, k);
    if full == u128::MAX {
        return u128::MAX;
    }
    (full - 1) / (p as u128 - 1)
}

/// Enumerates `base + Σ a_i columns_i` for every `a ∈ F_p^m` in lexicographic
/// order (first coordinate most significant), reporting each support size.
/// Maintains per-coordinate partial sums so that each step only touches the
/// columns whose digit changed.
pub(crate) fn walk_combinations(
    p: Modulus,
    base: Option<&LinearForm>,
    columns: &[LinearForm],
    mut visit: impl FnMut(&[u32], usize) -> ControlFlow<()>,
) {
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut sums: Vec<u32> = Vec::new();
    let mut slot = |z: usize, sums: &mut Vec<u32>| -> usize {
        *index.entry(z).or_insert_with(|| {
            sums.push(0);
            sums.len() - 1
        })
    };
    if let Some(b) = base {
        for (z, c) in b.terms() {
            let s = slot(z, &mut sums);
            sums[s] = c;
        }
    }
    let cols: Vec<Vec<(usize, u32)>> = columns
        .iter()
        .map(|f| f.terms().map(|(z, c)| (slot(z, &mut sums), c)).collect())
        .collect();
    let mut nonzero = sums.iter().filter(|&&v| v != 0).count();
    let m = columns.len();
    let mut digits = vec![0u32; m];
    loop {
        if visit(&digits, nonzero).is_break() {
            return;
        }
        // odometer increment from the least significant (last) digit
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            for &(s, c) in &cols[i] {
                let before = sums[s];
                let after = p.add(before, c);
                sums[s] = after;
                match (before == 0, after == 0) {
                    (true, false) => nonzero += 1,
                    (false, true) => nonzero -= 1,
                    _ => {}
                }
            }
            digits[i] += 1;
            if digits[i] < p.get() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Exact separation of a family: the minimum support size over all nonzero
/// combinations, enumerated projectively (leading nonzero coefficient 1).
pub fn separation(forms: &[LinearForm], enumeration_cap: u128) -> Result<usize> {
    let Some(first) = forms.first() else {
        return Err(Error::invalid("separation of an empty family"));
    };
    let p = first.modulus();
    if forms.iter().any(|f| f.modulus() != p) {
        return Err(Error::invalid("forms use different moduli"));
    }
    let needed = projective_count(p.get(), forms.len());
    if needed > enumeration_cap {
        return Err(Error::EnumerationTooLarge { needed, cap: enumeration_cap });
    }
    let mut best = usize::MAX;
    for lead in 0..forms.len() {
        walk_combinations(p, Some(&forms[lead]), &forms[lead + 1..], |_, size| {
            best = best.min(size);
            if best == 0 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionReport {
    pub holds: bool,
    /// `2·Lmax − 1`, saturating at 0 when `Lmax = 0`.
    pub threshold: usize,
    pub l_max: usize,
    /// `None` when the system has fewer than two conditions.
    pub min_distance: Option<usize>,
}

/// Checks that every pair of forms is at support distance at least
/// `2·max_t L(S, E_t) − 1`.
pub fn meets_main_assumption(system: &ConditionSystem) -> AssumptionReport {
    let l_max = system.l_max();
    let threshold = (2 * l_max).saturating_sub(1);
    let min_distance = min_pairwise_distance(&system.forms());
    let holds = min_distance.is_none_or(|d| d >= threshold);
    AssumptionReport { holds, threshold, l_max, min_distance }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Modulus {
        Modulus::new(3).unwrap()
    }

    fn f(p: Modulus, terms: &[(usize, i64)]) -> LinearForm {
        LinearForm::from_terms(p, terms.iter().copied())
    }

    #[test]
    fn support_examples() {
        let p = p3();
        assert_eq!(support(&f(p, &[(0, 1), (3, 2)])), BTreeSet::from([0, 3]));
        assert!(support(&LinearForm::zero(p)).is_empty());
        let phi = f(p, &[(1, 1), (2, 1)]);
        assert!(phi.sub(&phi).is_zero());
    }

    #[test]
    fn combine_examples() {
        let p = p3();
        let a = f(p, &[(0, 1), (1, 1)]);
        let b = f(p, &[(0, 1), (2, 1)]);
        assert_eq!(combine(&[1, 2], &[a.clone(), b.clone()]).unwrap(), f(p, &[(1, 1), (2, 2)]));
        assert!(combine(&[0, 0], &[a.clone(), b]).unwrap().is_zero());
        assert_eq!(combine(&[1], std::slice::from_ref(&a)).unwrap(), a);
        assert!(matches!(combine(&[1, 1], &[a]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn distance_examples() {
        let p = p3();
        let a = f(p, &[(0, 1), (1, 1)]);
        let b = f(p, &[(0, 1), (2, 1)]);
        assert_eq!(distance(&a, &b), 2);
        assert_eq!(distance(&a, &a), 0);
        let c = f(p, &[(5, 1), (6, 2), (7, 1)]);
        assert_eq!(distance(&a, &c), 5);
    }

    fn system(p: Modulus, forms: Vec<LinearForm>, target: &[u32]) -> ConditionSystem {
        let e = TargetSet::new(p, target.iter().copied()).unwrap();
        ConditionSystem::new(
            Alphabet::boolean(p),
            forms.into_iter().map(|form| Condition::new(form, e.clone()).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn pairwise_examples() {
        let p = p3();
        let s = system(p, vec![f(p, &[(0, 1)]), f(p, &[(1, 1)]), f(p, &[(0, 1), (1, 1)])], &[0]);
        // x_0 − (x_0 + x_1) = −x_1
        assert_eq!(pairwise_min_distance(&s).unwrap(), 1);
        let s = system(
            p,
            vec![f(p, &[(0, 1), (1, 1)]), f(p, &[(0, 1), (2, 1)]), f(p, &[(1, 1), (2, 1)])],
            &[0],
        );
        assert_eq!(pairwise_min_distance(&s).unwrap(), 2);
        let dup = system(p, vec![f(p, &[(0, 1)]), f(p, &[(0, 1)])], &[0]);
        assert_eq!(pairwise_min_distance(&dup).unwrap(), 0);
        let single = system(p, vec![f(p, &[(0, 1)])], &[0]);
        assert!(pairwise_min_distance(&single).is_err());
    }

    #[test]
    fn separation_examples() {
        let p = p3();
        let pair = [f(p, &[(0, 1), (1, 1)]), f(p, &[(0, 1), (2, 1)])];
        assert_eq!(separation(&pair, 1 << 20).unwrap(), 2);
        assert_eq!(separation(&[LinearForm::zero(p)], 1 << 20).unwrap(), 0);
        let coords: Vec<_> = (0..5).map(|z| LinearForm::coordinate(p, z)).collect();
        assert_eq!(separation(&coords, 1 << 20).unwrap(), 1);
        assert!(matches!(
            separation(&coords, 10),
            Err(Error::EnumerationTooLarge { needed: 121, cap: 10 })
        ));
    }

    #[test]
    fn walker_visits_in_lexicographic_order() {
        let p = p3();
        let cols = [f(p, &[(0, 1)]), f(p, &[(1, 1)])];
        let mut seen = Vec::new();
        walk_combinations(p, None, &cols, |a, size| {
            seen.push((a.to_vec(), size));
            ControlFlow::Continue(())
        });
        assert_eq!(seen.len(), 9);
        assert_eq!(seen[0], (vec![0, 0], 0));
        assert_eq!(seen[1], (vec![0, 1], 1));
        assert_eq!(seen[4], (vec![1, 1], 2));
        assert_eq!(seen[8], (vec![2, 2], 2));
    }

    #[test]
    fn assumption_single_condition_holds() {
        let p = p3();
        let s = system(p, vec![f(p, &[(0, 1)])], &[0]);
        let rep = meets_main_assumption(&s);
        assert!(rep.holds);
        assert_eq!(rep.min_distance, None);
        assert_eq!((rep.l_max, rep.threshold), (1, 1));
    }
}
