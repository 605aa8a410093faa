//! Density-bound certificates.
//!
//! Given a condition system, [`certify_density_bound`] either finds a large
//! separated subfamily (whose joint distribution is close to uniform, so the
//! conjunction of its conditions is rare), or partitions the forms into
//! balls around combinations of a maximal separated subfamily, takes the
//! largest ball, extracts a sunflower from it, and bounds the density by
//! the sunflower estimate `p·(1 − β)^t`. Every certificate can be re-checked
//! from scratch by [`verify_certificate`].

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::density::{satisfying_density, to_f64};
use crate::error::{Error, Result};
use crate::forms::{
    meets_main_assumption, pow_sat, separation, walk_combinations, AssumptionReport,
    ConditionSystem, LinearForm,
};
use crate::fourier::{decay_exact, FLOAT_TOLERANCE};
use crate::fp::{beta, compute_translated_l, Alphabet, Modulus};

/// A sunflower `center + petals[i]` over the conditions `member_indices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunflowerCertificate {
    pub center: LinearForm,
    pub member_indices: Vec<usize>,
    /// `φ_i − center` for each member, in member order.
    pub petals: Vec<LinearForm>,
    pub min_petal_support: usize,
}

impl SunflowerCertificate {
    /// Builds the certificate for `members` around `center`.
    pub fn around(system: &ConditionSystem, center: LinearForm, members: Vec<usize>) -> Self {
        let petals: Vec<LinearForm> =
            members.iter().map(|&i| system.conditions()[i].form.sub(&center)).collect();
        let min_petal_support = petals.iter().map(LinearForm::support_size).min().unwrap_or(0);
        SunflowerCertificate { center, member_indices: members, petals, min_petal_support }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquidistributionCertificate {
    pub member_indices: Vec<usize>,
    /// Verified separation lower bound of the member forms.
    pub r: usize,
    /// `p^{−|I|} + (1 − p^{−2})^r`.
    pub per_tuple_bound: f64,
    /// `Π_{i∈I} |E_i| · per_tuple_bound`.
    pub density_bound: f64,
    pub density_bound_exact: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Equidistribution(EquidistributionCertificate),
    Sunflower {
        certificate: SunflowerCertificate,
        petal_count: usize,
        bound: f64,
        bound_exact: BigRational,
    },
    /// Nothing better than the trivial bound 1 could be certified.
    Trivial,
}

impl Certificate {
    pub fn bound(&self) -> f64 {
        match self {
            Certificate::Equidistribution(c) => c.density_bound,
            Certificate::Sunflower { bound, .. } => *bound,
            Certificate::Trivial => 1.0,
        }
    }

    pub fn bound_exact(&self) -> BigRational {
        match self {
            Certificate::Equidistribution(c) => c.density_bound_exact.clone(),
            Certificate::Sunflower { bound_exact, .. } => bound_exact.clone(),
            Certificate::Trivial => BigRational::one(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Equidistribution(_) => "equidistribution",
            Certificate::Sunflower { .. } => "sunflower",
            Certificate::Trivial => "trivial",
        }
    }
}

/// `p · (1 − β(p, S))^t`, exactly.
pub fn sunflower_bound_exact(alphabet: &Alphabet, t: usize) -> BigRational {
    let p = alphabet.modulus();
    let b = beta(p, alphabet).expect("alphabet has at least two members");
    BigRational::from_integer(BigInt::from(p.get())) * Pow::pow(BigRational::one() - b, t)
}

/// `Π |E_i| · (p^{−|I|} + (1 − p^{−2})^r)`, exactly.
pub fn equidistribution_bound_exact(system: &ConditionSystem, members: &[usize], r: usize) -> BigRational {
    let p = system.modulus();
    let sizes: BigInt = members
        .iter()
        .map(|&i| BigInt::from(system.conditions()[i].target.len()))
        .product();
    let uniform = BigRational::new(BigInt::one(), Pow::pow(BigInt::from(p.get()), members.len()));
    BigRational::from_integer(sizes) * (uniform + decay_exact(p, r))
}

fn per_tuple_bound(p: Modulus, u: usize, r: usize) -> f64 {
    let uniform = BigRational::new(BigInt::one(), Pow::pow(BigInt::from(p.get()), u));
    to_f64(&(uniform + decay_exact(p, r)))
}

/// Largest per-member escape length (under translation) of the listed
/// conditions.
fn member_escape_lengths(system: &ConditionSystem, members: &[usize]) -> Vec<usize> {
    let mut cache: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    members
        .iter()
        .map(|&i| {
            let target = &system.conditions()[i].target;
            *cache
                .entry(target.members())
                .or_insert_with(|| compute_translated_l(system.alphabet(), target).l)
        })
        .collect()
}

/// Density bound `p·(1 − β)^{|members|}` for the conjunction of the member
/// conditions, valid when every petal reaches the members' escape length.
pub fn sunflower_density_bound(cert: &SunflowerCertificate, system: &ConditionSystem) -> Result<f64> {
    Ok(to_f64(&sunflower_density_bound_exact(cert, system)?))
}

pub fn sunflower_density_bound_exact(
    cert: &SunflowerCertificate,
    system: &ConditionSystem,
) -> Result<BigRational> {
    if cert.member_indices.iter().any(|&i| i >= system.len()) {
        return Err(Error::invalid("member index out of range"));
    }
    let required = member_escape_lengths(system, &cert.member_indices).into_iter().max().unwrap_or(0);
    if !cert.member_indices.is_empty() && cert.min_petal_support < required {
        return Err(Error::PetalTooSmall { support: cert.min_petal_support, required });
    }
    Ok(sunflower_bound_exact(system.alphabet(), cert.member_indices.len()))
}

/// A sunflower found among petal forms: subtracting `offset` from each
/// selected petal leaves pairwise disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunflowerExtraction {
    pub offset: LinearForm,
    pub indices: Vec<usize>,
    /// `k ≥ p^r · r! · t^r`, so at least `t` petals are guaranteed.
    pub guaranteed: bool,
}

impl SunflowerExtraction {
    pub fn best_effort(&self) -> bool {
        !self.guaranteed
    }
}

/// `p^r · r! · t^r`, saturating.
pub fn extraction_threshold(p: Modulus, r: usize, t: usize) -> u128 {
    let factorial = (1..=r as u128).fold(1u128, |acc, i| acc.saturating_mul(i));
    pow_sat(p.get(), r)
        .saturating_mul(factorial)
        .saturating_mul(pow_sat(t.min(u32::MAX as usize) as u32, r))
}

/// Finds a sunflower among `petals` (each of support size at most `r`).
///
/// Takes a maximal family `M` of pairwise disjoint petals in index order;
/// if `|M| ≥ t` it is returned with offset 0. Otherwise the most frequent
/// (coordinate, coefficient) pair on `∪ Z(M)` is stripped from the petals
/// carrying it and the search recurses with radius `r − 1`, adding the
/// stripped term to the offset. When `k` is below the threshold
/// `p^r·r!·t^r` the result is the larger of `M` and the recursive result,
/// and may have fewer than `t` petals.
pub fn extract_sunflower(p: Modulus, petals: &[LinearForm], r: usize, t: usize) -> Result<SunflowerExtraction> {
    if let Some(f) = petals.iter().find(|f| f.support_size() > r) {
        return Err(Error::invalid(format!("petal {f} has support larger than {r}")));
    }
    if petals.iter().any(|f| f.modulus() != p) {
        return Err(Error::invalid("petals use a different modulus"));
    }
    let indexed: Vec<(usize, LinearForm)> = petals.iter().cloned().enumerate().collect();
    let (offset, mut indices) = extract_rec(p, &indexed, r, t);
    indices.sort_unstable();
    Ok(SunflowerExtraction {
        offset,
        indices,
        guaranteed: petals.len() as u128 >= extraction_threshold(p, r, t),
    })
}

fn extract_rec(p: Modulus, petals: &[(usize, LinearForm)], r: usize, t: usize) -> (LinearForm, Vec<usize>) {
    if r == 0 || petals.iter().all(|(_, f)| f.is_zero()) {
        return (LinearForm::zero(p), petals.iter().map(|(i, _)| *i).collect());
    }
    let mut disjoint: Vec<&(usize, LinearForm)> = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    for entry in petals {
        if entry.1.support_iter().all(|z| !used.contains(&z)) {
            used.extend(entry.1.support_iter());
            disjoint.push(entry);
        }
    }
    let maximal: Vec<usize> = disjoint.iter().map(|(i, _)| *i).collect();
    if maximal.len() >= t {
        return (LinearForm::zero(p), maximal);
    }
    let mut counts: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    for (_, f) in petals {
        for (z, c) in f.terms() {
            if used.contains(&z) {
                *counts.entry((z, c)).or_insert(0) += 1;
            }
        }
    }
    // most frequent pair, smallest (z, c) on ties
    let Some((&(z, c), _)) = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))) else {
        return (LinearForm::zero(p), maximal);
    };
    let stripped = LinearForm::from_terms(p, [(z, c as i64)]);
    let bucket: Vec<(usize, LinearForm)> = petals
        .iter()
        .filter(|(_, f)| f.coeff(z) == c)
        .map(|(i, f)| (*i, f.sub(&stripped)))
        .collect();
    let (inner_offset, inner) = extract_rec(p, &bucket, r - 1, t);
    if inner.len() >= maximal.len() {
        (inner_offset.add(&stripped), inner)
    } else {
        (LinearForm::zero(p), maximal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GreedyOutcome {
    /// `u` forms whose every nonzero combination has support at least `r`.
    Separated(Vec<usize>),
    /// A maximal such family, plus for every other form the
    /// lexicographically smallest `a` with `|Z(φ_j − Σ a_i φ_{I_i})| ≤ r − 1`.
    Maximal { members: Vec<usize>, assignment: BTreeMap<usize, Vec<u32>> },
}

/// Scans the forms in index order, adding `φ_j` whenever
/// `|Z(φ_j − Σ_{i∈I} a_i φ_i)| ≥ r` for every `a ∈ F_p^I`. Stops as soon as
/// `u` forms are collected.
pub fn greedy_separated_subfamily(
    forms: &[LinearForm],
    r: usize,
    u: usize,
    enumeration_cap: u128,
) -> Result<GreedyOutcome> {
    let mut members: Vec<usize> = Vec::new();
    if u == 0 {
        return Ok(GreedyOutcome::Separated(members));
    }
    let Some(first) = forms.first() else {
        return Ok(GreedyOutcome::Maximal { members, assignment: BTreeMap::new() });
    };
    let p = first.modulus();
    let mut negated: Vec<LinearForm> = Vec::new();
    for (j, form) in forms.iter().enumerate() {
        let needed = pow_sat(p.get(), members.len());
        if needed > enumeration_cap {
            return Err(Error::EnumerationTooLarge { needed, cap: enumeration_cap });
        }
        if close_combination(p, form, &negated, r).is_none() {
            members.push(j);
            negated.push(form.scaled(p.get() - 1));
            if members.len() == u {
                return Ok(GreedyOutcome::Separated(members));
            }
        }
    }
    let assignment = (0..forms.len())
        .filter(|j| !members.contains(j))
        .map(|j| {
            let a = close_combination(p, &forms[j], &negated, r)
                .expect("a rejected form stays close to the final family");
            (j, a)
        })
        .collect();
    Ok(GreedyOutcome::Maximal { members, assignment })
}

/// Lexicographically smallest `a` with `|Z(form + Σ a_i columns_i)| < r`.
fn close_combination(p: Modulus, form: &LinearForm, columns: &[LinearForm], r: usize) -> Option<Vec<u32>> {
    let mut found = None;
    walk_combinations(p, Some(form), columns, |a, size| {
        if size < r {
            found = Some(a.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

/// `Σ a_i φ_{members_i}`.
pub fn bucket_center(forms: &[LinearForm], members: &[usize], a: &[u32]) -> LinearForm {
    let p = forms[0].modulus();
    members
        .iter()
        .zip(a)
        .fold(LinearForm::zero(p), |acc, (&i, &c)| acc.add_scaled(&forms[i], c))
}

/// Groups forms by their assigned coefficient vector; members of the
/// separated family get their own unit vector.
pub fn ball_cover(
    forms: &[LinearForm],
    members: &[usize],
    assignment: &BTreeMap<usize, Vec<u32>>,
) -> Result<BTreeMap<Vec<u32>, Vec<usize>>> {
    let mut buckets: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for j in 0..forms.len() {
        let key = if let Some(pos) = members.iter().position(|&m| m == j) {
            let mut e = vec![0; members.len()];
            e[pos] = 1;
            e
        } else {
            assignment
                .get(&j)
                .cloned()
                .ok_or_else(|| Error::invalid(format!("form {j} has no assignment")))?
        };
        if key.len() != members.len() {
            return Err(Error::invalid(format!("assignment of form {j} has the wrong length")));
        }
        buckets.entry(key).or_default().push(j);
    }
    Ok(buckets)
}

/// `p · (1 − β)^{(k / (p^r r!))^{1/r}}`.
pub fn balls_density_bound(k: usize, r: usize, alphabet: &Alphabet) -> Result<f64> {
    if k == 0 || r == 0 {
        return Err(Error::invalid("balls bound needs k >= 1 and r >= 1"));
    }
    let p = alphabet.modulus();
    let b = to_f64(&beta(p, alphabet)?);
    let factorial: f64 = (1..=r).map(|i| i as f64).product();
    let exponent = (k as f64 / ((p.get() as f64).powi(r as i32) * factorial)).powf(1.0 / r as f64);
    Ok(p.get() as f64 * (1.0 - b).powf(exponent))
}

/// Sizes `u` of the separated subfamily and `r` of the separation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parameters {
    pub u: usize,
    pub r: usize,
}

impl Parameters {
    /// `u = ⌈p ln(2/ε)⌉`, `r = ⌈5 p^4 ln(2/ε)⌉`.
    pub fn from_epsilon(p: Modulus, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 2.0) {
            return Err(Error::invalid("epsilon must lie in (0, 2)"));
        }
        let p = p.get() as f64;
        let log = (2.0 / epsilon).ln();
        Ok(Parameters { u: (p * log).ceil() as usize, r: (5.0 * p.powi(4) * log).ceil() as usize })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// A separated subfamily of size `u` was found.
    Separated,
    /// Reduced to the largest ball and a sunflower inside it.
    Ball,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityBoundReport {
    pub case: Case,
    pub certificate: Certificate,
    pub bound: f64,
    pub bound_exact: BigRational,
    pub parameters: Parameters,
    pub exact_density: Option<BigRational>,
    /// Ball members removed because their petal was below the escape length.
    pub dropped: Vec<usize>,
    pub assumption: AssumptionReport,
    /// Size of the largest ball (Case B only).
    pub ball_size: Option<usize>,
    /// Whether the sunflower size was guaranteed by the extraction threshold.
    pub extraction_guaranteed: Option<bool>,
}

/// Runs the separated-subfamily / ball dichotomy and returns a certificate
/// with its recomputed bound; attaches the exact density when the exact
/// engine fits in `budget`.
pub fn certify_density_bound(
    system: &ConditionSystem,
    parameters: Parameters,
    budget: u128,
    enumeration_cap: u128,
) -> Result<DensityBoundReport> {
    let Parameters { u, r } = parameters;
    let forms = system.forms();
    let assumption = meets_main_assumption(system);
    let exact_density = match satisfying_density(system, budget) {
        Ok(d) => Some(d),
        Err(Error::ExactEngineTooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let finish = |case, certificate: Certificate, dropped, ball_size, guaranteed| {
        let bound_exact = certificate.bound_exact();
        DensityBoundReport {
            case,
            bound: to_f64(&bound_exact),
            bound_exact,
            certificate,
            parameters,
            exact_density: exact_density.clone(),
            dropped,
            assumption: assumption.clone(),
            ball_size,
            extraction_guaranteed: guaranteed,
        }
    };

    let (members, assignment) = match greedy_separated_subfamily(&forms, r, u, enumeration_cap)? {
        GreedyOutcome::Separated(members) => {
            let bound_exact = equidistribution_bound_exact(system, &members, r);
            let cert = EquidistributionCertificate {
                per_tuple_bound: per_tuple_bound(system.modulus(), members.len(), r),
                density_bound: to_f64(&bound_exact),
                density_bound_exact: bound_exact,
                member_indices: members,
                r,
            };
            return Ok(finish(Case::Separated, Certificate::Equidistribution(cert), Vec::new(), None, None));
        }
        GreedyOutcome::Maximal { members, assignment } => (members, assignment),
    };
    if forms.is_empty() {
        return Ok(finish(Case::Ball, Certificate::Trivial, Vec::new(), Some(0), None));
    }

    let buckets = ball_cover(&forms, &members, &assignment)?;
    // largest bucket; BTreeMap order makes the smallest key win ties
    let (key, ball) = buckets
        .iter()
        .fold(None::<(&Vec<u32>, &Vec<usize>)>, |best, (k, v)| match best {
            Some((_, bv)) if bv.len() >= v.len() => best,
            _ => Some((k, v)),
        })
        .expect("at least one bucket");
    let center = bucket_center(&forms, &members, key);
    let escape: BTreeMap<usize, usize> =
        ball.iter().copied().zip(member_escape_lengths(system, ball)).collect();

    let mut dropped = Vec::new();
    let mut kept = Vec::new();
    for &j in ball {
        if forms[j].sub(&center).support_size() < escape[&j] {
            dropped.push(j);
        } else {
            kept.push(j);
        }
    }
    let petals: Vec<LinearForm> = kept.iter().map(|&j| forms[j].sub(&center)).collect();
    let radius = petals.iter().map(LinearForm::support_size).max().unwrap_or(0);
    let extraction = extract_sunflower(system.modulus(), &petals, radius, petals.len().max(1))?;
    let guaranteed_t = guaranteed_sunflower_size(system.modulus(), petals.len(), radius);
    let sunflower_center = center.add(&extraction.offset);
    // every surviving petal must reach the largest escape length among the
    // survivors, so pick the common level that keeps the most members
    let sized: Vec<(usize, usize, usize)> = extraction
        .indices
        .iter()
        .map(|&pos| {
            let j = kept[pos];
            (j, escape[&j], forms[j].sub(&sunflower_center).support_size())
        })
        .collect();
    let keeps = |level: usize| sized.iter().filter(move |&&(_, e, s)| e <= level && level <= s);
    let level = sized
        .iter()
        .map(|&(_, e, _)| e)
        .fold(None::<(usize, usize)>, |best, level| {
            let n = keeps(level).count();
            match best {
                Some((bl, bn)) if bn > n || (bn == n && bl <= level) => best,
                _ => Some((level, n)),
            }
        })
        .map_or(0, |(level, _)| level);
    let survivors: Vec<usize> = keeps(level).map(|&(j, _, _)| j).collect();
    dropped.extend(sized.iter().map(|&(j, _, _)| j).filter(|j| !survivors.contains(j)));
    dropped.sort_unstable();
    let guaranteed = Some(extraction.indices.len() >= guaranteed_t);
    if survivors.is_empty() {
        return Ok(finish(Case::Ball, Certificate::Trivial, dropped, Some(ball.len()), guaranteed));
    }
    let certificate = SunflowerCertificate::around(system, sunflower_center, survivors);
    let bound_exact = sunflower_density_bound_exact(&certificate, system)?;
    let cert = Certificate::Sunflower {
        petal_count: certificate.member_indices.len(),
        bound: to_f64(&bound_exact),
        bound_exact,
        certificate,
    };
    Ok(finish(Case::Ball, cert, dropped, Some(ball.len()), guaranteed))
}

/// Largest `t` with `k ≥ p^r · r! · t^r` (0 if none; `k` itself when `r = 0`).
pub fn guaranteed_sunflower_size(p: Modulus, k: usize, r: usize) -> usize {
    if r == 0 {
        return k;
    }
    let mut t = 0;
    while extraction_threshold(p, r, t + 1) <= k as u128 {
        t += 1;
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub valid: bool,
    pub reasons: Vec<String>,
}

/// Re-checks a certificate against a system from first principles.
pub fn verify_certificate(cert: &Certificate, system: &ConditionSystem, enumeration_cap: u128) -> Verification {
    let mut reasons = Vec::new();
    match cert {
        Certificate::Trivial => {}
        Certificate::Equidistribution(c) => {
            if check_members(&c.member_indices, system, &mut reasons) && !c.member_indices.is_empty() {
                let forms: Vec<LinearForm> =
                    c.member_indices.iter().map(|&i| system.conditions()[i].form.clone()).collect();
                match separation(&forms, enumeration_cap) {
                    Ok(s) if s >= c.r => {}
                    Ok(s) => reasons.push(format!("separation {s} is below r = {}", c.r)),
                    Err(e) => reasons.push(format!("separation not checkable: {e}")),
                }
            }
            if reasons.is_empty() {
                let exact = equidistribution_bound_exact(system, &c.member_indices, c.r);
                let per_tuple = per_tuple_bound(system.modulus(), c.member_indices.len(), c.r);
                if exact != c.density_bound_exact
                    || (to_f64(&exact) - c.density_bound).abs() > FLOAT_TOLERANCE
                    || (per_tuple - c.per_tuple_bound).abs() > FLOAT_TOLERANCE
                {
                    reasons.push("bound mismatch".into());
                }
            }
        }
        Certificate::Sunflower { certificate: c, petal_count, bound, bound_exact } => {
            if check_members(&c.member_indices, system, &mut reasons) {
                if c.petals.len() != c.member_indices.len() {
                    reasons.push("petal identity: petal count differs from member count".into());
                } else {
                    for (&i, petal) in c.member_indices.iter().zip(&c.petals) {
                        if system.conditions()[i].form.sub(&c.center) != *petal {
                            reasons.push(format!("petal identity: member {i}"));
                        }
                    }
                }
                for a in 0..c.petals.len() {
                    for b in a + 1..c.petals.len() {
                        if !c.petals[a].support_disjoint(&c.petals[b]) {
                            reasons.push(format!("disjointness: petals {a} and {b} overlap"));
                        }
                    }
                }
                let escape = member_escape_lengths(system, &c.member_indices);
                for ((&i, petal), l) in c.member_indices.iter().zip(&c.petals).zip(escape) {
                    if petal.support_size() < l {
                        reasons.push(format!("petal support: member {i} has {} < {l}", petal.support_size()));
                    }
                }
                let min = c.petals.iter().map(LinearForm::support_size).min().unwrap_or(0);
                if min != c.min_petal_support {
                    reasons.push("min petal support mismatch".into());
                }
            }
            if *petal_count != c.member_indices.len() {
                reasons.push("petal count mismatch".into());
            }
            let expected = sunflower_bound_exact(system.alphabet(), c.member_indices.len());
            if expected != *bound_exact || (to_f64(&expected) - bound).abs() > FLOAT_TOLERANCE {
                reasons.push("bound mismatch".into());
            }
        }
    }
    Verification { valid: reasons.is_empty(), reasons }
}

fn check_members(members: &[usize], system: &ConditionSystem, reasons: &mut Vec<String>) -> bool {
    let before = reasons.len();
    let mut seen = std::collections::BTreeSet::new();
    for &i in members {
        if i >= system.len() {
            reasons.push(format!("member index {i} out of range"));
        } else if !seen.insert(i) {
            reasons.push(format!("duplicate member {i}"));
        }
    }
    reasons.len() == before
}

/// Exact density of the member subsystem of a sunflower certificate.
pub fn member_density(cert: &SunflowerCertificate, system: &ConditionSystem, budget: u128) -> Result<BigRational> {
    if cert.member_indices.is_empty() {
        return Ok(BigRational::one());
    }
    satisfying_density(&system.subsystem(&cert.member_indices), budget)
}

impl DensityBoundReport {
    /// `exact_density ≤ bound`, when the exact density is known.
    pub fn dominates(&self) -> Option<bool> {
        self.exact_density.as_ref().map(|d| *d <= self.bound_exact)
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.certificate, Certificate::Trivial) || self.bound_exact >= BigRational::one()
    }
}
