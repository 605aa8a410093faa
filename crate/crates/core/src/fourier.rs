//! Character sums for tuples of forms on `S^n`.
//!
//! For forms `φ_1..φ_k`, a value vector `y` and a coefficient vector `a`,
//!
//! ```text
//! F(a) = ω^{−a·y} · Π_z E_{s∈S} ω^{(Σ_i a_i φ_{i,z}) s}
//! ```
//!
//! normalised so that `P(φ = y) = E_{a∈F_p^k} F(a)`; in particular
//! `F(0) = 1` and its weight in the average is `p^{−k}`.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Pow, Signed};

use crate::density::{satisfying_density, to_f64};
use crate::error::{Error, Result};
use crate::forms::{combine, pow_sat, separation, walk_combinations, Condition, ConditionSystem, LinearForm};
use crate::fp::{char_mean, root_of_unity, Alphabet, Modulus, TargetSet};

/// Float-side slack for comparisons against exact quantities.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

fn check_family(forms: &[LinearForm], alphabet: &Alphabet) -> Result<Modulus> {
    let p = alphabet.modulus();
    if forms.iter().any(|f| f.modulus() != p) {
        return Err(Error::invalid("forms and alphabet use different moduli"));
    }
    Ok(p)
}

/// `F(a)` for the given forms, values and coefficients.
pub fn fourier_coefficient(
    forms: &[LinearForm],
    y: &[u32],
    a: &[u32],
    alphabet: &Alphabet,
) -> Result<Complex64> {
    let p = check_family(forms, alphabet)?;
    if y.len() != forms.len() || a.len() != forms.len() {
        return Err(Error::invalid("forms, values and coefficients must have equal length"));
    }
    if forms.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let phase = a.iter().zip(y).fold(0u32, |acc, (&ai, &yi)| p.add(acc, p.mul(ai, yi)));
    let combined = combine(a, forms)?;
    Ok(combined
        .terms()
        .fold(root_of_unity(p, p.neg(phase)), |acc, (_, c)| acc * char_mean(alphabet, c)))
}

/// `E_{a∈F_p^k} F(a)`, summed in lexicographic order of `a` with a
/// fixed-shape pairwise reduction.
pub fn fourier_average(
    forms: &[LinearForm],
    y: &[u32],
    alphabet: &Alphabet,
    enumeration_cap: u128,
) -> Result<Complex64> {
    let p = check_family(forms, alphabet)?;
    if y.len() != forms.len() {
        return Err(Error::invalid("forms and values must have equal length"));
    }
    let needed = pow_sat(p.get(), forms.len());
    if needed > enumeration_cap {
        return Err(Error::EnumerationTooLarge { needed, cap: enumeration_cap });
    }
    let mut terms = Vec::with_capacity(needed as usize);
    let mut failure = None;
    walk_combinations(p, None, forms, |a, _| match fourier_coefficient(forms, y, a, alphabet) {
        Ok(v) => {
            terms.push(v);
            ControlFlow::Continue(())
        }
        Err(e) => {
            failure = Some(e);
            ControlFlow::Break(())
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(pairwise_sum(&terms) / needed as f64)
}

fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n => {
            let (l, r) = values.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

/// `(1 − p^{−2})^m` exactly.
pub fn decay_exact(p: Modulus, m: usize) -> BigRational {
    let p2 = BigInt::from(p.get()) * BigInt::from(p.get());
    let base = BigRational::new(p2.clone() - 1, p2);
    Pow::pow(base, m)
}

pub fn decay(p: Modulus, m: usize) -> f64 {
    let p = p.get() as f64;
    (1.0 - 1.0 / (p * p)).powi(m as i32)
}

/// `(1 − p^{−2})^{|Z(Σ a_i φ_i)|}` for nonzero `a`.
pub fn bias_bound(forms: &[LinearForm], a: &[u32]) -> Result<f64> {
    let Some(first) = forms.first() else {
        return Err(Error::invalid("bias bound of an empty family"));
    };
    let p = first.modulus();
    if a.iter().all(|&c| c % p.get() == 0) {
        return Err(Error::invalid("bias bound needs a nonzero coefficient vector"));
    }
    Ok(decay(p, combine(a, forms)?.support_size()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquidistributionReport {
    pub exact_prob: BigRational,
    /// `|P − p^{−k}|`, exact.
    pub deviation: BigRational,
    pub separation: usize,
    /// `(1 − p^{−2})^separation`.
    pub bound: f64,
    pub bound_exact: BigRational,
    pub holds: bool,
}

/// Compares the exact probability `P(φ_i(x) = y_i ∀i)` with `p^{−k}`
/// against the separation-based bound. The comparison is exact.
pub fn equidistribution_check(
    forms: &[LinearForm],
    y: &[u32],
    alphabet: &Alphabet,
    budget: u128,
    enumeration_cap: u128,
) -> Result<EquidistributionReport> {
    let p = check_family(forms, alphabet)?;
    if y.len() != forms.len() || forms.is_empty() {
        return Err(Error::invalid("need one value per form and at least one form"));
    }
    let conditions = forms
        .iter()
        .zip(y)
        .map(|(f, &v)| Condition::new(f.clone(), TargetSet::new(p, [v % p.get()])?))
        .collect::<Result<Vec<_>>>()?;
    let system = ConditionSystem::new(alphabet.clone(), conditions)?;
    let exact_prob = satisfying_density(&system, budget)?;
    let uniform = BigRational::new(1.into(), Pow::pow(BigInt::from(p.get()), forms.len()));
    let deviation = (&exact_prob - uniform).abs();
    let separation = separation(forms, enumeration_cap)?;
    let bound_exact = decay_exact(p, separation);
    Ok(EquidistributionReport {
        holds: deviation <= bound_exact,
        bound: to_f64(&bound_exact),
        exact_prob,
        deviation,
        separation,
        bound_exact,
    })
}
