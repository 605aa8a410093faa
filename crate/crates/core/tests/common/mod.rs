//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's algorithms; systems are evaluated point by point.

#![allow(dead_code)]

use std::collections::HashMap;

use cubeforms::{Alphabet, Condition, ConditionSystem, LinearForm, Modulus, TargetSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn m(p: u32) -> Modulus {
    Modulus::new(p).unwrap()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Every point of `S^n`, first coordinate varying slowest.
pub fn points(alphabet: &[u32], n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|x| {
                alphabet.iter().map(move |&s| {
                    let mut y = x.clone();
                    y.push(s);
                    y
                })
            })
            .collect();
    }
    out
}

pub fn eval(form: &LinearForm, x: &[u32]) -> u32 {
    let p = form.modulus().get() as u64;
    (form.terms().map(|(z, c)| c as u64 * x[z] as u64).sum::<u64>() % p) as u32
}

/// One past the largest coordinate used.
pub fn width(forms: &[LinearForm]) -> usize {
    forms.iter().flat_map(|f| f.support_iter()).max().map_or(0, |z| z + 1)
}

pub fn cube_size(system: &ConditionSystem) -> u128 {
    (system.alphabet().len() as u128).saturating_pow(width(&system.forms()) as u32)
}

/// Calls `visit` on every point of `S^n` without materialising the cube.
pub fn for_each_point(alphabet: &[u32], n: usize, mut visit: impl FnMut(&[u32])) {
    let mut digits = vec![0usize; n];
    let mut x: Vec<u32> = vec![alphabet[0]; n];
    loop {
        visit(&x);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < alphabet.len() {
                x[i] = alphabet[digits[i]];
                break;
            }
            digits[i] = 0;
            x[i] = alphabet[0];
        }
    }
}

pub fn brute_density(system: &ConditionSystem) -> BigRational {
    let forms = system.forms();
    let (mut hits, mut total) = (0u64, 0u64);
    for_each_point(&system.alphabet().members(), width(&forms), |x| {
        total += 1;
        if system.conditions().iter().all(|c| c.target.contains(eval(&c.form, x))) {
            hits += 1;
        }
    });
    ratio(hits, total)
}

pub fn brute_joint(forms: &[LinearForm], alphabet: &[u32]) -> (HashMap<Vec<u32>, u64>, u64) {
    let mut counts = HashMap::new();
    let mut total = 0;
    for_each_point(alphabet, width(forms), |x| {
        total += 1;
        *counts.entry(forms.iter().map(|f| eval(f, x)).collect()).or_insert(0) += 1;
    });
    (counts, total)
}

/// `P(φ_i(x) = y_i ∀i)`.
pub fn brute_probability(forms: &[LinearForm], alphabet: &[u32], y: &[u32]) -> BigRational {
    let (counts, total) = brute_joint(forms, alphabet);
    ratio(*counts.get(y).unwrap_or(&0), total)
}

/// Sumset `c_1 S + … + c_m S` as a bitmask.
pub fn sumset_mask(p: u32, s: &[u32], coeffs: &[u32]) -> u64 {
    let mut set: u64 = 1;
    for &c in coeffs {
        let mut next = 0u64;
        for v in 0..p {
            if set >> v & 1 == 1 {
                for &t in s {
                    next |= 1 << ((v + c * t) % p);
                }
            }
        }
        set = next;
    }
    set
}

fn mask(values: &[u32]) -> u64 {
    values.iter().fold(0, |acc, &v| acc | 1 << v)
}

/// Nondecreasing tuples of nonzero residues of length `len`; sumsets do not
/// depend on the order of the coefficients.
pub fn coefficient_multisets(p: u32, len: usize) -> Vec<Vec<u32>> {
    fn rec(p: u32, len: usize, from: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for c in from..p {
            cur.push(c);
            rec(p, len, c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, len, 1, &mut Vec::new(), &mut out);
    out
}

/// Literal escape length: smallest `L` with no `L` nonzero coefficients
/// whose sumset lies inside `E`.
pub fn brute_l(p: u32, s: &[u32], e: &[u32]) -> usize {
    let target = mask(e);
    (0..=p as usize + 1)
        .find(|&len| {
            coefficient_multisets(p, len)
                .iter()
                .all(|c| sumset_mask(p, s, c) & !target != 0)
        })
        .expect("sumsets eventually exceed any strict target")
}

fn shift_mask(p: u32, set: u64, y: u32) -> u64 {
    (0..p).filter(|&v| set >> v & 1 == 1).fold(0, |acc, v| acc | 1 << ((v + y) % p))
}

/// Translation-invariant escape length: smallest `L` such that no translate
/// of any `a_1 S + … + a_L S` lies inside `E`.
pub fn brute_translated_l(p: u32, s: &[u32], e: &[u32]) -> usize {
    let target = mask(e);
    (0..=p as usize + 1)
        .find(|&len| {
            coefficient_multisets(p, len).iter().all(|c| {
                let set = sumset_mask(p, s, c);
                (0..p).all(|y| shift_mask(p, set, y) & !target != 0)
            })
        })
        .expect("sumsets eventually exceed any strict target")
}

/// All `a ∈ F_p^k` in lexicographic order.
pub fn all_vectors(p: u32, k: usize) -> Vec<Vec<u32>> {
    points(&(0..p).collect::<Vec<_>>(), k)
}

pub fn combination(a: &[u32], forms: &[LinearForm]) -> LinearForm {
    let p = forms[0].modulus();
    let mut terms: HashMap<usize, i64> = HashMap::new();
    for (f, &c) in forms.iter().zip(a) {
        for (z, v) in f.terms() {
            *terms.entry(z).or_insert(0) += c as i64 * v as i64;
        }
    }
    LinearForm::from_terms(p, terms)
}

/// Minimum support over all nonzero combinations.
pub fn brute_separation(forms: &[LinearForm]) -> usize {
    let p = forms[0].modulus().get();
    all_vectors(p, forms.len())
        .iter()
        .filter(|a| a.iter().any(|&c| c != 0))
        .map(|a| combination(a, forms).support_size())
        .min()
        .unwrap()
}

pub fn support_distance(a: &LinearForm, b: &LinearForm) -> usize {
    let p = a.modulus().get();
    let coords: std::collections::BTreeSet<usize> = a.support_iter().chain(b.support_iter()).collect();
    coords.into_iter().filter(|&z| (a.coeff(z) + p - b.coeff(z)) % p != 0).count()
}

pub fn brute_min_distance(forms: &[LinearForm]) -> Option<usize> {
    let mut best = None;
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            let d = support_distance(&forms[i], &forms[j]);
            best = Some(best.map_or(d, |b: usize| b.min(d)));
        }
    }
    best
}

/// `|S|^{−⌈(p−1)/(|S|−1)⌉}`.
pub fn beta_formula(p: u32, s_len: usize) -> BigRational {
    let e = (p as usize - 1).div_ceil(s_len - 1);
    BigRational::new(BigInt::from(1), BigInt::from(s_len).pow(e as u32))
}

pub fn random_nonzero(rng: &mut impl Rng, p: u32) -> u32 {
    rng.gen_range(1..p)
}

/// Random form with exactly `size` nonzero coefficients on coordinates
/// drawn from `coords`.
pub fn random_form(rng: &mut impl Rng, p: Modulus, coords: &[usize], size: usize) -> LinearForm {
    let chosen: Vec<usize> = coords.choose_multiple(rng, size).copied().collect();
    LinearForm::from_terms(p, chosen.into_iter().map(|z| (z, random_nonzero(rng, p.get()) as i64)))
}

/// Random alphabet with at least two members.
pub fn random_alphabet(rng: &mut impl Rng, p: Modulus) -> Alphabet {
    loop {
        let members: Vec<u32> = (0..p.get()).filter(|_| rng.gen_bool(0.5)).collect();
        if members.len() >= 2 {
            return Alphabet::new(p, members).unwrap();
        }
    }
}

/// Random nonempty strict target set.
pub fn random_target(rng: &mut impl Rng, p: Modulus) -> TargetSet {
    loop {
        let members: Vec<u32> = (0..p.get()).filter(|_| rng.gen_bool(0.5)).collect();
        if !members.is_empty() && members.len() < p.get() as usize {
            return TargetSet::new(p, members).unwrap();
        }
    }
}

pub fn system_of(alphabet: Alphabet, conds: Vec<(LinearForm, TargetSet)>) -> ConditionSystem {
    ConditionSystem::new(
        alphabet,
        conds.into_iter().map(|(f, e)| Condition::new(f, e).unwrap()).collect(),
    )
    .unwrap()
}

/// Random system with `k` forms over `n` coordinates, each of support
/// between 1 and `max_support`.
pub fn random_system(rng: &mut impl Rng, p: Modulus, alphabet: Alphabet, k: usize, n: usize, max_support: usize) -> ConditionSystem {
    let coords: Vec<usize> = (0..n).collect();
    let conds = (0..k)
        .map(|_| {
            let size = rng.gen_range(1..=max_support.min(n));
            (random_form(rng, p, &coords, size), random_target(rng, p))
        })
        .collect();
    system_of(alphabet, conds)
}
