//! Arithmetic over F_p, residue sets and their sumsets, and the two scalar
//! constants attached to an alphabet: the escape length `L(S, E)` and the
//! nonzero-probability floor `beta(p, S)`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("modulus {p} is not prime")));
        }
        Ok(Modulus(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - (b % self.0) as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        self.sub(0, a)
    }

    /// Multiplicative inverse of a nonzero residue (Fermat).
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.0 != 0);
        let mut result = 1u32;
        let mut base = a % self.0;
        let mut e = self.0 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }
}

impl TryFrom<u32> for Modulus {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Modulus::new(p)
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A subset of F_p stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueSet {
    p: Modulus,
    words: Vec<u64>,
}

impl ResidueSet {
    pub fn empty(p: Modulus) -> Self {
        let n = (p.get() as usize).div_ceil(64);
        ResidueSet { p, words: vec![0; n] }
    }

    pub fn full(p: Modulus) -> Self {
        let mut s = Self::empty(p);
        for v in 0..p.get() {
            s.insert(v);
        }
        s
    }

    pub fn singleton(p: Modulus, v: u32) -> Self {
        let mut s = Self::empty(p);
        s.insert(p.reduce(v as i64));
        s
    }

    /// Members must already lie in `[0, p)`.
    pub fn from_members(p: Modulus, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut s = Self::empty(p);
        for v in members {
            if v >= p.get() {
                return Err(Error::invalid(format!("residue {v} is not in [0, {p})")));
            }
            s.insert(v);
        }
        Ok(s)
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.p
    }

    #[inline]
    pub fn insert(&mut self, v: u32) {
        self.words[(v / 64) as usize] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        v < self.p.get() && self.words[(v / 64) as usize] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.p.get() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.p.get()).filter(move |&v| self.contains(v))
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// `{c·s : s ∈ self}`.
    pub fn scaled(&self, c: u32) -> ResidueSet {
        let mut out = Self::empty(self.p);
        for v in self.iter() {
            out.insert(self.p.mul(c, v));
        }
        out
    }

    /// `{s + c : s ∈ self}`.
    pub fn shifted(&self, c: u32) -> ResidueSet {
        let mut out = Self::empty(self.p);
        for v in self.iter() {
            out.insert(self.p.add(v, c));
        }
        out
    }

    pub fn complement(&self) -> ResidueSet {
        let mut out = Self::empty(self.p);
        for v in 0..self.p.get() {
            if !self.contains(v) {
                out.insert(v);
            }
        }
        out
    }

    fn sumset_unchecked(&self, other: &ResidueSet) -> ResidueSet {
        let mut out = Self::empty(self.p);
        for a in self.iter() {
            for b in other.iter() {
                out.insert(self.p.add(a, b));
            }
        }
        out
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// `{a + b mod p : a ∈ A, b ∈ B}`; both operands must be nonempty.
pub fn sumset(a: &ResidueSet, b: &ResidueSet) -> Result<ResidueSet> {
    if a.modulus() != b.modulus() {
        return Err(Error::invalid("sumset operands use different moduli"));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("sumset of an empty set"));
    }
    Ok(a.sumset_unchecked(b))
}

/// The alphabet `S` of the cube `S^n`: at least two residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(ResidueSet);

impl Alphabet {
    pub fn new(p: Modulus, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        let set = ResidueSet::from_members(p, members)?;
        if set.len() < 2 {
            return Err(Error::invalid("alphabet needs at least two residues"));
        }
        Ok(Alphabet(set))
    }

    /// The Boolean alphabet `{0, 1}`.
    pub fn boolean(p: Modulus) -> Self {
        Alphabet::new(p, [0, 1]).expect("p >= 2")
    }

    pub fn modulus(&self) -> Modulus {
        self.0.modulus()
    }

    pub fn set(&self) -> &ResidueSet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> Vec<u32> {
        self.0.to_vec()
    }
}

/// A target set `E`, required to be a strict subset of F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TargetSet(ResidueSet);

impl TargetSet {
    pub fn new(p: Modulus, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        Self::from_set(ResidueSet::from_members(p, members)?)
    }

    pub fn from_set(set: ResidueSet) -> Result<Self> {
        if set.is_full() {
            return Err(Error::invalid("target set must be strict"));
        }
        Ok(TargetSet(set))
    }

    pub fn modulus(&self) -> Modulus {
        self.0.modulus()
    }

    pub fn set(&self) -> &ResidueSet {
        &self.0
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn members(&self) -> Vec<u32> {
        self.0.to_vec()
    }
}

/// Result of [`compute_l`]: the escape length together with a coefficient
/// tuple of length `l - 1` whose iterated sumset stays inside `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LWitness {
    pub l: usize,
    pub tuple: Vec<u32>,
    /// `⌊(|E|−1)/(|S|−1)⌋ + 1`, clamped at 0 for empty `E`.
    pub bound: usize,
}

/// Upper bound on `L(S, E)` from the Cauchy–Davenport inequality.
pub fn l_upper_bound(alphabet_len: usize, target_len: usize) -> usize {
    if target_len == 0 {
        0
    } else {
        (target_len - 1) / (alphabet_len - 1) + 1
    }
}

/// Iterated sumset `c_1 S + … + c_m S`; the empty tuple gives `{0}`.
pub fn iterated_sumset(alphabet: &Alphabet, coeffs: &[u32]) -> ResidueSet {
    let p = alphabet.modulus();
    coeffs.iter().fold(ResidueSet::singleton(p, 0), |acc, &c| {
        acc.sumset_unchecked(&alphabet.set().scaled(c))
    })
}

/// Smallest `L ≥ 0` such that every sumset `a_1 S + … + a_L S` with nonzero
/// coefficients escapes `E`.
///
/// Reachable sumsets are explored level by level as subsets of F_p. Sets
/// larger than `|E|` are discarded: adding a further term never shrinks a
/// set, so they cannot re-enter `E`. No monotonicity of containment in the
/// level is assumed.
pub fn compute_l(alphabet: &Alphabet, target: &TargetSet) -> LWitness {
    escape_search(alphabet, target, |set| set.is_subset(target.set()))
}

/// Smallest `L ≥ 0` such that no translate `y + a_1 S + … + a_L S` lies in
/// `E`. This is the length that makes `P(ψ(x) ∈ E − y) < 1` for every form
/// `ψ` with at least `L` nonzero coefficients and every shift `y`; it is
/// always at least [`compute_l`]'s value. The returned tuple has some
/// translate inside `E`.
pub fn compute_translated_l(alphabet: &Alphabet, target: &TargetSet) -> LWitness {
    let p = alphabet.modulus();
    escape_search(alphabet, target, |set| {
        (0..p.get()).any(|y| set.shifted(y).is_subset(target.set()))
    })
}

type Level = BTreeMap<ResidueSet, Option<(ResidueSet, u32)>>;

fn escape_search(
    alphabet: &Alphabet,
    target: &TargetSet,
    fits: impl Fn(&ResidueSet) -> bool,
) -> LWitness {
    let p = alphabet.modulus();
    assert_eq!(p, target.modulus(), "alphabet and target use different moduli");
    let bound = l_upper_bound(alphabet.len(), target.len());
    let scaled: Vec<(u32, ResidueSet)> =
        (1..p.get()).map(|c| (c, alphabet.set().scaled(c))).collect();

    // levels[j] maps each surviving level-j sumset to (parent set, coefficient).
    let mut levels: Vec<Level> = Vec::new();
    let mut first = BTreeMap::new();
    first.insert(ResidueSet::singleton(p, 0), None);
    levels.push(first);

    loop {
        let level = levels.len() - 1;
        let current = &levels[level];
        if !current.keys().any(&fits) {
            let tuple = if level == 0 {
                Vec::new()
            } else {
                trace_witness(&levels, level - 1, &fits)
            };
            assert!(level <= bound, "L = {level} exceeds the sumset bound {bound}");
            return LWitness { l: level, tuple, bound };
        }
        let mut next = BTreeMap::new();
        for set in current.keys() {
            for (c, cs) in &scaled {
                let grown = set.sumset_unchecked(cs);
                if grown.len() <= target.len() {
                    next.entry(grown).or_insert_with(|| Some((set.clone(), *c)));
                }
            }
        }
        levels.push(next);
    }
}

fn trace_witness(levels: &[Level], level: usize, fits: impl Fn(&ResidueSet) -> bool) -> Vec<u32> {
    let mut set = levels[level]
        .keys()
        .find(|s| fits(s))
        .expect("level below L has a fitting sumset")
        .clone();
    let mut tuple = Vec::with_capacity(level);
    for j in (1..=level).rev() {
        let (parent, c) = levels[j][&set].clone().expect("non-root entry has a parent");
        tuple.push(c);
        set = parent;
    }
    tuple.reverse();
    tuple
}

/// `β(p, S) = |S|^{−⌈(p−1)/(|S|−1)⌉}`, exactly.
pub fn beta(p: Modulus, alphabet: &Alphabet) -> Result<BigRational> {
    if alphabet.len() < 2 {
        return Err(Error::invalid("beta needs |S| >= 2"));
    }
    if alphabet.modulus() != p {
        return Err(Error::invalid("alphabet uses a different modulus"));
    }
    let exponent = (p.get() as usize - 1).div_ceil(alphabet.len() - 1);
    let den: BigInt = Pow::pow(BigInt::from(alphabet.len()), exponent);
    Ok(BigRational::new(BigInt::one(), den))
}

/// `(1/|S|) Σ_{u∈S} ω_p^{t·u}` with `ω_p = e^{2πi/p}`.
pub fn char_mean(alphabet: &Alphabet, t: u32) -> Complex64 {
    let p = alphabet.modulus();
    let sum: Complex64 = alphabet
        .set()
        .iter()
        .map(|u| root_of_unity(p, p.mul(t, u)))
        .sum();
    sum / alphabet.len() as f64
}

pub fn char_mean_magnitude(alphabet: &Alphabet, t: u32) -> f64 {
    if t % alphabet.modulus().get() == 0 {
        return 1.0;
    }
    char_mean(alphabet, t).norm()
}

/// `ω_p^e`.
#[inline]
pub fn root_of_unity(p: Modulus, e: u32) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (e % p.get()) as f64 / p.get() as f64)
}
