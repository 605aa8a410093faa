//! Exact joint distributions and satisfying-set densities on `S^n`, plus a
//! seeded Monte Carlo fallback.
//!
//! All exact counts are over `S^N` where `N` is the union of the supports of
//! the forms involved; coordinates outside that union do not affect any
//! probability.

use std::ops::AddAssign;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{pow_sat, Condition, ConditionSystem, LinearForm};
use crate::fp::{Alphabet, Modulus};

/// Default cap on state updates for the exact engine.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Samples per Monte Carlo shard; shard `i` draws from ChaCha8 stream `i`.
pub const MC_SHARD_SAMPLES: u64 = 1 << 16;

/// Exact distribution of `(φ_1(x), …, φ_k(x))` for `x` uniform on `S^N`.
///
/// Value tuples are stored densely in mixed radix, form 0 being the least
/// significant digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    p: Modulus,
    k: usize,
    counts: Vec<BigUint>,
    total: BigUint,
}

impl JointDistribution {
    pub fn modulus(&self) -> Modulus {
        self.p
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    fn index_of(&self, values: &[u32]) -> usize {
        assert_eq!(values.len(), self.k, "value tuple has the wrong arity");
        values
            .iter()
            .rev()
            .fold(0usize, |acc, &v| acc * self.p.get() as usize + (v % self.p.get()) as usize)
    }

    fn values_of(&self, mut idx: usize) -> Vec<u32> {
        let p = self.p.get() as usize;
        (0..self.k)
            .map(|_| {
                let v = (idx % p) as u32;
                idx /= p;
                v
            })
            .collect()
    }

    pub fn count(&self, values: &[u32]) -> &BigUint {
        &self.counts[self.index_of(values)]
    }

    pub fn probability(&self, values: &[u32]) -> BigRational {
        ratio(self.count(values).clone(), self.total.clone())
    }

    /// All tuples with their counts, including zero counts.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u32>, &BigUint)> + '_ {
        self.counts.iter().enumerate().map(|(i, c)| (self.values_of(i), c))
    }

    /// Tuples with a nonzero count.
    pub fn support(&self) -> Vec<Vec<u32>> {
        self.iter().filter(|(_, c)| !c.is_zero()).map(|(v, _)| v).collect()
    }

    /// Distribution of the `i`-th coordinate alone.
    pub fn marginal(&self, i: usize) -> JointDistribution {
        assert!(i < self.k);
        let mut counts = vec![BigUint::zero(); self.p.get() as usize];
        for (v, c) in self.iter() {
            counts[v[i] as usize] += c;
        }
        JointDistribution { p: self.p, k: 1, counts, total: self.total.clone() }
    }
}

pub(crate) fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Counter type for the dynamic programs: `u128` when the total fits,
/// arbitrary precision otherwise.
trait Tally: Clone + Zero + for<'a> AddAssign<&'a Self> + Send + Sync {
    fn unit() -> Self;
    fn into_big(self) -> BigUint;
}

impl Tally for u128 {
    fn unit() -> Self {
        1
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Tally for BigUint {
    fn unit() -> Self {
        BigUint::one()
    }
    fn into_big(self) -> BigUint {
        self
    }
}

fn fits_u128(alphabet_len: usize, n: usize) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..n {
        match acc.checked_mul(alphabet_len as u128) {
            Some(v) if v < (1u128 << 126) => acc = v,
            _ => return false,
        }
    }
    true
}

/// Adds `src[v]` into `dst[v + shift]` for every tuple `v ∈ F_p^m`
/// (digit-wise addition mod p).
fn shift_accumulate<T: Tally>(p: usize, shift: &[usize], src: &[T], dst: &mut [T]) {
    let m = shift.len();
    debug_assert_eq!(src.len(), p.pow(m as u32));
    let mut place = vec![1usize; m];
    for i in 1..m {
        place[i] = place[i - 1] * p;
    }
    let mut digits = vec![0usize; m];
    let mut target: usize = shift.iter().zip(&place).map(|(d, w)| d * w).sum();
    for value in src {
        if !value.is_zero() {
            dst[target] += value;
        }
        for i in 0..m {
            let old = (digits[i] + shift[i]) % p;
            digits[i] += 1;
            if digits[i] < p {
                let new = (digits[i] + shift[i]) % p;
                target = target + new * place[i] - old * place[i];
                break;
            }
            digits[i] = 0;
            let new = shift[i] % p;
            target = target + new * place[i] - old * place[i];
        }
    }
}

fn joint_counts<T: Tally>(
    p: Modulus,
    alphabet: &Alphabet,
    forms: &[LinearForm],
    coords: &[usize],
) -> Vec<T> {
    let k = forms.len();
    let pu = p.get() as usize;
    let size = pu.pow(k as u32);
    let mut state = vec![T::zero(); size];
    state[0] = T::unit();
    let members = alphabet.members();
    for &z in coords {
        let column: Vec<u32> = forms.iter().map(|f| f.coeff(z)).collect();
        let mut next = vec![T::zero(); size];
        for &s in &members {
            let shift: Vec<usize> = column.iter().map(|&c| p.mul(c, s) as usize).collect();
            shift_accumulate(pu, &shift, &state, &mut next);
        }
        state = next;
    }
    state
}

/// Exact joint distribution of all forms of the system (targets ignored).
///
/// Runs a dynamic program over the union of supports in increasing index
/// order with a dense state indexed by `F_p^k`; costs `p^k · N · |S|`
/// state updates.
pub fn joint_distribution(system: &ConditionSystem, budget: u128) -> Result<JointDistribution> {
    let p = system.modulus();
    let forms = system.forms();
    let coords = system.coordinates();
    let k = forms.len();
    let s = system.alphabet().len();
    let cost = pow_sat(p.get(), k)
        .saturating_mul(coords.len() as u128)
        .saturating_mul(s as u128);
    if cost > budget || pow_sat(p.get(), k) > budget {
        return Err(Error::ExactEngineTooLarge { cost, budget });
    }
    let counts: Vec<BigUint> = if fits_u128(s, coords.len()) {
        joint_counts::<u128>(p, system.alphabet(), &forms, &coords)
            .into_iter()
            .map(BigUint::from)
            .collect()
    } else {
        joint_counts::<BigUint>(p, system.alphabet(), &forms, &coords)
    };
    let total = Pow::pow(BigUint::from(s), coords.len());
    Ok(JointDistribution { p, k, counts, total })
}

/// Exact distribution of a single form, by per-coordinate convolution.
pub fn marginal_distribution(form: &LinearForm, alphabet: &Alphabet) -> JointDistribution {
    let p = form.modulus();
    let pu = p.get() as usize;
    let mut counts = vec![BigUint::zero(); pu];
    counts[0] = BigUint::one();
    let members = alphabet.members();
    for (_, c) in form.terms() {
        let mut next = vec![BigUint::zero(); pu];
        for (v, count) in counts.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            for &s in &members {
                next[p.add(v as u32, p.mul(c, s)) as usize] += count;
            }
        }
        counts = next;
    }
    let total = Pow::pow(BigUint::from(alphabet.len()), form.support_size());
    JointDistribution { p, k: 1, counts, total }
}

/// Connected components of the bipartite incidence graph between
/// conditions and coordinates, as lists of condition indices.
pub fn components(system: &ConditionSystem) -> Vec<Vec<usize>> {
    let n = system.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut owner: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for (i, c) in system.conditions().iter().enumerate() {
        for z in c.form.support_iter() {
            match owner.get(&z) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
                None => {
                    owner.insert(z, i);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Plan for the sweep over one component: which conditions open and close
/// at each coordinate.
struct Sweep {
    coords: Vec<usize>,
    opens: Vec<Vec<usize>>,
    closes: Vec<Vec<usize>>,
    cost: u128,
}

impl Sweep {
    fn plan(conditions: &[&Condition], alphabet_len: usize, p: Modulus) -> Sweep {
        let mut coords: Vec<usize> = conditions.iter().flat_map(|c| c.form.support_iter()).collect();
        coords.sort_unstable();
        coords.dedup();
        let pos = |z: usize| coords.binary_search(&z).expect("coordinate of a member");
        let mut opens = vec![Vec::new(); coords.len()];
        let mut closes = vec![Vec::new(); coords.len()];
        for (i, c) in conditions.iter().enumerate() {
            let first = c.form.support_iter().next();
            let last = c.form.support_iter().last();
            if let (Some(a), Some(b)) = (first, last) {
                opens[pos(a)].push(i);
                closes[pos(b)].push(i);
            }
        }
        let mut active = 0usize;
        let mut cost: u128 = 0;
        for t in 0..coords.len() {
            active += opens[t].len();
            cost = cost.saturating_add(pow_sat(p.get(), active).saturating_mul(alphabet_len as u128));
            active -= closes[t].len();
        }
        Sweep { coords, opens, closes, cost }
    }
}

/// Counts `x ∈ S^{N_c}` satisfying every condition of one component by a
/// sweep whose state tracks only the forms whose support straddles the
/// current coordinate.
fn count_component<T: Tally>(
    p: Modulus,
    alphabet: &Alphabet,
    conditions: &[&Condition],
    sweep: &Sweep,
) -> T {
    let pu = p.get() as usize;
    let members = alphabet.members();
    let mut active: Vec<usize> = Vec::new();
    let mut state: Vec<T> = vec![T::unit()];
    for (t, &z) in sweep.coords.iter().enumerate() {
        for &i in &sweep.opens[t] {
            active.push(i);
            state.resize(state.len() * pu, T::zero());
        }
        let column: Vec<u32> = active.iter().map(|&i| conditions[i].form.coeff(z)).collect();
        let mut next = vec![T::zero(); state.len()];
        for &s in &members {
            let shift: Vec<usize> = column.iter().map(|&c| p.mul(c, s) as usize).collect();
            shift_accumulate(pu, &shift, &state, &mut next);
        }
        state = next;
        for &i in &sweep.closes[t] {
            let j = active.iter().position(|&a| a == i).expect("closing an active form");
            let low = pu.pow(j as u32);
            let high = state.len() / (low * pu);
            let target = &conditions[i].target;
            let mut reduced = vec![T::zero(); low * high];
            for h in 0..high {
                for v in 0..pu {
                    if !target.contains(v as u32) {
                        continue;
                    }
                    let base = h * low * pu + v * low;
                    for l in 0..low {
                        reduced[h * low + l] += &state[base + l];
                    }
                }
            }
            state = reduced;
            active.remove(j);
        }
    }
    debug_assert!(active.is_empty() && state.len() == 1);
    state.into_iter().next().expect("single final state")
}

/// Exact density of `{x ∈ S^n : φ_i(x) ∈ E_i for all i}`.
///
/// The system is split into connected components (conditions linked through
/// shared coordinates); each component is swept separately and the
/// component densities are multiplied. Fails with
/// [`Error::ExactEngineTooLarge`] if any single component needs more than
/// `budget` state updates.
pub fn satisfying_density(system: &ConditionSystem, budget: u128) -> Result<BigRational> {
    let p = system.modulus();
    let alphabet = system.alphabet();
    let mut plans = Vec::new();
    for comp in components(system) {
        let conditions: Vec<&Condition> = comp.iter().map(|&i| &system.conditions()[i]).collect();
        let sweep = Sweep::plan(&conditions, alphabet.len(), p);
        if sweep.cost > budget {
            return Err(Error::ExactEngineTooLarge { cost: sweep.cost, budget });
        }
        plans.push((conditions, sweep));
    }
    let mut density = BigRational::one();
    for (conditions, sweep) in plans {
        if sweep.coords.is_empty() {
            // zero forms only
            if conditions.iter().any(|c| !c.target.contains(0)) {
                return Ok(BigRational::zero());
            }
            continue;
        }
        let count = if fits_u128(alphabet.len(), sweep.coords.len()) {
            count_component::<u128>(p, alphabet, &conditions, &sweep).into_big()
        } else {
            count_component::<BigUint>(p, alphabet, &conditions, &sweep)
        };
        if count.is_zero() {
            return Ok(BigRational::zero());
        }
        let total = Pow::pow(BigUint::from(alphabet.len()), sweep.coords.len());
        density *= ratio(count, total);
    }
    Ok(density)
}

/// `density(system ∧ extra) / density(system)`.
pub fn conditional_density(
    system: &ConditionSystem,
    extra: &Condition,
    budget: u128,
) -> Result<BigRational> {
    if extra.target.is_empty() {
        return Err(Error::invalid("conditioning on an empty target set"));
    }
    let base = satisfying_density(system, budget)?;
    if base.is_zero() {
        return Err(Error::ConditioningOnNull);
    }
    let joint = satisfying_density(&system.with_condition(extra.clone())?, budget)?;
    Ok(joint / base)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityEstimate {
    pub estimate: f64,
    pub hits: u64,
    pub samples: u64,
    pub seed: u64,
    /// Half-width of the 99% Hoeffding interval, `sqrt(ln(2/0.01) / (2·samples))`.
    pub hoeffding_99: f64,
}

pub fn hoeffding_99(samples: u64) -> f64 {
    ((2.0f64 / 0.01).ln() / (2.0 * samples as f64)).sqrt()
}

/// Monte Carlo estimate of the satisfying density.
///
/// Samples are split into shards of [`MC_SHARD_SAMPLES`]; shard `i` uses
/// `ChaCha8Rng::seed_from_u64(seed)` switched to stream `i`. Each sample
/// draws the coordinates of the union of supports in increasing order, each
/// as `members[gen_range(0..|S|)]` over the sorted alphabet. Hit counts are
/// integers, so the result does not depend on how shards are scheduled.
pub fn mc_density(system: &ConditionSystem, samples: u64, seed: u64) -> Result<DensityEstimate> {
    if samples == 0 {
        return Err(Error::invalid("samples must be at least 1"));
    }
    let p = system.modulus();
    let coords = system.coordinates();
    let members = system.alphabet().members();
    let compiled: Vec<(Vec<(usize, u32)>, &crate::fp::TargetSet)> = system
        .conditions()
        .iter()
        .map(|c| {
            let terms = c
                .form
                .terms()
                .map(|(z, a)| (coords.binary_search(&z).expect("coordinate in union"), a))
                .collect();
            (terms, &c.target)
        })
        .collect();
    let shards = samples.div_ceil(MC_SHARD_SAMPLES);
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let n = MC_SHARD_SAMPLES.min(samples - shard * MC_SHARD_SAMPLES);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let mut x = vec![0u32; coords.len()];
            let mut hits = 0u64;
            for _ in 0..n {
                for v in x.iter_mut() {
                    *v = members[rng.gen_range(0..members.len())];
                }
                let ok = compiled.iter().all(|(terms, target)| {
                    let value = terms.iter().fold(0u32, |acc, &(pos, a)| p.add(acc, p.mul(a, x[pos])));
                    target.contains(value)
                });
                hits += ok as u64;
            }
            hits
        })
        .sum();
    Ok(DensityEstimate {
        estimate: hits as f64 / samples as f64,
        hits,
        samples,
        seed,
        hoeffding_99: hoeffding_99(samples),
    })
}

/// `num/den`, also for integers.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Lossy conversion used for printing and float-side comparisons.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
