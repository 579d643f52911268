//! Harmonic means, the optimum-time formulas, and harmonic-mean-preserving
//! splits of completion-time lists.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ProblemSpec;
use crate::rational::Rational;

/// Default cap on list length for exhaustive split enumeration.
pub const DEFAULT_SPLIT_BOUND: usize = 24;

/// `|times| / Σ 1/t`.
pub fn harmonic_mean(times: &[Rational]) -> Result<Rational> {
    if times.is_empty() || times.iter().any(|t| !t.is_positive()) {
        return Err(Error::EmptyOrNonPositive);
    }
    let reciprocal_sum: Rational = times.iter().map(|t| t.recip().expect("positive")).sum();
    Ok(Rational::from(times.len()) / reciprocal_sum)
}

/// Combined production rate `R = Σ k_i / t_i` in objects per hour.
pub fn combined_rate(spec: &ProblemSpec) -> Rational {
    spec.classes().iter().map(|c| Rational::from(c.count) * c.rate()).sum()
}

/// The harmonic optimum `H = n / R`: the least time in which the `n` agents
/// can finish `n` objects.
pub fn optimum_time(spec: &ProblemSpec) -> Rational {
    Rational::from(spec.agents()) / combined_rate(spec)
}

/// One atomic unit, `R⁻¹ = H / n` hours.
pub fn atomic_unit(spec: &ProblemSpec) -> Rational {
    combined_rate(spec).recip().expect("rate is positive")
}

/// Share of the whole order built by each class in an optimal scheme.
pub fn build_proportions(spec: &ProblemSpec) -> Vec<Rational> {
    let au = atomic_unit(spec);
    spec.classes().iter().map(|c| Rational::from(c.count) * c.rate() * &au).collect()
}

/// Every pair `x <= y` of positive integers whose harmonic mean is `2m`,
/// ascending in `x`. Each comes from a divisor pair `d · (m²/d) = m²`.
pub fn harmonic_pairs(m: u64) -> Vec<(u64, u64)> {
    if m == 0 {
        return Vec::new();
    }
    let square = u128::from(m) * u128::from(m);
    let mut pairs = Vec::new();
    let mut d: u64 = 1;
    while d <= m {
        if square % u128::from(d) == 0 {
            let other = square / u128::from(d);
            let y = other + u128::from(m);
            if let Ok(y) = u64::try_from(y) {
                pairs.push((d + m, y));
            }
        }
        d += 1;
    }
    pairs
}

/// A list cut into sub-lists that all share one harmonic mean.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarmonicPartition {
    pub parts: Vec<Vec<Rational>>,
    pub mean: Rational,
}

/// Parse `"2,3,4.5,7/2"` into a list of rationals.
pub fn parse_time_list(text: &str) -> Result<Vec<Rational>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed.split(',').map(str::parse).collect()
}

/// Reciprocals scaled to a common denominator, as exact integers.
struct Weights {
    big: Vec<BigInt>,
    total: BigInt,
}

impl Weights {
    fn new(times: &[Rational]) -> Self {
        let lcm = times.iter().fold(BigInt::one(), |acc, t| acc.lcm(t.numer()));
        let big: Vec<BigInt> = times.iter().map(|t| t.denom() * &lcm / t.numer()).collect();
        let total = big.iter().fold(BigInt::zero(), |acc, w| acc + w);
        Self { big, total }
    }

    /// `i128` weights when `len · Σw` fits, so the split test cannot
    /// overflow.
    fn small(&self) -> Option<Vec<i128>> {
        let bound = &self.total * BigInt::from(self.big.len());
        bound.to_i128()?;
        self.big.iter().map(|w| w.to_i128()).collect()
    }
}

fn canonical_split(times: &[Rational], in_first: &[bool]) -> (Vec<Rational>, Vec<Rational>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (t, &inside) in times.iter().zip(in_first) {
        if inside {
            a.push(t.clone());
        } else {
            b.push(t.clone());
        }
    }
    a.sort();
    b.sort();
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// All unordered splits `{U, T∖U}` with `H(U) = H(T)`, `U` proper and
/// nonempty.
///
/// Each split lists its two parts sorted ascending, the lexicographically
/// smaller part first; splits that coincide as value lists are reported
/// once, and the result is sorted.
pub fn split_search(times: &[Rational]) -> Result<Vec<HarmonicPartition>> {
    split_search_bounded(times, DEFAULT_SPLIT_BOUND)
}

pub fn split_search_bounded(times: &[Rational], bound: usize) -> Result<Vec<HarmonicPartition>> {
    let mean = harmonic_mean(times)?;
    let len = times.len();
    // subsets are walked as u64 masks over positions 1..len
    if len > bound || len > 64 {
        return Err(Error::Capacity { len, bound });
    }
    if len < 2 {
        return Ok(Vec::new());
    }
    let weights = Weights::new(times);
    let mut found: BTreeSet<(Vec<Rational>, Vec<Rational>)> = BTreeSet::new();
    let mut record = |mask: u64| {
        // position 0 always sits in U
        let in_first: Vec<bool> = (0..len).map(|i| i == 0 || mask >> (i - 1) & 1 == 1).collect();
        found.insert(canonical_split(times, &in_first));
    };

    // Walk the subsets of positions 1..len in Gray-code order so each step
    // toggles one element. Test: len · Σ_U w == |U| · Σ_T w.
    let free = len - 1;
    let last = (1u64 << free) - 1; // all free positions in U gives U = T
    if let Some(small) = weights.small() {
        let total = weights.total.to_i128().expect("checked in small()");
        let n = len as i128;
        let mut sum = small[0];
        let mut count: i128 = 1;
        let mut gray: u64 = 0;
        for step in 0..=last {
            if step > 0 {
                let bit = step.trailing_zeros() as usize;
                gray ^= 1 << bit;
                if gray >> bit & 1 == 1 {
                    sum += small[bit + 1];
                    count += 1;
                } else {
                    sum -= small[bit + 1];
                    count -= 1;
                }
            }
            if gray != last && n * sum == count * total {
                record(gray);
            }
        }
    } else {
        let n = BigInt::from(len);
        let mut sum = weights.big[0].clone();
        let mut count: usize = 1;
        let mut gray: u64 = 0;
        for step in 0..=last {
            if step > 0 {
                let bit = step.trailing_zeros() as usize;
                gray ^= 1 << bit;
                if gray >> bit & 1 == 1 {
                    sum += &weights.big[bit + 1];
                    count += 1;
                } else {
                    sum -= &weights.big[bit + 1];
                    count -= 1;
                }
            }
            if gray != last && &n * &sum == BigInt::from(count) * &weights.total {
                record(gray);
            }
        }
    }

    Ok(found.into_iter().map(|(a, b)| HarmonicPartition { parts: vec![a, b], mean: mean.clone() }).collect())
}

/// Split recursively, always along the lexicographically least split, until
/// no part has a proper sub-list with the same harmonic mean. Parts come
/// back sorted.
pub fn irreducible_representation(times: &[Rational]) -> Result<HarmonicPartition> {
    irreducible_representation_bounded(times, DEFAULT_SPLIT_BOUND)
}

pub fn irreducible_representation_bounded(times: &[Rational], bound: usize) -> Result<HarmonicPartition> {
    let mean = harmonic_mean(times)?;
    if times.len() > bound {
        return Err(Error::Capacity { len: times.len(), bound });
    }
    let mut pending = vec![{
        let mut all = times.to_vec();
        all.sort();
        all
    }];
    let mut parts = Vec::new();
    while let Some(part) = pending.pop() {
        match split_search_bounded(&part, bound)?.into_iter().next() {
            Some(split) => pending.extend(split.parts),
            None => parts.push(part),
        }
    }
    parts.sort();
    Ok(HarmonicPartition { parts, mean })
}
