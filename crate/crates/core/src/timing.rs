//! Wall-clock time once every handover costs a fixed `ε`, and the comparison
//! with the schedule where agents never trade objects.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

fn check(r1: u64, r2: u64, slow_time: &Rational) -> Result<()> {
    if r1 == 0 || r2 == 0 {
        return Err(Error::InvalidProblem(format!("need r1, r2 >= 1, got {r1}, {r2}")));
    }
    if !slow_time.is_positive() {
        return Err(Error::InvalidProblem(format!("T must be positive, got {slow_time}")));
    }
    if *slow_time == 1 {
        return Err(Error::EqualSpeeds);
    }
    Ok(())
}

/// `nT / (r1·T + r2)`: `r1` agents at 1 hour per object, `r2` at `T`.
pub fn optimal_time_two_type(r1: u64, r2: u64, slow_time: &Rational) -> Result<Rational> {
    check(r1, r2, slow_time)?;
    let n = Rational::from(r1 + r2);
    Ok(&n * slow_time / (Rational::from(r1) * slow_time + Rational::from(r2)))
}

/// `(r1 + r2·T) / n`: the time when each fast agent is paired with a slow one
/// on the same object throughout, as with a single bike and walkers.
pub fn biker_hiker_time(r1: u64, r2: u64, slow_time: &Rational) -> Result<Rational> {
    check(r1, r2, slow_time)?;
    Ok((Rational::from(r1) + Rational::from(r2) * slow_time) / Rational::from(r1 + r2))
}

/// `optimal_time_two_type < biker_hiker_time`, compared exactly.
pub fn beats_biker_hiker(r1: u64, r2: u64, slow_time: &Rational) -> Result<bool> {
    Ok(optimal_time_two_type(r1, r2, slow_time)? < biker_hiker_time(r1, r2, slow_time)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TimingReport {
    #[serde(rename = "H")]
    pub h: Rational,
    pub halt_count: u64,
    pub epsilon: Rational,
    pub total: Rational,
    pub excess_percent: Rational,
}

/// One `ε` of loading plus one per halt.
pub fn total_time(h: &Rational, halts: u64, epsilon: &Rational) -> Result<TimingReport> {
    if epsilon.is_negative() {
        return Err(Error::InvalidProblem(format!("epsilon must be non-negative, got {epsilon}")));
    }
    if !h.is_positive() {
        return Err(Error::InvalidProblem(format!("H must be positive, got {h}")));
    }
    let total = h + epsilon * Rational::from(halts + 1);
    let excess_percent = (&total - h) * Rational::integer(100) / h;
    Ok(TimingReport { h: h.clone(), halt_count: halts, epsilon: epsilon.clone(), total, excess_percent })
}
