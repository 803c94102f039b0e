//! Deterministic uniform sampling in a coordinate box.
//!
//! Sample `i`, attempt `k` draws from an independent ChaCha8 stream keyed by
//! `(seed, i, k)`, so every point is reproducible on its own and the set does
//! not depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Rejected draws per sample before it is reported as excluded.
pub const MAX_ATTEMPTS: u64 = 100;

/// A sample index whose every draw hit an excluded locus.
#[derive(Clone, Debug, PartialEq)]
pub struct Exclusion {
    pub index: usize,
    pub last_candidate: Vec<f64>,
    pub reason: String,
}

/// Accepted points, sorted lexicographically, with their payloads.
#[derive(Clone, Debug)]
pub struct SampleSet<R> {
    pub points: Vec<(Vec<f64>, R)>,
    pub exclusions: Vec<Exclusion>,
}

/// Candidate `attempt` for sample `index`.
pub fn candidate(bounds: &[(f64, f64)], seed: u64, index: usize, attempt: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((index as u64) << 8) | attempt);
    bounds
        .iter()
        .map(|&(lo, hi)| lo + rng.gen::<f64>() * (hi - lo))
        .collect()
}

/// Draws sample `index`, retrying while `accept` reports a numerical error.
/// Other errors are returned as is.
pub fn sample_one<R>(
    bounds: &[(f64, f64)],
    seed: u64,
    index: usize,
    accept: impl Fn(&[f64]) -> Result<R>,
) -> Result<std::result::Result<(Vec<f64>, R), Exclusion>> {
    let mut last = (Vec::new(), String::new());
    for attempt in 0..MAX_ATTEMPTS {
        let p = candidate(bounds, seed, index, attempt);
        match accept(&p) {
            Ok(r) => return Ok(Ok((p, r))),
            Err(e) if e.is_numerical() => last = (p, e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok(Err(Exclusion {
        index,
        last_candidate: last.0,
        reason: last.1,
    }))
}

/// Sorts accepted samples lexicographically and collects exclusions.
pub fn collect<R>(draws: Vec<std::result::Result<(Vec<f64>, R), Exclusion>>) -> SampleSet<R> {
    let mut points = Vec::new();
    let mut exclusions = Vec::new();
    for d in draws {
        match d {
            Ok(p) => points.push(p),
            Err(e) => exclusions.push(e),
        }
    }
    points.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    SampleSet { points, exclusions }
}

/// Sequential sampling of `count` points.
pub fn sample_box<R>(
    bounds: &[(f64, f64)],
    count: usize,
    seed: u64,
    accept: impl Fn(&[f64]) -> Result<R>,
) -> Result<SampleSet<R>> {
    if bounds
        .iter()
        .any(|&(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite())
    {
        return Err(Error::Invalid(
            "sampling box intervals must be finite with lo < hi".into(),
        ));
    }
    let draws = (0..count)
        .map(|i| sample_one(bounds, seed, i, &accept))
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(draws))
}
