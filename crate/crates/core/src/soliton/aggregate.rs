//! Reduction of per-point records over a sample set.

use crate::residual::Residual;
use crate::scalar::Scalar;
use crate::soliton::record::{CheckRecord, CheckStatus};

/// One check reduced over all sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregatedCheck<T> {
    pub name: String,
    /// Fail if any point fails, Skipped if every point skipped, else Pass.
    pub status: CheckStatus,
    /// Residual at the worst evaluated point, for measured checks.
    pub residual: Option<Residual<T>>,
    /// Index into the sample list of the reported point.
    pub worst_index: usize,
    pub worst_point: Vec<T>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub note: Option<String>,
    /// Values recorded at the reported point.
    pub values: Vec<(String, T)>,
}

impl<T: Scalar> AggregatedCheck<T> {
    pub fn value(&self, key: &str) -> Option<T> {
        self.values.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }
}

/// Checks in order of first appearance, with the evaluation tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport<T> {
    pub tolerance: T,
    pub checks: Vec<AggregatedCheck<T>>,
}

impl<T: Scalar> CheckReport<T> {
    pub fn new(tolerance: T, points: &[Vec<T>], records: &[Vec<CheckRecord<T>>]) -> Self {
        CheckReport {
            tolerance,
            checks: aggregate(points, records),
        }
    }

    pub fn get(&self, name: &str) -> Option<&AggregatedCheck<T>> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

fn rank<T: Scalar>(r: &CheckRecord<T>) -> (u8, T) {
    // Fail outranks Pass, which outranks Skipped; measured residuals by ratio.
    let tier = match r.status {
        CheckStatus::Fail => 2,
        CheckStatus::Pass => 1,
        CheckStatus::Skipped => 0,
    };
    let ratio = match &r.residual {
        Some(res) if res.raw.is_finite() => res.ratio(),
        Some(_) => T::infinity(),
        None => T::neg_infinity(),
    };
    (tier, ratio)
}

/// Groups `records[i]` (the records at `points[i]`) by check name.
///
/// The reported point is the worst one: failing before passing before
/// skipped, then by residual ratio; ties go to the lowest index.
pub fn aggregate<T: Scalar>(points: &[Vec<T>], records: &[Vec<CheckRecord<T>>]) -> Vec<AggregatedCheck<T>> {
    let mut out: Vec<AggregatedCheck<T>> = Vec::new();
    let mut best: Vec<(u8, T)> = Vec::new();
    for (i, recs) in records.iter().enumerate() {
        for r in recs {
            let slot = match out.iter().position(|c| c.name == r.name) {
                Some(s) => s,
                None => {
                    out.push(AggregatedCheck {
                        name: r.name.clone(),
                        status: CheckStatus::Skipped,
                        residual: None,
                        worst_index: i,
                        worst_point: points[i].clone(),
                        passed: 0,
                        failed: 0,
                        skipped: 0,
                        note: r.note.clone(),
                        values: r.values.clone(),
                    });
                    best.push((0, T::neg_infinity()));
                    out.len() - 1
                }
            };
            let c = &mut out[slot];
            match r.status {
                CheckStatus::Pass => c.passed += 1,
                CheckStatus::Fail => c.failed += 1,
                CheckStatus::Skipped => c.skipped += 1,
            }
            let key = rank(r);
            let first = c.passed + c.failed + c.skipped == 1;
            if first || key.0 > best[slot].0 || (key.0 == best[slot].0 && key.1 > best[slot].1) {
                best[slot] = key;
                c.worst_index = i;
                c.worst_point = points[i].clone();
                c.residual = r.residual;
                c.note = r.note.clone();
                c.values = r.values.clone();
            }
        }
    }
    for c in &mut out {
        c.status = if c.failed > 0 {
            CheckStatus::Fail
        } else if c.passed > 0 {
            CheckStatus::Pass
        } else {
            CheckStatus::Skipped
        };
    }
    out
}
