//! Report documents and their text and JSON renderings.
//!
//! JSON floats are written with 17 significant digits in exponent form; `-0`
//! is written as `0` and non-finite values as `null`, so a document is a pure
//! function of its contents.

use std::fmt::Write as _;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;
use soliton_core::soliton::classify::Flag;
use soliton_core::{AggregatedCheck, CheckReport, CheckStatus, ClassificationReport, TensorValue, Variance};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A float serialized with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let v = if self.0 == 0.0 { 0.0 } else { self.0 };
        let raw = RawValue::from_string(format!("{v:.16e}")).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Samples {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

/// Named values in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Values(pub Vec<(String, f64)>);

impl Serialize for Values {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &Num(*v))?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: &'static str,
    pub pass: bool,
    pub residual: Option<Num>,
    pub scale: Option<Num>,
    pub tolerance: Num,
    pub worst_point: Vec<Num>,
    pub samples: Samples,
    pub note: Option<String>,
    pub values: Values,
}

impl CheckEntry {
    pub fn from_check(c: &AggregatedCheck<f64>, tolerance: f64) -> Self {
        CheckEntry {
            name: c.name.clone(),
            status: c.status.name(),
            pass: c.status != CheckStatus::Fail,
            residual: c.residual.map(|r| Num(r.raw)),
            scale: c.residual.map(|r| Num(r.scale)),
            tolerance: Num(tolerance),
            worst_point: nums(&c.worst_point),
            samples: Samples {
                passed: c.passed,
                failed: c.failed,
                skipped: c.skipped,
            },
            note: c.note.clone(),
            values: Values(c.values.clone()),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail.name()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagEntry {
    pub holds: bool,
    pub residual: Num,
    pub worst_point: Vec<Num>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleClass {
    pub point: Vec<Num>,
    pub a: Num,
    pub psi_norm: Num,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationEntry {
    pub gradient: FlagEntry,
    pub solenoidal: FlagEntry,
    pub torse_forming: FlagEntry,
    pub concircular: FlagEntry,
    pub constant_length: FlagEntry,
    pub parallel: FlagEntry,
    pub samples: Vec<SampleClass>,
}

impl ClassificationEntry {
    pub fn from_report(r: &ClassificationReport<f64>) -> Self {
        let flag = |f: &Flag<f64>| FlagEntry {
            holds: f.holds,
            residual: Num(f.residual),
            worst_point: r.points.get(f.worst).map(|p| nums(p)).unwrap_or_default(),
        };
        ClassificationEntry {
            gradient: flag(&r.is_gradient),
            solenoidal: flag(&r.is_solenoidal),
            torse_forming: flag(&r.is_torse_forming),
            concircular: flag(&r.is_concircular),
            constant_length: flag(&r.constant_length),
            parallel: flag(&r.is_parallel),
            samples: r
                .points
                .iter()
                .zip(&r.a_values)
                .zip(&r.psi_norms)
                .map(|((p, a), psi)| SampleClass {
                    point: nums(p),
                    a: Num(*a),
                    psi_norm: Num(*psi),
                })
                .collect(),
        }
    }

    fn flags(&self) -> [(&'static str, &FlagEntry); 6] {
        [
            ("gradient", &self.gradient),
            ("solenoidal", &self.solenoidal),
            ("torse_forming", &self.torse_forming),
            ("concircular", &self.concircular),
            ("constant_length", &self.constant_length),
            ("parallel", &self.parallel),
        ]
    }
}

/// Result of `check`, `recover-lambda`, `classify`, `identities` and the
/// sampled `curvature` suite.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub spec: String,
    pub version: &'static str,
    pub checks: Vec<CheckEntry>,
    pub classification: Option<ClassificationEntry>,
    pub status: &'static str,
}

impl ReportDocument {
    pub fn new(
        spec: &str,
        report: &CheckReport<f64>,
        extra: Vec<CheckEntry>,
        classification: Option<ClassificationEntry>,
    ) -> Self {
        let mut checks: Vec<CheckEntry> = report
            .checks
            .iter()
            .map(|c| CheckEntry::from_check(c, report.tolerance))
            .collect();
        checks.extend(extra);
        let status = if checks.iter().any(CheckEntry::failed) {
            "fail"
        } else {
            "pass"
        };
        ReportDocument {
            spec: spec.to_string(),
            version: VERSION,
            checks,
            classification,
            status,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Aligned tables; `with_values` adds a row per recorded value.
    pub fn to_text(&self, with_values: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "spec: {}  (soliton-forge {})", self.spec, self.version);
        let rows: Vec<[String; 5]> = self
            .checks
            .iter()
            .map(|c| {
                [
                    c.name.clone(),
                    c.status.to_string(),
                    c.residual.map_or("-".into(), |r| format!("{:.3e}", r.0)),
                    format!("{:.1e}", c.tolerance.0),
                    fmt_point(&c.worst_point),
                ]
            })
            .collect();
        table(
            &mut out,
            ["check", "status", "residual", "tolerance", "worst point"],
            &rows,
        );
        for c in &self.checks {
            if let Some(note) = &c.note {
                let _ = writeln!(out, "  {}: {}", c.name, note);
            }
        }
        if with_values {
            for c in self.checks.iter().filter(|c| !c.values.0.is_empty()) {
                let _ = writeln!(out, "\n{} at {}", c.name, fmt_point(&c.worst_point));
                let rows: Vec<[String; 2]> = c.values.0.iter().map(|(k, v)| [k.clone(), format!("{v:?}")]).collect();
                table(&mut out, ["value", ""], &rows);
            }
        }
        if let Some(cl) = &self.classification {
            out.push('\n');
            let rows: Vec<[String; 3]> = cl
                .flags()
                .iter()
                .map(|(name, f)| {
                    [
                        name.to_string(),
                        if f.holds { "yes" } else { "no" }.into(),
                        format!("{:.3e}", f.residual.0),
                    ]
                })
                .collect();
            table(&mut out, ["property", "holds", "residual"], &rows);
            if !cl.samples.is_empty() {
                let a: Vec<f64> = cl.samples.iter().map(|s| s.a.0).collect();
                let lo = a.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let _ = writeln!(out, "torse-forming a over samples: [{lo:.6e}, {hi:.6e}]");
            }
        }
        let _ = writeln!(out, "\nstatus: {}", self.status);
        out
    }
}

fn fmt_point(p: &[Num]) -> String {
    let parts: Vec<String> = p.iter().map(|x| format!("{:.6}", x.0)).collect();
    format!("({})", parts.join(", "))
}

fn table<const N: usize>(out: &mut String, header: [&str; N], rows: &[[String; N]]) {
    let mut width = header.map(str::len);
    for r in rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |out: &mut String, cells: &[&str]| {
        let mut s = String::new();
        for (c, w) in cells.iter().zip(&width) {
            let _ = write!(s, "{c:<w$}  ");
        }
        let _ = writeln!(out, "{}", s.trim_end());
    };
    line(out, &header);
    let rules = width.map(|w| "-".repeat(w));
    line(out, &rules.each_ref().map(String::as_str));
    for r in rows {
        line(out, &r.each_ref().map(String::as_str));
    }
}

/// Components of one tensor at one point.
#[derive(Clone, Debug, Serialize)]
pub struct TensorDocument {
    pub spec: String,
    pub version: &'static str,
    pub tensor: String,
    pub point: Vec<Num>,
    pub dimension: usize,
    /// `"lower"` or `"upper"` per slot.
    pub variance: Vec<&'static str>,
    /// Row-major over the slots.
    pub components: Vec<Num>,
}

impl TensorDocument {
    pub fn new(spec: &str, tensor: &str, value: &TensorValue<f64>) -> Self {
        TensorDocument {
            spec: spec.to_string(),
            version: VERSION,
            tensor: tensor.to_string(),
            point: nums(&value.point),
            dimension: value.dim(),
            variance: value
                .variance()
                .iter()
                .map(|v| match v {
                    Variance::Covariant => "lower",
                    Variance::Contravariant => "upper",
                })
                .collect(),
            components: nums(value.components()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tensor document serializes") + "\n"
    }

    /// One line per nonzero component, indices in slot order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} of {} at {}", self.tensor, self.spec, fmt_point(&self.point));
        let rank = self.variance.len();
        let rows: Vec<[String; 2]> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.0 != 0.0)
            .map(|(flat, c)| {
                let mut idx = vec![0; rank];
                let mut r = flat;
                for slot in (0..rank).rev() {
                    idx[slot] = r % self.dimension;
                    r /= self.dimension;
                }
                let label: Vec<String> = idx.iter().map(usize::to_string).collect();
                [format!("[{}]", label.join(",")), format!("{:?}", c.0)]
            })
            .collect();
        if rows.is_empty() {
            let _ = writeln!(out, "all components are zero");
        } else {
            table(&mut out, ["index", "value"], &rows);
        }
        out
    }
}
