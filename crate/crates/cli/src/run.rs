//! Command execution: sampling, per-point suites, aggregation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use soliton_core::geometry::curvature::{conharmonic, curvature, weyl};
use soliton_core::sampling::{self, Exclusion};
use soliton_core::soliton::classify::{classify_point, PointClassification};
use soliton_core::{
    CheckRecord, CheckReport, ClassificationReport, SolitonKind, SolitonPoint, Suite, Tensor, TensorValue,
};

use crate::error::CliError;
use crate::report::{CheckEntry, ClassificationEntry, Num, ReportDocument, Samples, TensorDocument, Values};
use crate::spec::SpecFile;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_ORDER: usize = 3;
pub const THREADS_ENV: &str = "SOLITON_FORGE_THREADS";
pub const EXCLUSIONS: &str = "sampling.exclusions";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    RecoverLambda,
    Classify,
    Identities,
    Curvature,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Check,
        Command::RecoverLambda,
        Command::Classify,
        Command::Identities,
        Command::Curvature,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::RecoverLambda => "recover-lambda",
            Command::Classify => "classify",
            Command::Identities => "identities",
            Command::Curvature => "curvature",
        }
    }

    fn suite(self) -> Option<Suite> {
        match self {
            Command::Check => Some(Suite::Check),
            Command::RecoverLambda => Some(Suite::RecoverLambda),
            Command::Identities => Some(Suite::Identities),
            Command::Curvature => Some(Suite::Curvature),
            Command::Classify => None,
        }
    }

    fn classifies(self) -> bool {
        matches!(self, Command::Classify | Command::Identities)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorKind {
    Riemann,
    Ricci,
    Scalar,
    Weyl,
    Conharmonic,
}

impl TensorKind {
    pub const ALL: [TensorKind; 5] = [
        TensorKind::Riemann,
        TensorKind::Ricci,
        TensorKind::Scalar,
        TensorKind::Weyl,
        TensorKind::Conharmonic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TensorKind::Riemann => "riemann",
            TensorKind::Ricci => "ricci",
            TensorKind::Scalar => "scalar",
            TensorKind::Weyl => "weyl",
            TensorKind::Conharmonic => "conharmonic",
        }
    }
}

impl FromStr for TensorKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        TensorKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown tensor `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub kind: Option<SolitonKind>,
    pub tolerance: f64,
    pub at: Option<Vec<f64>>,
    pub order: usize,
    pub tensor: Option<TensorKind>,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            kind: None,
            tolerance: DEFAULT_TOLERANCE,
            at: None,
            order: DEFAULT_ORDER,
            tensor: None,
            threads: None,
        }
    }
}

impl Options {
    /// Reads the thread cap from the environment.
    pub fn with_env_threads(mut self) -> Self {
        self.threads = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0);
        self
    }
}

#[derive(Clone, Debug)]
pub enum Output {
    Report(ReportDocument),
    Tensor(TensorDocument),
}

impl Output {
    pub fn passed(&self) -> bool {
        match self {
            Output::Report(r) => r.passed(),
            Output::Tensor(_) => true,
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Output::Report(r) => r.to_json(),
            Output::Tensor(t) => t.to_json(),
        }
    }

    pub fn to_text(&self, command: Command) -> String {
        match self {
            Output::Report(r) => r.to_text(matches!(command, Command::RecoverLambda | Command::Curvature)),
            Output::Tensor(t) => t.to_text(),
        }
    }
}

type PointResult = (Vec<CheckRecord<f64>>, Option<PointClassification<f64>>);

pub fn run(command: Command, spec: &SpecFile, opts: &Options) -> Result<Output, CliError> {
    if !(opts.tolerance.is_finite() && opts.tolerance > 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {}",
            opts.tolerance
        )));
    }
    if !(2..=3).contains(&opts.order) {
        return Err(CliError::Usage(format!("order must be 2 or 3, got {}", opts.order)));
    }
    let n = spec.dimension();
    if let Some(p) = &opts.at {
        if p.len() != n {
            return Err(CliError::Usage(format!("--at needs {n} coordinates, got {}", p.len())));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Usage("--at coordinates must be finite".into()));
        }
    }
    let mut input = spec.input.clone();
    if let Some(kind) = opts.kind {
        if kind == SolitonKind::Riemann && n < 3 {
            return Err(CliError::Usage(
                "riemann soliton checks require dimension at least 3".into(),
            ));
        }
        input = input.with_kind(kind);
    }

    if command == Command::Curvature {
        match (opts.tensor, &opts.at) {
            (Some(t), Some(p)) => return tensor_at(spec, t, p, opts.order),
            (Some(_), None) => return Err(CliError::Usage("--tensor requires --at".into())),
            (None, _) => {}
        }
    } else if opts.tensor.is_some() {
        return Err(CliError::Usage("--tensor applies to the curvature command only".into()));
    }

    let eval = |p: &[f64]| -> soliton_core::Result<PointResult> {
        let pt = SolitonPoint::new(&input, p, opts.order, opts.tolerance)?;
        let records = match command.suite() {
            Some(s) => s.run(&pt, &input)?,
            None => Vec::new(),
        };
        let class = if command.classifies() {
            Some(classify_point(&pt, &input)?)
        } else {
            None
        };
        Ok((records, class))
    };

    let (points, results, exclusions) = match &opts.at {
        Some(p) => (vec![p.clone()], vec![eval(p)?], Vec::new()),
        None => sample(spec, opts.threads, &eval)?,
    };

    let mut records: Vec<Vec<CheckRecord<f64>>> = Vec::with_capacity(results.len());
    let mut classes = Vec::new();
    for (recs, class) in results {
        match class {
            Some(c) => {
                let mut recs = recs;
                if command == Command::Classify {
                    recs.extend(c.concircular_checks.iter().cloned());
                }
                records.push(recs);
                classes.push(c);
            }
            None => records.push(recs),
        }
    }
    let report = CheckReport::new(opts.tolerance, &points, &records);
    let classification = (!classes.is_empty())
        .then(|| ClassificationEntry::from_report(&ClassificationReport::from_points(&classes, opts.tolerance)));
    let extra = exclusion_entry(&exclusions, points.len(), opts.tolerance)
        .into_iter()
        .collect();
    Ok(Output::Report(ReportDocument::new(
        &spec.name,
        &report,
        extra,
        classification,
    )))
}

type Sampled = (Vec<Vec<f64>>, Vec<PointResult>, Vec<Exclusion>);

fn sample(
    spec: &SpecFile,
    threads: Option<usize>,
    eval: &(dyn Fn(&[f64]) -> soliton_core::Result<PointResult> + Sync),
) -> Result<Sampled, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let draws = pool.install(|| {
        (0..spec.count)
            .into_par_iter()
            .map(|i| sampling::sample_one(&spec.bounds, spec.seed, i, eval))
            .collect::<soliton_core::Result<Vec<_>>>()
    })?;
    let set = sampling::collect(draws);
    if set.points.is_empty() {
        let reason = set.exclusions.last().map(|e| e.reason.clone()).unwrap_or_default();
        return Err(CliError::NoSamples {
            count: spec.count,
            reason,
        });
    }
    let (points, results) = set.points.into_iter().unzip();
    Ok((points, results, set.exclusions))
}

fn exclusion_entry(exclusions: &[Exclusion], accepted: usize, tolerance: f64) -> Option<CheckEntry> {
    let first = exclusions.first()?;
    Some(CheckEntry {
        name: EXCLUSIONS.into(),
        status: "skipped",
        pass: true,
        residual: None,
        scale: None,
        tolerance: Num(tolerance),
        worst_point: first.last_candidate.iter().copied().map(Num).collect(),
        samples: Samples {
            passed: 0,
            failed: 0,
            skipped: exclusions.len(),
        },
        note: Some(format!(
            "{} sample(s) excluded after {} attempts each; first: index {}, {}",
            exclusions.len(),
            sampling::MAX_ATTEMPTS,
            first.index,
            first.reason
        )),
        values: Values(vec![
            ("excluded".into(), exclusions.len() as f64),
            ("accepted".into(), accepted as f64),
        ]),
    })
}

fn tensor_at(spec: &SpecFile, kind: TensorKind, p: &[f64], order: usize) -> Result<Output, CliError> {
    let frame = spec.input.manifold.frame_at(p, order)?;
    let c = curvature(&frame)?;
    let field = match kind {
        TensorKind::Riemann => c.riemann.clone(),
        TensorKind::Ricci => c.ricci.clone(),
        TensorKind::Scalar => Tensor::new(Vec::new(), frame.dim(), vec![c.scalar.clone()]),
        TensorKind::Weyl => weyl(&frame, &c)?,
        TensorKind::Conharmonic => conharmonic(&frame, &c)?,
    };
    let value: TensorValue<f64> = field.at(p);
    Ok(Output::Tensor(TensorDocument::new(&spec.name, kind.name(), &value)))
}
