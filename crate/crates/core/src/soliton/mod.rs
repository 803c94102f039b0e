//! Almost Ricci and almost Riemann soliton checks.
//!
//! Every check is evaluated at a single chart point and produces
//! [`CheckRecord`]s with fixed names; [`aggregate`] reduces per-point records
//! over a sample set.

pub mod aggregate;
pub mod classify;
pub mod equations;
pub mod gradient;
pub mod point;
pub mod record;
pub mod suites;
pub mod torse;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::chart::{ChartManifold, VectorFieldSpec};

pub use aggregate::{aggregate, AggregatedCheck, CheckReport};
pub use classify::{classify_point, ClassificationReport, PointClassification};
pub use equations::{recover_lambda, residual_contracted, residual_ricci, residual_riemann, LambdaRecovery};
pub use point::SolitonPoint;
pub use record::{CheckRecord, CheckStatus};
pub use suites::Suite;
pub use torse::{decompose, TorseFormingData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolitonKind {
    Riemann,
    Ricci,
}

impl SolitonKind {
    pub fn name(self) -> &'static str {
        match self {
            SolitonKind::Riemann => "riemann",
            SolitonKind::Ricci => "ricci",
        }
    }
}

impl fmt::Display for SolitonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolitonKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "riemann" => Ok(SolitonKind::Riemann),
            "ricci" => Ok(SolitonKind::Ricci),
            other => Err(Error::Invalid(format!("unknown soliton kind `{other}`"))),
        }
    }
}

/// A manifold, a potential vector field, and the soliton equation it is
/// tested against.
#[derive(Clone, Debug, PartialEq)]
pub struct SolitonInput {
    pub manifold: ChartManifold,
    pub field: VectorFieldSpec,
    pub kind: SolitonKind,
    pub lambda: Option<Expr>,
}

impl SolitonInput {
    pub fn new(manifold: ChartManifold, field: VectorFieldSpec, kind: SolitonKind) -> Self {
        SolitonInput {
            manifold,
            field,
            kind,
            lambda: None,
        }
    }

    pub fn with_lambda(mut self, lambda: Expr) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_kind(mut self, kind: SolitonKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn dimension(&self) -> usize {
        self.manifold.dimension()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckConfig {
    pub tolerance: f64,
    /// Jet order of the point frame; 3 enables the `∇Ric` checks.
    pub order: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            tolerance: 1e-8,
            order: 3,
        }
    }
}
