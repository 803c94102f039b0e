//! Named check suites evaluated at one point.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::curvature::{contracted_bianchi, curvature_symmetries};
use crate::residual::{rank_one, Residual};
use crate::scalar::Scalar;
use crate::soliton::equations::{recover_lambda, residual_contracted, residual_ricci, residual_riemann, residual_weyl};
use crate::soliton::gradient::{constant_length_ingredient, gradient_identity_suite, ric_norm_identity};
use crate::soliton::point::SolitonPoint;
use crate::soliton::record::CheckRecord;
use crate::soliton::torse::{
    concircular_checks, conharmonic_criterion, jacobi_condition, nabla_ric_conditions, torse_forming_suite,
};
use crate::soliton::{SolitonInput, SolitonKind};

pub const RIEMANN: &str = "soliton.riemann";
pub const RICCI: &str = "soliton.ricci";
pub const CONTRACTED: &str = "soliton.contracted";
pub const SCALAR_CURVATURE: &str = "soliton.scalar_curvature";
pub const WEYL: &str = "soliton.weyl";
pub const LAMBDA_RECOVERY: &str = "lambda.recovery";
pub const FIRST_PAIR: &str = "curvature.first_pair";
pub const SECOND_PAIR: &str = "curvature.second_pair";
pub const PAIR_EXCHANGE: &str = "curvature.pair_exchange";
pub const BIANCHI: &str = "curvature.bianchi";
pub const CONTRACTED_BIANCHI: &str = "curvature.contracted_bianchi";

const GRADIENT_UNMET: &str = "hypothesis unmet: V is not a gradient field at the point";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Defining equation and its contractions.
    Check,
    /// Every identity in the catalog.
    Identities,
    RecoverLambda,
    /// Curvature symmetries only.
    Curvature,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Check => "check",
            Suite::Identities => "identities",
            Suite::RecoverLambda => "recover-lambda",
            Suite::Curvature => "curvature",
        }
    }

    /// Runs the suite at one point.
    pub fn run<T: Scalar>(self, pt: &SolitonPoint<T>, input: &SolitonInput) -> Result<Vec<CheckRecord<T>>> {
        match self {
            Suite::Check => equation_checks(pt),
            Suite::RecoverLambda => Ok(vec![lambda_record(pt, input)?]),
            Suite::Curvature => curvature_checks(pt),
            Suite::Identities => {
                let mut out = equation_checks(pt)?;
                out.push(lambda_record(pt, input)?);
                out.extend(gradient_identity_suite(pt, input)?);
                if pt.kind == SolitonKind::Riemann {
                    out.extend(ric_norm_identity(pt, input)?);
                    out.extend(constant_length_ingredient(pt, input)?);
                    out.extend(torse_forming_suite(pt)?);
                    out.extend(nabla_ric_conditions(pt)?);
                    out.extend(jacobi_condition(pt)?);
                } else {
                    out.extend(conharmonic_criterion(pt)?);
                }
                out.extend(concircular_checks(pt)?);
                out.extend(curvature_checks(pt)?);
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Suite::Check, Suite::Identities, Suite::RecoverLambda, Suite::Curvature]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }
}

fn equation_checks<T: Scalar>(pt: &SolitonPoint<T>) -> Result<Vec<CheckRecord<T>>> {
    let tol = pt.tolerance;
    let mut out = Vec::new();
    match pt.kind {
        SolitonKind::Riemann => {
            out.push(CheckRecord::measured(RIEMANN, residual_riemann(pt)?, tol));
            if pt.dim() >= 3 {
                let (eq4, eq9) = residual_contracted(pt)?;
                out.push(CheckRecord::measured(CONTRACTED, eq4, tol));
                out.push(
                    CheckRecord::measured(SCALAR_CURVATURE, eq9, tol).with_value("scal", pt.curvature.scalar.value()),
                );
                out.push(CheckRecord::measured(WEYL, residual_weyl(pt)?, tol));
            } else {
                for name in [CONTRACTED, SCALAR_CURVATURE, WEYL] {
                    out.push(CheckRecord::skipped(name, "requires dimension at least 3"));
                }
            }
        }
        SolitonKind::Ricci => out.push(CheckRecord::measured(RICCI, residual_ricci(pt)?, tol)),
    }
    Ok(out)
}

/// Recovered `λ` against the supplied one; downgraded when `V` is not a
/// gradient field, reported without a verdict when no `λ` is supplied.
pub fn lambda_record<T: Scalar>(pt: &SolitonPoint<T>, input: &SolitonInput) -> Result<CheckRecord<T>> {
    if pt.dim() < 3 {
        return Ok(CheckRecord::skipped(LAMBDA_RECOVERY, "requires dimension at least 3"));
    }
    let rec = recover_lambda(pt, input)?;
    let mut values = vec![("recovered", rec.lambda)];
    values.extend(rec.ingredients());
    values.push(("gradient_residual", rec.gradient_residual));
    let record = match &pt.lambda {
        Some(l) => CheckRecord::measured(LAMBDA_RECOVERY, Residual::between(rec.lambda, l.value()), pt.tolerance)
            .with_value("supplied", l.value()),
        None => CheckRecord::skipped(LAMBDA_RECOVERY, "no lambda supplied; recovered value reported"),
    }
    .with_values(values);
    Ok(if rec.hypothesis_met {
        record
    } else {
        record.downgrade(GRADIENT_UNMET)
    })
}

fn curvature_checks<T: Scalar>(pt: &SolitonPoint<T>) -> Result<Vec<CheckRecord<T>>> {
    let tol = pt.tolerance;
    let c = &pt.curvature;
    let d = curvature_symmetries(c);
    let m = d.magnitude;
    let mut out = vec![
        CheckRecord::measured(FIRST_PAIR, Residual::new(d.first_pair, m), tol),
        CheckRecord::measured(SECOND_PAIR, Residual::new(d.second_pair, m), tol),
        CheckRecord::measured(PAIR_EXCHANGE, Residual::new(d.pair_exchange, m), tol),
        CheckRecord::measured(BIANCHI, Residual::new(d.bianchi, m), tol),
    ];
    out.push(match contracted_bianchi(&pt.frame, c) {
        Ok(defect) => {
            let f = &pt.frame;
            let scale = f.orthonormal(&c.ricci.values()).max_abs();
            let raw = f
                .orthonormal(&rank_one(crate::geometry::tensor::Variance::Covariant, &defect))
                .max_abs();
            CheckRecord::measured(CONTRACTED_BIANCHI, Residual::new(raw, scale), tol)
        }
        Err(Error::Order { .. }) => CheckRecord::skipped(CONTRACTED_BIANCHI, "requires jet order 3"),
        Err(e) => return Err(e),
    });
    Ok(out)
}
