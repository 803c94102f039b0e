//! Vector-field classification: gradient, solenoidal, torse-forming,
//! concircular, constant length, parallel.

use crate::error::Result;
use crate::residual::Residual;
use crate::scalar::Scalar;
use crate::soliton::point::SolitonPoint;
use crate::soliton::record::CheckRecord;
use crate::soliton::torse::{concircular_checks, decompose};
use crate::soliton::SolitonInput;

/// Classification evidence at one point.
#[derive(Clone, Debug)]
pub struct PointClassification<T> {
    pub point: Vec<T>,
    pub gradient: Residual<T>,
    /// `|div V|` against `max|∇V|`.
    pub solenoidal: Residual<T>,
    pub torse_forming: Residual<T>,
    pub a: T,
    /// Orthonormal maximum of `ψ`.
    pub psi_norm: T,
    pub concircular: bool,
    /// `|V(|V|²)|` against `2|V|²·max|∇V|`.
    pub constant_length: Residual<T>,
    /// `max|∇V|` against `max|V|`.
    pub parallel: Residual<T>,
    /// Concircular identities, skipped for other fields.
    pub concircular_checks: Vec<CheckRecord<T>>,
}

pub fn classify_point<T: Scalar>(pt: &SolitonPoint<T>, input: &SolitonInput) -> Result<PointClassification<T>> {
    let tol = pt.tolerance;
    let f = &pt.frame;
    let nabla = f.orthonormal(&pt.nabla_v.values()).max_abs();
    let tf = decompose(pt)?;
    let v_norm = pt.along_v(&pt.norm_sq)?.value();
    Ok(PointClassification {
        point: pt.point().to_vec(),
        gradient: pt.gradient_residual(input)?,
        solenoidal: Residual::new(pt.div_v.value().abs(), nabla),
        torse_forming: tf.residual,
        a: tf.a.value(),
        psi_norm: tf.psi_norm(pt),
        concircular: tf.is_concircular(pt, tol),
        constant_length: Residual::new(v_norm.abs(), T::lit(2.0) * pt.norm_sq.value() * nabla),
        parallel: Residual::new(nabla, pt.vector_norm_max(&pt.v)),
        concircular_checks: concircular_checks(pt)?,
    })
}

/// A property that holds at every sample, with the worst residual.
#[derive(Clone, Debug, PartialEq)]
pub struct Flag<T> {
    pub holds: bool,
    pub residual: T,
    /// Sample index of the worst residual (lowest index on ties).
    pub worst: usize,
}

impl<T: Scalar> Flag<T> {
    fn over(residuals: impl Iterator<Item = Residual<T>>, tol: T) -> Self {
        let mut flag = Flag {
            holds: true,
            residual: T::zero(),
            worst: 0,
        };
        let mut worst_ratio = T::neg_infinity();
        for (i, r) in residuals.enumerate() {
            flag.holds &= r.passes(tol);
            let ratio = if r.raw.is_finite() { r.ratio() } else { T::infinity() };
            if ratio > worst_ratio {
                worst_ratio = ratio;
                flag.residual = r.raw;
                flag.worst = i;
            }
        }
        flag
    }
}

/// Classification over a sample set.
#[derive(Clone, Debug)]
pub struct ClassificationReport<T> {
    pub is_gradient: Flag<T>,
    pub is_solenoidal: Flag<T>,
    pub is_torse_forming: Flag<T>,
    /// Residual is the largest `ψ` norm.
    pub is_concircular: Flag<T>,
    pub constant_length: Flag<T>,
    pub is_parallel: Flag<T>,
    pub points: Vec<Vec<T>>,
    pub a_values: Vec<T>,
    pub psi_norms: Vec<T>,
}

impl<T: Scalar> ClassificationReport<T> {
    pub fn from_points(points: &[PointClassification<T>], tol: T) -> Self {
        let mut concircular = Flag::over(points.iter().map(|p| Residual::new(p.psi_norm, T::zero())), tol);
        if let Some(i) = points.iter().position(|p| !p.concircular) {
            concircular.holds = false;
            concircular.worst = i;
            concircular.residual = points[i].psi_norm;
        }
        ClassificationReport {
            is_gradient: Flag::over(points.iter().map(|p| p.gradient), tol),
            is_solenoidal: Flag::over(points.iter().map(|p| p.solenoidal), tol),
            is_torse_forming: Flag::over(points.iter().map(|p| p.torse_forming), tol),
            is_concircular: concircular,
            constant_length: Flag::over(points.iter().map(|p| p.constant_length), tol),
            is_parallel: Flag::over(points.iter().map(|p| p.parallel), tol),
            points: points.iter().map(|p| p.point.clone()).collect(),
            a_values: points.iter().map(|p| p.a).collect(),
            psi_norms: points.iter().map(|p| p.psi_norm).collect(),
        }
    }

    /// `(name, flag)` pairs in reporting order.
    pub fn flags(&self) -> [(&'static str, &Flag<T>); 6] {
        [
            ("gradient", &self.is_gradient),
            ("solenoidal", &self.is_solenoidal),
            ("torse_forming", &self.is_torse_forming),
            ("concircular", &self.is_concircular),
            ("constant_length", &self.constant_length),
            ("parallel", &self.is_parallel),
        ]
    }
}
