//! Defining equations, their contractions, and recovery of `λ`.

use crate::error::{Error, Result};
use crate::geometry::curvature::{unit_curvature_tensor, weyl};
use crate::geometry::ops;
use crate::geometry::tensor::kulkarni_nomizu;
use crate::jet::Jet;
use crate::residual::Residual;
use crate::scalar::Scalar;
use crate::soliton::point::SolitonPoint;
use crate::soliton::SolitonKind;

/// `2R + (£_V g)⊙g − 2λG` for the given `λ` jet.
pub fn residual_riemann_with<T: Scalar>(pt: &SolitonPoint<T>, lambda: &Jet<T>) -> Residual<T> {
    let f = &pt.frame;
    let r2 = pt.curvature.lowered.scale_jets(T::lit(2.0));
    let lg = kulkarni_nomizu(&pt.lie, &f.metric_field());
    let rhs = unit_curvature_tensor(f).scale_by(&lambda.scale(T::lit(2.0)));
    let defect = r2.add(&lg).sub(&rhs);
    Residual::field(f, &defect, &[&r2, &lg, &rhs])
}

/// Riemann soliton equation `½ £_V g ⊙ g + R = λG`, written as
/// `2R + (£_V g)⊙g = 2λG`.
pub fn residual_riemann<T: Scalar>(pt: &SolitonPoint<T>) -> Result<Residual<T>> {
    Ok(residual_riemann_with(pt, pt.lambda()?))
}

/// Ricci soliton equation `½ £_V g + Ric = λg`.
pub fn residual_ricci<T: Scalar>(pt: &SolitonPoint<T>) -> Result<Residual<T>> {
    let f = &pt.frame;
    let half_lie = pt.lie.scale_jets(T::lit(0.5));
    let rhs = f.metric_field().scale_by(pt.lambda()?);
    let defect = half_lie.add(&pt.curvature.ricci).sub(&rhs);
    Ok(Residual::field(f, &defect, &[&half_lie, &pt.curvature.ricci, &rhs]))
}

/// Contractions of the Riemann soliton equation:
/// `½£_V g + Ric/(n−2) = ((n−1)λ − div V)/(n−2) g` and
/// `scal = (n−1)(nλ − 2 div V)`.
pub fn residual_contracted<T: Scalar>(pt: &SolitonPoint<T>) -> Result<(Residual<T>, Residual<T>)> {
    let n = pt.dim();
    if n < 3 {
        return Err(Error::Dimension { needed: 3, got: n });
    }
    let f = &pt.frame;
    let nf = pt.n();
    let one = T::one();
    let lambda = pt.lambda()?;
    let mu = (&lambda.scale(nf - one) - &pt.div_v).scale(one / (nf - T::lit(2.0)));
    let half_lie = pt.lie.scale_jets(T::lit(0.5));
    let ric = pt.curvature.ricci.scale_jets(one / (nf - T::lit(2.0)));
    let rhs = f.metric_field().scale_by(&mu);
    let eq4 = Residual::field(f, &half_lie.add(&ric).sub(&rhs), &[&half_lie, &ric, &rhs]);

    let scal = pt.curvature.scalar.value();
    let expect = (nf - one) * (nf * lambda.value() - T::lit(2.0) * pt.div_v.value());
    let eq9 = Residual::between(scal, expect);
    Ok((eq4, eq9))
}

/// Weyl tensor, which vanishes for Riemann solitons in dimension `≥ 3`.
pub fn residual_weyl<T: Scalar>(pt: &SolitonPoint<T>) -> Result<Residual<T>> {
    let w = weyl(&pt.frame, &pt.curvature)?;
    Ok(Residual::field(&pt.frame, &w, &[&pt.curvature.lowered]))
}

/// `λ` recovered from a gradient field alone, with its six ingredients.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaRecovery<T> {
    pub lambda: T,
    pub norm_sq: T,
    pub v_norm_sq: T,
    pub laplacian_norm_sq: T,
    pub nabla_v_sq: T,
    pub div_v: T,
    pub v_div_v: T,
    /// Whether `V` is a gradient field at the point (the hypothesis).
    pub hypothesis_met: bool,
    pub gradient_residual: T,
}

impl<T: Scalar> LambdaRecovery<T> {
    /// Ingredient names and values in reporting order.
    pub fn ingredients(&self) -> [(&'static str, T); 6] {
        [
            ("norm_sq", self.norm_sq),
            ("v_norm_sq", self.v_norm_sq),
            ("laplacian_norm_sq", self.laplacian_norm_sq),
            ("nabla_v_sq", self.nabla_v_sq),
            ("div_v", self.div_v),
            ("v_div_v", self.v_div_v),
        ]
    }
}

/// Riemann kind:
/// `λ = [Δ|V|² − 2|∇V|² + (n−2)V(|V|²) − 2V(div V)] / (2(n−1)|V|²) + div V/(n−1)`.
/// Ricci kind:
/// `λ = [Δ|V|² − 2|∇V|² + V(|V|²) − 2V(div V)] / (2|V|²)`.
pub fn recover_lambda<T: Scalar>(
    pt: &SolitonPoint<T>,
    input: &crate::soliton::SolitonInput,
) -> Result<LambdaRecovery<T>> {
    let n = pt.dim();
    if n < 3 {
        return Err(Error::Dimension { needed: 3, got: n });
    }
    let f = &pt.frame;
    let norm_sq = pt.norm_sq.value();
    if !(norm_sq > T::zero()) {
        return Err(Error::ZeroVectorField);
    }
    let v_norm_sq = pt.along_v(&pt.norm_sq)?.value();
    let laplacian_norm_sq = ops::laplacian(f, &pt.norm_sq)?.value();
    let nabla_v_sq = ops::norm_squared(f, &pt.nabla_v).value();
    let div_v = pt.div_v.value();
    let v_div_v = pt.along_v(&pt.div_v)?.value();

    let nf = pt.n();
    let one = T::one();
    let two = T::lit(2.0);
    let core = laplacian_norm_sq - two * nabla_v_sq - two * v_div_v;
    let lambda = match pt.kind {
        SolitonKind::Riemann => (core + (nf - two) * v_norm_sq) / (two * (nf - one) * norm_sq) + div_v / (nf - one),
        SolitonKind::Ricci => (core + v_norm_sq) / (two * norm_sq),
    };
    let gradient = pt.gradient_residual(input)?;
    Ok(LambdaRecovery {
        lambda,
        norm_sq,
        v_norm_sq,
        laplacian_norm_sq,
        nabla_v_sq,
        div_v,
        v_div_v,
        hypothesis_met: gradient.passes(pt.tolerance),
        gradient_residual: gradient.raw,
    })
}
