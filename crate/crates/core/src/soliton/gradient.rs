//! Identities for gradient potential fields.

use crate::error::Result;
use crate::geometry::ops;
use crate::geometry::tensor::Variance;
use crate::jet::Jet;
use crate::residual::{rank_one, Residual};
use crate::scalar::Scalar;
use crate::soliton::point::SolitonPoint;
use crate::soliton::record::CheckRecord;
use crate::soliton::{SolitonInput, SolitonKind};

pub const BOCHNER: &str = "gradient.bochner";
pub const LIE_DIVERGENCE: &str = "gradient.lie_divergence";
pub const RIC_VV: &str = "gradient.ric_vv";
pub const DIVERGENCE: &str = "gradient.divergence";
pub const GRAD_LAMBDA: &str = "gradient.grad_lambda";

pub const NORM_LIE_NABLA: &str = "norms.lie_nabla";
pub const NORM_RICCI: &str = "norms.ricci";
pub const NORM_SOLENOIDAL: &str = "norms.solenoidal";
pub const NORM_SOLENOIDAL_BOCHNER: &str = "norms.solenoidal_bochner";
pub const NORM_UNITARY: &str = "norms.unitary_ricci_flat";

pub const CONSTANT_RIC_VV: &str = "constant_length.ric_vv";
pub const CONSTANT_BOCHNER: &str = "constant_length.bochner";
pub const CONSTANT_LAMBDA: &str = "constant_length.lambda";

const NOT_GRADIENT: &str = "hypothesis unmet: V is not a gradient field at the point";

fn covector_norm<T: Scalar>(pt: &SolitonPoint<T>, w: &[Jet<T>]) -> T {
    pt.frame.orthonormal(&rank_one(Variance::Covariant, w)).max_abs()
}

/// Bochner-type identities for every gradient field and, for Riemann
/// solitons, the consequences for `Ric(V,V)`, `div V` and `grad λ`.
pub fn gradient_identity_suite<T: Scalar>(pt: &SolitonPoint<T>, input: &SolitonInput) -> Result<Vec<CheckRecord<T>>> {
    let tol = pt.tolerance;
    let mut names = vec![BOCHNER, LIE_DIVERGENCE];
    if pt.kind == SolitonKind::Riemann {
        names.extend([RIC_VV, DIVERGENCE, GRAD_LAMBDA]);
    }
    let gradient = pt.gradient_residual(input)?;
    if !gradient.passes(tol) {
        return Ok(names
            .iter()
            .map(|n| CheckRecord::skipped(n, NOT_GRADIENT).with_value("gradient_residual", gradient.raw))
            .collect());
    }

    let f = &pt.frame;
    let two = T::lit(2.0);
    let lap = ops::laplacian(f, &pt.norm_sq)?.value();
    let nabla_sq = ops::norm_squared(f, &pt.nabla_v).value();
    let ric_vv = pt.ric_vv().value();
    let v_div = pt.along_v(&pt.div_v)?.value();
    let bochner = lap - two * nabla_sq - two * ric_vv - two * v_div;
    let mut out = vec![CheckRecord::measured(
        BOCHNER,
        Residual::of_terms(bochner, &[lap, two * nabla_sq, two * ric_vv, two * v_div]),
        tol,
    )
    .with_values([
        ("laplacian_norm_sq", lap),
        ("nabla_v_sq", nabla_sq),
        ("ric_vv", ric_vv),
        ("v_div_v", v_div),
    ])];

    let div_lie = ops::divergence_02(f, &pt.lie)?;
    let div_lie_v = ops::pairing(f, &div_lie, &pt.v).value();
    let defect = div_lie_v - two * v_div - two * ric_vv;
    out.push(
        CheckRecord::measured(
            LIE_DIVERGENCE,
            Residual::of_terms(defect, &[div_lie_v, two * v_div, two * ric_vv]),
            tol,
        )
        .with_value("div_lie_v", div_lie_v),
    );

    if pt.kind == SolitonKind::Riemann {
        let lambda = pt.lambda()?;
        let nf = pt.n();
        let one = T::one();
        let v_lambda = pt.along_v(lambda)?.value();
        let half = (nf - one) / two;
        out.push(
            CheckRecord::measured(
                RIC_VV,
                Residual::of_terms(ric_vv + half * v_lambda, &[ric_vv, half * v_lambda]),
                tol,
            )
            .with_values([("ric_vv", ric_vv), ("v_lambda", v_lambda)]),
        );

        let norm_sq = pt.norm_sq.value();
        let v_norm = pt.along_v(&pt.norm_sq)?.value();
        let terms = [
            pt.div_v.value(),
            (nf - one) * lambda.value(),
            half * v_lambda / norm_sq,
            (nf - two) / two * v_norm / norm_sq,
        ];
        out.push(
            CheckRecord::measured(
                DIVERGENCE,
                Residual::of_terms(terms[0] - terms[1] - terms[2] + terms[3], &terms),
                tol,
            )
            .with_values([("div_v", terms[0]), ("rhs", terms[1] + terms[2] - terms[3])]),
        );

        // grad λ + 2/(n−1) Q(V)
        let grad_lambda = ops::gradient(f, lambda)?;
        let n = pt.dim();
        let qv: Vec<Jet<T>> = (0..n)
            .map(|l| {
                (0..n).fold(f.zero(), |acc, j| {
                    &acc + &(pt.curvature.ricci_operator.get(&[j, l]) * &pt.v[j])
                })
            })
            .collect();
        let k = two / (nf - one);
        let scaled: Vec<Jet<T>> = qv.iter().map(|q| q.scale(k)).collect();
        let defect: Vec<Jet<T>> = grad_lambda.iter().zip(&scaled).map(|(a, b)| a + b).collect();
        let up = |w: &[Jet<T>]| rank_one(Variance::Contravariant, w);
        out.push(
            CheckRecord::measured(
                GRAD_LAMBDA,
                Residual::tensor(f, &up(&defect), &[&up(&grad_lambda), &up(&scaled)]),
                tol,
            )
            .with_values([
                ("grad_lambda", pt.vector_norm_max(&grad_lambda)),
                ("scaled_q_v", pt.vector_norm_max(&scaled)),
            ]),
        );
    }
    Ok(out)
}

/// Norm identities for `Ric` and `£_V g` on Riemann solitons.
pub fn ric_norm_identity<T: Scalar>(pt: &SolitonPoint<T>, input: &SolitonInput) -> Result<Vec<CheckRecord<T>>> {
    let tol = pt.tolerance;
    let f = &pt.frame;
    let nf = pt.n();
    let one = T::one();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let lambda = pt.lambda()?;
    let l = lambda.value();
    let div = pt.div_v.value();
    let lie_sq = ops::norm_squared(f, &pt.lie).value();
    let nabla_sq = ops::norm_squared(f, &pt.nabla_v).value();
    let ric_sq = ops::norm_squared(f, &pt.curvature.ricci).value();
    let gradient = pt.gradient_residual(input)?.passes(tol);
    let mut out = Vec::new();

    let a = CheckRecord::measured(NORM_LIE_NABLA, Residual::between(lie_sq, four * nabla_sq), tol)
        .with_values([("lie_sq", lie_sq), ("nabla_v_sq", nabla_sq)]);
    out.push(if gradient { a } else { a.downgrade(NOT_GRADIENT) });

    let m2 = (nf - two) * (nf - two);
    let mu = ((nf - one) * l - div) / (nf - two);
    let rhs = m2 * (nf * mu * mu - two * mu * div + lie_sq / four);
    out.push(
        CheckRecord::measured(NORM_RICCI, Residual::between(ric_sq, rhs), tol).with_values([
            ("ric_sq", ric_sq),
            ("rhs", rhs),
            ("mu", mu),
            ("div_v", div),
            ("nabla_v_sq", nabla_sq),
        ]),
    );

    // Solenoidal on a neighbourhood: div V and d(div V) vanish.
    let ddiv = ops::differential(&pt.div_v)?;
    let solenoidal =
        Residual::of_terms(div, &[]).passes(tol) && Residual::new(covector_norm(pt, &ddiv), T::zero()).passes(tol);
    let norm_sq = pt.norm_sq.value();
    let lap = ops::laplacian(f, &pt.norm_sq)?.value();
    let v_lambda = pt.along_v(lambda)?.value();
    let v_norm = pt.along_v(&pt.norm_sq)?.value();
    let base = nf * (nf - one) * (nf - one) * l * l;
    let p4 = base + m2 / two * (lap + (nf - one) * v_lambda);
    let cor = base - (nf - one) * m2 * norm_sq * l + m2 / two * (lap + (nf - two) * v_norm);
    if gradient && solenoidal {
        out.push(
            CheckRecord::measured(NORM_SOLENOIDAL, Residual::between(ric_sq, p4), tol)
                .with_values([("ric_sq", ric_sq), ("rhs", p4)]),
        );
        out.push(
            CheckRecord::measured(NORM_SOLENOIDAL_BOCHNER, Residual::between(ric_sq, cor), tol)
                .with_values([("ric_sq", ric_sq), ("rhs", cor)]),
        );
    } else {
        let why = if gradient {
            "hypothesis unmet: V is not solenoidal near the point"
        } else {
            NOT_GRADIENT
        };
        out.push(CheckRecord::skipped(NORM_SOLENOIDAL, why).with_value("div_v", div));
        out.push(CheckRecord::skipped(NORM_SOLENOIDAL_BOCHNER, why).with_value("div_v", div));
    }

    // Unit length on a neighbourhood: |V|² = 1 and d|V|² = 0.
    let dnorm = ops::differential(&pt.norm_sq)?;
    let unitary =
        Residual::between(norm_sq, one).passes(tol) && Residual::new(covector_norm(pt, &dnorm), T::zero()).passes(tol);
    if gradient && solenoidal && unitary {
        let ric = pt.curvature.ricci.values();
        out.push(CheckRecord::measured(
            NORM_UNITARY,
            Residual::tensor(f, &ric, &[&f.metric_values()]),
            tol,
        ));
    } else {
        out.push(
            CheckRecord::skipped(
                NORM_UNITARY,
                "hypothesis unmet: V is not a unit solenoidal gradient field",
            )
            .with_value("norm_sq", norm_sq),
        );
    }
    Ok(out)
}

/// Pointwise ingredients of the constant-length argument: with `|V|`
/// and `λ` locally constant, `Ric(V,V) = 0`, `|∇V|² + V(div V) = 0`
/// and `λ = div V/(n−1)`.
pub fn constant_length_ingredient<T: Scalar>(
    pt: &SolitonPoint<T>,
    input: &SolitonInput,
) -> Result<Vec<CheckRecord<T>>> {
    let tol = pt.tolerance;
    let f = &pt.frame;
    let names = [CONSTANT_RIC_VV, CONSTANT_BOCHNER, CONSTANT_LAMBDA];
    let lambda = pt.lambda()?;
    let gradient = pt.gradient_residual(input)?.passes(tol);
    let v_norm = pt.along_v(&pt.norm_sq)?.value();
    let dnorm = ops::differential(&pt.norm_sq)?;
    let hess = ops::hessian(f, &pt.norm_sq)?.values();
    let dlambda = ops::differential(lambda)?;
    let scale = pt.norm_sq.value();
    let constant_length = Residual::new(v_norm.abs(), scale).passes(tol)
        && Residual::new(covector_norm(pt, &dnorm), scale).passes(tol)
        && Residual::new(f.orthonormal(&hess).max_abs(), scale).passes(tol);
    let constant_lambda = Residual::new(covector_norm(pt, &dlambda), lambda.value().abs()).passes(tol);

    let why = if !gradient {
        Some(NOT_GRADIENT)
    } else if !constant_length {
        Some("hypothesis unmet: |V| is not constant near the point")
    } else if !constant_lambda {
        Some("hypothesis unmet: lambda is not constant near the point")
    } else {
        None
    };
    if let Some(why) = why {
        return Ok(names
            .iter()
            .map(|n| CheckRecord::skipped(n, why).with_value("v_norm_sq", v_norm))
            .collect());
    }

    let ric_vv = pt.ric_vv().value();
    let nabla_sq = ops::norm_squared(f, &pt.nabla_v).value();
    let v_div = pt.along_v(&pt.div_v)?.value();
    let div = pt.div_v.value();
    let expect = div / (pt.n() - T::one());
    Ok(vec![
        CheckRecord::measured(CONSTANT_RIC_VV, Residual::of_terms(ric_vv, &[]), tol).with_value("ric_vv", ric_vv),
        CheckRecord::measured(
            CONSTANT_BOCHNER,
            Residual::of_terms(nabla_sq + v_div, &[nabla_sq, v_div]),
            tol,
        )
        .with_values([("nabla_v_sq", nabla_sq), ("v_div_v", v_div)]),
        CheckRecord::measured(CONSTANT_LAMBDA, Residual::between(lambda.value(), expect), tol)
            .with_values([("lambda", lambda.value()), ("div_v_over_n_minus_1", expect)]),
    ])
}
