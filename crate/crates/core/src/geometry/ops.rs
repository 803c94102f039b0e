//! Differential operators at a chart point.
//!
//! Inputs and outputs are jets, so every result carries its own coordinate
//! derivatives (one order lower per derivative taken).

use crate::error::Result;
use crate::geometry::frame::PointFrame;
use crate::geometry::tensor::{Ring, Tensor, TensorField, Variance};
use crate::jet::Jet;
use crate::scalar::Scalar;

use Variance::{Contravariant as Up, Covariant as Lo};

fn sum<T: Scalar>(frame: &PointFrame<T>, terms: impl IntoIterator<Item = Jet<T>>) -> Jet<T> {
    terms.into_iter().fold(frame.zero(), |acc, t| &acc + &t)
}

/// `(∂_0 h, .., ∂_{n-1} h)` as jets one order lower.
pub fn differential<T: Scalar>(h: &Jet<T>) -> Result<Vec<Jet<T>>> {
    (0..h.nvars()).map(|i| h.derivative(i)).collect()
}

/// `V(h) = V^i ∂_i h`
pub fn directional<T: Scalar>(frame: &PointFrame<T>, v: &[Jet<T>], h: &Jet<T>) -> Result<Jet<T>> {
    let dh = differential(h)?;
    Ok(sum(frame, v.iter().zip(&dh).map(|(a, b)| a * b)))
}

/// `grad^i h = g^{ij} ∂_j h`
pub fn gradient<T: Scalar>(frame: &PointFrame<T>, h: &Jet<T>) -> Result<Vec<Jet<T>>> {
    Ok(frame.raise(&differential(h)?))
}

/// `Hess_ij = ∂_i∂_j h − Γ^k_ij ∂_k h`
pub fn hessian<T: Scalar>(frame: &PointFrame<T>, h: &Jet<T>) -> Result<TensorField<T>> {
    let n = frame.dim();
    let dh = differential(h)?;
    let ddh = dh.iter().map(differential).collect::<Result<Vec<_>>>()?;
    Ok(Tensor::covariant(2, n, |s| {
        let (i, j) = (s[0], s[1]);
        let conn = sum(frame, (0..n).map(|k| frame.christoffel_jet(k, i, j) * &dh[k]));
        &ddh[i][j] - &conn
    }))
}

/// `Δh = g^{ij} Hess_ij`
pub fn laplacian<T: Scalar>(frame: &PointFrame<T>, h: &Jet<T>) -> Result<Jet<T>> {
    let hess = hessian(frame, h)?;
    Ok(trace_02(frame, &hess))
}

/// `g^{ij} T_ij`
pub fn trace_02<T: Scalar>(frame: &PointFrame<T>, t: &TensorField<T>) -> Jet<T> {
    let n = frame.dim();
    sum(
        frame,
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| frame.inverse_jet(i, j) * t.get(&[i, j])),
    )
}

/// Gradient, Hessian and Laplacian of a scalar jet.
pub struct GradHessLaplacian<T: Scalar> {
    pub gradient: Vec<Jet<T>>,
    pub hessian: TensorField<T>,
    pub laplacian: Jet<T>,
}

pub fn grad_hess_laplacian<T: Scalar>(frame: &PointFrame<T>, h: &Jet<T>) -> Result<GradHessLaplacian<T>> {
    let hessian = hessian(frame, h)?;
    Ok(GradHessLaplacian {
        gradient: gradient(frame, h)?,
        laplacian: trace_02(frame, &hessian),
        hessian,
    })
}

/// `(∇V)^i_j = ∂_j V^i + Γ^i_jk V^k`, stored with slots `[j; i]`.
pub fn covariant_derivative_vector<T: Scalar>(frame: &PointFrame<T>, v: &[Jet<T>]) -> Result<TensorField<T>> {
    let n = frame.dim();
    let dv = v.iter().map(differential).collect::<Result<Vec<_>>>()?;
    Ok(Tensor::from_fn(vec![Lo, Up], n, |s| {
        let (j, i) = (s[0], s[1]);
        let conn = sum(frame, (0..n).map(|k| frame.christoffel_jet(i, j, k) * &v[k]));
        &dv[i][j] + &conn
    }))
}

/// `div V = ∂_i V^i + Γ^i_ik V^k`
pub fn divergence_vector<T: Scalar>(frame: &PointFrame<T>, v: &[Jet<T>]) -> Result<Jet<T>> {
    let nabla = covariant_derivative_vector(frame, v)?;
    Ok(sum(frame, (0..frame.dim()).map(|i| nabla.get(&[i, i]).clone())))
}

/// `(£_V g)_ij = V^k ∂_k g_ij + g_kj ∂_i V^k + g_ik ∂_j V^k`
pub fn lie_derivative_metric<T: Scalar>(frame: &PointFrame<T>, v: &[Jet<T>]) -> Result<TensorField<T>> {
    let n = frame.dim();
    let dv = v.iter().map(differential).collect::<Result<Vec<_>>>()?;
    let dg = (0..n * n)
        .map(|ij| differential(frame.metric_jet(ij / n, ij % n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Tensor::covariant(2, n, |s| {
        let (i, j) = (s[0], s[1]);
        sum(
            frame,
            (0..n).map(|k| {
                let transport = &v[k] * &dg[i * n + j][k];
                let a = frame.metric_jet(k, j) * &dv[k][i];
                let b = frame.metric_jet(i, k) * &dv[k][j];
                &(&transport + &a) + &b
            }),
        )
    }))
}

/// `(∇_i w)_j = ∂_i w_j − Γ^k_ij w_k`, slots `[i, j]`.
pub fn covariant_derivative_covector<T: Scalar>(frame: &PointFrame<T>, w: &[Jet<T>]) -> Result<TensorField<T>> {
    let n = frame.dim();
    let dw = w.iter().map(differential).collect::<Result<Vec<_>>>()?;
    Ok(Tensor::covariant(2, n, |s| {
        let (i, j) = (s[0], s[1]);
        let conn = sum(frame, (0..n).map(|k| frame.christoffel_jet(k, i, j) * &w[k]));
        &dw[j][i] - &conn
    }))
}

/// `(∇_i T)_jk = ∂_i T_jk − Γ^l_ij T_lk − Γ^l_ik T_jl`, slots `[i, j, k]`.
pub fn covariant_derivative_02<T: Scalar>(frame: &PointFrame<T>, t: &TensorField<T>) -> Result<TensorField<T>> {
    let n = frame.dim();
    let dt = t.components().iter().map(differential).collect::<Result<Vec<_>>>()?;
    Ok(Tensor::covariant(3, n, |s| {
        let (i, j, k) = (s[0], s[1], s[2]);
        let conn = sum(
            frame,
            (0..n).map(|l| {
                let a = frame.christoffel_jet(l, i, j) * t.get(&[l, k]);
                let b = frame.christoffel_jet(l, i, k) * t.get(&[j, l]);
                &a + &b
            }),
        );
        &dt[j * n + k][i] - &conn
    }))
}

/// `(div T)_j = g^{ik} (∇_i T)_kj`
pub fn divergence_02<T: Scalar>(frame: &PointFrame<T>, t: &TensorField<T>) -> Result<Vec<Jet<T>>> {
    let n = frame.dim();
    let nabla = covariant_derivative_02(frame, t)?;
    Ok((0..n)
        .map(|j| {
            sum(
                frame,
                (0..n)
                    .flat_map(|i| (0..n).map(move |k| (i, k)))
                    .map(|(i, k)| frame.inverse_jet(i, k) * nabla.get(&[i, k, j])),
            )
        })
        .collect())
}

/// Fully g-contracted pairing of two tensors of equal variance.
pub fn inner<T: Scalar>(frame: &PointFrame<T>, s: &TensorField<T>, t: &TensorField<T>) -> Jet<T> {
    let n = frame.dim();
    let ginv: Vec<Jet<T>> = (0..n * n).map(|k| frame.inverse_jet(k / n, k % n).clone()).collect();
    let g: Vec<Jet<T>> = (0..n * n).map(|k| frame.metric_jet(k / n, k % n).clone()).collect();
    let mut dual = s.clone();
    for (slot, v) in s.variance().iter().enumerate() {
        dual = match v {
            Lo => dual.transform_slot(slot, &ginv, Up),
            Up => dual.transform_slot(slot, &g, Lo),
        };
    }
    dual.dot(t)
}

/// `|S|² = ⟨S, S⟩`
pub fn norm_squared<T: Scalar>(frame: &PointFrame<T>, s: &TensorField<T>) -> Jet<T> {
    inner(frame, s, s)
}

/// `(⟨S,T⟩, |S|²)`
pub fn norms_inner<T: Scalar>(frame: &PointFrame<T>, s: &TensorField<T>, t: &TensorField<T>) -> (Jet<T>, Jet<T>) {
    (inner(frame, s, t), norm_squared(frame, s))
}

/// `(S ⊗ T)` for covectors, slots `[i, j]`.
pub fn covector_product<T: Scalar>(s: &[Jet<T>], t: &[Jet<T>]) -> TensorField<T> {
    Tensor::covariant(2, s.len(), |i| s[i[0]].mul_ref(&t[i[1]]))
}

/// Contraction of a `(0,2)` tensor with two vectors.
pub fn apply_02<T: Scalar>(frame: &PointFrame<T>, t: &TensorField<T>, x: &[Jet<T>], y: &[Jet<T>]) -> Jet<T> {
    let n = frame.dim();
    sum(
        frame,
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| &(t.get(&[i, j]) * &x[i]) * &y[j]),
    )
}

/// `Σ_i c_i w_i`
pub fn pairing<T: Scalar>(frame: &PointFrame<T>, c: &[Jet<T>], w: &[Jet<T>]) -> Jet<T> {
    sum(frame, c.iter().zip(w).map(|(a, b)| a * b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::chart::{ChartManifold, VectorFieldSpec};

    fn hyperbolic() -> ChartManifold {
        ChartManifold::diagonal(&["x", "y", "z"], &["1/z^2", "1/z^2", "1/z^2"]).unwrap()
    }

    fn horospherical() -> ChartManifold {
        ChartManifold::diagonal(&["x", "y", "z"], &["exp(2*z)", "exp(2*z)", "1"]).unwrap()
    }

    fn field(m: &ChartManifold, c: &[&str]) -> VectorFieldSpec {
        VectorFieldSpec::parse(m, c, None).unwrap()
    }

    #[test]
    fn lie_derivative_examples() {
        let m = hyperbolic();
        let f = m.frame_at::<f64>(&[0.0, 0.0, 1.0], 2).unwrap();
        let v = field(&m, &["0", "0", "1"]).evaluate(&f).unwrap();
        let l = lie_derivative_metric(&f, &v).unwrap();
        assert!((l.get(&[0, 0]).value() + 2.0).abs() < 1e-14);

        let m = horospherical();
        let f = m.frame_at::<f64>(&[0.0, 0.0, 0.0], 2).unwrap();
        let v = field(&m, &["0", "0", "exp(z)"]).evaluate(&f).unwrap();
        let l = lie_derivative_metric(&f, &v).unwrap();
        assert!((l.get(&[0, 0]).value() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn nabla_v_examples() {
        let m = hyperbolic();
        let f = m.frame_at::<f64>(&[0.0, 0.0, 1.0], 2).unwrap();
        let v = field(&m, &["0", "0", "1"]).evaluate(&f).unwrap();
        let nv = covariant_derivative_vector(&f, &v).unwrap().values();
        let m2 = horospherical();
        let f2 = m2.frame_at::<f64>(&[0.0, 0.0, 0.0], 2).unwrap();
        let v2 = field(&m2, &["0", "0", "exp(z)"]).evaluate(&f2).unwrap();
        let nv2 = covariant_derivative_vector(&f2, &v2).unwrap().values();
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                assert!((nv.get(&[j, i]) + id).abs() < 1e-14);
                assert!((nv2.get(&[j, i]) - id).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gradient_and_laplacian_examples() {
        let m = hyperbolic();
        let f = m.frame_at::<f64>(&[0.3, -0.1, 1.7], 3).unwrap();
        let pot = f.eval(&m.parse_expr("-1/z").unwrap()).unwrap();
        let g = gradient(&f, &pot).unwrap();
        assert!(g[0].value().abs() < 1e-14 && g[1].value().abs() < 1e-14);
        assert!((g[2].value() - 1.0).abs() < 1e-14);
        let h = f.eval(&m.parse_expr("1/z^2").unwrap()).unwrap();
        let lap = laplacian(&f, &h).unwrap();
        assert!((lap.value() - 8.0 / (1.7 * 1.7)).abs() < 1e-12);

        let e = ChartManifold::diagonal(&["x", "y", "z"], &["1", "1", "1"]).unwrap();
        let f = e.frame_at::<f64>(&[0.5, 0.0, 0.0], 2).unwrap();
        let x2 = f.eval(&e.parse_expr("x^2").unwrap()).unwrap();
        let ghl = grad_hess_laplacian(&f, &x2).unwrap();
        assert_eq!(ghl.hessian.get(&[0, 0]).value(), 2.0);
        assert_eq!(ghl.hessian.get(&[1, 1]).value(), 0.0);
        assert_eq!(ghl.laplacian.value(), 2.0);
    }

    #[test]
    fn divergence_examples() {
        let m = hyperbolic();
        let f = m.frame_at::<f64>(&[0.0, 0.0, 1.5], 2).unwrap();
        let v = field(&m, &["0", "0", "1"]).evaluate(&f).unwrap();
        assert!((divergence_vector(&f, &v).unwrap().value() + 2.0).abs() < 1e-14);
        let m = horospherical();
        let f = m.frame_at::<f64>(&[0.0, 0.0, 0.5], 2).unwrap();
        let v = field(&m, &["0", "0", "exp(z)"]).evaluate(&f).unwrap();
        let d = divergence_vector(&f, &v).unwrap().value();
        assert!((d - 3.0 * 0.5f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn norms() {
        let m = hyperbolic();
        let f = m.frame_at::<f64>(&[0.0, 0.0, 1.0], 2).unwrap();
        let g = f.metric_field();
        let (gg, _) = norms_inner(&f, &g, &g);
        assert!((gg.value() - 3.0).abs() < 1e-14);
        let v = field(&m, &["0", "0", "1"]).evaluate(&f).unwrap();
        let l = norm_squared(&f, &lie_derivative_metric(&f, &v).unwrap());
        let nv = norm_squared(&f, &covariant_derivative_vector(&f, &v).unwrap());
        assert!((l.value() - 12.0).abs() < 1e-12);
        assert!((nv.value() - 3.0).abs() < 1e-12);
    }
}
