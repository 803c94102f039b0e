//! Curvature of the Levi-Civita connection.
//!
//! Sign convention: `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`, lowered as
//! `R(X,Y,Z,W) = g(R(X,Y)Z, W)`. The Ricci tensor is the trace
//! `Ric(Y,Z) = tr(X ↦ R(X,Y)Z)`, so constant sectional curvature `κ` gives
//! `R = κ G` with `G = ½ g⊙g` and `Ric = (n−1) κ g`.

use crate::error::{Error, Result};
use crate::geometry::frame::PointFrame;
use crate::geometry::ops;
use crate::geometry::tensor::{kulkarni_nomizu, Tensor, TensorField, Variance};
use crate::jet::Jet;
use crate::scalar::Scalar;

use Variance::{Contravariant as Up, Covariant as Lo};

/// Curvature tensors at a point, as jets of order `K − 2`.
#[derive(Clone, Debug)]
pub struct Curvature<T: Scalar> {
    /// `R^l_ijk`, slots `[i, j, k; l]`.
    pub riemann: TensorField<T>,
    /// `R_ijkl = g_lm R^m_ijk`.
    pub lowered: TensorField<T>,
    pub ricci: TensorField<T>,
    /// `Q^l_j = g^{lk} Ric_kj`, slots `[j; l]`.
    pub ricci_operator: TensorField<T>,
    pub scalar: Jet<T>,
}

fn sum<T: Scalar>(frame: &PointFrame<T>, terms: impl IntoIterator<Item = Jet<T>>) -> Jet<T> {
    terms.into_iter().fold(frame.zero(), |acc, t| &acc + &t)
}

/// `R^l_ijk = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik`
pub fn riemann<T: Scalar>(frame: &PointFrame<T>) -> Result<TensorField<T>> {
    frame.require_order(2)?;
    let n = frame.dim();
    let mut dgamma = Vec::with_capacity(n * n * n * n);
    for l in 0..n {
        for j in 0..n {
            for k in 0..n {
                for i in 0..n {
                    dgamma.push(frame.christoffel_jet(l, j, k).derivative(i)?);
                }
            }
        }
    }
    // dgamma[l][j][k][i] = ∂_i Γ^l_jk
    let d = |i: usize, l: usize, j: usize, k: usize| &dgamma[((l * n + j) * n + k) * n + i];
    Ok(Tensor::from_fn(vec![Lo, Lo, Lo, Up], n, |s| {
        let (i, j, k, l) = (s[0], s[1], s[2], s[3]);
        let quad = sum(
            frame,
            (0..n).map(|m| {
                let a = frame.christoffel_jet(l, i, m) * frame.christoffel_jet(m, j, k);
                let b = frame.christoffel_jet(l, j, m) * frame.christoffel_jet(m, i, k);
                &a - &b
            }),
        );
        &(d(i, l, j, k) - d(j, l, i, k)) + &quad
    }))
}

/// Lowers the output slot of a `(1,3)` tensor with `g`.
pub fn lower_last<T: Scalar>(frame: &PointFrame<T>, t: &TensorField<T>) -> TensorField<T> {
    let n = frame.dim();
    let g: Vec<Jet<T>> = (0..n * n).map(|k| frame.metric_jet(k / n, k % n).clone()).collect();
    t.transform_slot(t.rank() - 1, &g, Lo)
}

pub fn curvature<T: Scalar>(frame: &PointFrame<T>) -> Result<Curvature<T>> {
    let n = frame.dim();
    let riemann = riemann(frame)?;
    let lowered = lower_last(frame, &riemann);
    let ricci = Tensor::covariant(2, n, |s| {
        sum(frame, (0..n).map(|i| riemann.get(&[i, s[0], s[1], i]).clone()))
    });
    let ricci_operator = Tensor::from_fn(vec![Lo, Up], n, |s| {
        let (j, l) = (s[0], s[1]);
        sum(frame, (0..n).map(|k| frame.inverse_jet(l, k) * ricci.get(&[k, j])))
    });
    let scalar = sum(frame, (0..n).map(|i| ricci_operator.get(&[i, i]).clone()));
    Ok(Curvature {
        riemann,
        lowered,
        ricci,
        ricci_operator,
        scalar,
    })
}

/// `(Ric, Q, scal)`
pub fn ricci_scalar<T: Scalar>(frame: &PointFrame<T>) -> Result<(TensorField<T>, TensorField<T>, Jet<T>)> {
    let c = curvature(frame)?;
    Ok((c.ricci, c.ricci_operator, c.scalar))
}

/// `G = ½ g⊙g`
pub fn unit_curvature_tensor<T: Scalar>(frame: &PointFrame<T>) -> TensorField<T> {
    let g = frame.metric_field();
    kulkarni_nomizu(&g, &g).scale_jets(T::lit(0.5))
}

/// `W = R + scal/(2(n−1)(n−2)) g⊙g − Ric⊙g/(n−2)`, lowered.
pub fn weyl<T: Scalar>(frame: &PointFrame<T>, c: &Curvature<T>) -> Result<TensorField<T>> {
    let n = frame.dim();
    if n < 3 {
        return Err(Error::Dimension { needed: 3, got: n });
    }
    let g = frame.metric_field();
    let nf = T::from_usize_lossy(n);
    let one = T::one();
    let two = T::lit(2.0);
    let gg = kulkarni_nomizu(&g, &g).scale_by(&c.scalar.scale(one / (two * (nf - one) * (nf - two))));
    let rg = kulkarni_nomizu(&c.ricci, &g).scale_jets(one / (nf - two));
    Ok(c.lowered.add(&gg).sub(&rg))
}

/// `H(X,Y)Z = R(X,Y)Z + [g(Z,X)QY − g(Y,Z)QX + Ric(Z,X)Y − Ric(Y,Z)X]/(n−2)`,
/// slots `[X, Y, Z; out]`.
pub fn conharmonic<T: Scalar>(frame: &PointFrame<T>, c: &Curvature<T>) -> Result<TensorField<T>> {
    let n = frame.dim();
    if n < 3 {
        return Err(Error::Dimension { needed: 3, got: n });
    }
    let k = T::one() / T::from_usize_lossy(n - 2);
    Ok(Tensor::from_fn(vec![Lo, Lo, Lo, Up], n, |s| {
        let (i, j, kk, l) = (s[0], s[1], s[2], s[3]);
        let mut corr = &(frame.metric_jet(kk, i) * c.ricci_operator.get(&[j, l]))
            - &(frame.metric_jet(j, kk) * c.ricci_operator.get(&[i, l]));
        if l == j {
            corr = &corr + c.ricci.get(&[kk, i]);
        }
        if l == i {
            corr = &corr - c.ricci.get(&[j, kk]);
        }
        c.riemann.get(s) + &corr.scale(k)
    }))
}

/// `(W, H)`
pub fn weyl_conharmonic<T: Scalar>(
    frame: &PointFrame<T>,
    c: &Curvature<T>,
) -> Result<(TensorField<T>, TensorField<T>)> {
    Ok((weyl(frame, c)?, conharmonic(frame, c)?))
}

/// `(∇_i Ric)_jk`, slots `[i, j, k]`; needs frame order 3.
pub fn nabla_ricci<T: Scalar>(frame: &PointFrame<T>, c: &Curvature<T>) -> Result<TensorField<T>> {
    frame.require_order(3)?;
    ops::covariant_derivative_02(frame, &c.ricci)
}

/// `D(X; Y, Z) = Ric(R(V,X)Y, Z) + Ric(Y, R(V,X)Z)`, slots `[X, Y, Z]`.
/// `R(V,X)·Ric = 0` as a derivation iff `D = 0`.
pub fn curvature_derivation_on_ric<T: Scalar>(frame: &PointFrame<T>, c: &Curvature<T>, v: &[Jet<T>]) -> TensorField<T> {
    let n = frame.dim();
    // rv[x][y][l] = V^i R^l_ixy
    let rv = Tensor::from_fn(vec![Lo, Lo, Up], n, |s| {
        sum(frame, (0..n).map(|i| &v[i] * c.riemann.get(&[i, s[0], s[1], s[2]])))
    });
    Tensor::covariant(3, n, |s| {
        let (x, y, z) = (s[0], s[1], s[2]);
        sum(
            frame,
            (0..n).map(|l| {
                let a = rv.get(&[x, y, l]) * c.ricci.get(&[l, z]);
                let b = rv.get(&[x, z, l]) * c.ricci.get(&[y, l]);
                &a + &b
            }),
        )
    })
}

/// `R(X,Y)Z` with every argument a vector jet.
pub fn apply_riemann<T: Scalar>(
    frame: &PointFrame<T>,
    c: &Curvature<T>,
    x: &[Jet<T>],
    y: &[Jet<T>],
    z: &[Jet<T>],
) -> Vec<Jet<T>> {
    let n = frame.dim();
    (0..n)
        .map(|l| {
            let mut acc = frame.zero();
            for i in 0..n {
                for j in 0..n {
                    let xy = &x[i] * &y[j];
                    for k in 0..n {
                        acc = &acc + &(&(&xy * &z[k]) * c.riemann.get(&[i, j, k, l]));
                    }
                }
            }
            acc
        })
        .collect()
}

/// Violations of the algebraic curvature symmetries, numeric.
#[derive(Clone, Debug)]
pub struct SymmetryDefects<T> {
    /// `max |R_ijkl + R_jikl|`
    pub first_pair: T,
    /// `max |R_ijkl + R_ijlk|`
    pub second_pair: T,
    /// `max |R_ijkl − R_klij|`
    pub pair_exchange: T,
    /// `max |R_ijkl + R_jkil + R_kijl|`
    pub bianchi: T,
    /// `max |R_ijkl|`
    pub magnitude: T,
}

pub fn curvature_symmetries<T: Scalar>(c: &Curvature<T>) -> SymmetryDefects<T> {
    let r = c.lowered.values();
    let n = r.dim();
    let at = |i: usize, j: usize, k: usize, l: usize| *r.get(&[i, j, k, l]);
    let mut d = SymmetryDefects {
        first_pair: T::zero(),
        second_pair: T::zero(),
        pair_exchange: T::zero(),
        bianchi: T::zero(),
        magnitude: r.max_abs(),
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = at(i, j, k, l);
                    d.first_pair = d.first_pair.max((v + at(j, i, k, l)).abs());
                    d.second_pair = d.second_pair.max((v + at(i, j, l, k)).abs());
                    d.pair_exchange = d.pair_exchange.max((v - at(k, l, i, j)).abs());
                    d.bianchi = d.bianchi.max((v + at(j, k, i, l) + at(k, i, j, l)).abs());
                }
            }
        }
    }
    d
}

/// `div Ric − ½ d scal`; needs frame order 3.
pub fn contracted_bianchi<T: Scalar>(frame: &PointFrame<T>, c: &Curvature<T>) -> Result<Vec<Jet<T>>> {
    frame.require_order(3)?;
    let div = ops::divergence_02(frame, &c.ricci)?;
    let ds = ops::differential(&c.scalar)?;
    Ok(div.iter().zip(&ds).map(|(a, b)| a - &b.scale(T::lit(0.5))).collect())
}
