use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::chart::ChartManifold;
use crate::geometry::linalg::{cholesky, determinant, invert_lower, solve_jets};
use crate::geometry::tensor::{Tensor, TensorField, Variance};
use crate::jet::{seed_point, Jet, MultiIndex};
use crate::scalar::Scalar;

/// Relative threshold below which `|det g|` counts as singular.
pub const SINGULAR_DET_RATIO: f64 = 1e-12;

/// Metric-derived data at one chart point.
///
/// Everything is held as jets: the metric and its inverse at the frame order
/// `K`, the Christoffel symbols at `K − 1`. Coordinate derivatives of any of
/// them are read off the jets.
#[derive(Clone, Debug)]
pub struct PointFrame<T: Scalar> {
    point: Vec<T>,
    order: usize,
    coords: Vec<Jet<T>>,
    metric: Vec<Jet<T>>,
    inverse: Vec<Jet<T>>,
    /// `Γ^k_ij` at `[k][i][j]`.
    christoffel: Vec<Jet<T>>,
    det: T,
    /// `E = L^{-T}` for `g = L Lᵀ`; column `a` is the orthonormal vector `e_a`.
    frame_vectors: Vec<T>,
    /// Cholesky factor `L`; `ω^a = Σ_i L[i][a] dx^i`.
    factor: Vec<T>,
}

impl<T: Scalar> PointFrame<T> {
    pub fn new(manifold: &ChartManifold, p: &[T], order: usize) -> Result<Self> {
        let n = manifold.dimension();
        if p.len() != n {
            return Err(Error::Invalid(format!(
                "point has {} coordinates, chart has dimension {n}",
                p.len()
            )));
        }
        if order == 0 {
            return Err(Error::Order {
                requested: 1,
                available: 0,
            });
        }
        let coords = seed_point(p, order);
        let mut metric = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                metric.push(manifold.metric_expr(i, j).evaluate(&coords)?);
            }
        }

        let values: Vec<T> = metric.iter().map(Jet::value).collect();
        let det = determinant(&values, n);
        let scale = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if det.abs() < T::lit(SINGULAR_DET_RATIO) * scale.powi(n as i32) || scale == T::zero() {
            return Err(Error::SingularMetric { det: det.as_f64() });
        }
        let chol = cholesky(&values, n).ok_or(Error::NotPositiveDefinite)?;
        let l_inv = invert_lower(&chol, n);
        let frame_vectors: Vec<T> = (0..n * n).map(|k| l_inv[(k % n) * n + k / n]).collect();

        let identity: Vec<Jet<T>> = (0..n * n)
            .map(|k| {
                let v = if k / n == k % n { T::one() } else { T::zero() };
                Jet::constant(v, n, order)
            })
            .collect();
        let inverse = solve_jets(metric.clone(), n, identity, n)?;

        let mut dg = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for m in &metric {
                dg.push(m.derivative(k)?);
            }
        }
        // dg[k][i][j] = ∂_k g_ij
        let d = |k: usize, i: usize, j: usize| &dg[(k * n + i) * n + j];
        let mut christoffel = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Jet::zero(n, order - 1);
                    for l in 0..n {
                        let s = &(d(i, j, l) + d(j, i, l)) - d(l, i, j);
                        acc = &acc + &(&inverse[k * n + l] * &s);
                    }
                    christoffel.push(acc.scale(T::lit(0.5)));
                }
            }
        }

        Ok(PointFrame {
            point: p.to_vec(),
            order,
            coords,
            metric,
            inverse,
            christoffel,
            det,
            frame_vectors,
            factor: chol,
        })
    }

    pub fn dim(&self) -> usize {
        self.point.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn point(&self) -> &[T] {
        &self.point
    }

    pub fn det(&self) -> T {
        self.det
    }

    pub fn coordinate_jets(&self) -> &[Jet<T>] {
        &self.coords
    }

    /// Evaluates an expression at the frame point and order.
    pub fn eval(&self, expr: &Expr) -> Result<Jet<T>> {
        expr.evaluate(&self.coords)
    }

    pub fn constant(&self, v: T) -> Jet<T> {
        Jet::constant(v, self.dim(), self.order)
    }

    pub fn zero(&self) -> Jet<T> {
        self.constant(T::zero())
    }

    pub fn require_order(&self, needed: usize) -> Result<()> {
        if self.order < needed {
            Err(Error::Order {
                requested: needed,
                available: self.order,
            })
        } else {
            Ok(())
        }
    }

    pub fn metric_jet(&self, i: usize, j: usize) -> &Jet<T> {
        &self.metric[i * self.dim() + j]
    }

    pub fn inverse_jet(&self, i: usize, j: usize) -> &Jet<T> {
        &self.inverse[i * self.dim() + j]
    }

    /// `Γ^k_ij`
    pub fn christoffel_jet(&self, k: usize, i: usize, j: usize) -> &Jet<T> {
        let n = self.dim();
        &self.christoffel[(k * n + i) * n + j]
    }

    pub fn g(&self, i: usize, j: usize) -> T {
        self.metric_jet(i, j).value()
    }

    pub fn g_inv(&self, i: usize, j: usize) -> T {
        self.inverse_jet(i, j).value()
    }

    /// `∂_{along} g_ij`, e.g. `dg_along(&[k], i, j)`; one entry per derivative.
    pub fn dg_along(&self, along: &[usize], i: usize, j: usize) -> Result<T> {
        self.metric_jet(i, j).partial_along(along)
    }

    pub fn dg(&self, k: usize, i: usize, j: usize) -> Result<T> {
        self.dg_along(&[k], i, j)
    }

    pub fn d2g(&self, k: usize, l: usize, i: usize, j: usize) -> Result<T> {
        self.dg_along(&[k, l], i, j)
    }

    pub fn d3g(&self, k: usize, l: usize, m: usize, i: usize, j: usize) -> Result<T> {
        self.dg_along(&[k, l, m], i, j)
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> T {
        self.christoffel_jet(k, i, j).value()
    }

    /// `∂_l Γ^k_ij`
    pub fn dgamma(&self, l: usize, k: usize, i: usize, j: usize) -> Result<T> {
        self.christoffel_jet(k, i, j).partial_along(&[l])
    }

    /// `∂_l ∂_m Γ^k_ij`
    pub fn d2gamma(&self, l: usize, m: usize, k: usize, i: usize, j: usize) -> Result<T> {
        let jet = self.christoffel_jet(k, i, j);
        jet.partial(&MultiIndex::from_vars(self.dim(), &[l, m]))
    }

    pub fn metric_field(&self) -> TensorField<T> {
        Tensor::new(vec![Variance::Covariant; 2], self.dim(), self.metric.clone())
    }

    pub fn inverse_field(&self) -> TensorField<T> {
        Tensor::new(vec![Variance::Contravariant; 2], self.dim(), self.inverse.clone())
    }

    pub fn metric_values(&self) -> Tensor<T> {
        self.metric_field().values()
    }

    /// `θ_i = g_ij V^j`
    pub fn lower(&self, v: &[Jet<T>]) -> Vec<Jet<T>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).fold(self.zero(), |acc, j| &acc + &(self.metric_jet(i, j) * &v[j])))
            .collect()
    }

    /// `V^i = g^{ij} θ_j`
    pub fn raise(&self, w: &[Jet<T>]) -> Vec<Jet<T>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).fold(self.zero(), |acc, j| &acc + &(self.inverse_jet(i, j) * &w[j])))
            .collect()
    }

    /// `g(X, Y)` for vector jets.
    pub fn inner_vectors(&self, x: &[Jet<T>], y: &[Jet<T>]) -> Jet<T> {
        self.lower(x)
            .iter()
            .zip(y)
            .fold(self.zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// Components in the g-orthonormal frame obtained from the Cholesky
    /// factor of `g` at the point.
    pub fn orthonormal(&self, t: &Tensor<T>) -> Tensor<T> {
        let mut out = t.clone();
        for (slot, v) in t.variance().iter().enumerate() {
            let m = match v {
                Variance::Covariant => &self.frame_vectors,
                Variance::Contravariant => &self.factor,
            };
            out = out.transform_slot(slot, m, *v);
        }
        out
    }
}

pub fn frame_at<T: Scalar>(manifold: &ChartManifold, p: &[T], order: usize) -> Result<PointFrame<T>> {
    PointFrame::new(manifold, p, order)
}
