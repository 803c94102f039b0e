//! Dense component tensors.
//!
//! Slots are stored in argument order: a `(0,2)` tensor `T(X, Y)` has slots
//! `[X, Y]`; an endomorphism-valued tensor such as `R(X, Y)Z` has slots
//! `[X, Y, Z, out]` where the output vector occupies the last (contravariant)
//! slot. Components are row-major over the slots.

use crate::jet::Jet;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    /// Lower index (argument slot).
    Covariant,
    /// Upper index (vector-valued slot).
    Contravariant,
}

use Variance::Covariant as Lo;

/// Component type closed under by-reference `+`, `−`, `×`.
pub trait Ring: Clone {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
}

impl<T: Scalar> Ring for T {
    fn add_ref(&self, other: &Self) -> Self {
        *self + *other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        *self - *other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        *self * *other
    }
}

impl<T: Scalar> Ring for Jet<T> {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<E> {
    variance: Vec<Variance>,
    dim: usize,
    components: Vec<E>,
}

/// Tensor whose components are jets at a frame point.
pub type TensorField<T> = Tensor<Jet<T>>;

pub fn flat_index(dim: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

/// All index tuples of the given rank, in storage order.
pub fn index_tuples(dim: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(rank as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; rank];
        for slot in (0..rank).rev() {
            idx[slot] = flat % dim;
            flat /= dim;
        }
        idx
    })
}

impl<E> Tensor<E> {
    pub fn new(variance: Vec<Variance>, dim: usize, components: Vec<E>) -> Self {
        assert_eq!(
            components.len(),
            dim.pow(variance.len() as u32),
            "component count does not match dimension and rank"
        );
        Tensor {
            variance,
            dim,
            components,
        }
    }

    pub fn from_fn(variance: Vec<Variance>, dim: usize, mut f: impl FnMut(&[usize]) -> E) -> Self {
        let components = index_tuples(dim, variance.len()).map(|idx| f(&idx)).collect();
        Tensor {
            variance,
            dim,
            components,
        }
    }

    pub fn covariant(rank: usize, dim: usize, f: impl FnMut(&[usize]) -> E) -> Self {
        Self::from_fn(vec![Lo; rank], dim, f)
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn components(&self) -> &[E] {
        &self.components
    }

    pub fn into_components(self) -> Vec<E> {
        self.components
    }

    pub fn get(&self, idx: &[usize]) -> &E {
        debug_assert_eq!(idx.len(), self.rank());
        &self.components[flat_index(self.dim, idx)]
    }

    pub fn map<F>(&self, f: impl FnMut(&E) -> F) -> Tensor<F> {
        Tensor {
            variance: self.variance.clone(),
            dim: self.dim,
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn zip_map<F>(&self, other: &Tensor<E>, mut f: impl FnMut(&E, &E) -> F) -> Tensor<F> {
        assert_eq!(self.variance, other.variance, "variance mismatch");
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Tensor {
            variance: self.variance.clone(),
            dim: self.dim,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl<E: Ring> Tensor<E> {
    pub fn add(&self, other: &Self) -> Self {
        self.zip_map(other, E::add_ref)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_map(other, E::sub_ref)
    }

    /// Tensor product `self ⊗ other`, slots concatenated.
    pub fn outer(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut variance = self.variance.clone();
        variance.extend_from_slice(&other.variance);
        let mut components = Vec::with_capacity(self.components.len() * other.components.len());
        for a in &self.components {
            for b in &other.components {
                components.push(a.mul_ref(b));
            }
        }
        Tensor {
            variance,
            dim: self.dim,
            components,
        }
    }

    /// Multiplies slot `slot` by `matrix`: `out[.., a, ..] = Σ_i m[i][a] t[.., i, ..]`,
    /// where `matrix` is `dim × dim` row-major. The slot's variance becomes `variance`.
    pub fn transform_slot(&self, slot: usize, matrix: &[E], variance: Variance) -> Self {
        let n = self.dim;
        let rank = self.rank();
        let stride = n.pow((rank - slot - 1) as u32);
        let mut components = Vec::with_capacity(self.components.len());
        for (flat, _) in self.components.iter().enumerate() {
            let a = (flat / stride) % n;
            let base = flat - a * stride;
            let mut acc: Option<E> = None;
            for i in 0..n {
                let term = matrix[i * n + a].mul_ref(&self.components[base + i * stride]);
                acc = Some(match acc {
                    None => term,
                    Some(s) => s.add_ref(&term),
                });
            }
            components.push(acc.expect("dimension is positive"));
        }
        let mut var = self.variance.clone();
        var[slot] = variance;
        Tensor {
            variance: var,
            dim: n,
            components,
        }
    }

    /// Component-wise sum of products with another tensor of identical layout.
    pub fn dot(&self, other: &Self) -> E {
        let mut iter = self.components.iter().zip(&other.components);
        let (a, b) = iter.next().expect("non-empty tensor");
        let mut acc = a.mul_ref(b);
        for (a, b) in iter {
            acc = acc.add_ref(&a.mul_ref(b));
        }
        acc
    }
}

/// Kulkarni–Nomizu product of two `(0,2)` tensors:
/// `(A⊙B)(X,Y,Z,W) = A(X,W)B(Y,Z) + A(Y,Z)B(X,W) − A(X,Z)B(Y,W) − A(Y,W)B(X,Z)`.
pub fn kulkarni_nomizu<E: Ring>(a: &Tensor<E>, b: &Tensor<E>) -> Tensor<E> {
    assert!(a.rank() == 2 && b.rank() == 2, "Kulkarni-Nomizu needs (0,2) tensors");
    assert_eq!(a.dim, b.dim, "dimension mismatch");
    let n = a.dim;
    let at = |i: usize, j: usize| &a.components[i * n + j];
    let bt = |i: usize, j: usize| &b.components[i * n + j];
    Tensor::covariant(4, n, |s| {
        let (x, y, z, w) = (s[0], s[1], s[2], s[3]);
        let p1 = at(x, w).mul_ref(bt(y, z));
        let p2 = at(y, z).mul_ref(bt(x, w));
        let p3 = at(x, z).mul_ref(bt(y, w));
        let p4 = at(y, w).mul_ref(bt(x, z));
        p1.sub_ref(&p4).add_ref(&p2.sub_ref(&p3))
    })
}

impl<T: Scalar> Tensor<T> {
    pub fn scale(&self, s: T) -> Self {
        self.map(|&c| c * s)
    }

    pub fn max_abs(&self) -> T {
        self.components.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }
}

impl<T: Scalar> Tensor<Jet<T>> {
    pub fn scale_jets(&self, s: T) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn scale_by(&self, s: &Jet<T>) -> Self {
        self.map(|c| c * s)
    }

    /// Component values at the expansion point.
    pub fn values(&self) -> Tensor<T> {
        self.map(|c| c.value())
    }

    /// Lowest jet order among the components.
    pub fn order(&self) -> usize {
        self.components.iter().map(|c| c.order()).min().unwrap_or(0)
    }

    pub fn at(&self, point: &[T]) -> TensorValue<T> {
        TensorValue {
            tensor: self.values(),
            point: point.to_vec(),
        }
    }
}

/// Numeric tensor attached to a base point.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorValue<T> {
    pub tensor: Tensor<T>,
    pub point: Vec<T>,
}

impl<T> std::ops::Deref for TensorValue<T> {
    type Target = Tensor<T>;
    fn deref(&self) -> &Tensor<T> {
        &self.tensor
    }
}
