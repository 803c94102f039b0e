//! Truncated multivariate Taylor jets.
//!
//! A [`Jet`] stores the Taylor coefficients of a scalar function around a
//! point, i.e. `∂^α f / α!` for every multi-index `α` of total degree up to
//! the jet order. Coefficients are kept densely in graded-lexicographic order,
//! so the coefficient vector of an order-`k` jet is a prefix of the order-`K`
//! vector for any `K ≥ k`. Arithmetic between jets of different orders
//! truncates to the smaller one.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent vector of a monomial `x_0^{e_0} ... x_{n-1}^{e_{n-1}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        MultiIndex(e)
    }

    /// Multi-index of the mixed partial `∂_{vars[0]} ∂_{vars[1]} ...`.
    pub fn from_vars(nvars: usize, vars: &[usize]) -> Self {
        let mut e = vec![0; nvars];
        for &v in vars {
            e[v] += 1;
        }
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// `α! = Π α_i!`
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&e| (1..=e).map(f64::from).product::<f64>())
            .product()
    }
}

#[derive(Debug)]
struct Layout {
    nvars: usize,
    order: usize,
    monomials: Vec<MultiIndex>,
    positions: HashMap<MultiIndex, usize>,
    /// `(a, b, c)` with `monomial[a] + monomial[b] = monomial[c]`.
    products: Vec<(u32, u32, u32)>,
    /// Per variable: `(source, target, factor)` where the derivative of the
    /// source monomial lands on `target` (a position valid in the order-1
    /// smaller layout) with the given integer factor.
    derivatives: Vec<Vec<(u32, u32, u32)>>,
}

fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![degree]];
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for rest in monomials_of_degree(nvars - 1, degree - first) {
            let mut m = Vec::with_capacity(nvars);
            m.push(first);
            m.extend(rest);
            out.push(m);
        }
    }
    out
}

impl Layout {
    fn build(nvars: usize, order: usize) -> Self {
        let monomials: Vec<MultiIndex> = (0..=order as u32)
            .flat_map(|d| monomials_of_degree(nvars, d))
            .map(MultiIndex)
            .collect();
        let positions: HashMap<MultiIndex, usize> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();

        let mut products = Vec::new();
        for (a, ma) in monomials.iter().enumerate() {
            for (b, mb) in monomials.iter().enumerate() {
                if ma.degree() + mb.degree() > order {
                    continue;
                }
                let sum: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                let c = positions[&MultiIndex(sum)];
                products.push((a as u32, b as u32, c as u32));
            }
        }

        let derivatives = (0..nvars)
            .map(|v| {
                monomials
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m.0[v] > 0)
                    .map(|(src, m)| {
                        let mut lower = m.0.clone();
                        lower[v] -= 1;
                        (src as u32, positions[&MultiIndex(lower)] as u32, m.0[v])
                    })
                    .collect()
            })
            .collect();

        Layout {
            nvars,
            order,
            monomials,
            positions,
            products,
            derivatives,
        }
    }

    fn len(&self) -> usize {
        self.monomials.len()
    }
}

type LayoutCache = Mutex<HashMap<(usize, usize), Arc<Layout>>>;

fn layout(nvars: usize, order: usize) -> Arc<Layout> {
    static CACHE: OnceLock<LayoutCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry((nvars, order))
        .or_insert_with(|| Arc::new(Layout::build(nvars, order)))
        .clone()
}

/// Number of monomials of total degree `≤ order` in `nvars` variables.
pub fn coefficient_count(nvars: usize, order: usize) -> usize {
    layout(nvars, order).len()
}

#[derive(Clone)]
pub struct Jet<T> {
    layout: Arc<Layout>,
    coeffs: Vec<T>,
}

impl<T: Scalar> fmt::Debug for Jet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.layout.nvars)
            .field("order", &self.layout.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<T: Scalar> PartialEq for Jet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars() == other.nvars() && self.order() == other.order() && self.coeffs == other.coeffs
    }
}

/// One jet per coordinate, seeded at `coords`: value = coordinate, unit first
/// derivative in its own slot, everything else zero.
pub fn seed_point<T: Scalar>(coords: &[T], order: usize) -> Vec<Jet<T>> {
    let n = coords.len();
    coords
        .iter()
        .enumerate()
        .map(|(i, &c)| Jet::variable(c, i, n, order))
        .collect()
}

impl<T: Scalar> Jet<T> {
    pub fn constant(value: T, nvars: usize, order: usize) -> Self {
        let layout = layout(nvars, order);
        let mut coeffs = vec![T::zero(); layout.len()];
        coeffs[0] = value;
        Jet { layout, coeffs }
    }

    pub fn zero(nvars: usize, order: usize) -> Self {
        Self::constant(T::zero(), nvars, order)
    }

    pub fn variable(value: T, var: usize, nvars: usize, order: usize) -> Self {
        assert!(var < nvars, "variable {var} out of range for {nvars} variables");
        let mut jet = Self::constant(value, nvars, order);
        if order > 0 {
            let pos = jet.layout.positions[&MultiIndex::unit(nvars, var)];
            jet.coeffs[pos] = T::one();
        }
        jet
    }

    /// Builds a jet from Taylor coefficients listed in graded-lex order.
    pub fn from_coefficients(nvars: usize, order: usize, coeffs: Vec<T>) -> Result<Self> {
        let layout = layout(nvars, order);
        if coeffs.len() != layout.len() {
            return Err(Error::Invalid(format!(
                "expected {} coefficients for order {order} in {nvars} variables, got {}",
                layout.len(),
                coeffs.len()
            )));
        }
        Ok(Jet { layout, coeffs })
    }

    /// Same-shaped constant.
    pub fn lift(&self, value: T) -> Self {
        Self::constant(value, self.nvars(), self.order())
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    /// Multi-indices matching [`Jet::coefficients`] position by position.
    pub fn monomials(&self) -> &[MultiIndex] {
        &self.layout.monomials
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Option<T> {
        self.layout.positions.get(m).map(|&p| self.coeffs[p])
    }

    /// True partial derivative: stored coefficient times `m!`.
    pub fn partial(&self, m: &MultiIndex) -> Result<T> {
        if m.nvars() != self.nvars() {
            return Err(Error::VariableMismatch {
                left: self.nvars(),
                right: m.nvars(),
            });
        }
        if m.degree() > self.order() {
            return Err(Error::Order {
                requested: m.degree(),
                available: self.order(),
            });
        }
        let pos = self.layout.positions[m];
        Ok(self.coeffs[pos] * T::lit(m.factorial()))
    }

    /// Partial derivative along the listed variables, e.g. `&[0, 2]` for `∂x∂z`.
    pub fn partial_along(&self, vars: &[usize]) -> Result<T> {
        self.partial(&MultiIndex::from_vars(self.nvars(), vars))
    }

    pub fn gradient(&self) -> Result<Vec<T>> {
        (0..self.nvars()).map(|v| self.partial_along(&[v])).collect()
    }

    /// `∂f/∂x_var` as a jet one order lower.
    pub fn derivative(&self, var: usize) -> Result<Jet<T>> {
        if self.order() == 0 {
            return Err(Error::Order {
                requested: 1,
                available: 0,
            });
        }
        let lower = layout(self.nvars(), self.order() - 1);
        let mut coeffs = vec![T::zero(); lower.len()];
        for &(src, dst, factor) in &self.layout.derivatives[var] {
            let dst = dst as usize;
            if dst < coeffs.len() {
                coeffs[dst] = self.coeffs[src as usize] * T::lit(f64::from(factor));
            }
        }
        Ok(Jet { layout: lower, coeffs })
    }

    pub fn truncate(&self, order: usize) -> Jet<T> {
        if order >= self.order() {
            return self.clone();
        }
        let lower = layout(self.nvars(), order);
        let coeffs = self.coeffs[..lower.len()].to_vec();
        Jet { layout: lower, coeffs }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, s: T) -> Jet<T> {
        Jet {
            layout: self.layout.clone(),
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: T) -> Jet<T> {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + s;
        out
    }

    fn check_vars(&self, other: &Jet<T>) {
        assert_eq!(
            self.nvars(),
            other.nvars(),
            "jets over different variable counts cannot be combined"
        );
    }

    fn zip_with(&self, other: &Jet<T>, f: impl Fn(T, T) -> T) -> Jet<T> {
        self.check_vars(other);
        let (layout, len) = if self.order() <= other.order() {
            (self.layout.clone(), self.coeffs.len())
        } else {
            (other.layout.clone(), other.coeffs.len())
        };
        let coeffs = self.coeffs[..len]
            .iter()
            .zip(&other.coeffs[..len])
            .map(|(&a, &b)| f(a, b))
            .collect();
        Jet { layout, coeffs }
    }

    fn product(&self, other: &Jet<T>) -> Jet<T> {
        self.check_vars(other);
        let layout = if self.order() <= other.order() {
            self.layout.clone()
        } else {
            other.layout.clone()
        };
        let mut coeffs = vec![T::zero(); layout.len()];
        for &(a, b, c) in &layout.products {
            let (a, b, c) = (a as usize, b as usize, c as usize);
            coeffs[c] = coeffs[c] + self.coeffs[a] * other.coeffs[b];
        }
        Jet { layout, coeffs }
    }

    /// `Σ_k taylor[k] · (self − value)^k`, truncated to the jet order.
    fn compose(&self, taylor: &[T]) -> Jet<T> {
        let mut h = self.clone();
        h.coeffs[0] = T::zero();
        let top = self.order().min(taylor.len() - 1);
        let mut acc = self.lift(taylor[top]);
        for k in (0..top).rev() {
            acc = acc.product(&h).add_scalar(taylor[k]);
        }
        acc
    }

    fn finite_or(self, what: &str) -> Result<Jet<T>> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Domain(format!("{what} produced a non-finite value")))
        }
    }

    fn factorials(&self) -> Vec<T> {
        let mut f = vec![T::one(); self.order() + 1];
        for k in 1..f.len() {
            f[k] = f[k - 1] * T::from_usize_lossy(k);
        }
        f
    }

    pub fn recip(&self) -> Result<Jet<T>> {
        let u = self.value();
        if u == T::zero() {
            return Err(Error::Domain("division by a zero value".into()));
        }
        let inv = u.recip();
        let mut taylor = Vec::with_capacity(self.order() + 1);
        let mut c = inv;
        for _ in 0..=self.order() {
            taylor.push(c);
            c = -c * inv;
        }
        self.compose(&taylor).finite_or("reciprocal")
    }

    pub fn checked_div(&self, denominator: &Jet<T>) -> Result<Jet<T>> {
        Ok(self * &denominator.recip()?)
    }

    /// Integer power by repeated truncated multiplication; negative exponents
    /// go through the reciprocal.
    pub fn powi(&self, n: i32) -> Result<Jet<T>> {
        if n < 0 {
            return self.recip()?.powi(n.checked_neg().unwrap_or(i32::MAX));
        }
        let mut result = self.lift(T::one());
        let mut base = self.clone();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result.product(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        result.finite_or("integer power")
    }

    /// Real power of a positive base.
    pub fn powf(&self, p: T) -> Result<Jet<T>> {
        let u = self.value();
        if u <= T::zero() {
            return Err(Error::Domain(format!("real power {p} of non-positive value {u}")));
        }
        let fact = self.factorials();
        let mut taylor = Vec::with_capacity(self.order() + 1);
        let mut falling = T::one();
        for (k, fk) in fact.iter().enumerate() {
            let kk = T::from_usize_lossy(k);
            taylor.push(falling / *fk * u.powf(p - kk));
            falling = falling * (p - kk);
        }
        self.compose(&taylor).finite_or("real power")
    }

    /// `self^exponent = exp(exponent · log(self))`, positive base only.
    pub fn pow(&self, exponent: &Jet<T>) -> Result<Jet<T>> {
        (exponent * &self.ln()?).exp()
    }

    pub fn exp(&self) -> Result<Jet<T>> {
        let e = self.value().exp();
        let taylor: Vec<T> = self.factorials().iter().map(|&f| e / f).collect();
        self.compose(&taylor).finite_or("exp")
    }

    pub fn ln(&self) -> Result<Jet<T>> {
        let u = self.value();
        if u <= T::zero() {
            return Err(Error::Domain(format!("log of non-positive value {u}")));
        }
        let mut taylor = vec![u.ln()];
        let mut upow = u;
        for k in 1..=self.order() {
            let sign = if k % 2 == 1 { T::one() } else { -T::one() };
            taylor.push(sign / (T::from_usize_lossy(k) * upow));
            upow = upow * u;
        }
        self.compose(&taylor).finite_or("log")
    }

    fn periodic(&self, cycle: [T; 4], what: &str) -> Result<Jet<T>> {
        let taylor: Vec<T> = self
            .factorials()
            .iter()
            .enumerate()
            .map(|(k, &f)| cycle[k % 4] / f)
            .collect();
        self.compose(&taylor).finite_or(what)
    }

    pub fn sin(&self) -> Result<Jet<T>> {
        let (s, c) = self.value().sin_cos();
        self.periodic([s, c, -s, -c], "sin")
    }

    pub fn cos(&self) -> Result<Jet<T>> {
        let (s, c) = self.value().sin_cos();
        self.periodic([c, -s, -c, s], "cos")
    }

    pub fn sinh(&self) -> Result<Jet<T>> {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.periodic([s, c, s, c], "sinh")
    }

    pub fn cosh(&self) -> Result<Jet<T>> {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.periodic([c, s, c, s], "cosh")
    }

    pub fn sqrt(&self) -> Result<Jet<T>> {
        if self.value() <= T::zero() {
            return Err(Error::Domain(format!("sqrt of non-positive value {}", self.value())));
        }
        self.powf(T::lit(0.5))
    }
}

impl<T: Scalar> Add<&Jet<T>> for &Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: &Jet<T>) -> Jet<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Sub<&Jet<T>> for &Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: &Jet<T>) -> Jet<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Mul<&Jet<T>> for &Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: &Jet<T>) -> Jet<T> {
        self.product(rhs)
    }
}

impl<T: Scalar> Neg for &Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.scale(-T::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr<Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: Jet<T>) -> Jet<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Scalar> $tr<&Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: &Jet<T>) -> Jet<T> {
                (&self).$m(rhs)
            }
        }
        impl<T: Scalar> $tr<Jet<T>> for &Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: Jet<T>) -> Jet<T> {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        -&self
    }
}

/// Operation tags accepted by [`jet_apply`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JetOp<T> {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    PowInt(i32),
    PowReal(T),
    Pow,
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl<T> JetOp<T> {
    fn arity(&self) -> usize {
        match self {
            JetOp::Add | JetOp::Sub | JetOp::Mul | JetOp::Div | JetOp::Pow => 2,
            _ => 1,
        }
    }
}

/// Applies `op` to its operands. Real operands are passed as constant jets.
pub fn jet_apply<T: Scalar>(op: JetOp<T>, operands: &[&Jet<T>]) -> Result<Jet<T>> {
    if operands.len() != op.arity() {
        return Err(Error::Invalid(format!(
            "{op:?} takes {} operand(s), got {}",
            op.arity(),
            operands.len()
        )));
    }
    if let [a, b] = operands {
        if a.nvars() != b.nvars() {
            return Err(Error::VariableMismatch {
                left: a.nvars(),
                right: b.nvars(),
            });
        }
    }
    let a = operands[0];
    match op {
        JetOp::Add => Ok(a + operands[1]),
        JetOp::Sub => Ok(a - operands[1]),
        JetOp::Mul => Ok(a * operands[1]),
        JetOp::Div => a.checked_div(operands[1]),
        JetOp::Pow => a.pow(operands[1]),
        JetOp::Neg => Ok(-a),
        JetOp::PowInt(n) => a.powi(n),
        JetOp::PowReal(p) => a.powf(p),
        JetOp::Exp => a.exp(),
        JetOp::Log => a.ln(),
        JetOp::Sin => a.sin(),
        JetOp::Cos => a.cos(),
        JetOp::Sinh => a.sinh(),
        JetOp::Cosh => a.cosh(),
        JetOp::Sqrt => a.sqrt(),
    }
}
