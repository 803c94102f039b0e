use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::frame::PointFrame;
use crate::jet::{seed_point, Jet};
use crate::scalar::Scalar;

/// A coordinate chart with a metric given by component expressions.
///
/// Only the upper triangle of the metric is stored, so `g_ij = g_ji` holds by
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartManifold {
    coordinates: Vec<String>,
    /// Row-major upper triangle: `(0,0), (0,1), .., (0,n-1), (1,1), ..`.
    metric: Vec<Expr>,
    sampling_box: Option<Vec<(f64, f64)>>,
}

fn upper_position(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows before i hold n, n-1, .., n-i+1 entries
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

impl ChartManifold {
    /// `rows[i]` holds `g_ii, g_i(i+1), .., g_i(n-1)`.
    pub fn new(coordinates: Vec<String>, rows: Vec<Vec<Expr>>) -> Result<Self> {
        let n = coordinates.len();
        if n == 0 {
            return Err(Error::Invalid("a chart needs at least one coordinate".into()));
        }
        if rows.len() != n {
            return Err(Error::Invalid(format!("metric has {} rows, expected {n}", rows.len())));
        }
        let mut metric = Vec::with_capacity(n * (n + 1) / 2);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n - i {
                return Err(Error::Invalid(format!(
                    "metric row {i} of the upper triangle has {} entries, expected {}",
                    row.len(),
                    n - i
                )));
            }
            metric.extend(row);
        }
        if let Some(bad) = metric.iter().filter_map(Expr::max_var_index).find(|&k| k >= n) {
            return Err(Error::Invalid(format!("metric references coordinate {bad}")));
        }
        Ok(ChartManifold {
            coordinates,
            metric,
            sampling_box: None,
        })
    }

    /// Parses metric rows given either as full `n × n` rows (the upper
    /// triangle is used) or as upper-triangle rows.
    pub fn parse<S: AsRef<str>, R: AsRef<str>>(coordinates: &[S], rows: &[Vec<R>]) -> Result<Self> {
        let coords: Vec<String> = coordinates.iter().map(|c| c.as_ref().to_string()).collect();
        let n = coords.len();
        let mut upper = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let start = match row.len() {
                l if l == n => i,
                l if l + i == n => 0,
                l => {
                    return Err(Error::Invalid(format!(
                        "metric row {i} has {l} entries, expected {n} or {}",
                        n.saturating_sub(i)
                    )))
                }
            };
            let parsed = row[start..]
                .iter()
                .map(|s| Expr::parse(s.as_ref(), &coords))
                .collect::<Result<Vec<_>>>()?;
            upper.push(parsed);
        }
        Self::new(coords, upper)
    }

    pub fn diagonal<S: AsRef<str>>(coordinates: &[S], diagonal: &[&str]) -> Result<Self> {
        let n = coordinates.len();
        let rows: Vec<Vec<&str>> = (0..n)
            .map(|i| (i..n).map(|j| if i == j { diagonal[i] } else { "0" }).collect())
            .collect();
        Self::parse(coordinates, &rows)
    }

    pub fn with_box(mut self, sampling_box: Vec<(f64, f64)>) -> Result<Self> {
        if sampling_box.len() != self.dimension() {
            return Err(Error::Invalid("sampling box must cover every coordinate".into()));
        }
        if let Some((lo, hi)) = sampling_box.iter().find(|(lo, hi)| !(lo < hi)) {
            return Err(Error::Invalid(format!("degenerate sampling interval [{lo}, {hi}]")));
        }
        self.sampling_box = Some(sampling_box);
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn sampling_box(&self) -> Option<&[(f64, f64)]> {
        self.sampling_box.as_deref()
    }

    pub fn metric_expr(&self, i: usize, j: usize) -> &Expr {
        &self.metric[upper_position(self.dimension(), i, j)]
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match &self.sampling_box {
            None => true,
            Some(b) => b.iter().zip(p).all(|(&(lo, hi), &x)| lo <= x && x <= hi),
        }
    }

    pub fn frame_at<T: Scalar>(&self, p: &[T], order: usize) -> Result<PointFrame<T>> {
        PointFrame::new(self, p, order)
    }

    pub fn parse_expr(&self, text: &str) -> Result<Expr> {
        Expr::parse(text, &self.coordinates)
    }
}

/// A vector field given by component expressions, by a potential (`V = grad f`),
/// or by both.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldSpec {
    components: Option<Vec<Expr>>,
    potential: Option<Expr>,
}

impl VectorFieldSpec {
    pub fn from_components(components: Vec<Expr>) -> Self {
        VectorFieldSpec {
            components: Some(components),
            potential: None,
        }
    }

    /// The field is `grad f`, computed through the metric at each point.
    pub fn from_potential(potential: Expr) -> Self {
        VectorFieldSpec {
            components: None,
            potential: Some(potential),
        }
    }

    pub fn with_potential(mut self, potential: Expr) -> Self {
        self.potential = Some(potential);
        self
    }

    pub fn parse<S: AsRef<str>>(manifold: &ChartManifold, components: &[S], potential: Option<&str>) -> Result<Self> {
        if components.len() != manifold.dimension() {
            return Err(Error::Invalid(format!(
                "vector field has {} components, chart has dimension {}",
                components.len(),
                manifold.dimension()
            )));
        }
        let comps = components
            .iter()
            .map(|c| manifold.parse_expr(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let mut spec = Self::from_components(comps);
        if let Some(f) = potential {
            spec = spec.with_potential(manifold.parse_expr(f)?);
        }
        Ok(spec)
    }

    pub fn components(&self) -> Option<&[Expr]> {
        self.components.as_deref()
    }

    pub fn potential(&self) -> Option<&Expr> {
        self.potential.as_ref()
    }

    /// Component jets `V^i` at the frame point, at the frame order.
    pub fn evaluate<T: Scalar>(&self, frame: &PointFrame<T>) -> Result<Vec<Jet<T>>> {
        match (&self.components, &self.potential) {
            (Some(c), _) => c.iter().map(|e| frame.eval(e)).collect(),
            (None, Some(_)) => self.potential_gradient(frame).expect("potential is present"),
            (None, None) => Err(Error::Invalid("vector field has no definition".into())),
        }
    }

    /// Potential jet at one order above the frame, so its gradient keeps the
    /// frame order.
    pub fn potential_jet<T: Scalar>(&self, frame: &PointFrame<T>) -> Option<Result<Jet<T>>> {
        let f = self.potential.as_ref()?;
        let seeds = seed_point(frame.point(), frame.order() + 1);
        Some(f.evaluate(&seeds))
    }

    /// `grad f` when a potential is present.
    pub fn potential_gradient<T: Scalar>(&self, frame: &PointFrame<T>) -> Option<Result<Vec<Jet<T>>>> {
        let f = self.potential_jet(frame)?;
        Some(f.and_then(|f| {
            let df = (0..frame.dim()).map(|j| f.derivative(j)).collect::<Result<Vec<_>>>()?;
            Ok(frame.raise(&df))
        }))
    }
}
