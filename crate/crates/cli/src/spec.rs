//! Spec files: a chart, a metric, a potential field, the soliton equation and
//! a sampling box, as JSON.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use soliton_core::expr::Func;
use soliton_core::{ChartManifold, Expr, SolitonInput, SolitonKind, VectorFieldSpec};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: String,
    dimension: usize,
    coordinates: Vec<String>,
    metric: Vec<Vec<String>>,
    vector_field: RawField,
    soliton: RawSoliton,
    sampling: RawSampling,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    components: Vec<String>,
    #[serde(default)]
    potential: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSoliton {
    kind: RawKind,
    #[serde(default)]
    lambda: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawKind {
    Riemann,
    Ricci,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSampling {
    #[serde(rename = "box")]
    bounds: BTreeMap<String, [f64; 2]>,
    count: usize,
    seed: u64,
}

/// A validated spec with every expression parsed.
#[derive(Clone, Debug)]
pub struct SpecFile {
    pub name: String,
    pub input: SolitonInput,
    /// Sampling interval per coordinate, in coordinate order.
    pub bounds: Vec<(f64, f64)>,
    pub count: usize,
    pub seed: u64,
}

impl SpecFile {
    pub fn dimension(&self) -> usize {
        self.input.dimension()
    }
}

pub fn load_spec(path: &Path) -> Result<SpecFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_spec(&text)
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out += &index.to_string(),
            Segment::Map { key } => out += &key.replace('~', "~0").replace('/', "~1"),
            Segment::Enum { variant } => out += variant,
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

pub fn parse_spec(text: &str) -> Result<SpecFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_of(e.path());
        CliError::schema(pointer, e.into_inner().to_string())
    })?;
    validate(raw)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_at(text: &str, coords: &[String], pointer: String) -> Result<Expr, CliError> {
    Expr::parse(text, coords).map_err(|source| CliError::Expression { pointer, source })
}

fn normalized(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn validate(raw: RawSpec) -> Result<SpecFile, CliError> {
    if raw.name.trim().is_empty() {
        return Err(CliError::schema("/name", "name must be non-empty"));
    }
    let n = raw.dimension;
    if n == 0 {
        return Err(CliError::schema("/dimension", "dimension must be at least 1"));
    }
    if raw.coordinates.len() != n {
        return Err(CliError::schema(
            "/coordinates",
            format!("expected {n} coordinates, found {}", raw.coordinates.len()),
        ));
    }
    for (i, c) in raw.coordinates.iter().enumerate() {
        if !is_identifier(c) || Func::ALL.iter().any(|f| f.name() == c) {
            return Err(CliError::schema(
                format!("/coordinates/{i}"),
                format!("`{c}` is not a usable coordinate name"),
            ));
        }
        if raw.coordinates[..i].contains(c) {
            return Err(CliError::schema(
                format!("/coordinates/{i}"),
                format!("duplicate coordinate `{c}`"),
            ));
        }
    }
    let coords = &raw.coordinates;

    if raw.metric.len() != n {
        return Err(CliError::schema(
            "/metric",
            format!("expected {n} rows, found {}", raw.metric.len()),
        ));
    }
    let full = raw.metric[0].len() == n && raw.metric.iter().all(|r| r.len() == n);
    let mut upper = Vec::with_capacity(n);
    for (i, row) in raw.metric.iter().enumerate() {
        let expected = if full { n } else { n - i };
        if row.len() != expected {
            return Err(CliError::schema(
                format!("/metric/{i}"),
                format!(
                    "expected {expected} entries (full rows or upper triangle), found {}",
                    row.len()
                ),
            ));
        }
        let offset = if full { 0 } else { i };
        let mut parsed = Vec::with_capacity(n - i);
        for (k, text) in row.iter().enumerate() {
            let j = k + offset;
            let pointer = format!("/metric/{i}/{k}");
            let expr = parse_at(text, coords, pointer.clone())?;
            if j < i {
                if normalized(text) != normalized(&raw.metric[j][i]) {
                    return Err(CliError::schema(
                        pointer,
                        format!("metric is not symmetric: g[{i}][{j}] differs from g[{j}][{i}]"),
                    ));
                }
                continue;
            }
            parsed.push(expr);
        }
        upper.push(parsed);
    }
    let manifold = ChartManifold::new(coords.clone(), upper).map_err(|e| CliError::schema("/metric", e.to_string()))?;

    let field = &raw.vector_field;
    if field.components.len() != n {
        return Err(CliError::schema(
            "/vector_field/components",
            format!("expected {n} components, found {}", field.components.len()),
        ));
    }
    let components = field
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| parse_at(c, coords, format!("/vector_field/components/{i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut spec = VectorFieldSpec::from_components(components);
    if let Some(f) = &field.potential {
        spec = spec.with_potential(parse_at(f, coords, "/vector_field/potential".into())?);
    }

    let kind = match raw.soliton.kind {
        RawKind::Riemann => SolitonKind::Riemann,
        RawKind::Ricci => SolitonKind::Ricci,
    };
    if kind == SolitonKind::Riemann && n < 3 {
        return Err(CliError::schema(
            "/soliton/kind",
            "riemann soliton checks require dimension at least 3",
        ));
    }
    let mut input = SolitonInput::new(manifold, spec, kind);
    if let Some(l) = &raw.soliton.lambda {
        input = input.with_lambda(parse_at(l, coords, "/soliton/lambda".into())?);
    }

    let s = &raw.sampling;
    if let Some(k) = s.bounds.keys().find(|k| !coords.contains(k)) {
        return Err(CliError::schema(
            format!("/sampling/box/{k}"),
            format!("`{k}` is not a coordinate"),
        ));
    }
    let mut bounds = Vec::with_capacity(n);
    for c in coords {
        let [lo, hi] = *s
            .bounds
            .get(c)
            .ok_or_else(|| CliError::schema("/sampling/box", format!("missing interval for `{c}`")))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::schema(
                format!("/sampling/box/{c}"),
                format!("interval [{lo}, {hi}] is degenerate"),
            ));
        }
        bounds.push((lo, hi));
    }
    if s.count == 0 {
        return Err(CliError::schema("/sampling/count", "count must be at least 1"));
    }
    Ok(SpecFile {
        name: raw.name,
        input,
        bounds,
        count: s.count,
        seed: s.seed,
    })
}
