#![allow(dead_code, clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soliton_core::{ChartManifold, SolitonInput, SolitonKind, SolitonPoint, VectorFieldSpec};

pub const XYZ: [&str; 3] = ["x", "y", "z"];

pub fn input(metric: [&str; 3], v: [&str; 3], potential: &str, lambda: &str, kind: SolitonKind) -> SolitonInput {
    let m = ChartManifold::diagonal(&XYZ, &metric).unwrap();
    let field = VectorFieldSpec::parse(&m, &v, Some(potential)).unwrap();
    let l = m.parse_expr(lambda).unwrap();
    SolitonInput::new(m, field, kind).with_lambda(l)
}

/// Hyperbolic half-space, `V = ∂z`, `f = −1/z`.
pub fn hyperbolic(lambda: &str, kind: SolitonKind) -> SolitonInput {
    input(["1/z^2", "1/z^2", "1/z^2"], ["0", "0", "1"], "-1/z", lambda, kind)
}

/// Horospherical hyperbolic metric, `V = e^z ∂z`, `f = e^z`.
pub fn horospherical(lambda: &str, kind: SolitonKind) -> SolitonInput {
    input(
        ["exp(2*z)", "exp(2*z)", "1"],
        ["0", "0", "exp(z)"],
        "exp(z)",
        lambda,
        kind,
    )
}

pub fn riemann_hyperbolic() -> SolitonInput {
    hyperbolic("-2/z - 1", SolitonKind::Riemann)
}

pub fn riemann_horospherical() -> SolitonInput {
    horospherical("2*exp(z) - 1", SolitonKind::Riemann)
}

pub fn ricci_hyperbolic() -> SolitonInput {
    hyperbolic("-1/z - 2", SolitonKind::Ricci)
}

pub fn ricci_horospherical() -> SolitonInput {
    horospherical("exp(z) - 2", SolitonKind::Ricci)
}

pub fn euclidean(kind: SolitonKind) -> SolitonInput {
    input(["1", "1", "1"], ["1", "2", "-1"], "x + 2*y - z", "0", kind)
}

pub fn at(input: &SolitonInput, p: [f64; 3]) -> SolitonPoint<f64> {
    SolitonPoint::new(input, &p, 3, 1e-8).unwrap()
}

pub fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

/// Five-point central difference of `f` along coordinate `a`.
pub fn d1<const N: usize, R, F>(f: F, p: [f64; N], a: usize, h: f64) -> R
where
    F: Fn([f64; N]) -> R,
    R: FdValue,
{
    let at = |s: f64| {
        let mut q = p;
        q[a] += s * h;
        f(q)
    };
    let (m2, m1, p1, p2) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
    R::combine(&[(&m2, 1.0), (&m1, -8.0), (&p1, 8.0), (&p2, -1.0)], 12.0 * h)
}

/// Values that finite differences can be taken of.
pub trait FdValue: Sized {
    fn combine(terms: &[(&Self, f64)], denom: f64) -> Self;
}

impl FdValue for f64 {
    fn combine(terms: &[(&Self, f64)], denom: f64) -> Self {
        terms.iter().map(|(v, w)| **v * w).sum::<f64>() / denom
    }
}

impl FdValue for Vec<f64> {
    fn combine(terms: &[(&Self, f64)], denom: f64) -> Self {
        (0..terms[0].0.len())
            .map(|i| terms.iter().map(|(v, w)| v[i] * w).sum::<f64>() / denom)
            .collect()
    }
}

/// Sparse polynomial in three variables.
#[derive(Clone, Debug, Default)]
pub struct Poly {
    pub terms: Vec<(f64, [u32; 3])>,
}

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly {
            terms: vec![(c, [0, 0, 0])],
        }
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| c * (0..3).map(|i| p[i].powi(e[i] as i32)).product::<f64>())
            .sum()
    }

    pub fn to_expr(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, e)| {
                let mut s = format!("({c:.6})");
                for (i, &k) in e.iter().enumerate() {
                    if k > 0 {
                        s += &format!("*{}^{k}", XYZ[i]);
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

/// Random symmetric polynomial metric, diagonally dominant on `[-0.5, 0.5]³`.
pub fn random_poly_metric(seed: u64) -> [[Poly; 3]; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let term = |rng: &mut ChaCha8Rng| {
        let c: f64 = (rng.gen_range(-150..=150) as f64) / 1000.0;
        let mut e = [0u32; 3];
        for _ in 0..rng.gen_range(1..=3) {
            e[rng.gen_range(0..3)] += 1;
        }
        (c, e)
    };
    let entry = |diag: bool, rng: &mut ChaCha8Rng| {
        let mut p = if diag {
            Poly::constant(2.0)
        } else {
            Poly { terms: vec![] }
        };
        for _ in 0..3 {
            p.terms.push(term(rng));
        }
        p
    };
    let mut g: [[Poly; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in i..3 {
            let p = entry(i == j, &mut rng);
            g[i][j] = p.clone();
            g[j][i] = p;
        }
    }
    g
}

pub fn manifold_of(g: &[[Poly; 3]; 3]) -> ChartManifold {
    let rows: Vec<Vec<String>> = g.iter().map(|r| r.iter().map(Poly::to_expr).collect()).collect();
    ChartManifold::parse(&XYZ, &rows).unwrap()
}

pub fn inverse3(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a0, a1) = ((j + 1) % 3, (j + 2) % 3);
            let (b0, b1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (m[a0][b0] * m[a1][b1] - m[a0][b1] * m[a1][b0]) / det;
        }
    }
    inv
}

pub const H: f64 = 1e-3;

/// Curvature computed from five-point differences of the metric polynomials.
pub struct CurvatureOracle {
    pub g: [[Poly; 3]; 3],
}

impl CurvatureOracle {
    pub fn metric(&self, p: [f64; 3]) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.g[i][j].eval(p);
            }
        }
        m
    }

    /// `Γ^k_ij` flattened as `[k][i][j]`.
    pub fn christoffel(&self, p: [f64; 3]) -> Vec<f64> {
        let inv = inverse3(self.metric(p));
        let dg: Vec<[[f64; 3]; 3]> = (0..3)
            .map(|a| {
                let mut d = [[0.0; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        d[i][j] = d1(|q| self.g[i][j].eval(q), p, a, H);
                    }
                }
                d
            })
            .collect();
        let mut out = vec![0.0; 27];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    out[(k * 3 + i) * 3 + j] = (0..3)
                        .map(|m| 0.5 * inv[k][m] * (dg[i][m][j] + dg[j][m][i] - dg[m][i][j]))
                        .sum();
                }
            }
        }
        out
    }

    /// `R^l_ijk` flattened as `[i][j][k][l]`.
    pub fn riemann(&self, p: [f64; 3]) -> Vec<f64> {
        let gam = self.christoffel(p);
        let dgam: Vec<Vec<f64>> = (0..3).map(|a| d1(|q| self.christoffel(q), p, a, H)).collect();
        let g = |k: usize, i: usize, j: usize| gam[(k * 3 + i) * 3 + j];
        let dg = |a: usize, k: usize, i: usize, j: usize| dgam[a][(k * 3 + i) * 3 + j];
        let mut out = vec![0.0; 81];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let mut r = dg(i, l, j, k) - dg(j, l, i, k);
                        for m in 0..3 {
                            r += g(l, i, m) * g(m, j, k) - g(l, j, m) * g(m, i, k);
                        }
                        out[((i * 3 + j) * 3 + k) * 3 + l] = r;
                    }
                }
            }
        }
        out
    }

    /// `Ric_jk = R^i_ijk`, flattened `[j][k]`.
    pub fn ricci(&self, p: [f64; 3]) -> Vec<f64> {
        let r = self.riemann(p);
        let mut out = vec![0.0; 9];
        for j in 0..3 {
            for k in 0..3 {
                out[j * 3 + k] = (0..3).map(|i| r[((i * 3 + j) * 3 + k) * 3 + i]).sum();
            }
        }
        out
    }

    /// `(∇_i Ric)_jk`, flattened `[i][j][k]`.
    pub fn nabla_ricci(&self, p: [f64; 3]) -> Vec<f64> {
        let ric = self.ricci(p);
        let gam = self.christoffel(p);
        let g = |k: usize, i: usize, j: usize| gam[(k * 3 + i) * 3 + j];
        let mut out = vec![0.0; 27];
        for i in 0..3 {
            let d = d1(|q| self.ricci(q), p, i, 1e-2);
            for j in 0..3 {
                for k in 0..3 {
                    let mut v = d[j * 3 + k];
                    for l in 0..3 {
                        v -= g(l, i, j) * ric[l * 3 + k] + g(l, i, k) * ric[j * 3 + l];
                    }
                    out[(i * 3 + j) * 3 + k] = v;
                }
            }
        }
        out
    }
}

/// Max componentwise difference over the oracle's max magnitude.
pub fn relative_error(engine: &[f64], oracle: &[f64]) -> f64 {
    let scale = oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = engine.iter().zip(oracle).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    diff / scale.max(1e-12)
}

fn coef(rng: &mut ChaCha8Rng, scale: f64) -> String {
    format!("{:.3}", rng.gen_range(-1.0..1.0) * scale)
}

/// Random analytic metric and potential, positive definite on `[-0.5, 0.5]³`.
pub fn random_instance(seed: u64) -> SolitonInput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = ["sin(x*y)", "cos(y - z)", "exp(0.5*z)", "x*z", "sinh(x)", "y^2"];
    let pick = |rng: &mut ChaCha8Rng, scale: f64| {
        let a = atoms[rng.gen_range(0..atoms.len())];
        format!("({})*{a}", coef(rng, scale))
    };
    let mut rows = vec![vec![String::new(); 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let e = if i == j {
                format!("2 + {} + {}", pick(&mut rng, 0.3), pick(&mut rng, 0.2))
            } else {
                format!("{} + {}", pick(&mut rng, 0.2), pick(&mut rng, 0.1))
            };
            rows[i][j] = e.clone();
            rows[j][i] = e;
        }
    }
    let m = ChartManifold::parse(&XYZ, &rows).unwrap();
    let potential = format!(
        "({})*x^2*y + sin({}*z) + exp({}*x*y) + ({})*z^3",
        coef(&mut rng, 1.0),
        coef(&mut rng, 2.0),
        coef(&mut rng, 1.0),
        coef(&mut rng, 0.5)
    );
    let field = VectorFieldSpec::from_potential(m.parse_expr(&potential).unwrap());
    SolitonInput::new(m, field, SolitonKind::Ricci)
}

pub fn random_point(seed: u64) -> [f64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    [0; 3].map(|_| rng.gen_range(-0.5..0.5))
}
