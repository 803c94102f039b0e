//! Acceptance criteria 1–11, one PASS/FAIL line each. Reference values are
//! closed forms on the shipped metrics or independent finite-difference and
//! brute-force oracles.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[path = "../../core/tests/common/mod.rs"]
mod common;

type Case1 = (&'static str, fn(f64) -> f64);
type Criterion = (&'static str, fn() -> Outcome);

use std::path::Path;
use std::process::ExitCode;

use common::{manifold_of, random_instance, random_point, random_poly_metric, relative_error, CurvatureOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soliton_core::geometry::curvature::{curvature, nabla_ricci};
use soliton_core::geometry::tensor::kulkarni_nomizu;
use soliton_core::sampling::sample_box;
use soliton_core::soliton::classify::classify_point;
use soliton_core::soliton::gradient::{
    gradient_identity_suite, BOCHNER, DIVERGENCE, GRAD_LAMBDA, LIE_DIVERGENCE, NORM_RICCI, RIC_VV,
};
use soliton_core::soliton::record::find;
use soliton_core::soliton::suites::{
    BIANCHI, CONTRACTED_BIANCHI, FIRST_PAIR, PAIR_EXCHANGE, SCALAR_CURVATURE, SECOND_PAIR,
};
use soliton_core::soliton::torse::{
    CONCIRCULAR_DIVERGENCE, CONCIRCULAR_FIELD, CONHARMONIC_CRITERION, CURVATURE_V, JACOBI_OPERATOR, LAMBDA,
    NABLA_RIC_SYMMETRIC, RICCI as TORSE_RICCI,
};
use soliton_core::soliton::{recover_lambda, residual_ricci, residual_riemann};
use soliton_core::{
    CheckRecord, CheckStatus, ClassificationReport, SolitonInput, SolitonKind, SolitonPoint, Suite, Tensor,
};
use soliton_forge::{load_spec, run, Command, Options, Output, SpecFile};

type Outcome = Result<(), String>;

const TOL: f64 = 1e-8;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn spec(name: &str) -> SpecFile {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name);
    load_spec(&path).unwrap_or_else(|e| panic!("{name}: {e}"))
}

const SHIPPED: [&str; 5] = [
    "hyperbolic-half-space.json",
    "horospherical.json",
    "hyperbolic-half-space-ricci.json",
    "horospherical-ricci.json",
    "euclidean-constant.json",
];

/// The spec's deterministic sample set.
fn samples(s: &SpecFile) -> Result<Vec<SolitonPoint<f64>>, String> {
    let set = sample_box(&s.bounds, s.count, s.seed, |p| SolitonPoint::new(&s.input, p, 3, TOL))
        .map_err(|e| e.to_string())?;
    ensure!(
        set.exclusions.is_empty(),
        "{}: {} exclusions",
        s.name,
        set.exclusions.len()
    );
    Ok(set.points.into_iter().map(|(_, pt)| pt).collect())
}

fn point(input: &SolitonInput, p: [f64; 3]) -> Result<SolitonPoint<f64>, String> {
    SolitonPoint::new(input, &p, 3, TOL).map_err(|e| e.to_string())
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

fn record<'a>(records: &'a [CheckRecord<f64>], name: &str) -> Result<&'a CheckRecord<f64>, String> {
    find(records, name).ok_or_else(|| format!("no record {name}"))
}

fn value(r: &CheckRecord<f64>, key: &str) -> Result<f64, String> {
    r.value(key).ok_or_else(|| format!("{} has no value {key}", r.name))
}

fn ratio(r: &CheckRecord<f64>) -> Result<f64, String> {
    r.residual
        .map(|res| res.ratio())
        .ok_or_else(|| format!("{} has no residual", r.name))
}

/// `(|V|², V(|V|²), Δ|V|², |∇V|², div V, V(div V))` and `λ` as functions of `z`.
type ClosedForms = (fn(f64) -> [f64; 6], fn(f64) -> f64);

fn check_recovery(s: &SpecFile, forms: ClosedForms, extra: &[[f64; 3]]) -> Outcome {
    let (ingredients, lambda) = forms;
    let mut pts = samples(s)?;
    for p in extra {
        pts.push(point(&s.input, *p)?);
    }
    ensure!(pts.len() >= 16, "{} samples only", pts.len());
    for pt in &pts {
        let z = pt.point()[2];
        let rec = recover_lambda(pt, &s.input).map_err(|e| e.to_string())?;
        for ((name, got), want) in rec.ingredients().into_iter().zip(ingredients(z)) {
            ensure!(rel(got, want) < 1e-9, "z = {z}: {name} = {got}, expected {want}");
        }
        ensure!(
            rel(rec.lambda, lambda(z)) < 1e-8,
            "z = {z}: lambda = {}, expected {}",
            rec.lambda,
            lambda(z)
        );
    }
    Ok(())
}

fn hyperbolic_ingredients(z: f64) -> [f64; 6] {
    [
        1.0 / z.powi(2),
        -2.0 / z.powi(3),
        8.0 / z.powi(2),
        3.0 / z.powi(2),
        -3.0 / z,
        3.0 / z.powi(2),
    ]
}

fn horospherical_ingredients(z: f64) -> [f64; 6] {
    let e = z.exp();
    [e * e, 2.0 * e.powi(3), 8.0 * e * e, 3.0 * e * e, 3.0 * e, 3.0 * e * e]
}

fn criterion_1() -> Outcome {
    let s = spec("hyperbolic-half-space.json");
    ensure!(s.bounds[2] == (0.5, 3.0) && s.count == 16, "spec domain changed");
    check_recovery(&s, (hyperbolic_ingredients, |z| -2.0 / z - 1.0), &[])
}

fn criterion_2() -> Outcome {
    let s = spec("horospherical.json");
    ensure!(s.bounds[2] == (1.0, 3.0), "spec domain changed");
    check_recovery(
        &s,
        (horospherical_ingredients, |z| 2.0 * z.exp() - 1.0),
        &[[0.0, 0.0, 0.0]],
    )
}

fn criterion_3() -> Outcome {
    let cases: [Case1; 2] = [
        ("hyperbolic-half-space-ricci.json", |z| -1.0 / z - 2.0),
        ("horospherical-ricci.json", |z| z.exp() - 2.0),
    ];
    for (name, lambda) in cases {
        let s = spec(name);
        ensure!(s.input.kind == SolitonKind::Ricci, "{name} is not a Ricci spec");
        for pt in samples(&s)? {
            let z = pt.point()[2];
            let rec = recover_lambda(&pt, &s.input).map_err(|e| e.to_string())?;
            ensure!(
                rel(rec.lambda, lambda(z)) < 1e-8,
                "{name} z = {z}: lambda {} vs {}",
                rec.lambda,
                lambda(z)
            );
            let r = residual_ricci(&pt).map_err(|e| e.to_string())?;
            ensure!(r.ratio() < 1e-8, "{name} z = {z}: residual {}", r.raw);
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    for name in ["hyperbolic-half-space.json", "horospherical.json"] {
        let s = spec(name);
        let lambda = s.input.lambda.clone().ok_or("no lambda")?;
        let shifted = s
            .input
            .manifold
            .parse_expr(&format!("({lambda}) + 0.1"))
            .map_err(|e| e.to_string())?;
        let perturbed = s.input.clone().with_lambda(shifted);
        for pt in samples(&s)? {
            let r = residual_riemann(&pt).map_err(|e| e.to_string())?;
            ensure!(r.ratio() < 1e-8, "{name} at {:?}: residual {}", pt.point(), r.raw);
            let q = point(&perturbed, [pt.point()[0], pt.point()[1], pt.point()[2]])?;
            let r = residual_riemann(&q).map_err(|e| e.to_string())?;
            ensure!(r.raw > 0.1, "{name} perturbed: residual {} not above 0.1", r.raw);
            ensure!(
                (r.raw - 0.2).abs() < 1e-9,
                "{name} perturbed: residual {} is not 2·0.1",
                r.raw
            );
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let names = [
        BOCHNER,
        LIE_DIVERGENCE,
        RIC_VV,
        DIVERGENCE,
        GRAD_LAMBDA,
        SCALAR_CURVATURE,
        NORM_RICCI,
    ];
    for spec_name in ["hyperbolic-half-space.json", "horospherical.json"] {
        let s = spec(spec_name);
        for pt in samples(&s)? {
            let records = Suite::Identities.run(&pt, &s.input).map_err(|e| e.to_string())?;
            for name in names {
                let r = record(&records, name)?;
                ensure!(r.status == CheckStatus::Pass, "{spec_name} {name}: {:?}", r.status);
                ensure!(ratio(r)? < 1e-8, "{spec_name} {name}: residual {:?}", r.residual);
            }
        }
    }
    let mut instances = 0;
    for seed in 0..60u64 {
        let input = random_instance(seed);
        let pt = match SolitonPoint::new(&input, &random_point(seed), 3, 1e-7) {
            Ok(pt) => pt,
            Err(soliton_core::Error::ZeroVectorField) => continue,
            Err(e) => return Err(format!("random seed {seed}: {e}")),
        };
        let records = gradient_identity_suite(&pt, &input).map_err(|e| e.to_string())?;
        for name in [BOCHNER, LIE_DIVERGENCE] {
            let r = record(&records, name)?;
            ensure!(
                r.status == CheckStatus::Pass,
                "random seed {seed} {name}: {:?}",
                r.residual
            );
        }
        instances += 1;
        if instances == 50 {
            return Ok(());
        }
    }
    Err(format!("only {instances} random instances"))
}

fn criterion_6() -> Outcome {
    let cases: [Case1; 2] = [
        ("hyperbolic-half-space.json", |z| -1.0 / z),
        ("horospherical.json", f64::exp),
    ];
    for (name, a) in cases {
        let s = spec(name);
        let pts = samples(&s)?;
        let classes = pts
            .iter()
            .map(|pt| classify_point(pt, &s.input))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let report = ClassificationReport::from_points(&classes, TOL);
        ensure!(report.is_gradient.holds, "{name}: not gradient");
        ensure!(report.is_concircular.holds, "{name}: not concircular");
        for c in &classes {
            let z = c.point[2];
            ensure!(rel(c.a, a(z)) < 1e-9, "{name} z = {z}: a = {}, expected {}", c.a, a(z));
            for r in &c.concircular_checks {
                ensure!(
                    r.name == CONCIRCULAR_FIELD || r.name == CONCIRCULAR_DIVERGENCE,
                    "unexpected {}",
                    r.name
                );
                ensure!(ratio(r)? < 1e-9, "{name} {}: residual {:?}", r.name, r.residual);
            }
            ensure!(c.concircular_checks.len() == 2, "{name}: concircular checks missing");
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let cases: [Case1; 2] = [
        ("hyperbolic-half-space.json", |z| -2.0 / z - 1.0),
        ("horospherical.json", |z| 2.0 * z.exp() - 1.0),
    ];
    for (name, lambda) in cases {
        let s = spec(name);
        for pt in samples(&s)? {
            let z = pt.point()[2];
            let records = Suite::Identities.run(&pt, &s.input).map_err(|e| e.to_string())?;
            let l = record(&records, LAMBDA)?;
            let got = value(l, "lambda_formula")?;
            ensure!(rel(got, lambda(z)) < 1e-8, "{name} z = {z}: formula gives {got}");
            let eq7 = record(&records, TORSE_RICCI)?;
            ensure!(
                ratio(eq7)? < 1e-8,
                "{name} z = {z}: Ricci form residual {:?}",
                eq7.residual
            );
        }
    }

    let s = spec("horospherical.json");
    let pt = point(&s.input, [0.0, 0.0, 0.0])?;
    let records = Suite::Identities.run(&pt, &s.input).map_err(|e| e.to_string())?;
    let jac = record(&records, JACOBI_OPERATOR)?;
    ensure!(jac.status == CheckStatus::Pass, "Jacobi operator: {:?}", jac.residual);
    let e2z = 1.0;
    let ez = 1.0;
    ensure!(
        rel(value(jac, "r_e0_v_v")?, -e2z) < 1e-12,
        "R(∂x,V)V = {}",
        value(jac, "r_e0_v_v")?
    );
    ensure!(rel(value(jac, "v_a")?, e2z) < 1e-12, "V(a) = {}", value(jac, "v_a")?);
    let a = record(&records, LAMBDA)?;
    ensure!(rel(value(a, "a")?, ez) < 1e-12, "a = {}", value(a, "a")?);
    let rv = record(&records, CURVATURE_V)?;
    ensure!(rv.status == CheckStatus::Pass, "R(X,Y)V display: {:?}", rv.residual);
    // Independent: R(∂x, V)V = (V^z)² R(∂x, ∂z)∂z, slots [0, 2, 2; 0].
    let frame = s
        .input
        .manifold
        .frame_at(&[0.0, 0.0, 0.0], 2)
        .map_err(|e| e.to_string())?;
    let c = curvature(&frame).map_err(|e| e.to_string())?;
    let direct = c.riemann.get(&[0, 2, 2, 0]).value() * ez * ez;
    ensure!(rel(direct, -e2z) < 1e-12, "direct R(∂x,V)V = {direct}");
    Ok(())
}

fn criterion_8() -> Outcome {
    let flag = |r: &CheckRecord<f64>, k: &str| value(r, k).map(|v| v == 1.0);

    let s = spec("euclidean-constant.json");
    let input = s.input.clone().with_kind(SolitonKind::Ricci);
    let pt = point(&input, [0.1, -0.2, 0.3])?;
    let records = Suite::Identities.run(&pt, &input).map_err(|e| e.to_string())?;
    let r = record(&records, CONHARMONIC_CRITERION)?;
    ensure!(
        flag(r, "h_holds")? && flag(r, "riemann_holds")?,
        "euclidean: both sides should hold"
    );
    ensure!(r.status == CheckStatus::Pass, "euclidean: equivalence not confirmed");

    let s = spec("horospherical-ricci.json");
    let pt = point(&s.input, [0.0, 0.0, 0.0])?;
    let records = Suite::Identities.run(&pt, &s.input).map_err(|e| e.to_string())?;
    let r = record(&records, CONHARMONIC_CRITERION)?;
    ensure!(rel(value(r, "h_slot")?, 3.0) < 1e-12, "H slot {}", value(r, "h_slot")?);
    ensure!(value(r, "r_slot")?.abs() < 1e-12, "R slot {}", value(r, "r_slot")?);
    ensure!(
        !flag(r, "h_holds")? && !flag(r, "riemann_holds")?,
        "horospherical ricci: both sides should fail"
    );
    ensure!(
        value(r, "riemann_residual")? >= 1.0,
        "horospherical ricci: residual {}",
        value(r, "riemann_residual")?
    );
    ensure!(
        r.status == CheckStatus::Pass,
        "horospherical ricci: equivalence not confirmed"
    );
    Ok(())
}

fn criterion_9() -> Outcome {
    for name in ["hyperbolic-half-space.json", "horospherical.json"] {
        let s = spec(name);
        for pt in samples(&s)? {
            let records = Suite::Identities.run(&pt, &s.input).map_err(|e| e.to_string())?;
            let r = record(&records, NABLA_RIC_SYMMETRIC)?;
            ensure!(r.status == CheckStatus::Pass, "{name}: equivalence not confirmed");
            ensure!(
                value(r, "lhs_holds")? == 1.0 && value(r, "rhs_holds")? == 1.0,
                "{name}: a side fails"
            );
            ensure!(
                value(r, "rhs_residual")? < 1e-8,
                "{name}: dλ − 2da = {}",
                value(r, "rhs_residual")?
            );
            let nr = nabla_ricci(&pt.frame, &pt.curvature).map_err(|e| e.to_string())?;
            let max = pt.frame.orthonormal(&nr.values()).max_abs();
            ensure!(max < 1e-8, "{name}: max|∇Ric| = {max}");
        }
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for seed in 0..8u64 {
        let p = [0; 3].map(|_| rng.gen_range(-0.5..0.5));
        let g = random_poly_metric(seed);
        let frame = manifold_of(&g).frame_at(&p, 3).map_err(|e| e.to_string())?;
        let oracle = CurvatureOracle { g };
        let gamma: Vec<f64> = (0..27).map(|s| frame.gamma(s / 9, (s / 3) % 3, s % 3)).collect();
        let e = relative_error(&gamma, &oracle.christoffel(p));
        ensure!(e < 1e-5, "seed {seed}: Christoffel error {e}");
        let c = curvature(&frame).map_err(|e| e.to_string())?;
        let vals = |t: &soliton_core::TensorField<f64>| t.values().components().to_vec();
        let e = relative_error(&vals(&c.riemann), &oracle.riemann(p));
        ensure!(e < 1e-5, "seed {seed}: Riemann error {e}");
        let e = relative_error(&vals(&c.ricci), &oracle.ricci(p));
        ensure!(e < 1e-5, "seed {seed}: Ricci error {e}");
        let nr = nabla_ricci(&frame, &c).map_err(|e| e.to_string())?;
        let e = relative_error(&vals(&nr), &oracle.nabla_ricci(p));
        ensure!(e < 1e-5, "seed {seed}: ∇Ric error {e}");
    }
    for _ in 0..32 {
        let a: Vec<f64> = (0..9).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let b: Vec<f64> = (0..9).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let sym = |m: &[f64]| Tensor::covariant(2, 3, |s| 0.5 * (m[s[0] * 3 + s[1]] + m[s[1] * 3 + s[0]]));
        let (ta, tb) = (sym(&a), sym(&b));
        let kn = kulkarni_nomizu(&ta, &tb);
        let h = |i: usize, j: usize| *ta.get(&[i, j]);
        let k = |i: usize, j: usize| *tb.get(&[i, j]);
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    for w in 0..3 {
                        let brute = h(x, w) * k(y, z) + h(y, z) * k(x, w) - h(x, z) * k(y, w) - h(y, w) * k(x, z);
                        let got = *kn.get(&[x, y, z, w]);
                        ensure!((got - brute).abs() < 1e-12, "KN [{x},{y},{z},{w}]: {got} vs {brute}");
                    }
                }
            }
        }
    }
    Ok(())
}

fn criterion_11() -> Outcome {
    let names = [FIRST_PAIR, SECOND_PAIR, PAIR_EXCHANGE, BIANCHI, CONTRACTED_BIANCHI];
    for name in SHIPPED {
        let s = spec(name);
        let out = run(Command::Curvature, &s, &Options::default()).map_err(|e| e.to_string())?;
        let Output::Report(doc) = out else {
            return Err("expected a report".into());
        };
        for check in names {
            let c = doc
                .checks
                .iter()
                .find(|c| c.name == check)
                .ok_or(format!("{name}: no {check}"))?;
            ensure!(c.status == "pass", "{name} {check}: {}", c.status);
            let r = c.residual.ok_or(format!("{name} {check}: no residual"))?.0;
            let scale = c.scale.map_or(0.0, |s| s.0).max(1.0);
            ensure!(r / scale < 1e-8, "{name} {check}: residual {r}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("hyperbolic half-space: lambda recovery and ingredients", criterion_1),
        ("horospherical: lambda recovery and ingredients", criterion_2),
        ("Ricci specs: lambda recovery and residual", criterion_3),
        ("soliton residuals and negative control", criterion_4),
        ("identity catalog and random gradient fields", criterion_5),
        ("classification and concircular identities", criterion_6),
        ("torse-forming suite", criterion_7),
        ("conharmonic criterion", criterion_8),
        ("nabla Ric equivalences", criterion_9),
        ("finite-difference and brute-force oracles", criterion_10),
        ("curvature symmetries on shipped specs", criterion_11),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(()) => println!("PASS criterion {:>2}: {title}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {title}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
