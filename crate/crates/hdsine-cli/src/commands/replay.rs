use crate::output::fmt_float;
use crate::CliError;
use hdsine::concentration::{run_concentration, tube_measure_bound_check, ConcentrationConfig};
use hdsine::gensine::functional_equation_residual;
use hdsine::identities::{
    build_context, det_affine_split, hyper_identity_residual, polar_identity_residual,
    q_coefficients,
};
use hdsine::linalg::{content, orthonormal_frame, Vector, DEFAULT_TOL};
use hdsine::samplers::{CantorProductSampler, LebesgueFrameSampler, MeasureSampler};
use hdsine::semimetric::{check_simplex_inequality, SineKind};
use hdsine::sines::{hypersine, polar_sine, PointConfig};
use serde_json::Value;
use std::path::Path;

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value, CliError> {
    v.get(key)
        .ok_or_else(|| CliError::usage(format!("instance file is missing field {key:?}")))
}

fn as_u64(v: &Value, key: &str) -> Result<u64, CliError> {
    field(v, key)?
        .as_u64()
        .ok_or_else(|| CliError::usage(format!("field {key:?} is not an integer")))
}

fn as_str<'v>(v: &'v Value, key: &str) -> Result<&'v str, CliError> {
    field(v, key)?
        .as_str()
        .ok_or_else(|| CliError::usage(format!("field {key:?} is not a string")))
}

fn as_bool(v: &Value, key: &str) -> Result<bool, CliError> {
    field(v, key)?
        .as_bool()
        .ok_or_else(|| CliError::usage(format!("field {key:?} is not a boolean")))
}

/// Floats are serialized as fixed-digit strings; accept raw numbers too.
fn parse_float(v: &Value, what: &str) -> Result<f64, CliError> {
    match v {
        Value::String(s) => s
            .parse::<f64>()
            .map_err(|_| CliError::usage(format!("cannot parse {what} from {s:?}"))),
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| CliError::usage(format!("{what} is not representable"))),
        _ => Err(CliError::usage(format!("{what} is neither string nor number"))),
    }
}

fn as_float(v: &Value, key: &str) -> Result<f64, CliError> {
    parse_float(field(v, key)?, key)
}

fn parse_vector(v: &Value, what: &str) -> Result<Vector, CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| CliError::usage(format!("{what} is not an array")))?;
    let coords: Result<Vec<f64>, CliError> =
        arr.iter().map(|x| parse_float(x, what)).collect();
    Vector::new(coords?).map_err(|e| CliError::usage(format!("{what}: {e}")))
}

fn vector_field(v: &Value, key: &str) -> Result<Vector, CliError> {
    parse_vector(field(v, key)?, key)
}

fn vectors_field(v: &Value, key: &str) -> Result<Vec<Vector>, CliError> {
    let arr = field(v, key)?
        .as_array()
        .ok_or_else(|| CliError::usage(format!("field {key:?} is not an array")))?;
    arr.iter().map(|x| parse_vector(x, key)).collect()
}

fn verdict(holds: bool, mismatched: Option<String>) -> Result<(), CliError> {
    match (holds, mismatched) {
        (true, None) => {
            println!("verdict: pass");
            Ok(())
        }
        (false, _) => {
            println!("verdict: property violated");
            Err(CliError::Violation("replayed instance violates its property".into()))
        }
        (true, Some(msg)) => {
            println!("verdict: recorded values do not reproduce ({msg})");
            Err(CliError::Violation(format!(
                "recorded values do not reproduce: {msg}"
            )))
        }
    }
}

fn replay_semimetric(v: &Value) -> Result<(), CliError> {
    let kind = SineKind::parse(as_str(v, "kind")?)?;
    let w = vector_field(v, "w")?;
    let vs = vectors_field(v, "vs")?;
    let u = vector_field(v, "u")?;
    let cfg = PointConfig::new(w.clone(), vs.clone())?;
    let report = check_simplex_inequality(kind, &cfg, &u)?;

    println!("replay semimetric kind={} d={} n={}", kind.name(), cfg.intrinsic_dim(), w.dim());
    let shifted = cfg.shifted();
    println!(
        "  tuple content M_{} = {}",
        shifted.len(),
        fmt_float(content(&shifted).map(|c| c.value).unwrap_or(0.0))
    );
    println!("  lhs |sine| = {}", fmt_float(report.lhs));
    for (i, term) in report.rhs_terms.iter().enumerate() {
        println!("  term[{i}] (u in slot {i}) = {}", fmt_float(*term));
    }
    println!("  slack = {}", fmt_float(report.slack));
    println!("  holds = {}", report.holds);

    // Cross-check any recorded report: a corrupted record counts as a
    // violation even when the recomputed inequality holds.
    let mut mismatch = None;
    if let Some(recorded) = v.get("report") {
        let lhs = as_float(recorded, "lhs")?;
        let slack = as_float(recorded, "slack")?;
        let holds = as_bool(recorded, "holds")?;
        let tol = 1e-9 * report.lhs.abs().max(1.0);
        if (lhs - report.lhs).abs() > tol {
            mismatch = Some(format!(
                "recorded lhs {} vs recomputed {}",
                fmt_float(lhs),
                fmt_float(report.lhs)
            ));
        } else if (slack - report.slack).abs() > tol {
            mismatch = Some(format!(
                "recorded slack {} vs recomputed {}",
                fmt_float(slack),
                fmt_float(report.slack)
            ));
        } else if holds != report.holds {
            mismatch = Some(format!(
                "recorded holds = {holds} vs recomputed {}",
                report.holds
            ));
        }
    }
    verdict(report.holds, mismatch)
}

fn replay_identities(v: &Value) -> Result<(), CliError> {
    let vs = vectors_field(v, "vs")?;
    let u = vector_field(v, "u")?;
    let betas_raw = field(v, "betas")?
        .as_array()
        .ok_or_else(|| CliError::usage("field \"betas\" is not an array"))?;
    let betas: Result<Vec<f64>, CliError> =
        betas_raw.iter().map(|x| parse_float(x, "beta")).collect();
    let betas = betas?;
    let ctx = build_context(&vs, &u, &betas)?;

    println!("replay identities d={}", ctx.intrinsic_dim());
    println!("  lambdas = {:?}", ctx.lambdas());
    println!("  |u_tilde| = {}", fmt_float(ctx.u_tilde().norm()));
    let det = det_affine_split(&ctx);
    let polar = polar_identity_residual(&ctx)?;
    let hyper = hyper_identity_residual(&ctx)?;
    println!("  det split residual = {}", fmt_float(det));
    println!("  polar identity residual = {}", fmt_float(polar));
    println!("  hypersine identity residual = {}", fmt_float(hyper));
    let q = q_coefficients(&ctx)?;
    for (i, qi) in q.content_ratio.iter().enumerate() {
        println!("  Q[{i}] = {}", fmt_float(*qi));
    }
    let psin = polar_sine(&PointConfig::at_origin(vs.clone())?).value.abs();
    let gsin = hypersine(&PointConfig::at_origin(vs)?).value.abs();
    let holds = det <= 1e-9 * psin.max(1.0).max(gsin)
        && polar <= 1e-9 * psin.max(1.0)
        && hyper <= 1e-9 * gsin.max(1.0)
        && q.content_ratio.iter().all(|&qi| qi > 0.0);
    println!("  holds = {holds}");
    verdict(holds, None)
}

fn replay_funceq(v: &Value) -> Result<(), CliError> {
    let family = as_str(v, "family")?;
    let c = as_float(v, "c").unwrap_or(1.0);
    let k = as_float(v, "k").unwrap_or(0.0);
    let alpha = as_float(v, "alpha")?;
    let beta = as_float(v, "beta")?;
    let delta = as_float(v, "delta")?;
    let tol = as_float(v, "tol").unwrap_or(1e-9);
    let f = super::funceq::family_function(family, c, k)?;
    let scale = f(alpha + beta).abs().max(1.0);
    let r = functional_equation_residual(&*f, alpha, beta, delta)? / scale;
    println!("replay funceq family={family} alpha={alpha} beta={beta} delta={delta}");
    println!("  f(alpha+beta) = {}", fmt_float(f(alpha + beta)));
    println!("  f(alpha+delta) = {}", fmt_float(f(alpha + delta)));
    println!("  f(delta-beta) = {}", fmt_float(f(delta - beta)));
    println!("  f(delta) = {}", fmt_float(f(delta)));
    println!("  scaled residual = {}", fmt_float(r));
    verdict(r <= tol, None)
}

fn replay_concentration(v: &Value) -> Result<(), CliError> {
    let sampler_name = as_str(v, "sampler")?;
    let gamma = as_float(v, "gamma")?;
    let d = as_u64(v, "d")? as usize;
    let n = as_u64(v, "n")? as usize;
    let eps = as_float(v, "eps")?;
    let c = as_float(v, "c")?;
    let one_term = as_bool(v, "one_term")?;
    let seed = as_u64(v, "seed")?;
    let config = as_u64(v, "config")?;
    let radius = as_float(v, "radius")?;
    let s = vectors_field(v, "s")?;
    let w = vector_field(v, "w")?;

    let sampler: Box<dyn MeasureSampler> = match sampler_name {
        "plane" => Box::new(LebesgueFrameSampler::axis_aligned(n, gamma as usize)?),
        "cantor" => {
            let basis: Vec<Vector> = (0..d).map(|i| Vector::basis(n, i)).collect();
            Box::new(CantorProductSampler::new(
                orthonormal_frame(&basis, None, DEFAULT_TOL)?,
                gamma,
            )?)
        }
        "ball" => {
            let basis: Vec<Vector> = (0..n).map(|i| Vector::basis(n, i)).collect();
            Box::new(LebesgueFrameSampler::bounded_ball(
                orthonormal_frame(&basis, None, DEFAULT_TOL)?,
                1.0,
            )?)
        }
        other => return Err(CliError::usage(format!("unknown sampler {other:?}"))),
    };
    let cfg = ConcentrationConfig {
        d,
        n,
        epsilon: eps,
        c,
        s_points: s,
        w,
        radii: vec![radius],
        samples_per_ball: 20_000,
        seed: hdsine::stream::derive_seed(hdsine::stream::derive_seed(seed, 0xC2), config),
        one_term,
    };
    let outcome = &run_concentration(&cfg, sampler.as_ref())?[0];
    println!("replay concentration sampler={sampler_name} radius={radius}");
    println!("  fraction = {}", fmt_float(outcome.fraction));
    println!("  stderr = {}", fmt_float(outcome.stderr));
    println!("  pass = {}", outcome.pass);
    verdict(outcome.pass, None)
}

fn replay_tube(v: &Value) -> Result<(), CliError> {
    let sampler_name = as_str(v, "sampler")?;
    let gamma = as_float(v, "gamma")?;
    let m = as_u64(v, "m")? as usize;
    let seed = as_u64(v, "seed")?;
    let eps = as_float(v, "eps")?;
    let radius = as_float(v, "radius")?;
    let samples = as_u64(v, "samples")? as usize;

    let (sampler, x): (Box<dyn MeasureSampler>, Vector) = match sampler_name {
        "plane" => {
            let plane_dim = gamma as usize;
            let s = LebesgueFrameSampler::axis_aligned(plane_dim + 2, plane_dim)?;
            let x = s.frame().origin().clone();
            (Box::new(s), x)
        }
        "cantor" => {
            let d = gamma.ceil() as usize;
            let n = d + 2;
            let basis: Vec<Vector> = (0..d).map(|i| Vector::basis(n, i)).collect();
            let s = CantorProductSampler::new(orthonormal_frame(&basis, None, DEFAULT_TOL)?, gamma)?;
            let x = s.random_support_point(hdsine::stream::derive_seed(seed, 0xF0));
            (Box::new(s), x)
        }
        other => return Err(CliError::usage(format!("unknown sampler {other:?}"))),
    };
    let n = sampler.ambient_dim();
    let directions: Vec<Vector> = (0..m).map(|i| Vector::basis(n, i)).collect();
    let line = orthonormal_frame(&directions, Some(&x), DEFAULT_TOL)?;
    let rec = tube_measure_bound_check(sampler.as_ref(), &line, &x, radius, eps, samples, seed)?;
    println!("replay tube-bound sampler={sampler_name} eps={eps} radius={radius}");
    println!("  tube fraction = {}", fmt_float(rec.tube_fraction));
    println!("  empirical mass = {}", fmt_float(rec.empirical));
    println!("  bound = {}", fmt_float(rec.bound));
    println!("  holds = {}", rec.holds);
    verdict(rec.holds, None)
}

pub fn run(file: &Path) -> Result<(), CliError> {
    let raw = std::fs::read_to_string(file)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", file.display())))?;
    let value: Value = serde_json::from_str(&raw)
        .map_err(|e| CliError::usage(format!("malformed instance file: {e}")))?;
    match as_str(&value, "command")? {
        "semimetric" => replay_semimetric(&value),
        "identities" => replay_identities(&value),
        "funceq" => replay_funceq(&value),
        "concentration" => replay_concentration(&value),
        "tube-bound" => replay_tube(&value),
        other => Err(CliError::usage(format!(
            "instance file has unknown command {other:?}"
        ))),
    }
}
