use crate::commands::{parse_float_list, parse_log_radii};
use crate::output::{json_vector, json_vectors, write_violation, Field, Table};
use crate::{CliError, OutputOpts};
use hdsine::concentration::{c0_one_term, c0_prime, run_concentration, ConcentrationConfig};
use hdsine::linalg::{orthonormal_frame, Vector, DEFAULT_TOL};
use hdsine::samplers::{CantorProductSampler, LebesgueFrameSampler, MeasureSampler};
use hdsine::stream::{derive_seed, gaussian_vector, trial_rng};
use serde_json::json;

pub struct Params {
    pub gamma: f64,
    pub d: usize,
    pub eps: f64,
    pub samples: usize,
    pub radii: Option<String>,
    pub radii_decades: Option<String>,
    pub configs: u64,
    pub seed: u64,
    pub sampler: String,
    pub c_override: Option<f64>,
    pub n: Option<usize>,
    pub output: OutputOpts,
}

enum SamplerChoice {
    Plane,
    Cantor,
    Ball,
}

fn choose_sampler(name: &str, gamma: f64, d: usize) -> Result<SamplerChoice, CliError> {
    match name {
        "plane" => Ok(SamplerChoice::Plane),
        "cantor" => Ok(SamplerChoice::Cantor),
        "ball" => Ok(SamplerChoice::Ball),
        "auto" => {
            if gamma > d as f64 {
                Ok(SamplerChoice::Ball)
            } else if (gamma - d as f64).abs() < 1e-12 {
                Ok(SamplerChoice::Plane)
            } else if gamma > d as f64 - 1.0 {
                Ok(SamplerChoice::Cantor)
            } else {
                Err(CliError::usage(format!(
                    "gamma = {gamma} is below d−1 = {}; no sampler matches",
                    d - 1
                )))
            }
        }
        other => Err(CliError::usage(format!(
            "unknown sampler {other:?} (expected auto, plane, cantor, or ball)"
        ))),
    }
}

pub fn run(p: Params) -> Result<(), CliError> {
    let format = p.output.format().map_err(CliError::Usage)?;
    if p.d < 2 {
        return Err(CliError::usage("concentration runs need d >= 2"));
    }
    let radii = match (&p.radii, &p.radii_decades) {
        (Some(_), Some(_)) => {
            return Err(CliError::usage(
                "give either --radii or --radii-decades, not both",
            ))
        }
        (Some(list), None) => parse_float_list(list, "radii")?,
        (None, Some(spec)) => parse_log_radii(spec)?,
        (None, None) => parse_log_radii("0.01:1:7")?,
    };

    let choice = choose_sampler(&p.sampler, p.gamma, p.d)?;
    let (sampler, sampler_name, one_term, n): (Box<dyn MeasureSampler>, &str, bool, usize) =
        match choice {
            SamplerChoice::Plane => {
                let m = p.gamma as usize;
                if (p.gamma - m as f64).abs() > 1e-12 {
                    return Err(CliError::usage(
                        "the plane sampler needs an integer gamma (its plane dimension)",
                    ));
                }
                let n = p.n.unwrap_or(p.d + 2);
                if n < m || n < p.d + 1 {
                    return Err(CliError::usage("ambient dimension too small"));
                }
                (
                    Box::new(LebesgueFrameSampler::axis_aligned(n, m)?),
                    "plane",
                    false,
                    n,
                )
            }
            SamplerChoice::Cantor => {
                let n = p.n.unwrap_or(p.d + 2);
                if n < p.d + 1 {
                    return Err(CliError::usage("ambient dimension too small"));
                }
                let basis: Vec<Vector> = (0..p.d).map(|i| Vector::basis(n, i)).collect();
                let frame = orthonormal_frame(&basis, None, DEFAULT_TOL)?;
                (
                    Box::new(CantorProductSampler::new(frame, p.gamma)?),
                    "cantor",
                    false,
                    n,
                )
            }
            SamplerChoice::Ball => {
                let m = p.gamma as usize;
                if (p.gamma - m as f64).abs() > 1e-12 {
                    return Err(CliError::usage(
                        "the ball sampler needs an integer gamma (its dimension)",
                    ));
                }
                let n = p.n.unwrap_or(m);
                if n != m || n < p.d + 1 {
                    return Err(CliError::usage(
                        "the ball sampler is full-dimensional: n must equal gamma >= d+1",
                    ));
                }
                let basis: Vec<Vector> = (0..n).map(|i| Vector::basis(n, i)).collect();
                let frame = orthonormal_frame(&basis, None, DEFAULT_TOL)?;
                (
                    Box::new(LebesgueFrameSampler::bounded_ball(frame, 1.0)?),
                    "ball",
                    true,
                    n,
                )
            }
        };

    let c_mu = sampler.regularity_constant();
    let c = match p.c_override {
        Some(c) => c,
        None => {
            if one_term {
                c0_one_term(p.eps, p.gamma, p.d, c_mu)?
            } else {
                c0_prime(p.eps, p.gamma, p.d, c_mu)?
            }
        }
    };

    let mut table = Table::new(vec![
        "command", "sampler", "gamma", "d", "n", "eps", "c", "one_term", "seed", "config",
        "radius", "fraction", "stderr", "pass",
    ]);
    let mut failures = 0u64;
    let mut min_fraction = 1.0f64;
    let mut first_bad: Option<(u64, f64, Vec<Vector>, Vector)> = None;
    for config in 0..p.configs {
        let mut rng = trial_rng(derive_seed(p.seed, 0xC0), config);
        let s: Vec<Vector> = (0..=p.d).map(|_| gaussian_vector(&mut rng, n)).collect();
        let w = sampler.random_support_point(derive_seed(derive_seed(p.seed, 0xC1), config));
        let cfg = ConcentrationConfig {
            d: p.d,
            n,
            epsilon: p.eps,
            c,
            s_points: s.clone(),
            w: w.clone(),
            radii: radii.clone(),
            samples_per_ball: p.samples,
            seed: derive_seed(derive_seed(p.seed, 0xC2), config),
            one_term,
        };
        for outcome in run_concentration(&cfg, sampler.as_ref())? {
            min_fraction = min_fraction.min(outcome.fraction);
            if !outcome.pass {
                failures += 1;
                if first_bad.is_none() {
                    first_bad = Some((config, outcome.radius, s.clone(), w.clone()));
                }
            }
            table.push(vec![
                Field::Str("concentration".into()),
                Field::Str(sampler_name.into()),
                Field::Float(p.gamma),
                Field::Int(p.d as i64),
                Field::Int(n as i64),
                Field::Float(p.eps),
                Field::Float(c),
                Field::Bool(one_term),
                Field::Int(p.seed as i64),
                Field::Int(config as i64),
                Field::Float(outcome.radius),
                Field::Float(outcome.fraction),
                Field::Float(outcome.stderr),
                Field::Bool(outcome.pass),
            ]);
        }
    }
    table.write(format, p.output.out.as_deref())?;
    eprintln!(
        "concentration sampler={sampler_name} gamma={} d={} eps={} C={:.6e} C_mu={:.6e} \
         configs={} radii={} samples={} failures={failures} min_fraction={min_fraction:.4}",
        p.gamma,
        p.d,
        p.eps,
        c,
        c_mu,
        p.configs,
        radii.len(),
        p.samples
    );

    if let Some((config, radius, s, w)) = first_bad {
        let record = json!({
            "command": "concentration",
            "sampler": sampler_name,
            "gamma": crate::output::fmt_float(p.gamma),
            "d": p.d,
            "n": n,
            "eps": crate::output::fmt_float(p.eps),
            "c": crate::output::fmt_float(c),
            "one_term": one_term,
            "seed": p.seed,
            "config": config,
            "radius": crate::output::fmt_float(radius),
            "s": json_vectors(&s),
            "w": json_vector(&w),
        });
        let dump = p.output.dump_path();
        write_violation(&dump, &record)?;
        return Err(CliError::Violation(format!(
            "{failures} radius checks below 1−eps−3·stderr; instance written to {}",
            dump.display()
        )));
    }
    Ok(())
}
