use crate::output::{json_vector, json_vectors, write_violation, Field, Table};
use crate::{CliError, OutputOpts};
use hdsine::exec::map_indexed;
use hdsine::identities::{
    build_context, det_affine_split, hyper_identity_residual, p_coefficients,
    polar_identity_residual, psin_uniform_residual, q_coefficients, sample_context_inputs,
    BetaChoice,
};
use hdsine::linalg::content;
use hdsine::sines::{hypersine, polar_sine, PointConfig};
use serde_json::json;

const IDENTITY_TOL: f64 = 1e-9;
const CROSS_ROUTE_TOL: f64 = 1e-8;

struct ContextRow {
    det_residual: f64,
    polar_residual: f64,
    uniform_residual: f64,
    hyper_residual: f64,
    coeff_gap: f64,
    q_min: f64,
    holds: bool,
}

fn evaluate(d: usize, seed: u64, index: u64, choice: BetaChoice) -> ContextRow {
    let (vs, u, betas) = sample_context_inputs(d, seed, index, choice);
    let ctx = build_context(&vs, &u, &betas).expect("sampled contexts are valid");

    let det_lhs = content(&ctx.scaled_vectors()).unwrap().value.abs();
    let det_residual = det_affine_split(&ctx) / det_lhs.max(1.0);

    let psin_lhs = polar_sine(&PointConfig::at_origin(vs.clone()).unwrap()).value.abs();
    let polar_residual = polar_identity_residual(&ctx).unwrap() / psin_lhs.max(1.0);
    let uniform_residual =
        psin_uniform_residual(&vs, &u).unwrap().0 / psin_lhs.max(1.0);

    let gsin_lhs = hypersine(&PointConfig::at_origin(vs).unwrap()).value.abs();
    let hyper_residual = hyper_identity_residual(&ctx).unwrap() / gsin_lhs.max(1.0);

    let p = p_coefficients(&ctx);
    let q = q_coefficients(&ctx).unwrap();
    let mut coeff_gap = 0.0f64;
    let mut q_min = f64::INFINITY;
    for i in 0..=d {
        coeff_gap = coeff_gap
            .max((p.norm_ratio[i] - p.sine_ratio[i]).abs() / p.norm_ratio[i].max(1.0));
        coeff_gap = coeff_gap
            .max((q.content_ratio[i] - q.distance_ratio[i]).abs() / q.content_ratio[i].max(1.0));
        coeff_gap = coeff_gap
            .max((q.content_ratio[i] - q.sine_ratio[i]).abs() / q.content_ratio[i].max(1.0));
        q_min = q_min.min(q.content_ratio[i]);
    }
    let holds = det_residual <= IDENTITY_TOL
        && polar_residual <= IDENTITY_TOL
        && uniform_residual <= IDENTITY_TOL
        && hyper_residual <= IDENTITY_TOL
        && coeff_gap <= CROSS_ROUTE_TOL
        && q_min > 0.0;
    ContextRow {
        det_residual,
        polar_residual,
        uniform_residual,
        hyper_residual,
        coeff_gap,
        q_min,
        holds,
    }
}

pub fn run(
    d: usize,
    contexts: u64,
    seed: u64,
    beta: &str,
    output: &OutputOpts,
) -> Result<(), CliError> {
    if d < 1 {
        return Err(CliError::usage("d must be at least 1"));
    }
    if contexts == 0 {
        return Err(CliError::usage("need at least one context"));
    }
    let choice = match beta {
        "random" => BetaChoice::Random,
        "uniform" => BetaChoice::InverseNorm,
        "faces" => BetaChoice::FaceContent,
        other => {
            return Err(CliError::usage(format!(
                "unknown beta choice {other:?} (expected random, uniform, or faces)"
            )))
        }
    };
    let format = output.format().map_err(CliError::Usage)?;

    let rows = map_indexed(contexts as usize, |i| evaluate(d, seed, i as u64, choice));

    let mut table = Table::new(vec![
        "command",
        "d",
        "seed",
        "index",
        "det_residual",
        "polar_residual",
        "uniform_residual",
        "hyper_residual",
        "coeff_gap",
        "q_min",
        "holds",
    ]);
    let mut worst = 0.0f64;
    let mut first_bad: Option<u64> = None;
    for (i, row) in rows.iter().enumerate() {
        if !row.holds {
            first_bad.get_or_insert(i as u64);
        }
        worst = worst
            .max(row.det_residual)
            .max(row.polar_residual)
            .max(row.uniform_residual)
            .max(row.hyper_residual);
        table.push(vec![
            Field::Str("identities".into()),
            Field::Int(d as i64),
            Field::Int(seed as i64),
            Field::Int(i as i64),
            Field::Float(row.det_residual),
            Field::Float(row.polar_residual),
            Field::Float(row.uniform_residual),
            Field::Float(row.hyper_residual),
            Field::Float(row.coeff_gap),
            Field::Float(row.q_min),
            Field::Bool(row.holds),
        ]);
    }
    table.write(format, output.out.as_deref())?;
    let failures = rows.iter().filter(|r| !r.holds).count();
    eprintln!(
        "identities d={d} contexts={contexts} seed={seed} beta={beta} \
         failures={failures} worst_residual={worst:.3e}"
    );

    if let Some(index) = first_bad {
        let (vs, u, betas) = sample_context_inputs(d, seed, index, choice);
        let record = json!({
            "command": "identities",
            "d": d,
            "seed": seed,
            "index": index,
            "beta": beta,
            "vs": json_vectors(&vs),
            "u": json_vector(&u),
            "betas": betas.iter().map(|&b| crate::output::fmt_float(b)).collect::<Vec<_>>(),
        });
        let dump = output.dump_path();
        write_violation(&dump, &record)?;
        return Err(CliError::Violation(format!(
            "{failures} failing contexts; instance written to {}",
            dump.display()
        )));
    }
    Ok(())
}
