use crate::commands::parse_float_list;
use crate::output::{write_violation, Field, Table};
use crate::{CliError, OutputOpts};
use hdsine::concentration::tube_measure_bound_check;
use hdsine::linalg::{orthonormal_frame, Vector, DEFAULT_TOL};
use hdsine::samplers::{CantorProductSampler, LebesgueFrameSampler, MeasureSampler};
use hdsine::stream::derive_seed;
use serde_json::json;

#[allow(clippy::too_many_arguments)]
pub fn run(
    sampler_name: &str,
    gamma: f64,
    m: usize,
    eps_list: &str,
    radii: &str,
    samples: usize,
    seed: u64,
    output: &OutputOpts,
) -> Result<(), CliError> {
    let format = output.format().map_err(CliError::Usage)?;
    let eps_values = parse_float_list(eps_list, "epsilon")?;
    let radii = parse_float_list(radii, "radii")?;

    // Both samplers place their support on the first coordinate axes of an
    // ambient space two dimensions larger, with the tube subspace spanned
    // by the leading in-plane axes through a support point.
    let (sampler, x): (Box<dyn MeasureSampler>, Vector) = match sampler_name {
        "plane" => {
            let plane_dim = gamma as usize;
            if (gamma - plane_dim as f64).abs() > 1e-12 || plane_dim < 1 {
                return Err(CliError::usage(
                    "the plane sampler needs a positive integer gamma",
                ));
            }
            let s = LebesgueFrameSampler::axis_aligned(plane_dim + 2, plane_dim)?;
            let x = s.frame().origin().clone();
            (Box::new(s), x)
        }
        "cantor" => {
            let d = gamma.ceil() as usize;
            if !(gamma > d as f64 - 1.0 && gamma < d as f64) {
                return Err(CliError::usage(
                    "the cantor sampler needs a fractional gamma in (d−1, d)",
                ));
            }
            let n = d + 2;
            let basis: Vec<Vector> = (0..d).map(|i| Vector::basis(n, i)).collect();
            let frame = orthonormal_frame(&basis, None, DEFAULT_TOL)?;
            let s = CantorProductSampler::new(frame, gamma)?;
            let x = s.random_support_point(derive_seed(seed, 0xF0));
            (Box::new(s), x)
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown sampler {other:?} (expected plane or cantor)"
            )))
        }
    };
    if (m as f64) >= sampler.gamma() || m < 1 {
        return Err(CliError::usage(format!(
            "tube dimension must satisfy 1 <= m < gamma = {}",
            sampler.gamma()
        )));
    }
    let n = sampler.ambient_dim();
    let directions: Vec<Vector> = (0..m).map(|i| Vector::basis(n, i)).collect();
    let line = orthonormal_frame(&directions, Some(&x), DEFAULT_TOL)?;

    let mut table = Table::new(vec![
        "command",
        "sampler",
        "gamma",
        "m",
        "seed",
        "eps",
        "radius",
        "tube_fraction",
        "empirical",
        "stderr",
        "bound",
        "holds",
    ]);
    let mut failures = 0u64;
    let mut first_bad: Option<(f64, f64)> = None;
    for (ei, &eps) in eps_values.iter().enumerate() {
        for (ri, &r) in radii.iter().enumerate() {
            let rec = tube_measure_bound_check(
                sampler.as_ref(),
                &line,
                &x,
                r,
                eps,
                samples,
                derive_seed(seed, (ei * 100 + ri) as u64),
            )?;
            if !rec.holds {
                failures += 1;
                first_bad.get_or_insert((eps, r));
            }
            table.push(vec![
                Field::Str("tube-bound".into()),
                Field::Str(sampler_name.into()),
                Field::Float(sampler.gamma()),
                Field::Int(m as i64),
                Field::Int(seed as i64),
                Field::Float(eps),
                Field::Float(r),
                Field::Float(rec.tube_fraction),
                Field::Float(rec.empirical),
                Field::Float(rec.stderr),
                Field::Float(rec.bound),
                Field::Bool(rec.holds),
            ]);
        }
    }
    table.write(format, output.out.as_deref())?;
    eprintln!(
        "tube-bound sampler={sampler_name} gamma={} m={m} cells={} samples={samples} \
         failures={failures}",
        sampler.gamma(),
        eps_values.len() * radii.len()
    );

    if let Some((eps, r)) = first_bad {
        let record = json!({
            "command": "tube-bound",
            "sampler": sampler_name,
            "gamma": crate::output::fmt_float(sampler.gamma()),
            "m": m,
            "seed": seed,
            "eps": crate::output::fmt_float(eps),
            "radius": crate::output::fmt_float(r),
            "samples": samples,
        });
        let dump = output.dump_path();
        write_violation(&dump, &record)?;
        return Err(CliError::Violation(format!(
            "{failures} grid cells exceed the tube bound; instance written to {}",
            dump.display()
        )));
    }
    Ok(())
}
