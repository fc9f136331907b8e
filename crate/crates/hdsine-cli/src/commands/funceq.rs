use crate::output::{write_violation, Field, Table};
use crate::{CliError, OutputOpts};
use hdsine::gensine::{functional_equation_residual, GeneralizedSine, ParamGrid};
use serde_json::json;

pub(crate) fn family_function(
    family: &str,
    c: f64,
    k: f64,
) -> Result<Box<dyn Fn(f64) -> f64 + Sync>, CliError> {
    match family {
        "sk" => {
            let f = GeneralizedSine::new(c, k);
            Ok(Box::new(move |x| f.eval(x)))
        }
        "square" => Ok(Box::new(|x| x * x)),
        "cosine" => Ok(Box::new(f64::cos)),
        "perturbed" => Ok(Box::new(|x| x + 0.01 * x * x)),
        other => Err(CliError::usage(format!(
            "unknown family {other:?} (expected sk, square, cosine, or perturbed)"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    family: &str,
    c: f64,
    k: f64,
    grid: usize,
    lo: f64,
    hi: f64,
    tol: f64,
    output: &OutputOpts,
) -> Result<(), CliError> {
    let f = family_function(family, c, k)?;
    let format = output.format().map_err(CliError::Usage)?;
    let grid = ParamGrid::new(lo, hi, grid)?;
    let values = grid.values();
    let deltas: Vec<f64> = values
        .iter()
        .copied()
        .filter(|&d| f(d).abs() > 1e-12)
        .collect();
    if deltas.is_empty() {
        return Err(CliError::usage(
            "no admissible delta values: the function vanishes on the whole grid",
        ));
    }

    let mut table = Table::new(vec![
        "command", "family", "index", "alpha", "beta", "delta", "scaled_residual", "holds",
    ]);
    let mut max_residual = 0.0f64;
    let mut first_bad: Option<(f64, f64, f64, f64)> = None;
    let mut index = 0i64;
    for &alpha in &values {
        for &beta in &values {
            let scale = f(alpha + beta).abs().max(1.0);
            for &delta in &deltas {
                let r = functional_equation_residual(&*f, alpha, beta, delta)? / scale;
                let holds = r <= tol;
                if !holds && first_bad.is_none() {
                    first_bad = Some((alpha, beta, delta, r));
                }
                max_residual = max_residual.max(r);
                table.push(vec![
                    Field::Str("funceq".into()),
                    Field::Str(family.into()),
                    Field::Int(index),
                    Field::Float(alpha),
                    Field::Float(beta),
                    Field::Float(delta),
                    Field::Float(r),
                    Field::Bool(holds),
                ]);
                index += 1;
            }
        }
    }
    table.write(format, output.out.as_deref())?;
    eprintln!(
        "funceq family={family} c={c} k={k} grid={} points={index} \
         max_scaled_residual={max_residual:.3e}",
        values.len()
    );

    if let Some((alpha, beta, delta, r)) = first_bad {
        let record = json!({
            "command": "funceq",
            "family": family,
            "c": crate::output::fmt_float(c),
            "k": crate::output::fmt_float(k),
            "alpha": crate::output::fmt_float(alpha),
            "beta": crate::output::fmt_float(beta),
            "delta": crate::output::fmt_float(delta),
            "scaled_residual": crate::output::fmt_float(r),
            "tol": crate::output::fmt_float(tol),
        });
        let dump = output.dump_path();
        write_violation(&dump, &record)?;
        return Err(CliError::Violation(format!(
            "max scaled residual {max_residual:.3e} exceeds tol {tol:.1e}; \
             instance written to {}",
            dump.display()
        )));
    }
    Ok(())
}
