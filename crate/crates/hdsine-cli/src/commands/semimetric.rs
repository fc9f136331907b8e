use crate::output::{json_vector, json_vectors, write_violation, Field, Table};
use crate::{CliError, OutputOpts};
use hdsine::semimetric::{semimetric_trial_records, trial_inputs, SineKind};
use serde_json::json;

pub fn run(
    kind: &str,
    d: usize,
    n: usize,
    trials: u64,
    seed: u64,
    output: &OutputOpts,
) -> Result<(), CliError> {
    let kind = SineKind::parse(kind)?;
    let format = output.format().map_err(CliError::Usage)?;
    let records = semimetric_trial_records(kind, d, n, trials, seed)?;

    let mut table = Table::new(vec![
        "command", "kind", "d", "n", "seed", "index", "lhs", "slack", "holds", "symmetric",
    ]);
    let mut failures = 0u64;
    let mut symmetry_failures = 0u64;
    let mut min_slack = f64::INFINITY;
    let mut first_bad: Option<u64> = None;
    for rec in &records {
        if !rec.holds {
            failures += 1;
            first_bad.get_or_insert(rec.index);
        }
        if !rec.symmetric {
            symmetry_failures += 1;
            first_bad.get_or_insert(rec.index);
        }
        min_slack = min_slack.min(rec.slack);
        table.push(vec![
            Field::Str("semimetric".into()),
            Field::Str(kind.name().into()),
            Field::Int(d as i64),
            Field::Int(n as i64),
            Field::Int(seed as i64),
            Field::Int(rec.index as i64),
            Field::Float(rec.lhs),
            Field::Float(rec.slack),
            Field::Bool(rec.holds),
            Field::Bool(rec.symmetric),
        ]);
    }
    table.write(format, output.out.as_deref())?;
    eprintln!(
        "semimetric kind={} d={d} n={n} trials={trials} seed={seed} \
         failures={failures} symmetry_failures={symmetry_failures} min_slack={min_slack:.3e}",
        kind.name()
    );

    if let Some(index) = first_bad {
        let inst = trial_inputs(d, n, seed, index);
        let cfg = hdsine::sines::PointConfig::new(inst.w.clone(), inst.vs.clone())?;
        let report = hdsine::semimetric::check_simplex_inequality(kind, &cfg, &inst.u)?;
        let record = json!({
            "command": "semimetric",
            "kind": kind.name(),
            "d": d,
            "n": n,
            "seed": seed,
            "index": index,
            "w": json_vector(&inst.w),
            "vs": json_vectors(&inst.vs),
            "u": json_vector(&inst.u),
            "report": {
                "lhs": crate::output::fmt_float(report.lhs),
                "rhs_terms": report.rhs_terms.iter()
                    .map(|&t| crate::output::fmt_float(t)).collect::<Vec<_>>(),
                "slack": crate::output::fmt_float(report.slack),
                "holds": report.holds,
            },
        });
        let dump = output.dump_path();
        write_violation(&dump, &record)?;
        return Err(CliError::Violation(format!(
            "{failures} simplex failures, {symmetry_failures} symmetry failures; \
             instance written to {}",
            dump.display()
        )));
    }
    Ok(())
}
