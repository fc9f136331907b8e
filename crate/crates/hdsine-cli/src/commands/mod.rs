pub mod concentration;
pub mod funceq;
pub mod identities;
pub mod replay;
pub mod semimetric;
pub mod tube;

use crate::CliError;

/// Comma-separated list of positive floats.
pub fn parse_float_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let values: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match values {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!("cannot parse {what} list {s:?}"))),
    }
}

/// `lo:hi:count` log-spaced radii.
pub fn parse_log_radii(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "radii-decades must be lo:hi:count, got {s:?}"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad lower radius {:?}", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad upper radius {:?}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad radius count {:?}", parts[2])))?;
    if !(lo > 0.0 && hi > lo && count >= 2) {
        return Err(CliError::Usage(
            "radii-decades needs 0 < lo < hi and count >= 2".into(),
        ));
    }
    Ok((0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count as f64 - 1.0)))
        .collect())
}
