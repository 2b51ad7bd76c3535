//! Parsing of inline field and phase specifications.

use std::path::Path;

use bolab_core::multiphase::{fourier, FourierField, GridField, PhaseParams};

use crate::CliError;

pub fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Input(format!("not a number: {s:?}")))
        })
        .collect()
}

/// `s1,...,s2n+1;chi1,...,chin` with ascending `s`. Missing phases default to 0.
pub fn parse_phase(text: &str, eps: f64) -> Result<PhaseParams, CliError> {
    let text = text.strip_prefix("phase:").unwrap_or(text);
    let (s, chi) = match text.split_once(';') {
        Some((s, chi)) => (parse_list(s)?, parse_list(chi)?),
        None => (parse_list(text)?, Vec::new()),
    };
    let n = s.len().saturating_sub(1) / 2;
    let chi = if chi.is_empty() { vec![0.0; n] } else { chi };
    Ok(PhaseParams::new(s, chi, eps)?)
}

/// `const:a`, `cos:a,delta,k`, `phase:...` (sampled on `samples` points) or a CSV file of `x,v` rows.
pub fn parse_field(text: &str, eps: f64, samples: usize) -> Result<FourierField, CliError> {
    if let Some(rest) = text.strip_prefix("const:") {
        let v = parse_list(rest)?;
        return match v.as_slice() {
            [a] => Ok(FourierField::constant(*a)),
            _ => Err(CliError::Input(format!("const field needs one value: {text:?}"))),
        };
    }
    if let Some(rest) = text.strip_prefix("cos:") {
        let v = parse_list(rest)?;
        return match v.as_slice() {
            [a, delta, k] if *k >= 1.0 && k.fract() == 0.0 => Ok(FourierField::cosine(*a, *delta, *k as usize)),
            _ => Err(CliError::Input(format!("cos field needs a,delta,k with integer k >= 1: {text:?}"))),
        };
    }
    if text.starts_with("phase:") {
        let p = parse_phase(text, eps)?;
        return Ok(fourier(&GridField::sample(&p, samples, 0.0)?));
    }
    let path = Path::new(text);
    if path.exists() {
        let body = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{text}: {e}")))?;
        return Ok(fourier(&GridField::from_csv(&body)?));
    }
    Err(CliError::Input(format!(
        "unrecognized field {text:?}; expected const:, cos:, phase: or a CSV file"
    )))
}
