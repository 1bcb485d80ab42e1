use std::path::Path;

use vedkit_homotopy::edlagrange::{diag_family_metric, random_metric, MetricSpec};

use crate::error::CliError;

/// Parsed `--metric` argument, before any randomness is resolved.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricArg {
    Bw,
    Random,
    Diag([f64; 6]),
    File(Box<MetricSpec>),
}

impl MetricArg {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        match s {
            "bw" => return Ok(MetricArg::Bw),
            "random" => return Ok(MetricArg::Random),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("diag:") {
            let values = rest
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("bad diag weight: {e}")))?;
            let a: [f64; 6] = values
                .try_into()
                .map_err(|v: Vec<f64>| CliError::Usage(format!("diag needs 6 weights, got {}", v.len())))?;
            // validate now so usage errors surface before any work starts
            diag_family_metric(a).map_err(|e| CliError::Usage(e.to_string()))?;
            return Ok(MetricArg::Diag(a));
        }
        if let Some(path) = s.strip_prefix("file:") {
            return load_metric_file(Path::new(path)).map(|m| MetricArg::File(Box::new(m)));
        }
        Err(CliError::Usage(format!("unknown metric {s:?}; expected bw, random, diag:a1,...,a6 or file:<path>")))
    }

    /// The concrete metric; `seed` is used only by `random`.
    pub fn resolve(&self, seed: u64) -> Result<MetricSpec, CliError> {
        match self {
            MetricArg::Bw => Ok(MetricSpec::bombieri_weyl()),
            MetricArg::Random => random_metric(seed).map_err(|e| CliError::Verification(e.to_string())),
            MetricArg::Diag(a) => diag_family_metric(*a).map_err(|e| CliError::Usage(e.to_string())),
            MetricArg::File(spec) => Ok((**spec).clone()),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, MetricArg::Random)
    }

    /// Canonical text used in cache keys; file metrics are keyed by content.
    pub fn canonical(&self) -> serde_json::Value {
        match self {
            MetricArg::Bw => "bw".into(),
            MetricArg::Random => "random".into(),
            MetricArg::Diag(a) => serde_json::json!({ "diag": a }),
            MetricArg::File(spec) => serde_json::json!({ "gram": spec.gram }),
        }
    }
}

fn load_metric_file(path: &Path) -> Result<MetricSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read metric file {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid metric file {}: {e}", path.display())))
}
