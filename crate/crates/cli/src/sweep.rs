use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use xducer::params::{lookup_field, set_field, FieldKind};

use crate::commands::{inputs_from_value, read_json, write_output};
use crate::error::CliError;
use crate::observables::{observe, Observable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: String,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub range: Option<Range>,
    /// Unit tag attached to every value; bare config units when absent.
    #[serde(default)]
    pub unit: Option<String>,
    pub outputs: Vec<Observable>,
}

impl SweepSpec {
    pub fn points(&self) -> Result<Vec<f64>, String> {
        match (&self.values, &self.range) {
            (Some(v), None) => {
                if v.is_empty() {
                    return Err("`values` is empty".into());
                }
                Ok(v.clone())
            }
            (None, Some(r)) => {
                if r.count < 2 {
                    return Err(format!("range count must be at least 2, got {}", r.count));
                }
                if !(r.from.is_finite() && r.to.is_finite()) {
                    return Err("range endpoints must be finite".into());
                }
                let n = r.count - 1;
                Ok(match r.scale {
                    Scale::Linear => (0..r.count)
                        .map(|i| match i {
                            0 => r.from,
                            _ if i == n => r.to,
                            _ => r.from + (r.to - r.from) * i as f64 / n as f64,
                        })
                        .collect(),
                    Scale::Log => {
                        if !(r.from > 0.0 && r.to > 0.0) {
                            return Err("log scale needs positive endpoints".into());
                        }
                        xducer::reduction::geometric_points(r.from, r.to, r.count)
                    }
                })
            }
            _ => Err("give exactly one of `values` and `range`".into()),
        }
    }
}

struct Row {
    value: f64,
    outputs: Option<Vec<f64>>,
    error: Option<String>,
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn evaluate(doc: &Value, spec: &SweepSpec, value: f64) -> Row {
    let mut doc = doc.clone();
    let v = match &spec.unit {
        Some(u) => json!({ "value": value, "unit": u }),
        None => json!(value),
    };
    let result = set_field(&mut doc, &spec.parameter, v)
        .map_err(|e| e.to_string())
        .and_then(|_| inputs_from_value(&doc))
        .and_then(|inputs| observe(&inputs));
    match result {
        Ok(obs) => Row {
            value,
            outputs: Some(spec.outputs.iter().map(|&o| obs.get(o)).collect()),
            error: None,
        },
        Err(e) => Row {
            value,
            outputs: None,
            error: Some(e),
        },
    }
}

pub fn run(config: &Path, spec_path: &Path, out: Option<&Path>, jobs: Option<usize>) -> Result<ExitCode, CliError> {
    let doc = read_json(config)?;
    inputs_from_value(&doc).map_err(|e| CliError::Usage(format!("{}: {e}", config.display())))?;
    let spec: SweepSpec = serde_json::from_value(read_json(spec_path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", spec_path.display())))?;
    match lookup_field(&spec.parameter) {
        Some(f) if !matches!(f.kind, FieldKind::Object(_) | FieldKind::Text) => {}
        _ => return Err(CliError::Usage(format!("unknown sweep parameter `{}`", spec.parameter))),
    }
    if spec.outputs.is_empty() {
        return Err(CliError::Usage("`outputs` is empty".into()));
    }
    let values = spec.points().map_err(CliError::Usage)?;
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let rows: Vec<Row> = pool.install(|| values.par_iter().map(|&v| evaluate(&doc, &spec, v)).collect());

    let mut csv = String::from("value");
    for o in &spec.outputs {
        csv.push(',');
        csv.push_str(o.name());
    }
    csv.push_str(",error\n");
    for r in &rows {
        write!(csv, "{:.16e}", r.value).unwrap();
        match &r.outputs {
            Some(vals) => vals.iter().for_each(|v| write!(csv, ",{v:.16e}").unwrap()),
            None => spec.outputs.iter().for_each(|_| csv.push(',')),
        }
        csv.push(',');
        csv.push_str(&r.error.as_deref().map(csv_field).unwrap_or_default());
        csv.push('\n');
    }
    write_output(out, csv.as_bytes())?;
    if rows.iter().any(|r| r.error.is_none()) {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Numeric("every sweep point failed".into()))
    }
}
