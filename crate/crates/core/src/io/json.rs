use crate::error::{FaircutError, Result};
use crate::measures::{BoxAtom, BoxMeasure, PointAtom, PointMeasure};
use num_rational::Ratio;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;
use std::io;
use std::path::Path;

/// One measure as written in an input file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureFile {
    pub dim: usize,
    pub kind: String,
    pub atoms: Vec<AtomFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomFile {
    Box {
        #[serde(rename = "box")]
        sides: Vec<[f64; 2]>,
        weight: f64,
    },
    Point {
        point: Vec<f64>,
        weight: f64,
    },
}

#[derive(Debug, Clone)]
pub enum ParsedMeasure {
    Boxes(BoxMeasure),
    Points(PointMeasure),
}

impl ParsedMeasure {
    /// Sum of the input weights before normalization (1 for point measures,
    /// whose weights are normalized exactly).
    pub fn normalization(&self) -> f64 {
        match self {
            ParsedMeasure::Boxes(m) => m.normalization(),
            ParsedMeasure::Points(_) => 1.0,
        }
    }
}

impl MeasureFile {
    pub fn into_measure(self) -> Result<ParsedMeasure> {
        match self.kind.as_str() {
            "boxes" => {
                let atoms = self
                    .atoms
                    .into_iter()
                    .map(|a| match a {
                        AtomFile::Box { sides, weight } => Ok(BoxAtom::new(
                            sides.iter().map(|s| s[0]).collect(),
                            sides.iter().map(|s| s[1]).collect(),
                            weight,
                        )),
                        AtomFile::Point { .. } => Err(FaircutError::Input("point atom in a \"boxes\" measure".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ParsedMeasure::Boxes(BoxMeasure::new(self.dim, atoms)?))
            }
            "points" => {
                let atoms = self
                    .atoms
                    .into_iter()
                    .map(|a| match a {
                        AtomFile::Point { point, weight } => {
                            let w = Ratio::<i64>::approximate_float(weight)
                                .ok_or_else(|| FaircutError::Input(format!("weight {weight} is not representable")))?;
                            Ok(PointAtom { point, weight: w })
                        }
                        AtomFile::Box { .. } => Err(FaircutError::Input("box atom in a \"points\" measure".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ParsedMeasure::Points(PointMeasure::new(self.dim, atoms)?))
            }
            other => Err(FaircutError::Input(format!("unknown measure kind {other:?}"))),
        }
    }
}

/// Input error carrying the source name, line and column.
pub fn json_error(source: &str, e: &serde_json::Error) -> FaircutError {
    FaircutError::Input(format!("{source}: line {}, column {}: {e}", e.line(), e.column()))
}

pub fn parse_json<T: DeserializeOwned>(text: &str, source: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| json_error(source, &e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| FaircutError::Input(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

/// A measure file holds one measure object or an array of them.
pub fn parse_measures(text: &str, source: &str) -> Result<Vec<ParsedMeasure>> {
    // syntax errors first, so that their position is reported
    let v: Value = parse_json(text, source)?;
    let items = match v {
        Value::Array(items) => items,
        one => vec![one],
    };
    let files = items
        .into_iter()
        .enumerate()
        .map(|(i, m)| serde_json::from_value::<MeasureFile>(m).map_err(|e| FaircutError::Input(format!("{source}: measure {}: {e}", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    if files.is_empty() {
        return Err(FaircutError::Input(format!("{source}: no measures")));
    }
    files.into_iter().map(MeasureFile::into_measure).collect()
}

/// Box measures only; point measures are rejected.
pub fn read_box_measures(path: &Path) -> Result<Vec<BoxMeasure>> {
    let text = std::fs::read_to_string(path).map_err(|e| FaircutError::Input(format!("{}: {e}", path.display())))?;
    parse_measures(&text, &path.display().to_string())?
        .into_iter()
        .map(|m| match m {
            ParsedMeasure::Boxes(b) => Ok(b),
            ParsedMeasure::Points(_) => Err(FaircutError::Input("point measures are only accepted by the oracles".into())),
        })
        .collect()
}

/// Compact JSON with every float written with 17 significant digits.
struct Digits17;

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17);
    v.serialize(&mut ser).expect("serializable value");
    String::from_utf8(out).expect("utf-8 json")
}

/// `{"status":"ok","command":..,"result":..,"residuals":..}`.
pub fn envelope<R: Serialize, S: Serialize>(command: &str, result: &R, residuals: &S) -> String {
    #[derive(Serialize)]
    struct Env<'a, R, S> {
        status: &'static str,
        command: &'a str,
        result: &'a R,
        residuals: &'a S,
    }
    to_json(&Env { status: "ok", command, result, residuals })
}

/// Diagnostic document for a failed run.
pub fn error_envelope(command: &str, e: &FaircutError) -> String {
    let kind = match e {
        FaircutError::NoZeroFound { .. } => "no_zero_found",
        FaircutError::CertificateFailed { .. } => "certificate_failed",
        FaircutError::NonConvergence { .. } => "non_convergence",
        FaircutError::Precision { .. } => "precision",
        FaircutError::Inadmissible(_) => "inadmissible",
        FaircutError::Input(_) => "input",
        FaircutError::Dimension { .. } => "dimension",
        FaircutError::UnsupportedDimension(_) => "unsupported_dimension",
        FaircutError::Unsupported(_) | FaircutError::UnsupportedShape(_) => "unsupported",
        FaircutError::InstanceTooLarge(_) => "instance_too_large",
        FaircutError::BudgetExceeded(_) => "budget_exceeded",
        FaircutError::OnBoundary => "on_boundary",
        FaircutError::Quantile(_) => "quantile",
        FaircutError::Contract(_) => "contract",
    };
    let mut detail = serde_json::Map::new();
    match e {
        FaircutError::NoZeroFound { best_residual, per_labelling } => {
            detail.insert("best_residual".into(), finite_or_null(*best_residual));
            detail.insert("per_labelling".into(), Value::Array(per_labelling.iter().map(|v| finite_or_null(*v)).collect()));
        }
        FaircutError::CertificateFailed { delta, slack, .. } => {
            detail.insert("delta".into(), finite_or_null(*delta));
            detail.insert("slack".into(), finite_or_null(*slack));
        }
        FaircutError::NonConvergence { residual } => {
            detail.insert("residual".into(), finite_or_null(*residual));
        }
        FaircutError::Precision { achieved } => {
            detail.insert("achieved".into(), finite_or_null(*achieved));
        }
        _ => {}
    }
    #[derive(Serialize)]
    struct Env<'a> {
        status: &'static str,
        command: &'a str,
        error: &'a str,
        message: String,
        detail: serde_json::Map<String, Value>,
    }
    to_json(&Env { status: "error", command, error: kind, message: e.to_string(), detail })
}

fn finite_or_null(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}
