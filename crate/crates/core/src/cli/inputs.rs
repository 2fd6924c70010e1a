use std::path::Path;

use num_traits::Zero;
use serde_json::Value;

use crate::coeff::{parse_rational, ExactRational};
use crate::grading::{DegreeVector, SlopeInterval, TruncationWindow};
use crate::hall::{model_window, HallAlgebra, HallElement};
use crate::model::{Model, ModelSpec};
use crate::series::GradedRing;

use super::CliError;

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn load_spec(path: &Path) -> Result<ModelSpec, CliError> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// `all`, `points:N`, `box:a,b,...`, inline JSON, or a JSON file.
pub fn parse_window(spec: &str, model: Option<&Model>) -> Result<Option<TruncationWindow>, CliError> {
    let bad = |m: String| CliError::Config(format!("window {spec:?}: {m}"));
    if spec == "all" {
        return Ok(model.map(model_window));
    }
    if let Some(n) = spec.strip_prefix("points:") {
        let n: i64 = n.trim().parse().map_err(|_| bad("expected points:N".into()))?;
        return Ok(Some(TruncationWindow::points_up_to(n)));
    }
    if let Some(b) = spec.strip_prefix("box:") {
        let top: Vec<i64> = b
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("expected box:a,b,...".into()))?;
        return Ok(Some(TruncationWindow::quiver_box(&top)));
    }
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        read_file(Path::new(spec))?
    };
    serde_json::from_str(&text).map(Some).map_err(|e| bad(e.to_string()))
}

/// Named Hall elements: `one`, `delta:LABEL`, `ss`, `ss:INTERVAL`, `p`, `q`,
/// `framed`, `framed-p`, `framed-q`, `hilbert`, `pt`, `h0`, or a JSON file in
/// the element output format.
pub fn element(alg: &HallAlgebra, w: &TruncationWindow, name: &str) -> Result<HallElement<ExactRational>, CliError> {
    let m = alg.model();
    let e = match name {
        "one" => Ok(alg.one(w)),
        "ss" => alg.semistable_element(w, &SlopeInterval::all()),
        "p" => alg.char_element(w, |c| alg.in_p(c)),
        "q" => alg.char_element(w, |c| alg.in_q(c)),
        "framed" => alg.framed_element(w, |_| Ok(true)),
        "framed-p" => alg.framed_element(w, |c| alg.in_p(c)),
        "framed-q" => alg.framed_element(w, |c| alg.in_q(c)),
        "hilbert" => alg.hilbert_element(w),
        "pt" => alg.pt_element(w),
        "h0" => alg.h_zero(w),
        _ => {
            if let Some(label) = name.strip_prefix("delta:") {
                let c = m.class_by_label(label).map_err(|e| CliError::Config(e.to_string()))?;
                return Ok(alg.delta(w, c));
            }
            if let Some(i) = name.strip_prefix("ss:") {
                let interval = SlopeInterval::parse(i).map_err(|e| CliError::Config(e.to_string()))?;
                alg.semistable_element(w, &interval)
            } else {
                return element_file(alg, w, Path::new(name));
            }
        }
    };
    e.map_err(|e| CliError::Config(e.to_string()))
}

fn element_file(alg: &HallAlgebra, w: &TruncationWindow, path: &Path) -> Result<HallElement<ExactRational>, CliError> {
    let bad = |m: String| CliError::Config(format!("{}: {m}", path.display()));
    if !path.exists() {
        return Err(CliError::Config(format!("unknown element {:?}", path.display().to_string())));
    }
    let v: Value = serde_json::from_str(&read_file(path)?).map_err(|e| bad(e.to_string()))?;
    let m = alg.model();
    let degrees = v["degrees"].as_array().ok_or_else(|| bad("missing \"degrees\" array".into()))?;
    let mut values = std::collections::HashMap::new();
    for d in degrees {
        let g: DegreeVector = serde_json::from_value(d["degree"].clone()).map_err(|e| bad(e.to_string()))?;
        for c in d["classes"].as_array().ok_or_else(|| bad(format!("degree {g}: missing \"classes\"")))? {
            let label = c["class_label"].as_str().ok_or_else(|| bad("class_label must be a string".into()))?;
            let coeff = c["coefficient"].as_str().ok_or_else(|| bad("coefficient must be a string".into()))?;
            let id = m.class_by_label(label).map_err(|e| bad(e.to_string()))?;
            if m.class(id).degree != g {
                return Err(bad(format!("class {label} does not have degree {g}")));
            }
            values.insert(id, parse_rational(coeff).map_err(|e| bad(e.to_string()))?);
        }
    }
    alg.element(w, |c| Ok(values.get(&c).cloned().unwrap_or_else(ExactRational::zero)))
        .map_err(|e| bad(e.to_string()))
}

pub fn parse_ints(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Config(format!("expected comma-separated integers, got {s:?}")))
}

pub fn parse_rationals(s: &str) -> Result<Vec<ExactRational>, CliError> {
    s.split(',')
        .map(|x| parse_rational(x.trim()).map_err(|e| CliError::Config(e.to_string())))
        .collect()
}
