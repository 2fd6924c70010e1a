use serde::Serialize;
use serde_json::{json, Value};

use crate::coeff::Scalar;
use crate::grading::{DegreeVector, TruncationWindow};
use crate::hall::HallElement;
use crate::model::Model;
use crate::series::GradedSeries;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeStatus {
    pub degree: DegreeVector,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Value>,
}

/// One relation checked on every degree of the window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub relation: String,
    pub degrees: Vec<DegreeStatus>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.status == Status::Pass)
    }

    /// First failing degree.
    pub fn witness(&self) -> Option<&DegreeVector> {
        self.degrees
            .iter()
            .find(|d| d.status == Status::Fail)
            .map(|d| &d.degree)
    }

    /// Compares two Hall elements class by class on every degree of `w`.
    pub fn hall<S: Scalar>(
        relation: &str,
        model: &Model,
        w: &TruncationWindow,
        lhs: &HallElement<S>,
        rhs: &HallElement<S>,
    ) -> Check {
        Self::compare(relation, w, lhs, rhs, |s, g| classes_json(model, s, g))
    }

    /// Compares two scalar series on every degree of `w`.
    pub fn series<S: Scalar>(
        relation: &str,
        w: &TruncationWindow,
        lhs: &GradedSeries<S>,
        rhs: &GradedSeries<S>,
    ) -> Check {
        Self::compare(relation, w, lhs, rhs, |s, g| {
            match s.terms.get(g) {
                Some(p) => json!(p[0].to_string()),
                None => json!("0"),
            }
        })
    }

    fn compare<S: Scalar>(
        relation: &str,
        w: &TruncationWindow,
        lhs: &GradedSeries<S>,
        rhs: &GradedSeries<S>,
        show: impl Fn(&GradedSeries<S>, &DegreeVector) -> Value,
    ) -> Check {
        let degrees = w
            .degrees()
            .into_iter()
            .map(|g| {
                let exact = lhs.window.contains(&g) && rhs.window.contains(&g);
                if exact && same_piece(lhs.terms.get(&g), rhs.terms.get(&g)) {
                    DegreeStatus::pass(g)
                } else {
                    let side = |s: &GradedSeries<S>| {
                        if s.window.contains(&g) {
                            show(s, &g)
                        } else {
                            json!("outside the exact window")
                        }
                    };
                    DegreeStatus::fail(g.clone(), side(lhs), side(rhs))
                }
            })
            .collect();
        Check {
            relation: relation.to_string(),
            degrees,
        }
    }
}

impl DegreeStatus {
    pub fn pass(degree: DegreeVector) -> Self {
        DegreeStatus {
            degree,
            status: Status::Pass,
            lhs: None,
            rhs: None,
        }
    }

    pub fn fail(degree: DegreeVector, lhs: Value, rhs: Value) -> Self {
        DegreeStatus {
            degree,
            status: Status::Fail,
            lhs: Some(lhs),
            rhs: Some(rhs),
        }
    }
}

fn same_piece<S: Scalar>(a: Option<&Vec<S>>, b: Option<&Vec<S>>) -> bool {
    let z = S::zero();
    let (a, b) = (a.map_or(&[][..], |v| v), b.map_or(&[][..], |v| v));
    (0..a.len().max(b.len())).all(|i| a.get(i).unwrap_or(&z) == b.get(i).unwrap_or(&z))
}

pub(crate) fn classes_json<S: Scalar>(model: &Model, f: &HallElement<S>, g: &DegreeVector) -> Value {
    let Some(piece) = f.terms.get(g) else {
        return json!([]);
    };
    let ids = model.class_ids(g).unwrap_or(&[]);
    let mut rows: Vec<(String, String)> = piece
        .iter()
        .zip(ids)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, &c)| (model.class(c).label.clone(), x.to_string()))
        .collect();
    rows.sort();
    json!(rows
        .into_iter()
        .map(|(l, c)| json!({"class_label": l, "coefficient": c}))
        .collect::<Vec<_>>())
}

/// A deliberate corruption of one input; it must change the outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Control {
    pub name: String,
    /// False when the corruption cannot show up inside the window.
    pub applicable: bool,
    pub detected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DegreeVector>,
}

impl Control {
    pub fn new(name: &str, applicable: bool, witness: Option<DegreeVector>) -> Self {
        Control {
            name: name.to_string(),
            applicable,
            detected: witness.is_some(),
            witness,
        }
    }

    pub fn ok(&self) -> bool {
        !self.applicable || self.detected
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub identity: String,
    pub model_fingerprint: String,
    pub primes: Vec<u64>,
    pub window: TruncationWindow,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub controls: Vec<Control>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(
        identity: &str,
        fingerprint: String,
        primes: Vec<u64>,
        window: TruncationWindow,
        checks: Vec<Check>,
        controls: Vec<Control>,
    ) -> Self {
        let passed = checks.iter().all(Check::passed) && controls.iter().all(Control::ok);
        VerificationReport {
            schema: SCHEMA,
            identity: identity.to_string(),
            model_fingerprint: fingerprint,
            primes,
            window,
            passed,
            checks,
            controls,
            notes: Vec::new(),
            duration_ms: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// First failing degree over all checks.
    pub fn witness(&self) -> Option<(&str, &DegreeVector)> {
        self.checks
            .iter()
            .find_map(|c| c.witness().map(|g| (c.relation.as_str(), g)))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line: `identity: pass` or `identity: FAIL at <degree> (<relation>)`.
    pub fn summary(&self) -> String {
        if self.passed {
            return format!("{}: pass", self.identity);
        }
        match self.witness() {
            Some((rel, g)) => format!("{}: FAIL at {g} ({rel})", self.identity),
            None => format!("{}: FAIL (negative control not detected)", self.identity),
        }
    }
}
