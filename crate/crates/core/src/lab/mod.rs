//! Executable verifiers for the Hall-algebra identities.
//!
//! Every verifier compares two sides degree by degree over a truncation
//! window and returns a [`VerificationReport`]. Deliberate corruptions of
//! the inputs run alongside as negative controls and must be detected.

mod report;
mod symbolic;
mod verifiers;

pub use report::{Check, Control, DegreeStatus, Status, VerificationReport, SCHEMA};
pub use symbolic::{verify_grinah, verify_integration_poisson, verify_nopole};
pub use verifiers::{
    realized_slopes, verify_dtpt, verify_duality, verify_hilbert, verify_hn, verify_stable_pair,
    verify_torsion_pair,
};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::coeff::CountSamples;
use crate::grading::{SlopeInterval, TruncationWindow};
use crate::hall::{model_window, HallError, ModelFamily};
use crate::model::{BuildOptions, Model, ModelError, ModelSpec};
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error(transparent)]
    Hall(#[from] HallError),
    #[error("the integration target of this model is not commutative")]
    NonCommutativeTarget,
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
}

impl From<ModelError> for LabError {
    fn from(e: ModelError) -> Self {
        LabError::Hall(e.into())
    }
}

impl From<SeriesError> for LabError {
    fn from(e: SeriesError) -> Self {
        LabError::Hall(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    TorsionPair,
    Hilbert,
    StablePair,
    Hn,
    Dtpt,
    Nopole,
    Grinah,
    IntegrationPoisson,
    Duality,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::TorsionPair,
        Identity::Hilbert,
        Identity::StablePair,
        Identity::Hn,
        Identity::Dtpt,
        Identity::Nopole,
        Identity::Grinah,
        Identity::IntegrationPoisson,
        Identity::Duality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::TorsionPair => "torsion-pair",
            Identity::Hilbert => "hilbert",
            Identity::StablePair => "stable-pair",
            Identity::Hn => "hn",
            Identity::Dtpt => "dtpt",
            Identity::Nopole => "nopole",
            Identity::Grinah => "grinah",
            Identity::IntegrationPoisson => "integration-poisson",
            Identity::Duality => "duality",
        }
    }

    /// Runs on interpolated tables rather than a single prime.
    pub fn is_symbolic(self) -> bool {
        matches!(
            self,
            Identity::Nopole | Identity::Grinah | Identity::IntegrationPoisson
        )
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        let t = s.replace('_', "-");
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == t)
            .ok_or_else(|| LabError::UnknownIdentity(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct LabConfig {
    pub samples: CountSamples,
    pub build: BuildOptions,
    /// Interval for `hn` and `grinah`.
    pub interval: SlopeInterval,
    pub seed: u64,
    pub timings: bool,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            samples: CountSamples::default(),
            build: BuildOptions::default(),
            interval: SlopeInterval::all(),
            seed: 0,
            timings: false,
        }
    }
}

/// Builds the model (or the family of models over the sample primes) and
/// runs one verifier. `window` defaults to every degree of the model.
pub fn run(
    identity: Identity,
    spec: &ModelSpec,
    window: Option<&TruncationWindow>,
    cfg: &LabConfig,
) -> Result<VerificationReport, LabError> {
    let start = Instant::now();
    let mut report = if identity.is_symbolic() {
        let (spec, clamped) = symbolic_spec(spec);
        let fam = ModelFamily::build(&spec, &cfg.samples, &cfg.build)?;
        let w = window.cloned().unwrap_or_else(|| model_window(fam.base()));
        let r = match identity {
            Identity::Nopole => verify_nopole(&fam, &w)?,
            Identity::Grinah => verify_grinah(&fam, &cfg.interval, &w)?,
            _ => verify_integration_poisson(&fam, &w)?,
        };
        if clamped {
            r.with_note(format!(
                "symbolic tables are interpolated through n = {SYMBOLIC_JORDAN_BOUND} only"
            ))
        } else {
            r
        }
    } else {
        let model = Model::build(spec, &cfg.build)?;
        run_on_model(identity, &model, window, cfg)?
    };
    if cfg.timings {
        report.duration_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Largest Jordan degree whose Hall numbers the default sample primes can fit.
pub const SYMBOLIC_JORDAN_BOUND: usize = 3;

pub fn symbolic_spec(spec: &ModelSpec) -> (ModelSpec, bool) {
    match spec {
        ModelSpec::Jordan { q, bound } if *bound > SYMBOLIC_JORDAN_BOUND => {
            (ModelSpec::jordan(*q, SYMBOLIC_JORDAN_BOUND), true)
        }
        _ => (spec.clone(), false),
    }
}

/// Errors meaning the model lacks a structure the identity needs, as
/// opposed to bad input.
pub fn is_capability_error(e: &LabError) -> bool {
    match e {
        LabError::NonCommutativeTarget => true,
        LabError::Hall(HallError::NonUniformClasses(_)) => true,
        LabError::Hall(HallError::Model(m)) => matches!(
            m,
            ModelError::NoFramingObject | ModelError::NoTorsionCut | ModelError::NoDuality
        ),
        _ => false,
    }
}

/// Fixed-prime verifiers on an already built model.
pub fn run_on_model(
    identity: Identity,
    model: &Model,
    window: Option<&TruncationWindow>,
    cfg: &LabConfig,
) -> Result<VerificationReport, LabError> {
    let w = window.cloned().unwrap_or_else(|| model_window(model));
    match identity {
        Identity::TorsionPair => verify_torsion_pair(model, &w),
        Identity::Hilbert => verify_hilbert(model, &w),
        Identity::StablePair => verify_stable_pair(model, &w),
        Identity::Hn => verify_hn(model, &cfg.interval, &w),
        Identity::Dtpt => verify_dtpt(model, &w),
        Identity::Duality => verify_duality(model, &w, cfg.seed),
        other => Err(LabError::UnknownIdentity(format!(
            "{other} needs interpolated tables"
        ))),
    }
}

/// Exit status of a batch: 0 when every report passes, 1 otherwise.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    i32::from(!reports.iter().all(|r| r.passed))
}
