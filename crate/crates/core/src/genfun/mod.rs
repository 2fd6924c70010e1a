//! Generating functions in one variable `q`: the MacMahon function, reduced
//! DT series, closed forms of periodic coefficient sums and the extraction
//! of the Laurent polynomials `L_beta` from PT series.
//!
//! Stored series are always in `q`; the sign change `q -> -q` only happens
//! through the explicit `subst_neg` operations.

mod dt;
mod laurent;
mod rational;
mod toda;

pub use dt::{dt_from_pt, dt_zero, macmahon, reduce_dt, series_csv, DTSeries};
pub use laurent::{LaurentPoly, TruncSeries, EXACT};
pub use rational::{rational_from_periodic, symmetry_check, PeriodicRational, RatFunQ};
pub use toda::{n_table_from_json, toda_assemble, toda_json, toda_synthesize, validate_n_table, TodaColumn};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenfunError {
    #[error("constant term is not a unit")]
    NonUnitConstantTerm,
    #[error("N-table symmetry violated: {0}")]
    SymmetryViolation(String),
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
