pub mod cli;
pub mod coeff;
pub mod genfun;
pub mod grading;
pub mod hall;
pub mod lab;
pub mod model;
pub mod series;
