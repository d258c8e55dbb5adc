//! Configurable check suites, their reports, and the files they write.

mod config;
mod report;
mod suites;

pub use config::{
    CountsSection, DynamicsSection, FChoice, GaugeScalarSection, ModelSection, OutputSection, RepresentationSection,
    SuiteConfig, TolerancesSection,
};
pub use report::{emit_report, Bound, CheckResult, RunReport, SuiteReport};
pub use suites::{run_suite, run_suites, SUITES};
