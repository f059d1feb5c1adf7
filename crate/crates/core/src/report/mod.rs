//! Scenario configuration, the end-to-end pipeline, parameter sweeps, and
//! JSON and SVG output.

mod analysis;
mod config;
mod homology;
mod json;
mod svg;
mod sweep;

use thiserror::Error;

use crate::ford::FordError;
use crate::group::GroupError;
use crate::moebius::MoebiusError;

pub use analysis::{
    analyze_config, run_analysis, AnalysisReport, CertificateSummary, CycleRow, EdgeRow, EnumerationSummary,
    FaceRow, OracleComparison, SphereRow, TangencyRow, TunnelRow, WitnessRow,
};
pub use config::{EnumerationConfig, ExplicitGenerator, FamilySpec, GeneratorSpec, ScenarioConfig, DEFAULT_SAFETY};
pub use homology::{parse_classes, run_homology, HomologyReport, ImageRow};
pub use json::{from_json, to_json};
pub use svg::render_svg;
pub use sweep::{log_steps, run_sweep, SweepParameter, SweepReport, SweepRow};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("generator: {0}")]
    Moebius(#[from] MoebiusError),
    #[error("lattice: {0}")]
    Group(#[from] GroupError),
    #[error("Ford domain: {0}")]
    Ford(#[from] FordError),
}
