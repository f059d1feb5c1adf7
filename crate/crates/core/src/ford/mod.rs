//! Visibility of isometric spheres over a vertical fundamental domain, the
//! visible edges between them, and certification of the resulting Ford
//! domain.

mod arrangement;
mod certify;
mod edges;
mod visibility;

use thiserror::Error;

use crate::group::{enumerate, EnumerationLimits, VerticalDomain, DEFAULT_MAX_WORD_LEN};
use crate::moebius::{MoebiusMap, GEOMETRIC_TOLERANCE};

pub use certify::{
    certify, indiscreteness_test, EdgeCycle, FordCertificate, IndiscretenessWitness, MinimalParabolicity,
    SpineFace, Verdict, ANGLE_TOLERANCE,
};
pub use edges::{dihedral_angle, tangency_report, visible_edges, SupportingPlane, Tangency, TangencyKind, VisibleEdge};
pub use visibility::{
    classify_visibility, envelope_height, visibility_oracle, visible_cosets, VisibilityStatus, VisibilityVerdict,
    EXPOSED_FRACTION_THRESHOLD,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FordError {
    #[error("visible face {face} has no inverse {inverse} among the candidates; the word-length cutoff is too small")]
    MalformedInput { face: String, inverse: String },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FordSettings {
    pub max_word_len: u32,
    /// `None` picks the pad from the lattice and the observed radii.
    pub window_pad: Option<f64>,
    pub limits: EnumerationLimits,
    pub tolerance: f64,
}

impl Default for FordSettings {
    fn default() -> Self {
        FordSettings {
            max_word_len: DEFAULT_MAX_WORD_LEN,
            window_pad: None,
            limits: EnumerationLimits::default(),
            tolerance: GEOMETRIC_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FordAnalysis {
    pub domain: VerticalDomain,
    pub settings: FordSettings,
    pub window_pad: f64,
    pub coset_count: usize,
    /// An enumeration budget was hit; some words were not examined.
    pub truncated: bool,
    pub verdicts: Vec<VisibilityVerdict>,
    pub edges: Vec<VisibleEdge>,
    pub certificate: FordCertificate,
}

impl FordAnalysis {
    pub fn visible(&self) -> impl Iterator<Item = &VisibilityVerdict> {
        self.verdicts.iter().filter(|v| v.is_visible())
    }
}

/// Enumerates, classifies and certifies.
pub fn analyze(gamma: &MoebiusMap, domain: &VerticalDomain, settings: &FordSettings) -> Result<FordAnalysis, FordError> {
    let en = enumerate(gamma, domain, settings.max_word_len, settings.window_pad, &settings.limits);
    let verdicts = classify_visibility(&en.elements, domain);
    let edges = if indiscreteness_test(&en.elements, &domain.lattice, settings.tolerance).is_some() {
        Vec::new()
    } else {
        visible_edges(&verdicts)
    };
    let mut certificate = certify(&verdicts, &edges, domain, settings.tolerance)?;
    if en.truncated {
        certificate
            .diagnostics
            .push("enumeration budget reached; some words were not examined".to_string());
    }
    Ok(FordAnalysis {
        domain: *domain,
        settings: *settings,
        window_pad: en.window_pad,
        coset_count: en.coset_count,
        truncated: en.truncated,
        verdicts,
        edges,
        certificate,
    })
}
