use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ford::{
    analyze, visibility_oracle, visible_cosets, FordAnalysis, MinimalParabolicity, TangencyKind, Verdict,
    VisibilityStatus,
};
use crate::group::{LatticeSummary, Word, WordElement};
use crate::tunnel::{tunnel_length, TunnelMeasurement};

use super::{ReportError, ScenarioConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub max_word_len: u32,
    pub window_pad: f64,
    pub coset_count: usize,
    pub candidate_count: usize,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereRow {
    pub word: String,
    pub coset: String,
    pub center: Complex64,
    pub radius: f64,
    pub status: VisibilityStatus,
    pub primary: bool,
    pub exposed_area: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub first: String,
    pub second: String,
    /// Unit normal of the supporting plane `Re(conj(normal) x) = offset`.
    pub normal: Complex64,
    pub offset: f64,
    pub endpoints: [Complex64; 2],
    pub witness: Complex64,
    pub witness_height: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_margin: Option<f64>,
    pub dihedral_angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceRow {
    pub face: String,
    pub inverse: String,
    pub paired: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleRow {
    pub edges: Vec<usize>,
    pub steps: Vec<String>,
    pub monodromy: String,
    pub monodromy_deviation: f64,
    pub angle_sum: f64,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangencyRow {
    pub first: String,
    pub second: String,
    pub point: Complex64,
    pub kind: TangencyKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub word: String,
    pub radius: f64,
    pub min_translation_length: f64,
    pub escalated_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub verdict: Verdict,
    pub spine_faces: Vec<FaceRow>,
    pub edge_cycles: Vec<CycleRow>,
    pub tangencies: Vec<TangencyRow>,
    pub minimal_parabolicity: MinimalParabolicity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indiscreteness: Option<WitnessRow>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TunnelRow {
    pub horoball_height: f64,
    pub sphere_top: f64,
    pub length: f64,
    pub lower_bound: bool,
}

impl From<TunnelMeasurement> for TunnelRow {
    fn from(m: TunnelMeasurement) -> Self {
        TunnelRow { horoball_height: m.horoball_height, sphere_top: m.sphere_top, length: m.length, lower_bound: m.lower_bound }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub grid: usize,
    pub agrees: bool,
    pub exact_only: Vec<String>,
    pub oracle_only: Vec<String>,
}

/// Everything computed for one configuration. Wall-clock time is left out
/// so that reports are reproducible byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub config: ScenarioConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Normalized entries `[a, b, c, d]`.
    pub generator: [Complex64; 4],
    pub lattice: LatticeSummary,
    pub enumeration: EnumerationSummary,
    pub spheres: Vec<SphereRow>,
    pub edges: Vec<EdgeRow>,
    pub certificate: CertificateSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tunnel: Option<TunnelRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tunnel_unavailable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
}

impl AnalysisReport {
    pub fn verdict(&self) -> Verdict {
        self.certificate.verdict
    }

    pub fn visible_spheres(&self) -> impl Iterator<Item = &SphereRow> {
        self.spheres.iter().filter(|s| s.status == VisibilityStatus::Visible)
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn summarize(analysis: &FordAnalysis) -> (Vec<SphereRow>, Vec<EdgeRow>, CertificateSummary) {
    let spheres = analysis
        .verdicts
        .iter()
        .map(|v| SphereRow {
            word: v.element.word.to_string(),
            coset: v.element.coset().to_string(),
            center: v.sphere().center,
            radius: v.sphere().radius,
            status: v.status,
            primary: v.primary,
            exposed_area: v.exposed_area,
            witness_margin: v.witness_margin.and_then(finite),
        })
        .collect();
    let edges = analysis
        .edges
        .iter()
        .map(|e| EdgeRow {
            first: e.first.to_string(),
            second: e.second.to_string(),
            normal: e.plane.normal,
            offset: e.plane.offset,
            endpoints: e.endpoints,
            witness: e.witness.z,
            witness_height: e.witness.t,
            witness_margin: finite(e.witness_margin),
            dihedral_angle: e.dihedral_angle,
        })
        .collect();
    let cert = &analysis.certificate;
    let certificate = CertificateSummary {
        verdict: cert.verdict,
        spine_faces: cert
            .spine_faces
            .iter()
            .map(|f| FaceRow { face: f.face.to_string(), inverse: f.inverse.to_string(), paired: f.paired })
            .collect(),
        edge_cycles: cert
            .edge_cycles
            .iter()
            .map(|c| CycleRow {
                edges: c.edges.clone(),
                steps: c.steps.iter().map(Word::to_string).collect(),
                monodromy: c.monodromy.to_string(),
                monodromy_deviation: c.monodromy_deviation,
                angle_sum: c.angle_sum,
                closed: c.closed,
            })
            .collect(),
        tangencies: cert
            .tangencies
            .iter()
            .map(|t| TangencyRow { first: t.first.to_string(), second: t.second.to_string(), point: t.point, kind: t.kind })
            .collect(),
        minimal_parabolicity: cert.minimal_parabolicity,
        indiscreteness: cert.indiscreteness.as_ref().map(|w| WitnessRow {
            word: w.word.to_string(),
            radius: w.radius,
            min_translation_length: w.min_translation_length,
            escalated_radius: w.escalated_radius,
        }),
        diagnostics: cert.diagnostics.clone(),
    };
    (spheres, edges, certificate)
}

/// Enumeration, visibility and certification, without the report.
pub fn analyze_config(config: &ScenarioConfig) -> Result<(FordAnalysis, Option<f64>), ReportError> {
    config.validate()?;
    let (gamma, eps) = config.generator.resolve()?;
    let domain = config.domain()?;
    let analysis = analyze(&gamma, &domain, &config.settings())?;
    Ok((analysis, eps))
}

pub fn run_analysis(config: &ScenarioConfig) -> Result<AnalysisReport, ReportError> {
    let (analysis, epsilon) = analyze_config(config)?;
    let (gamma, _) = config.generator.resolve()?;
    let (spheres, edges, certificate) = summarize(&analysis);
    let (tunnel, tunnel_unavailable) = match tunnel_length(&analysis) {
        Ok(m) => (Some(m.into()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let oracle = config.oracle_grid.map(|grid| {
        let candidates: Vec<WordElement> = analysis.verdicts.iter().map(|v| v.element.clone()).collect();
        let exact = visible_cosets(&analysis.verdicts);
        let sampled = visibility_oracle(&candidates, &analysis.domain, grid);
        let names = |s: &BTreeSet<Word>| s.iter().map(Word::to_string).collect::<Vec<_>>();
        OracleComparison {
            grid,
            agrees: exact == sampled,
            exact_only: names(&exact.difference(&sampled).cloned().collect()),
            oracle_only: names(&sampled.difference(&exact).cloned().collect()),
        }
    });
    Ok(AnalysisReport {
        config: *config,
        epsilon,
        generator: gamma.entries(),
        lattice: LatticeSummary::from(&analysis.domain),
        enumeration: EnumerationSummary {
            max_word_len: analysis.settings.max_word_len,
            window_pad: analysis.window_pad,
            coset_count: analysis.coset_count,
            candidate_count: analysis.verdicts.len(),
            truncated: analysis.truncated,
        },
        spheres,
        edges,
        certificate,
        tunnel,
        tunnel_unavailable,
        oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{from_json, to_json, GeneratorSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn long_tunnel_report() {
        let eps = 0.5 * (-10f64).exp();
        let report = run_analysis(&ScenarioConfig::family(eps)).unwrap();
        assert_eq!(report.verdict(), Verdict::CertifiedFordDomain);
        assert_eq!(report.certificate.spine_faces.len(), 2);
        assert_eq!(report.edges.len(), 3);
        let tunnel = report.tunnel.unwrap();
        assert!(tunnel.length >= 10.0);
        assert!((tunnel.length - (1.0 / eps).ln()).abs() < 1e-9);
        assert_eq!(report.epsilon, Some(eps));
        assert!(report.oracle.is_none());
    }

    #[test]
    fn simple_generator_report() {
        let cfg = ScenarioConfig::new(
            GeneratorSpec::explicit(c(3.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
            c(20.0, 0.0),
            c(0.0, 20.0),
        );
        let report = run_analysis(&cfg).unwrap();
        assert_eq!(report.verdict(), Verdict::CertifiedFordDomain);
        assert_eq!(report.certificate.spine_faces.len(), 1);
        assert!(report.edges.is_empty());
        assert_eq!(report.certificate.minimal_parabolicity, MinimalParabolicity::Certified);
        assert!(report.tunnel.unwrap().length.abs() < 1e-12);
    }

    #[test]
    fn indiscrete_report() {
        let mut cfg = ScenarioConfig::family(0.01);
        cfg.t_alpha = c(0.9, 0.0);
        let report = run_analysis(&cfg).unwrap();
        assert_eq!(report.verdict(), Verdict::CertifiedIndiscrete);
        let w = report.certificate.indiscreteness.as_ref().unwrap();
        assert!((w.escalated_radius - 1.0 / 0.9).abs() < 1e-12);
        assert!(report.tunnel.is_none());
        assert!(report.tunnel_unavailable.is_some());
    }

    #[test]
    fn report_is_deterministic_and_reloads() {
        let mut cfg = ScenarioConfig::family(0.01);
        cfg.oracle_grid = Some(64);
        let first = to_json(&run_analysis(&cfg).unwrap()).unwrap();
        let second = to_json(&run_analysis(&cfg).unwrap()).unwrap();
        assert_eq!(first, second);
        let reloaded: AnalysisReport = from_json(&first).unwrap();
        assert_eq!(to_json(&reloaded).unwrap(), first);
        assert!(reloaded.oracle.unwrap().agrees);
    }

    #[test]
    fn invalid_config_is_an_error() {
        assert!(matches!(run_analysis(&ScenarioConfig::family(-0.5)), Err(ReportError::InvalidConfig(_))));
    }
}
