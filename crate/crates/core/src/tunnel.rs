//! Length of the core tunnel: the geodesic dual to the loxodromic face,
//! measured between the top of its isometric sphere and a horoball about
//! infinity.

use num_complex::Complex64;
use thiserror::Error;

use crate::ford::{FordAnalysis, SpineFace, Verdict};
use crate::group::Word;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TunnelError {
    #[error("face {face} has no visible inverse to pair with")]
    UnpairedFace { face: String },
    #[error("tunnel length needs a certified Ford domain, got {verdict}")]
    NotCertified { verdict: Verdict },
    #[error("the loxodromic generator has no visible face")]
    NoLoxodromicFace,
}

/// The vertical geodesic from `(base, start_height)` up to infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerticalRay {
    pub base: Complex64,
    pub start_height: f64,
}

/// The two vertical rays over the tops of `S_g` and `S_{g^-1}`. Glued by `g`,
/// they form the edge dual to the face.
pub fn dual_edge(face: &SpineFace) -> Result<[VerticalRay; 2], TunnelError> {
    let inverse = match face.inverse_sphere {
        Some(s) if face.paired => s,
        _ => return Err(TunnelError::UnpairedFace { face: face.face.to_string() }),
    };
    Ok([
        VerticalRay { base: face.face_sphere.center, start_height: face.face_sphere.radius },
        VerticalRay { base: inverse.center, start_height: inverse.radius },
    ])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TunnelMeasurement {
    /// Largest visible radius. The maximal cusp horoball reaches at least
    /// this high.
    pub horoball_height: f64,
    /// Radius of the isometric sphere of the loxodromic generator.
    pub sphere_top: f64,
    /// `2 max(0, log(horoball_height / sphere_top))`.
    pub length: f64,
    /// The horoball height is a lower bound, so the length is one too.
    pub lower_bound: bool,
}

/// Hyperbolic length of the vertical segment between heights `from` and
/// `to`.
pub fn vertical_length(from: f64, to: f64) -> f64 {
    (to / from).ln().abs()
}

pub fn tunnel_length(analysis: &FordAnalysis) -> Result<TunnelMeasurement, TunnelError> {
    let verdict = analysis.certificate.verdict;
    if verdict != Verdict::CertifiedFordDomain {
        return Err(TunnelError::NotCertified { verdict });
    }
    let gamma = Word::gamma_power(1);
    let face = analysis
        .certificate
        .spine_faces
        .iter()
        .find(|f| f.face == gamma || f.inverse == gamma)
        .ok_or(TunnelError::NoLoxodromicFace)?;
    let rays = dual_edge(face)?;
    let sphere_top = if face.face == gamma { rays[0].start_height } else { rays[1].start_height };
    let horoball_height = analysis.visible().map(|v| v.element.sphere.radius).fold(0.0, f64::max);
    let length = if horoball_height > sphere_top { 2.0 * vertical_length(sphere_top, horoball_height) } else { 0.0 };
    Ok(TunnelMeasurement { horoball_height, sphere_top, length, lower_bound: true })
}

/// `safety * e^(-target)`: a family parameter whose tunnel is at least
/// `target` long.
pub fn epsilon_for_target(target: f64, safety: f64) -> f64 {
    safety * (-target).exp()
}
