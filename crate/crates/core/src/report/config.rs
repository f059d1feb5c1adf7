use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ford::FordSettings;
use crate::group::{CuspLattice, EnumerationLimits, VerticalDomain, DEFAULT_MAX_WORD_LEN};
use crate::moebius::{family_generator, MoebiusMap, GEOMETRIC_TOLERANCE};
use crate::tunnel::epsilon_for_target;

use super::ReportError;

/// A member of the one-parameter family, given by its parameter or by the
/// tunnel length it should reach.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub safety: Option<f64>,
}

pub const DEFAULT_SAFETY: f64 = 0.5;

impl FamilySpec {
    pub fn epsilon(&self) -> Result<f64, ReportError> {
        let eps = match (self.epsilon, self.target_r) {
            (Some(e), None) if self.safety.is_none() => e,
            (None, Some(r)) => {
                let safety = self.safety.unwrap_or(DEFAULT_SAFETY);
                if !(safety > 0.0 && safety <= 1.0) {
                    return Err(ReportError::InvalidConfig(format!("safety must lie in (0, 1], got {safety}")));
                }
                if !(r.is_finite() && r >= 0.0) {
                    return Err(ReportError::InvalidConfig(format!("target_r must be finite and nonnegative, got {r}")));
                }
                epsilon_for_target(r, safety)
            }
            _ => {
                return Err(ReportError::InvalidConfig(
                    "family needs either epsilon, or target_r with an optional safety".to_string(),
                ))
            }
        };
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(ReportError::InvalidConfig(format!("epsilon must be positive, got {eps}")));
        }
        Ok(eps)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitGenerator {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorSpec {
    Family(FamilySpec),
    Explicit(ExplicitGenerator),
}

impl GeneratorSpec {
    pub fn epsilon(eps: f64) -> Self {
        GeneratorSpec::Family(FamilySpec { epsilon: Some(eps), ..FamilySpec::default() })
    }

    pub fn target(target_r: f64, safety: f64) -> Self {
        GeneratorSpec::Family(FamilySpec { target_r: Some(target_r), safety: Some(safety), ..FamilySpec::default() })
    }

    pub fn explicit(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        GeneratorSpec::Explicit(ExplicitGenerator { a, b, c, d })
    }

    /// The generator and, for the family, its parameter.
    pub fn resolve(&self) -> Result<(MoebiusMap, Option<f64>), ReportError> {
        match self {
            GeneratorSpec::Family(f) => {
                let eps = f.epsilon()?;
                Ok((family_generator(eps)?, Some(eps)))
            }
            GeneratorSpec::Explicit(m) => {
                if [m.a, m.b, m.c, m.d].iter().any(|z| !z.is_finite()) {
                    return Err(ReportError::InvalidConfig("generator entries must be finite".to_string()));
                }
                Ok((MoebiusMap::new(m.a, m.b, m.c, m.d)?, None))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnumerationConfig {
    pub max_word_len: u32,
    /// Omitted means chosen from the lattice and the radii found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_pad: Option<f64>,
    pub max_words: usize,
    pub max_candidates: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        let limits = EnumerationLimits::default();
        EnumerationConfig {
            max_word_len: DEFAULT_MAX_WORD_LEN,
            window_pad: None,
            max_words: limits.max_words,
            max_candidates: limits.max_candidates,
        }
    }
}

fn default_tolerance() -> f64 {
    GEOMETRIC_TOLERANCE
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub generator: GeneratorSpec,
    pub t_alpha: Complex64,
    pub t_beta: Complex64,
    /// Corner of the fundamental parallelogram; centered on 0 when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_corner: Option<Complex64>,
    #[serde(default)]
    pub enumeration: EnumerationConfig,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Side of the sampling grid for the brute-force visibility check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_grid: Option<usize>,
}

impl ScenarioConfig {
    pub fn new(generator: GeneratorSpec, t_alpha: Complex64, t_beta: Complex64) -> Self {
        ScenarioConfig {
            generator,
            t_alpha,
            t_beta,
            base_corner: None,
            enumeration: EnumerationConfig::default(),
            tolerance: GEOMETRIC_TOLERANCE,
            oracle_grid: None,
        }
    }

    /// Family member on the square lattice with sides 20 and 20i.
    pub fn family(eps: f64) -> Self {
        Self::new(GeneratorSpec::epsilon(eps), Complex64::new(20.0, 0.0), Complex64::new(0.0, 20.0))
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        self.generator.resolve()?;
        self.domain()?;
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(ReportError::InvalidConfig(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        let e = &self.enumeration;
        if e.max_word_len == 0 {
            return Err(ReportError::InvalidConfig("max_word_len must be at least 1".to_string()));
        }
        if e.max_words == 0 || e.max_candidates == 0 {
            return Err(ReportError::InvalidConfig("enumeration budgets must be positive".to_string()));
        }
        if let Some(pad) = e.window_pad {
            if !(pad >= 0.0 && pad.is_finite()) {
                return Err(ReportError::InvalidConfig(format!("window_pad must be finite and nonnegative, got {pad}")));
            }
        }
        if self.oracle_grid == Some(0) {
            return Err(ReportError::InvalidConfig("oracle_grid must be at least 1".to_string()));
        }
        Ok(())
    }

    pub fn domain(&self) -> Result<VerticalDomain, ReportError> {
        if !(self.t_alpha.is_finite() && self.t_beta.is_finite()) {
            return Err(ReportError::InvalidConfig("lattice translations must be finite".to_string()));
        }
        let lattice = CuspLattice::new(self.t_alpha, self.t_beta)?;
        Ok(match self.base_corner {
            Some(base) => VerticalDomain::new(base, lattice),
            None => lattice.default_domain(),
        })
    }

    pub fn settings(&self) -> FordSettings {
        FordSettings {
            max_word_len: self.enumeration.max_word_len,
            window_pad: self.enumeration.window_pad,
            limits: EnumerationLimits {
                max_words: self.enumeration.max_words,
                max_candidates: self.enumeration.max_candidates,
            },
            tolerance: self.tolerance,
        }
    }
}
