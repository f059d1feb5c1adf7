use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ford::Verdict;
use crate::tunnel::tunnel_length;

use super::{analyze_config, GeneratorSpec, ScenarioConfig};

/// What varies along a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Length of `t_alpha`, keeping its direction.
    TAlpha,
    /// Family parameter; replaces the configured generator.
    Epsilon,
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParameter::TAlpha => "t_alpha",
            SweepParameter::Epsilon => "epsilon",
        })
    }
}

impl FromStr for SweepParameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t_alpha" => Ok(SweepParameter::TAlpha),
            "epsilon" | "eps" => Ok(SweepParameter::Epsilon),
            _ => Err(format!("unknown sweep parameter {s:?}; expected t_alpha or epsilon")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub verdict: Verdict,
    /// Verdict before flip-flop downgrading.
    pub raw_verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tunnel_length: Option<f64>,
    /// The verdict differs from that of the previous certified row.
    pub transition: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: ScenarioConfig,
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
    /// Last parameter before and first parameter after the transition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<[f64; 2]>,
}

/// `steps` values from `from` to `to`, equally spaced in log scale.
pub fn log_steps(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        _ => {
            let (a, b) = (from.ln(), to.ln());
            (0..steps)
                .map(|i| match i {
                    0 => from,
                    i if i == steps - 1 => to,
                    _ => (a + (b - a) * i as f64 / (steps - 1) as f64).exp(),
                })
                .collect()
        }
    }
}

fn is_monotone(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1]) || values.windows(2).all(|w| w[0] >= w[1])
}

fn with_parameter(config: &ScenarioConfig, parameter: SweepParameter, value: f64) -> ScenarioConfig {
    let mut cfg = *config;
    match parameter {
        SweepParameter::TAlpha => cfg.t_alpha = config.t_alpha / config.t_alpha.norm() * value,
        SweepParameter::Epsilon => cfg.generator = GeneratorSpec::epsilon(value),
    }
    cfg
}

fn sample(config: &ScenarioConfig, parameter: SweepParameter, value: f64) -> SweepRow {
    let cfg = with_parameter(config, parameter, value);
    let (verdict, tunnel_length, note) = match analyze_config(&cfg) {
        Ok((analysis, _)) => {
            let length = tunnel_length(&analysis).ok().map(|m| m.length);
            let note = analysis.certificate.diagnostics.first().cloned();
            (analysis.certificate.verdict, length, note)
        }
        Err(e) => (Verdict::Inconclusive, None, Some(e.to_string())),
    };
    SweepRow { parameter: value, verdict, raw_verdict: verdict, tunnel_length, transition: false, note }
}

/// Demotes certified rows that do not fit a single transition between the
/// first and last certified verdicts. With different ends, every certified
/// row between the first `end` verdict and the last `start` verdict is
/// demoted, so the bracket covers the whole mixed stretch.
fn downgrade_flip_flops(rows: &mut [SweepRow]) {
    let certified: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].verdict.is_certified()).collect();
    let (Some(&first), Some(&last)) = (certified.first(), certified.last()) else {
        return;
    };
    let (start, end) = (rows[first].verdict, rows[last].verdict);
    let mixed = |i: usize| -> bool {
        if start == end {
            return rows[i].verdict != start;
        }
        let first_end = certified.iter().copied().find(|&j| rows[j].verdict == end).unwrap_or(last);
        let last_start = certified.iter().copied().rev().find(|&j| rows[j].verdict == start).unwrap_or(first);
        (first_end..=last_start).contains(&i) || (rows[i].verdict != start && rows[i].verdict != end)
    };
    let demote: Vec<usize> = certified.iter().copied().filter(|&i| mixed(i)).collect();
    for i in demote {
        rows[i].verdict = Verdict::Inconclusive;
        rows[i].tunnel_length = None;
        rows[i].note = Some(format!("{} contradicts the neighbouring verdicts", rows[i].raw_verdict));
    }
}

fn flag_transitions(rows: &mut [SweepRow]) -> Option<[f64; 2]> {
    let mut previous: Option<(Verdict, f64)> = None;
    let mut bracket = None;
    for row in rows.iter_mut() {
        if !row.verdict.is_certified() {
            continue;
        }
        if let Some((v, p)) = previous {
            if v != row.verdict {
                row.transition = true;
                bracket.get_or_insert([p, row.parameter]);
            }
        }
        previous = Some((row.verdict, row.parameter));
    }
    bracket
}

/// Runs the pipeline at each parameter value. Failures become inconclusive
/// rows rather than errors.
pub fn run_sweep(config: &ScenarioConfig, parameter: SweepParameter, values: &[f64]) -> SweepReport {
    let mut rows: Vec<SweepRow> = if is_monotone(values) {
        values.iter().map(|&v| sample(config, parameter, v)).collect()
    } else {
        values
            .iter()
            .map(|&v| SweepRow {
                parameter: v,
                verdict: Verdict::Inconclusive,
                raw_verdict: Verdict::Inconclusive,
                tunnel_length: None,
                transition: false,
                note: Some("parameter path is not monotone".to_string()),
            })
            .collect()
    };
    downgrade_flip_flops(&mut rows);
    let bracket = flag_transitions(&mut rows);
    SweepReport { config: *config, parameter, rows, bracket }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(parameter: f64, verdict: Verdict) -> SweepRow {
        SweepRow { parameter, verdict, raw_verdict: verdict, tunnel_length: None, transition: false, note: None }
    }

    use Verdict::{CertifiedFordDomain as Ford, CertifiedIndiscrete as Indiscrete, Inconclusive};

    #[test]
    fn log_steps_hit_both_ends() {
        let v = log_steps(20.0, 0.5, 40);
        assert_eq!(v.len(), 40);
        assert_eq!((v[0], v[39]), (20.0, 0.5));
        assert!(v.windows(2).all(|w| w[0] > w[1]));
        let ratio = v[1] / v[0];
        assert!(v.windows(2).all(|w| (w[1] / w[0] - ratio).abs() < 1e-12));
        assert_eq!(log_steps(1.0, 2.0, 1), vec![1.0]);
    }

    #[test]
    fn single_transition_is_bracketed() {
        let mut rows = vec![row(5.0, Ford), row(4.0, Ford), row(3.0, Inconclusive), row(2.0, Indiscrete)];
        downgrade_flip_flops(&mut rows);
        assert_eq!(flag_transitions(&mut rows), Some([4.0, 2.0]));
        assert!(rows[3].transition);
        assert!(!rows[1].transition);
    }

    #[test]
    fn flip_flops_are_downgraded() {
        let mut rows = vec![row(5.0, Ford), row(4.0, Indiscrete), row(3.0, Ford), row(2.0, Indiscrete), row(1.0, Indiscrete)];
        downgrade_flip_flops(&mut rows);
        assert_eq!(rows[1].verdict, Inconclusive);
        assert_eq!(rows[1].raw_verdict, Indiscrete);
        assert_eq!(rows[2].verdict, Inconclusive);
        assert_eq!(flag_transitions(&mut rows), Some([5.0, 2.0]));
        assert_eq!(rows.iter().filter(|r| r.transition).count(), 1);

        let mut same_ends = vec![row(3.0, Ford), row(2.0, Indiscrete), row(1.0, Ford)];
        downgrade_flip_flops(&mut same_ends);
        assert_eq!(same_ends[1].verdict, Inconclusive);
        assert_eq!(flag_transitions(&mut same_ends), None);
    }

    fn verdict() -> impl Strategy<Value = Verdict> {
        prop_oneof![Just(Ford), Just(Indiscrete), Just(Inconclusive)]
    }

    proptest! {
        #[test]
        fn at_most_the_transitions_implied_by_the_ends(verdicts in prop::collection::vec(verdict(), 0..30)) {
            let mut rows: Vec<SweepRow> = verdicts.iter().enumerate().map(|(i, &v)| row(-(i as f64), v)).collect();
            downgrade_flip_flops(&mut rows);
            let bracket = flag_transitions(&mut rows);
            let certified: Vec<Verdict> = rows.iter().map(|r| r.verdict).filter(|v| v.is_certified()).collect();
            let changes = certified.windows(2).filter(|w| w[0] != w[1]).count();
            let raw: Vec<Verdict> = verdicts.iter().copied().filter(|v| v.is_certified()).collect();
            let implied = usize::from(raw.first() != raw.last());
            prop_assert_eq!(changes, implied);
            prop_assert_eq!(bracket.is_some(), implied == 1);
            prop_assert_eq!(rows.iter().filter(|r| r.transition).count(), implied);
            for (r, &v) in rows.iter().zip(&verdicts) {
                prop_assert!(r.verdict == v || r.verdict == Inconclusive);
            }
        }
    }

    #[test]
    fn parameter_names() {
        assert_eq!("t_alpha".parse::<SweepParameter>().unwrap(), SweepParameter::TAlpha);
        assert_eq!("epsilon".parse::<SweepParameter>().unwrap(), SweepParameter::Epsilon);
        assert!("tau".parse::<SweepParameter>().is_err());
        assert_eq!(SweepParameter::TAlpha.to_string(), "t_alpha");
    }

    #[test]
    fn constant_path_gives_constant_verdicts() {
        let report = run_sweep(&ScenarioConfig::family(0.01), SweepParameter::TAlpha, &[20.0, 20.0, 20.0]);
        assert!(report.rows.iter().all(|r| r.verdict == Ford && !r.transition));
        assert_eq!(report.bracket, None);
    }

    #[test]
    fn epsilon_sweep_lengths_increase() {
        let values: Vec<f64> = [1.0f64, 5.0, 10.0].iter().map(|r| (-r).exp() / 2.0).collect();
        let report = run_sweep(&ScenarioConfig::family(0.01), SweepParameter::Epsilon, &values);
        let lengths: Vec<f64> = report.rows.iter().map(|r| r.tunnel_length.unwrap()).collect();
        for (l, expected) in lengths.iter().zip([1.69, 5.69, 10.69]) {
            assert!((l - expected).abs() < 0.01, "{l}");
        }
        assert!(lengths.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn non_monotone_path_is_inconclusive() {
        let report = run_sweep(&ScenarioConfig::family(0.01), SweepParameter::TAlpha, &[20.0, 5.0, 10.0]);
        assert!(report.rows.iter().all(|r| r.verdict == Inconclusive));
    }

    #[test]
    fn failing_sample_becomes_inconclusive_row() {
        let report = run_sweep(&ScenarioConfig::family(0.01), SweepParameter::Epsilon, &[0.01, -1.0]);
        assert_eq!(report.rows[0].verdict, Ford);
        assert_eq!(report.rows[1].verdict, Inconclusive);
        assert!(report.rows[1].note.is_some());
    }
}
