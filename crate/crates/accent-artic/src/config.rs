//! Run configuration: TOML-backed, fully defaulted, echoed into reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::PipelineError;
use crate::gesture::FitConfig;
use crate::pmi::{Convergence, MarginalScope, TrainConfig};
use crate::reparam::PcaScope;

/// Accent measure used as the regression predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// PMI-LD against the US dictionary.
    Us,
    /// PMI-LD US minus PMI-LD UK.
    Relative,
}

impl Measure {
    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Us => "us",
            Measure::Relative => "relative",
        }
    }
}

/// Selection of accent measures to analyze.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureSel {
    Us,
    Relative,
    #[default]
    Both,
}

impl MeasureSel {
    pub fn measures(&self) -> Vec<Measure> {
        match self {
            MeasureSel::Us => vec![Measure::Us],
            MeasureSel::Relative => vec![Measure::Relative],
            MeasureSel::Both => vec![Measure::Us, Measure::Relative],
        }
    }
}

/// Selection of per-segment statistics to analyze.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatSel {
    Mean,
    T,
    #[default]
    Both,
}

impl StatSel {
    pub fn stats(&self) -> Vec<crate::stats::Statistic> {
        use crate::stats::Statistic;
        match self {
            StatSel::Mean => vec![Statistic::Mean],
            StatSel::T => vec![Statistic::T],
            StatSel::Both => vec![Statistic::Mean, Statistic::T],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainSettings {
    pub max_iters: usize,
    pub convergence: ConvergenceSetting,
    pub epsilon: f64,
    pub delta: f64,
    pub include_indels: bool,
    /// Compute marginals over non-matching pairs only, or over all aligned pairs.
    pub marginals_over_all_pairs: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvergenceSetting {
    #[default]
    AlignmentsStable,
    WeightDelta,
}

impl Default for TrainSettings {
    fn default() -> Self {
        TrainSettings {
            max_iters: 15,
            convergence: ConvergenceSetting::AlignmentsStable,
            epsilon: 1e-6,
            delta: 0.5,
            include_indels: true,
            marginals_over_all_pairs: false,
        }
    }
}

impl TrainSettings {
    pub fn to_train_config(&self) -> TrainConfig {
        TrainConfig {
            max_iters: self.max_iters,
            convergence: match self.convergence {
                ConvergenceSetting::AlignmentsStable => Convergence::AlignmentsStable,
                ConvergenceSetting::WeightDelta => Convergence::WeightDelta,
            },
            epsilon: self.epsilon,
            delta: self.delta,
            include_indels: self.include_indels,
            marginal_scope: if self.marginals_over_all_pairs {
                MarginalScope::All
            } else {
                MarginalScope::NonMatching
            },
        }
    }
}

/// Which frames feed the tongue PCA fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PcaFrames {
    #[default]
    All,
    /// Only frames inside analyzed vowel segments.
    Vowels,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PcaSettings {
    pub scope: PcaScope,
    pub frames: PcaFrames,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GestureSettings {
    pub k_min: f64,
    pub k_max: f64,
    pub half_width_scale: f64,
    pub sigma_scale: f64,
    pub range_pad: f64,
}

impl Default for GestureSettings {
    fn default() -> Self {
        let d = FitConfig::default();
        GestureSettings {
            k_min: d.k_min,
            k_max: d.k_max,
            half_width_scale: d.half_width_scale,
            sigma_scale: d.sigma_scale,
            range_pad: d.range_pad,
        }
    }
}

impl GestureSettings {
    pub fn to_fit_config(&self) -> FitConfig {
        FitConfig {
            k_min: self.k_min,
            k_max: self.k_max,
            half_width_scale: self.half_width_scale,
            sigma_scale: self.sigma_scale,
            range_pad: self.range_pad,
        }
    }
}

fn default_vowels() -> Vec<String> {
    ["i", "ɒ", "ɛ", "ə", "æ", "ɪ", "ɑ", "ɔ", "ʊ", "ɝ"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisSettings {
    /// Vowel labels analyzed, in report order.
    pub vowels: Vec<String>,
    pub measures: MeasureSel,
    pub statistics: StatSel,
    /// Optional remapping of file phone tokens onto canonical labels,
    /// e.g. ARPA-style "AA1" onto "ɑ". Identity when absent.
    pub phone_map: BTreeMap<String, String>,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            vowels: default_vowels(),
            measures: MeasureSel::default(),
            statistics: StatSel::default(),
            phone_map: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub train: TrainSettings,
    pub pca: PcaSettings,
    pub gesture: GestureSettings,
    pub analysis: AnalysisSettings,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: Config = toml::from_str(&text)
            .map_err(|e| PipelineError::Config(format!("cannot parse {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let t = &self.train;
        if t.max_iters < 1 {
            return Err(PipelineError::Config("train.max_iters must be >= 1".into()));
        }
        if t.epsilon <= 0.0 {
            return Err(PipelineError::Config("train.epsilon must be > 0".into()));
        }
        if t.delta < 0.0 {
            return Err(PipelineError::Config("train.delta must be >= 0".into()));
        }
        let g = &self.gesture;
        if g.k_min <= 0.0 || g.k_max <= g.k_min {
            return Err(PipelineError::Config(
                "gesture stiffness bounds must satisfy 0 < k_min < k_max".into(),
            ));
        }
        if g.half_width_scale <= 0.0 || g.sigma_scale <= 0.0 {
            return Err(PipelineError::Config(
                "gesture window scales must be > 0".into(),
            ));
        }
        if self.analysis.vowels.is_empty() {
            return Err(PipelineError::Config("analysis.vowels must be non-empty".into()));
        }
        Ok(())
    }

    /// Canonical label for a phone token from an input file.
    pub fn map_phone<'a>(&'a self, token: &'a str) -> &'a str {
        self.analysis
            .phone_map
            .get(token)
            .map(String::as_str)
            .unwrap_or(token)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_toml() {
        let cfg = Config::default();
        let text = toml::to_string_pretty(&cfg).unwrap();
        let back: Config = toml::from_str(&text).unwrap();
        assert_eq!(back.train.max_iters, 15);
        assert_eq!(back.analysis.vowels.len(), 10);
        back.validate().unwrap();
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut cfg = Config::default();
        cfg.train.max_iters = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = Config::default();
        cfg.gesture.k_min = -1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = Config::default();
        cfg.analysis.vowels.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn phone_map_applies() {
        let mut cfg = Config::default();
        cfg.analysis
            .phone_map
            .insert("AA1".into(), "ɑ".into());
        assert_eq!(cfg.map_phone("AA1"), "ɑ");
        assert_eq!(cfg.map_phone("i"), "i");
    }
}
