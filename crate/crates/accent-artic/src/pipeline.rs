//! Full analysis pipeline: weight training, scoring, reparameterization,
//! gesture fitting, and regression, assembled into a report.

use std::collections::BTreeMap;

use crate::align::{align, normalized_distance, WeightTable};
use crate::config::{Config, Measure};
use crate::error::PipelineError;
use crate::gesture::fit_gesture;
use crate::ingest::{by_speaker, Corpus};
use crate::inventory::PhonemeLabel;
use crate::pmi::{
    speaker_accent_score, train_weights, AccentScore, TrainOutcome, UttDistances,
};
use crate::reparam::{
    fit_tongue_pca, reparameterize, segment_mean_widened, EmaTrack, PcaBases, ReparamTrack,
    REPARAM_CHANNELS,
};
use crate::stats::{linreg, summarize, RegressionResult, Statistic, SummaryCell};

#[derive(Debug, Clone)]
pub struct TrainedWeights {
    pub us: TrainOutcome,
    pub uk: TrainOutcome,
}

/// Train PMI edit weights against each dictionary on the whole corpus.
pub fn compute_weights(corpus: &Corpus, cfg: &Config) -> Result<TrainedWeights, PipelineError> {
    let tc = cfg.train.to_train_config();
    let n = corpus.inventory.len();
    let pairs_us: Vec<_> = corpus
        .utterances
        .iter()
        .map(|u| (u.pred.clone(), u.ref_us.clone()))
        .collect();
    let pairs_uk: Vec<_> = corpus
        .utterances
        .iter()
        .map(|u| (u.pred.clone(), u.ref_uk.clone()))
        .collect();
    let us = train_weights(&pairs_us, n, &tc)
        .map_err(|e| PipelineError::numeric("training weights against US dictionary", e))?;
    let uk = train_weights(&pairs_uk, n, &tc)
        .map_err(|e| PipelineError::numeric("training weights against UK dictionary", e))?;
    Ok(TrainedWeights { us, uk })
}

/// Per-utterance normalized distances plus per-speaker accent scores.
pub fn compute_scores(
    corpus: &Corpus,
    weights: &TrainedWeights,
) -> Result<(BTreeMap<String, Vec<UttDistances>>, Vec<AccentScore>), PipelineError> {
    let unit = WeightTable::unit_n(corpus.inventory.len());
    let mut per_speaker: BTreeMap<String, Vec<UttDistances>> = BTreeMap::new();

    for u in &corpus.utterances {
        let dist = |w: &WeightTable, reference: &crate::inventory::PhonemeSeq| {
            let al = align(&u.pred, reference, w).map_err(|e| {
                PipelineError::numeric(format!("aligning utterance `{}`", u.id), e)
            })?;
            normalized_distance(&al, reference.len()).map_err(|e| {
                PipelineError::numeric(
                    format!("normalizing distance for utterance `{}`", u.id),
                    e,
                )
            })
        };
        let d = UttDistances {
            utterance_id: u.id.clone(),
            ld_us: dist(&unit, &u.ref_us)?,
            ld_uk: dist(&unit, &u.ref_uk)?,
            pmi_ld_us: dist(&weights.us.weights, &u.ref_us)?,
            pmi_ld_uk: dist(&weights.uk.weights, &u.ref_uk)?,
        };
        per_speaker.entry(u.speaker_id.clone()).or_default().push(d);
    }

    let mut scores = Vec::new();
    for (spk, utts) in &per_speaker {
        let s = speaker_accent_score(spk.clone(), utts)
            .map_err(|e| PipelineError::numeric(format!("scoring speaker `{spk}`"), e))?;
        scores.push(s);
    }
    Ok((per_speaker, scores))
}

/// Fit the tongue PCA and reparameterize every track, keyed by utterance id.
pub fn compute_reparam(
    corpus: &Corpus,
    cfg: &Config,
) -> Result<(PcaBases, BTreeMap<String, ReparamTrack>), PipelineError> {
    use crate::config::PcaFrames;

    let vowel_labels = vowel_labels(corpus, cfg);
    // optionally restrict PCA fitting to frames inside analyzed vowel segments
    let filtered: Vec<EmaTrack>;
    let fit_refs: Vec<&EmaTrack> = match cfg.pca.frames {
        PcaFrames::All => corpus.utterances.iter().map(|u| &u.ema).collect(),
        PcaFrames::Vowels => {
            filtered = corpus
                .utterances
                .iter()
                .map(|u| {
                    let frames = u
                        .ema
                        .frames
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| {
                            let t = u.ema.frame_time(*i);
                            u.segments.iter().any(|s| {
                                vowel_labels.contains(&s.phone) && t >= s.t_start && t < s.t_end
                            })
                        })
                        .map(|(_, f)| *f)
                        .collect();
                    EmaTrack {
                        frames,
                        ..u.ema.clone()
                    }
                })
                .collect();
            filtered.iter().collect()
        }
    };

    let bases = fit_tongue_pca(&fit_refs, cfg.pca.scope)
        .map_err(|e| PipelineError::numeric("fitting tongue PCA", e))?;

    let mut tracks = BTreeMap::new();
    for u in &corpus.utterances {
        let basis = bases
            .basis_for(&u.speaker_id)
            .map_err(|e| PipelineError::numeric(format!("utterance `{}`", u.id), e))?;
        tracks.insert(u.id.clone(), reparameterize(&u.ema, basis));
    }
    Ok((bases, tracks))
}

fn vowel_labels(corpus: &Corpus, cfg: &Config) -> Vec<PhonemeLabel> {
    cfg.analysis
        .vowels
        .iter()
        .filter_map(|v| corpus.inventory.lookup(v))
        .collect()
}

/// One per-segment, per-channel observation.
#[derive(Debug, Clone)]
pub struct FitRecord {
    pub utterance_id: String,
    pub speaker_id: String,
    pub vowel: String,
    pub segment_index: usize,
    pub feature: &'static str,
    pub mean: f64,
    pub target: f64,
    pub stiffness: f64,
    pub onset: f64,
    pub weighted_mse: f64,
    pub converged: bool,
    /// Sub-frame segment widened to its nearest frame for the mean.
    pub widened: bool,
}

/// Segment means and gesture fits for every analyzed vowel segment x channel.
///
/// Segments that cannot be fit (too few frames) are skipped with a warning
/// rather than failing the run.
pub fn compute_fits(
    corpus: &Corpus,
    cfg: &Config,
    tracks: &BTreeMap<String, ReparamTrack>,
) -> Result<Vec<FitRecord>, PipelineError> {
    let vowels = vowel_labels(corpus, cfg);
    let fit_cfg = cfg.gesture.to_fit_config();
    let mut out = Vec::new();

    for u in &corpus.utterances {
        let track = match tracks.get(&u.id) {
            Some(t) => t,
            None => continue,
        };
        let times: Vec<f64> = (0..track.frames.len()).map(|i| track.frame_time(i)).collect();
        for (seg_idx, seg) in u.segments.iter().enumerate() {
            if !vowels.contains(&seg.phone) {
                continue;
            }
            let vowel = corpus.inventory.symbol(seg.phone).to_string();
            let (means, widened) = match segment_mean_widened(track, seg.t_start, seg.t_end) {
                Ok(m) => m,
                Err(e) => {
                    log::warn!("utterance `{}` segment {seg_idx}: {e}; skipped", u.id);
                    continue;
                }
            };
            for (ch, &feature) in REPARAM_CHANNELS.iter().enumerate() {
                let values: Vec<f64> = track.frames.iter().map(|f| f[ch]).collect();
                let fit = match fit_gesture(&times, &values, seg.t_start, seg.t_end, &fit_cfg) {
                    Ok(f) => f,
                    Err(e) => {
                        log::warn!(
                            "utterance `{}` segment {seg_idx} channel {feature}: {e}; skipped",
                            u.id
                        );
                        continue;
                    }
                };
                out.push(FitRecord {
                    utterance_id: u.id.clone(),
                    speaker_id: u.speaker_id.clone(),
                    vowel: vowel.clone(),
                    segment_index: seg_idx,
                    feature,
                    mean: means[ch],
                    target: fit.params.target,
                    stiffness: fit.params.stiffness,
                    onset: fit.params.onset,
                    weighted_mse: fit.weighted_mse,
                    converged: fit.converged,
                    widened,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    /// Fewer than 3 speakers contribute data.
    InsufficientData { n: usize },
    /// The accent measure was constant across speakers.
    DegeneratePredictor,
}

impl CellStatus {
    pub fn as_str(&self) -> String {
        match self {
            CellStatus::Ok => "ok".into(),
            CellStatus::InsufficientData { n } => format!("insufficient-data(n={n})"),
            CellStatus::DegeneratePredictor => "degenerate-predictor".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub vowel: String,
    pub feature: &'static str,
    pub statistic: Statistic,
    pub measure: Measure,
    pub result: Option<RegressionResult>,
    pub status: CellStatus,
}

#[derive(Debug, Clone)]
pub struct ScatterPoint {
    pub vowel: String,
    pub feature: &'static str,
    pub statistic: Statistic,
    pub measure: Measure,
    pub speaker_id: String,
    pub x: f64,
    pub y: f64,
}

/// Everything a run produces, ready for serialization.
#[derive(Debug)]
pub struct Report {
    pub seed: u64,
    pub config: Config,
    pub train_us_iterations: usize,
    pub train_us_converged: bool,
    pub train_uk_iterations: usize,
    pub train_uk_converged: bool,
    pub per_utterance: BTreeMap<String, Vec<UttDistances>>,
    pub accent_scores: Vec<AccentScore>,
    pub fits: Vec<FitRecord>,
    pub cells: Vec<CellResult>,
    pub scatter: Vec<ScatterPoint>,
    pub summary: Vec<(Measure, SummaryCell)>,
    /// Regressions actually run (no multiple-comparison correction applied).
    pub n_tests: usize,
    pub significant_per_measure: BTreeMap<&'static str, usize>,
    pub provenance: Vec<(std::path::PathBuf, String)>,
    pub nan_frames_dropped: usize,
}

/// Run regression over (vowel x feature x statistic x measure) cells.
pub fn compute_regression(
    cfg: &Config,
    scores: &[AccentScore],
    fits: &[FitRecord],
) -> (Vec<CellResult>, Vec<ScatterPoint>) {
    // per-speaker aggregates: (vowel, feature, stat) -> speaker -> mean value
    let mut agg: BTreeMap<(String, &'static str, &'static str), BTreeMap<String, (f64, usize)>> =
        BTreeMap::new();
    for f in fits {
        for (stat, value) in [("mean", f.mean), ("T", f.target)] {
            let entry = agg
                .entry((f.vowel.clone(), f.feature, stat))
                .or_default()
                .entry(f.speaker_id.clone())
                .or_insert((0.0, 0));
            entry.0 += value;
            entry.1 += 1;
        }
    }

    let score_of: BTreeMap<&str, &AccentScore> = scores
        .iter()
        .map(|s| (s.speaker_id.as_str(), s))
        .collect();

    let mut cells = Vec::new();
    let mut scatter = Vec::new();
    for vowel in &cfg.analysis.vowels {
        for feature in REPARAM_CHANNELS {
            for statistic in cfg.analysis.statistics.stats() {
                for measure in cfg.analysis.measures.measures() {
                    let key = (vowel.clone(), feature, statistic.as_str());
                    let speakers = agg.get(&key);
                    let mut xs = Vec::new();
                    let mut ys = Vec::new();
                    let mut ids = Vec::new();
                    if let Some(per_spk) = speakers {
                        for (spk, (sum, count)) in per_spk {
                            if let Some(score) = score_of.get(spk.as_str()) {
                                let x = match measure {
                                    Measure::Us => score.pmi_ld_us,
                                    Measure::Relative => score.relative,
                                };
                                xs.push(x);
                                ys.push(sum / *count as f64);
                                ids.push(spk.clone());
                            }
                        }
                    }
                    if xs.len() < 3 {
                        cells.push(CellResult {
                            vowel: vowel.clone(),
                            feature,
                            statistic,
                            measure,
                            result: None,
                            status: CellStatus::InsufficientData { n: xs.len() },
                        });
                        continue;
                    }
                    for ((spk, &x), &y) in ids.iter().zip(&xs).zip(&ys) {
                        scatter.push(ScatterPoint {
                            vowel: vowel.clone(),
                            feature,
                            statistic,
                            measure,
                            speaker_id: spk.clone(),
                            x,
                            y,
                        });
                    }
                    match linreg(&xs, &ys) {
                        Ok(res) => cells.push(CellResult {
                            vowel: vowel.clone(),
                            feature,
                            statistic,
                            measure,
                            result: Some(res),
                            status: CellStatus::Ok,
                        }),
                        Err(crate::error::StatsError::ConstantPredictor) => {
                            cells.push(CellResult {
                                vowel: vowel.clone(),
                                feature,
                                statistic,
                                measure,
                                result: None,
                                status: CellStatus::DegeneratePredictor,
                            })
                        }
                        Err(e) => {
                            log::warn!("cell ({vowel}, {feature}): {e}");
                            cells.push(CellResult {
                                vowel: vowel.clone(),
                                feature,
                                statistic,
                                measure,
                                result: None,
                                status: CellStatus::InsufficientData { n: xs.len() },
                            })
                        }
                    }
                }
            }
        }
    }
    (cells, scatter)
}

/// Execute the full pipeline on a loaded corpus.
pub fn run_pipeline(corpus: &Corpus, cfg: &Config, seed: u64) -> Result<Report, PipelineError> {
    cfg.validate()?;
    let n_speakers = by_speaker(corpus).len();
    if n_speakers < 3 {
        return Err(PipelineError::TooFewSpeakers(n_speakers));
    }

    let weights = compute_weights(corpus, cfg)?;
    let (per_utterance, accent_scores) = compute_scores(corpus, &weights)?;
    let (_bases, tracks) = compute_reparam(corpus, cfg)?;
    let fits = compute_fits(corpus, cfg, &tracks)?;
    let (cells, scatter) = compute_regression(cfg, &accent_scores, &fits);

    let n_tests = cells
        .iter()
        .filter(|c| c.status == CellStatus::Ok)
        .count();
    let mut significant_per_measure: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut summary = Vec::new();
    for measure in cfg.analysis.measures.measures() {
        let measure_cells: Vec<_> = cells
            .iter()
            .filter(|c| c.measure == measure)
            .filter_map(|c| {
                c.result.as_ref().map(|r| {
                    (
                        c.vowel.clone(),
                        c.feature.to_string(),
                        c.statistic,
                        r.clone(),
                    )
                })
            })
            .collect();
        let cells_summary = summarize(&measure_cells);
        let sig = cells_summary.iter().filter(|c| c.significant).count();
        significant_per_measure.insert(measure.as_str(), sig);
        summary.extend(cells_summary.into_iter().map(|c| (measure, c)));
    }

    Ok(Report {
        seed,
        config: cfg.clone(),
        train_us_iterations: weights.us.iterations,
        train_us_converged: weights.us.converged,
        train_uk_iterations: weights.uk.iterations,
        train_uk_converged: weights.uk.converged,
        per_utterance,
        accent_scores,
        fits,
        cells,
        scatter,
        summary,
        n_tests,
        significant_per_measure,
        provenance: Vec::new(),
        nan_frames_dropped: 0,
    })
}
