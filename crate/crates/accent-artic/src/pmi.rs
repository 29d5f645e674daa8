//! PMI-based edit weights and accent-strength scoring.
//!
//! Substitution costs come from pointwise mutual information of aligned
//! non-matching phoneme pairs: PMI(x,y) = log2(p(x,y) / (p(x) p(y))). Joint
//! probabilities are over unordered non-matching pair types; marginals are
//! over phone occurrences within that pair population (each pair contributes
//! two occurrences). PMI is inverted and min-max rescaled to [0,1] to become
//! edit costs, and the align/estimate/reweight loop repeats until the
//! alignment paths stabilize.

use crate::align::{align, AlignedPair, Alignment, WeightTable};
use crate::error::PmiError;
use crate::inventory::{PhonemeSeq, GAP};

/// Which aligned pairs feed the marginal probabilities p(x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MarginalScope {
    /// Occurrences within non-matching pairs only (default).
    #[default]
    NonMatching,
    /// Occurrences within all aligned pairs, matches included.
    All,
}

/// Convergence criterion for weight training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convergence {
    /// Stop once two consecutive iterations produce identical alignment paths.
    #[default]
    AlignmentsStable,
    /// Stop once the max absolute weight change falls below epsilon.
    WeightDelta,
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub max_iters: usize,
    pub convergence: Convergence,
    pub epsilon: f64,
    /// Add-delta pseudo-count applied to every candidate non-matching pair.
    pub delta: f64,
    /// Treat the gap as a pseudo-phoneme in PMI counts and normalization.
    pub include_indels: bool,
    pub marginal_scope: MarginalScope,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_iters: 15,
            convergence: Convergence::AlignmentsStable,
            epsilon: 1e-6,
            delta: 0.5,
            include_indels: true,
            marginal_scope: MarginalScope::NonMatching,
        }
    }
}

/// Joint/marginal probabilities and PMI over the inventory (gap included).
/// Entries with no probability mass hold NaN in `pmi`.
#[derive(Debug, Clone)]
pub struct PmiTable {
    n: usize,
    joint: Vec<f64>,
    marg: Vec<f64>,
    pmi: Vec<f64>,
}

impl PmiTable {
    pub fn inventory_len(&self) -> usize {
        self.n
    }

    pub fn joint(&self, x: usize, y: usize) -> f64 {
        self.joint[x * self.n + y]
    }

    pub fn marginal(&self, x: usize) -> f64 {
        self.marg[x]
    }

    /// NaN where undefined (no mass for the pair).
    pub fn pmi(&self, x: usize, y: usize) -> f64 {
        self.pmi[x * self.n + y]
    }
}

fn pair_eligible(x: usize, y: usize, include_indels: bool) -> bool {
    if x == y {
        return false;
    }
    if !include_indels && (x == GAP.index() || y == GAP.index()) {
        return false;
    }
    true
}

/// Estimate PMI from a corpus of alignments.
///
/// Pairs with x == y are excluded from the joint counts. With
/// `include_indels`, gap pairs are counted like any other non-matching pair.
pub fn estimate_pmi(
    alignments: &[Alignment],
    n: usize,
    cfg: &TrainConfig,
) -> Result<PmiTable, PmiError> {
    let mut pair_counts = vec![0.0f64; n * n]; // symmetric, both cells carry the unordered count
    let mut occ = vec![0.0f64; n];
    let mut occ_all = vec![0.0f64; n];
    let mut total_pairs = 0.0f64;
    let mut total_all = 0.0f64;

    for al in alignments {
        for &(x, y) in &al.pairs {
            let (xi, yi) = (x.index(), y.index());
            occ_all[xi] += 1.0;
            occ_all[yi] += 1.0;
            total_all += 1.0;
            if !pair_eligible(xi, yi, cfg.include_indels) {
                continue;
            }
            pair_counts[xi * n + yi] += 1.0;
            if xi != yi {
                pair_counts[yi * n + xi] += 1.0;
            }
            occ[xi] += 1.0;
            occ[yi] += 1.0;
            total_pairs += 1.0;
        }
    }

    if total_pairs == 0.0 && cfg.delta == 0.0 {
        return Err(PmiError::EmptyCounts);
    }

    // add-delta smoothing over every eligible unordered pair
    if cfg.delta > 0.0 {
        for x in 0..n {
            for y in (x + 1)..n {
                if !pair_eligible(x, y, cfg.include_indels) {
                    continue;
                }
                pair_counts[x * n + y] += cfg.delta;
                pair_counts[y * n + x] += cfg.delta;
                occ[x] += cfg.delta;
                occ[y] += cfg.delta;
                occ_all[x] += cfg.delta;
                occ_all[y] += cfg.delta;
                total_pairs += cfg.delta;
                total_all += cfg.delta;
            }
        }
    }

    let mut joint = vec![0.0f64; n * n];
    for i in 0..n * n {
        joint[i] = pair_counts[i] / total_pairs;
    }
    let marg: Vec<f64> = match cfg.marginal_scope {
        MarginalScope::NonMatching => occ.iter().map(|&c| c / (2.0 * total_pairs)).collect(),
        MarginalScope::All => occ_all.iter().map(|&c| c / (2.0 * total_all)).collect(),
    };

    let mut pmi = vec![f64::NAN; n * n];
    for x in 0..n {
        for y in 0..n {
            let j = joint[x * n + y];
            if j > 0.0 && marg[x] > 0.0 && marg[y] > 0.0 {
                pmi[x * n + y] = (j / (marg[x] * marg[y])).log2();
            }
        }
    }

    Ok(PmiTable {
        n,
        joint,
        marg,
        pmi,
    })
}

/// Invert and min-max rescale PMI into edit costs in [0,1].
///
/// The most confusable pair (max PMI) gets cost 0, the least (min PMI) cost 1.
/// Unseen pairs get cost 1. When the PMI range is degenerate the table falls
/// back to unit weights with a warning.
pub fn pmi_to_weights(p: &PmiTable, include_indels: bool) -> WeightTable {
    let n = p.n;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in 0..n {
        for y in 0..n {
            let v = p.pmi[x * n + y];
            if pair_eligible(x, y, include_indels) && v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    if !lo.is_finite() || !hi.is_finite() || hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        log::warn!("degenerate PMI range ({lo}..{hi}); falling back to unit weights");
        return WeightTable::unit_n(n);
    }
    let span = hi - lo;
    let mut cost = vec![1.0; n * n];
    for x in 0..n {
        for y in 0..n {
            if x == y {
                cost[x * n + y] = 0.0;
                continue;
            }
            let v = p.pmi[x * n + y];
            if pair_eligible(x, y, include_indels) && v.is_finite() {
                cost[x * n + y] = (hi - v) / span;
            }
            // ineligible or unseen pairs (indels when excluded) keep cost 1
        }
    }
    WeightTable::from_costs(n, &cost)
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub weights: WeightTable,
    pub iterations: usize,
    pub converged: bool,
}

/// Iteratively refine edit weights on a corpus of (predicted, reference) pairs.
///
/// Starts from unit weights; each pass aligns the whole corpus, re-estimates
/// PMI, and rebuilds the weight table, until the configured criterion fires or
/// `max_iters` is hit (reported via `converged: false`).
pub fn train_weights(
    corpus: &[(PhonemeSeq, PhonemeSeq)],
    n: usize,
    cfg: &TrainConfig,
) -> Result<TrainOutcome, PmiError> {
    if corpus.is_empty() {
        return Err(PmiError::EmptyCorpus);
    }
    let mut weights = WeightTable::unit_n(n);
    let mut prev_paths: Option<Vec<Vec<AlignedPair>>> = None;

    for iter in 1..=cfg.max_iters {
        let alignments: Vec<Alignment> = corpus
            .iter()
            .map(|(a, b)| align(a, b, &weights).expect("corpus labels fit the inventory"))
            .collect();
        let paths: Vec<Vec<AlignedPair>> = alignments.iter().map(|al| al.pairs.clone()).collect();

        if cfg.convergence == Convergence::AlignmentsStable && prev_paths.as_ref() == Some(&paths) {
            return Ok(TrainOutcome {
                weights,
                iterations: iter,
                converged: true,
            });
        }

        let has_nonmatching = alignments
            .iter()
            .flat_map(|al| al.pairs.iter())
            .any(|&(x, y)| x != y);
        if !has_nonmatching {
            // nothing to learn from; unit weights are already the fixed point
            return Ok(TrainOutcome {
                weights: WeightTable::unit_n(n),
                iterations: iter,
                converged: true,
            });
        }

        let pmi = estimate_pmi(&alignments, n, cfg)?;
        let next = pmi_to_weights(&pmi, cfg.include_indels);

        if cfg.convergence == Convergence::WeightDelta {
            let delta = max_abs_delta(&weights, &next, n);
            if delta < cfg.epsilon {
                return Ok(TrainOutcome {
                    weights: next,
                    iterations: iter,
                    converged: true,
                });
            }
        }

        weights = next;
        prev_paths = Some(paths);
    }

    Ok(TrainOutcome {
        weights,
        iterations: cfg.max_iters,
        converged: false,
    })
}

fn max_abs_delta(a: &WeightTable, b: &WeightTable, n: usize) -> f64 {
    use crate::inventory::PhonemeLabel;
    let mut d: f64 = 0.0;
    for x in 0..n as u16 {
        for y in 0..n as u16 {
            if x == y {
                continue;
            }
            let (px, py) = (PhonemeLabel(x), PhonemeLabel(y));
            d = d.max((a.cost(px, py) - b.cost(px, py)).abs());
        }
    }
    d
}

/// Per-utterance normalized distances for one speaker, both weightings.
#[derive(Debug, Clone)]
pub struct UttDistances {
    pub utterance_id: String,
    pub ld_us: f64,
    pub ld_uk: f64,
    pub pmi_ld_us: f64,
    pub pmi_ld_uk: f64,
}

/// Per-speaker accent-strength summary. `relative` is PMI-LD against the US
/// dictionary minus PMI-LD against the UK dictionary; positive values lean UK.
#[derive(Debug, Clone)]
pub struct AccentScore {
    pub speaker_id: String,
    pub ld_us: f64,
    pub ld_uk: f64,
    pub pmi_ld_us: f64,
    pub pmi_ld_uk: f64,
    pub relative: f64,
    pub n_utts: usize,
}

/// Average per-utterance distances into one speaker score.
pub fn speaker_accent_score(
    speaker_id: impl Into<String>,
    per_utt: &[UttDistances],
) -> Result<AccentScore, PmiError> {
    if per_utt.is_empty() {
        return Err(PmiError::EmptyScoreInput);
    }
    let n = per_utt.len() as f64;
    let mean = |f: fn(&UttDistances) -> f64| per_utt.iter().map(f).sum::<f64>() / n;
    let pmi_ld_us = mean(|u| u.pmi_ld_us);
    let pmi_ld_uk = mean(|u| u.pmi_ld_uk);
    Ok(AccentScore {
        speaker_id: speaker_id.into(),
        ld_us: mean(|u| u.ld_us),
        ld_uk: mean(|u| u.ld_uk),
        pmi_ld_us,
        pmi_ld_uk,
        relative: pmi_ld_us - pmi_ld_uk,
        n_utts: per_utt.len(),
    })
}
