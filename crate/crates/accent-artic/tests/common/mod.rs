//! Shared synthetic corpus generation for integration tests.
//!
//! Builds an on-disk corpus of speakers with a latent accent parameter theta
//! in [0, 1]: predicted phone strings mutate the US reference toward the UK
//! reference at rate theta, and the jaw-height channel carries a planted
//! articulatory gesture whose equilibrium tracks theta inside one vowel's
//! segments. Every other channel is accent-independent noise.
#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const N_SPEAKERS: usize = 20;
pub const UTTS_PER_SPEAKER: usize = 10;
pub const RATE: f64 = 50.0;
pub const UTT_SECONDS: f64 = 2.0;
/// Vowels receiving segments in every utterance; "a" carries the planted effect.
pub const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];
pub const PLANTED_VOWEL: &str = "a";
pub const PLANTED_FEATURE: &str = "JAW";
/// Planted equilibrium slope: T = PLANTED_SLOPE * theta + noise.
pub const PLANTED_SLOPE: f64 = 2.0;

const CONSONANTS: [&str; 6] = ["p", "t", "k", "s", "m", "r"];

/// US -> UK token substitutions that define the synthetic dialect difference.
fn uk_variant(token: &str) -> &str {
    match token {
        "r" => "l",
        "a" => "o",
        "i" => "e",
        _ => token,
    }
}

pub fn theta(speaker: usize) -> f64 {
    speaker as f64 / (N_SPEAKERS - 1) as f64
}

/// Critically damped step response used for the planted gesture.
fn gesture(x0: f64, target: f64, sqrt_k: f64, onset: f64, t: f64) -> f64 {
    let r = (t - onset).max(0.0);
    let q = sqrt_k * r;
    x0 + (target - x0) * (1.0 - (1.0 + q) * (-q).exp())
}

/// Write a full corpus under `dir`; returns the manifest path.
pub fn generate_corpus(dir: &Path, seed: u64) -> std::path::PathBuf {
    generate_corpus_sized(dir, seed, N_SPEAKERS, UTTS_PER_SPEAKER)
}

/// Like [`generate_corpus`] with explicit speaker and utterance counts.
pub fn generate_corpus_sized(
    dir: &Path,
    seed: u64,
    n_speakers: usize,
    utts_per_speaker: usize,
) -> std::path::PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fs::create_dir_all(dir.join("phones")).unwrap();
    fs::create_dir_all(dir.join("ema")).unwrap();
    fs::create_dir_all(dir.join("segments")).unwrap();

    let mut manifest = String::from("schema_version = 1\n");
    for s in 0..n_speakers {
        let accent = if s < n_speakers / 2 { "US" } else { "UK" };
        let _ = writeln!(
            manifest,
            "\n[[speakers]]\nid = \"spk{s:02}\"\naccent = \"{accent}\""
        );
    }

    for s in 0..n_speakers {
        let th = s as f64 / (n_speakers - 1).max(1) as f64;
        for u in 0..utts_per_speaker {
            let utt_id = format!("spk{s:02}_u{u:02}");
            write_phones(dir, &utt_id, th, &mut rng);
            write_segments(dir, &utt_id, s);
            write_ema(dir, &utt_id, th, &mut rng);
            let _ = writeln!(
                manifest,
                "\n[[utterances]]\nid = \"{utt_id}\"\nspeaker = \"spk{s:02}\"\n\
                 phones = \"phones/{utt_id}.csv\"\nema = \"ema/{utt_id}.csv\"\n\
                 segments = \"segments/{utt_id}.csv\""
            );
        }
    }

    let manifest_path = dir.join("manifest.toml");
    fs::write(&manifest_path, manifest).unwrap();
    manifest_path
}

fn write_phones(dir: &Path, utt_id: &str, th: f64, rng: &mut ChaCha8Rng) {
    // US reference: alternating consonant/vowel, 10 tokens
    let mut us = Vec::new();
    for i in 0..10 {
        if i % 2 == 0 {
            us.push(*CONSONANTS.choose(rng).unwrap());
        } else {
            us.push(*VOWELS.choose(rng).unwrap());
        }
    }
    let uk: Vec<&str> = us.iter().map(|t| uk_variant(t)).collect();
    let pred: Vec<&str> = us
        .iter()
        .zip(&uk)
        .map(|(&a, &b)| if rng.gen::<f64>() < th { b } else { a })
        .collect();

    let content = format!(
        "utterance_id,source,phones\n{utt_id},pred,{}\n{utt_id},ref_us,{}\n{utt_id},ref_uk,{}\n",
        pred.join(" "),
        us.join(" "),
        uk.join(" ")
    );
    fs::write(dir.join("phones").join(format!("{utt_id}.csv")), content).unwrap();
}

/// Segment layout: one segment per vowel, fixed positions.
pub fn segment_bounds(vowel_index: usize) -> (f64, f64) {
    let start = 0.2 + 0.36 * vowel_index as f64;
    (start, start + 0.24)
}

fn write_segments(dir: &Path, utt_id: &str, speaker: usize) {
    let mut s = String::from("utterance_id,speaker_id,phone,word,t_start,t_end\n");
    for (vi, v) in VOWELS.iter().enumerate() {
        let (t0, t1) = segment_bounds(vi);
        let _ = writeln!(s, "{utt_id},spk{speaker:02},{v},w{vi},{t0:.3},{t1:.3}");
    }
    fs::write(dir.join("segments").join(format!("{utt_id}.csv")), s).unwrap();
}

fn write_ema(dir: &Path, utt_id: &str, th: f64, rng: &mut ChaCha8Rng) {
    let n_frames = (UTT_SECONDS * RATE) as usize;
    // smooth accent-independent noise per channel: sum of two sinusoids with
    // random phase plus small jitter
    let mut phases = [[0.0f64; 2]; 12];
    let mut freqs = [[0.0f64; 2]; 12];
    for c in 0..12 {
        for j in 0..2 {
            phases[c][j] = rng.gen::<f64>() * std::f64::consts::TAU;
            freqs[c][j] = 0.5 + rng.gen::<f64>() * 2.5;
        }
    }
    let channel_noise = |c: usize, t: f64, jitter: f64| -> f64 {
        0.5 * (std::f64::consts::TAU * freqs[c][0] * t + phases[c][0]).sin()
            + 0.3 * (std::f64::consts::TAU * freqs[c][1] * t + phases[c][1]).sin()
            + jitter
    };

    // planted gesture inside each "a" segment on the jaw channel (LIy, col 5)
    let planted_index = VOWELS.iter().position(|v| *v == PLANTED_VOWEL).unwrap();
    let (seg_t0, seg_t1) = segment_bounds(planted_index);
    let target = PLANTED_SLOPE * th + 0.05 * rng.gen::<f64>();
    let sqrt_k = 8.0 / (seg_t1 - seg_t0);
    let onset = seg_t0 + 0.02;

    let mut s = String::from("t,ULx,ULy,LLx,LLy,LIx,LIy,TTx,TTy,TBx,TBy,TDx,TDy\n");
    for i in 0..n_frames {
        let t = i as f64 / RATE;
        let _ = write!(s, "{t:.4}");
        for c in 0..12 {
            let jitter = (rng.gen::<f64>() - 0.5) * 0.02;
            let mut v = channel_noise(c, t, jitter);
            if c == 5 && t >= seg_t0 - 0.1 && t < seg_t1 + 0.1 {
                // hold the jaw on the planted gesture around the "a" segment
                let x0 = channel_noise(5, seg_t0 - 0.1, 0.0);
                v = gesture(x0, target, sqrt_k, onset, t) + jitter * 0.1;
            }
            let _ = write!(s, ",{v:.8}");
        }
        s.push('\n');
    }
    fs::write(dir.join("ema").join(format!("{utt_id}.csv")), s).unwrap();
}

/// Test configuration matching the synthetic inventory.
pub fn test_config() -> accent_artic::Config {
    let mut cfg = accent_artic::Config::default();
    cfg.analysis.vowels = VOWELS.iter().map(|v| v.to_string()).collect();
    cfg
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (rank_pos, &i) in idx.iter().enumerate() {
            r[i] = rank_pos as f64;
        }
        r
    };
    let rx = rank(x);
    let ry = rank(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}
