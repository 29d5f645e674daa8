//! End-to-end pipeline on generated files: manifest + phones + EMA + segments
//! in, report tables out.
//!
//! Six synthetic speakers span a US-to-UK accent continuum; the jaw channel
//! carries a planted gesture whose target tracks the accent parameter inside
//! the vowel "a". The run should surface that (a, JAW) association.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use accent_artic::ingest::ingest;
use accent_artic::report::write_report;
use accent_artic::{run_pipeline, Config};

const SPEAKERS: usize = 6;
const UTTS: usize = 4;
const RATE: f64 = 50.0;

fn uk_variant(tok: &str) -> &str {
    match tok {
        "r" => "l",
        "a" => "o",
        _ => tok,
    }
}

fn generate(dir: &Path, rng: &mut ChaCha8Rng) -> std::path::PathBuf {
    for sub in ["phones", "ema", "segments"] {
        fs::create_dir_all(dir.join(sub)).unwrap();
    }
    let consonants = ["p", "t", "k", "s", "r"];
    let vowels = ["a", "i"];
    let mut manifest = String::from("schema_version = 1\n");
    for s in 0..SPEAKERS {
        let accent = if s < SPEAKERS / 2 { "US" } else { "UK" };
        let _ = writeln!(manifest, "\n[[speakers]]\nid = \"s{s}\"\naccent = \"{accent}\"");
    }
    for s in 0..SPEAKERS {
        let theta = s as f64 / (SPEAKERS - 1) as f64;
        for u in 0..UTTS {
            let id = format!("s{s}_u{u}");

            // phones: pred drifts from the US reference toward the UK one
            let us: Vec<&str> = (0..8)
                .map(|i| {
                    if i % 2 == 0 {
                        *consonants.choose(rng).unwrap()
                    } else {
                        *vowels.choose(rng).unwrap()
                    }
                })
                .collect();
            let uk: Vec<&str> = us.iter().map(|t| uk_variant(t)).collect();
            let pred: Vec<&str> = us
                .iter()
                .zip(&uk)
                .map(|(&a, &b)| if rng.gen::<f64>() < theta { b } else { a })
                .collect();
            fs::write(
                dir.join("phones").join(format!("{id}.csv")),
                format!(
                    "utterance_id,source,phones\n{id},pred,{}\n{id},ref_us,{}\n{id},ref_uk,{}\n",
                    pred.join(" "),
                    us.join(" "),
                    uk.join(" ")
                ),
            )
            .unwrap();

            // segments: one "a" and one "i" per utterance
            fs::write(
                dir.join("segments").join(format!("{id}.csv")),
                format!(
                    "utterance_id,speaker_id,phone,word,t_start,t_end\n\
                     {id},s{s},a,w0,0.20,0.44\n{id},s{s},i,w1,0.60,0.84\n"
                ),
            )
            .unwrap();

            // EMA: sinusoidal noise everywhere except the planted jaw gesture
            let target = 2.0 * theta + 0.05 * rng.gen::<f64>();
            let mut phases = [0.0; 12];
            for p in phases.iter_mut() {
                *p = rng.gen::<f64>() * std::f64::consts::TAU;
            }
            let mut ema = String::from("t,ULx,ULy,LLx,LLy,LIx,LIy,TTx,TTy,TBx,TBy,TDx,TDy\n");
            for i in 0..(1.2 * RATE) as usize {
                let t = i as f64 / RATE;
                let _ = write!(ema, "{t:.4}");
                for (c, phase) in phases.iter().enumerate() {
                    let mut v = 0.5 * (6.0 * t + phase).sin() + 0.01 * rng.gen::<f64>();
                    if c == 5 && (0.1..0.54).contains(&t) {
                        let r = (t - 0.22f64).max(0.0);
                        let q = 33.0 * r;
                        let x0 = 0.5 * (6.0 * 0.1 + phase).sin();
                        v = x0 + (target - x0) * (1.0 - (1.0 + q) * (-q).exp());
                    }
                    let _ = write!(ema, ",{v:.8}");
                }
                ema.push('\n');
            }
            fs::write(dir.join("ema").join(format!("{id}.csv")), ema).unwrap();

            let _ = writeln!(
                manifest,
                "\n[[utterances]]\nid = \"{id}\"\nspeaker = \"s{s}\"\n\
                 phones = \"phones/{id}.csv\"\nema = \"ema/{id}.csv\"\n\
                 segments = \"segments/{id}.csv\""
            );
        }
    }
    let path = dir.join("manifest.toml");
    fs::write(&path, manifest).unwrap();
    path
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let manifest = generate(dir.path(), &mut rng);
    println!("generated corpus under {}", dir.path().display());

    let mut cfg = Config::default();
    cfg.analysis.vowels = vec!["a".into(), "i".into()];
    let outcome = ingest(&manifest, &cfg).expect("ingest");
    assert!(outcome.file_errors.is_empty());
    println!(
        "ingested {} utterances from {} speakers",
        outcome.corpus.utterances.len(),
        outcome.corpus.speakers.len()
    );

    let mut report = run_pipeline(&outcome.corpus, &cfg, 0).expect("pipeline");
    report.provenance = outcome.provenance;

    println!("\naccent scores:");
    for s in &report.accent_scores {
        println!(
            "  {}: pmi_ld_us {:.3}, pmi_ld_uk {:.3}, relative {:+.3}",
            s.speaker_id, s.pmi_ld_us, s.pmi_ld_uk, s.relative
        );
    }

    println!("\nsignificant cells (p < 0.05):");
    for c in &report.cells {
        if let Some(r) = &c.result {
            if r.p < 0.05 {
                println!(
                    "  vowel {} feature {} stat {} measure {}: R = {:+.3}, p = {:.4}",
                    c.vowel,
                    c.feature,
                    c.statistic.as_str(),
                    c.measure.as_str(),
                    r.r,
                    r.p
                );
            }
        }
    }

    let out = dir.path().join("report");
    let written = write_report(&report, &out).expect("write report");
    println!("\nwrote {} report tables under {}", written.len(), out.display());
}
