//! Command-line front end for the accent/articulation pipeline.
//!
//! Exit codes: 0 success, 1 input error, 2 numerical failure, 3 config error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use accent_artic::config::{Config, MeasureSel, StatSel};
use accent_artic::error::PipelineError;
use accent_artic::ingest::{ingest, IngestOutcome};
use accent_artic::pipeline::{
    compute_fits, compute_reparam, compute_scores, compute_weights, run_pipeline,
};
use accent_artic::report::{self, write_report};
use accent_artic::reparam::REPARAM_CHANNELS;

#[derive(Parser)]
#[command(name = "accent-artic", version, about = "Accent strength vs articulatory features")]
struct Cli {
    /// TOML run configuration; defaults apply when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed echoed into the report; the pipeline itself is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory for report files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Accent measures to analyze.
    #[arg(long, global = true, value_enum)]
    measure: Option<MeasureArg>,
    /// Per-segment statistics to analyze.
    #[arg(long, global = true, value_enum)]
    stat: Option<StatArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Us,
    Relative,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatArg {
    Mean,
    T,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Train PMI edit weights against both dictionaries.
    TrainWeights { manifest: PathBuf },
    /// Compute per-utterance distances and per-speaker accent scores.
    Score { manifest: PathBuf },
    /// Reparameterize EMA tracks into the 9 feature channels.
    Reparam { manifest: PathBuf },
    /// Fit gesture targets per vowel segment and channel.
    Fit { manifest: PathBuf },
    /// Run the regression grid and write cell tables.
    Regress { manifest: PathBuf },
    /// Write the significance summary grid.
    Report { manifest: PathBuf },
    /// Full pipeline: everything above into one report.
    Run { manifest: PathBuf },
}

fn load_config(cli: &Cli) -> Result<Config, PipelineError> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(m) = cli.measure {
        cfg.analysis.measures = match m {
            MeasureArg::Us => MeasureSel::Us,
            MeasureArg::Relative => MeasureSel::Relative,
            MeasureArg::Both => MeasureSel::Both,
        };
    }
    if let Some(s) = cli.stat {
        cfg.analysis.statistics = match s {
            StatArg::Mean => StatSel::Mean,
            StatArg::T => StatSel::T,
            StatArg::Both => StatSel::Both,
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_corpus(manifest: &PathBuf, cfg: &Config) -> Result<IngestOutcome, PipelineError> {
    let outcome = ingest(manifest, cfg)?;
    if !outcome.file_errors.is_empty() {
        for e in &outcome.file_errors {
            eprintln!("input error: {e}");
        }
        return Err(PipelineError::Ingest(
            outcome.file_errors.into_iter().next().unwrap(),
        ));
    }
    if outcome.nan_frames_dropped > 0 {
        eprintln!("note: dropped {} NaN frames", outcome.nan_frames_dropped);
    }
    Ok(outcome)
}

fn write_out(out: &PathBuf, name: &str, content: &str) -> Result<(), PipelineError> {
    std::fs::create_dir_all(out).map_err(|e| PipelineError::Io(out.clone(), e))?;
    let path = out.join(name);
    std::fs::write(&path, content).map_err(|e| PipelineError::Io(path.clone(), e))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run(cli: &Cli) -> Result<(), PipelineError> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::TrainWeights { manifest } => {
            let outcome = load_corpus(manifest, &cfg)?;
            let corpus = &outcome.corpus;
            let trained = compute_weights(corpus, &cfg)?;
            for (name, t) in [("us", &trained.us), ("uk", &trained.uk)] {
                let mut s = String::from("phone_a,phone_b,cost\n");
                let labels: Vec<_> = std::iter::once(accent_artic::GAP)
                    .chain(corpus.inventory.labels())
                    .collect();
                for &a in &labels {
                    for &b in &labels {
                        if a == b {
                            continue;
                        }
                        s.push_str(&format!(
                            "{},{},{:.12e}\n",
                            corpus.inventory.symbol(a),
                            corpus.inventory.symbol(b),
                            t.weights.cost(a, b)
                        ));
                    }
                }
                write_out(&cli.out, &format!("weights_{name}.csv"), &s)?;
                println!(
                    "{name}: {} iterations, converged = {}",
                    t.iterations, t.converged
                );
            }
            Ok(())
        }
        Command::Score { manifest } => {
            let outcome = load_corpus(manifest, &cfg)?;
            let trained = compute_weights(&outcome.corpus, &cfg)?;
            let (per_utt, scores) = compute_scores(&outcome.corpus, &trained)?;
            let mut s = String::from("speaker_id,ld_us,ld_uk,pmi_ld_us,pmi_ld_uk,relative,n_utts\n");
            for a in &scores {
                s.push_str(&format!(
                    "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}\n",
                    a.speaker_id, a.ld_us, a.ld_uk, a.pmi_ld_us, a.pmi_ld_uk, a.relative, a.n_utts
                ));
            }
            write_out(&cli.out, "accent_scores.csv", &s)?;
            let mut p = String::from("speaker_id,utterance_id,ld_us,ld_uk,pmi_ld_us,pmi_ld_uk\n");
            for (spk, utts) in &per_utt {
                for u in utts {
                    p.push_str(&format!(
                        "{spk},{},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                        u.utterance_id, u.ld_us, u.ld_uk, u.pmi_ld_us, u.pmi_ld_uk
                    ));
                }
            }
            write_out(&cli.out, "per_utterance_distances.csv", &p)
        }
        Command::Reparam { manifest } => {
            let outcome = load_corpus(manifest, &cfg)?;
            let (_bases, tracks) = compute_reparam(&outcome.corpus, &cfg)?;
            for (utt_id, track) in &tracks {
                let mut s = String::from("t,");
                s.push_str(&REPARAM_CHANNELS.join(","));
                s.push('\n');
                for (i, f) in track.frames.iter().enumerate() {
                    s.push_str(&format!("{:.6}", track.frame_time(i)));
                    for v in f {
                        s.push_str(&format!(",{v:.12e}"));
                    }
                    s.push('\n');
                }
                let dir = cli.out.join("reparam");
                std::fs::create_dir_all(&dir).map_err(|e| PipelineError::Io(dir.clone(), e))?;
                let path = dir.join(format!("{utt_id}.csv"));
                std::fs::write(&path, s).map_err(|e| PipelineError::Io(path, e))?;
            }
            println!("wrote {} tracks under {}", tracks.len(), cli.out.join("reparam").display());
            Ok(())
        }
        Command::Fit { manifest } => {
            let outcome = load_corpus(manifest, &cfg)?;
            let (_bases, tracks) = compute_reparam(&outcome.corpus, &cfg)?;
            let fits = compute_fits(&outcome.corpus, &cfg, &tracks)?;
            let mut s = String::from(
                "utterance_id,speaker_id,vowel,segment_index,feature,mean,target,stiffness,onset,weighted_mse,converged\n",
            );
            for f in &fits {
                s.push_str(&format!(
                    "{},{},{},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}\n",
                    f.utterance_id,
                    f.speaker_id,
                    f.vowel,
                    f.segment_index,
                    f.feature,
                    f.mean,
                    f.target,
                    f.stiffness,
                    f.onset,
                    f.weighted_mse,
                    f.converged
                ));
            }
            write_out(&cli.out, "gesture_fits.csv", &s)
        }
        Command::Regress { manifest } => {
            let outcome = load_corpus(manifest, &cfg)?;
            let report = run_pipeline(&outcome.corpus, &cfg, cli.seed)?;
            write_out(&cli.out, "regression_cells.csv", &report::cells_csv(&report))
        }
        Command::Report { manifest } => {
            let outcome = load_corpus(manifest, &cfg)?;
            let report = run_pipeline(&outcome.corpus, &cfg, cli.seed)?;
            write_out(&cli.out, "summary_table.csv", &report::summary_csv(&report))?;
            write_out(&cli.out, "regression_cells.csv", &report::cells_csv(&report))
        }
        Command::Run { manifest } => {
            let outcome = load_corpus(manifest, &cfg)?;
            let mut report = run_pipeline(&outcome.corpus, &cfg, cli.seed)?;
            report.provenance = outcome.provenance;
            report.nan_frames_dropped = outcome.nan_frames_dropped;
            let written = write_report(&report, &cli.out)?;
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
