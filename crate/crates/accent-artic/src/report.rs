//! Report serialization: delimited plot-data files plus a config echo.
//!
//! No rendering happens here; the CSV outputs are the analogues of the
//! per-speaker distance distributions, per-cell regression scatters, and the
//! significance summary grid.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::PipelineError;
use crate::pipeline::Report;

fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf, PipelineError> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| PipelineError::Io(path.clone(), e))?;
    Ok(path)
}

fn fmt_f(v: f64) -> String {
    // full round-trip precision so reruns are byte-comparable
    format!("{v:.12e}")
}

/// Write every report table under `out_dir`. Returns the paths written.
pub fn write_report(report: &Report, out_dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    fs::create_dir_all(out_dir).map_err(|e| PipelineError::Io(out_dir.to_path_buf(), e))?;
    let mut written = Vec::new();

    written.push(write_file(out_dir, "accent_scores.csv", &accent_scores_csv(report))?);
    written.push(write_file(
        out_dir,
        "per_utterance_distances.csv",
        &per_utterance_csv(report),
    )?);
    written.push(write_file(
        out_dir,
        "regression_cells.csv",
        &cells_csv(report),
    )?);
    written.push(write_file(out_dir, "scatter_points.csv", &scatter_csv(report))?);
    written.push(write_file(out_dir, "summary_table.csv", &summary_csv(report))?);
    written.push(write_file(out_dir, "gesture_fits.csv", &fits_csv(report))?);
    written.push(write_file(out_dir, "training.csv", &training_csv(report))?);
    written.push(write_file(out_dir, "provenance.csv", &provenance_csv(report))?);
    written.push(write_file(out_dir, "run_config.toml", &config_echo(report)?)?);
    Ok(written)
}

pub fn accent_scores_csv(report: &Report) -> String {
    let mut s = String::from("speaker_id,ld_us,ld_uk,pmi_ld_us,pmi_ld_uk,relative,n_utts\n");
    for a in &report.accent_scores {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            a.speaker_id,
            fmt_f(a.ld_us),
            fmt_f(a.ld_uk),
            fmt_f(a.pmi_ld_us),
            fmt_f(a.pmi_ld_uk),
            fmt_f(a.relative),
            a.n_utts
        );
    }
    s
}

fn per_utterance_csv(report: &Report) -> String {
    let mut s = String::from("speaker_id,utterance_id,ld_us,ld_uk,pmi_ld_us,pmi_ld_uk\n");
    for (spk, utts) in &report.per_utterance {
        for u in utts {
            let _ = writeln!(
                s,
                "{spk},{},{},{},{},{}",
                u.utterance_id,
                fmt_f(u.ld_us),
                fmt_f(u.ld_uk),
                fmt_f(u.pmi_ld_us),
                fmt_f(u.pmi_ld_uk)
            );
        }
    }
    s
}

pub fn cells_csv(report: &Report) -> String {
    let mut s = String::from(
        "vowel,feature,statistic,measure,status,n,slope,intercept,r,r2,p\n",
    );
    for c in &report.cells {
        match &c.result {
            Some(r) => {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    c.vowel,
                    c.feature,
                    c.statistic.as_str(),
                    c.measure.as_str(),
                    c.status.as_str(),
                    r.n,
                    fmt_f(r.slope),
                    fmt_f(r.intercept),
                    fmt_f(r.r),
                    fmt_f(r.r2),
                    fmt_f(r.p)
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},,,,,,",
                    c.vowel,
                    c.feature,
                    c.statistic.as_str(),
                    c.measure.as_str(),
                    c.status.as_str()
                );
            }
        }
    }
    s
}

fn scatter_csv(report: &Report) -> String {
    let mut s = String::from("vowel,feature,statistic,measure,speaker_id,x,y\n");
    for p in &report.scatter {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            p.vowel,
            p.feature,
            p.statistic.as_str(),
            p.measure.as_str(),
            p.speaker_id,
            fmt_f(p.x),
            fmt_f(p.y)
        );
    }
    s
}

pub fn summary_csv(report: &Report) -> String {
    let mut s = String::from("measure,vowel,feature,statistic,direction,strong,significant\n");
    for (measure, c) in &report.summary {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            measure.as_str(),
            c.vowel,
            c.feature,
            c.statistic.as_str(),
            c.direction.as_str(),
            c.strong,
            c.significant
        );
    }
    s
}

fn fits_csv(report: &Report) -> String {
    let mut s = String::from(
        "utterance_id,speaker_id,vowel,segment_index,feature,mean,target,stiffness,onset,weighted_mse,converged,widened\n",
    );
    for f in &report.fits {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            f.utterance_id,
            f.speaker_id,
            f.vowel,
            f.segment_index,
            f.feature,
            fmt_f(f.mean),
            fmt_f(f.target),
            fmt_f(f.stiffness),
            fmt_f(f.onset),
            fmt_f(f.weighted_mse),
            f.converged,
            f.widened
        );
    }
    s
}

fn training_csv(report: &Report) -> String {
    let mut s = String::from("dictionary,iterations,converged\n");
    let _ = writeln!(
        s,
        "us,{},{}",
        report.train_us_iterations, report.train_us_converged
    );
    let _ = writeln!(
        s,
        "uk,{},{}",
        report.train_uk_iterations, report.train_uk_converged
    );
    let _ = writeln!(s, "# regressions_run,{}", report.n_tests);
    for (measure, count) in &report.significant_per_measure {
        let _ = writeln!(s, "# significant_{measure},{count}");
    }
    let _ = writeln!(s, "# nan_frames_dropped,{}", report.nan_frames_dropped);
    s
}

fn provenance_csv(report: &Report) -> String {
    let mut s = String::from("path,sha256\n");
    for (path, hash) in &report.provenance {
        let _ = writeln!(s, "{},{hash}", path.display());
    }
    s
}

fn config_echo(report: &Report) -> Result<String, PipelineError> {
    let cfg = toml::to_string_pretty(&report.config)
        .map_err(|e| PipelineError::Config(format!("cannot serialize config: {e}")))?;
    Ok(format!("seed = {}\n\n{cfg}", report.seed))
}
