//! Corpus ingestion: manifest, phone files, segment files, EMA files.
//!
//! All inputs are UTF-8 delimiter-separated text with a header row. The
//! manifest is a TOML document mapping utterance ids to file paths plus
//! per-speaker accent labels. Paths are resolved relative to the manifest.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::error::IngestError;
use crate::inventory::{Inventory, PhonemeLabel, PhonemeSeq};
use crate::reparam::EmaTrack;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AccentLabel {
    Us,
    Uk,
    Other,
}

impl AccentLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            AccentLabel::Us => "US",
            AccentLabel::Uk => "UK",
            AccentLabel::Other => "other",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Speaker {
    pub id: String,
    pub accent: AccentLabel,
}

/// One aligned phoneme segment (times in seconds, labels from the US dictionary).
#[derive(Debug, Clone)]
pub struct SegmentRecord {
    pub utterance_id: String,
    pub speaker_id: String,
    pub phone: PhonemeLabel,
    pub word: String,
    pub t_start: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone)]
pub struct Utterance {
    pub id: String,
    pub speaker_id: String,
    pub pred: PhonemeSeq,
    pub ref_us: PhonemeSeq,
    pub ref_uk: PhonemeSeq,
    pub ema: EmaTrack,
    pub segments: Vec<SegmentRecord>,
}

#[derive(Debug)]
pub struct Corpus {
    pub inventory: Inventory,
    pub speakers: Vec<Speaker>,
    pub utterances: Vec<Utterance>,
}

impl Corpus {
    pub fn speaker(&self, id: &str) -> Option<&Speaker> {
        self.speakers.iter().find(|s| s.id == id)
    }
}

/// Loaded corpus plus per-file problems and provenance hashes.
#[derive(Debug)]
pub struct IngestOutcome {
    pub corpus: Corpus,
    /// Non-fatal per-file errors; affected utterances are excluded.
    pub file_errors: Vec<IngestError>,
    /// NaN frames dropped during EMA cleaning.
    pub nan_frames_dropped: usize,
    /// (path, sha256) for every file read.
    pub provenance: Vec<(PathBuf, String)>,
}

#[derive(Debug, Deserialize)]
struct ManifestDoc {
    schema_version: u32,
    #[serde(default)]
    speakers: Vec<ManifestSpeaker>,
    #[serde(default)]
    utterances: Vec<ManifestUtterance>,
}

#[derive(Debug, Deserialize)]
struct ManifestSpeaker {
    id: String,
    accent: AccentLabel,
}

#[derive(Debug, Deserialize)]
struct ManifestUtterance {
    id: String,
    speaker: String,
    phones: PathBuf,
    ema: PathBuf,
    segments: PathBuf,
}

fn read_hashed(
    path: &Path,
    provenance: &mut Vec<(PathBuf, String)>,
) -> Result<String, IngestError> {
    if !path.exists() {
        return Err(IngestError::MissingFile(path.to_path_buf()));
    }
    let bytes =
        std::fs::read(path).map_err(|e| IngestError::Io(path.to_path_buf(), e))?;
    let hash = format!("{:x}", Sha256::digest(&bytes));
    provenance.push((path.to_path_buf(), hash));
    String::from_utf8(bytes).map_err(|e| IngestError::MalformedRow {
        file: path.to_path_buf(),
        line: 0,
        reason: format!("not valid UTF-8: {e}"),
    })
}

struct PhoneRows {
    pred: Option<String>,
    ref_us: Option<String>,
    ref_uk: Option<String>,
}

fn parse_phones_file(
    text: &str,
    path: &Path,
    utterance_id: &str,
) -> Result<PhoneRows, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let malformed = |line: usize, reason: String| IngestError::MalformedRow {
        file: path.to_path_buf(),
        line,
        reason,
    };
    let headers = rdr
        .headers()
        .map_err(|e| malformed(1, e.to_string()))?
        .clone();
    let expect = ["utterance_id", "source", "phones"];
    if headers.iter().collect::<Vec<_>>() != expect {
        return Err(malformed(1, format!("header must be {expect:?}")));
    }
    let mut rows = PhoneRows {
        pred: None,
        ref_us: None,
        ref_uk: None,
    };
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| malformed(line, e.to_string()))?;
        if rec.len() != 3 {
            return Err(malformed(line, format!("expected 3 columns, got {}", rec.len())));
        }
        if &rec[0] != utterance_id {
            return Err(malformed(
                line,
                format!("utterance_id `{}` does not match `{utterance_id}`", &rec[0]),
            ));
        }
        let slot = match &rec[1] {
            "pred" => &mut rows.pred,
            "ref_us" => &mut rows.ref_us,
            "ref_uk" => &mut rows.ref_uk,
            other => {
                return Err(malformed(line, format!("unknown source `{other}`")));
            }
        };
        if slot.is_some() {
            return Err(malformed(line, format!("duplicate source `{}`", &rec[1])));
        }
        *slot = Some(rec[2].to_string());
    }
    Ok(rows)
}

fn parse_seq(
    phones_text: &str,
    utterance_id: &str,
    cfg: &Config,
    inv: &mut Inventory,
    path: &Path,
) -> Result<PhonemeSeq, IngestError> {
    let mapped: Vec<&str> = phones_text
        .split_whitespace()
        .map(|tok| cfg.map_phone(tok))
        .collect();
    let labels = mapped
        .iter()
        .map(|tok| inv.intern(tok))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| IngestError::MalformedRow {
            file: path.to_path_buf(),
            line: 0,
            reason: "phone token empty or reserved".into(),
        })?;
    PhonemeSeq::new(utterance_id, labels).ok_or_else(|| IngestError::MalformedRow {
        file: path.to_path_buf(),
        line: 0,
        reason: "gap symbol inside phoneme sequence".into(),
    })
}

/// Parsed EMA file: frames plus the count of NaN frames dropped.
fn parse_ema_file(
    text: &str,
    path: &Path,
    speaker_id: &str,
    utterance_id: &str,
) -> Result<(EmaTrack, usize), IngestError> {
    let malformed = |line: usize, reason: String| IngestError::MalformedRow {
        file: path.to_path_buf(),
        line,
        reason,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| malformed(1, e.to_string()))?
        .clone();
    if headers.len() != 13 || &headers[0] != "t" {
        return Err(malformed(
            1,
            format!("expected 13 columns starting with `t`, got {}", headers.len()),
        ));
    }
    let mut times = Vec::new();
    let mut frames = Vec::new();
    let mut dropped = 0usize;
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| malformed(line, e.to_string()))?;
        if rec.len() != 13 {
            return Err(malformed(line, format!("expected 13 columns, got {}", rec.len())));
        }
        let mut vals = [0.0f64; 13];
        for (c, field) in rec.iter().enumerate() {
            vals[c] = field
                .parse::<f64>()
                .map_err(|e| malformed(line, format!("column {c}: {e}")))?;
        }
        if vals.iter().any(|v| v.is_nan()) {
            dropped += 1;
            continue;
        }
        times.push(vals[0]);
        let mut frame = [0.0f64; 12];
        frame.copy_from_slice(&vals[1..]);
        frames.push(frame);
    }
    if frames.is_empty() {
        return Err(malformed(0, "no usable frames".into()));
    }
    let t0 = times[0];
    let rate = if times.len() > 1 {
        let span = times[times.len() - 1] - t0;
        if span <= 0.0 {
            return Err(malformed(0, "timestamps are not increasing".into()));
        }
        (times.len() - 1) as f64 / span
    } else {
        50.0
    };
    Ok((
        EmaTrack {
            rate,
            t0,
            frames,
            speaker_id: speaker_id.to_string(),
            utterance_id: utterance_id.to_string(),
        },
        dropped,
    ))
}

fn parse_segments_file(
    text: &str,
    path: &Path,
    utterance_id: &str,
    cfg: &Config,
    inv: &mut Inventory,
) -> Result<Vec<SegmentRecord>, IngestError> {
    let malformed = |line: usize, reason: String| IngestError::MalformedRow {
        file: path.to_path_buf(),
        line,
        reason,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| malformed(1, e.to_string()))?
        .clone();
    let expect = ["utterance_id", "speaker_id", "phone", "word", "t_start", "t_end"];
    if headers.iter().collect::<Vec<_>>() != expect {
        return Err(malformed(1, format!("header must be {expect:?}")));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| malformed(line, e.to_string()))?;
        if rec.len() != 6 {
            return Err(malformed(line, format!("expected 6 columns, got {}", rec.len())));
        }
        if &rec[0] != utterance_id {
            return Err(malformed(
                line,
                format!("utterance_id `{}` does not match `{utterance_id}`", &rec[0]),
            ));
        }
        let phone = inv
            .intern(cfg.map_phone(&rec[2]))
            .ok_or_else(|| malformed(line, "empty or reserved phone token".into()))?;
        let t_start: f64 = rec[4]
            .parse()
            .map_err(|e| malformed(line, format!("t_start: {e}")))?;
        let t_end: f64 = rec[5]
            .parse()
            .map_err(|e| malformed(line, format!("t_end: {e}")))?;
        if !(t_start < t_end) {
            return Err(malformed(line, format!("t_start {t_start} must be < t_end {t_end}")));
        }
        out.push(SegmentRecord {
            utterance_id: rec[0].to_string(),
            speaker_id: rec[1].to_string(),
            phone,
            word: rec[3].to_string(),
            t_start,
            t_end,
        });
    }
    Ok(out)
}

/// Load and validate a corpus from a manifest.
///
/// Manifest-level problems (bad schema, duplicate ids, unknown speakers) fail
/// the load; per-utterance file problems are collected in
/// [`IngestOutcome::file_errors`] and the affected utterances skipped.
pub fn ingest(manifest_path: &Path, cfg: &Config) -> Result<IngestOutcome, IngestError> {
    let mut provenance = Vec::new();
    let text = read_hashed(manifest_path, &mut provenance)?;
    let doc: ManifestDoc = toml::from_str(&text)
        .map_err(|e| IngestError::ManifestParse(manifest_path.to_path_buf(), e.to_string()))?;
    if doc.schema_version != MANIFEST_SCHEMA_VERSION {
        return Err(IngestError::SchemaMismatch(format!(
            "manifest schema version {} (expected {MANIFEST_SCHEMA_VERSION})",
            doc.schema_version
        )));
    }

    let mut speaker_ids = BTreeSet::new();
    for s in &doc.speakers {
        if !speaker_ids.insert(s.id.clone()) {
            return Err(IngestError::SchemaMismatch(format!(
                "duplicate speaker id `{}`",
                s.id
            )));
        }
    }
    let mut utt_ids = BTreeSet::new();
    for u in &doc.utterances {
        if !utt_ids.insert(u.id.clone()) {
            return Err(IngestError::SchemaMismatch(format!(
                "duplicate utterance id `{}`",
                u.id
            )));
        }
        if !speaker_ids.contains(&u.speaker) {
            return Err(IngestError::SchemaMismatch(format!(
                "utterance `{}` references unknown speaker `{}`",
                u.id, u.speaker
            )));
        }
    }

    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let mut inventory = Inventory::new();
    let mut utterances = Vec::new();
    let mut file_errors = Vec::new();
    let mut nan_frames_dropped = 0usize;

    for mu in &doc.utterances {
        let result = (|| -> Result<Utterance, IngestError> {
            let phones_path = base.join(&mu.phones);
            let phones_text = read_hashed(&phones_path, &mut provenance)?;
            let rows = parse_phones_file(&phones_text, &phones_path, &mu.id)?;
            let need = |slot: &Option<String>, name: &str| {
                slot.clone().ok_or_else(|| IngestError::MalformedRow {
                    file: phones_path.clone(),
                    line: 0,
                    reason: format!("missing `{name}` row"),
                })
            };
            let pred = parse_seq(&need(&rows.pred, "pred")?, &mu.id, cfg, &mut inventory, &phones_path)?;
            let ref_us = parse_seq(&need(&rows.ref_us, "ref_us")?, &mu.id, cfg, &mut inventory, &phones_path)?;
            let ref_uk = parse_seq(&need(&rows.ref_uk, "ref_uk")?, &mu.id, cfg, &mut inventory, &phones_path)?;

            let ema_path = base.join(&mu.ema);
            let ema_text = read_hashed(&ema_path, &mut provenance)?;
            let (ema, dropped) = parse_ema_file(&ema_text, &ema_path, &mu.speaker, &mu.id)?;

            let seg_path = base.join(&mu.segments);
            let seg_text = read_hashed(&seg_path, &mut provenance)?;
            let segments = parse_segments_file(&seg_text, &seg_path, &mu.id, cfg, &mut inventory)?;

            nan_frames_dropped += dropped;
            Ok(Utterance {
                id: mu.id.clone(),
                speaker_id: mu.speaker.clone(),
                pred,
                ref_us,
                ref_uk,
                ema,
                segments,
            })
        })();
        match result {
            Ok(u) => utterances.push(u),
            Err(e) => file_errors.push(e),
        }
    }

    let speakers = doc
        .speakers
        .into_iter()
        .map(|s| Speaker {
            id: s.id,
            accent: s.accent,
        })
        .collect();

    Ok(IngestOutcome {
        corpus: Corpus {
            inventory,
            speakers,
            utterances,
        },
        file_errors,
        nan_frames_dropped,
        provenance,
    })
}

/// Group utterance indexes by speaker id, sorted for determinism.
pub fn by_speaker(corpus: &Corpus) -> BTreeMap<&str, Vec<usize>> {
    let mut map: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, u) in corpus.utterances.iter().enumerate() {
        map.entry(u.speaker_id.as_str()).or_default().push(i);
    }
    map
}
