//! Reparameterization of 12-channel fleshpoint trajectories into 9
//! interpretable features.
//!
//! Lip aperture (LA) is the UL-LL Euclidean distance, lip protrusion (LP) the
//! mean lip x, jaw height (JAW) the lower-incisor y. The three tongue sensors
//! (TT, TB, TD) are rotated into an advancement/raising basis found by PCA on
//! their 2-D coordinate clouds; advancement points anterior (+x), raising
//! superior (+y).

use std::collections::BTreeMap;

use crate::error::ReparamError;

/// Raw channel order within one frame.
pub const EMA_CHANNELS: [&str; 12] = [
    "ULx", "ULy", "LLx", "LLy", "LIx", "LIy", "TTx", "TTy", "TBx", "TBy", "TDx", "TDy",
];

/// Derived channel order within one frame.
pub const REPARAM_CHANNELS: [&str; 9] = [
    "LA", "LP", "JAW", "TTA", "TTR", "TBA", "TBR", "TDA", "TDR",
];

pub const TONGUE_SENSORS: [&str; 3] = ["TT", "TB", "TD"];
// frame offsets of the (x, y) pairs for TT, TB, TD
const TONGUE_OFFSETS: [usize; 3] = [6, 8, 10];

/// 12-channel trajectory at a fixed rate for one utterance.
#[derive(Debug, Clone)]
pub struct EmaTrack {
    pub rate: f64,
    /// Time of the first frame, seconds.
    pub t0: f64,
    pub frames: Vec<[f64; 12]>,
    pub speaker_id: String,
    pub utterance_id: String,
}

impl EmaTrack {
    /// Time of frame `i` (frame-center attribution).
    pub fn frame_time(&self, i: usize) -> f64 {
        self.t0 + i as f64 / self.rate
    }
}

/// PCA basis for one tongue sensor: advancement (A) and raising (R) axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorBasis {
    pub mean: [f64; 2],
    pub advance: [f64; 2],
    pub raise: [f64; 2],
    pub explained: [f64; 2],
}

/// Per-sensor bases for TT, TB, TD, in that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TonguePcaBasis {
    pub sensors: [SensorBasis; 3],
}

/// Whether PCA pools all speakers or fits one basis per speaker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PcaScope {
    Global,
    #[default]
    PerSpeaker,
}

/// Fitted bases, keyed by speaker in per-speaker scope.
#[derive(Debug, Clone)]
pub enum PcaBases {
    Global(TonguePcaBasis),
    PerSpeaker(BTreeMap<String, TonguePcaBasis>),
}

impl PcaBases {
    pub fn basis_for(&self, speaker_id: &str) -> Result<&TonguePcaBasis, ReparamError> {
        match self {
            PcaBases::Global(b) => Ok(b),
            PcaBases::PerSpeaker(map) => map
                .get(speaker_id)
                .ok_or_else(|| ReparamError::UnknownSpeaker(speaker_id.to_string())),
        }
    }
}

/// 9-channel derived trajectory, same frame count and rate as its source.
#[derive(Debug, Clone)]
pub struct ReparamTrack {
    pub rate: f64,
    pub t0: f64,
    pub frames: Vec<[f64; 9]>,
    pub speaker_id: String,
    pub utterance_id: String,
}

impl ReparamTrack {
    pub fn frame_time(&self, i: usize) -> f64 {
        self.t0 + i as f64 / self.rate
    }
}

/// Eigendecomposition of a symmetric 2x2 covariance, largest eigenvalue first.
fn eig2(sxx: f64, sxy: f64, syy: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let tr = sxx + syy;
    let disc = ((sxx - syy).powi(2) + 4.0 * sxy * sxy).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    let v1 = if sxy.abs() > 1e-300 {
        let v = [sxy, l1 - sxx];
        let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
        [v[0] / norm, v[1] / norm]
    } else if sxx >= syy {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    };
    let v2 = [-v1[1], v1[0]];
    ([l1, l2], [v1, v2])
}

fn fit_sensor(points: &[[f64; 2]], sensor: &'static str) -> Result<SensorBasis, ReparamError> {
    let n = points.len();
    if n < 2 {
        return Err(ReparamError::TooFewFrames);
    }
    let nf = n as f64;
    let mean = [
        points.iter().map(|p| p[0]).sum::<f64>() / nf,
        points.iter().map(|p| p[1]).sum::<f64>() / nf,
    ];
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let dx = p[0] - mean[0];
        let dy = p[1] - mean[1];
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    sxx /= nf;
    sxy /= nf;
    syy /= nf;

    let (vals, vecs) = eig2(sxx, sxy, syy);
    let scale = sxx.abs().max(syy.abs()).max(1e-300);
    if vals[0] <= 1e-12 * scale || vals[0] <= 0.0 {
        return Err(ReparamError::RankDeficient { sensor });
    }

    // A = component closer to the raw x axis by |cosine|, R the other
    let (mut a, mut r, explained) = if vecs[0][0].abs() >= vecs[1][0].abs() {
        (vecs[0], vecs[1], [vals[0], vals[1]])
    } else {
        (vecs[1], vecs[0], [vals[1], vals[0]])
    };
    // orient A anterior (+x) and R superior (+y)
    if a[0] < 0.0 {
        a = [-a[0], -a[1]];
    }
    if r[1] < 0.0 {
        r = [-r[0], -r[1]];
    }
    Ok(SensorBasis {
        mean,
        advance: a,
        raise: r,
        explained,
    })
}

fn fit_basis(tracks: &[&EmaTrack]) -> Result<TonguePcaBasis, ReparamError> {
    let mut sensors = Vec::with_capacity(3);
    for (si, off) in TONGUE_OFFSETS.iter().enumerate() {
        let points: Vec<[f64; 2]> = tracks
            .iter()
            .flat_map(|t| t.frames.iter().map(|f| [f[*off], f[off + 1]]))
            .collect();
        sensors.push(fit_sensor(&points, TONGUE_SENSORS[si])?);
    }
    Ok(TonguePcaBasis {
        sensors: [sensors[0], sensors[1], sensors[2]],
    })
}

/// Fit advancement/raising bases over a track population.
///
/// In per-speaker scope each speaker's frames are pooled separately; tracks
/// are grouped by `speaker_id`.
pub fn fit_tongue_pca(tracks: &[&EmaTrack], scope: PcaScope) -> Result<PcaBases, ReparamError> {
    if tracks.is_empty() {
        return Err(ReparamError::TooFewFrames);
    }
    match scope {
        PcaScope::Global => Ok(PcaBases::Global(fit_basis(tracks)?)),
        PcaScope::PerSpeaker => {
            let mut by_speaker: BTreeMap<String, Vec<&EmaTrack>> = BTreeMap::new();
            for t in tracks {
                by_speaker.entry(t.speaker_id.clone()).or_default().push(t);
            }
            let mut map = BTreeMap::new();
            for (spk, group) in by_speaker {
                map.insert(spk, fit_basis(&group)?);
            }
            Ok(PcaBases::PerSpeaker(map))
        }
    }
}

/// Derive the 9 feature channels frame by frame.
pub fn reparameterize(track: &EmaTrack, basis: &TonguePcaBasis) -> ReparamTrack {
    let frames = track
        .frames
        .iter()
        .map(|f| {
            let (ulx, uly, llx, lly, _lix, liy) = (f[0], f[1], f[2], f[3], f[4], f[5]);
            let la = ((ulx - llx).powi(2) + (uly - lly).powi(2)).sqrt();
            let lp = 0.5 * (ulx + llx);
            let jaw = liy;
            let mut out = [la, lp, jaw, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
            for (si, off) in TONGUE_OFFSETS.iter().enumerate() {
                let b = &basis.sensors[si];
                let dx = f[*off] - b.mean[0];
                let dy = f[off + 1] - b.mean[1];
                out[3 + 2 * si] = dx * b.advance[0] + dy * b.advance[1];
                out[3 + 2 * si + 1] = dx * b.raise[0] + dy * b.raise[1];
            }
            out
        })
        .collect();
    ReparamTrack {
        rate: track.rate,
        t0: track.t0,
        frames,
        speaker_id: track.speaker_id.clone(),
        utterance_id: track.utterance_id.clone(),
    }
}

/// Per-channel mean over frames with t_start <= t < t_end.
pub fn segment_mean(
    track: &ReparamTrack,
    t_start: f64,
    t_end: f64,
) -> Result<[f64; 9], ReparamError> {
    let mut sum = [0.0f64; 9];
    let mut count = 0usize;
    for (i, f) in track.frames.iter().enumerate() {
        let t = track.frame_time(i);
        if t >= t_start && t < t_end {
            for c in 0..9 {
                sum[c] += f[c];
            }
            count += 1;
        }
    }
    if count == 0 {
        return Err(ReparamError::EmptySegment { t_start, t_end });
    }
    for c in sum.iter_mut() {
        *c /= count as f64;
    }
    Ok(sum)
}

/// Like [`segment_mean`] but widens sub-frame segments to the nearest frame.
/// Returns the mean and whether widening happened.
pub fn segment_mean_widened(
    track: &ReparamTrack,
    t_start: f64,
    t_end: f64,
) -> Result<([f64; 9], bool), ReparamError> {
    match segment_mean(track, t_start, t_end) {
        Ok(m) => Ok((m, false)),
        Err(ReparamError::EmptySegment { .. }) if !track.frames.is_empty() => {
            let mid = 0.5 * (t_start + t_end);
            let idx = (((mid - track.t0) * track.rate).round() as isize)
                .clamp(0, track.frames.len() as isize - 1) as usize;
            Ok((track.frames[idx], true))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn track(frames: Vec<[f64; 12]>) -> EmaTrack {
        EmaTrack {
            rate: 50.0,
            t0: 0.0,
            frames,
            speaker_id: "s1".into(),
            utterance_id: "u1".into(),
        }
    }

    fn tongue_frames(points: &[[f64; 2]]) -> Vec<[f64; 12]> {
        points
            .iter()
            .map(|p| {
                let mut f = [0.0; 12];
                for off in TONGUE_OFFSETS {
                    f[off] = p[0];
                    f[off + 1] = p[1];
                }
                f
            })
            .collect()
    }

    #[test]
    fn axis_aligned_variance() {
        let pts: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, 0.0]).collect();
        let t = track(tongue_frames(&pts));
        let bases = fit_tongue_pca(&[&t], PcaScope::Global).unwrap();
        let b = bases.basis_for("s1").unwrap();
        for s in &b.sensors {
            assert!((s.advance[0] - 1.0).abs() < 1e-12);
            assert!(s.advance[1].abs() < 1e-12);
            assert!((s.raise[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rotated_cloud_recovers_axis() {
        // anisotropic cloud rotated 30 degrees from the axes
        let (c30, s30) = (30f64.to_radians().cos(), 30f64.to_radians().sin());
        let mut pts = Vec::new();
        for i in 0..2000 {
            let u = ((i % 100) as f64 / 99.0 - 0.5) * 4.0; // major axis
            let v = ((i / 100) as f64 / 19.0 - 0.5) * 0.2; // minor axis
            pts.push([u * c30 - v * s30, u * s30 + v * c30]);
        }
        let t = track(tongue_frames(&pts));
        let bases = fit_tongue_pca(&[&t], PcaScope::Global).unwrap();
        let b = bases.basis_for("s1").unwrap().sensors[0];
        assert!((b.advance[0] - c30).abs() < 1e-6);
        assert!((b.advance[1] - s30).abs() < 1e-6);
        // orthogonality and unit norm
        let dot = b.advance[0] * b.raise[0] + b.advance[1] * b.raise[1];
        assert!(dot.abs() < 1e-9);
    }

    #[test]
    fn rank_deficient_detected() {
        let pts = vec![[1.0, 2.0]; 8];
        let t = track(tongue_frames(&pts));
        let err = fit_tongue_pca(&[&t], PcaScope::Global).unwrap_err();
        assert!(matches!(err, ReparamError::RankDeficient { .. }));
    }

    #[test]
    fn lip_and_jaw_definitions() {
        let mut f = [0.0; 12];
        f[0] = 0.0; // ULx
        f[1] = 1.0; // ULy
        f[2] = 0.0; // LLx
        f[3] = -1.0; // LLy
        f[4] = 0.3; // LIx
        f[5] = -0.7; // LIy
        // tongue points need nonzero variance; add a second distinct frame
        let mut f2 = f;
        for off in TONGUE_OFFSETS {
            f2[off] = 1.0;
            f2[off + 1] = 0.5;
        }
        let t = track(vec![f, f2]);
        let bases = fit_tongue_pca(&[&t], PcaScope::Global).unwrap();
        let rt = reparameterize(&t, bases.basis_for("s1").unwrap());
        assert_eq!(rt.frames[0][0], 2.0); // LA
        assert_eq!(rt.frames[0][1], 0.0); // LP
        assert_eq!(rt.frames[0][2], -0.7); // JAW
    }

    #[test]
    fn mean_frame_projects_to_zero() {
        let pts = vec![[0.0, 0.0], [2.0, 1.0]];
        let mut frames = tongue_frames(&pts);
        // add the mean point as a third frame
        frames.extend(tongue_frames(&[[1.0, 0.5]]));
        let t = track(frames);
        let bases = fit_tongue_pca(&[&t], PcaScope::Global).unwrap();
        let rt = reparameterize(&t, bases.basis_for("s1").unwrap());
        for c in 3..9 {
            assert!(rt.frames[2][c].abs() < 1e-12);
        }
    }

    #[test]
    fn decorrelation_after_projection() {
        let mut pts = Vec::new();
        for i in 0..500 {
            let a = i as f64 * 0.7;
            pts.push([a.sin() * 2.0 + a.cos(), a.cos() * 0.5 + 0.3 * a.sin()]);
        }
        let t = track(tongue_frames(&pts));
        let bases = fit_tongue_pca(&[&t], PcaScope::Global).unwrap();
        let rt = reparameterize(&t, bases.basis_for("s1").unwrap());
        let n = rt.frames.len() as f64;
        for si in 0..3 {
            let (ai, ri) = (3 + 2 * si, 4 + 2 * si);
            let ma = rt.frames.iter().map(|f| f[ai]).sum::<f64>() / n;
            let mr = rt.frames.iter().map(|f| f[ri]).sum::<f64>() / n;
            let mut cov = 0.0;
            let mut var = 0.0;
            for f in &rt.frames {
                cov += (f[ai] - ma) * (f[ri] - mr);
                var += (f[ai] - ma).powi(2) + (f[ri] - mr).powi(2);
            }
            assert!(cov.abs() / n < 1e-9 * (var / n));
        }
    }

    #[test]
    fn segment_mean_cases() {
        let mut frames = Vec::new();
        for i in 0..100 {
            let mut f = [0.0; 9];
            f[0] = i as f64 / 99.0; // ramp 0..1
            f[1] = 5.0; // constant
            frames.push(f);
        }
        let rt = ReparamTrack {
            rate: 100.0,
            t0: 0.0,
            frames,
            speaker_id: "s".into(),
            utterance_id: "u".into(),
        };
        let m = segment_mean(&rt, 0.0, 1.0).unwrap();
        assert_eq!(m[1], 5.0);
        assert!((m[0] - 0.5).abs() < 1.0 / 100.0);
        assert!(matches!(
            segment_mean(&rt, 5.0, 6.0),
            Err(ReparamError::EmptySegment { .. })
        ));
        // sub-frame segment widens to nearest frame
        let (w, widened) = segment_mean_widened(&rt, 0.2041, 0.2042).unwrap();
        assert!(widened);
        assert!((w[0] - 20.0 / 99.0).abs() < 1e-12);
    }

    #[test]
    fn translation_behaviour() {
        let pts: Vec<[f64; 2]> = (0..20).map(|i| [(i as f64).sin(), (i as f64).cos()]).collect();
        let mut frames = tongue_frames(&pts);
        for (i, f) in frames.iter_mut().enumerate() {
            f[0] = i as f64 * 0.1;
            f[1] = 1.0;
            f[2] = i as f64 * 0.05;
            f[3] = -1.0;
            f[5] = 0.2;
        }
        let t = track(frames.clone());
        let shifted_frames: Vec<[f64; 12]> = frames
            .iter()
            .map(|f| {
                let mut g = *f;
                for c in (0..12).step_by(2) {
                    g[c] += 3.0; // x shift
                }
                for c in (1..12).step_by(2) {
                    g[c] -= 2.0; // y shift
                }
                g
            })
            .collect();
        let ts = track(shifted_frames);
        let b1 = fit_tongue_pca(&[&t], PcaScope::Global).unwrap();
        let b2 = fit_tongue_pca(&[&ts], PcaScope::Global).unwrap();
        let r1 = reparameterize(&t, b1.basis_for("s1").unwrap());
        let r2 = reparameterize(&ts, b2.basis_for("s1").unwrap());
        for (f1, f2) in r1.frames.iter().zip(&r2.frames) {
            assert!((f1[0] - f2[0]).abs() < 1e-12); // LA invariant
            assert!((f2[1] - (f1[1] + 3.0)).abs() < 1e-12); // LP shifts with x
            assert!((f2[2] - (f1[2] - 2.0)).abs() < 1e-12); // JAW shifts with y
        }
    }
}
