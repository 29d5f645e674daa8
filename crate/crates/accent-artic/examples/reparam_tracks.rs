//! Reparameterize a 12-channel fleshpoint track into the 9 feature channels.
//!
//! Builds a synthetic track whose tongue-tip cloud is elongated along a known
//! oblique axis; the PCA recovers that axis as the advancement direction.

use accent_artic::reparam::{PcaScope, REPARAM_CHANNELS, TONGUE_SENSORS};
use accent_artic::{fit_tongue_pca, reparameterize, EmaTrack};

fn main() {
    let angle = 20f64.to_radians();
    let (ca, sa) = (angle.cos(), angle.sin());
    let frames: Vec<[f64; 12]> = (0..200)
        .map(|i| {
            let ph = i as f64 * 0.13;
            let major = 3.0 * ph.sin(); // along the oblique axis
            let minor = 0.3 * (2.3 * ph).cos();
            let mut f = [0.0; 12];
            f[0] = 0.2 * ph.cos(); // ULx
            f[1] = 1.0 + 0.1 * ph.sin(); // ULy
            f[2] = 0.2 * ph.cos(); // LLx
            f[3] = -1.0 - 0.4 * ph.sin(); // LLy
            f[4] = 0.0; // LIx
            f[5] = -1.2 - 0.4 * ph.sin(); // LIy
            for (s, off) in [6usize, 8, 10].iter().enumerate() {
                let spread = 1.0 + 0.2 * s as f64;
                f[*off] = spread * (major * ca - minor * sa);
                f[off + 1] = spread * (major * sa + minor * ca);
            }
            f
        })
        .collect();
    let track = EmaTrack {
        rate: 100.0,
        t0: 0.0,
        frames,
        speaker_id: "demo".into(),
        utterance_id: "u0".into(),
    };

    let bases = fit_tongue_pca(&[&track], PcaScope::PerSpeaker).unwrap();
    let basis = bases.basis_for("demo").unwrap();
    println!("planted advancement axis: ({ca:.4}, {sa:.4})");
    for (name, s) in TONGUE_SENSORS.iter().zip(&basis.sensors) {
        println!(
            "{name}: advance ({:+.4}, {:+.4})  raise ({:+.4}, {:+.4})  variance {:.2}/{:.2}",
            s.advance[0], s.advance[1], s.raise[0], s.raise[1], s.explained[0], s.explained[1]
        );
    }

    let rt = reparameterize(&track, basis);
    println!("\nfirst frames of the derived channels:");
    println!("t     {}", REPARAM_CHANNELS.join("    "));
    for i in [0usize, 50, 100] {
        let row: Vec<String> = rt.frames[i].iter().map(|v| format!("{v:+.2}")).collect();
        println!("{:.2}  {}", rt.frame_time(i), row.join("  "));
    }
}
