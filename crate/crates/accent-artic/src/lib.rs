//! Accent strength from phoneme edit distance, correlated with articulatory
//! features.
//!
//! The crate quantifies how far a speaker's predicted phoneme strings sit
//! from US and UK dictionary references using a PMI-weighted Levenshtein
//! distance, reparameterizes externally produced 12-channel fleshpoint
//! trajectories into 9 interpretable articulatory features, fits critically
//! damped gesture targets per vowel segment, and regresses the articulatory
//! statistics on the accent scores.
//!
//! Start with the runnable examples, one per capability:
//!
//! ```text
//! cargo run --example align_basics      # weighted edit distance + traceback
//! cargo run --example train_weights     # iterative PMI weight refinement
//! cargo run --example accent_scores     # per-speaker LD / PMI-LD scoring
//! cargo run --example reparam_tracks    # LA/LP/JAW + tongue PCA features
//! cargo run --example gesture_fit       # equilibrium-target recovery
//! cargo run --example regression        # correlation cells and gating
//! cargo run --example full_pipeline     # end to end on generated files
//! ```
//!
//! The `accent-artic` binary wraps the same pipeline behind subcommands
//! (`run`, `train-weights`, `score`, `reparam`, `fit`, `regress`, `report`)
//! for file-based corpora.

pub mod align;
pub mod config;
pub mod error;
pub mod gesture;
pub mod ingest;
pub mod inventory;
mod optim;
pub mod pipeline;
pub mod pmi;
pub mod report;
pub mod reparam;
pub mod stats;

pub use align::{align, normalized_distance, Alignment, WeightTable};
pub use config::{Config, Measure};
pub use inventory::{Inventory, PhonemeLabel, PhonemeSeq, GAP, GAP_SYMBOL};
pub use pipeline::{run_pipeline, Report};
pub use pmi::{estimate_pmi, pmi_to_weights, speaker_accent_score, train_weights, TrainConfig};
pub use reparam::{fit_tongue_pca, reparameterize, segment_mean, EmaTrack, ReparamTrack};
pub use stats::{linreg, summarize, t_sf, RegressionResult};
