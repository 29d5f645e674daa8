//! Iterative PMI weight refinement on a synthetic corpus.
//!
//! The corpus systematically substitutes ɾ for t and ɑ for ɒ; training should
//! make those substitutions much cheaper than arbitrary ones.

use accent_artic::inventory::{Inventory, PhonemeSeq};
use accent_artic::pmi::TrainConfig;
use accent_artic::train_weights;

fn main() {
    let mut inv = Inventory::new();
    let sentences = [
        ("w ɑ ɾ ɚ", "w ɒ t ɚ"),
        ("b ɛ ɾ ɚ", "b ɛ t ɚ"),
        ("l ɑ ɾ ɚ", "l ɒ t ɚ"),
        ("s ɪ ɾ i", "s ɪ t i"),
        ("k ɑ t", "k ɒ t"),
        ("h ɑ t", "h ɒ t"),
    ];
    let mut corpus = Vec::new();
    for round in 0..4 {
        for (i, (pred, refr)) in sentences.iter().enumerate() {
            corpus.push((
                PhonemeSeq::parse(format!("p{round}_{i}"), pred, &mut inv).unwrap(),
                PhonemeSeq::parse(format!("r{round}_{i}"), refr, &mut inv).unwrap(),
            ));
        }
    }

    let cfg = TrainConfig::default();
    let out = train_weights(&corpus, inv.len(), &cfg).unwrap();
    println!(
        "trained on {} utterance pairs: {} iterations, converged = {}",
        corpus.len(),
        out.iterations,
        out.converged
    );

    let mut pairs: Vec<(String, String, f64)> = Vec::new();
    let labels: Vec<_> = inv.labels().collect();
    for (i, &a) in labels.iter().enumerate() {
        for &b in &labels[i + 1..] {
            pairs.push((
                inv.symbol(a).to_string(),
                inv.symbol(b).to_string(),
                out.weights.cost(a, b),
            ));
        }
    }
    pairs.sort_by(|x, y| x.2.partial_cmp(&y.2).unwrap());
    println!("\ncheapest substitutions (systematic confusions):");
    for (a, b, c) in pairs.iter().take(4) {
        println!("  {a} ~ {b}: {c:.3}");
    }
    println!("most expensive:");
    for (a, b, c) in pairs.iter().rev().take(3) {
        println!("  {a} ~ {b}: {c:.3}");
    }
}
