//! Per-speaker accent-strength scores from both dictionaries.
//!
//! Three synthetic speakers sit at different points between a US and a UK
//! pronunciation; the relative PMI-LD score orders them accordingly.

use accent_artic::inventory::{Inventory, PhonemeSeq};
use accent_artic::pmi::{TrainConfig, UttDistances};
use accent_artic::{align, normalized_distance, speaker_accent_score, train_weights, WeightTable};

fn main() {
    let mut inv = Inventory::new();
    let items: [(&str, &str); 4] = [
        ("w ɑ t ɚ", "w ɒ t ə"),   // water
        ("k ɑ t", "k ɒ t"),       // cot
        ("b ɛ t ɚ", "b ɛ t ə"),   // better
        ("f ɑ s t", "f ɑ s t"),   // fast (identical here)
    ];
    // speaker bias: fraction of tokens realized with the UK variant
    let speakers = [("us-speaker", 0.0), ("mid-speaker", 0.5), ("uk-speaker", 1.0)];

    let mut utterances: Vec<(String, PhonemeSeq, PhonemeSeq, PhonemeSeq)> = Vec::new();
    for (spk, bias) in speakers {
        for (i, (us, uk)) in items.iter().enumerate() {
            let us_toks: Vec<&str> = us.split_whitespace().collect();
            let uk_toks: Vec<&str> = uk.split_whitespace().collect();
            let pred: Vec<&str> = us_toks
                .iter()
                .zip(&uk_toks)
                .enumerate()
                .map(|(j, (&a, &b))| if (j as f64 + 0.5) / us_toks.len() as f64 <= bias { b } else { a })
                .collect();
            let id = format!("{spk}-{i}");
            utterances.push((
                spk.to_string(),
                PhonemeSeq::parse(format!("{id}-pred"), &pred.join(" "), &mut inv).unwrap(),
                PhonemeSeq::parse(format!("{id}-us"), us, &mut inv).unwrap(),
                PhonemeSeq::parse(format!("{id}-uk"), uk, &mut inv).unwrap(),
            ));
        }
    }

    let cfg = TrainConfig::default();
    let pairs_us: Vec<_> = utterances.iter().map(|u| (u.1.clone(), u.2.clone())).collect();
    let pairs_uk: Vec<_> = utterances.iter().map(|u| (u.1.clone(), u.3.clone())).collect();
    let w_us = train_weights(&pairs_us, inv.len(), &cfg).unwrap();
    let w_uk = train_weights(&pairs_uk, inv.len(), &cfg).unwrap();
    let unit = WeightTable::unit(&inv);

    println!("speaker        ld_us  ld_uk  pmi_us pmi_uk relative");
    for (spk, _) in speakers {
        let utts: Vec<UttDistances> = utterances
            .iter()
            .filter(|u| u.0 == spk)
            .map(|(_, pred, ref_us, ref_uk)| {
                let d = |w: &WeightTable, r: &PhonemeSeq| {
                    let al = align(pred, r, w).unwrap();
                    normalized_distance(&al, r.len()).unwrap()
                };
                UttDistances {
                    utterance_id: pred.len().to_string(),
                    ld_us: d(&unit, ref_us),
                    ld_uk: d(&unit, ref_uk),
                    pmi_ld_us: d(&w_us.weights, ref_us),
                    pmi_ld_uk: d(&w_uk.weights, ref_uk),
                }
            })
            .collect();
        let s = speaker_accent_score(spk, &utts).unwrap();
        println!(
            "{:<14} {:.3}  {:.3}  {:.3}  {:.3}  {:+.3}",
            s.speaker_id, s.ld_us, s.ld_uk, s.pmi_ld_us, s.pmi_ld_uk, s.relative
        );
    }
    println!("\npositive relative scores lean UK, negative lean US");
}
