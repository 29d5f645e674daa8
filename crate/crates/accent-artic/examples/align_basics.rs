//! Weighted edit distance between phoneme strings, with traceback.
//!
//! Aligns a predicted pronunciation against two reference dictionaries under
//! unit weights, then shows how a cheaper substitution cost changes the
//! alignment economics.

use accent_artic::inventory::{Inventory, PhonemeSeq};
use accent_artic::{align, normalized_distance, WeightTable, GAP_SYMBOL};

fn show(inv: &Inventory, label: &str, al: &accent_artic::Alignment, ref_len: usize) {
    let row = |side: usize| {
        al.pairs
            .iter()
            .map(|p| {
                let l = if side == 0 { p.0 } else { p.1 };
                if l.is_gap() {
                    GAP_SYMBOL.to_string()
                } else {
                    inv.symbol(l).to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("{label}");
    println!("  pred: {}", row(0));
    println!("  ref:  {}", row(1));
    println!(
        "  total cost {:.3}, normalized {:.3}",
        al.total_cost,
        normalized_distance(al, ref_len).unwrap()
    );
}

fn main() {
    let mut inv = Inventory::new();
    // "water" as an American speaker might produce it, with a flap-like [ɾ]
    let pred = PhonemeSeq::parse("water-pred", "w ɑ ɾ ɚ", &mut inv).unwrap();
    let ref_us = PhonemeSeq::parse("water-us", "w ɑ t ɚ", &mut inv).unwrap();
    let ref_uk = PhonemeSeq::parse("water-uk", "w ɒ t ə", &mut inv).unwrap();

    let unit = WeightTable::unit(&inv);
    let al_us = align(&pred, &ref_us, &unit).unwrap();
    let al_uk = align(&pred, &ref_uk, &unit).unwrap();
    show(&inv, "unit weights, US reference:", &al_us, ref_us.len());
    show(&inv, "unit weights, UK reference:", &al_uk, ref_uk.len());

    // make the [ɾ]~[t] substitution nearly free, as PMI training would for a
    // systematic confusion, and the US distance collapses
    let n = inv.len();
    let mut costs = vec![1.0; n * n];
    for i in 0..n {
        costs[i * n + i] = 0.0;
    }
    let flap = inv.lookup("ɾ").unwrap();
    let t = inv.lookup("t").unwrap();
    costs[flap.index() * n + t.index()] = 0.05;
    costs[t.index() * n + flap.index()] = 0.05;
    let learned = WeightTable::from_costs(n, &costs);
    let al = align(&pred, &ref_us, &learned).unwrap();
    show(&inv, "cheap ɾ~t substitution, US reference:", &al, ref_us.len());
}
