//! Property-based invariants for alignment, PMI, gestures, and regression.

use proptest::prelude::*;

use accent_artic::gesture::{simulate, GestureParams};
use accent_artic::inventory::{Inventory, PhonemeSeq};
use accent_artic::pmi::{estimate_pmi, TrainConfig};
use accent_artic::stats::linreg;
use accent_artic::{align, Alignment, WeightTable};

const INV_SIZE: usize = 6;

fn fixture() -> (Inventory, Vec<accent_artic::PhonemeLabel>) {
    let mut inv = Inventory::new();
    let symbols = (0..INV_SIZE)
        .map(|i| inv.intern(&format!("p{i}")).unwrap())
        .collect();
    (inv, symbols)
}

fn seq(symbols: &[accent_artic::PhonemeLabel], raw: &[u8], id: &str) -> PhonemeSeq {
    PhonemeSeq::new(id, raw.iter().map(|&s| symbols[s as usize]).collect()).unwrap()
}

fn raw_seq() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..INV_SIZE as u8, 0..10)
}

proptest! {
    #[test]
    fn alignment_is_symmetric(a in raw_seq(), b in raw_seq()) {
        let (inv, symbols) = fixture();
        let w = WeightTable::unit(&inv);
        let ab = align(&seq(&symbols, &a, "a"), &seq(&symbols, &b, "b"), &w).unwrap();
        let ba = align(&seq(&symbols, &b, "b"), &seq(&symbols, &a, "a"), &w).unwrap();
        prop_assert!((ab.total_cost - ba.total_cost).abs() < 1e-12);
    }

    #[test]
    fn triangle_inequality(a in raw_seq(), b in raw_seq(), c in raw_seq()) {
        let (inv, symbols) = fixture();
        let w = WeightTable::unit(&inv);
        let d = |x: &[u8], y: &[u8]| {
            align(&seq(&symbols, x, "x"), &seq(&symbols, y, "y"), &w)
                .unwrap()
                .total_cost
        };
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    }

    #[test]
    fn appending_a_symbol_moves_cost_by_at_most_one(
        a in raw_seq(),
        b in raw_seq(),
        extra in 0..INV_SIZE as u8,
    ) {
        let (inv, symbols) = fixture();
        let w = WeightTable::unit(&inv);
        let base = align(&seq(&symbols, &a, "a"), &seq(&symbols, &b, "b"), &w)
            .unwrap()
            .total_cost;
        let mut longer = a.clone();
        longer.push(extra);
        let grown = align(&seq(&symbols, &longer, "a"), &seq(&symbols, &b, "b"), &w)
            .unwrap()
            .total_cost;
        prop_assert!((grown - base).abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn identity_distance_is_zero(a in raw_seq()) {
        let (inv, symbols) = fixture();
        let w = WeightTable::unit(&inv);
        let al = align(&seq(&symbols, &a, "a"), &seq(&symbols, &a, "a"), &w).unwrap();
        prop_assert_eq!(al.total_cost, 0.0);
    }

    #[test]
    fn alignment_columns_round_trip(a in raw_seq(), b in raw_seq()) {
        let (inv, symbols) = fixture();
        let w = WeightTable::unit(&inv);
        let sa = seq(&symbols, &a, "a");
        let sb = seq(&symbols, &b, "b");
        let al = align(&sa, &sb, &w).unwrap();
        let (ca, cb) = al.columns();
        prop_assert_eq!(ca, sa.phones().to_vec());
        prop_assert_eq!(cb, sb.phones().to_vec());
        prop_assert!(!al.pairs.iter().any(|&(x, y)| x.is_gap() && y.is_gap()));
    }

    #[test]
    fn pmi_is_count_scale_invariant(
        pairs in prop::collection::vec((0..INV_SIZE as u8, 0..INV_SIZE as u8), 1..30),
        replicas in 2..5usize,
    ) {
        let (inv, symbols) = fixture();
        let aligned: Vec<_> = pairs
            .iter()
            .map(|&(x, y)| (symbols[x as usize], symbols[y as usize]))
            .collect();
        prop_assume!(aligned.iter().any(|&(x, y)| x != y));
        let mk = |k: usize| {
            vec![
                Alignment {
                    pairs: aligned.clone(),
                    total_cost: 0.0,
                    normalized_cost: 0.0,
                };
                k
            ]
        };
        let cfg = TrainConfig { delta: 0.0, ..TrainConfig::default() };
        let t1 = estimate_pmi(&mk(1), inv.len(), &cfg).unwrap();
        let tk = estimate_pmi(&mk(replicas), inv.len(), &cfg).unwrap();
        for x in 0..inv.len() {
            for y in 0..inv.len() {
                let (p1, pk) = (t1.pmi(x, y), tk.pmi(x, y));
                prop_assert_eq!(p1.is_nan(), pk.is_nan());
                if p1.is_finite() {
                    prop_assert!((p1 - pk).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn simulate_never_overshoots(
        target in -5.0..5.0f64,
        initial in -5.0..5.0f64,
        k in 1.0..1e4f64,
        onset in 0.0..1.0f64,
    ) {
        let p = GestureParams { target, stiffness: k, initial, onset };
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.02).collect();
        let lo = target.min(initial) - 1e-9;
        let hi = target.max(initial) + 1e-9;
        for v in simulate(&p, &times) {
            prop_assert!(v >= lo && v <= hi);
        }
    }

    #[test]
    fn regression_is_affine_equivariant(
        xs in prop::collection::vec(-10.0..10.0f64, 5..20),
        scale in 0.1..5.0f64,
        shift in -10.0..10.0f64,
    ) {
        let ys: Vec<f64> = xs.iter().enumerate().map(|(i, v)| v * 0.5 + (i as f64 * 0.7).sin()).collect();
        prop_assume!(xs.iter().any(|&v| (v - xs[0]).abs() > 1e-9));
        let base = linreg(&xs, &ys).unwrap();
        let scaled: Vec<f64> = ys.iter().map(|v| scale * v + shift).collect();
        let moved = linreg(&xs, &scaled).unwrap();
        prop_assert!((moved.r - base.r).abs() < 1e-9);
        prop_assert!((moved.p - base.p).abs() < 1e-9);
        prop_assert!((moved.slope - scale * base.slope).abs() < 1e-9 * (1.0 + base.slope.abs()));
    }

    #[test]
    fn weight_table_symmetrizes_and_clamps(
        raw in prop::collection::vec(-1.0..2.0f64, 16)
    ) {
        let mut inv = Inventory::new();
        let mut labels = vec![accent_artic::GAP];
        for i in 0..3 {
            labels.push(inv.intern(&format!("p{i}")).unwrap());
        }
        let w = WeightTable::from_costs(4, &raw);
        for &a in &labels {
            for &b in &labels {
                let c = w.cost(a, b);
                prop_assert!((0.0..=1.0).contains(&c));
                prop_assert_eq!(c, w.cost(b, a));
            }
        }
    }
}
