//! Dynamic-programming alignment of phoneme sequences under a weight table.
//!
//! Classic Needleman-Wunsch style global alignment with traceback. Costs live
//! in [0,1]; unit weighting reproduces the ordinary Levenshtein distance.
//! Tie-breaking is fixed (match > substitution > deletion > insertion) so the
//! recovered paths, which feed PMI counting, are deterministic.

use crate::error::AlignError;
use crate::inventory::{Inventory, PhonemeLabel, PhonemeSeq, GAP};

/// Symmetric substitution/indel cost matrix over an inventory (gap included).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    n: usize,
    cost: Vec<f64>,
}

impl WeightTable {
    /// Unit weights: 0 on the diagonal, 1 elsewhere (indels included).
    pub fn unit(inventory: &Inventory) -> Self {
        Self::unit_n(inventory.len())
    }

    /// Unit weights over an inventory of `n` entries (gap included).
    pub fn unit_n(n: usize) -> Self {
        let mut cost = vec![1.0; n * n];
        for i in 0..n {
            cost[i * n + i] = 0.0;
        }
        WeightTable { n, cost }
    }

    /// Build from an explicit `n` x `n` matrix. Clamps to [0,1], forces a zero
    /// diagonal for non-gap labels, and symmetrizes by averaging.
    pub fn from_costs(n: usize, raw: &[f64]) -> Self {
        assert_eq!(raw.len(), n * n, "cost matrix must be n x n");
        let mut cost = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let c = 0.5 * (raw[i * n + j] + raw[j * n + i]);
                cost[i * n + j] = c.clamp(0.0, 1.0);
            }
        }
        for i in 1..n {
            cost[i * n + i] = 0.0;
        }
        WeightTable { n, cost }
    }

    pub fn inventory_len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn cost(&self, a: PhonemeLabel, b: PhonemeLabel) -> f64 {
        self.cost[a.index() * self.n + b.index()]
    }

    fn check(&self, seq: &PhonemeSeq, inv_hint: Option<&Inventory>) -> Result<(), AlignError> {
        for &p in seq.phones() {
            if p.index() >= self.n {
                let name = inv_hint
                    .map(|inv| inv.symbol(p).to_string())
                    .unwrap_or_else(|| format!("{p}"));
                return Err(AlignError::UnknownPhoneme(name));
            }
        }
        Ok(())
    }
}

/// One aligned column: gap on the left means insertion into `a`, gap on the
/// right means deletion from `a`.
pub type AlignedPair = (PhonemeLabel, PhonemeLabel);

#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub pairs: Vec<AlignedPair>,
    pub total_cost: f64,
    /// total_cost / max(|b|, 1), with `b` treated as the reference.
    pub normalized_cost: f64,
}

impl Alignment {
    /// Reconstruct the two input sequences from the columns (gaps removed).
    pub fn columns(&self) -> (Vec<PhonemeLabel>, Vec<PhonemeLabel>) {
        let a = self
            .pairs
            .iter()
            .map(|&(x, _)| x)
            .filter(|p| !p.is_gap())
            .collect();
        let b = self
            .pairs
            .iter()
            .map(|&(_, y)| y)
            .filter(|p| !p.is_gap())
            .collect();
        (a, b)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Step {
    Diag,
    Del, // a[i] aligned to gap
    Ins, // gap aligned to b[j]
}

/// Minimum-cost global alignment of `a` against `b` under `w`.
///
/// Ties are broken diagonal-first, then deletion-from-a, then insertion, so
/// equal-cost corpora always produce the same paths.
pub fn align(a: &PhonemeSeq, b: &PhonemeSeq, w: &WeightTable) -> Result<Alignment, AlignError> {
    align_with(a, b, w, None)
}

/// Like [`align`] but resolves symbols through `inv` in error messages.
pub fn align_with(
    a: &PhonemeSeq,
    b: &PhonemeSeq,
    w: &WeightTable,
    inv: Option<&Inventory>,
) -> Result<Alignment, AlignError> {
    w.check(a, inv)?;
    w.check(b, inv)?;

    let (na, nb) = (a.len(), b.len());
    let ap = a.phones();
    let bp = b.phones();
    let width = nb + 1;
    let mut dist = vec![0.0f64; (na + 1) * width];
    let mut back = vec![Step::Diag; (na + 1) * width];

    for j in 1..=nb {
        dist[j] = dist[j - 1] + w.cost(GAP, bp[j - 1]);
        back[j] = Step::Ins;
    }
    for i in 1..=na {
        dist[i * width] = dist[(i - 1) * width] + w.cost(ap[i - 1], GAP);
        back[i * width] = Step::Del;
    }
    for i in 1..=na {
        for j in 1..=nb {
            let diag = dist[(i - 1) * width + j - 1] + w.cost(ap[i - 1], bp[j - 1]);
            let del = dist[(i - 1) * width + j] + w.cost(ap[i - 1], GAP);
            let ins = dist[i * width + j - 1] + w.cost(GAP, bp[j - 1]);
            // preference on ties: diagonal (match/substitution), then deletion
            let (best, step) = if diag <= del && diag <= ins {
                (diag, Step::Diag)
            } else if del <= ins {
                (del, Step::Del)
            } else {
                (ins, Step::Ins)
            };
            dist[i * width + j] = best;
            back[i * width + j] = step;
        }
    }

    let mut pairs = Vec::with_capacity(na.max(nb));
    let (mut i, mut j) = (na, nb);
    while i > 0 || j > 0 {
        match back[i * width + j] {
            Step::Diag if i > 0 && j > 0 => {
                pairs.push((ap[i - 1], bp[j - 1]));
                i -= 1;
                j -= 1;
            }
            Step::Del if i > 0 => {
                pairs.push((ap[i - 1], GAP));
                i -= 1;
            }
            _ => {
                pairs.push((GAP, bp[j - 1]));
                j -= 1;
            }
        }
    }
    pairs.reverse();

    let total_cost = dist[na * width + nb];
    let normalized_cost = total_cost / (nb.max(1) as f64);
    Ok(Alignment {
        pairs,
        total_cost,
        normalized_cost,
    })
}

/// Reference-length-normalized distance (PER convention).
pub fn normalized_distance(al: &Alignment, ref_len: usize) -> Result<f64, AlignError> {
    if ref_len == 0 && al.total_cost > 0.0 {
        return Err(AlignError::DegenerateReference);
    }
    Ok(al.total_cost / (ref_len.max(1) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inventory::Inventory;

    fn seq(inv: &mut Inventory, text: &str) -> PhonemeSeq {
        PhonemeSeq::parse("u", text, inv).unwrap()
    }

    #[test]
    fn identity_alignment_is_free() {
        let mut inv = Inventory::new();
        let a = seq(&mut inv, "k æ t");
        let w = WeightTable::unit(&inv);
        let al = align(&a, &a, &w).unwrap();
        assert_eq!(al.total_cost, 0.0);
        assert_eq!(al.pairs.len(), 3);
        assert!(al.pairs.iter().all(|&(x, y)| x == y));
    }

    #[test]
    fn single_substitution() {
        // brute-force over all alignments of length-3 strings gives 1
        let mut inv = Inventory::new();
        let a = seq(&mut inv, "k æ t");
        let b = seq(&mut inv, "k ɑ t");
        let w = WeightTable::unit(&inv);
        let al = align(&a, &b, &w).unwrap();
        assert_eq!(al.total_cost, 1.0);
    }

    #[test]
    fn empty_vs_nonempty_is_pure_indel() {
        let mut inv = Inventory::new();
        let b = seq(&mut inv, "k æ");
        let a = PhonemeSeq::new("u", vec![]).unwrap();
        let w = WeightTable::unit(&inv);
        let al = align(&a, &b, &w).unwrap();
        assert_eq!(al.total_cost, 2.0);
        assert!(al.pairs.iter().all(|&(x, _)| x.is_gap()));
    }

    #[test]
    fn columns_round_trip() {
        let mut inv = Inventory::new();
        let a = seq(&mut inv, "s t r ɛ s");
        let b = seq(&mut inv, "t r æ s t");
        let w = WeightTable::unit(&inv);
        let al = align(&a, &b, &w).unwrap();
        let (ca, cb) = al.columns();
        assert_eq!(ca, a.phones());
        assert_eq!(cb, b.phones());
        assert!(!al.pairs.iter().any(|&(x, y)| x.is_gap() && y.is_gap()));
    }

    #[test]
    fn normalized_distance_cases() {
        let al = Alignment {
            pairs: vec![],
            total_cost: 0.0,
            normalized_cost: 0.0,
        };
        assert_eq!(normalized_distance(&al, 3).unwrap(), 0.0);
        let al1 = Alignment {
            total_cost: 1.0,
            ..al.clone()
        };
        assert_eq!(normalized_distance(&al1, 4).unwrap(), 0.25);
        let al2 = Alignment {
            total_cost: 2.0,
            ..al.clone()
        };
        assert_eq!(normalized_distance(&al2, 2).unwrap(), 1.0);
        assert!(normalized_distance(&al2, 0).is_err());
        // zero-cost alignment against an empty reference is legal
        assert_eq!(normalized_distance(&al, 0).unwrap(), 0.0);
    }

    #[test]
    fn unknown_phoneme_rejected() {
        let mut inv = Inventory::new();
        let a = seq(&mut inv, "k");
        let w = WeightTable::unit(&inv);
        let b = seq(&mut inv, "zz"); // interned after the table was built
        let err = align_with(&a, &b, &w, Some(&inv)).unwrap_err();
        assert!(matches!(err, AlignError::UnknownPhoneme(ref s) if s == "zz"));
    }

    #[test]
    fn tie_break_prefers_diagonal() {
        let mut inv = Inventory::new();
        let a = seq(&mut inv, "a b");
        let b = seq(&mut inv, "b a");
        let w = WeightTable::unit(&inv);
        let al = align(&a, &b, &w).unwrap();
        // two substitutions, not indel chains, under diagonal-first ties
        assert_eq!(al.total_cost, 2.0);
        assert_eq!(al.pairs.len(), 2);
    }
}
