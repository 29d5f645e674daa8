//! Phoneme inventory with string interning.
//!
//! Labels are interned into small integer ids so that weight tables can be
//! dense matrices and iteration order is deterministic. Id 0 is reserved for
//! the gap pseudo-phoneme used in alignments; it never appears inside a
//! [`PhonemeSeq`].

use std::collections::HashMap;
use std::fmt;

/// Symbol used for the gap pseudo-phoneme in alignments and output files.
pub const GAP_SYMBOL: &str = "-";

/// Interned phoneme label. Compare and hash by id; resolve symbols via the
/// [`Inventory`] that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhonemeLabel(pub(crate) u16);

/// The distinguished gap label (id 0 in every inventory).
pub const GAP: PhonemeLabel = PhonemeLabel(0);

impl PhonemeLabel {
    pub fn is_gap(self) -> bool {
        self == GAP
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Interning table for phoneme symbols. The gap symbol is always present at
/// index 0.
#[derive(Debug, Clone)]
pub struct Inventory {
    symbols: Vec<String>,
    index: HashMap<String, u16>,
}

impl Default for Inventory {
    fn default() -> Self {
        Self::new()
    }
}

impl Inventory {
    pub fn new() -> Self {
        let mut inv = Inventory {
            symbols: Vec::new(),
            index: HashMap::new(),
        };
        inv.symbols.push(GAP_SYMBOL.to_string());
        inv.index.insert(GAP_SYMBOL.to_string(), 0);
        inv
    }

    /// Intern a symbol, returning its label. Empty symbols and the gap symbol
    /// are rejected; the gap is not a real phoneme.
    pub fn intern(&mut self, symbol: &str) -> Option<PhonemeLabel> {
        if symbol.is_empty() || symbol == GAP_SYMBOL {
            return None;
        }
        if let Some(&id) = self.index.get(symbol) {
            return Some(PhonemeLabel(id));
        }
        let id = u16::try_from(self.symbols.len()).ok()?;
        self.symbols.push(symbol.to_string());
        self.index.insert(symbol.to_string(), id);
        Some(PhonemeLabel(id))
    }

    pub fn lookup(&self, symbol: &str) -> Option<PhonemeLabel> {
        self.index.get(symbol).map(|&id| PhonemeLabel(id))
    }

    pub fn symbol(&self, label: PhonemeLabel) -> &str {
        &self.symbols[label.index()]
    }

    /// Number of entries including the gap.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the gap is always present
    }

    /// All non-gap labels in id order.
    pub fn labels(&self) -> impl Iterator<Item = PhonemeLabel> + '_ {
        (1..self.symbols.len()).map(|i| PhonemeLabel(i as u16))
    }
}

/// Ordered phoneme labels for one utterance. Never contains the gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeSeq {
    pub utterance_id: String,
    phones: Vec<PhonemeLabel>,
}

impl PhonemeSeq {
    /// Build a sequence; returns None if any label is the gap.
    pub fn new(utterance_id: impl Into<String>, phones: Vec<PhonemeLabel>) -> Option<Self> {
        if phones.iter().any(|p| p.is_gap()) {
            return None;
        }
        Some(PhonemeSeq {
            utterance_id: utterance_id.into(),
            phones,
        })
    }

    /// Intern whitespace-separated symbols into `inv` and build a sequence.
    pub fn parse(utterance_id: impl Into<String>, text: &str, inv: &mut Inventory) -> Option<Self> {
        let phones = text
            .split_whitespace()
            .map(|tok| inv.intern(tok))
            .collect::<Option<Vec<_>>>()?;
        Self::new(utterance_id, phones)
    }

    pub fn phones(&self) -> &[PhonemeLabel] {
        &self.phones
    }

    pub fn len(&self) -> usize {
        self.phones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phones.is_empty()
    }
}

impl fmt::Display for PhonemeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
