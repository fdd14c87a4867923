//! The Pauli labeling attached to Bell outcomes, products of labels modulo
//! global phase, and the outcome-to-correction classification.
//!
//! Label i corresponds to Bell outcome Φⁱ: σ₀ = I, σ₁ = σ_z, σ₂ = σ_x,
//! σ₃ = σ_y. Corrections are tracked as labels mod phase everywhere;
//! phased matrices appear only in the test oracle.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::DenseOperator;
use crate::states::BellIndex;

/// A single-qubit Pauli operator, labeled in the Bell-outcome order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLabel {
    I = 0,
    Z = 1,
    X = 2,
    Y = 3,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::Z, PauliLabel::X, PauliLabel::Y];

    pub fn from_index(index: usize) -> Result<Self> {
        Self::ALL
            .get(index)
            .copied()
            .ok_or_else(|| Error::contract(format!("Pauli index {index} outside 0..=3")))
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// The 2×2 matrix of this Pauli.
    pub fn matrix(self) -> DenseOperator {
        let e = Complex64::new;
        let entries = match self {
            PauliLabel::I => vec![e(1., 0.), e(0., 0.), e(0., 0.), e(1., 0.)],
            PauliLabel::Z => vec![e(1., 0.), e(0., 0.), e(0., 0.), e(-1., 0.)],
            PauliLabel::X => vec![e(0., 0.), e(1., 0.), e(1., 0.), e(0., 0.)],
            PauliLabel::Y => vec![e(0., 0.), e(0., -1.), e(0., 1.), e(0., 0.)],
        };
        DenseOperator::from_entries(2, entries).expect("2x2 Pauli entries")
    }
}

impl From<BellIndex> for PauliLabel {
    /// The measurement-outcome association: Bell outcome Φⁱ carries Pauli
    /// label i.
    fn from(i: BellIndex) -> Self {
        Self::ALL[i.index()]
    }
}

impl std::fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            PauliLabel::I => "I",
            PauliLabel::Z => "Z",
            PauliLabel::X => "X",
            PauliLabel::Y => "Y",
        };
        f.write_str(name)
    }
}

/// Product of two Pauli labels up to a global phase: σ_a σ_b ∝ σ_c.
///
/// Mod phase the Paulis form the Klein four-group. In (x, z)-bit coordinates
/// I = (0,0), Z = (0,1), X = (1,0), Y = (1,1), multiplication is bitwise
/// XOR, and this labeling makes it an XOR of the label values themselves.
pub fn pauli_mul_mod_phase(a: PauliLabel, b: PauliLabel) -> PauliLabel {
    PauliLabel::ALL[a.index() ^ b.index()]
}

/// Bell outcomes of the three measurements: `l` for the pair (A, E),
/// `j` for (B, F), `k` for (C, G).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomeTriple {
    pub l: BellIndex,
    pub j: BellIndex,
    pub k: BellIndex,
}

impl OutcomeTriple {
    pub fn new(l: BellIndex, j: BellIndex, k: BellIndex) -> Self {
        Self { l, j, k }
    }

    /// All 64 outcome triples in lexicographic (l, j, k) order.
    pub fn all() -> impl Iterator<Item = OutcomeTriple> {
        BellIndex::ALL.into_iter().flat_map(|l| {
            BellIndex::ALL
                .into_iter()
                .flat_map(move |j| BellIndex::ALL.into_iter().map(move |k| Self::new(l, j, k)))
        })
    }

    /// Position of this triple in the canonical 64-entry table.
    pub fn flat_index(self) -> usize {
        self.l.index() * 16 + self.j.index() * 4 + self.k.index()
    }

    pub fn from_flat_index(index: usize) -> Result<Self> {
        if index >= 64 {
            return Err(Error::contract(format!(
                "triple index {index} outside 0..=63"
            )));
        }
        Ok(Self::new(
            BellIndex::new((index / 16) as u8)?,
            BellIndex::new(((index / 4) % 4) as u8)?,
            BellIndex::new((index % 4) as u8)?,
        ))
    }
}

impl std::fmt::Display for OutcomeTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.l, self.j, self.k)
    }
}

/// The four outcome classes, identified with the correction each demands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CorrectionClass {
    I,
    II,
    III,
    IV,
}

impl CorrectionClass {
    pub const ALL: [CorrectionClass; 4] = [
        CorrectionClass::I,
        CorrectionClass::II,
        CorrectionClass::III,
        CorrectionClass::IV,
    ];

    /// The Pauli the receiving party applies for outcomes in this class.
    pub fn correction(self) -> PauliLabel {
        PauliLabel::ALL[self as usize]
    }

    pub fn of_correction(label: PauliLabel) -> Self {
        Self::ALL[label.index()]
    }
}

impl std::fmt::Display for CorrectionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CorrectionClass::I => "I",
            CorrectionClass::II => "II",
            CorrectionClass::III => "III",
            CorrectionClass::IV => "IV",
        };
        f.write_str(name)
    }
}

/// The Pauli correction for an outcome triple: the mod-phase product of the
/// three outcome labels. Paulis are self-inverse mod phase, so applying
/// exactly this operator undoes the measurement back-action.
pub fn correction_for(outcome: OutcomeTriple) -> PauliLabel {
    let product = pauli_mul_mod_phase(outcome.l.into(), outcome.j.into());
    pauli_mul_mod_phase(product, outcome.k.into())
}

/// Classification of the triple by its correction.
pub fn class_of(outcome: OutcomeTriple) -> CorrectionClass {
    CorrectionClass::of_correction(correction_for(outcome))
}

/// Partitions all 64 outcome triples into the four correction classes,
/// 16 triples each.
pub fn correction_classes() -> BTreeMap<CorrectionClass, BTreeSet<OutcomeTriple>> {
    let mut classes: BTreeMap<CorrectionClass, BTreeSet<OutcomeTriple>> = CorrectionClass::ALL
        .iter()
        .map(|&c| (c, BTreeSet::new()))
        .collect();
    for triple in OutcomeTriple::all() {
        classes
            .get_mut(&class_of(triple))
            .expect("all classes present")
            .insert(triple);
    }
    classes
}
