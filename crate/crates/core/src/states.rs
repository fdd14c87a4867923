//! Constructors for every named state of the protocols: the input qubit,
//! the asymmetric telecloning state, the four-partite GHZ resource, the
//! Bell basis, and the Smolin (unlockable bound entangled) resource.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{tensor, DenseOperator, MixedState, PureState};
use crate::tol;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Parameters of the diluted input: amplitudes (α, β) of the source qubit
/// and the asymmetry weight p. Derived: q = 1 − p and the normalizer
/// N = 1 + p² + q².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelecloningParams {
    alpha: f64,
    beta: f64,
    p: f64,
}

impl TelecloningParams {
    pub fn new(alpha: f64, beta: f64, p: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && p.is_finite()) {
            return Err(Error::contract("parameters must be finite"));
        }
        let norm = alpha * alpha + beta * beta;
        if (norm - 1.0).abs() > tol::ACCUMULATED {
            return Err(Error::contract(format!(
                "alpha^2 + beta^2 = 1 is required, got {norm}"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::contract(format!("p = {p} outside [0, 1]")));
        }
        Ok(Self { alpha, beta, p })
    }

    /// Like [`TelecloningParams::new`] with β defaulted to +√(1 − α²).
    pub fn with_default_beta(alpha: f64, p: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha.abs() > 1.0 + tol::ACCUMULATED {
            return Err(Error::contract(format!(
                "alpha^2 + beta^2 = 1 is required, got alpha = {alpha} with no beta"
            )));
        }
        let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
        Self::new(alpha, beta, p)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// N = 1 + p² + q².
    pub fn normalizer(&self) -> f64 {
        1.0 + self.p * self.p + self.q() * self.q()
    }

    /// Whether p > q. The construction is well defined on all of [0, 1];
    /// this regime is merely the conventional one, so callers may warn
    /// rather than reject.
    pub fn in_asymmetric_regime(&self) -> bool {
        self.p > self.q()
    }
}

/// Index of a Bell state Φ⁰..Φ³.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BellIndex(u8);

impl BellIndex {
    pub const ALL: [BellIndex; 4] = [BellIndex(0), BellIndex(1), BellIndex(2), BellIndex(3)];

    pub fn new(value: u8) -> Result<Self> {
        if value < 4 {
            Ok(BellIndex(value))
        } else {
            Err(Error::contract(format!("Bell index {value} outside 0..=3")))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// True for Φ² and Φ³, which live on antiparallel bits |01⟩, |10⟩.
    pub fn antiparallel(self) -> bool {
        self.0 >= 2
    }
}

impl std::fmt::Display for BellIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Phi{}", self.0)
    }
}

/// The source qubit α|0⟩ + β|1⟩.
pub fn input_state(params: &TelecloningParams) -> PureState {
    PureState::normalized(
        1,
        vec![
            Complex64::new(params.alpha(), 0.0),
            Complex64::new(params.beta(), 0.0),
        ],
    )
    .expect("validated parameters give a normalizable qubit")
}

/// The three-qubit asymmetric telecloning state on (A, B, C):
/// α(|000⟩ + p|101⟩ + q|110⟩)/√N + β(|111⟩ + p|010⟩ + q|001⟩)/√N.
pub fn telecloning_state(params: &TelecloningParams) -> PureState {
    let (a, b) = (params.alpha(), params.beta());
    let (p, q) = (params.p(), params.q());
    let root_n = params.normalizer().sqrt();
    let mut amps = vec![Complex64::ZERO; 8];
    amps[0b000] = Complex64::new(a / root_n, 0.0);
    amps[0b101] = Complex64::new(a * p / root_n, 0.0);
    amps[0b110] = Complex64::new(a * q / root_n, 0.0);
    amps[0b111] = Complex64::new(b / root_n, 0.0);
    amps[0b010] = Complex64::new(b * p / root_n, 0.0);
    amps[0b001] = Complex64::new(b * q / root_n, 0.0);
    PureState::normalized(3, amps).expect("validated parameters give a normalizable state")
}

/// The four-partite GHZ resource (|0000⟩ + |1111⟩)/√2 on (D, E, F, G).
pub fn ghz4() -> PureState {
    let mut amps = vec![Complex64::ZERO; 16];
    amps[0b0000] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[0b1111] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(4, amps).expect("GHZ amplitudes are normalized")
}

/// Bell state Φ⁰ = (|00⟩+|11⟩)/√2, Φ¹ = (|00⟩−|11⟩)/√2,
/// Φ² = (|01⟩+|10⟩)/√2, Φ³ = (|01⟩−|10⟩)/√2.
pub fn bell_state(i: BellIndex) -> PureState {
    let h = FRAC_1_SQRT_2;
    let amps = match i.index() {
        0 => [h, 0.0, 0.0, h],
        1 => [h, 0.0, 0.0, -h],
        2 => [0.0, h, h, 0.0],
        _ => [0.0, h, -h, 0.0],
    };
    PureState::new(2, amps.iter().map(|&re| Complex64::new(re, 0.0)).collect())
        .expect("Bell amplitudes are normalized")
}

/// Projector |Φⁱ⟩⟨Φⁱ| on a qubit pair.
pub fn bell_projector(i: BellIndex) -> DenseOperator {
    DenseOperator::projector(&bell_state(i))
}

/// The four Bell projectors in index order; a complete orthogonal set.
pub fn bell_projectors() -> Vec<DenseOperator> {
    BellIndex::ALL.iter().map(|&i| bell_projector(i)).collect()
}

/// The Smolin state on (D, E, F, G): an equal-weight mixture of
/// |Φⁱ⟩_DE ⊗ |Φⁱ⟩_FG over the four Bell indices.
pub fn smolin_state() -> MixedState {
    let ensemble = BellIndex::ALL
        .iter()
        .map(|&i| (0.25, tensor(&bell_state(i), &bell_state(i))))
        .collect();
    MixedState::new(ensemble).expect("four equal weights sum to 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{fidelity_pure, partial_transpose};

    #[test]
    fn params_validation() {
        assert!(TelecloningParams::new(0.6, 0.8, 0.7).is_ok());
        assert!(TelecloningParams::new(0.6, 0.7, 0.7).is_err());
        assert!(TelecloningParams::new(0.6, 0.8, 1.2).is_err());
        assert!(TelecloningParams::new(f64::NAN, 0.8, 0.5).is_err());
        assert!(TelecloningParams::with_default_beta(2.0, 0.5).is_err());

        let p = TelecloningParams::with_default_beta(0.28, 0.7).unwrap();
        assert!((p.beta() - (1.0f64 - 0.28 * 0.28).sqrt()).abs() < 1e-15);
        assert_eq!(p.q(), 1.0 - 0.7);
        assert_eq!(p.normalizer(), 1.0 + 0.7 * 0.7 + p.q() * p.q());
        assert!(p.in_asymmetric_regime());
        assert!(!TelecloningParams::with_default_beta(1.0, 0.5)
            .unwrap()
            .in_asymmetric_regime());
    }

    #[test]
    fn input_state_amplitudes() {
        let s = input_state(&TelecloningParams::new(1.0, 0.0, 0.5).unwrap());
        assert_eq!(s.amplitude(0).re, 1.0);
        let s = input_state(&TelecloningParams::new(0.0, 1.0, 0.5).unwrap());
        assert_eq!(s.amplitude(1).re, 1.0);
        let s = input_state(&TelecloningParams::new(0.6, 0.8, 0.5).unwrap());
        assert!((s.amplitude(0).re - 0.6).abs() < 1e-15);
        assert!((s.amplitude(1).re - 0.8).abs() < 1e-15);
    }

    #[test]
    fn telecloning_state_collapses_at_p_one() {
        // q = 0 leaves (|000⟩ + |101⟩)/√2.
        let params = TelecloningParams::new(1.0, 0.0, 1.0).unwrap();
        let s = telecloning_state(&params);
        let h = FRAC_1_SQRT_2;
        assert!((s.amplitude(0b000).re - h).abs() < 1e-15);
        assert!((s.amplitude(0b101).re - h).abs() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn telecloning_state_direct_substitution() {
        let params = TelecloningParams::new(1.0, 0.0, 0.7).unwrap();
        let s = telecloning_state(&params);
        let root_n = params.normalizer().sqrt();
        assert!((params.normalizer() - 1.58).abs() < 1e-12);
        assert!((s.amplitude(0b000).re - 1.0 / root_n).abs() < 1e-15);
        assert!((s.amplitude(0b101).re - 0.7 / root_n).abs() < 1e-15);
        assert!((s.amplitude(0b110).re - 0.3 / root_n).abs() < 1e-15);
        for idx in [0b001, 0b010, 0b011, 0b100, 0b111] {
            assert_eq!(s.amplitude(idx), Complex64::ZERO);
        }
    }

    #[test]
    fn telecloning_state_symmetric_case() {
        // p = q = 1/2, N = 3/2.
        let params = TelecloningParams::new(0.6, 0.8, 0.5).unwrap();
        let s = telecloning_state(&params);
        let root_n = (1.5f64).sqrt();
        assert!((s.amplitude(0b000).re - 0.6 / root_n).abs() < 1e-15);
        assert!((s.amplitude(0b101).re - 0.3 / root_n).abs() < 1e-15);
        assert!((s.amplitude(0b110).re - 0.3 / root_n).abs() < 1e-15);
        assert!((s.amplitude(0b111).re - 0.8 / root_n).abs() < 1e-15);
        assert!((s.amplitude(0b010).re - 0.4 / root_n).abs() < 1e-15);
        assert!((s.amplitude(0b001).re - 0.4 / root_n).abs() < 1e-15);
    }

    #[test]
    fn telecloning_support_sets() {
        let alpha_only = telecloning_state(&TelecloningParams::new(1.0, 0.0, 0.7).unwrap());
        for idx in 0..8 {
            let in_support = [0b000, 0b101, 0b110].contains(&idx);
            assert_eq!(alpha_only.amplitude(idx).norm() > 0.0, in_support);
        }
        let beta_only = telecloning_state(&TelecloningParams::new(0.0, 1.0, 0.7).unwrap());
        for idx in 0..8 {
            let in_support = [0b111, 0b010, 0b001].contains(&idx);
            assert_eq!(beta_only.amplitude(idx).norm() > 0.0, in_support);
        }
    }

    #[test]
    fn telecloning_norm_over_grid() {
        for p10 in 0..=10 {
            for &alpha in &[0.0, 0.28, 0.6, 0.8, 1.0] {
                let params =
                    TelecloningParams::with_default_beta(alpha, f64::from(p10) / 10.0).unwrap();
                let s = telecloning_state(&params);
                assert!((s.norm_sqr() - 1.0).abs() < tol::STRUCTURAL);
            }
        }
    }

    #[test]
    fn ghz_amplitudes_and_marginals() {
        let g = ghz4();
        assert!((g.amplitude(0).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((g.amplitude(15).re - FRAC_1_SQRT_2).abs() < 1e-15);
        for q in 0..4 {
            let rho = g.partial_trace(&[q]).unwrap();
            assert!(rho.max_abs_diff(&DenseOperator::identity(2).scaled(0.5)) < 1e-15);
        }
        // Inner product with Φ⁰ ⊗ Φ⁰ worked out by hand: 1/√2, so overlap 1/2.
        let pair = tensor(&bell_state(BellIndex(0)), &bell_state(BellIndex(0)));
        assert!((fidelity_pure(&g, &pair).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bell_states_match_definitions() {
        let h = FRAC_1_SQRT_2;
        let s = bell_state(BellIndex(0));
        assert!((s.amplitude(0).re - h).abs() < 1e-15 && (s.amplitude(3).re - h).abs() < 1e-15);
        let s = bell_state(BellIndex(3));
        assert!((s.amplitude(1).re - h).abs() < 1e-15 && (s.amplitude(2).re + h).abs() < 1e-15);
        assert!(BellIndex::new(4).is_err());
    }

    #[test]
    fn bell_states_orthonormal_and_complete() {
        for &i in &BellIndex::ALL {
            for &j in &BellIndex::ALL {
                let overlap = bell_state(i).inner(&bell_state(j)).unwrap().norm();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((overlap - expected).abs() < tol::STRUCTURAL);
            }
        }
        let mut sum = DenseOperator::zeros(4);
        for p in bell_projectors() {
            assert!(p.max_abs_diff(&p.mul(&p).unwrap()) < tol::STRUCTURAL);
            assert!(p.is_hermitian(tol::STRUCTURAL));
            sum = sum.add(&p).unwrap();
        }
        assert!(sum.max_abs_diff(&DenseOperator::identity(4)) < tol::STRUCTURAL);
    }

    #[test]
    fn smolin_structure() {
        let s = smolin_state();
        for (w, _) in s.ensemble() {
            assert!((w - 0.25).abs() < 1e-15);
        }
        let rho = s.to_density();
        assert!((rho.trace().re - 1.0).abs() < tol::STRUCTURAL);
        assert!(rho.is_hermitian(tol::STRUCTURAL));
        // Rank 4: four eigenvalues 1/4, the rest zero.
        let eigs = rho.eigenvalues().unwrap();
        let nonzero: Vec<f64> = eigs.iter().copied().filter(|e| e.abs() > 1e-9).collect();
        assert_eq!(nonzero.len(), 4);
        assert!(nonzero.iter().all(|e| (e - 0.25).abs() < 1e-9));
        assert!(eigs[0] > tol::PSD_FLOOR);
        // Every single-qubit marginal is maximally mixed.
        for q in 0..4 {
            let marginal = s.partial_trace(&[q]).unwrap();
            assert!(marginal.max_abs_diff(&DenseOperator::identity(2).scaled(0.5)) < 1e-12);
        }
        // Tracing out (D, E) leaves I/4 on (F, G): the Bell projectors
        // average to the maximally mixed state.
        let fg = s.partial_trace(&[2, 3]).unwrap();
        assert!(fg.max_abs_diff(&DenseOperator::identity(4).scaled(0.25)) < 1e-12);
    }

    #[test]
    fn smolin_pair_swap_symmetry() {
        // Swapping the pair (D, E) with (F, G) permutes ensemble members
        // into themselves, so the dense matrices agree.
        let rho = smolin_state().to_density();
        let swap = |i: usize| ((i & 0b0011) << 2) | ((i & 0b1100) >> 2);
        let mut entries = vec![Complex64::ZERO; 16 * 16];
        for r in 0..16 {
            for c in 0..16 {
                entries[swap(r) * 16 + swap(c)] = rho.get(r, c);
            }
        }
        let permuted = DenseOperator::from_entries(16, entries).unwrap();
        assert!(permuted.max_abs_diff(&rho) < tol::STRUCTURAL);
    }

    #[test]
    fn smolin_positive_partial_transpose_across_two_two_cuts() {
        let rho = smolin_state().to_density();
        for cut in [[0usize, 1], [0, 2], [0, 3]] {
            let pt = partial_transpose(&rho, &cut).unwrap();
            let min_eig = pt.eigenvalues().unwrap()[0];
            assert!(min_eig >= tol::PSD_FLOOR, "cut {cut:?}: {min_eig}");
        }
    }
}
