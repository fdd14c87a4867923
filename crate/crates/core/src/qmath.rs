//! Dense complex linear algebra for small multi-qubit registers: pure and
//! mixed states, tensor products, local operator application, projective
//! measurement, partial trace, partial transpose, and fidelities.
//!
//! Qubit 0 is the most significant bit of a basis index, so for a
//! three-qubit register the ket |abc⟩ sits at index 4a + 2b + c. Global
//! phases are never normalized away; callers compare squared-magnitude
//! quantities only.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

mod eigen;

/// Hilbert-space dimension of an `n`-qubit register.
pub const fn dim_for(num_qubits: usize) -> usize {
    1 << num_qubits
}

/// Bit of `qubit` inside basis `index` for a register of `num_qubits`.
#[inline]
pub(crate) fn bit_of(index: usize, num_qubits: usize, qubit: usize) -> usize {
    (index >> (num_qubits - 1 - qubit)) & 1
}

fn check_targets(targets: &[usize], num_qubits: usize) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::contract("target qubit list is empty"));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(Error::contract(format!(
                "target qubit {t} out of range for {num_qubits}-qubit register"
            )));
        }
        if targets[..i].contains(&t) {
            return Err(Error::contract(format!("duplicate target qubit {t}")));
        }
    }
    Ok(())
}

/// A normalized pure state over a fixed qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes that are already normalized
    /// (squared norm within [`tol::STRUCTURAL`] of 1).
    pub fn new(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        let state = Self::validated(num_qubits, amps)?;
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::contract(format!(
                "state squared norm {norm_sqr} differs from 1 beyond {:e}",
                tol::STRUCTURAL
            )));
        }
        Ok(state)
    }

    /// Builds a state from unnormalized amplitudes, rescaling to unit norm.
    pub fn normalized(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        let mut state = Self::validated(num_qubits, amps)?;
        let norm_sqr = state.norm_sqr();
        if norm_sqr <= tol::PROB_FLOOR {
            return Err(Error::contract(
                "cannot normalize a vector of (near-)zero norm",
            ));
        }
        let scale = norm_sqr.sqrt().recip();
        for a in &mut state.amps {
            *a *= scale;
        }
        Ok(state)
    }

    fn validated(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != dim_for(num_qubits) {
            return Err(Error::contract(format!(
                "amplitude vector of length {} does not match {num_qubits} qubits",
                amps.len()
            )));
        }
        if !amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::contract("amplitudes must be finite"));
        }
        Ok(Self { num_qubits, amps })
    }

    /// The computational basis state at `index`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        assert!(index < dim_for(num_qubits), "basis index out of range");
        let mut amps = vec![Complex64::ZERO; dim_for(num_qubits)];
        amps[index] = Complex64::ONE;
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// A unit-norm copy; used after projective branches, which shrink the
    /// norm.
    pub fn renormalized(&self) -> Result<PureState> {
        Self::normalized(self.num_qubits, self.amps.clone())
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::contract("inner product of mismatched registers"));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Reduced density matrix on `keep`, tracing out every other qubit.
    /// The output indexes the kept qubits in the order listed.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DenseOperator> {
        check_targets(keep, self.num_qubits)?;
        let n = self.num_qubits;
        let env: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let kd = dim_for(keep.len());
        let ed = dim_for(env.len());

        // Scatter tables: basis index contribution of each sub-configuration.
        let scatter = |qubits: &[usize], sub: usize| -> usize {
            qubits
                .iter()
                .enumerate()
                .map(|(pos, &q)| ((sub >> (qubits.len() - 1 - pos)) & 1) << (n - 1 - q))
                .sum()
        };
        let keep_base: Vec<usize> = (0..kd).map(|x| scatter(keep, x)).collect();
        let env_base: Vec<usize> = (0..ed).map(|e| scatter(&env, e)).collect();

        let mut rho = DenseOperator::zeros(kd);
        for x in 0..kd {
            for y in 0..kd {
                let mut acc = Complex64::ZERO;
                for &e in &env_base {
                    acc += self.amps[keep_base[x] + e] * self.amps[keep_base[y] + e].conj();
                }
                rho.entries[x * kd + y] = acc;
            }
        }
        Ok(rho)
    }

    /// Extracts the single-qubit state of `qubit` when it factors out of the
    /// register, preserving relative phase. Errors if the qubit is still
    /// entangled with the rest.
    pub fn factor_qubit(&self, qubit: usize) -> Result<PureState> {
        check_targets(&[qubit], self.num_qubits)?;
        let rho = self.partial_trace(&[qubit])?;
        let purity = rho.mul(&rho)?.trace().re;
        if (1.0 - purity) > tol::ACCUMULATED {
            return Err(Error::contract(format!(
                "qubit {qubit} is entangled with the rest (purity {purity})"
            )));
        }
        // The qubit factors, so every slice over the remaining qubits is
        // proportional to the same single-qubit vector; read it off the
        // largest slice.
        let shift = self.num_qubits - 1 - qubit;
        let low_mask = (1usize << shift) - 1;
        let rest_dim = dim_for(self.num_qubits - 1);
        let idx =
            |d: usize, r: usize| ((r >> shift) << (shift + 1)) | (d << shift) | (r & low_mask);
        let best = (0..rest_dim)
            .max_by(|&a, &b| {
                let wa = self.amps[idx(0, a)].norm_sqr() + self.amps[idx(1, a)].norm_sqr();
                let wb = self.amps[idx(0, b)].norm_sqr() + self.amps[idx(1, b)].norm_sqr();
                wa.total_cmp(&wb)
            })
            .expect("register has at least one slice");
        PureState::normalized(1, vec![self.amps[idx(0, best)], self.amps[idx(1, best)]])
    }
}

/// A mixed state stored as an ensemble of weighted pure states. The dense
/// density matrix is a derived view used for cross-checks and transposes.
#[derive(Debug, Clone)]
pub struct MixedState {
    num_qubits: usize,
    ensemble: Vec<(f64, PureState)>,
}

impl MixedState {
    pub fn new(ensemble: Vec<(f64, PureState)>) -> Result<Self> {
        let Some((_, first)) = ensemble.first() else {
            return Err(Error::contract("ensemble is empty"));
        };
        let num_qubits = first.num_qubits();
        let mut total = 0.0;
        for (w, s) in &ensemble {
            if !(*w > 0.0 && *w <= 1.0) {
                return Err(Error::contract(format!(
                    "ensemble weight {w} not in (0, 1]"
                )));
            }
            if s.num_qubits() != num_qubits {
                return Err(Error::contract("ensemble members differ in register size"));
            }
            total += w;
        }
        if (total - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::contract(format!(
                "ensemble weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            num_qubits,
            ensemble,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ensemble(&self) -> &[(f64, PureState)] {
        &self.ensemble
    }

    /// Dense density matrix Σ w |s⟩⟨s|.
    pub fn to_density(&self) -> DenseOperator {
        let dim = dim_for(self.num_qubits);
        let mut rho = DenseOperator::zeros(dim);
        for (w, s) in &self.ensemble {
            let amps = s.amplitudes();
            for r in 0..dim {
                for c in 0..dim {
                    rho.entries[r * dim + c] += *w * amps[r] * amps[c].conj();
                }
            }
        }
        rho
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DenseOperator> {
        let mut acc: Option<DenseOperator> = None;
        for (w, s) in &self.ensemble {
            let part = s.partial_trace(keep)?.scaled(*w);
            acc = Some(match acc {
                Some(a) => a.add(&part)?,
                None => part,
            });
        }
        Ok(acc.expect("ensemble is non-empty"))
    }

    /// Outcome probabilities of a projective measurement, computed along the
    /// ensemble route: Σ w ⟨s|P_i|s⟩ per projector.
    pub fn outcome_probabilities(
        &self,
        projectors: &[DenseOperator],
        targets: &[usize],
    ) -> Result<Vec<f64>> {
        let mut probs = vec![0.0; projectors.len()];
        for (w, s) in &self.ensemble {
            for (i, p) in projectors.iter().enumerate() {
                let projected = apply_local(p, targets, s)?;
                probs[i] += w * s.inner(&projected)?.re;
            }
        }
        Ok(probs)
    }
}

/// A dense square operator on a power-of-two dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>, // row-major
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        assert!(
            dim.is_power_of_two(),
            "operator dimension must be a power of two"
        );
        Self {
            dim,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = Complex64::ONE;
        }
        op
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if !dim.is_power_of_two() {
            return Err(Error::contract(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        if entries.len() != dim * dim {
            return Err(Error::contract(format!(
                "entry count {} does not match dimension {dim}",
                entries.len()
            )));
        }
        if !entries.iter().all(|e| e.re.is_finite() && e.im.is_finite()) {
            return Err(Error::contract("operator entries must be finite"));
        }
        Ok(Self { dim, entries })
    }

    /// Rank-one projector |s⟩⟨s|.
    pub fn projector(s: &PureState) -> Self {
        let dim = dim_for(s.num_qubits());
        let mut op = Self::zeros(dim);
        let amps = s.amplitudes();
        for r in 0..dim {
            for c in 0..dim {
                op.entries[r * dim + c] = amps[r] * amps[c].conj();
            }
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.entries[c * self.dim + r] = self.entries[r * self.dim + c].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::contract("operator product of mismatched dimensions"));
        }
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..d {
                    out.entries[r * d + c] += a * other.entries[k * d + c];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::contract("operator sum of mismatched dimensions"));
        }
        let mut out = self.clone();
        for (o, e) in out.entries.iter_mut().zip(&other.entries) {
            *o += e;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::contract(
                "operator difference of mismatched dimensions",
            ));
        }
        let mut out = self.clone();
        for (o, e) in out.entries.iter_mut().zip(&other.entries) {
            *o -= e;
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e *= factor;
        }
        out
    }

    /// Kronecker product, `self` on the more significant factor.
    pub fn tensor_with(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut out = Self::zeros(dim);
        for ra in 0..da {
            for ca in 0..da {
                let a = self.entries[ra * da + ca];
                if a == Complex64::ZERO {
                    continue;
                }
                for rb in 0..db {
                    for cb in 0..db {
                        out.entries[(ra * db + rb) * dim + (ca * db + cb)] =
                            a * other.entries[rb * db + cb];
                    }
                }
            }
        }
        out
    }

    /// Embeds a local operator on `targets` into the full register, acting
    /// as the identity elsewhere.
    pub fn embed(&self, targets: &[usize], num_qubits: usize) -> Result<Self> {
        check_targets(targets, num_qubits)?;
        if self.dim != dim_for(targets.len()) {
            return Err(Error::contract(format!(
                "operator dimension {} does not match {} target qubits",
                self.dim,
                targets.len()
            )));
        }
        let n = num_qubits;
        let full = dim_for(n);
        let sub_index = |i: usize| -> usize {
            targets
                .iter()
                .fold(0, |acc, &t| (acc << 1) | bit_of(i, n, t))
        };
        let non_target_mask: usize = (0..n)
            .filter(|q| !targets.contains(q))
            .map(|q| 1usize << (n - 1 - q))
            .sum();
        let mut out = Self::zeros(full);
        for r in 0..full {
            for c in 0..full {
                if (r & non_target_mask) == (c & non_target_mask) {
                    out.entries[r * full + c] =
                        self.entries[sub_index(r) * self.dim + sub_index(c)];
                }
            }
        }
        Ok(out)
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        for r in 0..self.dim {
            for c in 0..self.dim {
                let d = self.entries[r * self.dim + c] - self.entries[c * self.dim + r].conj();
                if d.norm() > tolerance {
                    return false;
                }
            }
        }
        true
    }

    /// Largest entrywise magnitude difference against `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Expectation value ⟨s|O|s⟩.
    pub fn expectation(&self, s: &PureState) -> Result<Complex64> {
        if self.dim != dim_for(s.num_qubits()) {
            return Err(Error::contract("expectation on mismatched dimensions"));
        }
        let v = self.matvec(s.amplitudes());
        Ok(s.amplitudes()
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub(crate) fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        self.entries
            .chunks_exact(d)
            .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
            .collect()
    }

    /// Eigenvalues of a Hermitian operator, ascending. Computed by cyclic
    /// Jacobi on the real symmetric block embedding [[Re, -Im], [Im, Re]].
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_hermitian(tol::ACCUMULATED) {
            return Err(Error::contract(
                "eigenvalues requested for a non-Hermitian operator",
            ));
        }
        Ok(eigen::hermitian_eigenvalues(self.dim, &self.entries))
    }
}

/// Tensor product of two pure states; `a` occupies the more significant
/// qubits.
pub fn tensor(a: &PureState, b: &PureState) -> PureState {
    let nb = b.num_qubits();
    let mut amps = vec![Complex64::ZERO; dim_for(a.num_qubits() + nb)];
    for (i, &ai) in a.amplitudes().iter().enumerate() {
        if ai == Complex64::ZERO {
            continue;
        }
        for (j, &bj) in b.amplitudes().iter().enumerate() {
            amps[(i << nb) | j] = ai * bj;
        }
    }
    PureState {
        num_qubits: a.num_qubits() + nb,
        amps,
    }
}

/// Applies an operator to the listed target qubits, leaving the rest
/// untouched. `targets[0]` is the most significant bit of the operator's
/// index space. The norm is preserved exactly when the operator is unitary.
pub fn apply_local(op: &DenseOperator, targets: &[usize], state: &PureState) -> Result<PureState> {
    let n = state.num_qubits();
    check_targets(targets, n)?;
    let sub_dim = dim_for(targets.len());
    if op.dim() != sub_dim {
        return Err(Error::contract(format!(
            "operator dimension {} does not match {} target qubits",
            op.dim(),
            targets.len()
        )));
    }

    // Per-target bit positions in the full index, plus scatter offsets for
    // every operator-column configuration.
    let shifts: Vec<usize> = targets.iter().map(|&t| n - 1 - t).collect();
    let scatter: Vec<usize> = (0..sub_dim)
        .map(|s| {
            shifts
                .iter()
                .enumerate()
                .map(|(pos, &sh)| ((s >> (targets.len() - 1 - pos)) & 1) << sh)
                .sum()
        })
        .collect();
    let target_mask: usize = shifts.iter().map(|&sh| 1usize << sh).sum();

    let dim = dim_for(n);
    let amps = state.amplitudes();
    let mut out = vec![Complex64::ZERO; dim];
    for base in 0..dim {
        if base & target_mask != 0 {
            continue; // visit each non-target configuration once
        }
        for row in 0..sub_dim {
            let mut acc = Complex64::ZERO;
            for (col, &offset) in scatter.iter().enumerate() {
                acc += op.get(row, col) * amps[base | offset];
            }
            out[base | scatter[row]] = acc;
        }
    }
    Ok(PureState {
        num_qubits: n,
        amps: out,
    })
}

/// Result of a projective measurement.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcome: usize,
    pub probability: f64,
    pub post_state: PureState,
}

/// Projective measurement on the target qubits. Outcome `i` occurs with
/// probability ⟨s|P_i|s⟩; the outcome is selected by inverse CDF against
/// `u`, and the post state is the renormalized projection. The projectors
/// are expected to form a complete orthogonal set on the target subspace;
/// an incomplete set that absorbs the whole state surfaces as
/// [`Error::InvalidMeasurement`].
pub fn measure_projective(
    projectors: &[DenseOperator],
    targets: &[usize],
    state: &PureState,
    u: f64,
) -> Result<Measurement> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::contract(format!(
            "measurement draw {u} outside [0, 1)"
        )));
    }
    if projectors.is_empty() {
        return Err(Error::contract("projector list is empty"));
    }
    let mut branches = Vec::with_capacity(projectors.len());
    for p in projectors {
        let projected = apply_local(p, targets, state)?;
        let prob = state.inner(&projected)?.re;
        branches.push((prob, projected));
    }
    let max_prob = branches.iter().map(|(p, _)| *p).fold(f64::MIN, f64::max);
    if max_prob < tol::PROB_FLOOR {
        return Err(Error::InvalidMeasurement {
            floor: tol::PROB_FLOOR,
        });
    }

    let mut cumulative = 0.0;
    let mut chosen = None;
    for (i, (prob, _)) in branches.iter().enumerate() {
        cumulative += prob.max(0.0);
        if u < cumulative {
            chosen = Some(i);
            break;
        }
    }
    // Roundoff can leave u just past the accumulated total; fall back to the
    // last resolvable outcome.
    let outcome = match chosen {
        Some(i) => i,
        None => branches
            .iter()
            .rposition(|(p, _)| *p >= tol::PROB_FLOOR)
            .expect("at least one probability above the floor"),
    };
    let (probability, projected) = branches.swap_remove(outcome);
    let post_state = PureState::normalized(projected.num_qubits, projected.amps)?;
    Ok(Measurement {
        outcome,
        probability,
        post_state,
    })
}

/// Transposes a density matrix on the listed qubit subset.
pub fn partial_transpose(rho: &DenseOperator, subset: &[usize]) -> Result<DenseOperator> {
    let n = rho.dim().trailing_zeros() as usize;
    check_targets(subset, n)?;
    let dim = rho.dim();
    let mut out = DenseOperator::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let (mut tr, mut tc) = (r, c);
            for &q in subset {
                let sh = n - 1 - q;
                let (rb, cb) = ((r >> sh) & 1, (c >> sh) & 1);
                tr = (tr & !(1 << sh)) | (cb << sh);
                tc = (tc & !(1 << sh)) | (rb << sh);
            }
            out.entries[tr * dim + tc] = rho.entries[r * dim + c];
        }
    }
    Ok(out)
}

/// Overlap |⟨target|achieved⟩|² of two pure states.
pub fn fidelity_pure(target: &PureState, achieved: &PureState) -> Result<f64> {
    Ok(target.inner(achieved)?.norm_sqr())
}

/// Overlap ⟨target|ρ|target⟩ of a pure target with a density matrix.
pub fn fidelity_density(target: &PureState, rho: &DenseOperator) -> Result<f64> {
    Ok(rho.expectation(target)?.re)
}
