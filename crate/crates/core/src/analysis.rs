//! Headline comparisons between the two resources: exact outcome
//! distributions, information leakage against discrete priors, the
//! bound-entanglement characterization of the Smolin resource, and the
//! all-invariant verification run.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{
    class_of, correction_classes, correction_for, pauli_mul_mod_phase, CorrectionClass,
    OutcomeTriple, PauliLabel,
};
use crate::protocol::{
    enumerate_branches_with, order_independence_deviation, sample_distribution, BranchRecord,
    ResourceKind,
};
use crate::qmath::{apply_local, fidelity_density, partial_transpose, DenseOperator};
use crate::states::{
    bell_projector, bell_projectors, bell_state, ghz4, smolin_state, telecloning_state, BellIndex,
    TelecloningParams,
};
use crate::stats::chi_square_gof;
use crate::tol;

/// The exact outcome distribution of the three Bell measurements for one
/// resource and one input.
#[derive(Debug, Clone)]
pub struct DistributionTable {
    pub resource: ResourceKind,
    pub params: TelecloningParams,
    entries: Vec<(OutcomeTriple, f64)>,
}

impl DistributionTable {
    pub fn entries(&self) -> &[(OutcomeTriple, f64)] {
        &self.entries
    }

    pub fn probability_of(&self, t: OutcomeTriple) -> f64 {
        self.entries[t.flat_index()].1
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, p)| *p).collect()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }
}

/// Wraps the exact branch enumeration into a 64-entry distribution.
pub fn exact_distribution(
    resource: ResourceKind,
    params: &TelecloningParams,
) -> Result<DistributionTable> {
    let entries = crate::protocol::enumerate_branches(resource, params)?
        .into_iter()
        .map(|b| (b.outcome, b.probability))
        .collect();
    Ok(DistributionTable {
        resource,
        params: *params,
        entries,
    })
}

/// How much the public measurement record reveals about which input
/// hypothesis produced it.
#[derive(Debug, Clone)]
pub struct LeakageReport {
    pub resource: ResourceKind,
    pub prior: Vec<(f64, TelecloningParams)>,
    pub mutual_information_bits: f64,
    pub conditionals: Vec<DistributionTable>,
}

/// Shannon entropy in bits, with the 0·log 0 = 0 convention.
pub fn entropy_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|p| *p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Mutual information I(outcome; hypothesis) in bits for a discrete prior
/// of input hypotheses, computed from exact distributions:
/// H(Σ w·P(·|x)) − Σ w·H(P(·|x)).
pub fn mutual_information(
    resource: ResourceKind,
    prior: &[(f64, TelecloningParams)],
) -> Result<LeakageReport> {
    if prior.is_empty() {
        return Err(Error::contract("prior has no hypotheses"));
    }
    let mut total = 0.0;
    for (w, _) in prior {
        if !(*w > 0.0 && w.is_finite()) {
            return Err(Error::contract(format!(
                "prior weight {w} must be positive"
            )));
        }
        total += w;
    }
    if (total - 1.0).abs() > tol::ACCUMULATED {
        return Err(Error::contract(format!(
            "prior weights sum to {total}, not 1"
        )));
    }

    let conditionals: Vec<DistributionTable> = prior
        .iter()
        .map(|(_, params)| exact_distribution(resource, params))
        .collect::<Result<_>>()?;

    let mut mixture = vec![0.0f64; 64];
    let mut conditional_entropy = 0.0;
    for ((w, _), table) in prior.iter().zip(&conditionals) {
        for (slot, (_, p)) in mixture.iter_mut().zip(table.entries()) {
            *slot += w * p;
        }
        conditional_entropy += w * entropy_bits(table.probabilities());
    }
    let mutual_information_bits = entropy_bits(mixture) - conditional_entropy;

    Ok(LeakageReport {
        resource,
        prior: prior.to_vec(),
        mutual_information_bits,
        conditionals,
    })
}

/// Characterization of the Smolin resource: positivity under partial
/// transposition across every 2:2 cut, unlockability by a joint Bell
/// measurement, and maximally mixed single-qubit marginals.
#[derive(Debug, Clone)]
pub struct BoundEntanglementReport {
    /// Minimum partial-transpose eigenvalue per 2:2 cut of (D, E, F, G).
    pub ppt_min_eigenvalues: Vec<(String, f64)>,
    /// Fidelity of the conditional (F, G) state with the matching Bell
    /// state, per Bell outcome on (D, E).
    pub unlock_fidelities: [f64; 4],
    /// Largest entrywise deviation of each single-qubit marginal from I/2.
    pub marginal_deviations: [f64; 4],
}

impl BoundEntanglementReport {
    pub fn passed(&self) -> bool {
        self.ppt_min_eigenvalues
            .iter()
            .all(|(_, e)| *e >= tol::PSD_FLOOR)
            && self
                .unlock_fidelities
                .iter()
                .all(|f| (f - 1.0).abs() <= tol::STRUCTURAL)
            && self
                .marginal_deviations
                .iter()
                .all(|d| *d <= tol::STRUCTURAL)
    }
}

pub fn bound_entanglement_suite() -> Result<BoundEntanglementReport> {
    let smolin = smolin_state();
    let rho = smolin.to_density();

    let cuts: [(&str, [usize; 2]); 3] = [("DE|FG", [0, 1]), ("DF|EG", [0, 2]), ("DG|EF", [0, 3])];
    let mut ppt_min_eigenvalues = Vec::with_capacity(3);
    for (label, cut) in cuts {
        let min_eig = partial_transpose(&rho, &cut)?.eigenvalues()?[0];
        ppt_min_eigenvalues.push((label.to_string(), min_eig));
    }

    let mut unlock_fidelities = [0.0f64; 4];
    for (slot, &i) in BellIndex::ALL.iter().enumerate() {
        let projector = bell_projector(i);
        let mut conditional: Option<DenseOperator> = None;
        let mut probability = 0.0;
        for (w, member) in smolin.ensemble() {
            let projected = apply_local(&projector, &[0, 1], member)?;
            let contribution = w * projected.norm_sqr();
            probability += contribution;
            if contribution <= tol::PROB_FLOOR {
                continue;
            }
            let fg = projected
                .renormalized()?
                .partial_trace(&[2, 3])?
                .scaled(contribution);
            conditional = Some(match conditional {
                Some(acc) => acc.add(&fg)?,
                None => fg,
            });
        }
        let conditional = conditional
            .ok_or_else(|| Error::contract("Bell projection removed all ensemble weight"))?
            .scaled(probability.recip());
        unlock_fidelities[slot] = fidelity_density(&bell_state(i), &conditional)?;
    }

    let half = DenseOperator::identity(2).scaled(0.5);
    let mut marginal_deviations = [0.0f64; 4];
    for (q, slot) in marginal_deviations.iter_mut().enumerate() {
        *slot = smolin.partial_trace(&[q])?.max_abs_diff(&half);
    }

    Ok(BoundEntanglementReport {
        ppt_min_eigenvalues,
        unlock_fidelities,
        marginal_deviations,
    })
}

/// One line of the verification report.
#[derive(Debug, Clone)]
pub struct VerificationCheck {
    pub name: String,
    pub tolerance: f64,
    pub worst_deviation: f64,
    pub passed: bool,
}

/// The full invariant run: every check with its tolerance and the worst
/// deviation observed.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<VerificationCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, tolerance: f64, worst_deviation: f64) {
        self.checks.push(VerificationCheck {
            name: name.to_string(),
            tolerance,
            worst_deviation,
            passed: worst_deviation <= tolerance,
        });
    }
}

/// The standard verification grid: α ∈ {0, 0.28, 0.6, 0.8, 1} crossed with
/// p ∈ {0.5, 0.6, 0.7, 0.9, 1.0}.
pub fn default_grid() -> Vec<TelecloningParams> {
    grid_from(&[0.0, 0.28, 0.6, 0.8, 1.0], &[0.5, 0.6, 0.7, 0.9, 1.0])
}

/// A denser sweep: the same α values against p from 0 to 1 in steps of 0.1.
pub fn dense_grid() -> Vec<TelecloningParams> {
    let ps: Vec<f64> = (0..=10).map(|i| f64::from(i) / 10.0).collect();
    grid_from(&[0.0, 0.28, 0.6, 0.8, 1.0], &ps)
}

fn grid_from(alphas: &[f64], ps: &[f64]) -> Vec<TelecloningParams> {
    let mut grid = Vec::with_capacity(alphas.len() * ps.len());
    for &alpha in alphas {
        for &p in ps {
            grid.push(
                TelecloningParams::with_default_beta(alpha, p)
                    .expect("grid values are valid parameters"),
            );
        }
    }
    grid
}

/// Runs every invariant of the state builders, the correction algebra, the
/// protocol, and the analysis layer over the given parameter grid. Failures
/// are report entries, not errors.
pub fn verify_all(grid: &[TelecloningParams], seed: u64) -> Result<VerificationReport> {
    verify_with_correction(grid, seed, correction_for)
}

/// The same suite with one entry of the correction table deliberately
/// corrupted. Exists to demonstrate that the harness flags unit-recovery
/// failures; expected to fail.
pub fn verify_all_negative_control(
    grid: &[TelecloningParams],
    seed: u64,
) -> Result<VerificationReport> {
    verify_with_correction(grid, seed, |t| {
        let genuine = correction_for(t);
        if t.flat_index() == 0 {
            pauli_mul_mod_phase(genuine, PauliLabel::X)
        } else {
            genuine
        }
    })
}

fn verify_with_correction<F>(
    grid: &[TelecloningParams],
    seed: u64,
    correction: F,
) -> Result<VerificationReport>
where
    F: Fn(OutcomeTriple) -> PauliLabel + Copy,
{
    if grid.is_empty() {
        return Err(Error::contract("verification grid is empty"));
    }
    let mut report = VerificationReport { checks: Vec::new() };

    // Branch tables for every grid point, both resources, computed once.
    let ghz_tables: Vec<(TelecloningParams, Vec<BranchRecord>)> = grid
        .iter()
        .map(|p| {
            Ok((
                *p,
                enumerate_branches_with(ResourceKind::Ghz, p, correction)?,
            ))
        })
        .collect::<Result<_>>()?;
    let smolin_tables: Vec<(TelecloningParams, Vec<BranchRecord>)> = grid
        .iter()
        .map(|p| {
            Ok((
                *p,
                enumerate_branches_with(ResourceKind::Smolin, p, correction)?,
            ))
        })
        .collect::<Result<_>>()?;

    check_state_builders(&mut report, grid)?;
    check_correction_algebra(&mut report);
    check_ghz_tables(&mut report, &ghz_tables);
    check_smolin_tables(&mut report, &smolin_tables);
    check_order_independence(&mut report, grid)?;
    check_ensemble_density_equivalence(&mut report)?;
    check_leakage(&mut report, grid)?;
    check_bound_entanglement(&mut report)?;
    check_sampling(&mut report, grid, seed)?;

    Ok(report)
}

fn check_state_builders(report: &mut VerificationReport, grid: &[TelecloningParams]) -> Result<()> {
    let mut norm_dev = 0.0f64;
    for params in grid {
        let s = telecloning_state(params);
        norm_dev = norm_dev.max((s.norm_sqr() - 1.0).abs());
    }
    report.push("telecloning-norm", tol::STRUCTURAL, norm_dev);

    // Support sets of the two input extremes, for every p in the grid.
    let mut support_dev = 0.0f64;
    for params in grid {
        let alpha_only = TelecloningParams::new(1.0, 0.0, params.p())?;
        let s = telecloning_state(&alpha_only);
        for idx in 0..8 {
            if ![0b000, 0b101, 0b110].contains(&idx) {
                support_dev = support_dev.max(s.amplitude(idx).norm());
            }
        }
        let beta_only = TelecloningParams::new(0.0, 1.0, params.p())?;
        let s = telecloning_state(&beta_only);
        for idx in 0..8 {
            if ![0b111, 0b010, 0b001].contains(&idx) {
                support_dev = support_dev.max(s.amplitude(idx).norm());
            }
        }
    }
    report.push("telecloning-support", tol::STRUCTURAL, support_dev);

    let mut ortho_dev = 0.0f64;
    for &i in &BellIndex::ALL {
        for &j in &BellIndex::ALL {
            let overlap = bell_state(i).inner(&bell_state(j))?.norm();
            let expected = if i == j { 1.0 } else { 0.0 };
            ortho_dev = ortho_dev.max((overlap - expected).abs());
        }
    }
    report.push("bell-orthonormality", tol::STRUCTURAL, ortho_dev);

    let mut projector_dev = 0.0f64;
    let mut sum = DenseOperator::zeros(4);
    for p in bell_projectors() {
        projector_dev = projector_dev.max(p.max_abs_diff(&p.mul(&p)?));
        projector_dev = projector_dev.max(p.max_abs_diff(&p.adjoint()));
        sum = sum.add(&p)?;
    }
    projector_dev = projector_dev.max(sum.max_abs_diff(&DenseOperator::identity(4)));
    report.push("bell-projector-algebra", tol::STRUCTURAL, projector_dev);

    let mut ghz_dev = 0.0f64;
    let g = ghz4();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for idx in 0..16 {
        let expected = if idx == 0 || idx == 15 { h } else { 0.0 };
        ghz_dev = ghz_dev.max((g.amplitude(idx) - Complex64::new(expected, 0.0)).norm());
    }
    let half = DenseOperator::identity(2).scaled(0.5);
    for q in 0..4 {
        ghz_dev = ghz_dev.max(g.partial_trace(&[q])?.max_abs_diff(&half));
    }
    report.push("ghz-structure", tol::STRUCTURAL, ghz_dev);

    let smolin = smolin_state();
    let rho = smolin.to_density();
    let mut smolin_dev = 0.0f64;
    for (w, _) in smolin.ensemble() {
        smolin_dev = smolin_dev.max((w - 0.25).abs());
    }
    smolin_dev = smolin_dev.max((rho.trace().re - 1.0).abs());
    smolin_dev = smolin_dev.max(rho.max_abs_diff(&rho.adjoint()));
    // Pair-swap symmetry (D, E) <-> (F, G).
    let swap = |i: usize| ((i & 0b0011) << 2) | ((i & 0b1100) >> 2);
    for r in 0..16 {
        for c in 0..16 {
            smolin_dev = smolin_dev.max((rho.get(r, c) - rho.get(swap(r), swap(c))).norm());
        }
    }
    for q in 0..4 {
        smolin_dev = smolin_dev.max(smolin.partial_trace(&[q])?.max_abs_diff(&half));
    }
    report.push("smolin-structure", tol::STRUCTURAL, smolin_dev);

    let min_eig = rho.eigenvalues()?[0];
    report.push("smolin-psd", -tol::PSD_FLOOR, (-min_eig).max(0.0));
    Ok(())
}

/// Deviation of the 2×2 matrix product of the outcome's Pauli labels from
/// the correction matrix, minimized over a global phase; also whether the
/// matched label agrees.
fn matrix_oracle_deviation(t: OutcomeTriple, correction: PauliLabel) -> (bool, f64) {
    let product = PauliLabel::from(t.l)
        .matrix()
        .mul(&PauliLabel::from(t.j).matrix())
        .expect("2x2 product")
        .mul(&PauliLabel::from(t.k).matrix())
        .expect("2x2 product");
    let mut matched = None;
    for candidate in PauliLabel::ALL {
        let m = candidate.matrix();
        let (r, c) = (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .max_by(|&(r1, c1), &(r2, c2)| m.get(r1, c1).norm().total_cmp(&m.get(r2, c2).norm()))
            .expect("2x2 has entries");
        let phase = product.get(r, c) / m.get(r, c);
        if (phase.norm() - 1.0).abs() > tol::STRUCTURAL {
            continue;
        }
        let mut deviation = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                deviation = deviation.max((product.get(r, c) - phase * m.get(r, c)).norm());
            }
        }
        if deviation <= tol::STRUCTURAL {
            matched = Some((candidate, deviation));
            break;
        }
    }
    match matched {
        Some((label, deviation)) => (label == correction, deviation),
        None => (false, f64::INFINITY),
    }
}

fn check_correction_algebra(report: &mut VerificationReport) {
    let mut law_mismatches = 0usize;
    for a in PauliLabel::ALL {
        if pauli_mul_mod_phase(a, PauliLabel::I) != a || pauli_mul_mod_phase(a, a) != PauliLabel::I
        {
            law_mismatches += 1;
        }
        for b in PauliLabel::ALL {
            if pauli_mul_mod_phase(a, b) != pauli_mul_mod_phase(b, a) {
                law_mismatches += 1;
            }
            for c in PauliLabel::ALL {
                let left = pauli_mul_mod_phase(pauli_mul_mod_phase(a, b), c);
                let right = pauli_mul_mod_phase(a, pauli_mul_mod_phase(b, c));
                if left != right {
                    law_mismatches += 1;
                }
            }
        }
    }
    report.push("pauli-klein-laws", 0.0, law_mismatches as f64);

    let mut label_mismatches = 0usize;
    let mut phase_dev = 0.0f64;
    for t in OutcomeTriple::all() {
        let (agrees, deviation) = matrix_oracle_deviation(t, correction_for(t));
        if !agrees {
            label_mismatches += 1;
        }
        phase_dev = phase_dev.max(deviation);
    }
    report.push("correction-matrix-oracle", 0.0, label_mismatches as f64);
    report.push("correction-phase-deviation", tol::STRUCTURAL, phase_dev);

    let classes = correction_classes();
    let mut partition_errors = 0usize;
    for (&class, members) in &classes {
        if members.len() != 16 {
            partition_errors += 1;
        }
        for m in members {
            if class_of(*m) != class {
                partition_errors += 1;
            }
        }
    }
    let all: BTreeSet<OutcomeTriple> = classes.values().flatten().copied().collect();
    if all.len() != 64 {
        partition_errors += 1;
    }
    report.push("correction-class-partition", 0.0, partition_errors as f64);
}

/// Closed-form GHZ branch coefficient: the pattern of antiparallel Bell
/// outcomes selects which telecloning component survives.
fn ghz_branch_coefficient(t: OutcomeTriple, params: &TelecloningParams) -> f64 {
    match (t.l.antiparallel(), t.j.antiparallel(), t.k.antiparallel()) {
        (false, false, false) | (true, true, true) => 1.0,
        (true, false, true) | (false, true, false) => params.p(),
        (true, true, false) | (false, false, true) => params.q(),
        _ => 0.0,
    }
}

/// The twelve identity-class outcomes reachable with the GHZ resource; the
/// other four identity-class triples carry zero coefficient in the GHZ
/// expansion.
fn ghz_reachable_identity_outcomes() -> BTreeSet<OutcomeTriple> {
    [
        (0, 0, 0),
        (0, 1, 1),
        (1, 0, 1),
        (1, 1, 0),
        (2, 0, 2),
        (3, 0, 3),
        (3, 1, 2),
        (2, 1, 3),
        (2, 2, 0),
        (3, 3, 0),
        (2, 3, 1),
        (3, 2, 1),
    ]
    .iter()
    .map(|&(l, j, k)| {
        OutcomeTriple::new(
            BellIndex::new(l).expect("index"),
            BellIndex::new(j).expect("index"),
            BellIndex::new(k).expect("index"),
        )
    })
    .collect()
}

fn check_ghz_tables(
    report: &mut VerificationReport,
    tables: &[(TelecloningParams, Vec<BranchRecord>)],
) {
    let mut reference_dev = 0.0f64;
    let mut closed_form_dev = 0.0f64;
    let mut normalization_dev = 0.0f64;
    let mut recovery_dev = 0.0f64;
    let mut structure_errors = 0usize;
    let mut support_errors = 0usize;

    for (params, branches) in tables {
        let n = params.normalizer();
        let (p, q) = (params.p(), params.q());
        let lookup = |l: u8, j: u8, k: u8| {
            branches[(l as usize) * 16 + (j as usize) * 4 + (k as usize)].probability
        };
        reference_dev = reference_dev.max((lookup(0, 0, 0) - 1.0 / (16.0 * n)).abs());
        reference_dev = reference_dev.max((lookup(2, 0, 2) - p * p / (16.0 * n)).abs());
        reference_dev = reference_dev.max((lookup(2, 2, 0) - q * q / (16.0 * n)).abs());

        let mut reachable = 0usize;
        for b in branches {
            let c = ghz_branch_coefficient(b.outcome, params);
            closed_form_dev = closed_form_dev.max((b.probability - c * c / (16.0 * n)).abs());
            if b.reachable {
                reachable += 1;
                recovery_dev = recovery_dev.max((b.fidelity - 1.0).abs());
            }
        }
        let expected_reachable = if p > 0.0 && p < 1.0 { 48 } else { 32 };
        if reachable != expected_reachable {
            structure_errors += 1;
        }
        normalization_dev = normalization_dev
            .max((branches.iter().map(|b| b.probability).sum::<f64>() - 1.0).abs());

        // The reachable identity-class outcomes are exactly the canonical
        // twelve whenever both coefficients p and q survive.
        if p > 0.0 && p < 1.0 {
            let computed: BTreeSet<OutcomeTriple> = branches
                .iter()
                .filter(|b| class_of(b.outcome) == CorrectionClass::I && b.reachable)
                .map(|b| b.outcome)
                .collect();
            let expected = ghz_reachable_identity_outcomes();
            support_errors += computed.symmetric_difference(&expected).count();
        }
    }

    report.push("ghz-reference-probabilities", tol::STRUCTURAL, reference_dev);
    report.push("ghz-branch-closed-form", tol::STRUCTURAL, closed_form_dev);
    report.push("ghz-branch-count", 0.0, structure_errors as f64);
    report.push("ghz-identity-class-support", 0.0, support_errors as f64);
    report.push("ghz-normalization", tol::STRUCTURAL, normalization_dev);
    report.push("ghz-unit-recovery", tol::STRUCTURAL, recovery_dev);

    // Probabilities are a function of p alone: tables at the same p but
    // different α agree entrywise.
    let mut alpha_dev = 0.0f64;
    for (i, (params_a, table_a)) in tables.iter().enumerate() {
        for (params_b, table_b) in &tables[i + 1..] {
            if (params_a.p() - params_b.p()).abs() > 0.0 {
                continue;
            }
            for (a, b) in table_a.iter().zip(table_b) {
                alpha_dev = alpha_dev.max((a.probability - b.probability).abs());
            }
        }
    }
    report.push("ghz-alpha-independence", tol::STRUCTURAL, alpha_dev);
}

fn check_smolin_tables(
    report: &mut VerificationReport,
    tables: &[(TelecloningParams, Vec<BranchRecord>)],
) {
    let mut uniformity_dev = 0.0f64;
    let mut recovery_dev = 0.0f64;
    let mut normalization_dev = 0.0f64;
    for (_, branches) in tables {
        for b in branches {
            uniformity_dev = uniformity_dev.max((b.probability - 1.0 / 64.0).abs());
            recovery_dev = recovery_dev.max((b.fidelity - 1.0).abs());
        }
        normalization_dev = normalization_dev
            .max((branches.iter().map(|b| b.probability).sum::<f64>() - 1.0).abs());
    }
    report.push("smolin-uniformity", tol::STRUCTURAL, uniformity_dev);
    report.push("smolin-unit-recovery", tol::STRUCTURAL, recovery_dev);
    report.push("smolin-normalization", tol::STRUCTURAL, normalization_dev);
}

fn check_order_independence(
    report: &mut VerificationReport,
    grid: &[TelecloningParams],
) -> Result<()> {
    let representative = representative_params(grid);
    let mut dev = 0.0f64;
    for resource in [ResourceKind::Ghz, ResourceKind::Smolin] {
        dev = dev.max(order_independence_deviation(resource, &representative)?);
    }
    report.push("measurement-order-independence", tol::STRUCTURAL, dev);
    Ok(())
}

fn check_ensemble_density_equivalence(report: &mut VerificationReport) -> Result<()> {
    let smolin = smolin_state();
    let rho = smolin.to_density();
    let mut dev = 0.0f64;
    for pair in [[0usize, 1], [2, 3], [0, 2], [1, 3]] {
        let projectors = bell_projectors();
        let ensemble_route = smolin.outcome_probabilities(&projectors, &pair)?;
        for (i, p) in projectors.iter().enumerate() {
            let embedded = p.embed(&pair, 4)?;
            let density_route = rho.mul(&embedded)?.trace().re;
            dev = dev.max((ensemble_route[i] - density_route).abs());
        }
    }
    report.push("ensemble-density-equivalence", tol::STRUCTURAL, dev);
    Ok(())
}

/// First grid entry with 0 < p < 1 if any, else the first entry.
fn representative_params(grid: &[TelecloningParams]) -> TelecloningParams {
    grid.iter()
        .find(|g| g.p() > 0.0 && g.p() < 1.0)
        .copied()
        .unwrap_or(grid[0])
}

fn check_leakage(report: &mut VerificationReport, grid: &[TelecloningParams]) -> Result<()> {
    let mut distinct_ps: Vec<f64> = Vec::new();
    let mut distinct_alphas: Vec<f64> = Vec::new();
    for g in grid {
        if !distinct_ps.iter().any(|p| (p - g.p()).abs() < 1e-15) {
            distinct_ps.push(g.p());
        }
        if !distinct_alphas
            .iter()
            .any(|a| (a - g.alpha()).abs() < 1e-15)
        {
            distinct_alphas.push(g.alpha());
        }
    }
    let base = representative_params(grid);
    let mut bounds_dev = 0.0f64;
    let mut track_bounds = |report: &LeakageReport| {
        let upper = (report.prior.len() as f64).log2();
        bounds_dev = bounds_dev
            .max(-report.mutual_information_bits)
            .max(report.mutual_information_bits - upper);
    };

    // Single-hypothesis prior: nothing to learn.
    let single = mutual_information(ResourceKind::Ghz, &[(1.0, base)])?;
    track_bounds(&single);
    let mut single_dev = single.mutual_information_bits.abs();

    // The Smolin record is uniform regardless of the input, so every prior
    // yields zero bits.
    let mut smolin_dev = 0.0f64;
    if distinct_ps.len() >= 2 {
        let prior = [
            (
                0.5,
                TelecloningParams::with_default_beta(base.alpha(), distinct_ps[0])?,
            ),
            (
                0.5,
                TelecloningParams::with_default_beta(base.alpha(), distinct_ps[1])?,
            ),
        ];
        let leak = mutual_information(ResourceKind::Smolin, &prior)?;
        track_bounds(&leak);
        smolin_dev = smolin_dev.max(leak.mutual_information_bits.abs());
    }
    if grid.len() >= 3 {
        let w = 1.0 / 3.0;
        let prior = [
            (w, grid[0]),
            (w, grid[grid.len() / 2]),
            (1.0 - 2.0 * w, grid[grid.len() - 1]),
        ];
        let leak = mutual_information(ResourceKind::Smolin, &prior)?;
        track_bounds(&leak);
        smolin_dev = smolin_dev.max(leak.mutual_information_bits.abs());
    }
    let single_smolin = mutual_information(ResourceKind::Smolin, &[(1.0, base)])?;
    track_bounds(&single_smolin);
    single_dev = single_dev.max(single_smolin.mutual_information_bits.abs());
    report.push(
        "single-hypothesis-leakage-zero",
        tol::STRUCTURAL,
        single_dev,
    );
    report.push("smolin-leakage-zero", tol::STRUCTURAL, smolin_dev);

    // The GHZ record distribution depends on p, so two hypotheses that
    // differ in p are distinguishable: strictly positive information.
    if distinct_ps.len() >= 2 {
        let (lo, hi) = (
            distinct_ps.iter().copied().fold(f64::INFINITY, f64::min),
            distinct_ps
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max),
        );
        let prior = [
            (0.5, TelecloningParams::with_default_beta(base.alpha(), lo)?),
            (0.5, TelecloningParams::with_default_beta(base.alpha(), hi)?),
        ];
        let leak = mutual_information(ResourceKind::Ghz, &prior)?;
        track_bounds(&leak);
        report.push(
            "ghz-leakage-positive",
            0.0,
            (1e-3 - leak.mutual_information_bits).max(0.0),
        );
    }

    // ... while hypotheses that differ only in α are invisible.
    if distinct_alphas.len() >= 2 {
        let prior = [
            (
                0.5,
                TelecloningParams::with_default_beta(distinct_alphas[0], base.p())?,
            ),
            (
                0.5,
                TelecloningParams::with_default_beta(distinct_alphas[1], base.p())?,
            ),
        ];
        let leak = mutual_information(ResourceKind::Ghz, &prior)?;
        track_bounds(&leak);
        report.push(
            "ghz-alpha-leakage-zero",
            tol::STRUCTURAL,
            leak.mutual_information_bits.abs(),
        );
    }

    // + 0.0 scrubs a negative zero from the max fold.
    report.push(
        "mutual-information-bounds",
        tol::STRUCTURAL,
        bounds_dev + 0.0,
    );
    Ok(())
}

fn check_bound_entanglement(report: &mut VerificationReport) -> Result<()> {
    let suite = bound_entanglement_suite()?;
    let ppt_dev = suite
        .ppt_min_eigenvalues
        .iter()
        .map(|(_, e)| (-e).max(0.0))
        .fold(0.0, f64::max);
    report.push("bound-entanglement-ppt", -tol::PSD_FLOOR, ppt_dev);
    let unlock_dev = suite
        .unlock_fidelities
        .iter()
        .map(|f| (f - 1.0).abs())
        .fold(0.0, f64::max);
    report.push("bound-entanglement-unlock", tol::STRUCTURAL, unlock_dev);
    let marginal_dev = suite
        .marginal_deviations
        .iter()
        .copied()
        .fold(0.0, f64::max);
    report.push(
        "bound-entanglement-marginals",
        tol::STRUCTURAL,
        marginal_dev,
    );
    Ok(())
}

const SAMPLING_SHOTS: u64 = 64_000;
const SAMPLING_SIGNIFICANCE: f64 = 0.01;

fn check_sampling(
    report: &mut VerificationReport,
    grid: &[TelecloningParams],
    seed: u64,
) -> Result<()> {
    let params = representative_params(grid);
    let mut worst_excess = 0.0f64;
    for resource in [ResourceKind::Ghz, ResourceKind::Smolin] {
        let exact = exact_distribution(resource, &params)?;
        let counts = sample_distribution(resource, &params, SAMPLING_SHOTS, seed)?;
        let observed: Vec<u64> = counts.values().copied().collect();
        let gof = chi_square_gof(&observed, &exact.probabilities(), SAMPLING_SIGNIFICANCE)?;
        let excess = if gof.statistic.is_finite() {
            (gof.statistic - gof.critical_value).max(0.0)
        } else {
            f64::INFINITY
        };
        worst_excess = worst_excess.max(excess);
    }
    report.push("sampling-chi-square", 0.0, worst_excess);

    // Reproducibility: the same seed regenerates the same counts.
    let a = sample_distribution(ResourceKind::Smolin, &params, 512, seed)?;
    let b = sample_distribution(ResourceKind::Smolin, &params, 512, seed)?;
    let mismatches = a.iter().filter(|(t, c)| b[t] != **c).count();
    report.push("sampling-determinism", 0.0, mismatches as f64);
    Ok(())
}
