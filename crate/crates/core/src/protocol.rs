//! The concentration protocol itself: builds the joint seven-qubit system,
//! performs the three Bell-state measurements as local parties messaging
//! the receiver, applies the Pauli correction, and reports the outcome —
//! in both sampled and exhaustive all-branch modes.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{correction_for, OutcomeTriple, PauliLabel};
use crate::qmath::{
    apply_local, fidelity_density, measure_projective, tensor, DenseOperator, PureState,
};
use crate::states::{
    bell_projectors, ghz4, input_state, smolin_state, telecloning_state, BellIndex,
    TelecloningParams,
};
use crate::tol;

/// Fixed register layout [A, B, C, D, E, F, G]; qubit 0 is the most
/// significant bit of a basis index.
pub mod register {
    pub const A: usize = 0;
    pub const B: usize = 1;
    pub const C: usize = 2;
    pub const D: usize = 3;
    pub const E: usize = 4;
    pub const F: usize = 5;
    pub const G: usize = 6;
    pub const COUNT: usize = 7;
}

const PAIR_AE: [usize; 2] = [register::A, register::E];
const PAIR_BF: [usize; 2] = [register::B, register::F];
const PAIR_CG: [usize; 2] = [register::C, register::G];

/// The entangled resource shared before the protocol starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResourceKind {
    Ghz,
    Smolin,
}

impl std::fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResourceKind::Ghz => f.write_str("ghz"),
            ResourceKind::Smolin => f.write_str("smolin"),
        }
    }
}

/// A measuring party.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
    Charlie,
}

impl std::fmt::Display for Party {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Party::Alice => f.write_str("Alice"),
            Party::Bob => f.write_str("Bob"),
            Party::Charlie => f.write_str("Charlie"),
        }
    }
}

const MEASURED_PAIRS: [(Party, [usize; 2]); 3] = [
    (Party::Alice, PAIR_AE),
    (Party::Bob, PAIR_BF),
    (Party::Charlie, PAIR_CG),
];

/// One classical message: a party announcing its Bell outcome.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalMessage {
    pub sender: Party,
    pub outcome: BellIndex,
}

/// The classical record of one run: the three messages in sending order and
/// the correction David derives from them for his qubit D.
#[derive(Debug, Clone)]
pub struct ProtocolTranscript {
    pub messages: [ClassicalMessage; 3],
    pub correction: PauliLabel,
}

impl ProtocolTranscript {
    pub fn outcome(&self) -> OutcomeTriple {
        OutcomeTriple::new(
            self.messages[0].outcome,
            self.messages[1].outcome,
            self.messages[2].outcome,
        )
    }
}

/// One measurement branch: the outcome triple, its exact probability under
/// the resource, the correction, and the post-correction state of qubit D
/// with its fidelity against the input.
///
/// Branches of probability below the resolvable floor carry
/// `reachable: false` and, by convention, the input state itself with unit
/// fidelity, keeping the 64-row table total.
#[derive(Debug, Clone)]
pub struct BranchRecord {
    pub outcome: OutcomeTriple,
    pub probability: f64,
    pub correction: PauliLabel,
    pub d_state: PureState,
    pub fidelity: f64,
    pub reachable: bool,
}

/// Deterministic per-run randomness: one root seed, with the stream index
/// separating runs so they stay independent yet reproducible.
pub fn rng_for_run(root_seed: u64, run_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    rng.set_stream(run_index);
    rng
}

fn resource_members(resource: ResourceKind) -> Vec<(f64, PureState)> {
    match resource {
        ResourceKind::Ghz => vec![(1.0, ghz4())],
        ResourceKind::Smolin => smolin_state().ensemble().to_vec(),
    }
}

fn joint_members(resource: ResourceKind, params: &TelecloningParams) -> Vec<(f64, PureState)> {
    let psi = telecloning_state(params);
    resource_members(resource)
        .into_iter()
        .map(|(w, m)| (w, tensor(&psi, &m)))
        .collect()
}

/// Mixed resources enter a run as one ensemble member sampled by weight;
/// pure resources skip the draw.
fn pick_member<'a>(joints: &'a [(f64, PureState)], rng: &mut ChaCha8Rng) -> &'a PureState {
    if joints.len() == 1 {
        return &joints[0].1;
    }
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (w, s) in joints {
        cumulative += w;
        if u < cumulative {
            return s;
        }
    }
    &joints.last().expect("ensemble is non-empty").1
}

fn project_triple(
    joint: &PureState,
    projectors: &[DenseOperator],
    t: OutcomeTriple,
    pair_order: [usize; 3],
) -> Result<PureState> {
    let mut state = joint.clone();
    for position in pair_order {
        let index = match position {
            0 => t.l.index(),
            1 => t.j.index(),
            _ => t.k.index(),
        };
        state = apply_local(&projectors[index], &MEASURED_PAIRS[position].1, &state)?;
    }
    Ok(state)
}

/// Exact probability of an outcome triple, averaged over the resource's
/// ensemble members.
pub(crate) fn outcome_probability(
    joints: &[(f64, PureState)],
    projectors: &[DenseOperator],
    t: OutcomeTriple,
) -> Result<f64> {
    let mut total = 0.0;
    for (w, joint) in joints {
        total += w * project_triple(joint, projectors, t, [0, 1, 2])?.norm_sqr();
    }
    Ok(total)
}

/// Runs the protocol once with seeded randomness: prepare the telecloning
/// state on (A, B, C), attach the resource on (D, E, F, G), Bell-measure the
/// pairs (A,E), (B,F), (C,G) in that order, apply the correction to D, and
/// record the fidelity of D's reduced state against the input.
pub fn run_once(
    resource: ResourceKind,
    params: &TelecloningParams,
    seed: u64,
) -> Result<(ProtocolTranscript, BranchRecord)> {
    let mut rng = rng_for_run(seed, 0);
    run_once_with_rng(resource, params, &mut rng)
}

fn run_once_with_rng(
    resource: ResourceKind,
    params: &TelecloningParams,
    rng: &mut ChaCha8Rng,
) -> Result<(ProtocolTranscript, BranchRecord)> {
    let joints = joint_members(resource, params);
    let projectors = bell_projectors();

    let mut state = pick_member(&joints, rng).clone();
    let mut messages = Vec::with_capacity(3);
    for (party, pair) in MEASURED_PAIRS {
        let u: f64 = rng.random();
        let measured = measure_projective(&projectors, &pair, &state, u)?;
        state = measured.post_state;
        messages.push(ClassicalMessage {
            sender: party,
            outcome: BellIndex::new(measured.outcome as u8)?,
        });
    }
    let messages: [ClassicalMessage; 3] = messages.try_into().expect("three measurements");

    let outcome = OutcomeTriple::new(
        messages[0].outcome,
        messages[1].outcome,
        messages[2].outcome,
    );
    let correction = correction_for(outcome);
    let corrected = apply_local(&correction.matrix(), &[register::D], &state)?;

    let target = input_state(params);
    let rho_d = corrected.partial_trace(&[register::D])?;
    let fidelity = fidelity_density(&target, &rho_d)?;
    let d_state = corrected.factor_qubit(register::D)?;
    let probability = outcome_probability(&joints, &projectors, outcome)?;

    let transcript = ProtocolTranscript {
        messages,
        correction,
    };
    let record = BranchRecord {
        outcome,
        probability,
        correction,
        d_state,
        fidelity,
        reachable: true,
    };
    Ok((transcript, record))
}

/// The exact 64-row branch table: for every outcome triple, the probability
/// (for mixed resources, averaged exactly over the ensemble) and the
/// post-correction state of qubit D.
pub fn enumerate_branches(
    resource: ResourceKind,
    params: &TelecloningParams,
) -> Result<Vec<BranchRecord>> {
    enumerate_branches_with(resource, params, correction_for)
}

/// As [`enumerate_branches`], but with the outcome-to-correction map
/// supplied by the caller. The verifier's negative control injects a
/// corrupted map here.
pub(crate) fn enumerate_branches_with<F>(
    resource: ResourceKind,
    params: &TelecloningParams,
    correction: F,
) -> Result<Vec<BranchRecord>>
where
    F: Fn(OutcomeTriple) -> PauliLabel,
{
    let joints = joint_members(resource, params);
    let projectors = bell_projectors();
    let target = input_state(params);

    OutcomeTriple::all()
        .map(|t| branch_record(&joints, &projectors, t, correction(t), &target))
        .collect()
}

fn branch_record(
    joints: &[(f64, PureState)],
    projectors: &[DenseOperator],
    outcome: OutcomeTriple,
    correction: PauliLabel,
    target: &PureState,
) -> Result<BranchRecord> {
    let correction_matrix = correction.matrix();

    let mut probability = 0.0;
    let mut rho_d: Option<DenseOperator> = None;
    let mut dominant: Option<(f64, PureState)> = None;
    for (w, joint) in joints {
        let projected = project_triple(joint, projectors, outcome, [0, 1, 2])?;
        let contribution = w * projected.norm_sqr();
        probability += contribution;
        if contribution <= tol::PROB_FLOOR {
            continue;
        }
        let corrected = apply_local(
            &correction_matrix,
            &[register::D],
            &projected.renormalized()?,
        )?;
        let part = corrected
            .partial_trace(&[register::D])?
            .scaled(contribution);
        rho_d = Some(match rho_d {
            Some(acc) => acc.add(&part)?,
            None => part,
        });
        if dominant
            .as_ref()
            .is_none_or(|(best, _)| contribution > *best)
        {
            dominant = Some((contribution, corrected));
        }
    }

    if probability > tol::PROB_FLOOR {
        let rho_d = rho_d
            .expect("reachable branch has a density")
            .scaled(1.0 / probability);
        let fidelity = fidelity_density(target, &rho_d)?;
        let d_state = dominant
            .expect("reachable branch has a dominant member")
            .1
            .factor_qubit(register::D)?;
        Ok(BranchRecord {
            outcome,
            probability,
            correction,
            d_state,
            fidelity,
            reachable: true,
        })
    } else {
        Ok(BranchRecord {
            outcome,
            probability,
            correction,
            d_state: target.clone(),
            fidelity: 1.0,
            reachable: false,
        })
    }
}

/// Samples the outcome distribution over `shots` independent runs. Counts
/// cover all 64 triples and sum to `shots`; a fixed seed reproduces the
/// same map, and shot `i` draws from the stream [`rng_for_run`]`(seed, i)`.
pub fn sample_distribution(
    resource: ResourceKind,
    params: &TelecloningParams,
    shots: u64,
    seed: u64,
) -> Result<BTreeMap<OutcomeTriple, u64>> {
    if shots == 0 {
        return Err(Error::contract("shots must be at least 1"));
    }
    let joints = joint_members(resource, params);
    let projectors = bell_projectors();

    let mut counts: BTreeMap<OutcomeTriple, u64> = OutcomeTriple::all().map(|t| (t, 0)).collect();
    for shot in 0..shots {
        let mut rng = rng_for_run(seed, shot);
        let mut state = pick_member(&joints, &mut rng).clone();
        let mut indices = [0usize; 3];
        for (slot, (_, pair)) in MEASURED_PAIRS.iter().enumerate() {
            let u: f64 = rng.random();
            let measured = measure_projective(&projectors, pair, &state, u)?;
            state = measured.post_state;
            indices[slot] = measured.outcome;
        }
        let triple = OutcomeTriple::new(
            BellIndex::new(indices[0] as u8)?,
            BellIndex::new(indices[1] as u8)?,
            BellIndex::new(indices[2] as u8)?,
        );
        *counts.get_mut(&triple).expect("all triples present") += 1;
    }
    Ok(counts)
}

/// Worst deviation, over all branches and all six measurement orders, of
/// branch probability and post-measurement state against the canonical
/// (A,E), (B,F), (C,G) order. The measured pairs are disjoint, so this
/// should vanish.
pub(crate) fn order_independence_deviation(
    resource: ResourceKind,
    params: &TelecloningParams,
) -> Result<f64> {
    const ORDERS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let joints = joint_members(resource, params);
    let projectors = bell_projectors();
    let mut worst = 0.0f64;
    for t in OutcomeTriple::all() {
        for (_, joint) in &joints {
            let reference = project_triple(joint, &projectors, t, ORDERS[0])?;
            let ref_prob = reference.norm_sqr();
            for order in &ORDERS[1..] {
                let permuted = project_triple(joint, &projectors, t, *order)?;
                let prob = permuted.norm_sqr();
                worst = worst.max((prob - ref_prob).abs());
                if ref_prob > tol::PROB_FLOOR && prob > tol::PROB_FLOOR {
                    // Compare states up to a global phase via their overlap.
                    let overlap = reference
                        .renormalized()?
                        .inner(&permuted.renormalized()?)?
                        .norm_sqr();
                    worst = worst.max((1.0 - overlap).abs());
                }
            }
        }
    }
    Ok(worst)
}
