//! Quantum information splitting among Alice, Bob, and Charlie: the three
//! single-qubit protocols over the five-qubit channel, the two-qubit
//! protocol, the general N-qubit protocol, and the secrecy checks showing
//! no single party can read the secret alone.

use rand::Rng;

use crate::bases::{
    bell_basis, channel_qis, channel_teleport, four_particle_basis, ghz_pair_basis,
    hadamard_basis, omega_basis_qis, qis_single_assignments, three_particle_basis, BitString,
    Party, PartyAssignment,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::statevec::{
    haar_random_state, measure_in_basis, project_onto_basis, trial_rng, DensityMatrix,
    MeasurementBasis, PauliString, StateVector,
};
use crate::teleport::{correction_for, ClassicalMessage, ProtocolTranscript};
use crate::verify::search_correction;

/// Seed for the fixed probe inputs used to derive correction tables. The
/// probe only needs to be generic (no Pauli image coincides with another);
/// the derived tables are input-independent.
const PROBE_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

/// The three qubit-distribution variants for single-qubit splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingleProtocol {
    I,
    II,
    III,
}

impl SingleProtocol {
    pub const ALL: [SingleProtocol; 3] = [SingleProtocol::I, SingleProtocol::II, SingleProtocol::III];

    /// Position of this protocol in [`SingleProtocol::ALL`].
    pub fn index(self) -> usize {
        match self {
            SingleProtocol::I => 0,
            SingleProtocol::II => 1,
            SingleProtocol::III => 2,
        }
    }
}

impl std::fmt::Display for SingleProtocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingleProtocol::I => write!(f, "i"),
            SingleProtocol::II => write!(f, "ii"),
            SingleProtocol::III => write!(f, "iii"),
        }
    }
}

/// One enumerated (Alice outcome, Bob outcome) branch.
#[derive(Clone, Debug)]
pub struct QisBranch<S: Scalar> {
    pub alice_outcome: usize,
    pub bob_outcome: usize,
    pub probability: S,
    pub fidelity: S,
    pub correction: PauliString,
}

struct SingleLayout<S: Scalar> {
    assignment: PartyAssignment,
    /// Alice's measured positions in the combined (input first) state.
    alice_subset: Vec<usize>,
    alice_basis: MeasurementBasis<S>,
    alice_bits: usize,
    /// Bob's positions within the post-Alice remainder.
    bob_local: Vec<usize>,
    bob_basis: MeasurementBasis<S>,
    bob_bits: usize,
}

/// Rank (1-based) of each wanted position inside an ascending remainder.
fn local_ranks(remainder: &[usize], wanted: &[usize]) -> Vec<usize> {
    wanted
        .iter()
        .map(|p| {
            remainder
                .iter()
                .position(|c| c == p)
                .expect("position survives the measurement")
                + 1
        })
        .collect()
}

fn single_layout<S: Scalar>(protocol: SingleProtocol) -> SingleLayout<S> {
    let assignment = qis_single_assignments()[protocol.index()].clone();
    let alice_channel = assignment.positions_of(Party::Alice);
    let mut alice_subset = vec![1usize];
    alice_subset.extend(alice_channel.iter().map(|p| p + 1));

    let (alice_basis, alice_bits, bob_basis, bob_bits) = match protocol {
        SingleProtocol::I => (bell_basis::<S>(), 2, ghz_pair_basis::<S>(), 2),
        SingleProtocol::II => (three_particle_basis::<S>(), 2, bell_basis::<S>(), 2),
        SingleProtocol::III => (four_particle_basis::<S>(), 3, hadamard_basis::<S>(), 1),
    };

    let remainder: Vec<usize> = (1..=6).filter(|p| !alice_subset.contains(p)).collect();
    let bob_global: Vec<usize> = assignment
        .positions_of(Party::Bob)
        .iter()
        .map(|p| p + 1)
        .collect();
    let bob_local = local_ranks(&remainder, &bob_global);

    SingleLayout {
        assignment,
        alice_subset,
        alice_basis,
        alice_bits,
        bob_local,
        bob_basis,
        bob_bits,
    }
}

struct RawBranch<S: Scalar> {
    alice: usize,
    bob: usize,
    probability: S,
    charlie: StateVector<S>,
}

fn check_support<S: Scalar>(total: S) -> Result<()> {
    if (S::one() - total).abs() > S::TOL_SUPPORT {
        return Err(Error::IncompleteSupport {
            residual: (S::one() - total).to_f64_lossy(),
        });
    }
    Ok(())
}

/// Enumerates every reachable (Alice, Bob) branch, yielding Charlie's
/// pre-correction state.
fn raw_single_branches<S: Scalar>(
    protocol: SingleProtocol,
    input: &StateVector<S>,
) -> Result<Vec<RawBranch<S>>> {
    let layout = single_layout::<S>(protocol);
    let (channel, _) = channel_teleport::<S>(2)?;
    let combined = input.tensor(&channel);
    let alice = project_onto_basis(&combined, &layout.alice_subset, &layout.alice_basis)?;
    check_support(alice.total_weight())?;

    let threshold = S::TOL_ALGEBRA;
    let mut branches = Vec::new();
    for (a, &w_a) in alice.weights.iter().enumerate() {
        if w_a <= threshold {
            continue;
        }
        let post_alice = alice.residual_state(a).ok_or(Error::EmptySystem)?;
        let bob = project_onto_basis(&post_alice, &layout.bob_local, &layout.bob_basis)?;
        check_support(bob.total_weight())?;
        for (b, &w_b) in bob.weights.iter().enumerate() {
            if w_b <= threshold {
                continue;
            }
            branches.push(RawBranch {
                alice: a,
                bob: b,
                probability: w_a * w_b,
                charlie: bob.residual_state(b).ok_or(Error::EmptySystem)?,
            });
        }
    }
    Ok(branches)
}

/// Charlie's correction for every reachable branch, derived once per
/// protocol by exhaustive Pauli search against a fixed generic probe input.
/// Input-independent because each branch's map from input to Charlie's
/// state is a fixed Pauli.
pub fn single_correction_table<S: Scalar>(
    protocol: SingleProtocol,
) -> Result<Vec<Vec<Option<PauliString>>>> {
    let mut rng = trial_rng(PROBE_SEED, protocol.index() as u64);
    let probe: StateVector<S> = haar_random_state(1, &mut rng)?;
    let layout = single_layout::<S>(protocol);
    let mut table =
        vec![vec![None; layout.bob_basis.num_elements()]; layout.alice_basis.num_elements()];
    for branch in raw_single_branches(protocol, &probe)? {
        table[branch.alice][branch.bob] =
            Some(search_correction(&probe, &[1], &branch.charlie)?);
    }
    Ok(table)
}

/// Every branch of a single-qubit splitting protocol with probabilities
/// and Charlie's corrected fidelity, ordered Alice-major.
pub fn enumerate_single<S: Scalar>(
    protocol: SingleProtocol,
    input: &StateVector<S>,
) -> Result<Vec<QisBranch<S>>> {
    if input.num_qubits() != 1 {
        return Err(Error::QubitCountMismatch {
            expected: 1,
            actual: input.num_qubits(),
        });
    }
    let table = single_correction_table::<S>(protocol)?;
    let mut branches = Vec::new();
    for raw in raw_single_branches(protocol, input)? {
        let correction = table[raw.alice][raw.bob]
            .clone()
            .ok_or(Error::CorrectionNotFound)?;
        let fidelity = raw.charlie.apply_pauli(&correction)?.fidelity(input)?;
        branches.push(QisBranch {
            alice_outcome: raw.alice,
            bob_outcome: raw.bob,
            probability: raw.probability,
            fidelity,
            correction,
        });
    }
    Ok(branches)
}

/// Runs a single-qubit splitting protocol, sampling both measurements.
pub fn qis_single<S: Scalar, R: Rng + ?Sized>(
    protocol: SingleProtocol,
    input: &StateVector<S>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    if input.num_qubits() != 1 {
        return Err(Error::QubitCountMismatch {
            expected: 1,
            actual: input.num_qubits(),
        });
    }
    let layout = single_layout::<S>(protocol);
    let (channel, _) = channel_teleport::<S>(2)?;
    let combined = input.tensor(&channel);

    let alice = measure_in_basis(&combined, &layout.alice_subset, &layout.alice_basis, rng)?;
    let post_alice = alice.post_state.ok_or(Error::EmptySystem)?;
    let bob = measure_in_basis(&post_alice, &layout.bob_local, &layout.bob_basis, rng)?;
    let charlie = bob.post_state.ok_or(Error::EmptySystem)?;

    let table = single_correction_table::<S>(protocol)?;
    let correction = table[alice.outcome][bob.outcome]
        .clone()
        .ok_or(Error::CorrectionNotFound)?;
    let fidelity = charlie.apply_pauli(&correction)?.fidelity(input)?.to_f64_lossy();

    Ok(ProtocolTranscript {
        protocol_id: format!("qis-{protocol}"),
        n: 1,
        seed: None,
        outcome_indices: vec![alice.outcome, bob.outcome],
        classical_messages: vec![
            ClassicalMessage {
                sender: Party::Alice,
                receiver: Party::Charlie,
                bit_count: layout.alice_bits,
                payload: BitString::from_value(layout.alice_bits, alice.outcome as u64)?,
            },
            ClassicalMessage {
                sender: Party::Bob,
                receiver: Party::Charlie,
                bit_count: layout.bob_bits,
                payload: BitString::from_value(layout.bob_bits, bob.outcome as u64)?,
            },
        ],
        corrections: vec![correction],
        fidelity,
    })
}

/// Charlie's correction rule for the N-qubit protocol: the outcome-`j`
/// string, with an extra Z on his GHZ qubit when Bob measured the minus
/// state (a composition that only shifts global phase relative to applying
/// them in sequence).
pub fn rule_correction(n: usize, j: usize, bob_minus: bool) -> Result<PauliString> {
    let base = correction_for(n, j)?;
    let (z_mask, x_mask) = base.masks();
    let z_mask = if bob_minus { z_mask ^ 1 } else { z_mask };
    PauliString::from_masks(n, z_mask, x_mask)
}

struct NLayout {
    alice_subset: Vec<usize>,
    /// Bob's position within the post-Alice remainder (always rank 1).
    bob_local: Vec<usize>,
}

fn n_layout(n: usize, parties: &PartyAssignment) -> NLayout {
    let mut alice_subset: Vec<usize> = (1..=n).collect();
    alice_subset.extend(parties.positions_of(Party::Alice).iter().map(|p| p + n));
    let remainder: Vec<usize> =
        (1..=3 * n + 1).filter(|p| !alice_subset.contains(p)).collect();
    let bob_global: Vec<usize> = parties
        .positions_of(Party::Bob)
        .iter()
        .map(|p| p + n)
        .collect();
    NLayout {
        alice_subset,
        bob_local: local_ranks(&remainder, &bob_global),
    }
}

/// Splits an N-qubit secret: Alice measures her `2N` qubits in the
/// Bell-product family, Bob measures his single qubit in the sign basis,
/// and Charlie recovers the state from both outcomes.
pub fn qis_n<S: Scalar, R: Rng + ?Sized>(
    input: &StateVector<S>,
    n: usize,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    if input.num_qubits() != n {
        return Err(Error::QubitCountMismatch {
            expected: n,
            actual: input.num_qubits(),
        });
    }
    let (channel, parties) = channel_qis::<S>(n)?;
    let layout = n_layout(n, &parties);
    let combined = input.tensor(&channel);

    let alice = measure_in_basis(&combined, &layout.alice_subset, &omega_basis_qis::<S>(n)?, rng)?;
    let post_alice = alice.post_state.ok_or(Error::EmptySystem)?;
    let bob = measure_in_basis(&post_alice, &layout.bob_local, &hadamard_basis::<S>(), rng)?;
    let charlie = bob.post_state.ok_or(Error::EmptySystem)?;

    let correction = rule_correction(n, alice.outcome, bob.outcome == 1)?;
    let fidelity = charlie.apply_pauli(&correction)?.fidelity(input)?.to_f64_lossy();

    Ok(ProtocolTranscript {
        protocol_id: "qis-n".into(),
        n,
        seed: None,
        outcome_indices: vec![alice.outcome, bob.outcome],
        classical_messages: vec![
            ClassicalMessage {
                sender: Party::Alice,
                receiver: Party::Charlie,
                bit_count: 2 * n,
                payload: BitString::from_value(2 * n, alice.outcome as u64)?,
            },
            ClassicalMessage {
                sender: Party::Bob,
                receiver: Party::Charlie,
                bit_count: 1,
                payload: BitString::from_value(1, bob.outcome as u64)?,
            },
        ],
        corrections: vec![correction],
        fidelity,
    })
}

/// Two-qubit splitting: [`qis_n`] at N = 2.
pub fn qis_two<S: Scalar, R: Rng + ?Sized>(
    input: &StateVector<S>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    let mut transcript = qis_n(input, 2, rng)?;
    transcript.protocol_id = "qis-two".into();
    Ok(transcript)
}

/// Every reachable branch of the N-qubit protocol, Alice-major then Bob.
pub fn enumerate_n<S: Scalar>(input: &StateVector<S>, n: usize) -> Result<Vec<QisBranch<S>>> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    if input.num_qubits() != n {
        return Err(Error::QubitCountMismatch {
            expected: n,
            actual: input.num_qubits(),
        });
    }
    let (channel, parties) = channel_qis::<S>(n)?;
    let layout = n_layout(n, &parties);
    let combined = input.tensor(&channel);
    let alice = project_onto_basis(&combined, &layout.alice_subset, &omega_basis_qis::<S>(n)?)?;
    check_support(alice.total_weight())?;

    let hadamard = hadamard_basis::<S>();
    let threshold = S::TOL_ALGEBRA;
    let mut branches = Vec::new();
    for (j, &w_a) in alice.weights.iter().enumerate() {
        if w_a <= threshold {
            continue;
        }
        let post_alice = alice.residual_state(j).ok_or(Error::EmptySystem)?;
        let bob = project_onto_basis(&post_alice, &layout.bob_local, &hadamard)?;
        check_support(bob.total_weight())?;
        for (b, &w_b) in bob.weights.iter().enumerate() {
            if w_b <= threshold {
                continue;
            }
            let charlie = bob.residual_state(b).ok_or(Error::EmptySystem)?;
            let correction = rule_correction(n, j, b == 1)?;
            let fidelity = charlie.apply_pauli(&correction)?.fidelity(input)?;
            branches.push(QisBranch {
                alice_outcome: j,
                bob_outcome: b,
                probability: w_a * w_b,
                fidelity,
                correction,
            });
        }
    }
    Ok(branches)
}

/// Every branch of the two-qubit protocol.
pub fn enumerate_two<S: Scalar>(input: &StateVector<S>) -> Result<Vec<QisBranch<S>>> {
    enumerate_n(input, 2)
}

/// Counts branches where the closed-form rule disagrees with an exhaustive
/// Pauli search on Charlie's qubits (must be zero).
pub fn rule_search_mismatches<S: Scalar>(n: usize) -> Result<usize> {
    let mut rng = trial_rng(PROBE_SEED, 16 + n as u64);
    let probe: StateVector<S> = haar_random_state(n, &mut rng)?;
    let (channel, parties) = channel_qis::<S>(n)?;
    let layout = n_layout(n, &parties);
    let combined = probe.tensor(&channel);
    let alice = project_onto_basis(&combined, &layout.alice_subset, &omega_basis_qis::<S>(n)?)?;
    check_support(alice.total_weight())?;

    let hadamard = hadamard_basis::<S>();
    let charlie_positions: Vec<usize> = (1..=n).collect();
    let mut mismatches = 0usize;
    for (j, &w_a) in alice.weights.iter().enumerate() {
        if w_a <= S::TOL_ALGEBRA {
            continue;
        }
        let post_alice = alice.residual_state(j).ok_or(Error::EmptySystem)?;
        let bob = project_onto_basis(&post_alice, &layout.bob_local, &hadamard)?;
        for (b, &w_b) in bob.weights.iter().enumerate() {
            if w_b <= S::TOL_ALGEBRA {
                continue;
            }
            let charlie = bob.residual_state(b).ok_or(Error::EmptySystem)?;
            let searched = search_correction(&probe, &charlie_positions, &charlie)?;
            if searched != rule_correction(n, j, b == 1)? {
                mismatches += 1;
            }
        }
    }
    Ok(mismatches)
}

/// Which protocol a secrecy check exercises. The teleportation channel is
/// included as a two-party control case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecrecyProtocol {
    Single(SingleProtocol),
    Two,
    N,
    TeleportControl,
}

impl SecrecyProtocol {
    pub fn id(&self) -> String {
        match self {
            SecrecyProtocol::Single(p) => format!("qis-{p}"),
            SecrecyProtocol::Two => "qis-two".into(),
            SecrecyProtocol::N => "qis-n".into(),
            SecrecyProtocol::TeleportControl => "teleport-n".into(),
        }
    }
}

/// Input-independence distances for single-party views.
#[derive(Clone, Debug)]
pub struct SecrecyReport {
    pub protocol_id: String,
    pub n: usize,
    pub trials: usize,
    /// Per party: largest trace distance between the reduced states of that
    /// party's channel qubits across any two inputs (before measurements).
    pub pre_measurement: Vec<(Party, f64)>,
    /// The receiving party's outcome-averaged view after Alice measures but
    /// before any classical message arrives.
    pub post_alice_party: Party,
    pub post_alice_distance: f64,
}

impl SecrecyReport {
    pub fn max_distance(&self) -> f64 {
        self.pre_measurement
            .iter()
            .map(|(_, d)| *d)
            .fold(self.post_alice_distance, f64::max)
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_distance() <= tolerance
    }
}

fn max_pairwise_distance<S: Scalar>(states: &[DensityMatrix<S>]) -> Result<f64> {
    let mut max = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for b in states.iter().skip(i + 1) {
            max = max.max(a.trace_distance(b)?.to_f64_lossy());
        }
    }
    Ok(max)
}

/// Checks that no single party's local state depends on the secret: reduced
/// states of each party's channel share must coincide across random inputs,
/// both before any measurement and (for the receiver) averaged over Alice's
/// outcomes after her measurement.
pub fn secrecy_check<S: Scalar, R: Rng + ?Sized>(
    protocol: SecrecyProtocol,
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<SecrecyReport> {
    if trials == 0 {
        return Err(Error::EmptySystem);
    }
    let (n_input, channel, parties, alice_subset, alice_basis, receiver) = match protocol {
        SecrecyProtocol::Single(p) => {
            let layout = single_layout::<S>(p);
            let (channel, _) = channel_teleport::<S>(2)?;
            (
                1usize,
                channel,
                layout.assignment.clone(),
                layout.alice_subset.clone(),
                layout.alice_basis,
                Party::Charlie,
            )
        }
        SecrecyProtocol::Two | SecrecyProtocol::N => {
            let n = if protocol == SecrecyProtocol::Two { 2 } else { n };
            let (channel, parties) = channel_qis::<S>(n)?;
            let layout = n_layout(n, &parties);
            (
                n,
                channel,
                parties,
                layout.alice_subset,
                omega_basis_qis::<S>(n)?,
                Party::Charlie,
            )
        }
        SecrecyProtocol::TeleportControl => {
            let (channel, parties) = channel_teleport::<S>(n)?;
            let mut alice_subset: Vec<usize> = (1..=n).collect();
            alice_subset.extend(parties.positions_of(Party::Alice).iter().map(|p| p + n));
            (
                n,
                channel,
                parties,
                alice_subset,
                crate::bases::omega_basis_teleport::<S>(n)?,
                Party::Bob,
            )
        }
    };

    let total_qubits = n_input + channel.num_qubits();
    let remainder: Vec<usize> = (1..=total_qubits)
        .filter(|p| !alice_subset.contains(p))
        .collect();
    let receiver_global: Vec<usize> = parties
        .positions_of(receiver)
        .iter()
        .map(|p| p + n_input)
        .collect();
    let receiver_local = local_ranks(&remainder, &receiver_global);

    let present: Vec<Party> = [Party::Alice, Party::Bob, Party::Charlie]
        .into_iter()
        .filter(|&p| parties.count_of(p) > 0)
        .collect();

    let mut pre: Vec<Vec<DensityMatrix<S>>> = vec![Vec::new(); present.len()];
    let mut post: Vec<DensityMatrix<S>> = Vec::new();
    for _ in 0..trials {
        let input: StateVector<S> = haar_random_state(n_input, rng)?;
        let combined = input.tensor(&channel);

        for (slot, &party) in present.iter().enumerate() {
            let positions: Vec<usize> = parties
                .positions_of(party)
                .iter()
                .map(|p| p + n_input)
                .collect();
            pre[slot].push(combined.partial_trace(&positions)?);
        }

        let projection = project_onto_basis(&combined, &alice_subset, &alice_basis)?;
        let mut parts = Vec::new();
        for (k, &w) in projection.weights.iter().enumerate() {
            if w <= S::TOL_ALGEBRA {
                continue;
            }
            let residual = projection.residual_state(k).ok_or(Error::EmptySystem)?;
            parts.push((w, residual.partial_trace(&receiver_local)?));
        }
        post.push(DensityMatrix::mixture(&parts)?);
    }

    let mut pre_measurement = Vec::with_capacity(present.len());
    for (slot, &party) in present.iter().enumerate() {
        pre_measurement.push((party, max_pairwise_distance(&pre[slot])?));
    }
    Ok(SecrecyReport {
        protocol_id: protocol.id(),
        n: n_input,
        trials,
        pre_measurement,
        post_alice_party: receiver,
        post_alice_distance: max_pairwise_distance(&post)?,
    })
}
