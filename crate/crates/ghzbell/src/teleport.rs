//! Deterministic teleportation over the composite channel: the five-qubit
//! single-qubit protocol, the two-qubit protocol, and the general N-qubit
//! protocol with Bob's Pauli correction rule.

use rand::Rng;

use crate::bases::{
    channel_teleport, fivequbit_basis, omega_basis_teleport, BitString, Party,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::statevec::{
    measure_in_basis, project_onto_basis, PauliString, StateVector,
};

/// One classical transmission between parties.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalMessage {
    pub sender: Party,
    pub receiver: Party,
    pub bit_count: usize,
    pub payload: BitString,
}

/// Full record of one protocol run: measurement outcomes, classical
/// traffic, applied corrections, and the final fidelity against the input.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolTranscript {
    pub protocol_id: String,
    pub n: usize,
    /// Master seed, stamped by the caller that owns the RNG (the CLI);
    /// `None` for library-driven runs.
    pub seed: Option<u64>,
    pub outcome_indices: Vec<usize>,
    pub classical_messages: Vec<ClassicalMessage>,
    pub corrections: Vec<PauliString>,
    pub fidelity: f64,
}

impl ProtocolTranscript {
    pub fn total_classical_bits(&self) -> usize {
        self.classical_messages.iter().map(|m| m.bit_count).sum()
    }

    /// Human-readable outcome tag (measurement family element index).
    pub fn outcome_label(&self) -> String {
        match self.protocol_id.as_str() {
            "teleport-fivequbit" => self
                .outcome_indices
                .first()
                .map(|j| format!("row-{}", j + 1))
                .unwrap_or_default(),
            "qis-i" | "qis-ii" | "qis-iii" => match self.outcome_indices.as_slice() {
                [a, b] => format!("alice-{a}-bob-{b}"),
                _ => String::new(),
            },
            "qis-two" | "qis-n" => match self.outcome_indices.as_slice() {
                [j, b] => format!(
                    "omega-{j}-bob-{}",
                    if *b == 0 { "plus" } else { "minus" }
                ),
                _ => String::new(),
            },
            _ => self
                .outcome_indices
                .first()
                .map(|j| format!("omega-{j}"))
                .unwrap_or_default(),
        }
    }
}

/// The receiver's correction for outcome `j`: `Z_k` where bit `b_k` of `j`
/// is set and `X_k` where `b_(k+N)` is set, on the receiver's qubits
/// (GHZ qubit first, then Bell partners in position order).
pub fn correction_for(n: usize, j: usize) -> Result<PauliString> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    if j >= 1usize << (2 * n) {
        return Err(Error::IndexOutOfRange {
            index: j as u64,
            num_qubits: 2 * n,
        });
    }
    let low = (1u64 << n) - 1;
    let j = j as u64;
    PauliString::from_masks(n, j & low, (j >> n) & low)
}

/// Alice's measured positions in the combined `input (x) channel` state:
/// the N input qubits first, then her channel qubits in global order.
fn alice_subset(n: usize, alice_channel: &[usize]) -> Vec<usize> {
    let mut subset: Vec<usize> = (1..=n).collect();
    subset.extend(alice_channel.iter().map(|p| p + n));
    subset
}

/// Teleports an N-qubit state: Alice measures her `2N+1` qubits in the
/// rearranged-product family, sends the `2N`-bit outcome, and Bob applies
/// the matching correction. Fidelity 1 on every branch.
pub fn teleport_n<S: Scalar, R: Rng + ?Sized>(
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
    let (channel, parties) = channel_teleport::<S>(n)?;
    let combined = input.tensor(&channel);
    let subset = alice_subset(n, &parties.positions_of(Party::Alice));
    let basis = omega_basis_teleport::<S>(n)?;
    let measurement = measure_in_basis(&combined, &subset, &basis, rng)?;
    let j = measurement.outcome;
    let bob_state = measurement.post_state.ok_or(Error::EmptySystem)?;
    let correction = correction_for(n, j)?;
    let corrected = bob_state.apply_pauli(&correction)?;
    let fidelity = corrected.fidelity(input)?.to_f64_lossy();
    Ok(ProtocolTranscript {
        protocol_id: "teleport-n".into(),
        n,
        seed: None,
        outcome_indices: vec![j],
        classical_messages: vec![ClassicalMessage {
            sender: Party::Alice,
            receiver: Party::Bob,
            bit_count: 2 * n,
            payload: BitString::from_value(2 * n, j as u64)?,
        }],
        corrections: vec![correction],
        fidelity,
    })
}

/// Single-qubit teleportation over the five-qubit channel with Alice
/// holding four channel qubits: she measures all five of her qubits in the
/// four-element product family and Bob corrects with {I, Z, X, XZ}.
pub fn teleport_1_fivequbit<S: Scalar, R: Rng + ?Sized>(
    input: &StateVector<S>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    if input.num_qubits() != 1 {
        return Err(Error::QubitCountMismatch {
            expected: 1,
            actual: input.num_qubits(),
        });
    }
    let (channel, _) = channel_teleport::<S>(2)?;
    let combined = input.tensor(&channel);
    let basis = fivequbit_basis::<S>();
    let measurement = measure_in_basis(&combined, &[1, 2, 3, 4, 5], &basis, rng)?;
    let j = measurement.outcome;
    let bob_state = measurement.post_state.ok_or(Error::EmptySystem)?;
    let correction = correction_for(1, j)?;
    let corrected = bob_state.apply_pauli(&correction)?;
    let fidelity = corrected.fidelity(input)?.to_f64_lossy();
    Ok(ProtocolTranscript {
        protocol_id: "teleport-fivequbit".into(),
        n: 1,
        seed: None,
        outcome_indices: vec![j],
        classical_messages: vec![ClassicalMessage {
            sender: Party::Alice,
            receiver: Party::Bob,
            bit_count: 2,
            payload: BitString::from_value(2, j as u64)?,
        }],
        corrections: vec![correction],
        fidelity,
    })
}

/// Two-qubit teleportation: [`teleport_n`] at N = 2, with the transcript
/// naming the outcome's row in the sixteen-element family.
pub fn teleport_2<S: Scalar, R: Rng + ?Sized>(
    input: &StateVector<S>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    let mut transcript = teleport_n(input, 2, rng)?;
    transcript.protocol_id = "teleport-2".into();
    Ok(transcript)
}

/// One enumerated outcome branch.
#[derive(Clone, Debug)]
pub struct TeleportBranch<S: Scalar> {
    pub outcome: usize,
    pub probability: S,
    pub fidelity: S,
    pub correction: PauliString,
}

fn enumerate_branches<S: Scalar>(
    input: &StateVector<S>,
    combined: &StateVector<S>,
    subset: &[usize],
    basis: &crate::statevec::MeasurementBasis<S>,
    correction_n: usize,
) -> Result<Vec<TeleportBranch<S>>> {
    let projection = project_onto_basis(combined, subset, basis)?;
    let total = projection.total_weight();
    if (S::one() - total).abs() > S::TOL_SUPPORT {
        return Err(Error::IncompleteSupport {
            residual: (S::one() - total).to_f64_lossy(),
        });
    }
    let mut branches = Vec::with_capacity(basis.num_elements());
    for j in 0..basis.num_elements() {
        let correction = correction_for(correction_n, j)?;
        let fidelity = match projection.residual_state(j) {
            Some(state) => state.apply_pauli(&correction)?.fidelity(input)?,
            None => S::zero(),
        };
        branches.push(TeleportBranch {
            outcome: j,
            probability: projection.weights[j],
            fidelity,
            correction,
        });
    }
    Ok(branches)
}

/// Every outcome of [`teleport_n`] by direct projection, with per-branch
/// probability and corrected fidelity.
pub fn enumerate_teleport_n<S: Scalar>(
    input: &StateVector<S>,
    n: usize,
) -> Result<Vec<TeleportBranch<S>>> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    if input.num_qubits() != n {
        return Err(Error::QubitCountMismatch {
            expected: n,
            actual: input.num_qubits(),
        });
    }
    let (channel, parties) = channel_teleport::<S>(n)?;
    let combined = input.tensor(&channel);
    let subset = alice_subset(n, &parties.positions_of(Party::Alice));
    let basis = omega_basis_teleport::<S>(n)?;
    enumerate_branches(input, &combined, &subset, &basis, n)
}

/// Every outcome of [`teleport_1_fivequbit`] by direct projection.
pub fn enumerate_fivequbit<S: Scalar>(input: &StateVector<S>) -> Result<Vec<TeleportBranch<S>>> {
    if input.num_qubits() != 1 {
        return Err(Error::QubitCountMismatch {
            expected: 1,
            actual: input.num_qubits(),
        });
    }
    let (channel, _) = channel_teleport::<S>(2)?;
    let combined = input.tensor(&channel);
    let basis = fivequbit_basis::<S>();
    enumerate_branches(input, &combined, &[1, 2, 3, 4, 5], &basis, 1)
}
