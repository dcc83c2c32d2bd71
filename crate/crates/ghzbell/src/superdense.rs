//! Dense coding over the composite channel: `2N+1` classical bits travel on
//! the `N+1` qubits Alice holds, decoded by one measurement in the encoded
//! channel-state basis.

use rand::Rng;

use crate::bases::{channel_teleport, superdense_basis, BitString};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::statevec::{measure_in_basis, MeasurementBasis, PauliString, StateVector};

/// The encoding operator for a `2N+1`-bit string: `a_k` keys Z on position
/// `2k` (k = 1..N), `a_(N+1)` keys X on position 1, and `a_(N+1+m)` keys X
/// on position `2m` (m = 1..N). Every touched position belongs to Alice.
pub fn encode_pauli(n: usize, bits: &BitString) -> Result<PauliString> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    let expected = 2 * n + 1;
    if bits.length() != expected {
        return Err(Error::BitLengthMismatch {
            expected,
            actual: bits.length(),
        });
    }
    let mut z = Vec::new();
    let mut x = Vec::new();
    for k in 1..=n {
        if bits.bit(k) {
            z.push(2 * k);
        }
    }
    if bits.bit(n + 1) {
        x.push(1);
    }
    for m in 1..=n {
        if bits.bit(n + 1 + m) {
            x.push(2 * m);
        }
    }
    PauliString::from_positions(2 * n + 1, &z, &x)
}

/// Encodes a bit string: the channel state under its encoding operator,
/// with the leading amplitude made positive.
pub fn encode<S: Scalar>(n: usize, bits: &BitString) -> Result<StateVector<S>> {
    let (channel, _) = channel_teleport::<S>(n)?;
    let op = encode_pauli(n, bits)?;
    Ok(channel.apply_pauli(&op)?.canonicalized())
}

/// Decodes by measuring all `2N+1` qubits in the encoded-state basis; the
/// outcome index is the transmitted bit string. Deterministic (probability
/// 1) for any encoded input.
pub fn decode<S: Scalar, R: Rng + ?Sized>(
    state: &StateVector<S>,
    n: usize,
    rng: &mut R,
) -> Result<BitString> {
    if state.num_qubits() != 2 * n + 1 {
        return Err(Error::QubitCountMismatch {
            expected: 2 * n + 1,
            actual: state.num_qubits(),
        });
    }
    let basis = superdense_basis::<S>(n)?;
    let subset: Vec<usize> = (1..=2 * n + 1).collect();
    let measurement = measure_in_basis(state, &subset, &basis, rng)?;
    BitString::from_value(2 * n + 1, measurement.outcome as u64)
}

/// Capacity summary: how many orthonormal signal states Alice reaches with
/// operations on her own qubits, and the resulting bits-per-qubit ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacityReport {
    pub num_states: usize,
    pub all_orthonormal: bool,
    pub alice_qubit_count: usize,
    /// Classical bits per protocol round: `2N+1`.
    pub classical_bits: usize,
    /// Qubits physically sent to Bob: `N+1`.
    pub qubits_transmitted: usize,
    /// Largest Gram-matrix deviation from the identity.
    pub gram_deviation: f64,
}

pub fn capacity_check<S: Scalar>(n: usize) -> Result<CapacityReport> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    let (channel, parties) = channel_teleport::<S>(n)?;
    let count = 1usize << (2 * n + 1);
    let mut elements = Vec::with_capacity(count);
    for j in 0..count {
        let bits = BitString::from_value(2 * n + 1, j as u64)?;
        elements.push(channel.apply_pauli(&encode_pauli(n, &bits)?)?.canonicalized());
    }
    let family = MeasurementBasis::new_unchecked(format!("superdense-n{n}"), elements);
    let deviation = family.gram_deviation();
    Ok(CapacityReport {
        num_states: count,
        all_orthonormal: deviation <= S::TOL_ALGEBRA,
        alice_qubit_count: parties.count_of(crate::bases::Party::Alice),
        classical_bits: 2 * n + 1,
        qubits_transmitted: n + 1,
        gram_deviation: deviation.to_f64_lossy(),
    })
}
