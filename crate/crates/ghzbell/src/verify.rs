//! Brute-force oracles used by tests and the CLI: orthonormality checks,
//! exhaustive branch decomposition, Pauli correction search, and
//! entanglement reports. Everything here is built on state-vector
//! primitives only, independent of the protocol modules it validates.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::statevec::{
    project_onto_basis, DensityMatrix, MeasurementBasis, PauliString, StateVector,
};

/// One named numeric check against a bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `measured <= bound`.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            pass: measured <= bound,
        }
    }

    /// Passes when `|measured - target| <= tolerance`; `bound` records the
    /// target.
    pub fn near(name: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: target,
            pass: (measured - target).abs() <= tolerance,
        }
    }
}

/// A named bundle of checks; passes only if every check does.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            suite: suite.into(),
            checks,
            pass,
        }
    }
}

/// Reports the largest Gram-matrix deviation of a basis from the identity.
pub fn check_orthonormal<S: Scalar>(basis: &MeasurementBasis<S>) -> VerificationReport {
    let deviation = basis.gram_deviation().to_f64_lossy();
    let check = Check::at_most(
        format!("{}-gram-deviation", basis.label()),
        deviation,
        S::TOL_ALGEBRA.to_f64_lossy(),
    );
    VerificationReport::new(format!("orthonormal-{}", basis.label()), vec![check])
}

/// Reports how far `sum_j |e_j><e_j|` falls from the identity on the
/// basis's space. Only meaningful for families with as many elements as
/// dimensions; partial families are reported against their span dimension.
pub fn check_completeness<S: Scalar>(basis: &MeasurementBasis<S>) -> VerificationReport {
    let dim = 1usize << basis.num_qubits();
    let mut deviation = S::zero();
    for r in 0..dim {
        for c in 0..dim {
            let mut sum = num_complex::Complex::new(S::zero(), S::zero());
            for element in basis.elements() {
                sum += element.amplitude(r) * element.amplitude(c).conj();
            }
            let target = if r == c { S::one() } else { S::zero() };
            let dev = (sum - num_complex::Complex::new(target, S::zero())).norm();
            if dev > deviation {
                deviation = dev;
            }
        }
    }
    let check = Check::at_most(
        format!("{}-completeness-deviation", basis.label()),
        deviation.to_f64_lossy(),
        S::TOL_ALGEBRA.to_f64_lossy(),
    );
    VerificationReport::new(format!("complete-{}", basis.label()), vec![check])
}

/// One projection branch: outcome index, squared-norm weight, and the
/// renormalized residual on the complement (`None` for negligible weight or
/// when the subset covered every qubit).
#[derive(Clone, Debug)]
pub struct DecomposedBranch<S: Scalar> {
    pub outcome: usize,
    pub weight: S,
    pub residual: Option<StateVector<S>>,
}

/// Expands a state over every element of `basis` on `subset` (ordered,
/// 1-based): the enumeration engine behind all branch oracles. Weights sum
/// to 1 whenever the basis covers the state's support; any shortfall is the
/// out-of-span weight, reported rather than erring.
pub fn decompose<S: Scalar>(
    combined: &StateVector<S>,
    subset: &[usize],
    basis: &MeasurementBasis<S>,
) -> Result<Vec<DecomposedBranch<S>>> {
    basis.ensure_orthonormal()?;
    let projection = project_onto_basis(combined, subset, basis)?;
    Ok((0..basis.num_elements())
        .map(|k| DecomposedBranch {
            outcome: k,
            weight: projection.weights[k],
            residual: projection.residual_state(k),
        })
        .collect())
}

/// Finds the unique Pauli string on `candidate_qubits` mapping `actual`
/// onto `target` (fidelity within tolerance of 1). Zero hits or more than
/// one hit are errors: a miss signals a broken protocol, an ambiguity a
/// degenerate target.
pub fn search_correction<S: Scalar>(
    target: &StateVector<S>,
    candidate_qubits: &[usize],
    actual: &StateVector<S>,
) -> Result<PauliString> {
    let n = actual.num_qubits();
    if target.num_qubits() != n {
        return Err(Error::QubitCountMismatch {
            expected: n,
            actual: target.num_qubits(),
        });
    }
    for &p in candidate_qubits {
        if p == 0 || p > n {
            return Err(Error::InvalidPosition {
                position: p,
                num_qubits: n,
            });
        }
    }
    let k = candidate_qubits.len();
    let threshold = S::one() - S::TOL_ALGEBRA;
    let mut found: Option<PauliString> = None;
    let mut hits = 0usize;
    for selector in 0..1u64 << (2 * k) {
        let mut z_mask = 0u64;
        let mut x_mask = 0u64;
        for (idx, &p) in candidate_qubits.iter().enumerate() {
            if selector >> idx & 1 == 1 {
                z_mask |= 1 << (p - 1);
            }
            if selector >> (k + idx) & 1 == 1 {
                x_mask |= 1 << (p - 1);
            }
        }
        let op = PauliString::from_masks(n, z_mask, x_mask)?;
        if actual.apply_pauli(&op)?.fidelity(target)? >= threshold {
            hits += 1;
            if found.is_none() {
                found = Some(op);
            }
        }
    }
    match (hits, found) {
        (1, Some(op)) => Ok(op),
        (0, _) => Err(Error::CorrectionNotFound),
        (count, _) => Err(Error::CorrectionAmbiguous { count }),
    }
}

/// Checks that a bipartition of `state` is maximally entangled: the smaller
/// side's reduced matrix must have entropy equal to its qubit count and be
/// maximally mixed. `side` lists one side's positions; the complement forms
/// the other.
pub fn entanglement_report<S: Scalar>(
    state: &StateVector<S>,
    side: &[usize],
) -> Result<VerificationReport> {
    let n = state.num_qubits();
    let complement: Vec<usize> = (1..=n).filter(|p| !side.contains(p)).collect();
    if side.is_empty() || complement.is_empty() {
        return Err(Error::EmptySystem);
    }
    let smaller = if side.len() <= complement.len() {
        side.to_vec()
    } else {
        complement
    };
    let rho = state.partial_trace(&smaller)?;
    let entropy = rho.entropy_bits()?.to_f64_lossy();
    let mixed = DensityMatrix::maximally_mixed(smaller.len())?;
    let distance = rho.trace_distance(&mixed)?.to_f64_lossy();
    let tol = S::TOL_ALGEBRA.to_f64_lossy();
    let label = smaller
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",");
    Ok(VerificationReport::new(
        format!("entanglement-{label}"),
        vec![
            Check::near("entropy-bits", entropy, smaller.len() as f64, tol),
            Check::at_most("distance-from-maximally-mixed", distance, tol),
        ],
    ))
}
