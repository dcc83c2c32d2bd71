//! Dense state-vector engine: construction, tensor products, Pauli strings,
//! qubit permutations, inner products, partial trace, and projective
//! measurement.
//!
//! Conventions used across the crate:
//! - Qubit positions are 1-based. Qubit 1 is the leftmost symbol of a ket
//!   label and the most significant bit of the amplitude index, so `|00011>`
//!   on five qubits is amplitude index 3.
//! - A Pauli string applies `X^x * Z^z` on each site with Z acting first.
//! - Measurement collapses and removes the measured qubits; the
//!   post-measurement state lives on the complement positions in ascending
//!   order.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn czero<S: Scalar>() -> Complex<S> {
    Complex::new(S::zero(), S::zero())
}

/// Binary ket label of an amplitude index, qubit 1 leftmost.
pub fn ket_label(num_qubits: usize, index: usize) -> String {
    format!("{index:0num_qubits$b}")
}

/// Deterministic per-trial random stream.
///
/// Every trial gets an independent ChaCha8 stream derived from the master
/// seed, so trials can run in any order (or in parallel) with identical
/// results.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Pure state of `n` qubits as `2^n` complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<S: Scalar> {
    num_qubits: usize,
    amps: Vec<Complex<S>>,
}

impl<S: Scalar> StateVector<S> {
    /// Builds a state from a full amplitude vector (length must be a power
    /// of two, at least 2). The amplitudes are taken as-is; normalize first
    /// if a unit vector is required.
    pub fn from_amplitudes(amps: Vec<Complex<S>>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::BadDimension { dim });
        }
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    /// Builds a state from sparse real `(coefficient, ket index)` terms.
    pub fn from_terms(num_qubits: usize, terms: &[(S, usize)]) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::EmptySystem);
        }
        let dim = 1usize << num_qubits;
        let mut amps = vec![czero(); dim];
        for &(coeff, index) in terms {
            if index >= dim {
                return Err(Error::IndexOutOfRange {
                    index: index as u64,
                    num_qubits,
                });
            }
            amps[index] = amps[index] + Complex::new(coeff, S::zero());
        }
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        Self::from_terms(num_qubits, &[(S::one(), index)])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<S>] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex<S> {
        self.amps[index]
    }

    /// L2 norm.
    pub fn norm(&self) -> S {
        self.amps
            .iter()
            .map(|a| a.norm_sqr())
            .fold(S::zero(), |acc, v| acc + v)
            .sqrt()
    }

    /// Rescales to unit norm.
    pub fn normalized(mut self) -> Self {
        let norm = self.norm();
        if norm > S::zero() {
            let inv = S::one() / norm;
            for a in &mut self.amps {
                *a = *a * inv;
            }
        }
        self
    }

    /// Fixes the global phase so the first non-negligible amplitude is real
    /// and positive. Orthogonality, norms, and all measurement statistics
    /// are unchanged; generated basis families use this so their elements
    /// match the printed sign convention.
    pub fn canonicalized(mut self) -> Self {
        let threshold = S::TOL_ALGEBRA * S::TOL_ALGEBRA;
        if let Some(first) = self.amps.iter().find(|a| a.norm_sqr() > threshold) {
            let phase = first.conj() / first.norm();
            for a in &mut self.amps {
                *a = *a * phase;
            }
        }
        self
    }

    /// Tensor product; `self`'s qubits land on positions `1..=self.n` (more
    /// significant), `other`'s after them.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(*a * *b);
            }
        }
        Self {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        }
    }

    /// Applies a Pauli string (Z phases first, then X flips).
    pub fn apply_pauli(&self, op: &PauliString) -> Result<Self> {
        if op.num_qubits() != self.num_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.num_qubits,
                actual: op.num_qubits(),
            });
        }
        let zbits = op.z_amp_mask();
        let xbits = op.x_amp_mask();
        let mut amps = vec![czero(); self.dim()];
        for (i, &a) in self.amps.iter().enumerate() {
            let signed = if (i & zbits).count_ones() % 2 == 1 {
                -a
            } else {
                a
            };
            amps[i ^ xbits] = signed;
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            amps,
        })
    }

    /// Relabels qubits: input qubit `s` becomes output position
    /// `placement[s]`.
    pub fn permute(&self, perm: &QubitPermutation) -> Result<Self> {
        let n = self.num_qubits;
        if perm.num_qubits() != n {
            return Err(Error::QubitCountMismatch {
                expected: n,
                actual: perm.num_qubits(),
            });
        }
        let mut amps = vec![czero(); self.dim()];
        for (i, &a) in self.amps.iter().enumerate() {
            let mut j = 0usize;
            for s in 1..=n {
                if (i >> (n - s)) & 1 == 1 {
                    j |= 1 << (n - perm.placement()[s - 1]);
                }
            }
            amps[j] = a;
        }
        Ok(Self {
            num_qubits: n,
            amps,
        })
    }

    /// `<self|other>` with conjugation on `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<S>> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    /// `|<self|other>|^2`; insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> Result<S> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// Reduced density matrix on `keep` (output qubit order: positions
    /// ascending).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix<S>> {
        let n = self.num_qubits;
        let keep = sorted_distinct_positions(keep, n)?;
        if keep.is_empty() {
            return Err(Error::EmptySystem);
        }
        let k = keep.len();
        let traced: Vec<usize> = (1..=n).filter(|p| !keep.contains(p)).collect();
        let kdim = 1usize << k;
        let tdim = 1usize << traced.len();

        let scatter = |positions: &[usize], bits: usize| -> usize {
            let mut out = 0usize;
            for (ordinal, &p) in positions.iter().enumerate() {
                if (bits >> (positions.len() - 1 - ordinal)) & 1 == 1 {
                    out |= 1 << (n - p);
                }
            }
            out
        };
        let kept_base: Vec<usize> = (0..kdim).map(|b| scatter(&keep, b)).collect();
        let traced_base: Vec<usize> = (0..tdim).map(|b| scatter(&traced, b)).collect();

        let mut entries = vec![czero(); kdim * kdim];
        for row in 0..kdim {
            for col in 0..kdim {
                let mut acc = czero();
                for &t in &traced_base {
                    let a = self.amps[kept_base[row] | t];
                    let b = self.amps[kept_base[col] | t];
                    acc = acc + a * b.conj();
                }
                entries[row * kdim + col] = acc;
            }
        }
        DensityMatrix::from_entries(entries)
    }
}

/// Haar-like random pure state: independent standard complex normal
/// amplitudes, normalized.
pub fn haar_random_state<S: Scalar, R: Rng + ?Sized>(
    num_qubits: usize,
    rng: &mut R,
) -> Result<StateVector<S>> {
    if num_qubits == 0 {
        return Err(Error::EmptySystem);
    }
    let dim = 1usize << num_qubits;
    let amps: Vec<Complex<S>> = (0..dim)
        .map(|_| Complex::new(S::standard_normal(rng), S::standard_normal(rng)))
        .collect();
    Ok(StateVector {
        num_qubits,
        amps,
    }
    .normalized())
}

/// Product of X and Z factors identified by 1-based qubit positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    num_qubits: usize,
    z_mask: u64,
    x_mask: u64,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            z_mask: 0,
            x_mask: 0,
        }
    }

    /// Builds a string from Z and X position lists.
    pub fn from_positions(num_qubits: usize, z: &[usize], x: &[usize]) -> Result<Self> {
        let mut op = Self::identity(num_qubits);
        for &p in z {
            op.set_z(p)?;
        }
        for &p in x {
            op.set_x(p)?;
        }
        Ok(op)
    }

    /// Builds a string from position bit sets (bit `p - 1` means position
    /// `p`).
    pub fn from_masks(num_qubits: usize, z_mask: u64, x_mask: u64) -> Result<Self> {
        if num_qubits == 0 || num_qubits > 64 {
            return Err(Error::EmptySystem);
        }
        let valid = if num_qubits == 64 {
            u64::MAX
        } else {
            (1u64 << num_qubits) - 1
        };
        if z_mask & !valid != 0 || x_mask & !valid != 0 {
            let bad = 64 - ((z_mask | x_mask) & !valid).leading_zeros() as usize;
            return Err(Error::InvalidPosition {
                position: bad,
                num_qubits,
            });
        }
        Ok(Self {
            num_qubits,
            z_mask,
            x_mask,
        })
    }

    fn set_z(&mut self, position: usize) -> Result<()> {
        self.check(position)?;
        self.z_mask |= 1 << (position - 1);
        Ok(())
    }

    fn set_x(&mut self, position: usize) -> Result<()> {
        self.check(position)?;
        self.x_mask |= 1 << (position - 1);
        Ok(())
    }

    fn check(&self, position: usize) -> Result<()> {
        if position == 0 || position > self.num_qubits {
            return Err(Error::InvalidPosition {
                position,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn is_identity(&self) -> bool {
        self.z_mask == 0 && self.x_mask == 0
    }

    pub fn z_positions(&self) -> Vec<usize> {
        mask_positions(self.z_mask)
    }

    pub fn x_positions(&self) -> Vec<usize> {
        mask_positions(self.x_mask)
    }

    /// The (Z, X) position masks, bit `p - 1` for position `p`.
    pub fn masks(&self) -> (u64, u64) {
        (self.z_mask, self.x_mask)
    }

    /// Positions touched by either factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        mask_positions(self.z_mask | self.x_mask)
    }

    fn z_amp_mask(&self) -> usize {
        position_mask_to_amp_mask(self.z_mask, self.num_qubits)
    }

    fn x_amp_mask(&self) -> usize {
        position_mask_to_amp_mask(self.x_mask, self.num_qubits)
    }
}

impl std::fmt::Display for PauliString {
    /// `I` for the identity, otherwise Z factors then X factors, positions
    /// ascending (e.g. `Z2Z3X1`).
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        for p in self.z_positions() {
            write!(f, "Z{p}")?;
        }
        for p in self.x_positions() {
            write!(f, "X{p}")?;
        }
        Ok(())
    }
}

fn mask_positions(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

fn position_mask_to_amp_mask(mask: u64, num_qubits: usize) -> usize {
    let mut out = 0usize;
    for p in 1..=num_qubits {
        if mask >> (p - 1) & 1 == 1 {
            out |= 1 << (num_qubits - p);
        }
    }
    out
}

/// Relabeling of qubit positions: entry `s - 1` gives the output position
/// receiving input qubit `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitPermutation {
    placement: Vec<usize>,
}

impl QubitPermutation {
    pub fn new(placement: Vec<usize>) -> Result<Self> {
        let n = placement.len();
        if n == 0 {
            return Err(Error::EmptySystem);
        }
        let mut seen = vec![false; n + 1];
        for &p in &placement {
            if p == 0 || p > n || seen[p] {
                return Err(Error::InvalidPermutation { num_qubits: n });
            }
            seen[p] = true;
        }
        Ok(Self { placement })
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self {
            placement: (1..=num_qubits).collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.placement.len()
    }

    pub fn placement(&self) -> &[usize] {
        &self.placement
    }

    pub fn inverse(&self) -> Self {
        let mut placement = vec![0usize; self.placement.len()];
        for (s, &target) in self.placement.iter().enumerate() {
            placement[target - 1] = s + 1;
        }
        Self { placement }
    }
}

/// Ordered orthonormal family of states on a qubit subset. The family may
/// span only a subspace; measurement then requires the state's support to
/// lie inside that span.
#[derive(Clone, Debug)]
pub struct MeasurementBasis<S: Scalar> {
    label: String,
    elements: Vec<StateVector<S>>,
    verified: bool,
}

impl<S: Scalar> MeasurementBasis<S> {
    /// Validates pairwise orthonormality at construction.
    pub fn new(label: impl Into<String>, elements: Vec<StateVector<S>>) -> Result<Self> {
        let basis = Self::new_unchecked(label, elements);
        basis.ensure_orthonormal()?;
        Ok(Self {
            verified: true,
            ..basis
        })
    }

    /// Skips the orthonormality check; intended for negative controls and
    /// verification tooling. Measurement re-validates lazily.
    pub fn new_unchecked(label: impl Into<String>, elements: Vec<StateVector<S>>) -> Self {
        Self {
            label: label.into(),
            elements,
            verified: false,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn elements(&self) -> &[StateVector<S>] {
        &self.elements
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Qubit count of each element.
    pub fn num_qubits(&self) -> usize {
        self.elements.first().map_or(0, StateVector::num_qubits)
    }

    /// Largest `|<e_i|e_j> - delta_ij|` over all pairs.
    pub fn gram_deviation(&self) -> S {
        let mut max = S::zero();
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate().skip(i) {
                let g = match a.inner_product(b) {
                    Ok(g) => g,
                    Err(_) => return S::infinity(),
                };
                let target = if i == j { S::one() } else { S::zero() };
                let dev = (g - Complex::new(target, S::zero())).norm();
                if dev > max {
                    max = dev;
                }
            }
        }
        max
    }

    pub(crate) fn ensure_orthonormal(&self) -> Result<()> {
        if self.elements.is_empty() {
            return Err(Error::EmptySystem);
        }
        let n = self.num_qubits();
        if self.elements.iter().any(|e| e.num_qubits() != n) {
            return Err(Error::QubitCountMismatch {
                expected: n,
                actual: self
                    .elements
                    .iter()
                    .map(StateVector::num_qubits)
                    .find(|&m| m != n)
                    .unwrap_or(n),
            });
        }
        if self.verified {
            return Ok(());
        }
        let deviation = self.gram_deviation();
        if deviation > S::TOL_ALGEBRA {
            return Err(Error::NonOrthonormalBasis {
                label: self.label.clone(),
                deviation: deviation.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

/// Result of one projective measurement.
#[derive(Clone, Debug)]
pub struct Measurement<S: Scalar> {
    /// Index of the basis element the state collapsed to.
    pub outcome: usize,
    /// Renormalized state of the unmeasured qubits (complement positions
    /// ascending); `None` when every qubit was measured.
    pub post_state: Option<StateVector<S>>,
    /// Born probability of the sampled outcome.
    pub probability: S,
}

/// Projection of a state onto every element of a basis on a subset.
///
/// Residuals are unnormalized: `weight = |residual|^2` and the input state
/// equals `sum_k basis_k (x) residual_k` (re-interleaved). Shared by the
/// sampling and enumeration paths.
pub(crate) struct Projection<S: Scalar> {
    pub weights: Vec<S>,
    pub residuals: Vec<Vec<Complex<S>>>,
    /// Complement positions, ascending, or empty when the subset covered
    /// every qubit.
    pub complement: Vec<usize>,
}

impl<S: Scalar> Projection<S> {
    pub fn total_weight(&self) -> S {
        self.weights.iter().fold(S::zero(), |acc, &w| acc + w)
    }

    /// Residual `k` as a normalized state, when it has any weight.
    pub fn residual_state(&self, k: usize) -> Option<StateVector<S>> {
        if self.complement.is_empty() || self.weights[k] <= S::TOL_ALGEBRA * S::TOL_ALGEBRA {
            return None;
        }
        Some(
            StateVector {
                num_qubits: self.complement.len(),
                amps: self.residuals[k].clone(),
            }
            .normalized(),
        )
    }
}

pub(crate) fn project_onto_basis<S: Scalar>(
    state: &StateVector<S>,
    subset: &[usize],
    basis: &MeasurementBasis<S>,
) -> Result<Projection<S>> {
    let n = state.num_qubits();
    let distinct = sorted_distinct_positions(subset, n)?;
    if distinct.len() != subset.len() {
        let dup = subset
            .iter()
            .copied()
            .find(|p| subset.iter().filter(|&&q| q == *p).count() > 1)
            .unwrap_or(0);
        return Err(Error::InvalidPosition {
            position: dup,
            num_qubits: n,
        });
    }
    let k = subset.len();
    if basis.num_qubits() != k {
        return Err(Error::QubitCountMismatch {
            expected: k,
            actual: basis.num_qubits(),
        });
    }
    let complement: Vec<usize> = (1..=n).filter(|p| !subset.contains(p)).collect();
    let m = complement.len();

    let dim = state.dim();
    let mut sub_index = vec![0u32; dim];
    let mut comp_index = vec![0u32; dim];
    for i in 0..dim {
        let mut s_idx = 0u32;
        for (ordinal, &p) in subset.iter().enumerate() {
            if (i >> (n - p)) & 1 == 1 {
                s_idx |= 1 << (k - 1 - ordinal);
            }
        }
        let mut c_idx = 0u32;
        for (ordinal, &p) in complement.iter().enumerate() {
            if (i >> (n - p)) & 1 == 1 {
                c_idx |= 1 << (m - 1 - ordinal);
            }
        }
        sub_index[i] = s_idx;
        comp_index[i] = c_idx;
    }

    let comp_dim = 1usize << m;
    let mut weights = Vec::with_capacity(basis.num_elements());
    let mut residuals = Vec::with_capacity(basis.num_elements());
    for element in basis.elements() {
        let mut residual = vec![czero(); comp_dim];
        for i in 0..dim {
            let e = element.amplitude(sub_index[i] as usize);
            residual[comp_index[i] as usize] =
                residual[comp_index[i] as usize] + e.conj() * state.amps[i];
        }
        weights.push(
            residual
                .iter()
                .map(|a| a.norm_sqr())
                .fold(S::zero(), |acc, v| acc + v),
        );
        residuals.push(residual);
    }
    Ok(Projection {
        weights,
        residuals,
        complement,
    })
}

/// Projective measurement of `subset` (ordered: basis qubit `s` reads the
/// s-th listed position) in an orthonormal basis, sampling one outcome by
/// the Born rule.
///
/// The basis may span only a subspace, but the state's weight inside
/// `span(basis)` on the subset must be 1 within the support tolerance;
/// otherwise the residual weight is reported as an error.
pub fn measure_in_basis<S: Scalar, R: Rng + ?Sized>(
    state: &StateVector<S>,
    subset: &[usize],
    basis: &MeasurementBasis<S>,
    rng: &mut R,
) -> Result<Measurement<S>> {
    basis.ensure_orthonormal()?;
    let projection = project_onto_basis(state, subset, basis)?;
    let total = projection.total_weight();
    if (S::one() - total).abs() > S::TOL_SUPPORT {
        return Err(Error::IncompleteSupport {
            residual: (S::one() - total).to_f64_lossy(),
        });
    }

    let draw = S::uniform_01(rng) * total;
    let mut cumulative = S::zero();
    let mut outcome = projection.weights.len() - 1;
    for (k, &w) in projection.weights.iter().enumerate() {
        cumulative = cumulative + w;
        if draw < cumulative {
            outcome = k;
            break;
        }
    }

    Ok(Measurement {
        outcome,
        post_state: projection.residual_state(outcome),
        probability: projection.weights[outcome],
    })
}

fn sorted_distinct_positions(positions: &[usize], num_qubits: usize) -> Result<Vec<usize>> {
    let mut sorted: Vec<usize> = positions.to_vec();
    for &p in positions {
        if p == 0 || p > num_qubits {
            return Err(Error::InvalidPosition {
                position: p,
                num_qubits,
            });
        }
    }
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted)
}

/// Density matrix of `n` qubits (row-major `2^n` x `2^n` entries).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<S: Scalar> {
    num_qubits: usize,
    entries: Vec<Complex<S>>,
}

impl<S: Scalar> DensityMatrix<S> {
    /// Validates shape, Hermiticity, and unit trace.
    pub fn from_entries(entries: Vec<Complex<S>>) -> Result<Self> {
        let dim2 = entries.len();
        let dim = (dim2 as f64).sqrt().round() as usize;
        if dim < 2 || dim * dim != dim2 || !dim.is_power_of_two() {
            return Err(Error::BadDimension { dim: dim2 });
        }
        let mut herm_dev = S::zero();
        for r in 0..dim {
            for c in r..dim {
                let dev = (entries[r * dim + c] - entries[c * dim + r].conj()).norm();
                if dev > herm_dev {
                    herm_dev = dev;
                }
            }
        }
        if herm_dev > S::TOL_ALGEBRA {
            return Err(Error::NotHermitian {
                deviation: herm_dev.to_f64_lossy(),
            });
        }
        let trace = (0..dim).fold(czero::<S>(), |acc, r| acc + entries[r * dim + r]);
        if (trace - Complex::new(S::one(), S::zero())).norm() > S::TOL_ALGEBRA {
            return Err(Error::BadTrace {
                trace: trace.re.to_f64_lossy(),
            });
        }
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            entries,
        })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::EmptySystem);
        }
        let dim = 1usize << num_qubits;
        let p = S::one() / S::from_usize(dim).unwrap();
        let mut entries = vec![czero(); dim * dim];
        for r in 0..dim {
            entries[r * dim + r] = Complex::new(p, S::zero());
        }
        Ok(Self {
            num_qubits,
            entries,
        })
    }

    /// Convex mixture of density matrices (weights must sum to 1).
    pub fn mixture(parts: &[(S, DensityMatrix<S>)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptySystem)?;
        let dim = first.1.dim();
        let mut entries = vec![czero(); dim * dim];
        for (weight, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::QubitCountMismatch {
                    expected: first.1.num_qubits,
                    actual: rho.num_qubits,
                });
            }
            for (e, v) in entries.iter_mut().zip(&rho.entries) {
                *e = *e + *v * *weight;
            }
        }
        Self::from_entries(entries)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.num_qubits
    }

    pub fn entries(&self) -> &[Complex<S>] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<S> {
        self.entries[row * self.dim() + col]
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<S> {
        hermitian_eigenvalues(self.dim(), &self.entries)
    }

    /// Von Neumann entropy in bits; errors if any eigenvalue is below
    /// `-TOL_ALGEBRA`.
    pub fn entropy_bits(&self) -> Result<S> {
        let eigs = self.eigenvalues();
        let min = eigs[0];
        if min < -S::TOL_ALGEBRA {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        let mut entropy = S::zero();
        for lambda in eigs {
            if lambda > S::zero() {
                entropy = entropy - lambda * lambda.log2();
            }
        }
        Ok(entropy)
    }

    /// Trace-norm distance `(1/2) * sum |eig(self - other)|`.
    pub fn trace_distance(&self, other: &Self) -> Result<S> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        let dim = self.dim();
        let diff: Vec<Complex<S>> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| *a - *b)
            .collect();
        let half = S::one() / (S::one() + S::one());
        Ok(hermitian_eigenvalues(dim, &diff)
            .into_iter()
            .map(|e| e.abs())
            .fold(S::zero(), |acc, v| acc + v)
            * half)
    }
}
