//! Named two- and three-qubit states, the composite GHZ-Bell channels,
//! party assignments, and every measurement-basis family the protocols use.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::statevec::{MeasurementBasis, QubitPermutation, StateVector};
use crate::superdense::encode_pauli;

/// The twelve named maximally entangled states: three-qubit GHZ-class pairs
/// and the Bell pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateName {
    XiPlus,
    XiMinus,
    ChiPlus,
    ChiMinus,
    VarthetaPlus,
    VarthetaMinus,
    ThetaPlus,
    ThetaMinus,
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl StateName {
    pub const ALL: [StateName; 12] = [
        StateName::XiPlus,
        StateName::XiMinus,
        StateName::ChiPlus,
        StateName::ChiMinus,
        StateName::VarthetaPlus,
        StateName::VarthetaMinus,
        StateName::ThetaPlus,
        StateName::ThetaMinus,
        StateName::PsiPlus,
        StateName::PsiMinus,
        StateName::PhiPlus,
        StateName::PhiMinus,
    ];

    /// The three-qubit names, in display order.
    pub const THREE_QUBIT: [StateName; 8] = [
        StateName::XiPlus,
        StateName::XiMinus,
        StateName::ChiPlus,
        StateName::ChiMinus,
        StateName::VarthetaPlus,
        StateName::VarthetaMinus,
        StateName::ThetaPlus,
        StateName::ThetaMinus,
    ];

    /// The Bell-pair names, in display order.
    pub const TWO_QUBIT: [StateName; 4] = [
        StateName::PsiPlus,
        StateName::PsiMinus,
        StateName::PhiPlus,
        StateName::PhiMinus,
    ];

    pub fn num_qubits(self) -> usize {
        match self {
            StateName::PsiPlus | StateName::PsiMinus | StateName::PhiPlus | StateName::PhiMinus => {
                2
            }
            _ => 3,
        }
    }

    fn kets_and_sign(self) -> (usize, usize, bool) {
        match self {
            StateName::XiPlus => (0b000, 0b111, true),
            StateName::XiMinus => (0b000, 0b111, false),
            StateName::ChiPlus => (0b011, 0b100, true),
            StateName::ChiMinus => (0b011, 0b100, false),
            StateName::VarthetaPlus => (0b010, 0b101, true),
            StateName::VarthetaMinus => (0b010, 0b101, false),
            StateName::ThetaPlus => (0b001, 0b110, true),
            StateName::ThetaMinus => (0b001, 0b110, false),
            StateName::PsiPlus => (0b00, 0b11, true),
            StateName::PsiMinus => (0b00, 0b11, false),
            StateName::PhiPlus => (0b01, 0b10, true),
            StateName::PhiMinus => (0b01, 0b10, false),
        }
    }
}

impl fmt::Display for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (stem, plus) = match self {
            StateName::XiPlus => ("xi", true),
            StateName::XiMinus => ("xi", false),
            StateName::ChiPlus => ("chi", true),
            StateName::ChiMinus => ("chi", false),
            StateName::VarthetaPlus => ("vartheta", true),
            StateName::VarthetaMinus => ("vartheta", false),
            StateName::ThetaPlus => ("theta", true),
            StateName::ThetaMinus => ("theta", false),
            StateName::PsiPlus => ("psi", true),
            StateName::PsiMinus => ("psi", false),
            StateName::PhiPlus => ("phi", true),
            StateName::PhiMinus => ("phi", false),
        };
        write!(f, "{stem}{}", if plus { '+' } else { '-' })
    }
}

/// The equal superposition `(|a> +/- |b>)/sqrt(2)` for a named state.
pub fn named_state<S: Scalar>(name: StateName) -> StateVector<S> {
    let (a, b, plus) = name.kets_and_sign();
    let c = S::one() / (S::one() + S::one()).sqrt();
    let second = if plus { c } else { -c };
    StateVector::from_terms(name.num_qubits(), &[(c, a), (second, b)])
        .expect("named-state kets are in range")
}

/// A protocol participant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Party {
    Alice,
    Bob,
    Charlie,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Alice => write!(f, "Alice"),
            Party::Bob => write!(f, "Bob"),
            Party::Charlie => write!(f, "Charlie"),
        }
    }
}

/// Ownership of each qubit position by exactly one party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyAssignment {
    owners: Vec<Party>,
}

impl PartyAssignment {
    pub fn new(owners: Vec<Party>) -> Result<Self> {
        if owners.is_empty() {
            return Err(Error::EmptySystem);
        }
        Ok(Self { owners })
    }

    pub fn num_qubits(&self) -> usize {
        self.owners.len()
    }

    pub fn owner(&self, position: usize) -> Result<Party> {
        self.owners
            .get(position.wrapping_sub(1))
            .copied()
            .ok_or(Error::InvalidPosition {
                position,
                num_qubits: self.owners.len(),
            })
    }

    /// Positions owned by `party`, ascending.
    pub fn positions_of(&self, party: Party) -> Vec<usize> {
        self.owners
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == party)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn count_of(&self, party: Party) -> usize {
        self.owners.iter().filter(|&&p| p == party).count()
    }
}

/// Classical bit string `a_length ... a_1` with `a_1` least significant, so
/// its decimal value is `sum a_k 2^(k-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    /// Bits indexed from the least significant: `bits[k - 1]` holds `a_k`.
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptySystem);
        }
        Ok(Self { bits })
    }

    pub fn from_value(length: usize, value: u64) -> Result<Self> {
        if length == 0 {
            return Err(Error::EmptySystem);
        }
        if length < 64 && value >> length != 0 {
            return Err(Error::IndexOutOfRange {
                index: value,
                num_qubits: length,
            });
        }
        Ok(Self {
            bits: (0..length).map(|k| value >> k & 1 == 1).collect(),
        })
    }

    pub fn length(&self) -> usize {
        self.bits.len()
    }

    /// `a_k` (1-based, least significant first).
    pub fn bit(&self, k: usize) -> bool {
        self.bits[k - 1]
    }

    pub fn value(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &b)| acc | (u64::from(b) << k))
    }
}

impl fmt::Display for BitString {
    /// Most significant bit first: `a_length ... a_1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    Ok(())
}

fn channel_state<S: Scalar>(n: usize) -> StateVector<S> {
    let mut state = named_state(StateName::XiPlus);
    let bell: StateVector<S> = named_state(StateName::PsiPlus);
    for _ in 1..n {
        state = state.tensor(&bell);
    }
    state
}

/// Teleportation / superdense channel on `2N+1` qubits: one GHZ triple on
/// positions 1..3 plus `N-1` Bell pairs on positions (2m+2, 2m+3). Alice
/// holds positions {1, 2} and every even position; Bob holds the rest.
pub fn channel_teleport<S: Scalar>(n: usize) -> Result<(StateVector<S>, PartyAssignment)> {
    check_n(n)?;
    let mut owners = vec![Party::Alice, Party::Alice, Party::Bob];
    for _ in 1..n {
        owners.push(Party::Alice);
        owners.push(Party::Bob);
    }
    Ok((channel_state(n), PartyAssignment::new(owners)?))
}

/// Information-splitting channel: the same state as [`channel_teleport`]
/// but with the GHZ triple split one qubit per party and every Bell pair
/// shared Alice-Charlie.
pub fn channel_qis<S: Scalar>(n: usize) -> Result<(StateVector<S>, PartyAssignment)> {
    check_n(n)?;
    let mut owners = vec![Party::Alice, Party::Bob, Party::Charlie];
    for _ in 1..n {
        owners.push(Party::Alice);
        owners.push(Party::Charlie);
    }
    Ok((channel_state(n), PartyAssignment::new(owners)?))
}

/// The three qubit distributions for single-qubit information splitting
/// over the five-qubit channel.
pub fn qis_single_assignments() -> [PartyAssignment; 3] {
    use Party::{Alice as A, Bob as B, Charlie as C};
    [
        PartyAssignment::new(vec![A, B, B, B, C]).expect("nonempty"),
        PartyAssignment::new(vec![A, A, B, B, C]).expect("nonempty"),
        PartyAssignment::new(vec![A, A, B, A, C]).expect("nonempty"),
    ]
}

/// The complete dense-coding basis: element `j` is the channel state hit by
/// the encoding operator for bit string `j`, ordered `j = 0..2^(2N+1)-1`.
pub fn superdense_basis<S: Scalar>(n: usize) -> Result<MeasurementBasis<S>> {
    check_n(n)?;
    let (channel, _) = channel_teleport::<S>(n)?;
    let count = 1usize << (2 * n + 1);
    let mut elements = Vec::with_capacity(count);
    for j in 0..count {
        let bits = BitString::from_value(2 * n + 1, j as u64)?;
        let op = encode_pauli(n, &bits)?;
        elements.push(channel.apply_pauli(&op)?.canonicalized());
    }
    MeasurementBasis::new(format!("superdense-n{n}"), elements)
}

/// Placement that rearranges `GHZ (x) Bell^(N-1)` into the zeroth
/// teleportation measurement state: the GHZ factor lands on positions
/// (1, N+2, N+1) and Bell factor m on (m+1, N+m+2). Reproduces
/// [1, 4, 3, 2, 5] at N = 2.
pub fn teleport_placement(n: usize) -> Result<QubitPermutation> {
    check_n(n)?;
    let mut placement = vec![1, n + 2, n + 1];
    for m in 1..n {
        placement.push(m + 1);
        placement.push(n + m + 2);
    }
    QubitPermutation::new(placement)
}

fn omega_elements<S: Scalar>(n: usize, omega0: StateVector<S>) -> Result<Vec<StateVector<S>>> {
    let count = 1usize << (2 * n);
    let low = (1u64 << n) - 1;
    let mut elements = Vec::with_capacity(count);
    for j in 0..count as u64 {
        let op =
            crate::statevec::PauliString::from_masks(omega0.num_qubits(), j & low, j >> n & low)?;
        elements.push(omega0.apply_pauli(&op)?.canonicalized());
    }
    Ok(elements)
}

/// Alice's `2^(2N)`-element measurement family for N-qubit teleportation,
/// on her `2N+1` qubits. Element 0 is the rearranged channel product;
/// element `j` applies `Z_k^(b_k) X_k^(b_(k+N))` on qubits `k = 1..N`,
/// where `j` is the decimal value of `b_(2N)...b_1`.
pub fn omega_basis_teleport<S: Scalar>(n: usize) -> Result<MeasurementBasis<S>> {
    check_n(n)?;
    let omega0 = channel_state::<S>(n).permute(&teleport_placement(n)?)?;
    MeasurementBasis::new(
        format!("omega-teleport-n{n}"),
        omega_elements(n, omega0)?,
    )
}

/// Alice's `2^(2N)`-element family for N-qubit information splitting, on
/// `2N` qubits: element 0 places the k-th Bell factor on positions
/// (k, N+k); element `j` is generated as in [`omega_basis_teleport`].
pub fn omega_basis_qis<S: Scalar>(n: usize) -> Result<MeasurementBasis<S>> {
    check_n(n)?;
    let bell: StateVector<S> = named_state(StateName::PsiPlus);
    let mut product = bell.clone();
    for _ in 1..n {
        product = product.tensor(&bell);
    }
    let mut placement = Vec::with_capacity(2 * n);
    for k in 1..=n {
        placement.push(k);
        placement.push(n + k);
    }
    let omega0 = product.permute(&QubitPermutation::new(placement)?)?;
    MeasurementBasis::new(format!("omega-qis-n{n}"), omega_elements(n, omega0)?)
}

fn basis_from_terms<S: Scalar>(
    label: &str,
    num_qubits: usize,
    rows: &[&[(f64, usize)]],
) -> MeasurementBasis<S> {
    let elements = rows
        .iter()
        .map(|terms| {
            let converted: Vec<(S, usize)> = terms
                .iter()
                .map(|&(c, ket)| (S::from_f64(c).expect("coefficient fits scalar"), ket))
                .collect();
            StateVector::from_terms(num_qubits, &converted).expect("kets are in range")
        })
        .collect();
    MeasurementBasis::new(label, elements).expect("constant basis is orthonormal")
}

const HALF: f64 = 0.5;
const R2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Bell basis, ordered `[psi+, psi-, phi+, phi-]` (the `j` order of the
/// generated N = 1 family).
pub fn bell_basis<S: Scalar>() -> MeasurementBasis<S> {
    basis_from_terms(
        "bell",
        2,
        &[
            &[(R2, 0b00), (R2, 0b11)],
            &[(R2, 0b00), (-R2, 0b11)],
            &[(R2, 0b01), (R2, 0b10)],
            &[(R2, 0b01), (-R2, 0b10)],
        ],
    )
}

/// `{|+>, |->}`.
pub fn hadamard_basis<S: Scalar>() -> MeasurementBasis<S> {
    basis_from_terms("hadamard", 1, &[&[(R2, 0), (R2, 1)], &[(R2, 0), (-R2, 1)]])
}

/// The complete three-qubit GHZ-class basis
/// `{|000>+-|111>, |011>+-|100>, |001>+-|110>, |010>+-|101>}`, used by
/// Alice in the second single-qubit splitting protocol.
pub fn three_particle_basis<S: Scalar>() -> MeasurementBasis<S> {
    basis_from_terms(
        "three-particle",
        3,
        &[
            &[(R2, 0b000), (R2, 0b111)],
            &[(R2, 0b000), (-R2, 0b111)],
            &[(R2, 0b011), (R2, 0b100)],
            &[(R2, 0b011), (-R2, 0b100)],
            &[(R2, 0b001), (R2, 0b110)],
            &[(R2, 0b001), (-R2, 0b110)],
            &[(R2, 0b010), (R2, 0b101)],
            &[(R2, 0b010), (-R2, 0b101)],
        ],
    )
}

/// The four-qubit family `{|0000>+-|1111>, |0110>+-|1001>, |0001>+-|1110>,
/// |1000>+-|0111>}`, used by Alice in the third single-qubit splitting
/// protocol.
pub fn four_particle_basis<S: Scalar>() -> MeasurementBasis<S> {
    basis_from_terms(
        "four-particle",
        4,
        &[
            &[(R2, 0b0000), (R2, 0b1111)],
            &[(R2, 0b0000), (-R2, 0b1111)],
            &[(R2, 0b0110), (R2, 0b1001)],
            &[(R2, 0b0110), (-R2, 0b1001)],
            &[(R2, 0b0001), (R2, 0b1110)],
            &[(R2, 0b0001), (-R2, 0b1110)],
            &[(R2, 0b1000), (R2, 0b0111)],
            &[(R2, 0b1000), (-R2, 0b0111)],
        ],
    )
}

/// Bob's three-qubit measurement family in the first single-qubit
/// splitting protocol: `{|000>+-|111>, |001>+-|110>}`. Spans only half
/// the three-qubit space.
pub fn ghz_pair_basis<S: Scalar>() -> MeasurementBasis<S> {
    basis_from_terms(
        "ghz-pair",
        3,
        &[
            &[(R2, 0b000), (R2, 0b111)],
            &[(R2, 0b000), (-R2, 0b111)],
            &[(R2, 0b001), (R2, 0b110)],
            &[(R2, 0b001), (-R2, 0b110)],
        ],
    )
}

/// Alice's four-element, five-qubit basis for single-qubit teleportation.
/// Spans only the protocol's support (a quarter of the space).
pub fn fivequbit_basis<S: Scalar>() -> MeasurementBasis<S> {
    basis_from_terms(
        "five-qubit",
        5,
        &[
            &[
                (HALF, 0b00000),
                (HALF, 0b01110),
                (HALF, 0b10001),
                (HALF, 0b11111),
            ],
            &[
                (HALF, 0b00000),
                (HALF, 0b01110),
                (-HALF, 0b10001),
                (-HALF, 0b11111),
            ],
            &[
                (HALF, 0b00001),
                (HALF, 0b01111),
                (HALF, 0b10000),
                (HALF, 0b11110),
            ],
            &[
                (HALF, 0b00001),
                (HALF, 0b01111),
                (-HALF, 0b10000),
                (-HALF, 0b11110),
            ],
        ],
    )
}

/// All fixed (hand-enumerated) bases in one bundle.
pub struct FixedBases<S: Scalar> {
    pub fivequbit: MeasurementBasis<S>,
    pub three_particle: MeasurementBasis<S>,
    pub four_particle: MeasurementBasis<S>,
    pub bell: MeasurementBasis<S>,
    pub ghz_pair: MeasurementBasis<S>,
    pub hadamard: MeasurementBasis<S>,
}

pub fn fixed_bases<S: Scalar>() -> FixedBases<S> {
    FixedBases {
        fivequbit: fivequbit_basis(),
        three_particle: three_particle_basis(),
        four_particle: four_particle_basis(),
        bell: bell_basis(),
        ghz_pair: ghz_pair_basis(),
        hadamard: hadamard_basis(),
    }
}
