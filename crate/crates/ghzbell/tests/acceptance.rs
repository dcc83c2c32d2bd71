//! Acceptance suite: one test per headline claim, each printing a single
//! pass line (run with `--nocapture` to see them) and holding a runtime
//! budget. Expected values are frozen from the published tables; the
//! golden file pins the full two-qubit encoding table token for token.

use std::process::Command;
use std::time::{Duration, Instant};

use ghzbell::bases::{channel_teleport, omega_basis_qis, omega_basis_teleport, BitString};
use ghzbell::qis::{
    enumerate_n, enumerate_single, enumerate_two, rule_search_mismatches, secrecy_check,
    SecrecyProtocol, SingleProtocol,
};
use ghzbell::statevec::{haar_random_state, trial_rng, PauliString};
use ghzbell::superdense::{capacity_check, decode, encode};
use ghzbell::teleport::{enumerate_fivequbit, enumerate_teleport_n};
use ghzbell::verify::entanglement_report;
use ghzbell::{cli, StateVector};

type Sv = StateVector;

const SEED: u64 = 0xACCE_97;
const FIDELITY_BOUND: f64 = 1.0 - 1e-10;
const TOL: f64 = 1e-10;
const EXACT: f64 = 1e-12;

const GOLDEN_TABLE: &str = include_str!("golden/superdense_n2.txt");

/// Published two-qubit measurement family: kets per four-row block and
/// signs per row within a block, all with coefficient 1/2.
const TELEPORT_BLOCK_KETS: [[usize; 4]; 4] = [
    [0b00000, 0b01001, 0b10110, 0b11111],
    [0b00110, 0b01111, 0b10000, 0b11001],
    [0b00001, 0b01000, 0b10111, 0b11110],
    [0b00111, 0b01110, 0b10001, 0b11000],
];
const TELEPORT_ROW_SIGNS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

/// Published two-qubit splitting family (Alice's four-qubit outcomes).
const SPLIT_BLOCK_KETS: [[usize; 4]; 4] = [
    [0b0000, 0b0101, 0b1010, 0b1111],
    [0b0001, 0b0100, 0b1011, 0b1110],
    [0b0010, 0b0111, 0b1000, 0b1101],
    [0b0011, 0b0110, 0b1001, 0b1100],
];
const SPLIT_ROW_SIGNS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

fn finish(number: usize, what: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    if elapsed <= budget {
        println!("acceptance {number} pass: {what} ({elapsed:.2?})");
    } else {
        println!("acceptance {number} FAIL: {what} took {elapsed:.2?}, budget {budget:?}");
        panic!("acceptance {number} exceeded its runtime budget");
    }
}

fn haar(num_qubits: usize, stream: u64) -> Sv {
    haar_random_state(num_qubits, &mut trial_rng(SEED, stream)).unwrap()
}

/// Parses `1/2(|00000>+|00011>-...)` into `(signed coefficient, ket)` terms.
fn parse_half_sum(text: &str) -> Vec<(f64, usize)> {
    let inner = text
        .strip_prefix("1/2(")
        .and_then(|rest| rest.strip_suffix(')'))
        .unwrap_or_else(|| panic!("unexpected state format: {text}"));
    inner
        .split_inclusive('>')
        .map(|term| {
            let term = term.strip_suffix('>').unwrap();
            let (sign, ket) = term.split_once('|').unwrap();
            let coeff = if sign == "-" { -0.5 } else { 0.5 };
            (coeff, usize::from_str_radix(ket, 2).unwrap())
        })
        .collect()
}

fn assert_states_equal(actual: &Sv, expected: &Sv, what: &str) {
    assert_eq!(actual.num_qubits(), expected.num_qubits(), "{what}: size");
    for k in 0..actual.dim() {
        let diff = (actual.amplitude(k) - expected.amplitude(k)).norm();
        assert!(
            diff < EXACT,
            "{what}: amplitude {k} differs by {diff:e} (got {}, want {})",
            actual.amplitude(k),
            expected.amplitude(k)
        );
    }
}

#[test]
fn superdense_two_qubit_states_match_the_golden_table() {
    let started = Instant::now();
    let rows: Vec<&str> = GOLDEN_TABLE
        .lines()
        .filter(|line| !line.trim().is_empty())
        .collect();
    assert_eq!(rows.len(), 32);

    for (j, row) in rows.iter().enumerate() {
        let mut tokens = row.split_whitespace();
        let bits_text = tokens.next().unwrap();
        let _operator = tokens.next().unwrap();
        let state_text = tokens.next().unwrap();
        assert_eq!(u64::from_str_radix(bits_text, 2).unwrap(), j as u64);

        let bits = BitString::from_value(5, j as u64).unwrap();
        let state: Sv = encode(2, &bits).unwrap();
        let expected = Sv::from_terms(5, &parse_half_sum(state_text)).unwrap();
        assert_states_equal(&state, &expected, &format!("encoded row {j}"));

        let decoded = decode(&state, 2, &mut trial_rng(SEED, 1_000 + j as u64)).unwrap();
        assert_eq!(decoded.value(), j as u64, "roundtrip of row {j}");
    }

    let generated = cli::encoding_table(2).unwrap();
    let generated_tokens: Vec<&str> = generated
        .iter()
        .flat_map(|line| line.split_whitespace())
        .collect();
    let golden_tokens: Vec<&str> = GOLDEN_TABLE.split_whitespace().collect();
    assert_eq!(generated_tokens, golden_tokens, "golden table tokens");

    finish(
        1,
        "two-qubit superdense states match the golden table with exact roundtrips",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn superdense_families_are_orthonormal_with_exact_roundtrips() {
    let started = Instant::now();
    for n in 1..=3usize {
        let report = capacity_check::<f64>(n).unwrap();
        assert_eq!(report.num_states, 1 << (2 * n + 1));
        assert!(report.all_orthonormal, "capacity n={n}");
        assert!(
            report.gram_deviation < TOL,
            "gram deviation {:e} at n={n}",
            report.gram_deviation
        );

        for j in 0..1u64 << (2 * n + 1) {
            let bits = BitString::from_value(2 * n + 1, j).unwrap();
            let state: Sv = encode(n, &bits).unwrap();
            let decoded = decode(&state, n, &mut trial_rng(SEED, 2_000 + j)).unwrap();
            assert_eq!(decoded.value(), j, "roundtrip n={n} value={j}");
        }
    }
    finish(
        2,
        "superdense families for one to three qubits are orthonormal and roundtrip",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn fivequbit_teleport_enumerates_exact_uniform_branches() {
    let started = Instant::now();
    for trial in 0..100 {
        let input = haar(1, 3_000 + trial);
        let branches = enumerate_fivequbit(&input).unwrap();
        assert_eq!(branches.len(), 4);
        for branch in &branches {
            assert!(
                branch.fidelity >= FIDELITY_BOUND,
                "trial {trial} branch {} fidelity {:e}",
                branch.outcome,
                branch.fidelity
            );
            assert!(
                (branch.probability - 0.25).abs() < TOL,
                "trial {trial} branch {} probability {:e}",
                branch.outcome,
                branch.probability
            );
        }
    }
    finish(
        3,
        "five-qubit teleportation recovers every input on all four branches",
        started,
        Duration::from_secs(2),
    );
}

#[test]
fn two_qubit_teleport_family_and_branches_are_exact() {
    let started = Instant::now();
    let basis = omega_basis_teleport::<f64>(2).unwrap();
    assert_eq!(basis.num_elements(), 16);

    for j in 0..16 {
        let kets = &TELEPORT_BLOCK_KETS[j / 4];
        let signs = &TELEPORT_ROW_SIGNS[j % 4];
        let terms: Vec<(f64, usize)> = kets
            .iter()
            .zip(signs)
            .map(|(&ket, &sign)| (0.5 * sign, ket))
            .collect();
        let expected = Sv::from_terms(5, &terms).unwrap();
        assert_states_equal(&basis.elements()[j], &expected, &format!("family row {j}"));
    }

    // Row 12 is row 0 with X applied on the first two qubits.
    let flip = PauliString::from_positions(5, &[], &[1, 2]).unwrap();
    let rebuilt = basis.elements()[0].apply_pauli(&flip).unwrap().canonicalized();
    assert_states_equal(&rebuilt, &basis.elements()[12], "row 12 from row 0");
    let explicit = Sv::from_terms(
        5,
        &[(0.5, 0b11000), (0.5, 0b10001), (0.5, 0b01110), (0.5, 0b00111)],
    )
    .unwrap();
    assert_states_equal(&basis.elements()[12], &explicit, "row 12 explicit form");

    for trial in 0..25 {
        let input = haar(2, 4_000 + trial);
        let branches = enumerate_teleport_n(&input, 2).unwrap();
        assert_eq!(branches.len(), 16);
        for branch in &branches {
            assert!(
                branch.fidelity >= FIDELITY_BOUND,
                "trial {trial} branch {} fidelity {:e}",
                branch.outcome,
                branch.fidelity
            );
        }
    }
    finish(
        4,
        "two-qubit teleportation family matches all sixteen published rows",
        started,
        Duration::from_secs(3),
    );
}

#[test]
fn n_qubit_teleport_reaches_unit_fidelity_on_all_branches() {
    let started = Instant::now();
    for n in 1..=4usize {
        let count = 1 << (2 * n);
        let uniform = 1.0 / count as f64;
        for trial in 0..10 {
            let input = haar(n, 5_000 + (n as u64) * 100 + trial);
            let branches = enumerate_teleport_n(&input, n).unwrap();
            assert_eq!(branches.len(), count);
            for branch in &branches {
                assert!(
                    branch.fidelity >= FIDELITY_BOUND,
                    "n={n} trial {trial} branch {} fidelity {:e}",
                    branch.outcome,
                    branch.fidelity
                );
                assert!(
                    (branch.probability - uniform).abs() < TOL,
                    "n={n} trial {trial} branch {} probability {:e}",
                    branch.outcome,
                    branch.probability
                );
            }
        }
    }
    finish(
        5,
        "teleportation of one to four qubits is exact and uniform on every branch",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn splitting_protocols_reach_unit_fidelity_and_rule_matches_search() {
    let started = Instant::now();

    for protocol in SingleProtocol::ALL {
        for trial in 0..10 {
            let input = haar(1, 6_000 + 100 * protocol.index() as u64 + trial);
            let branches = enumerate_single(protocol, &input).unwrap();
            assert_eq!(branches.len(), 16, "{protocol} branch count");
            for branch in &branches {
                assert!(
                    branch.fidelity >= FIDELITY_BOUND,
                    "{protocol} trial {trial} branch ({}, {}) fidelity {:e}",
                    branch.alice_outcome,
                    branch.bob_outcome,
                    branch.fidelity
                );
                assert!(
                    (branch.probability - 1.0 / 16.0).abs() < TOL,
                    "{protocol} trial {trial} branch ({}, {}) probability {:e}",
                    branch.alice_outcome,
                    branch.bob_outcome,
                    branch.probability
                );
            }
        }
    }

    for trial in 0..10 {
        let input = haar(2, 6_500 + trial);
        let branches = enumerate_two(&input).unwrap();
        assert_eq!(branches.len(), 32);
        for branch in &branches {
            assert!(branch.fidelity >= FIDELITY_BOUND);
            assert!((branch.probability - 1.0 / 32.0).abs() < TOL);
        }
    }

    for n in 1..=3usize {
        let count = 2 << (2 * n);
        let uniform = 1.0 / count as f64;
        for trial in 0..10 {
            let input = haar(n, 7_000 + (n as u64) * 100 + trial);
            let branches = enumerate_n(&input, n).unwrap();
            assert_eq!(branches.len(), count);
            for branch in &branches {
                assert!(branch.fidelity >= FIDELITY_BOUND);
                assert!((branch.probability - uniform).abs() < TOL);
            }
        }
        assert_eq!(
            rule_search_mismatches::<f64>(n).unwrap(),
            0,
            "correction rule disagrees with exhaustive search at n={n}"
        );
    }

    // The splitting family rows are the published sixteen, up to ordering.
    let basis = omega_basis_qis::<f64>(2).unwrap();
    let mut matched = vec![false; 16];
    for block in 0..4 {
        for row in 0..4 {
            let terms: Vec<(f64, usize)> = SPLIT_BLOCK_KETS[block]
                .iter()
                .zip(&SPLIT_ROW_SIGNS[row])
                .map(|(&ket, &sign)| (0.5 * sign, ket))
                .collect();
            let expected = Sv::from_terms(4, &terms).unwrap();
            let hit = basis.elements().iter().position(|element| {
                element.inner_product(&expected).unwrap().norm() > 1.0 - EXACT
            });
            let index = hit.unwrap_or_else(|| {
                panic!("published splitting row {} not generated", 4 * block + row)
            });
            assert!(!matched[index], "splitting row matched twice");
            matched[index] = true;
        }
    }
    assert!(matched.iter().all(|&m| m));

    finish(
        6,
        "information splitting is exact on every branch and the rule matches search",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn channel_bipartitions_are_maximally_entangled() {
    let started = Instant::now();
    let (channel, _) = channel_teleport::<f64>(2).unwrap();

    let two_qubit_side = entanglement_report(&channel, &[3, 5]).unwrap();
    assert!(two_qubit_side.pass, "{two_qubit_side:?}");
    assert!((two_qubit_side.checks[0].measured - 2.0).abs() < TOL);
    assert!(two_qubit_side.checks[1].measured < TOL);

    let one_qubit_side = entanglement_report(&channel, &[5]).unwrap();
    assert!(one_qubit_side.pass, "{one_qubit_side:?}");
    assert!((one_qubit_side.checks[0].measured - 1.0).abs() < TOL);
    assert!(one_qubit_side.checks[1].measured < TOL);

    finish(
        7,
        "channel bipartitions carry two bits and one bit of entanglement",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn single_party_views_are_input_independent() {
    let started = Instant::now();
    let cases = [
        (SecrecyProtocol::Single(SingleProtocol::I), 1),
        (SecrecyProtocol::Single(SingleProtocol::II), 1),
        (SecrecyProtocol::Single(SingleProtocol::III), 1),
        (SecrecyProtocol::Two, 2),
        (SecrecyProtocol::N, 1),
        (SecrecyProtocol::N, 2),
        (SecrecyProtocol::N, 3),
    ];
    for (slot, (protocol, n)) in cases.into_iter().enumerate() {
        let mut rng = trial_rng(SEED, 8_000 + slot as u64);
        let report = secrecy_check::<f64, _>(protocol, n, 10, &mut rng).unwrap();
        assert!(
            report.passes(TOL),
            "{} n={n}: max distance {:e}",
            report.protocol_id,
            report.max_distance()
        );
    }
    finish(
        8,
        "no single party's reduced state depends on the secret",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn equal_seeds_produce_byte_identical_reports() {
    let started = Instant::now();
    let binary = env!("CARGO_BIN_EXE_ghzbell");
    let runs: [&[&str]; 9] = [
        &["superdense", "--n", "2", "--seed", "11"],
        &["superdense", "--n", "1", "--format", "text", "--seed", "11"],
        &["teleport", "--n", "1", "--trials", "5", "--seed", "11"],
        &["teleport", "--n", "2", "--enumerate", "--trials", "3", "--seed", "11"],
        &["teleport", "--protocol", "fivequbit", "--trials", "4", "--seed", "11"],
        &["qis", "--protocol", "i", "--trials", "3", "--seed", "11"],
        &["qis", "--protocol", "two", "--enumerate", "--trials", "2", "--seed", "11"],
        &["qis", "--protocol", "n", "--n", "2", "--trials", "3", "--format", "csv", "--seed", "11"],
        &["verify", "--n", "2", "--seed", "11"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let output = Command::new(binary)
                .args(args)
                .env_remove("GHZBELL_SEED")
                .output()
                .unwrap();
            assert!(
                output.status.success(),
                "{args:?} exited {:?}: {}",
                output.status.code(),
                String::from_utf8_lossy(&output.stderr)
            );
            outputs.push(output.stdout);
        }
        assert_eq!(outputs[0], outputs[1], "{args:?} output changed between runs");
    }
    finish(
        9,
        "repeated runs with equal seeds emit byte-identical reports",
        started,
        Duration::from_secs(120),
    );
}
