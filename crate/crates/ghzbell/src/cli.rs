//! Command-line front end: runs the protocols and verification suites and
//! emits deterministic JSON, CSV, or plain-text reports. Exit code 0 means
//! every check in the report passed, 1 means a verification failure, and 2
//! means the invocation itself was invalid.

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bases::{
    channel_qis, channel_teleport, fixed_bases, named_state, omega_basis_qis,
    omega_basis_teleport, superdense_basis, BitString, Party, StateName,
};
use crate::error::Result;
use crate::qis::{
    enumerate_n, enumerate_single, enumerate_two, qis_n, qis_single, qis_two, rule_correction,
    secrecy_check, single_correction_table, SecrecyProtocol, SingleProtocol,
};
use crate::statevec::{
    haar_random_state, ket_label, measure_in_basis, trial_rng, MeasurementBasis, PauliString,
    StateVector,
};
use crate::superdense::{capacity_check, encode, encode_pauli};
use crate::teleport::{
    enumerate_fivequbit, enumerate_teleport_n, teleport_1_fivequbit, teleport_n,
    ProtocolTranscript, TeleportBranch,
};
use crate::verify::{
    check_completeness, check_orthonormal, entanglement_report, Check, VerificationReport,
};

const SEED_ENV: &str = "GHZBELL_SEED";
const DEFAULT_SEED: u64 = 7;
/// Fidelity floor for a branch to count as faithful.
const FIDELITY_BOUND: f64 = 1.0 - 1e-10;
/// Numeric tolerance mirrored into report bounds.
const TOL: f64 = 1e-10;
/// RNG stream reserved for secrecy checks, clear of per-trial streams.
const SECRECY_STREAM: u64 = 1 << 32;

type Sv = StateVector<f64>;

#[derive(Parser)]
#[command(
    name = "ghzbell",
    version,
    about = "Simulates superdense coding, teleportation, and three-party \
             information splitting over a shared GHZ plus Bell-pair channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive encode/decode roundtrip and channel-capacity summary.
    Superdense(SuperdenseArgs),
    /// Teleportation with Haar-random inputs, sampled or enumerated.
    Teleport(TeleportArgs),
    /// Three-party splitting: branch fidelities, secrecy, corrections.
    Qis(QisArgs),
    /// Basis orthonormality, completeness, and entanglement suites.
    Verify(VerifyArgs),
}

fn parse_channel_size(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s
        .parse()
        .map_err(|_| format!("invalid channel size {s:?}"))?;
    if (1..=4).contains(&n) {
        Ok(n)
    } else {
        Err("channel size must be between 1 and 4".into())
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Channel size: one GHZ triple plus n-1 Bell pairs (1 to 4). Ignored
    /// by protocols with a fixed size.
    #[arg(long, default_value_t = 2, value_parser = parse_channel_size)]
    n: usize,
    /// Number of independent random-input trials.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// RNG seed; overrides the GHZBELL_SEED environment variable.
    #[arg(long)]
    seed: Option<u64>,
    /// Check every measurement branch instead of sampling one per trial.
    #[arg(long)]
    enumerate: bool,
    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the report to this path (atomic replace) instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SuperdenseArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TeleportProtocolArg {
    /// General N-qubit protocol.
    N,
    /// Single-qubit protocol where Alice measures all five channel qubits.
    Fivequbit,
}

#[derive(Args)]
struct TeleportArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = TeleportProtocolArg::N)]
    protocol: TeleportProtocolArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QisProtocolArg {
    /// Single-qubit splitting, Bob holding three channel qubits.
    I,
    /// Single-qubit splitting, Alice holding two channel qubits.
    Ii,
    /// Single-qubit splitting, Alice holding three channel qubits.
    Iii,
    /// Two-qubit splitting.
    Two,
    /// General N-qubit splitting.
    N,
}

#[derive(Args)]
struct QisArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = QisProtocolArg::Two)]
    protocol: QisProtocolArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Test hook: injects a non-orthonormal basis to force a failure.
    #[arg(long, hide = true)]
    corrupt_basis: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl FormatArg {
    fn name(self) -> &'static str {
        match self {
            FormatArg::Json => "json",
            FormatArg::Csv => "csv",
            FormatArg::Text => "text",
        }
    }
}

/// Echo of the resolved invocation, embedded in every report.
#[derive(Clone, Serialize)]
struct RunConfig {
    command: String,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    protocol: Option<String>,
    trials: u64,
    seed: u64,
    enumerate: bool,
    format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
}

/// One check in a report; `measured`, `bound`, and position fields are
/// present only where meaningful.
#[derive(Clone, Serialize)]
struct ResultEntry {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    trial: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    branch: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<f64>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<serde_json::Value>,
}

impl ResultEntry {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            trial: None,
            branch: None,
            measured: None,
            bound: None,
            pass: true,
            detail: None,
        }
    }

    fn bounded(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            measured: Some(measured),
            bound: Some(bound),
            pass: measured <= bound,
            ..Self::new(name)
        }
    }

    fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            measured: Some(measured),
            bound: Some(bound),
            pass: measured >= bound,
            ..Self::new(name)
        }
    }

    fn trial(mut self, trial: u64) -> Self {
        self.trial = Some(trial);
        self
    }

    fn branch(mut self, branch: usize) -> Self {
        self.branch = Some(branch);
        self
    }

    fn detail(mut self, detail: serde_json::Value) -> Self {
        self.detail = Some(detail);
        self
    }
}

fn check_entry(suite: &str, check: &Check) -> ResultEntry {
    ResultEntry {
        measured: Some(check.measured),
        bound: Some(check.bound),
        pass: check.pass,
        ..ResultEntry::new(format!("{suite}/{}", check.name))
    }
}

fn report_entries(report: &VerificationReport, out: &mut Vec<ResultEntry>) {
    for check in &report.checks {
        out.push(check_entry(&report.suite, check));
    }
}

#[derive(Clone, Serialize)]
struct Report {
    command: String,
    config: RunConfig,
    results: Vec<ResultEntry>,
    pass: bool,
}

impl Report {
    fn new(config: RunConfig, results: Vec<ResultEntry>) -> Self {
        let pass = results.iter().all(|r| r.pass);
        Self {
            command: config.command.clone(),
            config,
            results,
            pass,
        }
    }
}

/// A basis ket with its complex amplitude, qubit 1 leftmost.
#[derive(Clone, Serialize)]
struct Ket {
    amp: [f64; 2],
    basis: String,
}

fn state_kets(state: &Sv) -> Vec<Ket> {
    let n = state.num_qubits();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > TOL * TOL)
        .map(|(index, a)| Ket {
            amp: [a.re, a.im],
            basis: ket_label(n, index),
        })
        .collect()
}

/// Entry point: parses arguments, runs the command, emits the report, and
/// maps the outcome to an exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };

    let (common, report_result) = match &cli.command {
        Command::Superdense(args) => (&args.common, build_report(&cli.command, &args.common)),
        Command::Teleport(args) => (&args.common, build_report(&cli.command, &args.common)),
        Command::Qis(args) => (&args.common, build_report(&cli.command, &args.common)),
        Command::Verify(args) => (&args.common, build_report(&cli.command, &args.common)),
    };

    let report = match report_result {
        Ok(report) => report,
        Err(BuildError::Usage(message)) => {
            eprintln!("error: {message}");
            return 2;
        }
        Err(BuildError::Run(e)) => {
            eprintln!("error: {e}");
            return 1;
        }
    };

    if let Err(e) = emit(&report, common.format, common.output.as_deref()) {
        eprintln!("error: {e}");
        return 2;
    }
    if report.pass {
        0
    } else {
        1
    }
}

enum BuildError {
    /// Bad invocation or environment (exit 2).
    Usage(String),
    /// The simulation itself reported an error (exit 1).
    Run(crate::error::Error),
}

impl From<crate::error::Error> for BuildError {
    fn from(e: crate::error::Error) -> Self {
        BuildError::Run(e)
    }
}

fn resolve_seed(explicit: Option<u64>) -> std::result::Result<u64, String> {
    if let Some(seed) = explicit {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV} must be an unsigned 64-bit integer, got {value:?}")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(e) => Err(format!("{SEED_ENV}: {e}")),
    }
}

fn build_report(command: &Command, common: &CommonArgs) -> std::result::Result<Report, BuildError> {
    let seed = resolve_seed(common.seed).map_err(BuildError::Usage)?;
    let (name, protocol) = match command {
        Command::Superdense(_) => ("superdense", None),
        Command::Teleport(args) => (
            "teleport",
            Some(match args.protocol {
                TeleportProtocolArg::N => "n".to_string(),
                TeleportProtocolArg::Fivequbit => "fivequbit".to_string(),
            }),
        ),
        Command::Qis(args) => (
            "qis",
            Some(
                match args.protocol {
                    QisProtocolArg::I => "i",
                    QisProtocolArg::Ii => "ii",
                    QisProtocolArg::Iii => "iii",
                    QisProtocolArg::Two => "two",
                    QisProtocolArg::N => "n",
                }
                .to_string(),
            ),
        ),
        Command::Verify(_) => ("verify", None),
    };
    let config = RunConfig {
        command: name.into(),
        n: common.n,
        protocol,
        trials: common.trials,
        seed,
        enumerate: common.enumerate,
        format: common.format.name().into(),
        output: common
            .output
            .as_ref()
            .map(|p| p.display().to_string()),
    };
    let results = match command {
        Command::Superdense(_) => cmd_superdense(&config)?,
        Command::Teleport(args) => cmd_teleport(&config, args.protocol)?,
        Command::Qis(args) => cmd_qis(&config, args.protocol)?,
        Command::Verify(args) => cmd_verify(&config, args.corrupt_basis)?,
    };
    Ok(Report::new(config, results))
}

/// One row of the regenerated encoding table.
struct EncodingRow {
    bits: String,
    operator: String,
    state: String,
    decomposition: String,
    kets: Vec<Ket>,
}

/// Renders a Pauli string with positions renumbered to Alice's local
/// qubit order (her k-th qubit becomes index k).
fn local_operator(op: &PauliString, alice: &[usize]) -> String {
    let rank = |p: usize| alice.iter().position(|&a| a == p).map_or(p, |r| r + 1);
    let mut out = String::new();
    for z in op.z_positions() {
        out.push_str(&format!("Z{}", rank(z)));
    }
    for x in op.x_positions() {
        out.push_str(&format!("X{}", rank(x)));
    }
    if out.is_empty() {
        out.push('I');
    }
    out
}

fn coefficient_label(ket_count: usize) -> String {
    let k = ket_count.trailing_zeros();
    let pow = 1usize << (k / 2);
    if k % 2 == 0 {
        format!("1/{pow}")
    } else if pow == 1 {
        "1/sqrt(2)".into()
    } else {
        format!("1/({pow}sqrt(2))")
    }
}

/// Renders an equal-magnitude superposition as a signed ket sum, e.g.
/// `1/2(|00000>+|00011>-|11100>-|11111>)`.
fn state_sum(state: &Sv) -> String {
    let kets = state_kets(state);
    let mut out = coefficient_label(kets.len());
    out.push('(');
    for (i, ket) in kets.iter().enumerate() {
        if ket.amp[0] < 0.0 {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        out.push('|');
        out.push_str(&ket.basis);
        out.push('>');
    }
    out.push(')');
    out
}

/// Finds the named-state product equal to `state`: one three-qubit name
/// followed by `n - 1` Bell-pair names.
fn decomposition_label(state: &Sv, n: usize) -> Option<String> {
    for name3 in StateName::THREE_QUBIT {
        for combo in 0..(1usize << (2 * (n - 1))) {
            let mut product: Sv = named_state(name3);
            let mut names = vec![name3];
            for m in 0..n - 1 {
                let name2 = StateName::TWO_QUBIT[(combo >> (2 * m)) & 3];
                product = product.tensor(&named_state(name2));
                names.push(name2);
            }
            let overlap = match product.inner_product(state) {
                Ok(g) => g,
                Err(_) => return None,
            };
            if (overlap.re - 1.0).abs() < 1e-9 && overlap.im.abs() < 1e-9 {
                return Some(names.iter().map(|s| format!("|{s}>")).collect());
            }
        }
    }
    None
}

fn encoding_rows(n: usize) -> Result<Vec<EncodingRow>> {
    let (_, parties) = channel_teleport::<f64>(n)?;
    let alice = parties.positions_of(Party::Alice);
    let count = 1u64 << (2 * n + 1);
    let mut rows = Vec::with_capacity(count as usize);
    for j in 0..count {
        let bits = BitString::from_value(2 * n + 1, j)?;
        let op = encode_pauli(n, &bits)?;
        let state: Sv = encode(n, &bits)?;
        let decomposition = decomposition_label(&state, n).unwrap_or_else(|| "?".into());
        rows.push(EncodingRow {
            bits: bits.to_string(),
            operator: local_operator(&op, &alice),
            state: state_sum(&state),
            decomposition,
            kets: state_kets(&state),
        });
    }
    Ok(rows)
}

/// The regenerated encoding table as aligned text lines, one per bit
/// string, with columns bits, operator, state, decomposition.
pub fn encoding_table(n: usize) -> Result<Vec<String>> {
    let rows = encoding_rows(n)?;
    let op_width = rows.iter().map(|r| r.operator.len()).max().unwrap_or(1);
    let state_width = rows.iter().map(|r| r.state.len()).max().unwrap_or(1);
    Ok(rows
        .iter()
        .map(|r| {
            format!(
                "{}  {:op_width$}  {:state_width$}  {}",
                r.bits, r.operator, r.state, r.decomposition
            )
        })
        .collect())
}

fn cmd_superdense(config: &RunConfig) -> Result<Vec<ResultEntry>> {
    let n = config.n;
    let bit_len = 2 * n + 1;
    let count = 1u64 << bit_len;
    let basis = superdense_basis::<f64>(n)?;
    let subset: Vec<usize> = (1..=bit_len).collect();
    let mut results = Vec::new();

    for j in 0..count {
        let bits = BitString::from_value(bit_len, j)?;
        let state: Sv = encode(n, &bits)?;
        let mut rng = trial_rng(config.seed, j);
        let measurement = measure_in_basis(&state, &subset, &basis, &mut rng)?;
        let decoded = BitString::from_value(bit_len, measurement.outcome as u64)?;
        results.push(ResultEntry {
            pass: decoded == bits,
            ..ResultEntry::new("roundtrip").branch(j as usize).detail(json!({
                "bits": bits.to_string(),
                "decoded": decoded.to_string(),
            }))
        });
    }

    let capacity = capacity_check::<f64>(n)?;
    results.push(
        ResultEntry::bounded("capacity/gram-deviation", capacity.gram_deviation, TOL).detail(
            json!({
                "num_states": capacity.num_states,
                "alice_qubits": capacity.alice_qubit_count,
                "classical_bits": capacity.classical_bits,
                "qubits_transmitted": capacity.qubits_transmitted,
            }),
        ),
    );

    if n == 2 {
        let rows = encoding_rows(n)?;
        let lines = encoding_table(n)?;
        for (j, (row, line)) in rows.iter().zip(&lines).enumerate() {
            results.push(ResultEntry::new("encoding-row").branch(j).detail(json!({
                "bits": row.bits,
                "operator": row.operator,
                "kets": row.kets,
                "decomposition": row.decomposition,
                "row": line,
            })));
        }
    }
    Ok(results)
}

fn transcript_entries(
    transcript: &ProtocolTranscript,
    trial: u64,
    expected_bits: usize,
    results: &mut Vec<ResultEntry>,
) {
    let corrections: Vec<String> = transcript
        .corrections
        .iter()
        .map(PauliString::to_string)
        .collect();
    let messages: Vec<serde_json::Value> = transcript
        .classical_messages
        .iter()
        .map(|m| {
            json!({
                "sender": m.sender.to_string(),
                "receiver": m.receiver.to_string(),
                "bits": m.payload.to_string(),
            })
        })
        .collect();
    results.push(
        ResultEntry::at_least("sampled-fidelity", transcript.fidelity, FIDELITY_BOUND)
            .trial(trial)
            .detail(json!({
                "protocol": transcript.protocol_id,
                "outcome": transcript.outcome_label(),
                "corrections": corrections,
                "messages": messages,
            })),
    );
    let bits = transcript.total_classical_bits();
    results.push(ResultEntry {
        measured: Some(bits as f64),
        bound: Some(expected_bits as f64),
        pass: bits == expected_bits,
        ..ResultEntry::new("classical-bits").trial(trial)
    });
}

fn teleport_branch_entries(
    branches: &[TeleportBranch<f64>],
    trial: u64,
    expected_count: usize,
    min_fidelity: &mut f64,
    results: &mut Vec<ResultEntry>,
) {
    let uniform = 1.0 / expected_count as f64;
    let mut deviation = 0.0f64;
    for branch in branches {
        *min_fidelity = min_fidelity.min(branch.fidelity);
        deviation = deviation.max((branch.probability - uniform).abs());
        results.push(
            ResultEntry::at_least("branch-fidelity", branch.fidelity, FIDELITY_BOUND)
                .trial(trial)
                .branch(branch.outcome)
                .detail(json!({ "correction": branch.correction.to_string() })),
        );
    }
    results.push(ResultEntry::bounded("outcome-uniformity", deviation, TOL).trial(trial));
    results.push(ResultEntry {
        measured: Some(branches.len() as f64),
        bound: Some(expected_count as f64),
        pass: branches.len() == expected_count,
        ..ResultEntry::new("branch-count").trial(trial)
    });
}

fn cmd_teleport(
    config: &RunConfig,
    protocol: TeleportProtocolArg,
) -> Result<Vec<ResultEntry>> {
    let n = config.n;
    let (n_input, expected_count, expected_bits) = match protocol {
        TeleportProtocolArg::N => (n, 1usize << (2 * n), 2 * n),
        TeleportProtocolArg::Fivequbit => (1, 4, 2),
    };
    let mut results = Vec::new();
    let mut min_fidelity = 1.0f64;

    for trial in 0..config.trials {
        let mut rng = trial_rng(config.seed, trial);
        let input: Sv = haar_random_state(n_input, &mut rng)?;
        if config.enumerate {
            let branches = match protocol {
                TeleportProtocolArg::N => enumerate_teleport_n(&input, n)?,
                TeleportProtocolArg::Fivequbit => enumerate_fivequbit(&input)?,
            };
            teleport_branch_entries(
                &branches,
                trial,
                expected_count,
                &mut min_fidelity,
                &mut results,
            );
        } else {
            let transcript = match protocol {
                TeleportProtocolArg::N => teleport_n(&input, n, &mut rng)?,
                TeleportProtocolArg::Fivequbit => teleport_1_fivequbit(&input, &mut rng)?,
            };
            min_fidelity = min_fidelity.min(transcript.fidelity);
            transcript_entries(&transcript, trial, expected_bits, &mut results);
        }
    }

    results.push(ResultEntry::at_least(
        "min-fidelity",
        min_fidelity,
        FIDELITY_BOUND,
    ));
    Ok(results)
}

fn cmd_qis(config: &RunConfig, protocol: QisProtocolArg) -> Result<Vec<ResultEntry>> {
    let n = config.n;
    let (n_input, expected_count, expected_bits, secrecy_protocol) = match protocol {
        QisProtocolArg::I => (1, 16, 4, SecrecyProtocol::Single(SingleProtocol::I)),
        QisProtocolArg::Ii => (1, 16, 4, SecrecyProtocol::Single(SingleProtocol::II)),
        QisProtocolArg::Iii => (1, 16, 4, SecrecyProtocol::Single(SingleProtocol::III)),
        QisProtocolArg::Two => (2, 32, 5, SecrecyProtocol::Two),
        QisProtocolArg::N => (n, 2 << (2 * n), 2 * n + 1, SecrecyProtocol::N),
    };
    let single = match protocol {
        QisProtocolArg::I => Some(SingleProtocol::I),
        QisProtocolArg::Ii => Some(SingleProtocol::II),
        QisProtocolArg::Iii => Some(SingleProtocol::III),
        _ => None,
    };
    let mut results = Vec::new();
    let mut min_fidelity = 1.0f64;
    let uniform = 1.0 / expected_count as f64;

    for trial in 0..config.trials {
        let mut rng = trial_rng(config.seed, trial);
        let input: Sv = haar_random_state(n_input, &mut rng)?;
        if config.enumerate {
            let branches = match protocol {
                QisProtocolArg::Two => enumerate_two(&input)?,
                QisProtocolArg::N => enumerate_n(&input, n)?,
                _ => enumerate_single(single.expect("single protocol"), &input)?,
            };
            let mut deviation = 0.0f64;
            for (index, branch) in branches.iter().enumerate() {
                min_fidelity = min_fidelity.min(branch.fidelity);
                deviation = deviation.max((branch.probability - uniform).abs());
                results.push(
                    ResultEntry::at_least("branch-fidelity", branch.fidelity, FIDELITY_BOUND)
                        .trial(trial)
                        .branch(index)
                        .detail(json!({
                            "alice": branch.alice_outcome,
                            "bob": branch.bob_outcome,
                            "correction": branch.correction.to_string(),
                        })),
                );
            }
            results.push(ResultEntry::bounded("outcome-uniformity", deviation, TOL).trial(trial));
            results.push(ResultEntry {
                measured: Some(branches.len() as f64),
                bound: Some(expected_count as f64),
                pass: branches.len() == expected_count,
                ..ResultEntry::new("branch-count").trial(trial)
            });
        } else {
            let transcript = match protocol {
                QisProtocolArg::Two => qis_two(&input, &mut rng)?,
                QisProtocolArg::N => qis_n(&input, n, &mut rng)?,
                _ => qis_single(single.expect("single protocol"), &input, &mut rng)?,
            };
            min_fidelity = min_fidelity.min(transcript.fidelity);
            transcript_entries(&transcript, trial, expected_bits, &mut results);
        }
    }

    results.push(ResultEntry::at_least(
        "min-fidelity",
        min_fidelity,
        FIDELITY_BOUND,
    ));

    let mut secrecy_rng = trial_rng(config.seed, SECRECY_STREAM);
    let secrecy = secrecy_check::<f64, _>(
        secrecy_protocol,
        n_input,
        config.trials.max(2) as usize,
        &mut secrecy_rng,
    )?;
    for (party, distance) in &secrecy.pre_measurement {
        results.push(ResultEntry::bounded(
            format!("secrecy-premeasure-{party}"),
            *distance,
            TOL,
        ));
    }
    results.push(ResultEntry::bounded(
        format!("secrecy-post-alice-{}", secrecy.post_alice_party),
        secrecy.post_alice_distance,
        TOL,
    ));

    match single {
        Some(p) => {
            let table = single_correction_table::<f64>(p)?;
            let width = table.first().map_or(0, Vec::len);
            for (a, row) in table.iter().enumerate() {
                for (b, op) in row.iter().enumerate() {
                    if let Some(op) = op {
                        results.push(ResultEntry::new("correction").branch(a * width + b).detail(
                            json!({
                                "alice": a,
                                "bob": b,
                                "operator": op.to_string(),
                            }),
                        ));
                    }
                }
            }
        }
        None => {
            let m = n_input;
            for j in 0..1usize << (2 * m) {
                for minus in [false, true] {
                    let op = rule_correction(m, j, minus)?;
                    results.push(
                        ResultEntry::new("correction")
                            .branch(2 * j + minus as usize)
                            .detail(json!({
                                "alice": j,
                                "bob": minus as usize,
                                "operator": op.to_string(),
                            })),
                    );
                }
            }
        }
    }
    Ok(results)
}

fn cmd_verify(config: &RunConfig, corrupt_basis: bool) -> Result<Vec<ResultEntry>> {
    let mut results = Vec::new();

    for k in 1..=config.n.min(3) {
        let superdense = superdense_basis::<f64>(k)?;
        let omega_t = omega_basis_teleport::<f64>(k)?;
        let omega_q = omega_basis_qis::<f64>(k)?;
        for basis in [&superdense, &omega_t, &omega_q] {
            report_entries(&check_orthonormal(basis), &mut results);
        }
        // The teleport family spans only the protocol's support subspace;
        // the other two have as many elements as dimensions.
        for basis in [&superdense, &omega_q] {
            report_entries(&check_completeness(basis), &mut results);
        }
    }

    let fixed = fixed_bases::<f64>();
    let all: [&MeasurementBasis<f64>; 6] = [
        &fixed.fivequbit,
        &fixed.three_particle,
        &fixed.four_particle,
        &fixed.bell,
        &fixed.ghz_pair,
        &fixed.hadamard,
    ];
    for basis in all {
        report_entries(&check_orthonormal(basis), &mut results);
    }
    // Completeness only holds for families with as many elements as
    // dimensions.
    for basis in [&fixed.three_particle, &fixed.bell, &fixed.hadamard] {
        report_entries(&check_completeness(basis), &mut results);
    }

    let (channel, parties) = channel_teleport::<f64>(config.n)?;
    let bob = parties.positions_of(Party::Bob);
    report_entries(&entanglement_report(&channel, &bob)?, &mut results);
    report_entries(
        &entanglement_report(&channel, &[2 * config.n + 1])?,
        &mut results,
    );
    let (qis_channel, qis_parties) = channel_qis::<f64>(config.n)?;
    let charlie = qis_parties.positions_of(Party::Charlie);
    report_entries(&entanglement_report(&qis_channel, &charlie)?, &mut results);

    if corrupt_basis {
        let mut elements = fixed.bell.elements().to_vec();
        let scaled = Sv::from_amplitudes(
            elements[0].amplitudes().iter().map(|a| a * 1.01).collect(),
        )?;
        elements[0] = scaled;
        let corrupted = MeasurementBasis::new_unchecked("corrupt-bell", elements);
        report_entries(&check_orthonormal(&corrupted), &mut results);
    }
    Ok(results)
}

fn emit(report: &Report, format: FormatArg, output: Option<&Path>) -> io::Result<()> {
    let body = match format {
        FormatArg::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        FormatArg::Csv => render_csv(report),
        FormatArg::Text => render_text(report),
    };
    match output {
        Some(path) => write_atomic(path, body.as_bytes()),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let file_name = path.file_name().ok_or_else(|| {
        io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name")
    })?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

fn render_csv(report: &Report) -> String {
    let mut out = String::from("name,trial,branch,measured,bound,pass\n");
    for entry in &report.results {
        let trial = entry.trial.map_or(String::new(), |t| t.to_string());
        let branch = entry.branch.map_or(String::new(), |b| b.to_string());
        let measured = entry.measured.map_or(String::new(), |m| format!("{m:e}"));
        let bound = entry.bound.map_or(String::new(), |b| format!("{b:e}"));
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            entry.name, trial, branch, measured, bound, entry.pass
        ));
    }
    out
}

fn detail_text(value: &serde_json::Value) -> String {
    let serde_json::Value::Object(map) = value else {
        return value.to_string();
    };
    map.iter()
        .filter(|(k, _)| k.as_str() != "kets" && k.as_str() != "row")
        .map(|(k, v)| match v {
            serde_json::Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_text(report: &Report) -> String {
    let config = &report.config;
    let mut out = format!("ghzbell {} report\n", report.command);
    out.push_str(&format!(
        "config: n={} protocol={} trials={} seed={} enumerate={} format={}\n",
        config.n,
        config.protocol.as_deref().unwrap_or("-"),
        config.trials,
        config.seed,
        config.enumerate,
        config.format,
    ));

    let table_rows: Vec<&ResultEntry> = report
        .results
        .iter()
        .filter(|e| e.name == "encoding-row")
        .collect();
    if !table_rows.is_empty() {
        out.push_str("encoding table (bits, operator, state, decomposition):\n");
        for entry in &table_rows {
            if let Some(row) = entry.detail.as_ref().and_then(|d| d.get("row")) {
                if let serde_json::Value::String(line) = row {
                    out.push_str("  ");
                    out.push_str(line);
                    out.push('\n');
                }
            }
        }
    }

    out.push_str("results:\n");
    let mut failed = 0usize;
    for entry in &report.results {
        if !entry.pass {
            failed += 1;
        }
        if entry.name == "encoding-row" {
            continue;
        }
        let mut line = format!(
            "  [{}] {}",
            if entry.pass { "ok" } else { "FAIL" },
            entry.name
        );
        if let Some(t) = entry.trial {
            line.push_str(&format!(" trial={t}"));
        }
        if let Some(b) = entry.branch {
            line.push_str(&format!(" branch={b}"));
        }
        if let Some(m) = entry.measured {
            line.push_str(&format!(" measured={m:e}"));
        }
        if let Some(b) = entry.bound {
            line.push_str(&format!(" bound={b:e}"));
        }
        if let Some(detail) = &entry.detail {
            let text = detail_text(detail);
            if !text.is_empty() {
                line.push_str(&format!(" {text}"));
            }
        }
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&format!(
        "overall: {} ({} checks, {} failed)\n",
        if report.pass { "PASS" } else { "FAIL" },
        report.results.len(),
        failed,
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_size_parser_enforces_the_range() {
        assert_eq!(parse_channel_size("3").unwrap(), 3);
        assert!(parse_channel_size("0").is_err());
        assert!(parse_channel_size("5").is_err());
        assert!(parse_channel_size("x").is_err());
    }

    #[test]
    fn coefficient_labels_match_ket_counts() {
        assert_eq!(coefficient_label(2), "1/sqrt(2)");
        assert_eq!(coefficient_label(4), "1/2");
        assert_eq!(coefficient_label(8), "1/(2sqrt(2))");
        assert_eq!(coefficient_label(16), "1/4");
    }

    #[test]
    fn encoding_table_reproduces_known_rows() {
        let lines = encoding_table(2).unwrap();
        assert_eq!(lines.len(), 32);
        let first: Vec<&str> = lines[0].split_whitespace().collect();
        assert_eq!(
            first,
            [
                "00000",
                "I",
                "1/2(|00000>+|00011>+|11100>+|11111>)",
                "|xi+>|psi+>"
            ]
        );
        let last: Vec<&str> = lines[31].split_whitespace().collect();
        assert_eq!(
            last,
            [
                "11111",
                "Z2Z3X1X2X3",
                "1/2(|00101>-|00110>-|11001>+|11010>)",
                "|theta->|phi->"
            ]
        );
    }

    #[test]
    fn single_size_table_uses_plain_named_states() {
        let lines = encoding_table(1).unwrap();
        assert_eq!(lines.len(), 8);
        let first: Vec<&str> = lines[0].split_whitespace().collect();
        assert_eq!(first, ["000", "I", "1/sqrt(2)(|000>+|111>)", "|xi+>"]);
    }

    #[test]
    fn state_sum_orders_kets_ascending() {
        let state: Sv = named_state(StateName::PhiMinus);
        assert_eq!(state_sum(&state), "1/sqrt(2)(|01>-|10>)");
    }

    #[test]
    fn local_operator_renumbers_alice_positions() {
        let op = PauliString::from_positions(5, &[2, 4], &[1, 4]).unwrap();
        assert_eq!(local_operator(&op, &[1, 2, 4]), "Z2Z3X1X3");
        let identity = PauliString::identity(5);
        assert_eq!(local_operator(&identity, &[1, 2, 4]), "I");
    }

    #[test]
    fn csv_rows_match_entry_count() {
        let config = RunConfig {
            command: "verify".into(),
            n: 1,
            protocol: None,
            trials: 1,
            seed: 7,
            enumerate: false,
            format: "csv".into(),
            output: None,
        };
        let entries = vec![
            ResultEntry::bounded("a", 0.0, 1e-10),
            ResultEntry::at_least("b", 1.0, 0.5).trial(3).branch(2),
        ];
        let report = Report::new(config, entries);
        let csv = render_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "name,trial,branch,measured,bound,pass");
        assert_eq!(lines[1], "a,,,0e0,1e-10,true");
        assert_eq!(lines[2], "b,3,2,1e0,5e-1,true");
    }

    #[test]
    fn text_report_flags_failures() {
        let config = RunConfig {
            command: "teleport".into(),
            n: 2,
            protocol: Some("n".into()),
            trials: 1,
            seed: 7,
            enumerate: true,
            format: "text".into(),
            output: None,
        };
        let entries = vec![ResultEntry::at_least("min-fidelity", 0.5, 1.0 - 1e-10)];
        let report = Report::new(config, entries);
        assert!(!report.pass);
        let text = render_text(&report);
        assert!(text.contains("[FAIL] min-fidelity"));
        assert!(text.contains("overall: FAIL (1 checks, 1 failed)"));
    }
}
