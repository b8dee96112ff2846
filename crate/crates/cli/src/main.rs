//! `qgrav`: reports on the gravity state family, its channels, the causal
//! game and the SR latch.
//!
//! Exit codes: 0 on success, 2 on invalid flags or parameters, 1 when an
//! internal invariant fails.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qgrav_core::channels::{anti_degradable_channel, AntiDegradableParams, TransferMatrix};
use qgrav_core::correlations::{figure4_sweep, CorrelationReport};
use qgrav_core::gravity_states::{bell_diagonal_marginal, gravity_tripartite, GravityStateParams};
use qgrav_core::process_game::{build_ocb_process, game_report};
use qgrav_core::qmat::MatrixRecord;
use qgrav_core::separability::full_partition_audit;
use qgrav_core::sr_latch::{run_latch, LatchConfig, LatchControl, LatchReport};
use qgrav_core::{DensityOperator, QgravError, Tolerances};

const CSV_HEADER: &str = "omega,mutual_info,classical_corr,discord,coherent_info,coherent_info_abs";

#[derive(Debug, Parser)]
#[command(
    name = "qgrav",
    version,
    about = "Quantum-information numerics for the gravity state family"
)]
struct Cli {
    /// Sign tolerance for positivity and PPT verdicts.
    #[arg(long, global = true, env = "QGRAV_TOL")]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tripartite state and its Bell-diagonal marginal at Ω.
    State {
        #[arg(long)]
        omega: f64,
    },
    /// Partial-transpose audit of every cut.
    Ppt {
        #[arg(long)]
        omega: f64,
    },
    /// Correlation measures over an Ω range.
    Sweep {
        #[arg(long, default_value_t = 0.01)]
        omega_min: f64,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        omega_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Process-matrix game report.
    Game {
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Two-Kraus qubit channel at angles (u, v).
    Channel {
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
        #[arg(long, allow_hyphen_values = true)]
        v: f64,
    },
    /// SR latch with a fixed or superposed control.
    Latch {
        /// 0, 1 or plus
        #[arg(long)]
        control: String,
        /// Two bits, e.g. 00
        #[arg(long, default_value = "00")]
        inputs: String,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        kappa: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<QgravError> for Failure {
    fn from(e: QgravError) -> Self {
        match e {
            QgravError::OutOfRange(_) | QgravError::Invalid(_) | QgravError::UnknownSlot(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

#[derive(Serialize)]
struct OperatorView {
    slots: Vec<String>,
    matrix: MatrixRecord,
    eigenvalues: Vec<f64>,
    min_eigenvalue: f64,
    is_psd: bool,
}

impl OperatorView {
    fn new(rho: &DensityOperator, sign_tol: f64) -> Result<Self, QgravError> {
        let eigenvalues = rho.eigenvalues()?;
        let min_eigenvalue = eigenvalues[0];
        Ok(Self {
            slots: rho.slots().to_vec(),
            matrix: MatrixRecord::from(rho.matrix()),
            eigenvalues,
            min_eigenvalue,
            is_psd: min_eigenvalue >= -sign_tol,
        })
    }
}

#[derive(Serialize)]
struct StateView {
    omega: f64,
    in_stated_regime: bool,
    tripartite: OperatorView,
    marginal: OperatorView,
}

#[derive(Serialize)]
struct ChannelView {
    u: f64,
    v: f64,
    transfer_matrix: TransferMatrix,
    expected_transfer_matrix: TransferMatrix,
    lambda: [f64; 3],
    t3: f64,
    anti_degradable: bool,
    companion_condition: bool,
    sum_difference_residual: f64,
    product_residual: f64,
    identities_ok: bool,
}

fn tolerances(cli_tol: Option<f64>) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    if let Some(t) = cli_tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::Usage(format!(
                "tolerance must be positive and finite, got {t}"
            )));
        }
        tol.sign = t;
    }
    Ok(tol)
}

/// `x` with 12 significant digits, in the shortest of fixed or
/// scientific notation.
fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{x:.11e}");
    let (_, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return sci;
    }
    let decimals = (11 - exp).max(0) as usize;
    let fixed = format!("{x:.decimals$}");
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        fixed
    }
}

fn csv_row(r: &CorrelationReport) -> String {
    [
        r.omega,
        r.mutual_info,
        r.classical_corr,
        r.discord,
        r.coherent_info,
        r.coherent_info_abs,
    ]
    .iter()
    .map(|&x| sig12(x))
    .collect::<Vec<_>>()
    .join(",")
}

fn parse_inputs(s: &str) -> Result<[u8; 2], Failure> {
    let bits: Vec<u8> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(()),
        })
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("inputs must be two bits, got {s:?}")))?;
    <[u8; 2]>::try_from(bits)
        .map_err(|_| Failure::Usage(format!("inputs must be two bits, got {s:?}")))
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let tol = tolerances(cli.tol)?;
    match cli.command {
        Command::State { omega } => {
            let p = GravityStateParams::new(omega)?;
            let state = gravity_tripartite(p);
            json(&StateView {
                omega,
                in_stated_regime: p.in_stated_regime(),
                tripartite: OperatorView::new(&state.rho, tol.sign)?,
                marginal: OperatorView::new(&bell_diagonal_marginal(p), tol.sign)?,
            })
        }
        Command::Ppt { omega } => json(&full_partition_audit(omega, tol)?),
        Command::Sweep {
            omega_min,
            omega_max,
            steps,
            format,
        } => {
            let rows = figure4_sweep(omega_min, omega_max, steps)?;
            match format {
                Format::Json => json(&rows),
                Format::Csv => {
                    let mut out = String::from(CSV_HEADER);
                    for r in &rows {
                        out.push('\n');
                        out.push_str(&csv_row(r));
                    }
                    Ok(out)
                }
            }
        }
        Command::Game { pairs, seed } => {
            if pairs == 0 {
                return Err(Failure::Usage("--pairs must be at least 1".into()));
            }
            json(&game_report(&build_ocb_process(), seed, pairs)?)
        }
        Command::Channel { u, v } => {
            if !(u.is_finite() && v.is_finite()) {
                return Err(Failure::Usage("angles must be finite".into()));
            }
            let p = AntiDegradableParams::new(u, v);
            let transfer_matrix = anti_degradable_channel(&p)?.transfer_matrix()?;
            let expected = p.expected_transfer_matrix();
            let deviation = transfer_matrix
                .iter()
                .flatten()
                .zip(expected.iter().flatten())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let sum_difference_residual = p.sum_difference_residual();
            let product_residual = p.product_residual();
            json(&ChannelView {
                u,
                v,
                transfer_matrix,
                expected_transfer_matrix: expected,
                lambda: p.lambda,
                t3: p.t3,
                anti_degradable: p.anti_degradable(),
                companion_condition: p.companion_condition(),
                sum_difference_residual,
                product_residual,
                identities_ok: deviation.max(sum_difference_residual).max(product_residual)
                    <= tol.sign,
            })
        }
        Command::Latch {
            control,
            inputs,
            kappa,
        } => {
            let control: LatchControl = control.parse()?;
            let cfg = LatchConfig::new(control, parse_inputs(&inputs)?, kappa)?;
            json(&LatchReport::from(&run_latch(&cfg)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_formats() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(-0.792481250360578), "-0.792481250361");
        assert_eq!(sig12(2.5e-7), "2.50000000000e-7");
    }

    #[test]
    fn inputs_parse() {
        assert!(matches!(parse_inputs("01"), Ok([0, 1])));
        assert!(parse_inputs("012").is_err());
        assert!(parse_inputs("2").is_err());
    }
}
