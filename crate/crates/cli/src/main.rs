//! `asymmodes`: command-line front end for the mode-of-asymmetry library.
//!
//! Exit codes: 0 computed, 1 input error, 2 computed but infeasible.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asymmodes::channels::reduce_covariant;
use asymmodes::io::{self, basis_to_json, to_json_string, CoefficientsJson, ComplexMatrixJson};
use asymmodes::linalg::{c, ComplexMatrix, DensityMatrix};
use asymmodes::monotones::{distinguish_success_compare, distinguish_success_probability, mode_monotone_table};
use asymmodes::rf::{degrade_trajectory, DegradationModel};
use asymmodes::su2::{tensor_basis_general, HalfInteger, SU2Representation};
use asymmodes::u1::{u1_decompose, u1_transition_bound, U1Representation};
use asymmodes::{random, Error, DEFAULT_TOL};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL_ENV: &str = "ASYMMODES_TOL";

#[derive(Debug, Parser)]
#[command(name = "asymmodes", version, about = "Modes of asymmetry under U(1) and SU(2)")]
struct Cli {
    /// Numerical tolerance. Defaults to $ASYMMODES_TOL, then 1e-10.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for commands that sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// U(1) mode decomposition and transition bounds.
    #[command(subcommand)]
    U1(U1Command),
    /// SU(2) tensor bases, channel reduction and monotones.
    #[command(subcommand)]
    Su2(Su2Command),
    /// Reference-frame degradation.
    #[command(subcommand)]
    Rf(RfCommand),
    /// Test-vector generation.
    #[command(subcommand)]
    Batch(BatchCommand),
}

#[derive(Debug, Subcommand)]
enum U1Command {
    /// Mode norms of a state; JSON {"modes", "norms"}.
    Decompose {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        charges: PathBuf,
    },
    /// Per-mode bounds on a covariant transition; CSV. Exit 2 when infeasible.
    Bound {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        charges: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Su2Command {
    /// Irreducible tensor operator basis of a representation.
    TensorBasis {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-rank coefficient matrices of a covariant channel.
    ChannelReduce {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        in_rep: PathBuf,
        #[arg(long)]
        out_rep: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace norms of every (mu, m) mode; CSV.
    Monotones {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Success probability of distinguishing a frame from its rotations.
    Psucc {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        twice_j: i32,
        /// Also evaluate the group-average oracle.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Debug, Subcommand)]
enum RfCommand {
    /// Tensor expectations along repeated use of a covariant channel; CSV.
    Degrade {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Debug, Subcommand)]
enum BatchCommand {
    /// U(1) monotones of the uniform superposition over charges 1..N.
    PsiTable {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random density matrix in ComplexMatrix JSON.
    RandomState {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Output of a successful run.
struct Outcome {
    text: String,
    out: Option<PathBuf>,
    infeasible: bool,
}

impl Outcome {
    fn stdout(text: String) -> Self {
        Self {
            text,
            out: None,
            infeasible: false,
        }
    }

    fn to(text: String, out: Option<PathBuf>) -> Self {
        Self {
            text,
            out,
            infeasible: false,
        }
    }
}

fn resolve_tol(flag: Option<f64>) -> Result<f64, Error> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{TOL_ENV}={s:?} is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

/// 17 significant digits, enough to round-trip any f64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn read_state(path: &Path, tol: f64) -> Result<DensityMatrix, Error> {
    let m = io::read_json::<ComplexMatrixJson>(path)?.to_matrix()?;
    DensityMatrix::new(m, tol.max(1e-8))
}

fn read_charges(path: &Path) -> Result<U1Representation, Error> {
    U1Representation::new(io::read_json::<io::ChargesJson>(path)?.charges)
}

fn read_rep(path: &Path) -> Result<SU2Representation, Error> {
    io::read_json::<io::RepJson>(path)?.to_rep()
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let tol = resolve_tol(cli.tol)?;
    match cli.command {
        Command::U1(U1Command::Decompose { state, charges }) => {
            let rho = read_state(&state, tol)?;
            let rep = read_charges(&charges)?;
            let spec = u1_decompose(rho.matrix(), &rep)?;
            let modes: Vec<i64> = spec.modes(tol).into_iter().collect();
            let norms: BTreeMap<String, f64> = spec.norms.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            let json = serde_json::json!({ "modes": modes, "norms": norms });
            Ok(Outcome::stdout(to_json_string(&json)))
        }
        Command::U1(U1Command::Bound { from, to, charges }) => {
            let rho = read_state(&from, tol)?;
            let sigma = read_state(&to, tol)?;
            let rep = read_charges(&charges)?;
            let b = u1_transition_bound(&rho, &sigma, &rep, tol)?;
            let mut text = String::from("k,bound\n");
            for (k, v) in &b.per_mode {
                writeln!(text, "{k},{}", num(*v)).unwrap();
            }
            writeln!(text, "overall,{}", num(b.overall)).unwrap();
            Ok(Outcome {
                text,
                out: None,
                infeasible: !b.feasible(),
            })
        }
        Command::Su2(Su2Command::TensorBasis { rep, out }) => {
            let basis = tensor_basis_general(&read_rep(&rep)?);
            Ok(Outcome::to(to_json_string(&basis_to_json(&basis)), out))
        }
        Command::Su2(Su2Command::ChannelReduce {
            channel,
            in_rep,
            out_rep,
            out,
        }) => {
            let e = io::read_json::<io::ChannelJson>(&channel)?.to_superoperator()?;
            let a = tensor_basis_general(&read_rep(&in_rep)?);
            let b = tensor_basis_general(&read_rep(&out_rep)?);
            let red = reduce_covariant(&e, &a, &b, tol)?;
            if !red.covariant {
                return Err(Error::NotCovariant {
                    residual: red.residual.max(red.cross_check),
                    tol,
                });
            }
            let json = CoefficientsJson::new(&red.coefficients, red.residual);
            Ok(Outcome::to(to_json_string(&json), out))
        }
        Command::Su2(Su2Command::Monotones { state, rep }) => {
            let rho = read_state(&state, tol)?;
            let table = mode_monotone_table(&rho, &read_rep(&rep)?)?;
            let mut text = String::from("mu,m,F\n");
            for ((mu, m), v) in &table.entries {
                writeln!(text, "{mu},{m},{}", num(*v)).unwrap();
            }
            Ok(Outcome::stdout(text))
        }
        Command::Su2(Su2Command::Psucc { state, twice_j, oracle }) => {
            let rho = read_state(&state, tol)?;
            let j = HalfInteger::spin(twice_j)?;
            let json = if oracle {
                let cmp = distinguish_success_compare(&rho, j, tol)?;
                serde_json::json!({ "formula": cmp.formula, "oracle": cmp.oracle, "delta": cmp.delta })
            } else {
                serde_json::json!({ "formula": distinguish_success_probability(&rho, j)? })
            };
            Ok(Outcome::stdout(to_json_string(&json)))
        }
        Command::Rf(RfCommand::Degrade { state, coeffs, steps }) => {
            let rho = read_state(&state, tol)?;
            let j = HalfInteger::spin(rho.dim() as i32 - 1)?;
            let coefficients = io::parse_degradation_coefficients(&io::read_text(&coeffs)?, tol)?;
            let model = DegradationModel::new(j, coefficients, tol)?;
            let traj = degrade_trajectory(&rho, &model, steps)?;
            let mut text = String::from("k,mu,m,re,im\n");
            for step in &traj.steps {
                for ((mu, m), v) in &step.expectations {
                    writeln!(text, "{},{mu},{m},{},{}", step.k, num(v.re), num(v.im)).unwrap();
                }
            }
            Ok(Outcome::stdout(text))
        }
        Command::Batch(BatchCommand::PsiTable { max_n, out }) => Ok(Outcome::to(psi_table(max_n)?, out)),
        Command::Batch(BatchCommand::RandomState { dim, rank, out }) => {
            if dim == 0 {
                return Err(Error::InvalidInput("dimension must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let rho = random::density_matrix(dim, rank.unwrap_or(dim).clamp(1, dim), &mut rng);
            Ok(Outcome::to(to_json_string(&ComplexMatrixJson::from(rho.matrix())), out))
        }
    }
}

/// Monotones `‖ρ^(k)‖₁` of `|ψ_N⟩ = N^{-1/2} Σ_{n=1}^N |n⟩` for `N = 1..=max_n`, `|k| ≤ N`.
fn psi_table(max_n: usize) -> Result<String, Error> {
    let mut text = String::from("N,k,monotone\n");
    for n in 1..=max_n {
        let rep = U1Representation::range(1, n as i64);
        let rho = ComplexMatrix::from_element(n, n, c(1.0 / n as f64, 0.0));
        let spec = u1_decompose(&rho, &rep)?;
        for k in -(n as i64)..=n as i64 {
            let v = spec.norms.get(&k).copied().unwrap_or(0.0);
            writeln!(text, "{n},{k},{}", num(v)).unwrap();
        }
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            match &outcome.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &outcome.text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{}", outcome.text),
            }
            if outcome.infeasible {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
