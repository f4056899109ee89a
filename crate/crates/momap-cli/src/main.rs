//! `momap` — command-line access to the momentum-map toolkit.
//!
//! Every run echoes its configuration (command, seed, tolerances) inside
//! the JSON output, keys are emitted sorted and floats in a fixed
//! 17-significant-digit format, so identical seeds and inputs produce
//! byte-identical bytes. Exit codes: 0 success, 1 computation failure,
//! 2 usage error.

mod jsonfmt;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use momap::atlas::{enumerate_b, is_critical_with, EnumOpts};
use momap::flow::{
    classify_slocc_3qubit, flow_to_critical, ghz_to_w_demo, null_cone_test, polytope_sample,
    schmidt_rank, three_tangle, FlowOpts,
};
use momap::io::{density_from_json, state_from_json, state_to_json};
use momap::lu::{lu_equivalent_bipartite, lu_equivalent_two_indistinguishable, lu_necessary};
use momap::momentum::{
    kirwan_contains, mean_linear_entropy, momentum, norm_mu_squared, psi, reduced_space_dim,
    BoundaryCase,
};
use momap::orbits::{cc_simplex_scan, orbit_report, GroupSpec};
use momap::state::{PureState, SectorKind};
use momap::{catalog, Tolerances};

/// Default RNG seed for every randomized subcommand.
const DEFAULT_SEED: u64 = 1729;

#[derive(Parser)]
#[command(
    name = "momap",
    version,
    about = "Classify multipartite quantum states through the momentum map",
    after_help = "State files use {\"sector\": {\"kind\", \"dims\"}, \"amplitudes\": [[re, im], ...]};\ndensity files use {\"dims\", \"matrix\"}. Runs are reproducible: pass --seed to vary them."
)]
struct Cli {
    /// RNG seed (fixed default keeps runs reproducible).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Report errors on stderr as structured JSON.
    #[arg(long, global = true)]
    json_errors: bool,

    /// Override the eigenvalue/singular-value threshold (default 1e-10).
    #[arg(long, global = true)]
    tol_eig: Option<f64>,

    /// Override the critical-value dedupe tolerance (default 1e-9).
    #[arg(long, global = true)]
    tol_dedupe: Option<f64>,

    /// Override the flow residual tolerance (default 1e-8).
    #[arg(long, global = true)]
    tol_flow: Option<f64>,

    /// Override the finite-difference step (default 1e-6).
    #[arg(long, global = true)]
    tol_fd: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shifted reduced density matrices m_k = rho_k - I/N_k of a state.
    Momentum { state: PathBuf },
    /// Ordered shifted spectra (the image of the state in the positive chamber).
    Psi { state: PathBuf },
    /// Kirwan-polytope membership of a state's spectra (or explicit lambdas).
    Polytope {
        state: Option<PathBuf>,
        /// Per-qubit shifted eigenvalues, comma separated.
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<f64>>,
    },
    /// Reduced-space dimension at a spectra point.
    Dim {
        state: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<f64>>,
    },
    /// Enumerate the critical atlas of L qubits.
    Critical {
        #[arg(long)]
        qubits: usize,
        /// Cap on the weight-subset size (defaults to L+1).
        #[arg(long)]
        max_size: Option<usize>,
        /// Write the atlas JSON to a file instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Skip the witness search (realizability reported as null).
        #[arg(long)]
        no_witness: bool,
    },
    /// Gradient-flow a state to its critical stratum.
    Flow { state: PathBuf },
    /// Null-cone test: semistable or unstable with its stratum.
    Nullcone { state: PathBuf },
    /// Six-class SLOCC label of a three-qubit state.
    Classify3 { state: PathBuf },
    /// Sample the entanglement polytope of a state into a CSV cloud.
    #[command(name = "polytope-sample")]
    PolytopeSample {
        state: PathBuf,
        /// Number of samples.
        #[arg(short = 'n', long = "samples")]
        n: usize,
        /// Output CSV path (one lambda vector per row).
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Local-unitary equivalence of two states.
    Luequiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = LuMode::Auto)]
        mode: LuMode,
    },
    /// Orbit geometry and CC/CQ verdicts of a bipartite density matrix.
    Ccq {
        rho: PathBuf,
        #[arg(long, value_enum, default_value_t = GroupArg::Full)]
        group: GroupArg,
    },
    /// Scan the two-qubit CC simplex: orbit dim, omega rank, D, chi per grid point.
    #[command(name = "ccq-scan")]
    CcqScan {
        #[arg(long)]
        grid: usize,
        /// Output CSV path (stdout when omitted).
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Check the nine built-in four-qubit critical states.
    Table2,
    /// Rank-collapse demo: fidelity of the squeezed GHZ state against W.
    #[command(name = "ghz-to-w")]
    GhzToW {
        /// Squeeze parameters, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1.0,0.5,0.1,0.01")]
        a: Vec<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LuMode {
    Auto,
    Bipartite,
    Necessary,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Full,
    #[value(name = "a-only")]
    AOnly,
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl From<momap::Error> for CliError {
    fn from(err: momap::Error) -> Self {
        CliError::Failure(err.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_errors = cli.json_errors;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, kind, message) = match err {
                CliError::Usage(m) => (2u8, "usage", m),
                CliError::Failure(m) => (1u8, "failure", m),
            };
            if json_errors {
                eprintln!(
                    "{}",
                    serde_json::json!({"error": {"kind": kind, "message": message}})
                );
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let tol = tolerances(&cli);
    tol.validate().map_err(CliError::from)?;
    let seed = cli.seed;
    match cli.command {
        Command::Momentum { state } => {
            let s = load_state(&state)?;
            let mm = momentum(&s);
            let blocks: Vec<Value> = mm.blocks().iter().map(matrix_value).collect();
            emit(
                "momentum",
                seed,
                &tol,
                json!({
                    "blocks": blocks,
                    "norm_mu_squared": norm_mu_squared(&s),
                    "mean_linear_entropy": mean_linear_entropy(&s),
                }),
            );
            Ok(())
        }
        Command::Psi { state } => {
            let s = load_state(&state)?;
            let spectra = psi(&s);
            let mut payload = json!({ "lambdas": spectra.lambdas() });
            if let Some(q) = spectra.qubit_lambdas() {
                payload["qubit_lambda"] = json!(q);
            }
            emit("psi", seed, &tol, payload);
            Ok(())
        }
        Command::Polytope { state, lambda } => {
            let lams = resolve_lambdas(state.as_deref(), lambda)?;
            let location = kirwan_contains(&lams).map_err(CliError::from)?;
            emit(
                "polytope",
                seed,
                &tol,
                json!({ "lambda": lams, "location": location }),
            );
            Ok(())
        }
        Command::Dim { state, lambda } => {
            let lams = resolve_lambdas(state.as_deref(), lambda)?;
            let report = reduced_space_dim(&lams).map_err(CliError::from)?;
            let case = match report.case {
                BoundaryCase::Interior => json!({"case": "interior"}),
                BoundaryCase::BoundaryI { k } => json!({"case": "boundary_i", "k": k}),
                BoundaryCase::BoundaryII => json!({"case": "boundary_ii"}),
                BoundaryCase::BoundaryIII { k } => json!({"case": "boundary_iii", "k": k}),
            };
            emit(
                "dim",
                seed,
                &tol,
                json!({ "lambda": lams, "dim": report.dim, "boundary": case }),
            );
            Ok(())
        }
        Command::Critical {
            qubits,
            max_size,
            json: out,
            no_witness,
        } => {
            let opts = EnumOpts {
                max_subset_size: max_size,
                search_witness: !no_witness,
                seed,
                tol,
                ..EnumOpts::default()
            };
            let atlas = enumerate_b(qubits, &opts).map_err(CliError::from)?;
            let values: Vec<Value> = atlas
                .values
                .iter()
                .map(|v| {
                    let mut entry = json!({
                        "beta": v.beta,
                        "norm_sq": v.norm_sq,
                        "support_size": v.support.len(),
                        "realizable": if no_witness { Value::Null } else { json!(v.nonempty) },
                    });
                    if let Some(w) = &v.witness {
                        entry["witness"] = state_value(w);
                    }
                    entry
                })
                .collect();
            let payload = json!({
                "qubits": qubits,
                "complete": atlas.complete,
                "values": values,
            });
            let rendered = render("critical", seed, &tol, payload);
            match out {
                Some(path) => {
                    fs::write(&path, rendered)
                        .map_err(|e| CliError::Failure(format!("writing {path:?}: {e}")))?;
                    println!("wrote atlas to {}", path.display());
                }
                None => print!("{rendered}"),
            }
            Ok(())
        }
        Command::Flow { state } => {
            let s = load_state(&state)?;
            let opts = FlowOpts { tol, ..FlowOpts::default() };
            let out = flow_to_critical(&s, &opts).map_err(CliError::from)?;
            emit(
                "flow",
                seed,
                &tol,
                json!({
                    "iterations": out.iterations,
                    "final_norm_mu_sq": out.final_norm_mu_sq,
                    "limit_beta": out.limit_beta,
                    "matched_beta": out.matched_beta,
                    "semistable": out.semistable,
                    "converged": out.converged,
                    "limit_state": state_value(&out.limit_state),
                }),
            );
            Ok(())
        }
        Command::Nullcone { state } => {
            let s = load_state(&state)?;
            let opts = FlowOpts { tol, ..FlowOpts::default() };
            let report = null_cone_test(&s, &opts).map_err(CliError::from)?;
            emit(
                "nullcone",
                seed,
                &tol,
                json!({
                    "verdict": if report.semistable { "semistable" } else { "unstable" },
                    "beta": report.assignment.matched_beta,
                    "limit_beta": report.assignment.limit_beta,
                    "iterations": report.assignment.iterations,
                    "final_norm_mu_sq": report.assignment.final_norm_mu_sq,
                }),
            );
            Ok(())
        }
        Command::Classify3 { state } => {
            let s = load_state(&state)?;
            let class = classify_slocc_3qubit(&s).map_err(CliError::from)?;
            let ranks: Vec<usize> = (0..3)
                .map(|k| schmidt_rank(&s, &[k]))
                .collect::<momap::Result<_>>()
                .map_err(CliError::from)?;
            let tangle = three_tangle(&s).map_err(CliError::from)?;
            let opts = FlowOpts { tol, ..FlowOpts::default() };
            let flow_out = flow_to_critical(&s, &opts).map_err(CliError::from)?;
            emit(
                "classify3",
                seed,
                &tol,
                json!({
                    "class": class.to_string(),
                    "one_vs_rest_ranks": ranks,
                    "three_tangle": tangle,
                    "flow_stratum": flow_out.matched_beta,
                }),
            );
            Ok(())
        }
        Command::PolytopeSample { state, n, out } => {
            let s = load_state(&state)?;
            let sample = polytope_sample(&s, n, seed).map_err(CliError::from)?;
            let mut csv = String::new();
            let qubit_cloud = sample.points.iter().all(|p| p.qubit_lambdas().is_some());
            if let Some(first) = sample.points.first() {
                let width = if qubit_cloud {
                    first.lambdas().len()
                } else {
                    first.lambdas().iter().map(|l| l.len()).sum()
                };
                csv.push_str(
                    &(0..width)
                        .map(|i| format!("lambda{i}"))
                        .collect::<Vec<_>>()
                        .join(","),
                );
                csv.push('\n');
            }
            for point in &sample.points {
                let row: Vec<String> = if qubit_cloud {
                    point
                        .qubit_lambdas()
                        .expect("qubit cloud")
                        .iter()
                        .map(|x| jsonfmt::format_f64(*x))
                        .collect()
                } else {
                    point
                        .lambdas()
                        .iter()
                        .flatten()
                        .map(|x| jsonfmt::format_f64(*x))
                        .collect()
                };
                csv.push_str(&row.join(","));
                csv.push('\n');
            }
            fs::write(&out, csv)
                .map_err(|e| CliError::Failure(format!("writing {out:?}: {e}")))?;
            emit(
                "polytope-sample",
                seed,
                &tol,
                json!({
                    "samples": n,
                    "min_norm_sq": sample.min_norm_sq,
                    "out": out.display().to_string(),
                }),
            );
            Ok(())
        }
        Command::Luequiv { a, b, mode } => {
            let sa = load_state(&a)?;
            let sb = load_state(&b)?;
            let (verdict, mode_used) = match mode {
                LuMode::Bipartite => (lu_equivalent_bipartite(&sa, &sb), "bipartite"),
                LuMode::Necessary => (lu_necessary(&sa, &sb), "necessary"),
                LuMode::Auto => {
                    if sa.sector().num_slots() == 2 {
                        if sa.sector().kind() == SectorKind::Distinguishable {
                            (lu_equivalent_bipartite(&sa, &sb), "bipartite")
                        } else {
                            (
                                lu_equivalent_two_indistinguishable(&sa, &sb),
                                "two-indistinguishable",
                            )
                        }
                    } else {
                        (lu_necessary(&sa, &sb), "necessary")
                    }
                }
            };
            let verdict = verdict.map_err(CliError::from)?;
            emit(
                "luequiv",
                seed,
                &tol,
                json!({
                    "verdict": verdict.verdict,
                    "evidence": verdict.evidence,
                    "mode": mode_used,
                }),
            );
            Ok(())
        }
        Command::Ccq { rho, group } => {
            let dm = load_density(&rho)?;
            let spec = match group {
                GroupArg::Full => {
                    GroupSpec::full(dm.dims().len()).map_err(CliError::from)?
                }
                GroupArg::AOnly => GroupSpec::a_only(),
            };
            let report = orbit_report(&dm, &spec).map_err(CliError::from)?;
            let payload = serde_json::to_value(report)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            emit("ccq", seed, &tol, payload);
            Ok(())
        }
        Command::CcqScan { grid, out } => {
            let rows = cc_simplex_scan(grid).map_err(CliError::from)?;
            let mut csv = String::from("p00,p01,p10,p11,orbit_dim,omega_rank,degeneracy_D,chi\n");
            for row in &rows {
                let p: Vec<String> = row.p.iter().map(|x| jsonfmt::format_f64(*x)).collect();
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    p.join(","),
                    row.orbit_dim,
                    row.omega_rank,
                    row.degeneracy_d,
                    row.euler_chi
                ));
            }
            // CSV consumers get a clean stream; the config echo goes to stderr.
            eprintln!(
                "{}",
                json!({"command": "ccq-scan", "grid": grid, "rows": rows.len(), "seed": seed})
            );
            match out {
                Some(path) => fs::write(&path, csv)
                    .map_err(|e| CliError::Failure(format!("writing {path:?}: {e}")))?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::Table2 => {
            let mut all_ok = true;
            for entry in catalog::critical_family_4q() {
                let spectra = psi(&entry.state);
                let lams = spectra.qubit_lambdas().expect("qubit states");
                let entropy = mean_linear_entropy(&entry.state);
                let crit = is_critical_with(&entry.state, &tol);
                let spectra_ok = lams
                    .iter()
                    .zip(&entry.expected_lambdas)
                    .all(|(got, want)| (got - want).abs() < 1e-10);
                let entropy_ok = (entropy - entry.expected_entropy).abs() < 1e-12;
                let ok = spectra_ok && entropy_ok && crit.critical;
                all_ok &= ok;
                println!(
                    "{} {:7} lambda = [{}] entropy = {:.12} (expected {:.12}) residual = {:.2e}",
                    if ok { "PASS" } else { "FAIL" },
                    entry.name,
                    lams.iter()
                        .map(|x| format!("{x:+.10}"))
                        .collect::<Vec<_>>()
                        .join(", "),
                    entropy,
                    entry.expected_entropy,
                    crit.residual,
                );
            }
            if all_ok {
                println!("all nine critical states reproduced");
                Ok(())
            } else {
                Err(CliError::Failure(
                    "built-in critical states failed to reproduce".into(),
                ))
            }
        }
        Command::GhzToW { a } => {
            let mut rows = Vec::new();
            for &param in &a {
                let fidelity = ghz_to_w_demo(param).map_err(CliError::from)?;
                rows.push(json!({"a": param, "fidelity": fidelity}));
            }
            emit("ghz-to-w", seed, &tol, json!({ "sweep": rows }));
            Ok(())
        }
    }
}

fn tolerances(cli: &Cli) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(x) = cli.tol_eig {
        tol.eig_tol = x;
    }
    if let Some(x) = cli.tol_dedupe {
        tol.dedupe_tol = x;
    }
    if let Some(x) = cli.tol_flow {
        tol.flow_tol = x;
    }
    if let Some(x) = cli.tol_fd {
        tol.fd_step = x;
    }
    tol
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Failure(format!("reading {path:?}: {e}")))
}

fn load_state(path: &Path) -> CliResult<PureState> {
    state_from_json(&read_file(path)?).map_err(CliError::from)
}

fn load_density(path: &Path) -> CliResult<momap::state::DensityMatrix> {
    density_from_json(&read_file(path)?).map_err(CliError::from)
}

fn resolve_lambdas(state: Option<&Path>, lambda: Option<Vec<f64>>) -> CliResult<Vec<f64>> {
    match (state, lambda) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "pass either a state file or --lambda, not both".into(),
        )),
        (None, None) => Err(CliError::Usage(
            "pass a state file or --lambda values".into(),
        )),
        (Some(path), None) => {
            let s = load_state(path)?;
            psi(&s).qubit_lambdas().ok_or_else(|| {
                CliError::Failure("polytope membership needs an all-qubit sector".into())
            })
        }
        (None, Some(lams)) => Ok(lams),
    }
}

fn emit(command: &str, seed: u64, tol: &Tolerances, payload: Value) {
    print!("{}", render(command, seed, tol, payload));
}

/// Wrap a payload with the run configuration and render deterministically.
fn render(command: &str, seed: u64, tol: &Tolerances, payload: Value) -> String {
    let mut value = json!({
        "command": command,
        "config": {
            "seed": seed,
            "tolerances": {
                "eig_tol": tol.eig_tol,
                "dedupe_tol": tol.dedupe_tol,
                "flow_tol": tol.flow_tol,
                "fd_step": tol.fd_step,
            },
        },
    });
    if let (Value::Object(target), Value::Object(extra)) = (&mut value, payload) {
        for (k, v) in extra {
            target.insert(k, v);
        }
    }
    jsonfmt::to_string_pretty(&value)
}

fn state_value(state: &PureState) -> Value {
    serde_json::from_str(&state_to_json(state)).expect("state wire form is valid JSON")
}

fn matrix_value(m: &momap::CMatrix) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            let row: Vec<Value> = (0..m.ncols())
                .map(|j| {
                    let e = m[(i, j)];
                    json!([e.re, e.im])
                })
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}
