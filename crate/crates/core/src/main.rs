use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};

use htforge::certificate::Certificate;
use htforge::driver::{synthesize, SynthConfig};
use htforge::oracle::{oracle_k_transitive, OracleConfig, Verdict};
use htforge::verify::verify_certificate;
use htforge::{dot, Error, FactorSpec, Side};

const PASS: u8 = 0;
const USAGE: u8 = 1;
const GATE: u8 = 2;
const VERIFY: u8 = 3;
const BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "htforge",
    version,
    about = "Finite certificates for faithful highly transitive actions of free products"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build and self-check a certificate for G * H.
    Synth {
        /// Factor G: c2, cN, z or table:<file>.
        #[arg(long)]
        g: String,
        /// Factor H: c2, cN, z or table:<file>.
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        /// Longest faithfulness word, in syllables.
        #[arg(long, default_value_t = 6)]
        wlen: usize,
        /// Number of points the transitivity tuples are drawn from.
        #[arg(long, default_value_t = 6)]
        window: usize,
        #[arg(long, default_value = "cert.txt")]
        out: PathBuf,
        /// Stop after this many engine extensions.
        #[arg(long)]
        steps: Option<usize>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Nontrivial codes of an infinite factor used in windows and words.
        #[arg(long, default_value_t = 2)]
        code_window: usize,
    },
    /// Re-check every witness of a certificate.
    Verify { cert: PathBuf },
    /// Search for words realizing k-transitivity on the first points.
    Oracle {
        cert: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        window: usize,
        /// Longest word considered; defaults to twice the longest witness.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Print the Schreier graph around the base point in DOT format.
    Dot {
        cert: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TheoremGateViolation(_) | Error::UnsupportedPairing(_) => GATE,
        Error::StepBudgetExceeded(_) | Error::NotFoundWithinBound { .. } => BUDGET,
        Error::InvalidFactor(_) | Error::InvalidArgument(_) | Error::Parse(_) | Error::Io(_) => USAGE,
        _ => VERIFY,
    }
}

fn load(path: &Path) -> Result<Certificate, u8> {
    Certificate::read(path).map_err(|e| {
        eprintln!("htforge: {}: {e}", path.display());
        exit_code(&e)
    })
}

fn run(cmd: Cmd) -> Result<(), u8> {
    match cmd {
        Cmd::Synth { g, h, kmax, wlen, window, out, steps, budget, seed, code_window } => {
            let fail = |e: Error| {
                eprintln!("htforge: {e}");
                exit_code(&e)
            };
            let g = FactorSpec::parse(Side::G, &g).map_err(fail)?;
            let h = FactorSpec::parse(Side::H, &h).map_err(fail)?;
            let cfg = SynthConfig {
                k_max: kmax,
                word_len_max: wlen,
                window,
                steps,
                code_window,
                seed,
                time_budget: budget.map(Duration::from_secs),
                ..SynthConfig::default()
            };
            let start = Instant::now();
            let cert = synthesize(&g, &h, &cfg).map_err(fail)?;
            cert.write(&out).map_err(fail)?;
            let report = verify_certificate(&cert);
            println!(
                "{} engine, {} engine steps, {} of {} requirements witnessed, {:.1}s, wrote {}",
                cert.engine.name(),
                cert.report.engine_steps,
                cert.report.satisfied,
                cert.report.requirements,
                start.elapsed().as_secs_f64(),
                out.display()
            );
            if !report.passed() {
                eprintln!("htforge: the certificate does not verify");
                return Err(VERIFY);
            }
            Ok(())
        }
        Cmd::Verify { cert } => {
            let c = load(&cert)?;
            let report = verify_certificate(&c);
            for s in &report.structural {
                println!("FAIL certificate: {s}");
            }
            for f in report.failures() {
                println!("FAIL witness {}: {}", f.index, f.error.as_deref().unwrap_or(""));
            }
            let failed = report.failures().count();
            println!("{} of {} witnesses verified", report.entries.len() - failed, report.entries.len());
            if report.passed() {
                Ok(())
            } else {
                Err(VERIFY)
            }
        }
        Cmd::Oracle { cert, k, window, cap } => {
            let c = load(&cert)?;
            let cfg = OracleConfig { k, window, length_cap: cap, ..OracleConfig::default() };
            let r = oracle_k_transitive(&c, &cfg);
            for conn in &r.connections {
                println!("{} -> {} by a word of {} syllables", join(&conn.from), join(&conn.to), conn.word.len());
            }
            match &r.verdict {
                Verdict::Transitive => {
                    println!("{k}-transitive on the first {window} points ({} tuples, cap {})", r.tuples, r.length_cap);
                    Ok(())
                }
                Verdict::NotTransitive { xbar, ybar } => {
                    println!("not {k}-transitive: no word sends {} to {}", join(xbar), join(ybar));
                    Err(VERIFY)
                }
                Verdict::Inconclusive { xbar, ybar } => {
                    println!(
                        "inconclusive: search budget ran out (length cap {}) before reaching {} from {}",
                        r.length_cap,
                        join(ybar),
                        join(xbar)
                    );
                    Err(BUDGET)
                }
            }
        }
        Cmd::Dot { cert, radius } => {
            let c = load(&cert)?;
            print!("{}", dot::to_dot(&c, radius, 2));
            Ok(())
        }
    }
}

fn join(t: &[htforge::countable::Point]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::from(PASS),
        Err(code) => ExitCode::from(code),
    }
}
