use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use covsys::cyclotomic::contained_cosets;
use covsys::generate::{count_ecs, enumerate_ecs_with_limit, DEFAULT_ENUMERATION_LIMIT};
use covsys::verify::{verify_genfun_with_limit, verify_scan_with_limit, DEFAULT_SCAN_LIMIT};
use covsys::{
    decompose, format, is_irreducible, is_natural, merge, merge_candidates, reduce_to_trivial,
    split, stats, verify_crt, CycVector, Ecs, Error, GenOptions, MergeCandidate, ReductionTrace,
};
use serde_json::json;

/// Exact covering systems: verify, reduce, split, merge, generate, enumerate.
///
/// Exit status: 0 when the property holds or the command succeeded, 1 when
/// the property fails, 2 on usage or input errors.
#[derive(Debug, Parser)]
#[command(name = "covsys", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    /// Write the report to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check exactness with the scan, CRT and generating-function verifiers.
    Verify {
        /// System file (`-` for stdin); text or JSON, detected from content.
        input: PathBuf,
        /// Largest N(A) for the dense verifiers.
        #[arg(long, default_value_t = DEFAULT_SCAN_LIMIT)]
        scan_limit: u64,
    },
    /// Reduce to {0(1)} by repeated prime-coset consolidation.
    Reduce {
        input: PathBuf,
        /// Write the coarse-to-fine split trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Decide whether no prime-order coset can be merged.
    Irreducible { input: PathBuf },
    /// Search for any merge sequence reaching {0(1)}.
    Natural {
        input: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Split one class a(t) into n classes.
    Split {
        input: PathBuf,
        #[arg(long)]
        residue: i64,
        #[arg(long)]
        modulus: i64,
        /// Number of parts.
        #[arg(long)]
        arity: u64,
    },
    /// Merge the p classes {d + j n/p (n)} into d(n/p).
    Merge {
        input: PathBuf,
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        shift: u64,
    },
    /// Build a natural system by seeded random prime splits, or by replaying a trace.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        steps: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        /// Cap on N(A).
        #[arg(long)]
        lcm: Option<u64>,
        /// Cap on distinct prime factors per modulus.
        #[arg(long)]
        max_prime_factors: Option<usize>,
        /// Replay this trace instead of generating.
        #[arg(long, conflicts_with_all = ["seed", "steps", "lcm", "max_prime_factors"])]
        replay: Option<PathBuf>,
        /// Write the generating trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// List every exact system whose moduli divide N.
    Enumerate {
        #[arg(long)]
        lcm: u64,
        /// Largest N accepted.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit: u64,
        /// Print only the number of systems.
        #[arg(long)]
        count: bool,
    },
    /// Decide whether a sum of m-th roots of unity vanishes.
    Vanish {
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        exponents: Vec<i64>,
    },
}

enum Outcome {
    Holds,
    Fails,
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, io::Error),
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Input(m) => f.write_str(m),
        }
    }
}

fn input_error(path: &Path) -> impl Fn(Error) -> CliError + '_ {
    move |e| CliError::Input(format!("{}:{e}", path.display()))
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(path.into(), e))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))
    }
}

fn load(path: &Path) -> Result<Ecs, CliError> {
    let src = read_input(path)?;
    format::parse_auto(&src).map_err(|e| match e {
        Error::Parse { .. } => input_error(path)(e),
        other => CliError::Input(format!("{}: {other}", path.display())),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(path.into(), e))
}

fn render_ecs(ecs: &Ecs, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Text => format::to_text(ecs),
        OutputFormat::Json => format::to_json(ecs) + "\n",
    }
}

fn render_trace(trace: &ReductionTrace, out: &mut String) {
    for (i, s) in trace.steps.iter().enumerate() {
        let _ = writeln!(out, "{:>3}. split {} by {}", i + 1, s.parent, s.prime);
    }
}

fn run(cli: Cli, out: &mut String) -> Result<Outcome, CliError> {
    let fmt = cli.format;
    match cli.command {
        Command::Verify { input, scan_limit } => {
            let ecs = load(&input)?;
            let crt = verify_crt(&ecs);
            let scan = verify_scan_with_limit(&ecs, scan_limit).ok();
            let genfun = verify_genfun_with_limit(&ecs, scan_limit).ok();
            let report = scan.clone().unwrap_or_else(|| stats(&ecs));
            match fmt {
                OutputFormat::Json => {
                    let doc = json!({
                        "exact": crt,
                        "lcm": ecs.lcm(),
                        "density": report.density.to_string(),
                        "classes": ecs.len(),
                        "greatest_modulus": ecs.greatest_modulus(),
                        "greatest_modulus_count": report.greatest_modulus_count,
                        "maximal_moduli": report.maximal_moduli,
                        "verifiers": {
                            "scan": scan.as_ref().and_then(|r| r.is_exact),
                            "crt": crt,
                            "genfun": genfun,
                        },
                        "uncovered": report.uncovered,
                        "multiply_covered": report.multiply_covered,
                    });
                    let _ = writeln!(out, "{doc}");
                }
                OutputFormat::Text => {
                    let _ = writeln!(
                        out,
                        "{}, N={}, density={}",
                        if crt { "exact" } else { "not exact" },
                        ecs.lcm(),
                        report.density
                    );
                    let _ = writeln!(out, "classes: {}", ecs.len());
                    let _ = writeln!(
                        out,
                        "greatest modulus {} occurs {} times",
                        ecs.greatest_modulus(),
                        report.greatest_modulus_count
                    );
                    let maximal: Vec<String> =
                        report.maximal_moduli.iter().map(u64::to_string).collect();
                    let _ = writeln!(out, "maximal moduli: {}", maximal.join(" "));
                    let show = |b: Option<bool>| match b {
                        Some(b) => b.to_string(),
                        None => format!("skipped (N > {scan_limit})"),
                    };
                    let _ = writeln!(
                        out,
                        "verifiers: scan={} crt={} genfun={}",
                        show(scan.as_ref().and_then(|r| r.is_exact)),
                        crt,
                        show(genfun)
                    );
                    if let Some(r) = &scan {
                        if !r.uncovered.is_empty() {
                            let _ = writeln!(out, "uncovered: {}", join(&r.uncovered));
                        }
                        if !r.multiply_covered.is_empty() {
                            let _ =
                                writeln!(out, "multiply covered: {}", join(&r.multiply_covered));
                        }
                    }
                }
            }
            Ok(if crt { Outcome::Holds } else { Outcome::Fails })
        }
        Command::Reduce { input, trace } => {
            let ecs = load(&input)?;
            match reduce_to_trivial(&ecs) {
                Ok(t) => {
                    if let Some(p) = &trace {
                        write_file(p, &(t.to_json() + "\n"))?;
                    }
                    match fmt {
                        OutputFormat::Json => {
                            let _ = writeln!(out, "{}", t.to_json());
                        }
                        OutputFormat::Text => {
                            let _ = writeln!(out, "reduced to 0(1) in {} steps", t.len());
                            render_trace(&t, out);
                        }
                    }
                    Ok(Outcome::Holds)
                }
                Err(e @ (Error::NotExact | Error::NoEligibleMaximalModulus)) => {
                    match fmt {
                        OutputFormat::Json => {
                            let _ = writeln!(out, "{}", json!({ "error": e.to_string() }));
                        }
                        OutputFormat::Text => {
                            let _ = writeln!(out, "cannot reduce: {e}");
                        }
                    }
                    Ok(Outcome::Fails)
                }
                Err(e) => Err(CliError::Input(e.to_string())),
            }
        }
        Command::Irreducible { input } => {
            let ecs = load(&input)?;
            let irreducible = match is_irreducible(&ecs) {
                Ok(b) => b,
                Err(e) => {
                    let _ = writeln!(out, "{e}");
                    return Ok(Outcome::Fails);
                }
            };
            let candidates = merge_candidates(&ecs);
            match fmt {
                OutputFormat::Json => {
                    let doc = json!({ "irreducible": irreducible, "candidates": candidates });
                    let _ = writeln!(out, "{doc}");
                }
                OutputFormat::Text if irreducible => {
                    let _ = writeln!(out, "irreducible");
                }
                OutputFormat::Text if ecs.is_trivial() => {
                    let _ = writeln!(out, "trivial");
                }
                OutputFormat::Text => {
                    let list: Vec<String> =
                        candidates.iter().map(MergeCandidate::to_string).collect();
                    let _ = writeln!(out, "reducible: {}", list.join(" "));
                }
            }
            Ok(if irreducible {
                Outcome::Holds
            } else {
                Outcome::Fails
            })
        }
        Command::Natural { input, trace } => {
            let ecs = load(&input)?;
            let found = match is_natural(&ecs) {
                Ok(f) => f,
                Err(e) => {
                    let _ = writeln!(out, "{e}");
                    return Ok(Outcome::Fails);
                }
            };
            if let (Some(p), Some(t)) = (&trace, &found) {
                write_file(p, &(t.to_json() + "\n"))?;
            }
            match fmt {
                OutputFormat::Json => {
                    let doc = json!({ "natural": found.is_some(), "trace": found });
                    let _ = writeln!(out, "{doc}");
                }
                OutputFormat::Text => match &found {
                    Some(t) => {
                        let _ = writeln!(out, "natural, {} steps", t.len());
                        render_trace(t, out);
                    }
                    None => {
                        let _ = writeln!(out, "not natural");
                    }
                },
            }
            Ok(if found.is_some() {
                Outcome::Holds
            } else {
                Outcome::Fails
            })
        }
        Command::Split {
            input,
            residue,
            modulus,
            arity,
        } => {
            let ecs = load(&input)?;
            let target =
                covsys::normalize(residue, modulus).map_err(|e| CliError::Input(e.to_string()))?;
            let result = split(&ecs, target, arity).map_err(|e| CliError::Input(e.to_string()))?;
            out.push_str(&render_ecs(&result, fmt));
            Ok(Outcome::Holds)
        }
        Command::Merge {
            input,
            modulus,
            prime,
            shift,
        } => {
            let ecs = load(&input)?;
            let c = MergeCandidate {
                modulus,
                prime,
                shift,
            };
            let result = merge(&ecs, c).map_err(|e| CliError::Input(e.to_string()))?;
            out.push_str(&render_ecs(&result, fmt));
            Ok(Outcome::Holds)
        }
        Command::Gen {
            seed,
            steps,
            primes,
            lcm,
            max_prime_factors,
            replay,
            trace,
        } => {
            let (ecs, t) = match replay {
                Some(p) => {
                    let src = read_input(&p)?;
                    let t = ReductionTrace::from_json(&src).map_err(input_error(&p))?;
                    let ecs = t.replay().map_err(input_error(&p))?;
                    (ecs, t)
                }
                None => {
                    let opts = GenOptions {
                        max_lcm: lcm,
                        max_prime_factors,
                    };
                    covsys::generate_natural_with(seed, steps, &primes, opts)
                        .map_err(|e| CliError::Input(e.to_string()))?
                }
            };
            if let Some(p) = &trace {
                write_file(p, &(t.to_json() + "\n"))?;
            }
            out.push_str(&render_ecs(&ecs, fmt));
            Ok(Outcome::Holds)
        }
        Command::Enumerate { lcm, limit, count } => {
            if count {
                let c = count_ecs(lcm, limit).map_err(|e| CliError::Input(e.to_string()))?;
                match fmt {
                    OutputFormat::Json => {
                        let _ = writeln!(out, "{}", json!({ "lcm": lcm, "count": c }));
                    }
                    OutputFormat::Text => {
                        let _ = writeln!(out, "{c}");
                    }
                }
                return Ok(Outcome::Holds);
            }
            let all =
                enumerate_ecs_with_limit(lcm, limit).map_err(|e| CliError::Input(e.to_string()))?;
            match fmt {
                OutputFormat::Json => {
                    let doc = json!({ "lcm": lcm, "count": all.len(), "systems": all });
                    let _ = writeln!(out, "{doc}");
                }
                OutputFormat::Text => {
                    let _ = writeln!(out, "# {} systems with moduli dividing {lcm}", all.len());
                    for e in &all {
                        let _ = writeln!(out, "{e}");
                    }
                }
            }
            Ok(Outcome::Holds)
        }
        Command::Vanish { modulus, exponents } => {
            let v = CycVector::from_exponents(modulus, &exponents)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let vanishes = covsys::vanishes(&v);
            let decomposition = if vanishes { decompose(&v).ok() } else { None };
            let cosets = contained_cosets(&v);
            match fmt {
                OutputFormat::Json => {
                    let doc = json!({
                        "modulus": modulus,
                        "vanishes": vanishes,
                        "decomposition": decomposition,
                        "contained_cosets": cosets,
                    });
                    let _ = writeln!(out, "{doc}");
                }
                OutputFormat::Text => {
                    let _ = writeln!(
                        out,
                        "{}",
                        if vanishes {
                            "vanishes"
                        } else {
                            "does not vanish"
                        }
                    );
                    let show = |ts: &[covsys::CosetTerm]| {
                        ts.iter()
                            .map(|t| format!("z^{}*sigma(P_{})", t.shift(), t.prime()))
                            .collect::<Vec<_>>()
                            .join(" + ")
                    };
                    if let Some(d) = &decomposition {
                        if !d.is_empty() {
                            let _ = writeln!(out, "decomposition: {}", show(d));
                        }
                    } else if vanishes {
                        let _ = writeln!(
                            out,
                            "no coset decomposition ({} contained cosets)",
                            cosets.len()
                        );
                    }
                }
            }
            Ok(if vanishes {
                Outcome::Holds
            } else {
                Outcome::Fails
            })
        }
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let mut out = String::new();
    let status = match run(cli, &mut out) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("covsys: {e}");
            return ExitCode::from(2);
        }
    };
    match output {
        Some(p) => {
            if let Err(e) = fs::write(&p, &out) {
                eprintln!("covsys: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{out}"),
    }
    status
}
