use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use eostrata_core::dieudonne::{classify, ModuleFile};
use eostrata_core::hasse::{bruhat_descendants, check_inequality, hasse_exponents};
use eostrata_core::parabolic::{max_admissible_j, sigma_of};
use eostrata_core::schubert::{in_closed_cell, in_open_cell, FlagFile};
use eostrata_core::verify::{run_check, Check};
use eostrata_core::weyl::w_i_reps;
use eostrata_core::{Error, SignedPermutation, SubsetJ};

/// Ekedahl-Oort strata, Hasse exponents and Schubert cells for `GSp_{2g}`.
#[derive(Parser, Debug)]
#[command(name = "eostrata", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One row per stratum `w ∈ W^I`, ordered by length then images.
    Strata {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify a quasi-polarized BT₁ given as a Dieudonné module file.
    Classify {
        #[arg(long)]
        module: PathBuf,
    },
    /// Bruhat descendants of an admissible pair, with positivity values when `--p` is given.
    Descendants {
        /// Images of `w`, e.g. `3,4,1,2`.
        #[arg(long)]
        w: String,
        /// Members of `J`, e.g. `1` or an empty string.
        #[arg(long, default_value = "")]
        j: String,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Test whether a flag lies in `Y_w` or its closure.
    #[command(group(ArgGroup::new("cell").required(true).args(["open", "closed"])))]
    Schubert {
        #[arg(long)]
        flag: PathBuf,
        #[arg(long)]
        w: String,
        #[arg(long, default_value = "")]
        j: String,
        #[arg(long)]
        open: bool,
        #[arg(long)]
        closed: bool,
    },
    /// Run exhaustive verification sweeps.
    Verify {
        #[arg(long = "g-max")]
        g_max: usize,
        /// Comma-separated primes.
        #[arg(long = "p", default_value = "2,3")]
        primes: String,
        /// Comma-separated subset of weights, inequality, descendants, roundtrip, bruhat, schubert.
        #[arg(long = "check", default_value = "weights,inequality,descendants,roundtrip,bruhat,schubert")]
        checks: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<String, Failure>;

#[derive(Serialize)]
struct StratumRow {
    w: Vec<usize>,
    length: usize,
    #[serde(rename = "Jw")]
    jw: Vec<usize>,
    sigma: Vec<usize>,
    #[serde(rename = "N")]
    n: u32,
    total_weight: i128,
    c: Vec<i128>,
    descendant_count: usize,
}

fn parse_list(text: &str, what: &str) -> Result<Vec<usize>, Failure> {
    let trimmed = text.trim().trim_start_matches('[').trim_end_matches(']');
    trimmed
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Failure::Usage(format!("{what}: {s:?} is not a non-negative integer")))
        })
        .collect()
}

fn parse_w(text: &str) -> Result<SignedPermutation, Failure> {
    let images = parse_list(text, "--w")?;
    Ok(SignedPermutation::new(&images)?)
}

fn parse_j(text: &str, g: usize) -> Result<SubsetJ, Failure> {
    let members = parse_list(text, "--j")?;
    Ok(SubsetJ::new(g, &members)?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("cannot parse {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn join(values: impl IntoIterator<Item = impl ToString>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

fn stratum_rows(g: usize, p: u64) -> Result<Vec<StratumRow>, Failure> {
    if g == 0 || g > eostrata_core::weyl::MAX_RANK {
        return Err(Failure::Usage(format!("--g must be in 1..={}", eostrata_core::weyl::MAX_RANK)));
    }
    if !eostrata_core::field::is_prime(p) {
        return Err(Failure::Usage(format!("--p {p} is not a prime")));
    }
    let mut reps = w_i_reps(g);
    reps.sort_by_key(|w| (w.length(), w.images()));
    reps.iter()
        .map(|w| {
            let jw = max_admissible_j(w)?;
            let pair = sigma_of(w, &jw)?;
            let ex = hasse_exponents(&pair, p)?;
            let total_weight = (p as i128)
                .checked_pow(ex.n)
                .ok_or(Error::Overflow("p^N"))?
                - 1;
            Ok(StratumRow {
                w: w.images(),
                length: w.length(),
                jw: jw.members(),
                sigma: pair.sigma.clone(),
                n: ex.n,
                total_weight,
                c: ex.coeffs,
                descendant_count: bruhat_descendants(&pair).len(),
            })
        })
        .collect()
}

fn cmd_strata(g: usize, p: u64, format: Format) -> Outcome {
    let rows = stratum_rows(g, p)?;
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("w,length,Jw,sigma,N,total_weight,c,descendant_count");
            for r in &rows {
                write!(
                    out,
                    "\n{},{},{},{},{},{},{},{}",
                    join(&r.w),
                    r.length,
                    join(&r.jw),
                    join(&r.sigma),
                    r.n,
                    r.total_weight,
                    join(&r.c),
                    r.descendant_count
                )
                .expect("writing to a String");
            }
            out
        }
    })
}

fn cmd_classify(path: &Path) -> Outcome {
    let file: ModuleFile = read_json(path)?;
    let module = file.into_module()?;
    let (w, j) = classify(&module)?;
    let pair = sigma_of(&w, &j)?;
    Ok(to_json(&json!({
        "w": w.images(),
        "J": j.members(),
        "k": pair.datum.k,
        "sigma": pair.sigma,
    })))
}

fn cmd_descendants(w: &str, j: &str, p: Option<u64>) -> Outcome {
    let w = parse_w(w)?;
    let j = parse_j(j, w.rank())?;
    let pair = sigma_of(&w, &j)?;
    let values = p.map(|p| check_inequality(&pair, p)).transpose()?;
    let exponents = p.map(|p| hasse_exponents(&pair, p)).transpose()?;
    let descendants: Vec<_> = bruhat_descendants(&pair)
        .into_iter()
        .map(|rec| {
            let mut entry = json!({ "v": rec.v.images(), "kind": rec.kind, "ords": rec.ords });
            if let Some(values) = &values {
                entry["value"] = json!(values[&rec.v]);
            }
            entry
        })
        .collect();
    let mut report = json!({
        "w": w.images(),
        "J": j.members(),
        "sigma": pair.sigma,
        "tau": pair.tau,
        "descendants": descendants,
    });
    if let (Some(p), Some(ex)) = (p, exponents) {
        report["p"] = json!(p);
        report["N"] = json!(ex.n);
        report["c"] = json!(ex.coeffs);
    }
    Ok(to_json(&report))
}

fn cmd_schubert(flag: &Path, w: &str, j: &str, open: bool) -> Outcome {
    let file: FlagFile = read_json(flag)?;
    let flag = file.into_flag()?;
    let w = parse_w(w)?;
    let j = parse_j(j, w.rank())?;
    let member = if open {
        in_open_cell(&flag, &w, &j)?
    } else {
        in_closed_cell(&flag, &w, &j)?
    };
    Ok(to_json(&json!({
        "w": w.images(),
        "J": j.members(),
        "cell": if open { "open" } else { "closed" },
        "member": member,
    })))
}

fn cmd_verify(g_max: usize, primes: &str, checks: &str) -> Result<(String, bool), Failure> {
    let primes: Vec<u64> = parse_list(primes, "--p")?.into_iter().map(|p| p as u64).collect();
    let mut selected = Vec::new();
    for name in checks.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let check: Check = name.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
        if !selected.contains(&check) {
            selected.push(check);
        }
    }
    if selected.is_empty() {
        return Err(Failure::Usage("--check needs at least one check".into()));
    }
    let mut lines = Vec::new();
    let mut all_passed = true;
    for check in selected {
        let report = run_check(check, g_max, &primes)?;
        all_passed &= report.passed();
        let mut line = json!({ "check": report.check, "cases": report.cases, "passed": report.passed() });
        if let Some(cx) = &report.counterexample {
            line["counterexample"] = cx.clone();
        }
        lines.push(line.to_string());
    }
    Ok((lines.join("\n"), all_passed))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Strata { g, p, format } => cmd_strata(g, p, format),
        Command::Classify { module } => cmd_classify(&module),
        Command::Descendants { w, j, p } => cmd_descendants(&w, &j, p),
        Command::Schubert { flag, w, j, open, .. } => cmd_schubert(&flag, &w, &j, open),
        Command::Verify { g_max, primes, checks } => {
            let (text, passed) = cmd_verify(g_max, &primes, &checks)?;
            println!("{text}");
            if passed {
                Ok(String::new())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            if !text.is_empty() {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
