use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use circulant_core::circulant::parse_jump_list;
use circulant_core::enumerate::{
    family_verify, EnumerationOptions, EnumerationScope, FamilyParams,
};
use circulant_core::fixtures::{load_errata, load_fixtures, verify_fixtures, Label, RowOutcome};
use circulant_core::report::{emit, write_pairs_csv, Envelope};
use circulant_core::{
    apply, classify_pair, enumerate, orbit, reflexive_reduce, ConnectionSet, Error, Modulus,
    ThetaParams,
};

const EXIT_DOMAIN: u8 = 1;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(
    name = "circulant",
    version,
    about = "Circulant graph isomorphism toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reflexively reduce a list of jumps mod n.
    Reduce {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        set: Jumps,
        #[command(flatten)]
        out: JsonOut,
    },
    /// List the Adam orbit of a connection set with unit witnesses.
    Orbit {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        set: Jumps,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Apply theta_{n,m,t} and report the circulant image, if any.
    Theta {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        set: Jumps,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Classify a pair of connection sets.
    Classify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: Jumps,
        #[arg(long)]
        s: Jumps,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Enumerate Type-2 pairs and isomorphism classes for (n, m).
    Enumerate {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 3)]
        min_size: usize,
        /// seed-closure or exhaustive
        #[arg(long, default_value_t = EnumerationScope::SeedClosure)]
        scope: EnumerationScope,
        #[arg(long)]
        workers: Option<usize>,
        /// Write `n,m,R,S,t_witness` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Generate and verify an order-np^3 family.
    Family {
        #[arg(long)]
        p: u64,
        #[arg(long = "family-n")]
        family_n: u64,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Re-classify every row of a fixture file.
    VerifyFixtures {
        path: PathBuf,
        /// Errata file; defaults to errata.tsv next to the fixture file.
        #[arg(long)]
        errata: Option<PathBuf>,
        /// Ignore any errata file.
        #[arg(long, conflicts_with = "errata")]
        no_errata: bool,
        /// Print every row, not only failures.
        #[arg(long)]
        verbose: bool,
        #[command(flatten)]
        out: JsonOut,
    },
}

#[derive(Args)]
struct JsonOut {
    /// Emit the JSON envelope to a path, or `-` for stdout.
    #[arg(long)]
    json: Option<String>,
}

impl JsonOut {
    /// Emits the envelope when requested; returns whether stdout was taken.
    fn emit<T: Serialize>(
        &self,
        command: &str,
        params: serde_json::Value,
        result: T,
    ) -> Result<bool, Error> {
        match &self.json {
            Some(target) => {
                emit(target, &Envelope::new(command, params, result).to_json()?)?;
                Ok(target == "-")
            }
            None => Ok(false),
        }
    }
}

/// A `--set a,b,c` style list.
#[derive(Clone, Debug)]
struct Jumps(Vec<i64>);

impl std::str::FromStr for Jumps {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        parse_jump_list(text).map(Jumps).map_err(|e| e.to_string())
    }
}

fn set(n: Modulus, values: &[i64]) -> Result<ConnectionSet, Error> {
    ConnectionSet::from_values(n, values.iter().copied())
}

fn run(cli: Cli) -> Result<u8, Error> {
    let mut so = std::io::stdout().lock();
    match cli.command {
        Command::Reduce {
            n,
            set: Jumps(values),
            out,
        } => {
            let modulus = Modulus::new(n)?;
            let reduced = reflexive_reduce(modulus, values.iter().copied());
            if !out.emit("reduce", json!({"n": n, "set": values}), &reduced)? {
                writeln!(so, "{}", circulant_core::circulant::JumpList(&reduced))?;
            }
        }
        Command::Orbit {
            n,
            set: Jumps(values),
            out,
        } => {
            let c = set(Modulus::new(n)?, &values)?;
            let o = orbit(&c);
            let members: Vec<_> = o
                .iter()
                .map(|(s, x)| json!({"set": s.jumps(), "x": x}))
                .collect();
            if !out.emit("orbit", json!({"n": n, "set": values}), &members)? {
                for (s, x) in o.iter() {
                    writeln!(so, "{s}  x={x}")?;
                }
            }
        }
        Command::Theta {
            n,
            m,
            t,
            set: Jumps(values),
            out,
        } => {
            let modulus = Modulus::new(n)?;
            let c = set(modulus, &values)?;
            let image = apply(ThetaParams::new(modulus, m, t)?, &c)?;
            let result = json!({
                "circulant": image.circulant_result.is_some(),
                "set": image.circulant_result.as_ref().map(|s| s.jumps().to_vec()),
            });
            if !out.emit(
                "theta",
                json!({"n": n, "m": m, "t": t, "set": values}),
                result,
            )? {
                match &image.circulant_result {
                    Some(s) => writeln!(so, "{s}")?,
                    None => writeln!(so, "not circulant")?,
                }
            }
        }
        Command::Classify {
            n,
            r: Jumps(r),
            s: Jumps(s),
            out,
        } => {
            let modulus = Modulus::new(n)?;
            let verdict = classify_pair(&set(modulus, &r)?, &set(modulus, &s)?)?;
            if !out.emit("classify", json!({"n": n, "r": r, "s": s}), verdict)? {
                writeln!(so, "{verdict}")?;
            }
        }
        Command::Enumerate {
            n,
            m,
            min_size,
            scope,
            workers,
            csv,
            out,
        } => {
            let options = EnumerationOptions {
                min_size,
                scope,
                workers,
            };
            let report = enumerate(Modulus::new(n)?, m, &options)?;
            if let Some(path) = &csv {
                write_pairs_csv(&report, std::fs::File::create(path)?)?;
            }
            let params =
                json!({"n": n, "m": m, "min_size": min_size, "scope": scope, "workers": workers});
            if !out.emit("enumerate", params, &report)? {
                writeln!(so, "n={n} m={m} scope={scope} pairs={}", report.pair_count)?;
                writeln!(
                    so,
                    "exhaustive pairs={}",
                    report.scan_stats.exhaustive_pair_count
                )?;
                for (size, count) in report.class_sizes() {
                    writeln!(so, "classes of size {size}: {count}")?;
                }
            }
        }
        Command::Family {
            p,
            family_n,
            x,
            y,
            out,
        } => {
            let fp = FamilyParams::new(p, family_n, x, y)?;
            let v = family_verify(&fp)?;
            let params = json!({"p": p, "family_n": family_n, "x": x, "y": y});
            if !out.emit("family", params, &v)? {
                for (i, s) in v.sets.iter().enumerate() {
                    writeln!(so, "R_{} = {s}", i + 1)?;
                }
                for w in &v.table {
                    let image = w
                        .image
                        .as_ref()
                        .map_or("not circulant".to_string(), |s| s.to_string());
                    writeln!(
                        so,
                        "theta t={} R_{} -> {image} [{}]",
                        w.t,
                        w.i,
                        if w.holds { "ok" } else { "FAIL" }
                    )?;
                }
                writeln!(so, "type1-free: {}", v.type1_free)?;
                writeln!(so, "holds: {}", v.holds)?;
            }
            if !v.holds {
                return Ok(EXIT_DOMAIN);
            }
        }
        Command::VerifyFixtures {
            path,
            errata,
            no_errata,
            verbose,
            out,
        } => {
            let rows = load_fixtures(&path)?;
            let errata_rows = if no_errata {
                Vec::new()
            } else {
                match errata {
                    Some(p) => load_errata(&p)?,
                    None => {
                        let sibling = path.parent().unwrap_or(Path::new(".")).join("errata.tsv");
                        if sibling.exists() {
                            load_errata(&sibling)?
                        } else {
                            Vec::new()
                        }
                    }
                }
            };
            let report = verify_fixtures(&rows, &errata_rows);
            let params = json!({"path": path, "errata_rows": errata_rows.len()});
            if !out.emit("verify-fixtures", params, &report)? {
                for w in &report.warnings {
                    eprintln!("warning: {w}");
                }
                for r in &report.rows {
                    if verbose
                        || !matches!(r.outcome, RowOutcome::Match | RowOutcome::Overridden { .. })
                    {
                        writeln!(so, "{r}")?;
                    }
                }
                for e in &report.errata_failures {
                    writeln!(so, "{e}")?;
                }
                writeln!(
                    so,
                    "rows={} matched={} overridden={} mismatches={} T1={} T2={}",
                    report.rows.len(),
                    report.matched(),
                    report.overridden(),
                    report.mismatches(),
                    report.label_count(Label::T1),
                    report.label_count(Label::T2)
                )?;
            }
            if !report.is_clean() {
                return Ok(EXIT_MISMATCH);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Error::Io(e)) if e.kind() == ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}
