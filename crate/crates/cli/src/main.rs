//! `necklace`: exact tables, counts, simulation and self-checks for the
//! two-color necklace process.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use necklace_core::counting::{self, ENUMERATE_MAX};
use necklace_core::exactdist;
use necklace_core::montecarlo::{self, SimConfig, SimPath};
use necklace_core::series::to_frac_string;
use necklace_core::verify::{self, Level};
use necklace_core::Error;

const FORMAT_VERSION: &str = "1";

const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_CONSISTENCY: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "necklace",
    version,
    about = "Two-color necklace process: exact law, counts, simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GfForm {
    Coth,
    Exp,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact distribution P(W_n = k) as "num/den" strings.
    Dist {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n_max: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Emit integer process counts c_{n,k} instead of probabilities.
        #[arg(long)]
        counts: bool,
    },
    /// Exact mean and variance of white and black bead counts.
    Moments {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n_max: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Number of distinct necklaces against the golden-ratio main term.
    Count {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n_max: u64,
        /// Cross-check against brute-force enumeration for n ≤ K.
        #[arg(long, value_name = "K", default_value_t = 0,
              value_parser = clap::value_parser!(u64).range(0..=ENUMERATE_MAX as u64))]
        with_bruteforce_up_to: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Monte Carlo simulation of W_n.
    Simulate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Add a chi-square test against the exact law.
        #[arg(long)]
        check: bool,
        /// Track only (size, whites) instead of full bead sequences.
        #[arg(long)]
        fast: bool,
    },
    /// Run the consistency checks; nonzero exit if any fails.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: VerifyLevel,
    },
    /// Evaluate the closed-form bivariate generating function W(z,u).
    EvalGf {
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        #[arg(long, allow_negative_numbers = true)]
        u: f64,
        #[arg(long, value_enum, default_value = "coth")]
        form: GfForm,
        #[arg(long, default_value_t = verify::FALLBACK_TERMS)]
        fallback_terms: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// Failure with its exit-code class.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Pole(_) => EXIT_DOMAIN,
            Error::Consistency(_) => EXIT_CONSISTENCY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn envelope(command: &str, parameters: Value, payload: Value) -> String {
    let v = json!({
        "format_version": FORMAT_VERSION,
        "command": command,
        "parameters": parameters,
        "payload": payload,
    });
    // serde_json::Value orders keys, so reparsing and re-emitting is stable
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

fn cmd_dist(n_max: usize, format: Format, counts: bool) -> Result<String, Failure> {
    let entries = if counts {
        exactdist::process_counts(n_max)?.entries()
    } else {
        exactdist::dist_table(n_max)?.entries()
    };
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("n,k,value\n");
            for e in &entries {
                s.push_str(&csv_line(&[
                    e.n.to_string(),
                    e.k.to_string(),
                    e.value.clone(),
                ]));
            }
            s
        }
        Format::Json => envelope(
            "dist",
            json!({"n_max": n_max, "counts": counts}),
            serde_json::to_value(&entries).expect("serializable"),
        ),
    })
}

fn cmd_moments(n_max: usize, format: Format) -> Result<String, Failure> {
    let table = exactdist::dist_table(n_max)?;
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let w = exactdist::moments_white(n, &table)?;
        let b = exactdist::moments_black(n, &table)?;
        rows.push([
            n.to_string(),
            to_frac_string(&w.mean),
            to_frac_string(&w.variance),
            to_frac_string(&b.mean),
            to_frac_string(&b.variance),
        ]);
    }
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("n,white_mean,white_variance,black_mean,black_variance\n");
            for r in &rows {
                s.push_str(&csv_line(r));
            }
            s
        }
        Format::Json => {
            let payload = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r[0].parse::<u64>().expect("integer"),
                        "white_mean": r[1], "white_variance": r[2],
                        "black_mean": r[3], "black_variance": r[4],
                    })
                })
                .collect::<Vec<_>>();
            envelope("moments", json!({"n_max": n_max}), Value::Array(payload))
        }
    })
}

fn cmd_count(n_max: usize, brute: usize, format: Format) -> Result<String, Failure> {
    let rows = counting::count_rows(n_max, brute)?;
    let mismatch = rows.iter().find(|r| {
        r.bruteforce
            .is_some_and(|b| r.report.exact_count.to_string() != b.to_string())
    });
    let out = match format {
        Format::Csv => {
            let mut s =
                String::from("n,exact_count,estimate,relative_error,normalized_error,bruteforce\n");
            for r in &rows {
                let rep = &r.report;
                s.push_str(&csv_line(&[
                    rep.n.to_string(),
                    rep.exact_count.to_string(),
                    format!("{:e}", rep.estimate),
                    format!("{:e}", rep.relative_error),
                    format!("{:e}", rep.normalized_error),
                    r.bruteforce.map(|b| b.to_string()).unwrap_or_default(),
                ]));
            }
            s
        }
        Format::Json => envelope(
            "count",
            json!({"n_max": n_max, "with_bruteforce_up_to": brute}),
            serde_json::to_value(&rows).expect("serializable"),
        ),
    };
    if let Some(r) = mismatch {
        // emit what was computed, then fail
        print!("{out}");
        return Err(Failure {
            code: EXIT_CONSISTENCY,
            message: format!(
                "series count {} ≠ brute force {} at n={}",
                r.report.exact_count,
                r.bruteforce.unwrap_or_default(),
                r.report.n
            ),
        });
    }
    Ok(out)
}

fn cmd_simulate(
    n: usize,
    reps: u64,
    seed: u64,
    format: Format,
    check: bool,
    fast: bool,
) -> Result<String, Failure> {
    let path = if fast {
        SimPath::WhiteCount
    } else {
        SimPath::Beads
    };
    let summary = montecarlo::run(&SimConfig::new(n, reps, seed).with_path(path))?;
    let chi = if check {
        let table = exactdist::dist_table(n)?;
        Some(montecarlo::chi_square(&summary, &table)?)
    } else {
        None
    };
    Ok(match format {
        Format::Csv => {
            if let Some(c) = &chi {
                eprintln!(
                    "chi_square={} dof={} critical_999={} p_value={}",
                    c.statistic, c.dof, c.critical_999, c.p_value
                );
            }
            summary.histogram_csv()
        }
        Format::Json => {
            let mut payload = match serde_json::to_value(&summary).expect("serializable") {
                Value::Object(m) => m,
                _ => Map::new(),
            };
            if let Some(c) = &chi {
                payload.insert(
                    "chi_square".into(),
                    serde_json::to_value(c).expect("serializable"),
                );
            }
            envelope(
                "simulate",
                json!({"n": n, "reps": reps, "seed": seed, "check": check,
                       "path": serde_json::to_value(path).expect("serializable")}),
                Value::Object(payload),
            )
        }
    })
}

fn cmd_verify(level: VerifyLevel) -> Result<String, Failure> {
    let level = match level {
        VerifyLevel::Quick => Level::Quick,
        VerifyLevel::Full => Level::Full,
    };
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for o in verify::run_checks(level) {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag} {} ({:.2}s): {}", o.name, o.seconds, o.detail);
        if !o.passed {
            failed.push(o.name);
        }
    }
    if failed.is_empty() {
        Ok(String::new())
    } else {
        Err(Failure {
            code: EXIT_CONSISTENCY,
            message: format!("failed checks: {}", failed.join(", ")),
        })
    }
}

fn cmd_eval_gf(
    z: f64,
    u: f64,
    form: GfForm,
    terms: usize,
    format: Format,
) -> Result<String, Failure> {
    let value = match form {
        GfForm::Coth => exactdist::closed_form_eval(z, u, terms)?,
        GfForm::Exp => exactdist::closed_form_eval_symmetric(z, u, terms)?,
    };
    let form_name = match form {
        GfForm::Coth => "coth",
        GfForm::Exp => "exp",
    };
    Ok(match format {
        Format::Csv => format!("z,u,form,value\n{z},{u},{form_name},{value}\n"),
        Format::Json => envelope(
            "eval-gf",
            json!({"z": z, "u": u, "form": form_name, "fallback_terms": terms}),
            json!({"value": value}),
        ),
    })
}

fn configure_threads() {
    if let Ok(v) = std::env::var("NECKLACE_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => eprintln!("ignoring NECKLACE_THREADS={v:?}: expected a positive integer"),
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Dist {
            n_max,
            format,
            counts,
        } => cmd_dist(n_max as usize, format, counts),
        Command::Moments { n_max, format } => cmd_moments(n_max as usize, format),
        Command::Count {
            n_max,
            with_bruteforce_up_to,
            format,
        } => cmd_count(n_max as usize, with_bruteforce_up_to as usize, format),
        Command::Simulate {
            n,
            reps,
            seed,
            format,
            check,
            fast,
        } => cmd_simulate(n as usize, reps, seed, format, check, fast),
        Command::Verify { level } => cmd_verify(level),
        Command::EvalGf {
            z,
            u,
            form,
            fallback_terms,
            format,
        } => cmd_eval_gf(z, u, form, fallback_terms, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
