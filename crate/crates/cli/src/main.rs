use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use deficit_core::analytic::{li, li_bound_check, EvaluatedBound, LiBound};
use deficit_core::bounds::make_certificate;
use deficit_core::coeffs::{b_coeff, parse_rational, t_coeff, thm21_expansion, thm29_coeff, thm29_expansion, u_polynomial};
use deficit_core::verify::{asymptotic_error_table, corollary_tables, hypothesis_spot_check};
use deficit_core::{AsymptoticExpansion, Checkpoint, Error, PrimeEngine, Rational};
use deficit::files::{load_ais, load_certificate, load_hypothesis, read_checkpoint, write_checkpoint, certificate_to_json};
use deficit::num::{approx, exact, real};
use deficit::parallel::verify_parallel;
use deficit::report::{self, Format, RunInfo};
use serde_json::json;

/// Exact prime deficits `C_n = n·p_n − Σ_{k≤n} p_k`, their asymptotic
/// expansions, and explicit bound certificates.
#[derive(Parser)]
#[command(name = "deficit", version)]
struct Cli {
    /// Largest integer the sieve may reach.
    #[arg(long, global = true, env = "DEFICIT_CAPACITY", default_value = "2000000000", value_parser = parse_count)]
    capacity: u64,
    /// Worker threads for range verification (default: all cores).
    #[arg(long, global = true, env = "DEFICIT_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Omit wall-clock timestamps so output is reproducible.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact C_n.
    #[command(subcommand)]
    Cn(CnCommand),
    /// Exact coefficients.
    #[command(subcommand)]
    Coeff(CoeffCommand),
    /// Symbolic expansions of C_n.
    #[command(subcommand)]
    Expand(ExpandCommand),
    /// Logarithmic integral with an error bound.
    Li {
        #[arg(long, value_parser = parse_real)]
        x: f64,
        #[arg(long, default_value_t = 1e-13)]
        rel_tol: f64,
    },
    /// Margin of an explicit li inequality at x.
    LemmaCheck {
        /// lower-4171, upper-1e16 or upper-1e18
        #[arg(long, value_parser = parse_li_bound)]
        which: LiBound,
        #[arg(long, value_parser = parse_real)]
        x: f64,
    },
    /// Build a certificate from a hypothesis (prop53, prop56 or a JSON file).
    Certify {
        #[arg(long)]
        hypothesis: String,
        /// Also write the certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate (prop53, prop56 or a JSON file) on an n-range.
    Verify {
        #[arg(long)]
        cert: String,
        /// Inclusive, e.g. 1..100000
        #[arg(long, value_parser = parse_range)]
        range: (u64, u64),
    },
    /// Empirical tables.
    #[command(subcommand)]
    Tables(TablesCommand),
    /// Sample a hypothesis's π inequality with exact π(x).
    SpotCheck {
        #[arg(long)]
        hypothesis: String,
        #[arg(long, value_delimiter = ',', value_parser = parse_real, required = true)]
        x: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum CnCommand {
    /// C_n for one n.
    Exact {
        #[arg(long, value_parser = parse_count)]
        n: u64,
    },
    /// One record per n in a range, resumable.
    Stream {
        #[arg(long, value_parser = parse_count)]
        from: u64,
        #[arg(long, value_parser = parse_count)]
        to: u64,
        /// Start from a saved checkpoint at or before `from`.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Keep a checkpoint of the latest state here.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Records between checkpoint writes.
        #[arg(long, default_value = "1000000", value_parser = parse_count)]
        every: u64,
    },
}

#[derive(Subcommand)]
enum CoeffCommand {
    /// b_{s,i,j,r}
    B {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        r: u32,
    },
    /// t_{i,j} for a = a₂,a₃,… (comma separated rationals)
    T {
        #[arg(long, value_delimiter = ',', value_parser = parse_rat, required = true)]
        a: Vec<Rational>,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
    },
    /// Coefficient of p²/log^k p in the expansion of C_n.
    Thm29 {
        #[arg(long)]
        k: u32,
    },
    /// U_s from an a_is table (builtin-m2 or a JSON file).
    UPoly {
        #[arg(long)]
        s: u32,
        #[arg(long, default_value = "builtin-m2")]
        ais: String,
    },
}

#[derive(Subcommand)]
enum ExpandCommand {
    /// C_n/(n²/2) in log n and log log n.
    Thm21 {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "builtin-m2")]
        ais: String,
    },
    /// C_n in powers of 1/log p_n.
    Thm29 {
        #[arg(long)]
        m: u32,
    },
}

#[derive(Subcommand)]
enum TablesCommand {
    /// Normalized error of the order-m truncation.
    Thm29 {
        #[arg(long)]
        m: u32,
        #[arg(long, value_delimiter = ',', value_parser = parse_count, required = true)]
        points: Vec<u64>,
    },
    /// Σp_k against li(p_n²) and π(p_n²).
    Corollary {
        #[arg(long, value_delimiter = ',', value_parser = parse_count, required = true)]
        points: Vec<u64>,
        #[command(flatten)]
        pi: PiColumn,
    },
}

#[derive(Args)]
struct PiColumn {
    /// Sieve capacity for the π(p_n²) column; 0 disables it.
    #[arg(long, default_value = "20000000000", value_parser = parse_count)]
    pi_capacity: u64,
}

/// Integers, also written as `1e6` or `1_000_000`.
fn parse_count(s: &str) -> Result<u64, String> {
    let r = parse_rational(&s.replace('_', "")).map_err(|e| e.to_string())?;
    if !r.is_integer() {
        return Err(format!("{s} is not an integer"));
    }
    r.to_integer().try_into().map_err(|_| format!("{s} is not a nonnegative 64-bit integer"))
}

fn parse_real(s: &str) -> Result<f64, String> {
    s.parse().map_err(|_| format!("{s} is not a number"))
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok((parse_count(a)?, parse_count(b)?))
}

fn parse_li_bound(s: &str) -> Result<LiBound, String> {
    LiBound::from_name(s).ok_or_else(|| {
        let names: Vec<_> = LiBound::ALL.iter().map(|b| b.name()).collect();
        format!("unknown bound {s}; expected one of {}", names.join(", "))
    })
}

fn timestamp(cli: &Cli) -> Option<u64> {
    (!cli.no_timestamp).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}

fn engine(capacity: u64) -> Result<PrimeEngine> {
    Ok(PrimeEngine::with_capacity(capacity)?)
}

fn expansion_json(e: &AsymptoticExpansion) -> serde_json::Value {
    let terms: Vec<_> = e
        .terms()
        .map(|t| json!({ "coeff": t.coeff.to_string(), "invLogPower": t.inv_log_power, "logLogPower": t.loglog_power }))
        .collect();
    json!({ "scale": e.scale().to_string(), "remainder": e.remainder().to_string(), "terms": terms, "display": e.to_string() })
}

/// Returns the process exit code for a successful run.
fn run(cli: &Cli) -> Result<i32> {
    let mut out = io::stdout().lock();
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Cn(CnCommand::Exact { n }) => {
            if *n == 0 {
                bail!(Error::Domain("C_n is defined for n >= 1".into()));
            }
            let cp = engine(cli.capacity)?.advance_to(*n)?;
            if csv {
                writeln!(out, "n,p_n,prime_sum,c_n,step_integral")?;
                writeln!(out, "{},{},{},{},{}", cp.n, cp.p, cp.sum, cp.c, cp.step_integral)?;
            } else {
                report::write_json(
                    out,
                    &json!({
                        "n": exact(cp.n),
                        "pN": exact(cp.p),
                        "primeSum": exact(cp.sum),
                        "cN": exact(cp.c),
                        "stepIntegral": exact(cp.step_integral),
                    }),
                )?;
            }
        }
        Command::Cn(CnCommand::Stream { from, to, resume, checkpoint, every }) => {
            let e = engine(cli.capacity)?;
            let start = match resume {
                Some(path) => read_checkpoint(path)?,
                None => Checkpoint::ORIGIN,
            };
            if *from == 0 || from > to {
                bail!(Error::Domain(format!("need 1 <= from <= to, got {from}..{to}")));
            }
            if start.n > *from {
                bail!(Error::Domain(format!("checkpoint at n = {} is past --from {from}", start.n)));
            }
            let every = (*every).max(1);
            let mut w = io::BufWriter::new(out);
            if csv {
                writeln!(w, "n,p_n,prime_sum,c_n")?;
            }
            let mut stream = e.stream(&start)?;
            if start.n == *from {
                if let Some(rec) = start.record() {
                    emit(&mut w, csv, &rec)?;
                }
            }
            let mut since = 0;
            while stream.checkpoint().n < *to {
                let rec = stream
                    .next()
                    .ok_or(Error::Capacity { what: "prime index", needed: *to, capacity: e.capacity() })??;
                if rec.n >= *from {
                    emit(&mut w, csv, &rec)?;
                }
                since += 1;
                if let (Some(path), true) = (checkpoint, since >= every) {
                    w.flush()?;
                    write_checkpoint(path, &stream.checkpoint())?;
                    since = 0;
                }
            }
            w.flush()?;
            if let Some(path) = checkpoint {
                write_checkpoint(path, &stream.checkpoint())?;
            }
        }
        Command::Coeff(c) => {
            let (label, value) = match c {
                CoeffCommand::B { s, i, j, r } => (format!("b_{{{s},{i},{j},{r}}}"), b_coeff(*s, *i, *j, *r)?.to_string()),
                CoeffCommand::T { a, i, j } => (format!("t_{{{i},{j}}}"), t_coeff(a, *i, *j)?.to_string()),
                CoeffCommand::Thm29 { k } => (format!("k={k}"), thm29_coeff(*k)?.to_string()),
                CoeffCommand::UPoly { s, ais } => {
                    let u = u_polynomial(*s, &load_ais(ais)?)?;
                    let coeffs: Vec<String> = u.coeffs().iter().map(|c| c.to_string()).collect();
                    if csv {
                        writeln!(out, "s,polynomial")?;
                        writeln!(out, "{s},{u}")?;
                    } else {
                        report::write_json(out, &json!({ "s": s, "polynomial": u.to_string(), "coeffs": coeffs }))?;
                    }
                    return Ok(0);
                }
            };
            if csv {
                writeln!(out, "coefficient,value")?;
                writeln!(out, "\"{label}\",{value}")?;
            } else {
                report::write_json(out, &json!({ "coefficient": label, "value": value, "exact": true }))?;
            }
        }
        Command::Expand(x) => {
            let e = match x {
                ExpandCommand::Thm21 { m, ais } => thm21_expansion(*m, &load_ais(ais)?)?,
                ExpandCommand::Thm29 { m } => thm29_expansion(*m)?,
            };
            if csv {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["coeff", "inv_log_power", "loglog_power"])?;
                for t in e.terms() {
                    w.write_record([t.coeff.to_string(), t.inv_log_power.to_string(), t.loglog_power.to_string()])?;
                }
                w.flush()?;
            } else {
                report::write_json(out, &expansion_json(&e))?;
            }
        }
        Command::Li { x, rel_tol } => {
            let v = li(*x, *rel_tol)?;
            scalar(out, csv, "li", *x, v)?;
        }
        Command::LemmaCheck { which, x } => {
            let m = li_bound_check(*which, *x)?;
            scalar(out, csv, which.name(), *x, m)?;
            return Ok(if m.lower() >= 0.0 {
                0
            } else if m.upper() < 0.0 {
                1
            } else {
                3
            });
        }
        Command::Certify { hypothesis, out: path } => {
            let h = load_hypothesis(hypothesis)?;
            let c = make_certificate(&h, &engine(cli.capacity)?)?;
            let text = certificate_to_json(&c);
            if let Some(path) = path {
                std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            writeln!(out, "{text}")?;
        }
        Command::Verify { cert, range: (a, b) } => {
            let c = load_certificate(cert)?;
            let e = engine(cli.capacity)?;
            let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.workers.unwrap_or(0)).build()?;
            let started = Instant::now();
            let r = pool.install(|| verify_parallel(&e, &c, *a, *b))?;
            let info = RunInfo {
                seconds: started.elapsed().as_secs_f64(),
                workers: pool.current_num_threads(),
                timestamp: timestamp(cli),
            };
            report::write_report(out, &r, &info, cli.format)?;
            return Ok(report::exit_code(r.status()));
        }
        Command::Tables(TablesCommand::Thm29 { m, points }) => {
            let rows = asymptotic_error_table(&engine(cli.capacity)?, *m, points)?;
            let rows: Vec<_> = rows.iter().map(report::asymptotic_row).collect();
            report::write_table(out, report::ASYMPTOTIC_HEADER, &rows, cli.format)?;
        }
        Command::Tables(TablesCommand::Corollary { points, pi }) => {
            let pi_engine = match pi.pi_capacity {
                0 => None,
                cap => Some(engine(cap)?),
            };
            let rows = corollary_tables(&engine(cli.capacity)?, points, pi_engine.as_ref())?;
            let rows: Vec<_> = rows.iter().map(report::corollary_row).collect();
            report::write_table(out, report::COROLLARY_HEADER, &rows, cli.format)?;
        }
        Command::SpotCheck { hypothesis, x } => {
            let h = load_hypothesis(hypothesis)?;
            let checks = hypothesis_spot_check(&h, &engine(cli.capacity)?, x)?;
            let rows: Vec<_> = checks.iter().map(report::spot_row).collect();
            report::write_table(out, report::SPOT_HEADER, &rows, cli.format)?;
            let in_domain = checks.iter().filter(|s| !s.below_cutoff);
            return Ok(if in_domain.clone().all(|s| s.holds()) {
                0
            } else if in_domain.clone().any(|s| s.margin.upper() < 0.0) {
                1
            } else {
                3
            });
        }
    }
    Ok(0)
}

fn emit<W: Write>(w: &mut W, csv: bool, rec: &deficit_core::PrimeRecord) -> io::Result<()> {
    if csv {
        writeln!(w, "{},{},{},{}", rec.n, rec.p, rec.sum, rec.c)
    } else {
        // one JSON object per line
        writeln!(w, r#"{{"n":"{}","pN":"{}","primeSum":"{}","cN":"{}","exact":true}}"#, rec.n, rec.p, rec.sum, rec.c)
    }
}

fn scalar<W: Write>(out: W, csv: bool, name: &str, x: f64, v: EvaluatedBound) -> Result<()> {
    if csv {
        let mut out = out;
        writeln!(out, "quantity,x,value,abs_err")?;
        writeln!(out, "{name},{},{},{}", real(x), real(v.value), real(v.abs_err))?;
        Ok(())
    } else {
        report::write_json(out, &json!({ "quantity": name, "x": real(x), "result": approx(v) }))
    }
}

fn exit_for(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Capacity { .. } | Error::Overflow { .. }) => 4,
        Some(Error::Precision(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_for(&err))
        }
    }
}

