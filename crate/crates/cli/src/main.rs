//! Command line front end: expand catalog expressions, compute Hankel
//! determinant sequences and J-fractions, guess algebraic equations, and run
//! the verification catalog.
//!
//! Exit codes: 0 success (all checks pass), 1 a verify check failed,
//! 2 usage error, 3 computation error.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hdcalc::algebraic::guess_algebraic;
use hdcalc::hankel::{hankel_sequence, required_order};
use hdcalc::jfraction::{detect_periodicity, stieltjes_expand, EPSeq};
use hdcalc::verify::{list_checks, run_checks, spec_for, CheckReport, Status};
use hdcalc::{expand, parse, Coeff, Error, Modulus, Ring, Series};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hdcalc", version, about = "Exact Hankel determinant calculator", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand an expression into a truncated power series
    Expand {
        /// Series expression, e.g. "P2" or "(1-sqrt(1-4*x))/(2*x)"
        expr: String,
        /// Truncation order (series carries coefficients 0..=N)
        #[arg(long)]
        order: usize,
        /// Reduce the exact expansion modulo a prime power
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the output to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hankel determinants H_0..H_n of an expression
    Hankel {
        expr: String,
        /// Largest determinant size
        #[arg(long)]
        n: usize,
        /// Row offset k: determinants of (a_{k+i+j})
        #[arg(long, default_value_t = 0)]
        offset: usize,
        /// Compute in Z/m instead of exactly
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// J-fraction rows u_1..u_d, v_0..v_d via the Stieltjes algorithm
    Jfrac {
        expr: String,
        /// Number of levels to expand
        #[arg(long)]
        depth: usize,
        /// Report conjectured eventual periods of the u and v rows
        #[arg(long)]
        detect_period: bool,
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Guess a bivariate algebraic equation P(x, f) = 0 from coefficients
    Guess {
        expr: String,
        /// Degree bound in x
        #[arg(long)]
        dx: usize,
        /// Degree bound in f
        #[arg(long)]
        df: usize,
        /// Extra coefficients the guess must also annihilate
        #[arg(long, default_value_t = 20)]
        margin: usize,
        /// Expansion order (default: just enough for the bounds plus margin)
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run catalog checks (all of them when no ids are given)
    Verify {
        /// Check ids, e.g. T1.2 P3.6
        ids: Vec<String>,
        /// Override the per-check default order
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the check catalog with default orders and parameters
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::UnknownCheck(_) | Error::InvalidModulus(_) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(cmd: Cmd) -> hdcalc::Result<ExitCode> {
    match cmd {
        Cmd::Expand { expr, order, modulus, format, out } => {
            let ring = ring_of(modulus)?;
            let f = expand(&parse(&expr)?, order, ring)?;
            emit(out.as_deref(), &render_series(&f, format))
        }
        Cmd::Hankel { expr, n, offset, modulus, format, out } => {
            let ring = ring_of(modulus)?;
            let f = expand(&parse(&expr)?, required_order(n, offset), ring)?;
            let hs = hankel_sequence(&f, n, offset)?;
            emit(out.as_deref(), &render_hankel(&expr, &hs, offset, ring, format))
        }
        Cmd::Jfrac { expr, depth, detect_period, modulus, format, out } => {
            let ring = ring_of(modulus)?;
            let f = expand(&parse(&expr)?, 2 * depth, ring)?;
            let j = stieltjes_expand(&f, depth)?;
            let text = render_jfrac(&j.u, &j.v, depth, detect_period, format)?;
            emit(out.as_deref(), &text)
        }
        Cmd::Guess { expr, dx, df, margin, order, format, out } => {
            let order = order.unwrap_or((dx + 1) * (df + 1) + margin);
            let f = expand(&parse(&expr)?, order, Ring::Rationals)?;
            let p = guess_algebraic(&f, dx, df, margin)?;
            emit(out.as_deref(), &render_guess(p.as_ref(), dx, df, margin, order, format))
        }
        Cmd::Verify { ids, order, format, out } => {
            let mut specs = if ids.is_empty() {
                list_checks()
            } else {
                ids.iter().map(|id| spec_for(id)).collect::<hdcalc::Result<Vec<_>>>()?
            };
            if let Some(n) = order {
                for s in &mut specs {
                    s.default_order = n;
                }
            }
            let reports = run_checks(&specs)?;
            emit(out.as_deref(), &render_reports(&reports, format))?;
            if reports.iter().any(|r| r.status == Status::Fail) {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::List { format, out } => {
            let specs = list_checks();
            let text = match format {
                Format::Text => {
                    let mut s = String::new();
                    for spec in &specs {
                        s.push_str(&format!(
                            "{:<12} order={:<4} {}\n",
                            spec.id,
                            spec.default_order,
                            params_line(&spec.params)
                        ));
                    }
                    s
                }
                Format::Csv => {
                    let mut s = String::from("id,order,params\n");
                    for spec in &specs {
                        s.push_str(&format!(
                            "{},{},{}\n",
                            spec.id,
                            spec.default_order,
                            csv_quote(&params_line(&spec.params))
                        ));
                    }
                    s
                }
                Format::Json => pretty(&serde_json::to_value(&specs).expect("specs serialize")),
            };
            emit(out.as_deref(), &text)
        }
    }
}

fn ring_of(modulus: Option<u64>) -> hdcalc::Result<Ring> {
    match modulus {
        None => Ok(Ring::Rationals),
        Some(m) => Ok(Ring::Residues(Modulus::new(m)?)),
    }
}

fn ring_name(ring: Ring) -> String {
    match ring {
        Ring::Rationals => "Q".to_string(),
        Ring::Residues(md) => format!("Z/{}", md.m()),
    }
}

fn emit(out: Option<&std::path::Path>, text: &str) -> hdcalc::Result<ExitCode> {
    match out {
        None => print!("{text}"),
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn params_line(params: &BTreeMap<String, String>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_series(f: &Series, format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = format!("# ring={} order={}\n", ring_name(f.ring()), f.order());
            for c in f.coeffs() {
                s.push_str(&format!("{c}\n"));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("n,coeff\n");
            for (i, c) in f.coeffs().iter().enumerate() {
                s.push_str(&format!("{i},{c}\n"));
            }
            s
        }
        Format::Json => {
            let coeffs: Vec<String> = f.coeffs().iter().map(|c| c.to_string()).collect();
            pretty(&json!({
                "ring": ring_name(f.ring()),
                "order": f.order(),
                "coeffs": coeffs,
            }))
        }
    }
}

fn render_hankel(expr: &str, hs: &[Coeff], offset: usize, ring: Ring, format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = format!("# ring={} offset={}\n", ring_name(ring), offset);
            for (n, h) in hs.iter().enumerate() {
                s.push_str(&format!("H_{n} = {h}\n"));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("n,k,H\n");
            for (n, h) in hs.iter().enumerate() {
                s.push_str(&format!("{n},{offset},{h}\n"));
            }
            s
        }
        Format::Json => {
            let values: Vec<String> = hs.iter().map(|h| h.to_string()).collect();
            pretty(&json!({
                "expr": expr,
                "n": hs.len() - 1,
                "offset": offset,
                "ring": ring_name(ring),
                "values": values,
            }))
        }
    }
}

fn render_jfrac(
    u: &EPSeq,
    v: &EPSeq,
    depth: usize,
    detect_period: bool,
    format: Format,
) -> hdcalc::Result<String> {
    let u_vals = u.take(depth)?;
    let v_vals = v.take(depth + 1)?;
    // Heuristic only: a detected period is a conjecture, never an assertion.
    let conjecture = |vals: &[Coeff]| -> Option<String> {
        detect_periodicity(vals, 3).map(|ep| ep.to_star())
    };
    let (cu, cv) = if detect_period {
        (conjecture(&u_vals), conjecture(&v_vals))
    } else {
        (None, None)
    };
    Ok(match format {
        Format::Text => {
            let mut s = format!("u: {}\nv: {}\n", EPSeq::finite(u_vals).to_pipe(), EPSeq::finite(v_vals).to_pipe());
            if detect_period {
                s.push_str(&format!(
                    "u period (conjectural): {}\n",
                    cu.as_deref().unwrap_or("none found")
                ));
                s.push_str(&format!(
                    "v period (conjectural): {}\n",
                    cv.as_deref().unwrap_or("none found")
                ));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("row,index,value\n");
            for (i, c) in u_vals.iter().enumerate() {
                s.push_str(&format!("u,{},{c}\n", i + 1));
            }
            for (i, c) in v_vals.iter().enumerate() {
                s.push_str(&format!("v,{i},{c}\n"));
            }
            s
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("depth".into(), json!(depth));
            obj.insert("u".into(), json!(EPSeq::finite(u_vals).to_star()));
            obj.insert("v".into(), json!(EPSeq::finite(v_vals).to_star()));
            if detect_period {
                obj.insert("u_period_conjectural".into(), json!(cu));
                obj.insert("v_period_conjectural".into(), json!(cv));
            }
            pretty(&serde_json::Value::Object(obj))
        }
    })
}

fn render_guess(
    p: Option<&hdcalc::algebraic::BivarPoly>,
    dx: usize,
    df: usize,
    margin: usize,
    order: usize,
    format: Format,
) -> String {
    match format {
        Format::Text => match p {
            Some(p) => format!("P(x,f) = 0 with P = {p}\nvalidated through order {order} (margin {margin})\n"),
            None => format!("no equation within bounds dx={dx}, df={df}\n"),
        },
        Format::Csv => {
            let mut s = String::from("dx,df,margin,order,equation\n");
            let eq = p.map(|p| p.to_string()).unwrap_or_default();
            s.push_str(&format!("{dx},{df},{margin},{order},{}\n", csv_quote(&eq)));
            s
        }
        Format::Json => pretty(&json!({
            "df": df,
            "dx": dx,
            "equation": p.map(|p| p.to_string()),
            "margin": margin,
            "order": order,
        })),
    }
}

fn render_reports(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let status = match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Conjectural => "conjectural",
                };
                s.push_str(&format!(
                    "{:<12} {:<12} order={:<4} {:>6} ms  {}\n",
                    r.id, status, r.order, r.elapsed_ms, r.witness
                ));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("id,order,status,elapsed_ms,witness\n");
            for r in reports {
                let status = serde_json::to_value(r.status).expect("status serializes");
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.id,
                    r.order,
                    status.as_str().expect("status is a string"),
                    r.elapsed_ms,
                    csv_quote(&r.witness)
                ));
            }
            s
        }
        Format::Json => pretty(&serde_json::to_value(reports).expect("reports serialize")),
    }
}
