//! `leibniz`: batch front end for the leibniz-core computations.

mod sugar;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use leibniz_core::algebra_hs::{self, independence, Verdict};
use leibniz_core::algebra_m::{self, AlgebraM};
use leibniz_core::expr::symbols;
use leibniz_core::normal::{linearize, multiplicity};
use leibniz_core::pn::dim_pn;
use leibniz_core::report::Report;
use leibniz_core::young::{build_g, Partition};
use leibniz_core::{normalize, parse_in, Error, Expression, Field, RawTerm, Symbol};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "leibniz", version, about = "Normal forms, identities and generators in Leibniz algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite an expression into left-normed words.
    Normalize {
        expr: String,
        /// Work over Z_p instead of Q.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Fully linearize a repeated variable.
    Linearize {
        expr: String,
        #[arg(long)]
        var: String,
        /// Defaults to the number of occurrences.
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Dimension of the multilinear part of degree n of a variety.
    DimPn {
        /// Defining identity; repeat for several.
        #[arg(long, default_values_t = ["x1(x2(x3 x4))".to_string()])]
        identity: Vec<String>,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Check x(yz) = 0 and xY^p = 0 in the algebra M over Z_p.
    VerifyM {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Build the non-nilpotency witness of length m.
    Witness {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 10)]
        m: u32,
        /// Also print the element.
        #[arg(long)]
        show: bool,
    },
    /// Check the Leibniz identity and x1(x2(x3 x4)) = 0 in H^s.
    VerifyHs {
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// Degree cap for the exhaustive polynomial basis.
        #[arg(long, default_value_t = 3)]
        cap: u32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// List the generators g_r of a partition.
    Gens {
        #[arg(long)]
        partition: Partition,
        /// Print the expanded elements (at most 5040 terms each).
        #[arg(long)]
        expand: bool,
    },
    /// Evaluate every g_r under every substitution S_l in H^s.
    Independence {
        #[arg(long)]
        partition: Partition,
    },
}

const EXPAND_LIMIT: u32 = 5040;

struct Outcome {
    text: String,
    json: Value,
    passed: bool,
}

fn field(p: Option<u64>) -> Result<Field, Error> {
    Ok(match p {
        Some(p) => Field::prime(p)?,
        None => Field::Rational,
    })
}

fn read_expr(text: &str, field: Field) -> Result<Expression, Error> {
    Ok(parse_in(&sugar::expand_powers(text), field)?)
}

fn read_symbol(text: &str) -> Result<Symbol, Error> {
    let e = read_expr(text, Field::Rational)?;
    match e.keys().next() {
        Some(RawTerm::Leaf(s)) if e.len() == 1 => Ok(*s),
        _ => Err(Error::Contract(format!("{text:?} is not a single variable"))),
    }
}

/// Replaces every repeated variable by its full linearization.
fn multilinearize(mut e: Expression) -> Result<Expression, Error> {
    for s in symbols(&e) {
        match multiplicity(&e, s) {
            Some(k) if k > 1 => e = linearize(&e, s, k)?,
            Some(_) => {}
            None => return Err(Error::Contract(format!("{s} occurs unevenly in {e}"))),
        }
    }
    Ok(e)
}

fn sweep(seed: u64, context: Value, reports: Vec<Report>) -> Outcome {
    let passed = reports.iter().all(|r| r.passed);
    let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
    let mut json = json!({ "seed": seed, "passed": passed, "reports": reports });
    json.as_object_mut().unwrap().extend(context.as_object().unwrap().clone());
    Outcome { text, json, passed }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Normalize { expr, p } => {
            let nf = normalize(&read_expr(expr, field(*p)?)?);
            Outcome {
                text: nf.to_string(),
                json: json!({ "seed": seed, "input": expr, "normal_form": nf.to_string(), "terms": nf.len() }),
                passed: true,
            }
        }
        Command::Linearize { expr, var, arity } => {
            let e = read_expr(expr, Field::Rational)?;
            let v = read_symbol(var)?;
            let arity = match arity {
                Some(a) => *a,
                None => multiplicity(&e, v).ok_or_else(|| Error::Contract(format!("{v} occurs unevenly")))?,
            };
            let lin = linearize(&e, v, arity)?;
            Outcome {
                text: lin.to_string(),
                json: json!({
                    "seed": seed, "input": expr, "variable": v.to_string(), "arity": arity,
                    "linearization": lin.to_string(), "terms": lin.len(),
                }),
                passed: true,
            }
        }
        Command::DimPn { identity, n, p } => {
            let f = field(*p)?;
            let ids = identity.iter().map(|t| multilinearize(read_expr(t, f)?)).collect::<Result<Vec<_>, _>>()?;
            let dim = dim_pn(&ids, *n)?;
            let shown: Vec<String> = ids.iter().map(|e| e.to_string()).collect();
            Outcome {
                text: format!("n={n} dim={dim}"),
                json: json!({ "seed": seed, "identities": shown, "n": n, "dim": dim }),
                passed: true,
            }
        }
        Command::VerifyM { p, samples } => {
            let reports = vec![
                algebra_m::verify_left_annihilation(*p, *samples, seed)?,
                algebra_m::verify_engel(*p, *samples, seed)?,
            ];
            sweep(seed, json!({ "p": p }), reports)
        }
        Command::VerifyHs { s, cap, samples } => {
            let reports = vec![
                algebra_hs::verify_leibniz(*s, *samples, seed)?,
                algebra_hs::verify_identity3(*s, *cap, *samples, seed)?,
            ];
            sweep(seed, json!({ "s": s, "cap": cap }), reports)
        }
        Command::Witness { p, m, show } => {
            let alg = AlgebraM::new(*p)?;
            let w = alg.witness(*m);
            let closed = w == alg.closed_form_witness(*m);
            let nonzero = !w.is_zero();
            let mut text = format!("p={p} m={m} terms={} nonzero={nonzero} closed_form={closed}", w.len());
            if *show {
                text = format!("{text}\n{w}");
            }
            Outcome {
                text,
                json: json!({
                    "seed": seed, "p": p, "m": m, "terms": w.len(), "nonzero": nonzero,
                    "matches_closed_form": closed, "element": show.then(|| w.to_string()),
                }),
                passed: closed && nonzero,
            }
        }
        Command::Gens { partition, expand } => {
            let k = partition.corners();
            let mut lines = vec![format!("lambda=({partition}) k={k}")];
            let mut gens = Vec::new();
            for r in 1..=k {
                let g = build_g(partition, r)?;
                let len = g.expanded_len();
                lines.push(format!("g_{r} = {g}  terms={len}"));
                let expanded = if *expand {
                    if len > EXPAND_LIMIT.into() {
                        return Err(Error::Contract(format!("g_{r} has {len} terms, more than {EXPAND_LIMIT}")));
                    }
                    let nf = g.normal_form();
                    lines.push(format!("    {nf}"));
                    Some(nf.to_string())
                } else {
                    None
                };
                let segments: Vec<Vec<String>> =
                    g.segments().iter().map(|s| s.iter().map(|x| x.to_string()).collect()).collect();
                gens.push(json!({
                    "r": r, "template": g.to_string(), "segments": segments,
                    "expanded_terms": len.to_string(), "expanded": expanded,
                }));
            }
            Outcome {
                text: lines.join("\n"),
                json: json!({ "seed": seed, "lambda": partition, "k": k, "generators": gens }),
                passed: true,
            }
        }
        Command::Independence { partition } => {
            let report = independence(partition)?;
            let mut json = serde_json::to_value(&report).expect("serializable report");
            json.as_object_mut().unwrap().insert("seed".into(), seed.into());
            Outcome {
                text: report.to_string().trim_end().to_string(),
                json,
                passed: report.verdict == Verdict::Triangular,
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("valid json")),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
