//! The `lgknot` command line.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::catalog;
use crate::error::{Error, Result};
use crate::ring::LaurentPoly;
use crate::rmatrix::{
    caps_cups, caps_inverse_holds, inverse_holds, numeric_projector_check, sigma, sigma_inv,
    skein_identity_holds, yang_baxter_holds, CapCupKind,
};
use crate::tangle::{lg_invariant, lg_of_network, BraidWord, Chirality};
use crate::tensor::{ContractionNetwork, Tensor};

#[derive(Parser, Debug)]
#[command(
    name = "lgknot",
    version,
    about = "Links-Gould invariant of braids and example links"
)]
pub struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the invariant of a braid closure, e.g. "n=3; 1 -2 1 -2".
    Eval {
        braid: String,
        /// Label to attach to JSON output.
        #[arg(long)]
        name: Option<String>,
    },
    /// Compare catalog links with their expected invariants.
    Catalog {
        /// Link names (all when omitted).
        names: Vec<String>,
        /// Evaluate the hand-built tangle network instead of the braid.
        #[arg(long)]
        network: bool,
    },
    /// Invariant of the (p, q, r) pretzel knot.
    Pretzel { p: u32, q: u32, r: u32 },
    /// Chirality and symmetry checks for a braid or a catalog link.
    Check { target: String },
    /// Run the identity checks on the crossing matrices.
    Selftest,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status: 0 on success, 1 when a check fails, 2 on bad input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::GeneratorOutOfRange { .. }
        | Error::UnknownLink(_)
        | Error::BadPretzelParams(..)
        | Error::TooManyStrands { .. }
        | Error::DomainError(_)
        | Error::EvenHeight(_) => 2,
        Error::NotYFree
        | Error::NotScalarMultiple
        | Error::ConsistencyFailure(_)
        | Error::MalformedNetwork(_) => 1,
    }
}

fn report(name: Option<&str>, a: &LaurentPoly) -> Value {
    let mut v = json!({
        "polynomial": a.to_json(),
        "palindromic": a.is_palindromic(),
        "inversion_symmetric": a.is_inversion_symmetric(),
    });
    if let Some(n) = name {
        v["name"] = json!(n);
    }
    v
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    )
    .map_err(io_err)
}

fn io_err(e: std::io::Error) -> Error {
    Error::ConsistencyFailure(format!("write failed: {e}"))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Eval { braid, name } => {
            let w: BraidWord = braid.parse()?;
            let a = lg_invariant(&w)?;
            if cli.json {
                write_json(out, &report(name.as_deref(), &a))?;
            } else {
                writeln!(out, "{a}").map_err(io_err)?;
            }
            Ok(0)
        }
        Command::Catalog { names, network } => catalog_cmd(cli.json, names, *network, out),
        Command::Pretzel { p, q, r } => {
            let net = catalog::pretzel(*p, *q, *r)?;
            let a = lg_of_network(&net)?;
            checks(cli.json, &format!("TP({p},{q},{r})"), &a, out)
        }
        Command::Check { target } => {
            let (name, a) = if target.trim_start().starts_with('n') && target.contains('=') {
                let w: BraidWord = target.parse()?;
                (w.to_string(), lg_invariant(&w)?)
            } else {
                let e = catalog::get(target)?;
                (e.name.to_owned(), e.evaluate()?)
            };
            checks(cli.json, &name, &a, out)
        }
        Command::Selftest => selftest(cli.json, out),
    }
}

/// Exit status 1 if the inversion symmetry fails.
fn checks(json: bool, name: &str, a: &LaurentPoly, out: &mut dyn Write) -> Result<i32> {
    let verdict = Chirality::of(a);
    if json {
        let mut v = report(Some(name), a);
        v["chirality"] = json!(verdict.to_string());
        write_json(out, &v)?;
    } else {
        writeln!(out, "{name}: {a}").map_err(io_err)?;
        writeln!(out, "palindromic: {}", yes(a.is_palindromic())).map_err(io_err)?;
        writeln!(
            out,
            "inversion symmetric: {}",
            yes(a.is_inversion_symmetric())
        )
        .map_err(io_err)?;
        writeln!(out, "chirality: {verdict}").map_err(io_err)?;
    }
    Ok(if a.is_inversion_symmetric() { 0 } else { 1 })
}

fn catalog_cmd(json: bool, names: &[String], network: bool, out: &mut dyn Write) -> Result<i32> {
    let entries = if names.is_empty() {
        catalog::all()
    } else {
        names
            .iter()
            .map(|n| catalog::get(n))
            .collect::<Result<Vec<_>>>()?
    };
    let mut failed = false;
    let mut rows = Vec::new();
    for e in entries {
        let got = match (network, e.evaluate_network()) {
            (true, Some(r)) => r?,
            _ => e.evaluate()?,
        };
        let pass = e.expected.as_ref().is_none_or(|x| *x == got);
        failed |= !pass;
        if json {
            let mut v = report(Some(e.name), &got);
            v["pass"] = json!(pass);
            if let Some(x) = &e.expected {
                v["expected"] = x.to_json();
            }
            rows.push(v);
        } else if pass {
            writeln!(out, "PASS {}: {got}", e.name).map_err(io_err)?;
        } else {
            let want = e
                .expected
                .as_ref()
                .map(|x| x.to_string())
                .unwrap_or_default();
            writeln!(out, "FAIL {}: expected {want}, got {got}", e.name).map_err(io_err)?;
        }
    }
    if json {
        write_json(out, &Value::Array(rows))?;
    }
    Ok(i32::from(failed))
}

/// The exact identities on the crossing data, plus a floating-point
/// projector comparison at a few points.
pub fn selftest_results() -> Vec<(&'static str, bool)> {
    let (s, si) = (sigma(), sigma_inv());
    let loop_removal = [s, si].iter().all(|x| {
        ContractionNetwork::new()
            .node(Tensor::from(*x), "y a x b")
            .node(Tensor::cap_cup(CapCupKind::OmegaPlus), "a c")
            .node(Tensor::cap_cup(CapCupKind::MhoMinus), "b c")
            .free("y x")
            .contract()
            .is_ok_and(|t| t == Tensor::identity2())
    });
    let projector = [(1.3, 0.7), (0.8, 1.1), (1.45, 0.55), (0.6, 1.4)]
        .iter()
        .all(|&(q, a)| numeric_projector_check(q, a, 1e-9) == Ok(true));
    vec![
        ("yang-baxter", yang_baxter_holds(s) && yang_baxter_holds(si)),
        ("cubic skein", skein_identity_holds(s)),
        ("crossing inverse", inverse_holds(s, si)),
        ("cap-cup inverse", caps_inverse_holds(caps_cups())),
        ("loop removal", loop_removal),
        ("projector check", projector),
    ]
}

fn selftest(json: bool, out: &mut dyn Write) -> Result<i32> {
    let results = selftest_results();
    if json {
        let v: serde_json::Map<String, Value> = results
            .iter()
            .map(|(n, ok)| (n.to_string(), json!(ok)))
            .collect();
        write_json(out, &Value::Object(v))?;
    } else {
        for (n, ok) in &results {
            writeln!(out, "{} {n}", if *ok { "PASS" } else { "FAIL" }).map_err(io_err)?;
        }
    }
    Ok(i32::from(!results.iter().all(|(_, ok)| *ok)))
}
