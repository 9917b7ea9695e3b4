//! Command line front end.

pub mod parse;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::error::{Error, Result};
use crate::facto::facto;
use crate::polygon::{is_degenerate, lower_boundary, minimal_lattice_length, newton_polygon, volume};
use crate::recomb::{equal_up_to_unit, factor_minimal, factorization, Factorization};
use crate::slopecore::{average_slope, fmt_rat, lambda_parts, parse_rat, trunc_lambda, v_lambda, BiPoly, Slope, Val};
pub use parse::{parse_document, parse_poly, to_monomial_list, PolyDocument};

#[derive(Parser, Debug)]
#[command(name = "bivfact", version, about = "Factor bivariate polynomials over prime fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Debug)]
struct Input {
    /// Input file, `-` for stdin.
    file: PathBuf,
    /// Prime modulus; overrides a `p <modulus>` header.
    #[arg(short = 'p', long = "modulus")]
    modulus: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Factor into irreducible factors over F_p.
    Factor {
        #[command(flatten)]
        input: Input,
        /// Multiply the factors back and compare with the input.
        #[arg(long)]
        verify: bool,
        /// Factor after a unimodular transform minimizing the lower lattice length.
        #[arg(long)]
        minimal: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Newton polygon diagnostics.
    Polygon {
        #[command(flatten)]
        input: Input,
    },
    /// Analytic factorization over F_p((x)) along a slope.
    Hensel {
        #[command(flatten)]
        input: Input,
        /// Slope `m/q`; defaults to the average slope.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Relative precision `a/b`; defaults to the straightness defect.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DegenerateInput(_) => 2,
        Error::Parse { .. } | Error::ModulusNotPrime(_) => 3,
        Error::NotSeparable => 4,
        Error::MinimallyDegenerate => 5,
        Error::PrecisionTooLow { .. } => 6,
        Error::VerificationFailed(_) => 7,
        _ => 1,
    }
}

pub fn run_from_env() -> i32 {
    let stdin = std::io::stdin();
    run(std::env::args(), &mut stdin.lock(), &mut std::io::stdout(), &mut std::io::stderr())
}

/// Runs one invocation; returns the exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let input = match &cli.cmd {
        Cmd::Factor { input, .. } | Cmd::Polygon { input } | Cmd::Hensel { input, .. } => input,
    };
    let doc = match read_input(input, stdin) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let res = match &cli.cmd {
        Cmd::Factor { verify, minimal, json, seed, .. } => cmd_factor(&doc, *verify, *minimal, *json, *seed, out),
        Cmd::Polygon { .. } => cmd_polygon(&doc, out),
        Cmd::Hensel { lambda, sigma, seed, .. } => cmd_hensel(&doc, lambda.as_deref(), sigma.as_deref(), *seed, out),
    };
    match res {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::DegenerateInput(_)) {
                if let Ok(rep) = is_degenerate(&doc.polynomial) {
                    for r in rep.edges.iter().filter(|r| !r.separable) {
                        let _ = writeln!(err, "  edge {}: g(t) = {} is not separable", r.edge, r.g);
                    }
                }
            }
            exit_code(&e)
        }
    }
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<PolyDocument> {
    let text = if input.file.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| io_error(&e))?;
        s
    } else {
        std::fs::read_to_string(&input.file).map_err(|e| io_error(&e))?
    };
    parse_document(&text, input.modulus)
}

fn io_error(e: &std::io::Error) -> Error {
    Error::Io(format!("cannot read input: {e}"))
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn terms_json(f: &BiPoly) -> serde_json::Value {
    let t: Vec<_> = f.terms().rev().map(|((i, j), c)| json!([j, i, c])).collect();
    json!({ "terms": t })
}

/// JSON report of a factorization.
pub fn factorization_json(modulus: u64, r: &Factorization) -> serde_json::Value {
    json!({
        "modulus": modulus,
        "factors": r.factors.iter().map(terms_json).collect::<Vec<_>>(),
        "trace": {
            "lambda": r.lambda.map(|l| fmt_rat(l.as_rat())),
            "sigma": r.sigma.map(fmt_rat),
            "s": r.s,
            "recursion_depth": r.recursion_depth,
        }
    })
}

fn cmd_factor(doc: &PolyDocument, verify: bool, minimal: bool, as_json: bool, seed: u64, out: &mut dyn Write) -> Result<()> {
    let f = &doc.polynomial;
    let (r, tau) = if minimal {
        let (r, t) = factor_minimal(f, seed)?;
        (r, Some(t))
    } else {
        (factorization(f, seed)?, None)
    };
    if verify {
        let prod = r.factors.iter().fold(BiPoly::one(f.field()), |a, b| a.mul(b));
        if !equal_up_to_unit(&prod, f) {
            return Err(Error::VerificationFailed("product of the factors differs from the input".into()));
        }
    }
    if as_json {
        let mut v = factorization_json(doc.modulus, &r);
        if let Some(t) = tau {
            v["transform"] = json!(t.to_string());
        }
        writeln!(out, "{}", serde_json::to_string(&v).unwrap()).map_err(io)?;
        return Ok(());
    }
    let mut s = format!("modulus {}\n{} factor(s)\n", doc.modulus, r.factors.len());
    for g in &r.factors {
        s.push_str(&format!("  {g}\n"));
    }
    if let Some(l) = r.lambda {
        s.push_str(&format!("lambda {}", fmt_rat(l.as_rat())));
        if let Some(sig) = r.sigma {
            s.push_str(&format!(", sigma {}", fmt_rat(sig)));
        }
        s.push_str(&format!(", analytic factors {}, recursion depth {}\n", r.s, r.recursion_depth));
    }
    if let Some(t) = tau {
        s.push_str(&format!("transform {t}\n"));
    }
    if verify {
        s.push_str("verified\n");
    }
    out.write_all(s.as_bytes()).map_err(io)
}

fn cmd_polygon(doc: &PolyDocument, out: &mut dyn Write) -> Result<()> {
    let f = &doc.polynomial;
    let p = newton_polygon(f)?;
    let mut s = String::new();
    let verts: Vec<String> = p.vertices().iter().map(|(i, j)| format!("({i},{j})")).collect();
    s.push_str(&format!("vertices {}\n", verts.join(" ")));
    s.push_str("lower boundary\n");
    for e in lower_boundary(&p) {
        s.push_str(&format!("  {e}\n"));
    }
    s.push_str(&format!("r {}\n", crate::polygon::lattice_length(&p)));
    if p.dimension() == 2 {
        let (r0, maps) = minimal_lattice_length(&p)?;
        s.push_str(&format!("r0 {r0}\n"));
        for t in maps {
            s.push_str(&format!("  minimizer {t}\n"));
        }
    }
    let (i0, i1) = (p.vertices().iter().map(|v| v.0).min().unwrap(), p.vertices().iter().map(|v| v.0).max().unwrap());
    let (j0, j1) = (p.vertices().iter().map(|v| v.1).min().unwrap(), p.vertices().iter().map(|v| v.1).max().unwrap());
    s.push_str(&format!("V {}\n", fmt_rat(volume(&p))));
    s.push_str(&format!("bounding rectangle {}x{} area {}\n", i1 - i0, j1 - j0, (i1 - i0) * (j1 - j0)));
    let rep = is_degenerate(f)?;
    s.push_str(if rep.is_degenerate() { "degenerate\n" } else { "non-degenerate\n" });
    for r in &rep.edges {
        s.push_str(&format!("  edge {}: g(t) = {} {}\n", r.edge, r.g, if r.separable { "separable" } else { "not separable" }));
    }
    out.write_all(s.as_bytes()).map_err(io)
}

fn bad_arg(what: &str, v: &str) -> Error {
    Error::Parse { line: 0, col: 0, msg: format!("bad {what} '{v}'") }
}

fn cmd_hensel(doc: &PolyDocument, lambda: Option<&str>, sigma: Option<&str>, seed: u64, out: &mut dyn Write) -> Result<()> {
    let field = doc.polynomial.field();
    let f0 = &doc.polynomial;
    let d = f0.deg_y().ok_or(Error::ZeroPolynomial)?;
    // Make the leading y-coefficient 1 when it is a monomial in x.
    let lead: Vec<(i64, u64)> = f0.row(d).collect();
    let f = match lead[..] {
        [(k, c)] => f0.shift(0, -k).scale(field.inv(c)),
        _ => return Err(Error::NotMonic),
    };
    let l = match lambda {
        Some(v) => Slope::from_rat(parse_rat(v).ok_or_else(|| bad_arg("slope", v))?),
        None => average_slope(&f)?,
    };
    let m = lambda_parts(&f, l).m;
    let sig = match sigma {
        Some(v) => parse_rat(v).ok_or_else(|| bad_arg("precision", v))?,
        None => m,
    };
    let an = facto(&f, l, sig, seed)?;
    let prod = an.factors.iter().fold(BiPoly::one(field), |a, b| a.mul(b));
    let vf = v_lambda(&f, l).unwrap();
    let resid = match v_lambda(&f.sub(&prod), l) {
        Val::Inf => None,
        Val::Finite(v) => Some(v - vf),
    };
    let mut s = format!("lambda {}, sigma {}, m {}\n{} analytic factor(s)\n", fmt_rat(l.as_rat()), fmt_rat(sig), fmt_rat(m), an.factors.len());
    for g in &an.factors {
        let cut = v_lambda(g, l).unwrap() + sig;
        s.push_str(&format!("  {g}\n    truncated at {}: {}\n", fmt_rat(cut), trunc_lambda(g, l, cut)));
    }
    match resid {
        None => s.push_str("residual valuation inf\n"),
        Some(v) => s.push_str(&format!("residual valuation {}\n", fmt_rat(v))),
    }
    s.push_str(&format!("recursion depth {}\n", an.recursion_depth()));
    out.write_all(s.as_bytes()).map_err(io)?;
    if resid.is_some_and(|v| v <= sig) {
        return Err(Error::VerificationFailed(format!("residual valuation {} does not exceed sigma", fmt_rat(resid.unwrap()))));
    }
    Ok(())
}
