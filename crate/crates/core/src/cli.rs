//! Command-line front end.
//!
//! Exit codes: 0 success, 1 when a mathematical check comes out false,
//! 2 for usage and parse errors. Diagnostics are a single line on the error
//! stream.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::automorph::{certify_pair, decompose_line};
use crate::chain::{
    build_chain, nagata, semigroup_sampling_oracle, verify_theorem, ChainAtInfinity, ChainError, NagataCase,
};
use crate::charseq::{am_from_chain, check_axioms, enumerate_am, AxiomReport, CharSequence, DivisorChain};
use crate::numeric::CoeffDomain;
use crate::par::ExecMode;
use crate::poly::parse_bipoly;
use crate::semigroup::{generate, SemigroupError};

pub const SEED_ENV: &str = "AMCURVE_SEED";
pub const DEFAULT_SEED: u64 = 42;
/// Longest gap list printed in full.
pub const GAP_DISPLAY_LIMIT: usize = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "amcurve",
    version,
    about = "Characteristic sequences and coordinate lines in the plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the four axioms on a sequence.
    Check {
        #[arg(long, value_name = "R")]
        sequence: String,
    },
    /// Sequence corresponding to a divisor chain n = d_1 > ... > d_{h+1} = 1.
    FromChain {
        #[arg(long, value_name = "D")]
        divisors: String,
    },
    /// All certified sequences with a given initial term.
    Enumerate {
        #[arg(long, value_name = "N")]
        initial: u64,
    },
    /// Invariants of the semigroup generated by a list of integers.
    Semigroup {
        #[arg(long, value_name = "R")]
        generators: String,
        /// Also list all members up to this bound.
        #[arg(long, value_name = "B")]
        up_to: Option<u64>,
    },
    /// Construct the coordinate line realizing a sequence.
    Build {
        #[arg(long, value_name = "R")]
        sequence: String,
        /// Work over F_P instead of Q.
        #[arg(long = "char", value_name = "P")]
        characteristic: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Decompose the line f = 0 given an automorphism (g, f).
    Decompose {
        #[arg(long, value_name = "POLY", allow_hyphen_values = true)]
        f: String,
        #[arg(long, value_name = "POLY", allow_hyphen_values = true)]
        g: String,
        #[arg(long = "char", value_name = "P")]
        characteristic: Option<u64>,
    },
    /// Build the line for a sequence and check every intersection number.
    Verify {
        #[arg(long, value_name = "R")]
        sequence: String,
        #[arg(long = "char", value_name = "P")]
        characteristic: Option<u64>,
        /// Random polynomials for the membership oracle.
        #[arg(long, value_name = "T")]
        oracle_trials: Option<usize>,
        /// Total degree of the oracle's monomials and random polynomials.
        #[arg(long, value_name = "D", default_value_t = 6, requires = "oracle_trials")]
        degree_bound: u32,
        #[arg(long, value_name = "S", requires = "oracle_trials")]
        seed: Option<u64>,
    },
    /// Nagata's embedded line over F_p.
    Nagata {
        #[arg(long, value_name = "P")]
        p: u64,
        #[arg(long, value_name = "A")]
        a: u64,
    },
}

/// A failed command: exit code and one-line message.
struct Failure(i32, String);

fn usage(msg: impl ToString) -> Failure {
    Failure(2, msg.to_string())
}

fn math(msg: impl ToString) -> Failure {
    Failure(1, msg.to_string())
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI, reading the seed default from the environment.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(argv, std::env::var(SEED_ENV).ok(), out, err)
}

/// Like [`run`] with the value of the seed variable supplied explicitly.
pub fn run_with_env<I, T>(argv: I, env_seed: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.is_empty() && !l.starts_with("Usage:"))
                .collect();
            let _ = writeln!(err, "{}", line.join(" "));
            return 2;
        }
    };
    let mut buf = Vec::new();
    let result = dispatch(cli.command, env_seed, &mut buf);
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, env_seed: Option<String>, out: &mut Vec<u8>) -> Outcome {
    match cmd {
        Command::Check { sequence } => cmd_check(&sequence, out),
        Command::FromChain { divisors } => cmd_from_chain(&divisors, out),
        Command::Enumerate { initial } => cmd_enumerate(initial, out),
        Command::Semigroup { generators, up_to } => cmd_semigroup(&generators, up_to, out),
        Command::Build {
            sequence,
            characteristic,
            json,
        } => cmd_build(&sequence, characteristic, json, out),
        Command::Decompose { f, g, characteristic } => cmd_decompose(&f, &g, characteristic, out),
        Command::Verify {
            sequence,
            characteristic,
            oracle_trials,
            degree_bound,
            seed,
        } => {
            let oracle = match oracle_trials {
                Some(trials) => Some((trials, degree_bound, resolve_seed(seed, env_seed)?)),
                None => None,
            };
            cmd_verify(&sequence, characteristic, oracle, out)
        }
        Command::Nagata { p, a } => cmd_nagata(p, a, out),
    }
}

/// Flag, then environment, then the fixed default.
fn resolve_seed(flag: Option<u64>, env: Option<String>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{SEED_ENV}='{v}' is not a non-negative integer"))),
        None => Ok(DEFAULT_SEED),
    }
}

fn domain(characteristic: Option<u64>) -> Result<CoeffDomain, Failure> {
    match characteristic {
        None | Some(0) => Ok(CoeffDomain::Rational),
        Some(p) => CoeffDomain::prime_field(p).map_err(usage),
    }
}

fn parse_sequence(s: &str) -> Result<CharSequence, Failure> {
    s.parse().map_err(|e| usage(format!("--sequence: {e}")))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// One line per axiom, e.g. `(3) FAIL (42 ≥ 36)`.
pub fn axiom_lines(r: &CharSequence, rep: &AxiomReport) -> Vec<String> {
    let d = &rep.dchain;
    let t = r.terms();
    let ax1 = if rep.ax1 {
        "(1) ok".to_string()
    } else {
        format!("(1) FAIL (gcd chain {})", join(d))
    };
    let ax2 = match rep.ax2_violation {
        None => "(2) ok".to_string(),
        Some(k) => format!("(2) FAIL at k = {k} ({} ≥ {})", &d[k - 1] * &t[k], &d[k] * &t[k + 1]),
    };
    let ax3 = match (&rep.am_inequality, rep.ax3) {
        (_, true) => "(3) ok".to_string(),
        (Some((lhs, rhs)), false) => format!("(3) FAIL ({lhs} ≥ {rhs})"),
        (None, false) => "(3) FAIL".to_string(),
    };
    let ax4 = if rep.ax4 {
        "(4) ok".to_string()
    } else {
        format!("(4) FAIL ({} ≠ {})", rep.conductor_lhs, rep.conductor_rhs)
    };
    vec![ax1, ax2, ax3, ax4]
}

fn cmd_check(sequence: &str, out: &mut Vec<u8>) -> Outcome {
    let r = parse_sequence(sequence)?;
    let rep = check_axioms(&r);
    let _ = writeln!(out, "sequence: {r}");
    let _ = writeln!(out, "gcd chain: {}", join(&rep.dchain));
    for line in axiom_lines(&r, &rep) {
        let _ = writeln!(out, "{line}");
    }
    Ok(if rep.all() { 0 } else { 1 })
}

fn cmd_from_chain(divisors: &str, out: &mut Vec<u8>) -> Outcome {
    let chain: DivisorChain = divisors.parse().map_err(|e| usage(format!("--divisors: {e}")))?;
    let r = am_from_chain(&chain).map_err(math)?;
    let _ = writeln!(out, "{r}");
    Ok(0)
}

fn cmd_enumerate(n: u64, out: &mut Vec<u8>) -> Outcome {
    let all = enumerate_am(n).map_err(usage)?;
    for r in &all {
        let _ = writeln!(out, "{r}");
    }
    Ok(0)
}

fn cmd_semigroup(generators: &str, up_to: Option<u64>, out: &mut Vec<u8>) -> Outcome {
    let gens: Vec<u64> = generators
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            usage(format!(
                "--generators: expected comma-separated integers, got '{generators}'"
            ))
        })?;
    let sg = generate(&gens).map_err(|e| match e {
        SemigroupError::Empty | SemigroupError::ZeroGenerator => usage(e),
        other => math(other),
    })?;
    if sg.gcd() != 1 {
        return Err(math(format!(
            "generators have gcd {}; the semigroup has infinitely many gaps",
            sg.gcd()
        )));
    }
    let inv = sg.invariants().map_err(math)?;
    let _ = writeln!(out, "generators: {}", join(sg.generators()));
    let _ = writeln!(out, "minimal generators: {}", join(&inv.minimal_generators));
    let _ = writeln!(out, "conductor: {}", inv.conductor);
    let _ = writeln!(out, "frobenius: {}", inv.frobenius);
    let _ = writeln!(out, "genus: {}", inv.genus);
    let sym = sg.is_symmetric().map_err(math)?;
    let _ = writeln!(out, "symmetric: {}", if sym { "yes" } else { "no" });
    if inv.gaps.len() > GAP_DISPLAY_LIMIT {
        let _ = writeln!(
            out,
            "gaps: {},... ({} more)",
            join(&inv.gaps[..GAP_DISPLAY_LIMIT]),
            inv.gaps.len() - GAP_DISPLAY_LIMIT
        );
    } else {
        let _ = writeln!(out, "gaps: {}", join(&inv.gaps));
    }
    if let Some(b) = up_to {
        let members: Vec<u64> = (0..=b).filter(|&s| sg.contains(s)).collect();
        let _ = writeln!(out, "members up to {b}: {}", join(&members));
    }
    Ok(0)
}

fn build_for(sequence: &str, characteristic: Option<u64>) -> Result<(CharSequence, ChainAtInfinity), Failure> {
    let r = parse_sequence(sequence)?;
    let d = domain(characteristic)?;
    let chain = build_chain(&r, d).map_err(math)?;
    Ok((r, chain))
}

fn cmd_build(sequence: &str, characteristic: Option<u64>, as_json: bool, out: &mut Vec<u8>) -> Outcome {
    let (r, chain) = build_for(sequence, characteristic)?;
    let (xt, yt) = chain.param();
    if as_json {
        let v = json!({
            "sequence": r.to_u64s(),
            "characteristic": chain.domain().characteristic(),
            "nratios": chain.nratios(),
            "dchain": chain.dchain(),
            "polys": chain.polys().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "param": { "x": xt.to_string(), "y": yt.to_string() },
            "word": chain.line_word().to_json(),
        });
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        let _ = writeln!(out, "sequence: {r}");
        let _ = writeln!(out, "over: {}", chain.domain());
        let _ = writeln!(out, "ratios: {}", join(chain.nratios()));
        for (k, f) in chain.polys().iter().enumerate() {
            let _ = writeln!(out, "f_{} = {f}", k + 1);
        }
        let _ = writeln!(out, "x(t) = {xt}");
        let _ = writeln!(out, "y(t) = {yt}");
    }
    Ok(0)
}

fn cmd_decompose(f: &str, g: &str, characteristic: Option<u64>, out: &mut Vec<u8>) -> Outcome {
    let d = domain(characteristic)?;
    let f = parse_bipoly(f, d).map_err(|e| usage(format!("--f: {e}")))?;
    let g = parse_bipoly(g, d).map_err(|e| usage(format!("--g: {e}")))?;
    let witness = certify_pair(&g, &f).map_err(|e| math(format!("(g, f) is not an automorphism: {e}")))?;
    let sk = decompose_line(&f, &g, &witness).map_err(math)?;
    let chain = ChainAtInfinity::from_skeleton(&sk).map_err(math)?;
    let _ = writeln!(out, "degrees: {}", join(&sk.degrees()));
    for (k, p) in sk.polys.iter().enumerate() {
        let _ = writeln!(out, "f_{} = {p}", k + 1);
    }
    let seq: Vec<u64> = chain
        .sequence()
        .map_err(math)?
        .iter()
        .map(|i| i.finite())
        .collect::<Option<_>>()
        .ok_or_else(|| math("a chain member vanishes on the line"))?;
    let r = CharSequence::from_u64s(&seq).map_err(math)?;
    let _ = writeln!(out, "sequence: {r}");
    let axioms = check_axioms(&r);
    let _ = writeln!(out, "certified: {}", if axioms.all() { "yes" } else { "no" });
    Ok(if axioms.all() { 0 } else { 1 })
}

fn cmd_verify(
    sequence: &str,
    characteristic: Option<u64>,
    oracle: Option<(usize, u32, u64)>,
    out: &mut Vec<u8>,
) -> Outcome {
    let (r, chain) = build_for(sequence, characteristic)?;
    let rep = verify_theorem(&chain, &r).map_err(math)?;
    let mut v = rep.to_json();
    let mut ok = rep.checks.all();
    if let Some((trials, degree_bound, seed)) = oracle {
        let samples =
            semigroup_sampling_oracle(&chain, trials, degree_bound, seed, ExecMode::default()).map_err(math)?;
        let gens = r.to_u64s().ok_or_else(|| math("sequence too large for the oracle"))?;
        let sg = generate(&gens).map_err(math)?;
        let non_members = samples.non_members(&sg);
        let passed = non_members.is_empty() && samples.contains_zero();
        ok &= passed;
        v["oracle"] = json!({
            "trials": trials,
            "degree_bound": degree_bound,
            "seed": seed,
            "samples": samples.values.len(),
            "infinite": samples.infinite,
            "zero_seen": samples.contains_zero(),
            "non_members": non_members,
        });
        v["checks"]["oracle"] = passed.into();
    }
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
    Ok(if ok { 0 } else { 1 })
}

fn cmd_nagata(p: u64, a: u64, out: &mut Vec<u8>) -> Outcome {
    let ex = nagata(p, a).map_err(|e| match e {
        ChainError::NagataParams(m) => usage(m),
        other => math(other),
    })?;
    let case = match ex.case {
        NagataCase::I => "I (a < p)",
        NagataCase::II => "II (a > p)",
    };
    let _ = writeln!(out, "p = {p}, a = {a}, case {case}");
    let _ = writeln!(out, "f = {}", ex.f);
    let _ = writeln!(out, "g = {}", ex.g);
    let _ = writeln!(out, "x(t) = {}", ex.param.0);
    let _ = writeln!(out, "y(t) = {}", ex.param.1);
    let _ = writeln!(out, "f(x(t), y(t)) = {}", ex.f_on_param);
    let _ = writeln!(out, "g(x(t), y(t)) = {}", ex.g_on_param);
    let _ = writeln!(out, "expected sequence: {}", ex.expected);
    let _ = writeln!(out, "computed sequence: {}", ex.computed);
    for line in axiom_lines(&ex.computed, &ex.axioms) {
        let _ = writeln!(out, "{line}");
    }
    Ok(if ex.all_ok() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("amcurve").chain(args.iter().copied());
        let code = run_with_env(argv, None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(3), Some("9".into())).ok(), Some(3));
        assert_eq!(resolve_seed(None, Some("9".into())).ok(), Some(9));
        assert_eq!(resolve_seed(None, None).ok(), Some(DEFAULT_SEED));
        assert!(resolve_seed(None, Some("x".into())).is_err());
    }

    #[test]
    fn ax2_failure_line() {
        let (code, out, _) = run_args(&["check", "--sequence", "6,4,3"]);
        assert_eq!(code, 1);
        assert!(out.contains("(2) FAIL at k = 1 (24 ≥ 6)"), "{out}");
    }

    #[test]
    fn usage_errors_are_one_line() {
        for args in [
            &["check"][..],
            &["check", "--sequence", "4,x"],
            &["bogus"],
            &["build", "--sequence", "4,2,7", "--char", "6"],
            &["decompose", "--f", "2x", "--g", "y"],
        ] {
            let (code, out, err) = run_args(args);
            assert_eq!(code, 2, "{args:?}");
            assert!(out.is_empty());
            assert_eq!(err.lines().count(), 1, "{err}");
        }
    }

    #[test]
    fn gap_list_is_capped() {
        let (code, out, _) = run_args(&["semigroup", "--generators", "200,201"]);
        assert_eq!(code, 0);
        let gaps = out.lines().find(|l| l.starts_with("gaps:")).unwrap();
        assert!(gaps.ends_with("(9900 more)"), "{}", &gaps[gaps.len() - 30..]);
    }
}
