//! Command-line front end.
//!
//! Every JSON-valued flag accepts either inline JSON or a path to a file
//! holding it. Output is canonical JSON on stdout (or a readable rendering
//! with `--pretty`); the exit code is 0 on success, 1 when a verification
//! fails and 2 on usage or input errors.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, Polynomial, RationalFunction, ShiftTable};
use crate::hirota::{verify_first_mkp, verify_mkp, verify_nkdv};
use crate::lax::{
    adjoint_consistency_check, crum_check, intertwining_check, lax_equation_check,
    mkdv_flow_check, nkdv_factorized_check, ratio_eigenfunction_check, sato_wilson_check,
};
use crate::schur::{elementary_schur, shifted_elementary_schur, shifted_schur_tau, Partition};
use crate::tau::{
    enumerate_n_periodic, is_n_periodic, mkp_successor, tau_kp, tau_nkdv, tau_nkdv_from_data,
    v_lambda, MkpCase, NkdvData, TauChain, TauFunction,
};
use crate::verdict::Verdict;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "polytau", about = "Exact polynomial tau-functions of the KP, MKP and n-KdV hierarchies")]
struct Cli {
    /// Human-readable output instead of canonical JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Lowest operator order checked by operator identities.
    #[arg(long, global = true, default_value_t = -6, allow_hyphen_values = true)]
    floor: i64,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Schur polynomial of a partition, or an elementary one with --elementary.
    Schur(SchurArgs),
    /// KP tau-function det(s_{λ_i + j - i}(t + c_i)).
    TauKp(PartitionShifts),
    /// Successor of a KP tau in an MKP chain.
    TauMkpExtend(ExtendArgs),
    /// n-KdV tau-function of an n-periodic partition.
    TauNkdv(NkdvArgs),
    /// n-KdV chain from a permutation, multiplicities and shifts.
    TauNkdvData(NkdvDataArgs),
    /// Whether a partition is n-periodic.
    CheckNPeriodic(PeriodicArgs),
    /// All n-periodic partitions up to a weight.
    EnumerateNPeriodic(EnumerateArgs),
    /// Bilinear MKP identity for a pair of taus or a whole chain.
    VerifyMkp(MkpArgs),
    /// n-KdV bilinear identities for a chain of length n.
    VerifyNkdv(ChainN),
    /// Operator-side checks for a tau or a chain.
    VerifyLax(LaxArgs),
    /// n-MKdV flows of the v_i of an n-KdV chain.
    VerifyMkdv(MkdvArgs),
    /// Crum's identity for a list of functions.
    Crum(CrumArgs),
}

#[derive(Args, Debug)]
struct SchurArgs {
    #[arg(long, conflicts_with = "elementary")]
    partition: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    elementary: Option<i64>,
    /// Shift tables: a list (one per part) or a single table for --elementary.
    #[arg(long)]
    shifts: Option<String>,
}

#[derive(Args, Debug)]
struct PartitionShifts {
    #[arg(long)]
    partition: String,
    /// JSON list of shift tables, one per part; defaults to zero shifts.
    #[arg(long)]
    shifts: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CaseArg {
    Prepend,
    Insert,
    Decrement,
}

#[derive(Args, Debug)]
struct ExtendArgs {
    #[command(flatten)]
    base: PartitionShifts,
    #[arg(long = "case", value_enum)]
    case: CaseArg,
    #[arg(long)]
    mu: Option<u32>,
    /// 1-based position for the insert case.
    #[arg(long)]
    position: Option<usize>,
    /// Shift table for the new part.
    #[arg(long)]
    d: Option<String>,
}

#[derive(Args, Debug)]
struct NkdvArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    partition: String,
    /// JSON object mapping residue classes to shift tables.
    #[arg(long)]
    class_shifts: Option<String>,
}

#[derive(Args, Debug)]
struct NkdvDataArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    perm: String,
    #[arg(long)]
    m: String,
    /// JSON list of n shift tables.
    #[arg(long)]
    shifts: Option<String>,
}

#[derive(Args, Debug)]
struct PeriodicArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    partition: String,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    max_weight: u32,
}

#[derive(Args, Debug)]
struct MkpArgs {
    #[arg(long, conflicts_with = "chain")]
    tau_k: Option<String>,
    #[arg(long, conflicts_with = "chain")]
    tau_l: Option<String>,
    #[arg(long, default_value_t = 0)]
    d: i64,
    /// Check the inhomogeneous first-MKP form with --tau-l as τ_(k+1).
    #[arg(long)]
    first: bool,
    /// Check every consecutive pair of a chain.
    #[arg(long)]
    chain: Option<String>,
}

#[derive(Args, Debug)]
struct ChainN {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    chain: String,
}

#[derive(Args, Debug)]
struct LaxArgs {
    #[arg(long, conflicts_with = "chain")]
    tau: Option<String>,
    #[arg(long)]
    chain: Option<String>,
    #[arg(long, default_value = "1,2,3")]
    flows: String,
}

#[derive(Args, Debug)]
struct MkdvArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    chain: String,
    #[arg(long)]
    flow: u32,
    /// Single row to check; all rows by default.
    #[arg(long)]
    row: Option<usize>,
    /// Also check the factorization of L^n.
    #[arg(long)]
    factorized: bool,
}

#[derive(Args, Debug)]
struct CrumArgs {
    /// JSON list of polynomials or rational functions.
    #[arg(long)]
    funcs: String,
}

/// What a verb produced.
enum Outcome {
    Value(Value, String),
    Verdict(Verdict),
}

/// Parses `argv` (including the program name) and runs the verb.
/// Returns the exit code and the text for stdout.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            return (code, e.to_string());
        }
    };
    let pretty = cli.pretty;
    match dispatch(cli) {
        Ok(Outcome::Value(v, human)) => (EXIT_OK, render(&v, pretty.then_some(human))),
        Ok(Outcome::Verdict(v)) => {
            let code = if v.pass { EXIT_OK } else { EXIT_FAIL };
            (code, render(&v.to_json(), pretty.then(|| v.to_string())))
        }
        Err(e) => {
            let code = match e {
                Error::NotPeriodic { .. } => EXIT_FAIL,
                _ => EXIT_USAGE,
            };
            let v = json!({"error": e.to_string()});
            (code, render(&v, pretty.then(|| format!("error: {e}"))))
        }
    }
}

fn render(v: &Value, human: Option<String>) -> String {
    match human {
        Some(h) => h,
        None => v.to_string(),
    }
}

/// Inline JSON, or the contents of a file when the text is not JSON.
fn load_json(arg: &str) -> Result<Value> {
    if let Ok(v) = serde_json::from_str(arg) {
        return Ok(v);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Error::Parse(format!("{arg} is neither JSON nor a readable file: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

fn parse_partition(s: &str) -> Result<Partition> {
    s.parse()
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad {what} entry {x:?}"))))
        .collect()
}

fn parse_shift_list(arg: Option<&str>, len: usize) -> Result<Vec<ShiftTable>> {
    let Some(arg) = arg else {
        return Ok(vec![ShiftTable::new(); len]);
    };
    match load_json(arg)? {
        Value::Array(items) => items.iter().map(ShiftTable::from_json).collect(),
        _ => Err(Error::Parse("shifts must be a JSON list of tables".into())),
    }
}

fn parse_tau(arg: &str, level: i64) -> Result<TauFunction> {
    TauFunction::new(Polynomial::from_json(&load_json(arg)?)?, level)
}

/// A chain file, or the object written by `tau-nkdv-data`.
fn parse_chain(arg: &str) -> Result<TauChain> {
    let v = load_json(arg)?;
    match &v {
        Value::Object(m) if m.contains_key("chain") => TauChain::from_json(&m["chain"]),
        _ => TauChain::from_json(&v),
    }
}

fn poly_outcome(p: &Polynomial) -> Outcome {
    Outcome::Value(p.to_json(), p.to_string())
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    let floor = cli.floor;
    if floor > -1 {
        return Err(Error::InvalidArgument("--floor must be at most -1".into()));
    }
    match cli.verb {
        Verb::Schur(a) => match (a.partition, a.elementary) {
            (Some(p), _) => {
                let l = parse_partition(&p)?;
                let shifts = parse_shift_list(a.shifts.as_deref(), l.len())?;
                if shifts.len() != l.len() {
                    return Err(Error::InvalidArgument("one shift table per part is required".into()));
                }
                Ok(poly_outcome(&shifted_schur_tau(&l, &shifts)))
            }
            (None, Some(j)) => {
                let p = match a.shifts {
                    None => elementary_schur(j),
                    Some(s) => shifted_elementary_schur(j, &ShiftTable::from_json(&load_json(&s)?)?),
                };
                Ok(poly_outcome(&p))
            }
            (None, None) => Err(Error::InvalidArgument("give --partition or --elementary".into())),
        },
        Verb::TauKp(a) => {
            let l = parse_partition(&a.partition)?;
            let shifts = parse_shift_list(a.shifts.as_deref(), l.len())?;
            Ok(poly_outcome(tau_kp(&l, &shifts)?.poly()))
        }
        Verb::TauMkpExtend(a) => {
            let l = parse_partition(&a.base.partition)?;
            let shifts = parse_shift_list(a.base.shifts.as_deref(), l.len())?;
            let d = match &a.d {
                Some(s) => ShiftTable::from_json(&load_json(s)?)?,
                None => ShiftTable::new(),
            };
            let need_mu = || a.mu.ok_or_else(|| Error::InvalidArgument("--mu is required".into()));
            let case = match a.case {
                CaseArg::Prepend => MkpCase::Prepend { mu: need_mu()? },
                CaseArg::Insert => MkpCase::Insert {
                    i: a.position.ok_or_else(|| Error::InvalidArgument("--position is required".into()))?,
                    mu: need_mu()?,
                },
                CaseArg::Decrement => MkpCase::Decrement,
            };
            let (l2, s2) = mkp_successor(&l, &shifts, case, &d)?;
            let tau = tau_kp(&l2, &s2)?;
            let v = json!({
                "partition": l2.to_string(),
                "shifts": s2.iter().map(ShiftTable::to_json).collect::<Vec<_>>(),
                "tau": tau.poly().to_json(),
            });
            let human = format!("partition {l2}\ntau {}", tau.poly());
            Ok(Outcome::Value(v, human))
        }
        Verb::TauNkdv(a) => {
            let l = parse_partition(&a.partition)?;
            let mut classes = BTreeMap::new();
            if let Some(s) = &a.class_shifts {
                let Value::Object(m) = load_json(s)? else {
                    return Err(Error::Parse("class shifts must be a JSON object".into()));
                };
                for (k, v) in m {
                    let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad residue class {k:?}")))?;
                    classes.insert(k, ShiftTable::from_json(&v)?);
                }
            }
            Ok(poly_outcome(tau_nkdv(&l, a.n, &classes)?.poly()))
        }
        Verb::TauNkdvData(a) => {
            let data = NkdvData {
                n: a.n,
                perm: parse_list(&a.perm, "permutation")?,
                m: parse_list(&a.m, "multiplicity")?,
                shifts: parse_shift_list(a.shifts.as_deref(), a.n as usize)?,
            };
            let out = tau_nkdv_from_data(&data)?;
            let v = json!({
                "chain": out.chain.to_json(),
                "tau_n": out.tau_n.poly().to_json(),
                "scalar": format_rational(&out.scalar),
            });
            let mut human = String::new();
            for t in out.chain.iter() {
                human.push_str(&format!("tau_{} = {}\n", t.level(), t.poly()));
            }
            human.push_str(&format!("tau_{} = {} * tau_0", a.n, format_rational(&out.scalar)));
            Ok(Outcome::Value(v, human))
        }
        Verb::CheckNPeriodic(a) => {
            if a.n < 2 {
                return Err(Error::InvalidArgument("n must be at least 2".into()));
            }
            let l = parse_partition(&a.partition)?;
            let spec = v_lambda(&l);
            let periodic = is_n_periodic(&l, a.n);
            let mut v = if periodic {
                Verdict::pass()
            } else {
                Verdict::fail(format!("{} is not {}-periodic", l, a.n))
            };
            v.detail.get_or_insert_with(|| {
                format!("V = {:?} then every integer ≤ {}", spec.head(), spec.tail_start())
            });
            Ok(Outcome::Verdict(v))
        }
        Verb::EnumerateNPeriodic(a) => {
            if a.n < 2 {
                return Err(Error::InvalidArgument("n must be at least 2".into()));
            }
            let list: Vec<String> = enumerate_n_periodic(a.n, a.max_weight)
                .iter()
                .map(|p| p.to_string())
                .collect();
            let human = list.iter().map(|p| format!("({p})")).collect::<Vec<_>>().join("\n");
            Ok(Outcome::Value(json!(list), human))
        }
        Verb::VerifyMkp(a) => {
            if let Some(c) = &a.chain {
                let chain = parse_chain(c)?;
                let taus: Vec<&TauFunction> = chain.iter().collect();
                let mut out = Vec::new();
                for w in taus.windows(2) {
                    out.push(verify_mkp(w[1], w[0], 1));
                    out.push(verify_first_mkp(w[0], w[1]));
                }
                return Ok(Outcome::Verdict(Verdict::all(out)));
            }
            let (Some(k), Some(l)) = (&a.tau_k, &a.tau_l) else {
                return Err(Error::InvalidArgument("give --tau-k and --tau-l, or --chain".into()));
            };
            let tk = parse_tau(k, 0)?;
            if a.first {
                return Ok(Outcome::Verdict(verify_first_mkp(&tk, &parse_tau(l, 1)?)));
            }
            if a.d < 0 {
                return Err(Error::InvalidArgument("d must be nonnegative".into()));
            }
            Ok(Outcome::Verdict(verify_mkp(&tk, &parse_tau(l, -a.d)?, a.d)))
        }
        Verb::VerifyNkdv(a) => Ok(Outcome::Verdict(verify_nkdv(&parse_chain(&a.chain)?, a.n))),
        Verb::VerifyLax(a) => {
            let flows: Vec<u32> = parse_list(&a.flows, "flow")?;
            if flows.contains(&0) {
                return Err(Error::InvalidArgument("flows start at 1".into()));
            }
            let chain = match (&a.tau, &a.chain) {
                (Some(t), _) => TauChain::new(vec![parse_tau(t, 0)?])?,
                (None, Some(c)) => parse_chain(c)?,
                (None, None) => return Err(Error::InvalidArgument("give --tau or --chain".into())),
            };
            let taus: Vec<&TauFunction> = chain.iter().collect();
            let mut out = Vec::new();
            for t in &taus {
                out.push(adjoint_consistency_check(t, floor));
                for &j in &flows {
                    out.push(sato_wilson_check(t, j, floor));
                    out.push(lax_equation_check(t, j, floor));
                }
            }
            for w in taus.windows(2) {
                out.push(intertwining_check(w[0], w[1], floor));
                out.push(ratio_eigenfunction_check(w[0], w[1], &flows));
            }
            Ok(Outcome::Verdict(Verdict::all(out)))
        }
        Verb::VerifyMkdv(a) => {
            let chain = parse_chain(&a.chain)?;
            let rows: Vec<usize> = match a.row {
                Some(r) => vec![r],
                None => (0..a.n as usize).collect(),
            };
            let mut out = Vec::new();
            if a.factorized {
                out.push(nkdv_factorized_check(&chain, a.n, floor));
            }
            for i in rows {
                out.push(mkdv_flow_check(&chain, a.n, i, a.flow)?);
            }
            Ok(Outcome::Verdict(Verdict::all(out)))
        }
        Verb::Crum(a) => {
            let Value::Array(items) = load_json(&a.funcs)? else {
                return Err(Error::Parse("funcs must be a JSON list".into()));
            };
            let funcs: Vec<RationalFunction> =
                items.iter().map(RationalFunction::from_json).collect::<Result<_>>()?;
            if funcs.is_empty() {
                return Err(Error::InvalidArgument("funcs must not be empty".into()));
            }
            Ok(Outcome::Verdict(crum_check(&funcs)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut v = vec!["polytau"];
        v.extend_from_slice(args);
        run(v)
    }

    #[test]
    fn schur_and_kp() {
        let (code, out) = call(&["tau-kp", "--partition", "2,1", "--shifts", "[{},{}]"]);
        assert_eq!(code, 0);
        let s21 = crate::schur::schur_of_partition(&"2,1".parse().unwrap());
        assert_eq!(out, s21.to_json_string());
        let (code, out) = call(&["schur", "--elementary", "2"]);
        assert_eq!(code, 0);
        assert_eq!(Polynomial::from_json_str(&out).unwrap(), elementary_schur(2));
        assert_eq!(call(&["tau-kp", "--partition", "1,2"]).0, 2);
    }

    #[test]
    fn periodicity() {
        assert_eq!(call(&["check-n-periodic", "--n", "4", "--partition", "6,3,2,1"]).0, 0);
        assert_eq!(call(&["check-n-periodic", "--n", "2", "--partition", "2"]).0, 1);
        let (code, out) = call(&["tau-nkdv", "--n", "2", "--partition", "2"]);
        assert_eq!(code, 1);
        assert!(out.contains("error"));
        let (code, out) = call(&["enumerate-n-periodic", "--n", "2", "--max-weight", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, r#"["","1","2,1"]"#);
    }

    #[test]
    fn verification_exit_codes() {
        let t1sq = Polynomial::t(1).pow(2).to_json_string();
        assert_eq!(call(&["verify-mkp", "--tau-k", &t1sq, "--tau-l", &t1sq]).0, 1);
        let s21 = crate::schur::schur_of_partition(&"2,1".parse().unwrap()).to_json_string();
        assert_eq!(call(&["verify-mkp", "--tau-k", &s21, "--tau-l", &s21]).0, 0);
        assert_eq!(call(&["verify-mkp", "--first", "--tau-k", "[]", "--tau-l", "[]"]).0, 2);
        assert_eq!(call(&["no-such-verb"]).0, 2);
        assert_eq!(call(&["crum", "--funcs", "[[{\"coeff\":\"1\",\"exps\":{\"t1\":1}}]]"]).0, 0);
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["tau-nkdv-data", "--n", "2", "--perm", "2,1", "--m", "0,2", "--shifts", r#"[{},{"1":"1/2"}]"#];
        let a = call(&args);
        assert_eq!(a.0, 0);
        assert_eq!(a, call(&args));
        let chain = parse_chain(&a.1).unwrap();
        assert_eq!(chain.len(), 2);
    }
}
