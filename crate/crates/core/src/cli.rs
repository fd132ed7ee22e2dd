//! Command-line front end. Every subcommand prints one JSON document.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::DEFAULT_SEED;
use crate::canonical3::{
    abc_from_canonical_branch, case_3_3kplus1, tensor_merge_symplectic, tensor_residual,
    tensor_split_symplectic, TensorSplit,
};
use crate::clifford::{
    action_residual, conjugate_displacement, symplectic_unitary, zauner, zauner_k, CliffordElem,
};
use crate::error::Error;
use crate::matrix::{CVector, UMatrix, VectorJson, DEFAULT_TOL};
use crate::modring::{classify_conjugacy, dbar, is_canonical_order3, ScanLimit, SympMat};
use crate::phase::Phase;
use crate::sicfid::{
    povm_probabilities, reconstruct_state, search_fiducial, verify_fiducial, SearchOptions,
    VERIFY_TOL,
};
use crate::trianglerep::{
    abc_rep_3d, abc_rep_singular, commutant_dimension, decompose_uvw, is_singular, TriRepParams,
};
use crate::whgroup::{clock, displacement, displacement_lift, shift, symp_form, DispIndex};

#[derive(Parser, Debug)]
#[command(
    name = "sic333",
    version,
    about = "Clifford-group, triangle-group and SIC computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Dimension d
    #[arg(long = "dim", value_parser = clap::value_parser!(u64).range(1..))]
    dim: Option<u64>,
    /// Symplectic matrix, row-major "m1,m2,m3,m4"; reduced mod d̄
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    #[arg(long)]
    j: Option<u8>,
    #[arg(long)]
    l: Option<u8>,
    /// Tolerance for pass/fail decisions
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iterations per search restart
    #[arg(long)]
    budget: Option<usize>,
    /// Write JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "json-pretty")]
    json_pretty: bool,
    /// Use Zauner's matrix [[0,-1],[1,-1]]
    #[arg(long)]
    zauner: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weyl–Heisenberg relation residuals
    WhCheck(Common),
    /// Build A_M, Zauner's unitary or 𝔷_k and its displacement action
    Clifford {
        #[command(flatten)]
        common: Common,
        /// Include the dense matrix in the output
        #[arg(long = "emit-matrix")]
        emit_matrix: bool,
    },
    /// Conjugacy class of a canonical order-three matrix
    Classify(Common),
    /// Build a triangle-group representation and test irreducibility
    TriRep {
        #[command(flatten)]
        common: Common,
        /// α as a fraction of a turn, "num/den"
        #[arg(long)]
        alpha: Option<String>,
        /// β as a fraction of a turn, "num/den"
        #[arg(long)]
        beta: Option<String>,
    },
    /// Triangle-group analysis of a canonical order-three matrix
    Canon3 {
        #[command(flatten)]
        common: Common,
        /// Cube-root branch of ε
        #[arg(long, default_value_t = 0)]
        branch: u8,
    },
    /// Split or merge symplectic matrices across Z_{n1 n2} = Z_{n1} × Z_{n2}
    TensorSplit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
        /// Factor over n1 (merge mode)
        #[arg(long, allow_hyphen_values = true)]
        left: Option<String>,
        /// Factor over n2 (merge mode)
        #[arg(long, allow_hyphen_values = true)]
        right: Option<String>,
    },
    /// Check the SIC conditions for a fiducial vector
    SicVerify {
        #[command(flatten)]
        common: Common,
        /// JSON vector file {"dim": d, "entries": [[re, im], ...]}
        #[arg(long)]
        vector: PathBuf,
    },
    /// Numerical fiducial search in an order-three eigenspace
    SicSearch {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        restarts: Option<usize>,
        /// Eigenvalue ω₃^index to search in
        #[arg(long, default_value_t = 0)]
        eigen: u8,
    },
    /// Reconstruct a state from SIC probabilities
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        vector: PathBuf,
        /// Comma-separated probabilities; a random state from --seed otherwise
        #[arg(long, allow_hyphen_values = true)]
        probabilities: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotCanonical { .. }
            | Error::Verification(_)
            | Error::NotSic(_)
            | Error::Unclassified { .. }
            | Error::NotOrderThree(_)
            | Error::Decomposition(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(Value, bool), Failure>;

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Parses argv, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let common = common_of(&cli.command).clone();
    let outcome = dispatch(cli.command);
    match outcome {
        Ok((value, passed)) => match emit(&value, &common) {
            Ok(()) => {
                if passed {
                    0
                } else {
                    1
                }
            }
            Err(msg) => {
                eprintln!("error: {msg}");
                2
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            1
        }
    }
}

fn common_of(c: &Command) -> &Common {
    match c {
        Command::WhCheck(c) | Command::Classify(c) => c,
        Command::Clifford { common, .. }
        | Command::TriRep { common, .. }
        | Command::Canon3 { common, .. }
        | Command::TensorSplit { common, .. }
        | Command::SicVerify { common, .. }
        | Command::SicSearch { common, .. }
        | Command::Reconstruct { common, .. } => common,
    }
}

fn emit(value: &Value, c: &Common) -> std::result::Result<(), String> {
    let text = if c.json_pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .map_err(|e| e.to_string())?;
    match &c.out {
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| e.to_string())
        }
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::WhCheck(c) => wh_check(&c),
        Command::Clifford {
            common,
            emit_matrix,
        } => clifford_cmd(&common, emit_matrix),
        Command::Classify(c) => classify_cmd(&c),
        Command::TriRep {
            common,
            alpha,
            beta,
        } => tri_rep_cmd(&common, alpha, beta),
        Command::Canon3 { common, branch } => canon3_cmd(&common, branch),
        Command::TensorSplit {
            common,
            n1,
            n2,
            left,
            right,
        } => tensor_cmd(&common, n1, n2, left, right),
        Command::SicVerify { common, vector } => sic_verify_cmd(&common, &vector),
        Command::SicSearch {
            common,
            restarts,
            eigen,
        } => sic_search_cmd(&common, restarts, eigen),
        Command::Reconstruct {
            common,
            vector,
            probabilities,
        } => reconstruct_cmd(&common, &vector, probabilities),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn dim(c: &Common) -> std::result::Result<u64, Failure> {
    c.dim.map_or_else(|| usage("--dim is required"), Ok)
}

fn tol(c: &Common, default: f64) -> f64 {
    c.tol.unwrap_or(default)
}

fn parse_entries(s: &str) -> std::result::Result<[i64; 4], Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return usage(format!(
            "matrix needs four comma-separated entries, got {s:?}"
        ));
    }
    let mut out = [0i64; 4];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p
            .parse()
            .map_err(|_| Failure::Usage(format!("matrix entry {p:?} is not an integer")))?;
    }
    Ok(out)
}

fn matrix_over(s: &str, n: u64) -> std::result::Result<SympMat, Failure> {
    Ok(SympMat::new(parse_entries(s)?, n)?)
}

/// `--matrix` or `--zauner`, reduced mod d̄.
fn symp_arg(c: &Common, d: u64) -> std::result::Result<SympMat, Failure> {
    match (&c.matrix, c.zauner) {
        (Some(_), true) => usage("--matrix and --zauner are exclusive"),
        (Some(s), false) => matrix_over(s, dbar(d)),
        (None, true) => Ok(SympMat::zauner(dbar(d))),
        (None, false) => usage("--matrix or --zauner is required"),
    }
}

fn parse_turns(s: &str) -> std::result::Result<Phase, Failure> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| Failure::Usage(format!("phase {s:?} must look like num/den")))?;
    let n: i64 = n
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("bad numerator in {s:?}")))?;
    let d: i64 = d
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("bad denominator in {s:?}")))?;
    if d == 0 {
        return usage("phase denominator must be nonzero");
    }
    Ok(Phase::new(n, d))
}

fn read_vector(path: &PathBuf) -> std::result::Result<CVector, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| Failure::Usage(format!("{}: {e}", path.display()));
    let mut doc: Value = serde_json::from_str(&text).map_err(bad)?;
    // Search reports carry the vector under "vector".
    if let Some(inner) = doc.get_mut("vector") {
        doc = inner.take();
    }
    let v: VectorJson = serde_json::from_value(doc).map_err(bad)?;
    Ok(v.0)
}

fn wh_check(c: &Common) -> Outcome {
    let d = dim(c)?;
    let t = tol(c, DEFAULT_TOL);
    let n = d as usize;
    let id = UMatrix::identity(n);
    let (z, x) = (clock(d), shift(d));
    let mut weyl = 0.0f64;
    let mut adjoint = 0.0f64;
    for a in DispIndex::all(d) {
        let da = displacement(&a);
        let neg = displacement_lift(-(a.a1 as i64), -(a.a2 as i64), d);
        adjoint = adjoint.max(da.adjoint().max_diff(&neg));
        for b in DispIndex::all(d) {
            let lhs = &da * &displacement(&b);
            let sum = displacement_lift(a.a1 as i64 + b.a1 as i64, a.a2 as i64 + b.a2 as i64, d);
            let rhs = sum.scale(Phase::tau(d).pow(symp_form(&a, &b) as i64).to_complex());
            weyl = weyl.max(lhs.max_diff(&rhs));
        }
    }
    let w = Phase::omega(d).to_complex();
    let commutation = (&z * &x).max_diff(&(&x * &z).scale(w));
    let powers = z
        .pow(d as u32)
        .max_diff(&id)
        .max(x.pow(d as u32).max_diff(&id));
    let max = weyl.max(adjoint).max(commutation).max(powers);
    Ok((
        json!({
            "command": "wh-check",
            "d": d,
            "weyl_relation": weyl,
            "adjoint": adjoint,
            "commutation": commutation,
            "order": powers,
            "max_residual": max,
            "tol": t,
            "pass": max <= t,
        }),
        max <= t,
    ))
}

fn clifford_cmd(c: &Common, emit_matrix: bool) -> Outcome {
    let d = dim(c)?;
    let t = tol(c, DEFAULT_TOL);
    let (kind, m, a) = match c.k {
        Some(k) => {
            if c.matrix.is_some() || c.zauner {
                return usage("--k excludes --matrix and --zauner");
            }
            let m = SympMat::zauner_k(k, dbar(d))?;
            ("zauner_k", m, zauner_k(d, k)?)
        }
        None if c.zauner => ("zauner", SympMat::zauner(dbar(d)), zauner(d)),
        None => {
            let m = symp_arg(c, d)?;
            ("symplectic", m, symplectic_unitary(&m, d)?)
        }
    };
    let elem = CliffordElem::symplectic(m, d)?;
    let action: Vec<Value> = DispIndex::all(d)
        .map(|idx| {
            let (img, ph) = conjugate_displacement(&elem, &idx);
            json!({ "a": idx, "image": img, "phase": ph })
        })
        .collect();
    let residual = action_residual(&a, &m, d);
    let unitarity = a.unitarity_residual();
    let cube = a.pow(3).max_diff(&UMatrix::identity(d as usize));
    let pass = residual <= t && unitarity <= t;
    let mut out = json!({
        "command": "clifford",
        "d": d,
        "kind": kind,
        "M": m,
        "unitarity_residual": unitarity,
        "action_residual": residual,
        "cube_minus_identity": cube,
        "action": action,
        "tol": t,
        "pass": pass,
    });
    if emit_matrix {
        out["matrix"] = to_value(&a);
    }
    Ok((out, pass))
}

fn classify_cmd(c: &Common) -> Outcome {
    let d = dim(c)?;
    let m = symp_arg(c, d)?;
    if !is_canonical_order3(&m, d) {
        return Err(Error::NotCanonical { d }.into());
    }
    let r = classify_conjugacy(&m, d, ScanLimit::from_env())?;
    Ok((
        json!({
            "command": "classify",
            "d": d,
            "M": m,
            "class": r.class.label(),
            "representative": r.representative,
            "lift": r.lift,
            "certificate": r.certificate,
        }),
        true,
    ))
}

fn tri_rep_cmd(c: &Common, alpha: Option<String>, beta: Option<String>) -> Outcome {
    let d = dim(c)?;
    let k = c.k.unwrap_or(1);
    let t = tol(c, DEFAULT_TOL);
    let rep = match (c.j, c.l) {
        (Some(j), Some(l)) => {
            if alpha.is_some() || beta.is_some() {
                return usage("--j/--l select a singular representation; drop --alpha/--beta");
            }
            abc_rep_singular(d, k, j, l)?
        }
        (None, None) => {
            let a = alpha
                .as_deref()
                .map(parse_turns)
                .transpose()?
                .unwrap_or(Phase::ONE);
            let b = beta
                .as_deref()
                .map(parse_turns)
                .transpose()?
                .unwrap_or(Phase::ONE);
            abc_rep_3d(&TriRepParams::from_phases(d, k, a, b)?)?
        }
        _ => return usage("--j and --l must be given together"),
    };
    let params = rep.params.expect("constructors record parameters");
    let residuals = rep.residuals();
    let commutant = commutant_dimension(&rep.generators())?;
    let blocks = decompose_uvw(&rep.u, &rep.v, &rep.w, DEFAULT_SEED)?;
    let pass = residuals.max() <= t;
    Ok((
        json!({
            "command": "tri-rep",
            "d": d,
            "k": k,
            "dimension": rep.dim(),
            "params": params,
            "singular_index": is_singular(&params),
            "residuals": residuals,
            "max_residual": residuals.max(),
            "commutant_dimension": commutant,
            "irreducible": commutant == 1,
            "uvw_blocks": blocks,
            "tol": t,
            "pass": pass,
        }),
        pass,
    ))
}

fn canon3_cmd(c: &Common, branch: u8) -> Outcome {
    let d = dim(c)?;
    let t = tol(c, DEFAULT_TOL);
    if branch > 2 {
        return usage("--branch must lie in 0..=2");
    }
    let m = symp_arg(c, d)?;
    let limit = ScanLimit::from_env();
    let (rep, analysis) = abc_from_canonical_branch(&m, d, branch, limit)?;
    let residuals = rep.residuals();
    let mut out = to_value(&analysis);
    out["command"] = json!("canon3");
    out["residuals"] = to_value(&residuals);
    out["tol"] = json!(t);
    let mut pass = residuals.max() <= t;
    if let Ok(case) = case_3_3kplus1(d, limit) {
        if case.m == m {
            pass &= case.all_singular && case.tensor_residual <= t;
            out["family_3_3kplus1"] = to_value(&case);
        }
    }
    out["pass"] = json!(pass);
    Ok((out, pass))
}

fn tensor_cmd(
    c: &Common,
    n1: u64,
    n2: u64,
    left: Option<String>,
    right: Option<String>,
) -> Outcome {
    let t = tol(c, DEFAULT_TOL);
    let split = TensorSplit::new(n1, n2)?;
    let (m, m1, m2, mode) = match (&c.matrix, left, right) {
        (Some(s), None, None) => {
            let m = matrix_over(s, split.dim())?;
            let (a, b) = tensor_split_symplectic(&m, &split)?;
            (m, a, b, "split")
        }
        (None, Some(l), Some(r)) => {
            let a = matrix_over(&l, n1)?;
            let b = matrix_over(&r, n2)?;
            (tensor_merge_symplectic(&a, &b, &split)?, a, b, "merge")
        }
        _ => return usage("give either --matrix (split) or --left and --right (merge)"),
    };
    let roundtrip = tensor_merge_symplectic(&m1, &m2, &split)? == m
        && tensor_split_symplectic(&m, &split)? == (m1, m2);
    let residual = tensor_residual(&m, &m1, &m2, &split)?;
    let pass = roundtrip && residual <= t;
    Ok((
        json!({
            "command": "tensor-split",
            "mode": mode,
            "split": split,
            "M": m,
            "M_prime": m1,
            "M_double_prime": m2,
            "roundtrip": roundtrip,
            "tensor_residual": residual,
            "tol": t,
            "pass": pass,
        }),
        pass,
    ))
}

fn sic_verify_cmd(c: &Common, path: &PathBuf) -> Outcome {
    let f = read_vector(path)?;
    if let Some(d) = c.dim {
        if d as usize != f.len() {
            return usage(format!("--dim {d} but the vector has {} entries", f.len()));
        }
    }
    let r = verify_fiducial(&f, tol(c, VERIFY_TOL))?;
    let pass = r.is_sic;
    let mut out = to_value(&r);
    out["command"] = json!("sic-verify");
    Ok((out, pass))
}

fn sic_search_cmd(c: &Common, restarts: Option<usize>, eigen: u8) -> Outcome {
    let d = dim(c)?;
    let m = if c.matrix.is_some() || c.zauner {
        Some(symp_arg(c, d)?)
    } else {
        None
    };
    let mut opts = SearchOptions {
        seed: c.seed,
        eigen_index: eigen,
        ..Default::default()
    };
    if let Some(b) = c.budget {
        opts.budget = b;
    }
    if let Some(r) = restarts {
        opts.restarts = r;
    }
    let mut r = search_fiducial(d, m.as_ref(), &opts)?;
    if let Some(t) = c.tol {
        r.tol = t;
        r.is_sic = r.max_equiangular_dev <= t;
    }
    let pass = r.is_sic && r.frame_residual <= r.tol;
    let mut out = to_value(&r);
    out["command"] = json!("sic-search");
    out["options"] = to_value(&opts);
    Ok((out, pass))
}

fn random_state(d: usize, seed: u64) -> UMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = UMatrix::from_fn(d, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let p = &g * &g.adjoint();
    let tr = p.trace();
    p.scale(Complex64::new(1.0, 0.0) / tr)
}

fn reconstruct_cmd(c: &Common, path: &PathBuf, probabilities: Option<String>) -> Outcome {
    let f = read_vector(path)?;
    let t = tol(c, 1e-8);
    let (probs, truth) = match probabilities {
        Some(s) => {
            let p: std::result::Result<Vec<f64>, _> =
                s.split(',').map(|x| x.trim().parse()).collect();
            (
                p.map_err(|_| Failure::Usage("probabilities must be numbers".into()))?,
                None,
            )
        }
        None => {
            let rho = random_state(f.len(), c.seed);
            (povm_probabilities(&rho, &f)?.probabilities, Some(rho))
        }
    };
    let r = reconstruct_state(&probs, &f)?;
    let error = truth.as_ref().map(|rho| r.rho.max_diff(rho));
    let pass = r.residual <= t && error.is_none_or(|e| e <= t);
    Ok((
        json!({
            "command": "reconstruct",
            "d": f.len(),
            "probabilities": probs,
            "rho": r.rho,
            "condition_number": r.condition_number,
            "residual": r.residual,
            "state": truth,
            "max_entry_error": error,
            "tol": t,
            "pass": pass,
        }),
        pass,
    ))
}
