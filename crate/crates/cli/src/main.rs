//! `equisplit`: run the local, global and characteristic 2 verifications.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a computed value disagreed with its
//! closed form (or a verification failed).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use equisplit::ascover::LocalCover;
use equisplit::char2ex;
use equisplit::cohom::{
    d_image_closed_form, d_image_rank, default_prec, h1_basis_certificate, h1_closed_form,
    h1_lattice, min_window, valid_jump, BasisCertificate,
};
use equisplit::gf::is_prime;
use equisplit::profile::{self, DefectReport, MainTheoremVerdict, RamificationProfile};
use equisplit::verify;

#[derive(Parser, Debug)]
#[command(
    name = "equisplit",
    version,
    about = "Exact checks for Z/p-covers in characteristic p"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local cohomology of a ramified point with jump n.
    Local {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        /// Lattice cutoff: computes H^1(G, t^a B).
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        a: i64,
        /// Window width (defaults to the minimal stable width n + p + 1).
        #[arg(long)]
        window: Option<i64>,
    },
    /// Splitting defect and invariant dimensions of a cover.
    Defect {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        gy: Option<u64>,
        /// Ramification jumps, one per branch point (empty for a free action).
        #[arg(long, num_args = 0..)]
        jumps: Option<Vec<u64>>,
        /// `y^m = f(z^p - z)` with `deg f = d`.
        #[arg(long, num_args = 2, value_names = ["M", "D"])]
        superelliptic: Option<Vec<u64>>,
        /// Profile JSON file: {"p": int, "gY": int, "jumps": [int]}.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// The automorphism group of y^2 + y = x^3 over F_4.
    Char2 {
        #[arg(long, default_value_t = 24)]
        prec: i64,
    },
    /// Lattice vs closed form over a grid of (p, n, a).
    Sweep {
        #[arg(long, num_args = 1.., required = true)]
        p: Vec<u64>,
        /// Inclusive range `lo..hi`.
        #[arg(long, default_value = "1..9")]
        n: String,
        #[arg(long, default_value = "-3..12", allow_hyphen_values = true)]
        a: String,
    },
    /// Run every acceptance criterion.
    VerifyAll,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
}

type CmdResult = Result<(String, bool), Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("invalid range '{s}' (expected lo..hi)"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct LocalReport {
    p: u64,
    n: u64,
    a: i64,
    window: i64,
    h1_lattice: usize,
    h1_closed: i64,
    certificate: BasisCertificate,
    d_rank_lattice: usize,
    d_rank_closed: i64,
    d_surviving_exponents: Vec<i64>,
    weakly_ramified: bool,
    matches: bool,
}

fn cmd_local(p: u64, n: u64, a: i64, window: Option<i64>, format: Format) -> CmdResult {
    if !is_prime(p) {
        return Err(Failure::Usage(format!("{p} is not prime")));
    }
    if !valid_jump(p, n) {
        return Err(Failure::Usage(format!(
            "jump n = {n} must be positive and prime to p = {p}"
        )));
    }
    let w = window.unwrap_or_else(|| min_window(p, n));
    let cov = LocalCover::build(p, n, default_prec(p, n, a.max(0), w)).map_err(usage)?;
    let m = h1_lattice(&cov, a, w).map_err(usage)?;
    let cert = h1_basis_certificate(&cov, a, w).map_err(usage)?;
    let d = d_image_rank(&cov, w).map_err(usage)?;
    let r = LocalReport {
        p,
        n,
        a,
        window: w,
        h1_lattice: m.dim(),
        h1_closed: h1_closed_form(p, n, a),
        certificate: cert,
        d_rank_lattice: d.rank,
        d_rank_closed: d_image_closed_form(p, n),
        d_surviving_exponents: d.surviving_exponents,
        weakly_ramified: n == 1,
        matches: false,
    };
    let matches = r.h1_lattice as i64 == r.h1_closed && r.d_rank_lattice as i64 == r.d_rank_closed;
    let r = LocalReport { matches, ..r };
    let out = match format {
        Format::Json => to_json(&r),
        Format::Csv => format!(
            "p,n,a,h1_lattice,h1_closed,d_rank_lattice,d_rank_closed,match\n{},{},{},{},{},{},{},{}",
            r.p,
            r.n,
            r.a,
            r.h1_lattice,
            r.h1_closed,
            r.d_rank_lattice,
            r.d_rank_closed,
            if r.matches { "MATCH" } else { "MISMATCH" }
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "p = {p}, n = {n}, a = {a}, window = {w}");
            let _ = writeln!(s, "dim H^1(G, t^a B): lattice {}, closed form {}", r.h1_lattice, r.h1_closed);
            let _ = writeln!(s, "basis exponents: {:?}", r.certificate.basis_exponents);
            let _ = writeln!(s, "vanishing classes [t^i] = [x^(i/p)]: {:?}", r.certificate.vanishing);
            let _ = writeln!(s, "rank of d: lattice {}, closed form {}", r.d_rank_lattice, r.d_rank_closed);
            let _ = writeln!(s, "surviving exponents: {:?}", r.d_surviving_exponents);
            if n == 1 {
                let _ = writeln!(s, "n = 1: weakly ramified, d vanishes");
            }
            let _ = write!(s, "{}", if matches { "MATCH" } else { "MISMATCH" });
            s
        }
    };
    Ok((out, matches))
}

#[derive(Serialize)]
struct DefectOutput {
    profile: RamificationProfile,
    report: DefectReport,
    defect_from_local_ranks: u64,
    main_theorem: MainTheoremVerdict,
    cross_check: bool,
}

fn load_profile(path: &PathBuf) -> Result<RamificationProfile, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(usage)?;
    // accept a bare profile or the output of `defect --format json`
    let inner = value.get("profile").cloned().unwrap_or(value);
    let prof: RamificationProfile = serde_json::from_value(inner).map_err(usage)?;
    prof.validate().map_err(usage)?;
    Ok(prof)
}

fn cmd_defect(
    p: Option<u64>,
    gy: Option<u64>,
    jumps: Option<Vec<u64>>,
    superelliptic: Option<Vec<u64>>,
    path: Option<PathBuf>,
    format: Format,
) -> CmdResult {
    let prof = match (path, superelliptic) {
        (Some(_), Some(_)) => {
            return Err(Failure::Usage(
                "--profile and --superelliptic are exclusive".into(),
            ))
        }
        (Some(path), None) => load_profile(&path)?,
        (None, Some(md)) => {
            let p = p.ok_or_else(|| Failure::Usage("--superelliptic needs --p".into()))?;
            profile::superelliptic(md[0], md[1], p).map_err(usage)?
        }
        (None, None) => {
            let p = p.ok_or_else(|| Failure::Usage("need --p (or --profile)".into()))?;
            let gy = gy.ok_or_else(|| Failure::Usage("need --gy".into()))?;
            RamificationProfile::new(p, gy, jumps.unwrap_or_default()).map_err(usage)?
        }
    };
    let report = profile::dims(&prof).map_err(usage)?;
    let ranks = profile::defect_from_local_ranks(&prof).map_err(usage)?;
    let verdict = profile::main_theorem_check(&prof);
    let ok = ranks == report.defect && verdict.consistent;
    let out = DefectOutput {
        profile: prof,
        report,
        defect_from_local_ranks: ranks,
        main_theorem: verdict,
        cross_check: ok,
    };
    let text = match format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let r = &out.report;
            format!(
                "p,gY,jumps,defect,deg_R_prime,g_x,h0_omega_inv,h1_O_inv,h1_dR_inv,weakly_ramified,cross_check\n{},{},{},{},{},{},{},{},{},{},{}",
                out.profile.p,
                out.profile.g_y,
                out.profile.jumps.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
                r.defect,
                r.deg_r_prime,
                r.g_x,
                r.h0_omega_inv,
                r.h1_o_inv,
                r.h1_dr_inv,
                r.weakly_ramified,
                ok
            )
        }
        Format::Text => {
            let r = &out.report;
            let mut s = String::new();
            let _ = writeln!(
                s,
                "p = {}, g_Y = {}, jumps = {:?}",
                out.profile.p, out.profile.g_y, out.profile.jumps
            );
            if out.profile.is_free() {
                let _ = writeln!(s, "free action");
            }
            let _ = writeln!(s, "g_X = {}, deg R' = {}", r.g_x, r.deg_r_prime);
            let _ = writeln!(s, "dim H^0(X, Omega)^G = {}", r.h0_omega_inv);
            let _ = writeln!(s, "dim H^1(X, O)^G = {}", r.h1_o_inv);
            let _ = writeln!(s, "dim H^1_dR(X)^G = {}", r.h1_dr_inv);
            let _ = writeln!(
                s,
                "defect = {} (sum of local d-image ranks: {})",
                r.defect, out.defect_from_local_ranks
            );
            let _ = writeln!(s, "weakly ramified: {}", r.weakly_ramified);
            if out.main_theorem.char2_exception {
                let _ = writeln!(s, "p = 2 exception: defect 0 although not weakly ramified");
            }
            let _ = write!(s, "{}", if ok { "MATCH" } else { "MISMATCH" });
            s
        }
    };
    Ok((text, ok))
}

fn cmd_char2(prec: i64, format: Format) -> CmdResult {
    let r = char2ex::filtration_report(prec).map_err(usage)?;
    let out = match format {
        Format::Json => to_json(&r),
        Format::Csv => {
            let mut s = String::from("i,size");
            for f in &r.filtration {
                let _ = write!(s, "\n{},{}", f.i, f.size);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "group_order: {} (associative: {})",
                r.group_order, r.associative
            );
            let sy = &r.sylow2_structure;
            let _ = writeln!(
                s,
                "2-Sylow (u = 1): order {}, {} involution(s), {} elements of order 4, quaternion: {}",
                sy.order, sy.involutions, sy.elements_of_order_4, sy.quaternion
            );
            let _ = writeln!(
                s,
                "indecomposable: {} (stable lines: {})",
                r.indecomposable, r.stable_lines
            );
            let w: Vec<String> = r
                .indecomposability_witnesses
                .iter()
                .map(|g| g.to_string())
                .collect();
            let _ = writeln!(s, "witnesses: {}", w.join(" "));
            for c in &r.ramification_orders {
                let o = c.order.map_or("inf".to_string(), |v| v.to_string());
                let _ = writeln!(s, "ord(g(s) - s) = {o}: {} element(s)", c.elements);
            }
            let sizes: Vec<usize> = r.filtration.iter().map(|f| f.size).collect();
            let _ = writeln!(s, "filtration sizes: {sizes:?}");
            for d in &r.paper_discrepancies {
                let _ = writeln!(s, "discrepancy: {d}");
            }
            s.trim_end().to_string()
        }
    };
    Ok((out, true))
}

#[derive(Serialize)]
struct SweepRow {
    p: u64,
    n: u64,
    a: i64,
    h1_lattice: usize,
    h1_closed: i64,
    d_rank_lattice: usize,
    d_rank_closed: i64,
    #[serde(rename = "match")]
    matches: bool,
}

fn sweep_point(p: u64, n: u64, a_lo: i64, a_hi: i64) -> Result<Vec<SweepRow>, Failure> {
    let w = min_window(p, n);
    let cov = LocalCover::build(p, n, default_prec(p, n, a_hi.max(0), w)).map_err(usage)?;
    let d = d_image_rank(&cov, w).map_err(usage)?;
    let d_closed = d_image_closed_form(p, n);
    (a_lo..=a_hi)
        .map(|a| {
            let h1 = h1_lattice(&cov, a, w).map_err(usage)?.dim();
            let closed = h1_closed_form(p, n, a);
            Ok(SweepRow {
                p,
                n,
                a,
                h1_lattice: h1,
                h1_closed: closed,
                d_rank_lattice: d.rank,
                d_rank_closed: d_closed,
                matches: h1 as i64 == closed && d.rank as i64 == d_closed,
            })
        })
        .collect()
}

fn cmd_sweep(ps: &[u64], n: &str, a: &str, format: Format) -> CmdResult {
    let (n_lo, n_hi) = parse_range(n)?;
    let (a_lo, a_hi) = parse_range(a)?;
    if n_lo < 1 {
        return Err(Failure::Usage("jumps start at 1".into()));
    }
    if let Some(p) = ps.iter().find(|&&p| !is_prime(p)) {
        return Err(Failure::Usage(format!("{p} is not prime")));
    }
    let points: Vec<(u64, u64)> = ps
        .iter()
        .flat_map(|&p| {
            (n_lo as u64..=n_hi as u64)
                .filter(move |&n| valid_jump(p, n))
                .map(move |n| (p, n))
        })
        .collect();
    // par_iter + collect keeps the input order
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&(p, n)| sweep_point(p, n, a_lo, a_hi))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let ok = rows.iter().all(|r| r.matches);
    let out = match format {
        Format::Json => to_json(&rows),
        Format::Csv | Format::Text => {
            let mut s =
                String::from("p,n,a,h1_lattice,h1_closed,d_rank_lattice,d_rank_closed,match");
            for r in &rows {
                let _ = write!(
                    s,
                    "\n{},{},{},{},{},{},{},{}",
                    r.p,
                    r.n,
                    r.a,
                    r.h1_lattice,
                    r.h1_closed,
                    r.d_rank_lattice,
                    r.d_rank_closed,
                    if r.matches { "MATCH" } else { "MISMATCH" }
                );
            }
            if format == Format::Text {
                let bad = rows.iter().filter(|r| !r.matches).count();
                let _ = write!(s, "\n# {} rows, {} mismatches", rows.len(), bad);
            }
            s
        }
    };
    Ok((out, ok))
}

fn cmd_verify_all(format: Format) -> CmdResult {
    let results = verify::run_all();
    let ok = results.iter().all(|c| c.passed);
    let out = match format {
        Format::Json => to_json(&results),
        Format::Csv => {
            let mut s = String::from("id,passed,title");
            for c in &results {
                let _ = write!(s, "\n{},{},\"{}\"", c.id, c.passed, c.title);
            }
            s
        }
        Format::Text => results
            .iter()
            .map(|c| {
                format!(
                    "criterion {}: {}  {} ({})",
                    c.id,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.title,
                    c.detail
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok((out, ok))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    let result = match cli.command {
        Command::Local { p, n, a, window } => cmd_local(p, n, a, window, format),
        Command::Defect {
            p,
            gy,
            jumps,
            superelliptic,
            profile,
        } => cmd_defect(p, gy, jumps, superelliptic, profile, format),
        Command::Char2 { prec } => cmd_char2(prec, format),
        Command::Sweep { p, n, a } => cmd_sweep(&p, &n, &a, format),
        Command::VerifyAll => cmd_verify_all(format),
    };
    match result {
        Ok((out, true)) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Ok((out, false)) => {
            println!("{out}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
