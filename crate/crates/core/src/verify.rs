//! The full verification suite, criterion by criterion, as used by `verify-all`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ascover::LocalCover;
use crate::char2ex::{self, AutTriple};
use crate::cohom::{
    d_image_closed_form, d_image_local, h1_closed_form, h1_local, min_window, periodic_cohomology,
    valid_jump, CyclicModule,
};
use crate::gf::FieldCtx;
use crate::linalg::Matrix;
use crate::modrep::{self, GroupAction};
use crate::profile::{self, RamificationProfile};

pub const PRIMES: [u64; 4] = [2, 3, 5, 7];
pub const SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(
    id: u8,
    title: &'static str,
    failures: Vec<String>,
    ok_detail: String,
) -> CriterionOutcome {
    let passed = failures.is_empty();
    let detail = if passed {
        ok_detail
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        format!("{} failure(s): {}", failures.len(), shown.join("; "))
    };
    CriterionOutcome {
        id,
        title,
        passed,
        detail,
    }
}

/// `(p, n)` with `p` in [`PRIMES`], `1 <= n <= 9`, `p` not dividing `n`.
pub fn local_grid() -> Vec<(u64, u64)> {
    PRIMES
        .iter()
        .flat_map(|&p| {
            (1..=9)
                .filter(move |&n| valid_jump(p, n))
                .map(move |n| (p, n))
        })
        .collect()
}

/// Random profile: `p` from [`PRIMES`], up to 4 branch points with jumps `<= 9`.
/// Free covers get `g_Y >= 1` since the projective line has no étale `Z/p`-covers.
pub fn random_profile<R: Rng>(rng: &mut R) -> RamificationProfile {
    let p = PRIMES[rng.gen_range(0..PRIMES.len())];
    let count = rng.gen_range(0..=4);
    let jumps: Vec<u64> = (0..count)
        .map(|_| loop {
            let n = rng.gen_range(1..=9);
            if valid_jump(p, n) {
                break n;
            }
        })
        .collect();
    let g_y = if jumps.is_empty() {
        rng.gen_range(1..=3)
    } else {
        rng.gen_range(0..=3)
    };
    RamificationProfile::new(p, g_y, jumps).expect("generated profile is valid")
}

pub fn random_profiles(count: usize, seed: u64) -> Vec<RamificationProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_profile(&mut rng)).collect()
}

pub fn criterion_1() -> CriterionOutcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    for (p, n) in local_grid() {
        for a in -3..=(n as i64 + 3) {
            cases += 1;
            let want = h1_closed_form(p, n, a);
            match h1_local(p, n, a, min_window(p, n)) {
                Ok(m) if m.dim() as i64 == want => {}
                Ok(m) => failures.push(format!(
                    "(p={p}, n={n}, a={a}): lattice {} vs {want}",
                    m.dim()
                )),
                Err(e) => failures.push(format!("(p={p}, n={n}, a={a}): {e}")),
            }
        }
    }
    outcome(
        1,
        "local H^1 lattice vs closed form",
        failures,
        format!("{cases} cases match"),
    )
}

pub fn criterion_2() -> CriterionOutcome {
    let mut failures = Vec::new();
    let grid = local_grid();
    for &(p, n) in &grid {
        let want = d_image_closed_form(p, n);
        match d_image_local(p, n) {
            Ok(d) if d.rank as i64 == want => {}
            Ok(d) => failures.push(format!("(p={p}, n={n}): rank {} vs {want}", d.rank)),
            Err(e) => failures.push(format!("(p={p}, n={n}): {e}")),
        }
    }
    outcome(
        2,
        "d-image rank vs closed form",
        failures,
        format!("{} (p, n) pairs match", grid.len()),
    )
}

pub fn criterion_3() -> CriterionOutcome {
    let mut failures = Vec::new();
    for p in [3u64, 5, 7] {
        for n in (1..=15).filter(|&n| valid_jump(p, n)) {
            let delta = profile::defect(&RamificationProfile {
                p,
                g_y: 0,
                jumps: vec![n],
            });
            if (delta == 0) != (n == 1) {
                failures.push(format!("(p={p}, n={n}): defect {delta}"));
            }
        }
    }
    for n in (1..=15).step_by(2) {
        let delta = profile::defect(&RamificationProfile {
            p: 2,
            g_y: 0,
            jumps: vec![n],
        });
        if delta != 0 {
            failures.push(format!("(p=2, n={n}): defect {delta}"));
        }
    }
    outcome(
        3,
        "defect vanishes exactly for weak ramification (p odd); always for p = 2",
        failures,
        "p in {3,5,7}: zero iff n = 1; p = 2: zero for odd n <= 15".into(),
    )
}

pub fn criterion_4() -> CriterionOutcome {
    let mut failures = Vec::new();
    for prof in random_profiles(50, SEED) {
        match profile::defect_from_local_ranks(&prof) {
            Ok(d) if d == profile::defect(&prof) => {}
            Ok(d) => failures.push(format!(
                "{prof:?}: ranks {d} vs formula {}",
                profile::defect(&prof)
            )),
            Err(e) => failures.push(format!("{prof:?}: {e}")),
        }
    }
    outcome(
        4,
        "defect equals the sum of local d-image ranks",
        failures,
        "50 random profiles".into(),
    )
}

pub fn criterion_5() -> CriterionOutcome {
    let mut failures = Vec::new();
    for prof in random_profiles(50, SEED) {
        if let Err(e) = profile::dims(&prof) {
            failures.push(format!("{prof:?}: {e}"));
        }
    }
    let worked = RamificationProfile {
        p: 3,
        g_y: 1,
        jumps: vec![2],
    };
    match profile::dims(&worked) {
        Ok(r) => {
            let got = (r.h0_omega_inv, r.h1_o_inv, r.h1_dr_inv, r.defect);
            if got != (2, 2, 3, 1) {
                failures.push(format!("(p=3, gY=1, [2]) gives {got:?}"));
            }
        }
        Err(e) => failures.push(format!("(p=3, gY=1, [2]): {e}")),
    }
    outcome(
        5,
        "dimension formulas agree across routes",
        failures,
        "50 random profiles; (3, 1, [2]) -> (2, 2, 3, 1)".into(),
    )
}

pub fn criterion_6() -> CriterionOutcome {
    let mut failures = Vec::new();
    let grid = local_grid();
    for &(p, n) in &grid {
        let prec = (n * p + p + 1) as i64 + 12;
        let cov = match LocalCover::build(p, n, prec) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("(p={p}, n={n}): {e}"));
                continue;
            }
        };
        if let Err(e) = cov.verify_normal_form() {
            failures.push(format!("(p={p}, n={n}): {e}"));
        }
        let (ok, why) = cov.invariant_differential_check();
        if !ok {
            failures.push(format!("(p={p}, n={n}): {why}"));
        }
    }
    outcome(
        6,
        "normal-form identities",
        failures,
        format!("{} covers", grid.len()),
    )
}

/// Matrix of `g^{-1}` under the pullback action: a genuine representation.
fn pullback_matrix(k: &std::sync::Arc<FieldCtx>, m: char2ex::RepMatrix) -> Matrix {
    Matrix::from_raw_rows(k, &[vec![m.a, m.b], vec![0, m.d]])
}

pub fn criterion_7() -> CriterionOutcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let (elems, table) = match char2ex::group_table() {
        Ok(x) => x,
        Err(e) => {
            return outcome(
                7,
                "characteristic 2 example",
                vec![e.to_string()],
                String::new(),
            )
        }
    };
    if elems.len() != 24 || !char2ex::is_associative(&table) {
        failures.push(format!(
            "group of order {} (associative: {})",
            elems.len(),
            char2ex::is_associative(&table)
        ));
    }
    match char2ex::homomorphism_report(char2ex::rep) {
        Ok(h) if h.is_homomorphism() => {}
        Ok(h) => failures.push(format!(
            "stated representation multiplicative on {}/{} pairs only",
            h.multiplicative, h.pairs
        )),
        Err(e) => failures.push(e.to_string()),
    }
    let cert = char2ex::indecomposability_certificate(&elems, char2ex::rep);
    if !cert.indecomposable || !cert.witnesses.contains(&AutTriple { u: 1, r: 0, t: 1 }) {
        failures.push(format!("indecomposability certificate: {cert:?}"));
    }
    let pulled = char2ex::indecomposability_certificate(&elems, char2ex::pullback_rep);
    notes.push(format!(
        "pullback action indecomposable: {}",
        pulled.indecomposable
    ));
    for g in &elems {
        let want = match (g.u, g.r, g.t) {
            (1, 0, 0) => None,
            (1, 0, 1) => Some(4),
            (1, _, _) => Some(2),
            _ => Some(1),
        };
        match char2ex::ramification_order(g, 24) {
            Ok(o) if o == want => {}
            Ok(o) => failures.push(format!("{g}: ord {o:?}, expected {want:?}")),
            Err(e) => failures.push(format!("{g}: {e}")),
        }
    }
    let inv = AutTriple { u: 1, r: 0, t: 1 };
    for prec in [20, 32] {
        let agree = char2ex::expand_at_infinity(prec)
            .and_then(|e| char2ex::uniformizer_shift(&inv, &e))
            .and_then(|d| {
                Ok(d.agrees_with(&char2ex::involution_closed_form(prec)?) && d.val() == 4)
            });
        if !matches!(agree, Ok(true)) {
            failures.push(format!("involution vs x^-2 at precision {prec}: {agree:?}"));
        }
    }
    match char2ex::filtration_report(24) {
        Ok(r) => {
            let sizes: Vec<usize> = r.filtration.iter().map(|s| s.size).collect();
            if sizes != [24, 8, 2, 2, 1] {
                failures.push(format!("filtration sizes {sizes:?}"));
            }
            if !r.paper_discrepancies.iter().any(|d| d.contains("G_2")) {
                failures.push("missing the G_2 discrepancy flag".into());
            }
            if !r.sylow2_structure.quaternion || !r.conjugation_invariant {
                failures.push(format!(
                    "sylow {:?}, conjugation invariant {}",
                    r.sylow2_structure, r.conjugation_invariant
                ));
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    outcome(
        7,
        "characteristic 2 example",
        failures,
        format!(
            "order 24, Q8 Sylow, orders 1/2/4, filtration [24, 8, 2, 2, 1]; {}",
            notes.join("")
        ),
    )
}

/// Split sequences of `F_4[G]`-modules for the order-24 group, with a section that is
/// `P`-equivariant for the `u = 1` subgroup but not `G`-equivariant.
pub fn averaging_examples() -> Vec<(String, GroupAction, Matrix)> {
    let k = FieldCtx::f4();
    let (elems, table) = char2ex::group_table().expect("group closes");
    let chi = |j: u64, g: &AutTriple| k.pow(g.u, j);
    let mut out = Vec::new();

    // B = chi_0 + chi_1, A = chi_0, C = chi_1
    let on_b: Vec<Matrix> = elems
        .iter()
        .map(|g| Matrix::from_raw_rows(&k, &[vec![1, 0], vec![0, chi(1, g)]]))
        .collect();
    let on_c: Vec<Matrix> = elems
        .iter()
        .map(|g| Matrix::from_raw_rows(&k, &[vec![chi(1, g)]]))
        .collect();
    let action = GroupAction {
        on_b,
        on_c,
        projection: Matrix::from_raw_rows(&k, &[vec![0, 1]]),
    };
    out.push((
        "chi0 + chi1".to_string(),
        action,
        Matrix::from_raw_rows(&k, &[vec![1], vec![1]]),
    ));

    // B = V + chi_1 with V the 2-dimensional action g -> pullback(g^{-1}), A = V
    let on_b: Vec<Matrix> = (0..elems.len())
        .map(|i| {
            let v = pullback_matrix(&k, char2ex::pullback_rep(&elems[table.inverse(i)]));
            v.direct_sum(&Matrix::from_raw_rows(&k, &[vec![chi(1, &elems[i])]]))
        })
        .collect();
    let on_c: Vec<Matrix> = elems
        .iter()
        .map(|g| Matrix::from_raw_rows(&k, &[vec![chi(1, g)]]))
        .collect();
    let action = GroupAction {
        on_b,
        on_c,
        projection: Matrix::from_raw_rows(&k, &[vec![0, 0, 1]]),
    };
    out.push((
        "V + chi1".to_string(),
        action,
        Matrix::from_raw_rows(&k, &[vec![1], vec![0], vec![1]]),
    ));
    out
}

pub fn criterion_8() -> CriterionOutcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut tallies = Vec::new();
    for (p, q) in [(3u64, 3u64), (2, 4), (5, 5), (2, 8), (3, 9)] {
        let ctx = FieldCtx::prime(p).expect("prime");
        let (mut split, mut additive, mut add_not_split, mut split_not_add) = (0, 0, 0, 0);
        for _ in 0..200 {
            let t = match modrep::random_triple(&ctx, q, 8, &mut rng) {
                Ok(t) => t,
                Err(e) => {
                    failures.push(format!("q={q}: {e}"));
                    continue;
                }
            };
            let (s, a) = (modrep::splits(&t), modrep::invariants_additive(&t));
            split += usize::from(s);
            additive += usize::from(a);
            if a && !s {
                add_not_split += 1;
            }
            if s && !a {
                split_not_add += 1;
            }
        }
        if add_not_split > 0 {
            failures.push(format!(
                "q={q}: {add_not_split}/200 triples have additive invariants but do not split"
            ));
        }
        if split_not_add > 0 {
            failures.push(format!(
                "q={q}: {split_not_add}/200 split triples with non-additive invariants"
            ));
        }
        tallies.push(format!("q={q}: {split} split, {additive} additive"));
    }

    let (elems, table) = char2ex::group_table().expect("group closes");
    let sylow: Vec<usize> = (0..elems.len()).filter(|&i| elems[i].u == 1).collect();
    for (name, action, section) in averaging_examples() {
        let all: Vec<usize> = (0..elems.len()).collect();
        if action.is_equivariant(&section, &all) {
            failures.push(format!("{name}: test section is already G-equivariant"));
        }
        match modrep::average_section(&table, &sylow, &section, &action) {
            Ok(avg) if action.is_section(&avg) && action.is_equivariant(&avg, &all) => {}
            Ok(_) => failures.push(format!("{name}: averaged map is not a G-section")),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    outcome(
        8,
        "splitting criterion and Sylow averaging",
        failures,
        format!(
            "{}; averaging verified on 2 sequences over the order-24 group",
            tallies.join(", ")
        ),
    )
}

pub fn criterion_9() -> CriterionOutcome {
    let mut failures = Vec::new();
    for p in PRIMES {
        let ctx = FieldCtx::prime(p).expect("prime");
        for r in 1..=3 {
            let m = CyclicModule::free(&ctx, p, r);
            for deg in [1u8, 2] {
                match periodic_cohomology(&m, deg) {
                    Ok(0) => {}
                    Ok(d) => failures.push(format!("p={p}, r={r}: H^{deg} = {d}")),
                    Err(e) => failures.push(format!("p={p}, r={r}: {e}")),
                }
            }
        }
    }
    outcome(
        9,
        "free modules are acyclic",
        failures,
        "p in {2,3,5,7}, rank <= 3".into(),
    )
}

pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_size() {
        // 5 + 6 + 8 + 8 jumps
        assert_eq!(local_grid().len(), 27);
    }

    #[test]
    fn random_profiles_are_deterministic() {
        assert_eq!(random_profiles(10, 1), random_profiles(10, 1));
        assert!(random_profiles(50, SEED)
            .iter()
            .all(|p| profile::dims(p).is_ok()));
    }

    #[test]
    fn averaging_examples_average() {
        let (elems, table) = char2ex::group_table().unwrap();
        let sylow: Vec<usize> = (0..24).filter(|&i| elems[i].u == 1).collect();
        for (name, action, s) in averaging_examples() {
            // the action on B is a representation
            for a in 0..24 {
                for b in 0..24 {
                    let ab = table.mul(a, b);
                    assert_eq!(
                        action.on_b[ab],
                        action.on_b[a].mul(&action.on_b[b]).unwrap(),
                        "{name}"
                    );
                }
            }
            assert!(
                modrep::average_section(&table, &sylow, &s, &action).is_ok(),
                "{name}"
            );
        }
    }

    #[test]
    fn criteria_that_hold() {
        for c in [criterion_3(), criterion_5(), criterion_9()] {
            assert!(c.passed, "{c:?}");
        }
    }
}
