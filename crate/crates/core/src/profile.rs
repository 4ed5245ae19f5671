//! Global bookkeeping for a `Z/p`-cover `X -> Y`: ramification data, `R'`, the genus
//! of `X`, the splitting defect and the dimensions of the invariant parts of
//! `H^0(X, Omega)`, `H^1(X, O_X)` and `H^1_dR(X/k)`.
//!
//! Branch points are indexed on `Y`. For `Z/p` every ramified point is totally
//! ramified, so sums over ramified points of `X` and over branch points agree.
//! The different exponent at a branch point with jump `n` is `(n + 1)(p - 1)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohom::{
    d_image_closed_form, d_image_local, floor_div, h1_closed_form, periodic_cohomology, CohomError,
    CyclicModule,
};
use crate::gf::{gcd, is_prime, FieldCtx};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("jump {n} must be positive and prime to p = {p}")]
    BadJump { p: u64, n: u64 },
    #[error("inconsistent profile: {0}")]
    Inconsistent(String),
    #[error("superelliptic data rejected: {0}")]
    Superelliptic(String),
    #[error(transparent)]
    Cohom(#[from] CohomError),
}

/// Ramification data of a `Z/p`-cover: `p`, the genus of the quotient and one jump per
/// branch point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationProfile {
    pub p: u64,
    #[serde(rename = "gY")]
    pub g_y: u64,
    pub jumps: Vec<u64>,
}

impl RamificationProfile {
    pub fn new(p: u64, g_y: u64, jumps: Vec<u64>) -> Result<RamificationProfile, ProfileError> {
        let prof = RamificationProfile { p, g_y, jumps };
        prof.validate()?;
        Ok(prof)
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        if !is_prime(self.p) {
            return Err(ProfileError::NotPrime(self.p));
        }
        if let Some(&n) = self.jumps.iter().find(|&&n| n == 0 || gcd(n, self.p) != 1) {
            return Err(ProfileError::BadJump { p: self.p, n });
        }
        Ok(())
    }

    pub fn is_free(&self) -> bool {
        self.jumps.is_empty()
    }

    /// All jumps are at most 1.
    pub fn weakly_ramified(&self) -> bool {
        self.jumps.iter().all(|&n| n <= 1)
    }
}

/// `floor((n+1)(p-1)/p)`, the coefficient of a branch point in `R'`.
pub fn r_prime_coefficient(p: u64, n: u64) -> u64 {
    (n + 1) * (p - 1) / p
}

/// Splitting defect: sum over branch points of the local `d`-image dimensions.
pub fn defect(prof: &RamificationProfile) -> u64 {
    prof.jumps
        .iter()
        .map(|&n| d_image_closed_form(prof.p, n) as u64)
        .sum()
}

/// The same sum, each local term computed by linear algebra on the lattice model.
pub fn defect_from_local_ranks(prof: &RamificationProfile) -> Result<u64, ProfileError> {
    prof.validate()?;
    let mut total = 0;
    for &n in &prof.jumps {
        total += d_image_local(prof.p, n)?.rank as u64;
    }
    Ok(total)
}

pub fn r_prime_degree(prof: &RamificationProfile) -> u64 {
    prof.jumps
        .iter()
        .map(|&n| r_prime_coefficient(prof.p, n))
        .sum()
}

/// Genus of `X` from `2 g_X - 2 = p (2 g_Y - 2) + sum (n_Q + 1)(p - 1)`.
pub fn genus_upstairs(prof: &RamificationProfile) -> Result<u64, ProfileError> {
    let p = prof.p as i64;
    let ram: i64 = prof.jumps.iter().map(|&n| (n as i64 + 1) * (p - 1)).sum();
    let two_g_minus_two = p * (2 * prof.g_y as i64 - 2) + ram;
    if two_g_minus_two % 2 != 0 || two_g_minus_two < -2 {
        return Err(ProfileError::Inconsistent(format!(
            "Riemann-Hurwitz gives 2g - 2 = {two_g_minus_two}"
        )));
    }
    Ok(((two_g_minus_two + 2) / 2) as u64)
}

/// Invariant dimensions and the defect of a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectReport {
    pub defect: u64,
    #[serde(rename = "deg_R_prime")]
    pub deg_r_prime: u64,
    pub g_x: u64,
    pub h0_omega_inv: u64,
    #[serde(rename = "h1_O_inv")]
    pub h1_o_inv: u64,
    #[serde(rename = "h1_dR_inv")]
    pub h1_dr_inv: u64,
    pub weakly_ramified: bool,
}

/// `dim_k H^1(Z/p, k)` for the trivial module, computed by linear algebra.
pub fn h1_trivial(p: u64) -> Result<u64, ProfileError> {
    let ctx = FieldCtx::prime(p).map_err(|_| ProfileError::NotPrime(p))?;
    Ok(periodic_cohomology(&CyclicModule::trivial(&ctx, 1, p), 1)? as u64)
}

/// The three routes to `h^0`, `h^1_O` and `h^1_dR`, kept separate for cross-checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionRoutes {
    /// `g_Y` if `R' = 0`, else `g_Y - 1 + deg R'`.
    pub h0_from_r_prime: i64,
    /// The closed formulas for a `Z/p`-cover (free and non-free cases).
    pub h0_closed: i64,
    pub h1_closed: i64,
    pub h1_dr_closed: i64,
    /// `g_Y + sum_Q dim H^1(G, (pi_* O_X)_Q) - dim H^1(G, k)`; needs a ramified point.
    pub h1_from_local_terms: Option<i64>,
}

pub fn dimension_routes(prof: &RamificationProfile) -> Result<DimensionRoutes, ProfileError> {
    prof.validate()?;
    let (p, g) = (prof.p, prof.g_y as i64);
    let deg_r = r_prime_degree(prof) as i64;
    let h0_from_r_prime = if deg_r == 0 { g } else { g - 1 + deg_r };

    let (h0_closed, h1_closed, h1_dr_closed) = if prof.is_free() {
        (g, g, 2 * g)
    } else {
        let s: i64 = prof
            .jumps
            .iter()
            .map(|&n| r_prime_coefficient(p, n) as i64)
            .sum();
        let dr: i64 = prof
            .jumps
            .iter()
            .map(|&n| r_prime_coefficient(p, n) as i64 + 1 + floor_div(n as i64 - 1, p as i64))
            .sum();
        (g - 1 + s, g - 1 + s, 2 * (g - 1) + dr)
    };

    let h1_from_local_terms = if prof.is_free() {
        None
    } else {
        let local: i64 = prof.jumps.iter().map(|&n| h1_closed_form(p, n, 0)).sum();
        Some(g + local - h1_trivial(p)? as i64)
    };

    Ok(DimensionRoutes {
        h0_from_r_prime,
        h0_closed,
        h1_closed,
        h1_dr_closed,
        h1_from_local_terms,
    })
}

/// Full report; every formula route must agree.
pub fn dims(prof: &RamificationProfile) -> Result<DefectReport, ProfileError> {
    let routes = dimension_routes(prof)?;
    let bad = |what: &str| Err(ProfileError::Inconsistent(format!("{what}: {routes:?}")));
    if routes.h0_from_r_prime != routes.h0_closed {
        return bad("h0 via R' disagrees with the closed formula");
    }
    if let Some(h1) = routes.h1_from_local_terms {
        if h1 != routes.h1_closed {
            return bad("h1 via local cohomology disagrees with the closed formula");
        }
    }
    let delta = defect(prof) as i64;
    let h1_dr = routes.h0_closed + routes.h1_closed - delta;
    if h1_dr != routes.h1_dr_closed {
        return bad("h1_dR != h0 + h1 - defect");
    }
    if routes.h0_closed < 0 || h1_dr < 0 {
        return bad("negative dimension");
    }
    Ok(DefectReport {
        defect: delta as u64,
        deg_r_prime: r_prime_degree(prof),
        g_x: genus_upstairs(prof)?,
        h0_omega_inv: routes.h0_closed as u64,
        h1_o_inv: routes.h1_closed as u64,
        h1_dr_inv: h1_dr as u64,
        weakly_ramified: prof.weakly_ramified(),
    })
}

/// Profile of `y^m = f(z^p - z)` with `deg f = d` as a `Z/p`-cover of `y^m = f(x)`.
///
/// `x` has `gcd(m, d)` poles on `Y`, each of order `m / gcd(m, d)`, which are the jumps.
pub fn superelliptic(m: u64, d: u64, p: u64) -> Result<RamificationProfile, ProfileError> {
    if !is_prime(p) {
        return Err(ProfileError::NotPrime(p));
    }
    if m < 2 || d < 1 {
        return Err(ProfileError::Superelliptic("need m >= 2 and d >= 1".into()));
    }
    if m.is_multiple_of(p) {
        return Err(ProfileError::Superelliptic(format!(
            "p = {p} divides m = {m}"
        )));
    }
    let delta = gcd(m, d);
    let jump = m / delta;
    if gcd(jump, p) != 1 {
        return Err(ProfileError::Superelliptic(format!(
            "p divides the jump {jump}"
        )));
    }
    let twice = (m - 1) * (d - 1) + 1;
    if twice < delta || !(twice - delta).is_multiple_of(2) {
        return Err(ProfileError::Superelliptic(
            "non-integral genus of Y".into(),
        ));
    }
    RamificationProfile::new(p, (twice - delta) / 2, vec![jump; delta as usize])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainTheoremVerdict {
    pub p: u64,
    pub defect: u64,
    pub weakly_ramified: bool,
    /// `p = 2`, not weakly ramified, defect 0.
    pub char2_exception: bool,
    pub consistent: bool,
}

/// For `p > 2`: defect 0 iff weakly ramified. For any `p`: weakly ramified implies defect 0.
pub fn main_theorem_check(prof: &RamificationProfile) -> MainTheoremVerdict {
    let delta = defect(prof);
    let weak = prof.weakly_ramified();
    let consistent = if prof.p > 2 {
        (delta == 0) == weak
    } else {
        !weak || delta == 0
    };
    MainTheoremVerdict {
        p: prof.p,
        defect: delta,
        weakly_ramified: weak,
        char2_exception: prof.p == 2 && !weak && delta == 0,
        consistent,
    }
}
