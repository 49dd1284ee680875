//! Level `Γ₀(N)` dimension formulas and the model built from them.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{DeclaredPeriods, DimensionModel, ModelSource, QlPair};
use crate::error::{GhostError, Result};
use crate::rational::{format_rational, frac};
use crate::weightspace::{is_prime, GhostParams};

/// `μ₀(N)`, `μ₀,₂(N)`, `μ₀,₃(N)` and the cusp count `c₀(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuInvariants {
    pub mu0: i64,
    pub mu02: i64,
    pub mu03: i64,
    pub c0: i64,
}

fn factorize(mut n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn euler_phi(n: i64) -> i64 {
    factorize(n).into_iter().fold(n, |acc, (l, _)| acc / l * (l - 1))
}

/// Kronecker symbol `(−4/p)` for a prime `p`.
pub fn kronecker_minus4(p: i64) -> i64 {
    match p {
        2 => 0,
        _ if p % 4 == 1 => 1,
        _ => -1,
    }
}

/// Kronecker symbol `(−3/p)` for a prime `p`.
pub fn kronecker_minus3(p: i64) -> i64 {
    match p {
        3 => 0,
        2 => -1,
        _ if p % 3 == 1 => 1,
        _ => -1,
    }
}

/// Closed multiplicative formulas.
pub fn mu_invariants(level: i64) -> Result<MuInvariants> {
    if level <= 0 {
        return Err(GhostError::InvalidArgument(format!("level N must be positive, got {level}")));
    }
    let factors = factorize(level);
    let mu0 = factors.iter().fold(level, |acc, &(l, _)| acc / l * (l + 1));
    let mu02 =
        if level % 4 == 0 { 0 } else { factors.iter().map(|&(l, _)| 1 + kronecker_minus4(l)).product() };
    let mu03 =
        if level % 9 == 0 { 0 } else { factors.iter().map(|&(l, _)| 1 + kronecker_minus3(l)).product() };
    let c0 =
        factors.iter().map(|&(l, e)| (0..=e).map(|j| euler_phi(l.pow(j.min(e - j)))).sum::<i64>()).product();
    Ok(MuInvariants { mu0, mu02, mu03, c0 })
}

/// The counting definitions, evaluated directly.
pub fn mu_invariants_by_counting(level: i64) -> Result<MuInvariants> {
    if level <= 0 {
        return Err(GhostError::InvalidArgument(format!("level N must be positive, got {level}")));
    }
    // index of Γ₀(N) = #P¹(Z/N) = #{(c, d) mod N primitive} / φ(N)
    let mut primitive = 0;
    for c in 0..level {
        for d in 0..level {
            if c.gcd(&d).gcd(&level) == 1 {
                primitive += 1;
            }
        }
    }
    let mu0 = primitive / euler_phi(level);
    let mu02 = (0..level).filter(|x| (x * x + 1) % level == 0).count() as i64;
    let mu03 = (0..level).filter(|x| (x * x + x + 1) % level == 0).count() as i64;
    let c0 = (1..=level).filter(|d| level % d == 0).map(|d| euler_phi(d.gcd(&(level / d)))).sum();
    Ok(MuInvariants { mu0, mu02, mu03, c0 })
}

fn exact_twelfth(twelve_times: i64) -> i64 {
    assert!(
        twelve_times % 12 == 0,
        "dimension formula produced the non-integer {}",
        format_rational(&frac(twelve_times, 12))
    );
    twelve_times / 12
}

fn twelve_times_dim(k: i64, mu: &MuInvariants) -> i64 {
    (k - 1) * mu.mu0
        + (12 * k.div_euclid(4) - 3 * (k - 1)) * mu.mu02
        + (12 * k.div_euclid(3) - 4 * (k - 1)) * mu.mu03
        - 6 * mu.c0
}

fn twelve_times_new_dim(k: i64, p: i64, mu: &MuInvariants) -> i64 {
    (k - 1) * (p - 1) * mu.mu0
        + (12 * k.div_euclid(4) - 3 * (k - 1)) * (kronecker_minus4(p) - 1) * mu.mu02
        + (12 * k.div_euclid(3) - 4 * (k - 1)) * (kronecker_minus3(p) - 1) * mu.mu03
}

pub(super) fn dim_at(k: i64, mu: &MuInvariants) -> i64 {
    exact_twelfth(twelve_times_dim(k, mu))
}

pub(super) fn new_dim_at(k: i64, p: i64, mu: &MuInvariants) -> i64 {
    exact_twelfth(twelve_times_new_dim(k, p, mu))
}

fn require_even(k: i64) -> Result<()> {
    if k % 2 != 0 {
        return Err(GhostError::InvalidArgument(format!("weight {k} must be even")));
    }
    Ok(())
}

/// The `S_k(Γ₀(N))` dimension formula evaluated at any even `k`.
pub fn classical_dim(k: i64, level: i64) -> Result<i64> {
    require_even(k)?;
    let mu = mu_invariants(level)?;
    let twelve = twelve_times_dim(k, &mu);
    if twelve % 12 != 0 {
        return Err(GhostError::NonIntegralDimension(format_rational(&frac(twelve, 12))));
    }
    Ok(twelve / 12)
}

/// The `p`-new dimension formula at level `Np`, evaluated at any even `k`.
pub fn classical_new_dim(k: i64, level: i64, p: i64) -> Result<i64> {
    require_even(k)?;
    if !is_prime(p) {
        return Err(GhostError::NotPrime(p));
    }
    if level % p == 0 {
        return Err(GhostError::PrimeDividesLevel { p, n: level });
    }
    let mu = mu_invariants(level)?;
    let twelve = twelve_times_new_dim(k, p, &mu);
    if twelve % 12 != 0 {
        return Err(GhostError::NonIntegralDimension(format_rational(&frac(twelve, 12))));
    }
    Ok(twelve / 12)
}

pub fn build_gamma0_model(p: i64, level: i64, k0: i64) -> Result<DimensionModel> {
    let params = GhostParams::new(p, k0)?;
    if level <= 0 {
        return Err(GhostError::InvalidArgument(format!("level N must be positive, got {level}")));
    }
    if level % p == 0 {
        return Err(GhostError::PrimeDividesLevel { p, n: level });
    }
    if p * level <= 3 {
        return Err(GhostError::ExcludedPair { p, n: level });
    }
    if k0 % 2 != 0 || k0 < 0 || k0 >= params.delta {
        return Err(GhostError::InvalidArgument(format!(
            "k0 must be even with 0 <= k0 < {} (got {k0})",
            params.delta
        )));
    }
    let mu = mu_invariants(level)?;
    let delta = params.delta;
    let g = 12_i64.gcd(&delta);
    let d = QlPair::new(12 / g, delta * mu.mu0 / g);
    let dnew = QlPair::new(12 / g, (p - 1) * d.defect);
    let (dsum, dp) = match p {
        2 => (QlPair::new(3, mu.mu0), QlPair::new(2, mu.mu0)),
        3 => (QlPair::new(2, mu.mu0), QlPair::new(3, 2 * mu.mu0)),
        _ => (QlPair::new(d.period, p * d.defect), QlPair::new(1, (p - 1) * (p + 1) * mu.mu0 / 12)),
    };
    Ok(DimensionModel {
        params,
        source: ModelSource::Gamma0 { level, mu },
        periods: DeclaredPeriods { d, dnew, dsum, dp },
    })
}
