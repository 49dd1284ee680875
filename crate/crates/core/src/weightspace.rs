//! Exact p-adic valuations, weight coordinates `w_k = γ^k − 1`, and the
//! valuation profile `n ↦ v_p(w_κ − w_{k_n})` of a weight point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GhostError, Result};
use crate::rational::{format_rational, int, parse_rational, ExtRational, Rational};

pub fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent of `p` in a nonzero machine integer.
pub fn vp_i64(mut x: i64, p: i64) -> u32 {
    debug_assert!(x != 0 && p >= 2);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Exponent of `p` in a big integer, `None` for zero.
pub fn vp_bigint(x: &BigInt, p: i64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

/// `v_p(x)` for a nonzero rational.
pub fn vp(x: &Rational, p: i64) -> Result<i64> {
    if !is_prime(p) {
        return Err(GhostError::NotPrime(p));
    }
    let num = vp_bigint(x.numer(), p).ok_or(GhostError::ValuationOfZero)?;
    let den = vp_bigint(x.denom(), p).expect("denominator is nonzero");
    Ok(num as i64 - den as i64)
}

/// Legendre's formula `Σ ⌊n/p^i⌋`.
pub fn vp_factorial(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut m = n;
    while m > 0 {
        m /= p;
        total += m;
    }
    total
}

/// The prime and component data shared by every computation on one ghost series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostParams {
    pub p: i64,
    pub q: i64,
    pub delta: i64,
    pub v0: i64,
    pub gamma: i64,
    /// Weight attached to `n = 0`; `k_n = k_base + n·delta`.
    pub k_base: i64,
    /// `k_base mod delta`.
    pub component: i64,
}

impl GhostParams {
    pub fn new(p: i64, k_base: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(GhostError::NotPrime(p));
        }
        let odd = p != 2;
        let delta = if odd { p - 1 } else { 2 };
        Ok(GhostParams {
            p,
            q: if odd { p } else { 4 },
            delta,
            v0: if odd { 1 } else { 3 },
            gamma: if odd { 1 + p } else { 5 },
            k_base,
            component: k_base.rem_euclid(delta),
        })
    }

    pub fn v0_rational(&self) -> Rational {
        int(self.v0)
    }

    /// `v_p(2)`: 1 for `p = 2`, else 0.
    pub fn vp2(&self) -> i64 {
        i64::from(self.p == 2)
    }

    pub fn k_n(&self, n: i64) -> i64 {
        self.k_base + n * self.delta
    }

    pub fn on_component(&self, k: i64) -> bool {
        k.rem_euclid(self.delta) == self.component
    }

    pub fn check_component(&self, k: i64) -> Result<()> {
        if self.on_component(k) {
            Ok(())
        } else {
            Err(GhostError::ComponentMismatch { k, component: self.component, delta: self.delta })
        }
    }

    /// Index `n` with `k_n = k`, for an on-component weight.
    pub fn index_of(&self, k: i64) -> Result<i64> {
        self.check_component(k)?;
        Ok((k - self.k_base).div_euclid(self.delta))
    }

    /// `v_p(w_k − w_k2)` for distinct on-component weights, as a machine integer.
    pub(crate) fn gap_valuation(&self, k: i64, k2: i64) -> i64 {
        debug_assert!(k != k2);
        1 + self.vp2() + i64::from(vp_i64(k - k2, self.p))
    }
}

pub fn weight_diff_valuation(params: &GhostParams, k: i64, k2: i64) -> Result<ExtRational> {
    params.check_component(k)?;
    params.check_component(k2)?;
    if k == k2 {
        return Ok(ExtRational::Infinity);
    }
    Ok(ExtRational::from_int(params.gap_valuation(k, k2)))
}

/// `γ^k − 1` exactly (`γ^{k−1} − 1` on the odd component when `p = 2`).
pub fn exact_weight_coordinate(params: &GhostParams, k: i64) -> Result<Rational> {
    params.check_component(k)?;
    let exponent = if params.p == 2 && params.component == 1 { k - 1 } else { k };
    let gamma = BigInt::from(params.gamma);
    let power = Pow::pow(&gamma, exponent.unsigned_abs());
    let value =
        if exponent >= 0 { Rational::from_integer(power) } else { Rational::new(BigInt::one(), power) };
    Ok(value - Rational::one())
}

/// A point of weight space, described through its valuation profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WeightPoint {
    /// The classical weight `k`.
    Integer(i64),
    /// A weight off `Z_p` whose best integral approximation is `w_{k_plus}`,
    /// with `v_p(w_κ − w_{k_plus}) = alpha`.
    NearInteger { k_plus: i64, alpha: Rational },
    /// A weight with `v_p(w_κ) = v < v0` (the halo region).
    Boundary(Rational),
}

impl WeightPoint {
    pub fn validate(&self, params: &GhostParams) -> Result<()> {
        match self {
            WeightPoint::Integer(k) => params.check_component(*k),
            WeightPoint::NearInteger { k_plus, alpha } => {
                params.check_component(*k_plus)?;
                if *alpha < params.v0_rational() {
                    return Err(GhostError::InvalidWeight(format!(
                        "near-integer weight needs alpha >= v0 = {} (got {})",
                        params.v0,
                        format_rational(alpha)
                    )));
                }
                Ok(())
            }
            WeightPoint::Boundary(v) => {
                if !v.is_positive() || *v >= params.v0_rational() {
                    return Err(GhostError::InvalidWeight(format!(
                        "boundary weight needs 0 < v < v0 = {} (got {})",
                        params.v0,
                        format_rational(v)
                    )));
                }
                Ok(())
            }
        }
    }

    /// Infimum of the valuation profile over all `n`.
    pub fn min_profile(&self, params: &GhostParams) -> Rational {
        match self {
            WeightPoint::Boundary(v) => v.clone(),
            _ => params.v0_rational(),
        }
    }
}

impl fmt::Display for WeightPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightPoint::Integer(k) => write!(f, "int:{k}"),
            WeightPoint::NearInteger { k_plus, alpha } => {
                write!(f, "near:{k_plus},{}", format_rational(alpha))
            }
            WeightPoint::Boundary(v) => write!(f, "boundary:{}", format_rational(v)),
        }
    }
}

impl FromStr for WeightPoint {
    type Err = GhostError;

    /// Parses `int:K`, `near:K,ALPHA` or `boundary:V`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| GhostError::Parse(format!("weight descriptor {s:?}: {why}"));
        let (kind, rest) = s.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
        match kind {
            "int" => rest
                .trim()
                .parse::<i64>()
                .map(WeightPoint::Integer)
                .map_err(|_| bad("expected an integer weight")),
            "near" => {
                let (k, alpha) = rest.split_once(',').ok_or_else(|| bad("expected K,ALPHA"))?;
                let k_plus = k.trim().parse::<i64>().map_err(|_| bad("bad K"))?;
                let alpha = parse_rational(alpha)?;
                Ok(WeightPoint::NearInteger { k_plus, alpha })
            }
            "boundary" => Ok(WeightPoint::Boundary(parse_rational(rest)?)),
            _ => Err(bad("unknown kind (int, near, boundary)")),
        }
    }
}

impl Serialize for WeightPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WeightPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Valuation of a single factor `w_κ − w_{k_n}`, split by shape so that sums
/// over many factors stay in machine integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FactorValuation {
    Infinite,
    Int(i64),
    /// Equal to the weight's `alpha` (near-integer) or `v` (boundary).
    Cap,
}

pub(crate) fn factor_valuation(params: &GhostParams, kappa: &WeightPoint, k_n: i64) -> FactorValuation {
    match kappa {
        WeightPoint::Integer(k) => {
            if *k == k_n {
                FactorValuation::Infinite
            } else {
                FactorValuation::Int(params.gap_valuation(*k, k_n))
            }
        }
        WeightPoint::NearInteger { k_plus, alpha } => {
            if *k_plus == k_n {
                return FactorValuation::Cap;
            }
            let gap = params.gap_valuation(*k_plus, k_n);
            if int(gap) < *alpha {
                FactorValuation::Int(gap)
            } else {
                FactorValuation::Cap
            }
        }
        WeightPoint::Boundary(_) => FactorValuation::Cap,
    }
}

pub(crate) fn cap_value(kappa: &WeightPoint) -> Option<&Rational> {
    match kappa {
        WeightPoint::Integer(_) => None,
        WeightPoint::NearInteger { alpha, .. } => Some(alpha),
        WeightPoint::Boundary(v) => Some(v),
    }
}

/// `v_p(w_κ − w_{k_n})`.
pub fn weight_valuation_profile(params: &GhostParams, kappa: &WeightPoint, n: i64) -> ExtRational {
    match factor_valuation(params, kappa, params.k_n(n)) {
        FactorValuation::Infinite => ExtRational::Infinity,
        FactorValuation::Int(v) => ExtRational::from_int(v),
        FactorValuation::Cap => ExtRational::Finite(cap_value(kappa).expect("cap").clone()),
    }
}

/// `⌈log_p n⌉` for `n ≥ 1`.
pub fn ceil_log(n: u64, p: u64) -> u64 {
    let mut e = 0;
    let mut power: u128 = 1;
    while power < u128::from(n) {
        power *= u128::from(p);
        e += 1;
    }
    e
}

/// Floor of a rational as `i64`.
pub fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().expect("floor fits in i64")
}
