//! Slope statistics at classical weights, semistable breakpoints, arithmetic
//! progressions at halo and near-integer weights, and comparison with external slope lists.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dimension_models::{positive_growth_constants, DimensionModel};
use crate::error::{GhostError, Result};
use crate::newton::{ghost_slopes, SlopeSequence};
use crate::rational::{frac, int, Rational};
use crate::weightspace::{floor_i64, WeightPoint};

/// `p/(p−1)² · B²/(A(A+B))`; `s_i(k_n)` divided by this times `k_n` lies in `[0, 1]` in the limit.
pub fn normalizing_constant(model: &DimensionModel) -> Result<Rational> {
    let (a, b) = positive_growth_constants(model)?;
    let p = model.params.p;
    Ok(frac(p, (p - 1) * (p - 1)) * &b * &b / (&a * (&a + &b)))
}

fn slopes_at(model: &DimensionModel, n: i64, count: i64) -> Result<SlopeSequence> {
    let s = ghost_slopes(model, &WeightPoint::Integer(model.params.k_n(n)), count as usize)?;
    if !s.certified {
        return Err(GhostError::Uncertified);
    }
    Ok(s)
}

/// `s̃_i(k_n)` for `1 ≤ i ≤ d_p(n)`.
pub fn normalized_slopes(model: &DimensionModel, n: i64) -> Result<Vec<Rational>> {
    let normalizer = normalizing_constant(model)? * int(model.params.k_n(n));
    let dp = model.dp(n);
    if dp <= 0 {
        return Ok(Vec::new());
    }
    if normalizer.is_zero() {
        return Err(GhostError::InvalidArgument(format!("k_n = 0 at n = {n}; cannot normalize")));
    }
    Ok(slopes_at(model, n, dp)?.slopes.into_iter().map(|s| s / &normalizer).collect())
}

/// Sup distance between the empirical CDF of `values` and the uniform CDF on `[lo, hi]`.
pub fn ks_uniform(values: &[Rational], lo: &Rational, hi: &Rational) -> Rational {
    let m = values.len() as i64;
    if m == 0 {
        return Rational::zero();
    }
    let mut sorted = values.to_vec();
    sorted.sort();
    let width = hi - lo;
    let cdf = |x: &Rational| -> Rational {
        let u = (x - lo) / &width;
        u.max(Rational::zero()).min(Rational::one())
    };
    let mut worst = Rational::zero();
    for (j, x) in sorted.iter().enumerate() {
        let u = cdf(x);
        let above = frac(j as i64 + 1, m) - &u;
        let below = &u - frac(j as i64, m);
        worst = worst.max(above).max(below);
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub n: i64,
    pub k: i64,
    #[serde(with = "crate::rational::serde_rational")]
    pub normalizer: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub mass_at_half: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub mass_low: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub mass_high: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub ks_low: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub ks_high: Rational,
    /// Limits of `(mass_low, mass_at_half, mass_high)`.
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub limit_masses: Vec<Rational>,
    /// `A/(2A+B)` and `(A+B)/(2A+B)`: the inner ends of the two intervals.
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub interval_ends: Vec<Rational>,
}

impl DistributionReport {
    pub fn mass_deviations(&self) -> [Rational; 3] {
        [
            (&self.mass_low - &self.limit_masses[0]).abs(),
            (&self.mass_at_half - &self.limit_masses[1]).abs(),
            (&self.mass_high - &self.limit_masses[2]).abs(),
        ]
    }
}

pub fn distribution_report(model: &DimensionModel, n: i64) -> Result<DistributionReport> {
    let (a, b) = positive_growth_constants(model)?;
    let k = model.params.k_n(n);
    let normalizer = normalizing_constant(model)? * int(k);
    let (d, dnew, dp) = (model.d(n), model.dnew(n), model.dp(n));
    if d < 0 || dnew < 0 || dp <= 0 {
        return Err(GhostError::InvalidArgument(format!(
            "n = {n} has d = {d}, d^new = {dnew}; need d, d^new >= 0 and d_p >= 1"
        )));
    }
    let slopes = normalized_slopes(model, n)?;
    let total = &a + &a + &b;
    let low_end = &a / &total;
    let high_start = (&a + &b) / &total;
    let low = &slopes[..d as usize];
    let high = &slopes[(d + dnew) as usize..];
    Ok(DistributionReport {
        n,
        k,
        normalizer,
        mass_at_half: frac(dnew, dp),
        mass_low: frac(d, dp),
        mass_high: frac(dp - d - dnew, dp),
        ks_low: ks_uniform(low, &Rational::zero(), &low_end),
        ks_high: ks_uniform(high, &high_start, &Rational::one()),
        limit_masses: vec![low_end.clone(), &b / &total, low_end.clone()],
        interval_ends: vec![low_end, high_start],
    })
}

/// Reports for several `n`, computed in parallel.
pub fn distribution_reports(model: &DimensionModel, ns: &[i64]) -> Result<Vec<DistributionReport>> {
    ns.par_iter().map(|&n| distribution_report(model, n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GouveaReport {
    pub n: i64,
    pub k: i64,
    /// `s_{d(n)}(k_n) / k_n`.
    #[serde(with = "crate::rational::serde_rational")]
    pub ratio_old: Rational,
    /// `s_{d_p(n)}(k_n) / k_n`.
    #[serde(with = "crate::rational::serde_rational")]
    pub ratio_classical: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub limit_old: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub limit_classical: Rational,
    /// `s_{d(n)} ≤ (k_n − 1)/(p + 1)`.
    pub buzzard_bound_holds: bool,
}

pub fn gouvea_check(model: &DimensionModel, n: i64) -> Result<GouveaReport> {
    let (a, b) = positive_growth_constants(model)?;
    let p = model.params.p;
    let k = model.params.k_n(n);
    let (d, dp) = (model.d(n), model.dp(n));
    if d < 1 {
        return Err(GhostError::InvalidArgument(format!("need d(n) >= 1, got d({n}) = {d}")));
    }
    let slopes = slopes_at(model, n, dp)?.slopes;
    let old = slopes[d as usize - 1].clone();
    let classical = slopes[dp as usize - 1].clone();
    let c = frac(p, (p - 1) * (p - 1)) * &b * &b;
    Ok(GouveaReport {
        n,
        k,
        ratio_old: &old / int(k),
        ratio_classical: &classical / int(k),
        limit_old: &c / ((&a + &b) * (&a + &a + &b)),
        limit_classical: &c / (&a * (&a + &b)),
        buzzard_bound_holds: old <= frac(k - 1, p + 1),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemistableReport {
    pub n: i64,
    pub k: i64,
    pub d: i64,
    pub d_plus_dnew: i64,
    pub vertex_at_d: bool,
    pub vertex_at_d_plus_dnew: bool,
    /// Hull vertices strictly between the two indices.
    pub interior_vertices: Vec<i64>,
    #[serde(with = "crate::rational::serde_rational_opt")]
    pub slope: Option<Rational>,
    #[serde(with = "crate::rational::serde_rational")]
    pub predicted: Rational,
    #[serde(with = "crate::rational::serde_rational_opt")]
    pub deviation: Option<Rational>,
    pub passed: bool,
}

pub fn semistable_check(model: &DimensionModel, n: i64) -> Result<SemistableReport> {
    let (a, b) = positive_growth_constants(model)?;
    let p = model.params.p;
    let k = model.params.k_n(n);
    let (d, dnew) = (model.d(n), model.dnew(n));
    let top = d + dnew;
    let predicted = frac(p, (p - 1) * (p - 1)) * &b * &b / (int(2) * &a * (&a + &b)) * int(k);
    if dnew < 1 {
        return Ok(SemistableReport {
            n,
            k,
            d,
            d_plus_dnew: top,
            vertex_at_d: true,
            vertex_at_d_plus_dnew: true,
            interior_vertices: Vec::new(),
            slope: None,
            predicted,
            deviation: None,
            passed: true,
        });
    }
    if d < 0 {
        return Err(GhostError::InvalidArgument(format!("d({n}) = {d} is negative")));
    }
    let s = slopes_at(model, n, top + 1)?.slopes;
    // x is a vertex iff the slopes on either side differ (x = 0 always is).
    let vertex = |x: i64| x == 0 || s[x as usize - 1] < s[x as usize];
    let interior_vertices: Vec<i64> = (d + 1..top).filter(|&x| vertex(x)).collect();
    let slope = s[top as usize - 1].clone();
    let deviation = (&slope - &predicted).abs();
    let (vd, vt) = (vertex(d), vertex(top));
    Ok(SemistableReport {
        n,
        k,
        d,
        d_plus_dnew: top,
        vertex_at_d: vd,
        vertex_at_d_plus_dnew: vt,
        passed: vd && vt && interior_vertices.is_empty(),
        interior_vertices,
        slope: Some(slope),
        predicted,
        deviation: Some(deviation),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct APParameters {
    #[serde(rename = "Q")]
    pub q: i64,
    #[serde(rename = "Q_r")]
    pub q_r: i64,
    pub r: i64,
    /// `Q · (P_d/Q_d − 4P_{d_p}/Q_{d_p} + P_{d+d^new}/Q_{d+d^new})`.
    #[serde(with = "crate::rational::serde_rational")]
    pub unit_difference: Rational,
    #[serde(rename = "D", with = "crate::rational::serde_rational")]
    pub common_difference: Rational,
}

/// `Q` (halved in the `Q_{d_p}` slot when `Q_{d_p}` is even) and `Q · inner`.
pub fn progression_period(model: &DimensionModel) -> (i64, Rational) {
    let p = &model.periods;
    let qdp = if p.dp.defect % 2 == 0 { p.dp.defect / 2 } else { p.dp.defect };
    let q = p.d.defect.lcm(&qdp).lcm(&p.dsum.defect);
    let inner = frac(p.d.period, p.d.defect) - frac(4 * p.dp.period, p.dp.defect)
        + frac(p.dsum.period, p.dsum.defect);
    (q, inner * int(q))
}

pub fn ap_parameters(model: &DimensionModel, kappa: &WeightPoint) -> Result<APParameters> {
    kappa.validate(&model.params)?;
    let (q, unit) = progression_period(model);
    let p = model.params.p;
    let v0 = model.params.v0;
    let (r, q_r, factor) = match kappa {
        WeightPoint::Integer(k) => {
            return Err(GhostError::TheoremDoesNotApply(format!(
                "w_κ for κ = {k} lies in Z_p with v_p(w_κ) >= v0 = {v0}; progressions need w_κ outside Z_p or v_p(w_κ) < v0"
            )))
        }
        WeightPoint::Boundary(v) => (floor_i64(v), q, v.clone()),
        WeightPoint::NearInteger { alpha, .. } => {
            let r = floor_i64(alpha);
            let exponent = if p == 2 {
                if r < v0 { 0 } else { r - 2 }
            } else {
                r
            };
            let q_r = p.checked_pow(exponent as u32).and_then(|pe| pe.checked_mul(q)).ok_or_else(|| {
                GhostError::InvalidArgument(format!("Q_r = {p}^{exponent}·{q} overflows"))
            })?;
            let tail: i64 = (v0..=r).map(|v| (p - 1) * p.pow((r - v) as u32) * v).sum();
            (r, q_r, alpha + int(tail))
        }
    };
    Ok(APParameters { q, q_r, r, common_difference: &unit * factor, unit_difference: unit })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct APReport {
    #[serde(rename = "Q_r")]
    pub q_r: i64,
    #[serde(rename = "D", with = "crate::rational::serde_rational")]
    pub common_difference: Rational,
    /// 1-based indices `i` for which `s_{i+Q_r} − s_i` was checked.
    pub verified_range: (i64, i64),
    /// `(i, s_{i+Q_r} − s_i)` where the difference is not `D`.
    #[serde(with = "violation_serde")]
    pub violations: Vec<(i64, Rational)>,
    pub verified: bool,
}

mod violation_serde {
    use super::*;
    use crate::rational::{format_rational, parse_rational};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(i64, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|(i, r)| (*i, format_rational(r))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(i64, Rational)>, D::Error> {
        Vec::<(i64, String)>::deserialize(d)?
            .into_iter()
            .map(|(i, r)| parse_rational(&r).map(|r| (i, r)).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Checks `s_{i+Q_r} − s_i = D` for `Q_r < i ≤ count − Q_r`.
pub fn ap_verify(slopes: &SlopeSequence, q_r: i64, d: &Rational) -> Result<APReport> {
    if !slopes.certified {
        return Err(GhostError::Uncertified);
    }
    let count = slopes.slopes.len() as i64;
    if q_r < 1 || count < 3 * q_r {
        return Err(GhostError::InvalidArgument(format!(
            "need at least 3·Q_r = {} slopes, got {count}",
            3 * q_r
        )));
    }
    let s = &slopes.slopes;
    let violations: Vec<(i64, Rational)> = (q_r + 1..=count - q_r)
        .filter_map(|i| {
            let diff = &s[(i + q_r - 1) as usize] - &s[(i - 1) as usize];
            (diff != *d).then_some((i, diff))
        })
        .collect();
    Ok(APReport {
        q_r,
        common_difference: d.clone(),
        verified_range: (q_r + 1, count - q_r),
        verified: violations.is_empty(),
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub computed_len: usize,
    pub external_len: usize,
    pub compared: usize,
    /// 1-based index of the first difference among the compared slopes.
    pub first_mismatch: Option<usize>,
    pub matches: bool,
    pub note: Option<String>,
}

pub fn compare_slopes(computed: &[Rational], external: &[Rational]) -> CompareReport {
    let mut ext = external.to_vec();
    ext.sort();
    let compared = computed.len().min(ext.len());
    let first_mismatch = (0..compared).find(|&j| computed[j] != ext[j]).map(|j| j + 1);
    let note = (computed.len() != ext.len()).then(|| {
        format!(
            "lengths differ (computed {}, external {}); compared the first {compared}",
            computed.len(),
            ext.len()
        )
    });
    CompareReport {
        computed_len: computed.len(),
        external_len: ext.len(),
        compared,
        first_mismatch,
        matches: first_mismatch.is_none(),
        note,
    }
}

/// Distinct slope values with their multiplicities.
pub fn slope_multiplicities(slopes: &[Rational]) -> Vec<(Rational, usize)> {
    let mut out: Vec<(Rational, usize)> = Vec::new();
    for s in slopes {
        match out.last_mut() {
            Some((v, m)) if v == s => *m += 1,
            _ => out.push((s.clone(), 1)),
        }
    }
    out
}
