//! Ghost coefficients `g_i` in factored form, the quotients `Δ_i = g_i / g_{i−1}`,
//! and valuations of their specializations at weight points.
//!
//! `g_i` vanishes at `w_{k_n}` exactly when `d(n) < i < d(n) + d^new(n)`, with
//! multiplicity `min(i − d(n), d(n) + d^new(n) − i)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dimension_models::DimensionModel;
use crate::error::{GhostError, Result};
use crate::rational::{int, ExtRational, Rational};
use crate::weightspace::{
    cap_value, exact_weight_coordinate, factor_valuation, vp, FactorValuation, GhostParams, WeightPoint,
};

const SEARCH_LIMIT: i64 = 1 << 40;

/// Largest `n` with `holds(n)`, for a predicate true exactly on a down-set of `Z`.
fn last_where(holds: impl Fn(i64) -> bool, guess: i64, i: i64) -> Result<i64> {
    let (mut lo, mut hi);
    let mut step = 1_i64;
    if holds(guess) {
        lo = guess;
        loop {
            let c = guess + step;
            if c > SEARCH_LIMIT {
                return Err(GhostError::GrowthViolated(i));
            }
            if !holds(c) {
                hi = c;
                break;
            }
            lo = c;
            step *= 2;
        }
    } else {
        hi = guess;
        loop {
            let c = guess - step;
            if c < -SEARCH_LIMIT {
                return Err(GhostError::GrowthViolated(i));
            }
            if holds(c) {
                lo = c;
                break;
            }
            hi = c;
            step *= 2;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn guess(i: i64, period: i64, defect: i64) -> i64 {
    if defect <= 0 {
        return 0;
    }
    (i128::from(i) * i128::from(period) / i128::from(defect))
        .clamp(-SEARCH_LIMIT as i128, SEARCH_LIMIT as i128) as i64
}

fn hz_below_d(model: &DimensionModel, i: i64) -> Result<i64> {
    let pd = model.periods.d;
    last_where(|n| model.d(n) < i, guess(i, pd.period, pd.defect), i)
}

fn lz_above_dsum(model: &DimensionModel, i: i64, strict: bool) -> Result<i64> {
    let ps = model.periods.dsum;
    let below = |n| if strict { model.dsum(n) <= i } else { model.dsum(n) < i };
    Ok(last_where(below, guess(i, ps.period, ps.defect), i)? + 1)
}

/// Inclusive `[lo, hi]`, `None` when empty.
fn interval(lo: i64, hi: i64) -> Option<(i64, i64)> {
    (lo <= hi).then_some((lo, hi))
}

fn span(range: Option<(i64, i64)>) -> i64 {
    range.map_or(0, |(a, b)| b - a + 1)
}

/// Multiplicity of `w_{k_n}` as a zero of `g_i`.
pub fn multiplicity(model: &DimensionModel, i: i64, n: i64) -> i64 {
    let d = model.d(n);
    let sum = model.dsum(n);
    if d < i && i < sum {
        (i - d).min(sum - i)
    } else {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostCoefficient {
    #[serde(rename = "i")]
    pub index: i64,
    /// `(n, multiplicity)` for the zeros `w_{k_n}`, increasing in `n`.
    pub zeros: Vec<(i64, i64)>,
    pub degree: i64,
    pub lz: Option<i64>,
    pub hz: Option<i64>,
}

pub fn coefficient(model: &DimensionModel, i: i64) -> Result<GhostCoefficient> {
    if i < 0 {
        return Err(GhostError::InvalidArgument(format!("index {i} is negative")));
    }
    let empty = GhostCoefficient { index: i, zeros: Vec::new(), degree: 0, lz: None, hz: None };
    if i == 0 {
        return Ok(empty);
    }
    let hz = hz_below_d(model, i)?;
    let lz = lz_above_dsum(model, i, true)?;
    if lz > hz {
        return Ok(empty);
    }
    let zeros: Vec<(i64, i64)> = (lz..=hz).map(|n| (n, multiplicity(model, i, n))).collect();
    let degree = zeros.iter().map(|z| z.1).sum();
    Ok(GhostCoefficient { index: i, zeros, degree, lz: Some(lz), hz: Some(hz) })
}

/// `deg g_i`, without materializing the zero list.
pub fn degree(model: &DimensionModel, i: i64) -> Result<i64> {
    if i <= 0 {
        return Ok(0);
    }
    let hz = hz_below_d(model, i)?;
    let lz = lz_above_dsum(model, i, true)?;
    Ok((lz..=hz).map(|n| multiplicity(model, i, n)).sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaData {
    #[serde(rename = "i")]
    pub index: i64,
    /// Zeros of `Δ_i^+`, as an inclusive range of `n`.
    pub plus_range: Option<(i64, i64)>,
    /// Zeros of `Δ_i^−`.
    pub minus_range: Option<(i64, i64)>,
    pub lambda_plus: i64,
    pub lambda_minus: i64,
    pub lambda: i64,
}

pub fn delta_data(model: &DimensionModel, i: i64) -> Result<DeltaData> {
    if i < 1 {
        return Err(GhostError::InvalidArgument(format!("Δ_i needs i >= 1, got {i}")));
    }
    if i == 1 {
        return delta_one(model);
    }
    let pp = model.periods.dp;
    let two_i = 2 * i;
    let hz_plus = hz_below_d(model, i)?;
    let lz_plus = last_where(|n| model.dp(n) < two_i, guess(i, 2 * pp.period, pp.defect), i)? + 1;
    let hz_minus = last_where(|n| model.dp(n) + 2 <= two_i, guess(i, 2 * pp.period, pp.defect), i)?;
    // A pole at n appears for d + d^new/2 + 1 <= i <= d + d^new (non-strict on the right).
    let lz_minus = lz_above_dsum(model, i, false)?;
    Ok(DeltaData::from_ranges(i, interval(lz_plus, hz_plus), interval(lz_minus, hz_minus)))
}

/// `g_0 = 1`, so `Δ_1 = g_1` even where the pattern would put a zero in `g_0`.
fn delta_one(model: &DimensionModel) -> Result<DeltaData> {
    let g1 = coefficient(model, 1)?;
    if let Some(&(n, mult)) = g1.zeros.iter().find(|z| z.1 > 1) {
        return Err(GhostError::InvalidArgument(format!(
            "g_1 has a zero of order {mult} at n = {n}; Δ_1 is not squarefree"
        )));
    }
    let plus = g1.lz.zip(g1.hz);
    Ok(DeltaData::from_ranges(1, plus, None))
}

impl DeltaData {
    fn from_ranges(index: i64, plus_range: Option<(i64, i64)>, minus_range: Option<(i64, i64)>) -> Self {
        let (lambda_plus, lambda_minus) = (span(plus_range), span(minus_range));
        DeltaData {
            index,
            plus_range,
            minus_range,
            lambda_plus,
            lambda_minus,
            lambda: lambda_plus - lambda_minus,
        }
    }
}

/// `Δ_1, …, Δ_{i_max}`, computed in parallel.
pub fn delta_table(model: &DimensionModel, i_max: i64) -> Result<Vec<DeltaData>> {
    (1..=i_max).into_par_iter().map(|i| delta_data(model, i)).collect()
}

/// `deg g_0, …, deg g_{i_max}`.
pub fn degree_sequence(model: &DimensionModel, i_max: i64) -> Result<Vec<i64>> {
    let mut out = Vec::with_capacity(i_max as usize + 1);
    out.push(0);
    for dd in delta_table(model, i_max)? {
        out.push(out.last().unwrap() + dd.lambda);
    }
    Ok(out)
}

/// Memoized coefficients for one model. Concurrent inserts of the same index are idempotent.
pub struct GhostSeries {
    model: DimensionModel,
    cache: RwLock<HashMap<i64, Arc<GhostCoefficient>>>,
}

impl GhostSeries {
    pub fn new(model: DimensionModel) -> Self {
        GhostSeries { model, cache: RwLock::new(HashMap::new()) }
    }

    pub fn model(&self) -> &DimensionModel {
        &self.model
    }

    pub fn coefficient(&self, i: i64) -> Result<Arc<GhostCoefficient>> {
        if let Some(c) = self.cache.read().unwrap().get(&i) {
            return Ok(Arc::clone(c));
        }
        let c = Arc::new(coefficient(&self.model, i)?);
        Ok(Arc::clone(self.cache.write().unwrap().entry(i).or_insert(c)))
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }
}

/// A finite sum `int + caps · cap` of factor valuations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    int: i128,
    caps: i64,
}

impl Tally {
    fn add(&mut self, f: FactorValuation, mult: i64) -> bool {
        match f {
            FactorValuation::Infinite => return false,
            FactorValuation::Int(v) => self.int += i128::from(v) * i128::from(mult),
            FactorValuation::Cap => self.caps += mult,
        }
        true
    }

    fn value(&self, kappa: &WeightPoint) -> Rational {
        let base = Rational::from_integer(BigInt::from(self.int));
        if self.caps == 0 {
            return base;
        }
        base + cap_value(kappa).expect("caps only arise off Z") * int(self.caps)
    }
}

pub fn eval_valuation(model: &DimensionModel, i: i64, kappa: &WeightPoint) -> Result<ExtRational> {
    kappa.validate(&model.params)?;
    if i <= 0 {
        return Ok(ExtRational::zero());
    }
    let hz = hz_below_d(model, i)?;
    let lz = lz_above_dsum(model, i, true)?;
    let mut tally = Tally::default();
    for n in lz..=hz {
        let f = factor_valuation(&model.params, kappa, model.params.k_n(n));
        if !tally.add(f, multiplicity(model, i, n)) {
            return Ok(ExtRational::Infinity);
        }
    }
    Ok(ExtRational::Finite(tally.value(kappa)))
}

/// `v_p(g_i(w_k))` from exact per-factor valuations of `w_k − w_{k_n}`.
pub fn exact_eval_oracle(model: &DimensionModel, i: i64, k: i64) -> Result<ExtRational> {
    let params = &model.params;
    let wk = exact_weight_coordinate(params, k)?;
    let g = coefficient(model, i)?;
    if g.zeros.iter().any(|&(n, _)| params.k_n(n) == k) {
        return Ok(ExtRational::Infinity);
    }
    let total: Result<i64> = g
        .zeros
        .par_iter()
        .map(|&(n, mult)| {
            let wn = exact_weight_coordinate(params, params.k_n(n))?;
            Ok(mult * vp(&(&wk - wn), params.p)?)
        })
        .sum();
    Ok(ExtRational::from_int(total?))
}

/// `v_p` of the fully expanded product `∏ (w_k − w_{k_n})^mult`.
pub fn exact_product_valuation(model: &DimensionModel, i: i64, k: i64) -> Result<ExtRational> {
    let params = &model.params;
    let wk = exact_weight_coordinate(params, k)?;
    let mut product = Rational::from_integer(BigInt::from(1));
    for (n, mult) in coefficient(model, i)?.zeros {
        let factor = &wk - exact_weight_coordinate(params, params.k_n(n))?;
        product *= Pow::pow(&factor, mult as u64);
    }
    if product.is_zero() {
        return Ok(ExtRational::Infinity);
    }
    Ok(ExtRational::from_int(vp(&product, params.p)?))
}

/// `v_p(a_i) − v_p(a_{i−1})` at `κ`.
pub fn delta_slope(model: &DimensionModel, i: i64, kappa: &WeightPoint) -> Result<ExtRational> {
    if i < 1 {
        return Err(GhostError::InvalidArgument(format!("Δ-slope needs i >= 1, got {i}")));
    }
    let here = eval_valuation(model, i, kappa)?;
    let before = eval_valuation(model, i - 1, kappa)?;
    match (here, before) {
        (ExtRational::Finite(a), ExtRational::Finite(b)) => Ok(ExtRational::Finite(a - b)),
        (ExtRational::Infinity, ExtRational::Finite(_)) => Ok(ExtRational::Infinity),
        _ => Err(GhostError::InsideSemistableRange(i)),
    }
}

fn range_profile_sum(params: &GhostParams, k: i64, range: Option<(i64, i64)>, skip: i64) -> i64 {
    let Some((a, b)) = range else { return 0 };
    (a..=b).filter(|&m| m != skip).map(|m| params.gap_valuation(k, params.k_n(m))).sum()
}

/// `Δ_i` at `w_{k_n}` with the (simple) zero or pole at `w_{k_n}` removed.
pub fn delta_star(model: &DimensionModel, i: i64, n: i64) -> Result<Rational> {
    let dd = delta_data(model, i)?;
    let params = &model.params;
    let k = params.k_n(n);
    let plus = range_profile_sum(params, k, dd.plus_range, n);
    let minus = range_profile_sum(params, k, dd.minus_range, n);
    Ok(int(plus - minus))
}

/// Prefix sums of factor valuations over `n`, excluding the point where the factor is infinite.
struct ProfileSums<'a> {
    params: &'a GhostParams,
    kappa: &'a WeightPoint,
    lo: i64,
    prefix: Vec<Tally>,
}

impl<'a> ProfileSums<'a> {
    fn new(params: &'a GhostParams, kappa: &'a WeightPoint) -> Self {
        ProfileSums { params, kappa, lo: 0, prefix: vec![Tally::default()] }
    }

    fn hi(&self) -> i64 {
        self.lo + self.prefix.len() as i64 - 2
    }

    fn ensure(&mut self, a: i64, b: i64) {
        if a >= self.lo && b <= self.hi() {
            return;
        }
        let len = self.prefix.len() as i64;
        let lo = a.min(self.lo - len);
        let hi = b.max(self.hi() + len);
        let mut prefix = Vec::with_capacity((hi - lo + 2) as usize);
        let mut acc = Tally::default();
        prefix.push(acc);
        for n in lo..=hi {
            acc.add(factor_valuation(self.params, self.kappa, self.params.k_n(n)), 1);
            prefix.push(acc);
        }
        self.lo = lo;
        self.prefix = prefix;
    }

    fn sum(&mut self, range: Option<(i64, i64)>) -> Tally {
        let Some((a, b)) = range else { return Tally::default() };
        self.ensure(a, b);
        let top = self.prefix[(b - self.lo + 1) as usize];
        let bottom = self.prefix[(a - self.lo) as usize];
        Tally { int: top.int - bottom.int, caps: top.caps - bottom.caps }
    }
}

/// `v_p(g_i(w_κ))` for `i = 0, …, i_max`, accumulated through `Δ_i`.
pub fn valuation_sequence(
    model: &DimensionModel,
    kappa: &WeightPoint,
    i_max: i64,
) -> Result<Vec<ExtRational>> {
    kappa.validate(&model.params)?;
    let deltas = delta_table(model, i_max)?;
    let star = match kappa {
        WeightPoint::Integer(k) => Some(model.params.index_of(*k)?),
        _ => None,
    };
    let mut sums = ProfileSums::new(&model.params, kappa);
    let mut acc = Tally::default();
    let mut out = Vec::with_capacity(deltas.len() + 1);
    out.push(ExtRational::zero());
    for dd in &deltas {
        let plus = sums.sum(dd.plus_range);
        let minus = sums.sum(dd.minus_range);
        acc.int += plus.int - minus.int;
        acc.caps += plus.caps - minus.caps;
        let infinite = star.is_some_and(|n| multiplicity(model, dd.index, n) > 0);
        out.push(if infinite { ExtRational::Infinity } else { ExtRational::Finite(acc.value(kappa)) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension_models::{build_gamma0_model, build_quasilinear_model, QuasiLinearSpec};
    use crate::rational::frac;

    fn g5() -> DimensionModel {
        build_gamma0_model(5, 1, 0).unwrap()
    }

    /// A single-period model pinning `d` and `d^new` at `n = 0`.
    fn synthetic(d0: i64, dnew0: i64) -> DimensionModel {
        let p = 7;
        let d = QuasiLinearSpec::new(0, vec![d0], 1, 10).unwrap();
        let dnew = QuasiLinearSpec::new(0, vec![dnew0], 1, 60).unwrap();
        build_quasilinear_model(d, dnew, GhostParams::new(p, 0).unwrap()).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let m = g5();
        assert_eq!(coefficient(&m, 1).unwrap().zeros, vec![(2, 1)]);
        let g2 = coefficient(&m, 2).unwrap();
        assert_eq!(g2.zeros, vec![(2, 1), (3, 1), (4, 1), (5, 1)]);
        assert_eq!(g2.degree, 4);
        let g0 = coefficient(&m, 0).unwrap();
        assert!(g0.zeros.is_empty() && g0.lz.is_none());
        let g4 = coefficient(&m, 4).unwrap();
        assert_eq!(g4.zeros.iter().map(|z| z.1).collect::<Vec<_>>(), vec![2, 3, 2, 2, 2, 1, 1, 1]);
        assert_eq!(g4.lz, Some(4));
    }

    #[test]
    fn multiplicity_two_in_the_middle() {
        let m = synthetic(3, 4);
        assert_eq!(multiplicity(&m, 5, 0), 2);
        assert!(coefficient(&m, 5).unwrap().zeros.contains(&(0, 2)));
    }

    #[test]
    fn delta_examples() {
        let m = g5();
        let dd = delta_data(&m, 2).unwrap();
        assert_eq!(dd.plus_range, Some((3, 5)));
        assert_eq!(dd.minus_range, None);
        assert_eq!(dd.lambda, 3);

        let m = synthetic(0, 3);
        let dd = delta_data(&m, 3).unwrap();
        let (a, b) = dd.minus_range.unwrap();
        assert!(a <= 0 && 0 <= b);
        assert!(delta_data(&m, 0).is_err());
    }

    #[test]
    fn lambda_is_degree_change() {
        for m in [g5(), build_gamma0_model(2, 3, 0).unwrap(), build_gamma0_model(7, 1, 2).unwrap()] {
            let degrees = degree_sequence(&m, 500).unwrap();
            for i in 1..=500 {
                let dd = delta_data(&m, i).unwrap();
                assert_eq!(degrees[i as usize] - degrees[i as usize - 1], dd.lambda, "i = {i}");
                if let (Some(a), Some(b)) = (dd.plus_range, dd.minus_range) {
                    assert!(a.1 < b.0 || b.1 < a.0, "ranges overlap at i = {i}");
                }
            }
            for i in [1, 7, 60, 200] {
                assert_eq!(degrees[i as usize], degree(&m, i).unwrap());
                assert_eq!(degrees[i as usize], coefficient(&m, i).unwrap().degree);
            }
        }
    }

    #[test]
    fn delta_ranges_match_coefficient_quotient() {
        for m in [
            build_gamma0_model(7, 1, 4).unwrap(),
            build_gamma0_model(5, 3, 2).unwrap(),
            build_gamma0_model(2, 3, 0).unwrap(),
        ] {
            for i in 1..=120 {
                let dd = delta_data(&m, i).unwrap();
                let lo = coefficient(&m, i - 1)
                    .unwrap()
                    .lz
                    .unwrap_or(0)
                    .min(coefficient(&m, i).unwrap().lz.unwrap_or(0));
                for n in lo - 5..lo + 400 {
                    let in_plus = dd.plus_range.is_some_and(|(a, b)| a <= n && n <= b);
                    let in_minus = dd.minus_range.is_some_and(|(a, b)| a <= n && n <= b);
                    let before = if i == 1 { 0 } else { multiplicity(&m, i - 1, n) };
                    let change = multiplicity(&m, i, n) - before;
                    assert_eq!(change, i64::from(in_plus) - i64::from(in_minus), "i={i} n={n}");
                }
            }
        }
    }

    #[test]
    fn multiplicity_palindromes() {
        let m = build_gamma0_model(11, 1, 4).unwrap();
        for n in 0..40 {
            let (d, sum) = (m.d(n), m.dsum(n));
            let pattern: Vec<i64> = (d + 1..sum).map(|i| multiplicity(&m, i, n)).collect();
            let mut rev = pattern.clone();
            rev.reverse();
            assert_eq!(pattern, rev);
            if !pattern.is_empty() {
                assert_eq!(pattern[0], 1);
                assert_eq!(*pattern.iter().max().unwrap(), m.dnew(n) / 2);
            }
        }
    }

    #[test]
    fn eval_examples() {
        let m = g5();
        let k12 = WeightPoint::Integer(12);
        assert_eq!(eval_valuation(&m, 1, &k12).unwrap(), ExtRational::from_int(1));
        assert_eq!(eval_valuation(&m, 2, &k12).unwrap(), ExtRational::Infinity);
        assert_eq!(eval_valuation(&m, 4, &k12).unwrap(), ExtRational::from_int(16));
        assert_eq!(eval_valuation(&m, 5, &k12).unwrap(), ExtRational::from_int(26));
        let half = WeightPoint::Boundary(frac(1, 2));
        for i in 0..30 {
            let deg = degree(&m, i).unwrap();
            assert_eq!(eval_valuation(&m, i, &half).unwrap(), ExtRational::Finite(frac(deg, 2)));
        }
    }

    #[test]
    fn oracle_examples() {
        let m = g5();
        assert_eq!(exact_eval_oracle(&m, 1, 12).unwrap(), ExtRational::from_int(1));
        assert_eq!(exact_eval_oracle(&m, 4, 12).unwrap(), ExtRational::from_int(16));
        assert_eq!(exact_eval_oracle(&m, 0, 40).unwrap(), ExtRational::zero());
        assert_eq!(exact_eval_oracle(&m, 2, 12).unwrap(), ExtRational::Infinity);
        assert_eq!(exact_product_valuation(&m, 4, 12).unwrap(), ExtRational::from_int(16));
    }

    #[test]
    fn literal_product_matches_per_factor_oracle() {
        for m in [g5(), build_gamma0_model(2, 3, 0).unwrap(), build_gamma0_model(7, 1, 2).unwrap()] {
            let delta = m.params.delta;
            for i in 0..=8 {
                for j in -3..30 {
                    let k = m.params.k_base + j * delta;
                    assert_eq!(
                        exact_product_valuation(&m, i, k).unwrap(),
                        exact_eval_oracle(&m, i, k).unwrap(),
                        "i={i} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn fast_sequence_matches_direct_eval() {
        let m = build_gamma0_model(5, 3, 2).unwrap();
        let weights = [
            WeightPoint::Integer(42),
            WeightPoint::NearInteger { k_plus: 30, alpha: frac(5, 2) },
            WeightPoint::NearInteger { k_plus: 2, alpha: frac(1, 1) },
            WeightPoint::Boundary(frac(2, 3)),
        ];
        for kappa in &weights {
            let seq = valuation_sequence(&m, kappa, 150).unwrap();
            for i in 0..=150 {
                assert_eq!(seq[i as usize], eval_valuation(&m, i, kappa).unwrap(), "{kappa} i={i}");
            }
        }
    }

    #[test]
    fn delta_slope_and_star() {
        let m = g5();
        let k12 = WeightPoint::Integer(12);
        assert_eq!(delta_slope(&m, 1, &k12).unwrap(), ExtRational::from_int(1));
        assert_eq!(delta_slope(&m, 5, &k12).unwrap(), ExtRational::from_int(10));
        assert_eq!(delta_slope(&m, 2, &k12).unwrap(), ExtRational::Infinity);
        assert!(matches!(delta_slope(&m, 3, &k12), Err(GhostError::InsideSemistableRange(3))));
        assert_eq!(delta_star(&m, 2, 3).unwrap(), frac(2, 1));
    }

    #[test]
    fn memoized_series() {
        let s = GhostSeries::new(g5());
        let results: Vec<_> = (0..64).into_par_iter().map(|j| s.coefficient(j % 8).unwrap()).collect();
        assert_eq!(s.cached_len(), 8);
        for (j, c) in results.iter().enumerate() {
            assert_eq!(**c, coefficient(s.model(), j as i64 % 8).unwrap());
        }
    }

    #[test]
    fn coefficient_json_shape() {
        let text = serde_json::to_string(&coefficient(&g5(), 1).unwrap()).unwrap();
        assert!(text.starts_with(r#"{"i":1,"zeros":[[2,1]]"#), "{text}");
    }
}
