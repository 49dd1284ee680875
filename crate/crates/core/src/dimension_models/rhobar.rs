//! Models for a residual representation component: the base table `S(k, t)`,
//! its defect, and the quasi-linear `d_t`, `d_{p,t}` built from it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DeclaredPeriods, DimensionModel, ModelSource, QlPair, QuasiLinearSpec};
use crate::error::{GhostError, Result};
use crate::weightspace::{is_prime, GhostParams};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhobarSpec {
    pub p: i64,
    pub k_rbar: i64,
    pub split: bool,
    pub m1: i64,
    #[serde(default)]
    pub m2: i64,
    #[serde(default)]
    pub m3: i64,
    #[serde(default)]
    pub t: i64,
    /// Allows `p = 3`.
    #[serde(default)]
    pub experimental: bool,
    /// Explicit `d_t(0..=p)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_window: Option<Vec<i64>>,
    /// Explicit `d_{p,t}(0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dp_base: Option<i64>,
}

impl RhobarSpec {
    pub fn new(p: i64, k_rbar: i64, split: bool, m1: i64, m2: i64, m3: i64, t: i64) -> Self {
        RhobarSpec { p, k_rbar, split, m1, m2, m3, t, experimental: false, base_window: None, dp_base: None }
    }

    pub fn label(&self) -> String {
        format!(
            "rhobar:{},{},{},{},{},{},{}",
            self.p,
            self.k_rbar,
            if self.split { "split" } else { "nonsplit" },
            self.m1,
            self.m2,
            self.m3,
            self.t
        )
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        if !is_prime(p) {
            return Err(GhostError::NotPrime(p));
        }
        if p == 2 || (p == 3 && !self.experimental) {
            return Err(GhostError::InvalidArgument(format!(
                "p = {p} needs p >= 5{}",
                if p == 3 { " (p = 3 requires the experimental flag)" } else { "" }
            )));
        }
        if !(2..=p + 1).contains(&self.k_rbar) {
            return Err(GhostError::InvalidArgument(format!(
                "Serre weight {} outside [2, {}]",
                self.k_rbar,
                p + 1
            )));
        }
        if self.m1 < 0 || self.m2 < 0 || self.m3 < 0 {
            return Err(GhostError::InvalidArgument("multiplicities must be nonnegative".into()));
        }
        if self.k_rbar == p + 1 && self.m1 != 0 {
            return Err(GhostError::InvalidArgument("m1 must be 0 when the Serre weight is p + 1".into()));
        }
        if self.split && self.k_rbar >= p {
            return Err(GhostError::InvalidArgument(format!(
                "split case needs Serre weight <= p - 1 (companion weight {} < 2)",
                p + 1 - self.k_rbar
            )));
        }
        if let Some(w) = &self.base_window {
            if w.len() as i64 != p + 1 {
                return Err(GhostError::InvalidArgument(format!(
                    "base window must list d_t(0..={p}), got {} values",
                    w.len()
                )));
            }
        }
        Ok(())
    }

    fn modulus(&self) -> i64 {
        self.p - 1
    }

    fn twist(&self) -> i64 {
        self.t.rem_euclid(self.modulus())
    }

    /// Least `k` in `[2, p]` with `k ≡ k(r̄) + 2t (mod p − 1)`.
    pub fn k0t(&self) -> i64 {
        let m = self.modulus();
        let target = (self.k_rbar + 2 * self.twist()).rem_euclid(m);
        (2..=self.p).find(|k| k.rem_euclid(m) == target).unwrap()
    }
}

/// Nonzero entries of `S(k, t)` for `2 <= k <= p + 1`, `t` mod `p − 1`.
pub fn rhobar_base_table(spec: &RhobarSpec) -> BTreeMap<(i64, i64), i64> {
    let p = spec.p;
    let m = spec.modulus();
    let mut table = BTreeMap::new();
    let mut put = |k: i64, t: i64, v: i64| {
        if v != 0 {
            *table.entry((k, t.rem_euclid(m))).or_insert(0) += v;
        }
    };
    let kr = spec.k_rbar;
    if kr == p + 1 {
        put(p + 1, 0, spec.m2);
    } else {
        put(kr, 0, spec.m1);
        if kr == 2 {
            put(p + 1, 0, spec.m2);
        }
    }
    if spec.split {
        put(p + 1 - kr, p - kr, spec.m3);
        // A weight 2 companion lifts to weight p + 1 under E_{p-1}.
        if kr == p - 1 {
            put(p + 1, p - kr, spec.m3);
        }
    }
    table
}

struct Table<'a> {
    spec: &'a RhobarSpec,
    entries: BTreeMap<(i64, i64), i64>,
}

impl<'a> Table<'a> {
    fn new(spec: &'a RhobarSpec) -> Self {
        Table { spec, entries: rhobar_base_table(spec) }
    }

    fn base(&self, k: i64, t: i64) -> i64 {
        let t = t.rem_euclid(self.spec.modulus());
        self.entries.get(&(k, t)).copied().unwrap_or(0)
    }

    /// Representative of `x` mod `p − 1` in `(2, p + 1]`.
    fn alpha(&self, x: i64) -> i64 {
        (x - 3).rem_euclid(self.spec.modulus()) + 3
    }

    /// The two table terms attached to `Sym^g`-twists.
    fn h(&self, g: i64, t: i64) -> i64 {
        let a = self.alpha(g + 2);
        self.base(a, t) + self.base(self.spec.p + 3 - a, t - g)
    }

    fn parity_ok(&self, k: i64, t: i64) -> bool {
        (k - self.spec.k_rbar - 2 * t).rem_euclid(self.spec.modulus()) == 0
    }

    /// `S(k, t)` for any `k`, following the weight recursion above `p + 1`.
    fn value(&self, k: i64, t: i64) -> Result<i64> {
        let p = self.spec.p;
        if k < 2 {
            return Ok(0);
        }
        if k <= p + 1 {
            return Ok(self.base(k, t));
        }
        if !self.parity_ok(k, t) {
            return Ok(0);
        }
        if k == p + 2 {
            return Err(GhostError::BaseWindowRequired(format!(
                "{}: weight p + 2 = {} is not reached by the recursion; supply base_window and dp_base",
                self.spec.label(),
                k
            )));
        }
        Ok(self.value(k - p - 1, t - 1)? + self.h(k - 2, t))
    }
}

/// Defect `Q_{d_t}` by the closed case formula.
pub fn rhobar_defect(spec: &RhobarSpec) -> i64 {
    let congruent_2 = (spec.k_rbar - 2).rem_euclid(spec.modulus()) == 0;
    let base = if congruent_2 { spec.m1 + spec.m2 } else { 2 * spec.m1 };
    if spec.split {
        base + 2 * spec.m3
    } else {
        base
    }
}

/// The defect as a sum over one full twist cycle of the base table.
pub fn final_recursion_sum(spec: &RhobarSpec) -> i64 {
    let table = Table::new(spec);
    let p = spec.p;
    let kr = spec.k_rbar;
    (0..=p - 2)
        .map(|j| {
            let a = table.alpha(kr + 2 * j);
            table.base(a, j) + table.base(p + 3 - a, -kr - j + 2)
        })
        .sum()
}

/// Closed value of `d_{p,t}(0)` in the generic non-split case, `None` elsewhere.
pub fn generic_dp_base(spec: &RhobarSpec) -> Option<i64> {
    let p = spec.p;
    if spec.split || spec.k_rbar == 2 || spec.k_rbar >= p {
        return None;
    }
    let k0t = spec.k0t();
    Some(if spec.twist() <= k0t - 2 { 2 * spec.m1 } else { 0 })
}

/// `d_{p,t}(0)` as the sum over the `Sym^g` pieces, `g = k_{0,t} − 2`.
fn dp_base_by_sum(table: &Table, spec: &RhobarSpec) -> i64 {
    let g = spec.k0t() - 2;
    let t = spec.twist();
    (0..=g).map(|j| table.h(2 * j - g, t + j - g)).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhobarData {
    pub spec: RhobarSpec,
    pub d: QuasiLinearSpec,
    pub dp: QuasiLinearSpec,
}

pub fn build_rhobar_model(spec: &RhobarSpec) -> Result<DimensionModel> {
    spec.validate()?;
    let p = spec.p;
    let q = rhobar_defect(spec);
    let k0t = spec.k0t();
    let params = GhostParams::new(p, k0t)?;
    let t = spec.twist();
    let table = Table::new(spec);

    let window = match &spec.base_window {
        Some(w) => w.clone(),
        None => {
            let mut w = Vec::with_capacity(p as usize + 1);
            for n in 0..=p {
                w.push(table.value(params.k_n(n), t)?);
            }
            // The recursion must reproduce the declared defect one period later.
            for n in 0..=p {
                let next = table.value(params.k_n(n + p + 1), t)?;
                if next != w[n as usize] + q {
                    return Err(GhostError::InconsistentRhobar(format!(
                        "recursion gives d_t({}) = {next}, expected {}",
                        n + p + 1,
                        w[n as usize] + q
                    )));
                }
            }
            w
        }
    };
    let dp0 = match spec.dp_base {
        Some(v) => v,
        None => dp_base_by_sum(&table, spec),
    };

    let d = QuasiLinearSpec::new(0, window, p + 1, q)?;
    let dp = QuasiLinearSpec::new(0, vec![dp0], 1, q)?;
    for n in 0..=p {
        let dn = d.eval(n);
        if dp.eval(n) - 2 * dn < 0 {
            return Err(GhostError::InconsistentRhobar(format!(
                "d_t^new({n}) = {} < 0",
                dp.eval(n) - 2 * dn
            )));
        }
        if d.eval(n + 1) < dn {
            return Err(GhostError::InconsistentRhobar(format!("d_t decreases at n = {n}")));
        }
        let sum_here = dp.eval(n) - dn;
        let sum_next = dp.eval(n + 1) - d.eval(n + 1);
        if sum_next < sum_here {
            return Err(GhostError::InconsistentRhobar(format!("d_t + d_t^new decreases at n = {n}")));
        }
    }
    if q <= 0 {
        return Err(GhostError::GrowthFails(format!("Q_d = {q} must be positive")));
    }

    let periods = DeclaredPeriods {
        d: QlPair::new(p + 1, q),
        dnew: QlPair::new(p + 1, (p - 1) * q),
        dsum: QlPair::new(p + 1, p * q),
        dp: QlPair::new(1, q),
    };
    Ok(DimensionModel {
        params,
        source: ModelSource::Rhobar(RhobarData { spec: spec.clone(), d, dp }),
        periods,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension_models::{growth_constants, verify_axioms};
    use crate::rational::frac;

    fn all_specs(p: i64) -> Vec<RhobarSpec> {
        let mut out = Vec::new();
        for kr in 2..=p + 1 {
            for split in [false, true] {
                for m1 in 0..=2 {
                    for m2 in 0..=2 {
                        for m3 in 0..=2 {
                            let s = RhobarSpec::new(p, kr, split, m1, m2, m3, 0);
                            if s.validate().is_ok() {
                                out.push(s);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn base_table_examples() {
        let t = rhobar_base_table(&RhobarSpec::new(13, 12, false, 1, 0, 0, 0));
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![((12, 0), 1)]);
        let t = rhobar_base_table(&RhobarSpec::new(7, 2, true, 1, 1, 1, 0));
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![((2, 0), 1), ((6, 5), 1), ((8, 0), 1)]);
        let t = rhobar_base_table(&RhobarSpec::new(7, 8, false, 0, 1, 0, 0));
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![((8, 0), 1)]);
    }

    #[test]
    fn defect_examples() {
        assert_eq!(rhobar_defect(&RhobarSpec::new(13, 12, false, 1, 0, 0, 0)), 2);
        assert_eq!(rhobar_defect(&RhobarSpec::new(7, 2, true, 1, 1, 1, 0)), 4);
        assert_eq!(rhobar_defect(&RhobarSpec::new(7, 8, false, 0, 1, 0, 0)), 1);
    }

    #[test]
    fn closed_defect_matches_summation() {
        for p in [5, 7, 11, 13] {
            for s in all_specs(p) {
                assert_eq!(rhobar_defect(&s), final_recursion_sum(&s), "{}", s.label());
            }
        }
    }

    #[test]
    fn invariants_enforced() {
        assert!(RhobarSpec::new(7, 8, false, 1, 0, 0, 0).validate().is_err());
        assert!(RhobarSpec::new(7, 9, false, 0, 0, 0, 0).validate().is_err());
        assert!(RhobarSpec::new(2, 2, false, 1, 0, 0, 0).validate().is_err());
        assert!(RhobarSpec::new(3, 2, false, 1, 0, 0, 0).validate().is_err());
        let mut s = RhobarSpec::new(3, 2, false, 1, 0, 0, 0);
        s.experimental = true;
        assert!(s.validate().is_ok());
    }

    #[test]
    fn generic_example() {
        let spec = RhobarSpec::new(13, 12, false, 1, 0, 0, 0);
        let m = build_rhobar_model(&spec).unwrap();
        assert_eq!(m.params.k_base, 12);
        assert_eq!((m.periods.d.period, m.periods.d.defect), (14, 2));
        assert_eq!((m.periods.dp.period, m.periods.dp.defect), (1, 2));
        assert_eq!((m.periods.dnew.period, m.periods.dnew.defect), (14, 24));
        assert_eq!(m.dp(0), 2);
        assert_eq!(m.d(0), 1);
        assert_eq!(m.d(1), 1);
        assert_eq!(growth_constants(&m), (frac(1, 7), frac(12, 7)));
        assert!(verify_axioms(&m, -50, 200).passed());
    }

    #[test]
    fn sym_sum_matches_generic_closed_form() {
        for p in [5, 7, 11, 13] {
            for kr in 3..p {
                for t in 0..p - 1 {
                    for m1 in 1..=2 {
                        let s = RhobarSpec::new(p, kr, false, m1, 0, 0, t);
                        let table = Table::new(&s);
                        assert_eq!(Some(dp_base_by_sum(&table, &s)), generic_dp_base(&s), "{}", s.label());
                    }
                }
            }
        }
    }

    #[test]
    fn derived_models_satisfy_axioms() {
        let mut built = 0;
        for p in [5, 7, 11, 13] {
            for s0 in all_specs(p) {
                for t in 0..p - 1 {
                    let mut s = s0.clone();
                    s.t = t;
                    match build_rhobar_model(&s) {
                        Ok(m) => {
                            built += 1;
                            let r = verify_axioms(&m, -50, 200);
                            assert!(r.passed(), "{}: {r:?}", s.label());
                            assert!(r.b_is_p_minus_1_times_a);
                        }
                        Err(GhostError::BaseWindowRequired(_)) => assert!(s.k_rbar % 2 == 1),
                        Err(GhostError::GrowthFails(_)) => assert_eq!(rhobar_defect(&s), 0),
                        // E_{p-1} embeds weight 2 into weight p + 1, so m2 >= m1 there.
                        Err(GhostError::InconsistentRhobar(_)) => {
                            assert!(s.k_rbar == 2 && s.m2 < s.m1, "{}", s.label())
                        }
                        Err(e) => panic!("{}: {e}", s.label()),
                    }
                }
            }
        }
        assert!(built > 1000);
    }

    #[test]
    fn base_window_required_for_odd_weight() {
        let s = RhobarSpec::new(7, 3, false, 1, 0, 0, 0);
        assert!(matches!(build_rhobar_model(&s), Err(GhostError::BaseWindowRequired(_))));
        let mut s = s;
        s.base_window = Some(vec![1, 1, 1, 1, 1, 1, 1, 1]);
        s.dp_base = Some(2);
        assert!(build_rhobar_model(&s).is_ok());
    }

    #[test]
    fn negative_dnew_rejected() {
        let mut s = RhobarSpec::new(13, 12, false, 1, 0, 0, 0);
        s.base_window = Some(vec![5; 14]);
        s.dp_base = Some(2);
        assert!(matches!(build_rhobar_model(&s), Err(GhostError::InconsistentRhobar(_))));
    }

    #[test]
    fn spec_json_round_trip() {
        let mut s = RhobarSpec::new(13, 12, false, 1, 0, 0, 0);
        s.dp_base = Some(2);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<RhobarSpec>(&text).unwrap(), s);
    }
}
