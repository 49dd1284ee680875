//! Dimension-like functions `d`, `d^new` and the quasi-linear bookkeeping
//! (periods and defects) of `d`, `d^new`, `d + d^new` and `d_p = 2d + d^new`.

mod gamma0;
mod quasilinear;
mod rhobar;

pub use gamma0::{
    build_gamma0_model, classical_dim, classical_new_dim, kronecker_minus3, kronecker_minus4, mu_invariants,
    mu_invariants_by_counting, MuInvariants,
};
pub use quasilinear::{build_quasilinear_model, QuasiLinearSpec};
pub use rhobar::{
    build_rhobar_model, final_recursion_sum, generic_dp_base, rhobar_base_table, rhobar_defect, RhobarData,
    RhobarSpec,
};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{GhostError, Result};
use crate::rational::{frac, Rational};
use crate::weightspace::GhostParams;

/// Period and defect: `f(n + period) = f(n) + defect`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QlPair {
    pub period: i64,
    pub defect: i64,
}

impl QlPair {
    pub fn new(period: i64, defect: i64) -> Self {
        QlPair { period, defect }
    }

    /// Slope `defect / period`.
    pub fn slope(&self) -> Rational {
        frac(self.defect, self.period)
    }

    /// `a·self + b·other` over the common period `lcm`.
    pub fn combine(self, a: i64, other: QlPair, b: i64) -> QlPair {
        let period = self.period.lcm(&other.period);
        let defect = a * self.defect * (period / self.period) + b * other.defect * (period / other.period);
        QlPair { period, defect }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredPeriods {
    pub d: QlPair,
    pub dnew: QlPair,
    pub dsum: QlPair,
    pub dp: QlPair,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSource {
    Gamma0 { level: i64, mu: MuInvariants },
    QuasiLinear { d: QuasiLinearSpec, dnew: QuasiLinearSpec },
    Rhobar(RhobarData),
}

/// The pair `(d, d^new)` together with its declared quasi-linearity data.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionModel {
    pub params: GhostParams,
    pub source: ModelSource,
    pub periods: DeclaredPeriods,
}

impl DimensionModel {
    pub fn d(&self, n: i64) -> i64 {
        match &self.source {
            ModelSource::Gamma0 { mu, .. } => gamma0::dim_at(self.params.k_n(n), mu),
            ModelSource::QuasiLinear { d, .. } => d.eval(n),
            ModelSource::Rhobar(data) => data.d.eval(n),
        }
    }

    pub fn dnew(&self, n: i64) -> i64 {
        match &self.source {
            ModelSource::Gamma0 { mu, .. } => gamma0::new_dim_at(self.params.k_n(n), self.params.p, mu),
            ModelSource::QuasiLinear { dnew, .. } => dnew.eval(n),
            ModelSource::Rhobar(data) => data.dp.eval(n) - 2 * data.d.eval(n),
        }
    }

    pub fn dsum(&self, n: i64) -> i64 {
        self.d(n) + self.dnew(n)
    }

    pub fn dp(&self, n: i64) -> i64 {
        2 * self.d(n) + self.dnew(n)
    }

    pub fn label(&self) -> String {
        match &self.source {
            ModelSource::Gamma0 { level, .. } => {
                format!("gamma0:{},{},{}", self.params.p, level, self.params.k_base)
            }
            ModelSource::QuasiLinear { .. } => {
                format!("quasilinear:p={},k_base={}", self.params.p, self.params.k_base)
            }
            ModelSource::Rhobar(data) => data.spec.label(),
        }
    }
}

/// `(A, B) = (Q_d / P_d, Q_dnew / P_dnew)`.
pub fn growth_constants(model: &DimensionModel) -> (Rational, Rational) {
    (model.periods.d.slope(), model.periods.dnew.slope())
}

/// Growth constants, refusing models where `A` or `B` is not positive.
pub fn positive_growth_constants(model: &DimensionModel) -> Result<(Rational, Rational)> {
    let (a, b) = growth_constants(model);
    let zero = frac(0, 1);
    if a <= zero || b <= zero {
        return Err(GhostError::LinearGrowth {
            a: crate::rational::format_rational(&a),
            b: crate::rational::format_rational(&b),
        });
    }
    Ok((a, b))
}

/// Outcome of checking (ND), (QL) and `d_p = 2d + d^new` on a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub window: (i64, i64),
    /// `n` where `f(n + 1) < f(n)`, per function name.
    pub nd_failures: Vec<(String, i64)>,
    /// `n` where `f(n + P) != f(n) + Q`, per function name.
    pub ql_failures: Vec<(String, i64)>,
    pub dp_identity_failures: Vec<i64>,
    pub notes: Vec<String>,
    #[serde(with = "crate::rational::serde_rational")]
    pub a: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub b: Rational,
    /// Whether `B = (p − 1)A`.
    pub b_is_p_minus_1_times_a: bool,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.nd_failures.is_empty()
            && self.ql_failures.is_empty()
            && self.dp_identity_failures.is_empty()
            && self.notes.is_empty()
    }
}

pub fn verify_axioms(model: &DimensionModel, n_lo: i64, n_hi: i64) -> AxiomReport {
    let (a, b) = growth_constants(model);
    let mut report = AxiomReport {
        window: (n_lo, n_hi),
        nd_failures: Vec::new(),
        ql_failures: Vec::new(),
        dp_identity_failures: Vec::new(),
        notes: Vec::new(),
        b_is_p_minus_1_times_a: b == &a * frac(model.params.p - 1, 1),
        a,
        b,
    };
    let periods = model.periods;
    let longest =
        [periods.d, periods.dnew, periods.dsum, periods.dp].iter().map(|q| q.period).max().unwrap_or(1);
    if n_hi - n_lo + 1 < longest + 1 {
        report.notes.push(format!("window [{n_lo}, {n_hi}] shorter than a full period ({longest}) plus one"));
    }

    type Eval<'a> = Box<dyn Fn(i64) -> i64 + 'a>;
    let functions: [(&str, Eval, QlPair); 4] = [
        ("d", Box::new(|n| model.d(n)), periods.d),
        ("dnew", Box::new(|n| model.dnew(n)), periods.dnew),
        ("d+dnew", Box::new(|n| model.dsum(n)), periods.dsum),
        ("d_p", Box::new(|n| model.dp(n)), periods.dp),
    ];
    for (name, f, ql) in &functions {
        let nd_checked = *name != "dnew";
        for n in n_lo..=n_hi {
            let here = f(n);
            if nd_checked && n < n_hi && f(n + 1) < here {
                report.nd_failures.push((name.to_string(), n));
            }
            if n + ql.period <= n_hi && f(n + ql.period) != here + ql.defect {
                report.ql_failures.push((name.to_string(), n));
            }
        }
    }
    for n in n_lo..=n_hi {
        if model.dp(n) != 2 * model.d(n) + model.dnew(n) {
            report.dp_identity_failures.push(n);
        }
    }
    report
}
