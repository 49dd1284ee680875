//! Functions given by one period of values plus a defect.

use serde::{Deserialize, Serialize};

use super::{DeclaredPeriods, DimensionModel, ModelSource, QlPair};
use crate::error::{GhostError, Result};
use crate::weightspace::GhostParams;

/// `f` on `[n_lo, n_lo + period)`, extended by `f(n + period) = f(n) + defect`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiLinearSpec {
    #[serde(default)]
    pub n_lo: i64,
    pub base: Vec<i64>,
    pub period: i64,
    pub defect: i64,
}

impl QuasiLinearSpec {
    pub fn new(n_lo: i64, base: Vec<i64>, period: i64, defect: i64) -> Result<Self> {
        let spec = QuasiLinearSpec { n_lo, base, period, defect };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.period <= 0 {
            return Err(GhostError::InvalidArgument(format!("period must be positive, got {}", self.period)));
        }
        if self.base.len() as i64 != self.period {
            return Err(GhostError::InvalidArgument(format!(
                "base window has {} values but the period is {}",
                self.base.len(),
                self.period
            )));
        }
        Ok(())
    }

    pub fn eval(&self, n: i64) -> i64 {
        let shift = n - self.n_lo;
        self.base[shift.rem_euclid(self.period) as usize] + shift.div_euclid(self.period) * self.defect
    }

    pub fn pair(&self) -> QlPair {
        QlPair::new(self.period, self.defect)
    }
}

pub fn build_quasilinear_model(
    d: QuasiLinearSpec,
    dnew: QuasiLinearSpec,
    params: GhostParams,
) -> Result<DimensionModel> {
    d.validate()?;
    dnew.validate()?;
    let pd = d.pair();
    let pnew = dnew.pair();
    let dsum = pd.combine(1, pnew, 1);
    let dp = pd.combine(2, pnew, 1);
    if pd.defect <= 0 {
        return Err(GhostError::GrowthFails(format!("Q_d = {} must be positive", pd.defect)));
    }
    if dsum.defect <= 0 {
        return Err(GhostError::GrowthFails(format!(
            "defect of d + dnew is {} over period {}",
            dsum.defect, dsum.period
        )));
    }
    Ok(DimensionModel {
        params,
        source: ModelSource::QuasiLinear { d, dnew },
        periods: DeclaredPeriods { d: pd, dnew: pnew, dsum, dp },
    })
}
