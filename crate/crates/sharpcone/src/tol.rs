use serde::{Deserialize, Serialize};

/// Numerical tolerance policy shared by every module.
///
/// `eq_rel` gates equality checks, `psd_rel` gates positivity floors,
/// `cluster_abs` is the absolute eigenvalue gap used to group degenerate
/// spectra (after scaling by the spectral radius), and `cond_max` rejects
/// ill-conditioned solves.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub eq_rel: f64,
    pub psd_rel: f64,
    pub cluster_abs: f64,
    pub cond_max: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            eq_rel: 1e-8,
            psd_rel: 1e-9,
            cluster_abs: 1e-6,
            cond_max: 1e10,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.eq_rel > 0.0 && self.psd_rel > 0.0 && self.cluster_abs > 0.0 && self.cond_max > 0.0) {
            return Err("all tolerances must be strictly positive".into());
        }
        if self.eq_rel <= self.psd_rel {
            return Err("eq_rel must exceed psd_rel".into());
        }
        Ok(())
    }

    /// Equality threshold at a given scale.
    pub fn eq(&self, scale: f64) -> f64 {
        self.eq_rel * scale.max(1.0)
    }

    /// Positivity floor at a given scale.
    pub fn psd(&self, scale: f64) -> f64 {
        self.psd_rel * scale.max(1.0)
    }
}
