//! Monge-patch geometry of a height field `F(u, v) = (u, v, f(u, v))`.
//!
//! With `W = √(1 + f_u² + f_v²)`:
//!
//! ```text
//! I  = [1 + f_u²   f_u f_v ]      II = [f_uu  f_uv] / W
//!      [f_u f_v    1 + f_v²]           [f_uv  f_vv]
//! N  = (−f_u, −f_v, 1) / W
//! ```
//!
//! The normal always points upward (`n3 > 0`), which fixes the sign of the
//! mean curvature. Gaussian curvature does not depend on orientation.

use serde::{Deserialize, Serialize};

use crate::autodiff::Jet2;
use crate::error::{Error, Result};

/// Default threshold for calling a curvature value zero.
pub const DEFAULT_TOL_K: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
}

impl FundamentalForms {
    /// `det I`, which equals `1 + f_u² + f_v²` for a graph.
    pub fn det_first(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn det_second(&self) -> f64 {
        self.h11 * self.h22 - self.h12 * self.h12
    }

    pub fn normal(&self) -> [f64; 3] {
        [self.n1, self.n2, self.n3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Positive,
    Zero,
    Negative,
}

impl SignClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SignClass::Positive => "positive",
            SignClass::Zero => "zero",
            SignClass::Negative => "negative",
        }
    }

    /// Strict sign, no tolerance. Zero only for an exact zero.
    pub fn of(x: f64) -> Self {
        if x > 0.0 {
            SignClass::Positive
        } else if x < 0.0 {
            SignClass::Negative
        } else {
            SignClass::Zero
        }
    }
}

impl std::fmt::Display for SignClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Curvature summary at one evaluated point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub valid: bool,
    pub sign: SignClass,
}

impl CurvatureReport {
    pub fn new(forms: &FundamentalForms, valid: bool, local_scale: f64, tol_k: f64) -> Self {
        let k = gaussian_curvature(forms);
        Self {
            k,
            h: mean_curvature(forms),
            valid,
            sign: classify_sign(k, local_scale, tol_k),
        }
    }
}

pub fn fundamental_forms(jet: &Jet2) -> Result<FundamentalForms> {
    if !jet.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    let (fu, fv) = (jet.d1, jet.d2);
    let w = (1.0 + fu * fu + fv * fv).sqrt();
    let forms = FundamentalForms {
        g11: 1.0 + fu * fu,
        g12: fu * fv,
        g22: 1.0 + fv * fv,
        h11: jet.d11 / w,
        h12: jet.d12 / w,
        h22: jet.d22 / w,
        n1: -fu / w,
        n2: -fv / w,
        n3: 1.0 / w,
    };
    // Slopes near sqrt(f64::MAX) overflow W even when the jet is finite.
    if [
        forms.g11, forms.g22, forms.g12, forms.h11, forms.h12, forms.h22,
    ]
    .iter()
    .all(|x| x.is_finite())
        && w.is_finite()
    {
        Ok(forms)
    } else {
        Err(Error::NonFinite {
            op: "fundamental_forms",
        })
    }
}

/// `K = det II / det I`.
pub fn gaussian_curvature(forms: &FundamentalForms) -> f64 {
    forms.det_second() / forms.det_first()
}

/// `H = (g11 h22 − 2 g12 h12 + g22 h11) / (2 det I)` under the upward normal.
pub fn mean_curvature(forms: &FundamentalForms) -> f64 {
    (forms.g11 * forms.h22 - 2.0 * forms.g12 * forms.h12 + forms.g22 * forms.h11)
        / (2.0 * forms.det_first())
}

/// Zero when `|K| ≤ tol_k·(1 + local_scale)`, otherwise the sign of `K`.
pub fn classify_sign(k: f64, local_scale: f64, tol_k: f64) -> SignClass {
    debug_assert!(tol_k > 0.0);
    if k.abs() <= tol_k * (1.0 + local_scale.abs()) {
        SignClass::Zero
    } else if k > 0.0 {
        SignClass::Positive
    } else {
        SignClass::Negative
    }
}

/// Gaussian curvature of the graph of `jet` at its point, via the forms.
pub fn curvature_of(jet: &Jet2) -> Result<f64> {
    Ok(gaussian_curvature(&fundamental_forms(jet)?))
}
