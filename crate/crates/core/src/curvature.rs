//! Closed-form Gaussian curvature of the VES and Kadiyala surfaces, and the
//! parameter predicates that say when each surface is flat.
//!
//! Every long expression that has two standard algebraic forms (`Den_F`
//! for VES, `T2` for Kadiyala) is implemented in both forms so the two can be
//! checked against each other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{KadiyalaParams, VesParams, PARAM_TOL};
use crate::surface::SignClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnsToScale {
    Constant,
    Increasing,
    Decreasing,
}

impl ReturnsToScale {
    pub fn from_delta(delta: f64) -> Self {
        if (delta - 1.0).abs() <= PARAM_TOL {
            ReturnsToScale::Constant
        } else if delta > 1.0 {
            ReturnsToScale::Increasing
        } else {
            ReturnsToScale::Decreasing
        }
    }
}

/// Returns-to-scale regime of a VES parameter set and the curvature sign it
/// implies everywhere on the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Prediction {
    pub regime: ReturnsToScale,
    pub sign: SignClass,
}

pub fn ves_theorem1_verdict(p: &VesParams) -> Theorem1Prediction {
    let regime = ReturnsToScale::from_delta(p.delta());
    let sign = match regime {
        ReturnsToScale::Constant => SignClass::Zero,
        ReturnsToScale::Decreasing => SignClass::Positive,
        ReturnsToScale::Increasing => SignClass::Negative,
    };
    Theorem1Prediction { regime, sign }
}

fn ves_guard(p: &VesParams, u: f64, v: f64) -> Result<f64> {
    if !(u > 0.0 && v > 0.0) {
        return Err(Error::NonPositiveInput { u, v });
    }
    let w = p.mix(u, v);
    if !(w > 0.0) {
        return Err(Error::Domain {
            op: "ves",
            value: w,
        });
    }
    Ok(w)
}

/// `Den_F` in its expanded form:
///
/// ```text
/// δ²k²u^{2δ}(u²(ρ(β²ρ+ρ−2)+1) − 2(ρ−1)uv(βρ−1) + v²(βρ−1)²) w^{2βδρ} + w² u^{2βδρ+2}
/// ```
///
/// with `w = (ρ−1)u + v`.
pub fn ves_denf(p: &VesParams, u: f64, v: f64) -> Result<f64> {
    let w = ves_guard(p, u, v)?;
    let (k, b, r, d) = (p.k(), p.beta(), p.rho(), p.delta());
    let br = b * r;
    let quad = u * u * (r * (b * b * r + r - 2.0) + 1.0) - 2.0 * (r - 1.0) * u * v * (br - 1.0)
        + v * v * (br - 1.0) * (br - 1.0);
    Ok(
        d * d * k * k * u.powf(2.0 * d) * quad * w.powf(2.0 * br * d)
            + w * w * u.powf(2.0 * br * d + 2.0),
    )
}

/// `Den_F` with the quadratic regrouped as a sum of squares,
/// `β²ρ²u² + ((ρ−1)u − v(ρβ−1))²`, which makes positivity evident.
pub fn ves_denf_grouped(p: &VesParams, u: f64, v: f64) -> Result<f64> {
    let w = ves_guard(p, u, v)?;
    let (k, b, r, d) = (p.k(), p.beta(), p.rho(), p.delta());
    let br = b * r;
    let cross = (r - 1.0) * u - v * (br - 1.0);
    let squares = br * br * u * u + cross * cross;
    Ok(
        d * d * k * k * u.powf(2.0 * d) * squares * w.powf(2.0 * br * d)
            + w * w * u.powf(2.0 * br * d + 2.0),
    )
}

/// Numerator of the VES curvature,
/// `β(δ−1)δ²k²ρ(βρ−1) u^{2(βδρ+δ+1)} w^{2βδρ+2}`.
pub fn ves_curvature_numerator(p: &VesParams, u: f64, v: f64) -> Result<f64> {
    let w = ves_guard(p, u, v)?;
    let (k, b, r, d) = (p.k(), p.beta(), p.rho(), p.delta());
    let br = b * r;
    Ok(b * (d - 1.0)
        * d
        * d
        * k
        * k
        * r
        * (br - 1.0)
        * u.powf(2.0 * (br * d + d + 1.0))
        * w.powf(2.0 * br * d + 2.0))
}

/// Gaussian curvature of the VES surface at `(u, v)`.
pub fn ves_curvature_closed(p: &VesParams, u: f64, v: f64) -> Result<f64> {
    let num = ves_curvature_numerator(p, u, v)?;
    let den = ves_denf_grouped(p, u, v)?;
    debug_assert!(den > 0.0, "Den_F must be positive at a valid point");
    let k = num / (den * den);
    if k.is_finite() {
        Ok(k)
    } else {
        Err(Error::NonFinite {
            op: "ves_curvature",
        })
    }
}

// ---------------------------------------------------------------------------
// Kadiyala
// ---------------------------------------------------------------------------

fn kady_guard(u: f64, v: f64) -> Result<()> {
    if u > 0.0 && v > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveInput { u, v })
    }
}

/// `T1 = (β1+β2)²(δ−1)δ² u^{β1+2} v^{β2+2} S^{2δ/(β1+β2)+2}` where `S` is the
/// inner aggregate of `P`.
pub fn kadiyala_t1(p: &KadiyalaParams, u: f64, v: f64) -> Result<f64> {
    kady_guard(u, v)?;
    let (b1, b2, d) = (p.beta1(), p.beta2(), p.delta());
    let s = b1 + b2;
    let agg = p.aggregate(u, v);
    Ok(s * s
        * (d - 1.0)
        * d
        * d
        * u.powf(b1 + 2.0)
        * v.powf(b2 + 2.0)
        * agg.powf(2.0 * d / s + 2.0))
}

/// `T2` as the two-term product it first appears as.
pub fn kadiyala_t2(p: &KadiyalaParams, u: f64, v: f64) -> Result<f64> {
    kady_guard(u, v)?;
    let (k1, k2, k3) = (p.k1(), p.k2(), p.k3());
    let (b1, b2) = (p.beta1(), p.beta2());
    let s = b1 + b2;
    let (u_b1, u_b2, v_b1, v_b2) = (u.powf(b1), u.powf(b2), v.powf(b1), v.powf(b2));
    let first = s
        * k1
        * u_b2
        * (2.0 * (b2 - 1.0) * b2 * k2 * u_b1
            + (b1 * b1 + (2.0 * b2 - 1.0) * b1 + (b2 - 1.0) * b2) * k3 * v_b1);
    let second = 2.0 * b1 * k2 * v_b2 * (2.0 * b2 * k2 * u_b1 - (b1 - 1.0) * s * k3 * v_b1);
    Ok(first - second)
}

/// The four monomials of `T2` after collecting powers of `u` and `v`, in the
/// order `u^{β1+β2}`, `u^{β1}v^{β2}`, `u^{β2}v^{β1}`, `v^{β1+β2}`.
pub fn kadiyala_t2_terms(p: &KadiyalaParams, u: f64, v: f64) -> Result<[f64; 4]> {
    kady_guard(u, v)?;
    let (k1, k2, k3) = (p.k1(), p.k2(), p.k3());
    let (b1, b2) = (p.beta1(), p.beta2());
    let s = b1 + b2;
    let c_uu = 2.0 * b2.powi(3) + 2.0 * b1 * b2 * b2 - 2.0 * b2 * b2 - 2.0 * b1 * b2;
    let c_uv = -4.0 * b1 * b2;
    let c_mix = b1.powi(3) + 3.0 * b2 * b1 * b1 - b1 * b1 + 3.0 * b2 * b2 * b1 - 2.0 * b2 * b1
        + b2.powi(3)
        - b2 * b2;
    let c_vv = 2.0 * b1.powi(3) + 2.0 * b2 * b1 * b1 - 2.0 * b1 * b1 - 2.0 * b2 * b1;
    Ok([
        c_uu * k1 * k2 * u.powf(s),
        c_uv * k2 * k2 * u.powf(b1) * v.powf(b2),
        c_mix * k1 * k3 * u.powf(b2) * v.powf(b1),
        c_vv * k2 * k3 * v.powf(s),
    ])
}

/// `T2` in collected form, the sum of [`kadiyala_t2_terms`].
pub fn kadiyala_t2_collected(p: &KadiyalaParams, u: f64, v: f64) -> Result<f64> {
    Ok(kadiyala_t2_terms(p, u, v)?.iter().sum())
}

/// The five summands `A1..A5` of `Den_G`, each non-negative under the
/// parameter constraints.
pub fn kadiyala_deng_terms(p: &KadiyalaParams, u: f64, v: f64) -> Result<[f64; 5]> {
    kady_guard(u, v)?;
    let (k1, k2, k3) = (p.k1(), p.k2(), p.k3());
    let (b1, b2, d) = (p.beta1(), p.beta2(), p.delta());
    let s = b1 + b2;
    // δ² S^{2δ/(β1+β2)}, shared by every term
    let e = d * d * p.aggregate(u, v).powf(2.0 * d / s);
    let (u2, v2) = (u * u, v * v);
    let a1 = s * s * k1 * k1 * v2 * u.powf(2.0 * s) * (e + u2);
    let a2 = s * s * k3 * k3 * u2 * v.powf(2.0 * s) * (e + v2);
    let a3 =
        4.0 * s * k2 * k3 * u.powf(b1 + 2.0) * v.powf(b1 + 2.0 * b2) * (b2 * (e + v2) + b1 * v2);
    let a4 = 4.0
        * k2
        * k2
        * u.powf(2.0 * b1)
        * v.powf(2.0 * b2)
        * (b1 * b1 * v2 * (e + u2) + b2 * b2 * u2 * (e + v2) + 2.0 * b1 * b2 * u2 * v2);
    let a5 = 2.0
        * s
        * k1
        * u.powf(s)
        * v.powf(b2 + 2.0)
        * (s * k3 * u2 * v.powf(b1) + 2.0 * k2 * u.powf(b1) * (b1 * (e + u2) + b2 * u2));
    Ok([a1, a2, a3, a4, a5])
}

/// `Den_G = A1 + A2 + A3 + A4 + A5`.
///
/// Panics if the sum is not positive, which cannot happen for validated
/// parameters at a point of the open quadrant.
pub fn kadiyala_deng(p: &KadiyalaParams, u: f64, v: f64) -> Result<f64> {
    let den: f64 = kadiyala_deng_terms(p, u, v)?.iter().sum();
    assert!(den > 0.0, "Den_G = {den} at ({u}, {v}) for {p:?}");
    Ok(den)
}

/// Gaussian curvature of the Kadiyala surface, `T1·T2 / Den_G²`.
pub fn kadiyala_curvature_closed(p: &KadiyalaParams, u: f64, v: f64) -> Result<f64> {
    let den = kadiyala_deng(p, u, v)?;
    let k = kadiyala_t1(p, u, v)? * kadiyala_t2_collected(p, u, v)? / (den * den);
    if k.is_finite() {
        Ok(k)
    } else {
        Err(Error::NonFinite {
            op: "kadiyala_curvature",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DevelopabilityReason {
    /// `δ = 1`
    ConstantReturns,
    /// `k2 = 0` and `β1 + β2 = 1`
    K2ZeroUnitSum,
    /// `β1 = β2 = 1` and `k2² = k1 k3`
    BetaOneRankOne,
    NotDevelopable,
}

impl DevelopabilityReason {
    pub const CONDITIONS: [DevelopabilityReason; 3] = [
        DevelopabilityReason::ConstantReturns,
        DevelopabilityReason::K2ZeroUnitSum,
        DevelopabilityReason::BetaOneRankOne,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DevelopabilityReason::ConstantReturns => "constant_returns",
            DevelopabilityReason::K2ZeroUnitSum => "k2_zero_unit_sum",
            DevelopabilityReason::BetaOneRankOne => "beta_one_rank_one",
            DevelopabilityReason::NotDevelopable => "not_developable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DevelopabilityVerdict {
    pub developable: bool,
    pub reason: DevelopabilityReason,
}

pub fn kadiyala_is_developable(p: &KadiyalaParams) -> DevelopabilityVerdict {
    let eq = |a: f64, b: f64| (a - b).abs() <= PARAM_TOL;
    let reason = if eq(p.delta(), 1.0) {
        DevelopabilityReason::ConstantReturns
    } else if eq(p.k2(), 0.0) && eq(p.beta_sum(), 1.0) {
        DevelopabilityReason::K2ZeroUnitSum
    } else if eq(p.beta1(), 1.0) && eq(p.beta2(), 1.0) && eq(p.k2() * p.k2(), p.k1() * p.k3()) {
        DevelopabilityReason::BetaOneRankOne
    } else {
        DevelopabilityReason::NotDevelopable
    };
    DevelopabilityVerdict {
        developable: reason != DevelopabilityReason::NotDevelopable,
        reason,
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::models::HeightField;
    use crate::surface::curvature_of;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    // Reference values computed at 40 significant digits with mpmath by
    // differentiating Q and P numerically and forming
    // (f_uu f_vv − f_uv²)/(1 + f_u² + f_v²)².
    const VES_K_1_05_05_2_AT_1_2: f64 = -0.034_026_465_028_355_387_523_629_489_603;
    const VES_DENF_1_05_05_2_AT_1_2: f64 = 8.625;
    const KADY_K_QUARTER_HALF_2_AT_1_1: f64 = -0.055_555_555_555_555_555_555_555_555_555;
    const KADY_K_GENERIC_AT_2_3: f64 = 0.002_381_801_677_994_890_741_816_346_419_403;

    #[test]
    fn ves_reference_point() {
        let p = VesParams::new(1.0, 0.5, 0.5, 2.0).unwrap();
        let closed = ves_curvature_closed(&p, 1.0, 2.0).unwrap();
        assert!(rel(closed, VES_K_1_05_05_2_AT_1_2) < 1e-13);
        assert!(rel(ves_denf(&p, 1.0, 2.0).unwrap(), VES_DENF_1_05_05_2_AT_1_2) < 1e-14);
        let auto = curvature_of(&p.jet(1.0, 2.0).unwrap()).unwrap();
        assert!(rel(closed, auto) < 1e-8);
    }

    #[test]
    fn ves_constant_returns_is_flat() {
        let p = VesParams::new(3.0, 0.4, 1.7, 1.0).unwrap();
        for &(u, v) in &[(0.2, 0.3), (1.0, 1.0), (7.0, 2.5)] {
            assert_eq!(ves_curvature_closed(&p, u, v).unwrap(), 0.0);
        }
    }

    #[test]
    fn ves_sign_follows_delta() {
        let dec = VesParams::new(1.0, 0.5, 0.5, 0.6).unwrap();
        let inc = VesParams::new(1.0, 0.5, 0.5, 1.6).unwrap();
        assert!(ves_curvature_closed(&dec, 1.0, 2.0).unwrap() > 0.0);
        assert!(ves_curvature_closed(&inc, 1.0, 2.0).unwrap() < 0.0);
    }

    #[test]
    fn ves_denf_forms_agree() {
        // β = 0.5, ρ = 2 would put βρ on the excluded boundary; use β = 0.4.
        let p = VesParams::new(1.0, 0.4, 2.0, 1.0).unwrap();
        let a = ves_denf(&p, 1.0, 1.0).unwrap();
        let b = ves_denf_grouped(&p, 1.0, 1.0).unwrap();
        assert!(rel(a, 10.305_380_916_683_256_303_049_902_562_2) < 1e-14);
        assert!(rel(a, b) < 1e-14);
        assert!(VesParams::new(1.0, 0.5, 2.0, 1.0).is_err());
    }

    #[test]
    fn ves_domain_errors() {
        let p = VesParams::new(1.0, 0.5, 0.5, 2.0).unwrap();
        assert!(matches!(
            ves_curvature_closed(&p, 1.0, 0.4),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            ves_denf(&p, -1.0, 1.0),
            Err(Error::NonPositiveInput { .. })
        ));
    }

    #[test]
    fn theorem1_predictions() {
        let pred = |d| ves_theorem1_verdict(&VesParams::new(1.0, 0.5, 0.5, d).unwrap());
        assert_eq!(pred(1.0).regime, ReturnsToScale::Constant);
        assert_eq!(pred(1.0).sign, SignClass::Zero);
        assert_eq!(pred(0.5).regime, ReturnsToScale::Decreasing);
        assert_eq!(pred(0.5).sign, SignClass::Positive);
        assert_eq!(pred(2.0).regime, ReturnsToScale::Increasing);
        assert_eq!(pred(2.0).sign, SignClass::Negative);
    }

    #[test]
    fn kadiyala_reference_points() {
        let p = KadiyalaParams::new(0.25, 0.25, 0.25, 0.5, 0.5, 2.0).unwrap();
        let closed = kadiyala_curvature_closed(&p, 1.0, 1.0).unwrap();
        assert!(rel(closed, KADY_K_QUARTER_HALF_2_AT_1_1) < 1e-13);
        // T2 at (1,1) is −0.125 in both forms
        assert!(rel(kadiyala_t2(&p, 1.0, 1.0).unwrap(), -0.125) < 1e-14);
        assert!(rel(kadiyala_t2_collected(&p, 1.0, 1.0).unwrap(), -0.125) < 1e-14);
        let t1 = kadiyala_t1(&p, 1.0, 1.0).unwrap();
        let den = kadiyala_deng(&p, 1.0, 1.0).unwrap();
        assert!(rel(t1, closed * den * den / -0.125) < 1e-13);

        let g = KadiyalaParams::new(0.2, 0.2, 0.4, 1.3, 0.6, 1.7).unwrap();
        let closed = kadiyala_curvature_closed(&g, 2.0, 3.0).unwrap();
        assert!(rel(closed, KADY_K_GENERIC_AT_2_3) < 1e-12);
        assert!(kadiyala_t2_collected(&g, 2.0, 3.0).unwrap().abs() > 1e-3);
        let auto = curvature_of(&g.jet(2.0, 3.0).unwrap()).unwrap();
        assert!(rel(closed, auto) < 1e-8);
    }

    #[test]
    fn kadiyala_vanishing_factors() {
        let cr = KadiyalaParams::new(0.2, 0.2, 0.4, 1.3, 0.6, 1.0).unwrap();
        let unit_sum = KadiyalaParams::new(0.35, 0.0, 0.65, 0.3, 0.7, 2.0).unwrap();
        let rank_one = KadiyalaParams::new(0.36, 0.24, 0.16, 1.0, 1.0, 2.5).unwrap();
        for &(u, v) in &[(0.3, 0.2), (1.0, 1.0), (4.0, 9.0)] {
            assert_eq!(kadiyala_t1(&cr, u, v).unwrap(), 0.0);
            assert_eq!(kadiyala_curvature_closed(&cr, u, v).unwrap(), 0.0);
            assert!(kadiyala_t2(&unit_sum, u, v).unwrap().abs() < 1e-15);
            assert!(kadiyala_t2_collected(&rank_one, u, v).unwrap().abs() < 1e-12);
            assert!(kadiyala_t2(&rank_one, u, v).unwrap().abs() < 1e-12);
        }
        let growing = KadiyalaParams::new(0.2, 0.2, 0.4, 1.3, 0.6, 1.7).unwrap();
        assert!(kadiyala_t1(&growing, 1.0, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn deng_terms_non_negative() {
        let sets = [
            KadiyalaParams::new(0.2, 0.2, 0.4, 1.3, 0.6, 1.7).unwrap(),
            KadiyalaParams::new(0.3, 0.1, 0.5, -0.5, -0.8, 0.6).unwrap(),
            KadiyalaParams::new(0.0, 0.3, 0.4, 2.0, 0.2, 3.0).unwrap(),
        ];
        for p in &sets {
            for &(u, v) in &[(0.1, 0.1), (1.0, 3.0), (10.0, 0.5)] {
                let terms = kadiyala_deng_terms(p, u, v).unwrap();
                assert!(terms.iter().all(|&a| a >= 0.0), "{terms:?}");
                assert!(kadiyala_deng(p, u, v).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn developability_predicate() {
        let v =
            kadiyala_is_developable(&KadiyalaParams::new(0.2, 0.2, 0.4, 1.3, 0.6, 1.0).unwrap());
        assert_eq!(v.reason, DevelopabilityReason::ConstantReturns);
        assert!(v.developable);

        let v =
            kadiyala_is_developable(&KadiyalaParams::new(0.4, 0.0, 0.6, 0.3, 0.7, 2.0).unwrap());
        assert_eq!(v.reason, DevelopabilityReason::K2ZeroUnitSum);

        let v =
            kadiyala_is_developable(&KadiyalaParams::new(0.36, 0.24, 0.16, 1.0, 1.0, 2.0).unwrap());
        assert_eq!(v.reason, DevelopabilityReason::BetaOneRankOne);

        // k2² = 0.04 but k1 k3 = 0.08
        let p = KadiyalaParams::new(0.2, 0.2, 0.4, 1.0, 1.0, 2.0).unwrap();
        let v = kadiyala_is_developable(&p);
        assert_eq!(
            v,
            DevelopabilityVerdict {
                developable: false,
                reason: DevelopabilityReason::NotDevelopable
            }
        );
        let witness = (1..=10)
            .flat_map(|i| (1..=10).map(move |j| (i as f64, j as f64)))
            .map(|(u, v)| curvature_of(&p.jet(u, v).unwrap()).unwrap().abs())
            .fold(0.0, f64::max);
        assert!(witness > 1e-6);
    }

    #[test]
    fn single_weight_zero_keeps_t2_nonzero() {
        // k1 = 0 or k3 = 0 leaves T2 non-vanishing somewhere in the quadrant.
        let sets = [
            KadiyalaParams::new(0.0, 0.3, 0.4, 1.4, 0.7, 2.0).unwrap(),
            KadiyalaParams::new(0.5, 0.25, 0.0, 0.4, 0.9, 0.5).unwrap(),
        ];
        for p in &sets {
            let max = [(0.5, 0.5), (1.0, 2.0), (3.0, 1.0)]
                .iter()
                .map(|&(u, v)| kadiyala_t2(p, u, v).unwrap().abs())
                .fold(0.0, f64::max);
            assert!(max > 1e-3);
        }
    }
}
