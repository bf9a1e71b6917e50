//! The VES and Kadiyala production-function families.
//!
//! ```text
//! VES:       Q(u, v) = k u^{δ(1−βρ)} ((ρ−1)u + v)^{βδρ}
//! Kadiyala:  P(u, v) = (k1 u^{β1+β2} + 2 k2 u^{β1} v^{β2} + k3 v^{β1+β2})^{δ/(β1+β2)}
//! ```
//!
//! Parameter records are validated on construction (and on deserialization)
//! and are immutable afterwards. Each family has a jet evaluator used by the
//! curvature pipeline and a plain `f64` evaluator used by the finite-difference
//! oracle; the two share no code.

use serde::{Deserialize, Serialize};

use crate::autodiff::Jet2;
use crate::error::{Error, Result};

/// Absolute tolerance for equality tests on parameters (`δ = 1`, `k2 = 0`, ...).
pub const PARAM_TOL: f64 = 1e-12;

fn param_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= PARAM_TOL
}

fn check_positive(u: f64, v: f64) -> Result<()> {
    if u > 0.0 && v > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveInput { u, v })
    }
}

/// A scalar field over the positive quadrant that can be evaluated both as a
/// jet and as a plain value.
pub trait HeightField {
    fn jet(&self, u: f64, v: f64) -> Result<Jet2>;

    fn value(&self, u: f64, v: f64) -> Result<f64>;

    /// Whether `(u, v)` lies in the region where the field is considered.
    fn in_domain(&self, u: f64, v: f64) -> bool;
}

/// Which VES region counts as valid.
///
/// `NonStrict` is where `Q` is well defined, `(ρ−1)u + v > 0`. `Strict` is
/// the economically relevant region with positive elasticity of substitution,
/// `v/u > (1−ρ)/(1−βρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainMode {
    #[default]
    Strict,
    NonStrict,
}

// ---------------------------------------------------------------------------
// VES
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVes")]
pub struct VesParams {
    k: f64,
    beta: f64,
    rho: f64,
    delta: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVes {
    k: f64,
    beta: f64,
    rho: f64,
    delta: f64,
}

impl TryFrom<RawVes> for VesParams {
    type Error = Error;

    fn try_from(r: RawVes) -> Result<Self> {
        VesParams::new(r.k, r.beta, r.rho, r.delta)
    }
}

impl VesParams {
    pub fn new(k: f64, beta: f64, rho: f64, delta: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::ConstraintViolation("k>0"));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::ConstraintViolation("0<β<1"));
        }
        let br = beta * rho;
        if !(br > 0.0 && br < 1.0) {
            return Err(Error::ConstraintViolation("0<βρ<1"));
        }
        if !(delta > 0.0) {
            return Err(Error::ConstraintViolation("δ>0"));
        }
        Ok(Self {
            k,
            beta,
            rho,
            delta,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `(ρ−1)u + v`
    pub fn mix(&self, u: f64, v: f64) -> f64 {
        (self.rho - 1.0) * u + v
    }

    pub fn domain_valid(&self, u: f64, v: f64, mode: DomainMode) -> Result<bool> {
        check_positive(u, v)?;
        Ok(match mode {
            DomainMode::NonStrict => self.mix(u, v) > 0.0,
            DomainMode::Strict => {
                self.mix(u, v) > 0.0 && v / u > (1.0 - self.rho) / (1.0 - self.beta * self.rho)
            }
        })
    }

    /// Jet of `Q` at `(u, v)`.
    pub fn eval(&self, u: Jet2, v: Jet2) -> Result<Jet2> {
        check_positive(u.val, v.val)?;
        let w = u.scale(self.rho - 1.0) + v;
        if !(w.val > 0.0) {
            return Err(Error::Domain {
                op: "ves",
                value: w.val,
            });
        }
        let capital = u.powr(self.delta * (1.0 - self.beta * self.rho))?;
        let mixed = w.powr(self.beta * self.delta * self.rho)?;
        (capital * mixed).scale(self.k).finite("ves")
    }

    pub fn value_at(&self, u: f64, v: f64) -> Result<f64> {
        check_positive(u, v)?;
        let w = self.mix(u, v);
        if !(w > 0.0) {
            return Err(Error::Domain {
                op: "ves",
                value: w,
            });
        }
        let q = self.k
            * u.powf(self.delta * (1.0 - self.beta * self.rho))
            * w.powf(self.beta * self.delta * self.rho);
        if q.is_finite() {
            Ok(q)
        } else {
            Err(Error::NonFinite { op: "ves" })
        }
    }

    /// Closed-form elasticity of substitution `σ = 1 + (ρ−1)/(1−βρ) · u/v`.
    pub fn elasticity(&self, u: f64, v: f64) -> Result<f64> {
        check_positive(u, v)?;
        Ok(1.0 + (self.rho - 1.0) / (1.0 - self.beta * self.rho) * (u / v))
    }
}

impl HeightField for VesParams {
    fn jet(&self, u: f64, v: f64) -> Result<Jet2> {
        let (ju, jv) = Jet2::variables(u, v);
        self.eval(ju, jv)
    }

    fn value(&self, u: f64, v: f64) -> Result<f64> {
        self.value_at(u, v)
    }

    fn in_domain(&self, u: f64, v: f64) -> bool {
        self.domain_valid(u, v, DomainMode::NonStrict)
            .unwrap_or(false)
    }
}

/// Hicks elasticity of substitution from first and second partials:
///
/// ```text
/// σ = −f_u f_v (u f_u + v f_v) / (u v (f_uu f_v² − 2 f_uv f_u f_v + f_vv f_u²))
/// ```
pub fn elasticity_oracle(jet: &Jet2, u: f64, v: f64) -> Result<f64> {
    let (fu, fv) = (jet.d1, jet.d2);
    let terms = [
        jet.d11 * fv * fv,
        -2.0 * jet.d12 * fu * fv,
        jet.d22 * fu * fu,
    ];
    let den = u * v * terms.iter().sum::<f64>();
    let magnitude = u * v * terms.iter().map(|t| t.abs()).sum::<f64>();
    if !(den.abs() > 64.0 * f64::EPSILON * magnitude) {
        return Err(Error::SingularPoint);
    }
    let sigma = -fu * fv * (u * fu + v * fv) / den;
    if sigma.is_finite() {
        Ok(sigma)
    } else {
        Err(Error::SingularPoint)
    }
}

// ---------------------------------------------------------------------------
// Kadiyala
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKadiyala")]
pub struct KadiyalaParams {
    k1: f64,
    k2: f64,
    k3: f64,
    beta1: f64,
    beta2: f64,
    delta: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKadiyala {
    k1: f64,
    k2: f64,
    k3: f64,
    beta1: f64,
    beta2: f64,
    delta: f64,
}

impl TryFrom<RawKadiyala> for KadiyalaParams {
    type Error = Error;

    fn try_from(r: RawKadiyala) -> Result<Self> {
        KadiyalaParams::new(r.k1, r.k2, r.k3, r.beta1, r.beta2, r.delta)
    }
}

impl KadiyalaParams {
    /// Validates the parameters. The weights must already satisfy
    /// `k1 + 2k2 + k3 = 1`; see [`KadiyalaParams::normalized`] to rescale.
    pub fn new(k1: f64, k2: f64, k3: f64, beta1: f64, beta2: f64, delta: f64) -> Result<Self> {
        if !(k1 >= 0.0 && k2 >= 0.0 && k3 >= 0.0) {
            return Err(Error::ConstraintViolation("k_i≥0"));
        }
        if !((k1 + 2.0 * k2 + k3 - 1.0).abs() <= PARAM_TOL) {
            return Err(Error::ConstraintViolation("k1+2k2+k3=1"));
        }
        if k1 == 0.0 && k2 == 0.0 {
            return Err(Error::ConstraintViolation("(k1,k2)≠(0,0)"));
        }
        if k2 == 0.0 && k3 == 0.0 {
            return Err(Error::ConstraintViolation("(k2,k3)≠(0,0)"));
        }
        let sum = beta1 + beta2;
        if !(beta1 * sum > 0.0) {
            return Err(Error::ConstraintViolation("β1(β1+β2)>0"));
        }
        if !(beta2 * sum > 0.0) {
            return Err(Error::ConstraintViolation("β2(β1+β2)>0"));
        }
        if !(delta > 0.0) {
            return Err(Error::ConstraintViolation("δ>0"));
        }
        Ok(Self {
            k1,
            k2,
            k3,
            beta1,
            beta2,
            delta,
        })
    }

    /// Divides the weights by `k1 + 2k2 + k3` before validating.
    pub fn normalized(
        k1: f64,
        k2: f64,
        k3: f64,
        beta1: f64,
        beta2: f64,
        delta: f64,
    ) -> Result<Self> {
        let total = k1 + 2.0 * k2 + k3;
        if !(total > 0.0) {
            return Err(Error::ConstraintViolation("k1+2k2+k3=1"));
        }
        Self::new(k1 / total, k2 / total, k3 / total, beta1, beta2, delta)
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn k2(&self) -> f64 {
        self.k2
    }

    pub fn k3(&self) -> f64 {
        self.k3
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `β1 + β2`
    pub fn beta_sum(&self) -> f64 {
        self.beta1 + self.beta2
    }

    /// Jet of `P` at `(u, v)`.
    pub fn eval(&self, u: Jet2, v: Jet2) -> Result<Jet2> {
        check_positive(u.val, v.val)?;
        let s = self.beta_sum();
        let inner = u.powr(s)?.scale(self.k1)
            + (u.powr(self.beta1)? * v.powr(self.beta2)?).scale(2.0 * self.k2)
            + v.powr(s)?.scale(self.k3);
        inner.powr(self.delta / s)?.finite("kadiyala")
    }

    /// Inner aggregate `k1 u^{β1+β2} + 2 k2 u^{β1} v^{β2} + k3 v^{β1+β2}`.
    pub fn aggregate(&self, u: f64, v: f64) -> f64 {
        let s = self.beta_sum();
        self.k1 * u.powf(s)
            + 2.0 * self.k2 * u.powf(self.beta1) * v.powf(self.beta2)
            + self.k3 * v.powf(s)
    }

    pub fn value_at(&self, u: f64, v: f64) -> Result<f64> {
        check_positive(u, v)?;
        let p = self.aggregate(u, v).powf(self.delta / self.beta_sum());
        if p.is_finite() {
            Ok(p)
        } else {
            Err(Error::NonFinite { op: "kadiyala" })
        }
    }

    /// Names the familiar production function this parameter set reduces to.
    pub fn specialize(&self) -> FamilyTag {
        let (k1, k2, k3) = (self.k1, self.k2, self.k3);
        let s = self.beta_sum();
        let delta = self.delta;
        if param_eq(k2, 0.0) && param_eq(s, 1.0) {
            return FamilyTag::perfect_substitutes(k1, k3, delta);
        }
        if param_eq(self.beta1, 1.0) && param_eq(self.beta2, 1.0) && param_eq(k2 * k2, k1 * k3) {
            return FamilyTag::perfect_substitutes(k1.sqrt(), k3.sqrt(), delta);
        }
        if param_eq(k1, 0.0) && param_eq(k3, 0.0) && param_eq(delta, 1.0) {
            return FamilyTag {
                tag: Family::CobbDouglasType,
                reduction: None,
                note: Some("P = u^{1−α} v^{α} with α = β2/(β1+β2)"),
            };
        }
        if param_eq(k3, 0.0) && param_eq(self.beta2, 1.0) {
            return FamilyTag {
                tag: Family::VesType,
                reduction: None,
                note: Some("matched on k3=0, β2=1; the β1 = 1/(ρμ) − 1 relation is not checked"),
            };
        }
        if param_eq(k3, 0.0) {
            return FamilyTag::plain(Family::LuFletcherType);
        }
        if param_eq(k2, 0.0) {
            if s < 1.0 {
                return FamilyTag::plain(Family::CesType);
            }
            return FamilyTag {
                tag: Family::GeneralKadiyala,
                reduction: None,
                note: Some("k2=0 with β1+β2>1 is outside the CES-type range"),
            };
        }
        FamilyTag::plain(Family::GeneralKadiyala)
    }
}

impl HeightField for KadiyalaParams {
    fn jet(&self, u: f64, v: f64) -> Result<Jet2> {
        let (ju, jv) = Jet2::variables(u, v);
        self.eval(ju, jv)
    }

    fn value(&self, u: f64, v: f64) -> Result<f64> {
        self.value_at(u, v)
    }

    fn in_domain(&self, u: f64, v: f64) -> bool {
        u > 0.0 && v > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    GeneralKadiyala,
    CesType,
    LuFletcherType,
    CobbDouglasType,
    VesType,
    PerfectSubstitutes,
}

/// `(a u + b v)^δ`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearAggregate {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
}

impl LinearAggregate {
    pub fn value(&self, u: f64, v: f64) -> f64 {
        (self.a * u + self.b * v).powf(self.delta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyTag {
    pub tag: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<LinearAggregate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

impl FamilyTag {
    fn plain(tag: Family) -> Self {
        Self {
            tag,
            reduction: None,
            note: None,
        }
    }

    fn perfect_substitutes(a: f64, b: f64, delta: f64) -> Self {
        Self {
            tag: Family::PerfectSubstitutes,
            reduction: Some(LinearAggregate { a, b, delta }),
            note: None,
        }
    }
}

// ---------------------------------------------------------------------------

/// A parameterized production surface together with its domain convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Model {
    Ves {
        params: VesParams,
        #[serde(default)]
        domain: DomainMode,
    },
    Kadiyala {
        params: KadiyalaParams,
    },
}

impl Model {
    pub fn ves(params: VesParams, domain: DomainMode) -> Self {
        Model::Ves { params, domain }
    }

    pub fn kadiyala(params: KadiyalaParams) -> Self {
        Model::Kadiyala { params }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Ves { .. } => "ves",
            Model::Kadiyala { .. } => "kadiyala",
        }
    }
}

impl HeightField for Model {
    fn jet(&self, u: f64, v: f64) -> Result<Jet2> {
        match self {
            Model::Ves { params, .. } => params.jet(u, v),
            Model::Kadiyala { params } => params.jet(u, v),
        }
    }

    fn value(&self, u: f64, v: f64) -> Result<f64> {
        match self {
            Model::Ves { params, .. } => params.value_at(u, v),
            Model::Kadiyala { params } => params.value_at(u, v),
        }
    }

    fn in_domain(&self, u: f64, v: f64) -> bool {
        match self {
            Model::Ves { params, domain } => params.domain_valid(u, v, *domain).unwrap_or(false),
            Model::Kadiyala { params } => params.in_domain(u, v),
        }
    }
}
