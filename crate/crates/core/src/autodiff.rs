//! Second-order forward-mode differentiation in two variables.
//!
//! A [`Jet2`] carries `f`, `∂f/∂u`, `∂f/∂v` and the three distinct entries of
//! the Hessian. The mixed partial has a single slot, so the Hessian is
//! symmetric by construction.
//!
//! `+`, `-`, `*` and unary `-` are implemented as operators and cannot fail on
//! finite operands short of overflow; callers that need the no-NaN guarantee
//! finish with [`Jet2::finite`]. Division and the transcendental functions
//! return [`Result`] and reject both domain violations and non-finite output.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Value, gradient and Hessian of a scalar field at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet2 {
    pub val: f64,
    /// ∂f/∂u
    pub d1: f64,
    /// ∂f/∂v
    pub d2: f64,
    /// ∂²f/∂u²
    pub d11: f64,
    /// ∂²f/∂u∂v
    pub d12: f64,
    /// ∂²f/∂v²
    pub d22: f64,
}

impl Jet2 {
    pub const fn constant(c: f64) -> Self {
        Self {
            val: c,
            d1: 0.0,
            d2: 0.0,
            d11: 0.0,
            d12: 0.0,
            d22: 0.0,
        }
    }

    /// The independent variable `u` at `(u0, v0)`.
    pub const fn seed_u(u0: f64, _v0: f64) -> Self {
        Self {
            d1: 1.0,
            ..Self::constant(u0)
        }
    }

    /// The independent variable `v` at `(u0, v0)`.
    pub const fn seed_v(_u0: f64, v0: f64) -> Self {
        Self {
            d2: 1.0,
            ..Self::constant(v0)
        }
    }

    /// Both seeded variables at once.
    pub const fn variables(u0: f64, v0: f64) -> (Self, Self) {
        (Self::seed_u(u0, v0), Self::seed_v(u0, v0))
    }

    pub fn gradient(&self) -> [f64; 2] {
        [self.d1, self.d2]
    }

    pub fn hessian(&self) -> [[f64; 2]; 2] {
        [[self.d11, self.d12], [self.d12, self.d22]]
    }

    pub fn slots(&self) -> [f64; 6] {
        [self.val, self.d1, self.d2, self.d11, self.d12, self.d22]
    }

    pub fn is_finite(&self) -> bool {
        self.slots().iter().all(|x| x.is_finite())
    }

    /// Passes the jet through if every slot is finite.
    pub fn finite(self, op: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite { op })
        }
    }

    pub fn scale(self, c: f64) -> Self {
        Self {
            val: self.val * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
            d11: self.d11 * c,
            d12: self.d12 * c,
            d22: self.d22 * c,
        }
    }

    /// Applies a scalar function `g` given `g(f)`, `g'(f)` and `g''(f)`.
    fn chain(self, g: f64, dg: f64, ddg: f64) -> Self {
        Self {
            val: g,
            d1: dg * self.d1,
            d2: dg * self.d2,
            d11: ddg * self.d1 * self.d1 + dg * self.d11,
            d12: ddg * self.d1 * self.d2 + dg * self.d12,
            d22: ddg * self.d2 * self.d2 + dg * self.d22,
        }
    }

    pub fn recip(self) -> Result<Self> {
        let x = self.val;
        if x == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let r = 1.0 / x;
        self.chain(r, -r * r, 2.0 * r * r * r).finite("recip")
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Self) -> Result<Self> {
        if rhs.val == 0.0 {
            return Err(Error::DivisionByZero);
        }
        (self * rhs.recip()?).finite("div")
    }

    /// `self^p` for real `p`; the base must be positive.
    pub fn powr(self, p: f64) -> Result<Self> {
        let x = self.val;
        if !(x > 0.0) {
            return Err(Error::Domain {
                op: "powr",
                value: x,
            });
        }
        let g = x.powf(p);
        let dg = p * x.powf(p - 1.0);
        let ddg = p * (p - 1.0) * x.powf(p - 2.0);
        self.chain(g, dg, ddg).finite("powr")
    }

    pub fn ln(self) -> Result<Self> {
        let x = self.val;
        if !(x > 0.0) {
            return Err(Error::Domain { op: "ln", value: x });
        }
        let r = 1.0 / x;
        self.chain(x.ln(), r, -r * r).finite("ln")
    }

    pub fn exp(self) -> Result<Self> {
        let e = self.val.exp();
        self.chain(e, e, e).finite("exp")
    }

    pub fn sqrt(self) -> Result<Self> {
        let x = self.val;
        if !(x > 0.0) {
            return Err(Error::Domain {
                op: "sqrt",
                value: x,
            });
        }
        let s = x.sqrt();
        let dg = 0.5 / s;
        self.chain(s, dg, -0.5 * dg / x).finite("sqrt")
    }
}

impl Add for Jet2 {
    type Output = Jet2;

    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            val: self.val + rhs.val,
            d1: self.d1 + rhs.d1,
            d2: self.d2 + rhs.d2,
            d11: self.d11 + rhs.d11,
            d12: self.d12 + rhs.d12,
            d22: self.d22 + rhs.d22,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;

    fn sub(self, rhs: Jet2) -> Jet2 {
        self + (-rhs)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;

    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;

    fn mul(self, b: Jet2) -> Jet2 {
        let a = self;
        Jet2 {
            val: a.val * b.val,
            d1: a.d1 * b.val + a.val * b.d1,
            d2: a.d2 * b.val + a.val * b.d2,
            d11: a.d11 * b.val + 2.0 * a.d1 * b.d1 + a.val * b.d11,
            d12: a.d12 * b.val + a.d1 * b.d2 + a.d2 * b.d1 + a.val * b.d12,
            d22: a.d22 * b.val + 2.0 * a.d2 * b.d2 + a.val * b.d22,
        }
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;

    fn add(self, c: f64) -> Jet2 {
        Jet2 {
            val: self.val + c,
            ..self
        }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;

    fn mul(self, c: f64) -> Jet2 {
        self.scale(c)
    }
}
