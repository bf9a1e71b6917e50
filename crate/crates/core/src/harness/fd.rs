//! Central finite differences, used as an independent check on [`Jet2`].
//!
//! Step per coordinate is `h = h_scale · max(1, |x|)`; second partials use
//! the three-point stencil and the mixed partial the four-corner stencil.

use crate::autodiff::Jet2;
use crate::error::{Error, Result};
use crate::models::HeightField;

pub const DEFAULT_H_SCALE: f64 = 1e-5;
/// Step for Hessian comparisons. Rounding in the three-point stencil grows
/// like `ε|f|/h²`, which at `h = 1e-5` reaches 1e-4 once `|f|` is about 10.
pub const HESS_H_SCALE: f64 = 1e-4;
pub const GRAD_RTOL: f64 = 1e-6;
pub const HESS_RTOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEstimate {
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

/// Worst block-relative deviation of a jet from a finite-difference estimate.
///
/// Each slot error is divided by `max(1, ‖block‖∞)` of the jet's gradient or
/// Hessian block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdDeviation {
    pub grad: f64,
    pub hess: f64,
}

impl FdDeviation {
    pub fn within(&self, grad_rtol: f64, hess_rtol: f64) -> bool {
        self.grad <= grad_rtol && self.hess <= hess_rtol
    }
}

impl FdEstimate {
    pub fn deviation(&self, jet: &Jet2) -> FdDeviation {
        let gscale = jet.d1.abs().max(jet.d2.abs()).max(1.0);
        let hscale = jet.d11.abs().max(jet.d12.abs()).max(jet.d22.abs()).max(1.0);
        let grad = (jet.d1 - self.grad[0])
            .abs()
            .max((jet.d2 - self.grad[1]).abs())
            / gscale;
        let hess = (jet.d11 - self.hess[0][0])
            .abs()
            .max((jet.d12 - self.hess[0][1]).abs())
            .max((jet.d22 - self.hess[1][1]).abs())
            / hscale;
        FdDeviation { grad, hess }
    }
}

pub fn fd_oracle<F: HeightField + ?Sized>(
    field: &F,
    u: f64,
    v: f64,
    h_scale: f64,
) -> Result<FdEstimate> {
    let hu = h_scale * u.abs().max(1.0);
    let hv = h_scale * v.abs().max(1.0);
    // Check the whole stencil before evaluating anything.
    for du in [-hu, 0.0, hu] {
        for dv in [-hv, 0.0, hv] {
            if !field.in_domain(u + du, v + dv) {
                return Err(Error::StencilOutOfDomain {
                    u: u + du,
                    v: v + dv,
                });
            }
        }
    }
    let f = |a: f64, b: f64| field.value(a, b);
    let f0 = f(u, v)?;
    let (fpu, fmu) = (f(u + hu, v)?, f(u - hu, v)?);
    let (fpv, fmv) = (f(u, v + hv)?, f(u, v - hv)?);
    let fpp = f(u + hu, v + hv)?;
    let fpm = f(u + hu, v - hv)?;
    let fmp = f(u - hu, v + hv)?;
    let fmm = f(u - hu, v - hv)?;
    let d12 = (fpp - fpm - fmp + fmm) / (4.0 * hu * hv);
    Ok(FdEstimate {
        grad: [(fpu - fmu) / (2.0 * hu), (fpv - fmv) / (2.0 * hv)],
        hess: [
            [(fpu - 2.0 * f0 + fmu) / (hu * hu), d12],
            [d12, (fpv - 2.0 * f0 + fmv) / (hv * hv)],
        ],
    })
}

/// Deviation of the field's jet from finite differences: gradient at
/// [`DEFAULT_H_SCALE`], Hessian at [`HESS_H_SCALE`].
pub fn fd_deviation<F: HeightField + ?Sized>(field: &F, u: f64, v: f64) -> Result<FdDeviation> {
    let jet = field.jet(u, v)?;
    let grad = fd_oracle(field, u, v, DEFAULT_H_SCALE)?
        .deviation(&jet)
        .grad;
    let hess = fd_oracle(field, u, v, HESS_H_SCALE)?.deviation(&jet).hess;
    Ok(FdDeviation { grad, hess })
}

/// Adapts a pair of closures (jet evaluator and plain evaluator) into a
/// [`HeightField`] defined on the whole plane.
pub struct FnField<J, V> {
    pub jet: J,
    pub value: V,
}

impl<J, V> HeightField for FnField<J, V>
where
    J: Fn(Jet2, Jet2) -> Result<Jet2>,
    V: Fn(f64, f64) -> Result<f64>,
{
    fn jet(&self, u: f64, v: f64) -> Result<Jet2> {
        let (ju, jv) = Jet2::variables(u, v);
        (self.jet)(ju, jv)
    }

    fn value(&self, u: f64, v: f64) -> Result<f64> {
        (self.value)(u, v)
    }

    fn in_domain(&self, u: f64, v: f64) -> bool {
        u.is_finite() && v.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{KadiyalaParams, VesParams};

    #[test]
    fn square_gradient() {
        let field = FnField {
            jet: |u: Jet2, _v: Jet2| Ok(u * u),
            value: |u: f64, _v: f64| Ok(u * u),
        };
        let est = fd_oracle(&field, 3.0, 1.0, DEFAULT_H_SCALE).unwrap();
        assert!((est.grad[0] - 6.0).abs() < 1e-8);
        assert!(est.grad[1].abs() < 1e-8);
    }

    #[test]
    fn stencil_crossing_boundary() {
        let p = VesParams::new(1.0, 0.5, 0.5, 1.0).unwrap();
        // (ρ−1)u + v = 1e-7 > 0 but the stencil step is 1e-5.
        let (u, v) = (1.0, 0.5 + 1e-7);
        assert!(p
            .domain_valid(u, v, crate::models::DomainMode::NonStrict)
            .unwrap());
        assert!(matches!(
            fd_oracle(&p, u, v, DEFAULT_H_SCALE),
            Err(Error::StencilOutOfDomain { .. })
        ));
    }

    #[test]
    fn kadiyala_unit_point() {
        let p = KadiyalaParams::new(0.25, 0.25, 0.25, 0.5, 0.5, 2.0).unwrap();
        let est = fd_oracle(&p, 1.0, 1.0, DEFAULT_H_SCALE).unwrap();
        let jet = p.jet(1.0, 1.0).unwrap();
        assert!(est.deviation(&jet).within(GRAD_RTOL, HESS_RTOL));
    }

    #[test]
    fn large_values_need_the_wider_hessian_step() {
        let p = VesParams::new(
            7.915870406625099,
            0.12888788121107173,
            3.541777830199707,
            1.0,
        )
        .unwrap();
        let (u, v) = (1.1082251026664187, 2.8883401202750245);
        let jet = p.jet(u, v).unwrap();
        let narrow = fd_oracle(&p, u, v, DEFAULT_H_SCALE)
            .unwrap()
            .deviation(&jet);
        assert!(narrow.hess > HESS_RTOL);
        let d = fd_deviation(&p, u, v).unwrap();
        assert!(d.within(GRAD_RTOL, HESS_RTOL / 100.0));
    }
}
