//! Seeded, constraint-respecting parameter draws.
//!
//! Draws are constructive: every sample satisfies the family constraints by
//! construction, so no rejection against the validators is needed. The one
//! rejection loop, in [`ParamSampler::kadiyala_generic`], only keeps generic
//! draws away from the flat-surface conditions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::{DevelopabilityReason, ReturnsToScale};
use crate::models::{KadiyalaParams, VesParams};

const DECREASING: (f64, f64) = (0.25, 0.9);
const INCREASING: (f64, f64) = (1.1, 4.0);

#[derive(Debug, Clone)]
pub struct ParamSampler {
    rng: ChaCha8Rng,
}

impl ParamSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn uniform(&mut self, (lo, hi): (f64, f64)) -> f64 {
        self.rng.random_range(lo..hi)
    }

    fn delta_for(&mut self, regime: ReturnsToScale) -> f64 {
        match regime {
            ReturnsToScale::Constant => 1.0,
            ReturnsToScale::Decreasing => self.uniform(DECREASING),
            ReturnsToScale::Increasing => self.uniform(INCREASING),
        }
    }

    fn non_unit_delta(&mut self) -> f64 {
        if self.rng.random_bool(0.5) {
            self.delta_for(ReturnsToScale::Decreasing)
        } else {
            self.delta_for(ReturnsToScale::Increasing)
        }
    }

    /// VES draw. `β ∈ (0.05, 0.95)`, `ρ ∈ (0.1, min(0.95/β, 5))`,
    /// `k ∈ (0.1, 10)`; `δ` from the requested regime, or a random one.
    pub fn ves(&mut self, regime: Option<ReturnsToScale>) -> VesParams {
        let regime = regime.unwrap_or_else(|| match self.rng.random_range(0..3) {
            0 => ReturnsToScale::Decreasing,
            1 => ReturnsToScale::Constant,
            _ => ReturnsToScale::Increasing,
        });
        let beta = self.uniform((0.05, 0.95));
        let rho = self.uniform((0.1, (0.95 / beta).min(5.0)));
        let k = self.uniform((0.1, 10.0));
        let delta = self.delta_for(regime);
        VesParams::new(k, beta, rho, delta).expect("constructive VES draw is valid")
    }

    /// Weights `(k1, k2, k3)` from a flat Dirichlet on `(k1, 2k2, k3)`.
    fn simplex_weights(&mut self) -> (f64, f64, f64) {
        let mut e = [0.0; 3];
        for x in &mut e {
            *x = -self.rng.random_range(1e-9..1.0f64).ln();
        }
        let t: f64 = e.iter().sum();
        (e[0] / t, e[1] / (2.0 * t), e[2] / t)
    }

    fn betas(&mut self) -> (f64, f64) {
        let sign = if self.rng.random_bool(0.25) {
            -1.0
        } else {
            1.0
        };
        (
            sign * self.uniform((0.1, 3.0)),
            sign * self.uniform((0.1, 3.0)),
        )
    }

    /// Kadiyala draw. With `force` set to one of the three flat-surface
    /// conditions the draw satisfies exactly that condition; the other two
    /// conditions are avoided where the parameterization allows it (`δ ≠ 1`
    /// for the second and third). `None` or `NotDevelopable` gives a
    /// [generic](Self::kadiyala_generic) draw.
    pub fn kadiyala(&mut self, force: Option<DevelopabilityReason>) -> KadiyalaParams {
        use DevelopabilityReason::*;
        match force {
            Some(ConstantReturns) => {
                let (k1, k2, k3) = self.simplex_weights();
                let (b1, b2) = self.betas();
                KadiyalaParams::new(k1, k2, k3, b1, b2, 1.0)
            }
            Some(K2ZeroUnitSum) => {
                let k1 = self.uniform((0.05, 0.95));
                let b1 = self.uniform((0.1, 0.9));
                let delta = self.non_unit_delta();
                KadiyalaParams::new(k1, 0.0, 1.0 - k1, b1, 1.0 - b1, delta)
            }
            Some(BetaOneRankOne) => {
                // k1 = a², k2 = a(1−a), k3 = (1−a)² so k2² = k1 k3 and
                // k1 + 2k2 + k3 = (a + (1−a))² = 1.
                let a = self.uniform((0.05, 0.95));
                let delta = self.non_unit_delta();
                KadiyalaParams::new(a * a, a * (1.0 - a), (1.0 - a) * (1.0 - a), 1.0, 1.0, delta)
            }
            Some(NotDevelopable) | None => return self.kadiyala_generic(),
        }
        .expect("constructive Kadiyala draw is valid")
    }

    /// A draw that stays a fixed margin away from all three flat-surface
    /// conditions. One draw in ten zeroes `k1`, another one in ten zeroes `k3`.
    pub fn kadiyala_generic(&mut self) -> KadiyalaParams {
        loop {
            let (mut k1, mut k2, mut k3) = self.simplex_weights();
            match self.rng.random_range(0..10) {
                0 => k1 = 0.0,
                1 => k3 = 0.0,
                _ => {}
            }
            let total = k1 + 2.0 * k2 + k3;
            (k1, k2, k3) = (k1 / total, k2 / total, k3 / total);
            let (b1, b2) = self.betas();
            let delta = self.non_unit_delta();
            let near_unit_sum = k2 < 0.05 && (b1 + b2 - 1.0).abs() < 0.1;
            let near_rank_one = (b1 - 1.0).abs() < 0.1
                && (b2 - 1.0).abs() < 0.1
                && (k2 * k2 - k1 * k3).abs() < 0.02;
            if near_unit_sum || near_rank_one {
                continue;
            }
            return KadiyalaParams::new(k1, k2, k3, b1, b2, delta)
                .expect("constructive Kadiyala draw is valid");
        }
    }
}

pub fn random_ves_params(seed: u64) -> VesParams {
    ParamSampler::new(seed).ves(None)
}

pub fn random_kadiyala_params(seed: u64, force: Option<DevelopabilityReason>) -> KadiyalaParams {
    ParamSampler::new(seed).kadiyala(force)
}
