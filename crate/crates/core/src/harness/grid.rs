use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    #[default]
    Logarithmic,
}

/// Rectangular sampling domain in the positive quadrant.
///
/// An axis with a single sample must have equal bounds; otherwise it needs at
/// least two samples and strictly increasing bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub n_u: usize,
    pub n_v: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Default for GridSpec {
    /// 20×20 log-spaced over `[0.1, 10]²`.
    fn default() -> Self {
        Self {
            u_min: 0.1,
            u_max: 10.0,
            v_min: 0.1,
            v_max: 10.0,
            n_u: 20,
            n_v: 20,
            spacing: Spacing::Logarithmic,
        }
    }
}

fn check_axis(name: &str, lo: f64, hi: f64, n: usize) -> Result<()> {
    if !(lo > 0.0 && hi.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "{name} bounds must be positive and finite, got [{lo}, {hi}]"
        )));
    }
    match n {
        0 => Err(Error::InvalidSpec(format!(
            "{name} needs at least one sample"
        ))),
        1 if lo == hi => Ok(()),
        1 => Err(Error::InvalidSpec(format!(
            "{name} has one sample but distinct bounds [{lo}, {hi}]"
        ))),
        _ if lo < hi => Ok(()),
        _ => Err(Error::InvalidSpec(format!(
            "{name} bounds must satisfy min < max, got [{lo}, {hi}]"
        ))),
    }
}

impl GridSpec {
    pub fn new(
        (u_min, u_max, n_u): (f64, f64, usize),
        (v_min, v_max, n_v): (f64, f64, usize),
        spacing: Spacing,
    ) -> Result<Self> {
        let spec = Self {
            u_min,
            u_max,
            v_min,
            v_max,
            n_u,
            n_v,
            spacing,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_axis("u", self.u_min, self.u_max, self.n_u)?;
        check_axis("v", self.v_min, self.v_max, self.n_v)
    }

    pub fn len(&self) -> usize {
        self.n_u * self.n_v
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis(&self, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![lo];
        }
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return lo;
                }
                if i == n - 1 {
                    return hi;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => lo + (hi - lo) * t,
                    Spacing::Logarithmic => lo * (hi / lo).powf(t),
                }
            })
            .collect()
    }

    pub fn u_axis(&self) -> Vec<f64> {
        self.axis(self.u_min, self.u_max, self.n_u)
    }

    pub fn v_axis(&self) -> Vec<f64> {
        self.axis(self.v_min, self.v_max, self.n_v)
    }

    /// All `(u, v)` pairs, `u`-major, which is also ascending `(u, v)` order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let vs = self.v_axis();
        self.u_axis()
            .into_iter()
            .flat_map(|u| vs.iter().map(move |&v| (u, v)))
            .collect()
    }
}

/// Validates `spec` and returns its sample points.
pub fn sample_grid(spec: &GridSpec) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    Ok(spec.points())
}

impl FromStr for GridSpec {
    type Err = Error;

    /// Accepts a JSON object, or the compact form
    /// `u_min,u_max,n_u,v_min,v_max,n_v[,lin|log]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let spec: GridSpec =
                serde_json::from_str(s).map_err(|e| Error::InvalidSpec(e.to_string()))?;
            spec.validate()?;
            return Ok(spec);
        }
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 && parts.len() != 7 {
            return Err(Error::InvalidSpec(format!(
                "expected u_min,u_max,n_u,v_min,v_max,n_v[,lin|log], got {s:?}"
            )));
        }
        let real = |i: usize| {
            parts[i]
                .parse::<f64>()
                .map_err(|_| Error::InvalidSpec(format!("not a number: {:?}", parts[i])))
        };
        let count = |i: usize| {
            parts[i]
                .parse::<usize>()
                .map_err(|_| Error::InvalidSpec(format!("not a count: {:?}", parts[i])))
        };
        let spacing = match parts.get(6).copied() {
            None | Some("log") | Some("logarithmic") => Spacing::Logarithmic,
            Some("lin") | Some("linear") => Spacing::Linear,
            Some(other) => return Err(Error::InvalidSpec(format!("unknown spacing {other:?}"))),
        };
        GridSpec::new(
            (real(0)?, real(1)?, count(2)?),
            (real(3)?, real(4)?, count(5)?),
            spacing,
        )
    }
}
