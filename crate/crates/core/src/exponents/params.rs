use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// `√(8/3)`, the value of γ with `d_γ = 4`.
pub const GAMMA_PURE_GRAVITY: f64 = 1.632_993_161_855_452;

/// Jointly consistent LQG parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterTriple {
    pub gamma: f64,
    pub xi: f64,
    pub q: f64,
    pub d: f64,
    pub c_m: f64,
}

/// `Q = 2/γ + γ/2`.
pub fn q_subcritical(gamma: f64) -> f64 {
    2.0 / gamma + gamma / 2.0
}

/// Matter central charge `c_M = 25 − 6Q²`.
pub fn central_charge(q: f64) -> f64 {
    25.0 - 6.0 * q * q
}

/// Monotone table of `γ ↦ d_γ`, interpolated by monotone piecewise cubic
/// Hermite splines (Fritsch–Carlson slopes).
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionTable {
    gamma: Vec<f64>,
    d: Vec<f64>,
    slopes: Vec<f64>,
}

impl Default for DimensionTable {
    /// Nodes on `γ ∈ {0, 0.05, …, 2} ∪ {√(8/3)}` taken from the curve
    /// `d_γ = 2 + γ²/2 + γ/√6`, equivalently `Q(ξ) = 1/ξ − 1/√6`. The curve is
    /// exact at `d_{√(8/3)} = 4` and `d_0 = 2`; elsewhere it is a numerical
    /// proxy that can be replaced with [`DimensionTable::from_points`].
    fn default() -> Self {
        let curve = |g: f64| 2.0 + g * g / 2.0 + g / 6f64.sqrt();
        let mut pts: Vec<(f64, f64)> = (0..=40).map(|k| k as f64 * 0.05).map(|g| (g, curve(g))).collect();
        pts.push((GAMMA_PURE_GRAVITY, 4.0));
        Self::from_points(&pts).expect("default table is monotone")
    }
}

impl DimensionTable {
    /// Builds a table from `(γ, d_γ)` points; `d_γ` and `γ/d_γ` must be
    /// increasing in `γ`.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| a.0 == b.0);
        if pts.len() < 2 {
            return Err(Error::InvalidData("dimension table needs at least two points".into()));
        }
        for w in pts.windows(2) {
            if !(w[1].1 >= w[0].1) {
                return Err(Error::InvalidData("d_gamma must be non-decreasing in gamma".into()));
            }
            if w[1].0 / w[1].1 <= w[0].0 / w[0].1 {
                return Err(Error::InvalidData("gamma/d_gamma must be increasing in gamma".into()));
            }
        }
        if pts.iter().any(|&(g, d)| !((0.0..=2.0).contains(&g) && d > 0.0 && d.is_finite())) {
            return Err(Error::InvalidData("table points must have gamma in [0, 2] and d > 0".into()));
        }
        let gamma: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let d: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let slopes = pchip_slopes(&gamma, &d);
        Ok(Self { gamma, d, slopes })
    }

    /// Builds a table from empirical `(ξ, Q(ξ))` points in the subcritical
    /// range (`Q ≥ 2`), solving `Q = 2/γ + γ/2` for `γ ∈ (0, 2]`.
    pub fn from_q_points(points: &[(f64, f64)]) -> Result<Self> {
        let pts: Vec<(f64, f64)> = points
            .iter()
            .map(|&(xi, q)| {
                if !(xi > 0.0) || !(q >= 2.0) {
                    return Err(Error::InvalidData(format!(
                        "(xi, Q) = ({xi}, {q}) is not a subcritical point"
                    )));
                }
                let gamma = q - (q * q - 4.0).max(0.0).sqrt();
                Ok((gamma, gamma / xi))
            })
            .collect::<Result<_>>()?;
        Self::from_points(&pts)
    }

    pub fn span(&self) -> (f64, f64) {
        (self.gamma[0], *self.gamma.last().unwrap())
    }

    /// Interpolated `d_γ`.
    pub fn dimension(&self, gamma: f64) -> Result<f64> {
        let (lo, hi) = self.span();
        if !(gamma >= lo && gamma <= hi) {
            return Err(Error::InvalidParameter(format!(
                "gamma {gamma} outside the table span [{lo}, {hi}]"
            )));
        }
        if let Some(i) = self.gamma.iter().position(|&g| g == gamma) {
            return Ok(self.d[i]);
        }
        let i = self.gamma.partition_point(|&g| g < gamma) - 1;
        let m = &self.slopes;
        Ok(hermite(self.gamma[i], self.gamma[i + 1], self.d[i], self.d[i + 1], m[i], m[i + 1], gamma))
    }

    fn xi_of(&self, gamma: f64) -> f64 {
        gamma / self.dimension(gamma).expect("inside span")
    }
}

fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, m0: f64, m1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * m1
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let k = x.len();
    let delta: Vec<f64> = (0..k - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
    if k == 2 {
        return vec![delta[0]; 2];
    }
    let mut m = vec![0.0; k];
    for i in 1..k - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let w1 = 2.0 * h1 + h0;
            let w2 = h1 + 2.0 * h0;
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            0.0
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    m[0] = end(x[1] - x[0], x[2] - x[1], delta[0], delta[1]);
    m[k - 1] = end(x[k - 1] - x[k - 2], x[k - 2] - x[k - 3], delta[k - 2], delta[k - 3]);
    m
}

/// Parameters for a subcritical `γ`, using the default dimension table.
pub fn parameter_triple(gamma: f64) -> Result<ParameterTriple> {
    parameter_triple_with(gamma, &DimensionTable::default())
}

/// `ξ = γ/d_γ`, `Q = 2/γ + γ/2`, `c_M = 25 − 6Q²` with `d_γ` from `table`.
pub fn parameter_triple_with(gamma: f64, table: &DimensionTable) -> Result<ParameterTriple> {
    if !(gamma > 0.0 && gamma <= 2.0) {
        return Err(Error::InvalidParameter(format!("gamma must lie in (0, 2], got {gamma}")));
    }
    let d = table.dimension(gamma)?;
    let q = q_subcritical(gamma);
    Ok(ParameterTriple { gamma, xi: gamma / d, q, d, c_m: central_charge(q) })
}

/// Inverse of [`parameter_triple`] in `ξ`, using the default table.
pub fn xi_to_gamma(xi: f64) -> Result<ParameterTriple> {
    xi_to_gamma_with(xi, &DimensionTable::default())
}

/// Solves `γ/d_γ = ξ` by bisection (the map is increasing in `γ`).
pub fn xi_to_gamma_with(xi: f64, table: &DimensionTable) -> Result<ParameterTriple> {
    let (lo, hi) = table.span();
    let (xlo, xhi) = (table.xi_of(lo), table.xi_of(hi));
    if !(xi > 0.0 && xi >= xlo && xi <= xhi) {
        return Err(Error::InvalidParameter(format!(
            "xi {xi} outside the table span [{xlo}, {xhi}]"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if table.xi_of(mid) < xi {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-15 {
            break;
        }
    }
    let gamma = 0.5 * (a + b);
    let d = gamma / xi;
    let q = q_subcritical(gamma);
    Ok(ParameterTriple { gamma, xi, q, d, c_m: central_charge(q) })
}
