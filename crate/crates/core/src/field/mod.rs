//! Gaussian free field samplers and deterministic field operations.
//!
//! A [`FieldGrid`] stores real values on an `n × n` lattice with physical
//! spacing `spacing`. Vertex `(row, col)` sits at `x = col·spacing`,
//! `y = row·spacing` and has linear index `row·n + col`.

mod bump;
mod circle;
mod dgff;
pub mod io;
mod mollify;
pub(crate) mod spectral;
mod white_noise;

pub use bump::{smooth_step, BumpSpec};
pub use circle::circle_average;
pub use dgff::{sample_continuum_gff, sample_discrete_gff, whole_plane_covariance, CONTINUUM_GFF_SCALE};
pub use mollify::mollify;
pub use white_noise::{sample_wn_field, truncation_profile, WN_LAYER_RATIO};

use crate::error::{Error, Result};

/// A physical point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// How a field was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind {
    DiscreteGff,
    /// `ĥ_{t_low} − ĥ_{t_high}` from the heat-kernel white-noise decomposition.
    WhiteNoise { t_low: f64, t_high: f64 },
    /// Same as `WhiteNoise`, with the finite-range truncation bump applied.
    WhiteNoiseTruncated { t_low: f64, t_high: f64 },
    Constant,
    Custom,
}

impl FieldKind {
    pub fn code(&self) -> u32 {
        match self {
            FieldKind::Custom => 0,
            FieldKind::Constant => 1,
            FieldKind::DiscreteGff => 2,
            FieldKind::WhiteNoise { .. } => 3,
            FieldKind::WhiteNoiseTruncated { .. } => 4,
        }
    }

    /// Inverse of [`FieldKind::code`]. White-noise scale ranges are not part
    /// of the binary header and decode as `(0, 0)`.
    pub fn from_code(code: u32) -> Option<Self> {
        Some(match code {
            0 => FieldKind::Custom,
            1 => FieldKind::Constant,
            2 => FieldKind::DiscreteGff,
            3 => FieldKind::WhiteNoise { t_low: 0.0, t_high: 0.0 },
            4 => FieldKind::WhiteNoiseTruncated { t_low: 0.0, t_high: 0.0 },
            _ => return None,
        })
    }
}

/// Real-valued field on a square lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    n: usize,
    spacing: f64,
    values: Vec<f64>,
    kind: FieldKind,
    seed: Option<u64>,
}

pub(crate) fn check_grid(n: usize, spacing: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize("lattice size must be at least 1".into()));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidScale(format!("spacing must be positive, got {spacing}")));
    }
    Ok(())
}

impl FieldGrid {
    pub(crate) fn from_parts(
        n: usize,
        spacing: f64,
        values: Vec<f64>,
        kind: FieldKind,
        seed: Option<u64>,
    ) -> Self {
        debug_assert_eq!(values.len(), n * n);
        Self { n, spacing, values, kind, seed }
    }

    pub fn constant(n: usize, spacing: f64, c: f64) -> Result<Self> {
        check_grid(n, spacing)?;
        if !c.is_finite() {
            return Err(Error::InvalidField("constant must be finite".into()));
        }
        Ok(Self::from_parts(n, spacing, vec![c; n * n], FieldKind::Constant, None))
    }

    /// Wraps explicit row-major values as a `Custom` field.
    pub fn from_values(n: usize, spacing: f64, values: Vec<f64>) -> Result<Self> {
        check_grid(n, spacing)?;
        if values.len() != n * n {
            return Err(Error::InvalidSize(format!(
                "expected {} values, got {}",
                n * n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidField("non-finite field value".into()));
        }
        Ok(Self::from_parts(n, spacing, values, FieldKind::Custom, None))
    }

    /// Builds a `Custom` field from a function of physical coordinates.
    pub fn from_fn(n: usize, spacing: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_grid(n, spacing)?;
        let mut values = Vec::with_capacity(n * n);
        for row in 0..n {
            for col in 0..n {
                values.push(f(col as f64 * spacing, row as f64 * spacing));
            }
        }
        Self::from_values(n, spacing, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Physical side length `(n − 1)·spacing` spanned by the vertices.
    pub fn extent(&self) -> f64 {
        (self.n - 1) as f64 * self.spacing
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.n + col
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n + col]
    }

    pub fn position(&self, v: usize) -> Point {
        Point::new((v % self.n) as f64 * self.spacing, (v / self.n) as f64 * self.spacing)
    }

    /// Pointwise shift by `c`. Constant fields stay constant.
    pub fn add_constant(&self, c: f64) -> FieldGrid {
        let kind = match self.kind {
            FieldKind::Constant => FieldKind::Constant,
            _ => FieldKind::Custom,
        };
        let values = self.values.iter().map(|v| v + c).collect();
        Self::from_parts(self.n, self.spacing, values, kind, self.seed)
    }

    /// Pointwise multiplication by `factor`; every kind invariant survives scaling.
    pub fn scaled(&self, factor: f64) -> FieldGrid {
        let values = self.values.iter().map(|v| v * factor).collect();
        Self::from_parts(self.n, self.spacing, values, self.kind, self.seed)
    }

    /// Pointwise sum with a smooth compactly supported bump.
    pub fn add_bump(&self, bump: &BumpSpec) -> FieldGrid {
        let mut values = self.values.clone();
        for row in 0..self.n {
            for col in 0..self.n {
                let p = Point::new(col as f64 * self.spacing, row as f64 * self.spacing);
                let b = bump.value_at(&p);
                if b != 0.0 {
                    values[row * self.n + col] += b;
                }
            }
        }
        Self::from_parts(self.n, self.spacing, values, FieldKind::Custom, self.seed)
    }

    /// Pointwise sum of two fields on the same lattice.
    pub fn add(&self, other: &FieldGrid) -> Result<FieldGrid> {
        if self.n != other.n || self.spacing != other.spacing {
            return Err(Error::InvalidArgument("fields live on different lattices".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.n, self.spacing, values, FieldKind::Custom, None))
    }

    /// Square sub-block of side `size` with top-left vertex `(row0, col0)`.
    pub fn sub_grid(&self, row0: usize, col0: usize, size: usize) -> Result<FieldGrid> {
        if size == 0 || row0 + size > self.n || col0 + size > self.n {
            return Err(Error::OutOfBounds(format!(
                "sub-grid {size}x{size} at ({row0},{col0}) exceeds {n}x{n}",
                n = self.n
            )));
        }
        let mut values = Vec::with_capacity(size * size);
        for row in row0..row0 + size {
            values.extend_from_slice(&self.values[row * self.n + col0..row * self.n + col0 + size]);
        }
        let kind = match self.kind {
            FieldKind::Constant => FieldKind::Constant,
            _ => FieldKind::Custom,
        };
        Ok(Self::from_parts(size, self.spacing, values, kind, self.seed))
    }

    /// Bilinear interpolation at a physical point inside the lattice.
    pub fn interpolate(&self, p: &Point) -> Option<f64> {
        let fx = p.x / self.spacing;
        let fy = p.y / self.spacing;
        let max = (self.n - 1) as f64;
        let tol = 1e-9;
        if fx < -tol || fy < -tol || fx > max + tol || fy > max + tol {
            return None;
        }
        let fx = fx.clamp(0.0, max);
        let fy = fy.clamp(0.0, max);
        let c0 = (fx.floor() as usize).min(self.n.saturating_sub(2));
        let r0 = (fy.floor() as usize).min(self.n.saturating_sub(2));
        if self.n == 1 {
            return Some(self.values[0]);
        }
        let tx = fx - c0 as f64;
        let ty = fy - r0 as f64;
        let v00 = self.get(r0, c0);
        let v01 = self.get(r0, c0 + 1);
        let v10 = self.get(r0 + 1, c0);
        let v11 = self.get(r0 + 1, c0 + 1);
        Some(
            (1.0 - ty) * ((1.0 - tx) * v00 + tx * v01) + ty * ((1.0 - tx) * v10 + tx * v11),
        )
    }
}

/// Free-function form of [`FieldGrid::add_constant`].
pub fn add_constant(field: &FieldGrid, c: f64) -> FieldGrid {
    field.add_constant(c)
}

/// Free-function form of [`FieldGrid::add_bump`].
pub fn add_bump(field: &FieldGrid, bump: &BumpSpec) -> FieldGrid {
    field.add_bump(bump)
}

/// A field convolved with the heat kernel `p_{ε²/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MollifiedField {
    base: FieldGrid,
    epsilon: f64,
    values: Vec<f64>,
}

impl MollifiedField {
    pub(crate) fn from_parts(base: FieldGrid, epsilon: f64, values: Vec<f64>) -> Self {
        Self { base, epsilon, values }
    }

    pub fn base(&self) -> &FieldGrid {
        &self.base
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn spacing(&self) -> f64 {
        self.base.spacing
    }

    /// The mollified values as a standalone `Custom` field.
    pub fn to_field(&self) -> FieldGrid {
        let kind = match self.base.kind {
            FieldKind::Constant => FieldKind::Constant,
            _ => FieldKind::Custom,
        };
        FieldGrid::from_parts(self.base.n, self.base.spacing, self.values.clone(), kind, self.base.seed)
    }

    /// Shifts base and mollified values together; mollification commutes with constants.
    pub fn add_constant(&self, c: f64) -> MollifiedField {
        MollifiedField {
            base: self.base.add_constant(c),
            epsilon: self.epsilon,
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// Restriction to a square sub-block, keeping the mollification scale.
    pub fn sub_grid(&self, row0: usize, col0: usize, size: usize) -> Result<MollifiedField> {
        let base = self.base.sub_grid(row0, col0, size)?;
        let tmp = FieldGrid::from_parts(
            self.base.n,
            self.base.spacing,
            self.values.clone(),
            FieldKind::Custom,
            None,
        );
        let values = tmp.sub_grid(row0, col0, size)?.values;
        Ok(MollifiedField { base, epsilon: self.epsilon, values })
    }
}

impl MollifiedField {
    /// Same base and scale with explicitly supplied smoothed values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<MollifiedField> {
        if values.len() != self.values.len() {
            return Err(Error::InvalidSize(format!(
                "expected {} values, got {}",
                self.values.len(),
                values.len()
            )));
        }
        Ok(MollifiedField { base: self.base.clone(), epsilon: self.epsilon, values })
    }
}

/// A reproducible family of random (or stub) fields indexed by seed.
pub trait FieldSource: Sync {
    fn sample(&self, n: usize, spacing: f64, seed: u64) -> Result<FieldGrid>;
}

/// Zero-boundary DGFF multiplied by a fixed factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DgffSource {
    pub scale: f64,
}

impl DgffSource {
    /// Graph-Laplacian normalization (unit factor).
    pub fn lattice() -> Self {
        Self { scale: 1.0 }
    }

    /// Normalized so that `Var h_ε(z) ≈ log(1/ε)`.
    pub fn continuum() -> Self {
        Self { scale: CONTINUUM_GFF_SCALE }
    }
}

impl FieldSource for DgffSource {
    fn sample(&self, n: usize, spacing: f64, seed: u64) -> Result<FieldGrid> {
        let f = sample_discrete_gff(n, spacing, seed)?;
        Ok(if self.scale == 1.0 { f } else { f.scaled(self.scale) })
    }
}

/// Deterministic constant field, ignoring the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantSource(pub f64);

impl FieldSource for ConstantSource {
    fn sample(&self, n: usize, spacing: f64, _seed: u64) -> Result<FieldGrid> {
        FieldGrid::constant(n, spacing, self.0)
    }
}
