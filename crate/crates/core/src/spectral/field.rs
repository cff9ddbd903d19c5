use num_complex::Complex64;

use super::{index_of, wavenumber};
use crate::error::{Error, Result};

/// Real scalar sampled on the collocation grid, row-major `i·ny + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField2D {
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl RealField2D {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        RealField2D {
            nx,
            ny,
            values: vec![0.0; nx * ny],
        }
    }

    pub fn from_values(nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != nx * ny {
            return Err(Error::DimensionMismatch {
                expected: format!("{} values ({nx}x{ny})", nx * ny),
                got: format!("{} values", values.len()),
            });
        }
        Ok(RealField2D { nx, ny, values })
    }

    /// Samples `f(x, y)` at the collocation points of a box of period `length`.
    pub fn from_fn(nx: usize, ny: usize, length: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            let x = i as f64 * length / nx as f64;
            for j in 0..ny {
                let y = j as f64 * length / ny as f64;
                values.push(f(x, y));
            }
        }
        RealField2D { nx, ny, values }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ny + j]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Fourier amplitudes of a doubly periodic scalar, see the module docs for
/// the ordering and normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField2D {
    nx: usize,
    ny: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralField2D {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        SpectralField2D {
            nx,
            ny,
            coeffs: vec![Complex64::new(0.0, 0.0); nx * ny],
        }
    }

    pub fn from_coeffs(nx: usize, ny: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != nx * ny {
            return Err(Error::DimensionMismatch {
                expected: format!("{} coefficients ({nx}x{ny})", nx * ny),
                got: format!("{} coefficients", coeffs.len()),
            });
        }
        Ok(SpectralField2D { nx, ny, coeffs })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of signed mode `(m, n)`; wavenumbers wrap modulo the grid.
    pub fn get(&self, m: i64, n: i64) -> Complex64 {
        self.coeffs[index_of(m, self.nx) * self.ny + index_of(n, self.ny)]
    }

    pub fn set(&mut self, m: i64, n: i64, value: Complex64) {
        let idx = index_of(m, self.nx) * self.ny + index_of(n, self.ny);
        self.coeffs[idx] = value;
    }

    /// Horizontal mean, the `(0,0)` amplitude.
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Iterates `((m, n), coefficient)` in storage order.
    pub fn modes(&self) -> impl Iterator<Item = ((i64, i64), Complex64)> + '_ {
        let (nx, ny) = (self.nx, self.ny);
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(idx, c)| ((wavenumber(idx / ny, nx), wavenumber(idx % ny, ny)), *c))
    }

    /// `Σ |c|²`, the mean square of the represented field.
    pub fn mean_square(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Real part of `Σ conj(a)·b`; `L²·inner` is the `L²(T²)` inner product.
    pub fn inner(&self, other: &SpectralField2D) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest deviation from `c(−m,−n) = conj(c(m,n))`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for ((m, n), c) in self.modes() {
            let partner = self.get(-m, -n);
            worst = worst.max((c - partner.conj()).norm());
        }
        worst
    }

    /// Replaces each coefficient by the Hermitian-symmetric average.
    pub fn symmetrize(&mut self) {
        let copy = self.clone();
        for ((m, n), c) in copy.modes() {
            let partner = copy.get(-m, -n);
            self.set(m, n, 0.5 * (c + partner.conj()));
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn scale(&mut self, factor: f64) {
        for c in &mut self.coeffs {
            *c *= factor;
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    /// `self += factor · other`.
    pub fn axpy(&mut self, factor: f64, other: &SpectralField2D) {
        debug_assert_eq!(self.dims(), other.dims());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * factor;
        }
    }

    pub fn sub(&self, other: &SpectralField2D) -> Self {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    pub(crate) fn check_dims(&self, nx: usize, ny: usize) -> Result<()> {
        if self.nx != nx || self.ny != ny {
            return Err(Error::DimensionMismatch {
                expected: format!("{nx}x{ny}"),
                got: format!("{}x{}", self.nx, self.ny),
            });
        }
        Ok(())
    }
}

/// Spectral horizontal vector field `(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2D {
    pub u: SpectralField2D,
    pub v: SpectralField2D,
}

/// Vertical Fourier modes `ρ_0, ρ_1, …, ρ_K` of a 3D density field.
///
/// `ρ(x, y, z) = ρ_0 + Σ_{k=1..K} 2·Re(ρ_k e^{2πikz/L})`, so `ρ_0` is the
/// vertical average and is real; `ρ_{−k} = conj(ρ_k)` is implied.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalModeStack {
    modes: Vec<SpectralField2D>,
}

impl VerticalModeStack {
    pub fn zeros(nx: usize, ny: usize, kz_max: usize) -> Self {
        VerticalModeStack {
            modes: vec![SpectralField2D::zeros(nx, ny); kz_max + 1],
        }
    }

    pub fn from_modes(modes: Vec<SpectralField2D>) -> Result<Self> {
        let first = modes
            .first()
            .ok_or_else(|| Error::Input("a vertical mode stack needs at least rho_0".into()))?;
        let (nx, ny) = first.dims();
        for m in &modes {
            m.check_dims(nx, ny)?;
        }
        Ok(VerticalModeStack { modes })
    }

    /// Highest vertical wavenumber stored.
    pub fn kz_max(&self) -> usize {
        self.modes.len() - 1
    }

    pub fn mode(&self, k: usize) -> &SpectralField2D {
        &self.modes[k]
    }

    pub fn mode_mut(&mut self, k: usize) -> &mut SpectralField2D {
        &mut self.modes[k]
    }

    pub fn modes(&self) -> &[SpectralField2D] {
        &self.modes
    }

    pub fn modes_mut(&mut self) -> &mut [SpectralField2D] {
        &mut self.modes
    }

    pub fn into_modes(self) -> Vec<SpectralField2D> {
        self.modes
    }

    pub fn is_finite(&self) -> bool {
        self.modes.iter().all(SpectralField2D::is_finite)
    }

    pub fn axpy(&mut self, factor: f64, other: &VerticalModeStack) {
        for (a, b) in self.modes.iter_mut().zip(&other.modes) {
            a.axpy(factor, b);
        }
    }

    pub fn sub(&self, other: &VerticalModeStack) -> Self {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }
}
