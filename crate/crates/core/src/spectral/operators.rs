use num_complex::Complex64;

use super::{in_dealias_band, wavenumber, Grid, SpectralField2D, VectorField2D};
use crate::error::{Error, Result};

/// Largest admissible `|c(0,0)|` for operators that need a mean-zero source.
pub const MEAN_TOLERANCE: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

impl Grid {
    /// `(∂x f, ∂y f)`, with every Nyquist-row/column mode zeroed.
    pub fn gradient_h(&self, f: &SpectralField2D) -> Result<VectorField2D> {
        self.check_spectral(f)?;
        let (nx, ny) = (self.nx(), self.ny());
        let k0 = self.spec().k0();
        let mut u = f.clone();
        let mut v = f.clone();
        for (idx, (du, dv)) in u
            .coeffs_mut()
            .iter_mut()
            .zip(v.coeffs_mut().iter_mut())
            .enumerate()
        {
            let (m, n) = (wavenumber(idx / ny, nx), wavenumber(idx % ny, ny));
            if is_nyquist(m, n, nx, ny) {
                *du = Complex64::new(0.0, 0.0);
                *dv = Complex64::new(0.0, 0.0);
            } else {
                *du *= I * (k0 * m as f64);
                *dv *= I * (k0 * n as f64);
            }
        }
        Ok(VectorField2D { u, v })
    }

    /// `∂x a + ∂y b`.
    pub fn divergence(&self, field: &VectorField2D) -> Result<SpectralField2D> {
        let du = self.gradient_h(&field.u)?;
        let dv = self.gradient_h(&field.v)?;
        let mut out = du.u;
        out.axpy(1.0, &dv.v);
        Ok(out)
    }

    /// Scalar curl `∂x v − ∂y u`.
    pub fn curl(&self, field: &VectorField2D) -> Result<SpectralField2D> {
        let du = self.gradient_h(&field.u)?;
        let dv = self.gradient_h(&field.v)?;
        let mut out = dv.u;
        out.axpy(-1.0, &du.v);
        Ok(out)
    }

    /// `Δ_h f`, multiplying each mode by `−|k|²` (Nyquist modes kept).
    pub fn laplacian_h(&self, f: &SpectralField2D) -> Result<SpectralField2D> {
        self.check_spectral(f)?;
        let mut out = f.clone();
        self.apply_symbol(&mut out, |k2| -k2);
        Ok(out)
    }

    /// Mean-zero solution of `Δ_h φ = f`.
    pub fn invert_laplacian_h(&self, f: &SpectralField2D) -> Result<SpectralField2D> {
        self.check_spectral(f)?;
        require_mean_zero(f, "invert_laplacian_h")?;
        let mut out = f.clone();
        self.apply_symbol(&mut out, |k2| if k2 == 0.0 { 0.0 } else { -1.0 / k2 });
        Ok(out)
    }

    /// Divergence-free, mean-zero velocity with curl `ω`:
    /// `u_h = ∇⊥ψ = (−∂yψ, ∂xψ)` where `Δ_h ψ = ω`.
    pub fn biot_savart(&self, omega: &SpectralField2D) -> Result<VectorField2D> {
        self.check_spectral(omega)?;
        require_mean_zero(omega, "biot_savart")?;
        let psi = self.invert_laplacian_h(omega)?;
        let grad = self.gradient_h(&psi)?;
        let mut u = grad.v;
        u.scale(-1.0);
        Ok(VectorField2D { u, v: grad.u })
    }

    /// Zeroes every mode outside the 2/3 band.
    pub fn dealias(&self, f: &SpectralField2D) -> Result<SpectralField2D> {
        self.check_spectral(f)?;
        let mut out = f.clone();
        self.truncate_in_place(&mut out);
        Ok(out)
    }

    /// Pseudo-spectral product of `f` and `g` with 2/3-rule truncation of
    /// both inputs and of the result.
    pub fn dealiased_product(
        &self,
        f: &SpectralField2D,
        g: &SpectralField2D,
    ) -> Result<SpectralField2D> {
        let a = self.truncated_physical(f)?;
        let b = self.truncated_physical(g)?;
        let prod = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let mut out = self.forward_complex(prod);
        self.truncate_in_place(&mut out);
        Ok(out)
    }

    pub(crate) fn truncated_physical(&self, f: &SpectralField2D) -> Result<Vec<Complex64>> {
        let t = self.dealias(f)?;
        self.to_physical_complex(&t)
    }

    pub(crate) fn truncate_in_place(&self, f: &mut SpectralField2D) {
        let (nx, ny) = (self.nx(), self.ny());
        for (idx, c) in f.coeffs_mut().iter_mut().enumerate() {
            let (m, n) = (wavenumber(idx / ny, nx), wavenumber(idx % ny, ny));
            if !(in_dealias_band(m, nx) && in_dealias_band(n, ny)) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Multiplies mode `(m,n)` by `symbol(|k|²)`, `|k|² = (2π/L)²(m²+n²)`.
    pub(crate) fn apply_symbol(&self, f: &mut SpectralField2D, symbol: impl Fn(f64) -> f64) {
        let (nx, ny) = (self.nx(), self.ny());
        let k0 = self.spec().k0();
        for (idx, c) in f.coeffs_mut().iter_mut().enumerate() {
            let (m, n) = (wavenumber(idx / ny, nx), wavenumber(idx % ny, ny));
            let k2 = k0 * k0 * ((m * m + n * n) as f64);
            *c *= symbol(k2);
        }
    }
}

#[inline]
pub(crate) fn is_nyquist(m: i64, n: i64, nx: usize, ny: usize) -> bool {
    m == -(nx as i64) / 2 || n == -(ny as i64) / 2
}

pub(crate) fn require_mean_zero(f: &SpectralField2D, op: &str) -> Result<()> {
    let mean = f.mean().norm();
    if mean > MEAN_TOLERANCE {
        return Err(Error::Precondition(format!(
            "{op} needs a mean-zero source, |mean| = {mean:e}"
        )));
    }
    Ok(())
}
