use std::f64::consts::PI;

use num_complex::Complex64;

use super::operators::MEAN_TOLERANCE;
use super::{wavenumber, Grid, RealField2D, SpectralField2D, VerticalModeStack};
use crate::error::{Error, Result};

impl Grid {
    /// Vertical average `⟨ρ⟩_z`, which is exactly the `k = 0` mode.
    pub fn z_average(&self, rho: &VerticalModeStack) -> Result<SpectralField2D> {
        let rho0 = rho.mode(0);
        self.check_spectral(rho0)?;
        Ok(rho0.clone())
    }

    /// `ρ(·, ·, z) = ρ_0 + Σ_{k≥1} 2·Re(ρ_k e^{2πikz/L})` on the horizontal
    /// collocation grid.
    pub fn reconstruct_vertical(&self, rho: &VerticalModeStack, z: f64) -> Result<RealField2D> {
        let l = self.length();
        if !(z.is_finite() && (0.0..l).contains(&z)) {
            return Err(Error::Domain(format!("z = {z} outside [0, {l})")));
        }
        let physical = self.vertical_modes_physical(rho)?;
        Ok(self.combine_level(&physical, z))
    }

    /// Reconstructions at the `nz` equispaced levels `z_l = lL/nz`.
    pub fn reconstruct_levels(&self, rho: &VerticalModeStack) -> Result<Vec<RealField2D>> {
        let physical = self.vertical_modes_physical(rho)?;
        let nz = self.spec().nz;
        Ok((0..nz)
            .map(|l| self.combine_level(&physical, l as f64 * self.length() / nz as f64))
            .collect())
    }

    /// `‖∇ξ‖²_{L²(T³)}` for `ξ = (−Δ)⁻¹ρ`, i.e. `L³ Σ |ρ̂(m,n,k)|² / |K|²`
    /// over `k = −K..K` with `ρ_{−k} = conj(ρ_k)`.
    pub fn invert_laplacian_3d_gradient(&self, rho: &VerticalModeStack) -> Result<f64> {
        for mode in rho.modes() {
            self.check_spectral(mode)?;
        }
        let mean = rho.mode(0).mean().norm();
        if mean > MEAN_TOLERANCE {
            return Err(Error::Precondition(format!(
                "3D inverse Laplacian needs a mean-zero density, |mean| = {mean:e}"
            )));
        }
        let (nx, ny) = (self.nx(), self.ny());
        let k0 = self.spec().k0();
        let mut sum = 0.0;
        for (k, mode) in rho.modes().iter().enumerate() {
            // the conjugate partner at −k contributes the same amount
            let weight = if k == 0 { 1.0 } else { 2.0 };
            let kz2 = (k * k) as f64;
            let mut partial = 0.0;
            for (idx, c) in mode.coeffs().iter().enumerate() {
                let (m, n) = (wavenumber(idx / ny, nx), wavenumber(idx % ny, ny));
                let kk = (m * m + n * n) as f64 + kz2;
                if kk > 0.0 {
                    partial += c.norm_sqr() / (k0 * k0 * kk);
                }
            }
            sum += weight * partial;
        }
        Ok(self.length().powi(3) * sum)
    }

    fn vertical_modes_physical(&self, rho: &VerticalModeStack) -> Result<Vec<Vec<Complex64>>> {
        rho.modes()
            .iter()
            .map(|m| self.to_physical_complex(m))
            .collect()
    }

    fn combine_level(&self, physical: &[Vec<Complex64>], z: f64) -> RealField2D {
        let kz = 2.0 * PI * z / self.length();
        let phases: Vec<Complex64> = (0..physical.len())
            .map(|k| Complex64::from_polar(1.0, kz * k as f64))
            .collect();
        let values = (0..self.spec().points())
            .map(|p| {
                let mut v = physical[0][p].re;
                for k in 1..physical.len() {
                    v += 2.0 * (physical[k][p] * phases[k]).re;
                }
                v
            })
            .collect();
        RealField2D::from_values(self.nx(), self.ny(), values).expect("grid-sized buffer")
    }
}
