//! State and right-hand side of the vorticity / vertical-Fourier system.
//!
//! The evolved unknowns are the horizontal vorticity `ω`, the vertical
//! velocity `w` (independent of `z`), and the vertical Fourier modes `ρ_k`,
//! `k = 0..K`, of the density fluctuation. `ρ_0` is the vertical average
//! `⟨ρ⟩_z`; it is stored once and evolved by its own transport equation.
//!
//! ```text
//! ∂t ω   + u·∇ω   = 0
//! ∂t w   + u·∇w   = −ρ_0 / Fr
//! ∂t ρ_0 + u·∇ρ_0 =  w / Fr
//! ∂t ρ_k + u·∇ρ_k + i(2πk/L) w ρ_k = 0,   k = 1..K
//! ```
//!
//! The vertical coupling uses the physical wavenumber `2πk/L` obtained from
//! the chain rule on `e^{2πikz/L}`; with `L = 2π` it reduces to `ik`.
//! Optional diffusion adds `Δ_h/Re` to `ω`, `w` and `(Δ_h − (2πk/L)²)/(Re·Pr)`
//! to each `ρ_k`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{Grid, GridSpec, SpectralField2D, VectorField2D, VerticalModeStack};

/// Tolerance on the Hermitian defect of fields that must be real.
const REALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viscosity {
    pub reynolds: f64,
    pub prandtl: f64,
}

/// Model constants. The box period lives on [`GridSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub froude: f64,
    /// `None` for the inviscid system.
    pub viscosity: Option<Viscosity>,
}

impl PhysicalParams {
    pub fn inviscid(froude: f64) -> Result<Self> {
        let p = PhysicalParams {
            froude,
            viscosity: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn viscous(froude: f64, reynolds: f64, prandtl: f64) -> Result<Self> {
        let p = PhysicalParams {
            froude,
            viscosity: Some(Viscosity { reynolds, prandtl }),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn is_viscous(&self) -> bool {
        self.viscosity.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.froude.is_finite() && self.froude > 0.0) {
            return Err(Error::Config(format!(
                "Fr must be positive, got {}",
                self.froude
            )));
        }
        if let Some(v) = self.viscosity {
            if !(v.reynolds.is_finite() && v.reynolds > 0.0) {
                return Err(Error::Config(format!(
                    "Re must be positive, got {}",
                    v.reynolds
                )));
            }
            if !(v.prandtl.is_finite() && v.prandtl > 0.0) {
                return Err(Error::Config(format!(
                    "Pr must be positive, got {}",
                    v.prandtl
                )));
            }
        }
        Ok(())
    }
}

/// Full dynamical state at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelState {
    pub t: f64,
    pub omega: SpectralField2D,
    pub w: SpectralField2D,
    pub rho: VerticalModeStack,
}

impl ModelState {
    pub fn zeros(spec: &GridSpec) -> Self {
        ModelState {
            t: 0.0,
            omega: SpectralField2D::zeros(spec.nx, spec.ny),
            w: SpectralField2D::zeros(spec.nx, spec.ny),
            rho: VerticalModeStack::zeros(spec.nx, spec.ny, spec.kz_max),
        }
    }

    /// `ρ_0`, the vertical average of the density.
    pub fn rho0(&self) -> &SpectralField2D {
        self.rho.mode(0)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.omega.is_finite() && self.w.is_finite() && self.rho.is_finite()
    }

    /// Checks shapes against `spec`, finiteness, zero-mean vorticity and the
    /// Hermitian symmetry of the real fields.
    pub fn validate(&self, spec: &GridSpec) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidState(msg));
        for (name, f) in [("omega", &self.omega), ("w", &self.w)] {
            if f.dims() != (spec.nx, spec.ny) {
                return bad(format!("{name} has shape {:?}", f.dims()));
            }
        }
        if self.rho.kz_max() != spec.kz_max {
            return bad(format!(
                "density stack has kz_max = {}, grid expects {}",
                self.rho.kz_max(),
                spec.kz_max
            ));
        }
        if self
            .rho
            .modes()
            .iter()
            .any(|m| m.dims() != (spec.nx, spec.ny))
        {
            return bad("density mode with wrong shape".into());
        }
        if !self.is_finite() {
            return bad(format!("non-finite value at t = {}", self.t));
        }
        let scale = |f: &SpectralField2D| f.max_abs_coeff().max(1.0);
        if self.omega.mean().norm() > crate::spectral::MEAN_TOLERANCE {
            return bad(format!("vorticity mean {} is not zero", self.omega.mean()));
        }
        for (name, f) in [
            ("omega", &self.omega),
            ("w", &self.w),
            ("rho_0", self.rho0()),
        ] {
            if f.hermitian_defect() > REALITY_TOLERANCE * scale(f) {
                return bad(format!("{name} is not a real field"));
            }
        }
        Ok(())
    }

    /// `self += factor · rate`, used by the Runge–Kutta stages.
    pub fn axpy(&mut self, factor: f64, rate: &StateTendency) {
        self.omega.axpy(factor, &rate.omega);
        self.w.axpy(factor, &rate.w);
        self.rho.axpy(factor, &rate.rho);
    }
}

/// Time derivatives of every evolved field.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTendency {
    pub omega: SpectralField2D,
    pub w: SpectralField2D,
    pub rho: VerticalModeStack,
}

impl StateTendency {
    pub fn is_finite(&self) -> bool {
        self.omega.is_finite() && self.w.is_finite() && self.rho.is_finite()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut rho = self.rho.clone();
        for m in rho.modes_mut() {
            m.scale(factor);
        }
        StateTendency {
            omega: self.omega.scaled(factor),
            w: self.w.scaled(factor),
            rho,
        }
    }
}

/// Grid plus parameters: everything needed to evaluate the right-hand side.
#[derive(Debug, Clone)]
pub struct Model {
    grid: Grid,
    params: PhysicalParams,
}

impl Model {
    pub fn new(grid: Grid, params: PhysicalParams) -> Result<Self> {
        params.validate()?;
        Ok(Model { grid, params })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    /// Horizontal velocity reconstructed from `ω` by the Biot–Savart law.
    pub fn velocity(&self, state: &ModelState) -> Result<VectorField2D> {
        self.grid.biot_savart(&state.omega)
    }

    /// Right-hand side of the system, with dealiased convective products.
    pub fn tendency(&self, state: &ModelState) -> Result<StateTendency> {
        state.validate(self.grid.spec())?;
        let g = &self.grid;
        let inv_fr = 1.0 / self.params.froude;

        let vel = self.velocity(state)?;
        let u = real_part(g.truncated_physical(&vel.u)?);
        let v = real_part(g.truncated_physical(&vel.v)?);
        let w_phys = real_part(g.truncated_physical(&state.w)?);

        let mut omega_dot = self.advection_real(&state.omega, &u, &v)?;
        omega_dot.scale(-1.0);

        let mut w_dot = self.advection_real(&state.w, &u, &v)?;
        w_dot.scale(-1.0);
        w_dot.axpy(-inv_fr, state.rho0());

        let mut rho0_dot = self.advection_real(state.rho0(), &u, &v)?;
        rho0_dot.scale(-1.0);
        rho0_dot.axpy(inv_fr, &state.w);

        let k0 = g.spec().k0();
        // each vertical mode writes only its own slot
        let upper: Vec<SpectralField2D> = state.rho.modes()[1..]
            .par_iter()
            .enumerate()
            .map(|(i, rho_k)| {
                let kz = k0 * (i + 1) as f64;
                self.vertical_mode_rate(rho_k, kz, &u, &v, &w_phys)
            })
            .collect::<Result<_>>()?;

        if let Some(visc) = self.params.viscosity {
            let nu = 1.0 / visc.reynolds;
            let kappa = nu / visc.prandtl;
            omega_dot.axpy(nu, &g.laplacian_h(&state.omega)?);
            w_dot.axpy(nu, &g.laplacian_h(&state.w)?);
            rho0_dot.axpy(kappa, &g.laplacian_h(state.rho0())?);
        }
        let mut modes = Vec::with_capacity(upper.len() + 1);
        modes.push(rho0_dot);
        modes.extend(upper);
        if let Some(visc) = self.params.viscosity {
            let kappa = 1.0 / (visc.reynolds * visc.prandtl);
            for (k, m) in modes.iter_mut().enumerate().skip(1) {
                let kz2 = (k0 * k as f64).powi(2);
                let mut diff = state.rho.mode(k).clone();
                g.apply_symbol(&mut diff, |k2| -(k2 + kz2));
                m.axpy(kappa, &diff);
            }
        }

        let rate = StateTendency {
            omega: omega_dot,
            w: w_dot,
            rho: VerticalModeStack::from_modes(modes)?,
        };
        if !rate.is_finite() {
            return Err(Error::Blowup {
                t: state.t,
                context: "non-finite tendency".into(),
            });
        }
        Ok(rate)
    }

    /// Dealiased `u·∇f` for a real field, with its mean set to zero (the
    /// exact value for divergence-free `u`).
    fn advection_real(&self, f: &SpectralField2D, u: &[f64], v: &[f64]) -> Result<SpectralField2D> {
        let g = &self.grid;
        let grad = g.gradient_h(f)?;
        let fx = real_part(g.truncated_physical(&grad.u)?);
        let fy = real_part(g.truncated_physical(&grad.v)?);
        let prod = (0..fx.len())
            .map(|p| Complex64::new(u[p] * fx[p] + v[p] * fy[p], 0.0))
            .collect();
        let mut out = g.forward_complex(prod);
        g.truncate_in_place(&mut out);
        out.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
        Ok(out)
    }

    /// `−(u·∇ρ_k + i kz w ρ_k)`, both products dealiased.
    fn vertical_mode_rate(
        &self,
        rho_k: &SpectralField2D,
        kz: f64,
        u: &[f64],
        v: &[f64],
        w: &[f64],
    ) -> Result<SpectralField2D> {
        let g = &self.grid;
        let grad = g.gradient_h(rho_k)?;
        let fx = g.truncated_physical(&grad.u)?;
        let fy = g.truncated_physical(&grad.v)?;
        let r = g.truncated_physical(rho_k)?;
        let prod = (0..fx.len())
            .map(|p| -(fx[p] * u[p] + fy[p] * v[p] + Complex64::new(0.0, kz * w[p]) * r[p]))
            .collect();
        let mut out = g.forward_complex(prod);
        g.truncate_in_place(&mut out);
        Ok(out)
    }
}

fn real_part(buf: Vec<Complex64>) -> Vec<f64> {
    buf.into_iter().map(|c| c.re).collect()
}
