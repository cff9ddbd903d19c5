//! Horizontal Fourier machinery on the doubly periodic square `[0, L)²`.
//!
//! # Normalization
//!
//! A real-space field on the `nx × ny` collocation grid `x_i = iL/nx`,
//! `y_j = jL/ny` is represented by the amplitudes of its trigonometric
//! interpolant:
//!
//! ```text
//! f(x_i, y_j) = Σ_{m,n} c(m,n) · exp(2πi (m x_i + n y_j) / L)
//! ```
//!
//! with `m ∈ [−nx/2, nx/2)` and `n ∈ [−ny/2, ny/2)`. The forward transform
//! therefore carries the full `1/(nx·ny)` factor and the inverse carries
//! none. With this choice a constant field `c` has `c(0,0) = c`,
//! `cos(2πx/L)` has `c(±1,0) = 1/2`, and the discrete Parseval identity reads
//! `mean_ij |f_ij|² = Σ_mn |c(m,n)|²`. Integrals over the box follow by
//! multiplying by `L²`.
//!
//! Coefficients are stored in FFT order: row index `i` (x wavenumber) runs
//! over `0, 1, …, nx/2−1, −nx/2, …, −1`, column index `j` likewise in `y`,
//! flattened row-major as `i·ny + j`.
//!
//! Odd derivatives zero every mode with `m = −nx/2` or `n = −ny/2`; even
//! operators (the Laplacian and its inverse) keep them. Quadratic products
//! are dealiased by the 2/3 rule: a mode survives only if `3|m| < nx` and
//! `3|n| < ny`. The strict inequality matters only when the axis length is a
//! multiple of 3; there the edge mode `|m| = nx/3` would otherwise receive the
//! alias of `2nx/3` from a product of two retained modes.

mod field;
mod grid;
mod operators;
mod vertical;

pub use field::{RealField2D, SpectralField2D, VectorField2D, VerticalModeStack};
pub use grid::Grid;
pub use operators::MEAN_TOLERANCE;

use crate::error::{Error, Result};

/// Discretization of the periodic box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    /// Box period, identical in all three directions.
    pub length: f64,
    /// Highest retained vertical wavenumber `K`.
    pub kz_max: usize,
    /// Vertical collocation levels, used only to reconstruct `ρ(x, y, z)`.
    pub nz: usize,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, length: f64, kz_max: usize, nz: usize) -> Result<Self> {
        let spec = GridSpec {
            nx,
            ny,
            length,
            kz_max,
            nz,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Default number of vertical levels for a given truncation.
    pub fn default_nz(kz_max: usize) -> usize {
        4 * kz_max + 4
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("nx", self.nx), ("ny", self.ny)] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::Config(format!(
                    "{name} must be even and at least 8, got {n}"
                )));
            }
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::Config(format!(
                "L must be positive and finite, got {}",
                self.length
            )));
        }
        if self.nz < 2 * self.kz_max + 1 {
            return Err(Error::Config(format!(
                "nz = {} cannot resolve kz_max = {} (need nz >= {})",
                self.nz,
                self.kz_max,
                2 * self.kz_max + 1
            )));
        }
        Ok(())
    }

    /// Smallest horizontal grid spacing.
    pub fn min_spacing(&self) -> f64 {
        self.length / self.nx.max(self.ny) as f64
    }

    /// `2π/L`, the fundamental wavenumber.
    pub fn k0(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length
    }

    pub fn points(&self) -> usize {
        self.nx * self.ny
    }
}

/// Signed wavenumber for FFT-order index `i` on an axis of `n` points.
#[inline]
pub fn wavenumber(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT-order index of signed wavenumber `m`; `m` is taken modulo `n`.
#[inline]
pub fn index_of(m: i64, n: usize) -> usize {
    m.rem_euclid(n as i64) as usize
}

/// True if mode `m` survives the 2/3 truncation on an axis of `n` points.
#[inline]
pub fn in_dealias_band(m: i64, n: usize) -> bool {
    3 * (m.unsigned_abs() as usize) < n
}
