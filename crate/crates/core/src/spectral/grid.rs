use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{GridSpec, RealField2D, SpectralField2D};
use crate::error::Result;

/// A validated [`GridSpec`] together with its FFT plans.
///
/// Cloning is cheap: the plans are shared.
#[derive(Clone)]
pub struct Grid {
    spec: GridSpec,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("spec", &self.spec).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let mut planner = FftPlanner::new();
        Ok(Grid {
            spec,
            fwd_x: planner.plan_fft_forward(spec.nx),
            inv_x: planner.plan_fft_inverse(spec.nx),
            fwd_y: planner.plan_fft_forward(spec.ny),
            inv_y: planner.plan_fft_inverse(spec.ny),
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn nx(&self) -> usize {
        self.spec.nx
    }

    pub fn ny(&self) -> usize {
        self.spec.ny
    }

    pub fn length(&self) -> f64 {
        self.spec.length
    }

    pub fn zeros(&self) -> SpectralField2D {
        SpectralField2D::zeros(self.spec.nx, self.spec.ny)
    }

    /// Samples `f` at the collocation points.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> RealField2D {
        RealField2D::from_fn(self.spec.nx, self.spec.ny, self.spec.length, f)
    }

    pub fn to_spectral(&self, f: &RealField2D) -> Result<SpectralField2D> {
        self.check_real(f)?;
        let buf = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Ok(self.forward_complex(buf))
    }

    /// Real part of the inverse transform. For Hermitian-symmetric input the
    /// discarded imaginary part is roundoff.
    pub fn to_real(&self, f: &SpectralField2D) -> Result<RealField2D> {
        let buf = self.to_physical_complex(f)?;
        RealField2D::from_values(
            self.spec.nx,
            self.spec.ny,
            buf.into_iter().map(|c| c.re).collect(),
        )
    }

    /// Inverse transform without discarding the imaginary part, for the
    /// genuinely complex vertical modes.
    pub fn to_physical_complex(&self, f: &SpectralField2D) -> Result<Vec<Complex64>> {
        self.check_spectral(f)?;
        let mut buf = f.coeffs().to_vec();
        self.transform(&mut buf, false);
        Ok(buf)
    }

    /// Forward transform of complex samples on the collocation grid.
    pub fn forward_complex(&self, mut buf: Vec<Complex64>) -> SpectralField2D {
        debug_assert_eq!(buf.len(), self.spec.points());
        self.transform(&mut buf, true);
        let norm = 1.0 / self.spec.points() as f64;
        for c in &mut buf {
            *c *= norm;
        }
        SpectralField2D::from_coeffs(self.spec.nx, self.spec.ny, buf)
            .expect("buffer length matches grid")
    }

    fn transform(&self, buf: &mut [Complex64], forward: bool) {
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        let (fx, fy) = if forward {
            (&self.fwd_x, &self.fwd_y)
        } else {
            (&self.inv_x, &self.inv_y)
        };
        // rows are contiguous in y
        let mut scratch = vec![Complex64::new(0.0, 0.0); fy.get_inplace_scratch_len()];
        fy.process_with_scratch(buf, &mut scratch);

        let mut t = vec![Complex64::new(0.0, 0.0); nx * ny];
        transpose(buf, &mut t, nx, ny);
        let mut scratch = vec![Complex64::new(0.0, 0.0); fx.get_inplace_scratch_len()];
        fx.process_with_scratch(&mut t, &mut scratch);
        transpose(&t, buf, ny, nx);
    }

    pub(crate) fn check_spectral(&self, f: &SpectralField2D) -> Result<()> {
        f.check_dims(self.spec.nx, self.spec.ny)
    }

    fn check_real(&self, f: &RealField2D) -> Result<()> {
        let (nx, ny) = f.dims();
        if (nx, ny) != (self.spec.nx, self.spec.ny) {
            return Err(crate::error::Error::DimensionMismatch {
                expected: format!("{}x{}", self.spec.nx, self.spec.ny),
                got: format!("{nx}x{ny}"),
            });
        }
        Ok(())
    }
}

/// `dst[c·rows + r] = src[r·cols + c]`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}
