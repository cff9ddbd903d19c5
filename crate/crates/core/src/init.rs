//! Initial-condition generators.
//!
//! Random fields use ChaCha8 seeded through `seed_from_u64`, so a seed gives
//! the same state on every platform. Each random coefficient has modulus
//! `A·(1+|k|)^{−s}` (with `|k|` the integer wavenumber magnitude, vertical
//! index included for `ρ_k`) and a uniform phase; only modes inside the 2/3
//! band are filled and the `(0,0)` mode is left empty.

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::read_checkpoint;
use crate::model::ModelState;
use crate::spectral::{in_dealias_band, wavenumber, Grid, SpectralField2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcKind {
    /// `ω = A cos(2πx/L) cos(2πy/L)`, scalars per [`Scalars`].
    TaylorGreen,
    /// One Fourier mode `(m, n)` in every field.
    SingleMode,
    RandomSpectrum,
    /// `u_h = 0`; `w` and `ρ_0` constant or a single cosine mode.
    OscillatorOnly,
    FromCheckpoint,
}

impl IcKind {
    pub fn name(self) -> &'static str {
        match self {
            IcKind::TaylorGreen => "taylor_green",
            IcKind::SingleMode => "single_mode",
            IcKind::RandomSpectrum => "random_spectrum",
            IcKind::OscillatorOnly => "oscillator_only",
            IcKind::FromCheckpoint => "from_checkpoint",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            IcKind::TaylorGreen,
            IcKind::SingleMode,
            IcKind::RandomSpectrum,
            IcKind::OscillatorOnly,
            IcKind::FromCheckpoint,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// Scalar fields accompanying the Taylor–Green vorticity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scalars {
    /// Random `w` and `ρ_k` for every `k`.
    Random,
    None,
}

impl Scalars {
    pub fn name(self) -> &'static str {
        match self {
            Scalars::Random => "random_spectrum",
            Scalars::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "random_spectrum" => Some(Scalars::Random),
            "none" => Some(Scalars::None),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcSpec {
    pub kind: IcKind,
    pub amplitude: f64,
    /// Spectral decay exponent `s` of random fields.
    pub slope: f64,
    pub seed: u64,
    pub scalars: Scalars,
    pub scalar_amplitude: f64,
    /// `(m, n)` for `single_mode` and `oscillator_only`.
    pub mode: (i64, i64),
    /// Amplitude of `ρ_0` in `oscillator_only`.
    pub rho_amplitude: f64,
    /// Added to the `(0,0)` mode of `w` and `ρ_0` after generation.
    pub mean_w: f64,
    pub mean_rho0: f64,
    pub checkpoint: Option<PathBuf>,
}

impl IcSpec {
    pub fn new(kind: IcKind) -> Self {
        IcSpec {
            kind,
            amplitude: 1.0,
            slope: 4.0,
            seed: 0,
            scalars: Scalars::Random,
            scalar_amplitude: 1.0,
            mode: match kind {
                IcKind::OscillatorOnly => (0, 0),
                _ => (1, 0),
            },
            rho_amplitude: 0.0,
            mean_w: 0.0,
            mean_rho0: 0.0,
            checkpoint: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("ic.amplitude", self.amplitude),
            ("ic.scalar_amplitude", self.scalar_amplitude),
            ("ic.rho_amplitude", self.rho_amplitude),
            ("ic.mean_w", self.mean_w),
            ("ic.mean_rho0", self.mean_rho0),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        if !(self.slope.is_finite() && self.slope >= 0.0) {
            return Err(Error::Config(format!(
                "ic.slope must be non-negative, got {}",
                self.slope
            )));
        }
        if self.kind == IcKind::SingleMode && self.mode == (0, 0) {
            return Err(Error::Config("single_mode needs a nonzero mode".into()));
        }
        if self.kind == IcKind::FromCheckpoint && self.checkpoint.is_none() {
            return Err(Error::Config("from_checkpoint needs ic.path".into()));
        }
        Ok(())
    }
}

/// Builds the state at `t = 0` (or the stored time for checkpoints).
pub fn build_initial_state(spec: &IcSpec, grid: &Grid) -> Result<ModelState> {
    spec.validate()?;
    let gs = grid.spec();
    let mut state = ModelState::zeros(gs);
    let a = spec.amplitude;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        IcKind::TaylorGreen => {
            for (m, n) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                state.omega.set(m, n, Complex64::new(0.25 * a, 0.0));
            }
            if spec.scalars == Scalars::Random {
                fill_random_scalars(
                    &mut state,
                    grid,
                    &mut rng,
                    spec.scalar_amplitude,
                    spec.slope,
                );
            }
        }
        IcKind::RandomSpectrum => {
            state.omega = random_real_field(grid, &mut rng, a, spec.slope);
            fill_random_scalars(&mut state, grid, &mut rng, a, spec.slope);
        }
        IcKind::SingleMode => {
            let (m, n) = spec.mode;
            check_mode(grid, m, n)?;
            let half = Complex64::new(0.5 * a, 0.0);
            set_pair(&mut state.omega, m, n, half);
            set_pair(&mut state.w, m, n, Complex64::new(0.0, -0.5 * a));
            set_pair(state.rho.mode_mut(0), m, n, half);
            for k in 1..=gs.kz_max {
                state.rho.mode_mut(k).set(m, n, half);
            }
        }
        IcKind::OscillatorOnly => {
            let (m, n) = spec.mode;
            check_mode(grid, m, n)?;
            if (m, n) == (0, 0) {
                state.w.set(0, 0, Complex64::new(a, 0.0));
                state
                    .rho
                    .mode_mut(0)
                    .set(0, 0, Complex64::new(spec.rho_amplitude, 0.0));
            } else {
                set_pair(&mut state.w, m, n, Complex64::new(0.5 * a, 0.0));
                set_pair(
                    state.rho.mode_mut(0),
                    m,
                    n,
                    Complex64::new(0.5 * spec.rho_amplitude, 0.0),
                );
            }
        }
        IcKind::FromCheckpoint => {
            let path = spec.checkpoint.as_ref().expect("validated");
            let ck = read_checkpoint(path)?;
            let h = &ck.header;
            if (h.nx, h.ny, h.kz_max) != (gs.nx, gs.ny, gs.kz_max) || h.length != gs.length {
                return Err(Error::Config(format!(
                    "checkpoint {} is for a {}x{} grid with K = {} and L = {}",
                    path.display(),
                    h.nx,
                    h.ny,
                    h.kz_max,
                    h.length
                )));
            }
            ck.state.validate(gs)?;
            return Ok(ck.state);
        }
    }
    state.omega.set(0, 0, Complex64::new(0.0, 0.0));
    add_mean(&mut state.w, spec.mean_w);
    add_mean(state.rho.mode_mut(0), spec.mean_rho0);
    state.validate(gs)?;
    Ok(state)
}

/// Seeded random perturbation of every evolved field with overall factor
/// `epsilon`; `ρ_0` and `ω` are mean-zero.
pub fn random_perturbation(grid: &Grid, seed: u64, epsilon: f64, slope: f64) -> Result<ModelState> {
    if !epsilon.is_finite() {
        return Err(Error::Config(format!(
            "perturbation must be finite, got {epsilon}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = ModelState::zeros(grid.spec());
    state.omega = random_real_field(grid, &mut rng, epsilon, slope);
    fill_random_scalars(&mut state, grid, &mut rng, epsilon, slope);
    Ok(state)
}

fn fill_random_scalars(state: &mut ModelState, grid: &Grid, rng: &mut ChaCha8Rng, a: f64, s: f64) {
    state.w = random_real_field(grid, rng, a, s);
    *state.rho.mode_mut(0) = random_real_field(grid, rng, a, s);
    for k in 1..=grid.spec().kz_max {
        *state.rho.mode_mut(k) = random_complex_field(grid, rng, a, s, k);
    }
}

fn amplitude(a: f64, s: f64, m: i64, n: i64, k: usize) -> f64 {
    let mag = ((m * m + n * n) as f64 + (k * k) as f64).sqrt();
    a * (1.0 + mag).powf(-s)
}

/// Hermitian field: one draw per mode pair, mirrored as the conjugate.
fn random_real_field(grid: &Grid, rng: &mut ChaCha8Rng, a: f64, s: f64) -> SpectralField2D {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut f = grid.zeros();
    for i in 0..nx {
        for j in 0..ny {
            let (m, n) = (wavenumber(i, nx), wavenumber(j, ny));
            let canonical = m > 0 || (m == 0 && n > 0);
            if !canonical || !in_dealias_band(m, nx) || !in_dealias_band(n, ny) {
                continue;
            }
            let phase = rng.gen_range(0.0..2.0 * PI);
            set_pair(
                &mut f,
                m,
                n,
                Complex64::from_polar(amplitude(a, s, m, n, 0), phase),
            );
        }
    }
    f
}

fn random_complex_field(
    grid: &Grid,
    rng: &mut ChaCha8Rng,
    a: f64,
    s: f64,
    k: usize,
) -> SpectralField2D {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut f = grid.zeros();
    for i in 0..nx {
        for j in 0..ny {
            let (m, n) = (wavenumber(i, nx), wavenumber(j, ny));
            if (m, n) == (0, 0) || !in_dealias_band(m, nx) || !in_dealias_band(n, ny) {
                continue;
            }
            let phase = rng.gen_range(0.0..2.0 * PI);
            f.set(m, n, Complex64::from_polar(amplitude(a, s, m, n, k), phase));
        }
    }
    f
}

/// Sets `c(m,n) = c` and `c(−m,−n) = conj(c)`.
fn set_pair(f: &mut SpectralField2D, m: i64, n: i64, c: Complex64) {
    f.set(m, n, c);
    f.set(-m, -n, c.conj());
}

fn add_mean(f: &mut SpectralField2D, mean: f64) {
    let c = f.mean();
    f.set(0, 0, c + mean);
}

fn check_mode(grid: &Grid, m: i64, n: i64) -> Result<()> {
    if !(in_dealias_band(m, grid.nx()) && in_dealias_band(n, grid.ny())) {
        return Err(Error::Config(format!(
            "mode ({m}, {n}) lies outside the dealiased band"
        )));
    }
    Ok(())
}
