//! Flat `key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Required keys: `L`, `Fr`, `nx`, `ny`, `kz_max`, `t_end`, `ic.name`.
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `L` | | box period |
//! | `Fr` | | Froude number |
//! | `Re`, `Pr` | unset, `1` | diffusion is enabled when `Re` is present |
//! | `nx`, `ny` | | horizontal grid, even and at least 8 |
//! | `kz_max` | | highest vertical mode `K` |
//! | `nz` | `4K+4` | levels for 3D density norms |
//! | `t_end` | | end time |
//! | `cfl` | `0.5` | |
//! | `dt` | unset | fixed step, overrides `cfl` |
//! | `diag_every` | `10` | steps between records |
//! | `snapshot_every` | unset | steps between checkpoints |
//! | `output_dir` | `output` | |
//! | `ic.name` | | `taylor_green`, `single_mode`, `random_spectrum`, `oscillator_only`, `from_checkpoint` |
//! | `ic.amplitude` | `1` | |
//! | `ic.slope` | `4` | spectral decay of random fields |
//! | `ic.seed` | `0` | |
//! | `ic.scalars` | `random_spectrum` | `w`/`ρ` for Taylor–Green, or `none` |
//! | `ic.scalar_amplitude` | `1` | |
//! | `ic.m`, `ic.n` | `1, 0` (`0, 0` for the oscillator) | mode of single-mode data |
//! | `ic.rho_amplitude` | `0` | `ρ_0` amplitude of the oscillator |
//! | `ic.mean_w`, `ic.mean_rho0` | `0` | added horizontal means |
//! | `ic.path` | | checkpoint to start from |
//! | `tol.*` | see [`Tolerances`] | `equality`, `inequality`, `omega_l4`, `omega_l8`, `omega_linf`, `mean`, `modal_l2`, `modal_l4`, `modal_linf` |
//! | `twin.seed` | `ic.seed + 1` | seed of the twin perturbation |
//! | `convergence.dt` | `4e-3, 2e-3, 1e-3` | decreasing step sizes |

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::diagnostics::Tolerances;
use crate::error::{Error, Result};
use crate::init::{IcKind, IcSpec, Scalars};
use crate::model::{PhysicalParams, Viscosity};
use crate::spectral::GridSpec;
use crate::timestepper::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub grid: GridSpec,
    pub params: PhysicalParams,
    pub run: RunConfig,
    pub ic: IcSpec,
    pub output_dir: PathBuf,
    pub tolerances: Tolerances,
    pub twin_seed: u64,
    pub convergence_dts: Vec<f64>,
}

const KEYS: &[&str] = &[
    "L",
    "Fr",
    "Re",
    "Pr",
    "nx",
    "ny",
    "kz_max",
    "nz",
    "t_end",
    "cfl",
    "dt",
    "diag_every",
    "snapshot_every",
    "output_dir",
    "ic.name",
    "ic.amplitude",
    "ic.slope",
    "ic.seed",
    "ic.scalars",
    "ic.scalar_amplitude",
    "ic.m",
    "ic.n",
    "ic.rho_amplitude",
    "ic.mean_w",
    "ic.mean_rho0",
    "ic.path",
    "tol.equality",
    "tol.inequality",
    "tol.omega_l4",
    "tol.omega_l8",
    "tol.omega_linf",
    "tol.mean",
    "tol.modal_l2",
    "tol.modal_l4",
    "tol.modal_linf",
    "twin.seed",
    "convergence.dt",
];

struct Entries<'a> {
    map: HashMap<&'a str, (usize, &'a str)>,
}

impl<'a> Entries<'a> {
    fn parse(text: &'a str) -> Result<Self> {
        let mut map = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line: Some(line),
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Parse {
                    line: Some(line),
                    message: format!("unknown key `{key}`"),
                });
            }
            if value.is_empty() {
                return Err(Error::Parse {
                    line: Some(line),
                    message: format!("`{key}` has no value"),
                });
            }
            if let Some((first, _)) = map.insert(key, (line, value)) {
                return Err(Error::Parse {
                    line: Some(line),
                    message: format!("`{key}` already set on line {first}"),
                });
            }
        }
        Ok(Entries { map })
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.map.get(key).map(|e| e.0)
    }

    fn raw(&self, key: &str) -> Option<(usize, &'a str)> {
        self.map.get(key).copied()
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|_| Error::Parse {
                line: Some(line),
                message: format!("`{key}` expects {}, got `{v}`", std::any::type_name::<T>()),
            }),
        }
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| Error::Parse {
            line: None,
            message: format!("missing required key `{key}`"),
        })
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn check(&self, key: &str, ok: bool, what: impl FnOnce() -> String) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Parse {
                line: self.line(key),
                message: format!("`{key}` {}", what()),
            })
        }
    }

    fn positive(&self, key: &str, v: f64) -> Result<()> {
        self.check(key, v.is_finite() && v > 0.0, || {
            format!("must be positive and finite, got {v}")
        })
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    let e = Entries::parse(text)?;

    let length: f64 = e.required("L")?;
    e.positive("L", length)?;
    let froude: f64 = e.required("Fr")?;
    e.positive("Fr", froude)?;
    let viscosity = match e.get::<f64>("Re")? {
        Some(re) => {
            e.positive("Re", re)?;
            let pr = e.or("Pr", 1.0)?;
            e.positive("Pr", pr)?;
            Some(Viscosity {
                reynolds: re,
                prandtl: pr,
            })
        }
        None => {
            e.check("Pr", e.line("Pr").is_none(), || "requires `Re`".into())?;
            None
        }
    };
    let params = PhysicalParams { froude, viscosity };

    let nx: usize = e.required("nx")?;
    let ny: usize = e.required("ny")?;
    for (key, n) in [("nx", nx), ("ny", ny)] {
        e.check(key, n >= 8 && n % 2 == 0, || {
            format!("must be even and at least 8, got {n}")
        })?;
    }
    let kz_max: usize = e.required("kz_max")?;
    let nz = e.or("nz", GridSpec::default_nz(kz_max))?;
    e.check("nz", nz > 2 * kz_max, || {
        format!("must exceed 2·kz_max = {}, got {nz}", 2 * kz_max)
    })?;
    let grid = GridSpec {
        nx,
        ny,
        length,
        kz_max,
        nz,
    };

    let t_end: f64 = e.required("t_end")?;
    e.check("t_end", t_end.is_finite() && t_end >= 0.0, || {
        format!("must be non-negative, got {t_end}")
    })?;
    let cfl = e.or("cfl", RunConfig::DEFAULT_CFL)?;
    e.check("cfl", cfl > 0.0 && cfl <= 1.0, || {
        format!("must lie in (0, 1], got {cfl}")
    })?;
    let dt_override = e.get::<f64>("dt")?;
    if let Some(dt) = dt_override {
        e.positive("dt", dt)?;
    }
    let diag_every = e.or("diag_every", RunConfig::DEFAULT_DIAG_EVERY)?;
    e.check("diag_every", diag_every > 0, || "must be positive".into())?;
    let snapshot_every = e.get::<usize>("snapshot_every")?;
    e.check("snapshot_every", snapshot_every != Some(0), || {
        "must be positive".into()
    })?;
    let run = RunConfig {
        t_end,
        cfl,
        dt_override,
        diag_every,
        snapshot_every,
    };

    let ic = parse_ic(&e)?;
    let output_dir = PathBuf::from(e.or("output_dir", "output".to_string())?);

    let d = Tolerances::default();
    let tol = |key: &str, default: f64| -> Result<f64> {
        let v = e.or(key, default)?;
        e.check(key, v.is_finite() && v >= 0.0, || {
            format!("must be non-negative, got {v}")
        })?;
        Ok(v)
    };
    let tolerances = Tolerances {
        equality: tol("tol.equality", d.equality)?,
        inequality: tol("tol.inequality", d.inequality)?,
        omega_l4: tol("tol.omega_l4", d.omega_l4)?,
        omega_l8: tol("tol.omega_l8", d.omega_l8)?,
        omega_linf: tol("tol.omega_linf", d.omega_linf)?,
        mean: tol("tol.mean", d.mean)?,
        modal_l2: tol("tol.modal_l2", d.modal_l2)?,
        modal_l4: tol("tol.modal_l4", d.modal_l4)?,
        modal_linf: tol("tol.modal_linf", d.modal_linf)?,
    };

    let twin_seed = e.or("twin.seed", ic.seed.wrapping_add(1))?;
    let convergence_dts = match e.raw("convergence.dt") {
        None => vec![4e-3, 2e-3, 1e-3],
        Some((line, v)) => {
            let dts = v
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse {
                    line: Some(line),
                    message: format!("`convergence.dt` expects a list of numbers, got `{v}`"),
                })?;
            let ok = dts.len() >= 2
                && dts.iter().all(|d| d.is_finite() && *d > 0.0)
                && dts.windows(2).all(|w| w[1] < w[0]);
            e.check("convergence.dt", ok, || {
                "must list at least two decreasing positive steps".into()
            })?;
            dts
        }
    };

    let config = SimulationConfig {
        grid,
        params,
        run,
        ic,
        output_dir,
        tolerances,
        twin_seed,
        convergence_dts,
    };
    config.validate().map_err(|err| Error::Parse {
        line: None,
        message: err.to_string(),
    })?;
    Ok(config)
}

fn parse_ic(e: &Entries) -> Result<IcSpec> {
    let name: String = e.required("ic.name")?;
    let kind = IcKind::parse(&name).ok_or_else(|| Error::Parse {
        line: e.line("ic.name"),
        message: format!("unknown initial condition `{name}`"),
    })?;
    let mut ic = IcSpec::new(kind);
    ic.amplitude = e.or("ic.amplitude", ic.amplitude)?;
    ic.slope = e.or("ic.slope", ic.slope)?;
    e.check("ic.slope", ic.slope.is_finite() && ic.slope >= 0.0, || {
        format!("must be non-negative, got {}", ic.slope)
    })?;
    ic.seed = e.or("ic.seed", ic.seed)?;
    if let Some((line, v)) = e.raw("ic.scalars") {
        ic.scalars = Scalars::parse(v).ok_or_else(|| Error::Parse {
            line: Some(line),
            message: format!("`ic.scalars` must be `random_spectrum` or `none`, got `{v}`"),
        })?;
    }
    ic.scalar_amplitude = e.or("ic.scalar_amplitude", ic.scalar_amplitude)?;
    ic.mode = (e.or("ic.m", ic.mode.0)?, e.or("ic.n", ic.mode.1)?);
    ic.rho_amplitude = e.or("ic.rho_amplitude", ic.rho_amplitude)?;
    ic.mean_w = e.or("ic.mean_w", ic.mean_w)?;
    ic.mean_rho0 = e.or("ic.mean_rho0", ic.mean_rho0)?;
    ic.checkpoint = e.get::<String>("ic.path")?.map(PathBuf::from);
    for key in [
        "ic.amplitude",
        "ic.scalar_amplitude",
        "ic.rho_amplitude",
        "ic.mean_w",
        "ic.mean_rho0",
    ] {
        if let Some(v) = e.get::<f64>(key)? {
            e.check(key, v.is_finite(), || format!("must be finite, got {v}"))?;
        }
    }
    e.check(
        "ic.path",
        kind != IcKind::FromCheckpoint || ic.checkpoint.is_some(),
        || "is required by from_checkpoint".into(),
    )?;
    ic.validate().map_err(|err| Error::Parse {
        line: e.line("ic.name"),
        message: err.to_string(),
    })?;
    Ok(ic)
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.params.validate()?;
        self.run.validate()?;
        self.ic.validate()?;
        self.tolerances.validate()
    }

    /// Renders the config so that [`parse_config`] reproduces it exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        let g = &self.grid;
        kv("L", format!("{:?}", g.length));
        kv("Fr", format!("{:?}", self.params.froude));
        if let Some(v) = self.params.viscosity {
            kv("Re", format!("{:?}", v.reynolds));
            kv("Pr", format!("{:?}", v.prandtl));
        }
        kv("nx", g.nx.to_string());
        kv("ny", g.ny.to_string());
        kv("kz_max", g.kz_max.to_string());
        kv("nz", g.nz.to_string());
        let r = &self.run;
        kv("t_end", format!("{:?}", r.t_end));
        kv("cfl", format!("{:?}", r.cfl));
        if let Some(dt) = r.dt_override {
            kv("dt", format!("{dt:?}"));
        }
        kv("diag_every", r.diag_every.to_string());
        if let Some(n) = r.snapshot_every {
            kv("snapshot_every", n.to_string());
        }
        kv("output_dir", self.output_dir.display().to_string());
        let ic = &self.ic;
        kv("ic.name", ic.kind.name().to_string());
        kv("ic.amplitude", format!("{:?}", ic.amplitude));
        kv("ic.slope", format!("{:?}", ic.slope));
        kv("ic.seed", ic.seed.to_string());
        kv("ic.scalars", ic.scalars.name().to_string());
        kv("ic.scalar_amplitude", format!("{:?}", ic.scalar_amplitude));
        kv("ic.m", ic.mode.0.to_string());
        kv("ic.n", ic.mode.1.to_string());
        kv("ic.rho_amplitude", format!("{:?}", ic.rho_amplitude));
        kv("ic.mean_w", format!("{:?}", ic.mean_w));
        kv("ic.mean_rho0", format!("{:?}", ic.mean_rho0));
        if let Some(p) = &ic.checkpoint {
            kv("ic.path", p.display().to_string());
        }
        let t = &self.tolerances;
        for (k, v) in [
            ("tol.equality", t.equality),
            ("tol.inequality", t.inequality),
            ("tol.omega_l4", t.omega_l4),
            ("tol.omega_l8", t.omega_l8),
            ("tol.omega_linf", t.omega_linf),
            ("tol.mean", t.mean),
            ("tol.modal_l2", t.modal_l2),
            ("tol.modal_l4", t.modal_l4),
            ("tol.modal_linf", t.modal_linf),
        ] {
            kv(k, format!("{v:?}"));
        }
        kv("twin.seed", self.twin_seed.to_string());
        let dts: Vec<String> = self
            .convergence_dts
            .iter()
            .map(|d| format!("{d:?}"))
            .collect();
        kv("convergence.dt", dts.join(", "));
        s
    }
}
