//! Binary checkpoints.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! offset  size  field
//!      0     4  magic "SLWD"
//!      4     4  format version (u32, currently 1)
//!      8     4  nx (u32)
//!     12     4  ny (u32)
//!     16     4  kz_max (u32)
//!     20     4  viscous flag (u32, 0 or 1)
//!     24     8  L (f64)
//!     32     8  Fr (f64)
//!     40     8  Re (f64, 0 when inviscid)
//!     48     8  Pr (f64, 0 when inviscid)
//!     56     8  t (f64)
//!     64     4  field count F = kz_max + 3 (u32)
//!     68   8·F  complex coefficient count of each field (u64)
//! ```
//!
//! The payload follows: for each field in the order `ω, w, ρ_0, …, ρ_K`,
//! its full FFT-ordered coefficient array as `(re, im)` f64 pairs.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ModelState, PhysicalParams, Viscosity};
use crate::spectral::{SpectralField2D, VerticalModeStack};

pub const MAGIC: &[u8; 4] = b"SLWD";
pub const VERSION: u32 = 1;
const FIXED_HEADER: usize = 68;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointHeader {
    pub version: u32,
    pub nx: usize,
    pub ny: usize,
    pub kz_max: usize,
    pub length: f64,
    pub params: PhysicalParams,
    pub t: f64,
    pub counts: Vec<u64>,
}

impl CheckpointHeader {
    pub fn byte_len(&self) -> usize {
        FIXED_HEADER + 8 * self.counts.len()
    }

    pub fn payload_len(&self) -> usize {
        self.counts.iter().map(|c| 16 * *c as usize).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub header: CheckpointHeader,
    pub state: ModelState,
}

/// Serialized bytes of `state`.
pub fn encode_checkpoint(state: &ModelState, length: f64, params: &PhysicalParams) -> Vec<u8> {
    let (nx, ny) = state.omega.dims();
    let kz = state.rho.kz_max();
    let fields: Vec<&SpectralField2D> = [&state.omega, &state.w]
        .into_iter()
        .chain(state.rho.modes())
        .collect();
    let mut buf = Vec::with_capacity(FIXED_HEADER + 8 * fields.len() + 16 * nx * ny * fields.len());
    buf.extend_from_slice(MAGIC);
    for v in [VERSION, nx as u32, ny as u32, kz as u32] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let (viscous, re, pr) = match params.viscosity {
        Some(v) => (1u32, v.reynolds, v.prandtl),
        None => (0, 0.0, 0.0),
    };
    buf.extend_from_slice(&viscous.to_le_bytes());
    for v in [length, params.froude, re, pr, state.t] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(&(fields.len() as u32).to_le_bytes());
    for f in &fields {
        buf.extend_from_slice(&(f.coeffs().len() as u64).to_le_bytes());
    }
    for f in &fields {
        for c in f.coeffs() {
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    buf
}

pub fn write_checkpoint(
    state: &ModelState,
    length: f64,
    params: &PhysicalParams,
    path: &Path,
) -> Result<()> {
    fs::write(path, encode_checkpoint(state, length, params)).map_err(|e| Error::io(path, e))
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_checkpoint(&bytes, path)
}

/// Parses checkpoint bytes; `path` only labels errors.
pub fn decode_checkpoint(bytes: &[u8], path: &Path) -> Result<Checkpoint> {
    let corrupt = |reason: String| Error::CorruptHeader {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < FIXED_HEADER {
        return Err(corrupt(format!(
            "file has {} bytes, fixed header needs {FIXED_HEADER}",
            bytes.len()
        )));
    }
    if &bytes[0..4] != MAGIC {
        return Err(corrupt("bad magic tag".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(corrupt(format!("unsupported version {version}")));
    }
    let (nx, ny, kz) = (u32_at(8) as usize, u32_at(12) as usize, u32_at(16) as usize);
    if nx == 0 || ny == 0 {
        return Err(corrupt(format!("empty grid {nx}x{ny}")));
    }
    let viscosity = match u32_at(20) {
        0 => None,
        1 => Some(Viscosity {
            reynolds: f64_at(40),
            prandtl: f64_at(48),
        }),
        other => return Err(corrupt(format!("viscous flag {other}"))),
    };
    let params = PhysicalParams {
        froude: f64_at(32),
        viscosity,
    };
    params.validate().map_err(|e| corrupt(e.to_string()))?;
    let length = f64_at(24);
    if !(length.is_finite() && length > 0.0) {
        return Err(corrupt(format!("box length {length}")));
    }
    let field_count = u32_at(64) as usize;
    if field_count != kz + 3 {
        return Err(corrupt(format!(
            "{field_count} fields recorded, kz_max = {kz} needs {}",
            kz + 3
        )));
    }
    let header_len = FIXED_HEADER + 8 * field_count;
    if bytes.len() < header_len {
        return Err(corrupt("file ends inside the field table".into()));
    }
    let counts: Vec<u64> = (0..field_count)
        .map(|i| {
            let o = FIXED_HEADER + 8 * i;
            u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap())
        })
        .collect();
    if counts.iter().any(|c| *c != (nx * ny) as u64) {
        return Err(corrupt(format!(
            "field sizes {counts:?} do not match {nx}x{ny}"
        )));
    }
    let header = CheckpointHeader {
        version,
        nx,
        ny,
        kz_max: kz,
        length,
        params,
        t: f64_at(56),
        counts,
    };
    let expected = header_len + header.payload_len();
    if bytes.len() < expected {
        return Err(Error::TruncatedPayload {
            path: path.to_path_buf(),
            expected: expected as u64,
            found: bytes.len() as u64,
        });
    }
    if bytes.len() > expected {
        return Err(corrupt(format!(
            "{} trailing bytes after the payload",
            bytes.len() - expected
        )));
    }

    let mut fields = bytes[header_len..]
        .chunks_exact(16 * nx * ny)
        .map(|chunk| {
            let coeffs = chunk
                .chunks_exact(16)
                .map(|c| {
                    Complex64::new(
                        f64::from_le_bytes(c[0..8].try_into().unwrap()),
                        f64::from_le_bytes(c[8..16].try_into().unwrap()),
                    )
                })
                .collect();
            SpectralField2D::from_coeffs(nx, ny, coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    let rho = VerticalModeStack::from_modes(fields.split_off(2))?;
    let w = fields.pop().expect("two horizontal fields");
    let omega = fields.pop().expect("two horizontal fields");
    let state = ModelState {
        t: header.t,
        omega,
        w,
        rho,
    };
    Ok(Checkpoint { header, state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;

    fn sample_state() -> ModelState {
        let spec = GridSpec::new(8, 8, 1.0, 1, 4).unwrap();
        let mut s = ModelState::zeros(&spec);
        s.t = 0.125;
        s.w.set(1, 2, Complex64::new(0.25, -1.5));
        s.rho
            .mode_mut(1)
            .set(-3, 0, Complex64::new(f64::MIN_POSITIVE, 3.0));
        s
    }

    #[test]
    fn header_layout() {
        let p = PhysicalParams::viscous(0.5, 100.0, 2.0).unwrap();
        let bytes = encode_checkpoint(&sample_state(), 1.5, &p);
        assert_eq!(&bytes[0..4], b"SLWD");
        assert_eq!(u32::from_le_bytes(bytes[64..68].try_into().unwrap()), 4);
        assert_eq!(f64::from_le_bytes(bytes[24..32].try_into().unwrap()), 1.5);
        assert_eq!(f64::from_le_bytes(bytes[56..64].try_into().unwrap()), 0.125);
        assert_eq!(bytes.len(), 68 + 8 * 4 + 16 * 64 * 4);
        let ck = decode_checkpoint(&bytes, Path::new("mem")).unwrap();
        assert_eq!(ck.header.params, p);
        assert_eq!(ck.header.length, 1.5);
        assert_eq!(ck.state, sample_state());
    }

    #[test]
    fn corrupt_inputs() {
        let p = PhysicalParams::inviscid(1.0).unwrap();
        let good = encode_checkpoint(&sample_state(), 1.0, &p);
        let path = Path::new("mem");

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(
            decode_checkpoint(&bad, path),
            Err(Error::CorruptHeader { .. })
        ));

        let mut bad = good.clone();
        bad[4] = 7;
        assert!(matches!(
            decode_checkpoint(&bad, path),
            Err(Error::CorruptHeader { .. })
        ));

        assert!(matches!(
            decode_checkpoint(&good[..40], path),
            Err(Error::CorruptHeader { .. })
        ));
        match decode_checkpoint(&good[..good.len() - 1], path) {
            Err(Error::TruncatedPayload {
                expected, found, ..
            }) => {
                assert_eq!(expected, good.len() as u64);
                assert_eq!(found, good.len() as u64 - 1);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
        let mut long = good.clone();
        long.push(0);
        assert!(matches!(
            decode_checkpoint(&long, path),
            Err(Error::CorruptHeader { .. })
        ));
    }
}
