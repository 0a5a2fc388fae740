use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::Polarization;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex {
    pub n: usize,
    pub pol: Polarization,
}

impl ModeIndex {
    pub fn new(n: usize, pol: Polarization) -> Self {
        ModeIndex { n, pol }
    }

    pub fn l(&self) -> f64 {
        (self.n * (self.n + 1)) as f64
    }

    /// All modes up to `n_max`, TE before TM within each order.
    pub fn all(n_max: usize) -> Vec<ModeIndex> {
        (1..=n_max)
            .flat_map(|n| [ModeIndex::new(n, Polarization::TE), ModeIndex::new(n, Polarization::TM)])
            .collect()
    }
}

/// Tangential amplitudes at a radius: `u = r E_t`, `v = r H_t` coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeState {
    pub r: f64,
    pub u: C64,
    pub v: C64,
}

impl ModeState {
    pub fn new(r: f64, u: C64, v: C64) -> Self {
        ModeState { r, u, v }
    }

    pub fn vector(&self) -> Vector2<C64> {
        Vector2::new(self.u, self.v)
    }

    pub fn norm(&self) -> f64 {
        (self.u.norm_sqr() + self.v.norm_sqr()).sqrt()
    }
}

/// Linear map of the state from `r_in` to `r_out`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub r_in: f64,
    pub r_out: f64,
    pub matrix: Matrix2<C64>,
}

impl TransferMatrix {
    pub fn identity(r: f64) -> Self {
        TransferMatrix {
            r_in: r,
            r_out: r,
            matrix: Matrix2::identity(),
        }
    }

    pub fn apply(&self, s: &ModeState) -> Result<ModeState> {
        if (s.r - self.r_in).abs() > 1e-12 * self.r_in.abs().max(1.0) {
            return Err(Error::domain(format!(
                "state at r = {} does not start at r_in = {}",
                s.r, self.r_in
            )));
        }
        let y = self.matrix * s.vector();
        Ok(ModeState::new(self.r_out, y[0], y[1]))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &TransferMatrix) -> Result<TransferMatrix> {
        if (self.r_out - next.r_in).abs() > 1e-12 * self.r_out.abs().max(1.0) {
            return Err(Error::domain("transfer matrices are not adjacent"));
        }
        Ok(TransferMatrix {
            r_in: self.r_in,
            r_out: next.r_out,
            matrix: next.matrix * self.matrix,
        })
    }
}

/// Exterior scattering coefficients per mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringSpectrum {
    pub k: f64,
    pub n_max: usize,
    pub s: BTreeMap<ModeIndex, C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub pol: Polarization,
    #[serde(rename = "Re(s)")]
    pub re: f64,
    #[serde(rename = "Im(s)")]
    pub im: f64,
}

impl ScatteringSpectrum {
    pub fn new(k: f64, n_max: usize) -> Self {
        ScatteringSpectrum {
            k,
            n_max,
            s: BTreeMap::new(),
        }
    }

    pub fn get(&self, n: usize, pol: Polarization) -> C64 {
        self.s.get(&ModeIndex::new(n, pol)).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.s.values().map(|s| s.norm()).fold(0.0, f64::max)
    }

    pub fn rows(&self) -> Vec<SpectrumRow> {
        self.s
            .iter()
            .map(|(m, s)| SpectrumRow {
                n: m.n,
                pol: m.pol,
                re: s.re,
                im: s.im,
            })
            .collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let err = |source| Error::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut w = csv::Writer::from_path(path).map_err(err)?;
        for row in self.rows() {
            w.serialize(row).map_err(err)?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path, k: f64) -> Result<Self> {
        let err = |source| Error::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut r = csv::Reader::from_path(path).map_err(err)?;
        let mut out = ScatteringSpectrum::new(k, 0);
        for row in r.deserialize::<SpectrumRow>() {
            let row = row.map_err(err)?;
            out.n_max = out.n_max.max(row.n);
            out.s.insert(ModeIndex::new(row.n, row.pol), C64::new(row.re, row.im));
        }
        Ok(out)
    }
}
