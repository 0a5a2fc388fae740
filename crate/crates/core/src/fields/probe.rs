use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::{CVec3, C64};

use super::FieldPair;

/// One sampled point: position and the real/imaginary parts of `E` and `H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub re_e1: f64,
    pub im_e1: f64,
    pub re_e2: f64,
    pub im_e2: f64,
    pub re_e3: f64,
    pub im_e3: f64,
    pub re_h1: f64,
    pub im_h1: f64,
    pub re_h2: f64,
    pub im_h2: f64,
    pub re_h3: f64,
    pub im_h3: f64,
}

impl ProbeRow {
    pub fn new(p: &Point, e: &CVec3, h: &CVec3) -> Self {
        ProbeRow {
            x: p.x,
            y: p.y,
            z: p.z,
            re_e1: e.x.re,
            im_e1: e.x.im,
            re_e2: e.y.re,
            im_e2: e.y.im,
            re_e3: e.z.re,
            im_e3: e.z.im,
            re_h1: h.x.re,
            im_h1: h.x.im,
            re_h2: h.y.re,
            im_h2: h.y.im,
            re_h3: h.z.re,
            im_h3: h.z.im,
        }
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y, self.z)
    }

    pub fn fields(&self) -> (CVec3, CVec3) {
        (
            CVec3::new(
                C64::new(self.re_e1, self.im_e1),
                C64::new(self.re_e2, self.im_e2),
                C64::new(self.re_e3, self.im_e3),
            ),
            CVec3::new(
                C64::new(self.re_h1, self.im_h1),
                C64::new(self.re_h2, self.im_h2),
                C64::new(self.re_h3, self.im_h3),
            ),
        )
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Samples `pair` at `points` and writes one CSV row per point.
pub fn write_probe_csv<P: FieldPair + ?Sized>(path: &Path, pair: &P, points: &[Point]) -> Result<Vec<ProbeRow>> {
    let rows = points
        .iter()
        .map(|p| {
            let (e, h) = pair.eval(p)?;
            Ok(ProbeRow::new(p, &e, &h))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    for row in &rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(rows)
}

pub fn read_probe_csv(path: &Path) -> Result<Vec<ProbeRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize().map(|row| row.map_err(csv_err(path))).collect()
}
