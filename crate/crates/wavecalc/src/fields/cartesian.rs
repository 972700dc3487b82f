//! Complex fields on a periodic cube, stored as a flat `N³` array.
//!
//! This is the state the spectral propagator marches; indexing is
//! `(ix * n + iy) * n + iz` and the cube is centered on the origin.

use crate::error::{Result, WaveError};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CartesianGrid {
    /// Samples per axis.
    pub n: usize,
    /// Box edge length; the box spans `[−length/2, length/2)` per axis.
    pub length: f64,
}

impl CartesianGrid {
    pub fn new(n: usize, length: f64) -> Result<CartesianGrid> {
        if n < 8 || !(length > 0.0) {
            return Err(WaveError::InvalidParameter(format!(
                "box grid n = {n}, length = {length}"
            )));
        }
        Ok(CartesianGrid { n, length })
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.spacing()
    }

    /// FFT angular wavenumber for sample index `i`.
    pub fn wavenumber(&self, i: usize) -> f64 {
        let n = self.n as i64;
        let f = if (i as i64) <= n / 2 { i as i64 } else { i as i64 - n };
        2.0 * std::f64::consts::PI * f as f64 / self.length
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.n + iy) * self.n + iz
    }
}

#[derive(Clone)]
pub struct CartesianField {
    pub grid: CartesianGrid,
    pub values: Vec<Complex64>,
}

#[derive(Serialize)]
struct BoxSidecar<'a> {
    n: usize,
    length: f64,
    format: &'a str,
    order: &'a str,
}

impl CartesianField {
    pub fn from_fn(
        grid: CartesianGrid,
        f: impl Fn([f64; 3]) -> Complex64 + Sync,
    ) -> CartesianField {
        let n = grid.n;
        let values: Vec<Complex64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|ix| {
                let f = &f;
                let x = grid.coord(ix);
                (0..n).flat_map(move |iy| {
                    let y = grid.coord(iy);
                    (0..n).map(move |iz| f([x, y, grid.coord(iz)]))
                })
            })
            .collect();
        CartesianField { grid, values }
    }

    pub fn l2_norm(&self) -> f64 {
        let h3 = self.grid.spacing().powi(3);
        let sums: Vec<f64> = self
            .values
            .par_chunks(self.grid.n * self.grid.n)
            .map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .collect();
        (h3 * sums.iter().sum::<f64>()).sqrt()
    }

    pub fn scale(&mut self, s: Complex64) {
        self.values.par_iter_mut().for_each(|v| *v *= s);
    }

    /// Write raw interleaved `re, im` little-endian f64 samples plus a JSON
    /// sidecar describing the layout.
    pub fn export(&self, dir: &Path, stem: &str) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut raw = std::io::BufWriter::new(std::fs::File::create(
            dir.join(format!("{stem}.c128")),
        )?);
        for v in &self.values {
            raw.write_all(&v.re.to_le_bytes())?;
            raw.write_all(&v.im.to_le_bytes())?;
        }
        raw.flush()?;
        let sidecar = BoxSidecar {
            n: self.grid.n,
            length: self.grid.length,
            format: "complex128-le",
            order: "x-major (ix*n + iy)*n + iz",
        };
        std::fs::write(
            dir.join(format!("{stem}.json")),
            serde_json::to_string_pretty(&sidecar)?,
        )?;
        Ok(())
    }
}
