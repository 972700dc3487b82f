//! Sampled fields on a ray grid: a product of directions (Gauss–Legendre in
//! cos θ × uniform azimuth) and Gauss–Legendre radii on `(0, R]`.
//!
//! The direction set is closed under the antipodal map (needed to assemble
//! full-axis profiles for the parity-mixed Hilbert transforms) and the
//! radial nodes avoid both `r = 0` and the box edge. Derivatives are
//! high-order finite differences radially and in the polar angle (with
//! ghost values across the poles) and spectral in the azimuth.

use crate::error::{Result, WaveError};
use crate::fields::closed::ClosedFormField;
use crate::numerics::{fd, gauss};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::sync::Arc;

/// Width of the radial finite-difference stencils (order ≈ width − 1).
const RADIAL_STENCIL: usize = 9;
/// Width of the polar stencils (polar grids are much coarser).
const POLAR_STENCIL: usize = 7;
/// Sub-quadrature points per radial cell for the cumulative integral.
const CELL_QUAD: usize = 4;
/// Nodes in the interpolation stencil for cell integrals.
const CELL_STENCIL: usize = 6;

#[derive(Debug)]
pub struct RayGrid {
    pub n_polar: usize,
    pub n_azimuth: usize,
    pub n_radial: usize,
    pub rmax: f64,
    /// cos θ Gauss–Legendre nodes (ascending) and their weights.
    pub cos_theta: Vec<f64>,
    pub polar_weights: Vec<f64>,
    pub phis: Vec<f64>,
    /// Unit direction per (polar, azimuth) pair, row-major polar-major.
    pub dirs: Vec<[f64; 3]>,
    /// Solid-angle weight per direction (sums to 4π).
    pub dir_weights: Vec<f64>,
    /// Index of the antipodal direction.
    pub antipode: Vec<usize>,
    pub radii: Vec<f64>,
    pub radial_weights: Vec<f64>,
    /// Radial FD: for each node, stencil start index and derivative weights.
    d1_stencils: Vec<(usize, Vec<f64>)>,
    d2_stencils: Vec<(usize, Vec<f64>)>,
    /// Polar FD in θ on the extended (ghost-padded) polar grid.
    polar_d1: Vec<(usize, Vec<f64>)>,
    polar_d2: Vec<(usize, Vec<f64>)>,
    polar_thetas: Vec<f64>,
    /// Cumulative-integral cell rules: stencil start + weights per cell
    /// (cell k integrates from r_{k-1}, or 0, to r_k).
    cell_rules: Vec<(usize, Vec<f64>)>,
}

impl RayGrid {
    /// Build a grid with `n_polar × n_azimuth` directions and `n_radial`
    /// Gauss–Legendre radii on `(0, rmax]`. `n_azimuth` must be even so the
    /// direction set is antipodally closed.
    pub fn new(n_polar: usize, n_azimuth: usize, n_radial: usize, rmax: f64) -> Result<Arc<RayGrid>> {
        if n_polar < 2 || n_azimuth < 2 || n_azimuth % 2 != 0 || n_radial < RADIAL_STENCIL {
            return Err(WaveError::InvalidParameter(format!(
                "grid {n_polar}×{n_azimuth}×{n_radial} is too small or azimuth is odd"
            )));
        }
        if !(rmax > 0.0) {
            return Err(WaveError::InvalidParameter(format!("rmax = {rmax}")));
        }
        let (cos_theta, polar_weights) = gauss::legendre(n_polar);
        let phis: Vec<f64> =
            (0..n_azimuth).map(|j| 2.0 * std::f64::consts::PI * j as f64 / n_azimuth as f64).collect();
        let mut dirs = Vec::with_capacity(n_polar * n_azimuth);
        let mut dir_weights = Vec::with_capacity(n_polar * n_azimuth);
        for (i, &ct) in cos_theta.iter().enumerate() {
            let st = (1.0 - ct * ct).sqrt();
            for &phi in &phis {
                dirs.push([st * phi.cos(), st * phi.sin(), ct]);
                dir_weights
                    .push(polar_weights[i] * 2.0 * std::f64::consts::PI / n_azimuth as f64);
            }
        }
        // Antipode: polar index mirrors (GL nodes are symmetric), azimuth
        // advances by half a turn.
        let mut antipode = vec![0usize; n_polar * n_azimuth];
        for i in 0..n_polar {
            for j in 0..n_azimuth {
                let ii = n_polar - 1 - i;
                let jj = (j + n_azimuth / 2) % n_azimuth;
                antipode[i * n_azimuth + j] = ii * n_azimuth + jj;
            }
        }
        let (radii, radial_weights) = gauss::legendre_on(n_radial, 0.0, rmax);

        let d1_stencils = radial_stencils(&radii, 1);
        let d2_stencils = radial_stencils(&radii, 2);
        let polar_thetas: Vec<f64> = cos_theta.iter().map(|c| c.acos()).collect();
        let polar_d1 = polar_stencils(&polar_thetas, 1);
        let polar_d2 = polar_stencils(&polar_thetas, 2);
        let cell_rules = cumulative_cells(&radii);

        Ok(Arc::new(RayGrid {
            n_polar,
            n_azimuth,
            n_radial,
            rmax,
            cos_theta,
            polar_weights,
            phis,
            dirs,
            dir_weights,
            antipode,
            radii,
            radial_weights,
            d1_stencils,
            d2_stencils,
            polar_d1,
            polar_d2,
            polar_thetas,
            cell_rules,
        }))
    }

    pub fn n_dirs(&self) -> usize {
        self.dirs.len()
    }

    pub fn point(&self, d: usize, k: usize) -> [f64; 3] {
        let u = self.dirs[d];
        let r = self.radii[k];
        [u[0] * r, u[1] * r, u[2] * r]
    }
}

/// FD stencils (start index, weights) for every node of a 1-D grid.
fn radial_stencils(xs: &[f64], order: usize) -> Vec<(usize, Vec<f64>)> {
    let n = xs.len();
    let w = RADIAL_STENCIL.min(n);
    (0..n)
        .map(|k| {
            let start = k.saturating_sub(w / 2).min(n - w);
            (start, fd::weights(xs[k], &xs[start..start + w], order))
        })
        .collect()
}

/// Ghost nodes per pole: capped by the node count so that every ghost has
/// a real mirror partner (tiny angular grids stay constructible — they are
/// used for radial-only work).
fn polar_ghosts(n_polar: usize) -> usize {
    (POLAR_STENCIL / 2).min(n_polar)
}

/// Polar derivative stencils on the ghost-extended θ grid.
///
/// The extension appends `g` mirrored nodes beyond each pole; the *values*
/// on those nodes come from the antipodal azimuth, which the caller
/// supplies. Index convention for the extended axis: ghosts below occupy
/// `0..g`, real nodes `g..g+n`, ghosts above `g+n..g+2g`.
fn polar_stencils(thetas: &[f64], order: usize) -> Vec<(usize, Vec<f64>)> {
    // Note: `thetas` is ordered by polar index, i.e. *descending* in θ
    // (polar index follows ascending cos θ). Ghosts before index 0 therefore
    // mirror through θ = π and ghosts past the end mirror through θ = 0.
    let n = thetas.len();
    let g = polar_ghosts(n);
    let mut ext = Vec::with_capacity(n + 2 * g);
    for i in 0..g {
        ext.push(2.0 * std::f64::consts::PI - thetas[g - 1 - i]);
    }
    ext.extend_from_slice(thetas);
    for i in 0..g {
        ext.push(-thetas[n - 1 - i]);
    }
    let w = POLAR_STENCIL.min(n + 2 * g);
    (0..n)
        .map(|i| {
            let c = i + g;
            let start = c.saturating_sub(w / 2).min(n + 2 * g - w);
            (start, fd::weights(ext[c], &ext[start..start + w], order))
        })
        .collect()
}

/// Integration rule for each radial cell: integral over the cell expressed
/// as weights on a neighboring-node stencil.
fn cumulative_cells(radii: &[f64]) -> Vec<(usize, Vec<f64>)> {
    let n = radii.len();
    let (gx, gw) = gauss::legendre(CELL_QUAD);
    (0..n)
        .map(|k| {
            let (a, b) = if k == 0 { (0.0, radii[0]) } else { (radii[k - 1], radii[k]) };
            let start = k.saturating_sub(CELL_STENCIL / 2).min(n - CELL_STENCIL);
            let nodes = &radii[start..start + CELL_STENCIL];
            let mid = 0.5 * (a + b);
            let hw = 0.5 * (b - a);
            let mut weights = vec![0.0; CELL_STENCIL];
            for (x, w) in gx.iter().zip(&gw) {
                let xi = mid + hw * x;
                let interp = fd::weights(xi, nodes, 0);
                for (acc, li) in weights.iter_mut().zip(&interp) {
                    *acc += hw * w * li;
                }
            }
            (start, weights)
        })
        .collect()
}

/// A complex field sampled on a [`RayGrid`]; values indexed `[dir][radius]`.
#[derive(Clone, Debug)]
pub struct RayField {
    pub grid: Arc<RayGrid>,
    pub values: Vec<Complex64>,
}

impl RayField {
    pub fn zeros(grid: Arc<RayGrid>) -> RayField {
        let n = grid.n_dirs() * grid.n_radial;
        RayField { grid, values: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn from_fn(grid: Arc<RayGrid>, f: impl Fn([f64; 3]) -> Complex64 + Sync) -> RayField {
        let nr = grid.n_radial;
        let values: Vec<Complex64> = (0..grid.n_dirs())
            .into_par_iter()
            .flat_map_iter(|d| {
                let grid = &grid;
                let f = &f;
                (0..nr).map(move |k| f(grid.point(d, k)))
            })
            .collect();
        RayField { grid, values }
    }

    pub fn from_closed(grid: Arc<RayGrid>, f: &ClosedFormField) -> Result<RayField> {
        let nr = grid.n_radial;
        let values: std::result::Result<Vec<Complex64>, WaveError> = (0..grid.n_dirs())
            .into_par_iter()
            .flat_map_iter(|d| {
                let grid = &grid;
                (0..nr).map(move |k| f.sample(grid.point(d, k)))
            })
            .collect();
        Ok(RayField { grid, values: values? })
    }

    pub fn at(&self, d: usize, k: usize) -> Complex64 {
        self.values[d * self.grid.n_radial + k]
    }

    fn check_same_grid(&self, other: &RayField) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) {
            Ok(())
        } else {
            Err(WaveError::GridMismatch)
        }
    }

    pub fn add(&self, other: &RayField) -> Result<RayField> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(RayField { grid: self.grid.clone(), values })
    }

    pub fn sub(&self, other: &RayField) -> Result<RayField> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(RayField { grid: self.grid.clone(), values })
    }

    pub fn scale(&self, s: Complex64) -> RayField {
        RayField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| s * v).collect(),
        }
    }

    pub fn conj(&self) -> RayField {
        RayField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Parity `f(r) → f(−r)`: swap each direction with its antipode.
    pub fn parity(&self) -> RayField {
        let nr = self.grid.n_radial;
        let mut values = vec![Complex64::new(0.0, 0.0); self.values.len()];
        for d in 0..self.grid.n_dirs() {
            let a = self.grid.antipode[d];
            values[d * nr..(d + 1) * nr].copy_from_slice(&self.values[a * nr..(a + 1) * nr]);
        }
        RayField { grid: self.grid.clone(), values }
    }

    /// Multiply by `r^n` (any integer power; the grid excludes r = 0).
    pub fn mul_rpow(&self, n: i32) -> RayField {
        let nr = self.grid.n_radial;
        let mut values = self.values.clone();
        for d in 0..self.grid.n_dirs() {
            for k in 0..nr {
                values[d * nr + k] *= self.grid.radii[k].powi(n);
            }
        }
        RayField { grid: self.grid.clone(), values }
    }

    /// Pointwise multiply by a function of the grid point.
    pub fn mul_fn(&self, f: impl Fn([f64; 3]) -> Complex64 + Sync) -> RayField {
        let nr = self.grid.n_radial;
        let values: Vec<Complex64> = (0..self.grid.n_dirs())
            .into_par_iter()
            .flat_map_iter(|d| {
                let grid = &self.grid;
                let vals = &self.values;
                let f = &f;
                (0..nr).map(move |k| vals[d * nr + k] * f(grid.point(d, k)))
            })
            .collect();
        RayField { grid: self.grid.clone(), values }
    }

    /// `√∫|f|² d³r` over the grid ball.
    pub fn l2_norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    /// `∫ f̄ g d³r` (conjugate-linear in `self`).
    pub fn inner(&self, other: &RayField) -> Complex64 {
        let nr = self.grid.n_radial;
        // Collect per-direction sums first, then reduce sequentially so the
        // result does not depend on thread scheduling.
        let partials: Vec<Complex64> = (0..self.grid.n_dirs())
            .into_par_iter()
            .map(|d| {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..nr {
                    let w = self.grid.dir_weights[d]
                        * self.grid.radial_weights[k]
                        * self.grid.radii[k]
                        * self.grid.radii[k];
                    acc += w * self.values[d * nr + k].conj() * other.values[d * nr + k];
                }
                acc
            })
            .collect();
        partials.into_iter().sum()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Fraction of the field's angular energy that this grid cannot safely
    /// represent, aggregated over a spread of radial shells. Each shell is
    /// projected onto the spherical harmonics the quadrature resolves with a
    /// margin to spare (degree ≤ n_polar − 3, azimuthal order strictly below
    /// the Nyquist band); the result is the relative energy of the projection
    /// residual. Well-resolved fields score near zero; a value of order one
    /// means angular derivatives would be dominated by truncation error.
    pub fn angular_tail_fraction(&self) -> f64 {
        let np = self.grid.n_polar;
        let na = self.grid.n_azimuth;
        let nr = self.grid.n_radial;
        let shells: Vec<usize> = {
            let mut s: Vec<usize> = (0..8).map(|i| ((2 * i + 1) * nr) / 16).collect();
            s.dedup();
            s
        };
        let l_max = np.saturating_sub(3);
        let m_max = ((na / 2).saturating_sub(2)).min(l_max) as i64;
        let mut total = 0.0f64;
        let mut captured = 0.0f64;
        for &k in &shells {
            for d in 0..np * na {
                total += self.grid.dir_weights[d] * self.values[d * nr + k].norm_sqr();
            }
            for m in -m_max..=m_max {
                // Ring sums g(i) = (2π/n_azimuth) Σ_j f(i,j) e^{−imφ_j}.
                let mut g = vec![Complex64::new(0.0, 0.0); np];
                for (i, gi) in g.iter_mut().enumerate() {
                    for j in 0..na {
                        let ang = -(m as f64) * self.grid.phis[j];
                        *gi += self.values[((i * na + j) * nr) + k]
                            * Complex64::new(ang.cos(), ang.sin());
                    }
                    *gi *= 2.0 * std::f64::consts::PI / na as f64;
                }
                // Fully normalized associated Legendre recursion in degree at
                // fixed |m|; the normalization keeps values of order one for
                // any degree, avoiding factorial overflow.
                let ma = m.unsigned_abs() as usize;
                let mut p_prev = vec![0.0f64; np];
                let mut p_curr = vec![(0.25 / std::f64::consts::PI).sqrt(); np];
                for mm in 1..=ma {
                    let scale = ((2.0 * mm as f64 + 1.0) / (2.0 * mm as f64)).sqrt();
                    for (i, p) in p_curr.iter_mut().enumerate() {
                        let x = self.grid.cos_theta[i];
                        *p *= -scale * (1.0 - x * x).max(0.0).sqrt();
                    }
                }
                for l in ma..=l_max {
                    if l > ma {
                        let lf = l as f64;
                        let mf = ma as f64;
                        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                        let b = (((lf - 1.0) * (lf - 1.0) - mf * mf)
                            / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                            .sqrt();
                        let next: Vec<f64> = (0..np)
                            .map(|i| a * (self.grid.cos_theta[i] * p_curr[i] - b * p_prev[i]))
                            .collect();
                        p_prev = std::mem::replace(&mut p_curr, next);
                    }
                    let mut c = Complex64::new(0.0, 0.0);
                    for i in 0..np {
                        c += self.grid.polar_weights[i] * p_curr[i] * g[i];
                    }
                    captured += c.norm_sqr();
                }
            }
        }
        if total > 0.0 {
            ((total - captured) / total).max(0.0)
        } else {
            0.0
        }
    }

    /// Radial derivative `∂_r` along each ray.
    pub fn dr(&self) -> RayField {
        self.radial_apply(&self.grid.d1_stencils)
    }

    /// Radial second derivative along each ray.
    pub fn drr(&self) -> RayField {
        self.radial_apply(&self.grid.d2_stencils)
    }

    fn radial_apply(&self, stencils: &[(usize, Vec<f64>)]) -> RayField {
        let nr = self.grid.n_radial;
        let values: Vec<Complex64> = (0..self.grid.n_dirs())
            .into_par_iter()
            .flat_map_iter(|d| {
                let vals = &self.values[d * nr..(d + 1) * nr];
                stencils.iter().map(move |(start, w)| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, wj) in w.iter().enumerate() {
                        acc += *wj * vals[start + j];
                    }
                    acc
                })
            })
            .collect();
        RayField { grid: self.grid.clone(), values }
    }

    /// The running integral `∫_0^{r_k} f(t r̂) dt` along each ray.
    pub fn cumulative_radial_integral(&self) -> RayField {
        let nr = self.grid.n_radial;
        let values: Vec<Complex64> = (0..self.grid.n_dirs())
            .into_par_iter()
            .flat_map_iter(|d| {
                let vals = &self.values[d * nr..(d + 1) * nr];
                let mut acc = Complex64::new(0.0, 0.0);
                self.grid.cell_rules.iter().map(move |(start, w)| {
                    let mut cell = Complex64::new(0.0, 0.0);
                    for (j, wj) in w.iter().enumerate() {
                        cell += *wj * vals[start + j];
                    }
                    acc += cell;
                    acc
                })
            })
            .collect();
        RayField { grid: self.grid.clone(), values }
    }

    /// Azimuthal derivative `∂_φ` (spectral on each uniform φ ring).
    pub fn dphi(&self) -> RayField {
        let np = self.grid.n_polar;
        let na = self.grid.n_azimuth;
        let nr = self.grid.n_radial;
        let mut out = vec![Complex64::new(0.0, 0.0); self.values.len()];
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(na);
        let ifft = planner.plan_fft_inverse(na);
        // Rings are (polar, radius) pairs; process them in parallel with
        // per-thread scratch.
        let rings: Vec<(usize, usize)> =
            (0..np).flat_map(|i| (0..nr).map(move |k| (i, k))).collect();
        let ring_results: Vec<((usize, usize), Vec<Complex64>)> = rings
            .into_par_iter()
            .map(|(i, k)| {
                let mut buf: Vec<Complex64> = (0..na)
                    .map(|j| self.values[(i * na + j) * nr + k])
                    .collect();
                fft.process(&mut buf);
                for (m, v) in buf.iter_mut().enumerate() {
                    let freq = if 2 * m < na {
                        m as f64
                    } else if 2 * m == na {
                        0.0 // Nyquist mode has no well-defined odd derivative
                    } else {
                        m as f64 - na as f64
                    };
                    *v *= Complex64::new(0.0, freq);
                }
                ifft.process(&mut buf);
                let scale = 1.0 / na as f64;
                for v in buf.iter_mut() {
                    *v *= scale;
                }
                ((i, k), buf)
            })
            .collect();
        for ((i, k), buf) in ring_results {
            for (j, v) in buf.into_iter().enumerate() {
                out[(i * na + j) * nr + k] = v;
            }
        }
        RayField { grid: self.grid.clone(), values: out }
    }

    /// Polar derivative `∂_θ`, using ghost nodes across the poles
    /// (`f(−θ, φ) = f(θ, φ+π)`, valid for any single-valued field).
    pub fn dtheta(&self) -> RayField {
        self.polar_apply(&self.grid.polar_d1)
    }

    /// Polar second derivative `∂_θθ`, taken in one pass so the pole ghost
    /// rule is only ever applied to the field itself (θ-derivatives pick up
    /// a sign across the pole and must not be fed back through it).
    pub fn dtheta2(&self) -> RayField {
        self.polar_apply(&self.grid.polar_d2)
    }

    fn polar_apply(&self, stencils: &[(usize, Vec<f64>)]) -> RayField {
        let np = self.grid.n_polar;
        let na = self.grid.n_azimuth;
        let nr = self.grid.n_radial;
        let g = polar_ghosts(np);
        let values: Vec<Complex64> = (0..np * na)
            .into_par_iter()
            .flat_map_iter(|dir| {
                let i = dir / na;
                let j = dir % na;
                let jj = (j + na / 2) % na; // antipodal azimuth for ghosts
                (0..nr).map(move |k| {
                    let (start, w) = &stencils[i];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (s, ws) in w.iter().enumerate() {
                        let e = start + s; // index on the extended polar axis
                        let v = if e < g {
                            // below θ=0: mirrored node g-1-e with flipped azimuth
                            self.values[((g - 1 - e) * na + jj) * nr + k]
                        } else if e < g + np {
                            self.values[((e - g) * na + j) * nr + k]
                        } else {
                            // beyond θ=π: mirrored node with flipped azimuth
                            let m = np - 1 - (e - g - np);
                            self.values[(m * na + jj) * nr + k]
                        };
                        acc += *ws * v;
                    }
                    acc
                })
            })
            .collect();
        RayField { grid: self.grid.clone(), values }
    }

    /// Cartesian gradient via the spherical chain rule.
    pub fn gradient(&self) -> [RayField; 3] {
        let fr = self.dr();
        let ft = self.dtheta();
        let fp = self.dphi();
        let np = self.grid.n_polar;
        let na = self.grid.n_azimuth;
        let nr = self.grid.n_radial;
        let mut comps = [
            RayField::zeros(self.grid.clone()),
            RayField::zeros(self.grid.clone()),
            RayField::zeros(self.grid.clone()),
        ];
        for i in 0..np {
            let ct = self.grid.cos_theta[i];
            let st = (1.0 - ct * ct).sqrt();
            for j in 0..na {
                let phi = self.grid.phis[j];
                let (cp, sp) = (phi.cos(), phi.sin());
                let rhat = [st * cp, st * sp, ct];
                let that = [ct * cp, ct * sp, -st];
                let phat = [-sp, cp, 0.0];
                let d = i * na + j;
                for k in 0..nr {
                    let r = self.grid.radii[k];
                    let idx = d * nr + k;
                    let dfr = fr.values[idx];
                    let dft = ft.values[idx] / r;
                    let dfp = fp.values[idx] / (r * st);
                    for a in 0..3 {
                        comps[a].values[idx] = rhat[a] * dfr + that[a] * dft + phat[a] * dfp;
                    }
                }
            }
        }
        comps
    }

    /// Laplacian via `(1/r)∂_rr(r f) + (1/r²)Δ_sphere f`.
    pub fn laplacian(&self) -> RayField {
        let rf = self.mul_rpow(1);
        let radial = rf.drr().mul_rpow(-1);
        let ft = self.dtheta();
        let ftt = self.dtheta2();
        let fpp = self.dphi().dphi();
        let np = self.grid.n_polar;
        let na = self.grid.n_azimuth;
        let nr = self.grid.n_radial;
        let mut values = radial.values;
        for i in 0..np {
            let ct = self.grid.cos_theta[i];
            let st2 = 1.0 - ct * ct;
            let cot = ct / st2.sqrt();
            for j in 0..na {
                let d = i * na + j;
                for k in 0..nr {
                    let idx = d * nr + k;
                    let r2 = self.grid.radii[k] * self.grid.radii[k];
                    values[idx] +=
                        (ftt.values[idx] + cot * ft.values[idx] + fpp.values[idx] / st2) / r2;
                }
            }
        }
        RayField { grid: self.grid.clone(), values }
    }

    /// Plot-ready CSV rows: `dir_index,theta,phi,r,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("dir_index,theta,phi,r,re,im\n");
        let na = self.grid.n_azimuth;
        let nr = self.grid.n_radial;
        for d in 0..self.grid.n_dirs() {
            let theta = self.grid.polar_thetas[d / na];
            let phi = self.grid.phis[d % na];
            for k in 0..nr {
                let v = self.values[d * nr + k];
                s.push_str(&format!(
                    "{},{:.12e},{:.12e},{:.12e},{:.14e},{:.14e}\n",
                    d, theta, phi, self.grid.radii[k], v.re, v.im
                ));
            }
        }
        s
    }
}
