//! Fractional Brownian motion: closed-form covariance, exact Cholesky path
//! generation on arbitrary grids, and circulant embedding (Davies-Harte) on
//! uniform grids.
//!
//! The covariance is `cov(B_s, B_t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2`.
//! Both simulators are driven by one counter-based stream per path
//! ([`crate::rng::path_normals`]), so output is independent of worker count
//! and bit-identical for a fixed seed.

use crate::parallel::map_indexed;
use crate::rng::path_normals;
use nalgebra::DMatrix;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use statrs::function::gamma::gamma;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FbmError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("covariance matrix is not positive definite (degenerate grid?)")]
    CholeskyFailed,
    #[error("times must be uniformly spaced for circulant embedding")]
    NonUniformTimes,
    #[error(
        "circulant embedding has a negative eigenvalue {most_negative:e} \
         (max {max_eigenvalue:e}); pad the embedding or fall back to Cholesky"
    )]
    EmbeddingNotPsd { most_negative: f64, max_eigenvalue: f64 },
}

/// Simulation grid for fBm paths.
#[derive(Debug, Clone)]
pub struct FbmGrid {
    pub hurst: f64,
    pub times: Vec<f64>,
    pub n_paths: usize,
    pub seed: u64,
}

impl FbmGrid {
    pub fn new(hurst: f64, times: Vec<f64>, n_paths: usize, seed: u64) -> Result<Self, FbmError> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(FbmError::Domain(format!("hurst {hurst} outside (0,1)")));
        }
        if times.is_empty() {
            return Err(FbmError::Domain("empty time grid".into()));
        }
        if times[0] < 0.0 {
            return Err(FbmError::Domain("negative time".into()));
        }
        if !times.windows(2).all(|w| w[1] > w[0]) {
            return Err(FbmError::Domain("times must be strictly increasing".into()));
        }
        if n_paths == 0 {
            return Err(FbmError::Domain("n_paths must be positive".into()));
        }
        Ok(Self { hurst, times, n_paths, seed })
    }

    /// Uniform grid `dt, 2dt, ..., n*dt`.
    pub fn uniform(hurst: f64, dt: f64, n_times: usize, n_paths: usize, seed: u64) -> Result<Self, FbmError> {
        if dt <= 0.0 {
            return Err(FbmError::Domain("dt must be positive".into()));
        }
        let times = (1..=n_times).map(|i| i as f64 * dt).collect();
        Self::new(hurst, times, n_paths, seed)
    }
}

/// Power-law kernel `t^{H-1/2} / Gamma(H+1/2)` of the rough driver.
#[derive(Debug, Clone, Copy)]
pub struct KernelSpec {
    pub hurst: f64,
    pub gamma_factor: f64,
}

impl KernelSpec {
    pub fn new(hurst: f64) -> Result<Self, FbmError> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(FbmError::Domain(format!("hurst {hurst} outside (0,1)")));
        }
        Ok(Self { hurst, gamma_factor: 1.0 / gamma(hurst + 0.5) })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.gamma_factor * t.powf(self.hurst - 0.5)
    }
}

/// Row-major matrix of simulated paths, one row per path.
#[derive(Debug, Clone)]
pub struct PathMatrix {
    data: Vec<f64>,
    pub n_paths: usize,
    pub n_times: usize,
}

impl PathMatrix {
    fn from_rows(rows: Vec<Vec<f64>>, n_times: usize) -> Self {
        let n_paths = rows.len();
        let mut data = Vec::with_capacity(n_paths * n_times);
        for r in rows {
            debug_assert_eq!(r.len(), n_times);
            data.extend_from_slice(&r);
        }
        Self { data, n_paths, n_times }
    }

    pub fn path(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_times..(i + 1) * self.n_times]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_paths).map(|i| self.data[i * self.n_times + j]).collect()
    }

    /// Sample covariance matrix across paths (columns = grid times).
    pub fn sample_covariance(&self) -> DMatrix<f64> {
        let n = self.n_times;
        let p = self.n_paths as f64;
        let mut means = vec![0.0; n];
        for i in 0..self.n_paths {
            let row = self.path(i);
            for (m, x) in means.iter_mut().zip(row) {
                *m += x;
            }
        }
        for m in means.iter_mut() {
            *m /= p;
        }
        let mut cov = DMatrix::zeros(n, n);
        for i in 0..self.n_paths {
            let row = self.path(i);
            for a in 0..n {
                let da = row[a] - means[a];
                for b in a..n {
                    cov[(a, b)] += da * (row[b] - means[b]);
                }
            }
        }
        for a in 0..n {
            for b in a..n {
                let v = cov[(a, b)] / (p - 1.0);
                cov[(a, b)] = v;
                cov[(b, a)] = v;
            }
        }
        cov
    }
}

/// Closed-form fBm covariance `(s^{2H} + t^{2H} - |t-s|^{2H}) / 2`.
pub fn fbm_covariance(s: f64, t: f64, hurst: f64) -> Result<f64, FbmError> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(FbmError::Domain(format!("hurst {hurst} outside (0,1)")));
    }
    if s < 0.0 || t < 0.0 {
        return Err(FbmError::Domain("times must be nonnegative".into()));
    }
    let two_h = 2.0 * hurst;
    Ok(0.5 * (s.powf(two_h) + t.powf(two_h) - (t - s).abs().powf(two_h)))
}

/// Exact covariance matrix on a grid.
pub fn covariance_matrix(times: &[f64], hurst: f64) -> Result<DMatrix<f64>, FbmError> {
    let n = times.len();
    let mut c = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = fbm_covariance(times[i], times[j], hurst)?;
            c[(i, j)] = v;
            c[(j, i)] = v;
        }
    }
    Ok(c)
}

/// Exact fBm sampling via Cholesky factorization of the grid covariance.
///
/// A leading `t = 0` grid point is pinned to zero rather than factorizing a
/// singular matrix.
pub fn simulate_fbm_cholesky(grid: &FbmGrid) -> Result<PathMatrix, FbmError> {
    let has_zero = grid.times[0] == 0.0;
    let active: &[f64] = if has_zero { &grid.times[1..] } else { &grid.times };
    let n_active = active.len();

    let chol = if n_active > 0 {
        let cov = covariance_matrix(active, grid.hurst)?;
        Some(cov.cholesky().ok_or(FbmError::CholeskyFailed)?)
    } else {
        None
    };
    let l = chol.map(|c| c.unpack());

    let n_times = grid.times.len();
    let rows = map_indexed(grid.n_paths, |p| {
        let mut stream = path_normals(grid.seed, p as u64);
        let mut row = Vec::with_capacity(n_times);
        if has_zero {
            row.push(0.0);
        }
        if let Some(l) = &l {
            let mut z = vec![0.0; n_active];
            stream.fill_normals(&mut z);
            for i in 0..n_active {
                let mut acc = 0.0;
                for j in 0..=i {
                    acc += l[(i, j)] * z[j];
                }
                row.push(acc);
            }
        }
        row
    });
    Ok(PathMatrix::from_rows(rows, n_times))
}

/// How close to zero a circulant eigenvalue may dip before the embedding is
/// rejected instead of clipped.
const EMBEDDING_CLIP_TOL: f64 = 1e-10;

struct CirculantEmbedding {
    sqrt_eig: Vec<f64>,
    size: usize,
}

fn fgn_autocovariance(lag: usize, hurst: f64, dt: f64) -> f64 {
    let k = lag as f64;
    let two_h = 2.0 * hurst;
    0.5 * dt.powf(two_h)
        * ((k + 1.0).powf(two_h) + (k - 1.0).abs().powf(two_h) - 2.0 * k.powf(two_h))
}

fn build_embedding(m: usize, hurst: f64, dt: f64) -> Result<CirculantEmbedding, FbmError> {
    let size = (2 * m.max(1)).next_power_of_two();
    let half = size / 2;
    let mut row: Vec<Complex64> = Vec::with_capacity(size);
    for j in 0..=half {
        row.push(Complex64::new(fgn_autocovariance(j, hurst, dt), 0.0));
    }
    for j in (1..half).rev() {
        row.push(Complex64::new(fgn_autocovariance(j, hurst, dt), 0.0));
    }
    debug_assert_eq!(row.len(), size);

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(size);
    fft.process(&mut row);

    let eig: Vec<f64> = row.iter().map(|c| c.re).collect();
    let max_eigenvalue = eig.iter().cloned().fold(f64::MIN, f64::max);
    let most_negative = eig.iter().cloned().fold(f64::MAX, f64::min);
    if most_negative < -EMBEDDING_CLIP_TOL * max_eigenvalue {
        return Err(FbmError::EmbeddingNotPsd { most_negative, max_eigenvalue });
    }
    let sqrt_eig = eig.iter().map(|&e| e.max(0.0).sqrt()).collect();
    Ok(CirculantEmbedding { sqrt_eig, size })
}

/// fBm sampling by circulant embedding of the increment process, O(M log M)
/// per path. Requires a uniform grid starting at `0` or at one spacing `dt`.
///
/// Tiny negative embedding eigenvalues (within `1e-10` of the largest, in
/// relative terms) are clipped to zero; anything worse raises
/// [`FbmError::EmbeddingNotPsd`] so the caller can pad or use Cholesky.
pub fn simulate_fbm_circulant(grid: &FbmGrid) -> Result<PathMatrix, FbmError> {
    let times = &grid.times;
    let has_zero = times[0] == 0.0;
    let steps: Vec<f64> = if has_zero {
        times.windows(2).map(|w| w[1] - w[0]).collect()
    } else {
        let mut s = vec![times[0]];
        s.extend(times.windows(2).map(|w| w[1] - w[0]));
        s
    };
    if steps.is_empty() {
        // single point at t=0
        return Ok(PathMatrix::from_rows(vec![vec![0.0]; grid.n_paths], 1));
    }
    let dt = steps[0];
    if !steps.iter().all(|&s| (s - dt).abs() <= 1e-9 * dt.max(1.0)) {
        return Err(FbmError::NonUniformTimes);
    }

    let m = steps.len();
    let emb = build_embedding(m, grid.hurst, dt)?;
    let size = emb.size;
    let half = size / 2;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(size);
    let scale = 1.0 / (size as f64).sqrt();

    let n_times = times.len();
    let rows = map_indexed(grid.n_paths, |p| {
        let mut stream = path_normals(grid.seed, p as u64);
        let mut w = vec![Complex64::new(0.0, 0.0); size];
        w[0] = Complex64::new(emb.sqrt_eig[0] * stream.next_normal(), 0.0);
        for j in 1..half {
            let a = stream.next_normal();
            let b = stream.next_normal();
            let s = emb.sqrt_eig[j] * std::f64::consts::FRAC_1_SQRT_2;
            w[j] = Complex64::new(s * a, s * b);
            w[size - j] = w[j].conj();
        }
        w[half] = Complex64::new(emb.sqrt_eig[half] * stream.next_normal(), 0.0);

        let mut buf = w;
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(&mut buf, &mut scratch);

        let mut row = Vec::with_capacity(n_times);
        let mut acc = 0.0;
        if has_zero {
            row.push(0.0);
        }
        for item in buf.iter().take(m) {
            acc += item.re * scale;
            row.push(acc);
        }
        row
    });
    Ok(PathMatrix::from_rows(rows, n_times))
}
