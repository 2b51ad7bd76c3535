//! Classical multi-phase solutions and their Fourier data.
//!
//! The `n`-phase field is evaluated from the Dobrokhotov–Krichever determinant
//!
//! ```text
//! v = s_n↑ − Σ_i (s_{i−1}↑ − s_i↓) − 2ε̄ Im ∂ₓ log det M,
//! M_ij = (−1 + δ_ij Z_i e^{−iθ_i}) / (s_{i−1}↑ − s_j↓),
//! θ_i = (s_{i−1}↑ − s_i↓)/ε̄ · (x − χ_i − (s_i↓ + s_{i−1}↑) t / 2).
//! ```
//!
//! The phase enters as `e^{−iθ}`; with `e^{+iθ}` the same expression has mean
//! `s_n↑ − 3Σ(band)` instead of `Σs↑ − Σs↓` and does not solve the equation.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::Profile;

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_DT: f64 = 1e-6;
pub const PERIODICITY_TOL: f64 = 1e-9;

/// Spectral parameters, phases and dispersion of an `n`-phase solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseParams {
    /// Ascending: `s_n↑ < s_n↓ < ... < s_1↑ < s_1↓ < s_0↑`.
    s: Vec<f64>,
    /// `chi[i-1]` is the phase `χ_i`.
    chi: Vec<f64>,
    eps: f64,
}

impl PhaseParams {
    pub fn new(s: Vec<f64>, chi: Vec<f64>, eps: f64) -> Result<Self> {
        if s.len() % 2 != 1 || chi.len() != s.len() / 2 {
            return Err(Error::Invalid(format!(
                "need 2n+1 parameters and n phases, got {} and {}",
                s.len(),
                chi.len()
            )));
        }
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("eps must be positive, got {eps}")));
        }
        if s.iter().chain(&chi).any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite parameter".into()));
        }
        if let Some(w) = s.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::Ordering(format!(
                "parameters must increase strictly: {} !< {}",
                w[0], w[1]
            )));
        }
        Ok(PhaseParams { s, chi, eps })
    }

    /// The 1-phase parameters `(s_1↑, s_1↓, s_0↑)`.
    pub fn one_phase(s: [f64; 3], chi1: f64, eps: f64) -> Result<Self> {
        PhaseParams::new(s.to_vec(), vec![chi1], eps)
    }

    pub fn phases(&self) -> usize {
        self.chi.len()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    pub fn with_chi(&self, chi: Vec<f64>) -> Result<Self> {
        PhaseParams::new(self.s.clone(), chi, self.eps)
    }

    /// `s_i↑`, `i = 0..=n`.
    pub fn up(&self, i: usize) -> f64 {
        self.s[2 * (self.phases() - i)]
    }

    /// `s_i↓`, `i = 1..=n`.
    pub fn down(&self, i: usize) -> f64 {
        self.s[2 * (self.phases() - i) + 1]
    }

    /// Length of band `i`: `s_{i−1}↑ − s_i↓`.
    pub fn band(&self, i: usize) -> f64 {
        self.up(i - 1) - self.down(i)
    }

    /// Length of gap `i`: `s_i↓ − s_i↑`.
    pub fn gap(&self, i: usize) -> f64 {
        self.down(i) - self.up(i)
    }

    /// Mean of the field, `Σ s↑ − Σ s↓`.
    pub fn center(&self) -> f64 {
        let n = self.phases();
        (0..=n).map(|i| self.up(i)).sum::<f64>() - (1..=n).map(|i| self.down(i)).sum::<f64>()
    }

    /// Wavespeed of phase `i`, the midpoint of band `i`.
    pub fn wavespeed(&self, i: usize) -> f64 {
        0.5 * (self.down(i) + self.up(i - 1))
    }

    pub fn profile(&self) -> Profile {
        Profile::from_ascending(&self.s).expect("ordering checked on construction")
    }

    /// `Z_i`, `i = 1..=n`.
    pub fn z(&self, i: usize) -> f64 {
        let n = self.phases();
        let mut z = ((self.up(i - 1) - self.up(n)) / (self.down(i) - self.up(n))).sqrt();
        for j in (1..=n).filter(|&j| j != i) {
            let num = (self.down(i) - self.down(j)) * (self.up(i - 1) - self.up(j - 1));
            let den = (self.up(i - 1) - self.down(j)) * (self.down(i) - self.up(j - 1));
            z *= (num / den).sqrt();
        }
        z
    }
}

/// Closed form of the 1-phase traveling wave `s_1↑ + b² / (b + 2g − 2√(g(b+g)) cos(b ξ/ε̄))`,
/// with band `b = s_0↑ − s_1↓`, gap `g = s_1↓ − s_1↑` and `ξ = x − χ_1 − c_1 t`.
pub fn one_phase(s: [f64; 3], chi1: f64, eps: f64, x: f64, t: f64) -> Result<f64> {
    let p = PhaseParams::one_phase(s, chi1, eps)?;
    let [s1u, s1d, s0u] = s;
    let band = s0u - s1d;
    let gap = s1d - s1u;
    let xi = x - chi1 - p.wavespeed(1) * t;
    let den = (s0u - s1u) + gap - 2.0 * ((s0u - s1u) * gap).sqrt() * (band * xi / eps).cos();
    Ok(s1u + band * band / den)
}

/// Evaluates the `n`-phase solution at `(x, t)`.
pub fn multi_phase(p: &PhaseParams, x: f64, t: f64) -> Result<f64> {
    let n = p.phases();
    let base = p.up(n) - (1..=n).map(|i| p.band(i)).sum::<f64>();
    if n == 0 {
        return Ok(base);
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let mut dm = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..=n {
        for j in 1..=n {
            m[(i - 1, j - 1)] = Complex64::new(-1.0 / (p.up(i - 1) - p.down(j)), 0.0);
        }
        let k = p.band(i) / p.eps;
        let theta = k * (x - p.chi[i - 1] - p.wavespeed(i) * t);
        let e = Complex64::from_polar(p.z(i) / p.band(i), -theta);
        m[(i - 1, i - 1)] += e;
        dm[(i - 1, i - 1)] = Complex64::new(0.0, -k) * e;
    }
    let lu = m.lu();
    let sol = lu.solve(&dm).ok_or_else(|| Error::SingularMatrix {
        context: format!("multi-phase matrix at x = {x}, t = {t}"),
    })?;
    let trace = sol.trace();
    if !trace.re.is_finite() || !trace.im.is_finite() {
        return Err(Error::SingularMatrix {
            context: format!("multi-phase matrix at x = {x}, t = {t}"),
        });
    }
    Ok(base - 2.0 * p.eps * trace.im)
}

/// Band multipliers `N_i = band_i / ε̄`, indexed `i = 1..=n`.
pub fn periodicity_check(p: &PhaseParams, tol: f64) -> Result<Vec<u64>> {
    (1..=p.phases())
        .map(|i| {
            crate::profiles::positive_multiple(p.band(i), p.eps, tol).ok_or_else(|| {
                Error::Incommensurable {
                    what: format!("band {i}"),
                    length: p.band(i),
                    unit: p.eps,
                }
            })
        })
        .collect()
}

/// Samples of a field at `x_j = 2πj/M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub samples: Vec<f64>,
    pub time: f64,
}

impl GridField {
    pub fn new(samples: Vec<f64>, time: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Invalid("grid needs at least two samples".into()));
        }
        Ok(GridField { samples, time })
    }

    pub fn sample(p: &PhaseParams, m: usize, t: f64) -> Result<Self> {
        let samples = (0..m)
            .into_par_iter()
            .map(|j| multi_phase(p, grid_point(j, m), t))
            .collect::<Result<Vec<_>>>()?;
        GridField::new(samples, t)
    }

    pub fn from_fn(m: usize, t: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        GridField::new((0..m).map(|j| f(grid_point(j, m))).collect(), t)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let m = self.len();
        self.samples
            .iter()
            .enumerate()
            .map(move |(j, &v)| (grid_point(j, m), v))
    }

    /// Parses two-column `x,v` CSV (header optional).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut cols = line.split(',');
            let (Some(_), Some(v)) = (cols.next(), cols.next()) else {
                return Err(Error::Invalid(format!("bad CSV line {line:?}")));
            };
            match v.trim().parse::<f64>() {
                Ok(v) => samples.push(v),
                Err(_) if samples.is_empty() => continue,
                Err(e) => return Err(Error::Invalid(format!("bad value {v:?}: {e}"))),
            }
        }
        GridField::new(samples, 0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,v\n");
        for (x, v) in self.points() {
            out.push_str(&format!("{x},{v}\n"));
        }
        out
    }
}

pub fn grid_point(j: usize, m: usize) -> f64 {
    2.0 * PI * j as f64 / m as f64
}

/// Real periodic field `v(x) = Σ_k V_k e^{−ikx}` with `V_0 = a` and `V_{−k} = conj(V_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierField {
    pub a: f64,
    /// `modes[k-1] = V_k`.
    pub modes: Vec<Complex64>,
}

impl FourierField {
    pub fn constant(a: f64) -> Self {
        FourierField {
            a,
            modes: Vec::new(),
        }
    }

    /// `a + 2δ cos(kx)`.
    pub fn cosine(a: f64, delta: f64, k: usize) -> Self {
        let mut modes = vec![Complex64::new(0.0, 0.0); k];
        if k > 0 {
            modes[k - 1] = Complex64::new(delta, 0.0);
        }
        FourierField { a, modes }
    }

    /// Largest retained mode index.
    pub fn bandwidth(&self) -> usize {
        self.modes
            .iter()
            .rposition(|v| v.norm() != 0.0)
            .map_or(0, |k| k + 1)
    }

    /// `V_k` for any integer `k`.
    pub fn mode(&self, k: i64) -> Complex64 {
        match k {
            0 => Complex64::new(self.a, 0.0),
            k if k > 0 => self
                .modes
                .get(k as usize - 1)
                .copied()
                .unwrap_or_default(),
            k => self.mode(-k).conj(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.a
            + 2.0
                * self
                    .modes
                    .iter()
                    .enumerate()
                    .map(|(k, v)| (v * Complex64::from_polar(1.0, -((k + 1) as f64) * x)).re)
                    .sum::<f64>()
    }

    /// `Σ_{k>0} |V_k|²`.
    pub fn energy(&self) -> f64 {
        self.modes.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn truncated(&self, k: usize) -> Self {
        FourierField {
            a: self.a,
            modes: self.modes.iter().take(k).copied().collect(),
        }
    }
}

/// `V_k = (1/M) Σ_j v(x_j) e^{ikx_j}` for `k = 0..M/2−1`.
pub fn fourier(g: &GridField) -> FourierField {
    let m = g.len();
    let mut buf: Vec<Complex64> = g.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let kmax = (m / 2).saturating_sub(1);
    FourierField {
        a: buf[0].re * scale,
        modes: buf[1..=kmax].iter().map(|c| c * scale).collect(),
    }
}

/// Sup-norm over the `m`-point grid of `∂ₜv + v∂ₓv − (ε̄/2)J[∂ₓ²v]` for the
/// `n`-phase solution, with `∂ₜ` by central difference.
pub fn bo_residual(p: &PhaseParams, m: usize, dt: f64) -> Result<f64> {
    periodicity_check(p, PERIODICITY_TOL)?;
    residual_of(|x, t| multi_phase(p, x, t), p.eps, m, dt)
}

/// Residual of an arbitrary `2π`-periodic field given as a function of `(x, t)`.
///
/// Spatial derivatives and `J` are Fourier multipliers. The spectral grid is
/// refined by doubling (up to 16×) until the top octave of modes is below
/// `1e−13` relative to the field, and the residual is read off on the `m`-point grid.
pub fn residual_of<F>(field: F, eps: f64, m: usize, dt: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    if m < 2 || !(dt > 0.0) {
        return Err(Error::Invalid(format!("need m >= 2 and dt > 0, got {m}, {dt}")));
    }
    let sample = |len: usize, t: f64| -> Result<Vec<f64>> {
        (0..len)
            .into_par_iter()
            .map(|j| field(grid_point(j, len), t))
            .collect()
    };
    let mut planner = FftPlanner::<f64>::new();
    let mut len = m;
    let (values, coeffs) = loop {
        let values = sample(len, 0.0)?;
        let mut coeffs: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        planner.plan_fft_forward(len).process(&mut coeffs);
        let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs())) * len as f64;
        let tail = (len / 4..=len / 2)
            .map(|k| coeffs[k].norm())
            .fold(0.0f64, f64::max);
        if tail <= 1e-13 * scale || len >= 16 * m {
            break (values, coeffs);
        }
        len *= 2;
    };
    let stride = len / m;
    let apply = |mult: &dyn Fn(f64) -> Complex64, planner: &mut FftPlanner<f64>| -> Vec<f64> {
        let mut buf: Vec<Complex64> = coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if 2 * j == len {
                    return Complex64::new(0.0, 0.0);
                }
                let k = if 2 * j < len { j as f64 } else { j as f64 - len as f64 };
                c * mult(k)
            })
            .collect();
        planner.plan_fft_inverse(len).process(&mut buf);
        buf.iter().map(|c| c.re / len as f64).collect()
    };
    let vx = apply(&|k| Complex64::new(0.0, k), &mut planner);
    // J e^{ikx} = −i sgn(k) e^{ikx} and ∂ₓ² e^{ikx} = −k² e^{ikx}.
    let jvxx = apply(&|k| Complex64::new(0.0, k.signum() * k * k), &mut planner);
    let coarse: Vec<usize> = (0..m).map(|j| j * stride).collect();
    let plus: Vec<f64> = coarse
        .par_iter()
        .map(|&j| field(grid_point(j, len), dt))
        .collect::<Result<_>>()?;
    let minus: Vec<f64> = coarse
        .par_iter()
        .map(|&j| field(grid_point(j, len), -dt))
        .collect::<Result<_>>()?;
    Ok(coarse
        .iter()
        .enumerate()
        .map(|(c, &j)| {
            let vt = (plus[c] - minus[c]) / (2.0 * dt);
            (vt + values[j] * vx[j] - 0.5 * eps * jvxx[j]).abs()
        })
        .fold(0.0, f64::max))
}

/// Action of the Liouville form `2 Σ_k k⁻¹ Re V_k d Im V_k` around the cycle
/// with winding numbers `winding`: along `t ∈ [0, 1)` phase `j` moves by
/// `winding[j-1] · t · 2π/N_j`, evaluated at `t = 0` in time.
///
/// `samples` points on the loop; modes `V_1..V_K` from a `2(K+1)`-point grid.
pub fn cycle_action(p: &PhaseParams, winding: &[i64], samples: usize, k_modes: usize) -> Result<f64> {
    if winding.len() != p.phases() {
        return Err(Error::Invalid(format!(
            "winding vector has {} entries, expected {}",
            winding.len(),
            p.phases()
        )));
    }
    if samples < 4 || k_modes < 1 {
        return Err(Error::Invalid("need samples >= 4 and K >= 1".into()));
    }
    let periods: Vec<f64> = periodicity_check(p, PERIODICITY_TOL)?
        .into_iter()
        .map(|n| 2.0 * PI / n as f64)
        .collect();
    let grid = 2 * (k_modes + 1);
    let loop_modes: Vec<Vec<Complex64>> = (0..samples)
        .into_par_iter()
        .map(|j| {
            let t = j as f64 / samples as f64;
            let chi: Vec<f64> = p
                .chi
                .iter()
                .zip(winding.iter().zip(&periods))
                .map(|(&c, (&w, &per))| c + w as f64 * t * per)
                .collect();
            let q = p.with_chi(chi)?;
            Ok(fourier(&GridField::sample(&q, grid, 0.0)?).modes)
        })
        .collect::<Result<_>>()?;
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(samples);
    let inv = planner.plan_fft_inverse(samples);
    let mut total = 0.0;
    for k in 1..=k_modes {
        // d Im V_k / dt by spectral differentiation along the loop.
        let mut im: Vec<Complex64> = loop_modes
            .iter()
            .map(|m| Complex64::new(m[k - 1].im, 0.0))
            .collect();
        fwd.process(&mut im);
        for (j, c) in im.iter_mut().enumerate() {
            let h = if 2 * j < samples {
                j as f64
            } else if 2 * j == samples {
                0.0
            } else {
                j as f64 - samples as f64
            };
            *c *= Complex64::new(0.0, 2.0 * PI * h) / samples as f64;
        }
        inv.process(&mut im);
        let integral: f64 = loop_modes
            .iter()
            .zip(&im)
            .map(|(m, d)| m[k - 1].re * d.re)
            .sum::<f64>()
            / samples as f64;
        total += 2.0 * integral / k as f64;
    }
    Ok(total)
}

fn check_phase_index(p: &PhaseParams, i: usize) -> Result<()> {
    if i == 0 || i > p.phases() {
        return Err(Error::Invalid(format!(
            "phase index {i} out of range 1..={}",
            p.phases()
        )));
    }
    Ok(())
}

/// Action around the loop `χ_i ∈ [0, 2π/N_i)` with every other phase fixed.
///
/// For several phases this collects the gaps `i..=n` together:
/// the result is `2πε̄ Σ_{j≥i} gap_j`.
pub fn phase_loop_action(p: &PhaseParams, i: usize, samples: usize, k_modes: usize) -> Result<f64> {
    check_phase_index(p, i)?;
    let mut w = vec![0; p.phases()];
    w[i - 1] = 1;
    cycle_action(p, &w, samples, k_modes)
}

/// Action of the cycle dual to gap `i`: `χ_i` advances one period while
/// `χ_{i+1}` (if present) retreats one period. Approximates `2πε̄·gap_i`.
pub fn gfz_action(p: &PhaseParams, i: usize, samples: usize, k_modes: usize) -> Result<f64> {
    check_phase_index(p, i)?;
    let mut w = vec![0; p.phases()];
    w[i - 1] = 1;
    if i < p.phases() {
        w[i] = -1;
    }
    cycle_action(p, &w, samples, k_modes)
}

/// Action along cycle `i` with its predicted value `2πε̄·gap_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionReport {
    pub i: usize,
    pub action: f64,
    pub target: f64,
}

pub fn action_report(p: &PhaseParams, i: usize, samples: usize, k_modes: usize) -> Result<ActionReport> {
    let action = gfz_action(p, i, samples, k_modes)?;
    Ok(ActionReport {
        i,
        action,
        target: 2.0 * PI * p.eps * p.gap(i),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> PhaseParams {
        PhaseParams::one_phase([-1.0, 0.0, 2.0], 0.0, 1.0).unwrap()
    }

    fn two() -> PhaseParams {
        PhaseParams::new(vec![-6.0, -4.5, -3.5, -3.0, -1.0], vec![0.3, 1.1], 1.0).unwrap()
    }

    #[test]
    fn one_phase_values() {
        assert_eq!(one().wavespeed(1), 1.0);
        let v = one_phase([-1.0, 0.0, 2.0], 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!((v - (3.0 + 2.0 * 3f64.sqrt())).abs() < 1e-12);
        let g = GridField::from_fn(1024, 0.0, |x| {
            one_phase([-1.0, 0.0, 2.0], 0.0, 1.0, x, 0.0).unwrap()
        })
        .unwrap();
        let mean = g.samples.iter().sum::<f64>() / 1024.0;
        assert!((mean - 1.0).abs() < 1e-12);
        assert!(one_phase([0.0, -1.0, 2.0], 0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn multi_phase_reduces_to_one_phase() {
        let p = PhaseParams::one_phase([-1.3, 0.2, 2.7], 0.4, 0.7).unwrap();
        for j in 0..256 {
            let x = grid_point(j, 256);
            for t in [0.0, 0.37] {
                let a = multi_phase(&p, x, t).unwrap();
                let b = one_phase([-1.3, 0.2, 2.7], 0.4, 0.7, x, t).unwrap();
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn zero_phase_is_constant() {
        let p = PhaseParams::new(vec![1.25], vec![], 1.0).unwrap();
        assert_eq!(multi_phase(&p, 0.3, 2.0).unwrap(), 1.25);
    }

    #[test]
    fn two_phase_mean_is_center() {
        let p = two();
        assert_eq!(p.center(), -3.0);
        let g = GridField::sample(&p, 256, 0.0).unwrap();
        let mean = g.samples.iter().sum::<f64>() / 256.0;
        assert!((mean + 3.0).abs() < 1e-10, "{mean}");
    }

    #[test]
    fn periodicity() {
        assert_eq!(periodicity_check(&one(), 1e-9).unwrap(), vec![2]);
        assert_eq!(periodicity_check(&two(), 1e-9).unwrap(), vec![2, 1]);
        let p = PhaseParams::one_phase([-1.0, 0.0, 2.0], 0.0, 0.8).unwrap();
        assert!(matches!(
            periodicity_check(&p, 1e-9),
            Err(Error::Incommensurable { .. })
        ));
    }

    #[test]
    fn spatial_and_phase_periodicity() {
        let p = two();
        for j in 0..64 {
            let x = 0.1 * j as f64;
            let v = multi_phase(&p, x, 0.2).unwrap();
            assert!((multi_phase(&p, x + 2.0 * PI, 0.2).unwrap() - v).abs() < 1e-10);
            // Quasi-periodicity in χ_1 (N_1 = 2) and χ_2 (N_2 = 1).
            let q = p.with_chi(vec![0.3 + PI, 1.1]).unwrap();
            assert!((multi_phase(&q, x, 0.2).unwrap() - v).abs() < 1e-10);
            let q = p.with_chi(vec![0.3, 1.1 + 2.0 * PI]).unwrap();
            assert!((multi_phase(&q, x, 0.2).unwrap() - v).abs() < 1e-10);
        }
    }

    #[test]
    fn limits_of_one_phase() {
        // Gap closing: the wave flattens to s_0↑.
        let sup = |s: [f64; 3]| {
            (0..200)
                .map(|j| (one_phase(s, 0.0, 1.0, grid_point(j, 200), 0.0).unwrap() - s[2]).abs())
                .fold(0.0, f64::max)
        };
        assert!(sup([-1e-6, 0.0, 2.0]) < 1e-2);
        assert!(sup([-1e-6, 0.0, 2.0]) < sup([-1e-3, 0.0, 2.0]));
        // Band closing: converges to the Lorentzian soliton s_1↑ + 4gε̄²/(ε̄² + 4g²x²).
        let (g, eps) = (1.0, 0.5);
        for b in [1e-2, 1e-3] {
            let err = (0..41)
                .map(|j| {
                    let x = -1.0 + 0.05 * j as f64;
                    let v = one_phase([-1.0, g - 1.0, g - 1.0 + b], 0.0, eps, x, 0.0).unwrap();
                    (v - (-1.0 + 4.0 * g * eps * eps / (eps * eps + 4.0 * g * g * x * x))).abs()
                })
                .fold(0.0, f64::max);
            assert!(err < 20.0 * b, "b = {b}: {err}");
        }
    }

    #[test]
    fn fourier_modes() {
        let g = GridField::from_fn(64, 0.0, f64::cos).unwrap();
        let f = fourier(&g);
        assert!(f.a.abs() < 1e-15);
        assert!((f.modes[0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(f.modes.len(), 31);
        let c = fourier(&GridField::from_fn(32, 0.0, |_| 2.5).unwrap());
        assert!((c.a - 2.5).abs() < 1e-15);
        assert!(c.modes.iter().all(|v| v.norm() < 1e-15));
        // V_k is the coefficient of e^{−ikx}.
        let g = GridField::from_fn(64, 0.0, |x| (3.0 * x).sin()).unwrap();
        let f = fourier(&g);
        assert!((f.modes[2] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((f.eval(0.7) - (2.1f64).sin()).abs() < 1e-14);
    }

    #[test]
    fn residual_vanishes_for_exact_solutions() {
        let r = bo_residual(&one(), 256, 1e-6).unwrap();
        assert!(r < 1e-5, "{r}");
        let constant = PhaseParams::new(vec![0.4], vec![], 1.0).unwrap();
        assert_eq!(bo_residual(&constant, 64, 1e-6).unwrap(), 0.0);
        let p = PhaseParams::one_phase([-1.0, 0.0, 2.0], 0.0, 0.8).unwrap();
        assert!(bo_residual(&p, 64, 1e-6).is_err());
    }

    #[test]
    fn perturbed_field_has_order_one_residual() {
        let p = one();
        let r = residual_of(|x, t| Ok(multi_phase(&p, x, t)? - 0.1), 1.0, 256, 1e-6).unwrap();
        assert!(r > 1e-2, "{r}");
    }

    #[test]
    fn one_phase_action() {
        let a = gfz_action(&one(), 1, 256, 127).unwrap();
        assert!((a - 2.0 * PI).abs() < 1e-4, "{a}");
        assert!(gfz_action(&one(), 2, 256, 127).is_err());
        assert!(gfz_action(&one(), 0, 256, 127).is_err());
    }

    #[test]
    fn degenerate_gap_action_vanishes() {
        let p = PhaseParams::one_phase([-1e-9, 0.0, 2.0], 0.0, 1.0).unwrap();
        assert!(gfz_action(&p, 1, 64, 63).unwrap().abs() < 1e-6);
    }
}
