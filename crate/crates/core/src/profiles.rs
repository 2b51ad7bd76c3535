//! Slope-±1 piecewise-linear profiles, anisotropic partition profiles and their
//! spectral data (resolvent, moments, energy).
//!
//! A profile with local minima `u_1 > u_2 > ... > u_{n+1}` and local maxima
//! `w_1 > ... > w_n` interlacing as `u_{n+1} < w_n < u_n < ... < w_1 < u_1` is
//!
//! ```text
//! f(c) = Σ_k |c - u_k| - Σ_k |c - w_k|,
//! ```
//!
//! which behaves like `|c - center|` away from its corners, with
//! `center = Σ u_k - Σ w_k`. Bands are the intervals `[w_i, u_i]` (slope −1),
//! gaps the intervals `(u_{i+1}, w_i)` (slope +1). Band `i` and gap `i` carry the
//! same index as the corners `s_{i-1}↑ = u_i`, `s_i↓ = w_i`, `s_i↑ = u_{i+1}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Corners closer than this are merged when a profile is reduced.
pub const MERGE_TOL: f64 = 1e-12;

/// Default absolute tolerance for commensurability tests.
pub const COMMENSURABILITY_TOL: f64 = 1e-9;

/// Anisotropy `(r2, r1)` with `r2 < 0 < r1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Anisotropy {
    pub r2: f64,
    pub r1: f64,
}

impl Anisotropy {
    pub fn new(r2: f64, r1: f64) -> Result<Self> {
        if !(r2 < 0.0 && r1 > 0.0) || !r2.is_finite() || !r1.is_finite() {
            return Err(Error::Domain(format!(
                "anisotropy requires r2 < 0 < r1, got ({r2}, {r1})"
            )));
        }
        Ok(Anisotropy { r2, r1 })
    }

    /// Renormalized anisotropy `(ε₂, ε₁)` for dispersion `eps` and quantization `hbar`.
    pub fn renormalized(eps: f64, hbar: f64) -> Result<Self> {
        let (e1, e2) = renormalize(eps, hbar)?;
        Anisotropy::new(e2, e1)
    }

    /// Unrenormalized anisotropy `(−ℏ/ε̄, ε̄)`.
    pub fn classical(eps: f64, hbar: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("dispersion must be positive, got {eps}")));
        }
        Anisotropy::new(-hbar / eps, eps)
    }

    /// Area `2(−r2)r1` of one rotated `−r2√2 × r1√2` rectangle.
    pub fn cell_area(&self) -> f64 {
        -2.0 * self.r2 * self.r1
    }
}

/// Piecewise-linear profile stored by its corners, both lists descending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Profile {
    center: f64,
    minima: Vec<f64>,
    maxima: Vec<f64>,
}

#[derive(Deserialize)]
struct RawProfile {
    #[allow(dead_code)]
    center: Option<f64>,
    minima: Vec<f64>,
    maxima: Vec<f64>,
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawProfile::deserialize(d)?;
        Profile::from_corners(&raw.minima, &raw.maxima).map_err(serde::de::Error::custom)
    }
}

impl Profile {
    /// Builds a profile from its local minima and maxima (any order).
    pub fn from_corners(minima: &[f64], maxima: &[f64]) -> Result<Self> {
        if minima.len() != maxima.len() + 1 {
            return Err(Error::Ordering(format!(
                "need n+1 minima and n maxima, got {} and {}",
                minima.len(),
                maxima.len()
            )));
        }
        if minima.iter().chain(maxima).any(|x| !x.is_finite()) {
            return Err(Error::Ordering("non-finite corner".into()));
        }
        let mut minima = minima.to_vec();
        let mut maxima = maxima.to_vec();
        minima.sort_by(|a, b| b.total_cmp(a));
        maxima.sort_by(|a, b| b.total_cmp(a));
        for (i, w) in maxima.iter().enumerate() {
            if !(minima[i] > *w && *w > minima[i + 1]) {
                return Err(Error::Ordering(format!(
                    "need {} > {} > {}",
                    minima[i],
                    w,
                    minima[i + 1]
                )));
            }
        }
        let center = minima.iter().sum::<f64>() - maxima.iter().sum::<f64>();
        Ok(Profile {
            center,
            minima,
            maxima,
        })
    }

    /// Builds a reduced profile: adjacent corners closer than [`MERGE_TOL`]
    /// (zero-length bands or gaps) are removed in pairs before validation.
    pub fn reduced(minima: &[f64], maxima: &[f64]) -> Result<Self> {
        if minima.len() != maxima.len() + 1 {
            return Err(Error::Ordering(format!(
                "need n+1 minima and n maxima, got {} and {}",
                minima.len(),
                maxima.len()
            )));
        }
        let mut mins = minima.to_vec();
        let mut maxs = maxima.to_vec();
        mins.sort_by(|a, b| b.total_cmp(a));
        maxs.sort_by(|a, b| b.total_cmp(a));
        // Interleave u1, w1, u2, w2, ..., u_{n+1}.
        let mut walk: Vec<(f64, bool)> = Vec::with_capacity(mins.len() + maxs.len());
        for i in 0..maxs.len() {
            walk.push((mins[i], true));
            walk.push((maxs[i], false));
        }
        walk.push((mins[maxs.len()], true));
        loop {
            let hit = walk
                .windows(2)
                .position(|w| (w[0].0 - w[1].0).abs() < MERGE_TOL);
            match hit {
                Some(i) => {
                    walk.drain(i..i + 2);
                }
                None => break,
            }
        }
        let mins: Vec<f64> = walk.iter().filter(|c| c.1).map(|c| c.0).collect();
        let maxs: Vec<f64> = walk.iter().filter(|c| !c.1).map(|c| c.0).collect();
        Profile::from_corners(&mins, &maxs)
    }

    /// The zero-phase profile `|c − a|`.
    pub fn flat(a: f64) -> Self {
        Profile {
            center: a,
            minima: vec![a],
            maxima: Vec::new(),
        }
    }

    /// Profile of ascending classical parameters `s_n↑ < s_n↓ < ... < s_1↓ < s_0↑`.
    pub fn from_ascending(s: &[f64]) -> Result<Self> {
        if s.len() % 2 != 1 {
            return Err(Error::Ordering(format!(
                "need an odd number of parameters, got {}",
                s.len()
            )));
        }
        let minima: Vec<f64> = s.iter().step_by(2).copied().collect();
        let maxima: Vec<f64> = s.iter().skip(1).step_by(2).copied().collect();
        Profile::from_corners(&minima, &maxima)
    }

    /// Corners in ascending order `s_n↑, s_n↓, ..., s_1↓, s_0↑`.
    pub fn ascending(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.minima.len() + self.maxima.len());
        for i in (0..self.minima.len()).rev() {
            out.push(self.minima[i]);
            if i > 0 {
                out.push(self.maxima[i - 1]);
            }
        }
        out
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn minima(&self) -> &[f64] {
        &self.minima
    }

    pub fn maxima(&self) -> &[f64] {
        &self.maxima
    }

    /// Number of gaps (phases) `n`.
    pub fn phases(&self) -> usize {
        self.maxima.len()
    }

    /// Finite bands `[w_i, u_i]`, `i = 1..n`.
    pub fn bands(&self) -> Vec<(f64, f64)> {
        self.maxima
            .iter()
            .zip(&self.minima)
            .map(|(&w, &u)| (w, u))
            .collect()
    }

    /// Gaps `(u_{i+1}, w_i)`, `i = 1..n`.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        self.maxima
            .iter()
            .zip(&self.minima[1..])
            .map(|(&w, &u)| (u, w))
            .collect()
    }

    pub fn band_lengths(&self) -> Vec<f64> {
        self.bands().iter().map(|(lo, hi)| hi - lo).collect()
    }

    pub fn gap_lengths(&self) -> Vec<f64> {
        self.gaps().iter().map(|(lo, hi)| hi - lo).collect()
    }

    /// Evaluates `f(c)`.
    pub fn eval(&self, c: f64) -> f64 {
        self.minima.iter().map(|u| (c - u).abs()).sum::<f64>()
            - self.maxima.iter().map(|w| (c - w).abs()).sum::<f64>()
    }

    /// Area of `{ |c − center| < y < f(c) }`, integrated exactly piece by piece.
    pub fn area(&self) -> f64 {
        let mut knots = self.ascending();
        knots.push(self.center);
        knots.sort_by(f64::total_cmp);
        let g = |c: f64| self.eval(c) - (c - self.center).abs();
        knots
            .windows(2)
            .map(|w| 0.5 * (w[1] - w[0]) * (g(w[0]) + g(w[1])))
            .sum()
    }

    /// Vertices `(c, f(c))` of the graph, padded by one straight segment on each side.
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        let asc = self.ascending();
        let lo = asc[0];
        let hi = asc[asc.len() - 1];
        let pad = ((hi - lo) / 4.0).max(1.0);
        let mut xs = vec![lo - pad];
        xs.extend(asc);
        xs.push(hi + pad);
        xs.into_iter().map(|c| (c, self.eval(c))).collect()
    }

    /// Plot data as CSV with header `c,f`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("c,f\n");
        for (c, f) in self.vertices() {
            out.push_str(&format!("{c},{f}\n"));
        }
        out
    }

    /// `∏(u − w_k) / ∏(u − u_k)`.
    pub fn resolvent(&self, u: Complex64) -> Result<Complex64> {
        if self
            .minima
            .iter()
            .any(|&m| (u - m).norm() <= f64::EPSILON * (1.0 + m.abs()))
        {
            return Err(Error::Singularity(format!("{u}")));
        }
        let num: Complex64 = self.maxima.iter().map(|&w| u - w).product();
        let den: Complex64 = self.minima.iter().map(|&m| u - m).product();
        Ok(num / den)
    }

    /// Coefficients `T_0..T_lmax` of the expansion `resolvent(u) = Σ T_ℓ u^{−ℓ−1}`,
    /// by long division of the numerator by the denominator polynomial.
    pub fn moments(&self, lmax: usize) -> Vec<f64> {
        let p = monic_from_roots(&self.maxima);
        let q = monic_from_roots(&self.minima);
        let mut t = Vec::with_capacity(lmax + 1);
        for m in 0..=lmax {
            let mut value = p.get(m).copied().unwrap_or(0.0);
            for j in 1..=m.min(q.len() - 1) {
                value -= q[j] * t[m - j];
            }
            t.push(value);
        }
        t
    }

    /// Classical energy `Σ u_k³ − Σ w_k³`.
    pub fn energy(&self) -> f64 {
        self.minima.iter().map(|u| u.powi(3)).sum::<f64>()
            - self.maxima.iter().map(|w| w.powi(3)).sum::<f64>()
    }
}

/// Coefficients `c_0 = 1, c_1, ..., c_n` of `∏(u − r)` in decreasing powers.
fn monic_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        c.push(0.0);
        for j in (1..c.len()).rev() {
            c[j] -= r * c[j - 1];
        }
    }
    c
}

/// Anisotropic partition profile of `λ`: part values scale by `−r2`,
/// multiplicities by `r1`.
pub fn partition_profile(lambda: &Partition, anis: Anisotropy, a: f64) -> Profile {
    let s = -anis.r2;
    let distinct = lambda.distinct_parts();
    let mut minima = Vec::with_capacity(distinct.len() + 1);
    let mut maxima = Vec::with_capacity(distinct.len());
    let mut rows = 0usize;
    for &(p, m) in &distinct {
        minima.push(a + s * p as f64 - anis.r1 * rows as f64);
        rows += m;
        maxima.push(a + s * p as f64 - anis.r1 * rows as f64);
    }
    minima.push(a - anis.r1 * rows as f64);
    Profile::from_corners(&minima, &maxima).expect("partition profiles always interlace")
}

/// Nearest positive integer multiple of `unit`, if within `tol`.
pub fn positive_multiple(length: f64, unit: f64, tol: f64) -> Option<u64> {
    let ratio = length / unit;
    let n = ratio.round();
    if n >= 1.0 && (length - n * unit).abs() <= tol {
        Some(n as u64)
    } else {
        None
    }
}

/// Inverse of [`partition_profile`]: recovers `λ` and the center.
pub fn profile_partition(f: &Profile, anis: Anisotropy, tol: f64) -> Result<(Partition, f64)> {
    let bands = f.band_lengths();
    let gaps = f.gap_lengths();
    let n = bands.len();
    let mut mult = Vec::with_capacity(n);
    for (i, &b) in bands.iter().enumerate() {
        mult.push(
            positive_multiple(b, anis.r1, tol).ok_or_else(|| Error::Incommensurable {
                what: format!("band {}", i + 1),
                length: b,
                unit: anis.r1,
            })? as usize,
        );
    }
    // Part values accumulate from the bottom gap upward.
    let mut values = vec![0usize; n + 1];
    for i in (0..n).rev() {
        let step = positive_multiple(gaps[i], -anis.r2, tol).ok_or_else(|| {
            Error::Incommensurable {
                what: format!("gap {}", i + 1),
                length: gaps[i],
                unit: -anis.r2,
            }
        })? as usize;
        values[i] = values[i + 1] + step;
    }
    let mut parts = Vec::new();
    for i in 0..n {
        parts.extend(std::iter::repeat(values[i]).take(mult[i]));
    }
    let lambda = Partition::new(parts)?;
    let a = f.minima()[0] + anis.r2 * values[0] as f64;
    Ok((lambda, a))
}

/// Renormalized pair `(ε₁, ε₂)`: the roots of `r² − ε̄r − ℏ`.
pub fn renormalize(eps: f64, hbar: f64) -> Result<(f64, f64)> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::Domain(format!("eps must be non-negative, got {eps}")));
    }
    let root = (eps * eps + 4.0 * hbar).sqrt();
    let e1 = 0.5 * (eps + root);
    let e2 = -hbar / e1;
    Ok((e1, e2))
}

/// Outcome of a band/gap commensurability test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizationReport {
    pub band_unit: f64,
    pub gap_unit: f64,
    /// `N_i` for bands `i = 1..n`, or `None` if any band failed.
    pub band_multipliers: Option<Vec<u64>>,
    /// `N_i'` for gaps `i = 1..n`, or `None` if any gap failed.
    pub gap_multipliers: Option<Vec<u64>>,
    pub renormalized: bool,
    pub failures: Vec<String>,
}

impl QuantizationReport {
    pub fn pass(&self) -> bool {
        self.band_multipliers.is_some() && self.gap_multipliers.is_some()
    }
}

/// Tests band lengths against `ε̄` (or `ε₁`) and gap lengths against `ℏ/ε̄` (or `−ε₂`).
pub fn check_quantization(
    f: &Profile,
    eps: f64,
    hbar: f64,
    use_renormalized: bool,
    tol: f64,
) -> Result<QuantizationReport> {
    let anis = if use_renormalized {
        Anisotropy::renormalized(eps, hbar)?
    } else {
        Anisotropy::classical(eps, hbar)?
    };
    Ok(multiplier_report(f, anis, use_renormalized, tol))
}

/// Band multipliers in units of `r1`, gap multipliers in units of `−r2`.
pub fn multiplier_report(f: &Profile, anis: Anisotropy, renormalized: bool, tol: f64) -> QuantizationReport {
    let mut failures = Vec::new();
    let mut collect = |lengths: Vec<f64>, unit: f64, what: &str| -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(lengths.len());
        let mut ok = true;
        for (i, len) in lengths.into_iter().enumerate() {
            match positive_multiple(len, unit, tol) {
                Some(n) => out.push(n),
                None => {
                    ok = false;
                    failures.push(format!("{what} {}: length {len} vs unit {unit}", i + 1));
                }
            }
        }
        ok.then_some(out)
    };
    let band_multipliers = collect(f.band_lengths(), anis.r1, "band");
    let gap_multipliers = collect(f.gap_lengths(), -anis.r2, "gap");
    QuantizationReport {
        band_unit: anis.r1,
        gap_unit: -anis.r2,
        band_multipliers,
        gap_multipliers,
        renormalized,
        failures,
    }
}
