//! Truncations of the classical Lax operator `L = −ε̄·D + T_v` on Hardy space,
//! `L_{hh'} = −ε̄h δ_{hh'} + V_{h−h'}`, and the spectral data read off from them.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiphase::FourierField;
use crate::profiles::Profile;

pub const DEFAULT_DIM: usize = 512;
pub const DEFAULT_GAP_TOL: f64 = 1e-8;
pub const DEFAULT_DEPTH: usize = 32;
/// Largest negative gap tolerated before interlacing is declared violated.
pub const INTERLACING_TOL: f64 = 1e-10;

/// Finite section `h, h' = 0..N−1` of the Lax operator.
#[derive(Clone, Debug)]
pub struct LaxTruncation {
    pub dim: usize,
    pub eps: f64,
    pub matrix: DMatrix<Complex64>,
}

pub fn lax_matrix(f: &FourierField, eps: f64, n: usize) -> Result<LaxTruncation> {
    if n < 2 {
        return Err(Error::Invalid(format!("truncation needs N >= 2, got {n}")));
    }
    let matrix = DMatrix::from_fn(n, n, |h, hp| {
        let mut entry = f.mode(h as i64 - hp as i64);
        if h == hp {
            entry -= eps * h as f64;
        }
        entry
    });
    Ok(LaxTruncation {
        dim: n,
        eps,
        matrix,
    })
}

impl LaxTruncation {
    /// Max-row-sum norm, an upper bound for the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

/// Eigenvalues `C_0↑ > C_1↑ > ...` with spectral weights `|⟨0|ψ_h⟩|²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralLadder {
    pub up: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SpectralLadder {
    /// `C_h↓ = C_{h−1}↑ − ε̄` for `h ≥ 1`.
    pub fn down(&self, h: usize, eps: f64) -> f64 {
        self.up[h - 1] - eps
    }

    /// Stieltjes transform of the spectral measure, `Σ_h w_h / (u − C_h↑)`.
    pub fn stieltjes(&self, u: Complex64) -> Complex64 {
        self.up
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| w / (u - c))
            .sum()
    }
}

pub fn ladder(l: &LaxTruncation) -> Result<SpectralLadder> {
    let eig = SymmetricEigen::try_new(l.matrix.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigen("Hermitian eigensolver did not converge".into()))?;
    let norm = l.norm_bound();
    let mut order: Vec<usize> = (0..l.dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut up = Vec::with_capacity(l.dim);
    let mut weights = Vec::with_capacity(l.dim);
    for &i in &order {
        let lambda = eig.eigenvalues[i];
        let psi = eig.eigenvectors.column(i);
        let residual = (&l.matrix * psi - psi * Complex64::new(lambda, 0.0)).norm();
        if residual > 1e-10 * norm.max(1.0) {
            return Err(Error::Eigen(format!(
                "eigenpair residual {residual:e} at eigenvalue {lambda}"
            )));
        }
        up.push(lambda);
        weights.push(psi[0].norm_sqr());
    }
    for h in 1..up.len() {
        if !(up[h] < up[h - 1] - l.eps + 1e-8) {
            return Err(Error::Eigen(format!(
                "spectrum not separated by ε̄ at h = {h}: {} vs {}",
                up[h],
                up[h - 1]
            )));
        }
    }
    Ok(SpectralLadder { up, weights })
}

/// Largest deviation between the spectrum of the principal minor (rows and
/// columns `1..N−1`) and `−ε̄ +` the spectrum of the `N−1` truncation.
pub fn shift_check(f: &FourierField, eps: f64, n: usize) -> Result<f64> {
    let l = lax_matrix(f, eps, n)?;
    let minor = LaxTruncation {
        dim: n - 1,
        eps,
        matrix: l.matrix.view((1, 1), (n - 1, n - 1)).into_owned(),
    };
    let shorter = lax_matrix(f, eps, n - 1)?;
    let a = minor.eigenvalues();
    let b = shorter.eigenvalues();
    Ok(a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - (y - eps)).abs())
        .fold(0.0, f64::max))
}

/// A gap `(C_h↑, C_h↓)` of the dispersive action profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub h: usize,
    pub lo: f64,
    pub hi: f64,
}

/// Gaps among `h = 1..=depth` longer than `gap_tol`.
pub fn extract_gaps(sl: &SpectralLadder, eps: f64, gap_tol: f64, depth: usize) -> Result<Vec<Gap>> {
    if depth >= sl.up.len() {
        return Err(Error::Invalid(format!(
            "depth {depth} exceeds ladder length {}",
            sl.up.len()
        )));
    }
    let mut gaps = Vec::new();
    for h in 1..=depth {
        let lo = sl.up[h];
        let hi = sl.down(h, eps);
        let gap = hi - lo;
        if gap < -INTERLACING_TOL {
            return Err(Error::Interlacing { h, gap });
        }
        if gap > gap_tol {
            gaps.push(Gap { h, lo, hi });
        }
    }
    Ok(gaps)
}

/// Dispersive action profile: minima `C_0↑` and the lower gap ends, maxima the upper gap ends.
pub fn dispersive_profile(sl: &SpectralLadder, eps: f64, gap_tol: f64, depth: usize) -> Result<Profile> {
    let gaps = extract_gaps(sl, eps, gap_tol, depth)?;
    let mut minima = vec![sl.up[0]];
    minima.extend(gaps.iter().map(|g| g.lo));
    let maxima: Vec<f64> = gaps.iter().map(|g| g.hi).collect();
    Profile::from_corners(&minima, &maxima)
}

/// Banded product `L x` on the first `x.len()` Hardy modes.
fn lax_apply(f: &FourierField, eps: f64, x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len() as i64;
    let k_max = f.bandwidth() as i64;
    (0..n)
        .map(|h| {
            let mut acc = x[h as usize] * (f.a - eps * h as f64);
            for k in (-k_max..=k_max).filter(|&k| k != 0) {
                let j = h - k;
                if (0..n).contains(&j) {
                    acc += f.mode(k) * x[j as usize];
                }
            }
            acc
        })
        .collect()
}

/// Columns `L^m e_0` for `m = 0..=steps`, on a truncation large enough to be exact.
fn krylov_columns(f: &FourierField, eps: f64, steps: usize, n: usize) -> Vec<Vec<Complex64>> {
    let mut cols = Vec::with_capacity(steps + 1);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[0] = Complex64::new(1.0, 0.0);
    cols.push(x.clone());
    for _ in 0..steps {
        x = lax_apply(f, eps, &x);
        cols.push(x.clone());
    }
    cols
}

/// `T_ℓ = (L^ℓ)_{00}`, exact for band-limited fields with truncation `ℓK + 1`.
pub fn hierarchy(f: &FourierField, eps: f64, l: usize) -> f64 {
    let n = l * f.bandwidth() + 1;
    let half = l / 2;
    let cols = krylov_columns(f, eps, l - half, n);
    // (L^ℓ)_00 = ⟨L^{⌊ℓ/2⌋} e_0, L^{⌈ℓ/2⌉} e_0⟩ since L is Hermitian.
    cols[half]
        .iter()
        .zip(&cols[l - half])
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .re
}

/// Baker–Akhiezer solve `(u − L)φ = e_0`; returns `T↑(u) = φ_0` and `φ`.
pub fn resolvent_element(
    f: &FourierField,
    eps: f64,
    u: Complex64,
    n: usize,
) -> Result<(Complex64, Vec<Complex64>)> {
    let l = lax_matrix(f, eps, n)?;
    let shifted = DMatrix::from_diagonal_element(n, n, u) - &l.matrix;
    let mut rhs = DVector::zeros(n);
    rhs[0] = Complex64::new(1.0, 0.0);
    let phi = shifted
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularMatrix {
            context: format!("u − L at u = {u}"),
        })?;
    Ok((phi[0], phi.iter().copied().collect()))
}

/// `(1/u)·det(1 + (L − L₊)(u − L)⁻¹)` where `L₊` is `L` with row and column 0
/// removed. `L − L₊ = e_0 rᵀ + c e_0ᵀ` has rank two, so the determinant
/// reduces to a 2×2 one.
pub fn perturbation_determinant(f: &FourierField, eps: f64, u: Complex64, n: usize) -> Result<Complex64> {
    let l = lax_matrix(f, eps, n)?;
    let lu = (DMatrix::from_diagonal_element(n, n, u) - &l.matrix).lu();
    let singular = || Error::SingularMatrix {
        context: format!("u − L at u = {u}"),
    };
    let mut e0 = DVector::zeros(n);
    e0[0] = Complex64::new(1.0, 0.0);
    let mut c: DVector<Complex64> = l.matrix.column(0).into_owned();
    c[0] = Complex64::new(0.0, 0.0);
    let r: DVector<Complex64> = l.matrix.row(0).transpose();
    let re0 = lu.solve(&e0).ok_or_else(singular)?;
    let rc = lu.solve(&c).ok_or_else(singular)?;
    let one = Complex64::new(1.0, 0.0);
    let m00 = one + r.dot(&re0);
    let m01 = r.dot(&rc);
    let m10 = re0[0];
    let m11 = one + rc[0];
    Ok((m00 * m11 - m01 * m10) / u)
}

/// Gradient `∂T_ℓ/∂V_q` for `q = −Q..=Q`, by splitting each closed path at the
/// step that uses `V_q`. Modes beyond the field's bandwidth `K` vanish but their
/// derivatives do not; `Q = max(ℓ−1, 1)·K` covers every nonzero entry.
/// Entry `q + Q` of the result.
pub fn hierarchy_gradient(f: &FourierField, eps: f64, l: usize) -> Vec<Complex64> {
    let reach = l.saturating_sub(1).max(1) * f.bandwidth();
    let mut grad = vec![Complex64::new(0.0, 0.0); 2 * reach + 1];
    if l == 0 {
        return grad;
    }
    let n = l * f.bandwidth() + 1;
    let cols = krylov_columns(f, eps, l - 1, n);
    for m in 0..l {
        // Row 0 of L^m is the conjugate of column 0.
        let row = &cols[m];
        let col = &cols[l - 1 - m];
        for (qi, g) in grad.iter_mut().enumerate() {
            let q = qi as i64 - reach as i64;
            for i in 0..n as i64 {
                let j = i - q;
                if (0..n as i64).contains(&j) {
                    *g += row[i as usize].conj() * col[j as usize];
                }
            }
        }
    }
    grad
}

/// `|{T_{l1}, T_{l2}}|` for the bracket
/// `{F, G} = Σ_{k>0} ik (∂F/∂V_{−k} ∂G/∂V_k − ∂F/∂V_k ∂G/∂V_{−k})`.
pub fn poisson_check(l1: usize, l2: usize, f: &FourierField, eps: f64) -> f64 {
    let g1 = hierarchy_gradient(f, eps, l1);
    let g2 = hierarchy_gradient(f, eps, l2);
    let at = |g: &[Complex64], q: i64| {
        let reach = (g.len() / 2) as i64;
        if q.abs() > reach {
            Complex64::new(0.0, 0.0)
        } else {
            g[(q + reach) as usize]
        }
    };
    let kmax = (g1.len().max(g2.len()) / 2) as i64;
    (1..=kmax)
        .map(|k| {
            Complex64::new(0.0, k as f64)
                * (at(&g1, -k) * at(&g2, k) - at(&g1, k) * at(&g2, -k))
        })
        .sum::<Complex64>()
        .norm()
}

/// Eigenvalues, gaps and dispersive profile of one truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    pub gaps: Vec<Gap>,
    pub profile: Profile,
}

pub fn spectral_report(
    f: &FourierField,
    eps: f64,
    n: usize,
    gap_tol: f64,
    depth: usize,
) -> Result<SpectralReport> {
    let sl = ladder(&lax_matrix(f, eps, n)?)?;
    let gaps = extract_gaps(&sl, eps, gap_tol, depth)?;
    let profile = dispersive_profile(&sl, eps, gap_tol, depth)?;
    Ok(SpectralReport {
        eigenvalues: sl.up,
        gaps,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_field_matrix_and_ladder() {
        let l = lax_matrix(&FourierField::constant(1.5), 0.5, 6).unwrap();
        for h in 0..6 {
            assert_eq!(l.matrix[(h, h)], c(1.5 - 0.5 * h as f64));
        }
        let sl = ladder(&l).unwrap();
        for (h, v) in sl.up.iter().enumerate() {
            assert!((v - (1.5 - 0.5 * h as f64)).abs() < 1e-14);
        }
        let f = dispersive_profile(&sl, 0.5, 1e-8, 4).unwrap();
        assert_eq!(f, Profile::flat(1.5));
    }

    #[test]
    fn single_mode_matrix() {
        let l = lax_matrix(&FourierField::cosine(0.3, 0.2, 1), 1.0, 2).unwrap();
        assert_eq!(l.matrix[(0, 0)], c(0.3));
        assert_eq!(l.matrix[(0, 1)], c(0.2));
        assert_eq!(l.matrix[(1, 0)], c(0.2));
        assert_eq!(l.matrix[(1, 1)], c(-0.7));
        assert!(lax_matrix(&FourierField::constant(0.0), 1.0, 1).is_err());
    }

    #[test]
    fn second_order_perturbation() {
        let (a, delta, k, eps) = (0.4, 1e-3, 2usize, 1.0);
        let sl = ladder(&lax_matrix(&FourierField::cosine(a, delta, k), eps, 40).unwrap()).unwrap();
        let predicted = a + delta * delta / (eps * k as f64);
        assert!((sl.up[0] - predicted).abs() < 1e-10, "{}", sl.up[0] - predicted);
    }

    #[test]
    fn hierarchy_of_cosine_field() {
        let (a, delta, k, eps) = (0.7, 0.3, 2usize, 1.3);
        let f = FourierField::cosine(a, delta, k);
        assert_eq!(hierarchy(&f, eps, 0), 1.0);
        assert!((hierarchy(&f, eps, 1) - a).abs() < 1e-15);
        assert!((hierarchy(&f, eps, 2) - (a * a + delta * delta)).abs() < 1e-14);
        let t3 = a.powi(3) + delta * delta * (3.0 * a - eps * k as f64);
        assert!((hierarchy(&f, eps, 3) - t3).abs() < 1e-14);
    }

    #[test]
    fn resolvent_of_constant_field() {
        let u = Complex64::new(3.0, 1.0);
        let (t, _) = resolvent_element(&FourierField::constant(0.5), 1.0, u, 8).unwrap();
        assert!((t - 1.0 / (u - 0.5)).norm() < 1e-14);
        let d = perturbation_determinant(&FourierField::constant(0.5), 1.0, u, 8).unwrap();
        assert!((d - 1.0 / (u - 0.5)).norm() < 1e-14);
    }

    #[test]
    fn bracket_with_mean_vanishes() {
        let f = FourierField {
            a: 0.2,
            modes: vec![Complex64::new(0.3, -0.1), Complex64::new(0.05, 0.2)],
        };
        assert_eq!(poisson_check(1, 2, &f, 1.0), 0.0);
    }

    #[test]
    fn interlacing_violation_detected() {
        let sl = SpectralLadder {
            up: vec![2.0, 1.5, 0.0],
            weights: vec![1.0, 0.0, 0.0],
        };
        assert!(matches!(
            extract_gaps(&sl, 1.0, 1e-8, 2),
            Err(Error::Interlacing { h: 1, .. })
        ));
        assert!(extract_gaps(&sl, 1.0, 1e-8, 3).is_err());
    }
}
