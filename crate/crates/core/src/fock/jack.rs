//! Jack functions as an independent oracle for the quantum eigenvectors.
//!
//! Monomial symmetric functions are written in power sums, power sums are
//! identified with Fock monomials via `p_k = V_k / ε₁`, and Gram–Schmidt is run
//! from the bottom of the dominance order under the Fock inner product.

use super::{fock_norm, FockVector};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::profiles::renormalize;
use crate::scalar::Scalar;

/// Integer matrix `R` with `p_μ = Σ_λ R[μ][λ] m_λ`, rows and columns in the
/// reverse lexicographic order of [`Partition::all`].
pub fn power_to_monomial(d: usize) -> Vec<Vec<i64>> {
    let basis = Partition::all(d);
    basis
        .iter()
        .map(|mu| {
            basis
                .iter()
                .map(|lambda| {
                    let mut rows = lambda.parts().to_vec();
                    fillings(mu.parts(), &mut rows)
                })
                .collect()
        })
        .collect()
}

// Number of ways to drop the parts into rows so that every row is filled exactly.
fn fillings(parts: &[usize], rows: &mut [usize]) -> i64 {
    let Some((&first, rest)) = parts.split_first() else {
        return rows.iter().all(|&r| r == 0) as i64;
    };
    let mut total = 0;
    for j in 0..rows.len() {
        if rows[j] >= first {
            rows[j] -= first;
            total += fillings(rest, rows);
            rows[j] += first;
        }
    }
    total
}

fn invert<T: Scalar>(mut m: Vec<Vec<T>>) -> Option<Vec<Vec<T>>> {
    let n = m.len();
    let mut inv: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = m[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                let a = m[col][j].clone();
                let b = inv[col][j].clone();
                m[r][j] -= f.clone() * a;
                inv[r][j] -= f.clone() * b;
            }
        }
    }
    Some(inv)
}

fn weighted_dot<T: Scalar>(x: &[T], y: &[T], w: &[T]) -> T {
    let mut s = T::zero();
    for ((a, b), c) in x.iter().zip(y).zip(w) {
        s += a.clone() * b.clone() * c.clone();
    }
    s
}

/// Jack vector for `λ` in Fock coordinates given the renormalized `ε₁`, with
/// the coefficient of `V_1^{|λ|}` set to 1. Exact when `T` is rational.
pub fn jack_vector<T: Scalar>(lambda: &Partition, eps1: &T, hbar: &T) -> Result<FockVector<T>> {
    let d = lambda.weight();
    let basis = Partition::all(d);
    let target = basis
        .iter()
        .position(|mu| mu == lambda)
        .expect("partition of its own weight");
    let r: Vec<Vec<T>> = power_to_monomial(d)
        .into_iter()
        .map(|row| row.into_iter().map(T::from_i64).collect())
        .collect();
    let rinv = invert(r).ok_or_else(|| Error::SingularMatrix {
        context: format!("power-sum to monomial matrix, degree {d}"),
    })?;
    // V_μ = ε₁^{ℓ(μ)} p_μ, so the p_μ coefficient c becomes c / ε₁^{ℓ(μ)}.
    let scale: Vec<T> = basis
        .iter()
        .map(|mu| {
            let mut s = T::one();
            for _ in 0..mu.len() {
                s *= eps1.clone();
            }
            T::one() / s
        })
        .collect();
    let weights: Vec<T> = basis.iter().map(|mu| fock_norm(mu, hbar)).collect();

    // Increasing lexicographic order refines dominance.
    let mut done: Vec<(Vec<T>, T)> = Vec::new();
    let mut current = Vec::new();
    for idx in (target..basis.len()).rev() {
        let mut v: Vec<T> = (0..basis.len())
            .map(|j| rinv[idx][j].clone() * scale[j].clone())
            .collect();
        for (q, qq) in &done {
            let c = weighted_dot(&v, q, &weights) / qq.clone();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c.clone() * y.clone();
            }
        }
        let vv = weighted_dot(&v, &v, &weights);
        if idx == target {
            current = v;
        } else {
            done.push((v, vv));
        }
    }
    let lead = current.last().cloned().unwrap_or_else(T::zero);
    if lead.is_zero() {
        return Err(Error::Degeneracy(format!(
            "Jack vector for {lambda} has no V_1^{d} component"
        )));
    }
    Ok(basis
        .into_iter()
        .zip(current)
        .filter(|(_, c)| !c.is_zero())
        .map(|(mu, c)| (mu, c / lead.clone()))
        .collect())
}

/// Jack vector for `λ` at the renormalized dispersion of `(ε̄, ℏ)`.
pub fn jack_oracle(lambda: &Partition, eps: f64, hbar: f64) -> Result<FockVector<f64>> {
    let (e1, _) = renormalize(eps, hbar)?;
    jack_vector(lambda, &e1, &hbar)
}

/// Squared cosine of the Fock angle between two vectors.
pub fn overlap(x: &FockVector<f64>, y: &FockVector<f64>, hbar: f64) -> f64 {
    let xy = super::inner(x, y, &hbar);
    xy * xy / (super::inner(x, x, &hbar) * super::inner(y, y, &hbar))
}
