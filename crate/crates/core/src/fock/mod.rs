//! Bosonic Fock space on the mode variables `V_1, V_2, ...`, the quantum Lax
//! operator on finite grade blocks, and the quantum hierarchy it generates.
//!
//! A Fock vector is a polynomial `Σ c_μ V_μ` with `V_μ = ∏ V_{μ_j}`. The
//! inner product makes the monomials orthogonal with
//! `‖V_μ‖² = ∏_k (ℏk)^{d_k} d_k!`, where `d_k` is the multiplicity of `k` in
//! `μ`. Raising operators multiply by `V_k`; lowering operators act as
//! `ℏk ∂/∂V_k`, so they are mutually adjoint and `[V̂_{−k}, V̂_k] = ℏk`.
//!
//! All block computations are generic over [`Scalar`], so the same code runs
//! in `f64` or in exact rationals.

mod block;
mod diag;
mod jack;

pub use block::{
    commutator_norm, grade_block, hamiltonian, hierarchy_down, hierarchy_up, quantum_T_down,
    quantum_T_up, resolvent_down, resolvent_identity_error, resolvent_up, GradeBlock,
    OperatorBlock,
};
pub use diag::{
    diagonalize, eigenvalue_formula, hamiltonian_spectrum, state_resolvent, Diagonalization,
    Eigenstate, LABEL_TOL,
};
pub use jack::{jack_oracle, jack_vector, overlap, power_to_monomial};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Scalar;

/// A Fock vector: coefficients of the monomials `V_μ`.
pub type FockVector<T> = BTreeMap<Partition, T>;

/// Parameters `(ε̄, ℏ, a)` of the quantum problem.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumParams<T> {
    pub eps: T,
    pub hbar: T,
    pub a: T,
}

impl<T: Scalar> QuantumParams<T> {
    /// Converts exactly from floats; requires `ε̄ ≥ 0` and `ℏ > 0`.
    pub fn from_f64(eps: f64, hbar: f64, a: f64) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        if !(eps >= 0.0) {
            return Err(Error::Domain(format!("eps must be non-negative, got {eps}")));
        }
        Ok(QuantumParams {
            eps: T::from_f64(eps)?,
            hbar: T::from_f64(hbar)?,
            a: T::from_f64(a)?,
        })
    }

    pub fn to_f64(&self) -> QuantumParams<f64> {
        QuantumParams {
            eps: self.eps.to_f64(),
            hbar: self.hbar.to_f64(),
            a: self.a.to_f64(),
        }
    }
}

/// Degree-`d` monomial basis with its Fock norms.
#[derive(Clone, Debug, PartialEq)]
pub struct FockBasis {
    pub degree: usize,
    pub partitions: Vec<Partition>,
    pub norms: Vec<f64>,
}

impl FockBasis {
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn index_of(&self, mu: &Partition) -> Option<usize> {
        self.partitions.iter().position(|p| p == mu)
    }
}

/// Partitions of `d` in reverse lexicographic order with norms `‖V_μ‖²`.
pub fn basis(d: usize, hbar: f64) -> FockBasis {
    let partitions = Partition::all(d);
    let norms = partitions.iter().map(|mu| fock_norm(mu, &hbar)).collect();
    FockBasis {
        degree: d,
        partitions,
        norms,
    }
}

/// `‖V_μ‖² = ∏_k (ℏk)^{d_k} d_k!`.
pub fn fock_norm<T: Scalar>(mu: &Partition, hbar: &T) -> T {
    let mut out = T::one();
    for (k, m) in mu.distinct_parts() {
        let hk = hbar.clone() * T::from_i64(k as i64);
        for j in 1..=m {
            out *= hk.clone() * T::from_i64(j as i64);
        }
    }
    out
}

/// Applies `V̂_k`: multiplication by `V_k` for `k > 0`, `ℏ|k| ∂/∂V_{|k|}` for `k < 0`.
pub fn ladder_apply<T: Scalar>(k: i64, v: &FockVector<T>, hbar: &T) -> Result<FockVector<T>> {
    if k == 0 {
        return Err(Error::Invalid("ladder index must be nonzero".into()));
    }
    let mut out = FockVector::new();
    let part = k.unsigned_abs() as usize;
    for (mu, c) in v {
        if c.is_zero() {
            continue;
        }
        if k > 0 {
            accumulate(&mut out, mu.with_part(part), c.clone());
        } else if let Some(nu) = mu.without_part(part) {
            let factor = hbar.clone() * T::from_i64((part * mu.multiplicity(part)) as i64);
            accumulate(&mut out, nu, factor * c.clone());
        }
    }
    Ok(out)
}

fn accumulate<T: Scalar>(v: &mut FockVector<T>, key: Partition, c: T) {
    let slot = v.entry(key).or_insert_with(T::zero);
    *slot += c;
}

/// `⟨ξ, η⟩` for real coefficient vectors.
pub fn inner<T: Scalar>(xi: &FockVector<T>, eta: &FockVector<T>, hbar: &T) -> T {
    let mut out = T::zero();
    for (mu, c) in xi {
        if let Some(d) = eta.get(mu) {
            out += c.clone() * d.clone() * fock_norm(mu, hbar);
        }
    }
    out
}

/// Coordinates of `v` on the degree-`d` basis; other degrees are dropped.
pub fn coordinates<T: Scalar>(v: &FockVector<T>, partitions: &[Partition]) -> Vec<T> {
    partitions
        .iter()
        .map(|mu| v.get(mu).cloned().unwrap_or_else(T::zero))
        .collect()
}

pub fn from_coordinates<T: Scalar>(c: &[T], partitions: &[Partition]) -> FockVector<T> {
    partitions
        .iter()
        .zip(c)
        .filter(|(_, x)| !x.is_zero())
        .map(|(mu, x)| (mu.clone(), x.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn basis_examples() {
        let b = basis(0, 2.0);
        assert_eq!(b.partitions, vec![Partition::empty()]);
        assert_eq!(b.norms, vec![1.0]);
        let b = basis(2, 2.0);
        assert_eq!(b.partitions, vec![p(&[2]), p(&[1, 1])]);
        assert_eq!(b.norms, vec![4.0, 8.0]);
        assert_eq!(basis(5, 1.0).len(), 7);
    }

    #[test]
    fn ladder_examples() {
        let hbar = 2.0;
        let v1: FockVector<f64> = [(p(&[1]), 1.0)].into_iter().collect();
        let down = ladder_apply(-1, &v1, &hbar).unwrap();
        assert_eq!(down, [(Partition::empty(), 2.0)].into_iter().collect());
        let vac: FockVector<f64> = [(Partition::empty(), 1.0)].into_iter().collect();
        assert_eq!(ladder_apply(1, &vac, &hbar).unwrap(), v1);
        assert!(ladder_apply(0, &vac, &hbar).is_err());
    }

    #[test]
    fn canonical_commutation_exact() {
        let hbar = crate::scalar::ratio(3, 2);
        let v: FockVector<BigRational> = [
            (p(&[2, 1]), crate::scalar::ratio(1, 3)),
            (p(&[2, 2, 1]), crate::scalar::ratio(-2, 1)),
            (p(&[3]), crate::scalar::ratio(5, 7)),
        ]
        .into_iter()
        .collect();
        for k in 1..=3i64 {
            let a = ladder_apply(-k, &ladder_apply(k, &v, &hbar).unwrap(), &hbar).unwrap();
            let b = ladder_apply(k, &ladder_apply(-k, &v, &hbar).unwrap(), &hbar).unwrap();
            let scale = hbar.clone() * BigRational::from_i64(k);
            for mu in a.keys().chain(b.keys()).chain(v.keys()) {
                let get = |w: &FockVector<BigRational>| w.get(mu).cloned().unwrap_or_default();
                assert_eq!(get(&a) - get(&b), scale.clone() * get(&v));
            }
        }
    }
}
