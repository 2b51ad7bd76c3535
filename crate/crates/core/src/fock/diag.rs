use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::block::{hamiltonian, hierarchy_up, resolvent_up, OperatorBlock};
use super::{fock_norm, QuantumParams};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::profiles::{partition_profile, Anisotropy};

/// Tolerance for matching joint eigenvalues to profile predictions.
pub const LABEL_TOL: f64 = 1e-8;

/// Point at which the resolvent takes part in labeling.
const LABEL_U: f64 = 10.0;

// Generic weights for the operator used to split Ô₃ degeneracies.
const MIX: [f64; 2] = [0.577_215_664_901_532_9, 0.318_309_886_183_790_7];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eigenstate {
    pub partition: Partition,
    /// Eigenvalue of `Ô₃`.
    pub o3: f64,
    /// Eigenvalues of `T̂_2..T̂_5`.
    pub t: Vec<f64>,
    /// Eigenvalue of `T̂↑(10)`.
    pub resolvent: f64,
    /// Monomial coefficients, normalized so that `V_1^d` has coefficient 1.
    pub vector: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagonalization {
    pub degree: usize,
    pub basis: Vec<Partition>,
    pub states: Vec<Eigenstate>,
}

impl Diagonalization {
    pub fn state(&self, lambda: &Partition) -> Option<&Eigenstate> {
        self.states.iter().find(|s| &s.partition == lambda)
    }

    pub fn to_json(&self) -> Value {
        let states: Vec<Value> = self
            .states
            .iter()
            .map(|s| {
                let vector: serde_json::Map<String, Value> = self
                    .basis
                    .iter()
                    .zip(&s.vector)
                    .map(|(mu, c)| (mu.to_string(), json!(c)))
                    .collect();
                json!({
                    "partition": s.partition,
                    "O3": s.o3,
                    "T": s.t,
                    "vector": vector,
                })
            })
            .collect();
        json!({ "degree": self.degree, "states": states })
    }
}

/// Sorted eigenvalues of `Ô₃` on degree `d`.
pub fn hamiltonian_spectrum(d: usize, params: &QuantumParams<f64>) -> Result<Vec<f64>> {
    let h = hamiltonian(d, params).orthonormal(params.hbar);
    let sym = symmetrize(&h);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigen(format!("Ô₃ block, degree {d}")))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn scaled(m: &DMatrix<f64>) -> DMatrix<f64> {
    m / m.amax().max(1.0)
}

fn rayleigh(m: &DMatrix<f64>, v: &DVector<f64>) -> (f64, f64) {
    let mv = m * v;
    let q = v.dot(&mv);
    let resid = (mv - v * q).norm() / m.amax().max(1.0);
    (q, resid)
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= LABEL_TOL * y.abs().max(1.0)
}

/// Weighted-Hermitian eigendecomposition of `Ô₃` on degree `d`, with each state
/// labeled by the partition whose renormalized profile predicts its joint
/// eigenvalues `(T̂₂, T̂₃, T̂₄, T̂↑(10))`.
pub fn diagonalize(d: usize, params: &QuantumParams<f64>) -> Result<Diagonalization> {
    let anis = Anisotropy::renormalized(params.eps, params.hbar)?;
    let ts: Vec<DMatrix<f64>> = hierarchy_up(d, 5, params)
        .iter()
        .map(|t| t.orthonormal(params.hbar))
        .collect();
    let h = hamiltonian(d, params).orthonormal(params.hbar);
    let basis = Partition::all(d);
    let roots: Vec<f64> = basis.iter().map(|mu| fock_norm(mu, &params.hbar).sqrt()).collect();
    let r_mono = resolvent_up(d, params, Complex64::new(LABEL_U, 0.0))?.map(|z| z.re);
    let r = OperatorBlock {
        degree: d,
        label: "R".into(),
        basis: basis.clone(),
        matrix: r_mono,
    }
    .orthonormal(params.hbar);

    let mixed = symmetrize(&(scaled(&h) + scaled(&ts[4]) * MIX[0] + scaled(&ts[5]) * MIX[1]));
    let eig = SymmetricEigen::try_new(mixed, f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigen(format!("joint block, degree {d}")))?;

    let predictions: Vec<(Partition, [f64; 4])> = basis
        .iter()
        .map(|lambda| {
            let f = partition_profile(lambda, anis, params.a);
            let m = f.moments(4);
            let res = f.resolvent(Complex64::new(LABEL_U, 0.0))?.re;
            Ok((lambda.clone(), [m[2], m[3], m[4], res]))
        })
        .collect::<Result<_>>()?;

    let mut states = Vec::with_capacity(basis.len());
    for v in eig.eigenvectors.column_iter() {
        let v = v.into_owned();
        let mut joint = [0.0; 4];
        for (slot, m) in joint.iter_mut().zip([&ts[2], &ts[3], &ts[4], &r]) {
            let (q, resid) = rayleigh(m, &v);
            if resid > LABEL_TOL {
                return Err(Error::Degeneracy(format!(
                    "degree {d}: joint eigenvector not resolved (residual {resid:.3e})"
                )));
            }
            *slot = q;
        }
        let candidates: Vec<&Partition> = predictions
            .iter()
            .filter(|(_, p)| p.iter().zip(&joint).all(|(x, y)| close(*y, *x)))
            .map(|(lambda, _)| lambda)
            .collect();
        let partition = match candidates.as_slice() {
            [one] => (*one).clone(),
            _ => {
                let names: Vec<String> = candidates.iter().map(|c| c.to_string()).collect();
                return Err(Error::Degeneracy(format!(
                    "degree {d}: joint eigenvalues {joint:?} match [{}]",
                    names.join(", ")
                )));
            }
        };
        let (o3, _) = rayleigh(&h, &v);
        let t: Vec<f64> = (2..=5).map(|l| rayleigh(&ts[l], &v).0).collect();
        let coords: Vec<f64> = v.iter().zip(&roots).map(|(x, s)| x / s).collect();
        let lead = *coords.last().expect("nonempty basis");
        let vector = if lead.abs() > 1e-12 {
            coords.iter().map(|c| c / lead).collect()
        } else {
            coords
        };
        states.push(Eigenstate {
            partition,
            o3,
            t,
            resolvent: joint[3],
            vector,
        });
    }
    states.sort_by_key(|s| basis.iter().position(|mu| mu == &s.partition));
    if states.windows(2).any(|w| w[0].partition == w[1].partition) {
        return Err(Error::Degeneracy(format!(
            "degree {d}: two eigenvectors received the same label"
        )));
    }
    Ok(Diagonalization {
        degree: d,
        basis,
        states,
    })
}

/// Predicted eigenvalue of `⟨0|(u − L)⁻¹|0⟩` on the state labeled `λ`: the
/// resolvent of the anisotropic profile of `λ` with anisotropy `(ε₂, ε₁)`.
pub fn eigenvalue_formula(lambda: &Partition, a: f64, eps2: f64, eps1: f64, u: Complex64) -> Result<Complex64> {
    let anis = Anisotropy::new(eps2, eps1)?;
    partition_profile(lambda, anis, a).resolvent(u)
}

/// Eigenvalue of `T̂↑(u)` on the monomial vector `c` (Fock Rayleigh quotient)
/// together with the relative residual `‖T̂↑c − zc‖/‖c‖`.
pub fn state_resolvent(d: usize, params: &QuantumParams<f64>, c: &[f64], u: Complex64) -> Result<(Complex64, f64)> {
    let r = resolvent_up(d, params, u)?;
    let basis = Partition::all(d);
    if c.len() != basis.len() {
        return Err(Error::Invalid(format!(
            "vector has {} coordinates, degree {d} needs {}",
            c.len(),
            basis.len()
        )));
    }
    let w: Vec<f64> = basis.iter().map(|mu| fock_norm(mu, &params.hbar)).collect();
    let cv = DVector::from_iterator(c.len(), c.iter().map(|&x| Complex64::new(x, 0.0)));
    let rc = &r * &cv;
    let num: Complex64 = (0..c.len()).map(|i| rc[i] * c[i] * w[i]).sum();
    let den: f64 = (0..c.len()).map(|i| c[i] * c[i] * w[i]).sum();
    let z = num / den;
    let resid = (rc - cv.map(|x| x * z)).norm() / cv.norm();
    Ok((z, resid))
}
