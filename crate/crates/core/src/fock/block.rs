use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;

use super::{fock_norm, QuantumParams};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Scalar;

/// The quantum Lax operator on the span of `V_μ ⊗ z^h` with `|μ| + h = g`.
///
/// States are ordered by height, then by reverse lexicographic partition, so
/// the first `p(g)` states are the height-zero (degree `g`) Fock states.
/// Columns index the source state and rows the target.
#[derive(Clone, Debug, PartialEq)]
pub struct GradeBlock<T> {
    pub grade: usize,
    pub states: Vec<(Partition, usize)>,
    pub matrix: DMatrix<T>,
}

impl<T: Scalar> GradeBlock<T> {
    /// Number of height-zero states.
    pub fn ground_len(&self) -> usize {
        self.states.iter().take_while(|(_, h)| *h == 0).count()
    }

    /// Diagonal weights making the matrix self-adjoint.
    pub fn weights(&self, hbar: &T) -> Vec<T> {
        self.states.iter().map(|(mu, _)| fock_norm(mu, hbar)).collect()
    }

    /// The matrix with height-zero rows and columns removed from the action.
    fn excited(&self) -> DMatrix<T> {
        let g0 = self.ground_len();
        let mut m = self.matrix.clone();
        for i in 0..g0 {
            m.row_mut(i).fill(T::zero());
            m.column_mut(i).fill(T::zero());
        }
        m
    }
}

pub fn grade_block<T: Scalar>(g: usize, params: &QuantumParams<T>) -> GradeBlock<T> {
    let states: Vec<(Partition, usize)> = (0..=g)
        .flat_map(|h| Partition::all(g - h).into_iter().map(move |mu| (mu, h)))
        .collect();
    let index: HashMap<&(Partition, usize), usize> =
        states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let n = states.len();
    let mut matrix = DMatrix::from_element(n, n, T::zero());
    for (col, (nu, hp)) in states.iter().enumerate() {
        matrix[(col, col)] = params.a.clone() - params.eps.clone() * T::from_i64(*hp as i64);
        // Raising: V_k with k = h' − h > 0 moves to a lower height.
        for k in 1..=*hp {
            let target = (nu.with_part(k), hp - k);
            matrix[(index[&target], col)] = T::one();
        }
        // Lowering: ℏk ∂/∂V_k moves up by k.
        for (k, m) in nu.distinct_parts() {
            let target = (nu.without_part(k).expect("part present"), hp + k);
            matrix[(index[&target], col)] = params.hbar.clone() * T::from_i64((k * m) as i64);
        }
    }
    GradeBlock { grade: g, states, matrix }
}

/// A degree-`d` operator in the monomial basis (columns = source).
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorBlock<T> {
    pub degree: usize,
    pub label: String,
    pub basis: Vec<Partition>,
    pub matrix: DMatrix<T>,
}

impl<T: Scalar> OperatorBlock<T> {
    pub fn to_f64(&self) -> OperatorBlock<f64> {
        OperatorBlock {
            degree: self.degree,
            label: self.label.clone(),
            basis: self.basis.clone(),
            matrix: self.matrix.map(|x| x.to_f64()),
        }
    }

    /// `G·M` with `G` the diagonal of Fock norms.
    pub fn weighted(&self, hbar: &T) -> DMatrix<T> {
        let mut m = self.matrix.clone();
        for (i, mu) in self.basis.iter().enumerate() {
            let w = fock_norm(mu, hbar);
            for x in m.row_mut(i).iter_mut() {
                *x *= w.clone();
            }
        }
        m
    }

    /// Largest entry of `GM − (GM)ᵀ`, relative to the largest entry of `GM`.
    pub fn self_adjoint_defect(&self, hbar: &T) -> f64 {
        let gm = self.weighted(hbar).map(|x| x.to_f64());
        let scale = gm.amax().max(1.0);
        (&gm - gm.transpose()).amax() / scale
    }

    /// The value `E` with `Mv = Ev` exactly, if `v` is an eigenvector.
    pub fn eigenvalue_of(&self, v: &[T]) -> Option<T> {
        let pivot = v.iter().position(|x| !x.is_zero())?;
        let mv: Vec<T> = (0..self.matrix.nrows())
            .map(|i| {
                let mut s = T::zero();
                for (j, x) in v.iter().enumerate() {
                    s += self.matrix[(i, j)].clone() * x.clone();
                }
                s
            })
            .collect();
        let e = mv[pivot].clone() / v[pivot].clone();
        mv.iter()
            .zip(v)
            .all(|(m, x)| *m == e.clone() * x.clone())
            .then_some(e)
    }
}

impl OperatorBlock<f64> {
    /// `G^{1/2} M G^{−1/2}`: the operator in Fock-orthonormal coordinates.
    pub fn orthonormal(&self, hbar: f64) -> DMatrix<f64> {
        let s: Vec<f64> = self.basis.iter().map(|mu| fock_norm(mu, &hbar).sqrt()).collect();
        DMatrix::from_fn(self.matrix.nrows(), self.matrix.ncols(), |i, j| {
            s[i] * self.matrix[(i, j)] / s[j]
        })
    }
}

fn ground_block<T: Scalar>(m: &DMatrix<T>, g0: usize) -> DMatrix<T> {
    m.view((0, 0), (g0, g0)).into_owned()
}

/// `T̂_0..T̂_lmax` on degree `d`: height-zero blocks of powers of the grade-`d` block.
pub fn hierarchy_up<T: Scalar>(d: usize, lmax: usize, params: &QuantumParams<T>) -> Vec<OperatorBlock<T>> {
    let gb = grade_block(d, params);
    let g0 = gb.ground_len();
    let basis: Vec<Partition> = gb.states[..g0].iter().map(|(mu, _)| mu.clone()).collect();
    let n = gb.states.len();
    let mut power = DMatrix::<T>::identity(n, n);
    let mut out = Vec::with_capacity(lmax + 1);
    for l in 0..=lmax {
        if l > 0 {
            power = &gb.matrix * &power;
        }
        out.push(OperatorBlock {
            degree: d,
            label: format!("T{l}"),
            basis: basis.clone(),
            matrix: ground_block(&power, g0),
        });
    }
    out
}

#[allow(non_snake_case)]
pub fn quantum_T_up<T: Scalar>(d: usize, l: usize, params: &QuantumParams<T>) -> OperatorBlock<T> {
    hierarchy_up(d, l, params).pop().expect("nonempty")
}

/// `⟨0|L L₊^ℓ L|0⟩` for `ℓ = 0..lmax`, with `L₊` the Lax block restricted to
/// positive heights (`L₊⁰` is the projection onto positive heights).
pub fn hierarchy_down<T: Scalar>(d: usize, lmax: usize, params: &QuantumParams<T>) -> Vec<OperatorBlock<T>> {
    let gb = grade_block(d, params);
    let g0 = gb.ground_len();
    let basis: Vec<Partition> = gb.states[..g0].iter().map(|(mu, _)| mu.clone()).collect();
    let plus = gb.excited();
    let n = gb.states.len();
    // Columns: L|0⟩ projected to positive heights.
    let mut right = gb.matrix.columns(0, g0).into_owned();
    for i in 0..g0 {
        right.row_mut(i).fill(T::zero());
    }
    let left = gb.matrix.rows(0, g0).into_owned();
    let mut out = Vec::with_capacity(lmax + 1);
    let mut walk = right;
    for l in 0..=lmax {
        if l > 0 {
            walk = &plus * &walk;
        }
        debug_assert_eq!(walk.nrows(), n);
        out.push(OperatorBlock {
            degree: d,
            label: format!("Tdown{l}"),
            basis: basis.clone(),
            matrix: &left * &walk,
        });
    }
    out
}

#[allow(non_snake_case)]
pub fn quantum_T_down<T: Scalar>(d: usize, l: usize, params: &QuantumParams<T>) -> OperatorBlock<T> {
    hierarchy_down(d, l, params).pop().expect("nonempty")
}

/// Quantum Hamiltonian `Ô₃ = 3T̂₃ − 3aT̂₂ + a³` on degree `d`.
pub fn hamiltonian<T: Scalar>(d: usize, params: &QuantumParams<T>) -> OperatorBlock<T> {
    let t = hierarchy_up(d, 3, params);
    let a = params.a.clone();
    let n = t[3].matrix.nrows();
    let three = T::from_i64(3);
    let cube = a.clone() * a.clone() * a.clone();
    let matrix = t[3].matrix.map(|x| three.clone() * x) - t[2].matrix.map(|x| three.clone() * a.clone() * x)
        + DMatrix::<T>::identity(n, n).map(|x| x * cube.clone());
    OperatorBlock {
        degree: d,
        label: "O3".into(),
        basis: t[3].basis.clone(),
        matrix,
    }
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Operator norm of `[T̂_{l1}, T̂_{l2}]` on degree `d`, measured in Fock-orthonormal
/// coordinates. The commutator is formed in `T` before rounding to `f64`.
pub fn commutator_norm<T: Scalar>(d: usize, l1: usize, l2: usize, params: &QuantumParams<T>) -> f64 {
    let t = hierarchy_up(d, l1.max(l2), params);
    let (x, y) = (&t[l1].matrix, &t[l2].matrix);
    let c = x * y - y * x;
    let block = OperatorBlock {
        degree: d,
        label: format!("[T{l1},T{l2}]"),
        basis: t[0].basis.clone(),
        matrix: c,
    };
    spectral_norm(&block.to_f64().orthonormal(params.hbar.to_f64()))
}

fn complex_block(gb: &GradeBlock<f64>) -> DMatrix<Complex64> {
    gb.matrix.map(|x| Complex64::new(x, 0.0))
}

/// `T̂↑(u) = ⟨0|(u − L)⁻¹|0⟩` on degree `d`, by a block linear solve.
pub fn resolvent_up(d: usize, params: &QuantumParams<f64>, u: Complex64) -> Result<DMatrix<Complex64>> {
    let gb = grade_block(d, params);
    let g0 = gb.ground_len();
    let n = gb.states.len();
    let shifted = DMatrix::<Complex64>::identity(n, n) * u - complex_block(&gb);
    let rhs = DMatrix::<Complex64>::identity(n, n).columns(0, g0).into_owned();
    let x = shifted.lu().solve(&rhs).ok_or_else(|| Error::SingularMatrix {
        context: format!("u − L at u = {u}, grade {d}"),
    })?;
    Ok(x.rows(0, g0).into_owned())
}

/// `T̂↓(u) = ⟨0|L (u − L₊)⁻¹ L|0⟩`, the resolvent through positive heights.
pub fn resolvent_down(d: usize, params: &QuantumParams<f64>, u: Complex64) -> Result<DMatrix<Complex64>> {
    let gb = grade_block(d, params);
    let g0 = gb.ground_len();
    let n = gb.states.len();
    let m = complex_block(&gb);
    if n == g0 {
        return Ok(DMatrix::zeros(g0, g0));
    }
    let inner = m.view((g0, g0), (n - g0, n - g0));
    let shifted = DMatrix::<Complex64>::identity(n - g0, n - g0) * u - inner;
    let coupling_in = m.view((g0, 0), (n - g0, g0)).into_owned();
    let coupling_out = m.view((0, g0), (g0, n - g0)).into_owned();
    let x = shifted.lu().solve(&coupling_in).ok_or_else(|| Error::SingularMatrix {
        context: format!("u − L₊ at u = {u}, grade {d}"),
    })?;
    Ok(coupling_out * x)
}

/// `‖(u − a − T̂↓(u))⁻¹ − T̂↑(u)‖` in Fock-orthonormal coordinates.
pub fn resolvent_identity_error(d: usize, params: &QuantumParams<f64>, u: Complex64) -> Result<f64> {
    let up = resolvent_up(d, params, u)?;
    let down = resolvent_down(d, params, u)?;
    let g0 = up.nrows();
    let lhs = (DMatrix::<Complex64>::identity(g0, g0) * (u - params.a) - down)
        .try_inverse()
        .ok_or_else(|| Error::SingularMatrix {
            context: format!("u − a − T↓(u) at u = {u}, degree {d}"),
        })?;
    let s: Vec<f64> = Partition::all(d)
        .iter()
        .map(|mu| fock_norm(mu, &params.hbar).sqrt())
        .collect();
    let diff = DMatrix::from_fn(g0, g0, |i, j| (lhs[(i, j)] - up[(i, j)]) * (s[i] / s[j]));
    Ok(diff.singular_values().max())
}
