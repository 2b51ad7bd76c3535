//! Bohr–Sommerfeld states and the comparison of the quantum spectrum with
//! classical multi-phase energies.
//!
//! With the renormalized anisotropy `(ε₂, ε₁)` every partition `λ` gives a
//! profile whose bands are `ε₁N_i` and gaps `−ε₂N_i′`. The quantum
//! Hamiltonian on degree `d` is diagonalized and its spectrum compared, as a
//! sorted multiset, with the cubic energies of those profiles.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::Result;
use crate::fock::{diagonalize, eigenvalue_formula, hamiltonian_spectrum, state_resolvent, QuantumParams};
use crate::multiphase::{gfz_action, PhaseParams};
use crate::partition::Partition;
use crate::profiles::{partition_profile, renormalize, Anisotropy, Profile};

/// Points where the per-state generating function is compared.
pub const PROBE_POINTS: [(f64, f64); 2] = [(10.0, 0.0), (10.0, 5.0)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BSState {
    pub partition: Partition,
    pub profile: Profile,
    /// Band multipliers `N_i`, from the top band down.
    pub band_multipliers: Vec<u64>,
    /// Gap multipliers `N_i′`, from the top gap down.
    pub gap_multipliers: Vec<u64>,
    pub classical_energy: f64,
}

/// Multipliers of `λ`: multiplicities of its distinct parts and the drops
/// between consecutive distinct parts (the last drop is to zero).
pub fn multipliers(lambda: &Partition) -> (Vec<u64>, Vec<u64>) {
    let distinct = lambda.distinct_parts();
    let bands = distinct.iter().map(|&(_, m)| m as u64).collect();
    let gaps = distinct
        .iter()
        .enumerate()
        .map(|(i, &(p, _))| (p - distinct.get(i + 1).map_or(0, |&(q, _)| q)) as u64)
        .collect();
    (bands, gaps)
}

fn bs_state(lambda: Partition, anis: Anisotropy, a: f64) -> BSState {
    let profile = partition_profile(&lambda, anis, a);
    let (band_multipliers, gap_multipliers) = multipliers(&lambda);
    BSState {
        classical_energy: profile.energy(),
        partition: lambda,
        profile,
        band_multipliers,
        gap_multipliers,
    }
}

/// One state per partition with `|λ| ≤ dmax`, by degree and then reverse lexicographic order.
pub fn bs_enumerate(eps: f64, hbar: f64, a: f64, dmax: usize) -> Result<Vec<BSState>> {
    let anis = Anisotropy::renormalized(eps, hbar)?;
    Ok((0..=dmax)
        .flat_map(Partition::all)
        .map(|lambda| bs_state(lambda, anis, a))
        .collect())
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn max_deviation(x: &[f64], y: &[f64]) -> f64 {
    if x.len() != y.len() {
        return f64::INFINITY;
    }
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub quantum: Vec<f64>,
    pub classical: Vec<f64>,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateCheck {
    pub partition: Partition,
    /// `|Ô₃ eigenvalue − profile energy|` for the labeled eigenvector.
    pub energy_deviation: f64,
    /// Largest `|formula − observed|` of the resolvent over the probe points.
    pub resolvent_deviation: f64,
    /// Largest eigenvector residual of `T̂↑(u)` over the probe points.
    pub residual: f64,
}

/// Comparison against unrenormalized profiles (units `ε̄` and `ℏ/ε̄`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativeControl {
    pub degree: usize,
    pub quantum: Vec<f64>,
    pub classical: Vec<f64>,
    pub max_deviation: f64,
    /// True when the control disagrees with the quantum spectrum, as it should.
    pub rejected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub eps: f64,
    pub hbar: f64,
    pub a: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub tol: f64,
    pub degrees: Vec<DegreeComparison>,
    pub states: Vec<StateCheck>,
    pub max_deviation: f64,
    pub errors: Vec<String>,
    pub negative_control: Option<NegativeControl>,
    pub pass: bool,
}

struct DegreeOutcome {
    comparison: DegreeComparison,
    states: Vec<StateCheck>,
    errors: Vec<String>,
}

fn check_degree(d: usize, params: &QuantumParams<f64>, anis: Anisotropy) -> Result<DegreeOutcome> {
    let quantum = hamiltonian_spectrum(d, params)?;
    let classical = sorted(
        Partition::all(d)
            .iter()
            .map(|l| partition_profile(l, anis, params.a).energy())
            .collect(),
    );
    let comparison = DegreeComparison {
        degree: d,
        max_deviation: max_deviation(&quantum, &classical),
        quantum,
        classical,
    };
    let mut errors = Vec::new();
    let mut states = Vec::new();
    match diagonalize(d, params) {
        Ok(diag) => {
            for s in &diag.states {
                let profile = partition_profile(&s.partition, anis, params.a);
                let mut resolvent_deviation: f64 = 0.0;
                let mut residual: f64 = 0.0;
                for (re, im) in PROBE_POINTS {
                    let u = Complex64::new(re, im);
                    let predicted = eigenvalue_formula(&s.partition, params.a, anis.r2, anis.r1, u)?;
                    let (observed, resid) = state_resolvent(d, params, &s.vector, u)?;
                    resolvent_deviation = resolvent_deviation.max((predicted - observed).norm());
                    residual = residual.max(resid);
                }
                states.push(StateCheck {
                    partition: s.partition.clone(),
                    energy_deviation: (s.o3 - profile.energy()).abs(),
                    resolvent_deviation,
                    residual,
                });
            }
        }
        Err(e) => errors.push(format!("degree {d}: {e}")),
    }
    Ok(DegreeOutcome {
        comparison,
        states,
        errors,
    })
}

fn negative_control(params: &QuantumParams<f64>, tol: f64) -> Result<Option<NegativeControl>> {
    let Ok(anis) = Anisotropy::classical(params.eps, params.hbar) else {
        return Ok(None);
    };
    let d = 1;
    let quantum = hamiltonian_spectrum(d, params)?;
    let classical = sorted(
        Partition::all(d)
            .iter()
            .map(|l| partition_profile(l, anis, params.a).energy())
            .collect(),
    );
    let dev = max_deviation(&quantum, &classical);
    Ok(Some(NegativeControl {
        degree: d,
        quantum,
        classical,
        max_deviation: dev,
        rejected: !(dev < tol),
    }))
}

/// Compares quantum and classical spectra for every degree up to `dmax`.
/// A mismatch gives a failing report, not an error.
pub fn verify_theorem1(eps: f64, hbar: f64, a: f64, dmax: usize, tol: f64) -> Result<Theorem1Report> {
    let params = QuantumParams::<f64>::from_f64(eps, hbar, a)?;
    let (eps1, eps2) = renormalize(eps, hbar)?;
    let anis = Anisotropy::new(eps2, eps1)?;
    let outcomes: Vec<DegreeOutcome> = (0..=dmax)
        .into_par_iter()
        .map(|d| check_degree(d, &params, anis))
        .collect::<Result<_>>()?;
    let mut degrees = Vec::new();
    let mut states = Vec::new();
    let mut errors = Vec::new();
    for o in outcomes {
        degrees.push(o.comparison);
        states.extend(o.states);
        errors.extend(o.errors);
    }
    let max_dev = degrees
        .iter()
        .map(|c| c.max_deviation)
        .chain(states.iter().flat_map(|s| [s.energy_deviation, s.resolvent_deviation, s.residual]))
        .fold(0.0, f64::max);
    let negative_control = negative_control(&params, tol)?;
    Ok(Theorem1Report {
        eps,
        hbar,
        a,
        eps1,
        eps2,
        tol,
        degrees,
        states,
        max_deviation: max_dev,
        pass: errors.is_empty() && max_dev < tol,
        errors,
        negative_control,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionQuantum {
    pub i: usize,
    pub action: f64,
    /// `action / 2πℏ`.
    pub ratio: f64,
    pub nearest: u64,
    pub deviation: f64,
    pub integral: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Part1Report {
    pub hbar: f64,
    pub tol: f64,
    pub actions: Vec<ActionQuantum>,
    pub pass: bool,
}

/// Gap actions of a periodic multi-phase solution measured in units of `2πℏ`.
pub fn part1_action_report(
    p: &PhaseParams,
    hbar: f64,
    samples: usize,
    k_modes: usize,
    tol: f64,
) -> Result<Part1Report> {
    if !(hbar > 0.0) {
        return Err(crate::Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    let actions: Vec<ActionQuantum> = (1..=p.phases())
        .map(|i| {
            let action = gfz_action(p, i, samples, k_modes)?;
            let ratio = action / (2.0 * PI * hbar);
            let nearest = ratio.round().max(0.0) as u64;
            let deviation = (ratio - nearest as f64).abs();
            Ok(ActionQuantum {
                i,
                action,
                ratio,
                nearest,
                deviation,
                integral: nearest >= 1 && deviation < tol,
            })
        })
        .collect::<Result<_>>()?;
    let pass = actions.iter().all(|a| a.integral);
    Ok(Part1Report {
        hbar,
        tol,
        actions,
        pass,
    })
}
