use bolab_core::correspondence::{bs_enumerate, part1_action_report, verify_theorem1};
use bolab_core::fock::{
    self, commutator_norm, diagonalize, hamiltonian, hamiltonian_spectrum, hierarchy_down, hierarchy_up,
    jack_oracle, jack_vector, overlap, resolvent_identity_error, FockVector, QuantumParams,
};
use bolab_core::multiphase::{periodicity_check, PhaseParams};
use bolab_core::profiles::{check_quantization, partition_profile, Anisotropy};
use bolab_core::scalar::{ratio, Scalar};
use bolab_core::Partition;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn float(eps: f64, hbar: f64, a: f64) -> QuantumParams<f64> {
    QuantumParams::from_f64(eps, hbar, a).unwrap()
}

fn exact(eps: f64, hbar: f64, a: f64) -> QuantumParams<BigRational> {
    QuantumParams::from_f64(eps, hbar, a).unwrap()
}

#[test]
fn commutators_vanish_in_floating_point() {
    for q in [float(1.0, 2.0, 0.0), float(1.0, 2.0, 0.5), float(0.8, std::f64::consts::SQRT_2, 0.3)] {
        for d in 0..=5 {
            for l1 in 2..=5 {
                for l2 in l1 + 1..=5 {
                    let c = commutator_norm(d, l1, l2, &q);
                    assert!(c < 1e-10, "d={d} ({l1},{l2}) {q:?}: {c}");
                }
            }
        }
    }
}

#[test]
fn commutators_vanish_exactly() {
    let q = exact(1.0, 2.0, 0.5);
    for d in 0..=5 {
        for l1 in 2..=5 {
            for l2 in l1 + 1..=5 {
                assert_eq!(commutator_norm(d, l1, l2, &q), 0.0);
            }
        }
    }
}

#[test]
fn operator_blocks_are_self_adjoint() {
    let q = float(0.8, std::f64::consts::SQRT_2, 0.3);
    for d in 0..=5 {
        for t in hierarchy_up(d, 5, &q).iter().chain(&hierarchy_down(d, 4, &q)) {
            assert!(t.self_adjoint_defect(&q.hbar) < 1e-12, "{} d={d}", t.label);
        }
        assert!(hamiltonian(d, &q).self_adjoint_defect(&q.hbar) < 1e-12);
    }
}

#[test]
fn resolvent_identity_to_degree_four() {
    let q = float(1.0, 2.0, 0.0);
    for d in 0..=4 {
        let e = resolvent_identity_error(d, &q, Complex64::new(10.0, 0.0)).unwrap();
        assert!(e < 1e-8, "{d}: {e}");
    }
}

#[test]
fn degree_two_golden_exact() {
    let q = exact(1.0, 2.0, 0.0);
    let h = hamiltonian(2, &q);
    let two = BigRational::from_i64(2);
    let j2 = jack_vector(&Partition::new(vec![2]).unwrap(), &two, &two).unwrap();
    let j11 = jack_vector(&Partition::new(vec![1, 1]).unwrap(), &two, &two).unwrap();
    let c2 = fock::coordinates(&j2, &h.basis);
    let c11 = fock::coordinates(&j11, &h.basis);
    assert_eq!(c2, vec![ratio(1, 1), ratio(1, 1)]);
    assert_eq!(c11, vec![ratio(-2, 1), ratio(1, 1)]);
    assert_eq!(h.eigenvalue_of(&c2), Some(ratio(0, 1)));
    assert_eq!(h.eigenvalue_of(&c11), Some(ratio(-36, 1)));

    let q = exact(0.0, 1.0, 0.0);
    let h = hamiltonian(2, &q);
    let one = BigRational::from_i64(1);
    let s2 = fock::coordinates(&jack_vector(&Partition::new(vec![2]).unwrap(), &one, &one).unwrap(), &h.basis);
    let s11 = fock::coordinates(&jack_vector(&Partition::new(vec![1, 1]).unwrap(), &one, &one).unwrap(), &h.basis);
    assert_eq!(h.eigenvalue_of(&s2), Some(ratio(6, 1)));
    assert_eq!(h.eigenvalue_of(&s11), Some(ratio(-6, 1)));
}

#[test]
fn exact_jack_vectors_are_exact_eigenvectors() {
    // (ε̄, ℏ) = (1, 6) renormalizes to (ε₁, ε₂) = (3, −2).
    let q = exact(1.0, 6.0, 0.0);
    let e1 = BigRational::from_i64(3);
    let anis = Anisotropy::renormalized(1.0, 6.0).unwrap();
    for d in 1..=4 {
        let h = hamiltonian(d, &q);
        for lambda in Partition::all(d) {
            let j = jack_vector(&lambda, &e1, &q.hbar).unwrap();
            let e = h.eigenvalue_of(&fock::coordinates(&j, &h.basis)).expect("eigenvector");
            let energy = partition_profile(&lambda, anis, 0.0).energy();
            assert!((e.to_f64() - energy).abs() < 1e-9, "{lambda}: {e} vs {energy}");
        }
    }
}

#[test]
fn jack_oracle_matches_eigenvectors() {
    for (eps, hbar) in [(1.0, 2.0), (0.7, 1.3)] {
        let q = float(eps, hbar, 0.0);
        for d in 1..=5 {
            let diag = diagonalize(d, &q).unwrap();
            for s in &diag.states {
                let v: FockVector<f64> = fock::from_coordinates(&s.vector, &diag.basis);
                let j = jack_oracle(&s.partition, eps, hbar).unwrap();
                let o = overlap(&v, &j, hbar);
                assert!(o > 1.0 - 1e-10, "{} at ({eps},{hbar}): {o}", s.partition);
            }
        }
    }
}

#[test]
fn eigenvectors_are_fock_orthogonal() {
    let q = float(1.0, 2.0, 0.5);
    for d in 1..=5 {
        let diag = diagonalize(d, &q).unwrap();
        let vs: Vec<FockVector<f64>> = diag
            .states
            .iter()
            .map(|s| fock::from_coordinates(&s.vector, &diag.basis))
            .collect();
        for i in 0..vs.len() {
            for j in 0..i {
                let c = fock::inner(&vs[i], &vs[j], &q.hbar)
                    / (fock::inner(&vs[i], &vs[i], &q.hbar) * fock::inner(&vs[j], &vs[j], &q.hbar)).sqrt();
                assert!(c.abs() < 1e-10, "d={d}: {c}");
            }
        }
    }
}

#[test]
fn ladder_operators_are_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let hbar = 1.7;
    let random = |rng: &mut ChaCha8Rng| -> FockVector<f64> {
        (0..=4)
            .flat_map(Partition::all)
            .map(|mu| (mu, rng.gen_range(-1.0..1.0)))
            .collect()
    };
    for _ in 0..10 {
        let xi = random(&mut rng);
        let eta = random(&mut rng);
        for k in 1..=3 {
            let lhs = fock::inner(&fock::ladder_apply(k, &xi, &hbar).unwrap(), &eta, &hbar);
            let rhs = fock::inner(&xi, &fock::ladder_apply(-k, &eta, &hbar).unwrap(), &hbar);
            assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0), "{lhs} {rhs}");
        }
    }
}

#[test]
fn spectrum_equals_profile_energies() {
    for (eps, hbar, a) in [(1.0, 2.0, 0.0), (0.0, 1.0, 0.0), (1.0, 2.0, 0.5), (0.3, 0.9, -0.2)] {
        let q = float(eps, hbar, a);
        let anis = Anisotropy::renormalized(eps, hbar).unwrap();
        for d in 0..=6 {
            let quantum = hamiltonian_spectrum(d, &q).unwrap();
            let mut classical: Vec<f64> = Partition::all(d)
                .iter()
                .map(|l| partition_profile(l, anis, a).energy())
                .collect();
            classical.sort_by(f64::total_cmp);
            for (x, y) in quantum.iter().zip(&classical) {
                assert!((x - y).abs() < 1e-8 * y.abs().max(1.0), "d={d} ({eps},{hbar},{a}): {x} vs {y}");
            }
        }
    }
}

#[test]
fn theorem_one_parameter_triples() {
    let r = verify_theorem1(1.0, 2.0, 0.0, 6, 1e-8).unwrap();
    assert!(r.pass, "{:?} {}", r.errors, r.max_deviation);
    assert_eq!(r.states.len(), 30);
    let control = r.negative_control.unwrap();
    assert!(control.rejected);

    let r = verify_theorem1(0.0, 1.0, 0.0, 3, 1e-8).unwrap();
    assert!(r.pass, "{:?}", r.errors);
    assert_eq!(r.degrees[2].quantum.len(), 2);
    assert!((r.degrees[2].quantum[0] + 6.0).abs() < 1e-10 && (r.degrees[2].quantum[1] - 6.0).abs() < 1e-10);
    assert!(r.negative_control.is_none());

    let r = verify_theorem1(1.0, 2.0, 0.5, 4, 1e-8).unwrap();
    assert!(r.pass, "{:?}", r.errors);
}

#[test]
fn centering_shifts_spectra_consistently() {
    for d in 0..=3 {
        let base = hamiltonian_spectrum(d, &float(1.0, 2.0, 0.0)).unwrap();
        let moved = hamiltonian_spectrum(d, &float(1.0, 2.0, 0.5)).unwrap();
        let anis = Anisotropy::renormalized(1.0, 2.0).unwrap();
        let mut classical: Vec<f64> = Partition::all(d)
            .iter()
            .map(|l| partition_profile(l, anis, 0.5).energy())
            .collect();
        classical.sort_by(f64::total_cmp);
        assert_eq!(base.len(), moved.len());
        for (x, y) in moved.iter().zip(&classical) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn bs_states_satisfy_quantization() {
    for s in bs_enumerate(1.0, 2.0, 0.0, 6).unwrap() {
        if s.partition.is_empty() {
            continue;
        }
        let rep = check_quantization(&s.profile, 1.0, 2.0, true, 1e-9).unwrap();
        assert_eq!(rep.band_multipliers.as_ref(), Some(&s.band_multipliers));
        assert_eq!(rep.gap_multipliers.as_ref(), Some(&s.gap_multipliers));
        // The same profile, read as classical data with dispersion ε₁, is periodic with N_i.
        let p = PhaseParams::new(s.profile.ascending(), vec![0.0; s.profile.phases()], 2.0).unwrap();
        let n: Vec<u64> = periodicity_check(&p, 1e-9).unwrap();
        assert_eq!(n, s.band_multipliers);
    }
}

#[test]
fn part_one_reports() {
    let p = PhaseParams::one_phase([-1.0, 0.0, 2.0], 0.0, 1.0).unwrap();
    let r = part1_action_report(&p, 1.0, 256, 127, 1e-4).unwrap();
    assert!(r.pass && r.actions[0].nearest == 1);
    let r = part1_action_report(&p, 0.4, 256, 127, 1e-4).unwrap();
    assert!(!r.pass);
    assert!((r.actions[0].ratio - 2.5).abs() < 1e-4);
    let p = PhaseParams::new(vec![-6.0, -4.5, -3.5, -3.0, -1.0], vec![0.3, 1.1], 1.0).unwrap();
    let r = part1_action_report(&p, 0.5, 256, 127, 1e-3).unwrap();
    assert_eq!(r.actions[0].nearest, 1);
    assert!(r.actions[0].deviation < 1e-3);
    assert_eq!(r.actions[1].nearest, 3);
}

#[test]
fn random_irrational_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..4 {
        let eps = rng.gen_range(0.1..2.0);
        let hbar = rng.gen_range(0.1..3.0);
        let a = rng.gen_range(-1.0..1.0);
        let r = verify_theorem1(eps, hbar, a, 4, 1e-8).unwrap();
        assert!(r.pass, "({eps},{hbar},{a}): {:?} {}", r.errors, r.max_deviation);
    }
}
