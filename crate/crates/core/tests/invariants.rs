mod common;

use cvgauss::entanglement::{classify_three_mode, log_negativity, npt_test, simon_test, ThreeModeClass};
use cvgauss::linalg::{max_abs_diff, symplectic_form};
use cvgauss::ops::GaussianChannel;
use cvgauss::protocols::{teleport, teleport_mode};
use cvgauss::random::{
    random_clifford_circuit, random_local_channel, random_passive, random_separable_two_mode, random_state,
    random_symplectic, RandomSpec,
};
use cvgauss::GaussianState;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use common::rng;

fn spec() -> RandomSpec {
    RandomSpec::default()
}

/// Relabels the modes of a state: new mode `k` is old mode `perm[k]`.
fn permute(st: &GaussianState, perm: &[usize]) -> GaussianState {
    let idx: Vec<usize> = perm.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| st.mean()[i]));
    let cov = DMatrix::from_fn(idx.len(), idx.len(), |a, b| st.cov()[(idx[a], idx[b])]);
    GaussianState::new(mean, cov).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_respects_uncertainty(seed in any::<u64>(), n in 1usize..=4) {
        let st = random_state(n, &spec(), &mut rng(seed)).unwrap();
        prop_assert!(st.validate().is_ok());
        let bound = 16f64.powi(-(n as i32));
        prop_assert!(st.cov().determinant() >= bound * (1.0 - 1e-9));
    }

    #[test]
    fn compose_is_associative(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let a = random_symplectic(n, 0.8, &mut r).unwrap();
        let b = random_symplectic(n, 0.8, &mut r).unwrap();
        let c = GaussianChannel::displace(DVector::from_element(2 * n, 0.3)).unwrap()
            .compose(&random_symplectic(n, 0.8, &mut r).unwrap()).unwrap();
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert!(max_abs_diff(left.matrix(), right.matrix()) < 1e-10);
        prop_assert!((left.displacement() - right.displacement()).amax() < 1e-10);
        prop_assert!(left.symplectic_defect() < 1e-10);
    }

    #[test]
    fn gates_are_symplectic(theta in -6.3f64..6.3, r in -2.0f64..2.0, phi in -3.2f64..3.2, eta in -3.0f64..3.0) {
        let gates = [
            GaussianChannel::phase_shift(3, 1, theta).unwrap(),
            GaussianChannel::beam_splitter(3, 0, 2, theta).unwrap(),
            GaussianChannel::squeeze(3, 2, r, phi).unwrap(),
            GaussianChannel::two_mode_squeeze(3, 1, 0, r).unwrap(),
            GaussianChannel::sum(3, 2, 1).unwrap(),
            GaussianChannel::fourier(3, 0).unwrap(),
            GaussianChannel::shear(3, 1, eta).unwrap(),
            GaussianChannel::n_splitter(3).unwrap(),
        ];
        let l = symplectic_form(3);
        for g in gates {
            let s = g.matrix();
            prop_assert!(max_abs_diff(&(s * &l * s.transpose()), &l) < 1e-10);
        }
    }

    #[test]
    fn passive_networks_conserve_photons(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let st = random_state(n, &spec(), &mut r).unwrap();
        let out = random_passive(n, &mut r).unwrap().apply(&st).unwrap();
        prop_assert!((out.total_photon_number() - st.total_photon_number()).abs() < 1e-10);
    }

    #[test]
    fn unitaries_preserve_purity(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let st = random_state(n, &spec(), &mut r).unwrap();
        let out = random_symplectic(n, 0.8, &mut r).unwrap().apply(&st).unwrap();
        prop_assert!(out.validate().is_ok());
        prop_assert!((out.purity().unwrap() - st.purity().unwrap()).abs() < 1e-8);
    }

    #[test]
    fn log_negativity_is_locally_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let st = random_state(2, &spec(), &mut r).unwrap();
        let local = random_local_channel(2, &[vec![0], vec![1]], 0.8, &mut r).unwrap();
        let moved = local.apply(&st).unwrap();
        let (a, b) = (log_negativity(&st, &[1]).unwrap(), log_negativity(&moved, &[1]).unwrap());
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn classification_follows_relabelling(seed in any::<u64>(), thermal in 0.0f64..0.6) {
        let mut r = rng(seed);
        let st = random_state(3, &RandomSpec { max_thermal: thermal, ..spec() }, &mut r).unwrap();
        let base = classify_three_mode(&st).unwrap();
        let perm = [2, 0, 1];
        let moved = classify_three_mode(&permute(&st, &perm)).unwrap();
        for k in 0..3 {
            prop_assert_eq!(moved.npt[k], base.npt[perm[k]]);
        }
        let same_kind = matches!(
            (base.class, moved.class),
            (ThreeModeClass::FullyInseparable, ThreeModeClass::FullyInseparable)
                | (ThreeModeClass::OneModeBiseparable { .. }, ThreeModeClass::OneModeBiseparable { .. })
                | (ThreeModeClass::TwoModeBiseparable { .. }, ThreeModeClass::TwoModeBiseparable { .. })
                | (ThreeModeClass::ThreeModeBiseparableOrSeparable, ThreeModeClass::ThreeModeBiseparableOrSeparable)
        );
        prop_assert!(same_kind);
    }

    #[test]
    fn separable_states_pass_every_test(seed in any::<u64>()) {
        let st = random_separable_two_mode(&spec(), &mut rng(seed)).unwrap();
        prop_assert!(!simon_test(&st).unwrap().violated());
        prop_assert!(!npt_test(&st, &[0]).unwrap().violated());
        prop_assert!(log_negativity(&st, &[0]).unwrap() < 1e-9);
    }

    #[test]
    fn unit_gain_teleport_is_a_convolution(seed in any::<u64>(), r in 0.0f64..3.0) {
        let st = random_state(1, &spec(), &mut rng(seed)).unwrap();
        let out = teleport_mode(&st, 0, r, 1.0).unwrap();
        prop_assert!((out.mean() - st.mean()).amax() < 1e-12);
        let excess = out.cov() - st.cov();
        let want = DMatrix::identity(2, 2) * ((-2.0 * r).exp() / 2.0);
        prop_assert!(max_abs_diff(&excess, &want) < 1e-12);
    }

    #[test]
    fn unit_gain_fidelity_ignores_the_amplitude(x in -5.0f64..5.0, p in -5.0f64..5.0, r in 0.0f64..2.5) {
        let f = teleport(&GaussianState::coherent(x, p), r, 1.0).unwrap().fidelity.unwrap();
        prop_assert!((f - 1.0 / (1.0 + (-2.0 * r).exp())).abs() < 1e-12);
    }

    #[test]
    fn small_clifford_circuits_match(seed in any::<u64>()) {
        let c = random_clifford_circuit(4, 20, 0, &mut rng(seed)).unwrap();
        prop_assert!(c.compare_backends().unwrap().max() < 1e-10);
        let l = symplectic_form(4);
        let s = c.channel().unwrap();
        prop_assert!(max_abs_diff(&(s.matrix() * &l * s.matrix().transpose()), &l) < 1e-10);
        let t = c.run_stabilizer().unwrap();
        prop_assert_eq!(t.state_size(), 4 * 16 + 3 * 4);
    }
}
