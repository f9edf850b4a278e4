use clickstat::detectors::{
    click_distribution, factorial_moment, Detector, DetectorConfig, OutcomeSpace,
};
use clickstat::multimode::{joint_counts, joint_moment, multimode_index_sets, multimode_matrices};
use clickstat::sampler::sample;
use clickstat::states::{Parity, StateSpec};
use clickstat::witnesses::{enumerate_index_sets, g_matrix, witness_matrix, MatrixKind};
use num_complex::Complex64;
use proptest::prelude::*;

fn detector_strategy() -> impl Strategy<Value = DetectorConfig> {
    let eta = 0.05f64..1.0;
    let dark = prop_oneof![Just(0.0), 0.0f64..0.05];
    prop_oneof![
        eta.clone().prop_map(DetectorConfig::photoelectric),
        (1u32..=6, eta.clone()).prop_map(|(n, e)| DetectorConfig::on_off(n, e)),
        (1u32..=4, 1u32..=3, eta).prop_map(|(n, k, e)| DetectorConfig::pnr(n, k, e)),
    ]
    .prop_flat_map(move |c| dark.clone().prop_map(move |d| c.with_dark(d)))
}

fn classical_strategy() -> impl Strategy<Value = StateSpec> {
    prop::collection::vec((0.05f64..1.0, -2.0f64..2.0, -2.0f64..2.0), 1..4).prop_map(|parts| {
        let total: f64 = parts.iter().map(|p| p.0).sum();
        let parts = parts
            .into_iter()
            .map(|(w, re, im)| (w / total, StateSpec::coherent(&[Complex64::new(re, im)])))
            .collect();
        StateSpec::mixture(parts).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classical_light_never_flags(state in classical_strategy(), config in detector_strategy()) {
        let det = Detector::new(config).unwrap();
        for kind in [MatrixKind::Counts, MatrixKind::Moments] {
            for set in enumerate_index_sets(det.model(), kind).unwrap() {
                if set.is_empty() {
                    continue;
                }
                let r = witness_matrix(&state, &det, &set, kind).unwrap();
                prop_assert!(!r.is_negative(), "{} {}: {}", kind.name(), set, r.min_eig);
            }
        }
    }

    #[test]
    fn g_matrix_keeps_the_sign(intensity in 0.01f64..4.0, odd in any::<bool>(), bins in 2u32..=6) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let state = StateSpec::cat_real(intensity, parity).unwrap();
        let det = Detector::new(DetectorConfig::on_off(bins, 0.7)).unwrap();
        for set in enumerate_index_sets(det.model(), MatrixKind::Moments).unwrap() {
            let m = witness_matrix(&state, &det, &set, MatrixKind::Moments).unwrap();
            let g = g_matrix(&m).unwrap();
            prop_assert_eq!(m.sign(), g.sign(), "{}", set);
        }
    }

    #[test]
    fn click_distribution_is_normalized(intensity in 0.0f64..20.0, odd in any::<bool>(), bins in 1u32..=8, eta in 0.05f64..1.0) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let state = StateSpec::cat_real(intensity.max(1e-3), parity).unwrap();
        let det = Detector::new(DetectorConfig::on_off(bins, eta)).unwrap();
        let c = click_distribution(&state, &det).unwrap();
        prop_assert!((c.total() - 1.0).abs() < 1e-12);
        prop_assert!(c.probs().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn single_mode_reduction(intensity in 0.01f64..5.0, odd in any::<bool>(), m in 0u32..6, eta in 0.1f64..1.0) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let state = StateSpec::cat_real(intensity, parity).unwrap();
        let joint = joint_moment(&state, &[m], eta).unwrap();
        let single = factorial_moment(&state, &DetectorConfig::photoelectric(eta), m).unwrap();
        prop_assert!((joint - single).abs() <= 1e-12 * single.abs().max(1e-300));
    }

    #[test]
    fn mode_permutation_invariance(
        amps in prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 3),
        odd in any::<bool>(),
        m in prop::collection::vec(0u32..4, 3),
    ) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let alpha: Vec<Complex64> = amps.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
        prop_assume!(alpha.iter().map(|a| a.norm_sqr()).sum::<f64>() > 0.05);
        let state = StateSpec::cat(&alpha, parity).unwrap();
        let perm = [2usize, 0, 1];
        let permuted = state.permute_modes(&perm);
        let m_perm: Vec<u32> = (0..3).map(|j| m[perm[j]]).collect();
        for (a, b) in [
            (joint_moment(&state, &m, 0.8).unwrap(), joint_moment(&permuted, &m_perm, 0.8).unwrap()),
            (joint_counts(&state, &m, 0.8).unwrap(), joint_counts(&permuted, &m_perm, 0.8).unwrap()),
        ] {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300), "{a} vs {b}");
        }
    }

    #[test]
    fn multimode_classical_psd(amps in prop::collection::vec(-1.5f64..1.5, 2), eta in 0.1f64..1.0) {
        let alpha: Vec<Complex64> = amps.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let state = StateSpec::coherent(&alpha);
        for set in multimode_index_sets(2, 1).unwrap() {
            for kind in [MatrixKind::Counts, MatrixKind::Moments] {
                let r = multimode_matrices(&state, &set, eta, kind).unwrap();
                prop_assert!(!r.is_negative(), "{}: {}", set, r.min_eig);
            }
        }
    }
}

#[test]
fn sampler_frequencies_converge() {
    let state = StateSpec::cat_real(1.0, Parity::Odd).unwrap();
    let det = Detector::new(DetectorConfig::on_off(5, 0.6)).unwrap();
    let exact = click_distribution(&state, &det).unwrap();
    for shots in [10_000u64, 100_000, 1_000_000] {
        let run = sample(&exact, shots, 42).unwrap();
        assert_eq!(run.counts.iter().sum::<u64>(), shots);
        assert_eq!(run.space, OutcomeSpace::for_model(det.model()).unwrap());
        let emp = run.empirical().unwrap();
        for (o, p) in exact.iter() {
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            let q = emp.prob(o);
            assert!((q - p).abs() <= 5.0 * sigma + 1e-12, "{shots} {o:?}: {q} vs {p}");
        }
    }
}

#[test]
fn sampling_is_deterministic() {
    let state = StateSpec::cat_real(0.5, Parity::Even).unwrap();
    let det = Detector::new(DetectorConfig::pnr(4, 2, 0.9)).unwrap();
    let exact = clickstat::detectors::pnr_distribution(&state, &det).unwrap();
    let a = sample(&exact, 5000, 9).unwrap();
    let b = sample(&exact, 5000, 9).unwrap();
    let c = sample(&exact, 5000, 10).unwrap();
    assert_eq!(a.counts, b.counts);
    assert_ne!(a.counts, c.counts);
}
