mod common;

use common::{instance, random_sparse, random_weighted, Instance};
use locsamp::graph::{hop_distance, read_graph, write_graph, HopDistance};
use locsamp::reconstruct::{energy_ratio, reconstruct_tikhonov, relative_error, snr, tikhonov_objective};
use locsamp::sampling::{
    assemble_plan, band_energies, draw_samples, kernel_matrix, optimal_distribution, reorder_with_packing, KernelPoly,
    Provenance, SamplingDistribution,
};
use locsamp::spectral::{ideal_lowpass_apply, synth_bandlimited};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use proptest::prelude::*;

fn graph_instance(n: usize, extra: usize, seed: u64) -> Instance {
    let chords = n * (n - 1) / 2 - (n - 1);
    instance(random_weighted(n, extra.min(chords), seed))
}

fn kernel() -> impl Strategy<Value = KernelPoly> {
    prop::collection::vec(-1.0f64..2.0, 1..4).prop_map(|mut c| {
        // keep g(0) away from zero so the kernel never vanishes on lambda_1
        c[0] = 1.0 + c[0].abs();
        KernelPoly::new(c).unwrap()
    })
}

fn distribution(n: usize) -> impl Strategy<Value = SamplingDistribution> {
    prop::collection::vec(0.01f64..1.0, n)
        .prop_map(|w| SamplingDistribution::from_weights(w, Provenance::Custom).unwrap())
}

/// Largest bandwidth `<= k` without a repeated eigenvalue at the band edge.
fn valid_band(inst: &Instance, k: usize) -> Option<usize> {
    (1..=k).rev().find(|&k| inst.basis.check_band_edge(k).is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn laplacian_rows_sum_to_zero_and_is_psd(n in 2usize..25, extra in 0usize..20, seed in any::<u64>()) {
        let inst = graph_instance(n, extra, seed);
        let l = inst.laplacian.matrix();
        for r in 0..n {
            prop_assert!(l.row(r).sum().abs() < 1e-12);
        }
        prop_assert_eq!(l, &l.transpose());
        let min = SymmetricEigen::new(l.clone()).eigenvalues.min();
        prop_assert!(min > -1e-10, "min eigenvalue {}", min);
    }

    #[test]
    fn hop_distance_is_a_metric(n in 2usize..18, p in 0.05f64..0.4, seed in any::<u64>()) {
        let g = random_sparse(n, p, seed);
        let d = |i, j| hop_distance(&g, i, j).unwrap();
        for i in 0..n {
            prop_assert_eq!(d(i, i), HopDistance::Finite(0));
            for j in 0..n {
                prop_assert_eq!(d(i, j), d(j, i));
                for k in 0..n {
                    if let (HopDistance::Finite(a), HopDistance::Finite(b)) = (d(i, k), d(k, j)) {
                        prop_assert!(d(i, j) <= HopDistance::Finite(a + b));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_support_is_within_its_degree(n in 3usize..20, extra in 0usize..6, seed in any::<u64>(), poly in kernel()) {
        let inst = graph_instance(n, extra, seed);
        let op = kernel_matrix(&inst.laplacian, &poly);
        for i in 0..n {
            for j in 0..n {
                if hop_distance(&inst.graph, i, j).unwrap().exceeds(poly.degree()) {
                    prop_assert_eq!(op.matrix()[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn band_energies_sum_to_kernel_energy(n in 3usize..25, extra in 0usize..20, seed in any::<u64>(), poly in kernel(), k in 1usize..25) {
        let inst = graph_instance(n, extra, seed);
        let Some(k) = valid_band(&inst, k.min(n)) else { return Ok(()) };
        let op = kernel_matrix(&inst.laplacian, &poly);
        let total: f64 = band_energies(&inst.basis, &op, k).unwrap().iter().sum();
        let expected = poly.band_energy(&inst.basis, k).unwrap();
        prop_assert!((total - expected).abs() <= 1e-9 * expected.max(1.0), "{} vs {}", total, expected);
    }

    #[test]
    fn optimal_distribution_is_a_distribution(n in 3usize..25, extra in 0usize..20, seed in any::<u64>(), poly in kernel(), k in 1usize..25) {
        let inst = graph_instance(n, extra, seed);
        let Some(k) = valid_band(&inst, k.min(n)) else { return Ok(()) };
        let op = kernel_matrix(&inst.laplacian, &poly);
        let Ok(p) = optimal_distribution(&inst.basis, &op, k) else { return Ok(()) };
        let probs = p.probabilities();
        prop_assert_eq!(probs.len(), n);
        prop_assert!(probs.iter().all(|&q| q > 0.0 && q <= 1.0));
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reordering_permutes_and_packs(
        (n, q) in (3usize..30).prop_flat_map(|n| (Just(n), distribution(n))),
        p in 0.05f64..0.4,
        seed in any::<u64>(),
        hops in 0usize..4,
    ) {
        let g = random_sparse(n, p, seed);
        let r = reorder_with_packing(&g, &q, hops).unwrap();
        let mut before = q.probabilities().to_vec();
        let mut after = r.distribution.probabilities().to_vec();
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        prop_assert_eq!(before, after);
        for (a, &u) in r.packing.iter().enumerate() {
            for &v in &r.packing[a + 1..] {
                prop_assert!(hop_distance(&g, u, v).unwrap().exceeds(hops));
            }
        }
        // packing vertices hold the largest values, in order
        let mut ranked = q.probabilities().to_vec();
        ranked.sort_by(|a, b| b.total_cmp(a));
        for (rank, &v) in r.packing.iter().enumerate() {
            prop_assert_eq!(r.distribution.probabilities()[v], ranked[rank]);
        }
    }

    #[test]
    fn samples_stay_in_range(
        (n, q) in (1usize..40).prop_flat_map(|n| (Just(n), distribution(n))),
        m in 1usize..200,
        seed in any::<u64>(),
    ) {
        let omega = draw_samples(&q, m, seed).unwrap();
        prop_assert_eq!(omega.len(), m);
        prop_assert!(omega.iter().all(|&w| w < n));
        prop_assert_eq!(draw_samples(&q, m, seed).unwrap(), omega);
    }

    #[test]
    fn energy_ratio_is_monotone_and_complete(n in 3usize..25, extra in 0usize..20, seed in any::<u64>(), cols in 1usize..3) {
        let inst = graph_instance(n, extra, seed);
        let x = DMatrix::from_fn(n, cols, |r, c| ((r * 7 + c * 3 + seed as usize % 11) as f64).sin());
        let mut previous = 0.0;
        for k in 1..=n {
            let e = energy_ratio(&inst.basis, k, &x).unwrap();
            prop_assert!(e >= previous - 1e-12 && e <= 1.0 + 1e-12);
            previous = e;
        }
        prop_assert!((previous - 1.0).abs() < 1e-10);
    }

    #[test]
    fn error_metrics_are_scale_invariant(
        x in prop::collection::vec(-10.0f64..10.0, 2..30),
        noise in prop::collection::vec(-1.0f64..1.0, 30),
        scale in prop_oneof![0.01f64..0.5, 2.0f64..100.0],
    ) {
        prop_assume!(x.iter().any(|v| v.abs() > 1e-3));
        let est: Vec<f64> = x.iter().zip(&noise).map(|(a, b)| a + b).collect();
        let scaled = |v: &[f64]| v.iter().map(|a| a * scale).collect::<Vec<_>>();
        let e1 = relative_error(&est, &x).unwrap();
        let e2 = relative_error(&scaled(&est), &scaled(&x)).unwrap();
        prop_assert!((e1 - e2).abs() <= 1e-9 * e1.max(1.0));
        let as_col = |v: Vec<f64>| DMatrix::from_column_slice(v.len(), 1, &v);
        let s1 = snr(&as_col(est.clone()), &as_col(x.clone())).unwrap();
        let s2 = snr(&as_col(scaled(&est)), &as_col(scaled(&x))).unwrap();
        prop_assert!((s1 - s2).abs() < 1e-8, "{} vs {}", s1, s2);
    }

    #[test]
    fn tikhonov_solution_is_stationary(n in 4usize..20, extra in 0usize..15, seed in any::<u64>(), m in 5usize..40, poly in kernel()) {
        let inst = graph_instance(n, extra, seed);
        let op = kernel_matrix(&inst.laplacian, &poly);
        let p = SamplingDistribution::from_weights((0..n).map(|i| 1.0 + (i % 3) as f64).collect(), Provenance::Custom).unwrap();
        let omega = draw_samples(&p, m, seed ^ 1).unwrap();
        let x: Vec<f64> = (0..n).map(|i| ((i as f64) * 0.7 + seed as f64 % 5.0).cos()).collect();
        let plan = assemble_plan(&op, &p, &omega, &x).unwrap();
        let Ok(result) = reconstruct_tikhonov(&plan, &inst.laplacian) else { return Ok(()) };
        let xs = result.x;
        // gradient Psi^T P^-1 (Psi x - y) + L x vanishes
        let inv_p = DMatrix::from_diagonal(&DVector::from_iterator(m, plan.p_omega().iter().map(|q| 1.0 / q)));
        let residual = plan.psi() * &xs - plan.y();
        let grad = plan.psi().transpose() * inv_p * residual + inst.laplacian.matrix() * &xs;
        let scale = plan.y().norm().max(1.0) * plan.psi().norm().max(1.0) * 1e3;
        prop_assert!(grad.norm() <= 1e-9 * scale, "gradient {}", grad.norm());
        let f0 = tikhonov_objective(&plan, &inst.laplacian, &xs);
        for i in 0..n {
            let mut nudged = xs.clone();
            nudged[i] += 1e-3;
            prop_assert!(tikhonov_objective(&plan, &inst.laplacian, &nudged) >= f0 - 1e-10 * f0.max(1.0));
        }
    }

    #[test]
    fn ideal_filter_is_idempotent(n in 3usize..25, extra in 0usize..20, seed in any::<u64>(), k in 1usize..25) {
        let inst = graph_instance(n, extra, seed);
        let Some(k) = valid_band(&inst, k.min(n)) else { return Ok(()) };
        let cutoff = if k == n { inst.basis.lambda_max() } else { inst.basis.band_cutoff(k).unwrap() };
        let v = DVector::from_fn(n, |i, _| ((i as u64 ^ seed) % 17) as f64 - 8.0);
        let once = ideal_lowpass_apply(&inst.basis, cutoff, &v).unwrap();
        let twice = ideal_lowpass_apply(&inst.basis, cutoff, &once).unwrap();
        prop_assert!((&once - &twice).norm() <= 1e-10 * v.norm().max(1.0));
        prop_assert!(once.norm() <= v.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn synthesized_signals_obey_parseval(n in 3usize..25, extra in 0usize..20, seed in any::<u64>(), k in 1usize..25) {
        let inst = graph_instance(n, extra, seed);
        let Some(k) = valid_band(&inst, k.min(n)) else { return Ok(()) };
        let s = synth_bandlimited(&inst.basis, k, seed).unwrap();
        let (bw, coeffs) = s.band.clone().unwrap();
        prop_assert_eq!(bw, k);
        prop_assert!((s.values.norm() - coeffs.norm()).abs() <= 1e-10 * coeffs.norm().max(1.0));
        prop_assert!(coeffs.iter().all(|c| c.abs() < 1.0));
        let spectrum = inst.basis.vectors().tr_mul(&s.values);
        prop_assert!(spectrum.rows(k, n - k).norm() <= 1e-10 * coeffs.norm().max(1.0));
    }

    #[test]
    fn graph_file_round_trip(n in 1usize..30, p in 0.0f64..0.5, seed in any::<u64>()) {
        let g = random_sparse(n, p, seed);
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let back = read_graph(buf.as_slice()).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
    }
}
