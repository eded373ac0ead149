use mcs_core::graph::{all_pairs_distances, is_consistent};
use mcs_core::instance::{generate, Model};
use mcs_core::nd::{solve_nd_by_scenarios, solve_nd_with, NdConfig};
use mcs_core::oracle::brute_force_mcs;
use mcs_core::structural::{minimum_vertex_cover, neighborhood_decomposition};
use mcs_core::vc::{solve_vc_with, VcConfig};

#[test]
fn vc_matches_oracle_on_small_instances() {
    let mut checked = 0;
    for seed in 0..120u64 {
        let n = 5 + (seed % 6) as usize;
        let model = if seed % 2 == 0 {
            Model::GnpConnected {
                n,
                p: 0.45,
                c: 1 + (seed % 3) as usize,
            }
        } else {
            Model::PlantedVc {
                k: 1 + (seed % 3) as usize,
                n,
                c: 1 + (seed % 4) as usize,
                density: 0.5,
            }
        };
        let g = generate(&model, seed).unwrap();
        let cover = minimum_vertex_cover(&g, None).unwrap();
        if cover.k() > 4 {
            continue;
        }
        let d = all_pairs_distances(&g);
        let expected = brute_force_mcs(&g).unwrap();
        let got = solve_vc_with(&g, &d, Some(&cover), &VcConfig::default()).unwrap();
        assert!(
            is_consistent(&g, &d, &got.vertices).consistent,
            "seed {seed}"
        );
        assert_eq!(
            got.size(),
            expected.size(),
            "seed {seed}: {:?} vs {:?}",
            got.vertices,
            expected.vertices
        );
        checked += 1;
    }
    assert!(checked >= 60);
}

#[test]
fn nd_matches_oracle_on_small_instances() {
    for seed in 0..120u64 {
        let r = 1 + (seed % 3) as usize;
        let sizes: Vec<usize> = (0..r).map(|i| 1 + ((seed as usize >> i) + i) % 4).collect();
        let n: usize = sizes.iter().sum();
        let c = (1 + (seed % 4) as usize).min(n);
        let g = generate(
            &Model::PlantedNd {
                sizes,
                kinds: None,
                c,
                density: 0.6,
            },
            seed,
        )
        .unwrap();
        let d = all_pairs_distances(&g);
        let decomp = neighborhood_decomposition(&g);
        let expected = brute_force_mcs(&g).unwrap();
        let got = solve_nd_with(&g, &d, Some(&decomp), &NdConfig::default()).unwrap();
        assert!(got.verified, "seed {seed}");
        assert_eq!(
            got.size(),
            expected.size(),
            "seed {seed}: {:?} vs {:?}",
            got.vertices,
            expected.vertices
        );
    }
}

#[test]
fn scenario_sweep_agrees_with_label_dp() {
    for seed in 0..25u64 {
        let sizes = vec![1 + (seed % 2) as usize, 2, 1 + (seed % 3) as usize];
        let g = generate(
            &Model::PlantedNd {
                sizes,
                kinds: None,
                c: 2 + (seed % 2) as usize,
                density: 0.5,
            },
            seed,
        )
        .unwrap();
        let d = all_pairs_distances(&g);
        let decomp = neighborhood_decomposition(&g);
        let fast = solve_nd_with(&g, &d, Some(&decomp), &NdConfig::default()).unwrap();
        let literal = solve_nd_by_scenarios(&g, &d, &decomp).unwrap();
        assert_eq!(fast.size(), literal.len(), "seed {seed}");
    }
}
