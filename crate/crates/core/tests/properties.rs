use entcert_core::constructions::{
    example2_subspace, planted_bipartition_subspace, planted_product_subspace, random_schmidt_rank_vector,
    random_subspace, random_unitary, seeded_rng,
};
use entcert_core::hierarchy::{certify_bipartite, certify_ces, certify_ges, schmidt_number_bound, RANGE_CUTOFF};
use entcert_core::linalg::gaussian;
use entcert_core::{CertifyOptions, MixedState, Subspace, TensorSpace, C64};

fn ranks<T: entcert_core::linalg::Scalar>(s: &Subspace<T>, r: usize, k: usize) -> Vec<usize> {
    certify_bipartite(s, r, k, &CertifyOptions::default()).unwrap().rank_results().iter().map(|x| x.rank).collect()
}

#[test]
fn rank_is_independent_of_the_chosen_basis() {
    let space = TensorSpace::bipartite(4, 4).unwrap();
    for seed in 0..5 {
        let s = random_subspace(&space, 8, seed).unwrap();
        let mixed = s.recombine(&random_unitary(8, 100 + seed)).unwrap();
        assert_eq!(ranks(&s, 1, 1), ranks(&mixed, 1, 1));
    }
    let s = example2_subspace();
    let mix = vec![
        vec![gaussian(1, 0), gaussian(2, 0), gaussian(0, 1)],
        vec![gaussian(0, 0), gaussian(1, 0), gaussian(3, 0)],
        vec![gaussian(1, 1), gaussian(0, 0), gaussian(1, 0)],
    ];
    assert_eq!(ranks(&s, 2, 1), ranks(&s.recombine(&mix).unwrap(), 2, 1));
}

#[test]
fn rank_is_invariant_under_local_unitaries() {
    let (d_a, d_b) = (3, 3);
    let space = TensorSpace::bipartite(d_a, d_b).unwrap();
    let u = random_unitary(d_a, 1);
    let v = random_unitary(d_b, 2);
    for seed in 0..5 {
        let s = random_subspace(&space, 4, seed).unwrap();
        let moved: Vec<Vec<C64>> = s
            .basis()
            .iter()
            .map(|x| {
                let mut y = vec![C64::new(0.0, 0.0); d_a * d_b];
                for (i, j) in (0..d_a).flat_map(|i| (0..d_b).map(move |j| (i, j))) {
                    for (p, q) in (0..d_a).flat_map(|p| (0..d_b).map(move |q| (p, q))) {
                        y[i * d_b + j] += u[i][p] * v[j][q] * x[p * d_b + q];
                    }
                }
                y
            })
            .collect();
        let moved = Subspace::new(space.clone(), moved).unwrap();
        assert_eq!(ranks(&s, 1, 2), ranks(&moved, 1, 2));
    }
}

#[test]
fn pure_state_schmidt_number_matches_schmidt_rank() {
    let mut rng = seeded_rng(5);
    let space = TensorSpace::bipartite(4, 4).unwrap();
    for schmidt_rank in 1..=4 {
        let x = random_schmidt_rank_vector(&mut rng, 4, 4, schmidt_rank);
        let norm: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let rho: Vec<Vec<C64>> = x.iter().map(|a| x.iter().map(|b| a * b.conj() / norm).collect()).collect();
        let rho = MixedState::new(space.clone(), rho).unwrap();
        for r in 1..=3 {
            let cert = schmidt_number_bound(&rho, r, 1, RANGE_CUTOFF, &CertifyOptions::default()).unwrap();
            assert_eq!(cert.is_certified(), schmidt_rank > r, "Schmidt rank {schmidt_rank}, r = {r}");
        }
    }
}

#[test]
fn planted_product_vectors_block_ces_certification() {
    let space = TensorSpace::new(vec![2, 2, 2]).unwrap();
    for seed in 0..40 {
        let s = planted_product_subspace(&space, 1 + (seed as usize % 4), seed).unwrap();
        for k in 1..=2 {
            assert!(!certify_ces(&s, k, &CertifyOptions::default()).unwrap().is_certified(), "seed {seed} k {k}");
        }
    }
}

#[test]
fn planted_biseparable_vectors_block_ges_certification() {
    let space = TensorSpace::new(vec![2, 2, 3]).unwrap();
    for (i, left) in [vec![0], vec![1], vec![0, 1]].iter().enumerate() {
        for seed in 0..10 {
            let s = planted_bipartition_subspace(&space, left, 2, 10 * i as u64 + seed).unwrap();
            let cert = certify_ges(&s, 1, &CertifyOptions::default()).unwrap();
            assert!(!cert.is_certified());
            assert!(cert.systems[i].failed(), "cut {left:?} should fail");
        }
    }
}
