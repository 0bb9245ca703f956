mod common;

use common::{grid_env, random_env, reference, rel_err};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sr_bandits::sim::step_throughputs;

#[test]
fn grid_full_profiles_match_reference() {
    let env = grid_env();
    let k = env.arms.len();
    for profile in [[0, 0, 0, 0], [3, 7, 11, 3], [3, 10, 11, 6], [1, 5, 9, 2]] {
        let p: Vec<Option<usize>> = profile.iter().map(|&a| Some(a % k)).collect();
        let got = step_throughputs(&env, &p);
        let want = reference(&env.deployment, &env.radio, &env.arms, &p);
        for (g, w) in got.iter().zip(&want) {
            assert!(rel_err(g.throughput_mbps, w.throughput_mbps) < 1e-9);
            assert!(rel_err(g.reward.unwrap(), w.throughput_mbps / w.optimal_mbps) < 1e-9);
        }
    }
}

#[test]
fn random_profiles_match_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..20 {
        let n = 1 + seed as usize % 8;
        let env = random_env(n, seed);
        for (i, w) in reference(&env.deployment, &env.radio, &env.arms, &vec![None; n]).iter().enumerate() {
            assert!(rel_err(env.optimal_mbps()[i], w.optimal_mbps) < 1e-9);
        }
        for _ in 0..200 {
            let p: Vec<Option<usize>> = (0..n)
                .map(|_| rng.random_bool(0.8).then(|| rng.random_range(0..env.arms.len())))
                .collect();
            let got = step_throughputs(&env, &p);
            let want = reference(&env.deployment, &env.radio, &env.arms, &p);
            for (g, w) in got.iter().zip(&want) {
                assert!(rel_err(g.throughput_mbps, w.throughput_mbps) < 1e-9, "{} vs {}", g.throughput_mbps, w.throughput_mbps);
            }
        }
    }
}
