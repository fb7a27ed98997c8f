//! Cross-validation of the combinatorial pipeline against the independent
//! Hessian oracle on randomly generated configurations. Seeds are fixed, so
//! these runs are deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_defect::check_embedding_hypothesis;
use toric_defect::defect::dual_defect;
use toric_defect::hessian::{hessian_defect, OracleConfig};
use toric_defect::lattice::IntVector;
use toric_defect::polytope::{convex_hull, PointConfiguration};

fn random_simple_configuration(rng: &mut ChaCha8Rng, max_dim: usize) -> Option<PointConfiguration> {
    let n = rng.gen_range(1..=max_dim);
    let count = rng.gen_range(n + 1..=n + 4);
    let mut pts: Vec<IntVector> = Vec::new();
    for _ in 0..count {
        let p: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3i64)).collect();
        pts.push(IntVector::from_i64s(&p));
    }
    pts.sort();
    pts.dedup();
    if pts.len() <= n {
        return None;
    }
    let a = PointConfiguration::new(n, pts).ok()?;
    let hull = convex_hull(&a);
    (hull.dim() == n && hull.is_simple().unwrap()).then_some(a)
}

/// Where the very-ampleness hypothesis holds, the oracle and the
/// combinatorial pipeline must agree exactly; elsewhere the oracle still
/// upper-bounds the combinatorial value.
#[test]
fn oracle_agrees_where_hypotheses_hold() {
    let cfg = OracleConfig { trials: 8, seed: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total = 0;
    let mut agreeing = 0;
    while total < 120 {
        let Some(a) = random_simple_configuration(&mut rng, 3) else {
            continue;
        };
        total += 1;
        let comb = dual_defect(&a).unwrap().value;
        let est = hessian_defect(&a, &cfg).unwrap().defect_estimate;
        assert!(
            est >= comb,
            "oracle {} below combinatorial {} on {:?}",
            est,
            comb,
            a.points()
        );
        if check_embedding_hypothesis(&a).unwrap().all_generated {
            assert_eq!(
                est,
                comb,
                "oracle disagrees under the hypotheses on {:?}",
                a.points()
            );
            agreeing += 1;
        }
    }
    assert!(agreeing >= 20, "sweep produced too few hypothesis-satisfying cases");
}

/// Saturated configurations (all lattice points of the hull) satisfy the
/// hypotheses more often; agreement must still be exact.
#[test]
fn oracle_agrees_on_saturated_hulls() {
    let cfg = OracleConfig { trials: 8, seed: 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut total = 0;
    while total < 60 {
        let Some(sparse) = random_simple_configuration(&mut rng, 3) else {
            continue;
        };
        let hull = convex_hull(&sparse);
        let a = PointConfiguration::new(sparse.dim(), hull.lattice_points()).unwrap();
        if !check_embedding_hypothesis(&a).unwrap().all_generated {
            continue;
        }
        total += 1;
        let comb = dual_defect(&a).unwrap().value;
        let est = hessian_defect(&a, &cfg).unwrap().defect_estimate;
        assert_eq!(est, comb, "disagreement on saturated {:?}", a.points());
    }
}
