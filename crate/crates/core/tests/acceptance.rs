//! Acceptance suite: one test per criterion, each printing a pass line.
//! Everything is exact; there are no tolerances anywhere.

use toric_defect::cayley::enumerate_cayley_structures;
use toric_defect::cone::{hilbert_basis, semigroup_generates, Cone};
use toric_defect::defect::{dual_defect, lattice_defect};
use toric_defect::fan::{
    cartier_multiples, check_fibration, fiber_reduced, invariant_fiber_cones, line_criterion,
    normal_fan, polarization_offsets,
};
use toric_defect::fixtures;
use toric_defect::hessian::{certify_agreement, hessian_defect, AgreementVerdict, OracleConfig};
use toric_defect::lattice::{IntMatrix, IntVector, Rat, Sublattice};
use toric_defect::polytope::{convex_hull, LatticePolytope, PointConfiguration};
use toric_defect::{check_embedding_hypothesis, discriminant_verdict, Verdict};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The canonical low-dimensional fixtures and their dual defects.
fn defect_catalog() -> Vec<(&'static str, PointConfiguration, usize)> {
    vec![
        ("line", fixtures::standard_simplex(1), 1),
        ("plane", fixtures::standard_simplex(2), 2),
        ("space", fixtures::standard_simplex(3), 3),
        ("cone over conic", fixtures::cone_over_conic(), 1),
        ("square", fixtures::unit_square(), 0),
        ("cube", fixtures::unit_cube(), 0),
        ("triangle prism", fixtures::triangle_prism(), 1),
        ("join of conics", fixtures::join_of_conics(), 1),
        (
            "cone over conic with line vertex",
            fixtures::cone_over_conic_with_line_vertex(),
            2,
        ),
    ]
}

fn simplex_fixtures() -> Vec<PointConfiguration> {
    vec![
        fixtures::standard_simplex(1),
        fixtures::standard_simplex(2),
        fixtures::standard_simplex(3),
        fixtures::dilated_segment(2),
        fixtures::dilated_segment(3),
        fixtures::cone_over_conic(),
        fixtures::dilated_triangle(),
        fixtures::join_of_conics(),
        fixtures::cone_over_conic_with_line_vertex(),
    ]
}

#[test]
fn criterion_1_defect_catalog() {
    for (name, a, expected) in defect_catalog() {
        let got = dual_defect(&a).unwrap().value;
        assert_eq!(got, expected, "dual defect of {}", name);
    }
    println!("criterion 1 (low-dimensional defect catalog): pass");
}

#[test]
fn criterion_2_quadric_prism_pipeline() {
    let a = fixtures::quadric_prism();
    let report = discriminant_verdict(&a, Some(&OracleConfig::default()));
    assert!(report.hypotheses_ok, "hypotheses must hold");
    let dual = report.dual_defect.as_ref().unwrap();
    assert!(
        dual.report
            .elementary
            .iter()
            .any(|e| e.fiber_dim() == 3 && e.fiber_defect() == 2),
        "expected a structure with a defect-2 simplex image of dimension 3"
    );
    assert_eq!(dual.value, 1);
    assert_eq!(report.verdict, Verdict::Trivial);
    println!("criterion 2 (ten-point prism pipeline): pass");
}

#[test]
fn criterion_3_cubic_scroll_pipeline() {
    let a = fixtures::cubic_scroll();
    let structures = enumerate_cayley_structures(&a).unwrap();
    assert_eq!(structures.len(), 1, "exactly one Cayley structure");
    let s = &structures[0];
    let image_defect = lattice_defect(s.image()).unwrap().defect;
    assert_eq!(s.image().dim(), 1);
    assert_eq!(image_defect, 1);
    assert!(
        s.image().dim() + image_defect <= a.dim(),
        "the dimension-plus-defect inequality must fail"
    );
    let report = discriminant_verdict(&a, Some(&OracleConfig::default()));
    assert_eq!(report.dual_defect.as_ref().unwrap().value, 0);
    assert_eq!(report.verdict, Verdict::Nontrivial);
    println!("criterion 3 (five-point scroll pipeline): pass");
}

#[test]
fn criterion_4_oracle_concordance() {
    let cfg = OracleConfig { trials: 8, seed: 0 };
    // exact agreement on every catalog fixture plus the pipeline fixtures
    let mut all = defect_catalog();
    all.push(("quadric prism", fixtures::quadric_prism(), 1));
    all.push(("cubic scroll", fixtures::cubic_scroll(), 0));
    for (name, a, expected) in &all {
        let est = hessian_defect(a, &cfg).unwrap();
        assert_eq!(est.defect_estimate, *expected, "oracle on {}", name);
        let verdict = certify_agreement(&est, *expected);
        assert!(
            matches!(verdict, AgreementVerdict::Certified { .. }),
            "certification on {}",
            name
        );
    }

    // oracle >= combinatorial on 200 random simple configurations
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.gen_range(1..=3usize);
        let count = rng.gen_range(n + 1..=n + 4);
        let mut pts: Vec<IntVector> = Vec::new();
        for _ in 0..count {
            let p: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3i64)).collect();
            pts.push(IntVector::from_i64s(&p));
        }
        pts.sort();
        pts.dedup();
        if pts.len() <= n {
            continue;
        }
        let Ok(a) = PointConfiguration::new(n, pts) else {
            continue;
        };
        let hull = convex_hull(&a);
        if hull.dim() != n || !hull.is_simple().unwrap() {
            continue;
        }
        let Ok(dual) = dual_defect(&a) else {
            continue;
        };
        let est = hessian_defect(&a, &cfg).unwrap();
        assert!(
            est.defect_estimate >= dual.value,
            "oracle below combinatorial value on {:?}",
            a.points()
        );
        checked += 1;
    }
    println!("criterion 4 (oracle concordance, {} random configurations): pass", checked);
}

#[test]
fn criterion_5_line_criterion_equivalence() {
    let check = |a: &PointConfiguration| {
        let hull = convex_hull(a);
        let fan = normal_fan(&hull).unwrap();
        let profile = cartier_multiples(&fan).unwrap();
        let offsets = polarization_offsets(&hull);
        let found = line_criterion(&fan, &profile, &offsets).unwrap().is_some();
        let defect = lattice_defect(&hull).unwrap().defect;
        assert_eq!(
            found,
            defect > 0,
            "line criterion vs lattice defect on {:?}",
            a.points()
        );
    };

    for a in simplex_fixtures() {
        check(&a);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut produced = 0;
    while produced < 100 {
        let n = rng.gen_range(1..=3usize);
        let mut pts: Vec<IntVector> = Vec::new();
        for _ in 0..=n {
            let p: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3i64)).collect();
            pts.push(IntVector::from_i64s(&p));
        }
        pts.sort();
        pts.dedup();
        if pts.len() != n + 1 {
            continue;
        }
        let hull = LatticePolytope::from_points(n, pts);
        if hull.dim() != n || !hull.is_simplex() {
            continue;
        }
        // the equivalence requires the semigroup hypothesis
        let a = PointConfiguration::new(n, hull.lattice_points()).unwrap();
        if !check_embedding_hypothesis(&a).unwrap().all_generated {
            continue;
        }
        check(&a);
        produced += 1;
    }
    println!(
        "criterion 5 (line criterion <=> positive lattice defect, {} random simplices): pass",
        produced
    );
}

#[test]
fn criterion_6_ray_weight_identity() {
    let mut count = 0;
    for a in simplex_fixtures() {
        let hull = convex_hull(&a);
        let fan = normal_fan(&hull).unwrap();
        let profile = cartier_multiples(&fan).unwrap();
        let n = fan.ambient_dim();
        let mut total = vec![Rat::zero(); n];
        for (ray, a_i) in fan.rays().iter().zip(profile.multiples()) {
            for (j, t) in total.iter_mut().enumerate() {
                *t += Rat::new(ray.get(j).clone(), a_i.clone());
            }
        }
        assert!(
            total.iter().all(|t| t.is_zero()),
            "weighted ray sum must vanish"
        );
        count += 1;
    }
    println!(
        "criterion 6 (weighted ray sum identity on {} rank-one fans): pass",
        count
    );
}

#[test]
fn criterion_7_cayley_fibration_roundtrip() {
    let fixture_list = vec![
        fixtures::unit_square(),
        fixtures::cubic_scroll(),
        fixtures::unit_cube(),
        fixtures::triangle_prism(),
        fixtures::quadric_prism(),
        fixtures::cone_over_conic(),
        fixtures::join_of_conics(),
    ];

    // forward: every structure's fibration sublattice passes the fan test
    for a in &fixture_list {
        let fan = normal_fan(&convex_hull(a)).unwrap();
        for s in enumerate_cayley_structures(a).unwrap() {
            assert!(
                check_fibration(&fan, &s.fibration_sublattice()).is_some(),
                "structure does not induce a fibration on {:?}",
                a.points()
            );
        }
    }

    // converse, on the low-dimensional fixtures: every primitive ray-subset
    // span passing the fibration test with a positive-defect simplex fiber
    // matches an enumerated structure
    for a in &fixture_list {
        let n = a.dim();
        if n > 3 {
            continue;
        }
        let hull = convex_hull(a);
        let fan = normal_fan(&hull).unwrap();
        let structures = enumerate_cayley_structures(a).unwrap();
        let known: Vec<_> = structures
            .iter()
            .map(|s| s.fibration_sublattice().canonical_key())
            .collect();
        let rays = fan.rays().to_vec();
        for mask in 1u32..(1 << rays.len()) {
            let sel: Vec<IntVector> = (0..rays.len())
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| rays[k].clone())
                .collect();
            let delta = Sublattice::spanned_by(n, &sel).saturate();
            if delta.rank() == 0 || delta.rank() > n {
                continue;
            }
            if check_fibration(&fan, &delta).is_none() {
                continue;
            }
            // fiber polytope: image of the hull under restriction to delta
            let rows: Vec<IntVector> = delta.basis().to_vec();
            let pi_matrix = IntMatrix::from_rows(n, &rows);
            let images: Vec<IntVector> = a.points().iter().map(|p| pi_matrix.mul_vec(p)).collect();
            let fiber_polytope = LatticePolytope::from_points(delta.rank(), images);
            if !fiber_polytope.is_simplex() {
                continue;
            }
            if lattice_defect(&fiber_polytope).unwrap().defect == 0 {
                continue;
            }
            assert!(
                known.contains(&delta.canonical_key()),
                "fibration sublattice {:?} has no enumerated structure on {:?}",
                delta,
                a.points()
            );
        }
    }
    println!("criterion 7 (Cayley structures <=> fan fibrations): pass");
}

#[test]
fn criterion_8_hilbert_basis_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut produced = 0;
    while produced < 50 {
        let n = if produced % 2 == 0 { 2 } else { 3 };
        let gen_count = rng.gen_range(2..=4usize);
        let mut gens: Vec<IntVector> = Vec::new();
        for _ in 0..gen_count {
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4i64)).collect();
            let iv = IntVector::from_i64s(&v);
            if !iv.is_zero() {
                gens.push(iv);
            }
        }
        if gens.is_empty() {
            continue;
        }
        let cone = Cone::from_generators(n, &gens);
        if cone.dim() == 0 {
            continue;
        }
        assert!(cone.is_pointed(), "nonnegative generators span pointed cones");
        let hb = hilbert_basis(&cone).unwrap();

        // every cone point with coordinate sum <= 12 is a nonnegative
        // integer combination of the basis
        let budget = 12i64;
        let mut stack: Vec<Vec<i64>> = vec![Vec::new()];
        let mut points: Vec<IntVector> = Vec::new();
        while let Some(partial) = stack.pop() {
            if partial.len() == n {
                let p = IntVector::from_i64s(&partial);
                if !p.is_zero() && cone.contains(&p) {
                    points.push(p);
                }
                continue;
            }
            let used: i64 = partial.iter().sum();
            for v in 0..=(budget - used) {
                let mut next = partial.clone();
                next.push(v);
                stack.push(next);
            }
        }
        for p in &points {
            assert!(
                combination_exists(p, &hb),
                "point {:?} unreachable from the Hilbert basis of {:?}",
                p,
                cone.rays()
            );
        }

        // no basis element is reducible
        let verdict = semigroup_generates(&hb, &cone).unwrap();
        assert!(verdict.generates);
        for (i, h) in hb.iter().enumerate() {
            let rest: Vec<IntVector> = hb
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, x)| x.clone())
                .collect();
            assert!(
                !combination_exists(h, &rest),
                "basis element {:?} is reducible",
                h
            );
        }
        produced += 1;
    }
    println!("criterion 8 (Hilbert basis oracle, {} random cones): pass", produced);
}

/// Nonnegative-orthant decision: target = sum c_i g_i with c_i >= 0.
fn combination_exists(target: &IntVector, gens: &[IntVector]) -> bool {
    if target.is_zero() {
        return true;
    }
    if target.entries().iter().any(|e| e.is_negative()) {
        return false;
    }
    let Some((g, rest)) = gens.split_first() else {
        return false;
    };
    let mut t = target.clone();
    loop {
        if combination_exists(&t, rest) {
            return true;
        }
        if g.is_zero() {
            return false;
        }
        // subtract g while staying in the nonnegative orthant
        let next = t.sub(g);
        if next.entries().iter().any(|e| e.is_negative()) {
            return false;
        }
        if next.is_zero() {
            return true;
        }
        t = next;
    }
}

#[test]
fn criterion_9_fiber_defect_bound() {
    let fixture_list = vec![
        fixtures::unit_square(),
        fixtures::cubic_scroll(),
        fixtures::unit_cube(),
        fixtures::triangle_prism(),
        fixtures::quadric_prism(),
    ];
    let mut checked = 0;
    for a in &fixture_list {
        let n = a.dim();
        let hull = convex_hull(a);
        let fan = normal_fan(&hull).unwrap();
        let def_x = dual_defect(a).unwrap().value as isize;
        for s in enumerate_cayley_structures(a).unwrap() {
            let delta = s.fibration_sublattice();
            assert!(check_fibration(&fan, &delta).is_some());
            // only fibrations with all invariant fibers reduced
            let all_reduced = invariant_fiber_cones(&fan, &delta)
                .unwrap()
                .iter()
                .all(|eta| fiber_reduced(&fan, &delta, eta).unwrap());
            if !all_reduced {
                continue;
            }
            let base_dim = (n - s.image().dim()) as isize;
            // defect of the general fiber, from its polytope
            let fiber_def = if s.image().is_simplex() {
                lattice_defect(s.image()).unwrap().defect as isize
            } else {
                let pts = s.image().lattice_points();
                let fiber_cfg = PointConfiguration::new(s.image().dim(), pts).unwrap();
                dual_defect(&fiber_cfg).unwrap().value as isize
            };
            assert!(
                def_x <= (fiber_def - base_dim).abs(),
                "fiber bound fails on {:?}",
                a.points()
            );
            checked += 1;
        }
    }
    println!(
        "criterion 9 (defect bounded by |fiber defect - base dim| on {} fibrations): pass",
        checked
    );
}

