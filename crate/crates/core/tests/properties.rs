use nlperim::bounds::{self, BoundKind, PipelineOptions};
use nlperim::engine::{self, AccuracySpec, Backend};
use nlperim::error::Error;
use nlperim::geometry::{hausdorff_distance, intersect_halfspace, ConvexBody, HalfSpace};
use nlperim::kernels::Kernel;
use nlperim::quad::gauss_legendre;
use nlperim::suite::{random_nested, random_polygon, random_polytope3};
use nlperim::symmetry;
use nlperim::vector::{self as v, Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AXES: [Vector; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn body(seed: u64, n: usize) -> ConvexBody {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n == 2 {
        random_polygon(&mut rng, v::ZERO, 1.0)
    } else {
        random_polytope3(&mut rng, 1.0)
    }
}

/// Slices are polynomial between vertex heights, so Gauss rules are exact there.
fn integrated_slices(e: &ConvexBody, nu: &Vector) -> f64 {
    let mut hs: Vec<f64> = e.exact_polytope().unwrap().vertices().iter().map(|x| v::dot(x, nu)).collect();
    hs.sort_by(f64::total_cmp);
    hs.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let gl = gauss_legendre(4);
    let mut total = 0.0;
    for w in hs.windows(2) {
        let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for (x, wt) in gl.nodes.iter().zip(&gl.weights) {
            total += half * wt * e.slice(nu, mid + half * x);
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn slices_integrate_to_the_volume(seed in any::<u64>(), three in any::<bool>()) {
        let n = if three { 3 } else { 2 };
        let e = body(seed, n);
        prop_assert!(e.volume() > 0.0 && e.euclidean_perimeter() > 0.0);
        for nu in &AXES[..n] {
            let q = integrated_slices(&e, nu);
            prop_assert!((q / e.volume() - 1.0).abs() < 1e-6, "{} vs {}", q, e.volume());
        }
    }

    #[test]
    fn hausdorff_grows_with_the_outer_body(seed in any::<u64>(), grow in 1.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b1) = random_nested(&mut rng, 2);
        prop_assert_eq!(hausdorff_distance(&a, &a).unwrap().h, 0.0);
        let c = a.exact_polytope().unwrap().vertices()[0];
        let b2 = b1.translated(&v::scale(&c, -1.0)).unwrap().scaled(grow).unwrap().translated(&c).unwrap();
        let (h1, h2) = (hausdorff_distance(&a, &b1).unwrap().h, hausdorff_distance(&a, &b2).unwrap().h);
        prop_assert!(h1 <= h2 + 1e-12, "{} > {}", h1, h2);
    }

    #[test]
    fn halfspace_cuts_shrink(seed in any::<u64>(), three in any::<bool>(), off in -0.5f64..0.5) {
        let n = if three { 3 } else { 2 };
        let e = body(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mut u = v::ZERO;
        for x in u.iter_mut().take(n) {
            *x = rng.random_range(-1.0..1.0);
        }
        let Some(u) = v::normalize(&u) else { return Ok(()) };
        match intersect_halfspace(&e, &HalfSpace::new(u, off).unwrap()) {
            Ok(c) => {
                prop_assert!(c.volume() <= e.volume() * (1.0 + 1e-12));
                prop_assert!(c.euclidean_perimeter() <= e.euclidean_perimeter() * (1.0 + 1e-12));
            }
            Err(Error::EmptyIntersection) | Err(Error::Degenerate(_)) | Err(Error::InvalidBody(_)) => {}
            Err(err) => prop_assert!(false, "{}", err),
        }
    }

    #[test]
    fn perimeter_is_translation_invariant(seed in any::<u64>(), dx in -5.0f64..5.0, dy in -5.0f64..5.0) {
        let k = Kernel::fractional(2, 0.5).unwrap();
        let e = body(seed, 2);
        let spec = AccuracySpec::default().with_rel_tol(1e-6);
        let p = engine::perimeter(&k, &e, &spec).unwrap();
        let q = engine::perimeter(&k, &e.translated(&[dx, dy, 0.0]).unwrap(), &spec).unwrap();
        prop_assert!((p.value - q.value).abs() <= 3.0 * (p.error + q.error) + 1e-12 * p.value);
    }

    #[test]
    fn interaction_is_symmetric(seed in any::<u64>(), gap in 0.05f64..1.0) {
        let k = Kernel::fractional(2, 0.3).unwrap();
        let e = body(seed, 2);
        let f = body(seed ^ 7, 2);
        let shift = e.bbox().1[0] - f.bbox().0[0] + gap;
        let f = f.translated(&[shift, 0.0, 0.0]).unwrap();
        let spec = AccuracySpec::default();
        prop_assert_eq!(engine::interaction(&k, &e, &f, &spec).unwrap(), engine::interaction(&k, &f, &e, &spec).unwrap());
        let mc = spec.with_backend(Backend::Montecarlo).with_rel_tol(0.05);
        prop_assert_eq!(engine::interaction(&k, &e, &f, &mc).unwrap(), engine::interaction(&k, &f, &e, &mc).unwrap());
    }

    #[test]
    fn segments_scale_exactly(s in 0.05f64..0.95, len in 0.01f64..100.0) {
        let k = Kernel::fractional(1, s).unwrap();
        let spec = AccuracySpec::default();
        let unit = engine::perimeter(&k, &ConvexBody::cuboid(1, v::ZERO, [1.0, 0.0, 0.0]).unwrap(), &spec).unwrap();
        let p = engine::perimeter(&k, &ConvexBody::cuboid(1, v::ZERO, [len, 0.0, 0.0]).unwrap(), &spec).unwrap();
        prop_assert!((p.value / (len.powf(1.0 - s) * unit.value) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fractional_interpolation_bound(seed in any::<u64>(), s in 0.1f64..0.9, scale in 0.1f64..5.0) {
        let k = Kernel::fractional(2, s).unwrap();
        let e = body(seed, 2).scaled(scale).unwrap();
        let p = engine::perimeter(&k, &e, &AccuracySpec::default().with_rel_tol(1e-6)).unwrap();
        let b = bounds::interpolation_bound(&k, &e);
        prop_assert!(p.value <= b + 3.0 * p.error, "{} > {}", p.value, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn symmetrals_are_stable_and_shorter(seed in any::<u64>(), axis in 0usize..2) {
        let e = body(seed, 2);
        let nu = AXES[axis];
        let once = symmetry::symmetrize(&e, &nu, 256).unwrap();
        let b = ConvexBody::profile(once.clone()).unwrap();
        prop_assert!(b.euclidean_perimeter() <= e.euclidean_perimeter() + 1e-6);
        let twice = symmetry::symmetrize(&b, &nu, 256).unwrap();
        for (x, y) in once.radii.iter().zip(&twice.radii) {
            prop_assert!((x - y).abs() < 1e-9, "{} vs {}", x, y);
        }
    }

    #[test]
    fn bounds_are_nonnegative_and_chained(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = random_nested(&mut rng, 2);
        let k = Kernel::fractional(2, 0.5).unwrap();
        let opts = PipelineOptions { spec: AccuracySpec::default().with_rel_tol(1e-5), ..Default::default() };
        let r15 = bounds::deficit_report(&k, &a, &b, BoundKind::Cor15, &opts).unwrap();
        let r14 = bounds::deficit_report(&k, &a, &b, BoundKind::Cor14, &opts).unwrap();
        prop_assert!(r15.bound_value >= 0.0 && r14.bound_value >= 0.0);
        prop_assert!(r15.bound_value <= r14.bound_value + 3.0 * r14.bound_error);
        prop_assert!(r14.satisfied && r15.satisfied);
    }
}

fn achieved(k: &Kernel, e: &ConvexBody, samples: u64, seed: u64) -> f64 {
    let spec = AccuracySpec { rel_tol: 1e-12, abs_floor: 0.0, max_samples: samples, seed, backend: Backend::Montecarlo };
    match engine::perimeter(k, e, &spec) {
        Err(Error::BudgetExceeded { achieved, .. }) => achieved,
        other => panic!("expected a budget failure, got {other:?}"),
    }
}

#[test]
fn doubling_samples_shrinks_the_error_by_root_two() {
    let k = Kernel::fractional(2, 0.5).unwrap();
    let e = body(3, 2);
    let mut ratio = 0.0;
    for seed in 0..10 {
        ratio += achieved(&k, &e, 1 << 14, seed) / achieved(&k, &e, 1 << 15, seed);
    }
    ratio /= 10.0;
    let target = 1.0 / 2f64.sqrt();
    assert!((1.0 / ratio - target).abs() <= 0.15, "ratio {}", 1.0 / ratio);
}
