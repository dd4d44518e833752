mod common;

use std::f64::consts::TAU;

use arakelian::grid::{rasterize_closed, CellSet, GridSpec, Point, Primitive};
use arakelian::loglift::{log_lift, tietze_extend, LiftError, LiftOptions, LogLift, SampledFunction};
use arakelian::topology::{label_components, Connectivity, DeclaredEdges, OmegaSpec, RegionModel};
use num_complex::Complex64;
use proptest::prelude::*;

fn plane() -> RegionModel {
    let d = 1.0 / 32.0;
    common::plane_region(GridSpec::new(-2.0, -2.0 - d / 2.0, 2.0, 2.0, d).unwrap())
}

fn c_shape(g: &GridSpec) -> CellSet {
    let p = |x, y| Point::new(x, y);
    rasterize_closed(&[Primitive::Polyline(vec![p(1.0, 1.0), p(-1.0, 1.0), p(-1.0, -1.0), p(1.0, -1.0)])], g)
}

fn lift(f_set: &CellSet, f: impl FnMut(Complex64) -> Complex64, region: &RegionModel) -> LogLift {
    let samples = SampledFunction::from_fn(f_set, f);
    let out = log_lift(f_set, &samples, region, &LiftOptions::default()).unwrap();
    // exactness, re-checked from the returned values alone
    for (idx, g) in out.g.iter() {
        assert!((g.exp() - samples.get(idx).unwrap()).norm() <= LiftOptions::default().tol);
    }
    out
}

fn integer_multiple_of_tau(x: f64) -> i64 {
    let k = (x / TAU).round();
    assert!((x - k * TAU).abs() < 1e-9, "{x} is not a multiple of 2π");
    k as i64
}

#[test]
fn exp_on_c_shaped_polyline() {
    let region = plane();
    let f_set = c_shape(&region.grid);
    let out = lift(&f_set, |z| z.exp(), &region);
    assert!(out.residual < 1e-9);
    let mut ks = out.g.iter().map(|(idx, g)| {
        let c = region.grid.center(idx);
        let d = g - Complex64::new(c.x, c.y);
        assert!(d.re.abs() < 1e-9);
        integer_multiple_of_tau(d.im)
    });
    let k0 = ks.next().unwrap();
    assert!(ks.all(|k| k == k0));
}

#[test]
fn constant_one_lifts_to_zero() {
    let region = plane();
    let f_set = rasterize_closed(&[Primitive::Segment(Point::new(-1.0, 0.0), Point::new(1.0, 0.0))], &region.grid);
    let out = lift(&f_set, |_| Complex64::new(1.0, 0.0), &region);
    assert!(out.g.iter().all(|(_, g)| g.norm() == 0.0));
}

#[test]
fn gauge_covariance() {
    let region = plane();
    let f_set = c_shape(&region.grid);
    let f = |z: Complex64| (Complex64::new(0.0, 2.0) * z).exp() + Complex64::new(3.0, 0.0);
    let base = lift(&f_set, f, &region);
    for c in [Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)] {
        let scaled = lift(&f_set, |z| c * f(z), &region);
        let shift = c.ln();
        let mut k0 = None;
        for (idx, g) in scaled.g.iter() {
            let g0 = base.g.get(idx).unwrap();
            assert!((g.exp() - c * g0.exp()).norm() <= 1e-8);
            let d = g - g0 - shift;
            assert!(d.re.abs() < 1e-9);
            let k = integer_multiple_of_tau(d.im);
            assert_eq!(*k0.get_or_insert(k), k);
        }
    }
}

#[test]
fn rerooting_changes_lift_by_constant_per_component() {
    let region = plane();
    let g = region.grid;
    let f_set = c_shape(&g);
    let f = |z: Complex64| (Complex64::new(0.0, 6.0) * z).exp();
    let samples = SampledFunction::from_fn(&f_set, f);
    let a = log_lift(&f_set, &samples, &region, &LiftOptions::default()).unwrap();
    let last = f_set.iter().last().unwrap();
    let b = log_lift(&f_set, &samples, &region, &LiftOptions { roots: vec![last], ..Default::default() }).unwrap();
    let v = &a.neighborhood.v;
    assert_eq!(v, &b.neighborhood.v);
    let comps = label_components(v, Connectivity::Four);
    for l in 0..comps.len() as u32 {
        let mut k0 = None;
        for idx in comps.cells(l).iter() {
            let d = b.g_tilde.get(idx).unwrap() - a.g_tilde.get(idx).unwrap();
            assert!(d.re.abs() < 1e-12);
            let k = integer_multiple_of_tau(d.im);
            assert_eq!(*k0.get_or_insert(k), k);
        }
    }
}

#[test]
fn restriction_matches_neighborhood_lift() {
    let region = plane();
    let f_set = c_shape(&region.grid);
    let out = lift(&f_set, |z| z * z + Complex64::new(4.0, 1.0), &region);
    assert_eq!(out.g.carrier(), &f_set);
    for (idx, g) in out.g.iter() {
        assert_eq!(Some(g), out.g_tilde.get(idx));
    }
    assert!(f_set.is_subset(out.g_tilde.carrier()));
}

#[test]
fn identity_on_segment_gives_real_log() {
    let d = 1.0 / 64.0;
    let g = GridSpec::new(-1.0, -1.0 - d / 2.0, 3.0, 1.0, d).unwrap();
    let region = common::plane_region(g);
    let f_set = rasterize_closed(&[Primitive::Segment(Point::new(1.0, 0.0), Point::new(2.0, 0.0))], &g);
    let out = lift(&f_set, |z| z, &region);
    assert!(out.residual < 1e-9);
    for (idx, val) in out.g.iter() {
        let c = g.center(idx);
        assert!((val - Complex64::new(c.x.ln(), 0.0)).norm() < 1e-12);
    }
}

#[test]
fn rejected_inputs() {
    let region = plane();
    let g = region.grid;
    let f_set = c_shape(&g);
    let zero = SampledFunction::from_fn(&f_set, |z| z - Complex64::new(-1.0, 0.0));
    let err = log_lift(&f_set, &zero, &region, &LiftOptions { eps_zero: 0.05, ..Default::default() }).unwrap_err();
    assert!(matches!(err, LiftError::NearZero { .. }));

    // winding once around the puncture of a punctured disk
    let disk = RegionModel::new(
        GridSpec::new(-1.0, -1.0, 1.0, 1.0, 1.0 / 32.0).unwrap(),
        OmegaSpec::new(arakelian::topology::OmegaShape::PuncturedDisk { center: Point::new(0.0, 0.0), r: 1.0 }),
        DeclaredEdges::NONE,
        vec![],
    )
    .unwrap();
    let circle = rasterize_closed(&[Primitive::Circle { center: Point::new(0.0, 0.0), r: 0.5 }], &disk.grid);
    let z = SampledFunction::from_fn(&circle, |z| z);
    assert_eq!(log_lift(&circle, &z, &disk, &LiftOptions::default()).unwrap_err(), LiftError::NotSimplyConnected);

    assert_eq!(tietze_extend(&SampledFunction::from_fn(&CellSet::empty(&g), |z| z), &region).unwrap_err(), LiftError::EmptyCarrier);
}

#[test]
fn phase_jump_is_reported() {
    let region = plane();
    let f_set = c_shape(&region.grid);
    // alternating signs along rows: adjacent values differ by a half turn
    let g = region.grid;
    let f = SampledFunction::from_samples(
        &g,
        f_set.iter().map(|i| (i, Complex64::new(if g.coords(i).0 % 2 == 0 { 1.0 } else { -1.0 }, 0.0))),
    );
    assert!(matches!(log_lift(&f_set, &f, &region, &LiftOptions::default()), Err(LiftError::PhaseJump { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tietze_matches_brute_nearest(w in 1usize..=12, h in 1usize..=12, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = common::unit_grid(w, h);
        let region = RegionModel::from_mask(CellSet::full(&g), DeclaredEdges::ALL).unwrap();
        let carrier = CellSet::from_fn(&g, |_| rng.gen_bool(0.2));
        prop_assume!(!carrier.is_empty());
        let samples = SampledFunction::from_samples(&g, carrier.iter().map(|i| (i, Complex64::new(i as f64, 1.0))));
        let ext = tietze_extend(&samples, &region).unwrap();
        for idx in 0..g.len() {
            let (i, j) = g.coords(idx);
            let nearest = carrier
                .iter()
                .min_by_key(|&s| {
                    let (a, b) = g.coords(s);
                    ((a as i64 - i as i64).pow(2) + (b as i64 - j as i64).pow(2), s)
                })
                .unwrap();
            prop_assert_eq!(ext.get(idx), samples.get(nearest));
        }
    }
}

#[test]
fn tietze_two_cells() {
    let g = GridSpec::new(0.0, 0.0, 5.0, 1.0, 1.0).unwrap();
    let region = common::plane_region(g);
    let samples = SampledFunction::from_samples(&g, [(0, Complex64::new(1.0, 0.0)), (4, Complex64::new(-1.0, 0.0))]);
    let ext = tietze_extend(&samples, &region).unwrap();
    let re: Vec<f64> = (0..5).map(|i| ext.get(i).unwrap().re).collect();
    assert_eq!(re, [1.0, 1.0, 1.0, -1.0, -1.0]);
}
