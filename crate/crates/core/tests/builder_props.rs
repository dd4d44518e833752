mod common;

use arakelian::arakelian::{build_exhaustion, check_arakelian, VerdictStatus};
use arakelian::builder::{
    build_v, build_v_with, check_refutation, disjoint_union_v, disk_cells, refute_witness, BuildError, Certificate,
    NeighborhoodResult,
};
use arakelian::grid::{rasterize_closed, CellSet, DistanceField, GridSpec, Point, Primitive};
use arakelian::scene::parse_scene;
use arakelian::topology::{compactified_complement_connected, label_components, Connectivity, RegionModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plane(delta: f64) -> RegionModel {
    common::plane_region(GridSpec::new(-2.0, -2.0, 2.0, 2.0, delta).unwrap())
}

fn seg(g: &GridSpec, a: (f64, f64), b: (f64, f64)) -> CellSet {
    rasterize_closed(&[Primitive::Segment(Point::new(a.0, a.1), Point::new(b.0, b.1))], g)
}

fn cell_at(g: &GridSpec, x: f64, y: f64) -> usize {
    g.locate(Point::new(x, y)).unwrap()
}

fn brute_dist(g: &GridSpec, set: &CellSet, idx: usize) -> f64 {
    let p = g.center(idx);
    set.iter().map(|s| g.center(s).dist(p)).fold(f64::INFINITY, f64::min)
}

/// Independent checks on a returned neighborhood: disk radii, coverage, curve
/// validity, the complement decomposition, and certificate idempotence.
fn validate(f: &CellSet, region: &RegionModel, res: &NeighborhoodResult) {
    let g = &region.grid;
    let ex = build_exhaustion(region, arakelian::builder::DEFAULT_LEVELS).unwrap();
    let u = &res.u;
    let dist_c = region.complement_distance();

    let mut disks = CellSet::empty(g);
    for d in &res.cover.disks {
        assert!(!u.contains(d.center));
        let want = (brute_dist(g, f, d.center) / 2.0).min(dist_c.get(d.center)).min(1.0);
        assert!((d.radius - want).abs() <= 1e-12, "radius {} vs {}", d.radius, want);
        let cells = disk_cells(g, &region.omega, d.center, d.radius);
        assert!(cells.is_disjoint(f));
        disks.union_with(&cells);
    }
    assert_eq!(disks, res.cover.covered);
    for idx in region.omega.difference(u).iter() {
        let p = g.center(idx);
        assert!(res.cover.disks.iter().any(|d| g.center(d.center).dist(p) <= d.radius + 1e-9), "cell {idx} uncovered");
    }

    let alpha = region.alpha_adjacent();
    for curve in &res.plan.curves {
        let cells = &curve.cells;
        assert_eq!(cells[0], res.cover.disks[curve.disk].center);
        assert!(cells.iter().all(|&c| region.omega.contains(c) && !f.contains(c)));
        assert!(cells.windows(2).all(|w| g.neighbors4(w[0]).any(|n| n == w[1])));
        assert!(alpha.contains(*cells.last().unwrap()));
        // stages tile the curve and each stays inside one complement component
        let mut at = 0;
        for st in &curve.stages {
            assert_eq!(st.start, at.max(1) - 1);
            at = st.end;
            let k = ex.levels.iter().find(|l| l.index == st.level).map(|l| l.cells.clone()).unwrap_or_else(|| CellSet::empty(g));
            let lab = label_components(&region.omega.difference(f).difference(&k), Connectivity::Four);
            let comp = lab.label(cells[st.start]).unwrap();
            assert!(cells[st.start..st.end].iter().all(|&c| lab.label(c) == Some(comp)));
        }
        assert_eq!(at, cells.len());
    }

    let curves = res.plan.cells(g);
    let removed = region.omega.difference(u).union(&disks).union(&curves);
    assert_eq!(region.omega.difference(&res.v), removed);
    assert!(compactified_complement_connected(&res.v, region).is_connected());
    assert_eq!(Certificate::verify(f, u, &res.v, region), res.certificate);
    assert!(res.certificate.holds());
}

#[test]
fn empty_inputs() {
    let region = plane(1.0 / 16.0);
    let g = region.grid;
    let empty = CellSet::empty(&g);
    let res = build_v(&empty, &empty, &region).unwrap();
    assert!(res.v.is_empty());
    assert!(res.certificate.complement.is_connected());

    let f = seg(&g, (-1.0, 0.0), (1.0, 0.0));
    let res = build_v(&f, &region.omega, &region).unwrap();
    assert!(res.cover.disks.is_empty() && res.plan.curves.is_empty());
    assert_eq!(res.v, region.omega);
}

#[test]
fn far_obstacle_gets_unit_disk() {
    let g = GridSpec::new(-6.0, -6.0, 6.0, 6.0, 0.125).unwrap();
    let region = common::plane_region(g);
    let f = seg(&g, (-0.5, 0.0), (0.0, 0.0));
    let p = g.center(cell_at(&g, 4.06, 0.06));
    let mut u = region.omega.clone();
    u.remove(cell_at(&g, 4.06, 0.06));
    assert!(brute_dist(&g, &f, g.locate(p).unwrap()) >= 4.0);
    let res = build_v(&f, &u, &region).unwrap();
    assert_eq!(res.cover.disks.len(), 1);
    assert_eq!(res.cover.disks[0].radius, 1.0);
    validate(&f, &region, &res);
}

#[test]
fn two_obstacles_at_plus_minus_i() {
    let region = plane(1.0 / 32.0);
    let g = region.grid;
    let f = seg(&g, (0.0, 0.0), (1.0, 0.0));
    let obstacles = [cell_at(&g, 0.01, 1.01), cell_at(&g, 0.01, -0.99)];
    let mut u = region.omega.clone();
    for o in obstacles {
        u.remove(o);
    }
    let res = build_v(&f, &u, &region).unwrap();
    assert!(res.cover.disks.len() <= 2);
    assert!(obstacles.iter().all(|&o| res.cover.covered.contains(o)));
    assert_eq!(res.plan.curves.len(), res.cover.disks.len());
    validate(&f, &region, &res);
}

#[test]
fn curve_from_left_of_vertical_segment() {
    let region = plane(1.0 / 32.0);
    let g = region.grid;
    let f = seg(&g, (0.0, -1.0), (0.0, 1.0));
    let mut u = region.omega.clone();
    u.remove(cell_at(&g, -0.49, 0.01));
    let res = build_v(&f, &u, &region).unwrap();
    assert_eq!(res.plan.curves.len(), 1);
    validate(&f, &region, &res);
}

#[test]
fn randomized_scenes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb1d);
    let g = GridSpec::new(-2.0, -2.0, 2.0, 2.0, 1.0 / 16.0).unwrap();
    let region = common::plane_region(g);
    for _ in 0..100 {
        let (f, obstacles) = common::arakelian_scene(&mut rng, &g);
        let u = region.omega.difference(&obstacles);
        let res = build_v(&f, &u, &region).unwrap();
        validate(&f, &region, &res);

        // shrinking U
        let d = DistanceField::new(&f);
        let mut smaller = u.clone();
        for _ in 0..rng.gen_range(1..=6) {
            let idx = rng.gen_range(0..g.len());
            if d.get(idx) >= 2.0 * g.delta {
                smaller.remove(idx);
            }
        }
        let res2 = build_v(&f, &smaller, &region).unwrap();
        assert!(res2.v.is_subset(&smaller));
        validate(&f, &region, &res2);
    }
}

#[test]
fn verified_fixtures_build_with_random_obstacles() {
    let cases = [
        ("grid -2 -2 2 2 0.0625\nomega plane\nunbounded all\nset F segment -1 0 1 0.3\n", "F"),
        ("fixture ex_2_10 0.3 0.6\ngrid -1 -1 1 1 0.015625\n", "F1"),
        ("fixture ex_2_10 0.3 0.6\ngrid -1 -1 1 1 0.015625\n", "F2"),
        ("fixture intro_staircase\ngrid -1 -1 2 4 0.0625\n", "F"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x26);
    for (text, set) in cases {
        let scene = parse_scene(text).unwrap();
        let win = scene.window(&[set], None).unwrap();
        let ex = build_exhaustion(&win.region, 3).unwrap();
        let verdict = check_arakelian(&win.f, &win.region, &ex, &[]);
        assert!(matches!(verdict.status, VerdictStatus::VerifiedUpTo(_)), "{text} {set}: {:?}", verdict.status);
        let g = win.region.grid;
        let d = DistanceField::new(&win.f);
        let candidates: Vec<usize> =
            win.region.omega.iter().filter(|&i| d.get(i) >= 2.0 * g.delta && !g.on_border(i)).collect();
        for _ in 0..50 {
            let mut u = win.region.omega.clone();
            for _ in 0..rng.gen_range(1..=5) {
                u.remove(candidates[rng.gen_range(0..candidates.len())]);
            }
            let res = build_v_with(&win.f, &u, &win.region, &ex).unwrap_or_else(|e| panic!("{text} {set}: {e}"));
            assert!(res.certificate.holds());
            assert!(res.v.is_subset(&u) && win.f.is_subset(&res.v));
        }
    }
}

#[test]
fn concentric_circles_refutation() {
    let scene = parse_scene("fixture ex_2_10 0.3 0.6\n").unwrap();
    let win = scene.window(&["F"], None).unwrap();
    let g = win.region.grid;
    let w = refute_witness(&win.f, &win.region, &CellSet::empty(&g)).unwrap();
    assert_eq!(w.points.len(), 1);
    let r = g.center(w.points[0]).norm();
    assert!(r > 0.3 && r < 0.6, "witness at radius {r}");
    let check = check_refutation(&win.f, &w.u, &win.region);
    assert!(check.holds());
    assert!(matches!(check.refused, Some(BuildError::HypothesisViolated { .. })));
}

#[test]
fn nested_square_rings_refutation() {
    let region = plane(1.0 / 32.0);
    let g = region.grid;
    let ring = |r: f64| {
        Primitive::Polyline(vec![
            Point::new(-r, -r),
            Point::new(r, -r),
            Point::new(r, r),
            Point::new(-r, r),
            Point::new(-r, -r),
        ])
    };
    let f = rasterize_closed(&[ring(1.0), ring(0.5)], &g);
    let w = refute_witness(&f, &region, &CellSet::empty(&g)).unwrap();
    assert_eq!(w.points.len(), 2);
    assert!(w.points.iter().any(|&p| {
        let c = g.center(p);
        c.x.abs() < 0.5 && c.y.abs() < 0.5
    }));
    assert!(build_v(&f, &w.u, &region).is_err());
    assert!(check_refutation(&f, &w.u, &region).holds());
    assert_eq!(refute_witness(&seg(&g, (0.0, 0.0), (1.0, 0.0)), &region, &CellSet::empty(&g)).unwrap_err(), BuildError::NoHoles);
}

#[test]
fn staircase_corridor_witnesses() {
    let scene = parse_scene("fixture intro_staircase\ngrid -1 -1 2 16 0.0078125\n").unwrap();
    let win = scene.window(&["F"], None).unwrap();
    let k = scene.k_probes(&win.region).into_iter().find(|p| p.label == "K").unwrap();
    let w = refute_witness(&win.f, &win.region, &k.cells).unwrap();
    assert!(w.points.len() >= 3, "{} witnesses", w.points.len());
    let g = win.region.grid;
    for &p in &w.points {
        let c = g.center(p);
        assert!(c.x > 0.0 && c.x < 1.0 && c.y > 0.0, "witness at {c:?}");
    }
}

#[test]
fn disjoint_union_examples() {
    let region = plane(1.0 / 32.0);
    let g = region.grid;
    let f1 = seg(&g, (-1.0, -0.5), (1.0, -0.5));
    let f2 = seg(&g, (-1.0, 0.5), (1.0, 0.5));
    let u = region.omega.clone();
    let res = disjoint_union_v(&f1, &f2, &u, &region).unwrap();
    assert!(res.certificate.holds());
    assert!(res.parts[0].v.is_disjoint(&res.parts[1].v));
    assert!(f1.union(&f2).is_subset(&res.v));

    let empty = CellSet::empty(&g);
    let res = disjoint_union_v(&empty, &f2, &u, &region).unwrap();
    assert_eq!(res.v, build_v(&f2, &u, &region).unwrap().v);

    assert_eq!(disjoint_union_v(&f1, &f1, &u, &region).unwrap_err(), BuildError::Overlap);

    let scene = parse_scene("fixture ex_2_10 0.3 0.6\n").unwrap();
    let w1 = scene.window(&["F1"], None).unwrap();
    let w2 = scene.window(&["F2"], None).unwrap();
    let err = disjoint_union_v(&w1.f, &w2.f, &w1.region.omega, &w1.region).unwrap_err();
    assert_eq!(err, BuildError::NotSimplyConnected);
}
