use num_rational::BigRational;
use proptest::prelude::*;

use tricensus::charvec::{bijection_check, psi_injectivity_check, PsiOutcome};
use tricensus::enumerate::{brute_force_count, count_full, count_partial};
use tricensus::generators::{gen_angle_frame, gen_quasi_convex, gen_radial_frame};
use tricensus::geom::{
    convex_hull, orient, point_in_triangle, segments_properly_cross, Coord, Point,
};
use tricensus::structure::{classify, close_sides, is_close};
use tricensus::{w, PointSet};

fn pt() -> impl Strategy<Value = Point> {
    (-40i64..=40, -40i64..=40).prop_map(|(x, y)| Point::from_ints(x, y))
}

fn point_set(lo: usize, hi: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec((-30i64..=30, -30i64..=30), lo..=hi)
        .prop_filter_map("general position", |c| PointSet::from_ints(&c).ok())
}

fn q(n: i64, d: i64) -> Coord {
    BigRational::new(n.into(), d.into())
}

/// `x -> (a x + b y + e, c x + d y + f)`.
fn affine(p: &Point, m: &[Coord; 6]) -> Point {
    Point::new(
        &m[0] * &p.x + &m[1] * &p.y + &m[4],
        &m[2] * &p.x + &m[3] * &p.y + &m[5],
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn orient_is_antisymmetric_and_cyclic(a in pt(), b in pt(), c in pt()) {
        let o = orient(&a, &b, &c);
        prop_assert_eq!(orient(&b, &a, &c), o.reverse());
        prop_assert_eq!(orient(&b, &c, &a), o);
        prop_assert_eq!(orient(&a, &c, &b), o.reverse());
    }

    #[test]
    fn orient_survives_scaling_and_translation(a in pt(), b in pt(), c in pt(), num in 1i64..50, den in 1i64..50, tx in -9i64..9, ty in -9i64..9) {
        let s = q(num, den);
        let m = [s.clone(), q(0, 1), q(0, 1), s, q(tx, 3), q(ty, 7)];
        prop_assert_eq!(orient(&affine(&a, &m), &affine(&b, &m), &affine(&c, &m)), orient(&a, &b, &c));
    }

    #[test]
    fn triangle_location_ignores_vertex_order(p in pt(), a in pt(), b in pt(), c in pt()) {
        let base = point_in_triangle(&p, &a, &b, &c);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        for (x, y, z) in [(&b, &c, &a), (&c, &a, &b), (&b, &a, &c), (&a, &c, &b), (&c, &b, &a)] {
            prop_assert_eq!(point_in_triangle(&p, x, y, z).unwrap(), base);
        }
    }

    #[test]
    fn crossing_is_symmetric(a in pt(), b in pt(), c in pt(), d in pt()) {
        let x = segments_properly_cross(&a, &b, &c, &d);
        prop_assert_eq!(segments_properly_cross(&c, &d, &a, &b), x);
        prop_assert_eq!(segments_properly_cross(&b, &a, &d, &c), x);
    }

    #[test]
    fn hull_ignores_input_order(m in point_set(3, 12), rot in 0usize..12) {
        let pts = m.points().to_vec();
        let k = rot % pts.len();
        let mut shuffled = pts.clone();
        shuffled.rotate_left(k);
        shuffled.reverse();
        let mut a: Vec<Point> = convex_hull(&pts).unwrap().into_iter().map(|i| pts[i].clone()).collect();
        let mut b: Vec<Point> = convex_hull(&shuffled).unwrap().into_iter().map(|i| shuffled[i].clone()).collect();
        a.sort_by(|p, q| (&p.x, &p.y).cmp(&(&q.x, &q.y)));
        b.sort_by(|p, q| (&p.x, &p.y).cmp(&(&q.x, &q.y)));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn classify_is_affine_invariant(m in point_set(4, 9), a in 1i64..5, b in -3i64..4, c in -3i64..4, d in 1i64..5) {
        prop_assume!(a * d - b * c > 0);
        let mat = [q(a, 1), q(b, 1), q(c, 1), q(d, 1), q(1, 2), q(-5, 3)];
        let image = PointSet::new(m.points().iter().map(|p| affine(p, &mat)).collect()).unwrap();
        let (r1, r2) = (classify(&m), classify(&image));
        prop_assert_eq!(r1.is_quasi_convex, r2.is_quasi_convex);
        // the chosen side depends on where the hull listing starts, which an
        // affine map can move; the set of close sides cannot change
        for &p in m.interior() {
            let mut s1 = close_sides(&m, p);
            let mut s2 = close_sides(&image, p);
            s1.sort_unstable();
            s2.sort_unstable();
            prop_assert_eq!(s1, s2);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn each_side_has_at_most_one_close_point(m in point_set(4, 10)) {
        for side in m.hull_sides() {
            let close = m.interior().iter().filter(|&&p| is_close(&m, p, side).unwrap().close).count();
            prop_assert!(close <= 1, "side {:?} has {} close points", side, close);
        }
    }

    #[test]
    fn generated_quasi_convex_sets_have_one_close_point_per_chosen_side(h in 3usize..=7, mask in 0u32..128, seed in 0u64..1000) {
        let sides: Vec<usize> = (0..h).filter(|&i| mask >> i & 1 == 1).collect();
        let m = gen_quasi_convex(h, &sides, 64, seed).unwrap();
        prop_assert!(classify(&m).is_quasi_convex);
        for side in m.hull_sides() {
            let close = m.interior().iter().filter(|&&p| is_close(&m, p, side).unwrap().close).count();
            prop_assert!(close <= 1);
        }
    }

    #[test]
    fn region_count_matches_brute_force(m in point_set(3, 8)) {
        let all: Vec<usize> = (0..m.len()).collect();
        prop_assert_eq!(count_full(&m), brute_force_count(&m, &all, 10).unwrap());
    }

    #[test]
    fn partial_count_is_at_least_w(m in point_set(3, 7)) {
        let c = count_partial(&m);
        let wn = w(m.len()).unwrap();
        prop_assert!(c >= wn);
        prop_assert_eq!(c == wn, classify(&m).is_quasi_convex);
    }

    #[test]
    fn counts_ignore_point_order(m in point_set(3, 7)) {
        let mut pts = m.points().to_vec();
        pts.reverse();
        let r = PointSet::new(pts).unwrap();
        prop_assert_eq!(count_full(&m), count_full(&r));
        prop_assert_eq!(count_partial(&m), count_partial(&r));
    }

    #[test]
    fn polylines_and_vectors_correspond(n in 0usize..=8, seed in any::<u64>()) {
        prop_assert!(bijection_check(&gen_angle_frame(n, seed).unwrap()).unwrap());
    }

    #[test]
    fn psi_is_injective(n in 3usize..=7, seed in any::<u64>()) {
        let frame = gen_radial_frame(n, seed).unwrap();
        let injective = matches!(psi_injectivity_check(&frame, 10).unwrap(), PsiOutcome::Injective { .. });
        prop_assert!(injective);
    }
}
