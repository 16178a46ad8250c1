//! Close points and quasi-convex classification.
//!
//! An interior point `p` is close to a hull side `QR` when every triangle
//! `P'QR` with an apex `P'` from the rest of the set contains `p`. A set is
//! quasi-convex when every interior point is close to some hull side.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Location, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CloseTest {
    pub close: bool,
    /// First apex whose triangle misses the point, when not close.
    pub failing_apex: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SideFailure {
    pub side: (usize, usize),
    pub apex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosenessWitness {
    pub interior_index: usize,
    pub side: Option<(usize, usize)>,
    /// One failing apex for every hull side the point is not close to.
    pub failing_apexes: Vec<SideFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiConvexReport {
    pub is_quasi_convex: bool,
    pub assignment: BTreeMap<usize, (usize, usize)>,
    pub polygon_order: Option<Vec<usize>>,
    pub witnesses: Vec<ClosenessWitness>,
}

fn close_unchecked(m: &PointSet, p: usize, (q, r): (usize, usize)) -> CloseTest {
    let failing_apex = (0..m.len())
        .filter(|&a| a != p && a != q && a != r)
        .find(|&a| m.locate(p, a, q, r) != Location::StrictInside);
    CloseTest {
        close: failing_apex.is_none(),
        failing_apex,
    }
}

/// Tests whether interior point `p` is close to the hull side `side`
/// (given in either order).
pub fn is_close(m: &PointSet, p: usize, side: (usize, usize)) -> Result<CloseTest> {
    m.check_index(p)?;
    m.check_index(side.0)?;
    m.check_index(side.1)?;
    if m.is_hull_vertex(p) {
        return Err(Error::NotInterior(p));
    }
    let side = m
        .hull_side(side.0, side.1)
        .ok_or(Error::NotHullSide(side.0, side.1))?;
    Ok(close_unchecked(m, p, side))
}

/// Hull sides an interior point is close to, in hull order.
pub fn close_sides(m: &PointSet, p: usize) -> Vec<(usize, usize)> {
    m.hull_sides()
        .into_iter()
        .filter(|&s| close_unchecked(m, p, s).close)
        .collect()
}

/// Classifies every interior point and, for quasi-convex sets, builds the
/// polygon order: hull counter-clockwise with each close point inserted
/// between the endpoints of its side.
pub fn classify(m: &PointSet) -> QuasiConvexReport {
    let sides = m.hull_sides();
    let mut assignment = BTreeMap::new();
    let mut witnesses = Vec::with_capacity(m.interior().len());
    for &p in m.interior() {
        let mut side = None;
        let mut failing_apexes = Vec::new();
        for &s in &sides {
            let t = close_unchecked(m, p, s);
            match t.failing_apex {
                None if side.is_none() => side = Some(s),
                None => {}
                Some(apex) => failing_apexes.push(SideFailure { side: s, apex }),
            }
        }
        if let Some(s) = side {
            assignment.insert(p, s);
        }
        witnesses.push(ClosenessWitness {
            interior_index: p,
            side,
            failing_apexes,
        });
    }
    let is_quasi_convex = assignment.len() == m.interior().len();
    let polygon_order = is_quasi_convex.then(|| {
        let by_side: BTreeMap<(usize, usize), usize> =
            assignment.iter().map(|(&p, &s)| (s, p)).collect();
        let mut order = Vec::with_capacity(m.len());
        for &s in &sides {
            order.push(s.0);
            if let Some(&p) = by_side.get(&s) {
                order.push(p);
            }
        }
        order
    });
    QuasiConvexReport {
        is_quasi_convex,
        assignment,
        polygon_order,
        witnesses,
    }
}

/// For a set with a single interior point `p`: `p` is close to side
/// `P_i P_{i+1}` iff it lies in both `P_{i-1} P_i P_{i+1}` and
/// `P_i P_{i+1} P_{i+2}`.
pub fn close_single_interior_check(m: &PointSet, p: usize) -> Result<bool> {
    m.check_index(p)?;
    if m.interior().len() != 1 {
        return Err(Error::InteriorCount(m.interior().len()));
    }
    if m.interior()[0] != p {
        return Err(Error::NotInterior(p));
    }
    let hull = m.hull();
    let h = hull.len();
    let at = |k: usize| hull[k % h];
    Ok((0..h).any(|i| {
        m.locate(p, at(i + h - 1), at(i), at(i + 1)) == Location::StrictInside
            && m.locate(p, at(i), at(i + 1), at(i + 2)) == Location::StrictInside
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;

    fn unit_square_with(p: Point) -> PointSet {
        PointSet::new(vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(1, 1),
            Point::from_ints(0, 1),
            p,
        ])
        .unwrap()
    }

    #[test]
    fn triangle_interior_point_is_close_to_every_side() {
        let m = PointSet::from_ints(&[(0, 0), (6, 0), (0, 6), (1, 2)]).unwrap();
        for s in m.hull_sides() {
            assert!(is_close(&m, 3, s).unwrap().close);
        }
        assert!(close_single_interior_check(&m, 3).unwrap());
    }

    #[test]
    fn square_point_near_bottom_side() {
        let m = unit_square_with(Point::from_ratios(1, 2, 9, 20));
        assert_eq!(
            is_close(&m, 4, (0, 1)).unwrap(),
            CloseTest {
                close: true,
                failing_apex: None
            }
        );
        // below the diagonal AC, so outside ACD
        assert_eq!(
            is_close(&m, 4, (2, 3)).unwrap(),
            CloseTest {
                close: false,
                failing_apex: Some(0)
            }
        );
        assert!(close_single_interior_check(&m, 4).unwrap());
        let report = classify(&m);
        assert!(report.is_quasi_convex);
        assert_eq!(report.assignment.get(&4), Some(&(0, 1)));
        assert_eq!(report.polygon_order, Some(vec![0, 4, 1, 2, 3]));
    }

    #[test]
    fn pentagon_with_center_is_not_quasi_convex() {
        let m = PointSet::from_ints(&[(0, 2), (1, 0), (5, 0), (6, 2), (3, 5), (3, 3)]).unwrap();
        let report = classify(&m);
        assert!(!report.is_quasi_convex);
        assert!(report.polygon_order.is_none());
        assert_eq!(report.witnesses[0].failing_apexes.len(), 5);
        assert!(!close_single_interior_check(&m, 5).unwrap());
    }

    #[test]
    fn convex_polygon_is_trivially_quasi_convex() {
        let m = PointSet::from_ints(&[(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)]).unwrap();
        let report = classify(&m);
        assert!(report.is_quasi_convex);
        assert!(report.assignment.is_empty());
        assert_eq!(report.polygon_order.as_deref(), Some(m.hull()));
    }

    #[test]
    fn argument_errors() {
        let m = unit_square_with(Point::from_ratios(1, 2, 9, 20));
        assert!(matches!(
            is_close(&m, 0, (1, 2)),
            Err(Error::NotInterior(0))
        ));
        assert!(matches!(
            is_close(&m, 4, (0, 2)),
            Err(Error::NotHullSide(0, 2))
        ));
        assert!(matches!(
            is_close(&m, 9, (0, 1)),
            Err(Error::IndexOutOfRange { .. })
        ));
        let two = PointSet::from_ints(&[(0, 0), (9, 0), (0, 9), (1, 2), (2, 1)]).unwrap();
        assert!(matches!(
            close_single_interior_check(&two, 3),
            Err(Error::InteriorCount(2))
        ));
    }

    #[test]
    fn side_order_does_not_matter() {
        let m = unit_square_with(Point::from_ratios(1, 2, 9, 20));
        assert_eq!(
            is_close(&m, 4, (1, 0)).unwrap(),
            is_close(&m, 4, (0, 1)).unwrap()
        );
    }
}
