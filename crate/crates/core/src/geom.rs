//! Exact planar predicates over rational coordinates.
//!
//! Every decision in the crate goes through [`orient`]; there is no floating
//! point and no tolerance anywhere in this module.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational coordinate, always kept in canonical form.
pub type Coord = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Coord::from_integer(x.into()), Coord::from_integer(y.into()))
    }

    /// Point with coordinates `xn/xd`, `yn/yd`. Panics on a zero denominator.
    pub fn from_ratios(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point::new(
            Coord::new(xn.into(), xd.into()),
            Coord::new(yn.into(), yd.into()),
        )
    }

    /// `self + t * (other - self)`.
    pub fn lerp(&self, other: &Point, t: &Coord) -> Point {
        Point::new(
            &self.x + t * (&other.x - &self.x),
            &self.y + t * (&other.y - &self.y),
        )
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Cross product of `(b - a)` and `(c - a)`.
pub fn cross(a: &Point, b: &Point, c: &Point) -> Coord {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// Cross product of two free vectors given as coordinate pairs.
pub fn cross_vec(u: (&Coord, &Coord), v: (&Coord, &Coord)) -> Coord {
    u.0 * v.1 - u.1 * v.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn from_sign(s: i8) -> Self {
        match s.signum() {
            -1 => Orientation::Clockwise,
            0 => Orientation::Collinear,
            _ => Orientation::CounterClockwise,
        }
    }

    pub fn signum(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }

    pub fn reverse(self) -> Self {
        Orientation::from_sign(-self.signum())
    }
}

fn sign_of(v: &Coord) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of `(q - p) x (r - p)`; counter-clockwise is positive.
pub fn orient(p: &Point, q: &Point, r: &Point) -> Orientation {
    Orientation::from_sign(sign_of(&cross(p, q, r)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    StrictInside,
    Boundary,
    Outside,
}

fn locate_by_signs(abc: i8, s: [i8; 3]) -> Location {
    // normalise so the triangle is counter-clockwise
    let s = s.map(|v| v * abc);
    if s.iter().any(|&v| v < 0) {
        Location::Outside
    } else if s.iter().all(|&v| v > 0) {
        Location::StrictInside
    } else {
        Location::Boundary
    }
}

/// Classifies `p` against the closed triangle `abc`.
pub fn point_in_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> Result<Location> {
    let abc = orient(a, b, c).signum();
    if abc == 0 {
        return Err(Error::DegenerateTriangle);
    }
    let s = [
        orient(a, b, p).signum(),
        orient(b, c, p).signum(),
        orient(c, a, p).signum(),
    ];
    Ok(locate_by_signs(abc, s))
}

/// True iff the open segments `ab` and `cd` meet in exactly one point.
pub fn segments_properly_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c).signum();
    let o2 = orient(a, b, d).signum();
    let o3 = orient(c, d, a).signum();
    let o4 = orient(c, d, b).signum();
    o1 * o2 < 0 && o3 * o4 < 0
}

/// A witness that a point list is not in general position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    Coincident(usize, usize),
    Collinear(usize, usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Coincident(i, j) => write!(f, "points {i} and {j} coincide"),
            Violation::Collinear(i, j, k) => write!(f, "points {i}, {j}, {k} are collinear"),
        }
    }
}

/// `Ok(())` iff all points are distinct and no three are collinear.
/// Coincident pairs are reported before collinear triples, each in
/// lexicographic order.
pub fn is_general_position(points: &[Point]) -> std::result::Result<(), Violation> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Err(Violation::Coincident(i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(&points[i], &points[j], &points[k]) == Orientation::Collinear {
                    return Err(Violation::Collinear(i, j, k));
                }
            }
        }
    }
    Ok(())
}

/// Counter-clockwise hull cycle starting at the lexicographically smallest
/// point. Points in the relative interior of hull edges are dropped.
pub fn convex_hull(points: &[Point]) -> Result<Vec<usize>> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            required: 3,
            got: points.len(),
        });
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]));
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            let (i, j) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::NotGeneralPosition(Violation::Coincident(i, j)));
        }
    }

    let turn = |h: &[usize], r: usize| -> bool {
        let (p, q) = (h[h.len() - 2], h[h.len() - 1]);
        orient(&points[p], &points[q], &points[r]) == Orientation::CounterClockwise
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2 && !turn(&lower, i) {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2 && !turn(&upper, i) {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::AllCollinear);
    }
    Ok(lower)
}

/// Precomputed orientation signs for every ordered triple of a point list,
/// plus the rank of each point's y coordinate.
#[derive(Clone, Debug)]
pub struct OrientTable {
    n: usize,
    signs: Vec<i8>,
    y_rank: Vec<u32>,
}

impl OrientTable {
    pub fn new(points: &[Point]) -> Self {
        let n = points.len();
        let mut signs = vec![0i8; n * n * n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = orient(&points[i], &points[j], &points[k]).signum();
                    for (a, b, c, v) in [
                        (i, j, k, s),
                        (j, k, i, s),
                        (k, i, j, s),
                        (j, i, k, -s),
                        (i, k, j, -s),
                        (k, j, i, -s),
                    ] {
                        signs[(a * n + b) * n + c] = v;
                    }
                }
            }
        }
        let mut by_y: Vec<usize> = (0..n).collect();
        by_y.sort_by(|&a, &b| points[a].y.cmp(&points[b].y));
        let mut y_rank = vec![0u32; n];
        let mut rank = 0u32;
        for w in 0..n {
            if w > 0 && points[by_y[w]].y != points[by_y[w - 1]].y {
                rank += 1;
            }
            y_rank[by_y[w]] = rank;
        }
        OrientTable { n, signs, y_rank }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn sign(&self, i: usize, j: usize, k: usize) -> i8 {
        self.signs[(i * self.n + j) * self.n + k]
    }

    pub fn properly_cross(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        self.sign(a, b, c) * self.sign(a, b, d) < 0 && self.sign(c, d, a) * self.sign(c, d, b) < 0
    }
}

/// A labeled point set in general position with its hull/interior split.
#[derive(Clone, Debug)]
pub struct PointSet {
    points: Vec<Point>,
    hull: Vec<usize>,
    interior: Vec<usize>,
    hull_pos: Vec<Option<usize>>,
    cache: OnceLock<OrientTable>,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for PointSet {}

impl PointSet {
    /// Validates general position and computes the hull.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints {
                required: 3,
                got: points.len(),
            });
        }
        is_general_position(&points).map_err(Error::NotGeneralPosition)?;
        let hull = convex_hull(&points)?;
        let mut hull_pos = vec![None; points.len()];
        for (pos, &i) in hull.iter().enumerate() {
            hull_pos[i] = Some(pos);
        }
        let interior = (0..points.len())
            .filter(|&i| hull_pos[i].is_none())
            .collect();
        Ok(PointSet {
            points,
            hull,
            interior,
            hull_pos,
            cache: OnceLock::new(),
        })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        PointSet::new(
            coords
                .iter()
                .map(|&(x, y)| Point::from_ints(x, y))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Hull vertex indices, counter-clockwise from the lexicographically
    /// smallest point.
    pub fn hull(&self) -> &[usize] {
        &self.hull
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn is_hull_vertex(&self, i: usize) -> bool {
        self.hull_pos[i].is_some()
    }

    pub fn is_convex_position(&self) -> bool {
        self.interior.is_empty()
    }

    /// Hull sides as counter-clockwise ordered pairs.
    pub fn hull_sides(&self) -> Vec<(usize, usize)> {
        let h = self.hull.len();
        (0..h)
            .map(|k| (self.hull[k], self.hull[(k + 1) % h]))
            .collect()
    }

    /// Normalises `(q, r)` in either order to the counter-clockwise hull side.
    pub fn hull_side(&self, q: usize, r: usize) -> Option<(usize, usize)> {
        let h = self.hull.len();
        let (pq, pr) = (
            self.hull_pos.get(q)?.as_ref()?,
            self.hull_pos.get(r)?.as_ref()?,
        );
        if (pq + 1) % h == *pr {
            Some((q, r))
        } else if (pr + 1) % h == *pq {
            Some((r, q))
        } else {
            None
        }
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            })
        }
    }

    /// Orientation table over all points, built on first use.
    pub fn table(&self) -> &OrientTable {
        self.cache.get_or_init(|| OrientTable::new(&self.points))
    }

    /// Cached orientation of three indexed points as -1, 0 or +1.
    #[inline]
    pub fn orient_sign(&self, i: usize, j: usize, k: usize) -> i8 {
        self.table().sign(i, j, k)
    }

    pub fn orient(&self, i: usize, j: usize, k: usize) -> Orientation {
        Orientation::from_sign(self.orient_sign(i, j, k))
    }

    /// Index version of [`point_in_triangle`]; `a, b, c` must be distinct.
    pub fn locate(&self, p: usize, a: usize, b: usize, c: usize) -> Location {
        let abc = self.orient_sign(a, b, c);
        debug_assert!(abc != 0);
        let s = [
            self.orient_sign(a, b, p),
            self.orient_sign(b, c, p),
            self.orient_sign(c, a, p),
        ];
        locate_by_signs(abc, s)
    }

    pub fn properly_cross(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        self.table().properly_cross(a, b, c, d)
    }

    pub fn cmp_y(&self, i: usize, j: usize) -> Ordering {
        let c = self.table();
        c.y_rank[i].cmp(&c.y_rank[j])
    }

    /// Strict containment of point `p` in the simple polygon `cycle` (either
    /// orientation). `p` must not lie on the polygon boundary.
    pub fn in_polygon(&self, p: usize, cycle: &[usize]) -> bool {
        let m = cycle.len();
        let mut inside = false;
        for k in 0..m {
            let (a, b) = (cycle[k], cycle[(k + 1) % m]);
            let a_above = self.cmp_y(a, p) == Ordering::Greater;
            let b_above = self.cmp_y(b, p) == Ordering::Greater;
            if a_above != b_above {
                // the edge straddles the horizontal line through p; count it
                // when it passes to the right of p
                let (lo, hi) = if b_above { (a, b) } else { (b, a) };
                if self.orient_sign(lo, hi, p) > 0 {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Twice the signed area of the hull.
    pub fn hull_area2(&self) -> Coord {
        polygon_area2(self.hull.iter().map(|&i| &self.points[i]))
    }
}

/// Twice the signed area of a polygon given by its vertices in order.
pub fn polygon_area2<'a>(vertices: impl IntoIterator<Item = &'a Point>) -> Coord {
    let vs: Vec<&Point> = vertices.into_iter().collect();
    let mut acc = Coord::zero();
    for k in 0..vs.len() {
        let (a, b) = (vs[k], vs[(k + 1) % vs.len()]);
        acc += &a.x * &b.y - &a.y * &b.x;
    }
    acc
}

/// Least common multiple of all coordinate denominators.
pub fn common_denominator(points: &[Point]) -> BigInt {
    use num_integer::Integer;
    let mut l = BigInt::from(1);
    for p in points {
        l = l.lcm(p.x.denom());
        l = l.lcm(p.y.denom());
    }
    l
}

/// Scales all points by the common denominator so every coordinate is an
/// integer. Uniform positive scaling preserves every predicate.
pub fn to_integer_points(points: &[Point]) -> Vec<Point> {
    let l = Coord::from_integer(common_denominator(points));
    points
        .iter()
        .map(|p| Point::new(&p.x * &l, &p.y * &l))
        .collect()
}
