//! Characteristic vectors of polylines inside an angle and of good polygons
//! around a point, and the projection of interior points along rays
//! ("greenify").
//!
//! The picture to keep in mind is a rubber band stretched over nails: bit
//! `i` of a characteristic vector is 1 when the band passes on the apex
//! side of nail `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{cross_vec, is_general_position, Coord, OrientTable, Point, PointSet};

pub const DEFAULT_PSI_CAP: usize = 10;
pub const GREEN_RETRIES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharVector(Vec<bool>);

impl CharVector {
    pub fn new(bits: Vec<bool>) -> Self {
        CharVector(bits)
    }

    /// Bit `i` is bit `i` of `mask`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        CharVector((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }
}

impl fmt::Display for CharVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for CharVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidParameter(format!(
                    "`{s}` is not a bit string"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(CharVector)
    }
}

// ---------------------------------------------------------------------------
// Polylines in an angle
// ---------------------------------------------------------------------------

/// An angle `BAC` (below π) with points strictly inside it, sorted left to
/// right: `X` is left of `Y` when the angle `BAX` is smaller than `BAY`.
///
/// Internally the points are indexed `0 = A, 1 = B, 2..=n+1 = P_1..P_n,
/// n+2 = C`, so that position `e` in the extended chain `B, P_1, .., P_n, C`
/// is table index `e + 1`.
#[derive(Clone, Debug)]
pub struct AngleFrame {
    apex: Point,
    left_arm: Point,
    right_arm: Point,
    interior: Vec<Point>,
    /// `order[k]` is the input position of the k-th point from the left.
    order: Vec<usize>,
    table: OrientTable,
}

/// A polyline from `B` to `C`, given by its internal vertices as increasing
/// positions in the frame's left-to-right order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Polyline {
    internal_vertices: Vec<usize>,
}

impl Polyline {
    pub fn new(internal_vertices: Vec<usize>) -> Self {
        Polyline { internal_vertices }
    }

    pub fn from_mask(mask: u64, n: usize) -> Self {
        Polyline::new((0..n).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn internal_vertices(&self) -> &[usize] {
        &self.internal_vertices
    }
}

/// Builds the frame, sorting points left to right with orientation tests.
pub fn build_angle_frame(
    apex: Point,
    left_arm: Point,
    right_arm: Point,
    pts: Vec<Point>,
) -> Result<AngleFrame> {
    let mut all = vec![apex.clone(), left_arm.clone(), right_arm.clone()];
    all.extend(pts.iter().cloned());
    is_general_position(&all).map_err(Error::NotGeneralPosition)?;
    let table = OrientTable::new(&all);
    // apex 0, left arm 1, right arm 2, points from 3
    let turn = table.sign(0, 1, 2);
    for k in 0..pts.len() {
        if table.sign(0, 1, k + 3) != turn || table.sign(0, k + 3, 2) != turn {
            return Err(Error::OutsideAngle(k));
        }
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&x, &y| {
        if x == y {
            std::cmp::Ordering::Equal
        } else if table.sign(0, x + 3, y + 3) == turn {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let interior: Vec<Point> = order.iter().map(|&k| pts[k].clone()).collect();
    let mut chain = vec![apex.clone(), left_arm.clone()];
    chain.extend(interior.iter().cloned());
    chain.push(right_arm.clone());
    Ok(AngleFrame {
        apex,
        left_arm,
        right_arm,
        interior,
        order,
        table: OrientTable::new(&chain),
    })
}

impl AngleFrame {
    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }

    pub fn apex(&self) -> &Point {
        &self.apex
    }

    pub fn left_arm(&self) -> &Point {
        &self.left_arm
    }

    pub fn right_arm(&self) -> &Point {
        &self.right_arm
    }

    /// Points in left-to-right order.
    pub fn interior(&self) -> &[Point] {
        &self.interior
    }

    /// Input position of the point at frame position `k`.
    pub fn input_index(&self, k: usize) -> usize {
        self.order[k]
    }

    /// Does segment `A P_e` cross segment `P_l P_r`? (chain positions)
    fn apex_ray_crosses(&self, e: usize, l: usize, r: usize) -> bool {
        self.table.properly_cross(0, e + 1, l + 1, r + 1)
    }

    fn check_polyline(&self, line: &Polyline) -> Result<()> {
        let v = &line.internal_vertices;
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPolyline(
                "vertices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = v.last() {
            if last >= self.len() {
                return Err(Error::InvalidPolyline(format!(
                    "vertex {last} out of range"
                )));
            }
        }
        Ok(())
    }
}

/// Characteristic vector of a polyline. For a point that is not a vertex,
/// the bit is 1 iff the segment from the apex to it crosses the polyline
/// edge above it; for a vertex the rule is reversed, using the segment
/// between its two polyline neighbours.
pub fn charvec_of_polyline(frame: &AngleFrame, line: &Polyline) -> Result<CharVector> {
    frame.check_polyline(line)?;
    let n = frame.len();
    // chain positions: 0 = B, i + 1 = P_{i+1}, n + 1 = C
    let mut verts = Vec::with_capacity(line.internal_vertices.len() + 2);
    verts.push(0);
    verts.extend(line.internal_vertices.iter().map(|&v| v + 1));
    verts.push(n + 1);

    let mut bits = Vec::with_capacity(n);
    let mut t = 0; // verts[t] < e <= verts[t + 1]
    for e in 1..=n {
        while verts[t + 1] < e {
            t += 1;
        }
        let bit = if verts[t + 1] == e {
            !frame.apex_ray_crosses(e, verts[t], verts[t + 2])
        } else {
            frame.apex_ray_crosses(e, verts[t], verts[t + 1])
        };
        bits.push(bit);
    }
    Ok(CharVector(bits))
}

/// The unique polyline with the given characteristic vector.
///
/// Recursion on a sub-angle with endpoints `left`, `right` and the points
/// between them: take the point `P_k` that comes first when a ray at `left`
/// is rotated from the apex towards the angle. Every polyline avoiding
/// `P_k` passes on the apex side of it's far side, so `P_k` is dropped when
/// its bit is 0 and becomes a vertex splitting the angle when its bit is 1.
/// When the first point hit is `right` itself, all points lie beyond the
/// chord; the mirror argument applies to the last point hit instead, with
/// the roles of 0 and 1 exchanged.
pub fn polyline_from_charvec(frame: &AngleFrame, chi: &CharVector) -> Result<Polyline> {
    let n = frame.len();
    if chi.len() != n {
        return Err(Error::CharVectorLength {
            expected: n,
            got: chi.len(),
        });
    }
    let mut out = Vec::new();
    let points: Vec<usize> = (1..=n).collect();
    build_polyline(frame, chi, 0, n + 1, &points, &mut out);
    Ok(Polyline::new(out.into_iter().map(|e| e - 1).collect()))
}

fn build_polyline(
    frame: &AngleFrame,
    chi: &CharVector,
    left: usize,
    right: usize,
    points: &[usize],
    out: &mut Vec<usize>,
) {
    if points.is_empty() {
        return;
    }
    let t = &frame.table;
    let (l, a) = (left + 1, 0);
    // all candidates lie on the same side of the line through `left` and the apex
    let dir = t.sign(l, a, right + 1);
    let before = |x: usize, y: usize| t.sign(l, x + 1, y + 1) == dir;
    let first = points
        .iter()
        .copied()
        .fold(right, |best, x| if before(x, best) { x } else { best });
    let (pivot, vertex_bit) = if first != right {
        (first, true)
    } else {
        let last = points
            .iter()
            .copied()
            .fold(points[0], |best, x| if before(best, x) { x } else { best });
        (last, false)
    };
    let pos = points
        .iter()
        .position(|&x| x == pivot)
        .expect("pivot is a frame point");
    if chi.get(pivot - 1) == vertex_bit {
        build_polyline(frame, chi, left, pivot, &points[..pos], out);
        out.push(pivot);
        build_polyline(frame, chi, pivot, right, &points[pos + 1..], out);
    } else {
        let rest: Vec<usize> = points.iter().copied().filter(|&x| x != pivot).collect();
        build_polyline(frame, chi, left, right, &rest, out);
    }
}

/// Checks that polylines and vectors correspond one to one: every polyline
/// round-trips through its vector, every vector through its polyline, and
/// no two polylines share a vector.
pub fn bijection_check(frame: &AngleFrame) -> Result<bool> {
    let n = frame.len();
    if n > 20 {
        return Err(Error::SizeCap { size: n, cap: 20 });
    }
    let mut seen = BTreeSet::new();
    for mask in 0..1u64 << n {
        let line = Polyline::from_mask(mask, n);
        let chi = charvec_of_polyline(frame, &line)?;
        if polyline_from_charvec(frame, &chi)? != line {
            return Ok(false);
        }
        let v = CharVector::from_mask(mask, n);
        if charvec_of_polyline(frame, &polyline_from_charvec(frame, &v)?)? != v {
            return Ok(false);
        }
        seen.insert(chi);
    }
    Ok(seen.len() == 1 << n)
}

// ---------------------------------------------------------------------------
// Good polygons around a centre
// ---------------------------------------------------------------------------

/// A centre point with the other points sorted counter-clockwise, starting
/// from a reference direction that is parallel to no centre-point ray.
///
/// Table indices: `0` is the centre, `k + 1` is the k-th point in order.
#[derive(Clone, Debug)]
pub struct RadialFrame {
    center: Point,
    points: Vec<Point>,
    order: Vec<usize>,
    reference: (Coord, Coord),
    table: OrientTable,
}

/// Vertex positions (increasing) of a closed polygon in a radial frame.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GoodPolygon {
    vertices: Vec<usize>,
}

impl GoodPolygon {
    pub fn new(vertices: Vec<usize>) -> Self {
        GoodPolygon { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }
}

/// `(0,-1)`, then `(1,-k)` for `k = 0, 1, 2, ...`.
fn reference_directions() -> impl Iterator<Item = (Coord, Coord)> {
    std::iter::once((Coord::zero(), -Coord::one()))
        .chain((0i64..).map(|k| (Coord::one(), Coord::from_integer((-k).into()))))
}

pub fn build_radial_frame(center: Point, pts: Vec<Point>) -> Result<RadialFrame> {
    let mut all = vec![center.clone()];
    all.extend(pts.iter().cloned());
    is_general_position(&all).map_err(Error::NotGeneralPosition)?;

    let rays: Vec<(Coord, Coord)> = pts
        .iter()
        .map(|p| (&p.x - &center.x, &p.y - &center.y))
        .collect();
    let reference = reference_directions()
        .find(|d| {
            rays.iter()
                .all(|r| !cross_vec((&d.0, &d.1), (&r.0, &r.1)).is_zero())
        })
        .expect("finitely many rays exclude finitely many directions");

    // half 0: angle from the reference in (0, pi); half 1: (pi, 2 pi)
    let half = |r: &(Coord, Coord)| {
        u8::from(cross_vec((&reference.0, &reference.1), (&r.0, &r.1)).is_negative())
    };
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&x, &y| {
        half(&rays[x]).cmp(&half(&rays[y])).then_with(|| {
            if x == y {
                std::cmp::Ordering::Equal
            } else if cross_vec((&rays[x].0, &rays[x].1), (&rays[y].0, &rays[y].1)).is_positive() {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        })
    });
    let points: Vec<Point> = order.iter().map(|&k| pts[k].clone()).collect();
    let mut indexed = vec![center.clone()];
    indexed.extend(points.iter().cloned());
    Ok(RadialFrame {
        center,
        points,
        order,
        reference,
        table: OrientTable::new(&indexed),
    })
}

impl RadialFrame {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// Points in counter-clockwise order from the reference direction.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn input_index(&self, k: usize) -> usize {
        self.order[k]
    }

    pub fn reference_direction(&self) -> (&Coord, &Coord) {
        (&self.reference.0, &self.reference.1)
    }

    /// Good: at least three vertices, and each consecutive pair (cyclically)
    /// is less than a half-turn apart counter-clockwise around the centre.
    pub fn is_good(&self, polygon: &GoodPolygon) -> bool {
        let v = &polygon.vertices;
        let m = v.len();
        m >= 3
            && v.windows(2).all(|w| w[0] < w[1])
            && v.last().is_some_and(|&last| last < self.len())
            && (0..m).all(|k| self.table.sign(0, v[k] + 1, v[(k + 1) % m] + 1) > 0)
    }

    /// Is the centre strictly inside the convex cone at point `i` spanned by
    /// the directions to points `l` and `r`?
    fn center_in_cone(&self, i: usize, l: usize, r: usize) -> bool {
        let (i, l, r) = (i + 1, l + 1, r + 1);
        let s = self.table.sign(i, l, r);
        self.table.sign(i, l, 0) == s && self.table.sign(i, 0, r) == s
    }

    pub fn good_polygons(&self) -> Vec<GoodPolygon> {
        let n = self.len();
        assert!(n < 64, "too many points to enumerate polygons");
        (0u64..1 << n)
            .filter(|m| m.count_ones() >= 3)
            .map(|m| GoodPolygon::new((0..n).filter(|&i| m >> i & 1 == 1).collect()))
            .filter(|p| self.is_good(p))
            .collect()
    }
}

/// Characteristic vector of a good polygon. For a point that is not a
/// vertex, the bit is 1 iff the angle at it between its two nearest polygon
/// vertices, measured on the side containing the centre, is below π; for a
/// vertex the rule is reversed.
pub fn charvec_of_polygon(frame: &RadialFrame, polygon: &GoodPolygon) -> Result<CharVector> {
    if !frame.is_good(polygon) {
        return Err(Error::NotGood(format!("{:?}", polygon.vertices)));
    }
    Ok(charvec_of_polygon_unchecked(frame, polygon))
}

fn charvec_of_polygon_unchecked(frame: &RadialFrame, polygon: &GoodPolygon) -> CharVector {
    let v = &polygon.vertices;
    let m = v.len();
    let n = frame.len();
    let mut bits = Vec::with_capacity(n);
    // number of vertices strictly before i
    let mut t = 0;
    for i in 0..n {
        while t < m && v[t] < i {
            t += 1;
        }
        let bit = if t < m && v[t] == i {
            !frame.center_in_cone(i, v[(t + m - 1) % m], v[(t + 1) % m])
        } else {
            frame.center_in_cone(i, v[(t + m - 1) % m], v[t % m])
        };
        bits.push(bit);
    }
    CharVector(bits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiOutcome {
    Injective { good_polygons: usize },
    Collision(GoodPolygon, GoodPolygon),
}

/// Enumerates every good polygon and reports any two sharing a
/// characteristic vector.
pub fn psi_injectivity_check(frame: &RadialFrame, cap: usize) -> Result<PsiOutcome> {
    if frame.len() > cap {
        return Err(Error::SizeCap {
            size: frame.len(),
            cap,
        });
    }
    let polygons = frame.good_polygons();
    let mut seen: BTreeMap<CharVector, GoodPolygon> = BTreeMap::new();
    for p in &polygons {
        let chi = charvec_of_polygon_unchecked(frame, p);
        if let Some(prev) = seen.insert(chi, p.clone()) {
            return Ok(PsiOutcome::Collision(prev, p.clone()));
        }
    }
    Ok(PsiOutcome::Injective {
        good_polygons: polygons.len(),
    })
}

/// The set of characteristic vectors realised by good polygons.
pub fn psi_image(frame: &RadialFrame) -> BTreeSet<CharVector> {
    frame
        .good_polygons()
        .iter()
        .map(|p| charvec_of_polygon_unchecked(frame, p))
        .collect()
}

/// Moves point `i` to `A + t (P_i - A)` and compares the images of Ψ.
pub fn ray_move_invariance_check(frame: &RadialFrame, i: usize, t: &Coord) -> Result<bool> {
    if i >= frame.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: frame.len(),
        });
    }
    if !t.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "ray parameter {t} must be positive"
        )));
    }
    let mut moved = frame.points.clone();
    moved[i] = frame.center.lerp(&frame.points[i], t);
    let other = build_radial_frame(frame.center.clone(), moved)?;
    // same rays, so the angular order is unchanged
    debug_assert!(other.order.iter().enumerate().all(|(k, &o)| k == o));
    Ok(psi_image(frame) == psi_image(&other))
}

// ---------------------------------------------------------------------------
// Projection along rays
// ---------------------------------------------------------------------------

/// Replaces every interior point `P` other than `pivot` by a point on the
/// ray from the pivot through `P`, just beyond the hull boundary, so that
/// the hull vertices and the moved points are in convex position.
///
/// A point whose ray leaves the hull through side `QR` at parameter
/// `lambda` along `QR` is pushed past the side by a fraction
/// `e * 4 lambda (1 - lambda)` of its distance from the pivot; `e` starts
/// at 1 and halves on every failed attempt. The bulge keeps several points
/// pushed past one side off a common line.
pub fn greenify(m: &PointSet, pivot: usize) -> Result<PointSet> {
    m.check_index(pivot)?;
    let a = m.point(pivot);
    let sides = m.hull_sides();
    // (index, exit parameter s0 along the ray, lambda along the side)
    let mut rays = Vec::new();
    for &p in m.interior() {
        if p == pivot {
            continue;
        }
        let (q, r) = *sides
            .iter()
            .find(|&&(q, r)| {
                q != pivot
                    && r != pivot
                    && m.orient_sign(pivot, q, p) > 0
                    && m.orient_sign(pivot, p, r) > 0
            })
            .ok_or_else(|| Error::Invariant(format!("no exit side for the ray through {p}")))?;
        let (pp, qq, rr) = (m.point(p), m.point(q), m.point(r));
        let d = (&pp.x - &a.x, &pp.y - &a.y);
        let side = (&rr.x - &qq.x, &rr.y - &qq.y);
        let qa = (&qq.x - &a.x, &qq.y - &a.y);
        let denom = cross_vec((&d.0, &d.1), (&side.0, &side.1));
        let s0 = cross_vec((&qa.0, &qa.1), (&side.0, &side.1)) / &denom;
        let lambda = cross_vec((&qa.0, &qa.1), (&d.0, &d.1)) / &denom;
        rays.push((p, s0, lambda));
    }
    if rays.is_empty() {
        return Ok(m.clone());
    }

    let four = Coord::from_integer(4.into());
    let mut e = Coord::one();
    for _ in 0..GREEN_RETRIES {
        let mut pts = m.points().to_vec();
        for (p, s0, lambda) in &rays {
            let bulge = &e * &four * lambda * (Coord::one() - lambda);
            let factor = s0 * (Coord::one() + bulge);
            pts[*p] = a.lerp(m.point(*p), &factor);
        }
        if let Ok(candidate) = PointSet::new(pts) {
            let expected = if m.is_hull_vertex(pivot) {
                m.len()
            } else {
                m.len() - 1
            };
            if candidate.hull().len() == expected {
                return Ok(candidate);
            }
        }
        e /= Coord::from_integer(2.into());
    }
    Err(Error::GreenPlacement(GREEN_RETRIES))
}
