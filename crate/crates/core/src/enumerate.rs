//! Counting and enumeration of full and partial triangulations.
//!
//! A triangulation of a vertex subset `V` (hull ⊆ V ⊆ M) is counted by
//! recursive region splitting: the anchor edge of a region lies in exactly
//! one triangle, and each valid apex for it splits the region into at most
//! two smaller regions that are triangulated independently. Points of `M`
//! outside `V` are ignored; general position keeps them off every edge.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use serde::Serialize;

use crate::catalan::BigCount;
use crate::error::{Error, Result};
use crate::geom::{Coord, Location, PointSet};

pub const DEFAULT_ENUMERATE_CAP: usize = 14;
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 10;
const BRUTE_FORCE_HARD_MAX: usize = 16;

/// Optional wall-clock deadline for long counts.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn until(deadline: Instant) -> Self {
        Budget {
            deadline: Some(deadline),
        }
    }

    fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::BudgetExhausted),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triangulation {
    vertex_subset: Vec<usize>,
    triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    /// Builds a triangulation record in canonical form: each triangle is
    /// rotated to start at its smallest index (orientation kept) and the
    /// triangle list is sorted.
    pub fn new(vertex_subset: Vec<usize>, triangles: Vec<[usize; 3]>) -> Self {
        let mut vertex_subset = vertex_subset;
        vertex_subset.sort_unstable();
        vertex_subset.dedup();
        let mut triangles: Vec<[usize; 3]> = triangles
            .into_iter()
            .map(|t| {
                let r = (0..3).min_by_key(|&k| t[k]).unwrap_or(0);
                [t[r], t[(r + 1) % 3], t[(r + 2) % 3]]
            })
            .collect();
        triangles.sort_unstable();
        Triangulation {
            vertex_subset,
            triangles,
        }
    }

    pub fn vertex_subset(&self) -> &[usize] {
        &self.vertex_subset
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut edges = BTreeSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        edges
    }

    pub fn uses_vertex(&self, v: usize) -> bool {
        self.vertex_subset.binary_search(&v).is_ok()
    }

    /// Space-separated index triples joined by ` | `.
    pub fn to_line(&self) -> String {
        self.triangles
            .iter()
            .map(|t| format!("{} {} {}", t[0], t[1], t[2]))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

/// A simple counter-clockwise polygon together with the points that must be
/// used as vertices strictly inside it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    boundary: Vec<usize>,
    required_interior: Vec<usize>,
}

impl Region {
    /// Canonicalises: boundary rotated to start at its smallest index,
    /// interior sorted.
    pub fn new(mut boundary: Vec<usize>, mut required_interior: Vec<usize>) -> Self {
        if let Some(r) = (0..boundary.len()).min_by_key(|&k| boundary[k]) {
            boundary.rotate_left(r);
        }
        required_interior.sort_unstable();
        Region {
            boundary,
            required_interior,
        }
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn required_interior(&self) -> &[usize] {
        &self.required_interior
    }

    /// Position `k` of the anchor edge `boundary[k] -> boundary[k+1]`: the
    /// boundary edge with the lexicographically smallest index pair.
    fn anchor(&self) -> usize {
        let m = self.boundary.len();
        (0..m)
            .min_by_key(|&k| {
                let (a, b) = (self.boundary[k], self.boundary[(k + 1) % m]);
                (a.min(b), a.max(b))
            })
            .unwrap_or(0)
    }

    /// Every valid apex for the anchor edge with the sub-regions it leaves.
    pub fn splits(&self, pts: &PointSet) -> Vec<Split> {
        let m = self.boundary.len();
        let mut c = self.boundary.clone();
        c.rotate_left(self.anchor());
        let (u, v) = (c[0], c[1]);

        let all: Vec<usize> = c.iter().chain(&self.required_interior).copied().collect();
        let empty_triangle = |w: usize| {
            all.iter()
                .all(|&q| q == u || q == v || q == w || pts.locate(q, u, v, w) == Location::Outside)
        };
        let crosses_boundary = |a: usize, b: usize| {
            (0..m).any(|k| {
                let (p, q) = (c[k], c[(k + 1) % m]);
                pts.properly_cross(a, b, p, q)
            })
        };
        let valid_apex = |w: usize| {
            pts.orient_sign(u, v, w) > 0
                && empty_triangle(w)
                && !crosses_boundary(u, w)
                && !crosses_boundary(v, w)
        };

        let mut out = Vec::new();
        for j in 2..m {
            let w = c[j];
            if !valid_apex(w) {
                continue;
            }
            let first: Vec<usize> = c[1..=j].to_vec();
            let mut second: Vec<usize> = c[j..].to_vec();
            second.push(u);
            let (mut in_first, mut in_second) = (Vec::new(), Vec::new());
            for &p in &self.required_interior {
                if first.len() >= 3 && pts.in_polygon(p, &first) {
                    in_first.push(p);
                } else {
                    in_second.push(p);
                }
            }
            let mut regions = Vec::with_capacity(2);
            for (b, i) in [(first, in_first), (second, in_second)] {
                if b.len() >= 3 {
                    regions.push(Region::new(b, i));
                }
            }
            out.push(Split {
                apex: w,
                triangle: [u, v, w],
                regions,
            });
        }
        for &w in &self.required_interior {
            if !valid_apex(w) {
                continue;
            }
            let mut boundary: Vec<usize> = c[1..].to_vec();
            boundary.push(u);
            boundary.push(w);
            let interior = self
                .required_interior
                .iter()
                .copied()
                .filter(|&p| p != w)
                .collect();
            out.push(Split {
                apex: w,
                triangle: [u, v, w],
                regions: vec![Region::new(boundary, interior)],
            });
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Split {
    pub apex: usize,
    pub triangle: [usize; 3],
    pub regions: Vec<Region>,
}

fn validate_subset(pts: &PointSet, subset: &[usize]) -> Result<Vec<usize>> {
    for &i in subset {
        pts.check_index(i)?;
    }
    let set: BTreeSet<usize> = subset.iter().copied().collect();
    if let Some(&h) = pts.hull().iter().find(|h| !set.contains(h)) {
        return Err(Error::InvalidParameter(format!(
            "vertex subset is missing hull vertex {h}"
        )));
    }
    Ok(set.into_iter().collect())
}

fn root_region(pts: &PointSet, subset: &[usize]) -> Region {
    let interior = subset
        .iter()
        .copied()
        .filter(|&i| !pts.is_hull_vertex(i))
        .collect();
    Region::new(pts.hull().to_vec(), interior)
}

struct Counter<'a> {
    pts: &'a PointSet,
    memo: HashMap<Region, BigCount>,
    budget: Budget,
}

impl Counter<'_> {
    fn count(&mut self, region: &Region) -> Result<BigCount> {
        if let Some(c) = self.memo.get(region) {
            return Ok(c.clone());
        }
        self.budget.check()?;
        let mut total = BigCount::zero();
        for split in region.splits(self.pts) {
            let mut prod = BigCount::one();
            for r in &split.regions {
                prod = &prod * &self.count(r)?;
                if prod.is_zero() {
                    break;
                }
            }
            total += &prod;
        }
        self.memo.insert(region.clone(), total.clone());
        Ok(total)
    }
}

fn count_region(pts: &PointSet, region: &Region, budget: Budget) -> Result<BigCount> {
    Counter {
        pts,
        memo: HashMap::new(),
        budget,
    }
    .count(region)
}

/// Number of full triangulations of `pts` (every point used).
pub fn count_full(pts: &PointSet) -> BigCount {
    let all: Vec<usize> = (0..pts.len()).collect();
    count_region(pts, &root_region(pts, &all), Budget::unlimited())
        .expect("unlimited budget cannot be exhausted")
}

/// Number of triangulations of `conv(pts)` with vertex set exactly `subset`.
pub fn count_full_subset(pts: &PointSet, subset: &[usize]) -> Result<BigCount> {
    count_full_subset_within(pts, subset, Budget::unlimited())
}

pub fn count_full_subset_within(
    pts: &PointSet,
    subset: &[usize],
    budget: Budget,
) -> Result<BigCount> {
    let subset = validate_subset(pts, subset)?;
    count_region(pts, &root_region(pts, &subset), budget)
}

/// Interior subsets in reflected Gray-code order, each as hull ∪ subset.
pub fn vertex_subsets_gray(pts: &PointSet) -> impl Iterator<Item = Vec<usize>> + '_ {
    let interior = pts.interior();
    assert!(
        interior.len() < 64,
        "too many interior points to enumerate subsets"
    );
    (0u64..1u64 << interior.len()).map(move |k| {
        let g = k ^ (k >> 1);
        let mut v: Vec<usize> = pts.hull().to_vec();
        v.extend(
            interior
                .iter()
                .enumerate()
                .filter(|(b, _)| g >> b & 1 == 1)
                .map(|(_, &i)| i),
        );
        v.sort_unstable();
        v
    })
}

/// Number of partial triangulations: the sum of full counts over every
/// vertex subset between the hull and `pts`.
pub fn count_partial(pts: &PointSet) -> BigCount {
    count_partial_within(pts, Budget::unlimited()).expect("unlimited budget cannot be exhausted")
}

pub fn count_partial_within(pts: &PointSet, budget: Budget) -> Result<BigCount> {
    let mut total = BigCount::zero();
    for subset in vertex_subsets_gray(pts) {
        total += &count_region(pts, &root_region(pts, &subset), budget)?;
    }
    Ok(total)
}

fn enumerate_region(pts: &PointSet, region: &Region) -> Vec<Vec<[usize; 3]>> {
    let mut out = Vec::new();
    for split in region.splits(pts) {
        let mut partial: Vec<Vec<[usize; 3]>> = vec![vec![split.triangle]];
        for r in &split.regions {
            let sub = enumerate_region(pts, r);
            let mut next = Vec::with_capacity(partial.len() * sub.len());
            for p in &partial {
                for s in &sub {
                    let mut t = p.clone();
                    t.extend_from_slice(s);
                    next.push(t);
                }
            }
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        out.extend(partial);
    }
    out
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::SizeCap { size, cap })
    } else {
        Ok(())
    }
}

/// All full triangulations. Refuses instances with more than `cap` points.
pub fn enumerate_full(pts: &PointSet, cap: usize) -> Result<Vec<Triangulation>> {
    let all: Vec<usize> = (0..pts.len()).collect();
    enumerate_full_subset(pts, &all, cap)
}

pub fn enumerate_full_subset(
    pts: &PointSet,
    subset: &[usize],
    cap: usize,
) -> Result<Vec<Triangulation>> {
    check_cap(pts.len(), cap)?;
    let subset = validate_subset(pts, subset)?;
    Ok(enumerate_region(pts, &root_region(pts, &subset))
        .into_iter()
        .map(|t| Triangulation::new(subset.clone(), t))
        .collect())
}

/// All partial triangulations, grouped by vertex subset in Gray-code order.
pub fn enumerate_partial(pts: &PointSet, cap: usize) -> Result<Vec<Triangulation>> {
    check_cap(pts.len(), cap)?;
    let mut out = Vec::new();
    for subset in vertex_subsets_gray(pts) {
        out.extend(enumerate_full_subset(pts, &subset, cap)?);
    }
    Ok(out)
}

/// Counts maximal pairwise non-crossing edge sets on `subset` by
/// lexicographic backtracking. Independent of the region recursion; used as
/// an oracle.
pub fn brute_force_count(pts: &PointSet, subset: &[usize], cap: usize) -> Result<BigCount> {
    let subset = validate_subset(pts, subset)?;
    check_cap(subset.len(), cap.min(BRUTE_FORCE_HARD_MAX))?;

    let mut edges = Vec::new();
    for (a, &i) in subset.iter().enumerate() {
        for &j in &subset[a + 1..] {
            edges.push((i, j));
        }
    }
    let e = edges.len();
    let mut crosses = vec![0u128; e];
    for x in 0..e {
        for y in x + 1..e {
            let ((a, b), (c, d)) = (edges[x], edges[y]);
            if pts.properly_cross(a, b, c, d) {
                crosses[x] |= 1 << y;
                crosses[y] |= 1 << x;
            }
        }
    }
    let h = pts.hull().len();
    let i = subset.len() - h;
    let expected_edges = (3 * i + 2 * h - 3) as u32;

    struct Search<'a> {
        crosses: &'a [u128],
        expected_edges: u32,
        count: u64,
        bad: Option<u32>,
    }
    impl Search<'_> {
        fn rec(&mut self, k: usize, included: u128) {
            let e = self.crosses.len();
            if k == e {
                let maximal =
                    (0..e).all(|f| included >> f & 1 == 1 || self.crosses[f] & included != 0);
                if maximal {
                    if included.count_ones() != self.expected_edges {
                        self.bad = Some(included.count_ones());
                    }
                    self.count += 1;
                }
                return;
            }
            if self.crosses[k] & included != 0 {
                self.rec(k + 1, included);
                return;
            }
            self.rec(k + 1, included | 1 << k);
            // excluding edge k is only useful if a later edge can still cross it
            let mut later = self.crosses[k] >> (k + 1);
            let mut f = k + 1;
            while later != 0 {
                let step = later.trailing_zeros() as usize;
                f += step;
                if self.crosses[f] & included == 0 {
                    self.rec(k + 1, included);
                    return;
                }
                later >>= step + 1;
                f += 1;
            }
        }
    }
    let mut search = Search {
        crosses: &crosses,
        expected_edges,
        count: 0,
        bad: None,
    };
    search.rec(0, 0);
    if let Some(got) = search.bad {
        return Err(Error::Invariant(format!(
            "maximal non-crossing edge set with {got} edges, expected {expected_edges}"
        )));
    }
    Ok(BigCount::from(search.count))
}

/// Checks a triangulation without reference to how it was produced:
/// vertex coverage, Euler counts, pairwise interior-disjointness, no
/// enclosed vertex, and exact area coverage of the hull.
pub fn validate_triangulation(pts: &PointSet, t: &Triangulation) -> Result<()> {
    let fail = |msg: String| Err(Error::Invariant(msg));
    let subset = validate_subset(pts, t.vertex_subset())?;
    let h = pts.hull().len();
    let i = subset.len() - h;
    if t.triangles.len() != 2 * i + h - 2 {
        return fail(format!(
            "{} triangles, expected {}",
            t.triangles.len(),
            2 * i + h - 2
        ));
    }
    let edges = t.edges();
    if edges.len() != 3 * i + 2 * h - 3 {
        return fail(format!(
            "{} edges, expected {}",
            edges.len(),
            3 * i + 2 * h - 3
        ));
    }
    let used: BTreeSet<usize> = t.triangles.iter().flatten().copied().collect();
    if used.iter().copied().collect::<Vec<_>>() != subset {
        return fail("triangle vertices do not match the vertex subset".into());
    }
    for tri in &t.triangles {
        if pts.orient_sign(tri[0], tri[1], tri[2]) == 0 {
            return fail(format!("degenerate triangle {tri:?}"));
        }
        for &q in &subset {
            if !tri.contains(&q) && pts.locate(q, tri[0], tri[1], tri[2]) != Location::Outside {
                return fail(format!("vertex {q} lies in triangle {tri:?}"));
            }
        }
    }
    for (x, s) in t.triangles.iter().enumerate() {
        for r in &t.triangles[x + 1..] {
            let mut ss = *s;
            let mut rr = *r;
            ss.sort_unstable();
            rr.sort_unstable();
            if ss == rr {
                return fail(format!("duplicate triangle {s:?}"));
            }
            for a in 0..3 {
                for b in 0..3 {
                    if pts.properly_cross(s[a], s[(a + 1) % 3], r[b], r[(b + 1) % 3]) {
                        return fail(format!("triangles {s:?} and {r:?} overlap"));
                    }
                }
            }
        }
    }
    let area: Coord = t
        .triangles
        .iter()
        .map(|tri| {
            let a2 = crate::geom::cross(pts.point(tri[0]), pts.point(tri[1]), pts.point(tri[2]));
            num_traits::Signed::abs(&a2)
        })
        .sum();
    if area != pts.hull_area2() {
        return fail("triangle areas do not sum to the hull area".into());
    }
    Ok(())
}
