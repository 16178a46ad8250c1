//! Deterministic point set constructors: convex polygons, double circles and
//! their quasi-convex interpolants, and seeded random sets in general
//! position. Every output is verified before it is returned.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::charvec::{build_angle_frame, build_radial_frame, AngleFrame, RadialFrame};
use crate::error::{Error, Result};
use crate::geom::{
    is_general_position, orient, to_integer_points, Coord, Orientation, Point, PointSet,
};
use crate::structure::{classify, is_close};

pub const MIN_SCALE: u64 = 8;
const CONVEX_RETRIES: usize = 40;
const INWARD_RETRIES: usize = 60;
const RANDOM_REJECTS_BEFORE_GROWTH: usize = 1000;

/// Every random choice goes through SplitMix64 seeded directly with the
/// spec's seed, so corpora can be regenerated from the seed alone.
pub use rand_xoshiro::SplitMix64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Convex,
    DoubleCircle,
    QuasiConvex,
    Random,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Convex,
        Family::DoubleCircle,
        Family::QuasiConvex,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Convex => "convex",
            Family::DoubleCircle => "double_circle",
            Family::QuasiConvex => "quasi_convex",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family `{s}`")))
    }
}

/// What to generate. `n` is the total point count, except for
/// `quasi_convex`, where it is the hull size and `sides` picks the hull
/// sides (by position in the output order) that get an interior point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub scale: u64,
    pub seed: u64,
    pub sides: Option<Vec<usize>>,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GenSpec {
            family,
            n,
            scale: 64,
            seed,
            sides: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::TooFewPoints {
                required: 3,
                got: self.n,
            });
        }
        if self.scale < MIN_SCALE {
            return Err(Error::InvalidParameter(format!(
                "scale {} is below {MIN_SCALE}",
                self.scale
            )));
        }
        if self.family == Family::DoubleCircle && (self.n % 2 == 1 || self.n < 6) {
            return Err(Error::InvalidParameter(format!(
                "double circle needs an even n >= 6, got {}",
                self.n
            )));
        }
        if self.sides.is_some() && self.family != Family::QuasiConvex {
            return Err(Error::InvalidParameter(
                "sides only apply to quasi_convex".into(),
            ));
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<PointSet> {
        self.validate()?;
        match self.family {
            Family::Convex => gen_convex(self.n, self.scale, self.seed),
            Family::DoubleCircle => gen_double_circle(self.n / 2, self.scale, self.seed),
            Family::QuasiConvex => gen_quasi_convex(
                self.n,
                self.sides.as_deref().unwrap_or(&[]),
                self.scale,
                self.seed,
            ),
            Family::Random => gen_random(self.n, self.scale * self.n as u64, self.seed),
        }
    }
}

/// `n` integer points in strictly convex position, listed counter-clockwise.
///
/// Point `k` sits near angle `2 pi (k + u_k / 2) / n` (plus a random
/// rotation) on a circle, rounded to the integer grid. Floating point only
/// proposes the points; convexity and general position are checked
/// exactly, and the radius doubles until the check passes.
pub fn gen_convex(n: usize, scale: u64, seed: u64) -> Result<PointSet> {
    if n < 3 {
        return Err(Error::TooFewPoints {
            required: 3,
            got: n,
        });
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let rotation = rng.gen::<f64>();
    let jitter: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() / 2.0).collect();
    let mut radius = (scale as f64) * (n * n) as f64 / 4.0;
    for _ in 0..CONVEX_RETRIES {
        let pts: Vec<Point> = (0..n)
            .map(|k| {
                let theta = std::f64::consts::TAU * (k as f64 + jitter[k] + rotation) / n as f64;
                Point::from_ints(
                    (radius * theta.cos()).round() as i64,
                    (radius * theta.sin()).round() as i64,
                )
            })
            .collect();
        if strictly_convex_ccw(&pts) {
            if let Ok(set) = PointSet::new(pts) {
                if set.is_convex_position() {
                    return Ok(set);
                }
            }
        }
        radius *= 2.0;
        if radius > 1e15 {
            break;
        }
    }
    Err(Error::Generator(format!(
        "no convex {n}-gon found (seed {seed})"
    )))
}

fn strictly_convex_ccw(pts: &[Point]) -> bool {
    let n = pts.len();
    (0..n).all(|k| {
        orient(&pts[k], &pts[(k + 1) % n], &pts[(k + 2) % n]) == Orientation::CounterClockwise
    })
}

/// Convex `m`-gon with one certified-close interior point per side.
pub fn gen_double_circle(m: usize, scale: u64, seed: u64) -> Result<PointSet> {
    let sides: Vec<usize> = (0..m).collect();
    gen_quasi_convex(m, &sides, scale, seed)
}

/// Convex `n_hull`-gon plus, for each listed side `k` (between hull points
/// `k` and `k + 1`), a point near its midpoint. The point starts a sixteenth
/// of the way from the midpoint to the centroid and moves halfway back
/// towards the midpoint until it is close to its side, the set is in
/// general position, and the whole set classifies as quasi-convex.
/// Coordinates are then scaled to integers.
pub fn gen_quasi_convex(n_hull: usize, sides: &[usize], scale: u64, seed: u64) -> Result<PointSet> {
    let mut sides = sides.to_vec();
    sides.sort_unstable();
    if let Some(w) = sides.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter(format!(
            "side {} listed twice",
            w[0]
        )));
    }
    if let Some(&k) = sides.iter().find(|&&k| k >= n_hull) {
        return Err(Error::InvalidParameter(format!(
            "side {k} out of range for a {n_hull}-gon"
        )));
    }
    let hull = gen_convex(n_hull, scale, seed)?.into_points();
    if sides.is_empty() {
        return PointSet::new(hull);
    }
    let n = Coord::from_integer(n_hull.into());
    let centroid = Point::new(
        hull.iter().fold(Coord::zero(), |s, p| s + &p.x) / &n,
        hull.iter().fold(Coord::zero(), |s, p| s + &p.y) / &n,
    );
    let half = BigRational::new(1.into(), 2.into());
    let mids: Vec<Point> = sides
        .iter()
        .map(|&k| hull[k].lerp(&hull[(k + 1) % n_hull], &half))
        .collect();

    let mut t = BigRational::new(1.into(), 16.into());
    for _ in 0..INWARD_RETRIES {
        let mut pts = hull.clone();
        pts.extend(mids.iter().map(|mid| mid.lerp(&centroid, &t)));
        if is_general_position(&pts).is_ok() {
            let set = PointSet::new(pts)?;
            if certified(&set, n_hull, &sides)? {
                return PointSet::new(to_integer_points(set.points()));
            }
        }
        t *= &half;
    }
    Err(Error::Generator(format!(
        "no certified close placement for sides {sides:?} (seed {seed})"
    )))
}

fn certified(set: &PointSet, n_hull: usize, sides: &[usize]) -> Result<bool> {
    if set.hull().len() != n_hull {
        return Ok(false);
    }
    for (j, &k) in sides.iter().enumerate() {
        if !is_close(set, n_hull + j, (k, (k + 1) % n_hull))?.close {
            return Ok(false);
        }
    }
    Ok(classify(set).is_quasi_convex)
}

/// `n` integer points uniform in `[0, side)^2`. A sample that coincides or is
/// collinear with earlier points is redrawn; after many rejections in a row
/// the box doubles.
pub fn gen_random(n: usize, side: u64, seed: u64) -> Result<PointSet> {
    if n < 3 {
        return Err(Error::TooFewPoints {
            required: 3,
            got: n,
        });
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut side = side.max(2);
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    let mut rejects = 0;
    while pts.len() < n {
        let q = Point::from_ints(rng.gen_range(0..side) as i64, rng.gen_range(0..side) as i64);
        if fits(&pts, &q) {
            pts.push(q);
            rejects = 0;
        } else {
            rejects += 1;
            if rejects == RANDOM_REJECTS_BEFORE_GROWTH {
                side = side
                    .checked_mul(2)
                    .ok_or_else(|| Error::Generator("random box overflow".into()))?;
                rejects = 0;
            }
        }
    }
    PointSet::new(pts)
}

fn fits(pts: &[Point], q: &Point) -> bool {
    for (i, a) in pts.iter().enumerate() {
        if a == q {
            return false;
        }
        if pts[i + 1..]
            .iter()
            .any(|b| orient(a, b, q) == Orientation::Collinear)
        {
            return false;
        }
    }
    true
}

/// An angle with apex at the origin and both arms in the upper half-plane,
/// with `n` random integer points inside it, some of them typically beyond
/// the chord between the arm points.
pub fn gen_angle_frame(n: usize, seed: u64) -> Result<AngleFrame> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let size = 16 * (n as i64 + 2);
    let coord =
        |rng: &mut SplitMix64, lo: i64, hi: i64| lo + rng.gen_range(0..(hi - lo) as u64) as i64;
    loop {
        let apex = Point::from_ints(0, 0);
        let left = Point::from_ints(
            coord(&mut rng, -size, -size / 4),
            coord(&mut rng, size / 4, size),
        );
        let right = Point::from_ints(
            coord(&mut rng, size / 4, size),
            coord(&mut rng, size / 4, size),
        );
        let mut pts: Vec<Point> = vec![apex.clone(), left.clone(), right.clone()];
        if is_general_position(&pts).is_err() {
            continue;
        }
        let mut tries = 0;
        while pts.len() < n + 3 && tries < 100_000 {
            tries += 1;
            let q = Point::from_ints(
                coord(&mut rng, -size, size + 1),
                coord(&mut rng, 1, 2 * size),
            );
            let inside = orient(&apex, &left, &q) == Orientation::Clockwise
                && orient(&apex, &q, &right) == Orientation::Clockwise;
            if inside && fits(&pts, &q) {
                pts.push(q);
            }
        }
        if pts.len() == n + 3 {
            return build_angle_frame(apex, left, right, pts.split_off(3));
        }
    }
}

/// A centre at the origin with `n` random integer points around it.
pub fn gen_radial_frame(n: usize, seed: u64) -> Result<RadialFrame> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let size = 8 * (n as u64 + 2);
    let mut pts = vec![Point::from_ints(0, 0)];
    while pts.len() < n + 1 {
        let q = Point::from_ints(
            rng.gen_range(0..2 * size + 1) as i64 - size as i64,
            rng.gen_range(0..2 * size + 1) as i64 - size as i64,
        );
        if fits(&pts, &q) {
            pts.push(q);
        }
    }
    let center = pts.remove(0);
    build_radial_frame(center, pts)
}

/// Is this an integer point set? Generators promise integer output.
pub fn is_integral(set: &PointSet) -> bool {
    set.points().iter().all(Point::is_integral)
}
