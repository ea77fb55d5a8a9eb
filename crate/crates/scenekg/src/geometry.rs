//! Planar geometry primitives used by the compilers: polylines with
//! arc-length parameterization, simple polygons with containment and
//! distance queries, and the rigid local-frame transform.
//!
//! All computations are f64; degrees only appear at the API edges where a
//! threshold is specified in degrees.

use serde::{Deserialize, Serialize};

/// Minimum spacing between consecutive polyline points.
pub const DEDUP_EPS: f64 = 1e-9;
/// Tolerance for on-boundary point tests.
pub const BOUNDARY_EPS: f64 = 1e-9;
/// Guard subtracted before flooring arc-length grids so lengths sitting on a
/// grid line stay stable under tiny floating-point perturbations.
const GRID_EPS: f64 = 1e-9;

pub const EARTH_RADIUS_M: f64 = 6_378_137.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeometryError {
    #[error("polyline needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("consecutive polyline points {0} and {1} coincide")]
    CoincidentPoints(usize, usize),
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("resample step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("rotation matrix is not orthonormal with determinant +1")]
    BadRotation,
    #[error("coordinate is not finite")]
    NotFinite,
}

/// Normalize an angle into (-pi, pi].
pub fn normalize_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = (a + std::f64::consts::PI).rem_euclid(two_pi) - std::f64::consts::PI;
    if r == -std::f64::consts::PI {
        r = std::f64::consts::PI;
    }
    r
}

/// Smallest absolute angular difference, in degrees within [0, 180].
pub fn heading_difference_deg(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs().to_degrees()
}

// ---------------------------------------------------------------------------
// Point
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dot(&self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(&self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn add(&self, other: Point) -> Point {
        Point::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(&self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(&self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }

    pub fn rotated(&self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

// Points serialize as [x, y] meter pairs.
impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.x, self.y).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (x, y) = <(f64, f64)>::deserialize(d)?;
        if !x.is_finite() || !y.is_finite() {
            return Err(serde::de::Error::custom("coordinate is not finite"));
        }
        Ok(Point::new(x, y))
    }
}

// ---------------------------------------------------------------------------
// Pose2D
// ---------------------------------------------------------------------------

/// Position plus facing direction; the unit of all geometric reasoning.
/// The yaw is always normalized into (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose2D {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

impl Pose2D {
    pub fn new(x: f64, y: f64, yaw: f64) -> Self {
        Self { x, y, yaw: normalize_angle(yaw) }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn transformed(&self, angle: f64, translation: Point) -> Pose2D {
        let p = self.position().rotated(angle).add(translation);
        Pose2D::new(p.x, p.y, self.yaw + angle)
    }
}

#[derive(Serialize, Deserialize)]
struct PoseRepr {
    x: f64,
    y: f64,
    yaw: f64,
}

impl Serialize for Pose2D {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PoseRepr { x: self.x, y: self.y, yaw: self.yaw }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pose2D {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PoseRepr::deserialize(d)?;
        if !r.x.is_finite() || !r.y.is_finite() || !r.yaw.is_finite() {
            return Err(serde::de::Error::custom("pose coordinate is not finite"));
        }
        Ok(Pose2D::new(r.x, r.y, r.yaw))
    }
}

// ---------------------------------------------------------------------------
// Axis-aligned bounding box
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn empty() -> Self {
        Self {
            min: Point::new(f64::INFINITY, f64::INFINITY),
            max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.min.x > self.max.x
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Point>) -> Self {
        let mut b = Self::empty();
        for p in points {
            b.include(*p);
        }
        b
    }

    pub fn include(&mut self, p: Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn merge(&mut self, other: &Aabb) {
        if !other.is_empty() {
            self.include(other.min);
            self.include(other.max);
        }
    }

    pub fn expanded(&self, margin: f64) -> Aabb {
        Aabb {
            min: Point::new(self.min.x - margin, self.min.y - margin),
            max: Point::new(self.max.x + margin, self.max.y + margin),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Lower bound on the distance between geometry inside the two boxes.
    pub fn distance(&self, other: &Aabb) -> f64 {
        let dx = (other.min.x - self.max.x).max(self.min.x - other.max.x).max(0.0);
        let dy = (other.min.y - self.max.y).max(self.min.y - other.max.y).max(0.0);
        dx.hypot(dy)
    }
}

// ---------------------------------------------------------------------------
// Segment helpers
// ---------------------------------------------------------------------------

fn orient(a: Point, b: Point, c: Point) -> f64 {
    b.sub(a).cross(c.sub(a))
}

fn on_segment_collinear(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Distance from `p` to segment a-b plus the clamped parameter and foot point.
pub fn point_segment_projection(p: Point, a: Point, b: Point) -> (f64, f64, Point) {
    let ab = b.sub(a);
    let len2 = ab.dot(ab);
    let t = if len2 <= 0.0 { 0.0 } else { (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0) };
    let foot = a.add(ab.scale(t));
    (p.dist(foot), t, foot)
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    point_segment_projection(p, a, b).0
}

/// Inclusive intersection test: touching endpoints and collinear overlap count.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment_collinear(c, d, a))
        || (d2 == 0.0 && on_segment_collinear(c, d, b))
        || (d3 == 0.0 && on_segment_collinear(a, b, c))
        || (d4 == 0.0 && on_segment_collinear(a, b, d))
}

/// Strict crossing at a point interior to both segments.
pub fn segments_properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

pub fn segment_segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

// ---------------------------------------------------------------------------
// Polyline
// ---------------------------------------------------------------------------

/// Ordered point chain with cached cumulative arc lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
    cum: Vec<f64>,
}

/// Result of projecting a point onto a polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub foot: Point,
    pub distance: f64,
    pub arc_s: f64,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::TooFewPoints(points.len()));
        }
        for p in &points {
            if !p.is_finite() {
                return Err(GeometryError::NotFinite);
            }
        }
        let mut cum = Vec::with_capacity(points.len());
        cum.push(0.0);
        for i in 1..points.len() {
            let d = points[i - 1].dist(points[i]);
            if d <= DEDUP_EPS {
                return Err(GeometryError::CoincidentPoints(i - 1, i));
            }
            cum.push(cum[i - 1] + d);
        }
        Ok(Self { points, cum })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn first(&self) -> Point {
        self.points[0]
    }

    pub fn last(&self) -> Point {
        *self.points.last().unwrap()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::from_points(&self.points)
    }

    fn segment_index_at(&self, s: f64) -> usize {
        let n_seg = self.points.len() - 1;
        let idx = self.cum.partition_point(|&c| c <= s);
        idx.saturating_sub(1).min(n_seg - 1)
    }

    /// Point at arc length `s`, clamped to [0, length].
    pub fn point_at(&self, s: f64) -> Point {
        let s = s.clamp(0.0, self.length());
        let i = self.segment_index_at(s);
        let seg_len = self.cum[i + 1] - self.cum[i];
        let t = if seg_len > 0.0 { (s - self.cum[i]) / seg_len } else { 0.0 };
        self.points[i].add(self.points[i + 1].sub(self.points[i]).scale(t))
    }

    /// Tangent direction of the segment containing arc length `s`.
    pub fn direction_at(&self, s: f64) -> f64 {
        let i = self.segment_index_at(s.clamp(0.0, self.length()));
        let d = self.points[i + 1].sub(self.points[i]);
        d.y.atan2(d.x)
    }

    pub fn pose_at(&self, s: f64) -> Pose2D {
        let p = self.point_at(s);
        Pose2D::new(p.x, p.y, self.direction_at(s))
    }

    /// Poses at arc lengths 0, step, 2*step, ... plus the final endpoint when
    /// the grid does not land on it. Consecutive poses are exactly `step`
    /// apart except the terminal pair, which is at most `step` apart.
    pub fn resample(&self, step: f64) -> Result<Vec<Pose2D>, GeometryError> {
        if step <= 0.0 {
            return Err(GeometryError::NonPositiveStep(step));
        }
        let len = self.length();
        let n = ((len - GRID_EPS) / step).floor().max(0.0) as usize;
        let mut poses = Vec::with_capacity(n + 2);
        for k in 0..=n {
            poses.push(self.pose_at(k as f64 * step));
        }
        poses.push(self.pose_at(len));
        Ok(poses)
    }

    /// Closest point on the polyline; ties break toward smaller arc length.
    pub fn project(&self, p: Point) -> Projection {
        let mut best = Projection {
            foot: self.points[0],
            distance: f64::INFINITY,
            arc_s: 0.0,
        };
        for i in 0..self.points.len() - 1 {
            let (d, t, foot) = point_segment_projection(p, self.points[i], self.points[i + 1]);
            if d < best.distance {
                best = Projection {
                    foot,
                    distance: d,
                    arc_s: self.cum[i] + t * (self.cum[i + 1] - self.cum[i]),
                };
            }
        }
        best
    }

    /// Length-weighted circular mean of the segment directions.
    pub fn mean_heading(&self) -> f64 {
        let mut sx = 0.0;
        let mut sy = 0.0;
        for i in 0..self.points.len() - 1 {
            let d = self.points[i + 1].sub(self.points[i]);
            sx += d.x;
            sy += d.y;
        }
        sy.atan2(sx)
    }

    pub fn min_distance_to_polyline(&self, other: &Polyline) -> f64 {
        let mut best = f64::INFINITY;
        for (a, b) in self.segments() {
            for (c, d) in other.segments() {
                best = best.min(segment_segment_distance(a, b, c, d));
                if best == 0.0 {
                    return 0.0;
                }
            }
        }
        best
    }

    /// Distance to a polygon: 0 when the line touches or enters it.
    pub fn min_distance_to_polygon(&self, poly: &Polygon) -> f64 {
        if self.points.iter().any(|p| poly.contains(*p)) {
            return 0.0;
        }
        let ring = poly.ring();
        let n = ring.len();
        let mut best = f64::INFINITY;
        for (a, b) in self.segments() {
            for i in 0..n {
                let (c, d) = (ring[i], ring[(i + 1) % n]);
                best = best.min(segment_segment_distance(a, b, c, d));
                if best == 0.0 {
                    return 0.0;
                }
            }
        }
        best
    }

    pub fn reversed(&self) -> Polyline {
        let mut pts = self.points.clone();
        pts.reverse();
        Polyline::new(pts).expect("reversal preserves validity")
    }

    pub fn transformed(&self, angle: f64, translation: Point) -> Polyline {
        let pts = self.points.iter().map(|p| p.rotated(angle).add(translation)).collect();
        Polyline::new(pts).expect("rigid transform preserves validity")
    }
}

impl TryFrom<Vec<Point>> for Polyline {
    type Error = GeometryError;
    fn try_from(v: Vec<Point>) -> Result<Self, Self::Error> {
        Polyline::new(v)
    }
}

impl From<Polyline> for Vec<Point> {
    fn from(l: Polyline) -> Self {
        l.points
    }
}

impl Serialize for Polyline {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.points.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polyline {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pts = Vec::<Point>::deserialize(d)?;
        Polyline::new(pts).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Polygon
// ---------------------------------------------------------------------------

/// Simple polygon stored as an open ring (the closing edge is implicit).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    ring: Vec<Point>,
}

impl Polygon {
    pub fn new(mut ring: Vec<Point>) -> Result<Self, GeometryError> {
        if ring.len() >= 2 && ring.first().unwrap().dist(*ring.last().unwrap()) <= DEDUP_EPS {
            ring.pop();
        }
        if ring.len() < 3 {
            return Err(GeometryError::TooFewVertices(ring.len()));
        }
        for p in &ring {
            if !p.is_finite() {
                return Err(GeometryError::NotFinite);
            }
        }
        let poly = Self { ring };
        if poly.signed_area().abs() <= 1e-12 {
            return Err(GeometryError::ZeroArea);
        }
        Ok(poly)
    }

    pub fn ring(&self) -> &[Point] {
        &self.ring
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.ring.len();
        (0..n).map(move |i| (self.ring[i], self.ring[(i + 1) % n]))
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::from_points(&self.ring)
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.ring.len();
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.ring[i];
            let b = self.ring[(i + 1) % n];
            acc += a.cross(b);
        }
        acc / 2.0
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn centroid(&self) -> Point {
        let n = self.ring.len();
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.ring[i];
            let b = self.ring[(i + 1) % n];
            let w = a.cross(b);
            cx += (a.x + b.x) * w;
            cy += (a.y + b.y) * w;
            acc += w;
        }
        Point::new(cx / (3.0 * acc), cy / (3.0 * acc))
    }

    /// No two non-adjacent edges touch.
    pub fn is_simple(&self) -> bool {
        let n = self.ring.len();
        for i in 0..n {
            for j in i + 1..n {
                // adjacent edges share a vertex by construction
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (a, b) = (self.ring[i], self.ring[(i + 1) % n]);
                let (c, d) = (self.ring[j], self.ring[(j + 1) % n]);
                if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    pub fn on_boundary(&self, p: Point, eps: f64) -> bool {
        self.edges().any(|(a, b)| point_segment_distance(p, a, b) <= eps)
    }

    /// Containment test; points on the boundary count as inside.
    pub fn contains(&self, p: Point) -> bool {
        if self.on_boundary(p, BOUNDARY_EPS) {
            return true;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let t = (p.y - a.y) / (b.y - a.y);
                let x = a.x + t * (b.x - a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn strictly_contains(&self, p: Point) -> bool {
        !self.on_boundary(p, BOUNDARY_EPS) && self.contains(p)
    }

    fn boundary_intersects(&self, other: &Polygon) -> bool {
        self.edges().any(|(a, b)| other.edges().any(|(c, d)| segments_intersect(a, b, c, d)))
    }

    /// Distance from a point to the polygon; 0 when inside or on it.
    pub fn distance_to_point(&self, p: Point) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum distance between the two polygons; 0 when they touch,
    /// intersect or one contains the other.
    pub fn distance(&self, other: &Polygon) -> f64 {
        if self.boundary_intersects(other)
            || other.contains(self.ring[0])
            || self.contains(other.ring[0])
        {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for (a, b) in self.edges() {
            for (c, d) in other.edges() {
                best = best.min(segment_segment_distance(a, b, c, d));
            }
        }
        best
    }

    /// True when the interiors intersect; sharing only boundary is not overlap.
    pub fn overlaps(&self, other: &Polygon) -> bool {
        for (a, b) in self.edges() {
            for (c, d) in other.edges() {
                if segments_properly_cross(a, b, c, d) {
                    return true;
                }
            }
        }
        self.probe_points().into_iter().any(|p| other.strictly_contains(p))
            || other.probe_points().into_iter().any(|p| self.strictly_contains(p))
    }

    fn probe_points(&self) -> Vec<Point> {
        let mut pts = self.ring.clone();
        pts.extend(self.edges().map(|(a, b)| a.add(b).scale(0.5)));
        pts.push(self.centroid());
        pts
    }

    pub fn transformed(&self, angle: f64, translation: Point) -> Polygon {
        let ring = self.ring.iter().map(|p| p.rotated(angle).add(translation)).collect();
        Polygon::new(ring).expect("rigid transform preserves validity")
    }
}

impl TryFrom<Vec<Point>> for Polygon {
    type Error = GeometryError;
    fn try_from(v: Vec<Point>) -> Result<Self, Self::Error> {
        Polygon::new(v)
    }
}

impl From<Polygon> for Vec<Point> {
    fn from(p: Polygon) -> Self {
        p.ring
    }
}

impl Serialize for Polygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.ring.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pts = Vec::<Point>::deserialize(d)?;
        Polygon::new(pts).map_err(serde::de::Error::custom)
    }
}

/// Convex hull (counterclockwise, no collinear points) via monotone chain.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts.dedup_by(|a, b| a.dist(*b) <= DEDUP_EPS);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

// ---------------------------------------------------------------------------
// Rigid frame: the target-centric local coordinate system
// ---------------------------------------------------------------------------

/// Origin plus rotation; maps global coordinates into a frame whose +x axis
/// points along the frame yaw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidFrame {
    pub origin: Point,
    pub yaw: f64,
    cos: f64,
    sin: f64,
}

impl RigidFrame {
    pub fn new(origin: Point, yaw: f64) -> Self {
        let yaw = normalize_angle(yaw);
        let (sin, cos) = yaw.sin_cos();
        Self { origin, yaw, cos, sin }
    }

    /// Build from an explicit rotation matrix [[r00, r01], [r10, r11]];
    /// rejected unless orthonormal with determinant +1 (to 1e-12).
    pub fn from_matrix(origin: Point, m: [[f64; 2]; 2]) -> Result<Self, GeometryError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let c0 = m[0][0] * m[0][0] + m[1][0] * m[1][0];
        let c1 = m[0][1] * m[0][1] + m[1][1] * m[1][1];
        let ortho = m[0][0] * m[0][1] + m[1][0] * m[1][1];
        if (det - 1.0).abs() > 1e-12
            || (c0 - 1.0).abs() > 1e-12
            || (c1 - 1.0).abs() > 1e-12
            || ortho.abs() > 1e-12
        {
            return Err(GeometryError::BadRotation);
        }
        Ok(Self::new(origin, m[1][0].atan2(m[0][0])))
    }

    /// p_local = R^-1 (p_global - origin)
    pub fn to_local(&self, p: Point) -> Point {
        let d = p.sub(self.origin);
        Point::new(self.cos * d.x + self.sin * d.y, -self.sin * d.x + self.cos * d.y)
    }

    pub fn to_global(&self, p: Point) -> Point {
        Point::new(
            self.cos * p.x - self.sin * p.y + self.origin.x,
            self.sin * p.x + self.cos * p.y + self.origin.y,
        )
    }

    /// yaw_local = normalize(yaw_global - frame yaw)
    pub fn yaw_to_local(&self, yaw: f64) -> f64 {
        normalize_angle(yaw - self.yaw)
    }

    pub fn yaw_to_global(&self, yaw: f64) -> f64 {
        normalize_angle(yaw + self.yaw)
    }
}

// ---------------------------------------------------------------------------
// Local tangent-plane GPS conversion
// ---------------------------------------------------------------------------

/// Equirectangular conversion from local east/north meters to (lat, lon)
/// degrees around the given origin.
pub fn enu_to_wgs84(p: Point, origin: (f64, f64)) -> (f64, f64) {
    let (lat0, lon0) = origin;
    let lat = lat0 + (p.y / EARTH_RADIUS_M).to_degrees();
    let lon = lon0 + (p.x / (EARTH_RADIUS_M * lat0.to_radians().cos())).to_degrees();
    (lat, lon)
}

pub fn wgs84_to_enu(latlon: (f64, f64), origin: (f64, f64)) -> Point {
    let (lat0, lon0) = origin;
    let x = (latlon.1 - lon0).to_radians() * EARTH_RADIUS_M * lat0.to_radians().cos();
    let y = (latlon.0 - lat0).to_radians() * EARTH_RADIUS_M;
    Point::new(x, y)
}

// ---------------------------------------------------------------------------
// WKT formatting and parsing (the subset the exporter emits)
// ---------------------------------------------------------------------------

pub mod wkt {
    use super::{Point, Polygon, Polyline};

    fn fmt_coord(p: Point) -> String {
        format!("{:?} {:?}", p.x, p.y)
    }

    pub fn point(p: Point) -> String {
        format!("POINT ({})", fmt_coord(p))
    }

    pub fn linestring(points: &[Point]) -> String {
        let coords: Vec<String> = points.iter().map(|p| fmt_coord(*p)).collect();
        format!("LINESTRING ({})", coords.join(", "))
    }

    pub fn polygon(poly: &Polygon) -> String {
        let mut coords: Vec<String> = poly.ring().iter().map(|p| fmt_coord(*p)).collect();
        coords.push(fmt_coord(poly.ring()[0]));
        format!("POLYGON (({}))", coords.join(", "))
    }

    #[derive(Debug, Clone, PartialEq)]
    pub enum Wkt {
        Point(Point),
        LineString(Vec<Point>),
        Polygon(Polygon),
    }

    #[derive(Debug, thiserror::Error, PartialEq)]
    #[error("malformed WKT: {0}")]
    pub struct WktError(pub String);

    fn parse_coords(body: &str) -> Result<Vec<Point>, WktError> {
        body.split(',')
            .map(|pair| {
                let mut it = pair.split_whitespace();
                let x = it
                    .next()
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| WktError(format!("bad coordinate pair '{pair}'")))?;
                let y = it
                    .next()
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| WktError(format!("bad coordinate pair '{pair}'")))?;
                Ok(Point::new(x, y))
            })
            .collect()
    }

    pub fn parse(text: &str) -> Result<Wkt, WktError> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("POINT") {
            let body = rest.trim().trim_start_matches('(').trim_end_matches(')');
            let pts = parse_coords(body)?;
            if pts.len() != 1 {
                return Err(WktError("POINT needs exactly one coordinate".into()));
            }
            return Ok(Wkt::Point(pts[0]));
        }
        if let Some(rest) = t.strip_prefix("LINESTRING") {
            let body = rest.trim().trim_start_matches('(').trim_end_matches(')');
            return Ok(Wkt::LineString(parse_coords(body)?));
        }
        if let Some(rest) = t.strip_prefix("POLYGON") {
            let body = rest
                .trim()
                .trim_start_matches('(')
                .trim_start_matches('(')
                .trim_end_matches(')')
                .trim_end_matches(')');
            let pts = parse_coords(body)?;
            return Polygon::new(pts).map(Wkt::Polygon).map_err(|e| WktError(e.to_string()));
        }
        Err(WktError(format!("unsupported geometry '{t}'")))
    }

    pub fn parse_polygon(text: &str) -> Result<Polygon, WktError> {
        match parse(text)? {
            Wkt::Polygon(p) => Ok(p),
            other => Err(WktError(format!("expected POLYGON, got {other:?}"))),
        }
    }

    pub fn parse_linestring(text: &str) -> Result<Polyline, WktError> {
        match parse(text)? {
            Wkt::LineString(pts) => Polyline::new(pts).map_err(|e| WktError(e.to_string())),
            other => Err(WktError(format!("expected LINESTRING, got {other:?}"))),
        }
    }
}
