//! Geometric primitives and closed-set intersection predicates.
//!
//! Disc predicates compare with a relative tolerance of [`REL_TOL`];
//! rectangle, frame and segment predicates compare coordinates exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used by every predicate involving a disc.
pub const REL_TOL: f64 = 1e-9;

/// `a <= b` up to the relative tolerance.
pub(crate) fn le_tol(a: f64, b: f64) -> bool {
    a <= b + REL_TOL * a.abs().max(b.abs())
}

pub(crate) fn eq_tol(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_valid(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
}

impl Disc {
    pub fn new(cx: f64, cy: f64, radius: f64) -> Self {
        Disc { center: Point::new(cx, cy), radius }
    }

    pub fn is_valid(&self) -> bool {
        self.center.is_valid() && self.radius.is_finite() && self.radius > 0.0
    }

    /// Closed containment test.
    pub fn contains(&self, p: Point) -> bool {
        le_tol(self.center.dist(p), self.radius)
    }
}

/// Closed axis-parallel rectangle `[x_lo, x_hi] x [y_lo, y_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRect {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl AxisRect {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Self {
        AxisRect { x_lo, x_hi, y_lo, y_hi }
    }

    pub fn is_valid(&self) -> bool {
        [self.x_lo, self.x_hi, self.y_lo, self.y_hi].iter().all(|v| v.is_finite())
            && self.x_lo < self.x_hi
            && self.y_lo < self.y_hi
    }

    pub fn contains(&self, p: Point) -> bool {
        self.x_lo <= p.x && p.x <= self.x_hi && self.y_lo <= p.y && p.y <= self.y_hi
    }

    /// True when `p` lies in the open interior.
    pub fn contains_strictly(&self, p: Point) -> bool {
        self.x_lo < p.x && p.x < self.x_hi && self.y_lo < p.y && p.y < self.y_hi
    }

    pub fn intersects(&self, other: &AxisRect) -> bool {
        self.x_lo <= other.x_hi
            && other.x_lo <= self.x_hi
            && self.y_lo <= other.y_hi
            && other.y_lo <= self.y_hi
    }

    /// `self` lies in the open interior of `outer`.
    pub fn strictly_inside(&self, outer: &AxisRect) -> bool {
        outer.x_lo < self.x_lo
            && self.x_hi < outer.x_hi
            && outer.y_lo < self.y_lo
            && self.y_hi < outer.y_hi
    }

    /// Corners in the order bottom-left, bottom-right, top-left, top-right.
    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x_lo, self.y_lo),
            Point::new(self.x_hi, self.y_lo),
            Point::new(self.x_lo, self.y_hi),
            Point::new(self.x_hi, self.y_hi),
        ]
    }

    /// Bottom and top edges.
    pub fn horizontal_edges(&self) -> [Segment; 2] {
        [
            Segment::horizontal(self.y_lo, self.x_lo, self.x_hi),
            Segment::horizontal(self.y_hi, self.x_lo, self.x_hi),
        ]
    }

    /// Left and right edges.
    pub fn vertical_edges(&self) -> [Segment; 2] {
        [
            Segment::vertical(self.x_lo, self.y_lo, self.y_hi),
            Segment::vertical(self.x_hi, self.y_lo, self.y_hi),
        ]
    }

    /// Euclidean distance from `p` to the closed rectangle (0 inside).
    fn dist_to(&self, p: Point) -> f64 {
        let dx = (self.x_lo - p.x).max(0.0).max(p.x - self.x_hi);
        let dy = (self.y_lo - p.y).max(0.0).max(p.y - self.y_hi);
        dx.hypot(dy)
    }

    /// Euclidean distance from `p` to the boundary curve.
    fn dist_to_boundary(&self, p: Point) -> f64 {
        if self.contains(p) {
            (p.x - self.x_lo)
                .min(self.x_hi - p.x)
                .min(p.y - self.y_lo)
                .min(self.y_hi - p.y)
        } else {
            self.dist_to(p)
        }
    }
}

/// The boundary curve of an axis-parallel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame(pub AxisRect);

impl Frame {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Self {
        Frame(AxisRect::new(x_lo, x_hi, y_lo, y_hi))
    }

    pub fn rect(&self) -> &AxisRect {
        &self.0
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.contains(p) && !self.0.contains_strictly(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// An axis-parallel segment: `fixed` is the constant coordinate and
/// `[lo, hi]` the range of the varying one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub orientation: Orientation,
    pub fixed: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Segment {
    pub fn horizontal(y: f64, x_lo: f64, x_hi: f64) -> Self {
        Segment { orientation: Orientation::Horizontal, fixed: y, lo: x_lo, hi: x_hi }
    }

    pub fn vertical(x: f64, y_lo: f64, y_hi: f64) -> Self {
        Segment { orientation: Orientation::Vertical, fixed: x, lo: y_lo, hi: y_hi }
    }

    pub fn is_valid(&self) -> bool {
        self.fixed.is_finite() && self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi
    }

    /// Closed intersection test. Parallel segments intersect when collinear
    /// with overlapping ranges.
    pub fn intersects(&self, other: &Segment) -> bool {
        if self.orientation == other.orientation {
            self.fixed == other.fixed && self.lo <= other.hi && other.lo <= self.hi
        } else {
            self.lo <= other.fixed
                && other.fixed <= self.hi
                && other.lo <= self.fixed
                && self.fixed <= other.hi
        }
    }
}

/// A uniform family element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GeomObject {
    Point(Point),
    Disc(Disc),
    Rect(AxisRect),
    Frame(Frame),
}

impl GeomObject {
    pub fn is_valid(&self) -> bool {
        match self {
            GeomObject::Point(p) => p.is_valid(),
            GeomObject::Disc(d) => d.is_valid(),
            GeomObject::Rect(r) => r.is_valid(),
            GeomObject::Frame(f) => f.0.is_valid(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GeomObject::Point(_) => "point",
            GeomObject::Disc(_) => "disc",
            GeomObject::Rect(_) => "rect",
            GeomObject::Frame(_) => "frame",
        }
    }

    pub fn as_rect(&self) -> Option<&AxisRect> {
        match self {
            GeomObject::Rect(r) | GeomObject::Frame(Frame(r)) => Some(r),
            _ => None,
        }
    }
}

/// Closed-set intersection. Symmetric by construction.
pub fn intersects(a: &GeomObject, b: &GeomObject) -> bool {
    use GeomObject::*;
    match (a, b) {
        (Point(p), Point(q)) => p == q,
        (Point(p), Disc(d)) | (Disc(d), Point(p)) => d.contains(*p),
        (Point(p), Rect(r)) | (Rect(r), Point(p)) => r.contains(*p),
        (Point(p), Frame(f)) | (Frame(f), Point(p)) => f.contains(*p),
        (Disc(d), Disc(e)) => le_tol(d.center.dist(e.center), d.radius + e.radius),
        (Disc(d), Rect(r)) | (Rect(r), Disc(d)) => le_tol(r.dist_to(d.center), d.radius),
        (Disc(d), Frame(f)) | (Frame(f), Disc(d)) => {
            le_tol(f.0.dist_to_boundary(d.center), d.radius)
        }
        (Rect(r), Rect(s)) => r.intersects(s),
        // A connected set meets the boundary of Q iff it meets Q without
        // lying in Q's open interior.
        (Rect(r), Frame(f)) | (Frame(f), Rect(r)) => r.intersects(&f.0) && !r.strictly_inside(&f.0),
        (Frame(f), Frame(g)) => {
            f.0.intersects(&g.0) && !f.0.strictly_inside(&g.0) && !g.0.strictly_inside(&f.0)
        }
    }
}

/// How an intersecting rectangle pair `(a, b)` meets, with `a` in the
/// A-role and `b` in the B-role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntersectionType {
    /// `a` strictly inside `b`.
    Type1,
    /// `b` strictly inside `a`.
    Type2,
    /// A vertical edge of `b` crosses a horizontal edge of `a`.
    Type3,
    /// A vertical edge of `a` crosses a horizontal edge of `b`.
    Type4,
}

fn distinct4(v: [f64; 4]) -> bool {
    (0..4).all(|i| (i + 1..4).all(|j| v[i] != v[j]))
}

/// Classify an intersecting rectangle pair.
///
/// When both crossing patterns occur (the rectangles overlap at a corner,
/// one crossing each way) the pair is assigned Type3 if `a` starts left of
/// `b` and Type4 otherwise, so that swapping roles swaps Type3 and Type4.
pub fn classify_rect_pair(a: &AxisRect, b: &AxisRect) -> Result<Option<IntersectionType>> {
    if !distinct4([a.x_lo, a.x_hi, b.x_lo, b.x_hi]) || !distinct4([a.y_lo, a.y_hi, b.y_lo, b.y_hi])
    {
        return Err(Error::DegenerateInput(format!(
            "rectangles {a:?} and {b:?} share a supporting line"
        )));
    }
    if !a.intersects(b) {
        return Ok(None);
    }
    if a.strictly_inside(b) {
        return Ok(Some(IntersectionType::Type1));
    }
    if b.strictly_inside(a) {
        return Ok(Some(IntersectionType::Type2));
    }
    let b_vertical_on_a_horizontal = b
        .vertical_edges()
        .iter()
        .any(|v| a.horizontal_edges().iter().any(|h| v.intersects(h)));
    let a_vertical_on_b_horizontal = a
        .vertical_edges()
        .iter()
        .any(|v| b.horizontal_edges().iter().any(|h| v.intersects(h)));
    let kind = match (b_vertical_on_a_horizontal, a_vertical_on_b_horizontal) {
        (true, false) => IntersectionType::Type3,
        (false, true) => IntersectionType::Type4,
        (true, true) if a.x_lo < b.x_lo => IntersectionType::Type3,
        (true, true) => IntersectionType::Type4,
        (false, false) => unreachable!("intersecting non-nested rectangles must cross"),
    };
    Ok(Some(kind))
}

/// Number of points where the two boundary circles meet.
pub fn circle_boundary_crossings(a: &Disc, b: &Disc) -> Result<u8> {
    let d = a.center.dist(b.center);
    let sum = a.radius + b.radius;
    let diff = (a.radius - b.radius).abs();
    if eq_tol(a.center.x, b.center.x) && eq_tol(a.center.y, b.center.y) && eq_tol(a.radius, b.radius)
    {
        return Err(Error::DegenerateInput("identical discs".into()));
    }
    let tol = REL_TOL * sum;
    if (d - sum).abs() <= tol || (d - diff).abs() <= tol {
        Ok(1)
    } else if d > sum || d < diff {
        Ok(0)
    } else {
        Ok(2)
    }
}

/// True iff no two rectangle edges share a supporting line, i.e. all x
/// coordinates are pairwise distinct and all y coordinates are pairwise
/// distinct.
pub fn check_general_position<'a, I>(rects: I) -> bool
where
    I: IntoIterator<Item = &'a AxisRect>,
{
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in rects {
        xs.extend([r.x_lo, r.x_hi]);
        ys.extend([r.y_lo, r.y_hi]);
    }
    all_distinct(&mut xs) && all_distinct(&mut ys)
}

fn all_distinct(v: &mut [f64]) -> bool {
    v.sort_by(f64::total_cmp);
    v.windows(2).all(|w| w[0] != w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn disc(cx: f64, cy: f64, r: f64) -> GeomObject {
        GeomObject::Disc(Disc::new(cx, cy, r))
    }

    #[test]
    fn disc_disc_examples() {
        assert!(intersects(&disc(0.0, 0.0, 1.0), &disc(1.5, 0.0, 1.0)));
        assert!(!intersects(&disc(0.0, 0.0, 1.0), &disc(3.0, 0.0, 1.0)));
        // tangency counts
        assert!(intersects(&disc(0.0, 0.0, 1.0), &disc(2.0, 0.0, 1.0)));
    }

    #[test]
    fn nested_rects_versus_nested_frames() {
        let inner = AxisRect::new(1.0, 2.0, 1.0, 2.0);
        let outer = AxisRect::new(0.0, 3.0, 0.0, 3.0);
        assert!(intersects(&GeomObject::Rect(inner), &GeomObject::Rect(outer)));
        assert!(!intersects(&GeomObject::Frame(Frame(inner)), &GeomObject::Frame(Frame(outer))));
        // a rect inside a frame's hole misses it, a rect covering the frame hits it
        assert!(!intersects(&GeomObject::Rect(inner), &GeomObject::Frame(Frame(outer))));
        assert!(intersects(&GeomObject::Rect(outer), &GeomObject::Frame(Frame(inner))));
    }

    #[test]
    fn point_predicates_are_closed() {
        let p = GeomObject::Point(Point::new(1.0, 0.0));
        assert!(intersects(&p, &disc(0.0, 0.0, 1.0)));
        let r = AxisRect::new(0.0, 1.0, -1.0, 1.0);
        assert!(intersects(&p, &GeomObject::Rect(r)));
        assert!(intersects(&p, &GeomObject::Frame(Frame(r))));
        let q = GeomObject::Point(Point::new(0.5, 0.0));
        assert!(!intersects(&q, &GeomObject::Frame(Frame(r))));
    }

    #[test]
    fn disc_frame() {
        let f = GeomObject::Frame(Frame::new(0.0, 10.0, 0.0, 10.0));
        assert!(!intersects(&disc(5.0, 5.0, 1.0), &f));
        assert!(intersects(&disc(5.0, 5.0, 5.0), &f));
        assert!(intersects(&disc(-1.0, 5.0, 1.5), &f));
        assert!(!intersects(&disc(-3.0, 5.0, 1.5), &f));
    }

    #[test]
    fn classify_examples() {
        let r = |a, b, c, d| AxisRect::new(a, b, c, d);
        assert_eq!(
            classify_rect_pair(&r(1.0, 2.0, 1.0, 2.0), &r(0.0, 3.0, 0.0, 3.0)).unwrap(),
            Some(IntersectionType::Type1)
        );
        assert_eq!(
            classify_rect_pair(&r(0.0, 3.0, 1.0, 2.0), &r(1.0, 2.0, 0.0, 3.0)).unwrap(),
            Some(IntersectionType::Type3)
        );
        assert_eq!(
            classify_rect_pair(&r(1.0, 2.0, 0.0, 3.0), &r(0.0, 3.0, 1.0, 2.0)).unwrap(),
            Some(IntersectionType::Type4)
        );
        assert_eq!(classify_rect_pair(&r(0.0, 1.0, 0.0, 1.0), &r(5.0, 6.0, 5.0, 6.0)).unwrap(), None);
        assert!(matches!(
            classify_rect_pair(&r(0.0, 1.0, 0.0, 1.0), &r(1.0, 2.0, 0.5, 3.0)),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn corner_overlap_swaps_with_roles() {
        let a = AxisRect::new(0.0, 2.0, 0.0, 2.0);
        let b = AxisRect::new(1.0, 3.0, 1.0, 3.0);
        assert_eq!(classify_rect_pair(&a, &b).unwrap(), Some(IntersectionType::Type3));
        assert_eq!(classify_rect_pair(&b, &a).unwrap(), Some(IntersectionType::Type4));
    }

    #[test]
    fn crossing_counts() {
        let c = |a: Disc, b: Disc| circle_boundary_crossings(&a, &b).unwrap();
        assert_eq!(c(Disc::new(0.0, 0.0, 1.0), Disc::new(1.5, 0.0, 1.0)), 2);
        assert_eq!(c(Disc::new(0.0, 0.0, 1.0), Disc::new(2.0, 0.0, 1.0)), 1);
        assert_eq!(c(Disc::new(0.0, 0.0, 2.0), Disc::new(0.5, 0.0, 1.0)), 0);
        assert_eq!(c(Disc::new(0.0, 0.0, 2.0), Disc::new(1.0, 0.0, 1.0)), 1);
        assert_eq!(c(Disc::new(0.0, 0.0, 1.0), Disc::new(5.0, 0.0, 1.0)), 0);
        assert!(circle_boundary_crossings(&Disc::new(0.0, 0.0, 1.0), &Disc::new(0.0, 0.0, 1.0))
            .is_err());
    }

    #[test]
    fn general_position_examples() {
        let r = |a, b, c, d| AxisRect::new(a, b, c, d);
        assert!(check_general_position(&[r(0.0, 1.0, 0.0, 1.0), r(2.0, 3.0, 2.0, 3.0)]));
        assert!(!check_general_position(&[r(0.0, 1.0, 0.0, 1.0), r(1.0, 2.0, 5.0, 6.0)]));
        assert!(check_general_position(&[]));
    }

    fn arb_rect() -> impl Strategy<Value = AxisRect> {
        (0u32..1000, 1u32..300, 0u32..1000, 1u32..300).prop_map(|(x, w, y, h)| {
            AxisRect::new(x as f64, (x + w) as f64, y as f64, (y + h) as f64)
        })
    }

    fn arb_object() -> impl Strategy<Value = GeomObject> {
        prop_oneof![
            (0u32..100, 0u32..100).prop_map(|(x, y)| GeomObject::Point(Point::new(x as f64, y as f64))),
            (0u32..100, 0u32..100, 1u32..40)
                .prop_map(|(x, y, r)| GeomObject::Disc(Disc::new(x as f64, y as f64, r as f64))),
            (0u32..100, 1u32..40, 0u32..100, 1u32..40).prop_map(|(x, w, y, h)| GeomObject::Rect(
                AxisRect::new(x as f64, (x + w) as f64, y as f64, (y + h) as f64)
            )),
            (0u32..100, 1u32..40, 0u32..100, 1u32..40).prop_map(|(x, w, y, h)| GeomObject::Frame(
                Frame::new(x as f64, (x + w) as f64, y as f64, (y + h) as f64)
            )),
        ]
    }

    proptest! {
        #[test]
        fn intersects_is_symmetric(a in arb_object(), b in arb_object()) {
            prop_assert_eq!(intersects(&a, &b), intersects(&b, &a));
        }

        #[test]
        fn random_discs_cross_at_most_twice(
            x1 in -10.0f64..10.0, y1 in -10.0f64..10.0, r1 in 0.1f64..5.0,
            x2 in -10.0f64..10.0, y2 in -10.0f64..10.0, r2 in 0.1f64..5.0,
        ) {
            let c = circle_boundary_crossings(&Disc::new(x1, y1, r1), &Disc::new(x2, y2, r2)).unwrap();
            prop_assert!(c <= 2);
        }

        #[test]
        fn classification_is_a_partition(a in arb_rect(), b in arb_rect()) {
            prop_assume!(check_general_position(&[a, b]));
            let ab = classify_rect_pair(&a, &b).unwrap();
            let ba = classify_rect_pair(&b, &a).unwrap();
            prop_assert_eq!(ab.is_some(), a.intersects(&b));
            use IntersectionType::*;
            let mirrored = ab.map(|t| match t { Type1 => Type2, Type2 => Type1, Type3 => Type4, Type4 => Type3 });
            prop_assert_eq!(mirrored, ba);
        }
    }
}
