//! Exact integer model of the unit triangular lattice.
//!
//! Convention, pinned here and relied on by every test: a point `(a, b)` is
//! `a*u + b*v` with basis `u = (1, 0)`, `v = (1/2, sqrt(3)/2)` (60 degrees
//! apart, unit length). Squared Euclidean distances then take the Loeschian
//! form `a^2 + a*b + b^2` on coordinate differences, so collinearity and
//! concyclicity are pure integer determinants.

use crate::geometry::{GeometryError, SqDistConfig};
use crate::rational::Rational;
use num_bigint::BigInt;

/// A triangular-lattice point in integer Eisenstein-style coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
}

impl LatticePoint {
    pub fn new(a: i64, b: i64) -> Self {
        LatticePoint { a, b }
    }

    /// Cartesian image under the pinned basis, for float oracles and plots.
    pub fn to_cartesian(self) -> (f64, f64) {
        let a = self.a as f64;
        let b = self.b as f64;
        (a + b / 2.0, b * 3f64.sqrt() / 2.0)
    }
}

/// Squared Euclidean distance between two lattice points, in units of the
/// lattice edge: `a^2 + a*b + b^2` on the coordinate difference.
pub fn sq_norm(p: LatticePoint, q: LatticePoint) -> u64 {
    let da = (q.a - p.a) as i128;
    let db = (q.b - p.b) as i128;
    let n = da * da + da * db + db * db;
    debug_assert!(n >= 0);
    n.try_into().expect("lattice coordinates too large")
}

/// Centered hexagonal region `{(a, b): |a| <= r, |b| <= r, |a + b| <= r}`
/// with `3r^2 + 3r + 1` member points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HexRegion {
    pub radius: u32,
}

impl HexRegion {
    pub fn new(radius: u32) -> Self {
        HexRegion { radius }
    }

    pub fn member_count(&self) -> usize {
        let r = self.radius as usize;
        3 * r * r + 3 * r + 1
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        let r = self.radius as i64;
        p.a.abs() <= r && p.b.abs() <= r && (p.a + p.b).abs() <= r
    }
}

/// All member points of a centered hexagon in lexicographic (a, b) order.
pub fn enumerate_region(region: HexRegion) -> Vec<LatticePoint> {
    hex_around(LatticePoint::new(0, 0), region.radius)
}

/// Translated hexagon of the given radius around an arbitrary center,
/// lexicographic order.
pub fn hex_around(center: LatticePoint, radius: u32) -> Vec<LatticePoint> {
    let r = radius as i64;
    let mut out = Vec::with_capacity(HexRegion::new(radius).member_count());
    for a in -r..=r {
        let lo = (-r).max(-r - a);
        let hi = r.min(r - a);
        for b in lo..=hi {
            out.push(LatticePoint::new(center.a + a, center.b + b));
        }
    }
    out
}

/// Smallest translated hexagon covering all given points: minimal radius,
/// then lexicographically least center.
pub fn bounding_hex(points: &[LatticePoint]) -> Option<(LatticePoint, u32)> {
    if points.is_empty() {
        return None;
    }
    let (mut amin, mut amax) = (i64::MAX, i64::MIN);
    let (mut bmin, mut bmax) = (i64::MAX, i64::MIN);
    let (mut smin, mut smax) = (i64::MAX, i64::MIN);
    for p in points {
        amin = amin.min(p.a);
        amax = amax.max(p.a);
        bmin = bmin.min(p.b);
        bmax = bmax.max(p.b);
        let s = p.a + p.b;
        smin = smin.min(s);
        smax = smax.max(s);
    }
    let span = (amax - amin).max(bmax - bmin).max(smax - smin);
    let mut r = (span + 1) / 2;
    loop {
        // A center (ca, cb) works iff each of a, b and a+b stays within
        // distance r of it.
        for ca in (amax - r)..=(amin + r) {
            let lo = (bmax - r).max(smax - r - ca);
            let hi = (bmin + r).min(smin + r - ca);
            if lo <= hi {
                return Some((LatticePoint::new(ca, lo), r as u32));
            }
        }
        r += 1;
    }
}

/// Whether three lattice points are collinear in the plane. The basis change
/// is linear, so the integer cross product decides it.
pub fn collinear(p: LatticePoint, q: LatticePoint, r: LatticePoint) -> bool {
    let ux = (q.a - p.a) as i128;
    let uy = (q.b - p.b) as i128;
    let vx = (r.a - p.a) as i128;
    let vy = (r.b - p.b) as i128;
    ux * vy - uy * vx == 0
}

/// Whether four lattice points lie on a common circle.
///
/// Degenerate quadruples (some three points collinear) return `false` by
/// convention; the search engine filters collinearity first.
///
/// Criterion: translate so the first point is the origin, then the standard
/// lifted determinant with Cartesian columns scaled to integers — rows
/// `(2a + b, b, a^2 + a*b + b^2)` for the three remaining points — vanishes
/// iff the four points are concyclic or collinear.
pub fn concyclic(p: LatticePoint, q: LatticePoint, r: LatticePoint, s: LatticePoint) -> bool {
    if collinear(p, q, r) || collinear(p, q, s) || collinear(p, r, s) || collinear(q, r, s) {
        return false;
    }
    let row = |t: LatticePoint| -> [i128; 3] {
        let da = (t.a - p.a) as i128;
        let db = (t.b - p.b) as i128;
        [2 * da + db, db, da * da + da * db + db * db]
    };
    let m = [row(q), row(r), row(s)];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    det == 0
}

/// Bridge to the exact predicates: the integer squared distances of the
/// points as a dimension-2 configuration.
pub fn to_exact_config(points: &[LatticePoint]) -> Result<SqDistConfig, GeometryError> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(GeometryError::CoincidentPoints { i, j });
            }
        }
    }
    SqDistConfig::from_fn(2, points.len(), |i, j| {
        Rational::from_integer(BigInt::from(sq_norm(points[i], points[j])))
    })
}

/// The 8-point planar crescent configuration on the triangular lattice,
/// as integer lattice coordinates. Multiplicities of its seven squared
/// distances are exactly 1 through 7.
pub fn figure1_lattice_points() -> Vec<LatticePoint> {
    vec![
        LatticePoint::new(1, 0),
        LatticePoint::new(-1, 2),
        LatticePoint::new(-2, 4),
        LatticePoint::new(0, 5),
        LatticePoint::new(3, 3),
        LatticePoint::new(3, 1),
        LatticePoint::new(2, 3),
        LatticePoint::new(1, 2),
    ]
}

/// Number of elements in the lattice point group (rotations by 60 degrees
/// plus reflections).
pub const POINT_GROUP_ORDER: usize = 12;

/// Image of a point under point-group element `e` (0..12): elements 0..6
/// are rotations by `e * 60` degrees, 6..12 are the reflection `(a, b) ->
/// (b, a)` followed by rotations.
pub fn point_group_apply(e: usize, p: LatticePoint) -> LatticePoint {
    debug_assert!(e < POINT_GROUP_ORDER);
    let mut q = if e >= 6 { LatticePoint::new(p.b, p.a) } else { p };
    for _ in 0..(e % 6) {
        q = LatticePoint::new(-q.b, q.a + q.b); // rotate 60 degrees
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{general_position, spectrum, verify_crescent};

    #[test]
    fn sq_norm_examples() {
        let o = LatticePoint::new(0, 0);
        assert_eq!(sq_norm(o, LatticePoint::new(1, 0)), 1);
        assert_eq!(sq_norm(o, LatticePoint::new(1, 1)), 3);
        assert_eq!(sq_norm(o, LatticePoint::new(2, -1)), 3);
        assert_eq!(sq_norm(o, o), 0);
    }

    #[test]
    fn sq_norm_matches_cartesian() {
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                let p = LatticePoint::new(a, b);
                let (x, y) = p.to_cartesian();
                let exact = sq_norm(LatticePoint::new(0, 0), p) as f64;
                assert!((x * x + y * y - exact).abs() < 1e-9, "({a},{b})");
            }
        }
    }

    #[test]
    fn region_sizes() {
        assert_eq!(enumerate_region(HexRegion::new(0)).len(), 1);
        assert_eq!(enumerate_region(HexRegion::new(1)).len(), 7);
        assert_eq!(enumerate_region(HexRegion::new(5)).len(), 91);
        for r in 0..=8u32 {
            let region = HexRegion::new(r);
            assert_eq!(enumerate_region(region).len(), region.member_count());
        }
    }

    #[test]
    fn region_is_lexicographic_and_within_bounds() {
        let pts = enumerate_region(HexRegion::new(3));
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        assert!(pts.iter().all(|&p| HexRegion::new(3).contains(p)));
        assert_eq!(pts.first(), Some(&LatticePoint::new(-3, 0)));
        assert_eq!(pts.last(), Some(&LatticePoint::new(3, 0)));
    }

    #[test]
    fn collinear_examples() {
        let p = |a, b| LatticePoint::new(a, b);
        assert!(collinear(p(0, 0), p(1, 0), p(2, 0)));
        assert!(!collinear(p(0, 0), p(1, 0), p(0, 1)));
        assert!(collinear(p(0, 0), p(1, 1), p(2, 2)));
    }

    #[test]
    fn concyclic_rhombus_is_not() {
        // Unit rhombus with 60/120 degree angles.
        let p = |a, b| LatticePoint::new(a, b);
        assert!(!concyclic(p(0, 0), p(1, 0), p(0, 1), p(1, 1)));
    }

    #[test]
    fn concyclic_ring_points() {
        // Any four of the six unit-distance neighbors of the origin lie on
        // the unit circle around it.
        let p = |a, b| LatticePoint::new(a, b);
        assert!(concyclic(p(1, 0), p(0, 1), p(-1, 1), p(-1, 0)));
        assert!(concyclic(p(1, 0), p(0, 1), p(-1, 0), p(1, -1)));
    }

    #[test]
    fn concyclic_degenerate_quadruple_is_false() {
        let p = |a, b| LatticePoint::new(a, b);
        assert!(!concyclic(p(0, 0), p(1, 0), p(2, 0), p(0, 1)));
    }

    #[test]
    fn exact_config_bridge() {
        let p = |a, b| LatticePoint::new(a, b);
        let c = to_exact_config(&[p(0, 0), p(1, 0)]).unwrap();
        assert_eq!(c.sq_dist(0, 1), &Rational::from_integer(1.into()));

        let tri = to_exact_config(&[p(0, 0), p(1, 0), p(0, 1)]).unwrap();
        assert!(general_position(&tri).is_ok());

        assert!(matches!(
            to_exact_config(&[p(0, 0), p(0, 0)]),
            Err(GeometryError::CoincidentPoints { i: 0, j: 1 })
        ));
    }

    #[test]
    fn concyclic_lattice_points_fail_general_position() {
        let p = |a, b| LatticePoint::new(a, b);
        let quad = [p(1, 0), p(0, 1), p(-1, 1), p(-1, 0)];
        let c = to_exact_config(&quad).unwrap();
        let v = general_position(&c).unwrap_err();
        assert_eq!(v.kind, crate::geometry::ViolationKind::Cosphericity);
        assert_eq!(v.witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn figure1_is_a_planar_crescent() {
        let pts = figure1_lattice_points();
        assert_eq!(pts.len(), 8);
        let c = to_exact_config(&pts).unwrap();
        assert!(verify_crescent(&c).is_ok());

        let s = spectrum(&c);
        let frozen: Vec<(u64, usize)> = vec![(1, 1), (3, 4), (4, 5), (7, 6), (13, 7), (19, 2), (21, 3)];
        let got: Vec<(u64, usize)> = s
            .entries()
            .iter()
            .map(|(v, c)| {
                assert!(v.denom() == &BigInt::from(1));
                (u64::try_from(v.numer().clone()).unwrap(), *c)
            })
            .collect();
        assert_eq!(got, frozen);
    }

    #[test]
    fn figure1_conversion_recipe() {
        // Caption coordinates have the form (p*sqrt(3)/2, q/2) with p = q
        // (mod 2); under the basis (0,1), (sqrt(3)/2, 1/2) the lattice
        // coordinates are ((q - p)/2, p).
        let half_units: [(i64, i64); 8] = [
            (0, 2),  // (0, 1)
            (2, 0),  // (sqrt(3), 0)
            (4, 0),  // (2*sqrt(3), 0)
            (5, 5),  // (5*sqrt(3)/2, 5/2)
            (3, 9),  // (3*sqrt(3)/2, 9/2)
            (1, 7),  // (sqrt(3)/2, 7/2)
            (3, 7),  // (3*sqrt(3)/2, 7/2)
            (2, 4),  // (sqrt(3), 2)
        ];
        let derived: Vec<LatticePoint> = half_units
            .iter()
            .map(|&(p, q)| {
                assert_eq!((p - q).rem_euclid(2), 0);
                LatticePoint::new((q - p) / 2, p)
            })
            .collect();
        assert_eq!(derived, figure1_lattice_points());
    }

    #[test]
    fn point_group_preserves_norm() {
        let region = enumerate_region(HexRegion::new(3));
        let shift = LatticePoint::new(7, -4);
        for &p in &region {
            for &q in &region {
                let n = sq_norm(p, q);
                assert_eq!(sq_norm(q, p), n);
                assert_eq!(
                    sq_norm(
                        LatticePoint::new(p.a + shift.a, p.b + shift.b),
                        LatticePoint::new(q.a + shift.a, q.b + shift.b)
                    ),
                    n
                );
                for e in 0..POINT_GROUP_ORDER {
                    assert_eq!(sq_norm(point_group_apply(e, p), point_group_apply(e, q)), n);
                }
            }
        }
    }

    #[test]
    fn point_group_is_a_group_of_order_12() {
        // The 12 images of a generic point are pairwise distinct.
        let p = LatticePoint::new(3, 1);
        let mut images: Vec<LatticePoint> =
            (0..POINT_GROUP_ORDER).map(|e| point_group_apply(e, p)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 12);
        // Rotation has order 6.
        let mut q = p;
        for _ in 0..6 {
            q = point_group_apply(1, q);
        }
        assert_eq!(q, p);
    }

    #[test]
    fn bounding_hex_of_figure1() {
        let (center, r) = bounding_hex(&figure1_lattice_points()).unwrap();
        assert_eq!(r, 3);
        assert_eq!(center, LatticePoint::new(0, 3));
        let hex = hex_around(center, r);
        assert!(figure1_lattice_points().iter().all(|p| hex.contains(p)));
        assert_eq!(hex.len(), 37);
    }

    #[test]
    fn bounding_hex_of_single_point() {
        let p = LatticePoint::new(4, -2);
        assert_eq!(bounding_hex(&[p]), Some((p, 0)));
    }
}
