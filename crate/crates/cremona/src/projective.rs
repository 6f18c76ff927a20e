//! Points, lines and projectivities of the rational projective plane.
//!
//! # Representation
//!
//! Points and lines both carry three rational homogeneous coordinates stored
//! in canonical form: the first nonzero coordinate is 1. Equality, ordering
//! and hashing therefore agree with projective equality. A line with
//! coordinates `[a, b, c]` is the zero set of `a*x + b*y + c*z`.
//!
//! Incidence is the pairing `P . L = 0`; `meet` and `join` are cross
//! products. All arithmetic is exact.

use crate::rational::{primitive_integer_vector, Int, Rational};
use crate::{EngineError, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A point of the rational projective plane, in canonical coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: [Rational; 3],
}

/// A line of the rational projective plane, in canonical coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjLine {
    coords: [Rational; 3],
}

// Points and lines serialize as their primitive integer coordinate triple,
// rendered as decimal strings so arbitrarily large entries survive JSON.
fn serialize_triple<S: serde::Serializer>(v: &[Int; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

fn deserialize_triple<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<[Rational; 3], D::Error> {
    use serde::de::Error;
    let raw: Vec<String> = Vec::deserialize(d)?;
    if raw.len() != 3 {
        return Err(D::Error::custom("expected three homogeneous coordinates"));
    }
    let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (slot, s) in out.iter_mut().zip(raw.iter()) {
        *slot = crate::rational::parse_rational(s).map_err(D::Error::custom)?;
    }
    Ok(out)
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_triple(&self.primitive(), s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        ProjPoint::new(deserialize_triple(d)?).map_err(D::Error::custom)
    }
}

impl Serialize for ProjLine {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_triple(&self.primitive(), s)
    }
}

impl<'de> Deserialize<'de> for ProjLine {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        ProjLine::new(deserialize_triple(d)?).map_err(D::Error::custom)
    }
}

fn canonicalize(mut c: [Rational; 3]) -> Result<[Rational; 3]> {
    let Some(pos) = c.iter().position(|x| !x.is_zero()) else {
        return Err(EngineError::Invalid(
            "all three homogeneous coordinates are zero".into(),
        ));
    };
    let lead = c[pos].clone();
    for x in &mut c {
        *x /= &lead;
    }
    Ok(c)
}

fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

impl ProjPoint {
    /// Builds a point from homogeneous coordinates; fails on the zero triple.
    pub fn new(coords: [Rational; 3]) -> Result<Self> {
        Ok(Self { coords: canonicalize(coords)? })
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new([
            Rational::from_integer(a.into()),
            Rational::from_integer(b.into()),
            Rational::from_integer(c.into()),
        ])
    }

    /// Canonical coordinates (first nonzero entry is 1).
    pub fn coords(&self) -> &[Rational; 3] {
        &self.coords
    }

    /// Primitive integer representative with positive leading entry.
    pub fn primitive(&self) -> [Int; 3] {
        let v = primitive_integer_vector(&self.coords).expect("canonical point is nonzero");
        [v[0].clone(), v[1].clone(), v[2].clone()]
    }

    /// Incidence pairing with a line.
    pub fn on_line(&self, l: &ProjLine) -> bool {
        self.pair(l).is_zero()
    }

    /// The point with coordinates `self + t * other`; well defined whenever
    /// the two points are distinct. Distinct parameters give distinct points,
    /// so this parametrizes the line through the pair minus `other` itself.
    pub fn combination(&self, other: &ProjPoint, t: &Rational) -> ProjPoint {
        let c = [
            self.coords[0].clone() + t * &other.coords[0],
            self.coords[1].clone() + t * &other.coords[1],
            self.coords[2].clone() + t * &other.coords[2],
        ];
        ProjPoint::new(c).expect("combination of distinct points is nonzero")
    }

    fn pair(&self, l: &ProjLine) -> Rational {
        self.coords
            .iter()
            .zip(l.coords.iter())
            .map(|(a, b)| a * b)
            .fold(Rational::zero(), |s, t| s + t)
    }
}

impl ProjLine {
    /// Builds a line from homogeneous coefficients; fails on the zero triple.
    pub fn new(coords: [Rational; 3]) -> Result<Self> {
        Ok(Self { coords: canonicalize(coords)? })
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new([
            Rational::from_integer(a.into()),
            Rational::from_integer(b.into()),
            Rational::from_integer(c.into()),
        ])
    }

    /// Canonical coefficients (first nonzero entry is 1).
    pub fn coords(&self) -> &[Rational; 3] {
        &self.coords
    }

    /// Primitive integer representative with positive leading entry.
    pub fn primitive(&self) -> [Int; 3] {
        let v = primitive_integer_vector(&self.coords).expect("canonical line is nonzero");
        [v[0].clone(), v[1].clone(), v[2].clone()]
    }

    /// Whether the point lies on this line.
    pub fn contains(&self, p: &ProjPoint) -> bool {
        p.on_line(self)
    }

    /// Two canonical distinct points spanning the line.
    ///
    /// Used wherever a deterministic parametrization is needed (sampling,
    /// adapted frames).
    pub fn two_points(&self) -> (ProjPoint, ProjPoint) {
        let [a, b, c] = &self.coords;
        // Candidate kernel vectors of (a b c); at least two are independent.
        let cands = [
            [b.clone(), -a.clone(), Rational::zero()],
            [c.clone(), Rational::zero(), -a.clone()],
            [Rational::zero(), c.clone(), -b.clone()],
        ];
        let mut found: Vec<ProjPoint> = Vec::new();
        for v in cands {
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            let p = ProjPoint::new(v).expect("nonzero candidate");
            debug_assert!(self.contains(&p));
            if !found.contains(&p) {
                found.push(p);
            }
            if found.len() == 2 {
                break;
            }
        }
        let mut it = found.into_iter();
        let p = it.next().expect("line has a rational point");
        let q = it.next().expect("line has two rational points");
        (p, q)
    }

    /// A rational point of the line distinct from every point in `avoid`.
    ///
    /// Walks the parametrization `p + t q` over small integers `t`, so the
    /// result is deterministic.
    pub fn point_avoiding(&self, avoid: &[ProjPoint]) -> ProjPoint {
        let (p, q) = self.two_points();
        if !avoid.contains(&q) {
            return q;
        }
        let mut t: i64 = 0;
        loop {
            let tt = Rational::from_integer(t.into());
            let cand = [
                p.coords[0].clone() + &tt * &q.coords[0],
                p.coords[1].clone() + &tt * &q.coords[1],
                p.coords[2].clone() + &tt * &q.coords[2],
            ];
            let cand = ProjPoint::new(cand).expect("p + t q is nonzero for p != q");
            debug_assert!(self.contains(&cand));
            if !avoid.contains(&cand) {
                return cand;
            }
            t = if t >= 0 { -(t + 1) } else { -t };
        }
    }
}

/// Intersection point of two distinct lines.
pub fn meet(l1: &ProjLine, l2: &ProjLine) -> Result<ProjPoint> {
    let c = cross(&l1.coords, &l2.coords);
    ProjPoint::new(c).map_err(|_| {
        EngineError::Invalid("meet of equal lines is not a point".into())
    })
}

/// Line joining two distinct points.
pub fn join(p1: &ProjPoint, p2: &ProjPoint) -> Result<ProjLine> {
    let c = cross(&p1.coords, &p2.coords);
    ProjLine::new(c).map_err(|_| {
        EngineError::Invalid("join of equal points is not a line".into())
    })
}

/// Whether three points lie on a common line.
pub fn collinear(p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> bool {
    let c = cross(&p1.coords, &p2.coords);
    c.iter()
        .zip(p3.coords.iter())
        .map(|(a, b)| a * b)
        .fold(Rational::zero(), |s, t| s + t)
        .is_zero()
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}:{}:{}]",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Debug for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}x + {}y + {}z = 0}}",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An invertible 3x3 rational matrix acting on the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projectivity {
    /// Row-major entries.
    pub m: [[Rational; 3]; 3],
}

impl Projectivity {
    /// Builds the projectivity whose columns are the images of the three
    /// coordinate points; fails when the columns are dependent.
    pub fn from_columns(c0: &ProjPoint, c1: &ProjPoint, c2: &ProjPoint) -> Result<Self> {
        let m = [
            [c0.coords[0].clone(), c1.coords[0].clone(), c2.coords[0].clone()],
            [c0.coords[1].clone(), c1.coords[1].clone(), c2.coords[1].clone()],
            [c0.coords[2].clone(), c1.coords[2].clone(), c2.coords[2].clone()],
        ];
        let p = Self { m };
        if p.det().is_zero() {
            return Err(EngineError::Invalid(
                "projectivity columns are linearly dependent".into(),
            ));
        }
        Ok(p)
    }

    /// Determinant.
    pub fn det(&self) -> Rational {
        let m = &self.m;
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    /// Adjugate matrix; equals the inverse up to the determinant scale, which
    /// is invisible projectively.
    pub fn adjugate(&self) -> Self {
        let m = &self.m;
        let cof = |r1: usize, r2: usize, c1: usize, c2: usize| {
            &m[r1][c1] * &m[r2][c2] - &m[r1][c2] * &m[r2][c1]
        };
        Self {
            m: [
                [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
                [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
                [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
            ],
        }
    }

    /// Matrix-vector action on raw coordinates.
    pub fn apply_raw(&self, v: &[Rational; 3]) -> [Rational; 3] {
        let m = &self.m;
        [
            &m[0][0] * &v[0] + &m[0][1] * &v[1] + &m[0][2] * &v[2],
            &m[1][0] * &v[0] + &m[1][1] * &v[1] + &m[1][2] * &v[2],
            &m[2][0] * &v[0] + &m[2][1] * &v[1] + &m[2][2] * &v[2],
        ]
    }

    /// Image of a point.
    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(self.apply_raw(&p.coords)).expect("invertible matrix maps nonzero to nonzero")
    }

    /// Image of a line: coefficients transform by the inverse transpose,
    /// realized through the adjugate to stay scale-free.
    pub fn apply_line(&self, l: &ProjLine) -> ProjLine {
        // (adj M)^T l gives coefficients of the image line.
        let a = self.adjugate();
        let v = [
            &a.m[0][0] * &l.coords[0] + &a.m[1][0] * &l.coords[1] + &a.m[2][0] * &l.coords[2],
            &a.m[0][1] * &l.coords[0] + &a.m[1][1] * &l.coords[1] + &a.m[2][1] * &l.coords[2],
            &a.m[0][2] * &l.coords[0] + &a.m[1][2] * &l.coords[1] + &a.m[2][2] * &l.coords[2],
        ];
        ProjLine::new(v).expect("invertible matrix maps lines to lines")
    }
}

/// Deterministic canonical point not on the given line.
pub fn canonical_point_off_line(l: &ProjLine) -> ProjPoint {
    for cand in [
        ProjPoint::from_ints(1, 0, 0),
        ProjPoint::from_ints(0, 1, 0),
        ProjPoint::from_ints(0, 0, 1),
        ProjPoint::from_ints(1, 1, 1),
    ] {
        let p = cand.expect("literal nonzero coordinates");
        if !l.contains(&p) {
            return p;
        }
    }
    unreachable!("a line cannot contain all four reference points")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: i64, b: i64, c: i64) -> ProjPoint {
        ProjPoint::from_ints(a, b, c).unwrap()
    }

    fn ln(a: i64, b: i64, c: i64) -> ProjLine {
        ProjLine::from_ints(a, b, c).unwrap()
    }

    #[test]
    fn canonical_form_identifies_scalings() {
        assert_eq!(pt(2, 4, 6), pt(1, 2, 3));
        assert_eq!(pt(0, -5, 10), pt(0, 1, -2));
        assert!(ProjPoint::from_ints(0, 0, 0).is_err());
    }

    #[test]
    fn meet_examples() {
        // {x = 0} and {y = 0} meet at [0:0:1].
        assert_eq!(meet(&ln(1, 0, 0), &ln(0, 1, 0)).unwrap(), pt(0, 0, 1));
        // {z = 0} and {x + y + z = 0} meet at [1:-1:0].
        assert_eq!(meet(&ln(0, 0, 1), &ln(1, 1, 1)).unwrap(), pt(1, -1, 0));
        assert!(meet(&ln(1, 0, 0), &ln(1, 0, 0)).is_err());
    }

    #[test]
    fn join_and_incidence() {
        let l = join(&pt(1, 0, 0), &pt(0, 1, 0)).unwrap();
        assert_eq!(l, ln(0, 0, 1));
        assert!(l.contains(&pt(1, -1, 0)));
        assert!(!l.contains(&pt(0, 0, 1)));
        assert!(collinear(&pt(1, 0, 0), &pt(0, 1, 0), &pt(1, 1, 0)));
        assert!(!collinear(&pt(1, 0, 0), &pt(0, 1, 0), &pt(1, 1, 1)));
    }

    #[test]
    fn meet_then_join_recovers_incidences() {
        let l1 = ln(1, 2, 3);
        let l2 = ln(4, 5, 6);
        let p = meet(&l1, &l2).unwrap();
        assert!(l1.contains(&p) && l2.contains(&p));
    }

    #[test]
    fn projectivity_roundtrip() {
        let t = Projectivity::from_columns(&pt(1, 0, 1), &pt(0, 1, 1), &pt(1, 1, 0)).unwrap();
        let inv = t.adjugate();
        let p = pt(2, 3, 5);
        assert_eq!(
            ProjPoint::new(inv.apply_raw(&t.apply_point(&p).coords().clone())).unwrap(),
            p
        );
        let l = ln(7, -1, 2);
        let q = l.point_avoiding(&[]);
        assert!(t.apply_line(&l).contains(&t.apply_point(&q)));
    }

    #[test]
    fn point_avoiding_walks_past_exclusions() {
        let l = ln(0, 0, 1);
        let (p, q) = l.two_points();
        let r = l.point_avoiding(&[p.clone(), q.clone()]);
        assert!(l.contains(&r));
        assert_ne!(r, p);
        assert_ne!(r, q);
    }

    #[test]
    fn off_line_reference_point() {
        for l in [ln(1, 0, 0), ln(1, 1, 1), ln(1, -1, 0)] {
            assert!(!l.contains(&canonical_point_off_line(&l)));
        }
    }
}
