//! Reduced curves built from lines and smooth conics, and the transport of
//! an arrangement's singular inventory through a Cremona map.
//!
//! A quadratic map based at three points of an arrangement sends each line
//! to a line or a smooth conic. Away from the base scheme the map is an
//! isomorphism, so the image's singular points are the images of the
//! source's singular points plus the three points the exceptional lines
//! land on. `transport_through` computes that inventory exactly and
//! re-verifies every multiplicity against the image components.

use crate::arrangement::LineArrangement;
use crate::cremona_map::{BaseEntry, CremonaMap, LineImage};
use crate::poly::HomPoly;
use crate::projective::ProjPoint;
use crate::rational::Rational;
use crate::{EngineError, Result};
use num_traits::Zero;

/// A reduced plane curve whose components are lines and smooth conics.
#[derive(Clone, Debug)]
pub struct ReducedCurve {
    components: Vec<HomPoly>,
}

/// Smoothness of a conic, read off the rank of its symmetric matrix.
pub fn conic_is_smooth(f: &HomPoly) -> Result<bool> {
    if f.degree() != 2 {
        return Err(EngineError::Invalid(format!(
            "smoothness test expects a conic, got degree {}",
            f.degree()
        )));
    }
    let c = |m: [u16; 3]| f.coeff(m);
    let two = Rational::from_integer(2.into());
    // Doubled symmetric matrix keeps the entries in the coefficient ring.
    let m = [
        [&c([2, 0, 0]) * &two, c([1, 1, 0]), c([1, 0, 1])],
        [c([1, 1, 0]), &c([0, 2, 0]) * &two, c([0, 1, 1])],
        [c([1, 0, 1]), c([0, 1, 1]), &c([0, 0, 2]) * &two],
    ];
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    Ok(!det.is_zero())
}

impl ReducedCurve {
    /// Validates the component list: lines or smooth conics only, no
    /// repeats.
    pub fn new(components: Vec<HomPoly>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(components.len());
        for f in &components {
            match f.degree() {
                1 => {}
                2 => {
                    if !conic_is_smooth(f)? {
                        return Err(EngineError::Invalid(
                            "a degree-two component is a singular conic".into(),
                        ));
                    }
                }
                d => {
                    return Err(EngineError::Unsupported(format!(
                        "curve components must be lines or conics, got degree {d}"
                    )));
                }
            }
            if f.is_zero() {
                return Err(EngineError::Invalid("zero component".into()));
            }
            let n = f.normalized();
            if normalized.contains(&n) {
                return Err(EngineError::Invalid("repeated curve component".into()));
            }
            normalized.push(n);
        }
        Ok(Self {
            components: normalized,
        })
    }

    pub fn components(&self) -> &[HomPoly] {
        &self.components
    }

    /// Sum of the component degrees.
    pub fn degree(&self) -> usize {
        self.components.iter().map(|f| f.degree()).sum()
    }

    /// Product of the components.
    pub fn defining_poly(&self) -> HomPoly {
        let mut acc = HomPoly::constant_one();
        for f in &self.components {
            acc = acc.mul(f);
        }
        acc
    }

    /// Multiplicity at a point: every component is smooth, so this is the
    /// number of components through the point.
    pub fn multiplicity_at(&self, p: &ProjPoint) -> usize {
        self.components.iter().filter(|f| f.vanishes_at(p)).count()
    }
}

/// Image curve of an arrangement together with its singular inventory.
#[derive(Clone, Debug)]
pub struct TransportedCurve {
    pub curve: ReducedCurve,
    /// Ordinary singular points with multiplicities, largest first.
    pub singular: Vec<(ProjPoint, usize)>,
}

/// Pushes an arrangement through a map with proper base points and returns
/// the image curve with its singular inventory. Requires the base points to
/// be pairwise off a common arrangement line and the contracted curves to
/// avoid every non-base singular point; those are exactly the conditions
/// keeping every image singularity ordinary and rational.
pub fn transport_through(map: &CremonaMap, arr: &LineArrangement) -> Result<TransportedCurve> {
    for b in &map.base {
        if !matches!(b, BaseEntry::Proper { .. }) {
            return Err(EngineError::Unsupported(
                "singularity transport handles proper base points only".into(),
            ));
        }
    }
    let base_points: Vec<&ProjPoint> = map.base.iter().map(|b| b.point()).collect();
    for l in arr.lines() {
        if base_points.iter().filter(|p| l.contains(p)).count() >= 2 {
            return Err(EngineError::Invalid(
                "an arrangement line joins two base points".into(),
            ));
        }
    }

    let singular = arr.singular_points();
    let (at_base, off_base): (Vec<_>, Vec<_>) = singular
        .iter()
        .partition(|s| base_points.contains(&&s.point));
    let _ = at_base;
    for (cf, _) in &map.contracted {
        for s in &off_base {
            if cf.vanishes_at(&s.point) {
                return Err(EngineError::Invalid(
                    "a singular point lies on a contracted curve".into(),
                ));
            }
        }
    }

    let mut forms = Vec::with_capacity(arr.degree());
    for l in arr.lines() {
        match map.push_line(l)? {
            LineImage::Curve(c) => forms.push(c),
            LineImage::Point(_) => {
                return Err(EngineError::Internal(
                    "contracted arrangement line slipped past the base checks".into(),
                ));
            }
        }
    }
    let curve = ReducedCurve::new(forms)?;

    let line_count = |p: &ProjPoint| arr.lines().iter().filter(|l| l.contains(p)).count();
    let expected_degree = (map.degree * arr.degree()) as i64
        - map
            .base
            .iter()
            .map(|b| (b.multiplicity() * line_count(b.point())) as i64)
            .sum::<i64>();
    if curve.degree() as i64 != expected_degree {
        return Err(EngineError::Internal(format!(
            "image degree {} disagrees with the multiplicity count {}",
            curve.degree(),
            expected_degree
        )));
    }

    let mut inventory: Vec<(ProjPoint, usize)> = Vec::new();
    for s in &off_base {
        let img = map.apply_point(&s.point).ok_or_else(|| {
            EngineError::Internal("non-base singular point hit the base scheme".into())
        })?;
        inventory.push((img, s.multiplicity()));
    }
    // Each exceptional curve lands on one point; the image multiplicity
    // there counts the intersections with the arrangement away from base.
    for (cf, target) in &map.contracted {
        let mut mult = (cf.degree() * arr.degree()) as i64;
        for b in &map.base {
            mult -= (cf.multiplicity_at(b.point()) * line_count(b.point())) as i64;
        }
        if mult >= 2 {
            inventory.push((target.clone(), mult as usize));
        }
    }

    for i in 0..inventory.len() {
        for j in i + 1..inventory.len() {
            if inventory[i].0 == inventory[j].0 {
                return Err(EngineError::Internal(
                    "two transported singular points collide".into(),
                ));
            }
        }
    }
    for (p, k) in &inventory {
        if curve.multiplicity_at(p) != *k {
            return Err(EngineError::Internal(format!(
                "transported multiplicity {k} not matched by the image components"
            )));
        }
    }
    inventory.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    Ok(TransportedCurve {
        curve,
        singular: inventory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cremona_map::quadratic_map;
    use crate::projective::ProjLine;
    use crate::rational::Rational;
    use num_traits::One;

    fn pt(a: i64, b: i64, c: i64) -> ProjPoint {
        ProjPoint::from_ints(a, b, c).unwrap()
    }

    fn ln(a: i64, b: i64, c: i64) -> ProjLine {
        ProjLine::from_ints(a, b, c).unwrap()
    }

    /// Six lines, no three concurrent, whose nodes admit a base triple with
    /// pairwise disjoint line pairs.
    fn six_lines() -> Vec<ProjLine> {
        vec![
            ln(1, 0, 0),
            ln(0, 1, 0),
            ln(0, 0, 1),
            ln(1, 1, 1),
            ln(1, 2, 4),
            ln(1, 3, 9),
        ]
    }

    fn conic(terms: &[([u16; 3], i64)]) -> HomPoly {
        HomPoly::from_terms(
            2,
            terms
                .iter()
                .map(|(m, c)| (*m, Rational::from_integer((*c).into())))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn conic_smoothness_by_rank() {
        assert!(conic_is_smooth(&conic(&[([1, 1, 0], 1), ([0, 0, 2], -1)])).unwrap());
        // Two lines.
        assert!(!conic_is_smooth(&conic(&[([1, 1, 0], 1)])).unwrap());
        // Double line.
        assert!(!conic_is_smooth(&conic(&[([2, 0, 0], 1)])).unwrap());
        assert!(conic_is_smooth(&HomPoly::from_line(&ln(1, 1, 1))).is_err());
    }

    #[test]
    fn reduced_curve_validates_components() {
        let good = ReducedCurve::new(vec![
            HomPoly::from_line(&ln(1, 0, 0)),
            conic(&[([1, 1, 0], 1), ([0, 0, 2], -1)]),
        ])
        .unwrap();
        assert_eq!(good.degree(), 3);
        assert_eq!(good.multiplicity_at(&pt(0, 1, 0)), 2);
        assert_eq!(good.multiplicity_at(&pt(1, 2, 3)), 0);

        assert!(ReducedCurve::new(vec![conic(&[([1, 1, 0], 1)])]).is_err());
        let double = vec![
            HomPoly::from_line(&ln(1, 0, 0)),
            HomPoly::from_line(&ln(1, 0, 0)).scale(&Rational::from_integer(3.into())),
        ];
        assert!(ReducedCurve::new(double).is_err());
        let cubic = HomPoly::from_line(&ln(1, 0, 0)).mul(&conic(&[([1, 1, 0], 1), ([0, 0, 2], -1)]));
        assert!(ReducedCurve::new(vec![cubic]).is_err());
        let _ = Rational::one();
    }

    #[test]
    fn transport_keeps_a_nodal_six_liner_nodal() {
        let arr = LineArrangement::new(six_lines()).unwrap();
        // Base nodes with pairwise disjoint line pairs.
        let map = quadratic_map(&pt(0, 0, 1), &pt(1, -1, 0), &pt(6, -5, 1)).unwrap();
        let t = transport_through(&map, &arr).unwrap();
        assert_eq!(t.curve.degree(), 6);
        assert!(t.curve.components().iter().all(|f| f.degree() == 1));
        assert_eq!(t.singular.len(), 15);
        assert!(t.singular.iter().all(|(_, k)| *k == 2));
    }

    #[test]
    fn transport_grows_a_conic_when_a_line_misses_every_base_point() {
        let mut lines = six_lines();
        lines.push(ln(1, 4, 16));
        let arr = LineArrangement::new(lines).unwrap();
        let map = quadratic_map(&pt(0, 0, 1), &pt(1, -1, 0), &pt(6, -5, 1)).unwrap();
        let t = transport_through(&map, &arr).unwrap();
        assert_eq!(t.curve.degree(), 8);
        let conics = t
            .curve
            .components()
            .iter()
            .filter(|f| f.degree() == 2)
            .count();
        assert_eq!(conics, 1);
        // 18 transported nodes plus three triple points on the exceptional
        // images.
        let triples = t.singular.iter().filter(|(_, k)| *k == 3).count();
        let nodes = t.singular.iter().filter(|(_, k)| *k == 2).count();
        assert_eq!((triples, nodes), (3, 18));
    }

    #[test]
    fn transport_rejects_base_points_sharing_a_line() {
        let arr = LineArrangement::new(six_lines()).unwrap();
        // First two points share the line x = 0.
        let map = quadratic_map(&pt(0, 0, 1), &pt(0, 1, 0), &pt(1, -1, 0)).unwrap();
        assert!(matches!(
            transport_through(&map, &arr).unwrap_err(),
            EngineError::Invalid(_)
        ));
    }

    #[test]
    fn transport_rejects_singular_points_on_joining_lines() {
        // The extra line meets x + 2y + 4z = 0 on the joining line
        // x + y = 0 of the first two base points.
        let mut lines = six_lines();
        lines.push(ln(1, 0, -4));
        let arr = LineArrangement::new(lines).unwrap();
        let map = quadratic_map(&pt(0, 0, 1), &pt(1, -1, 0), &pt(6, -5, 1)).unwrap();
        assert!(matches!(
            transport_through(&map, &arr).unwrap_err(),
            EngineError::Invalid(_)
        ));
    }
}
