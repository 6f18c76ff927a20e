//! Plane Cremona maps carried as explicit form triples with verified inverses.
//!
//! A map stores the three forms of each direction, the base scheme on both
//! sides, and the curves each direction contracts together with their image
//! points. Constructors cover the shapes the contraction recipes need:
//! quadratic maps based at three proper points, quadratic maps with an
//! infinitely near base point, and de Jonquieres maps of arbitrary degree
//! centred at an apex. Every pushforward re-checks the degree formula, so a
//! successful return is itself a certificate.

use crate::linsys::exact::kernel_exact;
use crate::linsys::rows::IntMatrix;
use crate::poly::{adapted_frame, HomPoly, Mono};
use crate::projective::{canonical_point_off_line, join, ProjLine, ProjPoint, Projectivity};
use crate::rational::{Int, Rational};
use crate::{EngineError, Result};
use num_traits::{One, Zero};

/// One point of a base scheme: proper, or infinitely near a proper point in
/// a given tangent direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseEntry {
    Proper {
        point: ProjPoint,
        mult: usize,
    },
    /// Lives on the first blow-up of `point`; `direction` is the tangent
    /// line identifying it.
    InfinitelyNear {
        point: ProjPoint,
        direction: ProjLine,
        mult: usize,
    },
}

impl BaseEntry {
    /// The proper point the entry lies over.
    pub fn point(&self) -> &ProjPoint {
        match self {
            BaseEntry::Proper { point, .. } => point,
            BaseEntry::InfinitelyNear { point, .. } => point,
        }
    }

    /// Assigned multiplicity.
    pub fn multiplicity(&self) -> usize {
        match self {
            BaseEntry::Proper { mult, .. } => *mult,
            BaseEntry::InfinitelyNear { mult, .. } => *mult,
        }
    }
}

/// A birational self-map of the plane with explicit forms both ways.
#[derive(Clone, Debug)]
pub struct CremonaMap {
    /// Common degree of the forward forms (the inverse has the same degree
    /// for every constructor here).
    pub degree: usize,
    pub forward: [HomPoly; 3],
    pub inverse: [HomPoly; 3],
    /// Base scheme of the forward map.
    pub base: Vec<BaseEntry>,
    /// Base scheme of the inverse map.
    pub target_base: Vec<BaseEntry>,
    /// Curves contracted by the forward map, with the points they land on.
    pub contracted: Vec<(HomPoly, ProjPoint)>,
    /// Curves contracted by the inverse map, with the points they land on.
    pub target_contracted: Vec<(HomPoly, ProjPoint)>,
}

/// Image of a curve under a map.
#[derive(Clone, Debug)]
pub struct CurveImage {
    /// Strict image form; degree zero exactly when the curve was contracted.
    pub form: HomPoly,
}

impl CurveImage {
    /// Degree of the strict image, zero for a contracted curve.
    pub fn degree(&self) -> usize {
        self.form.degree()
    }
}

/// Image of a single line.
#[derive(Clone, Debug)]
pub enum LineImage {
    Point(ProjPoint),
    Curve(HomPoly),
}

/// Line-by-line image of an arrangement, keeping track of which input lines
/// were contracted.
#[derive(Clone, Debug)]
pub struct ArrangementImage {
    /// Pairs (input index, image line).
    pub lines: Vec<(usize, ProjLine)>,
    /// Pairs (input index, image point) for the contracted lines.
    pub contracted: Vec<(usize, ProjPoint)>,
}

impl ArrangementImage {
    /// Rebuilds an arrangement from the surviving image lines.
    pub fn arrangement(&self) -> Result<crate::arrangement::LineArrangement> {
        crate::arrangement::LineArrangement::new(
            self.lines.iter().map(|(_, l)| l.clone()).collect(),
        )
    }
}

fn mono_poly(degree: usize, m: Mono) -> HomPoly {
    HomPoly::from_terms(degree, vec![(m, Rational::one())])
        .expect("monomial of matching degree")
}

/// Rescales a triple of forms by one common factor so all coefficients are
/// coprime integers and the first surviving coefficient is positive.
fn primitive_triple(forms: [HomPoly; 3]) -> [HomPoly; 3] {
    let all: Vec<Rational> = forms
        .iter()
        .flat_map(|f| f.terms().map(|(_, c)| c.clone()))
        .collect();
    let ints = match crate::rational::primitive_integer_vector(&all) {
        Some(v) => v,
        None => return forms,
    };
    let k = all
        .iter()
        .position(|c| !c.is_zero())
        .expect("a nonzero coefficient exists");
    let factor = Rational::from(ints[k].clone()) / &all[k];
    [
        forms[0].scale(&factor),
        forms[1].scale(&factor),
        forms[2].scale(&factor),
    ]
}

/// Conjugates a model triple by `t`: the result is `t` composed after the
/// model composed after the inverse of `t`, written in the original
/// coordinates.
fn conjugate_triple(model: &[HomPoly; 3], t: &Projectivity) -> [HomPoly; 3] {
    let tinv = t.adjugate();
    let inner: Vec<HomPoly> = model
        .iter()
        .map(|f| f.compose_projectivity(&tinv))
        .collect();
    let combo = |row: usize| -> HomPoly {
        inner[0]
            .scale(&t.m[row][0])
            .add(&inner[1].scale(&t.m[row][1]))
            .add(&inner[2].scale(&t.m[row][2]))
    };
    primitive_triple([combo(0), combo(1), combo(2)])
}

/// Transports a form from frame coordinates back to world coordinates.
fn world_form(f: &HomPoly, frame: &Projectivity) -> HomPoly {
    f.compose_projectivity(&frame.adjugate()).normalized()
}

fn apply_triple(forms: &[HomPoly; 3], p: &ProjPoint) -> Option<ProjPoint> {
    let v = [
        forms[0].eval_point(p),
        forms[1].eval_point(p),
        forms[2].eval_point(p),
    ];
    ProjPoint::new(v).ok()
}

/// Multiplicity of the strict transform of `f` at the infinitely near point
/// over `p` in the direction `dir`. Read off in an adapted chart where `p`
/// is the origin and `dir` is the first axis: with vanishing order `k` at
/// `p`, the answer is `min(a + 2b) - k` over the monomials `x^a y^b z^c` of
/// the localized form.
pub fn infinitely_near_multiplicity(f: &HomPoly, p: &ProjPoint, dir: &ProjLine) -> usize {
    if f.is_zero() {
        return f.degree() + 1;
    }
    let v = dir.point_avoiding(std::slice::from_ref(p));
    let w = canonical_point_off_line(dir);
    let t = Projectivity::from_columns(&v, &w, p)
        .expect("two points of a line and a point off it form a frame");
    let local = f.compose_projectivity(&t);
    let k = local
        .terms()
        .map(|(m, _)| (m[0] + m[1]) as usize)
        .min()
        .expect("nonzero form has terms");
    let s = local
        .terms()
        .map(|(m, _)| (m[0] + 2 * m[1]) as usize)
        .min()
        .expect("nonzero form has terms");
    s - k
}

fn base_multiplicity(f: &HomPoly, b: &BaseEntry) -> usize {
    match b {
        BaseEntry::Proper { point, .. } => f.multiplicity_at(point),
        BaseEntry::InfinitelyNear {
            point, direction, ..
        } => infinitely_near_multiplicity(f, point, direction),
    }
}

/// Quadratic map based at three distinct non-collinear points. It is an
/// involution in these coordinates: the inverse has the same forms.
pub fn quadratic_map(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<CremonaMap> {
    let t = Projectivity::from_columns(p, q, r).map_err(|_| {
        EngineError::BaseScheme(
            "quadratic base points must be three distinct non-collinear points".into(),
        )
    })?;
    let model = [
        mono_poly(2, [0, 1, 1]),
        mono_poly(2, [1, 0, 1]),
        mono_poly(2, [1, 1, 0]),
    ];
    let forward = conjugate_triple(&model, &t);
    let inverse = forward.clone();
    let base = vec![
        BaseEntry::Proper {
            point: p.clone(),
            mult: 1,
        },
        BaseEntry::Proper {
            point: q.clone(),
            mult: 1,
        },
        BaseEntry::Proper {
            point: r.clone(),
            mult: 1,
        },
    ];
    let contracted = vec![
        (HomPoly::from_line(&join(q, r)?), p.clone()),
        (HomPoly::from_line(&join(p, r)?), q.clone()),
        (HomPoly::from_line(&join(p, q)?), r.clone()),
    ];
    Ok(CremonaMap {
        degree: 2,
        forward,
        inverse,
        base: base.clone(),
        target_base: base,
        contracted: contracted.clone(),
        target_contracted: contracted,
    })
}

/// Quadratic map whose base consists of a point `p`, the point infinitely
/// near `p` along `direction`, and a third point `r` off that direction.
/// Members of the net are conics through `p` and `r` tangent to `direction`
/// at `p`.
pub fn quadratic_map_tangent(
    p: &ProjPoint,
    direction: &ProjLine,
    r: &ProjPoint,
) -> Result<CremonaMap> {
    if !direction.contains(p) {
        return Err(EngineError::BaseScheme(
            "tangent direction must pass through the double base point".into(),
        ));
    }
    if direction.contains(r) {
        return Err(EngineError::BaseScheme(
            "third base point of a tangent quadratic must avoid the tangent direction".into(),
        ));
    }
    let v = direction.point_avoiding(std::slice::from_ref(p));
    let t = Projectivity::from_columns(&v, r, p)
        .expect("two points of the direction and a point off it form a frame");
    let fwd_model = [
        mono_poly(2, [2, 0, 0]),
        mono_poly(2, [1, 1, 0]),
        mono_poly(2, [0, 1, 1]),
    ];
    let inv_model = [
        mono_poly(2, [1, 1, 0]),
        mono_poly(2, [0, 2, 0]),
        mono_poly(2, [1, 0, 1]),
    ];
    let forward = conjugate_triple(&fwd_model, &t);
    let inverse = conjugate_triple(&inv_model, &t);
    let lpr = join(p, r)?;
    Ok(CremonaMap {
        degree: 2,
        forward,
        inverse,
        base: vec![
            BaseEntry::Proper {
                point: p.clone(),
                mult: 1,
            },
            BaseEntry::InfinitelyNear {
                point: p.clone(),
                direction: direction.clone(),
                mult: 1,
            },
            BaseEntry::Proper {
                point: r.clone(),
                mult: 1,
            },
        ],
        target_base: vec![
            BaseEntry::Proper {
                point: p.clone(),
                mult: 1,
            },
            BaseEntry::InfinitelyNear {
                point: p.clone(),
                direction: lpr.clone(),
                mult: 1,
            },
            BaseEntry::Proper {
                point: v.clone(),
                mult: 1,
            },
        ],
        contracted: vec![
            (HomPoly::from_line(&lpr), p.clone()),
            (HomPoly::from_line(direction), v),
        ],
        target_contracted: vec![
            (HomPoly::from_line(direction), p.clone()),
            (HomPoly::from_line(&lpr), r.clone()),
        ],
    })
}

/// Monomial list for a form of the given degree with multiplicity
/// `degree - 1` at `[0:0:1]`: only the terms `z * (deg-1 part)` and the
/// `z`-free part survive.
fn dej_monos(degree: usize) -> Vec<Mono> {
    let mut out = Vec::with_capacity(2 * degree + 1);
    for a in (0..degree).rev() {
        out.push([a as u16, (degree - 1 - a) as u16, 1]);
    }
    for a in (0..=degree).rev() {
        out.push([a as u16, (degree - a) as u16, 0]);
    }
    out
}

fn int_pow(b: &Int, e: u16) -> Int {
    let mut acc = Int::one();
    for _ in 0..e {
        acc = &acc * b;
    }
    acc
}

/// Kernel of the evaluation matrix of the given monomials at the given
/// points.
fn interpolation_kernel(monos: &[Mono], points: &[ProjPoint]) -> Vec<Vec<Rational>> {
    let rows = points
        .iter()
        .map(|p| {
            let c = p.primitive();
            monos
                .iter()
                .map(|m| int_pow(&c[0], m[0]) * int_pow(&c[1], m[1]) * int_pow(&c[2], m[2]))
                .collect()
        })
        .collect();
    let matrix = IntMatrix {
        ncols: monos.len(),
        rows,
    };
    kernel_exact(&matrix).1
}

fn poly_from_kernel(degree: usize, monos: &[Mono], v: &[Rational]) -> HomPoly {
    let terms = monos
        .iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (*m, c.clone()))
        .collect();
    HomPoly::from_terms(degree, terms).expect("kernel vector indexes matching monomials")
}

/// Splits `z * f1(x, y) + f0(x, y)` into its two bivariate parts.
fn split_z(f: &HomPoly) -> (HomPoly, HomPoly) {
    let d = f.degree();
    let mut t1 = Vec::new();
    let mut t0 = Vec::new();
    for (m, c) in f.terms() {
        match m[2] {
            1 => t1.push(([m[0], m[1], 0], c.clone())),
            0 => t0.push((*m, c.clone())),
            _ => unreachable!("de Jonquieres forms carry no higher z powers"),
        }
    }
    (
        HomPoly::from_terms(d - 1, t1).expect("z part one degree lower"),
        HomPoly::from_terms(d, t0).expect("z-free part of full degree"),
    )
}

/// Multiplies by `z`.
fn lift_z(f: &HomPoly) -> HomPoly {
    let terms = f
        .terms()
        .map(|(m, c)| ([m[0], m[1], m[2] + 1], c.clone()))
        .collect();
    HomPoly::from_terms(f.degree() + 1, terms).expect("degree rises by one")
}

/// De Jonquieres map of degree `n = simples.len() / 2 + 1`: apex of
/// multiplicity `n - 1` plus an even number of simple base points, no two of
/// them on one line through the apex. Lines through the apex map to lines
/// through the apex.
pub fn dejonquieres_map(apex: &ProjPoint, simples: &[ProjPoint]) -> Result<CremonaMap> {
    if simples.is_empty() {
        return Err(EngineError::Unsupported(
            "a de Jonquieres map needs at least two simple base points".into(),
        ));
    }
    if !simples.len().is_multiple_of(2) {
        return Err(EngineError::BaseScheme(
            "a de Jonquieres map needs an even number of simple base points".into(),
        ));
    }
    for (i, q) in simples.iter().enumerate() {
        if q == apex {
            return Err(EngineError::BaseScheme(
                "a simple base point coincides with the apex".into(),
            ));
        }
        if simples[i + 1..].contains(q) {
            return Err(EngineError::BaseScheme("repeated simple base point".into()));
        }
    }
    let dirs: Vec<ProjLine> = simples
        .iter()
        .map(|q| join(apex, q))
        .collect::<Result<_>>()?;
    for i in 0..dirs.len() {
        if dirs[i + 1..].contains(&dirs[i]) {
            return Err(EngineError::BaseScheme(
                "two simple base points lie on one line through the apex".into(),
            ));
        }
    }
    let n = simples.len() / 2 + 1;

    let frame = adapted_frame(apex);
    let frame_inv = frame.adjugate();
    let local: Vec<ProjPoint> = simples
        .iter()
        .map(|q| ProjPoint::new(frame_inv.apply_raw(q.coords())).expect("invertible frame"))
        .collect();

    // Pencil numerator h: degree n-1, multiplicity n-2 at the apex, through
    // every simple point. The conditions must cut it out uniquely.
    let h_monos = dej_monos(n - 1);
    let h_basis = interpolation_kernel(&h_monos, &local);
    if h_basis.len() != 1 {
        return Err(EngineError::BaseScheme(
            "simple base points do not determine the pencil numerator uniquely".into(),
        ));
    }
    let h = poly_from_kernel(n - 1, &h_monos, &h_basis[0]);
    let (h1, h0) = split_z(&h);
    if h1.is_zero() {
        return Err(EngineError::BaseScheme(
            "pencil numerator misses the required apex multiplicity".into(),
        ));
    }

    // Third form g: degree n, multiplicity n-1 at the apex, through every
    // simple point; must be independent of x*h and y*h, which is exactly
    // the condition g0*h1 - h0*g1 != 0.
    let g_monos = dej_monos(n);
    let g_basis = interpolation_kernel(&g_monos, &local);
    let mut chosen = None;
    for v in &g_basis {
        let g = poly_from_kernel(n, &g_monos, v);
        let (g1, g0) = split_z(&g);
        if !g0.mul(&h1).sub(&h0.mul(&g1)).is_zero() {
            chosen = Some((g, g1, g0));
            break;
        }
    }
    let Some((g, g1, g0)) = chosen else {
        return Err(EngineError::BaseScheme(
            "base points admit no net member independent of the pencil".into(),
        ));
    };

    // In frame coordinates the map is [x*h : y*h : g]; its inverse is
    // [x*dd : y*dd : nn] with dd = z*h1 - g1 and nn = g0 - z*h0, by the
    // identity (inverse o forward) = h^(n-1) * (g0*h1 - h0*g1) * id.
    let x1 = mono_poly(1, [1, 0, 0]);
    let y1 = mono_poly(1, [0, 1, 0]);
    let phi = [h.mul(&x1), h.mul(&y1), g];
    let dd = lift_z(&h1).sub(&g1);
    let nn = g0.sub(&lift_z(&h0));
    let psi = [dd.mul(&x1), dd.mul(&y1), nn];

    let forward = conjugate_triple(&phi, &frame);
    let inverse = conjugate_triple(&psi, &frame);

    // Contracted curves: the pencil numerator lands on the apex, each line
    // joining the apex to a simple point lands on a target base point. When
    // the numerator contains such a line outright, that line lands on the
    // apex itself and the inverse sees an infinitely near point there.
    let mut contracted = vec![(world_form(&h, &frame), apex.clone())];
    let mut images = Vec::with_capacity(simples.len());
    for (q, dir) in simples.iter().zip(&dirs) {
        let s = dir.point_avoiding(&[apex.clone(), q.clone()]);
        let img = apply_triple(&forward, &s).ok_or_else(|| {
            EngineError::BaseScheme(
                "pencil numerator degenerates along a line through the apex".into(),
            )
        })?;
        contracted.push((HomPoly::from_line(dir), img.clone()));
        images.push(img);
    }

    // The inverse contracts the same pencil lines (a de Jonquieres map fixes
    // the pencil through the apex), each onto the matching source point;
    // spot-check that with a sample point per line.
    let mut target_contracted = vec![(world_form(&dd, &frame), apex.clone())];
    for ((q, dir), img) in simples.iter().zip(&dirs).zip(&images) {
        let s = dir.point_avoiding(&[apex.clone(), img.clone()]);
        let back = apply_triple(&inverse, &s).ok_or_else(|| {
            EngineError::Internal("inverse undefined on a contracted pencil line".into())
        })?;
        if &back != q {
            return Err(EngineError::Internal(
                "inverse does not contract the pencil line onto its source point".into(),
            ));
        }
        target_contracted.push((HomPoly::from_line(dir), q.clone()));
    }

    let mut base = vec![BaseEntry::Proper {
        point: apex.clone(),
        mult: n - 1,
    }];
    let mut target_base = base.clone();
    for q in simples {
        base.push(BaseEntry::Proper {
            point: q.clone(),
            mult: 1,
        });
    }
    for (img, dir) in images.iter().zip(&dirs) {
        if img == apex {
            // a de Jonquieres map fixes each line of the apex pencil, so the
            // infinitely near point sits over the apex in that same direction
            target_base.push(BaseEntry::InfinitelyNear {
                point: apex.clone(),
                direction: dir.clone(),
                mult: 1,
            });
        } else {
            target_base.push(BaseEntry::Proper {
                point: img.clone(),
                mult: 1,
            });
        }
    }

    Ok(CremonaMap {
        degree: n,
        forward,
        inverse,
        base,
        target_base,
        contracted,
        target_contracted,
    })
}

impl CremonaMap {
    /// Image of a point, `None` on the base scheme.
    pub fn apply_point(&self, p: &ProjPoint) -> Option<ProjPoint> {
        apply_triple(&self.forward, p)
    }

    /// Preimage of a point, `None` on the target base scheme.
    pub fn inverse_point(&self, p: &ProjPoint) -> Option<ProjPoint> {
        apply_triple(&self.inverse, p)
    }

    /// Checks the homaloidal identities `sum m = 3n - 3` and
    /// `sum m^2 = n^2 - 1` on both base schemes.
    pub fn homaloidal_ok(&self) -> bool {
        let n = self.degree as i64;
        let sums = |entries: &[BaseEntry]| {
            entries.iter().fold((0i64, 0i64), |(a, b), e| {
                let m = e.multiplicity() as i64;
                (a + m, b + m * m)
            })
        };
        let (s1, s2) = sums(&self.base);
        let (t1, t2) = sums(&self.target_base);
        s1 == 3 * n - 3 && s2 == n * n - 1 && t1 == 3 * n - 3 && t2 == n * n - 1
    }

    /// Strict image of a curve: substitutes the inverse forms, strips every
    /// exceptional factor, and checks the resulting degree against
    /// `n*deg(f) - sum mult_base * mult_curve`. Failure of that check is an
    /// internal error, never silent.
    pub fn push_forward(&self, f: &HomPoly) -> Result<CurveImage> {
        if f.is_zero() {
            return Err(EngineError::Invalid(
                "cannot push forward the zero form".into(),
            ));
        }
        let mut total = f.substitute(&self.inverse);
        for (exc, _) in &self.target_contracted {
            let (quotient, _) = total.divide_out(exc);
            total = quotient;
        }
        if total.is_zero() {
            return Err(EngineError::Internal(
                "pushforward vanished after stripping exceptional factors".into(),
            ));
        }
        let mut expected = (self.degree * f.degree()) as i64;
        for b in &self.base {
            expected -= (b.multiplicity() as i64) * (base_multiplicity(f, b) as i64);
        }
        if expected < 0 || total.degree() as i64 != expected {
            return Err(EngineError::Internal(format!(
                "pushforward degree {} disagrees with the multiplicity count {}",
                total.degree(),
                expected
            )));
        }
        Ok(CurveImage {
            form: total.normalized(),
        })
    }

    /// Image of a line: the tabulated point when the line is contracted,
    /// otherwise its strict image curve.
    pub fn push_line(&self, l: &ProjLine) -> Result<LineImage> {
        for (cf, pt) in &self.contracted {
            if cf.as_line().as_ref() == Some(l) {
                return Ok(LineImage::Point(pt.clone()));
            }
        }
        let image = self.push_forward(&HomPoly::from_line(l))?;
        if image.form.degree() == 0 {
            // Contracted but not tabulated, e.g. a line carrying enough
            // simple base points of a de Jonquieres map. Locate the target
            // by sampling; two samples must agree on it.
            let avoid: Vec<ProjPoint> = self.base.iter().map(|b| b.point().clone()).collect();
            let s1 = l.point_avoiding(&avoid);
            let mut avoid2 = avoid;
            avoid2.push(s1.clone());
            let s2 = l.point_avoiding(&avoid2);
            return match (self.apply_point(&s1), self.apply_point(&s2)) {
                (Some(a), Some(b)) if a == b => Ok(LineImage::Point(a)),
                _ => Err(EngineError::Internal(
                    "strict image of a line has degree zero but samples disagree".into(),
                )),
            };
        }
        Ok(LineImage::Curve(image.form))
    }

    /// Limit of the map along generic arcs through a fundamental point `p`.
    ///
    /// This is a single point exactly when the exceptional divisor over `p`
    /// is contracted, which for a quadratic map happens when `p` carries an
    /// infinitely near base point: every member of the net is then tangent
    /// to the same direction at `p`, so the first-order term of the map does
    /// not depend on the arc. Returns `None` when the limit varies, i.e.
    /// when the directions at `p` blow up into a curve.
    pub(crate) fn directional_limit(&self, p: &ProjPoint) -> Option<ProjPoint> {
        if self.degree != 2 {
            return None;
        }
        let pc = p.coords();
        let dirs: [[i64; 3]; 6] = [
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 1, 0],
            [1, 0, 1],
            [0, 1, 1],
        ];
        let mut found: Option<ProjPoint> = None;
        let mut agreements = 0usize;
        for v in dirs {
            let vr = [
                Rational::from_integer(Int::from(v[0])),
                Rational::from_integer(Int::from(v[1])),
                Rational::from_integer(Int::from(v[2])),
            ];
            let q = [&pc[0] + &vr[0], &pc[1] + &vr[1], &pc[2] + &vr[2]];
            // For a quadric f with f(p) = 0, f(p+v) - f(v) is twice the
            // polar form B(p, v), the first-order term of f along p + t*v.
            let t = [
                self.forward[0].eval(&q) - self.forward[0].eval(&vr),
                self.forward[1].eval(&q) - self.forward[1].eval(&vr),
                self.forward[2].eval(&q) - self.forward[2].eval(&vr),
            ];
            if t.iter().all(|c| c.is_zero()) {
                continue;
            }
            let cand = ProjPoint::new(t).ok()?;
            match &found {
                None => found = Some(cand),
                Some(f) if *f == cand => agreements += 1,
                Some(_) => return None,
            }
        }
        // Two agreements mean three distinct arcs shared the limit; a rank
        // two first-order term cannot fake that on this direction set.
        if agreements >= 2 {
            found
        } else {
            None
        }
    }

    /// Pushes every line of an arrangement. Errors when a surviving line
    /// maps to a curve of higher degree or two lines collide; contracted
    /// lines are reported, not errors.
    pub fn apply_to_arrangement(
        &self,
        arr: &crate::arrangement::LineArrangement,
    ) -> Result<ArrangementImage> {
        let mut lines: Vec<(usize, ProjLine)> = Vec::new();
        let mut contracted = Vec::new();
        for (i, l) in arr.lines().iter().enumerate() {
            match self.push_line(l)? {
                LineImage::Point(p) => contracted.push((i, p)),
                LineImage::Curve(c) => match c.as_line() {
                    Some(m) => {
                        if lines.iter().any(|(_, prev)| prev == &m) {
                            return Err(EngineError::Invalid(
                                "two arrangement lines share one image line".into(),
                            ));
                        }
                        lines.push((i, m));
                    }
                    None => {
                        return Err(EngineError::Unsupported(format!(
                            "line {} maps to a curve of degree {}, not a line",
                            i,
                            c.degree()
                        )));
                    }
                },
            }
        }
        Ok(ArrangementImage { lines, contracted })
    }

    /// Proves both composites are the identity by exact evaluation on an
    /// integer grid large enough to pin the composite forms down. For maps
    /// of degrees `n` and `m` the cross terms have degree `n*m + 1` in the
    /// chart, so an `(n*m + 2)`-per-axis grid of exact checks forces the
    /// polynomial identity.
    pub fn verify_birational(&self) -> Result<()> {
        grid_identity(&self.inverse, &self.forward)?;
        grid_identity(&self.forward, &self.inverse)
    }
}

/// Integer coefficient lists for a form triple under one common scale, so
/// evaluating them componentwise gives genuine image coordinates.
fn integer_triple(forms: &[HomPoly; 3]) -> [Vec<(Mono, Int)>; 3] {
    let mut common = Int::one();
    for f in forms {
        for (_, c) in f.terms() {
            common = num_integer::Integer::lcm(&common, c.denom());
        }
    }
    let scale = |f: &HomPoly| -> Vec<(Mono, Int)> {
        f.terms()
            .map(|(m, c)| (*m, c.numer() * (&common / c.denom())))
            .collect()
    };
    [scale(&forms[0]), scale(&forms[1]), scale(&forms[2])]
}

fn grid_identity(outer: &[HomPoly; 3], inner: &[HomPoly; 3]) -> Result<()> {
    let inner_c = integer_triple(inner);
    let outer_c = integer_triple(outer);
    let side = inner[0].degree() * outer[0].degree() + 2;
    let mut witness = false;
    for a in 0..side {
        for b in 0..side {
            let p = [Int::from(a as u32), Int::from(b as u32), Int::one()];
            let gv = [
                HomPoly::eval_int(&inner_c[0], &p),
                HomPoly::eval_int(&inner_c[1], &p),
                HomPoly::eval_int(&inner_c[2], &p),
            ];
            // A zero image vector means the grid point sits on the base
            // scheme; the composite vanishes there and the cross terms hold
            // trivially.
            if gv.iter().all(Zero::is_zero) {
                continue;
            }
            let fv = [
                HomPoly::eval_int(&outer_c[0], &gv),
                HomPoly::eval_int(&outer_c[1], &gv),
                HomPoly::eval_int(&outer_c[2], &gv),
            ];
            if fv.iter().all(Zero::is_zero) {
                continue;
            }
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                if &fv[i] * &p[j] != &fv[j] * &p[i] {
                    return Err(EngineError::Internal(
                        "composite fails to be the identity at a grid point".into(),
                    ));
                }
            }
            witness = true;
        }
    }
    if !witness {
        return Err(EngineError::Internal(
            "composite vanishes on the whole verification grid".into(),
        ));
    }
    Ok(())
}

/// A chain of maps applied left to right.
#[derive(Clone, Debug, Default)]
pub struct MapSequence {
    pub steps: Vec<CremonaMap>,
}

impl MapSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, step: CremonaMap) {
        self.steps.push(step);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Chains the forward maps; `None` once any step is undefined.
    pub fn apply_point(&self, p: &ProjPoint) -> Option<ProjPoint> {
        let mut cur = p.clone();
        for step in &self.steps {
            cur = step.apply_point(&cur)?;
        }
        Some(cur)
    }

    /// Chains the inverses in reverse order.
    pub fn inverse_point(&self, p: &ProjPoint) -> Option<ProjPoint> {
        let mut cur = p.clone();
        for step in self.steps.iter().rev() {
            cur = step.inverse_point(&cur)?;
        }
        Some(cur)
    }
}
