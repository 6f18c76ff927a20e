//! Linear systems of plane curves with assigned base conditions.
//!
//! A system is specified by a degree, a finite set of points with
//! multiplicities, and optionally one tangent-direction condition. The
//! dimension pipeline peels off exact reductions before touching linear
//! algebra:
//!
//! 1. negative degree, or a multiplicity exceeding the degree: empty;
//! 2. a point of multiplicity equal to the degree: every member is a union
//!    of lines through it, and the dimension is a closed count over the
//!    forced directions;
//! 3. a line whose conditions sum past the degree splits off as a fixed
//!    component, which preserves the dimension exactly;
//! 4. what remains goes to an integer interpolation matrix whose rank is
//!    certified modulo large primes, with kernel members reconstructed over
//!    the rationals and re-verified exactly.
//!
//! Dimensions are projective throughout: the empty system has dimension -1
//! and a unique member gives dimension 0.

pub mod exact;
pub mod modrank;
pub mod rows;

use crate::arrangement::LineArrangement;
use crate::poly::{monomials_of_degree, HomPoly};
use crate::projective::{join, ProjLine, ProjPoint};
use crate::rational::Rational;
use crate::{EngineError, Result};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A tangent-direction condition: the strict transform after blowing up
/// `point` must meet the exceptional line at the direction marked by
/// `direction`, with multiplicity at least `order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentCondition {
    pub point: ProjPoint,
    pub direction: ProjLine,
    pub order: usize,
}

/// Specification of a linear system of plane curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystemSpec {
    pub degree: i64,
    /// Distinct points with multiplicities, sorted by descending
    /// multiplicity then by point.
    pub points: Vec<(ProjPoint, usize)>,
    pub tangent: Option<TangentCondition>,
}

impl LinearSystemSpec {
    pub fn new(degree: i64, points: Vec<(ProjPoint, usize)>) -> Result<Self> {
        let mut pts: Vec<(ProjPoint, usize)> =
            points.into_iter().filter(|(_, m)| *m > 0).collect();
        pts.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        for w in pts.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(EngineError::Invalid(format!(
                    "repeated condition point {}",
                    w[0].0
                )));
            }
        }
        Ok(LinearSystemSpec { degree, points: pts, tangent: None })
    }

    pub fn with_tangent(mut self, tangent: TangentCondition) -> Result<Self> {
        if !tangent.direction.contains(&tangent.point) {
            return Err(EngineError::Invalid(
                "tangent direction must pass through its point".into(),
            ));
        }
        if tangent.order == 0 {
            return Err(EngineError::Invalid("tangent order must be positive".into()));
        }
        self.tangent = Some(tangent);
        Ok(self)
    }

    /// Expected dimension: the count of coefficients minus the count of
    /// imposed conditions, minus one. Clamped to -1 for negative degree.
    pub fn virtual_dim(&self) -> i64 {
        if self.degree < 0 {
            return -1;
        }
        let d = self.degree;
        let mut v = d * (d + 3) / 2;
        for (_, mu) in &self.points {
            let mu = *mu as i64;
            v -= mu * (mu + 1) / 2;
        }
        if let Some(t) = &self.tangent {
            let nu = t.order as i64;
            v -= nu * (nu + 1) / 2;
        }
        v
    }
}

/// How a dimension was decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimMethod {
    /// Degree is negative.
    NegativeDegree,
    /// Some multiplicity exceeds the degree.
    ExcessMultiplicity,
    /// No conditions remained.
    Unconstrained,
    /// A full-multiplicity point forces a union of lines through it.
    Cone,
    /// Rank certified modulo primes with an exactly verified kernel.
    ModularRank { primes: usize },
    /// Dense rational elimination.
    ExactRank,
}

/// Result of the dimension pipeline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimReport {
    pub dim: i64,
    pub method: DimMethod,
    /// Lines split off as fixed components, with multiplicities.
    pub fixed_components: Vec<(ProjLine, usize)>,
    /// A member of the system when nonempty, fixed components included.
    pub member: Option<HomPoly>,
}

/// Dimension of the system, conditions taken as actually imposed.
pub fn actual_dim(spec: &LinearSystemSpec) -> Result<i64> {
    Ok(dim_report(spec, &[])?.dim)
}

/// Full pipeline. `hints` are candidate fixed-component lines to test in
/// addition to joins of condition points; passing the lines of an ambient
/// arrangement speeds the cascade up but never changes the answer.
pub fn dim_report(spec: &LinearSystemSpec, hints: &[ProjLine]) -> Result<DimReport> {
    if spec.degree < 0 {
        return Ok(DimReport {
            dim: -1,
            method: DimMethod::NegativeDegree,
            fixed_components: Vec::new(),
            member: None,
        });
    }
    let mut degree = spec.degree as usize;
    let mut points: Vec<(ProjPoint, usize)> = spec.points.clone();
    let mut fixed: BTreeMap<ProjLine, usize> = BTreeMap::new();

    if spec.tangent.is_none() {
        // Candidate fixed components: supplied hints plus joins of pairs.
        let mut candidates: Vec<ProjLine> = hints.to_vec();
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                candidates.push(join(&points[i].0, &points[j].0)?);
            }
        }
        candidates.sort();
        candidates.dedup();

        loop {
            if let Some(report) = settle_without_rank(degree, &points, &fixed)? {
                return Ok(report);
            }
            // Split off one copy of a line whose conditions exceed the degree.
            let split = candidates.iter().find(|line| {
                let s: i64 = points
                    .iter()
                    .filter(|(p, _)| line.contains(p))
                    .map(|(_, mu)| *mu as i64)
                    .sum();
                s > degree as i64
            });
            match split {
                Some(line) => {
                    *fixed.entry(line.clone()).or_insert(0) += 1;
                    degree -= 1;
                    for (p, mu) in points.iter_mut() {
                        if line.contains(p) {
                            *mu -= 1;
                        }
                    }
                    points.retain(|(_, mu)| *mu > 0);
                }
                None => break,
            }
        }
    } else if let Some(report) = trivial_emptiness(degree, &points) {
        return Ok(report);
    }

    rank_stage(spec, degree, points, fixed)
}

/// Rank-only path: no cone shortcut, no fixed-component cascade. Serves as
/// an independent check of the reductions.
pub fn dim_report_rank_only(spec: &LinearSystemSpec) -> Result<DimReport> {
    if spec.degree < 0 {
        return Ok(DimReport {
            dim: -1,
            method: DimMethod::NegativeDegree,
            fixed_components: Vec::new(),
            member: None,
        });
    }
    rank_stage(spec, spec.degree as usize, spec.points.clone(), BTreeMap::new())
}

/// Emptiness decidable without elimination: a multiplicity above the degree.
fn trivial_emptiness(degree: usize, points: &[(ProjPoint, usize)]) -> Option<DimReport> {
    if points.iter().any(|(_, mu)| *mu > degree) {
        return Some(DimReport {
            dim: -1,
            method: DimMethod::ExcessMultiplicity,
            fixed_components: Vec::new(),
            member: None,
        });
    }
    None
}

/// Stages that decide the system outright: excess multiplicity and the
/// full-multiplicity cone. Returns None when elimination is still needed.
fn settle_without_rank(
    degree: usize,
    points: &[(ProjPoint, usize)],
    fixed: &BTreeMap<ProjLine, usize>,
) -> Result<Option<DimReport>> {
    if let Some(mut report) = trivial_emptiness(degree, points) {
        report.fixed_components = fixed_vec(fixed);
        return Ok(Some(report));
    }
    if points.is_empty() {
        return Ok(None);
    }
    let Some((apex, _)) = points.iter().find(|(_, mu)| *mu == degree) else {
        return Ok(None);
    };
    debug_assert!(degree >= 1, "degree 0 with a condition is excess multiplicity");
    // Every member is a product of `degree` lines through the apex. Each
    // other condition point forces its joining line with the apex to appear
    // with multiplicity at least the maximum over its direction.
    let mut needs: BTreeMap<ProjLine, usize> = BTreeMap::new();
    for (q, mu) in points {
        if q == apex {
            continue;
        }
        let dir = join(apex, q)?;
        let e = needs.entry(dir).or_insert(0);
        *e = (*e).max(*mu);
    }
    let total: usize = needs.values().sum();
    if total > degree {
        return Ok(Some(DimReport {
            dim: -1,
            method: DimMethod::Cone,
            fixed_components: fixed_vec(fixed),
            member: None,
        }));
    }
    let slack = degree - total;
    // Witness: the forced directions, padded with fresh lines through the
    // apex that avoid every other condition point.
    let mut member = HomPoly::constant_one();
    for (line, k) in &needs {
        member = member.mul(&HomPoly::from_line(line).pow(*k));
    }
    for line in fill_lines(apex, slack, points, &needs)? {
        member = member.mul(&HomPoly::from_line(&line));
    }
    let member = attach_fixed(member, fixed);
    Ok(Some(DimReport {
        dim: slack as i64,
        method: DimMethod::Cone,
        fixed_components: fixed_vec(fixed),
        member: Some(member),
    }))
}

/// Deterministic fresh lines through `apex`: distinct, different from the
/// forced directions, passing through no other condition point.
fn fill_lines(
    apex: &ProjPoint,
    count: usize,
    points: &[(ProjPoint, usize)],
    forced: &BTreeMap<ProjLine, usize>,
) -> Result<Vec<ProjLine>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    // Parametrize directions by points of a fixed line missing the apex.
    let screen = [
        ProjLine::from_ints(1, 0, 0)?,
        ProjLine::from_ints(0, 1, 0)?,
        ProjLine::from_ints(0, 0, 1)?,
    ]
    .into_iter()
    .find(|l| !l.contains(apex))
    .expect("a coordinate line misses any point");
    let (u, v) = screen.two_points();
    let mut out = Vec::with_capacity(count);
    let mut t: i64 = 0;
    while out.len() < count {
        let q = if t == 0 {
            v.clone()
        } else {
            u.combination(&v, &Rational::from_integer((t - 1).into()))
        };
        t += 1;
        if q == *apex {
            continue;
        }
        let line = join(apex, &q)?;
        if forced.contains_key(&line) || out.contains(&line) {
            continue;
        }
        if points.iter().any(|(p, _)| p != apex && line.contains(p)) {
            continue;
        }
        out.push(line);
    }
    Ok(out)
}

fn fixed_vec(fixed: &BTreeMap<ProjLine, usize>) -> Vec<(ProjLine, usize)> {
    fixed.iter().map(|(l, k)| (l.clone(), *k)).collect()
}

fn attach_fixed(reduced: HomPoly, fixed: &BTreeMap<ProjLine, usize>) -> HomPoly {
    let mut f = reduced;
    for (line, k) in fixed {
        f = f.mul(&HomPoly::from_line(line).pow(*k));
    }
    f
}

/// Elimination stage on the reduced system.
fn rank_stage(
    spec: &LinearSystemSpec,
    degree: usize,
    points: Vec<(ProjPoint, usize)>,
    fixed: BTreeMap<ProjLine, usize>,
) -> Result<DimReport> {
    let tangent = spec
        .tangent
        .as_ref()
        .map(|t| (t.point.clone(), t.direction.clone(), t.order));
    let matrix = rows::condition_matrix(degree, &points, tangent.as_ref())?;
    if matrix.rows.is_empty() {
        let monos = monomials_of_degree(degree);
        let member = attach_fixed(
            HomPoly::from_terms(degree, vec![(monos[0], Rational::one())])
                .expect("monomial member"),
            &fixed,
        );
        return Ok(DimReport {
            dim: monos.len() as i64 - 1,
            method: DimMethod::Unconstrained,
            fixed_components: fixed_vec(&fixed),
            member: Some(member),
        });
    }
    let (rank, basis, method) = match modrank::certified_kernel(&matrix) {
        Some(ck) => {
            let primes = ck.primes_used;
            (ck.rank, ck.basis, DimMethod::ModularRank { primes })
        }
        None => {
            let (rank, basis) = exact::kernel_exact(&matrix);
            (rank, basis, DimMethod::ExactRank)
        }
    };
    let dim = matrix.ncols as i64 - rank as i64 - 1;
    let member = if dim >= 0 {
        let monos = monomials_of_degree(degree);
        let coeffs = &basis[0];
        let terms: Vec<_> = monos
            .iter()
            .zip(coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        let f = HomPoly::from_terms(degree, terms)?;
        Some(attach_fixed(f.normalized(), &fixed))
    } else {
        None
    };
    Ok(DimReport { dim, method, fixed_components: fixed_vec(&fixed), member })
}

/// Check a form against every condition of a specification, exactly. The
/// form must have the specified degree and satisfy each interpolation row.
pub fn member_satisfies(spec: &LinearSystemSpec, f: &HomPoly) -> Result<bool> {
    if spec.degree < 0 || f.is_zero() {
        return Ok(false);
    }
    let degree = spec.degree as usize;
    if f.degree() != degree {
        return Ok(false);
    }
    let tangent = spec
        .tangent
        .as_ref()
        .map(|t| (t.point.clone(), t.direction.clone(), t.order));
    let matrix = rows::condition_matrix(degree, &spec.points, tangent.as_ref())?;
    let monos = monomials_of_degree(degree);
    let v: Vec<Rational> = monos.iter().map(|m| f.coeff(*m)).collect();
    Ok(matrix.apply(&v).iter().all(|x| x.is_zero()))
}

/// The adjoint system of level (n, m) for a curve of degree `d` with the
/// given singular points: degree n d - 3 m, with condition n k - m at each
/// point of multiplicity k, conditions of value below one dropped.
pub fn adjoint_system(
    d: usize,
    singular: &[(ProjPoint, usize)],
    n: usize,
    m: usize,
) -> Result<LinearSystemSpec> {
    if n < 1 || m < n {
        return Err(EngineError::Invalid(format!(
            "adjoint level requires m >= n >= 1, got n={n} m={m}"
        )));
    }
    let degree = (n * d) as i64 - 3 * m as i64;
    let points: Vec<(ProjPoint, usize)> = singular
        .iter()
        .filter_map(|(p, k)| {
            let c = (n * k) as i64 - m as i64;
            (c >= 1).then(|| (p.clone(), c as usize))
        })
        .collect();
    LinearSystemSpec::new(degree, points)
}

/// Adjoint dimension for a line arrangement.
pub fn adjoint_dim(arr: &LineArrangement, n: usize, m: usize) -> Result<i64> {
    Ok(adjoint_report(arr, n, m)?.dim)
}

/// Singular points of an arrangement as a plain multiplicity inventory.
pub fn singular_inventory(arr: &LineArrangement) -> Vec<(ProjPoint, usize)> {
    arr.singular_points()
        .into_iter()
        .map(|s| {
            let m = s.multiplicity();
            (s.point, m)
        })
        .collect()
}

/// Adjoint dimension with evidence, arrangement lines passed as hints.
pub fn adjoint_report(arr: &LineArrangement, n: usize, m: usize) -> Result<DimReport> {
    let singular = singular_inventory(arr);
    let spec = adjoint_system(arr.degree(), &singular, n, m)?;
    dim_report(&spec, arr.lines())
}

/// The adjoint dimension sequence at level n: dimensions for m = n, n+1, ...
/// The recorded sequence ends at its first -1; degrees below zero are empty
/// outright, so the sequence is always finite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdjointSequence {
    pub n: usize,
    pub start_m: usize,
    pub dims: Vec<i64>,
}

impl AdjointSequence {
    /// The m at which the sequence hit -1.
    pub fn first_empty_m(&self) -> usize {
        self.start_m + self.dims.len() - 1
    }
}

pub fn adjoint_sequence(arr: &LineArrangement, n: usize) -> Result<AdjointSequence> {
    let d = arr.degree();
    let singular = singular_inventory(arr);
    let mut dims = Vec::new();
    let mut m = n;
    loop {
        let dim = if ((n * d) as i64) < 3 * m as i64 {
            -1
        } else {
            let spec = adjoint_system(d, &singular, n, m)?;
            dim_report(&spec, arr.lines())?.dim
        };
        dims.push(dim);
        if dim == -1 {
            break;
        }
        m += 1;
    }
    Ok(AdjointSequence { n, start_m: n, dims })
}

/// Exhaustive scan of the first-level adjoints ad_{1,m} for every m with
/// nonnegative degree. For a reducible curve the sequence can come back to
/// life after a -1 (a fixed-component cascade can kill a low m while a
/// higher m survives as a cone), so deciding that every first-level adjoint
/// is empty requires the full scan, not the sequence above.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VanishingAdjoints {
    pub d: usize,
    /// Dimension of ad_{1,m} for m = 1 ..= floor(d/3).
    pub dims: Vec<i64>,
    pub all_vanish: bool,
    pub first_nonempty_m: Option<usize>,
}

pub fn vanishing_adjoints(arr: &LineArrangement) -> Result<VanishingAdjoints> {
    let d = arr.degree();
    let singular = singular_inventory(arr);
    let mut dims = Vec::new();
    let mut first = None;
    for m in 1..=(d / 3) {
        let spec = adjoint_system(d, &singular, 1, m)?;
        let dim = dim_report(&spec, arr.lines())?.dim;
        if dim >= 0 && first.is_none() {
            first = Some(m);
        }
        dims.push(dim);
    }
    Ok(VanishingAdjoints { d, all_vanish: first.is_none(), first_nonempty_m: first, dims })
}

/// The m-th logarithmic plurigenus: one more than the dimension of the
/// adjoint system at level (m, m), zero when that system is empty.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Plurigenus {
    pub m: usize,
    pub value: u64,
    pub witness: Option<HomPoly>,
}

pub fn log_plurigenus(arr: &LineArrangement, m: usize) -> Result<Plurigenus> {
    let report = adjoint_report(arr, m, m)?;
    let value = (report.dim + 1).max(0) as u64;
    Ok(Plurigenus { m, value, witness: report.member })
}

/// Bounded test of the logarithmic Kodaira dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum KodairaVerdict {
    /// Every plurigenus up to the bound vanishes.
    NegativeUpTo { bound: usize },
    /// A positive plurigenus was found.
    NonNegative { m: usize, plurigenus: u64, witness: Option<HomPoly> },
}

pub fn kodaira_bounded(arr: &LineArrangement, bound: usize) -> Result<KodairaVerdict> {
    for m in 1..=bound {
        let p = log_plurigenus(arr, m)?;
        if p.value > 0 {
            return Ok(KodairaVerdict::NonNegative {
                m,
                plurigenus: p.value,
                witness: p.witness,
            });
        }
    }
    Ok(KodairaVerdict::NegativeUpTo { bound })
}
