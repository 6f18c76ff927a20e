//! Coordinate realizations: explicit rational line arrangements for the
//! named families and for arbitrary incidence configurations.
//!
//! Family builders place the special points at fixed reference positions
//! and draw the remaining lines with seeded random parameters, then verify
//! the numerical type of the result and retry on accidental coincidences.
//! The configuration realizer works points-first with the same
//! verify-and-retry loop; it fails honestly on configurations it cannot put
//! into the rational plane.

use crate::arrangement::{CurveType, IncidenceConfig, LineArrangement};
use crate::projective::{join, meet, ProjLine, ProjPoint};
use crate::{EngineError, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The arrangement families the classification handles by name: four with
/// every adjoint system empty and a pencil of lines dropping at most two
/// from the degree, five carrying a pencil that drops three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `(d; d)`: all lines through one point.
    Pencil,
    /// `(d; d-1, 2^(d-1))`: all lines but one through one point.
    NearPencil,
    /// `(d; d-2, 3, 2^(2d-6))`: a pencil of `d-2`, a triple point on the
    /// joining line.
    Drop2Triple,
    /// `(d; d-2, 2^(2d-3))`: a pencil of `d-2` and two free lines.
    Drop2Nodal,
    /// `(d; d-3, 4, 2^(3d-12))`: a pencil of `d-3`, a quadruple point on the
    /// joining line.
    Drop3Quadruple,
    /// `(d; d-3, 3^3, 2^(3d-15))`: a pencil of `d-3` and a triangle whose
    /// vertices are joined to the pencil point.
    Drop3TripleTrio,
    /// `(d; d-3, 3^2, 2^(3d-12))`: a pencil of `d-3` and two triple points.
    Drop3TriplePair,
    /// `(d; d-3, 3, 2^(3d-9))` with a line through both special points.
    Drop3TripleJoin,
    /// `(d; d-3, 3, 2^(3d-9))` with no line through both special points.
    Drop3TripleFree,
    /// `(d; d-3, 2^(3d-6))`: a pencil of `d-3` and a free triangle.
    Drop3Nodal,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Pencil,
        Family::NearPencil,
        Family::Drop2Triple,
        Family::Drop2Nodal,
        Family::Drop3Quadruple,
        Family::Drop3TripleTrio,
        Family::Drop3TriplePair,
        Family::Drop3TripleJoin,
        Family::Drop3TripleFree,
        Family::Drop3Nodal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Pencil => "pencil",
            Family::NearPencil => "near-pencil",
            Family::Drop2Triple => "drop2-triple",
            Family::Drop2Nodal => "drop2-nodal",
            Family::Drop3Quadruple => "drop3-quadruple",
            Family::Drop3TripleTrio => "drop3-triple-trio",
            Family::Drop3TriplePair => "drop3-triple-pair",
            Family::Drop3TripleJoin => "drop3-triple-join",
            Family::Drop3TripleFree => "drop3-triple-free",
            Family::Drop3Nodal => "drop3-nodal",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// Smallest degree at which the construction has all its pieces.
    pub fn min_degree(&self) -> usize {
        match self {
            Family::Pencil => 2,
            Family::NearPencil => 3,
            Family::Drop2Triple => 4,
            Family::Drop2Nodal => 4,
            Family::Drop3Quadruple => 5,
            Family::Drop3TripleTrio => 7,
            Family::Drop3TriplePair => 6,
            Family::Drop3TripleJoin => 5,
            Family::Drop3TripleFree => 5,
            Family::Drop3Nodal => 5,
        }
    }

    /// The numerical type of the family at degree `d`, nodes included.
    pub fn expected_type(&self, d: usize) -> Result<CurveType> {
        if d < self.min_degree() {
            return Err(EngineError::Invalid(format!(
                "family {} needs degree at least {}, got {d}",
                self.name(),
                self.min_degree()
            )));
        }
        let head = match self {
            Family::Pencil => vec![d],
            Family::NearPencil => vec![d - 1],
            Family::Drop2Triple => vec![d - 2, 3],
            Family::Drop2Nodal => vec![d - 2],
            Family::Drop3Quadruple => vec![d - 3, 4],
            Family::Drop3TripleTrio => vec![d - 3, 3, 3, 3],
            Family::Drop3TriplePair => vec![d - 3, 3, 3],
            Family::Drop3TripleJoin | Family::Drop3TripleFree => vec![d - 3, 3],
            Family::Drop3Nodal => vec![d - 3],
        };
        Ok(CurveType::new(d, head)?.completed())
    }
}

fn pencil_line(t: i64) -> ProjLine {
    // Through [0:0:1].
    ProjLine::from_ints(1, t, 0).expect("nonzero coefficients")
}

fn axis_line(s: i64) -> ProjLine {
    // Through [1:0:0].
    ProjLine::from_ints(0, 1, s).expect("nonzero coefficients")
}

fn distinct_ints<R: Rng>(rng: &mut R, count: usize, bound: i64, exclude: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(count);
    while out.len() < count {
        let t = rng.gen_range(-bound..=bound);
        if !exclude.contains(&t) && !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

fn build_family<R: Rng>(family: Family, d: usize, rng: &mut R, bound: i64) -> Vec<ProjLine> {
    let mut lines = Vec::with_capacity(d);
    match family {
        Family::Pencil => {
            for t in distinct_ints(rng, d, bound, &[]) {
                lines.push(pencil_line(t));
            }
        }
        Family::NearPencil => {
            for t in distinct_ints(rng, d - 1, bound, &[]) {
                lines.push(pencil_line(t));
            }
            let (a, b) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
            lines.push(ProjLine::from_ints(a, b, 1).expect("affine line"));
        }
        Family::Drop2Triple => {
            lines.push(ProjLine::from_ints(0, 1, 0).expect("joining line"));
            for t in distinct_ints(rng, d - 3, bound, &[]) {
                lines.push(pencil_line(t));
            }
            for s in distinct_ints(rng, 2, bound, &[0]) {
                lines.push(axis_line(s));
            }
        }
        Family::Drop2Nodal => {
            for t in distinct_ints(rng, d - 2, bound, &[]) {
                lines.push(pencil_line(t));
            }
            for _ in 0..2 {
                let (a, b) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
                lines.push(ProjLine::from_ints(a, b, 1).expect("affine line"));
            }
        }
        Family::Drop3Quadruple => {
            lines.push(ProjLine::from_ints(0, 1, 0).expect("joining line"));
            for t in distinct_ints(rng, d - 4, bound, &[]) {
                lines.push(pencil_line(t));
            }
            for s in distinct_ints(rng, 3, bound, &[0]) {
                lines.push(axis_line(s));
            }
        }
        Family::Drop3TripleTrio => {
            // Triangle, then joins of its vertices to the pencil point.
            let sides: Vec<ProjLine> = (0..3)
                .map(|_| {
                    let (a, b) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
                    ProjLine::from_ints(a, b, 1).expect("affine line")
                })
                .collect();
            let p0 = ProjPoint::from_ints(0, 0, 1).expect("reference point");
            let mut joins = Vec::new();
            for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
                let Ok(v) = meet(&sides[i], &sides[j]) else {
                    return Vec::new();
                };
                if v == p0 {
                    return Vec::new();
                }
                joins.push(join(&p0, &v).expect("vertex differs from the pencil point"));
            }
            lines.extend(sides);
            lines.extend(joins);
            for t in distinct_ints(rng, d - 6, bound, &[]) {
                lines.push(pencil_line(t));
            }
        }
        Family::Drop3TriplePair => {
            lines.push(ProjLine::from_ints(0, 1, 0).expect("join to first point"));
            lines.push(ProjLine::from_ints(1, 0, 0).expect("join to second point"));
            lines.push(ProjLine::from_ints(0, 0, 1).expect("line through both points"));
            lines.push(axis_line(distinct_ints(rng, 1, bound, &[0])[0]));
            let u = distinct_ints(rng, 1, bound, &[0])[0];
            lines.push(ProjLine::from_ints(1, 0, u).expect("line through second point"));
            for t in distinct_ints(rng, d - 5, bound, &[0]) {
                lines.push(pencil_line(t));
            }
        }
        Family::Drop3TripleJoin => {
            lines.push(ProjLine::from_ints(0, 1, 0).expect("joining line"));
            for t in distinct_ints(rng, d - 4, bound, &[]) {
                lines.push(pencil_line(t));
            }
            for s in distinct_ints(rng, 2, bound, &[0]) {
                lines.push(axis_line(s));
            }
            let a = distinct_ints(rng, 1, bound, &[0])[0];
            let b = rng.gen_range(-bound..=bound);
            lines.push(ProjLine::from_ints(a, b, 1).expect("free line"));
        }
        Family::Drop3TripleFree => {
            for t in distinct_ints(rng, d - 3, bound, &[]) {
                lines.push(pencil_line(t));
            }
            for s in distinct_ints(rng, 3, bound, &[0]) {
                lines.push(axis_line(s));
            }
        }
        Family::Drop3Nodal => {
            for t in distinct_ints(rng, d - 3, bound, &[]) {
                lines.push(pencil_line(t));
            }
            for _ in 0..3 {
                let (a, b) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
                lines.push(ProjLine::from_ints(a, b, 1).expect("affine line"));
            }
        }
    }
    lines
}

/// Realizes a family at degree `d` with seeded randomness; the result is
/// verified against the family's numerical type before it is returned.
pub fn realize_family(family: Family, d: usize, seed: u64) -> Result<LineArrangement> {
    let expected = family.expected_type(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..64u32 {
        let bound = 8 + 4 * attempt as i64 + d as i64;
        let lines = build_family(family, d, &mut rng, bound);
        if lines.len() != d {
            continue;
        }
        let Ok(arr) = LineArrangement::new(lines) else {
            continue;
        };
        if arr.curve_type() == expected {
            return Ok(arr);
        }
    }
    Err(EngineError::Internal(format!(
        "failed to realize family {} at degree {d}",
        family.name()
    )))
}

/// Places the blocks of an incidence configuration points-first: determined
/// lines are intersected, free choices are seeded, and the result is kept
/// only if its configuration matches exactly. Unrealizable configurations
/// exhaust the attempts and fail honestly.
pub fn realize_config(cfg: &IncidenceConfig, seed: u64) -> Result<LineArrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..200u32 {
        let bound = 8 + 2 * attempt as i64 + cfg.d as i64;
        if let Some(arr) = try_place(cfg, &mut rng, bound) {
            if &arr.config() == cfg {
                return Ok(arr);
            }
        }
    }
    Err(EngineError::Unsupported(format!(
        "could not realize configuration {cfg}; it may admit no rational realization"
    )))
}

fn random_point<R: Rng>(rng: &mut R, bound: i64) -> Option<ProjPoint> {
    ProjPoint::from_ints(
        rng.gen_range(-bound..=bound),
        rng.gen_range(-bound..=bound),
        1,
    )
    .ok()
}

fn try_place<R: Rng>(cfg: &IncidenceConfig, rng: &mut R, bound: i64) -> Option<LineArrangement> {
    let nblocks = cfg.blocks.len();
    let mut points: Vec<Option<ProjPoint>> = vec![None; nblocks];
    let mut lines: Vec<Option<ProjLine>> = vec![None; cfg.d];
    let blocks_of_line: Vec<Vec<usize>> = (0..cfg.d)
        .map(|i| {
            (0..nblocks)
                .filter(|&b| cfg.blocks[b].contains(&i))
                .collect()
        })
        .collect();

    loop {
        let mut progressed = false;

        // Lines with two placed points are determined.
        for i in 0..cfg.d {
            if lines[i].is_some() {
                continue;
            }
            let placed: Vec<&ProjPoint> = blocks_of_line[i]
                .iter()
                .filter_map(|&b| points[b].as_ref())
                .collect();
            if placed.len() >= 2 {
                let l = join(placed[0], placed[1]).ok()?;
                if placed.iter().any(|p| !l.contains(p)) {
                    return None;
                }
                lines[i] = Some(l);
                progressed = true;
            }
        }

        // Points with two determined lines are forced.
        for (b, block) in cfg.blocks.iter().enumerate() {
            if points[b].is_some() {
                continue;
            }
            let determined: Vec<&ProjLine> = block
                .iter()
                .filter_map(|&i| lines[i].as_ref())
                .collect();
            if determined.len() >= 2 {
                let p = meet(determined[0], determined[1]).ok()?;
                if determined.iter().any(|l| !l.contains(&p)) {
                    return None;
                }
                points[b] = Some(p);
                progressed = true;
            }
        }

        if progressed {
            continue;
        }

        // No forced moves left: give the most constrained unplaced block a
        // free choice.
        let next = (0..nblocks).filter(|&b| points[b].is_none()).max_by_key(|&b| {
            cfg.blocks[b]
                .iter()
                .filter(|&&i| lines[i].is_some())
                .count()
        });
        match next {
            Some(b) => {
                let on_line = cfg.blocks[b]
                    .iter()
                    .find_map(|&i| lines[i].clone());
                let p = match on_line {
                    Some(l) => {
                        let q1 = random_point(rng, bound)?;
                        let q2 = random_point(rng, bound)?;
                        if q1 == q2 {
                            return None;
                        }
                        let transversal = join(&q1, &q2).ok()?;
                        meet(&l, &transversal).ok()?
                    }
                    None => random_point(rng, bound)?,
                };
                if points.iter().flatten().any(|q| q == &p) {
                    return None;
                }
                points[b] = Some(p);
            }
            None => break,
        }
    }

    // Fill the remaining free lines.
    let mut out = Vec::with_capacity(cfg.d);
    for i in 0..cfg.d {
        let l = match &lines[i] {
            Some(l) => l.clone(),
            None => {
                let anchored: Vec<&ProjPoint> = blocks_of_line[i]
                    .iter()
                    .filter_map(|&b| points[b].as_ref())
                    .collect();
                match anchored.len() {
                    0 => join(&random_point(rng, bound)?, &random_point(rng, bound)?).ok()?,
                    1 => join(anchored[0], &random_point(rng, bound)?).ok()?,
                    _ => unreachable!("two anchored points determine the line earlier"),
                }
            }
        };
        out.push(l);
    }
    LineArrangement::new(out).ok()
}
