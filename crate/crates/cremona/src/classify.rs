//! The classification pipeline: family recognition, adjoint vanishing,
//! Kodaira verdict, and the contractibility decision with its evidence.
//!
//! Contractible families are handled by explicit step recipes that reduce
//! the arrangement degree by degree, each step checked against the claimed
//! image type at apply time and the whole sequence replayed afterwards.
//! Non-contractible families get an explicit adjoint member built from the
//! component lines; its verification is what certifies the verdict, since a
//! nonempty adjoint system survives every Cremona transformation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{CurveType, IncidenceConfig, LineArrangement};
use crate::certificate::{
    advance_settled, verify_contraction, verify_witness, AdjointWitness, ContractionCertificate,
    ContractionStep, MapStep,
};
use crate::linsys::{
    adjoint_dim, adjoint_sequence, kodaira_bounded, log_plurigenus, vanishing_adjoints,
    AdjointSequence, KodairaVerdict, VanishingAdjoints,
};
use crate::projective::{collinear, join, meet, ProjLine, ProjPoint};
use crate::rational::{Int, Rational};
use crate::realize::Family;
use crate::{EngineError, Result};

/// Options controlling the classification pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Largest m for which log plurigenera are tested in the Kodaira step.
    pub kodaira_bound: usize,
    /// Depth budget for the search fallback at low degree.
    pub search_depth: usize,
    /// Beam width for the search fallback.
    pub search_width: usize,
    /// Seed for every randomized construction in the pipeline.
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            kodaira_bound: 12,
            search_depth: 6,
            search_width: 64,
            seed: 0,
        }
    }
}

/// Rank evidence that one adjoint system is nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonemptyAdjoint {
    pub n: usize,
    pub m: usize,
    /// Projective dimension of the system, at least 0.
    pub dim: i64,
}

/// The contractibility verdict together with its checkable evidence.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Contractibility {
    /// A replay-verified sequence of Cremona maps contracts every component.
    Contractible { certificate: ContractionCertificate },
    /// Some adjoint system is nonempty, and nonemptiness is preserved by
    /// every Cremona map, so no contraction can exist. A product witness is
    /// included when the family recipe provides one.
    NotContractible {
        witness: Option<AdjointWitness>,
        nonempty_adjoint: NonemptyAdjoint,
    },
    /// Neither a recipe nor the bounded search settled the question.
    Unknown { reason: String },
}

/// Full classification record for one arrangement.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub degree: usize,
    pub curve_type: CurveType,
    pub config: IncidenceConfig,
    /// Name of the recognized family, when the arrangement belongs to one.
    pub family: Option<String>,
    /// Whether every adjoint system of the first adjunction level is empty.
    pub vanishing_adjoints: bool,
    /// Dimension scan behind the vanishing flag.
    pub adjoint_scan: VanishingAdjoints,
    /// The level-one adjoint dimension sequence up to its first empty term.
    pub adjoint_sequence: AdjointSequence,
    pub kodaira: KodairaVerdict,
    pub contractible: Contractibility,
}

/// Identifies which named family an arrangement belongs to, if any.
///
/// The numerical type separates all families except the two with a triple
/// point next to a pencil of d-3 lines; those are told apart by whether a
/// component passes through both distinguished points.
pub fn recognize(arr: &LineArrangement) -> Option<Family> {
    let t = arr.curve_type();
    let d = t.d;
    for fam in Family::ALL {
        if d < fam.min_degree() {
            continue;
        }
        let Ok(expected) = fam.expected_type(d) else {
            continue;
        };
        if expected != t {
            continue;
        }
        match fam {
            Family::Drop3TripleJoin | Family::Drop3TripleFree => {
                if (fam == Family::Drop3TripleJoin) == has_joining_line(arr) {
                    return Some(fam);
                }
            }
            _ => return Some(fam),
        }
    }
    None
}

/// Whether some component passes through both of the two leading singular
/// points.
fn has_joining_line(arr: &LineArrangement) -> bool {
    let sing = arr.singular_points();
    if sing.len() < 2 {
        return false;
    }
    let p0 = &sing[0].point;
    let p1 = &sing[1].point;
    arr.lines().iter().any(|l| l.contains(p0) && l.contains(p1))
}

/// Runs the whole pipeline on one arrangement.
///
/// At degree 12 and above, family membership and the adjoint rank scan are
/// two independent routes to the same dichotomy; the pipeline insists they
/// agree and reports an internal error otherwise.
pub fn classify(arr: &LineArrangement, opts: &ClassifyOptions) -> Result<Classification> {
    let d = arr.degree();
    let fam = recognize(arr);
    let seq = adjoint_sequence(arr, 1)?;
    let scan = vanishing_adjoints(arr)?;
    let kodaira = kodaira_bounded(arr, opts.kodaira_bound)?;

    if d >= 12 && fam.is_some() != scan.all_vanish {
        return Err(EngineError::Internal(format!(
            "family recognition ({:?}) and adjoint vanishing ({}) disagree at degree {d}",
            fam.map(|f| f.name()),
            scan.all_vanish
        )));
    }

    let contractible = decide_contractibility(arr, fam, &scan, opts)?;
    Ok(Classification {
        degree: d,
        curve_type: arr.curve_type(),
        config: arr.config(),
        family: fam.map(|f| f.name().to_string()),
        vanishing_adjoints: scan.all_vanish,
        adjoint_scan: scan,
        adjoint_sequence: seq,
        kodaira,
        contractible,
    })
}

/// Classification with default options.
pub fn classify_default(arr: &LineArrangement) -> Result<Classification> {
    classify(arr, &ClassifyOptions::default())
}

fn decide_contractibility(
    arr: &LineArrangement,
    fam: Option<Family>,
    scan: &VanishingAdjoints,
    opts: &ClassifyOptions,
) -> Result<Contractibility> {
    let d = arr.degree();
    match fam {
        Some(
            Family::Pencil | Family::NearPencil | Family::Drop2Triple | Family::Drop2Nodal,
        ) => {
            return Ok(Contractibility::Contractible {
                certificate: contract(arr, opts.seed)?,
            });
        }
        Some(Family::Drop3TripleJoin) if d == 9 => {
            return Ok(Contractibility::Contractible {
                certificate: contract(arr, opts.seed)?,
            });
        }
        Some(f) if witness_min_degree(f).is_some_and(|min| d >= min) => {
            let witness = noncontract_witness(arr)?;
            let dim = adjoint_dim(arr, 2, 3)?;
            return Ok(Contractibility::NotContractible {
                witness: Some(witness),
                nonempty_adjoint: NonemptyAdjoint { n: 2, m: 3, dim },
            });
        }
        _ => {}
    }
    if let Some(m) = scan.first_nonempty_m {
        return Ok(Contractibility::NotContractible {
            witness: None,
            nonempty_adjoint: NonemptyAdjoint {
                n: 1,
                m,
                dim: scan.dims[m - 1],
            },
        });
    }
    if d <= 7 {
        let found =
            crate::search::search_contraction(arr, opts.search_depth, opts.search_width, opts.seed)?;
        return Ok(match found {
            Some(certificate) => Contractibility::Contractible { certificate },
            None => Contractibility::Unknown {
                reason: format!(
                    "adjoints vanish up to the scan bound and a depth-{} search found no contraction",
                    opts.search_depth
                ),
            },
        });
    }
    Ok(Contractibility::Unknown {
        reason: "no recipe applies and the degree exceeds the search range".into(),
    })
}

/// Smallest degree at which the product witness for a non-contractible
/// family can be assembled; `None` for the contractible families.
pub(crate) fn witness_min_degree(f: Family) -> Option<usize> {
    match f {
        Family::Drop3Quadruple | Family::Drop3TripleJoin => Some(10),
        Family::Drop3TripleTrio => Some(12),
        Family::Drop3TriplePair => Some(11),
        Family::Drop3TripleFree | Family::Drop3Nodal => Some(9),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Contraction recipes
// ---------------------------------------------------------------------------

/// Expected image type from a degree and the multiplicities that stay
/// above 1; node counts are filled in by completion.
fn type_of(d: usize, head: &[usize]) -> Result<CurveType> {
    let mults: Vec<usize> = head.iter().copied().filter(|&m| m >= 2).collect();
    Ok(CurveType::new(d, mults)?.completed())
}

fn int_rat(k: i64) -> Rational {
    Rational::from_integer(Int::from(k))
}

/// Deterministic random point on a line avoiding the listed points.
pub(crate) fn random_point_on<R: Rng>(rng: &mut R, l: &ProjLine, avoid: &[ProjPoint]) -> ProjPoint {
    let (a, b) = l.two_points();
    let mut attempt = 0i64;
    loop {
        attempt += 1;
        let bound = 12 + attempt / 2;
        let t = int_rat(rng.gen_range(-bound..=bound));
        let p = a.combination(&b, &t);
        if !avoid.contains(&p) {
            return p;
        }
    }
}

/// Deterministic random point off all the listed lines and points.
pub(crate) fn random_point_off<R: Rng>(
    rng: &mut R,
    lines: &[ProjLine],
    avoid: &[ProjPoint],
) -> Result<ProjPoint> {
    let mut attempt = 0i64;
    loop {
        attempt += 1;
        let bound = 12 + attempt / 2;
        let p = ProjPoint::new([
            int_rat(rng.gen_range(-bound..=bound)),
            int_rat(rng.gen_range(-bound..=bound)),
            int_rat(1),
        ])?;
        if lines.iter().all(|l| !l.contains(&p)) && !avoid.contains(&p) {
            return Ok(p);
        }
    }
}

/// Claimed shape of a contraction step's image.
enum ImageClaim {
    /// Everything is contracted by this step.
    Empty,
    /// The surviving components form exactly this type.
    Type(CurveType),
}

/// Running state of a recipe-driven contraction.
///
/// `apply` is transactional: on failure the state is untouched, so recipes
/// can iterate over their free choices.
#[derive(Clone)]
pub(crate) struct Contractor {
    initial_type: CurveType,
    lines: Vec<ProjLine>,
    steps: Vec<ContractionStep>,
    current: Option<LineArrangement>,
    /// For each current line, the index of the input component it came from.
    origin: Vec<usize>,
    /// Images of already contracted components, by input index.
    settled: Vec<(usize, ProjPoint)>,
    rng: ChaCha8Rng,
}

type ContractorSnapshot = (
    Vec<ContractionStep>,
    Option<LineArrangement>,
    Vec<usize>,
    Vec<(usize, ProjPoint)>,
);

impl Contractor {
    pub(crate) fn new(arr: &LineArrangement, seed: u64) -> Self {
        Contractor {
            initial_type: arr.curve_type(),
            lines: arr.lines().to_vec(),
            steps: Vec::new(),
            current: Some(arr.clone()),
            origin: (0..arr.degree()).collect(),
            settled: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn snapshot(&self) -> ContractorSnapshot {
        (
            self.steps.clone(),
            self.current.clone(),
            self.origin.clone(),
            self.settled.clone(),
        )
    }

    fn restore(&mut self, snap: ContractorSnapshot) {
        self.steps = snap.0;
        self.current = snap.1;
        self.origin = snap.2;
        self.settled = snap.3;
    }

    pub(crate) fn settled_points(&self) -> Vec<ProjPoint> {
        self.settled.iter().map(|(_, p)| p.clone()).collect()
    }

    pub(crate) fn is_settled(&self, p: &ProjPoint) -> bool {
        self.settled.iter().any(|(_, q)| q == p)
    }

    pub(crate) fn current(&self) -> Option<&LineArrangement> {
        self.current.as_ref()
    }

    pub(crate) fn steps_len(&self) -> usize {
        self.steps.len()
    }

    /// Current image line of the input component `idx`.
    fn line_by_origin(&self, idx: usize) -> Result<ProjLine> {
        let cur = self
            .current
            .as_ref()
            .ok_or_else(|| EngineError::Internal("arrangement already fully contracted".into()))?;
        let pos = self
            .origin
            .iter()
            .position(|&o| o == idx)
            .ok_or_else(|| EngineError::Internal(format!("component {idx} already contracted")))?;
        Ok(cur.lines()[pos].clone())
    }

    fn apply(&mut self, step: MapStep, claim: ImageClaim) -> Result<()> {
        self.apply_checked(step, Some(claim))
    }

    /// Applies a step accepting whatever image it produces; geometric
    /// legality (no blown-back settled points, image still an arrangement)
    /// is still enforced.
    pub(crate) fn apply_any(&mut self, step: MapStep) -> Result<()> {
        self.apply_checked(step, None)
    }

    fn apply_checked(&mut self, step: MapStep, claim: Option<ImageClaim>) -> Result<()> {
        let cur = self.current.clone().ok_or_else(|| {
            EngineError::Internal("contraction continued past an empty arrangement".into())
        })?;
        let map = step.build()?;
        let mut new_settled = Vec::with_capacity(self.settled.len() + 3);
        for (idx, p) in &self.settled {
            let q = advance_settled(&map, p)
                .map_err(|m| EngineError::Construction(format!("component {idx} {m}")))?;
            new_settled.push((*idx, q));
        }
        let image = map.apply_to_arrangement(&cur)?;
        for (ci, pt) in &image.contracted {
            new_settled.push((self.origin[*ci], pt.clone()));
        }
        let new_origin: Vec<usize> = image.lines.iter().map(|(ci, _)| self.origin[*ci]).collect();
        let (next, image_type) = if image.lines.is_empty() {
            (None, None)
        } else {
            let next = image.arrangement()?;
            let t = next.curve_type();
            (Some(next), Some(t))
        };
        let ok = match (&claim, &image_type) {
            (None, _) => true,
            (Some(ImageClaim::Empty), None) => true,
            (Some(ImageClaim::Type(want)), Some(got)) => want == got,
            _ => false,
        };
        if !ok {
            let got = image_type
                .as_ref()
                .map(|t| t.to_string())
                .unwrap_or_else(|| "an empty image".into());
            let want = match &claim {
                Some(ImageClaim::Empty) | None => "an empty image".into(),
                Some(ImageClaim::Type(t)) => t.to_string(),
            };
            return Err(EngineError::Construction(format!(
                "contraction step produced {got}, expected {want}"
            )));
        }
        self.steps.push(ContractionStep {
            map: step,
            image_type,
        });
        self.current = next;
        self.origin = new_origin;
        self.settled = new_settled;
        Ok(())
    }

    pub(crate) fn finish(self) -> Result<ContractionCertificate> {
        if self.current.is_some() {
            return Err(EngineError::Internal(
                "contraction finished with components remaining".into(),
            ));
        }
        let mut settled = self.settled;
        settled.sort_by_key(|(i, _)| *i);
        Ok(ContractionCertificate {
            initial_type: self.initial_type,
            lines: self.lines,
            steps: self.steps,
            terminal: settled.into_iter().map(|(_, p)| p).collect(),
        })
    }
}

/// Contracts an arrangement of a supported family to points.
///
/// Dispatches on the recognized family of the current image after every
/// step, so each recipe only needs to handle one reduction; the sequence
/// bottoms out in the one-step pencil and near-pencil contractions. The
/// returned certificate has already been replayed once from scratch.
pub fn contract(arr: &LineArrangement, seed: u64) -> Result<ContractionCertificate> {
    let mut c = Contractor::new(arr, seed);
    let mut guard = 0usize;
    while let Some(cur) = c.current.clone() {
        guard += 1;
        if guard > arr.degree() + 6 {
            return Err(EngineError::Internal(
                "contraction exceeded its step budget".into(),
            ));
        }
        if cur.degree() == 1 {
            single_line_step(&mut c, &cur)?;
            continue;
        }
        let Some(fam) = recognize(&cur) else {
            return Err(EngineError::Unsupported(format!(
                "no contraction recipe applies to type {}",
                cur.curve_type()
            )));
        };
        match fam {
            Family::Pencil if cur.degree() == 2 => two_line_step(&mut c, &cur)?,
            Family::Pencil => pencil_step(&mut c, &cur)?,
            Family::NearPencil => near_pencil_step(&mut c, &cur)?,
            Family::Drop2Triple => drop2_triple_step(&mut c, &cur)?,
            Family::Drop2Nodal => drop2_nodal_step(&mut c, &cur)?,
            Family::Drop3TripleJoin if cur.degree() == 9 => gamma_chain(&mut c, &cur)?,
            other => {
                return Err(EngineError::Unsupported(format!(
                    "the {} family has no contraction recipe at degree {}",
                    other.name(),
                    cur.degree()
                )));
            }
        }
    }
    let cert = c.finish()?;
    verify_contraction(&cert)?;
    Ok(cert)
}

/// One de Jonquieres map contracts a pencil of d lines: apex at the common
/// point, one simple point on each line, plus one extra general point when
/// d is odd to even out the count.
fn pencil_step(c: &mut Contractor, cur: &LineArrangement) -> Result<()> {
    let sing = cur.singular_points();
    let p0 = sing[0].point.clone();
    let mut last = EngineError::Internal("pencil step never attempted".into());
    for _ in 0..24 {
        let mut avoid = c.settled_points();
        avoid.push(p0.clone());
        let mut simples = Vec::with_capacity(cur.degree() + 1);
        for l in cur.lines() {
            let q = random_point_on(&mut c.rng, l, &avoid);
            avoid.push(q.clone());
            simples.push(q);
        }
        if cur.degree() % 2 == 1 {
            let q = random_point_off(&mut c.rng, cur.lines(), &avoid)?;
            simples.push(q);
        }
        match c.apply(
            MapStep::DeJonquieres {
                apex: p0.clone(),
                simples,
            },
            ImageClaim::Empty,
        ) {
            Ok(()) => return Ok(()),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// One de Jonquieres map contracts a near-pencil: enough of its simple
/// points are placed at the nodes on the free line that the free line is
/// contracted along with the pencil.
fn near_pencil_step(c: &mut Contractor, cur: &LineArrangement) -> Result<()> {
    let d = cur.degree();
    let sing = cur.singular_points();
    let p0 = sing[0].point.clone();
    let pencil_idx = sing[0].lines.clone();
    let ell = pencil_idx.len();
    debug_assert_eq!(ell, d - 1);
    let off_idx = (0..d)
        .find(|i| !pencil_idx.contains(i))
        .ok_or_else(|| EngineError::Internal("near-pencil without a free line".into()))?;
    let l_off = cur.lines()[off_idx].clone();
    let mu = if ell.is_multiple_of(2) { (ell + 2) / 2 } else { (ell + 3) / 2 };

    let mut order: Vec<(usize, ProjPoint)> = Vec::with_capacity(ell);
    for &i in &pencil_idx {
        order.push((i, meet(&cur.lines()[i], &l_off)?));
    }
    let settled_pts = c.settled_points();
    // stable: keeps input order within each group, settled-free nodes first
    order.sort_by_key(|(_, v)| settled_pts.contains(v));
    if order[..mu].iter().any(|(_, v)| settled_pts.contains(v)) {
        return Err(EngineError::Construction(
            "not enough settled-free nodes on the free line".into(),
        ));
    }

    let mut last = EngineError::Internal("near-pencil step never attempted".into());
    for _ in 0..24 {
        let mut avoid = settled_pts.clone();
        avoid.push(p0.clone());
        let mut simples: Vec<ProjPoint> = order[..mu].iter().map(|(_, v)| v.clone()).collect();
        avoid.extend(simples.iter().cloned());
        for (i, node) in &order[mu..] {
            let mut av = avoid.clone();
            av.push(node.clone());
            let q = random_point_on(&mut c.rng, &cur.lines()[*i], &av);
            avoid.push(q.clone());
            simples.push(q);
        }
        for _ in 0..(2 * mu).saturating_sub(2 + ell) {
            let q = random_point_off(&mut c.rng, cur.lines(), &avoid)?;
            avoid.push(q.clone());
            simples.push(q);
        }
        match c.apply(
            MapStep::DeJonquieres {
                apex: p0.clone(),
                simples,
            },
            ImageClaim::Empty,
        ) {
            Ok(()) => return Ok(()),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Quadratic step for the pencil-plus-triple family: based at the pencil
/// point and one node on each of the two lines completing the triple, it
/// contracts the two chosen pencil lines and keeps the family shape two
/// degrees down.
fn drop2_triple_step(c: &mut Contractor, cur: &LineArrangement) -> Result<()> {
    let d = cur.degree();
    let sing = cur.singular_points();
    let p0 = sing[0].point.clone();
    let j = sing[0]
        .lines
        .iter()
        .copied()
        .find(|i| sing[1].lines.contains(i))
        .ok_or_else(|| EngineError::Construction("expected a joining component".into()))?;
    let b: Vec<usize> = sing[1].lines.iter().copied().filter(|&i| i != j).collect();
    let a: Vec<usize> = sing[0].lines.iter().copied().filter(|&i| i != j).collect();
    if b.len() != 2 || a.len() < 2 {
        return Err(EngineError::Construction(
            "unexpected incidence counts for the triple-point step".into(),
        ));
    }
    let claim = type_of(d - 2, &[d - 4, 3])?;
    if c.is_settled(&p0) {
        return Err(EngineError::Construction(
            "the pencil point carries a contracted component".into(),
        ));
    }
    let mut last = EngineError::Construction("no admissible base pair found".into());
    for &ai in &a {
        for &ak in &a {
            if ai == ak {
                continue;
            }
            let q1 = meet(&cur.lines()[b[0]], &cur.lines()[ai])?;
            let q2 = meet(&cur.lines()[b[1]], &cur.lines()[ak])?;
            if c.is_settled(&q1) || c.is_settled(&q2) {
                continue;
            }
            match c.apply(
                MapStep::Quadratic {
                    base: [p0.clone(), q1, q2],
                },
                ImageClaim::Type(claim.clone()),
            ) {
                Ok(()) => return Ok(()),
                Err(e) => last = e,
            }
        }
    }
    Err(last)
}

/// Quadratic step for the pencil-plus-two-free-lines family: based at the
/// pencil point and one node on each free line, it contracts two pencil
/// lines and keeps the family shape two degrees down.
fn drop2_nodal_step(c: &mut Contractor, cur: &LineArrangement) -> Result<()> {
    let d = cur.degree();
    let sing = cur.singular_points();
    let p0 = sing[0].point.clone();
    let a = sing[0].lines.clone();
    let m: Vec<usize> = (0..d).filter(|i| !a.contains(i)).collect();
    if m.len() != 2 || a.len() < 2 {
        return Err(EngineError::Construction(
            "unexpected incidence counts for the nodal step".into(),
        ));
    }
    let claim = type_of(d - 2, &[d - 4])?;
    if c.is_settled(&p0) {
        return Err(EngineError::Construction(
            "the pencil point carries a contracted component".into(),
        ));
    }
    let mut last = EngineError::Construction("no admissible base pair found".into());
    for &ai in &a {
        for &ak in &a {
            if ai == ak {
                continue;
            }
            let q1 = meet(&cur.lines()[m[0]], &cur.lines()[ai])?;
            let q2 = meet(&cur.lines()[m[1]], &cur.lines()[ak])?;
            if c.is_settled(&q1) || c.is_settled(&q2) {
                continue;
            }
            match c.apply(
                MapStep::Quadratic {
                    base: [p0.clone(), q1, q2],
                },
                ImageClaim::Type(claim.clone()),
            ) {
                Ok(()) => return Ok(()),
                Err(e) => last = e,
            }
        }
    }
    Err(last)
}

/// Contracts two lines. When their node is free of settled points one
/// quadratic removes both; otherwise the first line is contracted alone and
/// the single-line step finishes the job.
fn two_line_step(c: &mut Contractor, cur: &LineArrangement) -> Result<()> {
    let l0 = cur.lines()[0].clone();
    let l1 = cur.lines()[1].clone();
    let node = meet(&l0, &l1)?;
    let mut last = EngineError::Internal("two-line step never attempted".into());
    if !c.is_settled(&node) {
        for _ in 0..24 {
            let mut avoid = c.settled_points();
            avoid.push(node.clone());
            let q1 = random_point_on(&mut c.rng, &l0, &avoid);
            avoid.push(q1.clone());
            let q2 = random_point_on(&mut c.rng, &l1, &avoid);
            match c.apply(
                MapStep::Quadratic {
                    base: [node.clone(), q1, q2],
                },
                ImageClaim::Empty,
            ) {
                Ok(()) => return Ok(()),
                Err(e) => last = e,
            }
        }
    }
    // lazy fallback: contract the first line alone
    for _ in 0..24 {
        let mut avoid = c.settled_points();
        avoid.push(node.clone());
        let q1 = random_point_on(&mut c.rng, &l0, &avoid);
        avoid.push(q1.clone());
        let q2 = random_point_on(&mut c.rng, &l0, &avoid);
        avoid.push(q2.clone());
        let r = random_point_on(&mut c.rng, &l1, &avoid);
        match c.apply(
            MapStep::Quadratic {
                base: [q1, q2, r],
            },
            ImageClaim::Type(type_of(1, &[])?),
        ) {
            Ok(()) => return Ok(()),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Contracts the last remaining line with a quadratic based at two of its
/// points and one point off it.
fn single_line_step(c: &mut Contractor, cur: &LineArrangement) -> Result<()> {
    let l = cur.lines()[0].clone();
    let mut last = EngineError::Internal("single-line step never attempted".into());
    for _ in 0..24 {
        let mut avoid = c.settled_points();
        let q1 = random_point_on(&mut c.rng, &l, &avoid);
        avoid.push(q1.clone());
        let q2 = random_point_on(&mut c.rng, &l, &avoid);
        avoid.push(q2.clone());
        let r = random_point_off(&mut c.rng, std::slice::from_ref(&l), &avoid)?;
        match c.apply(
            MapStep::Quadratic {
                base: [q1, q2, r],
            },
            ImageClaim::Empty,
        ) {
            Ok(()) => return Ok(()),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Four-map chain contracting the degree-9 triple-with-join configuration
/// down to two lines: a quartic de Jonquieres map to a pentagon, two
/// quadratics to a triangle, and a tangent quadratic to a reducible conic.
/// The tangent base point is exactly where the image of an earlier
/// contracted component sits, and the tangency is what collapses that
/// direction bundle to a point again instead of blowing it back up. The
/// main loop then finishes the two surviving lines.
fn gamma_chain(c: &mut Contractor, cur: &LineArrangement) -> Result<()> {
    let sing = cur.singular_points();
    let p0 = sing[0].point.clone();
    let p1 = sing[1].point.clone();
    let j = sing[0]
        .lines
        .iter()
        .copied()
        .find(|i| sing[1].lines.contains(i))
        .ok_or_else(|| EngineError::Construction("expected a joining component".into()))?;
    let bs: Vec<usize> = sing[1].lines.iter().copied().filter(|&i| i != j).collect();
    let pencil_rest: Vec<usize> = sing[0].lines.iter().copied().filter(|&i| i != j).collect();
    let i9 = (0..9)
        .find(|i| !sing[0].lines.contains(i) && !sing[1].lines.contains(i))
        .ok_or_else(|| EngineError::Construction("expected one free component".into()))?;
    if bs.len() != 2 || pencil_rest.len() != 5 {
        return Err(EngineError::Construction(
            "unexpected incidence counts for the degree-9 chain".into(),
        ));
    }

    let snap = c.snapshot();
    let mut last = EngineError::Construction("no admissible labelling found".into());
    for (i7, i8) in [(bs[0], bs[1]), (bs[1], bs[0])] {
        for &i4 in &pencil_rest {
            for &i5 in &pencil_rest {
                for &i6 in &pencil_rest {
                    if i4 == i5 || i4 == i6 || i5 == i6 {
                        continue;
                    }
                    let rest: Vec<usize> = pencil_rest
                        .iter()
                        .copied()
                        .filter(|&i| i != i4 && i != i5 && i != i6)
                        .collect();
                    let idx = [rest[0], rest[1], i4, i5, i6, i7, i8, i9];
                    match gamma_attempt(c, cur, idx, &p0, &p1) {
                        Ok(()) => return Ok(()),
                        Err(e) => {
                            last = e;
                            c.restore(snap.clone());
                        }
                    }
                }
            }
        }
    }
    Err(last)
}

fn gamma_attempt(
    c: &mut Contractor,
    cur: &LineArrangement,
    idx: [usize; 8],
    p0: &ProjPoint,
    p1: &ProjPoint,
) -> Result<()> {
    let [i2, i3, i4, i5, i6, i7, i8, i9] = idx;
    let line = |i: usize| cur.lines()[i].clone();

    // first map: quartic de Jonquieres, contracts the join and three pencil
    // lines, sends the other five to a pentagon
    let simples = vec![
        p1.clone(),
        meet(&line(i4), &line(i7))?,
        meet(&line(i5), &line(i8))?,
        meet(&line(i6), &line(i9))?,
        meet(&line(i7), &line(i9))?,
        meet(&line(i8), &line(i9))?,
    ];
    c.apply(
        MapStep::DeJonquieres {
            apex: p0.clone(),
            simples,
        },
        ImageClaim::Type(type_of(5, &[])?),
    )?;

    // second map: quadratic on three pentagon vertices, contracts one side
    let b1 = meet(&c.line_by_origin(i2)?, &c.line_by_origin(i8)?)?;
    let b2 = meet(&c.line_by_origin(i3)?, &c.line_by_origin(i7)?)?;
    let b3 = meet(&c.line_by_origin(i3)?, &c.line_by_origin(i9)?)?;
    c.apply(
        MapStep::Quadratic { base: [b1, b2, b3] },
        ImageClaim::Type(type_of(4, &[])?),
    )?;

    // third map: quadratic on two quadrilateral vertices and a general
    // point of one side, contracts another side
    let mut done = false;
    let mut last = EngineError::Internal("third chain map never attempted".into());
    for _ in 0..24 {
        let c1 = meet(&c.line_by_origin(i2)?, &c.line_by_origin(i7)?)?;
        let c2 = meet(&c.line_by_origin(i2)?, &c.line_by_origin(i9)?)?;
        let l8 = c.line_by_origin(i8)?;
        let mut avoid = c.settled_points();
        avoid.push(meet(&l8, &c.line_by_origin(i2)?)?);
        avoid.push(meet(&l8, &c.line_by_origin(i7)?)?);
        avoid.push(meet(&l8, &c.line_by_origin(i9)?)?);
        let q8 = random_point_on(&mut c.rng, &l8, &avoid);
        match c.apply(
            MapStep::Quadratic {
                base: [c1, c2, q8],
            },
            ImageClaim::Type(type_of(3, &[])?),
        ) {
            Ok(()) => {
                done = true;
                break;
            }
            Err(e) => last = e,
        }
    }
    if !done {
        return Err(last);
    }

    // fourth map: tangent quadratic at the vertex carrying the pile of an
    // earlier contracted component, tangent along one of its two sides
    for _ in 0..24 {
        let l7 = c.line_by_origin(i7)?;
        let l8 = c.line_by_origin(i8)?;
        let l9 = c.line_by_origin(i9)?;
        let pt = meet(&l7, &l8)?;
        let mut avoid = c.settled_points();
        avoid.push(meet(&l7, &l9)?);
        avoid.push(meet(&l8, &l9)?);
        avoid.push(pt.clone());
        let q9 = random_point_on(&mut c.rng, &l9, &avoid);
        match c.apply(
            MapStep::TangentQuadratic {
                point: pt.clone(),
                direction: l7.clone(),
                third: q9,
            },
            ImageClaim::Type(type_of(2, &[])?),
        ) {
            Ok(()) => return Ok(()),
            Err(e) => last = e,
        }
    }
    Err(last)
}

// ---------------------------------------------------------------------------
// Non-contractibility witnesses
// ---------------------------------------------------------------------------

/// Builds and verifies an explicit member of the (2,3) adjoint system for
/// the five non-contractible families. Every member line passes through the
/// pencil point, where the vanishing condition is met with equality; the
/// few extra lines pin down the conditions at the remaining multiple
/// points. Also confirms that the third log plurigenus is positive, which
/// the verified member forces.
pub fn noncontract_witness(arr: &LineArrangement) -> Result<AdjointWitness> {
    let fam = recognize(arr).ok_or_else(|| {
        EngineError::Unsupported("witness recipes cover only the named families".into())
    })?;
    let Some(min) = witness_min_degree(fam) else {
        return Err(EngineError::Unsupported(format!(
            "the {} family is contractible, no witness exists",
            fam.name()
        )));
    };
    let d = arr.degree();
    if d < min {
        return Err(EngineError::Unsupported(format!(
            "the {} witness construction needs degree at least {min}",
            fam.name()
        )));
    }

    let sing = arr.singular_points();
    let p0 = sing[0].point.clone();
    let mut member: Vec<(ProjLine, usize)> = sing[0]
        .lines
        .iter()
        .map(|&i| (arr.lines()[i].clone(), 1usize))
        .collect();
    let component_through = |p: &ProjPoint, q: &ProjPoint| -> Result<ProjLine> {
        arr.lines()
            .iter()
            .find(|l| l.contains(p) && l.contains(q))
            .cloned()
            .ok_or_else(|| EngineError::Construction("expected a joining component".into()))
    };

    match fam {
        Family::Drop3Quadruple => {
            let l = component_through(&p0, &sing[1].point)?;
            bump(&mut member, &l, 4)?;
        }
        Family::Drop3TripleTrio => {
            for s in &sing[1..4] {
                let l = component_through(&p0, &s.point)?;
                bump(&mut member, &l, 2)?;
            }
        }
        Family::Drop3TriplePair => {
            let t1 = &sing[1].point;
            let t2 = &sing[2].point;
            let j1 = component_through(&p0, t1)?;
            let j2 = component_through(&p0, t2)?;
            let tline = component_through(t1, t2)?;
            bump(&mut member, &j1, 2)?;
            bump(&mut member, &j2, 2)?;
            let other = |t: &ProjPoint, jl: &ProjLine| -> Result<ProjLine> {
                arr.lines()
                    .iter()
                    .find(|l| l.contains(t) && *l != jl && **l != tline)
                    .cloned()
                    .ok_or_else(|| {
                        EngineError::Construction("expected a third line at the triple".into())
                    })
            };
            let b1 = other(t1, &j1)?;
            let b2 = other(t2, &j2)?;
            let n = meet(&b1, &b2)?;
            member.push((join(&p0, &n)?, 1));
        }
        Family::Drop3TripleJoin => {
            let p1 = &sing[1].point;
            let l = component_through(&p0, p1)?;
            bump(&mut member, &l, 2)?;
            let free = arr
                .lines()
                .iter()
                .find(|f| !f.contains(&p0) && !f.contains(p1))
                .cloned()
                .ok_or_else(|| {
                    EngineError::Construction("expected one free component".into())
                })?;
            for bl in arr.lines().iter().filter(|b| b.contains(p1) && **b != l) {
                let x = meet(&free, bl)?;
                member.push((join(&p0, &x)?, 1));
            }
        }
        Family::Drop3TripleFree => {
            member.push((join(&p0, &sing[1].point)?, 3));
        }
        Family::Drop3Nodal => {
            let off: Vec<ProjLine> = arr
                .lines()
                .iter()
                .filter(|l| !l.contains(&p0))
                .cloned()
                .collect();
            if off.len() != 3 {
                return Err(EngineError::Construction(
                    "expected exactly three components off the pencil point".into(),
                ));
            }
            for (i, k) in [(0, 1), (0, 2), (1, 2)] {
                let v = meet(&off[i], &off[k])?;
                member.push((join(&p0, &v)?, 1));
            }
        }
        _ => unreachable!("witness_min_degree filtered the contractible families"),
    }

    // pad with fresh general lines through the pencil point
    let mut t = 0i64;
    while member.iter().map(|(_, k)| k).sum::<usize>() < 2 * d - 9 {
        t += 1;
        let q = ProjPoint::new([int_rat(t), int_rat(t * t + 1), int_rat(1)])?;
        if q == p0 {
            continue;
        }
        let l = join(&p0, &q)?;
        if arr.lines().contains(&l)
            || member.iter().any(|(m, _)| *m == l)
            || sing[1..].iter().any(|s| l.contains(&s.point))
        {
            continue;
        }
        member.push((l, 1));
    }

    let witness = AdjointWitness {
        n: 2,
        m: 3,
        curve_type: arr.curve_type(),
        lines: arr.lines().to_vec(),
        member,
    };
    verify_witness(&witness)?;
    let p3 = log_plurigenus(arr, 3)?;
    if p3.value == 0 {
        return Err(EngineError::Internal(
            "witness verified but the third plurigenus vanished".into(),
        ));
    }
    Ok(witness)
}

/// Raises the exponent of an existing member line.
fn bump(member: &mut [(ProjLine, usize)], l: &ProjLine, extra: usize) -> Result<()> {
    for (ml, k) in member.iter_mut() {
        if ml == l {
            *k += extra;
            return Ok(());
        }
    }
    Err(EngineError::Construction(
        "expected the line to be part of the member already".into(),
    ))
}

// ---------------------------------------------------------------------------
// Numerical structure checks
// ---------------------------------------------------------------------------

/// Whether the degree is at least the sum of the three largest
/// multiplicities (padded with 1 when there are fewer than three singular
/// points), the classical minimality test for the quadratic reduction
/// process.
pub fn jung_is_minimal(t: &CurveType) -> bool {
    t.d >= t.mult(0) + t.mult(1) + t.mult(2)
}

/// Number of adjoint reduction rounds available before the leading
/// multiplicity is exhausted: floor((d - m0) / 2).
pub fn marletta_index(t: &CurveType) -> usize {
    (t.d - t.mult(0)) / 2
}

/// One verified clause of a structure report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureClause {
    pub description: String,
    pub holds: bool,
}

/// Outcome of the incidence structure test for arrangements whose three
/// leading multiplicities sum to slightly more than the degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    /// Sum of the three leading multiplicities.
    pub m_sum: usize,
    /// The excess m_sum - d, between 1 and 3.
    pub excess: usize,
    /// Which incidence case the three points fall into.
    pub case: String,
    pub clauses: Vec<StructureClause>,
    /// True when every clause holds.
    pub ok: bool,
}

/// Verifies the incidence structure forced on arrangements with vanishing
/// adjoints whose three leading multiplicities sum to d+1, d+2 or d+3: the
/// three distinguished points must carry almost every component and the
/// residual multiplicities are bounded. A failing clause is reported in the
/// result, not as an error; arrangements outside the applicable range are
/// unsupported.
pub fn structure_check(arr: &LineArrangement) -> Result<StructureReport> {
    let t = arr.curve_type();
    let d = t.d;
    let sing = arr.singular_points();
    if sing.len() < 3 {
        return Err(EngineError::Unsupported(
            "structure check needs at least three singular points".into(),
        ));
    }
    let m_sum = t.mult(0) + t.mult(1) + t.mult(2);
    if m_sum < d + 1 || m_sum > d + 3 {
        return Err(EngineError::Unsupported(format!(
            "sum of the three leading multiplicities is {m_sum}, outside {}..={}",
            d + 1,
            d + 3
        )));
    }
    let excess = m_sum - d;
    let p = [&sing[0].point, &sing[1].point, &sing[2].point];
    let col = collinear(p[0], p[1], p[2]);
    let has_side = |a: &ProjPoint, b: &ProjPoint| {
        arr.lines().iter().any(|l| l.contains(a) && l.contains(b))
    };
    let nsides = [(0usize, 1usize), (0, 2), (1, 2)]
        .iter()
        .filter(|(i, k)| has_side(p[*i], p[*k]))
        .count();
    let misses = arr
        .lines()
        .iter()
        .filter(|l| !p.iter().any(|q| l.contains(q)))
        .count();
    let residual: Vec<usize> = sing[3..].iter().map(|s| s.multiplicity()).collect();
    let rmax = residual.first().copied().unwrap_or(1);
    let count_at = |k: usize| residual.iter().filter(|&&m| m == k).count();
    let joining_component = || {
        arr.lines()
            .iter()
            .any(|l| l.contains(p[0]) && l.contains(p[1]) && l.contains(p[2]))
    };

    let mut clauses: Vec<(String, bool)> = Vec::new();
    let case: &str;
    match (excess, col, nsides) {
        (3, _, _) => {
            case = "triangle";
            clauses.push((
                "the three distinguished points are not collinear".into(),
                !col,
            ));
            clauses.push((
                "all three sides of the triangle are components".into(),
                nsides == 3,
            ));
            clauses.push((
                "every component passes through a distinguished point".into(),
                misses == 0,
            ));
            clauses.push((
                "remaining multiplicities stay at most 3".into(),
                rmax <= 3,
            ));
        }
        (2, true, _) => {
            case = "collinear";
            clauses.push((
                "the line through the three points is a component".into(),
                joining_component(),
            ));
            clauses.push((
                "every component passes through a distinguished point".into(),
                misses == 0,
            ));
            clauses.push((
                "remaining multiplicities stay at most 3".into(),
                rmax <= 3,
            ));
        }
        (2, false, 3) => {
            case = "triangle";
            clauses.push((
                "at most one component misses all three points".into(),
                misses <= 1,
            ));
            clauses.push((
                "remaining multiplicities stay at most 4".into(),
                rmax <= 4,
            ));
            clauses.push((
                "at most two remaining points have multiplicity 4".into(),
                count_at(4) <= 2,
            ));
        }
        (2, false, 2) => {
            case = "two-sides";
            clauses.push((
                "every component passes through a distinguished point".into(),
                misses == 0,
            ));
            clauses.push((
                "remaining multiplicities stay at most 3".into(),
                rmax <= 3,
            ));
        }
        (1, true, _) => {
            case = "collinear";
            clauses.push((
                "the line through the three points is a component".into(),
                joining_component(),
            ));
            clauses.push((
                "at most one component misses all three points".into(),
                misses <= 1,
            ));
            clauses.push((
                "remaining multiplicities stay at most 4".into(),
                rmax <= 4,
            ));
        }
        (1, false, 3) => {
            case = "triangle";
            clauses.push((
                "at most two components miss all three points".into(),
                misses <= 2,
            ));
            clauses.push((
                "remaining multiplicities stay at most 5".into(),
                rmax <= 5,
            ));
            clauses.push((
                "at most one remaining point has multiplicity 5".into(),
                count_at(5) <= 1,
            ));
        }
        (1, false, 2) => {
            case = "two-sides";
            clauses.push((
                "at most one component misses all three points".into(),
                misses <= 1,
            ));
            clauses.push((
                "remaining multiplicities stay at most 4".into(),
                rmax <= 4,
            ));
        }
        (1, false, 1) => {
            case = "one-side";
            clauses.push((
                "every component passes through a distinguished point".into(),
                misses == 0,
            ));
            clauses.push((
                "remaining multiplicities stay at most 3".into(),
                rmax <= 3,
            ));
        }
        _ => {
            case = "unmatched";
            clauses.push((
                format!(
                    "a configuration with {nsides} component sides and excess {excess} matches no case"
                ),
                false,
            ));
        }
    }

    let ok = clauses.iter().all(|(_, h)| *h);
    Ok(StructureReport {
        m_sum,
        excess,
        case: case.to_string(),
        clauses: clauses
            .into_iter()
            .map(|(description, holds)| StructureClause { description, holds })
            .collect(),
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::realize_family;

    fn realize(f: Family, d: usize, seed: u64) -> LineArrangement {
        realize_family(f, d, seed).expect("realization should succeed")
    }

    #[test]
    fn recognition_covers_all_families_at_twelve() {
        for fam in Family::ALL {
            let arr = realize(fam, 12, 11);
            assert_eq!(recognize(&arr), Some(fam), "family {}", fam.name());
        }
    }

    #[test]
    fn recognition_prefers_the_contractible_reading_of_shared_types() {
        // (4; 3, 2^3) is both the near-pencil and the triple-point type
        let arr = realize(Family::NearPencil, 4, 2);
        assert_eq!(recognize(&arr), Some(Family::NearPencil));
        // (5; 3, 2^7) is shared by the nodal drop-two family and both
        // degree-five triple variants; the contraction recipe wins
        let arr = realize(Family::Drop2Nodal, 5, 2);
        assert_eq!(recognize(&arr), Some(Family::Drop2Nodal));
    }

    #[test]
    fn pencils_and_near_pencils_contract_in_one_map() {
        for (fam, d, seed) in [
            (Family::Pencil, 12, 1),
            (Family::Pencil, 3, 1),
            (Family::NearPencil, 12, 1),
            (Family::NearPencil, 3, 1),
            (Family::NearPencil, 8, 5),
        ] {
            let arr = realize(fam, d, seed);
            let cert = contract(&arr, 7).expect("contraction should succeed");
            assert_eq!(cert.steps.len(), 1, "{} at degree {d}", fam.name());
            assert_eq!(cert.terminal.len(), d);
            assert!(verify_contraction(&cert).is_ok());
        }
    }

    #[test]
    fn triple_point_family_chains_through_the_claimed_types() {
        let arr = realize(Family::Drop2Triple, 12, 3);
        let cert = contract(&arr, 1).expect("contraction should succeed");
        let types: Vec<Option<String>> = cert
            .steps
            .iter()
            .map(|s| s.image_type.as_ref().map(|t| t.to_string()))
            .collect();
        let expected = [
            Some("(10;8,3,2^14)".to_string()),
            Some("(8;6,3,2^10)".to_string()),
            Some("(6;4,3,2^6)".to_string()),
            Some("(4;3,2^3)".to_string()),
            None,
        ];
        assert_eq!(types, expected);
        assert_eq!(cert.terminal.len(), 12);
    }

    #[test]
    fn odd_degree_triple_chain_ends_in_a_pencil() {
        let arr = realize(Family::Drop2Triple, 13, 3);
        let cert = contract(&arr, 1).expect("contraction should succeed");
        let last_typed = cert.steps[cert.steps.len() - 2]
            .image_type
            .as_ref()
            .unwrap()
            .to_string();
        assert_eq!(last_typed, "(3;3)");
        assert_eq!(cert.terminal.len(), 13);
    }

    #[test]
    fn nodal_family_chains_to_two_lines() {
        for (d, seed) in [(12usize, 4u64), (13, 4), (4, 1), (5, 1)] {
            let arr = realize(Family::Drop2Nodal, d, seed);
            let cert = contract(&arr, 2).expect("contraction should succeed");
            assert_eq!(cert.terminal.len(), d, "degree {d}");
        }
    }

    #[test]
    fn degree_nine_join_configuration_contracts_through_the_chain() {
        let arr = realize(Family::Drop3TripleJoin, 9, 3);
        let cert = contract(&arr, 5).expect("the degree-9 chain should succeed");
        let types: Vec<Option<String>> = cert
            .steps
            .iter()
            .map(|s| s.image_type.as_ref().map(|t| t.to_string()))
            .collect();
        assert_eq!(types[0], Some("(5;2^10)".to_string()));
        assert_eq!(types[1], Some("(4;2^6)".to_string()));
        assert_eq!(types[2], Some("(3;2^3)".to_string()));
        assert_eq!(types[3], Some("(2;2)".to_string()));
        assert!(cert
            .steps
            .iter()
            .any(|s| matches!(s.map, MapStep::TangentQuadratic { .. })));
        assert_eq!(cert.terminal.len(), 9);
        assert!(verify_contraction(&cert).is_ok());
    }

    #[test]
    fn witnesses_verify_for_all_five_families() {
        for (fam, d) in [
            (Family::Drop3Quadruple, 12usize),
            (Family::Drop3TripleTrio, 12),
            (Family::Drop3TriplePair, 12),
            (Family::Drop3TripleJoin, 12),
            (Family::Drop3TripleFree, 12),
            (Family::Drop3Nodal, 12),
            (Family::Drop3Quadruple, 10),
            (Family::Drop3TriplePair, 11),
            (Family::Drop3TripleFree, 9),
            (Family::Drop3Nodal, 9),
        ] {
            let arr = realize(fam, d, 6);
            let w = noncontract_witness(&arr)
                .unwrap_or_else(|e| panic!("{} at degree {d}: {e}", fam.name()));
            assert_eq!((w.n, w.m), (2, 3));
            let degree: usize = w.member.iter().map(|(_, k)| k).sum();
            assert_eq!(degree, 2 * d - 9);
        }
    }

    #[test]
    fn witness_construction_rejects_degrees_below_its_range() {
        let arr = realize(Family::Drop3Quadruple, 9, 6);
        assert!(matches!(
            noncontract_witness(&arr),
            Err(EngineError::Unsupported(_))
        ));
    }

    #[test]
    fn classification_separates_the_two_groups_at_twelve() {
        let opts = ClassifyOptions::default();

        let arr = realize(Family::Drop2Triple, 12, 8);
        let c = classify(&arr, &opts).expect("classification should succeed");
        assert!(c.vanishing_adjoints);
        assert_eq!(c.family.as_deref(), Some("drop2-triple"));
        assert!(matches!(
            c.kodaira,
            KodairaVerdict::NegativeUpTo { bound: 12 }
        ));
        assert!(matches!(
            c.contractible,
            Contractibility::Contractible { .. }
        ));

        let arr = realize(Family::Drop3Nodal, 12, 8);
        let c = classify(&arr, &opts).expect("classification should succeed");
        assert!(c.vanishing_adjoints);
        assert!(matches!(
            c.kodaira,
            KodairaVerdict::NonNegative { m: 3, .. }
        ));
        match &c.contractible {
            Contractibility::NotContractible {
                witness,
                nonempty_adjoint,
            } => {
                assert!(witness.is_some());
                assert_eq!((nonempty_adjoint.n, nonempty_adjoint.m), (2, 3));
                assert!(nonempty_adjoint.dim >= 0);
            }
            other => panic!("expected a non-contractible verdict, got {other:?}"),
        }
    }

    #[test]
    fn classification_flags_nonempty_level_one_adjoints() {
        // eight concurrent lines and four general ones: not a named family,
        // and already the second adjoint system is nonempty
        let mut lines = Vec::new();
        for t in 0..8i64 {
            lines.push(crate::projective::ProjLine::from_ints(1, t, 0).unwrap());
        }
        lines.push(crate::projective::ProjLine::from_ints(0, 1, 3).unwrap());
        lines.push(crate::projective::ProjLine::from_ints(0, 1, 7).unwrap());
        lines.push(crate::projective::ProjLine::from_ints(1, 2, 11).unwrap());
        lines.push(crate::projective::ProjLine::from_ints(1, 3, 13).unwrap());
        let arr = LineArrangement::new(lines).unwrap();
        assert_eq!(arr.curve_type().to_string(), "(12;8,2^38)");
        let c = classify(&arr, &ClassifyOptions::default()).unwrap();
        assert!(!c.vanishing_adjoints);
        assert_eq!(c.family, None);
        match &c.contractible {
            Contractibility::NotContractible {
                witness,
                nonempty_adjoint,
            } => {
                assert!(witness.is_none());
                assert_eq!(nonempty_adjoint.n, 1);
                assert!(nonempty_adjoint.dim >= 0);
            }
            other => panic!("expected rank evidence, got {other:?}"),
        }
    }

    #[test]
    fn minimality_and_reduction_index_examples() {
        let t = CurveType::parse("(12;4,4,4)").unwrap();
        assert!(jung_is_minimal(&t));
        let t = CurveType::parse("(12;9,2^30)").unwrap();
        assert!(!jung_is_minimal(&t));
        let t = CurveType::parse("(10;4,2^12)").unwrap();
        assert_eq!(marletta_index(&t), 3);
        let t = CurveType::parse("(12;12)").unwrap();
        assert_eq!(marletta_index(&t), 0);
        assert!(!jung_is_minimal(&t));
    }

    #[test]
    fn structure_check_passes_the_named_families() {
        let arr = realize(Family::Drop2Triple, 12, 9);
        let r = structure_check(&arr).unwrap();
        assert_eq!(r.excess, 3);
        assert_eq!(r.case, "triangle");
        assert!(r.ok, "{:?}", r.clauses);

        let arr = realize(Family::Drop3Nodal, 12, 9);
        let r = structure_check(&arr).unwrap();
        assert_eq!(r.excess, 1);
        assert!(r.ok, "{:?}", r.clauses);
    }

    #[test]
    fn structure_check_names_the_violated_clause() {
        // triangle of coordinate lines, one transversal, and nine joins
        // from the corners to three points on the transversal: the corners
        // have multiplicity five, and three residual points reach
        // multiplicity four, one more than the triangle case allows
        let mut lines = vec![
            ProjLine::from_ints(0, 0, 1).unwrap(),
            ProjLine::from_ints(0, 1, 0).unwrap(),
            ProjLine::from_ints(1, 0, 0).unwrap(),
            ProjLine::from_ints(1, 1, 1).unwrap(),
        ];
        let corners = [
            ProjPoint::from_ints(1, 0, 0).unwrap(),
            ProjPoint::from_ints(0, 1, 0).unwrap(),
            ProjPoint::from_ints(0, 0, 1).unwrap(),
        ];
        let qs = [
            ProjPoint::from_ints(1, 1, -2).unwrap(),
            ProjPoint::from_ints(1, -2, 1).unwrap(),
            ProjPoint::from_ints(-2, 1, 1).unwrap(),
        ];
        for c in &corners {
            for q in &qs {
                lines.push(join(c, q).unwrap());
            }
        }
        let arr = LineArrangement::new(lines).unwrap();
        let r = structure_check(&arr).unwrap();
        assert_eq!(r.excess, 2);
        assert_eq!(r.case, "triangle");
        assert!(!r.ok);
        let failed: Vec<&str> = r
            .clauses
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.description.as_str())
            .collect();
        assert_eq!(failed, ["at most two remaining points have multiplicity 4"]);
    }

    #[test]
    fn classification_is_deterministic() {
        let arr = realize(Family::Drop2Nodal, 12, 10);
        let opts = ClassifyOptions::default();
        let a = serde_json::to_string(&classify(&arr, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&classify(&arr, &opts).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
