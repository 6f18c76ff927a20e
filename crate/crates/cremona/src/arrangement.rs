//! Line arrangements in the plane, their incidence configurations, and the
//! numerical bookkeeping attached to a union of lines.
//!
//! Three views of the same object appear throughout:
//!
//! * [`LineArrangement`]: the actual lines, with exact coordinates;
//! * [`IncidenceConfig`]: which labelled lines pass through which multiple
//!   points (only points on three or more lines are recorded; the rest are
//!   nodes);
//! * [`CurveType`]: the degree together with the multiplicities of the
//!   singular points, forgetting labels.
//!
//! Text forms follow the usual notation: a configuration prints as
//! `(6; {1,2,3}, {1,4,5})` with 1-based line labels, a type as
//! `(12; 10, 3, 2^18)` with exponents collecting repeats.

use crate::projective::{meet, ProjLine, ProjPoint};
use crate::rational::parse_rational;
use crate::{EngineError, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// A reduced union of distinct lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineArrangement {
    lines: Vec<ProjLine>,
}

/// A point lying on at least two lines of an arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    /// The point itself.
    pub point: ProjPoint,
    /// Sorted indices of the lines through it.
    pub lines: Vec<usize>,
}

impl SingularPoint {
    /// Number of lines through the point.
    pub fn multiplicity(&self) -> usize {
        self.lines.len()
    }
}

impl LineArrangement {
    /// Builds an arrangement from distinct lines.
    pub fn new(lines: Vec<ProjLine>) -> Result<Self> {
        if lines.is_empty() {
            return Err(EngineError::Invalid("an arrangement needs at least one line".into()));
        }
        for i in 0..lines.len() {
            for j in (i + 1)..lines.len() {
                if lines[i] == lines[j] {
                    return Err(EngineError::Invalid(format!(
                        "lines {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { lines })
    }

    /// Number of lines.
    pub fn degree(&self) -> usize {
        self.lines.len()
    }

    /// The lines, in input order (labels are positions).
    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    /// The defining form: the product of the line forms.
    pub fn defining_poly(&self) -> crate::poly::HomPoly {
        crate::poly::HomPoly::product_of_lines(self.lines.iter().map(|l| (l, 1)))
    }

    /// All singular points (multiplicity at least 2), ordered by decreasing
    /// multiplicity and then by canonical coordinates.
    ///
    /// The coordinate tie-break makes "the highest-multiplicity point" and
    /// similar selections deterministic.
    pub fn singular_points(&self) -> Vec<SingularPoint> {
        let mut groups: BTreeMap<ProjPoint, Vec<usize>> = BTreeMap::new();
        for i in 0..self.lines.len() {
            for j in (i + 1)..self.lines.len() {
                let p = meet(&self.lines[i], &self.lines[j])
                    .expect("distinct lines always meet");
                let entry = groups.entry(p).or_default();
                for k in [i, j] {
                    if !entry.contains(&k) {
                        entry.push(k);
                    }
                }
            }
        }
        let mut pts: Vec<SingularPoint> = groups
            .into_iter()
            .map(|(point, mut lines)| {
                lines.sort_unstable();
                SingularPoint { point, lines }
            })
            .collect();
        pts.sort_by(|a, b| {
            b.multiplicity()
                .cmp(&a.multiplicity())
                .then_with(|| a.point.cmp(&b.point))
        });
        pts
    }

    /// Singular points of multiplicity exactly 2.
    pub fn nodes(&self) -> Vec<SingularPoint> {
        self.singular_points()
            .into_iter()
            .filter(|p| p.multiplicity() == 2)
            .collect()
    }

    /// The labelled incidence configuration (points of multiplicity >= 3).
    pub fn config(&self) -> IncidenceConfig {
        let blocks = self
            .singular_points()
            .into_iter()
            .filter(|p| p.multiplicity() >= 3)
            .map(|p| p.lines)
            .collect();
        IncidenceConfig { d: self.degree(), blocks: normalize_blocks(blocks) }
    }

    /// The numerical type, with nodes included as multiplicity-2 entries.
    pub fn curve_type(&self) -> CurveType {
        let mut mults: Vec<usize> = self
            .singular_points()
            .iter()
            .map(|p| p.multiplicity())
            .collect();
        mults.sort_unstable_by(|a, b| b.cmp(a));
        CurveType { d: self.degree(), mults }
    }
}

fn normalize_blocks(mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    blocks
}

#[derive(Serialize, Deserialize)]
struct ArrangementRepr {
    d: usize,
    lines: Vec<[String; 3]>,
}

impl Serialize for LineArrangement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let lines = self
            .lines
            .iter()
            .map(|l| {
                let c = l.coords();
                [c[0].to_string(), c[1].to_string(), c[2].to_string()]
            })
            .collect();
        ArrangementRepr { d: self.lines.len(), lines }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LineArrangement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ArrangementRepr::deserialize(d)?;
        if repr.d != repr.lines.len() {
            return Err(D::Error::custom(format!(
                "d = {} does not match the {} lines given",
                repr.d,
                repr.lines.len()
            )));
        }
        let mut lines = Vec::with_capacity(repr.lines.len());
        for triple in &repr.lines {
            let coords = [
                parse_rational(&triple[0]).map_err(D::Error::custom)?,
                parse_rational(&triple[1]).map_err(D::Error::custom)?,
                parse_rational(&triple[2]).map_err(D::Error::custom)?,
            ];
            lines.push(ProjLine::new(coords).map_err(D::Error::custom)?);
        }
        LineArrangement::new(lines).map_err(D::Error::custom)
    }
}

/// Incidence configuration: for each point on >= 3 lines, the sorted list of
/// line labels through it (0-based internally, 1-based in text).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceConfig {
    /// Number of lines.
    pub d: usize,
    /// Blocks of line indices, each sorted; blocks ordered by decreasing
    /// size, then lexicographically.
    pub blocks: Vec<Vec<usize>>,
}

impl IncidenceConfig {
    /// Builds and validates a configuration.
    ///
    /// Two blocks may share at most one line (two shared lines would force
    /// the two points to coincide), and blocks must have size >= 3.
    pub fn new(d: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let blocks = normalize_blocks(blocks);
        for b in &blocks {
            if b.len() < 3 {
                return Err(EngineError::Invalid(format!(
                    "configuration blocks need at least 3 lines, got {b:?}"
                )));
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(EngineError::Invalid(format!("block {b:?} repeats a line")));
            }
            if b.iter().any(|&i| i >= d) {
                return Err(EngineError::Invalid(format!(
                    "block {b:?} references a line beyond d = {d}"
                )));
            }
        }
        for i in 0..blocks.len() {
            for j in (i + 1)..blocks.len() {
                let shared = blocks[i].iter().filter(|x| blocks[j].contains(x)).count();
                if blocks[i] == blocks[j] {
                    return Err(EngineError::Invalid(format!(
                        "blocks {i} and {j} coincide"
                    )));
                }
                if shared >= 2 {
                    return Err(EngineError::Invalid(format!(
                        "blocks {:?} and {:?} share {shared} lines",
                        blocks[i], blocks[j]
                    )));
                }
            }
        }
        Ok(Self { d, blocks })
    }

    /// Parses text such as `(6; {1,2,3}, {1,4,5})`; whitespace-insensitive,
    /// labels 1-based.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| EngineError::Parse(format!("configuration must be parenthesized: {text:?}")))?;
        let (d_part, rest) = inner
            .split_once(';')
            .ok_or_else(|| EngineError::Parse("configuration needs a ';' after the degree".into()))?;
        let d: usize = d_part
            .parse()
            .map_err(|_| EngineError::Parse(format!("bad degree {d_part:?}")))?;
        let mut blocks = Vec::new();
        let mut rest = rest;
        while !rest.is_empty() {
            let rest2 = rest.strip_prefix(',').unwrap_or(rest);
            let Some(body) = rest2.strip_prefix('{') else {
                return Err(EngineError::Parse(format!(
                    "expected '{{' at {rest2:?} in configuration"
                )));
            };
            let Some((inside, after)) = body.split_once('}') else {
                return Err(EngineError::Parse("unclosed '{' in configuration".into()));
            };
            let mut block = Vec::new();
            for num in inside.split(',').filter(|t| !t.is_empty()) {
                let label: usize = num
                    .parse()
                    .map_err(|_| EngineError::Parse(format!("bad line label {num:?}")))?;
                if label == 0 {
                    return Err(EngineError::Parse("line labels are 1-based".into()));
                }
                block.push(label - 1);
            }
            blocks.push(block);
            rest = after;
        }
        Self::new(d, blocks)
    }

    /// The numerical type of any arrangement realizing this configuration.
    pub fn curve_type(&self) -> CurveType {
        let mut mults: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        let absorbed: usize = mults.iter().map(|&m| m * (m - 1) / 2).sum();
        let nodes = self.d * (self.d - 1) / 2 - absorbed;
        mults.extend(std::iter::repeat_n(2, nodes));
        mults.sort_unstable_by(|a, b| b.cmp(a));
        CurveType { d: self.d, mults }
    }

    /// Number of nodes forced by the configuration.
    pub fn node_count(&self) -> usize {
        let absorbed: usize = self.blocks.iter().map(|b| b.len() * (b.len() - 1) / 2).sum();
        self.d * (self.d - 1) / 2 - absorbed
    }
}

impl fmt::Display for IncidenceConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.d)?;
        if self.blocks.is_empty() {
            return write!(f, ")");
        }
        let rendered: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let labels: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
                format!("{{{}}}", labels.join(","))
            })
            .collect();
        write!(f, "{})", rendered.join(", "))
    }
}

/// Numerical type `(d; m_0, ..., m_r)` of a plane curve with ordinary
/// singularities: degree plus the non-increasing multiplicity list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CurveType {
    /// Degree of the curve.
    pub d: usize,
    /// Multiplicities of the singular points, non-increasing, each >= 2.
    pub mults: Vec<usize>,
}

impl CurveType {
    /// Builds a type, sorting the multiplicities.
    pub fn new(d: usize, mut mults: Vec<usize>) -> Result<Self> {
        if d == 0 {
            return Err(EngineError::Invalid("type degree must be positive".into()));
        }
        mults.sort_unstable_by(|a, b| b.cmp(a));
        if mults.iter().any(|&m| m < 2) {
            return Err(EngineError::Invalid("type multiplicities must be >= 2".into()));
        }
        if mults.first().is_some_and(|&m| m > d) {
            return Err(EngineError::Invalid(format!(
                "multiplicity {} exceeds the degree {}",
                mults[0], d
            )));
        }
        Ok(Self { d, mults })
    }

    /// Parses `(12; 10, 3, 2^18)`; whitespace-insensitive.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| EngineError::Parse(format!("type must be parenthesized: {text:?}")))?;
        let (d_part, rest) = inner
            .split_once(';')
            .ok_or_else(|| EngineError::Parse("type needs a ';' after the degree".into()))?;
        let d: usize = d_part
            .parse()
            .map_err(|_| EngineError::Parse(format!("bad degree {d_part:?}")))?;
        let mut mults = Vec::new();
        for item in rest.split(',').filter(|t| !t.is_empty()) {
            let (base, count) = match item.split_once('^') {
                Some((b, e)) => {
                    let e: usize = e
                        .parse()
                        .map_err(|_| EngineError::Parse(format!("bad exponent in {item:?}")))?;
                    (b, e)
                }
                None => (item, 1),
            };
            let m: usize = base
                .parse()
                .map_err(|_| EngineError::Parse(format!("bad multiplicity {base:?}")))?;
            mults.extend(std::iter::repeat_n(m, count));
        }
        Self::new(d, mults)
    }

    /// The i-th multiplicity under the convention that the list is padded
    /// with 1s beyond its end.
    pub fn mult(&self, i: usize) -> usize {
        self.mults.get(i).copied().unwrap_or(1)
    }

    /// Nodes not accounted for by the listed multiplicities, under the pair
    /// count identity for unions of lines.
    pub fn node_count(&self) -> usize {
        let total = self.d * (self.d - 1) / 2;
        let absorbed: usize = self.mults.iter().map(|&m| m * (m - 1) / 2).sum();
        total.saturating_sub(absorbed)
    }

    /// Whether the listed multiplicities exactly account for all pairwise
    /// intersections of `d` lines (no entry missing, none in excess).
    pub fn is_complete_for_lines(&self) -> bool {
        let total = self.d * (self.d - 1) / 2;
        let absorbed: usize = self.mults.iter().map(|&m| m * (m - 1) / 2).sum();
        absorbed == total
    }

    /// Same type with the remaining nodes appended as explicit 2s.
    pub fn completed(&self) -> Self {
        let mut mults = self.mults.clone();
        mults.extend(std::iter::repeat_n(2, self.node_count()));
        Self { d: self.d, mults }
    }
}

impl fmt::Display for CurveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.d)?;
        let mut groups: Vec<(usize, usize)> = Vec::new();
        for &m in &self.mults {
            match groups.last_mut() {
                Some((v, count)) if *v == m => *count += 1,
                _ => groups.push((m, 1)),
            }
        }
        let rendered: Vec<String> = groups
            .iter()
            .map(|&(m, c)| if c == 1 { m.to_string() } else { format!("{m}^{c}") })
            .collect();
        write!(f, "{})", rendered.join(","))
    }
}

impl fmt::Debug for CurveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for CurveType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CurveType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        CurveType::parse(&text).map_err(D::Error::custom)
    }
}

/// Type-level adjoint system: degree and positive multiplicities, both
/// possibly empty of geometric meaning when the degree goes negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjointType {
    /// Degree `n*d - 3*m`.
    pub degree: i64,
    /// Positive point multiplicities `n*m_i - m`, non-increasing.
    pub mults: Vec<i64>,
}

impl fmt::Display for AdjointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.degree)?;
        let mut groups: Vec<(i64, usize)> = Vec::new();
        for &m in &self.mults {
            match groups.last_mut() {
                Some((v, count)) if *v == m => *count += 1,
                _ => groups.push((m, 1)),
            }
        }
        let rendered: Vec<String> = groups
            .iter()
            .map(|&(m, c)| if c == 1 { m.to_string() } else { format!("{m}^{c}") })
            .collect();
        write!(f, "{})", rendered.join(","))
    }
}

/// The `(n, m)`-adjoint of a type: degree `n d - 3 m`, multiplicities
/// `n m_i - m` keeping only positive entries.
///
/// Requires `m >= n >= 1`; the padding convention (`m_i = 1` past the end of
/// the list) never contributes because `n - m <= 0`.
pub fn adjoint_type(t: &CurveType, n: usize, m: usize) -> Result<AdjointType> {
    if n < 1 || m < n {
        return Err(EngineError::Invalid(format!(
            "adjoint indices need m >= n >= 1, got n = {n}, m = {m}"
        )));
    }
    let degree = (n * t.d) as i64 - 3 * m as i64;
    let mults: Vec<i64> = t
        .mults
        .iter()
        .map(|&mi| (n * mi) as i64 - m as i64)
        .filter(|&v| v > 0)
        .collect();
    Ok(AdjointType { degree, mults })
}

/// Which branch of the numeric normal form applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnalysisCase {
    /// `h = delta - nu`, `eps = eta - tau`.
    General,
    /// `eta = 0, tau = 1`: `h = delta - nu - 1`, `eps = 1`.
    EtaZeroTauOne,
    /// `eta = 2, tau = 0`: `h = delta - nu + 1`, `eps = 0`.
    EtaTwoTauZero,
}

/// Numeric normal form of a type with a dominant multiplicity.
///
/// Writes `d - m0 = 2h + eps`, `d = 3 delta + eta`, `m0 = delta + mu`,
/// `mu = 2 nu + tau`, and records the three-point sum `m = m0 + m1 + m2`
/// under the 1-padding convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeAnalysis {
    pub d: usize,
    pub m0: usize,
    /// Second multiplicity, padded with 1 when absent.
    pub m1: usize,
    /// Third multiplicity, padded with 1 when absent.
    pub m2: usize,
    pub h: usize,
    pub eps: usize,
    pub delta: usize,
    pub eta: usize,
    pub mu: usize,
    pub nu: usize,
    pub tau: usize,
    pub case: AnalysisCase,
    /// `m0 + m1 + m2`.
    pub m_sum: usize,
    /// Count of indices `i >= 2` with `m_i = m2` (padded sequence).
    pub k: usize,
    /// Count of multiplicities equal to `m2 - 1`, counting only entries >= 2.
    pub l: usize,
}

/// Computes the numeric normal form.
///
/// Fails on a pencil (`m0 = d`: the analysis presumes at least two multiple
/// directions; pencils are handled by the direct contraction) and on types
/// with `m0 <= d/3`, where the decomposition is undefined.
pub fn analyze(t: &CurveType) -> Result<TypeAnalysis> {
    let d = t.d;
    let m0 = t.mult(0);
    if m0 == d {
        return Err(EngineError::Unsupported(
            "pencil type (m0 = d): handled by the single-point contraction".into(),
        ));
    }
    let delta = d / 3;
    let eta = d % 3;
    if m0 <= delta {
        return Err(EngineError::Invalid(format!(
            "analysis requires m0 > d/3 (d = {d}, m0 = {m0})"
        )));
    }
    let mu = m0 - delta;
    let nu = mu / 2;
    let tau = mu % 2;
    let (case, h, eps) = if eta == 0 && tau == 1 {
        (AnalysisCase::EtaZeroTauOne, delta.checked_sub(nu + 1), 1)
    } else if eta == 2 && tau == 0 {
        (AnalysisCase::EtaTwoTauZero, Some(delta - nu + 1), 0)
    } else {
        (AnalysisCase::General, delta.checked_sub(nu), eta - tau)
    };
    let h = h.ok_or_else(|| {
        EngineError::Invalid(format!("m0 = {m0} is too large relative to d = {d}"))
    })?;
    debug_assert_eq!(d - m0, 2 * h + eps, "normal form identity");
    let m1 = t.mult(1);
    let m2 = t.mult(2);
    let m_sum = m0 + m1 + m2;
    let k = (2..)
        .take_while(|&i| i < t.mults.len().max(3))
        .filter(|&i| t.mult(i) == m2)
        .count();
    let l = if m2 >= 3 {
        t.mults.iter().filter(|&&mi| mi == m2 - 1).count()
    } else {
        0
    };
    Ok(TypeAnalysis {
        d,
        m0,
        m1,
        m2,
        h,
        eps,
        delta,
        eta,
        mu,
        nu,
        tau,
        case,
        m_sum,
        k,
        l,
    })
}
