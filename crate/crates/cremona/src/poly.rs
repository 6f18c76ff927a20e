//! Sparse homogeneous forms in three variables over the rationals.
//!
//! A [`HomPoly`] is a map from exponent triples `(i, j, k)` with
//! `i + j + k = degree` to nonzero rational coefficients. The degree is kept
//! as an explicit field so the zero form of any degree is representable;
//! every mutating operation strips zero coefficients.
//!
//! Monomials are ordered lexicographically with `x > y > z`; the leading
//! term is the lex-largest one. Serialization lists terms leading-first as
//! `[i, j, k, "coefficient"]` rows, which keeps the JSON byte-stable.

use crate::projective::{ProjLine, ProjPoint};
use crate::rational::{primitive_integer_vector, Int, Rational};
use crate::{EngineError, Result};
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent triple `(i, j, k)` of a monomial `x^i y^j z^k`.
pub type Mono = [u16; 3];

/// A homogeneous form in `x, y, z` with rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct HomPoly {
    degree: usize,
    terms: BTreeMap<Mono, Rational>,
}

impl HomPoly {
    /// The zero form of the given degree.
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    /// Builds a form from `(exponents, coefficient)` pairs.
    ///
    /// Fails if an exponent triple does not sum to `degree` or appears twice.
    pub fn from_terms(degree: usize, terms: Vec<(Mono, Rational)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            if m[0] as usize + m[1] as usize + m[2] as usize != degree {
                return Err(EngineError::Invalid(format!(
                    "monomial {m:?} does not have degree {degree}"
                )));
            }
            if c.is_zero() {
                continue;
            }
            if map.insert(m, c).is_some() {
                return Err(EngineError::Invalid(format!("repeated monomial {m:?}")));
            }
        }
        Ok(Self { degree, terms: map })
    }

    /// The linear form `a x + b y + c z` cutting out a line.
    pub fn from_line(l: &ProjLine) -> Self {
        let [a, b, c] = l.primitive();
        let mut terms = BTreeMap::new();
        for (m, coeff) in [([1, 0, 0], a), ([0, 1, 0], b), ([0, 0, 1], c)] {
            if !coeff.is_zero() {
                terms.insert(m, Rational::from_integer(coeff));
            }
        }
        Self { degree: 1, terms }
    }

    /// Recovers the line cut out by a nonzero linear form.
    pub fn as_line(&self) -> Option<ProjLine> {
        if self.degree != 1 || self.terms.is_empty() {
            return None;
        }
        let c = |m: Mono| self.terms.get(&m).cloned().unwrap_or_else(Rational::zero);
        ProjLine::new([c([1, 0, 0]), c([0, 1, 0]), c([0, 0, 1])]).ok()
    }

    /// Formal degree (meaningful even for the zero form).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Whether all coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in ascending lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, m: Mono) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(Mono, &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    /// Sum of two forms of the same degree.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(*m).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Self { degree: self.degree, terms }
    }

    /// Difference of two forms of the same degree.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Product of two forms.
    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        if self.is_zero() || other.is_zero() {
            return Self::zero(degree);
        }
        let mut terms: BTreeMap<Mono, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = [m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]];
                let entry = terms.entry(m).or_insert_with(Rational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { degree, terms }
    }

    /// Small integer power.
    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant_one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The degree-zero form 1, the multiplicative unit.
    pub fn constant_one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert([0, 0, 0], Rational::one());
        Self { degree: 0, terms }
    }

    /// Exact evaluation at rational coordinates.
    pub fn eval(&self, p: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.iter().enumerate() {
                for _ in 0..*e {
                    t *= &p[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluation at a projective point's canonical coordinates.
    pub fn eval_point(&self, p: &ProjPoint) -> Rational {
        self.eval(p.coords())
    }

    /// Whether the point lies on the zero set.
    pub fn vanishes_at(&self, p: &ProjPoint) -> bool {
        self.eval_point(p).is_zero()
    }

    /// Evaluation at integer coordinates with integer coefficients.
    ///
    /// The caller must have cleared denominators (see
    /// [`HomPoly::primitive_parts`]); used by the grid-based identity checks
    /// where rational arithmetic would dominate the cost.
    pub fn eval_int(coeffs: &[(Mono, Int)], p: &[Int; 3]) -> Int {
        // Power tables keep the evaluation linear in the term count.
        let max = coeffs
            .iter()
            .fold([0u16; 3], |m, (e, _)| [m[0].max(e[0]), m[1].max(e[1]), m[2].max(e[2])]);
        let mut pows: [Vec<Int>; 3] = [vec![], vec![], vec![]];
        for i in 0..3 {
            let mut v = Vec::with_capacity(max[i] as usize + 1);
            v.push(Int::from(1));
            for k in 1..=max[i] as usize {
                let prev = v[k - 1].clone();
                v.push(prev * &p[i]);
            }
            pows[i] = v;
        }
        let mut acc = Int::from(0);
        for (m, c) in coeffs {
            acc += c * &pows[0][m[0] as usize] * &pows[1][m[1] as usize] * &pows[2][m[2] as usize];
        }
        acc
    }

    /// Primitive integer coefficient list (denominators cleared, content 1,
    /// lex-leading coefficient positive), paired with the monomials.
    pub fn primitive_parts(&self) -> Vec<(Mono, Int)> {
        if self.terms.is_empty() {
            return Vec::new();
        }
        let monos: Vec<Mono> = self.terms.keys().copied().collect();
        let vals: Vec<Rational> = self.terms.values().cloned().collect();
        let mut ints = primitive_integer_vector(&vals).expect("nonzero form");
        // Sign convention: make the lex-leading coefficient positive.
        if ints.last().expect("nonempty").is_negative() {
            for x in &mut ints {
                *x = -x.clone();
            }
        }
        monos.into_iter().zip(ints).collect()
    }

    /// Canonical representative of the projective class: primitive integer
    /// coefficients with positive leading term.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let terms = self
            .primitive_parts()
            .into_iter()
            .map(|(m, c)| (m, Rational::from_integer(c)))
            .collect();
        Self { degree: self.degree, terms }
    }

    /// Substitutes three forms of a common degree for the variables.
    pub fn substitute(&self, g: &[Self; 3]) -> Self {
        let n = g[0].degree;
        assert!(g.iter().all(|gi| gi.degree == n), "substitution forms must share a degree");
        let out_degree = self.degree * n;
        if self.is_zero() {
            return Self::zero(out_degree);
        }
        // Power tables for each substituted form.
        let max = self
            .terms
            .keys()
            .fold([0u16; 3], |m, e| [m[0].max(e[0]), m[1].max(e[1]), m[2].max(e[2])]);
        let mut pows: Vec<Vec<Self>> = Vec::with_capacity(3);
        for i in 0..3 {
            let mut v = Vec::with_capacity(max[i] as usize + 1);
            v.push(Self::constant_one());
            for k in 1..=max[i] as usize {
                let prev: &Self = &v[k - 1];
                v.push(prev.mul(&g[i]));
            }
            pows.push(v);
        }
        let mut acc = Self::zero(out_degree);
        for (m, c) in &self.terms {
            let t = pows[0][m[0] as usize]
                .mul(&pows[1][m[1] as usize])
                .mul(&pows[2][m[2] as usize]);
            acc = acc.add(&t.scale(c));
        }
        acc
    }

    /// Tries exact division by a nonzero form, returning the quotient.
    pub fn try_divide(&self, g: &Self) -> Option<Self> {
        assert!(!g.is_zero(), "division by the zero form");
        if self.is_zero() {
            return Some(Self::zero(self.degree.checked_sub(g.degree)?));
        }
        if self.degree < g.degree {
            return None;
        }
        let (glm, glc) = g.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.degree - g.degree);
        while let Some((rlm, rlc)) = rem.leading() {
            if rlm[0] < glm[0] || rlm[1] < glm[1] || rlm[2] < glm[2] {
                return None;
            }
            let qm = [rlm[0] - glm[0], rlm[1] - glm[1], rlm[2] - glm[2]];
            let qc = rlc / glc;
            let mut qterm = BTreeMap::new();
            qterm.insert(qm, qc);
            let qterm = Self { degree: quot.degree, terms: qterm };
            rem = rem.sub(&qterm.mul(g));
            quot = quot.add(&qterm);
        }
        Some(quot)
    }

    /// Divides out the highest power of `g`, returning the cofactor and the
    /// multiplicity.
    pub fn divide_out(&self, g: &Self) -> (Self, usize) {
        if self.is_zero() {
            return (self.clone(), 0);
        }
        let mut f = self.clone();
        let mut k = 0;
        while let Some(q) = f.try_divide(g) {
            f = q;
            k += 1;
        }
        (f, k)
    }

    /// Multiplicity of the form at a point: the order of vanishing, computed
    /// from the Taylor expansion in an adapted affine chart.
    pub fn multiplicity_at(&self, p: &ProjPoint) -> usize {
        if self.is_zero() {
            return self.degree + 1;
        }
        let frame = adapted_frame(p);
        let local = self.compose_projectivity(&frame);
        // In the adapted frame the point is [0:0:1]; multiplicity is the
        // least i + j over surviving monomials x^i y^j z^k.
        local
            .terms
            .keys()
            .map(|m| m[0] as usize + m[1] as usize)
            .min()
            .unwrap_or(self.degree + 1)
    }

    /// Composition with a projectivity: `f(M x)`.
    pub fn compose_projectivity(&self, m: &crate::projective::Projectivity) -> Self {
        let rows = &m.m;
        // Component r of Mx is the linear form with coefficients row r of M.
        let lin = |r: usize| {
            let mut terms = BTreeMap::new();
            for (mono, c) in [
                ([1u16, 0, 0], rows[r][0].clone()),
                ([0, 1, 0], rows[r][1].clone()),
                ([0, 0, 1], rows[r][2].clone()),
            ] {
                if !c.is_zero() {
                    terms.insert(mono, c);
                }
            }
            Self { degree: 1, terms }
        };
        self.substitute(&[lin(0), lin(1), lin(2)])
    }

    /// Product of lines with multiplicities.
    pub fn product_of_lines<'a, I>(factors: I) -> Self
    where
        I: IntoIterator<Item = (&'a ProjLine, usize)>,
    {
        let mut acc = Self::constant_one();
        for (l, k) in factors {
            acc = acc.mul(&Self::from_line(l).pow(k));
        }
        acc
    }
}

/// Projectivity sending `[0:0:1]` to `p` (used to read off multiplicities in
/// an adapted chart); the other two columns are deterministic reference
/// points completing a frame.
pub(crate) fn adapted_frame(p: &ProjPoint) -> crate::projective::Projectivity {
    use crate::projective::Projectivity;
    let refs = [
        ProjPoint::from_ints(1, 0, 0).expect("nonzero"),
        ProjPoint::from_ints(0, 1, 0).expect("nonzero"),
        ProjPoint::from_ints(0, 0, 1).expect("nonzero"),
        ProjPoint::from_ints(1, 1, 1).expect("nonzero"),
    ];
    for i in 0..refs.len() {
        for j in (i + 1)..refs.len() {
            if let Ok(t) = Projectivity::from_columns(&refs[i], &refs[j], p) {
                return t;
            }
        }
    }
    unreachable!("some pair of reference points completes a frame with p")
}

/// All exponent triples of the given degree in descending lex order.
///
/// This is the fixed column order of every interpolation matrix.
pub fn monomials_of_degree(d: usize) -> Vec<Mono> {
    let mut v = Vec::with_capacity((d + 1) * (d + 2) / 2);
    for i in (0..=d).rev() {
        for j in (0..=(d - i)).rev() {
            let k = d - i - j;
            v.push([i as u16, j as u16, k as u16]);
        }
    }
    v
}

impl fmt::Debug for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let vars = ["x", "y", "z"];
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for (v, e) in vars.iter().zip(m.iter()) {
                match e {
                    0 => {}
                    1 => {
                        if !mono.is_empty() {
                            mono.push('*');
                        }
                        mono.push_str(v);
                    }
                    _ => {
                        if !mono.is_empty() {
                            mono.push('*');
                        }
                        mono.push_str(&format!("{v}^{e}"));
                    }
                }
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    degree: usize,
    terms: Vec<(u16, u16, u16, String)>,
}

impl Serialize for HomPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| (m[0], m[1], m[2], c.to_string()))
            .collect();
        PolyRepr { degree: self.degree, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for (i, j, k, c) in repr.terms {
            let coeff = crate::rational::parse_rational(&c).map_err(D::Error::custom)?;
            terms.push(([i, j, k], coeff));
        }
        HomPoly::from_terms(repr.degree, terms).map_err(D::Error::custom)
    }
}
