//! Interpolation rows: the linear conditions a base scheme imposes on the
//! coefficients of a degree-D form.
//!
//! All rows have integer entries. A multiplicity-mu condition at a point P
//! contributes one row per derivative order (a, b) with a + b < mu, taken in
//! an affine chart where a fixed coordinate of P is nonzero; clearing the
//! chart denominator turns the row integral without changing its kernel.
//!
//! A tangent-direction condition of order nu at (P, dir), on top of a proper
//! multiplicity mu at P, contributes the coefficients c_{mu+a, i} (a + i < nu)
//! of the expansion of the form in a frame adapted to (P, dir): these say the
//! strict transform under blowing up P passes through the point of the
//! exceptional line marked by dir, to order nu.

use crate::poly::{monomials_of_degree, HomPoly, Mono};
use crate::projective::{canonical_point_off_line, ProjLine, ProjPoint, Projectivity};
use crate::rational::Int;
use num_traits::{One, Signed, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Falling factorial e (e-1) ... (e-a+1) as a big integer.
fn falling(e: u16, a: u16) -> Int {
    let mut acc = Int::one();
    for k in 0..a {
        acc *= Int::from(e - k);
    }
    acc
}

/// Chart coordinate for a point: the index of its largest-magnitude
/// primitive coordinate (ties to the smaller index).
fn chart_index(p: &[Int; 3]) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if p[i].abs() > p[best].abs() {
            best = i;
        }
    }
    best
}

/// Rows imposing multiplicity `mu` at `point` on forms of degree `degree`.
pub fn point_rows(degree: usize, point: &ProjPoint, mu: usize, monos: &[Mono]) -> Vec<Vec<Int>> {
    let p = point.primitive();
    let c = chart_index(&p);
    let (i, j) = match c {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    debug_assert!(!p[c].is_zero());
    // Power tables up to the degree avoid repeated bigint pow.
    let pow_table = |x: &Int| {
        let mut v = Vec::with_capacity(degree + 1);
        v.push(Int::one());
        for k in 1..=degree {
            let prev = v[k - 1].clone();
            v.push(prev * x);
        }
        v
    };
    let pows = [pow_table(&p[0]), pow_table(&p[1]), pow_table(&p[2])];
    let mut rows = Vec::with_capacity(mu * (mu + 1) / 2);
    for a in 0..mu as u16 {
        for b in 0..(mu as u16 - a) {
            let row: Vec<Int> = monos
                .iter()
                .map(|m| {
                    if m[i] < a || m[j] < b {
                        return Int::zero();
                    }
                    falling(m[i], a)
                        * falling(m[j], b)
                        * &pows[i][(m[i] - a) as usize]
                        * &pows[j][(m[j] - b) as usize]
                        * &pows[c][m[c] as usize]
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Rows for a tangent-direction condition of order `nu` at `point` along
/// `direction`, given the proper multiplicity `mu` already imposed there.
///
/// Expands each monomial in the adapted frame (columns: a point of the
/// direction, a point off it, the base point) and extracts the coefficients
/// that control the strict transform at the marked exceptional point.
pub fn tangent_rows(
    degree: usize,
    point: &ProjPoint,
    direction: &ProjLine,
    nu: usize,
    mu: usize,
    monos: &[Mono],
) -> crate::Result<Vec<Vec<Int>>> {
    if !direction.contains(point) {
        return Err(crate::EngineError::Invalid(
            "tangent condition: the direction line must pass through the point".into(),
        ));
    }
    let v = direction.point_avoiding(std::slice::from_ref(point));
    let w = canonical_point_off_line(direction);
    let frame = Projectivity::from_columns(&v, &w, point)?;
    // Wanted coefficients: x^{mu+a-i} y^i z^{degree-mu-a} for a + i < nu.
    let mut wanted: Vec<Mono> = Vec::new();
    for a in 0..nu {
        for i in 0..(nu - a) {
            let xe = mu + a - i;
            let ze = degree - mu - a;
            wanted.push([xe as u16, i as u16, ze as u16]);
        }
    }
    let mut rows = vec![Vec::with_capacity(monos.len()); wanted.len()];
    for mono in monos {
        let m = HomPoly::from_terms(degree, vec![(*mono, crate::rational::Rational::one())])
            .expect("monomial is well formed");
        let expanded = m.compose_projectivity(&frame);
        // The frame has rational entries; scale to integers consistently by
        // using the primitive parts of the whole column polynomial. Columns
        // must share one scaling, so scale by the common denominator only.
        for (target, row) in wanted.iter().zip(rows.iter_mut()) {
            row.push(expanded.coeff(*target));
        }
    }
    // Rows currently rational; clear denominators per row.
    let int_rows = rows
        .into_iter()
        .map(|row| {
            crate::rational::primitive_integer_vector(&row)
                .unwrap_or_else(|| vec![Int::zero(); monos.len()])
        })
        .collect();
    Ok(int_rows)
}

/// The full condition matrix of a linear system specification.
pub fn condition_matrix(
    degree: usize,
    conditions: &[(ProjPoint, usize)],
    tangent: Option<&(ProjPoint, ProjLine, usize)>,
) -> crate::Result<IntMatrix> {
    let monos = monomials_of_degree(degree);
    #[cfg(feature = "parallel")]
    let mut rows: Vec<Vec<Int>> = conditions
        .par_iter()
        .map(|(p, mu)| point_rows(degree, p, *mu, &monos))
        .flatten()
        .collect();
    #[cfg(not(feature = "parallel"))]
    let mut rows: Vec<Vec<Int>> = conditions
        .iter()
        .flat_map(|(p, mu)| point_rows(degree, p, *mu, &monos))
        .collect();
    if let Some((p, dir, nu)) = tangent {
        let mu = conditions
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, m)| *m)
            .unwrap_or(0);
        rows.extend(tangent_rows(degree, p, dir, *nu, mu, &monos)?);
    }
    Ok(IntMatrix { ncols: monos.len(), rows })
}

/// Dense integer matrix, rows as vectors.
#[derive(Clone, Debug)]
pub struct IntMatrix {
    pub ncols: usize,
    pub rows: Vec<Vec<Int>>,
}

impl IntMatrix {
    /// Exact matrix-vector product against a rational vector.
    pub fn apply(&self, v: &[crate::rational::Rational]) -> Vec<crate::rational::Rational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v.iter())
                    .map(|(a, b)| crate::rational::Rational::from_integer(a.clone()) * b)
                    .fold(crate::rational::Rational::zero(), |s, t| s + t)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::HomPoly;
    use crate::rational::Rational;

    fn kernel_contains(m: &IntMatrix, f: &HomPoly, degree: usize) -> bool {
        let monos = monomials_of_degree(degree);
        let v: Vec<Rational> = monos.iter().map(|mo| f.coeff(*mo)).collect();
        m.apply(&v).iter().all(|x| x.is_zero())
    }

    #[test]
    fn simple_point_row_is_evaluation() {
        let p = ProjPoint::from_ints(2, -1, 3).unwrap();
        let monos = monomials_of_degree(2);
        let rows = point_rows(2, &p, 1, &monos);
        assert_eq!(rows.len(), 1);
        // The single row evaluates the monomials at the point.
        let expect: Vec<Int> = vec![
            4.into(),  // x^2
            (-2).into(),
            6.into(),
            1.into(), // y^2
            (-3).into(),
            9.into(), // z^2
        ];
        assert_eq!(rows[0], expect);
    }

    #[test]
    fn double_point_rows_annihilate_squares() {
        let p = ProjPoint::from_ints(1, 2, 1).unwrap();
        let monos = monomials_of_degree(2);
        let m = IntMatrix { ncols: monos.len(), rows: point_rows(2, &p, 2, &monos) };
        assert_eq!(m.rows.len(), 3);
        // A double line through p satisfies multiplicity 2; a single generic
        // conic through p does not.
        let l = crate::projective::join(&p, &ProjPoint::from_ints(0, 0, 1).unwrap()).unwrap();
        let sq = HomPoly::from_line(&l).mul(&HomPoly::from_line(&l));
        assert!(kernel_contains(&m, &sq, 2));
        // A conic with only simple multiplicity at the point fails the rows.
        let other = crate::projective::ProjLine::from_ints(1, 0, 0).unwrap();
        assert!(!other.contains(&p));
        let conic = HomPoly::from_line(&l).mul(&HomPoly::from_line(&other));
        assert!(!kernel_contains(&m, &conic, 2));
    }

    #[test]
    fn tangent_rows_cut_the_conic_net() {
        // Conics through p tangent to dir, through r: the model net.
        let p = ProjPoint::from_ints(0, 0, 1).unwrap();
        let dir = ProjLine::from_ints(0, 1, 0).unwrap();
        let r = ProjPoint::from_ints(0, 1, 0).unwrap();
        let monos = monomials_of_degree(2);
        let mut rows = point_rows(2, &p, 1, &monos);
        rows.extend(point_rows(2, &r, 1, &monos));
        rows.extend(tangent_rows(2, &p, &dir, 1, 1, &monos).unwrap());
        let m = IntMatrix { ncols: monos.len(), rows };
        let x = HomPoly::from_line(&ProjLine::from_ints(1, 0, 0).unwrap());
        let y = HomPoly::from_line(&ProjLine::from_ints(0, 1, 0).unwrap());
        let z = HomPoly::from_line(&ProjLine::from_ints(0, 0, 1).unwrap());
        // x^2, xy, yz all satisfy the conditions.
        for f in [x.mul(&x), x.mul(&y), y.mul(&z)] {
            assert!(kernel_contains(&m, &f, 2), "{f} should satisfy the net");
        }
        // xz passes through p and r but is not tangent to dir at p.
        assert!(!kernel_contains(&m, &x.mul(&z), 2));
        // y^2 is tangent (doubly) but misses r... it contains r? y^2 at
        // [0:1:0] is 1, nonzero, so it violates the r condition.
        assert!(!kernel_contains(&m, &y.mul(&y), 2));
    }

    #[test]
    fn tangent_condition_rejects_point_off_direction() {
        let p = ProjPoint::from_ints(1, 1, 1).unwrap();
        let dir = ProjLine::from_ints(1, 0, 0).unwrap();
        let monos = monomials_of_degree(2);
        assert!(tangent_rows(2, &p, &dir, 1, 1, &monos).is_err());
    }
}
