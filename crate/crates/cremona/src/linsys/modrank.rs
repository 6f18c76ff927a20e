//! Rank and kernel of integer matrices, certified exactly.
//!
//! Strategy: row-reduce modulo large word-size primes. Any single prime
//! already certifies emptiness when the reduction has full column rank,
//! because a nonzero minor mod p is a nonzero minor over the rationals.
//! For nonempty kernels the candidate basis is lifted by CRT across primes,
//! reconstructed to rationals, and then verified exactly against the integer
//! matrix; the verified vectors are in reduced echelon shape (one free column
//! each), so their independence is structural and, combined with the rank
//! lower bound from any one prime, pins the kernel dimension exactly.

use super::rows::IntMatrix;
use crate::rational::{
    add_mod_u64, bigint_mod_u64, inv_mod_u64, is_prime_u64, mul_mod_u64, rational_reconstruct,
    Int, Rational,
};
use num_traits::{One, Signed, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Primes just below 2^62, descending. Generated once, lazily.
fn prime_pool() -> &'static [u64] {
    use std::sync::OnceLock;
    static POOL: OnceLock<Vec<u64>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut primes = Vec::with_capacity(40);
        let mut candidate: u64 = (1u64 << 62) - 1;
        while primes.len() < 40 {
            if is_prime_u64(candidate) {
                primes.push(candidate);
            }
            candidate -= 2;
        }
        primes
    })
}

/// Row echelon data of a matrix reduced modulo one prime.
struct ModRref {
    rank: usize,
    pivot_cols: Vec<usize>,
    free_cols: Vec<usize>,
    /// Reduced rows: rref[r] has 1 at pivot_cols[r], entries only at free
    /// columns elsewhere.
    rows: Vec<Vec<u64>>,
}

/// Reduce `m` modulo `p` to reduced row echelon form.
fn rref_mod(m: &IntMatrix, p: u64) -> ModRref {
    let mut rows: Vec<Vec<u64>> = {
        #[cfg(feature = "parallel")]
        {
            m.rows
                .par_iter()
                .map(|row| row.iter().map(|x| bigint_mod_u64(x, p)).collect())
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            m.rows
                .iter()
                .map(|row| row.iter().map(|x| bigint_mod_u64(x, p)).collect())
                .collect()
        }
    };
    let ncols = m.ncols;
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = inv_mod_u64(rows[r][c], p);
        for x in rows[r][c..].iter_mut() {
            *x = mul_mod_u64(*x, inv, p);
        }
        let pivot_row = rows[r].clone();
        let eliminate = |row: &mut Vec<u64>| {
            let f = row[c];
            if f != 0 {
                let neg = p - f;
                for (x, pv) in row[c..].iter_mut().zip(pivot_row[c..].iter()) {
                    *x = add_mod_u64(*x, mul_mod_u64(neg, *pv, p), p);
                }
            }
        };
        #[cfg(feature = "parallel")]
        {
            let (done, rest) = rows.split_at_mut(r + 1);
            done[..r].par_iter_mut().for_each(eliminate);
            rest.par_iter_mut().for_each(eliminate);
        }
        #[cfg(not(feature = "parallel"))]
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    let free_cols = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    ModRref { rank: r, pivot_cols, free_cols, rows }
}

/// Kernel basis mod p in echelon shape: one vector per free column f, with
/// entry 1 at f and -rref[r][f] at each pivot column.
fn kernel_mod(rref: &ModRref, ncols: usize, p: u64) -> Vec<Vec<u64>> {
    rref.free_cols
        .iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (r, &c) in rref.pivot_cols.iter().enumerate() {
                let x = rref.rows[r][f];
                if x != 0 {
                    v[c] = p - x;
                }
            }
            v
        })
        .collect()
}

/// Outcome of the certified computation.
pub struct CertifiedKernel {
    /// Rank of the matrix over the rationals.
    pub rank: usize,
    /// Kernel basis, verified exactly. In echelon shape: vector i has a 1 at
    /// its own free column and zeros at the other free columns.
    pub basis: Vec<Vec<Rational>>,
    /// Number of primes whose reductions went into the certificate.
    pub primes_used: usize,
}

/// Compute the exact rank and a verified kernel basis of `m`.
///
/// Returns None when the modular pipeline cannot settle the answer with the
/// available prime pool; callers fall back to exact elimination.
pub fn certified_kernel(m: &IntMatrix) -> Option<CertifiedKernel> {
    let ncols = m.ncols;
    if m.rows.is_empty() {
        let basis = (0..ncols)
            .map(|f| {
                let mut v = vec![Rational::zero(); ncols];
                v[f] = Rational::one();
                v
            })
            .collect();
        return Some(CertifiedKernel { rank: 0, basis, primes_used: 0 });
    }
    let pool = prime_pool();
    // Reference reduction: highest rank seen wins; primes disagreeing with
    // the reference pivot structure are unlucky for it and get skipped.
    let mut reference: Option<(usize, Vec<usize>)> = None;
    let mut agreeing: Vec<(u64, ModRref)> = Vec::new();
    for &p in pool {
        let rr = rref_mod(m, p);
        match &reference {
            None => {
                reference = Some((rr.rank, rr.pivot_cols.clone()));
                agreeing.push((p, rr));
            }
            Some((rank, pivots)) => {
                if rr.rank > *rank {
                    reference = Some((rr.rank, rr.pivot_cols.clone()));
                    agreeing.clear();
                    agreeing.push((p, rr));
                } else if rr.rank == *rank && rr.pivot_cols == *pivots {
                    agreeing.push((p, rr));
                }
            }
        }
        let (rank, _) = reference.as_ref().expect("reference set");
        if *rank == ncols {
            // Full column rank mod one prime certifies an empty kernel.
            return Some(CertifiedKernel { rank: ncols, basis: Vec::new(), primes_used: 1 });
        }
        if agreeing.len() < 2 {
            continue;
        }
        if let Some(basis) = try_reconstruct(m, &agreeing, ncols) {
            let rank = ncols - basis.len();
            return Some(CertifiedKernel { rank, basis, primes_used: agreeing.len() });
        }
    }
    None
}

/// CRT-combine the agreeing kernels, reconstruct rationals, verify exactly.
fn try_reconstruct(
    m: &IntMatrix,
    agreeing: &[(u64, ModRref)],
    ncols: usize,
) -> Option<Vec<Vec<Rational>>> {
    let kernels: Vec<(u64, Vec<Vec<u64>>)> = agreeing
        .iter()
        .map(|(p, rr)| (*p, kernel_mod(rr, ncols, *p)))
        .collect();
    let nker = kernels[0].1.len();
    let mut modulus = Int::one();
    for (p, _) in &kernels {
        modulus *= Int::from(*p);
    }
    // Bound for Wang reconstruction: floor(sqrt((M-1)/2)).
    let bound = ((&modulus - Int::one()) / Int::from(2)).sqrt();
    let mut basis = Vec::with_capacity(nker);
    for k in 0..nker {
        let mut vec_rat = Vec::with_capacity(ncols);
        for c in 0..ncols {
            // CRT on residues of entry (k, c).
            let mut x = Int::zero();
            let mut mcur = Int::one();
            for (p, ker) in &kernels {
                let pi = Int::from(*p);
                let r = Int::from(ker[k][c]);
                // Solve x' = x mod mcur, x' = r mod p.
                let minv = mod_inverse(&mcur, &pi)?;
                let t = ((&r - &x) % &pi * minv) % &pi;
                let t = if t.is_negative() { t + &pi } else { t };
                x += t * &mcur;
                mcur *= pi;
            }
            let val = rational_reconstruct(&x, &modulus, &bound, &bound)?;
            vec_rat.push(val);
        }
        basis.push(vec_rat);
    }
    // Exact verification: every reconstructed vector must annihilate m.
    let ok = {
        #[cfg(feature = "parallel")]
        {
            basis
                .par_iter()
                .all(|v| m.apply(v).iter().all(|x| x.is_zero()))
        }
        #[cfg(not(feature = "parallel"))]
        {
            basis.iter().all(|v| m.apply(v).iter().all(|x| x.is_zero()))
        }
    };
    if ok {
        Some(basis)
    } else {
        None
    }
}

/// Modular inverse of a mod m for big integers (extended Euclid).
fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    let (mut r0, mut r1) = (m.clone(), ((a % m) + m) % m);
    let (mut t0, mut t1) = (Int::zero(), Int::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0 != Int::one() {
        return None;
    }
    let inv = ((t0 % m) + m) % m;
    Some(inv)
}
