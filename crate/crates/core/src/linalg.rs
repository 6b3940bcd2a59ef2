//! Diagonal normal form over a chain ring and the exact solvers built on it.
//!
//! Every element of a chain ring is `unit * p^a`, so pivoting on an entry of
//! minimal valuation always divides the remaining block and a plain
//! elimination reaches `A = U * D * V` with `D_ii = p^{a_i}` and
//! `a_1 <= a_2 <= ...`. Zero diagonal entries are recorded as `a_i = n`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Ring, RingElem};

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub u_inv: Matrix,
    pub v_inv: Matrix,
    /// Valuations of the diagonal, `min(rows, cols)` entries, nondecreasing.
    pub invariants: Vec<u32>,
}

/// Smith-style normal form. Pivot rule: minimal valuation, first in
/// row-major order; pivot units are folded into `U`.
pub fn smith(a: &Matrix) -> SmithForm {
    let ring = a.ring().clone();
    let n = ring.n();
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(&ring, rows);
    let mut u_inv = Matrix::identity(&ring, rows);
    let mut v = Matrix::identity(&ring, cols);
    let mut v_inv = Matrix::identity(&ring, cols);
    let mut invariants = Vec::with_capacity(rows.min(cols));

    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in k..rows {
            for j in k..cols {
                let val = ring.val(d.get(i, j));
                if val < n && best.is_none_or(|(b, _, _)| val < b) {
                    best = Some((val, i, j));
                    if val == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((s, pi, pj)) = best else {
            invariants.extend(std::iter::repeat_n(n, rows.min(cols) - k));
            break;
        };
        // A = u d v; d <- P d means u <- u P^{-1}.
        d.swap_rows(k, pi);
        u.swap_cols(k, pi);
        u_inv.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_rows(k, pj);
        v_inv.swap_cols(k, pj);

        let unit = ring.div_p_pow(d.get(k, k), s);
        let unit_inv = ring.inv(&unit).expect("pivot cofactor is a unit");
        d.scale_row(k, &unit_inv);
        u.scale_col(k, &unit);
        u_inv.scale_row(k, &unit_inv);
        debug_assert_eq!(d.get(k, k), &ring.p_pow(s));

        for i in k + 1..rows {
            let entry = d.get(i, k);
            if ring.is_zero(entry) {
                continue;
            }
            let c = ring.div_p_pow(entry, s);
            let neg_c = ring.neg(&c);
            d.add_row_multiple(i, k, &neg_c);
            u.add_col_multiple(k, i, &c);
            u_inv.add_row_multiple(i, k, &neg_c);
        }
        for j in k + 1..cols {
            let entry = d.get(k, j);
            if ring.is_zero(entry) {
                continue;
            }
            let c = ring.div_p_pow(entry, s);
            let neg_c = ring.neg(&c);
            d.add_col_multiple(j, k, &neg_c);
            v.add_row_multiple(k, j, &c);
            v_inv.add_col_multiple(j, k, &neg_c);
        }
        invariants.push(s);
    }
    SmithForm { u, d, v, u_inv, v_inv, invariants }
}

/// Columns generating `{v : A v = 0}`.
pub fn kernel(a: &Matrix) -> Matrix {
    let ring = a.ring();
    let sf = smith(a);
    let n = ring.n();
    let mut gens = Vec::new();
    let r = a.rows().min(a.cols());
    for i in 0..a.cols() {
        let scale = if i < r {
            let ai = sf.invariants[i];
            if ai == 0 {
                continue;
            }
            n - ai
        } else {
            0
        };
        let col = sf.v_inv.column(i);
        let p = ring.p_pow(scale);
        gens.push(col.iter().map(|x| ring.mul(x, &p)).collect::<Vec<_>>());
    }
    Matrix::from_columns(ring, a.cols(), &gens)
}

/// Canonical presentation of a cokernel: the module `⊕ R/p^{exps[i]}` with
/// `exps` sorted descending, the coordinate map from the ambient space and a
/// section back into it.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub exps: Vec<u32>,
    /// `len x m`: ambient vector to canonical coordinates (reduce afterwards).
    pub to_canon: Matrix,
    /// `m x len`: canonical generator `k` to an ambient representative.
    pub from_canon: Matrix,
}

impl Cokernel {
    /// Canonical coordinates of an ambient vector, reduced.
    pub fn project(&self, v: &[RingElem]) -> Vec<RingElem> {
        let ring = self.to_canon.ring();
        self.to_canon
            .mul_vec(v)
            .into_iter()
            .zip(&self.exps)
            .map(|(c, &e)| ring.reduce_mod_p_pow(&c, e))
            .collect()
    }
}

/// Cokernel of `rels` inside `⊕ R/p^{ambient_exps[i]}`.
pub fn cokernel_in(ring: &Ring, ambient_exps: &[u32], rels: &Matrix) -> Cokernel {
    let m = ambient_exps.len();
    assert_eq!(rels.rows(), m, "relation rows must match ambient rank");
    let n = ring.n();
    let trivial_rels = rels.is_zero();
    if trivial_rels {
        // Already diagonal: only sort.
        let mut order: Vec<usize> = (0..m).filter(|&i| ambient_exps[i] > 0).collect();
        order.sort_by(|&a, &b| ambient_exps[b].cmp(&ambient_exps[a]).then(a.cmp(&b)));
        let exps = order.iter().map(|&i| ambient_exps[i]).collect();
        let mut to_canon = Matrix::zeros(ring, order.len(), m);
        let mut from_canon = Matrix::zeros(ring, m, order.len());
        for (k, &i) in order.iter().enumerate() {
            to_canon.set(k, i, ring.one());
            from_canon.set(i, k, ring.one());
        }
        return Cokernel { exps, to_canon, from_canon };
    }
    let mut torsion = Matrix::zeros(ring, m, 0);
    let tcols: Vec<Vec<RingElem>> = (0..m)
        .filter(|&i| ambient_exps[i] < n)
        .map(|i| {
            let mut c = vec![ring.zero(); m];
            c[i] = ring.p_pow(ambient_exps[i]);
            c
        })
        .collect();
    if !tcols.is_empty() {
        torsion = Matrix::from_columns(ring, m, &tcols);
    }
    let full = rels.hstack(&torsion);
    cokernel_of(&full)
}

/// Cokernel of `a` on the free module `R^{rows}`.
pub fn cokernel_of(a: &Matrix) -> Cokernel {
    let ring = a.ring();
    let n = ring.n();
    let m = a.rows();
    let sf = smith(a);
    let mut summands: Vec<(u32, usize)> = Vec::new();
    for i in 0..m {
        let e = if i < sf.invariants.len() { sf.invariants[i] } else { n };
        if e > 0 {
            summands.push((e, i));
        }
    }
    summands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let exps = summands.iter().map(|s| s.0).collect();
    let idx: Vec<usize> = summands.iter().map(|s| s.1).collect();
    let mut to_canon = Matrix::zeros(ring, idx.len(), m);
    for (k, &i) in idx.iter().enumerate() {
        for c in 0..m {
            to_canon.set(k, c, sf.u_inv.get(i, c).clone());
        }
    }
    let from_canon = sf.u.select_columns(&idx);
    let ck = Cokernel { exps, to_canon, from_canon };
    let reduced = ck.to_canon.reduce_rows(&ck.exps);
    Cokernel { to_canon: reduced, ..ck }
}

/// Generators of the column span, one per nonzero invariant.
pub fn image_span(a: &Matrix) -> Matrix {
    let ring = a.ring();
    let sf = smith(a);
    let cols: Vec<Vec<RingElem>> = sf
        .invariants
        .iter()
        .enumerate()
        .filter(|(_, &ai)| ai < ring.n())
        .map(|(i, &ai)| {
            let p = ring.p_pow(ai);
            sf.u.column(i).iter().map(|x| ring.mul(x, &p)).collect()
        })
        .collect();
    Matrix::from_columns(ring, a.rows(), &cols)
}

/// Some `x` with `A x = b`, if one exists.
pub fn solve(a: &Matrix, b: &[RingElem]) -> Result<Option<Vec<RingElem>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!("solve: {} rows vs rhs {}", a.rows(), b.len())));
    }
    let sf = smith(a);
    Ok(solve_with(&sf, a.cols(), b))
}

/// Solves using a precomputed normal form of a matrix with `cols` columns.
pub fn solve_with(sf: &SmithForm, cols: usize, b: &[RingElem]) -> Option<Vec<RingElem>> {
    let ring = sf.u.ring();
    let n = ring.n();
    let c = sf.u_inv.mul_vec(b);
    let mut w = vec![ring.zero(); cols];
    for (i, ci) in c.iter().enumerate() {
        let ai = sf.invariants.get(i).copied().unwrap_or(n);
        if ring.val(ci) < ai {
            return None;
        }
        if i < cols && ai < n {
            w[i] = ring.div_p_pow(ci, ai);
        }
    }
    Some(sf.v_inv.mul_vec(&w))
}

pub fn is_invertible(a: &Matrix) -> bool {
    a.rows() == a.cols() && smith(a).invariants.iter().all(|&e| e == 0)
}

/// Inverse of a square matrix, if invertible.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    if a.rows() != a.cols() {
        return None;
    }
    let sf = smith(a);
    if sf.invariants.iter().any(|&e| e != 0) {
        return None;
    }
    // A = U V (D = I), so A^{-1} = V^{-1} U^{-1}.
    Some(sf.v_inv.mul(&sf.u_inv))
}

/// Rank of the reduction modulo `p` (number of unit invariants).
pub fn rank_mod_p(a: &Matrix) -> usize {
    smith(a).invariants.iter().filter(|&&e| e == 0).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z8() -> Ring {
        Ring::new(2, 3, 1).unwrap()
    }

    #[test]
    fn identity_normal_form() {
        let r = Ring::new(2, 2, 2).unwrap();
        let sf = smith(&Matrix::identity(&r, 3));
        assert_eq!(sf.invariants, vec![0, 0, 0]);
        assert_eq!(sf.u, Matrix::identity(&r, 3));
        assert_eq!(sf.d, Matrix::identity(&r, 3));
        assert_eq!(sf.v, Matrix::identity(&r, 3));
    }

    #[test]
    fn single_entry() {
        let r = z8();
        let sf = smith(&Matrix::from_ints(&r, &[&[2]]));
        assert_eq!(sf.invariants, vec![1]);
        assert_eq!(sf.d, Matrix::from_ints(&r, &[&[2]]));
    }

    #[test]
    fn two_by_two_over_z8() {
        let r = z8();
        let a = Matrix::from_ints(&r, &[&[2, 4], &[6, 4]]);
        let sf = smith(&a);
        assert_eq!(sf.invariants, vec![1, 3]);
        assert_eq!(sf.d, Matrix::from_ints(&r, &[&[2, 0], &[0, 0]]));
        assert_eq!(sf.u.mul(&sf.d).mul(&sf.v), a);
        let ck = cokernel_of(&a);
        assert_eq!(ck.exps, vec![3, 1]);
    }

    #[test]
    fn kernel_of_two() {
        let r = z8();
        let k = kernel(&Matrix::from_ints(&r, &[&[2]]));
        assert_eq!(k, Matrix::from_ints(&r, &[&[4]]));
    }

    #[test]
    fn solve_identity_and_invertibility() {
        let r = z8();
        let b = vec![r.from_int(5), r.from_int(3)];
        assert_eq!(solve(&Matrix::identity(&r, 2), &b).unwrap(), Some(b));
        assert!(is_invertible(&Matrix::from_ints(&r, &[&[3]])));
        assert!(!is_invertible(&Matrix::from_ints(&r, &[&[2]])));
        assert!(solve(&Matrix::from_ints(&r, &[&[2]]), &[r.from_int(1)]).unwrap().is_none());
        assert!(solve(&Matrix::identity(&r, 2), &[r.one()]).is_err());
    }

    #[test]
    fn wide_and_tall_shapes() {
        let r = z8();
        let a = Matrix::from_ints(&r, &[&[2, 4, 6]]);
        let sf = smith(&a);
        assert_eq!(sf.u.mul(&sf.d).mul(&sf.v), a);
        assert_eq!(kernel(&a).cols(), 3);
        let t = a.transpose();
        let sf = smith(&t);
        assert_eq!(sf.u.mul(&sf.d).mul(&sf.v), t);
        assert_eq!(cokernel_of(&t).exps, vec![3, 3, 1]);
    }
}
