//! Morphisms of filtered F-modules.

use super::{preimage, sigma, FilteredFModule, Step};
use crate::algebra::AlgebraSpec;
use crate::coalgebra::MapSpace;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{self, FinModule, ModuleMap, Submodule};
use crate::ring::RingElem;

/// Unknown `W`-matrix laid out row-major inside the unknown vector.
struct Block {
    offset: usize,
    cols: usize,
}

impl Block {
    fn entry(&self, r: usize, c: usize) -> usize {
        self.offset + r * self.cols + c
    }
}

fn common_steps(x: &FilteredFModule, y: &FilteredFModule) -> Vec<(Step, Step)> {
    let (lo, hi) = (x.lo().min(y.lo()), x.hi().max(y.hi()));
    (lo..=hi).map(|i| (x.step(i), y.step(i))).collect()
}

/// `Hom_MF(X, Y)` as a `Z/p^n`-module with `W`-matrix generators.
///
/// The unknowns are `g: M → M'` and the restrictions `g_i: Fil^i → Fil'^i`
/// in `R`-coordinates; the constraints are well-definedness,
/// `ι'_i g_i = g ι_i` and `Φ'^i σ(g_i) = g Φ^i`. Since the `ι'_i` are
/// injective, `g` determines the `g_i` and the solution space projects
/// isomorphically onto its `g` part.
pub fn mf_hom(x: &FilteredFModule, y: &FilteredFModule) -> Result<MapSpace> {
    if x.ring() != y.ring() {
        return Err(Error::RingMismatch(x.ring().to_string(), y.ring().to_string()));
    }
    let w = x.ring();
    let alg = AlgebraSpec::over_prime_ring(w)?;
    let r = alg.r();
    let f = alg.degree();
    let (m, m2) = (x.module(), y.module());
    let steps = common_steps(x, y);

    let g = Block { offset: 0, cols: m.len() };
    let mut blocks = Vec::with_capacity(steps.len());
    let mut entry_exps: Vec<u32> = (0..m2.len() * m.len()).map(|k| m2.exps()[k / m.len().max(1)]).collect();
    for (a, b) in &steps {
        blocks.push(Block { offset: entry_exps.len(), cols: a.module.len() });
        for t in 0..b.module.len() {
            entry_exps.extend(std::iter::repeat_n(b.module.exps()[t], a.module.len()));
        }
    }

    let mut sig = Matrix::zeros(r, f, f);
    for k in 0..f {
        let coords = alg.to_r_coords(&w.frobenius(&w.basis_elem(k)));
        for (j, c) in coords.into_iter().enumerate() {
            sig.set(j, k, c);
        }
    }
    let scalar = |e: u32| Matrix::identity(r, f).scale(&r.p_pow(e));
    let neg = |mat: Matrix| mat.scale(&r.from_int(-1));

    let mut eqs: Vec<(Vec<(usize, Matrix)>, u32)> = Vec::new();
    for j in 0..m2.len() {
        for s in 0..m.len() {
            eqs.push((vec![(g.entry(j, s), scalar(m.exps()[s]))], m2.exps()[j]));
        }
    }
    for ((a, b), blk) in steps.iter().zip(&blocks) {
        for t in 0..b.module.len() {
            for c in 0..a.module.len() {
                eqs.push((vec![(blk.entry(t, c), scalar(a.module.exps()[c]))], b.module.exps()[t]));
            }
        }
        for j in 0..m2.len() {
            for c in 0..a.module.len() {
                let mut incl_terms = Vec::new();
                let mut phi_terms = Vec::new();
                for t in 0..b.module.len() {
                    incl_terms.push((blk.entry(t, c), alg.mult_matrix(b.incl.get(j, t))));
                    phi_terms.push((blk.entry(t, c), alg.mult_matrix(b.phi.get(j, t)).mul(&sig)));
                }
                for s in 0..m.len() {
                    incl_terms.push((g.entry(j, s), neg(alg.mult_matrix(a.incl.get(s, c)))));
                    phi_terms.push((g.entry(j, s), neg(alg.mult_matrix(a.phi.get(s, c)))));
                }
                eqs.push((incl_terms, m2.exps()[j]));
                eqs.push((phi_terms, m2.exps()[j]));
            }
        }
    }

    let n_unknown = entry_exps.len() * f;
    let mut sys = Matrix::zeros(r, eqs.len() * f, n_unknown);
    let mut target_exps = Vec::with_capacity(eqs.len() * f);
    for (q, (terms, e)) in eqs.iter().enumerate() {
        for (u, blockmat) in terms {
            for i in 0..f {
                for k in 0..f {
                    let cur = sys.get(q * f + i, u * f + k).clone();
                    sys.set(q * f + i, u * f + k, r.add(&cur, blockmat.get(i, k)));
                }
            }
        }
        target_exps.extend(std::iter::repeat_n(*e, f));
    }
    let domain_exps: Vec<u32> = entry_exps.iter().flat_map(|&e| std::iter::repeat_n(e, f)).collect();
    let kernel = module::kernel_gens(&domain_exps, &sys, &target_exps);

    let g_len = m2.len() * m.len() * f;
    let g_exps = &domain_exps[..g_len];
    let mut order: Vec<usize> = (0..g_len).collect();
    order.sort_by(|&a, &b| g_exps[b].cmp(&g_exps[a]).then(a.cmp(&b)));
    let space = FinModule::new(r, &order.iter().map(|&i| g_exps[i]).collect::<Vec<_>>())?;
    let cols: Vec<Vec<RingElem>> =
        kernel.columns().iter().map(|c| order.iter().map(|&i| c[i].clone()).collect()).collect();
    let sub = Submodule::generated(&space, &Matrix::from_columns(r, g_len, &cols));
    let maps = sub
        .inclusion_matrix()
        .columns()
        .iter()
        .map(|c| {
            let mut v = vec![r.zero(); g_len];
            for (k, &i) in order.iter().enumerate() {
                v[i] = c[k].clone();
            }
            alg.unflatten_b_matrix(&v, m2.len(), m.len()).reduce_rows(m2.exps())
        })
        .collect();
    Ok(MapSpace { module: sub.module().clone(), maps })
}

/// Direct check that a `W`-matrix is a morphism `X → Y`.
pub fn is_mf_morphism(x: &FilteredFModule, y: &FilteredFModule, g: &Matrix) -> bool {
    if x.ring() != y.ring() || g.rows() != y.module().len() || g.cols() != x.module().len() {
        return false;
    }
    let (m, m2) = (x.module(), y.module());
    if ModuleMap::new(m, m2, g.clone()).is_err() {
        return false;
    }
    for (a, b) in common_steps(x, y) {
        let mut cols = Vec::with_capacity(a.module.len());
        for c in 0..a.module.len() {
            match preimage(&b.incl, m2, b.module.exps(), &g.mul_vec(&a.incl.column(c))) {
                Some(v) => cols.push(v),
                None => return false,
            }
        }
        let gi = Matrix::from_columns(x.ring(), b.module.len(), &cols);
        let lhs = b.phi.mul(&sigma(&gi)).reduce_rows(m2.exps());
        let rhs = g.mul(&a.phi).reduce_rows(m2.exps());
        if lhs != rhs {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::{mf_direct_sum, tate};
    use crate::ring::Ring;

    #[test]
    fn tate_homs() {
        let w = Ring::new(2, 1, 1).unwrap();
        let (m0, m1) = (tate(&w, 0), tate(&w, 1));
        let h = mf_hom(&m0, &m0).unwrap();
        assert_eq!(h.module.exps(), &[1]);
        assert_eq!(h.maps, vec![Matrix::identity(&w, 1)]);
        assert!(mf_hom(&m0, &m1).unwrap().module.is_zero());
        assert!(mf_hom(&m1, &m0).unwrap().module.is_zero());
        assert_eq!(mf_hom(&m1, &m1).unwrap().module.exps(), &[1]);
        let s = mf_direct_sum(&m0, &m0).unwrap();
        assert_eq!(mf_hom(&m0, &s).unwrap().module.exps(), &[1, 1]);
    }

    #[test]
    fn semilinear_homs_over_f4() {
        // M(0) over F_4: φ = σ, so Hom is the fixed field F_2.
        let w = Ring::new(2, 1, 2).unwrap();
        let m0 = tate(&w, 0);
        let h = mf_hom(&m0, &m0).unwrap();
        assert_eq!(h.module.exps(), &[1]);
        assert!(!is_mf_morphism(&m0, &m0, &Matrix::from_rows(&w, vec![vec![w.gen()]]).unwrap()));
        assert!(is_mf_morphism(&m0, &m0, &h.maps[0]));
    }
}
