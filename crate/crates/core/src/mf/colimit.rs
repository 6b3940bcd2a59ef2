//! Export of `MF_proj` families to diagram categories and the colimit probe.

use super::{is_mf_morphism, is_mf_proj, mf_hom, mf_make, sigma, FilteredFModule};
use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Matrix;
use crate::module::{self, FinModule, Submodule};
use crate::tannaka::DiagramCategory;

/// The diagram of named `MF_proj` objects with hom spans from the solver.
pub fn mf_to_diagram(objects: &[(String, FilteredFModule)]) -> Result<DiagramCategory> {
    let w = match objects.first() {
        Some((_, x)) => x.ring().clone(),
        None => return Err(Error::Diagram("no objects".into())),
    };
    let alg = AlgebraSpec::over_prime_ring(&w)?;
    let mut d = DiagramCategory::new(&alg);
    for (name, x) in objects {
        if x.ring() != &w {
            return Err(Error::RingMismatch(x.ring().to_string(), w.to_string()));
        }
        if !is_mf_proj(x) {
            return Err(Error::Diagram(format!("object `{name}` is not in MF_proj")));
        }
        d.add_object(name, x.module().len())?;
    }
    for (k, (_, x)) in objects.iter().enumerate() {
        for (l, (_, y)) in objects.iter().enumerate() {
            for g in mf_hom(x, y)?.maps {
                d.add_hom(k, l, g)?;
            }
        }
    }
    d.validate().map_err(|e| Error::Internal(format!("solver homs not closed: {e}")))?;
    Ok(d)
}

#[derive(Clone, Debug)]
pub enum ColimitVerdict {
    /// The fiber colimit carries a valid `MF_proj` structure and the cocone
    /// maps are morphisms.
    Verified { colimit: FilteredFModule, cocone: Vec<Matrix> },
    Refuted { reason: String },
    /// The fiber colimit is not free over `W`.
    NotApplicable { exps: Vec<u32> },
}

impl ColimitVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ColimitVerdict::Verified { .. } => "verified",
            ColimitVerdict::Refuted { .. } => "refuted",
            ColimitVerdict::NotApplicable { .. } => "not-applicable",
        }
    }
}

/// Colimit of the diagram with the given arrows `(src, dst, g)`: the fiber
/// colimit `(⊕ M_k) / ⟨ι_dst(g v) − ι_src(v)⟩`, with `Fil^i` the image of
/// the `Fil^i` of the nodes and `φ^i` induced.
pub fn mf_colimit_probe(objects: &[FilteredFModule], arrows: &[(usize, usize, Matrix)]) -> Result<ColimitVerdict> {
    let w = match objects.first() {
        Some(x) => x.ring().clone(),
        None => return Err(Error::Diagram("no objects".into())),
    };
    for (a, (s, t, g)) in arrows.iter().enumerate() {
        if *s >= objects.len() || *t >= objects.len() || !is_mf_morphism(&objects[*s], &objects[*t], g) {
            return Err(Error::Diagram(format!("arrow {a} is not a morphism of filtered F-modules")));
        }
    }
    let lo = objects.iter().map(FilteredFModule::lo).min().unwrap();
    let hi = objects.iter().map(FilteredFModule::hi).max().unwrap();
    let mut offsets = vec![0];
    for x in objects {
        offsets.push(offsets.last().unwrap() + x.module().len());
    }
    let total = *offsets.last().unwrap();
    let exps: Vec<u32> = objects.iter().flat_map(|x| x.module().exps().to_vec()).collect();
    let mut rels = Vec::new();
    for (s, t, g) in arrows {
        for v in 0..objects[*s].module().len() {
            let mut col = vec![w.zero(); total];
            for (j, e) in g.column(v).into_iter().enumerate() {
                col[offsets[*t] + j] = e;
            }
            let cur = col[offsets[*s] + v].clone();
            col[offsets[*s] + v] = w.sub(&cur, &w.one());
            rels.push(col);
        }
    }
    let ck = linalg::cokernel_in(&w, &exps, &Matrix::from_columns(&w, total, &rels));
    let q = FinModule::new(&w, &ck.exps)?;
    if !q.is_projective() {
        return Ok(ColimitVerdict::NotApplicable { exps: ck.exps });
    }

    let (mut fils, mut phis) = (Vec::new(), Vec::new());
    for i in lo..=hi {
        let steps: Vec<_> = objects.iter().map(|x| x.step(i)).collect();
        let incl_total = Matrix::block_diag(&w, &steps.iter().map(|s| &s.incl).collect::<Vec<_>>());
        let phi_total = Matrix::block_diag(&w, &steps.iter().map(|s| &s.phi).collect::<Vec<_>>());
        let fil_exps: Vec<u32> = steps.iter().flat_map(|s| s.module.exps().to_vec()).collect();
        let gens = ck.to_canon.mul(&incl_total).reduce_rows(q.exps());
        let sub = Submodule::generated(&q, &gens);
        let induced = ck.to_canon.mul(&phi_total);
        let kernel = module::kernel_gens(&fil_exps, &gens, q.exps());
        if !induced.mul(&sigma(&kernel)).reduce_rows(q.exps()).is_zero() {
            return Ok(ColimitVerdict::Refuted { reason: format!("φ^{i} does not descend to the colimit") });
        }
        fils.push(sub.inclusion_matrix().clone());
        phis.push(induced.mul(&sigma(sub.generator_coords())).reduce_rows(q.exps()));
    }
    let colimit = match mf_make(&w, q.exps(), lo, &fils, &phis, false) {
        Ok(c) => c,
        Err(Error::FilteredModule(v)) => return Ok(ColimitVerdict::Refuted { reason: format!("colimit invalid: {v}") }),
        Err(e) => return Err(e),
    };
    if !is_mf_proj(&colimit) {
        return Ok(ColimitVerdict::Refuted { reason: "colimit is not in MF_fl".into() });
    }
    let mut cocone = Vec::with_capacity(objects.len());
    for (k, x) in objects.iter().enumerate() {
        let iota = ck.to_canon.submatrix(0..q.len(), offsets[k]..offsets[k + 1]).reduce_rows(q.exps());
        if !is_mf_morphism(x, &colimit, &iota) {
            return Ok(ColimitVerdict::Refuted { reason: format!("cocone map from node {k} is not a morphism") });
        }
        cocone.push(iota);
    }
    Ok(ColimitVerdict::Verified { colimit, cocone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::{mf_direct_sum, tate};
    use crate::ring::Ring;

    fn f2() -> Ring {
        Ring::new(2, 1, 1).unwrap()
    }

    #[test]
    fn coequalizers_and_pushout() {
        let w = f2();
        let m0 = tate(&w, 0);
        let id = Matrix::identity(&w, 1);
        let zero = Matrix::zeros(&w, 1, 1);
        let same = mf_colimit_probe(&[m0.clone(), m0.clone()], &[(0, 1, id.clone()), (0, 1, id.clone())]).unwrap();
        match same {
            ColimitVerdict::Verified { colimit, .. } => assert_eq!(colimit.module().exps(), &[1]),
            v => panic!("{v:?}"),
        }
        let push = mf_colimit_probe(&[m0.clone(), m0.clone(), m0.clone()], &[(0, 1, id.clone()), (0, 2, id.clone())])
            .unwrap();
        match push {
            ColimitVerdict::Verified { colimit, .. } => assert_eq!(colimit.module().exps(), &[1]),
            v => panic!("{v:?}"),
        }
        // Coequalizer of (0, id): relations 0 − v and v − v kill everything.
        let dead = mf_colimit_probe(&[m0.clone(), m0], &[(0, 1, zero), (0, 1, id)]).unwrap();
        match dead {
            ColimitVerdict::Verified { colimit, .. } => assert!(colimit.module().is_zero()),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn torsion_colimit_not_applicable() {
        let w = Ring::new(2, 2, 1).unwrap();
        let m0 = tate(&w, 0);
        let two = Matrix::from_ints(&w, &[&[2]]);
        let zero = Matrix::zeros(&w, 1, 1);
        let v = mf_colimit_probe(&[m0.clone(), m0], &[(0, 1, two), (0, 1, zero)]).unwrap();
        assert!(matches!(v, ColimitVerdict::NotApplicable { .. }), "{v:?}");
    }

    #[test]
    fn diagram_export() {
        let w = f2();
        let (m0, m1) = (tate(&w, 0), tate(&w, 1));
        let s = mf_direct_sum(&m0, &m1).unwrap();
        let d = mf_to_diagram(&[("M(0)".into(), m0), ("M(1)".into(), m1), ("S".into(), s)]).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.hom(0, 1).is_empty());
        assert_eq!(d.span(0, 2).module().exps(), &[1]);
        assert_eq!(d.span(2, 2).module().exps(), &[1, 1]);
    }
}
