//! Finitely presented modules over a chain ring in canonical form
//! `⊕ R/p^{e_i}` (exponents sorted descending) and their morphisms.
//!
//! Over a chain ring every finitely generated module has this shape, so
//! isomorphism questions reduce to comparing exponent lists.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, Cokernel};
use crate::matrix::Matrix;
use crate::ring::{Ring, RingElem};

/// Default cap on brute-force enumerations.
pub const DEFAULT_BUDGET: u64 = 1 << 16;

#[derive(Clone, PartialEq, Eq)]
pub struct FinModule {
    ring: Ring,
    exps: Vec<u32>,
}

impl fmt::Debug for FinModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exps.iter().map(u32::to_string).collect();
        write!(f, "mod({}) over {}", e.join(","), self.ring)
    }
}

impl FinModule {
    /// Module with the given exponents (sorted on construction; zeros dropped).
    pub fn new(ring: &Ring, exps: &[u32]) -> Result<FinModule> {
        if let Some(&e) = exps.iter().find(|&&e| e > ring.n()) {
            return Err(Error::DimensionMismatch(format!("exponent {e} exceeds n = {}", ring.n())));
        }
        let mut exps: Vec<u32> = exps.iter().copied().filter(|&e| e > 0).collect();
        exps.sort_by(|a, b| b.cmp(a));
        Ok(FinModule { ring: ring.clone(), exps })
    }

    pub fn free(ring: &Ring, rank: usize) -> FinModule {
        FinModule { ring: ring.clone(), exps: vec![ring.n(); rank] }
    }

    pub fn zero(ring: &Ring) -> FinModule {
        FinModule { ring: ring.clone(), exps: Vec::new() }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }
    /// Number of cyclic summands.
    pub fn len(&self) -> usize {
        self.exps.len()
    }
    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    /// Composition length over the prime ring `Z/p^n`: `sum e_i * f`.
    pub fn length(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum::<u64>() * self.ring.f() as u64
    }

    /// Over a chain ring: projective iff free.
    pub fn is_projective(&self) -> bool {
        self.exps.iter().all(|&e| e == self.ring.n())
    }

    /// Number of elements, if representable.
    pub fn cardinality(&self) -> Option<u64> {
        let pf = self.ring.p().checked_pow(self.ring.f() as u32)?;
        let total: u32 = self.exps.iter().sum();
        pf.checked_pow(total)
    }

    pub fn direct_sum(&self, other: &FinModule) -> FinModule {
        let mut e = self.exps.clone();
        e.extend_from_slice(&other.exps);
        FinModule::new(&self.ring, &e).expect("same ring exponents")
    }

    pub fn reduce(&self, v: &[RingElem]) -> Vec<RingElem> {
        v.iter().zip(&self.exps).map(|(x, &e)| self.ring.reduce_mod_p_pow(x, e)).collect()
    }

    pub fn zero_vec(&self) -> Vec<RingElem> {
        vec![self.ring.zero(); self.len()]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<RingElem> {
        let mut v = self.zero_vec();
        v[i] = self.ring.one();
        v
    }

    pub fn is_zero_vec(&self, v: &[RingElem]) -> bool {
        self.reduce(v).iter().all(|x| self.ring.is_zero(x))
    }

    /// Relation columns `p^{e_i} e_i` for the torsion summands.
    pub fn relation_matrix(&self) -> Matrix {
        let ring = &self.ring;
        let cols: Vec<Vec<RingElem>> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e < ring.n())
            .map(|(i, &e)| {
                let mut c = self.zero_vec();
                c[i] = ring.p_pow(e);
                c
            })
            .collect();
        Matrix::from_columns(ring, self.len(), &cols)
    }

    /// Enumerates every element exactly once, lexicographically in canonical
    /// coordinates.
    pub fn elements(&self, budget: u64) -> Result<ElementIter> {
        let card = self.cardinality();
        match card {
            Some(c) if c <= budget => {}
            _ => {
                return Err(Error::BudgetExceeded {
                    budget,
                    needed: card.map_or("overflow".into(), |c| c.to_string()),
                })
            }
        }
        let ring = self.ring.clone();
        let per_coord: Vec<u64> = self.exps.iter().map(|&e| ring.p_pow_int(e)).collect();
        Ok(ElementIter { ring, per_coord, code: 0, total: card.unwrap() })
    }
}

/// Restartable element stream of a [`FinModule`].
pub struct ElementIter {
    ring: Ring,
    per_coord: Vec<u64>,
    code: u64,
    total: u64,
}

impl Iterator for ElementIter {
    type Item = Vec<RingElem>;

    fn next(&mut self) -> Option<Vec<RingElem>> {
        if self.code >= self.total {
            return None;
        }
        let f = self.ring.f();
        let mut c = self.code;
        self.code += 1;
        let mut out = vec![self.ring.zero(); self.per_coord.len()];
        for i in (0..self.per_coord.len()).rev() {
            let m = self.per_coord[i];
            let mut coeffs = vec![0i64; f];
            for k in (0..f).rev() {
                coeffs[k] = (c % m) as i64;
                c /= m;
            }
            out[i] = self.ring.from_coeffs(&coeffs);
        }
        Some(out)
    }
}

/// Morphism between canonical modules, given by a `dst.len() x src.len()`
/// matrix. Entry `(j, i)` must have valuation at least `d_j - e_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleMap {
    src: FinModule,
    dst: FinModule,
    mat: Matrix,
}

/// Checks `val(mat[j][i]) >= d_j - e_i` entrywise.
pub fn is_well_defined(src: &FinModule, dst: &FinModule, mat: &Matrix) -> bool {
    let ring = src.ring();
    (0..dst.len()).all(|j| {
        (0..src.len()).all(|i| {
            let need = dst.exps[j].saturating_sub(src.exps[i]);
            need == 0 || ring.val(&ring.reduce_mod_p_pow(mat.get(j, i), dst.exps[j])) >= need
        })
    })
}

impl ModuleMap {
    pub fn new(src: &FinModule, dst: &FinModule, mat: Matrix) -> Result<ModuleMap> {
        if src.ring() != dst.ring() || mat.ring() != src.ring() {
            return Err(Error::RingMismatch(src.ring().to_string(), dst.ring().to_string()));
        }
        if mat.rows() != dst.len() || mat.cols() != src.len() {
            return Err(Error::DimensionMismatch(format!(
                "map matrix {}x{} for {} -> {}",
                mat.rows(),
                mat.cols(),
                src,
                dst
            )));
        }
        if !is_well_defined(src, dst, &mat) {
            return Err(Error::NotWellDefined(format!("{} on {} -> {}", mat.format(), src, dst)));
        }
        let mat = mat.reduce_rows(dst.exps());
        Ok(ModuleMap { src: src.clone(), dst: dst.clone(), mat })
    }

    pub fn identity(m: &FinModule) -> ModuleMap {
        ModuleMap { src: m.clone(), dst: m.clone(), mat: Matrix::identity(m.ring(), m.len()) }
    }

    pub fn zero(src: &FinModule, dst: &FinModule) -> ModuleMap {
        ModuleMap { src: src.clone(), dst: dst.clone(), mat: Matrix::zeros(src.ring(), dst.len(), src.len()) }
    }

    pub fn src(&self) -> &FinModule {
        &self.src
    }
    pub fn dst(&self) -> &FinModule {
        &self.dst
    }
    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn apply(&self, v: &[RingElem]) -> Vec<RingElem> {
        self.dst.reduce(&self.mat.mul_vec(v))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if other.dst != self.src {
            return Err(Error::DimensionMismatch(format!("compose {} after {}", self.src, other.dst)));
        }
        let mat = self.mat.mul(&other.mat).reduce_rows(self.dst.exps());
        Ok(ModuleMap { src: other.src.clone(), dst: self.dst.clone(), mat })
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let mat = self.mat.add(&other.mat).reduce_rows(self.dst.exps());
        ModuleMap { src: self.src.clone(), dst: self.dst.clone(), mat }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.reduce_rows(self.dst.exps()).is_zero()
    }

    pub fn kernel(&self) -> Submodule {
        let gens = kernel_gens(self.src.exps(), &self.mat, self.dst.exps());
        Submodule::generated(&self.src, &gens)
    }

    pub fn image(&self) -> Submodule {
        Submodule::generated(&self.dst, &self.mat)
    }

    pub fn cokernel(&self) -> Quotient {
        Quotient::new(&self.dst, &self.mat)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().module().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().module().is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.src.exps() == self.dst.exps() && self.is_injective() && self.is_surjective()
    }
}

/// Generators (in domain coordinates) of `{c : G c ≡ 0 mod p^{target_exps}}`.
/// The domain may carry torsion `domain_exps`; the result then generates the
/// kernel modulo those relations.
pub fn kernel_gens(domain_exps: &[u32], g: &Matrix, target_exps: &[u32]) -> Matrix {
    let ring = g.ring();
    let m = domain_exps.len();
    assert_eq!(g.cols(), m, "kernel_gens: domain size");
    assert_eq!(g.rows(), target_exps.len(), "kernel_gens: target size");
    let rows_needed: Vec<usize> = (0..g.rows()).filter(|&j| target_exps[j] > 0).collect();
    let g_red = Matrix::from_columns(
        ring,
        rows_needed.len(),
        &g.columns().iter().map(|c| rows_needed.iter().map(|&j| c[j].clone()).collect()).collect::<Vec<_>>(),
    );
    let texps: Vec<u32> = rows_needed.iter().map(|&j| target_exps[j]).collect();
    let torsion: Vec<Vec<RingElem>> = texps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e < ring.n())
        .map(|(i, &e)| {
            let mut c = vec![ring.zero(); texps.len()];
            c[i] = ring.p_pow(e);
            c
        })
        .collect();
    let full = if torsion.is_empty() {
        g_red
    } else {
        g_red.hstack(&Matrix::from_columns(ring, texps.len(), &torsion))
    };
    let k = linalg::kernel(&full);
    k.submatrix(0..m, 0..k.cols())
}

/// Submodule of `ambient` generated by the columns of a matrix, with its
/// canonical form and inclusion.
#[derive(Clone, Debug)]
pub struct Submodule {
    ambient: FinModule,
    gens: Matrix,
    module: FinModule,
    /// `ambient.len() x module.len()`.
    incl: Matrix,
    /// Presentation of the generator space `R^s` onto `module`.
    pres: Cokernel,
    /// Normal form of `[gens | ambient relations]` for membership tests.
    solver: linalg::SmithForm,
    solver_cols: usize,
}

impl Submodule {
    pub fn generated(ambient: &FinModule, gens: &Matrix) -> Submodule {
        let ring = ambient.ring();
        assert_eq!(gens.rows(), ambient.len(), "generator length");
        let gens = gens.reduce_rows(ambient.exps());
        let s = gens.cols();
        let rel = kernel_gens(&vec![ring.n(); s], &gens, ambient.exps());
        let pres = linalg::cokernel_in(ring, &vec![ring.n(); s], &rel);
        let module = FinModule { ring: ring.clone(), exps: pres.exps.clone() };
        let incl = gens.mul(&pres.from_canon).reduce_rows(ambient.exps());
        let stacked = gens.hstack(&ambient.relation_matrix());
        let solver = linalg::smith(&stacked);
        Submodule { ambient: ambient.clone(), gens, module, incl, pres, solver, solver_cols: stacked.cols() }
    }

    pub fn ambient(&self) -> &FinModule {
        &self.ambient
    }
    pub fn module(&self) -> &FinModule {
        &self.module
    }
    pub fn generators(&self) -> &Matrix {
        &self.gens
    }
    pub fn inclusion_matrix(&self) -> &Matrix {
        &self.incl
    }
    /// Each canonical generator as a combination of the input generators.
    pub fn generator_coords(&self) -> &Matrix {
        &self.pres.from_canon
    }
    pub fn inclusion(&self) -> ModuleMap {
        ModuleMap { src: self.module.clone(), dst: self.ambient.clone(), mat: self.incl.clone() }
    }

    /// Canonical coordinates of `v` if it lies in the submodule.
    pub fn coords(&self, v: &[RingElem]) -> Option<Vec<RingElem>> {
        let y = linalg::solve_with(&self.solver, self.solver_cols, v)?;
        Some(self.pres.project(&y[..self.gens.cols()]))
    }

    pub fn contains(&self, v: &[RingElem]) -> bool {
        linalg::solve_with(&self.solver, self.solver_cols, v).is_some()
    }

    pub fn contains_all(&self, other: &Submodule) -> bool {
        other.incl.columns().iter().all(|c| self.contains(c))
    }

    pub fn same_as(&self, other: &Submodule) -> bool {
        self.contains_all(other) && other.contains_all(self)
    }
}

/// Quotient of a module by the span of some columns.
#[derive(Clone, Debug)]
pub struct Quotient {
    ambient: FinModule,
    module: FinModule,
    pres: Cokernel,
}

impl Quotient {
    pub fn new(ambient: &FinModule, rels: &Matrix) -> Quotient {
        let pres = linalg::cokernel_in(ambient.ring(), ambient.exps(), rels);
        let module = FinModule { ring: ambient.ring().clone(), exps: pres.exps.clone() };
        Quotient { ambient: ambient.clone(), module, pres }
    }

    pub fn module(&self) -> &FinModule {
        &self.module
    }
    pub fn ambient(&self) -> &FinModule {
        &self.ambient
    }
    pub fn project(&self, v: &[RingElem]) -> Vec<RingElem> {
        self.pres.project(v)
    }
    pub fn to_canon(&self) -> &Matrix {
        &self.pres.to_canon
    }
    pub fn from_canon(&self) -> &Matrix {
        &self.pres.from_canon
    }
    pub fn projection(&self) -> ModuleMap {
        ModuleMap { src: self.ambient.clone(), dst: self.module.clone(), mat: self.pres.to_canon.clone() }
    }
}

/// Canonical module of the cokernel of a presentation matrix on a free
/// module, with the coordinate data.
pub fn module_from_presentation(p: &Matrix) -> (FinModule, Cokernel) {
    let ck = linalg::cokernel_of(p);
    (FinModule { ring: p.ring().clone(), exps: ck.exps.clone() }, ck)
}

/// `Hom_R(M, N)` with one basis map per pair of summands.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: FinModule,
    /// `basis[k]` generates the `k`-th canonical summand.
    pub basis: Vec<ModuleMap>,
    /// `(j, i, shift)` of each basis map: entry `(j, i)` equal to `p^{shift}`.
    slots: Vec<(usize, usize, u32)>,
    src: FinModule,
    dst: FinModule,
}

impl HomModule {
    /// Canonical coordinates of a map.
    pub fn coords(&self, g: &ModuleMap) -> Vec<RingElem> {
        let ring = self.src.ring();
        self.slots
            .iter()
            .zip(self.module.exps())
            .map(|(&(j, i, shift), &e)| {
                let entry = ring.reduce_mod_p_pow(g.mat.get(j, i), self.dst.exps[j]);
                ring.reduce_mod_p_pow(&ring.div_p_pow(&entry, shift), e)
            })
            .collect()
    }

    /// The map with the given canonical coordinates.
    pub fn map_from_coords(&self, c: &[RingElem]) -> ModuleMap {
        let ring = self.src.ring();
        let mut mat = Matrix::zeros(ring, self.dst.len(), self.src.len());
        for (&(j, i, shift), x) in self.slots.iter().zip(c) {
            mat.set(j, i, ring.mul(x, &ring.p_pow(shift)));
        }
        ModuleMap { src: self.src.clone(), dst: self.dst.clone(), mat: mat.reduce_rows(self.dst.exps()) }
    }
}

pub fn hom_module(m: &FinModule, n: &FinModule) -> Result<HomModule> {
    if m.ring() != n.ring() {
        return Err(Error::RingMismatch(m.ring().to_string(), n.ring().to_string()));
    }
    let ring = m.ring();
    let mut slots: Vec<(u32, usize, usize, u32)> = Vec::new();
    for (j, &d) in n.exps().iter().enumerate() {
        for (i, &e) in m.exps().iter().enumerate() {
            slots.push((e.min(d), j, i, d.saturating_sub(e)));
        }
    }
    slots.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let exps: Vec<u32> = slots.iter().map(|s| s.0).collect();
    let basis = slots
        .iter()
        .map(|&(_, j, i, shift)| {
            let mut mat = Matrix::zeros(ring, n.len(), m.len());
            mat.set(j, i, ring.p_pow(shift));
            ModuleMap { src: m.clone(), dst: n.clone(), mat }
        })
        .collect();
    Ok(HomModule {
        module: FinModule { ring: ring.clone(), exps },
        basis,
        slots: slots.iter().map(|s| (s.1, s.2, s.3)).collect(),
        src: m.clone(),
        dst: n.clone(),
    })
}

/// `M ⊗_R N` in canonical form with the pure-tensor embedding.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: FinModule,
    /// `index[i * n.len() + j]` is the canonical coordinate of `e_i ⊗ f_j`.
    index: Vec<usize>,
    left_len: usize,
    right_len: usize,
}

impl TensorProduct {
    pub fn pure(&self, x: &[RingElem], y: &[RingElem]) -> Vec<RingElem> {
        let ring = self.module.ring();
        let mut out = self.module.zero_vec();
        for (i, a) in x.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                let k = self.index[i * self.right_len + j];
                out[k] = ring.add(&out[k], &ring.mul(a, b));
            }
        }
        self.module.reduce(&out)
    }

    pub fn slot(&self, i: usize, j: usize) -> usize {
        assert!(i < self.left_len);
        self.index[i * self.right_len + j]
    }
}

pub fn tensor_over_ring(m: &FinModule, n: &FinModule) -> Result<TensorProduct> {
    if m.ring() != n.ring() {
        return Err(Error::RingMismatch(m.ring().to_string(), n.ring().to_string()));
    }
    let mut pairs: Vec<(u32, usize)> = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        for (j, &d) in n.exps().iter().enumerate() {
            pairs.push((e.min(d), i * n.len() + j));
        }
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut index = vec![0; pairs.len()];
    for (k, &(_, flat)) in pairs.iter().enumerate() {
        index[flat] = k;
    }
    Ok(TensorProduct {
        module: FinModule { ring: m.ring().clone(), exps: pairs.iter().map(|p| p.0).collect() },
        index,
        left_len: m.len(),
        right_len: n.len(),
    })
}

/// `Hom_R(M, R)`: generated by `e_i^∨ = p^{n - e_i} * (i-th coordinate)`.
#[derive(Clone, Debug)]
pub struct Dual {
    pub module: FinModule,
    src: FinModule,
}

impl Dual {
    /// Evaluation pairing `ξ(x)`.
    pub fn eval(&self, xi: &[RingElem], x: &[RingElem]) -> RingElem {
        let ring = self.src.ring();
        let mut acc = ring.zero();
        for ((a, b), &e) in xi.iter().zip(x).zip(self.src.exps()) {
            let t = ring.mul(&ring.mul(a, b), &ring.p_pow(ring.n() - e));
            acc = ring.add(&acc, &t);
        }
        acc
    }
}

pub fn dual(m: &FinModule) -> Dual {
    Dual { module: m.clone(), src: m.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z8() -> Ring {
        Ring::new(2, 3, 1).unwrap()
    }

    #[test]
    fn presentations() {
        let r = z8();
        let (m, _) = module_from_presentation(&Matrix::zeros(&r, 2, 1));
        assert_eq!(m.exps(), &[3, 3]);
        let (m, _) = module_from_presentation(&Matrix::from_ints(&r, &[&[2]]));
        assert_eq!(m.exps(), &[1]);
        let (m, _) = module_from_presentation(&Matrix::from_ints(&r, &[&[4, 0], &[0, 1]]));
        assert_eq!(m.exps(), &[2]);
    }

    #[test]
    fn hom_examples() {
        let r = z8();
        let free = FinModule::free(&r, 1);
        let h = hom_module(&free, &free).unwrap();
        assert_eq!(h.module.exps(), &[3]);
        assert_eq!(h.basis[0], ModuleMap::identity(&free));

        let z2 = FinModule::new(&r, &[1]).unwrap();
        let h = hom_module(&z2, &free).unwrap();
        assert_eq!(h.module.exps(), &[1]);
        assert_eq!(h.basis[0].matrix(), &Matrix::from_ints(&r, &[&[4]]));

        let z4 = FinModule::new(&r, &[2]).unwrap();
        let h = hom_module(&z4, &z2).unwrap();
        assert_eq!(h.module.exps(), &[1]);
        assert_eq!(h.basis[0].matrix(), &Matrix::from_ints(&r, &[&[1]]));
    }

    #[test]
    fn tensor_and_projectivity() {
        let r = z8();
        let z2 = FinModule::new(&r, &[1]).unwrap();
        let z4 = FinModule::new(&r, &[2]).unwrap();
        assert_eq!(tensor_over_ring(&z2, &z4).unwrap().module.exps(), &[1]);
        assert!(!z2.is_projective());
        assert!(FinModule::free(&r, 3).is_projective());
    }

    #[test]
    fn dual_basis_of_free() {
        let r = z8();
        let m = FinModule::free(&r, 3);
        let d = dual(&m);
        assert_eq!(d.module.exps(), &[3, 3, 3]);
        for i in 0..3 {
            for j in 0..3 {
                let v = d.eval(&m.basis_vec(i), &m.basis_vec(j));
                assert_eq!(v, if i == j { r.one() } else { r.zero() });
            }
        }
    }

    #[test]
    fn kernel_cokernel_of_doubling() {
        let r = z8();
        let m = FinModule::free(&r, 1);
        let two = ModuleMap::new(&m, &m, Matrix::from_ints(&r, &[&[2]])).unwrap();
        assert_eq!(two.kernel().module().exps(), &[1]);
        assert_eq!(two.cokernel().module().exps(), &[1]);
        assert!(ModuleMap::identity(&m).kernel().module().is_zero());
    }

    #[test]
    fn ill_defined_map_rejected() {
        let r = z8();
        let z2 = FinModule::new(&r, &[1]).unwrap();
        let free = FinModule::free(&r, 1);
        assert!(ModuleMap::new(&z2, &free, Matrix::from_ints(&r, &[&[1]])).is_err());
        assert!(ModuleMap::new(&z2, &free, Matrix::from_ints(&r, &[&[4]])).is_ok());
    }

    #[test]
    fn elements_enumerated_once() {
        let r = Ring::new(2, 2, 2).unwrap();
        let m = FinModule::new(&r, &[2, 1]).unwrap();
        let all: Vec<_> = m.elements(1 << 10).unwrap().collect();
        assert_eq!(all.len() as u64, m.cardinality().unwrap());
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
        assert!(m.elements(10).is_err());
    }
}
