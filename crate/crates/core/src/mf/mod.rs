//! Filtered F-modules over `W = GR(p^n, f)`: a finite-length `W`-module
//! with a decreasing filtration in a finite window and Frobenius-semilinear
//! maps `φ^i: Fil^i → M` with `φ^i|_{Fil^{i+1}} = p φ^{i+1}`.
//!
//! Morphism spaces are `Z/p^n`-modules, not `W`-modules: the condition
//! `φ' g = σ(g) φ` is only linear over the fixed ring of `σ`. This is why the
//! Tannakian side uses `W`-`W`-coalgebras over `R = Z/p^n`.

mod colimit;
mod hom;

pub use colimit::{mf_colimit_probe, mf_to_diagram, ColimitVerdict};
pub use hom::{is_mf_morphism, mf_hom};

use crate::error::{Error, MfViolation, Result};
use crate::linalg;
use crate::matrix::Matrix;
use crate::module::{FinModule, ModuleMap, Submodule};
use crate::ring::{Ring, RingElem};

/// A `σ^twist`-semilinear map `v ↦ matrix · σ^twist(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semilinear {
    pub matrix: Matrix,
    pub twist: usize,
}

impl Semilinear {
    pub fn new(matrix: Matrix, twist: usize) -> Semilinear {
        let f = matrix.ring().f();
        Semilinear { matrix, twist: twist % f }
    }

    pub fn apply(&self, v: &[RingElem]) -> Vec<RingElem> {
        let r = self.matrix.ring();
        let sv: Vec<RingElem> = v.iter().map(|a| r.frobenius_pow(a, self.twist)).collect();
        self.matrix.mul_vec(&sv)
    }

    /// `self ∘ other = (Φ σ^s(Ψ), σ^{s+t})`.
    pub fn compose(&self, other: &Semilinear) -> Semilinear {
        let r = self.matrix.ring();
        let moved = other.matrix.map_entries(|a| r.frobenius_pow(a, self.twist));
        Semilinear::new(self.matrix.mul(&moved), self.twist + other.twist)
    }
}

pub(crate) fn sigma(m: &Matrix) -> Matrix {
    m.frobenius()
}

/// One filtration step: `Fil^i` in canonical form, its inclusion into `M`
/// and the matrix of `φ^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub module: FinModule,
    pub incl: Matrix,
    pub phi: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredFModule {
    w: Ring,
    m: FinModule,
    lo: i32,
    /// Steps `lo..=hi`; step `lo` is `M` with the identity inclusion.
    steps: Vec<Step>,
}

impl FilteredFModule {
    pub fn ring(&self) -> &Ring {
        &self.w
    }
    pub fn module(&self) -> &FinModule {
        &self.m
    }
    pub fn lo(&self) -> i32 {
        self.lo
    }
    pub fn hi(&self) -> i32 {
        self.lo + self.steps.len() as i32 - 1
    }

    /// Step `i`, extended by `Fil^i = M`, `φ^i = p^{lo-i} φ^{lo}` below the
    /// window and `Fil^i = 0` above it.
    pub fn step(&self, i: i32) -> Step {
        let w = &self.w;
        if i < self.lo {
            let base = &self.steps[0];
            let k = (self.lo - i) as u32;
            return Step {
                module: self.m.clone(),
                incl: Matrix::identity(w, self.m.len()),
                phi: base.phi.scale(&w.p_pow(k)).reduce_rows(self.m.exps()),
            };
        }
        if i > self.hi() {
            return Step {
                module: FinModule::zero(w),
                incl: Matrix::zeros(w, self.m.len(), 0),
                phi: Matrix::zeros(w, self.m.len(), 0),
            };
        }
        self.steps[(i - self.lo) as usize].clone()
    }

    pub fn phi(&self, i: i32) -> Semilinear {
        Semilinear::new(self.step(i).phi, 1)
    }

    /// The same object on a wider window.
    pub fn extend(&self, lo: i32, hi: i32) -> FilteredFModule {
        assert!(lo <= self.lo && hi >= self.hi(), "window can only grow");
        FilteredFModule { w: self.w.clone(), m: self.m.clone(), lo, steps: (lo..=hi).map(|i| self.step(i)).collect() }
    }

    /// `J_i: Fil^i → Fil^{i-1}`, the transition between consecutive steps.
    pub fn transition(&self, i: i32) -> Matrix {
        let (prev, cur) = (self.step(i - 1), self.step(i));
        let cols: Vec<Vec<RingElem>> = (0..cur.module.len())
            .map(|c| {
                preimage(&prev.incl, &self.m, prev.module.exps(), &cur.incl.column(c))
                    .expect("validated filtration is decreasing")
            })
            .collect();
        Matrix::from_columns(&self.w, prev.module.len(), &cols)
    }
}

/// Some `y` in `⊕ W/p^{src_exps}` with `incl · y = v` in `M`.
pub(crate) fn preimage(incl: &Matrix, m: &FinModule, src_exps: &[u32], v: &[RingElem]) -> Option<Vec<RingElem>> {
    let a = incl.hstack(&m.relation_matrix());
    let y = linalg::solve(&a, &m.reduce(v)).ok()??;
    let r = m.ring();
    Some(y[..incl.cols()].iter().zip(src_exps).map(|(x, &e)| r.reduce_mod_p_pow(x, e)).collect())
}

/// Additive order exponent of `v` in `M`.
fn order_exp(m: &FinModule, v: &[RingElem]) -> u32 {
    let r = m.ring();
    v.iter().zip(m.exps()).map(|(x, &d)| d.saturating_sub(r.val(x).min(d))).max().unwrap_or(0)
}

fn permute_rows(m: &Matrix, order: &[usize]) -> Matrix {
    m.transpose().select_columns(order).transpose()
}

/// Validates and builds a filtered F-module.
///
/// `fil[k]` lists generators of `Fil^{lo+k}` as columns in `M`-coordinates;
/// `phi[k]` gives the images of the same generators under `φ^{lo+k}`. The
/// abstract `Fil^i` is `⊕ W/p^{ord(g)}` over its generators and must embed.
/// `M` may be given with unsorted exponents; coordinates are sorted first.
/// The first violated clause is reported; `SpanFails` is only checked when
/// `require_fl` is set.
pub fn mf_make(w: &Ring, m_exps: &[u32], lo: i32, fil: &[Matrix], phi: &[Matrix], require_fl: bool) -> Result<FilteredFModule> {
    let bad = |v| Err(Error::FilteredModule(v));
    if let Some(&e) = m_exps.iter().find(|&&e| e > w.n()) {
        return bad(MfViolation::NotAnnihilated { exponent: e });
    }
    if fil.is_empty() || fil.len() != phi.len() {
        return Err(Error::DimensionMismatch(format!("{} filtration steps but {} phi matrices", fil.len(), phi.len())));
    }
    let mut order: Vec<usize> = (0..m_exps.len()).filter(|&i| m_exps[i] > 0).collect();
    order.sort_by(|&a, &b| m_exps[b].cmp(&m_exps[a]).then(a.cmp(&b)));
    let m = FinModule::new(w, &order.iter().map(|&i| m_exps[i]).collect::<Vec<_>>())?;
    for (k, (a, b)) in fil.iter().zip(phi).enumerate() {
        if a.ring() != w || b.ring() != w {
            return Err(Error::RingMismatch(a.ring().to_string(), w.to_string()));
        }
        if a.rows() != m_exps.len() || b.rows() != m_exps.len() || a.cols() != b.cols() {
            return Err(Error::DimensionMismatch(format!(
                "step {}: inclusion {}x{}, phi {}x{}, module rank {}",
                lo + k as i32,
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                m_exps.len()
            )));
        }
    }

    // Sort generators by order, remembering input positions for witnesses.
    struct Raw {
        gens: Vec<usize>,
        zero_bad: Option<usize>,
        module: FinModule,
        incl: Matrix,
        phi: Matrix,
    }
    let mut raws = Vec::with_capacity(fil.len());
    for (k, (a, b)) in fil.iter().zip(phi).enumerate() {
        let a = permute_rows(a, &order).reduce_rows(m.exps());
        let b = permute_rows(b, &order);
        let ords: Vec<u32> = (0..a.cols()).map(|c| order_exp(&m, &a.column(c))).collect();
        // A zero generator must have zero image; checked with the other
        // well-definedness clauses below.
        let zero_bad = (0..a.cols()).find(|&c| ords[c] == 0 && !m.is_zero_vec(&b.column(c)));
        let mut gens: Vec<usize> = (0..a.cols()).filter(|&c| ords[c] > 0).collect();
        gens.sort_by(|&x, &y| ords[y].cmp(&ords[x]).then(x.cmp(&y)));
        let module = FinModule::new(w, &gens.iter().map(|&c| ords[c]).collect::<Vec<_>>())?;
        let incl = a.select_columns(&gens);
        let phi = b.select_columns(&gens);
        let map = ModuleMap::new(&module, &m, incl.clone())?;
        if !map.is_injective() {
            return bad(MfViolation::NotInjective { index: lo + k as i32 });
        }
        raws.push(Raw { gens, zero_bad, module, incl, phi });
    }
    if !ModuleMap::new(&raws[0].module, &m, raws[0].incl.clone())?.is_surjective() {
        return bad(MfViolation::NotExhaustive);
    }
    let mut transitions = Vec::new();
    for k in 1..raws.len() {
        let (prev, cur) = (&raws[k - 1], &raws[k]);
        let mut cols = Vec::new();
        for (c, &g) in cur.gens.iter().enumerate() {
            match preimage(&prev.incl, &m, prev.module.exps(), &cur.incl.column(c)) {
                Some(y) => cols.push(y),
                None => return bad(MfViolation::NotDecreasing { index: lo + k as i32, generator: g }),
            }
        }
        transitions.push(Matrix::from_columns(w, prev.module.len(), &cols));
    }
    for (k, raw) in raws.iter().enumerate() {
        if let Some(g) = raw.zero_bad {
            return bad(MfViolation::IllDefinedPhi { index: lo + k as i32, generator: g });
        }
        for (c, &g) in raw.gens.iter().enumerate() {
            let e = raw.module.exps()[c];
            let ok = (0..m.len()).all(|j| w.val(raw.phi.get(j, c)) + e >= m.exps()[j]);
            if !ok {
                return bad(MfViolation::IllDefinedPhi { index: lo + k as i32, generator: g });
            }
        }
    }
    for k in 1..raws.len() {
        let (prev, cur) = (&raws[k - 1], &raws[k]);
        let lhs = prev.phi.mul(&sigma(&transitions[k - 1])).reduce_rows(m.exps());
        let rhs = cur.phi.scale(&w.p_pow(1)).reduce_rows(m.exps());
        for (c, &g) in cur.gens.iter().enumerate() {
            if lhs.column(c) != rhs.column(c) {
                return bad(MfViolation::PhiIncompatible { index: lo + k as i32, generator: g });
            }
        }
    }
    // The last step must also satisfy the law against Fil^{hi+1} = 0, which
    // holds trivially.
    if require_fl {
        let all = raws.iter().fold(Matrix::zeros(w, m.len(), 0), |acc, r| acc.hstack(&r.phi));
        if Submodule::generated(&m, &all).module().length() != m.length() {
            return bad(MfViolation::SpanFails);
        }
    }

    // Normalize step `lo` to the identity inclusion.
    let first = &raws[0];
    let t_cols: Vec<Vec<RingElem>> = (0..m.len())
        .map(|j| preimage(&first.incl, &m, first.module.exps(), &m.basis_vec(j)).expect("surjective"))
        .collect();
    let t = Matrix::from_columns(w, first.module.len(), &t_cols);
    let mut steps = vec![Step {
        module: m.clone(),
        incl: Matrix::identity(w, m.len()),
        phi: first.phi.mul(&sigma(&t)).reduce_rows(m.exps()),
    }];
    for raw in &raws[1..] {
        steps.push(Step {
            module: raw.module.clone(),
            incl: raw.incl.clone(),
            phi: raw.phi.reduce_rows(m.exps()),
        });
    }
    Ok(FilteredFModule { w: w.clone(), m, lo, steps })
}

/// The Tate-style object `M(i)`: `W` with `Fil^j = W` for `j ≤ i`, zero
/// above, and `φ^j = p^{i-j}`.
pub fn tate(w: &Ring, i: i32) -> FilteredFModule {
    let lo = i.min(0);
    let fil: Vec<Matrix> = (lo..=i).map(|_| Matrix::identity(w, 1)).collect();
    let phi: Vec<Matrix> = (lo..=i).map(|j| Matrix::identity(w, 1).scale(&w.p_pow((i - j) as u32))).collect();
    mf_make(w, &[w.n()], lo, &fil, &phi, true).expect("Tate objects are valid")
}

/// `X ⊕ Y` on the union of the windows.
pub fn mf_direct_sum(x: &FilteredFModule, y: &FilteredFModule) -> Result<FilteredFModule> {
    if x.w != y.w {
        return Err(Error::RingMismatch(x.w.to_string(), y.w.to_string()));
    }
    let (lo, hi) = (x.lo.min(y.lo), x.hi().max(y.hi()));
    let mut exps = x.m.exps().to_vec();
    exps.extend_from_slice(y.m.exps());
    let (mut fil, mut phi) = (Vec::new(), Vec::new());
    for i in lo..=hi {
        let (a, b) = (x.step(i), y.step(i));
        fil.push(Matrix::block_diag(&x.w, &[&a.incl, &b.incl]));
        phi.push(Matrix::block_diag(&x.w, &[&a.phi, &b.phi]));
    }
    mf_make(&x.w, &exps, lo, &fil, &phi, false)
}

/// `M̄` with the map `φ̄: M̄ → M` (semilinear) and the slot maps
/// `Fil^i → M̄`.
#[derive(Clone, Debug)]
pub struct MBarResult {
    pub mbar: FinModule,
    pub phibar: Semilinear,
    pub slotmaps: Vec<Matrix>,
}

impl MBarResult {
    fn linear(&self, m: &FinModule) -> ModuleMap {
        ModuleMap::new(&self.mbar, m, self.phibar.matrix.clone()).expect("checked in mbar")
    }
}

/// `M̄ = (⊕_{i} Fil^i) / ⟨ι_{i-1}(J_i x) − ι_i(p x)⟩` over the window, with
/// the map induced by the `φ^i`. The length equality `len M̄ = len M` is
/// asserted on every call.
pub fn mbar(x: &FilteredFModule) -> Result<MBarResult> {
    let w = &x.w;
    let steps: Vec<Step> = (x.lo..=x.hi()).map(|i| x.step(i)).collect();
    let mut offsets = vec![0];
    for s in &steps {
        offsets.push(offsets.last().unwrap() + s.module.len());
    }
    let total = *offsets.last().unwrap();
    let exps: Vec<u32> = steps.iter().flat_map(|s| s.module.exps().to_vec()).collect();
    let mut rels = Vec::new();
    for k in 1..steps.len() {
        let j = x.transition(x.lo + k as i32);
        for c in 0..steps[k].module.len() {
            let mut v = vec![w.zero(); total];
            for (r, e) in j.column(c).into_iter().enumerate() {
                v[offsets[k - 1] + r] = e;
            }
            v[offsets[k] + c] = w.neg(&w.p_pow(1));
            rels.push(v);
        }
    }
    let rels = Matrix::from_columns(w, total, &rels);
    let phi_total = steps.iter().fold(Matrix::zeros(w, x.m.len(), 0), |acc, s| acc.hstack(&s.phi));
    if !phi_total.mul(&sigma(&rels)).reduce_rows(x.m.exps()).is_zero() {
        return Err(Error::Internal("phi does not vanish on the relations of M̄".into()));
    }
    let ck = linalg::cokernel_in(w, &exps, &rels);
    let mbar = FinModule::new(w, &ck.exps)?;
    let phibar = phi_total.mul(&sigma(&ck.from_canon)).reduce_rows(x.m.exps());
    ModuleMap::new(&mbar, &x.m, phibar.clone())?;
    let slotmaps = (0..steps.len())
        .map(|k| ck.to_canon.submatrix(0..mbar.len(), offsets[k]..offsets[k + 1]).reduce_rows(mbar.exps()))
        .collect();
    if mbar.length() != x.m.length() {
        return Err(Error::Internal(format!("len M̄ = {} but len M = {}", mbar.length(), x.m.length())));
    }
    Ok(MBarResult { mbar, phibar: Semilinear::new(phibar, 1), slotmaps })
}

/// `φ̄` surjective and `φ̄` injective, decided separately.
pub fn phibar_status(x: &FilteredFModule) -> Result<(bool, bool)> {
    let mb = mbar(x)?;
    let map = mb.linear(&x.m);
    Ok((map.is_surjective(), map.is_injective()))
}

/// Membership in `MF_fl`: `φ̄` is an isomorphism.
pub fn is_mf_fl(x: &FilteredFModule) -> bool {
    mbar(x).map(|mb| mb.linear(&x.m).is_iso()).unwrap_or(false)
}

/// Membership in `MF_proj`: in `MF_fl` with `M` free over `W`.
pub fn is_mf_proj(x: &FilteredFModule) -> bool {
    x.m.is_projective() && is_mf_fl(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Ring {
        Ring::new(2, 1, 1).unwrap()
    }

    #[test]
    fn tate_objects() {
        let w = f2();
        let m0 = tate(&w, 0);
        assert!(is_mf_proj(&m0));
        let mb = mbar(&m0).unwrap();
        assert_eq!(mb.mbar.exps(), &[1]);
        assert_eq!(mb.phibar.matrix, Matrix::identity(&w, 1));
        let m1 = tate(&w, 1);
        assert_eq!((m1.lo(), m1.hi()), (0, 1));
        assert!(is_mf_proj(&m1));
        assert!(m1.step(0).phi.is_zero());
    }

    #[test]
    fn zero_phi_fails_span() {
        let w = f2();
        let id = Matrix::identity(&w, 1);
        let z = Matrix::zeros(&w, 1, 1);
        let e = mf_make(&w, &[1], 0, std::slice::from_ref(&id), std::slice::from_ref(&z), true).unwrap_err();
        assert_eq!(e, Error::FilteredModule(MfViolation::SpanFails));
        let x = mf_make(&w, &[1], 0, &[id], &[z], false).unwrap();
        assert!(!is_mf_fl(&x));
        assert_eq!(phibar_status(&x).unwrap(), (false, false));
    }

    #[test]
    fn z4_example() {
        let w = Ring::new(2, 2, 1).unwrap();
        let fil = [Matrix::from_ints(&w, &[&[1]]), Matrix::from_ints(&w, &[&[2]])];
        // φ^1 sends the generator 2 of 2M to 2; φ^0 must restrict to 2φ^1.
        let good = mf_make(&w, &[2], 0, &fil, &[Matrix::from_ints(&w, &[&[2]]), Matrix::from_ints(&w, &[&[2]])], false)
            .unwrap();
        let mb = mbar(&good).unwrap();
        assert_eq!(mb.mbar.length(), 2);
        let bad = mf_make(&w, &[2], 0, &fil, &[Matrix::from_ints(&w, &[&[1]]), Matrix::from_ints(&w, &[&[2]])], false);
        assert_eq!(bad.unwrap_err(), Error::FilteredModule(MfViolation::PhiIncompatible { index: 1, generator: 0 }));
        // 2 ↦ 1 is not well defined on 2M ≅ Z/2.
        let ill = mf_make(&w, &[2], 0, &fil, &[Matrix::from_ints(&w, &[&[2]]), Matrix::from_ints(&w, &[&[1]])], false);
        assert_eq!(ill.unwrap_err(), Error::FilteredModule(MfViolation::IllDefinedPhi { index: 1, generator: 0 }));
    }

    #[test]
    fn clause_order() {
        let w = Ring::new(2, 2, 1).unwrap();
        let one = Matrix::from_ints(&w, &[&[1]]);
        assert_eq!(
            mf_make(&w, &[3], 0, std::slice::from_ref(&one), std::slice::from_ref(&one), false).unwrap_err(),
            Error::FilteredModule(MfViolation::NotAnnihilated { exponent: 3 })
        );
        assert_eq!(
            mf_make(&w, &[2], 0, &[Matrix::from_ints(&w, &[&[2]])], std::slice::from_ref(&one), false).unwrap_err(),
            Error::FilteredModule(MfViolation::NotExhaustive)
        );
        // Fil^2 = <e2> is not inside Fil^1 = <e1>.
        let m2 = [1u32, 1];
        let w2 = f2();
        let e1 = Matrix::from_ints(&w2, &[&[1], &[0]]);
        let e2 = Matrix::from_ints(&w2, &[&[0], &[1]]);
        let res = mf_make(&w2, &m2, 0, &[Matrix::identity(&w2, 2), e1, e2], &[
            Matrix::zeros(&w2, 2, 2),
            Matrix::zeros(&w2, 2, 1),
            Matrix::zeros(&w2, 2, 1),
        ], false);
        assert_eq!(res.unwrap_err(), Error::FilteredModule(MfViolation::NotDecreasing { index: 2, generator: 0 }));
    }

    #[test]
    fn direct_sum_is_proj() {
        let w = f2();
        let s = mf_direct_sum(&tate(&w, 0), &tate(&w, 1)).unwrap();
        assert!(is_mf_proj(&s));
        assert_eq!(s.module().exps(), &[1, 1]);
        assert_eq!(mbar(&s).unwrap().mbar.length(), 2);
    }

    #[test]
    fn zero_module() {
        let w = f2();
        let z = mf_make(&w, &[], 0, &[Matrix::zeros(&w, 0, 0)], &[Matrix::zeros(&w, 0, 0)], true).unwrap();
        assert!(mbar(&z).unwrap().mbar.is_zero());
        assert!(is_mf_proj(&z));
    }

    #[test]
    fn semilinear_composition() {
        let w = Ring::new(2, 2, 2).unwrap();
        let x = Matrix::from_rows(&w, vec![vec![w.gen()]]).unwrap();
        let a = Semilinear::new(x.clone(), 1);
        let b = Semilinear::new(x, 1);
        let c = a.compose(&b);
        assert_eq!(c.twist, 0);
        let v = vec![w.add(&w.gen(), &w.one())];
        assert_eq!(c.apply(&v), a.apply(&b.apply(&v)));
    }
}
