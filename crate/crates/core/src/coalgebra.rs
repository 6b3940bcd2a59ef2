//! `B`-`B`-coalgebras `C`, left comodules over them, comodule morphisms as an
//! equalizer inside `Hom_B`, and the cofree comodule `C ⊗_B M`.

use std::sync::Arc;

use crate::algebra::{self, free_first_coords, AlgebraSpec, BBBimodule, LeftModule, TensorB};
use crate::error::{Axiom, Error, Result};
use crate::linalg;
use crate::matrix::Matrix;
use crate::module::{self, FinModule, ModuleMap, Submodule};
use crate::ring::RingElem;

/// A validated coalgebra. `comult` is a matrix from the carrier to the
/// canonical coordinates of `C ⊗_B C`; `counit` maps into `B = R^f`.
#[derive(Clone, Debug)]
pub struct Coalgebra {
    c: BBBimodule,
    comult: Matrix,
    counit: Matrix,
    t2: TensorB,
}

impl PartialEq for Coalgebra {
    fn eq(&self, other: &Coalgebra) -> bool {
        self.c == other.c && self.comult == other.comult && self.counit == other.counit
    }
}

fn first_diff(a: &Matrix, b: &Matrix) -> Option<usize> {
    (0..a.cols()).find(|&c| a.column(c) != b.column(c))
}

impl Coalgebra {
    /// Validates bimodule-map conditions, coassociativity and both counit
    /// laws, in that order.
    pub fn new(c: BBBimodule, comult: Matrix, counit: Matrix) -> Result<Coalgebra> {
        let t2 = TensorB::new(&[&c, &c])?;
        Coalgebra::with_square(c, t2, comult, counit)
    }

    /// As [`Coalgebra::new`], reusing an already computed `C ⊗_B C`.
    pub fn with_square(c: BBBimodule, t2: TensorB, comult: Matrix, counit: Matrix) -> Result<Coalgebra> {
        let alg = c.alg().clone();
        let n = c.carrier().len();
        if comult.rows() != t2.carrier().len() || comult.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "comultiplication must be {}x{}",
                t2.carrier().len(),
                n
            )));
        }
        if counit.rows() != alg.degree() || counit.cols() != n {
            return Err(Error::DimensionMismatch(format!("counit must be {}x{}", alg.degree(), n)));
        }
        let comult = comult.reduce_rows(t2.carrier().exps());
        let b_exps = vec![alg.r().n(); alg.degree()];
        let counit = counit.reduce_rows(&b_exps);
        ModuleMap::new(c.carrier(), t2.carrier(), comult.clone())
            .map_err(|_| Error::Axiom { axiom: Axiom::NotBimoduleMap, witness: 0 })?;
        ModuleMap::new(c.carrier(), &FinModule::free(alg.r(), alg.degree()), counit.clone())
            .map_err(|_| Error::Axiom { axiom: Axiom::NotBimoduleMap, witness: 0 })?;
        let e2 = t2.carrier().exps();
        for (act, outer) in [(c.left_x(), t2.module.left_x()), (c.right_x(), t2.module.right_x())] {
            let lhs = comult.mul(act).reduce_rows(e2);
            let rhs = outer.mul(&comult).reduce_rows(e2);
            if let Some(w) = first_diff(&lhs, &rhs) {
                return Err(Error::Axiom { axiom: Axiom::NotBimoduleMap, witness: w });
            }
            let lhs = counit.mul(act).reduce_rows(&b_exps);
            let rhs = alg.x_matrix().mul(&counit).reduce_rows(&b_exps);
            if let Some(w) = first_diff(&lhs, &rhs) {
                return Err(Error::Axiom { axiom: Axiom::NotBimoduleMap, witness: w });
            }
        }
        let co = Coalgebra { c, comult, counit, t2 };
        co.check_axioms()?;
        Ok(co)
    }

    fn check_axioms(&self) -> Result<()> {
        let r = self.c.alg().r();
        let n = self.c.carrier().len();
        let id = Matrix::identity(r, n);
        let lifted = self.t2.from_canon().mul(&self.comult);
        let left = lifted.kron_mul(&id, &lifted);
        let right = id.kron_mul(&lifted, &lifted);
        // Over B = R the triple tensor has no relations: compare ambient
        // coordinates modulo the ambient exponents.
        let (left, right) = if self.c.alg().degree() == 1 {
            let e = self.c.carrier().exps();
            let e3: Vec<u32> = (0..n * n * n).map(|i| e[i / (n * n)].min(e[(i / n) % n]).min(e[i % n])).collect();
            (left.reduce_rows(&e3), right.reduce_rows(&e3))
        } else if self.c.right_free_basis().is_ok() {
            (free_first_coords(&self.c, &self.t2, &left)?.0, free_first_coords(&self.c, &self.t2, &right)?.0)
        } else {
            let t3 = TensorB::new(&[&self.c, &self.c, &self.c])?;
            let e3 = t3.carrier().exps();
            (t3.to_canon().mul(&left).reduce_rows(e3), t3.to_canon().mul(&right).reduce_rows(e3))
        };
        if let Some(w) = first_diff(&left, &right) {
            return Err(Error::Axiom { axiom: Axiom::Coassoc, witness: w });
        }
        let exps = self.c.carrier().exps();
        let cl = self.counit_left_ambient().mul(&lifted).reduce_rows(exps);
        if let Some(w) = first_diff(&cl, &id.reduce_rows(exps)) {
            return Err(Error::Axiom { axiom: Axiom::CounitLeft, witness: w });
        }
        let cr = self.counit_right_ambient().mul(&lifted).reduce_rows(exps);
        if let Some(w) = first_diff(&cr, &id.reduce_rows(exps)) {
            return Err(Error::Axiom { axiom: Axiom::CounitRight, witness: w });
        }
        Ok(())
    }

    /// `ε(e_a)` as an element of `B`.
    pub fn counit_elem(&self, a: usize) -> RingElem {
        self.c.alg().from_r_coords(&self.counit.column(a))
    }

    /// `(ε ⊗ id)` on the ambient `C ⊗_R X` for a left module `X`.
    fn counit_left_on(&self, x_len: usize, left_act: impl Fn(&RingElem) -> Matrix) -> Matrix {
        let r = self.c.alg().r();
        let n = self.c.carrier().len();
        let mut cols = Vec::with_capacity(n * x_len);
        for a in 0..n {
            let act = left_act(&self.counit_elem(a));
            for m in 0..x_len {
                cols.push(act.column(m));
            }
        }
        Matrix::from_columns(r, x_len, &cols)
    }

    fn counit_left_ambient(&self) -> Matrix {
        self.counit_left_on(self.c.carrier().len(), |b| self.c.left_act(b))
    }

    fn counit_right_ambient(&self) -> Matrix {
        let r = self.c.alg().r();
        let n = self.c.carrier().len();
        let mut cols = Vec::with_capacity(n * n);
        let acts: Vec<Matrix> = (0..n).map(|b| self.c.right_act(&self.counit_elem(b))).collect();
        for a in 0..n {
            for act in &acts {
                cols.push(act.column(a));
            }
        }
        Matrix::from_columns(r, n, &cols)
    }

    pub fn bimodule(&self) -> &BBBimodule {
        &self.c
    }
    pub fn carrier(&self) -> &FinModule {
        self.c.carrier()
    }
    pub fn alg(&self) -> &AlgebraSpec {
        self.c.alg()
    }
    pub fn comult(&self) -> &Matrix {
        &self.comult
    }
    pub fn counit(&self) -> &Matrix {
        &self.counit
    }
    pub fn square(&self) -> &TensorB {
        &self.t2
    }

    /// Builds a coalgebra from term lists: `comult[j]` lists
    /// `(coefficient, a, b)` meaning `Δ(e_j) = Σ coefficient · [e_a ⊗ e_b]`,
    /// and `counit[j] = ε(e_j) ∈ B`.
    pub fn from_terms(c: BBBimodule, comult: &[Vec<(RingElem, usize, usize)>], counit: &[RingElem]) -> Result<Coalgebra> {
        let alg = c.alg().clone();
        let r = alg.r().clone();
        let n = c.carrier().len();
        if comult.len() != n || counit.len() != n {
            return Err(Error::DimensionMismatch(format!("expected {n} comultiplication and counit entries")));
        }
        let t2 = TensorB::new(&[&c, &c])?;
        let mut cols = Vec::with_capacity(n);
        for terms in comult {
            let mut amb = vec![r.zero(); t2.ambient_len()];
            for (coef, a, b) in terms {
                if *a >= n || *b >= n {
                    return Err(Error::DimensionMismatch(format!("generator index ({a},{b}) out of range")));
                }
                let k = t2.flat_index(&[*a, *b]);
                amb[k] = r.add(&amb[k], coef);
            }
            cols.push(t2.project(&amb));
        }
        let comult = Matrix::from_columns(&r, t2.carrier().len(), &cols);
        let counit_cols: Vec<Vec<RingElem>> = counit.iter().map(|b| alg.to_r_coords(b)).collect();
        let counit = Matrix::from_columns(&r, alg.degree(), &counit_cols);
        Coalgebra::new(c, comult, counit)
    }

    /// `C = B`, `Δ(1) = 1 ⊗ 1`, `ε = id`.
    pub fn trivial(alg: &AlgebraSpec) -> Coalgebra {
        let b = alg.regular_bimodule();
        let t2 = TensorB::new(&[&b, &b]).expect("B ⊗_B B");
        let f = alg.degree();
        let r = alg.r();
        let cols: Vec<Vec<RingElem>> = (0..f)
            .map(|j| t2.pure(&[&b.carrier().basis_vec(j), &b.carrier().basis_vec(0)]))
            .collect();
        let comult = Matrix::from_columns(r, t2.carrier().len(), &cols);
        Coalgebra::new(b, comult, Matrix::identity(r, f)).expect("trivial coalgebra")
    }

    /// Grouplike coalgebra on `g` generators, free over `B` on both sides.
    pub fn grouplike(alg: &AlgebraSpec, g: usize) -> Coalgebra {
        let act = alg.free_action(g);
        let c = BBBimodule::new(alg, FinModule::free(alg.r(), g * alg.degree()), act.clone(), act)
            .expect("free bimodule");
        let f = alg.degree();
        let r = alg.r();
        let mut comult = Vec::new();
        let mut counit = Vec::new();
        for i in 0..g {
            for j in 0..f {
                comult.push(vec![(r.one(), i * f + j, i * f)]);
                counit.push(alg.b().basis_elem(j));
            }
        }
        Coalgebra::from_terms(c, &comult, &counit).expect("grouplike coalgebra")
    }

    /// Comatrix coalgebra dual to `M_r(B)`: generators `c_ab` (index
    /// `a*r + b`), `Δ(c_ab) = Σ_t c_at ⊗ c_tb`, `ε(c_ab) = δ_ab`.
    pub fn comatrix(alg: &AlgebraSpec, rank: usize) -> Coalgebra {
        let f = alg.degree();
        let r = alg.r();
        let act = alg.free_action(rank * rank);
        let c = BBBimodule::new(alg, FinModule::free(r, rank * rank * f), act.clone(), act).expect("free bimodule");
        let mut comult = Vec::new();
        let mut counit = Vec::new();
        for a in 0..rank {
            for b in 0..rank {
                for j in 0..f {
                    comult.push(
                        (0..rank).map(|t| (r.one(), (a * rank + t) * f + j, (t * rank + b) * f)).collect(),
                    );
                    counit.push(if a == b { alg.b().basis_elem(j) } else { alg.b().zero() });
                }
            }
        }
        Coalgebra::from_terms(c, &comult, &counit).expect("comatrix coalgebra")
    }

    /// Whether the carrier is free as a right `B`-module (for a chain ring,
    /// equivalent to flatness).
    pub fn is_right_flat(&self) -> bool {
        self.c.right_free_basis().is_ok()
    }
}

/// Re-checks a coalgebra given as raw parts.
pub fn coalgebra_check(c: BBBimodule, comult: Matrix, counit: Matrix) -> Result<Coalgebra> {
    Coalgebra::new(c, comult, counit)
}

/// A validated left comodule. `rho` maps the carrier to the canonical
/// coordinates of `C ⊗_B M`.
#[derive(Clone, Debug)]
pub struct Comodule {
    coalg: Arc<Coalgebra>,
    m: LeftModule,
    rho: Matrix,
    cm: TensorB,
}

impl Comodule {
    pub fn new(coalg: &Arc<Coalgebra>, m: LeftModule, rho: Matrix) -> Result<Comodule> {
        if m.alg() != coalg.alg() {
            return Err(Error::RingMismatch(m.alg().b().to_string(), coalg.alg().b().to_string()));
        }
        let mb = m.as_bimodule();
        let cm = TensorB::new(&[coalg.bimodule(), &mb])?;
        let len = m.carrier().len();
        if rho.rows() != cm.carrier().len() || rho.cols() != len {
            return Err(Error::DimensionMismatch(format!("coaction must be {}x{}", cm.carrier().len(), len)));
        }
        let ec = cm.carrier().exps();
        let rho = rho.reduce_rows(ec);
        ModuleMap::new(m.carrier(), cm.carrier(), rho.clone())
            .map_err(|_| Error::Axiom { axiom: Axiom::NotModuleMap, witness: 0 })?;
        let lhs = rho.mul(m.left_x()).reduce_rows(ec);
        let rhs = cm.module.left_x().mul(&rho).reduce_rows(ec);
        if let Some(w) = first_diff(&lhs, &rhs) {
            return Err(Error::Axiom { axiom: Axiom::NotModuleMap, witness: w });
        }
        let cmod = Comodule { coalg: coalg.clone(), m, rho, cm };
        cmod.check_axioms()?;
        Ok(cmod)
    }

    /// The counit law is checked first: it is the cheaper and more specific report.
    fn check_axioms(&self) -> Result<()> {
        let coalg = &self.coalg;
        let r = coalg.alg().r();
        let len = self.m.carrier().len();
        let n = coalg.carrier().len();
        let lifted = self.cm.from_canon().mul(&self.rho);
        let delta = coalg.t2.from_canon().mul(&coalg.comult);
        let left = delta.kron_mul(&Matrix::identity(r, len), &lifted);
        let right = Matrix::identity(r, n).kron_mul(&lifted, &lifted);
        let (left, right) = if coalg.alg().degree() == 1 {
            let (ec, em) = (coalg.carrier().exps(), self.m.carrier().exps());
            let e3: Vec<u32> = (0..n * n * len)
                .map(|i| ec[i / (n * len)].min(ec[(i / len) % n]).min(em[i % len]))
                .collect();
            (left.reduce_rows(&e3), right.reduce_rows(&e3))
        } else if coalg.c.right_free_basis().is_ok() {
            (free_first_coords(&coalg.c, &self.cm, &left)?.0, free_first_coords(&coalg.c, &self.cm, &right)?.0)
        } else {
            let ccm = TensorB::new(&[coalg.bimodule(), coalg.bimodule(), &self.m.as_bimodule()])?;
            let e3 = ccm.carrier().exps();
            (ccm.to_canon().mul(&left).reduce_rows(e3), ccm.to_canon().mul(&right).reduce_rows(e3))
        };
        let exps = self.m.carrier().exps();
        let eps = coalg.counit_left_on(len, |b| self.m.act(b));
        let back = eps.mul(&lifted).reduce_rows(exps);
        if let Some(w) = first_diff(&back, &Matrix::identity(r, len).reduce_rows(exps)) {
            return Err(Error::Axiom { axiom: Axiom::CounitLeft, witness: w });
        }
        if let Some(w) = first_diff(&left, &right) {
            return Err(Error::Axiom { axiom: Axiom::Coassoc, witness: w });
        }
        Ok(())
    }

    /// Builds a comodule from terms: `rho(e_j) = Σ coefficient · [c_a ⊗ m_b]`.
    pub fn from_terms(coalg: &Arc<Coalgebra>, m: LeftModule, coaction: &[Vec<(RingElem, usize, usize)>]) -> Result<Comodule> {
        let r = coalg.alg().r().clone();
        let mb = m.as_bimodule();
        let cm = TensorB::new(&[coalg.bimodule(), &mb])?;
        let len = m.carrier().len();
        if coaction.len() != len {
            return Err(Error::DimensionMismatch(format!("expected {len} coaction entries")));
        }
        let mut cols = Vec::with_capacity(len);
        for terms in coaction {
            let mut amb = vec![r.zero(); cm.ambient_len()];
            for (coef, a, b) in terms {
                if *a >= coalg.carrier().len() || *b >= len {
                    return Err(Error::DimensionMismatch(format!("generator index ({a},{b}) out of range")));
                }
                let k = cm.flat_index(&[*a, *b]);
                amb[k] = r.add(&amb[k], coef);
            }
            cols.push(cm.project(&amb));
        }
        let rho = Matrix::from_columns(&r, cm.carrier().len(), &cols);
        Comodule::new(coalg, m, rho)
    }

    pub fn coalgebra(&self) -> &Arc<Coalgebra> {
        &self.coalg
    }
    pub fn module(&self) -> &LeftModule {
        &self.m
    }
    pub fn carrier(&self) -> &FinModule {
        self.m.carrier()
    }
    pub fn rho(&self) -> &Matrix {
        &self.rho
    }
    pub fn target(&self) -> &TensorB {
        &self.cm
    }

    /// `id_C ⊗ g : C ⊗_B self -> C ⊗_B other` in canonical coordinates.
    pub fn tensor_map(&self, other: &Comodule, g: &Matrix) -> Matrix {
        let id = Matrix::identity(self.coalg.alg().r(), self.coalg.carrier().len());
        self.cm.induced(&other.cm, &[&id, g])
    }

    /// Whether `g : self -> other` commutes with the coactions.
    pub fn is_morphism_to(&self, other: &Comodule, g: &Matrix) -> bool {
        let e = other.cm.carrier().exps();
        other.rho.mul(g).reduce_rows(e) == self.tensor_map(other, g).mul(&self.rho).reduce_rows(e)
    }

    /// A copy on `R^{rf}` with the standard free action, and the basis used.
    pub fn standardize(&self) -> Result<(Comodule, Matrix)> {
        let p = self.m.free_basis()?;
        let p_inv = linalg::inverse(&p).ok_or_else(|| Error::Internal("free basis not invertible".into()))?;
        let alg = self.coalg.alg();
        let std = alg.free_left_module(p.cols() / alg.degree());
        let mb = std.as_bimodule();
        let cm = TensorB::new(&[self.coalg.bimodule(), &mb])?;
        let id = Matrix::identity(alg.r(), self.coalg.carrier().len());
        let back = self.cm.induced(&cm, &[&id, &p_inv]);
        let rho = back.mul(&self.rho).mul(&p);
        Ok((Comodule::new(&self.coalg, std, rho)?, p))
    }
}

pub fn comodule_check(coalg: &Arc<Coalgebra>, m: LeftModule, rho: Matrix) -> Result<Comodule> {
    Comodule::new(coalg, m, rho)
}

/// An `R`-module of maps with an explicit generating list. `maps[k]`
/// generates the `k`-th canonical summand of `module`.
#[derive(Clone, Debug)]
pub struct MapSpace {
    pub module: FinModule,
    pub maps: Vec<Matrix>,
}

impl MapSpace {
    /// The map with canonical coordinates `c`.
    pub fn combine(&self, c: &[RingElem], rows: usize, cols: usize) -> Matrix {
        let r = self.module.ring();
        let mut acc = Matrix::zeros(r, rows, cols);
        for (m, x) in self.maps.iter().zip(c) {
            if !r.is_zero(x) {
                acc = acc.add(&m.scale(x));
            }
        }
        acc
    }
}

/// Comodule morphisms `M -> N`: the kernel of
/// `f ↦ ρ_N f − (id ⊗ f) ρ_M` on `Hom_B(M, N)`.
pub fn comodule_hom(m: &Comodule, n: &Comodule) -> Result<MapSpace> {
    if *m.coalg != *n.coalg {
        return Err(Error::RingMismatch("comodule over one coalgebra".into(), "another".into()));
    }
    let (hb, maps) = algebra::hom_b(&m.m, &n.m)?;
    let r = m.coalg.alg().r();
    let (rows, cols) = (n.cm.carrier().len(), m.carrier().len());
    let texps: Vec<u32> = (0..rows * cols).map(|k| n.cm.carrier().exps()[k / cols]).collect();
    let cons: Vec<Vec<RingElem>> = maps
        .iter()
        .map(|g| {
            let d = n.rho.mul(g.matrix()).sub(&m.tensor_map(n, g.matrix()).mul(&m.rho));
            (0..rows * cols).map(|k| d.get(k / cols, k % cols).clone()).collect()
        })
        .collect();
    let g = Matrix::from_columns(r, rows * cols, &cons);
    let gens = module::kernel_gens(hb.exps(), &g, &texps);
    let sub = Submodule::generated(&hb, &gens);
    let space = MapSpace { module: hb.clone(), maps: maps.iter().map(|g| g.matrix().clone()).collect() };
    let out = sub
        .inclusion_matrix()
        .columns()
        .iter()
        .map(|c| space.combine(c, n.carrier().len(), m.carrier().len()).reduce_rows(n.carrier().exps()))
        .collect();
    Ok(MapSpace { module: sub.module().clone(), maps: out })
}

/// Cauchy comodules are those whose underlying module is free over `B`.
pub fn is_cauchy(m: &Comodule) -> bool {
    m.m.is_free()
}

/// The cofree comodule `C ⊗_B M` with coaction `Δ ⊗ id`.
pub fn cofree(coalg: &Arc<Coalgebra>, m: &LeftModule) -> Result<Comodule> {
    let r = coalg.alg().r();
    let mb = m.as_bimodule();
    let cm = TensorB::new(&[coalg.bimodule(), &mb])?;
    let carrier = LeftModule::new(coalg.alg(), cm.carrier().clone(), cm.module.left_x().clone())?;
    let target = TensorB::new(&[coalg.bimodule(), &cm.module])?;
    let delta = coalg.t2.from_canon().mul(&coalg.comult);
    let amb = delta.kron_mul(&Matrix::identity(r, m.carrier().len()), cm.from_canon());
    let regrouped = Matrix::identity(r, coalg.carrier().len()).kron_mul(cm.to_canon(), &amb);
    let rho = target.to_canon_cols(&regrouped)?;
    Comodule::new(coalg, carrier, rho)
}

/// All `B`-submodules `S` with `ρ(S) ⊆ image(C ⊗_B S)`, found by closing
/// the zero submodule under adding cyclic submodules.
pub fn enumerate_subcomodules(m: &Comodule, budget: u64) -> Result<Vec<Submodule>> {
    let card = m.carrier().cardinality().unwrap_or(u64::MAX);
    let elements: Vec<Vec<RingElem>> = m.carrier().elements(budget)?.collect();
    let alg = m.coalg.alg();
    let f = alg.degree();
    let r = alg.r();
    let len = m.carrier().len();
    let cyclic = |v: &[RingElem]| -> Vec<Vec<RingElem>> {
        let mut out = vec![v.to_vec()];
        for _ in 1..f {
            let next = m.m.left_x().mul_vec(out.last().unwrap());
            out.push(next);
        }
        out
    };
    let key = |s: &Submodule| -> Vec<bool> { elements.iter().map(|e| s.contains(e)).collect() };
    let zero = Submodule::generated(m.carrier(), &Matrix::zeros(r, len, 0));
    let mut seen = std::collections::HashSet::new();
    seen.insert(key(&zero));
    let mut queue = vec![zero];
    let mut all = Vec::new();
    let mut work = 0u64;
    while let Some(s) = queue.pop() {
        for e in &elements {
            if s.contains(e) {
                continue;
            }
            work += card;
            if work > budget.saturating_mul(64) {
                return Err(Error::BudgetExceeded { budget, needed: "more submodule probes".into() });
            }
            let mut cols = s.generators().columns();
            cols.extend(cyclic(e));
            let t = Submodule::generated(m.carrier(), &Matrix::from_columns(r, len, &cols));
            if seen.insert(key(&t)) {
                queue.push(t);
            }
        }
        all.push(s);
    }
    let mut keep = Vec::new();
    for s in all {
        if is_subcomodule(m, &s)? {
            keep.push(s);
        }
    }
    keep.sort_by_key(|s| s.module().length());
    Ok(keep)
}

fn sub_left_module(m: &Comodule, s: &Submodule) -> Result<LeftModule> {
    let r = m.coalg.alg().r();
    let cols: Vec<Vec<RingElem>> = s
        .inclusion_matrix()
        .columns()
        .iter()
        .map(|c| s.coords(&m.m.left_x().mul_vec(c)).expect("B-submodule"))
        .collect();
    LeftModule::new(m.coalg.alg(), s.module().clone(), Matrix::from_columns(r, s.module().len(), &cols))
}

fn is_subcomodule(m: &Comodule, s: &Submodule) -> Result<bool> {
    let sm = sub_left_module(m, s)?;
    let sb = sm.as_bimodule();
    let cs = TensorB::new(&[m.coalg.bimodule(), &sb])?;
    let id = Matrix::identity(m.coalg.alg().r(), m.coalg.carrier().len());
    let push = cs.induced(&m.cm, &[&id, s.inclusion_matrix()]);
    let img = Submodule::generated(m.cm.carrier(), &push);
    Ok(s.inclusion_matrix().columns().iter().all(|c| img.contains(&m.rho.mul_vec(c))))
}

/// The subcomodule structure on `S`, when `C ⊗_B S -> C ⊗_B M` is injective.
pub fn subcomodule(m: &Comodule, s: &Submodule) -> Result<Comodule> {
    let sm = sub_left_module(m, s)?;
    let sb = sm.as_bimodule();
    let cs = TensorB::new(&[m.coalg.bimodule(), &sb])?;
    let r = m.coalg.alg().r();
    let id = Matrix::identity(r, m.coalg.carrier().len());
    let push = cs.induced(&m.cm, &[&id, s.inclusion_matrix()]);
    let pm = ModuleMap::new(cs.carrier(), m.cm.carrier(), push.clone())?;
    if !pm.is_injective() {
        return Err(Error::NotWellDefined("C ⊗_B S does not embed in C ⊗_B M".into()));
    }
    let sys = push.hstack(&m.cm.carrier().relation_matrix());
    let sf = linalg::smith(&sys);
    let mut cols = Vec::new();
    for c in s.inclusion_matrix().columns() {
        let y = linalg::solve_with(&sf, sys.cols(), &m.rho.mul_vec(&c))
            .ok_or_else(|| Error::NotWellDefined("submodule is not a subcomodule".into()))?;
        cols.push(cs.carrier().reduce(&y[..cs.carrier().len()]));
    }
    Comodule::new(&m.coalg, sm, Matrix::from_columns(r, cs.carrier().len(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn f2() -> AlgebraSpec {
        AlgebraSpec::over_prime_ring(&Ring::new(2, 1, 1).unwrap()).unwrap()
    }

    fn line(c: &Arc<Coalgebra>, terms: Vec<(i64, usize)>) -> Result<Comodule> {
        let alg = c.alg().clone();
        let r = alg.r().clone();
        Comodule::from_terms(c, alg.free_left_module(1), &[terms.into_iter().map(|(k, a)| (r.from_int(k), a, 0)).collect()])
    }

    #[test]
    fn standard_coalgebras_validate() {
        for ring in [Ring::new(2, 1, 1), Ring::new(3, 1, 1), Ring::new(2, 2, 2)] {
            let alg = AlgebraSpec::over_prime_ring(&ring.unwrap()).unwrap();
            Coalgebra::trivial(&alg);
            Coalgebra::grouplike(&alg, 2);
            Coalgebra::comatrix(&alg, 2);
        }
    }

    #[test]
    fn transposed_comatrix_fails() {
        let alg = f2();
        let r = alg.r().clone();
        let c = Coalgebra::comatrix(&alg, 2).bimodule().clone();
        // Δ(c_ab) = Σ c_tb ⊗ c_at is anti-multiplicative but still coassociative;
        // a wrong counit is caught.
        let comult: Vec<Vec<_>> =
            (0..4).map(|k| (0..2).map(|t| (r.one(), (k / 2) * 2 + t, t * 2 + k % 2)).collect()).collect();
        let counit = vec![r.one(), r.one(), r.zero(), r.one()];
        let err = Coalgebra::from_terms(c, &comult, &counit).unwrap_err();
        assert!(matches!(err, Error::Axiom { axiom: Axiom::CounitLeft | Axiom::CounitRight, .. }));
    }

    #[test]
    fn grouplike_lines() {
        let alg = f2();
        let c = Arc::new(Coalgebra::grouplike(&alg, 2));
        let m0 = line(&c, vec![(1, 0)]).unwrap();
        let m1 = line(&c, vec![(1, 1)]).unwrap();
        let err = line(&c, vec![(1, 0), (1, 1)]).unwrap_err();
        assert_eq!(err, Error::Axiom { axiom: Axiom::CounitLeft, witness: 0 });
        assert_eq!(comodule_hom(&m0, &m1).unwrap().module.len(), 0);
        let h = comodule_hom(&m0, &m0).unwrap();
        assert_eq!(h.module.exps(), &[1]);
    }

    #[test]
    fn cofree_over_grouplike() {
        let alg = f2();
        let c = Arc::new(Coalgebra::grouplike(&alg, 2));
        let cf = cofree(&c, &alg.free_left_module(1)).unwrap();
        assert_eq!(cf.carrier().len(), 2);
        let subs = enumerate_subcomodules(&cf, 1 << 10).unwrap();
        assert_eq!(subs.len(), 4);
        let t = Arc::new(Coalgebra::trivial(&alg));
        let cf = cofree(&t, &alg.free_left_module(2)).unwrap();
        assert_eq!(enumerate_subcomodules(&cf, 1 << 10).unwrap().len(), 5);
    }
}
