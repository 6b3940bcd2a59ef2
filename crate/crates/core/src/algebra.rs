//! The base algebra `B = GR(p^n, f)` over `R = Z/p^n`, modules and
//! bimodules over it, and tensor products over `B`.
//!
//! A `B`-module is stored as an `R`-module together with the matrix by
//! which the generator `x` of `B` acts. Bimodules carry independent left and
//! right actions; `B` is commutative but `B ⊗_R B` is not `B`, so the two
//! sides genuinely differ on coalgebras such as `L(ω)`.

use crate::error::{BimoduleAxiom, Error, Result};
use crate::linalg::{self, Cokernel};
use crate::matrix::Matrix;
use crate::module::{self, FinModule, ModuleMap};
use crate::ring::{Ring, RingElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    r: Ring,
    b: Ring,
    /// Multiplication by `x` on the `R`-basis `1, x, ..., x^{f-1}` of `B`.
    x_mat: Matrix,
}

impl AlgebraSpec {
    pub fn new(r: &Ring, b: &Ring) -> Result<AlgebraSpec> {
        if r.f() != 1 || r.p() != b.p() || r.n() != b.n() {
            return Err(Error::RingMismatch(r.to_string(), b.to_string()));
        }
        let x_mat = Matrix::from_ints(r, &[]);
        let mut spec = AlgebraSpec { r: r.clone(), b: b.clone(), x_mat };
        spec.x_mat = spec.mult_matrix(&b.gen());
        Ok(spec)
    }

    /// `B` over its prime ring `Z/p^n`.
    pub fn over_prime_ring(b: &Ring) -> Result<AlgebraSpec> {
        let r = Ring::integers_mod(b.p(), b.n())?;
        AlgebraSpec::new(&r, b)
    }

    pub fn r(&self) -> &Ring {
        &self.r
    }
    pub fn b(&self) -> &Ring {
        &self.b
    }
    /// Rank of `B` over `R`.
    pub fn degree(&self) -> usize {
        self.b.f()
    }
    pub fn x_matrix(&self) -> &Matrix {
        &self.x_mat
    }

    pub fn to_r_coords(&self, b: &RingElem) -> Vec<RingElem> {
        b.coeffs().iter().map(|&c| self.r.from_int(c as i64)).collect()
    }

    pub fn from_r_coords(&self, v: &[RingElem]) -> RingElem {
        let c: Vec<i64> = v.iter().map(|e| e.coeffs()[0] as i64).collect();
        self.b.from_coeffs(&c)
    }

    /// Multiplication by `b` as an `f x f` matrix over `R`.
    pub fn mult_matrix(&self, b: &RingElem) -> Matrix {
        let ints = self.b.mult_matrix_int(b);
        let rows: Vec<Vec<RingElem>> =
            ints.iter().map(|row| row.iter().map(|&v| self.r.from_int(v as i64)).collect()).collect();
        Matrix::from_rows(&self.r, rows).expect("square block")
    }

    /// A `B`-matrix as an `R`-matrix on coordinate vectors (index `i*f + j`
    /// is the coefficient of `x^j e_i`).
    pub fn b_matrix_to_r(&self, m: &Matrix) -> Matrix {
        m.restrict_scalars(&self.r)
    }

    /// Inverse of [`Self::b_matrix_to_r`] for `B`-linear `R`-matrices.
    pub fn r_matrix_to_b(&self, m: &Matrix) -> Matrix {
        let f = self.degree();
        let rows = m.rows() / f;
        let cols = m.cols() / f;
        let mut out = Matrix::zeros(&self.b, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let coords: Vec<RingElem> = (0..f).map(|j| m.get(r * f + j, c * f).clone()).collect();
                out.set(r, c, self.from_r_coords(&coords));
            }
        }
        out
    }

    /// Flattens a `B`-matrix to its `R`-coordinates (row-major entries, `f`
    /// coordinates each).
    pub fn flatten_b_matrix(&self, m: &Matrix) -> Vec<RingElem> {
        let mut out = Vec::with_capacity(m.rows() * m.cols() * self.degree());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.extend(self.to_r_coords(m.get(r, c)));
            }
        }
        out
    }

    pub fn unflatten_b_matrix(&self, v: &[RingElem], rows: usize, cols: usize) -> Matrix {
        let f = self.degree();
        let mut out = Matrix::zeros(&self.b, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let k = (r * cols + c) * f;
                out.set(r, c, self.from_r_coords(&v[k..k + f]));
            }
        }
        out
    }

    /// `x`-action on the free module `B^rank`.
    pub fn free_action(&self, rank: usize) -> Matrix {
        let blocks: Vec<&Matrix> = std::iter::repeat_n(&self.x_mat, rank).collect();
        Matrix::block_diag(&self.r, &blocks)
    }

    pub fn free_left_module(&self, rank: usize) -> LeftModule {
        LeftModule {
            alg: self.clone(),
            carrier: FinModule::free(&self.r, rank * self.degree()),
            left_x: self.free_action(rank),
        }
    }

    /// `B` as a bimodule over itself.
    pub fn regular_bimodule(&self) -> BBBimodule {
        BBBimodule {
            alg: self.clone(),
            carrier: FinModule::free(&self.r, self.degree()),
            left_x: self.x_mat.clone(),
            right_x: self.x_mat.clone(),
        }
    }
}

/// Action of `b = sum c_j x^j` through the matrix `act` of `x`.
fn act_by(alg: &AlgebraSpec, act: &Matrix, b: &RingElem) -> Matrix {
    let r = &alg.r;
    let mut acc = Matrix::zeros(r, act.rows(), act.cols());
    let mut pow = Matrix::identity(r, act.rows());
    for (j, &c) in b.coeffs().iter().enumerate() {
        if j > 0 {
            pow = pow.mul(act);
        }
        if c != 0 {
            acc = acc.add(&pow.scale(&r.from_int(c as i64)));
        }
    }
    acc
}

fn check_action(alg: &AlgebraSpec, carrier: &FinModule, act: &Matrix) -> Result<()> {
    ModuleMap::new(carrier, carrier, act.clone())?;
    let h = alg.b.defining_polynomial();
    if !act.eval_poly(h).reduce_rows(carrier.exps()).is_zero() {
        return Err(Error::Bimodule(BimoduleAxiom::ModulusViolation));
    }
    Ok(())
}

/// Left `B`-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftModule {
    alg: AlgebraSpec,
    carrier: FinModule,
    left_x: Matrix,
}

impl LeftModule {
    pub fn new(alg: &AlgebraSpec, carrier: FinModule, left_x: Matrix) -> Result<LeftModule> {
        check_action(alg, &carrier, &left_x)?;
        let left_x = left_x.reduce_rows(carrier.exps());
        Ok(LeftModule { alg: alg.clone(), carrier, left_x })
    }

    pub fn alg(&self) -> &AlgebraSpec {
        &self.alg
    }
    pub fn carrier(&self) -> &FinModule {
        &self.carrier
    }
    pub fn left_x(&self) -> &Matrix {
        &self.left_x
    }

    pub fn act(&self, b: &RingElem) -> Matrix {
        act_by(&self.alg, &self.left_x, b)
    }

    /// Symmetric bimodule with right action equal to the left one.
    pub fn as_bimodule(&self) -> BBBimodule {
        BBBimodule {
            alg: self.alg.clone(),
            carrier: self.carrier.clone(),
            left_x: self.left_x.clone(),
            right_x: self.left_x.clone(),
        }
    }

    /// An `R`-isomorphism `R^{rf} -> M` whose columns are `x^j v_s` for a
    /// `B`-basis `v_0, ..., v_{r-1}`, or `NonFree`.
    pub fn free_basis(&self) -> Result<Matrix> {
        free_basis_for(&self.alg, &self.carrier, &self.left_x)
    }

    pub fn is_free(&self) -> bool {
        self.free_basis().is_ok()
    }

    pub fn b_rank(&self) -> Result<usize> {
        Ok(self.free_basis()?.cols() / self.alg.degree())
    }
}

fn free_basis_for(alg: &AlgebraSpec, carrier: &FinModule, act: &Matrix) -> Result<Matrix> {
    let r = &alg.r;
    let f = alg.degree();
    if !carrier.is_projective() {
        return Err(Error::NonFree(format!("{carrier} has torsion")));
    }
    let len = carrier.len();
    if !len.is_multiple_of(f) {
        return Err(Error::NonFree(format!("R-rank {len} not divisible by {f}")));
    }
    let mut cols: Vec<Vec<RingElem>> = Vec::new();
    let mut rank = 0;
    for i in 0..len {
        if rank == len {
            break;
        }
        let mut cand = cols.clone();
        let mut v = carrier.basis_vec(i);
        for j in 0..f {
            if j > 0 {
                v = act.mul_vec(&v);
            }
            cand.push(v.clone());
        }
        let m = Matrix::from_columns(r, len, &cand);
        let new_rank = linalg::rank_mod_p(&m);
        if new_rank == rank + f {
            cols = cand;
            rank = new_rank;
        }
    }
    let p = Matrix::from_columns(r, len, &cols);
    if cols.len() != len || !linalg::is_invertible(&p) {
        return Err(Error::NonFree(format!("{carrier} admits no B-basis")));
    }
    Ok(p)
}

/// `B`-`B`-bimodule: an `R`-module with commuting left and right `x`-actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBBimodule {
    alg: AlgebraSpec,
    carrier: FinModule,
    left_x: Matrix,
    right_x: Matrix,
}

impl BBBimodule {
    /// Validates the modulus on each side, then commutation.
    pub fn new(alg: &AlgebraSpec, carrier: FinModule, left_x: Matrix, right_x: Matrix) -> Result<BBBimodule> {
        if carrier.ring() != alg.r() {
            return Err(Error::RingMismatch(carrier.ring().to_string(), alg.r().to_string()));
        }
        check_action(alg, &carrier, &left_x)?;
        check_action(alg, &carrier, &right_x)?;
        let lr = left_x.mul(&right_x).reduce_rows(carrier.exps());
        let rl = right_x.mul(&left_x).reduce_rows(carrier.exps());
        if lr != rl {
            return Err(Error::Bimodule(BimoduleAxiom::NonCommutingActions));
        }
        let left_x = left_x.reduce_rows(carrier.exps());
        let right_x = right_x.reduce_rows(carrier.exps());
        Ok(BBBimodule { alg: alg.clone(), carrier, left_x, right_x })
    }

    pub(crate) fn new_unchecked(alg: &AlgebraSpec, carrier: FinModule, left_x: Matrix, right_x: Matrix) -> BBBimodule {
        BBBimodule { alg: alg.clone(), carrier, left_x, right_x }
    }

    pub fn alg(&self) -> &AlgebraSpec {
        &self.alg
    }
    pub fn carrier(&self) -> &FinModule {
        &self.carrier
    }
    pub fn left_x(&self) -> &Matrix {
        &self.left_x
    }
    pub fn right_x(&self) -> &Matrix {
        &self.right_x
    }

    pub fn left_act(&self, b: &RingElem) -> Matrix {
        act_by(&self.alg, &self.left_x, b)
    }

    pub fn right_act(&self, b: &RingElem) -> Matrix {
        act_by(&self.alg, &self.right_x, b)
    }

    pub fn left_module(&self) -> LeftModule {
        LeftModule { alg: self.alg.clone(), carrier: self.carrier.clone(), left_x: self.left_x.clone() }
    }

    /// `B`-basis for the right action, if the module is free as a right
    /// `B`-module.
    pub fn right_free_basis(&self) -> Result<Matrix> {
        free_basis_for(&self.alg, &self.carrier, &self.right_x)
    }

    /// Whether `f` commutes with both actions (`f : self -> other`).
    pub fn is_bimodule_map(&self, other: &BBBimodule, f: &Matrix) -> bool {
        let exps = other.carrier.exps();
        f.mul(&self.left_x).reduce_rows(exps) == other.left_x.mul(f).reduce_rows(exps)
            && f.mul(&self.right_x).reduce_rows(exps) == other.right_x.mul(f).reduce_rows(exps)
    }
}

/// Iterated tensor product `X_1 ⊗_B X_2 ⊗_B ... ⊗_B X_k`, computed as the
/// cokernel of the middle-linearity relations on `X_1 ⊗_R ... ⊗_R X_k`.
///
/// The ambient `R`-tensor uses flat lexicographic indices (first factor
/// slowest), matching [`Matrix::kron`].
#[derive(Clone, Debug)]
pub struct TensorB {
    pub module: BBBimodule,
    lens: Vec<usize>,
    ambient_exps: Vec<u32>,
    pres: Cokernel,
    /// First factor, tensor of the rest and row order, when the first
    /// factor is right-free.
    split: Option<Box<(BBBimodule, TensorB, Vec<usize>)>>,
}

impl TensorB {
    pub fn new(factors: &[&BBBimodule]) -> Result<TensorB> {
        assert!(!factors.is_empty());
        let alg = factors[0].alg.clone();
        if factors.iter().any(|x| x.alg != alg) {
            return Err(Error::RingMismatch(alg.b.to_string(), "different base algebra".into()));
        }
        let r = alg.r.clone();
        let lens: Vec<usize> = factors.iter().map(|x| x.carrier.len()).collect();
        let total: usize = lens.iter().product();
        let mut ambient_exps = vec![r.n(); total];
        for (flat, e) in ambient_exps.iter_mut().enumerate() {
            let idx = unflatten(flat, &lens);
            for (t, &i) in idx.iter().enumerate() {
                *e = (*e).min(factors[t].carrier.exps()[i]);
            }
        }
        let no_relations = alg.degree() == 1 || factors.len() == 1;
        let mut free_split = None;
        let pres = if !no_relations {
            match factors[0].right_free_basis() {
                Ok(p) => {
                    let rest = TensorB::new(&factors[1..])?;
                    let (pres, order) = split_free_first(factors, &p, &rest)?;
                    free_split = Some((factors[0].clone(), rest, p, order));
                    pres
                }
                Err(_) => relation_presentation(&r, factors, &lens, &ambient_exps),
            }
        } else {
            linalg::cokernel_in(&r, &ambient_exps, &Matrix::zeros(&r, total, 0))
        };
        let carrier = FinModule::new(&r, &pres.exps)?;
        let lefts: Vec<Matrix> = factors
            .iter()
            .enumerate()
            .map(|(t, x)| if t == 0 { x.left_x.clone() } else { Matrix::identity(&r, x.carrier.len()) })
            .collect();
        let rights: Vec<Matrix> = factors
            .iter()
            .enumerate()
            .map(|(t, x)| {
                if t + 1 == factors.len() {
                    x.right_x.clone()
                } else {
                    Matrix::identity(&r, x.carrier.len())
                }
            })
            .collect();
        let (left_x, right_x) = if no_relations {
            let order: Vec<usize> = (0..carrier.len())
                .map(|k| (0..total).find(|&i| !r.is_zero(pres.from_canon.get(i, k))).expect("selection"))
                .collect();
            (selected_kron(&r, &lefts, &lens, &order), selected_kron(&r, &rights, &lens, &order))
        } else if let Some((_, rest, p, order)) = &free_split {
            // both actions factor as (A ⊗ Y) on the first slot and the rest
            let f = alg.degree();
            let p0 = p.select_columns(&(0..p.cols() / f).map(|si| si * f).collect::<Vec<_>>());
            let rest_right = kron_all(&rights[1..].iter().collect::<Vec<_>>()).mul(&rest.pres.from_canon);
            let act = |a: Matrix, y: &Matrix| -> Result<Matrix> {
                let cols = a.kron(y).select_columns(order);
                Ok(free_first_coords(factors[0], rest, &cols)?.0.select_rows(order))
            };
            (act(factors[0].left_x.mul(&p0), &rest.pres.from_canon)?, act(p0, &rest_right)?)
        } else {
            let left_amb = kron_all(&lefts.iter().collect::<Vec<_>>());
            let right_amb = kron_all(&rights.iter().collect::<Vec<_>>());
            (
                pres.to_canon.mul(&left_amb).mul(&pres.from_canon),
                pres.to_canon.mul(&right_amb).mul(&pres.from_canon),
            )
        };
        let left_x = left_x.reduce_rows(carrier.exps());
        let right_x = right_x.reduce_rows(carrier.exps());
        let module = BBBimodule::new_unchecked(&alg, carrier, left_x, right_x);
        let split = free_split.map(|(first, rest, _, order)| Box::new((first, rest, order)));
        Ok(TensorB { module, lens, ambient_exps, pres, split })
    }

    pub fn carrier(&self) -> &FinModule {
        self.module.carrier()
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient_exps.len()
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.lens).fold(0, |acc, (&i, &l)| acc * l + i)
    }

    /// Canonical coordinates of an ambient `R`-tensor vector.
    pub fn project(&self, ambient: &[RingElem]) -> Vec<RingElem> {
        self.pres.project(ambient)
    }

    /// Ambient representative of canonical coordinates.
    pub fn lift(&self, canon: &[RingElem]) -> Vec<RingElem> {
        self.pres.from_canon.mul_vec(canon)
    }

    /// Canonical coordinates of ambient columns, reduced.
    pub fn to_canon_cols(&self, cols: &Matrix) -> Result<Matrix> {
        match &self.split {
            Some(sp) => Ok(free_first_coords(&sp.0, &sp.1, cols)?.0.select_rows(&sp.2).reduce_rows(&self.pres.exps)),
            None => Ok(self.pres.to_canon.mul(cols).reduce_rows(&self.pres.exps)),
        }
    }

    pub fn to_canon(&self) -> &Matrix {
        &self.pres.to_canon
    }
    pub fn from_canon(&self) -> &Matrix {
        &self.pres.from_canon
    }

    /// Class of a pure tensor `v_1 ⊗ ... ⊗ v_k`.
    pub fn pure(&self, vs: &[&[RingElem]]) -> Vec<RingElem> {
        let r = self.pres.to_canon.ring();
        let owned: Vec<Vec<RingElem>> = vs.iter().map(|v| v.to_vec()).collect();
        self.project(&outer(r, &owned))
    }

    /// Ambient `R`-tensor of vectors (no projection).
    pub fn pure_ambient(&self, vs: &[&[RingElem]]) -> Vec<RingElem> {
        let r = self.pres.to_canon.ring();
        let owned: Vec<Vec<RingElem>> = vs.iter().map(|v| v.to_vec()).collect();
        outer(r, &owned)
    }

    /// `f_1 ⊗ ... ⊗ f_k` from `self` to `target`, in canonical coordinates.
    pub fn induced(&self, target: &TensorB, maps: &[&Matrix]) -> Matrix {
        let k = kron_all(maps);
        target.pres.to_canon.mul(&k).mul(&self.pres.from_canon).reduce_rows(target.carrier().exps())
    }
}

/// Cokernel of the middle-linearity relations (`b = x` suffices, since `x`
/// generates `B` as an `R`-algebra).
fn relation_presentation(r: &Ring, factors: &[&BBBimodule], lens: &[usize], ambient_exps: &[u32]) -> Cokernel {
    let total = ambient_exps.len();
    let mut rels: Vec<Vec<RingElem>> = Vec::new();
    for t in 0..factors.len() - 1 {
        for flat in 0..total {
            let idx = unflatten(flat, lens);
            let mut left: Vec<Vec<RingElem>> =
                idx.iter().enumerate().map(|(s, &i)| factors[s].carrier.basis_vec(i)).collect();
            let mut right = left.clone();
            left[t] = factors[t].right_x.mul_vec(&left[t]);
            right[t + 1] = factors[t + 1].left_x.mul_vec(&right[t + 1]);
            let a = outer(r, &left);
            let b = outer(r, &right);
            let d: Vec<RingElem> = a.iter().zip(&b).map(|(x, y)| r.sub(x, y)).collect();
            if d.iter().any(|x| !r.is_zero(x)) {
                rels.push(d);
            }
        }
    }
    let rel_mat = Matrix::from_columns(r, total, &rels);
    linalg::cokernel_in(r, ambient_exps, &rel_mat)
}

/// Presentation when the first factor is right-free with basis `p`
/// (columns `v_s x^j`): `X ⊗_B Y ≅ Y^s` via `v_s ⊗ y ↦ y` in slot `s`.
fn split_free_first(factors: &[&BBBimodule], p: &Matrix, rest: &TensorB) -> Result<(Cokernel, Vec<usize>)> {
    let alg = factors[0].alg();
    let r = alg.r();
    let f = alg.degree();
    let s = p.cols() / f;
    let len0 = factors[0].carrier.len();
    let p_inv = linalg::inverse(p).ok_or_else(|| Error::Internal("free basis not invertible".into()))?;
    let rest_left = rest.module.left_x();
    let mut step = rest.pres.to_canon.clone();
    let mut to_canon: Option<Matrix> = None;
    for j in 0..f {
        if j > 0 {
            step = rest_left.mul(&step);
        }
        let mut c = Matrix::zeros(r, s, len0);
        for si in 0..s {
            for a in 0..len0 {
                c.set(si, a, p_inv.get(si * f + j, a).clone());
            }
        }
        let term = c.kron(&step);
        to_canon = Some(match to_canon {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    let to_canon = to_canon.expect("degree at least one");
    let p0 = p.select_columns(&(0..s).map(|si| si * f).collect::<Vec<_>>());
    let from_canon = p0.kron(&rest.pres.from_canon);
    let rest_exps = &rest.pres.exps;
    let exps: Vec<u32> = (0..s).flat_map(|_| rest_exps.iter().copied()).collect();
    let mut order: Vec<usize> = (0..exps.len()).collect();
    order.sort_by(|&a, &b| exps[b].cmp(&exps[a]).then(a.cmp(&b)));
    let sorted: Vec<u32> = order.iter().map(|&i| exps[i]).collect();
    let to_canon = if order.is_empty() {
        Matrix::zeros(r, 0, to_canon.cols())
    } else {
        let to_rows: Vec<Vec<RingElem>> = order.iter().map(|&i| to_canon.row(i)).collect();
        Matrix::from_rows(r, to_rows)?.reduce_rows(&sorted)
    };
    let from_canon = from_canon.select_columns(&order);
    Ok((Cokernel { exps: sorted, to_canon, from_canon }, order))
}

/// Canonical coordinates in `first ⊗_B rest` of ambient columns of
/// `first ⊗_R (ambient of rest)`, for `first` free as a right `B`-module.
/// Rows are indexed `s * len(rest) + k` and reduced by the returned
/// exponents. The presentation of the product is never formed.
pub fn free_first_coords(first: &BBBimodule, rest: &TensorB, cols: &Matrix) -> Result<(Matrix, Vec<u32>)> {
    let alg = first.alg();
    let r = alg.r();
    let f = alg.degree();
    let p = first.right_free_basis()?;
    let p_inv = linalg::inverse(&p).ok_or_else(|| Error::Internal("free basis not invertible".into()))?;
    let s = p.cols() / f;
    let len0 = first.carrier.len();
    let amb = rest.ambient_len();
    let m = rest.carrier().len();
    assert_eq!(cols.rows(), len0 * amb, "ambient length");
    let mut out = Matrix::zeros(r, s * m, cols.cols());
    for j in 0..f {
        // rows of C_j Y, one block of s ambient columns per input column
        let mut w = Matrix::zeros(r, amb, s * cols.cols());
        for col in 0..cols.cols() {
            for a in 0..len0 {
                for t in 0..amb {
                    let e = cols.get(a * amb + t, col);
                    if r.is_zero(e) {
                        continue;
                    }
                    for si in 0..s {
                        let c = p_inv.get(si * f + j, a);
                        if !r.is_zero(c) {
                            let v = r.add(w.get(t, col * s + si), &r.mul(c, e));
                            w.set(t, col * s + si, v);
                        }
                    }
                }
            }
        }
        let mut z = rest.to_canon_cols(&w)?;
        for _ in 0..j {
            z = rest.module.left_x().mul(&z);
        }
        for col in 0..cols.cols() {
            for si in 0..s {
                for k in 0..m {
                    let e = z.get(k, col * s + si);
                    if !r.is_zero(e) {
                        let v = r.add(out.get(si * m + k, col), e);
                        out.set(si * m + k, col, v);
                    }
                }
            }
        }
    }
    let exps: Vec<u32> = (0..s).flat_map(|_| rest.carrier().exps().iter().copied()).collect();
    Ok((out.reduce_rows(&exps), exps))
}

/// `⊗ mats` restricted to the ambient coordinates `order`, built column by
/// column from sparse outer products.
fn selected_kron(r: &Ring, mats: &[Matrix], lens: &[usize], order: &[usize]) -> Matrix {
    let total: usize = lens.iter().product();
    let mut pos = vec![usize::MAX; total];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    let mut out = Matrix::zeros(r, order.len(), order.len());
    for (k, &flat) in order.iter().enumerate() {
        let idx = unflatten(flat, lens);
        let mut acc: Vec<(usize, RingElem)> = vec![(0, r.one())];
        for (t, m) in mats.iter().enumerate() {
            let col = m.column(idx[t]);
            let mut next = Vec::new();
            for (a, x) in &acc {
                for (i, y) in col.iter().enumerate() {
                    if !r.is_zero(y) {
                        next.push((a * lens[t] + i, r.mul(x, y)));
                    }
                }
            }
            acc = next;
        }
        for (i, v) in acc {
            if pos[i] != usize::MAX {
                out.set(pos[i], k, v);
            }
        }
    }
    out
}

fn unflatten(mut flat: usize, lens: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; lens.len()];
    for t in (0..lens.len()).rev() {
        idx[t] = flat % lens[t];
        flat /= lens[t];
    }
    idx
}

/// Outer product of coordinate vectors in flat lexicographic order.
pub fn outer(r: &Ring, vs: &[Vec<RingElem>]) -> Vec<RingElem> {
    let mut acc = vec![r.one()];
    for v in vs {
        let mut next = Vec::with_capacity(acc.len() * v.len());
        for a in &acc {
            for b in v {
                next.push(if r.is_zero(a) || r.is_zero(b) { r.zero() } else { r.mul(a, b) });
            }
        }
        acc = next;
    }
    acc
}

pub fn kron_all(ms: &[&Matrix]) -> Matrix {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = acc.kron(m);
    }
    acc
}

/// `X ⊗_B Y`.
pub fn tensor_over_b(x: &BBBimodule, y: &BBBimodule) -> Result<TensorB> {
    TensorB::new(&[x, y])
}

/// The multiplication isomorphism `B ⊗_B Y -> Y`.
pub fn left_unitor(y: &BBBimodule) -> Result<(TensorB, ModuleMap)> {
    let alg = y.alg();
    let b = alg.regular_bimodule();
    let t = TensorB::new(&[&b, y])?;
    let f = alg.degree();
    let mut cols = Vec::new();
    for a in 0..f {
        let act = y.left_act(&alg.b().basis_elem(a));
        for c in 0..y.carrier().len() {
            cols.push(act.column(c));
        }
    }
    let amb = Matrix::from_columns(alg.r(), y.carrier().len(), &cols);
    let m = amb.mul(t.from_canon()).reduce_rows(y.carrier().exps());
    let map = ModuleMap::new(t.carrier(), y.carrier(), m)?;
    Ok((t, map))
}

/// The multiplication isomorphism `X ⊗_B B -> X`.
pub fn right_unitor(x: &BBBimodule) -> Result<(TensorB, ModuleMap)> {
    let alg = x.alg();
    let b = alg.regular_bimodule();
    let t = TensorB::new(&[x, &b])?;
    let f = alg.degree();
    let mut cols = Vec::new();
    for c in 0..x.carrier().len() {
        for a in 0..f {
            let act = x.right_act(&alg.b().basis_elem(a));
            cols.push(act.column(c));
        }
    }
    let amb = Matrix::from_columns(alg.r(), x.carrier().len(), &cols);
    let m = amb.mul(t.from_canon()).reduce_rows(x.carrier().exps());
    let map = ModuleMap::new(t.carrier(), x.carrier(), m)?;
    Ok((t, map))
}

/// The associativity isomorphism `(X ⊗_B Y) ⊗_B Z -> X ⊗_B (Y ⊗_B Z)`.
pub fn associator(x: &BBBimodule, y: &BBBimodule, z: &BBBimodule) -> Result<ModuleMap> {
    let xy = TensorB::new(&[x, y])?;
    let yz = TensorB::new(&[y, z])?;
    let left = TensorB::new(&[&xy.module, z])?;
    let right = TensorB::new(&[x, &yz.module])?;
    let r = x.alg().r();
    // (XY)_canon ⊗_R Z  ->  X ⊗_R Y ⊗_R Z  ->  X ⊗_R (YZ)_canon
    let up = xy.from_canon().kron(&Matrix::identity(r, z.carrier().len()));
    let down = Matrix::identity(r, x.carrier().len()).kron(yz.to_canon());
    let m = right.to_canon().mul(&down).mul(&up).mul(left.from_canon()).reduce_rows(right.carrier().exps());
    ModuleMap::new(left.carrier(), right.carrier(), m)
}

/// `Hom_B(M, B)` of a free left module, as a right module with the dual
/// basis `e_i^∨` (coordinates `i*f + j` hold the coefficient of `x^j` in
/// `ξ(e_i)`).
#[derive(Clone, Debug)]
pub struct BDual {
    pub module: BBBimodule,
    basis: Matrix,
    basis_inv: Matrix,
}

impl BDual {
    /// `ξ(m)` as an element of `B`.
    pub fn eval(&self, xi: &[RingElem], m: &[RingElem]) -> RingElem {
        let alg = self.module.alg();
        let f = alg.degree();
        let coords = self.basis_inv.mul_vec(m);
        let mut acc = alg.b().zero();
        for i in 0..coords.len() / f {
            let c = alg.from_r_coords(&coords[i * f..(i + 1) * f]);
            let x = alg.from_r_coords(&xi[i * f..(i + 1) * f]);
            acc = alg.b().add(&acc, &alg.b().mul(&c, &x));
        }
        acc
    }

    /// `B`-basis of the original module used to define the dual basis.
    pub fn primal_basis(&self) -> &Matrix {
        &self.basis
    }
}

pub fn b_dual(m: &LeftModule) -> Result<BDual> {
    let basis = m.free_basis()?;
    let basis_inv = linalg::inverse(&basis).ok_or_else(|| Error::Internal("free basis not invertible".into()))?;
    let rank = basis.cols() / m.alg().degree();
    let act = m.alg().free_action(rank);
    let module = BBBimodule::new_unchecked(m.alg(), FinModule::free(m.alg().r(), basis.cols()), act.clone(), act);
    Ok(BDual { module, basis, basis_inv })
}

/// `Hom_B(M, N)` as a submodule of `Hom_R(M, N)`: maps commuting with `x`.
pub fn hom_b(m: &LeftModule, n: &LeftModule) -> Result<(FinModule, Vec<ModuleMap>)> {
    let h = module::hom_module(m.carrier(), n.carrier())?;
    let r = m.alg().r();
    let entries = n.carrier().len() * m.carrier().len();
    let texps: Vec<u32> =
        (0..entries).map(|k| n.carrier().exps()[k / m.carrier().len()]).collect();
    let cols: Vec<Vec<RingElem>> = h
        .basis
        .iter()
        .map(|g| {
            let d = g.matrix().mul(m.left_x()).sub(&n.left_x().mul(g.matrix()));
            (0..entries).map(|k| d.get(k / m.carrier().len(), k % m.carrier().len()).clone()).collect()
        })
        .collect();
    let g = Matrix::from_columns(r, entries, &cols);
    let gens = module::kernel_gens(h.module.exps(), &g, &texps);
    let sub = module::Submodule::generated(&h.module, &gens);
    let maps = sub.inclusion_matrix().columns().iter().map(|c| h.map_from_coords(c)).collect();
    Ok((sub.module().clone(), maps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4_over_f2() -> AlgebraSpec {
        AlgebraSpec::over_prime_ring(&Ring::new(2, 1, 2).unwrap()).unwrap()
    }

    #[test]
    fn regular_bimodule_is_valid() {
        for (p, n, f) in [(2, 1, 2), (2, 2, 2), (3, 1, 1)] {
            let alg = AlgebraSpec::over_prime_ring(&Ring::new(p, n, f).unwrap()).unwrap();
            let b = alg.regular_bimodule();
            assert!(BBBimodule::new(&alg, b.carrier().clone(), b.left_x().clone(), b.right_x().clone()).is_ok());
        }
    }

    #[test]
    fn scalar_bimodule_over_r() {
        let alg = AlgebraSpec::over_prime_ring(&Ring::new(2, 3, 1).unwrap()).unwrap();
        let m = FinModule::new(alg.r(), &[3, 1]).unwrap();
        let id = Matrix::identity(alg.r(), 2);
        assert!(BBBimodule::new(&alg, m, id.clone(), id).is_ok());
    }

    #[test]
    fn modulus_violation_reported() {
        let alg = AlgebraSpec::over_prime_ring(&Ring::new(2, 1, 1).unwrap()).unwrap();
        let r = alg.r().clone();
        let res = BBBimodule::new(
            &alg,
            FinModule::free(&r, 2),
            Matrix::from_ints(&r, &[&[0, 1], &[0, 0]]),
            Matrix::from_ints(&r, &[&[0, 0], &[1, 0]]),
        );
        assert_eq!(res.unwrap_err(), Error::Bimodule(BimoduleAxiom::ModulusViolation));
    }

    #[test]
    fn tensor_ranks_for_f4() {
        let alg = f4_over_f2();
        let b = alg.regular_bimodule();
        let t = tensor_over_b(&b, &b).unwrap();
        assert_eq!(t.ambient_len(), 4);
        assert_eq!(t.carrier().len(), 2);
    }

    #[test]
    fn free_split_agrees_with_relations() {
        let alg = AlgebraSpec::over_prime_ring(&Ring::new(2, 2, 2).unwrap()).unwrap();
        let r = alg.r().clone();
        let x = alg.free_left_module(2).as_bimodule();
        let y = BBBimodule::new(
            &alg,
            FinModule::new(&r, &[2, 2, 1, 1]).unwrap(),
            alg.free_action(2).reduce_rows(&[2, 2, 1, 1]),
            alg.free_action(2).reduce_rows(&[2, 2, 1, 1]),
        )
        .unwrap();
        for fs in [vec![&x, &y], vec![&x, &x, &y], vec![&x, &x]] {
            let t = TensorB::new(&fs).unwrap();
            let lens: Vec<usize> = fs.iter().map(|m| m.carrier().len()).collect();
            let generic = relation_presentation(&r, &fs, &lens, &t.ambient_exps);
            assert_eq!(generic.exps, t.pres.exps);
            let back = t.to_canon().mul(t.from_canon()).reduce_rows(&t.pres.exps);
            assert_eq!(back, Matrix::identity(&r, t.pres.exps.len()).reduce_rows(&t.pres.exps));
            // the generic quotient map factors through the fast one
            let via = generic.to_canon.mul(t.from_canon()).mul(t.to_canon()).reduce_rows(&generic.exps);
            assert_eq!(via, generic.to_canon.reduce_rows(&generic.exps));
        }
    }

    #[test]
    fn unit_laws() {
        let alg = AlgebraSpec::over_prime_ring(&Ring::new(2, 2, 2).unwrap()).unwrap();
        let m = alg.free_left_module(2).as_bimodule();
        let (_, l) = left_unitor(&m).unwrap();
        assert!(l.is_iso());
        let (_, r) = right_unitor(&m).unwrap();
        assert!(r.is_iso());
    }

    #[test]
    fn b_dual_basics() {
        let alg = f4_over_f2();
        let m = alg.free_left_module(2);
        let d = b_dual(&m).unwrap();
        assert_eq!(d.module.carrier().len(), 4);
        let b = alg.b();
        for i in 0..2 {
            for j in 0..2 {
                let xi = d.module.carrier().basis_vec(i * 2);
                let v = m.carrier().basis_vec(j * 2);
                assert_eq!(d.eval(&xi, &v), if i == j { b.one() } else { b.zero() });
            }
        }
        let z8 = AlgebraSpec::over_prime_ring(&Ring::new(2, 3, 1).unwrap()).unwrap();
        let torsion = LeftModule::new(&z8, FinModule::new(z8.r(), &[1]).unwrap(), Matrix::identity(z8.r(), 1)).unwrap();
        assert!(matches!(b_dual(&torsion), Err(Error::NonFree(_))));
    }
}
