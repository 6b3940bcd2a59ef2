//! Built-in diagrams, independent enumeration oracles and seeded property
//! checks, shared by `verify-suite` and the test targets.

use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraSpec;
use crate::coalgebra::{Coalgebra, Comodule};
use crate::error::Result;
use crate::linalg;
use crate::matrix::Matrix;
use crate::mf::{self, FilteredFModule};
use crate::module::{FinModule, ModuleMap, Submodule};
use crate::ring::{Ring, RingElem};
use crate::tannaka::{self, DiagramCategory};
use crate::text::tate_sum;

pub struct SuiteDiagram {
    pub name: String,
    pub diagram: DiagramCategory,
}

pub fn alg_for(p: u64, n: u32, f: usize) -> AlgebraSpec {
    AlgebraSpec::over_prime_ring(&Ring::new(p, n, f).expect("suite ring")).expect("prime ring")
}

/// One object of rank 1 with only the identity.
pub fn trivial_diagram(alg: &AlgebraSpec) -> DiagramCategory {
    let mut d = DiagramCategory::new(alg);
    d.add_object("A", 1).expect("fresh");
    d.with_identities()
}

/// `g` rank-1 objects with identities only.
pub fn grouplike_diagram(alg: &AlgebraSpec, g: usize) -> DiagramCategory {
    let mut d = DiagramCategory::new(alg);
    for i in 0..g {
        d.add_object(&format!("L{i}"), 1).expect("fresh");
    }
    d.with_identities()
}

/// One object of rank `r` with scalar endomorphisms only.
pub fn comatrix_diagram(alg: &AlgebraSpec, r: usize) -> DiagramCategory {
    let mut d = DiagramCategory::new(alg);
    d.add_object("V", r).expect("fresh");
    d.with_identities()
}

/// One rank-1 object whose endomorphisms are all of `B`.
pub fn full_endomorphism_diagram(alg: &AlgebraSpec) -> DiagramCategory {
    let b = alg.b();
    let mut d = DiagramCategory::new(alg);
    d.add_object("A", 1).expect("fresh");
    for j in 0..alg.degree() {
        d.add_hom(0, 0, Matrix::from_rows(b, vec![vec![b.basis_elem(j)]]).expect("1x1")).expect("shape");
    }
    d
}

/// Named sums of Tate objects, e.g. `[[0], [1], [0, 1]]`.
pub fn mf_family(w: &Ring, sums: &[&[i32]]) -> Result<Vec<(String, FilteredFModule)>> {
    sums.iter()
        .map(|twists| {
            let name = twists.iter().map(|i| format!("M({i})")).collect::<Vec<_>>().join("+");
            Ok((name, tate_sum(w, twists)?))
        })
        .collect()
}

/// `M(0), M(1), M(0) ⊕ M(1)`.
pub const MF1_FAMILY: [&[i32]; 3] = [&[0], &[1], &[0, 1]];

pub fn builtin_diagrams() -> Result<Vec<SuiteDiagram>> {
    let mut out = Vec::new();
    let mut push = |name: String, diagram: DiagramCategory| out.push(SuiteDiagram { name, diagram });
    push("trivial F_2".into(), trivial_diagram(&alg_for(2, 1, 1)));
    for p in [2, 3] {
        push(format!("grouplike g=2 F_{p}"), grouplike_diagram(&alg_for(p, 1, 1), 2));
    }
    for p in [2, 3] {
        for r in 1..=3 {
            push(format!("comatrix r={r} F_{p}"), comatrix_diagram(&alg_for(p, 1, 1), r));
        }
    }
    push("full endomorphisms GR(4,2)".into(), full_endomorphism_diagram(&alg_for(2, 2, 2)));
    for (p, n, f) in [(2, 1, 1), (2, 1, 2), (2, 2, 1)] {
        let w = Ring::new(p, n, f)?;
        push(format!("MF^1 {w}"), mf::mf_to_diagram(&mf_family(&w, &MF1_FAMILY)?)?);
    }
    Ok(out)
}

/// Standard comodule `ρ(e_j) = Σ_t c_jt ⊗ e_t` of the comatrix coalgebra.
pub fn standard_comodule(c: &Arc<Coalgebra>, r: usize) -> Result<Comodule> {
    let alg = c.alg();
    let f = alg.degree();
    let one = alg.r().one();
    let terms: Vec<Vec<(RingElem, usize, usize)>> = (0..r)
        .flat_map(|j| (0..f).map(move |k| (j, k)))
        .map(|(j, k)| (0..r).map(|t| (one.clone(), (j * r + t) * f + k, t * f)).collect())
        .collect();
    Comodule::from_terms(c, alg.free_left_module(r), &terms)
}

/// The line `B` with coaction `m ↦ g_i ⊗ m`.
pub fn grouplike_line(c: &Arc<Coalgebra>, i: usize) -> Result<Comodule> {
    let alg = c.alg();
    let f = alg.degree();
    let one = alg.r().one();
    let terms: Vec<Vec<(RingElem, usize, usize)>> = (0..f).map(|k| vec![(one.clone(), i * f + k, 0)]).collect();
    Comodule::from_terms(c, alg.free_left_module(1), &terms)
}

pub fn random_elem(rng: &mut ChaCha8Rng, r: &Ring) -> RingElem {
    let q = r.modulus() as i64;
    let coeffs: Vec<i64> = (0..r.f()).map(|_| rng.gen_range(0..q)).collect();
    r.from_coeffs(&coeffs)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: &Ring, rows: usize, cols: usize) -> Matrix {
    let data: Vec<Vec<RingElem>> = (0..rows).map(|_| (0..cols).map(|_| random_elem(rng, r)).collect()).collect();
    if rows == 0 {
        return Matrix::zeros(r, 0, cols);
    }
    Matrix::from_rows(r, data).expect("rectangular")
}

/// Up to three objects of rank at most two with a few random generators.
pub fn random_diagram(rng: &mut ChaCha8Rng, alg: &AlgebraSpec) -> DiagramCategory {
    let mut d = DiagramCategory::new(alg);
    let n = rng.gen_range(1..=3);
    for k in 0..n {
        d.add_object(&format!("A{k}"), rng.gen_range(1..=2)).expect("fresh");
    }
    for k in 0..n {
        for l in 0..n {
            for _ in 0..rng.gen_range(0..=1) {
                let m = random_matrix(rng, alg.b(), d.rank(l), d.rank(k));
                d.add_hom(k, l, m).expect("shape");
            }
        }
    }
    d.with_identities()
}

/// `A = U D V`, `U` and `V` invertible, `D` diagonal with entries
/// `p^{a_i}`, invariants nondecreasing.
pub fn smith_violation(a: &Matrix) -> Option<&'static str> {
    let r = a.ring();
    let sf = linalg::smith(a);
    if sf.u.mul(&sf.d).mul(&sf.v) != *a {
        return Some("A != U D V");
    }
    if sf.u.mul(&sf.u_inv) != Matrix::identity(r, a.rows()) || sf.v.mul(&sf.v_inv) != Matrix::identity(r, a.cols()) {
        return Some("U or V not invertible");
    }
    if sf.invariants.windows(2).any(|w| w[0] > w[1]) {
        return Some("invariants not sorted");
    }
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let want = if i == j && sf.invariants[i] < r.n() { r.p_pow(sf.invariants[i]) } else { r.zero() };
            if *sf.d.get(i, j) != want {
                return Some("D not in normal form");
            }
        }
    }
    None
}

/// All vectors of `R^len` (`|R|^len` of them).
pub fn all_vectors(r: &Ring, len: usize) -> Vec<Vec<RingElem>> {
    let elems: Vec<RingElem> = r.elements().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(e.clone());
                    w
                })
            })
            .collect();
    }
    out
}

/// Kernel and cokernel of `a` against brute force: the kernel generators
/// span exactly `{x : A x = 0}` and `|coker| = |R|^rows / |im A|`.
pub fn kernel_cokernel_violation(a: &Matrix) -> Option<&'static str> {
    let r = a.ring();
    let size = r.size().expect("small ring");
    let xs = all_vectors(r, a.cols());
    let zero_count = xs.iter().filter(|x| a.mul_vec(x).iter().all(|e| r.is_zero(e))).count() as u64;
    let k = linalg::kernel(a);
    if !a.mul(&k).is_zero() {
        return Some("kernel generator not in kernel");
    }
    let ksub = Submodule::generated(&FinModule::free(r, a.cols()), &k);
    if ksub.module().cardinality() != Some(zero_count) {
        return Some("kernel size differs from enumeration");
    }
    let image: HashSet<Vec<RingElem>> = xs.iter().map(|x| a.mul_vec(x)).collect();
    let ck = linalg::cokernel_of(a);
    let coker = FinModule::new(r, &ck.exps).expect("exps").cardinality().expect("small");
    if coker * image.len() as u64 != size.pow(a.rows() as u32) {
        return Some("cokernel size differs from enumeration");
    }
    None
}

/// Frobenius violations over the full ring: additivity, multiplicativity,
/// `σ(a) ≡ a^p mod p`, `σ^f = id`.
pub fn frobenius_violations(r: &Ring) -> u64 {
    let elems: Vec<RingElem> = r.elements().collect();
    let sig: Vec<RingElem> = elems.iter().map(|a| r.frobenius(a)).collect();
    let mut bad = 0;
    for (i, a) in elems.iter().enumerate() {
        let ap = r.pow(a, r.p());
        if r.val(&r.sub(&sig[i], &ap)) < 1 {
            bad += 1;
        }
        if r.frobenius_pow(a, r.f()) != *a {
            bad += 1;
        }
        for (j, b) in elems.iter().enumerate() {
            if r.frobenius(&r.add(a, b)) != r.add(&sig[i], &sig[j]) {
                bad += 1;
            }
            if r.frobenius(&r.mul(a, b)) != r.mul(&sig[i], &sig[j]) {
                bad += 1;
            }
        }
    }
    bad
}

/// Outcome of comparing `mf_hom` with brute force over all `W`-matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomOracle {
    pub searched: u64,
    pub morphisms: u64,
    pub solver: u64,
}

/// Enumerates every `W`-matrix `M → M'` when there are at most `cap` of
/// them; `None` above the cap.
pub fn mf_hom_oracle(x: &FilteredFModule, y: &FilteredFModule, cap: u64) -> Result<Option<HomOracle>> {
    let w = x.ring();
    let (rows, cols) = (y.module().len(), x.module().len());
    let size = w.size().expect("finite");
    let searched = match size.checked_pow((rows * cols) as u32) {
        Some(s) if s <= cap => s,
        _ => return Ok(None),
    };
    let mut morphisms = 0;
    for v in all_vectors(w, rows * cols) {
        let g = if rows == 0 {
            Matrix::zeros(w, 0, cols)
        } else {
            Matrix::from_rows(w, (0..rows).map(|i| v[i * cols..(i + 1) * cols].to_vec()).collect())?
        };
        if ModuleMap::new(x.module(), y.module(), g.clone()).is_err() {
            continue;
        }
        if g.reduce_rows(y.module().exps()) != g {
            continue;
        }
        if mf::is_mf_morphism(x, y, &g) {
            morphisms += 1;
        }
    }
    let space = mf::mf_hom(x, y)?;
    if space.maps.iter().any(|g| !mf::is_mf_morphism(x, y, g)) {
        return Ok(Some(HomOracle { searched, morphisms, solver: 0 }));
    }
    let solver = space.module.cardinality().expect("finite");
    Ok(Some(HomOracle { searched, morphisms, solver }))
}

/// Coend from the generators and from the hom closure agree.
pub fn generator_robust(d: &DiagramCategory) -> Result<bool> {
    let a = tannaka::coend_presentation(d)?;
    let b = tannaka::coend_presentation(&tannaka::hom_closure(d))?;
    Ok(a.same_as(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn oracles_on_small_cases() {
        let r = Ring::new(2, 2, 1).unwrap();
        let a = Matrix::from_ints(&r, &[&[2, 0], &[0, 1]]);
        assert_eq!(smith_violation(&a), None);
        assert_eq!(kernel_cokernel_violation(&a), None);
        assert_eq!(frobenius_violations(&Ring::new(2, 1, 2).unwrap()), 0);
    }

    #[test]
    fn mf_oracle_small() {
        let w = Ring::new(2, 1, 1).unwrap();
        let fam = mf_family(&w, &MF1_FAMILY).unwrap();
        for (_, x) in &fam {
            for (_, y) in &fam {
                let o = mf_hom_oracle(x, y, 4096).unwrap().unwrap();
                assert_eq!(o.morphisms, o.solver);
            }
        }
    }

    #[test]
    fn random_diagrams_are_robust() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let alg = alg_for(2, 1, 1);
        for _ in 0..5 {
            assert!(generator_robust(&random_diagram(&mut rng, &alg)).unwrap());
        }
    }
}
