//! Desk-scale checks of the three recognition conditions: `ω` reflects
//! isomorphisms, the category of elements is cofiltered, and `ω` creates
//! colimits with free fiber.

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::LeftModule;
use crate::error::Result;
use crate::linalg;
use crate::matrix::Matrix;
use crate::module::{FinModule, Quotient, Submodule};
use crate::ring::RingElem;

use super::diagram::{flatten, DiagramCategory, HomSpan};

/// An element `(A_k, v)` of the category of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub object: usize,
    pub vector: Vec<RingElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `morphism` has invertible fiber matrix but no inverse in the spans.
    MissingInverse { src: usize, dst: usize, morphism: Matrix },
    EmptyCategory,
    /// No element maps to both.
    NoCone { a: Element, b: Element },
    /// `difference` kills `at.vector`, but no morphism into `at` is
    /// equalized by it.
    NotEqualized { at: Element, dst: usize, difference: Matrix },
    /// The coequalizer of `f, g : A_src -> A_dst` has free fiber but no
    /// object of the diagram realizes it.
    ColimitMissing { src: usize, dst: usize, f: Matrix, g: Matrix },
}

impl Witness {
    pub fn to_json(&self, d: &DiagramCategory) -> Value {
        let name = |k: usize| d.objects()[k].name.clone();
        let fmt = |v: &[RingElem]| v.iter().map(|x| d.alg().r().format(x)).collect::<Vec<_>>();
        match self {
            Witness::MissingInverse { src, dst, morphism } => {
                json!({"kind": "missing-inverse", "src": name(*src), "dst": name(*dst), "morphism": morphism.format()})
            }
            Witness::EmptyCategory => json!({"kind": "empty"}),
            Witness::NoCone { a, b } => json!({
                "kind": "no-cone",
                "a": {"object": name(a.object), "vector": fmt(&a.vector)},
                "b": {"object": name(b.object), "vector": fmt(&b.vector)},
            }),
            Witness::NotEqualized { at, dst, difference } => json!({
                "kind": "not-equalized",
                "at": {"object": name(at.object), "vector": fmt(&at.vector)},
                "dst": name(*dst),
                "difference": difference.format(),
            }),
            Witness::ColimitMissing { src, dst, f, g } => json!({
                "kind": "colimit-missing", "src": name(*src), "dst": name(*dst), "f": f.format(), "g": g.format(),
            }),
        }
    }

    /// Re-checks the witness against `d` from scratch.
    pub fn revalidate(&self, d: &DiagramCategory, budget: u64) -> bool {
        match self {
            Witness::MissingInverse { src, dst, morphism } => {
                d.span(*src, *dst).contains(morphism)
                    && linalg::is_invertible(&d.alg().b_matrix_to_r(morphism))
                    && find_inverse(d, *src, *dst, morphism).is_none()
            }
            Witness::EmptyCategory => d.is_empty(),
            Witness::NoCone { a, b } => {
                let Ok(el) = Elements::new(d, budget) else { return false };
                !el.has_cone(d, a, b)
            }
            Witness::NotEqualized { at, dst, difference } => {
                let r_diff = d.alg().b_matrix_to_r(difference);
                d.span(at.object, *dst).contains(difference)
                    && is_zero_vec(d, &r_diff.mul_vec(&at.vector))
                    && !difference.is_zero()
                    && matches!(equalizer_exists(d, at, difference, budget), Some(false))
            }
            Witness::ColimitMissing { src, dst, f, g } => {
                d.span(*src, *dst).contains(f)
                    && d.span(*src, *dst).contains(g)
                    && matches!(coequalizer_probe(d, *src, *dst, f, g, budget), Probe::Missing)
            }
        }
    }
}

fn is_zero_vec(d: &DiagramCategory, v: &[RingElem]) -> bool {
    v.iter().all(|x| d.alg().r().is_zero(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Refuted(Witness),
    Inconclusive(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Refuted(_) => "refuted",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }

    pub fn to_json(&self, d: &DiagramCategory) -> Value {
        match self {
            Verdict::Verified => json!({"verdict": "verified"}),
            Verdict::Refuted(w) => json!({"verdict": "refuted", "witness": w.to_json(d)}),
            Verdict::Inconclusive(why) => json!({"verdict": "inconclusive", "reason": why}),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RecognitionReport {
    pub reflects_isos: Verdict,
    pub cofiltered: Verdict,
    pub rigid_colimits: Verdict,
    /// Number of coequalizer probes with free fiber colimit.
    pub probes: usize,
}

#[derive(Serialize)]
struct ReportJson {
    reflects_isos: Value,
    cofiltered: Value,
    rigid_colimits: Value,
    probes: usize,
}

impl RecognitionReport {
    pub fn to_json(&self, d: &DiagramCategory) -> Value {
        serde_json::to_value(ReportJson {
            reflects_isos: self.reflects_isos.to_json(d),
            cofiltered: self.cofiltered.to_json(d),
            rigid_colimits: self.rigid_colimits.to_json(d),
            probes: self.probes,
        })
        .expect("serializable")
    }
}

/// Runs all three checks. `d` must be closed.
pub fn recognition_check(d: &DiagramCategory, budget: u64) -> Result<RecognitionReport> {
    d.validate()?;
    let reflects_isos = check_reflects_isos(d, budget);
    let cofiltered = check_cofiltered(d, budget);
    let (rigid_colimits, probes) = check_rigid_colimits(d, budget);
    Ok(RecognitionReport { reflects_isos, cofiltered, rigid_colimits, probes })
}

/// Some `G` in `span(dst, src)` with `G F = I` and `F G = I`.
pub fn find_inverse(d: &DiagramCategory, src: usize, dst: usize, f: &Matrix) -> Option<Matrix> {
    let alg = d.alg();
    let r = alg.r();
    let rf = alg.b_matrix_to_r(f);
    let gens = d.span(dst, src).canonical_generators();
    let n = rf.rows();
    let cols: Vec<Vec<RingElem>> = gens
        .iter()
        .map(|g| {
            let rg = alg.b_matrix_to_r(g);
            let mut c = flatten(&rg.mul(&rf));
            c.extend(flatten(&rf.mul(&rg)));
            c
        })
        .collect();
    let mut rhs = flatten(&Matrix::identity(r, rf.cols()));
    rhs.extend(flatten(&Matrix::identity(r, n)));
    let sys = Matrix::from_columns(r, rhs.len(), &cols);
    let c = linalg::solve(&sys, &rhs).ok()??;
    let b = alg.b();
    let mut acc = Matrix::zeros(b, f.cols(), f.rows());
    for (g, x) in gens.iter().zip(&c) {
        acc = acc.add(&g.scale(&b.from_int(x.coeffs()[0] as i64)));
    }
    Some(acc)
}

/// Condition i): every span element with invertible fiber matrix has an
/// inverse in the diagram.
pub fn check_reflects_isos(d: &DiagramCategory, budget: u64) -> Verdict {
    let mut exhaustive = true;
    for k in 0..d.len() {
        for l in 0..d.len() {
            if d.rank(k) != d.rank(l) {
                continue;
            }
            let span = d.span(k, l);
            let sweep = match span.elements(budget) {
                Ok(e) => e,
                Err(_) => {
                    exhaustive = false;
                    span.canonical_generators()
                }
            };
            for f in sweep {
                if linalg::is_invertible(&d.alg().b_matrix_to_r(&f)) && find_inverse(d, k, l, &f).is_none() {
                    return Verdict::Refuted(Witness::MissingInverse { src: k, dst: l, morphism: f });
                }
            }
        }
    }
    if exhaustive {
        Verdict::Verified
    } else {
        Verdict::Inconclusive(format!("hom spans exceed the budget of {budget}; only generators were swept"))
    }
}

/// Enumerated elements of every fiber.
struct Elements {
    per_object: Vec<Vec<Vec<RingElem>>>,
}

impl Elements {
    fn new(d: &DiagramCategory, budget: u64) -> Result<Elements> {
        let mut per_object = Vec::new();
        let mut total = 0u64;
        for k in 0..d.len() {
            let fiber = FinModule::free(d.alg().r(), d.fiber_len(k));
            let els: Vec<Vec<RingElem>> = fiber.elements(budget)?.collect();
            total += els.len() as u64;
            if total > budget {
                return Err(crate::Error::BudgetExceeded { budget, needed: total.to_string() });
            }
            per_object.push(els);
        }
        Ok(Elements { per_object })
    }

    /// Whether some `(A_m, u)` maps to both `a` and `b`.
    fn has_cone(&self, d: &DiagramCategory, a: &Element, b: &Element) -> bool {
        for m in 0..d.len() {
            for u in &self.per_object[m] {
                if reachable(d, m, u, a.object).contains(&a.vector) && reachable(d, m, u, b.object).contains(&b.vector) {
                    return true;
                }
            }
        }
        false
    }
}

/// `{F u : F ∈ span(m, k)}` as a submodule of the fiber of `A_k`.
fn reachable(d: &DiagramCategory, m: usize, u: &[RingElem], k: usize) -> Submodule {
    let alg = d.alg();
    let n = d.fiber_len(k);
    let cols: Vec<Vec<RingElem>> =
        d.span(m, k).canonical_generators().iter().map(|g| alg.b_matrix_to_r(g).mul_vec(u)).collect();
    Submodule::generated(&FinModule::free(alg.r(), n), &Matrix::from_columns(alg.r(), n, &cols))
}

/// Condition ii): nonempty, binary cones, and equalizers, by exhaustive
/// search over the category of elements.
pub fn check_cofiltered(d: &DiagramCategory, budget: u64) -> Verdict {
    if d.is_empty() {
        return Verdict::Refuted(Witness::EmptyCategory);
    }
    let els = match Elements::new(d, budget) {
        Ok(e) => e,
        Err(_) => return Verdict::Inconclusive(format!("fibers exceed the budget of {budget}")),
    };
    let index: Vec<(usize, usize)> =
        (0..d.len()).flat_map(|k| (0..els.per_object[k].len()).map(move |i| (k, i))).collect();
    let total = index.len();
    if (total as u64).saturating_mul(total as u64) > budget.saturating_mul(16) {
        return Verdict::Inconclusive(format!("{total} elements: pair table exceeds the budget"));
    }
    let offset: Vec<usize> = {
        let mut acc = 0;
        els.per_object
            .iter()
            .map(|v| {
                let o = acc;
                acc += v.len();
                o
            })
            .collect()
    };
    let mut covered = vec![false; total * total];
    for m in 0..d.len() {
        for u in &els.per_object[m] {
            let mut reach = Vec::new();
            for k in 0..d.len() {
                let sub = reachable(d, m, u, k);
                for (i, v) in els.per_object[k].iter().enumerate() {
                    if sub.contains(v) {
                        reach.push(offset[k] + i);
                    }
                }
            }
            for &i in &reach {
                for &j in &reach {
                    covered[i * total + j] = true;
                }
            }
        }
    }
    if let Some(pos) = covered.iter().position(|c| !c) {
        let (ka, ia) = index[pos / total];
        let (kb, ib) = index[pos % total];
        return Verdict::Refuted(Witness::NoCone {
            a: Element { object: ka, vector: els.per_object[ka][ia].clone() },
            b: Element { object: kb, vector: els.per_object[kb][ib].clone() },
        });
    }
    let mut spent = 0u64;
    for k in 0..d.len() {
        for l in 0..d.len() {
            let Ok(diffs) = d.span(k, l).elements(budget) else {
                return Verdict::Inconclusive(format!("hom span {k} -> {l} exceeds the budget"));
            };
            for diff in diffs.iter().filter(|m| !m.is_zero()) {
                let rd = d.alg().b_matrix_to_r(diff);
                for v in &els.per_object[k] {
                    if is_zero_vec(d, v) || !is_zero_vec(d, &rd.mul_vec(v)) {
                        continue;
                    }
                    spent += 1;
                    if spent > budget {
                        return Verdict::Inconclusive("equalizer search exceeds the budget".into());
                    }
                    let at = Element { object: k, vector: v.clone() };
                    match equalizer_exists(d, &at, diff, budget) {
                        Some(true) => {}
                        Some(false) => {
                            return Verdict::Refuted(Witness::NotEqualized { at, dst: l, difference: diff.clone() })
                        }
                        None => return Verdict::Inconclusive("equalizer search exceeds the budget".into()),
                    }
                }
            }
        }
    }
    Verdict::Verified
}

/// Whether some `H : (A_m, u) -> at` satisfies `difference · H = 0`.
fn equalizer_exists(d: &DiagramCategory, at: &Element, difference: &Matrix, budget: u64) -> Option<bool> {
    let alg = d.alg();
    let rd = alg.b_matrix_to_r(difference);
    for m in 0..d.len() {
        let hs = d.span(m, at.object).elements(budget).ok()?;
        for h in hs {
            if !difference.mul(&h).is_zero() {
                continue;
            }
            let rh = alg.b_matrix_to_r(&h);
            if linalg::solve(&rh, &at.vector).ok()?.is_some() {
                debug_assert!(rd.mul(&rh).is_zero());
                return Some(true);
            }
        }
    }
    Some(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Probe {
    /// Fiber colimit is not free; the probe does not apply.
    NotRigid,
    Realized,
    Missing,
    OverBudget,
}

/// Coequalizer of `f, g : A_src -> A_dst`: if its fiber is free, look for
/// `Q : A_dst -> A_m` with `Q f = Q g` inducing an isomorphism on fibers
/// and universal among all such maps in the diagram.
fn coequalizer_probe(d: &DiagramCategory, src: usize, dst: usize, f: &Matrix, g: &Matrix, budget: u64) -> Probe {
    let alg = d.alg();
    let r = alg.r();
    let diff = alg.b_matrix_to_r(&f.sub(g));
    let fiber = FinModule::free(r, d.fiber_len(dst));
    let quot = Quotient::new(&fiber, &diff);
    let act = quot.to_canon().mul(&alg.free_action(d.rank(dst))).mul(quot.from_canon());
    let Ok(qmod) = LeftModule::new(alg, quot.module().clone(), act) else { return Probe::NotRigid };
    if !qmod.is_free() {
        return Probe::NotRigid;
    }
    let image = Submodule::generated(&fiber, &diff);
    let rank = quot.module().len() / alg.degree();
    for m in (0..d.len()).filter(|&m| d.rank(m) == rank) {
        let Ok(qs) = d.span(dst, m).elements(budget) else { return Probe::OverBudget };
        for q in qs {
            if !q.mul(f).sub(&q.mul(g)).is_zero() {
                continue;
            }
            let rq = alg.b_matrix_to_r(&q);
            let ker = Submodule::generated(&fiber, &linalg::kernel(&rq));
            if !ker.same_as(&image) || !linalg::is_invertible(&rq.mul(quot.from_canon())) {
                continue;
            }
            if is_universal(d, src, dst, m, f, g, &q) {
                return Probe::Realized;
            }
        }
    }
    Probe::Missing
}

/// Every `T : A_dst -> A_j` with `T f = T g` factors as `S Q` with `S` in
/// the span of `A_m -> A_j`.
fn is_universal(d: &DiagramCategory, src: usize, dst: usize, m: usize, f: &Matrix, g: &Matrix, q: &Matrix) -> bool {
    let alg = d.alg();
    let r = alg.r();
    let rdiff = alg.b_matrix_to_r(&f.sub(g));
    let rq = alg.b_matrix_to_r(q);
    let _ = src;
    for j in 0..d.len() {
        let tspan = d.span(dst, j).r_span();
        let tgens = tspan.inclusion_matrix().columns();
        let rows = d.fiber_len(j);
        let cols = d.fiber_len(dst);
        // T in the span with T · diff = 0
        let cons: Vec<Vec<RingElem>> = tgens
            .iter()
            .map(|t| flatten(&super::diagram::unflatten(r, t, rows, cols).mul(&rdiff)))
            .collect();
        let nrows = rows * rdiff.cols();
        let kern = crate::module::kernel_gens(tspan.module().exps(), &Matrix::from_columns(r, nrows, &cons), &vec![r.n(); nrows]);
        let sgens: Vec<Matrix> = d.span(m, j).canonical_generators();
        let sys_cols: Vec<Vec<RingElem>> = sgens.iter().map(|s| flatten(&alg.b_matrix_to_r(s).mul(&rq))).collect();
        let sys = Matrix::from_columns(r, rows * cols, &sys_cols);
        for kc in kern.columns() {
            let mut t = vec![r.zero(); rows * cols];
            for (gen, c) in tgens.iter().zip(&kc) {
                for (ti, gi) in t.iter_mut().zip(gen) {
                    *ti = r.add(ti, &r.mul(gi, c));
                }
            }
            if !matches!(linalg::solve(&sys, &t), Ok(Some(_))) {
                return false;
            }
        }
    }
    true
}

/// Condition iii) on auto-generated coequalizer probes: every pair of
/// canonical generators `(F, G)` and every `(F, 0)`.
pub fn check_rigid_colimits(d: &DiagramCategory, budget: u64) -> (Verdict, usize) {
    let mut probes = 0;
    let mut over_budget = false;
    for k in 0..d.len() {
        for l in 0..d.len() {
            let span: HomSpan = d.span(k, l);
            let mut gens = span.canonical_generators();
            gens.push(Matrix::zeros(d.alg().b(), d.rank(l), d.rank(k)));
            for i in 0..gens.len() {
                for j in i + 1..gens.len() {
                    match coequalizer_probe(d, k, l, &gens[i], &gens[j], budget) {
                        Probe::NotRigid => {}
                        Probe::Realized => probes += 1,
                        Probe::OverBudget => over_budget = true,
                        Probe::Missing => {
                            return (
                                Verdict::Refuted(Witness::ColimitMissing {
                                    src: k,
                                    dst: l,
                                    f: gens[i].clone(),
                                    g: gens[j].clone(),
                                }),
                                probes + 1,
                            )
                        }
                    }
                }
            }
        }
    }
    if over_budget {
        (Verdict::Inconclusive(format!("some probes exceed the budget of {budget}")), probes)
    } else {
        (Verdict::Verified, probes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;
    use crate::ring::Ring;

    fn one_object_full(p: u64, n: u32, f: usize) -> DiagramCategory {
        let b = Ring::new(p, n, f).unwrap();
        let alg = AlgebraSpec::over_prime_ring(&b).unwrap();
        let mut d = DiagramCategory::new(&alg);
        d.add_object("A", 1).unwrap();
        for j in 0..f {
            d.add_hom(0, 0, Matrix::from_rows(&b, vec![vec![b.basis_elem(j)]]).unwrap()).unwrap();
        }
        d
    }

    #[test]
    fn trivial_diagram_verified() {
        for (p, n, f) in [(2, 1, 1), (2, 2, 1), (2, 2, 2)] {
            let d = one_object_full(p, n, f);
            let rep = recognition_check(&d, 1 << 16).unwrap();
            assert_eq!(rep.reflects_isos, Verdict::Verified);
            assert_eq!(rep.cofiltered, Verdict::Verified);
        }
    }

    #[test]
    fn grouplike_not_cofiltered() {
        let b = Ring::new(2, 1, 1).unwrap();
        let alg = AlgebraSpec::over_prime_ring(&b).unwrap();
        let mut d = DiagramCategory::new(&alg);
        d.add_object("A", 1).unwrap();
        d.add_object("B", 1).unwrap();
        let d = d.with_identities();
        let v = check_cofiltered(&d, 1 << 12);
        let Verdict::Refuted(w) = v else { panic!("expected refutation, got {v:?}") };
        assert!(w.revalidate(&d, 1 << 12));
    }

    #[test]
    fn one_way_map_breaks_iso_reflection() {
        let b = Ring::new(2, 1, 1).unwrap();
        let alg = AlgebraSpec::over_prime_ring(&b).unwrap();
        let mut d = DiagramCategory::new(&alg);
        d.add_object("A", 1).unwrap();
        d.add_object("B", 1).unwrap();
        d.add_hom(0, 1, Matrix::from_ints(&b, &[&[1]])).unwrap();
        let d = d.with_identities();
        let v = check_reflects_isos(&d, 1 << 12);
        let Verdict::Refuted(w) = v else { panic!("expected refutation") };
        assert!(w.revalidate(&d, 1 << 12));
    }
}
