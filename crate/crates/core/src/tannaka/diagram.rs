//! Concrete diagram categories: objects with free fibers `B^r` and hom sets
//! given as `R`-spans of `B`-matrices.

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{FinModule, Submodule};
use crate::ring::RingElem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Object {
    pub name: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramCategory {
    alg: AlgebraSpec,
    objects: Vec<Object>,
    /// `homs[k][l]`: spanning `B`-matrices `r_l x r_k` for `A_k -> A_l`.
    homs: Vec<Vec<Vec<Matrix>>>,
}

impl DiagramCategory {
    pub fn new(alg: &AlgebraSpec) -> DiagramCategory {
        DiagramCategory { alg: alg.clone(), objects: Vec::new(), homs: Vec::new() }
    }

    pub fn add_object(&mut self, name: &str, rank: usize) -> Result<usize> {
        if self.objects.iter().any(|o| o.name == name) {
            return Err(Error::Diagram(format!("duplicate object `{name}`")));
        }
        self.objects.push(Object { name: name.to_string(), rank });
        for row in &mut self.homs {
            row.push(Vec::new());
        }
        self.homs.push(vec![Vec::new(); self.objects.len()]);
        Ok(self.objects.len() - 1)
    }

    pub fn add_hom(&mut self, src: usize, dst: usize, m: Matrix) -> Result<()> {
        let (rs, rd) = (self.rank(src), self.rank(dst));
        if m.rows() != rd || m.cols() != rs {
            return Err(Error::DimensionMismatch(format!(
                "hom {} -> {} must be {rd}x{rs}, got {}x{}",
                self.objects[src].name,
                self.objects[dst].name,
                m.rows(),
                m.cols()
            )));
        }
        if m.ring() != self.alg.b() {
            return Err(Error::RingMismatch(m.ring().to_string(), self.alg.b().to_string()));
        }
        self.homs[src][dst].push(m);
        Ok(())
    }

    /// Adds the identity on every object.
    pub fn with_identities(mut self) -> DiagramCategory {
        for k in 0..self.objects.len() {
            let id = Matrix::identity(self.alg.b(), self.rank(k));
            if !self.span(k, k).contains(&id) {
                self.homs[k][k].push(id);
            }
        }
        self
    }

    pub fn alg(&self) -> &AlgebraSpec {
        &self.alg
    }
    pub fn objects(&self) -> &[Object] {
        &self.objects
    }
    pub fn len(&self) -> usize {
        self.objects.len()
    }
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
    pub fn rank(&self, k: usize) -> usize {
        self.objects[k].rank
    }
    /// `R`-rank of the fiber.
    pub fn fiber_len(&self, k: usize) -> usize {
        self.objects[k].rank * self.alg.degree()
    }
    pub fn hom(&self, src: usize, dst: usize) -> &[Matrix] {
        &self.homs[src][dst]
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.name == name)
    }

    pub fn span(&self, src: usize, dst: usize) -> HomSpan {
        HomSpan::new(&self.alg, self.rank(src), self.rank(dst), &self.homs[src][dst])
    }

    /// Identities present and composition closed; the first violation is
    /// named.
    pub fn validate(&self) -> Result<()> {
        let spans: Vec<Vec<HomSpan>> =
            (0..self.len()).map(|k| (0..self.len()).map(|l| self.span(k, l)).collect()).collect();
        for k in 0..self.len() {
            if !spans[k][k].contains(&Matrix::identity(self.alg.b(), self.rank(k))) {
                return Err(Error::Diagram(format!("identity missing on `{}`", self.objects[k].name)));
            }
        }
        for (k, l, m) in self.triples() {
            for g in &self.homs[k][l] {
                for h in &self.homs[l][m] {
                    if !spans[k][m].contains(&h.mul(g)) {
                        return Err(Error::Diagram(format!(
                            "not closed: composite {} -> {} -> {} leaves the span",
                            self.objects[k].name, self.objects[l].name, self.objects[m].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.validate().is_ok()
    }

    fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for l in 0..n {
                for m in 0..n {
                    out.push((k, l, m));
                }
            }
        }
        out
    }

    /// Number of spanning matrices over all pairs.
    pub fn generator_count(&self) -> usize {
        self.homs.iter().flatten().map(Vec::len).sum()
    }
}

/// Smallest composition-closed family of spans containing the input and
/// identities. Input generators are kept; missing composites are appended,
/// so a closed input comes back unchanged.
pub fn hom_closure(d: &DiagramCategory) -> DiagramCategory {
    let mut out = d.clone().with_identities();
    loop {
        let mut added = false;
        for (k, l, m) in out.triples() {
            let gs = out.homs[k][l].clone();
            let hs = out.homs[l][m].clone();
            for g in &gs {
                for h in &hs {
                    let c = h.mul(g);
                    if !out.span(k, m).contains(&c) {
                        out.homs[k][m].push(c);
                        added = true;
                    }
                }
            }
        }
        if !added {
            return out;
        }
    }
}

/// The `R`-span of hom generators, viewed inside the free `R`-module of
/// flattened `B`-matrices.
#[derive(Clone, Debug)]
pub struct HomSpan {
    alg: AlgebraSpec,
    rows: usize,
    cols: usize,
    gens: Vec<Matrix>,
    sub: Submodule,
}

impl HomSpan {
    pub fn new(alg: &AlgebraSpec, src_rank: usize, dst_rank: usize, gens: &[Matrix]) -> HomSpan {
        let len = src_rank * dst_rank * alg.degree();
        let cols: Vec<Vec<RingElem>> = gens.iter().map(|g| alg.flatten_b_matrix(g)).collect();
        let ambient = FinModule::free(alg.r(), len);
        let sub = Submodule::generated(&ambient, &Matrix::from_columns(alg.r(), len, &cols));
        HomSpan { alg: alg.clone(), rows: dst_rank, cols: src_rank, gens: gens.to_vec(), sub }
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn module(&self) -> &FinModule {
        self.sub.module()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.sub.contains(&self.alg.flatten_b_matrix(m))
    }

    /// Canonical generators of the span as `B`-matrices.
    pub fn canonical_generators(&self) -> Vec<Matrix> {
        self.sub
            .inclusion_matrix()
            .columns()
            .iter()
            .map(|c| self.alg.unflatten_b_matrix(c, self.rows, self.cols))
            .collect()
    }

    /// Every element of the span, or `BudgetExceeded`.
    pub fn elements(&self, budget: u64) -> Result<Vec<Matrix>> {
        let gens = self.canonical_generators();
        let b = self.alg.b();
        let r = self.alg.r();
        let mut out = Vec::new();
        for coeffs in self.sub.module().elements(budget)? {
            let mut acc = Matrix::zeros(b, self.rows, self.cols);
            for (g, c) in gens.iter().zip(&coeffs) {
                if !r.is_zero(c) {
                    acc = acc.add(&g.scale(&b.from_int(c.coeffs()[0] as i64)));
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn cardinality(&self) -> Option<u64> {
        self.sub.module().cardinality()
    }

    /// Span membership for `R`-matrices acting on fiber coordinates.
    pub fn r_span(&self) -> Submodule {
        let r = self.alg.r();
        let f = self.alg.degree();
        let len = self.rows * f * self.cols * f;
        let cols: Vec<Vec<RingElem>> = self
            .canonical_generators()
            .iter()
            .map(|g| flatten(&self.alg.b_matrix_to_r(g)))
            .collect();
        Submodule::generated(&FinModule::free(r, len), &Matrix::from_columns(r, len, &cols))
    }
}

/// Row-major entries.
pub fn flatten(m: &Matrix) -> Vec<RingElem> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        out.extend(m.row(r));
    }
    out
}

pub fn unflatten(r: &crate::ring::Ring, v: &[RingElem], rows: usize, cols: usize) -> Matrix {
    let data: Vec<Vec<RingElem>> = (0..rows).map(|i| v[i * cols..(i + 1) * cols].to_vec()).collect();
    if rows == 0 {
        return Matrix::zeros(r, 0, cols);
    }
    Matrix::from_rows(r, data).expect("rectangular")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn closure_of_unit_powers() {
        let b = Ring::new(2, 2, 2).unwrap();
        let alg = AlgebraSpec::over_prime_ring(&b).unwrap();
        let mut d = DiagramCategory::new(&alg);
        d.add_object("A", 1).unwrap();
        let u = b.add(&b.gen(), &b.one());
        d.add_hom(0, 0, Matrix::from_rows(&b, vec![vec![u.clone()]]).unwrap()).unwrap();
        assert!(!d.is_closed());
        let c = hom_closure(&d);
        assert!(c.is_closed());
        // 1 + x generates B as an R-module together with 1
        assert_eq!(c.span(0, 0).module().exps(), &[2, 2]);
        assert_eq!(hom_closure(&c), c);
    }

    #[test]
    fn cross_morphism_adds_nothing() {
        let b = Ring::new(2, 1, 1).unwrap();
        let alg = AlgebraSpec::over_prime_ring(&b).unwrap();
        let mut d = DiagramCategory::new(&alg);
        d.add_object("A", 1).unwrap();
        d.add_object("B", 1).unwrap();
        d.add_hom(0, 1, Matrix::from_ints(&b, &[&[1]])).unwrap();
        let d = d.with_identities();
        assert_eq!(hom_closure(&d), d);
        assert!(d.is_closed());
    }
}
