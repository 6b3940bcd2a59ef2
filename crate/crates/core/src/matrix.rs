//! Dense matrices over a chain ring.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<RingElem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { ring: ring.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix with integer entries (embedded through `Z -> R`).
    pub fn from_ints(ring: &Ring, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows.iter().flat_map(|row| row.iter().map(|&v| ring.from_int(v))).collect();
        Matrix { ring: ring.clone(), rows: r, cols: c, data }
    }

    pub fn from_columns(ring: &Ring, rows: usize, columns: &[Vec<RingElem>]) -> Matrix {
        let mut m = Matrix::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    pub fn column_vector(ring: &Ring, v: &[RingElem]) -> Matrix {
        Matrix::from_columns(ring, v.len(), &[v.to_vec()])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<RingElem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<RingElem> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<RingElem>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.ring.is_zero(e))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let ring = &self.ring;
        let mut out = Matrix::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = ring.add(&out.data[idx], &ring.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[RingElem]) -> Vec<RingElem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let ring = &self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !ring.is_zero(a) && !ring.is_zero(x) {
                        acc = ring.add(&acc, &ring.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.add(a, b)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.sub(a, b)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &RingElem) -> Matrix {
        let data = self.data.iter().map(|a| self.ring.mul(a, s)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn map_entries(&self, mut f: impl FnMut(&RingElem) -> RingElem) -> Matrix {
        let data = self.data.iter().map(&mut f).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise Frobenius.
    pub fn frobenius(&self) -> Matrix {
        self.map_entries(|a| self.ring.frobenius(a))
    }

    /// Reduces row `i` modulo `p^{exps[i]}`.
    pub fn reduce_rows(&self, exps: &[u32]) -> Matrix {
        assert_eq!(exps.len(), self.rows);
        let mut out = self.clone();
        for (i, &e) in exps.iter().enumerate() {
            for c in 0..self.cols {
                let idx = i * self.cols + c;
                out.data[idx] = self.ring.reduce_mod_p_pow(&out.data[idx], e);
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let mut out = Matrix::zeros(&self.ring, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { ring: self.ring.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(ring: &Ring, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let cols: Vec<_> = idx.iter().map(|&c| self.column(c)).collect();
        Matrix::from_columns(&self.ring, self.rows, &cols)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(i, j, self.get(r, j).clone());
            }
        }
        out
    }

    /// `(self ⊗ other) * x` without forming the Kronecker product.
    pub fn kron_mul(&self, other: &Matrix, x: &Matrix) -> Matrix {
        assert_eq!(x.rows, self.cols * other.cols, "kron product shape");
        let ring = &self.ring;
        let other_t = other.transpose();
        let mut out = Matrix::zeros(ring, self.rows * other.rows, x.cols);
        for c in 0..x.cols {
            let mut y = Matrix::zeros(ring, self.cols, other.cols);
            for i in 0..self.cols {
                for k in 0..other.cols {
                    y.set(i, k, x.get(i * other.cols + k, c).clone());
                }
            }
            let z = self.mul(&y.mul(&other_t));
            for i in 0..self.rows {
                for k in 0..other.rows {
                    out.set(i * other.rows + k, c, z.get(i, k).clone());
                }
            }
        }
        out
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let ring = &self.ring;
        let mut out = Matrix::zeros(ring, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if ring.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, ring.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Matrix {
        let mut acc = Matrix::identity(&self.ring, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates the polynomial with coefficients `poly` (degree 0 first) at
    /// this square matrix.
    pub fn eval_poly(&self, poly: &[u64]) -> Matrix {
        let ring = &self.ring;
        let mut acc = Matrix::zeros(ring, self.rows, self.cols);
        for &c in poly.iter().rev() {
            acc = acc.mul(self);
            for i in 0..self.rows {
                let idx = i * self.cols + i;
                acc.data[idx] = ring.add(&acc.data[idx], &ring.from_int(c as i64));
            }
        }
        acc
    }

    /// Expands a matrix over `GR(p^n, f)` into a matrix over `Z/p^n` acting
    /// on coordinate vectors: each entry becomes its `f x f` multiplication
    /// block.
    pub fn restrict_scalars(&self, base: &Ring) -> Matrix {
        let f = self.ring.f();
        let mut out = Matrix::zeros(base, self.rows * f, self.cols * f);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let block = self.ring.mult_matrix_int(self.get(r, c));
                for (i, row) in block.iter().enumerate() {
                    for (j, &v) in row.iter().enumerate() {
                        out.set(r * f + i, c * f + j, base.from_int(v as i64));
                    }
                }
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += s * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, s: &RingElem) {
        let ring = self.ring.clone();
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c];
            if ring.is_zero(v) {
                continue;
            }
            let t = ring.mul(v, s);
            let idx = dst * self.cols + c;
            self.data[idx] = ring.add(&self.data[idx], &t);
        }
    }

    /// col[dst] += s * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, s: &RingElem) {
        let ring = self.ring.clone();
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src];
            if ring.is_zero(v) {
                continue;
            }
            let t = ring.mul(v, s);
            let idx = r * self.cols + dst;
            self.data[idx] = ring.add(&self.data[idx], &t);
        }
    }

    pub fn scale_row(&mut self, r: usize, s: &RingElem) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = self.ring.mul(&self.data[idx], s);
        }
    }

    pub fn scale_col(&mut self, c: usize, s: &RingElem) {
        for r in 0..self.rows {
            let idx = r * self.cols + c;
            self.data[idx] = self.ring.mul(&self.data[idx], s);
        }
    }

    /// Row-major bracketed literal, e.g. `[[1,x],[0,3*x+3]]`.
    pub fn format(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let entries: Vec<String> = (0..self.cols).map(|c| self.ring.format(self.get(r, c))).collect();
                format!("[{}]", entries.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    /// Parses a bracketed literal; `cols` disambiguates the empty matrix.
    pub fn parse(ring: &Ring, text: &str) -> Result<Matrix> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |msg: &str| Error::Parse { line: 0, col: 0, msg: format!("{msg} in matrix `{text}`") };
        let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(|| bad("missing brackets"))?;
        if inner.is_empty() {
            return Ok(Matrix::zeros(ring, 0, 0));
        }
        let mut rows = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest.strip_prefix('[').ok_or_else(|| bad("expected `[`"))?;
            let end = body.find(']').ok_or_else(|| bad("unclosed row"))?;
            let row = &body[..end];
            let entries = if row.is_empty() {
                Vec::new()
            } else {
                row.split(',').map(|e| ring.parse_elem(e)).collect::<Result<Vec<_>>>()?
            };
            rows.push(entries);
            rest = &body[end + 1..];
            rest = rest.strip_prefix(',').unwrap_or(rest);
        }
        Matrix::from_rows(ring, rows)
    }
}
