//! Input text formats.
//!
//! Statements are separated by newlines or `;`, and `#` starts a comment.
//!
//! ```text
//! ring GR(2^1,1)                      # B, with R its prime ring
//! alg R=GR(2^1,1) B=GR(2^1,2)         # explicit pair
//! object A rank 1
//! hom A B = [[1]], [[x]]              # spanning B-matrices, rank(B) x rank(A)
//!
//! coalgebra grouplike 2               # or: trivial | comatrix r | { ... }
//! coalgebra {
//!   carrier = mod(1,1)                # R-module exponents; default actions are free
//!   left_x = [[..]]; right_x = [[..]]
//!   comult 0 = (0,0)                  # Δ(e_0) = e_0 ⊗ e_0, R-basis indices
//!   comult 1 = 1*(1,1) + -1*(0,1)
//!   counit = [1, 1]                   # elements of B
//! }
//! comodule V { rank 1; coaction 0 = (0,0) }
//!
//! mf M0 over GR(2^1,1) { M = mod(1); fil 0 = [[1]]; phi 0 = [[1]] }
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{AlgebraSpec, BBBimodule, LeftModule};
use crate::coalgebra::{Coalgebra, Comodule};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::mf::{self, FilteredFModule};
use crate::module::FinModule;
use crate::ring::{Ring, RingElem};
use crate::tannaka::DiagramCategory;

pub type Terms = Vec<(RingElem, usize, usize)>;

#[derive(Clone, Debug)]
pub enum CoalgebraDecl {
    Trivial,
    Grouplike(usize),
    Comatrix(usize),
    Explicit {
        carrier: Vec<u32>,
        left_x: Option<Matrix>,
        right_x: Option<Matrix>,
        comult: BTreeMap<usize, Terms>,
        counit: Vec<RingElem>,
    },
}

impl CoalgebraDecl {
    pub fn build(&self, alg: &AlgebraSpec) -> Result<Coalgebra> {
        match self {
            CoalgebraDecl::Trivial => Ok(Coalgebra::trivial(alg)),
            CoalgebraDecl::Grouplike(g) => Ok(Coalgebra::grouplike(alg, *g)),
            CoalgebraDecl::Comatrix(r) => Ok(Coalgebra::comatrix(alg, *r)),
            CoalgebraDecl::Explicit { carrier, left_x, right_x, comult, counit } => {
                let module = FinModule::new(alg.r(), carrier)?;
                let default = || default_action(alg, &module);
                let lx = left_x.clone().map_or_else(default, Ok)?;
                let rx = right_x.clone().map_or_else(default, Ok)?;
                let c = BBBimodule::new(alg, module.clone(), lx, rx)?;
                let terms = dense_terms(comult, module.len(), "comult")?;
                Coalgebra::from_terms(c, &terms, counit)
            }
        }
    }
}

/// `x` acting freely, when the carrier is `R^{k f}`.
fn default_action(alg: &AlgebraSpec, m: &FinModule) -> Result<Matrix> {
    let f = alg.degree();
    if !m.len().is_multiple_of(f) || !m.is_projective() {
        return Err(Error::DimensionMismatch("carrier is not B^k; give the x-actions explicitly".into()));
    }
    Ok(alg.free_action(m.len() / f))
}

fn dense_terms(map: &BTreeMap<usize, Terms>, len: usize, what: &str) -> Result<Vec<Terms>> {
    if let Some(&k) = map.keys().find(|&&k| k >= len) {
        return Err(Error::DimensionMismatch(format!("{what} {k} out of range for carrier of rank {len}")));
    }
    Ok((0..len).map(|j| map.get(&j).cloned().unwrap_or_default()).collect())
}

#[derive(Clone, Debug)]
pub struct ComoduleDecl {
    pub name: String,
    pub rank: Option<usize>,
    pub carrier: Option<Vec<u32>>,
    pub left_x: Option<Matrix>,
    pub coaction: BTreeMap<usize, Terms>,
}

impl ComoduleDecl {
    pub fn build(&self, coalg: &Arc<Coalgebra>) -> Result<Comodule> {
        let alg = coalg.alg();
        let m = match (&self.rank, &self.carrier) {
            (Some(r), None) => alg.free_left_module(*r),
            (None, Some(exps)) => {
                let module = FinModule::new(alg.r(), exps)?;
                let lx = self.left_x.clone().map_or_else(|| default_action(alg, &module), Ok)?;
                LeftModule::new(alg, module, lx)?
            }
            _ => return Err(Error::DimensionMismatch(format!("comodule `{}` needs exactly one of rank/carrier", self.name))),
        };
        let terms = dense_terms(&self.coaction, m.carrier().len(), "coaction")?;
        Comodule::from_terms(coalg, m, &terms)
    }
}

#[derive(Clone, Debug)]
pub struct MfDecl {
    pub name: String,
    pub ring: Ring,
    pub m: Vec<u32>,
    pub fil: BTreeMap<i32, Matrix>,
    pub phi: BTreeMap<i32, Matrix>,
}

impl MfDecl {
    pub fn build(&self, require_fl: bool) -> Result<FilteredFModule> {
        let (Some(&lo), Some(&hi)) = (self.fil.keys().next(), self.fil.keys().last()) else {
            return Err(Error::DimensionMismatch(format!("mf `{}` has no filtration", self.name)));
        };
        let mut fil = Vec::new();
        let mut phi = Vec::new();
        for i in lo..=hi {
            match (self.fil.get(&i), self.phi.get(&i)) {
                (Some(a), Some(b)) => {
                    fil.push(a.clone());
                    phi.push(b.clone());
                }
                _ => return Err(Error::DimensionMismatch(format!("mf `{}`: step {i} needs both fil and phi", self.name))),
            }
        }
        if self.phi.keys().any(|i| !self.fil.contains_key(i)) {
            return Err(Error::DimensionMismatch(format!("mf `{}`: phi outside the filtration window", self.name)));
        }
        mf::mf_make(&self.ring, &self.m, lo, &fil, &phi, require_fl)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Document {
    pub alg: Option<AlgebraSpec>,
    pub diagram: Option<DiagramCategory>,
    pub coalgebra: Option<CoalgebraDecl>,
    pub comodules: Vec<ComoduleDecl>,
    pub mf: Vec<MfDecl>,
}

impl Document {
    pub fn alg(&self) -> Result<&AlgebraSpec> {
        self.alg.as_ref().ok_or(Error::Parse { line: 1, col: 1, msg: "missing `ring` or `alg` line".into() })
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(pos, |i| pos - i - 1) + 1;
        (line, col)
    }

    fn err_at(&self, pos: usize, msg: impl Into<String>) -> Error {
        let (line, col) = self.line_col(pos);
        Error::Parse { line, col, msg: msg.into() }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        self.err_at(self.pos, msg)
    }

    /// Re-anchors errors from literal parsers at `pos`.
    fn locate(&self, pos: usize, e: Error) -> Error {
        match e {
            Error::Parse { msg, .. } => self.err_at(pos, msg),
            other => self.err_at(pos, other.to_string()),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    /// Skips blanks, newlines, `;` and comments.
    fn skip(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
            } else if c.is_whitespace() || c == ';' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Skips blanks on the current line only.
    fn skip_inline(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' || c == '\r' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip();
        self.pos >= self.src.len()
    }

    fn word(&mut self) -> Result<&'a str> {
        self.skip_inline();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected a word"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let at = self.pos;
        let w = self.word().map_err(|_| self.err(format!("expected `{kw}`")))?;
        if w != kw {
            return Err(self.err_at(at, format!("expected `{kw}`, found `{w}`")));
        }
        Ok(())
    }

    /// An object name: anything up to blank, `=`, `{`, `;` or `,`.
    fn name(&mut self) -> Result<&'a str> {
        self.skip_inline();
        let start = self.pos;
        let mut depth = 0i32;
        while let Some(c) = self.peek() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ if depth == 0 && (c.is_whitespace() || "={};,#".contains(c)) => break,
                _ => {}
            }
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        self.skip_inline();
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{ch}`")))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_inline();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| self.err_at(start, "expected an integer"))
    }

    fn usize(&mut self) -> Result<usize> {
        let at = self.pos;
        let v = self.int()?;
        usize::try_from(v).map_err(|_| self.err_at(at, "expected a nonnegative integer"))
    }

    /// A balanced group starting with `open`, returned with delimiters.
    fn group(&mut self, open: char, close: char) -> Result<(usize, &'a str)> {
        self.skip_inline();
        let start = self.pos;
        if self.peek() != Some(open) {
            return Err(self.err(format!("expected `{open}`")));
        }
        let mut depth = 0;
        while let Some(c) = self.peek() {
            self.pos += c.len_utf8();
            if c == open {
                depth += 1;
            } else if c == close {
                depth -= 1;
                if depth == 0 {
                    return Ok((start, &self.src[start..self.pos]));
                }
            }
        }
        Err(self.err_at(start, format!("unclosed `{open}`")))
    }

    fn ring(&mut self) -> Result<Ring> {
        self.skip_inline();
        let start = self.pos;
        self.keyword("GR")?;
        let (_, _) = self.group('(', ')')?;
        Ring::parse(&self.src[start..self.pos]).map_err(|e| self.locate(start, e))
    }

    fn matrix(&mut self, ring: &Ring) -> Result<Matrix> {
        let (at, text) = self.group('[', ']')?;
        Matrix::parse(ring, text).map_err(|e| self.locate(at, e))
    }

    fn module_exps(&mut self) -> Result<Vec<u32>> {
        self.keyword("mod")?;
        let (at, text) = self.group('(', ')')?;
        let inner = text[1..text.len() - 1].trim();
        if inner.is_empty() {
            return Ok(Vec::new());
        }
        inner
            .split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|_| self.err_at(at, format!("bad exponent `{}`", s.trim()))))
            .collect()
    }

    /// Rest of the statement: up to newline, `;` or `}`.
    fn rest(&mut self) -> (usize, &'a str) {
        self.skip_inline();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == '\n' || c == ';' || c == '}' || c == '#' {
                break;
            }
            self.pos += c.len_utf8();
        }
        (start, self.src[start..self.pos].trim_end())
    }

    fn terms(&mut self, r: &Ring) -> Result<Terms> {
        let (at, text) = self.rest();
        parse_terms(r, text).map_err(|(off, msg)| self.err_at(at + off, msg))
    }

    fn elem_list(&mut self, b: &Ring) -> Result<Vec<RingElem>> {
        let (at, text) = self.group('[', ']')?;
        let inner = &text[1..text.len() - 1];
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        inner.split(',').map(|s| b.parse_elem(s).map_err(|e| self.locate(at, e))).collect()
    }

    fn block_open(&mut self) -> Result<()> {
        self.skip();
        self.expect('{')
    }

    /// True (and consumes) at a closing brace.
    fn block_close(&mut self) -> bool {
        self.skip();
        if self.peek() == Some('}') {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

/// `coef*(a,b) + (c,d) - 2*(e,f)` with integer coefficients.
fn parse_terms(r: &Ring, text: &str) -> std::result::Result<Terms, (usize, String)> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    let skip = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip(&mut i);
        let mut sign = 1i64;
        while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
            skip(&mut i);
        }
        let start = i;
        let mut coef = 1i64;
        if i < bytes.len() && bytes[i].is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            coef = text[start..i].parse().map_err(|_| (start, "bad coefficient".to_string()))?;
            skip(&mut i);
            if i >= bytes.len() || bytes[i] != b'*' {
                return Err((i, "expected `*` after coefficient".into()));
            }
            i += 1;
            skip(&mut i);
        }
        if i >= bytes.len() || bytes[i] != b'(' {
            return Err((i, "expected `(a,b)`".into()));
        }
        let close = text[i..].find(')').ok_or((i, "unclosed `(`".to_string()))? + i;
        let (a, b) = text[i + 1..close].split_once(',').ok_or((i, "expected `(a,b)`".to_string()))?;
        let a = a.trim().parse::<usize>().map_err(|_| (i, format!("bad index `{}`", a.trim())))?;
        let b = b.trim().parse::<usize>().map_err(|_| (i, format!("bad index `{}`", b.trim())))?;
        out.push((r.from_int(sign * coef), a, b));
        i = close + 1;
        skip(&mut i);
        if i >= bytes.len() {
            return Ok(out);
        }
        if bytes[i] != b'+' && bytes[i] != b'-' {
            return Err((i, "expected `+` or `-`".into()));
        }
    }
}

pub fn parse_document(src: &str) -> Result<Document> {
    let mut cur = Cursor { src, pos: 0 };
    let mut doc = Document::default();
    while !cur.at_end() {
        let at = cur.pos;
        let kw = cur.word()?;
        match kw {
            "ring" => {
                let b = cur.ring()?;
                set_alg(&cur, &mut doc, at, AlgebraSpec::over_prime_ring(&b))?;
            }
            "alg" => {
                cur.keyword("R")?;
                cur.expect('=')?;
                let r = cur.ring()?;
                cur.keyword("B")?;
                cur.expect('=')?;
                let b = cur.ring()?;
                set_alg(&cur, &mut doc, at, AlgebraSpec::new(&r, &b))?;
            }
            "object" => {
                let name = cur.name()?.to_string();
                cur.keyword("rank")?;
                let rank = cur.usize()?;
                let d = diagram(&cur, &mut doc, at)?;
                d.add_object(&name, rank).map_err(|e| cur.locate(at, e))?;
            }
            "hom" => {
                let src_name = cur.name()?.to_string();
                let dst_name = cur.name()?.to_string();
                cur.expect('=')?;
                let b = doc.alg().map_err(|e| cur.locate(at, e))?.b().clone();
                let mut mats = vec![cur.matrix(&b)?];
                loop {
                    cur.skip_inline();
                    if cur.peek() != Some(',') {
                        break;
                    }
                    cur.pos += 1;
                    mats.push(cur.matrix(&b)?);
                }
                let d = diagram(&cur, &mut doc, at)?;
                let k = d.index_of(&src_name).ok_or_else(|| cur.err_at(at, format!("unknown object `{src_name}`")))?;
                let l = d.index_of(&dst_name).ok_or_else(|| cur.err_at(at, format!("unknown object `{dst_name}`")))?;
                for m in mats {
                    d.add_hom(k, l, m).map_err(|e| cur.locate(at, e))?;
                }
            }
            "coalgebra" => {
                if doc.coalgebra.is_some() {
                    return Err(cur.err_at(at, "second coalgebra"));
                }
                let alg = doc.alg().map_err(|e| cur.locate(at, e))?.clone();
                doc.coalgebra = Some(parse_coalgebra(&mut cur, &alg)?);
            }
            "comodule" => {
                let alg = doc.alg().map_err(|e| cur.locate(at, e))?.clone();
                let name = cur.name()?.to_string();
                doc.comodules.push(parse_comodule(&mut cur, &alg, name)?);
            }
            "mf" => {
                cur.skip_inline();
                let unnamed = cur.peek() == Some('{') || cur.src[cur.pos..].starts_with("over ");
                let name = if unnamed { format!("X{}", doc.mf.len()) } else { cur.name()?.to_string() };
                cur.skip_inline();
                let ring = if cur.src[cur.pos..].starts_with("over") {
                    cur.keyword("over")?;
                    cur.ring()?
                } else {
                    doc.alg().map_err(|e| cur.locate(at, e))?.b().clone()
                };
                doc.mf.push(parse_mf(&mut cur, ring, name)?);
            }
            other => return Err(cur.err_at(at, format!("unknown statement `{other}`"))),
        }
    }
    Ok(doc)
}

fn set_alg(cur: &Cursor, doc: &mut Document, at: usize, alg: Result<AlgebraSpec>) -> Result<()> {
    if doc.alg.is_some() {
        return Err(cur.err_at(at, "ring given twice"));
    }
    doc.alg = Some(alg.map_err(|e| cur.locate(at, e))?);
    Ok(())
}

fn diagram<'d>(cur: &Cursor, doc: &'d mut Document, at: usize) -> Result<&'d mut DiagramCategory> {
    let alg = doc.alg().map_err(|e| cur.locate(at, e))?.clone();
    Ok(doc.diagram.get_or_insert_with(|| DiagramCategory::new(&alg)))
}

fn parse_coalgebra(cur: &mut Cursor, alg: &AlgebraSpec) -> Result<CoalgebraDecl> {
    cur.skip_inline();
    if cur.peek() != Some('{') && cur.peek() != Some('\n') {
        let at = cur.pos;
        return match cur.word()? {
            "trivial" => Ok(CoalgebraDecl::Trivial),
            "grouplike" => Ok(CoalgebraDecl::Grouplike(cur.usize()?)),
            "comatrix" => Ok(CoalgebraDecl::Comatrix(cur.usize()?)),
            other => Err(cur.err_at(at, format!("unknown coalgebra `{other}`"))),
        };
    }
    cur.block_open()?;
    let (r, b) = (alg.r().clone(), alg.b().clone());
    let mut carrier = None;
    let (mut left_x, mut right_x) = (None, None);
    let mut comult = BTreeMap::new();
    let mut counit = None;
    while !cur.block_close() {
        if cur.pos >= cur.src.len() {
            return Err(cur.err("unclosed coalgebra block"));
        }
        let at = cur.pos;
        match cur.word()? {
            "carrier" => {
                cur.expect('=')?;
                carrier = Some(cur.module_exps()?);
            }
            "left_x" => {
                cur.expect('=')?;
                left_x = Some(cur.matrix(&r)?);
            }
            "right_x" => {
                cur.expect('=')?;
                right_x = Some(cur.matrix(&r)?);
            }
            "comult" => {
                let j = cur.usize()?;
                cur.expect('=')?;
                comult.insert(j, cur.terms(&r)?);
            }
            "counit" => {
                cur.expect('=')?;
                counit = Some(cur.elem_list(&b)?);
            }
            other => return Err(cur.err_at(at, format!("unknown coalgebra field `{other}`"))),
        }
    }
    let carrier = carrier.ok_or_else(|| cur.err("coalgebra block needs `carrier`"))?;
    let counit = counit.ok_or_else(|| cur.err("coalgebra block needs `counit`"))?;
    Ok(CoalgebraDecl::Explicit { carrier, left_x, right_x, comult, counit })
}

fn parse_comodule(cur: &mut Cursor, alg: &AlgebraSpec, name: String) -> Result<ComoduleDecl> {
    cur.block_open()?;
    let r = alg.r().clone();
    let mut decl = ComoduleDecl { name, rank: None, carrier: None, left_x: None, coaction: BTreeMap::new() };
    while !cur.block_close() {
        if cur.pos >= cur.src.len() {
            return Err(cur.err("unclosed comodule block"));
        }
        let at = cur.pos;
        match cur.word()? {
            "rank" => decl.rank = Some(cur.usize()?),
            "carrier" => {
                cur.expect('=')?;
                decl.carrier = Some(cur.module_exps()?);
            }
            "left_x" => {
                cur.expect('=')?;
                decl.left_x = Some(cur.matrix(&r)?);
            }
            "coaction" => {
                let j = cur.usize()?;
                cur.expect('=')?;
                decl.coaction.insert(j, cur.terms(&r)?);
            }
            other => return Err(cur.err_at(at, format!("unknown comodule field `{other}`"))),
        }
    }
    Ok(decl)
}

fn parse_mf(cur: &mut Cursor, ring: Ring, name: String) -> Result<MfDecl> {
    cur.block_open()?;
    let mut decl = MfDecl { name, ring: ring.clone(), m: Vec::new(), fil: BTreeMap::new(), phi: BTreeMap::new() };
    let mut seen_m = false;
    while !cur.block_close() {
        if cur.pos >= cur.src.len() {
            return Err(cur.err("unclosed mf block"));
        }
        let at = cur.pos;
        match cur.word()? {
            "M" => {
                cur.expect('=')?;
                decl.m = cur.module_exps()?;
                seen_m = true;
            }
            "fil" => {
                let i = cur.int()? as i32;
                cur.expect('=')?;
                if decl.fil.insert(i, cur.matrix(&ring)?).is_some() {
                    return Err(cur.err_at(at, format!("fil {i} given twice")));
                }
            }
            "phi" => {
                let i = cur.int()? as i32;
                cur.expect('=')?;
                if decl.phi.insert(i, cur.matrix(&ring)?).is_some() {
                    return Err(cur.err_at(at, format!("phi {i} given twice")));
                }
            }
            other => return Err(cur.err_at(at, format!("unknown mf field `{other}`"))),
        }
    }
    if !seen_m {
        return Err(cur.err("mf block needs `M = mod(...)`"));
    }
    Ok(decl)
}

/// Parses an object list such as `M(0),M(1),M(0)+M(1)` into sums of Tate
/// twists.
pub fn parse_objects_spec(spec: &str) -> Result<Vec<(String, Vec<i32>)>> {
    let bad = |col: usize, msg: String| Error::Parse { line: 1, col: col + 1, msg };
    let mut out = Vec::new();
    let mut offset = 0;
    for item in spec.split(',') {
        let name = item.trim().to_string();
        if name.is_empty() {
            return Err(bad(offset, "empty object".into()));
        }
        let mut twists = Vec::new();
        let mut inner_off = offset;
        for term in item.split('+') {
            let t = term.trim();
            let i = t
                .strip_prefix("M(")
                .and_then(|s| s.strip_suffix(')'))
                .and_then(|s| s.trim().parse::<i32>().ok())
                .ok_or_else(|| bad(inner_off, format!("expected `M(i)`, found `{t}`")))?;
            twists.push(i);
            inner_off += term.len() + 1;
        }
        out.push((name, twists));
        offset += item.len() + 1;
    }
    Ok(out)
}

/// The direct sum of Tate objects `M(i_1) ⊕ ... ⊕ M(i_k)`.
pub fn tate_sum(w: &Ring, twists: &[i32]) -> Result<FilteredFModule> {
    let mut it = twists.iter();
    let first = it.next().ok_or_else(|| Error::DimensionMismatch("empty sum".into()))?;
    let mut acc = mf::tate(w, *first);
    for &i in it {
        acc = mf::mf_direct_sum(&acc, &mf::tate(w, i))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagram_file() {
        let src = "# two lines\nring GR(2^1,1)\nobject A rank 1\nobject B rank 1; hom A A = [[1]]\nhom B B = [[1]]\n";
        let doc = parse_document(src).unwrap();
        let d = doc.diagram.unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.is_closed());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_document("ring GR(2^1,1)\nobject A rank 1\nhom A C = [[1]]\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, col: 1, msg: "unknown object `C`".into() });
        let e = parse_document("ring GR(2^1,1)\nobject A rank 1\nhom A A = [[1,]]\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, col: 11, .. }), "{e:?}");
        let e = parse_document("ring GR(2^1,1)\n  frobnicate\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 3, .. }), "{e:?}");
        let e = parse_document("object A rank 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 1, .. }), "{e:?}");
    }

    #[test]
    fn coalgebra_and_comodules() {
        let src = "ring GR(2^1,1)\ncoalgebra {\n carrier = mod(1,1)\n comult 0 = (0,0)\n comult 1 = (1,1)\n counit = [1,1]\n}\ncomodule L0 { rank 1; coaction 0 = (0,0) }\ncomodule L1 { rank 1; coaction 0 = 1*(1,0) }\n";
        let doc = parse_document(src).unwrap();
        let alg = doc.alg().unwrap().clone();
        let c = Arc::new(doc.coalgebra.unwrap().build(&alg).unwrap());
        assert_eq!(*c, Coalgebra::grouplike(&alg, 2));
        assert_eq!(doc.comodules.len(), 2);
        for m in &doc.comodules {
            m.build(&c).unwrap();
        }
    }

    #[test]
    fn terms() {
        let r = Ring::new(3, 1, 1).unwrap();
        let t = parse_terms(&r, "(0,1) - 2*(1,0) + -(2,2)").unwrap();
        assert_eq!(t, vec![(r.one(), 0, 1), (r.from_int(-2), 1, 0), (r.from_int(-1), 2, 2)]);
        assert_eq!(parse_terms(&r, "(0,1) (1,1)").unwrap_err().0, 6);
    }

    #[test]
    fn mf_blocks() {
        let src = "mf M0 over GR(2^1,1) { M = mod(1); fil 0 = [[1]]; phi 0 = [[1]] }\nmf over GR(2^2,1) {\n M = mod(2)\n fil 0 = [[1]]\n fil 1 = [[2]]\n phi 0 = [[2]]\n phi 1 = [[2]]\n}\n";
        let doc = parse_document(src).unwrap();
        assert_eq!(doc.mf.len(), 2);
        assert!(mf::is_mf_proj(&doc.mf[0].build(true).unwrap()));
        let z4 = doc.mf[1].build(false).unwrap();
        assert_eq!((z4.lo(), z4.hi()), (0, 1));
    }

    #[test]
    fn objects_spec() {
        let s = parse_objects_spec("M(0),M(1), M(0)+M(1)").unwrap();
        assert_eq!(s[2], ("M(0)+M(1)".into(), vec![0, 1]));
        assert!(matches!(parse_objects_spec("M(0),N(1)"), Err(Error::Parse { col: 6, .. })));
    }
}
