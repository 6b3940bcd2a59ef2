//! Finite chain rings `GR(p^n, f) = (Z/p^n)[x]/(h)`.
//!
//! One carrier covers `Z/p^n` (`f = 1`), the finite fields `F_{p^f}` (`n = 1`)
//! and the truncated Witt rings `W_n(F_{p^f})`. Elements are coefficient
//! vectors in the basis `1, x, ..., x^{f-1}`, each coordinate reduced into
//! `[0, p^n)`.
//!
//! The modulus `h` is chosen deterministically: for `f = 1` it is `x - 1`;
//! otherwise it is the Hensel lift (the unique monic factor of
//! `x^{p^f - 1} - 1` over `Z/p^n`) of the least irreducible monic polynomial
//! of degree `f` over `F_p`, where polynomials are ordered by the integer
//! `c_0 + c_1 p + ... + c_{f-1} p^{f-1}` of their non-leading coefficients.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest `p^n` accepted; products of two coordinates must fit in `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RingElem(SmallVec<[u64; 4]>);

impl RingElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Debug)]
struct RingInner {
    p: u64,
    n: u32,
    f: usize,
    q: u64,
    /// Monic modulus, `f + 1` coefficients from degree 0 upwards.
    h: Vec<u64>,
    p_pows: Vec<u64>,
}

/// Handle to a chain ring. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.n == other.0.n
                && self.0.f == other.0.f
                && self.0.h == other.0.h)
    }
}

impl Eq for Ring {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// --- polynomial helpers over Z/m, coefficient vectors low degree first ---

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `b` over `Z/m`.
fn poly_rem_monic(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|c| c % m).collect();
    if r.len() <= db {
        r.resize(db.max(1), 0);
        return r;
    }
    for top in (db..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (k, bk) in b.iter().enumerate() {
            let idx = top - db + k;
            r[idx] = (r[idx] + m - (c * bk) % m) % m;
        }
    }
    r.truncate(db.max(1));
    r
}

fn irreducible_over_fp(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push(c % p);
                c /= p;
            }
            cand.push(1);
            let mut r = poly_rem_monic(poly, &cand, p);
            poly_trim(&mut r);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

fn divides_monic(h: &[u64], target: &[u64], m: u64) -> bool {
    poly_rem_monic(target, h, m).iter().all(|&c| c == 0)
}

fn choose_modulus(p: u64, n: u32, f: usize) -> Result<Vec<u64>> {
    let q = p.pow(n);
    if f == 1 {
        return Ok(vec![q - 1, 1]);
    }
    let mut found = None;
    for code in 0..p.pow(f as u32) {
        let mut poly = Vec::with_capacity(f + 1);
        let mut c = code;
        for _ in 0..f {
            poly.push(c % p);
            c /= p;
        }
        poly.push(1);
        if poly[0] != 0 && irreducible_over_fp(&poly, p) {
            found = Some(poly);
            break;
        }
    }
    let mut h = found.ok_or_else(|| Error::Internal(format!("no irreducible of degree {f} over F_{p}")))?;
    // x^{p^f - 1} - 1
    let m = (p.pow(f as u32) - 1) as usize;
    let mut target = vec![0u64; m + 1];
    target[m] = 1;
    // Lift one p-adic digit at a time; each step has exactly one solution.
    let mut modulus = p;
    for _ in 1..n {
        let next = modulus * p;
        target[0] = next - 1;
        let mut lifted = None;
        for code in 0..p.pow(f as u32) {
            let mut cand = h.clone();
            let mut c = code;
            for coeff in cand.iter_mut().take(f) {
                *coeff = (*coeff + (c % p) * modulus) % next;
                c /= p;
            }
            if divides_monic(&cand, &target, next) {
                lifted = Some(cand);
                break;
            }
        }
        h = lifted.ok_or_else(|| Error::Internal("Hensel lift of the modulus failed".into()))?;
        modulus = next;
    }
    debug_assert_eq!(modulus, q);
    Ok(h)
}

impl Ring {
    /// Builds `GR(p^n, f)`.
    pub fn new(p: u64, n: u32, f: usize) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        if n == 0 || f == 0 {
            return Err(Error::InvalidRing("exponent and degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q <= MAX_MODULUS)
            .ok_or_else(|| Error::InvalidRing(format!("{p}^{n} exceeds {MAX_MODULUS}")))?;
        if p.checked_pow(f as u32).is_none_or(|s| s > 1 << 20) {
            return Err(Error::InvalidRing(format!("residue field F_{{{p}^{f}}} too large")));
        }
        let h = choose_modulus(p, n, f)?;
        let p_pows = (0..=n).map(|k| p.pow(k)).collect();
        Ok(Ring(Arc::new(RingInner { p, n, f, q, h, p_pows })))
    }

    /// `Z/p^n`.
    pub fn integers_mod(p: u64, n: u32) -> Result<Ring> {
        Ring::new(p, n, 1)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn n(&self) -> u32 {
        self.0.n
    }
    pub fn f(&self) -> usize {
        self.0.f
    }
    /// `p^n`, the characteristic.
    pub fn modulus(&self) -> u64 {
        self.0.q
    }
    pub fn defining_polynomial(&self) -> &[u64] {
        &self.0.h
    }
    pub fn p_pow_int(&self, k: u32) -> u64 {
        self.0.p_pows[k.min(self.0.n) as usize]
    }

    /// Number of elements, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        self.0.q.checked_pow(self.0.f as u32)
    }

    pub fn zero(&self) -> RingElem {
        RingElem(SmallVec::from_elem(0, self.0.f))
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    /// The class of `x`; equals `1` when `f = 1` (modulus `x - 1`).
    pub fn gen(&self) -> RingElem {
        if self.0.f == 1 {
            self.one()
        } else {
            let mut e = self.zero();
            e.0[1] = 1;
            e
        }
    }

    pub fn from_int(&self, v: i64) -> RingElem {
        let mut e = self.zero();
        e.0[0] = v.rem_euclid(self.0.q as i64) as u64;
        e
    }

    /// Builds an element from coordinates (reduced mod `p^n`, padded/truncated
    /// to length `f` after reduction modulo `h`).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> RingElem {
        let q = self.0.q;
        let raw: Vec<u64> = coeffs.iter().map(|c| c.rem_euclid(q as i64) as u64).collect();
        self.reduce_poly(raw)
    }

    fn reduce_poly(&self, mut raw: Vec<u64>) -> RingElem {
        let f = self.0.f;
        if raw.is_empty() {
            raw.push(0);
        }
        let r = if raw.len() > f { poly_rem_monic(&raw, &self.0.h, self.0.q) } else { raw };
        let mut out = self.zero();
        for (i, c) in r.into_iter().enumerate().take(f) {
            out.0[i] = c % self.0.q;
        }
        out
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let q = self.0.q;
        RingElem(a.0.iter().zip(b.0.iter()).map(|(x, y)| (x + y) % q).collect())
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let q = self.0.q;
        RingElem(a.0.iter().zip(b.0.iter()).map(|(x, y)| (x + q - y) % q).collect())
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        let q = self.0.q;
        RingElem(a.0.iter().map(|x| (q - x) % q).collect())
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let q = self.0.q;
        let f = self.0.f;
        if f == 1 {
            return RingElem(SmallVec::from_elem(a.0[0] * b.0[0] % q, 1));
        }
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, x) in a.0.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % q;
            }
        }
        self.reduce_poly(prod)
    }

    /// `a * k` for an integer scalar.
    pub fn scale_int(&self, a: &RingElem, k: u64) -> RingElem {
        let q = self.0.q;
        let k = k % q;
        RingElem(a.0.iter().map(|x| x * k % q).collect())
    }

    pub fn pow(&self, a: &RingElem, mut e: u64) -> RingElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Valuation: largest `k <= n` with `a in p^k R`; `val(0) = n`.
    pub fn val(&self, a: &RingElem) -> u32 {
        let n = self.0.n;
        let p = self.0.p;
        let mut best = n;
        for &c in a.0.iter() {
            if c == 0 {
                continue;
            }
            let mut v = 0;
            let mut c = c;
            while c % p == 0 {
                c /= p;
                v += 1;
            }
            best = best.min(v);
        }
        best
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        self.val(a) == 0
    }

    /// Order of the unit group, `(p^f - 1) p^{f(n-1)}`.
    pub fn unit_group_order(&self) -> u64 {
        let pf = self.0.p.pow(self.0.f as u32);
        (pf - 1) * pf.pow(self.0.n - 1)
    }

    pub fn inv(&self, a: &RingElem) -> Result<RingElem> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit(self.format(a)));
        }
        Ok(self.pow(a, self.unit_group_order() - 1))
    }

    /// The element `p^k`.
    pub fn p_pow(&self, k: u32) -> RingElem {
        if k >= self.0.n {
            self.zero()
        } else {
            self.from_int(self.0.p_pows[k as usize] as i64)
        }
    }

    /// Some `b` with `p^k b = a`; requires `val(a) >= k`. The result is the
    /// representative with coordinates in `[0, p^{n-k})`.
    pub fn div_p_pow(&self, a: &RingElem, k: u32) -> RingElem {
        if k == 0 {
            return a.clone();
        }
        debug_assert!(self.val(a) >= k);
        let d = self.0.p_pows[k.min(self.0.n) as usize];
        RingElem(a.0.iter().map(|c| c / d).collect())
    }

    /// Canonical representative of `a` modulo `p^e`.
    pub fn reduce_mod_p_pow(&self, a: &RingElem, e: u32) -> RingElem {
        if e >= self.0.n {
            return a.clone();
        }
        let m = self.0.p_pows[e as usize];
        RingElem(a.0.iter().map(|c| c % m).collect())
    }

    /// Teichmüller representative of `a mod p`: `a^{q^n}` with `q = p^f`.
    pub fn teichmuller(&self, a: &RingElem) -> RingElem {
        let mut t = a.clone();
        let q = self.0.p.pow(self.0.f as u32);
        for _ in 0..self.0.n {
            t = self.pow(&t, q);
        }
        t
    }

    /// Teichmüller digits `tau_0, ..., tau_{n-1}` with `a = sum p^i tau_i`.
    pub fn teichmuller_digits(&self, a: &RingElem) -> Vec<RingElem> {
        let mut digits = Vec::with_capacity(self.0.n as usize);
        let mut rest = a.clone();
        for _ in 0..self.0.n {
            let t = self.teichmuller(&rest);
            digits.push(t.clone());
            let diff = self.sub(&rest, &t);
            rest = self.div_p_pow(&diff, 1);
        }
        digits
    }

    /// Frobenius automorphism: `sum p^i tau_i |-> sum p^i tau_i^p`.
    pub fn frobenius(&self, a: &RingElem) -> RingElem {
        if self.0.f == 1 {
            return a.clone();
        }
        let mut acc = self.zero();
        for (i, t) in self.teichmuller_digits(a).iter().enumerate() {
            let term = self.scale_int(&self.pow(t, self.0.p), self.0.p_pows[i]);
            acc = self.add(&acc, &term);
        }
        acc
    }

    /// `sigma^k(a)`.
    pub fn frobenius_pow(&self, a: &RingElem, k: usize) -> RingElem {
        let mut out = a.clone();
        for _ in 0..k % self.0.f {
            out = self.frobenius(&out);
        }
        out
    }

    /// All elements in lexicographic coordinate order (least significant
    /// coordinate varies slowest).
    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        let q = self.0.q;
        let f = self.0.f;
        let total = self.size().expect("ring too large to enumerate");
        (0..total).map(move |mut code| {
            let mut e = SmallVec::from_elem(0, f);
            for i in (0..f).rev() {
                e[i] = code % q;
                code /= q;
            }
            RingElem(e)
        })
    }

    /// Matrix of multiplication by `a` on the `Z/p^n`-basis `1, x, ...`.
    pub fn mult_matrix_int(&self, a: &RingElem) -> Vec<Vec<u64>> {
        let f = self.0.f;
        let mut cols = Vec::with_capacity(f);
        let mut basis = self.one();
        for _ in 0..f {
            cols.push(self.mul(a, &basis).0.to_vec());
            basis = self.mul(&basis, &self.gen());
            if f == 1 {
                break;
            }
        }
        (0..f).map(|r| (0..f).map(|c| cols[c][r]).collect()).collect()
    }

    /// Basis element `x^j` for `j < f`.
    pub fn basis_elem(&self, j: usize) -> RingElem {
        let mut e = self.zero();
        e.0[j] = 1;
        e
    }

    pub fn format(&self, a: &RingElem) -> String {
        let mut terms = Vec::new();
        for i in (0..self.0.f).rev() {
            let c = a.0[i];
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}*x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}*x^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Parses an element literal such as `3*x+3`, `3x+3`, `x^2 - 1` or `5`.
    pub fn parse_elem(&self, text: &str) -> Result<RingElem> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse { line: 0, col: 0, msg: "empty ring element".into() });
        }
        let mut coeffs: Vec<i64> = vec![0];
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &s[start..i];
            let bad = || Error::Parse { line: 0, col: start + 1, msg: format!("bad ring term `{term}`") };
            let (coef, mono) = match term.split_once('*') {
                Some((c, m)) => (c.parse::<i64>().map_err(|_| bad())?, Some(m)),
                None if term.starts_with('x') => (1, Some(term)),
                None => match term.find('x') {
                    // `3x`, `2x^2`
                    Some(k) => (term[..k].parse::<i64>().map_err(|_| bad())?, Some(&term[k..])),
                    None => (term.parse::<i64>().map_err(|_| bad())?, None),
                },
            };
            let deg = match mono {
                None => 0,
                Some("x") => 1,
                Some(m) => m.strip_prefix("x^").and_then(|d| d.parse::<usize>().ok()).ok_or_else(bad)?,
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, 0);
            }
            coeffs[deg] += sign * coef;
        }
        if self.0.f == 1 {
            // x = 1 under the modulus x - 1
            let total: i64 = coeffs.iter().sum();
            return Ok(self.from_int(total));
        }
        Ok(self.from_coeffs(&coeffs))
    }

    /// Parses `GR(p^n, f)`.
    pub fn parse(text: &str) -> Result<Ring> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse { line: 0, col: 0, msg: format!("bad ring literal `{text}`") };
        let inner = s.strip_prefix("GR(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (pn, f) = inner.split_once(',').ok_or_else(bad)?;
        let (p, n) = pn.split_once('^').unwrap_or((pn, "1"));
        let p = p.parse().map_err(|_| bad())?;
        let n = n.parse().map_err(|_| bad())?;
        let f = f.parse().map_err(|_| bad())?;
        Ring::new(p, n, f)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GR({}^{},{})", self.0.p, self.0.n, self.0.f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(r: &Ring) -> Vec<RingElem> {
        r.elements().collect()
    }

    #[test]
    fn z8_convention() {
        let r = Ring::new(2, 3, 1).unwrap();
        assert_eq!(r.defining_polynomial(), &[7, 1]);
        assert_eq!(r.gen(), r.one());
        for a in all(&r) {
            assert_eq!(r.frobenius(&a), a);
        }
    }

    #[test]
    fn f4_modulus() {
        let r = Ring::new(2, 1, 2).unwrap();
        assert_eq!(r.defining_polynomial(), &[1, 1, 1]);
    }

    #[test]
    fn gr42_modulus_divides_x3_minus_1() {
        let r = Ring::new(2, 2, 2).unwrap();
        assert_eq!(r.defining_polynomial(), &[1, 1, 1]);
        let x = r.gen();
        assert_eq!(r.pow(&x, 3), r.one());
    }

    #[test]
    fn modulus_is_basic_irreducible() {
        for (p, n, f) in [(2, 3, 3), (3, 2, 2), (5, 2, 2), (2, 4, 2), (3, 1, 3)] {
            let r = Ring::new(p, n, f).unwrap();
            let h = r.defining_polynomial();
            let hbar: Vec<u64> = h.iter().map(|c| c % p).collect();
            assert!(irreducible_over_fp(&hbar, p));
            let x = r.gen();
            assert_eq!(r.pow(&x, p.pow(f as u32) - 1), r.one(), "GR({p}^{n},{f})");
        }
    }

    #[test]
    fn inverse_in_z8() {
        let r = Ring::new(2, 3, 1).unwrap();
        assert_eq!(r.inv(&r.from_int(3)).unwrap(), r.from_int(3));
        assert!(matches!(r.inv(&r.from_int(2)), Err(Error::NonUnit(_))));
    }

    #[test]
    fn valuation_conventions() {
        let r = Ring::new(2, 2, 2).unwrap();
        assert_eq!(r.val(&r.zero()), 2);
        let two_x = r.scale_int(&r.gen(), 2);
        assert!(!r.is_unit(&two_x));
        assert_eq!(r.val(&two_x), 1);
    }

    #[test]
    fn frobenius_examples() {
        let f4 = Ring::new(2, 1, 2).unwrap();
        assert_eq!(f4.frobenius(&f4.gen()), f4.parse_elem("x+1").unwrap());
        let gr = Ring::new(2, 2, 2).unwrap();
        let s = gr.frobenius(&gr.gen());
        assert_eq!(s, gr.parse_elem("3*x+3").unwrap());
        assert_eq!(gr.frobenius(&s), gr.gen());
    }

    #[test]
    fn literals_round_trip() {
        let gr = Ring::new(2, 2, 2).unwrap();
        for a in all(&gr) {
            assert_eq!(gr.parse_elem(&gr.format(&a)).unwrap(), a);
        }
        assert_eq!(Ring::parse("GR(2^2, 2)").unwrap(), gr);
        assert_eq!(gr.to_string(), "GR(2^2,2)");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Ring::new(4, 1, 1).is_err());
        assert!(Ring::new(2, 0, 1).is_err());
        assert!(Ring::new(2, 40, 1).is_err());
    }
}
