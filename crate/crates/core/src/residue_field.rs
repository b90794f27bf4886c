//! Finite fields F_{p^n}, the norm to F_p, and kernels of additive
//! polynomials.
//!
//! Elements are coefficient vectors in the power basis 1, α, …, α^{n-1}
//! where α is a root of the field's modulus.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::arith::{invmod_prime, is_prime, mulmod};
use crate::error::{Error, Result};
use crate::linalg::{nullspace_mod_p, span_mod_p};

/// Above this field order only the linear-algebra path of
/// [`additive_poly_roots`] runs.
pub const DEFAULT_EXHAUSTIVE_BOUND: u128 = 1 << 20;

#[derive(Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    n: usize,
    /// Monic modulus, low degree first, length n + 1.
    modulus: Vec<u64>,
}

impl FiniteField {
    /// F_{p^n} with the lexicographically smallest monic irreducible modulus.
    pub fn new(p: u64, n: usize) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        Ok(Arc::new(FiniteField {
            p,
            n,
            modulus: smallest_irreducible(p, n),
        }))
    }

    /// F_p[X]/(modulus); `modulus` is monic, low degree first.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if m.len() < 2 || *m.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree >= 1".into()));
        }
        if !is_irreducible(&m, p) {
            return Err(Error::Reducible(p));
        }
        Ok(Arc::new(FiniteField {
            p,
            n: m.len() - 1,
            modulus: m,
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    pub fn zero(self: &Arc<Self>) -> FFElement {
        FFElement {
            field: self.clone(),
            coeffs: vec![0; self.n],
        }
    }

    pub fn one(self: &Arc<Self>) -> FFElement {
        self.from_u64(1)
    }

    /// Image of an integer in the prime field.
    pub fn from_u64(self: &Arc<Self>, c: u64) -> FFElement {
        let mut e = self.zero();
        e.coeffs[0] = c % self.p;
        e
    }

    pub fn from_i64(self: &Arc<Self>, c: i64) -> FFElement {
        self.from_u64(c.rem_euclid(self.p as i64) as u64)
    }

    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[u64]) -> FFElement {
        let mut e = self.zero();
        for (i, c) in coeffs.iter().enumerate() {
            if i < self.n {
                e.coeffs[i] = c % self.p;
            } else if *c % self.p != 0 {
                // reduce higher powers of α through the modulus
                let mut mono = vec![0u64; i + 1];
                mono[i] = c % self.p;
                let r = poly_rem(&mono, &self.modulus, self.p);
                for (j, x) in r.iter().enumerate() {
                    e.coeffs[j] = (e.coeffs[j] + x) % self.p;
                }
            }
        }
        e
    }

    /// The generator α of the power basis.
    pub fn alpha(self: &Arc<Self>) -> FFElement {
        self.from_coeffs(&[0, 1])
    }

    /// Element with base-p digit expansion `index`.
    pub fn element_at(self: &Arc<Self>, mut index: u128) -> FFElement {
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = (index % self.p as u128) as u64;
            index /= self.p as u128;
        }
        e
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FFElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    /// Some generator of the cyclic group F_q^*.
    pub fn multiplicative_generator(self: &Arc<Self>) -> FFElement {
        let q1 = self.order() - 1;
        let factors = prime_factors(q1);
        self.elements()
            .skip(1)
            .find(|g| factors.iter().all(|&r| !g.pow(q1 / r).is_one()))
            .expect("finite field has a generator")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FFElement {
    field: Arc<FiniteField>,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl fmt::Display for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, _) => format!("{c}*a"),
                (_, 1) => format!("a^{i}"),
                _ => format!("{c}*a^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FFElement {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn index(&self) -> u128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.field.p as u128 + c as u128)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// The value in F_p if this element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.field.p;
        self.zip(o, |a, b| (a + b) % p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.field.p;
        self.zip(o, |a, b| (a + p - b) % p)
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        FFElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        let p = self.field.p;
        FFElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| mulmod(c, k % p, p)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.field.p;
        let n = self.field.n;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(a, b, p)) % p;
            }
        }
        let r = poly_rem(&prod, &self.field.modulus, p);
        let mut coeffs = vec![0u64; n];
        coeffs[..r.len()].copy_from_slice(&r);
        FFElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut acc = self.field.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.field.n == 1 {
            return Some(self.field.from_u64(invmod_prime(self.coeffs[0], self.field.p)));
        }
        Some(self.pow(self.field.order() - 2))
    }

    /// a ↦ a^p.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p as u128)
    }

    /// N_{k/F_p}(a) = a^{(q-1)/(p-1)}, an element of the prime field.
    pub fn norm(&self) -> FFElement {
        let q = self.field.order();
        self.pow((q - 1) / (self.field.p as u128 - 1))
    }

    fn zip(&self, o: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert!(Arc::ptr_eq(&self.field, &o.field) || self.field == o.field);
        FFElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

/// Σ c_j X^{p^j} over a finite field.
#[derive(Clone, Debug)]
pub struct AdditivePoly {
    field: Arc<FiniteField>,
    coeffs: Vec<FFElement>,
}

impl AdditivePoly {
    /// `coeffs[j]` multiplies X^{p^j}.
    pub fn new(field: &Arc<FiniteField>, coeffs: Vec<FFElement>) -> Self {
        AdditivePoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FFElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, x: &FFElement) -> FFElement {
        let mut acc = self.field.zero();
        let mut xp = x.clone();
        for c in &self.coeffs {
            acc = acc.add(&c.mul(&xp));
            xp = xp.frobenius();
        }
        acc
    }

    /// Dense coefficient list (index = exponent).
    pub fn to_dense(&self) -> Vec<FFElement> {
        let p = self.field.p as usize;
        let deg = if self.coeffs.is_empty() {
            0
        } else {
            p.pow(self.coeffs.len() as u32 - 1)
        };
        let mut dense = vec![self.field.zero(); deg + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            dense[p.pow(j as u32)] = c.clone();
        }
        dense
    }

    /// Matrix of x ↦ f(x) over F_p: column j holds the coordinates of f(α^j).
    pub fn matrix(&self) -> Vec<Vec<u64>> {
        let n = self.field.n;
        let alpha = self.field.alpha();
        let mut basis_img = Vec::with_capacity(n);
        let mut pw = self.field.one();
        for _ in 0..n {
            basis_img.push(self.eval(&pw));
            pw = pw.mul(&alpha);
        }
        (0..n)
            .map(|r| basis_img.iter().map(|img| img.coeffs[r]).collect())
            .collect()
    }
}

impl fmt::Display for AdditivePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.field.p as usize;
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let exp = p.pow(j as u32);
            let mono = if exp == 1 { "T".to_string() } else { format!("T^{exp}") };
            let minus_one = !c.is_one() && c.neg().is_one();
            match (first, minus_one) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            if c.is_one() || minus_one {
                write!(f, "{mono}")?;
            } else if self.field.n == 1 {
                write!(f, "{c}*{mono}")?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct AdditiveRoots {
    pub kernel_dimension: usize,
    pub roots: Vec<FFElement>,
}

pub fn additive_poly_roots(f: &AdditivePoly) -> Result<AdditiveRoots> {
    additive_poly_roots_with_bound(f, DEFAULT_EXHAUSTIVE_BOUND)
}

/// Kernel of the F_p-linear map induced by `f`, computed from its matrix and,
/// when the field has at most `bound` elements, also by exhaustive evaluation.
/// The two results must coincide.
pub fn additive_poly_roots_with_bound(f: &AdditivePoly, bound: u128) -> Result<AdditiveRoots> {
    let field = &f.field;
    let p = field.p;
    let n = field.n;
    let kernel = nullspace_mod_p(&f.matrix(), n, p);
    let roots: Vec<FFElement> = span_mod_p(&kernel, n, p)
        .iter()
        .map(|v| field.from_coeffs(v))
        .collect();
    for r in &roots {
        if !f.eval(r).is_zero() {
            return Err(Error::Inconsistency(format!("kernel vector {r} is not a root")));
        }
    }
    if field.order() <= bound {
        let by_search: BTreeSet<u128> = field
            .elements()
            .filter(|x| f.eval(x).is_zero())
            .map(|x| x.index())
            .collect();
        let by_algebra: BTreeSet<u128> = roots.iter().map(|r| r.index()).collect();
        if by_search != by_algebra {
            return Err(Error::Inconsistency(format!(
                "additive root count: linear algebra {} vs search {}",
                by_algebra.len(),
                by_search.len()
            )));
        }
    }
    Ok(AdditiveRoots {
        kernel_dimension: kernel.len(),
        roots,
    })
}

// --- polynomials over F_p (low degree first) ---

fn trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|c| c % p).collect();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = invmod_prime(m[dm] % p, p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let top = r.len() - 1;
        let c = mulmod(r[top], lead_inv, p);
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p - mulmod(c, mi, p)) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    if r.is_empty() {
        r.push(0);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin-style test: gcd(X^{p^i} - X, f) = 1 for 1 <= i <= n/2.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let mut xp = vec![0, 1];
    for _ in 1..=n / 2 {
        // raise to the p-th power
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        xp = acc;
        let mut d = xp.clone();
        d.resize(d.len().max(2), 0);
        d[1] = (d[1] + p - 1) % p;
        let g = poly_gcd(f, &d, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    let mut t: u128 = 0;
    loop {
        let mut f = Vec::with_capacity(n + 1);
        let mut x = t;
        for _ in 0..n {
            f.push((x % p as u128) as u64);
            x /= p as u128;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        t += 1;
    }
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FiniteField> {
        FiniteField::new(2, 2).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(f4().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(
            FiniteField::with_modulus(2, &[1, 0, 1]).unwrap_err(),
            Error::Reducible(2)
        );
    }

    #[test]
    fn frobenius_examples() {
        let k = f4();
        assert!(k.one().frobenius().is_one());
        let w = k.alpha();
        // ω^2 = ω + 1 under X^2 + X + 1
        assert_eq!(w.frobenius(), k.from_coeffs(&[1, 1]));
        assert_eq!(w.frobenius().frobenius(), w);
        let f9 = FiniteField::new(3, 2).unwrap();
        assert_eq!(f9.from_u64(2).frobenius(), f9.from_u64(2));
    }

    #[test]
    fn norm_examples() {
        let k = f4();
        assert!(k.one().norm().is_one());
        let w = k.alpha();
        assert!(w.norm().is_one());
        // ω · ω^2 by hand
        assert!(w.mul(&w.frobenius()).is_one());
        let f9 = FiniteField::new(3, 2).unwrap();
        let g = f9.multiplicative_generator();
        assert_eq!(g.norm(), f9.from_u64(2));
        assert_eq!(f9.from_u64(0).norm(), f9.zero());
    }

    #[test]
    fn norm_is_product_of_conjugates() {
        let k = FiniteField::new(3, 3).unwrap();
        for a in k.elements() {
            let mut prod = a.clone();
            let mut c = a.clone();
            for _ in 1..3 {
                c = c.frobenius();
                prod = prod.mul(&c);
            }
            assert_eq!(prod, a.norm());
            assert!(a.norm().as_prime_field().is_some());
        }
    }

    #[test]
    fn roots_of_identity_and_field_equation() {
        let k = f4();
        let id = AdditivePoly::new(&k, vec![k.one()]);
        let r = additive_poly_roots(&id).unwrap();
        assert_eq!(r.kernel_dimension, 0);
        assert_eq!(r.roots, vec![k.zero()]);

        // X^4 - X
        let f = AdditivePoly::new(&k, vec![k.one().neg(), k.zero(), k.one()]);
        let r = additive_poly_roots(&f).unwrap();
        assert_eq!(r.kernel_dimension, 2);
        assert_eq!(r.roots.len(), 4);
    }

    #[test]
    fn roots_over_f3() {
        let k = FiniteField::new(3, 1).unwrap();
        let f = AdditivePoly::new(&k, vec![k.one(), k.one().neg()]);
        let r = additive_poly_roots(&f).unwrap();
        assert_eq!(r.kernel_dimension, 1);
        let mut idx: Vec<u128> = r.roots.iter().map(|x| x.index()).collect();
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2]);
    }

    #[test]
    fn zero_polynomial_has_full_kernel() {
        let k = FiniteField::new(5, 2).unwrap();
        let f = AdditivePoly::new(&k, vec![k.zero(), k.zero()]);
        assert_eq!(additive_poly_roots(&f).unwrap().kernel_dimension, 2);
    }

    #[test]
    fn dense_form_agrees() {
        let k = FiniteField::new(3, 2).unwrap();
        let a = k.from_coeffs(&[2, 1]);
        let f = AdditivePoly::new(&k, vec![k.one(), a.neg()]);
        let dense = f.to_dense();
        for x in k.elements() {
            let mut acc = k.zero();
            for c in dense.iter().rev() {
                acc = acc.mul(&x).add(c);
            }
            assert_eq!(acc, f.eval(&x));
        }
    }

    fn small_fields() -> Vec<Arc<FiniteField>> {
        let mut v = Vec::new();
        for &(p, n) in &[(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2), (7, 1), (7, 2)] {
            v.push(FiniteField::new(p, n).unwrap());
        }
        v
    }

    #[test]
    fn norm_multiplicative_exhaustive() {
        for k in small_fields().into_iter().filter(|k| k.order() <= 81) {
            let elems: Vec<_> = k.elements().collect();
            for a in &elems {
                for b in &elems {
                    assert_eq!(a.mul(b).norm(), a.norm().mul(&b.norm()));
                }
            }
        }
    }

    #[test]
    fn norm_criterion_for_x_minus_a_xp() {
        for k in small_fields().into_iter().filter(|k| k.order() <= 81) {
            for a in k.elements().filter(|a| !a.is_zero()) {
                let f = AdditivePoly::new(&k, vec![k.one(), a.neg()]);
                let r = additive_poly_roots(&f).unwrap();
                assert_eq!(r.roots.len() as u128, (k.p() as u128).pow(r.kernel_dimension as u32));
                assert_eq!(r.kernel_dimension >= 1, a.norm().is_one(), "field {:?} a {a}", k.modulus());
            }
        }
    }
}
