//! Truncated power series in one variable (T) and two variables (X, Y) over a
//! [`Ring`]. A series of degree `D` knows every coefficient of total degree
//! at most `D`.

use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq)]
pub struct Series<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> Series<E> {
    pub fn from_coeffs(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty());
        Series { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &E {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn map<T>(&self, f: impl Fn(&E) -> T) -> Series<T> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn truncate(&self, d: usize) -> Self {
        Series {
            coeffs: self.coeffs[..=d.min(self.degree())].to_vec(),
        }
    }
}

/// Operations on univariate series over a ring context.
pub struct Uni<'r, R: Ring>(pub &'r R);

impl<'r, R: Ring> Uni<'r, R> {
    pub fn zero(&self, d: usize) -> Series<R::Elem> {
        Series {
            coeffs: vec![self.0.zero(); d + 1],
        }
    }

    pub fn constant(&self, c: R::Elem, d: usize) -> Series<R::Elem> {
        let mut s = self.zero(d);
        s.coeffs[0] = c;
        s
    }

    /// The series T.
    pub fn var(&self, d: usize) -> Series<R::Elem> {
        let mut s = self.zero(d);
        if d >= 1 {
            s.coeffs[1] = self.0.one();
        }
        s
    }

    pub fn add(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Series<R::Elem> {
        self.zip(a, b, |x, y| self.0.add(x, y))
    }

    pub fn sub(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Series<R::Elem> {
        self.zip(a, b, |x, y| self.0.sub(x, y))
    }

    pub fn neg(&self, a: &Series<R::Elem>) -> Series<R::Elem> {
        Series {
            coeffs: a.coeffs.iter().map(|x| self.0.neg(x)).collect(),
        }
    }

    pub fn scale(&self, a: &Series<R::Elem>, c: &R::Elem) -> Series<R::Elem> {
        Series {
            coeffs: a.coeffs.iter().map(|x| self.0.mul(x, c)).collect(),
        }
    }

    pub fn scale_int(&self, a: &Series<R::Elem>, n: i64) -> Series<R::Elem> {
        Series {
            coeffs: a.coeffs.iter().map(|x| self.0.mul_int(x, n)).collect(),
        }
    }

    /// Multiply by T.
    pub fn shift(&self, a: &Series<R::Elem>) -> Series<R::Elem> {
        let d = a.degree();
        let mut coeffs = Vec::with_capacity(d + 1);
        coeffs.push(self.0.zero());
        coeffs.extend_from_slice(&a.coeffs[..d]);
        Series { coeffs }
    }

    pub fn mul(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Series<R::Elem> {
        let d = a.degree().min(b.degree());
        let mut out = vec![self.0.zero(); d + 1];
        let bnz: Vec<usize> = (0..=d).filter(|&j| !self.0.is_zero(&b.coeffs[j])).collect();
        for i in 0..=d {
            if self.0.is_zero(&a.coeffs[i]) {
                continue;
            }
            for &j in &bnz {
                if i + j > d {
                    break;
                }
                let t = self.0.mul(&a.coeffs[i], &b.coeffs[j]);
                out[i + j] = self.0.add(&out[i + j], &t);
            }
        }
        Series { coeffs: out }
    }

    /// 1/a for a series with constant term 1.
    pub fn inv_one(&self, a: &Series<R::Elem>) -> Series<R::Elem> {
        debug_assert!(self.0.is_zero(&self.0.sub(&a.coeffs[0], &self.0.one())));
        let d = a.degree();
        let mut b = vec![self.0.zero(); d + 1];
        b[0] = self.0.one();
        for n in 1..=d {
            let mut s = self.0.zero();
            for k in 1..=n {
                if !self.0.is_zero(&a.coeffs[k]) {
                    s = self.0.add(&s, &self.0.mul(&a.coeffs[k], &b[n - k]));
                }
            }
            b[n] = self.0.neg(&s);
        }
        Series { coeffs: b }
    }

    /// outer(inner) for inner with zero constant term.
    pub fn compose(&self, outer: &Series<R::Elem>, inner: &Series<R::Elem>) -> Series<R::Elem> {
        let d = outer.degree().min(inner.degree());
        debug_assert!(self.0.is_zero(&inner.coeffs[0]));
        let inner = inner.truncate(d);
        let mut acc = self.constant(outer.coeffs[d].clone(), d);
        for k in (0..d).rev() {
            acc = self.mul(&acc, &inner);
            acc.coeffs[0] = self.0.add(&acc.coeffs[0], &outer.coeffs[k]);
        }
        acc
    }

    /// The derivative, of degree one less.
    pub fn derivative(&self, a: &Series<R::Elem>) -> Series<R::Elem> {
        let d = a.degree();
        if d == 0 {
            return self.zero(0);
        }
        Series {
            coeffs: (1..=d).map(|i| self.0.mul_int(&a.coeffs[i], i as i64)).collect(),
        }
    }

    pub fn is_zero(&self, a: &Series<R::Elem>) -> bool {
        a.coeffs.iter().all(|c| self.0.is_zero(c))
    }

    fn zip(
        &self,
        a: &Series<R::Elem>,
        b: &Series<R::Elem>,
        f: impl Fn(&R::Elem, &R::Elem) -> R::Elem,
    ) -> Series<R::Elem> {
        let d = a.degree().min(b.degree());
        Series {
            coeffs: (0..=d).map(|i| f(&a.coeffs[i], &b.coeffs[i])).collect(),
        }
    }
}

/// Bivariate truncated series in X, Y, stored by total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Series2<E> {
    degree: usize,
    coeffs: Vec<E>,
}

#[inline]
fn idx2(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

impl<E: Clone> Series2<E> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of X^i Y^j.
    pub fn coeff(&self, i: usize, j: usize) -> &E {
        &self.coeffs[idx2(i, j)]
    }

    /// All (i, j, coefficient) with i + j <= degree, by total degree then j.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        (0..=self.degree).flat_map(move |d| (0..=d).map(move |j| (d - j, j, &self.coeffs[idx2(d - j, j)])))
    }

    pub fn map<T: Clone>(&self, f: impl Fn(&E) -> T) -> Series2<T> {
        Series2 {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Swap X and Y.
    pub fn transpose(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (i, j, c) in self.iter() {
            coeffs[idx2(j, i)] = c.clone();
        }
        Series2 {
            degree: self.degree,
            coeffs,
        }
    }
}

pub struct Bi<'r, R: Ring>(pub &'r R);

impl<'r, R: Ring> Bi<'r, R> {
    pub fn zero(&self, d: usize) -> Series2<R::Elem> {
        Series2 {
            degree: d,
            coeffs: vec![self.0.zero(); idx2(0, d) + 1],
        }
    }

    pub fn constant(&self, c: R::Elem, d: usize) -> Series2<R::Elem> {
        let mut s = self.zero(d);
        s.coeffs[0] = c;
        s
    }

    pub fn set(&self, s: &mut Series2<R::Elem>, i: usize, j: usize, c: R::Elem) {
        s.coeffs[idx2(i, j)] = c;
    }

    /// Embed a univariate series in X (`in_x`) or in Y.
    pub fn from_uni(&self, a: &Series<R::Elem>, in_x: bool, d: usize) -> Series2<R::Elem> {
        let mut s = self.zero(d);
        for (k, c) in a.coeffs().iter().enumerate().take(d + 1) {
            let (i, j) = if in_x { (k, 0) } else { (0, k) };
            s.coeffs[idx2(i, j)] = c.clone();
        }
        s
    }

    pub fn add(&self, a: &Series2<R::Elem>, b: &Series2<R::Elem>) -> Series2<R::Elem> {
        self.zip(a, b, |x, y| self.0.add(x, y))
    }

    pub fn sub(&self, a: &Series2<R::Elem>, b: &Series2<R::Elem>) -> Series2<R::Elem> {
        self.zip(a, b, |x, y| self.0.sub(x, y))
    }

    pub fn neg(&self, a: &Series2<R::Elem>) -> Series2<R::Elem> {
        a.map(|x| self.0.neg(x))
    }

    pub fn scale(&self, a: &Series2<R::Elem>, c: &R::Elem) -> Series2<R::Elem> {
        a.map(|x| self.0.mul(x, c))
    }

    pub fn scale_int(&self, a: &Series2<R::Elem>, n: i64) -> Series2<R::Elem> {
        a.map(|x| self.0.mul_int(x, n))
    }

    pub fn mul(&self, a: &Series2<R::Elem>, b: &Series2<R::Elem>) -> Series2<R::Elem> {
        let d = a.degree.min(b.degree);
        let mut out = self.zero(d);
        let bnz: Vec<(usize, usize, &R::Elem)> = b
            .iter()
            .filter(|(i, j, c)| i + j <= d && !self.0.is_zero(c))
            .collect();
        for (i, j, x) in a.iter() {
            if i + j > d || self.0.is_zero(x) {
                continue;
            }
            for &(k, l, y) in &bnz {
                if i + j + k + l > d {
                    break;
                }
                let t = self.0.mul(x, y);
                let o = idx2(i + k, j + l);
                out.coeffs[o] = self.0.add(&out.coeffs[o], &t);
            }
        }
        out
    }

    /// 1/(1 + u) for u with zero constant term, given a = 1 + u.
    pub fn inv_one(&self, a: &Series2<R::Elem>) -> Series2<R::Elem> {
        let d = a.degree;
        let mut u = a.clone();
        u.coeffs[0] = self.0.zero();
        // 1 - u + u^2 - ... by Horner
        let one = self.constant(self.0.one(), d);
        let mut acc = one.clone();
        for _ in 0..d {
            acc = self.sub(&one, &self.mul(&u, &acc));
        }
        acc
    }

    /// outer(inner) for univariate `outer` and bivariate `inner` with zero
    /// constant term.
    pub fn compose_uni(&self, outer: &Series<R::Elem>, inner: &Series2<R::Elem>) -> Series2<R::Elem> {
        let d = outer.degree().min(inner.degree);
        let mut acc = self.constant(outer.coeff(d).clone(), inner.degree.min(d));
        for k in (0..d).rev() {
            acc = self.mul(&acc, inner);
            acc.coeffs[0] = self.0.add(&acc.coeffs[0], outer.coeff(k));
        }
        acc
    }

    /// F(A(T), B(T)) for univariate A, B without constant terms.
    pub fn substitute(
        &self,
        f: &Series2<R::Elem>,
        a: &Series<R::Elem>,
        b: &Series<R::Elem>,
    ) -> Series<R::Elem> {
        let uni = Uni(self.0);
        let d = f.degree.min(a.degree()).min(b.degree());
        let a = a.truncate(d);
        let b = b.truncate(d);
        // Horner in A over the columns Σ_j c_ij B^j
        let mut bpow = Vec::with_capacity(d + 1);
        bpow.push(uni.constant(self.0.one(), d));
        for k in 1..=d {
            let next = uni.mul(&bpow[k - 1], &b);
            bpow.push(next);
        }
        let column = |i: usize| {
            let mut c = uni.zero(d);
            for (j, bp) in bpow.iter().enumerate().take(d - i + 1) {
                let coef = f.coeff(i, j);
                if !self.0.is_zero(coef) {
                    c = uni.add(&c, &uni.scale(bp, coef));
                }
            }
            c
        };
        let mut acc = column(d);
        for i in (0..d).rev() {
            acc = uni.add(&uni.mul(&acc, &a), &column(i));
        }
        acc
    }

    pub fn is_zero(&self, a: &Series2<R::Elem>) -> bool {
        a.coeffs.iter().all(|c| self.0.is_zero(c))
    }

    fn zip(
        &self,
        a: &Series2<R::Elem>,
        b: &Series2<R::Elem>,
        f: impl Fn(&R::Elem, &R::Elem) -> R::Elem,
    ) -> Series2<R::Elem> {
        let d = a.degree.min(b.degree);
        let n = idx2(0, d) + 1;
        Series2 {
            degree: d,
            coeffs: (0..n).map(|k| f(&a.coeffs[k], &b.coeffs[k])).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpoly::{IntPolyRing, WPoly};
    use num_bigint::BigInt;

    type S = Series<WPoly<BigInt>>;

    fn ints(v: &[i64]) -> S {
        Series::from_coeffs(v.iter().map(|&c| IntPolyRing.from_int(c)).collect())
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let u = Uni(&IntPolyRing);
        let inv = u.inv_one(&ints(&[1, -1, 0, 0, 0]));
        assert_eq!(inv, ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn composition() {
        let u = Uni(&IntPolyRing);
        // (T + T^2) ∘ (T + T^2) = T + 2T^2 + 2T^3 + T^4
        let a = ints(&[0, 1, 1, 0, 0]);
        assert_eq!(u.compose(&a, &a), ints(&[0, 1, 2, 2, 1]));
    }

    #[test]
    fn bivariate_inverse_and_substitute() {
        let r = IntPolyRing;
        let b = Bi(&r);
        let mut s = b.constant(r.one(), 4);
        b.set(&mut s, 1, 0, r.from_int(1));
        b.set(&mut s, 0, 1, r.from_int(1));
        let inv = b.inv_one(&s);
        assert!(b.is_zero(&b.sub(&b.mul(&s, &inv), &b.constant(r.one(), 4))));
        // (1 + X + Y)^{-1} at X = Y = T is 1/(1 + 2T)
        let t = Uni(&r).var(4);
        let sub = b.substitute(&inv, &t, &t);
        assert_eq!(sub, ints(&[1, -2, 4, -8, 16]));
    }
}
