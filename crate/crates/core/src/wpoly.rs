//! Sparse polynomials in the weighted ring Z[a1,a2,a3,a4,a6] (or Q[...]),
//! wt(a_i) = i.

use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{QAlgebra, Ring};

pub const WEIGHTS: [u32; 5] = [1, 2, 3, 4, 6];
pub const NAMES: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];

/// Exponents of (a1, a2, a3, a4, a6) packed into 10-bit fields, a1 in the
/// most significant position so that key order is lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn new(exps: [u32; 5]) -> Self {
        let mut k = 0u64;
        for e in exps {
            debug_assert!(e < 1024);
            k = (k << 10) | e as u64;
        }
        Monomial(k)
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 5];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn exps(self) -> [u32; 5] {
        let mut out = [0; 5];
        for (i, o) in out.iter_mut().enumerate() {
            *o = ((self.0 >> (10 * (4 - i))) & 1023) as u32;
        }
        out
    }

    pub fn weight(self) -> u32 {
        self.exps().iter().zip(WEIGHTS).map(|(e, w)| e * w).sum()
    }

    pub fn degree(self) -> u32 {
        self.exps().iter().sum()
    }

    fn times(self, o: Monomial) -> Monomial {
        // fields never carry at the sizes used here
        Monomial(self.0 + o.0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, name) in self.exps().iter().zip(NAMES) {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Coefficient types usable in [`WPoly`].
pub trait Coefficient: Clone + fmt::Debug + PartialEq + Zero + One + Signed + fmt::Display {
    fn from_big(n: &BigInt) -> Self;
}

impl Coefficient for BigInt {
    fn from_big(n: &BigInt) -> Self {
        n.clone()
    }
}

impl Coefficient for BigRational {
    fn from_big(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

/// Sparse polynomial: terms sorted by monomial, no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct WPoly<C> {
    terms: Vec<(Monomial, C)>,
}

impl<C: Coefficient> WPoly<C> {
    pub fn zero() -> Self {
        WPoly { terms: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            WPoly {
                terms: vec![(Monomial::ONE, c)],
            }
        }
    }

    pub fn var(i: usize) -> Self {
        WPoly {
            terms: vec![(Monomial::var(i), C::one())],
        }
    }

    pub fn from_terms(mut terms: Vec<(Monomial, C)>) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(Monomial, C)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.clone() + c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        WPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Monomial) -> C {
        self.terms
            .binary_search_by_key(&m, |t| t.0)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| C::zero())
    }

    /// Weight of every term, if the polynomial is homogeneous and nonzero.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let w = self.terms.first()?.0.weight();
        self.terms.iter().all(|t| t.0.weight() == w).then_some(w)
    }

    pub fn is_homogeneous_of_weight(&self, w: u32) -> bool {
        self.terms.iter().all(|t| t.0.weight() == w)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (a, b) = (&self.terms[i], &o.terms[j]);
            if a.0 < b.0 {
                out.push(a.clone());
                i += 1;
            } else if b.0 < a.0 {
                out.push(b.clone());
                j += 1;
            } else {
                let s = a.1.clone() + b.1.clone();
                if !s.is_zero() {
                    out.push((a.0, s));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        WPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        WPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut prod = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                prod.push((ma.times(*mb), ca.clone() * cb.clone()));
            }
        }
        Self::from_terms(prod)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        WPoly {
            terms: self.terms.iter().map(|(m, x)| (*m, x.clone() * c.clone())).collect(),
        }
    }

    /// Evaluate at concrete coefficient values in `ring`.
    pub fn eval<R: Ring>(&self, ring: &R, a: &[R::Elem; 5], conv: impl Fn(&R, &C) -> R::Elem) -> R::Elem {
        // cache powers per variable
        let mut acc = ring.zero();
        let mut powers: [Vec<R::Elem>; 5] = Default::default();
        for (m, c) in &self.terms {
            let mut t = conv(ring, c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = match powers[i].last() {
                        None => ring.one(),
                        Some(last) => ring.mul(last, &a[i]),
                    };
                    powers[i].push(next);
                }
                t = ring.mul(&t, &powers[i][e as usize]);
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }
}

impl WPoly<BigInt> {
    pub fn to_rational(&self) -> WPoly<BigRational> {
        WPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, BigRational::from_integer(c.clone())))
                .collect(),
        }
    }

    /// Evaluate at integer values of (a1, a2, a3, a4, a6).
    pub fn eval_int(&self, a: &[BigInt; 5]) -> BigInt {
        let r = IntPolyRing;
        let consts: [WPoly<BigInt>; 5] = a.clone().map(WPoly::constant);
        let v = self.eval(&r, &consts, |_, c| WPoly::constant(c.clone()));
        v.coeff(Monomial::ONE)
    }
}

impl<C: Coefficient> fmt::Display for WPoly<C> {
    /// Terms in descending monomial order, e.g. `a1*a2 - 7*a3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if *m == Monomial::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Ring context for [`WPoly`] with coefficients `C`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PolyRing<C>(PhantomData<C>);

pub type IntPolyRing = PolyRing<BigInt>;
#[allow(non_upper_case_globals)]
pub const IntPolyRing: IntPolyRing = PolyRing(PhantomData);
pub type RatPolyRing = PolyRing<BigRational>;
#[allow(non_upper_case_globals)]
pub const RatPolyRing: RatPolyRing = PolyRing(PhantomData);

impl<C: Coefficient> Ring for PolyRing<C> {
    type Elem = WPoly<C>;

    fn zero(&self) -> WPoly<C> {
        WPoly::zero()
    }
    fn one(&self) -> WPoly<C> {
        WPoly::constant(C::one())
    }
    fn from_int(&self, n: i64) -> WPoly<C> {
        WPoly::constant(C::from_big(&BigInt::from(n)))
    }
    fn from_bigint(&self, n: &BigInt) -> WPoly<C> {
        WPoly::constant(C::from_big(n))
    }
    fn add(&self, a: &WPoly<C>, b: &WPoly<C>) -> WPoly<C> {
        a.add(b)
    }
    fn sub(&self, a: &WPoly<C>, b: &WPoly<C>) -> WPoly<C> {
        a.sub(b)
    }
    fn neg(&self, a: &WPoly<C>) -> WPoly<C> {
        a.neg()
    }
    fn mul(&self, a: &WPoly<C>, b: &WPoly<C>) -> WPoly<C> {
        a.mul(b)
    }
    fn is_zero(&self, a: &WPoly<C>) -> bool {
        a.is_zero()
    }
    fn mul_int(&self, a: &WPoly<C>, n: i64) -> WPoly<C> {
        a.scale(&C::from_big(&BigInt::from(n)))
    }
}

impl QAlgebra for RatPolyRing {
    fn div_int(&self, a: &WPoly<BigRational>, n: i64) -> Result<WPoly<BigRational>> {
        if n == 0 {
            return Err(Error::NotInvertible);
        }
        Ok(a.scale(&BigRational::new(BigInt::one(), BigInt::from(n))))
    }
}

/// The generic coefficients a1..a6 as ring elements.
pub fn generic_coeffs<C: Coefficient>() -> [WPoly<C>; 5] {
    [0, 1, 2, 3, 4].map(WPoly::var)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[([u32; 5], i64)]) -> WPoly<BigInt> {
        WPoly::from_terms(terms.iter().map(|(e, c)| (Monomial::new(*e), BigInt::from(*c))).collect())
    }

    #[test]
    fn monomial_packing() {
        let m = Monomial::new([1, 2, 0, 3, 1]);
        assert_eq!(m.exps(), [1, 2, 0, 3, 1]);
        assert_eq!(m.weight(), 1 + 4 + 12 + 6);
        assert!(Monomial::var(0) > Monomial::var(1));
    }

    #[test]
    fn arithmetic_and_display() {
        let a1a2 = p(&[([1, 1, 0, 0, 0], 1)]);
        let a3 = p(&[([0, 0, 1, 0, 0], 1)]);
        let q = a1a2.sub(&a3.scale(&BigInt::from(7)));
        assert_eq!(q.to_string(), "a1*a2 - 7*a3");
        assert_eq!(q.homogeneous_weight(), Some(3));
        let sq = q.mul(&q);
        assert_eq!(sq.coeff(Monomial::new([1, 1, 1, 0, 0])), BigInt::from(-14));
        assert!(q.sub(&q).is_zero());
        assert_eq!(p(&[([0; 5], -5)]).to_string(), "-5");
    }

    #[test]
    fn integer_evaluation() {
        let q = p(&[([2, 0, 0, 0, 0], 1), ([0, 1, 0, 0, 0], -8)]);
        let a = [0, -3, 0, 0, 0].map(BigInt::from);
        assert_eq!(q.eval_int(&a), BigInt::from(24));
    }
}
