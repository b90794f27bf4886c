//! Finite-precision arithmetic in O_K and K for K/Q_p unramified or totally
//! ramified.
//!
//! O_K is represented as Z_p[X]/(h) where h is either a lift of the residue
//! field modulus (unramified) or an Eisenstein polynomial. Elements carry a
//! precision in powers of the maximal ideal: an [`OElement`] with precision
//! `k` is known modulo m^k. Each coefficient is stored reduced modulo the
//! exact power of p needed, which makes the representation canonical.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::arith::{ceil_div, invmod_big, is_prime, vp_big};
use crate::error::{Error, Result};
use crate::residue_field::{FFElement, FiniteField};
use crate::ring::{QAlgebra, Ring};

/// Precision marker for exact zeros in K.
const EXACT: i64 = i64::MAX / 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Unramified,
    Eisenstein,
}

/// How to build a field: an unramified extension of degree `n` (optionally
/// with an explicit monic defining polynomial), or the extension cut out by an
/// Eisenstein polynomial. Polynomials are listed from the constant term up,
/// including the leading 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Unramified { n: usize, poly: Option<Vec<BigInt>> },
    Eisenstein { poly: Vec<BigInt> },
}

#[derive(Debug)]
pub struct LocalField {
    p: u64,
    kind: FieldKind,
    e: usize,
    f: usize,
    precision: i64,
    poly: Vec<BigInt>,
    residue: Arc<FiniteField>,
    ppow: Vec<BigInt>,
    // p / pi, as raw coefficients at full precision
    p_over_pi: Vec<BigInt>,
    // the unit p / pi^e
    epsilon: Vec<BigInt>,
}

impl PartialEq for LocalField {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.kind == o.kind && self.poly == o.poly && self.precision == o.precision
    }
}

impl LocalField {
    /// Build and validate a field. `precision` defaults to 12·e.
    pub fn new(p: u64, spec: &FieldSpec, precision: Option<i64>) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let (kind, poly, residue) = match spec {
            FieldSpec::Unramified { n, poly } => {
                if *n == 0 {
                    return Err(Error::InvalidField("degree must be at least 1".into()));
                }
                match poly {
                    None => {
                        let residue = FiniteField::new(p, *n)?;
                        let poly = residue.modulus().iter().map(|&c| BigInt::from(c)).collect();
                        (FieldKind::Unramified, poly, residue)
                    }
                    Some(h) => {
                        check_monic(h, *n)?;
                        let pb = BigInt::from(p);
                        let red: Vec<u64> = h.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
                        let residue = FiniteField::with_modulus(p, &red)?;
                        (FieldKind::Unramified, h.clone(), residue)
                    }
                }
            }
            FieldSpec::Eisenstein { poly } => {
                if poly.len() < 2 {
                    return Err(Error::InvalidField("Eisenstein polynomial must have degree at least 1".into()));
                }
                check_monic(poly, poly.len() - 1)?;
                let pb = BigInt::from(p);
                for c in &poly[..poly.len() - 1] {
                    if !c.is_multiple_of(&pb) {
                        return Err(Error::InvalidField(format!(
                            "not Eisenstein: coefficient {c} is not divisible by {p}"
                        )));
                    }
                }
                if poly[0].is_multiple_of(&(&pb * &pb)) {
                    return Err(Error::InvalidField(format!(
                        "not Eisenstein: constant term {} is divisible by {p}^2",
                        poly[0]
                    )));
                }
                (FieldKind::Eisenstein, poly.clone(), FiniteField::new(p, 1)?)
            }
        };
        let n = poly.len() - 1;
        let (e, f) = match kind {
            FieldKind::Unramified => (1, n),
            FieldKind::Eisenstein => (n, 1),
        };
        let precision = precision.unwrap_or(12 * e as i64);
        if precision < 1 {
            return Err(Error::InvalidField("precision must be at least 1".into()));
        }
        let top = ceil_div(precision, e as i64) as usize + 2;
        let mut ppow = Vec::with_capacity(top + 1);
        ppow.push(BigInt::one());
        for k in 1..=top {
            let next = &ppow[k - 1] * p;
            ppow.push(next);
        }
        let mut field = LocalField {
            p,
            kind,
            e,
            f,
            precision,
            poly,
            residue,
            ppow,
            p_over_pi: Vec::new(),
            epsilon: Vec::new(),
        };
        field.init_constants()?;
        Ok(Arc::new(field))
    }

    /// The same field at another working precision.
    pub fn with_precision(&self, precision: i64) -> Result<Arc<Self>> {
        LocalField::new(self.p, &self.spec(), Some(precision))
    }

    pub fn spec(&self) -> FieldSpec {
        match self.kind {
            FieldKind::Unramified => FieldSpec::Unramified {
                n: self.degree(),
                poly: Some(self.poly.clone()),
            },
            FieldKind::Eisenstein => FieldSpec::Eisenstein {
                poly: self.poly.clone(),
            },
        }
    }

    fn init_constants(&mut self) -> Result<()> {
        let n = self.degree();
        match self.kind {
            FieldKind::Unramified => {
                let mut one = vec![BigInt::zero(); n];
                one[0] = BigInt::one();
                self.epsilon = one.clone();
                self.p_over_pi = one;
            }
            FieldKind::Eisenstein => {
                // p/pi^e = -(u + c1 pi + ... + c_{e-1} pi^{e-1})^{-1}, h_i = p c_i, h_0 = p u
                let pb = BigInt::from(self.p);
                let d: Vec<BigInt> = self.poly[..n].iter().map(|c| c / &pb).collect();
                let d = self.canon(&d, self.precision);
                let inv = self.raw_unit_inverse(&d)?;
                let eps: Vec<BigInt> = inv.iter().map(|c| -c).collect();
                self.epsilon = self.canon(&eps, self.precision);
                let mut pi_pow = vec![BigInt::zero(); n];
                if n == 1 {
                    pi_pow[0] = BigInt::one();
                } else {
                    pi_pow[n - 1] = BigInt::one();
                }
                // for e = 1 the uniformizer is the integer -h0 and p/pi is epsilon
                self.p_over_pi = self.canon(&self.raw_mul(&self.epsilon, &pi_pow), self.precision);
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Defining polynomial, constant term first.
    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn residue(&self) -> &Arc<FiniteField> {
        &self.residue
    }

    pub fn is_unramified(&self) -> bool {
        self.kind == FieldKind::Unramified
    }

    /// Name of the generator X of O_K = Z_p[X]/(h) used when printing.
    pub fn generator_name(&self) -> &'static str {
        match self.kind {
            FieldKind::Unramified => "a",
            FieldKind::Eisenstein => "pi",
        }
    }

    /// |O_K / m^k|.
    pub fn quotient_order(&self, k: i64) -> u128 {
        (self.p as u128).saturating_pow((self.f as i64 * k) as u32)
    }

    fn digit_exponent(&self, i: usize, prec: i64) -> usize {
        match self.kind {
            FieldKind::Unramified => prec.max(0) as usize,
            FieldKind::Eisenstein => ceil_div(prec - i as i64, self.e as i64).max(0) as usize,
        }
    }

    fn ppow(&self, k: usize) -> BigInt {
        if k < self.ppow.len() {
            self.ppow[k].clone()
        } else {
            num_traits::pow(BigInt::from(self.p), k)
        }
    }

    fn canon(&self, v: &[BigInt], prec: i64) -> Vec<BigInt> {
        v.iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.digit_exponent(i, prec);
                if k == 0 {
                    BigInt::zero()
                } else {
                    c.mod_floor(&self.ppow(k))
                }
            })
            .collect()
    }

    fn raw_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.degree();
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                if !self.poly[i].is_zero() {
                    prod[k - n + i] -= &c * &self.poly[i];
                }
            }
        }
        prod.truncate(n);
        prod
    }

    fn raw_valuation(&self, v: &[BigInt]) -> Option<i64> {
        let mut best: Option<i64> = None;
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let vp = vp_big(c, self.p) as i64;
            let val = match self.kind {
                FieldKind::Unramified => vp,
                FieldKind::Eisenstein => self.e as i64 * vp + i as i64,
            };
            best = Some(best.map_or(val, |b: i64| b.min(val)));
        }
        best
    }

    fn raw_reduce(&self, v: &[BigInt]) -> FFElement {
        let pb = BigInt::from(self.p);
        match self.kind {
            FieldKind::Unramified => {
                let cs: Vec<u64> = v.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
                self.residue.from_coeffs(&cs)
            }
            FieldKind::Eisenstein => self.residue.from_u64(v[0].mod_floor(&pb).to_u64().unwrap()),
        }
    }

    // inverse of a unit at full precision, by Newton iteration from the
    // residue field inverse
    fn raw_unit_inverse(&self, a: &[BigInt]) -> Result<Vec<BigInt>> {
        let r = self.raw_reduce(a).inv().ok_or(Error::NotInvertible)?;
        let mut y = vec![BigInt::zero(); self.degree()];
        match self.kind {
            FieldKind::Unramified => {
                for (i, &c) in r.coeffs().iter().enumerate() {
                    y[i] = BigInt::from(c);
                }
            }
            FieldKind::Eisenstein => y[0] = BigInt::from(r.coeffs()[0]),
        }
        let mut known = 1i64;
        let two = {
            let mut t = vec![BigInt::zero(); self.degree()];
            t[0] = BigInt::from(2);
            t
        };
        while known < self.precision {
            let ay = self.raw_mul(a, &y);
            let diff: Vec<BigInt> = two.iter().zip(&ay).map(|(x, z)| x - z).collect();
            y = self.canon(&self.raw_mul(&y, &diff), self.precision);
            known *= 2;
        }
        Ok(y)
    }

    // --- constructors of elements ---

    pub fn element(self: &Arc<Self>, coeffs: Vec<BigInt>, prec: i64) -> OElement {
        assert_eq!(coeffs.len(), self.degree(), "coefficient vector has wrong length");
        let prec = prec.clamp(0, self.precision);
        OElement {
            coeffs: self.canon(&coeffs, prec),
            field: self.clone(),
            prec,
        }
    }

    pub fn zero(self: &Arc<Self>) -> OElement {
        self.from_bigint(&BigInt::zero())
    }

    pub fn one(self: &Arc<Self>) -> OElement {
        self.from_bigint(&BigInt::one())
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> OElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(self: &Arc<Self>, n: &BigInt) -> OElement {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[0] = n.clone();
        self.element(v, self.precision)
    }

    /// Class of X: a uniformizer in the Eisenstein case, a generator of the
    /// residue extension in the unramified case.
    pub fn generator(self: &Arc<Self>) -> OElement {
        let n = self.degree();
        if n == 1 {
            let c = match self.kind {
                FieldKind::Unramified => BigInt::zero(),
                FieldKind::Eisenstein => -&self.poly[0],
            };
            return self.from_bigint(&c);
        }
        let mut v = vec![BigInt::zero(); n];
        v[1] = BigInt::one();
        self.element(v, self.precision)
    }

    pub fn uniformizer(self: &Arc<Self>) -> OElement {
        match self.kind {
            FieldKind::Unramified => self.from_int(self.p as i64),
            FieldKind::Eisenstein => self.generator(),
        }
    }

    /// Integral image of a rational number with denominator prime to p.
    pub fn from_rational(self: &Arc<Self>, q: &BigRational) -> Result<OElement> {
        let den = q.denom();
        if vp_big(den, self.p) > 0 {
            return Err(Error::NonIntegral(q.to_string()));
        }
        let modulus = self.ppow(ceil_div(self.precision, self.e as i64) as usize + 1);
        let inv = invmod_big(den, &modulus).ok_or(Error::NotInvertible)?;
        Ok(self.from_bigint(&(q.numer() * inv)))
    }

    /// Lift of a residue class, with coefficients in (-p/2, p/2].
    pub fn lift(self: &Arc<Self>, x: &FFElement) -> OElement {
        let mut v = vec![BigInt::zero(); self.degree()];
        for (i, &c) in x.coeffs().iter().enumerate() {
            v[i] = BigInt::from(crate::arith::balanced(c, self.p));
        }
        self.element(v, self.precision)
    }

    /// A uniformly random element of O_K / m^prec.
    pub fn random<G: Rng + ?Sized>(self: &Arc<Self>, rng: &mut G, prec: i64) -> OElement {
        let prec = prec.clamp(0, self.precision);
        let v = (0..self.degree())
            .map(|i| {
                let k = self.digit_exponent(i, prec);
                let mut c = BigInt::zero();
                for _ in 0..k {
                    c = c * self.p + rng.gen_range(0..self.p);
                }
                c
            })
            .collect();
        self.element(v, prec)
    }
}

fn check_monic(h: &[BigInt], n: usize) -> Result<()> {
    if h.len() != n + 1 || n == 0 {
        return Err(Error::InvalidField(format!(
            "defining polynomial must have degree {n} (got {} coefficients)",
            h.len()
        )));
    }
    if !h[n].is_one() {
        return Err(Error::InvalidField("defining polynomial must be monic".into()));
    }
    Ok(())
}

/// An element of O_K known modulo m^prec.
#[derive(Clone)]
pub struct OElement {
    field: Arc<LocalField>,
    coeffs: Vec<BigInt>,
    prec: i64,
}

impl PartialEq for OElement {
    fn eq(&self, o: &Self) -> bool {
        self.prec == o.prec && self.coeffs == o.coeffs && *self.field == *o.field
    }
}

impl OElement {
    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }

    /// Coefficients in the basis 1, X, ..., X^{n-1}, canonical residues.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients in the balanced range.
    pub fn balanced_coeffs(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.field.digit_exponent(i, self.prec);
                let m = self.field.ppow(k);
                if c * 2 > m {
                    c - m
                } else {
                    c.clone()
                }
            })
            .collect()
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// None when the element is zero modulo m^prec.
    pub fn valuation(&self) -> Option<i64> {
        self.field.raw_valuation(&self.coeffs)
    }

    pub fn valuation_checked(&self) -> Result<i64> {
        self.valuation().ok_or(Error::ZeroAtPrecision(self.prec))
    }

    /// Valuation, or the precision for an apparent zero: a lower bound for
    /// the true valuation in all cases.
    pub fn valuation_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    pub fn truncate(&self, prec: i64) -> OElement {
        self.field.element(self.coeffs.clone(), prec.min(self.prec))
    }

    /// Reinterpret in the same field at another working precision.
    pub fn to_field(&self, field: &Arc<LocalField>) -> OElement {
        assert_eq!(field.poly, self.field.poly);
        field.element(self.coeffs.clone(), self.prec.min(field.precision))
    }

    pub fn add(&self, o: &Self) -> Self {
        let v: Vec<BigInt> = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        self.field.element(v, self.prec.min(o.prec))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let v: Vec<BigInt> = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        self.field.element(v, self.prec.min(o.prec))
    }

    pub fn neg(&self) -> Self {
        let v: Vec<BigInt> = self.coeffs.iter().map(|a| -a).collect();
        self.field.element(v, self.prec)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = (self.prec + o.valuation_bound()).min(o.prec + self.valuation_bound());
        self.field.element(self.field.raw_mul(&self.coeffs, &o.coeffs), prec)
    }

    pub fn mul_int(&self, n: i64) -> Self {
        if n == 0 {
            return self.field.zero();
        }
        let prec = self.prec + self.field.e as i64 * crate::arith::vp_i64(n, self.field.p) as i64;
        let v: Vec<BigInt> = self.coeffs.iter().map(|a| a * n).collect();
        self.field.element(v, prec)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn reduce(&self) -> FFElement {
        self.field.raw_reduce(&self.coeffs)
    }

    /// Inverse of a unit, to the same precision.
    pub fn unit_inverse(&self) -> Result<OElement> {
        if self.prec < 1 || !self.is_unit() {
            return Err(Error::NotInvertible);
        }
        let inv = self.field.raw_unit_inverse(&self.coeffs)?;
        Ok(self.field.element(inv, self.prec))
    }

    /// Inverse in K.
    pub fn invert(&self) -> Result<KElement> {
        self.to_k().inv()
    }

    /// Multiply by pi^k.
    pub fn mul_pi_pow(&self, k: i64) -> OElement {
        assert!(k >= 0);
        if k == 0 {
            return self.clone();
        }
        match self.field.kind {
            FieldKind::Unramified => {
                let s = self.field.ppow(k as usize);
                let v: Vec<BigInt> = self.coeffs.iter().map(|a| a * &s).collect();
                self.field.element(v, self.prec + k)
            }
            FieldKind::Eisenstein => {
                let pi = self.field.generator();
                let mut acc = self.coeffs.clone();
                for _ in 0..k {
                    acc = self.field.raw_mul(&acc, &pi.coeffs);
                }
                self.field.element(acc, self.prec + k)
            }
        }
    }

    /// Exact division by pi; requires valuation at least 1.
    pub fn div_pi(&self) -> Result<OElement> {
        if self.valuation_bound() < 1 {
            return Err(Error::NonIntegral("division by the uniformizer of a unit".into()));
        }
        let pb = BigInt::from(self.field.p);
        match self.field.kind {
            FieldKind::Unramified => {
                let v: Vec<BigInt> = self.coeffs.iter().map(|a| a / &pb).collect();
                Ok(self.field.element(v, self.prec - 1))
            }
            FieldKind::Eisenstein => {
                let n = self.field.degree();
                let mut v = vec![BigInt::zero(); n];
                v[..n - 1].clone_from_slice(&self.coeffs[1..]);
                let c0 = &self.coeffs[0] / &pb;
                let t = self.field.raw_mul(&[c0], &self.field.p_over_pi);
                for (x, y) in v.iter_mut().zip(t) {
                    *x += y;
                }
                Ok(self.field.element(v, self.prec - 1))
            }
        }
    }

    /// Divide by pi^k; requires valuation at least k.
    pub fn div_pi_pow(&self, k: i64) -> Result<OElement> {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.div_pi()?;
        }
        Ok(x)
    }

    pub fn eq_at_precision(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    pub fn to_k(&self) -> KElement {
        KElement::from_o(self)
    }

    pub fn to_json(&self) -> Value {
        self.to_k().to_json()
    }
}

impl fmt::Debug for OElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self, self.field.generator_name_for_prec(), self.prec)
    }
}

impl LocalField {
    fn generator_name_for_prec(&self) -> String {
        match self.kind {
            FieldKind::Unramified => self.p.to_string(),
            FieldKind::Eisenstein => "pi".into(),
        }
    }
}

impl fmt::Display for OElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.balanced_coeffs(), self.field.generator_name())
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt], var: &str) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        first = false;
        match (i, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => write!(f, "{var}")?,
            (1, false) => write!(f, "{mag}*{var}")?,
            (_, true) => write!(f, "{var}^{i}")?,
            (_, false) => write!(f, "{mag}*{var}^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// An element of K: pi^shift times a unit of O_K, or an element known only to
/// lie in m^prec.
#[derive(Clone, PartialEq)]
pub enum KElement {
    Zero { field: Arc<LocalField>, prec: i64 },
    NonZero { shift: i64, unit: OElement },
}

impl KElement {
    pub fn from_o(x: &OElement) -> KElement {
        match x.valuation() {
            None => KElement::Zero {
                field: x.field.clone(),
                prec: x.prec,
            },
            Some(v) => KElement::NonZero {
                shift: v,
                unit: x.div_pi_pow(v).expect("valuation checked"),
            },
        }
    }

    /// An exact zero.
    pub fn zero(field: &Arc<LocalField>) -> KElement {
        KElement::Zero {
            field: field.clone(),
            prec: EXACT,
        }
    }

    pub fn one(field: &Arc<LocalField>) -> KElement {
        KElement::NonZero {
            shift: 0,
            unit: field.one(),
        }
    }

    pub fn from_int(field: &Arc<LocalField>, n: i64) -> KElement {
        KElement::from_rational(field, &BigRational::from_integer(n.into()))
    }

    /// Canonical image of a rational number; exact rationals keep full
    /// relative precision.
    pub fn from_rational(field: &Arc<LocalField>, q: &BigRational) -> KElement {
        if q.is_zero() {
            return KElement::zero(field);
        }
        let p = field.p;
        let vn = vp_big(q.numer(), p) as i64;
        let vd = vp_big(q.denom(), p) as i64;
        let pk = |k: i64| BigInt::from(p).pow(k as u32);
        let (num, den) = (q.numer() / pk(vn), q.denom() / pk(vd));
        let base = field
            .from_rational(&BigRational::new(num, den))
            .expect("p removed from denominator");
        let k = vn - vd;
        let eps = field.element(field.epsilon.clone(), field.precision);
        let eps_k = if k >= 0 {
            eps.pow(k as u64)
        } else {
            eps.unit_inverse().expect("epsilon is a unit").pow((-k) as u64)
        };
        KElement::NonZero {
            shift: field.e as i64 * k,
            unit: base.mul(&eps_k),
        }
    }

    pub fn field(&self) -> &Arc<LocalField> {
        match self {
            KElement::Zero { field, .. } => field,
            KElement::NonZero { unit, .. } => &unit.field,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, KElement::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, KElement::Zero { prec, .. } if *prec >= EXACT)
    }

    pub fn valuation(&self) -> Result<i64> {
        match self {
            KElement::Zero { prec, .. } => Err(Error::ZeroAtPrecision(*prec)),
            KElement::NonZero { shift, .. } => Ok(*shift),
        }
    }

    /// Valuation, or absolute precision for an apparent zero.
    pub fn valuation_bound(&self) -> i64 {
        match self {
            KElement::Zero { prec, .. } => *prec,
            KElement::NonZero { shift, .. } => *shift,
        }
    }

    /// The element is known modulo m^abs_precision.
    pub fn abs_precision(&self) -> i64 {
        match self {
            KElement::Zero { prec, .. } => *prec,
            KElement::NonZero { shift, unit } => shift + unit.prec,
        }
    }

    pub fn shift(&self) -> Option<i64> {
        match self {
            KElement::Zero { .. } => None,
            KElement::NonZero { shift, .. } => Some(*shift),
        }
    }

    pub fn unit_part(&self) -> Option<&OElement> {
        match self {
            KElement::Zero { .. } => None,
            KElement::NonZero { unit, .. } => Some(unit),
        }
    }

    /// As an element of O_K; fails for negative valuation.
    pub fn to_o(&self) -> Result<OElement> {
        match self {
            KElement::Zero { field, prec } => Ok(field.element(vec![BigInt::zero(); field.degree()], *prec)),
            KElement::NonZero { shift, unit } => {
                if *shift < 0 {
                    Err(Error::NonIntegral(format!("{self}")))
                } else {
                    Ok(unit.mul_pi_pow(*shift))
                }
            }
        }
    }

    pub fn neg(&self) -> KElement {
        match self {
            KElement::Zero { .. } => self.clone(),
            KElement::NonZero { shift, unit } => KElement::NonZero {
                shift: *shift,
                unit: unit.neg(),
            },
        }
    }

    pub fn add(&self, o: &KElement) -> KElement {
        match (self, o) {
            (KElement::Zero { field, prec: a }, KElement::Zero { prec: b, .. }) => KElement::Zero {
                field: field.clone(),
                prec: (*a).min(*b),
            },
            (KElement::Zero { prec, .. }, x) | (x, KElement::Zero { prec, .. }) => x.truncate_abs(*prec),
            (KElement::NonZero { shift: s, unit: u }, KElement::NonZero { shift: t, unit: w }) => {
                let m = (*s).min(*t);
                let a = u.mul_pi_pow(s - m);
                let b = w.mul_pi_pow(t - m);
                let sum = a.add(&b);
                KElement::from_o(&sum).shifted(m)
            }
        }
    }

    pub fn sub(&self, o: &KElement) -> KElement {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &KElement) -> KElement {
        match (self, o) {
            (KElement::Zero { field, prec }, x) | (x, KElement::Zero { field, prec }) => KElement::Zero {
                field: field.clone(),
                prec: (*prec + x.valuation_bound()).min(EXACT),
            },
            (KElement::NonZero { shift: s, unit: u }, KElement::NonZero { shift: t, unit: w }) => {
                KElement::NonZero {
                    shift: s + t,
                    unit: u.mul(w),
                }
            }
        }
    }

    pub fn inv(&self) -> Result<KElement> {
        match self {
            KElement::Zero { .. } => Err(Error::NotInvertible),
            KElement::NonZero { shift, unit } => Ok(KElement::NonZero {
                shift: -shift,
                unit: unit.unit_inverse()?,
            }),
        }
    }

    pub fn div(&self, o: &KElement) -> Result<KElement> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn mul_int(&self, n: i64) -> KElement {
        self.mul(&KElement::from_int(self.field(), n))
    }

    pub fn div_int(&self, n: i64) -> Result<KElement> {
        self.div(&KElement::from_int(self.field(), n))
    }

    pub fn pow(&self, k: u64) -> KElement {
        let mut acc = KElement::one(self.field());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by pi^k (k may be negative).
    pub fn shifted(&self, k: i64) -> KElement {
        match self {
            KElement::Zero { field, prec } => KElement::Zero {
                field: field.clone(),
                prec: (*prec + k).min(EXACT),
            },
            KElement::NonZero { shift, unit } => KElement::NonZero {
                shift: shift + k,
                unit: unit.clone(),
            },
        }
    }

    /// Forget everything beyond m^abs.
    pub fn truncate_abs(&self, abs: i64) -> KElement {
        match self {
            KElement::Zero { field, prec } => KElement::Zero {
                field: field.clone(),
                prec: (*prec).min(abs),
            },
            KElement::NonZero { shift, unit } => {
                if abs <= *shift {
                    KElement::Zero {
                        field: unit.field.clone(),
                        prec: abs,
                    }
                } else {
                    KElement::NonZero {
                        shift: *shift,
                        unit: unit.truncate(abs - shift),
                    }
                }
            }
        }
    }

    pub fn eq_at_precision(&self, o: &KElement) -> bool {
        self.sub(o).is_zero()
    }

    /// Serialized as {"shift", "coeffs", "prec"}: the element is
    /// pi^shift * (sum coeffs[i] X^i) modulo pi^(shift + prec). An apparent
    /// zero has empty coefficients' content and prec 0.
    pub fn to_json(&self) -> Value {
        match self {
            KElement::Zero { field, prec } => json!({
                "shift": if *prec >= EXACT { Value::Null } else { json!(prec) },
                "coeffs": vec![0; field.degree()],
                "prec": 0,
            }),
            KElement::NonZero { shift, unit } => json!({
                "shift": shift,
                "coeffs": unit.balanced_coeffs().iter().map(bigint_json).collect::<Vec<_>>(),
                "prec": unit.prec,
            }),
        }
    }

    pub fn from_json(field: &Arc<LocalField>, v: &Value) -> Result<KElement> {
        let bad = |m: &str| Error::Parse(format!("element: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let coeffs = obj
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| bad("missing coeffs"))?;
        if coeffs.len() != field.degree() {
            return Err(bad("wrong number of coefficients"));
        }
        let coeffs = coeffs.iter().map(parse_bigint).collect::<Result<Vec<_>>>()?;
        let prec = obj.get("prec").and_then(|c| c.as_i64()).ok_or_else(|| bad("missing prec"))?;
        let shift = match obj.get("shift") {
            Some(Value::Null) => return Ok(KElement::zero(field)),
            Some(s) => s.as_i64().ok_or_else(|| bad("shift must be an integer"))?,
            None => return Err(bad("missing shift")),
        };
        if !(0..=field.precision).contains(&prec) || shift.abs() > EXACT / 2 {
            return Err(bad("precision out of range"));
        }
        let unit = field.element(coeffs, prec);
        Ok(KElement::from_o(&unit).shifted(shift))
    }
}

pub fn bigint_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

fn parse_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        _ => Err(Error::Parse(format!("not an integer: {v}"))),
    }
}

impl fmt::Debug for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KElement::Zero { prec, .. } if *prec >= EXACT => write!(f, "0"),
            KElement::Zero { field, prec } => write!(f, "O({}^{prec})", field.generator_name_for_prec()),
            KElement::NonZero { shift, unit } => {
                write!(f, "{}^{shift} * ({unit:?})", unit.field.generator_name_for_prec())
            }
        }
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KElement::Zero { .. } => write!(f, "0"),
            KElement::NonZero { shift, unit } => {
                if *shift >= 0 {
                    write!(f, "{}", unit.mul_pi_pow(*shift))
                } else {
                    let name = match unit.field.kind {
                        FieldKind::Unramified => unit.field.p.to_string(),
                        FieldKind::Eisenstein => "pi".into(),
                    };
                    write!(f, "({unit})/{name}^{}", -shift)
                }
            }
        }
    }
}

/// O_K at the field's working precision, as a coefficient ring.
#[derive(Clone, Debug)]
pub struct LocalRing(pub Arc<LocalField>);

impl Ring for LocalRing {
    type Elem = OElement;

    fn zero(&self) -> OElement {
        self.0.zero()
    }
    fn one(&self) -> OElement {
        self.0.one()
    }
    fn from_int(&self, n: i64) -> OElement {
        self.0.from_int(n)
    }
    fn from_bigint(&self, n: &BigInt) -> OElement {
        self.0.from_bigint(n)
    }
    fn add(&self, a: &OElement, b: &OElement) -> OElement {
        a.add(b)
    }
    fn sub(&self, a: &OElement, b: &OElement) -> OElement {
        a.sub(b)
    }
    fn neg(&self, a: &OElement) -> OElement {
        a.neg()
    }
    fn mul(&self, a: &OElement, b: &OElement) -> OElement {
        a.mul(b)
    }
    fn is_zero(&self, a: &OElement) -> bool {
        a.is_zero()
    }
    fn mul_int(&self, a: &OElement, n: i64) -> OElement {
        a.mul_int(n)
    }
}

/// K as a coefficient ring.
#[derive(Clone, Debug)]
pub struct KRing(pub Arc<LocalField>);

impl Ring for KRing {
    type Elem = KElement;

    fn zero(&self) -> KElement {
        KElement::zero(&self.0)
    }
    fn one(&self) -> KElement {
        KElement::one(&self.0)
    }
    fn from_int(&self, n: i64) -> KElement {
        KElement::from_int(&self.0, n)
    }
    fn from_bigint(&self, n: &BigInt) -> KElement {
        KElement::from_rational(&self.0, &BigRational::from_integer(n.clone()))
    }
    fn add(&self, a: &KElement, b: &KElement) -> KElement {
        a.add(b)
    }
    fn sub(&self, a: &KElement, b: &KElement) -> KElement {
        a.sub(b)
    }
    fn neg(&self, a: &KElement) -> KElement {
        a.neg()
    }
    fn mul(&self, a: &KElement, b: &KElement) -> KElement {
        a.mul(b)
    }
    fn is_zero(&self, a: &KElement) -> bool {
        a.is_zero()
    }
}

impl QAlgebra for KRing {
    fn div_int(&self, a: &KElement, n: i64) -> Result<KElement> {
        a.div_int(n)
    }
}
