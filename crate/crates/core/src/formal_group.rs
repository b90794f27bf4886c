//! Formal group of a Weierstrass curve.
//!
//! Everything is computed in the (z, w) = (-x/y, -1/y) chart: w(z) is found
//! coefficient by coefficient, the chord through two points of the chart gives
//! the third intersection, and negating it gives F. The same code runs over
//! the generic ring Z[a1,a2,a3,a4,a6], over O_K, and over finite quotients.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{ceil_div, is_prime};
use crate::error::{Error, Result};
use crate::local_field::{KElement, KRing, LocalField, LocalRing, OElement};
use crate::residue_field::AdditivePoly;
use crate::ring::{Coeffs, QAlgebra, Ring};
use crate::series::{Bi, Series, Series2, Uni};
use crate::wpoly::{generic_coeffs, Coefficient, IntPolyRing, Monomial, RatPolyRing, WPoly};

pub type GenericSeries = Series<WPoly<BigInt>>;
pub type GenericSeries2 = Series2<WPoly<BigInt>>;

/// w(z) = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3, to degree d.
pub fn w_series<R: Ring>(ring: &R, a: &Coeffs<R::Elem>, d: usize) -> Series<R::Elem> {
    let [a1, a2, a3, a4, a6] = a;
    let mut w: Vec<R::Elem> = vec![ring.zero(); d + 1];
    // sq[m] = coefficient of z^m in w^2, filled lazily
    let mut sq: Vec<Option<R::Elem>> = vec![None; d + 1];
    let square = |w: &Vec<R::Elem>, m: usize| -> R::Elem {
        let mut s = ring.zero();
        let mut i = 3;
        while i + 3 <= m {
            let t = ring.mul(&w[i], &w[m - i]);
            s = ring.add(&s, &t);
            i += 1;
        }
        s
    };
    for n in 3..=d {
        let mut c = if n == 3 { ring.one() } else { ring.zero() };
        c = ring.add(&c, &ring.mul(a1, &w[n - 1]));
        c = ring.add(&c, &ring.mul(a2, &w[n - 2]));
        if n >= 6 {
            for m in [n, n - 1] {
                if sq[m].is_none() {
                    sq[m] = Some(square(&w, m));
                }
            }
            let sq_n = sq[n].clone().unwrap();
            let sq_n1 = sq[n - 1].clone().unwrap();
            c = ring.add(&c, &ring.mul(a3, &sq_n));
            c = ring.add(&c, &ring.mul(a4, &sq_n1));
            if n >= 9 {
                let mut cube = ring.zero();
                for i in 3..=n - 6 {
                    let m = n - i;
                    if sq[m].is_none() {
                        sq[m] = Some(square(&w, m));
                    }
                    cube = ring.add(&cube, &ring.mul(&w[i], sq[m].as_ref().unwrap()));
                }
                c = ring.add(&c, &ring.mul(a6, &cube));
            }
        }
        w[n] = c;
    }
    Series::from_coeffs(w)
}

/// Series arithmetic needed by the chord construction.
trait ChordOps<R: Ring> {
    type S: Clone;
    fn ring(&self) -> &R;
    fn add(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn sub(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn neg(&self, a: &Self::S) -> Self::S;
    fn mul(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn scale(&self, a: &Self::S, c: &R::Elem) -> Self::S;
    fn scale_int(&self, a: &Self::S, n: i64) -> Self::S;
    fn one(&self) -> Self::S;
    fn inv_one(&self, a: &Self::S) -> Self::S;
    /// Multiply by the second chord argument.
    fn times_second(&self, a: &Self::S) -> Self::S;
}

/// Univariate series in T where the second argument is T itself.
struct UniOps<'r, R: Ring> {
    ring: &'r R,
    d: usize,
}

impl<'r, R: Ring> ChordOps<R> for UniOps<'r, R> {
    type S = Series<R::Elem>;
    fn ring(&self) -> &R {
        self.ring
    }
    fn add(&self, a: &Self::S, b: &Self::S) -> Self::S {
        Uni(self.ring).add(a, b)
    }
    fn sub(&self, a: &Self::S, b: &Self::S) -> Self::S {
        Uni(self.ring).sub(a, b)
    }
    fn neg(&self, a: &Self::S) -> Self::S {
        Uni(self.ring).neg(a)
    }
    fn mul(&self, a: &Self::S, b: &Self::S) -> Self::S {
        Uni(self.ring).mul(a, b)
    }
    fn scale(&self, a: &Self::S, c: &R::Elem) -> Self::S {
        Uni(self.ring).scale(a, c)
    }
    fn scale_int(&self, a: &Self::S, n: i64) -> Self::S {
        Uni(self.ring).scale_int(a, n)
    }
    fn one(&self) -> Self::S {
        Uni(self.ring).constant(self.ring.one(), self.d)
    }
    fn inv_one(&self, a: &Self::S) -> Self::S {
        Uni(self.ring).inv_one(a)
    }
    fn times_second(&self, a: &Self::S) -> Self::S {
        Uni(self.ring).shift(a)
    }
}

/// Bivariate series in X, Y with chord arguments X and Y.
struct BiOps<'r, R: Ring> {
    ring: &'r R,
    d: usize,
}

impl<'r, R: Ring> ChordOps<R> for BiOps<'r, R> {
    type S = Series2<R::Elem>;
    fn ring(&self) -> &R {
        self.ring
    }
    fn add(&self, a: &Self::S, b: &Self::S) -> Self::S {
        Bi(self.ring).add(a, b)
    }
    fn sub(&self, a: &Self::S, b: &Self::S) -> Self::S {
        Bi(self.ring).sub(a, b)
    }
    fn neg(&self, a: &Self::S) -> Self::S {
        Bi(self.ring).neg(a)
    }
    fn mul(&self, a: &Self::S, b: &Self::S) -> Self::S {
        Bi(self.ring).mul(a, b)
    }
    fn scale(&self, a: &Self::S, c: &R::Elem) -> Self::S {
        Bi(self.ring).scale(a, c)
    }
    fn scale_int(&self, a: &Self::S, n: i64) -> Self::S {
        Bi(self.ring).scale_int(a, n)
    }
    fn one(&self) -> Self::S {
        Bi(self.ring).constant(self.ring.one(), self.d)
    }
    fn inv_one(&self, a: &Self::S) -> Self::S {
        Bi(self.ring).inv_one(a)
    }
    fn times_second(&self, a: &Self::S) -> Self::S {
        let b = Bi(self.ring);
        let mut out = b.zero(self.d);
        for (i, j, c) in a.iter() {
            if i + j < self.d {
                b.set(&mut out, i, j + 1, c.clone());
            }
        }
        out
    }
}

/// F(z1, z2) via the chord through (z1, w(z1)) and (z2, w(z2)).
fn chord<R: Ring, O: ChordOps<R>>(
    ops: &O,
    a: &Coeffs<R::Elem>,
    w: &Series<R::Elem>,
    z1: &O::S,
    z2: &O::S,
    d: usize,
) -> O::S {
    let ring = ops.ring();
    let [a1, a2, a3, a4, a6] = a;
    // powers of z1, w(z1), and slope = sum_k w_k h_{k-1}(z1, z2); the slope
    // to degree d needs w to degree d + 1
    debug_assert!(w.degree() > d);
    let mut pow = ops.one();
    let mut h = ops.one();
    let mut wz1 = ops.scale(&ops.one(), &ring.zero());
    let mut lambda = wz1.clone();
    for k in 1..=d + 1 {
        pow = ops.mul(&pow, z1);
        // h is h_{k-1} here
        if k >= 3 && !ring.is_zero(w.coeff(k)) {
            lambda = ops.add(&lambda, &ops.scale(&h, w.coeff(k)));
            wz1 = ops.add(&wz1, &ops.scale(&pow, w.coeff(k)));
        }
        h = ops.add(&pow, &ops.times_second(&h));
    }
    let nu = ops.sub(&wz1, &ops.mul(&lambda, z1));
    let l2 = ops.mul(&lambda, &lambda);
    let ln = ops.mul(&lambda, &nu);
    let mut num = ops.scale(&lambda, a1);
    num = ops.add(&num, &ops.scale(&nu, a2));
    num = ops.add(&num, &ops.scale(&l2, a3));
    num = ops.add(&num, &ops.scale(&ops.scale_int(&ln, 2), a4));
    num = ops.add(&num, &ops.scale(&ops.scale_int(&ops.mul(&l2, &nu), 3), a6));
    let mut den = ops.one();
    den = ops.add(&den, &ops.scale(&lambda, a2));
    den = ops.add(&den, &ops.scale(&l2, a4));
    den = ops.add(&den, &ops.scale(&ops.mul(&l2, &lambda), a6));
    let frac = ops.mul(&num, &ops.inv_one(&den));
    let z3 = ops.neg(&ops.add(&ops.add(z1, z2), &frac));
    let w3 = ops.add(&ops.mul(&lambda, &z3), &nu);
    // inverse point: z -> -z / (1 - a1 z - a3 w)
    let inv_den = ops.sub(&ops.sub(&ops.one(), &ops.scale(&z3, a1)), &ops.scale(&w3, a3));
    ops.neg(&ops.mul(&z3, &ops.inv_one(&inv_den)))
}

/// F(X, Y) over `ring`, to total degree d.
pub fn group_law<R: Ring>(ring: &R, a: &Coeffs<R::Elem>, d: usize) -> Series2<R::Elem> {
    let w = w_series(ring, a, d + 1);
    let b = Bi(ring);
    let mut x = b.zero(d);
    let mut y = b.zero(d);
    if d >= 1 {
        b.set(&mut x, 1, 0, ring.one());
        b.set(&mut y, 0, 1, ring.one());
    }
    chord(&BiOps { ring, d }, a, &w, &x, &y, d)
}

/// [n](T) over `ring`, to degree d, via [n] = F([n-1](T), T).
pub fn mult_by_n<R: Ring>(ring: &R, a: &Coeffs<R::Elem>, n: u64, d: usize) -> Series<R::Elem> {
    assert!(n >= 1);
    let w = w_series(ring, a, d + 1);
    let ops = UniOps { ring, d };
    let t = Uni(ring).var(d);
    let mut acc = t.clone();
    for _ in 1..n {
        acc = chord(&ops, a, &w, &acc, &t, d);
    }
    acc
}

/// Generic F over Z[a1..a6].
pub fn generic_group_law(d: usize) -> GenericSeries2 {
    assert!(d >= 1);
    group_law(&IntPolyRing, &generic_coeffs(), d)
}

type Cache<K, V> = OnceLock<Mutex<HashMap<K, Arc<V>>>>;

static MULT_CACHE: Cache<u64, GenericSeries> = OnceLock::new();

/// Generic [n](T) over Z[a1..a6], cached per n at the largest degree seen.
pub fn generic_mult_by_n(n: u64, d: usize) -> Arc<GenericSeries> {
    assert!(n >= 1 && d >= 1);
    let cache = MULT_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&n) {
        if s.degree() >= d {
            return Arc::new(s.truncate(d));
        }
    }
    let s = Arc::new(mult_by_n(&IntPolyRing, &generic_coeffs(), n, d));
    let mut guard = cache.lock().unwrap();
    let keep = guard.get(&n).is_none_or(|old| old.degree() < d);
    if keep {
        guard.insert(n, s.clone());
    }
    s
}

/// Formal logarithm over a Q-algebra, from the invariant differential
/// (2u + T u') / (u (2 - a1 T - a3 w)) dT with w = T^3 u.
pub fn formal_log<R: QAlgebra>(ring: &R, a: &Coeffs<R::Elem>, d: usize) -> Result<Series<R::Elem>> {
    let uni = Uni(ring);
    if d == 0 {
        return Ok(uni.zero(0));
    }
    let w = w_series(ring, a, d + 2);
    let u = Series::from_coeffs(w.coeffs()[3..].to_vec()); // degree d - 1
    let tdu = Series::from_coeffs(
        (0..d)
            .map(|k| ring.mul_int(u.coeff(k), k as i64))
            .collect(),
    );
    let num = uni.add(&uni.scale_int(&u, 2), &tdu);
    let mut lin = uni.constant(ring.from_int(2), d - 1);
    if d >= 2 {
        let mut a1t = uni.zero(d - 1);
        a1t = uni.add(&a1t, &uni.shift(&uni.constant(a[0].clone(), d - 1)));
        lin = uni.sub(&lin, &a1t);
    }
    lin = uni.sub(&lin, &uni.scale(&w.truncate(d - 1), &a[2]));
    let den = uni.mul(&u, &lin);
    // den has constant term 2
    let half = den
        .coeffs()
        .iter()
        .map(|c| ring.div_int(c, 2))
        .collect::<Result<Vec<_>>>()?;
    let dlog = uni.mul(&num, &uni.inv_one(&Series::from_coeffs(half)));
    let dlog = dlog
        .coeffs()
        .iter()
        .map(|c| ring.div_int(c, 2))
        .collect::<Result<Vec<_>>>()?;
    let mut log = vec![ring.zero(); d + 1];
    for (k, c) in dlog.iter().enumerate() {
        log[k + 1] = ring.div_int(c, k as i64 + 1)?;
    }
    Ok(Series::from_coeffs(log))
}

/// Compositional inverse of a series T + ... .
pub fn formal_exp_of<R: Ring>(ring: &R, log: &Series<R::Elem>) -> Series<R::Elem> {
    let uni = Uni(ring);
    let d = log.degree();
    let t = uni.var(d);
    let mut e = t.clone();
    for _ in 1..d {
        // e <- e - (log(e) - t)
        let err = uni.sub(&uni.compose(log, &e), &t);
        e = uni.sub(&e, &err);
    }
    e
}

pub fn formal_exp<R: QAlgebra>(ring: &R, a: &Coeffs<R::Elem>, d: usize) -> Result<Series<R::Elem>> {
    Ok(formal_exp_of(ring, &formal_log(ring, a, d)?))
}

static LOG_CACHE: Cache<(), Series<WPoly<BigRational>>> = OnceLock::new();

/// Generic formal logarithm with rational coefficients.
pub fn generic_log(d: usize) -> Arc<Series<WPoly<BigRational>>> {
    let cache = LOG_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&()) {
        if s.degree() >= d {
            return Arc::new(s.truncate(d));
        }
    }
    let s = Arc::new(formal_log(&RatPolyRing, &generic_coeffs(), d).expect("rational division"));
    cache.lock().unwrap().insert((), s.clone());
    s
}

/// Substitute concrete values for a1..a6 in a generic series.
pub fn specialize<C: Coefficient, R: Ring>(
    s: &Series<WPoly<C>>,
    ring: &R,
    a: &Coeffs<R::Elem>,
    conv: impl Fn(&R, &C) -> R::Elem + Copy,
) -> Series<R::Elem> {
    s.map(|c| c.eval(ring, a, conv))
}

pub fn specialize2<C: Coefficient, R: Ring>(
    s: &Series2<WPoly<C>>,
    ring: &R,
    a: &Coeffs<R::Elem>,
    conv: impl Fn(&R, &C) -> R::Elem + Copy,
) -> Series2<R::Elem> {
    s.map(|c| c.eval(ring, a, conv))
}

/// Specialize an integer series to O_K.
pub fn specialize_o(s: &GenericSeries, a: &Coeffs<OElement>) -> Series<OElement> {
    let ring = LocalRing(a[0].field().clone());
    specialize(s, &ring, a, |r, c| r.from_bigint(c))
}

/// The specialized formal logarithm over K.
pub fn specialized_log(field: &Arc<LocalField>, a: &Coeffs<KElement>, d: usize) -> Series<KElement> {
    let ring = KRing(field.clone());
    specialize(&generic_log(d), &ring, a, |r, c: &BigRational| {
        KElement::from_rational(&r.0, c)
    })
}

/// Valuation facts that make truncation of a group-law series sound: the
/// coefficient of T^i is a sum of monomials of weight i - weight_shift in
/// coefficients of valuation at least `coeff_valuation`.
#[derive(Clone, Copy, Debug)]
pub struct TailBound {
    pub weight_shift: usize,
    pub coeff_valuation: i64,
}

impl TailBound {
    /// For F and [n]: coefficient of degree i has weight i - 1.
    pub const GROUP_LAW: TailBound = TailBound {
        weight_shift: 1,
        coeff_valuation: 1,
    };

    /// Lower bound for the valuation of every term of degree > d at a point
    /// of valuation vx.
    pub fn tail_valuation(&self, d: usize, vx: i64) -> i64 {
        let w = (d + 1).saturating_sub(self.weight_shift) as i64;
        ceil_div(w, 6) * self.coeff_valuation + (d as i64 + 1) * vx
    }

    /// Smallest truncation degree certifying `target` at valuation vx.
    pub fn degree_for(&self, target: i64, vx: i64) -> usize {
        let mut d = 1;
        while self.tail_valuation(d, vx) < target {
            d += 1;
        }
        d
    }
}

/// Sum of s_i x^i, correct modulo m^target.
pub fn eval_at(s: &Series<OElement>, x: &OElement, target: i64, bound: TailBound) -> Result<OElement> {
    let d = s.degree();
    let certified = bound.tail_valuation(d, x.valuation_bound().max(0));
    if certified < target {
        return Err(Error::TruncationInsufficient {
            degree: d,
            certified,
            target,
        });
    }
    let mut acc = s.coeff(d).clone();
    for i in (0..d).rev() {
        acc = acc.mul(x).add(s.coeff(i));
    }
    if acc.precision() < target {
        return Err(Error::InsufficientPrecision(format!(
            "series value known to m^{} but m^{target} requested",
            acc.precision()
        )));
    }
    Ok(acc.truncate(target))
}

/// Evaluate a bivariate series at (x, y) by Horner in x over columns in y.
pub fn eval2_at(s: &Series2<OElement>, x: &OElement, y: &OElement, target: i64, bound: TailBound) -> Result<OElement> {
    let d = s.degree();
    let v = x.valuation_bound().min(y.valuation_bound()).max(0);
    let certified = bound.tail_valuation(d, v);
    if certified < target {
        return Err(Error::TruncationInsufficient {
            degree: d,
            certified,
            target,
        });
    }
    let mut acc: Option<OElement> = None;
    for i in (0..=d).rev() {
        let mut col = s.coeff(i, d - i).clone();
        for j in (0..d - i).rev() {
            col = col.mul(y).add(s.coeff(i, j));
        }
        acc = Some(match acc {
            None => col,
            Some(a) => a.mul(x).add(&col),
        });
    }
    let acc = acc.unwrap();
    if acc.precision() < target {
        return Err(Error::InsufficientPrecision(format!(
            "series value known to m^{} but m^{target} requested",
            acc.precision()
        )));
    }
    Ok(acc.truncate(target))
}

/// Symbolic truncation degree used for the reduction polynomial.
pub fn default_symbolic_degree(p: u64) -> usize {
    (2 * p as usize + 6).max(16)
}

/// The reduction of [p](T)/p over the residue field, as an additive
/// polynomial. Requires K unramified and all a_i in m_K.
pub fn g_polynomial(a: &Coeffs<OElement>) -> Result<AdditivePoly> {
    let field = a[0].field().clone();
    if !field.is_unramified() {
        return Err(Error::Ramified);
    }
    if a.iter().any(|x| x.valuation_bound() < 1) {
        return Err(Error::NotNormalized);
    }
    let p = field.p();
    // terms of degree >= 8 have weight >= 7, hence valuation >= 2
    let series = if p <= 7 {
        specialize_o(&generic_mult_by_n(p, default_symbolic_degree(p)), a)
    } else {
        mult_by_n(&LocalRing(field.clone()), a, p, 8)
    };
    let k = field.residue();
    let mut coeffs = Vec::new();
    for i in 1..=series.degree() {
        let r = series.coeff(i).div_pi()?.reduce();
        let mut q = 1usize;
        let mut j = 0;
        while q < i {
            q *= p as usize;
            j += 1;
        }
        if q == i {
            if coeffs.len() <= j {
                coeffs.resize(j + 1, k.zero());
            }
            coeffs[j] = r;
        } else if !r.is_zero() {
            return Err(Error::Inconsistency(format!(
                "coefficient of T^{i} in [{p}](T)/{p} does not vanish mod {p}"
            )));
        }
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    Ok(AdditivePoly::new(k, coeffs))
}

/// The closed-form reduction polynomial from the generic coefficients of
/// [p], as text: e.g. "T - (3*a4/5)~ * T^5" for p = 5.
pub fn generic_g_description(p: u64) -> Result<String> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > 7 {
        return Ok("T".into());
    }
    let s = generic_mult_by_n(p, default_symbolic_degree(p));
    let mut out = String::from("T");
    let pb = BigInt::from(p);
    let mut q = p as usize;
    while q <= 7 {
        let w = q - 1;
        if let Some(var) = [1, 2, 3, 4, 6].iter().position(|&x| x == w) {
            let c = s.coeff(q).coeff(Monomial::var(var));
            let mut r = c.mod_floor(&pb);
            if !r.is_zero() {
                r -= &pb; // representative in (-p, 0)
                let name = crate::wpoly::NAMES[var];
                let m = if r.abs().is_one() {
                    name.to_string()
                } else {
                    format!("{}*{name}", r.abs())
                };
                let _ = write!(out, " - ({m}/{p})~ * T^{q}");
            }
        }
        q *= p as usize;
    }
    Ok(out)
}

fn format_term(coef: &WPoly<impl Coefficient>, var_part: &str, first: bool) -> String {
    let mut s = String::new();
    let terms = coef.terms();
    if terms.len() == 1 {
        let (m, c) = &terms[0];
        let neg = c.is_negative();
        let mag = c.abs();
        s.push_str(match (first, neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        });
        let mut parts = Vec::new();
        if !mag.is_one() || (*m == Monomial::ONE && var_part.is_empty()) {
            parts.push(mag.to_string());
        }
        if *m != Monomial::ONE {
            parts.push(m.to_string());
        }
        if !var_part.is_empty() {
            parts.push(var_part.to_string());
        }
        s.push_str(&parts.join("*"));
    } else {
        if !first {
            s.push_str(" + ");
        }
        let _ = write!(s, "({coef})");
        if !var_part.is_empty() {
            let _ = write!(s, "*{var_part}");
        }
    }
    s
}

fn var_power(var: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

/// Pretty-print a univariate generic series in ascending degree.
pub fn format_series<C: Coefficient>(s: &Series<WPoly<C>>, var: &str) -> String {
    let mut out = String::new();
    for (k, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out.push_str(&format_term(c, &var_power(var, k), out.is_empty()));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Pretty-print a bivariate generic series by total degree, then by
/// decreasing power of X.
pub fn format_series2<C: Coefficient>(s: &Series2<WPoly<C>>) -> String {
    let mut out = String::new();
    for (i, j, c) in s.iter() {
        if c.is_zero() {
            continue;
        }
        let vp = [var_power("X", i), var_power("Y", j)]
            .into_iter()
            .filter(|x| !x.is_empty())
            .collect::<Vec<_>>()
            .join("*");
        out.push_str(&format_term(c, &vp, out.is_empty()));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn wpoly_json<C: Coefficient>(c: &WPoly<C>) -> Value {
    Value::Array(
        c.terms()
            .iter()
            .map(|(m, x)| json!({"exponents": m.exps(), "coefficient": x.to_string()}))
            .collect(),
    )
}

/// Coefficient table of a generic univariate series.
pub fn series_json<C: Coefficient>(s: &Series<WPoly<C>>) -> Value {
    let terms: Vec<Value> = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| json!({"degree": k, "coefficient": c.to_string(), "monomials": wpoly_json(c)}))
        .collect();
    json!({"degree": s.degree(), "terms": terms})
}

pub fn series2_json<C: Coefficient>(s: &Series2<WPoly<C>>) -> Value {
    let terms: Vec<Value> = s
        .iter()
        .filter(|(_, _, c)| !c.is_zero())
        .map(|(i, j, c)| json!({"x": i, "y": j, "coefficient": c.to_string(), "monomials": wpoly_json(c)}))
        .collect();
    json!({"degree": s.degree(), "terms": terms})
}

type Tri = BTreeMap<(usize, usize, usize), WPoly<BigInt>>;

fn tri_mul(a: &Tri, b: &Tri, d: usize) -> Tri {
    let mut out: Tri = BTreeMap::new();
    for (&(i, j, k), x) in a {
        for (&(l, m, n), y) in b {
            if i + j + k + l + m + n > d {
                continue;
            }
            let e = out.entry((i + l, j + m, k + n)).or_insert_with(WPoly::zero);
            *e = e.add(&x.mul(y));
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn tri_add(a: &mut Tri, b: &Tri) {
    for (key, y) in b {
        let e = a.entry(*key).or_insert_with(WPoly::zero);
        *e = e.add(y);
    }
    a.retain(|_, v| !v.is_zero());
}

// F(g, h) for trivariate g, h without constant terms
fn tri_compose(f: &GenericSeries2, g: &Tri, h: &Tri, d: usize) -> Tri {
    let one: Tri = [((0, 0, 0), WPoly::constant(BigInt::one()))].into_iter().collect();
    let mut gp = vec![one.clone()];
    let mut hp = vec![one];
    for k in 1..=d {
        gp.push(tri_mul(&gp[k - 1], g, d));
        hp.push(tri_mul(&hp[k - 1], h, d));
    }
    let mut out = Tri::new();
    for (i, j, c) in f.iter() {
        if c.is_zero() || i + j > d {
            continue;
        }
        let scaled: Tri = tri_mul(&gp[i], &hp[j], d)
            .into_iter()
            .map(|(k, v)| (k, v.mul(c)))
            .collect();
        tri_add(&mut out, &scaled);
    }
    out
}

fn embed_tri(f: &GenericSeries2, slots: (usize, usize)) -> Tri {
    let mut out = Tri::new();
    for (i, j, c) in f.iter() {
        if c.is_zero() {
            continue;
        }
        let mut key = [0usize; 3];
        key[slots.0] += i;
        key[slots.1] += j;
        out.insert((key[0], key[1], key[2]), c.clone());
    }
    out
}

/// Check F(F(X,Y),Z) = F(X,F(Y,Z)) symbolically up to the degree of `f`.
pub fn is_associative(f: &GenericSeries2) -> bool {
    let d = f.degree();
    let x: Tri = [((1, 0, 0), WPoly::constant(BigInt::one()))].into_iter().collect();
    let z: Tri = [((0, 0, 1), WPoly::constant(BigInt::one()))].into_iter().collect();
    let fxy = embed_tri(f, (0, 1));
    let fyz = embed_tri(f, (1, 2));
    tri_compose(f, &fxy, &z, d) == tri_compose(f, &x, &fyz, d)
}

/// Integer value of a single-term coefficient, if it is one.
pub fn monomial_coefficient(s: &GenericSeries, degree: usize, exps: [u32; 5]) -> BigInt {
    s.coeff(degree).coeff(Monomial::new(exps))
}

/// Convert a rational known to be integral.
pub fn rational_to_int(q: &BigRational) -> Option<i64> {
    q.is_integer().then(|| q.to_integer().to_i64()).flatten()
}
