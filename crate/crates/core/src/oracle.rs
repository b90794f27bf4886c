//! Brute-force check of a classification: the group induced by F on the
//! finite quotient O_K/m^M, enumerated exhaustively.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classifier::ClassificationReport;
use crate::curve::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::formal_group::{group_law, TailBound};
use crate::local_field::{FieldKind, LocalField, OElement};
use crate::ring::{Coeffs, Ring};
use crate::series::Series2;

/// Largest supported [K : Q_p].
pub const MAX_DEGREE: usize = 8;
/// Default cap on |O_K/m^M|.
pub const DEFAULT_SIZE_BOUND: u128 = 1 << 16;

pub type Residue = [u64; MAX_DEGREE];

/// O_K/m^M with u64 digits. Elements are stored as coefficient vectors in
/// the basis 1, X, .., X^{n-1} of O_K = Z_p[X]/(h); digit i is reduced
/// modulo `moduli[i]`, which makes the representation canonical.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    p: u64,
    n: usize,
    level: i64,
    /// p^ceil(M/e): arithmetic is done modulo this before canonicalizing.
    big: u64,
    moduli: Vec<u64>,
    /// Lower coefficients of the monic defining polynomial, modulo `big`.
    h: Vec<u64>,
}

impl ResidueRing {
    pub fn new(field: &LocalField, level: i64, bound: u128) -> Result<Self> {
        let (p, n, e) = (field.p(), field.degree(), field.e() as i64);
        if n > MAX_DEGREE {
            return Err(Error::InvalidField(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        if level < 1 {
            return Err(Error::InvalidField("level must be positive".into()));
        }
        let order = field.quotient_order(level);
        if order > bound {
            return Err(Error::SizeBound { size: order, bound });
        }
        let exp = |k: i64| -> u64 { p.pow(k.max(0) as u32) };
        let moduli: Vec<u64> = match field.kind() {
            FieldKind::Unramified => vec![exp(level); n],
            FieldKind::Eisenstein => (0..n as i64).map(|i| exp((level - i + e - 1).div_euclid(e))).collect(),
        };
        let big = exp((level + e - 1) / e);
        let bb = BigInt::from(big);
        let h = field.poly()[..n]
            .iter()
            .map(|c| u64::try_from(c.mod_floor(&bb)).unwrap())
            .collect();
        Ok(ResidueRing {
            p,
            n,
            level,
            big,
            moduli,
            h,
        })
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn order(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    fn canonical(&self, mut x: Residue) -> Residue {
        for (c, &m) in x.iter_mut().zip(&self.moduli) {
            *c %= m;
        }
        x
    }

    pub fn element_at(&self, mut index: u128) -> Residue {
        let mut x = [0u64; MAX_DEGREE];
        for (c, &m) in x.iter_mut().zip(&self.moduli) {
            *c = (index % m as u128) as u64;
            index /= m as u128;
        }
        x
    }

    pub fn index_of(&self, x: &Residue) -> u128 {
        let mut idx = 0u128;
        for i in (0..self.n).rev() {
            idx = idx * self.moduli[i] as u128 + x[i] as u128;
        }
        idx
    }

    /// Image of an element of O_K known at least modulo m^M.
    pub fn from_o(&self, x: &OElement) -> Result<Residue> {
        if x.precision() < self.level {
            return Err(Error::InsufficientPrecision(format!(
                "element known to m^{} but the model has level {}",
                x.precision(),
                self.level
            )));
        }
        let bb = BigInt::from(self.big);
        let mut r = [0u64; MAX_DEGREE];
        for (c, v) in r.iter_mut().zip(x.coeffs()) {
            *c = u64::try_from(v.mod_floor(&bb)).unwrap();
        }
        Ok(self.canonical(r))
    }

    /// Reduction from a ring of higher level over the same field.
    pub fn reduce_from(&self, x: &Residue) -> Residue {
        self.canonical(*x)
    }

    pub fn uniformizer(&self, kind: &FieldKind) -> Residue {
        let mut r = [0u64; MAX_DEGREE];
        match kind {
            FieldKind::Unramified => r[0] = self.p,
            FieldKind::Eisenstein if self.n > 1 => r[1] = 1,
            FieldKind::Eisenstein => r[0] = self.p,
        }
        self.canonical(r)
    }

    pub fn pow(&self, x: &Residue, k: u32) -> Residue {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    pub fn format(&self, x: &Residue) -> String {
        let digits: Vec<String> = x[..self.n].iter().map(|d| d.to_string()).collect();
        if self.n == 1 {
            digits[0].clone()
        } else {
            format!("[{}]", digits.join(", "))
        }
    }
}

impl Ring for ResidueRing {
    type Elem = Residue;

    fn zero(&self) -> Residue {
        [0; MAX_DEGREE]
    }

    fn one(&self) -> Residue {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> Residue {
        let mut r = [0; MAX_DEGREE];
        r[0] = n.rem_euclid(self.big as i64) as u64;
        self.canonical(r)
    }

    fn from_bigint(&self, n: &BigInt) -> Residue {
        let mut r = [0; MAX_DEGREE];
        r[0] = u64::try_from(n.mod_floor(&BigInt::from(self.big))).unwrap();
        self.canonical(r)
    }

    fn add(&self, a: &Residue, b: &Residue) -> Residue {
        let mut r = [0; MAX_DEGREE];
        for i in 0..self.n {
            r[i] = (a[i] + b[i]) % self.moduli[i];
        }
        r
    }

    fn sub(&self, a: &Residue, b: &Residue) -> Residue {
        let mut r = [0; MAX_DEGREE];
        for i in 0..self.n {
            r[i] = (a[i] + self.moduli[i] - b[i]) % self.moduli[i];
        }
        r
    }

    fn neg(&self, a: &Residue) -> Residue {
        self.sub(&self.zero(), a)
    }

    fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        let n = self.n;
        let m = self.big;
        let mut t = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                t[i + j] = (t[i + j] + a[i] * b[j]) % m;
            }
        }
        // X^n = -(h_0 + .. + h_{n-1} X^{n-1})
        for d in (n..2 * n - 1).rev() {
            let c = t[d];
            if c == 0 {
                continue;
            }
            t[d] = 0;
            for i in 0..n {
                let k = d - n + i;
                t[k] = (t[k] + m - c * self.h[i] % m) % m;
            }
        }
        let mut r = [0u64; MAX_DEGREE];
        r[..n].copy_from_slice(&t[..n]);
        self.canonical(r)
    }

    fn is_zero(&self, a: &Residue) -> bool {
        a[..self.n].iter().all(|&c| c == 0)
    }
}

/// The group (O_K/m^M, x + y := F(x, y)).
pub struct FiniteModel {
    field: Arc<LocalField>,
    ring: ResidueRing,
    law: Series2<Residue>,
}

/// Truncation degree of F that is exact modulo m^M.
pub fn truncation_degree(level: i64) -> usize {
    let d = 6 * level as usize + 2;
    assert!(
        TailBound::GROUP_LAW.tail_valuation(d, 0) >= level,
        "truncation degree {d} does not certify level {level}"
    );
    d
}

fn reduce_coeffs(ring: &ResidueRing, e: &WeierstrassCurve) -> Result<Coeffs<Residue>> {
    let a = e.a();
    Ok([
        ring.from_o(&a[0])?,
        ring.from_o(&a[1])?,
        ring.from_o(&a[2])?,
        ring.from_o(&a[3])?,
        ring.from_o(&a[4])?,
    ])
}

impl FiniteModel {
    pub fn new(e: &WeierstrassCurve, level: i64) -> Result<Self> {
        FiniteModel::with_bound(e, level, DEFAULT_SIZE_BOUND)
    }

    pub fn with_bound(e: &WeierstrassCurve, level: i64, bound: u128) -> Result<Self> {
        if !e.is_normalized() {
            return Err(Error::NotNormalized);
        }
        let field = e.field().clone();
        let ring = ResidueRing::new(&field, level, bound)?;
        let a = reduce_coeffs(&ring, e)?;
        let law = group_law(&ring, &a, truncation_degree(level));
        Ok(FiniteModel { field, ring, law })
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn order(&self) -> u128 {
        self.ring.order()
    }

    pub fn level(&self) -> i64 {
        self.ring.level
    }

    /// x (+) y, by Horner in x over columns in y.
    pub fn oplus(&self, x: &Residue, y: &Residue) -> Residue {
        eval2(&self.ring, &self.law, x, y)
    }

    /// x (+) .. (+) x, m times.
    pub fn times(&self, m: u64, x: &Residue) -> Residue {
        let mut acc = self.ring.zero();
        for _ in 0..m {
            acc = self.oplus(&acc, x);
        }
        acc
    }

    /// All elements killed by p.
    pub fn p_kernel(&self) -> Vec<Residue> {
        let p = self.field.p();
        let mut out: Vec<(u128, Residue)> = (0..self.order())
            .into_par_iter()
            .filter_map(|i| {
                let x = self.ring.element_at(i);
                self.ring.is_zero(&self.times(p, &x)).then_some((i, x))
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out.into_iter().map(|(_, x)| x).collect()
    }

    /// log_p of the size of the p-kernel.
    pub fn p_rank(&self) -> Result<u32> {
        exact_log(self.field.p(), self.p_kernel().len() as u128)
    }

    /// Spot-check that x (+) y does not depend on the chosen lifts, by
    /// evaluating F modulo a higher power of m on random lifts.
    pub fn check_well_defined(&self, e: &WeierstrassCurve, pairs: usize, seed: u64) -> Result<()> {
        let upper_level = self.level() + self.field.e() as i64 + 1;
        let upper = ResidueRing::new(&self.field, upper_level, u128::MAX)?;
        let a = reduce_coeffs(&upper, &e.clone())?;
        let law = group_law(&upper, &a, truncation_degree(upper_level));
        let pi_m = upper.pow(&upper.uniformizer(self.field.kind()), self.level() as u32);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut random = |r: &ResidueRing| r.element_at(rng.gen_range(0..r.order()));
        for _ in 0..pairs {
            let (x, y) = (random(&upper), random(&upper));
            let (s, t) = (random(&upper), random(&upper));
            let x2 = upper.add(&x, &upper.mul(&pi_m, &s));
            let y2 = upper.add(&y, &upper.mul(&pi_m, &t));
            let here = self.oplus(&self.ring.reduce_from(&x), &self.ring.reduce_from(&y));
            let a1 = self.ring.reduce_from(&eval2(&upper, &law, &x, &y));
            let a2 = self.ring.reduce_from(&eval2(&upper, &law, &x2, &y2));
            if a1 != here || a2 != here {
                return Err(Error::Inconsistency(format!(
                    "group law depends on the lift of ({}, {})",
                    self.ring.format(&self.ring.reduce_from(&x)),
                    self.ring.format(&self.ring.reduce_from(&y))
                )));
            }
        }
        Ok(())
    }

    /// Identity, commutativity and associativity on random elements.
    pub fn check_axioms(&self, samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = &self.ring;
        for _ in 0..samples {
            let mut pick = || r.element_at(rng.gen_range(0..r.order()));
            let (x, y, z) = (pick(), pick(), pick());
            let ok = self.oplus(&x, &r.zero()) == x
                && self.oplus(&x, &y) == self.oplus(&y, &x)
                && self.oplus(&self.oplus(&x, &y), &z) == self.oplus(&x, &self.oplus(&y, &z));
            if !ok {
                return Err(Error::Inconsistency(format!(
                    "group axioms fail at ({}, {}, {})",
                    r.format(&x),
                    r.format(&y),
                    r.format(&z)
                )));
            }
        }
        Ok(())
    }
}

fn eval2(ring: &ResidueRing, s: &Series2<Residue>, x: &Residue, y: &Residue) -> Residue {
    let d = s.degree();
    let mut acc = ring.zero();
    for i in (0..=d).rev() {
        let mut col = *s.coeff(i, d - i);
        for j in (0..d - i).rev() {
            col = ring.add(&ring.mul(&col, y), s.coeff(i, j));
        }
        acc = ring.add(&ring.mul(&acc, x), &col);
    }
    acc
}

fn exact_log(p: u64, mut n: u128) -> Result<u32> {
    let mut k = 0;
    while n > 1 && n.is_multiple_of(p as u128) {
        n /= p as u128;
        k += 1;
    }
    if n != 1 {
        return Err(Error::Inconsistency(format!("p-kernel size is not a power of {p}")));
    }
    Ok(k)
}

/// Smallest level at which the p-rank of the quotient equals the rank of
/// E_0(K): m^M must map into p E_0(K).
pub fn minimal_level(field: &LocalField) -> i64 {
    field.e() as i64 + crate::classifier::filtration_base_index(field)
}

/// min(4, largest level within the size bound), but at least the minimal
/// level.
pub fn default_level(field: &LocalField) -> i64 {
    let mut m = 1;
    while m < 4 && field.quotient_order(m + 1) <= DEFAULT_SIZE_BOUND {
        m += 1;
    }
    m.max(minimal_level(field))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleVerdict {
    pub level: i64,
    pub order: u128,
    pub p_rank: u32,
    pub kernel_size: u128,
    pub expected_kernel_size: u128,
    pub pass: bool,
    /// Elements of the p-kernel, listed when the count is wrong.
    pub witness: Option<Vec<String>>,
}

impl OracleVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "order": self.order.to_string(),
            "p_rank": self.p_rank,
            "kernel_size": self.kernel_size.to_string(),
            "expected_kernel_size": self.expected_kernel_size.to_string(),
            "verdict": if self.pass { "pass" } else { "fail" },
            "witness": self.witness,
        })
    }
}

/// Check the predicted free rank and torsion rank against the p-kernel of
/// the finite model: it must have exactly p^(n + b) elements.
pub fn compare(report: &ClassificationReport, level: i64) -> Result<OracleVerdict> {
    compare_with_bound(report, level, DEFAULT_SIZE_BOUND)
}

pub fn compare_with_bound(report: &ClassificationReport, level: i64, bound: u128) -> Result<OracleVerdict> {
    let e = &report.model;
    let p = e.field().p();
    if level < minimal_level(e.field()) {
        return Err(Error::InsufficientPrecision(format!(
            "level {level} is below the minimal level {}",
            minimal_level(e.field())
        )));
    }
    let model = FiniteModel::with_bound(e, level, bound)?;
    let kernel = model.p_kernel();
    let kernel_size = kernel.len() as u128;
    let p_rank = exact_log(p, kernel_size)?;
    let rank = (report.structure.free_rank + report.structure.torsion_rank()) as u32;
    let expected = (p as u128).pow(rank);
    let pass = kernel_size == expected;
    let witness = (!pass).then(|| kernel.iter().take(64).map(|x| model.ring.format(x)).collect());
    Ok(OracleVerdict {
        level,
        order: model.order(),
        p_rank,
        kernel_size,
        expected_kernel_size: expected,
        pass,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify_general;
    use crate::local_field::FieldSpec;

    fn qp(p: u64) -> Arc<LocalField> {
        LocalField::new(p, &FieldSpec::Unramified { n: 1, poly: None }, Some(24)).unwrap()
    }

    #[test]
    fn residue_ring_matches_local_field() {
        let k = LocalField::new(
            3,
            &FieldSpec::Eisenstein {
                poly: vec![BigInt::from(3), BigInt::from(3), BigInt::from(1)],
            },
            None,
        )
        .unwrap();
        let r = ResidueRing::new(&k, 5, DEFAULT_SIZE_BOUND).unwrap();
        assert_eq!(r.order(), 243);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = k.random(&mut rng, 12);
            let y = k.random(&mut rng, 12);
            let lhs = r.from_o(&x.mul(&y)).unwrap();
            let rhs = r.mul(&r.from_o(&x).unwrap(), &r.from_o(&y).unwrap());
            assert_eq!(lhs, rhs);
            assert_eq!(r.from_o(&x.add(&y)).unwrap(), r.add(&r.from_o(&x).unwrap(), &r.from_o(&y).unwrap()));
        }
        for i in 0..r.order() {
            assert_eq!(r.index_of(&r.element_at(i)), i);
        }
    }

    #[test]
    fn small_models() {
        let e2 = WeierstrassCurve::from_ints(&qp(2), [0, 0, 2, 0, -2]).unwrap();
        let m = FiniteModel::new(&e2, 4).unwrap();
        assert_eq!(m.order(), 16);
        assert_eq!(m.p_rank().unwrap(), 2);
        m.check_well_defined(&e2, 200, 1).unwrap();
        m.check_axioms(200, 2).unwrap();
        // level 1 is the additive group of k
        let m1 = FiniteModel::new(&e2, 1).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let (x, y) = (m1.ring.element_at(i), m1.ring.element_at(j));
                assert_eq!(m1.oplus(&x, &y), m1.ring.add(&x, &y));
            }
        }
        let e8 = WeierstrassCurve::from_ints(&qp(2), [0, -6, 0, 8, 0]).unwrap();
        assert_eq!(FiniteModel::new(&e8, 4).unwrap().p_rank().unwrap(), 1);
        let e3 = WeierstrassCurve::from_ints(&qp(3), [0, -3, 0, 3, 0]).unwrap();
        assert_eq!(FiniteModel::new(&e3, 3).unwrap().p_rank().unwrap(), 2);
    }

    #[test]
    fn compare_and_negative_control() {
        let e9 = WeierstrassCurve::from_ints(&qp(2), [0, 0, 0, 0, -2]).unwrap();
        let mut r = classify_general(&e9).unwrap();
        let v = compare(&r, 4).unwrap();
        assert!(v.pass && v.witness.is_none());
        r.structure.torsion = vec![2];
        let v = compare(&r, 4).unwrap();
        assert!(!v.pass);
        assert_eq!(v.witness.unwrap().len(), 2);
    }

    #[test]
    fn size_bound() {
        let e = WeierstrassCurve::from_ints(&qp(7), [7, 0, -28, 7, -35]).unwrap();
        assert!(matches!(FiniteModel::new(&e, 6), Err(Error::SizeBound { .. })));
        assert_eq!(default_level(e.field()), 4);
    }
}
