//! The Z_p-module structure of E_0(K) for curves with additive reduction.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::pow_big;
use crate::curve::{CurvePoint, Transform, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::formal_group::{eval_at, g_polynomial, mult_by_n, specialized_log, TailBound};
use crate::linalg::{hnf_basis, nullspace_mod_p};
use crate::oracle;
use crate::local_field::{FieldKind, KElement, LocalField, LocalRing, OElement};
use crate::residue_field::{additive_poly_roots, FFElement};

/// Free rank plus p-power torsion summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure {
    pub p: u64,
    pub free_rank: usize,
    /// Orders of the cyclic torsion summands.
    pub torsion: Vec<u64>,
}

impl GroupStructure {
    pub fn new(p: u64, free_rank: usize, torsion_rank: usize) -> Self {
        GroupStructure {
            p,
            free_rank,
            torsion: vec![p; torsion_rank],
        }
    }

    pub fn torsion_rank(&self) -> usize {
        self.torsion.len()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({"free_rank": self.free_rank, "torsion": self.torsion})
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match self.free_rank {
            0 => write!(f, "0")?,
            1 => write!(f, "Z_{p}")?,
            n => write!(f, "Z_{p}^{n}")?,
        }
        let mut orders = self.torsion.clone();
        orders.sort_unstable();
        let mut i = 0;
        while i < orders.len() {
            let q = orders[i];
            let count = orders[i..].iter().take_while(|&&x| x == q).count();
            if count == 1 {
                write!(f, " x Z/{q}Z")?;
            } else {
                write!(f, " x (Z/{q}Z)^{count}")?;
            }
            i += count;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    FastPath,
    TheoremUnramified,
    /// One of the four special congruence cases, numbered 1 to 4.
    Corollary(u8),
    CorollaryTorsionFree,
    RamifiedExploratory,
}

const ROMAN: [&str; 4] = ["i", "ii", "iii", "iv"];

impl Method {
    pub fn as_str(&self) -> String {
        match self {
            Method::FastPath => "fast-path".into(),
            Method::TheoremUnramified => "theorem-unramified".into(),
            Method::Corollary(c) => format!("corollary-{}", ROMAN[*c as usize - 1]),
            Method::CorollaryTorsionFree => "corollary-torsion-free".into(),
            Method::RamifiedExploratory => "ramified-exploratory".into(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Method::FastPath => "6e < p-1".into(),
            Method::TheoremUnramified => "unramified theorem".into(),
            Method::Corollary(c) => format!("Corollary case {}", ROMAN[*c as usize - 1]),
            Method::CorollaryTorsionFree => "Corollary, no special case".into(),
            Method::RamifiedExploratory => "ramified, exploratory".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub structure: GroupStructure,
    pub method: Method,
    pub evidence: Value,
    pub certified: bool,
    /// The normalized model that was classified.
    pub model: WeierstrassCurve,
    /// Change of variables from the input model, when one was needed.
    pub transform: Option<Transform>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "structure": self.structure.to_json(),
            "method": self.method.as_str(),
            "evidence": self.evidence,
            "certified": self.certified,
            "model": self.model.to_json(),
            "transform": self.transform.as_ref().map(|t| t.to_json()),
        })
    }

    pub fn human(&self) -> String {
        let mut s = format!("{} ({})", self.structure, self.method.label());
        if !self.certified {
            match self.evidence["oracle"]["agrees"].as_bool() {
                Some(false) => s.push_str(&format!(
                    " [not certified; brute force finds torsion rank {}]",
                    self.evidence["oracle"]["torsion_rank"]
                )),
                _ => s.push_str(" [not certified]"),
            }
        }
        s
    }
}

/// Normalize the model if some a_i is a unit; non-additive input is rejected.
pub fn prepare(e: &WeierstrassCurve) -> Result<(WeierstrassCurve, Option<Transform>)> {
    if e.is_normalized() {
        return Ok((e.clone(), None));
    }
    let (n, t) = e.normalize_additive()?;
    Ok((n, Some(t)))
}

fn require_normalized(e: &WeierstrassCurve) -> Result<()> {
    if e.is_normalized() {
        Ok(())
    } else {
        Err(Error::NotNormalized)
    }
}

/// The residue of c * a / p, for a in pO_K and K unramified.
fn residue_of_multiple(a: &OElement, c: i64) -> Result<FFElement> {
    Ok(a.mul_int(c).div_pi()?.reduce())
}

/// Closed-form test of the torsion criterion for p in {2, 3, 5, 7},
/// independent of the series engine. Returns evidence and the predicted
/// torsion rank.
fn closed_form_check(e: &WeierstrassCurve) -> Result<Option<(Value, usize)>> {
    let field = e.field();
    let p = field.p();
    let k = field.residue();
    let [a1, a2, a3, a4, a6] = e.a();
    let norm_test = |a: &OElement, c: i64, name: &str| -> Result<Option<(Value, usize)>> {
        let coeff = residue_of_multiple(a, c)?;
        let norm = coeff.norm();
        let torsion = usize::from(!coeff.is_zero() && norm.is_one());
        Ok(Some((
            json!({
                "kind": "norm",
                "coefficient": format!("({c}*{name}/{p})~ = {coeff}"),
                "norm": norm.to_string(),
                "predicts_torsion": torsion == 1,
            }),
            torsion,
        )))
    };
    match p {
        2 => {
            // roots of (a3/2)~ X^4 + (a1/2)~ X^2 - X in k
            let c1 = residue_of_multiple(a1, 1)?;
            let c3 = residue_of_multiple(a3, 1)?;
            let count = k
                .elements()
                .filter(|x| {
                    let x2 = x.mul(x);
                    c3.mul(&x2).mul(&x2).add(&c1.mul(&x2)).sub(x).is_zero()
                })
                .count();
            let b = count.trailing_zeros() as usize;
            if count != 1 << b {
                return Err(Error::Inconsistency(format!("quartic has {count} roots")));
            }
            Ok(Some((json!({"kind": "quartic", "roots": count}), b)))
        }
        3 => norm_test(a2, 8, "a2"),
        5 => norm_test(a4, 1248, "a4"),
        7 => norm_test(a6, 352944, "a6"),
        _ => Ok(None),
    }
}

/// Unramified K of degree n: Z_p^n x (Z/pZ)^b with b the kernel dimension
/// of the reduction polynomial.
pub fn classify_unramified(e: &WeierstrassCurve) -> Result<ClassificationReport> {
    let field = e.field();
    if !field.is_unramified() {
        return Err(Error::Ramified);
    }
    require_normalized(e)?;
    let p = field.p();
    let n = field.degree();
    let g = g_polynomial(e.a())?;
    let roots = additive_poly_roots(&g)?;
    let b = roots.kernel_dimension;
    let mut evidence = json!({
        "g": g.to_string(),
        "kernel_dimension": b,
        "roots": roots.roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    });
    if let Some((check, predicted)) = closed_form_check(e)? {
        if predicted != b {
            return Err(Error::Inconsistency(format!(
                "kernel dimension {b} of g disagrees with the closed-form criterion ({predicted})"
            )));
        }
        evidence["cross_check"] = check;
    } else if b != 0 {
        return Err(Error::Inconsistency(format!("g has a kernel for p = {p} > 7")));
    }
    Ok(ClassificationReport {
        structure: GroupStructure::new(p, n, b),
        method: Method::TheoremUnramified,
        evidence,
        certified: true,
        model: e.clone(),
        transform: None,
    })
}

fn residue_mod(a: &OElement, m: &BigInt) -> Result<BigInt> {
    let p = BigInt::from(a.field().p());
    let needed = if *m == p { 1 } else { 2 };
    if a.precision() < needed {
        return Err(Error::InsufficientPrecision(format!(
            "a coefficient is known only to p^{}",
            a.precision()
        )));
    }
    Ok(a.coeffs()[0].mod_floor(m))
}

/// K = Q_p: the four special congruences.
pub fn classify_congruence(e: &WeierstrassCurve) -> Result<ClassificationReport> {
    let field = e.field();
    if !field.is_unramified() || field.degree() != 1 {
        return Err(Error::NotQp);
    }
    require_normalized(e)?;
    let p = field.p();
    let [a1, a2, a3, a4, a6] = e.a();
    let sq = BigInt::from(p * p);
    let (case, text, fired) = match p {
        2 => {
            let s = (residue_mod(a1, &sq)? + residue_mod(a3, &sq)?).mod_floor(&sq);
            (1, "a1 + a3 = 2 mod 4", s == BigInt::from(2))
        }
        3 => (2, "a2 = 6 mod 9", residue_mod(a2, &sq)? == BigInt::from(6)),
        5 => (3, "a4 = 10 mod 25", residue_mod(a4, &sq)? == BigInt::from(10)),
        7 => (4, "a6 = 14 mod 49", residue_mod(a6, &sq)? == BigInt::from(14)),
        _ => (0, "none for p > 7", false),
    };
    let method = if fired {
        Method::Corollary(case)
    } else {
        Method::CorollaryTorsionFree
    };
    Ok(ClassificationReport {
        structure: GroupStructure::new(p, 1, usize::from(fired)),
        method,
        evidence: json!({"congruence": text, "fired": fired}),
        certified: true,
        model: e.clone(),
        transform: None,
    })
}

/// Smallest i for which E_i(K) is guaranteed free of rank n with
/// pE_i = E_{i+e}.
pub fn filtration_base_index(field: &LocalField) -> i64 {
    let (p, e) = (field.p() as i64, field.e() as i64);
    if p == 2 {
        e
    } else {
        e / (p - 1) + 1
    }
}

/// Dispatch: the 6e < p-1 criterion, then the unramified theorem (checked
/// against the congruences over Q_p), then the exploratory ramified map.
/// Non-normalized models are normalized first.
pub fn classify_general(e: &WeierstrassCurve) -> Result<ClassificationReport> {
    let (model, transform) = prepare(e)?;
    let field = model.field().clone();
    let (p, ram) = (field.p(), field.e());
    let mut report = if 6 * ram < (p - 1) as usize {
        ClassificationReport {
            structure: GroupStructure::new(p, field.degree(), 0),
            method: Method::FastPath,
            evidence: json!({"e": ram, "p": p, "criterion": "6e < p-1"}),
            certified: true,
            model: model.clone(),
            transform: None,
        }
    } else if field.is_unramified() {
        let mut r = classify_unramified(&model)?;
        if field.degree() == 1 {
            let c = classify_congruence(&model)?;
            if c.structure != r.structure {
                return Err(Error::Inconsistency(format!(
                    "congruence test gives {} but g gives {}",
                    c.structure, r.structure
                )));
            }
            r.method = c.method;
            r.evidence["congruence"] = c.evidence;
        }
        r
    } else {
        ramified_report(&model)?
    };
    report.transform = transform;
    Ok(report)
}

/// Result of splitting a p-torsion group H off through g: H -> (Z/p^N)^a.
#[derive(Clone, Debug, PartialEq)]
pub struct Splitting {
    pub kernel_dimension: usize,
    /// Basis of the kernel in the coordinates of H.
    pub kernel: Vec<Vec<u64>>,
    /// When the kernel is trivial: a basis (rows) of p^{-N} times the
    /// preimage of im(g) in Z_p^a, which contains Z_p^a.
    pub lattice: Option<Vec<Vec<BigRational>>>,
}

/// `matrix` has a rows and f columns; column j is the image of the j-th
/// generator of H = (Z/p)^f in (Z/p^N)^a.
pub fn splitting_torsion(matrix: &[Vec<BigInt>], cols: usize, p: u64, big_n: u32) -> Result<Splitting> {
    let rows = matrix.len();
    if big_n == 0 {
        return Err(Error::MalformedMatrix("N must be positive".into()));
    }
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::MalformedMatrix(format!("rows must have {cols} entries")));
    }
    let modulus = pow_big(p, big_n);
    let step = pow_big(p, big_n - 1);
    let pb = BigInt::from(p);
    // each column must be killed by p; it is then p^{N-1} times a vector mod p
    let mut reduced = vec![vec![0u64; cols]; rows];
    for (i, row) in matrix.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let x = x.mod_floor(&modulus);
            if !(&x * &pb).mod_floor(&modulus).is_zero() {
                return Err(Error::MalformedMatrix(format!(
                    "entry ({i}, {j}) is not killed by p in Z/{modulus}"
                )));
            }
            let v: BigInt = &x / &step;
            reduced[i][j] = u64::try_from(v).expect("entry below p");
        }
    }
    let kernel = nullspace_mod_p(&reduced, cols, p);
    let kernel_dimension = kernel.len();
    let lattice = if kernel_dimension == 0 && rows > 0 {
        let mut gens: Vec<Vec<BigInt>> = (0..cols)
            .map(|j| (0..rows).map(|i| matrix[i][j].mod_floor(&modulus)).collect())
            .collect();
        for i in 0..rows {
            let mut v = vec![BigInt::zero(); rows];
            v[i] = modulus.clone();
            gens.push(v);
        }
        let basis = hnf_basis(&gens, rows);
        Some(
            basis
                .into_iter()
                .map(|r| r.into_iter().map(|x| BigRational::new(x, modulus.clone())).collect())
                .collect(),
        )
    } else {
        None
    };
    Ok(Splitting {
        kernel_dimension,
        kernel,
        lattice,
    })
}

/// Index of Z^a in the lattice spanned by the rows of `basis`, if the lattice
/// contains Z^a.
pub fn standard_lattice_index(basis: &[Vec<BigRational>]) -> Option<BigInt> {
    let dim = basis.len();
    // upper triangular basis: Z^a is inside iff each e_i is an integral
    // combination, solved by back substitution
    for i in 0..dim {
        let mut target: Vec<BigRational> = (0..dim)
            .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
            .collect();
        for r in 0..dim {
            let piv = &basis[r][r];
            if piv.is_zero() {
                return None;
            }
            let c = &target[r] / piv;
            if !c.is_integer() {
                return None;
            }
            for (t, b) in target.iter_mut().zip(&basis[r]) {
                *t -= &c * b;
            }
        }
        if target.iter().any(|t| !t.is_zero()) {
            return None;
        }
    }
    let det = basis
        .iter()
        .enumerate()
        .fold(BigRational::one(), |acc, (i, r)| acc * &r[i]);
    let inv = det.abs().recip();
    inv.is_integer().then(|| inv.to_integer())
}

/// The map k -> E_1/E_{1+e} ~ m/m^{1+e} over a totally ramified K.
#[derive(Clone, Debug)]
pub struct RamifiedMap {
    /// Coordinates over F_p of log([p](1))/pi in the basis 1, pi, .., pi^{e-1}.
    pub coords: Vec<u64>,
    /// log([p](1)) to the working precision.
    pub log_value: KElement,
    pub splitting: Splitting,
}

fn ramified_hypothesis(field: &LocalField) -> bool {
    let (p, e) = (field.p() as usize, field.e());
    e / (p - 1) == 0 || (p == 2 && e <= 2)
}

pub fn ramified_g_map(e: &WeierstrassCurve) -> Result<RamifiedMap> {
    let field = e.field().clone();
    if field.kind() != &FieldKind::Eisenstein {
        return Err(Error::HypothesisViolated("field must be totally ramified".into()));
    }
    if !ramified_hypothesis(&field) {
        return Err(Error::HypothesisViolated(format!(
            "e = {} is outside the range where E_1(K) is free (p = {})",
            field.e(),
            field.p()
        )));
    }
    require_normalized(e)?;
    let p = field.p();
    let ram = field.e() as i64;
    let target = ram + 1;
    // working margin for the divisions by k in the logarithm
    let inner = (target + 2 * ram + 2).min(field.precision());
    let d = TailBound::GROUP_LAW.degree_for(inner, 0);
    let mp = mult_by_n(&LocalRing(field.clone()), e.a(), p, d);
    let y = eval_at(&mp, &field.one(), inner, TailBound::GROUP_LAW)?;
    let log_value = log_at(&field, e, &y, inner)?;
    let vl = log_value.valuation_bound();
    if vl < 1 {
        return Err(Error::Inconsistency(format!("log([p](1)) has valuation {vl}")));
    }
    let unit = log_value.to_o()?.truncate(target).div_pi()?;
    let coords: Vec<u64> = unit
        .coeffs()
        .iter()
        .map(|c| u64::try_from(c.mod_floor(&BigInt::from(p))).unwrap())
        .collect();
    let matrix: Vec<Vec<BigInt>> = coords.iter().map(|&c| vec![BigInt::from(c)]).collect();
    let splitting = splitting_torsion(&matrix, 1, p, 1)?;
    Ok(RamifiedMap {
        coords,
        log_value,
        splitting,
    })
}

/// log(y) for v(y) >= 1, correct modulo m^target.
fn log_at(field: &Arc<LocalField>, e: &WeierstrassCurve, y: &OElement, target: i64) -> Result<KElement> {
    if y.is_zero() {
        return Ok(KElement::zero(field));
    }
    let vy = y.valuation_bound().max(1);
    let ram = field.e() as i64;
    let p = field.p() as i64;
    // the coefficient of T^k in log has valuation >= -e v_p(k)
    let drop = |k: i64| {
        let mut v = 0;
        let mut m = k;
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        k * vy - ram * v
    };
    let mut top = 1i64;
    let mut k = 1i64;
    // beyond some degree every term has valuation >= target
    while k < 64 * (target + ram + 1) {
        if drop(k) < target {
            top = k;
        }
        k += 1;
    }
    let log = specialized_log(field, &e.a_k(), top as usize);
    let yk = y.to_k();
    let mut acc = KElement::zero(field);
    for i in (1..=top as usize).rev() {
        acc = acc.add(log.coeff(i)).mul(&yk);
    }
    Ok(acc.truncate_abs(target))
}

fn ramified_report(e: &WeierstrassCurve) -> Result<ClassificationReport> {
    let field = e.field();
    let map = ramified_g_map(e)?;
    let p = field.p();
    let b = map.splitting.kernel_dimension;
    let image = if map.coords.iter().all(|&c| c == 0) {
        format!("0 = m^{}/m^{}", field.e() + 1, field.e() + 1)
    } else {
        let lead = map.coords.iter().position(|&c| c != 0).unwrap();
        format!("generated by an element of valuation {}", lead + 1)
    };
    let lattice = map.splitting.lattice.as_ref().map(|l| {
        l.iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    });
    let evidence = json!({
        "coords": map.coords,
        "image": image,
        "kernel_dimension": b,
        "lattice": lattice,
        "log_value": map.log_value.to_json(),
        "filtration_base_index": filtration_base_index(field),
    });
    let mut report = ClassificationReport {
        structure: GroupStructure::new(p, field.degree(), b),
        method: Method::RamifiedExploratory,
        evidence,
        certified: false,
        model: e.clone(),
        transform: None,
    };
    report.evidence["oracle"] = oracle_check(&report)?;
    Ok(report)
}

/// Brute-force p-rank of the finite quotient next to the log-based answer.
/// The two can differ when E_1(K) itself has torsion, which the map from k
/// cannot see.
fn oracle_check(report: &ClassificationReport) -> Result<Value> {
    let field = report.model.field();
    let level = oracle::default_level(field);
    if field.quotient_order(level) > oracle::DEFAULT_SIZE_BOUND {
        return Ok(json!({"skipped": "quotient too large"}));
    }
    let v = oracle::compare(report, level)?;
    let torsion_rank = (v.p_rank as usize).saturating_sub(report.structure.free_rank);
    Ok(json!({
        "level": level,
        "p_rank": v.p_rank,
        "torsion_rank": torsion_rank,
        "agrees": v.pass,
    }))
}

/// Order of a point of E(K) as far as the classification determines it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointOrder {
    Identity,
    /// Killed by p^j for the given j >= 1 and by no smaller power.
    Torsion(u32),
    /// [p^2]P is nonzero; `certified` follows the classification.
    Infinite { certified: bool },
    /// Outside E_0(K); the classification says nothing about it.
    OutsideE0,
}

#[derive(Clone, Debug)]
pub struct PointCheck {
    pub point: CurvePoint,
    pub in_e0: bool,
    pub level: Option<i64>,
    pub order: PointOrder,
}

impl PointCheck {
    pub fn human(&self, report: &ClassificationReport) -> String {
        let p = report.structure.p;
        let level = match self.level {
            Some(l) => format!("level {l}"),
            None => "identity".into(),
        };
        match &self.order {
            PointOrder::OutsideE0 => "not in E_0 (reduces to singular point)".into(),
            PointOrder::Identity => "in E_0, identity".into(),
            PointOrder::Torsion(j) => format!("in E_0, {level}, {}-torsion", p.pow(*j)),
            PointOrder::Infinite { certified: true } => {
                format!("in E_0, {level}, infinite order (group is {})", report.structure)
            }
            PointOrder::Infinite { certified: false } => {
                format!("in E_0, {level}, infinite order (uncertified; group is {})", report.structure)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let order = match &self.order {
            PointOrder::Identity => json!("1"),
            PointOrder::Torsion(j) => json!({"torsion_exponent": j}),
            PointOrder::Infinite { certified } => json!({"infinite": true, "certified": certified}),
            PointOrder::OutsideE0 => Value::Null,
        };
        json!({
            "point": self.point.to_json(),
            "on_curve": true,
            "in_e0": self.in_e0,
            "level": self.level,
            "order": order,
        })
    }
}

fn vanishes(model: &WeierstrassCurve, q: &CurvePoint) -> Result<bool> {
    Ok(q.is_infinity() || model.psi(q)?.is_zero())
}

/// On-curve check, E_0 membership, filtration level and order of a point on
/// the curve `report` was computed for (the model before normalization).
/// Orders are decided from [p]P and [p^2]P at the working precision; the
/// torsion of E_0(K) has exponent p whenever the classification applies.
pub fn check_point(report: &ClassificationReport, original: &WeierstrassCurve, point: &CurvePoint) -> Result<PointCheck> {
    original.check_on_curve(point)?;
    let model = &report.model;
    let q = match &report.transform {
        Some(t) => t.forward(point),
        None => point.clone(),
    };
    let in_e0 = model.in_e0(&q)?;
    if !in_e0 {
        return Ok(PointCheck {
            point: point.clone(),
            in_e0,
            level: None,
            order: PointOrder::OutsideE0,
        });
    }
    let level = model.filtration_level(&q)?;
    let p = report.structure.p as i64;
    let order = if vanishes(model, &q)? {
        PointOrder::Identity
    } else {
        let q1 = model.mul(p, &q)?;
        if vanishes(model, &q1)? {
            PointOrder::Torsion(1)
        } else if vanishes(model, &model.mul(p, &q1)?)? {
            PointOrder::Torsion(2)
        } else {
            PointOrder::Infinite {
                certified: report.certified,
            }
        }
    };
    Ok(PointCheck {
        point: point.clone(),
        in_e0,
        level,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::FieldSpec;

    fn qp(p: u64) -> Arc<LocalField> {
        LocalField::new(p, &FieldSpec::Unramified { n: 1, poly: None }, None).unwrap()
    }

    #[test]
    fn structure_display() {
        assert_eq!(GroupStructure::new(3, 1, 1).to_string(), "Z_3 x Z/3Z");
        assert_eq!(GroupStructure::new(2, 2, 2).to_string(), "Z_2^2 x (Z/2Z)^2");
        assert_eq!(GroupStructure::new(2, 1, 0).to_string(), "Z_2");
        assert_eq!(Method::Corollary(2).as_str(), "corollary-ii");
    }

    #[test]
    fn splitting_examples() {
        let one = |x: i64| vec![vec![BigInt::from(x)]];
        // identity: the preimage of the image is all of Z_3, scaled by 1/3
        let s = splitting_torsion(&one(1), 1, 3, 1).unwrap();
        assert_eq!(s.kernel_dimension, 0);
        let l = s.lattice.unwrap();
        assert_eq!(l, vec![vec![BigRational::new(1.into(), 3.into())]]);
        assert_eq!(standard_lattice_index(&l), Some(BigInt::from(3)));
        let s = splitting_torsion(&one(0), 1, 3, 1).unwrap();
        assert_eq!(s.kernel_dimension, 1);
        assert!(s.lattice.is_none());
        // x -> x - x^3 on F_3 is the zero map
        let g = |x: i64| x - x * x * x;
        let s = splitting_torsion(&one(g(1)), 1, 3, 1).unwrap();
        assert_eq!(s.kernel_dimension, 1);
        let id = vec![vec![BigInt::from(1), BigInt::zero()], vec![BigInt::zero(), BigInt::from(1)]];
        let s = splitting_torsion(&id, 2, 5, 1).unwrap();
        assert_eq!(s.kernel_dimension, 0);
        assert!(matches!(
            splitting_torsion(&one(1), 1, 3, 2),
            Err(Error::MalformedMatrix(_))
        ));
        assert!(matches!(
            splitting_torsion(&[vec![BigInt::one()]], 2, 3, 1),
            Err(Error::MalformedMatrix(_))
        ));
    }

    #[test]
    fn base_index() {
        assert_eq!(filtration_base_index(&qp(5)), 1);
        assert_eq!(filtration_base_index(&qp(2)), 1);
        let k = LocalField::new(
            2,
            &FieldSpec::Eisenstein {
                poly: vec![BigInt::from(-2), BigInt::zero(), BigInt::one()],
            },
            None,
        )
        .unwrap();
        assert_eq!(filtration_base_index(&k), 2);
    }

    #[test]
    fn congruence_examples() {
        let cases: [(u64, [i64; 5], usize, &str); 6] = [
            (2, [0, 0, 2, 0, -2], 1, "corollary-i"),
            (3, [0, -3, 0, 3, 0], 1, "corollary-ii"),
            (5, [0, 20, -5, -15, 0], 1, "corollary-iii"),
            (7, [7, 0, -28, 7, -35], 1, "corollary-iv"),
            (2, [0, -6, 0, 8, 0], 0, "corollary-torsion-free"),
            (2, [0, 0, 0, 0, -2], 0, "corollary-torsion-free"),
        ];
        for (p, a, b, method) in cases {
            let k = LocalField::new(p, &FieldSpec::Unramified { n: 1, poly: None }, Some(24)).unwrap();
            let e = WeierstrassCurve::from_ints(&k, a).unwrap();
            let c = classify_congruence(&e).unwrap();
            let u = classify_unramified(&e).unwrap();
            assert_eq!(c.structure, GroupStructure::new(p, 1, b));
            assert_eq!(u.structure, c.structure);
            assert_eq!(c.method.as_str(), method);
            let g = classify_general(&e).unwrap();
            assert_eq!(g.method.as_str(), method);
            assert!(g.certified);
        }
    }

    #[test]
    fn unramified_quadratic_e2() {
        let k = LocalField::new(2, &FieldSpec::Unramified { n: 2, poly: None }, None).unwrap();
        let e = WeierstrassCurve::from_ints(&k, [0, 0, 2, 0, -2]).unwrap();
        let r = classify_general(&e).unwrap();
        assert_eq!(r.structure.to_string(), "Z_2^2 x (Z/2Z)^2");
        assert_eq!(r.method, Method::TheoremUnramified);
        assert_eq!(r.human(), "Z_2^2 x (Z/2Z)^2 (unramified theorem)");
        assert!(matches!(classify_congruence(&e), Err(Error::NotQp)));
    }

    #[test]
    fn auto_normalization_and_rejection() {
        let k = qp(3);
        // Y^2 = X^3 + 3X^2 + 3X + 4 becomes Y^2 = X^3 + 3
        let e = WeierstrassCurve::from_ints(&k, [0, 3, 0, 3, 4]).unwrap();
        let r = classify_general(&e).unwrap();
        assert!(r.transform.is_some());
        assert_eq!(r.structure, GroupStructure::new(3, 1, 0));
        let good = WeierstrassCurve::from_ints(&k, [0, 0, 0, 1, 0]).unwrap();
        let err = classify_general(&good).unwrap_err();
        assert_eq!(err.to_string(), "reduction type: good");
    }

    #[test]
    fn fast_path_large_p() {
        let k = qp(11);
        let e = WeierstrassCurve::from_ints(&k, [11, 22, 0, 11, 121]).unwrap();
        let r = classify_general(&e).unwrap();
        assert_eq!(r.method, Method::FastPath);
        assert_eq!(classify_unramified(&e).unwrap().structure, r.structure);
    }

    #[test]
    fn point_orders() {
        use crate::curve::CurvePoint;
        let check = |p: u64, m: i64, a: [i64; 5], x: i64, y: i64| {
            let k = LocalField::new(p, &FieldSpec::Unramified { n: 1, poly: None }, Some(m)).unwrap();
            let e = WeierstrassCurve::from_ints(&k, a).unwrap();
            let r = classify_general(&e).unwrap();
            let c = check_point(&r, &e, &CurvePoint::from_ints(&k, x, y)).unwrap();
            c.human(&r)
        };
        assert_eq!(check(2, 12, [0, 0, 0, 0, -2], 3, 5), "in E_0, level 0, infinite order (group is Z_2)");
        assert_eq!(check(3, 12, [0, 0, 0, 0, 3], 1, 2), "in E_0, level 0, infinite order (group is Z_3)");
        assert_eq!(check(7, 12, [7, 0, -28, 7, -35], 2, 1), "in E_0, level 0, 7-torsion");
        assert_eq!(check(2, 12, [0, 0, 2, 0, -2], 1, -1), "in E_0, level 0, 2-torsion");
        for x in [0, 2, 4] {
            assert_eq!(check(2, 24, [0, -6, 0, 8, 0], x, 0), "not in E_0 (reduces to singular point)");
        }
    }
}
