//! Integral Weierstrass models Y^2 + a1 XY + a3 Y = X^3 + a2 X^2 + a4 X + a6
//! over O_K and their points over K.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formal_group::{eval_at, w_series, TailBound};
use crate::local_field::{KElement, LocalField, LocalRing, OElement};
use crate::residue_field::FFElement;
use crate::ring::Coeffs;

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassCurve {
    field: Arc<LocalField>,
    a: Coeffs<OElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    Good,
    SplitNode,
    NonsplitNode,
    Cusp,
}

impl ReductionKind {
    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::Good => "good",
            ReductionKind::SplitNode => "multiplicative (split node)",
            ReductionKind::NonsplitNode => "multiplicative (nonsplit node)",
            ReductionKind::Cusp => "additive (cusp)",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionType {
    pub kind: ReductionKind,
    /// The singular point of the special fiber, when there is one.
    pub singular_point: Option<(FFElement, FFElement)>,
}

impl ReductionType {
    pub fn is_additive(&self) -> bool {
        self.kind == ReductionKind::Cusp
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self.kind, ReductionKind::SplitNode | ReductionKind::NonsplitNode)
    }
}

/// The change of variables x = x' + r, y = y' + s x' + t.
#[derive(Clone, Debug, PartialEq)]
pub struct Transform {
    pub r: OElement,
    pub s: OElement,
    pub t: OElement,
}

impl Transform {
    pub fn identity(field: &Arc<LocalField>) -> Self {
        Transform {
            r: field.zero(),
            s: field.zero(),
            t: field.zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.t.is_zero()
    }

    /// Coefficients of the transformed model.
    pub fn apply_to_coeffs(&self, a: &Coeffs<OElement>) -> Coeffs<OElement> {
        let [a1, a2, a3, a4, a6] = a;
        let (r, s, t) = (&self.r, &self.s, &self.t);
        let n1 = a1.add(&s.mul_int(2));
        let n2 = a2.sub(&s.mul(a1)).add(&r.mul_int(3)).sub(&s.mul(s));
        let n3 = a3.add(&r.mul(a1)).add(&t.mul_int(2));
        let n4 = a4
            .sub(&s.mul(a3))
            .add(&r.mul(a2).mul_int(2))
            .sub(&t.add(&r.mul(s)).mul(a1))
            .add(&r.mul(r).mul_int(3))
            .sub(&s.mul(t).mul_int(2));
        let n6 = a6
            .add(&r.mul(a4))
            .add(&r.mul(r).mul(a2))
            .add(&r.mul(r).mul(r))
            .sub(&t.mul(a3))
            .sub(&t.mul(t))
            .sub(&r.mul(t).mul(a1));
        [n1, n2, n3, n4, n6]
    }

    /// Image of a point of the original model on the transformed one.
    pub fn forward(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let x1 = x.sub(&self.r.to_k());
                let y1 = y.sub(&self.s.to_k().mul(&x1)).sub(&self.t.to_k());
                CurvePoint::Affine { x: x1, y: y1 }
            }
        }
    }

    pub fn backward(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let x0 = x.add(&self.r.to_k());
                let y0 = y.add(&self.s.to_k().mul(x)).add(&self.t.to_k());
                CurvePoint::Affine { x: x0, y: y0 }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"r": self.r.to_json(), "s": self.s.to_json(), "t": self.t.to_json()})
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X -> X + ({}), Y -> Y + ({})*X + ({})", self.r, self.s, self.t)
    }
}

#[derive(Clone, PartialEq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: KElement, y: KElement },
}

impl CurvePoint {
    pub fn affine(x: KElement, y: KElement) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn from_ints(field: &Arc<LocalField>, x: i64, y: i64) -> Self {
        CurvePoint::Affine {
            x: KElement::from_int(field, x),
            y: KElement::from_int(field, y),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn to_json(&self) -> Value {
        match self {
            CurvePoint::Infinity => json!("infinity"),
            CurvePoint::Affine { x, y } => json!({"x": x.to_json(), "y": y.to_json()}),
        }
    }

    /// Equality at the working precision of the coordinates.
    pub fn eq_at_precision(&self, o: &CurvePoint) -> bool {
        match (self, o) {
            (CurvePoint::Infinity, CurvePoint::Infinity) => true,
            (CurvePoint::Affine { x, y }, CurvePoint::Affine { x: u, y: v }) => {
                x.eq_at_precision(u) && y.eq_at_precision(v)
            }
            _ => false,
        }
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "infinity"),
            CurvePoint::Affine { x, y } => write!(f, "({x:?}, {y:?})"),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "infinity"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// A point of the special fiber in projective coordinates (X : Y : Z).
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedPoint {
    pub coords: [FFElement; 3],
}

impl fmt::Display for ReducedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.coords;
        write!(f, "({x} : {y} : {z})")
    }
}

impl WeierstrassCurve {
    /// A curve with integral coefficients and nonzero discriminant at
    /// precision.
    pub fn new(a: Coeffs<OElement>) -> Result<Self> {
        let field = a[0].field().clone();
        let curve = WeierstrassCurve { field, a };
        if curve.discriminant().is_zero() {
            return Err(Error::ZeroDiscriminant);
        }
        Ok(curve)
    }

    pub fn from_ints(field: &Arc<LocalField>, a: [i64; 5]) -> Result<Self> {
        WeierstrassCurve::new(a.map(|c| field.from_int(c)))
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }

    pub fn a(&self) -> &Coeffs<OElement> {
        &self.a
    }

    pub fn a_k(&self) -> Coeffs<KElement> {
        std::array::from_fn(|i| self.a[i].to_k())
    }

    pub fn b2(&self) -> OElement {
        let [a1, a2, ..] = &self.a;
        a1.mul(a1).add(&a2.mul_int(4))
    }

    pub fn b4(&self) -> OElement {
        let [a1, _, a3, a4, _] = &self.a;
        a4.mul_int(2).add(&a1.mul(a3))
    }

    pub fn b6(&self) -> OElement {
        let [_, _, a3, _, a6] = &self.a;
        a3.mul(a3).add(&a6.mul_int(4))
    }

    pub fn b8(&self) -> OElement {
        let [a1, a2, a3, a4, a6] = &self.a;
        a1.mul(a1)
            .mul(a6)
            .add(&a2.mul(a6).mul_int(4))
            .sub(&a1.mul(a3).mul(a4))
            .add(&a2.mul(a3).mul(a3))
            .sub(&a4.mul(a4))
    }

    pub fn c4(&self) -> OElement {
        let b2 = self.b2();
        b2.mul(&b2).sub(&self.b4().mul_int(24))
    }

    pub fn c6(&self) -> OElement {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        b2.mul(&b2).mul(&b2).neg().add(&b2.mul(&b4).mul_int(36)).sub(&b6.mul_int(216))
    }

    pub fn discriminant(&self) -> OElement {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        b2.mul(&b2)
            .mul(&b8)
            .neg()
            .sub(&b4.mul(&b4).mul(&b4).mul_int(8))
            .sub(&b6.mul(&b6).mul_int(27))
            .add(&b2.mul(&b4).mul(&b6).mul_int(9))
    }

    /// All a_i lie in the maximal ideal.
    pub fn is_normalized(&self) -> bool {
        self.a.iter().all(|x| x.valuation_bound() >= 1)
    }

    fn reduced_coeffs(&self) -> [FFElement; 5] {
        std::array::from_fn(|i| self.a[i].reduce())
    }

    /// Singular points of the special fiber (affine part; the point at
    /// infinity is always smooth).
    fn singular_points(&self) -> Vec<(FFElement, FFElement)> {
        let k = self.field.residue();
        let [a1, a2, a3, a4, a6] = self.reduced_coeffs();
        let p = k.p();
        let two = k.from_u64(2);
        let three = k.from_u64(3);
        let eq = |x: &FFElement, y: &FFElement| {
            // y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6
            let lhs = y.mul(y).add(&a1.mul(x).mul(y)).add(&a3.mul(y));
            let rhs = x.mul(x).mul(x).add(&a2.mul(x).mul(x)).add(&a4.mul(x)).add(&a6);
            lhs.sub(&rhs)
        };
        let dx = |x: &FFElement, y: &FFElement| {
            a1.mul(y).sub(&three.mul(x).mul(x)).sub(&two.mul(&a2).mul(x)).sub(&a4)
        };
        let dy = |x: &FFElement, y: &FFElement| two.mul(y).add(&a1.mul(x)).add(&a3);
        let mut out = Vec::new();
        for x in k.elements() {
            let candidates: Vec<FFElement> = if p != 2 {
                // 2y + a1 x + a3 = 0
                let inv2 = two.inv().unwrap();
                vec![a1.mul(&x).add(&a3).neg().mul(&inv2)]
            } else if !a1.is_zero() {
                // a1 y + x^2 + a4 = 0 in characteristic 2
                vec![x.mul(&x).add(&a4).mul(&a1.inv().unwrap())]
            } else {
                // y^2 = x^3 + a2 x^2 + a4 x + a6 - a3 y with a3 forced to 0;
                // squaring is bijective on k, so take the unique root
                let rhs = x.mul(&x).mul(&x).add(&a2.mul(&x).mul(&x)).add(&a4.mul(&x)).add(&a6);
                let q = k.order();
                vec![rhs.pow(q / 2)]
            };
            for y in candidates {
                if eq(&x, &y).is_zero() && dx(&x, &y).is_zero() && dy(&x, &y).is_zero() {
                    out.push((x.clone(), y));
                }
            }
        }
        out
    }

    /// Reduction type of this model (no minimal model search).
    pub fn reduction_type(&self) -> Result<ReductionType> {
        let disc = self.discriminant();
        match disc.valuation() {
            None => return Err(Error::ZeroDiscriminant),
            Some(0) => {
                return Ok(ReductionType {
                    kind: ReductionKind::Good,
                    singular_point: None,
                })
            }
            Some(_) => {}
        }
        let sing = self.singular_points();
        if sing.len() != 1 {
            return Err(Error::Inconsistency(format!(
                "special fiber has {} singular points, expected exactly one",
                sing.len()
            )));
        }
        let (x0, y0) = sing.into_iter().next().unwrap();
        // tangent cone at the singular point: t^2 + a1 t - (3 x0 + a2) in the slope t
        let k = self.field.residue();
        let [a1, a2, ..] = self.reduced_coeffs();
        let c = k.from_u64(3).mul(&x0).add(&a2);
        let roots = k
            .elements()
            .filter(|t| t.mul(t).add(&a1.mul(t)).sub(&c).is_zero())
            .count();
        let kind = match roots {
            2 => ReductionKind::SplitNode,
            1 => ReductionKind::Cusp,
            _ => ReductionKind::NonsplitNode,
        };
        Ok(ReductionType {
            kind,
            singular_point: Some((x0, y0)),
        })
    }

    /// The same curve after the change of variables.
    pub fn transform(&self, t: &Transform) -> Result<WeierstrassCurve> {
        WeierstrassCurve::new(t.apply_to_coeffs(&self.a))
    }

    /// Move the cusp to the origin with horizontal tangent so that all a_i
    /// lie in m_K.
    pub fn normalize_additive(&self) -> Result<(WeierstrassCurve, Transform)> {
        let red = self.reduction_type()?;
        if !red.is_additive() {
            return Err(Error::WrongReductionType(red.kind.name().into()));
        }
        let (x0, y0) = red.singular_point.unwrap();
        let k = self.field.residue();
        let [a1, a2, ..] = self.reduced_coeffs();
        let c = k.from_u64(3).mul(&x0).add(&a2);
        let slope = k
            .elements()
            .find(|t| t.mul(t).add(&a1.mul(t)).sub(&c).is_zero())
            .expect("cusp has a tangent slope");
        let tr = Transform {
            r: self.field.lift(&x0),
            s: self.field.lift(&slope),
            t: self.field.lift(&y0),
        };
        let out = self.transform(&tr)?;
        if !out.is_normalized() {
            return Err(Error::Inconsistency("normalization left a unit coefficient".into()));
        }
        Ok((out, tr))
    }

    /// Left side minus right side of the equation at (x, y).
    pub fn residual(&self, x: &KElement, y: &KElement) -> KElement {
        let [a1, a2, a3, a4, a6] = self.a_k();
        let lhs = y.mul(y).add(&a1.mul(x).mul(y)).add(&a3.mul(y));
        let rhs = x.mul(x).mul(x).add(&a2.mul(x).mul(x)).add(&a4.mul(x)).add(&a6);
        lhs.sub(&rhs)
    }

    pub fn check_on_curve(&self, p: &CurvePoint) -> Result<()> {
        if let CurvePoint::Affine { x, y } = p {
            let r = self.residual(x, y);
            if !r.is_zero() {
                return Err(Error::NotOnCurve(format!(
                    "residual has valuation {} (coordinates known to m^{})",
                    r.valuation_bound(),
                    x.abs_precision().min(y.abs_precision())
                )));
            }
        }
        Ok(())
    }

    pub fn is_on_curve(&self, p: &CurvePoint) -> bool {
        self.check_on_curve(p).is_ok()
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let [a1, _, a3, _, _] = self.a_k();
                CurvePoint::Affine {
                    x: x.clone(),
                    y: y.neg().sub(&a1.mul(x)).sub(&a3),
                }
            }
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return Ok(q.clone()),
            (_, CurvePoint::Infinity) => return Ok(p.clone()),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = self.a_k();
        let (lambda, nu) = if x1.eq_at_precision(x2) {
            if y1.add(y2).add(&a1.mul(x2)).add(&a3).is_zero() {
                return Ok(CurvePoint::Infinity);
            }
            if !y1.eq_at_precision(y2) {
                return Err(Error::PrecisionExhausted(
                    "points agree in x but neither y nor -y matches".into(),
                ));
            }
            let den = y1.mul_int(2).add(&a1.mul(x1)).add(&a3);
            let num_l = x1.mul(x1).mul_int(3).add(&a2.mul(x1).mul_int(2)).add(&a4).sub(&a1.mul(y1));
            let num_n = x1.mul(x1).mul(x1).neg().add(&a4.mul(x1)).add(&a6.mul_int(2)).sub(&a3.mul(y1));
            (num_l.div(&den)?, num_n.div(&den)?)
        } else {
            let dx = x2.sub(x1);
            let lambda = y2.sub(y1).div(&dx)?;
            let nu = y1.mul(x2).sub(&y2.mul(x1)).div(&dx)?;
            (lambda, nu)
        };
        let x3 = lambda.mul(&lambda).add(&a1.mul(&lambda)).sub(&a2).sub(x1).sub(x2);
        let y3 = lambda.add(&a1).mul(&x3).neg().sub(&nu).sub(&a3);
        Ok(CurvePoint::Affine { x: x3, y: y3 })
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.add(p, &self.neg(q))
    }

    /// [m]P by double-and-add.
    pub fn mul(&self, m: i64, p: &CurvePoint) -> Result<CurvePoint> {
        let base = if m < 0 { self.neg(p) } else { p.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &b)?;
            }
            k >>= 1;
            if k > 0 {
                b = self.add(&b, &b)?;
            }
        }
        Ok(acc)
    }

    /// Reduction of the canonical projective representative, and whether it
    /// is a smooth point of the special fiber.
    pub fn reduce_point(&self, p: &CurvePoint) -> Result<(ReducedPoint, bool)> {
        let k = self.field.residue();
        let (x, y) = match p {
            CurvePoint::Infinity => {
                return Ok((
                    ReducedPoint {
                        coords: [k.zero(), k.one(), k.zero()],
                    },
                    true,
                ))
            }
            CurvePoint::Affine { x, y } => (x, y),
        };
        let one = KElement::one(&self.field);
        let coords = [x.clone(), y.clone(), one];
        let vmin = coords.iter().map(|c| c.valuation_bound()).min().unwrap();
        let scale = KElement::one(&self.field).shifted(-vmin);
        let red: Vec<FFElement> = coords
            .iter()
            .map(|c| -> Result<FFElement> {
                let v = c.mul(&scale);
                if v.is_zero() {
                    return Ok(k.zero());
                }
                // divide by the first coordinate of minimal valuation
                Ok(v.to_o()?.reduce())
            })
            .collect::<Result<_>>()?;
        // the coordinate of minimal valuation is a unit times pi^vmin; rescale
        // so that it is 1 in the residue field
        let lead = coords
            .iter()
            .position(|c| c.valuation_bound() == vmin)
            .unwrap();
        let inv = red[lead].inv().ok_or(Error::NotInvertible)?;
        let red: [FFElement; 3] = std::array::from_fn(|i| red[i].mul(&inv));
        let smooth = if red[2].is_zero() {
            true
        } else {
            let zi = red[2].inv().unwrap();
            let (xr, yr) = (red[0].mul(&zi), red[1].mul(&zi));
            !self.singular_points().iter().any(|(sx, sy)| *sx == xr && *sy == yr)
        };
        Ok((ReducedPoint { coords: red }, smooth))
    }

    pub fn in_e0(&self, p: &CurvePoint) -> Result<bool> {
        Ok(self.reduce_point(p)?.1)
    }

    /// Largest i with P in E_i(K); None for the point at infinity.
    pub fn filtration_level(&self, p: &CurvePoint) -> Result<Option<i64>> {
        let (x, y) = match p {
            CurvePoint::Infinity => return Ok(None),
            CurvePoint::Affine { x, y } => (x, y),
        };
        if !self.in_e0(p)? {
            return Err(Error::NotInE0);
        }
        let vx = x.valuation_bound();
        if vx >= 0 {
            return Ok(Some(0));
        }
        let vy = y.valuation_bound();
        if vx % 2 != 0 || 2 * vy != 3 * vx {
            return Err(Error::FiltrationMismatch { vx, vy });
        }
        Ok(Some(-vx / 2))
    }

    fn require_e0(&self, p: &CurvePoint) -> Result<()> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized);
        }
        if !self.in_e0(p)? {
            return Err(Error::NotInE0);
        }
        Ok(())
    }

    /// The parameter -x/y of a point of E_0(K), in O_K.
    pub fn psi(&self, p: &CurvePoint) -> Result<OElement> {
        self.require_e0(p)?;
        match p {
            CurvePoint::Infinity => Ok(self.field.zero()),
            CurvePoint::Affine { x, y } => x.div(y)?.neg().to_o(),
        }
    }

    /// Image in the additive group of the residue field.
    pub fn smooth_component_map(&self, p: &CurvePoint) -> Result<FFElement> {
        Ok(self.psi(p)?.reduce())
    }

    /// The point with parameter z in O_K: x = z/w(z), y = -1/w(z), computed
    /// to precision `target`. Requires a normalized model.
    pub fn point_from_parameter(&self, z: &OElement, target: i64) -> Result<CurvePoint> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized);
        }
        if z.is_zero() {
            return Ok(CurvePoint::Infinity);
        }
        let bound = TailBound {
            weight_shift: 3,
            coeff_valuation: 1,
        };
        let vz = z.valuation_bound();
        // w(z) = z^3 u with u a unit; relative precision target needs
        // absolute precision target + 3 v(z)
        let abs = target + 3 * vz;
        let d = bound.degree_for(abs, vz);
        let w = w_series(&LocalRing(self.field.clone()), &self.a, d);
        let wz = eval_at(&w, z, abs.min(self.field.precision()), bound)?.to_k();
        let inv = wz.inv()?;
        let x = z.to_k().mul(&inv);
        let y = inv.neg();
        Ok(CurvePoint::Affine { x, y })
    }

    pub fn to_json(&self) -> Value {
        json!({"a": self.a.iter().map(|c| c.to_json()).collect::<Vec<_>>()})
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        let term = |c: &OElement, mono: &str| -> Option<String> {
            if c.is_zero() {
                return None;
            }
            let s = c.to_string();
            Some(match (s.as_str(), mono) {
                (_, "") => s,
                ("1", _) => mono.to_string(),
                ("-1", _) => format!("-{mono}"),
                _ if s.contains(' ') => format!("({s})*{mono}"),
                _ => format!("{s}*{mono}"),
            })
        };
        let join = |parts: Vec<Option<String>>| {
            let parts: Vec<String> = parts.into_iter().flatten().collect();
            let mut out = String::new();
            for (i, t) in parts.iter().enumerate() {
                if i == 0 {
                    out.push_str(t);
                } else if let Some(rest) = t.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(rest);
                } else {
                    out.push_str(" + ");
                    out.push_str(t);
                }
            }
            out
        };
        let lhs = join(vec![Some("Y^2".into()), term(a1, "X*Y"), term(a3, "Y")]);
        let rhs = join(vec![Some("X^3".into()), term(a2, "X^2"), term(a4, "X"), term(a6, "")]);
        write!(f, "{lhs} = {rhs}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::FieldSpec;
    use num_bigint::BigInt;

    fn qp(p: u64) -> Arc<LocalField> {
        LocalField::new(p, &FieldSpec::Unramified { n: 1, poly: None }, None).unwrap()
    }

    fn qp_prec(p: u64, m: i64) -> Arc<LocalField> {
        LocalField::new(p, &FieldSpec::Unramified { n: 1, poly: None }, Some(m)).unwrap()
    }

    fn curve(k: &Arc<LocalField>, a: [i64; 5]) -> WeierstrassCurve {
        WeierstrassCurve::from_ints(k, a).unwrap()
    }

    #[test]
    fn reduction_types() {
        let e9 = curve(&qp(2), [0, 0, 0, 0, -2]);
        assert_eq!(e9.reduction_type().unwrap().kind, ReductionKind::Cusp);
        let good = curve(&qp(3), [0, 0, 0, 1, 0]);
        assert_eq!(good.discriminant().balanced_coeffs()[0], BigInt::from(-64));
        assert_eq!(good.reduction_type().unwrap().kind, ReductionKind::Good);
        // Y^2 = X^3 + X^2 is singular over Q itself; adding p keeps the special fiber
        assert!(matches!(
            WeierstrassCurve::from_ints(&qp(5), [0, 1, 0, 0, 0]),
            Err(Error::ZeroDiscriminant)
        ));
        let node = curve(&qp(5), [0, 1, 0, 0, 5]);
        let r = node.reduction_type().unwrap();
        assert_eq!(r.kind, ReductionKind::SplitNode);
        assert!(r.is_multiplicative());
        let (x0, y0) = r.singular_point.unwrap();
        assert!(x0.is_zero() && y0.is_zero());
        // tangent slopes of Y^2 = X^3 + 2X^2 are square roots of 2
        let nonsplit = curve(&qp(5), [0, 2, 0, 0, 5]);
        assert_eq!(nonsplit.reduction_type().unwrap().kind, ReductionKind::NonsplitNode);
        assert!(matches!(
            WeierstrassCurve::from_ints(&qp(5), [0; 5]),
            Err(Error::ZeroDiscriminant)
        ));
    }

    #[test]
    fn invariant_relations() {
        let k = qp(7);
        let e = curve(&k, [7, 0, -28, 7, -35]);
        let (b2, b4, b6, b8) = (e.b2(), e.b4(), e.b6(), e.b8());
        assert!(b8.mul_int(4).eq_at_precision(&b2.mul(&b6).sub(&b4.mul(&b4))));
        let c4 = e.c4();
        let c6 = e.c6();
        let lhs = e.discriminant().mul_int(1728);
        assert!(lhs.eq_at_precision(&c4.mul(&c4).mul(&c4).sub(&c6.mul(&c6))));
    }

    #[test]
    fn normalization_examples() {
        // the discriminant 2^12 needs more than the default precision
        assert!(matches!(
            WeierstrassCurve::from_ints(&qp(2), [0, -6, 0, 8, 0]),
            Err(Error::ZeroDiscriminant)
        ));
        let k = qp_prec(2, 24);
        let e8 = curve(&k, [0, -6, 0, 8, 0]);
        let (n, t) = e8.normalize_additive().unwrap();
        assert!(t.is_identity());
        assert_eq!(n, e8);
        let k3 = qp(3);
        let e = curve(&k3, [0, 3, 0, 3, 4]);
        let (n, t) = e.normalize_additive().unwrap();
        assert_eq!(t.r, k3.from_int(-1));
        assert!(t.s.is_zero() && t.t.is_zero());
        assert_eq!(n, curve(&k3, [0, 0, 0, 0, 3]));
        let e3 = curve(&k3, [0, -3, 0, 3, 0]);
        assert!(e3.normalize_additive().unwrap().1.is_identity());
        let good = curve(&k3, [0, 0, 0, 1, 0]);
        assert!(matches!(good.normalize_additive(), Err(Error::WrongReductionType(_))));
    }

    #[test]
    fn normalization_with_shear() {
        // Y^2 = X^3 + 3 moved by (r, s, t) = (1, 1, 1): the cusp sits away
        // from the origin with a nonzero tangent slope
        let k = qp(3);
        let e = curve(&k, [2, 2, 2, 1, 3]);
        let red = e.reduction_type().unwrap();
        assert!(red.is_additive(), "{:?}", red);
        let (n, t) = e.normalize_additive().unwrap();
        assert!(n.is_normalized());
        assert!(!t.s.is_zero());
        // points move back and forth
        let z = k.from_int(3);
        let p = n.point_from_parameter(&z, 10).unwrap();
        let q = t.backward(&p);
        assert!(e.is_on_curve(&q));
        assert!(t.forward(&q).eq_at_precision(&p));
    }

    #[test]
    fn torsion_points() {
        let q2 = qp(2);
        let e2 = curve(&q2, [0, 0, 2, 0, -2]);
        let p = CurvePoint::from_ints(&q2, 1, -1);
        assert!(e2.is_on_curve(&p));
        assert!(e2.mul(2, &p).unwrap().is_infinity());
        let q7 = qp(7);
        let e7 = curve(&q7, [7, 0, -28, 7, -35]);
        let p = CurvePoint::from_ints(&q7, 2, 1);
        assert!(e7.mul(7, &p).unwrap().is_infinity());
        assert!(!e7.mul(1, &p).unwrap().is_infinity());
        let q3 = qp(3);
        let e3 = curve(&q3, [0, -3, 0, 3, 0]);
        let p = CurvePoint::from_ints(&q3, 1, 1);
        assert!(e3.mul(3, &p).unwrap().is_infinity());
        assert!(e3.add(&p, &CurvePoint::Infinity).unwrap().eq_at_precision(&p));
    }

    #[test]
    fn reduction_of_points() {
        let q2 = qp_prec(2, 24);
        let e8 = curve(&q2, [0, -6, 0, 8, 0]);
        let (r, smooth) = e8.reduce_point(&CurvePoint::from_ints(&q2, 0, 0)).unwrap();
        assert!(!smooth);
        assert!(r.coords[0].is_zero() && r.coords[1].is_zero() && r.coords[2].is_one());
        let (r, smooth) = e8.reduce_point(&CurvePoint::Infinity).unwrap();
        assert!(smooth && r.coords[1].is_one());
        let e9 = curve(&q2, [0, 0, 0, 0, -2]);
        assert!(e9.reduce_point(&CurvePoint::from_ints(&q2, 3, 5)).unwrap().1);
        assert!(matches!(
            e8.filtration_level(&CurvePoint::from_ints(&q2, 2, 0)),
            Err(Error::NotInE0)
        ));
    }

    #[test]
    fn filtration_and_psi() {
        let q2 = qp(2);
        let e2 = curve(&q2, [0, 0, 2, 0, -2]);
        let p = CurvePoint::from_ints(&q2, 1, -1);
        assert_eq!(e2.filtration_level(&p).unwrap(), Some(0));
        assert_eq!(e2.filtration_level(&CurvePoint::Infinity).unwrap(), None);
        assert_eq!(e2.psi(&p).unwrap(), q2.one());
        assert!(e2.smooth_component_map(&p).unwrap().is_one());
        assert!(e2.psi(&CurvePoint::Infinity).unwrap().is_zero());
        let q7 = qp(7);
        let e7 = curve(&q7, [7, 0, -28, 7, -35]);
        assert_eq!(e7.psi(&CurvePoint::from_ints(&q7, 2, 1)).unwrap(), q7.from_int(-2));
        // a point of level 2 over Q_2: parameter of valuation 2
        let z = q2.from_int(4);
        let p = e2.point_from_parameter(&z, 10).unwrap();
        assert!(e2.is_on_curve(&p));
        if let CurvePoint::Affine { x, y } = &p {
            assert_eq!(x.valuation().unwrap(), -4);
            assert_eq!(y.valuation().unwrap(), -6);
        }
        assert_eq!(e2.filtration_level(&p).unwrap(), Some(2));
        assert!(e2.smooth_component_map(&p).unwrap().is_zero());
        assert!(e2.psi(&p).unwrap().eq_at_precision(&z.truncate(10)));
    }
}
