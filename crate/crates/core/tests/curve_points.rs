use std::sync::Arc;

use e0_core::curve::{CurvePoint, WeierstrassCurve};
use e0_core::formal_group::{eval2_at, group_law, TailBound};
use e0_core::local_field::{FieldSpec, KElement, LocalField, LocalRing, OElement};
use e0_core::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn qp(p: u64, m: i64) -> Arc<LocalField> {
    LocalField::new(p, &FieldSpec::Unramified { n: 1, poly: None }, Some(m)).unwrap()
}

/// Normalized example curves with additive reduction.
fn examples() -> Vec<WeierstrassCurve> {
    let mk = |p, a| WeierstrassCurve::from_ints(&qp(p, 30), a).unwrap();
    vec![
        mk(2, [0, 0, 2, 0, -2]),
        mk(3, [0, -3, 0, 3, 0]),
        mk(5, [0, 20, -5, -15, 0]),
        mk(7, [7, 0, -28, 7, -35]),
        mk(2, [0, -6, 0, 8, 0]),
        mk(2, [0, 0, 0, 0, -2]),
        mk(3, [0, 0, 0, 0, 3]),
    ]
}

#[test]
fn zeta3_points_on_e2() {
    let k = LocalField::new(2, &FieldSpec::Unramified { n: 2, poly: None }, None).unwrap();
    let e = WeierstrassCurve::from_ints(&k, [0, 0, 2, 0, -2]).unwrap();
    let zeta = k.generator().to_k();
    let m1 = KElement::from_int(&k, -1);
    let zeta2 = zeta.mul(&zeta);
    let torsion = [
        CurvePoint::Infinity,
        CurvePoint::from_ints(&k, 1, -1),
        CurvePoint::affine(zeta.clone(), m1.clone()),
        CurvePoint::affine(zeta2.clone(), m1.clone()),
    ];
    for p in &torsion {
        assert!(e.is_on_curve(p), "{p}");
        assert!(e.mul(2, p).unwrap().is_infinity());
    }
    // (-zeta, -1) gives X^3 = -1, which zeta does not satisfy
    let bad = CurvePoint::affine(zeta.neg(), m1);
    assert!(matches!(e.check_on_curve(&bad), Err(Error::NotOnCurve(_))));
    // the three nontrivial points have distinct images in the residue field
    let images: Vec<_> = torsion[1..].iter().map(|p| e.smooth_component_map(p).unwrap()).collect();
    assert!(images.iter().all(|x| !x.is_zero()));
    assert!(images[0] != images[1] && images[1] != images[2] && images[0] != images[2]);
}

#[test]
fn rational_points_of_examples() {
    let q2 = qp(2, 12);
    let e9 = WeierstrassCurve::from_ints(&q2, [0, 0, 0, 0, -2]).unwrap();
    let p = CurvePoint::from_ints(&q2, 3, 5);
    assert!(e9.is_on_curve(&p));
    assert_eq!(e9.filtration_level(&p).unwrap(), Some(0));
    let q3 = qp(3, 12);
    let e10 = WeierstrassCurve::from_ints(&q3, [0, 0, 0, 0, 3]).unwrap();
    let p = CurvePoint::from_ints(&q3, 1, 2);
    assert!(e10.is_on_curve(&p));
    // psi = -x/y = -1/2
    assert!(e10.psi(&p).unwrap().mul_int(2).eq_at_precision(&q3.from_int(-1)));
    let q7 = qp(7, 12);
    let e7 = WeierstrassCurve::from_ints(&q7, [7, 0, -28, 7, -35]).unwrap();
    assert!(e7.is_on_curve(&CurvePoint::from_ints(&q7, 2, 1)));
    assert!(!e7.is_on_curve(&CurvePoint::from_ints(&q7, 2, 2)));
}

fn random_point(e: &WeierstrassCurve, seed: u64, level: i64) -> (OElement, CurvePoint) {
    let k = e.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = k.random(&mut rng, k.precision());
    if !z.is_unit() {
        z = z.add(&k.one());
    }
    z = z.mul_pi_pow(level);
    let p = e.point_from_parameter(&z, 24).unwrap();
    (z, p)
}

fn tolerate<T>(r: Result<T, Error>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(Error::PrecisionExhausted(_)) | Err(Error::NotInvertible) | Err(Error::ZeroAtPrecision(_)) => None,
        Err(e) => panic!("unexpected error {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parameter_points_lie_on_curve(idx in 0usize..7, seed: u64, level in 0i64..3) {
        let e = &examples()[idx];
        let (z, p) = random_point(e, seed, level);
        prop_assert!(e.is_on_curve(&p));
        prop_assert_eq!(e.filtration_level(&p).unwrap(), Some(level));
        prop_assert!(e.psi(&p).unwrap().eq_at_precision(&z));
    }

    #[test]
    fn group_law_axioms(idx in 0usize..7, s1: u64, s2: u64, s3: u64) {
        let e = &examples()[idx];
        let (_, p) = random_point(e, s1, 0);
        let (_, q) = random_point(e, s2, 0);
        let (_, r) = random_point(e, s3, 1);
        let Some(pq) = tolerate(e.add(&p, &q)) else { return Ok(()); };
        let Some(qp_) = tolerate(e.add(&q, &p)) else { return Ok(()); };
        prop_assert!(pq.eq_at_precision(&qp_));
        prop_assert!(e.is_on_curve(&pq));
        let Some(left) = tolerate(e.add(&pq, &r)) else { return Ok(()); };
        let Some(qr) = tolerate(e.add(&q, &r)) else { return Ok(()); };
        let Some(right) = tolerate(e.add(&p, &qr)) else { return Ok(()); };
        prop_assert!(left.eq_at_precision(&right), "{left} vs {right}");
        let back = e.sub(&pq, &q).unwrap();
        prop_assert!(back.eq_at_precision(&p));
        prop_assert!(e.add(&p, &e.neg(&p)).unwrap().is_infinity());
    }

    #[test]
    fn psi_is_a_homomorphism(idx in 0usize..7, s1: u64, s2: u64, level in 0i64..2) {
        let e = &examples()[idx];
        let (_, p) = random_point(e, s1, level);
        let (_, q) = random_point(e, s2, level);
        let Some(sum) = tolerate(e.add(&p, &q)) else { return Ok(()); };
        let target = if level == 0 { 3 } else { 10 };
        let d = TailBound::GROUP_LAW.degree_for(target, level);
        let f = group_law(&LocalRing(e.field().clone()), e.a(), d);
        let expected = eval2_at(&f, &e.psi(&p).unwrap(), &e.psi(&q).unwrap(), target, TailBound::GROUP_LAW).unwrap();
        let got = e.psi(&sum).unwrap();
        prop_assert!(got.truncate(target).eq_at_precision(&expected), "{got} vs {expected}");
    }
}
