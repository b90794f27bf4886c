use std::sync::Arc;

use e0_core::classifier::{classify_general, ramified_g_map};
use e0_core::curve::WeierstrassCurve;
use e0_core::local_field::{FieldSpec, LocalField};
use e0_core::oracle::{self, FiniteModel};
use e0_core::random::random_normalized_curve;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn qp(p: u64, m: i64) -> Arc<LocalField> {
    LocalField::new(p, &FieldSpec::Unramified { n: 1, poly: None }, Some(m)).unwrap()
}

fn examples() -> Vec<(&'static str, WeierstrassCurve)> {
    let mk = |p, a| WeierstrassCurve::from_ints(&qp(p, 24), a).unwrap();
    vec![
        ("E_2", mk(2, [0, 0, 2, 0, -2])),
        ("E_3", mk(3, [0, -3, 0, 3, 0])),
        ("E_5", mk(5, [0, 20, -5, -15, 0])),
        ("E_7", mk(7, [7, 0, -28, 7, -35])),
        ("E_8", mk(2, [0, -6, 0, 8, 0])),
        ("E_9", mk(2, [0, 0, 0, 0, -2])),
        ("E_10", mk(3, [0, 0, 0, 0, 3])),
    ]
}

#[test]
fn p_rank_is_stable_for_levels_three_to_six() {
    for (name, e) in examples() {
        let r = classify_general(&e).unwrap();
        let expected = (r.structure.free_rank + r.structure.torsion_rank()) as u32;
        for level in 3..=6 {
            let model = FiniteModel::with_bound(&e, level, 1 << 20).unwrap();
            assert_eq!(model.p_rank().unwrap(), expected, "{name} at level {level}");
        }
    }
}

#[test]
fn torsion_witness_counts() {
    // over Q_p the free part contributes one factor of p to the p-kernel of
    // the quotient, the torsion another
    for (name, e) in examples() {
        let r = classify_general(&e).unwrap();
        let p = e.field().p() as u128;
        let level = 4.min(oracle::default_level(e.field()).max(3));
        let v = oracle::compare_with_bound(&r, level, 1 << 20).unwrap();
        let expected = if r.structure.is_torsion_free() { p } else { p * p };
        assert_eq!(v.kernel_size, expected, "{name}");
        assert!(v.pass);
    }
}

#[test]
fn levels_below_the_minimum_are_refused() {
    let e = WeierstrassCurve::from_ints(&qp(2, 12), [0, 0, 2, 0, -2]).unwrap();
    let r = classify_general(&e).unwrap();
    assert_eq!(oracle::minimal_level(e.field()), 2);
    assert!(oracle::compare(&r, 1).is_err());
}

#[test]
fn ramified_odd_p_agrees_with_the_quotient() {
    let poly = vec![(-5).into(), 0.into(), 1.into()];
    let field = LocalField::new(5, &FieldSpec::Eisenstein { poly }, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for i in 0..12 {
        let e = random_normalized_curve(&field, &mut rng);
        let r = classify_general(&e).unwrap();
        assert!(!r.certified);
        let map = ramified_g_map(&e).unwrap();
        assert_eq!(map.coords.len(), 2);
        assert_eq!(r.structure.torsion_rank(), map.splitting.kernel_dimension, "#{i}");
        assert_eq!(r.evidence["oracle"]["agrees"], true, "#{i} {e}");
    }
}

#[test]
fn fast_path_over_large_primes() {
    for (p, c) in [(17u64, -17i64), (19, 19), (23, -23)] {
        let poly = vec![c.into(), 0.into(), 1.into()];
        let field = LocalField::new(p, &FieldSpec::Eisenstein { poly }, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let e = random_normalized_curve(&field, &mut rng);
        let r = classify_general(&e).unwrap();
        assert!(r.certified);
        assert_eq!(r.method.as_str(), "fast-path");
        assert_eq!(r.structure.free_rank, 2);
        assert!(oracle::compare(&r, 3).unwrap().pass);
    }
}
