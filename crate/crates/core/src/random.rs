//! Seeded generators of test curves.

use std::sync::Arc;

use rand::Rng;

use crate::curve::{Transform, WeierstrassCurve};
use crate::local_field::{LocalField, OElement};

/// A uniform element of m^lo / m^hi, as an exact representative.
pub fn random_in_ideal<G: Rng + ?Sized>(field: &Arc<LocalField>, rng: &mut G, lo: i64, hi: i64) -> OElement {
    let x = field.random(rng, hi - lo).mul_pi_pow(lo);
    field.element(x.coeffs().to_vec(), field.precision())
}

/// A curve with all a_i drawn uniformly from m/m^6, redrawn while the
/// discriminant vanishes at precision.
pub fn random_normalized_curve<G: Rng + ?Sized>(field: &Arc<LocalField>, rng: &mut G) -> WeierstrassCurve {
    loop {
        let a = std::array::from_fn(|_| random_in_ideal(field, rng, 1, 6));
        if let Ok(e) = WeierstrassCurve::new(a) {
            return e;
        }
    }
}

/// A normalized curve moved by a random change of variables with integral
/// r, s, t, so that its cusp is generally not at the origin.
pub fn random_additive_curve<G: Rng + ?Sized>(field: &Arc<LocalField>, rng: &mut G) -> WeierstrassCurve {
    loop {
        let base = random_normalized_curve(field, rng);
        let t = Transform {
            r: random_in_ideal(field, rng, 0, 3),
            s: random_in_ideal(field, rng, 0, 3),
            t: random_in_ideal(field, rng, 0, 3),
        };
        if let Ok(e) = base.transform(&t) {
            return e;
        }
    }
}
