//! Coefficient rings for the series engine.
//!
//! The formal-group algorithms only add, subtract and multiply, so they run
//! unchanged over the generic ring Z[a1,a2,a3,a4,a6], over O_K at finite
//! precision, and over the finite quotients O_K/m^M used by the oracle.

use std::fmt::Debug;

use num_bigint::BigInt;

use crate::error::Result;

pub trait Ring {
    type Elem: Clone + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn mul_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_int(n))
    }
}

/// A ring in which nonzero integers are invertible (possibly with loss of
/// precision).
pub trait QAlgebra: Ring {
    fn div_int(&self, a: &Self::Elem, n: i64) -> Result<Self::Elem>;
}

/// The five Weierstrass coefficients a1, a2, a3, a4, a6 as elements of `R`.
pub type Coeffs<E> = [E; 5];
