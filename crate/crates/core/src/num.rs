//! Scalar abstraction shared by every numerical module.
//!
//! Everything in the crate is written against [`Real`], so the same code runs
//! in `f32` for quick sweeps and `f64` for the claim checks. Tolerances that
//! are quoted as absolute `f64` numbers go through [`tol`], which never lets a
//! threshold drop below what the scalar type can resolve.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a [`Real`] scalar.
pub type C<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Real>(x: usize) -> T {
    T::from_usize(x).expect("count representable in scalar type")
}

/// Absolute tolerance `requested`, floored at a few hundred ulps of `T`.
#[inline]
pub fn tol<T: Real>(requested: f64) -> T {
    let floor = T::epsilon() * lit(256.0);
    let t = lit::<T>(requested);
    if t > floor {
        t
    } else {
        floor
    }
}

#[inline]
pub fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub fn creal<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Complex number with independent standard normal parts.
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(lit(re), lit(im))
}

/// Canonical representative of an angle in `(-pi, pi]`.
pub fn wrap_angle<T: Real>(theta: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut r = theta % two_pi;
    if r <= -T::PI() {
        r += two_pi;
    } else if r > T::PI() {
        r -= two_pi;
    }
    r
}

/// `true` when `theta` is congruent to zero modulo `2 pi` within `eps`.
pub fn is_zero_mod_2pi<T: Real>(theta: T, eps: T) -> bool {
    wrap_angle(theta).abs() <= eps
}
