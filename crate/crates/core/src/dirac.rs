//! Continuum reference for the walker: the one-dimensional Dirac equation
//! `i d/dt psi = H psi` with `H = -i sigma_z d/dx - g 2m sigma_y`,
//! solved exactly in Fourier space. The derivative sign makes `psi+` move
//! to the right, as the walker's right movers do.

use crate::dual::{walk, Gauge, WalkerBoundary, WalkerState};
use crate::error::{GqcaError, Result};
use crate::num::{cis, from_usize, lit, Real, C};
use crate::qca::GateParams;
use num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

/// Fraction of the spectrum (by `|k|`) treated as the unresolved tail.
const TAIL_FRACTION: f64 = 2.0 / 3.0;
/// Largest spectral weight tolerated in the tail.
const TAIL_WEIGHT: f64 = 1e-20;
const MIN_GRID: usize = 8;

/// A two-component spinor on a periodic grid of spacing `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracField<T: Real> {
    pub plus: Vec<C<T>>,
    pub minus: Vec<C<T>>,
    pub h: T,
    pub mass: T,
    pub time: T,
    pub gauge: Gauge,
}

impl<T: Real> DiracField<T> {
    /// Samples `profile(x)` at `x_k = (k - M/2) h`.
    pub fn sample(
        profile: impl Fn(T) -> (C<T>, C<T>),
        points: usize,
        h: T,
        mass: T,
        gauge: Gauge,
    ) -> Self {
        let (plus, minus) = grid(points, h).map(&profile).unzip();
        Self {
            plus,
            minus,
            h,
            mass,
            time: T::zero(),
            gauge,
        }
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    /// `sum |psi|^2 h`
    pub fn norm_sqr(&self) -> T {
        self.plus
            .iter()
            .chain(&self.minus)
            .map(|a| a.norm_sqr())
            .sum::<T>()
            * self.h
    }

    /// Discrete L2 distance `sqrt(sum |a - b|^2 h)`.
    pub fn distance(&self, other: &Self) -> T {
        let s: T = self
            .plus
            .iter()
            .zip(&other.plus)
            .chain(self.minus.iter().zip(&other.minus))
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum();
        (s * self.h).sqrt()
    }
}

fn grid<T: Real>(points: usize, h: T) -> impl Iterator<Item = T> {
    let half = points / 2;
    (0..points).map(move |k| (from_usize::<T>(k) - from_usize::<T>(half)) * h)
}

/// Angular wavenumber of FFT bin `j` on `m` points.
fn wavenumber<T: Real>(j: usize, m: usize, h: T) -> T {
    let signed = if j <= m / 2 {
        j as f64
    } else {
        j as f64 - m as f64
    };
    lit::<T>(std::f64::consts::TAU * signed / m as f64) / h
}

/// Symbol `H(k) = [[k, i g 2m], [-i g 2m, -k]]`.
pub fn dirac_symbol<T: Real>(k: T, mass: T, gauge: Gauge) -> [[C<T>; 2]; 2] {
    let coupling = gauge.sign::<T>() * (mass + mass);
    [
        [
            Complex::new(k, T::zero()),
            Complex::new(T::zero(), coupling),
        ],
        [
            Complex::new(T::zero(), -coupling),
            Complex::new(-k, T::zero()),
        ],
    ]
}

/// `exp(-i H(k) t) = cos(w t) I - i sin(w t)/w H(k)`, `w = sqrt(k^2 + 4m^2)`.
pub fn dirac_propagator<T: Real>(k: T, mass: T, gauge: Gauge, t: T) -> [[C<T>; 2]; 2] {
    let h = dirac_symbol(k, mass, gauge);
    let w = (k * k + lit::<T>(4.0) * mass * mass).sqrt();
    let cos = Complex::new((w * t).cos(), T::zero());
    let sinc = if w == T::zero() { t } else { (w * t).sin() / w };
    let f = Complex::new(T::zero(), -sinc);
    [
        [cos + f * h[0][0], f * h[0][1]],
        [f * h[1][0], cos + f * h[1][1]],
    ]
}

/// Exact evolution of `initial` by time `t`.
pub fn dirac_reference<T: Real + FftNum>(initial: &DiracField<T>, t: T) -> Result<DiracField<T>> {
    let m = initial.len();
    if m < MIN_GRID || initial.minus.len() != m {
        return Err(GqcaError::Resolution(format!(
            "need two components of at least {MIN_GRID} points, got {} and {}",
            m,
            initial.minus.len()
        )));
    }
    let mut planner = FftPlanner::<T>::new();
    let fwd = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    let mut p = initial.plus.clone();
    let mut q = initial.minus.clone();
    fwd.process(&mut p);
    fwd.process(&mut q);

    let total: T = p.iter().chain(&q).map(|a| a.norm_sqr()).sum();
    let k_cut = lit::<T>(TAIL_FRACTION) * T::PI() / initial.h;
    let tail: T = (0..m)
        .filter(|&j| fabs(wavenumber(j, m, initial.h)) > k_cut)
        .map(|j| p[j].norm_sqr() + q[j].norm_sqr())
        .sum();
    if total > T::zero() && tail > lit::<T>(TAIL_WEIGHT) * total {
        return Err(GqcaError::Resolution(format!(
            "{:.3e} of the spectral weight lies above |k| = {:.3}",
            (tail / total).to_f64().unwrap_or(f64::NAN),
            k_cut.to_f64().unwrap_or(f64::NAN)
        )));
    }

    for j in 0..m {
        let u = dirac_propagator(wavenumber(j, m, initial.h), initial.mass, initial.gauge, t);
        let (a, b) = (p[j], q[j]);
        p[j] = u[0][0] * a + u[0][1] * b;
        q[j] = u[1][0] * a + u[1][1] * b;
    }
    inv.process(&mut p);
    inv.process(&mut q);
    let scale = Complex::new(T::one() / from_usize::<T>(m), T::zero());
    p.iter_mut().chain(q.iter_mut()).for_each(|a| *a *= scale);
    Ok(DiracField {
        plus: p,
        minus: q,
        h: initial.h,
        mass: initial.mass,
        time: initial.time + t,
        gauge: initial.gauge,
    })
}

#[inline]
fn fabs<T: Real>(x: T) -> T {
    num_traits::Float::abs(x)
}

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow<T> {
    pub eps: T,
    pub grid_points: usize,
    pub half_steps: usize,
    pub error: T,
}

/// Evolves the walker to `t_final` for each lattice length in `eps_list`
/// and compares with the continuum solution on the same grid (spacing
/// `eps / 2` over a periodic box of length `box_length`). The walker's
/// global phase `e^{i phi}` per half-step is removed before comparing.
pub fn convergence_study<T: Real + FftNum>(
    profile: impl Fn(T) -> (C<T>, C<T>),
    box_length: T,
    mass: T,
    phi: T,
    t_final: T,
    eps_list: &[T],
) -> Result<Vec<ConvergenceRow<T>>> {
    if eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(GqcaError::Stepping(
            "lattice lengths must strictly decrease".into(),
        ));
    }
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        if !(eps > T::zero()) {
            return Err(GqcaError::Stepping(format!(
                "lattice length {eps:?} is not positive"
            )));
        }
        let ratio = t_final / eps;
        let steps = ratio.round();
        if fabs(ratio - steps) > lit::<T>(1e-9) * ratio.max(T::one()) {
            return Err(GqcaError::Stepping(format!(
                "t = {t_final:?} is not a whole number of steps of {eps:?}"
            )));
        }
        let half_steps = 2 * steps.to_usize().unwrap_or(0);
        let h = eps / lit::<T>(2.0);
        let points = (box_length / h).round().to_usize().unwrap_or(0);
        let field = DiracField::sample(&profile, points, h, mass, Gauge::ZeroOne);
        let exact = dirac_reference(&field, t_final)?;
        let w0 = WalkerState::new(
            field.plus.clone(),
            field.minus.clone(),
            Gauge::ZeroOne,
            eps,
            WalkerBoundary::Periodic,
        )?;
        let w = walk(&w0, &GateParams::mass(phi, mass, eps), half_steps)?;
        let w = w.scaled(cis(-phi * from_usize::<T>(half_steps)));
        let approx = DiracField {
            plus: w.plus,
            minus: w.minus,
            ..exact.clone()
        };
        rows.push(ConvergenceRow {
            eps,
            grid_points: points,
            half_steps,
            error: approx.distance(&exact),
        });
    }
    Ok(rows)
}

/// Normalized Gaussian packet `(g, ratio g)` of width `sigma` centred at 0,
/// optionally boosted by momentum `k0`.
pub fn gaussian_profile<T: Real>(sigma: T, k0: T, ratio: C<T>) -> impl Fn(T) -> (C<T>, C<T>) {
    let norm = (T::one() + ratio.norm_sqr()).sqrt() * (sigma * T::PI().sqrt()).sqrt();
    move |x: T| {
        let g = cis(k0 * x) * (-(x * x) / (lit::<T>(2.0) * sigma * sigma)).exp() / norm;
        (g, g * ratio)
    }
}
