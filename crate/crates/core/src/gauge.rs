//! The general local gate, trajectory phase bookkeeping and the global
//! flip symmetry ("color blindness") of the automaton.
//!
//! For the gate `[[a, b], [-e^{i phi} b*, e^{i phi} a*]]` with
//! `a = s |a| e^{i alpha}`, `b = |b| e^{i beta}`, exchanging the roles of 0
//! and 1 changes the phase picked up by a wall at each update:
//!
//! | transition | phase relative to the `0 | 1` gauge |
//! |------------|-------------------------------------|
//! | `+ -> -`   | `+dphi1`                            |
//! | `- -> +`   | `-dphi1`                            |
//! | `+ -> +`   | `-dphi2`                            |
//! | `- -> -`   | `+dphi2`                            |
//!
//! with `dphi1 = 2 alpha - phi` and `dphi2 = 2 beta - phi + pi`.

use crate::dual::{signal_distribution, Chirality};
use crate::error::{GqcaError, Result};
use crate::linalg::Unitary2;
use crate::num::{czero, is_zero_mod_2pi, tol, wrap_angle, Real};
use crate::qca::{
    apply_layer_with_gate, build_local_gate, flip_state, BoundaryCondition, Capacity, GateParams,
    Parity, PureState,
};
use num_traits::{FromPrimitive, Num};

/// `[[a, b], [-e^{i phi} b*, e^{i phi} a*]]`, `a = s |a| e^{i alpha}`,
/// `b = sqrt(1 - |a|^2) e^{i beta}`.
pub fn general_gate<T: Real>(alpha: T, beta: T, a_mod: T, phi: T, sign: i8) -> Result<Unitary2<T>> {
    if !(T::zero()..=T::one()).contains(&a_mod) {
        return Err(GqcaError::Parameter(format!(
            "|a| = {a_mod:?} outside [0, 1]"
        )));
    }
    build_local_gate(&GateParams::general(alpha, beta, a_mod, phi, sign))
}

/// The mass-form gate rewritten in general coordinates.
pub fn mass_form_as_general<T: Real>(phi: T, mass: T, eps: T) -> GateParams<T> {
    let s = (mass * eps).sin();
    let sign = if s < T::zero() { -1 } else { 1 };
    GateParams::general(phi, phi, s.abs(), wrap_angle(phi + phi - T::PI()), sign)
}

/// `(dphi1, dphi2) = (2 alpha - phi, 2 beta - phi + pi)`, wrapped.
pub fn delta_phases<T: Real>(alpha: T, beta: T, phi: T) -> (T, T) {
    (
        wrap_angle(alpha + alpha - phi),
        wrap_angle(beta + beta - phi + T::PI()),
    )
}

/// Phases of `params` in general coordinates, whichever form they are in.
pub fn gate_angles<T: Real>(params: &GateParams<T>) -> (T, T, T) {
    match *params {
        GateParams::General {
            alpha, beta, phi, ..
        } => (alpha, beta, phi),
        GateParams::Mass { phi, mass, eps } => match mass_form_as_general(phi, mass, eps) {
            GateParams::General {
                alpha, beta, phi, ..
            } => (alpha, beta, phi),
            GateParams::Mass { .. } => unreachable!(),
        },
    }
}

/// Counts for one single-wall trajectory.
///
/// `n_plus` counts `+ -> -` flips, `n_minus` counts `- -> +` flips,
/// `m_plus`/`m_minus` count updates that keep a right/left mover.
/// `displacement` obeys `m+ + n- - m- - n+ = displacement`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseLedger<P> {
    pub dphi1: P,
    pub dphi2: P,
    pub n_plus: u64,
    pub n_minus: u64,
    pub m_plus: u64,
    pub m_minus: u64,
    pub displacement: i64,
    pub initial: Chirality,
    pub last: Chirality,
}

impl<P: Clone> PhaseLedger<P> {
    /// Ledger of the path visiting the given chiralities, one per half-step.
    pub fn from_chiralities(path: &[Chirality], dphi1: P, dphi2: P) -> Result<Self> {
        let (&initial, &last) = match (path.first(), path.last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(GqcaError::Ledger("empty trajectory".into())),
        };
        let mut l = Self {
            dphi1,
            dphi2,
            n_plus: 0,
            n_minus: 0,
            m_plus: 0,
            m_minus: 0,
            displacement: 0,
            initial,
            last,
        };
        for w in path.windows(2) {
            match (w[0], w[1]) {
                (Chirality::Right, Chirality::Left) => l.n_plus += 1,
                (Chirality::Left, Chirality::Right) => l.n_minus += 1,
                (Chirality::Right, Chirality::Right) => l.m_plus += 1,
                (Chirality::Left, Chirality::Left) => l.m_minus += 1,
            }
        }
        l.displacement = l.m_plus as i64 + l.n_minus as i64 - l.m_minus as i64 - l.n_plus as i64;
        Ok(l)
    }

    /// Half-step displacement of the wall: `m+ - m-`.
    pub fn lattice_displacement(&self) -> i64 {
        self.m_plus as i64 - self.m_minus as i64
    }

    pub fn validate(&self) -> Result<()> {
        let flips = self.n_plus as i64 - self.n_minus as i64;
        let expected = match (self.initial, self.last) {
            (Chirality::Right, Chirality::Left) => 1,
            (Chirality::Left, Chirality::Right) => -1,
            _ => 0,
        };
        if flips != expected {
            return Err(GqcaError::Ledger(format!(
                "n+ - n- = {flips} but the endpoints {:?} -> {:?} require {expected}",
                self.initial, self.last
            )));
        }
        let disp =
            self.m_plus as i64 + self.n_minus as i64 - self.m_minus as i64 - self.n_plus as i64;
        if disp != self.displacement {
            return Err(GqcaError::Ledger(format!(
                "m+ + n- - m- - n+ = {disp} but the displacement is {}",
                self.displacement
            )));
        }
        Ok(())
    }
}

/// The phase shift summed along the path and its closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseShift<P> {
    /// `(n+ - n-) dphi1 + (m- - m+) dphi2`
    pub direct: P,
    /// `-displacement dphi2 + (n+ - n-)(dphi1 - dphi2)`
    pub closed_form: P,
}

/// Phase acquired by a single wall relative to its flipped image.
///
/// Generic over the phase type: `f64` radians, or an exact rational in
/// units of `pi` (e.g. `Rational64`).
pub fn trajectory_phase_shift<P>(ledger: &PhaseLedger<P>) -> Result<PhaseShift<P>>
where
    P: Clone + Num + FromPrimitive,
{
    ledger.validate()?;
    let int = |x: i64| P::from_i64(x).expect("count representable in phase type");
    let flips = int(ledger.n_plus as i64 - ledger.n_minus as i64);
    let keeps = int(ledger.m_minus as i64 - ledger.m_plus as i64);
    let direct = flips.clone() * ledger.dphi1.clone() + keeps * ledger.dphi2.clone();
    let closed_form = P::zero() - int(ledger.displacement) * ledger.dphi2.clone()
        + flips * (ledger.dphi1.clone() - ledger.dphi2.clone());
    Ok(PhaseShift {
        direct,
        closed_form,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseCheck<T> {
    pub phase: T,
    pub is_invariant: bool,
}

/// Crossing test: `phase = -(dphi1 + dphi2)` and invariance iff
/// `2(alpha + beta - phi) = 0 (mod 2 pi)`.
pub fn crossing_phase_check<T: Real>(alpha: T, beta: T, phi: T) -> PhaseCheck<T> {
    let (d1, d2) = delta_phases(alpha, beta, phi);
    let two = T::one() + T::one();
    PhaseCheck {
        phase: wrap_angle(-(d1 + d2)),
        is_invariant: is_zero_mod_2pi(two * (alpha + beta - phi), tol(1e-12)),
    }
}

/// Wall-pair test: two adjacent walls that annihilate into an identity
/// event each change chirality, so the pair picks up `2 dphi1` relative to
/// the flipped history. Invariance iff that vanishes mod `2 pi`.
pub fn wall_pair_phase_check<T: Real>(alpha: T, phi: T) -> PhaseCheck<T> {
    let d1 = wrap_angle(alpha + alpha - phi);
    PhaseCheck {
        phase: wrap_angle(d1 + d1),
        is_invariant: is_zero_mod_2pi(d1 + d1, tol(1e-12)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColorBlindnessReport<T> {
    /// Largest difference between the signal distributions of the two runs,
    /// over every half-layer.
    pub signal_deviation: T,
    /// Largest `||A(e)| - |B(not e)||` for the final states.
    pub modulus_deviation: T,
    /// Largest `|A(e) - e^{i theta} B(not e)|` for the best single global
    /// phase `theta`.
    pub phase_deviation: T,
    pub passed: bool,
}

/// Runs `state` and its global flip side by side and compares what can be
/// observed. The boundary of the flipped run is flipped as well.
pub fn verify_color_blindness<T: Real>(
    state: &PureState<T>,
    steps: usize,
    params: &GateParams<T>,
    bc: BoundaryCondition,
) -> Result<ColorBlindnessReport<T>> {
    let gate = build_local_gate(params)?;
    let capacity = Capacity::from_env();
    let mut a = state.clone();
    let mut b = flip_state(state);
    let bcb = bc.flipped();
    let mut signal_deviation = distribution_deviation(&a, &b, bc, bcb);
    for l in 0..2 * steps {
        a = apply_layer_with_gate(&a, Parity::of_layer(l), &gate, bc, capacity)?;
        b = apply_layer_with_gate(&b, Parity::of_layer(l), &gate, bcb, capacity)?;
        signal_deviation = signal_deviation.max(distribution_deviation(&a, &b, bc, bcb));
    }
    let fb = flip_state(&b);
    let mut modulus_deviation = T::zero();
    for (cfg, x) in a.iter().chain(fb.iter()) {
        let d = (a.amplitude(cfg).norm() - fb.amplitude(cfg).norm()).abs();
        modulus_deviation = modulus_deviation.max(d);
        let _ = x;
    }
    let overlap = fb.inner(&a);
    let rot = if overlap == czero() {
        num_complex::Complex::new(T::one(), T::zero())
    } else {
        overlap / overlap.norm()
    };
    let mut phase_deviation = T::zero();
    for (cfg, _) in a.iter().chain(fb.iter()) {
        let d = (a.amplitude(cfg) - rot * fb.amplitude(cfg)).norm();
        phase_deviation = phase_deviation.max(d);
    }
    Ok(ColorBlindnessReport {
        signal_deviation,
        modulus_deviation,
        phase_deviation,
        passed: signal_deviation <= tol(1e-12),
    })
}

fn distribution_deviation<T: Real>(
    a: &PureState<T>,
    b: &PureState<T>,
    bca: BoundaryCondition,
    bcb: BoundaryCondition,
) -> T {
    let da = signal_distribution(a, bca);
    let db = signal_distribution(b, bcb);
    let mut worst = T::zero();
    for k in da.keys().chain(db.keys()) {
        let x = da.get(k).copied().unwrap_or_else(T::zero);
        let y = db.get(k).copied().unwrap_or_else(T::zero);
        worst = worst.max((x - y).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{embed_single_signal, extract_walker, Gauge};
    use crate::qca::{evolve, BasisConfig};
    use approx::assert_abs_diff_eq;
    use num_rational::Rational64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    #[test]
    fn mass_form_is_a_member_of_the_general_family() {
        for (phi, m, eps) in [(0.7, 1.3, 0.2), (FRAC_PI_2, 0.4, 0.1), (2.0, -2.5, 0.3)] {
            let v = build_local_gate(&GateParams::mass(phi, m, eps)).unwrap();
            let g = build_local_gate(&mass_form_as_general(phi, m, eps)).unwrap();
            assert!(v.max_abs_diff(&g) < 1e-15);
            // alpha = phi - pi is the same gate with the sign of a flipped
            let phi_a = 2.0 * phi - PI;
            let s = (m * eps).sin();
            let h =
                general_gate(phi - PI, phi, s.abs(), phi_a, if s < 0.0 { 1 } else { -1 }).unwrap();
            assert!(v.max_abs_diff(&h) < 1e-15);
            let (a, b, p) = gate_angles(&GateParams::mass(phi, m, eps));
            assert!(crossing_phase_check(a, b, p).is_invariant);
            assert!(wall_pair_phase_check(a, p).is_invariant);
        }
    }

    #[test]
    fn unit_modulus_gives_diagonal_phase_gate() {
        let v = general_gate(0.4, 1.0, 1.0, 0.9, 1).unwrap();
        assert_eq!(v.get(0, 1).norm(), 0.0);
        assert_eq!(v.get(1, 0).norm(), 0.0);
        assert_abs_diff_eq!(v.get(0, 0).norm(), 1.0, epsilon = 1e-15);
        assert!(general_gate(0.0, 0.0, 1.5, 0.0, 1).is_err());
    }

    #[test]
    fn crossing_check_examples() {
        let c = crossing_phase_check(0.0f64, 0.0, 0.0);
        assert!(c.is_invariant);
        assert_abs_diff_eq!(c.phase.abs(), PI, epsilon = 1e-15);
        assert!(!crossing_phase_check(0.3, 0.0, 0.0).is_invariant);
    }

    #[test]
    fn phase_shift_with_fixed_endpoints() {
        let pi = |n: i64, d: i64| Rational64::new(n, d);
        let l = PhaseLedger::from_chiralities(
            &[Chirality::Right, Chirality::Left, Chirality::Right],
            pi(1, 3),
            pi(1, 2),
        )
        .unwrap();
        let s = trajectory_phase_shift(&l).unwrap();
        assert_eq!(s.direct, pi(0, 1));
        assert_eq!(l.displacement, 0);
        // monotone paths
        let a = PhaseLedger::from_chiralities(&[Chirality::Right; 5], pi(1, 3), pi(1, 2)).unwrap();
        let s = trajectory_phase_shift(&a).unwrap();
        assert_eq!(s.direct, s.closed_form);
        assert_eq!(
            s.direct,
            -Rational64::from_integer(a.displacement) * pi(1, 2)
        );
    }

    #[test]
    fn inconsistent_ledger_is_rejected() {
        let mut l =
            PhaseLedger::from_chiralities(&[Chirality::Right, Chirality::Left], 0.1, 0.2).unwrap();
        l.n_minus = 3;
        assert!(matches!(
            trajectory_phase_shift(&l),
            Err(GqcaError::Ledger(_))
        ));
        let mut l =
            PhaseLedger::from_chiralities(&[Chirality::Right, Chirality::Right], 0.1, 0.2).unwrap();
        l.displacement = 5;
        assert!(trajectory_phase_shift(&l).is_err());
    }

    /// Every chirality sequence of length `len + 1` starting with `c` and
    /// ending with `q`.
    fn paths(len: usize, c: Chirality, q: Chirality) -> Vec<Vec<Chirality>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << len) {
            let mut p = vec![c];
            for k in 0..len {
                p.push(if mask >> k & 1 == 1 {
                    Chirality::Left
                } else {
                    Chirality::Right
                });
            }
            if *p.last().unwrap() == q {
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn phase_shift_is_path_independent_exactly() {
        let d1 = Rational64::new(3, 7);
        let d2 = Rational64::new(-5, 11);
        for len in 1..=8 {
            for (c, q) in [
                (Chirality::Right, Chirality::Left),
                (Chirality::Right, Chirality::Right),
                (Chirality::Left, Chirality::Left),
                (Chirality::Left, Chirality::Right),
            ] {
                let mut by_disp = std::collections::BTreeMap::new();
                for p in paths(len, c, q) {
                    let l = PhaseLedger::from_chiralities(&p, d1, d2).unwrap();
                    let s = trajectory_phase_shift(&l).unwrap();
                    assert_eq!(s.direct, s.closed_form);
                    let prev = by_disp.entry(l.displacement).or_insert(s.direct);
                    assert_eq!(*prev, s.direct);
                }
            }
        }
    }

    #[test]
    fn ledger_predicts_flipped_gauge_amplitudes() {
        // a single wall in the 0|1 and 1|0 gauges, general gate
        let (alpha, beta, phi) = (0.37, -1.1, 0.8);
        let p = GateParams::general(alpha, beta, 0.6, phi, 1);
        let (d1, d2) = delta_phases(alpha, beta, phi);
        let (st, bc) = embed_single_signal::<f64>(1, 1, Chirality::Right, 3, 3).unwrap();
        let flipped = flip_state(&st);
        let steps = 3;
        let a = evolve(&st, steps, &p, bc, false).unwrap().0;
        let b = evolve(&flipped, steps, &p, bc.flipped(), false).unwrap().0;
        let (wa, _) = extract_walker(&a, bc, 2 * steps, Gauge::ZeroOne, 0.1).unwrap();
        let (wb, _) = extract_walker(&b, bc.flipped(), 2 * steps, Gauge::OneZero, 0.1).unwrap();
        let mut checked = 0;
        for x in 0..wa.len() {
            for (za, zb, q) in [
                (wa.plus[x], wb.plus[x], Chirality::Right),
                (wa.minus[x], wb.minus[x], Chirality::Left),
            ] {
                if za.norm() < 1e-9 {
                    continue;
                }
                let flips: f64 = match q {
                    Chirality::Right => 0.0,
                    Chirality::Left => 1.0,
                };
                let start = crate::dual::walker_position(8, bc);
                let disp = x as f64 - start as f64;
                let predicted = flips * d1 - disp * d2;
                let ratio = zb / za;
                assert_abs_diff_eq!(ratio.norm(), 1.0, epsilon = 1e-12);
                assert!(is_zero_mod_2pi(ratio.arg() - predicted, 1e-10), "x={x}");
                checked += 1;
            }
        }
        assert!(checked > 4);
    }

    #[test]
    fn massless_phase_free_runs_are_exactly_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let bits = rng.random_range(0..1024u64);
            let st = PureState::<f64>::basis(BasisConfig::new(10, bits).unwrap());
            let r = verify_color_blindness(
                &st,
                10,
                &GateParams::mass(0.0, 0.0, 0.1),
                BoundaryCondition::Periodic,
            )
            .unwrap();
            assert_eq!(r.signal_deviation, 0.0);
            assert!(r.passed);
        }
    }

    #[test]
    fn mass_form_runs_are_color_blind() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let bits = rng.random_range(0..256u64);
            let st = PureState::<f64>::basis(BasisConfig::new(8, bits).unwrap());
            let r = verify_color_blindness(
                &st,
                10,
                &GateParams::mass(FRAC_PI_2, 0.4, 0.1),
                BoundaryCondition::Periodic,
            )
            .unwrap();
            assert!(r.signal_deviation <= 1e-12, "{r:?}");
        }
    }

    #[test]
    fn frozen_ends_break_flip_symmetry() {
        // at a fixed end a wall can turn around through a flip event, which
        // carries no relative sign, so reflected and bulk histories interfere
        // differently in the two gauges
        let st = PureState::<f64>::basis("0000".parse().unwrap());
        let p = GateParams::mass(0.7, 2.0, 0.2);
        let bc = BoundaryCondition::fixed(0, 1).unwrap();
        assert!(verify_color_blindness(&st, 1, &p, bc).unwrap().passed);
        assert!(!verify_color_blindness(&st, 2, &p, bc).unwrap().passed);
        let ring = PureState::<f64>::basis("00001111".parse().unwrap());
        assert!(
            verify_color_blindness(&ring, 10, &p, BoundaryCondition::Periodic)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn wall_pair_obstruction_detected_on_crossing_states() {
        // alpha shifted off the wall-pair condition: the single wall still
        // passes while a state with two nearby walls does not
        let (beta, phi) = (0.4, 1.1);
        let alpha = phi - beta + 0.7;
        let p = GateParams::general(alpha, beta, 0.5, phi, 1);
        assert!(!wall_pair_phase_check(alpha, phi).is_invariant);
        // long enough that the wall never reaches an end
        let single = crate::dual::one_wall_config(40, 19).unwrap();
        let r1 = verify_color_blindness(
            &PureState::<f64>::basis(single),
            8,
            &p,
            BoundaryCondition::fixed(0, 1).unwrap(),
        )
        .unwrap();
        assert!(r1.passed, "{r1:?}");
        let pair: BasisConfig = "0000111000".parse().unwrap();
        let r2 = verify_color_blindness(
            &PureState::<f64>::basis(pair),
            10,
            &p,
            BoundaryCondition::Periodic,
        )
        .unwrap();
        assert!(!r2.passed);
        assert!(r2.phase_deviation > 1e-6);
    }

    #[test]
    fn wall_pair_condition_characterizes_flip_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let states: Vec<BasisConfig> = ["0000111000", "0001100000", "0000010000"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for k1 in 0..4 {
            for k2 in 0..4 {
                let (d1, d2) = (k1 as f64 * FRAC_PI_2, k2 as f64 * FRAC_PI_2);
                let phi: f64 = rng.random_range(0.0..TAU);
                let alpha = (d1 + phi) / 2.0;
                let beta = (d2 + phi - PI) / 2.0;
                let p = GateParams::general(alpha, beta, rng.random_range(0.2..0.8), phi, 1);
                let worst = states
                    .iter()
                    .map(|&c| {
                        verify_color_blindness(
                            &PureState::<f64>::basis(c),
                            10,
                            &p,
                            BoundaryCondition::Periodic,
                        )
                        .unwrap()
                        .signal_deviation
                    })
                    .fold(0.0, f64::max);
                let predicted = wall_pair_phase_check(alpha, phi).is_invariant;
                assert_eq!(worst <= 1e-12, predicted, "k1={k1} k2={k2} worst={worst}");
            }
        }
    }

    proptest! {
        #[test]
        fn mass_form_always_satisfies_both_conditions(phi in -10.0..10.0f64, m in -5.0..5.0f64, eps in 0.001..2.0f64) {
            let (a, b, p) = gate_angles(&GateParams::mass(phi, m, eps));
            prop_assert!(crossing_phase_check(a, b, p).is_invariant);
            prop_assert!(wall_pair_phase_check(a, p).is_invariant);
        }

        #[test]
        fn general_gate_is_unitary(alpha in -7.0..7.0f64, beta in -7.0..7.0f64, a in 0.0..=1.0f64, phi in -7.0..7.0f64, s in prop::bool::ANY) {
            let v = general_gate(alpha, beta, a, phi, if s { 1 } else { -1 }).unwrap();
            prop_assert!(v.unitarity_error() <= 1e-14);
        }

        #[test]
        fn float_ledger_matches_closed_form(mask in 0u32..256, d1 in -3.0..3.0f64, d2 in -3.0..3.0f64, start in prop::bool::ANY) {
            let mut path = vec![if start { Chirality::Right } else { Chirality::Left }];
            for k in 0..8 {
                path.push(if mask >> k & 1 == 1 { Chirality::Left } else { Chirality::Right });
            }
            let l = PhaseLedger::from_chiralities(&path, d1, d2).unwrap();
            let s = trajectory_phase_shift(&l).unwrap();
            prop_assert!((s.direct - s.closed_form).abs() <= 1e-12);
        }

        #[test]
        fn wall_pair_condition_predicts_two_wall_runs(phi in 0.0..TAU, beta in 0.0..TAU, a in 0.2..0.8f64, k1 in 0u8..4, bits in 0u64..1024) {
            let alpha = (f64::from(k1) * FRAC_PI_2 + phi) / 2.0;
            let p = GateParams::general(alpha, beta, a, phi, 1);
            let st = PureState::<f64>::basis(BasisConfig::new(10, bits).unwrap());
            let r = verify_color_blindness(&st, 6, &p, BoundaryCondition::Periodic).unwrap();
            prop_assert_eq!(wall_pair_phase_check(alpha, phi).is_invariant, k1 % 2 == 0);
            if k1 % 2 == 0 {
                prop_assert!(r.passed, "{:?}", r);
            }
        }
    }
}
