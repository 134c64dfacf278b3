//! Edge signals and the one-wall quantum walker.
//!
//! A signal is the XOR of two neighbouring values. On a spatial row the
//! 1-signals are the domain walls. A wall on edge `p` sits between sites
//! `p` and `p + 1`; it moves right (`psi+`) when site `p + 1` is the next
//! one to be updated and left (`psi-`) otherwise.
//!
//! Walker positions are integer dual positions `x = p + 1` for fixed
//! extremities (so the wall against the left boundary is `x = 0`) and
//! `x = p` on a ring. One walker step is one half-layer, a time `eps / 2`,
//! and moves each chirality by one position, a distance `eps / 2`.

use crate::error::{GqcaError, Result};
use crate::num::{cis, czero, Real, C};
use crate::qca::{edge_values, BasisConfig, BoundaryCondition, GateParams, Parity, PureState};
use num_complex::Complex;
use std::collections::BTreeMap;
use std::fmt;

/// Signal bits along a row or across a half-step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignalConfig(pub Vec<u8>);

impl SignalConfig {
    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// Positions holding a 1-signal.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for SignalConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Walls of a spatial row. Periodic rows have `n` edges (`p = 0..n`, edge
/// `n - 1` wrapping); fixed rows have `n + 1` edges, entry `k` being edge
/// `p = k - 1`.
pub fn spatial_signals(config: &BasisConfig, bc: BoundaryCondition) -> SignalConfig {
    let offset = isize::from(bc.is_fixed());
    let count = config.n() + offset as usize;
    SignalConfig(
        (0..count)
            .map(|k| {
                let (l, r) = edge_values(config.n(), config.bits(), bc, k as isize - offset);
                l ^ r
            })
            .collect(),
    )
}

/// Signals on the lightlike edges between a row and the row one half-layer
/// later, `updated` naming the sublattice that changed. For each updated
/// site `j` (ascending) the pair `[a(j-1) ^ b(j), a(j+1) ^ b(j)]` is emitted.
pub fn signals_between(
    a: &BasisConfig,
    b: &BasisConfig,
    updated: Parity,
    bc: BoundaryCondition,
) -> Result<SignalConfig> {
    if a.n() != b.n() {
        return Err(GqcaError::Geometry(format!(
            "rows of {} and {} sites are not adjacent",
            a.n(),
            b.n()
        )));
    }
    let n = a.n();
    let mut out = Vec::new();
    for j in (0..n).filter(|&j| updated.matches(j)) {
        // the non-updated sites must be unchanged for the rows to be adjacent
        for nb in [j as isize - 1, j as isize + 1] {
            let va = crate::qca::site_value(n, a.bits(), bc, nb);
            let vb = crate::qca::site_value(n, b.bits(), bc, nb);
            if va != vb {
                return Err(GqcaError::Geometry(format!(
                    "site {nb} changed between rows {a} and {b} but is not on the updated sublattice"
                )));
            }
            out.push(va ^ b.get(j));
        }
    }
    Ok(SignalConfig(out))
}

/// Probability of each spatial signal pattern. Flip-related
/// configurations give the same pattern and pool their weight.
pub fn signal_distribution<T: Real>(
    state: &PureState<T>,
    bc: BoundaryCondition,
) -> BTreeMap<SignalConfig, T> {
    let mut out: BTreeMap<SignalConfig, T> = BTreeMap::new();
    for (cfg, a) in state.iter() {
        let entry = out.entry(spatial_signals(&cfg, bc)).or_insert_with(T::zero);
        *entry += a.norm_sqr();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chirality {
    /// `psi+`
    Right,
    /// `psi-`
    Left,
}

/// Orientation of a wall: `0 | 1` or `1 | 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Gauge {
    #[default]
    ZeroOne,
    OneZero,
}

impl Gauge {
    /// Sign of the chirality-mixing term in the walker recursion.
    pub fn sign<T: Real>(&self) -> T {
        match self {
            Gauge::ZeroOne => T::one(),
            Gauge::OneZero => -T::one(),
        }
    }

    pub fn flipped(&self) -> Self {
        match self {
            Gauge::ZeroOne => Gauge::OneZero,
            Gauge::OneZero => Gauge::ZeroOne,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Wall {
    /// Edge index: the wall sits between sites `edge` and `edge + 1`.
    pub edge: isize,
    pub chirality: Chirality,
    pub gauge: Gauge,
}

/// Chirality of a wall on edge `p` just before half-layer `layer`.
pub fn chirality_at(edge: isize, layer: usize) -> Chirality {
    // site p + 1 is updated next iff its parity matches the layer's
    let site = (edge + 1).rem_euclid(2) as usize;
    if Parity::of_layer(layer).matches(site) {
        Chirality::Right
    } else {
        Chirality::Left
    }
}

/// Walls of `config` as seen just before half-layer `layer`.
pub fn walls(config: &BasisConfig, bc: BoundaryCondition, layer: usize) -> Vec<Wall> {
    let offset = isize::from(bc.is_fixed());
    (0..config.n() as isize + offset)
        .map(|k| k - offset)
        .filter_map(|p| {
            let (l, r) = edge_values(config.n(), config.bits(), bc, p);
            (l != r).then(|| Wall {
                edge: p,
                chirality: chirality_at(p, layer),
                gauge: if l == 0 {
                    Gauge::ZeroOne
                } else {
                    Gauge::OneZero
                },
            })
        })
        .collect()
}

/// Single-wall basis state: `n_cells` cells of `2N` sites, fixed extremities
/// `0 | ... | 1`. `psi+_{i,j}` puts the wall on edge `2Ni + 2j`, `psi-_{i,j}`
/// on edge `2Ni + 2j + 1`; sites left of the wall read 0, right of it 1.
pub fn embed_single_signal<T: Real>(
    cell: usize,
    offset: usize,
    chirality: Chirality,
    supercell: usize,
    n_cells: usize,
) -> Result<(PureState<T>, BoundaryCondition)> {
    if supercell == 0 || n_cells == 0 {
        return Err(GqcaError::Index(
            "supercell size and cell count must be positive".into(),
        ));
    }
    if offset >= supercell {
        return Err(GqcaError::Index(format!(
            "offset {offset} outside 0..{supercell}"
        )));
    }
    if cell >= n_cells {
        return Err(GqcaError::Index(format!(
            "cell {cell} outside 0..{n_cells}"
        )));
    }
    let n = 2 * supercell * n_cells;
    let edge = single_signal_edge(cell, offset, chirality, supercell);
    let config = one_wall_config(n, edge)?;
    Ok((
        PureState::basis(config),
        BoundaryCondition::Fixed { left: 0, right: 1 },
    ))
}

pub(crate) fn single_signal_edge(
    cell: usize,
    offset: usize,
    chirality: Chirality,
    supercell: usize,
) -> isize {
    (2 * supercell * cell + 2 * offset + usize::from(chirality == Chirality::Left)) as isize
}

/// The `0...0 1...1` row of `n` sites with its wall on edge `p`
/// (`-1 <= p < n`).
pub fn one_wall_config(n: usize, edge: isize) -> Result<BasisConfig> {
    if edge < -1 || edge >= n as isize {
        return Err(GqcaError::Index(format!("edge {edge} outside -1..{n}")));
    }
    let ones = crate::qca::mask(n) & !crate::qca::mask((edge + 1) as usize);
    BasisConfig::new(n, ones)
}

/// How the walker treats its ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkerBoundary {
    Periodic,
    /// Mirrors fixed extremities: a wall pressed against an end reverses
    /// with unit amplitude and no phase.
    Reflecting,
}

/// Amplitudes of the two chiralities on integer dual positions.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkerState<T: Real> {
    pub plus: Vec<C<T>>,
    pub minus: Vec<C<T>>,
    pub gauge: Gauge,
    pub eps: T,
    pub boundary: WalkerBoundary,
}

impl<T: Real> WalkerState<T> {
    pub fn new(
        plus: Vec<C<T>>,
        minus: Vec<C<T>>,
        gauge: Gauge,
        eps: T,
        boundary: WalkerBoundary,
    ) -> Result<Self> {
        if plus.len() != minus.len() || plus.is_empty() {
            return Err(GqcaError::Geometry(format!(
                "chirality arrays of length {} and {}",
                plus.len(),
                minus.len()
            )));
        }
        Ok(Self {
            plus,
            minus,
            gauge,
            eps,
            boundary,
        })
    }

    /// A single wall at position `x`.
    pub fn localized(
        len: usize,
        x: usize,
        chirality: Chirality,
        gauge: Gauge,
        eps: T,
        boundary: WalkerBoundary,
    ) -> Result<Self> {
        if x >= len {
            return Err(GqcaError::Index(format!("position {x} outside 0..{len}")));
        }
        let mut w = Self::new(vec![czero(); len], vec![czero(); len], gauge, eps, boundary)?;
        match chirality {
            Chirality::Right => w.plus[x] = Complex::new(T::one(), T::zero()),
            Chirality::Left => w.minus[x] = Complex::new(T::one(), T::zero()),
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.plus
            .iter()
            .chain(self.minus.iter())
            .map(|a| a.norm_sqr())
            .sum()
    }

    pub fn scaled(&self, k: C<T>) -> Self {
        let mut w = self.clone();
        w.plus
            .iter_mut()
            .chain(w.minus.iter_mut())
            .for_each(|a| *a *= k);
        w
    }

    /// Euclidean distance to another walker of the same size.
    pub fn distance(&self, other: &Self) -> T {
        self.plus
            .iter()
            .zip(&other.plus)
            .chain(self.minus.iter().zip(&other.minus))
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }
}

/// One half-step of the walker recursion
/// `plus'(x) = e^{i phi} [c plus(x-1) + g s minus(x)]`,
/// `minus'(x) = e^{i phi} [c minus(x+1) - g s plus(x)]`
/// with `c = cos(m eps)`, `s = sin(m eps)` and `g` the gauge sign.
pub fn walker_step<T: Real>(w: &WalkerState<T>, params: &GateParams<T>) -> Result<WalkerState<T>> {
    let (phi, mass, eps) = match *params {
        GateParams::Mass { phi, mass, eps } => (phi, mass, eps),
        GateParams::General { .. } => {
            return Err(GqcaError::Unsupported(
                "the walker recursion is only derived for the mass-form gate".into(),
            ))
        }
    };
    crate::qca::build_local_gate(params)?;
    let len = w.len();
    let e = cis(phi);
    let c = Complex::new((mass * eps).cos(), T::zero());
    let gs = Complex::new(w.gauge.sign::<T>() * (mass * eps).sin(), T::zero());
    let mut plus = vec![czero(); len];
    let mut minus = vec![czero(); len];
    for x in 0..len {
        let (left, right) = match w.boundary {
            WalkerBoundary::Periodic => (Some((x + len - 1) % len), Some((x + 1) % len)),
            WalkerBoundary::Reflecting => (x.checked_sub(1), (x + 1 < len).then_some(x + 1)),
        };
        plus[x] = match left {
            Some(l) => e * (c * w.plus[l] + gs * w.minus[x]),
            None => w.minus[x],
        };
        minus[x] = match right {
            Some(r) => e * (c * w.minus[r] - gs * w.plus[x]),
            None => w.plus[x],
        };
    }
    Ok(WalkerState {
        plus,
        minus,
        gauge: w.gauge,
        eps: w.eps,
        boundary: w.boundary,
    })
}

/// Runs `steps` walker half-steps.
pub fn walk<T: Real>(
    w: &WalkerState<T>,
    params: &GateParams<T>,
    steps: usize,
) -> Result<WalkerState<T>> {
    let mut cur = w.clone();
    for _ in 0..steps {
        cur = walker_step(&cur, params)?;
    }
    Ok(cur)
}

/// Dual position of edge `p` for walkers mirroring the given boundary.
pub fn walker_position(edge: isize, bc: BoundaryCondition) -> isize {
    edge + isize::from(bc.is_fixed())
}

/// Reads the one-wall sector of `state` into a walker, with chiralities
/// as seen just before half-layer `layer`. Weight outside the sector is
/// returned as the second component.
pub fn extract_walker<T: Real>(
    state: &PureState<T>,
    bc: BoundaryCondition,
    layer: usize,
    gauge: Gauge,
    eps: T,
) -> Result<(WalkerState<T>, T)> {
    let n = state.n();
    let (len, boundary) = match bc {
        BoundaryCondition::Fixed { .. } => (n + 1, WalkerBoundary::Reflecting),
        BoundaryCondition::Periodic => (n, WalkerBoundary::Periodic),
    };
    let mut w = WalkerState::new(vec![czero(); len], vec![czero(); len], gauge, eps, boundary)?;
    let mut outside = T::zero();
    for (cfg, a) in state.iter() {
        let ws = walls(&cfg, bc, layer);
        match ws.as_slice() {
            [wall] if wall.gauge == gauge => {
                let x = walker_position(wall.edge, bc) as usize;
                match wall.chirality {
                    Chirality::Right => w.plus[x] = a,
                    Chirality::Left => w.minus[x] = a,
                }
            }
            _ => outside += a.norm_sqr(),
        }
    }
    Ok((w, outside))
}

/// The automaton state with one wall of the given gauge, superposed per the
/// walker amplitudes. Only positions whose chirality matches `layer` may be
/// occupied.
pub fn walker_to_state<T: Real>(
    w: &WalkerState<T>,
    n: usize,
    layer: usize,
) -> Result<(PureState<T>, BoundaryCondition)> {
    let bc = match w.boundary {
        WalkerBoundary::Reflecting => match w.gauge {
            Gauge::ZeroOne => BoundaryCondition::Fixed { left: 0, right: 1 },
            Gauge::OneZero => BoundaryCondition::Fixed { left: 1, right: 0 },
        },
        WalkerBoundary::Periodic => {
            return Err(GqcaError::Unsupported(
                "a ring always carries an even number of walls".into(),
            ))
        }
    };
    if w.len() != n + 1 {
        return Err(GqcaError::Geometry(format!(
            "walker of length {} does not fit {n} sites",
            w.len()
        )));
    }
    let mut terms = Vec::new();
    for x in 0..w.len() {
        let edge = x as isize - 1;
        for (amp, chir) in [(w.plus[x], Chirality::Right), (w.minus[x], Chirality::Left)] {
            if amp == czero() {
                continue;
            }
            if chirality_at(edge, layer) != chir {
                return Err(GqcaError::Geometry(format!(
                    "position {x} cannot hold a {chir:?} mover before layer {layer}"
                )));
            }
            let mut cfg = one_wall_config(n, edge)?;
            if w.gauge == Gauge::OneZero {
                cfg = cfg.flipped();
            }
            terms.push((cfg, amp));
        }
    }
    Ok((PureState::from_amplitudes(n, terms)?, bc))
}
