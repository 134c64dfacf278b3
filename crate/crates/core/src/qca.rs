//! Exact statevector evolution of the one-dimensional Goldilocks automaton.
//!
//! A site is updated by the local gate `V` exactly when its two neighbours
//! hold different values; otherwise it is left alone. Sites are numbered
//! `0..n`; odd sites update in the first half-layer of a step and even sites
//! in the second (brickwork). Layer `l` (counted from zero) therefore updates
//! odd sites when `l` is even.
//!
//! States are stored as an ordered map from basis configuration to amplitude.
//! Basis-state trajectories and the one-wall sector stay tiny no matter how
//! many sites the lattice has; dense superpositions cost `2^n` entries and
//! are bounded by [`Capacity`].

use crate::error::{GqcaError, Result};
use crate::linalg::Unitary2;
use crate::num::{cis, complex_gaussian, creal, czero, tol, Real, C};
use crate::record::{MarginalRecord, Record, SpacetimeRecord};
use num_complex::Complex;
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Largest lattice a `u64` basis index can address.
pub const MAX_SITES: usize = 63;

/// Default bound on stored amplitudes, as a power of two.
pub const DEFAULT_MAX_QUBITS: usize = 20;

/// Environment variable overriding [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "GQCA_MAX_QUBITS";

/// A computational basis configuration `e_0 e_1 ... e_{n-1}`; bit `i` of
/// `bits` is the value of site `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisConfig {
    n: usize,
    bits: u64,
}

impl BasisConfig {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > MAX_SITES {
            return Err(GqcaError::Size(format!(
                "site count {n} outside 1..={MAX_SITES}"
            )));
        }
        if n < 64 && bits >> n != 0 {
            return Err(GqcaError::Size(format!(
                "bit pattern {bits:#b} does not fit in {n} sites"
            )));
        }
        Ok(Self { n, bits })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(n, mask(n))
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut word = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(GqcaError::Size(format!(
                    "site {i} holds {b}, expected 0 or 1"
                )));
            }
            word |= (b as u64) << i;
        }
        Self::new(bits.len(), word)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn get(&self, site: usize) -> u8 {
        ((self.bits >> site) & 1) as u8
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.get(i)).collect()
    }

    /// Bitwise complement of every site.
    pub fn flipped(&self) -> Self {
        Self {
            n: self.n,
            bits: self.bits ^ mask(self.n),
        }
    }

    /// Number of domain walls along the row, including the walls against
    /// fixed extremities.
    pub fn wall_count(&self, bc: BoundaryCondition) -> usize {
        (0..self.n + usize::from(bc.is_fixed()))
            .filter(|&e| {
                let (l, r) = edge_values(
                    self.n,
                    self.bits,
                    bc,
                    e as isize - isize::from(bc.is_fixed()),
                );
                l != r
            })
            .count()
    }
}

impl fmt::Display for BasisConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl FromStr for BasisConfig {
    type Err = GqcaError;

    /// Parses `"0001111"`, site 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .trim()
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(GqcaError::Config(format!(
                    "invalid site value `{other}` in `{s}`"
                ))),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&bits)
    }
}

#[inline]
pub(crate) fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Values on both sides of edge `e`, where edge `e` sits between site `e`
/// and site `e + 1` (`e = -1` is the left extremity under fixed bc).
pub(crate) fn edge_values(n: usize, bits: u64, bc: BoundaryCondition, e: isize) -> (u8, u8) {
    (site_value(n, bits, bc, e), site_value(n, bits, bc, e + 1))
}

/// Value of site `i`, resolving out-of-range indices through the boundary.
#[inline]
pub(crate) fn site_value(n: usize, bits: u64, bc: BoundaryCondition, i: isize) -> u8 {
    match bc {
        BoundaryCondition::Periodic => ((bits >> (i.rem_euclid(n as isize) as usize)) & 1) as u8,
        BoundaryCondition::Fixed { left, right } => {
            if i < 0 {
                left
            } else if i as usize >= n {
                right
            } else {
                ((bits >> i as usize) & 1) as u8
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BoundaryCondition {
    #[default]
    Periodic,
    /// Virtual sites `-1` and `n` hold the given constant values.
    Fixed { left: u8, right: u8 },
}

impl BoundaryCondition {
    pub fn fixed(left: u8, right: u8) -> Result<Self> {
        if left > 1 || right > 1 {
            return Err(GqcaError::Parameter(format!(
                "fixed extremities must be 0 or 1, got ({left}, {right})"
            )));
        }
        Ok(Self::Fixed { left, right })
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, Self::Fixed { .. })
    }

    /// The same boundary with extremity values complemented.
    pub fn flipped(&self) -> Self {
        match *self {
            Self::Periodic => Self::Periodic,
            Self::Fixed { left, right } => Self::Fixed {
                left: 1 - left,
                right: 1 - right,
            },
        }
    }

    /// Checks that `n` sites can be updated under this boundary.
    pub fn check_sites(&self, n: usize) -> Result<()> {
        match self {
            Self::Periodic if n < 4 || !n.is_multiple_of(2) => Err(GqcaError::Size(format!(
                "periodic brickwork needs an even site count >= 4, got {n}"
            ))),
            Self::Fixed { .. } if n < 3 => Err(GqcaError::Size(format!(
                "fixed extremities need at least 3 sites, got {n}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Periodic => write!(f, "periodic"),
            Self::Fixed { left, right } => write!(f, "fixed:{left}:{right}"),
        }
    }
}

impl FromStr for BoundaryCondition {
    type Err = GqcaError;

    /// `periodic` or `fixed:<left>:<right>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "periodic" {
            return Ok(Self::Periodic);
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["fixed", l, r] => {
                let parse = |x: &str| {
                    x.parse::<u8>()
                        .map_err(|_| GqcaError::Config(format!("bad extremity value `{x}`")))
                };
                Self::fixed(parse(l)?, parse(r)?).map_err(|e| GqcaError::Config(e.to_string()))
            }
            _ => Err(GqcaError::Config(format!(
                "boundary `{s}` is neither `periodic` nor `fixed:<l>:<r>`"
            ))),
        }
    }
}

/// Bound on the number of stored amplitudes: at most `2^max_qubits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capacity {
    pub max_qubits: usize,
}

impl Default for Capacity {
    fn default() -> Self {
        Self {
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl Capacity {
    /// Reads `GQCA_MAX_QUBITS`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(MAX_QUBITS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|max_qubits: usize| Self {
                max_qubits: max_qubits.min(MAX_SITES),
            })
            .unwrap_or_default()
    }

    pub fn max_amplitudes(&self) -> usize {
        1usize << self.max_qubits.min(MAX_SITES)
    }

    pub fn check_support(&self, len: usize) -> Result<()> {
        if len > self.max_amplitudes() {
            Err(GqcaError::Capacity(format!(
                "{len} amplitudes exceed the limit of 2^{} (set {MAX_QUBITS_ENV} to raise it)",
                self.max_qubits
            )))
        } else {
            Ok(())
        }
    }
}

/// A normalized pure state over `n`-site basis configurations.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T: Real> {
    n: usize,
    amps: BTreeMap<u64, C<T>>,
}

impl<T: Real> PureState<T> {
    pub fn basis(config: BasisConfig) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(config.bits, Complex::new(T::one(), T::zero()));
        Self { n: config.n, amps }
    }

    /// Builds a state from `(config, amplitude)` pairs; repeated configs add
    /// up. The result must be normalized to `1e-12`.
    pub fn from_amplitudes<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisConfig, C<T>)>,
    {
        let state = Self::collect(n, terms)?;
        let norm = state.norm_sqr();
        if (norm - T::one()).abs() > tol(1e-12) {
            return Err(GqcaError::Parameter(format!(
                "state norm^2 is {norm:?}, expected 1"
            )));
        }
        Ok(state)
    }

    /// Like [`Self::from_amplitudes`] but rescales to unit norm.
    pub fn normalized<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisConfig, C<T>)>,
    {
        let mut state = Self::collect(n, terms)?;
        let norm = state.norm_sqr().sqrt();
        if norm == T::zero() {
            return Err(GqcaError::Parameter(
                "cannot normalize the zero vector".into(),
            ));
        }
        for a in state.amps.values_mut() {
            *a /= norm;
        }
        Ok(state)
    }

    fn collect<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisConfig, C<T>)>,
    {
        BasisConfig::zeros(n)?;
        let mut amps: BTreeMap<u64, C<T>> = BTreeMap::new();
        for (cfg, a) in terms {
            if cfg.n != n {
                return Err(GqcaError::Size(format!(
                    "configuration {cfg} has {} sites, state has {n}",
                    cfg.n
                )));
            }
            *amps.entry(cfg.bits).or_insert_with(czero) += a;
        }
        amps.retain(|_, a| *a != czero());
        Ok(Self { n, amps })
    }

    /// Random dense state with independent complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R, capacity: Capacity) -> Result<Self> {
        BasisConfig::zeros(n)?;
        capacity.check_support(1usize << n.min(MAX_SITES))?;
        let terms: Vec<(BasisConfig, C<T>)> = (0..(1u64 << n))
            .map(|b| (BasisConfig { n, bits: b }, complex_gaussian(rng)))
            .collect();
        Self::normalized(n, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, config: BasisConfig) -> C<T> {
        if config.n != self.n {
            return czero();
        }
        self.amps.get(&config.bits).copied().unwrap_or_else(czero)
    }

    /// Nonzero amplitudes in ascending basis order.
    pub fn iter(&self) -> impl Iterator<Item = (BasisConfig, C<T>)> + '_ {
        let n = self.n;
        self.amps
            .iter()
            .map(move |(&bits, &a)| (BasisConfig { n, bits }, a))
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> C<T> {
        self.amps
            .iter()
            .filter_map(|(b, a)| other.amps.get(b).map(|o| a.conj() * o))
            .fold(czero(), |acc, x| acc + x)
    }

    /// Phase-insensitive overlap `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    /// Euclidean norm of `self - other`.
    pub fn distance(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (b, a) in &self.amps {
            let o = other.amps.get(b).copied().unwrap_or_else(czero);
            acc += (*a - o).norm_sqr();
        }
        for (b, o) in &other.amps {
            if !self.amps.contains_key(b) {
                acc += o.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// The configuration carrying all the weight, when the state is a basis
    /// state up to a global phase.
    pub fn as_basis_state(&self) -> Option<BasisConfig> {
        let threshold = T::one() - tol::<T>(1e-12);
        self.iter()
            .find(|(_, a)| a.norm_sqr() >= threshold)
            .map(|(c, _)| c)
    }

    /// Probability that each site reads `1`.
    pub fn site_marginals(&self) -> Vec<T> {
        let mut p = vec![T::zero(); self.n];
        for (&bits, a) in &self.amps {
            let w = a.norm_sqr();
            for (i, pi) in p.iter_mut().enumerate() {
                if (bits >> i) & 1 == 1 {
                    *pi += w;
                }
            }
        }
        p
    }

    /// Probability distribution over basis configurations.
    pub fn probabilities(&self) -> BTreeMap<BasisConfig, T> {
        self.iter().map(|(c, a)| (c, a.norm_sqr())).collect()
    }
}

/// Parametrization of the local gate `V`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateParams<T: Real> {
    /// `V = e^{i phi} [cos(m eps) X + sin(m eps) Z]`.
    Mass { phi: T, mass: T, eps: T },
    /// `V = [[a, b], [-e^{i phi} b*, e^{i phi} a*]]` with
    /// `a = sign |a| e^{i alpha}` and `b = |b| e^{i beta}`.
    General {
        a_mod: T,
        b_mod: T,
        alpha: T,
        beta: T,
        phi: T,
        sign: i8,
    },
}

impl<T: Real> GateParams<T> {
    pub fn mass(phi: T, mass: T, eps: T) -> Self {
        Self::Mass { phi, mass, eps }
    }

    /// General form with `|b| = sqrt(1 - |a|^2)`.
    pub fn general(alpha: T, beta: T, a_mod: T, phi: T, sign: i8) -> Self {
        let b_mod = (T::one() - a_mod * a_mod).max(T::zero()).sqrt();
        Self::General {
            a_mod,
            b_mod,
            alpha,
            beta,
            phi,
            sign,
        }
    }

    /// Massless, phase-free gate: `V = X`.
    pub fn classical() -> Self {
        Self::mass(T::zero(), T::zero(), T::one())
    }

    pub fn is_mass_form(&self) -> bool {
        matches!(self, Self::Mass { .. })
    }
}

/// Builds the 2x2 local unitary.
pub fn build_local_gate<T: Real>(params: &GateParams<T>) -> Result<Unitary2<T>> {
    match *params {
        GateParams::Mass { phi, mass, eps } => {
            if !(eps > T::zero()) || !eps.is_finite() {
                return Err(GqcaError::Parameter(format!(
                    "lattice length must be positive and finite, got {eps:?}"
                )));
            }
            if !phi.is_finite() || !mass.is_finite() {
                return Err(GqcaError::Parameter("phase and mass must be finite".into()));
            }
            let theta = mass * eps;
            let x = Unitary2::pauli_x().scale(creal(theta.cos()));
            let z = Unitary2::pauli_z().scale(creal(theta.sin()));
            Ok(x.plus(&z).scale(cis(phi)))
        }
        GateParams::General {
            a_mod,
            b_mod,
            alpha,
            beta,
            phi,
            sign,
        } => {
            if a_mod < T::zero() || b_mod < T::zero() {
                return Err(GqcaError::Parameter("moduli must be non-negative".into()));
            }
            if (a_mod * a_mod + b_mod * b_mod - T::one()).abs() > tol(1e-12) {
                return Err(GqcaError::Parameter(format!(
                    "|a|^2 + |b|^2 = {:?}, expected 1",
                    a_mod * a_mod + b_mod * b_mod
                )));
            }
            if sign != 1 && sign != -1 {
                return Err(GqcaError::Parameter(format!(
                    "sign must be +1 or -1, got {sign}"
                )));
            }
            let s = if sign > 0 { T::one() } else { -T::one() };
            let a = cis(alpha) * creal(s * a_mod);
            let b = cis(beta) * creal(b_mod);
            let e = cis(phi);
            Ok(Unitary2::new(a, b, -(e * b.conj()), e * a.conj()))
        }
    }
}

/// Which sublattice a half-layer updates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    /// Sublattice updated by layer `layer` (counted from zero).
    pub fn of_layer(layer: usize) -> Self {
        if layer.is_multiple_of(2) {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn matches(&self, site: usize) -> bool {
        match self {
            Parity::Odd => site % 2 == 1,
            Parity::Even => site.is_multiple_of(2),
        }
    }
}

/// Applies the conditioned gate to one site: `V` acts when the neighbours
/// differ, identity otherwise.
pub(crate) fn apply_site_gate<T: Real>(
    amps: &BTreeMap<u64, C<T>>,
    n: usize,
    site: usize,
    gate: &Unitary2<T>,
    bc: BoundaryCondition,
) -> BTreeMap<u64, C<T>> {
    let bit = 1u64 << site;
    let mut out: BTreeMap<u64, C<T>> = BTreeMap::new();
    for (&cfg, &amp) in amps {
        let left = site_value(n, cfg, bc, site as isize - 1);
        let right = site_value(n, cfg, bc, site as isize + 1);
        if left == right {
            *out.entry(cfg).or_insert_with(czero) += amp;
            continue;
        }
        let current = ((cfg >> site) & 1) as usize;
        for target in 0..2usize {
            let coef = gate.get(target, current);
            if coef == czero() {
                continue;
            }
            let next = if target == 1 { cfg | bit } else { cfg & !bit };
            *out.entry(next).or_insert_with(czero) += coef * amp;
        }
    }
    out.retain(|_, a| *a != czero());
    out
}

/// One half-layer: every site of `parity` gets the conditioned gate.
pub fn apply_goldilocks_layer<T: Real>(
    state: &PureState<T>,
    parity: Parity,
    params: &GateParams<T>,
    bc: BoundaryCondition,
) -> Result<PureState<T>> {
    let gate = build_local_gate(params)?;
    apply_layer_with_gate(state, parity, &gate, bc, Capacity::from_env())
}

pub(crate) fn apply_layer_with_gate<T: Real>(
    state: &PureState<T>,
    parity: Parity,
    gate: &Unitary2<T>,
    bc: BoundaryCondition,
    capacity: Capacity,
) -> Result<PureState<T>> {
    bc.check_sites(state.n)?;
    let mut amps = state.amps.clone();
    for site in (0..state.n).filter(|&s| parity.matches(s)) {
        amps = apply_site_gate(&amps, state.n, site, gate, bc);
        capacity.check_support(amps.len())?;
    }
    Ok(PureState { n: state.n, amps })
}

/// Runs `layers` half-layers starting at global layer `first_layer`.
pub fn evolve_layers<T: Real>(
    state: &PureState<T>,
    first_layer: usize,
    layers: usize,
    params: &GateParams<T>,
    bc: BoundaryCondition,
) -> Result<PureState<T>> {
    let gate = build_local_gate(params)?;
    let capacity = Capacity::from_env();
    let mut s = state.clone();
    for l in first_layer..first_layer + layers {
        s = apply_layer_with_gate(&s, Parity::of_layer(l), &gate, bc, capacity)?;
    }
    Ok(s)
}

/// `steps` full steps (odd half-layer, then even half-layer).
///
/// With `record` set, every half-layer row is kept. When the trajectory
/// stays a basis state throughout the record is classical; otherwise it
/// falls back to per-site marginals.
pub fn evolve<T: Real>(
    state: &PureState<T>,
    steps: usize,
    params: &GateParams<T>,
    bc: BoundaryCondition,
    record: bool,
) -> Result<(PureState<T>, Option<Record<T>>)> {
    let gate = build_local_gate(params)?;
    let capacity = Capacity::from_env();
    if steps > 0 {
        bc.check_sites(state.n)?;
    }
    let mut s = state.clone();
    let mut rows = Vec::new();
    let mut marginals = Vec::new();
    let mut classical = true;
    if record {
        push_row(&s, &mut rows, &mut marginals, &mut classical);
    }
    for l in 0..2 * steps {
        s = apply_layer_with_gate(&s, Parity::of_layer(l), &gate, bc, capacity)?;
        if record {
            push_row(&s, &mut rows, &mut marginals, &mut classical);
        }
    }
    let rec = if !record {
        None
    } else if classical {
        Some(Record::Classical(SpacetimeRecord::from_rows(rows, bc)?))
    } else {
        Some(Record::Probabilistic(MarginalRecord::new(
            state.n, bc, marginals,
        )))
    };
    Ok((s, rec))
}

fn push_row<T: Real>(
    s: &PureState<T>,
    rows: &mut Vec<BasisConfig>,
    marginals: &mut Vec<Vec<T>>,
    classical: &mut bool,
) {
    marginals.push(s.site_marginals());
    match s.as_basis_state() {
        Some(c) if *classical => rows.push(c),
        _ => *classical = false,
    }
}

/// Global bit flip `|e> -> |not e>`, amplitudes carried over.
pub fn flip_state<T: Real>(state: &PureState<T>) -> PureState<T> {
    let m = mask(state.n);
    PureState {
        n: state.n,
        amps: state.amps.iter().map(|(&b, &a)| (b ^ m, a)).collect(),
    }
}

/// An ordered list of single-site updates `(site, k)`: the `k`-th update of
/// `site` (counted from zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateSchedule {
    pub n: usize,
    pub events: Vec<(usize, usize)>,
}

impl UpdateSchedule {
    /// The brickwork order: all of layer 0, then all of layer 1, ...
    pub fn synchronous(n: usize, layers: usize) -> Self {
        let mut events = Vec::new();
        for l in 0..layers {
            let parity = Parity::of_layer(l);
            for site in (0..n).filter(|&s| parity.matches(s)) {
                events.push((site, l / 2));
            }
        }
        Self { n, events }
    }

    /// A uniformly chosen causally valid interleaving covering the same
    /// gates as `layers` synchronous half-layers.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        layers: usize,
        bc: BoundaryCondition,
        rng: &mut R,
    ) -> Result<Self> {
        bc.check_sites(n)?;
        let target: Vec<usize> = (0..n).map(|s| updates_within(s, layers)).collect();
        let mut done = vec![0usize; n];
        let mut events = Vec::new();
        loop {
            let enabled: Vec<usize> = (0..n)
                .filter(|&s| {
                    done[s] < target[s] && causal_violation(s, done[s], &done, n, bc).is_none()
                })
                .collect();
            if enabled.is_empty() {
                break;
            }
            let site = enabled[rng.random_range(0..enabled.len())];
            events.push((site, done[site]));
            done[site] += 1;
        }
        debug_assert_eq!(done, target);
        Ok(Self { n, events })
    }

    /// Checks causal validity; the error names the first offending event.
    pub fn validate(&self, bc: BoundaryCondition) -> Result<()> {
        bc.check_sites(self.n)?;
        let mut done = vec![0usize; self.n];
        for (index, &(site, step)) in self.events.iter().enumerate() {
            if site >= self.n {
                return Err(GqcaError::Schedule {
                    index,
                    site,
                    step,
                    reason: format!("site outside 0..{}", self.n),
                });
            }
            if done[site] != step {
                return Err(GqcaError::Schedule {
                    index,
                    site,
                    step,
                    reason: format!("site has completed {} updates", done[site]),
                });
            }
            if let Some(reason) = causal_violation(site, step, &done, self.n, bc) {
                return Err(GqcaError::Schedule {
                    index,
                    site,
                    step,
                    reason,
                });
            }
            done[site] += 1;
        }
        Ok(())
    }

    /// Number of synchronous half-layers this schedule is equivalent to, if
    /// it covers a whole number of them.
    pub fn completed_layers(&self) -> Option<usize> {
        let mut done = vec![0usize; self.n];
        for &(s, _) in &self.events {
            if s < self.n {
                done[s] += 1;
            }
        }
        (0..=2 * self.events.len() + 1)
            .find(|&l| (0..self.n).all(|s| done[s] == updates_within(s, l)))
    }
}

/// Global layer of the `k`-th update of `site`.
fn layer_of(site: usize, k: usize) -> usize {
    2 * k + usize::from(site.is_multiple_of(2))
}

/// Number of updates of `site` among the first `layers` half-layers.
fn updates_within(site: usize, layers: usize) -> usize {
    let offset = usize::from(site.is_multiple_of(2));
    if layers <= offset {
        0
    } else {
        (layers - offset).div_ceil(2)
    }
}

fn causal_violation(
    site: usize,
    step: usize,
    done: &[usize],
    n: usize,
    bc: BoundaryCondition,
) -> Option<String> {
    let layer = layer_of(site, step);
    let neighbours: Vec<usize> = match bc {
        BoundaryCondition::Periodic => vec![(site + n - 1) % n, (site + 1) % n],
        BoundaryCondition::Fixed { .. } => {
            let mut v = Vec::new();
            if site > 0 {
                v.push(site - 1);
            }
            if site + 1 < n {
                v.push(site + 1);
            }
            v
        }
    };
    for nb in neighbours {
        let needed = updates_within(nb, layer);
        if done[nb] < needed {
            return Some(format!(
                "neighbour {nb} lags: {} of {needed} earlier updates done",
                done[nb]
            ));
        }
        if done[nb] > needed {
            return Some(format!(
                "neighbour {nb} already advanced past this half-step ({} > {needed} updates)",
                done[nb]
            ));
        }
    }
    None
}

/// Applies the schedule's gates one site at a time.
pub fn evolve_async<T: Real>(
    state: &PureState<T>,
    schedule: &UpdateSchedule,
    params: &GateParams<T>,
    bc: BoundaryCondition,
) -> Result<PureState<T>> {
    if schedule.n != state.n {
        return Err(GqcaError::Size(format!(
            "schedule is for {} sites, state has {}",
            schedule.n, state.n
        )));
    }
    schedule.validate(bc)?;
    let gate = build_local_gate(params)?;
    let capacity = Capacity::from_env();
    let mut amps = state.amps.clone();
    for &(site, _) in &schedule.events {
        amps = apply_site_gate(&amps, state.n, site, &gate, bc);
        capacity.check_support(amps.len())?;
    }
    Ok(PureState { n: state.n, amps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn cfg(s: &str) -> BasisConfig {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> C<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn massless_phase_free_gate_is_pauli_x() {
        for eps in [0.01, 0.3, 2.0] {
            let v = build_local_gate(&GateParams::mass(0.0, 0.0, eps)).unwrap();
            assert_eq!(v, Unitary2::pauli_x());
        }
    }

    #[test]
    fn quarter_turn_mass_gives_pauli_z() {
        let v = build_local_gate(&GateParams::mass(0.0, FRAC_PI_2, 1.0)).unwrap();
        assert!(v.max_abs_diff(&Unitary2::pauli_z()) < 1e-16);
    }

    #[test]
    fn mass_gate_matches_direct_arithmetic() {
        let v = build_local_gate(&GateParams::mass(FRAC_PI_2, 1.0, 0.1)).unwrap();
        // i [cos(0.1) X + sin(0.1) Z]
        let (co, si) = (0.1f64.cos(), 0.1f64.sin());
        let expected = Unitary2::new(c(0.0, si), c(0.0, co), c(0.0, co), c(0.0, -si));
        assert!(v.max_abs_diff(&expected) < 1e-16);
        assert!(v.unitarity_error() <= 1e-15);
    }

    #[test]
    fn malformed_general_moduli_are_rejected() {
        let p = GateParams::General {
            a_mod: 0.6,
            b_mod: 0.6,
            alpha: 0.0,
            beta: 0.0,
            phi: 0.0,
            sign: 1,
        };
        assert!(matches!(build_local_gate(&p), Err(GqcaError::Parameter(_))));
        assert!(build_local_gate(&GateParams::mass(0.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn general_gate_is_unitary() {
        let v = build_local_gate(&GateParams::general(0.3, -1.1, 0.37, 2.2, -1)).unwrap();
        assert!(v.unitarity_error() < 1e-14);
    }

    #[test]
    fn uniform_rows_are_fixed_points() {
        let p = GateParams::mass(0.4, 1.3, 0.2);
        for s in ["0000000", "1111111"] {
            let st = PureState::<f64>::basis(cfg(s));
            for parity in [Parity::Odd, Parity::Even] {
                let out = apply_goldilocks_layer(
                    &st,
                    parity,
                    &p,
                    BoundaryCondition::fixed(s.as_bytes()[0] - b'0', s.as_bytes()[0] - b'0')
                        .unwrap(),
                )
                .unwrap();
                assert_eq!(out, st);
            }
        }
    }

    #[test]
    fn single_wall_moves_one_site_per_half_step() {
        // wall between sites 2 and 3 of 0001111; site 3 is odd so the first
        // half-layer flips it and the wall moves right
        let bc = BoundaryCondition::fixed(0, 1).unwrap();
        let p = GateParams::<f64>::classical();
        let st = PureState::basis(cfg("0001111"));
        let a = apply_goldilocks_layer(&st, Parity::Odd, &p, bc).unwrap();
        assert_eq!(a.as_basis_state(), Some(cfg("0000111")));
        let b = apply_goldilocks_layer(&a, Parity::Even, &p, bc).unwrap();
        assert_eq!(b.as_basis_state(), Some(cfg("0000011")));
    }

    #[test]
    fn zero_steps_is_identity() {
        let st = PureState::<f64>::basis(cfg("011010"));
        let (out, rec) = evolve(
            &st,
            0,
            &GateParams::mass(0.3, 0.2, 0.1),
            BoundaryCondition::Periodic,
            true,
        )
        .unwrap();
        assert_eq!(out, st);
        assert!(matches!(rec, Some(Record::Classical(_))));
    }

    #[test]
    fn parallel_wall_pair_circulates_in_n_half_layers() {
        // walls on edges 1 and 5 move right together, one site per layer
        let st = PureState::<f64>::basis(cfg("001111"));
        let p = GateParams::classical();
        let (out, rec) = evolve(&st, 3, &p, BoundaryCondition::Periodic, true).unwrap();
        assert_eq!(out.as_basis_state(), Some(cfg("001111")));
        let Some(Record::Classical(rec)) = rec else {
            panic!("expected classical record")
        };
        assert_eq!(rec.rows().len(), 7);
        assert_eq!(rec.rows()[1], cfg("011110"));
        for row in &rec.rows()[1..6] {
            assert_ne!(*row, cfg("001111"));
        }
    }

    #[test]
    fn odd_separated_walls_bounce() {
        let st = PureState::<f64>::basis(cfg("000111"));
        let (_, rec) = evolve(
            &st,
            3,
            &GateParams::classical(),
            BoundaryCondition::Periodic,
            true,
        )
        .unwrap();
        let rec = rec.unwrap().classical().unwrap().clone();
        assert_eq!(rec.rows()[1], cfg("000010"));
        assert_eq!(rec.rows()[3], cfg("000111"));
        assert_eq!(rec.rows()[6], cfg("000111"));
    }

    #[test]
    fn superposed_branches_share_signal_weights() {
        let n = 6;
        let st = PureState::<f64>::from_amplitudes(
            n,
            [
                (cfg("000111"), c(FRAC_1_SQRT_2, 0.0)),
                (cfg("111000"), c(FRAC_1_SQRT_2, 0.0)),
            ],
        )
        .unwrap();
        let p = GateParams::classical();
        let mut s = st.clone();
        let mut branch = PureState::basis(cfg("000111"));
        for _ in 0..8 {
            s = evolve(&s, 1, &p, BoundaryCondition::Periodic, false)
                .unwrap()
                .0;
            branch = evolve(&branch, 1, &p, BoundaryCondition::Periodic, false)
                .unwrap()
                .0;
            assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
            let d1 = crate::dual::signal_distribution(&s, BoundaryCondition::Periodic);
            let d2 = crate::dual::signal_distribution(&branch, BoundaryCondition::Periodic);
            assert_eq!(d1.len(), 1);
            assert_eq!(d1.keys().collect::<Vec<_>>(), d2.keys().collect::<Vec<_>>());
        }
    }

    #[test]
    fn superposed_trajectory_records_marginals() {
        let st = PureState::<f64>::basis(cfg("000111"));
        let (_, rec) = evolve(
            &st,
            2,
            &GateParams::mass(0.0, 0.5, 0.2),
            BoundaryCondition::Periodic,
            true,
        )
        .unwrap();
        let Some(Record::Probabilistic(m)) = rec else {
            panic!("expected marginal record")
        };
        assert_eq!(m.rows.len(), 5);
        for row in &m.rows {
            assert!(row.iter().all(|&p| (0.0..=1.0 + 1e-12).contains(&p)));
        }
    }

    #[test]
    fn size_errors() {
        let st = PureState::<f64>::basis(cfg("01"));
        assert!(matches!(
            apply_goldilocks_layer(
                &st,
                Parity::Odd,
                &GateParams::classical(),
                BoundaryCondition::Periodic
            ),
            Err(GqcaError::Size(_))
        ));
        let odd_ring = PureState::<f64>::basis(cfg("01101"));
        assert!(apply_goldilocks_layer(
            &odd_ring,
            Parity::Odd,
            &GateParams::classical(),
            BoundaryCondition::Periodic
        )
        .is_err());
    }

    #[test]
    fn flip_examples() {
        let s = PureState::<f64>::basis(cfg("000"));
        assert_eq!(flip_state(&s), PureState::basis(cfg("111")));
        let sym = PureState::<f64>::from_amplitudes(
            2,
            [
                (cfg("01"), c(FRAC_1_SQRT_2, 0.0)),
                (cfg("10"), c(FRAC_1_SQRT_2, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(flip_state(&sym), sym);
    }

    #[test]
    fn schedule_errors_name_offending_event() {
        let bc = BoundaryCondition::Periodic;
        let bad = UpdateSchedule {
            n: 8,
            events: vec![(1, 0), (1, 1)],
        };
        match bad.validate(bc) {
            Err(GqcaError::Schedule {
                index, site, step, ..
            }) => {
                assert_eq!((index, site, step), (1, 1, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
        // even site before its odd neighbours
        let early = UpdateSchedule {
            n: 8,
            events: vec![(2, 0)],
        };
        assert!(early.validate(bc).is_err());
        // skipped step counter
        let skip = UpdateSchedule {
            n: 8,
            events: vec![(1, 1)],
        };
        assert!(skip.validate(bc).is_err());
    }

    #[test]
    fn synchronous_schedule_matches_evolve() {
        let bc = BoundaryCondition::Periodic;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let st = PureState::<f64>::random(8, &mut rng, Capacity::default()).unwrap();
        let p = GateParams::mass(0.7, 0.3, 0.1);
        let sched = UpdateSchedule::synchronous(8, 6);
        assert_eq!(sched.completed_layers(), Some(6));
        let a = evolve_async(&st, &sched, &p, bc).unwrap();
        let b = evolve(&st, 3, &p, bc, false).unwrap().0;
        assert_eq!(a, b);
    }

    #[test]
    fn looser_rule_order_matches_brickwork() {
        // evolve 1', 1'' before 2 versus plain brickwork, on a random basis state
        let bc = BoundaryCondition::Periodic;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bits: u64 = rng.random_range(0..256);
        let st = PureState::<f64>::basis(BasisConfig::new(8, bits).unwrap());
        let p = GateParams::mass(0.0, 0.3, 0.1);
        let shuffled = UpdateSchedule {
            n: 8,
            events: vec![
                (1, 0),
                (3, 0),
                (2, 0),
                (5, 0),
                (7, 0),
                (4, 0),
                (6, 0),
                (0, 0),
                (1, 1),
                (3, 1),
                (5, 1),
                (7, 1),
                (2, 1),
                (0, 1),
                (6, 1),
                (4, 1),
            ],
        };
        assert_eq!(shuffled.completed_layers(), Some(4));
        let a = evolve_async(&st, &shuffled, &p, bc).unwrap();
        let b = evolve(&st, 2, &p, bc, false).unwrap().0;
        assert!(a.distance(&b) <= 1e-12);
    }

    #[test]
    fn random_schedules_are_valid_and_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for bc in [
            BoundaryCondition::Periodic,
            BoundaryCondition::fixed(0, 1).unwrap(),
        ] {
            let s = UpdateSchedule::random(10, 7, bc, &mut rng).unwrap();
            s.validate(bc).unwrap();
            assert_eq!(s.completed_layers(), Some(7));
        }
    }

    #[test]
    fn capacity_limits_dense_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let small = Capacity { max_qubits: 4 };
        assert!(matches!(
            PureState::<f64>::random(5, &mut rng, small),
            Err(GqcaError::Capacity(_))
        ));
        assert!(PureState::<f64>::random(4, &mut rng, small).is_ok());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let c = cfg("0010110");
        assert_eq!(c.to_string(), "0010110");
        assert_eq!(c.get(2), 1);
        assert_eq!(c.wall_count(BoundaryCondition::Periodic), 4);
        assert_eq!(
            cfg("0001111").wall_count(BoundaryCondition::fixed(0, 1).unwrap()),
            1
        );
        assert!("01x".parse::<BasisConfig>().is_err());
        assert_eq!(
            "fixed:0:1".parse::<BoundaryCondition>().unwrap(),
            BoundaryCondition::Fixed { left: 0, right: 1 }
        );
    }

    fn arb_params() -> impl Strategy<Value = GateParams<f64>> {
        prop_oneof![
            (0.0..std::f64::consts::TAU, -3.0..3.0f64, 0.01..1.0f64)
                .prop_map(|(phi, m, e)| GateParams::mass(phi, m, e)),
            (
                -3.0..3.0f64,
                -3.0..3.0f64,
                0.0..1.0f64,
                -3.0..3.0f64,
                prop::bool::ANY
            )
                .prop_map(|(a, b, m, p, s)| GateParams::general(
                    a,
                    b,
                    m,
                    p,
                    if s { 1 } else { -1 }
                )),
        ]
    }

    proptest! {
        #[test]
        fn evolution_preserves_norm(seed in 0u64..1000, params in arb_params(), steps in 0usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let st = PureState::<f64>::random(8, &mut rng, Capacity::default()).unwrap();
            let out = evolve(&st, steps, &params, BoundaryCondition::Periodic, false).unwrap().0;
            prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn distant_gates_commute(seed in 0u64..1000, params in arb_params(), i in 0usize..10, gap in 2usize..8) {
            let n = 10;
            let j = (i + gap) % n;
            prop_assume!((i as isize - j as isize).rem_euclid(n as isize) > 1 && (j as isize - i as isize).rem_euclid(n as isize) > 1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let st = PureState::<f64>::random(n, &mut rng, Capacity::default()).unwrap();
            let gate = build_local_gate(&params).unwrap();
            let bc = BoundaryCondition::Periodic;
            let ij = apply_site_gate(&apply_site_gate(&st.amps, n, i, &gate, bc), n, j, &gate, bc);
            let ji = apply_site_gate(&apply_site_gate(&st.amps, n, j, &gate, bc), n, i, &gate, bc);
            prop_assert_eq!(ij.len(), ji.len());
            for (k, a) in &ij {
                prop_assert!((a - ji[k]).norm() <= 1e-15);
            }
        }

        #[test]
        fn massless_basis_trajectories_stay_classical(bits in 0u64..1024, steps in 0usize..12, phi in 0.0..6.0f64) {
            let st = PureState::<f64>::basis(BasisConfig::new(10, bits).unwrap());
            let (out, rec) = evolve(&st, steps, &GateParams::mass(phi, 0.0, 0.1), BoundaryCondition::Periodic, true).unwrap();
            prop_assert!(out.as_basis_state().is_some());
            prop_assert!(matches!(rec, Some(Record::Classical(_))));
        }

        #[test]
        fn flip_is_an_involution(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let st = PureState::<f64>::random(8, &mut rng, Capacity::default()).unwrap();
            prop_assert_eq!(flip_state(&flip_state(&st)), st);
        }
    }
}
