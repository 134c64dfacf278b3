//! Spacetime records of automaton runs.
//!
//! A run of half-layers is viewed as a diamond lattice. Vertex `(i, s)`
//! holds the value of site `i` at slice `s`; slice 0 carries the initial
//! values of the odd sites and slice `s >= 1` the sites freshly written by
//! half-layer `s - 1` (the initial even sites count as written by "layer
//! -1"). A vertex exists iff `i + s` is odd. Edges join `(i, s)` to
//! `(i +- 1, s + 1)`, and each carries the XOR of its endpoints.
//!
//! Vertex values and edge signals are stored separately so that a damaged
//! record can be detected by [`SpacetimeRecord::check_consistency`].

use crate::error::{GqcaError, Result};
use crate::num::Real;
use crate::qca::{site_value, BasisConfig, BoundaryCondition};
use std::fmt;

/// A spacetime point of the diamond lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub site: isize,
    pub slice: usize,
}

impl Vertex {
    pub fn new(site: isize, slice: usize) -> Self {
        Self { site, slice }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.site, self.slice)
    }
}

/// A classical run: one basis configuration per half-layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpacetimeRecord {
    n: usize,
    bc: BoundaryCondition,
    rows: Vec<BasisConfig>,
    /// `values[s][c]`, column `c` being site `c + column_offset`.
    values: Vec<Vec<Option<u8>>>,
    /// Signals on upward edges from `(col, s)`: `[towards site - 1, towards site + 1]`.
    signals: Vec<Vec<[Option<u8>; 2]>>,
}

impl SpacetimeRecord {
    pub fn from_rows(rows: Vec<BasisConfig>, bc: BoundaryCondition) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| GqcaError::Geometry("a record needs at least one row".into()))?;
        let n = first.n();
        if let Some(bad) = rows.iter().find(|r| r.n() != n) {
            return Err(GqcaError::Geometry(format!(
                "row {bad} has {} sites, expected {n}",
                bad.n()
            )));
        }
        if bc == BoundaryCondition::Periodic && n % 2 != 0 {
            return Err(GqcaError::Geometry(format!(
                "periodic records need an even site count, got {n}"
            )));
        }
        let mut rec = Self {
            n,
            bc,
            rows,
            values: Vec::new(),
            signals: Vec::new(),
        };
        let slices = rec.rows.len() + 1;
        let cols = rec.column_count();
        rec.values = (0..slices)
            .map(|s| {
                (0..cols)
                    .map(|c| {
                        let site = rec.site_of_column(c);
                        rec.is_vertex(Vertex::new(site, s))
                            .then(|| rec.raw_value(site, s))
                    })
                    .collect()
            })
            .collect();
        rec.signals = (0..slices)
            .map(|s| {
                (0..cols)
                    .map(|c| {
                        let v = Vertex::new(rec.site_of_column(c), s);
                        let mut out = [None, None];
                        for (k, d) in [-1isize, 1].into_iter().enumerate() {
                            if let Some(w) = rec.step(v, d, 1) {
                                out[k] = Some(rec.stored(v).unwrap() ^ rec.stored(w).unwrap());
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        Ok(rec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    /// The half-layer rows, initial configuration first.
    pub fn rows(&self) -> &[BasisConfig] {
        &self.rows
    }

    pub fn slice_count(&self) -> usize {
        self.rows.len() + 1
    }

    /// Sites that carry vertices: `0..n`, plus the two extremities `-1` and
    /// `n` under fixed boundaries.
    pub fn site_range(&self) -> std::ops::RangeInclusive<isize> {
        if self.bc.is_fixed() {
            -1..=self.n as isize
        } else {
            0..=self.n as isize - 1
        }
    }

    fn column_count(&self) -> usize {
        self.n + if self.bc.is_fixed() { 2 } else { 0 }
    }

    fn site_of_column(&self, c: usize) -> isize {
        c as isize - isize::from(self.bc.is_fixed())
    }

    fn column_of_site(&self, site: isize) -> usize {
        (site + isize::from(self.bc.is_fixed())) as usize
    }

    pub fn is_vertex(&self, v: Vertex) -> bool {
        self.site_range().contains(&v.site)
            && v.slice < self.slice_count()
            && (v.site + v.slice as isize).rem_euclid(2) == 1
    }

    fn raw_value(&self, site: isize, slice: usize) -> u8 {
        let row = &self.rows[slice.saturating_sub(1)];
        site_value(self.n, row.bits(), self.bc, site)
    }

    fn stored(&self, v: Vertex) -> Option<u8> {
        if !self.is_vertex(v) {
            return None;
        }
        self.values[v.slice][self.column_of_site(v.site)]
    }

    /// Recorded value at a vertex.
    pub fn value(&self, v: Vertex) -> Result<u8> {
        self.stored(v)
            .ok_or_else(|| GqcaError::Index(format!("{v} is not a vertex of this record")))
    }

    /// Moves from `v` by `dsite` in space and `dslice` (+-1) in time, if that
    /// lands on a vertex. Periodic records wrap in space.
    fn step(&self, v: Vertex, dsite: isize, dslice: isize) -> Option<Vertex> {
        let slice = v.slice as isize + dslice;
        if slice < 0 {
            return None;
        }
        let mut site = v.site + dsite;
        if self.bc == BoundaryCondition::Periodic {
            site = site.rem_euclid(self.n as isize);
        }
        let w = Vertex::new(site, slice as usize);
        self.is_vertex(w).then_some(w)
    }

    /// All vertices, slice by slice.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        for s in 0..self.slice_count() {
            for site in self.site_range() {
                let v = Vertex::new(site, s);
                if self.is_vertex(v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Lattice neighbours of `v` (up to four).
    pub fn neighbours(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(4);
        if !self.is_vertex(v) {
            return out;
        }
        for ds in [-1isize, 1] {
            for dt in [-1isize, 1] {
                if let Some(w) = self.step(v, ds, dt) {
                    if !out.contains(&w) {
                        out.push(w);
                    }
                }
            }
        }
        out
    }

    /// Stored signal on the edge `a`-`b`.
    pub fn signal(&self, a: Vertex, b: Vertex) -> Result<u8> {
        let (lo, hi) = if a.slice <= b.slice { (a, b) } else { (b, a) };
        if !self.is_vertex(lo) || !self.is_vertex(hi) || hi.slice != lo.slice + 1 {
            return Err(GqcaError::Path(format!("{a} and {b} are not adjacent")));
        }
        let slot = [-1isize, 1]
            .into_iter()
            .position(|d| self.step(lo, d, 1) == Some(hi))
            .ok_or_else(|| GqcaError::Path(format!("{a} and {b} are not adjacent")))?;
        self.signals[lo.slice][self.column_of_site(lo.site)][slot]
            .ok_or_else(|| GqcaError::Path(format!("no edge between {a} and {b}")))
    }

    /// Every edge as `(lower, upper)`.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for d in [-1isize, 1] {
                if let Some(w) = self.step(v, d, 1) {
                    out.push((v, w));
                }
            }
        }
        out
    }

    /// A copy whose value at `v` is flipped while the stored signals are
    /// left untouched.
    pub fn with_corrupted_value(&self, v: Vertex) -> Result<Self> {
        let old = self.value(v)?;
        let mut copy = self.clone();
        let c = copy.column_of_site(v.site);
        copy.values[v.slice][c] = Some(1 - old);
        Ok(copy)
    }

    /// Edges whose stored signal disagrees with the XOR of stored values.
    pub fn inconsistent_edges(&self) -> Vec<(Vertex, Vertex)> {
        self.edges()
            .into_iter()
            .filter(|&(a, b)| {
                let s = self.signal(a, b).expect("edge listed by edges()");
                s != self.stored(a).unwrap() ^ self.stored(b).unwrap()
            })
            .collect()
    }

    /// Ok when every edge signal matches its endpoints. Otherwise reports the
    /// vertex shared by all offending edges when there is one.
    pub fn check_consistency(&self) -> Result<()> {
        let bad = self.inconsistent_edges();
        if bad.is_empty() {
            return Ok(());
        }
        let suspect = bad
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .find(|v| bad.iter().all(|&(a, b)| a == *v || b == *v));
        Err(GqcaError::Geometry(match suspect {
            Some(v) => format!("{} inconsistent edges, all incident to {v}", bad.len()),
            None => format!(
                "{} inconsistent edges, first {} - {}",
                bad.len(),
                bad[0].0,
                bad[0].1
            ),
        }))
    }
}

/// Per-site probabilities of reading `1` after each half-layer; used when
/// the state is a superposition and no single classical record exists.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalRecord<T: Real> {
    pub n: usize,
    pub bc: BoundaryCondition,
    pub rows: Vec<Vec<T>>,
}

impl<T: Real> MarginalRecord<T> {
    pub fn new(n: usize, bc: BoundaryCondition, rows: Vec<Vec<T>>) -> Self {
        Self { n, bc, rows }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Record<T: Real> {
    Classical(SpacetimeRecord),
    /// Marginals only: the trajectory left the set of basis states.
    Probabilistic(MarginalRecord<T>),
}

impl<T: Real> Record<T> {
    pub fn is_probabilistic(&self) -> bool {
        matches!(self, Record::Probabilistic(_))
    }

    pub fn classical(&self) -> Option<&SpacetimeRecord> {
        match self {
            Record::Classical(r) => Some(r),
            Record::Probabilistic(_) => None,
        }
    }
}
