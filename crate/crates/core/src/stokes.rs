//! Parity of signals along spacetime paths, probes and the invisible pair.
//!
//! The XOR of the signals crossed by a lattice path equals the XOR of the
//! values at its two ends, whatever the path. Probes are the vertices a
//! coarse observer with resolution `N` sees: those with
//! `u = i - s = u0 (mod 2N)` and `v = i + s = v0 (mod 2N)`.

use crate::error::{GqcaError, Result};
use crate::qca::{evolve, BasisConfig, BoundaryCondition, GateParams, PureState};
use crate::record::{SpacetimeRecord, Vertex};
use std::collections::{BTreeSet, VecDeque};

/// An ordered sequence of vertices, consecutive ones adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePath {
    vertices: Vec<Vertex>,
}

impl LatticePath {
    pub fn new(record: &SpacetimeRecord, vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(GqcaError::Path("empty path".into()));
        }
        for v in &vertices {
            if !record.is_vertex(*v) {
                return Err(GqcaError::Path(format!("{v} is not a vertex")));
            }
        }
        for w in vertices.windows(2) {
            if !record.neighbours(w[0]).contains(&w[1]) {
                return Err(GqcaError::Path(format!(
                    "{} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn hops(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }
}

/// XOR of the recorded signals along the path.
pub fn path_parity(record: &SpacetimeRecord, path: &LatticePath) -> Result<u8> {
    path.vertices
        .windows(2)
        .try_fold(0u8, |acc, w| Ok(acc ^ record.signal(w[0], w[1])?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StokesReport {
    /// `e1 ^ e2` from the recorded probe values.
    pub expected: u8,
    pub paths_checked: usize,
    /// Indices of paths whose parity differs from `expected`.
    pub mismatches: Vec<usize>,
    /// All paths share one parity.
    pub path_independent: bool,
    /// Present when the record's signals disagree with its values.
    pub inconsistency: Option<String>,
}

impl StokesReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty() && self.path_independent && self.inconsistency.is_none()
    }
}

/// Checks every supplied path between the two probes.
pub fn verify_stokes(
    record: &SpacetimeRecord,
    probes: (Vertex, Vertex),
    paths: &[LatticePath],
) -> Result<StokesReport> {
    let expected = record.value(probes.0)? ^ record.value(probes.1)?;
    let mut mismatches = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, p) in paths.iter().enumerate() {
        let ends = (p.start(), p.end());
        if ends != probes && ends != (probes.1, probes.0) {
            return Err(GqcaError::Path(format!(
                "path {k} runs {} -> {}, not between the probes",
                ends.0, ends.1
            )));
        }
        let parity = path_parity(record, p)?;
        seen.insert(parity);
        if parity != expected {
            mismatches.push(k);
        }
    }
    Ok(StokesReport {
        expected,
        paths_checked: paths.len(),
        mismatches,
        path_independent: seen.len() <= 1,
        inconsistency: record.check_consistency().err().map(|e| e.to_string()),
    })
}

/// Every simple path from `from` to `to` with at most `max_hops` hops.
pub fn simple_paths(
    record: &SpacetimeRecord,
    from: Vertex,
    to: Vertex,
    max_hops: usize,
) -> Result<Vec<LatticePath>> {
    if !record.is_vertex(from) || !record.is_vertex(to) {
        return Err(GqcaError::Path(format!("{from} or {to} is not a vertex")));
    }
    let mut out = Vec::new();
    let mut stack = vec![from];
    walk_simple(
        record,
        &mut stack,
        max_hops,
        &mut |path: &[Vertex], _closing| {
            if *path.last().unwrap() == to {
                out.push(LatticePath {
                    vertices: path.to_vec(),
                });
            }
        },
    );
    Ok(out)
}

/// Depth-first enumeration of simple paths from `stack[0]`. The callback
/// sees every path prefix; `closing` is true when the last hop returns to
/// the start (a cycle of at least three edges).
fn walk_simple(
    record: &SpacetimeRecord,
    stack: &mut Vec<Vertex>,
    max_hops: usize,
    visit: &mut impl FnMut(&[Vertex], bool),
) {
    visit(stack, false);
    if stack.len() > max_hops {
        return;
    }
    let here = *stack.last().unwrap();
    for next in record.neighbours(here) {
        if next == stack[0] && stack.len() >= 3 {
            stack.push(next);
            visit(stack, true);
            stack.pop();
        } else if !stack.contains(&next) {
            stack.push(next);
            walk_simple(record, stack, max_hops, visit);
            stack.pop();
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExhaustiveReport {
    pub paths_checked: u64,
    pub loops_checked: u64,
    pub violations: u64,
    pub first_violation: Option<(Vertex, Vertex)>,
}

impl ExhaustiveReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }

    fn merge(&mut self, other: ExhaustiveReport) {
        self.paths_checked += other.paths_checked;
        self.loops_checked += other.loops_checked;
        self.violations += other.violations;
        self.first_violation = self.first_violation.or(other.first_violation);
    }
}

/// Walks every simple path of at most `max_hops` hops from every vertex and
/// checks the parity law against the recorded end values, and that every
/// closed loop has parity 0.
pub fn exhaustive_stokes_check(record: &SpacetimeRecord, max_hops: usize) -> ExhaustiveReport {
    let mut total = ExhaustiveReport::default();
    for source in record.vertices() {
        total.merge(check_from(record, source, max_hops));
    }
    total
}

fn check_from(record: &SpacetimeRecord, source: Vertex, max_hops: usize) -> ExhaustiveReport {
    let mut rep = ExhaustiveReport::default();
    let e0 = record.value(source).expect("listed vertex");
    let mut stack = vec![source];
    let mut parities = vec![0u8];
    dfs_parity(record, &mut stack, &mut parities, max_hops, e0, &mut rep);
    rep
}

fn dfs_parity(
    record: &SpacetimeRecord,
    stack: &mut Vec<Vertex>,
    parities: &mut Vec<u8>,
    max_hops: usize,
    e0: u8,
    rep: &mut ExhaustiveReport,
) {
    let here = *stack.last().unwrap();
    let parity = *parities.last().unwrap();
    if stack.len() > 1 {
        rep.paths_checked += 1;
        if parity != e0 ^ record.value(here).expect("vertex") {
            rep.violations += 1;
            rep.first_violation.get_or_insert((stack[0], here));
        }
    }
    if stack.len() > max_hops {
        return;
    }
    for next in record.neighbours(here) {
        let s = record.signal(here, next).expect("adjacent");
        if next == stack[0] && stack.len() >= 3 {
            rep.loops_checked += 1;
            if parity ^ s != 0 {
                rep.violations += 1;
                rep.first_violation.get_or_insert((stack[0], stack[0]));
            }
        } else if !stack.contains(&next) {
            stack.push(next);
            parities.push(parity ^ s);
            dfs_parity(record, stack, parities, max_hops, e0, rep);
            stack.pop();
            parities.pop();
        }
    }
}

/// Rebuilds every vertex value from one probe value and the signals
/// (breadth-first spanning tree). `None` for vertices not connected to the
/// probe.
pub fn reconstruct_from_probe(
    record: &SpacetimeRecord,
    probe: Vertex,
) -> Result<Vec<(Vertex, Option<u8>)>> {
    let root = record.value(probe)?;
    let mut known = std::collections::BTreeMap::new();
    known.insert(probe, root);
    let mut queue = VecDeque::from([probe]);
    while let Some(v) = queue.pop_front() {
        let ev = known[&v];
        for w in record.neighbours(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = known.entry(w) {
                e.insert(ev ^ record.signal(v, w)?);
                queue.push_back(w);
            }
        }
    }
    Ok(record
        .vertices()
        .into_iter()
        .map(|v| (v, known.get(&v).copied()))
        .collect())
}

/// Probe lattice: vertices with `i - s = u0` and `i + s = v0` modulo `2N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeLattice {
    pub spacing: usize,
    pub u0: isize,
    pub v0: isize,
}

impl ProbeLattice {
    pub fn new(spacing: usize, u0: isize, v0: isize) -> Result<Self> {
        if spacing == 0 {
            return Err(GqcaError::Parameter(
                "probe spacing must be positive".into(),
            ));
        }
        if (u0 - v0).rem_euclid(2) != 0 || u0.rem_euclid(2) != 1 {
            return Err(GqcaError::Parameter(format!(
                "probe offsets ({u0}, {v0}) miss the vertex lattice (both must be odd)"
            )));
        }
        Ok(Self { spacing, u0, v0 })
    }

    pub fn contains(&self, v: Vertex) -> bool {
        let m = 2 * self.spacing as isize;
        let s = v.slice as isize;
        (v.site - s - self.u0).rem_euclid(m) == 0 && (v.site + s - self.v0).rem_euclid(m) == 0
    }

    pub fn probes(&self, record: &SpacetimeRecord) -> Vec<Vertex> {
        record
            .vertices()
            .into_iter()
            .filter(|&v| self.contains(v))
            .collect()
    }

    /// Probe values slice by slice.
    pub fn sequence(&self, record: &SpacetimeRecord) -> Vec<u8> {
        self.probes(record)
            .into_iter()
            .map(|v| record.value(v).expect("probe is a vertex"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvisiblePairReport {
    pub n: usize,
    pub separation: usize,
    pub spacing: usize,
    pub probes: ProbeLattice,
    pub vacuum: SpacetimeRecord,
    pub pair: SpacetimeRecord,
    pub vacuum_probe_values: Vec<u8>,
    pub pair_probe_values: Vec<u8>,
    /// Probe sequences agree byte for byte.
    pub probes_identical: bool,
    /// Vertices whose fine value differs between the two records.
    pub differing_vertices: Vec<Vertex>,
    /// Every differing vertex lies between the two rays.
    pub differences_in_strip: bool,
    /// `d >= N`: the pair does not fit between neighbouring probes.
    pub resolvable: bool,
    /// The one-wall control's probes show both values.
    pub single_wall_detected: bool,
}

impl InvisiblePairReport {
    /// The observed outcome agrees with the resolution argument.
    pub fn consistent(&self) -> bool {
        self.single_wall_detected
            && !self.differing_vertices.is_empty()
            && (self.resolvable || (self.probes_identical && self.differences_in_strip))
    }
}

/// Vacuum versus vacuum plus two walls `d` edges apart on a ring of `n`
/// sites, both seen through probes of spacing `N`, with `m = 0`. The left
/// wall sits on an even edge so that for even `d` both walls move right in
/// parallel; the probe lines are placed just left of it.
pub fn invisible_pair_demo(
    n: usize,
    separation: usize,
    spacing: usize,
) -> Result<InvisiblePairReport> {
    let d = separation;
    if d == 0 {
        return Err(GqcaError::Parameter("separation must be positive".into()));
    }
    if spacing == 0 || !n.is_multiple_of(2 * spacing) || n < 2 * d + 4 {
        return Err(GqcaError::Size(format!(
            "ring of {n} sites must be a multiple of 2N = {} and leave room for the pair",
            2 * spacing
        )));
    }
    let bc = BoundaryCondition::Periodic;
    let steps = 2 * spacing;
    let params = GateParams::<f64>::classical();
    let record = |cfg: BasisConfig, bc: BoundaryCondition| -> Result<SpacetimeRecord> {
        let (_, rec) = evolve(&PureState::basis(cfg), steps, &params, bc, true)?;
        Ok(rec
            .and_then(|r| r.classical().cloned())
            .expect("massless runs stay classical"))
    };
    let p1 = 2 * ((n / 2 - d) / 2) as isize;
    let p2 = p1 + d as isize;
    // sites p1+1..=p2 flipped
    let bits = (p1 + 1..=p2).fold(0u64, |acc, i| acc | 1 << i);
    let vacuum = record(BasisConfig::zeros(n)?, bc)?;
    let pair = record(BasisConfig::new(n, bits)?, bc)?;
    let probes = ProbeLattice::new(spacing, p1 - 1, p1 - 1)?;
    let vacuum_probe_values = probes.sequence(&vacuum);
    let pair_probe_values = probes.sequence(&pair);
    let differing_vertices: Vec<Vertex> = vacuum
        .vertices()
        .into_iter()
        .filter(|&v| vacuum.value(v).ok() != pair.value(v).ok())
        .collect();
    let in_strip = |v: &Vertex| {
        let u = v.site - v.slice as isize;
        // rays are lightlike lines u = const, modulo the ring
        (p1..=p2).any(|x| (u - x).rem_euclid(n as isize) == 0)
    };
    let differences_in_strip = differing_vertices.iter().all(in_strip);

    let control_bc = BoundaryCondition::Fixed { left: 0, right: 1 };
    let control = record(crate::dual::one_wall_config(n, p1)?, control_bc)?;
    let control_values: BTreeSet<u8> = probes.sequence(&control).into_iter().collect();

    Ok(InvisiblePairReport {
        n,
        separation: d,
        spacing,
        probes,
        probes_identical: vacuum_probe_values == pair_probe_values,
        vacuum,
        pair,
        vacuum_probe_values,
        pair_probe_values,
        differing_vertices,
        differences_in_strip,
        resolvable: d >= spacing,
        single_wall_detected: control_values.len() == 2,
    })
}
