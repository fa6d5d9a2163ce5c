//! Split-twin extensions and certified families built from them.
//!
//! Splitting `x` replaces it with twins `x'` and `x''`. Both twins receive
//! every in-edge of `x`; the out-neighborhood of `x` is partitioned into `A`
//! (kept by `x'`) and `B` (given to `x''`); the twins are not adjacent.
//! `x'` keeps index `x` and `x''` takes the new index `n`.
//!
//! If `v` has margin `>= 0`, `v != x` and `x` is not an out-neighbor of `v`,
//! the split leaves `|N1(v)|` unchanged and cannot shrink `|N2(v)|`, so `v`
//! stays a Seymour vertex. [`generate_family`] relies on this and re-checks
//! it at every step.

use std::fmt::Write as _;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{GraphError, OrientedGraph, VertexReport, VertexSet, MAX_ORDER};
use crate::text::{format_graph, format_set};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitTwinError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("A={a:?} and B={b:?} do not partition the out-neighborhood {out:?} of vertex {x}")]
    BadPartition { x: usize, a: VertexSet, b: VertexSet, out: VertexSet },
    #[error("graph already has {0} vertices; the extension would exceed {MAX_ORDER}")]
    AtCapacity(usize),
    #[error("preservation does not apply: {0}")]
    Hypothesis(String),
    #[error("vertex {v} lost its margin after splitting {x}: before {before:?}, after {after:?}")]
    PreservationViolated { v: usize, x: usize, before: VertexReport, after: VertexReport },
    #[error("seed has delta {0} < 0 and no Seymour vertex to track")]
    SeedWithoutSeymourVertex(i32),
    #[error("certificate failed at step {step}:\n{dump}")]
    CertificateFailure { step: usize, dump: String },
}

/// The vertex to split and the partition of its out-neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitTwinSpec {
    pub x: usize,
    pub a: VertexSet,
    pub b: VertexSet,
}

impl SplitTwinSpec {
    /// `A = N1(x)`, `B = {}`: the second twin becomes a sink.
    pub fn keep_all(g: &OrientedGraph, x: usize) -> Result<Self, SplitTwinError> {
        Ok(SplitTwinSpec { x, a: g.out_neighborhood(x)?, b: VertexSet::EMPTY })
    }

    /// Same split with the roles of the twins exchanged.
    pub fn mirrored(self) -> Self {
        SplitTwinSpec { x: self.x, a: self.b, b: self.a }
    }

    pub fn validate(&self, g: &OrientedGraph) -> Result<(), SplitTwinError> {
        let out = g.out_neighborhood(self.x)?;
        if self.a.union(self.b) != out || !self.a.is_disjoint(self.b) {
            return Err(SplitTwinError::BadPartition { x: self.x, a: self.a, b: self.b, out });
        }
        Ok(())
    }
}

/// Where the vertices of the original graph ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Relabeling {
    /// Order of the graph before the split.
    pub old_order: usize,
    /// Index of `x'`, equal to the split vertex.
    pub first_twin: usize,
    /// Index of `x''`, equal to `old_order`.
    pub second_twin: usize,
}

impl Relabeling {
    /// New index of an old vertex; the split vertex maps to `x'`.
    pub fn image(&self, v: usize) -> usize {
        debug_assert!(v < self.old_order);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub graph: OrientedGraph,
    pub relabeling: Relabeling,
}

pub fn split_twin_extend(g: &OrientedGraph, spec: &SplitTwinSpec) -> Result<Extension, SplitTwinError> {
    let n = g.n();
    if n >= MAX_ORDER {
        return Err(SplitTwinError::AtCapacity(n));
    }
    spec.validate(g)?;
    let x = spec.x;
    let twin = n;
    let mut out: Vec<VertexSet> = g.out_sets().collect();
    for (u, set) in out.iter_mut().enumerate() {
        if u != x && set.contains(x) {
            set.insert(twin);
        }
    }
    out[x] = spec.a;
    out.push(spec.b);
    let graph = OrientedGraph::from_out_sets(out)?;
    Ok(Extension {
        graph,
        relabeling: Relabeling { old_order: n, first_twin: x, second_twin: twin },
    })
}

/// Reports for `v` before and after one split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preservation {
    pub before: VertexReport,
    pub after: VertexReport,
}

impl Preservation {
    pub fn first_unchanged(&self) -> bool {
        self.after.d1 == self.before.d1
    }

    pub fn second_not_smaller(&self) -> bool {
        self.after.d2 >= self.before.d2
    }

    pub fn holds(&self) -> bool {
        self.first_unchanged() && self.second_not_smaller() && self.after.margin >= 0
    }
}

/// Splits per `spec` and compares `v` before and after.
///
/// Requires `v != x`, `x` outside `N1(v)` and `margin(v) >= 0`; anything else
/// is rejected rather than checked.
pub fn check_preservation(
    g: &OrientedGraph,
    v: usize,
    spec: &SplitTwinSpec,
) -> Result<Preservation, SplitTwinError> {
    let before = g.vertex_report(v)?;
    if v == spec.x {
        return Err(SplitTwinError::Hypothesis(format!("split vertex {v} is the tracked vertex")));
    }
    if g.out_neighborhood(v)?.contains(spec.x) {
        return Err(SplitTwinError::Hypothesis(format!(
            "split vertex {} is an out-neighbor of {v}",
            spec.x
        )));
    }
    if before.margin < 0 {
        return Err(SplitTwinError::Hypothesis(format!(
            "vertex {v} has margin {} < 0",
            before.margin
        )));
    }
    let ext = split_twin_extend(g, spec)?;
    let after = ext.graph.vertex_report(ext.relabeling.image(v))?;
    let record = Preservation { before, after };
    if !record.holds() {
        return Err(SplitTwinError::PreservationViolated { v, x: spec.x, before, after });
    }
    Ok(record)
}

/// Vertices that may be split while tracking `v`: not `v`, not in `N1(v)`.
pub fn eligible_split_vertices(g: &OrientedGraph, v: usize) -> Result<VertexSet, SplitTwinError> {
    let blocked = g.out_neighborhood(v)?.union(VertexSet::singleton(v));
    Ok(g.vertices().difference(blocked))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitPolicy {
    /// Smallest eligible vertex, everything kept by the first twin.
    FirstEligible,
    /// Uniform eligible vertex and a uniform random partition.
    Random { seed: u64 },
}

/// Evidence for one extension step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCertificate {
    pub step: usize,
    pub spec: SplitTwinSpec,
    pub tracked_before: usize,
    pub tracked_after: usize,
    pub relabeling: Relabeling,
    /// The tracked vertex, recomputed in the new graph.
    pub tracked_report: VertexReport,
    /// Full invariant of the new graph.
    pub delta: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyStatus {
    Complete,
    /// Every vertex is the tracked one or one of its out-neighbors.
    Exhausted { at_step: usize },
    /// The next extension would exceed the maximum order.
    Truncated { at_step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub seed: OrientedGraph,
    pub seed_report: VertexReport,
    pub steps: Vec<(OrientedGraph, FamilyCertificate)>,
    pub status: FamilyStatus,
}

impl Family {
    pub fn last_graph(&self) -> &OrientedGraph {
        self.steps.last().map_or(&self.seed, |(g, _)| g)
    }
}

/// Repeatedly splits vertices outside `N1(v) + v`, where `v` is the seed's
/// least Seymour vertex, re-verifying `v` and the whole graph after every step.
pub fn generate_family(seed: &OrientedGraph, steps: usize, policy: SplitPolicy) -> Result<Family, SplitTwinError> {
    let report = seed.report();
    if report.delta < 0 {
        return Err(SplitTwinError::SeedWithoutSeymourVertex(report.delta));
    }
    let mut tracked = report.witness;
    let seed_report = seed.vertex_report(tracked)?;
    let mut rng = match policy {
        SplitPolicy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        SplitPolicy::FirstEligible => None,
    };

    let mut current = seed.clone();
    let mut done = Vec::with_capacity(steps);
    let mut status = FamilyStatus::Complete;
    for step in 1..=steps {
        if current.n() >= MAX_ORDER {
            status = FamilyStatus::Truncated { at_step: step };
            break;
        }
        let eligible = eligible_split_vertices(&current, tracked)?;
        if eligible.is_empty() {
            status = FamilyStatus::Exhausted { at_step: step };
            break;
        }
        let spec = match rng.as_mut() {
            None => SplitTwinSpec::keep_all(&current, eligible.iter().next().expect("non-empty"))?,
            Some(rng) => {
                let pick = rng.gen_range(0..eligible.len() as usize);
                let x = eligible.iter().nth(pick).expect("pick below len");
                let out = current.out_neighborhood(x)?;
                let a: VertexSet = out.iter().filter(|_| rng.gen::<bool>()).collect();
                SplitTwinSpec { x, a, b: out.difference(a) }
            }
        };

        let ext = split_twin_extend(&current, &spec)?;
        let after = ext.relabeling.image(tracked);
        let tracked_report = ext.graph.vertex_report(after)?;
        let before = current.vertex_report(tracked)?;
        let delta = ext.graph.report().delta;
        let certificate = FamilyCertificate {
            step,
            spec,
            tracked_before: tracked,
            tracked_after: after,
            relabeling: ext.relabeling,
            tracked_report,
            delta,
        };
        let preserved = tracked_report.d1 == before.d1 && tracked_report.d2 >= before.d2;
        if tracked_report.margin < 0 || delta < 0 || !preserved {
            let mut dump = format!("{certificate:?}\nbefore:\n{}after:\n", format_graph(&current));
            dump.push_str(&format_graph(&ext.graph));
            return Err(SplitTwinError::CertificateFailure { step, dump });
        }
        tracked = after;
        current = ext.graph.clone();
        done.push((ext.graph, certificate));
    }
    Ok(Family { seed: seed.clone(), seed_report, steps: done, status })
}

/// One line per step, each followed by the graph in canonical text form.
pub fn write_family<W: Write>(family: &Family, w: &mut W) -> io::Result<()> {
    writeln!(
        w,
        "# seed v={} margin={}",
        family.seed_report.v + 1,
        family.seed_report.margin
    )?;
    w.write_all(format_graph(&family.seed).as_bytes())?;
    for (graph, cert) in &family.steps {
        writeln!(w, "{}", certificate_line(cert))?;
        w.write_all(format_graph(graph).as_bytes())?;
    }
    let status = match family.status {
        FamilyStatus::Complete => "complete".to_string(),
        FamilyStatus::Exhausted { at_step } => format!("exhausted at_step={at_step}"),
        FamilyStatus::Truncated { at_step } => format!("truncated at_step={at_step}"),
    };
    writeln!(w, "# status={status}")
}

/// `step=<i> x=<x> A=<set> B=<set> v=<v> margin=<m>`, 1-based.
pub fn certificate_line(cert: &FamilyCertificate) -> String {
    let mut line = String::new();
    write!(
        line,
        "step={} x={} A={} B={} v={} margin={}",
        cert.step,
        cert.spec.x + 1,
        format_set(cert.spec.a),
        format_set(cert.spec.b),
        cert.tracked_after + 1,
        cert.tracked_report.margin
    )
    .expect("writing to a String");
    line
}
