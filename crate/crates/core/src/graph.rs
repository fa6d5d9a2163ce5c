//! Labeled oriented graphs, their base-3 codes, and second-neighborhood
//! quantities.
//!
//! A graph on `n` vertices is stored as `n` out-neighborhood bitmasks, one
//! machine word per vertex. Vertex `i` is bit `i`. All neighborhood algebra
//! is plain `|`, `&` and `& !` on those words, so the counts below are exact.
//!
//! The code of a graph is the integer whose base-3 digits give the state of
//! each vertex pair `{i, j}` with `i < j`: `0` no edge, `1` edge `i -> j`,
//! `2` edge `j -> i`. Pairs are ordered lexicographically and the pair at
//! position `k` holds the coefficient of `3^k`.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

/// Largest order supported by [`OrientedGraph`] (one `u64` per vertex, bit 63 unused).
pub const MAX_ORDER: usize = 63;

/// Largest order whose code space `3^(n(n-1)/2)` fits in a `u64`.
pub const MAX_CODE_ORDER: usize = 9;

/// Smallest order accepted anywhere in the crate.
pub const MIN_ORDER: usize = 2;

/// Exact rational used for the extremal ratio diagnostic.
pub type ExactRatio = Ratio<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("order {n} is outside the supported range {min}..={max}")]
    UnsupportedOrder { n: usize, min: usize, max: usize },
    #[error("code {index} is out of range for n={n} (must be < {limit})")]
    CodeOutOfRange { n: usize, index: u64, limit: u64 },
    #[error("vertex {v} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edges {0}->{1} and {1}->{0} are both present")]
    Antiparallel(usize, usize),
}

/// Number of unordered vertex pairs, `n(n-1)/2`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Size of the code space `3^(n(n-1)/2)` for an enumerable order.
pub fn code_space(n: usize) -> Result<u64, GraphError> {
    check_order(n, MAX_CODE_ORDER)?;
    let pairs = u32::try_from(pair_count(n)).expect("pair count of n <= 9 fits in u32");
    Ok(3u64.pow(pairs))
}

/// Position of pair `{i, j}` (`i < j < n`) in the lexicographic pair order.
pub fn pair_position(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    // pairs (0, *) .. (i-1, *) come first
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `i < j < n`, in code-digit order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

fn check_order(n: usize, max: usize) -> Result<(), GraphError> {
    if (MIN_ORDER..=max).contains(&n) {
        Ok(())
    } else {
        Err(GraphError::UnsupportedOrder { n, min: MIN_ORDER, max })
    }
}

/// A set of vertices of one graph, backed by a single machine word.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Vertices in increasing order.
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = VertexSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;

    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let len = self.0.count_ones() as usize;
        (len, Some(len))
    }
}

impl ExactSizeIterator for VertexIter {}

/// Index into the base-3 code space of labeled oriented graphs on `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphCode {
    n: usize,
    index: u64,
}

impl GraphCode {
    pub fn new(n: usize, index: u64) -> Result<Self, GraphError> {
        let limit = code_space(n)?;
        if index >= limit {
            return Err(GraphError::CodeOutOfRange { n, index, limit });
        }
        Ok(GraphCode { n, index })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn index(self) -> u64 {
        self.index
    }

    /// Base-3 digits, least significant (pair `(0, 1)`) first.
    pub fn digits(self) -> Vec<u8> {
        let mut rest = self.index;
        (0..pair_count(self.n))
            .map(|_| {
                let d = (rest % 3) as u8;
                rest /= 3;
                d
            })
            .collect()
    }

    pub fn decode(self) -> OrientedGraph {
        OrientedGraph::decode(self)
    }
}

/// Per-vertex first and second out-neighborhood sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexReport {
    pub v: usize,
    pub d1: u32,
    pub d2: u32,
    pub margin: i32,
}

/// Graph-level second-neighborhood invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphReport {
    /// Maximum margin over all vertices.
    pub delta: i32,
    /// Least vertex attaining `delta`.
    pub witness: usize,
    /// Maximum of `d2 / d1` over all vertices. Only defined when every
    /// vertex has an out-neighbor.
    pub ratio: Option<ExactRatio>,
    pub min_outdeg: u32,
}

impl GraphReport {
    pub fn has_seymour_vertex(&self) -> bool {
        self.delta >= 0
    }
}

/// A loopless digraph without 2-cycles.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrientedGraph {
    out: Vec<u64>,
}

impl OrientedGraph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        check_order(n, MAX_ORDER)?;
        Ok(OrientedGraph { out: vec![0; n] })
    }

    /// Builds a graph from 0-based directed edges, rejecting loops and 2-cycles.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_order(n, MAX_ORDER)?;
        let mut out = vec![0u64; n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { v: w, n });
                }
            }
            out[u] |= 1 << v;
        }
        Self::from_out_bits(out)
    }

    /// Builds a graph from out-neighborhood sets, validating both invariants.
    pub fn from_out_sets(out: Vec<VertexSet>) -> Result<Self, GraphError> {
        Self::from_out_bits(out.into_iter().map(VertexSet::bits).collect())
    }

    pub(crate) fn from_out_bits(out: Vec<u64>) -> Result<Self, GraphError> {
        let n = out.len();
        check_order(n, MAX_ORDER)?;
        let all = VertexSet::full(n).bits();
        for (u, &mask) in out.iter().enumerate() {
            if mask & !all != 0 {
                let v = (mask & !all).trailing_zeros() as usize;
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            if mask >> u & 1 == 1 {
                return Err(GraphError::SelfLoop(u));
            }
            for v in VertexSet(mask) {
                if out[v] >> u & 1 == 1 {
                    return Err(GraphError::Antiparallel(u.min(v), u.max(v)));
                }
            }
        }
        Ok(OrientedGraph { out })
    }

    pub fn decode(code: GraphCode) -> Self {
        let n = code.n;
        let mut out = vec![0u64; n];
        let mut rest = code.index;
        for (i, j) in pairs(n) {
            match rest % 3 {
                1 => out[i] |= 1 << j,
                2 => out[j] |= 1 << i,
                _ => {}
            }
            rest /= 3;
        }
        debug_assert_eq!(rest, 0);
        OrientedGraph { out }
    }

    pub fn encode(&self) -> Result<GraphCode, GraphError> {
        let n = self.n();
        check_order(n, MAX_CODE_ORDER)?;
        let mut index = 0u64;
        let mut place = 1u64;
        for (i, j) in pairs(n) {
            let digit = if self.out[i] >> j & 1 == 1 {
                1
            } else if self.out[j] >> i & 1 == 1 {
                2
            } else {
                0
            };
            index += digit * place;
            // the last multiplication may leave the u64 range for n = 9
            place = place.wrapping_mul(3);
        }
        Ok(GraphCode { n, index })
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn out_sets(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.out.iter().map(|&m| VertexSet(m))
    }

    #[cfg(test)]
    pub(crate) fn out_bits(&self) -> &[u64] {
        &self.out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < 64 && self.out[u] >> v & 1 == 1
    }

    /// Edges `(u, v)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, &m)| VertexSet(m).iter().map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|m| m.count_ones() as usize).sum()
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { v, n: self.n() })
        }
    }

    pub fn out_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(VertexSet(self.out[v]))
    }

    pub fn in_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(self
            .out
            .iter()
            .enumerate()
            .filter(|(_, &m)| m >> v & 1 == 1)
            .map(|(u, _)| u)
            .collect())
    }

    /// Vertices at the end of a directed 2-path from `v` that are neither
    /// `v` nor out-neighbors of `v`.
    pub fn second_out_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(VertexSet(second_out_bits(&self.out, v)))
    }

    pub fn vertex_report(&self, v: usize) -> Result<VertexReport, GraphError> {
        self.check_vertex(v)?;
        Ok(vertex_report_bits(&self.out, v))
    }

    pub fn vertex_reports(&self) -> impl Iterator<Item = VertexReport> + '_ {
        (0..self.n()).map(|v| vertex_report_bits(&self.out, v))
    }

    pub fn report(&self) -> GraphReport {
        report_bits(&self.out)
    }

    pub fn min_outdegree_positive(&self) -> bool {
        min_outdegree_positive_bits(&self.out)
    }
}

impl fmt::Debug for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrientedGraph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

// Raw-mask kernels shared with the enumerator's inner loop.

#[inline]
pub(crate) fn second_out_bits(out: &[u64], v: usize) -> u64 {
    let first = out[v];
    let mut reach = 0u64;
    let mut rest = first;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        reach |= out[u];
        rest &= rest - 1;
    }
    reach & !(first | 1 << v)
}

#[inline]
pub(crate) fn vertex_report_bits(out: &[u64], v: usize) -> VertexReport {
    let d1 = out[v].count_ones();
    let d2 = second_out_bits(out, v).count_ones();
    debug_assert!(d1 > 0 || d2 == 0);
    VertexReport { v, d1, d2, margin: d2 as i32 - d1 as i32 }
}

#[inline]
pub(crate) fn min_outdegree_positive_bits(out: &[u64]) -> bool {
    out.iter().all(|&m| m != 0)
}

/// `true` as soon as some vertex has margin `>= 0`.
#[inline]
pub(crate) fn has_seymour_vertex_bits(out: &[u64]) -> bool {
    (0..out.len()).any(|v| second_out_bits(out, v).count_ones() >= out[v].count_ones())
}

pub(crate) fn report_bits(out: &[u64]) -> GraphReport {
    let mut delta = i32::MIN;
    let mut witness = 0;
    let mut min_outdeg = u32::MAX;
    // best d2/d1 kept as an unreduced pair, compared by cross-multiplication
    let mut best: Option<(u32, u32)> = None;
    for v in 0..out.len() {
        let r = vertex_report_bits(out, v);
        if r.margin > delta {
            delta = r.margin;
            witness = v;
        }
        min_outdeg = min_outdeg.min(r.d1);
        if r.d1 > 0 {
            best = match best {
                Some((num, den)) if u64::from(num) * u64::from(r.d1) >= u64::from(r.d2) * u64::from(den) => {
                    Some((num, den))
                }
                _ => Some((r.d2, r.d1)),
            };
        }
    }
    let ratio = if min_outdeg > 0 {
        best.map(|(num, den)| ExactRatio::new(num, den))
    } else {
        None
    };
    GraphReport { delta, witness, ratio, min_outdeg }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> OrientedGraph {
        OrientedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn pair_positions_are_lexicographic() {
        let listed: Vec<_> = pairs(4).collect();
        assert_eq!(listed, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for n in 2..=9 {
            for (k, (i, j)) in pairs(n).enumerate() {
                assert_eq!(pair_position(i, j, n), k);
            }
        }
    }

    #[test]
    fn code_space_sizes() {
        assert_eq!(code_space(2).unwrap(), 3);
        assert_eq!(code_space(3).unwrap(), 27);
        assert_eq!(code_space(5).unwrap(), 59_049);
        assert_eq!(code_space(6).unwrap(), 14_348_907);
        assert_eq!(code_space(9).unwrap(), 3u64.pow(36));
        assert!(matches!(code_space(10), Err(GraphError::UnsupportedOrder { n: 10, .. })));
        assert!(code_space(1).is_err());
    }

    #[test]
    fn decode_examples() {
        let g = GraphCode::new(2, 0).unwrap().decode();
        assert_eq!(g.edge_count(), 0);

        let g = GraphCode::new(2, 1).unwrap().decode();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);

        // digits (1, 1, 2) at pairs (0,1), (0,2), (1,2)
        let g = GraphCode::new(3, 22).unwrap().decode();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (2, 1)]);
        assert_eq!(GraphCode::new(3, 22).unwrap().digits(), vec![1, 1, 2]);
    }

    #[test]
    fn decode_rejects_out_of_range() {
        assert_eq!(
            GraphCode::new(3, 27),
            Err(GraphError::CodeOutOfRange { n: 3, index: 27, limit: 27 })
        );
        assert!(GraphCode::new(10, 0).is_err());
    }

    #[test]
    fn encode_examples() {
        assert_eq!(OrientedGraph::empty(3).unwrap().encode().unwrap().index(), 0);
        let g = GraphCode::new(3, 22).unwrap().decode();
        assert_eq!(g.encode().unwrap().index(), 22);
        assert_eq!(cycle3().encode().unwrap().index(), 16);
    }

    #[test]
    fn encode_rejects_large_orders() {
        let g = OrientedGraph::empty(10).unwrap();
        assert!(matches!(g.encode(), Err(GraphError::UnsupportedOrder { n: 10, .. })));
    }

    #[test]
    fn encode_largest_code_n9() {
        let last = code_space(9).unwrap() - 1;
        let code = GraphCode::new(9, last).unwrap();
        assert_eq!(code.decode().encode().unwrap(), code);
    }

    #[test]
    fn construction_rejects_invalid_graphs() {
        assert_eq!(OrientedGraph::from_edges(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            OrientedGraph::from_edges(3, [(2, 0), (0, 2)]),
            Err(GraphError::Antiparallel(0, 2))
        );
        assert_eq!(
            OrientedGraph::from_edges(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { v: 3, n: 3 })
        );
        assert!(OrientedGraph::empty(64).is_err());
        assert!(OrientedGraph::empty(1).is_err());
        assert!(OrientedGraph::empty(63).is_ok());
    }

    #[test]
    fn out_neighborhood_examples() {
        assert_eq!(cycle3().out_neighborhood(0).unwrap(), set(&[1]));
        let empty = OrientedGraph::empty(4).unwrap();
        assert!((0..4).all(|v| empty.out_neighborhood(v).unwrap().is_empty()));
        let g = GraphCode::new(3, 22).unwrap().decode();
        assert_eq!(g.out_neighborhood(0).unwrap(), set(&[1, 2]));
        assert_eq!(
            g.out_neighborhood(3),
            Err(GraphError::VertexOutOfRange { v: 3, n: 3 })
        );
    }

    #[test]
    fn second_out_neighborhood_examples() {
        assert_eq!(cycle3().second_out_neighborhood(0).unwrap(), set(&[2]));

        let star = OrientedGraph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        assert!(star.second_out_neighborhood(0).unwrap().is_empty());

        let chord = OrientedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        assert_eq!(chord.second_out_neighborhood(0).unwrap(), set(&[3]));
        assert!(chord.second_out_neighborhood(4).is_err());
    }

    #[test]
    fn vertex_report_examples() {
        let r = cycle3().vertex_report(0).unwrap();
        assert_eq!((r.d1, r.d2, r.margin), (1, 1, 0));

        let star = OrientedGraph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let r = star.vertex_report(1).unwrap();
        assert_eq!((r.d1, r.d2, r.margin), (0, 0, 0));

        let chord = OrientedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let r = chord.vertex_report(0).unwrap();
        assert_eq!((r.d1, r.d2, r.margin), (2, 1, -1));
    }

    #[test]
    fn graph_report_examples() {
        let r = cycle3().report();
        assert_eq!((r.delta, r.witness, r.min_outdeg), (0, 0, 1));
        assert_eq!(r.ratio, Some(ExactRatio::new(1, 1)));
        assert!(r.has_seymour_vertex());

        // sink at 3 forces delta >= 0 and leaves the ratio undefined
        let chord = OrientedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let r = chord.report();
        assert!(r.delta >= 0);
        assert_eq!(r.min_outdeg, 0);
        assert_eq!(r.ratio, None);
    }

    #[test]
    fn witness_is_least_maximizer() {
        // 4-cycle plus the chord 1 -> 3
        let g = OrientedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)]).unwrap();
        let margins: Vec<i32> = g.vertex_reports().map(|r| r.margin).collect();
        let best = *margins.iter().max().unwrap();
        let r = g.report();
        assert_eq!(r.delta, best);
        assert_eq!(r.witness, margins.iter().position(|&m| m == best).unwrap());
    }

    #[test]
    fn ratio_is_maximum_of_vertex_ratios() {
        let g = OrientedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)]).unwrap();
        let expected = g
            .vertex_reports()
            .map(|r| ExactRatio::new(r.d2, r.d1))
            .max()
            .unwrap();
        assert_eq!(g.report().ratio, Some(expected));
    }

    #[test]
    fn min_outdegree_examples() {
        assert!(!OrientedGraph::empty(3).unwrap().min_outdegree_positive());
        assert!(cycle3().min_outdegree_positive());
        let passing: Vec<u64> = (0..27)
            .filter(|&i| GraphCode::new(3, i).unwrap().decode().min_outdegree_positive())
            .collect();
        // the two orientations of the triangle
        assert_eq!(passing.len(), 2);
        assert!(passing.contains(&16));
    }

    #[test]
    fn vertex_set_basics() {
        let s = set(&[0, 3, 5]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 5]);
        assert!(s.contains(3) && !s.contains(4) && !s.contains(70));
        assert!(set(&[3]).is_subset(s));
        assert!(set(&[1, 2]).is_disjoint(s));
        assert_eq!(s.difference(set(&[3])), set(&[0, 5]));
        assert_eq!(VertexSet::full(63).len(), 63);
        assert_eq!(format!("{:?}", set(&[1, 2])), "{1, 2}");
    }
}
