//! Exhaustive verification of `delta >= 0` over every labeled oriented graph
//! on `n` vertices.
//!
//! The code space `[0, 3^C)` is cut into contiguous [`EnumerationRange`]s.
//! Each range is scanned independently into a [`RangeResult`]; results are
//! merged in range order, so the final report does not depend on how the
//! space was partitioned or how many workers ran.

mod checkpoint;
mod output;
mod topk;
mod walker;

use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{
    code_space, has_seymour_vertex_bits, min_outdegree_positive_bits, report_bits, GraphCode,
    GraphError,
};

pub use checkpoint::{Checkpoint, CheckpointError, CHECKPOINT_VERSION};
pub use output::{write_lines, write_text, OutputFormat};
pub use topk::{ExtremalRecord, TopK};
pub use walker::GraphWalker;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("range [{start}, {end}) is invalid for n={n} (code space is {limit})")]
    BadRange { n: usize, start: u64, end: u64, limit: u64 },
    #[error("cannot merge results for n={left_n}/m={left_m} with n={right_n}/m={right_m}")]
    MergeMismatch { left_n: usize, left_m: usize, right_n: usize, right_m: usize },
}

/// Half-open interval of codes `[start, end)` for a fixed `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EnumerationRange {
    n: usize,
    start: u64,
    end: u64,
}

impl EnumerationRange {
    pub fn new(n: usize, start: u64, end: u64) -> Result<Self, EnumerateError> {
        let limit = code_space(n)?;
        if start > end || end > limit {
            return Err(EnumerateError::BadRange { n, start, end, limit });
        }
        Ok(EnumerationRange { n, start, end })
    }

    /// `[0, 3^C)`.
    pub fn full(n: usize) -> Result<Self, EnumerateError> {
        Ok(EnumerationRange { n, start: 0, end: code_space(n)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.end
    }

    pub fn len(&self) -> u64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// Splits into `parts` contiguous pieces whose lengths differ by at most one.
    pub fn partition(&self, parts: usize) -> Vec<EnumerationRange> {
        let parts = parts.max(1) as u64;
        let (base, extra) = (self.len() / parts, self.len() % parts);
        let mut start = self.start;
        (0..parts)
            .map(|p| {
                let end = start + base + u64::from(p < extra);
                let piece = EnumerationRange { n: self.n, start, end };
                start = end;
                piece
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScanOptions {
    /// Number of extremal records to keep; `0` disables tracking.
    pub topk: usize,
    /// Emit a progress event after every this many codes; `0` disables.
    pub progress_interval: u64,
    /// Stop a range at its first counterexample.
    pub fail_fast: bool,
}

/// Emitted by a scan every `progress_interval` processed codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgressEvent {
    pub range: EnumerationRange,
    /// Codes of `range` processed so far, skipped ones included.
    pub processed: u64,
}

/// Receives progress events, possibly from several workers at once.
pub type ProgressSink<'a> = &'a (dyn Fn(&ProgressEvent) + Sync);

/// A sink that drops every event.
pub fn no_progress(_: &ProgressEvent) {}

/// Statistics for one scanned range, mergeable across disjoint ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeResult {
    pub n: usize,
    pub topk_capacity: usize,
    pub total_examined: u64,
    pub skipped_zero_outdeg: u64,
    pub verified: u64,
    /// Codes with `delta < 0`, ascending.
    pub counterexamples: Vec<GraphCode>,
    /// Up to `topk_capacity` smallest records, ascending.
    pub topk: Vec<ExtremalRecord>,
    /// A fail-fast scan stopped early.
    pub halted: bool,
}

impl RangeResult {
    pub fn empty(n: usize, topk_capacity: usize) -> Self {
        RangeResult {
            n,
            topk_capacity,
            total_examined: 0,
            skipped_zero_outdeg: 0,
            verified: 0,
            counterexamples: Vec::new(),
            topk: Vec::new(),
            halted: false,
        }
    }

    /// Graphs that passed the outdegree filter.
    pub fn filtered(&self) -> u64 {
        self.verified + self.counterexamples.len() as u64
    }

    pub fn is_consistent(&self) -> bool {
        self.total_examined == self.skipped_zero_outdeg + self.filtered()
            && self.topk.len() <= self.topk_capacity
            && self.topk.windows(2).all(|w| w[0] <= w[1])
            && self.counterexamples.windows(2).all(|w| w[0] < w[1])
    }

    /// Combines results of two disjoint ranges.
    pub fn merge(mut self, other: RangeResult) -> Result<RangeResult, EnumerateError> {
        if self.n != other.n || self.topk_capacity != other.topk_capacity {
            return Err(EnumerateError::MergeMismatch {
                left_n: self.n,
                left_m: self.topk_capacity,
                right_n: other.n,
                right_m: other.topk_capacity,
            });
        }
        self.total_examined += other.total_examined;
        self.skipped_zero_outdeg += other.skipped_zero_outdeg;
        self.verified += other.verified;
        self.halted |= other.halted;
        self.counterexamples.extend(other.counterexamples);
        self.counterexamples.sort_unstable();
        self.topk.extend(other.topk);
        self.topk.sort_unstable();
        self.topk.truncate(self.topk_capacity);
        Ok(self)
    }
}

/// Scans every code of `range` once.
///
/// Codes with a sink vertex are counted as skipped and never reach the
/// extremal list. With `topk == 0` a graph is accepted as soon as one vertex
/// has margin `>= 0`; otherwise all margins are computed so that `delta` and
/// the ratio are exact.
pub fn verify_range(
    range: EnumerationRange,
    options: &ScanOptions,
    progress: ProgressSink<'_>,
) -> RangeResult {
    let n = range.n;
    let mut result = RangeResult::empty(n, options.topk);
    if range.is_empty() {
        return result;
    }
    let mut walker = GraphWalker::new(n, range.start).expect("validated range");
    let mut top = TopK::new(options.topk);
    let mut until_progress = options.progress_interval;

    let mut index = range.start;
    loop {
        let out = walker.out();
        if !min_outdegree_positive_bits(out) {
            result.skipped_zero_outdeg += 1;
        } else if options.topk == 0 {
            if has_seymour_vertex_bits(out) {
                result.verified += 1;
            } else {
                result.counterexamples.push(GraphCode::new(n, index).expect("in range"));
            }
        } else {
            let report = report_bits(out);
            let code = GraphCode::new(n, index).expect("in range");
            if report.delta < 0 {
                result.counterexamples.push(code);
            } else {
                result.verified += 1;
            }
            if top.admits_delta(report.delta) {
                let ratio = report.ratio.expect("min outdegree >= 1 defines the ratio");
                top.offer(ExtremalRecord { code, delta: report.delta, ratio });
            }
        }
        result.total_examined += 1;

        if options.progress_interval > 0 {
            until_progress -= 1;
            if until_progress == 0 {
                until_progress = options.progress_interval;
                progress(&ProgressEvent { range, processed: result.total_examined });
            }
        }
        if options.fail_fast && !result.counterexamples.is_empty() {
            result.halted = index + 1 < range.end;
            break;
        }

        index += 1;
        if index == range.end {
            break;
        }
        walker.advance();
    }

    result.topk = top.into_sorted_vec();
    result
}

/// Scans `range` split across `workers` threads and merges in range order.
pub fn verify_range_parallel(
    range: EnumerationRange,
    options: &ScanOptions,
    workers: usize,
    progress: ProgressSink<'_>,
) -> RangeResult {
    let pieces = range.partition(workers);
    let results: Vec<RangeResult> = if pieces.len() == 1 {
        vec![verify_range(pieces[0], options, progress)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = pieces
                .iter()
                .map(|&piece| scope.spawn(move || verify_range(piece, options, progress)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("scan worker panicked"))
                .collect()
        })
    };
    results
        .into_iter()
        .try_fold(RangeResult::empty(range.n, options.topk), RangeResult::merge)
        .expect("pieces share n and capacity")
}

/// Outcome of a run over a code range, with wall-clock timing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub n: usize,
    /// Size of the whole code space, `3^C`.
    pub total: u64,
    pub range: EnumerationRange,
    pub aggregate: RangeResult,
    pub elapsed: Duration,
}

impl VerificationReport {
    /// Codes per second, skipped ones included. Diagnostic only.
    pub fn throughput(&self) -> f64 {
        rate(self.aggregate.total_examined, self.elapsed)
    }

    /// Filter-passing graphs per second. Diagnostic only.
    pub fn filtered_throughput(&self) -> f64 {
        rate(self.aggregate.filtered(), self.elapsed)
    }

    pub fn is_complete(&self) -> bool {
        self.aggregate.total_examined == self.range.len()
    }

    pub fn found_counterexample(&self) -> bool {
        !self.aggregate.counterexamples.is_empty()
    }
}

fn rate(count: u64, elapsed: Duration) -> f64 {
    let secs = elapsed.as_secs_f64();
    if secs > 0.0 {
        count as f64 / secs
    } else {
        0.0
    }
}

/// Verifies every oriented graph on `n` vertices.
pub fn verify_all(
    n: usize,
    options: &ScanOptions,
    workers: usize,
    progress: ProgressSink<'_>,
) -> Result<VerificationReport, EnumerateError> {
    verify_codes(EnumerationRange::full(n)?, options, workers, progress)
}

/// Verifies the codes of `range` and wraps the result in a timed report.
pub fn verify_codes(
    range: EnumerationRange,
    options: &ScanOptions,
    workers: usize,
    progress: ProgressSink<'_>,
) -> Result<VerificationReport, EnumerateError> {
    let started = Instant::now();
    let aggregate = verify_range_parallel(range, options, workers, progress);
    Ok(VerificationReport {
        n: range.n,
        total: code_space(range.n)?,
        range,
        aggregate,
        elapsed: started.elapsed(),
    })
}
