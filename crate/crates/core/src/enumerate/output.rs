//! Report rendering.
//!
//! The `lines` format is one JSON object per line: a `summary` record, then
//! one `topk` record per extremal entry and one `counterexample` record per
//! failing code. It carries no timing so that it is reproducible byte for
//! byte; the text format adds elapsed time and throughput.

use std::io::{self, Write};

use serde::Serialize;

use super::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Lines,
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record {
    Summary {
        n: usize,
        total: u64,
        range_start: u64,
        range_end: u64,
        examined: u64,
        skipped_zero_outdeg: u64,
        verified: u64,
        counterexamples: usize,
        topk_capacity: usize,
        halted: bool,
    },
    Topk {
        rank: usize,
        code: u64,
        delta: i32,
        ratio_num: u32,
        ratio_den: u32,
    },
    Counterexample {
        code: u64,
    },
}

pub fn write_lines<W: Write>(report: &VerificationReport, w: &mut W) -> io::Result<()> {
    let agg = &report.aggregate;
    let summary = Record::Summary {
        n: report.n,
        total: report.total,
        range_start: report.range.start(),
        range_end: report.range.end(),
        examined: agg.total_examined,
        skipped_zero_outdeg: agg.skipped_zero_outdeg,
        verified: agg.verified,
        counterexamples: agg.counterexamples.len(),
        topk_capacity: agg.topk_capacity,
        halted: agg.halted,
    };
    let records = std::iter::once(summary)
        .chain(agg.topk.iter().enumerate().map(|(i, t)| Record::Topk {
            rank: i + 1,
            code: t.code.index(),
            delta: t.delta,
            ratio_num: *t.ratio.numer(),
            ratio_den: *t.ratio.denom(),
        }))
        .chain(agg.counterexamples.iter().map(|c| Record::Counterexample { code: c.index() }));
    for record in records {
        serde_json::to_writer(&mut *w, &record)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_text<W: Write>(report: &VerificationReport, w: &mut W) -> io::Result<()> {
    let agg = &report.aggregate;
    writeln!(w, "n={} total={}", report.n, report.total)?;
    if report.range.len() != report.total {
        writeln!(w, "range=[{}, {})", report.range.start(), report.range.end())?;
    }
    writeln!(w, "examined={}", agg.total_examined)?;
    writeln!(w, "skipped_zero_outdeg={}", agg.skipped_zero_outdeg)?;
    writeln!(w, "min_outdeg_ge_1={}", agg.filtered())?;
    writeln!(w, "verified={}", agg.verified)?;
    writeln!(w, "counterexamples={}", agg.counterexamples.len())?;
    writeln!(
        w,
        "elapsed={:.3}s throughput={:.0} graphs/s filtered_throughput={:.0} graphs/s",
        report.elapsed.as_secs_f64(),
        report.throughput(),
        report.filtered_throughput()
    )?;
    for (i, t) in agg.topk.iter().enumerate() {
        writeln!(
            w,
            "topk {}: code={} delta={} ratio={}/{}",
            i + 1,
            t.code.index(),
            t.delta,
            t.ratio.numer(),
            t.ratio.denom()
        )?;
    }
    for c in &agg.counterexamples {
        writeln!(w, "counterexample: code={}", c.index())?;
        for (u, v) in c.decode().edges() {
            writeln!(w, "  {}->{}", u + 1, v + 1)?;
        }
    }
    if agg.halted {
        writeln!(w, "halted at first counterexample")?;
    }
    let verdict = if !agg.counterexamples.is_empty() {
        "COUNTEREXAMPLE FOUND"
    } else if report.is_complete() {
        "all graphs satisfy delta >= 0"
    } else {
        "incomplete run, no counterexample so far"
    };
    writeln!(w, "result: {verdict}")
}
