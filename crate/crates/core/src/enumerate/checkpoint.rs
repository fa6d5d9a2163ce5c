//! Resumable runs over a code range.
//!
//! A checkpointed run processes its range in chunks of a fixed stride and
//! can be saved after any chunk. The file layout is fixed-width
//! little-endian:
//!
//! ```text
//! magic        8 bytes  "SNCCKPT\0"
//! version      u32
//! n            u32
//! topk         u32
//! flags        u32      bit 0: fail-fast
//! stride       u64
//! range_start  u64
//! range_end    u64
//! next         u64      first unprocessed code
//! examined     u64
//! skipped      u64
//! verified     u64
//! halted       u64      0 or 1
//! cx_len       u64      followed by cx_len codes (u64)
//! topk_len     u64      followed by topk_len x (code u64, delta i64, num u64, den u64)
//! crc32        u32      over every preceding byte
//! ```

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use super::{verify_range_parallel, EnumerationRange, ExtremalRecord, ProgressSink, RangeResult, ScanOptions};
use crate::graph::{ExactRatio, GraphCode};

pub const CHECKPOINT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"SNCCKPT\0";
const FLAG_FAIL_FAST: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint i/o: {0}")]
    Io(#[from] io::Error),
    #[error("not a checkpoint file")]
    BadMagic,
    #[error("unsupported checkpoint version {found} (expected {CHECKPOINT_VERSION})")]
    Version { found: u32 },
    #[error("checkpoint is truncated")]
    Truncated,
    #[error("checkpoint checksum mismatch")]
    Checksum,
    #[error("checkpoint {field} is {found}, expected {expected}")]
    Mismatch { field: &'static str, expected: u64, found: u64 },
    #[error("invalid checkpoint: {0}")]
    Invalid(String),
}

/// Position and partial result of a chunked run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    range: EnumerationRange,
    stride: u64,
    fail_fast: bool,
    next: u64,
    partial: RangeResult,
}

impl Checkpoint {
    /// A run positioned at the start of `range`.
    pub fn new(range: EnumerationRange, stride: u64, options: &ScanOptions) -> Result<Self, CheckpointError> {
        if stride == 0 {
            return Err(CheckpointError::Invalid("stride must be positive".into()));
        }
        Ok(Checkpoint {
            range,
            stride,
            fail_fast: options.fail_fast,
            next: range.start(),
            partial: RangeResult::empty(range.n(), options.topk),
        })
    }

    /// Loads `path` if it exists and matches the run parameters, otherwise
    /// starts fresh.
    pub fn resume_or_new(
        path: &Path,
        range: EnumerationRange,
        stride: u64,
        options: &ScanOptions,
    ) -> Result<Self, CheckpointError> {
        let fresh = Checkpoint::new(range, stride, options)?;
        if !path.exists() {
            return Ok(fresh);
        }
        let loaded = Checkpoint::load(path)?;
        loaded.check_matches(&fresh)?;
        Ok(loaded)
    }

    pub fn range(&self) -> EnumerationRange {
        self.range
    }

    pub fn stride(&self) -> u64 {
        self.stride
    }

    /// First code not yet processed.
    pub fn next(&self) -> u64 {
        self.next
    }

    pub fn partial(&self) -> &RangeResult {
        &self.partial
    }

    pub fn into_result(self) -> RangeResult {
        self.partial
    }

    pub fn is_complete(&self) -> bool {
        self.next == self.range.end() || self.partial.halted
    }

    /// Rejects a checkpoint whose header differs from `expected`.
    pub fn check_matches(&self, expected: &Checkpoint) -> Result<(), CheckpointError> {
        let fields = [
            ("n", expected.range.n() as u64, self.range.n() as u64),
            ("topk", expected.partial.topk_capacity as u64, self.partial.topk_capacity as u64),
            ("fail-fast flag", u64::from(expected.fail_fast), u64::from(self.fail_fast)),
            ("stride", expected.stride, self.stride),
            ("range start", expected.range.start(), self.range.start()),
            ("range end", expected.range.end(), self.range.end()),
        ];
        for (field, expected, found) in fields {
            if expected != found {
                return Err(CheckpointError::Mismatch { field, expected, found });
            }
        }
        Ok(())
    }

    /// Processes up to `max_chunks` strides (all remaining when `None`),
    /// saving to `save_to` after each one.
    pub fn advance(
        &mut self,
        max_chunks: Option<u64>,
        workers: usize,
        progress_interval: u64,
        progress: ProgressSink<'_>,
        save_to: Option<&Path>,
    ) -> Result<(), CheckpointError> {
        let options = ScanOptions {
            topk: self.partial.topk_capacity,
            progress_interval,
            fail_fast: self.fail_fast,
        };
        let mut done = 0;
        while !self.is_complete() && max_chunks.is_none_or(|m| done < m) {
            let end = self.next.saturating_add(self.stride).min(self.range.end());
            let chunk = EnumerationRange::new(self.range.n(), self.next, end)
                .map_err(|e| CheckpointError::Invalid(e.to_string()))?;
            let result = verify_range_parallel(chunk, &options, workers, progress);
            self.next = end;
            let partial = std::mem::replace(&mut self.partial, RangeResult::empty(0, 0));
            self.partial = partial
                .merge(result)
                .map_err(|e| CheckpointError::Invalid(e.to_string()))?;
            if let Some(path) = save_to {
                self.save(path)?;
            }
            done += 1;
        }
        Ok(())
    }

    /// Writes atomically via a sibling temporary file.
    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, self.to_bytes())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        Checkpoint::from_bytes(&fs::read(path)?)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let p = &self.partial;
        let mut buf = Vec::with_capacity(112 + 8 * p.counterexamples.len() + 32 * p.topk.len());
        buf.extend_from_slice(MAGIC);
        for word in [
            CHECKPOINT_VERSION,
            self.range.n() as u32,
            p.topk_capacity as u32,
            if self.fail_fast { FLAG_FAIL_FAST } else { 0 },
        ] {
            buf.extend_from_slice(&word.to_le_bytes());
        }
        for word in [
            self.stride,
            self.range.start(),
            self.range.end(),
            self.next,
            p.total_examined,
            p.skipped_zero_outdeg,
            p.verified,
            u64::from(p.halted),
            p.counterexamples.len() as u64,
        ] {
            buf.extend_from_slice(&word.to_le_bytes());
        }
        for c in &p.counterexamples {
            buf.extend_from_slice(&c.index().to_le_bytes());
        }
        buf.extend_from_slice(&(p.topk.len() as u64).to_le_bytes());
        for t in &p.topk {
            buf.extend_from_slice(&t.code.index().to_le_bytes());
            buf.extend_from_slice(&i64::from(t.delta).to_le_bytes());
            buf.extend_from_slice(&u64::from(*t.ratio.numer()).to_le_bytes());
            buf.extend_from_slice(&u64::from(*t.ratio.denom()).to_le_bytes());
        }
        let crc = crc32fast::hash(&buf);
        buf.extend_from_slice(&crc.to_le_bytes());
        buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CheckpointError> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return Err(CheckpointError::BadMagic);
        }
        if bytes.len() < MAGIC.len() + 4 {
            return Err(CheckpointError::Truncated);
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
        if version != CHECKPOINT_VERSION {
            return Err(CheckpointError::Version { found: version });
        }
        let (body, tail) = bytes.split_at(bytes.len().checked_sub(4).ok_or(CheckpointError::Truncated)?);
        if body.len() < 12 {
            return Err(CheckpointError::Truncated);
        }
        let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
        if crc32fast::hash(body) != stored {
            return Err(CheckpointError::Checksum);
        }

        let mut r = Reader { bytes: body, pos: 12 };
        let n = r.u32()? as usize;
        let topk_capacity = r.u32()? as usize;
        let flags = r.u32()?;
        if flags & !FLAG_FAIL_FAST != 0 {
            return Err(CheckpointError::Invalid(format!("unknown flags {flags:#x}")));
        }
        let stride = r.u64()?;
        let start = r.u64()?;
        let end = r.u64()?;
        let next = r.u64()?;
        let range = EnumerationRange::new(n, start, end).map_err(|e| CheckpointError::Invalid(e.to_string()))?;
        let invalid = |msg: &str| CheckpointError::Invalid(msg.to_string());
        if stride == 0 {
            return Err(invalid("zero stride"));
        }

        let mut partial = RangeResult::empty(n, topk_capacity);
        partial.total_examined = r.u64()?;
        partial.skipped_zero_outdeg = r.u64()?;
        partial.verified = r.u64()?;
        partial.halted = match r.u64()? {
            0 => false,
            1 => true,
            _ => return Err(invalid("halted flag is not 0/1")),
        };
        let cx_len = r.len(8)?;
        for _ in 0..cx_len {
            let code = GraphCode::new(n, r.u64()?).map_err(|e| CheckpointError::Invalid(e.to_string()))?;
            partial.counterexamples.push(code);
        }
        let topk_len = r.len(32)?;
        for _ in 0..topk_len {
            let code = GraphCode::new(n, r.u64()?).map_err(|e| CheckpointError::Invalid(e.to_string()))?;
            let delta = i32::try_from(r.u64()? as i64).map_err(|_| invalid("delta out of range"))?;
            let num = u32::try_from(r.u64()?).map_err(|_| invalid("ratio numerator out of range"))?;
            let den = u32::try_from(r.u64()?).map_err(|_| invalid("ratio denominator out of range"))?;
            if den == 0 {
                return Err(invalid("zero ratio denominator"));
            }
            partial.topk.push(ExtremalRecord { code, delta, ratio: ExactRatio::new(num, den) });
        }
        if r.pos != body.len() {
            return Err(invalid("trailing bytes"));
        }

        if next < start || next > end {
            return Err(invalid("next code outside range"));
        }
        if !partial.halted && next != end && (next - start) % stride != 0 {
            return Err(invalid("next code is not on a stride boundary"));
        }
        if partial.total_examined != next - start && !partial.halted {
            return Err(invalid("examined count disagrees with position"));
        }
        if !partial.is_consistent() {
            return Err(invalid("counts do not add up"));
        }
        Ok(Checkpoint { range, stride, fail_fast: flags & FLAG_FAIL_FAST != 0, next, partial })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], CheckpointError> {
        let end = self.pos.checked_add(N).ok_or(CheckpointError::Truncated)?;
        let chunk = self.bytes.get(self.pos..end).ok_or(CheckpointError::Truncated)?;
        self.pos = end;
        Ok(chunk.try_into().expect("exact length"))
    }

    fn u32(&mut self) -> Result<u32, CheckpointError> {
        self.take::<4>().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Result<u64, CheckpointError> {
        self.take::<8>().map(u64::from_le_bytes)
    }

    /// A length prefix whose items of `item` bytes must fit in what is left.
    fn len(&mut self, item: usize) -> Result<usize, CheckpointError> {
        let len = self.u64()?;
        let left = (self.bytes.len() - self.pos) as u64;
        if len > left / item as u64 {
            return Err(CheckpointError::Truncated);
        }
        Ok(len as usize)
    }
}
