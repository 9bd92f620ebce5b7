//! Dense memo table of stopping counts with a bit-exact on-disk format.
//!
//! Layout: magic `CZMT`, version (u16 LE), convention byte (0=paper,
//! 1=standard), one reserved zero byte, the limit (u64 LE), then
//! `limit` consecutive u32 LE counts for n = 1..=limit. The all-ones
//! u32 is a sentinel meaning unknown (budget exhausted or overflowed)
//! and is never handed out as a real count.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::kernel::Convention;

pub const MEMO_MAGIC: [u8; 4] = *b"CZMT";
pub const MEMO_VERSION: u16 = 1;
/// Reserved count value meaning "unknown".
pub const SENTINEL: u32 = u32::MAX;

/// Immutable table of stopping counts for 1..=limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoTable {
    limit: u64,
    convention: Convention,
    counts: Vec<u32>,
}

impl MemoTable {
    /// Fills the table bottom-up: each seed walks until it dips below
    /// itself and reuses the already-memoized tail, so total work is
    /// proportional to the walked prefixes rather than full
    /// trajectories. Entries that exhaust `budget` or overflow are
    /// marked with the sentinel instead of failing the build.
    pub fn build(limit: u64, convention: Convention, budget: u32) -> Result<MemoTable> {
        if limit < 2 {
            return Err(Error::InvalidConfig(format!(
                "memo limit must be at least 2, got {limit}"
            )));
        }
        if budget == 0 {
            return Err(Error::InvalidConfig("memo budget must be at least 1".into()));
        }
        let len = usize::try_from(limit)
            .map_err(|_| Error::InvalidConfig(format!("memo limit {limit} does not fit memory")))?;
        let mut counts = vec![SENTINEL; len];
        counts[0] = convention.unit_count();
        for n in 2..=limit {
            counts[(n - 1) as usize] = fill_one(n, budget, &counts);
        }
        Ok(MemoTable {
            limit,
            convention,
            counts,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Memoized stopping count, or `None` when `n` is out of range or
    /// marked unknown.
    pub fn lookup(&self, n: u128) -> Option<u32> {
        if n == 0 || n > u128::from(self.limit) {
            return None;
        }
        match self.counts[(n - 1) as usize] {
            SENTINEL => None,
            c => Some(c),
        }
    }

    /// Stopping count of `n` accelerated by this table: walk until the
    /// orbit enters the memoized range, then splice the stored tail.
    /// Falls back to a plain walk when the table cannot answer.
    pub fn stopping_count(&self, n: u128, budget: u32) -> Result<u32> {
        if n == 0 {
            return Err(Error::precondition("value must be at least 1"));
        }
        if n == 1 {
            return Ok(self.convention.unit_count());
        }
        let mut v = n;
        let mut steps: u32 = 0;
        loop {
            // The entry for 1 is convention-dependent, so arrival at 1
            // is detected directly and never spliced from the table.
            if v == 1 {
                return Ok(steps);
            }
            if let Some(tail) = self.lookup(v) {
                return steps
                    .checked_add(tail)
                    .filter(|&s| s <= budget)
                    .ok_or(Error::BudgetExhausted { seed: n, budget });
            }
            if v & 1 == 0 {
                let tz = v.trailing_zeros();
                v >>= tz;
                steps = steps
                    .checked_add(tz)
                    .filter(|&s| s <= budget)
                    .ok_or(Error::BudgetExhausted { seed: n, budget })?;
            } else {
                if steps == budget {
                    return Err(Error::BudgetExhausted { seed: n, budget });
                }
                v = v
                    .checked_mul(3)
                    .and_then(|t| t.checked_add(1))
                    .ok_or(Error::Overflow { at: v })?;
                steps += 1;
            }
        }
    }

    /// Writes the table in the bit-exact format described above.
    pub fn save(&self, destination: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(destination)?);
        w.write_all(&MEMO_MAGIC)?;
        w.write_all(&MEMO_VERSION.to_le_bytes())?;
        w.write_all(&[convention_byte(self.convention), 0])?;
        w.write_all(&self.limit.to_le_bytes())?;
        let mut buf = Vec::with_capacity(4 * 16_384);
        for chunk in self.counts.chunks(16_384) {
            buf.clear();
            for &c in chunk {
                buf.extend_from_slice(&c.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a table back, validating magic, version, and payload size.
    pub fn load(source: &Path) -> Result<MemoTable> {
        let mut r = BufReader::new(File::open(source)?);
        let mut header = [0u8; 16];
        r.read_exact(&mut header)
            .map_err(|_| Error::Format("file shorter than the 16-byte header".into()))?;
        if header[0..4] != MEMO_MAGIC {
            return Err(Error::Format("bad magic, not a memo table".into()));
        }
        let version = u16::from_le_bytes([header[4], header[5]]);
        if version != MEMO_VERSION {
            return Err(Error::Format(format!(
                "unsupported version {version}, expected {MEMO_VERSION}"
            )));
        }
        let convention = match header[6] {
            0 => Convention::Paper,
            1 => Convention::Standard,
            other => return Err(Error::Format(format!("unknown convention byte {other}"))),
        };
        let limit = u64::from_le_bytes(header[8..16].try_into().unwrap());
        if limit < 2 {
            return Err(Error::Format(format!("limit {limit} below minimum of 2")));
        }
        let len = usize::try_from(limit)
            .map_err(|_| Error::Format(format!("limit {limit} does not fit memory")))?;
        let mut counts = vec![0u32; len];
        let mut raw = vec![0u8; 4 * 16_384];
        let mut filled = 0usize;
        while filled < len {
            let take = (len - filled).min(16_384);
            let bytes = &mut raw[..4 * take];
            r.read_exact(bytes)
                .map_err(|_| Error::Format("payload shorter than the declared limit".into()))?;
            for (i, word) in bytes.chunks_exact(4).enumerate() {
                counts[filled + i] = u32::from_le_bytes(word.try_into().unwrap());
            }
            filled += take;
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(Error::Format("trailing bytes after the payload".into()));
        }
        Ok(MemoTable {
            limit,
            convention,
            counts,
        })
    }

    /// Like [`MemoTable::load`], but rejects a file built under a
    /// different convention.
    pub fn load_expecting(source: &Path, convention: Convention) -> Result<MemoTable> {
        let table = MemoTable::load(source)?;
        if table.convention != convention {
            return Err(Error::ConventionMismatch {
                found: table.convention,
                requested: convention,
            });
        }
        Ok(table)
    }
}

fn convention_byte(c: Convention) -> u8 {
    match c {
        Convention::Paper => 0,
        Convention::Standard => 1,
    }
}

/// One ascending fill step: walk from `n` until the value drops below
/// `n` (then splice the memoized tail) or 1 is hit outright.
fn fill_one(n: u64, budget: u32, counts: &[u32]) -> u32 {
    let mut v = u128::from(n);
    let mut steps: u32 = 0;
    loop {
        if v & 1 == 0 {
            let tz = v.trailing_zeros();
            v >>= tz;
            steps = match steps.checked_add(tz) {
                Some(s) if s <= budget => s,
                _ => return SENTINEL,
            };
            if v == 1 {
                return steps;
            }
            if v < u128::from(n) {
                let tail = counts[(v - 1) as usize];
                if tail == SENTINEL {
                    return SENTINEL;
                }
                return match steps.checked_add(tail) {
                    Some(total) => total,
                    None => SENTINEL,
                };
            }
        }
        if steps == budget {
            return SENTINEL;
        }
        v = match v.checked_mul(3).and_then(|t| t.checked_add(1)) {
            Some(next) => next,
            None => return SENTINEL,
        };
        steps += 1;
    }
}
