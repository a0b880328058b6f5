//! Bit-packed storage of the input string.
//!
//! Characters are integers in `[0..sigma)` stored `bits_per_char` bits each,
//! little-endian within 64-bit words (lowest character index in the lowest
//! bits). Virtual sentinels at positions `-1` and `n` decode to `sigma` and
//! `sigma + 1`; they are never stored.

use crate::error::{Error, Result};

pub const WORD_BITS: u64 = 64;

/// A string over `[0..sigma)` in packed form. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedText {
    n: usize,
    sigma: u32,
    bits_per_char: u32,
    words: Vec<u64>,
}

#[inline]
fn bits_for(sigma: u32) -> u32 {
    let s = sigma.max(2);
    32 - (s - 1).leading_zeros()
}

impl PackedText {
    /// Packs `raw` over alphabet `[0..sigma)`.
    pub fn encode(raw: &[u8], sigma: u32) -> Result<PackedText> {
        Self::encode_u32_iter(raw.iter().map(|&b| b as u32), raw.len(), sigma)
    }

    /// Packs a sequence of already-widened characters.
    pub fn encode_u32(raw: &[u32], sigma: u32) -> Result<PackedText> {
        Self::encode_u32_iter(raw.iter().copied(), raw.len(), sigma)
    }

    fn encode_u32_iter(
        it: impl Iterator<Item = u32>,
        n: usize,
        sigma: u32,
    ) -> Result<PackedText> {
        assert!(sigma >= 1, "alphabet size must be at least 1");
        let b = bits_for(sigma);
        let total_bits = (n as u64) * (b as u64);
        let mut words = vec![0u64; total_bits.div_ceil(WORD_BITS) as usize];
        for (i, c) in it.enumerate() {
            if c >= sigma {
                return Err(Error::CharacterOutOfAlphabet {
                    position: i,
                    value: c,
                    sigma,
                });
            }
            let bit = i as u64 * b as u64;
            let (w, off) = ((bit / WORD_BITS) as usize, bit % WORD_BITS);
            words[w] |= (c as u64) << off;
            if off + b as u64 > WORD_BITS {
                words[w + 1] |= (c as u64) >> (WORD_BITS - off);
            }
        }
        Ok(PackedText {
            n,
            sigma,
            bits_per_char: b,
            words,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn bits_per_char(&self) -> u32 {
        self.bits_per_char
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Character at `i` without sentinel handling. `i < n` required.
    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        debug_assert!(i < self.n);
        let b = self.bits_per_char as u64;
        let bit = i as u64 * b;
        let (w, off) = ((bit / WORD_BITS) as usize, bit % WORD_BITS);
        let mut v = self.words[w] >> off;
        if off + b > WORD_BITS {
            v |= self.words[w + 1] << (WORD_BITS - off);
        }
        (v & ((1u64 << b) - 1)) as u32
    }

    /// Character access with virtual sentinels: `access(-1) = sigma`,
    /// `access(n) = sigma + 1`.
    pub fn access(&self, i: i64) -> Result<u32> {
        if i == -1 {
            Ok(self.sigma)
        } else if i == self.n as i64 {
            Ok(self.sigma + 1)
        } else if i < -1 || i > self.n as i64 {
            Err(Error::OutOfBounds(i, self.n))
        } else {
            Ok(self.get(i as usize))
        }
    }

    /// Sentinel-aware access for maximality checks; panics outside `[-1..=n]`.
    #[inline]
    pub fn at_signed(&self, i: i64) -> u32 {
        if i == -1 {
            self.sigma
        } else if i == self.n as i64 {
            self.sigma + 1
        } else {
            self.get(i as usize)
        }
    }

    /// `len` characters starting at `i` packed into one integer key.
    /// Injective for a fixed `len`.
    pub fn extract_block(&self, i: usize, len: usize) -> Result<u64> {
        let b = self.bits_per_char as u64;
        let bits = len as u64 * b;
        if bits > WORD_BITS {
            return Err(Error::BlockTooLong { len, bits });
        }
        if i + len > self.n {
            return Err(Error::OutOfBounds((i + len) as i64, self.n));
        }
        if len == 0 {
            return Ok(0);
        }
        let bit = i as u64 * b;
        let (w, off) = ((bit / WORD_BITS) as usize, bit % WORD_BITS);
        let mut v = self.words[w] >> off;
        if off + bits > WORD_BITS {
            v |= self.words[w + 1] << (WORD_BITS - off);
        }
        if bits == WORD_BITS {
            Ok(v)
        } else {
            Ok(v & ((1u64 << bits) - 1))
        }
    }

    /// Decodes the whole text.
    pub fn decode(&self) -> Vec<u32> {
        (0..self.n).map(|i| self.get(i)).collect()
    }

    /// Decodes `range` into `out` (cleared first).
    pub fn decode_range_into(&self, start: usize, end: usize, out: &mut Vec<u32>) {
        debug_assert!(start <= end && end <= self.n);
        out.clear();
        out.extend((start..end).map(|i| self.get(i)));
    }

    // ---- On-disk format -------------------------------------------------
    //
    // magic "PKSQ", version 0x01, u64 LE n, u32 LE sigma, then
    // ceil(n*bits_per_char/8) payload bytes, bits little-endian in each byte.

    pub const MAGIC: &'static [u8; 4] = b"PKSQ";

    pub fn to_file_bytes(&self) -> Vec<u8> {
        let payload_len = ((self.n as u64 * self.bits_per_char as u64) as usize).div_ceil(8);
        let mut out = Vec::with_capacity(17 + payload_len);
        out.extend_from_slice(Self::MAGIC);
        out.push(0x01);
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&self.sigma.to_le_bytes());
        'outer: for w in &self.words {
            for byte in w.to_le_bytes() {
                if out.len() == 17 + payload_len {
                    break 'outer;
                }
                out.push(byte);
            }
        }
        out.resize(17 + payload_len, 0);
        out
    }

    pub fn from_file_bytes(data: &[u8]) -> Result<PackedText> {
        if data.len() < 17 || &data[0..4] != Self::MAGIC {
            return Err(Error::BadFormat("missing PKSQ magic".into()));
        }
        if data[4] != 0x01 {
            return Err(Error::BadFormat(format!("unsupported version {}", data[4])));
        }
        let n = u64::from_le_bytes(data[5..13].try_into().unwrap()) as usize;
        let sigma = u32::from_le_bytes(data[13..17].try_into().unwrap());
        if sigma == 0 {
            return Err(Error::BadFormat("sigma must be at least 1".into()));
        }
        let b = bits_for(sigma);
        let payload_len = ((n as u64 * b as u64) as usize).div_ceil(8);
        let payload = &data[17..];
        if payload.len() != payload_len {
            return Err(Error::BadFormat(format!(
                "expected {payload_len} payload bytes, found {}",
                payload.len()
            )));
        }
        let mut words = vec![0u64; (n as u64 * b as u64).div_ceil(WORD_BITS) as usize];
        for (k, &byte) in payload.iter().enumerate() {
            words[k / 8] |= (byte as u64) << (8 * (k % 8));
        }
        let text = PackedText {
            n,
            sigma,
            bits_per_char: b,
            words,
        };
        // Reject payloads whose decoded characters escape the alphabet and
        // nonzero padding bits, so encode(decode(..)) reproduces the bytes.
        for i in 0..n {
            let c = text.get(i);
            if c >= sigma {
                return Err(Error::CharacterOutOfAlphabet {
                    position: i,
                    value: c,
                    sigma,
                });
            }
        }
        let used = n as u64 * b as u64;
        if used % WORD_BITS != 0 {
            if let Some(&last) = text.words.last() {
                if last >> (used % WORD_BITS) != 0 {
                    return Err(Error::BadFormat("nonzero padding bits".into()));
                }
            }
        }
        Ok(text)
    }
}

/// Parameters for the run and synchronizing-set machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TauConfig {
    /// Block parameter for the tau-run machinery.
    pub tau_runs: usize,
    /// Synchronizing-set parameter.
    pub tau_sync: usize,
    /// Long-period threshold.
    pub q_long: usize,
}

/// Largest tau such that the short-run table over `sigma` symbols stays
/// within 2^24 entries, i.e. sigma^(floor(3.5 tau)) <= 2^24.
fn table_feasible_tau(sigma: u32) -> usize {
    let s = sigma.max(2) as u64;
    let bits_per = 64 - (s - 1).leading_zeros() as u64; // upper bound on log2 sigma
    let _ = bits_per;
    let mut best = 1usize;
    for tau in 1..=26usize {
        let block = 7 * tau / 2;
        let mut size: u128 = 1;
        let mut ok = true;
        for _ in 0..block {
            size = size.saturating_mul(s as u128);
            if size > 1 << 24 {
                ok = false;
                break;
            }
        }
        if ok {
            best = tau;
        }
    }
    best
}

// Every pyramid layer has period at least 4*subper + 1 >= 9, so capping
// tau_runs at 26 keeps layers out of the short-run and tau-run parts
// (tau_runs/3 <= 8 < 9) and the three-part run representation disjoint.
const TAU_RUNS_CAP: usize = 26;

impl TauConfig {
    /// Defaults for a text of length `n` over alphabet of size `sigma`:
    /// `tau_runs = floor(log_sigma(n) / 9)` and
    /// `tau_sync = floor(log_sigma(n) / 18)`, both clamped to at least 1.
    pub fn for_text(n: usize, sigma: u32) -> TauConfig {
        let log_sigma_n = if n <= 1 {
            1.0
        } else {
            (n as f64).ln() / (sigma.max(2) as f64).ln()
        };
        let tau_runs = ((log_sigma_n / 9.0).floor() as usize).max(1);
        let tau_sync = ((log_sigma_n / 18.0).floor() as usize).max(1);
        Self::with(n, sigma, tau_runs, tau_sync)
    }

    /// Builds a config from explicit parameters, applying the table-size
    /// and layer-disjointness clamps to `tau_runs`.
    pub fn with(n: usize, sigma: u32, tau_runs: usize, tau_sync: usize) -> TauConfig {
        let _ = n;
        let tau_runs = tau_runs
            .clamp(1, TAU_RUNS_CAP)
            .min(table_feasible_tau(sigma).max(1));
        let tau_sync = tau_sync.max(1);
        let q_long = (2 * tau_sync).max(tau_runs.div_ceil(3) + 1);
        TauConfig {
            tau_runs,
            tau_sync,
            q_long,
        }
    }

    /// Largest period handled by the short-run and tau-run paths.
    pub fn short_period_max(&self) -> usize {
        self.tau_runs / 3
    }

    /// Smallest period the long-run sampler must cover so the three-part
    /// representation is exact; `q_long` may sit above it.
    pub fn q_cover(&self) -> usize {
        (self.short_period_max() + 1).min(self.q_long)
    }
}
