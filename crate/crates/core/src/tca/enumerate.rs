use super::axis::{resolve, Method, TcaAxis};
use super::matrix::ResidualMatrix;
use crate::error::{Error, Result};
use crate::exec::Execution;

pub const DEFAULT_ENUMERATION_LIMIT: usize = 24;

/// Bounds on the patterns scanned per work chunk, as powers of two. Chunks
/// are sized so that there are up to `2^TARGET_CHUNKS_LOG2` of them.
const MIN_CHUNK_BITS: u32 = 4;
const MAX_CHUNK_BITS: u32 = 16;
const TARGET_CHUNKS_LOG2: u32 = 6;

/// Sign vector for pattern `p`: bit `j` set means `u_j = -1`; the last item
/// is pinned to `+1`.
fn pattern_signs(p: u64, d: usize) -> Vec<i8> {
    (0..d).map(|j| if j + 1 < d && (p >> j) & 1 == 1 { -1 } else { 1 }).collect()
}

#[derive(Debug, Default)]
struct ChunkBest {
    delta: i128,
    a_nega: i128,
    patterns: Vec<u64>,
}

impl ChunkBest {
    fn offer(&mut self, delta: i128, a_nega: i128, p: u64) {
        let key = (delta, a_nega.abs());
        let cur = (self.delta, self.a_nega);
        if self.patterns.is_empty() || key > cur {
            self.delta = delta;
            self.a_nega = a_nega.abs();
            self.patterns.clear();
            self.patterns.push(p);
        } else if key == cur {
            self.patterns.push(p);
        }
    }
}

fn scan_chunk(rm: &ResidualMatrix, columns: &[Vec<i128>], chunk: u64, bits: u32) -> ChunkBest {
    let d = rm.cols();
    let rows = rm.rows();
    let base = chunk << bits;
    let mut u = pattern_signs(base, d);
    let mut a = rm.times_signs(&u);
    let mut best = ChunkBest::default();
    let mut pattern = base;
    best.offer(a.iter().map(|x| x.abs()).sum(), a[rows - 1], pattern);
    for step in 1u64..(1u64 << bits) {
        let j = step.trailing_zeros() as usize;
        // flipping u_j from s to -s changes a by -2 s S[:, j]
        let s2 = 2 * u[j] as i128;
        for (ai, &c) in a.iter_mut().zip(&columns[j]) {
            *ai -= s2 * c;
        }
        u[j] = -u[j];
        pattern ^= 1 << j;
        best.offer(a.iter().map(|x| x.abs()).sum(), a[rows - 1], pattern);
    }
    best
}

/// First principal axis by scanning all `2^(d-1)` sign patterns.
pub fn first_axis_enumerate(rm: &ResidualMatrix) -> Result<TcaAxis> {
    first_axis_enumerate_with(rm, DEFAULT_ENUMERATION_LIMIT, Execution::default())
}

pub fn first_axis_enumerate_with(
    rm: &ResidualMatrix,
    limit: usize,
    exec: Execution,
) -> Result<TcaAxis> {
    let d = rm.cols();
    if d > limit || d > 63 {
        return Err(Error::DimensionTooLarge { d, limit });
    }
    let free = (d - 1) as u32;
    let bits = free
        .saturating_sub(TARGET_CHUNKS_LOG2)
        .clamp(MIN_CHUNK_BITS.min(free), MAX_CHUNK_BITS);
    let chunks = 1u64 << (free - bits);
    let columns: Vec<Vec<i128>> =
        (0..d).map(|j| (0..rm.rows()).map(|i| rm.scaled(i, j)).collect()).collect();
    let parts = exec.map(chunks as usize, |c| scan_chunk(rm, &columns, c as u64, bits));

    let mut overall = ChunkBest::default();
    for part in parts {
        let key = (part.delta, part.a_nega);
        if overall.patterns.is_empty() || key > (overall.delta, overall.a_nega) {
            overall = part;
        } else if key == (overall.delta, overall.a_nega) {
            overall.patterns.extend(part.patterns);
        }
    }
    if overall.delta == 0 {
        // every pattern ties on a zero matrix; keep the first
        overall.patterns.truncate(1);
    }
    let candidates: Vec<Vec<i8>> = overall.patterns.iter().map(|&p| pattern_signs(p, d)).collect();
    let mut axis = resolve(rm, &candidates, Method::Enumerate);
    axis.restarts_used = 0;
    Ok(axis)
}
