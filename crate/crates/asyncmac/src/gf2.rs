//! Dense GF(2) elimination: rank computation, null-space bases and
//! codeword encoding. Sparse adjacency stays in [`crate::pcm`]; anything
//! that needs row reduction converts to bit-packed rows here.

use crate::pcm::Pcm;
use crate::{Error, Result};

/// Bit-packed GF(2) row vector.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    fn zero(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64)], len }
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn to_bytes(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

fn dense_rows(pcm: &Pcm) -> Vec<BitRow> {
    let n = pcm.num_cols();
    pcm.rows()
        .iter()
        .map(|row| {
            let mut r = BitRow::zero(n);
            for &i in row {
                r.set(i);
            }
            r
        })
        .collect()
}

/// Row-reduces `rows` in place to reduced row echelon form.
/// Returns the pivot column of each nonzero row, in order.
fn rref(rows: &mut Vec<BitRow>, n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&j| rows[j].get(c)) else {
            continue;
        };
        rows.swap(r, pr);
        for j in 0..rows.len() {
            if j != r && rows[j].get(c) {
                let (head, tail) = rows.split_at_mut(r.max(j));
                let (a, b) = if j < r { (&mut head[j], &tail[0]) } else { (&mut tail[0], &head[r]) };
                a.xor_assign(b);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the parity-check matrix over GF(2).
pub fn rank(pcm: &Pcm) -> usize {
    let mut rows = dense_rows(pcm);
    rref(&mut rows, pcm.num_cols()).len()
}

/// Generator matrix for the null space of a parity-check matrix.
///
/// Rows form a basis of the code; `k = n - rank(H)`. No systematic-form
/// guarantee.
#[derive(Debug, Clone)]
pub struct Generator {
    k: usize,
    n: usize,
    rows: Vec<BitRow>,
    pivot_cols: Vec<usize>,
}

impl Generator {
    pub fn message_len(&self) -> usize {
        self.k
    }

    pub fn block_len(&self) -> usize {
        self.n
    }

    /// Pivot columns of H recorded during elimination.
    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    /// Row `i` of G as a 0/1 byte vector.
    pub fn row(&self, i: usize) -> Vec<u8> {
        self.rows[i].to_bytes()
    }

    /// Encodes a k-bit message into an n-bit codeword.
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k {
            return Err(Error::InvalidArgument(format!(
                "message length {} does not match k={}",
                msg.len(),
                self.k
            )));
        }
        let mut cw = BitRow::zero(self.n);
        for (bit, row) in msg.iter().zip(&self.rows) {
            if bit & 1 == 1 {
                cw.xor_assign(row);
            }
        }
        Ok(cw.to_bytes())
    }
}

/// Computes a generator for the code defined by `pcm`.
///
/// Fails with [`Error::DegenerateCode`] if H has full column rank (k = 0).
pub fn derive_generator(pcm: &Pcm) -> Result<Generator> {
    let n = pcm.num_cols();
    let mut rows = dense_rows(pcm);
    let pivots = rref(&mut rows, n);
    let k = n - pivots.len();
    if k == 0 {
        return Err(Error::DegenerateCode);
    }
    let is_pivot = {
        let mut v = vec![false; n];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    // One basis vector per free column: set the free column to 1 and read
    // the pivot-column values off the reduced rows.
    let mut gen_rows = Vec::with_capacity(k);
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut g = BitRow::zero(n);
        g.set(f);
        for (r, &pc) in pivots.iter().enumerate() {
            if rows[r].get(f) {
                g.set(pc);
            }
        }
        gen_rows.push(g);
    }
    Ok(Generator { k, n, rows: gen_rows, pivot_cols: pivots })
}
