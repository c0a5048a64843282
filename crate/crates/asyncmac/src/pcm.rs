//! Sparse binary parity-check matrices and column permutations.
//!
//! A [`Pcm`] keeps both the row view and the column view of the edge set
//! so that Tanner-graph algorithms can walk either side without
//! transposing. Indices are 0-based in memory (alist files are 1-based,
//! see [`crate::alist`]).

use crate::{Error, Result};

/// Sparse binary parity-check matrix H with `m` rows (check nodes) and
/// `n` columns (variable nodes).
///
/// Immutable after construction; operations return new matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pcm {
    m: usize,
    n: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl Pcm {
    /// Builds a matrix from per-row column-index lists.
    ///
    /// Rejects duplicate entries within a row, out-of-range indices and
    /// degenerate shapes (requires 1 <= m < n).
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let m = rows.len();
        if m < 1 || m >= n {
            return Err(Error::InvalidMatrix(format!(
                "shape {m}x{n} out of range (need 1 <= m < n)"
            )));
        }
        let mut sorted_rows = rows;
        let mut cols = vec![Vec::new(); n];
        for (j, row) in sorted_rows.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidMatrix(format!("duplicate entry in row {j}")));
            }
            for &i in row.iter() {
                if i >= n {
                    return Err(Error::InvalidMatrix(format!(
                        "column index {i} out of range in row {j}"
                    )));
                }
                cols[i].push(j);
            }
        }
        Ok(Pcm { m, n, rows: sorted_rows, cols })
    }

    /// Builds a matrix from an edge list of (row, col) pairs.
    pub fn from_edges(m: usize, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![Vec::new(); m];
        for &(j, i) in edges {
            if j >= m {
                return Err(Error::InvalidMatrix(format!("row index {j} out of range")));
            }
            rows[j].push(i);
        }
        Self::from_rows(n, rows)
    }

    /// Builds a matrix from dense 0/1 rows.
    pub fn from_dense(rows: &[&[u8]]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        let sparse = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, _)| i).collect())
            .collect();
        Self::from_rows(n, sparse)
    }

    pub fn num_rows(&self) -> usize {
        self.m
    }

    pub fn num_cols(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Sorted column indices of row `j`.
    pub fn row(&self, j: usize) -> &[usize] {
        &self.rows[j]
    }

    /// Sorted row indices of column `i`.
    pub fn col(&self, i: usize) -> &[usize] {
        &self.cols[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    /// Per-node degrees: (variable-node degrees, check-node degrees).
    pub fn degree_profile(&self) -> (Vec<usize>, Vec<usize>) {
        (
            self.cols.iter().map(Vec::len).collect(),
            self.rows.iter().map(Vec::len).collect(),
        )
    }

    /// Reorders columns: column `i` of the result is column `p(i)` of `self`.
    pub fn permute_columns(&self, p: &ColumnPermutation) -> Result<Pcm> {
        if p.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation length {} does not match column count {}",
                p.len(),
                self.n
            )));
        }
        // old column index -> new position
        let mut inverse = vec![usize::MAX; self.n];
        for (new, &old) in p.as_slice().iter().enumerate() {
            inverse[old] = new;
        }
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&i| inverse[i]).collect())
            .collect();
        Pcm::from_rows(self.n, rows)
    }

    /// Checks whether the 0/1 word `c` (length n) satisfies every parity check.
    pub fn syndrome_is_zero(&self, c: &[u8]) -> bool {
        debug_assert_eq!(c.len(), self.n);
        self.rows
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &i| acc ^ (c[i] & 1)) == 0)
    }
}

/// Column permutation of length n, stored as new position -> old column index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnPermutation(Vec<usize>);

impl ColumnPermutation {
    /// Validates that `p` is a bijection on 0..p.len().
    pub fn new(p: Vec<usize>) -> Result<Self> {
        let n = p.len();
        let mut seen = vec![false; n];
        for &v in &p {
            if v >= n || seen[v] {
                return Err(Error::InvalidArgument(
                    "permutation is not a bijection".into(),
                ));
            }
            seen[v] = true;
        }
        Ok(ColumnPermutation(p))
    }

    pub fn identity(n: usize) -> Self {
        ColumnPermutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (new, &old) in self.0.iter().enumerate() {
            inv[old] = new;
        }
        ColumnPermutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// The 3x7 matrix drawn as the running small example:
    /// rows {0,2,4,6}, {1,2,5,6}, {3,4,5,6}.
    pub(crate) fn small_3x7() -> Pcm {
        Pcm::from_rows(7, vec![vec![0, 2, 4, 6], vec![1, 2, 5, 6], vec![3, 4, 5, 6]]).unwrap()
    }

    pub(crate) fn random_pcm(rng: &mut impl Rng, max_n: usize) -> Pcm {
        loop {
            let n = rng.gen_range(2..=max_n.max(2));
            let m = rng.gen_range(1..n);
            let mut rows = vec![Vec::new(); m];
            for row in rows.iter_mut() {
                let deg = rng.gen_range(0..=n.min(4));
                let mut cols: Vec<usize> = (0..n).collect();
                cols.shuffle(rng);
                row.extend_from_slice(&cols[..deg]);
            }
            if let Ok(p) = Pcm::from_rows(n, rows) {
                return p;
            }
        }
    }

    #[test]
    fn views_are_consistent() {
        let p = small_3x7();
        assert_eq!(p.num_rows(), 3);
        assert_eq!(p.num_cols(), 7);
        assert_eq!(p.num_edges(), 12);
        for j in 0..p.num_rows() {
            for &i in p.row(j) {
                assert!(p.col(i).contains(&j));
            }
        }
    }

    #[test]
    fn degree_profile_small() {
        let p = small_3x7();
        let (vn, cn) = p.degree_profile();
        assert_eq!(vn, vec![1, 1, 2, 1, 2, 2, 3]);
        assert_eq!(cn, vec![4, 4, 4]);
    }

    #[test]
    fn degree_profile_minimal() {
        let p = Pcm::from_rows(2, vec![vec![0, 1]]).unwrap();
        let (vn, cn) = p.degree_profile();
        assert_eq!(vn, vec![1, 1]);
        assert_eq!(cn, vec![2]);
    }

    #[test]
    fn handshake() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let p = random_pcm(&mut rng, 20);
            let (vn, cn) = p.degree_profile();
            assert_eq!(vn.iter().sum::<usize>(), cn.iter().sum::<usize>());
            assert_eq!(vn.iter().sum::<usize>(), p.num_edges());
        }
    }

    #[test]
    fn duplicate_entry_rejected() {
        assert!(Pcm::from_rows(3, vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn identity_permutation_is_noop() {
        let p = small_3x7();
        let q = p.permute_columns(&ColumnPermutation::identity(7)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn permutation_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let p = random_pcm(&mut rng, 16);
            let mut perm: Vec<usize> = (0..p.num_cols()).collect();
            perm.shuffle(&mut rng);
            let perm = ColumnPermutation::new(perm).unwrap();
            let permuted = p.permute_columns(&perm).unwrap();
            let back = permuted.permute_columns(&perm.inverse()).unwrap();
            assert_eq!(p, back);

            let (mut vn_a, cn_a) = p.degree_profile();
            let (mut vn_b, cn_b) = permuted.degree_profile();
            vn_a.sort_unstable();
            vn_b.sort_unstable();
            assert_eq!(vn_a, vn_b);
            assert_eq!(cn_a, cn_b);
        }
    }

    #[test]
    fn non_bijection_rejected() {
        assert!(ColumnPermutation::new(vec![0, 0, 1]).is_err());
        assert!(ColumnPermutation::new(vec![0, 3]).is_err());
    }

    #[test]
    fn handcrafted_5x9_permutation() {
        // 5x9 matrix with three rows carrying two degree-one columns each;
        // the stated permutation nests those pairs and appends the rest.
        let h = Pcm::from_dense(&[
            &[0, 0, 1, 0, 0, 0, 0, 0, 0],
            &[1, 0, 0, 0, 1, 0, 0, 1, 0],
            &[0, 1, 0, 0, 0, 0, 1, 0, 0],
            &[0, 0, 1, 1, 0, 0, 0, 1, 1],
            &[0, 0, 0, 0, 0, 1, 0, 0, 0],
        ])
        .unwrap();
        // new position -> old column, 0-based
        let p = ColumnPermutation::new(vec![3, 1, 0, 4, 6, 8, 2, 5, 7]).unwrap();
        let got = h.permute_columns(&p).unwrap();
        let want = Pcm::from_dense(&[
            &[0, 0, 0, 0, 0, 0, 1, 0, 0],
            &[0, 0, 1, 1, 0, 0, 0, 0, 1],
            &[0, 1, 0, 0, 1, 0, 0, 0, 0],
            &[1, 0, 0, 0, 0, 1, 1, 0, 1],
            &[0, 0, 0, 0, 0, 0, 0, 1, 0],
        ])
        .unwrap();
        assert_eq!(got, want);
    }
}
