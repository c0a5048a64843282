//! Distance-multiset analysis of degree-one variable nodes and
//! stopping-set removal by column permutation.
//!
//! For each check node, the positions of its degree-one VNs form a
//! location set; the pairwise distances of those positions, collected
//! over all CNs, form the total distance multiset D. D having only
//! unique elements is equivalent to no 4SET (the smallest joint-graph
//! stopping set) forming at any delay. The removal algorithms search for
//! fresh degree-one VN locations with unique distances and realize them
//! as a pure column permutation, leaving the single-user code unchanged.

use crate::pcm::{ColumnPermutation, Pcm};
use crate::{Error, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Per-CN degree-one VN locations and distance multisets.
///
/// Positions are 1-based; distances live in [1, n-1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    locations: Vec<Vec<usize>>,
    per_cn_distances: Vec<Vec<usize>>,
    total: BTreeMap<usize, usize>,
}

impl DistanceReport {
    /// Sorted 1-based positions of degree-one VNs attached to each CN.
    pub fn locations(&self) -> &[Vec<usize>] {
        &self.locations
    }

    /// Sorted distance multiset of each CN.
    pub fn per_cn_distances(&self) -> &[Vec<usize>] {
        &self.per_cn_distances
    }

    /// Multiplicity map of the total distance multiset.
    pub fn total(&self) -> &BTreeMap<usize, usize> {
        &self.total
    }

    /// |D|, counting multiplicity.
    pub fn total_size(&self) -> usize {
        self.total.values().sum()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.total.values().copied().max().unwrap_or(0)
    }

    /// Distances occurring more than once, ascending.
    pub fn duplicate_distances(&self) -> Vec<usize> {
        self.total.iter().filter(|&(_, &c)| c > 1).map(|(&d, _)| d).collect()
    }
}

/// Computes per-CN location sets and distance multisets of `pcm`.
pub fn distance_report(pcm: &Pcm) -> DistanceReport {
    let m = pcm.num_rows();
    let mut locations = vec![Vec::new(); m];
    for i in 0..pcm.num_cols() {
        if pcm.col(i).len() == 1 {
            locations[pcm.col(i)[0]].push(i + 1);
        }
    }
    let mut total = BTreeMap::new();
    let per_cn_distances: Vec<Vec<usize>> = locations
        .iter()
        .map(|locs| {
            let mut ds = Vec::with_capacity(locs.len() * (locs.len().saturating_sub(1)) / 2);
            for (a_idx, &a) in locs.iter().enumerate() {
                for &b in &locs[a_idx + 1..] {
                    ds.push(b - a);
                }
            }
            ds.sort_unstable();
            for &d in &ds {
                *total.entry(d).or_insert(0) += 1;
            }
            ds
        })
        .collect();
    DistanceReport { locations, per_cn_distances, total }
}

/// True iff the total distance multiset has only unique elements, i.e.
/// no 4SET can form at any delay.
pub fn is_4set_free(pcm: &Pcm) -> bool {
    distance_report(pcm).max_multiplicity() <= 1
}

/// A concrete 4SET: two degree-one VN pairs with the same internal
/// distance, aligned by the delay. Positions are 1-based; the user-1
/// pair starts `tau` positions after the user-2 pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourSetWitness {
    pub tau: usize,
    pub cn_user1: usize,
    pub cn_user2: usize,
    pub user1_pair: (usize, usize),
    pub user2_pair: (usize, usize),
    pub distance: usize,
}

fn deg1_pairs(report: &DistanceReport) -> Vec<(usize, usize, usize)> {
    // (distance, start position, cn)
    let mut pairs = Vec::new();
    for (cn, locs) in report.locations().iter().enumerate() {
        for (a_idx, &a) in locs.iter().enumerate() {
            for &b in &locs[a_idx + 1..] {
                pairs.push((b - a, a, cn));
            }
        }
    }
    pairs
}

/// Finds some 4SET and the delay at which it forms, or `None` if the
/// matrix is 4SET-free.
pub fn find_4set_delay(pcm: &Pcm) -> Option<FourSetWitness> {
    let report = distance_report(pcm);
    let mut by_distance: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (d, start, cn) in deg1_pairs(&report) {
        by_distance.entry(d).or_default().push((start, cn));
    }
    for (d, mut entries) in by_distance {
        if entries.len() < 2 {
            continue;
        }
        entries.sort_unstable();
        let (start2, cn2) = entries[0];
        let (start1, cn1) = entries[1];
        return Some(FourSetWitness {
            tau: start1 - start2,
            cn_user1: cn1,
            cn_user2: cn2,
            user1_pair: (start1, start1 + d),
            user2_pair: (start2, start2 + d),
            distance: d,
        });
    }
    None
}

/// Exhaustively lists every 4SET forming at delay `tau`, by scanning all
/// degree-one VN pair alignments. Independent of the distance-multiset
/// path; intended as a verifier on small instances.
pub fn oracle_enumerate_4sets(pcm: &Pcm, tau: usize) -> Vec<FourSetWitness> {
    let report = distance_report(pcm);
    let pairs = deg1_pairs(&report);
    let mut out = Vec::new();
    for &(d1, s1, c1) in &pairs {
        for &(d2, s2, c2) in &pairs {
            if d1 == d2 && s1 > s2 && s1 - s2 == tau {
                out.push(FourSetWitness {
                    tau,
                    cn_user1: c1,
                    cn_user2: c2,
                    user1_pair: (s1, s1 + d1),
                    user2_pair: (s2, s2 + d2),
                    distance: d1,
                });
            }
        }
    }
    out
}

/// Outcome of a stopping-set removal run.
#[derive(Debug, Clone)]
pub struct RemovalOutcome {
    pub pcm: Pcm,
    pub permutation: ColumnPermutation,
    pub iterations: usize,
    pub status: RemovalStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalStatus {
    Success,
    IterationCap,
    Infeasible,
}

/// Iteration limits for the removal algorithms.
#[derive(Debug, Clone, Copy)]
pub struct RemovalCaps {
    /// Candidate samples per CN before a whole-matrix restart; `None` = 200 * n.
    pub per_cn_samples: Option<usize>,
    /// Whole-matrix restarts of the location search.
    pub restarts: usize,
    /// Location-search repeats for degree-one stopping-set removal.
    pub repeats: usize,
}

impl Default for RemovalCaps {
    fn default() -> Self {
        RemovalCaps { per_cn_samples: None, restarts: 50, repeats: 50 }
    }
}

/// One pass of the location search: fresh degree-one VN positions per CN
/// with globally unique pairwise distances. Returns per-CN position sets
/// (0-based) or `None` if the sample cap ran out.
fn search_locations(
    deg1_count_per_cn: &[usize],
    n: usize,
    rng: &mut ChaCha8Rng,
    per_cn_samples: usize,
) -> Option<Vec<Vec<usize>>> {
    let m = deg1_count_per_cn.len();
    let mut order: Vec<usize> = (0..m).collect();
    // hardest CNs (most degree-one VNs) first
    order.sort_by_key(|&j| (std::cmp::Reverse(deg1_count_per_cn[j]), j));

    let mut free: Vec<usize> = (0..n).collect();
    let mut used_distance = vec![false; n]; // index by distance, 1..=n-1
    let mut sets = vec![Vec::new(); m];

    for &j in &order {
        let want = deg1_count_per_cn[j];
        let mut samples = 0usize;
        while sets[j].len() < want {
            if samples >= per_cn_samples || free.is_empty() {
                return None;
            }
            samples += 1;
            let pick = rng.gen_range(0..free.len());
            let k = free[pick];
            let mut fresh: Vec<usize> = Vec::with_capacity(sets[j].len());
            let mut ok = true;
            for &l in &sets[j] {
                let d = k.abs_diff(l);
                if used_distance[d] || fresh.contains(&d) {
                    ok = false;
                    break;
                }
                fresh.push(d);
            }
            if !ok {
                continue;
            }
            for &d in &fresh {
                used_distance[d] = true;
            }
            sets[j].push(k);
            free.swap_remove(pick);
        }
    }
    Some(sets)
}

/// Builds the column permutation that moves each CN's original degree-one
/// columns to the found positions (sorted to sorted) and stable-fills the
/// rest.
fn permutation_from_locations(pcm: &Pcm, sets: &[Vec<usize>]) -> Result<ColumnPermutation> {
    let n = pcm.num_cols();
    let report = distance_report(pcm);
    let mut assignment: Vec<Option<usize>> = vec![None; n]; // new position -> old column
    for (j, positions) in sets.iter().enumerate() {
        let mut new_positions = positions.to_vec();
        new_positions.sort_unstable();
        let old_columns = &report.locations()[j]; // 1-based, sorted
        debug_assert_eq!(new_positions.len(), old_columns.len());
        for (&pos, &old) in new_positions.iter().zip(old_columns) {
            assignment[pos] = Some(old - 1);
        }
    }
    let taken: Vec<bool> = {
        let mut t = vec![false; n];
        for a in assignment.iter().flatten() {
            t[*a] = true;
        }
        t
    };
    let mut rest = (0..n).filter(|&i| !taken[i]);
    let full: Vec<usize> = assignment
        .into_iter()
        .map(|slot| slot.unwrap_or_else(|| rest.next().expect("fill exhausted")))
        .collect();
    ColumnPermutation::new(full)
}

/// Converts a matrix into a 4SET-free one by permuting columns: samples
/// fresh degree-one VN locations with globally unique distances and
/// applies the corresponding permutation. Per-CN degree-one counts and
/// the single-user code are unchanged.
pub fn remove_4sets(pcm: &Pcm, seed: u64, caps: &RemovalCaps) -> Result<RemovalOutcome> {
    let n = pcm.num_cols();
    let counts = crate::construct::deg1_counts(pcm);
    let per_cn = caps.per_cn_samples.unwrap_or(200 * n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=caps.restarts.max(1) {
        if let Some(sets) = search_locations(&counts, n, &mut rng, per_cn) {
            let permutation = permutation_from_locations(pcm, &sets)?;
            let out = pcm.permute_columns(&permutation)?;
            debug_assert!(is_4set_free(&out));
            return Ok(RemovalOutcome {
                pcm: out,
                permutation,
                iterations: attempt,
                status: RemovalStatus::Success,
            });
        }
    }
    Ok(RemovalOutcome {
        pcm: pcm.clone(),
        permutation: ColumnPermutation::identity(n),
        iterations: caps.restarts,
        status: RemovalStatus::IterationCap,
    })
}

/// Tests for degree-one VN stopping sets at delay `tau` via the stacked
/// matrix built from the degree-one columns: column t pairs column t+tau
/// (top copy) with column t (bottom copy), t in [1, n-tau]. Rows and
/// columns of weight <= 1 are peeled; a nonempty residual means a
/// stopping set exists.
pub fn has_deg1_stopping_set(pcm: &Pcm, tau: usize) -> Result<bool> {
    let n = pcm.num_cols();
    let m = pcm.num_rows();
    if tau < 1 || tau >= n {
        return Err(Error::InvalidArgument(format!("delay {tau} outside [1, {}]", n - 1)));
    }
    // CN row of each degree-one column, if any
    let deg1_row: Vec<Option<usize>> = (0..n)
        .map(|i| if pcm.col(i).len() == 1 { Some(pcm.col(i)[0]) } else { None })
        .collect();

    let width = n - tau;
    // entries of stacked column t: row j for the top copy, m + j for the bottom
    let col_rows: Vec<Vec<usize>> = (0..width)
        .map(|t| {
            let mut rows = Vec::with_capacity(2);
            if let Some(j) = deg1_row[t + tau] {
                rows.push(j);
            }
            if let Some(j) = deg1_row[t] {
                rows.push(m + j);
            }
            rows
        })
        .collect();
    let mut row_cols: Vec<Vec<usize>> = vec![Vec::new(); 2 * m];
    for (t, rows) in col_rows.iter().enumerate() {
        for &r in rows {
            row_cols[r].push(t);
        }
    }

    let mut col_alive = vec![true; width];
    let mut row_alive = vec![true; 2 * m];
    let mut col_weight: Vec<usize> = col_rows.iter().map(Vec::len).collect();
    let mut row_weight: Vec<usize> = row_cols.iter().map(Vec::len).collect();

    #[derive(Clone, Copy)]
    enum Node {
        Col(usize),
        Row(usize),
    }
    let mut queue: Vec<Node> = Vec::new();
    for t in 0..width {
        if col_weight[t] <= 1 {
            queue.push(Node::Col(t));
        }
    }
    for r in 0..2 * m {
        if row_weight[r] <= 1 {
            queue.push(Node::Row(r));
        }
    }
    while let Some(node) = queue.pop() {
        match node {
            Node::Col(t) => {
                if !col_alive[t] {
                    continue;
                }
                col_alive[t] = false;
                for &r in &col_rows[t] {
                    if row_alive[r] {
                        row_weight[r] -= 1;
                        if row_weight[r] <= 1 {
                            queue.push(Node::Row(r));
                        }
                    }
                }
            }
            Node::Row(r) => {
                if !row_alive[r] {
                    continue;
                }
                row_alive[r] = false;
                for &t in &row_cols[r] {
                    if col_alive[t] {
                        col_weight[t] -= 1;
                        if col_weight[t] <= 1 {
                            queue.push(Node::Col(t));
                        }
                    }
                }
            }
        }
    }
    Ok(col_alive.iter().any(|&alive| alive))
}

/// Independent verifier: joint-graph peeling with exactly the MN-paired
/// degree-one VNs erased. Returns true iff peeling stalls.
pub fn oracle_deg1_stopping_set(pcm: &Pcm, tau: usize) -> Result<bool> {
    let n = pcm.num_cols();
    if tau < 1 || tau >= n {
        return Err(Error::InvalidArgument(format!("delay {tau} outside [1, {}]", n - 1)));
    }
    let deg1: Vec<bool> = (0..n).map(|i| pcm.col(i).len() == 1).collect();
    // user-1 position i pairs with user-2 position i - tau, for i >= tau (0-based)
    let mut erased1 = vec![false; n];
    let mut erased2 = vec![false; n];
    for i in tau..n {
        if deg1[i] && deg1[i - tau] {
            erased1[i] = true;
            erased2[i - tau] = true;
        }
    }
    // CN rule: one erased neighbor resolves. MN rule: a resolved endpoint
    // resolves its partner, but only where an MN pairing exists.
    fn sweep(
        pcm: &Pcm,
        tau: usize,
        erased: &mut [bool],
        other: &mut [bool],
        is_user1: bool,
    ) -> bool {
        let n = pcm.num_cols();
        let mut progress = false;
        for j in 0..pcm.num_rows() {
            let erased_nbrs: Vec<usize> =
                pcm.row(j).iter().copied().filter(|&i| erased[i]).collect();
            if erased_nbrs.len() == 1 {
                erased[erased_nbrs[0]] = false;
                progress = true;
            }
        }
        for i in 0..n {
            if erased[i] {
                continue;
            }
            let partner = if is_user1 { i.checked_sub(tau) } else { Some(i + tau).filter(|&p| p < n) };
            if let Some(p) = partner {
                if other[p] {
                    other[p] = false;
                    progress = true;
                }
            }
        }
        progress
    }
    loop {
        let a = sweep(pcm, tau, &mut erased1, &mut erased2, true);
        let b = sweep(pcm, tau, &mut erased2, &mut erased1, false);
        if !a && !b {
            break;
        }
    }
    Ok(erased1.iter().chain(erased2.iter()).any(|&e| e))
}

/// Repeats the location search until a permutation with no degree-one VN
/// stopping set at any delay in [1, n-1] is found, or the repeat cap is
/// reached (status `Infeasible`; the returned matrix is still the last
/// 4SET-free attempt when one exists).
pub fn remove_deg1_stopping_sets(pcm: &Pcm, seed: u64, caps: &RemovalCaps) -> Result<RemovalOutcome> {
    let n = pcm.num_cols();
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut last_clean4: Option<RemovalOutcome> = None;
    for repeat in 1..=caps.repeats.max(1) {
        let pass_seed: u64 = seeder.gen();
        let outcome = remove_4sets(pcm, pass_seed, caps)?;
        if outcome.status != RemovalStatus::Success {
            continue;
        }
        let clean = (1..n).all(|tau| !has_deg1_stopping_set(&outcome.pcm, tau).unwrap_or(true));
        if clean {
            return Ok(RemovalOutcome { iterations: repeat, ..outcome });
        }
        last_clean4 = Some(outcome);
    }
    let fallback = last_clean4.unwrap_or_else(|| RemovalOutcome {
        pcm: pcm.clone(),
        permutation: ColumnPermutation::identity(n),
        iterations: caps.repeats,
        status: RemovalStatus::Infeasible,
    });
    Ok(RemovalOutcome { status: RemovalStatus::Infeasible, iterations: caps.repeats, ..fallback })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;
    use crate::ensemble::{catalog_by_name, realize};
    use crate::pcm::tests::random_pcm;

    /// 3x7 matrix whose degree-one VN pairs {2,5} and {4,7} share distance 3.
    pub(crate) fn duplicated_distance_3x7() -> Pcm {
        Pcm::from_rows(7, vec![vec![0, 1, 2, 4], vec![0, 2, 3, 5, 6], vec![2, 5]]).unwrap()
    }

    /// Handcrafted 5x9 matrix with nested degree-one pairs (distances 1, 3, 5).
    fn nested_5x9() -> Pcm {
        Pcm::from_dense(&[
            &[0, 0, 0, 0, 0, 0, 1, 0, 0],
            &[0, 0, 1, 1, 0, 0, 0, 0, 1],
            &[0, 1, 0, 0, 1, 0, 0, 0, 0],
            &[1, 0, 0, 0, 0, 1, 1, 0, 1],
            &[0, 0, 0, 0, 0, 0, 0, 1, 0],
        ])
        .unwrap()
    }

    #[test]
    fn report_on_duplicated_distance_matrix() {
        let report = distance_report(&duplicated_distance_3x7());
        assert_eq!(report.locations(), &[vec![2, 5], vec![4, 7], vec![]]);
        assert_eq!(report.per_cn_distances(), &[vec![3], vec![3], vec![]]);
        assert_eq!(report.total().get(&3), Some(&2));
        assert_eq!(report.total_size(), 2);
        assert!(!is_4set_free(&duplicated_distance_3x7()));
    }

    #[test]
    fn report_empty_when_no_pairs() {
        // at most one degree-one VN per CN
        let pcm = Pcm::from_rows(4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let report = distance_report(&pcm);
        assert_eq!(report.total_size(), 0);
        assert!(is_4set_free(&pcm));
    }

    #[test]
    fn report_size_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let pcm = random_pcm(&mut rng, 30);
            let report = distance_report(&pcm);
            let expected: usize = report
                .locations()
                .iter()
                .map(|v| v.len() * v.len().saturating_sub(1) / 2)
                .sum();
            assert_eq!(report.total_size(), expected);
        }
    }

    #[test]
    fn witness_on_duplicated_distance_matrix() {
        let w = find_4set_delay(&duplicated_distance_3x7()).unwrap();
        assert_eq!(w.tau, 2);
        assert_eq!(w.distance, 3);
        assert_eq!(w.user1_pair, (4, 7));
        assert_eq!(w.user2_pair, (2, 5));
        assert!(find_4set_delay(&nested_5x9()).is_none());
        assert!(is_4set_free(&nested_5x9()));
    }

    #[test]
    fn oracle_counts_one_witness_at_tau_2() {
        let pcm = duplicated_distance_3x7();
        assert_eq!(oracle_enumerate_4sets(&pcm, 2).len(), 1);
        assert!(oracle_enumerate_4sets(&pcm, 1).is_empty());
        assert!(oracle_enumerate_4sets(&pcm, 5).is_empty());
    }

    #[test]
    fn witnesses_are_structurally_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let pcm = random_pcm(&mut rng, 30);
            let n = pcm.num_cols();
            for tau in 1..n {
                for w in oracle_enumerate_4sets(&pcm, tau) {
                    assert_eq!(w.user1_pair.0 - w.user2_pair.0, tau);
                    assert_eq!(w.user1_pair.1 - w.user1_pair.0, w.distance);
                    assert_eq!(w.user2_pair.1 - w.user2_pair.0, w.distance);
                    let report = distance_report(&pcm);
                    assert!(report.locations()[w.cn_user1].contains(&w.user1_pair.0));
                    assert!(report.locations()[w.cn_user1].contains(&w.user1_pair.1));
                    assert!(report.locations()[w.cn_user2].contains(&w.user2_pair.0));
                    assert!(report.locations()[w.cn_user2].contains(&w.user2_pair.1));
                }
            }
        }
    }

    #[test]
    fn removal_fixes_duplicated_distance_matrix() {
        let pcm = duplicated_distance_3x7();
        for seed in 0..5 {
            let out = remove_4sets(&pcm, seed, &RemovalCaps::default()).unwrap();
            assert_eq!(out.status, RemovalStatus::Success);
            assert!(is_4set_free(&out.pcm));
            // column permutation only: same code up to coordinate order
            let expected = pcm.permute_columns(&out.permutation).unwrap();
            assert_eq!(expected, out.pcm);
            let mut a: Vec<&[usize]> = (0..7).map(|i| pcm.col(i)).collect();
            let mut b: Vec<&[usize]> = (0..7).map(|i| out.pcm.col(i)).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
            // per-CN degree-one counts preserved
            assert_eq!(construct::deg1_counts(&pcm), construct::deg1_counts(&out.pcm));
        }
    }

    #[test]
    fn removal_on_clean_input_succeeds() {
        let out = remove_4sets(&nested_5x9(), 1, &RemovalCaps::default()).unwrap();
        assert_eq!(out.status, RemovalStatus::Success);
        assert!(is_4set_free(&out.pcm));
    }

    #[test]
    fn stacked_test_finds_the_4set() {
        let pcm = duplicated_distance_3x7();
        assert!(has_deg1_stopping_set(&pcm, 2).unwrap());
        assert!(!has_deg1_stopping_set(&pcm, 1).unwrap());
        assert!(has_deg1_stopping_set(&pcm, 7).is_err());
        assert!(has_deg1_stopping_set(&pcm, 0).is_err());
    }

    #[test]
    fn no_deg1_vns_means_no_stopping_sets() {
        let pcm = Pcm::from_rows(4, vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 3]]).unwrap();
        for tau in 1..4 {
            assert!(!has_deg1_stopping_set(&pcm, tau).unwrap());
            assert!(!oracle_deg1_stopping_set(&pcm, tau).unwrap());
        }
    }

    #[test]
    fn stacked_test_agrees_with_peeling_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 500 {
            let pcm = random_pcm(&mut rng, 50);
            let n = pcm.num_cols();
            if n < 2 {
                continue;
            }
            let tau = rng.gen_range(1..n);
            assert_eq!(
                has_deg1_stopping_set(&pcm, tau).unwrap(),
                oracle_deg1_stopping_set(&pcm, tau).unwrap(),
                "n={n} tau={tau}"
            );
            checked += 1;
        }
    }

    #[test]
    fn deg1_removal_ens2() {
        let seq = realize(&catalog_by_name("ens2").unwrap().dist, 120).unwrap();
        let built = construct::construct_peg(&seq, 3).unwrap();
        let out = remove_deg1_stopping_sets(&built.pcm, 9, &RemovalCaps::default()).unwrap();
        assert_eq!(out.status, RemovalStatus::Success);
        let n = out.pcm.num_cols();
        for tau in 1..n {
            assert!(!has_deg1_stopping_set(&out.pcm, tau).unwrap());
        }
    }

    #[test]
    fn theorem_even_split_minimizes_d_size() {
        // exhaustive over splitting k <= 8 degree-one VNs among m <= 4 CNs
        fn splits(k: usize, m: usize) -> Vec<Vec<usize>> {
            if m == 1 {
                return vec![vec![k]];
            }
            let mut out = Vec::new();
            for first in 0..=k {
                for mut rest in splits(k - first, m - 1) {
                    let mut s = vec![first];
                    s.append(&mut rest);
                    out.push(s);
                }
            }
            out
        }
        let size = |split: &[usize]| -> usize {
            split.iter().map(|&v| v * v.saturating_sub(1) / 2).sum()
        };
        for m in 1..=4usize {
            for k in 0..=8usize {
                let all = splits(k, m);
                let min = all.iter().map(|s| size(s)).min().unwrap();
                for s in &all {
                    let even = s.iter().max().unwrap() - s.iter().min().unwrap() <= 1;
                    if even {
                        assert_eq!(size(s), min, "even split {s:?} not minimal");
                    } else {
                        assert!(size(s) > min, "uneven split {s:?} matched the minimum");
                    }
                    // moving one VN from a CN with a surplus of >= 2 strictly shrinks |D|
                    for a in 0..m {
                        for b in 0..m {
                            if s[a] >= s[b] + 2 {
                                let mut moved = s.clone();
                                moved[a] -= 1;
                                moved[b] += 1;
                                assert!(size(&moved) < size(s), "move on {s:?} did not shrink");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn jensen_bound_holds_on_random_pcms() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let pcm = random_pcm(&mut rng, 40);
            let report = distance_report(&pcm);
            let m = pcm.num_rows();
            let deg1_total: usize = report.locations().iter().map(Vec::len).sum();
            let v = deg1_total as f64 / m as f64;
            let bound = crate::ensemble::d_size_lower_bound(m, v);
            assert!(report.total_size() as f64 >= bound - 1e-9);
        }
    }
}
