//! Degree distributions, the built-in ensemble catalog, finite-length
//! realization of node-degree sequences, and the analytic quantities
//! tied to degree-one variable nodes: the per-CN average V, the lower
//! bound on the total distance-multiset size, and the design-rate upper
//! bound for 4SET-free matrices.

use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

const FRACTION_TOL: f64 = 1e-9;

/// Node-perspective VN/CN degree distribution.
///
/// `design_rate` is 1 - d_v,avg / d_c,avg unless overridden by a catalog
/// entry (the published tables round their rates, and block-count
/// arithmetic like m = round(n(1-r_d)) follows the published value).
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    vn: Vec<(usize, f64)>,
    cn: Vec<(usize, f64)>,
    design_rate: f64,
}

impl DegreeDistribution {
    /// Builds a distribution from (degree, fraction) pairs.
    pub fn new(vn: Vec<(usize, f64)>, cn: Vec<(usize, f64)>) -> Result<Self> {
        let check = |pairs: &[(usize, f64)], what: &str| -> Result<()> {
            if pairs.is_empty() {
                return Err(Error::InvalidDistribution(format!("{what} distribution is empty")));
            }
            let mut sum = 0.0;
            for &(d, f) in pairs {
                if d < 1 {
                    return Err(Error::InvalidDistribution(format!("{what} degree must be >= 1")));
                }
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::InvalidDistribution(format!(
                        "{what} fraction {f} for degree {d} outside [0,1]"
                    )));
                }
                sum += f;
            }
            if (sum - 1.0).abs() > FRACTION_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "{what} fractions sum to {sum}, expected 1"
                )));
            }
            Ok(())
        };
        let mut vn = vn;
        let mut cn = cn;
        vn.sort_by_key(|&(d, _)| d);
        cn.sort_by_key(|&(d, _)| d);
        if vn.windows(2).any(|w| w[0].0 == w[1].0) || cn.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution("repeated degree".into()));
        }
        check(&vn, "VN")?;
        check(&cn, "CN")?;
        let mut dist = DegreeDistribution { vn, cn, design_rate: 0.0 };
        dist.design_rate = 1.0 - dist.avg_vn_degree() / dist.avg_cn_degree();
        Ok(dist)
    }

    fn with_design_rate(mut self, r_d: f64) -> Self {
        self.design_rate = r_d;
        self
    }

    pub fn vn_fractions(&self) -> &[(usize, f64)] {
        &self.vn
    }

    pub fn cn_fractions(&self) -> &[(usize, f64)] {
        &self.cn
    }

    /// Fraction of degree-one VNs (L1).
    pub fn l1(&self) -> f64 {
        self.vn.iter().find(|&&(d, _)| d == 1).map_or(0.0, |&(_, f)| f)
    }

    pub fn avg_vn_degree(&self) -> f64 {
        self.vn.iter().map(|&(d, f)| d as f64 * f).sum()
    }

    pub fn avg_cn_degree(&self) -> f64 {
        self.cn.iter().map(|&(d, f)| d as f64 * f).sum()
    }

    pub fn max_vn_degree(&self) -> usize {
        self.vn.last().map_or(0, |&(d, _)| d)
    }

    pub fn max_cn_degree(&self) -> usize {
        self.cn.last().map_or(0, |&(d, _)| d)
    }

    pub fn design_rate(&self) -> f64 {
        self.design_rate
    }

    /// Parses an inline spec string such as
    /// `"L1:0.41,L2:0.59;R4:0.87,R10:0.13"`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let (vn_part, cn_part) = spec.split_once(';').ok_or_else(|| {
            Error::InvalidDistribution("spec must be \"L...;R...\" with a ';' separator".into())
        })?;
        let parse_side = |part: &str, prefix: char| -> Result<Vec<(usize, f64)>> {
            part.split(',')
                .map(|item| {
                    let item = item.trim();
                    let (key, val) = item.split_once(':').ok_or_else(|| {
                        Error::InvalidDistribution(format!("bad entry {item:?}, expected e.g. {prefix}2:0.5"))
                    })?;
                    let key = key.trim();
                    if !key.starts_with(prefix) {
                        return Err(Error::InvalidDistribution(format!(
                            "entry {item:?} must start with '{prefix}'"
                        )));
                    }
                    let deg: usize = key[1..].parse().map_err(|_| {
                        Error::InvalidDistribution(format!("bad degree in {item:?}"))
                    })?;
                    let frac: f64 = val.trim().parse().map_err(|_| {
                        Error::InvalidDistribution(format!("bad fraction in {item:?}"))
                    })?;
                    Ok((deg, frac))
                })
                .collect()
        };
        DegreeDistribution::new(parse_side(vn_part, 'L')?, parse_side(cn_part, 'R')?)
    }
}

/// Average number of degree-one VNs per CN: V = L1 / (1 - r_d).
pub fn avg_deg1_per_cn(l1: f64, r_d: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&l1) {
        return Err(Error::InvalidArgument(format!("L1={l1} outside [0,1]")));
    }
    if !(0.0..1.0).contains(&r_d) {
        return Err(Error::InvalidArgument(format!("design rate {r_d} outside [0,1)")));
    }
    Ok(l1 / (1.0 - r_d))
}

/// Lower bound on the total distance-multiset size: m * V(V-1)/2,
/// clamped at zero.
pub fn d_size_lower_bound(m: usize, v: f64) -> f64 {
    (m as f64 * v * (v - 1.0) / 2.0).max(0.0)
}

/// Asymptotic upper bound on the design rate of a 4SET-free matrix:
/// r_d <= 1 - L1^2 / (2 + L1).
pub fn max_rate_bound(l1: f64) -> f64 {
    1.0 - l1 * l1 / (2.0 + l1)
}

/// A catalog ensemble with its published V and design rate.
#[derive(Debug, Clone)]
pub struct CatalogEnsemble {
    pub name: &'static str,
    pub v: f64,
    pub design_rate: f64,
    pub dist: DegreeDistribution,
}

/// The three built-in optimized ensembles, addressable as
/// "ens1", "ens2", "ens3".
pub fn catalog() -> Vec<CatalogEnsemble> {
    let make = |name, v, r_d, vn: Vec<(usize, f64)>, cn: Vec<(usize, f64)>| CatalogEnsemble {
        name,
        v,
        design_rate: r_d,
        dist: DegreeDistribution::new(vn, cn).unwrap().with_design_rate(r_d),
    };
    vec![
        make(
            "ens1",
            0.85,
            0.65,
            vec![(1, 0.297), (2, 0.703)],
            vec![(3, 0.064), (4, 0.789), (10, 0.147)],
        ),
        make("ens2", 1.2, 0.667, vec![(1, 0.41), (2, 0.59)], vec![(4, 0.87), (10, 0.13)]),
        make("ens3", 2.55, 0.708, vec![(1, 0.746), (2, 0.254)], vec![(4, 0.706), (5, 0.294)]),
    ]
}

pub fn catalog_by_name(name: &str) -> Option<CatalogEnsemble> {
    catalog().into_iter().find(|e| e.name == name)
}

/// Concrete per-node target degrees for a block length n; socket-balanced
/// so every constructor can realize it exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDegreeSequence {
    pub n: usize,
    pub m: usize,
    pub vn_degrees: Vec<usize>,
    pub cn_degrees: Vec<usize>,
}

impl NodeDegreeSequence {
    pub fn vn_sockets(&self) -> usize {
        self.vn_degrees.iter().sum()
    }

    pub fn cn_sockets(&self) -> usize {
        self.cn_degrees.iter().sum()
    }

    pub fn deg1_vn_count(&self) -> usize {
        self.vn_degrees.iter().filter(|&&d| d == 1).count()
    }

    /// Same degree multiset with the VN position -> degree assignment
    /// shuffled; the experiment harness applies this per code so that
    /// degree-one VNs land at random codeword positions.
    pub fn shuffled_positions(&self, rng: &mut impl Rng) -> Self {
        let mut out = self.clone();
        out.vn_degrees.shuffle(rng);
        out
    }
}

/// Largest-remainder apportionment of `total` nodes over the degree
/// fractions. Returns counts aligned with `pairs`.
fn apportion(pairs: &[(usize, f64)], total: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = Vec::with_capacity(pairs.len());
    let mut rema: Vec<(f64, usize)> = Vec::with_capacity(pairs.len());
    let mut assigned = 0usize;
    for (idx, &(_, f)) in pairs.iter().enumerate() {
        let exact = total as f64 * f + 1e-9;
        let fl = exact.floor() as usize;
        counts.push(fl);
        assigned += fl;
        rema.push((exact - fl as f64, idx));
    }
    let mut leftover = total.saturating_sub(assigned);
    rema.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(pairs[a.1].0.cmp(&pairs[b.1].0)));
    for &(_, idx) in rema.iter().cycle().take(leftover.min(rema.len() * 4)) {
        if leftover == 0 {
            break;
        }
        counts[idx] += 1;
        leftover -= 1;
    }
    counts
}

/// Realizes a concrete socket-balanced node-degree sequence of block
/// length `n` from a distribution.
///
/// VN counts come from largest-remainder rounding of n*L_i and are kept
/// exact; m = round(n(1-r_d)); the residual socket imbalance is repaired
/// by +-1 degree adjustments spread over distinct CNs.
pub fn realize(dist: &DegreeDistribution, n: usize) -> Result<NodeDegreeSequence> {
    if n < 2 {
        return Err(Error::InvalidArgument("block length must be at least 2".into()));
    }
    let m = ((n as f64 * (1.0 - dist.design_rate()) + 1e-9).round() as usize).clamp(1, n - 1);

    let vn_counts = apportion(dist.vn_fractions(), n);
    let cn_counts = apportion(dist.cn_fractions(), m);

    let mut vn_degrees = Vec::with_capacity(n);
    for (&(d, _), &c) in dist.vn_fractions().iter().zip(&vn_counts) {
        vn_degrees.extend(std::iter::repeat(d).take(c));
    }
    let mut cn_degrees = Vec::with_capacity(m);
    for (&(d, _), &c) in dist.cn_fractions().iter().zip(&cn_counts) {
        cn_degrees.extend(std::iter::repeat(d).take(c));
    }

    let vn_sockets: usize = vn_degrees.iter().sum();
    let cn_sockets: usize = cn_degrees.iter().sum();

    // spread +-1 adjustments over distinct CNs, repeating passes if the
    // gap exceeds the CN count (only happens for tiny m)
    let mut gap = vn_sockets as isize - cn_sockets as isize;
    while gap > 0 {
        // promote the lowest-degree CNs, one socket each per pass
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&j| cn_degrees[j]);
        for &j in &order {
            cn_degrees[j] += 1;
            gap -= 1;
            if gap == 0 {
                break;
            }
        }
    }
    while gap < 0 {
        // demote the highest-degree CNs, one socket each per pass
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&j| std::cmp::Reverse(cn_degrees[j]));
        order.retain(|&j| cn_degrees[j] > 1);
        if order.is_empty() {
            return Err(Error::BalancingInfeasible(format!(
                "socket gap {} with every CN already at degree 1",
                -gap
            )));
        }
        for &j in &order {
            cn_degrees[j] -= 1;
            gap += 1;
            if gap == 0 {
                break;
            }
        }
    }
    cn_degrees.sort_unstable();

    let seq = NodeDegreeSequence { n, m, vn_degrees, cn_degrees };
    debug_assert_eq!(seq.vn_sockets(), seq.cn_sockets());
    Ok(seq)
}

/// Builds a two-degree distribution hitting a given (L1, r_d) point:
/// VNs of degree 1 and 2, CNs on the two integer degrees bracketing the
/// implied average.
pub fn two_degree_point(l1: f64, r_d: f64) -> Result<DegreeDistribution> {
    if !(0.0..=1.0).contains(&l1) || !(0.0..1.0).contains(&r_d) {
        return Err(Error::InvalidArgument("need 0 <= L1 <= 1 and 0 <= r_d < 1".into()));
    }
    let vn = if l1 >= 1.0 {
        vec![(1, 1.0)]
    } else if l1 <= 0.0 {
        vec![(2, 1.0)]
    } else {
        vec![(1, l1), (2, 1.0 - l1)]
    };
    let d_v_avg = 2.0 - l1;
    let d_c_avg = d_v_avg / (1.0 - r_d);
    let lo = d_c_avg.floor() as usize;
    let hi = lo + 1;
    let cn = if (d_c_avg - lo as f64).abs() < 1e-9 {
        vec![(lo.max(1), 1.0)]
    } else {
        let hi_frac = d_c_avg - lo as f64;
        vec![(lo.max(1), 1.0 - hi_frac), (hi, hi_frac)]
    };
    Ok(DegreeDistribution::new(vn, cn)?.with_design_rate(r_d))
}
