//! Reproducible PUPE sweeps over delays and block lengths, emitted as
//! CSV with the full configuration embedded in `#` comment lines so any
//! row can be regenerated from (config, root seed) alone.

use crate::aubac::{confidence_interval, estimate_pupe, PupeParams, TauPolicy};
use crate::construct::{construct, ConstructionSpec, Method};
use crate::ensemble::{realize, DegreeDistribution};
use crate::pcm::Pcm;
use crate::stopset::{remove_4sets, remove_deg1_stopping_sets, RemovalCaps, RemovalStatus};
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

/// Post-construction repair applied to each code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalMode {
    /// Raw constructor output.
    None,
    /// Distance-multiset repair: no 4SET at any delay.
    FourSet,
    /// Additionally no degree-one VN stopping set at any delay.
    Deg1,
}

impl RemovalMode {
    pub fn name(self) -> &'static str {
        match self {
            RemovalMode::None => "none",
            RemovalMode::FourSet => "4set",
            RemovalMode::Deg1 => "deg1",
        }
    }
}

impl std::str::FromStr for RemovalMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(RemovalMode::None),
            "4set" => Ok(RemovalMode::FourSet),
            "deg1" => Ok(RemovalMode::Deg1),
            other => Err(Error::InvalidArgument(format!("unknown removal mode {other:?}"))),
        }
    }
}

/// What to build and how hard to exercise it.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub dist: DegreeDistribution,
    /// Free-form tag recorded in the CSV metadata (e.g. catalog name).
    pub label: String,
    pub method: Method,
    pub removal: RemovalMode,
    pub codes: usize,
    /// Transmissions per (code, point).
    pub trials: usize,
    pub seed: u64,
}

/// splitmix64; decorrelates per-code seeds from the root seed.
fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E3779B97F4A7C15);
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// One realized, constructed and (optionally) repaired code.
#[derive(Debug, Clone)]
pub struct PreparedCode {
    pub pcm: Pcm,
    pub seed: u64,
    pub alist_sha256: String,
    /// Repair hit its iteration cap; the matrix is the best attempt
    /// (last 4SET-free permutation, or the raw construction).
    pub fallback: bool,
}

/// Realizes the degree sequence at block length `n`, shuffles the
/// degree-to-position assignment, constructs, and applies the removal
/// mode. The shuffle matters: realization emits degrees in sorted order,
/// and leaving the degree-one VNs in a leading block lines them up with
/// their own translates at small delays, inflating the error floor for
/// every constructor.
pub fn prepare_code(
    dist: &DegreeDistribution,
    n: usize,
    method: Method,
    removal: RemovalMode,
    seed: u64,
) -> Result<PreparedCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 1));
    let seq = realize(dist, n)?.shuffled_positions(&mut rng);
    let built = construct(&seq, &ConstructionSpec::new(method, mix_seed(seed, 2)))?;
    let caps = RemovalCaps::default();
    let (pcm, fallback) = match removal {
        RemovalMode::None => (built.pcm, false),
        RemovalMode::FourSet => {
            let out = remove_4sets(&built.pcm, mix_seed(seed, 3), &caps)?;
            (out.pcm, out.status != RemovalStatus::Success)
        }
        RemovalMode::Deg1 => {
            let out = remove_deg1_stopping_sets(&built.pcm, mix_seed(seed, 3), &caps)?;
            (out.pcm, out.status != RemovalStatus::Success)
        }
    };
    let alist_sha256 = hex_digest(&crate::alist::pcm_to_alist(&pcm));
    Ok(PreparedCode { pcm, seed, alist_sha256, fallback })
}

fn hex_digest(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// One aggregated measurement: PUPE over `codes * trials` transmissions.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    /// The swept quantity: a delay for [`sweep_tau`], a block length for
    /// [`sweep_n`].
    pub x: usize,
    pub user_errors: usize,
    pub transmissions: usize,
    pub pupe: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// (key, value) comment lines for the CSV header.
    pub metadata: Vec<(String, String)>,
    pub x_name: &'static str,
    pub points: Vec<SweepPoint>,
}

fn base_metadata(cfg: &SweepConfig, kind: &str) -> Vec<(String, String)> {
    vec![
        ("sweep".into(), kind.into()),
        ("ensemble".into(), cfg.label.clone()),
        ("method".into(), cfg.method.name().into()),
        ("removal".into(), cfg.removal.name().into()),
        ("codes".into(), cfg.codes.to_string()),
        ("trials_per_code".into(), cfg.trials.to_string()),
        ("seed".into(), cfg.seed.to_string()),
    ]
}

fn validate(cfg: &SweepConfig) -> Result<()> {
    if cfg.codes == 0 || cfg.trials == 0 {
        return Err(Error::InvalidArgument("codes and trials must be positive".into()));
    }
    Ok(())
}

fn pooled_point(x: usize, per_code: &[(usize, usize)]) -> SweepPoint {
    let user_errors: usize = per_code.iter().map(|&(e, _)| e).sum();
    let transmissions: usize = per_code.iter().map(|&(_, t)| t).sum();
    let (ci_low, ci_high) = confidence_interval(user_errors, transmissions);
    SweepPoint {
        x,
        user_errors,
        transmissions,
        pupe: user_errors as f64 / transmissions as f64,
        ci_low,
        ci_high,
    }
}

/// PUPE as a function of the delay, at fixed block length, pooled over
/// `cfg.codes` independent codes.
pub fn sweep_tau(cfg: &SweepConfig, n: usize, taus: &[usize]) -> Result<SweepResult> {
    validate(cfg)?;
    if taus.is_empty() || taus.iter().any(|&t| t < 1 || t > n) {
        return Err(Error::InvalidArgument(format!(
            "delays must be nonempty and inside [1, {n}]"
        )));
    }
    let codes: Vec<PreparedCode> = (0..cfg.codes as u64)
        .into_par_iter()
        .map(|c| prepare_code(&cfg.dist, n, cfg.method, cfg.removal, mix_seed(cfg.seed, 100 + c)))
        .collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(taus.len());
    for &tau in taus {
        let per_code: Vec<(usize, usize)> = codes
            .par_iter()
            .map(|code| {
                let est = estimate_pupe(
                    &code.pcm,
                    &PupeParams {
                        trials: cfg.trials,
                        seed: mix_seed(code.seed, tau as u64),
                        tau: TauPolicy::Fixed(tau),
                    },
                )?;
                Ok((est.user_errors, 2 * est.trials))
            })
            .collect::<Result<_>>()?;
        points.push(pooled_point(tau, &per_code));
    }

    let mut metadata = base_metadata(cfg, "tau");
    metadata.push(("n".into(), n.to_string()));
    metadata.push(("fallbacks".into(), codes.iter().filter(|c| c.fallback).count().to_string()));
    metadata.push((
        "code_alist_sha256".into(),
        codes.iter().map(|c| c.alist_sha256.as_str()).collect::<Vec<_>>().join(","),
    ));
    Ok(SweepResult { metadata, x_name: "tau", points })
}

/// PUPE as a function of block length, delay drawn uniformly from
/// [1, tau_max] per transmission, pooled over `cfg.codes` codes per n.
pub fn sweep_n(cfg: &SweepConfig, ns: &[usize], tau_max: usize) -> Result<SweepResult> {
    validate(cfg)?;
    if ns.is_empty() || ns.iter().any(|&n| n <= tau_max) {
        return Err(Error::InvalidArgument(format!(
            "block lengths must be nonempty and exceed tau_max={tau_max}"
        )));
    }
    let mut points = Vec::with_capacity(ns.len());
    let mut hashes = Vec::new();
    let mut fallbacks = 0usize;
    for (ni, &n) in ns.iter().enumerate() {
        let codes: Vec<PreparedCode> = (0..cfg.codes as u64)
            .into_par_iter()
            .map(|c| {
                let salt = 100 + (ni as u64) * cfg.codes as u64 + c;
                prepare_code(&cfg.dist, n, cfg.method, cfg.removal, mix_seed(cfg.seed, salt))
            })
            .collect::<Result<_>>()?;
        let per_code: Vec<(usize, usize)> = codes
            .par_iter()
            .map(|code| {
                let est = estimate_pupe(
                    &code.pcm,
                    &PupeParams {
                        trials: cfg.trials,
                        seed: mix_seed(code.seed, 7),
                        tau: TauPolicy::UniformTo(tau_max),
                    },
                )?;
                Ok((est.user_errors, 2 * est.trials))
            })
            .collect::<Result<_>>()?;
        points.push(pooled_point(n, &per_code));
        fallbacks += codes.iter().filter(|c| c.fallback).count();
        hashes.extend(codes.iter().map(|c| c.alist_sha256.clone()));
    }

    let mut metadata = base_metadata(cfg, "n");
    metadata.push(("tau_max".into(), tau_max.to_string()));
    metadata.push(("fallbacks".into(), fallbacks.to_string()));
    metadata.push(("code_alist_sha256".into(), hashes.join(",")));
    Ok(SweepResult { metadata, x_name: "n", points })
}

/// Serializes a sweep as CSV: `#`-prefixed metadata, a header row, one
/// data row per point.
pub fn to_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    for (k, v) in &result.metadata {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out.push_str(&format!("{},pupe,ci_low,ci_high,user_errors,transmissions\n", result.x_name));
    for p in &result.points {
        out.push_str(&format!(
            "{},{:.6e},{:.6e},{:.6e},{},{}\n",
            p.x, p.pupe, p.ci_low, p.ci_high, p.user_errors, p.transmissions
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::catalog_by_name;
    use crate::stopset;

    fn small_cfg(method: Method, removal: RemovalMode) -> SweepConfig {
        SweepConfig {
            dist: catalog_by_name("ens2").unwrap().dist.clone(),
            label: "ens2".into(),
            method,
            removal,
            codes: 3,
            trials: 60,
            seed: 5,
        }
    }

    #[test]
    fn prepared_code_matches_mode() {
        let dist = &catalog_by_name("ens2").unwrap().dist;
        let raw = prepare_code(dist, 80, Method::Rcc, RemovalMode::None, 11).unwrap();
        let fixed = prepare_code(dist, 80, Method::Rcc, RemovalMode::FourSet, 11).unwrap();
        assert!(!fixed.fallback);
        assert!(stopset::is_4set_free(&fixed.pcm));
        // same degree profile either way
        assert_eq!(raw.pcm.degree_profile().0.iter().sum::<usize>(),
                   fixed.pcm.degree_profile().0.iter().sum::<usize>());
        let deep = prepare_code(dist, 80, Method::Peg, RemovalMode::Deg1, 11).unwrap();
        assert!(!deep.fallback);
        for tau in 1..80 {
            assert!(!stopset::has_deg1_stopping_set(&deep.pcm, tau).unwrap());
        }
    }

    #[test]
    fn prepare_is_deterministic() {
        let dist = &catalog_by_name("ens1").unwrap().dist;
        let a = prepare_code(dist, 60, Method::EvenRcc, RemovalMode::FourSet, 4).unwrap();
        let b = prepare_code(dist, 60, Method::EvenRcc, RemovalMode::FourSet, 4).unwrap();
        assert_eq!(a.pcm, b.pcm);
        assert_eq!(a.alist_sha256, b.alist_sha256);
        let c = prepare_code(dist, 60, Method::EvenRcc, RemovalMode::FourSet, 5).unwrap();
        assert_ne!(a.alist_sha256, c.alist_sha256);
    }

    #[test]
    fn tau_sweep_shape_and_reproducibility() {
        let cfg = small_cfg(Method::EvenRcc, RemovalMode::FourSet);
        let taus = [1, 3, 9];
        let a = sweep_tau(&cfg, 60, &taus).unwrap();
        assert_eq!(a.points.len(), 3);
        for (p, &tau) in a.points.iter().zip(&taus) {
            assert_eq!(p.x, tau);
            assert_eq!(p.transmissions, 2 * cfg.codes * cfg.trials);
            assert!(p.ci_low <= p.pupe && p.pupe <= p.ci_high);
        }
        let b = sweep_tau(&cfg, 60, &taus).unwrap();
        assert_eq!(to_csv(&a), to_csv(&b));
    }

    #[test]
    fn n_sweep_csv_layout() {
        let cfg = small_cfg(Method::Rcc, RemovalMode::None);
        let result = sweep_n(&cfg, &[40, 60], 10).unwrap();
        let csv = to_csv(&result);
        let mut lines = csv.lines();
        let mut comments = 0;
        let header = loop {
            let line = lines.next().unwrap();
            if line.starts_with('#') {
                comments += 1;
            } else {
                break line;
            }
        };
        assert!(comments >= 7);
        assert!(csv.contains("# sweep: n\n"));
        assert!(csv.contains("# tau_max: 10\n"));
        assert_eq!(header, "n,pupe,ci_low,ci_high,user_errors,transmissions");
        assert_eq!(lines.count(), 2);
        // metadata records one hash per (n, code) pair
        let hashes = result
            .metadata
            .iter()
            .find(|(k, _)| k == "code_alist_sha256")
            .map(|(_, v)| v.split(',').count())
            .unwrap();
        assert_eq!(hashes, 2 * cfg.codes);
    }

    #[test]
    fn invalid_sweep_arguments() {
        let cfg = small_cfg(Method::Rcc, RemovalMode::None);
        assert!(sweep_tau(&cfg, 60, &[]).is_err());
        assert!(sweep_tau(&cfg, 60, &[0]).is_err());
        assert!(sweep_tau(&cfg, 60, &[61]).is_err());
        assert!(sweep_n(&cfg, &[40], 40).is_err());
        let zero = SweepConfig { codes: 0, ..cfg };
        assert!(sweep_tau(&zero, 60, &[1]).is_err());
    }

    #[test]
    fn removal_lowers_the_error_floor() {
        // pooled over a few codes the repaired ensemble must beat raw RCC
        let raw = small_cfg(Method::Rcc, RemovalMode::None);
        let fixed = SweepConfig { removal: RemovalMode::Deg1, ..raw.clone() };
        let cfg_trials = 400;
        let raw = SweepConfig { trials: cfg_trials, codes: 4, ..raw };
        let fixed = SweepConfig { trials: cfg_trials, codes: 4, ..fixed };
        let a = sweep_n(&raw, &[60], 20).unwrap();
        let b = sweep_n(&fixed, &[60], 20).unwrap();
        assert!(
            b.points[0].pupe < a.points[0].pupe,
            "repair did not help: {} vs {}",
            b.points[0].pupe,
            a.points[0].pupe
        );
    }
}
