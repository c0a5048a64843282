//! Two-user asynchronous binary adder channel and the joint peeling
//! decoder.
//!
//! User 1 transmits BPSK symbols s = 1 - 2b on positions [0, n); user 2
//! the same word class delayed by tau. The receiver sees the sum: the
//! first and last tau positions carry a single user (overhang), overlap
//! positions carry the sum in {-2, 0, 2}. A zero is an erasure of both
//! bits, tied by the constraint s1[i] = -s2[i - tau] (a message node).
//! Peeling runs both Tanner graphs plus the message nodes to a fixpoint.

use crate::gf2::{derive_generator, Generator};
use crate::pcm::Pcm;
use crate::{Error, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{Beta, ContinuousCDF};

/// Receiver-side samples for one transmission; length n + tau.
pub fn channel_output(cw1: &[u8], cw2: &[u8], tau: usize) -> Result<Vec<i8>> {
    let n = cw1.len();
    if cw2.len() != n {
        return Err(Error::InvalidArgument(format!(
            "codeword lengths differ: {n} vs {}",
            cw2.len()
        )));
    }
    if tau > n {
        return Err(Error::InvalidArgument(format!("delay {tau} outside [0, {n}]")));
    }
    let sym = |b: u8| 1i8 - 2 * (b & 1) as i8;
    Ok((0..n + tau)
        .map(|i| {
            let a = if i < n { sym(cw1[i]) } else { 0 };
            let b = if i >= tau { sym(cw2[i - tau]) } else { 0 };
            a + b
        })
        .collect())
}

/// The delay is observable from the sample count alone.
pub fn recover_delay(pcm: &Pcm, y: &[i8]) -> Result<usize> {
    let n = pcm.num_cols();
    if y.len() < n || y.len() > 2 * n {
        return Err(Error::InvalidArgument(format!(
            "sample count {} incompatible with n={n}",
            y.len()
        )));
    }
    Ok(y.len() - n)
}

/// Joint peeling output. `None` entries are residual erasures; every
/// `Some` bit is guaranteed consistent with the channel and the code
/// constraints (peeling never guesses).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub tau: usize,
    pub bits1: Vec<Option<u8>>,
    pub bits2: Vec<Option<u8>>,
}

impl DecodeResult {
    pub fn success(&self) -> bool {
        self.bits1.iter().chain(self.bits2.iter()).all(Option::is_some)
    }

    pub fn residual_erasures(&self) -> usize {
        self.bits1.iter().chain(self.bits2.iter()).filter(|b| b.is_none()).count()
    }
}

/// Decodes one received word by peeling the joint graph. The delay is
/// recovered from the sample count.
pub fn joint_peel_decode(pcm: &Pcm, y: &[i8]) -> Result<DecodeResult> {
    peel(pcm, y, &mut None)
}

/// Same fixpoint as [`joint_peel_decode`], but processes the work queues
/// in a seed-dependent random order. Peeling is confluent, so the result
/// must not depend on the order; this entry point exists to check that.
pub fn joint_peel_decode_randomized(pcm: &Pcm, y: &[i8], seed: u64) -> Result<DecodeResult> {
    peel(pcm, y, &mut Some(ChaCha8Rng::seed_from_u64(seed)))
}

fn peel(pcm: &Pcm, y: &[i8], order_rng: &mut Option<ChaCha8Rng>) -> Result<DecodeResult> {
    let n = pcm.num_cols();
    let m = pcm.num_rows();
    let tau = recover_delay(pcm, y)?;

    let mut bits: [Vec<Option<u8>>; 2] = [vec![None; n], vec![None; n]];
    // message node at user-1 position i (paired with user-2 position i - tau)
    let mut mn = vec![false; n];
    // (user, position, bit) assignments yet to be propagated
    let mut pending: Vec<(usize, usize, u8)> = Vec::new();

    for (i, &s) in y.iter().enumerate() {
        let in1 = i < n;
        let in2 = i >= tau;
        match (in1, in2, s) {
            (true, false, 1 | -1) => pending.push((0, i, (1 - s as i32) as u8 / 2)),
            (false, true, 1 | -1) => pending.push((1, i - tau, (1 - s as i32) as u8 / 2)),
            (true, true, 2 | -2) => {
                let b = ((2 - s as i32) / 4) as u8;
                pending.push((0, i, b));
                pending.push((1, i - tau, b));
            }
            (true, true, 0) => mn[i] = true,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "sample {s} at position {i} impossible for n={n}, tau={tau}"
                )))
            }
        }
    }

    // per-user CN state: erased-neighbor count and parity of resolved bits
    let mut unresolved = [vec![0usize; m], vec![0usize; m]];
    let mut parity = [vec![0u8; m], vec![0u8; m]];
    for u in 0..2 {
        for j in 0..m {
            unresolved[u][j] = pcm.row(j).len();
        }
    }
    let mut cn_events: Vec<(usize, usize)> = Vec::new();
    for u in 0..2 {
        for j in 0..m {
            if unresolved[u][j] <= 1 {
                cn_events.push((u, j));
            }
        }
    }

    let take = |len: usize, rng: &mut Option<ChaCha8Rng>| match rng {
        Some(r) => r.gen_range(0..len),
        None => len - 1,
    };
    loop {
        while !pending.is_empty() {
            let idx = take(pending.len(), order_rng);
            let (u, i, b) = pending.swap_remove(idx);
            match bits[u][i] {
                Some(prev) if prev == b => continue,
                Some(prev) => {
                    return Err(Error::InvalidArgument(format!(
                        "inconsistent samples: user {} bit {i} resolves to both {prev} and {b}",
                        u + 1
                    )))
                }
                None => {}
            }
            bits[u][i] = Some(b);
            for &j in pcm.col(i) {
                unresolved[u][j] -= 1;
                parity[u][j] ^= b;
                if unresolved[u][j] == 1 {
                    cn_events.push((u, j));
                }
            }
            // message node propagation: partner is the negated symbol
            let partner = if u == 0 {
                (i >= tau && mn[i]).then(|| (1, i - tau))
            } else {
                (i + tau < n && mn[i + tau]).then(|| (0, i + tau))
            };
            if let Some((pu, pi)) = partner {
                if bits[pu][pi].is_none() {
                    pending.push((pu, pi, b ^ 1));
                }
            }
        }
        if cn_events.is_empty() {
            break;
        }
        let idx = take(cn_events.len(), order_rng);
        let (u, j) = cn_events.swap_remove(idx);
        if unresolved[u][j] != 1 {
            continue;
        }
        let &i = pcm.row(j).iter().find(|&&i| bits[u][i].is_none()).expect("counter out of sync");
        pending.push((u, i, parity[u][j]));
    }

    let [bits1, bits2] = bits;
    Ok(DecodeResult { tau, bits1, bits2 })
}

/// Delay sampling policy for Monte-Carlo runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauPolicy {
    Fixed(usize),
    /// Uniform over [1, n-1], fresh per transmission.
    Uniform,
    /// Uniform over [1, max], fresh per transmission.
    UniformTo(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct PupeParams {
    pub trials: usize,
    pub seed: u64,
    pub tau: TauPolicy,
}

/// Per-user probability of error with a 95% confidence interval.
#[derive(Debug, Clone, Copy)]
pub struct PupeEstimate {
    pub trials: usize,
    /// Failed single-user decodings out of `2 * trials`.
    pub user_errors: usize,
    pub pupe: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub(crate) fn confidence_interval(errors: usize, total: usize) -> (f64, f64) {
    let k = errors as f64;
    let n = total as f64;
    if errors >= 20 && total - errors >= 20 {
        let p = k / n;
        let half = 1.96 * (p * (1.0 - p) / n).sqrt();
        return ((p - half).max(0.0), (p + half).min(1.0));
    }
    // Clopper-Pearson for sparse counts
    let alpha = 0.05;
    let low = if errors == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0).expect("beta parameters").inverse_cdf(alpha / 2.0)
    };
    let high = if errors == total {
        1.0
    } else {
        Beta::new(k + 1.0, n - k).expect("beta parameters").inverse_cdf(1.0 - alpha / 2.0)
    };
    (low, high)
}

fn random_codeword(gen: &Generator, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let msg: Vec<u8> = (0..gen.message_len()).map(|_| rng.gen_range(0..2u8)).collect();
    gen.encode(&msg).expect("message length matches generator")
}

/// Estimates PUPE by Monte Carlo over random codeword pairs and delays.
/// Each trial uses an independent, reproducible RNG stream; trials run
/// in parallel.
pub fn estimate_pupe(pcm: &Pcm, params: &PupeParams) -> Result<PupeEstimate> {
    let n = pcm.num_cols();
    if params.trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    match params.tau {
        // tau = n is the zero-overlap edge case: no message nodes, no erasures
        TauPolicy::Fixed(tau) | TauPolicy::UniformTo(tau) if tau < 1 || tau > n => {
            return Err(Error::InvalidArgument(format!("delay {tau} outside [1, {n}]")));
        }
        _ => {}
    }
    let gen = derive_generator(pcm)?;

    let user_errors: usize = (0..params.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(trial + 1);
            let tau = match params.tau {
                TauPolicy::Fixed(t) => t,
                TauPolicy::Uniform => rng.gen_range(1..n),
                TauPolicy::UniformTo(t) => rng.gen_range(1..=t),
            };
            let cw1 = random_codeword(&gen, &mut rng);
            let cw2 = random_codeword(&gen, &mut rng);
            let y = channel_output(&cw1, &cw2, tau).expect("valid codeword pair");
            let dec = joint_peel_decode(pcm, &y).expect("channel output always decodable input");
            // peeling soundness: a resolved bit is never wrong
            for (got, want) in
                dec.bits1.iter().zip(&cw1).chain(dec.bits2.iter().zip(&cw2))
            {
                if let Some(b) = got {
                    assert_eq!(b, want, "peeling produced an incorrect bit");
                }
            }
            let e1 = dec.bits1.iter().any(Option::is_none) as usize;
            let e2 = dec.bits2.iter().any(Option::is_none) as usize;
            e1 + e2
        })
        .sum();

    let total = 2 * params.trials;
    let (ci_low, ci_high) = confidence_interval(user_errors, total);
    Ok(PupeEstimate {
        trials: params.trials,
        user_errors,
        pupe: user_errors as f64 / total as f64,
        ci_low,
        ci_high,
    })
}

/// Exact PUPE at a fixed delay by enumerating every codeword pair.
/// Only usable for small codes (2k <= 24 information bits total).
pub fn exact_pupe(pcm: &Pcm, tau: usize) -> Result<f64> {
    let n = pcm.num_cols();
    if tau < 1 || tau > n {
        return Err(Error::InvalidArgument(format!("delay {tau} outside [1, {n}]")));
    }
    let gen = derive_generator(pcm)?;
    let k = gen.message_len();
    if 2 * k > 24 {
        return Err(Error::InvalidArgument(format!(
            "exhaustive enumeration infeasible for k={k}"
        )));
    }
    let words: Vec<Vec<u8>> = (0..1u32 << k)
        .map(|w| {
            let msg: Vec<u8> = (0..k).map(|b| (w >> b & 1) as u8).collect();
            gen.encode(&msg).expect("message length matches generator")
        })
        .collect();
    let mut user_errors = 0usize;
    for cw1 in &words {
        for cw2 in &words {
            let y = channel_output(cw1, cw2, tau)?;
            let dec = joint_peel_decode(pcm, &y)?;
            user_errors += dec.bits1.iter().any(Option::is_none) as usize;
            user_errors += dec.bits2.iter().any(Option::is_none) as usize;
        }
    }
    Ok(user_errors as f64 / (2 * words.len() * words.len()) as f64)
}
