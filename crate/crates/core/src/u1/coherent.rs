use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{real, C64};

/// Truncated coherent state on the Fock levels `0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    /// Re-normalized amplitudes.
    pub amplitudes: DVector<C64>,
    /// Probability mass `Σ_{n > n_max} e^{-|α|²} |α|^{2n}/n!` discarded by truncation.
    pub tail: f64,
    /// Set when the discarded tail exceeds 1%.
    pub truncation_warning: bool,
}

const TAIL_WARNING: f64 = 0.01;

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `|α⟩ = e^{-|α|²/2} Σ_n α^n/√n! |n⟩`, truncated at `n_max`.
pub fn coherent_state(alpha: C64, n_max: usize) -> Result<CoherentState> {
    if n_max < 1 {
        return Err(Error::InvalidInput("n_max must be >= 1".into()));
    }
    let a2 = alpha.norm_sqr();
    let amplitudes = if a2 == 0.0 {
        let mut v = DVector::zeros(n_max + 1);
        v[0] = real(1.0);
        v
    } else {
        let lnf = ln_factorials(n_max);
        let (r, phase) = (alpha.norm(), alpha.arg());
        DVector::from_fn(n_max + 1, |n, _| {
            let ln_mag = -0.5 * a2 + n as f64 * r.ln() - 0.5 * lnf[n];
            C64::from_polar(ln_mag.exp(), n as f64 * phase)
        })
    };
    let tail = poisson_tail(a2, n_max);
    let norm = amplitudes.norm();
    Ok(CoherentState {
        amplitudes: amplitudes / real(norm),
        tail,
        truncation_warning: tail > TAIL_WARNING,
    })
}

/// `P(N > n_max)` for `N ~ Poisson(mean)`, summed term by term so tiny tails keep
/// full relative precision.
fn poisson_tail(mean: f64, n_max: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let ln_mean = mean.ln();
    let mut ln_fact: f64 = (1..=n_max + 1).map(|k| (k as f64).ln()).sum();
    let mut sum = 0.0;
    let mut n = n_max + 1;
    loop {
        let term = (-mean + n as f64 * ln_mean - ln_fact).exp();
        sum += term;
        if (n as f64 > mean && term <= sum * 1e-17) || n > n_max + 100_000 {
            break;
        }
        n += 1;
        ln_fact += (n as f64).ln();
    }
    sum.min(1.0)
}

/// Default truncation `⌈|α|² + 10|α|⌉` (at least 1).
pub fn default_n_max(alpha: C64) -> usize {
    let r = alpha.norm();
    ((r * r + 10.0 * r).ceil() as usize).max(1)
}

/// `e^{-(|α|² − |α′|²)} (|α|/|α′|)^k`: the term-by-term bound on the mode-`k`
/// monotone ratio between coherent states `|α⟩` and `|α′⟩`.
pub fn coherent_envelope(alpha: f64, alpha_prime: f64, k: i64) -> f64 {
    (-(alpha * alpha - alpha_prime * alpha_prime)).exp() * (alpha / alpha_prime).powi(k as i32)
}
