//! Wigner rotation matrices in the zyz Euler convention:
//! `D^j(α, β, γ) = e^{−iαL_z} e^{−iβL_y} e^{−iγL_z}`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{real, ComplexMatrix, C64};

use super::HalfInteger;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub const IDENTITY: Self = Self {
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    /// Haar-random rotation: α, γ uniform on [0, 2π), cos β uniform on [−1, 1].
    pub fn haar<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let alpha = rng.random_range(0.0..2.0 * PI);
        let gamma = rng.random_range(0.0..2.0 * PI);
        let cos_beta: f64 = rng.random_range(-1.0..=1.0);
        Self {
            alpha,
            beta: cos_beta.clamp(-1.0, 1.0).acos(),
            gamma,
        }
    }

    /// Rotation taking `ẑ` to the direction `n`.
    pub fn aligning_z_to(n: [f64; 3]) -> Self {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let beta = (n[2] / norm).clamp(-1.0, 1.0).acos();
        let alpha = n[1].atan2(n[0]);
        Self {
            alpha,
            beta,
            gamma: 0.0,
        }
    }
}

fn ln_factorial(n: i32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut v = vec![0.0];
        let mut acc = 0.0;
        for k in 1..=512 {
            acc += (k as f64).ln();
            v.push(acc);
        }
        v
    });
    t[n as usize]
}

/// `d^j_{m'm}(β)` by the Wigner sum; rows/columns ordered `m = j, ..., −j`.
pub fn small_d(j: HalfInteger, beta: f64) -> ComplexMatrix {
    let d = j.dim();
    let tj = j.twice();
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        let tmp = tj - 2 * r as i32; // 2m'
        for col in 0..d {
            let tm = tj - 2 * col as i32; // 2m
            let jp_mp = (tj + tmp) / 2;
            let jm_mp = (tj - tmp) / 2;
            let jp_m = (tj + tm) / 2;
            let jm_m = (tj - tm) / 2;
            let dm = (tmp - tm) / 2; // m' − m
            let ln_pre = 0.5 * (ln_factorial(jp_mp) + ln_factorial(jm_mp) + ln_factorial(jp_m) + ln_factorial(jm_m));
            let s_min = 0.max(-dm);
            let s_max = jp_m.min(jm_mp);
            let mut acc = 0.0;
            for k in s_min..=s_max {
                let ln_den = ln_factorial(jp_m - k) + ln_factorial(k) + ln_factorial(dm + k) + ln_factorial(jm_mp - k);
                let sign = if (dm + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let pc = tj - dm - 2 * k; // 2j + m − m' − 2s
                let ps = dm + 2 * k;
                acc += sign * (ln_pre - ln_den).exp() * c.powi(pc) * s.powi(ps);
            }
            out[(r, col)] = real(acc);
        }
    }
    out
}

/// `D^j_{m'm}(α, β, γ) = e^{−im'α} d^j_{m'm}(β) e^{−imγ}`.
pub fn wigner_d_matrix(j: HalfInteger, angles: EulerAngles) -> ComplexMatrix {
    let mut d = small_d(j, angles.beta);
    let jv = j.value();
    for r in 0..d.nrows() {
        let mp = jv - r as f64;
        for c in 0..d.ncols() {
            let m = jv - c as f64;
            d[(r, c)] *= C64::from_polar(1.0, -(mp * angles.alpha + m * angles.gamma));
        }
    }
    d
}
