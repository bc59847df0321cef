//! Clebsch–Gordan coefficients by the Racah closed-form sum.

use std::sync::OnceLock;

use crate::error::Result;

use super::half::parity_sign;
use super::HalfInteger;

const MAX_FACTORIAL: usize = 1024;

fn ln_factorial(n: i32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(MAX_FACTORIAL + 1);
        let mut acc = 0.0;
        t.push(0.0);
        for k in 1..=MAX_FACTORIAL {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    });
    assert!(n >= 0 && (n as usize) <= MAX_FACTORIAL, "factorial argument {n} out of range");
    table[n as usize]
}

/// `⟨j1 m1; j2 m2 | J M⟩` in the Condon–Shortley convention; zero when a
/// selection rule fails.
pub fn clebsch_gordan(
    j1: HalfInteger,
    m1: HalfInteger,
    j2: HalfInteger,
    m2: HalfInteger,
    j: HalfInteger,
    m: HalfInteger,
) -> f64 {
    let (tj1, tm1, tj2, tm2, tj, tm) = (j1.twice(), m1.twice(), j2.twice(), m2.twice(), j.twice(), m.twice());
    if tj1 < 0 || tj2 < 0 || tj < 0 {
        return 0.0;
    }
    if tm1 + tm2 != tm || tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return 0.0;
    }
    if (tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj + tm) % 2 != 0 {
        return 0.0;
    }
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return 0.0;
    }
    // all arguments below are integers
    let h = |t: i32| t / 2;
    let a = h(tj1 + tj2 - tj);
    let b = h(tj1 - tm1);
    let cc = h(tj2 + tm2);
    let d = h(tj - tj2 + tm1);
    let e = h(tj - tj1 - tm2);
    let ln_pre = 0.5
        * (((tj + 1) as f64).ln() + ln_factorial(h(tj + tj1 - tj2)) + ln_factorial(h(tj - tj1 + tj2)) + ln_factorial(a)
            - ln_factorial(h(tj1 + tj2 + tj) + 1)
            + ln_factorial(h(tj + tm))
            + ln_factorial(h(tj - tm))
            + ln_factorial(h(tj1 - tm1))
            + ln_factorial(h(tj1 + tm1))
            + ln_factorial(h(tj2 - tm2))
            + ln_factorial(h(tj2 + tm2)));
    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(cc);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den = ln_factorial(k)
            + ln_factorial(a - k)
            + ln_factorial(b - k)
            + ln_factorial(cc - k)
            + ln_factorial(d + k)
            + ln_factorial(e + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (ln_pre - ln_den).exp();
    }
    sum
}

/// Floating-point front end; fails on values that are not half-integers.
pub fn clebsch_gordan_f64(j1: f64, m1: f64, j2: f64, m2: f64, j: f64, m: f64) -> Result<f64> {
    let h = HalfInteger::from_f64;
    Ok(clebsch_gordan(h(j1)?, h(m1)?, h(j2)?, h(m2)?, h(j)?, h(m)?))
}

/// Coefficient of `|ja ma⟩⟨jb mb|` in the rank-`μ`, component-`M` tensor
/// operator built from the pair: `(−1)^{jb−mb} ⟨ja ma; jb −mb | μ M⟩`.
pub(crate) fn operator_coupling(
    ja: HalfInteger,
    ma: HalfInteger,
    jb: HalfInteger,
    mb: HalfInteger,
    mu: HalfInteger,
    big_m: HalfInteger,
) -> f64 {
    let c = clebsch_gordan(ja, ma, jb, -mb, mu, big_m);
    if c == 0.0 {
        return 0.0;
    }
    parity_sign(jb.twice() - mb.twice()) * c
}
