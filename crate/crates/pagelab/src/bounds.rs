//! Closed-form ratio-of-expectations bounds and related quantities.
//!
//! With pages ranked by probability and `p[x:y]` the inclusive range mass,
//! the central quantity is
//!
//! ```text
//! Formula = min{ (p[3k/8 : k/2] + p[3k/2 : m]) / p[3k/8 : m],
//!                 p[11k/8 : m] / p[k/2 : m] }
//! ```
//!
//! which lower-bounds the expected clean pages per marking phase by
//! `Formula * k / 8`. From it:
//!
//! - `RoE(LRU)  <= 16 / Formula`
//! - `RoE(PLFU) <= 32 / Formula`
//!
//! plus two independent PLFU bounds,
//!
//! - `RoE(PLFU) <= 2 * sum_{i=2}^{k+1} p_{k+1} / p[i:k+1]  (<= 2 H_{k+1})`
//! - `RoE(PLFU) <= 8 / p[k+1:m] - 4`
//!
//! and, for any lazy policy, `RoE <= 4 / p[k+1:m]^2 - 2 / p[k+1:m]`.
//!
//! For power-law inputs with `m >= 2k`, `Formula` is bounded below by a
//! function of `alpha` alone ([`powerlaw_certificate`]); the multi-core
//! transform costs at most a factor 2 ([`multicore_certificate`]), via the
//! sandwich `kx >= 1-(1-x)^k >= kx/(1+kx) >= kx/2` for `x <= 1/k`.
//!
//! Index convention: `Formula` divides `k` by 8, so `k` must be a multiple
//! of 8 for exact evaluation. Other `k` are rounded conservatively —
//! numerator ranges shrink (ceil lower, floor upper), denominator ranges
//! grow (floor lower) — so the reported value never overstates the true
//! one. A zero `Formula` (vacuous bound) maps to `+inf` bounds.

use serde::Serialize;

use crate::dist::{kahan_sum, Page, PageDistribution};
use crate::error::{Error, Result};

/// Harmonic number `H_n = sum_{i=1}^{n} 1/i`, with `H_0 = 0`.
pub fn harmonic(n: usize) -> f64 {
    kahan_sum((1..=n).map(|i| 1.0 / i as f64))
}

fn checked_k_m(dist: &PageDistribution, k: usize) -> Result<usize> {
    if k < 8 {
        return Err(Error::domain(format!(
            "k must be >= 8 (got {k}): the Formula ranges use 3k/8, k/2, 11k/8 \
             and 3k/2, which have no conservative rounding below 8; k not \
             divisible by 8 is rounded conservatively"
        )));
    }
    let m = dist.len();
    if m < 2 * k {
        return Err(Error::domain(format!(
            "Formula needs m >= 2k (m = {m}, k = {k}); pad the distribution \
             with zero-probability pages first"
        )));
    }
    Ok(m)
}

/// Ratio helper: a zero denominator yields 0, flagging the bound vacuous
/// rather than erroring, so sweeps can proceed.
fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn ceil_frac(a: usize, b: usize, k: usize) -> usize {
    (a * k).div_ceil(b)
}

fn floor_frac(a: usize, b: usize, k: usize) -> usize {
    a * k / b
}

/// The min-of-two-ratios quantity of the clean-page bound, in `[0, 1]`.
/// Returns 0 when the bound is vacuous (zero numerators or denominators).
pub fn formula_min(dist: &PageDistribution, k: usize) -> Result<f64> {
    let m = checked_k_m(dist, k)?;
    // Numerator ranges shrink, denominator ranges grow.
    let n1 = dist.prefix(ceil_frac(3, 8, k), floor_frac(1, 2, k))?
        + dist.prefix(ceil_frac(3, 2, k), m)?;
    let d1 = dist.prefix(floor_frac(3, 8, k), m)?;
    let n2 = dist.prefix(ceil_frac(11, 8, k), m)?;
    let d2 = dist.prefix(floor_frac(1, 2, k), m)?;
    Ok(ratio(n1, d1).min(ratio(n2, d2)))
}

/// `RoE(LRU) <= 16 / Formula`; `+inf` when vacuous.
pub fn bound_lru(dist: &PageDistribution, k: usize) -> Result<f64> {
    let f = formula_min(dist, k)?;
    Ok(if f > 0.0 { 16.0 / f } else { f64::INFINITY })
}

/// `RoE(PLFU) <= 32 / Formula`: exactly twice [`bound_lru`], via
/// `RoE(PLFU) <= 2 RoE(ALG)` for every online policy.
pub fn bound_plfu_clean(dist: &PageDistribution, k: usize) -> Result<f64> {
    Ok(2.0 * bound_lru(dist, k)?)
}

/// `RoE(PLFU) <= 2 * sum_{i=2}^{k+1} p_{k+1} / p[i:k+1]`.
///
/// Returns 0 (vacuous but valid: PLFU never faults) when `p_{k+1} = 0`.
/// The value never exceeds `2 H_{k+1}`.
pub fn bound_plfu_harmonic(dist: &PageDistribution, k: usize) -> Result<f64> {
    let m = dist.len();
    if k >= m {
        return Err(Error::domain(format!(
            "bound_plfu_harmonic requires k < m (k = {k}, m = {m})"
        )));
    }
    let p_next = dist.prob((k + 1) as Page);
    if p_next <= 0.0 {
        return Ok(0.0);
    }
    let mut terms = Vec::with_capacity(k);
    for i in 2..=(k + 1) {
        terms.push(p_next / dist.prefix(i, k + 1)?);
    }
    Ok(2.0 * kahan_sum(terms))
}

/// `RoE(PLFU) <= 8 / p[k+1:m] - 4`; `+inf` when the tail is empty.
pub fn bound_plfu_costrate(dist: &PageDistribution, k: usize) -> Result<f64> {
    let tail = dist.tail(k);
    Ok(if tail > 0.0 {
        8.0 / tail - 4.0
    } else {
        f64::INFINITY
    })
}

/// For any lazy policy, `RoE <= 4 / p[k+1:m]^2 - 2 / p[k+1:m]`.
pub fn bound_lazy(dist: &PageDistribution, k: usize) -> Result<f64> {
    let tail = dist.tail(k);
    Ok(if tail > 0.0 {
        4.0 / (tail * tail) - 2.0 / tail
    } else {
        f64::INFINITY
    })
}

/// Long-run expected cost per request.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CostRates {
    /// PLFU pays `2 p[k+1:m]`.
    pub plfu: f64,
    /// No online policy goes below `p[k+1:m]`.
    pub online_lower: f64,
    /// No policy, even offline, goes below `p[k+1:m]^2 / (4 - 2 p[k+1:m])`.
    pub opt_lower: f64,
}

pub fn cost_rates(dist: &PageDistribution, k: usize) -> CostRates {
    let t = dist.tail(k);
    CostRates {
        plfu: 2.0 * t,
        online_lower: t,
        opt_lower: t * t / (4.0 - 2.0 * t),
    }
}

/// Lower bound on `Formula` for a genuine power law with `m >= 2k`,
/// depending on `alpha` only. Piecewise in `alpha`:
///
/// - `alpha > 1`: `min{1 - (2^a - (2/3)^a) / ((8/3)^a - (1/2)^a),
///   ((4/3)^a - 1) / (4^a - 1)}` with `a = alpha - 1`,
/// - `alpha = 1`: `2 - log 11 / log 4`,
/// - `alpha < 1`: `1 - (3^(1-alpha) - 1) / (4^(1-alpha) - 1)`.
pub fn powerlaw_certificate(alpha: f64) -> f64 {
    assert!(alpha > 0.0, "alpha must be positive");
    if (alpha - 1.0).abs() < 1e-12 {
        return 2.0 - 11f64.ln() / 4f64.ln();
    }
    if alpha > 1.0 {
        let a = alpha - 1.0;
        let branch1 = 1.0
            - (2f64.powf(a) - (2.0 / 3.0f64).powf(a)) / ((8.0 / 3.0f64).powf(a) - 0.5f64.powf(a));
        let branch2 = ((4.0 / 3.0f64).powf(a) - 1.0) / (4f64.powf(a) - 1.0);
        branch1.min(branch2)
    } else {
        let a = 1.0 - alpha;
        1.0 - (3f64.powf(a) - 1.0) / (4f64.powf(a) - 1.0)
    }
}

/// Multi-core analogue: the sandwich inequality costs at most a factor 2,
/// independent of `kappa`.
pub fn multicore_certificate(alpha: f64, kappa: f64) -> f64 {
    assert!(kappa >= 1.0, "kappa must be >= 1");
    powerlaw_certificate(alpha) / 2.0
}

/// Checks `kx >= 1 - (1-x)^k >= kx/(1+kx) >= kx/2` at one point, within
/// 1e-12 slack. `x` must lie in `[0, 1/kappa]`.
pub fn sandwich_inequality_check(x: f64, kappa: f64) -> Result<bool> {
    let kappa_valid = kappa.is_finite() && kappa >= 1.0;
    if !kappa_valid {
        return Err(Error::domain("sandwich check requires kappa >= 1"));
    }
    if !(0.0..=1.0 / kappa).contains(&x) {
        return Err(Error::domain(format!(
            "sandwich check requires 0 <= x <= 1/kappa (x = {x}, kappa = {kappa})"
        )));
    }
    const SLACK: f64 = 1e-12;
    let kx = kappa * x;
    let middle = -f64::exp_m1(kappa * f64::ln_1p(-x));
    let lower = kx / (1.0 + kx);
    Ok(kx >= middle - SLACK && middle >= lower - SLACK && lower >= kx / 2.0 - SLACK)
}

/// Closed-form cap on the expected per-phase occurrences of a small
/// page `j > k` under the big/small decomposition:
/// `1 + sum_{i=2}^{k} p_j / (p[i:k] + p_j)`.
pub fn occurrence_cap(dist: &PageDistribution, k: usize, j: Page) -> Result<f64> {
    let m = dist.len();
    if (j as usize) <= k || (j as usize) > m {
        return Err(Error::domain(format!(
            "occurrence_cap needs a small page: k < j <= m (j = {j}, k = {k}, m = {m})"
        )));
    }
    let p_j = dist.prob(j);
    if p_j <= 0.0 {
        return Ok(1.0);
    }
    let mut acc = 1.0;
    for i in 2..=k {
        acc += p_j / (dist.prefix(i, k)? + p_j);
    }
    Ok(acc)
}

/// Every closed-form bound for one `(distribution, k)` pair.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub m: usize,
    pub formula_min: f64,
    pub roe_lru_upper: f64,
    pub roe_plfu_clean_upper: f64,
    pub roe_plfu_harmonic_upper: f64,
    pub roe_plfu_costrate_upper: f64,
    pub roe_lazy_upper: f64,
    pub cr_plfu: f64,
    pub cr_online_lb: f64,
    pub cr_opt_lb: f64,
    /// True when `formula_min` is zero, i.e. the clean-page bounds are
    /// `+inf`.
    pub vacuous: bool,
}

impl BoundReport {
    pub fn evaluate(dist: &PageDistribution, k: usize) -> Result<Self> {
        let formula = formula_min(dist, k)?;
        let lru = if formula > 0.0 {
            16.0 / formula
        } else {
            f64::INFINITY
        };
        let rates = cost_rates(dist, k);
        Ok(Self {
            k,
            m: dist.len(),
            formula_min: formula,
            roe_lru_upper: lru,
            roe_plfu_clean_upper: 2.0 * lru,
            roe_plfu_harmonic_upper: bound_plfu_harmonic(dist, k)?,
            roe_plfu_costrate_upper: bound_plfu_costrate(dist, k)?,
            roe_lazy_upper: bound_lazy(dist, k)?,
            cr_plfu: rates.plfu,
            cr_online_lb: rates.online_lower,
            cr_opt_lb: rates.opt_lower,
            vacuous: formula <= 0.0,
        })
    }

    /// The smallest of the three PLFU upper bounds.
    pub fn plfu_best(&self) -> f64 {
        self.roe_plfu_clean_upper
            .min(self.roe_plfu_harmonic_upper)
            .min(self.roe_plfu_costrate_upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::PageDistribution;

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(0), 0.0);
        assert_eq!(harmonic(1), 1.0);
        assert!((harmonic(10) - 2.9289682539682538).abs() < 1e-12);
        // H_4 equals the partial zeta sum at alpha = 1.
        assert!((harmonic(4) - crate::dist::zeta_partial(1.0, 4).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn formula_min_uniform_hand_value() {
        let d = PageDistribution::uniform(16).unwrap();
        let f = formula_min(&d, 8).unwrap();
        // term1 = (p[3:4] + p[12:16]) / p[3:16] = 0.5
        // term2 = p[11:16] / p[4:16] = 6/13
        assert!((f - 6.0 / 13.0).abs() < 1e-12);
        assert!((bound_lru(&d, 8).unwrap() - 16.0 * 13.0 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn formula_min_is_vacuous_for_point_mass() {
        let d = PageDistribution::explicit(vec![1.0])
            .unwrap()
            .pad_to(16)
            .unwrap();
        let f = formula_min(&d, 8).unwrap();
        assert_eq!(f, 0.0);
        assert!(bound_lru(&d, 8).unwrap().is_infinite());
        assert!(bound_plfu_clean(&d, 8).unwrap().is_infinite());
    }

    #[test]
    fn formula_min_guards() {
        let d = PageDistribution::uniform(16).unwrap();
        assert!(formula_min(&d, 7).is_err());
        assert!(formula_min(&d, 9).is_err()); // m < 2k
    }

    #[test]
    fn formula_min_exceeds_alpha_one_certificate() {
        let d = PageDistribution::power_law(1.0, 32).unwrap();
        let f = formula_min(&d, 16).unwrap();
        let cert = powerlaw_certificate(1.0);
        assert!((cert - 0.27028419).abs() < 1e-6);
        assert!(f >= cert - 1e-9, "formula {f} under certificate {cert}");
        assert!(bound_lru(&d, 16).unwrap() <= 16.0 / cert + 1e-9);
    }

    #[test]
    fn formula_min_padding_invariance() {
        let base = PageDistribution::power_law(1.1, 32).unwrap();
        let f0 = formula_min(&base, 16).unwrap();
        for m_new in [33, 48, 100] {
            let padded = base.pad_to(m_new).unwrap();
            let f = formula_min(&padded, 16).unwrap();
            assert!((f - f0).abs() < 1e-15);
        }
    }

    #[test]
    fn plfu_clean_is_exactly_twice_lru() {
        for alpha in [0.4, 1.0, 1.7] {
            let d = PageDistribution::power_law(alpha, 64).unwrap();
            let lru = bound_lru(&d, 16).unwrap();
            let clean = bound_plfu_clean(&d, 16).unwrap();
            assert_eq!(clean, 2.0 * lru);
        }
    }

    #[test]
    fn harmonic_bound_collapses_on_flat_top() {
        // Top k+1 probabilities equal: terms become 1/(k+2-i).
        let d = PageDistribution::uniform(4).unwrap();
        let b = bound_plfu_harmonic(&d, 3).unwrap();
        assert!((b - 2.0 * (1.0 / 3.0 + 0.5 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn harmonic_bound_vacuous_when_tail_empty() {
        let d = PageDistribution::power_law(1.0, 4)
            .unwrap()
            .pad_to(8)
            .unwrap();
        assert_eq!(bound_plfu_harmonic(&d, 4).unwrap(), 0.0);
    }

    #[test]
    fn harmonic_bound_capped_by_2h() {
        let d = PageDistribution::power_law(0.9, 40).unwrap();
        let b = bound_plfu_harmonic(&d, 10).unwrap();
        assert!(b <= 2.0 * harmonic(11));
        assert!((2.0 * harmonic(11) - 6.0397).abs() < 1e-3);
    }

    #[test]
    fn costrate_bound_values() {
        let half = PageDistribution::uniform(16).unwrap();
        assert!((bound_plfu_costrate(&half, 8).unwrap() - 12.0).abs() < 1e-9);
        assert!((bound_lazy(&half, 8).unwrap() - 12.0).abs() < 1e-9);

        let pl = PageDistribution::power_law(1.0, 4).unwrap();
        assert!((bound_plfu_costrate(&pl, 2).unwrap() - (8.0 / 0.28 - 4.0)).abs() < 1e-9);
        assert!((bound_lazy(&pl, 2).unwrap() - (4.0 / (0.28 * 0.28) - 2.0 / 0.28)).abs() < 1e-9);

        // tail = 0: the bounds blow up, the rates vanish.
        let headed = PageDistribution::explicit(vec![0.5, 0.5, 0.0]).unwrap();
        assert!(bound_plfu_costrate(&headed, 2).unwrap().is_infinite());
        assert!(bound_lazy(&headed, 2).unwrap().is_infinite());
        let rates = cost_rates(&headed, 2);
        assert_eq!(rates.plfu, 0.0);
        assert_eq!(rates.online_lower, 0.0);
        assert_eq!(rates.opt_lower, 0.0);
    }

    #[test]
    fn cost_rate_values() {
        let half = PageDistribution::uniform(16).unwrap();
        let r = cost_rates(&half, 8);
        assert!((r.plfu - 1.0).abs() < 1e-9);
        assert!((r.online_lower - 0.5).abs() < 1e-9);
        assert!((r.opt_lower - 1.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn certificates_match_closed_forms() {
        assert!((powerlaw_certificate(1.0) - (2.0 - 11f64.ln() / 4f64.ln())).abs() < 1e-15);
        // alpha = 0.5: 1 - (sqrt(3) - 1) / (sqrt(4) - 1) = 2 - sqrt(3)
        assert!((powerlaw_certificate(0.5) - (2.0 - 3f64.sqrt())).abs() < 1e-12);
        // Both regimes approach 1 - log3/log4 at alpha -> 1; the exact
        // alpha = 1 case is a strictly tighter spike (2 - log11/log4).
        let near_one_limit = 1.0 - 3f64.ln() / 4f64.ln();
        assert!((powerlaw_certificate(0.999) - near_one_limit).abs() < 1e-2);
        assert!((powerlaw_certificate(1.001) - near_one_limit).abs() < 1e-2);
        assert!(powerlaw_certificate(1.0) > near_one_limit);
        // multi-core: half, independent of kappa
        for kappa in [1.0, 10.0, 1e4] {
            assert_eq!(
                multicore_certificate(1.0, kappa),
                powerlaw_certificate(1.0) / 2.0
            );
        }
        assert!((multicore_certificate(1.0, 2.0) - 0.1351).abs() < 1e-3);
    }

    #[test]
    fn sandwich_holds_on_grid() {
        assert!(sandwich_inequality_check(0.0, 5.0).unwrap());
        assert!(sandwich_inequality_check(0.5, 2.0).unwrap());
        for kappa in [1.0, 2.5, 10.0, 1e3] {
            for i in 0..=100 {
                let x = i as f64 / 100.0 / kappa;
                assert!(sandwich_inequality_check(x, kappa).unwrap());
            }
        }
        assert!(sandwich_inequality_check(0.51, 2.0).is_err());
        assert!(sandwich_inequality_check(-0.1, 2.0).is_err());
    }

    #[test]
    fn occurrence_cap_uniform_small_case() {
        let d = PageDistribution::uniform(3).unwrap();
        let cap = occurrence_cap(&d, 2, 3).unwrap();
        assert!((cap - 1.5).abs() < 1e-12);
        assert!(occurrence_cap(&d, 2, 2).is_err());
        assert!(occurrence_cap(&d, 2, 4).is_err());
    }

    #[test]
    fn bound_report_is_consistent() {
        let d = PageDistribution::power_law(1.2, 32).unwrap();
        let r = BoundReport::evaluate(&d, 8).unwrap();
        assert_eq!(r.roe_plfu_clean_upper, 2.0 * r.roe_lru_upper);
        assert!(!r.vacuous);
        for v in [
            r.roe_lru_upper,
            r.roe_plfu_clean_upper,
            r.roe_plfu_harmonic_upper,
            r.roe_plfu_costrate_upper,
            r.roe_lazy_upper,
        ] {
            assert!(v >= 1.0);
        }
        assert!(r.plfu_best() <= r.roe_plfu_clean_upper);
    }
}
