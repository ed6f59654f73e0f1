//! Exact binomial tails and confidence intervals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::error::{domain, Result};
use crate::game::Prob;

pub fn big(p: Prob) -> BigRational {
    BigRational::new(BigInt::from(*p.numer()), BigInt::from(*p.denom()))
}

/// `Pr[Bin(n, p) >= k]` as an exact rational.
pub fn binomial_tail(n: u64, p: &BigRational, k: u64) -> Result<BigRational> {
    if p < &BigRational::zero() || p > &BigRational::one() {
        return Err(domain(format!("probability {p} outside [0, 1]")));
    }
    if k > n {
        return Ok(BigRational::zero());
    }
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    // C(n, j) updated incrementally
    let mut choose = BigInt::one();
    for j in 0..=n {
        if j > 0 {
            choose = choose * BigInt::from(n - j + 1) / BigInt::from(j);
        }
        if j >= k {
            total += BigRational::from_integer(choose.clone()) * pow(p, j) * pow(&q, n - j);
        }
    }
    Ok(total)
}

fn pow(base: &BigRational, e: u64) -> BigRational {
    num_traits::pow(base.clone(), e as usize)
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Clopper-Pearson interval for `successes` out of `trials` at the given
/// confidence level.
pub fn clopper_pearson(successes: u64, trials: u64, level: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials || !(0.0..1.0).contains(&level) {
        return Err(domain(format!("no interval for {successes} of {trials} at level {level}")));
    }
    let alpha = 1.0 - level;
    let (k, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0).map_err(|e| domain(e.to_string()))?.inverse_cdf(alpha / 2.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k).map_err(|e| domain(e.to_string()))?.inverse_cdf(1.0 - alpha / 2.0)
    };
    Ok((lo, hi))
}

/// The rational with the same shortest decimal representation as `v`, so
/// `0.1` reads as `1/10` rather than its binary expansion.
pub fn decimal_rational(v: f64) -> Result<BigRational> {
    if !v.is_finite() {
        return Err(domain(format!("{v} is not finite")));
    }
    let s = format!("{v}");
    let (neg, s) = s.strip_prefix('-').map_or((false, s.as_str()), |r| (true, r));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| domain(format!("cannot read {v}")))?;
    let r = BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len()));
    Ok(if neg { -r } else { r })
}

/// `ceil(n * (1 - delta))` in exact arithmetic.
pub fn acceptance_threshold(n: usize, delta: &BigRational) -> usize {
    ceil_fraction(n, &(BigRational::one() - delta))
}

/// `max(0, ceil(n * r))`.
pub fn ceil_fraction(n: usize, r: &BigRational) -> usize {
    let t = BigRational::from_integer(BigInt::from(n)) * r;
    if t <= BigRational::zero() {
        return 0;
    }
    let (q, rem) = t.numer().div_rem(t.denom());
    let c = if rem.is_zero() { q } else { q + 1 };
    c.to_usize().unwrap_or(usize::MAX)
}
