//! Certified counting lower bounds on worst-case extension complexity.
//!
//! Every discretized system has `(n+R+1)(n+R)` entries, each drawn from at
//! most `16Δ^5` values, so `log2(#systems) <= (n+R+1)(n+R)·⌈log2(16Δ^5)⌉`.
//! Since distinct point sets map to distinct systems, any `R` whose bound
//! falls below `log2(#sets)` cannot cover every set. All arithmetic is on big
//! integers; base-2 logarithms are ceilings taken from bit lengths.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polytope::delta_int;
use crate::rational::Rational;

/// `⌈log2 k⌉` for `k >= 1`.
fn ceil_log2(k: &BigUint) -> u64 {
    (k - 1u32).bits()
}

/// `(n+R+1)(n+R)·⌈log2(16Δ^5)⌉`.
pub fn systems_log2_upper(n: usize, r: &BigUint) -> Result<BigUint> {
    if r.is_zero() {
        return Err(Error::Domain("R must be at least 1".into()));
    }
    let delta = delta_int(n)?;
    let per_entry = ceil_log2(&(BigUint::from(16u32) * delta.pow(5)));
    let nr = BigUint::from(n) + r;
    Ok((&nr + 1u32) * nr * per_entry)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    /// Lower bound on `log2` of the number of objects to be distinguished.
    pub target: BigUint,
    pub r_star: BigUint,
    /// `systems_log2_upper(n, r_star)`.
    pub bound_at: BigUint,
    /// `systems_log2_upper(n, r_star - 1)`, absent when `r_star = 1`.
    pub bound_below: Option<BigUint>,
    /// The search hit the cap `R = 2^n` without reaching the target.
    pub saturated: bool,
    /// `r_star = 1`, so the certified bound says nothing beyond `xc >= 1`.
    pub trivial: bool,
    pub transcript: Vec<String>,
}

impl CountReport {
    /// Recomputes both bracketing values and checks
    /// `bound(R*−1) < target <= bound(R*)` (the lower side only when `R* > 1`,
    /// the upper side only when the search did not saturate).
    pub fn bracket_holds(&self) -> bool {
        let Ok(at) = systems_log2_upper(self.n, &self.r_star) else {
            return false;
        };
        if at != self.bound_at || (!self.saturated && at < self.target) {
            return false;
        }
        if self.r_star.is_one() {
            return self.bound_below.is_none();
        }
        let below = systems_log2_upper(self.n, &(&self.r_star - 1u32)).ok();
        match (&below, &self.bound_below) {
            (Some(b), Some(stored)) => b == stored && *b < self.target,
            _ => false,
        }
    }
}

/// Smallest `R` in `[1, 2^n]` with `systems_log2_upper(n, R) >= target`.
fn search(n: usize, target: BigUint, what: &str) -> Result<CountReport> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let cap = BigUint::one() << n;
    let bound = |r: &BigUint| systems_log2_upper(n, r);
    let (r_star, saturated) = if bound(&cap)? < target {
        (cap.clone(), true)
    } else {
        let (mut lo, mut hi) = (BigUint::one(), cap.clone());
        while lo < hi {
            let mid: BigUint = (&lo + &hi) >> 1;
            if bound(&mid)? >= target {
                hi = mid;
            } else {
                lo = mid + 1u32;
            }
        }
        (lo, false)
    };
    let bound_at = bound(&r_star)?;
    let bound_below = if r_star.is_one() {
        None
    } else {
        Some(bound(&(&r_star - 1u32))?)
    };

    let mut transcript = Vec::new();
    transcript.push(format!("n = {n}, Δ = {}", delta_int(n)?));
    transcript.push(format!("target: log2 {what} >= {target}"));
    if let Some(b) = &bound_below {
        transcript.push(format!("R = {}: log2 #systems <= {b} < {target}", &r_star - 1u32));
    }
    let rel = if saturated { "<" } else { ">=" };
    transcript.push(format!("R = {r_star}: log2 #systems <= {bound_at} {rel} {target}"));
    if saturated {
        transcript.push(format!("search capped at R = 2^{n}"));
    }
    transcript.push(format!("certified: worst-case xc >= {r_star}"));

    let trivial = r_star.is_one();
    Ok(CountReport { n, target, r_star, bound_at, bound_below, saturated, trivial, transcript })
}

/// Pigeonhole over all `2^(2^n) − 1` nonempty subsets of `{0,1}^n`, using
/// `2^n <= log2(2^(2^n) − 1)` rounded the safe way for `n >= 1`.
pub fn certified_xc_lower_bound(n: usize) -> Result<CountReport> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    // For n >= 1, log2(2^(2^n) − 1) > 2^n − 1, so any integer bound below 2^n
    // on the systems side is strictly below the number of sets.
    search(n, BigUint::one() << n, "#sets")
}

/// `binom(n, ⌊n/2⌋) / (2n)`, a lower bound on `log2` of the number of matroids on `n` elements.
pub fn matroid_count_log2_lower(n: usize) -> Result<Rational> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let k = n / 2;
    let mut binom = BigUint::one();
    for i in 0..k {
        binom = binom * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    Ok(Rational::new(binom.into(), BigUint::from(2 * n).into()))
}

pub fn certified_matroid_xc_lower_bound(n: usize) -> Result<CountReport> {
    let lower = matroid_count_log2_lower(n)?;
    let (q, _) = lower.numer().div_rem(lower.denom());
    let target = q.to_biguint().expect("count is nonnegative");
    search(n, target, "#matroids")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn systems_bound_examples() {
        assert_eq!(systems_log2_upper(1, &u(1)).unwrap(), u(54));
        assert_eq!(systems_log2_upper(1, &u(2)).unwrap(), u(108));
        assert!(systems_log2_upper(1, &u(0)).is_err());
    }

    #[test]
    fn ceil_log2_from_bits() {
        assert_eq!(ceil_log2(&u(1)), 0);
        assert_eq!(ceil_log2(&u(2)), 1);
        assert_eq!(ceil_log2(&u(512)), 9);
        assert_eq!(ceil_log2(&u(513)), 10);
    }

    #[test]
    fn one_dimension_is_trivial() {
        let rep = certified_xc_lower_bound(1).unwrap();
        assert_eq!(rep.r_star, u(1));
        assert!(rep.trivial && !rep.saturated && rep.bracket_holds());
    }

    #[test]
    fn matroid_counts() {
        assert_eq!(matroid_count_log2_lower(2).unwrap(), frac(1, 2));
        assert_eq!(matroid_count_log2_lower(4).unwrap(), frac(3, 4));
        assert_eq!(matroid_count_log2_lower(8).unwrap(), frac(35, 8));
        let rep = certified_matroid_xc_lower_bound(4).unwrap();
        assert_eq!(rep.target, u(0));
        assert_eq!(rep.r_star, u(1));
        assert!(rep.trivial && rep.bracket_holds());
    }

    #[test]
    fn tampered_report_fails_bracket() {
        let mut rep = certified_xc_lower_bound(30).unwrap();
        assert!(rep.bracket_holds() && !rep.trivial);
        rep.r_star += 1u32;
        assert!(!rep.bracket_holds());
    }
}
