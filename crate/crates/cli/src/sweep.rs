//! Exhaustive sweeps over all nonempty `X ⊆ {0,1}^n`, fanned out over a
//! worker pool and merged in mask order.

use std::collections::HashMap;

use rayon::prelude::*;
use xclab_core::approximator::{build_approx, objective_battery, verify_sandwich};
use xclab_core::discretizer::{
    default_tolerance, discretize, membership_test, min_deviation, separation_bound, separation_margin,
    reconstruct,
};
use xclab_core::factorization::{build_extension, trivial_factorization, verify_extension, Side};
use xclab_core::polytope::{cube_points, hull, slack_matrix, VertexSet};
use xclab_core::{Rational, Report};

use crate::CliError;

/// Outcome of the round trip for one point set.
#[derive(Clone, Debug)]
pub struct RoundtripItem {
    pub mask: u64,
    pub reconstructed: bool,
    pub key: String,
    /// Largest minimum deviation over members, against `1/(4(n+r))`.
    pub member_max: Rational,
    pub member_bound: Rational,
    /// Smallest separation margin over non-members, against `1/(2(n+r))`.
    pub nonmember_min: Option<Rational>,
    pub nonmember_bound: Rational,
    /// Both trivial extensions verified, when requested.
    pub extensions: Option<bool>,
}

impl RoundtripItem {
    pub fn bands_ok(&self) -> bool {
        self.member_max <= self.member_bound
            && self.nonmember_min.as_ref().is_none_or(|m| *m >= self.nonmember_bound)
            && self.member_bound < self.nonmember_bound
    }
}

#[derive(Clone, Debug)]
pub struct RoundtripSummary {
    pub n: usize,
    pub items: Vec<RoundtripItem>,
    /// Pairs of masks whose systems coincide.
    pub collisions: Vec<(u64, u64)>,
}

impl RoundtripSummary {
    pub fn total(&self) -> usize {
        self.items.len()
    }

    pub fn reconstructed(&self) -> usize {
        self.items.iter().filter(|i| i.reconstructed).count()
    }

    pub fn injective(&self) -> bool {
        self.collisions.is_empty()
    }

    pub fn band_failures(&self) -> Vec<u64> {
        self.items.iter().filter(|i| !i.bands_ok()).map(|i| i.mask).collect()
    }

    pub fn extension_failures(&self) -> Vec<u64> {
        self.items.iter().filter(|i| i.extensions == Some(false)).map(|i| i.mask).collect()
    }

    pub fn passed(&self) -> bool {
        self.reconstructed() == self.total()
            && self.injective()
            && self.band_failures().is_empty()
            && self.extension_failures().is_empty()
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("n = {}: {}/{} reconstructed", self.n, self.reconstructed(), self.total()),
            format!("distinct systems: {} ({} collisions)", self.total() - self.collisions.len(), self.collisions.len()),
        ];
        let bands = self.band_failures();
        out.push(format!("margin bands: {} sets outside", bands.len()));
        if self.items.iter().any(|i| i.extensions.is_some()) {
            out.push(format!("trivial extensions: {} sets failing", self.extension_failures().len()));
        }
        out
    }
}

pub fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Internal(format!("worker pool: {e}")))
}

pub fn roundtrip_one(x: &VertexSet, mask: u64, extensions: bool) -> Result<RoundtripItem, CliError> {
    let n = x.n();
    let d = discretize(x, None)?;
    let back = reconstruct(&d)?;
    let member_bound = default_tolerance(n, d.r);
    let nonmember_bound = separation_bound(n, d.r);
    let mut member_max = Rational::from_integer(0.into());
    let mut nonmember_min: Option<Rational> = None;
    for point in cube_points(n) {
        if x.contains(&point) {
            let (t, _) = min_deviation(&d, &point)?;
            if t > member_max {
                member_max = t;
            }
        } else if !membership_test(&d, &point)? {
            let m = separation_margin(&d, &point)?;
            if nonmember_min.as_ref().is_none_or(|cur| m < *cur) {
                nonmember_min = Some(m);
            }
        } else {
            // A non-member accepted by the system: record a zero margin.
            nonmember_min = Some(Rational::from_integer(0.into()));
        }
    }
    let extensions = if extensions {
        let p = hull(x)?;
        let s = slack_matrix(&p, x)?;
        let mut ok = true;
        for side in [Side::Left, Side::Right] {
            let ef = build_extension(&p, x, &trivial_factorization(&s, side))?;
            ok &= verify_extension(&ef, x)?.all_passed();
        }
        Some(ok)
    } else {
        None
    };
    Ok(RoundtripItem {
        mask,
        reconstructed: back == *x,
        key: d.canonical_key(),
        member_max,
        member_bound,
        nonmember_min,
        nonmember_bound,
        extensions,
    })
}

/// Discretizes and reconstructs every nonempty `X ⊆ {0,1}^n`.
pub fn roundtrip_sweep(n: usize, jobs: usize, extensions: bool) -> Result<RoundtripSummary, CliError> {
    if !(1..=4).contains(&n) {
        return Err(CliError::Usage(format!("roundtrip needs 1 <= n <= 4, got {n}")));
    }
    let masks: Vec<u64> = (1..1u64 << (1 << n)).collect();
    let items = pool(jobs)?.install(|| {
        masks
            .par_iter()
            .map(|&mask| roundtrip_one(&VertexSet::from_mask(n, mask)?, mask, extensions))
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let mut seen: HashMap<&str, u64> = HashMap::new();
    let mut collisions = Vec::new();
    for item in &items {
        if let Some(&first) = seen.get(item.key.as_str()) {
            collisions.push((first, item.mask));
        } else {
            seen.insert(&item.key, item.mask);
        }
    }
    Ok(RoundtripSummary { n, items, collisions })
}

/// Sandwich certificates for every nonempty `X ⊆ {0,1}^n` at one `ε`.
pub fn approx_sweep(
    n: usize,
    epsilon: &Rational,
    objectives: usize,
    seed: u64,
    jobs: usize,
) -> Result<Vec<(u64, Report)>, CliError> {
    if !(1..=3).contains(&n) {
        return Err(CliError::Usage(format!("approximation sweep needs 1 <= n <= 3, got {n}")));
    }
    let masks: Vec<u64> = (1..1u64 << (1 << n)).collect();
    pool(jobs)?.install(|| {
        masks
            .par_iter()
            .map(|&mask| {
                let x = VertexSet::from_mask(n, mask)?;
                Ok((mask, approx_one(&x, epsilon, objectives, seed)?))
            })
            .collect()
    })
}

pub fn approx_one(x: &VertexSet, epsilon: &Rational, objectives: usize, seed: u64) -> Result<Report, CliError> {
    let q = build_approx(x, None, epsilon)?;
    let battery = objective_battery(&q.polytope, seed, objectives);
    Ok(verify_sandwich(&q, x, &battery)?)
}
