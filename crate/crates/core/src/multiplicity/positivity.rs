//! Positivity and vanishing checks on computed mixed multiplicities.
//!
//! Every coefficient must be nonnegative. On single-component models two
//! sharper statements are checked: if every `e(I(j))` is positive then every
//! mixed multiplicity is positive; otherwise, listing the positive ones first
//! (`s` of them), a coefficient vanishes as soon as it puts any weight on a
//! filtration with `e = 0`, and the remaining coefficients coincide with the
//! mixed multiplicities of the first `s` filtrations alone and are positive.

use serde::{Deserialize, Serialize};

use super::{is_positive, mixed_multiplicities, Backend, Coefficient, MixedMultiplicityReport};
use crate::error::Result;
use crate::filtration::Filtration;

/// Direct-backend values at most this size are classified as zero.
pub const ZERO_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarnessOptions {
    /// Enables the checks that need an analytically irreducible ring.
    pub single_component: bool,
    pub zero_threshold: f64,
    /// Relative tolerance for comparing direct-backend values.
    pub tolerance: f64,
    /// Backend for the reduced instance; defaults to the main one.
    pub reduced_backend: Option<Backend>,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        Self {
            single_component: true,
            zero_threshold: ZERO_THRESHOLD,
            tolerance: 1e-2,
            reduced_backend: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub zero_threshold: f64,
    /// `e(I(j))` for each filtration, computed on its own.
    pub singles: Vec<Coefficient>,
    /// Filtration indices with positive multiplicity first.
    pub order: Vec<usize>,
    pub s: usize,
    pub mixed: MixedMultiplicityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<MixedMultiplicityReport>,
    pub checks: Vec<Check>,
}

impl PositivityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn close(a: &Coefficient, b: &Coefficient, tol: f64) -> bool {
    match (a.exact(), b.exact()) {
        (Some(x), Some(y)) => x == y,
        _ => (a.to_f64() - b.to_f64()).abs() <= tol * a.to_f64().abs().max(b.to_f64().abs()).max(1.0),
    }
}

fn vanishes(c: &Coefficient, tol: f64) -> bool {
    match c.exact() {
        Some(x) => num_traits::Zero::is_zero(x),
        None => c.to_f64().abs() <= tol,
    }
}

fn check(name: &str, failures: Vec<String>) -> Check {
    Check {
        name: name.into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            "ok".into()
        } else {
            failures.join("; ")
        },
    }
}

pub fn positivity_report(fs: &[Filtration], backend: &Backend, opts: &HarnessOptions) -> Result<PositivityReport> {
    let mixed = mixed_multiplicities(fs, backend)?;
    let d = mixed.d as u32;
    let r = fs.len();
    let singles: Vec<Coefficient> = fs
        .iter()
        .map(|f| super::multiplicity(f, backend))
        .collect::<Result<_>>()?;
    let positive: Vec<bool> = singles.iter().map(|c| is_positive(c, opts.zero_threshold)).collect();
    let mut order: Vec<usize> = (0..r).filter(|&j| positive[j]).collect();
    let s = order.len();
    order.extend((0..r).filter(|&j| !positive[j]));

    let mut checks = Vec::new();

    let negative: Vec<String> = mixed
        .coeffs
        .iter()
        .filter(|(_, c)| match c.exact() {
            Some(x) => num_traits::Signed::is_negative(x),
            None => c.to_f64() < -opts.zero_threshold,
        })
        .map(|(k, c)| format!("e({k}) = {}", c.to_f64()))
        .collect();
    checks.push(check("nonnegative", negative));

    let pure: Vec<String> = (0..r)
        .filter_map(|j| {
            let mut ty = vec![0; r];
            ty[j] = d;
            let c = mixed.get(&ty).expect("pure type present");
            (!close(c, &singles[j], opts.tolerance))
                .then(|| format!("pure coefficient {j}: {} vs e = {}", c.to_f64(), singles[j].to_f64()))
        })
        .collect();
    checks.push(check("pure-coefficient-identity", pure));

    let mut reduced = None;
    if opts.single_component {
        if s == r {
            let bad: Vec<String> = mixed
                .coeffs
                .iter()
                .filter(|(_, c)| !is_positive(c, opts.zero_threshold))
                .map(|(k, c)| format!("e({k}) = {}", c.to_f64()))
                .collect();
            checks.push(check("all-positive", bad));
        } else {
            let bad: Vec<String> = mixed
                .coeffs
                .iter()
                .filter(|(k, _)| k.0.iter().zip(&positive).any(|(&dj, &p)| dj > 0 && !p))
                .filter(|(_, c)| !vanishes(c, opts.tolerance))
                .map(|(k, c)| format!("e({k}) = {}", c.to_f64()))
                .collect();
            checks.push(check("vanishing", bad));
            if s > 0 {
                let sub: Vec<Filtration> = order[..s].iter().map(|&j| fs[j].clone()).collect();
                let rb = opts.reduced_backend.as_ref().unwrap_or(backend);
                let red = mixed_multiplicities(&sub, rb)?;
                let mut bad = Vec::new();
                let mut nonpos = Vec::new();
                for (k, c) in &red.coeffs {
                    let mut ty = vec![0; r];
                    for (slot, &j) in order[..s].iter().enumerate() {
                        ty[j] = k.0[slot];
                    }
                    let full = mixed.get(&ty).expect("type present");
                    if !close(full, c, opts.tolerance) {
                        bad.push(format!("type {ty:?}: {} vs reduced {}", full.to_f64(), c.to_f64()));
                    }
                    if !is_positive(c, opts.zero_threshold) {
                        nonpos.push(format!("reduced e({k}) = {}", c.to_f64()));
                    }
                }
                checks.push(check("survivors-match-reduced", bad));
                checks.push(check("survivors-positive", nonpos));
                reduced = Some(red);
            }
        }
    }

    Ok(PositivityReport {
        zero_threshold: opts.zero_threshold,
        singles,
        order,
        s,
        mixed,
        reduced,
        checks,
    })
}
