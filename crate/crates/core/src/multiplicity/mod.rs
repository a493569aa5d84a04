//! Asymptotic lengths and (mixed) multiplicities of filtrations.
//!
//! `G(n_1, ..., n_r) = lim_m ℓ(R / I(1)_{m n_1} ... I(r)_{m n_r}) / m^d` is a
//! homogeneous polynomial of degree `d`; its coefficients, scaled by
//! `d_1! ... d_r!`, are the mixed multiplicities. Two backends evaluate `G`:
//!
//! * [`Backend::Direct`] reads the length sequence along a ladder of `m`
//!   values and extrapolates. No error bar is certified.
//! * [`Backend::TruncationExact`] replaces every filtration by a truncation,
//!   verifies a Noetherian period `s`, and evaluates `G` exactly as a
//!   covolume divided by `s^d`.

mod positivity;

pub use positivity::{positivity_report, Check, HarnessOptions, PositivityReport, ZERO_THRESHOLD};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::filtration::{Filtration, Period};
use crate::monomial::MonomialIdeal;
use crate::rational::{self, Rational};

/// Default ladder for direct limits.
pub const DEFAULT_LADDER: [u32; 3] = [8, 16, 32];

/// Default number of powers checked when verifying a period.
pub const DEFAULT_CHECK_BOUND: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DirectSequence,
    TruncationExact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::DirectSequence => f.write_str("direct-sequence"),
            Method::TruncationExact => f.write_str("truncation-exact"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "kebab-case")]
pub enum Backend {
    Direct { ladder: Vec<u32> },
    TruncationExact { level: u32, check_bound: u32 },
}

impl Backend {
    pub fn direct_default() -> Self {
        Backend::Direct {
            ladder: DEFAULT_LADDER.to_vec(),
        }
    }

    pub fn method(&self) -> Method {
        match self {
            Backend::Direct { .. } => Method::DirectSequence,
            Backend::TruncationExact { .. } => Method::TruncationExact,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceTerm {
    pub m: u32,
    #[serde(with = "rational::serde_biguint")]
    pub length: BigUint,
    /// `length / m^d`.
    #[serde(with = "rational::serde_str")]
    pub term: Rational,
}

fn check_common_dim(fs: &[Filtration]) -> Result<usize> {
    let Some(first) = fs.first() else {
        return Err(Error::InvalidArgument("at least one filtration is required".into()));
    };
    let d = first.dim();
    for f in fs {
        if f.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: f.dim(),
            });
        }
    }
    Ok(d)
}

/// `Π_j I(j)_{m n_j}`.
pub fn product_ideal(fs: &[Filtration], n: &[u32], m: u32) -> Result<MonomialIdeal> {
    let d = check_common_dim(fs)?;
    if n.len() != fs.len() {
        return Err(Error::DimensionMismatch {
            expected: fs.len(),
            got: n.len(),
        });
    }
    let mut out = MonomialIdeal::unit(d);
    for (f, &nj) in fs.iter().zip(n) {
        let idx = m.checked_mul(nj).ok_or(Error::Overflow("filtration index"))?;
        out = out.product(&*f.ideal_at(idx)?)?;
    }
    Ok(out)
}

/// `ℓ(R / Π_j I(j)_{m n_j}) / m^d` for each `m` of the ladder.
pub fn length_sequence(fs: &[Filtration], n: &[u32], ladder: &[u32]) -> Result<Vec<SequenceTerm>> {
    let d = check_common_dim(fs)?;
    if ladder.windows(2).any(|w| w[0] >= w[1]) || ladder.first() == Some(&0) {
        return Err(Error::InvalidArgument("ladder must be positive and strictly increasing".into()));
    }
    ladder
        .par_iter()
        .map(|&m| {
            let length = product_ideal(fs, n, m)?.colength()?;
            let term = Rational::new(
                BigInt::from(length.clone()),
                num_traits::pow(BigInt::from(m), d),
            );
            Ok(SequenceTerm { m, length, term })
        })
        .collect()
}

/// A value of a limit, exact or estimated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub method: Method,
    /// Exact value, or the last term of the sequence.
    #[serde(with = "rational::serde_str")]
    pub primary: Rational,
    /// Exact value, or the least-squares fit of `c0 + c1/m` to the last three
    /// terms, evaluated at `m = ∞`.
    #[serde(with = "rational::serde_str")]
    pub refined: Rational,
    pub tail: Vec<SequenceTerm>,
    pub error_note: String,
}

impl LimitEstimate {
    pub fn exact(value: Rational, note: impl Into<String>) -> Self {
        Self {
            method: Method::TruncationExact,
            primary: value.clone(),
            refined: value,
            tail: Vec::new(),
            error_note: note.into(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.method == Method::TruncationExact
    }

    /// The value fed to downstream fits: exact, or the refined estimate.
    pub fn value(&self) -> &Rational {
        &self.refined
    }

    pub fn value_f64(&self) -> f64 {
        rational::to_f64(&self.refined)
    }
}

/// Last term plus a Richardson-style refinement from the last three terms.
pub fn limit_estimate(seq: &[SequenceTerm]) -> Result<LimitEstimate> {
    if seq.len() < 3 {
        return Err(Error::TooFewTerms(seq.len()));
    }
    let tail = &seq[seq.len() - 3..];
    let u: Vec<Rational> = tail.iter().map(|t| Rational::new(BigInt::one(), BigInt::from(t.m))).collect();
    let three = rational::int(3);
    let ubar = u.iter().fold(Rational::zero(), |a, x| a + x) / &three;
    let tbar = tail.iter().fold(Rational::zero(), |a, t| a + &t.term) / &three;
    let mut sxy = Rational::zero();
    let mut sxx = Rational::zero();
    for (x, t) in u.iter().zip(tail) {
        sxy += (x - &ubar) * (&t.term - &tbar);
        sxx += (x - &ubar) * (x - &ubar);
    }
    let slope = sxy / sxx;
    let refined = tbar - slope * ubar;
    let last = tail[2].clone();
    Ok(LimitEstimate {
        method: Method::DirectSequence,
        primary: last.term.clone(),
        refined,
        error_note: format!(
            "no rate certified; last term at m={}, refinement fits c0 + c1/m to m in {:?}",
            last.m,
            tail.iter().map(|t| t.m).collect::<Vec<_>>()
        ),
        tail: seq.to_vec(),
    })
}

/// `G(n)` along verified truncations: the covolume of
/// `Π_j (I(j)_{a,s})^{n_j}` divided by `s^d`, with `s` the lcm of the periods.
pub fn g_exact_truncated(fs: &[Filtration], periods: &[Period], n: &[u32]) -> Result<Rational> {
    let d = check_common_dim(fs)?;
    if periods.len() != fs.len() || n.len() != fs.len() {
        return Err(Error::InvalidArgument("one period and one weight per filtration".into()));
    }
    if fs.iter().any(|f| f.truncation_level().is_none()) {
        return Err(Error::InvalidArgument("exact G needs truncated filtrations".into()));
    }
    if fs.iter().zip(periods).any(|(f, p)| f.truncation_level() != Some(p.level())) {
        return Err(Error::UnverifiedPeriod);
    }
    let s = periods.iter().fold(1u32, |acc, p| acc.lcm(&p.s()));
    let mut prod = MonomialIdeal::unit(d);
    for (f, &nj) in fs.iter().zip(n) {
        prod = prod.product(&f.ideal_at(s)?.power(nj)?)?;
    }
    Ok(prod.covolume()? / num_traits::pow(rational::int(s as i64), d))
}

/// Truncates at `level` and verifies a period for each filtration.
pub fn verified_truncations(fs: &[Filtration], level: u32, check_bound: u32) -> Result<(Vec<Filtration>, Vec<Period>)> {
    let truncs: Vec<Filtration> = fs.iter().map(|f| f.truncate(level)).collect::<Result<_>>()?;
    let periods = truncs
        .par_iter()
        .map(|t| t.noetherian_period(check_bound))
        .collect::<Result<Vec<_>>>()?;
    Ok((truncs, periods))
}

/// `G(n)` with the chosen backend.
pub fn g_value(fs: &[Filtration], n: &[u32], backend: &Backend) -> Result<LimitEstimate> {
    match backend {
        Backend::Direct { ladder } => limit_estimate(&length_sequence(fs, n, ladder)?),
        Backend::TruncationExact { level, check_bound } => {
            let (truncs, periods) = verified_truncations(fs, *level, *check_bound)?;
            Ok(LimitEstimate::exact(
                g_exact_truncated(&truncs, &periods, n)?,
                format!("exact along the {level}-th truncation"),
            ))
        }
    }
}

/// A type vector `(d_1, ..., d_r)`, serialized as `"d1,...,dr"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeKey(pub Vec<u32>);

impl fmt::Display for TypeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for TypeKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TypeKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(TypeKey)
            .map_err(serde::de::Error::custom)
    }
}

/// A coefficient: `{"exact": "p/q"}` or `{"approx": x, "method": ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Exact {
        #[serde(with = "rational::serde_str")]
        exact: Rational,
    },
    Approx { approx: f64, method: Method },
}

impl Coefficient {
    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Exact { exact } => rational::to_f64(exact),
            Coefficient::Approx { approx, .. } => *approx,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Coefficient::Exact { exact } => Some(exact),
            Coefficient::Approx { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GSample {
    pub n: Vec<u32>,
    pub g: LimitEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedMultiplicityReport {
    pub r: usize,
    pub d: usize,
    pub backend: Backend,
    /// Periods verified by the exact backend, one per filtration.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub periods: Vec<Period>,
    pub coeffs: BTreeMap<TypeKey, Coefficient>,
    pub samples: Vec<GSample>,
}

impl MixedMultiplicityReport {
    pub fn get(&self, ty: &[u32]) -> Option<&Coefficient> {
        self.coeffs.get(&TypeKey(ty.to_vec()))
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.values().all(|c| c.exact().is_some())
    }
}

/// All `(d_1, ..., d_r)` with `d_i >= 0` and sum `d`, in decreasing
/// lexicographic order.
pub fn type_vectors(r: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(r: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == r {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            go(r, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r > 0 {
        go(r, d, &mut Vec::new(), &mut out);
    }
    out
}

/// The sample points `1 + e` for every type vector `e`: a principal lattice
/// on the slice `Σ n_i = d + r`, on which homogeneous degree-`d` polynomials
/// are determined by their values.
pub fn sample_grid(r: usize, d: u32) -> Vec<Vec<u32>> {
    type_vectors(r, d)
        .into_iter()
        .map(|e| e.into_iter().map(|x| x + 1).collect())
        .collect()
}

fn monomial_value(n: &[u32], ty: &[u32]) -> Rational {
    let v: BigInt = n
        .iter()
        .zip(ty)
        .map(|(&x, &e)| num_traits::pow(BigInt::from(x), e as usize))
        .product();
    Rational::from_integer(v)
}

/// Exact Gaussian elimination.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularSystem)?;
        a.swap(col, piv);
        b.swap(col, piv);
        let lead = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &lead;
        }
        b[col] /= &lead;
        let prow = a[col].clone();
        let pb = b[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for (x, p) in a[r].iter_mut().zip(&prow) {
                    *x -= &f * p;
                }
                b[r] -= &f * &pb;
            }
        }
    }
    Ok(b)
}

/// Coefficients of the homogeneous degree-`d` polynomial in `r` variables
/// through the given samples (one per type vector).
pub fn fit_homogeneous(r: usize, d: u32, samples: &[(Vec<u32>, Rational)]) -> Result<Vec<(Vec<u32>, Rational)>> {
    let types = type_vectors(r, d);
    if samples.len() != types.len() {
        return Err(Error::InvalidArgument(format!(
            "need {} samples, got {}",
            types.len(),
            samples.len()
        )));
    }
    let a = samples
        .iter()
        .map(|(n, _)| types.iter().map(|t| monomial_value(n, t)).collect())
        .collect();
    let b = samples.iter().map(|(_, v)| v.clone()).collect();
    let c = solve(a, b)?;
    Ok(types.into_iter().zip(c).collect())
}

pub(crate) fn factorial_product(ty: &[u32]) -> Rational {
    let v: BigInt = ty
        .iter()
        .map(|&k| (1..=k as u64).map(BigInt::from).product::<BigInt>())
        .product();
    Rational::from_integer(v)
}

/// Builds a report from `G` samples on the default grid.
pub(crate) fn assemble<F>(r: usize, d: usize, backend: Backend, periods: Vec<Period>, g: F) -> Result<MixedMultiplicityReport>
where
    F: Fn(&[u32]) -> Result<LimitEstimate> + Sync,
{
    let grid = sample_grid(r, d as u32);
    let samples: Vec<GSample> = grid
        .par_iter()
        .map(|n| Ok(GSample { n: n.clone(), g: g(n)? }))
        .collect::<Result<_>>()?;
    let exact = samples.iter().all(|s| s.g.is_exact());
    let pts: Vec<(Vec<u32>, Rational)> = samples.iter().map(|s| (s.n.clone(), s.g.value().clone())).collect();
    let fitted = fit_homogeneous(r, d as u32, &pts)?;
    let coeffs = fitted
        .into_iter()
        .map(|(ty, c)| {
            let e = c * factorial_product(&ty);
            let v = if exact {
                Coefficient::Exact { exact: e }
            } else {
                Coefficient::Approx {
                    approx: rational::to_f64(&e),
                    method: Method::DirectSequence,
                }
            };
            (TypeKey(ty), v)
        })
        .collect();
    Ok(MixedMultiplicityReport {
        r,
        d,
        backend,
        periods,
        coeffs,
        samples,
    })
}

/// Mixed multiplicities `e(I(1)^[d_1], ..., I(r)^[d_r])` for every type.
pub fn mixed_multiplicities(fs: &[Filtration], backend: &Backend) -> Result<MixedMultiplicityReport> {
    let d = check_common_dim(fs)?;
    match backend {
        Backend::Direct { ladder } => assemble(fs.len(), d, backend.clone(), Vec::new(), |n| {
            limit_estimate(&length_sequence(fs, n, ladder)?)
        }),
        Backend::TruncationExact { level, check_bound } => {
            let (truncs, periods) = verified_truncations(fs, *level, *check_bound)?;
            assemble(fs.len(), d, backend.clone(), periods.clone(), |n| {
                Ok(LimitEstimate::exact(
                    g_exact_truncated(&truncs, &periods, n)?,
                    format!("exact along the {level}-th truncation"),
                ))
            })
        }
    }
}

/// `e(I) = d! lim ℓ(R/I_m)/m^d`.
pub fn multiplicity(f: &Filtration, backend: &Backend) -> Result<Coefficient> {
    let report = mixed_multiplicities(std::slice::from_ref(f), backend)?;
    Ok(report.get(&[f.dim() as u32]).expect("single type").clone())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderRow {
    pub level: u32,
    pub report: MixedMultiplicityReport,
    /// Coefficient change from the previous row (absent on the first).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differences: Option<BTreeMap<TypeKey, f64>>,
}

/// Exact mixed multiplicities of the `a`-th truncations for each level.
pub fn truncation_ladder(fs: &[Filtration], levels: &[u32], check_bound: u32) -> Result<Vec<LadderRow>> {
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("levels must be strictly increasing".into()));
    }
    let mut rows: Vec<LadderRow> = Vec::new();
    for &level in levels {
        let report = mixed_multiplicities(fs, &Backend::TruncationExact { level, check_bound })?;
        let differences = rows.last().map(|prev| {
            report
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v.to_f64() - prev.report.coeffs[k].to_f64()))
                .collect()
        });
        rows.push(LadderRow {
            level,
            report,
            differences,
        });
    }
    Ok(rows)
}

/// Sign of a coefficient: exact, or against [`ZERO_THRESHOLD`].
pub(crate) fn is_positive(c: &Coefficient, threshold: f64) -> bool {
    match c {
        Coefficient::Exact { exact } => exact.is_positive(),
        Coefficient::Approx { approx, .. } => *approx > threshold,
    }
}
