//! Filtrations `n ↦ I_n` of monomial ideals.
//!
//! A [`Filtration`] is a cheap handle (clones share state) around a
//! [`FiltrationSpec`] and a memo table of computed ideals. The memo table is
//! a concurrent cache: any number of threads may call [`Filtration::ideal_at`]
//! at once, each key is written at most once (the first finished writer wins
//! and later results for the same key are discarded, being identical), and
//! readers never observe a partially built ideal.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Exponent, MonomialIdeal};
use crate::rational::{self, Rational};

/// A positive scalar `p/q` or `sqrt(p/q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSurd", into = "RawSurd")]
pub enum SurdScalar {
    Rational { p: u64, q: u64 },
    Sqrt { p: u64, q: u64 },
}

#[derive(Serialize, Deserialize)]
enum RawSurd {
    #[serde(rename = "rat")]
    Rat([u64; 2]),
    #[serde(rename = "sqrt")]
    Sqrt([u64; 2]),
}

impl TryFrom<RawSurd> for SurdScalar {
    type Error = Error;
    fn try_from(raw: RawSurd) -> Result<Self> {
        match raw {
            RawSurd::Rat([p, q]) => SurdScalar::rational(p, q),
            RawSurd::Sqrt([p, q]) => SurdScalar::sqrt(p, q),
        }
    }
}

impl From<SurdScalar> for RawSurd {
    fn from(s: SurdScalar) -> Self {
        match s {
            SurdScalar::Rational { p, q } => RawSurd::Rat([p, q]),
            SurdScalar::Sqrt { p, q } => RawSurd::Sqrt([p, q]),
        }
    }
}

impl SurdScalar {
    pub fn rational(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidArgument("scale must be a positive p/q".into()));
        }
        let g = p.gcd(&q);
        Ok(SurdScalar::Rational { p: p / g, q: q / g })
    }

    /// `sqrt(p/q)`, normalized to the rational kind when `p/q` is a square.
    pub fn sqrt(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidArgument("scale must be sqrt of a positive p/q".into()));
        }
        let g = p.gcd(&q);
        let (p, q) = (p / g, q / g);
        let (rp, rq) = (p.sqrt(), q.sqrt());
        if rp * rp == p && rq * rq == q {
            return Ok(SurdScalar::Rational { p: rp, q: rq });
        }
        Ok(SurdScalar::Sqrt { p, q })
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            SurdScalar::Rational { p, q } => p as f64 / q as f64,
            SurdScalar::Sqrt { p, q } => (p as f64 / q as f64).sqrt(),
        }
    }

    /// Smallest integer `t` with `t >= n * scale`.
    pub fn ceil_mul(&self, n: &BigInt) -> BigInt {
        match self {
            SurdScalar::Rational { p, q } => {
                let num = n * BigInt::from(*p);
                num.div_ceil(&BigInt::from(*q))
            }
            SurdScalar::Sqrt { p, q } => {
                // least t >= 0 with t^2 q >= n^2 p
                let target = n * n * BigInt::from(*p);
                let q = BigInt::from(*q);
                let mut t = (&target / &q).sqrt();
                while &t * &t * &q < target {
                    t += 1;
                }
                while t.is_positive() && (&t - 1) * (&t - 1) * &q >= target {
                    t -= 1;
                }
                t
            }
        }
    }
}

/// Declarative description of a filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FiltrationSpec {
    /// `I_n = I^n`.
    Adic { ideal: MonomialIdeal },
    /// `I_n = F + J^n`.
    FixedPlusAdic { fixed: MonomialIdeal, adic: MonomialIdeal },
    /// `I_n` spanned by the monomials `x^a` with `sum w_i a_i >= n * scale`.
    RoundedValuation {
        dim: usize,
        #[serde(with = "rational::serde_vec")]
        weights: Vec<Rational>,
        scale: SurdScalar,
    },
    /// Agrees with `base` up to `level`, generated by products above it.
    Truncated { base: Box<FiltrationSpec>, level: u32 },
    /// `I_n = base_{factor * n}`.
    Rescaled { base: Box<FiltrationSpec>, factor: u32 },
}

impl FiltrationSpec {
    pub fn dim(&self) -> usize {
        match self {
            FiltrationSpec::Adic { ideal } => ideal.dim(),
            FiltrationSpec::FixedPlusAdic { adic, .. } => adic.dim(),
            FiltrationSpec::RoundedValuation { dim, .. } => *dim,
            FiltrationSpec::Truncated { base, .. } | FiltrationSpec::Rescaled { base, .. } => base.dim(),
        }
    }

    /// Every violated construction invariant, without computing any ideal
    /// beyond the stored ones.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            FiltrationSpec::Adic { ideal } => {
                if ideal.is_unit() {
                    out.push("adic ideal must be proper".into());
                } else if !ideal.is_primary() {
                    out.push(format!("adic ideal {:?} is not m-primary", ideal.gens()));
                }
            }
            FiltrationSpec::FixedPlusAdic { fixed, adic } => {
                if adic.is_unit() {
                    out.push("adic part must be proper".into());
                } else if !adic.is_primary() {
                    out.push(format!("adic part {:?} is not m-primary", adic.gens()));
                }
                if fixed.is_unit() {
                    out.push("fixed part must be a proper ideal".into());
                }
                if fixed.dim() != adic.dim() {
                    out.push(format!(
                        "dimension mismatch: fixed part has {}, adic part has {}",
                        fixed.dim(),
                        adic.dim()
                    ));
                }
            }
            FiltrationSpec::RoundedValuation { dim, weights, .. } => {
                if *dim == 0 {
                    out.push("dimension must be at least 1".into());
                }
                if weights.len() != *dim {
                    out.push(format!("expected {dim} weights, got {}", weights.len()));
                }
                if weights.iter().any(|w| !w.is_positive()) {
                    out.push("weights must be positive".into());
                }
            }
            FiltrationSpec::Truncated { base, level } => {
                if *level == 0 {
                    out.push("truncation level must be at least 1".into());
                }
                out.extend(base.diagnostics());
            }
            FiltrationSpec::Rescaled { base, factor } => {
                if *factor == 0 {
                    out.push("rescale factor must be at least 1".into());
                }
                out.extend(base.diagnostics());
            }
        }
        out
    }
}

enum Kind {
    Adic(MonomialIdeal),
    FixedPlusAdic {
        fixed: MonomialIdeal,
        powers: Filtration,
    },
    Rounded {
        weights: Vec<u128>,
        // n * scale measured in units of 1/denominator of the weights
        denom: u64,
        scale: SurdScalar,
    },
    Truncated {
        base: Filtration,
        level: u32,
    },
    Rescaled {
        base: Filtration,
        factor: u32,
    },
}

struct Inner {
    spec: FiltrationSpec,
    dim: usize,
    kind: Kind,
    cache: RwLock<HashMap<u32, Arc<MonomialIdeal>>>,
}

/// A filtration with memoized ideals. See the module docs for the
/// concurrency contract.
#[derive(Clone)]
pub struct Filtration(Arc<Inner>);

impl std::fmt::Debug for Filtration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_tuple("Filtration").field(&self.0.spec).finish()
    }
}

impl PartialEq for Filtration {
    fn eq(&self, other: &Self) -> bool {
        self.0.spec == other.0.spec
    }
}

impl Filtration {
    pub fn from_spec(spec: FiltrationSpec) -> Result<Self> {
        if let Some(d) = spec.diagnostics().into_iter().next() {
            return Err(Error::InvalidArgument(d));
        }
        let dim = spec.dim();
        let kind = match &spec {
            FiltrationSpec::Adic { ideal } => Kind::Adic(ideal.clone()),
            FiltrationSpec::FixedPlusAdic { fixed, adic } => Kind::FixedPlusAdic {
                fixed: fixed.clone(),
                powers: Filtration::adic(adic.clone())?,
            },
            FiltrationSpec::RoundedValuation { weights, scale, .. } => {
                let denom = weights
                    .iter()
                    .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
                let ints = weights
                    .iter()
                    .map(|w| {
                        (w * Rational::from_integer(denom.clone()))
                            .to_integer()
                            .to_u128()
                            .ok_or(Error::Overflow("valuation weights"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Kind::Rounded {
                    weights: ints,
                    denom: denom.to_u64().ok_or(Error::Overflow("valuation weights"))?,
                    scale: scale.clone(),
                }
            }
            FiltrationSpec::Truncated { base, level } => Kind::Truncated {
                base: Filtration::from_spec((**base).clone())?,
                level: *level,
            },
            FiltrationSpec::Rescaled { base, factor } => Kind::Rescaled {
                base: Filtration::from_spec((**base).clone())?,
                factor: *factor,
            },
        };
        Ok(Filtration(Arc::new(Inner {
            spec,
            dim,
            kind,
            cache: RwLock::new(HashMap::new()),
        })))
    }

    pub fn adic(ideal: MonomialIdeal) -> Result<Self> {
        if !ideal.is_primary() {
            return Err(Error::NotPrimary(format!("adic ideal {:?}", ideal.gens())));
        }
        Self::from_spec(FiltrationSpec::Adic { ideal })
    }

    /// `F + J^n`.
    pub fn fixed_plus_adic(fixed: MonomialIdeal, adic: MonomialIdeal) -> Result<Self> {
        if fixed.dim() != adic.dim() {
            return Err(Error::DimensionMismatch {
                expected: adic.dim(),
                got: fixed.dim(),
            });
        }
        if !adic.is_primary() {
            return Err(Error::NotPrimary(format!("adic part {:?}", adic.gens())));
        }
        Self::from_spec(FiltrationSpec::FixedPlusAdic { fixed, adic })
    }

    pub fn rounded_valuation(weights: Vec<Rational>, scale: SurdScalar) -> Result<Self> {
        Self::from_spec(FiltrationSpec::RoundedValuation {
            dim: weights.len(),
            weights,
            scale,
        })
    }

    /// `I_n = (x^⌈n·scale⌉)` in one variable.
    pub fn ceiling_power(scale: SurdScalar) -> Result<Self> {
        Self::rounded_valuation(vec![Rational::one()], scale)
    }

    /// The `a`-th truncation.
    pub fn truncate(&self, a: u32) -> Result<Self> {
        Self::from_spec(FiltrationSpec::Truncated {
            base: Box::new(self.0.spec.clone()),
            level: a,
        })
    }

    /// `I_n ↦ I_{s n}`.
    pub fn rescale(&self, s: u32) -> Result<Self> {
        Self::from_spec(FiltrationSpec::Rescaled {
            base: Box::new(self.0.spec.clone()),
            factor: s,
        })
    }

    pub fn spec(&self) -> &FiltrationSpec {
        &self.0.spec
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Truncation level, if this is a truncated filtration.
    pub fn truncation_level(&self) -> Option<u32> {
        match self.0.kind {
            Kind::Truncated { level, .. } => Some(level),
            _ => None,
        }
    }

    fn cached(&self, n: u32) -> Option<Arc<MonomialIdeal>> {
        self.0.cache.read().expect("cache poisoned").get(&n).cloned()
    }

    fn store(&self, n: u32, ideal: MonomialIdeal) -> Arc<MonomialIdeal> {
        let mut cache = self.0.cache.write().expect("cache poisoned");
        cache.entry(n).or_insert_with(|| Arc::new(ideal)).clone()
    }

    pub fn ideal_at(&self, n: u32) -> Result<Arc<MonomialIdeal>> {
        if let Some(i) = self.cached(n) {
            return Ok(i);
        }
        if n == 0 {
            return Ok(self.store(0, MonomialIdeal::unit(self.dim())));
        }
        match &self.0.kind {
            Kind::Adic(ideal) => {
                let (mut k, mut cur) = self.highest_cached_below(n);
                while k < n {
                    cur = self.store(k + 1, cur.product(ideal)?);
                    k += 1;
                }
                Ok(cur)
            }
            Kind::FixedPlusAdic { fixed, powers } => {
                let i = fixed.sum(&*powers.ideal_at(n)?)?;
                Ok(self.store(n, i))
            }
            Kind::Rounded {
                weights,
                denom,
                scale,
            } => {
                let t = scale.ceil_mul(&BigInt::from(n as u64 * denom));
                let t = t.to_u128().ok_or(Error::Overflow("valuation threshold"))?;
                Ok(self.store(n, threshold_ideal(weights, t)?))
            }
            Kind::Truncated { base, level } => {
                if n <= *level {
                    return Ok(self.store(n, (*base.ideal_at(n)?).clone()));
                }
                let (k, _) = self.highest_cached_below(n);
                for m in (k + 1).max(*level + 1)..=n {
                    let mut gens: Vec<Exponent> = Vec::new();
                    for i in 1..=(*level).min(m - 1) {
                        let a = base.ideal_at(i)?;
                        let b = self.ideal_at(m - i)?;
                        gens.extend(a.product(&b)?.gens().iter().cloned());
                    }
                    self.store(m, MonomialIdeal::new(self.dim(), gens)?);
                }
                Ok(self.cached(n).expect("just stored"))
            }
            Kind::Rescaled { base, factor } => {
                let m = n.checked_mul(*factor).ok_or(Error::Overflow("rescaled index"))?;
                let i = base.ideal_at(m)?;
                Ok(self.store(n, (*i).clone()))
            }
        }
    }

    fn highest_cached_below(&self, n: u32) -> (u32, Arc<MonomialIdeal>) {
        let cache = self.0.cache.read().expect("cache poisoned");
        cache
            .iter()
            .filter(|(&k, _)| k < n)
            .max_by_key(|(&k, _)| k)
            .map(|(&k, v)| (k, v.clone()))
            .unwrap_or_else(|| (0, Arc::new(MonomialIdeal::unit(self.0.dim))))
    }

    /// Checks `I_i I_j ⊆ I_{i+j}` for all `i, j >= 1` with `i + j <= bound`.
    pub fn check_submultiplicative(&self, bound: u32) -> Result<SubmultiplicativityReport> {
        let mut checked = 0;
        for total in 2..=bound {
            let target = self.ideal_at(total)?;
            for i in 1..total {
                let prod = self.ideal_at(i)?.product(&*self.ideal_at(total - i)?)?;
                checked += 1;
                if !target.contains_ideal(&prod)? {
                    return Ok(SubmultiplicativityReport {
                        bound,
                        checked_pairs: checked,
                        violation: Some((i, total - i)),
                    });
                }
            }
        }
        Ok(SubmultiplicativityReport {
            bound,
            checked_pairs: checked,
            violation: None,
        })
    }

    /// Search-and-verify for a period `s` with `I_{s i} = (I_s)^i` for all
    /// `1 <= i <= check_bound`. Only truncated filtrations qualify.
    /// Candidates are the divisors of `lcm(1..=a)` up to [`PERIOD_SEARCH_CAP`],
    /// tried in increasing order.
    pub fn noetherian_period(&self, check_bound: u32) -> Result<Period> {
        let Some(a) = self.truncation_level() else {
            return Err(Error::InvalidArgument(
                "noetherian_period needs a truncated filtration".into(),
            ));
        };
        if check_bound == 0 {
            return Err(Error::InvalidArgument("check_bound must be at least 1".into()));
        }
        let mut best = (0u32, 0u32);
        for s in period_candidates(a) {
            let base = self.ideal_at(s)?;
            let mut pow = (*base).clone();
            let mut ok_up_to = 1;
            for i in 2..=check_bound {
                pow = pow.product(&base)?;
                let idx = s.checked_mul(i).ok_or(Error::Overflow("period check index"))?;
                if *self.ideal_at(idx)? != pow {
                    break;
                }
                ok_up_to = i;
            }
            if ok_up_to == check_bound {
                return Ok(Period {
                    s,
                    level: a,
                    verified_up_to: check_bound,
                });
            }
            if ok_up_to > best.1 || best.0 == 0 {
                best = (s, ok_up_to);
            }
        }
        Err(Error::NoPeriod {
            best: best.0 as u64,
            first_failure: best.1 as u64 + 1,
        })
    }
}

/// Largest period candidate tried by [`Filtration::noetherian_period`].
pub const PERIOD_SEARCH_CAP: u32 = 4096;

fn period_candidates(a: u32) -> Vec<u32> {
    // s divides lcm(1..=a) iff every prime power dividing s is at most a
    (1..=PERIOD_SEARCH_CAP)
        .filter(|&s| {
            let mut rest = s;
            let mut p = 2;
            while rest > 1 {
                if p * p > rest {
                    return rest <= a;
                }
                if rest % p == 0 {
                    let mut pp = 1;
                    while rest % p == 0 {
                        rest /= p;
                        pp *= p;
                    }
                    if pp > a {
                        return false;
                    }
                }
                p += 1;
            }
            true
        })
        .collect()
}

/// A verified Noetherian period of a truncated filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    s: u32,
    level: u32,
    verified_up_to: u32,
}

impl Period {
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Truncation level of the filtration the period was verified on.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Largest `i` for which `I_{s i} = (I_s)^i` was checked.
    pub fn verified_up_to(&self) -> u32 {
        self.verified_up_to
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmultiplicativityReport {
    pub bound: u32,
    pub checked_pairs: u32,
    /// First `(i, j)` with `I_i I_j` not inside `I_{i+j}`.
    pub violation: Option<(u32, u32)>,
}

/// Ideal of monomials with `sum w_i a_i >= t`. Every minimal generator lies
/// in the box `a_i <= ⌈t / w_i⌉`; the last coordinate is solved for directly.
fn threshold_ideal(weights: &[u128], t: u128) -> Result<MonomialIdeal> {
    let d = weights.len();
    let mut gens = Vec::new();
    let mut cur = vec![0u32; d];
    fill(weights, t, 0, 0, &mut cur, &mut gens)?;
    MonomialIdeal::new(d, gens)
}

fn fill(w: &[u128], t: u128, at: usize, partial: u128, cur: &mut Exponent, out: &mut Vec<Exponent>) -> Result<()> {
    let need = t.saturating_sub(partial);
    let top = need.div_ceil(w[at]);
    let top = u32::try_from(top).map_err(|_| Error::Overflow("valuation exponent"))?;
    if at + 1 == w.len() {
        cur[at] = top;
        out.push(cur.clone());
        return Ok(());
    }
    for e in 0..=top {
        cur[at] = e;
        fill(w, t, at + 1, partial + w[at] * e as u128, cur, out)?;
    }
    cur[at] = 0;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn ideal(dim: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::new(dim, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    fn sqrt2() -> Filtration {
        Filtration::ceiling_power(SurdScalar::sqrt(2, 1).unwrap()).unwrap()
    }

    fn x_plus_m() -> Filtration {
        Filtration::fixed_plus_adic(ideal(2, &[&[1, 0]]), MonomialIdeal::maximal(2)).unwrap()
    }

    /// `(y) + m^n`: `I_1 = m`, `I_2 = (x^2, y)`.
    fn y_plus_m() -> Filtration {
        Filtration::fixed_plus_adic(ideal(2, &[&[0, 1]]), MonomialIdeal::maximal(2)).unwrap()
    }

    #[test]
    fn surd_ceilings() {
        let s = SurdScalar::sqrt(2, 1).unwrap();
        let ceil: Vec<i64> = (1..=8)
            .map(|n| s.ceil_mul(&BigInt::from(n)).to_i64().unwrap())
            .collect();
        assert_eq!(ceil, vec![2, 3, 5, 6, 8, 9, 10, 12]);
        assert_eq!(SurdScalar::sqrt(8, 2).unwrap(), SurdScalar::Rational { p: 2, q: 1 });
        assert_eq!(SurdScalar::sqrt(9, 4).unwrap(), SurdScalar::Rational { p: 3, q: 2 });
        assert_eq!(SurdScalar::rational(6, 4).unwrap(), SurdScalar::Rational { p: 3, q: 2 });
        assert_eq!(
            SurdScalar::rational(3, 2).unwrap().ceil_mul(&BigInt::from(3)),
            BigInt::from(5)
        );
        assert!(SurdScalar::sqrt(0, 1).is_err());
    }

    #[test]
    fn surd_json() {
        let s = SurdScalar::sqrt(2, 1).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"sqrt":[2,1]}"#);
        let r: SurdScalar = serde_json::from_str(r#"{"sqrt":[4,1]}"#).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"rat":[2,1]}"#);
    }

    #[test]
    fn ideal_at_examples() {
        let m = Filtration::adic(MonomialIdeal::maximal(2)).unwrap();
        assert_eq!(
            *m.ideal_at(3).unwrap(),
            ideal(2, &[&[3, 0], &[2, 1], &[1, 2], &[0, 3]])
        );
        assert_eq!(*sqrt2().ideal_at(2).unwrap(), ideal(1, &[&[3]]));
        assert_eq!(*x_plus_m().ideal_at(2).unwrap(), ideal(2, &[&[1, 0], &[0, 2]]));
        assert!(m.ideal_at(0).unwrap().is_unit());
    }

    #[test]
    fn rounded_valuation_two_variables() {
        // x weighs 1, y weighs 3/2, threshold 2n
        let f = Filtration::rounded_valuation(
            vec![int(1), rational::ratio(3, 2)],
            SurdScalar::rational(2, 1).unwrap(),
        )
        .unwrap();
        assert_eq!(*f.ideal_at(1).unwrap(), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
        assert_eq!(*f.ideal_at(2).unwrap(), ideal(2, &[&[4, 0], &[3, 1], &[1, 2], &[0, 3]]));
    }

    #[test]
    fn truncation_examples() {
        let i = ideal(2, &[&[2, 0], &[1, 1], &[0, 3]]);
        let adic = Filtration::adic(i.clone()).unwrap();
        for a in 1..4 {
            let t = adic.truncate(a).unwrap();
            for n in 0..7 {
                assert_eq!(*t.ideal_at(n).unwrap(), i.power(n).unwrap());
            }
        }
        let t1 = sqrt2().truncate(1).unwrap();
        assert_eq!(*t1.ideal_at(5).unwrap(), ideal(1, &[&[10]]));
        let f = y_plus_m();
        assert_eq!(*f.ideal_at(1).unwrap(), MonomialIdeal::maximal(2));
        assert_eq!(*f.ideal_at(2).unwrap(), ideal(2, &[&[2, 0], &[0, 1]]));
        // I_{2,3} = I_1 I_2 = (x^3, xy, y^2), strictly inside I_3 = (x^3, y)
        let t2 = f.truncate(2).unwrap();
        assert_eq!(*t2.ideal_at(3).unwrap(), ideal(2, &[&[3, 0], &[1, 1], &[0, 2]]));
        assert_eq!(*f.ideal_at(3).unwrap(), ideal(2, &[&[3, 0], &[0, 1]]));
    }

    #[test]
    fn rescale_examples() {
        let f = sqrt2();
        let r1 = f.rescale(1).unwrap();
        for n in 0..10 {
            assert_eq!(r1.ideal_at(n).unwrap(), f.ideal_at(n).unwrap());
        }
        let i = ideal(2, &[&[2, 0], &[0, 1]]);
        let r = Filtration::adic(i.clone()).unwrap().rescale(3).unwrap();
        let direct = Filtration::adic(i.power(3).unwrap()).unwrap();
        for n in 0..5 {
            assert_eq!(r.ideal_at(n).unwrap(), direct.ideal_at(n).unwrap());
        }
        assert_eq!(*f.rescale(2).unwrap().ideal_at(1).unwrap(), ideal(1, &[&[3]]));
    }

    #[test]
    fn periods() {
        let adic = Filtration::adic(ideal(2, &[&[2, 0], &[0, 1]])).unwrap();
        assert_eq!(adic.truncate(3).unwrap().noetherian_period(6).unwrap().s(), 1);
        assert_eq!(sqrt2().truncate(1).unwrap().noetherian_period(6).unwrap().s(), 1);
        // ⌈i√2⌉/i is smallest at i = 2 among i <= 6 (3/2), at i = 7 among i <= 8 (10/7)
        assert_eq!(sqrt2().truncate(6).unwrap().noetherian_period(8).unwrap().s(), 2);
        assert_eq!(sqrt2().truncate(8).unwrap().noetherian_period(8).unwrap().s(), 7);
        let t2 = y_plus_m().truncate(2).unwrap();
        let p = t2.noetherian_period(6).unwrap();
        assert_eq!(p.verified_up_to(), 6);
        let base = t2.ideal_at(p.s()).unwrap();
        for i in 1..=6 {
            assert_eq!(*t2.ideal_at(p.s() * i).unwrap(), base.power(i).unwrap());
        }
        assert!(sqrt2().noetherian_period(4).is_err());
    }

    #[test]
    fn period_candidates_divide_lcm() {
        assert_eq!(period_candidates(1), vec![1]);
        assert_eq!(period_candidates(4), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn submultiplicativity_of_builtins() {
        let m = Filtration::adic(MonomialIdeal::maximal(2)).unwrap();
        for f in [m, x_plus_m(), sqrt2(), y_plus_m()] {
            let r = f.check_submultiplicative(10).unwrap();
            assert_eq!(r.violation, None);
            assert_eq!(r.checked_pairs, (2..=10).map(|t| t - 1).sum::<u32>());
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Filtration::adic(ideal(2, &[&[1, 1]])).is_err());
        assert!(Filtration::fixed_plus_adic(MonomialIdeal::unit(2), MonomialIdeal::maximal(2)).is_err());
        assert!(Filtration::adic(MonomialIdeal::unit(2)).is_err());
        assert!(Filtration::rounded_valuation(vec![int(1), int(0)], SurdScalar::rational(1, 1).unwrap()).is_err());
        assert!(sqrt2().truncate(0).is_err());
        assert!(sqrt2().rescale(0).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let f = x_plus_m().truncate(3).unwrap().rescale(2).unwrap();
        let s = serde_json::to_string(f.spec()).unwrap();
        assert!(s.contains(r#""kind":"rescaled""#));
        let back: FiltrationSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(&back, f.spec());
        let rv = sqrt2();
        let s = serde_json::to_string(rv.spec()).unwrap();
        assert_eq!(
            s,
            r#"{"kind":"rounded-valuation","dim":1,"weights":["1"],"scale":{"sqrt":[2,1]}}"#
        );
    }

    #[test]
    fn concurrent_readers_see_identical_ideals() {
        let f = Filtration::adic(ideal(3, &[&[2, 0, 0], &[0, 1, 1], &[0, 3, 0], &[0, 0, 2]]))
            .unwrap()
            .truncate(2)
            .unwrap();
        let expected: Vec<MonomialIdeal> = {
            let fresh = Filtration::from_spec(f.spec().clone()).unwrap();
            (0..12).map(|n| (*fresh.ideal_at(n).unwrap()).clone()).collect()
        };
        std::thread::scope(|s| {
            for t in 0..8 {
                let f = f.clone();
                let expected = &expected;
                s.spawn(move || {
                    for k in 0..12u32 {
                        let n = (k * 7 + t) % 12;
                        assert_eq!(*f.ideal_at(n).unwrap(), expected[n as usize]);
                    }
                });
            }
        });
    }

    fn ceil_sqrt2_f64(n: u32) -> u32 {
        // independent check: float estimate corrected by exact squares
        let mut t = (n as f64 * std::f64::consts::SQRT_2).ceil() as u64;
        let n = n as u64;
        while t * t < 2 * n * n {
            t += 1;
        }
        while t > 0 && (t - 1) * (t - 1) >= 2 * n * n {
            t -= 1;
        }
        t as u32
    }

    fn builtin(which: u8) -> Filtration {
        match which {
            0 => Filtration::adic(ideal(2, &[&[2, 0], &[1, 1], &[0, 3]])).unwrap(),
            1 => x_plus_m(),
            2 => sqrt2(),
            _ => Filtration::rounded_valuation(
                vec![int(1), rational::ratio(1, 2)],
                SurdScalar::sqrt(3, 1).unwrap(),
            )
            .unwrap(),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn sqrt2_levels_match_oracle(n in 1u32..400) {
            prop_assert_eq!(sqrt2().ideal_at(n).unwrap().gens()[0][0], ceil_sqrt2_f64(n));
        }

        #[test]
        fn builtins_are_filtrations(which in 0u8..4, i in 0u32..9, j in 0u32..9) {
            let f = builtin(which);
            let prod = f.ideal_at(i).unwrap().product(&f.ideal_at(j).unwrap()).unwrap();
            prop_assert!(f.ideal_at(i + j).unwrap().contains_ideal(&prod).unwrap());
            prop_assert!(f.ideal_at(i).unwrap().contains_ideal(&f.ideal_at(i + 1).unwrap()).unwrap());
            if i > 0 {
                prop_assert!(f.ideal_at(i).unwrap().is_primary());
            }
        }

        #[test]
        fn truncations_are_monotone(which in 0u8..4, a in 1u32..8, n in 1u32..16) {
            let f = builtin(which);
            let lo = f.truncate(a).unwrap().ideal_at(n).unwrap();
            let hi = f.truncate(a + 1).unwrap().ideal_at(n).unwrap();
            let full = f.ideal_at(n).unwrap();
            prop_assert!(hi.contains_ideal(&lo).unwrap());
            prop_assert!(full.contains_ideal(&hi).unwrap());
            if n <= a {
                prop_assert_eq!(lo, full);
            }
        }

        #[test]
        fn rescale_commutes_with_truncation(which in 0u8..4, a in 1u32..5, s in 1u32..4, n in 0u32..5) {
            let t = builtin(which).truncate(a).unwrap();
            prop_assert_eq!(t.rescale(s).unwrap().ideal_at(n).unwrap(), t.ideal_at(s * n).unwrap());
        }
    }
}
