//! Semigroups `Γ_σ` and their Newton-Okounkov bodies in the monomial model.
//!
//! The valuation gives the variables `Q`-linearly independent weights, so a
//! value determines its exponent vector and every graded piece is spanned by
//! one monomial. Hence `(a, i) ∈ Γ_σ` exactly when `x^a` lies in the level-`i`
//! ideal `Π_j I(j)_{i σ_j}` and `|a|_1 <= β i`. No irrational number is ever
//! evaluated.
//!
//! Bodies are inner approximations: the hull of `a / i` over levels
//! `i <= N` grows with `N` toward `Δ(Γ)`.

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::monomial::{Exponent, MonomialIdeal};
use crate::multiplicity::{length_sequence, limit_estimate, product_ideal, LimitEstimate};
use crate::polytope::{self, Halfspace, RationalPoint, RationalPolytope};
use crate::rational::{self, Rational};

/// Weights `λ_i = 1 + sqrt(p_i)` for distinct primes `p_i`, kept as tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialValuation {
    pub primes: Vec<u64>,
}

impl MonomialValuation {
    pub fn standard(dim: usize) -> Self {
        let mut primes = Vec::with_capacity(dim);
        let mut c = 2u64;
        while primes.len() < dim {
            if (2..c).take_while(|p| p * p <= c).all(|p| c % p != 0) {
                primes.push(c);
            }
            c += 1;
        }
        Self { primes }
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .primes
            .iter()
            .enumerate()
            .map(|(i, p)| format!("ν(x{}) = 1 + √{p}", i + 1))
            .collect();
        parts.join(", ")
    }
}

/// `c̄ = min{c : m^c ⊆ Π_j I(j)_{σ_j}}`; 1 when `σ = 0`.
pub fn beta_for(fs: &[Filtration], sigma: &[u32]) -> Result<u32> {
    if sigma.iter().all(|&s| s == 0) {
        return Ok(1);
    }
    product_ideal(fs, sigma, 1)?.maximal_exponent()
}

/// `Γ_σ` up to level `cutoff`, stored as its level ideals.
#[derive(Clone, Debug)]
pub struct GammaSemigroup {
    dim: usize,
    sigma: Vec<u32>,
    beta: u32,
    cutoff: u32,
    levels: Vec<MonomialIdeal>,
}

pub fn gamma(fs: &[Filtration], sigma: &[u32], beta: u32, cutoff: u32) -> Result<GammaSemigroup> {
    if cutoff == 0 || beta == 0 {
        return Err(Error::InvalidArgument("cutoff and beta must be positive".into()));
    }
    let dim = fs
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one filtration is required".into()))?
        .dim();
    let levels = (1..=cutoff)
        .into_par_iter()
        .map(|i| product_ideal(fs, sigma, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(GammaSemigroup {
        dim,
        sigma: sigma.to_vec(),
        beta,
        cutoff,
        levels,
    })
}

impl GammaSemigroup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma(&self) -> &[u32] {
        &self.sigma
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    fn cap(&self, i: u32) -> u32 {
        self.beta * i
    }

    pub fn contains(&self, a: &[u32], i: u32) -> Result<bool> {
        if i == 0 || i > self.cutoff {
            return Ok(false);
        }
        Ok(a.iter().sum::<u32>() <= self.cap(i) && self.levels[i as usize - 1].contains(a)?)
    }

    /// Every `a` with `(a, i) ∈ Γ`.
    pub fn level_points(&self, i: u32) -> Vec<Exponent> {
        let mut out = Vec::new();
        if i == 0 || i > self.cutoff {
            return out;
        }
        let ideal = &self.levels[i as usize - 1];
        let mut cur = vec![0u32; self.dim];
        simplex_points(self.dim, self.cap(i), 0, &mut cur, &mut |a| {
            if ideal.gens().iter().any(|g| g.iter().zip(a).all(|(x, y)| x <= y)) {
                out.push(a.to_vec());
            }
        });
        out
    }

    /// Points whose hull equals the hull of level `i`: each generator `g`
    /// inside the cap together with `g + (β i - |g|) e_k`.
    fn level_hull_points(&self, i: u32) -> Vec<Exponent> {
        let cap = self.cap(i);
        let mut out = Vec::new();
        for g in self.levels[i as usize - 1].gens() {
            let deg: u32 = g.iter().sum();
            if deg > cap {
                continue;
            }
            out.push(g.clone());
            for k in 0..self.dim {
                let mut e = g.clone();
                e[k] += cap - deg;
                out.push(e);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn simplex_points(dim: usize, left: u32, at: usize, cur: &mut Exponent, f: &mut impl FnMut(&[u32])) {
    if at == dim {
        f(cur);
        return;
    }
    for e in 0..=left {
        cur[at] = e;
        simplex_points(dim, left - e, at + 1, cur, f);
    }
    cur[at] = 0;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OkounkovBody {
    pub body: RationalPolytope,
    pub sigma: Vec<u32>,
    pub beta: u32,
    pub cutoff: u32,
    /// Always true: the body is the hull of levels up to the cutoff.
    pub inner: bool,
}

impl OkounkovBody {
    pub fn volume(&self) -> Rational {
        self.body.volume()
    }

    /// `x,y` rows of the vertices in counterclockwise order (2D bodies).
    pub fn polygon_csv(&self) -> Result<String> {
        if self.body.dim() != 2 {
            return Err(Error::InvalidArgument("polygon export needs a 2D body".into()));
        }
        let verts = self.body.vertices();
        let n = verts.len() as i64;
        let (cx, cy) = verts.iter().fold((0.0, 0.0), |(x, y), v| {
            (x + rational::to_f64(&v.0[0]), y + rational::to_f64(&v.0[1]))
        });
        let (cx, cy) = (cx / n.max(1) as f64, cy / n.max(1) as f64);
        let mut pts: Vec<(f64, f64, &RationalPoint)> = verts
            .iter()
            .map(|v| (rational::to_f64(&v.0[0]), rational::to_f64(&v.0[1]), v))
            .collect();
        pts.sort_by(|a, b| {
            let ta = (a.1 - cy).atan2(a.0 - cx);
            let tb = (b.1 - cy).atan2(b.0 - cx);
            ta.total_cmp(&tb)
        });
        let mut out = String::from("x,y\n");
        for (x, y, _) in pts {
            out.push_str(&format!("{x},{y}\n"));
        }
        Ok(out)
    }
}

/// Hull of `{a / i : (a, i) ∈ Γ}`.
pub fn body(g: &GammaSemigroup) -> Result<OkounkovBody> {
    let per_level: Vec<Vec<RationalPoint>> = (1..=g.cutoff)
        .into_par_iter()
        .map(|i| {
            let pts: Vec<RationalPoint> = g
                .level_hull_points(i)
                .iter()
                .map(|a| RationalPoint::from_ints(&a.iter().map(|&c| c as i64).collect::<Vec<_>>()))
                .collect();
            let h = polytope::hull(g.dim, &pts)?;
            let inv = Rational::new(One::one(), (i as i64).into());
            Ok(h.vertices()
                .iter()
                .map(|v| RationalPoint(v.0.iter().map(|c| c * &inv).collect()))
                .collect())
        })
        .collect::<Result<_>>()?;
    let all: Vec<RationalPoint> = per_level.into_iter().flatten().collect();
    Ok(OkounkovBody {
        body: polytope::hull(g.dim, &all)?,
        sigma: g.sigma.clone(),
        beta: g.beta,
        cutoff: g.cutoff,
        inner: true,
    })
}

/// `Δ(Γ_σ)` at the given cutoff.
pub fn body_for(fs: &[Filtration], sigma: &[u32], beta: u32, cutoff: u32) -> Result<OkounkovBody> {
    body(&gamma(fs, sigma, beta, cutoff)?)
}

fn factorial(d: usize) -> Rational {
    rational::int((1..=d as i64).product())
}

/// Default ladder for the independent limit in [`theorem1_check`].
pub const THEOREM1_LADDER: [u32; 3] = [32, 64, 128];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub beta: u32,
    pub cutoff: u32,
    #[serde(with = "rational::serde_str")]
    pub vol_hat: Rational,
    #[serde(with = "rational::serde_str")]
    pub vol_gamma: Rational,
    /// `vol Δ(Γ̂) - vol Δ(Γ_N)`.
    #[serde(with = "rational::serde_str")]
    pub difference: Rational,
    pub limit: LimitEstimate,
    /// `|difference - limit|`, against the refined limit.
    #[serde(with = "rational::serde_str")]
    pub discrepancy: Rational,
}

/// Compares `vol Δ(Γ̂) - vol Δ(Γ)` with `lim ℓ(R/I_n)/n^d` computed
/// independently from lengths.
pub fn theorem1_check(f: &Filtration, cutoff: u32, ladder: &[u32]) -> Result<Theorem1Report> {
    let fs = std::slice::from_ref(f);
    let beta = beta_for(fs, &[1])?;
    let d = f.dim();
    let vol_hat = num_traits::pow(rational::int(beta as i64), d) / factorial(d);
    let vol_gamma = body_for(fs, &[1], beta, cutoff)?.volume();
    let difference = &vol_hat - &vol_gamma;
    let limit = limit_estimate(&length_sequence(fs, &[1], ladder)?)?;
    let discrepancy = rational::abs_diff(&difference, limit.value());
    Ok(Theorem1Report {
        beta,
        cutoff,
        vol_hat,
        vol_gamma,
        difference,
        limit,
        discrepancy,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub cutoff: u32,
    /// Some level point `a/i` has every coordinate at most `tol`.
    pub triggered: bool,
    pub tol: f64,
    #[serde(with = "rational::serde_str")]
    pub difference: Rational,
    pub epsilon: f64,
    /// Only meaningful when triggered.
    pub passed: bool,
}

/// If `Δ(Γ_N)` reaches within `tol` of the origin, checks that
/// `vol Δ(Γ̂) - vol Δ(Γ_N) <= epsilon`.
pub fn prop1_check(f: &Filtration, cutoff: u32, tol: &Rational, epsilon: &Rational) -> Result<Prop1Report> {
    let fs = std::slice::from_ref(f);
    let beta = beta_for(fs, &[1])?;
    let g = gamma(fs, &[1], beta, cutoff)?;
    let triggered = (1..=cutoff).any(|i| {
        let level = &g.levels[i as usize - 1];
        level.gens().iter().any(|a| {
            a.iter().sum::<u32>() <= beta * i
                && a.iter().all(|&c| Rational::new((c as i64).into(), (i as i64).into()) <= *tol)
        })
    });
    let d = f.dim();
    let vol_hat = num_traits::pow(rational::int(beta as i64), d) / factorial(d);
    let difference = vol_hat - body(&g)?.volume();
    let passed = !triggered || difference <= *epsilon;
    Ok(Prop1Report {
        cutoff,
        triggered,
        tol: rational::to_f64(tol),
        difference,
        epsilon: rational::to_f64(epsilon),
        passed,
    })
}

/// Largest multiplier tried by [`lemma1_search`].
pub const LEMMA1_MAX_B: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub beta: u32,
    /// Smallest `b` with `I_{i b β} ⊆ m^i` for all `i <= verified_up_to`.
    pub b: Option<u32>,
    pub verified_up_to: u32,
}

/// Searches `b <= 64` with `I_{i b β} ⊆ m^i` for every `i <= i_bound`.
/// The caller is responsible for the positive-multiplicity hypothesis.
pub fn lemma1_search(f: &Filtration, i_bound: u32) -> Result<Lemma1Report> {
    let beta = beta_for(std::slice::from_ref(f), &[1])?;
    for b in 1..=LEMMA1_MAX_B {
        let mut ok = true;
        for i in 1..=i_bound {
            let idx = i
                .checked_mul(b)
                .and_then(|v| v.checked_mul(beta))
                .ok_or(Error::Overflow("lemma index"))?;
            // I ⊆ m^i iff every generator has degree at least i
            if f.ideal_at(idx)?.order() < i {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Lemma1Report {
                beta,
                b: Some(b),
                verified_up_to: i_bound,
            });
        }
    }
    Ok(Lemma1Report {
        beta,
        b: None,
        verified_up_to: i_bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Containment {
    Pass,
    /// A vertex was not found in the inner approximation; this does not
    /// refute the containment.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiReport {
    pub beta: u32,
    pub cutoff: u32,
    pub sum_containment: Containment,
    pub unresolved_vertices: Vec<RationalPoint>,
    /// Whether `Δ(Γ_σ)` was within `tol` of `Δ(Γ̂)`, so the volume check ran.
    pub sigma_is_full: bool,
    #[serde(with = "rational::serde_str")]
    pub vol_sum_body: Rational,
    #[serde(with = "rational::serde_str")]
    pub vol_tau_body: Rational,
    /// `None` when the volume check did not apply.
    pub volume_agreement: Option<bool>,
}

/// Sufficient test for Hausdorff distance `<= tol` (sup norm) when
/// `inner ⊆ outer`: every vertex of `outer` has a vertex of `inner` nearby.
fn vertices_within(outer: &RationalPolytope, inner: &RationalPolytope, tol: &Rational) -> bool {
    outer.vertices().iter().all(|v| {
        inner.vertices().iter().any(|w| {
            v.0.iter()
                .zip(&w.0)
                .all(|(a, b)| rational::abs_diff(a, b) <= *tol)
        })
    })
}

/// Checks `[Δ(Γ_σ) + Δ(Γ_τ)] ∩ HF ⊆ Δ(Γ_{σ+τ})` vertex by vertex, and, when
/// `Δ(Γ_σ)` is already the full simplex up to `tol`, that `Δ(Γ_{σ+τ})` and
/// `Δ(Γ_τ)` have volumes within `tol`. The `σ+τ` body is built at cutoff
/// `2N`; the others at `N`.
pub fn minkowski_checks(
    fs: &[Filtration],
    sigma: &[u32],
    tau: &[u32],
    beta: u32,
    cutoff: u32,
    tol: &Rational,
) -> Result<MinkowskiReport> {
    if sigma.len() != fs.len() || tau.len() != fs.len() {
        return Err(Error::InvalidArgument("sigma and tau need one entry per filtration".into()));
    }
    let dim = fs[0].dim();
    let sum: Vec<u32> = sigma.iter().zip(tau).map(|(a, b)| a + b).collect();
    let b_sigma = body_for(fs, sigma, beta, cutoff)?;
    let b_tau = body_for(fs, tau, beta, cutoff)?;
    let b_sum = body_for(fs, &sum, beta, 2 * cutoff)?;
    let hf = Halfspace::sum_at_most(dim, rational::int(beta as i64));
    let clipped = b_sigma.body.minkowski_sum(&b_tau.body)?.clip(&hf)?;
    let mut unresolved = Vec::new();
    for v in clipped.vertices() {
        if !b_sum.body.contains_point(v)? {
            unresolved.push(v.clone());
        }
    }
    let full = RationalPolytope::simplex(dim, &rational::int(beta as i64));
    let sigma_is_full = vertices_within(&full, &b_sigma.body, tol);
    let vol_sum_body = b_sum.volume();
    let vol_tau_body = b_tau.volume();
    let volume_agreement = sigma_is_full.then(|| rational::abs_diff(&vol_sum_body, &vol_tau_body) <= *tol);
    Ok(MinkowskiReport {
        beta,
        cutoff,
        sum_containment: if unresolved.is_empty() {
            Containment::Pass
        } else {
            Containment::Unresolved
        },
        unresolved_vertices: unresolved,
        sigma_is_full,
        vol_sum_body,
        vol_tau_body,
        volume_agreement,
    })
}

/// `2 max(β_σ, β_τ, β_{σ+τ})`.
pub fn common_beta(fs: &[Filtration], sigma: &[u32], tau: &[u32]) -> Result<u32> {
    let sum: Vec<u32> = sigma.iter().zip(tau).map(|(a, b)| a + b).collect();
    let b = [sigma, tau, &sum[..]]
        .iter()
        .map(|s| beta_for(fs, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(2 * b.into_iter().max().unwrap_or(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::SurdScalar;
    use crate::rational::{int, ratio};

    fn ideal(dim: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::new(dim, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    fn m2() -> Filtration {
        Filtration::adic(MonomialIdeal::maximal(2)).unwrap()
    }

    fn x2y() -> Filtration {
        Filtration::adic(ideal(2, &[&[2, 0], &[0, 1]])).unwrap()
    }

    fn sqrt2() -> Filtration {
        Filtration::ceiling_power(SurdScalar::sqrt(2, 1).unwrap()).unwrap()
    }

    fn x_plus_m() -> Filtration {
        Filtration::fixed_plus_adic(ideal(2, &[&[1, 0]]), MonomialIdeal::maximal(2)).unwrap()
    }

    #[test]
    fn valuation_tags() {
        assert_eq!(MonomialValuation::standard(4).primes, vec![2, 3, 5, 7]);
        assert!(MonomialValuation::standard(2).describe().contains("√3"));
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_for(&[m2()], &[1]).unwrap(), 1);
        assert_eq!(beta_for(&[sqrt2()], &[1]).unwrap(), 2);
        assert_eq!(beta_for(&[x2y()], &[1]).unwrap(), 2);
        assert_eq!(beta_for(&[x2y()], &[0]).unwrap(), 1);
    }

    #[test]
    fn gamma_examples() {
        let g = gamma(&[m2()], &[1], 1, 4).unwrap();
        for i in 1..=4 {
            let pts = g.level_points(i);
            assert!(pts.iter().all(|a| a.iter().sum::<u32>() == i));
            assert_eq!(pts.len(), i as usize + 1);
        }
        let hat = gamma(&[m2()], &[0], 2, 3).unwrap();
        assert_eq!(hat.level_points(1).len(), 6);
        let f = gamma(&[x_plus_m()], &[1], 1, 5).unwrap();
        for i in 1..=5 {
            assert!(f.contains(&[1, 0], i).unwrap());
        }
        assert!(!f.contains(&[0, 1], 2).unwrap());
    }

    #[test]
    fn body_examples() {
        let b = body_for(&[m2()], &[1], 1, 6).unwrap();
        assert_eq!(b.body, polytope::hull(2, &[RationalPoint::from_ints(&[1, 0]), RationalPoint::from_ints(&[0, 1])]).unwrap());
        assert_eq!(b.volume(), int(0));
        let hat = body_for(&[m2()], &[0], 1, 2).unwrap();
        assert_eq!(hat.body, RationalPolytope::simplex(2, &int(1)));
        assert_eq!(hat.volume(), ratio(1, 2));
        let s = body_for(&[sqrt2()], &[1], 2, 8).unwrap();
        // min over i <= 8 of ⌈i√2⌉/i is 10/7
        assert_eq!(
            s.body.vertices(),
            &[RationalPoint(vec![ratio(10, 7)]), RationalPoint(vec![int(2)])]
        );
    }

    #[test]
    fn hat_body_is_simplex_from_level_d() {
        for d in 1..=3usize {
            let f = Filtration::adic(MonomialIdeal::maximal(d)).unwrap();
            for beta in 1..=3 {
                let b = body_for(&[f.clone()], &[0], beta, d as u32).unwrap();
                assert_eq!(b.body, RationalPolytope::simplex(d, &int(beta as i64)));
            }
        }
    }

    #[test]
    fn theorem1_examples() {
        let r = theorem1_check(&m2(), 8, &THEOREM1_LADDER).unwrap();
        assert_eq!(r.difference, ratio(1, 2));
        assert_eq!(r.discrepancy, int(0));
        let r = theorem1_check(&x2y(), 4, &THEOREM1_LADDER).unwrap();
        assert_eq!(r.difference, int(1));
        let r = theorem1_check(&x_plus_m(), 16, &THEOREM1_LADDER).unwrap();
        assert_eq!(r.difference, ratio(1, 32));
        let r8 = theorem1_check(&sqrt2(), 8, &[256, 512, 1024]).unwrap();
        let r16 = theorem1_check(&sqrt2(), 16, &[256, 512, 1024]).unwrap();
        assert_eq!(r8.difference, ratio(10, 7));
        assert_eq!(r16.difference, ratio(17, 12));
        assert!(r16.discrepancy <= r8.discrepancy);
    }

    #[test]
    fn prop1_examples() {
        let r = prop1_check(&x_plus_m(), 16, &ratio(1, 16), &ratio(1, 16)).unwrap();
        assert!(r.triggered && r.passed);
        let r = prop1_check(&m2(), 16, &ratio(1, 16), &ratio(1, 16)).unwrap();
        assert!(!r.triggered);
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_search(&m2(), 8).unwrap().b, Some(1));
        let r = lemma1_search(&sqrt2(), 16).unwrap();
        assert_eq!((r.b, r.beta), (Some(1), 2));
        let r = lemma1_search(&x2y(), 16).unwrap();
        assert_eq!((r.b, r.beta), (Some(1), 2));
    }

    #[test]
    fn minkowski_examples() {
        // σ = 0 reduces to the τ body inside itself
        let r = minkowski_checks(&[m2(), x2y()], &[0, 0], &[0, 1], 4, 4, &ratio(1, 4)).unwrap();
        assert_eq!(r.sum_containment, Containment::Pass);
        let fs = [m2(), x2y()];
        let beta = common_beta(&fs, &[1, 0], &[0, 1]).unwrap();
        assert_eq!(beta, 6);
        let r = minkowski_checks(&fs, &[1, 0], &[0, 1], beta, 8, &ratio(1, 8)).unwrap();
        assert_eq!(r.sum_containment, Containment::Pass);
        assert!(!r.sigma_is_full);
    }

    #[test]
    fn monotone_in_cutoff() {
        for f in [m2(), x2y(), x_plus_m()] {
            let beta = beta_for(&[f.clone()], &[1]).unwrap();
            let small = body_for(&[f.clone()], &[1], beta, 6).unwrap();
            let big = body_for(&[f], &[1], beta, 12).unwrap();
            assert!(big.body.contains_body(&small.body).unwrap());
        }
    }

    #[test]
    fn polygon_export() {
        let hat = body_for(&[m2()], &[0], 1, 2).unwrap();
        let csv = hat.polygon_csv().unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(body_for(&[sqrt2()], &[1], 2, 2).unwrap().polygon_csv().is_err());
    }
}
