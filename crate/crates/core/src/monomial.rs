//! Monomial ideals of `k[[x_1, ..., x_d]]`.
//!
//! An ideal is stored as its minimal generators, sorted lexicographically,
//! so two ideals are equal exactly when their generator lists are. Lengths
//! are standard-monomial counts and never touch the base field.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{self, RationalPoint, RationalPolytope};
use crate::rational::{self, Rational};

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawIdeal", into = "RawIdeal")]
pub struct MonomialIdeal {
    dim: usize,
    gens: Vec<Exponent>,
}

#[derive(Serialize, Deserialize)]
struct RawIdeal {
    dim: usize,
    gens: Vec<Exponent>,
}

impl TryFrom<RawIdeal> for MonomialIdeal {
    type Error = Error;
    fn try_from(raw: RawIdeal) -> Result<Self> {
        minimalize(raw.gens, raw.dim)
    }
}

impl From<MonomialIdeal> for RawIdeal {
    fn from(i: MonomialIdeal) -> Self {
        RawIdeal {
            dim: i.dim,
            gens: i.gens,
        }
    }
}

/// The ideal generated by `gens`, reduced to its minimal generators.
pub fn minimalize(gens: Vec<Exponent>, dim: usize) -> Result<MonomialIdeal> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if gens.is_empty() {
        return Err(Error::ZeroIdeal);
    }
    for g in &gens {
        if g.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.len(),
            });
        }
    }
    Ok(MonomialIdeal {
        dim,
        gens: antichain(gens, dim),
    })
}

fn divides(g: &[u32], a: &[u32]) -> bool {
    g.iter().zip(a).all(|(x, y)| x <= y)
}

/// Minimal elements under the componentwise order. A lexicographically
/// earlier exponent can divide a later one but never the reverse, so one
/// sorted pass suffices; the per-dimension cases only speed up the
/// "is anything earlier below me" query.
fn antichain(mut gens: Vec<Exponent>, dim: usize) -> Vec<Exponent> {
    gens.sort_unstable();
    gens.dedup();
    match dim {
        1 => vec![gens.swap_remove(0)],
        2 => {
            let mut best = u32::MAX;
            gens.into_iter()
                .filter(|g| {
                    let keep = g[1] < best;
                    best = best.min(g[1]);
                    keep
                })
                .collect()
        }
        3 => {
            let mut ys: Vec<u32> = gens.iter().map(|g| g[1]).collect();
            ys.sort_unstable();
            ys.dedup();
            let mut tree = PrefixMin::new(ys.len());
            gens.into_iter()
                .filter(|g| {
                    let slot = ys.binary_search(&g[1]).expect("present");
                    let keep = tree.query(slot) > g[2];
                    tree.update(slot, g[2]);
                    keep
                })
                .collect()
        }
        _ => {
            let mut kept: Vec<Exponent> = Vec::new();
            for g in gens {
                if !kept.iter().any(|h| divides(h, &g)) {
                    kept.push(g);
                }
            }
            kept
        }
    }
}

/// Fenwick tree answering prefix minima.
struct PrefixMin {
    tree: Vec<u32>,
}

impl PrefixMin {
    fn new(n: usize) -> Self {
        Self {
            tree: vec![u32::MAX; n + 1],
        }
    }

    fn update(&mut self, slot: usize, v: u32) {
        let mut i = slot + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].min(v);
            i += i & i.wrapping_neg();
        }
    }

    fn query(&self, slot: usize) -> u32 {
        let mut i = slot + 1;
        let mut out = u32::MAX;
        while i > 0 {
            out = out.min(self.tree[i]);
            i -= i & i.wrapping_neg();
        }
        out
    }
}

impl MonomialIdeal {
    pub fn new(dim: usize, gens: Vec<Exponent>) -> Result<Self> {
        minimalize(gens, dim)
    }

    /// The whole ring.
    pub fn unit(dim: usize) -> Self {
        Self {
            dim: dim.max(1),
            gens: vec![vec![0; dim.max(1)]],
        }
    }

    /// The maximal ideal `(x_1, ..., x_d)`.
    pub fn maximal(dim: usize) -> Self {
        let gens = (0..dim)
            .rev()
            .map(|i| {
                let mut e = vec![0; dim];
                e[i] = 1;
                e
            })
            .collect();
        Self { dim, gens }
    }

    /// `m^c`, generated by all monomials of total degree `c`.
    pub fn maximal_power(dim: usize, c: u32) -> Self {
        let mut gens = Vec::new();
        let mut cur = vec![0u32; dim];
        degree_exponents(dim, c, 0, &mut cur, &mut gens);
        gens.sort_unstable();
        Self { dim, gens }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].iter().all(|&e| e == 0)
    }

    fn check(&self, got: usize) -> Result<()> {
        if got != self.dim {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            })
        } else {
            Ok(())
        }
    }

    pub fn contains(&self, a: &[u32]) -> Result<bool> {
        self.check(a.len())?;
        Ok(self.gens.iter().any(|g| divides(g, a)))
    }

    /// True iff `other` is a subset of `self`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> Result<bool> {
        self.check(other.dim)?;
        Ok(other
            .gens
            .iter()
            .all(|a| self.gens.iter().any(|g| divides(g, a))))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check(other.dim)?;
        let gens = self.gens.iter().chain(&other.gens).cloned().collect();
        minimalize(gens, self.dim)
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check(other.dim)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(add_exponents(a, b)?);
            }
        }
        minimalize(gens, self.dim)
    }

    /// `I^k` for `k >= 1`, with `I^0` the unit ideal.
    pub fn power(&self, k: u32) -> Result<MonomialIdeal> {
        let mut out = MonomialIdeal::unit(self.dim);
        for _ in 0..k {
            out = out.product(self)?;
        }
        Ok(out)
    }

    /// The pure power `x_i^c` in the generators, if present.
    pub fn pure_power(&self, i: usize) -> Option<u32> {
        self.gens
            .iter()
            .find(|g| g.iter().enumerate().all(|(j, &e)| j == i || e == 0))
            .map(|g| g[i])
    }

    /// m-primary: every variable has a pure power among the generators.
    pub fn is_primary(&self) -> bool {
        (0..self.dim).all(|i| self.pure_power(i).is_some())
    }

    fn require_primary(&self) -> Result<Vec<u32>> {
        (0..self.dim)
            .map(|i| self.pure_power(i).ok_or(Error::InfiniteColength))
            .collect()
    }

    /// Smallest total degree of a generator.
    pub fn order(&self) -> u32 {
        self.gens.iter().map(|g| g.iter().sum()).min().unwrap_or(0)
    }

    /// Smallest `c` with `m^c` contained in the ideal.
    pub fn maximal_exponent(&self) -> Result<u32> {
        self.require_primary()?;
        let mut c = self.order();
        while !self.contains_ideal(&MonomialIdeal::maximal_power(self.dim, c))? {
            c += 1;
        }
        Ok(c)
    }

    /// `ℓ(R/I)`: the number of monomials outside the ideal.
    pub fn colength(&self) -> Result<BigUint> {
        self.require_primary()?;
        colength_slices(&self.gens, self.dim).map(BigUint::from)
    }

    pub fn newton_polyhedron(&self) -> NewtonPolyhedron {
        NewtonPolyhedron::of(self)
    }

    /// Volume of the region of the positive orthant below the Newton
    /// polyhedron.
    pub fn covolume(&self) -> Result<Rational> {
        self.require_primary()?;
        Ok(self.newton_polyhedron().covolume())
    }

    /// `d!` times the covolume.
    pub fn multiplicity(&self) -> Result<Rational> {
        let fact: u64 = (1..=self.dim as u64).product();
        Ok(self.covolume()? * rational::int(fact as i64))
    }
}

fn add_exponents(a: &[u32], b: &[u32]) -> Result<Exponent> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow("exponent sum")))
        .collect()
}

fn degree_exponents(dim: usize, left: u32, at: usize, cur: &mut Exponent, out: &mut Vec<Exponent>) {
    if at + 1 == dim {
        cur[at] = left;
        out.push(cur.clone());
        return;
    }
    for e in 0..=left {
        cur[at] = e;
        degree_exponents(dim, left - e, at + 1, cur, out);
    }
    cur[at] = 0;
}

/// Colength by slicing along the last variable. Between consecutive
/// last-coordinate values of the generators the slice ideal does not change,
/// so each run of slices is counted once.
fn colength_slices(gens: &[Exponent], dim: usize) -> Result<u128> {
    match dim {
        1 => Ok(gens[0][0] as u128),
        2 => {
            let mut by_y: Vec<&Exponent> = gens.iter().collect();
            by_y.sort_unstable_by_key(|g| g[1]);
            let mut total: u128 = 0;
            for w in by_y.windows(2) {
                total = total
                    .checked_add(w[0][0] as u128 * (w[1][1] - w[0][1]) as u128)
                    .ok_or(Error::Overflow("colength"))?;
            }
            Ok(total)
        }
        _ => {
            let last = dim - 1;
            let mut by_last: Vec<&Exponent> = gens.iter().collect();
            by_last.sort_unstable_by_key(|g| g[last]);
            let mut slice: Vec<Exponent> = Vec::new();
            let mut total: u128 = 0;
            let mut i = 0;
            while i < by_last.len() {
                let z = by_last[i][last];
                while i < by_last.len() && by_last[i][last] == z {
                    slice.push(by_last[i][..last].to_vec());
                    i += 1;
                }
                slice = antichain(slice, last);
                let Some(next) = by_last.get(i) else {
                    break;
                };
                let run = (next[last] - z) as u128;
                let inner = colength_slices(&slice, last)?;
                total = inner
                    .checked_mul(run)
                    .and_then(|v| v.checked_add(total))
                    .ok_or(Error::Overflow("colength"))?;
            }
            Ok(total)
        }
    }
}

/// `NP(I)`: the convex hull of the generator exponents plus the positive
/// orthant, kept as its vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolyhedron {
    dim: usize,
    vertices: Vec<Exponent>,
    // every generator coordinate is strictly below this
    bound: u32,
    #[serde(skip)]
    cached_box: Option<RationalPolytope>,
}

impl NewtonPolyhedron {
    fn of(ideal: &MonomialIdeal) -> Self {
        let dim = ideal.dim;
        let bound = ideal.gens.iter().flatten().copied().max().unwrap_or(0) + 1;
        if dim == 1 {
            return Self {
                dim,
                vertices: ideal.gens.clone(),
                bound,
                cached_box: None,
            };
        }
        let pts = box_points(&ideal.gens, dim, bound);
        let rpts: Vec<Vec<Rational>> = pts
            .iter()
            .map(|p| p.iter().map(|&c| rational::int(c as i64)).collect())
            .collect();
        let ext = polytope::extreme_indices(dim, &rpts);
        let mut vertices: Vec<Exponent> = ext
            .iter()
            .map(|&i| &pts[i])
            .filter(|p| p.iter().all(|&c| c < bound))
            .cloned()
            .collect();
        vertices.sort_unstable();
        let verts: Vec<RationalPoint> = ext
            .iter()
            .map(|&i| RationalPoint::from_ints(&pts[i].iter().map(|&c| c as i64).collect::<Vec<_>>()))
            .collect();
        let cached_box = polytope::hull(dim, &verts).ok();
        Self {
            dim,
            vertices,
            bound,
            cached_box,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices of the polyhedron, all of them generator exponents.
    pub fn vertices(&self) -> &[Exponent] {
        &self.vertices
    }

    /// `NP(I)` intersected with the cube `[0, b]^d`; `b` must be at least the
    /// largest vertex coordinate.
    pub fn truncate(&self, b: u32) -> Result<RationalPolytope> {
        if self.vertices.iter().flatten().any(|&c| c > b) {
            return Err(Error::InvalidArgument(format!(
                "cube side {b} cuts off a vertex of the Newton polyhedron"
            )));
        }
        let pts: Vec<RationalPoint> = box_points(&self.vertices, self.dim, b)
            .into_iter()
            .map(|p| RationalPoint::from_ints(&p.iter().map(|&c| c as i64).collect::<Vec<_>>()))
            .collect();
        polytope::hull(self.dim, &pts)
    }

    /// Volume of the orthant minus the polyhedron.
    pub fn covolume(&self) -> Rational {
        if self.dim == 1 {
            return rational::int(self.vertices[0][0] as i64);
        }
        let cube = num_traits::pow(rational::int(self.bound as i64), self.dim);
        let body = match &self.cached_box {
            Some(p) => p.volume(),
            None => self
                .truncate(self.bound)
                .map(|p| p.volume())
                .unwrap_or_else(|_| Rational::zero()),
        };
        cube - body
    }
}

/// Points whose hull is `NP ∩ [0, b]^d`: every generator with any subset of
/// coordinates raised to `b`. For a raised subset only the generators
/// minimal on the remaining coordinates can give extreme points.
fn box_points(gens: &[Exponent], dim: usize, b: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << dim) {
        let free: Vec<usize> = (0..dim).filter(|i| mask & (1 << i) == 0).collect();
        let mut proj: Vec<Exponent> = gens
            .iter()
            .map(|g| free.iter().map(|&i| g[i]).collect())
            .collect();
        if !free.is_empty() {
            proj = antichain(proj, free.len());
        } else {
            proj.truncate(1);
        }
        for p in proj {
            let mut e = vec![b; dim];
            for (slot, &i) in free.iter().enumerate() {
                e[i] = p[slot];
            }
            out.push(e);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ideal(dim: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::new(dim, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    fn box_colength(i: &MonomialIdeal) -> u64 {
        let caps: Vec<u32> = (0..i.dim()).map(|k| i.pure_power(k).unwrap()).collect();
        let mut count = 0;
        let mut a = vec![0u32; i.dim()];
        loop {
            if !i.gens().iter().any(|g| g.iter().zip(&a).all(|(x, y)| x <= y)) {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == a.len() {
                    return count;
                }
                a[k] += 1;
                if a[k] < caps[k] {
                    break;
                }
                a[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn minimalize_examples() {
        assert_eq!(ideal(2, &[&[1, 0], &[2, 0], &[0, 1]]).gens(), &[vec![0, 1], vec![1, 0]]);
        assert!(ideal(2, &[&[0, 0], &[3, 1]]).is_unit());
        assert_eq!(
            ideal(2, &[&[2, 0], &[1, 1], &[0, 3], &[2, 1]]),
            ideal(2, &[&[2, 0], &[1, 1], &[0, 3]])
        );
        assert_eq!(minimalize(vec![], 2), Err(Error::ZeroIdeal));
        assert!(minimalize(vec![vec![1]], 2).is_err());
    }

    #[test]
    fn antichain_paths_agree() {
        let gens: Vec<Exponent> = vec![
            vec![2, 1, 0],
            vec![1, 2, 3],
            vec![0, 0, 4],
            vec![2, 2, 0],
            vec![1, 1, 3],
            vec![3, 0, 1],
            vec![1, 2, 2],
        ];
        let fast = antichain(gens.clone(), 3);
        let mut slow: Vec<Exponent> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && divides(h, g)))
            .cloned()
            .collect();
        slow.sort();
        slow.dedup();
        assert_eq!(fast, slow);
    }

    #[test]
    fn membership() {
        let m = MonomialIdeal::maximal(2);
        assert!(!m.contains(&[0, 0]).unwrap());
        let i = ideal(2, &[&[2, 0], &[0, 1]]);
        assert!(!i.contains(&[1, 0]).unwrap());
        assert!(i.contains(&[2, 5]).unwrap());
        assert!(ideal(2, &[&[2, 0], &[1, 1], &[0, 3]]).contains(&[1, 2]).unwrap());
        assert!(i.contains(&[1, 0, 0]).is_err());
    }

    #[test]
    fn arithmetic() {
        let x = ideal(2, &[&[1, 0]]);
        let y = ideal(2, &[&[0, 1]]);
        assert_eq!(x.product(&y).unwrap(), ideal(2, &[&[1, 1]]));
        assert_eq!(
            MonomialIdeal::maximal(2).power(2).unwrap(),
            ideal(2, &[&[2, 0], &[1, 1], &[0, 2]])
        );
        assert_eq!(
            ideal(2, &[&[2, 0], &[0, 1]]).product(&MonomialIdeal::maximal(2)).unwrap(),
            ideal(2, &[&[3, 0], &[1, 1], &[0, 2]])
        );
        assert_eq!(x.sum(&y).unwrap(), MonomialIdeal::maximal(2));
        assert_eq!(MonomialIdeal::maximal_power(3, 4), MonomialIdeal::maximal(3).power(4).unwrap());
    }

    #[test]
    fn primality() {
        assert!(MonomialIdeal::maximal(2).is_primary());
        assert!(!ideal(2, &[&[1, 1]]).is_primary());
        assert!(ideal(2, &[&[2, 0], &[1, 1], &[0, 3]]).is_primary());
        assert_eq!(ideal(2, &[&[1, 1]]).colength(), Err(Error::InfiniteColength));
    }

    #[test]
    fn colength_examples() {
        assert_eq!(MonomialIdeal::maximal(2).colength().unwrap(), BigUint::from(1u32));
        assert_eq!(ideal(2, &[&[2, 0], &[0, 1]]).colength().unwrap(), BigUint::from(2u32));
        assert_eq!(
            ideal(2, &[&[2, 0], &[1, 1], &[0, 3]]).colength().unwrap(),
            BigUint::from(4u32)
        );
        assert_eq!(MonomialIdeal::unit(3).colength().unwrap(), BigUint::zero());
        // ℓ(R/m^n) = C(n+d-1, d)
        assert_eq!(MonomialIdeal::maximal_power(3, 5).colength().unwrap(), BigUint::from(35u32));
        assert_eq!(MonomialIdeal::maximal_power(4, 3).colength().unwrap(), BigUint::from(15u32));
    }

    #[test]
    fn newton_polyhedron_examples() {
        assert_eq!(
            MonomialIdeal::maximal(2).newton_polyhedron().vertices(),
            &[vec![0, 1], vec![1, 0]]
        );
        assert_eq!(
            ideal(2, &[&[2, 0], &[0, 1]]).newton_polyhedron().vertices(),
            &[vec![0, 1], vec![2, 0]]
        );
        assert_eq!(
            ideal(2, &[&[3, 0], &[1, 1], &[0, 2]]).newton_polyhedron().vertices(),
            &[vec![0, 2], vec![1, 1], vec![3, 0]]
        );
        // (1,1) sits on the segment from (2,0) to (0,2)
        assert_eq!(
            ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]).newton_polyhedron().vertices(),
            &[vec![0, 2], vec![2, 0]]
        );
    }

    #[test]
    fn covolume_examples() {
        assert_eq!(MonomialIdeal::maximal(2).covolume().unwrap(), rational::ratio(1, 2));
        assert_eq!(ideal(2, &[&[2, 0], &[0, 1]]).covolume().unwrap(), rational::int(1));
        assert_eq!(ideal(1, &[&[5]]).covolume().unwrap(), rational::int(5));
        assert_eq!(MonomialIdeal::maximal(3).covolume().unwrap(), rational::ratio(1, 6));
        assert_eq!(ideal(3, &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 1]]).multiplicity().unwrap(), rational::int(6));
        assert!(ideal(2, &[&[1, 1]]).covolume().is_err());
    }

    #[test]
    fn maximal_exponent() {
        assert_eq!(MonomialIdeal::maximal(2).maximal_exponent().unwrap(), 1);
        assert_eq!(ideal(2, &[&[2, 0], &[0, 1]]).maximal_exponent().unwrap(), 2);
        assert_eq!(ideal(1, &[&[2]]).maximal_exponent().unwrap(), 2);
    }

    #[test]
    fn json_shape() {
        let i = ideal(2, &[&[2, 0], &[0, 1]]);
        let s = serde_json::to_string(&i).unwrap();
        assert_eq!(s, r#"{"dim":2,"gens":[[0,1],[2,0]]}"#);
        let back: MonomialIdeal = serde_json::from_str(r#"{"dim":2,"gens":[[2,0],[0,1],[3,3]]}"#).unwrap();
        assert_eq!(back, i);
        assert!(serde_json::from_str::<MonomialIdeal>(r#"{"dim":2,"gens":[]}"#).is_err());
    }

    fn primary_in(d: usize, max_exp: u32) -> impl Strategy<Value = MonomialIdeal> {
        let pure = prop::collection::vec(1..=max_exp, d);
        let extra = prop::collection::vec(prop::collection::vec(0..=max_exp, d), 0..8);
        (pure, extra).prop_map(move |(pure, extra)| {
            let mut gens = extra;
            for (i, &p) in pure.iter().enumerate() {
                let mut e = vec![0; d];
                e[i] = p;
                gens.push(e);
            }
            MonomialIdeal::new(d, gens).unwrap()
        })
    }

    fn primary_ideal(max_dim: usize, max_exp: u32) -> impl Strategy<Value = MonomialIdeal> {
        (1..=max_dim).prop_flat_map(move |d| primary_in(d, max_exp))
    }

    fn triple(max_dim: usize, max_exp: u32) -> impl Strategy<Value = (MonomialIdeal, MonomialIdeal, MonomialIdeal)> {
        (2..=max_dim).prop_flat_map(move |d| {
            (primary_in(d, max_exp), primary_in(d, max_exp), primary_in(d, max_exp))
        })
    }

    proptest! {
        #[test]
        fn colength_matches_box_enumeration(i in primary_ideal(3, 6)) {
            prop_assert_eq!(i.colength().unwrap(), BigUint::from(box_colength(&i)));
        }

        #[test]
        fn product_laws((a, b, c) in triple(3, 4)) {
            prop_assert_eq!(a.product(&b).unwrap(), b.product(&a).unwrap());
            prop_assert_eq!(
                a.product(&b).unwrap().product(&c).unwrap(),
                a.product(&b.product(&c).unwrap()).unwrap()
            );
            let ab = a.product(&b).unwrap();
            for g in a.gens() {
                for h in b.gens() {
                    let s: Exponent = g.iter().zip(h).map(|(x, y)| x + y).collect();
                    prop_assert!(ab.contains(&s).unwrap());
                }
            }
        }

        #[test]
        fn newton_polyhedron_of_product_is_minkowski_sum((a, b, _c) in triple(3, 4)) {
            let side = 9;
            let lhs = a.product(&b).unwrap().newton_polyhedron().truncate(side).unwrap();
            let sum = a.newton_polyhedron().truncate(side).unwrap()
                .minkowski_sum(&b.newton_polyhedron().truncate(side).unwrap()).unwrap();
            let mut clipped = sum;
            for k in 0..a.dim() {
                let mut n = vec![rational::int(0); a.dim()];
                n[k] = rational::int(1);
                let h = crate::polytope::Halfspace::new(n, rational::int(side as i64)).unwrap();
                clipped = clipped.clip(&h).unwrap();
            }
            prop_assert_eq!(lhs, clipped);
        }
    }
}
