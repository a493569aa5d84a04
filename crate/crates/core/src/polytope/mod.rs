//! Exact rational convex geometry in low dimension.
//!
//! Polytopes are kept in V-representation with an irredundant vertex list.
//! An H-representation (affine equalities plus facet inequalities) is derived
//! on demand and cached; it backs point membership. Volumes come from a
//! triangulation of the boundary coned from one vertex.

mod hull;

use std::collections::HashSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

use hull::{beneath_beyond, normalize_hyperplane, scaled_volume, Coord, Facet};

/// A point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalPoint(#[serde(with = "rational::serde_vec")] pub Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }
}

/// The region `normal . x <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(with = "rational::serde_vec")]
    normal: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    bound: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, bound: Rational) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::InvalidArgument("halfspace normal must be nonzero".into()));
        }
        Ok(Self { normal, bound })
    }

    /// `x_1 + ... + x_d <= bound`.
    pub fn sum_at_most(dim: usize, bound: Rational) -> Self {
        Self {
            normal: vec![Rational::one(); dim],
            bound,
        }
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        rdot(&self.normal, &p.0) <= self.bound
    }
}

#[derive(Clone, Debug)]
struct HRep {
    aff_dim: usize,
    equalities: Vec<(Vec<Rational>, Rational)>,
    inequalities: Vec<(Vec<Rational>, Rational)>,
    volume: Rational,
}

/// A convex polytope given by its extreme points.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawPolytope", into = "RawPolytope")]
pub struct RationalPolytope {
    dim: usize,
    vertices: Vec<RationalPoint>,
    hrep: OnceLock<HRep>,
}

#[derive(Serialize, Deserialize)]
struct RawPolytope {
    dim: usize,
    vertices: Vec<RationalPoint>,
}

impl TryFrom<RawPolytope> for RationalPolytope {
    type Error = Error;
    fn try_from(raw: RawPolytope) -> Result<Self> {
        hull(raw.dim, &raw.vertices)
    }
}

impl From<RationalPolytope> for RawPolytope {
    fn from(p: RationalPolytope) -> Self {
        RawPolytope {
            dim: p.dim,
            vertices: p.vertices,
        }
    }
}

impl PartialEq for RationalPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for RationalPolytope {}

impl RationalPolytope {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vertices: Vec::new(),
            hrep: OnceLock::new(),
        }
    }

    /// The simplex `{x >= 0, x_1 + ... + x_d <= c}`.
    pub fn simplex(dim: usize, c: &Rational) -> Self {
        let mut pts = vec![RationalPoint::origin(dim)];
        for i in 0..dim {
            let mut v = vec![Rational::zero(); dim];
            v[i] = c.clone();
            pts.push(RationalPoint(v));
        }
        hull(dim, &pts).expect("simplex vertices share a dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme points in lexicographic order.
    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the affine hull (`None` for the empty body).
    pub fn affine_dim(&self) -> Option<usize> {
        if self.is_empty() {
            None
        } else {
            Some(self.hrep().aff_dim)
        }
    }

    fn hrep(&self) -> &HRep {
        self.hrep.get_or_init(|| {
            let pts: Vec<Vec<Rational>> = self.vertices.iter().map(|p| p.0.clone()).collect();
            compute_hull(self.dim, &pts, false).hrep
        })
    }

    pub fn volume(&self) -> Rational {
        if self.is_empty() {
            return Rational::zero();
        }
        self.hrep().volume.clone()
    }

    pub fn contains_point(&self, q: &RationalPoint) -> Result<bool> {
        check_dim(self.dim, q.dim())?;
        if self.is_empty() {
            return Ok(false);
        }
        let h = self.hrep();
        Ok(h.equalities.iter().all(|(n, b)| rdot(n, &q.0) == *b)
            && h.inequalities.iter().all(|(n, b)| rdot(n, &q.0) <= *b))
    }

    /// True iff every vertex of `other` lies in `self`.
    pub fn contains_body(&self, other: &RationalPolytope) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        for v in &other.vertices {
            if !self.contains_point(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn minkowski_sum(&self, other: &RationalPolytope) -> Result<RationalPolytope> {
        check_dim(self.dim, other.dim)?;
        if self.is_empty() || other.is_empty() {
            return Ok(RationalPolytope::empty(self.dim));
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(RationalPoint(
                    a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect(),
                ));
            }
        }
        hull(self.dim, &pts)
    }

    /// Intersection with a halfspace.
    pub fn clip(&self, h: &Halfspace) -> Result<RationalPolytope> {
        check_dim(self.dim, h.normal.len())?;
        let vals: Vec<Rational> = self.vertices.iter().map(|v| rdot(&h.normal, &v.0)).collect();
        let inside: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] <= h.bound).collect();
        let outside: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > h.bound).collect();
        if outside.is_empty() {
            return Ok(self.clone());
        }
        if inside.is_empty() {
            return Ok(RationalPolytope::empty(self.dim));
        }
        let mut pts: Vec<RationalPoint> = inside.iter().map(|&i| self.vertices[i].clone()).collect();
        for &u in &inside {
            for &w in &outside {
                let t = (&h.bound - &vals[u]) / (&vals[w] - &vals[u]);
                let p = self.vertices[u]
                    .0
                    .iter()
                    .zip(&self.vertices[w].0)
                    .map(|(a, b)| a + &t * (b - a))
                    .collect();
                pts.push(RationalPoint(p));
            }
        }
        hull(self.dim, &pts)
    }

    pub fn translate(&self, by: &RationalPoint) -> Result<RationalPolytope> {
        check_dim(self.dim, by.dim())?;
        let pts: Vec<RationalPoint> = self
            .vertices
            .iter()
            .map(|v| RationalPoint(v.0.iter().zip(&by.0).map(|(a, b)| a + b).collect()))
            .collect();
        hull(self.dim, &pts)
    }

    /// Dilation by a positive rational.
    pub fn scale(&self, k: &Rational) -> Result<RationalPolytope> {
        if !k.is_positive() {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        let pts: Vec<RationalPoint> = self
            .vertices
            .iter()
            .map(|v| RationalPoint(v.0.iter().map(|a| a * k).collect()))
            .collect();
        hull(self.dim, &pts)
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(Error::DimensionMismatch { expected, got })
    } else {
        Ok(())
    }
}

fn rdot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Convex hull of a finite point set, reduced to its extreme points.
pub fn hull(dim: usize, points: &[RationalPoint]) -> Result<RationalPolytope> {
    for p in points {
        check_dim(dim, p.dim())?;
    }
    if points.is_empty() {
        return Ok(RationalPolytope::empty(dim));
    }
    let mut pts: Vec<Vec<Rational>> = points.iter().map(|p| p.0.clone()).collect();
    pts.sort();
    pts.dedup();
    let out = compute_hull(dim, &pts, true);
    let mut vertices: Vec<RationalPoint> = out
        .vertices
        .iter()
        .map(|&i| RationalPoint(pts[i].clone()))
        .collect();
    vertices.sort();
    let hrep = OnceLock::new();
    let _ = hrep.set(out.hrep);
    Ok(RationalPolytope {
        dim,
        vertices,
        hrep,
    })
}

/// Indices (into `points`) of the extreme points of their hull.
pub(crate) fn extreme_indices(dim: usize, points: &[Vec<Rational>]) -> Vec<usize> {
    compute_hull(dim, points, true).vertices
}

struct HullOutput {
    vertices: Vec<usize>,
    hrep: HRep,
}

/// Affine frame of a point set: an origin, pivot coordinates onto which the
/// projection is injective on the affine hull, and defining equalities.
struct Frame {
    basis: Vec<usize>,
    pivots: Vec<usize>,
    equalities: Vec<(Vec<Rational>, Rational)>,
}

fn frame(dim: usize, pts: &[Vec<Rational>]) -> Frame {
    let origin = &pts[0];
    let mut rows: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut basis = vec![0usize];
    for (idx, p) in pts.iter().enumerate().skip(1) {
        if rows.len() == dim {
            break;
        }
        let mut v: Vec<Rational> = p.iter().zip(origin).map(|(a, b)| a - b).collect();
        for (piv, row) in &rows {
            if !v[*piv].is_zero() {
                let f = v[*piv].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &f * r;
                }
            }
        }
        if let Some(piv) = v.iter().position(|x| !x.is_zero()) {
            let lead = v[piv].clone();
            for x in v.iter_mut() {
                *x /= &lead;
            }
            rows.push((piv, v));
            basis.push(idx);
        }
    }
    // full reduction, so each pivot column is a unit vector
    for i in 0..rows.len() {
        let (piv, row) = rows[i].clone();
        for (j, (_, other)) in rows.iter_mut().enumerate() {
            if j != i && !other[piv].is_zero() {
                let f = other[piv].clone();
                for (x, r) in other.iter_mut().zip(&row) {
                    *x -= &f * r;
                }
            }
        }
    }
    let pivots: Vec<usize> = rows.iter().map(|(p, _)| *p).collect();
    let mut equalities = Vec::new();
    for free in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut n = vec![Rational::zero(); dim];
        n[free] = Rational::one();
        for (piv, row) in &rows {
            n[*piv] = -row[free].clone();
        }
        let b = rdot(&n, origin);
        equalities.push((n, b));
    }
    Frame {
        basis,
        pivots,
        equalities,
    }
}

/// Coordinates up to this magnitude keep every determinant of the kernel
/// inside `i128` for ambient dimension at most 4.
const SMALL_COORD: i64 = 1 << 24;

fn compute_hull(dim: usize, pts: &[Vec<Rational>], want_vertices: bool) -> HullOutput {
    let fr = frame(dim, pts);
    let k = fr.pivots.len();
    if k == 0 {
        return HullOutput {
            vertices: vec![0],
            hrep: HRep {
                aff_dim: 0,
                equalities: fr.equalities,
                inequalities: Vec::new(),
                volume: Rational::zero(),
            },
        };
    }
    // common denominator of the projected coordinates
    let denom = pts
        .iter()
        .flat_map(|p| fr.pivots.iter().map(move |&c| p[c].denom().clone()))
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let scaled: Vec<Vec<BigInt>> = pts
        .iter()
        .map(|p| {
            fr.pivots
                .iter()
                .map(|&c| (&p[c] * Rational::from_integer(denom.clone())).to_integer())
                .collect()
        })
        .collect();
    let small = k <= 4
        && scaled
            .iter()
            .flatten()
            .all(|v| v.abs() <= BigInt::from(SMALL_COORD));
    let (vertices, inequalities, scaled_vol) = if small {
        let ints: Vec<Vec<i128>> = scaled
            .iter()
            .map(|p| p.iter().map(|v| i128::try_from(v).expect("bounded")).collect())
            .collect();
        run_kernel(&ints, &fr.basis, want_vertices)
    } else {
        run_kernel(&scaled, &fr.basis, want_vertices)
    };
    let inequalities = inequalities
        .into_iter()
        .map(|(n, b)| {
            let mut full = vec![Rational::zero(); dim];
            for (slot, &c) in fr.pivots.iter().enumerate() {
                full[c] = Rational::from_integer(n[slot].clone());
            }
            (full, Rational::new(b, denom.clone()))
        })
        .collect();
    let volume = if k == dim {
        let fact: BigInt = (1..=k).map(BigInt::from).product();
        Rational::new(scaled_vol, fact * num_traits::pow(denom, k))
    } else {
        Rational::zero()
    };
    HullOutput {
        vertices,
        hrep: HRep {
            aff_dim: k,
            equalities: fr.equalities,
            inequalities,
            volume,
        },
    }
}

type KernelOut = (Vec<usize>, Vec<(Vec<BigInt>, BigInt)>, BigInt);

fn run_kernel<T: Coord>(pts: &[Vec<T>], simplex: &[usize], want_vertices: bool) -> KernelOut {
    let facets: Vec<Facet<T>> = beneath_beyond(pts, simplex);
    let mut planes: Vec<(Vec<T>, T)> = Vec::new();
    let mut seen = HashSet::new();
    for f in &facets {
        let h = normalize_hyperplane(&f.normal, &f.offset);
        if seen.insert(h.clone()) {
            planes.push(h);
        }
    }
    let volume = scaled_volume(pts, &facets);
    let mut vertices = Vec::new();
    if want_vertices {
        let k = pts[0].len();
        let mut cands: Vec<usize> = facets.iter().flat_map(|f| f.verts.iter().copied()).collect();
        cands.sort_unstable();
        cands.dedup();
        for v in cands {
            let active: Vec<Vec<Rational>> = planes
                .iter()
                .filter(|(n, b)| hull::dot(n, &pts[v]) == *b)
                .map(|(n, _)| n.iter().map(|x| Rational::from_integer(x.to_big())).collect())
                .collect();
            if rank(&active) == k {
                vertices.push(v);
            }
        }
    }
    let planes = planes
        .into_iter()
        .map(|(n, b)| (n.iter().map(Coord::to_big).collect(), b.to_big()))
        .collect();
    (vertices, planes, volume)
}

fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let lead = m[r][c].clone();
        let pivot_row: Vec<Rational> = m[r].iter().map(|x| x / &lead).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, pr) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * pr;
                }
            }
        }
        m[r] = pivot_row;
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(c: &[i64]) -> RationalPoint {
        RationalPoint::from_ints(c)
    }

    fn poly(c: &[&[i64]]) -> RationalPolytope {
        let dim = c[0].len();
        hull(dim, &c.iter().map(|x| p(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn hull_drops_interior_point() {
        let pts = vec![
            p(&[0, 0]),
            p(&[1, 0]),
            p(&[0, 1]),
            RationalPoint(vec![ratio(1, 4), ratio(1, 4)]),
        ];
        let h = hull(2, &pts).unwrap();
        assert_eq!(h.vertices(), &[p(&[0, 0]), p(&[0, 1]), p(&[1, 0])]);
    }

    #[test]
    fn hull_single_point_and_extreme_triangle() {
        let h = hull(2, &[p(&[3, 4])]).unwrap();
        assert_eq!(h.vertices(), &[p(&[3, 4])]);
        assert_eq!(h.volume(), int(0));
        let h = poly(&[&[3, 0], &[1, 1], &[0, 2]]);
        assert_eq!(h.vertices().len(), 3);
    }

    #[test]
    fn volumes() {
        assert_eq!(RationalPolytope::simplex(2, &int(1)).volume(), ratio(1, 2));
        assert_eq!(poly(&[&[0, 0], &[1, 0]]).volume(), int(0));
        // (1,1) is interior, so this is the triangle of area 3
        assert_eq!(poly(&[&[0, 0], &[3, 0], &[1, 1], &[0, 2]]).volume(), int(3));
        assert_eq!(RationalPolytope::simplex(3, &int(2)).volume(), ratio(8, 6));
        assert_eq!(RationalPolytope::simplex(4, &int(1)).volume(), ratio(1, 24));
    }

    #[test]
    fn minkowski_examples() {
        let a = poly(&[&[0, 0], &[1, 0]]);
        let b = poly(&[&[0, 0], &[0, 1]]);
        assert_eq!(
            a.minkowski_sum(&b).unwrap(),
            poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
        );
        let origin = poly(&[&[0, 0]]);
        assert_eq!(a.minkowski_sum(&origin).unwrap(), a);
        // (2,1) = (0,1) + (2,0) is a genuine vertex of the sum
        let s = poly(&[&[1, 0], &[0, 1]])
            .minkowski_sum(&poly(&[&[2, 0], &[0, 1]]))
            .unwrap();
        assert_eq!(s, poly(&[&[3, 0], &[1, 1], &[2, 1], &[0, 2]]));
        assert_eq!(s.volume(), int(1));
    }

    #[test]
    fn clip_examples() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(sq.clip(&Halfspace::sum_at_most(2, int(2))).unwrap(), sq);
        let t = sq.clip(&Halfspace::sum_at_most(2, int(1))).unwrap();
        assert_eq!(t.volume(), ratio(1, 2));
        // the line x+y=2 leaves the triangle through (2,0) and (0,2)
        let tri = poly(&[&[0, 0], &[3, 0], &[0, 2]]);
        let cut = tri.clip(&Halfspace::sum_at_most(2, int(2))).unwrap();
        let corner = poly(&[&[2, 0], &[3, 0], &[0, 2]]);
        assert_eq!(cut.volume(), int(3) - corner.volume());
        assert_eq!(cut, RationalPolytope::simplex(2, &int(2)));
        let cut = tri
            .clip(&Halfspace::new(vec![int(1), int(0)], int(1)).unwrap())
            .unwrap();
        let cap = hull(
            2,
            &[p(&[1, 0]), p(&[3, 0]), RationalPoint(vec![int(1), ratio(4, 3)])],
        )
        .unwrap();
        assert_eq!(cut.volume(), int(3) - cap.volume());
        let gone = tri.clip(&Halfspace::sum_at_most(2, int(-1))).unwrap();
        assert!(gone.is_empty());
        assert_eq!(gone.volume(), int(0));
    }

    #[test]
    fn membership() {
        let t = RationalPolytope::simplex(2, &int(1));
        assert!(t.contains_point(&p(&[0, 0])).unwrap());
        assert!(!t.contains_point(&p(&[1, 1])).unwrap());
        let seg = poly(&[&[1, 0], &[0, 1]]);
        assert!(seg.contains_point(&RationalPoint(vec![ratio(1, 2), ratio(1, 2)])).unwrap());
        assert!(!seg.contains_point(&RationalPoint(vec![ratio(1, 4), ratio(1, 4)])).unwrap());
        assert!(t.contains_body(&seg).unwrap());
        assert!(!seg.contains_body(&t).unwrap());
        assert!(t.contains_point(&p(&[0, 0, 0])).is_err());
    }

    #[test]
    fn lower_dimensional_in_3d() {
        let tri = poly(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(tri.affine_dim(), Some(2));
        assert_eq!(tri.volume(), int(0));
        let c = RationalPoint(vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        assert!(tri.contains_point(&c).unwrap());
        let off = RationalPoint(vec![ratio(1, 3), ratio(1, 3), ratio(1, 4)]);
        assert!(!tri.contains_point(&off).unwrap());
    }

    #[test]
    fn halfspace_rejects_zero_normal() {
        assert!(Halfspace::new(vec![int(0), int(0)], int(1)).is_err());
    }

    #[test]
    fn big_coordinates_use_bigint_path() {
        let big = 1i64 << 40;
        let pts = vec![p(&[0, 0]), p(&[big, 0]), p(&[0, big]), p(&[1, 1])];
        let h = hull(2, &pts).unwrap();
        assert_eq!(h.vertices().len(), 3);
        assert_eq!(h.volume(), Rational::from_integer(BigInt::from(big) * BigInt::from(big)) / int(2));
    }
}
