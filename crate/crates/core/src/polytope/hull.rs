//! Exact beneath-beyond convex hull over integer coordinates.
//!
//! The kernel works in a full-dimensional coordinate space: callers project
//! onto an affine frame first (see the `Frame` type in the parent module). Facets are simplices;
//! coplanar simplices are allowed, so true facets are recovered by grouping
//! normalized hyperplanes.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub(crate) trait Coord: Clone + Ord + Hash + Debug + Signed + Integer {
    fn to_big(&self) -> BigInt;
}

impl Coord for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coord for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Facet<T> {
    pub verts: Vec<usize>,
    pub normal: Vec<T>,
    pub offset: T,
}

pub(crate) fn dot<T: Coord>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Laplace expansion; only used on matrices of size at most the ambient
/// dimension.
pub(crate) fn det<T: Coord>(m: &[Vec<T>]) -> T {
    let n = m.len();
    match n {
        0 => T::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            let mut acc = T::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<T>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != col)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][col].clone() * det(&minor);
                if col % 2 == 0 {
                    acc = acc + term;
                } else {
                    acc = acc - term;
                }
            }
            acc
        }
    }
}

/// Normal of the hyperplane through `k` points in `k`-space (generalized
/// cross product of the edge vectors).
fn normal_through<T: Coord>(pts: &[&[T]]) -> Vec<T> {
    let k = pts.len();
    let base = pts[0];
    let rows: Vec<Vec<T>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<T>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let v = det(&minor);
            if j % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}

fn make_facet<T: Coord>(pts: &[Vec<T>], verts: Vec<usize>, interior: &[T], scale: &T) -> Facet<T> {
    let refs: Vec<&[T]> = verts.iter().map(|&i| pts[i].as_slice()).collect();
    let mut normal = normal_through(&refs);
    let mut offset = dot(&normal, &pts[verts[0]]);
    // interior = scale * (true interior point); it must lie strictly inside
    if dot(&normal, interior) > scale.clone() * offset.clone() {
        normal = normal.into_iter().map(|v| -v).collect();
        offset = -offset;
    }
    Facet {
        verts,
        normal,
        offset,
    }
}

/// Runs beneath-beyond over `pts` (full-dimensional, distinct), starting from
/// the affinely independent `simplex` indices. Returns the simplicial facets
/// of the boundary.
pub(crate) fn beneath_beyond<T: Coord>(pts: &[Vec<T>], simplex: &[usize]) -> Vec<Facet<T>> {
    let k = pts[0].len();
    debug_assert_eq!(simplex.len(), k + 1);
    let interior: Vec<T> = (0..k)
        .map(|c| {
            simplex
                .iter()
                .fold(T::zero(), |acc, &i| acc + pts[i][c].clone())
        })
        .collect();
    let scale: T = small(k + 1);

    let mut facets: Vec<Facet<T>> = (0..=k)
        .map(|skip| {
            let verts: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != skip)
                .map(|(_, &i)| i)
                .collect();
            make_facet(pts, verts, &interior, &scale)
        })
        .collect();

    let in_simplex: std::collections::HashSet<usize> = simplex.iter().copied().collect();
    for (p_idx, p) in pts.iter().enumerate() {
        if in_simplex.contains(&p_idx) {
            continue;
        }
        let visible: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| dot(&f.normal, p) > f.offset)
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for &fi in &visible {
            let verts = &facets[fi].verts;
            for skip in 0..verts.len() {
                let mut ridge: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, &v)| v)
                    .collect();
                ridge.sort_unstable();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut keep = vec![true; facets.len()];
        for &fi in &visible {
            keep[fi] = false;
        }
        let mut next: Vec<Facet<T>> = facets
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(f, _)| f)
            .collect();
        let mut horizon: Vec<Vec<usize>> = ridges
            .into_iter()
            .filter(|(_, c)| *c == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort_unstable();
        for mut ridge in horizon {
            ridge.push(p_idx);
            next.push(make_facet(pts, ridge, &interior, &scale));
        }
        facets = next;
    }
    facets
}

fn small<T: Coord>(v: usize) -> T {
    (0..v).fold(T::zero(), |acc, _| acc + T::one())
}

/// Divides a hyperplane by the gcd of its coefficients so equal hyperplanes
/// compare equal.
pub(crate) fn normalize_hyperplane<T: Coord>(normal: &[T], offset: &T) -> (Vec<T>, T) {
    let g = normal
        .iter()
        .chain(std::iter::once(offset))
        .fold(T::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return (normal.to_vec(), offset.clone());
    }
    (
        normal.iter().map(|v| v.clone() / g.clone()).collect(),
        offset.clone() / g,
    )
}

/// `k!` times the volume of the hull, as an integer.
pub(crate) fn scaled_volume<T: Coord>(pts: &[Vec<T>], facets: &[Facet<T>]) -> BigInt {
    let Some(first) = facets.first() else {
        return BigInt::zero();
    };
    let apex = &pts[first.verts[0]];
    let mut total = BigInt::zero();
    for f in facets {
        if f.verts.contains(&first.verts[0]) {
            continue;
        }
        let m: Vec<Vec<T>> = f
            .verts
            .iter()
            .map(|&v| {
                pts[v]
                    .iter()
                    .zip(apex)
                    .map(|(a, b)| a.clone() - b.clone())
                    .collect()
            })
            .collect();
        total += det(&m).abs().to_big();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i128]]) -> Vec<Vec<i128>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![2i128, 0, 0], vec![0, 3, 0], vec![1, 1, 4]];
        assert_eq!(det(&m), 24);
        let m = vec![vec![1i128, 2], vec![3, 4]];
        assert_eq!(det(&m), -2);
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0], &[0, 1]]);
        let facets = beneath_beyond(&p, &[0, 1, 2]);
        assert_eq!(scaled_volume(&p, &facets), BigInt::from(8));
    }

    #[test]
    fn cube_volume() {
        let mut p = Vec::new();
        for x in 0..2i128 {
            for y in 0..2 {
                for z in 0..2 {
                    p.push(vec![x * 3, y * 3, z * 3]);
                }
            }
        }
        p.push(vec![1, 1, 1]);
        p.push(vec![3, 1, 2]);
        let facets = beneath_beyond(&p, &[0, 1, 2, 4]);
        // 3! * 27
        assert_eq!(scaled_volume(&p, &facets), BigInt::from(162));
    }
}
