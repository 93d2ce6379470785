//! Simplicial complexes and exact reduced homology ranks.
//!
//! Complexes live on vertex sets of size at most 64 and are stored as
//! bitmask face lists closed under subsets. Reduced homology ranks are
//! computed from integer boundary matrices by fraction-free (Bareiss)
//! elimination over the rationals, or by modular elimination over a prime
//! field. The conventions matter downstream: the irrelevant complex `{0}`
//! has one unit of homology in dimension -1, and the void complex has none
//! anywhere.

use std::collections::BTreeSet;

use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use crate::budget;
use crate::error::{Error, Result};

/// Coefficient field for rank computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    /// Exact rationals (the default everywhere).
    Q,
    /// Prime field of the given order.
    Fp(u64),
}

impl Field {
    pub fn fp(p: u64) -> Result<Field> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::NotPrime("field characteristic", p));
        }
        Ok(Field::Fp(p))
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Q => write!(f, "q"),
            Field::Fp(p) => write!(f, "f{p}"),
        }
    }
}

/// A simplicial complex on vertices `0..n`, closed under taking subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    /// Sorted face bitmasks. Empty = void complex; `[0]` = irrelevant.
    faces: Vec<u64>,
}

impl SimplicialComplex {
    /// Build from arbitrary faces (vertex index lists), closing under
    /// subsets.
    pub fn from_faces(n: usize, faces: &[Vec<usize>]) -> Self {
        let masks: Vec<u64> = faces
            .iter()
            .map(|f| f.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect();
        Self::from_face_masks(n, masks)
    }

    pub fn from_face_masks(n: usize, masks: Vec<u64>) -> Self {
        assert!(n <= 64, "vertex universe too large");
        let mut closed = BTreeSet::new();
        for face in masks {
            // enumerate all submasks, including 0
            let mut sub = face;
            loop {
                closed.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & face;
            }
        }
        SimplicialComplex {
            n,
            faces: closed.into_iter().collect(),
        }
    }

    /// The complex with no faces at all.
    pub fn void(n: usize) -> Self {
        SimplicialComplex { n, faces: Vec::new() }
    }

    /// The complex whose only face is the empty set.
    pub fn irrelevant(n: usize) -> Self {
        SimplicialComplex { n, faces: vec![0] }
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_masks(&self) -> &[u64] {
        &self.faces
    }

    pub fn contains_face(&self, mask: u64) -> bool {
        self.faces.binary_search(&mask).is_ok()
    }

    /// Dimension of the complex; `None` when void.
    pub fn dim(&self) -> Option<i64> {
        self.faces
            .iter()
            .map(|f| f.count_ones() as i64 - 1)
            .max()
    }

    fn faces_of_card(&self, k: u32) -> Vec<u64> {
        self.faces
            .iter()
            .copied()
            .filter(|f| f.count_ones() == k)
            .collect()
    }
}

/// Reduced homology ranks indexed from dimension -1 upward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedHomology {
    /// `ranks[d + 1]` is the rank in dimension `d`.
    ranks: Vec<usize>,
}

impl ReducedHomology {
    pub fn rank(&self, dim: i64) -> usize {
        let idx = dim + 1;
        if idx < 0 {
            return 0;
        }
        self.ranks.get(idx as usize).copied().unwrap_or(0)
    }

    /// Dimensions with nonzero rank, as `(dim, rank)` pairs.
    pub fn nonzero(&self) -> Vec<(i64, usize)> {
        self.ranks
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .map(|(i, &r)| (i as i64 - 1, r))
            .collect()
    }
}

/// Reduced simplicial homology ranks of `complex` over `field`.
pub fn homology_ranks(complex: &SimplicialComplex, field: Field) -> ReducedHomology {
    if complex.is_void() {
        return ReducedHomology { ranks: Vec::new() };
    }
    let top = complex.dim().unwrap();
    // chain group bases by cardinality: grade k holds faces with k vertices,
    // i.e. dimension k - 1
    let grades: Vec<Vec<u64>> = (0..=(top + 1) as u32).map(|k| complex.faces_of_card(k)).collect();
    // boundary_rank[k] = rank of the map from grade k to grade k - 1
    let mut boundary_rank = vec![0usize; grades.len() + 1];
    for k in 1..grades.len() {
        boundary_rank[k] = rank_of_boundary(&grades[k - 1], &grades[k], field);
    }
    let mut ranks = Vec::with_capacity(grades.len());
    for k in 0..grades.len() {
        let dim_ck = grades[k].len();
        let img_out = boundary_rank[k];
        let img_in = boundary_rank.get(k + 1).copied().unwrap_or(0);
        ranks.push(dim_ck - img_out - img_in);
    }
    ReducedHomology { ranks }
}

/// Integer boundary matrix from faces with `k` vertices to faces with
/// `k - 1` vertices, then its exact rank.
fn rank_of_boundary(rows_basis: &[u64], cols_basis: &[u64], field: Field) -> usize {
    if rows_basis.is_empty() || cols_basis.is_empty() {
        return 0;
    }
    budget::checkpoint();
    let row_index = |mask: u64| rows_basis.binary_search(&mask).expect("closed under subsets");
    let mut matrix = vec![vec![0i64; cols_basis.len()]; rows_basis.len()];
    for (c, &face) in cols_basis.iter().enumerate() {
        let mut sign = 1i64;
        let mut rest = face;
        while rest != 0 {
            let v = rest.trailing_zeros();
            let sub = face & !(1 << v);
            matrix[row_index(sub)][c] = sign;
            sign = -sign;
            rest &= rest - 1;
        }
    }
    match field {
        Field::Q => rank_bareiss(matrix),
        Field::Fp(p) => rank_mod_p(matrix, p),
    }
}

/// Rank of an integer matrix over the rationals by fraction-free
/// elimination.
pub(crate) fn rank_bareiss(matrix: Vec<Vec<i64>>) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<BigInt>> = matrix
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let val = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = val;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank of an integer matrix over `F_p`.
pub(crate) fn rank_mod_p(matrix: Vec<Vec<i64>>, p: u64) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let p_i = p as i128;
    let mut m: Vec<Vec<u64>> = matrix
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| (((v as i128 % p_i) + p_i) % p_i) as u64)
                .collect()
        })
        .collect();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| m[r][col] % p != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = mod_inverse(m[rank][col], p);
        for c in col..cols {
            m[rank][c] = m[rank][c] * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for c in col..cols {
                    let sub = f * m[rank][c] % p;
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: p is prime and a != 0 mod p
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_isolated_vertices() {
        let k = SimplicialComplex::from_faces(2, &[vec![0], vec![1]]);
        let h = homology_ranks(&k, Field::Q);
        assert_eq!(h.rank(-1), 0);
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(1), 0);
    }

    #[test]
    fn triangle_boundary_has_a_circle() {
        let k = SimplicialComplex::from_faces(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        let h = homology_ranks(&k, Field::Q);
        assert_eq!(h.rank(0), 0);
        assert_eq!(h.rank(1), 1);
    }

    #[test]
    fn irrelevant_complex_convention() {
        let k = SimplicialComplex::irrelevant(3);
        let h = homology_ranks(&k, Field::Q);
        assert_eq!(h.rank(-1), 1);
        assert_eq!(h.nonzero(), vec![(-1, 1)]);
    }

    #[test]
    fn void_complex_has_no_homology() {
        let k = SimplicialComplex::void(3);
        let h = homology_ranks(&k, Field::Q);
        assert_eq!(h.rank(-1), 0);
        assert_eq!(h.rank(0), 0);
        assert!(h.nonzero().is_empty());
    }

    #[test]
    fn full_simplex_is_contractible() {
        let k = SimplicialComplex::from_faces(4, &[vec![0, 1, 2, 3]]);
        assert_eq!(k.num_faces(), 16);
        let h = homology_ranks(&k, Field::Q);
        assert!(h.nonzero().is_empty());
    }

    #[test]
    fn projective_plane_detects_characteristic_two() {
        // 6-vertex triangulation of the real projective plane (1-based
        // triangles 125 126 134 136 145 234 235 246 356 456)
        let triangles = [
            [1, 2, 5],
            [1, 2, 6],
            [1, 3, 4],
            [1, 3, 6],
            [1, 4, 5],
            [2, 3, 4],
            [2, 3, 5],
            [2, 4, 6],
            [3, 5, 6],
            [4, 5, 6],
        ];
        let faces: Vec<Vec<usize>> = triangles
            .iter()
            .map(|t| t.iter().map(|&v| v - 1).collect())
            .collect();
        let k = SimplicialComplex::from_faces(6, &faces);
        assert_eq!(k.dim(), Some(2));

        let over_q = homology_ranks(&k, Field::Q);
        assert_eq!(over_q.rank(0), 0);
        assert_eq!(over_q.rank(1), 0);
        assert_eq!(over_q.rank(2), 0);

        let over_f2 = homology_ranks(&k, Field::fp(2).unwrap());
        assert_eq!(over_f2.rank(0), 0);
        assert_eq!(over_f2.rank(1), 1);
        assert_eq!(over_f2.rank(2), 1);
    }

    #[test]
    fn bareiss_rank_matches_rational_gauss() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(5);
        for _ in 0..40 {
            let rows = rng.random_range(1..=6);
            let cols = rng.random_range(1..=6);
            let m: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(-3..=3)).collect())
                .collect();
            assert_eq!(rank_bareiss(m.clone()), rational_gauss_rank(&m), "matrix {m:?}");
        }
    }

    // test-only independent rank routine over exact rationals
    fn rational_gauss_rank(matrix: &[Vec<i64>]) -> usize {
        use num::rational::BigRational;
        let rows = matrix.len();
        let cols = matrix[0].len();
        let mut m: Vec<Vec<BigRational>> = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| BigRational::from_integer(BigInt::from(v)))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            for c in 0..cols {
                m[rank][c] /= &pivot;
            }
            for r in 0..rows {
                if r != rank && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..cols {
                        let delta = &f * &m[rank][c];
                        m[r][c] -= delta;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    #[test]
    fn fp_rank_handles_characteristic_collapse() {
        // 2x2 matrix with determinant 2: full rank over Q, rank 1 over F_2
        let m = vec![vec![1, 1], vec![1, -1]];
        assert_eq!(rank_bareiss(m.clone()), 2);
        assert_eq!(rank_mod_p(m, 2), 1);
    }

    #[test]
    fn field_constructor_rejects_composites() {
        assert!(Field::fp(2).is_ok());
        assert!(Field::fp(7).is_ok());
        assert!(Field::fp(1).is_err());
        assert!(Field::fp(9).is_err());
    }
}
