//! Multigraded Betti numbers, regularity, and projective dimension.
//!
//! The general route computes, for every multidegree in the lcm lattice of
//! the generators, the reduced homology of the upper Koszul complex there;
//! `beta_{i,b}(S/I)` is the rank in dimension `i - 2`. Two closed forms act
//! as independent fast paths and cross-checks: the Eliahou-Kervaire formula
//! for stable ideals and the Koszul resolution for complete intersections.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::budget;
use crate::classify;
use crate::error::{Error, Result};
use crate::homology::{homology_ranks, Field, SimplicialComplex};
use crate::ideal::{ExponentVector, MonomialIdeal};

/// Which module a table describes: the ideal `I` or the quotient `S/I`.
/// The two are interchangeable through a homological shift:
/// `beta_i(I) = beta_{i+1}(S/I)` for `i >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BettiOf {
    Ideal,
    Quotient,
}

/// Multigraded Betti table: map from `(homological index, multidegree)` to
/// a positive rank. Zero entries are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    n: usize,
    of: BettiOf,
    entries: BTreeMap<(usize, ExponentVector), u64>,
}

impl BettiTable {
    pub fn new(n: usize, of: BettiOf, entries: BTreeMap<(usize, ExponentVector), u64>) -> Self {
        debug_assert!(entries.values().all(|&r| r > 0));
        BettiTable { n, of, entries }
    }

    pub fn convention(&self) -> BettiOf {
        self.of
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &ExponentVector, u64)> {
        self.entries.iter().map(|((i, c), &r)| (*i, c, r))
    }

    pub fn rank(&self, i: usize, c: &ExponentVector) -> u64 {
        self.entries.get(&(i, c.clone())).copied().unwrap_or(0)
    }

    /// Total Betti number in homological index `i`.
    pub fn total(&self, i: usize) -> u64 {
        self.entries
            .iter()
            .filter(|((j, _), _)| *j == i)
            .map(|(_, &r)| r)
            .sum()
    }

    /// Vector of total Betti numbers from index 0 through pdim.
    pub fn totals(&self) -> Vec<u64> {
        (0..=self.pdim()).map(|i| self.total(i)).collect()
    }

    /// Largest homological index with a nonzero entry.
    pub fn pdim(&self) -> usize {
        self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    /// `max { deg C - i }` over the nonzero entries.
    pub fn regularity(&self) -> i64 {
        self.entries
            .keys()
            .map(|(i, c)| c.degree() as i64 - *i as i64)
            .max()
            .expect("regularity of an empty table")
    }

    /// Regularity of the ideal `I`, regardless of which convention the
    /// table uses (`reg(I) = reg(S/I) + 1` for nonzero `I`).
    pub fn ideal_regularity(&self) -> i64 {
        match self.of {
            BettiOf::Ideal => self.regularity(),
            BettiOf::Quotient => self.regularity() + 1,
        }
    }

    /// Projective dimension of `S/I` regardless of convention.
    pub fn quotient_pdim(&self) -> usize {
        match self.of {
            BettiOf::Ideal => self.pdim() + 1,
            BettiOf::Quotient => self.pdim(),
        }
    }

    /// Largest total degree carrying a nonzero entry in index `i`.
    pub fn max_shift(&self, i: usize) -> Option<u64> {
        self.entries
            .keys()
            .filter(|(j, _)| *j == i)
            .map(|(_, c)| c.degree())
            .max()
    }

    /// Collapse multidegrees to total degrees.
    pub fn graded(&self) -> GradedBettiTable {
        let mut entries: BTreeMap<(usize, u64), u64> = BTreeMap::new();
        for ((i, c), &r) in &self.entries {
            *entries.entry((*i, c.degree())).or_insert(0) += r;
        }
        GradedBettiTable { of: self.of, entries }
    }

    /// Reindex a quotient table as a table for the ideal itself.
    pub fn to_ideal_convention(&self) -> Result<BettiTable> {
        match self.of {
            BettiOf::Ideal => Ok(self.clone()),
            BettiOf::Quotient => {
                let entries = self
                    .entries
                    .iter()
                    .filter(|((i, _), _)| *i >= 1)
                    .map(|((i, c), &r)| ((i - 1, c.clone()), r))
                    .collect();
                Ok(BettiTable {
                    n: self.n,
                    of: BettiOf::Ideal,
                    entries,
                })
            }
        }
    }
}

/// Betti numbers graded by total degree only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBettiTable {
    of: BettiOf,
    entries: BTreeMap<(usize, u64), u64>,
}

impl GradedBettiTable {
    pub fn convention(&self) -> BettiOf {
        self.of
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, u64, u64)> + '_ {
        self.entries.iter().map(|((i, j), &r)| (*i, *j, r))
    }

    pub fn rank(&self, i: usize, j: u64) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn total(&self, i: usize) -> u64 {
        self.entries
            .iter()
            .filter(|((k, _), _)| *k == i)
            .map(|(_, &r)| r)
            .sum()
    }

    pub fn totals(&self) -> Vec<u64> {
        (0..=self.pdim()).map(|i| self.total(i)).collect()
    }

    pub fn pdim(&self) -> usize {
        self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    pub fn regularity(&self) -> i64 {
        self.entries
            .keys()
            .map(|(i, j)| *j as i64 - *i as i64)
            .max()
            .expect("regularity of an empty table")
    }

    pub fn ideal_regularity(&self) -> i64 {
        match self.of {
            BettiOf::Ideal => self.regularity(),
            BettiOf::Quotient => self.regularity() + 1,
        }
    }

    pub fn quotient_pdim(&self) -> usize {
        match self.of {
            BettiOf::Ideal => self.pdim() + 1,
            BettiOf::Quotient => self.pdim(),
        }
    }

    pub fn to_ideal_convention(&self) -> GradedBettiTable {
        match self.of {
            BettiOf::Ideal => self.clone(),
            BettiOf::Quotient => GradedBettiTable {
                of: BettiOf::Ideal,
                entries: self
                    .entries
                    .iter()
                    .filter(|((i, _), _)| *i >= 1)
                    .map(|((i, j), &r)| ((i - 1, *j), r))
                    .collect(),
            },
        }
    }
}

/// All componentwise maxima of nonempty generator subsets: the only
/// multidegrees where Betti numbers of `S/I` can live in positive index.
pub fn lcm_lattice(ideal: &MonomialIdeal) -> Result<Vec<ExponentVector>> {
    let mut closed: BTreeSet<ExponentVector> = ideal.gens().iter().cloned().collect();
    loop {
        budget::checkpoint();
        let mut fresh: Vec<ExponentVector> = Vec::new();
        for a in &closed {
            for g in ideal.gens() {
                let j = a.join(g)?;
                if !closed.contains(&j) {
                    fresh.push(j);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        closed.extend(fresh);
    }
    Ok(closed.into_iter().collect())
}

/// The upper Koszul complex of `I` at multidegree `b`: faces are the
/// variable subsets `T` with `x^{b - e_T}` in `I`. Void exactly when `x^b`
/// is not in `I`.
pub fn upper_koszul(ideal: &MonomialIdeal, b: &ExponentVector) -> Result<SimplicialComplex> {
    let n = ideal.dimension();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let support = b.support_mask();
    let mut faces: Vec<u64> = Vec::new();
    // iterate all submasks of the support, largest first
    let mut t = support;
    loop {
        let e_t = ExponentVector::new(
            (0..n)
                .map(|i| if t & (1 << i) != 0 { 1 } else { 0 })
                .collect(),
        );
        let below = b
            .checked_sub(&e_t)?
            .expect("e_T is supported inside b's support");
        if ideal.contains(&below)? {
            faces.push(t);
        }
        if t == 0 {
            break;
        }
        t = (t - 1) & support;
    }
    Ok(SimplicialComplex::from_face_masks(n, faces))
}

/// Multigraded Betti table of `S/I` over `field`, via upper Koszul
/// homology on the lcm lattice.
pub fn multigraded_betti(ideal: &MonomialIdeal, field: Field) -> Result<BettiTable> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let n = ideal.dimension();
    let mut entries: BTreeMap<(usize, ExponentVector), u64> = BTreeMap::new();
    entries.insert((0, ExponentVector::zero(n)), 1);
    for b in lcm_lattice(ideal)? {
        budget::checkpoint();
        let complex = upper_koszul(ideal, &b)?;
        let homology = homology_ranks(&complex, field);
        for i in 1..=(n + 1) {
            let rank = homology.rank(i as i64 - 2) as u64;
            if rank > 0 {
                entries.insert((i, b.clone()), rank);
            }
        }
    }
    Ok(BettiTable::new(n, BettiOf::Quotient, entries))
}

/// Eliahou-Kervaire closed form for stable ideals: the graded Betti
/// numbers of `I` itself.
pub fn ek_betti(ideal: &MonomialIdeal) -> Result<GradedBettiTable> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    if !classify::is_stable(ideal)? {
        return Err(Error::NotStable);
    }
    let mut entries: BTreeMap<(usize, u64), u64> = BTreeMap::new();
    for u in ideal.gens() {
        let m = classify::m_of(u)? as u64;
        let j = u.degree();
        for i in 0..m {
            let add = binomial(m - 1, i);
            if add > 0 {
                *entries.entry((i as usize, i + j)).or_insert(0) += add;
            }
        }
    }
    Ok(GradedBettiTable {
        of: BettiOf::Ideal,
        entries,
    })
}

/// Koszul closed form for complete intersections: the multigraded Betti
/// table of `S/I`, one rank-one entry per generator subset.
pub fn koszul_betti(ideal: &MonomialIdeal) -> Result<BettiTable> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    if !classify::is_complete_intersection(ideal) {
        return Err(Error::NotCompleteIntersection);
    }
    let n = ideal.dimension();
    let c = ideal.num_gens();
    if c > 24 {
        return Err(Error::TooLarge(format!(
            "Koszul table over {c} generators has 2^{c} shifts"
        )));
    }
    let mut entries: BTreeMap<(usize, ExponentVector), u64> = BTreeMap::new();
    for subset in 0u64..(1 << c) {
        let mut degree = ExponentVector::zero(n);
        let mut size = 0usize;
        for t in 0..c {
            if subset & (1 << t) != 0 {
                degree = degree.checked_add(&ideal.gens()[t])?;
                size += 1;
            }
        }
        let previous = entries.insert((size, degree), 1);
        debug_assert!(previous.is_none(), "coprime supports give distinct shifts");
    }
    Ok(BettiTable::new(n, BettiOf::Quotient, entries))
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient exceeds u64")
}
