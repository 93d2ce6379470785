//! Structural predicates and reproducible family samplers.
//!
//! Predicates: complete intersection (pairwise coprime generators), stable
//! and strongly stable (exchange moves), Gorenstein (Cohen-Macaulay of type
//! one, read off the Betti table). Constructors: the block form of height-3
//! Gorenstein monomial ideals and the stable/strongly-stable saturations
//! used by the samplers. Samplers are pure functions of
//! `(master seed, family, index)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::betti::{BettiOf, BettiTable};
use crate::error::{Error, Result};
use crate::ideal::{ExponentVector, MonomialIdeal};

/// Largest variable index (1-based) dividing a nonzero monomial.
pub fn m_of(u: &ExponentVector) -> Result<usize> {
    u.support().last().map(|i| i + 1).ok_or(Error::ZeroVector)
}

/// Generators pairwise coprime, i.e. a monomial regular sequence.
pub fn is_complete_intersection(ideal: &MonomialIdeal) -> bool {
    let masks: Vec<u64> = ideal.gens().iter().map(|g| g.support_mask()).collect();
    for (i, a) in masks.iter().enumerate() {
        for b in &masks[..i] {
            if a & b != 0 {
                return false;
            }
        }
    }
    true
}

/// Stable: for every minimal generator `u` and `i < m(u)`, the exchange
/// `x_i * u / x_{m(u)}` stays in the ideal. Checking minimal generators
/// suffices; the test suite verifies that equivalence by brute force on
/// small ideals.
pub fn is_stable(ideal: &MonomialIdeal) -> Result<bool> {
    for u in ideal.gens() {
        if u.is_zero() {
            continue; // unit ideal
        }
        let m = m_of(u)?;
        for i in 1..m {
            if !ideal.contains(&exchange(u, m, i))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Strongly stable: closed under every exchange `x_i * u / x_j` with
/// `i < j` and `x_j | u`.
pub fn is_strongly_stable(ideal: &MonomialIdeal) -> Result<bool> {
    for u in ideal.gens() {
        for j in u.support().iter().map(|v| v + 1) {
            for i in 1..j {
                if !ideal.contains(&exchange(u, j, i))? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `x_i * u / x_j` for 1-based variable indices with `u_j > 0`.
fn exchange(u: &ExponentVector, j: usize, i: usize) -> ExponentVector {
    let mut v = u.entries().to_vec();
    v[j - 1] -= 1;
    v[i - 1] += 1;
    ExponentVector::new(v)
}

/// Gorenstein test from a Betti table of `S/I`: Cohen-Macaulay (projective
/// dimension equals the height) with a rank-one top.
pub fn is_gorenstein(ideal: &MonomialIdeal, table: &BettiTable) -> Result<bool> {
    if table.convention() != BettiOf::Quotient {
        return Err(Error::WrongConvention);
    }
    let height = ideal.height()?;
    let pdim = table.pdim();
    Ok(pdim == height && table.total(pdim) == 1)
}

/// Pairwise coprime blocks for the cyclic-product form of height-3
/// Gorenstein monomial ideals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KamoiBlocks {
    n: usize,
    blocks: Vec<ExponentVector>,
}

impl KamoiBlocks {
    pub fn new(n: usize, blocks: Vec<ExponentVector>) -> Result<Self> {
        let m = blocks.len();
        if m < 3 || m % 2 == 0 {
            return Err(Error::InvalidBlocks(format!(
                "need an odd number of blocks, at least 3 (got {m})"
            )));
        }
        let mut seen: u64 = 0;
        for b in &blocks {
            if b.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: b.len(),
                });
            }
            if b.is_zero() {
                return Err(Error::InvalidBlocks("blocks must be nonzero".to_string()));
            }
            let mask = b.support_mask();
            if seen & mask != 0 {
                return Err(Error::InvalidBlocks(
                    "block supports must be pairwise disjoint".to_string(),
                ));
            }
            seen |= mask;
        }
        Ok(KamoiBlocks { n, blocks })
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[ExponentVector] {
        &self.blocks
    }
}

/// The ideal generated by the `m` cyclic products of `s - 1` consecutive
/// blocks, `s = (m + 1) / 2`. The listed products are already the minimal
/// generating set; this is validated, not assumed.
pub fn kamoi_gorenstein(blocks: &KamoiBlocks) -> Result<MonomialIdeal> {
    let m = blocks.num_blocks();
    let s = (m + 1) / 2;
    let nu = |t: usize| (t - 1) % m; // 0-based block index for 1-based t
    let mut gens = Vec::with_capacity(m);
    for i in 1..=m {
        let mut g = ExponentVector::zero(blocks.n);
        for k in 1..=(s - 1) {
            g = g.checked_add(&blocks.blocks[nu(i + k)])?;
        }
        gens.push(g);
    }
    let ideal = MonomialIdeal::new(blocks.n, gens.clone())?;
    if ideal.num_gens() != m {
        return Err(Error::InvalidBlocks(
            "cyclic products were not a minimal generating set".to_string(),
        ));
    }
    Ok(ideal)
}

/// Smallest stable ideal containing the given monomials: saturate the
/// exchange `x_i * u / x_{m(u)}` until no move leaves the ideal. Exchanges
/// preserve degree, so this terminates.
pub fn stable_closure(n: usize, raw: &[ExponentVector]) -> Result<MonomialIdeal> {
    saturate(n, raw, |u, moves| {
        let m = m_of(u).expect("nonzero by construction");
        for i in 1..m {
            moves.push(exchange(u, m, i));
        }
    })
}

/// Smallest strongly stable ideal containing the given monomials.
pub fn strongly_stable_closure(n: usize, raw: &[ExponentVector]) -> Result<MonomialIdeal> {
    saturate(n, raw, |u, moves| {
        for j in u.support().iter().map(|v| v + 1) {
            for i in 1..j {
                moves.push(exchange(u, j, i));
            }
        }
    })
}

fn saturate(
    n: usize,
    raw: &[ExponentVector],
    push_moves: impl Fn(&ExponentVector, &mut Vec<ExponentVector>),
) -> Result<MonomialIdeal> {
    for g in raw {
        if g.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.len(),
            });
        }
        if g.is_zero() {
            return Ok(MonomialIdeal::unit(n));
        }
    }
    let mut set: BTreeSet<ExponentVector> = raw.iter().cloned().collect();
    let mut queue: Vec<ExponentVector> = set.iter().cloned().collect();
    let mut moves = Vec::new();
    while let Some(u) = queue.pop() {
        crate::budget::checkpoint();
        moves.clear();
        push_moves(&u, &mut moves);
        for v in moves.drain(..) {
            let covered = set.iter().any(|w| w.divides(&v).expect("same dimension"));
            if !covered && set.insert(v.clone()) {
                queue.push(v);
            }
        }
    }
    MonomialIdeal::new(n, set.into_iter().collect())
}

/// Linear resolution test for an equigenerated ideal, from a Betti table
/// of the ideal itself: every entry in index `i` must sit in total degree
/// `d + i`.
pub fn has_linear_resolution(ideal: &MonomialIdeal, table: &BettiTable) -> Result<bool> {
    if table.convention() != BettiOf::Ideal {
        return Err(Error::WrongConvention);
    }
    let d = ideal.equigenerated_degree().ok_or(Error::NotEquigenerated)?;
    for (i, c, _) in table.entries() {
        if c.degree() != d + i as u64 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The random families the fuzzing harness draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Ci,
    Stable,
    StronglyStable,
    Gorenstein3,
    Random2,
    Random3,
    MPrimary,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Ci,
        Family::Stable,
        Family::StronglyStable,
        Family::Gorenstein3,
        Family::Random2,
        Family::Random3,
        Family::MPrimary,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Ci => "ci",
            Family::Stable => "stable",
            Family::StronglyStable => "strongly-stable",
            Family::Gorenstein3 => "gorenstein3",
            Family::Random2 => "random2",
            Family::Random3 => "random3",
            Family::MPrimary => "m-primary",
        }
    }

    fn id(&self) -> u64 {
        match self {
            Family::Ci => 1,
            Family::Stable => 2,
            Family::StronglyStable => 3,
            Family::Gorenstein3 => 4,
            Family::Random2 => 5,
            Family::Random3 => 6,
            Family::MPrimary => 7,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidFamilySpec(format!("unknown family '{s}'")))
    }
}

/// Everything that determines a sampled ideal. The master seed plus the
/// record index fully determine the output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub max_degree: u64,
    pub min_gens: usize,
    pub max_gens: usize,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, max_degree: u64, seed: u64) -> Self {
        FamilySpec {
            family,
            n,
            max_degree,
            min_gens: 1,
            max_gens: 4,
            seed,
        }
    }

    /// The dimension actually sampled (random2/random3 pin their own).
    pub fn effective_n(&self) -> usize {
        match self.family {
            Family::Random2 => 2,
            Family::Random3 => 3,
            _ => self.n,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.effective_n();
        if n == 0 || n > 16 {
            return Err(Error::InvalidFamilySpec(format!(
                "dimension {n} out of the sampling range 1..=16"
            )));
        }
        if self.max_degree == 0 {
            return Err(Error::InvalidFamilySpec("max_degree must be positive".into()));
        }
        if self.min_gens == 0 || self.min_gens > self.max_gens {
            return Err(Error::InvalidFamilySpec(
                "generator bounds must satisfy 1 <= min <= max".into(),
            ));
        }
        if self.family == Family::Gorenstein3 && n < 3 {
            return Err(Error::InvalidFamilySpec(
                "gorenstein3 needs at least 3 variables".into(),
            ));
        }
        Ok(())
    }
}

/// One independent generator stream per `(seed, family, index)`.
fn record_rng(spec: &FamilySpec, index: u64) -> ChaCha20Rng {
    let mut seed = [0u8; 32];
    seed[0..8].copy_from_slice(&spec.seed.to_le_bytes());
    seed[8..16].copy_from_slice(&spec.family.id().to_le_bytes());
    seed[16..24].copy_from_slice(&index.to_le_bytes());
    seed[24..32].copy_from_slice(b"monoreg1");
    ChaCha20Rng::from_seed(seed)
}

/// Draw the `index`-th ideal of the family. Deterministic in
/// `(spec.seed, spec.family, index)`; the result is always proper and
/// nonzero.
pub fn sample(spec: &FamilySpec, index: u64) -> Result<MonomialIdeal> {
    spec.validate()?;
    let mut rng = record_rng(spec, index);
    let n = spec.effective_n();
    match spec.family {
        Family::Ci => sample_ci(&mut rng, n, spec.max_degree),
        Family::Stable => {
            let raw = random_monomials(&mut rng, n, spec.max_degree, spec.min_gens, spec.max_gens);
            stable_closure(n, &raw)
        }
        Family::StronglyStable => {
            let raw = random_monomials(&mut rng, n, spec.max_degree, spec.min_gens, spec.max_gens);
            strongly_stable_closure(n, &raw)
        }
        Family::Gorenstein3 => {
            let blocks = sample_kamoi_blocks(&mut rng, n, spec.max_degree)?;
            kamoi_gorenstein(&blocks)
        }
        Family::Random2 | Family::Random3 => {
            let raw = random_monomials(&mut rng, n, spec.max_degree, spec.min_gens, spec.max_gens);
            MonomialIdeal::new(n, raw)
        }
        Family::MPrimary => {
            let mut raw =
                random_monomials(&mut rng, n, spec.max_degree, spec.min_gens, spec.max_gens);
            for i in 0..n {
                let mut v = vec![0u64; i];
                v.push(rng.random_range(1..=spec.max_degree));
                v.resize(n, 0);
                raw.push(ExponentVector::new(v));
            }
            MonomialIdeal::new(n, raw)
        }
    }
}

fn random_monomials(
    rng: &mut ChaCha20Rng,
    n: usize,
    max_degree: u64,
    min_gens: usize,
    max_gens: usize,
) -> Vec<ExponentVector> {
    let count = rng.random_range(min_gens..=max_gens);
    (0..count).map(|_| random_monomial(rng, n, max_degree)).collect()
}

/// A nonzero monomial of total degree in `1..=max_degree`, spread uniformly
/// over the variables.
fn random_monomial(rng: &mut ChaCha20Rng, n: usize, max_degree: u64) -> ExponentVector {
    let degree = rng.random_range(1..=max_degree);
    let mut v = vec![0u64; n];
    for _ in 0..degree {
        v[rng.random_range(0..n)] += 1;
    }
    ExponentVector::new(v)
}

fn sample_ci(rng: &mut ChaCha20Rng, n: usize, max_degree: u64) -> Result<MonomialIdeal> {
    let c = rng.random_range(1..=n);
    let mut vars: Vec<usize> = (0..n).collect();
    vars.shuffle(rng);
    // c nonempty blocks over a random prefix of the shuffled variables
    let used = rng.random_range(c..=n);
    let mut cuts: Vec<usize> = (1..used).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(c - 1).collect();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(used);
    let mut gens = Vec::with_capacity(c);
    for w in cuts.windows(2) {
        let block = &vars[w[0]..w[1]];
        let mut v = vec![0u64; n];
        for &var in block {
            v[var] = 1;
        }
        let mut degree_left = max_degree.saturating_sub(block.len() as u64);
        while degree_left > 0 && rng.random_bool(0.5) {
            v[block[rng.random_range(0..block.len())]] += 1;
            degree_left -= 1;
        }
        gens.push(ExponentVector::new(v));
    }
    MonomialIdeal::new(n, gens)
}

fn sample_kamoi_blocks(rng: &mut ChaCha20Rng, n: usize, max_degree: u64) -> Result<KamoiBlocks> {
    let choices: Vec<usize> = [3usize, 5, 7].into_iter().filter(|&m| m <= n).collect();
    let m = choices[rng.random_range(0..choices.len())];
    let s = (m + 1) / 2;
    let mut vars: Vec<usize> = (0..n).collect();
    vars.shuffle(rng);
    // per-block degree budget keeps generator degrees near max_degree
    let budget = (max_degree / (s as u64 - 1).max(1)).max(1);
    let mut blocks = Vec::with_capacity(m);
    let mut next = 0usize;
    let spare = n - m;
    let mut spare_left = spare;
    for _ in 0..m {
        let extra = if spare_left > 0 && rng.random_bool(0.3) { 1 } else { 0 };
        spare_left -= extra;
        let support = &vars[next..next + 1 + extra];
        next += 1 + extra;
        let mut v = vec![0u64; n];
        for &var in support {
            v[var] = 1;
        }
        let mut left = budget.saturating_sub(support.len() as u64);
        while left > 0 && rng.random_bool(0.4) {
            v[support[rng.random_range(0..support.len())]] += 1;
            left -= 1;
        }
        blocks.push(ExponentVector::new(v));
    }
    KamoiBlocks::new(n, blocks)
}
