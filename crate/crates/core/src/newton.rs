//! Newton polyhedron membership and integral closure.
//!
//! The Newton polyhedron of a monomial ideal is the convex hull of its
//! exponent set, equivalently `conv(G(I)) + R^n_{>=0}`. A multidegree lies
//! in it exactly when a convex combination of the generators is dominated
//! by it; the exponent set of the integral closure is the set of lattice
//! points of the polyhedron. Membership is decided by exact rational linear
//! programming, never floating point, and every positive answer carries a
//! rational certificate.

use num::integer::lcm;
use num::rational::BigRational;
use num::{BigInt, BigUint, One, Signed};

use crate::budget;
use crate::error::{Error, Result};
use crate::ideal::{ExponentVector, MonomialIdeal};
use crate::simplex::convex_domination_certificate;

/// Above this generator count, box enumeration tests membership against the
/// corner points only (same polyhedron, far fewer LP columns).
const CORNER_REDUCTION_THRESHOLD: usize = 12;

/// Refuse to enumerate search boxes larger than this.
const BOX_LIMIT: u128 = 20_000_000;

/// Exact rational weights witnessing membership of a multidegree in the
/// Newton polyhedron: `lambda >= 0`, `sum lambda_i = 1`, and
/// `sum lambda_i A_i <= b` with `A_i` running over the minimal generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonCertificate {
    weights: Vec<BigRational>,
}

impl NewtonCertificate {
    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// Check the certificate invariants against an ideal and multidegree.
    pub fn verify(&self, ideal: &MonomialIdeal, b: &ExponentVector) -> bool {
        if self.weights.len() != ideal.num_gens() {
            return false;
        }
        if self.weights.iter().any(|w| w.is_negative()) {
            return false;
        }
        let total: BigRational = self.weights.iter().sum();
        if !total.is_one() {
            return false;
        }
        for j in 0..b.len() {
            let combo: BigRational = ideal
                .gens()
                .iter()
                .zip(&self.weights)
                .map(|(g, w)| w * BigRational::from_integer(BigInt::from(g.entry(j))))
                .sum();
            if combo > BigRational::from_integer(BigInt::from(b.entry(j))) {
                return false;
            }
        }
        true
    }

    /// Least common multiple of the weight denominators: scaling the
    /// membership relation by this `r` turns it into an exact factorization
    /// `x^{r b} in I^r`, so it is a sufficient exponent for the power-test
    /// oracle. `None` when it does not fit in `u64`.
    pub fn sufficient_power(&self) -> Option<u64> {
        let mut acc = BigUint::one();
        for w in &self.weights {
            let d = w.denom().magnitude().clone();
            acc = lcm(acc, d);
        }
        u64::try_from(&acc).ok()
    }

    /// Render the weights as exact fractions `p/q`.
    pub fn to_fraction_strings(&self) -> Vec<String> {
        self.weights.iter().map(|w| w.to_string()).collect()
    }
}

/// Decide whether `b` lies in the Newton polyhedron of `I`, returning an
/// exact certificate when it does.
pub fn np_membership(b: &ExponentVector, ideal: &MonomialIdeal) -> Result<Option<NewtonCertificate>> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if b.len() != ideal.dimension() {
        return Err(Error::DimensionMismatch {
            expected: ideal.dimension(),
            got: b.len(),
        });
    }
    Ok(convex_domination_certificate(ideal.gens(), b).map(|weights| NewtonCertificate { weights }))
}

fn box_points(bound: &ExponentVector) -> Result<Vec<ExponentVector>> {
    let size: u128 = bound
        .entries()
        .iter()
        .map(|&a| a as u128 + 1)
        .try_fold(1u128, |acc, f| acc.checked_mul(f))
        .ok_or_else(|| Error::TooLarge("search box size overflows".to_string()))?;
    if size > BOX_LIMIT {
        return Err(Error::TooLarge(format!(
            "search box has {size} lattice points (limit {BOX_LIMIT})"
        )));
    }
    let mut points = Vec::with_capacity(size as usize);
    let mut current = vec![0u64; bound.len()];
    loop {
        points.push(ExponentVector::new(current.clone()));
        // odometer increment
        let mut i = 0;
        loop {
            if i == current.len() {
                points.sort();
                return Ok(points);
            }
            if current[i] < bound.entry(i) {
                current[i] += 1;
                break;
            }
            current[i] = 0;
            i += 1;
        }
    }
}

/// The integral closure: lattice points of the Newton polyhedron inside the
/// box `[0, lcm_exponent(I)]`, minimalized. Every minimal generator of the
/// closure lies in that box, because meeting a polyhedron point with the
/// generator lcm stays in the polyhedron.
pub fn integral_closure(ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Ok(MonomialIdeal::unit(ideal.dimension()));
    }
    let columns = lp_columns(ideal)?;
    let bound = ideal.lcm_exponent()?;
    let mut accepted: Vec<ExponentVector> = Vec::new();
    for b in box_points(&bound)? {
        budget::checkpoint();
        // staircase pruning: anything above an accepted generator is a
        // member but not a minimal one (oracle-checked in the test suite
        // against the unpruned enumeration)
        if divisible_by_any(&accepted, &b)? {
            continue;
        }
        if ideal.contains(&b)? || convex_domination_certificate(&columns, &b).is_some() {
            accepted.push(b);
        }
    }
    MonomialIdeal::new(ideal.dimension(), accepted)
}

/// Closure generators paired with membership certificates over `G(I)`.
pub fn integral_closure_with_certificates(
    ideal: &MonomialIdeal,
) -> Result<Vec<(ExponentVector, NewtonCertificate)>> {
    let closure = integral_closure(ideal)?;
    closure
        .gens()
        .iter()
        .map(|g| {
            let cert = np_membership(g, ideal)?
                .expect("closure generators always lie in the polyhedron");
            Ok((g.clone(), cert))
        })
        .collect()
}

/// Full-box enumeration with no pruning; the audit route for the staircase
/// optimization in [`integral_closure`].
#[cfg(test)]
fn integral_closure_unpruned(ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Ok(MonomialIdeal::unit(ideal.dimension()));
    }
    let bound = ideal.lcm_exponent()?;
    let mut members = Vec::new();
    for b in box_points(&bound)? {
        budget::checkpoint();
        if np_membership(&b, ideal)?.is_some() {
            members.push(b);
        }
    }
    MonomialIdeal::new(ideal.dimension(), members)
}

fn divisible_by_any(gens: &[ExponentVector], b: &ExponentVector) -> Result<bool> {
    for g in gens {
        if g.divides(b)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Membership columns for closure enumeration: corner points when the
/// generator list is large, otherwise the generators themselves.
fn lp_columns(ideal: &MonomialIdeal) -> Result<Vec<ExponentVector>> {
    if ideal.num_gens() > CORNER_REDUCTION_THRESHOLD {
        corner_points(ideal)
    } else {
        Ok(ideal.gens().to_vec())
    }
}

pub fn is_integrally_closed(ideal: &MonomialIdeal) -> Result<bool> {
    Ok(integral_closure(ideal)? == *ideal)
}

/// The corner (extreme) points of the Newton polyhedron: generators that are
/// not dominated by a convex combination of the remaining generators.
pub fn corner_points(ideal: &MonomialIdeal) -> Result<Vec<ExponentVector>> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let gens = ideal.gens();
    if gens.len() == 1 {
        return Ok(vec![gens[0].clone()]);
    }
    let mut corners = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        budget::checkpoint();
        let others: Vec<ExponentVector> = gens
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h.clone())
            .collect();
        if convex_domination_certificate(&others, g).is_none() {
            corners.push(g.clone());
        }
    }
    Ok(corners)
}

/// Maximum total degree over the corner points.
pub fn delta(ideal: &MonomialIdeal) -> Result<u64> {
    let corners = corner_points(ideal)?;
    Ok(corners.iter().map(|c| c.degree()).max().unwrap_or(0))
}

/// Power-test membership oracle for the integral closure: true when
/// `x^{r b} in I^r` for some `1 <= r <= r_max`.
///
/// One-sided: a `true` always proves membership; a `false` proves
/// non-membership only when `r_max` is at least the denominator lcm of some
/// feasible certificate.
pub fn closure_membership_oracle(
    b: &ExponentVector,
    ideal: &MonomialIdeal,
    r_max: u64,
) -> Result<bool> {
    for r in 1..=r_max {
        if ideal.power_contains(&b.checked_scale(r)?, r)? {
            return Ok(true);
        }
    }
    Ok(false)
}
