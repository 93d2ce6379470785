//! Exponent vectors and canonical monomial ideals.
//!
//! A monomial `x_1^{a_1} ... x_n^{a_n}` is identified with its exponent
//! vector `(a_1, ..., a_n)`; divisibility is the componentwise order. A
//! [`MonomialIdeal`] always stores its unique minimal generating set in a
//! canonical sort, so ideal equality is plain list equality and every
//! printed form is deterministic.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Hard caps for parsed input. Entries beyond this are never meaningful at
/// the scales the algorithms support (box enumerations, homology on subsets
/// of variables), so reject them early instead of overflowing later.
pub const MAX_DIMENSION: usize = 64;
pub const MAX_PARSED_EXPONENT: u64 = 1 << 32;

/// The multidegree of a monomial: a vector of nonnegative exponents.
///
/// Ordering is the canonical generator order used everywhere in this crate:
/// ascending total degree, ties broken by descending lexicographic
/// comparison of the entries (so `x*y^2` sorts before `y^3`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u64>);

impl ExponentVector {
    pub fn new(entries: Vec<u64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// Standard basis vector `e_i` (0-based index).
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn entry(&self, i: usize) -> u64 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Total degree, i.e. the sum of the entries.
    pub fn degree(&self) -> u64 {
        let d: u128 = self.0.iter().map(|&a| a as u128).sum();
        u64::try_from(d).expect("total degree exceeds u64")
    }

    /// Indices (0-based) of the variables dividing this monomial.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Support as a bitmask; requires `len() <= 64`.
    pub fn support_mask(&self) -> u64 {
        let mut mask = 0u64;
        for (i, &a) in self.0.iter().enumerate() {
            if a > 0 {
                mask |= 1 << i;
            }
        }
        mask
    }

    fn check_len(&self, other: &ExponentVector) -> Result<()> {
        if self.0.len() == other.0.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.0.len(),
                got: other.0.len(),
            })
        }
    }

    /// Componentwise `<=`, i.e. whether `x^self` divides `x^other`.
    pub fn divides(&self, other: &ExponentVector) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    pub fn checked_add(&self, other: &ExponentVector) -> Result<ExponentVector> {
        self.check_len(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(ExponentVector)
    }

    /// Componentwise subtraction; `None` when any entry would go negative.
    pub fn checked_sub(&self, other: &ExponentVector) -> Result<Option<ExponentVector>> {
        self.check_len(other)?;
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.checked_sub(*b) {
                Some(c) => out.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(ExponentVector(out)))
    }

    pub fn checked_scale(&self, r: u64) -> Result<ExponentVector> {
        self.0
            .iter()
            .map(|a| a.checked_mul(r).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(ExponentVector)
    }

    /// Componentwise maximum (the lcm of the two monomials).
    pub fn join(&self, other: &ExponentVector) -> Result<ExponentVector> {
        self.check_len(other)?;
        Ok(ExponentVector(
            self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect(),
        ))
    }

    /// Componentwise minimum (the gcd of the two monomials).
    pub fn meet(&self, other: &ExponentVector) -> Result<ExponentVector> {
        self.check_len(other)?;
        Ok(ExponentVector(
            self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect(),
        ))
    }

    /// Render as a monomial in the ambient ring (aliases `x,y,z` for n <= 3).
    pub fn monomial_text(&self, n: usize) -> String {
        if self.is_zero() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let var = variable_name(i, n);
            if a == 1 {
                parts.push(var);
            } else {
                parts.push(format!("{var}^{a}"));
            }
        }
        parts.join("*")
    }
}

fn variable_name(i: usize, n: usize) -> String {
    if n <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for ExponentVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExponentVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(ExponentVector(Vec::<u64>::deserialize(deserializer)?))
    }
}

/// A monomial ideal in `k[x_1..x_n]`, stored as its minimal generating set
/// in canonical order.
///
/// The empty generator list is the zero ideal; the single generator
/// `(0,...,0)` is the unit ideal. Equality is list equality of the
/// canonical forms; the ordering is only there to make ideals usable as
/// map keys.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<ExponentVector>,
}

impl MonomialIdeal {
    /// Build the canonical ideal generated by `raw`: keeps only the
    /// divisibility-minimal vectors, deduplicates, and sorts.
    pub fn new(n: usize, raw: Vec<ExponentVector>) -> Result<Self> {
        for g in &raw {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
        }
        let mut gens: Vec<ExponentVector> = Vec::new();
        'outer: for g in &raw {
            for h in &raw {
                // strict divisor elsewhere in the list, or an equal earlier copy
                if h != g && h.divides(g)? {
                    continue 'outer;
                }
            }
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        gens.sort();
        Ok(MonomialIdeal { n, gens })
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal { n, gens: Vec::new() }
    }

    pub fn unit(n: usize) -> Self {
        MonomialIdeal {
            n,
            gens: vec![ExponentVector::zero(n)],
        }
    }

    /// Ambient ring dimension.
    pub fn dimension(&self) -> usize {
        self.n
    }

    /// The minimal generating set, canonically sorted.
    pub fn gens(&self) -> &[ExponentVector] {
        &self.gens
    }

    /// Number of minimal generators.
    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_zero()
    }

    pub fn is_proper(&self) -> bool {
        !self.is_unit()
    }

    fn require_nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::ZeroIdeal)
        } else {
            Ok(())
        }
    }

    fn require_proper_nonzero(&self) -> Result<()> {
        self.require_nonzero()?;
        if self.is_unit() {
            Err(Error::UnitIdeal)
        } else {
            Ok(())
        }
    }

    /// Componentwise maximum over the generators.
    pub fn lcm_exponent(&self) -> Result<ExponentVector> {
        self.require_nonzero()?;
        let mut acc = self.gens[0].clone();
        for g in &self.gens[1..] {
            acc = acc.join(g)?;
        }
        Ok(acc)
    }

    /// Whether `x^b` lies in the ideal.
    pub fn contains(&self, b: &ExponentVector) -> Result<bool> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: b.len(),
            });
        }
        for g in &self.gens {
            if g.divides(b)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn contains_ideal(&self, other: &MonomialIdeal) -> Result<bool> {
        for g in other.gens() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The m-th power. `m = 0` returns the unit ideal by convention.
    pub fn power(&self, m: u64) -> Result<Self> {
        if m == 0 {
            return Ok(MonomialIdeal::unit(self.n));
        }
        self.require_nonzero()?;
        let mut sums: Vec<ExponentVector> = Vec::new();
        let mut stack: Vec<(usize, ExponentVector, u64)> =
            vec![(0, ExponentVector::zero(self.n), m)];
        while let Some((start, acc, left)) = stack.pop() {
            if left == 0 {
                sums.push(acc);
                continue;
            }
            for i in start..self.gens.len() {
                stack.push((i, acc.checked_add(&self.gens[i])?, left - 1));
            }
        }
        MonomialIdeal::new(self.n, sums)
    }

    /// Whether `x^c` lies in the r-th power, decided by a depth-r search
    /// over generator sums with componentwise pruning. Does not materialize
    /// the power ideal. `r = 0` tests membership in the unit ideal.
    pub fn power_contains(&self, c: &ExponentVector, r: u64) -> Result<bool> {
        if c.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: c.len(),
            });
        }
        if r == 0 {
            return Ok(true);
        }
        if self.is_zero() {
            return Ok(false);
        }
        // prune: generators of minimal degree first makes infeasible
        // branches die sooner
        fn search(
            gens: &[ExponentVector],
            start: usize,
            remaining: &ExponentVector,
            left: u64,
        ) -> Result<bool> {
            if left == 0 {
                return Ok(true);
            }
            crate::budget::checkpoint();
            for i in start..gens.len() {
                if let Some(rest) = remaining.checked_sub(&gens[i])? {
                    if search(gens, i, &rest, left - 1)? {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        search(&self.gens, 0, c, r)
    }

    /// Height: the minimum number of variables needed to hit the support of
    /// every generator. Exhaustive over subsets of the used variables, by
    /// increasing cardinality.
    pub fn height(&self) -> Result<usize> {
        self.require_proper_nonzero()?;
        let supports: Vec<u64> = self.gens.iter().map(|g| g.support_mask()).collect();
        let mut used: Vec<usize> = Vec::new();
        let union: u64 = supports.iter().fold(0, |a, b| a | b);
        for i in 0..self.n {
            if union & (1 << i) != 0 {
                used.push(i);
            }
        }
        for k in 1..=used.len() {
            if any_hitting_subset(&supports, &used, k) {
                return Ok(k);
            }
        }
        // every generator has nonempty support, so the full used set hits
        unreachable!("no hitting set found for a proper nonzero ideal")
    }

    /// Split off the largest monomial factor common to all generators.
    ///
    /// Returns `(prefix, J)` with `I = x^prefix * J`; `J` is the unit ideal
    /// or involves no variable common to all of its generators.
    pub fn factor_out_height_one(&self) -> Result<(ExponentVector, MonomialIdeal)> {
        self.require_proper_nonzero()?;
        let mut prefix = self.gens[0].clone();
        for g in &self.gens[1..] {
            prefix = prefix.meet(g)?;
        }
        let reduced = self
            .gens
            .iter()
            .map(|g| Ok(g.checked_sub(&prefix)?.expect("meet divides every generator")))
            .collect::<Result<Vec<_>>>()?;
        Ok((prefix, MonomialIdeal::new(self.n, reduced)?))
    }

    /// Whether the radical is the maximal ideal, i.e. every variable has a
    /// pure-power generator.
    pub fn is_m_primary(&self) -> bool {
        if self.is_zero() || self.is_unit() || self.n == 0 {
            return false;
        }
        (0..self.n).all(|i| {
            self.gens
                .iter()
                .any(|g| g.entry(i) > 0 && g.support().len() == 1)
        })
    }

    /// Largest total degree of a minimal generator.
    pub fn max_gen_degree(&self) -> Result<u64> {
        self.require_nonzero()?;
        Ok(self.gens.iter().map(|g| g.degree()).max().unwrap())
    }

    /// `Some(d)` when every minimal generator has total degree `d`.
    pub fn equigenerated_degree(&self) -> Option<u64> {
        let first = self.gens.first()?.degree();
        if self.gens.iter().all(|g| g.degree() == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Compact canonical JSON, the normal interchange form.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("ideal serialization cannot fail")
    }

    /// Human-readable generator list, e.g. `x^2, x*y^2, y^3`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.gens
            .iter()
            .map(|g| g.monomial_text(self.n))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Parse either the text format (`x^2, x*y^2, y^3`) or the JSON form
    /// (`{"n":2,"gens":[[2,0],[1,2],[0,3]]}`), minimalizing the result.
    pub fn parse(input: &str) -> Result<Self> {
        let (n, raw) = Self::parse_raw(input)?;
        MonomialIdeal::new(n, raw)
    }

    /// Parse with an explicit ambient dimension; text-format vectors are
    /// padded up to `n`.
    pub fn parse_with_dim(input: &str, n: usize) -> Result<Self> {
        let (inferred, mut raw) = Self::parse_raw(input)?;
        if inferred > n {
            return Err(Error::Parse(format!(
                "input mentions {inferred} variables but n = {n} was requested"
            )));
        }
        for g in &mut raw {
            let mut v = g.entries().to_vec();
            v.resize(n, 0);
            *g = ExponentVector::new(v);
        }
        MonomialIdeal::new(n, raw)
    }

    /// Parse without minimalizing: returns the ambient dimension and the
    /// generator list exactly as written.
    pub fn parse_raw(input: &str) -> Result<(usize, Vec<ExponentVector>)> {
        let trimmed = input.trim();
        if trimmed.starts_with('{') {
            let raw: RawIdeal = serde_json::from_str(trimmed)
                .map_err(|e| Error::Parse(format!("invalid ideal JSON: {e}")))?;
            raw.validate()?;
            return Ok((raw.n, raw.gens));
        }
        parse_text(trimmed)
    }
}

fn any_hitting_subset(supports: &[u64], used: &[usize], k: usize) -> bool {
    // enumerate k-subsets of `used` recursively
    fn rec(supports: &[u64], used: &[usize], k: usize, start: usize, mask: u64) -> bool {
        if k == 0 {
            return supports.iter().all(|s| s & mask != 0);
        }
        for (offset, &var) in used.iter().enumerate().skip(start) {
            if used.len() - offset < k {
                break;
            }
            if rec(supports, used, k - 1, offset + 1, mask | (1 << var)) {
                return true;
            }
        }
        false
    }
    rec(supports, used, k, 0, 0)
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialIdeal(n={}, <{}>)", self.n, self.to_text())
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct RawIdeal {
    n: usize,
    gens: Vec<ExponentVector>,
}

impl RawIdeal {
    fn validate(&self) -> Result<()> {
        if self.n > MAX_DIMENSION {
            return Err(Error::Parse(format!(
                "dimension {} exceeds the supported maximum {MAX_DIMENSION}",
                self.n
            )));
        }
        for g in &self.gens {
            if g.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: g.len(),
                });
            }
            if g.entries().iter().any(|&a| a > MAX_PARSED_EXPONENT) {
                return Err(Error::Parse("exponent too large".to_string()));
            }
        }
        Ok(())
    }
}

impl Serialize for MonomialIdeal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawIdeal {
            n: self.n,
            gens: self.gens.clone(),
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MonomialIdeal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawIdeal::deserialize(deserializer)?;
        raw.validate().map_err(D::Error::custom)?;
        MonomialIdeal::new(raw.n, raw.gens).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// text format parser

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse(format!("expected a number at byte {start}")));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let value: u64 = text
            .parse()
            .map_err(|_| Error::Parse(format!("number too large: {text}")))?;
        if value > MAX_PARSED_EXPONENT {
            return Err(Error::Parse(format!("exponent too large: {value}")));
        }
        Ok(value)
    }
}

/// One variable reference: 1-based index.
fn parse_variable(lex: &mut Lexer) -> Result<usize> {
    match lex.bump() {
        Some(b'x') => {
            // `x` alone is x_1; `x3` is the third variable
            if lex.bytes.get(lex.pos).is_some_and(|b| b.is_ascii_digit()) {
                let idx = lex.number()? as usize;
                if idx == 0 || idx > MAX_DIMENSION {
                    return Err(Error::Parse(format!("variable index out of range: x{idx}")));
                }
                Ok(idx)
            } else {
                Ok(1)
            }
        }
        Some(b'y') => Ok(2),
        Some(b'z') => Ok(3),
        Some(c) => Err(Error::Parse(format!(
            "unexpected character '{}' where a variable was expected",
            c as char
        ))),
        None => Err(Error::Parse("unexpected end of input".to_string())),
    }
}

/// `term := var ('^' uint)?`; `monomial := '1' | term ('*' term)*`
fn parse_monomial(lex: &mut Lexer) -> Result<Vec<(usize, u64)>> {
    if lex.peek() == Some(b'1') {
        lex.bump();
        return Ok(Vec::new());
    }
    let mut factors = Vec::new();
    loop {
        let var = parse_variable(lex)?;
        let exp = if lex.peek() == Some(b'^') {
            lex.bump();
            lex.number()?
        } else {
            1
        };
        factors.push((var, exp));
        if lex.peek() == Some(b'*') {
            lex.bump();
        } else {
            break;
        }
    }
    Ok(factors)
}

fn parse_text(input: &str) -> Result<(usize, Vec<ExponentVector>)> {
    if input.is_empty() || input == "0" {
        return Ok((0, Vec::new()));
    }
    let mut lex = Lexer::new(input);
    let mut monomials: Vec<Vec<(usize, u64)>> = Vec::new();
    loop {
        monomials.push(parse_monomial(&mut lex)?);
        match lex.peek() {
            Some(b',') => {
                lex.bump();
            }
            None => break,
            Some(c) => {
                return Err(Error::Parse(format!(
                    "unexpected character '{}' after a generator",
                    c as char
                )))
            }
        }
    }
    let n = monomials
        .iter()
        .flat_map(|m| m.iter().map(|&(v, _)| v))
        .max()
        .unwrap_or(0);
    let mut gens = Vec::with_capacity(monomials.len());
    for factors in monomials {
        let mut v = vec![0u64; n];
        for (var, exp) in factors {
            v[var - 1] = v[var - 1].checked_add(exp).ok_or(Error::Overflow)?;
            if v[var - 1] > MAX_PARSED_EXPONENT {
                return Err(Error::Parse("exponent too large".to_string()));
            }
        }
        gens.push(ExponentVector::new(v));
    }
    Ok((n, gens))
}
