//! Exact coefficient arithmetic: arbitrary-precision rationals and sparse
//! multivariate polynomials in declared symbols.
//!
//! A [`SymbolTable`] fixes an ordered list of symbols; each symbol may carry a
//! quadratic relation `t² = q` with `q ∈ ℚ` (so a purely imaginary generator is
//! declared as `square = -1`). A [`PolyScalar`] is a reduced sparse polynomial
//! over that table: no zero coefficients are stored, and a symbol with a
//! relation never appears with exponent ≥ 2. Equality of reduced forms is the
//! notion of equality everywhere, so "is zero" means identically zero — the
//! right semantics when the symbols stand for generic (transcendental or
//! quadratic) period-matrix entries.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Rational from an `i64`.
pub fn rational_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Rational `p/q`; panics if `q == 0`.
pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn rational_pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("symbol tables differ: left has {left:?}, right has {right:?}")]
    SymbolTableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("monomial {0} of the polynomial is missing from the coordinate basis")]
    MonomialNotInBasis(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("duplicate symbol name `{0}`")]
    DuplicateSymbol(String),
}

/// One declared symbol: a name and an optional quadratic relation `t² = square`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub square: Option<Rational>,
}

/// Ordered list of symbols over which polynomials are formed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    symbols: Vec<Symbol>,
}

impl SymbolTable {
    pub fn new(symbols: Vec<Symbol>) -> Result<Arc<Self>, ScalarError> {
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(ScalarError::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Arc::new(SymbolTable { symbols }))
    }

    /// Table of free symbols (no relations) with the given names.
    pub fn free(names: &[&str]) -> Arc<Self> {
        Self::new(
            names
                .iter()
                .map(|n| Symbol { name: n.to_string(), square: None })
                .collect(),
        )
        .expect("free symbol names must be distinct")
    }

    /// Table with no symbols at all; its polynomials are plain rationals.
    pub fn empty() -> Arc<Self> {
        Self::new(Vec::new()).expect("empty table")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.symbols.iter().map(|s| s.name.clone()).collect()
    }

    fn same(a: &Arc<SymbolTable>, b: &Arc<SymbolTable>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
}

/// Exponent vector over a symbol table, ordered graded-lexicographically:
/// first by total degree, ties broken by the exponent of the earliest symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn unit(nsymbols: usize) -> Self {
        Monomial(vec![0; nsymbols])
    }

    pub fn symbol(nsymbols: usize, index: usize) -> Self {
        let mut e = vec![0; nsymbols];
        e[index] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn render(&self, table: &SymbolTable) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(table.symbols[i].name.clone()),
                _ => parts.push(format!("{}^{}", table.symbols[i].name, e)),
            }
        }
        parts.join("*")
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse multivariate polynomial over ℚ in the symbols of its table,
/// stored in reduced form.
#[derive(Debug, Clone)]
pub struct PolyScalar {
    table: Arc<SymbolTable>,
    terms: std::collections::BTreeMap<Monomial, Rational>,
}

impl PartialEq for PolyScalar {
    fn eq(&self, other: &Self) -> bool {
        SymbolTable::same(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for PolyScalar {}

impl PolyScalar {
    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        PolyScalar { table: Arc::clone(table), terms: Default::default() }
    }

    pub fn constant(table: &Arc<SymbolTable>, value: Rational) -> Self {
        let mut p = Self::zero(table);
        if !value.is_zero() {
            p.terms.insert(Monomial::unit(table.len()), value);
        }
        p
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn from_int(table: &Arc<SymbolTable>, value: i64) -> Self {
        Self::constant(table, rational_int(value))
    }

    /// The polynomial consisting of the single symbol at `index`.
    pub fn symbol(table: &Arc<SymbolTable>, index: usize) -> Self {
        let mut p = Self::zero(table);
        p.terms.insert(Monomial::symbol(table.len(), index), Rational::one());
        p
    }

    /// Build from raw (monomial, coefficient) pairs; reduces quadratic
    /// relations and drops zero coefficients.
    pub fn from_terms<I>(table: &Arc<SymbolTable>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(table);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_unit() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading (largest) monomial in graded-lex order.
    fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Add one raw term, applying quadratic relations first.
    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let (m, c) = self.reduce_term(m, c);
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn reduce_term(&self, m: Monomial, mut c: Rational) -> (Monomial, Rational) {
        let mut e = m.0;
        for (i, sym) in self.table.symbols.iter().enumerate() {
            if e[i] >= 2 {
                if let Some(sq) = &sym.square {
                    c *= rational_pow(sq, e[i] / 2);
                    e[i] %= 2;
                }
            }
        }
        (Monomial(e), c)
    }

    fn check_table(&self, other: &Self) -> Result<(), ScalarError> {
        if SymbolTable::same(&self.table, &other.table) {
            Ok(())
        } else {
            Err(ScalarError::SymbolTableMismatch {
                left: self.table.names(),
                right: other.table.names(),
            })
        }
    }

    /// Termwise sum; fails on a symbol-table mismatch.
    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Distributed product with quadratic relations applied; fails on a
    /// symbol-table mismatch.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_table(other)?;
        let mut out = Self::zero(&self.table);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Coefficient vector with respect to an explicit ordered monomial basis.
    /// Every monomial of `self` must appear in the basis.
    pub fn coordinates(&self, basis: &[Monomial]) -> Result<Vec<Rational>, ScalarError> {
        let mut out = vec![Rational::zero(); basis.len()];
        for (m, c) in &self.terms {
            match basis.iter().position(|b| b == m) {
                Some(i) => out[i] = c.clone(),
                None => return Err(ScalarError::MonomialNotInBasis(m.render(&self.table))),
            }
        }
        Ok(out)
    }

    /// Substitute a rational value for every symbol.
    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.table.len(), "one value per symbol");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= rational_pow(&values[i], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact polynomial division: returns `self / divisor` when the division
    /// is exact, `None` otherwise. Only valid over relation-free tables.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert!(
            self.table.symbols.iter().all(|s| s.square.is_none()),
            "exact division requires a relation-free symbol table"
        );
        if divisor.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.table);
        let (dm, dc) = {
            let (m, c) = divisor.leading().unwrap();
            (m.clone(), c.clone())
        };
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&rm) {
                return None;
            }
            let qm = rm.div(&dm);
            let qc = rc / &dc;
            quot.add_term(qm.clone(), qc.clone());
            let factor = Self::from_terms(&self.table, [(qm, qc)]);
            let sub = factor.checked_mul(divisor).expect("same table");
            rem = rem.checked_add(&sub.neg()).expect("same table");
        }
        Some(quot)
    }

    /// Parse the polynomial grammar: `p/q` rationals, `*`, `+`, `-`, `^` with
    /// nonnegative integer exponents, parentheses; whitespace insignificant.
    pub fn parse(table: &Arc<SymbolTable>, input: &str) -> Result<Self, ScalarError> {
        Parser { table, bytes: input.as_bytes(), pos: 0 }.parse_all()
    }

    pub fn neg(mut self) -> Self {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl Neg for PolyScalar {
    type Output = PolyScalar;
    fn neg(self) -> PolyScalar {
        PolyScalar::neg(self)
    }
}

impl Add for &PolyScalar {
    type Output = PolyScalar;
    fn add(self, rhs: &PolyScalar) -> PolyScalar {
        self.checked_add(rhs).expect("symbol tables must match")
    }
}

impl Sub for &PolyScalar {
    type Output = PolyScalar;
    fn sub(self, rhs: &PolyScalar) -> PolyScalar {
        self.checked_add(&rhs.clone().neg()).expect("symbol tables must match")
    }
}

impl Mul for &PolyScalar {
    type Output = PolyScalar;
    fn mul(self, rhs: &PolyScalar) -> PolyScalar {
        self.checked_mul(rhs).expect("symbol tables must match")
    }
}

impl fmt::Display for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Descending graded-lex order, matching the parser's grammar.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = m.render(&self.table);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Format a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

struct Parser<'a> {
    table: &'a Arc<SymbolTable>,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ScalarError {
        ScalarError::Parse { position: self.pos, message: message.into() }
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

    fn parse_all(mut self) -> Result<PolyScalar, ScalarError> {
        let p = self.parse_expr()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.error(format!(
                "unexpected character `{}`",
                self.bytes[self.pos] as char
            )));
        }
        Ok(p)
    }

    fn parse_expr(&mut self) -> Result<PolyScalar, ScalarError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.parse_term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.parse_term()?
            }
            _ => self.parse_term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.checked_add(&t).expect("same table");
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.checked_add(&t.neg()).expect("same table");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<PolyScalar, ScalarError> {
        let mut acc = self.parse_factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let f = self.parse_factor()?;
            acc = acc.checked_mul(&f).expect("same table");
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<PolyScalar, ScalarError> {
        let base = self.parse_atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let exp: u32 = self
                .parse_uint()?
                .try_into()
                .map_err(|_| self.error("exponent too large"))?;
            let mut acc = PolyScalar::one(self.table);
            for _ in 0..exp {
                acc = acc.checked_mul(&base).expect("same table");
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<PolyScalar, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.error("expected `)`")),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let numer = self.parse_uint()?;
                if let Some(b'/') = self.peek() {
                    self.pos += 1;
                    self.skip_ws();
                    let start = self.pos;
                    let denom = self.parse_uint()?;
                    if denom.is_zero() {
                        self.pos = start;
                        return Err(self.error("zero denominator"));
                    }
                    Ok(PolyScalar::constant(self.table, Rational::new(numer, denom)))
                } else {
                    Ok(PolyScalar::constant(self.table, Rational::from_integer(numer)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                match self.table.index_of(name) {
                    Some(i) => Ok(PolyScalar::symbol(self.table, i)),
                    None => {
                        self.pos = start;
                        Err(ScalarError::UnknownSymbol(name.to_string()))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected character `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn parse_uint(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .unwrap())
    }
}
