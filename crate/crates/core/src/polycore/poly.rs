use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::scalar::{Ring, Scalar};
use crate::error::{Error, Result};

/// A polynomial variable. The derived order puts the X block before the T
/// block before the C block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    /// Base coordinate `X_i`, 1-based.
    X(u32),
    /// Barycentric coordinate `T_i`, 0-based.
    T(u32),
    /// Free coordinate `j` of the symbolic center `c^i`.
    C(u32, u32),
}

impl Var {
    pub fn block(self) -> Block {
        match self {
            Var::X(_) => Block::X,
            Var::T(_) => Block::T,
            Var::C(..) => Block::C,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "X{i}"),
            Var::T(i) => write!(f, "T{i}"),
            Var::C(i, j) => write!(f, "C{i}_{j}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    X,
    T,
    C,
}

/// Polynomial degree with a distinguished `-inf` for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn is_at_most(self, bound: u32) -> bool {
        match self {
            Degree::NegInfinity => true,
            Degree::Finite(d) => d <= bound,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::NegInfinity => s.serialize_str("-inf"),
            Degree::Finite(d) => s.serialize_u32(*d),
        }
    }
}

/// A monomial as a sorted list of `(variable, exponent)` with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn block_degree(&self, block: Block) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| v.block() == block)
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

/// Graded order: total degree first, then the X/T/C block degrees, then the
/// exponent list read from the smallest variable.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                self.block_degree(Block::X)
                    .cmp(&other.block_degree(Block::X))
            })
            .then_with(|| {
                self.block_degree(Block::T)
                    .cmp(&other.block_degree(Block::T))
            })
            .then_with(|| {
                // Larger exponent on an earlier variable ranks higher (lex).
                for (&(va, ea), &(vb, eb)) in self.0.iter().zip(other.0.iter()) {
                    if va != vb {
                        return vb.cmp(&va);
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
                self.0.len().cmp(&other.0.len())
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Declared variables of a polynomial ring: `X1..Xm`, `T0..Tn` and the free
/// symbolic center coordinates `C<i>_<j>` for `1 <= i <= centers`, `j < i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarDecl {
    pub m: u32,
    pub n: u32,
    pub centers: u32,
}

impl VarDecl {
    pub fn new(m: u32, n: u32, centers: u32) -> Self {
        VarDecl { m, n, centers }
    }

    pub fn declares(&self, v: Var) -> bool {
        match v {
            Var::X(i) => i >= 1 && i <= self.m,
            Var::T(i) => i <= self.n,
            Var::C(i, j) => i >= 1 && i <= self.centers && j < i,
        }
    }
}

/// Exact sparse multivariate polynomial over a [`Ring`], with variables
/// partitioned into the X, T and C blocks.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockPolynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
}

impl BlockPolynomial {
    pub fn zero(ring: &Ring) -> Self {
        BlockPolynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, ring.one())
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Self {
        Self::term(ring, c, Monomial::one())
    }

    pub fn from_int(ring: &Ring, v: i64) -> Self {
        Self::constant(ring, ring.from_int(v))
    }

    pub fn var(ring: &Ring, v: Var) -> Self {
        Self::term(ring, ring.one(), Monomial::var(v))
    }

    pub fn term(ring: &Ring, c: Scalar, mon: Monomial) -> Self {
        assert!(ring.contains(&c), "coefficient outside ring {ring:?}");
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(mon, c);
        }
        BlockPolynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(m, c)| m.is_one() && self.ring.is_one(c))
    }

    /// The constant term, or `None` if the polynomial involves any variable.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.ring.zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.powers().iter().map(|&(v, _)| v))
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn check_declared(&self, decl: &VarDecl) -> Result<()> {
        match self.variables().into_iter().find(|v| !decl.declares(*v)) {
            Some(v) => Err(Error::UndeclaredVariable(v.to_string())),
            None => Ok(()),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = self.ring.add(existing, &c);
                if self.ring.is_zero(&sum) {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_ring(&self, other: &BlockPolynomial) -> Result<()> {
        if self.ring.is_same(&other.ring) {
            Ok(())
        } else {
            Err(Error::IncompatibleModes)
        }
    }

    pub fn try_add(&self, other: &BlockPolynomial) -> Result<BlockPolynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &BlockPolynomial) -> Result<BlockPolynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.ring.neg(c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &BlockPolynomial) -> Result<BlockPolynomial> {
        self.check_ring(other)?;
        let mut out = BlockPolynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.ring.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> BlockPolynomial {
        let mut out = BlockPolynomial::zero(&self.ring);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(a, c));
        }
        out
    }

    pub fn pow(&self, exp: u32) -> BlockPolynomial {
        let mut acc = BlockPolynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Maximum total degree in the block's variables; `-inf` for zero.
    pub fn block_degree(&self, block: Block) -> Degree {
        self.terms
            .keys()
            .map(|m| m.block_degree(block))
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Replaces assigned variables by the given polynomials; other variables
    /// pass through.
    pub fn substitute(
        &self,
        assignment: &HashMap<Var, BlockPolynomial>,
    ) -> Result<BlockPolynomial> {
        for value in assignment.values() {
            self.check_ring(value)?;
        }
        let mut cache: HashMap<(Var, u32), BlockPolynomial> = HashMap::new();
        let mut out = BlockPolynomial::zero(&self.ring);
        for (mon, coeff) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = BlockPolynomial::constant(&self.ring, coeff.clone());
            for &(v, e) in mon.powers() {
                match assignment.get(&v) {
                    Some(value) => {
                        let power = cache.entry((v, e)).or_insert_with(|| value.pow(e)).clone();
                        acc = &acc * &power;
                    }
                    None => kept.push((v, e)),
                }
            }
            if !kept.is_empty() {
                let rest =
                    BlockPolynomial::term(&self.ring, self.ring.one(), Monomial::from_powers(kept));
                acc = &acc * &rest;
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Evaluates at a point whose values live in `ring` (this polynomial's
    /// ring, or an extension field of its prime field).
    pub fn evaluate(&self, point: &HashMap<Var, Scalar>, ring: &Ring) -> Result<Scalar> {
        let embed = |c: &Scalar| -> Result<Scalar> {
            if self.ring.is_same(ring) {
                return Ok(c.clone());
            }
            match (&self.ring, ring, c) {
                (Ring::Finite(src), Ring::Finite(dst), Scalar::Finite(v))
                    if src.degree() == 1 && src.characteristic() == dst.characteristic() =>
                {
                    Ok(Scalar::Finite(*v))
                }
                _ => Err(Error::IncompatibleModes),
            }
        };
        let mut acc = ring.zero();
        for (mon, coeff) in &self.terms {
            let mut term = embed(coeff)?;
            for &(v, e) in mon.powers() {
                let value = point
                    .get(&v)
                    .ok_or_else(|| Error::MissingAssignment(v.to_string()))?;
                if !ring.contains(value) {
                    return Err(Error::IncompatibleModes);
                }
                term = ring.mul(&term, &ring.pow(value, e));
            }
            acc = ring.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Re-expresses the polynomial over another ring by mapping each
    /// coefficient; used to specialize rational data to a finite field.
    pub fn map_coefficients(
        &self,
        ring: &Ring,
        f: impl Fn(&Scalar) -> Result<Scalar>,
    ) -> Result<BlockPolynomial> {
        let mut out = BlockPolynomial::zero(ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for BlockPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (mon, coeff)) in self.terms.iter().rev().enumerate() {
            let negative = self.ring.is_negative(coeff);
            let magnitude = if negative {
                self.ring.neg(coeff)
            } else {
                coeff.clone()
            };
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let coeff_text = self.ring.scalar_text(&magnitude);
            if mon.is_one() {
                write!(f, "{coeff_text}")?;
            } else if self.ring.is_one(&magnitude) {
                write!(f, "{mon}")?;
            } else {
                write!(f, "{coeff_text}*{mon}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BlockPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl<'a> $trait<&'a BlockPolynomial> for &'a BlockPolynomial {
            type Output = BlockPolynomial;
            fn $method(self, rhs: &'a BlockPolynomial) -> BlockPolynomial {
                self.$inner(rhs).expect("incompatible coefficient modes")
            }
        }

        impl $trait for BlockPolynomial {
            type Output = BlockPolynomial;
            fn $method(self, rhs: BlockPolynomial) -> BlockPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &BlockPolynomial {
    type Output = BlockPolynomial;
    fn neg(self) -> BlockPolynomial {
        self.scale(&self.ring.neg(&self.ring.one()))
    }
}

impl Neg for BlockPolynomial {
    type Output = BlockPolynomial;
    fn neg(self) -> BlockPolynomial {
        -&self
    }
}

/// Kind of arithmetic for [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn arith(a: &BlockPolynomial, b: &BlockPolynomial, op: ArithOp) -> Result<BlockPolynomial> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
    }
}
