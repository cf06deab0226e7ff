//! Exact integer lattice algebra.
//!
//! Everything here works over arbitrary-precision integers: dense matrices,
//! Smith normal form with unimodular witnesses, cokernels as finitely
//! generated abelian groups, the Sylvester test for negative definiteness,
//! and the passage from an abelian group to its l-adic realization.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                rows,
                cols,
                actual: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from machine-integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn diagonal<I: IntoIterator<Item = BigInt>>(diag: I) -> Self {
        let diag: Vec<BigInt> = diag.into_iter().collect();
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = &BigInt> + '_ {
        (0..self.rows).map(move |i| &self[(i, j)])
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// First off-diagonal position where the matrix differs from its transpose.
    fn asymmetry(&self) -> Option<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (i + 1..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self[(i, j)] != self[(j, i)])
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.asymmetry().is_none()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .all(|(i, j)| i == j || self[(i, j)].is_zero())
    }

    /// Multiplies every entry of row `i` by the exact quotient `1 / divisor`.
    pub(crate) fn divide_row_exact(&mut self, i: usize, divisor: &BigInt) -> Option<usize> {
        for j in 0..self.cols {
            let (q, r) = self[(i, j)].div_rem(divisor);
            if !r.is_zero() {
                return Some(j);
            }
            self[(i, j)] = q;
        }
        None
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        negate = !negate;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            bareiss_step(&mut a, k, &prev);
            prev = a[(k, k)].clone();
        }
        let det = a[(n - 1, n - 1)].clone();
        Ok(if negate { -det } else { det })
    }

    /// Leading principal minors `Δ_1, …, Δ_k`, computed by Bareiss elimination
    /// without pivoting. Stops after the first vanishing minor, so the result
    /// is shorter than `n` exactly when some leading minor is zero.
    pub fn leading_principal_minors(&self) -> Result<Vec<BigInt>> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut minors = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = a[(k, k)].clone();
            minors.push(pivot.clone());
            if pivot.is_zero() || k + 1 == n {
                break;
            }
            bareiss_step(&mut a, k, &prev);
            prev = pivot;
        }
        Ok(minors)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = factor * &self[(source, j)];
            self[(target, j)] += delta;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = factor * &self[(i, source)];
            self[(i, target)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = -x;
        }
    }
}

/// One elimination step of Bareiss' algorithm around pivot `(k, k)`.
fn bareiss_step(a: &mut IntMatrix, k: usize, prev: &BigInt) {
    let n = a.rows;
    for i in k + 1..n {
        for j in k + 1..a.cols {
            let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
            a[(i, j)] = num / prev;
        }
        a[(i, k)] = BigInt::zero();
    }
    debug_assert!(n > 0);
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith normal form together with its unimodular witnesses:
/// `diagonal = left * M * right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// The full diagonal `d_1, …, d_min(rows, cols)`, zeros included.
    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        let k = self.diagonal.rows.min(self.diagonal.cols);
        (0..k).map(|i| self.diagonal[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal_entries()
            .iter()
            .filter(|d| !d.is_zero())
            .count()
    }

    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal_entries()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }
}

/// Diagonalizes `m` by unimodular row and column operations.
///
/// The pivot is always a nonzero entry of minimal absolute value in the
/// remaining block. Once the pivot row and column are cleared, an entry of
/// the block not divisible by the pivot is folded into the pivot row, which
/// forces a strictly smaller pivot on the next pass.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut remainder = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                remainder |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                remainder |= !d[(t, j)].is_zero();
            }
            if remainder {
                let (pi, pj) = min_abs_entry(&d, t).expect("pivot block is nonzero");
                d.swap_rows(t, pi);
                left.swap_rows(t, pi);
                d.swap_cols(t, pj);
                right.swap_cols(t, pj);
                continue;
            }
            let pivot = d[(t, t)].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }

    SmithForm {
        left,
        diagonal: d,
        right,
    }
}

fn min_abs_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `2 <= d_1 | d_2 | … | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FgAbGroup {
    free_rank: usize,
    #[serde(with = "bigint_list")]
    invariant_factors: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self> {
        for w in invariant_factors.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(Error::InvalidInvariantFactors(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(bad) = invariant_factors.iter().find(|d| **d < BigInt::from(2)) {
            return Err(Error::InvalidInvariantFactors(format!(
                "factor {bad} is smaller than 2"
            )));
        }
        Ok(FgAbGroup {
            free_rank,
            invariant_factors,
        })
    }

    pub fn trivial() -> Self {
        FgAbGroup {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// `Z/n_1 ⊕ … ⊕ Z/n_k` in canonical form; orders 0 count as free `Z`.
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(orders: I) -> Self {
        cokernel(&IntMatrix::diagonal(orders))
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.invariant_factors.len() <= 1
    }

    /// Group order, or `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }

    /// Largest element order of the torsion subgroup.
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_owned()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// `Z^rows / image(M)`, the columns of `M` generating the image.
pub fn cokernel(m: &IntMatrix) -> FgAbGroup {
    let snf = smith_normal_form(m);
    let factors = snf.invariant_factors();
    FgAbGroup {
        free_rank: m.rows - factors.len(),
        invariant_factors: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Sylvester's criterion: `(-1)^k Δ_k > 0` for every leading principal minor.
///
/// The empty matrix is vacuously negative definite.
pub fn is_negative_definite(m: &IntMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if let Some((row, col)) = m.asymmetry() {
        return Err(Error::NonSymmetric { row, col });
    }
    let minors = m.leading_principal_minors()?;
    if minors.len() < m.rows {
        return Ok(false);
    }
    Ok(minors.iter().enumerate().all(|(k, minor)| {
        // k is zero-based, so Δ_{k+1} must be negative for even k.
        if k % 2 == 0 {
            minor.is_negative()
        } else {
            minor.is_positive()
        }
    }))
}

/// A rational prime, used as the l of the l-adic coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `ℓ`-adic valuation of a nonzero integer.
    pub fn valuation(self, n: &BigInt) -> u32 {
        assert!(!n.is_zero(), "valuation of zero");
        let p = BigInt::from(self.0);
        let mut n = n.abs();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }

    pub fn divides(self, n: &BigInt) -> bool {
        n.is_multiple_of(&BigInt::from(self.0))
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Which l-adic coefficient ring a module lives over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    /// `Z_l`
    #[default]
    Integral,
    /// `Q_l`; modules over it carry no torsion.
    Rational,
}

/// One Tate-twisted graded piece: `Λ(twist)^free_rank ⊕ ⨁ Λ/l^e (twist)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summand {
    pub twist: i64,
    pub free_rank: usize,
    pub torsion_exponents: Vec<u32>,
}

impl Summand {
    pub fn free(twist: i64, free_rank: usize) -> Self {
        Summand {
            twist,
            free_rank,
            torsion_exponents: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion_exponents.is_empty()
    }
}

/// Finitely generated module over `Z_l` or `Q_l`, as a list of twisted
/// summands.
///
/// Values built through the constructors are normalized: one summand per
/// twist, ordered by twist, torsion exponents ascending, zero summands
/// dropped. Equality of normalized values is module isomorphism (up to the
/// twist bookkeeping).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LModule {
    pub ell: Prime,
    pub coefficients: Coefficients,
    pub summands: Vec<Summand>,
}

impl LModule {
    pub fn zero(ell: Prime) -> Self {
        LModule {
            ell,
            coefficients: Coefficients::Integral,
            summands: Vec::new(),
        }
    }

    pub fn free(ell: Prime, twist: i64, rank: usize) -> Self {
        Self::from_summands(ell, vec![Summand::free(twist, rank)]).expect("free summands are valid")
    }

    pub fn from_summands(ell: Prime, summands: Vec<Summand>) -> Result<Self> {
        if summands.iter().any(|s| s.torsion_exponents.contains(&0)) {
            return Err(Error::ZeroTorsionExponent);
        }
        let mut m = LModule {
            ell,
            coefficients: Coefficients::Integral,
            summands,
        };
        m.normalize();
        Ok(m)
    }

    fn normalize(&mut self) {
        let mut merged: Vec<Summand> = Vec::new();
        let mut raw = std::mem::take(&mut self.summands);
        raw.sort_by_key(|s| s.twist);
        for s in raw {
            match merged.last_mut() {
                Some(last) if last.twist == s.twist => {
                    last.free_rank += s.free_rank;
                    last.torsion_exponents.extend(s.torsion_exponents);
                }
                _ => merged.push(s),
            }
        }
        for s in &mut merged {
            if self.coefficients == Coefficients::Rational {
                s.torsion_exponents.clear();
            }
            s.torsion_exponents.sort_unstable();
        }
        merged.retain(|s| !s.is_zero());
        self.summands = merged;
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.summands.iter().map(|s| s.free_rank).sum()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.summands.iter().all(|s| s.torsion_exponents.is_empty())
    }

    /// Every torsion exponent, across all twists, ascending.
    pub fn torsion_exponents(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self
            .summands
            .iter()
            .flat_map(|s| s.torsion_exponents.iter().copied())
            .collect();
        e.sort_unstable();
        e
    }

    /// Order of the torsion submodule, `l^(Σ e)`.
    pub fn torsion_order(&self) -> BigInt {
        let total: u32 = self.torsion_exponents().iter().sum();
        num_traits::pow(BigInt::from(self.ell.get()), total as usize)
    }

    /// Shifts every twist tag by `by`.
    pub fn retwist(mut self, by: i64) -> Self {
        for s in &mut self.summands {
            s.twist += by;
        }
        self
    }

    /// `M ⊗ Q_l`: torsion is discarded.
    pub fn rationalize(mut self) -> Self {
        self.coefficients = Coefficients::Rational;
        self.normalize();
        self
    }

    /// Only the torsion submodule.
    pub fn torsion_part(&self) -> Self {
        let mut m = self.clone();
        for s in &mut m.summands {
            s.free_rank = 0;
        }
        m.normalize();
        m
    }

    /// Direct sum; the coefficient rings must agree.
    pub fn direct_sum(&self, other: &LModule) -> Self {
        assert_eq!(self.ell, other.ell, "direct sum over different primes");
        let mut m = LModule {
            ell: self.ell,
            coefficients: self.coefficients,
            summands: self
                .summands
                .iter()
                .chain(&other.summands)
                .cloned()
                .collect(),
        };
        if other.coefficients == Coefficients::Rational {
            m.coefficients = Coefficients::Rational;
        }
        m.normalize();
        m
    }
}

impl fmt::Display for LModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ring = match self.coefficients {
            Coefficients::Integral => format!("Z_{}", self.ell),
            Coefficients::Rational => format!("Q_{}", self.ell),
        };
        let mut parts = Vec::new();
        for s in &self.summands {
            match s.free_rank {
                0 => {}
                1 => parts.push(format!("{ring}({})", s.twist)),
                r => parts.push(format!("{ring}^{r}({})", s.twist)),
            }
            for &e in &s.torsion_exponents {
                let order = num_traits::pow(BigInt::from(self.ell.get()), e as usize);
                parts.push(format!("Z/{order}({})", s.twist));
            }
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `G ⊗_Z Z_l`: the free part survives, torsion keeps only its l-Sylow part.
pub fn ell_primary(group: &FgAbGroup, ell: Prime) -> LModule {
    let exponents = group
        .invariant_factors
        .iter()
        .map(|d| ell.valuation(d))
        .filter(|&v| v > 0)
        .collect();
    LModule::from_summands(
        ell,
        vec![Summand {
            twist: 0,
            free_rank: group.free_rank,
            torsion_exponents: exponents,
        }],
    )
    .expect("valuations are positive")
}

/// Serializes integers as JSON numbers when they fit in `u64`, as decimal
/// strings otherwise.
mod bigint_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(u64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let reprs: Vec<Repr> = v
            .iter()
            .map(|x| match x.to_u64() {
                Some(small) => Repr::Small(small),
                None => Repr::Big(x.to_string()),
            })
            .collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        let reprs = Vec::<Repr>::deserialize(d)?;
        reprs
            .into_iter()
            .map(|r| match r {
                Repr::Small(x) => Ok(BigInt::from(x)),
                Repr::Big(s) => s.parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_witness(m: &IntMatrix, snf: &SmithForm) {
        assert_eq!(&(&snf.left * m) * &snf.right, snf.diagonal);
        assert!(snf.diagonal.is_diagonal());
        assert!(snf.left.determinant().unwrap().abs().is_one());
        assert!(snf.right.determinant().unwrap().abs().is_one());
        let d = snf.diagonal_entries();
        assert!(d.iter().all(|x| !x.is_negative()));
        for w in d.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn snf_of_identity_is_identity() {
        let m = IntMatrix::identity(3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal, IntMatrix::identity(3));
        check_witness(&m, &snf);
    }

    #[test]
    fn snf_of_zero_map() {
        let m = IntMatrix::from_rows(&[[0]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal, IntMatrix::from_rows(&[[0]]));
    }

    #[test]
    fn snf_of_diag_2_3() {
        let m = IntMatrix::from_rows(&[[2, 0], [0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal, IntMatrix::from_rows(&[[1, 0], [0, 6]]));
        check_witness(&m, &snf);
    }

    #[test]
    fn snf_of_empty_and_rectangular() {
        let empty = IntMatrix::zeros(0, 0);
        assert_eq!(smith_normal_form(&empty).rank(), 0);
        let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let snf = smith_normal_form(&m);
        check_witness(&m, &snf);
        assert_eq!(snf.diagonal_entries(), big(&[2, 6, 12]));
        let wide = IntMatrix::from_rows(&[[6, 4, 0]]);
        let snf = smith_normal_form(&wide);
        check_witness(&wide, &snf);
        assert_eq!(snf.invariant_factors(), big(&[2]));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMatrix::zeros(2, 2)), FgAbGroup::free(2));
        let g = cokernel(&IntMatrix::from_rows(&[[-2]]));
        assert_eq!(g.invariant_factors(), big(&[2]));
        let a3 = IntMatrix::from_rows(&[[-2, 1, 0], [1, -2, 1], [0, 1, -2]]);
        let g = cokernel(&a3);
        assert_eq!(g.to_string(), "Z/4");
        assert!(cokernel(&IntMatrix::zeros(0, 0)).is_trivial());
        // 3x0: nothing in the image
        assert_eq!(cokernel(&IntMatrix::zeros(3, 0)), FgAbGroup::free(3));
    }

    #[test]
    fn negative_definite_examples() {
        assert!(is_negative_definite(&IntMatrix::from_rows(&[[-2]])).unwrap());
        assert!(!is_negative_definite(&IntMatrix::from_rows(&[[-2, 3], [3, -2]])).unwrap());
        assert!(is_negative_definite(&IntMatrix::zeros(0, 0)).unwrap());
        assert!(!is_negative_definite(&IntMatrix::from_rows(&[[0]])).unwrap());
        assert!(matches!(
            is_negative_definite(&IntMatrix::from_rows(&[[1, 2]])),
            Err(Error::NonSquare { .. })
        ));
        assert!(matches!(
            is_negative_definite(&IntMatrix::from_rows(&[[-2, 1], [0, -2]])),
            Err(Error::NonSymmetric { row: 0, col: 1 })
        ));
    }

    #[test]
    fn leading_minors_of_a2() {
        let m = IntMatrix::from_rows(&[[-2, 1], [1, -2]]);
        assert_eq!(m.leading_principal_minors().unwrap(), big(&[-2, 3]));
        let z = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(z.leading_principal_minors().unwrap(), big(&[0]));
    }

    #[test]
    fn determinant_needs_pivoting() {
        let m = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(m.determinant().unwrap(), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[[0, 0], [1, 0]]);
        assert_eq!(m.determinant().unwrap(), BigInt::zero());
    }

    #[test]
    fn ell_primary_examples() {
        let z12 = FgAbGroup::new(0, big(&[12])).unwrap();
        let two = Prime::new(2).unwrap();
        let five = Prime::new(5).unwrap();
        assert_eq!(ell_primary(&z12, two).torsion_exponents(), vec![2]);
        assert!(ell_primary(&z12, five).is_zero());
        let z = FgAbGroup::free(1);
        let m = ell_primary(&z, five);
        assert_eq!(m.free_rank(), 1);
        assert!(m.is_torsion_free());
    }

    #[test]
    fn group_constructor_rejects_bad_factors() {
        assert!(FgAbGroup::new(0, big(&[2, 3])).is_err());
        assert!(FgAbGroup::new(0, big(&[1])).is_err());
        assert!(FgAbGroup::new(0, big(&[2, 6])).is_ok());
        let g = FgAbGroup::from_cyclic_orders(big(&[4, 6, 0]));
        assert_eq!(g.to_string(), "Z/2 ⊕ Z/12 ⊕ Z");
    }

    #[test]
    fn primes() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert!(matches!(Prime::new(1), Err(Error::NotPrime(1))));
        assert!(Prime::new(91).is_err());
        assert_eq!(Prime::new(3).unwrap().valuation(&BigInt::from(-54)), 3);
    }

    #[test]
    fn lmodule_normalizes_and_renders() {
        let two = Prime::new(2).unwrap();
        let m = LModule::from_summands(
            two,
            vec![
                Summand {
                    twist: 1,
                    free_rank: 0,
                    torsion_exponents: vec![2],
                },
                Summand::free(2, 1),
                Summand {
                    twist: 1,
                    free_rank: 0,
                    torsion_exponents: vec![1],
                },
                Summand::free(0, 0),
            ],
        )
        .unwrap();
        assert_eq!(m.summands.len(), 2);
        assert_eq!(m.to_string(), "Z/2(1) ⊕ Z/4(1) ⊕ Z_2(2)");
        assert_eq!(m.clone().rationalize().to_string(), "Q_2(2)");
        assert_eq!(m.torsion_order(), BigInt::from(8));
        assert_eq!(LModule::zero(two).to_string(), "0");
        assert!(LModule::from_summands(
            two,
            vec![Summand {
                twist: 0,
                free_rank: 0,
                torsion_exponents: vec![0]
            }]
        )
        .is_err());
    }

    #[test]
    fn group_json_uses_numbers() {
        let g = FgAbGroup::new(1, big(&[2, 4])).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"free_rank":1,"invariant_factors":[2,4]}"#);
        let huge =
            FgAbGroup::new(0, vec!["123456789012345678901234567890".parse().unwrap()]).unwrap();
        let s = serde_json::to_string(&huge).unwrap();
        assert_eq!(serde_json::from_str::<FgAbGroup>(&s).unwrap(), huge);
    }
}
