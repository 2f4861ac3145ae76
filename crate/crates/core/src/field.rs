//! Arithmetic and linear algebra over prime fields.

use std::fmt;

use crate::error::{Error, Result};

/// The field of residues modulo a prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub const MAX_MODULUS: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self> {
        if p >= Self::MAX_MODULUS {
            return Err(Error::input(format!("modulus {p} must be below 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::input(format!("p must be prime (got {p})")));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Canonical residue of an arbitrary integer.
    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + self.p as u64 - b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// Nonzero elements `1..p` in increasing order.
    pub fn nonzero(&self) -> impl Iterator<Item = u32> {
        1..self.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A vector over `F_p`, entries stored as canonical residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpVector {
    field: PrimeField,
    entries: Vec<u32>,
}

impl FpVector {
    /// Build from residues that are already canonical.
    pub fn new(field: PrimeField, entries: Vec<u32>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&e| e >= field.p) {
            return Err(Error::input(format!(
                "entry {bad} out of field range for {field}"
            )));
        }
        Ok(FpVector { field, entries })
    }

    /// Build from arbitrary integers, reducing each modulo `p`.
    pub fn from_i64(field: PrimeField, entries: &[i64]) -> Self {
        FpVector {
            field,
            entries: entries.iter().map(|&x| field.reduce(x)).collect(),
        }
    }

    pub fn zero(field: PrimeField, dim: usize) -> Self {
        FpVector {
            field,
            entries: vec![0; dim],
        }
    }

    /// The `i`-th unit vector of length `dim`.
    pub fn unit(field: PrimeField, dim: usize, i: usize) -> Self {
        let mut v = Self::zero(field, dim);
        v.entries[i] = 1;
        v
    }

    pub(crate) fn from_raw(field: PrimeField, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < field.p));
        FpVector { field, entries }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    /// `self += coeff * other`.
    pub fn add_scaled(&mut self, coeff: u32, other: &FpVector) {
        debug_assert_eq!(self.dim(), other.dim());
        let f = self.field;
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a = f.add(*a, f.mul(coeff, b));
        }
    }

    pub fn sub(&self, other: &FpVector) -> FpVector {
        let f = self.field;
        FpVector {
            field: f,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> FpVector {
        let f = self.field;
        FpVector {
            field: f,
            entries: self.entries.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Concatenation `self ∘ other`.
    pub fn concat(&self, other: &FpVector) -> FpVector {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        FpVector {
            field: self.field,
            entries,
        }
    }

    /// `reps` copies of `self` laid end to end.
    pub fn repeat(&self, reps: usize) -> FpVector {
        FpVector {
            field: self.field,
            entries: self.entries.repeat(reps),
        }
    }
}

/// Rows of a matrix over `F_p`, all of dimension `cols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    cols: usize,
    rows: Vec<FpVector>,
}

impl FpMatrix {
    pub fn new(field: PrimeField, cols: usize, rows: Vec<FpVector>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            check_same(field, cols, r).map_err(|e| Error::input(format!("row {i}: {e}")))?;
        }
        Ok(FpMatrix { field, cols, rows })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[FpVector] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self) -> usize {
        row_echelon(self).pivots.len()
    }
}

fn check_same(field: PrimeField, dim: usize, v: &FpVector) -> std::result::Result<(), String> {
    if v.field != field {
        return Err(format!("field mismatch: {} vs {}", v.field, field));
    }
    if v.dim() != dim {
        return Err(format!("dimension mismatch: {} vs {}", v.dim(), dim));
    }
    Ok(())
}

/// `Σ coeffs[i] · vectors[i]` over the declared `(field, dim)`.
pub fn linear_combine(
    field: PrimeField,
    dim: usize,
    vectors: &[&FpVector],
    coeffs: &[u32],
) -> Result<FpVector> {
    if vectors.len() != coeffs.len() {
        return Err(Error::input(format!(
            "{} vectors but {} coefficients",
            vectors.len(),
            coeffs.len()
        )));
    }
    let mut acc = FpVector::zero(field, dim);
    for (i, (v, &c)) in vectors.iter().zip(coeffs).enumerate() {
        check_same(field, dim, v).map_err(|e| Error::input(format!("vector {i}: {e}")))?;
        if c >= field.p {
            return Err(Error::input(format!("coefficient {c} out of field range")));
        }
        acc.add_scaled(c, v);
    }
    Ok(acc)
}

/// Reduced row echelon form plus bookkeeping.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Reduced rows; the first `pivots.len()` are nonzero.
    pub rows: Vec<Vec<u32>>,
    /// Pivot column of each nonzero reduced row, increasing.
    pub pivots: Vec<usize>,
    /// `combo[r]` expresses reduced row `r` in terms of the input rows.
    pub combo: Vec<Vec<u32>>,
}

/// Gauss-Jordan elimination. Pivot search scans columns left to right and
/// takes the lowest-index remaining row with a nonzero entry.
pub fn row_echelon(mat: &FpMatrix) -> Echelon {
    let f = mat.field;
    let n = mat.rows.len();
    let mut rows: Vec<Vec<u32>> = mat.rows.iter().map(|r| r.entries.clone()).collect();
    let mut combo: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..mat.cols {
        if next == n {
            break;
        }
        let Some(piv) = (next..n).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next, piv);
        combo.swap(next, piv);
        let inv = f.inv(rows[next][col]).expect("pivot is nonzero");
        for x in rows[next].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for x in combo[next].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for r in 0..n {
            if r == next || rows[r][col] == 0 {
                continue;
            }
            let factor = rows[r][col];
            let (pr, pc) = (rows[next].clone(), combo[next].clone());
            for (x, &y) in rows[r].iter_mut().zip(&pr) {
                *x = f.sub(*x, f.mul(factor, y));
            }
            for (x, &y) in combo[r].iter_mut().zip(&pc) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
        pivots.push(col);
        next += 1;
    }
    Echelon {
        rows,
        pivots,
        combo,
    }
}

/// Coefficients `c` with `Σ c_i · row_i = target`, or `None` when the target
/// lies outside the row span.
pub fn solve_linear(basis: &FpMatrix, target: &FpVector) -> Result<Option<Vec<u32>>> {
    check_same(basis.field, basis.cols, target).map_err(|e| Error::input(format!("target: {e}")))?;
    let f = basis.field;
    let ech = row_echelon(basis);
    // Eliminate the target against the reduced rows.
    let mut residual = target.entries.clone();
    let mut coeffs = vec![0u32; basis.rows.len()];
    for (r, &col) in ech.pivots.iter().enumerate() {
        let a = residual[col];
        if a == 0 {
            continue;
        }
        for (x, &y) in residual.iter_mut().zip(&ech.rows[r]) {
            *x = f.sub(*x, f.mul(a, y));
        }
        for (c, &y) in coeffs.iter_mut().zip(&ech.combo[r]) {
            *c = f.add(*c, f.mul(a, y));
        }
    }
    if residual.iter().any(|&x| x != 0) {
        return Ok(None);
    }
    let refs: Vec<&FpVector> = basis.rows.iter().collect();
    let check = linear_combine(f, basis.cols, &refs, &coeffs)?;
    if &check != target {
        return Err(Error::Internal("solve_linear produced a non-solution".into()));
    }
    Ok(Some(coeffs))
}

/// Indices of a maximal independent subset of rows, taking rows greedily in
/// input order.
pub fn independent_rows(mat: &FpMatrix) -> Vec<usize> {
    let f = mat.field;
    // Incremental basis kept in reduced form: (pivot column, normalized row).
    let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in mat.rows.iter().enumerate() {
        let mut r = row.entries.clone();
        for (col, b) in &basis {
            let a = r[*col];
            if a != 0 {
                for (x, &y) in r.iter_mut().zip(b) {
                    *x = f.sub(*x, f.mul(a, y));
                }
            }
        }
        if let Some(col) = r.iter().position(|&x| x != 0) {
            let inv = f.inv(r[col]).expect("nonzero");
            for x in r.iter_mut() {
                *x = f.mul(*x, inv);
            }
            // Keep earlier rows reduced at the new pivot.
            for (_, b) in basis.iter_mut() {
                let a = b[col];
                if a != 0 {
                    for (x, &y) in b.iter_mut().zip(&r) {
                        *x = f.sub(*x, f.mul(a, y));
                    }
                }
            }
            basis.push((col, r));
            chosen.push(idx);
        }
    }
    chosen
}
