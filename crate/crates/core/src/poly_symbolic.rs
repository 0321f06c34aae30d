//! Exact multivariate polynomial arithmetic over Z, for the generic matrices
//! that drive the resolution combinatorics.
//!
//! Everything happens in Z[x_1..x_k, y_1..y_k].  The generic relation matrix
//! Q_k has columns q_{i,j} = -x_j e_i + x_i e_j (i < j), and the generic
//! presentation matrix A_k prepends the diagonal columns y_i e_i.  Three
//! identities about these matrices are verified symbolically, which is what
//! licenses the corresponding group-ring computations after substituting
//! x_i -> (lifted beta_i) and y_i -> (lifted alpha_i):
//!
//! * every maximal minor of Q_k vanishes identically;
//! * (x_1, ..., x_k) * Q_k = 0;
//! * every monomial of a maximal minor of A_k either is exactly y_1...y_k or
//!   is divisible by some product x_i * y_i.

use std::collections::{BTreeMap, HashMap};

use crate::combinatorics::combinations;
use crate::error::{Error, Result};

/// Hard cap on the generic block size; everything downstream uses k <= 6.
pub const MAX_GENERIC_K: usize = 6;

/// A sparse polynomial in a fixed number of variables, mapping exponent
/// vectors to nonzero integer coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, i64>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut p = Self::zero(nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exp = vec![0u16; nvars];
        exp[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(exp, 1);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// (exponent vector, coefficient) pairs in the map's order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u16], i64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (e, &c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert(0);
            *slot += c;
            if *slot == 0 {
                terms.remove(e);
            }
        }
        SparsePoly { nvars: self.nvars, terms }
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, &c)| (e.clone(), -c)).collect();
        SparsePoly { nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms: BTreeMap<Vec<u16>, i64> = BTreeMap::new();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let exp: Vec<u16> = ea
                    .iter()
                    .zip(eb)
                    .map(|(&a, &b)| a.checked_add(b).expect("degree overflow"))
                    .collect();
                let slot = terms.entry(exp.clone()).or_insert(0);
                *slot = slot
                    .checked_add(ca.checked_mul(cb).expect("coefficient overflow"))
                    .expect("coefficient overflow");
                if *slot == 0 {
                    terms.remove(&exp);
                }
            }
        }
        SparsePoly { nvars: self.nvars, terms }
    }
}

/// A dense matrix of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    nrows: usize,
    ncols: usize,
    nvars: usize,
    entries: Vec<SparsePoly>,
}

impl PolyMatrix {
    pub fn from_entries(nrows: usize, ncols: usize, entries: Vec<SparsePoly>) -> Self {
        assert_eq!(entries.len(), nrows * ncols);
        let nvars = entries.first().map(|p| p.nvars()).unwrap_or(0);
        assert!(entries.iter().all(|p| p.nvars() == nvars));
        PolyMatrix { nrows, ncols, nvars, entries }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, r: usize, c: usize) -> &SparsePoly {
        &self.entries[r * self.ncols + c]
    }

    /// Determinant of the square submatrix on `rows` x `cols`, by cofactor
    /// expansion along the top with memoization on the remaining column set.
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> SparsePoly {
        assert_eq!(rows.len(), cols.len());
        let mut memo: HashMap<u64, SparsePoly> = HashMap::new();
        self.minor_det_rec(rows, cols, (1u64 << cols.len()) - 1, &mut memo)
    }

    fn minor_det_rec(
        &self,
        rows: &[usize],
        cols: &[usize],
        mask: u64,
        memo: &mut HashMap<u64, SparsePoly>,
    ) -> SparsePoly {
        if mask == 0 {
            return SparsePoly::one(self.nvars);
        }
        if let Some(hit) = memo.get(&mask) {
            return hit.clone();
        }
        // The row to expand along is determined by how many columns remain.
        let depth = cols.len() - mask.count_ones() as usize;
        let row = rows[depth];
        let mut acc = SparsePoly::zero(self.nvars);
        let mut sign = 1i64;
        for (pos, &col) in cols.iter().enumerate() {
            if mask & (1 << pos) == 0 {
                continue;
            }
            let entry = self.get(row, col);
            if !entry.is_zero() {
                let sub = self.minor_det_rec(rows, cols, mask & !(1 << pos), memo);
                let term = entry.mul(&sub);
                acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            sign = -sign;
        }
        memo.insert(mask, acc.clone());
        acc
    }
}

/// Columns (i, j) with i < j in lexicographic order; shared by the generic
/// matrices and their group-ring specializations.
pub fn column_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            pairs.push((i, j));
        }
    }
    pairs
}

fn check_k(k: usize, limit: usize) -> Result<()> {
    if k == 0 || k > limit {
        return Err(Error::GenericSizeLimit { got: k, limit });
    }
    Ok(())
}

/// x_i lives at variable index i, y_i at index k + i.
pub fn x_var(k: usize, i: usize) -> SparsePoly {
    SparsePoly::var(2 * k, i)
}

pub fn y_var(k: usize, i: usize) -> SparsePoly {
    SparsePoly::var(2 * k, k + i)
}

/// The generic relation matrix Q_k: k rows, k(k-1)/2 columns q_{i,j} with
/// -x_j in row i and x_i in row j.
pub fn generic_q(k: usize) -> Result<PolyMatrix> {
    check_k(k, MAX_GENERIC_K)?;
    let pairs = column_pairs(k);
    let nvars = 2 * k;
    let mut entries = vec![SparsePoly::zero(nvars); k * pairs.len()];
    for (c, &(i, j)) in pairs.iter().enumerate() {
        entries[i * pairs.len() + c] = x_var(k, j).neg();
        entries[j * pairs.len() + c] = x_var(k, i);
    }
    Ok(PolyMatrix::from_entries(k, pairs.len(), entries))
}

/// The generic presentation matrix A_k = (y_1 e_1 | ... | y_k e_k | Q_k):
/// k rows, k(k+1)/2 columns.
pub fn generic_a(k: usize) -> Result<PolyMatrix> {
    check_k(k, MAX_GENERIC_K)?;
    let q = generic_q(k)?;
    let ncols = k + q.ncols();
    let nvars = 2 * k;
    let mut entries = vec![SparsePoly::zero(nvars); k * ncols];
    for i in 0..k {
        entries[i * ncols + i] = y_var(k, i);
    }
    for r in 0..k {
        for c in 0..q.ncols() {
            entries[r * ncols + k + c] = q.get(r, c).clone();
        }
    }
    Ok(PolyMatrix::from_entries(k, ncols, entries))
}

/// Checks that every k x k minor of Q_k is identically zero.
pub fn verify_min_q_zero(k: usize) -> Result<bool> {
    check_k(k, 5)?;
    let q = generic_q(k)?;
    let rows: Vec<usize> = (0..k).collect();
    for cols in combinations(q.ncols(), k) {
        if !q.minor_det(&rows, &cols).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that (x_1, ..., x_k) * Q_k is the zero row vector.
pub fn row_annihilation_check(k: usize) -> Result<bool> {
    check_k(k, MAX_GENERIC_K)?;
    let q = generic_q(k)?;
    for c in 0..q.ncols() {
        let mut acc = SparsePoly::zero(2 * k);
        for r in 0..k {
            acc = acc.add(&x_var(k, r).mul(q.get(r, c)));
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-monomial census of the maximal minors of A_k.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MonomialClassification {
    pub minors_checked: usize,
    /// Monomials equal to y_1 * ... * y_k.
    pub full_y_monomials: usize,
    /// Monomials divisible by x_i * y_i for some i.
    pub xy_divisible_monomials: usize,
    /// Monomials fitting neither pattern (the dichotomy claims none exist).
    pub unclassified: usize,
}

impl MonomialClassification {
    pub fn is_dichotomy(&self) -> bool {
        self.unclassified == 0
    }
}

/// Classifies every monomial of every k x k minor of A_k against the
/// dichotomy: exactly y_1...y_k, or divisible by some x_i y_i.
pub fn classify_minor_monomials(k: usize) -> Result<MonomialClassification> {
    check_k(k, 4)?;
    let a = generic_a(k)?;
    let rows: Vec<usize> = (0..k).collect();
    let mut report = MonomialClassification {
        minors_checked: 0,
        full_y_monomials: 0,
        xy_divisible_monomials: 0,
        unclassified: 0,
    };
    for cols in combinations(a.ncols(), k) {
        let det = a.minor_det(&rows, &cols);
        report.minors_checked += 1;
        for (exp, _) in det.terms() {
            let is_full_y = (0..k).all(|i| exp[i] == 0 && exp[k + i] == 1);
            if is_full_y {
                report.full_y_monomials += 1;
            } else if (0..k).any(|i| exp[i] >= 1 && exp[k + i] >= 1) {
                report.xy_divisible_monomials += 1;
            } else {
                report.unclassified += 1;
            }
        }
    }
    Ok(report)
}
