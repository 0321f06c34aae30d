//! Linear algebra over Z/p^M: Howell normal forms, span tests, kernels.
//!
//! Z/p^M is a local principal ideal ring: every nonzero element factors as
//! unit * p^e.  Row spans of matrices over such a ring are classified by the
//! Howell normal form, an echelon form with one extra closure property: any
//! span vector whose leading coordinates vanish must already be a combination
//! of the rows with later pivots.  Plain echelon forms (and Smith invariant
//! factors) cannot decide submodule identity over Z/p^M; the Howell form can,
//! and it is the canonical certificate used by every ideal computation in
//! this crate.

use crate::error::{Error, Result};

/// The coefficient ring Z/p^M, with p prime and M >= 1.
///
/// The modulus is capped so that sums of two residues stay inside `u64`;
/// products are widened to `u128` before reduction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ResidueRing {
    p: u64,
    precision: u32,
    modulus: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl ResidueRing {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let modulus = p
            .checked_pow(precision)
            .filter(|&m| m <= 1 << 31)
            .ok_or(Error::ModulusTooLarge { p, precision })?;
        Ok(ResidueRing { p, precision, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b % self.modulus) % self.modulus
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// p-adic valuation of a nonzero residue, capped at the precision.
    /// Returns `None` for zero.
    pub fn val(&self, x: u64) -> Option<u32> {
        if x % self.modulus == 0 {
            return None;
        }
        let mut x = x % self.modulus;
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self, x: u64) -> bool {
        x % self.p != 0
    }

    /// Inverse of a unit, by lifting the mod-p inverse with Newton iteration.
    pub fn inv_unit(&self, x: u64) -> Result<u64> {
        let x = x % self.modulus;
        if !self.is_unit(x) {
            return Err(Error::NotAUnit);
        }
        // Inverse mod p by Fermat, then double the precision each step.
        let mut inv = {
            let mut acc = 1u64;
            let mut base = x % self.p;
            let mut e = self.p - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % self.p;
                }
                base = base * base % self.p;
                e >>= 1;
            }
            acc
        };
        let mut bits = 1;
        while bits < self.precision {
            // inv <- inv * (2 - x * inv) mod p^M
            let t = self.sub(2 % self.modulus, self.mul(x, inv));
            inv = self.mul(inv, t);
            bits *= 2;
        }
        debug_assert_eq!(self.mul(x, inv), 1 % self.modulus);
        Ok(inv)
    }

    /// Writes x = unit * p^e and returns (unit, e).  Requires x != 0.
    pub fn unit_and_val(&self, x: u64) -> (u64, u32) {
        let e = self.val(x).expect("unit_and_val of zero");
        let mut u = x % self.modulus;
        for _ in 0..e {
            u /= self.p;
        }
        (u, e)
    }
}

/// A dense row-major matrix over a fixed `ResidueRing`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZmodMatrix {
    ring: ResidueRing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ZmodMatrix {
    pub fn zeros(ring: ResidueRing, rows: usize, cols: usize) -> Self {
        ZmodMatrix { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ring: ResidueRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(ring: ResidueRing, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch { got: r.len(), expected: cols });
            }
            data.extend(r.iter().map(|&x| x % ring.modulus()));
        }
        Ok(ZmodMatrix { ring, rows: rows.len(), cols, data })
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: u64) {
        self.data[r * self.cols + c] = x % self.ring.modulus();
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Stacks two matrices with the same column count.
    pub fn stack(&self, other: &ZmodMatrix) -> Result<ZmodMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.cols != other.cols {
            return Err(Error::ColumnMismatch { left: self.cols, right: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(ZmodMatrix { ring: self.ring, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.rows {
            return Err(Error::LengthMismatch { got: v.len(), expected: self.rows });
        }
        let mut out = vec![0u64; self.cols];
        for (r, &coef) in v.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            for c in 0..self.cols {
                out[c] = self.ring.add(out[c], self.ring.mul(coef, self.get(r, c)));
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> ZmodMatrix {
        let mut t = ZmodMatrix::zeros(self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }
}

/// The canonical Howell normal form of a row span.
///
/// Normalization: each pivot is exactly p^e for some e >= 0 (unit part divided
/// out), entries above a pivot are reduced modulo that pivot, zero rows are
/// dropped, and rows are sorted by pivot column.  Two matrices have equal row
/// spans if and only if their Howell forms are identical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HowellForm {
    mat: ZmodMatrix,
    pivots: Vec<usize>,
}

impl HowellForm {
    pub fn matrix(&self) -> &ZmodMatrix {
        &self.mat
    }

    /// Pivot column of each row, in increasing order.
    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> usize {
        self.mat.rows()
    }

    pub fn cols(&self) -> usize {
        self.mat.cols()
    }

    pub fn ring(&self) -> ResidueRing {
        self.mat.ring()
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        self.mat.row_vecs()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.rows() == 0
    }
}

/// Worker that absorbs rows one at a time, keeping at most one basis row per
/// pivot column, pivots normalized to p^e.
struct HowellBuilder {
    ring: ResidueRing,
    cols: usize,
    slots: Vec<Option<Vec<u64>>>,
    pending: Vec<Vec<u64>>,
}

impl HowellBuilder {
    fn new(ring: ResidueRing, cols: usize) -> Self {
        HowellBuilder { ring, cols, slots: vec![None; cols], pending: Vec::new() }
    }

    fn push(&mut self, row: Vec<u64>) {
        self.pending.push(row);
        while let Some(r) = self.pending.pop() {
            self.absorb(r);
        }
    }

    /// row <- row - q * other, starting at column `from` (earlier columns of
    /// both are already zero).
    fn sub_scaled(&self, row: &mut [u64], other: &[u64], q: u64, from: usize) {
        for c in from..self.cols {
            row[c] = self.ring.sub(row[c], self.ring.mul(q, other[c]));
        }
    }

    /// Divides out the unit part of row[col], making the pivot exactly p^e,
    /// and queues the annihilator shadow p^(M-e) * row which carries the part
    /// of the span that survives past this pivot.
    fn install(&mut self, mut row: Vec<u64>, col: usize) {
        let (unit, e) = self.ring.unit_and_val(row[col]);
        if unit != 1 {
            let inv = self.ring.inv_unit(unit).expect("unit part is a unit");
            for c in col..self.cols {
                row[c] = self.ring.mul(row[c], inv);
            }
        }
        if e > 0 {
            let scale = self.ring.pow(self.ring.p(), (self.ring.precision() - e) as u64);
            let shadow: Vec<u64> = row.iter().map(|&x| self.ring.mul(x, scale)).collect();
            self.pending.push(shadow);
        }
        self.slots[col] = Some(row);
    }

    fn absorb(&mut self, mut row: Vec<u64>) {
        let mut col = 0;
        while col < self.cols {
            if row[col] == 0 {
                col += 1;
                continue;
            }
            match self.slots[col].take() {
                None => {
                    self.install(row, col);
                    return;
                }
                Some(basis) => {
                    let e_b = self.ring.val(basis[col]).expect("basis pivot nonzero");
                    let e_r = self.ring.val(row[col]).expect("entry nonzero");
                    if e_r >= e_b {
                        // basis pivot is exactly p^e_b, so the quotient is exact
                        let q = row[col] / self.ring.pow(self.ring.p(), e_b as u64);
                        self.sub_scaled(&mut row, &basis, q, col);
                        debug_assert_eq!(row[col], 0);
                        self.slots[col] = Some(basis);
                    } else {
                        // Strictly smaller valuation: the new row takes the
                        // slot and the old basis row goes back in the queue.
                        self.install(row, col);
                        self.pending.push(basis);
                        return;
                    }
                }
            }
        }
        // Row reduced to zero: nothing to record.
    }

    fn finish(self) -> HowellForm {
        let ring = self.ring;
        let cols = self.cols;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for (col, slot) in self.slots.into_iter().enumerate() {
            if let Some(r) = slot {
                rows.push(r);
                pivots.push(col);
            }
        }
        // Reduce entries above each pivot modulo that pivot.  Processing
        // pivots left to right cannot disturb columns already normalized,
        // because later pivot rows vanish on earlier pivot columns.
        for k in 0..rows.len() {
            let col = pivots[k];
            let pivot = rows[k][col];
            let (later, earlier) = {
                let (a, b) = rows.split_at_mut(k);
                (b, a)
            };
            let pivot_row = &later[0];
            for r in earlier.iter_mut() {
                let q = r[col] / pivot;
                if q != 0 {
                    for c in col..cols {
                        r[c] = ring.sub(r[c], ring.mul(q, pivot_row[c]));
                    }
                }
                debug_assert!(r[col] < pivot);
            }
        }
        let mat = ZmodMatrix::from_rows(ring, cols, &rows).expect("rows have uniform length");
        HowellForm { mat, pivots }
    }
}

/// Computes the Howell normal form of the row span of `m`.
pub fn howell(m: &ZmodMatrix) -> HowellForm {
    let mut b = SpanBuilder::new(m.ring(), m.cols());
    for r in 0..m.rows() {
        b.push(m.row(r).to_vec());
    }
    b.finish()
}

/// Incrementally absorbs rows into a Howell form, keeping only the canonical
/// basis in memory.  Use this instead of materializing large generator lists.
pub struct SpanBuilder(HowellBuilder);

impl SpanBuilder {
    pub fn new(ring: ResidueRing, cols: usize) -> Self {
        SpanBuilder(HowellBuilder::new(ring, cols))
    }

    pub fn push(&mut self, row: Vec<u64>) {
        assert_eq!(row.len(), self.0.cols, "row length must match column count");
        self.0.push(row);
    }

    pub fn finish(self) -> HowellForm {
        self.0.finish()
    }
}

/// Do two matrices span the same submodule of (Z/p^M)^cols?
pub fn span_eq(a: &ZmodMatrix, b: &ZmodMatrix) -> Result<bool> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    if a.cols() != b.cols() {
        return Err(Error::ColumnMismatch { left: a.cols(), right: b.cols() });
    }
    Ok(howell(a) == howell(b))
}

/// Is `v` in the row span captured by the Howell form?
pub fn span_contains(h: &HowellForm, v: &[u64]) -> Result<bool> {
    if v.len() != h.cols() {
        return Err(Error::LengthMismatch { got: v.len(), expected: h.cols() });
    }
    let ring = h.ring();
    let mut w: Vec<u64> = v.iter().map(|&x| x % ring.modulus()).collect();
    Ok(reduce_against(&mut w, h, h.cols()))
}

/// Reduces `w` against the Howell rows, using pivots in columns < `limit`;
/// returns true when the first `limit` coordinates end up zero.
fn reduce_against(w: &mut [u64], h: &HowellForm, limit: usize) -> bool {
    let ring = h.ring();
    let m = h.matrix();
    let mut row_idx = 0;
    for col in 0..limit {
        while row_idx < h.rows() && h.pivots[row_idx] < col {
            row_idx += 1;
        }
        if w[col] == 0 {
            continue;
        }
        if row_idx >= h.rows() || h.pivots[row_idx] != col {
            return false;
        }
        let e_p = ring.val(m.get(row_idx, col)).expect("pivot nonzero");
        match ring.val(w[col]) {
            Some(e_w) if e_w >= e_p => {
                let q = w[col] / ring.pow(ring.p(), e_p as u64);
                for c in col..w.len() {
                    w[c] = ring.sub(w[c], ring.mul(q, m.get(row_idx, c)));
                }
                debug_assert_eq!(w[col], 0);
            }
            _ => return false,
        }
    }
    true
}

/// Howell basis of the left kernel { x : x * m = 0 }.
///
/// Implementation: Howell-reduce the block matrix [m | I].  Each row keeps the
/// invariant (v | u) with v = u * m, so the rows whose pivot lands in the
/// identity block record exactly the combinations that kill m.  The Howell
/// closure property guarantees those rows span the whole kernel.
pub fn kernel_basis(m: &ZmodMatrix) -> HowellForm {
    let n = m.rows();
    let c = m.cols();
    let ring = m.ring();
    let mut b = HowellBuilder::new(ring, c + n);
    for r in 0..n {
        let mut row = vec![0u64; c + n];
        row[..c].copy_from_slice(m.row(r));
        row[c + r] = 1 % ring.modulus();
        b.push(row);
    }
    let h = b.finish();
    let mut kernel_rows = Vec::new();
    for (i, &piv) in h.pivot_cols().iter().enumerate() {
        if piv >= c {
            kernel_rows.push(h.matrix().row(i)[c..].to_vec());
        }
    }
    let mat = ZmodMatrix::from_rows(ring, n, &kernel_rows).expect("uniform rows");
    let h = howell(&mat);
    debug_assert!((0..h.rows()).all(|r| {
        m.left_apply(h.matrix().row(r)).map(|img| img.iter().all(|&x| x == 0)).unwrap_or(false)
    }));
    h
}

/// Solves x * m = b, if a solution exists.
///
/// Rides the same [m | I] bookkeeping as `kernel_basis`: reducing (b | 0)
/// against the augmented Howell form zeroes the left block exactly when b is
/// in the row span, and the negated tail is then one solution.
pub fn solve_left(m: &ZmodMatrix, b: &[u64]) -> Result<Option<Vec<u64>>> {
    if b.len() != m.cols() {
        return Err(Error::LengthMismatch { got: b.len(), expected: m.cols() });
    }
    let n = m.rows();
    let c = m.cols();
    let ring = m.ring();
    let mut builder = HowellBuilder::new(ring, c + n);
    for r in 0..n {
        let mut row = vec![0u64; c + n];
        row[..c].copy_from_slice(m.row(r));
        row[c + r] = 1 % ring.modulus();
        builder.push(row);
    }
    let h = builder.finish();
    let mut w = vec![0u64; c + n];
    for (i, &x) in b.iter().enumerate() {
        w[i] = x % ring.modulus();
    }
    if !reduce_against(&mut w, &h, c) {
        return Ok(None);
    }
    let x: Vec<u64> = w[c..].iter().map(|&t| ring.neg(t)).collect();
    debug_assert_eq!(m.left_apply(&x)?, b.iter().map(|&t| t % ring.modulus()).collect::<Vec<_>>());
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn ring(p: u64, precision: u32) -> ResidueRing {
        ResidueRing::new(p, precision).unwrap()
    }

    /// Every Z/N-combination of the rows, as an explicit set.  Exponential;
    /// only for tiny oracles.
    fn enumerate_span(m: &ZmodMatrix) -> BTreeSet<Vec<u64>> {
        let n = m.ring().modulus();
        let rows = m.rows();
        let mut out = BTreeSet::new();
        let total = n.pow(rows as u32);
        for mut code in 0..total {
            let mut coeffs = vec![0u64; rows];
            for slot in coeffs.iter_mut() {
                *slot = code % n;
                code /= n;
            }
            out.insert(m.left_apply(&coeffs).unwrap());
        }
        out
    }

    fn random_matrix(rng: &mut ChaCha8Rng, ring: ResidueRing, rows: usize, cols: usize) -> ZmodMatrix {
        let mut m = ZmodMatrix::zeros(ring, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rng.gen_range(0..ring.modulus()));
            }
        }
        m
    }

    #[test]
    fn residue_ring_rejects_bad_parameters() {
        assert!(ResidueRing::new(6, 2).is_err());
        assert!(ResidueRing::new(3, 0).is_err());
        assert!(ResidueRing::new(3, 64).is_err());
        assert!(ResidueRing::new(2, 5).is_ok());
    }

    #[test]
    fn unit_inverse_round_trips() {
        let r = ring(3, 4);
        for x in 1..r.modulus() {
            if r.is_unit(x) {
                assert_eq!(r.mul(x, r.inv_unit(x).unwrap()), 1);
            } else {
                assert!(r.inv_unit(x).is_err());
            }
        }
    }

    #[test]
    fn howell_of_triangular_example_is_fixed() {
        // Over Z/9 the matrix [[3,1],[0,3]] is already in Howell form:
        // pivots 3 = 3^1 at column 0 and 3 = 3^1 at column 1, and the entry
        // above the second pivot (1) is already reduced below it.
        let r = ring(3, 2);
        let m = ZmodMatrix::from_rows(r, 2, &[vec![3, 1], vec![0, 3]]).unwrap();
        let h = howell(&m);
        assert_eq!(h.matrix(), &m);
        assert_eq!(h.pivot_cols(), &[0, 1]);
    }

    #[test]
    fn howell_of_identity_is_identity() {
        let r = ring(5, 2);
        let id = ZmodMatrix::identity(r, 2);
        assert_eq!(howell(&id).matrix(), &id);
    }

    #[test]
    fn unit_scaling_spans_equal() {
        // (2,0) spans the same line as (1,0) over Z/9 because 2 is a unit.
        let r = ring(3, 2);
        let a = ZmodMatrix::from_rows(r, 2, &[vec![1, 0]]).unwrap();
        let b = ZmodMatrix::from_rows(r, 2, &[vec![2, 0]]).unwrap();
        assert!(span_eq(&a, &b).unwrap());
    }

    #[test]
    fn kernel_of_multiplication_by_three_mod_nine() {
        let r = ring(3, 2);
        let m = ZmodMatrix::from_rows(r, 1, &[vec![3]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.row_vecs(), vec![vec![3]]);
    }

    #[test]
    fn span_eq_errors_on_column_mismatch() {
        let r = ring(3, 2);
        let a = ZmodMatrix::zeros(r, 1, 2);
        let b = ZmodMatrix::zeros(r, 1, 3);
        assert!(matches!(span_eq(&a, &b), Err(Error::ColumnMismatch { .. })));
    }

    #[test]
    fn exhaustive_agreement_on_small_rings() {
        // Oracle: explicit span enumeration for p^M <= 27 and cols <= 3.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        let rings = [ring(2, 2), ring(3, 2), ring(5, 1), ring(3, 3), ring(2, 3)];
        for &r in &rings {
            for _ in 0..6 {
                let rows = rng.gen_range(1..=3);
                let cols = rng.gen_range(1..=3);
                let m = random_matrix(&mut rng, r, rows, cols);
                let span = enumerate_span(&m);
                let h = howell(&m);

                // The Howell form spans exactly the same set.
                assert_eq!(enumerate_span(h.matrix()), span);

                // span_contains agrees with membership pointwise.
                let mut probe = vec![0u64; cols];
                loop {
                    assert_eq!(
                        span_contains(&h, &probe).unwrap(),
                        span.contains(&probe),
                        "membership mismatch for {probe:?}"
                    );
                    let mut i = 0;
                    while i < cols {
                        probe[i] += 1;
                        if probe[i] < r.modulus() {
                            break;
                        }
                        probe[i] = 0;
                        i += 1;
                    }
                    if i == cols {
                        break;
                    }
                }

                // kernel_basis spans exactly the brute-force kernel.
                let kernel_span = enumerate_span(&kernel_basis(&m).matrix().clone());
                let n = r.modulus();
                let total = n.pow(rows as u32);
                let mut brute = BTreeSet::new();
                for mut code in 0..total {
                    let mut x = vec![0u64; rows];
                    for slot in x.iter_mut() {
                        *slot = code % n;
                        code /= n;
                    }
                    if m.left_apply(&x).unwrap().iter().all(|&t| t == 0) {
                        brute.insert(x);
                    }
                }
                assert_eq!(kernel_span, brute);

                // span_eq against an independently shuffled generator set.
                let doubled = m.stack(&m).unwrap();
                assert!(span_eq(&m, &doubled).unwrap());
            }
        }
    }

    #[test]
    fn solve_left_finds_witnesses_exactly_for_span_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for &r in &[ring(3, 2), ring(2, 3), ring(5, 1)] {
            for _ in 0..8 {
                let rows = rng.gen_range(1..=3);
                let cols = rng.gen_range(1..=3);
                let m = random_matrix(&mut rng, r, rows, cols);
                let span = enumerate_span(&m);
                for target in span.iter().take(20) {
                    let x = solve_left(&m, target).unwrap().expect("member must be solvable");
                    assert_eq!(&m.left_apply(&x).unwrap(), target);
                }
                let h = howell(&m);
                for _ in 0..10 {
                    let probe: Vec<u64> =
                        (0..cols).map(|_| rng.gen_range(0..r.modulus())).collect();
                    let solvable = solve_left(&m, &probe).unwrap().is_some();
                    assert_eq!(solvable, span_contains(&h, &probe).unwrap());
                }
            }
        }
    }

    /// Applies a random invertible row operation sequence.
    fn unimodular_shuffle(rng: &mut ChaCha8Rng, m: &ZmodMatrix) -> ZmodMatrix {
        let mut rows = m.row_vecs();
        let r = m.ring();
        if rows.is_empty() {
            return m.clone();
        }
        for _ in 0..30 {
            match rng.gen_range(0..3) {
                0 => {
                    let i = rng.gen_range(0..rows.len());
                    let j = rng.gen_range(0..rows.len());
                    rows.swap(i, j);
                }
                1 => {
                    let i = rng.gen_range(0..rows.len());
                    let j = rng.gen_range(0..rows.len());
                    if i != j {
                        let c = rng.gen_range(0..r.modulus());
                        for k in 0..m.cols() {
                            let t = r.mul(c, rows[j][k]);
                            rows[i][k] = r.add(rows[i][k], t);
                        }
                    }
                }
                _ => {
                    let i = rng.gen_range(0..rows.len());
                    let u = loop {
                        let u = rng.gen_range(1..r.modulus());
                        if r.is_unit(u) {
                            break u;
                        }
                    };
                    for k in 0..m.cols() {
                        rows[i][k] = r.mul(rows[i][k], u);
                    }
                }
            }
        }
        ZmodMatrix::from_rows(r, m.cols(), &rows).unwrap()
    }

    #[test]
    fn howell_form_is_canonical_under_row_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
        for &r in &[ring(3, 3), ring(2, 4), ring(7, 2)] {
            for _ in 0..25 {
                let rows = rng.gen_range(1..=5);
                let cols = rng.gen_range(1..=5);
                let m = random_matrix(&mut rng, r, rows, cols);
                let h = howell(&m);
                let shuffled = unimodular_shuffle(&mut rng, &m);
                assert_eq!(howell(&shuffled), h, "canonical form changed under row ops");
                // Idempotence.
                assert_eq!(howell(h.matrix()), h);
            }
        }
    }

    #[test]
    fn span_eq_matches_mutual_containment() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
        let r = ring(3, 3);
        for _ in 0..40 {
            let (ra, rb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let a = random_matrix(&mut rng, r, ra, 4);
            let b = random_matrix(&mut rng, r, rb, 4);
            let ha = howell(&a);
            let hb = howell(&b);
            let a_in_b = (0..a.rows()).all(|i| span_contains(&hb, a.row(i)).unwrap());
            let b_in_a = (0..b.rows()).all(|i| span_contains(&ha, b.row(i)).unwrap());
            assert_eq!(span_eq(&a, &b).unwrap(), a_in_b && b_in_a);
        }
    }

    #[test]
    fn kernel_rows_annihilate_the_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
        for &r in &[ring(3, 3), ring(2, 4), ring(5, 2)] {
            for _ in 0..25 {
                let (rows, cols) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
                let m = random_matrix(&mut rng, r, rows, cols);
                let k = kernel_basis(&m);
                for i in 0..k.rows() {
                    let img = m.left_apply(k.matrix().row(i)).unwrap();
                    assert!(img.iter().all(|&x| x == 0));
                }
            }
        }
    }

    #[test]
    fn howell_handles_degenerate_shapes() {
        let r = ring(3, 2);
        let empty = ZmodMatrix::zeros(r, 0, 3);
        assert!(howell(&empty).is_zero());
        let zero = ZmodMatrix::zeros(r, 2, 3);
        assert!(howell(&zero).is_zero());
        let no_cols = ZmodMatrix::zeros(r, 2, 0);
        assert_eq!(howell(&no_cols).rows(), 0);
        assert!(span_contains(&howell(&zero), &[0, 0, 0]).unwrap());
        assert!(!span_contains(&howell(&zero), &[1, 0, 0]).unwrap());
    }
}
