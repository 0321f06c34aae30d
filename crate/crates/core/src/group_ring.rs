//! The group ring (Z/p^M)[G] for a finite abelian G, its ideals in canonical
//! form, and the handful of structural maps the rest of the crate leans on:
//! norm elements, augmentation generators, pushforwards along quotient maps,
//! unit lifting, and minus-quotient comparisons.
//!
//! An ideal is stored as the Howell form of its coefficient span in
//! (Z/p^M)^|G|; since the Howell form is canonical per span, ideal equality is
//! literal equality of the stored matrices.  A fractional ideal is a pair
//! (integral ideal, denominator element); in the truncated ring a denominator
//! is often a zero divisor even when its inverse-limit counterpart is regular,
//! so fractional comparisons report whether they are exact or only projected.

use num::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::zmod_linalg::{
    self, HowellForm, ResidueRing, SpanBuilder, ZmodMatrix,
};

/// A finite abelian group presented as a direct product of cyclic factors
/// Z/d_1 x ... x Z/d_k with every d_i >= 2 (an empty list is the trivial
/// group).
///
/// Elements are enumerated in mixed-radix lexicographic order: the first
/// coordinate is the most significant digit, so index 0 is the identity and
/// the last factor varies fastest.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

/// Residues of one element, componentwise reduced; produced and consumed by a
/// specific [`FiniteAbelianGroup`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement(pub Vec<u64>);

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = orders.iter().find(|&&d| d < 2) {
            return Err(Error::BadCyclicOrder(bad));
        }
        let mut size = 1u64;
        for &d in &orders {
            size = size.checked_mul(d).ok_or(Error::BadCyclicOrder(d))?;
        }
        Ok(FiniteAbelianGroup { orders })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: Vec::new() }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.orders.len()])
    }

    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement> {
        if residues.len() != self.orders.len() {
            return Err(Error::LengthMismatch {
                got: residues.len(),
                expected: self.orders.len(),
            });
        }
        for (&r, &d) in residues.iter().zip(&self.orders) {
            if r >= d {
                return Err(Error::ResidueOutOfRange { value: r, order: d });
            }
        }
        Ok(GroupElement(residues))
    }

    /// The i-th standard generator (1 in coordinate i).
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut r = vec![0; self.orders.len()];
        r[i] = 1;
        GroupElement(r)
    }

    pub fn index_of(&self, el: &GroupElement) -> usize {
        debug_assert_eq!(el.0.len(), self.orders.len());
        let mut idx = 0usize;
        for (&r, &d) in el.0.iter().zip(&self.orders) {
            idx = idx * d as usize + r as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut residues = vec![0u64; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            let d = self.orders[i] as usize;
            residues[i] = (idx % d) as u64;
            idx /= d;
        }
        debug_assert_eq!(idx, 0, "index out of range");
        GroupElement(residues)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.size() as usize).map(move |i| self.element_at(i))
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        GroupElement(a.0.iter().zip(&self.orders).map(|(&x, &d)| (d - x) % d).collect())
    }

    pub fn pow(&self, a: &GroupElement, e: u64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &d)| (x as u128 * e as u128 % d as u128) as u64)
                .collect(),
        )
    }

    pub fn order_of(&self, a: &GroupElement) -> u64 {
        let mut ord = 1u64;
        for (&x, &d) in a.0.iter().zip(&self.orders) {
            let o = d / gcd(d, x);
            ord = ord / gcd(ord, o) * o;
        }
        ord
    }

    /// Sorted indices of the subgroup generated by `gens` (closure under the
    /// group law).
    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Vec<usize> {
        let size = self.size() as usize;
        let mut seen = vec![false; size];
        seen[self.index_of(&self.identity())] = true;
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.mul(&x, g);
                let idx = self.index_of(&y);
                if !seen[idx] {
                    seen[idx] = true;
                    frontier.push(y);
                }
            }
        }
        (0..size).filter(|&i| seen[i]).collect()
    }

    /// The direct product G x H, factors of `self` first.
    pub fn direct_product(&self, other: &FiniteAbelianGroup) -> FiniteAbelianGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        FiniteAbelianGroup { orders }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A homomorphism between finite abelian groups, given by the images of the
/// standard factor generators of the source.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    images: Vec<GroupElement>,
}

impl GroupHom {
    pub fn new(
        source: FiniteAbelianGroup,
        target: FiniteAbelianGroup,
        images: Vec<GroupElement>,
    ) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::LengthMismatch { got: images.len(), expected: source.rank() });
        }
        for (i, img) in images.iter().enumerate() {
            if img.0.len() != target.rank() {
                return Err(Error::GroupMismatch);
            }
            // Well-defined iff the image of each generator dies under the
            // generator's order.
            if target.pow(img, source.orders()[i]) != target.identity() {
                return Err(Error::NotAHomomorphism { index: i });
            }
        }
        Ok(GroupHom { source, target, images })
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn apply(&self, el: &GroupElement) -> GroupElement {
        let mut acc = self.target.identity();
        for (&e, img) in el.0.iter().zip(&self.images) {
            acc = self.target.mul(&acc, &self.target.pow(img, e));
        }
        acc
    }

    pub fn is_surjective(&self) -> bool {
        self.target.subgroup_generated(&self.images).len() as u64 == self.target.size()
    }

    /// Elements of the source mapping to the identity.
    pub fn kernel_elements(&self) -> Vec<GroupElement> {
        self.source
            .elements()
            .filter(|x| self.apply(x) == self.target.identity())
            .collect()
    }

    pub fn kernel_is_p_group(&self, p: u64) -> bool {
        let mut k = self.kernel_elements().len() as u64;
        while k % p == 0 {
            k /= p;
        }
        k == 1
    }
}

/// An element of (Z/p^M)[G], stored as the dense coefficient vector indexed by
/// the group's element enumeration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupRingElement {
    ring: ResidueRing,
    group: FiniteAbelianGroup,
    coeffs: Vec<u64>,
}

impl GroupRingElement {
    pub fn new(ring: ResidueRing, group: FiniteAbelianGroup, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() as u64 != group.size() {
            return Err(Error::LengthMismatch {
                got: coeffs.len(),
                expected: group.size() as usize,
            });
        }
        let coeffs = coeffs.into_iter().map(|c| c % ring.modulus()).collect();
        Ok(GroupRingElement { ring, group, coeffs })
    }

    pub fn zero(ring: ResidueRing, group: FiniteAbelianGroup) -> Self {
        let n = group.size() as usize;
        GroupRingElement { ring, group, coeffs: vec![0; n] }
    }

    pub fn one(ring: ResidueRing, group: FiniteAbelianGroup) -> Self {
        let mut x = Self::zero(ring, group);
        x.coeffs[0] = 1 % ring.modulus();
        x
    }

    pub fn from_group_element(
        ring: ResidueRing,
        group: FiniteAbelianGroup,
        g: &GroupElement,
    ) -> Self {
        let idx = group.index_of(g);
        let mut x = Self::zero(ring, group);
        x.coeffs[idx] = 1 % ring.modulus();
        x
    }

    /// g - 1 as a ring element.
    pub fn aug_generator(ring: ResidueRing, group: FiniteAbelianGroup, g: &GroupElement) -> Self {
        let mut x = Self::from_group_element(ring, group.clone(), g);
        let id = group.index_of(&group.identity());
        x.coeffs[id] = x.ring.sub(x.coeffs[id], 1);
        x
    }

    pub fn from_integer(ring: ResidueRing, group: FiniteAbelianGroup, n: i128) -> Self {
        let mut x = Self::zero(ring, group);
        x.coeffs[0] = ring.reduce(n);
        x
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: &GroupElement) -> u64 {
        self.coeffs[self.group.index_of(g)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Sum of coefficients, i.e. the image under G -> 1.
    pub fn augmentation(&self) -> u64 {
        self.coeffs.iter().fold(0, |acc, &c| self.ring.add(acc, c))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ring.add(a, b))
            .collect();
        Ok(GroupRingElement { ring: self.ring, group: self.group.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ring.sub(a, b))
            .collect();
        Ok(GroupRingElement { ring: self.ring, group: self.group.clone(), coeffs })
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.neg(a)).collect();
        GroupRingElement { ring: self.ring, group: self.group.clone(), coeffs }
    }

    pub fn scalar_mul(&self, c: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.mul(c, a)).collect();
        GroupRingElement { ring: self.ring, group: self.group.clone(), coeffs }
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.group.size() as usize;
        let elements: Vec<GroupElement> = self.group.elements().collect();
        let mut coeffs = vec![0u64; n];
        for i in 0..n {
            let a = self.coeffs[i];
            if a == 0 {
                continue;
            }
            for j in 0..n {
                let b = other.coeffs[j];
                if b == 0 {
                    continue;
                }
                let k = self.group.index_of(&self.group.mul(&elements[i], &elements[j]));
                coeffs[k] = self.ring.add(coeffs[k], self.ring.mul(a, b));
            }
        }
        Ok(GroupRingElement { ring: self.ring, group: self.group.clone(), coeffs })
    }

    /// Multiplication by a single group element: a coefficient permutation.
    pub fn mul_by_group_element(&self, g: &GroupElement) -> Self {
        let n = self.group.size() as usize;
        let mut coeffs = vec![0u64; n];
        for i in 0..n {
            if self.coeffs[i] == 0 {
                continue;
            }
            let k = self.group.index_of(&self.group.mul(&self.group.element_at(i), g));
            coeffs[k] = self.coeffs[i];
        }
        GroupRingElement { ring: self.ring, group: self.group.clone(), coeffs }
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.ring, self.group.clone());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The matrix of multiplication by `self` in the regular representation:
    /// row i holds the coefficients of g_i * self.
    pub fn mult_matrix(&self) -> ZmodMatrix {
        let n = self.group.size() as usize;
        let mut m = ZmodMatrix::zeros(self.ring, n, n);
        for i in 0..n {
            let row = self.mul_by_group_element(&self.group.element_at(i));
            for (c, &v) in row.coeffs.iter().enumerate() {
                m.set(i, c, v);
            }
        }
        m
    }

    /// Is `self` invertible?  Equivalent to invertibility of the regular
    /// representation over Z/p^M, decided by solving y * M_self = 1.
    pub fn is_unit(&self) -> bool {
        self.try_inverse().is_some()
    }

    pub fn try_inverse(&self) -> Option<GroupRingElement> {
        let m = self.mult_matrix();
        let one = Self::one(self.ring, self.group.clone());
        let sol = zmod_linalg::solve_left(&m, one.coeffs()).expect("dimensions match")?;
        let inv = GroupRingElement { ring: self.ring, group: self.group.clone(), coeffs: sol };
        debug_assert_eq!(inv.mul(self).unwrap(), one);
        Some(inv)
    }

    /// Does `self` kill a nonzero element?  In this finite ring every nonzero
    /// element is either a unit or a zero divisor, and zero itself counts as
    /// a zero divisor.
    pub fn is_zero_divisor(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        !zmod_linalg::kernel_basis(&self.mult_matrix()).is_zero()
    }
}

/// Sum over the subgroup generated by `gens`: the norm element N(<gens>).
pub fn norm_element(
    ring: ResidueRing,
    group: &FiniteAbelianGroup,
    gens: &[GroupElement],
) -> GroupRingElement {
    let mut x = GroupRingElement::zero(ring, group.clone());
    for idx in group.subgroup_generated(gens) {
        x.coeffs[idx] = 1 % ring.modulus();
    }
    x
}

/// Augmentation-ideal generators b - 1 for each listed element.
pub fn aug_ideal_gens(
    ring: ResidueRing,
    group: &FiniteAbelianGroup,
    gens: &[GroupElement],
) -> Vec<GroupRingElement> {
    gens.iter()
        .map(|g| GroupRingElement::aug_generator(ring, group.clone(), g))
        .collect()
}

/// An ideal of (Z/p^M)[G] in canonical form: the Howell normal form of its
/// coefficient span, which is closed under multiplication by every group
/// element (verified on the factor generators at construction).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdealCanonical {
    ring: ResidueRing,
    group: FiniteAbelianGroup,
    howell: HowellForm,
}

impl IdealCanonical {
    /// The ideal generated by the given elements: the span of every g * x.
    pub fn from_gens(
        ring: ResidueRing,
        group: &FiniteAbelianGroup,
        gens: &[GroupRingElement],
    ) -> Result<Self> {
        let n = group.size() as usize;
        let mut b = SpanBuilder::new(ring, n);
        for x in gens {
            if x.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if x.group() != group {
                return Err(Error::GroupMismatch);
            }
            for g in group.elements() {
                b.push(x.mul_by_group_element(&g).coeffs().to_vec());
            }
        }
        Self::from_howell(ring, group.clone(), b.finish())
    }

    /// Wraps an existing span after verifying G-closure.
    pub fn from_howell(
        ring: ResidueRing,
        group: FiniteAbelianGroup,
        howell: HowellForm,
    ) -> Result<Self> {
        if howell.cols() as u64 != group.size() {
            return Err(Error::ColumnMismatch {
                left: howell.cols(),
                right: group.size() as usize,
            });
        }
        // Closure under the factor generators implies closure under all of G,
        // because multiplication by a fixed element is Z/p^M-linear.
        for f in 0..group.rank() {
            let g = group.generator(f);
            for r in 0..howell.rows() {
                let row = GroupRingElement {
                    ring,
                    group: group.clone(),
                    coeffs: howell.matrix().row(r).to_vec(),
                };
                let moved = row.mul_by_group_element(&g);
                if !zmod_linalg::span_contains(&howell, moved.coeffs())? {
                    return Err(Error::NotAnIdeal);
                }
            }
        }
        Ok(IdealCanonical { ring, group, howell })
    }

    pub fn zero(ring: ResidueRing, group: FiniteAbelianGroup) -> Self {
        let n = group.size() as usize;
        let h = zmod_linalg::howell(&ZmodMatrix::zeros(ring, 0, n));
        IdealCanonical { ring, group, howell: h }
    }

    pub fn unit(ring: ResidueRing, group: FiniteAbelianGroup) -> Self {
        let one = GroupRingElement::one(ring, group.clone());
        Self::from_gens(ring, &group, &[one]).expect("unit ideal is an ideal")
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn howell(&self) -> &HowellForm {
        &self.howell
    }

    /// The Howell rows, read back as ring elements.
    pub fn generators(&self) -> Vec<GroupRingElement> {
        (0..self.howell.rows())
            .map(|r| GroupRingElement {
                ring: self.ring,
                group: self.group.clone(),
                coeffs: self.howell.matrix().row(r).to_vec(),
            })
            .collect()
    }

    pub fn contains(&self, x: &GroupRingElement) -> Result<bool> {
        if x.ring() != self.ring {
            return Err(Error::RingMismatch);
        }
        if x.group() != &self.group {
            return Err(Error::GroupMismatch);
        }
        zmod_linalg::span_contains(&self.howell, x.coeffs())
    }

    pub fn contains_ideal(&self, other: &IdealCanonical) -> Result<bool> {
        self.check_compatible(other)?;
        for r in 0..other.howell.rows() {
            if !zmod_linalg::span_contains(&self.howell, other.howell.matrix().row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.contains(&GroupRingElement::one(self.ring, self.group.clone()))
            .expect("same ring and group")
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.howell.is_zero()
    }

    fn check_compatible(&self, other: &IdealCanonical) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    /// Canonical-form equality, which by Howell uniqueness is span equality.
    pub fn eq_ideal(&self, other: &IdealCanonical) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.howell == other.howell)
    }

    pub fn sum(&self, other: &IdealCanonical) -> Result<IdealCanonical> {
        self.check_compatible(other)?;
        let stacked = self.howell.matrix().stack(other.howell.matrix())?;
        Self::from_howell(self.ring, self.group.clone(), zmod_linalg::howell(&stacked))
    }

    /// Product ideal, generated by pairwise products of the Howell rows.  The
    /// result is already G-closed because each factor's span is.
    pub fn product(&self, other: &IdealCanonical) -> Result<IdealCanonical> {
        self.check_compatible(other)?;
        let n = self.group.size() as usize;
        let mut b = SpanBuilder::new(self.ring, n);
        let left = self.generators();
        let right = other.generators();
        for x in &left {
            for y in &right {
                b.push(x.mul(y)?.coeffs().to_vec());
            }
        }
        Self::from_howell(self.ring, self.group.clone(), b.finish())
    }

    pub fn power(&self, e: u32) -> Result<IdealCanonical> {
        let mut acc = Self::unit(self.ring, self.group.clone());
        for _ in 0..e {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// The ideal d * I.
    pub fn scale(&self, d: &GroupRingElement) -> Result<IdealCanonical> {
        if d.ring() != self.ring {
            return Err(Error::RingMismatch);
        }
        if d.group() != &self.group {
            return Err(Error::GroupMismatch);
        }
        let n = self.group.size() as usize;
        let mut b = SpanBuilder::new(self.ring, n);
        for x in self.generators() {
            b.push(x.mul(d)?.coeffs().to_vec());
        }
        Self::from_howell(self.ring, self.group.clone(), b.finish())
    }
}

/// Outcome of a fractional-ideal comparison.  `projected` marks comparisons
/// whose denominators are zero divisors at this truncation level: the
/// cross-multiplied equality is then a finite-level shadow of the statement
/// about the inverse limit, not a faithful equivalence.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FracEq {
    pub equal: bool,
    pub projected: bool,
}

/// A fractional ideal I / d with I integral and d a nonzero denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FractionalIdeal {
    numerator: IdealCanonical,
    denominator: GroupRingElement,
    denominator_is_zero_divisor: bool,
}

impl FractionalIdeal {
    pub fn new(numerator: IdealCanonical, denominator: GroupRingElement) -> Result<Self> {
        if denominator.ring() != numerator.ring() {
            return Err(Error::RingMismatch);
        }
        if denominator.group() != numerator.group() {
            return Err(Error::GroupMismatch);
        }
        if denominator.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let zd = denominator.is_zero_divisor();
        Ok(FractionalIdeal { numerator, denominator, denominator_is_zero_divisor: zd })
    }

    /// An integral ideal viewed fractionally (denominator 1).
    pub fn integral(ideal: IdealCanonical) -> Self {
        let one = GroupRingElement::one(ideal.ring(), ideal.group().clone());
        FractionalIdeal { numerator: ideal, denominator: one, denominator_is_zero_divisor: false }
    }

    pub fn numerator(&self) -> &IdealCanonical {
        &self.numerator
    }

    pub fn denominator(&self) -> &GroupRingElement {
        &self.denominator
    }

    pub fn denominator_is_zero_divisor(&self) -> bool {
        self.denominator_is_zero_divisor
    }

    /// Cross-multiplied comparison: d2 * I1 = d1 * I2.
    pub fn eq_fractional(&self, other: &FractionalIdeal) -> Result<FracEq> {
        let left = self.numerator.scale(&other.denominator)?;
        let right = other.numerator.scale(&self.denominator)?;
        Ok(FracEq {
            equal: left.eq_ideal(&right)?,
            projected: self.denominator_is_zero_divisor || other.denominator_is_zero_divisor,
        })
    }
}

/// Lifts a unit along the ring map induced by a surjective group homomorphism
/// with p-group kernel, by taking the coefficientwise preimage through a
/// fixed section and verifying the result is a unit.
///
/// The point is that for such surjections *any* coefficientwise preimage of a
/// unit is again a unit, so no search is needed; the final check turns a
/// violated hypothesis into an error instead of a wrong answer.
pub fn lift_unit(hom: &GroupHom, u: &GroupRingElement) -> Result<GroupRingElement> {
    if u.group() != hom.target() {
        return Err(Error::GroupMismatch);
    }
    if !hom.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let p = u.ring().p();
    if !hom.kernel_is_p_group(p) {
        return Err(Error::KernelNotPGroup { p });
    }
    if !u.is_unit() {
        return Err(Error::NotAUnit);
    }
    // Section: the first source element (in enumeration order) over each
    // target element.
    let target_size = hom.target().size() as usize;
    let mut section: Vec<Option<usize>> = vec![None; target_size];
    for (i, x) in hom.source().elements().enumerate() {
        let t = hom.target().index_of(&hom.apply(&x));
        if section[t].is_none() {
            section[t] = Some(i);
        }
    }
    let mut coeffs = vec![0u64; hom.source().size() as usize];
    for (t, &c) in u.coeffs().iter().enumerate() {
        if c != 0 {
            let s = section[t].expect("surjectivity was checked");
            coeffs[s] = c;
        }
    }
    let lifted = GroupRingElement::new(u.ring(), hom.source().clone(), coeffs)?;
    if !lifted.is_unit() {
        return Err(Error::LiftNotUnit);
    }
    Ok(lifted)
}

/// Pushes an element forward along a group homomorphism, summing coefficients
/// over fibers (the linear extension of g -> hom(g)).
pub fn restrict_element(hom: &GroupHom, x: &GroupRingElement) -> Result<GroupRingElement> {
    if x.group() != hom.source() {
        return Err(Error::GroupMismatch);
    }
    let mut out = GroupRingElement::zero(x.ring(), hom.target().clone());
    for (i, &c) in x.coeffs().iter().enumerate() {
        if c != 0 {
            let t = hom.target().index_of(&hom.apply(&hom.source().element_at(i)));
            out.coeffs[t] = x.ring().add(out.coeffs[t], c);
        }
    }
    Ok(out)
}

/// Pushes an ideal forward along a surjective group homomorphism: the ideal
/// generated by the images of the Howell rows.
pub fn restrict_ideal(hom: &GroupHom, ideal: &IdealCanonical) -> Result<IdealCanonical> {
    let gens: Vec<GroupRingElement> = ideal
        .generators()
        .iter()
        .map(|g| restrict_element(hom, g))
        .collect::<Result<_>>()?;
    IdealCanonical::from_gens(ideal.ring(), hom.target(), &gens)
}

/// Compares two ideals in the minus quotient R/(1+j), where j is the
/// designated order-2 element (complex conjugation).  Requires odd p, since
/// the plus/minus splitting needs 2 invertible.
pub fn minus_ideal_eq(
    i: &IdealCanonical,
    j: &IdealCanonical,
    conj: &GroupElement,
) -> Result<bool> {
    i.check_compatible(j)?;
    if i.ring().p() == 2 {
        return Err(Error::EvenPrime);
    }
    let group = i.group().clone();
    if group.order_of(conj) != 2 {
        return Err(Error::NotAnInvolution(format!("{conj:?}")));
    }
    // 1 + j generates the kernel of projection to the minus quotient.
    let one = GroupRingElement::one(i.ring(), group.clone());
    let one_plus_j = one.add(&GroupRingElement::from_group_element(i.ring(), group.clone(), conj))?;
    let plus_part = IdealCanonical::from_gens(i.ring(), &group, &[one_plus_j])?;
    let left = i.sum(&plus_part)?;
    let right = j.sum(&plus_part)?;
    left.eq_ideal(&right)
}

/// An element of Q[G] with exact rational coefficients.  Only element
/// arithmetic and pushforward are supported; this is the ambient space for
/// Stickelberger elements before integrality is established.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalGroupRingElement {
    group: FiniteAbelianGroup,
    coeffs: Vec<BigRational>,
}

impl RationalGroupRingElement {
    pub fn new(group: FiniteAbelianGroup, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() as u64 != group.size() {
            return Err(Error::LengthMismatch {
                got: coeffs.len(),
                expected: group.size() as usize,
            });
        }
        Ok(RationalGroupRingElement { group, coeffs })
    }

    pub fn zero(group: FiniteAbelianGroup) -> Self {
        let n = group.size() as usize;
        RationalGroupRingElement { group, coeffs: vec![BigRational::zero(); n] }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, g: &GroupElement) -> &BigRational {
        &self.coeffs[self.group.index_of(g)]
    }

    pub fn set_coeff(&mut self, g: &GroupElement, v: BigRational) {
        let idx = self.group.index_of(g);
        self.coeffs[idx] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(RationalGroupRingElement { group: self.group.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(RationalGroupRingElement { group: self.group.clone(), coeffs })
    }

    pub fn scalar_mul(&self, c: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        RationalGroupRingElement { group: self.group.clone(), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.group.size() as usize;
        let elements: Vec<GroupElement> = self.group.elements().collect();
        let mut coeffs = vec![BigRational::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let k = self.group.index_of(&self.group.mul(&elements[i], &elements[j]));
                let t = &self.coeffs[i] * &other.coeffs[j];
                coeffs[k] = &coeffs[k] + &t;
            }
        }
        Ok(RationalGroupRingElement { group: self.group.clone(), coeffs })
    }

    /// Pushforward along a group homomorphism (coefficient sums over fibers).
    pub fn restrict(&self, hom: &GroupHom) -> Result<RationalGroupRingElement> {
        if &self.group != hom.source() {
            return Err(Error::GroupMismatch);
        }
        let mut out = RationalGroupRingElement::zero(hom.target().clone());
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let t = hom.target().index_of(&hom.apply(&self.group.element_at(i)));
                out.coeffs[t] = &out.coeffs[t] + c;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u64, precision: u32) -> ResidueRing {
        ResidueRing::new(p, precision).unwrap()
    }

    fn z3() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![3]).unwrap()
    }

    fn random_element(
        rng: &mut ChaCha8Rng,
        r: ResidueRing,
        g: &FiniteAbelianGroup,
    ) -> GroupRingElement {
        let coeffs = (0..g.size()).map(|_| rng.gen_range(0..r.modulus())).collect();
        GroupRingElement::new(r, g.clone(), coeffs).unwrap()
    }

    #[test]
    fn enumeration_is_mixed_radix_lexicographic() {
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        let order: Vec<Vec<u64>> = g.elements().map(|e| e.0).collect();
        assert_eq!(
            order,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
        for (i, e) in g.elements().enumerate() {
            assert_eq!(g.index_of(&e), i);
        }
    }

    #[test]
    fn group_law_and_orders() {
        let g = FiniteAbelianGroup::new(vec![4, 6]).unwrap();
        let a = g.element(vec![2, 3]).unwrap();
        assert_eq!(g.order_of(&a), 2);
        let b = g.element(vec![1, 1]).unwrap();
        assert_eq!(g.order_of(&b), 12);
        assert_eq!(g.mul(&a, &g.inv(&a)), g.identity());
        assert_eq!(g.pow(&b, 12), g.identity());
        assert_eq!(g.subgroup_generated(&[b]).len(), 12);
        assert!(g.element(vec![4, 0]).is_err());
    }

    #[test]
    fn trivial_group_works() {
        let g = FiniteAbelianGroup::trivial();
        assert_eq!(g.size(), 1);
        let r = ring(3, 2);
        let one = GroupRingElement::one(r, g.clone());
        assert_eq!(one.mul(&one).unwrap(), one);
        assert!(one.is_unit());
    }

    #[test]
    fn product_of_one_plus_g_and_one_minus_g() {
        // (1+g)(1-g) = 1 - g^2 in (Z/9)[Z/3].
        let r = ring(3, 2);
        let g = z3();
        let gen = g.generator(0);
        let one = GroupRingElement::one(r, g.clone());
        let gel = GroupRingElement::from_group_element(r, g.clone(), &gen);
        let a = one.add(&gel).unwrap();
        let b = one.sub(&gel).unwrap();
        let g2 = GroupRingElement::from_group_element(r, g.clone(), &g.pow(&gen, 2));
        assert_eq!(a.mul(&b).unwrap(), one.sub(&g2).unwrap());
    }

    #[test]
    fn convolution_agrees_with_regular_representation() {
        // Oracle: x*y read off by applying the multiplication matrix of x to
        // the coefficient vector of y.
        let mut rng = ChaCha8Rng::seed_from_u64(0xabc1);
        let r = ring(3, 3);
        for orders in [vec![3], vec![2, 3], vec![3, 9]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            for _ in 0..10 {
                let x = random_element(&mut rng, r, &g);
                let y = random_element(&mut rng, r, &g);
                let via_matrix = x.mult_matrix().left_apply(y.coeffs()).unwrap();
                assert_eq!(x.mul(&y).unwrap().coeffs(), via_matrix.as_slice());
                // Commutativity while we are here.
                assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            }
        }
    }

    #[test]
    fn norm_element_of_diagonal_subgroup() {
        let r = ring(3, 2);
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let diag = g.element(vec![1, 1]).unwrap();
        let n = norm_element(r, &g, &[diag.clone()]);
        // 1 + g1g2: coefficient 1 at identity and at (1,1).
        assert_eq!(n.coeff(&g.identity()), 1);
        assert_eq!(n.coeff(&diag), 1);
        assert_eq!(n.augmentation(), 2);
        // N(H) * (h - 1) = 0 for h in H.
        let h_minus_1 = GroupRingElement::aug_generator(r, g.clone(), &diag);
        assert!(n.mul(&h_minus_1).unwrap().is_zero());
    }

    #[test]
    fn units_and_zero_divisors_are_complementary() {
        let r = ring(3, 2);
        let g = z3();
        let gen = g.generator(0);
        let one = GroupRingElement::one(r, g.clone());
        let gel = GroupRingElement::from_group_element(r, g.clone(), &gen);

        let u = one.add(&gel).unwrap(); // augmentation 2, a unit
        assert!(u.is_unit());
        assert!(!u.is_zero_divisor());
        let inv = u.try_inverse().unwrap();
        assert_eq!(u.mul(&inv).unwrap(), one);

        let z = one.sub(&gel).unwrap(); // g-1 kills the norm element
        assert!(!z.is_unit());
        assert!(z.is_zero_divisor());

        // Group elements are units with the obvious inverse.
        assert!(gel.is_unit());
        assert_eq!(
            gel.try_inverse().unwrap(),
            GroupRingElement::from_group_element(r, g.clone(), &g.pow(&gen, 2))
        );
    }

    #[test]
    fn every_nonzero_element_is_unit_or_zero_divisor() {
        // Exhaustive over (Z/4)[Z/2]: 16 elements.
        let r = ring(2, 2);
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let x = GroupRingElement::new(r, g.clone(), vec![a, b]).unwrap();
                if x.is_zero() {
                    assert!(x.is_zero_divisor());
                    continue;
                }
                assert_ne!(x.is_unit(), x.is_zero_divisor());
            }
        }
    }

    #[test]
    fn augmentation_ideal_is_proper_and_contains_expected_elements() {
        let r = ring(3, 2);
        let g = z3();
        let gen = g.generator(0);
        let gens = aug_ideal_gens(r, &g, &[gen.clone()]);
        let ideal = IdealCanonical::from_gens(r, &g, &gens).unwrap();
        // Contains g^2 - 1 = (g-1)(g+1).
        let sq = GroupRingElement::aug_generator(r, g.clone(), &g.pow(&gen, 2));
        assert!(ideal.contains(&sq).unwrap());
        assert!(!ideal.is_unit_ideal());
        // The norm element is not in the augmentation ideal (augmentation 3,
        // but the augmentation ideal also contains 3*(g-1), not 3 itself).
        let n = norm_element(r, &g, &[gen]);
        assert!(!ideal.contains(&n).unwrap());
    }

    #[test]
    fn non_closed_span_is_rejected() {
        let r = ring(3, 2);
        let g = z3();
        // span{1} without the orbit of g is not an ideal.
        let m = ZmodMatrix::from_rows(r, 3, &[vec![1, 0, 0]]).unwrap();
        let h = zmod_linalg::howell(&m);
        assert!(matches!(
            IdealCanonical::from_howell(r, g, h),
            Err(Error::NotAnIdeal)
        ));
    }

    #[test]
    fn ideal_sum_product_power_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xabc2);
        let r = ring(3, 2);
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        for _ in 0..6 {
            let x = random_element(&mut rng, r, &g);
            let y = random_element(&mut rng, r, &g);
            let ix = IdealCanonical::from_gens(r, &g, &[x.clone()]).unwrap();
            let iy = IdealCanonical::from_gens(r, &g, &[y.clone()]).unwrap();
            // Sum is the ideal generated by both elements.
            let both = IdealCanonical::from_gens(r, &g, &[x.clone(), y.clone()]).unwrap();
            assert!(ix.sum(&iy).unwrap().eq_ideal(&both).unwrap());
            // Product is generated by the single product element.
            let prod = IdealCanonical::from_gens(r, &g, &[x.mul(&y).unwrap()]).unwrap();
            assert!(ix.product(&iy).unwrap().eq_ideal(&prod).unwrap());
            // Square via power.
            assert!(ix
                .power(2)
                .unwrap()
                .eq_ideal(&ix.product(&ix).unwrap())
                .unwrap());
        }
    }

    #[test]
    fn ideal_power_zero_is_unit_ideal() {
        let r = ring(3, 2);
        let g = z3();
        let gen_el = GroupRingElement::aug_generator(r, g.clone(), &g.generator(0));
        let i = IdealCanonical::from_gens(r, &g, &[gen_el]).unwrap();
        assert!(i.power(0).unwrap().is_unit_ideal());
    }

    #[test]
    fn fractional_ideal_comparison_and_projection_flag() {
        let r = ring(3, 2);
        let g = z3();
        let gen = g.generator(0);
        let one = GroupRingElement::one(r, g.clone());
        let unit_ideal = IdealCanonical::unit(r, g.clone());

        // d regular (a unit here): I/d vs (d*I)/(d^2) must agree exactly.
        let d = one.add(&GroupRingElement::from_group_element(r, g.clone(), &gen)).unwrap();
        assert!(d.is_unit());
        let f1 = FractionalIdeal::new(unit_ideal.clone(), d.clone()).unwrap();
        let f2 = FractionalIdeal::new(
            unit_ideal.scale(&d).unwrap(),
            d.mul(&d).unwrap(),
        )
        .unwrap();
        let eq = f1.eq_fractional(&f2).unwrap();
        assert!(eq.equal);
        assert!(!eq.projected);

        // Zero-divisor denominator flips the projected flag.
        let z = GroupRingElement::aug_generator(r, g.clone(), &gen);
        let f3 = FractionalIdeal::new(unit_ideal.clone(), z.clone()).unwrap();
        let f4 = FractionalIdeal::new(
            unit_ideal.scale(&z).unwrap(),
            z.mul(&z).unwrap(),
        )
        .unwrap();
        let eq = f3.eq_fractional(&f4).unwrap();
        assert!(eq.equal);
        assert!(eq.projected);

        // Zero denominators are rejected outright.
        let zero = GroupRingElement::zero(r, g.clone());
        assert!(matches!(
            FractionalIdeal::new(unit_ideal, zero),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn lift_unit_along_p_group_quotients() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xabc3);
        let r = ring(3, 2);
        let z9 = FiniteAbelianGroup::new(vec![9]).unwrap();
        let z3g = z3();
        // Z/9 ->> Z/3, kernel Z/3.
        let hom = GroupHom::new(z9.clone(), z3g.clone(), vec![z3g.generator(0)]).unwrap();
        assert!(hom.is_surjective());
        assert!(hom.kernel_is_p_group(3));

        let mut lifted_count = 0;
        while lifted_count < 10 {
            let u = random_element(&mut rng, r, &z3g);
            if !u.is_unit() {
                continue;
            }
            lifted_count += 1;
            let lifted = lift_unit(&hom, &u).unwrap();
            assert!(lifted.is_unit());
            // The lift projects back onto u.
            assert_eq!(restrict_element(&hom, &lifted).unwrap(), u);
        }

        // Non-unit input is rejected.
        let z = GroupRingElement::aug_generator(r, z3g.clone(), &z3g.generator(0));
        assert!(matches!(lift_unit(&hom, &z), Err(Error::NotAUnit)));

        // Non-p-group kernel is rejected: Z/2 x Z/3 ->> Z/3.
        let z2z3 = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        let hom2 = GroupHom::new(
            z2z3,
            z3g.clone(),
            vec![z3g.identity(), z3g.generator(0)],
        )
        .unwrap();
        let one = GroupRingElement::one(r, z3g);
        assert!(matches!(lift_unit(&hom2, &one), Err(Error::KernelNotPGroup { p: 3 })));
    }

    #[test]
    fn restrict_element_sums_fibers() {
        let r = ring(3, 2);
        let z9 = FiniteAbelianGroup::new(vec![9]).unwrap();
        let z3g = z3();
        let hom = GroupHom::new(z9.clone(), z3g.clone(), vec![z3g.generator(0)]).unwrap();
        // x = sum of all gamma^i maps to 3 * (1 + g + g^2).
        let coeffs = vec![1u64; 9];
        let x = GroupRingElement::new(r, z9, coeffs).unwrap();
        let pushed = restrict_element(&hom, &x).unwrap();
        assert_eq!(pushed.coeffs(), &[3, 3, 3]);
    }

    #[test]
    fn restrict_ideal_is_generated_by_pushed_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xabc4);
        let r = ring(3, 2);
        let z9 = FiniteAbelianGroup::new(vec![9]).unwrap();
        let z3g = z3();
        let hom = GroupHom::new(z9.clone(), z3g.clone(), vec![z3g.generator(0)]).unwrap();
        for _ in 0..5 {
            let x = random_element(&mut rng, r, &z9);
            let ideal = IdealCanonical::from_gens(r, &z9, &[x.clone()]).unwrap();
            let pushed = restrict_ideal(&hom, &ideal).unwrap();
            let direct = IdealCanonical::from_gens(
                r,
                &z3g,
                &[restrict_element(&hom, &x).unwrap()],
            )
            .unwrap();
            // Pushing the whole span can only enlarge the ideal generated by
            // the pushed generator, never shrink it.
            assert!(pushed.contains_ideal(&direct).unwrap());
        }
    }

    #[test]
    fn minus_quotient_comparison() {
        // G = <j> of order 2 over Z/9: the ideals (1-j) and (2, 1-j) agree
        // mod (1+j) because 2 = (1-j) + (1+j).
        let r = ring(3, 2);
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let j = g.generator(0);
        let one_minus_j = GroupRingElement::aug_generator(r, g.clone(), &j).neg();
        let two = GroupRingElement::from_integer(r, g.clone(), 2);
        let i1 = IdealCanonical::from_gens(r, &g, &[one_minus_j.clone()]).unwrap();
        let i2 = IdealCanonical::from_gens(r, &g, &[two, one_minus_j]).unwrap();
        assert!(!i1.eq_ideal(&i2).unwrap());
        assert!(minus_ideal_eq(&i1, &i2, &j).unwrap());

        // Identity is not an involution.
        assert!(matches!(
            minus_ideal_eq(&i1, &i2, &g.identity()),
            Err(Error::NotAnInvolution(_))
        ));

        // p = 2 is rejected.
        let r2 = ring(2, 3);
        let i3 = IdealCanonical::unit(r2, g.clone());
        assert!(matches!(minus_ideal_eq(&i3, &i3, &j), Err(Error::EvenPrime)));
    }

    #[test]
    fn rational_elements_do_exact_arithmetic() {
        use num::BigInt;
        let g = z3();
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let mut x = RationalGroupRingElement::zero(g.clone());
        x.set_coeff(&g.identity(), third.clone());
        x.set_coeff(&g.generator(0), -&third);
        let y = x.add(&x).unwrap();
        assert_eq!(
            y.coeff(&g.identity()),
            &BigRational::new(BigInt::from(2), BigInt::from(3))
        );
        // (1/3 - 1/3 g) * 3 = 1 - g.
        let z = x.scalar_mul(&BigRational::from_integer(BigInt::from(3)));
        assert_eq!(z.coeff(&g.identity()), &BigRational::from_integer(BigInt::from(1)));
        // Convolution: (1 - g)(1 + g + g^2) = 0.
        let mut norm = RationalGroupRingElement::zero(g.clone());
        for e in g.elements() {
            norm.set_coeff(&e, BigRational::from_integer(BigInt::from(1)));
        }
        assert!(z.mul(&norm).unwrap().is_zero());
    }

    #[test]
    fn mismatched_contexts_error() {
        let r = ring(3, 2);
        let r2 = ring(3, 3);
        let g = z3();
        let g2 = FiniteAbelianGroup::new(vec![2]).unwrap();
        let a = GroupRingElement::one(r, g.clone());
        let b = GroupRingElement::one(r2, g.clone());
        let c = GroupRingElement::one(r, g2);
        assert!(matches!(a.mul(&b), Err(Error::RingMismatch)));
        assert!(matches!(a.mul(&c), Err(Error::GroupMismatch)));
    }
}
