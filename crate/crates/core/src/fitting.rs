//! Module presentations over group rings, their Fitting ideals, and the
//! explicit finite-level resolutions behind the shifted Fitting ideal of the
//! module cut out by a decomposition subgroup.
//!
//! The pieces fit together like this.  A [`DecompositionModel`] describes a
//! subgroup of G x Z_p at two truncation levels n < m: an ambient torsion
//! group, chosen torsion generators g_1, ..., g_{r-1}, and a distinguished
//! element y = (g, gamma^t) whose image spans the procyclic direction.
//! [`build_A_Q`] turns the model into concrete matrices: the presentation
//! A_r = (alpha_1 e_1 | ... | alpha_r e_r | Q_r) over the level-n ring, built
//! from the norms alpha_i and augmentation generators beta_i = g_i - 1, and
//! its lift over the level-m ring where the products no longer vanish but
//! equal gamma^{p^n} - 1.  Three independent routes then compute the same
//! degree-one shifted Fitting ideal: [`shifted_fitt1_gkk`] assembles graded
//! minor ideals of the lift, [`shifted_fitt1_from_rminors`] uses a closed
//! generating family for the maximal minors, and [`intrinsic_ideal`]
//! enumerates direct-product decompositions A x B of the modeled group
//! without ever writing down a matrix.  Their agreement is the main
//! cross-check exercised by the test suite.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::combinatorics::{combinations, subsets, weak_compositions};
use crate::error::{Error, Result};
use crate::group_ring::{
    aug_ideal_gens, norm_element, restrict_ideal, FiniteAbelianGroup, FractionalIdeal,
    GroupElement, GroupHom, GroupRingElement, IdealCanonical,
};
use crate::poly_symbolic::SparsePoly;
use crate::zmod_linalg::{HowellForm, ResidueRing, SpanBuilder, ZmodMatrix};

/// A rectangular matrix with entries in (Z/p^M)[G], stored row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrMatrix {
    ring: ResidueRing,
    group: FiniteAbelianGroup,
    nrows: usize,
    ncols: usize,
    entries: Vec<GroupRingElement>,
}

impl GrMatrix {
    pub fn zeros(
        ring: ResidueRing,
        group: FiniteAbelianGroup,
        nrows: usize,
        ncols: usize,
    ) -> Self {
        let entries = vec![GroupRingElement::zero(ring, group.clone()); nrows * ncols];
        GrMatrix { ring, group, nrows, ncols, entries }
    }

    pub fn from_entries(
        ring: ResidueRing,
        group: FiniteAbelianGroup,
        nrows: usize,
        ncols: usize,
        entries: Vec<GroupRingElement>,
    ) -> Result<Self> {
        if entries.len() != nrows * ncols {
            return Err(Error::LengthMismatch { got: entries.len(), expected: nrows * ncols });
        }
        for e in &entries {
            if e.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if e.group() != &group {
                return Err(Error::GroupMismatch);
            }
        }
        Ok(GrMatrix { ring, group, nrows, ncols, entries })
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> &GroupRingElement {
        assert!(r < self.nrows && c < self.ncols);
        &self.entries[r * self.ncols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GroupRingElement) {
        assert!(r < self.nrows && c < self.ncols);
        assert!(v.ring() == self.ring && v.group() == &self.group);
        self.entries[r * self.ncols + c] = v;
    }

    pub fn transpose(&self) -> GrMatrix {
        let mut out = GrMatrix::zeros(self.ring, self.group.clone(), self.ncols, self.nrows);
        for r in 0..self.nrows {
            for c in 0..self.ncols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<GroupRingElement> {
        (0..self.nrows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Determinant of the submatrix on the given rows and columns, by Laplace
    /// expansion with memoization on the set of consumed columns.  No
    /// division: entries may be zero divisors.
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> Result<GroupRingElement> {
        if rows.len() != cols.len() {
            return Err(Error::NotSquare { rows: rows.len(), cols: cols.len() });
        }
        assert!(cols.len() <= 64, "minor size limited by the column bitmask");
        let mut memo: HashMap<u64, GroupRingElement> = HashMap::new();
        self.expand_minor(rows, cols, 0, &mut memo)
    }

    fn expand_minor(
        &self,
        rows: &[usize],
        cols: &[usize],
        used: u64,
        memo: &mut HashMap<u64, GroupRingElement>,
    ) -> Result<GroupRingElement> {
        let depth = used.count_ones() as usize;
        if depth == rows.len() {
            return Ok(GroupRingElement::one(self.ring, self.group.clone()));
        }
        if let Some(hit) = memo.get(&used) {
            return Ok(hit.clone());
        }
        let r = rows[depth];
        let mut acc = GroupRingElement::zero(self.ring, self.group.clone());
        let mut pos = 0usize; // position of the column among those still free
        for (j, &c) in cols.iter().enumerate() {
            if used & (1 << j) != 0 {
                continue;
            }
            let e = self.get(r, c);
            if !e.is_zero() {
                let sub = self.expand_minor(rows, cols, used | (1 << j), memo)?;
                let term = e.mul(&sub)?;
                acc = if pos % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            pos += 1;
        }
        memo.insert(used, acc.clone());
        Ok(acc)
    }

    /// All k x k minors, ordered lexicographically by (row subset, column
    /// subset).  The empty minor is the single element 1.
    pub fn minors(&self, k: usize) -> Result<Vec<GroupRingElement>> {
        if k > self.nrows.min(self.ncols) {
            return Err(Error::InvalidInput(format!(
                "minor size {k} exceeds a {}x{} matrix",
                self.nrows, self.ncols
            )));
        }
        let mut out = Vec::new();
        for rows in combinations(self.nrows, k) {
            for cols in combinations(self.ncols, k) {
                out.push(self.minor_det(&rows, &cols)?);
            }
        }
        Ok(out)
    }
}

/// A finite presentation of a module: the generators index the rows and each
/// column is one relation among them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    matrix: GrMatrix,
}

impl Presentation {
    pub fn new(matrix: GrMatrix) -> Result<Self> {
        if matrix.nrows() == 0 {
            return Err(Error::InvalidInput(
                "a presentation needs at least one module generator".into(),
            ));
        }
        Ok(Presentation { matrix })
    }

    pub fn matrix(&self) -> &GrMatrix {
        &self.matrix
    }

    /// Number of module generators.
    pub fn target_rank(&self) -> usize {
        self.matrix.nrows()
    }
}

/// The e-th Fitting ideal: the ideal of (a - e)-minors of the relation
/// matrix, where a is the number of generators.  Unit ideal once e >= a, zero
/// ideal while a - e exceeds the number of relations.
pub fn fitt(pres: &Presentation, e: usize) -> Result<IdealCanonical> {
    let a = pres.target_rank();
    let ring = pres.matrix().ring();
    let group = pres.matrix().group().clone();
    if e >= a {
        return Ok(IdealCanonical::unit(ring, group));
    }
    let k = a - e;
    if k > pres.matrix().ncols() {
        return Ok(IdealCanonical::zero(ring, group));
    }
    IdealCanonical::from_gens(ring, &group, &pres.matrix().minors(k)?)
}

/// Presents the transpose module; only quadratic (square) presentations are
/// supported, and their Fitting ideals are unchanged because minors are
/// transpose-invariant.
pub fn transpose_presentation(pres: &Presentation) -> Result<Presentation> {
    let m = pres.matrix();
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Presentation::new(m.transpose())
}

/// The ideal generated by the k x k minors of a matrix: unit ideal for k = 0,
/// zero ideal when k exceeds the dimensions.
pub fn minor_ideal(mat: &GrMatrix, k: usize) -> Result<IdealCanonical> {
    if k > mat.nrows().min(mat.ncols()) {
        return Ok(IdealCanonical::zero(mat.ring(), mat.group().clone()));
    }
    IdealCanonical::from_gens(mat.ring(), mat.group(), &mat.minors(k)?)
}

/// Evaluates an integer polynomial at group-ring arguments, one per variable;
/// the bridge from generic symbolic identities to a concrete resolution.
pub fn specialize_poly(
    poly: &SparsePoly,
    args: &[GroupRingElement],
) -> Result<GroupRingElement> {
    if args.is_empty() {
        return Err(Error::InvalidInput(
            "specialization needs at least one argument to fix the target ring".into(),
        ));
    }
    if poly.nvars() != args.len() {
        return Err(Error::LengthMismatch { got: args.len(), expected: poly.nvars() });
    }
    let ring = args[0].ring();
    let group = args[0].group().clone();
    let mut acc = GroupRingElement::zero(ring, group.clone());
    for (exps, c) in poly.terms() {
        let mut term = GroupRingElement::from_integer(ring, group.clone(), c as i128);
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                term = term.mul(&args[i].pow(e as u32)?)?;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

fn augmentation_form_element(b: &GroupRingElement) -> Result<GroupElement> {
    // b must be g - 1: adding 1 leaves the indicator vector of a single g.
    let one = GroupRingElement::one(b.ring(), b.group().clone());
    let s = b.add(&one)?;
    let mut found = None;
    for (i, &c) in s.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c != 1 || found.is_some() {
            return Err(Error::NotAugmentationForm);
        }
        found = Some(i);
    }
    found
        .map(|i| b.group().element_at(i))
        .ok_or(Error::NotAugmentationForm)
}

/// Generators of the kernel of (y_1, ..., y_k) -> sum y_i * beta_i, for
/// beta_i = g_i - 1 with <g_1> x ... x <g_k> an internal direct product: the
/// norm vectors alpha_i e_i followed by the cross relations
/// q_{i,j} = -beta_j e_i + beta_i e_j in lexicographic (i, j) order.
pub fn kernel_generators(betas: &[GroupRingElement]) -> Result<Vec<Vec<GroupRingElement>>> {
    if betas.is_empty() {
        return Ok(Vec::new());
    }
    let ring = betas[0].ring();
    let group = betas[0].group().clone();
    let k = betas.len();
    let mut gens = Vec::with_capacity(k);
    for b in betas {
        if b.ring() != ring {
            return Err(Error::RingMismatch);
        }
        if b.group() != &group {
            return Err(Error::GroupMismatch);
        }
        gens.push(augmentation_form_element(b)?);
    }
    let expected: u64 = gens.iter().map(|g| group.order_of(g)).product();
    let actual = group.subgroup_generated(&gens).len() as u64;
    if actual != expected {
        return Err(Error::NotDirectProduct { actual, expected });
    }
    let zero = GroupRingElement::zero(ring, group.clone());
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let mut v = vec![zero.clone(); k];
        v[i] = norm_element(ring, &group, std::slice::from_ref(g));
        out.push(v);
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let mut v = vec![zero.clone(); k];
            v[i] = betas[j].neg();
            v[j] = betas[i].clone();
            out.push(v);
        }
    }
    Ok(out)
}

/// Howell form of the scalar span of the module vectors together with all
/// their group translates, flattened to rows of length rank * |G| (block i
/// holds coordinate i).
pub fn module_span(
    ring: ResidueRing,
    group: &FiniteAbelianGroup,
    rank: usize,
    vectors: &[Vec<GroupRingElement>],
) -> Result<HowellForm> {
    let n = group.size() as usize;
    let mut b = SpanBuilder::new(ring, rank * n);
    for v in vectors {
        if v.len() != rank {
            return Err(Error::LengthMismatch { got: v.len(), expected: rank });
        }
        for x in v {
            if x.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if x.group() != group {
                return Err(Error::GroupMismatch);
            }
        }
        for g in group.elements() {
            let mut row = Vec::with_capacity(rank * n);
            for x in v {
                row.extend_from_slice(x.mul_by_group_element(&g).coeffs());
            }
            b.push(row);
        }
    }
    Ok(b.finish())
}

/// The scalar matrix of (y_1, ..., y_k) -> sum y_i * b_i with respect to the
/// bases {g e_i} of R^k and {h} of R; feeding it to `kernel_basis` gives the
/// brute-force kernel the resolution is checked against.
pub fn row_map_matrix(
    ring: ResidueRing,
    group: &FiniteAbelianGroup,
    elements: &[GroupRingElement],
) -> Result<ZmodMatrix> {
    let n = group.size() as usize;
    let mut rows = Vec::with_capacity(elements.len() * n);
    for x in elements {
        if x.ring() != ring {
            return Err(Error::RingMismatch);
        }
        if x.group() != group {
            return Err(Error::GroupMismatch);
        }
        for g in group.elements() {
            rows.push(x.mul_by_group_element(&g).coeffs().to_vec());
        }
    }
    ZmodMatrix::from_rows(ring, n, &rows)
}

/// A finite-level stand-in for a decomposition subgroup of G x Z_p: torsion
/// generators g_1, ..., g_{r-1} in an ambient torsion group, plus the
/// distinguished element y = (g, gamma^t), truncated at levels n < m.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecompositionModel {
    torsion_ambient: FiniteAbelianGroup,
    torsion_gens: Vec<GroupElement>,
    y_torsion: GroupElement,
    gamma_exponent: u64,
    p: u64,
    precision: u32,
    level_m: u32,
    level_n: u32,
}

/// Upper bound on |G| * p^m; models are meant to stay desk-sized.
const MAX_MODEL_SIZE: u64 = 1 << 20;

impl DecompositionModel {
    pub fn new(
        torsion_ambient: FiniteAbelianGroup,
        torsion_gens: Vec<GroupElement>,
        y_torsion: GroupElement,
        gamma_exponent: u64,
        p: u64,
        precision: u32,
        level_m: u32,
        level_n: u32,
    ) -> Result<Self> {
        ResidueRing::new(p, precision)?;
        if level_n < 1 || level_n >= level_m {
            return Err(Error::BadModel(format!(
                "levels must satisfy 1 <= n < m, got n = {level_n}, m = {level_m}"
            )));
        }
        let pm = (p as u128).pow(level_m);
        if pm > 1 << 31 {
            return Err(Error::BadModel(format!("p^m = {p}^{level_m} is too large")));
        }
        let y_torsion = torsion_ambient.element(y_torsion.0)?;
        let torsion_gens = torsion_gens
            .into_iter()
            .map(|g| torsion_ambient.element(g.0))
            .collect::<Result<Vec<_>>>()?;
        let strip = |mut v: u64| {
            while v % p == 0 {
                v /= p;
            }
            v
        };
        let y_order = torsion_ambient.order_of(&y_torsion);
        if strip(y_order) != 1 {
            return Err(Error::BadModel(format!(
                "the torsion part of y has order {y_order}, not a power of p = {p}"
            )));
        }
        if gamma_exponent == 0 || strip(gamma_exponent) != 1 {
            return Err(Error::BadModel(format!(
                "gamma exponent t = {gamma_exponent} is not a power of p = {p}"
            )));
        }
        // The resolution identity y^d = gamma^{p^n} needs <y> to reach
        // gamma^{p^n}, which pins down the smallest usable level n.
        let reach = gamma_exponent as u128 * y_order as u128;
        if reach > (p as u128).pow(level_n) {
            return Err(Error::BadModel(format!(
                "level n = {level_n} too small: t * ord(g) = {reach} exceeds p^n"
            )));
        }
        if torsion_ambient.size() as u128 * pm > MAX_MODEL_SIZE as u128 {
            return Err(Error::BadModel(format!(
                "|G| * p^m = {} exceeds the size bound {MAX_MODEL_SIZE}",
                torsion_ambient.size() as u128 * pm
            )));
        }
        let model = DecompositionModel {
            torsion_ambient,
            torsion_gens,
            y_torsion,
            gamma_exponent,
            p,
            precision,
            level_m,
            level_n,
        };
        // The modeled subgroup must be the internal direct product
        // <g_1> x ... x <g_{r-1}> x <y> inside G x Z/p^m.
        let gm = model.group_at_level(level_m);
        let mut gens: Vec<GroupElement> =
            (0..model.torsion_gens.len()).map(|i| model.torsion_gen_at(i, level_m)).collect();
        gens.push(model.y_at(level_m));
        let expected: u64 = gens.iter().map(|g| gm.order_of(g)).product();
        let actual = gm.subgroup_generated(&gens).len() as u64;
        if actual != expected {
            return Err(Error::NotDirectProduct { actual, expected });
        }
        Ok(model)
    }

    /// Number of designated generators, torsion ones plus y itself.
    pub fn r(&self) -> usize {
        self.torsion_gens.len() + 1
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn level_m(&self) -> u32 {
        self.level_m
    }

    pub fn level_n(&self) -> u32 {
        self.level_n
    }

    pub fn torsion_ambient(&self) -> &FiniteAbelianGroup {
        &self.torsion_ambient
    }

    pub fn torsion_gens(&self) -> &[GroupElement] {
        &self.torsion_gens
    }

    pub fn gamma_exponent(&self) -> u64 {
        self.gamma_exponent
    }

    pub fn ring(&self) -> ResidueRing {
        ResidueRing::new(self.p, self.precision).expect("validated at construction")
    }

    /// G x Z/p^level, the torsion factors first.
    pub fn group_at_level(&self, level: u32) -> FiniteAbelianGroup {
        let mut orders = self.torsion_ambient.orders().to_vec();
        orders.push(self.p.pow(level));
        FiniteAbelianGroup::new(orders).expect("orders validated at construction")
    }

    /// The generator of the Z/p^level factor.
    pub fn gamma_at(&self, _level: u32) -> GroupElement {
        let mut r = vec![0; self.torsion_ambient.rank() + 1];
        r[self.torsion_ambient.rank()] = 1;
        GroupElement(r)
    }

    /// y = (g, gamma^t) truncated at the given level.
    pub fn y_at(&self, level: u32) -> GroupElement {
        let mut r = self.y_torsion.0.clone();
        r.push(self.gamma_exponent % self.p.pow(level));
        GroupElement(r)
    }

    /// The i-th torsion generator embedded at the given level.
    pub fn torsion_gen_at(&self, i: usize, _level: u32) -> GroupElement {
        let mut r = self.torsion_gens[i].0.clone();
        r.push(0);
        GroupElement(r)
    }

    /// The truncation homomorphism between two levels (higher to lower).
    pub fn projection(&self, from: u32, to: u32) -> Result<GroupHom> {
        if to > from {
            return Err(Error::InvalidInput(
                "projection must go from a higher level to a lower one".into(),
            ));
        }
        let source = self.group_at_level(from);
        let target = self.group_at_level(to);
        let mut images: Vec<GroupElement> =
            (0..self.torsion_ambient.rank()).map(|i| target.generator(i)).collect();
        images.push(target.generator(self.torsion_ambient.rank()));
        GroupHom::new(source, target, images)
    }

    /// The same model data at different truncation levels.
    pub fn at_levels(&self, level_n: u32, level_m: u32) -> Result<DecompositionModel> {
        DecompositionModel::new(
            self.torsion_ambient.clone(),
            self.torsion_gens.clone(),
            self.y_torsion.clone(),
            self.gamma_exponent,
            self.p,
            self.precision,
            level_m,
            level_n,
        )
    }

    /// The same model with a different coefficient precision.
    pub fn with_precision(&self, precision: u32) -> Result<DecompositionModel> {
        DecompositionModel::new(
            self.torsion_ambient.clone(),
            self.torsion_gens.clone(),
            self.y_torsion.clone(),
            self.gamma_exponent,
            self.p,
            precision,
            self.level_m,
            self.level_n,
        )
    }
}

/// The concrete resolution attached to a model: norms and augmentation
/// generators at level n, their lifts at level m, and the presentation
/// matrices built from them.
#[derive(Clone, Debug)]
pub struct ResolutionData {
    model: DecompositionModel,
    ring: ResidueRing,
    group_low: FiniteAbelianGroup,
    group_high: FiniteAbelianGroup,
    alphas: Vec<GroupRingElement>,
    betas: Vec<GroupRingElement>,
    lifted_alphas: Vec<GroupRingElement>,
    lifted_betas: Vec<GroupRingElement>,
    a_low: GrMatrix,
    q_low: GrMatrix,
    a_high: GrMatrix,
    cyclic_order: u64,
    gamma_power_minus_one: GroupRingElement,
}

impl ResolutionData {
    pub fn model(&self) -> &DecompositionModel {
        &self.model
    }

    pub fn r(&self) -> usize {
        self.model.r()
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn group_low(&self) -> &FiniteAbelianGroup {
        &self.group_low
    }

    pub fn group_high(&self) -> &FiniteAbelianGroup {
        &self.group_high
    }

    pub fn alphas(&self) -> &[GroupRingElement] {
        &self.alphas
    }

    pub fn betas(&self) -> &[GroupRingElement] {
        &self.betas
    }

    pub fn lifted_alphas(&self) -> &[GroupRingElement] {
        &self.lifted_alphas
    }

    pub fn lifted_betas(&self) -> &[GroupRingElement] {
        &self.lifted_betas
    }

    /// The level-n presentation matrix (alpha_1 e_1 | ... | alpha_r e_r | Q_r).
    pub fn a_low(&self) -> &GrMatrix {
        &self.a_low
    }

    /// The cross-relation block Q_r alone, at level n.
    pub fn q_low(&self) -> &GrMatrix {
        &self.q_low
    }

    /// The lifted matrix over the level-m ring.
    pub fn a_high(&self) -> &GrMatrix {
        &self.a_high
    }

    /// Order d of the image of y at level n; the lift of alpha_r is the
    /// partial geometric sum 1 + y + ... + y^{d-1}.
    pub fn cyclic_order(&self) -> u64 {
        self.cyclic_order
    }

    /// gamma^{p^n} - 1 in the level-m ring: the one nonvanishing lifted
    /// product, and the denominator of the shifted Fitting ideal.
    pub fn gamma_power_minus_one(&self) -> &GroupRingElement {
        &self.gamma_power_minus_one
    }
}

fn presentation_matrix(
    ring: ResidueRing,
    group: &FiniteAbelianGroup,
    alphas: &[GroupRingElement],
    betas: &[GroupRingElement],
) -> GrMatrix {
    let r = alphas.len();
    let npairs = r * (r - 1) / 2;
    let mut m = GrMatrix::zeros(ring, group.clone(), r, r + npairs);
    for (i, a) in alphas.iter().enumerate() {
        m.set(i, i, a.clone());
    }
    let mut c = r;
    for i in 0..r {
        for j in (i + 1)..r {
            m.set(i, c, betas[j].neg());
            m.set(j, c, betas[i].clone());
            c += 1;
        }
    }
    m
}

fn relation_block(
    ring: ResidueRing,
    group: &FiniteAbelianGroup,
    betas: &[GroupRingElement],
) -> GrMatrix {
    let r = betas.len();
    let npairs = r * (r - 1) / 2;
    let mut m = GrMatrix::zeros(ring, group.clone(), r, npairs);
    let mut c = 0;
    for i in 0..r {
        for j in (i + 1)..r {
            m.set(i, c, betas[j].neg());
            m.set(j, c, betas[i].clone());
            c += 1;
        }
    }
    m
}

/// Builds the resolution data for a model: alphas, betas, and the matrices at
/// level n, plus their lifts at level m.  Fails if y^d does not reach
/// gamma^{p^n} at the high level, where d is the order of y's image at level
/// n — that identity is what makes the lift products collapse correctly.
#[allow(non_snake_case)]
pub fn build_A_Q(model: &DecompositionModel) -> Result<ResolutionData> {
    let ring = model.ring();
    let r = model.r();
    let group_low = model.group_at_level(model.level_n());
    let group_high = model.group_at_level(model.level_m());
    let y_low = model.y_at(model.level_n());
    let y_high = model.y_at(model.level_m());
    let d = group_low.order_of(&y_low);
    let pn = model.p().pow(model.level_n());
    let gamma_pn = group_high.pow(&model.gamma_at(model.level_m()), pn);
    if group_high.pow(&y_high, d) != gamma_pn {
        return Err(Error::BadModel(
            "y^d does not reach gamma^{p^n} at the high level".into(),
        ));
    }

    let mut alphas = Vec::with_capacity(r);
    let mut betas = Vec::with_capacity(r);
    let mut lifted_alphas = Vec::with_capacity(r);
    let mut lifted_betas = Vec::with_capacity(r);
    for i in 0..(r - 1) {
        let g_low = model.torsion_gen_at(i, model.level_n());
        let g_high = model.torsion_gen_at(i, model.level_m());
        alphas.push(norm_element(ring, &group_low, std::slice::from_ref(&g_low)));
        betas.push(GroupRingElement::aug_generator(ring, group_low.clone(), &g_low));
        lifted_alphas.push(norm_element(ring, &group_high, std::slice::from_ref(&g_high)));
        lifted_betas.push(GroupRingElement::aug_generator(ring, group_high.clone(), &g_high));
    }
    alphas.push(norm_element(ring, &group_low, std::slice::from_ref(&y_low)));
    betas.push(GroupRingElement::aug_generator(ring, group_low.clone(), &y_low));
    // The last lift is the partial geometric sum up to d, not the norm of
    // <y> at level m (whose order is larger).
    let mut tail = GroupRingElement::zero(ring, group_high.clone());
    for j in 0..d {
        let el = group_high.pow(&y_high, j);
        tail = tail.add(&GroupRingElement::from_group_element(ring, group_high.clone(), &el))?;
    }
    lifted_alphas.push(tail);
    lifted_betas.push(GroupRingElement::aug_generator(ring, group_high.clone(), &y_high));

    let gamma_power_minus_one =
        GroupRingElement::aug_generator(ring, group_high.clone(), &gamma_pn);

    #[cfg(debug_assertions)]
    {
        for i in 0..r {
            debug_assert!(
                alphas[i].mul(&betas[i]).unwrap().is_zero(),
                "norm times augmentation generator must vanish at the low level"
            );
        }
        for i in 0..(r - 1) {
            debug_assert!(
                lifted_alphas[i].mul(&lifted_betas[i]).unwrap().is_zero(),
                "torsion lifts keep vanishing products"
            );
        }
        debug_assert_eq!(
            lifted_alphas[r - 1].mul(&lifted_betas[r - 1]).unwrap(),
            gamma_power_minus_one,
            "the last lifted product telescopes to gamma^{{p^n}} - 1"
        );
    }

    let a_low = presentation_matrix(ring, &group_low, &alphas, &betas);
    let q_low = relation_block(ring, &group_low, &betas);
    let a_high = presentation_matrix(ring, &group_high, &lifted_alphas, &lifted_betas);

    Ok(ResolutionData {
        model: model.clone(),
        ring,
        group_low,
        group_high,
        alphas,
        betas,
        lifted_alphas,
        lifted_betas,
        a_low,
        q_low,
        a_high,
        cyclic_order: d,
        gamma_power_minus_one,
    })
}

/// The degree-one shifted Fitting ideal from the graded minor assembly: with
/// w = gamma^{p^n} - 1, the fractional ideal
/// (1/w) * sum_{e=0}^{r} w^{r-e} * Min_e(A~), cleared to the single
/// denominator w.
pub fn shifted_fitt1_gkk(res: &ResolutionData) -> Result<FractionalIdeal> {
    let r = res.r();
    let w = res.gamma_power_minus_one();
    let mut numerator = IdealCanonical::zero(res.ring(), res.group_high().clone());
    for e in 0..=r {
        let weighted = minor_ideal(res.a_high(), e)?.scale(&w.pow((r - e) as u32)?)?;
        numerator = numerator.sum(&weighted)?;
    }
    FractionalIdeal::new(numerator, w.clone())
}

/// The closed generating family for the maximal minors of A~: the full
/// product of the lifted alphas, together with
/// alpha~_r beta~_r^{t_r} * prod_{i in L} alpha~_i * prod_{i not in L}
/// beta~_i^{t_i} over proper subsets L of {1, ..., r-1}, with t_r >= 1 and
/// total exponent degree r - |L| - 1.
pub fn rminor_generators_explicit(res: &ResolutionData) -> Result<Vec<GroupRingElement>> {
    let r = res.r();
    let la = res.lifted_alphas();
    let lb = res.lifted_betas();
    let mut full = GroupRingElement::one(res.ring(), res.group_high().clone());
    for a in la {
        full = full.mul(a)?;
    }
    let mut gens = vec![full];
    for l in subsets(r - 1) {
        if l.len() == r - 1 {
            continue; // proper subsets only
        }
        let lc: Vec<usize> = (0..r - 1).filter(|i| !l.contains(i)).collect();
        let spare = (r - l.len() - 2) as u64; // exponent mass beyond t_r = 1
        for comp in weak_compositions(spare, lc.len() + 1) {
            let t_last = (comp[lc.len()] + 1) as u32;
            let mut g = la[r - 1].mul(&lb[r - 1].pow(t_last)?)?;
            for &i in &l {
                g = g.mul(&la[i])?;
            }
            for (slot, &i) in lc.iter().enumerate() {
                if comp[slot] > 0 {
                    g = g.mul(&lb[i].pow(comp[slot] as u32)?)?;
                }
            }
            gens.push(g);
        }
    }
    Ok(gens)
}

/// The ideal generated by [`rminor_generators_explicit`]; equals the ideal of
/// r x r minors of A~.
pub fn rminor_ideal_explicit(res: &ResolutionData) -> Result<IdealCanonical> {
    IdealCanonical::from_gens(res.ring(), res.group_high(), &rminor_generators_explicit(res)?)
}

/// The shifted Fitting ideal assembled from the explicit maximal-minor
/// family over the same minimal denominator w = gamma^{p^n} - 1.  The lower
/// graded pieces w^{r-e} Min_e are already contained in the maximal-minor
/// ideal, so this is a genuinely independent route to the same fractional
/// ideal.
pub fn shifted_fitt1_from_rminors(res: &ResolutionData) -> Result<FractionalIdeal> {
    FractionalIdeal::new(rminor_ideal_explicit(res)?, res.gamma_power_minus_one().clone())
}

/// All subgroups of the subgroup whose (sorted) element indices are
/// `carrier`, each returned as sorted indices; deterministic order (by size,
/// then lexicographic).
fn enumerate_subgroups(group: &FiniteAbelianGroup, carrier: &[usize]) -> Vec<Vec<usize>> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    let trivial = vec![group.index_of(&group.identity())];
    seen.insert(trivial.clone());
    queue.push_back(trivial);
    while let Some(s) = queue.pop_front() {
        for &x in carrier {
            if s.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens: Vec<GroupElement> = s.iter().map(|&i| group.element_at(i)).collect();
            gens.push(group.element_at(x));
            let bigger = group.subgroup_generated(&gens);
            if seen.insert(bigger.clone()) {
                queue.push_back(bigger);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Size of the image of the element set under projection onto the last
/// (procyclic) factor; the image of a subgroup is a subgroup, so counting
/// distinct residues suffices.
fn gamma_image_size(group: &FiniteAbelianGroup, carrier: &[usize]) -> usize {
    let k = group.rank() - 1;
    let mut seen = BTreeSet::new();
    for &i in carrier {
        seen.insert(group.element_at(i).0[k]);
    }
    seen.len()
}

fn trivial_intersection(a: &[usize], b: &[usize]) -> bool {
    let mut common = 0usize;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    common == 1 // both contain the identity
}

/// Minimal number of generators of the subgroup on `carrier`, read off the
/// invariant factors: the maximum over primes q of the q-rank, where the
/// q-rank counts how many factors of q the q-torsion kernel carries.
fn invariant_rank(group: &FiniteAbelianGroup, carrier: &[usize]) -> u32 {
    let size = carrier.len() as u64;
    let identity = group.identity();
    let mut rank = 0u32;
    let mut rest = size;
    let mut q = 2u64;
    while q * q <= rest {
        if rest % q == 0 {
            while rest % q == 0 {
                rest /= q;
            }
            rank = rank.max(q_rank(group, carrier, q, &identity));
        }
        q += 1;
    }
    if rest > 1 {
        rank = rank.max(q_rank(group, carrier, rest, &identity));
    }
    rank
}

fn q_rank(group: &FiniteAbelianGroup, carrier: &[usize], q: u64, identity: &GroupElement) -> u32 {
    let killed = carrier
        .iter()
        .filter(|&&i| group.pow(&group.element_at(i), q) == *identity)
        .count() as u64;
    let mut r = 0u32;
    let mut v = killed;
    while v % q == 0 {
        v /= q;
        r += 1;
    }
    r
}

/// Smallest-first greedy generating set for the subgroup on `carrier`;
/// deterministic, at most log2 |carrier| elements.
fn small_generating_set(group: &FiniteAbelianGroup, carrier: &[usize]) -> Vec<GroupElement> {
    let mut gens: Vec<GroupElement> = Vec::new();
    let mut cur = vec![group.index_of(&group.identity())];
    while cur.len() < carrier.len() {
        let next = carrier
            .iter()
            .find(|&&i| cur.binary_search(&i).is_err())
            .expect("carrier strictly contains the current closure");
        gens.push(group.element_at(*next));
        cur = group.subgroup_generated(&gens);
    }
    gens
}

fn norm_from_indices(
    ring: ResidueRing,
    group: &FiniteAbelianGroup,
    carrier: &[usize],
) -> GroupRingElement {
    let mut coeffs = vec![0u64; group.size() as usize];
    for &i in carrier {
        coeffs[i] = 1;
    }
    GroupRingElement::new(ring, group.clone(), coeffs).expect("indices are in range")
}

/// The shifted Fitting ideal computed intrinsically, with no matrix at all:
/// over every internal direct-product decomposition A x B of the modeled
/// subgroup at level m — A inside the designated torsion part, B with full
/// image in the procyclic direction — the decomposition contributes
/// N(A) * (augmentation ideal of B)^{r_B - 2}, where r_B is the minimal
/// generator count of B.  Decompositions with cyclic B (r_B = 1) contribute
/// the fractional generator N(A)/(b - 1) for the first generating element b;
/// everything is cleared to the product of those denominators.
pub fn intrinsic_ideal(model: &DecompositionModel, bound: u64) -> Result<FractionalIdeal> {
    let ring = model.ring();
    let level = model.level_m();
    let gh = model.group_at_level(level);
    let r = model.r();
    let tgens: Vec<GroupElement> = (0..r - 1).map(|i| model.torsion_gen_at(i, level)).collect();
    let torsion_carrier = gh.subgroup_generated(&tgens);
    if torsion_carrier.len() as u64 > bound {
        return Err(Error::EnumerationBound { order: torsion_carrier.len() as u64, bound });
    }
    let mut vgens = tgens;
    vgens.push(model.y_at(level));
    let v_carrier = gh.subgroup_generated(&vgens);
    let v_size = v_carrier.len();
    let gamma_full = gamma_image_size(&gh, &v_carrier);

    let a_subgroups = enumerate_subgroups(&gh, &torsion_carrier);
    let b_subgroups = enumerate_subgroups(&gh, &v_carrier);

    // One entry per decomposition: numerator generators and, for cyclic B,
    // the denominator b - 1.
    let mut parts: Vec<(Vec<GroupRingElement>, Option<GroupRingElement>)> = Vec::new();
    for a in &a_subgroups {
        for b in &b_subgroups {
            if a.len() * b.len() != v_size {
                continue;
            }
            if !trivial_intersection(a, b) {
                continue;
            }
            if gamma_image_size(&gh, b) != gamma_full {
                continue;
            }
            let na = norm_from_indices(ring, &gh, a);
            let rb = invariant_rank(&gh, b);
            if rb >= 2 {
                let bgens = small_generating_set(&gh, b);
                let delta =
                    IdealCanonical::from_gens(ring, &gh, &aug_ideal_gens(ring, &gh, &bgens))?;
                let power = delta.power(rb - 2)?;
                let gens = power
                    .generators()
                    .iter()
                    .map(|x| x.mul(&na))
                    .collect::<Result<Vec<_>>>()?;
                parts.push((gens, None));
            } else {
                let b0 = b
                    .iter()
                    .map(|&i| gh.element_at(i))
                    .find(|x| gh.order_of(x) == b.len() as u64)
                    .expect("a subgroup of invariant rank 1 is cyclic");
                let denom = GroupRingElement::aug_generator(ring, gh.clone(), &b0);
                parts.push((vec![na], Some(denom)));
            }
        }
    }

    let denominators: Vec<GroupRingElement> =
        parts.iter().filter_map(|(_, d)| d.clone()).collect();
    let mut total = GroupRingElement::one(ring, gh.clone());
    for d in &denominators {
        total = total.mul(d)?;
    }
    let mut gens = Vec::new();
    let mut cursor = 0usize;
    for (part_gens, d) in &parts {
        // Clear this part to the common denominator: multiply by every
        // denominator except its own.
        let mut scale = GroupRingElement::one(ring, gh.clone());
        for (j, dj) in denominators.iter().enumerate() {
            if d.is_some() && j == cursor {
                continue;
            }
            scale = scale.mul(dj)?;
        }
        if d.is_some() {
            cursor += 1;
        }
        for g in part_gens {
            gens.push(g.mul(&scale)?);
        }
    }
    let numerator = IdealCanonical::from_gens(ring, &gh, &gens)?;
    FractionalIdeal::new(numerator, total)
}

/// Checks that the graded minor ideals of the resolution at the higher level
/// push down (coefficient-fiber summation) to exactly the corresponding
/// ideals at the lower level, along with the relation ideal of the beta map.
/// Levels are Gamma-truncation levels; the model is rebuilt at (low, high).
pub fn tower_fitt_compat(
    model: &DecompositionModel,
    level_low: u32,
    level_high: u32,
) -> Result<bool> {
    if level_low == level_high {
        return Ok(true);
    }
    if level_low > level_high {
        return Err(Error::InvalidInput("tower levels must be increasing".into()));
    }
    let res = build_A_Q(&model.at_levels(level_low, level_high)?)?;
    let proj = res.model().projection(level_high, level_low)?;
    for e in 0..=res.r() {
        let high = minor_ideal(res.a_high(), e)?;
        let low = minor_ideal(res.a_low(), e)?;
        if !restrict_ideal(&proj, &high)?.eq_ideal(&low)? {
            return Ok(false);
        }
    }
    let high0 = IdealCanonical::from_gens(res.ring(), res.group_high(), res.lifted_betas())?;
    let low0 = IdealCanonical::from_gens(res.ring(), res.group_low(), res.betas())?;
    if !restrict_ideal(&proj, &high0)?.eq_ideal(&low0)? {
        return Ok(false);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::default_catalog;
    use crate::group_ring::restrict_element;
    use crate::poly_symbolic::generic_a;
    use crate::zmod_linalg;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u64, m: u32) -> ResidueRing {
        ResidueRing::new(p, m).unwrap()
    }

    fn rand_element(
        rng: &mut ChaCha8Rng,
        r: ResidueRing,
        g: &FiniteAbelianGroup,
    ) -> GroupRingElement {
        let coeffs = (0..g.size()).map(|_| rng.gen_range(0..r.modulus())).collect();
        GroupRingElement::new(r, g.clone(), coeffs).unwrap()
    }

    /// Signed permutation list, built by inserting the largest symbol in all
    /// positions; an insertion k places from the right flips parity k times.
    fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, bool)> {
        let mut perms = vec![(Vec::new(), true)];
        for k in 0..n {
            let mut next = Vec::new();
            for (p, sign) in perms {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    let flip = (p.len() - pos) % 2 == 1;
                    next.push((q, sign ^ flip));
                }
            }
            perms = next;
        }
        perms
    }

    fn leibniz_det(m: &GrMatrix, rows: &[usize], cols: &[usize]) -> GroupRingElement {
        let mut acc = GroupRingElement::zero(m.ring(), m.group().clone());
        for (perm, positive) in permutations_with_sign(rows.len()) {
            let mut term = GroupRingElement::one(m.ring(), m.group().clone());
            for (i, &pi) in perm.iter().enumerate() {
                term = term.mul(m.get(rows[i], cols[pi])).unwrap();
            }
            acc = if positive { acc.add(&term).unwrap() } else { acc.sub(&term).unwrap() };
        }
        acc
    }

    #[test]
    fn minors_match_leibniz_oracle() {
        // Q_3 from the r = 3 catalog model: all 3x3 minors, which happen to
        // vanish, and every 2x2 minor, which mostly do not.
        let cat = default_catalog(2).unwrap();
        let res = build_A_Q(&cat.last().unwrap().model).unwrap();
        assert_eq!(res.r(), 3);
        let q = res.q_low();
        assert_eq!((q.nrows(), q.ncols()), (3, 3));
        for rows in combinations(3, 3) {
            for cols in combinations(3, 3) {
                let direct = q.minor_det(&rows, &cols).unwrap();
                assert_eq!(direct, leibniz_det(q, &rows, &cols));
                assert!(direct.is_zero(), "maximal minors of the relation block vanish");
            }
        }
        let a = res.a_low();
        for rows in combinations(a.nrows(), 2) {
            for cols in combinations(a.ncols(), 2) {
                assert_eq!(a.minor_det(&rows, &cols).unwrap(), leibniz_det(a, &rows, &cols));
            }
        }
        // Random matrices over a mixed group, against the same oracle.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r9 = ring(3, 2);
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        for _ in 0..5 {
            let entries = (0..9).map(|_| rand_element(&mut rng, r9, &g)).collect();
            let m = GrMatrix::from_entries(r9, g.clone(), 3, 3, entries).unwrap();
            let rows = [0, 1, 2];
            assert_eq!(m.minor_det(&rows, &rows).unwrap(), leibniz_det(&m, &rows, &rows));
        }
    }

    #[test]
    fn minors_edge_cases() {
        let r9 = ring(3, 2);
        let g = FiniteAbelianGroup::new(vec![3]).unwrap();
        let x = GroupRingElement::aug_generator(r9, g.clone(), &g.generator(0));
        let y = GroupRingElement::from_integer(r9, g.clone(), 2);
        let zero = GroupRingElement::zero(r9, g.clone());
        let diag = GrMatrix::from_entries(
            r9,
            g.clone(),
            2,
            2,
            vec![x.clone(), zero.clone(), zero.clone(), y.clone()],
        )
        .unwrap();
        let one = GroupRingElement::one(r9, g.clone());
        assert_eq!(diag.minors(0).unwrap(), vec![one]);
        assert_eq!(diag.minors(2).unwrap(), vec![x.mul(&y).unwrap()]);
        assert_eq!(diag.minors(1).unwrap().len(), 4);
        assert!(diag.minors(3).is_err());
        assert!(diag.minor_det(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn fitt_of_small_presentations() {
        let r3 = ring(3, 1);
        let g = FiniteAbelianGroup::new(vec![3]).unwrap();
        let b = GroupRingElement::aug_generator(r3, g.clone(), &g.generator(0));
        let pres = Presentation::new(
            GrMatrix::from_entries(r3, g.clone(), 1, 1, vec![b.clone()]).unwrap(),
        )
        .unwrap();
        let f0 = fitt(&pres, 0).unwrap();
        assert!(f0.eq_ideal(&IdealCanonical::from_gens(r3, &g, &[b.clone()]).unwrap()).unwrap());
        assert!(fitt(&pres, 1).unwrap().is_unit_ideal());
        assert!(fitt(&pres, 7).unwrap().is_unit_ideal());

        // diag(x, y): Fitt_0 = (xy), Fitt_1 = (x, y).
        let r9 = ring(3, 2);
        let h = FiniteAbelianGroup::new(vec![3]).unwrap();
        let x = GroupRingElement::aug_generator(r9, h.clone(), &h.generator(0));
        let y = GroupRingElement::from_integer(r9, h.clone(), 3);
        let zero = GroupRingElement::zero(r9, h.clone());
        let diag = Presentation::new(
            GrMatrix::from_entries(
                r9,
                h.clone(),
                2,
                2,
                vec![x.clone(), zero.clone(), zero.clone(), y.clone()],
            )
            .unwrap(),
        )
        .unwrap();
        let f0 = fitt(&diag, 0).unwrap();
        assert!(f0
            .eq_ideal(&IdealCanonical::from_gens(r9, &h, &[x.mul(&y).unwrap()]).unwrap())
            .unwrap());
        let f1 = fitt(&diag, 1).unwrap();
        assert!(f1
            .eq_ideal(&IdealCanonical::from_gens(r9, &h, &[x.clone(), y.clone()]).unwrap())
            .unwrap());

        // No relations at all: everything below the generator count is zero.
        let free = Presentation::new(GrMatrix::zeros(r9, h.clone(), 2, 0)).unwrap();
        assert!(fitt(&free, 0).unwrap().is_zero_ideal());
        assert!(fitt(&free, 1).unwrap().is_zero_ideal());
        assert!(fitt(&free, 2).unwrap().is_unit_ideal());

        assert!(Presentation::new(GrMatrix::zeros(r9, h, 0, 0)).is_err());
    }

    #[test]
    fn fitting_chain_and_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let r9 = ring(3, 2);
        let g = FiniteAbelianGroup::new(vec![3]).unwrap();
        for _ in 0..10 {
            let (nr, nc) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
            let entries = (0..nr * nc).map(|_| rand_element(&mut rng, r9, &g)).collect();
            let pres = Presentation::new(
                GrMatrix::from_entries(r9, g.clone(), nr, nc, entries).unwrap(),
            )
            .unwrap();
            for e in 0..nr {
                let lo = fitt(&pres, e).unwrap();
                let hi = fitt(&pres, e + 1).unwrap();
                assert!(hi.contains_ideal(&lo).unwrap(), "Fitt_{e} must sit inside Fitt_{}", e + 1);
            }
        }
        // Fitt_0 of a block-diagonal sum is the product of the pieces.
        for _ in 0..10 {
            let x = rand_element(&mut rng, r9, &g);
            let y = rand_element(&mut rng, r9, &g);
            let zero = GroupRingElement::zero(r9, g.clone());
            let block = Presentation::new(
                GrMatrix::from_entries(
                    r9,
                    g.clone(),
                    2,
                    2,
                    vec![x.clone(), zero.clone(), zero.clone(), y.clone()],
                )
                .unwrap(),
            )
            .unwrap();
            let ix = IdealCanonical::from_gens(r9, &g, &[x]).unwrap();
            let iy = IdealCanonical::from_gens(r9, &g, &[y]).unwrap();
            assert!(fitt(&block, 0)
                .unwrap()
                .eq_ideal(&ix.product(&iy).unwrap())
                .unwrap());
        }
    }

    #[test]
    fn fitt_commutes_with_coefficient_pushforward() {
        // Push a presentation over Z/2 x Z/3 down to Z/3 and compare Fitting
        // ideals computed before and after.
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let r9 = ring(3, 2);
        let big = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        let small = FiniteAbelianGroup::new(vec![3]).unwrap();
        let hom = GroupHom::new(
            big.clone(),
            small.clone(),
            vec![small.identity(), small.generator(0)],
        )
        .unwrap();
        for _ in 0..5 {
            let entries: Vec<GroupRingElement> =
                (0..4).map(|_| rand_element(&mut rng, r9, &big)).collect();
            let pres = Presentation::new(
                GrMatrix::from_entries(r9, big.clone(), 2, 2, entries.clone()).unwrap(),
            )
            .unwrap();
            let pushed_entries = entries
                .iter()
                .map(|x| restrict_element(&hom, x).unwrap())
                .collect::<Vec<_>>();
            let pushed = Presentation::new(
                GrMatrix::from_entries(r9, small.clone(), 2, 2, pushed_entries).unwrap(),
            )
            .unwrap();
            for e in 0..=2 {
                let direct = fitt(&pushed, e).unwrap();
                let via = restrict_ideal(&hom, &fitt(&pres, e).unwrap()).unwrap();
                assert!(direct.eq_ideal(&via).unwrap());
            }
        }
    }

    #[test]
    fn quadratic_presentation_has_principal_fitt0() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let r9 = ring(3, 2);
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        for _ in 0..5 {
            let entries = (0..9).map(|_| rand_element(&mut rng, r9, &g)).collect();
            let m = GrMatrix::from_entries(r9, g.clone(), 3, 3, entries).unwrap();
            let det = m.minor_det(&[0, 1, 2], &[0, 1, 2]).unwrap();
            let pres = Presentation::new(m).unwrap();
            assert!(fitt(&pres, 0)
                .unwrap()
                .eq_ideal(&IdealCanonical::from_gens(r9, &g, &[det]).unwrap())
                .unwrap());
        }
    }

    #[test]
    fn transpose_preserves_fitting_ideals() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let r9 = ring(3, 2);
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        for _ in 0..5 {
            let entries = (0..9).map(|_| rand_element(&mut rng, r9, &g)).collect();
            let pres = Presentation::new(
                GrMatrix::from_entries(r9, g.clone(), 3, 3, entries).unwrap(),
            )
            .unwrap();
            let tr = transpose_presentation(&pres).unwrap();
            for e in 0..=2 {
                assert!(fitt(&pres, e).unwrap().eq_ideal(&fitt(&tr, e).unwrap()).unwrap());
            }
        }
        let rect = Presentation::new(GrMatrix::zeros(r9, g, 2, 3)).unwrap();
        assert!(matches!(
            transpose_presentation(&rect),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn kernel_generators_single_cyclic_factor() {
        // G = Z/3 with Z/9 coefficients: the kernel of multiplication by
        // g - 1 is generated by the norm 1 + g + g^2.
        let r9 = ring(3, 2);
        let g = FiniteAbelianGroup::new(vec![3]).unwrap();
        let beta = GroupRingElement::aug_generator(r9, g.clone(), &g.generator(0));
        let v = kernel_generators(std::slice::from_ref(&beta)).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0][0].coeffs(), &[1, 1, 1]);
        let span = module_span(r9, &g, 1, &v).unwrap();
        let brute = zmod_linalg::kernel_basis(&row_map_matrix(r9, &g, &[beta]).unwrap());
        assert_eq!(span, brute);
        // Degenerate: no betas, no kernel vectors.
        assert!(kernel_generators(&[]).unwrap().is_empty());
    }

    #[test]
    fn kernel_generators_two_factors_mod_four() {
        // G = Z/2 x Z/2 with Z/4 coefficients; V_2 has the two norms and one
        // cross relation, and spans exactly the brute-force kernel.
        let r4 = ring(2, 2);
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let b1 = GroupRingElement::aug_generator(r4, g.clone(), &g.generator(0));
        let b2 = GroupRingElement::aug_generator(r4, g.clone(), &g.generator(1));
        let v = kernel_generators(&[b1.clone(), b2.clone()]).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[2][0], b2.neg());
        assert_eq!(v[2][1], b1);
        let span = module_span(r4, &g, 2, &v).unwrap();
        let brute = zmod_linalg::kernel_basis(&row_map_matrix(r4, &g, &[b1, b2]).unwrap());
        assert_eq!(span, brute);
    }

    #[test]
    fn kernel_generators_rejects_bad_input() {
        let r9 = ring(3, 2);
        let g = FiniteAbelianGroup::new(vec![3]).unwrap();
        let not_aug = GroupRingElement::from_integer(r9, g.clone(), 2);
        assert!(matches!(
            kernel_generators(&[not_aug]),
            Err(Error::NotAugmentationForm)
        ));
        let b = GroupRingElement::aug_generator(r9, g.clone(), &g.generator(0));
        assert!(matches!(
            kernel_generators(&[b.clone(), b]),
            Err(Error::NotDirectProduct { actual: 3, expected: 9 })
        ));
    }

    #[test]
    fn model_validation_errors() {
        let z3 = FiniteAbelianGroup::new(vec![3]).unwrap();
        let z2 = FiniteAbelianGroup::new(vec![2]).unwrap();
        // y's torsion part must be a p-element.
        assert!(matches!(
            DecompositionModel::new(z2.clone(), vec![], z2.generator(0), 1, 3, 2, 2, 1),
            Err(Error::BadModel(_))
        ));
        // t must be a power of p.
        assert!(matches!(
            DecompositionModel::new(z3.clone(), vec![], z3.identity(), 2, 3, 2, 2, 1),
            Err(Error::BadModel(_))
        ));
        // t * ord(g) must fit below p^n.
        assert!(matches!(
            DecompositionModel::new(z3.clone(), vec![], z3.generator(0), 3, 3, 2, 2, 1),
            Err(Error::BadModel(_))
        ));
        // Levels must be ordered.
        assert!(matches!(
            DecompositionModel::new(z3.clone(), vec![], z3.identity(), 1, 3, 2, 1, 1),
            Err(Error::BadModel(_))
        ));
        // Generators must span an internal direct product with <y>.
        assert!(matches!(
            DecompositionModel::new(
                z3.clone(),
                vec![z3.generator(0), z3.generator(0)],
                z3.identity(),
                1,
                3,
                2,
                2,
                1
            ),
            Err(Error::NotDirectProduct { .. })
        ));
        // A mixing y that duplicates a torsion generator is still fine.
        assert!(DecompositionModel::new(
            z3.clone(),
            vec![z3.generator(0)],
            z3.generator(0),
            1,
            3,
            2,
            2,
            1
        )
        .is_ok());
    }

    #[test]
    fn resolution_invariants_on_catalog() {
        for entry in default_catalog(2).unwrap() {
            let res = build_A_Q(&entry.model).unwrap();
            let r = res.r();
            for i in 0..r {
                assert!(
                    res.alphas()[i].mul(&res.betas()[i]).unwrap().is_zero(),
                    "{}: alpha_{i} * beta_{i} != 0",
                    entry.name
                );
            }
            for i in 0..r - 1 {
                assert!(
                    res.lifted_alphas()[i].mul(&res.lifted_betas()[i]).unwrap().is_zero(),
                    "{}: lifted torsion product {i} != 0",
                    entry.name
                );
            }
            assert_eq!(
                res.lifted_alphas()[r - 1].mul(&res.lifted_betas()[r - 1]).unwrap(),
                *res.gamma_power_minus_one(),
                "{}: last lifted product must be gamma^{{p^n}} - 1",
                entry.name
            );
            assert_eq!(res.a_low().nrows(), r);
            assert_eq!(res.a_low().ncols(), r * (r + 1) / 2);
            // The presentation columns are exactly the kernel generators.
            let v = kernel_generators(res.betas()).unwrap();
            for (c, vec) in v.iter().enumerate() {
                assert_eq!(&res.a_low().column(c), vec);
            }
        }
    }

    #[test]
    fn resolution_r1_values_are_the_geometric_sums() {
        let cat = default_catalog(2).unwrap();
        let res = build_A_Q(&cat[0].model).unwrap();
        assert_eq!(res.r(), 1);
        assert_eq!(res.cyclic_order(), 3);
        // Level n = 1: alpha_1 = 1 + gamma + gamma^2 over Z/3.
        assert_eq!(res.alphas()[0].coeffs(), &[1, 1, 1]);
        // Level m = 2: the lift is the partial sum, not the full norm.
        let mut expected = vec![0u64; 9];
        expected[0] = 1;
        expected[1] = 1;
        expected[2] = 1;
        assert_eq!(res.lifted_alphas()[0].coeffs(), &expected[..]);
        let w = res.lifted_alphas()[0].mul(&res.lifted_betas()[0]).unwrap();
        // gamma^3 - 1 over Z/9[Z/9].
        let mut wexp = vec![0u64; 9];
        wexp[0] = 8;
        wexp[3] = 1;
        assert_eq!(w.coeffs(), &wexp[..]);
    }

    #[test]
    fn resolution_is_exact_on_catalog() {
        for entry in default_catalog(2).unwrap() {
            let res = build_A_Q(&entry.model).unwrap();
            let r = res.r();
            let image = module_span(
                res.ring(),
                res.group_low(),
                r,
                &(0..res.a_low().ncols()).map(|c| res.a_low().column(c)).collect::<Vec<_>>(),
            )
            .unwrap();
            let brute = zmod_linalg::kernel_basis(
                &row_map_matrix(res.ring(), res.group_low(), res.betas()).unwrap(),
            );
            assert_eq!(image, brute, "{}: image of A != kernel of the beta map", entry.name);
        }
    }

    #[test]
    fn rminor_identity_on_catalog() {
        for entry in default_catalog(2).unwrap() {
            let res = build_A_Q(&entry.model).unwrap();
            let direct = minor_ideal(res.a_high(), res.r()).unwrap();
            let explicit = rminor_ideal_explicit(&res).unwrap();
            assert!(
                direct.eq_ideal(&explicit).unwrap(),
                "{}: explicit maximal-minor family disagrees",
                entry.name
            );
        }
    }

    #[test]
    fn rminor_generator_counts_follow_the_composition_formula() {
        // 1 + sum over subset sizes s of C(r-1, s) * C(2(r-s)-3, r-s-1):
        // stars and bars for the exponent tuples with t_r >= 1.
        fn binom(n: u64, k: u64) -> u64 {
            if k > n {
                return 0;
            }
            let mut acc = 1u64;
            for i in 0..k {
                acc = acc * (n - i) / (i + 1);
            }
            acc
        }
        let cat = default_catalog(1).unwrap();
        for entry in cat {
            let res = build_A_Q(&entry.model).unwrap();
            let r = res.r() as u64;
            let mut expected = 1u64;
            for s in 0..r.saturating_sub(1) {
                expected += binom(r - 1, s) * binom(2 * (r - s) - 3, r - s - 1);
            }
            let got = rminor_generators_explicit(&res).unwrap().len() as u64;
            assert_eq!(got, expected, "{}", entry.name);
        }
    }

    #[test]
    fn gkk_r1_is_inverse_of_one_minus_frobenius() {
        let cat = default_catalog(2).unwrap();
        let res = build_A_Q(&cat[0].model).unwrap();
        let f = shifted_fitt1_gkk(&res).unwrap();
        // Numerator collapses to (alpha~_1), denominator gamma^{p^n} - 1.
        let expected_num = IdealCanonical::from_gens(
            res.ring(),
            res.group_high(),
            &res.lifted_alphas()[..1],
        )
        .unwrap();
        assert!(f.numerator().eq_ideal(&expected_num).unwrap());
        assert_eq!(f.denominator(), res.gamma_power_minus_one());
        // Cross-multiplied, this is the ideal (1 / (1 - y^{-1})).
        let gh = res.group_high();
        let y = res.model().y_at(res.model().level_m());
        let one_minus_yinv =
            GroupRingElement::aug_generator(res.ring(), gh.clone(), &gh.inv(&y)).neg();
        let reference = FractionalIdeal::new(
            IdealCanonical::unit(res.ring(), gh.clone()),
            one_minus_yinv,
        )
        .unwrap();
        let cmp = f.eq_fractional(&reference).unwrap();
        assert!(cmp.equal);
        assert!(cmp.projected, "both denominators are finite-level zero divisors");
    }

    #[test]
    fn intrinsic_r1_is_inverse_augmentation() {
        let cat = default_catalog(2).unwrap();
        let f = intrinsic_ideal(&cat[0].model, 16).unwrap();
        assert!(f.numerator().is_unit_ideal());
        let model = &cat[0].model;
        let gh = model.group_at_level(model.level_m());
        let y = model.y_at(model.level_m());
        assert_eq!(
            f.denominator(),
            &GroupRingElement::aug_generator(model.ring(), gh, &y)
        );
    }

    #[test]
    fn intrinsic_matches_norm_over_augmentation_shape() {
        // Torsion of order prime to p with a procyclic complement: the
        // intrinsic ideal cross-multiplies to (1, N(T)/(y - 1)).
        let cat = default_catalog(2).unwrap();
        let entry = cat.iter().find(|e| e.name == "r2-prime-torsion").unwrap();
        let res = build_A_Q(&entry.model).unwrap();
        let f = intrinsic_ideal(&entry.model, 16).unwrap();
        let gh = res.group_high();
        let y_minus_1 = GroupRingElement::aug_generator(
            res.ring(),
            gh.clone(),
            &entry.model.y_at(entry.model.level_m()),
        );
        let reference_num = IdealCanonical::from_gens(
            res.ring(),
            gh,
            &[y_minus_1.clone(), res.lifted_alphas()[0].clone()],
        )
        .unwrap();
        let reference = FractionalIdeal::new(reference_num, y_minus_1).unwrap();
        let cmp = f.eq_fractional(&reference).unwrap();
        assert!(cmp.equal);
        assert!(cmp.projected);
    }

    #[test]
    fn shifted_fitting_triangle_on_catalog() {
        for entry in default_catalog(2).unwrap() {
            let res = build_A_Q(&entry.model).unwrap();
            let gkk = shifted_fitt1_gkk(&res).unwrap();
            let via_minors = shifted_fitt1_from_rminors(&res).unwrap();
            let intrinsic = intrinsic_ideal(&entry.model, 16).unwrap();
            let ab = gkk.eq_fractional(&via_minors).unwrap();
            assert!(ab.equal, "{}: graded assembly != explicit minors", entry.name);
            let ac = gkk.eq_fractional(&intrinsic).unwrap();
            assert!(ac.equal, "{}: graded assembly != intrinsic route", entry.name);
            let bc = via_minors.eq_fractional(&intrinsic).unwrap();
            assert!(bc.equal, "{}: explicit minors != intrinsic route", entry.name);
            assert!(
                ab.projected && ac.projected && bc.projected,
                "{}: these denominators are all zero divisors at a finite level",
                entry.name
            );
        }
    }

    #[test]
    fn intrinsic_respects_enumeration_bound() {
        let cat = default_catalog(1).unwrap();
        let r3 = cat.iter().find(|e| e.name == "r3-bicyclic").unwrap();
        assert!(matches!(
            intrinsic_ideal(&r3.model, 4),
            Err(Error::EnumerationBound { order: 9, bound: 4 })
        ));
    }

    #[test]
    fn tower_compatibility_on_catalog() {
        for entry in default_catalog(2).unwrap() {
            assert!(
                tower_fitt_compat(&entry.model, 1, 2).unwrap(),
                "{}: levels 1 -> 2",
                entry.name
            );
            assert!(tower_fitt_compat(&entry.model, 2, 2).unwrap());
        }
        let cat = default_catalog(2).unwrap();
        assert!(tower_fitt_compat(&cat[0].model, 2, 1).is_err());
    }

    #[test]
    fn specialization_bridges_generic_minors_to_the_resolution() {
        // Substituting x_i -> lifted beta_i, y_i -> lifted alpha_i into the
        // generic matrix recovers A~, and determinants commute with the
        // substitution entry per entry and minor per minor.
        for entry in default_catalog(2).unwrap() {
            let res = build_A_Q(&entry.model).unwrap();
            let k = res.r();
            let generic = generic_a(k).unwrap();
            let mut args = res.lifted_betas().to_vec();
            args.extend_from_slice(res.lifted_alphas());
            for r in 0..generic.nrows() {
                for c in 0..generic.ncols() {
                    let specialized = specialize_poly(generic.get(r, c), &args).unwrap();
                    assert_eq!(&specialized, res.a_high().get(r, c), "{}", entry.name);
                }
            }
            let rows: Vec<usize> = (0..k).collect();
            for cols in combinations(generic.ncols(), k) {
                let generic_det = generic.minor_det(&rows, &cols);
                let via_poly = specialize_poly(&generic_det, &args).unwrap();
                let direct = res.a_high().minor_det(&rows, &cols).unwrap();
                assert_eq!(via_poly, direct, "{}", entry.name);
            }
        }
    }
}
