//! Named verification suites over the built-in model catalog, producing
//! deterministic machine-readable reports.
//!
//! A suite is planned as an ordered list of [`CheckSpec`]s and executed check
//! by check; each check yields a [`CheckRecord`] with a stable claim slug, a
//! human subject string, a status, and (for model-based checks) the exact
//! (M, m, n) levels it ran at.  Checks are independent of one another, so a
//! caller may execute them in parallel as long as the record order of the
//! plan is preserved; `run_suite` is the sequential reference driver.
//!
//! Statuses: `pass` and `fail` are self-explanatory; `projected-pass` marks a
//! fractional-ideal comparison that holds but whose denominators are zero
//! divisors at the working level, so equality was certified in the projected
//! quotient; `skipped` marks a check whose inputs exceed a size budget.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::default_catalog;
use crate::error::{Error, Result};
use crate::fitting::{
    build_A_Q, fitt, intrinsic_ideal, kernel_generators, minor_ideal, module_span,
    rminor_ideal_explicit, row_map_matrix, shifted_fitt1_from_rminors, shifted_fitt1_gkk,
    tower_fitt_compat, transpose_presentation, DecompositionModel, GrMatrix, Presentation,
};
use crate::group_ring::{
    lift_unit, restrict_element, FiniteAbelianGroup, FractionalIdeal, GroupHom,
    GroupRingElement, IdealCanonical,
};
use crate::poly_symbolic::{classify_minor_monomials, verify_min_q_zero};
use crate::stickelberger::{
    integrality_check, restrict_theta, theta_from_characters, theta_min, theta_with,
};
use crate::zmod_linalg::{kernel_basis, ResidueRing};

/// Version tag for the report JSON layout.
pub const SCHEMA: &str = "fitting-forge/1";

/// The named suites, in the order `all` runs them.
pub const SUITE_NAMES: [&str; 4] = ["appendix", "limits", "transpose", "stickelberger"];

/// Budget for the flattened kernel comparison: systems with more scalar
/// entries than this are skipped rather than ground through.
const KERNEL_ENTRY_BUDGET: u64 = 10_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CheckStatus {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "projected-pass")]
    ProjectedPass,
    #[serde(rename = "skipped")]
    Skipped,
}

impl CheckStatus {
    /// Anything except an outright failure keeps the suite green.
    pub fn is_acceptable(self) -> bool {
        self != CheckStatus::Fail
    }
}

/// The (coefficient precision, high level, low level) a model check ran at.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Level {
    #[serde(rename = "M")]
    pub precision: u32,
    pub m: u32,
    pub n: u32,
}

fn level_of(model: &DecompositionModel) -> Level {
    Level { precision: model.precision(), m: model.level_m(), n: model.level_n() }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckRecord {
    pub claim: String,
    pub subject: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<Level>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub passed: usize,
    pub projected: usize,
    pub failed: usize,
    pub skipped: usize,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn all_green(&self) -> bool {
        self.failed == 0
    }

    pub fn has_skips(&self) -> bool {
        self.skipped > 0
    }
}

/// Knobs shared by every suite.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Coefficient precision M for the catalog models.
    pub precision: u32,
    /// Override for the catalog's high truncation level.
    pub level_m: Option<u32>,
    /// Override for the catalog's low truncation level.
    pub level_n: Option<u32>,
    /// Enumeration budget for the intrinsic-decomposition search.
    pub bound: u64,
    /// Record per-check wall times (off for byte-reproducible reports).
    pub with_timing: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            precision: 2,
            level_m: None,
            level_n: None,
            bound: 1 << 12,
            with_timing: true,
        }
    }
}

/// One planned check: where it came from and what to run.
#[derive(Clone, Debug)]
pub struct CheckSpec {
    pub claim: &'static str,
    pub subject: String,
    pub level: Option<Level>,
    kind: CheckKind,
}

#[derive(Clone, Debug)]
enum CheckKind {
    KernelGenerators { model: DecompositionModel },
    GenericMinQZero { k: usize },
    GenericMonomials { k: usize },
    RminorIdentity { model: DecompositionModel },
    ShiftedTriangle { model: DecompositionModel, bound: u64 },
    SpecialShapeR1 { model: DecompositionModel },
    SpecialShapeCrossMultiplied { model: DecompositionModel, bound: u64 },
    TowerCompat { model: DecompositionModel, low: u32, high: u32 },
    UnitLifting { source: Vec<u64>, target: Vec<u64>, count: usize, seed: u64 },
    TransposeInvariance { orders: Vec<u64>, p: u64, precision: u32, count: usize, seed: u64 },
    StickDualPath { m: u64 },
    StickPlusPart { ms: Vec<u64> },
    StickTower { chain: Vec<u64>, t: Vec<u64> },
    StickIntegrality { m: u64, ps: Vec<u64> },
}

fn spec_for_model(
    claim: &'static str,
    subject: impl Into<String>,
    model: &DecompositionModel,
    kind: CheckKind,
) -> CheckSpec {
    CheckSpec { claim, subject: subject.into(), level: Some(level_of(model)), kind }
}

fn catalog_for(opts: &SuiteOptions) -> Result<Vec<(String, DecompositionModel)>> {
    let mut out = Vec::new();
    for entry in default_catalog(opts.precision)? {
        let mut model = entry.model;
        if opts.level_m.is_some() || opts.level_n.is_some() {
            let n = opts.level_n.unwrap_or(model.level_n());
            let m = opts.level_m.unwrap_or(model.level_m());
            model = model.at_levels(n, m)?;
        }
        out.push((entry.name.to_string(), model));
    }
    Ok(out)
}

fn plan_appendix(opts: &SuiteOptions) -> Result<Vec<CheckSpec>> {
    let catalog = catalog_for(opts)?;
    let mut plan = Vec::new();
    for (name, model) in &catalog {
        plan.push(spec_for_model(
            "kernel-generators",
            name.clone(),
            model,
            CheckKind::KernelGenerators { model: model.clone() },
        ));
    }
    for k in 1..=5 {
        plan.push(CheckSpec {
            claim: "generic-minq-zero",
            subject: format!("k = {k}"),
            level: None,
            kind: CheckKind::GenericMinQZero { k },
        });
    }
    for k in 1..=4 {
        plan.push(CheckSpec {
            claim: "generic-minor-monomials",
            subject: format!("k = {k}"),
            level: None,
            kind: CheckKind::GenericMonomials { k },
        });
    }
    for (name, model) in &catalog {
        for precision in 1..=3 {
            let scaled = model.with_precision(precision)?;
            plan.push(spec_for_model(
                "rminor-identity",
                format!("{name} @ M = {precision}"),
                &scaled,
                CheckKind::RminorIdentity { model: scaled.clone() },
            ));
        }
    }
    for (name, model) in &catalog {
        plan.push(spec_for_model(
            "shifted-triangle",
            name.clone(),
            model,
            CheckKind::ShiftedTriangle { model: model.clone(), bound: opts.bound },
        ));
    }
    let r1 = catalog
        .iter()
        .find(|(name, _)| name == "r1-trivial-torsion")
        .expect("catalog carries the rank-one model");
    plan.push(spec_for_model(
        "special-shape-r1",
        r1.0.clone(),
        &r1.1,
        CheckKind::SpecialShapeR1 { model: r1.1.clone() },
    ));
    let cross = catalog
        .iter()
        .find(|(name, _)| name == "r2-prime-torsion")
        .expect("catalog carries the prime-torsion model");
    plan.push(spec_for_model(
        "special-shape-cross-multiplied",
        cross.0.clone(),
        &cross.1,
        CheckKind::SpecialShapeCrossMultiplied { model: cross.1.clone(), bound: opts.bound },
    ));
    Ok(plan)
}

fn plan_limits(opts: &SuiteOptions) -> Result<Vec<CheckSpec>> {
    let catalog = catalog_for(opts)?;
    let mut plan = Vec::new();
    for (low, high) in [(1u32, 2u32), (2, 3)] {
        for (name, model) in &catalog {
            plan.push(spec_for_model(
                "tower-compat",
                format!("{name} levels {low} -> {high}"),
                model,
                CheckKind::TowerCompat { model: model.clone(), low, high },
            ));
        }
    }
    plan.push(CheckSpec {
        claim: "unit-lifting",
        subject: "Z/9 -> Z/3".into(),
        level: None,
        kind: CheckKind::UnitLifting { source: vec![9], target: vec![3], count: 25, seed: 11 },
    });
    plan.push(CheckSpec {
        claim: "unit-lifting",
        subject: "Z/3 x Z/3 -> Z/3".into(),
        level: None,
        kind: CheckKind::UnitLifting { source: vec![3, 3], target: vec![3], count: 25, seed: 12 },
    });
    Ok(plan)
}

fn plan_transpose(_opts: &SuiteOptions) -> Result<Vec<CheckSpec>> {
    Ok(vec![
        CheckSpec {
            claim: "transpose-invariance",
            subject: "Z/9[Z/3 x Z/3], 50 random 3 x 3 presentations".into(),
            level: None,
            kind: CheckKind::TransposeInvariance {
                orders: vec![3, 3],
                p: 3,
                precision: 2,
                count: 50,
                seed: 21,
            },
        },
        CheckSpec {
            claim: "transpose-invariance",
            subject: "Z/8[Z/4], 50 random 3 x 3 presentations".into(),
            level: None,
            kind: CheckKind::TransposeInvariance {
                orders: vec![4],
                p: 2,
                precision: 3,
                count: 50,
                seed: 22,
            },
        },
    ])
}

fn plan_stickelberger(_opts: &SuiteOptions) -> Result<Vec<CheckSpec>> {
    let conductors = [3u64, 4, 5, 7, 8, 9, 11, 12, 15];
    let mut plan = Vec::new();
    for m in conductors {
        plan.push(CheckSpec {
            claim: "stick-dual-path",
            subject: format!("m = {m}"),
            level: None,
            kind: CheckKind::StickDualPath { m },
        });
    }
    plan.push(CheckSpec {
        claim: "stick-plus-part",
        subject: "all conductors".into(),
        level: None,
        kind: CheckKind::StickPlusPart { ms: conductors.to_vec() },
    });
    for (chain, t) in [
        (vec![27u64, 9, 3], vec![7u64]),
        (vec![16, 8, 4], vec![]),
        (vec![15, 3], vec![]),
    ] {
        let t_label = if t.is_empty() {
            "T = {}".to_string()
        } else {
            format!("T = {t:?}")
        };
        plan.push(CheckSpec {
            claim: "stick-tower",
            subject: format!("{chain:?}, {t_label}"),
            level: None,
            kind: CheckKind::StickTower { chain, t },
        });
    }
    for m in conductors {
        plan.push(CheckSpec {
            claim: "stick-integrality",
            subject: format!("m = {m}, p in {{3, 5, 7}}"),
            level: None,
            kind: CheckKind::StickIntegrality { m, ps: vec![3, 5, 7] },
        });
    }
    Ok(plan)
}

/// The ordered check list for a named suite; `all` concatenates the four
/// suites in their canonical order.  Unknown names are rejected.
pub fn plan_suite(suite: &str, opts: &SuiteOptions) -> Result<Vec<CheckSpec>> {
    match suite {
        "appendix" => plan_appendix(opts),
        "limits" => plan_limits(opts),
        "transpose" => plan_transpose(opts),
        "stickelberger" => plan_stickelberger(opts),
        "all" => {
            let mut plan = plan_appendix(opts)?;
            plan.extend(plan_limits(opts)?);
            plan.extend(plan_transpose(opts)?);
            plan.extend(plan_stickelberger(opts)?);
            Ok(plan)
        }
        other => Err(Error::InvalidInput(format!(
            "unknown suite '{other}'; expected appendix, limits, transpose, stickelberger, or all"
        ))),
    }
}

type Outcome = (CheckStatus, Option<String>);

fn ok(cond: bool, on_fail: &str) -> Outcome {
    if cond {
        (CheckStatus::Pass, None)
    } else {
        (CheckStatus::Fail, Some(on_fail.to_string()))
    }
}

fn check_kernel_generators(model: &DecompositionModel) -> Result<Outcome> {
    let res = build_A_Q(model)?;
    let n = res.group_low().size();
    let entries = res.r() as u64 * n * n;
    if entries > KERNEL_ENTRY_BUDGET {
        return Ok((
            CheckStatus::Skipped,
            Some(format!(
                "flattened system has {entries} entries, over the budget of {KERNEL_ENTRY_BUDGET}"
            )),
        ));
    }
    let gens = kernel_generators(res.betas())?;
    let span = module_span(res.ring(), res.group_low(), res.r(), &gens)?;
    let brute = kernel_basis(&row_map_matrix(res.ring(), res.group_low(), res.betas())?);
    Ok(ok(
        span == brute,
        "span of the kernel generators differs from the brute-force kernel",
    ))
}

fn check_rminor_identity(model: &DecompositionModel) -> Result<Outcome> {
    let res = build_A_Q(model)?;
    let direct = minor_ideal(res.a_high(), res.r())?;
    let explicit = rminor_ideal_explicit(&res)?;
    Ok(ok(
        direct.eq_ideal(&explicit)?,
        "the explicit generator family spans a different ideal than the top minors",
    ))
}

fn check_shifted_triangle(model: &DecompositionModel, bound: u64) -> Result<Outcome> {
    let res = build_A_Q(model)?;
    let gkk = shifted_fitt1_gkk(&res)?;
    let via_minors = shifted_fitt1_from_rminors(&res)?;
    let intrinsic = intrinsic_ideal(model, bound)?;
    let ab = gkk.eq_fractional(&via_minors)?;
    let ac = gkk.eq_fractional(&intrinsic)?;
    let bc = via_minors.eq_fractional(&intrinsic)?;
    if !(ab.equal && ac.equal && bc.equal) {
        let mut bad = Vec::new();
        if !ab.equal {
            bad.push("graded assembly vs explicit minors");
        }
        if !ac.equal {
            bad.push("graded assembly vs intrinsic");
        }
        if !bc.equal {
            bad.push("explicit minors vs intrinsic");
        }
        return Ok((CheckStatus::Fail, Some(bad.join("; "))));
    }
    if ab.projected || ac.projected || bc.projected {
        return Ok((
            CheckStatus::ProjectedPass,
            Some("denominators are zero divisors at this level; equality certified in the projected quotient".into()),
        ));
    }
    Ok((CheckStatus::Pass, None))
}

fn check_special_shape_r1(model: &DecompositionModel) -> Result<Outcome> {
    let res = build_A_Q(model)?;
    let f = shifted_fitt1_gkk(&res)?;
    let gh = res.group_high();
    let y = model.y_at(model.level_m());
    let one_minus_y_inv =
        GroupRingElement::aug_generator(res.ring(), gh.clone(), &gh.inv(&y)).neg();
    let reference =
        FractionalIdeal::new(IdealCanonical::unit(res.ring(), gh.clone()), one_minus_y_inv)?;
    let cmp = f.eq_fractional(&reference)?;
    Ok(ok(
        cmp.equal,
        "the rank-one shifted ideal is not (1 / (1 - sigma^{-1}))",
    ))
}

fn check_special_shape_cross(model: &DecompositionModel, bound: u64) -> Result<Outcome> {
    let res = build_A_Q(model)?;
    let f = intrinsic_ideal(model, bound)?;
    let gh = res.group_high();
    let y_minus_1 =
        GroupRingElement::aug_generator(res.ring(), gh.clone(), &model.y_at(model.level_m()));
    let reference_num = IdealCanonical::from_gens(
        res.ring(),
        gh,
        &[y_minus_1.clone(), res.lifted_alphas()[0].clone()],
    )?;
    let reference = FractionalIdeal::new(reference_num, y_minus_1)?;
    let cmp = f.eq_fractional(&reference)?;
    Ok(ok(
        cmp.equal,
        "cross-multiplied intrinsic ideal is not (1, N(torsion) / (sigma - 1))",
    ))
}

fn random_unit(rng: &mut ChaCha8Rng, ring: ResidueRing, group: &FiniteAbelianGroup) -> GroupRingElement {
    let n = group.size() as usize;
    for _ in 0..10_000 {
        let coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..ring.modulus())).collect();
        let candidate = GroupRingElement::new(ring, group.clone(), coeffs)
            .expect("coefficient vector has the right length");
        if candidate.is_unit() {
            return candidate;
        }
    }
    unreachable!("units have positive density in these group rings");
}

fn check_unit_lifting(source: &[u64], target: &[u64], count: usize, seed: u64) -> Result<Outcome> {
    let src = FiniteAbelianGroup::new(source.to_vec())?;
    let tgt = FiniteAbelianGroup::new(target.to_vec())?;
    // Map each source generator onto the matching target generator, padding
    // with the identity once the target runs out of factors.
    let images: Vec<_> = (0..src.rank())
        .map(|i| if i < tgt.rank() { tgt.generator(i) } else { tgt.identity() })
        .collect();
    let hom = GroupHom::new(src, tgt.clone(), images)?;
    if !hom.is_surjective() || !hom.kernel_is_p_group(3) {
        return Ok((
            CheckStatus::Fail,
            Some("test surjection is not a p-group-kernel surjection".into()),
        ));
    }
    let ring = ResidueRing::new(3, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let u = random_unit(&mut rng, ring, &tgt);
        let lifted = lift_unit(&hom, &u)?;
        if !lifted.is_unit() {
            return Ok((CheckStatus::Fail, Some(format!("lift #{i} is not a unit"))));
        }
        if restrict_element(&hom, &lifted)? != u {
            return Ok((
                CheckStatus::Fail,
                Some(format!("lift #{i} does not map back onto the original unit")),
            ));
        }
    }
    Ok((CheckStatus::Pass, None))
}

fn check_transpose_invariance(
    orders: &[u64],
    p: u64,
    precision: u32,
    count: usize,
    seed: u64,
) -> Result<Outcome> {
    let ring = ResidueRing::new(p, precision)?;
    let group = FiniteAbelianGroup::new(orders.to_vec())?;
    let n = group.size() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 3usize;
    for trial in 0..count {
        let entries: Vec<GroupRingElement> = (0..dim * dim)
            .map(|_| {
                let coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..ring.modulus())).collect();
                GroupRingElement::new(ring, group.clone(), coeffs).expect("right length")
            })
            .collect();
        let pres =
            Presentation::new(GrMatrix::from_entries(ring, group.clone(), dim, dim, entries)?)?;
        let flipped = transpose_presentation(&pres)?;
        for e in 0..=dim {
            let a = fitt(&pres, e)?;
            let b = fitt(&flipped, e)?;
            if !a.eq_ideal(&b)? {
                return Ok((
                    CheckStatus::Fail,
                    Some(format!("trial {trial}: Fitt_{e} changed under transpose")),
                ));
            }
        }
    }
    Ok((CheckStatus::Pass, None))
}

fn check_stick_dual_path(m: u64) -> Result<Outcome> {
    let direct = theta_min(m)?;
    let reconstructed = theta_from_characters(m)?;
    Ok(ok(
        &reconstructed == direct.value(),
        "Bernoulli character reconstruction disagrees with the coefficient formula",
    ))
}

fn check_stick_plus_part(ms: &[u64]) -> Result<Outcome> {
    for &m in ms {
        if !theta_min(m)?.plus_part().is_zero() {
            return Ok((CheckStatus::Fail, Some(format!("plus part survives at m = {m}"))));
        }
    }
    Ok((CheckStatus::Pass, None))
}

fn check_stick_tower(chain: &[u64], t: &[u64]) -> Result<Outcome> {
    let top_m = chain[0];
    let top = theta_with(top_m, &[], t)?;
    // Direct restriction from the top to every lower conductor must match the
    // element computed natively there, with the lost primes depleted.
    for &lower in &chain[1..] {
        let lost: Vec<u64> =
            prime_divisors(top_m).into_iter().filter(|&q| lower % q != 0).collect();
        let direct = restrict_theta(&top, lower)?;
        let reference = theta_with(lower, &lost, t)?;
        if direct != reference {
            return Ok((
                CheckStatus::Fail,
                Some(format!("restriction {top_m} -> {lower} disagrees with the direct element")),
            ));
        }
    }
    // Stepping down one level at a time agrees with jumping straight down.
    let mut stepped = top.clone();
    for &lower in &chain[1..] {
        stepped = restrict_theta(&stepped, lower)?;
    }
    let bottom = *chain.last().expect("chains are nonempty");
    let jumped = restrict_theta(&top, bottom)?;
    Ok(ok(
        stepped == jumped,
        "stepwise and direct restriction to the bottom level disagree",
    ))
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_stick_integrality(m: u64, ps: &[u64]) -> Result<Outcome> {
    let ell = [3u64, 5, 7, 11, 13]
        .into_iter()
        .find(|&ell| m % ell != 0)
        .expect("some small odd prime misses the conductor");
    let smoothed = theta_with(m, &[], &[ell])?;
    for &p in ps {
        if !integrality_check(&smoothed, p)? {
            return Ok((
                CheckStatus::Fail,
                Some(format!("T = {{{ell}}}-smoothed element is not {p}-integral")),
            ));
        }
    }
    Ok((CheckStatus::Pass, None))
}

fn run_kind(kind: &CheckKind) -> Result<Outcome> {
    match kind {
        CheckKind::KernelGenerators { model } => check_kernel_generators(model),
        CheckKind::GenericMinQZero { k } => Ok(ok(
            verify_min_q_zero(*k)?,
            "a maximal minor of the generic relation matrix is nonzero",
        )),
        CheckKind::GenericMonomials { k } => {
            let report = classify_minor_monomials(*k)?;
            Ok(ok(
                report.is_dichotomy(),
                "some minor monomial escapes the dichotomy",
            ))
        }
        CheckKind::RminorIdentity { model } => check_rminor_identity(model),
        CheckKind::ShiftedTriangle { model, bound } => check_shifted_triangle(model, *bound),
        CheckKind::SpecialShapeR1 { model } => check_special_shape_r1(model),
        CheckKind::SpecialShapeCrossMultiplied { model, bound } => {
            check_special_shape_cross(model, *bound)
        }
        CheckKind::TowerCompat { model, low, high } => Ok(ok(
            tower_fitt_compat(model, *low, *high)?,
            "minor ideals do not restrict compatibly between levels",
        )),
        CheckKind::UnitLifting { source, target, count, seed } => {
            check_unit_lifting(source, target, *count, *seed)
        }
        CheckKind::TransposeInvariance { orders, p, precision, count, seed } => {
            check_transpose_invariance(orders, *p, *precision, *count, *seed)
        }
        CheckKind::StickDualPath { m } => check_stick_dual_path(*m),
        CheckKind::StickPlusPart { ms } => check_stick_plus_part(ms),
        CheckKind::StickTower { chain, t } => check_stick_tower(chain, t),
        CheckKind::StickIntegrality { m, ps } => check_stick_integrality(*m, ps),
    }
}

/// Runs one planned check.  Size-budget errors become `skipped` records;
/// any other library error is reported as a failure with the error text.
pub fn execute_check(spec: &CheckSpec, opts: &SuiteOptions) -> CheckRecord {
    let start = std::time::Instant::now();
    let (status, detail) = match run_kind(&spec.kind) {
        Ok(outcome) => outcome,
        Err(Error::EnumerationBound { order, bound }) => (
            CheckStatus::Skipped,
            Some(format!("enumeration over {order} elements exceeds the bound {bound}")),
        ),
        Err(e) => (CheckStatus::Fail, Some(format!("error: {e}"))),
    };
    let wall_ms = if opts.with_timing {
        Some(start.elapsed().as_millis() as u64)
    } else {
        None
    };
    CheckRecord {
        claim: spec.claim.to_string(),
        subject: spec.subject.clone(),
        status,
        level: spec.level,
        detail,
        wall_ms,
    }
}

/// Wraps executed records into a report with summary counts.  The timestamp
/// starts empty; the front end fills it in unless suppressed.
pub fn assemble_report(suite: &str, checks: Vec<CheckRecord>) -> VerificationReport {
    let count = |s: CheckStatus| checks.iter().filter(|c| c.status == s).count();
    VerificationReport {
        schema: SCHEMA,
        suite: suite.to_string(),
        timestamp: None,
        passed: count(CheckStatus::Pass),
        projected: count(CheckStatus::ProjectedPass),
        failed: count(CheckStatus::Fail),
        skipped: count(CheckStatus::Skipped),
        checks,
    }
}

/// Plans and executes a suite sequentially.
pub fn run_suite(suite: &str, opts: &SuiteOptions) -> Result<VerificationReport> {
    let plan = plan_suite(suite, opts)?;
    let checks = plan.iter().map(|spec| execute_check(spec, opts)).collect();
    Ok(assemble_report(suite, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> SuiteOptions {
        SuiteOptions { with_timing: false, ..SuiteOptions::default() }
    }

    #[test]
    fn unknown_suites_are_rejected() {
        assert!(plan_suite("everything", &quiet()).is_err());
        assert!(plan_suite("", &quiet()).is_err());
    }

    #[test]
    fn appendix_suite_is_green() {
        let report = run_suite("appendix", &quiet()).unwrap();
        assert!(report.all_green(), "{report:?}");
        assert!(!report.has_skips(), "{report:?}");
        // The triangle comparisons land in the projected quotient at M = 2.
        assert!(report.projected >= 5, "{report:?}");
        let claims: Vec<&str> = report.checks.iter().map(|c| c.claim.as_str()).collect();
        for expected in [
            "kernel-generators",
            "generic-minq-zero",
            "generic-minor-monomials",
            "rminor-identity",
            "shifted-triangle",
            "special-shape-r1",
            "special-shape-cross-multiplied",
        ] {
            assert!(claims.contains(&expected), "missing {expected}");
        }
    }

    #[test]
    fn limits_suite_is_green() {
        let report = run_suite("limits", &quiet()).unwrap();
        assert!(report.all_green(), "{report:?}");
        assert_eq!(report.checks.len(), 12);
    }

    #[test]
    fn transpose_suite_is_green() {
        let report = run_suite("transpose", &quiet()).unwrap();
        assert!(report.all_green(), "{report:?}");
        assert_eq!(report.passed, 2);
    }

    #[test]
    fn stickelberger_suite_is_green() {
        let report = run_suite("stickelberger", &quiet()).unwrap();
        assert!(report.all_green(), "{report:?}");
        assert_eq!(report.checks.len(), 9 + 1 + 3 + 9);
    }

    #[test]
    fn reports_are_deterministic_without_timing() {
        let a = run_suite("limits", &quiet()).unwrap();
        let b = run_suite("limits", &quiet()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(a.checks.iter().all(|c| c.wall_ms.is_none()));
    }

    #[test]
    fn timing_fields_appear_when_requested() {
        let report = run_suite("transpose", &SuiteOptions::default()).unwrap();
        assert!(report.checks.iter().all(|c| c.wall_ms.is_some()));
    }

    #[test]
    fn level_overrides_flow_into_the_records() {
        let opts = SuiteOptions { level_m: Some(3), ..quiet() };
        let plan = plan_suite("appendix", &opts).unwrap();
        let kernel = plan.iter().find(|s| s.claim == "kernel-generators").unwrap();
        assert_eq!(kernel.level.unwrap().m, 3);
    }
}
