//! Stickelberger elements for the cyclotomic fields Q(zeta_m)/Q in exact
//! rational arithmetic.
//!
//! The central object is the minimal equivariant L-value at s = 0,
//! theta = sum over a in (Z/m)^x of (1/2 - a/m) sigma_a^{-1}, an element of
//! the rational group ring of the Galois group (Z/m)^x.  On top of it sit
//! Euler-factor depletion (multiply by 1 - sigma_v^{-1} when the place v
//! leaves the defining product), T-smoothing (multiply by 1 - v sigma_v^{-1}),
//! a p-integrality check combining denominator bounds with minus-purity, and
//! restriction down a tower of conductors.  An independent route through
//! characters and generalized Bernoulli numbers — computed exactly in
//! Q(zeta_E) as polynomials modulo a cyclotomic polynomial — reconstructs the
//! same element coefficient by coefficient, which is the main cross-check.
//!
//! The set S of depleted places always contains the archimedean place and
//! every prime dividing the conductor; neither is stored explicitly.  Only
//! the finite primes added later by depletion are tracked.

use std::collections::{BTreeSet, HashMap};

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::group_ring::{
    FiniteAbelianGroup, GroupElement, GroupHom, RationalGroupRingElement,
};

fn gcd(a: u64, b: u64) -> u64 {
    num::integer::gcd(a, b)
}

fn lcm(a: u64, b: u64) -> u64 {
    num::integer::lcm(a, b)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization with ascending primes.
fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut base = (b % m) as u128;
    let m = m as u128;
    let mut acc = 1u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// Smallest primitive root modulo q^e for an odd prime q; a primitive root g
/// mod q works for every e once g^{q-1} is not 1 modulo q^2.
fn primitive_root(q: u64, e: u32) -> u64 {
    let phi = q - 1;
    let factors = factorize(phi);
    let mut g = 2u64;
    loop {
        if factors.iter().all(|&(r, _)| mod_pow(g, phi / r, q) != 1) {
            break;
        }
        g += 1;
    }
    if e > 1 && mod_pow(g, q - 1, q * q) == 1 {
        g += q;
    }
    g
}

/// x with x = a1 mod m1 and x = a2 mod m2, for coprime moduli.
fn crt(a1: u64, m1: u64, a2: u64, m2: u64) -> u64 {
    let mut x = a1 % m1;
    while x % m2 != a2 % m2 {
        x += m1;
    }
    x
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The unit group (Z/m)^x presented as an abstract finite abelian group with
/// an explicit two-way dictionary between unit residues a and group elements
/// sigma_a.  Only true conductors are accepted: m > 2 and m not 2 mod 4.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitGroup {
    m: u64,
    group: FiniteAbelianGroup,
    generator_residues: Vec<u64>,
    residues: Vec<u64>,
    indices: HashMap<u64, usize>,
}

impl UnitGroup {
    pub fn new(m: u64) -> Result<Self> {
        if m <= 2 || m % 4 == 2 {
            return Err(Error::InvalidInput(format!(
                "{m} is not a valid conductor: need m > 2 and m not congruent to 2 mod 4"
            )));
        }
        if m > 1 << 20 {
            return Err(Error::InvalidInput(format!("conductor {m} is too large")));
        }
        let mut generator_residues = Vec::new();
        let mut orders = Vec::new();
        for (q, e) in factorize(m) {
            let qe = q.pow(e);
            let rest = m / qe;
            if q == 2 {
                // e = 1 cannot happen (that is the excluded 2 mod 4 case).
                if e == 2 {
                    generator_residues.push(crt(3, 4, 1, rest));
                    orders.push(2);
                } else {
                    generator_residues.push(crt(qe - 1, qe, 1, rest));
                    orders.push(2);
                    generator_residues.push(crt(5, qe, 1, rest));
                    orders.push(1 << (e - 2));
                }
            } else {
                generator_residues.push(crt(primitive_root(q, e), qe, 1, rest));
                orders.push(qe - qe / q);
            }
        }
        let group = FiniteAbelianGroup::new(orders)?;
        let size = group.size() as usize;
        let mut residues = vec![0u64; size];
        let mut indices = HashMap::with_capacity(size);
        for idx in 0..size {
            let el = group.element_at(idx);
            let mut r = 1u64;
            for (i, &x) in el.0.iter().enumerate() {
                r = r * mod_pow(generator_residues[i], x, m) % m;
            }
            residues[idx] = r;
            let previous = indices.insert(r, idx);
            assert!(previous.is_none(), "unit-group generators are not independent");
        }
        Ok(UnitGroup { m, group, generator_residues, residues, indices })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// phi(m), the number of units.
    pub fn phi(&self) -> u64 {
        self.group.size()
    }

    /// Exponent of the group: the least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.group.orders().iter().copied().fold(1, lcm)
    }

    pub fn generator_residues(&self) -> &[u64] {
        &self.generator_residues
    }

    /// Unit residues indexed compatibly with the group's element order.
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// sigma_a for a unit residue a.
    pub fn element_for_residue(&self, a: u64) -> Result<GroupElement> {
        let r = a % self.m;
        if gcd(r, self.m) != 1 {
            return Err(Error::InvalidInput(format!(
                "{a} is not a unit modulo {}",
                self.m
            )));
        }
        Ok(self.group.element_at(self.indices[&r]))
    }

    /// The residue a of a group element sigma_a.
    pub fn residue_for(&self, g: &GroupElement) -> u64 {
        self.residues[self.group.index_of(g)]
    }

    /// sigma_{-1}, complex conjugation.
    pub fn complex_conjugation(&self) -> GroupElement {
        self.element_for_residue(self.m - 1)
            .expect("m - 1 is always a unit")
    }

    /// The reduction homomorphism sigma_a -> sigma_{a mod m'} onto the unit
    /// group of a divisor conductor.
    pub fn restriction_to(&self, target: &UnitGroup) -> Result<GroupHom> {
        if self.m % target.m != 0 {
            return Err(Error::InvalidInput(format!(
                "{} does not divide {}, so there is no restriction",
                target.m, self.m
            )));
        }
        let images = self
            .generator_residues
            .iter()
            .map(|&g| target.element_for_residue(g % target.m))
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(self.group.clone(), target.group.clone(), images)
    }
}

/// Exact arithmetic in Q(zeta_E), modeled as polynomials in zeta modulo the
/// E-th cyclotomic polynomial.  Elements are coefficient vectors of length
/// [Q(zeta_E) : Q].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclotomicField {
    order: u64,
    modulus: Vec<BigRational>,
}

/// An element of a [`CyclotomicField`]: coefficients of 1, zeta, ...,
/// zeta^(degree-1), low power first.
pub type CycElement = Vec<BigRational>;

fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor must be monic");
    let mut rem = a.to_vec();
    let dq = rem.len() - 1 - db;
    let mut q = vec![BigInt::zero(); dq + 1];
    for k in (0..=dq).rev() {
        let c = rem[k + db].clone();
        if c.is_zero() {
            continue;
        }
        q[k] = c.clone();
        for i in 0..=db {
            let t = &c * &b[i];
            rem[k + i] -= t;
        }
    }
    assert!(
        rem.iter().all(|x| x.is_zero()),
        "cyclotomic recursion produced a non-exact division"
    );
    q
}

/// The n-th cyclotomic polynomial, monic with integer coefficients, computed
/// by dividing x^n - 1 by the cyclotomic polynomials of the proper divisors.
fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            poly = poly_div_exact(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

impl CyclotomicField {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("cyclotomic order must be positive".into()));
        }
        let modulus = cyclotomic_polynomial(order)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        Ok(CyclotomicField { order, modulus })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Degree of the field extension, phi(order).
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Coefficients of the defining cyclotomic polynomial, low power first.
    pub fn modulus(&self) -> &[BigRational] {
        &self.modulus
    }

    pub fn zero(&self) -> CycElement {
        vec![BigRational::zero(); self.degree()]
    }

    pub fn one(&self) -> CycElement {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(&self, q: BigRational) -> CycElement {
        let mut v = self.zero();
        v[0] = q;
        v
    }

    fn reduce(&self, mut v: Vec<BigRational>) -> CycElement {
        let deg = self.degree();
        while v.len() > deg {
            let c = v.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let shift = v.len() - deg;
            for i in 0..deg {
                let t = &c * &self.modulus[i];
                v[shift + i] -= t;
            }
        }
        v.resize(deg, BigRational::zero());
        v
    }

    /// zeta^k, exponents taken modulo the root order.
    pub fn root_power(&self, k: u64) -> CycElement {
        let k = (k % self.order) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        self.reduce(v)
    }

    pub fn add(&self, a: &CycElement, b: &CycElement) -> CycElement {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &CycElement, b: &CycElement) -> CycElement {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &CycElement) -> CycElement {
        a.iter().map(|x| -x).collect()
    }

    pub fn scalar_mul(&self, a: &CycElement, c: &BigRational) -> CycElement {
        a.iter().map(|x| x * c).collect()
    }

    pub fn mul(&self, a: &CycElement, b: &CycElement) -> CycElement {
        let mut conv = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = x * y;
                conv[i + j] += t;
            }
        }
        self.reduce(conv)
    }

    pub fn is_zero(&self, a: &CycElement) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    /// The rational number this element is, if it lies in the prime field.
    pub fn as_rational(&self, a: &CycElement) -> Option<BigRational> {
        if a[1..].iter().all(|x| x.is_zero()) {
            Some(a[0].clone())
        } else {
            None
        }
    }
}

/// A depleted, smoothed Stickelberger element: an exact rational group-ring
/// element over (Z/m)^x together with the bookkeeping of which places have
/// been removed (S) and which primes smooth it (T).  S implicitly contains
/// the archimedean place and every prime dividing m; `s_extra` records only
/// the primes added by depletion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SticklebergerElement {
    units: UnitGroup,
    s_extra: BTreeSet<u64>,
    t_primes: BTreeSet<u64>,
    value: RationalGroupRingElement,
}

impl SticklebergerElement {
    pub fn conductor(&self) -> u64 {
        self.units.m()
    }

    pub fn units(&self) -> &UnitGroup {
        &self.units
    }

    /// All finite primes of S: the primes dividing the conductor plus the
    /// depleted ones, ascending.  The archimedean place is a standing member
    /// and is not listed.
    pub fn s_primes(&self) -> Vec<u64> {
        let mut out: Vec<u64> = factorize(self.units.m()).into_iter().map(|(q, _)| q).collect();
        out.extend(self.s_extra.iter().copied());
        out.sort_unstable();
        out
    }

    pub fn t_primes(&self) -> Vec<u64> {
        self.t_primes.iter().copied().collect()
    }

    pub fn value(&self) -> &RationalGroupRingElement {
        &self.value
    }

    /// Coefficient of sigma_a.
    pub fn coefficient(&self, a: u64) -> Result<BigRational> {
        let el = self.units.element_for_residue(a)?;
        Ok(self.value.coeff(&el).clone())
    }

    /// The projection onto the plus part: (1 + j)/2 applied to the value,
    /// with j complex conjugation.  Vanishes for every element produced here.
    pub fn plus_part(&self) -> RationalGroupRingElement {
        let group = self.value.group().clone();
        let j = self.units.complex_conjugation();
        let mut jd = RationalGroupRingElement::zero(group);
        jd.set_coeff(&j, BigRational::one());
        let twisted = self.value.mul(&jd).expect("conjugation acts on the same group");
        let sum = self.value.add(&twisted).expect("same group");
        sum.scalar_mul(&rat(1, 2))
    }
}

/// 1 - c * sigma, as a rational group-ring element; handles sigma = 1.
fn one_minus_scaled_sigma(
    group: &FiniteAbelianGroup,
    sigma: &GroupElement,
    c: BigRational,
) -> RationalGroupRingElement {
    let mut one = RationalGroupRingElement::zero(group.clone());
    one.set_coeff(&group.identity(), BigRational::one());
    let mut delta = RationalGroupRingElement::zero(group.clone());
    delta.set_coeff(sigma, c);
    one.sub(&delta).expect("same group")
}

/// The minimal Stickelberger element at conductor m:
/// sum over units a of (1/2 - a/m) sigma_a^{-1}, with S just the ramified
/// primes and the archimedean place, and T empty.
pub fn theta_min(m: u64) -> Result<SticklebergerElement> {
    let units = UnitGroup::new(m)?;
    let group = units.group().clone();
    let mut value = RationalGroupRingElement::zero(group.clone());
    for idx in 0..group.size() as usize {
        let a = units.residues()[idx];
        let coeff = rat(1, 2) - BigRational::new(BigInt::from(a), BigInt::from(m));
        value.set_coeff(&group.inv(&group.element_at(idx)), coeff);
    }
    Ok(SticklebergerElement {
        units,
        s_extra: BTreeSet::new(),
        t_primes: BTreeSet::new(),
        value,
    })
}

/// Removes the Euler factor at a new prime v: multiplies the value by
/// (1 - sigma_v^{-1}) and records v in S.  The prime must be new — neither in
/// S already (which includes dividing m) nor in T.
pub fn deplete(theta: &SticklebergerElement, v: u64) -> Result<SticklebergerElement> {
    if !is_prime(v) {
        return Err(Error::InvalidInput(format!("depletion place {v} is not prime")));
    }
    if theta.units.m() % v == 0 || theta.s_extra.contains(&v) {
        return Err(Error::InvalidInput(format!("prime {v} is already in S")));
    }
    if theta.t_primes.contains(&v) {
        return Err(Error::InvalidInput(format!(
            "prime {v} is in the smoothing set T and cannot be depleted"
        )));
    }
    let group = theta.units.group();
    let sigma_inv = group.inv(&theta.units.element_for_residue(v)?);
    let factor = one_minus_scaled_sigma(group, &sigma_inv, BigRational::one());
    let value = theta.value.mul(&factor)?;
    let mut s_extra = theta.s_extra.clone();
    s_extra.insert(v);
    Ok(SticklebergerElement {
        units: theta.units.clone(),
        s_extra,
        t_primes: theta.t_primes.clone(),
        value,
    })
}

/// Smooths by a set of primes: multiplies the value by
/// (1 - v * sigma_v^{-1}) for each v and records them in T.  The primes must
/// be disjoint from S and from any earlier smoothing.
#[allow(non_snake_case)]
pub fn smooth_T(theta: &SticklebergerElement, t: &[u64]) -> Result<SticklebergerElement> {
    let mut out = theta.clone();
    let requested: BTreeSet<u64> = t.iter().copied().collect();
    for &v in &requested {
        if !is_prime(v) {
            return Err(Error::InvalidInput(format!("smoothing place {v} is not prime")));
        }
        if out.units.m() % v == 0 || out.s_extra.contains(&v) {
            return Err(Error::InvalidInput(format!(
                "prime {v} lies in S and cannot smooth"
            )));
        }
        if out.t_primes.contains(&v) {
            return Err(Error::InvalidInput(format!("prime {v} is already in T")));
        }
        let group = out.units.group();
        let sigma_inv = group.inv(&out.units.element_for_residue(v)?);
        let factor =
            one_minus_scaled_sigma(group, &sigma_inv, BigRational::from_integer(v.into()));
        out.value = out.value.mul(&factor)?;
        out.t_primes.insert(v);
    }
    Ok(out)
}

/// theta_min depleted at the given extra primes and then smoothed by T, in
/// ascending order throughout.
pub fn theta_with(m: u64, s_extra: &[u64], t: &[u64]) -> Result<SticklebergerElement> {
    let mut theta = theta_min(m)?;
    let mut depletions: Vec<u64> = s_extra.to_vec();
    depletions.sort_unstable();
    depletions.dedup();
    for v in depletions {
        theta = deplete(&theta, v)?;
    }
    smooth_T(&theta, t)
}

/// The p-integrality predicate for smoothed elements at an odd prime p: all
/// coefficient denominators are coprime to p, and the plus part vanishes, so
/// the element lies in the minus component of Z_(p)[(Z/m)^x].  Requires a
/// nonempty smoothing set — without T the statement is false in general.
pub fn integrality_check(theta: &SticklebergerElement, p: u64) -> Result<bool> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidInput(format!(
            "integrality is a statement at odd primes, not {p}"
        )));
    }
    if theta.t_primes.is_empty() {
        return Err(Error::InvalidInput(
            "integrality needs a nonempty smoothing set T".into(),
        ));
    }
    let group = theta.value.group();
    let j = theta.units.complex_conjugation();
    let p_big = BigInt::from(p);
    for idx in 0..group.size() as usize {
        let g = group.element_at(idx);
        let c = theta.value.coeff(&g);
        if (c.denom() % &p_big).is_zero() {
            return Ok(false);
        }
        let paired = theta.value.coeff(&group.mul(&g, &j));
        if !(c + paired).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restriction of a Stickelberger element to a divisor conductor m1 | m:
/// coefficient-fiber summation along sigma_a -> sigma_{a mod m1}.  Primes
/// dividing the source conductor but not m1 become explicit members of S at
/// the lower level; T is carried along unchanged.
pub fn restrict_theta(theta: &SticklebergerElement, m1: u64) -> Result<SticklebergerElement> {
    let m2 = theta.units.m();
    if m1 == 0 || m2 % m1 != 0 {
        return Err(Error::InvalidInput(format!(
            "target conductor {m1} does not divide {m2}"
        )));
    }
    let target = UnitGroup::new(m1)?;
    let hom = theta.units.restriction_to(&target)?;
    let value = theta.value.restrict(&hom)?;
    let mut s_extra = theta.s_extra.clone();
    for (q, _) in factorize(m2) {
        if m1 % q != 0 {
            s_extra.insert(q);
        }
    }
    Ok(SticklebergerElement {
        units: target,
        s_extra,
        t_primes: theta.t_primes.clone(),
        value,
    })
}

/// One character of (Z/m)^x with its L-value at 0 computed from generalized
/// Bernoulli numbers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharacterLValue {
    /// chi sends the i-th unit-group generator to zeta_{d_i}^{exponents[i]},
    /// where d_i is the order of that generator.
    pub exponents: Vec<u64>,
    /// Conductor f of the primitive character inducing chi.
    pub conductor: u64,
    /// L_S(0, chi) = -B_{1,chi*} * prod over ell | m, ell not dividing f of
    /// (1 - chi*(ell)), as an element of Q(zeta_E).
    pub l_value: CycElement,
}

fn character_value(
    field: &CyclotomicField,
    orders: &[u64],
    exps: &[u64],
    el: &GroupElement,
) -> CycElement {
    let e = field.order();
    let mut total = 0u64;
    for i in 0..orders.len() {
        let k = exps[i] * el.0[i] % orders[i];
        total = (total + k * (e / orders[i])) % e;
    }
    field.root_power(total)
}

/// chi*(b) for the primitive character of conductor f inducing chi: lift b to
/// a residue that is a unit modulo m and evaluate chi there.
fn primitive_character_value(
    units: &UnitGroup,
    field: &CyclotomicField,
    exps: &[u64],
    f: u64,
    b: u64,
) -> CycElement {
    if f == 1 {
        return field.one();
    }
    let m = units.m();
    let mut a = b % f;
    debug_assert!(gcd(a, f) == 1, "primitive characters need arguments prime to f");
    while gcd(a, m) != 1 {
        a += f;
        assert!(a < 3 * m, "no unit lift found; the reduction map must be onto");
    }
    let el = units.element_for_residue(a).expect("lift is a unit by construction");
    character_value(field, units.group().orders(), exps, &el)
}

fn character_conductor(units: &UnitGroup, field: &CyclotomicField, exps: &[u64]) -> u64 {
    let one = field.one();
    let orders = units.group().orders();
    for f in divisors(units.m()) {
        let mut trivial_on_kernel = true;
        for idx in 0..units.phi() as usize {
            let a = units.residues()[idx];
            if f > 1 && a % f != 1 {
                continue;
            }
            let el = units.group().element_at(idx);
            if character_value(field, orders, exps, &el) != one {
                trivial_on_kernel = false;
                break;
            }
        }
        if trivial_on_kernel {
            return f;
        }
    }
    unreachable!("every character is trivial on the kernel at f = m")
}

fn enumerate_exponent_tuples(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &d in orders {
        let mut next = Vec::with_capacity(out.len() * d as usize);
        for t in &out {
            for c in 0..d {
                let mut u = t.clone();
                u.push(c);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// L_S(0, chi) for every character chi of (Z/m)^x, via generalized Bernoulli
/// numbers computed exactly in Q(zeta_E), E the exponent of the unit group:
/// B_{1,chi*} = (1/f) sum over b prime to f of b * chi*(b), with the Euler
/// factors (1 - chi*(ell)) for the ramified primes ell not dividing f.  The
/// trivial character comes out 0 because its Euler factors vanish.
pub fn bernoulli_oracle(m: u64) -> Result<(CyclotomicField, Vec<CharacterLValue>)> {
    let units = UnitGroup::new(m)?;
    let field = CyclotomicField::new(units.exponent())?;
    let ramified: Vec<u64> = factorize(m).into_iter().map(|(q, _)| q).collect();
    let mut out = Vec::new();
    for exps in enumerate_exponent_tuples(units.group().orders()) {
        let f = character_conductor(&units, &field, &exps);
        let mut b1 = field.zero();
        if f == 1 {
            b1 = field.one();
        } else {
            for b in 1..f {
                if gcd(b, f) != 1 {
                    continue;
                }
                let chi_b = primitive_character_value(&units, &field, &exps, f, b);
                b1 = field.add(
                    &b1,
                    &field.scalar_mul(&chi_b, &BigRational::from_integer(b.into())),
                );
            }
            b1 = field.scalar_mul(&b1, &BigRational::new(BigInt::one(), BigInt::from(f)));
        }
        let mut l_value = field.neg(&b1);
        for &ell in &ramified {
            if f % ell != 0 {
                let chi_ell = primitive_character_value(&units, &field, &exps, f, ell);
                l_value = field.mul(&l_value, &field.sub(&field.one(), &chi_ell));
            }
        }
        out.push(CharacterLValue { exponents: exps, conductor: f, l_value });
    }
    Ok((field, out))
}

/// Reconstructs the minimal Stickelberger element from the character side:
/// the coefficient of sigma_h is (1/phi(m)) * sum over chi of
/// L_S(0, chi) * chi(h).  Every coefficient must come out rational; the
/// result is compared against [`theta_min`] by the test suites.
pub fn theta_from_characters(m: u64) -> Result<RationalGroupRingElement> {
    let units = UnitGroup::new(m)?;
    let (field, chars) = bernoulli_oracle(m)?;
    let group = units.group().clone();
    let orders = group.orders().to_vec();
    let phi = BigRational::from_integer(BigInt::from(units.phi()));
    let mut coeffs = Vec::with_capacity(group.size() as usize);
    for idx in 0..group.size() as usize {
        let h = group.element_at(idx);
        let mut acc = field.zero();
        for ch in &chars {
            let chi_h = character_value(&field, &orders, &ch.exponents, &h);
            acc = field.add(&acc, &field.mul(&ch.l_value, &chi_h));
        }
        let c = field.as_rational(&acc).ok_or_else(|| {
            Error::InvalidInput(
                "character reconstruction produced an irrational coefficient".into(),
            )
        })?;
        coeffs.push(c / &phi);
    }
    RationalGroupRingElement::new(group, coeffs)
}
