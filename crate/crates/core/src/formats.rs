//! JSON descriptors for the objects the command-line front end reads and
//! writes: finite abelian groups, presentations over residue rings,
//! decomposition models, and Stickelberger requests/responses.
//!
//! Descriptors are plain serde structs mirroring the library types; each has
//! a conversion that revalidates everything through the normal constructors,
//! so a malformed file fails with the same errors as malformed code.
//! Group-ring elements travel as dense coefficient vectors in the group's
//! enumeration order; rationals travel as ["numerator", "denominator"]
//! strings so arbitrary precision survives the trip.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::{DecompositionModel, GrMatrix, Presentation};
use crate::group_ring::{FiniteAbelianGroup, GroupRingElement};
use crate::stickelberger::{
    integrality_check, theta_with, SticklebergerElement,
};
use crate::zmod_linalg::ResidueRing;

/// Schema tag embedded in every emitted JSON document.
pub const SCHEMA: &str = "fitting-forge/1";

/// A finite abelian group as its cyclic factor orders, with two optional
/// markers: which factor is the distinguished procyclic one, and which
/// element acts as complex conjugation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub cyclic_orders: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_factor_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex_conjugation: Option<Vec<u64>>,
}

impl GroupDescriptor {
    pub fn from_group(group: &FiniteAbelianGroup) -> Self {
        GroupDescriptor {
            cyclic_orders: group.orders().to_vec(),
            gamma_factor_index: None,
            complex_conjugation: None,
        }
    }

    pub fn to_group(&self) -> Result<FiniteAbelianGroup> {
        let group = FiniteAbelianGroup::new(self.cyclic_orders.clone())?;
        if let Some(i) = self.gamma_factor_index {
            if i >= group.rank() {
                return Err(Error::InvalidInput(format!(
                    "gamma_factor_index {i} out of range for rank {}",
                    group.rank()
                )));
            }
        }
        if let Some(j) = &self.complex_conjugation {
            let el = group.element(j.clone())?;
            if group.order_of(&el) > 2 {
                return Err(Error::InvalidInput(
                    "complex_conjugation must be an involution".into(),
                ));
            }
        }
        Ok(group)
    }
}

/// The coefficient ring Z/p^M.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ModulusDescriptor {
    pub p: u64,
    #[serde(rename = "M")]
    pub precision: u32,
}

impl ModulusDescriptor {
    pub fn to_ring(&self) -> Result<ResidueRing> {
        ResidueRing::new(self.p, self.precision)
    }
}

/// A module presentation: a matrix over (Z/p^M)[G], entries as coefficient
/// vectors in enumeration order, row-major.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PresentationDescriptor {
    pub group: GroupDescriptor,
    pub modulus: ModulusDescriptor,
    pub matrix: Vec<Vec<Vec<u64>>>,
}

impl PresentationDescriptor {
    pub fn from_presentation(pres: &Presentation) -> Self {
        let mat = pres.matrix();
        let matrix = (0..mat.nrows())
            .map(|r| (0..mat.ncols()).map(|c| mat.get(r, c).coeffs().to_vec()).collect())
            .collect();
        PresentationDescriptor {
            group: GroupDescriptor::from_group(mat.group()),
            modulus: ModulusDescriptor { p: mat.ring().p(), precision: mat.ring().precision() },
            matrix,
        }
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        let ring = self.modulus.to_ring()?;
        let group = self.group.to_group()?;
        let nrows = self.matrix.len();
        if nrows == 0 {
            return Err(Error::InvalidInput("the matrix has no rows".into()));
        }
        let ncols = self.matrix[0].len();
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in &self.matrix {
            if row.len() != ncols {
                return Err(Error::LengthMismatch { got: row.len(), expected: ncols });
            }
            for coeffs in row {
                entries.push(GroupRingElement::new(ring, group.clone(), coeffs.clone())?);
            }
        }
        Presentation::new(GrMatrix::from_entries(ring, group, nrows, ncols, entries)?)
    }
}

/// A decomposition model, mirroring the constructor arguments of
/// [`DecompositionModel`] field by field.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub torsion_orders: Vec<u64>,
    pub torsion_generators: Vec<Vec<u64>>,
    pub y_torsion: Vec<u64>,
    pub gamma_exponent: u64,
    pub p: u64,
    #[serde(rename = "M")]
    pub precision: u32,
    pub level_m: u32,
    pub level_n: u32,
}

impl ModelDescriptor {
    pub fn from_model(model: &DecompositionModel) -> Self {
        ModelDescriptor {
            torsion_orders: model.torsion_ambient().orders().to_vec(),
            torsion_generators: model.torsion_gens().iter().map(|g| g.0.clone()).collect(),
            y_torsion: model.y_at(model.level_m()).0[..model.torsion_ambient().rank()].to_vec(),
            gamma_exponent: model.gamma_exponent(),
            p: model.p(),
            precision: model.precision(),
            level_m: model.level_m(),
            level_n: model.level_n(),
        }
    }

    pub fn to_model(&self) -> Result<DecompositionModel> {
        let ambient = FiniteAbelianGroup::new(self.torsion_orders.clone())?;
        let gens = self
            .torsion_generators
            .iter()
            .map(|g| ambient.element(g.clone()))
            .collect::<Result<Vec<_>>>()?;
        let y = ambient.element(self.y_torsion.clone())?;
        DecompositionModel::new(
            ambient,
            gens,
            y,
            self.gamma_exponent,
            self.p,
            self.precision,
            self.level_m,
            self.level_n,
        )
    }
}

/// Input for a Stickelberger computation: the conductor, extra primes to
/// deplete into S (primes dividing m are members automatically and may be
/// listed or not), and the smoothing set T.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SticklebergerRequest {
    pub m: u64,
    #[serde(default, rename = "S")]
    pub s: Vec<u64>,
    #[serde(default, rename = "T")]
    pub t: Vec<u64>,
}

/// The computed element: exact coefficients as ["numerator", "denominator"]
/// pairs aligned with `residues`, the odd primes among 3, 5, 7, 11, 13 where
/// the integrality check passes (empty when T is empty, where the check does
/// not apply), and whether the plus part vanishes.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SticklebergerResponse {
    pub schema: String,
    pub m: u64,
    #[serde(rename = "S")]
    pub s: Vec<u64>,
    #[serde(rename = "T")]
    pub t: Vec<u64>,
    pub residues: Vec<u64>,
    pub coeffs: Vec<[String; 2]>,
    pub integral_at: Vec<u64>,
    pub minus_pure: bool,
}

/// Runs the request through [`theta_with`] and packages the result.
pub fn stickelberger_response(req: &SticklebergerRequest) -> Result<SticklebergerResponse> {
    let extra: Vec<u64> = req.s.iter().copied().filter(|&v| v == 0 || req.m % v != 0).collect();
    let theta = theta_with(req.m, &extra, &req.t)?;
    Ok(build_response(&theta))
}

fn build_response(theta: &SticklebergerElement) -> SticklebergerResponse {
    let group = theta.units().group();
    let coeffs = (0..group.size() as usize)
        .map(|idx| {
            let c = theta.value().coeff(&group.element_at(idx));
            [c.numer().to_string(), c.denom().to_string()]
        })
        .collect();
    let integral_at = if theta.t_primes().is_empty() {
        Vec::new()
    } else {
        [3u64, 5, 7, 11, 13]
            .into_iter()
            .filter(|&p| integrality_check(theta, p).unwrap_or(false))
            .collect()
    };
    SticklebergerResponse {
        schema: SCHEMA.to_string(),
        m: theta.conductor(),
        s: theta.s_primes(),
        t: theta.t_primes(),
        residues: theta.units().residues().to_vec(),
        coeffs,
        integral_at,
        minus_pure: theta.plus_part().is_zero(),
    }
}
