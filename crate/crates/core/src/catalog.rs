//! A fixed catalog of decomposition models exercised by the test and
//! verification suites: one representative per interesting shape at p = 3,
//! truncated at levels n = 1 < m = 2.
//!
//! The shapes: trivial torsion (r = 1), a split Z/3 torsion factor, a mixing
//! model whose distinguished element has a nontrivial torsion part, a torsion
//! factor of order prime to p, and a bicyclic torsion part (r = 3).

use crate::error::Result;
use crate::fitting::DecompositionModel;
use crate::group_ring::FiniteAbelianGroup;

/// A named model from the default catalog.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub model: DecompositionModel,
}

/// The default catalog at the given coefficient precision (coefficients in
/// Z/3^precision).  Order is fixed; names are stable identifiers.
pub fn default_catalog(precision: u32) -> Result<Vec<CatalogEntry>> {
    let trivial = FiniteAbelianGroup::trivial();
    let z3 = FiniteAbelianGroup::new(vec![3])?;
    let z2 = FiniteAbelianGroup::new(vec![2])?;
    let z33 = FiniteAbelianGroup::new(vec![3, 3])?;
    Ok(vec![
        CatalogEntry {
            name: "r1-trivial-torsion",
            model: DecompositionModel::new(
                trivial.clone(),
                vec![],
                trivial.identity(),
                1,
                3,
                precision,
                2,
                1,
            )?,
        },
        CatalogEntry {
            name: "r2-split-z3",
            model: DecompositionModel::new(
                z3.clone(),
                vec![z3.generator(0)],
                z3.identity(),
                1,
                3,
                precision,
                2,
                1,
            )?,
        },
        CatalogEntry {
            name: "r2-mixing-z3",
            model: DecompositionModel::new(
                z3.clone(),
                vec![z3.generator(0)],
                z3.generator(0),
                1,
                3,
                precision,
                2,
                1,
            )?,
        },
        CatalogEntry {
            name: "r2-prime-torsion",
            model: DecompositionModel::new(
                z2.clone(),
                vec![z2.generator(0)],
                z2.identity(),
                1,
                3,
                precision,
                2,
                1,
            )?,
        },
        CatalogEntry {
            name: "r3-bicyclic",
            model: DecompositionModel::new(
                z33.clone(),
                vec![z33.generator(0), z33.generator(1)],
                z33.identity(),
                1,
                3,
                precision,
                2,
                1,
            )?,
        },
    ])
}
