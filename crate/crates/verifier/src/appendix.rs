//! Every check in one run, as used by the command line and the acceptance
//! suite.

use serde::Serialize;

use fock_core::Exec;

use crate::constants::{eval_constants, ConstantsReport};
use crate::diagonal::{check_diagonal_formulas, DiagonalFamily, DiagonalReport};
use crate::families::{check_submatrix_positivity, FamilyGrid, PositivityReport, SubmatrixFamily};
use crate::identities::{check_operator_identities, IdentityReport};
use crate::scalar::{check_scalar_inequalities_to, ScalarReport, GRID_LIMIT};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AppendixSettings {
    pub diagonal_max: u32,
    pub grid: FamilyGrid,
    pub scalar_limit: u32,
    pub samples: usize,
    pub seed: u64,
    pub identity_cutoff: u32,
}

impl Default for AppendixSettings {
    fn default() -> Self {
        Self {
            diagonal_max: 20,
            grid: FamilyGrid::default(),
            scalar_limit: GRID_LIMIT,
            samples: 100_000,
            seed: 1,
            identity_cutoff: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixReport {
    pub settings: AppendixSettings,
    pub constants: ConstantsReport,
    pub diagonals: Vec<DiagonalReport>,
    pub families: Vec<PositivityReport>,
    pub scalars: ScalarReport,
    pub identities: IdentityReport,
}

impl AppendixReport {
    pub fn constants_ok(&self) -> bool {
        self.constants.all_match()
    }

    pub fn diagonals_ok(&self) -> bool {
        self.diagonals.iter().all(DiagonalReport::passed)
    }

    pub fn families_ok(&self) -> bool {
        self.families.iter().all(PositivityReport::passed)
    }

    pub fn scalars_ok(&self) -> bool {
        self.scalars.passed()
    }

    pub fn identities_ok(&self) -> bool {
        self.identities.passed()
    }

    pub fn passed(&self) -> bool {
        self.constants_ok() && self.diagonals_ok() && self.families_ok() && self.scalars_ok() && self.identities_ok()
    }
}

pub fn verify_appendix(settings: AppendixSettings, exec: Exec) -> Result<AppendixReport> {
    let (_, constants) = eval_constants();
    let diagonals = DiagonalFamily::ALL
        .iter()
        .map(|&f| check_diagonal_formulas(f, settings.diagonal_max, settings.diagonal_max, exec))
        .collect::<Result<Vec<_>>>()?;
    let families = SubmatrixFamily::ALL.iter().map(|&f| check_submatrix_positivity(f, settings.grid, exec)).collect();
    let scalars = check_scalar_inequalities_to(settings.scalar_limit, settings.samples, settings.seed, exec)?;
    let identities = check_operator_identities(settings.identity_cutoff, exec)?;
    Ok(AppendixReport { settings, constants, diagonals, families, scalars, identities })
}
