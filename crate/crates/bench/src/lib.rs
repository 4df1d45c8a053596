//! Fixtures shared by the benchmarks.

use tnf_core::polyring::{BasisKind, PolySystem};
use tnf_core::rootfind::CokernelMethod;
use tnf_core::solver::{BasisSelect, ColumnMode, PathChoice, SolveConfig};
use tnf_core::verify::random_dense_system;

/// Grid cells small enough to bench in a few seconds each.
pub const CELLS: [(usize, usize); 4] = [(2, 5), (2, 10), (3, 3), (3, 4)];

pub fn system(n: usize, d: usize) -> PolySystem {
    random_dense_system(n, d, 1, BasisKind::Monomial).expect("valid sizes")
}

/// The three construction variants: full resultant, fewer multiples, degree by degree.
pub fn variants() -> [(&'static str, SolveConfig); 3] {
    let base = SolveConfig {
        path: PathChoice::Generic,
        seed: 1,
        ..Default::default()
    };
    [
        ("tnf", base.clone()),
        ("fm", SolveConfig { columns: ColumnMode::Fm, ..base.clone() }),
        ("dbd", SolveConfig { cokernel: CokernelMethod::Dbd, ..base }),
    ]
}

pub fn basis_selections() -> [(&'static str, SolveConfig); 2] {
    let base = SolveConfig {
        path: PathChoice::Generic,
        seed: 1,
        ..Default::default()
    };
    [
        ("qr", base.clone()),
        ("svd", SolveConfig { basis_select: BasisSelect::Svd, ..base }),
    ]
}
