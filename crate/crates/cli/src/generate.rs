use serde::Serialize;
use tnf_core::error::TnfError;
use tnf_core::polyring::{system_to_json, BasisKind};
use tnf_core::verify::{random_dense_system, synthetic_system};

use crate::GenKind;

#[derive(Serialize)]
struct RootsFile {
    roots: Vec<Vec<[f64; 2]>>,
}

/// System JSON and, for synthetic systems, the JSON list of its roots.
pub fn generate(
    kind: GenKind,
    n: usize,
    d: usize,
    seed: u64,
    basis: BasisKind,
) -> Result<(String, Option<String>), TnfError> {
    match kind {
        GenKind::Random => {
            let s = random_dense_system(n, d, seed, basis)?;
            Ok((system_to_json(&s) + "\n", None))
        }
        GenKind::Synthetic => {
            let (s, roots) = synthetic_system(n, d, seed)?;
            let s = s.to_kind(basis);
            let file = RootsFile {
                roots: roots
                    .iter()
                    .map(|z| z.iter().map(|c| [c.re, c.im]).collect())
                    .collect(),
            };
            let roots_json = serde_json::to_string_pretty(&file).expect("roots serialize") + "\n";
            Ok((system_to_json(&s) + "\n", Some(roots_json)))
        }
    }
}
