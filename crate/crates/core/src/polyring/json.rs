//! JSON exchange format for polynomial systems.
//!
//! ```json
//! { "nvars": 2, "basis": "monomial",
//!   "polys": [ { "terms": [ { "exp": [2, 0], "re": 1.0, "im": 0.0 } ] } ] }
//! ```

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use super::{BasisKind, Exponent, MultiPoly, PolySystem};
use crate::error::{Result, TnfError};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermRecord {
    pub exp: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyRecord {
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub nvars: usize,
    pub basis: BasisKind,
    pub polys: Vec<PolyRecord>,
}

impl SystemFile {
    pub fn into_system(self) -> Result<PolySystem> {
        let polys = self
            .polys
            .into_iter()
            .map(|p| {
                MultiPoly::from_terms(
                    self.nvars,
                    self.basis,
                    p.terms
                        .into_iter()
                        .map(|t| (Exponent(t.exp), c64::new(t.re, t.im))),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        PolySystem::new(self.nvars, self.basis, polys)
    }

    pub fn from_system(system: &PolySystem) -> Self {
        SystemFile {
            nvars: system.nvars(),
            basis: system.kind(),
            polys: system
                .polys()
                .iter()
                .map(|p| PolyRecord {
                    terms: p
                        .terms()
                        .map(|(e, c)| TermRecord {
                            exp: e.0.clone(),
                            re: c.re,
                            im: c.im,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Parses a system from its JSON text.
pub fn parse_system(text: &str) -> Result<PolySystem> {
    let file: SystemFile =
        serde_json::from_str(text).map_err(|e| TnfError::Parse(e.to_string()))?;
    file.into_system()
}

/// Serializes a system as pretty-printed JSON with terms in support order.
pub fn system_to_json(system: &PolySystem) -> String {
    serde_json::to_string_pretty(&SystemFile::from_system(system))
        .expect("system records always serialize")
}
