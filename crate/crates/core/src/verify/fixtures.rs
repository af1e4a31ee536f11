use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::TestCurve;
use crate::numberfield::FieldSpec;
use crate::toroidal::FanJson;

const CURVES: &str = include_str!("../../fixtures/curves.json");
const FANS: &str = include_str!("../../fixtures/fans.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFixture {
    pub name: String,
    pub field: FieldSpec,
    pub fan: FanJson,
}

#[derive(Clone, Debug)]
pub struct Fixtures {
    pub curves: Vec<TestCurve>,
    pub fans: Vec<FanFixture>,
}

impl Fixtures {
    /// The fixtures compiled into the library.
    pub fn builtin() -> Self {
        Fixtures {
            curves: serde_json::from_str(CURVES).expect("shipped curve fixtures parse"),
            fans: serde_json::from_str(FANS).expect("shipped fan fixtures parse"),
        }
    }

    /// Reads `curves.json` and `fans.json` from a directory. A missing file
    /// falls back to the shipped one; a malformed file is an error.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut out = Fixtures::builtin();
        let curves = dir.join("curves.json");
        if curves.exists() {
            out.curves = read_json(&curves)?;
        }
        let fans = dir.join("fans.json");
        if fans.exists() {
            out.fans = read_json(&fans)?;
        }
        Ok(out)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}
