//! Reading command inputs: a path to a JSON or TOML file, or the same JSON inline.

use std::path::Path;

use serde::de::DeserializeOwned;

use hilbert_modular::cusps::{Cusp, CuspSpec};
use hilbert_modular::numberfield::{element_from_spec, ElementSpec, FieldSpec, IdealSpec, TotallyRealField};
use hilbert_modular::{Error, Result};

/// Parses `arg` as a file (by extension) when such a file exists, inline JSON otherwise.
pub fn load<T: DeserializeOwned>(what: &str, arg: &str) -> Result<T> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {what} file {arg}: {e}")))?;
        let is_toml = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
        return if is_toml {
            toml::from_str(&text).map_err(|e| Error::InvalidInput(format!("{what} file {arg}: {e}")))
        } else {
            serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{what} file {arg}: {e}")))
        };
    }
    serde_json::from_str(arg).map_err(|e| Error::InvalidInput(format!("{what} {arg:?}: {e}")))
}

/// A field file, inline JSON, or shorthand such as `sqrt:5`.
pub fn field(arg: &str) -> Result<TotallyRealField> {
    let spec: FieldSpec = if Path::new(arg).is_file() { load("field", arg)? } else { FieldSpec::parse_shorthand(arg)? };
    spec.build()
}

pub fn ideal(field: &TotallyRealField, what: &str, arg: &str) -> Result<hilbert_modular::numberfield::FractionalIdeal> {
    load::<IdealSpec>(what, arg)?.build(field)
}

/// `inf`, an element `[x0, x1]` for the cusp `(x : 1)`, or `{"alpha": .., "beta": ..}`.
pub fn cusp(field: &TotallyRealField, arg: &str) -> Result<Cusp> {
    let t = arg.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(Cusp::infinity(field));
    }
    if t.starts_with('[') {
        let x: ElementSpec = load("cusp", t)?;
        return Ok(Cusp::from_element(&element_from_spec(field, &x)?));
    }
    load::<CuspSpec>("cusp", t)?.build(field)
}

pub fn rational(what: &str, arg: &str) -> Result<num_rational::BigRational> {
    hilbert_modular::rational::parse_rational(arg)
        .ok_or_else(|| Error::InvalidInput(format!("{what}: {arg:?} is not a rational number")))
}
