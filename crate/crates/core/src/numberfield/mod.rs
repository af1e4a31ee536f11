//! Totally real number fields, their elements and fractional ideals.

mod field;
mod enumerate;
mod ideal;
mod min;
mod spec;
mod units;

pub use field::{FieldElement, TotallyRealField};
pub use enumerate::{enumerate_box, reduce_basis, DEFAULT_BOX_CAP};
pub use ideal::FractionalIdeal;
pub use min::{ideal_min, ideal_min_with_witness};
pub use spec::{element_from_spec, element_to_spec, ElementSpec, FieldSpec, IdealSpec, RatValue, UnitsSpec};
pub use units::{quadratic_fundamental_unit, totally_positive_generators, totally_positive_units, unit_group, UnitGroupData, UnitReport};
