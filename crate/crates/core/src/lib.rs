//! Conformal invariants of spacelike hypersurfaces in Lorentzian space forms.

pub mod ambient;
pub mod catalog;
pub mod checker;
pub mod conformal;
pub mod dsl;
pub mod error;
pub mod identities;
pub mod jet;
pub mod linalg;
pub mod probe;
pub mod report;
pub mod roots;
pub mod sampling;
pub mod scalar;
pub mod shape;

pub use ambient::{inner_s, space_form_residual, AmbientForm, AmbientKind};
pub use catalog::{build_entry, oracle_eigenvalues, solve_inner_hypersurface, CatalogEntry, Family, FamilyParams};
pub use checker::{check, check_and_classify, classify, theorem1_crosscheck, Classification, Tolerances, Verdict};
pub use conformal::{conformal_factor, invariants_at, invariants_oriented, tau_derivatives, ConformalData};
pub use dsl::{parse_chart, parse_expr, ChartImmersion, Expr};
pub use error::{Error, Result};
pub use identities::{identity_suite, IdentityResiduals};
pub use jet::{fd_check, Jet4};
pub use probe::{invariance_probe, ProbeTransform};
pub use report::{canonical_json, run, CheckKind, InputSpec, Report, RunConfig};
pub use sampling::sample_points;
pub use scalar::Real;
pub use shape::{fundamental_forms, induced_metric, second_form, unit_normal, FundamentalForms, Orientation};

/// Double precision jet.
pub type Jet = Jet4<f64>;
/// Double precision pointwise invariants.
pub type Invariants = ConformalData<f64>;
