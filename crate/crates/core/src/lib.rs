//! Exact computations in the Cremona group of projective space over Q and
//! prime fields: certified birational maps, one-parameter families of them,
//! transvection decompositions, and explicit families connecting any two maps.

pub mod error;
pub mod family;
pub mod lingroup;
pub mod map;
pub mod paths;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod upoly;

pub use error::{CremonaError, Result};
pub use poly::{multi_gcd, parse_param_poly, parse_poly, Coeff, CoeffDomain, Monomial, MultiPoly, ParamPoly, Poly};
pub use scalar::{nth_power_class, Field, PowerClass, Scalar};
pub use family::{conj_limit, Family, FamilyReport, SampleReport};
pub use lingroup::{det_class, pgl2_enumerate, psl_path, sl_decompose, transvection_to_point, DetClass, FiniteGroupTable, ParamMatrix, SmallField, Transvection, TransvectionWord};
pub use paths::{commutator_fixer, connect, connect_linear, find_local_iso_point, linear_plan, PathPlan, PathStep, DEFAULT_HEIGHT_BOUND};
pub use map::{CremonaMap, Derivative, Evaluation, ProjPoint, RawTuple};
pub use matrix::{Matrix, ProjMatrix};
pub use upoly::UPoly;
