//! Flat umbilical surfaces in H³×ℝ² and H³×H³, computed through their flat
//! quadric embeddings.
//!
//! The crate constructs two two-parameter families of complete flat umbilical
//! surfaces — one substantial in H³×ℝ², one in H³×H³ — from their moduli
//! `(λ₁, λ₂)`, the constant eigenvalues of the second-factor projection
//! tensor `R`. All extrinsic data (fundamental forms, mean curvature, the
//! `R`/`S`/`T` tensors, Frenet frames and curvatures of the factor curves)
//! is evaluated numerically from the pseudo-Euclidean embedding using exact
//! truncated-Taylor jets, and every closed-form identity these surfaces
//! satisfy is checked as a residual against a declared tolerance.
//!
//! Module map:
//!
//! * [`metric`] — indefinite diagonal-signature linear algebra,
//! * [`jet`] — forward-mode jets (order 2 in two variables, order 4 in one),
//! * [`maps`] — composition-tree descriptions of parametric maps,
//! * [`geometry`] — the product space form, its flat embedding, and all
//!   pointwise extrinsic data of an immersed surface,
//! * [`families`] — the two umbilical families and their closed-form
//!   predictions,
//! * [`frenet`] — Frenet analysis of spacelike curves in ℝ⁴₁ (generic and
//!   null-curvature regimes) and the ℝ³₁/ℝ³ sub-cases,
//! * [`verify`] — the orchestrated check battery and its report.
//!
//! Core math is generic over the scalar type through [`scalar::Real`]
//! (implemented for `f32` and `f64`); concrete `f64` aliases live at the
//! crate root.

pub mod error;
pub mod families;
pub mod frenet;
pub mod geometry;
pub mod jet;
pub mod linalg;
pub mod maps;
pub mod metric;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};

/// `f64` instantiations of the core types.
pub type MVectorF64 = metric::MVector<f64>;
pub type SignatureF64 = metric::Signature;
pub type Jet2F64 = jet::Jet2<f64>;
pub type Jet1F64 = jet::Jet1<f64>;
pub type MapF64 = maps::MapDescription<f64>;
pub type CurveF64 = maps::CurveMap<f64>;
pub type SpaceF64 = geometry::ProductSpaceForm<f64>;
pub type PointDataF64 = geometry::ImmersionPointData<f64>;
pub type GridF64 = geometry::SurfaceGrid<f64>;
pub type FamilyF64 = families::Family<f64>;
