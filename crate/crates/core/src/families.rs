//! The two families of complete flat umbilical surfaces, built from their
//! moduli.
//!
//! Family one lives in `H³_k × ℝ²` and is parametrized over `ℝ⁶₁` as
//!
//! ```text
//! F(s,t) = (a₁ cosh(s/c), a₁ sinh(s/c), a₂ cos(t/c), a₂ sin(t/c), b₁ s/c, b₂ t/c)
//! ```
//!
//! subject to `a₁² - a₂² = r²` and `a₁² + b₁² = c² = a₂² + b₂²`; family two
//! lives in `H³_{k1} × H³_{k2}` inside `ℝ⁸₂`,
//!
//! ```text
//! F(s,t) = (a₁ cosh(s/c), a₁ sinh(s/c), a₂ cos(t/c), a₂ sin(t/c),
//!           a₃ cosh(t/d), a₃ sinh(t/d), a₄ cos(s/d), a₄ sin(s/d))
//! ```
//!
//! subject to `a₁² - a₂² = r₁²`, `a₃² - a₄² = r₂²` and
//! `a₁²/c² + a₄²/d² = 1 = a₂²/c² + a₃²/d²`. In both cases the moduli
//! `0 < λ₁ < λ₂ < 1` are the constant eigenvalues of the tensor `R`, with
//! the coordinate directions as principal directions, and determine every
//! squared length above in closed form.

use crate::error::{Error, Result};
use crate::geometry::ProductSpaceForm;
use crate::maps::{Expr, MapDescription, Param};
use crate::scalar::Real;

/// Constraint-group residual tolerance enforced at construction time
/// (for `f64`; wider scalar types scale with their epsilon).
pub const CONSTRAINT_TOL: f64 = 1e-12;

fn constraint_tol<T: Real>() -> T {
    T::real(CONSTRAINT_TOL).max(T::epsilon() * T::real(32.0))
}

fn check_moduli<T: Real>(l1: T, l2: T) -> Result<()> {
    if !(l1 > T::zero() && l1 < l2 && l2 < T::one()) {
        return Err(Error::Moduli(format!(
            "moduli must satisfy 0 < lambda1 < lambda2 < 1, got ({l1}, {l2})"
        )));
    }
    Ok(())
}

/// Derived lengths of the `H³ × ℝ²` family.
#[derive(Clone, Copy, Debug)]
pub struct Example1Params<T> {
    pub k: T,
    pub lambda1: T,
    pub lambda2: T,
    pub a1: T,
    pub a2: T,
    pub b1: T,
    pub b2: T,
    pub c: T,
    pub r: T,
}

impl<T: Real> Example1Params<T> {
    /// Largest deviation in the constraint group
    /// `a₁² - a₂² = r²`, `a₁² + b₁² = c² = a₂² + b₂²`.
    pub fn constraint_residual(&self) -> T {
        let (a1s, a2s) = (self.a1 * self.a1, self.a2 * self.a2);
        let (b1s, b2s) = (self.b1 * self.b1, self.b2 * self.b2);
        let cs = self.c * self.c;
        let r1 = (a1s - a2s - self.r * self.r).abs();
        let r2 = (a1s + b1s - cs).abs();
        let r3 = (a2s + b2s - cs).abs();
        r1.max(r2).max(r3)
    }
}

/// Derived lengths of the `H³ × H³` family.
#[derive(Clone, Copy, Debug)]
pub struct Example2Params<T> {
    pub k1: T,
    pub k2: T,
    pub lambda1: T,
    pub lambda2: T,
    pub a1: T,
    pub a2: T,
    pub a3: T,
    pub a4: T,
    pub c: T,
    pub d: T,
    pub r1: T,
    pub r2: T,
}

impl<T: Real> Example2Params<T> {
    /// Largest deviation in the constraint group
    /// `a₁² - a₂² = r₁²`, `a₃² - a₄² = r₂²`,
    /// `a₁²/c² + a₄²/d² = 1 = a₂²/c² + a₃²/d²`.
    pub fn constraint_residual(&self) -> T {
        let sq = |x: T| x * x;
        let g1 = (sq(self.a1) - sq(self.a2) - sq(self.r1)).abs();
        let g2 = (sq(self.a3) - sq(self.a4) - sq(self.r2)).abs();
        let g3 = (sq(self.a1) / sq(self.c) + sq(self.a4) / sq(self.d) - T::one()).abs();
        let g4 = (sq(self.a2) / sq(self.c) + sq(self.a3) / sq(self.d) - T::one()).abs();
        g1.max(g2).max(g3).max(g4)
    }
}

/// Builds the `H³_k × ℝ²` family member with curvature `k < 0` and moduli
/// `0 < λ₁ < λ₂ < 1`. Positive square roots are taken throughout; sign flips
/// are ambient isometries.
pub fn build_example1<T: Real>(
    k: T,
    lambda1: T,
    lambda2: T,
) -> Result<(Example1Params<T>, MapDescription<T>)> {
    if k >= T::zero() {
        return Err(Error::Curvature(format!(
            "the hyperbolic factor needs k < 0, got {k}"
        )));
    }
    check_moduli(lambda1, lambda2)?;
    let rr = -k.recip();
    let gap = lambda2 - lambda1;
    let a1 = (rr * (T::one() - lambda1) / gap).sqrt();
    let a2 = (rr * (T::one() - lambda2) / gap).sqrt();
    let b1 = (rr * lambda1 / gap).sqrt();
    let b2 = (rr * lambda2 / gap).sqrt();
    let c = (rr / gap).sqrt();
    let params = Example1Params {
        k,
        lambda1,
        lambda2,
        a1,
        a2,
        b1,
        b2,
        c,
        r: rr.sqrt(),
    };
    let residual = params.constraint_residual();
    if residual > constraint_tol::<T>() {
        return Err(Error::Moduli(format!(
            "derived parameters violate the constraint group by {residual}"
        )));
    }
    let rate = c.recip();
    let space = space_example1(k)?;
    let map = MapDescription::new(
        vec![
            Expr::wave(a1, Expr::cosh, rate, Param::S),
            Expr::wave(a1, Expr::sinh, rate, Param::S),
            Expr::wave(a2, Expr::cos, rate, Param::T),
            Expr::wave(a2, Expr::sin, rate, Param::T),
            Expr::scaled(b1 * rate, Expr::var(Param::S)),
            Expr::scaled(b2 * rate, Expr::var(Param::T)),
        ],
        space.signature().clone(),
    )?;
    Ok((params, map))
}

/// Builds the `H³_{k1} × H³_{k2}` family member, `k1, k2 < 0`.
pub fn build_example2<T: Real>(
    k1: T,
    k2: T,
    lambda1: T,
    lambda2: T,
) -> Result<(Example2Params<T>, MapDescription<T>)> {
    if k1 >= T::zero() || k2 >= T::zero() {
        return Err(Error::Curvature(format!(
            "both factors must be hyperbolic, got k1 = {k1}, k2 = {k2}"
        )));
    }
    check_moduli(lambda1, lambda2)?;
    let rr1 = -k1.recip();
    let rr2 = -k2.recip();
    let gap = lambda2 - lambda1;
    let a1 = (rr1 * (T::one() - lambda1) / gap).sqrt();
    let a2 = (rr1 * (T::one() - lambda2) / gap).sqrt();
    let a3 = (rr2 * lambda2 / gap).sqrt();
    let a4 = (rr2 * lambda1 / gap).sqrt();
    let c = (rr1 / gap).sqrt();
    let d = (rr2 / gap).sqrt();
    let params = Example2Params {
        k1,
        k2,
        lambda1,
        lambda2,
        a1,
        a2,
        a3,
        a4,
        c,
        d,
        r1: rr1.sqrt(),
        r2: rr2.sqrt(),
    };
    let residual = params.constraint_residual();
    if residual > constraint_tol::<T>() {
        return Err(Error::Moduli(format!(
            "derived parameters violate the constraint group by {residual}"
        )));
    }
    let (rc, rd) = (c.recip(), d.recip());
    let space = space_example2(k1, k2)?;
    let map = MapDescription::new(
        vec![
            Expr::wave(a1, Expr::cosh, rc, Param::S),
            Expr::wave(a1, Expr::sinh, rc, Param::S),
            Expr::wave(a2, Expr::cos, rc, Param::T),
            Expr::wave(a2, Expr::sin, rc, Param::T),
            Expr::wave(a3, Expr::cosh, rd, Param::T),
            Expr::wave(a3, Expr::sinh, rd, Param::T),
            Expr::wave(a4, Expr::cos, rd, Param::S),
            Expr::wave(a4, Expr::sin, rd, Param::S),
        ],
        space.signature().clone(),
    )?;
    Ok((params, map))
}

fn space_example1<T: Real>(k: T) -> Result<ProductSpaceForm<T>> {
    ProductSpaceForm::new(k, T::zero(), 3, 2)
}

fn space_example2<T: Real>(k1: T, k2: T) -> Result<ProductSpaceForm<T>> {
    ProductSpaceForm::new(k1, k2, 3, 3)
}

/// Which curvature-vector regime a factor curve is in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveRegime {
    /// `<γ'', γ''> ≠ 0`: the orthonormal Frenet frame applies.
    Generic,
    /// `<γ'', γ''> = 0`: the pseudo-orthonormal frame applies.
    LightlikeCurvature,
}

/// Closed-form invariants of one factor curve: the signed squared norm of
/// its curvature vector and the squared Frenet curvatures.
///
/// For family one the list is `[k̂₁², τ²]` (three-dimensional ambient);
/// for family two it is `[k̂₁², k̂₂², k̂₃²]` in the generic regime and
/// `[k̃₁², k̃₂²]` in the lightlike one.
#[derive(Clone, Debug)]
pub struct CurvePrediction<T> {
    pub regime: CurveRegime,
    pub curvature_vector_sq: T,
    pub curvature_squares: Vec<T>,
}

/// One of the two families, carrying its derived parameters.
#[derive(Clone, Debug)]
pub enum Family<T> {
    One(Example1Params<T>),
    Two(Example2Params<T>),
}

impl<T: Real> Family<T> {
    pub fn example1(k: T, lambda1: T, lambda2: T) -> Result<Self> {
        build_example1(k, lambda1, lambda2).map(|(p, _)| Family::One(p))
    }

    pub fn example2(k1: T, k2: T, lambda1: T, lambda2: T) -> Result<Self> {
        build_example2(k1, k2, lambda1, lambda2).map(|(p, _)| Family::Two(p))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::One(_) => "example1",
            Family::Two(_) => "example2",
        }
    }

    pub fn k1(&self) -> T {
        match self {
            Family::One(p) => p.k,
            Family::Two(p) => p.k1,
        }
    }

    pub fn k2(&self) -> T {
        match self {
            Family::One(_) => T::zero(),
            Family::Two(p) => p.k2,
        }
    }

    pub fn kappa(&self) -> T {
        self.k1() + self.k2()
    }

    pub fn lambda(&self) -> (T, T) {
        match self {
            Family::One(p) => (p.lambda1, p.lambda2),
            Family::Two(p) => (p.lambda1, p.lambda2),
        }
    }

    pub fn space(&self) -> ProductSpaceForm<T> {
        match self {
            Family::One(p) => space_example1(p.k).expect("validated at construction"),
            Family::Two(p) => space_example2(p.k1, p.k2).expect("validated at construction"),
        }
    }

    pub fn map(&self) -> MapDescription<T> {
        match self {
            Family::One(p) => {
                build_example1(p.k, p.lambda1, p.lambda2)
                    .expect("validated at construction")
                    .1
            }
            Family::Two(p) => {
                build_example2(p.k1, p.k2, p.lambda1, p.lambda2)
                    .expect("validated at construction")
                    .1
            }
        }
    }

    /// `|H|² = -k₁(1-λ₁)(1-λ₂) - k₂ λ₁ λ₂`.
    pub fn h_norm_sq(&self) -> T {
        let (l1, l2) = self.lambda();
        -self.k1() * (T::one() - l1) * (T::one() - l2) - self.k2() * l1 * l2
    }

    /// Ambient closed form of the mean-curvature field `h_*H(s,t)`.
    pub fn h_closed_form(&self) -> MapDescription<T> {
        match self {
            Family::One(p) => {
                let m = p.k * p.a1 * p.a2 / (p.c * p.c);
                let rate = p.c.recip();
                MapDescription::new(
                    vec![
                        Expr::wave(m * p.a2, Expr::cosh, rate, Param::S),
                        Expr::wave(m * p.a2, Expr::sinh, rate, Param::S),
                        Expr::wave(m * p.a1, Expr::cos, rate, Param::T),
                        Expr::wave(m * p.a1, Expr::sin, rate, Param::T),
                        Expr::constant(T::zero()),
                        Expr::constant(T::zero()),
                    ],
                    self.space().signature().clone(),
                )
                .expect("dimensions match")
            }
            Family::Two(p) => {
                let m1 = p.k1 * p.a1 * p.a2 / (p.c * p.c);
                let m2 = p.k2 * p.a3 * p.a4 / (p.d * p.d);
                let (rc, rd) = (p.c.recip(), p.d.recip());
                MapDescription::new(
                    vec![
                        Expr::wave(m1 * p.a2, Expr::cosh, rc, Param::S),
                        Expr::wave(m1 * p.a2, Expr::sinh, rc, Param::S),
                        Expr::wave(m1 * p.a1, Expr::cos, rc, Param::T),
                        Expr::wave(m1 * p.a1, Expr::sin, rc, Param::T),
                        Expr::wave(m2 * p.a4, Expr::cosh, rd, Param::T),
                        Expr::wave(m2 * p.a4, Expr::sinh, rd, Param::T),
                        Expr::wave(m2 * p.a3, Expr::cos, rd, Param::S),
                        Expr::wave(m2 * p.a3, Expr::sin, rd, Param::S),
                    ],
                    self.space().signature().clone(),
                )
                .expect("dimensions match")
            }
        }
    }

    /// Closed form of `<Z_i, Z_i>` for the coordinate curvature vectors.
    pub fn z_norm_sq(&self, i: usize) -> T {
        let (l1, l2) = self.lambda();
        let (li, lj) = if i == 1 { (l1, l2) } else { (l2, l1) };
        match self {
            Family::One(p) => p.k * (lj - li) * (T::one() - li),
            Family::Two(_) => (li - lj) * (self.kappa() * li - self.k1()),
        }
    }

    /// Coefficient `κ λ_j - k₁` in the reduced Codazzi equation
    /// `∇⊥_{X_i} H = (κ λ_j - k₁) ξ_i`.
    pub fn codazzi_coeff(&self, i: usize) -> T {
        let (l1, l2) = self.lambda();
        let lj = if i == 1 { l2 } else { l1 };
        self.kappa() * lj - self.k1()
    }

    /// Closed-form Frenet data of factor curve `i ∈ {1, 2}`. The regime is
    /// decided exactly in moduli arithmetic: `κ λ_i - k₁ = 0` selects the
    /// lightlike-curvature frame.
    pub fn curve_prediction(&self, i: usize) -> CurvePrediction<T> {
        let (l1, l2) = self.lambda();
        let (li, lj) = if i == 1 { (l1, l2) } else { (l2, l1) };
        match self {
            Family::One(p) => {
                let cvs = p.k * (lj - li) * (T::one() - li);
                let tau_sq = -p.k * li * (lj - li).abs();
                CurvePrediction {
                    regime: CurveRegime::Generic,
                    curvature_vector_sq: cvs,
                    curvature_squares: vec![cvs.abs(), tau_sq],
                }
            }
            Family::Two(p) => {
                let kappa = self.kappa();
                let marker = kappa * li - p.k1;
                let cvs = (li - lj) * marker;
                if marker == T::zero() {
                    let kt1 =
                        p.k1 * p.k2 * (kappa * lj - p.k1) * (kappa * lj - p.k1) / (kappa * kappa);
                    let diff = p.k1 - p.k2;
                    let kt2 = diff * diff / (T::real(4.0) * p.k1 * p.k2);
                    CurvePrediction {
                        regime: CurveRegime::LightlikeCurvature,
                        curvature_vector_sq: cvs,
                        curvature_squares: vec![kt1, kt2],
                    }
                } else {
                    let kh1 = cvs.abs();
                    let kh2 = kappa * kappa * (li - lj).abs() * li * (T::one() - li) / marker.abs();
                    let kh3 = p.k1 * p.k2 * (li - lj).abs() / marker.abs();
                    CurvePrediction {
                        regime: CurveRegime::Generic,
                        curvature_vector_sq: cvs,
                        curvature_squares: vec![kh1, kh2, kh3],
                    }
                }
            }
        }
    }
}

/// Free-function forms of the per-curve predictions.
pub fn predicted_curve_invariants<T: Real>(family: &Family<T>, which: usize) -> CurvePrediction<T> {
    assert!(which == 1 || which == 2, "curve index must be 1 or 2");
    family.curve_prediction(which)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_parameters_family_one() {
        let (p, _) = build_example1(-1.0f64, 0.25, 0.5).unwrap();
        assert!((p.a1 * p.a1 - 3.0).abs() < 1e-12);
        assert!((p.a2 * p.a2 - 2.0).abs() < 1e-12);
        assert!((p.b1 * p.b1 - 1.0).abs() < 1e-12);
        assert!((p.b2 * p.b2 - 2.0).abs() < 1e-12);
        assert!((p.c * p.c - 4.0).abs() < 1e-12);
        assert!(p.constraint_residual() <= 1e-12);
    }

    #[test]
    fn reference_parameters_family_two() {
        let (p, _) = build_example2(-1.0f64, -3.0, 0.25, 0.5).unwrap();
        assert!((p.a1 * p.a1 - 3.0).abs() < 1e-12);
        assert!((p.a2 * p.a2 - 2.0).abs() < 1e-12);
        assert!((p.a3 * p.a3 - 2.0 / 3.0).abs() < 1e-12);
        assert!((p.a4 * p.a4 - 1.0 / 3.0).abs() < 1e-12);
        assert!((p.c * p.c - 4.0).abs() < 1e-12);
        assert!((p.d * p.d - 4.0 / 3.0).abs() < 1e-12);
        assert!(p.constraint_residual() <= 1e-12);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(matches!(
            build_example1(-1.0f64, 0.5, 0.5),
            Err(Error::Moduli(_))
        ));
        assert!(matches!(
            build_example1(-1.0f64, 0.5, 0.25),
            Err(Error::Moduli(_))
        ));
        assert!(matches!(
            build_example1(1.0f64, 0.25, 0.5),
            Err(Error::Curvature(_))
        ));
        assert!(matches!(
            build_example2(-1.0f64, 0.0, 0.25, 0.5),
            Err(Error::Curvature(_))
        ));
        assert!(matches!(
            build_example2(-1.0f64, -3.0, 0.0, 0.5),
            Err(Error::Moduli(_))
        ));
    }

    #[test]
    fn map_value_at_origin() {
        let (p, map) = build_example1(-1.0f64, 0.25, 0.5).unwrap();
        let v = map.eval_point(0.0, 0.0);
        assert_eq!(v.coords()[0], p.a1);
        assert_eq!(v.coords()[1], 0.0);
        assert_eq!(v.coords()[2], p.a2);
        for &x in &v.coords()[3..] {
            assert_eq!(x, 0.0);
        }
    }

    #[test]
    fn mean_curvature_norms() {
        let fam1 = Family::example1(-1.0f64, 0.25, 0.5).unwrap();
        assert!((fam1.h_norm_sq() - 0.375).abs() < 1e-15);
        let fam2 = Family::example2(-1.0f64, -3.0, 0.25, 0.5).unwrap();
        assert!((fam2.h_norm_sq() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn family_one_curve_invariants() {
        let fam = Family::example1(-1.0f64, 0.25, 0.5).unwrap();
        let c1 = fam.curve_prediction(1);
        assert_eq!(c1.regime, CurveRegime::Generic);
        assert!((c1.curvature_vector_sq + 3.0 / 16.0).abs() < 1e-15);
        assert!((c1.curvature_squares[1] - 1.0 / 16.0).abs() < 1e-15);
        let c2 = fam.curve_prediction(2);
        assert!((c2.curvature_vector_sq - 1.0 / 8.0).abs() < 1e-15);
        assert!((c2.curvature_squares[1] - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn family_two_regimes_and_curvatures() {
        let fam = Family::example2(-1.0f64, -3.0, 0.25, 0.5).unwrap();
        // κ λ₁ - k₁ = -4·¼ + 1 = 0: the first curve is the lightlike one
        let c1 = fam.curve_prediction(1);
        assert_eq!(c1.regime, CurveRegime::LightlikeCurvature);
        assert!((c1.curvature_squares[0] - 3.0 / 16.0).abs() < 1e-15);
        assert!((c1.curvature_squares[1] - 1.0 / 3.0).abs() < 1e-15);
        let c2 = fam.curve_prediction(2);
        assert_eq!(c2.regime, CurveRegime::Generic);
        assert!((c2.curvature_squares[0] - 0.25).abs() < 1e-15);
        assert!((c2.curvature_squares[1] - 1.0).abs() < 1e-15);
        assert!((c2.curvature_squares[2] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn equal_curvatures_move_the_null_curve() {
        // κ λ_i - k₁ = -2 λ_i + 1 vanishes exactly at λ_i = 1/2
        let fam = Family::example2(-1.0f64, -1.0, 0.25, 0.5).unwrap();
        assert_eq!(fam.curve_prediction(1).regime, CurveRegime::Generic);
        assert_eq!(
            fam.curve_prediction(2).regime,
            CurveRegime::LightlikeCurvature
        );
    }

    #[test]
    fn constraints_hold_across_the_moduli_square() {
        for i in 1..10 {
            for j in (i + 1)..11 {
                let l1 = i as f64 / 11.0;
                let l2 = j as f64 / 11.0;
                let (p1, _) = build_example1(-1.7f64, l1, l2).unwrap();
                assert!(p1.constraint_residual() <= 1e-12, "({l1}, {l2})");
                let (p2, _) = build_example2(-0.8f64, -2.3, l1, l2).unwrap();
                assert!(p2.constraint_residual() <= 1e-12, "({l1}, {l2})");
            }
        }
    }

    #[test]
    fn codazzi_coefficient_reference_value() {
        let fam = Family::example1(-1.0f64, 0.25, 0.5).unwrap();
        assert!((fam.codazzi_coeff(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn z_norm_reference_values() {
        let fam = Family::example1(-1.0f64, 0.25, 0.5).unwrap();
        assert!((fam.z_norm_sq(1) + 3.0 / 16.0).abs() < 1e-15);
        assert!((fam.z_norm_sq(2) - 1.0 / 8.0).abs() < 1e-15);
    }
}
