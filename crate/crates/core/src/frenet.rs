//! Frenet analysis of unit-speed spacelike curves in `ℝ⁴₁`, together with
//! the `ℝ³₁`/`ℝ³` sub-cases the first family needs.
//!
//! Two regimes, split on the causal type of the curvature vector `γ''`:
//!
//! * generic (`<γ'',γ''> ≠ 0`) — orthonormal frame `{t, n₁, n₂, n₃}` with
//!   curvatures `k̂₁, k̂₂, k̂₃` and signs `ε_i = <n_i, n_i>`, satisfying
//!   `t' = k̂₁n₁`, `n₁' = -ε₁k̂₁t + k̂₂n₂`, `n₂' = ε₃k̂₂n₁ + k̂₃n₃`,
//!   `n₃' = ε₁k̂₃n₂`;
//! * lightlike curvature (`<γ'',γ''> = 0`, `γ'' ≠ 0`) — pseudo-orthonormal
//!   frame `{t, ñ₁, ñ₂, ñ₃}` with `ñ₁ = γ''` and `ñ₃` the unique null
//!   vector in `{t, ñ₂}^⊥` pairing to `<ñ₁, ñ₃> = 1`, satisfying
//!   `t' = ñ₁`, `ñ₁' = k̃₁ñ₂`, `ñ₂' = -k̃₂ñ₁ - k̃₁ñ₃`,
//!   `ñ₃' = -t + k̃₂ñ₂`. The `-t` term is forced by the normalization:
//!   differentiating `<ñ₃, t> = 0` against `t' = ñ₁` gives
//!   `<ñ₃', t> = -<ñ₃, ñ₁> = -1`.
//!
//! All derivatives come from order-4 jets, so the returned frames carry the
//! residuals of the displayed equations instead of truncation error.

use crate::error::{Error, Result};
use crate::jet::{Jet1, Jet1Point, MapValue};
use crate::linalg::det4;
use crate::maps::{CurveMap, MapDescription, Param};
use crate::metric::{CausalType, MVector, Signature};
use crate::scalar::Real;

/// Allowed deviation of `<γ', γ'>` from 1.
pub const UNIT_SPEED_TOL: f64 = 1e-9;

/// Vector-of-jets helpers: a curve is a `Vec<Jet1>` plus a signature.
fn deriv<T: Real>(v: &[Jet1<T>]) -> Vec<Jet1<T>> {
    v.iter().map(Jet1::derivative).collect()
}

fn inner_jet<T: Real>(a: &[Jet1<T>], b: &[Jet1<T>], sig: &Signature) -> Jet1<T> {
    let mut acc = Jet1::constant(T::zero());
    for ((x, y), &s) in a.iter().zip(b).zip(sig.signs()) {
        let p = x.mul(y);
        acc = if s == 1 { acc.add(&p) } else { acc.sub(&p) };
    }
    acc
}

fn add_vec<T: Real>(a: &[Jet1<T>], b: &[Jet1<T>]) -> Vec<Jet1<T>> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn sub_vec<T: Real>(a: &[Jet1<T>], b: &[Jet1<T>]) -> Vec<Jet1<T>> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn scale_vec<T: Real>(a: &[Jet1<T>], c: &Jet1<T>) -> Vec<Jet1<T>> {
    a.iter().map(|x| x.mul(c)).collect()
}

fn scale_vec_const<T: Real>(a: &[Jet1<T>], c: T) -> Vec<Jet1<T>> {
    a.iter().map(|x| x.scale(c)).collect()
}

fn value_vec<T: Real>(a: &[Jet1<T>], sig: &Signature) -> MVector<T> {
    MVector::new(a.iter().map(|x| x.value()).collect(), sig.clone())
        .expect("lengths match by construction")
}

fn aux_norm_value<T: Real>(a: &[Jet1<T>]) -> T {
    a.iter().map(|x| x.value() * x.value()).sum::<T>().sqrt()
}

/// Metric-orthogonal complement of three jet vectors in dimension 4: the
/// Euclidean generalized cross product with the index raised by the
/// signature.
fn cross4<T: Real>(u: &[Jet1<T>], v: &[Jet1<T>], w: &[Jet1<T>], sig: &Signature) -> Vec<Jet1<T>> {
    let mut out = Vec::with_capacity(4);
    for d in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != d).collect();
        // 3x3 determinant of jets by cofactor expansion
        let m = |r: &[Jet1<T>], c: usize| r[cols[c]];
        let a = m(u, 0).mul(&m(v, 1).mul(&m(w, 2)).sub(&m(v, 2).mul(&m(w, 1))));
        let b = m(u, 1).mul(&m(v, 0).mul(&m(w, 2)).sub(&m(v, 2).mul(&m(w, 0))));
        let c3 = m(u, 2).mul(&m(v, 0).mul(&m(w, 1)).sub(&m(v, 1).mul(&m(w, 0))));
        let mut minor = a.sub(&b).add(&c3);
        if d % 2 == 1 {
            minor = minor.neg();
        }
        // raise the index: x_d = ε_d y_d keeps <x, u> = Σ y_d u_d = 0
        if sig.sign(d) == -1 {
            minor = minor.neg();
        }
        out.push(minor);
    }
    out
}

/// Frenet data of a curve with non-null curvature vector. When the second
/// curvature vanishes (planar curve) the chain stops: `kappa2 = 0` and the
/// later frame fields are absent.
#[derive(Clone, Debug)]
pub struct FrenetGeneric<T> {
    pub tangent: MVector<T>,
    pub normal1: MVector<T>,
    pub eps1: i8,
    pub kappa1: T,
    pub kappa2: T,
    pub normal2: Option<MVector<T>>,
    /// Defined by the third Frenet equation; sign is as computed.
    pub kappa3: Option<T>,
    pub eps3: Option<i8>,
    pub normal3: Option<MVector<T>>,
    /// Auxiliary norms of `LHS - RHS` for each displayed equation.
    pub equation_residuals: Vec<T>,
    /// Largest deviation of the frame Gram matrix from its expected form.
    pub frame_residual: T,
}

impl<T: Real> FrenetGeneric<T> {
    /// Squared curvatures, in order; what the closed forms constrain.
    pub fn curvature_squares(&self) -> Vec<T> {
        let mut out = vec![self.kappa1 * self.kappa1, self.kappa2 * self.kappa2];
        if let Some(k3) = self.kappa3 {
            out.push(k3 * k3);
        }
        out
    }
}

/// Frenet data of a curve with lightlike curvature vector (dimension 4
/// only).
#[derive(Clone, Debug)]
pub struct FrenetNull<T> {
    pub tangent: MVector<T>,
    /// `ñ₁ = γ''`, null.
    pub normal1: MVector<T>,
    pub normal2: MVector<T>,
    /// Null partner with `<ñ₁, ñ₃> = 1`.
    pub normal3: MVector<T>,
    pub kappa1: T,
    /// `k̃₂ = <ñ₃', ñ₂>`; sign as computed.
    pub kappa2: T,
    pub equation_residuals: Vec<T>,
    pub frame_residual: T,
}

impl<T: Real> FrenetNull<T> {
    pub fn curvature_squares(&self) -> Vec<T> {
        vec![self.kappa1 * self.kappa1, self.kappa2 * self.kappa2]
    }
}

fn check_unit_speed<T: Real>(tt: T) -> Result<()> {
    let deviation = (tt - T::one()).abs();
    if deviation > T::real(UNIT_SPEED_TOL) {
        return Err(Error::NonUnitSpeedCurve {
            deviation: deviation.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Orthonormal-frame Frenet analysis at one parameter value, from order-4
/// jets of the curve. `causal_tol` is the relative lightlike threshold.
pub fn frenet_generic<T: Real>(point: &Jet1Point<T>, causal_tol: T) -> Result<FrenetGeneric<T>> {
    let dim = point.dim();
    if dim != 3 && dim != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: dim,
        });
    }
    let sig = point.signature().clone();
    let gamma = point.jets().to_vec();
    let tangent = deriv(&gamma);
    check_unit_speed(inner_jet(&tangent, &tangent, &sig).value())?;

    let gamma2 = deriv(&tangent);
    let c2 = inner_jet(&gamma2, &gamma2, &sig);
    match value_vec(&gamma2, &sig).causal_type(causal_tol)? {
        CausalType::Lightlike => {
            return Err(Error::Regime(
                "curvature vector is lightlike; the pseudo-orthonormal frame applies".into(),
            ))
        }
        CausalType::Spacelike | CausalType::Timelike => {}
    }
    let eps1: i8 = if c2.value() > T::zero() { 1 } else { -1 };
    let k1 = if eps1 == 1 {
        c2.sqrt()
    } else {
        c2.neg().sqrt()
    };
    let n1 = scale_vec(&gamma2, &k1.recip());
    let n1p = deriv(&n1);

    // v = n₁' + ε₁ k̂₁ t
    let e1s = if eps1 == 1 { T::one() } else { -T::one() };
    let v = add_vec(&n1p, &scale_vec(&tangent, &k1.scale(e1s)));

    let t_val = value_vec(&tangent, &sig);
    let n1_val = value_vec(&n1, &sig);
    let k1_val = k1.value();

    if aux_norm_value(&v) <= T::real(1e-10) * (T::one() + k1_val) {
        // planar curve: the chain stops at k̂₂ = 0
        let eq1 = value_vec(&deriv(&tangent), &sig)
            .sub(&n1_val.scale(k1_val))
            .aux_norm();
        let eq2 = value_vec(&n1p, &sig)
            .add(&t_val.scale(e1s * k1_val))
            .aux_norm();
        let frame_residual = frame_gram_residual(&[(&t_val, 1), (&n1_val, eps1)]);
        return Ok(FrenetGeneric {
            tangent: t_val,
            normal1: n1_val,
            eps1,
            kappa1: k1_val,
            kappa2: T::zero(),
            normal2: None,
            kappa3: None,
            eps3: None,
            normal3: None,
            equation_residuals: vec![eq1, eq2],
            frame_residual,
        });
    }

    let vv = inner_jet(&v, &v, &sig);
    if vv.value().abs() <= causal_tol * value_vec(&v, &sig).aux_norm_sq() {
        return Err(Error::DegenerateCurve(
            "second normal direction is numerically null".into(),
        ));
    }
    let eps2: i8 = if vv.value() > T::zero() { 1 } else { -1 };
    let k2 = if eps2 == 1 {
        vv.sqrt()
    } else {
        vv.neg().sqrt()
    };
    let n2 = scale_vec(&v, &k2.recip());
    let n2_val = value_vec(&n2, &sig);
    let k2_val = k2.value();

    // residuals of the first two equations hold in any dimension
    let eq1 = value_vec(&deriv(&tangent), &sig)
        .sub(&n1_val.scale(k1_val))
        .aux_norm();
    let eq2 = value_vec(&n1p, &sig)
        .add(&t_val.scale(e1s * k1_val))
        .sub(&n2_val.scale(k2_val))
        .aux_norm();
    let n2p = deriv(&n2);

    if dim == 3 {
        // third equation in dimension 3: n₂' = -ε₁ε₂ k̂₂ n₁
        let e2s = if eps2 == 1 { T::one() } else { -T::one() };
        let eq3 = value_vec(&n2p, &sig)
            .add(&n1_val.scale(e1s * e2s * k2_val))
            .aux_norm();
        let frame_residual = frame_gram_residual(&[(&t_val, 1), (&n1_val, eps1), (&n2_val, eps2)]);
        return Ok(FrenetGeneric {
            tangent: t_val,
            normal1: n1_val,
            eps1,
            kappa1: k1_val,
            kappa2: k2_val,
            normal2: Some(n2_val),
            kappa3: None,
            eps3: None,
            normal3: None,
            equation_residuals: vec![eq1, eq2, eq3],
            frame_residual,
        });
    }

    // dimension 4: complete the frame with a positively-oriented n₃
    let x = cross4(&tangent, &n1, &n2, &sig);
    let xx = inner_jet(&x, &x, &sig);
    if xx.value().abs() <= causal_tol * value_vec(&x, &sig).aux_norm_sq() {
        return Err(Error::DegenerateCurve(
            "frame completion is numerically null".into(),
        ));
    }
    let eps3: i8 = if xx.value() > T::zero() { 1 } else { -1 };
    let norm = if eps3 == 1 {
        xx.sqrt()
    } else {
        xx.neg().sqrt()
    };
    let mut n3 = scale_vec(&x, &norm.recip());
    // orientation: frame determinant +1 in the ambient coordinate order
    let det = {
        let rows: Vec<&MVector<T>> = vec![&t_val, &n1_val, &n2_val];
        let n3_val = value_vec(&n3, &sig);
        let mut m = [[T::zero(); 4]; 4];
        for (i, r) in rows.iter().enumerate() {
            for (j, slot) in m[i].iter_mut().enumerate() {
                *slot = r.get(j);
            }
        }
        for (j, slot) in m[3].iter_mut().enumerate() {
            *slot = n3_val.get(j);
        }
        det4(&m)
    };
    if det < T::zero() {
        n3 = scale_vec_const(&n3, -T::one());
    }
    let n3_val = value_vec(&n3, &sig);

    // one timelike direction total: the four signs multiply to -1
    let product = (eps1 as i32) * (eps2 as i32) * (eps3 as i32);
    if product != -1 {
        return Err(Error::Regime(format!(
            "frame signs ({eps1}, {eps2}, {eps3}) are inconsistent with a Lorentz ambient"
        )));
    }

    let e3s = if eps3 == 1 { T::one() } else { -T::one() };
    let n2p_val = value_vec(&n2p, &sig);
    let kappa3 = e3s * n2p_val.inner(&n3_val)?;
    let eq3 = n2p_val
        .sub(&n1_val.scale(e3s * k2_val))
        .sub(&n3_val.scale(kappa3))
        .aux_norm();
    let eq4 = value_vec(&deriv(&n3), &sig)
        .sub(&n2_val.scale(e1s * kappa3))
        .aux_norm();
    let frame_residual = frame_gram_residual(&[
        (&t_val, 1),
        (&n1_val, eps1),
        (&n2_val, eps2),
        (&n3_val, eps3),
    ]);

    Ok(FrenetGeneric {
        tangent: t_val,
        normal1: n1_val,
        eps1,
        kappa1: k1_val,
        kappa2: k2_val,
        normal2: Some(n2_val),
        kappa3: Some(kappa3),
        eps3: Some(eps3),
        normal3: Some(n3_val),
        equation_residuals: vec![eq1, eq2, eq3, eq4],
        frame_residual,
    })
}

fn frame_gram_residual<T: Real>(frame: &[(&MVector<T>, i8)]) -> T {
    let mut worst = T::zero();
    for (i, (u, su)) in frame.iter().enumerate() {
        for (j, (v, _)) in frame.iter().enumerate() {
            let expected = if i == j {
                if *su >= 0 {
                    T::one()
                } else {
                    -T::one()
                }
            } else {
                T::zero()
            };
            let got = u.inner(v).expect("same signature");
            worst = worst.max((got - expected).abs());
        }
    }
    worst
}

/// Pseudo-orthonormal Frenet analysis for a lightlike curvature vector.
pub fn frenet_null<T: Real>(point: &Jet1Point<T>, causal_tol: T) -> Result<FrenetNull<T>> {
    if point.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: point.dim(),
        });
    }
    let sig = point.signature().clone();
    let gamma = point.jets().to_vec();
    let tangent = deriv(&gamma);
    check_unit_speed(inner_jet(&tangent, &tangent, &sig).value())?;

    let n1 = deriv(&tangent); // ñ₁ = γ'', kept unnormalized
    match value_vec(&n1, &sig).causal_type(causal_tol)? {
        CausalType::Lightlike => {}
        _ => {
            return Err(Error::Regime(
                "curvature vector is not lightlike; the orthonormal frame applies".into(),
            ))
        }
    }

    let n1p = deriv(&n1);
    let k1sq = inner_jet(&n1p, &n1p, &sig);
    if k1sq.value() <= T::zero()
        || k1sq.value().sqrt() <= T::real(1e-12) * (T::one() + aux_norm_value(&n1))
    {
        return Err(Error::DegenerateCurve(
            "derivative of the null curvature vector vanishes".into(),
        ));
    }
    let k1 = k1sq.sqrt();
    let n2 = scale_vec(&n1p, &k1.recip());

    // ñ₃: the unique null vector in {t, ñ₂}^⊥ with <ñ₁, ñ₃> = 1. Project a
    // pivot basis vector into the plane, then solve the two conditions in
    // the {ñ₁, w} basis.
    let t_val = value_vec(&tangent, &sig);
    let n1_val = value_vec(&n1, &sig);
    let n2_val = value_vec(&n2, &sig);
    let mut pivot: Option<(usize, T)> = None;
    for d in 0..4 {
        let e = MVector::<T>::basis(sig.clone(), d);
        let w_val = e
            .sub(&t_val.scale(e.inner(&t_val)?))
            .sub(&n2_val.scale(e.inner(&n2_val)?));
        let pairing = n1_val.inner(&w_val)?.abs();
        if pivot.is_none_or(|(_, best)| pairing > best) {
            pivot = Some((d, pairing));
        }
    }
    let (d, pairing) = pivot.expect("four candidates");
    if pairing <= T::real(1e-12) * (T::one() + n1_val.aux_norm()) {
        return Err(Error::DegenerateCurve(
            "no basis direction pairs with the null curvature vector".into(),
        ));
    }
    let e: Vec<Jet1<T>> = (0..4)
        .map(|i| Jet1::constant(if i == d { T::one() } else { T::zero() }))
        .collect();
    let et = inner_jet(&e, &tangent, &sig);
    let en2 = inner_jet(&e, &n2, &sig);
    let w = sub_vec(
        &sub_vec(&e, &scale_vec(&tangent, &et)),
        &scale_vec(&n2, &en2),
    );
    let beta = inner_jet(&n1, &w, &sig).recip();
    let ww = inner_jet(&w, &w, &sig);
    let alpha = ww.mul(&beta).mul(&beta).scale(-T::real(0.5));
    let n3 = add_vec(&scale_vec(&n1, &alpha), &scale_vec(&w, &beta));
    let n3_val = value_vec(&n3, &sig);

    let kappa1 = k1.value();
    let n3p_val = value_vec(&deriv(&n3), &sig);
    let kappa2 = n3p_val.inner(&n2_val)?;

    let eq1 = value_vec(&deriv(&tangent), &sig).sub(&n1_val).aux_norm();
    let eq2 = value_vec(&n1p, &sig).sub(&n2_val.scale(kappa1)).aux_norm();
    let eq3 = value_vec(&deriv(&n2), &sig)
        .add(&n1_val.scale(kappa2))
        .add(&n3_val.scale(kappa1))
        .aux_norm();
    // ñ₃' = -t + k̃₂ ñ₂ (see the module docs for the -t term)
    let eq4 = n3p_val.add(&t_val).sub(&n2_val.scale(kappa2)).aux_norm();

    // pseudo-orthonormality: null ñ₁, ñ₃ pairing to one, unit t and ñ₂,
    // everything else orthogonal
    let mut frame_residual = T::zero();
    let checks = [
        (t_val.inner(&t_val)?, T::one()),
        (n2_val.inner(&n2_val)?, T::one()),
        (n1_val.inner(&n1_val)?, T::zero()),
        (n3_val.inner(&n3_val)?, T::zero()),
        (n1_val.inner(&n3_val)?, T::one()),
        (t_val.inner(&n1_val)?, T::zero()),
        (t_val.inner(&n2_val)?, T::zero()),
        (t_val.inner(&n3_val)?, T::zero()),
        (n1_val.inner(&n2_val)?, T::zero()),
        (n2_val.inner(&n3_val)?, T::zero()),
    ];
    for (got, expected) in checks {
        frame_residual = frame_residual.max((got - expected).abs());
    }

    Ok(FrenetNull {
        tangent: t_val,
        normal1: n1_val,
        normal2: n2_val,
        normal3: n3_val,
        kappa1,
        kappa2,
        equation_residuals: vec![eq1, eq2, eq3, eq4],
        frame_residual,
    })
}

/// The two factor curves of a separable product map, with the ambient
/// coordinate indices spanning their subspaces.
#[derive(Clone, Debug)]
pub struct SplitCurves<T> {
    pub curve1: CurveMap<T>,
    pub curve2: CurveMap<T>,
    pub v1_indices: Vec<usize>,
    pub v2_indices: Vec<usize>,
}

/// Splits a product immersion `F = γ₁ × γ₂` into its factor curves by the
/// parameter each component depends on. Within each subspace the timelike
/// coordinate (if any) is rotated to the front, so the curve signatures come
/// out in the Lorentz convention.
pub fn split_product_curves<T: Real>(map: &MapDescription<T>) -> Result<SplitCurves<T>> {
    let mut v1 = Vec::new();
    let mut v2 = Vec::new();
    for (i, comp) in map.components().iter().enumerate() {
        match (comp.uses(Param::S), comp.uses(Param::T)) {
            (true, false) => v1.push(i),
            (false, true) => v2.push(i),
            (true, true) => {
                return Err(Error::MapDescription(format!(
                    "component {i} depends on both parameters; the map is not a product of curves"
                )))
            }
            (false, false) => {
                return Err(Error::MapDescription(format!(
                    "component {i} is constant; the map is not a product of curves"
                )))
            }
        }
    }
    let rotate_timelike_first = |mut idx: Vec<usize>| -> Vec<usize> {
        idx.sort_unstable();
        if let Some(pos) = idx.iter().position(|&i| map.signature().sign(i) == -1) {
            idx.rotate_left(pos);
        }
        idx
    };
    let v1 = rotate_timelike_first(v1);
    let v2 = rotate_timelike_first(v2);

    // the variables must genuinely separate: cross-parameter first
    // derivatives and every mixed second partial vanish identically
    for s in [-1.0, 0.0, 0.7] {
        for t in [-0.9, 0.0, 1.0] {
            let jet = map.eval_jet2(T::real(s), T::real(t));
            for &i in &v1 {
                if jet.jets()[i].dt.abs() > T::zero() || jet.jets()[i].dst.abs() > T::zero() {
                    return Err(Error::MapDescription(
                        "first-factor components vary with the second parameter".into(),
                    ));
                }
            }
            for &i in &v2 {
                if jet.jets()[i].ds.abs() > T::zero() || jet.jets()[i].dst.abs() > T::zero() {
                    return Err(Error::MapDescription(
                        "second-factor components vary with the first parameter".into(),
                    ));
                }
            }
        }
    }

    let comps1: Vec<_> = v1.iter().map(|&i| map.components()[i].clone()).collect();
    let comps2: Vec<_> = v2
        .iter()
        .map(|&i| map.components()[i].rename(Param::T, Param::S))
        .collect();
    let curve1 = CurveMap::new(comps1, map.signature().select(&v1)?)?;
    let curve2 = CurveMap::new(comps2, map.signature().select(&v2)?)?;
    Ok(SplitCurves {
        curve1,
        curve2,
        v1_indices: v1,
        v2_indices: v2,
    })
}
