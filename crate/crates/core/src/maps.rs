//! Composition-tree descriptions of parametric maps.
//!
//! A map `ℝ² → ℝ^N` is a vector of expressions over the fixed alphabet
//! `{cosh, sinh, cos, sin, +, ×, scalar-scale}` in the two parameters. The
//! same description evaluates to plain values, surface jets ([`Jet2`]) or
//! curve jets ([`Jet1`]) through the [`MapValue`] alphabet, so every
//! derivative the geometry uses is exact to roundoff.

use crate::error::{Error, Result};
use crate::jet::{Jet1, Jet1Point, Jet2, Jet2Point, MapValue};
use crate::metric::{MVector, Signature};
use crate::scalar::Real;

/// The two surface parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    S,
    T,
}

/// Expression tree over the map alphabet.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr<T> {
    Var(Param),
    Const(T),
    Add(Box<Expr<T>>, Box<Expr<T>>),
    Mul(Box<Expr<T>>, Box<Expr<T>>),
    Scale(T, Box<Expr<T>>),
    Cosh(Box<Expr<T>>),
    Sinh(Box<Expr<T>>),
    Cos(Box<Expr<T>>),
    Sin(Box<Expr<T>>),
}

impl<T: Real> Expr<T> {
    pub fn var(p: Param) -> Self {
        Expr::Var(p)
    }

    pub fn constant(c: T) -> Self {
        Expr::Const(c)
    }

    pub fn scaled(c: T, e: Expr<T>) -> Self {
        Expr::Scale(c, Box::new(e))
    }

    pub fn cosh(e: Expr<T>) -> Self {
        Expr::Cosh(Box::new(e))
    }

    pub fn sinh(e: Expr<T>) -> Self {
        Expr::Sinh(Box::new(e))
    }

    pub fn cos(e: Expr<T>) -> Self {
        Expr::Cos(Box::new(e))
    }

    pub fn sin(e: Expr<T>) -> Self {
        Expr::Sin(Box::new(e))
    }

    // constructors mirror the alphabet, not std::ops
    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr<T>, b: Expr<T>) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr<T>, b: Expr<T>) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    /// `amp · wave(rate · p)` — the building block of every family component.
    pub fn wave(amp: T, wave: fn(Expr<T>) -> Expr<T>, rate: T, p: Param) -> Self {
        Expr::scaled(amp, wave(Expr::scaled(rate, Expr::var(p))))
    }

    /// Evaluates the tree in any [`MapValue`] arithmetic given the two
    /// parameter values.
    pub fn eval<V: MapValue<T>>(&self, s: &V, t: &V) -> V {
        match self {
            Expr::Var(Param::S) => s.clone(),
            Expr::Var(Param::T) => t.clone(),
            Expr::Const(c) => V::constant(*c),
            Expr::Add(a, b) => a.eval(s, t).add(&b.eval(s, t)),
            Expr::Mul(a, b) => a.eval(s, t).mul(&b.eval(s, t)),
            Expr::Scale(c, e) => e.eval(s, t).scale(*c),
            Expr::Cosh(e) => e.eval(s, t).cosh(),
            Expr::Sinh(e) => e.eval(s, t).sinh(),
            Expr::Cos(e) => e.eval(s, t).cos(),
            Expr::Sin(e) => e.eval(s, t).sin(),
        }
    }

    /// Whether the expression mentions `p` at all.
    pub fn uses(&self, p: Param) -> bool {
        match self {
            Expr::Var(q) => *q == p,
            Expr::Const(_) => false,
            Expr::Add(a, b) | Expr::Mul(a, b) => a.uses(p) || b.uses(p),
            Expr::Scale(_, e) | Expr::Cosh(e) | Expr::Sinh(e) | Expr::Cos(e) | Expr::Sin(e) => {
                e.uses(p)
            }
        }
    }

    /// Replaces every occurrence of `from` by `to`.
    pub fn rename(&self, from: Param, to: Param) -> Expr<T> {
        match self {
            Expr::Var(q) => Expr::Var(if *q == from { to } else { *q }),
            Expr::Const(c) => Expr::Const(*c),
            Expr::Add(a, b) => Expr::add(a.rename(from, to), b.rename(from, to)),
            Expr::Mul(a, b) => Expr::mul(a.rename(from, to), b.rename(from, to)),
            Expr::Scale(c, e) => Expr::Scale(*c, Box::new(e.rename(from, to))),
            Expr::Cosh(e) => Expr::cosh(e.rename(from, to)),
            Expr::Sinh(e) => Expr::sinh(e.rename(from, to)),
            Expr::Cos(e) => Expr::cos(e.rename(from, to)),
            Expr::Sin(e) => Expr::sin(e.rename(from, to)),
        }
    }

    /// Substitutes `p ↦ factor · p`; a linear reparametrization.
    pub fn scale_var(&self, p: Param, factor: T) -> Expr<T> {
        match self {
            Expr::Var(q) if *q == p => Expr::scaled(factor, Expr::Var(*q)),
            Expr::Var(q) => Expr::Var(*q),
            Expr::Const(c) => Expr::Const(*c),
            Expr::Add(a, b) => Expr::add(a.scale_var(p, factor), b.scale_var(p, factor)),
            Expr::Mul(a, b) => Expr::mul(a.scale_var(p, factor), b.scale_var(p, factor)),
            Expr::Scale(c, e) => Expr::Scale(*c, Box::new(e.scale_var(p, factor))),
            Expr::Cosh(e) => Expr::cosh(e.scale_var(p, factor)),
            Expr::Sinh(e) => Expr::sinh(e.scale_var(p, factor)),
            Expr::Cos(e) => Expr::cos(e.scale_var(p, factor)),
            Expr::Sin(e) => Expr::sin(e.scale_var(p, factor)),
        }
    }
}

/// A parametric map `ℝ² → ℝ^N_μ`: one expression per ambient coordinate.
#[derive(Clone, Debug)]
pub struct MapDescription<T> {
    components: Vec<Expr<T>>,
    signature: Signature,
}

impl<T: Real> MapDescription<T> {
    pub fn new(components: Vec<Expr<T>>, signature: Signature) -> Result<Self> {
        if components.len() != signature.len() {
            return Err(Error::DimensionMismatch {
                expected: signature.len(),
                got: components.len(),
            });
        }
        Ok(MapDescription {
            components,
            signature,
        })
    }

    pub fn components(&self) -> &[Expr<T>] {
        &self.components
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval_point(&self, s: T, t: T) -> MVector<T> {
        let coords = self.components.iter().map(|e| e.eval(&s, &t)).collect();
        MVector::new(coords, self.signature.clone()).expect("lengths match by construction")
    }

    /// Full second-order jet at `(s, t)`.
    pub fn eval_jet2(&self, s: T, t: T) -> Jet2Point<T> {
        let (js, jt) = Jet2::seed(s, t);
        let jets = self.components.iter().map(|e| e.eval(&js, &jt)).collect();
        Jet2Point::new(jets, self.signature.clone()).expect("lengths match by construction")
    }

    /// Applies a rewrite to every component.
    pub fn map_components(&self, f: impl Fn(&Expr<T>) -> Expr<T>) -> Self {
        MapDescription {
            components: self.components.iter().map(f).collect(),
            signature: self.signature.clone(),
        }
    }
}

/// A parametric curve `ℝ → ℝ^n`: expressions in the `S` parameter only.
#[derive(Clone, Debug)]
pub struct CurveMap<T> {
    components: Vec<Expr<T>>,
    signature: Signature,
}

impl<T: Real> CurveMap<T> {
    pub fn new(components: Vec<Expr<T>>, signature: Signature) -> Result<Self> {
        if components.len() != signature.len() {
            return Err(Error::DimensionMismatch {
                expected: signature.len(),
                got: components.len(),
            });
        }
        if components.iter().any(|e| e.uses(Param::T)) {
            return Err(Error::MapDescription(
                "curve components must depend on the S parameter only".into(),
            ));
        }
        Ok(CurveMap {
            components,
            signature,
        })
    }

    pub fn components(&self) -> &[Expr<T>] {
        &self.components
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval_point(&self, s: T) -> MVector<T> {
        let t = T::zero();
        let coords = self.components.iter().map(|e| e.eval(&s, &t)).collect();
        MVector::new(coords, self.signature.clone()).expect("lengths match by construction")
    }

    /// Order-4 jet of the curve at `s`.
    pub fn eval_jet1(&self, s: T) -> Jet1Point<T> {
        let js = Jet1::var(s);
        let jt = Jet1::constant(T::zero());
        let jets = self.components.iter().map(|e| e.eval(&js, &jt)).collect();
        Jet1Point::new(jets, self.signature.clone()).expect("lengths match by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wave_components_evaluate() {
        // 2·cosh(s/3) at s = 0.6
        let e = Expr::wave(2.0, Expr::cosh, 1.0 / 3.0, Param::S);
        let v: f64 = e.eval(&0.6, &0.0);
        assert!((v - 2.0 * (0.2f64).cosh()).abs() < 1e-15);
        assert!(e.uses(Param::S));
        assert!(!e.uses(Param::T));
    }

    #[test]
    fn rename_swaps_parameters() {
        let e = Expr::wave(1.0, Expr::sin, 2.0, Param::T);
        let r = e.rename(Param::T, Param::S);
        let v: f64 = r.eval(&0.25, &99.0);
        assert!((v - (0.5f64).sin()).abs() < 1e-15);
    }

    #[test]
    fn scale_var_reparametrizes() {
        let e = Expr::var(Param::S);
        let r = e.scale_var(Param::S, 1.5);
        let v: f64 = r.eval(&2.0, &0.0);
        assert_eq!(v, 3.0);
    }

    #[test]
    fn curve_rejects_t_dependence() {
        let sig = Signature::euclidean(1);
        let bad = CurveMap::new(vec![Expr::<f64>::var(Param::T)], sig);
        assert!(bad.is_err());
    }
}
