//! Forward-mode truncated-Taylor jets.
//!
//! Two flavours cover everything the geometry needs:
//!
//! * [`Jet2`] — order 2 in two variables `(s, t)`, carrying the value, both
//!   first partials and the three second partials. This is what surface
//!   fundamental forms are built from, with no finite-difference error.
//! * [`Jet1`] — order 4 in one variable, stored as Taylor coefficients.
//!   Curve analysis needs four derivatives (the null-curvature Frenet frame
//!   differentiates its last frame vector).
//!
//! Both implement [`MapValue`], the arithmetic alphabet map descriptions are
//! evaluated in; plain scalars implement it too, so the same description
//! yields values, surface jets or curve jets.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::metric::{MVector, Signature};
use crate::scalar::Real;

/// Arithmetic alphabet for evaluating map descriptions: constants, `+`, `×`,
/// scalar scaling and the four analytic primitives.
pub trait MapValue<T: Real>: Clone {
    fn constant(c: T) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: T) -> Self;
    fn cosh(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cos(&self) -> Self;
    fn sin(&self) -> Self;
}

impl<T: Real> MapValue<T> for T {
    fn constant(c: T) -> Self {
        c
    }
    fn add(&self, other: &Self) -> Self {
        *self + *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn scale(&self, c: T) -> Self {
        *self * c
    }
    fn cosh(&self) -> Self {
        Float::cosh(*self)
    }
    fn sinh(&self) -> Self {
        Float::sinh(*self)
    }
    fn cos(&self) -> Self {
        Float::cos(*self)
    }
    fn sin(&self) -> Self {
        Float::sin(*self)
    }
}

/// Second-order jet in two variables: value, first and second partials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2<T> {
    pub val: T,
    pub ds: T,
    pub dt: T,
    pub dss: T,
    pub dst: T,
    pub dtt: T,
}

impl<T: Real> Jet2<T> {
    /// Jet of the coordinate function `s` at base point `s`.
    pub fn var_s(s: T) -> Self {
        Jet2 {
            val: s,
            ds: T::one(),
            dt: T::zero(),
            dss: T::zero(),
            dst: T::zero(),
            dtt: T::zero(),
        }
    }

    /// Jet of the coordinate function `t` at base point `t`.
    pub fn var_t(t: T) -> Self {
        Jet2 {
            val: t,
            ds: T::zero(),
            dt: T::one(),
            dss: T::zero(),
            dst: T::zero(),
            dtt: T::zero(),
        }
    }

    /// Seeds for both coordinate functions at `(s, t)`.
    pub fn seed(s: T, t: T) -> (Self, Self) {
        (Self::var_s(s), Self::var_t(t))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    /// Composition with a univariate function given by its value and first
    /// two derivatives at `self.val`.
    fn compose(&self, f0: T, f1: T, f2: T) -> Self {
        Jet2 {
            val: f0,
            ds: f1 * self.ds,
            dt: f1 * self.dt,
            dss: f2 * self.ds * self.ds + f1 * self.dss,
            dst: f2 * self.ds * self.dt + f1 * self.dst,
            dtt: f2 * self.dt * self.dt + f1 * self.dtt,
        }
    }
}

impl<T: Real> MapValue<T> for Jet2<T> {
    fn constant(c: T) -> Self {
        Jet2 {
            val: c,
            ds: T::zero(),
            dt: T::zero(),
            dss: T::zero(),
            dst: T::zero(),
            dtt: T::zero(),
        }
    }

    fn add(&self, other: &Self) -> Self {
        Jet2 {
            val: self.val + other.val,
            ds: self.ds + other.ds,
            dt: self.dt + other.dt,
            dss: self.dss + other.dss,
            dst: self.dst + other.dst,
            dtt: self.dtt + other.dtt,
        }
    }

    fn mul(&self, other: &Self) -> Self {
        // Leibniz up to order 2
        let two = T::real(2.0);
        Jet2 {
            val: self.val * other.val,
            ds: self.ds * other.val + self.val * other.ds,
            dt: self.dt * other.val + self.val * other.dt,
            dss: self.dss * other.val + two * self.ds * other.ds + self.val * other.dss,
            dst: self.dst * other.val
                + self.ds * other.dt
                + self.dt * other.ds
                + self.val * other.dst,
            dtt: self.dtt * other.val + two * self.dt * other.dt + self.val * other.dtt,
        }
    }

    fn scale(&self, c: T) -> Self {
        Jet2 {
            val: self.val * c,
            ds: self.ds * c,
            dt: self.dt * c,
            dss: self.dss * c,
            dst: self.dst * c,
            dtt: self.dtt * c,
        }
    }

    fn cosh(&self) -> Self {
        let (ch, sh) = (Float::cosh(self.val), Float::sinh(self.val));
        self.compose(ch, sh, ch)
    }

    fn sinh(&self) -> Self {
        let (ch, sh) = (Float::cosh(self.val), Float::sinh(self.val));
        self.compose(sh, ch, sh)
    }

    fn cos(&self) -> Self {
        let (c0, s0) = (Float::cos(self.val), Float::sin(self.val));
        self.compose(c0, -s0, -c0)
    }

    fn sin(&self) -> Self {
        let (c0, s0) = (Float::cos(self.val), Float::sin(self.val));
        self.compose(s0, c0, -s0)
    }
}

/// Order-4 jet in one variable, stored as Taylor coefficients: `c[k]` is
/// `f⁽ᵏ⁾(s₀)/k!`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1<T> {
    pub c: [T; 5],
}

const FACTORIALS: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

impl<T: Real> Jet1<T> {
    pub fn var(s: T) -> Self {
        let mut c = [T::zero(); 5];
        c[0] = s;
        c[1] = T::one();
        Jet1 { c }
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// `k`-th derivative, `k <= 4`.
    pub fn derivative_at(&self, k: usize) -> T {
        self.c[k] * T::real(FACTORIALS[k])
    }

    /// Jet of the derivative function; top coefficient becomes meaningless
    /// and is zeroed, so a `Jet1` valid to order `m` differentiates to one
    /// valid to order `m-1`.
    pub fn derivative(&self) -> Self {
        let mut c = [T::zero(); 5];
        for (k, slot) in c.iter_mut().enumerate().take(4) {
            *slot = self.c[k + 1] * T::real((k + 1) as f64);
        }
        Jet1 { c }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    /// Composition with a univariate function given by its derivatives
    /// `d[0..=4]` at `self.value()`.
    fn compose(&self, d: [T; 5]) -> Self {
        // f(g) = Σ d[k]/k! · (g - g0)^k, truncated at order 4
        let mut delta = *self;
        delta.c[0] = T::zero();
        let mut acc = Self::constant(d[0]);
        let mut power = Self::constant(T::one());
        for (k, &dk) in d.iter().enumerate().skip(1) {
            power = power.mul(&delta);
            acc = acc.add(&power.scale(dk / T::real(FACTORIALS[k])));
        }
        acc
    }

    pub fn sqrt(&self) -> Self {
        let g = self.c[0];
        let half = T::real(0.5);
        let r = Float::sqrt(g);
        let d1 = half / r;
        let d2 = -T::real(0.25) / (r * g);
        let d3 = T::real(0.375) / (r * g * g);
        let d4 = -T::real(0.9375) / (r * g * g * g);
        self.compose([r, d1, d2, d3, d4])
    }

    pub fn recip(&self) -> Self {
        let g = self.c[0];
        let inv = Float::recip(g);
        let inv2 = inv * inv;
        let inv3 = inv2 * inv;
        let inv4 = inv3 * inv;
        let inv5 = inv4 * inv;
        self.compose([
            inv,
            -inv2,
            T::real(2.0) * inv3,
            -T::real(6.0) * inv4,
            T::real(24.0) * inv5,
        ])
    }
}

impl<T: Real> MapValue<T> for Jet1<T> {
    fn constant(c0: T) -> Self {
        let mut c = [T::zero(); 5];
        c[0] = c0;
        Jet1 { c }
    }

    fn add(&self, other: &Self) -> Self {
        let mut c = [T::zero(); 5];
        for ((slot, &a), &b) in c.iter_mut().zip(&self.c).zip(&other.c) {
            *slot = a + b;
        }
        Jet1 { c }
    }

    fn mul(&self, other: &Self) -> Self {
        // truncated Cauchy product
        let mut c = [T::zero(); 5];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in other.c.iter().enumerate() {
                if i + j < 5 {
                    c[i + j] += a * b;
                }
            }
        }
        Jet1 { c }
    }

    fn scale(&self, s: T) -> Self {
        let mut c = self.c;
        for x in &mut c {
            *x *= s;
        }
        Jet1 { c }
    }

    fn cosh(&self) -> Self {
        let (ch, sh) = (Float::cosh(self.c[0]), Float::sinh(self.c[0]));
        self.compose([ch, sh, ch, sh, ch])
    }

    fn sinh(&self) -> Self {
        let (ch, sh) = (Float::cosh(self.c[0]), Float::sinh(self.c[0]));
        self.compose([sh, ch, sh, ch, sh])
    }

    fn cos(&self) -> Self {
        let (c0, s0) = (Float::cos(self.c[0]), Float::sin(self.c[0]));
        self.compose([c0, -s0, -c0, s0, c0])
    }

    fn sin(&self) -> Self {
        let (c0, s0) = (Float::cos(self.c[0]), Float::sin(self.c[0]));
        self.compose([s0, c0, -s0, -c0, s0])
    }
}

/// A point of a parametric surface with its full second-order jet, one
/// [`Jet2`] per ambient coordinate.
#[derive(Clone, Debug)]
pub struct Jet2Point<T> {
    jets: Vec<Jet2<T>>,
    signature: Signature,
}

impl<T: Real> Jet2Point<T> {
    pub fn new(jets: Vec<Jet2<T>>, signature: Signature) -> Result<Self> {
        if jets.len() != signature.len() {
            return Err(Error::DimensionMismatch {
                expected: signature.len(),
                got: jets.len(),
            });
        }
        Ok(Jet2Point { jets, signature })
    }

    pub fn jets(&self) -> &[Jet2<T>] {
        &self.jets
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    fn extract(&self, f: impl Fn(&Jet2<T>) -> T) -> MVector<T> {
        MVector::new(self.jets.iter().map(f).collect(), self.signature.clone())
            .expect("lengths match by construction")
    }

    pub fn value(&self) -> MVector<T> {
        self.extract(|j| j.val)
    }

    pub fn ds(&self) -> MVector<T> {
        self.extract(|j| j.ds)
    }

    pub fn dt(&self) -> MVector<T> {
        self.extract(|j| j.dt)
    }

    pub fn dss(&self) -> MVector<T> {
        self.extract(|j| j.dss)
    }

    pub fn dst(&self) -> MVector<T> {
        self.extract(|j| j.dst)
    }

    pub fn dtt(&self) -> MVector<T> {
        self.extract(|j| j.dtt)
    }
}

/// A point of a parametric curve with order-4 jets per coordinate.
#[derive(Clone, Debug)]
pub struct Jet1Point<T> {
    jets: Vec<Jet1<T>>,
    signature: Signature,
}

impl<T: Real> Jet1Point<T> {
    pub fn new(jets: Vec<Jet1<T>>, signature: Signature) -> Result<Self> {
        if jets.len() != signature.len() {
            return Err(Error::DimensionMismatch {
                expected: signature.len(),
                got: jets.len(),
            });
        }
        Ok(Jet1Point { jets, signature })
    }

    pub fn jets(&self) -> &[Jet1<T>] {
        &self.jets
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn dim(&self) -> usize {
        self.jets.len()
    }

    /// Ambient vector of `k`-th derivatives, `k <= 4`.
    pub fn derivative_vector(&self, k: usize) -> MVector<T> {
        MVector::new(
            self.jets.iter().map(|j| j.derivative_at(k)).collect(),
            self.signature.clone(),
        )
        .expect("lengths match by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds() {
        let (s, t) = Jet2::<f64>::seed(0.0, 0.0);
        assert_eq!((s.val, s.ds, s.dt, s.dss), (0.0, 1.0, 0.0, 0.0));
        let (_, t2) = Jet2::<f64>::seed(2.0, 3.0);
        assert_eq!((t2.val, t2.dt, t2.ds), (3.0, 1.0, 0.0));
        assert_eq!(t.dt, 1.0);
    }

    #[test]
    fn product_rule() {
        let (s, t) = Jet2::<f64>::seed(2.0, 3.0);
        let p = s.mul(&t);
        assert_eq!(p.val, 6.0);
        assert_eq!(p.ds, 3.0);
        assert_eq!(p.dt, 2.0);
        assert_eq!(p.dst, 1.0);
        assert_eq!(p.dss, 0.0);
        assert_eq!(p.dtt, 0.0);
    }

    #[test]
    fn cosh_expansion_at_zero() {
        let (s, _) = Jet2::<f64>::seed(0.0, 0.0);
        let c = s.cosh();
        assert_eq!((c.val, c.ds, c.dss), (1.0, 0.0, 1.0));
    }

    #[test]
    fn sin_expansion_at_zero() {
        let (_, t) = Jet2::<f64>::seed(0.0, 0.0);
        let v = t.sin();
        assert_eq!((v.val, v.dt, v.dtt), (0.0, 1.0, 0.0));
    }

    #[test]
    fn mixed_partial_of_cos_of_product() {
        let (s, t) = Jet2::<f64>::seed(1.0, std::f64::consts::PI);
        let f = s.mul(&t).cos();
        // d²/dsdt cos(st) = -sin(st) - st·cos(st); at (1, π) this is π
        let expect =
            -(std::f64::consts::PI).sin() - std::f64::consts::PI * (std::f64::consts::PI).cos();
        assert!((f.dst - expect).abs() < 1e-12);
    }

    #[test]
    fn jet1_derivatives_of_cosh() {
        let j = Jet1::<f64>::var(0.7).cosh();
        let (ch, sh) = (0.7f64.cosh(), 0.7f64.sinh());
        for (k, expect) in [ch, sh, ch, sh, ch].into_iter().enumerate() {
            assert!((j.derivative_at(k) - expect).abs() < 1e-13, "order {k}");
        }
    }

    #[test]
    fn jet1_product_and_chain() {
        // f(s) = s·sin(s); f'''' = s·sin(s) - 4·cos(s)... check against the
        // closed form f⁗(s) = s sin s − 4 cos s at s = 1.3
        let s0 = 1.3f64;
        let s = Jet1::var(s0);
        let f = s.mul(&s.sin());
        let expect4 = s0 * s0.sin() - 4.0 * s0.cos();
        assert!((f.derivative_at(4) - expect4).abs() < 1e-12);
    }

    #[test]
    fn jet1_sqrt_and_recip_roundtrip() {
        let s = Jet1::<f64>::var(2.1);
        let f = s.mul(&s).add(&Jet1::constant(1.0)); // s² + 1
        let r = f.sqrt();
        let back = r.mul(&r);
        for k in 0..5 {
            assert!((back.c[k] - f.c[k]).abs() < 1e-12);
        }
        let inv = f.recip();
        let one = f.mul(&inv);
        assert!((one.c[0] - 1.0).abs() < 1e-14);
        for k in 1..5 {
            assert!(one.c[k].abs() < 1e-12);
        }
    }

    #[test]
    fn jet1_derivative_shifts() {
        let s = Jet1::<f64>::var(0.4);
        let f = s.sinh();
        let fp = f.derivative();
        assert!((fp.value() - 0.4f64.cosh()).abs() < 1e-14);
        // (sinh)'''' would need the zeroed top coefficient; order 3 is exact
        assert!((fp.derivative_at(3) - 0.4f64.sinh()).abs() < 1e-12);
        assert_eq!(fp.c[4], 0.0);
    }
}
