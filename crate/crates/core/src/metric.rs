//! Pseudo-Euclidean linear algebra over diagonal signatures.
//!
//! Every ambient space used by the crate carries a flat metric of the form
//! `diag(ε₁, …, ε_N)` with `ε_i = ±1` and at most two minus signs, so inner
//! products are exact sign-weighted dot products. The auxiliary norm — the
//! signature-blind Euclidean norm — is what residuals and rank decisions are
//! measured with; it never enters the geometry itself.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative tolerance (against the auxiliary norm) below which a vector is
/// classified lightlike.
pub const DEFAULT_CAUSAL_TOL: f64 = 1e-9;

/// Residual auxiliary norm below which a candidate is dropped during
/// rank-revealing orthonormalization.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Allowed deviation of `<w,w>` from its declared sign in a projection frame.
pub const FRAME_TOL: f64 = 1e-8;

/// Diagonal metric signature: an ordered list of `±1` entries.
///
/// The index (number of `-1` entries) is restricted to at most two, which is
/// all the product embeddings here ever need.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    signs: Vec<i8>,
}

impl Signature {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidSignature("empty signature".into()));
        }
        if let Some(&bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidSignature(format!(
                "entries must be +1 or -1, got {bad}"
            )));
        }
        let index = signs.iter().filter(|&&s| s == -1).count();
        if index > 2 {
            return Err(Error::InvalidSignature(format!(
                "index {index} exceeds the supported maximum of 2"
            )));
        }
        Ok(Signature { signs })
    }

    /// All-plus signature of dimension `n`.
    pub fn euclidean(n: usize) -> Self {
        Signature {
            signs: vec![1; n.max(1)],
        }
    }

    /// One minus sign first, then `n-1` plus signs: the Lorentz convention
    /// `(-, +, …, +)`.
    pub fn lorentz(n: usize) -> Self {
        assert!(n >= 2, "Lorentz signature needs dimension >= 2");
        let mut signs = vec![1; n];
        signs[0] = -1;
        Signature { signs }
    }

    /// Block concatenation, e.g. a product-space layout.
    pub fn concat(&self, other: &Signature) -> Result<Self> {
        let mut signs = self.signs.clone();
        signs.extend_from_slice(&other.signs);
        Signature::new(signs)
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Number of `-1` entries.
    pub fn index(&self) -> usize {
        self.signs.iter().filter(|&&s| s == -1).count()
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Signature restricted to a subset of coordinates, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        Signature::new(indices.iter().map(|&i| self.signs[i]).collect())
    }
}

/// Causal class of a vector under an indefinite metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalType {
    Spacelike,
    Timelike,
    Lightlike,
}

/// Vector of an ambient pseudo-Euclidean space, tied to its signature.
#[derive(Clone, Debug, PartialEq)]
pub struct MVector<T> {
    coords: Vec<T>,
    signature: Signature,
}

impl<T: Real> MVector<T> {
    pub fn new(coords: Vec<T>, signature: Signature) -> Result<Self> {
        if coords.len() != signature.len() {
            return Err(Error::DimensionMismatch {
                expected: signature.len(),
                got: coords.len(),
            });
        }
        Ok(MVector { coords, signature })
    }

    pub fn zero(signature: Signature) -> Self {
        MVector {
            coords: vec![T::zero(); signature.len()],
            signature,
        }
    }

    pub fn basis(signature: Signature, i: usize) -> Self {
        let mut v = Self::zero(signature);
        v.coords[i] = T::one();
        v
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn get(&self, i: usize) -> T {
        self.coords[i]
    }

    /// Metric inner product `Σ εᵢ uᵢ vᵢ`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch);
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.signature.signs())
            .map(|((&a, &b), &s)| {
                let p = a * b;
                if s == 1 {
                    p
                } else {
                    -p
                }
            })
            .sum())
    }

    /// Signature-blind squared norm `Σ vᵢ²`.
    pub fn aux_norm_sq(&self) -> T {
        self.coords.iter().map(|&x| x * x).sum()
    }

    pub fn aux_norm(&self) -> T {
        self.aux_norm_sq().sqrt()
    }

    /// Metric norm `|<v,v>|^{1/2}`.
    pub fn norm(&self) -> T {
        self.inner(self).expect("same signature").abs().sqrt()
    }

    /// Classifies the vector against `tol` relative to the auxiliary norm.
    pub fn causal_type(&self, tol: T) -> Result<CausalType> {
        let aux = self.aux_norm_sq();
        if aux == T::zero() {
            return Err(Error::DegenerateInput(
                "causal type of the zero vector is undefined".into(),
            ));
        }
        let q = self.inner(self).expect("same signature");
        if q.abs() <= tol * aux {
            Ok(CausalType::Lightlike)
        } else if q > T::zero() {
            Ok(CausalType::Spacelike)
        } else {
            Ok(CausalType::Timelike)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.signature, other.signature);
        MVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| a + b)
                .collect(),
            signature: self.signature.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.signature, other.signature);
        MVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| a - b)
                .collect(),
            signature: self.signature.clone(),
        }
    }

    pub fn scale(&self, c: T) -> Self {
        MVector {
            coords: self.coords.iter().map(|&a| a * c).collect(),
            signature: self.signature.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    /// Zeroes every coordinate outside `range`; the block projections of a
    /// product layout.
    pub fn zero_outside(&self, range: std::ops::Range<usize>) -> Self {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, &x)| if range.contains(&i) { x } else { T::zero() })
            .collect();
        MVector {
            coords,
            signature: self.signature.clone(),
        }
    }

    /// Extracts the listed coordinates, in order, with the induced signature.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        MVector::new(
            indices.iter().map(|&i| self.coords[i]).collect(),
            self.signature.select(indices)?,
        )
    }
}

/// Orthonormalizes `vs` against the pairwise-orthogonal `fixed` directions.
///
/// Each fixed direction comes with its declared sign `<w,w> = ±|w|²`; fixed
/// components are removed first, then the residual span is orthonormalized
/// with largest-residual-first pivoting. Candidates whose residual falls
/// below the rank tolerance are dropped, so the output is an exactly
/// orthonormal spacelike set spanning `proj_{fixed⊥}(span vs)`.
pub fn orthonormalize_against<T: Real>(
    vs: &[MVector<T>],
    fixed: &[(MVector<T>, i8)],
) -> Result<Vec<MVector<T>>> {
    let null_tol = T::real(DEFAULT_CAUSAL_TOL);
    for (w, sign) in fixed {
        let ww = w.inner(w)?;
        if ww.abs() <= null_tol * w.aux_norm_sq() {
            return Err(Error::DegenerateFrame(
                "fixed direction is numerically null".into(),
            ));
        }
        let declared = if *sign >= 0 { T::one() } else { -T::one() };
        if (ww * declared) <= T::zero() {
            return Err(Error::DegenerateFrame(format!(
                "fixed direction has <w,w> = {ww} but declared sign {sign}"
            )));
        }
    }

    let mut residuals: Vec<MVector<T>> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut r = v.clone();
        for (w, _) in fixed {
            let coeff = r.inner(w)? / w.inner(w)?;
            r = r.sub(&w.scale(coeff));
        }
        residuals.push(r);
    }

    let scale = residuals
        .iter()
        .map(|r| r.aux_norm())
        .fold(T::one(), T::max);
    let rank_tol = T::real(DEFAULT_RANK_TOL).max(T::epsilon() * T::real(32.0)) * scale;

    let mut out: Vec<MVector<T>> = Vec::new();
    let mut remaining: Vec<MVector<T>> = residuals;
    loop {
        // largest-residual-first pivot, ties broken by lowest index
        let mut best = None;
        let mut best_norm = rank_tol;
        for (i, r) in remaining.iter().enumerate() {
            let n = r.aux_norm();
            if n > best_norm {
                best = Some(i);
                best_norm = n;
            }
        }
        let Some(i) = best else { break };
        let r = remaining.remove(i);
        let rr = r.inner(&r)?;
        if rr <= null_tol * r.aux_norm_sq() {
            return Err(Error::IndefiniteResidual(format!(
                "pivot residual has <r,r> = {rr} with auxiliary norm {best_norm}"
            )));
        }
        let g = r.scale(rr.sqrt().recip());
        for other in &mut remaining {
            let coeff = other.inner(&g)?;
            *other = other.sub(&g.scale(coeff));
        }
        out.push(g);
    }
    Ok(out)
}

/// Projects `v` onto the span of a pairwise-orthogonal unit frame, each
/// vector paired with its metric sign: `Σ sign·<v,w>·w`.
pub fn project_tangent<T: Real>(v: &MVector<T>, frame: &[(MVector<T>, i8)]) -> Result<MVector<T>> {
    let tol = T::real(FRAME_TOL);
    let mut acc = MVector::zero(v.signature().clone());
    for (w, sign) in frame {
        let declared = if *sign >= 0 { T::one() } else { -T::one() };
        let ww = w.inner(w)?;
        if (ww - declared).abs() > tol {
            return Err(Error::InvalidFrame(format!(
                "frame vector has <w,w> = {ww}, declared {declared}"
            )));
        }
        let coeff = v.inner(w)? * declared;
        acc = acc.add(&w.scale(coeff));
    }
    Ok(acc)
}
