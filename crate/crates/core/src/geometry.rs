//! The product space form `Q^{n1}_{k1} × Q^{n2}_{k2}` through its flat
//! embedding, and the pointwise extrinsic data of an immersed surface.
//!
//! A curved factor (`k ≠ 0`) sits in `ℝ^{n+1}` as the quadric `<x,x> = 1/k`,
//! timelike-signed for `k < 0`; a flat factor contributes a Euclidean block
//! with no constraint. The embedding's unit normals `ν_i = π̃_i(F)/r_i`
//! (curved factors only) separate the surface's second fundamental form in
//! the product from the ambient one, and the second-factor block projection
//! yields the tensors `R = LᵗL`, `S = KᵗL`, `T = KᵗK` in the orthonormal
//! tangent/normal frames.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jet::Jet2Point;
use crate::linalg::{det3, sym_eigenvalues_2x2, Mat};
use crate::maps::MapDescription;
use crate::metric::{orthonormalize_against, MVector, Signature};
use crate::scalar::Real;

/// Membership residual above which a jet is rejected as off the product.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// `Q^{n1}_{k1} × Q^{n2}_{k2}` with its flat embedding layout.
#[derive(Clone, Debug)]
pub struct ProductSpaceForm<T> {
    k1: T,
    k2: T,
    n1: usize,
    n2: usize,
    signature: Signature,
}

impl<T: Real> ProductSpaceForm<T> {
    pub fn new(k1: T, k2: T, n1: usize, n2: usize) -> Result<Self> {
        if k1 + k2 == T::zero() {
            return Err(Error::Curvature(
                "factor curvatures must satisfy k1 + k2 != 0".into(),
            ));
        }
        if n1 < 1 || n2 < 1 {
            return Err(Error::Curvature(
                "factor dimensions must be positive".into(),
            ));
        }
        let block = |k: T, n: usize| -> Signature {
            if k < T::zero() {
                Signature::lorentz(n + 1)
            } else if k > T::zero() {
                Signature::euclidean(n + 1)
            } else {
                Signature::euclidean(n)
            }
        };
        let signature = block(k1, n1).concat(&block(k2, n2))?;
        Ok(ProductSpaceForm {
            k1,
            k2,
            n1,
            n2,
            signature,
        })
    }

    pub fn k1(&self) -> T {
        self.k1
    }

    pub fn k2(&self) -> T {
        self.k2
    }

    pub fn kappa(&self) -> T {
        self.k1 + self.k2
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Flat dimension of factor `i`: `n_i + 1` when curved, `n_i` when flat.
    pub fn flat_dim(&self, i: usize) -> usize {
        let (k, n) = if i == 1 {
            (self.k1, self.n1)
        } else {
            (self.k2, self.n2)
        };
        if k == T::zero() {
            n
        } else {
            n + 1
        }
    }

    /// Total ambient dimension `N1 + N2`.
    pub fn ambient_dim(&self) -> usize {
        self.flat_dim(1) + self.flat_dim(2)
    }

    /// Index of the ambient flat metric, `σ(k1) + σ(k2)`.
    pub fn flat_index(&self) -> usize {
        self.signature.index()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Coordinate range of factor `i`'s block.
    pub fn factor_range(&self, i: usize) -> std::ops::Range<usize> {
        if i == 1 {
            0..self.flat_dim(1)
        } else {
            self.flat_dim(1)..self.ambient_dim()
        }
    }

    /// Block projection `π̃_i` (other factor zeroed out).
    pub fn project_factor(&self, v: &MVector<T>, i: usize) -> MVector<T> {
        v.zero_outside(self.factor_range(i))
    }

    /// `r_i = |k_i|^{-1/2}` for a curved factor.
    pub fn radius(&self, i: usize) -> Option<T> {
        let k = if i == 1 { self.k1 } else { self.k2 };
        if k == T::zero() {
            None
        } else {
            Some(k.abs().sqrt().recip())
        }
    }

    /// The unit normal field of the embedding on factor `i` at `p`, with its
    /// metric sign (`-1` hyperbolic, `+1` spherical). `None` on flat factors.
    pub fn nu(&self, p: &MVector<T>, i: usize) -> Option<(MVector<T>, i8)> {
        let k = if i == 1 { self.k1 } else { self.k2 };
        let r = self.radius(i)?;
        let sign = if k < T::zero() { -1 } else { 1 };
        Some((self.project_factor(p, i).scale(r.recip()), sign))
    }
}

/// Per-factor quadric residuals `<π̃_i p, π̃_i p> - 1/k_i` (flat factors
/// contribute zero).
pub fn membership_residual<T: Real>(space: &ProductSpaceForm<T>, p: &MVector<T>) -> (T, T) {
    let factor = |i: usize, k: T| -> T {
        if k == T::zero() {
            T::zero()
        } else {
            let proj = space.project_factor(p, i);
            proj.inner(&proj).expect("same signature") - k.recip()
        }
    };
    (factor(1, space.k1), factor(2, space.k2))
}

/// Everything pointwise about an immersed surface: frames, fundamental
/// forms, mean curvature and the projection tensors.
#[derive(Clone, Debug)]
pub struct ImmersionPointData<T> {
    /// Ambient position `F(s,t)`.
    pub point: MVector<T>,
    /// Coordinate tangents `F_s`, `F_t`.
    pub coord_tangents: (MVector<T>, MVector<T>),
    /// Orthonormalized tangent pair `X₁`, `X₂` (Gram–Schmidt, `F_s` first).
    pub tangents: (MVector<T>, MVector<T>),
    /// Embedding normals on the curved factors, with metric signs.
    pub nu1: Option<(MVector<T>, i8)>,
    pub nu2: Option<(MVector<T>, i8)>,
    /// Orthonormal spacelike basis of the surface's normal space inside the
    /// product, pivot-deterministic.
    pub normal_frame: Vec<MVector<T>>,
    /// First fundamental form in the coordinate frame.
    pub first_form: [[T; 2]; 2],
    /// Second fundamental form of the composed immersion into flat space,
    /// in the orthonormal tangent frame: entries (X₁X₁, X₁X₂, X₂X₂).
    pub alpha_ambient: [MVector<T>; 3],
    /// Second fundamental form of the surface in the product (ν components
    /// removed), same index convention.
    pub alpha: [MVector<T>; 3],
    /// Mean curvature vector in ambient coordinates.
    pub mean_curvature: MVector<T>,
    /// Second-factor projection tensors in the `X`/`η` frames.
    pub tensor_r: Mat<T>,
    pub tensor_s: Mat<T>,
    pub tensor_t: Mat<T>,
    /// Gauss curvature from the Gauss equation.
    pub gauss_curvature: T,
}

impl<T: Real> ImmersionPointData<T> {
    /// `Z_i = α_F(X_i, X_i)`, the ambient curvature vector of the `i`-th
    /// coordinate curve (`i` is 1 or 2).
    pub fn z_vector(&self, i: usize) -> &MVector<T> {
        match i {
            1 => &self.alpha_ambient[0],
            2 => &self.alpha_ambient[2],
            _ => panic!("curve index must be 1 or 2"),
        }
    }

    /// `ξ_i = S X_i` as an ambient vector, assembled from the normal frame.
    pub fn xi_vector(&self, i: usize) -> MVector<T> {
        let col = i - 1;
        let mut acc = MVector::zero(self.point.signature().clone());
        for (a, eta) in self.normal_frame.iter().enumerate() {
            acc = acc.add(&eta.scale(self.tensor_s.get(a, col)));
        }
        acc
    }

    /// Components `<α(X_i, X_j), η_a>` of the surface second fundamental
    /// form in the normal frame; rows follow the (11, 12, 22) convention.
    pub fn alpha_components(&self) -> Mat<T> {
        Mat::from_fn(3, self.normal_frame.len(), |ij, a| {
            self.alpha[ij]
                .inner(&self.normal_frame[a])
                .expect("same signature")
        })
    }

    /// Eigenvalues of `R`, ascending.
    pub fn r_eigenvalues(&self) -> (T, T) {
        sym_eigenvalues_2x2(&self.tensor_r)
    }
}

/// Computes all pointwise extrinsic data from an on-product second-order jet.
pub fn pointwise_geometry<T: Real>(
    space: &ProductSpaceForm<T>,
    jet: &Jet2Point<T>,
) -> Result<ImmersionPointData<T>> {
    if jet.signature() != space.signature() {
        return Err(Error::SignatureMismatch);
    }
    let p = jet.value();
    let (m1, m2) = membership_residual(space, &p);
    let mtol = T::real(MEMBERSHIP_TOL).max(T::epsilon() * T::real(64.0));
    if m1.abs() > mtol || m2.abs() > mtol {
        return Err(Error::Domain(format!(
            "membership residuals ({m1}, {m2}) exceed {MEMBERSHIP_TOL}"
        )));
    }

    let fs = jet.ds();
    let ft = jet.dt();
    let e = fs.inner(&fs)?;
    let f = fs.inner(&ft)?;
    let g = ft.inner(&ft)?;
    if e <= T::zero() || e * g - f * f <= T::zero() {
        return Err(Error::ImmersionFailure(
            "first fundamental form is not positive definite".into(),
        ));
    }

    // orthonormal tangents, F_s first
    let x1 = fs.scale(e.sqrt().recip());
    let y = ft.sub(&x1.scale(ft.inner(&x1)?));
    let yy = y.inner(&y)?;
    if yy <= T::real(1e-14) * y.aux_norm_sq().max(T::one()) {
        return Err(Error::ImmersionFailure("degenerate tangent plane".into()));
    }
    let x2 = y.scale(yy.sqrt().recip());
    // X_i = b[i][0]·F_s + b[i][1]·F_t
    let b10 = e.sqrt().recip();
    let b21 = yy.sqrt().recip();
    let b20 = -(ft.inner(&x1)?) * b10 * b21;
    let basis = [[b10, T::zero()], [b20, b21]];

    let nu1 = space.nu(&p, 1);
    let nu2 = space.nu(&p, 2);

    // normal frame of the surface inside the product: complement of
    // {X1, X2, ν1, ν2} over the standard basis, positive definite
    let mut fixed: Vec<(MVector<T>, i8)> = vec![(x1.clone(), 1), (x2.clone(), 1)];
    for nu in [&nu1, &nu2].into_iter().flatten() {
        fixed.push(nu.clone());
    }
    let candidates: Vec<MVector<T>> = (0..space.ambient_dim())
        .map(|i| MVector::basis(space.signature().clone(), i))
        .collect();
    let normal_frame = orthonormalize_against(&candidates, &fixed)?;
    let expected = space.n1() + space.n2() - 2;
    if normal_frame.len() != expected {
        return Err(Error::ImmersionFailure(format!(
            "normal frame has rank {} instead of {expected}",
            normal_frame.len()
        )));
    }

    // second derivatives in the orthonormal frame, projected off the
    // tangent plane: α_F(X_i, X_j)
    let dd = [[jet.dss(), jet.dst()], [jet.dst(), jet.dtt()]];
    let pairs = [(0usize, 0usize), (0, 1), (1, 1)];
    let mut alpha_ambient: Vec<MVector<T>> = Vec::with_capacity(3);
    for &(i, j) in &pairs {
        let mut acc = MVector::zero(space.signature().clone());
        for k in 0..2 {
            for l in 0..2 {
                let coeff = basis[i][k] * basis[j][l];
                if coeff != T::zero() {
                    acc = acc.add(&dd[k][l].scale(coeff));
                }
            }
        }
        // remove tangential part
        acc = acc.sub(&x1.scale(acc.inner(&x1)?));
        acc = acc.sub(&x2.scale(acc.inner(&x2)?));
        alpha_ambient.push(acc);
    }

    // α of the surface in the product: ν components removed
    let mut alpha: Vec<MVector<T>> = Vec::with_capacity(3);
    for a in &alpha_ambient {
        let mut v = a.clone();
        for (nu, sign) in [&nu1, &nu2].into_iter().flatten() {
            let s = if *sign >= 0 { T::one() } else { -T::one() };
            let coeff = v.inner(nu)? * s;
            v = v.sub(&nu.scale(coeff));
        }
        alpha.push(v);
    }

    let half = T::real(0.5);
    let mean_curvature = alpha[0].add(&alpha[2]).scale(half);

    // second-factor projections of the tangent and normal frames
    let lx = [space.project_factor(&x1, 2), space.project_factor(&x2, 2)];
    let tensor_r = Mat::from_fn(2, 2, |i, j| lx[i].inner(&lx[j]).expect("same signature"));
    let keta: Vec<MVector<T>> = normal_frame
        .iter()
        .map(|eta| space.project_factor(eta, 2))
        .collect();
    let q = normal_frame.len();
    let tensor_s = Mat::from_fn(q, 2, |a, i| keta[a].inner(&lx[i]).expect("same signature"));
    let tensor_t = Mat::from_fn(q, q, |a, b| {
        keta[a].inner(&keta[b]).expect("same signature")
    });

    // Gauss equation for a surface in the product, written in the
    // orthonormal frame
    let r11 = tensor_r.get(0, 0);
    let r22 = tensor_r.get(1, 1);
    let r12 = tensor_r.get(0, 1);
    let gauss_curvature = space.k1() * (T::one() - r11 - r22)
        + space.kappa() * (r11 * r22 - r12 * r12)
        + alpha[0].inner(&alpha[2])?
        - alpha[1].inner(&alpha[1])?;

    let alpha_ambient: [MVector<T>; 3] = alpha_ambient.try_into().expect("three entries");
    let alpha: [MVector<T>; 3] = alpha.try_into().expect("three entries");

    Ok(ImmersionPointData {
        point: p,
        coord_tangents: (fs, ft),
        tangents: (x1, x2),
        nu1,
        nu2,
        normal_frame,
        first_form: [[e, f], [f, g]],
        alpha_ambient,
        alpha,
        mean_curvature,
        tensor_r,
        tensor_s,
        tensor_t,
        gauss_curvature,
    })
}

/// Largest Frobenius residual of the three algebraic tensor identities
/// `SᵗS = R(I-R)`, `TS = S(I-R)`, `SSᵗ = T(I-T)`.
pub fn tensor_identity_residuals<T: Real>(d: &ImmersionPointData<T>) -> T {
    let i2 = Mat::identity(2);
    let iq = Mat::identity(d.tensor_t.rows());
    let r = &d.tensor_r;
    let s = &d.tensor_s;
    let t = &d.tensor_t;
    let i_minus_r = i2.sub(r);
    let first = s.transpose().mul(s).sub(&r.mul(&i_minus_r)).frobenius();
    let second = t.mul(s).sub(&s.mul(&i_minus_r)).frobenius();
    let third = s.mul(&s.transpose()).sub(&t.mul(&iq.sub(t))).frobenius();
    first.max(second).max(third)
}

/// Deviation from `α(X,Y) = <X,Y>·H`: the largest of
/// `‖α(X₁,X₁) - H‖`, `‖α(X₂,X₂) - H‖`, `‖α(X₁,X₂)‖` in the auxiliary norm.
pub fn umbilicity_residual<T: Real>(d: &ImmersionPointData<T>) -> T {
    let h = &d.mean_curvature;
    let r1 = d.alpha[0].sub(h).aux_norm();
    let r2 = d.alpha[2].sub(h).aux_norm();
    let r12 = d.alpha[1].aux_norm();
    r1.max(r2).max(r12)
}

/// Residual of the embedding shape-operator identities
/// `A_{ν1} = -(1/r1)(I-R)` and `A_{ν2} = -(1/r2)R` in the orthonormal frame.
pub fn nu_shape_residual<T: Real>(space: &ProductSpaceForm<T>, d: &ImmersionPointData<T>) -> T {
    let pairs = [(0usize, 0usize, 0usize), (0, 1, 1), (1, 1, 2)];
    let mut worst = T::zero();
    for (factor, nu) in [(1usize, &d.nu1), (2usize, &d.nu2)] {
        let Some((nu, _)) = nu else { continue };
        let r = space.radius(factor).expect("curved factor has a radius");
        for &(i, j, idx) in &pairs {
            let lhs = d.alpha_ambient[idx].inner(nu).expect("same signature");
            let rij = d.tensor_r.get(i, j);
            let expected = if factor == 1 {
                let delta = if i == j { T::one() } else { T::zero() };
                -(delta - rij) / r
            } else {
                -rij / r
            };
            worst = worst.max((lhs - expected).abs());
        }
    }
    worst
}

/// Rectangle and resolution of a parameter grid.
#[derive(Clone, Debug)]
pub struct GridSpec<T> {
    pub rect: [T; 4],
    pub ns: usize,
    pub nt: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(rect: [T; 4], ns: usize, nt: usize) -> Result<Self> {
        if ns < 2 || nt < 2 {
            return Err(Error::Grid(format!(
                "resolution must be at least 2x2, got {ns}x{nt}"
            )));
        }
        if rect[1] <= rect[0] || rect[3] <= rect[2] {
            return Err(Error::Grid("rectangle must have positive extent".into()));
        }
        Ok(GridSpec { rect, ns, nt })
    }

    pub fn s_at(&self, is: usize) -> T {
        let f = T::real(is as f64) / T::real((self.ns - 1) as f64);
        self.rect[0] + (self.rect[1] - self.rect[0]) * f
    }

    pub fn t_at(&self, it: usize) -> T {
        let f = T::real(it as f64) / T::real((self.nt - 1) as f64);
        self.rect[2] + (self.rect[3] - self.rect[2]) * f
    }

    /// Diagonal of the parameter rectangle; scales finite-difference steps.
    pub fn diagonal(&self) -> T {
        let ds = self.rect[1] - self.rect[0];
        let dt = self.rect[3] - self.rect[2];
        (ds * ds + dt * dt).sqrt()
    }
}

/// A sampled surface: pointwise data at every node of a parameter grid,
/// s-major order.
#[derive(Clone, Debug)]
pub struct SurfaceGrid<T> {
    pub spec: GridSpec<T>,
    pub points: Vec<GridPoint<T>>,
}

#[derive(Clone, Debug)]
pub struct GridPoint<T> {
    pub s: T,
    pub t: T,
    pub data: ImmersionPointData<T>,
}

impl<T: Real> SurfaceGrid<T> {
    /// Evaluates the map on the grid; points are independent, so the build
    /// is a parallel map with deterministic (index-ordered) output.
    pub fn build(
        space: &ProductSpaceForm<T>,
        map: &MapDescription<T>,
        spec: GridSpec<T>,
    ) -> Result<Self> {
        let nodes: Vec<(T, T)> = (0..spec.ns)
            .flat_map(|is| (0..spec.nt).map(move |it| (is, it)))
            .map(|(is, it)| (spec.s_at(is), spec.t_at(it)))
            .collect();
        let points: Vec<GridPoint<T>> = nodes
            .into_par_iter()
            .map(|(s, t)| {
                let jet = map.eval_jet2(s, t);
                pointwise_geometry(space, &jet).map(|data| GridPoint { s, t, data })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SurfaceGrid { spec, points })
    }

    pub fn at(&self, is: usize, it: usize) -> &GridPoint<T> {
        &self.points[is * self.spec.nt + it]
    }
}

/// Extremal residual with the parameter point where it occurred.
#[derive(Clone, Copy, Debug)]
pub struct Extremum<T> {
    pub value: T,
    pub s: T,
    pub t: T,
}

impl<T: Real> Extremum<T> {
    pub fn zero_at(s: T, t: T) -> Self {
        Extremum {
            value: T::zero(),
            s,
            t,
        }
    }

    pub fn take_max(&mut self, value: T, s: T, t: T) {
        if value > self.value {
            *self = Extremum { value, s, t };
        }
    }
}

/// Residual report of the differential fundamental equations over a grid.
#[derive(Clone, Debug)]
pub struct FundamentalReport<T> {
    /// `‖∇⊥_{X_i} H - (κ λ_j - k1) ξ_i‖` via central differences.
    pub codazzi: Extremum<T>,
    /// `|K_intrinsic - K_gauss|`, Brioschi on the grid vs the Gauss equation.
    pub gauss_intrinsic: Extremum<T>,
    /// `‖A_{S X_j} X_i + Sᵗ α(X_i, X_j)‖` against `∇R = 0`.
    pub r_derivative: Extremum<T>,
    /// `max |<ξ_i,ξ_j> - δ_ij λ_i(1-λ_i)|`.
    pub xi_gram: Extremum<T>,
    pub step_warning: Option<String>,
}

/// Checks the Gauss, Codazzi and R-derivative equations over the interior of
/// a grid. Codazzi differentiates the ambient mean-curvature field with a
/// step of `1e-4` times the rectangle diagonal; the intrinsic curvature uses
/// grid-spacing differences of jet-exact metric derivatives.
pub fn fundamental_equation_residuals<T: Real>(
    grid: &SurfaceGrid<T>,
    space: &ProductSpaceForm<T>,
    map: &MapDescription<T>,
    lambda: (T, T),
) -> Result<FundamentalReport<T>> {
    let spec = &grid.spec;
    let s0 = spec.s_at(0);
    let t0 = spec.t_at(0);
    let mut report = FundamentalReport {
        codazzi: Extremum::zero_at(s0, t0),
        gauss_intrinsic: Extremum::zero_at(s0, t0),
        r_derivative: Extremum::zero_at(s0, t0),
        xi_gram: Extremum::zero_at(s0, t0),
        step_warning: None,
    };
    if spec.ns < 4 || spec.nt < 4 {
        report.step_warning = Some(format!(
            "grid {}x{} is too coarse for interior finite differences; need at least 4x4",
            spec.ns, spec.nt
        ));
    }

    // jet-exact metric coefficients and their first derivatives per node
    let nn = spec.ns * spec.nt;
    let mut coeffs = vec![[T::zero(); 9]; nn]; // E F G E_s E_t F_s F_t G_s G_t
    for is in 0..spec.ns {
        for it in 0..spec.nt {
            let jet = map.eval_jet2(spec.s_at(is), spec.t_at(it));
            let (fs, ft) = (jet.ds(), jet.dt());
            let (fss, fst, ftt) = (jet.dss(), jet.dst(), jet.dtt());
            let two = T::real(2.0);
            coeffs[is * spec.nt + it] = [
                fs.inner(&fs)?,
                fs.inner(&ft)?,
                ft.inner(&ft)?,
                two * fss.inner(&fs)?,
                two * fst.inner(&fs)?,
                fss.inner(&ft)? + fs.inner(&fst)?,
                fst.inner(&ft)? + fs.inner(&ftt)?,
                two * fst.inner(&ft)?,
                two * ftt.inner(&ft)?,
            ];
        }
    }

    let hs = (spec.rect[1] - spec.rect[0]) / T::real((spec.ns - 1) as f64);
    let ht = (spec.rect[3] - spec.rect[2]) / T::real((spec.nt - 1) as f64);
    let fd_step = T::real(1e-4) * spec.diagonal();
    let half = T::real(0.5);
    let (l1, l2) = lambda;
    let codazzi_coeff = [
        space.kappa() * l2 - space.k1(),
        space.kappa() * l1 - space.k1(),
    ];

    let h_at = |s: T, t: T| -> Result<MVector<T>> {
        let jet = map.eval_jet2(s, t);
        Ok(pointwise_geometry(space, &jet)?.mean_curvature)
    };

    for is in 0..spec.ns {
        for it in 0..spec.nt {
            let gp = grid.at(is, it);
            let d = &gp.data;

            // pointwise: ξ Gram matrix against δ_ij λ_i (1-λ_i)
            let sts = d.tensor_s.transpose().mul(&d.tensor_s);
            for i in 0..2 {
                for j in 0..2 {
                    let li = if i == 0 { l1 } else { l2 };
                    let expected = if i == j {
                        li * (T::one() - li)
                    } else {
                        T::zero()
                    };
                    report
                        .xi_gram
                        .take_max((sts.get(i, j) - expected).abs(), gp.s, gp.t);
                }
            }

            // pointwise: (∇_{X_i} R) X_j = A_{S X_j} X_i + Sᵗ α(X_i, X_j)
            // with ∇R = 0 on constant-eigenvalue surfaces
            let q = d.normal_frame.len();
            let comp = d.alpha_components();
            let idx = |i: usize, j: usize| i + j; // (0,0)->0 (0,1)/(1,0)->1 (1,1)->2
            for i in 0..2 {
                for j in 0..2 {
                    for m in 0..2 {
                        let mut shape = T::zero(); // <A_{ξ_j} X_i, X_m>
                        let mut st_alpha = T::zero(); // <Sᵗ α(X_i,X_j), X_m>
                        for a in 0..q {
                            shape += comp.get(idx(i, m), a) * d.tensor_s.get(a, j);
                            st_alpha += comp.get(idx(i, j), a) * d.tensor_s.get(a, m);
                        }
                        report
                            .r_derivative
                            .take_max((shape + st_alpha).abs(), gp.s, gp.t);
                    }
                }
            }

            // interior: finite differences
            let interior = is > 0 && is + 1 < spec.ns && it > 0 && it + 1 < spec.nt;
            if !interior {
                continue;
            }

            // Codazzi: ∇⊥_{X_i} H = (κ λ_j - k1) ξ_i with fresh evaluations
            for (i, &coeff) in codazzi_coeff.iter().enumerate() {
                let (hp, hm) = if i == 0 {
                    (h_at(gp.s + fd_step, gp.t)?, h_at(gp.s - fd_step, gp.t)?)
                } else {
                    (h_at(gp.s, gp.t + fd_step)?, h_at(gp.s, gp.t - fd_step)?)
                };
                let speed = if i == 0 {
                    d.first_form[0][0].sqrt()
                } else {
                    d.first_form[1][1].sqrt()
                };
                let dh = hp.sub(&hm).scale((T::real(2.0) * fd_step * speed).recip());
                // project onto the surface normal space at the center point
                let mut nabla = MVector::zero(d.point.signature().clone());
                for eta in &d.normal_frame {
                    nabla = nabla.add(&eta.scale(dh.inner(eta)?));
                }
                let residual = nabla.sub(&d.xi_vector(i + 1).scale(coeff)).aux_norm();
                report.codazzi.take_max(residual, gp.s, gp.t);
            }

            // intrinsic curvature by the Brioschi formula; second metric
            // derivatives from one central difference of exact first ones
            let c = |di: isize, dj: isize| -> &[T; 9] {
                let i = (is as isize + di) as usize;
                let j = (it as isize + dj) as usize;
                &coeffs[i * spec.nt + j]
            };
            let here = c(0, 0);
            let (e, f, g) = (here[0], here[1], here[2]);
            let (e_s, e_t) = (here[3], here[4]);
            let (f_s, f_t) = (here[5], here[6]);
            let (g_s, g_t) = (here[7], here[8]);
            let e_tt = (c(0, 1)[4] - c(0, -1)[4]) / (T::real(2.0) * ht);
            let g_ss = (c(1, 0)[7] - c(-1, 0)[7]) / (T::real(2.0) * hs);
            let f_st = (c(0, 1)[5] - c(0, -1)[5]) / (T::real(2.0) * ht);
            let m1 = [
                [
                    -half * e_tt + f_st - half * g_ss,
                    half * e_s,
                    f_s - half * e_t,
                ],
                [f_t - half * g_s, e, f],
                [half * g_t, f, g],
            ];
            let m2 = [
                [T::zero(), half * e_t, half * g_s],
                [half * e_t, e, f],
                [half * g_s, f, g],
            ];
            let denom = e * g - f * f;
            let k_intrinsic = (det3(&m1) - det3(&m2)) / (denom * denom);
            report
                .gauss_intrinsic
                .take_max((k_intrinsic - d.gauss_curvature).abs(), gp.s, gp.t);
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Expr, Param};

    fn hyperbolic_flat_space() -> ProductSpaceForm<f64> {
        ProductSpaceForm::new(-1.0, 0.0, 3, 2).unwrap()
    }

    #[test]
    fn layout_of_hyperbolic_times_flat() {
        let space = hyperbolic_flat_space();
        assert_eq!(space.ambient_dim(), 6);
        assert_eq!(space.flat_index(), 1);
        assert_eq!(space.factor_range(1), 0..4);
        assert_eq!(space.factor_range(2), 4..6);
        assert_eq!(space.radius(1), Some(1.0));
        assert_eq!(space.radius(2), None);
    }

    #[test]
    fn layout_of_double_hyperbolic() {
        let space = ProductSpaceForm::<f64>::new(-1.0, -3.0, 3, 3).unwrap();
        assert_eq!(space.ambient_dim(), 8);
        assert_eq!(space.flat_index(), 2);
        assert_eq!(space.signature().signs(), &[-1, 1, 1, 1, -1, 1, 1, 1]);
        assert!((space.radius(2).unwrap() - 3.0f64.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn zero_curvature_sum_rejected() {
        assert!(ProductSpaceForm::<f64>::new(-1.0, 1.0, 3, 3).is_err());
    }

    #[test]
    fn membership_scaling() {
        let space = hyperbolic_flat_space();
        // a point on the quadric: (cosh u, sinh u, 0, 0, *, *)
        let u = 0.8f64;
        let p = MVector::new(
            vec![u.cosh(), u.sinh(), 0.0, 0.0, 2.0, -1.0],
            space.signature().clone(),
        )
        .unwrap();
        let (m1, m2) = membership_residual(&space, &p);
        assert!(m1.abs() < 1e-14);
        assert_eq!(m2, 0.0);
        // doubling the point moves the residual to 4/k - 1/k = 3/k
        let (m1, _) = membership_residual(&space, &p.scale(2.0));
        assert!((m1 - 3.0 / -1.0).abs() < 1e-13);
    }

    /// A geodesic sphere inside the curved factor, constant in the flat one:
    /// the tangent never meets the second factor, so S vanishes, R vanishes
    /// and T projects exactly onto the flat directions.
    #[test]
    fn slice_sphere_has_vanishing_s_and_r() {
        let space = hyperbolic_flat_space();
        let rho = 0.9f64;
        let (a, b) = (rho.cosh(), rho.sinh());
        let comps = vec![
            Expr::constant(a),
            Expr::scaled(
                b,
                Expr::mul(
                    Expr::sin(Expr::var(Param::S)),
                    Expr::cos(Expr::var(Param::T)),
                ),
            ),
            Expr::scaled(
                b,
                Expr::mul(
                    Expr::sin(Expr::var(Param::S)),
                    Expr::sin(Expr::var(Param::T)),
                ),
            ),
            Expr::scaled(b, Expr::cos(Expr::var(Param::S))),
            Expr::constant(0.0),
            Expr::constant(0.0),
        ];
        let map = MapDescription::new(comps, space.signature().clone()).unwrap();
        let jet = map.eval_jet2(1.1, 0.7);
        let d = pointwise_geometry(&space, &jet).unwrap();
        assert!(d.tensor_s.max_abs() < 1e-12);
        assert!(d.tensor_r.max_abs() < 1e-12);
        // T has eigenvalues {0, 1, 1}: trace 2, and T(I-T) = 0
        let trace: f64 = (0..3).map(|i| d.tensor_t.get(i, i)).sum();
        assert!((trace - 2.0).abs() < 1e-12);
        assert!(tensor_identity_residuals(&d) < 1e-12);
        // umbilical sphere in a slice
        assert!(umbilicity_residual(&d) < 1e-12);
    }

    #[test]
    fn off_product_jet_rejected() {
        let space = hyperbolic_flat_space();
        let comps = vec![
            Expr::constant(2.0), // not on the quadric
            Expr::var(Param::S),
            Expr::constant(0.0),
            Expr::constant(0.0),
            Expr::var(Param::T),
            Expr::constant(0.0),
        ];
        let map = MapDescription::new(comps, space.signature().clone()).unwrap();
        let jet = map.eval_jet2(0.1, 0.2);
        assert!(matches!(
            pointwise_geometry(&space, &jet),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn degenerate_tangent_plane_rejected() {
        let space = hyperbolic_flat_space();
        // both parameters drive the same direction
        let st = Expr::add(Expr::var(Param::S), Expr::var(Param::T));
        let comps = vec![
            Expr::cosh(st.clone()),
            Expr::sinh(st),
            Expr::constant(0.0),
            Expr::constant(0.0),
            Expr::constant(0.0),
            Expr::constant(0.0),
        ];
        let map = MapDescription::new(comps, space.signature().clone()).unwrap();
        let jet = map.eval_jet2(0.3, -0.1);
        assert!(matches!(
            pointwise_geometry(&space, &jet),
            Err(Error::ImmersionFailure(_))
        ));
    }

    #[test]
    fn grid_requires_two_nodes_per_direction() {
        assert!(GridSpec::<f64>::new([0.0, 1.0, 0.0, 1.0], 1, 5).is_err());
        assert!(GridSpec::<f64>::new([0.0, 1.0, 1.0, 0.5], 4, 4).is_err());
    }
}
