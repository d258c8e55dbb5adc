//! The Galilei group as data.
//!
//! Elements are parametrized as `g(b, a, β, R)` acting on spacetime points
//! `x = (x⁰, x)` with `x⁰ = ct` by
//!
//! ```text
//! x̃⁰ = x⁰ + b,    x̃ = R x + β x⁰ + a.
//! ```
//!
//! The homogeneous subgroup (`b = 0`, `a = 0`) carries two 4×4
//! representations: `D`, acting on contravariant vectors, and its dual `C`,
//! acting on covariant ones. The Euclidean pairing of a contravariant with a
//! covariant vector is invariant.

mod generators;

pub use generators::{generator_commutator_check, CommutatorReport, FirstOrderOp, Generator, GeneratorSet};

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Tolerance on `‖RᵀR − I‖∞` and `|det R − 1|` for a valid rotation.
pub const ROTATION_TOL: f64 = 1e-12;

/// Element `g(b, a, β, R)` of the Galilei group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalileiElement {
    /// Time translation in `x⁰` units.
    pub b: f64,
    /// Space translation.
    pub a: Vec3,
    /// Boost velocity in units of `c`.
    pub beta: Vec3,
    /// Rotation.
    pub r: Mat3,
}

fn rotation_defect(r: &Mat3) -> f64 {
    let ortho = (r.transpose() * r - Mat3::identity()).abs().max();
    ortho.max((r.determinant() - 1.0).abs())
}

/// Nearest rotation matrix (orthogonal polar factor).
pub fn reorthonormalize(r: &Mat3) -> Mat3 {
    let svd = r.svd(true, true);
    let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
    u * v_t
}

fn clean_rotation(r: Mat3) -> Mat3 {
    if rotation_defect(&r) > ROTATION_TOL {
        reorthonormalize(&r)
    } else {
        r
    }
}

/// Rotation by `angle` about `axis` (right-handed).
pub fn rotation(axis: &Vec3, angle: f64) -> Mat3 {
    let axis = nalgebra::Unit::new_normalize(*axis);
    *nalgebra::Rotation3::from_axis_angle(&axis, angle).matrix()
}

impl GalileiElement {
    pub fn new(b: f64, a: Vec3, beta: Vec3, r: Mat3) -> Result<Self> {
        let defect = rotation_defect(&r);
        if !(defect < ROTATION_TOL) {
            return Err(Error::InvalidRotation(defect));
        }
        Ok(Self { b, a, beta, r })
    }

    pub fn identity() -> Self {
        Self {
            b: 0.0,
            a: Vec3::zeros(),
            beta: Vec3::zeros(),
            r: Mat3::identity(),
        }
    }

    pub fn time_translation(b: f64) -> Self {
        Self { b, ..Self::identity() }
    }

    pub fn translation(a: Vec3) -> Self {
        Self { a, ..Self::identity() }
    }

    pub fn boost(beta: Vec3) -> Self {
        Self {
            beta,
            ..Self::identity()
        }
    }

    pub fn rotation(r: Mat3) -> Result<Self> {
        Self::new(0.0, Vec3::zeros(), Vec3::zeros(), r)
    }

    /// `self ∘ g1`, i.e. `g1` acts first.
    pub fn compose(&self, g1: &GalileiElement) -> GalileiElement {
        compose(self, g1)
    }

    pub fn inverse(&self) -> GalileiElement {
        inverse(self)
    }

    pub fn homogeneous(&self) -> HomogeneousElement {
        HomogeneousElement {
            beta: self.beta,
            r: self.r,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.b == 0.0 && self.a == Vec3::zeros()
    }

    /// Largest absolute parameter difference to `other`.
    pub fn distance(&self, other: &GalileiElement) -> f64 {
        let db = (self.b - other.b).abs();
        let da = (self.a - other.a).abs().max();
        let dbeta = (self.beta - other.beta).abs().max();
        let dr = (self.r - other.r).abs().max();
        db.max(da).max(dbeta).max(dr)
    }

    /// The spacetime action as an affine map `x ↦ M x + v` on `(x⁰, x)`.
    pub fn affine(&self) -> Affine4 {
        let mut m = Matrix4::identity();
        for i in 0..3 {
            m[(i + 1, 0)] = self.beta[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] = self.r[(i, j)];
            }
        }
        Affine4 {
            m,
            v: Vector4::new(self.b, self.a[0], self.a[1], self.a[2]),
        }
    }

    /// The inverse spacetime action `x ↦ x′` as an affine map.
    pub fn inverse_affine(&self) -> Affine4 {
        self.inverse().affine()
    }
}

/// Group law: `g2 ∘ g1 = g(b1+b2, a2+R2 a1+b1 β2, β2+R2 β1, R2 R1)`.
pub fn compose(g2: &GalileiElement, g1: &GalileiElement) -> GalileiElement {
    GalileiElement {
        b: g1.b + g2.b,
        a: g2.a + g2.r * g1.a + g1.b * g2.beta,
        beta: g2.beta + g2.r * g1.beta,
        r: clean_rotation(g2.r * g1.r),
    }
}

/// `g⁻¹ = g(−b, −R⁻¹(a − bβ), −R⁻¹β, R⁻¹)`.
pub fn inverse(g: &GalileiElement) -> GalileiElement {
    let rinv = g.r.transpose();
    GalileiElement {
        b: -g.b,
        a: -(rinv * (g.a - g.b * g.beta)),
        beta: -(rinv * g.beta),
        r: rinv,
    }
}

/// Splits `g` into a pure translation followed by (acting after) a
/// homogeneous element: `g = g(b, a, 0, I) ∘ g(0, 0, β, R)`.
pub fn decompose(g: &GalileiElement) -> (GalileiElement, GalileiElement) {
    let translation = GalileiElement {
        b: g.b,
        a: g.a,
        beta: Vec3::zeros(),
        r: Mat3::identity(),
    };
    let homogeneous = GalileiElement {
        b: 0.0,
        a: Vec3::zeros(),
        beta: g.beta,
        r: g.r,
    };
    (translation, homogeneous)
}

/// Affine map `x ↦ m x + v` on `R⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine4 {
    pub m: Matrix4<f64>,
    pub v: Vector4<f64>,
}

impl Affine4 {
    pub fn identity() -> Self {
        Self {
            m: Matrix4::identity(),
            v: Vector4::zeros(),
        }
    }

    pub fn apply(&self, x: &[f64; 4]) -> [f64; 4] {
        let y = self.m * Vector4::from(*x) + self.v;
        [y[0], y[1], y[2], y[3]]
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Affine4) -> Affine4 {
        Affine4 {
            m: self.m * inner.m,
            v: self.m * inner.v + self.v,
        }
    }
}

/// Whether a 4-vector transforms under `D` or under `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variance {
    Contravariant,
    Covariant,
}

impl Variance {
    fn name(self) -> &'static str {
        match self {
            Variance::Contravariant => "contravariant",
            Variance::Covariant => "covariant",
        }
    }
}

/// Spacetime 4-vector carrying its variance tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spacetime4Vector {
    pub x0: f64,
    pub xs: Vec3,
    variance: Variance,
}

impl Spacetime4Vector {
    pub fn contravariant(x0: f64, xs: Vec3) -> Self {
        Self {
            x0,
            xs,
            variance: Variance::Contravariant,
        }
    }

    pub fn covariant(x0: f64, xs: Vec3) -> Self {
        Self {
            x0,
            xs,
            variance: Variance::Covariant,
        }
    }

    pub fn from_array(x: [f64; 4], variance: Variance) -> Self {
        Self {
            x0: x[0],
            xs: Vec3::new(x[1], x[2], x[3]),
            variance,
        }
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x0, self.xs[0], self.xs[1], self.xs[2]]
    }

    fn as_vector4(&self) -> Vector4<f64> {
        Vector4::new(self.x0, self.xs[0], self.xs[1], self.xs[2])
    }

    fn expect(&self, variance: Variance) -> Result<()> {
        if self.variance == variance {
            Ok(())
        } else {
            Err(Error::VarianceMismatch {
                expected: variance.name(),
                found: self.variance.name(),
            })
        }
    }
}

/// Spacetime action of `g` on a contravariant point.
pub fn act_spacetime(g: &GalileiElement, x: &Spacetime4Vector) -> Result<Spacetime4Vector> {
    x.expect(Variance::Contravariant)?;
    Ok(Spacetime4Vector::contravariant(
        x.x0 + g.b,
        g.r * x.xs + g.beta * x.x0 + g.a,
    ))
}

/// The inverse action `x ↦ x′ = g⁻¹ x`, written out directly.
pub fn act_inverse(g: &GalileiElement, x: &Spacetime4Vector) -> Result<Spacetime4Vector> {
    x.expect(Variance::Contravariant)?;
    let rinv = g.r.transpose();
    Ok(Spacetime4Vector::contravariant(
        x.x0 - g.b,
        rinv * x.xs - (rinv * g.beta) * x.x0 - rinv * (g.a - g.b * g.beta),
    ))
}

/// Homogeneous element `g̃ = g(0, 0, β, R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousElement {
    pub beta: Vec3,
    pub r: Mat3,
}

impl HomogeneousElement {
    pub fn new(beta: Vec3, r: Mat3) -> Self {
        Self { beta, r }
    }

    pub fn element(&self) -> GalileiElement {
        GalileiElement {
            b: 0.0,
            a: Vec3::zeros(),
            beta: self.beta,
            r: self.r,
        }
    }

    pub fn compose(&self, other: &HomogeneousElement) -> HomogeneousElement {
        self.element().compose(&other.element()).homogeneous()
    }

    pub fn inverse(&self) -> HomogeneousElement {
        self.element().inverse().homogeneous()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepKind {
    D,
    C,
}

/// A 4×4 matrix of the `D` or `C` representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rep4Matrix {
    pub entries: Matrix4<f64>,
    pub kind: RepKind,
}

impl std::ops::Mul for Rep4Matrix {
    type Output = Rep4Matrix;

    fn mul(self, rhs: Rep4Matrix) -> Rep4Matrix {
        assert_eq!(self.kind, rhs.kind, "cannot multiply D and C matrices");
        Rep4Matrix {
            entries: self.entries * rhs.entries,
            kind: self.kind,
        }
    }
}

/// `D(g̃) = [[1, 0], [β, R]]`.
pub fn rep_d(g: &HomogeneousElement) -> Rep4Matrix {
    let mut m = Matrix4::zeros();
    m[(0, 0)] = 1.0;
    for i in 0..3 {
        m[(i + 1, 0)] = g.beta[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] = g.r[(i, j)];
        }
    }
    Rep4Matrix {
        entries: m,
        kind: RepKind::D,
    }
}

/// `C(g̃) = [[1, −(R⁻¹β)ᵀ], [0, R]]`, the dual of `D`.
pub fn rep_c(g: &HomogeneousElement) -> Rep4Matrix {
    let u = g.r.transpose() * g.beta;
    let mut m = Matrix4::zeros();
    m[(0, 0)] = 1.0;
    for i in 0..3 {
        m[(0, i + 1)] = -u[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] = g.r[(i, j)];
        }
    }
    Rep4Matrix {
        entries: m,
        kind: RepKind::C,
    }
}

/// Applies `D` to contravariant and `C` to covariant vectors.
pub fn transform_vec(g: &HomogeneousElement, v: &Spacetime4Vector) -> Spacetime4Vector {
    let rep = match v.variance {
        Variance::Contravariant => rep_d(g),
        Variance::Covariant => rep_c(g),
    };
    let y = rep.entries * v.as_vector4();
    Spacetime4Vector {
        x0: y[0],
        xs: Vec3::new(y[1], y[2], y[3]),
        variance: v.variance,
    }
}

/// Euclidean pairing `x⁰y₀ + x·y` of a contravariant with a covariant vector.
pub fn pairing(xup: &Spacetime4Vector, ydown: &Spacetime4Vector) -> Result<f64> {
    xup.expect(Variance::Contravariant)?;
    ydown.expect(Variance::Covariant)?;
    Ok(xup.x0 * ydown.x0 + xup.xs.dot(&ydown.xs))
}

/// Which rotation multiplies `a1` in the middle term of the cocycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CocycleVariant {
    /// `β2 · R1 a1`, as printed.
    AsWritten,
    /// `β2 · R2 a1`, matching the group law. Selected by the projective-law
    /// experiment in the `rep-check` suite.
    #[default]
    R2OnA1,
}

impl CocycleVariant {
    pub const ALL: [CocycleVariant; 2] = [CocycleVariant::AsWritten, CocycleVariant::R2OnA1];

    pub fn name(self) -> &'static str {
        match self {
            CocycleVariant::AsWritten => "as_written",
            CocycleVariant::R2OnA1 => "r2_on_a1",
        }
    }
}

/// Bargmann phase `ω(g2, g1) = ½mc(a2·R2β1 − β2·X a1 + b1 β2·R2β1)`.
pub fn cocycle_omega(g2: &GalileiElement, g1: &GalileiElement, m: f64, c: f64, variant: CocycleVariant) -> f64 {
    let x = match variant {
        CocycleVariant::AsWritten => g1.r,
        CocycleVariant::R2OnA1 => g2.r,
    };
    let r2b1 = g2.r * g1.beta;
    0.5 * m * c * (g2.a.dot(&r2b1) - g2.beta.dot(&(x * g1.a)) + g1.b * g2.beta.dot(&r2b1))
}

/// Distance of an angle from the nearest multiple of 2π.
pub fn angle_mod_2pi(theta: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let r = theta.rem_euclid(two_pi);
    r.min(two_pi - r)
}

/// Outcome of composing two first-order Lorentz maps on `(x₀, x₁)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzClosureReport {
    pub composed: Matrix2<f64>,
    /// Diagonal excess `β1 β2`: zero iff the product is again a first-order map.
    pub defect: f64,
    pub closes: bool,
}

/// Composes `x̃₀ = x₀ − βx₁, x̃₁ = x₁ − βx₀` for `β1` then `β2`.
///
/// The product has diagonal `1 + β1β2`, which lies outside the family unless
/// one of the parameters vanishes.
pub fn first_order_lorentz_closure_demo(beta1: f64, beta2: f64) -> Result<LorentzClosureReport> {
    if !(beta1.abs() < 1.0 && beta2.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "boost parameters must satisfy |β| < 1, got {beta1} and {beta2}"
        )));
    }
    let map = |b: f64| Matrix2::new(1.0, -b, -b, 1.0);
    let composed = map(beta2) * map(beta1);
    let defect = (composed[(0, 0)] - 1.0).abs().max((composed[(1, 1)] - 1.0).abs());
    Ok(LorentzClosureReport {
        composed,
        defect,
        closes: defect == 0.0,
    })
}
