//! Linear algebra of ℂ³ carrying a (possibly indefinite) Hermitian form.
//!
//! The ambient data is the pair (ε, ε̃) of signs together with a scale r > 0.
//! The Hermitian form is h(z, w) = ε z₀w̄₀ + z₁w̄₁ + z₂w̄₂ and the real inner
//! product is ⟨z, w⟩ = Re h(z, w), so that ⟨e₀, e₀⟩ = ε while e₁, e₂ are unit
//! spacelike. Projectivization of the level set ⟨z, z⟩ = εr² produces CP²
//! (ε = 1) or CH² (ε = −1) of holomorphic curvature 4c, c = ε/r².

use nalgebra::Vector3;

use crate::error::{GeomError, Result};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;

/// A vector in ℂ³, read against the basis (e₀, e₁, e₂).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec(pub Vector3<C64>);

impl CVec {
    pub fn new(z0: C64, z1: C64, z2: C64) -> Self {
        CVec(Vector3::new(z0, z1, z2))
    }

    pub fn from_reals(z0: f64, z1: f64, z2: f64) -> Self {
        CVec(Vector3::new(
            C64::new(z0, 0.0),
            C64::new(z1, 0.0),
            C64::new(z2, 0.0),
        ))
    }

    pub fn zero() -> Self {
        CVec(Vector3::zeros())
    }

    pub fn e0() -> Self {
        Self::from_reals(1.0, 0.0, 0.0)
    }

    pub fn e1() -> Self {
        Self::from_reals(0.0, 1.0, 0.0)
    }

    pub fn e2() -> Self {
        Self::from_reals(0.0, 0.0, 1.0)
    }

    /// Multiplication by i, an isometry of the ambient form.
    pub fn times_i(&self) -> Self {
        CVec(self.0 * C64::i())
    }

    pub fn scale(&self, t: f64) -> Self {
        CVec(self.0 * C64::new(t, 0.0))
    }

    pub fn scale_c(&self, c: C64) -> Self {
        CVec(self.0 * c)
    }

    /// Euclidean (ℝ⁶) squared norm; sign-blind, used for normalization
    /// of projective representatives and for residual scales.
    pub fn euclid_norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn euclid_norm(&self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.euclid_norm_sq() == 0.0
    }
}

impl std::ops::Add for CVec {
    type Output = CVec;
    fn add(self, rhs: CVec) -> CVec {
        CVec(self.0 + rhs.0)
    }
}

impl std::ops::Sub for CVec {
    type Output = CVec;
    fn sub(self, rhs: CVec) -> CVec {
        CVec(self.0 - rhs.0)
    }
}

impl std::ops::Neg for CVec {
    type Output = CVec;
    fn neg(self) -> CVec {
        CVec(-self.0)
    }
}

/// The ambient space form data: signs (ε, ε̃), scale r, and c = ε/r².
///
/// Case 1: ε = ε̃ = 1 (CP², curve plane spanned by e₀, e₁, axis v = e₂).
/// Case 2: ε = −1, ε̃ = 1 (CH², curve plane spanned by e₀, e₁, axis v = e₂).
/// Case 3: ε = ε̃ = −1 (CH², curve plane spanned by e₁, e₂, axis v = e₀).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmbientConfig {
    pub epsilon: f64,
    pub epsilon_tilde: f64,
    pub r: f64,
    pub c: f64,
}

impl AmbientConfig {
    pub fn new(epsilon: f64, epsilon_tilde: f64, r: f64) -> Result<Self> {
        if epsilon.abs() != 1.0 || epsilon_tilde.abs() != 1.0 {
            return Err(GeomError::Config(format!(
                "signs must be +1 or -1, got epsilon = {epsilon}, epsilon_tilde = {epsilon_tilde}"
            )));
        }
        if epsilon > 0.0 && epsilon_tilde < 0.0 {
            return Err(GeomError::Config(
                "epsilon = +1 forces epsilon_tilde = +1".into(),
            ));
        }
        if r <= 0.0 || !r.is_finite() {
            return Err(GeomError::Config(format!(
                "scale r must be positive, got {r}"
            )));
        }
        Ok(AmbientConfig {
            epsilon,
            epsilon_tilde,
            r,
            c: epsilon / (r * r),
        })
    }

    /// CP² of holomorphic curvature 4/r².
    pub fn cp2(r: f64) -> Self {
        Self::new(1.0, 1.0, r).expect("r > 0")
    }

    /// CH² with the curve plane meeting CH² (interior construction).
    pub fn ch2_interior(r: f64) -> Self {
        Self::new(-1.0, 1.0, r).expect("r > 0")
    }

    /// CH² with a definite curve plane (construction over curves outside CH²).
    pub fn ch2_exterior(r: f64) -> Self {
        Self::new(-1.0, -1.0, r).expect("r > 0")
    }

    /// The unit axis vector orthogonal to the curve plane 𝒱:
    /// e₂ when ε̃ = 1, e₀ when ε̃ = −1.
    pub fn v_axis(&self) -> CVec {
        if self.epsilon_tilde > 0.0 {
            CVec::e2()
        } else {
            CVec::e0()
        }
    }

    /// Hermitian form h(z, w) = ε z₀w̄₀ + z₁w̄₁ + z₂w̄₂.
    pub fn herm(&self, z: &CVec, w: &CVec) -> C64 {
        let eps = C64::new(self.epsilon, 0.0);
        eps * z.0[0] * w.0[0].conj() + z.0[1] * w.0[1].conj() + z.0[2] * w.0[2].conj()
    }

    /// Real inner product ⟨z, w⟩ = Re h(z, w).
    pub fn inner(&self, z: &CVec, w: &CVec) -> f64 {
        self.herm(z, w).re
    }

    /// Component of `x` orthogonal to both z and iz (the horizontal part
    /// over the basepoint z of the circle fibration).
    ///
    /// Errors when the basepoint is null, since the decomposition divides
    /// by ⟨z, z⟩.
    pub fn horizontal_part(&self, z: &CVec, x: &CVec) -> Result<CVec> {
        let level = self.inner(z, z);
        if level.abs() <= f64::EPSILON * z.euclid_norm_sq() {
            return Err(GeomError::NullBasepoint);
        }
        let iz = z.times_i();
        let a = self.inner(x, z) / level;
        let b = self.inner(x, &iz) / level;
        Ok(*x - z.scale(a) - iz.scale(b))
    }
}

/// A point of the projectivization, stored through a nonzero representative.
#[derive(Clone, Copy, Debug)]
pub struct ProjPoint {
    rep: CVec,
    level: f64,
}

impl ProjPoint {
    pub fn new(rep: CVec, cfg: &AmbientConfig) -> Result<Self> {
        if rep.is_zero() {
            return Err(GeomError::ZeroRepresentative);
        }
        let level = cfg.inner(&rep, &rep);
        Ok(ProjPoint { rep, level })
    }

    pub fn rep(&self) -> &CVec {
        &self.rep
    }

    /// ⟨rep, rep⟩ of the stored representative. Zero level marks an ideal point.
    pub fn level(&self) -> f64 {
        self.level
    }
}

/// Projective coincidence residual: the maximum modulus of the 2×2 complex
/// minors of the 3×2 matrix [p | q] after scaling each representative to
/// unit Euclidean norm. Zero exactly when p and q are the same projective
/// point; well-defined for ideal (null) representatives too.
pub fn coincide_residual(p: &ProjPoint, q: &ProjPoint) -> f64 {
    let a = p.rep.0 / C64::new(p.rep.euclid_norm(), 0.0);
    let b = q.rep.0 / C64::new(q.rep.euclid_norm(), 0.0);
    let m01 = a[0] * b[1] - a[1] * b[0];
    let m02 = a[0] * b[2] - a[2] * b[0];
    let m12 = a[1] * b[2] - a[2] * b[1];
    m01.norm().max(m02.norm()).max(m12.norm())
}
