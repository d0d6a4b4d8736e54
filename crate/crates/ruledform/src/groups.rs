//! The two-parameter isometry actions Ω_u, Θ_v that make the example
//! hypersurfaces cohomogeneity one.
//!
//! Ω_u moves along the spine (δ(s) ↦ δ(s + u/λ)) and Θ_v rotates the ruling
//! phase (w ↦ e^{iv}w); together they satisfy
//!
//! ```text
//! (Ω_u ∘ Θ_v) f(θ, s, w) = f(θ, s + u/λ, e^{iv} w).
//! ```
//!
//! Both are written as exact closed-form matrices on ℂ³, not exponentials
//! of stored generators.

use nalgebra::Matrix3;

use crate::ambient::{CVec, ProjPoint, C64};
use crate::curves::{CurveFamily, FamilyKind, PlaneCurve};
use crate::error::{GeomError, Result};
use crate::ruled::{embed, frame, HyperPoint};

/// The spine translation Ω_u of the given family.
pub fn omega(kind: FamilyKind, u: f64) -> Matrix3<C64> {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    match kind {
        FamilyKind::Cp2Circle | FamilyKind::Ch2Circle => {
            let ph = C64::from_polar(1.0, u);
            Matrix3::new(ph, o, o, o, ph.conj(), o, o, o, one)
        }
        FamilyKind::Ch2Equidistant => {
            let ch = C64::new(u.cosh(), 0.0);
            let sh = C64::new(u.sinh(), 0.0);
            Matrix3::new(ch, sh, o, sh, ch, o, o, o, one)
        }
        FamilyKind::Ch2Horocycle => {
            let ui = C64::new(0.0, u);
            Matrix3::new(one + ui, -ui, o, ui, one - ui, o, o, o, one)
        }
        FamilyKind::Ch2ExteriorCircle => {
            let cs = C64::new(u.cos(), 0.0);
            let isn = C64::new(0.0, u.sin());
            Matrix3::new(one, o, o, o, cs, isn, o, isn, cs)
        }
    }
}

/// The ruling rotation Θ_v: a phase on the axis direction, identity on the
/// curve plane.
pub fn theta(kind: FamilyKind, v: f64) -> Matrix3<C64> {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let ph = C64::from_polar(1.0, v);
    match kind {
        FamilyKind::Ch2ExteriorCircle => Matrix3::new(ph, o, o, o, one, o, o, o, one),
        _ => Matrix3::new(one, o, o, o, one, o, o, o, ph),
    }
}

pub fn apply(m: &Matrix3<C64>, z: &CVec) -> CVec {
    CVec(m * z.0)
}

/// ‖(Ω_u∘Θ_v)·f(θ, s, w) − f(θ, s + u/λ, e^{iv}w)‖ in the Euclidean norm.
pub fn equivariance_residual(family: &CurveFamily, pt: &HyperPoint, u: f64, v: f64) -> Result<f64> {
    let z = embed(family, pt)?;
    let g = omega(family.kind(), u) * theta(family.kind(), v);
    let moved = apply(&g, &z);
    let shifted = HyperPoint::new(
        pt.theta,
        pt.s + u / family.lambda(),
        pt.w * C64::from_polar(1.0, v),
    );
    let direct = embed(family, &shifted)?;
    Ok((moved - direct).euclid_norm())
}

/// |cos angle| between the initial Ω-orbit tangent and the structure vector,
/// measured after projecting both to the horizontal space. The orbit tangent
/// at u = 0 is (1/λ)e^{iθ}σδ_s, whose U-component is ρ/λ, so the margin is
/// strictly positive wherever the construction is immersed.
pub fn transversality_margin(family: &CurveFamily, pt: &HyperPoint) -> Result<f64> {
    let cfg = family.ambient();
    let fr = frame(family, pt)?;
    let ev = family.eval(pt.s);
    let tangent = ev
        .delta_s
        .scale_c(C64::from_polar(fr.sigma / family.lambda(), pt.theta));
    let horizontal = cfg.horizontal_part(&fr.z, &tangent)?;
    let norm = cfg.inner(&horizontal, &horizontal).max(0.0).sqrt();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(cfg.inner(&horizontal, &fr.u).abs() / norm)
}

/// Projectivized orbit points (Ω_u∘Θ_v)·z over a nonempty (u, v) grid.
/// Duplicates from nontrivial isotropy are kept so the output stays
/// grid-shaped.
pub fn orbit_sample(
    family: &CurveFamily,
    pt: &HyperPoint,
    grid: &[(f64, f64)],
) -> Result<Vec<ProjPoint>> {
    if grid.is_empty() {
        return Err(GeomError::EmptySample);
    }
    let cfg = family.ambient();
    let z = embed(family, pt)?;
    grid.iter()
        .map(|&(u, v)| {
            let g = omega(family.kind(), u) * theta(family.kind(), v);
            ProjPoint::new(apply(&g, &z), &cfg)
        })
        .collect()
}
