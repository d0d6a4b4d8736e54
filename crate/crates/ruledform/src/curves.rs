//! Plane curves δ(s) in the 2-plane 𝒱 ⊂ ℂ³ over which the hypersurfaces
//! are built.
//!
//! The five constant-geodesic-curvature families are orbits δ(s) = exp(sλY)p
//! of one-parameter isometry groups of the curve plane; each generator Y has
//! a closed-form exponential (rotation, boost, unipotent, or cosine/sine
//! block), so no generic matrix exponential is ever taken. A general curve
//! is accepted through a caller-supplied evaluator producing (δ, δ_s, δ_ss).

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientConfig, CVec, C64};
use crate::error::{GeomError, Result};

/// The five constant-curvature families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Circles on the totally geodesic CP¹ ⊂ CP².
    Cp2Circle,
    /// Equidistant curves of a geodesic in CH¹ ⊂ CH² (a = 0 is the bisector spine).
    Ch2Equidistant,
    /// Circles in CH¹ ⊂ CH².
    Ch2Circle,
    /// Horocycles in CH¹ ⊂ CH².
    Ch2Horocycle,
    /// Circles on the definite plane outside CH²; the hypersurface still lies in CH².
    Ch2ExteriorCircle,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Cp2Circle,
        FamilyKind::Ch2Equidistant,
        FamilyKind::Ch2Circle,
        FamilyKind::Ch2Horocycle,
        FamilyKind::Ch2ExteriorCircle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Cp2Circle => "cp2-circle",
            FamilyKind::Ch2Equidistant => "ch2-equidistant",
            FamilyKind::Ch2Circle => "ch2-circle",
            FamilyKind::Ch2Horocycle => "ch2-horocycle",
            FamilyKind::Ch2ExteriorCircle => "ch2-exterior-circle",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                GeomError::Config(format!(
                    "unknown family '{s}' (expected one of: {})",
                    FamilyKind::ALL.map(|k| k.name()).join(", ")
                ))
            })
    }

    /// The ambient signs this family lives in.
    pub fn ambient(&self, r: f64) -> AmbientConfig {
        match self {
            FamilyKind::Cp2Circle => AmbientConfig::cp2(r),
            FamilyKind::Ch2ExteriorCircle => AmbientConfig::ch2_exterior(r),
            _ => AmbientConfig::ch2_interior(r),
        }
    }

    pub fn legal_range(&self) -> &'static str {
        match self {
            FamilyKind::Cp2Circle => "(0, pi/2)",
            FamilyKind::Ch2Equidistant | FamilyKind::Ch2Horocycle => "(-inf, inf)",
            FamilyKind::Ch2Circle => "(0, inf)",
            FamilyKind::Ch2ExteriorCircle => "(-pi/4, pi/4)",
        }
    }

    fn a_in_range(&self, a: f64) -> bool {
        if !a.is_finite() {
            return false;
        }
        match self {
            FamilyKind::Cp2Circle => a > 0.0 && a < std::f64::consts::FRAC_PI_2,
            FamilyKind::Ch2Equidistant | FamilyKind::Ch2Horocycle => true,
            FamilyKind::Ch2Circle => a > 0.0,
            FamilyKind::Ch2ExteriorCircle => a.abs() < std::f64::consts::FRAC_PI_4,
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One evaluation of a plane curve: position, first two derivatives,
/// the scalar b = ⟨δ_s, iδ⟩/r², and the factor ⟨δ_s, δ_s⟩ − ε̃εb²r²
/// whose positivity makes the hypersurface an immersion.
#[derive(Clone, Copy, Debug)]
pub struct CurveEval {
    pub s: f64,
    pub delta: CVec,
    pub delta_s: CVec,
    pub delta_ss: CVec,
    pub b: f64,
    pub rho_sq_factor: f64,
}

impl CurveEval {
    pub fn from_jets(
        cfg: &AmbientConfig,
        s: f64,
        delta: CVec,
        delta_s: CVec,
        delta_ss: CVec,
    ) -> Self {
        debug_assert!(
            (cfg.inner(&delta, &delta) - cfg.epsilon * cfg.epsilon_tilde * cfg.r * cfg.r).abs()
                <= 1e-6 * cfg.r * cfg.r,
            "curve leaves the level set <delta, delta> = eps~ eps r^2 at s = {s}"
        );
        let b = cfg.inner(&delta_s, &delta.times_i()) / (cfg.r * cfg.r);
        let ee = cfg.epsilon * cfg.epsilon_tilde;
        let rho_sq_factor = cfg.inner(&delta_s, &delta_s) - ee * b * b * cfg.r * cfg.r;
        CurveEval {
            s,
            delta,
            delta_s,
            delta_ss,
            b,
            rho_sq_factor,
        }
    }

    /// δ_s − ε̃εb iδ: the horizontal part of the velocity over the basepoint δ.
    pub fn zeta(&self, cfg: &AmbientConfig) -> CVec {
        let ee = cfg.epsilon * cfg.epsilon_tilde;
        self.delta_s - self.delta.times_i().scale(ee * self.b)
    }
}

/// Contract for any curve δ: I → 𝒱 with ⟨δ, δ⟩ = ε̃εr². Evaluators must be
/// stateless so that evaluations may run concurrently.
pub trait PlaneCurve: Sync {
    fn ambient(&self) -> AmbientConfig;
    fn eval(&self, s: f64) -> CurveEval;
}

/// A caller-supplied curve given by its first two derivative jets.
pub struct GeneralCurve<F>
where
    F: Fn(f64) -> (CVec, CVec, CVec) + Sync,
{
    cfg: AmbientConfig,
    jets: F,
}

impl<F> GeneralCurve<F>
where
    F: Fn(f64) -> (CVec, CVec, CVec) + Sync,
{
    pub fn new(cfg: AmbientConfig, jets: F) -> Self {
        GeneralCurve { cfg, jets }
    }
}

impl<F> PlaneCurve for GeneralCurve<F>
where
    F: Fn(f64) -> (CVec, CVec, CVec) + Sync,
{
    fn ambient(&self) -> AmbientConfig {
        self.cfg
    }

    fn eval(&self, s: f64) -> CurveEval {
        let (d, ds, dss) = (self.jets)(s);
        CurveEval::from_jets(&self.cfg, s, d, ds, dss)
    }
}

/// One of the five constant-curvature families, with its generator Y,
/// speed λ, and base point p.
#[derive(Clone, Copy, Debug)]
pub struct CurveFamily {
    kind: FamilyKind,
    a: f64,
    cfg: AmbientConfig,
    lambda: f64,
    base: CVec,
}

impl CurveFamily {
    pub fn new(kind: FamilyKind, a: f64, r: f64) -> Result<Self> {
        if !kind.a_in_range(a) {
            return Err(GeomError::ParamRange {
                family: kind.name(),
                a,
                range: kind.legal_range(),
            });
        }
        let cfg = kind.ambient(r);
        let (lambda, base) = match kind {
            FamilyKind::Cp2Circle => (
                1.0 / (r * (2.0 * a).sin()),
                CVec::from_reals(r * a.cos(), r * a.sin(), 0.0),
            ),
            FamilyKind::Ch2Equidistant => (
                1.0 / (r * (2.0 * a).cosh()),
                CVec::new(
                    C64::new(r * a.cosh(), 0.0),
                    C64::new(0.0, r * a.sinh()),
                    C64::new(0.0, 0.0),
                ),
            ),
            FamilyKind::Ch2Circle => (
                1.0 / (r * (2.0 * a).sinh()),
                CVec::from_reals(r * a.cosh(), r * a.sinh(), 0.0),
            ),
            FamilyKind::Ch2Horocycle => {
                (1.0 / r, CVec::from_reals(r * a.cosh(), r * a.sinh(), 0.0))
            }
            FamilyKind::Ch2ExteriorCircle => (
                1.0 / (r * (2.0 * a).cos()),
                CVec::from_reals(0.0, r * a.cos(), r * a.sin()),
            ),
        };
        Ok(CurveFamily {
            kind,
            a,
            cfg,
            lambda,
            base,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn base_point(&self) -> CVec {
        self.base
    }

    /// The generator Y, acting on the family's 2-subspace and as zero elsewhere.
    pub fn generator(&self) -> Matrix3<C64> {
        let i = C64::i();
        let o = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        match self.kind {
            FamilyKind::Cp2Circle | FamilyKind::Ch2Circle => {
                Matrix3::new(i, o, o, o, -i, o, o, o, o)
            }
            FamilyKind::Ch2Equidistant => Matrix3::new(o, one, o, one, o, o, o, o, o),
            FamilyKind::Ch2Horocycle => Matrix3::new(i, -i, o, i, -i, o, o, o, o),
            FamilyKind::Ch2ExteriorCircle => Matrix3::new(o, o, o, o, o, i, o, i, o),
        }
    }

    /// Closed-form exp(tY), extended by the identity off the family's 2-subspace.
    pub fn transport(&self, t: f64) -> Matrix3<C64> {
        let o = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        match self.kind {
            FamilyKind::Cp2Circle | FamilyKind::Ch2Circle => {
                let ph = C64::from_polar(1.0, t);
                Matrix3::new(ph, o, o, o, ph.conj(), o, o, o, one)
            }
            FamilyKind::Ch2Equidistant => {
                let ch = C64::new(t.cosh(), 0.0);
                let sh = C64::new(t.sinh(), 0.0);
                Matrix3::new(ch, sh, o, sh, ch, o, o, o, one)
            }
            FamilyKind::Ch2Horocycle => {
                let ti = C64::new(0.0, t);
                Matrix3::new(one + ti, -ti, o, ti, one - ti, o, o, o, one)
            }
            FamilyKind::Ch2ExteriorCircle => {
                let cs = C64::new(t.cos(), 0.0);
                let isn = C64::new(0.0, t.sin());
                Matrix3::new(one, o, o, o, cs, isn, o, isn, cs)
            }
        }
    }

    /// Geodesic curvature of the projected spine γ = π ∘ δ, in closed form.
    pub fn spine_curvature_closed(&self) -> f64 {
        let r = self.cfg.r;
        let t = 2.0 * self.a;
        match self.kind {
            FamilyKind::Cp2Circle => (2.0 / r) * (t.cos() / t.sin()).abs(),
            FamilyKind::Ch2Equidistant => (2.0 / r) * t.tanh().abs(),
            FamilyKind::Ch2Circle => (2.0 / r) * (t.cosh() / t.sinh()),
            FamilyKind::Ch2Horocycle => 2.0 / r,
            FamilyKind::Ch2ExteriorCircle => (2.0 / r) * (t.sin() / t.cos()).abs(),
        }
    }
}

impl PlaneCurve for CurveFamily {
    fn ambient(&self) -> AmbientConfig {
        self.cfg
    }

    fn eval(&self, s: f64) -> CurveEval {
        let t = s * self.lambda;
        let m = self.transport(t);
        let y = self.generator();
        let yp = CVec(y * self.base.0);
        let yyp = CVec(y * yp.0);
        let delta = CVec(m * self.base.0);
        let delta_s = CVec(m * yp.0).scale(self.lambda);
        let delta_ss = CVec(m * yyp.0).scale(self.lambda * self.lambda);
        CurveEval::from_jets(&self.cfg, s, delta, delta_s, delta_ss)
    }
}

/// Geodesic curvature of γ = π ∘ δ at parameter s, computed by central
/// differences of the horizontal unit tangent.
///
/// The lift δ(s) is generally not horizontal (its velocity has the vertical
/// component ε̃εb iδ), so the raw derivative of the lifted tangent picks up
/// the fiber transport term ε̃εb iT, which is subtracted before projecting
/// back to the horizontal space. Truncation error is O(step²).
pub fn spine_curvature_numeric<C>(curve: &C, s: f64, step: f64) -> Result<f64>
where
    C: PlaneCurve + ?Sized,
{
    let cfg = curve.ambient();
    let ee = cfg.epsilon * cfg.epsilon_tilde;
    let center = curve.eval(s);
    if center.rho_sq_factor <= 1e-12 {
        return Err(GeomError::DegenerateCurve {
            s,
            factor: center.rho_sq_factor,
        });
    }
    let unit_tangent = |ev: &CurveEval| -> Result<CVec> {
        let zeta = ev.zeta(&cfg);
        let norm_sq = cfg.inner(&zeta, &zeta);
        if norm_sq <= 1e-12 {
            return Err(GeomError::DegenerateCurve {
                s: ev.s,
                factor: norm_sq,
            });
        }
        Ok(zeta.scale(1.0 / norm_sq.sqrt()))
    };
    let plus = unit_tangent(&curve.eval(s + step))?;
    let minus = unit_tangent(&curve.eval(s - step))?;
    let t_here = unit_tangent(&center)?;
    let raw = (plus - minus).scale(1.0 / (2.0 * step));
    let corrected = raw - t_here.times_i().scale(ee * center.b);
    let projected = cfg.horizontal_part(&center.delta, &corrected)?;
    let speed = center.rho_sq_factor.sqrt();
    Ok(cfg.inner(&projected, &projected).max(0.0).sqrt() / speed)
}

/// Richardson-extrapolated variant of [`spine_curvature_numeric`]: combines
/// the O(step²) estimates at `step` and `step/2` into an O(step⁴) one.
pub fn spine_curvature_numeric_richardson<C>(curve: &C, s: f64, step: f64) -> Result<f64>
where
    C: PlaneCurve + ?Sized,
{
    let coarse = spine_curvature_numeric(curve, s, step)?;
    let fine = spine_curvature_numeric(curve, s, 0.5 * step)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FAMILIES: [(FamilyKind, f64); 5] = [
        (FamilyKind::Cp2Circle, 0.3),
        (FamilyKind::Ch2Equidistant, 0.4),
        (FamilyKind::Ch2Circle, 0.3),
        (FamilyKind::Ch2Horocycle, 0.2),
        (FamilyKind::Ch2ExteriorCircle, 0.3),
    ];

    #[test]
    fn horocycle_generator_is_nilpotent() {
        let fam = CurveFamily::new(FamilyKind::Ch2Horocycle, 0.7, 1.0).unwrap();
        let y = fam.generator();
        let y2 = y * y;
        assert!(y2.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn lambda_closed_forms() {
        let r = 2.0;
        let a = 0.3;
        let lam = |k: FamilyKind| CurveFamily::new(k, a, r).unwrap().lambda();
        assert!((lam(FamilyKind::Cp2Circle) - 1.0 / (r * (2.0 * a).sin())).abs() < 1e-15);
        assert!((lam(FamilyKind::Ch2Equidistant) - 1.0 / (r * (2.0 * a).cosh())).abs() < 1e-15);
        assert!((lam(FamilyKind::Ch2Circle) - 1.0 / (r * (2.0 * a).sinh())).abs() < 1e-15);
        assert!((lam(FamilyKind::Ch2Horocycle) - 1.0 / r).abs() < 1e-15);
        assert!((lam(FamilyKind::Ch2ExteriorCircle) - 1.0 / (r * (2.0 * a).cos())).abs() < 1e-15);
    }

    #[test]
    fn delta_at_zero_is_base_point() {
        for (kind, a) in FAMILIES {
            let fam = CurveFamily::new(kind, a, 1.3).unwrap();
            let ev = fam.eval(0.0);
            assert!(
                (ev.delta - fam.base_point()).euclid_norm() < 1e-15,
                "{kind}"
            );
        }
    }

    #[test]
    fn curve_level_is_constant() {
        for (kind, a) in FAMILIES {
            let fam = CurveFamily::new(kind, a, 1.7).unwrap();
            let cfg = fam.ambient();
            let expect = cfg.epsilon * cfg.epsilon_tilde * cfg.r * cfg.r;
            for i in 0..40 {
                let s = -4.0 + 0.2 * i as f64;
                let ev = fam.eval(s);
                let lvl = cfg.inner(&ev.delta, &ev.delta);
                assert!(
                    (lvl - expect).abs() <= 1e-10 * expect.abs(),
                    "{kind} at s={s}: {lvl} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn second_derivative_relations() {
        for (kind, a) in FAMILIES {
            let fam = CurveFamily::new(kind, a, 1.0).unwrap();
            let lam2 = fam.lambda() * fam.lambda();
            for i in 0..20 {
                let s = -2.0 + 0.21 * i as f64;
                let ev = fam.eval(s);
                let expected = match kind {
                    FamilyKind::Ch2Equidistant => ev.delta.scale(lam2),
                    FamilyKind::Ch2Horocycle => CVec::zero(),
                    _ => ev.delta.scale(-lam2),
                };
                assert!(
                    (ev.delta_ss - expected).euclid_norm() <= 1e-10 * (1.0 + lam2),
                    "{kind} at s={s}"
                );
            }
        }
    }

    #[test]
    fn b_is_constant_with_closed_value() {
        // The horocycle base point at height a carries the conformal factor
        // e^{-2a}: b = -(1/r) e^{-2a}, reducing to the nominal -1/r at a = 0.
        let r = 1.4;
        let checks: [(FamilyKind, f64, f64); 6] = [
            (
                FamilyKind::Cp2Circle,
                0.3,
                (2.0_f64 * 0.3).cos() / ((2.0_f64 * 0.3).sin() * r),
            ),
            (FamilyKind::Ch2Equidistant, 0.4, -(2.0_f64 * 0.4).tanh() / r),
            (
                FamilyKind::Ch2Circle,
                0.3,
                -(2.0_f64 * 0.3).cosh() / ((2.0_f64 * 0.3).sinh() * r),
            ),
            (FamilyKind::Ch2Horocycle, 0.2, -(-2.0_f64 * 0.2).exp() / r),
            (FamilyKind::Ch2Horocycle, 0.0, -1.0 / r),
            (
                FamilyKind::Ch2ExteriorCircle,
                0.3,
                (2.0_f64 * 0.3).sin() / ((2.0_f64 * 0.3).cos() * r),
            ),
        ];
        for (kind, a, b_expect) in checks {
            let fam = CurveFamily::new(kind, a, r).unwrap();
            for i in 0..10 {
                let s = -1.0 + 0.37 * i as f64;
                let ev = fam.eval(s);
                assert!(
                    (ev.b - b_expect).abs() <= 1e-12,
                    "{kind}: {} vs {b_expect}",
                    ev.b
                );
            }
        }
    }

    #[test]
    fn rho_sq_factor_is_constant_and_normalized() {
        // The lambda choices normalize <delta_s, delta_s> - eps~ eps b^2 r^2
        // to 1; the horocycle at height a instead carries the constant
        // e^{-4a} (equal to 1 at its natural base point a = 0). Either way
        // rho = sigma times a constant, so the immersion never degenerates.
        for (kind, a) in FAMILIES {
            let fam = CurveFamily::new(kind, a, 2.3).unwrap();
            let expect = if kind == FamilyKind::Ch2Horocycle {
                (-4.0 * a).exp()
            } else {
                1.0
            };
            for i in 0..25 {
                let s = -3.0 + 0.25 * i as f64;
                let ev = fam.eval(s);
                assert!(
                    (ev.rho_sq_factor - expect).abs() <= 1e-10,
                    "{kind} at s={s}: {} vs {expect}",
                    ev.rho_sq_factor
                );
            }
        }
        let horo0 = CurveFamily::new(FamilyKind::Ch2Horocycle, 0.0, 2.3).unwrap();
        assert!((horo0.eval(0.7).rho_sq_factor - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn out_of_range_parameters_rejected() {
        assert!(matches!(
            CurveFamily::new(FamilyKind::Ch2Circle, 0.0, 1.0),
            Err(GeomError::ParamRange { .. })
        ));
        assert!(CurveFamily::new(FamilyKind::Cp2Circle, std::f64::consts::FRAC_PI_2, 1.0).is_err());
        assert!(CurveFamily::new(FamilyKind::Cp2Circle, 0.0, 1.0).is_err());
        assert!(CurveFamily::new(FamilyKind::Ch2ExteriorCircle, 0.8, 1.0).is_err());
        assert!(CurveFamily::new(FamilyKind::Ch2Equidistant, 0.0, 1.0).is_ok());
    }

    #[test]
    fn spine_curvature_closed_values() {
        let fam = CurveFamily::new(FamilyKind::Ch2Horocycle, 0.9, 2.0).unwrap();
        assert!((fam.spine_curvature_closed() - 1.0).abs() < 1e-15);
        let geo =
            CurveFamily::new(FamilyKind::Cp2Circle, std::f64::consts::FRAC_PI_4, 1.0).unwrap();
        assert!(geo.spine_curvature_closed().abs() < 1e-15);
        let bis = CurveFamily::new(FamilyKind::Ch2Equidistant, 0.0, 1.0).unwrap();
        assert_eq!(bis.spine_curvature_closed(), 0.0);
    }

    #[test]
    fn spine_curvature_numeric_matches_closed() {
        for (kind, a) in FAMILIES {
            let fam = CurveFamily::new(kind, a, 1.0).unwrap();
            let expect = fam.spine_curvature_closed();
            for s in [0.0, 0.6, -1.1] {
                let got = spine_curvature_numeric(&fam, s, 1e-5).unwrap();
                assert!(
                    (got - expect).abs() <= 1e-8 * (1.0 + expect),
                    "{kind} at s={s}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn spine_curvature_numeric_geodesic_cases() {
        let geo =
            CurveFamily::new(FamilyKind::Cp2Circle, std::f64::consts::FRAC_PI_4, 1.0).unwrap();
        assert!(spine_curvature_numeric(&geo, 0.4, 1e-5).unwrap() < 1e-9);
        let bis = CurveFamily::new(FamilyKind::Ch2Equidistant, 0.0, 1.0).unwrap();
        assert!(spine_curvature_numeric(&bis, -0.7, 1e-5).unwrap() < 1e-9);
    }

    #[test]
    fn richardson_variant_beats_plain_central_differences() {
        let fam = CurveFamily::new(FamilyKind::Ch2Equidistant, 0.5, 1.0).unwrap();
        let expect = fam.spine_curvature_closed();
        let h = 1e-3;
        let plain = (spine_curvature_numeric(&fam, 0.4, h).unwrap() - expect).abs();
        let extra = (spine_curvature_numeric_richardson(&fam, 0.4, h).unwrap() - expect).abs();
        assert!(
            extra < plain / 10.0,
            "richardson {extra:.2e} vs plain {plain:.2e}"
        );
    }

    #[test]
    fn spine_curvature_numeric_convergence_order() {
        let fam = CurveFamily::new(FamilyKind::Ch2Circle, 0.4, 1.0).unwrap();
        let expect = fam.spine_curvature_closed();
        let err = |h: f64| (spine_curvature_numeric(&fam, 0.3, h).unwrap() - expect).abs();
        let (e1, e2, e4) = (err(1e-2), err(5e-3), err(2.5e-3));
        let order1 = (e1 / e2).log2();
        let order2 = (e2 / e4).log2();
        assert!(order1 >= 1.9, "observed order {order1}");
        assert!(order2 >= 1.9, "observed order {order2}");
    }

    #[test]
    fn general_curve_reparametrization_matches_family() {
        let fam = CurveFamily::new(FamilyKind::Cp2Circle, 0.35, 1.0).unwrap();
        let cfg = fam.ambient();
        // Same circle traversed at double speed.
        let doubled = GeneralCurve::new(cfg, move |s: f64| {
            let ev = fam.eval(2.0 * s);
            (ev.delta, ev.delta_s.scale(2.0), ev.delta_ss.scale(4.0))
        });
        let expect = fam.spine_curvature_closed();
        let got = spine_curvature_numeric(&doubled, 0.2, 1e-5).unwrap();
        assert!(
            (got - expect).abs() <= 1e-8 * (1.0 + expect),
            "{got} vs {expect}"
        );
    }

    #[test]
    fn degenerate_curve_is_rejected() {
        // A curve whose velocity is purely vertical at s = 0: delta_s = i delta.
        let cfg = AmbientConfig::cp2(1.0);
        let rigged = GeneralCurve::new(cfg, |s: f64| {
            let u = 0.4 + 0.5 * s * s;
            let phase = C64::from_polar(1.0, s);
            let d = CVec::new(
                phase * C64::new(u.cos(), 0.0),
                phase * C64::new(u.sin(), 0.0),
                C64::new(0.0, 0.0),
            );
            let du = s;
            let ds = CVec::new(
                phase * C64::new(-u.sin() * du, u.cos()),
                phase * C64::new(u.cos() * du, u.sin()),
                C64::new(0.0, 0.0),
            );
            // Second derivative is unused by this test.
            (d, ds, CVec::zero())
        });
        assert!(matches!(
            spine_curvature_numeric(&rigged, 0.0, 1e-5),
            Err(GeomError::DegenerateCurve { .. })
        ));
    }

    #[test]
    fn family_kind_round_trips_through_json() {
        for (kind, _) in FAMILIES {
            let json = serde_json::to_string(&kind).unwrap();
            let back: FamilyKind = serde_json::from_str(&json).unwrap();
            assert_eq!(kind, back);
            assert_eq!(json, format!("\"{}\"", kind.name()));
        }
    }
}
