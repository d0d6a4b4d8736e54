//! Deterministic low-discrepancy sampling of parameter boxes.
//!
//! Points come from a seeded Kronecker (Weyl) sequence: coordinate d of the
//! n-th point is frac(offset_d + n·γ_d) with γ_d the fractional part of the
//! square root of the d-th prime. The offsets are derived from the seed by
//! integer hashing, so a run is reproducible bit-for-bit from its seed alone.

use serde::{Deserialize, Serialize};

use crate::ambient::C64;
use crate::curves::FamilyKind;
use crate::ruled::HyperPoint;

/// Sampling box for (θ, s, |w|); the phase of w is always sampled over [0, 2π).
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct SampleBox {
    pub theta: [f64; 2],
    pub s: [f64; 2],
    pub w_abs: [f64; 2],
}

impl SampleBox {
    /// Default verification box per family. The |w| ranges keep every sample
    /// strictly inside the model domain and off the spine:
    /// [0.05, 4] for CP², [0.05, 0.95] for the interior CH² families, and
    /// [1.05, 4] for circles outside CH². The s range scales with r (the
    /// curve parameter carries arclength units, speeds being ~1/r), so the
    /// sampled curve segment is the same at every scale.
    pub fn verify_default(kind: FamilyKind, r: f64) -> Self {
        let w_abs = match kind {
            FamilyKind::Cp2Circle => [0.05, 4.0],
            FamilyKind::Ch2ExteriorCircle => [1.05, 4.0],
            _ => [0.05, 0.95],
        };
        SampleBox {
            theta: [0.0, 2.0 * std::f64::consts::PI],
            s: [-2.0 * r, 2.0 * r],
            w_abs,
        }
    }

    /// Default export box: like the verification box but reaching down to the
    /// spine (w = 0) where the model allows it.
    pub fn export_default(kind: FamilyKind, r: f64) -> Self {
        let mut b = Self::verify_default(kind, r);
        if !matches!(kind, FamilyKind::Ch2ExteriorCircle) {
            b.w_abs[0] = 0.0;
        }
        b
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn unit_from_bits(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seeded 4-dimensional Kronecker sequence on the unit cube.
#[derive(Clone, Debug)]
pub struct WeylSampler {
    offsets: [f64; 4],
    steps: [f64; 4],
    n: u64,
}

impl WeylSampler {
    pub fn new(seed: u64) -> Self {
        let mut offsets = [0.0; 4];
        for (d, slot) in offsets.iter_mut().enumerate() {
            *slot = unit_from_bits(splitmix64(seed.wrapping_add(d as u64 + 1)));
        }
        let steps = [
            2.0_f64.sqrt().fract(),
            3.0_f64.sqrt().fract(),
            5.0_f64.sqrt().fract(),
            7.0_f64.sqrt().fract(),
        ];
        WeylSampler {
            offsets,
            steps,
            n: 0,
        }
    }

    pub fn next_unit(&mut self) -> [f64; 4] {
        self.n += 1;
        let n = self.n as f64;
        let mut out = [0.0; 4];
        for (d, slot) in out.iter_mut().enumerate() {
            *slot = (self.offsets[d] + n * self.steps[d]).fract();
        }
        out
    }

    /// Next parameter point inside `bx`, with w = |w|·e^{it} and t ∈ [0, 2π).
    pub fn next_point(&mut self, bx: &SampleBox) -> HyperPoint {
        let u = self.next_unit();
        let lerp = |lo: f64, hi: f64, t: f64| lo + (hi - lo) * t;
        let theta = lerp(bx.theta[0], bx.theta[1], u[0]);
        let s = lerp(bx.s[0], bx.s[1], u[1]);
        let w_abs = lerp(bx.w_abs[0], bx.w_abs[1], u[2]);
        let phase = 2.0 * std::f64::consts::PI * u[3];
        HyperPoint::new(theta, s, C64::from_polar(w_abs, phase))
    }

    pub fn take_points(&mut self, bx: &SampleBox, n: usize) -> Vec<HyperPoint> {
        (0..n).map(|_| self.next_point(bx)).collect()
    }
}

/// n evenly spaced values covering [lo, hi] inclusive (a single value sits at lo).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}
