//! Closed-form surface profiles `η(s)` with analytic derivatives.

use serde::{Deserialize, Serialize};

use crate::elliptic::{jacobi, EllipticModulus};

/// A one-dimensional surface deviation `η(s)`.
pub trait Profile {
    fn value(&self, s: f64) -> f64;

    /// `[η, η', η'', η''', η'''']` at `s`, if known in closed form.
    fn derivatives(&self, _s: f64) -> Option<[f64; 5]> {
        None
    }

    /// Length over which the profile changes by O(1) of its amplitude.
    fn width(&self) -> f64;

    /// Spatial period, for periodic profiles.
    fn period(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum AnalyticProfile {
    Flat,
    /// `A sech²(p(s − s₀))`
    SechSquared {
        amplitude: f64,
        p: f64,
        s0: f64,
    },
    /// `B cos(q(s − s₀))`
    Cosine {
        amplitude: f64,
        q: f64,
        s0: f64,
    },
    /// `D cn²(p(s − s₀), k)`
    CnSquared {
        amplitude: f64,
        p: f64,
        k: EllipticModulus,
        s0: f64,
    },
}

impl AnalyticProfile {
    pub fn amplitude(&self) -> f64 {
        match *self {
            AnalyticProfile::Flat => 0.0,
            AnalyticProfile::SechSquared { amplitude, .. }
            | AnalyticProfile::Cosine { amplitude, .. }
            | AnalyticProfile::CnSquared { amplitude, .. } => amplitude,
        }
    }

    pub fn with_amplitude(self, a: f64) -> Self {
        match self {
            AnalyticProfile::Flat => AnalyticProfile::Flat,
            AnalyticProfile::SechSquared { p, s0, .. } => AnalyticProfile::SechSquared {
                amplitude: a,
                p,
                s0,
            },
            AnalyticProfile::Cosine { q, s0, .. } => AnalyticProfile::Cosine {
                amplitude: a,
                q,
                s0,
            },
            AnalyticProfile::CnSquared { p, k, s0, .. } => AnalyticProfile::CnSquared {
                amplitude: a,
                p,
                k,
                s0,
            },
        }
    }
}

/// `y = sech²(z)` and its first four `z`-derivatives.
fn sech2_derivatives(z: f64) -> [f64; 5] {
    let y = 1.0 / z.cosh().powi(2);
    let t = z.tanh();
    [
        y,
        -2.0 * y * t,
        4.0 * y - 6.0 * y * y,
        (-8.0 + 24.0 * y) * y * t,
        16.0 * y - 120.0 * y * y + 120.0 * y * y * y,
    ]
}

/// `y = cn²(z, k)` and its first four `z`-derivatives, from
/// `y'' = 2a + 4by − 6cy²` with `a = 1−k², b = 2k²−1, c = k²`.
fn cn2_derivatives(z: f64, m: EllipticModulus) -> [f64; 5] {
    let j = jacobi(z, m);
    let k2 = m.k() * m.k();
    let (a, b, c) = (1.0 - k2, 2.0 * k2 - 1.0, k2);
    let y = j.cn * j.cn;
    let y1 = -2.0 * j.cn * j.sn * j.dn;
    let y2 = 2.0 * a + 4.0 * b * y - 6.0 * c * y * y;
    let y3 = (4.0 * b - 12.0 * c * y) * y1;
    let y4 = 8.0 * a * b + (16.0 * b * b - 72.0 * a * c) * y - 120.0 * b * c * y * y
        + 120.0 * c * c * y * y * y;
    [y, y1, y2, y3, y4]
}

fn scale(d: [f64; 5], amplitude: f64, p: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    let mut f = amplitude;
    for (o, v) in out.iter_mut().zip(d) {
        *o = f * v;
        f *= p;
    }
    out
}

impl Profile for AnalyticProfile {
    fn value(&self, s: f64) -> f64 {
        match *self {
            AnalyticProfile::Flat => 0.0,
            AnalyticProfile::SechSquared { amplitude, p, s0 } => {
                amplitude / (p * (s - s0)).cosh().powi(2)
            }
            AnalyticProfile::Cosine { amplitude, q, s0 } => amplitude * (q * (s - s0)).cos(),
            AnalyticProfile::CnSquared {
                amplitude,
                p,
                k,
                s0,
            } => amplitude * jacobi(p * (s - s0), k).cn.powi(2),
        }
    }

    fn derivatives(&self, s: f64) -> Option<[f64; 5]> {
        Some(match *self {
            AnalyticProfile::Flat => [0.0; 5],
            AnalyticProfile::SechSquared { amplitude, p, s0 } => {
                scale(sech2_derivatives(p * (s - s0)), amplitude, p)
            }
            AnalyticProfile::Cosine { amplitude, q, s0 } => {
                let (sn, cs) = (q * (s - s0)).sin_cos();
                scale([cs, -sn, -cs, sn, cs], amplitude, q)
            }
            AnalyticProfile::CnSquared {
                amplitude,
                p,
                k,
                s0,
            } => scale(cn2_derivatives(p * (s - s0), k), amplitude, p),
        })
    }

    fn width(&self) -> f64 {
        match *self {
            AnalyticProfile::Flat => f64::INFINITY,
            AnalyticProfile::SechSquared { p, .. } | AnalyticProfile::CnSquared { p, .. } => {
                1.0 / p
            }
            AnalyticProfile::Cosine { q, .. } => 1.0 / q,
        }
    }

    fn period(&self) -> Option<f64> {
        match *self {
            AnalyticProfile::Cosine { q, .. } => Some(2.0 * std::f64::consts::PI / q),
            AnalyticProfile::CnSquared { p, k, .. } => crate::elliptic::complete_elliptic_k(k)
                .ok()
                .map(|kk| 2.0 * kk / p),
            _ => None,
        }
    }
}

/// Arbitrary profile given by a closure; derivatives must be taken numerically.
pub struct FnProfile<F: Fn(f64) -> f64> {
    pub f: F,
    pub width: f64,
    pub period: Option<f64>,
}

impl<F: Fn(f64) -> f64> Profile for FnProfile<F> {
    fn value(&self, s: f64) -> f64 {
        (self.f)(s)
    }

    fn width(&self) -> f64 {
        self.width
    }

    fn period(&self) -> Option<f64> {
        self.period
    }
}
