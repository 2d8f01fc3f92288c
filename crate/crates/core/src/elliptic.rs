//! Jacobi elliptic functions and the complete elliptic integral of the first
//! kind, both through the arithmetic-geometric mean.
//!
//! `k` is the modulus throughout, not the parameter `m = k²`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const MAX_ITER: usize = 32;
const TOL: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EllipticError {
    #[error("elliptic modulus must lie in [0, 1], got {0}")]
    ModulusOutOfRange(f64),
    #[error("K(k) diverges at k = 1")]
    ModulusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self, EllipticError> {
        if (0.0..=1.0).contains(&k) {
            Ok(Self(k))
        } else {
            Err(EllipticError::ModulusOutOfRange(k))
        }
    }

    pub fn k(self) -> f64 {
        self.0
    }

    /// Complementary modulus `√(1−k²)`, formed without cancellation near 1.
    pub fn complement(self) -> f64 {
        ((1.0 - self.0) * (1.0 + self.0)).sqrt()
    }
}

impl TryFrom<f64> for EllipticModulus {
    type Error = EllipticError;

    fn try_from(k: f64) -> Result<Self, Self::Error> {
        Self::new(k)
    }
}

impl From<EllipticModulus> for f64 {
    fn from(m: EllipticModulus) -> f64 {
        m.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// AGM sequence `(a_n, c_n)` starting from `a₀ = 1, b₀ = k', c₀ = k`.
fn agm_sequence(k: f64, kc: f64) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![1.0];
    let mut c = vec![k];
    let mut b = kc;
    for _ in 0..MAX_ITER {
        let an = *a.last().unwrap();
        if c.last().unwrap().abs() <= TOL * an {
            break;
        }
        a.push(0.5 * (an + b));
        c.push(0.5 * (an - b));
        b = (an * b).sqrt();
    }
    (a, c)
}

/// `K(k)`. Errors at `k = 1`, where the integral diverges.
pub fn complete_elliptic_k(m: EllipticModulus) -> Result<f64, EllipticError> {
    if m.k() == 1.0 {
        return Err(EllipticError::ModulusOne);
    }
    let (a, _) = agm_sequence(m.k(), m.complement());
    Ok(FRAC_PI_2 / a.last().unwrap())
}

/// `sn, cn, dn` at `z` by descending Landen transformation.
pub fn jacobi(z: f64, m: EllipticModulus) -> Jacobi {
    let k = m.k();
    if k == 0.0 {
        return Jacobi {
            sn: z.sin(),
            cn: z.cos(),
            dn: 1.0,
        };
    }
    if k == 1.0 {
        let s = 1.0 / z.cosh();
        return Jacobi {
            sn: z.tanh(),
            cn: s,
            dn: s,
        };
    }
    let (a, c) = agm_sequence(k, m.complement());
    let n = a.len() - 1;
    // Reduce into one real period 4K so the amplified angle stays small.
    let period = 4.0 * FRAC_PI_2 / a[n];
    let z = z - period * (z / period).round();
    let mut phi = 2f64.powi(n as i32) * a[n] * z;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (1.0 - k * k * sn * sn).sqrt();
    Jacobi { sn, cn, dn }
}

pub fn jacobi_cn(z: f64, m: EllipticModulus) -> f64 {
    jacobi(z, m).cn
}

pub fn sech(z: f64) -> f64 {
    1.0 / z.cosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(k: f64) -> EllipticModulus {
        EllipticModulus::new(k).unwrap()
    }

    /// RK4 on `(sn, cn, dn)' = (cn·dn, −sn·dn, −k²·sn·cn)`, independent of AGM.
    fn ode_jacobi(z: f64, k: f64, steps: usize) -> [f64; 3] {
        let f = |y: [f64; 3]| [y[1] * y[2], -y[0] * y[2], -k * k * y[0] * y[1]];
        let h = z / steps as f64;
        let mut y = [0.0, 1.0, 1.0];
        for _ in 0..steps {
            let k1 = f(y);
            let k2 = f(std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]));
            let k3 = f(std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]));
            let k4 = f(std::array::from_fn(|i| y[i] + h * k3[i]));
            y = std::array::from_fn(|i| {
                y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            });
        }
        y
    }

    #[test]
    fn rejects_modulus_outside_unit_interval() {
        assert!(EllipticModulus::new(-0.1).is_err());
        assert!(EllipticModulus::new(1.0 + 1e-12).is_err());
        assert!(EllipticModulus::new(f64::NAN).is_err());
        assert!(serde_json::from_str::<EllipticModulus>("1.5").is_err());
    }

    #[test]
    fn cn_at_origin_is_one() {
        for k in [0.0, 0.3, 0.7, 0.999, 1.0] {
            assert_eq!(jacobi_cn(0.0, m(k)), 1.0);
        }
    }

    #[test]
    fn degenerate_moduli() {
        for z in [0.3, 1.1, 2.7] {
            assert!((jacobi_cn(z, m(0.0)) - z.cos()).abs() < 1e-15);
        }
        for z in [0.5, 2.0] {
            assert!((jacobi_cn(z, m(1.0)) - sech(z)).abs() < 1e-15);
        }
    }

    #[test]
    fn cn_matches_ode_integration() {
        let y = ode_jacobi(0.7, 0.6, 20_000);
        let j = jacobi(0.7, m(0.6));
        assert!((j.cn - y[1]).abs() < 1e-12, "{} vs {}", j.cn, y[1]);
        assert!((j.sn - y[0]).abs() < 1e-12);
        assert!((j.dn - y[2]).abs() < 1e-12);
        assert!((j.cn - 0.776_662_364_108_456_8).abs() < 1e-13);
    }

    #[test]
    fn k_agrees_with_power_series() {
        assert_eq!(complete_elliptic_k(m(0.0)).unwrap(), FRAC_PI_2);
        // K(k) = π/2 · Σ [(2n)!/(2²ⁿ n!²)]² k²ⁿ
        let k: f64 = 0.8;
        let (mut term, mut sum) = (1.0_f64, 1.0_f64);
        for n in 1..2000 {
            let r = (2 * n - 1) as f64 / (2 * n) as f64;
            term *= r * r * k * k;
            sum += term;
        }
        let series = FRAC_PI_2 * sum;
        let agm = complete_elliptic_k(m(0.8)).unwrap();
        assert!(((agm - series) / series).abs() < 1e-14);
        assert!((agm - 1.995_302_777_664_729).abs() < 1e-13);
    }

    #[test]
    fn k_diverges_at_one() {
        assert_eq!(complete_elliptic_k(m(1.0)), Err(EllipticError::ModulusOne));
        let near = complete_elliptic_k(m(1.0 - 1e-12)).unwrap();
        assert!(near > 14.0);
    }

    #[test]
    fn degenerates_to_sech_monotonically() {
        let worst = |k: f64| {
            (0..=1000)
                .map(|i| -5.0 + 0.01 * i as f64)
                .map(|z| (jacobi_cn(z, m(k)) - sech(z)).abs())
                .fold(0.0, f64::max)
        };
        let errs: Vec<f64> = [0.9, 0.99, 0.999, 0.9999, 1.0 - 1e-8]
            .iter()
            .map(|&k| worst(k))
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        assert!(errs[4] < 1e-6);
    }

    proptest! {
        #[test]
        fn pythagorean_identities(z in -50.0f64..50.0, k in 0.0f64..1.0) {
            let j = jacobi(z, m(k));
            prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-10);
            prop_assert!((j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs() < 1e-10);
        }

        #[test]
        fn cn_has_period_four_k(z in -10.0f64..10.0, k in 0.0f64..0.999) {
            let kk = complete_elliptic_k(m(k)).unwrap();
            prop_assert!((jacobi_cn(z + 4.0 * kk, m(k)) - jacobi_cn(z, m(k))).abs() < 1e-9);
        }

        #[test]
        fn cn_is_even_and_sn_odd(z in 0.0f64..20.0, k in 0.0f64..1.0) {
            let (p, n) = (jacobi(z, m(k)), jacobi(-z, m(k)));
            prop_assert!((p.cn - n.cn).abs() < 1e-12);
            prop_assert!((p.sn + n.sn).abs() < 1e-12);
        }
    }
}
