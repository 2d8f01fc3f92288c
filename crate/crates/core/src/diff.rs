//! Central finite differences on uniform grids with Fornberg weights.

/// Weights `c[d][j]` for derivative orders `0..=max_order` at `z` from the
/// nodes `x` (Fornberg's recursion).
pub fn fornberg_weights(z: f64, x: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Symmetric stencil of the given accuracy order for derivative `order` on a
/// unit-spaced grid. Returns `(half_width, weights)`.
pub fn central_stencil(order: usize, accuracy: usize) -> (usize, Vec<f64>) {
    assert!(
        accuracy.is_multiple_of(2) && accuracy > 0,
        "accuracy must be even"
    );
    let half = order.div_ceil(2) - 1 + accuracy / 2;
    let nodes: Vec<f64> = (-(half as isize)..=half as isize)
        .map(|j| j as f64)
        .collect();
    let w = fornberg_weights(0.0, &nodes, order);
    (half, w[order].clone())
}

/// Derivative of uniformly sampled `f` at the interior points where the full
/// stencil fits. Output index `i` corresponds to input index `i + half_width`.
pub fn central_derivative(f: &[f64], h: f64, order: usize, accuracy: usize) -> Vec<f64> {
    let (half, w) = central_stencil(order, accuracy);
    if f.len() <= 2 * half {
        return Vec::new();
    }
    let scale = h.powi(order as i32);
    (half..f.len() - half)
        .map(|i| {
            w.iter()
                .enumerate()
                .map(|(j, wj)| wj * f[i + j - half])
                .sum::<f64>()
                / scale
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_stencils_are_textbook() {
        let (h1, w1) = central_stencil(1, 2);
        assert_eq!(h1, 1);
        assert!((w1[0] + 0.5).abs() < 1e-15 && w1[1].abs() < 1e-15 && (w1[2] - 0.5).abs() < 1e-15);
        let (_, w2) = central_stencil(2, 2);
        assert!((w2[0] - 1.0).abs() < 1e-15 && (w2[1] + 2.0).abs() < 1e-15);
        let (h4, w4) = central_stencil(4, 2);
        assert_eq!(h4, 2);
        let expect = [1.0, -4.0, 6.0, -4.0, 1.0];
        for (a, b) in w4.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn eighth_order_stencils_are_exact_on_polynomials() {
        for order in 1..=4 {
            let (half, w) = central_stencil(order, 8);
            for deg in 0..(order + 8) {
                let got: f64 = w
                    .iter()
                    .enumerate()
                    .map(|(j, wj)| wj * ((j as f64) - half as f64 + 0.3).powi(deg as i32))
                    .sum();
                // d^order/dx^order x^deg at 0.3
                let exact = if deg < order {
                    0.0
                } else {
                    let falling: f64 = (0..order).map(|i| (deg - i) as f64).product();
                    falling * 0.3_f64.powi((deg - order) as i32)
                };
                let scale: f64 = w
                    .iter()
                    .enumerate()
                    .map(|(j, wj)| (wj * ((j as f64) - half as f64 + 0.3).powi(deg as i32)).abs())
                    .sum();
                assert!(
                    (got - exact).abs() < 1e-12 * scale.max(1.0),
                    "order {order} deg {deg}"
                );
            }
        }
    }

    #[test]
    fn eighth_order_convergence_on_sine() {
        let err = |n: usize| {
            let h = 2.0 / n as f64;
            let f: Vec<f64> = (0..=n).map(|i| (8.0 * i as f64 * h).sin()).collect();
            let d = central_derivative(&f, h, 2, 8);
            let (half, _) = central_stencil(2, 8);
            d.iter()
                .enumerate()
                .map(|(i, v)| (v + 64.0 * (8.0 * (i + half) as f64 * h).sin()).abs())
                .fold(0.0, f64::max)
        };
        let order = (err(40) / err(80)).log2();
        assert!((order - 8.0).abs() < 0.5, "fitted order {order}");
    }
}
