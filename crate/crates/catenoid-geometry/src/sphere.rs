//! Hyperspherical coordinates on `S^{n-1}` and a product quadrature rule.
//!
//! Angles `(t_1, ..., t_{n-1})` map to
//! `Theta = (cos t_1, sin t_1 cos t_2, ..., sin t_1 ... sin t_{n-2} cos t_{n-1}, sin t_1 ... sin t_{n-1})`.

use std::f64::consts::PI;

use numerics::quad::GaussLegendre;

/// The unit vector `Theta(angles)` in `R^{angles.len() + 1}`.
pub fn theta(angles: &[f64]) -> Vec<f64> {
    let d = angles.len();
    let mut out = Vec::with_capacity(d + 1);
    let mut prod = 1.0;
    for &a in angles {
        out.push(prod * a.cos());
        prod *= a.sin();
    }
    out.push(prod);
    out
}

/// Partial derivatives `d Theta / d angle_a`, one vector per angle.
pub fn theta_derivatives(angles: &[f64]) -> Vec<Vec<f64>> {
    let d = angles.len();
    (0..d)
        .map(|a| {
            (0..=d)
                .map(|k| {
                    if k < a {
                        return 0.0;
                    }
                    // Theta_k = prod_{j<k} sin t_j * (cos t_k if k < d)
                    let mut p = 1.0;
                    for (j, t) in angles.iter().enumerate().take(k) {
                        p *= if j == a { t.cos() } else { t.sin() };
                    }
                    if k < d {
                        p *= if k == a { -angles[k].sin() } else { angles[k].cos() };
                    }
                    p
                })
                .collect()
        })
        .collect()
}

/// Diagonal of the round metric in these angles.
pub fn round_metric(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    let mut prod = 1.0;
    for &a in angles {
        out.push(prod);
        prod *= a.sin() * a.sin();
    }
    out
}

/// Volume density `sqrt(det g)` of the round metric.
pub fn volume_density(angles: &[f64]) -> f64 {
    let d = angles.len();
    angles.iter().enumerate().map(|(a, t)| t.sin().powi((d - 1 - a) as i32)).product()
}

/// Total area of `S^{d}` for `d = n - 1`.
pub fn sphere_area(n: usize) -> f64 {
    // 2 pi^{n/2} / Gamma(n/2), by the recursion A_{n} = 2 pi A_{n-2} / (n - 2)
    let mut a = if n % 2 == 0 { 2.0 * PI } else { 2.0 };
    let mut k = if n % 2 == 0 { 2 } else { 1 };
    while k < n {
        a *= 2.0 * PI / k as f64;
        k += 2;
    }
    a
}

/// Product Gauss rule on `S^{n-1}`: Gauss-Legendre in each polar angle and
/// the trapezoid rule in the azimuth.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub points: Vec<(Vec<f64>, f64)>,
}

impl SphereRule {
    pub fn new(n: usize, m: usize) -> Self {
        assert!(n >= 2 && m >= 2);
        let d = n - 1;
        let gl = GaussLegendre::new(m);
        let polar = gl.mapped(0.0, PI);
        let naz = 2 * m;
        let az: Vec<(f64, f64)> =
            (0..naz).map(|k| (2.0 * PI * (k as f64 + 0.5) / naz as f64, 2.0 * PI / naz as f64)).collect();
        let mut points = vec![(Vec::new(), 1.0)];
        for a in 0..d {
            let last = a + 1 == d;
            let mut next = Vec::with_capacity(points.len() * if last { naz } else { m });
            for (ang, w) in &points {
                if last {
                    for &(t, wt) in &az {
                        let mut v: Vec<f64> = ang.clone();
                        v.push(t);
                        next.push((v, w * wt));
                    }
                } else {
                    for &(t, wt) in &polar {
                        let mut v: Vec<f64> = ang.clone();
                        v.push(t);
                        next.push((v, w * wt * t.sin().powi((d - 1 - a) as i32)));
                    }
                }
            }
            points = next;
        }
        Self { points }
    }

    pub fn integrate<F: FnMut(&[f64], &[f64]) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().map(|(ang, w)| w * f(ang, &theta(ang))).sum()
    }
}
