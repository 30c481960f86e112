//! Quadrature rules: Gauss-Legendre, adaptive Gauss-Kronrod, tanh-sinh,
//! composite Simpson and product rules for endpoint power singularities.

use std::f64::consts::PI;

use crate::{NumError, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(c + hw * x))
            .sum::<f64>()
            * hw
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let c = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| (c + hw * x, w * hw)).collect()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = hw * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * hw, ((k - g) * hw).abs())
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Globally adaptive Gauss-Kronrod (7, 15) integration on a finite interval.
pub fn adaptive_gk<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    let (v, e) = gk15(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    let mut evals = 15;
    for _ in 0..4000 {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= tol.max(tol * total.abs()) {
            return Ok(Quadrature { value: total, error: err, evaluations: evals });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        evals += 30;
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
    let total: f64 = pieces.iter().map(|p| p.2).sum();
    let err: f64 = pieces.iter().map(|p| p.3).sum();
    Err(NumError::QuadratureTolerance { tol, estimate: total, error: err })
}

/// Tanh-sinh (double exponential) quadrature on a finite interval.
///
/// The integrand is never evaluated at the endpoints; abscissae near the ends
/// are formed from their complements so endpoint singularities are tolerated.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let mut evals = 0usize;
    let mut eval_pair = |t: f64, f: &mut F| -> f64 {
        let u = 0.5 * PI * t.sinh();
        let w = 0.5 * PI * t.cosh() / (u.cosh() * u.cosh());
        // 1 - tanh(u) without cancellation
        let comp = 2.0 / ((2.0 * u).exp() + 1.0);
        let xr = b - hw * comp;
        let xl = a + hw * comp;
        let mut s = 0.0;
        if xr < b && xr > a {
            s += f(xr);
        }
        if xl > a && xl < b {
            s += f(xl);
        }
        evals += 2;
        w * s
    };
    let tmax = 6.5;
    let mut h = 1.0;
    let mut sum = 0.5 * PI * f(c);
    let mut t = h;
    while t <= tmax {
        sum += eval_pair(t, &mut f);
        t += h;
    }
    let mut prev = sum * h * hw;
    for _ in 0..12 {
        h *= 0.5;
        let mut t = h;
        while t <= tmax {
            sum += eval_pair(t, &mut f);
            t += 2.0 * h;
        }
        let cur = sum * h * hw;
        let err = (cur - prev).abs();
        if err <= tol.max(tol * cur.abs()) {
            return Ok(Quadrature { value: cur, error: err, evaluations: evals });
        }
        prev = cur;
    }
    Err(NumError::QuadratureTolerance { tol, estimate: prev, error: f64::NAN })
}

/// Composite Simpson weights on `n` equally spaced nodes with spacing `h`.
/// An even node count closes with the 3/8 rule on the last four nodes.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 4 || n == 3, "need at least three nodes");
    let mut w = vec![0.0; n];
    let simpson_end = if n % 2 == 1 { n - 1 } else { n - 4 };
    let mut i = 0;
    while i < simpson_end {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
        i += 2;
    }
    if n % 2 == 0 {
        let k = n - 4;
        w[k] += 3.0 * h / 8.0;
        w[k + 1] += 9.0 * h / 8.0;
        w[k + 2] += 9.0 * h / 8.0;
        w[k + 3] += 3.0 * h / 8.0;
    }
    w
}

/// Product-integration rule on a uniform grid for integrands of the form
/// `(x - x_0)^{a} (x_{N-1} - x)^{b} g(x)` with smooth `g`.
///
/// Each cell is integrated exactly against the cubic interpolant of `g`
/// (times the regular part of the weight) through four neighbouring nodes,
/// which gives fourth-order accuracy even when `a` or `b` is negative.
#[derive(Debug, Clone)]
pub struct PowerRule {
    n: usize,
    cells: Vec<(usize, [f64; 4])>,
}

fn lagrange_monomials(nodes: [f64; 4]) -> [[f64; 4]; 4] {
    // coefficients c[k][m] of the k-th Lagrange basis polynomial in powers T^m
    let mut out = [[0.0; 4]; 4];
    for k in 0..4 {
        let mut poly = [1.0, 0.0, 0.0, 0.0];
        let mut denom = 1.0;
        let mut deg = 0;
        for j in 0..4 {
            if j == k {
                continue;
            }
            // multiply by (T - nodes[j])
            let mut next = [0.0; 4];
            for m in 0..=deg {
                next[m + 1] += poly[m];
                next[m] -= nodes[j] * poly[m];
            }
            poly = next;
            deg += 1;
            denom *= nodes[k] - nodes[j];
        }
        for m in 0..4 {
            out[k][m] = poly[m] / denom;
        }
    }
    out
}

/// `∫_lo^hi T^alpha L_k(T) dT` for the Lagrange basis on nodes `s..s+3`.
fn cell_moments(alpha: f64, s: usize, lo: f64, hi: f64, gl: &GaussLegendre) -> [f64; 4] {
    let nodes = [s as f64, s as f64 + 1.0, s as f64 + 2.0, s as f64 + 3.0];
    let mut out = [0.0; 4];
    if s <= 5 {
        let coef = lagrange_monomials(nodes);
        for k in 0..4 {
            let mut acc = 0.0;
            for m in 0..4 {
                let e = alpha + m as f64 + 1.0;
                acc += coef[k][m] * (hi.powf(e) - lo.powf(e)) / e;
            }
            out[k] = acc;
        }
    } else {
        for (t, w) in gl.mapped(lo, hi) {
            let wt = w * t.powf(alpha);
            for k in 0..4 {
                let mut l = 1.0;
                for j in 0..4 {
                    if j != k {
                        l *= (t - nodes[j]) / (nodes[k] - nodes[j]);
                    }
                }
                out[k] += wt * l;
            }
        }
    }
    out
}

impl PowerRule {
    /// `n` nodes with spacing `h`; `a`, `b` are the endpoint exponents (> -1).
    pub fn new(n: usize, h: f64, a: f64, b: f64) -> Self {
        assert!(n >= 8, "product rule needs at least eight nodes");
        assert!(a > -1.0 && b > -1.0, "endpoint exponents must exceed -1");
        let gl = GaussLegendre::new(10);
        let last = (n - 1) as f64;
        let mut cells = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let s = i.saturating_sub(1).min(n - 4);
            let sm = n - 1 - (s + 3);
            let mut c = [0.0; 4];
            if a != 0.0 && s <= 5 && (s <= sm || b == 0.0) {
                // T = (x - x0)/h; the right factor is smooth here and folded into the nodes
                let m = cell_moments(a, s, i as f64, i as f64 + 1.0, &gl);
                for k in 0..4 {
                    let node = (s + k) as f64;
                    c[k] = m[k] * h.powf(1.0 + a) * (h * (last - node)).powf(b);
                }
            } else if b != 0.0 && sm <= 5 {
                // T' = (x_{N-1} - x)/h on mirrored nodes; node s+k sits at T' = sm + 3 - k
                let lo = last - (i as f64 + 1.0);
                let hi = last - i as f64;
                let m = cell_moments(b, sm, lo, hi, &gl);
                for k in 0..4 {
                    let node = (s + k) as f64;
                    c[k] = m[3 - k] * h.powf(1.0 + b) * (h * node).powf(a);
                }
            } else {
                for (t, w) in gl.mapped(i as f64, i as f64 + 1.0) {
                    let wt = w * h * (h * t).powf(a) * (h * (last - t)).powf(b);
                    for k in 0..4 {
                        let mut l = 1.0;
                        for j in 0..4 {
                            if j != k {
                                l *= (t - (s + j) as f64) / (k as f64 - j as f64);
                            }
                        }
                        c[k] += wt * l;
                    }
                }
            }
            cells.push((s, c));
        }
        Self { n, cells }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Running integral from the first node to every node.
    pub fn cumulative(&self, g: &[f64]) -> Vec<f64> {
        assert_eq!(g.len(), self.n);
        let mut out = vec![0.0; self.n];
        for (i, (s, c)) in self.cells.iter().enumerate() {
            let cell = c[0] * g[*s] + c[1] * g[s + 1] + c[2] * g[s + 2] + c[3] * g[s + 3];
            out[i + 1] = out[i] + cell;
        }
        out
    }

    /// Cumulative integral into a caller-owned buffer.
    pub fn cumulative_into(&self, g: &[f64], out: &mut [f64]) {
        out[0] = 0.0;
        for (i, (s, c)) in self.cells.iter().enumerate() {
            let cell = c[0] * g[*s] + c[1] * g[s + 1] + c[2] * g[s + 2] + c[3] * g[s + 3];
            out[i + 1] = out[i] + cell;
        }
    }

    /// Integral over the whole grid.
    pub fn total(&self, g: &[f64]) -> f64 {
        assert_eq!(g.len(), self.n);
        self.cells
            .iter()
            .map(|(s, c)| c[0] * g[*s] + c[1] * g[s + 1] + c[2] * g[s + 2] + c[3] * g[s + 3])
            .sum()
    }

    /// Node weights for [`PowerRule::total`].
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n];
        for (s, c) in &self.cells {
            for k in 0..4 {
                w[s + k] += c[k];
            }
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let gl = GaussLegendre::new(6);
        let v = gl.integrate(0.0, 2.0, |x| x.powi(11));
        assert!((v - 2f64.powi(12) / 12.0).abs() < 1e-10);
        assert!((gl.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn lagrange_basis_reproduces_nodes() {
        let c = lagrange_monomials([2.0, 3.0, 4.0, 5.0]);
        for k in 0..4 {
            for j in 0..4 {
                let t = 2.0 + j as f64;
                let v: f64 = (0..4).map(|m| c[k][m] * t.powi(m as i32)).sum();
                assert!((v - if j == k { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }
}
