use numerics::quad::{simpson_weights, GaussLegendre};

use crate::{Result, TailError};

/// Nonnegative kernel supported in `[0, 1]` with unit mass, tabulated on a uniform grid.
#[derive(Debug, Clone)]
pub struct Kernel {
    k: Vec<f64>,
    /// `k~(r) = -int_r^1 k` on the same nodes
    kt: Vec<f64>,
    weights: Vec<f64>,
}

impl Kernel {
    /// Tabulates `k` on `m + 1` nodes; rejects kernels that are negative or not of unit mass.
    pub fn new<F: Fn(f64) -> f64>(k: F, m: usize) -> Result<Self> {
        if m < 8 {
            return Err(TailError::Domain(format!("kernel resolution {m} must be at least 8")));
        }
        let h = 1.0 / m as f64;
        let vals: Vec<f64> = (0..=m).map(|j| k(j as f64 * h)).collect();
        if vals.iter().any(|v| *v < 0.0 || !v.is_finite()) {
            return Err(TailError::Domain("kernel must be finite and nonnegative".into()));
        }
        let gl = GaussLegendre::new(16);
        let mut kt = vec![0.0; m + 1];
        for j in (0..m).rev() {
            let a = j as f64 * h;
            kt[j] = kt[j + 1] - gl.integrate(a, a + h, &k);
        }
        let mass = -kt[0];
        if (mass - 1.0).abs() > 1e-10 {
            return Err(TailError::Domain(format!("kernel mass {mass} is not 1")));
        }
        Ok(Self { k: vals, kt, weights: simpson_weights(m + 1, h) })
    }

    /// `exp(-1/(r(1-r)))`, normalized.
    pub fn standard(m: usize) -> Result<Self> {
        let raw = |r: f64| if r <= 0.0 || r >= 1.0 { 0.0 } else { (-1.0 / (r * (1.0 - r))).exp() };
        let gl = GaussLegendre::new(16);
        let mass: f64 = (0..64).map(|j| gl.integrate(j as f64 / 64.0, (j + 1) as f64 / 64.0, raw)).sum();
        Self::new(move |r| raw(r) / mass, m)
    }

    pub fn resolution(&self) -> usize {
        self.k.len() - 1
    }
}

/// `(S h)(t) = int chi(s) h(s) k(t - s) ds` and `S~` (the same with `k~`), where `chi` vanishes
/// below `-1` and equals one on `[0, inf)`. `h` must be continuous on `[-1, inf)`.
#[derive(Debug, Clone)]
pub struct Smoother {
    pub kernel: Kernel,
}

impl Smoother {
    pub fn new(kernel: Kernel) -> Self {
        Self { kernel }
    }

    /// The cutoff `chi`, smooth on the line.
    pub fn chi(s: f64) -> f64 {
        if s >= 0.0 {
            return 1.0;
        }
        if s <= -1.0 {
            return 0.0;
        }
        let a = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
        let t = s + 1.0;
        a(t) / (a(t) + a(1.0 - t))
    }

    fn apply<H: Fn(f64) -> f64>(&self, table: &[f64], h: &H, t: f64) -> f64 {
        let m = table.len() - 1;
        (0..=m)
            .map(|j| {
                let s = t - j as f64 / m as f64;
                let c = Self::chi(s);
                if c == 0.0 {
                    0.0
                } else {
                    self.kernel.weights[j] * table[j] * c * h(s)
                }
            })
            .sum()
    }

    pub fn s<H: Fn(f64) -> f64>(&self, h: H, t: f64) -> f64 {
        self.apply(&self.kernel.k, &h, t)
    }

    pub fn s_tilde<H: Fn(f64) -> f64>(&self, h: H, t: f64) -> f64 {
        self.apply(&self.kernel.kt, &h, t)
    }

    /// `d/dt (S~ h)(t)` by an eighth-order centered difference with step `dt`.
    pub fn d_s_tilde<H: Fn(f64) -> f64>(&self, h: H, t: f64, dt: f64) -> f64 {
        const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        C.iter()
            .enumerate()
            .map(|(k, c)| {
                let o = (k + 1) as f64 * dt;
                c * (self.s_tilde(&h, t + o) - self.s_tilde(&h, t - o))
            })
            .sum::<f64>()
            / dt
    }
}
