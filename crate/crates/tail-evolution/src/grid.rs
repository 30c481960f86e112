use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use numerics::fd::d1;
use numerics::quad::PowerRule;

/// Uniform grid in `x` for the radial variable.
///
/// Compactified: `r = s x / (1 - x)` on `[x_min, 1]`, the last node is future null infinity.
/// Otherwise `x = r` on `[r_min, r_max]`.
///
/// Every radial integral `int F dr` is written as `int g(x) (1 - x)^b dx` with `g` smooth up to
/// the last node, and integrated with the fourth-order product rule for that `b`.
#[derive(Debug)]
pub struct RadialGrid {
    pub compact: bool,
    /// `s` in the compact map, 1 otherwise
    pub scale: f64,
    pub h: f64,
    pub x: Vec<f64>,
    /// areal radius (`inf` at the last compact node)
    pub r: Vec<f64>,
    /// `r (1 - x)`, i.e. `s x`, finite everywhere (equal to `r` when not compact)
    pub rs: Vec<f64>,
    /// `1 - x` (1 when not compact)
    pub omega: Vec<f64>,
    /// `dx/dr`
    pub inv_jac: Vec<f64>,
    rules: Mutex<BTreeMap<u64, Arc<Vec<f64>>>>,
    cumulative: PowerRule,
}

impl Clone for RadialGrid {
    fn clone(&self) -> Self {
        let rules = self.rules.lock().map(|m| m.clone()).unwrap_or_default();
        Self {
            compact: self.compact,
            scale: self.scale,
            h: self.h,
            x: self.x.clone(),
            r: self.r.clone(),
            rs: self.rs.clone(),
            omega: self.omega.clone(),
            inv_jac: self.inv_jac.clone(),
            rules: Mutex::new(rules),
            cumulative: self.cumulative.clone(),
        }
    }
}

impl RadialGrid {
    /// `nodes` points from `r_min` to null infinity.
    pub fn compact(r_min: f64, scale: f64, nodes: usize) -> Self {
        let x0 = r_min / (scale + r_min);
        let h = (1.0 - x0) / (nodes - 1) as f64;
        let x: Vec<f64> = (0..nodes).map(|i| if i + 1 == nodes { 1.0 } else { x0 + h * i as f64 }).collect();
        let omega: Vec<f64> = x.iter().map(|x| 1.0 - x).collect();
        let r = x.iter().zip(&omega).map(|(x, w)| if *w == 0.0 { f64::INFINITY } else { scale * x / w }).collect();
        let rs = x.iter().map(|x| scale * x).collect();
        let inv_jac = omega.iter().map(|w| w * w / scale).collect();
        Self {
            compact: true,
            scale,
            h,
            x,
            r,
            rs,
            omega,
            inv_jac,
            rules: Mutex::new(BTreeMap::new()),
            cumulative: PowerRule::new(nodes, h, 0.0, 0.0),
        }
    }

    /// `nodes` points on `[r_min, r_max]` without compactification.
    pub fn uniform(r_min: f64, r_max: f64, nodes: usize) -> Self {
        let h = (r_max - r_min) / (nodes - 1) as f64;
        let r: Vec<f64> = (0..nodes).map(|i| r_min + h * i as f64).collect();
        Self {
            compact: false,
            scale: 1.0,
            h,
            x: r.clone(),
            rs: r.clone(),
            r,
            omega: vec![1.0; nodes],
            inv_jac: vec![1.0; nodes],
            rules: Mutex::new(BTreeMap::new()),
            cumulative: PowerRule::new(nodes, h, 0.0, 0.0),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Smallest radial spacing, at the inner edge.
    pub fn min_dr(&self) -> f64 {
        self.r[1] - self.r[0]
    }

    /// `d/dx` of nodal values.
    pub fn dx(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; f.len()];
        d1(f, self.h, &mut out);
        out
    }

    /// `d/dr` of nodal values; the last compact node gets `0 * f_x`.
    pub fn dr(&self, f: &[f64]) -> Vec<f64> {
        let mut out = self.dx(f);
        out.iter_mut().zip(&self.inv_jac).for_each(|(d, a)| *d *= a);
        out
    }

    /// Running integral `int_{x_0}^{x_i} g dx` (smooth `g`).
    pub fn cumulative(&self, g: &[f64], out: &mut [f64]) {
        self.cumulative.cumulative_into(g, out);
    }

    /// Node weights for `int g (1 - x)^b dx`; `b` is ignored without compactification.
    pub fn weights(&self, b: f64) -> Arc<Vec<f64>> {
        let b = if self.compact { b } else { 0.0 };
        let mut map = self.rules.lock().expect("weight cache poisoned");
        map.entry(b.to_bits())
            .or_insert_with(|| Arc::new(PowerRule::new(self.len(), self.h, 0.0, b).weights()))
            .clone()
    }

    /// `int g (1 - x)^b dx`; NaN when `b <= -1` on a compact grid (divergent at null infinity).
    pub fn integrate(&self, b: f64, g: &[f64]) -> f64 {
        if self.compact && b <= -1.0 {
            return f64::NAN;
        }
        self.weights(b).iter().zip(g).map(|(w, v)| w * v).sum()
    }

    /// `(1 - x)^e`, with `0^e = 0` for `e > 0`.
    pub fn omega_pow(&self, i: usize, e: f64) -> f64 {
        if self.compact {
            self.omega[i].powf(e)
        } else {
            1.0
        }
    }

    /// Four-point Lagrange interpolation of nodal values at radius `r`.
    pub fn interpolate(&self, f: &[f64], r: f64) -> f64 {
        let x = if self.compact {
            if r.is_infinite() {
                1.0
            } else {
                r / (self.scale + r)
            }
        } else {
            r
        };
        let n = self.len();
        let t = (x - self.x[0]) / self.h;
        let s = (t.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let mut acc = 0.0;
        for k in 0..4 {
            let mut l = 1.0;
            for j in 0..4 {
                if j != k {
                    l *= (t - (s + j) as f64) / (k as f64 - j as f64);
                }
            }
            acc += l * f[s + k];
        }
        acc
    }
}
