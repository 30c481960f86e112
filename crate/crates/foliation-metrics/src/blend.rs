use numerics::quad::GaussLegendre;

/// Even function `mu` with `mu(x) = |x|` for `|x| >= 1`, `mu >= |x|` and `|mu'| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Blend {
    /// `3/8 + 3x^2/4 - x^4/8` inside the band, `C^2` at `|x| = 1`
    #[default]
    Quartic,
    /// `|x|` convolved with the standard bump supported in `[-1, 1]`, `C^infinity`
    Mollified,
}

fn bump(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - y * y)).exp()
    }
}

/// `(int_a^1 bump, int_a^1 (y - a) bump)` for `0 <= a < 1`, each divided by the total mass.
fn bump_tail(a: f64) -> (f64, f64) {
    let gl = GaussLegendre::new(48);
    let total = gl.integrate(-1.0, 1.0, bump);
    let f = gl.integrate(a, 1.0, bump) / total;
    let g = gl.integrate(a, 1.0, |y| (y - a) * bump(y)) / total;
    (f, g)
}

impl Blend {
    /// `(mu(x), mu'(x))`
    pub fn eval(self, x: f64) -> (f64, f64) {
        if x.abs() >= 1.0 {
            return (x.abs(), x.signum());
        }
        match self {
            Blend::Quartic => {
                let x2 = x * x;
                (0.375 + 0.75 * x2 - 0.125 * x2 * x2, 1.5 * x - 0.5 * x2 * x)
            }
            Blend::Mollified => {
                // mu(a) = a + 2 int_a^1 (y - a) bump / mass, at a = |x|
                let a = x.abs();
                let (f, g) = bump_tail(a);
                (a + 2.0 * g, x.signum() * (1.0 - 2.0 * f))
            }
        }
    }
}

/// `(t1 + t2)/2 + (delta1/2) mu((t1 - t2)/delta1)`, equal to `max(t1, t2)` once `|t1 - t2| >= delta1`.
pub fn smoothed_max(t1: f64, t2: f64, delta1: f64, blend: Blend) -> f64 {
    let (mu, _) = blend.eval((t1 - t2) / delta1);
    if (t1 - t2).abs() >= delta1 {
        return t1.max(t2);
    }
    0.5 * (t1 + t2) + 0.5 * delta1 * mu
}

/// Partial derivatives of [`smoothed_max`] in `t1` and `t2`.
pub fn smoothed_max_grad(t1: f64, t2: f64, delta1: f64, blend: Blend) -> (f64, f64) {
    let (_, dmu) = blend.eval((t1 - t2) / delta1);
    (0.5 + 0.5 * dmu, 0.5 - 0.5 * dmu)
}
