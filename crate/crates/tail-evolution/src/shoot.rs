use crate::{japanese, Result, TailError};

/// Outcome of the shooting argument for `b' = mu b + g(tau)` in the band `|b| <= lambda(tau)`,
/// `lambda(tau) = lambda0 <tau>^{-9/4 + kappa}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootResult {
    /// selected initial value
    pub b0: f64,
    /// width of the first bisection bracket around `b0`
    pub bracket_width: f64,
    pub iterations: usize,
    /// `(tau, b)` of the trapped solution up to the final time
    pub trajectory: Vec<(f64, f64)>,
    /// number of re-bisections along the way (each one started inside the current enclosure)
    pub restarts: usize,
    /// `(b(0) - b0, exit time, exit sign)` for perturbed initial values
    pub off_selection: Vec<(f64, f64, i8)>,
    /// samples with `lambda/2 < |b| < lambda` inspected, and those where `d(b^2)/dtau < mu b^2`
    pub audit_checked: usize,
    pub audit_violations: usize,
}

struct Flight {
    path: Vec<f64>,
    /// `(step index, sign)` of the first exit from the band
    exit: Option<(usize, i8)>,
}

struct Problem<'a, G: Fn(f64) -> f64> {
    mu: f64,
    g: &'a G,
    lambda0: f64,
    kappa: f64,
    dt: f64,
    steps: usize,
}

impl<G: Fn(f64) -> f64> Problem<'_, G> {
    fn lambda(&self, tau: f64) -> f64 {
        self.lambda0 * japanese(tau).powf(-2.25 + self.kappa)
    }

    fn tau(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    fn f(&self, tau: f64, b: f64) -> f64 {
        self.mu * b + (self.g)(tau)
    }

    /// RK4 from step `k0` with `b(tau_k0) = b`, stopping at the first exit.
    fn fly(&self, k0: usize, b: f64) -> Flight {
        let mut path = vec![b];
        let mut b = b;
        let h = self.dt;
        for k in k0..self.steps {
            let t = self.tau(k);
            let k1 = self.f(t, b);
            let k2 = self.f(t + 0.5 * h, b + 0.5 * h * k1);
            let k3 = self.f(t + 0.5 * h, b + 0.5 * h * k2);
            let k4 = self.f(t + h, b + h * k3);
            b += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            path.push(b);
            if b.abs() > self.lambda(self.tau(k + 1)) {
                return Flight { path, exit: Some((k + 1, if b > 0.0 { 1 } else { -1 })) };
            }
        }
        Flight { path, exit: None }
    }

    /// Sign with which the solution through `b` at step `k0` leaves the band (0 if it never moves).
    fn side(&self, k0: usize, b: f64) -> i8 {
        let f = self.fly(k0, b);
        match f.exit {
            Some((_, s)) => s,
            None => {
                let end = *f.path.last().expect("nonempty");
                if end > 0.0 {
                    1
                } else if end < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }

    /// Bisection to exhaustion of the bracket `[lo, hi]` at step `k0`.
    fn bisect(&self, k0: usize, mut lo: f64, mut hi: f64) -> (f64, f64, usize) {
        let mut it = 0;
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || it >= 200 {
                return (lo, hi, it);
            }
            it += 1;
            match self.side(k0, mid) {
                1 => hi = mid,
                -1 => lo = mid,
                _ => return (mid, mid, it),
            }
        }
    }

    fn audit(&self, k0: usize, path: &[f64], checked: &mut usize, bad: &mut usize) {
        for (j, &b) in path.iter().enumerate() {
            let t = self.tau(k0 + j);
            let lam = self.lambda(t);
            if b.abs() > 0.5 * lam && b.abs() < lam {
                *checked += 1;
                if 2.0 * b * self.f(t, b) < self.mu * b * b {
                    *bad += 1;
                }
            }
        }
    }
}

/// Selects the trapped initial value by bisection on the exit sign.
///
/// A forward solution is only trustworthy while the enclosure given by the two bracket endpoints
/// (solutions depend monotonically on `b(0)`) stays narrow, so once it widens past
/// `1e-8 lambda(tau)` the bisection is repeated inside that enclosure and the trajectory continues.
pub fn shoot<G: Fn(f64) -> f64>(
    mu: f64,
    g: G,
    lambda0: f64,
    kappa: f64,
    t_end: f64,
    dt: f64,
) -> Result<ShootResult> {
    if !(mu > 0.0 && lambda0 > 0.0 && t_end > 0.0 && dt > 0.0 && dt < t_end) {
        return Err(TailError::Domain(format!(
            "need mu, lambda0, t_end, dt positive with dt < t_end (got {mu}, {lambda0}, {t_end}, {dt})"
        )));
    }
    if !(0.0..2.25).contains(&kappa) {
        return Err(TailError::Domain(format!("kappa = {kappa} outside [0, 9/4)")));
    }
    let steps = (t_end / dt).round() as usize;
    let pb = Problem { mu, g: &g, lambda0, kappa, dt, steps };
    let (up, down) = (pb.fly(0, lambda0), pb.fly(0, -lambda0));
    let sign_of = |f: &Flight| f.exit.map(|e| e.1).unwrap_or(0);
    if sign_of(&up) != 1 || sign_of(&down) != -1 {
        return Err(TailError::Bracket(format!(
            "b(0) = +lambda0 gives {}, b(0) = -lambda0 gives {}",
            sign_of(&up),
            sign_of(&down)
        )));
    }
    let mut checked = 0;
    let mut bad = 0;
    pb.audit(0, &up.path, &mut checked, &mut bad);
    pb.audit(0, &down.path, &mut checked, &mut bad);

    let (lo, hi, iterations) = pb.bisect(0, -lambda0, lambda0);
    let b0 = 0.5 * (lo + hi);
    let bracket_width = hi - lo;

    let mut off_selection = Vec::new();
    for k in [10, 20, 30] {
        for sgn in [1.0, -1.0] {
            let db = sgn * lambda0 * 2f64.powi(-k);
            let f = pb.fly(0, b0 + db);
            pb.audit(0, &f.path, &mut checked, &mut bad);
            if let Some((idx, s)) = f.exit {
                off_selection.push((db, pb.tau(idx), s));
            }
        }
    }

    let mut trajectory = Vec::with_capacity(steps + 1);
    let (mut k0, mut lo, mut hi) = (0usize, lo, hi);
    let mut restarts = 0;
    loop {
        let fl = pb.fly(k0, lo);
        let fh = pb.fly(k0, hi);
        let len = fl.path.len().min(fh.path.len());
        let mut last = 0;
        for j in 0..len {
            let lam = pb.lambda(pb.tau(k0 + j));
            if (fh.path[j] - fl.path[j]).abs() > 1e-8 * lam {
                break;
            }
            last = j;
        }
        let done = fl.exit.is_none() && fh.exit.is_none() && last + 1 == len;
        let end = if done { len } else { last.max(1) };
        for j in 0..end {
            let b = 0.5 * (fl.path[j] + fh.path[j]);
            trajectory.push((pb.tau(k0 + j), b));
        }
        let mid: Vec<f64> = (0..end).map(|j| 0.5 * (fl.path[j] + fh.path[j])).collect();
        pb.audit(k0, &mid, &mut checked, &mut bad);
        if done || k0 + end > steps {
            break;
        }
        k0 += end;
        let (a, b) = (fl.path[end], fh.path[end]);
        let (nl, nh, _) = pb.bisect(k0, a.min(b), a.max(b));
        lo = nl;
        hi = nh;
        restarts += 1;
        if restarts > 10_000 {
            return Err(TailError::Numerics(numerics::NumError::MaxIterations(10_000)));
        }
    }
    Ok(ShootResult {
        b0,
        bracket_width,
        iterations,
        trajectory,
        restarts,
        off_selection,
        audit_checked: checked,
        audit_violations: bad,
    })
}
