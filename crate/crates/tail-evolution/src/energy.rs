use numerics::quad::simpson_weights;

use crate::config::Source;
use crate::cutoff::Cutoff;
use crate::evolve::{Evolution, ModeState};
use crate::Result;
use crate::TailError;

/// Spatial integrals on one slice for one weight `p`.
///
/// For the conjugated unknown `u` (`u_r = d_r u`, `c = 3/4 + l(l+2)`):
/// `e = int chi r^p u_r^2`, bulk densities `bulk_grad = int chi p/2 r^{p-1} u_r^2`,
/// `bulk_zero = int chi (2-p)/2 c r^{p-3} u^2`, cutoff terms
/// `cut_grad = int chi'/2 r^p u_r^2`, `cut_zero = int chi'/2 c r^{p-2} u^2`, and
/// `src = int chi r^p u_r f~`. These satisfy
/// `e(t2) - e(t1) + int (bulk_grad + bulk_zero + cut_grad - cut_zero + src) = 0` for `p < 2`.
///
/// For `Y = r^{3/2} d_r u` (`L = l(l+2)`): `ey_intro = int chi (r^p Y_r^2 + (3-2p)/4 r^{p-2} Y^2)`,
/// `ey_full = int chi r^p (Y_r^2 + r^{-2} Y^2 + L r^{-4} Y^2)`, `ey_corr = int chi'/2 r^{p-1} Y^2`,
/// `bulk_y = int chi ((p+3)/2 r^{p-1} Y_r^2 + ((3-p)/2 L + p(2-p)/4) r^{p-3} Y^2)`,
/// and cutoff and source terms with
/// `(ey_intro - ey_corr)(t2) - (..)(t1) + int (bulk_y + cut_y_grad + cut_y_zero + src_y) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTerms {
    pub p: f64,
    pub e: f64,
    pub bulk_grad: f64,
    pub bulk_zero: f64,
    pub cut_grad: f64,
    pub cut_zero: f64,
    pub src: f64,
    pub ey_intro: f64,
    pub ey_full: f64,
    pub ey_corr: f64,
    pub bulk_y: f64,
    pub cut_y_grad: f64,
    pub cut_y_zero: f64,
    /// NaN when the weighted source integral diverges at null infinity
    pub src_y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergySnapshot {
    pub tau: f64,
    /// `int r^{-1-alpha} (d_u u)^2 dr`
    pub local: f64,
    pub per_p: Vec<PTerms>,
}

/// All slice integrals for the weights `p_list` with cutoff `chi`.
pub fn energies(evo: &Evolution, state: &ModeState, p_list: &[f64], chi: &Cutoff) -> EnergySnapshot {
    let g = &evo.grid;
    let n = g.len();
    let big_s = g.scale;
    let c = evo.potential_constant();
    let big_l = evo.angular();
    let u = &state.u;
    let d = g.dx(u);
    // Yh = (1-x)^{-1/2} Y is smooth up to null infinity
    let yh: Vec<f64> = (0..n).map(|i| g.rs[i].powf(1.5) * d[i] / big_s).collect();
    let dyh = g.dx(&yh);
    let z: Vec<f64> = (0..n)
        .map(|i| if g.compact { g.omega[i] * dyh[i] - 0.5 * yh[i] } else { dyh[i] })
        .collect();
    let mut v = vec![0.0; n];
    evo.rhs(state.tau, u, &mut v);

    let chi_v: Vec<f64> = g.r.iter().map(|&r| chi.value(r)).collect();
    let chi1: Vec<f64> = g.r.iter().map(|&r| chi.d1(r)).collect();
    let chi2: Vec<f64> = g.r.iter().map(|&r| chi.d2(r)).collect();
    let finite = |i: usize| g.inv_jac[i] > 0.0;

    let src = &evo.config.source;
    let t = src.time_factor(state.tau);
    let decay = src.decay();
    // hat source factors: f~ = T rh (1-x)^{decay}, f_1 = T rh1 (1-x)^{decay - 1/2}
    let src_cut = evo.config.cutoff();
    let (rh, rh1): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|i| match src {
            Source::None => (0.0, 0.0),
            Source::Power { s, .. } if g.compact => {
                let r = g.r[i];
                let sig = g.rs[i];
                let a = src_cut.value(r) * sig.powf(1.5 - s);
                let b = if finite(i) { src_cut.d1(r) * sig.powf(3.0 - s) / g.omega[i] } else { 0.0 }
                    + (3.5 - s) * src_cut.value(r) * sig.powf(2.0 - s);
                (a, b)
            }
            _ if !finite(i) => (0.0, 0.0),
            _ => (src.radial(g.r[i], &src_cut), src.radial_y(g.r[i], &src_cut)),
        })
        .collect();
    let power_compact = matches!(src, Source::Power { .. }) && g.compact;

    let local_b = evo.config.local_alpha - 1.0;
    let local_g: Vec<f64> =
        (0..n).map(|i| big_s * g.rs[i].powf(-1.0 - evo.config.local_alpha) * v[i] * v[i]).collect();
    let local = g.integrate(local_b, &local_g);

    let mut per_p = Vec::with_capacity(p_list.len());
    let mut buf = vec![vec![0.0; n]; 13];
    for &p in p_list {
        for i in 0..n {
            let sig = g.rs[i];
            let (ch, c1, c2) = (chi_v[i], chi1[i], chi2[i]);
            let (di, yi, zi, ui) = (d[i], yh[i], z[i], u[i]);
            buf[0][i] = ch * sig.powf(p) * di * di / big_s;
            buf[1][i] = 0.5 * p * ch * sig.powf(p - 1.0) * di * di / big_s;
            buf[2][i] = 0.5 * (2.0 - p) * c * ch * big_s * sig.powf(p - 3.0) * ui * ui;
            buf[5][i] = ch * (sig.powf(p) * zi * zi / big_s + 0.25 * (3.0 - 2.0 * p) * big_s * sig.powf(p - 2.0) * yi * yi);
            buf[6][i] = ch
                * (sig.powf(p) * zi * zi / big_s
                    + big_s * sig.powf(p - 2.0) * yi * yi
                    + big_l * big_s * sig.powf(p - 4.0) * yi * yi * g.omega[i] * g.omega[i]);
            buf[8][i] = ch
                * (0.5 * (p + 3.0) * sig.powf(p - 1.0) * zi * zi / big_s
                    + (0.5 * (3.0 - p) * big_l + 0.25 * p * (2.0 - p)) * big_s * sig.powf(p - 3.0) * yi * yi);
            // compactly supported cutoff terms, in plain radial variables
            if finite(i) && (c1 != 0.0 || c2 != 0.0) {
                let r = g.r[i];
                let jac = 1.0 / g.inv_jac[i];
                let ur = di * g.inv_jac[i];
                let y = g.omega[i].sqrt() * yi;
                let yr = g.omega[i].powf(1.5) * zi / big_s;
                buf[3][i] = 0.5 * c1 * r.powf(p) * ur * ur * jac;
                buf[4][i] = 0.5 * c1 * c * r.powf(p - 2.0) * ui * ui * jac;
                buf[7][i] = 0.5 * c1 * r.powf(p - 1.0) * y * y * jac;
                buf[9][i] = 0.5 * c1 * r.powf(p) * yr * yr * jac;
                buf[10][i] = (-0.5 * big_l * c1 * r.powf(p - 2.0)
                    - 0.25 * c2 * r.powf(p - 1.0)
                    - 0.5 * (p - 1.0) * c1 * r.powf(p - 2.0)
                    - 0.25 * c1 * r.powf(p - 2.0))
                    * y
                    * y
                    * jac;
            } else {
                for k in [3, 4, 7, 9, 10] {
                    buf[k][i] = 0.0;
                }
            }
            // sources
            if power_compact || !g.compact {
                buf[11][i] = ch * sig.powf(p) * di * t * rh[i];
                buf[12][i] = ch * (sig.powf(p) * zi + 0.5 * big_s * sig.powf(p - 1.0) * yi) * t * rh1[i];
            } else if finite(i) {
                buf[11][i] = ch * sig.powf(p) * di * t * rh[i] * g.omega[i].powf(-p);
                buf[12][i] = ch
                    * (sig.powf(p) * zi + 0.5 * big_s * sig.powf(p - 1.0) * yi)
                    * g.omega[i].powf(-p - 0.5)
                    * t
                    * rh1[i];
            } else {
                buf[11][i] = 0.0;
                buf[12][i] = 0.0;
            }
        }
        let (b_src, b_srcy) = if power_compact { (decay - p, decay - p - 1.0) } else { (0.0, 0.0) };
        let src_val = if src.is_none() { 0.0 } else { g.integrate(b_src, &buf[11]) };
        let src_y = if src.is_none() {
            0.0
        } else if b_srcy > -1.0 {
            g.integrate(b_srcy, &buf[12])
        } else {
            f64::NAN
        };
        per_p.push(PTerms {
            p,
            e: g.integrate(2.0 - p, &buf[0]),
            bulk_grad: g.integrate(3.0 - p, &buf[1]),
            bulk_zero: g.integrate(1.0 - p, &buf[2]),
            cut_grad: g.integrate(0.0, &buf[3]),
            cut_zero: g.integrate(0.0, &buf[4]),
            src: src_val,
            ey_intro: g.integrate(1.0 - p, &buf[5]),
            ey_full: g.integrate(1.0 - p, &buf[6]),
            ey_corr: g.integrate(0.0, &buf[7]),
            bulk_y: g.integrate(2.0 - p, &buf[8]),
            cut_y_grad: g.integrate(0.0, &buf[9]),
            cut_y_zero: g.integrate(0.0, &buf[10]),
            src_y,
        });
    }
    EnergySnapshot { tau: state.tau, local, per_p }
}

/// Energy snapshots along a run, equally spaced in time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyLedger {
    pub p_list: Vec<f64>,
    pub snapshots: Vec<EnergySnapshot>,
}

/// Both inequalities of the `r^p` hierarchy on `[tau1, tau2]` for one weight.
///
/// `lhs = e(t2) + int (bulk_grad + bulk_zero)`, `rhs = e(t1) + |int src| + int cut_zero`;
/// the `Y` versions use `ey_intro`, `bulk_y`, the source `src_y` and the cutoff errors
/// `ey_corr(t2) + int |cut_y_zero|`. `residual` is the defect of the exact identity relative to the
/// largest term in it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerWindow {
    pub p: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub residual: f64,
    pub bulk_grad: f64,
    pub bulk_zero: f64,
    pub lhs_y: f64,
    pub rhs_y: f64,
    pub ratio_y: f64,
    pub residual_y: f64,
}

impl EnergyLedger {
    pub fn new(p_list: Vec<f64>) -> Self {
        Self { p_list, snapshots: Vec::new() }
    }

    pub fn push(&mut self, s: EnergySnapshot) {
        self.snapshots.push(s);
    }

    pub fn taus(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.tau).collect()
    }

    /// Snapshot index closest to `tau`.
    pub fn index_of(&self, tau: f64) -> usize {
        self.snapshots
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.tau - tau).abs().total_cmp(&(b.1.tau - tau).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    fn time_integral<F: Fn(&PTerms) -> f64>(&self, k: usize, i1: usize, i2: usize, f: F) -> f64 {
        let m = i2 - i1 + 1;
        if m < 2 {
            return 0.0;
        }
        let h = self.snapshots[i1 + 1].tau - self.snapshots[i1].tau;
        let w = if m >= 3 { simpson_weights(m, h) } else { vec![0.5 * h; 2] };
        (0..m).map(|j| w[j] * f(&self.snapshots[i1 + j].per_p[k])).sum()
    }

    /// The hierarchy window between snapshots `i1 < i2` for the weight with index `k`.
    pub fn window(&self, k: usize, i1: usize, i2: usize) -> Result<LedgerWindow> {
        if i2 <= i1 || i2 >= self.snapshots.len() || k >= self.p_list.len() {
            return Err(TailError::Domain(format!("bad ledger window ({k}, {i1}, {i2})")));
        }
        let a = &self.snapshots[i1].per_p[k];
        let b = &self.snapshots[i2].per_p[k];
        let bulk_grad = self.time_integral(k, i1, i2, |t| t.bulk_grad);
        let bulk_zero = self.time_integral(k, i1, i2, |t| t.bulk_zero);
        let cut_grad = self.time_integral(k, i1, i2, |t| t.cut_grad);
        let cut_zero = self.time_integral(k, i1, i2, |t| t.cut_zero);
        let src = self.time_integral(k, i1, i2, |t| t.src);
        let lhs = b.e + bulk_grad + bulk_zero;
        let rhs = a.e + src.abs() + cut_zero;
        let defect = b.e - a.e + bulk_grad + bulk_zero + cut_grad - cut_zero + src;
        let scale = [a.e, b.e, bulk_grad, bulk_zero, cut_grad, cut_zero, src.abs()].iter().fold(0.0f64, |m, v| m.max(*v));

        let bulk_y = self.time_integral(k, i1, i2, |t| t.bulk_y);
        let cyg = self.time_integral(k, i1, i2, |t| t.cut_y_grad);
        let cyz = self.time_integral(k, i1, i2, |t| t.cut_y_zero);
        let cyz_abs = self.time_integral(k, i1, i2, |t| t.cut_y_zero.abs());
        let src_y = self.time_integral(k, i1, i2, |t| t.src_y);
        let lhs_y = b.ey_intro + bulk_y;
        let rhs_y = a.ey_intro + src_y.abs() + b.ey_corr + cyz_abs;
        let defect_y = (b.ey_intro - b.ey_corr) - (a.ey_intro - a.ey_corr) + bulk_y + cyg + cyz + src_y;
        let scale_y = [a.ey_intro, b.ey_intro, bulk_y, cyg, cyz_abs, src_y.abs()].iter().fold(0.0f64, |m, v| m.max(*v));
        Ok(LedgerWindow {
            p: self.p_list[k],
            tau1: self.snapshots[i1].tau,
            tau2: self.snapshots[i2].tau,
            lhs,
            rhs,
            ratio: lhs / rhs,
            residual: defect.abs() / scale,
            bulk_grad,
            bulk_zero,
            lhs_y,
            rhs_y,
            ratio_y: lhs_y / rhs_y,
            residual_y: defect_y.abs() / scale_y,
        })
    }

    /// `[0, T]` and the dyadic windows `[2^j, 2^{j+1}]` inside the run, as snapshot indices.
    pub fn standard_windows(&self) -> Vec<(usize, usize)> {
        let n = self.snapshots.len();
        if n < 3 {
            return Vec::new();
        }
        let t_end = self.snapshots[n - 1].tau;
        let mut out = vec![(0, n - 1)];
        let mut a = 1.0;
        while 2.0 * a <= t_end {
            let (i1, i2) = (self.index_of(a), self.index_of(2.0 * a));
            if i2 > i1 + 1 {
                out.push((i1, i2));
            }
            a *= 2.0;
        }
        out
    }
}

/// Frozen constant of the hierarchy, calibrated as the largest ratio (plain or `Y`) over all
/// standard windows of the default free run (`l = 0`, 801 nodes, `tau_max = 200`), which was 1.0041.
pub const HIERARCHY_CONSTANT: f64 = 1.005;

/// Upper end of the weights for which the `Y` hierarchy is asserted.
pub const Y_RANGE: f64 = 1.5;

/// Ratios over every standard window against a frozen constant.
///
/// The plain ratios are asserted for `0 < p < 2`, the `Y` ratios only for `0 < p < 3/2`;
/// `max_ratio_y` covers the asserted weights and `max_ratio_y_reported` all of them.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyReport {
    pub windows: Vec<LedgerWindow>,
    pub max_ratio: f64,
    pub max_ratio_y: f64,
    pub max_ratio_y_reported: f64,
    pub max_residual: f64,
    pub max_residual_y: f64,
    /// every ratio (plain and `Y`) at most `constant * (1 + margin)`
    pub pass: bool,
}

pub fn hierarchy_check(ledger: &EnergyLedger, constant: f64, margin: f64) -> Result<HierarchyReport> {
    if let Some(p) = ledger.p_list.iter().find(|p| !(**p > 0.0 && **p < 2.0)) {
        return Err(TailError::Domain(format!("weight p = {p} outside the admissible range (0, 2)")));
    }
    let mut windows = Vec::new();
    for k in 0..ledger.p_list.len() {
        for (i1, i2) in ledger.standard_windows() {
            windows.push(ledger.window(k, i1, i2)?);
        }
    }
    if windows.is_empty() {
        return Err(TailError::Domain("ledger too short for any window".into()));
    }
    let fold = |f: &dyn Fn(&LedgerWindow) -> f64| windows.iter().map(f).filter(|v| v.is_finite()).fold(0.0f64, f64::max);
    let max_ratio = fold(&|w| w.ratio);
    let max_ratio_y = fold(&|w| if w.p < Y_RANGE { w.ratio_y } else { 0.0 });
    let max_ratio_y_reported = fold(&|w| w.ratio_y);
    let max_residual = fold(&|w| w.residual);
    let max_residual_y = fold(&|w| if w.p < Y_RANGE { w.residual_y } else { 0.0 });
    let bound = constant * (1.0 + margin);
    let pass = max_ratio <= bound && max_ratio_y <= bound;
    Ok(HierarchyReport { windows, max_ratio, max_ratio_y, max_ratio_y_reported, max_residual, max_residual_y, pass })
}

/// `(int r^p Y_r^2 + (3-2p)/4 int r^{p-2} Y^2) / int r^p Y_r^2` for samples on a uniform radial grid
/// (Simpson weights, fourth-order derivatives).
pub fn intro_form_ratio(r: &[f64], y: &[f64], p: f64) -> f64 {
    let h = r[1] - r[0];
    let mut dy = vec![0.0; y.len()];
    numerics::fd::d1(y, h, &mut dy);
    let w = simpson_weights(r.len(), h);
    let mut top = 0.0;
    let mut bottom = 0.0;
    for i in 0..r.len() {
        let g = r[i].powf(p) * dy[i] * dy[i];
        bottom += w[i] * g;
        top += w[i] * (g + 0.25 * (3.0 - 2.0 * p) * r[i].powf(p - 2.0) * y[i] * y[i]);
    }
    top / bottom
}
