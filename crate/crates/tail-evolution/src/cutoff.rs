/// Radial cutoff `chi` used by the energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// zero below `r`, one above `2r`, quintic smoothstep in between
    Quintic { r: f64 },
    /// identically one
    One,
}

impl Cutoff {
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            Cutoff::One => 1.0,
            Cutoff::Quintic { r: big } => {
                let t = ((r - big) / big).clamp(0.0, 1.0);
                t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
            }
        }
    }

    pub fn d1(&self, r: f64) -> f64 {
        match *self {
            Cutoff::One => 0.0,
            Cutoff::Quintic { r: big } => {
                let t = (r - big) / big;
                if !(0.0..=1.0).contains(&t) {
                    return 0.0;
                }
                30.0 * t * t * (1.0 - t) * (1.0 - t) / big
            }
        }
    }

    pub fn d2(&self, r: f64) -> f64 {
        match *self {
            Cutoff::One => 0.0,
            Cutoff::Quintic { r: big } => {
                let t = (r - big) / big;
                if !(0.0..=1.0).contains(&t) {
                    return 0.0;
                }
                60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (big * big)
            }
        }
    }
}
