//! Closed-form time integrals of products of sinusoids.

/// `x(t) = c·cos(ωt) + s·sin(ωt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub c: f64,
    pub s: f64,
    pub freq: f64,
}

impl Oscillator {
    /// Modal amplitude `a cos ωt + (b/ω) sin ωt`.
    pub fn amplitude(a: f64, b: f64, freq: f64) -> Self {
        Self { c: a, s: b / freq, freq }
    }

    /// Modal velocity `-aω sin ωt + b cos ωt`.
    pub fn velocity(a: f64, b: f64, freq: f64) -> Self {
        Self { c: b, s: -a * freq, freq }
    }

    pub fn at(&self, t: f64) -> f64 {
        let (sn, cs) = (self.freq * t).sin_cos();
        self.c * cs + self.s * sn
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `∫₀ᵀ cos(ct) dt`.
fn int_cos(c: f64, horizon: f64) -> f64 {
    horizon * sinc(c * horizon)
}

/// `∫₀ᵀ sin(ct) dt = 2 sin²(cT/2)/c`.
fn int_sin(c: f64, horizon: f64) -> f64 {
    let half = 0.5 * c * horizon;
    horizon * half.sin() * sinc(half)
}

/// `∫₀ᵀ x(t) y(t) dt`.
pub fn cross_integral(x: &Oscillator, y: &Oscillator, horizon: f64) -> f64 {
    let (a, b) = (x.freq, y.freq);
    let cd = int_cos(a - b, horizon);
    let cs = int_cos(a + b, horizon);
    let cc = 0.5 * (cd + cs);
    let ss = 0.5 * (cd - cs);
    // cos(at) sin(bt) = ½[sin((a+b)t) + sin((b-a)t)]
    let cos_sin = 0.5 * (int_sin(a + b, horizon) + int_sin(b - a, horizon));
    let sin_cos = 0.5 * (int_sin(a + b, horizon) + int_sin(a - b, horizon));
    x.c * y.c * cc + x.c * y.s * cos_sin + x.s * y.c * sin_cos + x.s * y.s * ss
}
