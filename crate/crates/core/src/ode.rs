//! Fixed-step classical Runge-Kutta integration for first-order systems.

/// Right-hand side `dy/dt = f(t, y)` written into `dydt`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]);
}

impl<F> OdeSystem for (usize, F)
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn dim(&self) -> usize {
        self.0
    }

    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]) {
        (self.1)(t, y, dydt)
    }
}

/// Classical fourth-order Runge-Kutta stepper with reusable scratch space.
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Rk4 {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }

    pub fn step<S: OdeSystem + ?Sized>(&mut self, sys: &S, t: f64, y: &mut [f64], h: f64) {
        let n = y.len();
        sys.rhs(t, y, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = y[i] + 0.5 * h * self.k1[i];
        }
        sys.rhs(t + 0.5 * h, &self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = y[i] + 0.5 * h * self.k2[i];
        }
        sys.rhs(t + 0.5 * h, &self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = y[i] + h * self.k3[i];
        }
        sys.rhs(t + h, &self.tmp, &mut self.k4);
        for i in 0..n {
            y[i] += h / 6.0 * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

/// Integrates from `t0` and records the state at `n_out` equally spaced output
/// times `t0 + j * dt_out`, taking `substeps` RK4 steps between outputs.
/// Returns the outputs row by row (`n_out * dim` values).
pub fn integrate_sampled<S: OdeSystem + ?Sized>(
    sys: &S,
    t0: f64,
    y0: &[f64],
    dt_out: f64,
    n_out: usize,
    substeps: usize,
) -> Vec<f64> {
    let dim = sys.dim();
    let substeps = substeps.max(1);
    let h = dt_out / substeps as f64;
    let mut rk = Rk4::new(dim);
    let mut y = y0.to_vec();
    let mut out = Vec::with_capacity(n_out * dim);
    out.extend_from_slice(&y);
    for j in 1..n_out {
        let t_start = t0 + (j - 1) as f64 * dt_out;
        for s in 0..substeps {
            rk.step(sys, t_start + s as f64 * h, &mut y, h);
        }
        out.extend_from_slice(&y);
    }
    out
}

/// Richardson estimate of the RK4 error of `integrate_sampled` with
/// `substeps`, from a second run at twice the substeps: `max |y_h - y_{h/2}| / 15`.
pub fn richardson_error<S: OdeSystem + ?Sized>(
    sys: &S,
    t0: f64,
    y0: &[f64],
    dt_out: f64,
    n_out: usize,
    substeps: usize,
) -> f64 {
    let coarse = integrate_sampled(sys, t0, y0, dt_out, n_out, substeps);
    let fine = integrate_sampled(sys, t0, y0, dt_out, n_out, 2 * substeps);
    coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / 15.0
}
