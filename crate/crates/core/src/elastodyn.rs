//! Classical dynamics of the linearized 1D gauge field: gauge fixing,
//! Hamiltonian, symplectic leapfrog evolution and dispersion measurement.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::lattice::{Grid1D, ScalarField};

/// Dynamical pair (phi = R_01, pi = (1/c_s^2) d_t phi) plus the static
/// strain R_x = R_11 and its (gauge-fixed) momentum.
#[derive(Debug, Clone)]
pub struct ElasticState1D {
    pub phi: ScalarField,
    pub pi_phi: ScalarField,
    pub r_x: ScalarField,
    pub pi_rx: ScalarField,
    pub t: f64,
}

impl ElasticState1D {
    pub fn new(phi: ScalarField, pi_phi: ScalarField, r_x: ScalarField) -> Result<Self> {
        phi.grid().same_grid(&pi_phi.grid())?;
        phi.grid().same_grid(&r_x.grid())?;
        let pi_rx = ScalarField::zeros(phi.grid());
        Ok(Self {
            phi,
            pi_phi,
            r_x,
            pi_rx,
            t: 0.0,
        })
    }

    pub fn vacuum(grid: Grid1D) -> Self {
        Self {
            phi: ScalarField::zeros(grid),
            pi_phi: ScalarField::zeros(grid),
            r_x: ScalarField::zeros(grid),
            pi_rx: ScalarField::zeros(grid),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> Grid1D {
        self.phi.grid()
    }

    pub fn is_gauge_fixed(&self) -> bool {
        self.pi_rx.max_abs() == 0.0
    }
}

/// Impose d_t R_x = 0: the strain momentum is zeroed and R_x becomes
/// inert data for the rest of the evolution. Idempotent.
pub fn apply_gauge_fixing(state: &ElasticState1D) -> ElasticState1D {
    let mut out = state.clone();
    out.pi_rx = ScalarField::zeros(state.grid());
    out
}

/// Gauge-fixed Hamiltonian density
/// (1/2)[(1/c_s^2)(d_t phi)^2 + (d_x phi)^2] with d_t phi = c_s^2 pi.
pub fn hamiltonian_density(state: &ElasticState1D, c_s: f64) -> Result<ScalarField> {
    if !state.is_gauge_fixed() {
        return Err(Error::InvalidParameter(
            "hamiltonian_density requires a gauge-fixed state (pi_rx = 0)".into(),
        ));
    }
    let dphi = state.phi.central_derivative();
    state
        .pi_phi
        .zip_map(&dphi, |pi, dp| 0.5 * (c_s * c_s * pi * pi + dp * dp))
}

pub fn total_energy(state: &ElasticState1D, c_s: f64) -> Result<f64> {
    Ok(hamiltonian_density(state, c_s)?.integrate())
}

#[derive(Debug, Clone, Copy)]
pub struct EvolveParams {
    pub dt: f64,
    pub n_steps: usize,
    pub c_s: f64,
    /// Keep one snapshot every this many steps (1 = every step).
    pub snapshot_every: usize,
}

impl EvolveParams {
    pub fn new(dt: f64, n_steps: usize, c_s: f64) -> Self {
        Self {
            dt,
            n_steps,
            c_s,
            snapshot_every: 1,
        }
    }

    fn validate(&self, grid: Grid1D) -> Result<()> {
        if self.n_steps == 0 {
            return Err(Error::NoSteps);
        }
        let cfl = self.c_s * self.dt / grid.dx();
        if !(cfl > 0.0) || cfl > 0.9 {
            return Err(Error::CflViolation(cfl));
        }
        Ok(())
    }
}

/// Snapshots of (phi, pi) at uniform sample spacing; R_x is shared, never
/// touched by the evolution.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub phis: Vec<ScalarField>,
    pub pis: Vec<ScalarField>,
    pub r_x: ScalarField,
    pub c_s: f64,
}

impl Trajectory {
    pub fn sample_dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn final_state(&self) -> ElasticState1D {
        ElasticState1D {
            phi: self.phis.last().unwrap().clone(),
            pi_phi: self.pis.last().unwrap().clone(),
            r_x: self.r_x.clone(),
            pi_rx: ScalarField::zeros(self.r_x.grid()),
            t: *self.times.last().unwrap(),
        }
    }
}

/// Kick-drift-kick leapfrog for d_t^2 phi = c_s^2 d_x^2 phi.
pub fn evolve_leapfrog(state: &ElasticState1D, params: &EvolveParams) -> Result<Trajectory> {
    let grid = state.grid();
    params.validate(grid)?;
    if !state.is_gauge_fixed() {
        return Err(Error::InvalidParameter(
            "evolve_leapfrog requires a gauge-fixed state; call apply_gauge_fixing first".into(),
        ));
    }
    let stride = params.snapshot_every.max(1);
    let c2 = params.c_s * params.c_s;
    let dt = params.dt;

    let mut phi = state.phi.clone();
    // work in v = d_t phi = c_s^2 pi
    let mut v = state.pi_phi.scaled(c2);

    let mut times = vec![state.t];
    let mut phis = vec![phi.clone()];
    let mut pis = vec![state.pi_phi.clone()];

    for step in 1..=params.n_steps {
        let acc = phi.second_derivative().scaled(c2);
        let v_half = v.zip_map(&acc, |vv, a| vv + 0.5 * dt * a)?;
        phi = phi.zip_map(&v_half, |p, vv| p + dt * vv)?;
        let acc = phi.second_derivative().scaled(c2);
        v = v_half.zip_map(&acc, |vv, a| vv + 0.5 * dt * a)?;

        if step % stride == 0 || step == params.n_steps {
            times.push(state.t + step as f64 * dt);
            phis.push(phi.clone());
            pis.push(v.scaled(1.0 / c2));
        }
    }

    Ok(Trajectory {
        times,
        phis,
        pis,
        r_x: state.r_x.clone(),
        c_s: params.c_s,
    })
}

/// Dominant temporal frequency per spatial mode, from a Hann-windowed
/// spectrum with three-point quadratic peak interpolation.
///
/// Returns (q_n, omega) for each requested integer mode. A mode whose
/// time series carries essentially no power reports omega = 0.
pub fn measure_dispersion(traj: &Trajectory, mode_indices: &[i64]) -> Result<Vec<(f64, f64)>> {
    let grid = traj.r_x.grid();
    let n_t = traj.times.len();
    if n_t < 8 {
        return Err(Error::TrajectoryTooShort {
            mode: 0,
            got: n_t as f64,
            need: 8.0,
        });
    }
    let dt_s = traj.sample_dt();
    let span = dt_s * n_t as f64;

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n_t);

    let mut out = Vec::with_capacity(mode_indices.len());
    for &mode in mode_indices {
        let q = grid.wavenumber(mode);
        // spatial projection onto e^{iqx} per snapshot
        let mut series: Vec<Complex64> = traj
            .phis
            .iter()
            .map(|phi| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &f) in phi.values().iter().enumerate() {
                    acc += f * Complex64::from_polar(1.0, -q * grid.x(j));
                }
                acc / grid.n_sites() as f64
            })
            .collect();

        let power: f64 = series.iter().map(|c| c.norm_sqr()).sum();
        if power / (n_t as f64) < 1e-24 {
            out.push((q, 0.0));
            continue;
        }

        // Hann window
        for (m, s) in series.iter_mut().enumerate() {
            let w = 0.5
                * (1.0
                    - (2.0 * std::f64::consts::PI * m as f64 / (n_t - 1) as f64).cos());
            *s *= w;
        }
        fft.process(&mut series);

        let mags: Vec<f64> = series.iter().map(|c| c.norm()).collect();
        let k_peak = mags
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(k, _)| k)
            .unwrap();
        let lm = mags[(k_peak + n_t - 1) % n_t].max(1e-300).ln();
        let lc = mags[k_peak].max(1e-300).ln();
        let lp = mags[(k_peak + 1) % n_t].max(1e-300).ln();
        let denom = 2.0 * lc - lm - lp;
        let delta = if denom.abs() > 1e-12 {
            0.5 * (lp - lm) / denom
        } else {
            0.0
        };
        let mut k_frac = k_peak as f64 + delta;
        if k_frac > n_t as f64 / 2.0 {
            k_frac -= n_t as f64;
        }
        let omega = (2.0 * std::f64::consts::PI * k_frac / span).abs();

        let total_t = traj.times.last().unwrap() - traj.times[0];
        if omega * total_t < 4.0 * std::f64::consts::PI {
            return Err(Error::TrajectoryTooShort {
                mode,
                got: omega * total_t,
                need: 4.0 * std::f64::consts::PI,
            });
        }
        out.push((q, omega));
    }
    Ok(out)
}

/// Semi-discrete standing-wave frequency of the 3-point stencil,
/// Omega(q) = (2 c_s / dx) |sin(q dx / 2)|.
pub fn stencil_frequency(grid: Grid1D, c_s: f64, q: f64) -> f64 {
    2.0 * c_s / grid.dx() * (q * grid.dx() / 2.0).sin().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn standing_wave(grid: Grid1D, amp: f64, n: i64) -> ElasticState1D {
        let q = grid.wavenumber(n);
        ElasticState1D::new(
            ScalarField::from_fn(grid, |x| amp * (q * x).sin()),
            ScalarField::zeros(grid),
            ScalarField::zeros(grid),
        )
        .unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        let grid = Grid1D::new(256, 2.0 * PI).unwrap();
        let c_s = 1.4;

        let vac = ElasticState1D::vacuum(grid);
        assert_eq!(total_energy(&vac, c_s).unwrap(), 0.0);

        // phi = A sin(qx), pi = 0: E = A^2 q^2 L / 4 up to the stencil factor
        let amp = 0.8;
        let n = 2;
        let st = standing_wave(grid, amp, n);
        let q = grid.wavenumber(n);
        let q_eff = (q * grid.dx()).sin() / grid.dx();
        let expect = amp * amp * q_eff * q_eff * grid.length() / 4.0;
        assert!((total_energy(&st, c_s).unwrap() - expect).abs() < 1e-10);
        // and within O(dx^2) of the continuum value
        let cont = amp * amp * q * q * grid.length() / 4.0;
        assert!((total_energy(&st, c_s).unwrap() - cont).abs() < cont * (q * grid.dx()).powi(2));

        // pure momentum: density v^2 / (2 c_s^2) everywhere
        let v = 0.3;
        let st = ElasticState1D::new(
            ScalarField::zeros(grid),
            ScalarField::constant(grid, v / (c_s * c_s)),
            ScalarField::zeros(grid),
        )
        .unwrap();
        let dens = hamiltonian_density(&st, c_s).unwrap();
        for &d in dens.values() {
            assert!((d - 0.5 * v * v / (c_s * c_s)).abs() < 1e-14);
        }
    }

    #[test]
    fn two_modes_energy_is_additive() {
        let grid = Grid1D::new(256, 2.0 * PI).unwrap();
        let c_s = 1.0;
        let a = standing_wave(grid, 0.5, 1);
        let b = standing_wave(grid, 0.7, 3);
        let sum = ElasticState1D::new(
            a.phi.add(&b.phi).unwrap(),
            ScalarField::zeros(grid),
            ScalarField::zeros(grid),
        )
        .unwrap();
        let e = total_energy(&sum, c_s).unwrap();
        let ea = total_energy(&a, c_s).unwrap();
        let eb = total_energy(&b, c_s).unwrap();
        assert!((e - ea - eb).abs() < 1e-10);
    }

    #[test]
    fn cfl_violation_rejected() {
        let grid = Grid1D::new(64, 2.0 * PI).unwrap();
        let st = ElasticState1D::vacuum(grid);
        let bad = EvolveParams::new(grid.dx() * 1.5, 10, 1.0);
        assert!(matches!(
            evolve_leapfrog(&st, &bad),
            Err(Error::CflViolation(_))
        ));
    }

    #[test]
    fn vacuum_is_a_fixed_point() {
        let grid = Grid1D::new(64, 2.0 * PI).unwrap();
        let st = ElasticState1D::vacuum(grid);
        let traj = evolve_leapfrog(&st, &EvolveParams::new(0.01, 50, 1.0)).unwrap();
        assert_eq!(traj.final_state().phi.max_abs(), 0.0);
        assert_eq!(traj.final_state().pi_phi.max_abs(), 0.0);
    }

    #[test]
    fn standing_wave_matches_semidiscrete_solution() {
        let grid = Grid1D::new(64, 2.0 * PI).unwrap();
        let c_s = 1.0;
        let amp = 1.0;
        let n = 1;
        let st = standing_wave(grid, amp, n);
        let dt = 1e-3;
        let traj = evolve_leapfrog(&st, &EvolveParams::new(dt, 100, c_s)).unwrap();
        let omega = stencil_frequency(grid, c_s, grid.wavenumber(n));
        let t = traj.times.last().unwrap();
        let q = grid.wavenumber(n);
        let exact = ScalarField::from_fn(grid, |x| amp * (q * x).sin() * (omega * t).cos());
        let dev = traj.final_state().phi.sub(&exact).unwrap().max_abs();
        assert!(dev < 1e-8, "deviation {dev}");
    }

    #[test]
    fn traveling_wave_translates() {
        let grid = Grid1D::new(256, 2.0 * PI).unwrap();
        let c_s = 1.0;
        let n = 2;
        let q = grid.wavenumber(n);
        let omega = stencil_frequency(grid, c_s, q);
        // right mover of the semi-discrete system
        let st = ElasticState1D::new(
            ScalarField::from_fn(grid, |x| (q * x).sin()),
            ScalarField::from_fn(grid, |x| -omega * (q * x).cos() / (c_s * c_s)),
            ScalarField::zeros(grid),
        )
        .unwrap();
        let dt = 0.4 * grid.dx() / c_s;
        let steps = 400;
        let traj = evolve_leapfrog(&st, &EvolveParams::new(dt, steps, c_s)).unwrap();
        let t = *traj.times.last().unwrap();
        let ideal = ScalarField::from_fn(grid, |x| (q * (x - c_s * t)).sin());
        let dev = traj.final_state().phi.sub(&ideal).unwrap().max_abs();
        let phase_budget = 2.0 * ((omega - c_s * q).abs() * t + omega * t * (omega * dt).powi(2) / 24.0) + 1e-8;
        assert!(dev < phase_budget, "dev {dev} budget {phase_budget}");
    }

    #[test]
    fn energy_conserved_over_thousand_steps() {
        let grid = Grid1D::new(512, 2.0 * PI).unwrap();
        let c_s = 1.0;
        let st = standing_wave(grid, 1.0, 1);
        let dt = 0.5 * grid.dx() / c_s;
        let mut params = EvolveParams::new(dt, 1000, c_s);
        params.snapshot_every = 10;
        let traj = evolve_leapfrog(&st, &params).unwrap();
        let e0 = total_energy(&st, c_s).unwrap();
        // the measured energy uses the central-difference gradient while
        // the dynamics discretizes with the 3-point Laplacian; the two
        // stencils disagree at O((q dx)^2), plus the leapfrog wobble
        let q = grid.wavenumber(1);
        let omega = stencil_frequency(grid, c_s, q);
        let budget = (q * grid.dx()).powi(2) / 2.0 + (omega * dt).powi(2) / 4.0;
        for (phi, pi) in traj.phis.iter().zip(&traj.pis) {
            let s = ElasticState1D::new(phi.clone(), pi.clone(), ScalarField::zeros(grid)).unwrap();
            let e = total_energy(&s, c_s).unwrap();
            assert!(((e - e0) / e0).abs() < budget);
        }
    }

    #[test]
    fn time_reversal_returns_initial_state() {
        let grid = Grid1D::new(128, 2.0 * PI).unwrap();
        let c_s = 1.3;
        let st = ElasticState1D::new(
            ScalarField::from_fn(grid, |x| x.sin() + 0.3 * (3.0 * x).cos()),
            ScalarField::from_fn(grid, |x| 0.2 * (2.0 * x).sin()),
            ScalarField::zeros(grid),
        )
        .unwrap();
        let params = EvolveParams::new(0.3 * grid.dx() / c_s, 500, c_s);
        let fwd = evolve_leapfrog(&st, &params).unwrap().final_state();
        let mut flipped = fwd.clone();
        flipped.pi_phi = fwd.pi_phi.scaled(-1.0);
        let back = evolve_leapfrog(&flipped, &params).unwrap().final_state();
        assert!(back.phi.sub(&st.phi).unwrap().max_abs() < 1e-10);
        assert!(back.pi_phi.add(&st.pi_phi).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn evolution_is_linear() {
        let grid = Grid1D::new(64, 2.0 * PI).unwrap();
        let c_s = 1.0;
        let a = standing_wave(grid, 1.0, 1);
        let b = standing_wave(grid, 1.0, 2);
        let (alpha, beta) = (0.6, -1.3);
        let combo = ElasticState1D::new(
            a.phi.scaled(alpha).add(&b.phi.scaled(beta)).unwrap(),
            ScalarField::zeros(grid),
            ScalarField::zeros(grid),
        )
        .unwrap();
        let params = EvolveParams::new(0.4 * grid.dx(), 200, c_s);
        let fa = evolve_leapfrog(&a, &params).unwrap().final_state();
        let fb = evolve_leapfrog(&b, &params).unwrap().final_state();
        let fc = evolve_leapfrog(&combo, &params).unwrap().final_state();
        let lin = fa.phi.scaled(alpha).add(&fb.phi.scaled(beta)).unwrap();
        assert!(fc.phi.sub(&lin).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn gauge_fixing_freezes_strain() {
        let grid = Grid1D::new(64, 2.0 * PI).unwrap();
        let mut st = standing_wave(grid, 1.0, 1);
        st.r_x = ScalarField::from_fn(grid, |x| 0.2 * x.cos());
        st.pi_rx = ScalarField::constant(grid, 0.5);
        assert!(!st.is_gauge_fixed());
        let fixed = apply_gauge_fixing(&st);
        assert!(fixed.is_gauge_fixed());
        assert_eq!(fixed.r_x, st.r_x);
        // idempotent
        let again = apply_gauge_fixing(&fixed);
        assert_eq!(again.r_x, fixed.r_x);
        assert_eq!(again.pi_rx, fixed.pi_rx);

        let traj = evolve_leapfrog(&fixed, &EvolveParams::new(0.01, 1000, 1.0)).unwrap();
        assert_eq!(traj.r_x, st.r_x);
    }

    #[test]
    fn dispersion_of_excited_modes() {
        let grid = Grid1D::new(128, 2.0 * PI).unwrap();
        let c_s = 1.0;
        let phi = ScalarField::from_fn(grid, |x| {
            (1..=4).map(|n| ((n as f64) * x + 0.3 * n as f64).sin()).sum()
        });
        let st = ElasticState1D::new(phi, ScalarField::zeros(grid), ScalarField::zeros(grid)).unwrap();
        let dt = 0.4 * grid.dx() / c_s;
        let n_steps = (60.0 / dt) as usize;
        let traj = evolve_leapfrog(&st, &EvolveParams::new(dt, n_steps, c_s)).unwrap();
        for (q, omega) in measure_dispersion(&traj, &[1, 2, 3, 4]).unwrap() {
            let ratio = omega / (c_s * q.abs());
            assert!((ratio - 1.0).abs() < 0.01, "q {q}: ratio {ratio}");
        }
    }

    #[test]
    fn dispersion_zero_mode_and_short_trajectory() {
        let grid = Grid1D::new(64, 2.0 * PI).unwrap();
        let st = standing_wave(grid, 1.0, 1);
        let dt = 0.4 * grid.dx();
        let traj = evolve_leapfrog(&st, &EvolveParams::new(dt, 2000, 1.0)).unwrap();
        // unexcited zero mode reports omega = 0
        let res = measure_dispersion(&traj, &[0]).unwrap();
        assert_eq!(res[0].1, 0.0);

        let short = evolve_leapfrog(&st, &EvolveParams::new(dt, 40, 1.0)).unwrap();
        assert!(matches!(
            measure_dispersion(&short, &[1]),
            Err(Error::TrajectoryTooShort { .. })
        ));
    }
}
