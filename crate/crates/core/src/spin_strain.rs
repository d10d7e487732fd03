//! Spin-orbit sector: spin-current density, the strain / spin-current
//! coupling obtained by gauging the spin-orbit Hamiltonian, selection
//! rules, and a toy ensemble demonstration of strain-driven spin
//! relaxation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Grid1D, ScalarField, SpinorField, linear_fit};

type C = Complex64;

/// Pauli matrices sigma_x, sigma_y, sigma_z (index 0..3).
pub fn pauli(i: usize) -> [[C; 2]; 2] {
    let z = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    match i {
        0 => [[z, one], [one, z]],
        1 => [[z, C::new(0.0, -1.0)], [C::new(0.0, 1.0), z]],
        2 => [[one, z], [z, -one]],
        _ => panic!("Pauli index out of range"),
    }
}

pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Masses and couplings of the spin-orbit sector. The bare mass `m` and
/// the effective mass of the kinetic term are independent parameters.
#[derive(Debug, Clone, Copy)]
pub struct SpinOrbitParams {
    pub mu_b: f64,
    pub m: f64,
    pub g: f64,
}

/// Crystalline (or applied) electric field, one scalar field per
/// Cartesian component.
#[derive(Debug, Clone)]
pub struct ElectricFieldConfig {
    components: [ScalarField; 3],
}

impl ElectricFieldConfig {
    pub fn uniform(grid: Grid1D, e: [f64; 3]) -> Self {
        Self {
            components: [
                ScalarField::constant(grid, e[0]),
                ScalarField::constant(grid, e[1]),
                ScalarField::constant(grid, e[2]),
            ],
        }
    }

    pub fn from_fields(components: [ScalarField; 3]) -> Result<Self> {
        components[0].grid().same_grid(&components[1].grid())?;
        components[0].grid().same_grid(&components[2].grid())?;
        Ok(Self { components })
    }

    pub fn component(&self, j: usize) -> &ScalarField {
        &self.components[j]
    }

    pub fn at(&self, j: usize, site: usize) -> f64 {
        self.components[j].values()[site]
    }
}

/// Uniform space-like strain tensor, stored as the symmetric 3x3 matrix.
#[derive(Debug, Clone, Copy)]
pub struct StrainTensor3 {
    m: [[f64; 3]; 3],
}

impl StrainTensor3 {
    /// Build from the upper triangle, so symmetry is exact by
    /// construction: (xx, xy, xz, yy, yz, zz).
    pub fn from_upper(xx: f64, xy: f64, xz: f64, yy: f64, yz: f64, zz: f64) -> Self {
        Self {
            m: [[xx, xy, xz], [xy, yy, yz], [xz, yz, zz]],
        }
    }

    pub fn zero() -> Self {
        Self::from_upper(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.m[k][l]
    }
}

/// Spin-current density per site: spin index i (rows), transport index l
/// (columns). For 1D wavefunctions only l = x carries data.
#[derive(Debug, Clone)]
pub struct SpinCurrentDensity {
    grid: Grid1D,
    values: Vec<[[f64; 3]; 3]>,
}

impl SpinCurrentDensity {
    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn at(&self, site: usize) -> &[[f64; 3]; 3] {
        &self.values[site]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn sigma_sandwich(i: usize, bra: &[C; 2], ket: &[C; 2]) -> C {
    let s = pauli(i);
    let mut acc = C::new(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            acc += bra[a].conj() * s[a][b] * ket[b];
        }
    }
    acc
}

/// Bilinear current kernel
/// -(i mu_B / 2m) [ (d_x bra)^dag sigma_i ket - bra^dag sigma_i (d_x ket) ],
/// complex in general, real on the diagonal bra = ket.
fn current_kernel(
    bra: &SpinorField,
    ket: &SpinorField,
    p: &SpinOrbitParams,
) -> Result<Vec<[C; 3]>> {
    bra.grid().same_grid(&ket.grid())?;
    let dbra = bra.central_derivative();
    let dket = ket.central_derivative();
    let pref = C::new(0.0, -p.mu_b / (2.0 * p.m));
    let mut out = Vec::with_capacity(bra.grid().n_sites());
    for site in 0..bra.grid().n_sites() {
        let mut row = [C::new(0.0, 0.0); 3];
        for (i, r) in row.iter_mut().enumerate() {
            let term = sigma_sandwich(i, &dbra.values()[site], &ket.values()[site])
                - sigma_sandwich(i, &bra.values()[site], &dket.values()[site]);
            *r = pref * term;
        }
        out.push(row);
    }
    Ok(out)
}

/// Spin-current density J_il of a single wavefunction. The defining
/// combination is Hermitian, so the imaginary residue is checked against
/// 1e-12 and discarded.
pub fn spin_current(psi: &SpinorField, p: &SpinOrbitParams) -> Result<SpinCurrentDensity> {
    let kernel = current_kernel(psi, psi, p)?;
    let mut values = Vec::with_capacity(kernel.len());
    for row in kernel {
        let mut site = [[0.0; 3]; 3];
        for (i, v) in row.iter().enumerate() {
            if v.im.abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "spin current acquired imaginary part {:.3e}",
                    v.im
                )));
            }
            site[i][0] = v.re;
        }
        values.push(site);
    }
    Ok(SpinCurrentDensity {
        grid: psi.grid(),
        values,
    })
}

/// Coupling density -(g/2) eps_ijk J_il R_kl E_j, pointwise, with the
/// contraction unrolled over the six nonzero Levi-Civita entries.
pub fn strain_spin_coupling_density(
    j_cur: &SpinCurrentDensity,
    r: &StrainTensor3,
    e: &ElectricFieldConfig,
    g: f64,
) -> Result<ScalarField> {
    j_cur.grid().same_grid(&e.component(0).grid())?;
    const EPS: [(usize, usize, usize, f64); 6] = [
        (0, 1, 2, 1.0),
        (1, 2, 0, 1.0),
        (2, 0, 1, 1.0),
        (0, 2, 1, -1.0),
        (2, 1, 0, -1.0),
        (1, 0, 2, -1.0),
    ];
    let mut values = Vec::with_capacity(j_cur.len());
    for site in 0..j_cur.len() {
        let jm = j_cur.at(site);
        let mut acc = 0.0;
        for &(i, jj, k, sgn) in &EPS {
            let ej = e.at(jj, site);
            if ej == 0.0 {
                continue;
            }
            for l in 0..3 {
                acc += sgn * jm[i][l] * r.get(k, l) * ej;
            }
        }
        values.push(-0.5 * g * acc);
    }
    ScalarField::from_values(j_cur.grid(), values)
}

/// Bare spin-orbit density (no strain), sandwiched between two states:
/// -(i mu_B / 4m) [ (d psi_b)^dag (sigma x E)_x psi_k
///                  - psi_b^dag (sigma x E)_x (d psi_k) ].
pub fn so_density_bare(
    bra: &SpinorField,
    ket: &SpinorField,
    e: &ElectricFieldConfig,
    p: &SpinOrbitParams,
) -> Result<Vec<C>> {
    bra.grid().same_grid(&ket.grid())?;
    bra.grid().same_grid(&e.component(0).grid())?;
    let dbra = bra.central_derivative();
    let dket = ket.central_derivative();
    let pref = C::new(0.0, -p.mu_b / (4.0 * p.m));
    let mut out = Vec::with_capacity(bra.grid().n_sites());
    for site in 0..bra.grid().n_sites() {
        // (sigma x E)_x = sigma_y E_z - sigma_z E_y
        let mut term = C::new(0.0, 0.0);
        for (i, k) in [(1usize, 2usize), (2, 1)] {
            let sgn = if i == 1 { 1.0 } else { -1.0 };
            let ei = e.at(k, site) * sgn;
            if ei == 0.0 {
                continue;
            }
            term += ei
                * (sigma_sandwich(i, &dbra.values()[site], &ket.values()[site])
                    + sigma_sandwich(i, &bra.values()[site], &dket.values()[site]).scale(-1.0));
        }
        out.push(pref * term);
    }
    Ok(out)
}

/// Strain correction to the spin-orbit density (the gauged extra term),
/// +(i mu_B g / 4m) eps_ijk E_j R_kl
///   [ d_l(psi_b)^dag sigma_i psi_k - psi_b^dag sigma_i d_l psi_k ],
/// evaluated directly from its defining expression (l = x only in 1D).
pub fn so_density_strain(
    bra: &SpinorField,
    ket: &SpinorField,
    e: &ElectricFieldConfig,
    r: &StrainTensor3,
    p: &SpinOrbitParams,
) -> Result<Vec<C>> {
    bra.grid().same_grid(&ket.grid())?;
    bra.grid().same_grid(&e.component(0).grid())?;
    let dbra = bra.central_derivative();
    let dket = ket.central_derivative();
    let pref = C::new(0.0, p.mu_b * p.g / (4.0 * p.m));
    let mut out = Vec::with_capacity(bra.grid().n_sites());
    for site in 0..bra.grid().n_sites() {
        let mut acc = C::new(0.0, 0.0);
        for i in 0..3 {
            let bracket = sigma_sandwich(i, &dbra.values()[site], &ket.values()[site])
                - sigma_sandwich(i, &bra.values()[site], &dket.values()[site]);
            if bracket.norm() == 0.0 {
                continue;
            }
            for j in 0..3 {
                let ej = e.at(j, site);
                if ej == 0.0 {
                    continue;
                }
                for k in 0..3 {
                    let eps = levi_civita(i, j, k);
                    if eps != 0.0 {
                        // l = x
                        acc += eps * ej * r.get(k, 0) * bracket;
                    }
                }
            }
        }
        out.push(pref * acc);
    }
    Ok(out)
}

/// Full gauged spin-orbit density: bare term plus the strain correction.
pub fn so_density_covariant(
    bra: &SpinorField,
    ket: &SpinorField,
    e: &ElectricFieldConfig,
    r: &StrainTensor3,
    p: &SpinOrbitParams,
) -> Result<Vec<C>> {
    let bare = so_density_bare(bra, ket, e, p)?;
    let strain = so_density_strain(bra, ket, e, r, p)?;
    Ok(bare.iter().zip(&strain).map(|(a, b)| a + b).collect())
}

/// <k' sigma'| H'_SO |k sigma> for plane-wave spinors on the grid, with
/// uniform strain and field.
#[allow(clippy::too_many_arguments)]
pub fn spin_flip_matrix_element(
    grid: Grid1D,
    k: f64,
    sigma: [C; 2],
    k_prime: f64,
    sigma_prime: [C; 2],
    r: &StrainTensor3,
    e: &ElectricFieldConfig,
    p: &SpinOrbitParams,
) -> Result<C> {
    let norm = 1.0 / grid.length().sqrt();
    let ket = SpinorField::plane_wave(grid, k, [sigma[0] * norm, sigma[1] * norm]);
    let bra = SpinorField::plane_wave(grid, k_prime, [sigma_prime[0] * norm, sigma_prime[1] * norm]);
    let density = so_density_strain(&bra, &ket, e, r, p)?;
    Ok(density.iter().sum::<C>() * grid.dx())
}

/// Parameters of the two-level relaxation demonstration. The strain
/// fluctuation enters as an Ornstein-Uhlenbeck process xi(t) coupled
/// through sigma_x with effective strength lambda * e_z * r_amplitude
/// (the E || z selection rule leaves only the transverse channel open).
#[derive(Debug, Clone, Copy)]
pub struct RelaxationParams {
    pub lambda: f64,
    pub e_z: f64,
    pub r_amplitude: f64,
    /// Level splitting Delta of (1/2) Delta sigma_z.
    pub delta: f64,
    /// Noise correlation time.
    pub tau: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub n_realizations: usize,
    pub seed: u64,
    pub record_every: usize,
}

#[derive(Debug, Clone)]
pub struct RelaxationResult {
    pub times: Vec<f64>,
    pub sz_mean: Vec<f64>,
    pub sz_stderr: Vec<f64>,
    /// Exponential decay rate fitted on the ensemble mean.
    pub fitted_rate: f64,
}

pub fn relaxation_toy(params: &RelaxationParams) -> Result<RelaxationResult> {
    let kappa = params.lambda * params.e_z * params.r_amplitude;
    if !(params.dt > 0.0) || !(params.tau > 0.0) {
        return Err(Error::UnstableStep("dt and tau must be positive".into()));
    }
    if params.dt > 0.1 * params.tau {
        return Err(Error::UnstableStep(format!(
            "dt = {} does not resolve the noise correlation time {}",
            params.dt, params.tau
        )));
    }
    if kappa.abs() * params.dt > 0.1 {
        return Err(Error::UnstableStep(format!(
            "coupling*dt = {} too large",
            kappa.abs() * params.dt
        )));
    }
    if params.n_steps == 0 || params.n_realizations == 0 {
        return Err(Error::InvalidParameter(
            "need at least one step and one realization".into(),
        ));
    }

    let stride = params.record_every.max(1);
    let n_rec = params.n_steps / stride + 1;
    let decay = (-params.dt / params.tau).exp();
    let kick = (1.0 - decay * decay).sqrt();

    let traces: Vec<Vec<f64>> = (0..params.n_realizations)
        .into_par_iter()
        .map(|r| {
            // per-realization stream, independent of scheduling
            let mut rng = ChaCha8Rng::seed_from_u64(
                params
                    .seed
                    .wrapping_add((r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
            );
            let mut xi: f64 = rng.sample(StandardNormal);
            let mut up = C::new(1.0, 0.0);
            let mut dn = C::new(0.0, 0.0);
            let mut rec = Vec::with_capacity(n_rec);
            rec.push(1.0);
            for step in 1..=params.n_steps {
                let a = 0.5 * params.delta;
                let b = kappa * xi;
                let omega = (a * a + b * b).sqrt();
                let (cos_t, sinc) = if omega > 0.0 {
                    let th = omega * params.dt;
                    (th.cos(), th.sin() / omega)
                } else {
                    (1.0, params.dt)
                };
                // exp(-i (a sz + b sx) dt)
                let new_up = up * C::new(cos_t, -a * sinc) + dn * C::new(0.0, -b * sinc);
                let new_dn = dn * C::new(cos_t, a * sinc) + up * C::new(0.0, -b * sinc);
                up = new_up;
                dn = new_dn;
                let gauss: f64 = rng.sample(StandardNormal);
                xi = xi * decay + kick * gauss;
                if step % stride == 0 {
                    let nu = up.norm_sqr();
                    let nd = dn.norm_sqr();
                    rec.push((nu - nd) / (nu + nd));
                }
            }
            rec
        })
        .collect();

    let n_pts = traces[0].len();
    let nr = params.n_realizations as f64;
    let mut sz_mean = vec![0.0; n_pts];
    let mut sz_var = vec![0.0; n_pts];
    for tr in &traces {
        for (i, &v) in tr.iter().enumerate() {
            sz_mean[i] += v;
        }
    }
    for m in sz_mean.iter_mut() {
        *m /= nr;
    }
    for tr in &traces {
        for (i, &v) in tr.iter().enumerate() {
            sz_var[i] += (v - sz_mean[i]) * (v - sz_mean[i]);
        }
    }
    let sz_stderr: Vec<f64> = sz_var
        .iter()
        .map(|&v| (v / (nr * (nr - 1.0).max(1.0))).sqrt())
        .collect();
    let times: Vec<f64> = (0..n_pts)
        .map(|i| i as f64 * params.dt * stride as f64)
        .collect();

    // fit log <sz> where the signal is clearly above the noise floor
    let fitted_rate = if kappa == 0.0 {
        0.0
    } else {
        let mut ts = Vec::new();
        let mut ls = Vec::new();
        for (i, &m) in sz_mean.iter().enumerate() {
            if m > 0.15 {
                ts.push(times[i]);
                ls.push(m.ln());
            }
        }
        if ts.len() < 3 {
            return Err(Error::InvalidParameter(
                "decay too fast to fit: fewer than 3 usable samples".into(),
            ));
        }
        -linear_fit(&ts, &ls).0
    };

    Ok(RelaxationResult {
        times,
        sz_mean,
        sz_stderr,
        fitted_rate,
    })
}
