//! The induced electron-phonon interaction: plane-wave electron basis,
//! joint electron (x) phonon Hilbert space, the symmetrized coupling,
//! golden-rule rates and exact-diagonalization cross checks.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::ScalarField;
use crate::operators::QOperator;
use crate::phonon::{FockBasis, LadderKind, ladder_operator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

/// A plane-wave orbital k_n = 2 pi n / L with a spin label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orbital {
    pub n: i64,
    pub k: f64,
    pub spin: Spin,
}

/// Occupation-number basis of plane-wave electrons at fixed particle
/// number. Antisymmetry is carried by the bitmask representation.
#[derive(Debug, Clone)]
pub struct ElectronBasis {
    length: f64,
    orbitals: Vec<Orbital>,
    states: Vec<u128>,
    index: HashMap<u128, usize>,
    n_electrons: usize,
}

impl ElectronBasis {
    /// Orbitals n in [-n_k, n_k], optionally doubled by spin, filled with
    /// `n_electrons` particles.
    pub fn new(length: f64, n_k: i64, n_electrons: usize, spinful: bool) -> Result<Self> {
        let ns: Vec<i64> = (-n_k..=n_k).collect();
        Self::with_orbitals(length, &ns, n_electrons, spinful)
    }

    /// Basis over an explicit k-window (integer mode indices).
    pub fn with_orbitals(
        length: f64,
        ns: &[i64],
        n_electrons: usize,
        spinful: bool,
    ) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::NonPositiveLength(length));
        }
        let spins: &[Spin] = if spinful {
            &[Spin::Up, Spin::Down]
        } else {
            &[Spin::Up]
        };
        let mut orbitals = Vec::new();
        for &n in ns {
            for &spin in spins {
                orbitals.push(Orbital {
                    n,
                    k: 2.0 * std::f64::consts::PI * n as f64 / length,
                    spin,
                });
            }
        }
        if orbitals.len() > 128 {
            return Err(Error::BasisTooLarge(orbitals.len(), 128));
        }
        if n_electrons == 0 || n_electrons > orbitals.len() {
            return Err(Error::InvalidParameter(format!(
                "electron count {n_electrons} outside 1..={}",
                orbitals.len()
            )));
        }
        let mut states = Vec::new();
        enumerate_masks(orbitals.len(), n_electrons, &mut states);
        let index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Ok(Self {
            length,
            orbitals,
            states,
            index,
            n_electrons,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn orbitals(&self) -> &[Orbital] {
        &self.orbitals
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn state(&self, idx: usize) -> u128 {
        self.states[idx]
    }

    pub fn index_of(&self, mask: u128) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn orbital_index(&self, n: i64, spin: Spin) -> Option<usize> {
        self.orbitals
            .iter()
            .position(|o| o.n == n && o.spin == spin)
    }

    /// Index of the single-determinant state occupying exactly `orbs`.
    pub fn determinant(&self, orbs: &[(i64, Spin)]) -> Option<usize> {
        let mut mask = 0u128;
        for &(n, spin) in orbs {
            mask |= 1u128 << self.orbital_index(n, spin)?;
        }
        self.index_of(mask)
    }

    /// Kinetic energy sum k^2 / (2 m*) of a basis state.
    pub fn kinetic_energy(&self, idx: usize, m_star: f64) -> f64 {
        let mask = self.states[idx];
        self.orbitals
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, o)| o.k * o.k / (2.0 * m_star))
            .sum()
    }

    /// Total integer electron momentum in units of 2 pi / L.
    pub fn momentum_index(&self, idx: usize) -> i64 {
        let mask = self.states[idx];
        self.orbitals
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, o)| o.n)
            .sum()
    }

    /// Apply c^dag_a c_b with the fermionic sign; None when it annihilates.
    pub fn hop(&self, idx: usize, a: usize, b: usize) -> Option<(usize, f64)> {
        let mask = self.states[idx];
        if mask >> b & 1 == 0 {
            return None;
        }
        let mut sign = parity_below(mask, b);
        let removed = mask & !(1u128 << b);
        if removed >> a & 1 == 1 {
            return None;
        }
        sign *= parity_below(removed, a);
        let target = removed | (1u128 << a);
        self.index_of(target).map(|t| (t, sign))
    }
}

fn parity_below(mask: u128, bit: usize) -> f64 {
    let below = mask & ((1u128 << bit) - 1);
    if below.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn enumerate_masks(n_orbitals: usize, n_electrons: usize, out: &mut Vec<u128>) {
    fn rec(start: usize, left: usize, n: usize, acc: u128, out: &mut Vec<u128>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for b in start..=(n - left) {
            rec(b + 1, left - 1, n, acc | (1u128 << b), out);
        }
    }
    rec(0, n_electrons, n_orbitals, 0, out);
}

/// Tensor product of the electron and phonon bases with a combined index
/// idx = e_idx * dim_ph + p_idx.
#[derive(Debug, Clone)]
pub struct JointBasis {
    pub electron: ElectronBasis,
    pub phonon: FockBasis,
}

impl JointBasis {
    pub fn new(electron: ElectronBasis, phonon: FockBasis) -> Result<Self> {
        let le = electron.length();
        let lp = phonon.modes().length();
        if (le - lp).abs() > 1e-12 * le.max(lp) {
            return Err(Error::Incommensurate(le, lp));
        }
        Ok(Self { electron, phonon })
    }

    pub fn dim(&self) -> usize {
        self.electron.dim() * self.phonon.dim()
    }

    pub fn compose(&self, e_idx: usize, p_idx: usize) -> usize {
        e_idx * self.phonon.dim() + p_idx
    }

    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.phonon.dim(), idx % self.phonon.dim())
    }

    /// Total integer momentum (electron + phonon) in units of 2 pi / L.
    pub fn momentum_index(&self, idx: usize) -> i64 {
        let (e, p) = self.split(idx);
        self.electron.momentum_index(e) + self.phonon.momentum_index(p)
    }

    /// Unperturbed energies: electron kinetic energy plus the free phonon
    /// Hamiltonian, as a diagonal.
    pub fn free_energies(&self, m_star: f64) -> Vec<f64> {
        let ph = crate::phonon::free_hamiltonian(&self.phonon);
        let mut out = vec![0.0; self.dim()];
        for e in 0..self.electron.dim() {
            let ek = self.electron.kinetic_energy(e, m_star);
            for p in 0..self.phonon.dim() {
                out[self.compose(e, p)] = ek + ph.get(p, p).re;
            }
        }
        out
    }

    pub fn free_hamiltonian(&self, m_star: f64) -> QOperator {
        QOperator::from_diagonal(&self.free_energies(m_star))
    }

    /// Diagonal total-momentum operator P = sum k n_k + sum q n_q.
    /// Equal integer momenta yield bitwise-equal entries.
    pub fn total_momentum(&self) -> QOperator {
        let unit = 2.0 * std::f64::consts::PI / self.electron.length();
        let diag: Vec<f64> = (0..self.dim())
            .map(|i| unit * self.momentum_index(i) as f64)
            .collect();
        QOperator::from_diagonal(&diag)
    }
}

/// Lattice potential, held as U(x) on a grid; U(q) follows by quadrature
/// and inherits U(-q) = U(q)* from reality.
#[derive(Debug, Clone)]
pub struct LatticePotential {
    field: ScalarField,
}

impl LatticePotential {
    pub fn from_field(field: ScalarField) -> Self {
        Self { field }
    }

    /// U(q) = integral of e^{-iqx} U(x) dx.
    pub fn fourier(&self, q: f64) -> Complex64 {
        let grid = self.field.grid();
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &u) in self.field.values().iter().enumerate() {
            acc += u * Complex64::from_polar(1.0, -q * grid.x(j));
        }
        acc * grid.dx()
    }

    pub fn length(&self) -> f64 {
        self.field.grid().length()
    }
}

/// Coupling identification g0/2 = |U(q)| / L; at q = 0 this is the mean
/// of the lattice potential.
pub fn coupling_from_potential(u: &LatticePotential, q: f64) -> f64 {
    u.fourier(q).norm() / u.length()
}

/// Interaction vertex M(q) = (g0/2) iq sqrt(1/(2 L rho omega_q)).
pub fn vertex(joint: &JointBasis, g0: f64, mode: usize) -> Complex64 {
    let m = joint.phonon.modes().modes()[mode];
    Complex64::new(0.0, 0.5 * g0 * m.q) * joint.phonon.modes().amplitude(mode)
}

/// Symmetrized electron-phonon interaction
/// H_I = sum_{k,q,sigma} [ M(q) c^dag_{k+q,sigma} c_{k,sigma} a_q + h.c. ].
/// Scattering out of the electron k-window is truncated to zero.
pub fn interaction_hamiltonian(joint: &JointBasis, g0: f64) -> Result<QOperator> {
    let dim = joint.dim();
    let mut absorb = QOperator::zeros(dim);
    let eb = &joint.electron;
    let pb = &joint.phonon;

    for (mode_idx, mode) in pb.modes().modes().iter().enumerate() {
        let m_q = vertex(joint, g0, mode_idx);
        if m_q.norm() == 0.0 {
            continue;
        }
        let a_op = ladder_operator(pb, mode_idx, LadderKind::Annihilate)?;
        // electron hops k -> k + q at fixed spin
        let mut hops: Vec<(usize, usize, f64)> = Vec::new(); // (e_row, e_col, sign)
        for e_col in 0..eb.dim() {
            let mask = eb.state(e_col);
            for (b, orb) in eb.orbitals().iter().enumerate() {
                if mask >> b & 1 == 0 {
                    continue;
                }
                if let Some(a) = eb.orbital_index(orb.n + mode.n, orb.spin) {
                    if let Some((e_row, sign)) = eb.hop(e_col, a, b) {
                        hops.push((e_row, e_col, sign));
                    }
                }
            }
        }
        for p_col in 0..pb.dim() {
            for &(p_row, amp) in a_op.column(p_col).iter() {
                for &(e_row, e_col, sign) in &hops {
                    absorb.add_element(
                        joint.compose(e_row, p_row),
                        joint.compose(e_col, p_col),
                        m_q * amp * sign,
                    );
                }
            }
        }
    }
    Ok(absorb.add(&absorb.adjoint()))
}

/// Fermi golden rule with a normalized Gaussian level broadening:
/// Gamma = 2 pi sum_f |<f|H_I|i>|^2 delta_eta(E_f - E_i).
pub fn golden_rule_rate(
    h_i: &QOperator,
    free_energies: &[f64],
    initial: usize,
    eta: f64,
) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter(format!("broadening eta = {eta}")));
    }
    let e_i = free_energies[initial];
    let norm = 1.0 / (eta * (2.0 * std::f64::consts::PI).sqrt());
    let mut rate = 0.0;
    for f in 0..h_i.dim() {
        if f == initial {
            continue;
        }
        let amp = h_i.get(f, initial);
        if amp.norm() == 0.0 {
            continue;
        }
        let de = free_energies[f] - e_i;
        rate += amp.norm_sqr() * norm * (-0.5 * (de / eta) * (de / eta)).exp();
    }
    Ok(2.0 * std::f64::consts::PI * rate)
}

/// Energy shift of an unperturbed level: exact (full diagonalization,
/// eigenvector of maximal overlap) versus second-order perturbation
/// theory.
pub fn exact_shift_vs_pt(
    h0: &QOperator,
    h_i: &QOperator,
    initial: usize,
) -> Result<(f64, f64)> {
    let dim = h0.dim();
    let e_i = h0.get(initial, initial).re;

    // second order: sum_m |<m|H_I|i>|^2 / (E_i - E_m)
    let mut pt2 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut max_amp: f64 = 0.0;
    for m in 0..dim {
        if m == initial {
            continue;
        }
        let amp = h_i.get(m, initial);
        if amp.norm() == 0.0 {
            continue;
        }
        let gap = e_i - h0.get(m, m).re;
        min_gap = min_gap.min(gap.abs());
        max_amp = max_amp.max(amp.norm());
        pt2 += amp.norm_sqr() / gap;
    }
    if min_gap < 10.0 * max_amp {
        return Err(Error::NearDegenerate {
            gap: min_gap,
            limit: 10.0 * max_amp,
        });
    }

    let h = h0.add(h_i);
    let (vals, vecs) = h.hermitian_eigen()?;
    let mut best = 0;
    let mut best_overlap = -1.0;
    for (j, _) in vals.iter().enumerate() {
        let overlap = vecs[(initial, j)].norm_sqr();
        if overlap > best_overlap {
            best_overlap = overlap;
            best = j;
        }
    }
    Ok((vals[best] - e_i, pt2))
}
