//! Second quantization of the phonon field: acoustic mode spectrum,
//! truncated Fock space, ladder operators, free Hamiltonian and the
//! position-space field operator.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Grid1D;
use crate::operators::QOperator;

/// Hard cap on enumerated basis dimensions.
pub const BASIS_DIM_LIMIT: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Integer mode index n (q = 2 pi n / L).
    pub n: i64,
    pub q: f64,
    pub omega: f64,
}

/// Selected propagating modes with their acoustic frequencies.
#[derive(Debug, Clone)]
pub struct ModeSet {
    modes: Vec<Mode>,
    rho: f64,
    length: f64,
}

impl ModeSet {
    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Amplitude sqrt(1 / (2 L rho omega)) of mode `m` in the field
    /// expansion.
    pub fn amplitude(&self, m: usize) -> f64 {
        1.0 / (2.0 * self.length * self.rho * self.modes[m].omega).sqrt()
    }
}

/// Acoustic spectrum omega_n = c_s |q_n| on the selected nonzero modes.
pub fn mode_spectrum(grid: Grid1D, c_s: f64, n_list: &[i64], rho: f64) -> Result<ModeSet> {
    if n_list.is_empty() {
        return Err(Error::EmptyModes);
    }
    let mut modes = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n == 0 {
            return Err(Error::ZeroMode);
        }
        if n.unsigned_abs() as usize >= grid.n_sites() / 2 + 1 {
            return Err(Error::ModeOutOfRange(n, grid.n_sites()));
        }
        let q = grid.wavenumber(n);
        modes.push(Mode {
            n,
            q,
            omega: c_s * q.abs(),
        });
    }
    modes.sort_by(|a, b| a.q.partial_cmp(&b.q).unwrap());
    Ok(ModeSet {
        modes,
        rho,
        length: grid.length(),
    })
}

/// Truncated bosonic occupation basis: per-mode cutoff `n_max`, optional
/// total-occupation cap, lexicographic ordering.
#[derive(Debug, Clone)]
pub struct FockBasis {
    modes: ModeSet,
    n_max: u32,
    n_total_cap: Option<u32>,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn new(modes: ModeSet, n_max: u32, n_total_cap: Option<u32>) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::BadCutoff);
        }
        let mut states = Vec::new();
        let mut occ = vec![0u32; modes.len()];
        loop {
            let total: u32 = occ.iter().sum();
            if n_total_cap.map_or(true, |cap| total <= cap) {
                states.push(occ.clone());
                if states.len() > BASIS_DIM_LIMIT {
                    return Err(Error::BasisTooLarge(states.len(), BASIS_DIM_LIMIT));
                }
            }
            // lexicographic counter over occupation digits
            let mut pos = modes.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if occ[pos] < n_max {
                    occ[pos] += 1;
                    for d in occ.iter_mut().skip(pos + 1) {
                        *d = 0;
                    }
                    break;
                }
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            modes,
            n_max,
            n_total_cap,
            states,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn occupation(&self, idx: usize) -> &[u32] {
        &self.states[idx]
    }

    pub fn index_of(&self, occ: &[u32]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    /// Index of the vacuum |0...0>.
    pub fn vacuum_index(&self) -> usize {
        self.index_of(&vec![0; self.modes.len()]).unwrap()
    }

    /// Total integer lattice momentum carried by a basis state,
    /// in units of 2 pi / L.
    pub fn momentum_index(&self, idx: usize) -> i64 {
        self.states[idx]
            .iter()
            .zip(self.modes.modes())
            .map(|(&n_occ, m)| n_occ as i64 * m.n)
            .sum()
    }

    /// Basis states unaffected by the truncation boundary: every mode
    /// occupation at most n_max - 1 (and below the total cap, if any).
    pub fn protected_indices(&self) -> Vec<usize> {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                s.iter().all(|&n| n + 1 <= self.n_max)
                    && self
                        .n_total_cap
                        .map_or(true, |cap| s.iter().sum::<u32>() + 1 <= cap)
            })
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Create,
    Annihilate,
}

/// Bosonic ladder operator of one mode. Creation out of the truncated
/// space maps to zero.
pub fn ladder_operator(basis: &FockBasis, mode: usize, kind: LadderKind) -> Result<QOperator> {
    if mode >= basis.modes().len() {
        return Err(Error::UnknownMode(mode));
    }
    let mut op = QOperator::zeros(basis.dim());
    for (col, occ) in basis.states.iter().enumerate() {
        match kind {
            LadderKind::Annihilate => {
                let n = occ[mode];
                if n > 0 {
                    let mut target = occ.clone();
                    target[mode] = n - 1;
                    if let Some(row) = basis.index_of(&target) {
                        op.add_element(row, col, Complex64::new((n as f64).sqrt(), 0.0));
                    }
                }
            }
            LadderKind::Create => {
                let n = occ[mode];
                if n < basis.n_max {
                    let mut target = occ.clone();
                    target[mode] = n + 1;
                    if let Some(row) = basis.index_of(&target) {
                        op.add_element(row, col, Complex64::new((n as f64 + 1.0).sqrt(), 0.0));
                    }
                }
            }
        }
    }
    Ok(op)
}

/// Occupation-number operator of one mode (diagonal).
pub fn number_operator(basis: &FockBasis, mode: usize) -> Result<QOperator> {
    if mode >= basis.modes().len() {
        return Err(Error::UnknownMode(mode));
    }
    let diag: Vec<f64> = basis.states.iter().map(|occ| occ[mode] as f64).collect();
    Ok(QOperator::from_diagonal(&diag))
}

/// Normal-ordered free Hamiltonian sum_q omega_q a_q^dag a_q (diagonal,
/// no zero-point term).
pub fn free_hamiltonian(basis: &FockBasis) -> QOperator {
    let diag: Vec<f64> = basis
        .states
        .iter()
        .map(|occ| {
            occ.iter()
                .zip(basis.modes().modes())
                .map(|(&n, m)| n as f64 * m.omega)
                .sum()
        })
        .collect();
    QOperator::from_diagonal(&diag)
}

/// Heisenberg-picture displacement operator
/// phi(x, t) = sum_q sqrt(1/(2 L rho omega_q))
///             [a_q e^{i(qx - omega t)} + a_q^dag e^{-i(qx - omega t)}].
pub fn field_operator(basis: &FockBasis, x: f64, t: f64) -> Result<QOperator> {
    let mut phi = QOperator::zeros(basis.dim());
    for (m, mode) in basis.modes().modes().iter().enumerate() {
        let coef = basis.modes().amplitude(m);
        let phase = Complex64::from_polar(coef, mode.q * x - mode.omega * t);
        let a = ladder_operator(basis, m, LadderKind::Annihilate)?;
        let adag = ladder_operator(basis, m, LadderKind::Create)?;
        phi = phi.add(&a.scaled(phase)).add(&adag.scaled(phase.conj()));
    }
    Ok(phi)
}

/// Truncated coherent state of a single mode (vacuum elsewhere),
/// coefficients e^{-|alpha|^2/2} alpha^n / sqrt(n!).
pub fn coherent_state(basis: &FockBasis, mode: usize, alpha: Complex64) -> Result<Vec<Complex64>> {
    if mode >= basis.modes().len() {
        return Err(Error::UnknownMode(mode));
    }
    let mut v = vec![Complex64::new(0.0, 0.0); basis.dim()];
    let norm = (-0.5 * alpha.norm_sqr()).exp();
    let mut coeff = Complex64::new(norm, 0.0);
    for n in 0..=basis.n_max {
        let mut occ = vec![0u32; basis.modes().len()];
        occ[mode] = n;
        if let Some(idx) = basis.index_of(&occ) {
            v[idx] = coeff;
        }
        coeff *= alpha / ((n as f64 + 1.0).sqrt());
    }
    Ok(v)
}

/// <v| op |v> for a normalized state vector.
pub fn expectation(op: &QOperator, v: &[Complex64]) -> Complex64 {
    op.apply(v)
        .iter()
        .zip(v)
        .map(|(w, c)| c.conj() * w)
        .sum()
}
