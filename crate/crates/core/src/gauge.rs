//! Gauge machinery for local translations: the symmetric tensor potential,
//! covariant derivatives, linearized field strength, gauge transformations
//! and numerical covariance checks.

use crate::error::Result;
use crate::lattice::{ScalarField, SpinorField};

/// Symmetric second-rank potential in 1+1 dimensions. Only the upper
/// triangle is stored, so R_{mu nu} = R_{nu mu} holds structurally.
#[derive(Debug, Clone)]
pub struct ElasticTensorField {
    r00: ScalarField,
    r01: ScalarField,
    r11: ScalarField,
}

impl ElasticTensorField {
    pub fn new(r00: ScalarField, r01: ScalarField, r11: ScalarField) -> Result<Self> {
        r00.grid().same_grid(&r01.grid())?;
        r00.grid().same_grid(&r11.grid())?;
        Ok(Self { r00, r01, r11 })
    }

    pub fn zeros(grid: crate::lattice::Grid1D) -> Self {
        Self {
            r00: ScalarField::zeros(grid),
            r01: ScalarField::zeros(grid),
            r11: ScalarField::zeros(grid),
        }
    }

    pub fn grid(&self) -> crate::lattice::Grid1D {
        self.r00.grid()
    }

    pub fn r00(&self) -> &ScalarField {
        &self.r00
    }

    /// The off-diagonal component R = R_01 = R_10 (the phonon field).
    pub fn r01(&self) -> &ScalarField {
        &self.r01
    }

    /// The space-space component R_x = R_11 (the static strain field).
    pub fn r11(&self) -> &ScalarField {
        &self.r11
    }

    pub fn component(&self, mu: usize, nu: usize) -> &ScalarField {
        match (mu, nu) {
            (0, 0) => &self.r00,
            (0, 1) | (1, 0) => &self.r01,
            (1, 1) => &self.r11,
            _ => panic!("index out of range in 1+1 dimensions"),
        }
    }
}

/// Gauge parameter a_mu(x) for a local translation delta_a = eps * a.
#[derive(Debug, Clone)]
pub struct GaugeParameter {
    pub a0: ScalarField,
    pub a1: ScalarField,
}

impl GaugeParameter {
    pub fn space_only(a1: ScalarField) -> Self {
        let a0 = ScalarField::zeros(a1.grid());
        Self { a0, a1 }
    }
}

/// Couplings of the theory; g0 = c_s * g is derived, never stored.
#[derive(Debug, Clone, Copy)]
pub struct CouplingConstants {
    pub g: f64,
    pub c_s: f64,
    pub m_star: f64,
    pub rho: f64,
}

impl CouplingConstants {
    pub fn new(g: f64, c_s: f64, m_star: f64, rho: f64) -> Result<Self> {
        if !(c_s > 0.0) || !(m_star > 0.0) || !(rho > 0.0) {
            return Err(crate::error::Error::InvalidParameter(format!(
                "need c_s, m_star, rho > 0 (got {c_s}, {m_star}, {rho})"
            )));
        }
        Ok(Self { g, c_s, m_star, rho })
    }

    /// Time-sector coupling g0 = c_s g.
    pub fn g0(&self) -> f64 {
        self.c_s * self.g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Time,
    Space,
}

/// First-order local translation of the wavefunction,
/// psi' = [1 - i delta_a p] psi = psi - delta_a d_x psi.
pub fn translate_wavefunction(psi: &SpinorField, delta_a: &ScalarField) -> Result<SpinorField> {
    psi.grid().same_grid(&delta_a.grid())?;
    let dpsi = psi.central_derivative();
    let mut out = psi.clone();
    for ((o, d), &a) in out
        .values_mut()
        .iter_mut()
        .zip(dpsi.values())
        .zip(delta_a.values())
    {
        o[0] -= a * d[0];
        o[1] -= a * d[1];
    }
    Ok(out)
}

/// R'_{mu nu} = R_{mu nu} - d_mu a_nu - d_nu a_mu for a static gauge
/// parameter (all time derivatives zero).
pub fn gauge_transform(r: &ElasticTensorField, a: &GaugeParameter) -> Result<ElasticTensorField> {
    r.grid().same_grid(&a.a0.grid())?;
    r.grid().same_grid(&a.a1.grid())?;
    let da0 = a.a0.central_derivative();
    let da1 = a.a1.central_derivative();
    // static: d_0 a_mu = 0
    let r00 = r.r00.clone();
    let r01 = r.r01.sub(&da0)?;
    let r11 = r.r11.sub(&da1.scaled(2.0))?;
    ElasticTensorField::new(r00, r01, r11)
}

/// Gauge-covariant derivative pieces in the 1D gauge-fixed theory.
///
/// `Space` returns (1 - g R_x) d_x psi; `Time` returns only the potential
/// term -g0 R d_x psi (the caller owns d_t psi).
pub fn covariant_derivative(
    psi: &SpinorField,
    r: &ElasticTensorField,
    c: &CouplingConstants,
    direction: Direction,
) -> Result<SpinorField> {
    psi.grid().same_grid(&r.grid())?;
    let dpsi = psi.central_derivative();
    let mut out = dpsi.clone();
    match direction {
        Direction::Space => {
            for (o, &rx) in out.values_mut().iter_mut().zip(r.r11.values()) {
                let f = 1.0 - c.g * rx;
                o[0] *= f;
                o[1] *= f;
            }
        }
        Direction::Time => {
            let g0 = c.g0();
            for (o, &r01) in out.values_mut().iter_mut().zip(r.r01.values()) {
                let f = -g0 * r01;
                o[0] *= f;
                o[1] *= f;
            }
        }
    }
    Ok(out)
}

/// The two independent components G_{01 beta} of the linearized field
/// strength, G_{mu nu beta} = d_mu R_{nu beta} - d_nu R_{mu beta} with
/// d_0 = (1/c_s) d_t. Antisymmetry in (mu, nu) is structural.
#[derive(Debug, Clone)]
pub struct FieldStrengthLinear {
    pub g010: ScalarField,
    pub g011: ScalarField,
}

impl FieldStrengthLinear {
    /// G_{mu nu beta} with the sign implied by antisymmetry.
    pub fn component(&self, mu: usize, nu: usize, beta: usize) -> ScalarField {
        let base = if beta == 0 { &self.g010 } else { &self.g011 };
        match (mu, nu) {
            (0, 1) => base.clone(),
            (1, 0) => base.scaled(-1.0),
            _ => ScalarField::zeros(base.grid()),
        }
    }
}

pub fn field_strength_linear(
    r: &ElasticTensorField,
    dr_dt: &ElasticTensorField,
    c_s: f64,
) -> Result<FieldStrengthLinear> {
    r.grid().same_grid(&dr_dt.grid())?;
    // G_{01b} = (1/c_s) d_t R_{1b} - d_x R_{0b}
    let g010 = dr_dt.r01().scaled(1.0 / c_s).sub(&r.r00().central_derivative())?;
    let g011 = dr_dt.r11().scaled(1.0 / c_s).sub(&r.r01().central_derivative())?;
    Ok(FieldStrengthLinear { g010, g011 })
}

/// Residual of the first-order covariance identity D'_x psi' = tau(delta_a) D_x psi
/// under the space-only translation delta_a = eps * a_1.
///
/// The potential shifts at first order as
///   g dR_x = -(1 - g R_x) d_x(delta_a) - g delta_a d_x R_x,
/// which reduces to R'_x = R_x - (1/g) d_x(delta_a) on a flat background.
/// The returned grid 2-norm is O(eps^2) (plus an eps * dx^2 stencil floor).
pub fn covariance_residual(
    psi: &SpinorField,
    r: &ElasticTensorField,
    a: &GaugeParameter,
    eps: f64,
    c: &CouplingConstants,
) -> Result<f64> {
    let delta_a = a.a1.scaled(eps);
    let psi_t = translate_wavefunction(psi, &delta_a)?;

    // shifted potential
    let d_delta = delta_a.central_derivative();
    let drx = r.r11().central_derivative();
    let rx_values: Vec<f64> = r
        .r11()
        .values()
        .iter()
        .zip(d_delta.values())
        .zip(delta_a.values().iter().zip(drx.values()))
        .map(|((&rx, &dd), (&da, &dr))| {
            rx + (-(1.0 - c.g * rx) * dd - c.g * da * dr) / c.g
        })
        .collect();
    let rx_shifted = ScalarField::from_values(r.grid(), rx_values)?;
    let r_shifted = ElasticTensorField::new(r.r00().clone(), r.r01().clone(), rx_shifted)?;

    let lhs = covariant_derivative(&psi_t, &r_shifted, c, Direction::Space)?;
    let d_free = covariant_derivative(psi, r, c, Direction::Space)?;
    let rhs = translate_wavefunction(&d_free, &delta_a)?;
    lhs.distance(&rhs)
}

/// Commutator of the two gauge-potential applications on a test
/// wavefunction: W_t(W_x psi) - W_x(W_t psi), the nonlinear piece of the
/// field strength acting as an operator.
pub fn potential_commutator(
    psi: &SpinorField,
    r: &ElasticTensorField,
    c: &CouplingConstants,
) -> Result<SpinorField> {
    let w_space = |f: &SpinorField| -> Result<SpinorField> {
        let df = f.central_derivative();
        let mut out = df;
        for (o, &rx) in out.values_mut().iter_mut().zip(r.r11().values()) {
            let fac = -c.g * rx;
            o[0] *= fac;
            o[1] *= fac;
        }
        Ok(out)
    };
    let w_time = |f: &SpinorField| -> Result<SpinorField> {
        let df = f.central_derivative();
        let mut out = df;
        for (o, &r01) in out.values_mut().iter_mut().zip(r.r01().values()) {
            let fac = -c.g0() * r01;
            o[0] *= fac;
            o[1] *= fac;
        }
        Ok(out)
    };
    w_time(&w_space(psi)?)?.sub(&w_space(&w_time(psi)?)?)
}

/// Expectation of the symmetrized interaction density,
/// integral of -(g0/2) (d_x R) psi^dag psi.
pub fn symmetrized_interaction_expectation(
    psi: &SpinorField,
    r: &ElasticTensorField,
    c: &CouplingConstants,
) -> Result<num_complex::Complex64> {
    psi.grid().same_grid(&r.grid())?;
    let dr = r.r01().central_derivative();
    let dx = psi.grid().dx();
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for (v, &d) in psi.values().iter().zip(dr.values()) {
        let density = v[0].conj() * v[0] + v[1].conj() * v[1];
        acc += density * (-0.5 * c.g0() * d);
    }
    Ok(acc * dx)
}
