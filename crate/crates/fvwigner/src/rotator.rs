//! The relativistic rotator: the in-plane cyclotron degree of freedom of a
//! scalar charged particle in a homogeneous magnetic field.
//!
//! In the energy representation the Hamiltonian is diagonal with
//! `E_n = m c^2 sqrt(1 + (2n+1) b)`, `b = hbar omega_c / (m c^2)` — the star
//! square root of `1 + (2/mc^2) H_osc` evaluated on oscillator eigen-symbols
//! (the kernel's `star_sqrt` reproduces these eigenvalues; the invariant is
//! enforced in the test suite). States evolve by pure phases there, while the
//! Wigner components obey sine/cosine Moyal flows that this module integrates
//! numerically as an independent path.

use crate::free_particle::WignerComponents;
use crate::kernel::grid::{PhaseField, PhaseGrid, Representation};
use crate::kernel::star::StarEngine;
use crate::kernel::symbols::{accumulate_quasiprob, required_extent_for_levels};
use crate::{FvError, PhysicalScales, Result};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use std::sync::Arc;

/// Landau-level energies of the relativistic rotator.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatorSpectrum {
    b: f64,
    energies: Vec<f64>,
}

/// `E_n = m c^2 sqrt(1 + (2n+1) b)` for `n < count`.
///
/// `b` is passed explicitly so the degenerate limit `b = 0` can be probed
/// with any oscillator basis scale.
pub fn landau_spectrum(count: usize, b: f64, scales: &PhysicalScales) -> Result<RotatorSpectrum> {
    if count < 2 {
        return Err(FvError::Domain(format!("spectrum truncation must be >= 2, got {count}")));
    }
    if !(b >= 0.0 && b.is_finite()) {
        return Err(FvError::Domain(format!("dimensionless field b must be >= 0, got {b}")));
    }
    let mc2 = scales.rest_energy();
    let energies = (0..count)
        .map(|n| mc2 * (1.0 + (2.0 * n as f64 + 1.0) * b).sqrt())
        .collect();
    Ok(RotatorSpectrum { b, energies })
}

impl RotatorSpectrum {
    pub fn b(&self) -> f64 { self.b }
    pub fn len(&self) -> usize { self.energies.len() }
    pub fn is_empty(&self) -> bool { self.energies.is_empty() }
    pub fn energy(&self, n: usize) -> f64 { self.energies[n] }
    pub fn energies(&self) -> &[f64] { &self.energies }
}

/// The `eps_{m,n}`, `chi_{m,n}` weight matrices of a spectrum.
#[derive(Debug, Clone)]
pub struct EpsilonChiMatrix {
    eps: Array2<f64>,
    chi: Array2<f64>,
}

/// `eps_{m,n} = (E_m + E_n)/(2 sqrt(E_m E_n))`, `chi` with the difference;
/// built from energy ratios so `eps^2 - chi^2 = 1` holds to rounding.
pub fn eps_chi_matrix(spec: &RotatorSpectrum) -> EpsilonChiMatrix {
    let n = spec.len();
    let mut eps = Array2::zeros((n, n));
    let mut chi = Array2::zeros((n, n));
    for m in 0..n {
        for k in 0..n {
            let r = (spec.energy(m) / spec.energy(k)).sqrt();
            eps[(m, k)] = 0.5 * (r + 1.0 / r);
            chi[(m, k)] = 0.5 * (r - 1.0 / r);
        }
    }
    EpsilonChiMatrix { eps, chi }
}

impl EpsilonChiMatrix {
    pub fn len(&self) -> usize { self.eps.nrows() }
    pub fn is_empty(&self) -> bool { self.eps.is_empty() }
    pub fn eps(&self) -> &Array2<f64> { &self.eps }
    pub fn chi(&self) -> &Array2<f64> { &self.chi }

    /// Worst violations of the defining algebra, for diagnostics:
    /// `(max |eps_mn - eps_nm|, max |chi_mn + chi_nm|, max |eps^2 - chi^2 - 1|)`.
    pub fn algebra_defects(&self) -> (f64, f64, f64) {
        let n = self.len();
        let (mut sym, mut asym, mut unit) = (0.0f64, 0.0f64, 0.0f64);
        for m in 0..n {
            for k in 0..n {
                sym = sym.max((self.eps[(m, k)] - self.eps[(k, m)]).abs());
                asym = asym.max((self.chi[(m, k)] + self.chi[(k, m)]).abs());
                let e = self.eps[(m, k)];
                let c = self.chi[(m, k)];
                unit = unit.max(((e - c) * (e + c) - 1.0).abs());
            }
        }
        (sym, asym, unit)
    }
}

/// Two-component Fock-coefficient vector `C_{n;alpha}` of the rotator.
#[derive(Debug, Clone)]
pub struct EnergyRepState {
    pub c_plus: Array1<C64>,
    pub c_minus: Array1<C64>,
}

impl EnergyRepState {
    pub fn new(c_plus: Array1<C64>, c_minus: Array1<C64>) -> Result<Self> {
        if c_plus.len() != c_minus.len() || c_plus.len() < 2 {
            return Err(FvError::Domain("component lengths must match and be >= 2".into()));
        }
        Ok(Self { c_plus, c_minus })
    }

    /// Single-charge state from `(level, amplitude)` pairs, normalized.
    pub fn superposition(count: usize, terms: &[(usize, C64)], positive_charge: bool) -> Result<Self> {
        let mut c: Array1<C64> = Array1::zeros(count);
        for &(n, amp) in terms {
            if n >= count {
                return Err(FvError::Domain(format!("level {n} outside truncation {count}")));
            }
            c[n] += amp;
        }
        let norm = c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(FvError::Domain("empty superposition".into()));
        }
        c.mapv_inplace(|v| v / norm);
        let zero = Array1::zeros(count);
        if positive_charge {
            Self::new(c, zero)
        } else {
            Self::new(zero, c)
        }
    }

    pub fn len(&self) -> usize { self.c_plus.len() }
    pub fn is_empty(&self) -> bool { self.c_plus.is_empty() }

    /// `sum_n (|C_{n;+}|^2 - |C_{n;-}|^2)`.
    pub fn charge_norm(&self) -> f64 {
        self.c_plus.iter().map(|v| v.norm_sqr()).sum::<f64>()
            - self.c_minus.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    pub fn total_weight(&self) -> f64 {
        self.c_plus.iter().chain(self.c_minus.iter()).map(|v| v.norm_sqr()).sum()
    }

    /// Relative weight of the last retained level (truncation adequacy).
    pub fn tail_mass(&self) -> f64 {
        let n = self.len();
        let tail = self.c_plus[n - 1].norm_sqr() + self.c_minus[n - 1].norm_sqr();
        let total = self.total_weight();
        if total == 0.0 { 0.0 } else { tail / total }
    }

    /// `<a>` summed over charge components (`a` the lowering operator).
    pub fn mean_ladder(&self) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in [&self.c_plus, &self.c_minus] {
            for n in 0..self.len() - 1 {
                acc += c[n].conj() * c[n + 1] * ((n + 1) as f64).sqrt();
            }
        }
        acc
    }

    /// `<2 n + 1>` summed over charge components (dimensionless `R^2 / a^2`).
    pub fn mean_two_n_plus_one(&self) -> f64 {
        let mut acc = 0.0;
        for c in [&self.c_plus, &self.c_minus] {
            for (n, v) in c.iter().enumerate() {
                acc += (2.0 * n as f64 + 1.0) * v.norm_sqr();
            }
        }
        acc
    }
}

/// Exact evolution in the energy representation:
/// `C_{n;alpha}(t) = exp(-i alpha E_n t / hbar) C_{n;alpha}(0)`.
pub fn evolve_energy_rep(
    state: &EnergyRepState,
    spec: &RotatorSpectrum,
    t: f64,
    scales: &PhysicalScales,
) -> Result<EnergyRepState> {
    if spec.len() < state.len() {
        return Err(FvError::Domain("spectrum shorter than the state truncation".into()));
    }
    let hbar = scales.hbar;
    let mut c_plus = state.c_plus.clone();
    let mut c_minus = state.c_minus.clone();
    for n in 0..state.len() {
        let th = spec.energy(n) * t / hbar;
        c_plus[n] *= C64::new(0.0, -th).exp();
        c_minus[n] *= C64::new(0.0, th).exp();
    }
    EnergyRepState::new(c_plus, c_minus)
}

/// Wigner components of an energy-representation state:
/// `W_a^a = sum eps_{m,n} C*_{n;a} C_{m;a} T_{m,n}` and
/// `W_a^{-a} = sum chi_{m,n} C*_{n;a} C_{m;-a} T_{m,n}`.
pub fn wigner_energy_rep(
    state: &EnergyRepState,
    em: &EpsilonChiMatrix,
    grid: &Arc<PhaseGrid>,
    scales: &PhysicalScales,
) -> Result<WignerComponents> {
    let n = state.len();
    if em.len() < n {
        return Err(FvError::Domain("eps/chi matrices shorter than the state".into()));
    }
    if state.tail_mass() > 1e-12 {
        return Err(FvError::TruncationInadequate { tail: state.tail_mass(), suggested: n * 2 });
    }
    let required = required_extent_for_levels(n, scales)?;
    let a = scales.osc_length()?;
    if grid.q_extent() < required || grid.p_extent() * a * a / scales.hbar < required {
        return Err(FvError::UnderResolvedGrid { required_extent: required });
    }
    let coeff = |weights: &Array2<f64>, bra: &Array1<C64>, ket: &Array1<C64>| {
        let mut c: Array2<C64> = Array2::zeros((n, n));
        for m in 0..n {
            for k in 0..n {
                c[(m, k)] = ket[m] * bra[k].conj() * weights[(m, k)];
            }
        }
        c
    };
    let even_plus = accumulate_quasiprob(&coeff(&em.eps, &state.c_plus, &state.c_plus), grid, scales)?;
    let even_minus = accumulate_quasiprob(&coeff(&em.eps, &state.c_minus, &state.c_minus), grid, scales)?;
    let odd_plus = accumulate_quasiprob(&coeff(&em.chi, &state.c_plus, &state.c_minus), grid, scales)?;
    let odd_minus = accumulate_quasiprob(&coeff(&em.chi, &state.c_minus, &state.c_plus), grid, scales)?;
    Ok(WignerComponents { even_plus, even_minus, odd_plus, odd_minus })
}

/// Report of a Moyal integration run.
#[derive(Debug, Clone, Copy)]
pub struct MoyalReport {
    pub steps: usize,
    pub dt: f64,
    /// Conservative bound on the fastest angular frequency in the flows.
    pub omega_bound: f64,
    pub star_products: usize,
}

/// Numerical integration of the Moyal flows for all four components:
/// even components follow the star-commutator (sine) flow, odd components
/// the star-anticommutator (cosine) flow. Fixed-step 4th-order Runge–Kutta;
/// the odd rest-energy rotation `exp(2 i alpha m c^2 t / hbar)` is factored
/// out analytically (constants are star-central), which keeps the stepped
/// frequencies at the oscillator scale.
pub fn evolve_moyal_rotator(
    w: &WignerComponents,
    symbol_e: &PhaseField,
    t: f64,
    steps: usize,
    scales: &PhysicalScales,
) -> Result<(WignerComponents, MoyalReport)> {
    let grid = w.grid().clone();
    if symbol_e.grid() != &grid {
        return Err(FvError::GridMismatch);
    }
    grid.require_star_capable()?;
    if symbol_e.max_imag() > 1e-10 * symbol_e.peak() {
        return Err(FvError::Domain("energy symbol must be real".into()));
    }
    let hbar = scales.hbar;
    let mc2 = scales.rest_energy();
    let (e_min, e_max) = symbol_e
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.re), hi.max(v.re)));
    // even flow frequencies <= (E_max - E_min)/hbar; odd flow after the
    // rest-energy shift <= 2 max|E - mc^2|/hbar
    let omega_bound = ((e_max - e_min) / hbar)
        .max(2.0 * (e_max - mc2).abs().max((e_min - mc2).abs()) / hbar);
    if steps == 0 || (t != 0.0 && t.abs() / steps as f64 * omega_bound > 1.0) {
        let required = (t.abs() * omega_bound).ceil() as usize + 1;
        return Err(FvError::StepBound { steps, required });
    }
    let dt = t / steps as f64;
    let mut engine = StarEngine::new(grid.clone())?;
    let mut products = 0usize;

    // even: real field, dW/dt = (2 alpha / hbar) Im(E * W)
    let mut evolve_even = |field: &PhaseField, alpha: f64| -> Result<PhaseField> {
        let mut wr = field.values().mapv(|v| C64::new(v.re, 0.0));
        let mut rhs = |cur: &Array2<C64>| -> Result<Array2<C64>> {
            let f = PhaseField::from_values(grid.clone(), cur.clone(), Representation::Direct)?;
            let ew = engine.product(symbol_e, &f)?;
            products += 1;
            Ok(ew.values().mapv(|v| C64::new(2.0 * alpha / hbar * v.im, 0.0)))
        };
        for _ in 0..steps {
            let k1 = rhs(&wr)?;
            let k2 = rhs(&(&wr + &(&k1 * C64::from(dt / 2.0))))?;
            let k3 = rhs(&(&wr + &(&k2 * C64::from(dt / 2.0))))?;
            let k4 = rhs(&(&wr + &(&k3 * C64::from(dt))))?;
            wr = &wr + &((&k1 + &(&k2 * C64::from(2.0)) + &(&k3 * C64::from(2.0)) + &k4) * C64::from(dt / 6.0));
        }
        PhaseField::from_values(grid.clone(), wr, Representation::Direct)
    };
    let even_plus = evolve_even(&w.even_plus, 1.0)?;
    let even_minus = evolve_even(&w.even_minus, -1.0)?;

    // odd: complex field V in the frame rotating at 2 alpha mc^2 / hbar,
    // dV/dt = (i alpha / hbar)(E' * V + V * E'), E' = E - mc^2
    let e_shift = {
        let v = symbol_e.values().mapv(|z| z - C64::from(mc2));
        PhaseField::from_values(grid.clone(), v, Representation::Direct)?
    };
    let mut evolve_odd = |field: &PhaseField, alpha: f64| -> Result<PhaseField> {
        if field.peak() == 0.0 {
            return Ok(field.clone());
        }
        let mut v = field.values().clone();
        let mut rhs = |cur: &Array2<C64>| -> Result<Array2<C64>> {
            let f = PhaseField::from_values(grid.clone(), cur.clone(), Representation::Direct)?;
            let ev = engine.product(&e_shift, &f)?;
            let fc = PhaseField::from_values(grid.clone(), cur.mapv(|z| z.conj()), Representation::Direct)?;
            let evc = engine.product(&e_shift, &fc)?;
            products += 2;
            // V * E' = conj(E' * conj(V)) for real E'
            let mut out = Array2::zeros(cur.dim());
            for ((i, j), o) in out.indexed_iter_mut() {
                let anti = ev.values()[(i, j)] + evc.values()[(i, j)].conj();
                *o = C64::new(0.0, alpha / hbar) * anti;
            }
            Ok(out)
        };
        for _ in 0..steps {
            let k1 = rhs(&v)?;
            let k2 = rhs(&(&v + &(&k1 * C64::from(dt / 2.0))))?;
            let k3 = rhs(&(&v + &(&k2 * C64::from(dt / 2.0))))?;
            let k4 = rhs(&(&v + &(&k3 * C64::from(dt))))?;
            v = &v + &((&k1 + &(&k2 * C64::from(2.0)) + &(&k3 * C64::from(2.0)) + &k4) * C64::from(dt / 6.0));
        }
        let phase = C64::new(0.0, 2.0 * alpha * mc2 * t / hbar).exp();
        PhaseField::from_values(grid.clone(), v.mapv(|z| z * phase), Representation::Direct)
    };
    let odd_plus = evolve_odd(&w.odd_plus, 1.0)?;
    let odd_minus = evolve_odd(&w.odd_minus, -1.0)?;

    Ok((
        WignerComponents { even_plus, even_minus, odd_plus, odd_minus },
        MoyalReport { steps, dt, omega_bound, star_products: products },
    ))
}

/// `<R^2>` of a state, `R^2 = q^2 + p^2/(m omega_c)^2`: equals
/// `a^2 sum (2n+1) |C_n|^2` summed over charge components.
pub fn radius_sq_state(state: &EnergyRepState, scales: &PhysicalScales) -> Result<f64> {
    let a = scales.osc_length()?;
    Ok(a * a * state.mean_two_n_plus_one())
}

/// `<R^2>` from the even Wigner components by phase-space integration
/// against the classical `R^2` symbol.
pub fn radius_sq_field(w: &WignerComponents, scales: &PhysicalScales) -> Result<f64> {
    scales.osc_length()?; // needs omega_c > 0
    let inv = 1.0 / (scales.mass * scales.omega_c);
    let grid = w.grid();
    let mut acc = 0.0;
    for i in 0..grid.n_p() {
        let p = grid.p(i);
        for j in 0..grid.n_q() {
            let q = grid.q(j);
            let r2 = q * q + p * p * inv * inv;
            acc += r2 * (w.even_plus.values()[(i, j)].re + w.even_minus.values()[(i, j)].re);
        }
    }
    Ok(acc * grid.cell())
}

/// `<R^2>` measured about a position-shifted reference point
/// `(q_offset, 0)`: `<(q - q_offset)^2 + p^2/(m omega_c)^2>`. The
/// origin-centered `<R^2>` commutes with the rotator Hamiltonian and is a
/// constant of motion, so time dependence of the orbit radius is observed
/// against a displaced reference, where the circling packet center enters
/// through `<q>(t)`.
pub fn radius_sq_state_offset(
    state: &EnergyRepState,
    q_offset: f64,
    scales: &PhysicalScales,
) -> Result<f64> {
    let a = scales.osc_length()?;
    let mean_q = 2.0f64.sqrt() * a * state.mean_ladder().re;
    Ok(a * a * state.mean_two_n_plus_one() + q_offset * q_offset - 2.0 * q_offset * mean_q)
}

/// Phase-space radius of the mean: `<q>^2 + <p>^2/(m omega_c)^2 = 2 a^2 |<a>|^2`.
pub fn radius_sq_of_mean(state: &EnergyRepState, scales: &PhysicalScales) -> Result<f64> {
    let a = scales.osc_length()?;
    Ok(2.0 * a * a * state.mean_ladder().norm_sqr())
}
