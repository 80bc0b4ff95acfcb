//! Even/odd Wigner components of free scalar charged particles and their
//! exact quantum Liouville evolution.
//!
//! States are two-component momentum-space wavefunctions `psi_alpha(p)` with
//! the charge index `alpha = +-1` (the representation in which the free
//! Hamiltonian is diagonal with eigenvalues `+-E(p)`). The four Wigner
//! components come from the `(p, P)` kernel
//!
//!   `W_a^b(p, q) = (1/2 pi hbar) int f(p+P/2, p-P/2)
//!                    psi_a^*(p+P/2) psi^b(p-P/2) e^{-i P q/hbar} dP`
//!
//! with `f = epsilon` on the charge diagonal and `f = chi` off it. On the
//! momentum grid the `P` integral is a centered FFT, and the evolution is an
//! exact phase multiplication in the mixed `(p, k)` representation, where
//! `p +- hbar k/2` lands back on grid points by construction.

use crate::kernel::fft::CenteredFft;
use crate::kernel::grid::{PhaseField, PhaseGrid, Representation};
use crate::{FvError, PhysicalScales, Result};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Relativistic free-particle energy `E(p) = sqrt(m^2 c^4 + p^2 c^2)`.
pub fn energy_free(p: f64, scales: &PhysicalScales) -> f64 {
    (scales.mass * scales.c * scales.c).hypot(p * scales.c)
}

/// The even/odd kernel weights of the momentum-pair `(p1, p2)`:
/// `eps = (E1+E2)/(2 sqrt(E1 E2))`, `chi = (E1-E2)/(2 sqrt(E1 E2))`.
///
/// Computed from the ratio `r = sqrt(E1/E2)` so that `eps^2 - chi^2 = 1`
/// holds to rounding even for extreme momenta.
pub fn epsilon_chi(p1: f64, p2: f64, scales: &PhysicalScales) -> (f64, f64) {
    let r = (energy_free(p1, scales) / energy_free(p2, scales)).sqrt();
    (0.5 * (r + 1.0 / r), 0.5 * (r - 1.0 / r))
}

/// Uniform centered momentum axis (the `p` axis of the induced phase grid).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumAxis {
    n: usize,
    extent: f64,
}

impl MomentumAxis {
    pub fn new(n: usize, extent: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(FvError::InvalidGrid(format!("momentum axis size must be a power of two >= 8, got {n}")));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(FvError::InvalidGrid(format!("momentum extent must be positive, got {extent}")));
        }
        Ok(Self { n, extent })
    }

    pub fn n(&self) -> usize { self.n }
    pub fn extent(&self) -> f64 { self.extent }
    pub fn dp(&self) -> f64 { 2.0 * self.extent / self.n as f64 }
    pub fn p(&self, i: usize) -> f64 { (i as f64 - self.n as f64 / 2.0) * self.dp() }

    /// The phase grid induced by this axis: `n x n`, with the `q` axis dual
    /// to the doubled-spacing `P` integration grid (`dq = pi hbar / (n dp)`).
    pub fn induced_grid(&self, scales: &PhysicalScales) -> Result<Arc<PhaseGrid>> {
        let dq = PI * scales.hbar / (self.n as f64 * self.dp());
        PhaseGrid::new(self.n, self.n, self.extent, 0.5 * self.n as f64 * dq, scales)
    }
}

/// Two-component momentum-space wavefunction; `alpha = +1` stored first.
#[derive(Debug, Clone)]
pub struct FvState {
    axis: MomentumAxis,
    pub psi_plus: Array1<C64>,
    pub psi_minus: Array1<C64>,
}

impl FvState {
    pub fn new(axis: MomentumAxis, psi_plus: Array1<C64>, psi_minus: Array1<C64>) -> Result<Self> {
        if psi_plus.len() != axis.n() || psi_minus.len() != axis.n() {
            return Err(FvError::InvalidGrid("component length does not match the axis".into()));
        }
        if psi_plus.iter().chain(psi_minus.iter()).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(FvError::Domain("non-finite wavefunction samples".into()));
        }
        Ok(Self { axis, psi_plus, psi_minus })
    }

    /// Gaussian packet `exp(-(p-p0)^2/(4 sigma^2))` in one charge component,
    /// normalized to unit charge norm.
    pub fn gaussian(axis: MomentumAxis, p0: f64, sigma_p: f64, positive_charge: bool) -> Result<Self> {
        let mut psi = Array1::zeros(axis.n());
        for i in 0..axis.n() {
            let p = axis.p(i);
            psi[i] = C64::from((-(p - p0) * (p - p0) / (4.0 * sigma_p * sigma_p)).exp());
        }
        let norm: f64 = psi.iter().map(|v: &C64| v.norm_sqr()).sum::<f64>() * axis.dp();
        psi.mapv_inplace(|v| v / norm.sqrt());
        let zero = Array1::zeros(axis.n());
        if positive_charge {
            Self::new(axis, psi, zero)
        } else {
            Self::new(axis, zero, psi)
        }
    }

    /// Equal-weight superposition of two Gaussian packets in `psi_plus`.
    pub fn two_packet(axis: MomentumAxis, p1: f64, p2: f64, sigma_p: f64) -> Result<Self> {
        let mut psi = Array1::zeros(axis.n());
        for i in 0..axis.n() {
            let p = axis.p(i);
            let g1 = (-(p - p1) * (p - p1) / (4.0 * sigma_p * sigma_p)).exp();
            let g2 = (-(p - p2) * (p - p2) / (4.0 * sigma_p * sigma_p)).exp();
            psi[i] = C64::from(g1 + g2);
        }
        let norm: f64 = psi.iter().map(|v: &C64| v.norm_sqr()).sum::<f64>() * axis.dp();
        psi.mapv_inplace(|v| v / norm.sqrt());
        let zero = Array1::zeros(axis.n());
        Self::new(axis, psi, zero)
    }

    pub fn axis(&self) -> &MomentumAxis { &self.axis }

    pub fn norm_plus(&self) -> f64 {
        self.psi_plus.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.axis.dp()
    }

    pub fn norm_minus(&self) -> f64 {
        self.psi_minus.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.axis.dp()
    }

    /// Charge norm `<psi_+|psi_+> - <psi_-|psi_->`.
    pub fn charge_norm(&self) -> f64 {
        self.norm_plus() - self.norm_minus()
    }

    /// Largest boundary sample relative to the peak, over both components.
    pub fn boundary_ratio(&self) -> f64 {
        let n = self.axis.n();
        let peak = self
            .psi_plus
            .iter()
            .chain(self.psi_minus.iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let edge = [&self.psi_plus, &self.psi_minus]
            .iter()
            .flat_map(|psi| [psi[0].norm(), psi[n - 1].norm()])
            .fold(0.0, f64::max);
        edge / peak
    }
}

/// The four charge-resolved Wigner components.
///
/// `even_plus = W_+^+`, `even_minus = W_-^-` (real), `odd_plus = W_+^-`,
/// `odd_minus = W_-^+` (off-diagonal, `conj(W_+^-) = -W_-^+`).
#[derive(Debug, Clone)]
pub struct WignerComponents {
    pub even_plus: PhaseField,
    pub even_minus: PhaseField,
    pub odd_plus: PhaseField,
    pub odd_minus: PhaseField,
}

impl WignerComponents {
    pub fn grid(&self) -> &Arc<PhaseGrid> {
        self.even_plus.grid()
    }

    /// `sum_alpha alpha * integral W_alpha^alpha dp dq`.
    pub fn charge_norm(&self) -> f64 {
        (self.even_plus.integrate() - self.even_minus.integrate()).re
    }

    /// Largest imaginary part of the even components relative to their peak.
    pub fn reality_defect(&self) -> f64 {
        let peak = self.even_plus.peak().max(self.even_minus.peak());
        if peak == 0.0 {
            return 0.0;
        }
        self.even_plus.max_imag().max(self.even_minus.max_imag()) / peak
    }

    /// Max pointwise `|conj(W_+^-) + W_-^+|` relative to the odd peak.
    pub fn antisymmetry_defect(&self) -> f64 {
        let peak = self.odd_plus.peak().max(self.odd_minus.peak());
        if peak == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for (a, b) in self.odd_plus.values().iter().zip(self.odd_minus.values().iter()) {
            worst = worst.max((a.conj() + b).norm());
        }
        worst / peak
    }

    /// Sum of all four components (the full Wigner function).
    pub fn total(&self) -> PhaseField {
        let mut v = self.even_plus.values().clone();
        v += self.even_minus.values();
        v += self.odd_plus.values();
        v += self.odd_minus.values();
        PhaseField::from_values(self.grid().clone(), v, Representation::Direct).unwrap()
    }
}

const BOUNDARY_CONTRACT: f64 = 1e-10;

fn kernel_component(
    state: &FvState,
    weight: impl Fn(f64, f64) -> f64,
    bra_plus: bool,
    ket_plus: bool,
    grid: &Arc<PhaseGrid>,
    fft: &mut CenteredFft,
    scales: &PhysicalScales,
) -> Result<PhaseField> {
    let n = state.axis.n();
    let dp = state.axis.dp();
    let bra = if bra_plus { &state.psi_plus } else { &state.psi_minus };
    let ket = if ket_plus { &state.psi_plus } else { &state.psi_minus };
    let mut values: Array2<C64> = Array2::zeros((n, n));
    let scale = 2.0 * dp / (2.0 * PI * scales.hbar);
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        let p = state.axis.p(i);
        for (t, slot) in buf.iter_mut().enumerate() {
            let j = t as isize - (n / 2) as isize;
            let hi = i as isize + j;
            let lo = i as isize - j;
            *slot = if hi >= 0 && hi < n as isize && lo >= 0 && lo < n as isize {
                let shift = j as f64 * dp;
                let f = weight(p + shift, p - shift);
                bra[hi as usize].conj() * ket[lo as usize] * f
            } else {
                C64::new(0.0, 0.0)
            };
        }
        // P -> q: the e^{-i P q / hbar} sum is the centered forward transform
        fft.forward(&mut buf);
        for (l, v) in buf.iter().enumerate() {
            values[(i, l)] = v * scale;
        }
    }
    PhaseField::from_values(grid.clone(), values, Representation::Direct)
}

/// All four Wigner components of a state, on the induced phase grid.
pub fn wigner_components(state: &FvState, scales: &PhysicalScales) -> Result<WignerComponents> {
    let br = state.boundary_ratio();
    if br > BOUNDARY_CONTRACT {
        return Err(FvError::Domain(format!(
            "state boundary samples are {br:.3e} of the peak; the transform needs <= {BOUNDARY_CONTRACT:.0e}"
        )));
    }
    let grid = state.axis.induced_grid(scales)?;
    let mut fft = CenteredFft::new();
    let eps = |p1: f64, p2: f64| epsilon_chi(p1, p2, scales).0;
    let chi = |p1: f64, p2: f64| epsilon_chi(p1, p2, scales).1;
    Ok(WignerComponents {
        even_plus: kernel_component(state, eps, true, true, &grid, &mut fft, scales)?,
        even_minus: kernel_component(state, eps, false, false, &grid, &mut fft, scales)?,
        odd_plus: kernel_component(state, chi, true, false, &grid, &mut fft, scales)?,
        odd_minus: kernel_component(state, chi, false, true, &grid, &mut fft, scales)?,
    })
}

/// Exact propagation of the components for time `t` under the dispersion
/// `energy(p)`; even and odd pairs evolve by pure phases in the mixed
/// representation.
pub fn evolve_with_energy(
    w: &WignerComponents,
    t: f64,
    scales: &PhysicalScales,
    energy: &dyn Fn(f64) -> f64,
) -> WignerComponents {
    let grid = w.grid().clone();
    let hbar = scales.hbar;
    let mut fft = CenteredFft::new();
    let mut evolve = |field: &PhaseField, even: bool, alpha: f64| -> PhaseField {
        let mut mixed = field.to_mixed_with(&mut fft);
        for i in 0..grid.n_p() {
            let p = grid.p(i);
            for tix in 0..grid.n_q() {
                let half_k = 0.5 * hbar * grid.k(tix);
                let (e1, e2) = (energy(p + half_k), energy(p - half_k));
                let phase = if even {
                    -alpha * (e1 - e2) * t / hbar
                } else {
                    alpha * (e1 + e2) * t / hbar
                };
                let v = mixed.values_mut();
                v[(i, tix)] *= C64::new(0.0, phase).exp();
            }
        }
        mixed.to_direct_with(&mut fft)
    };
    WignerComponents {
        even_plus: evolve(&w.even_plus, true, 1.0),
        even_minus: evolve(&w.even_minus, true, -1.0),
        odd_plus: evolve(&w.odd_plus, false, 1.0),
        odd_minus: evolve(&w.odd_minus, false, -1.0),
    }
}

/// Exact free evolution with the relativistic dispersion.
pub fn evolve_free(w: &WignerComponents, t: f64, scales: &PhysicalScales) -> WignerComponents {
    evolve_with_energy(w, t, scales, &|p| energy_free(p, scales))
}

/// Phase-space moments `integral p^kp q^kq W dp dq` of the four components.
#[derive(Debug, Clone, Copy)]
pub struct MomentReport {
    pub even_plus: C64,
    pub even_minus: C64,
    pub odd_plus: C64,
    pub odd_minus: C64,
}

impl MomentReport {
    pub fn total(&self) -> C64 {
        self.even_plus + self.even_minus + self.odd_plus + self.odd_minus
    }
}

pub const MAX_MOMENT_ORDER: usize = 4;

/// Moments of the components; the first `q` moment of the even part is the
/// mean position in the Newton–Wigner sense.
pub fn moments(w: &WignerComponents, k_p: usize, k_q: usize) -> Result<MomentReport> {
    if k_p > MAX_MOMENT_ORDER || k_q > MAX_MOMENT_ORDER {
        return Err(FvError::MomentOrder { order: k_p.max(k_q), boundary: f64::NAN });
    }
    // the weighted integrand must still decay at the edges
    let g = w.grid();
    let weight_edge = g.p_extent().powi(k_p as i32) * g.q_extent().powi(k_q as i32);
    let peak = w.even_plus.peak().max(w.even_minus.peak());
    let edge = w.even_plus.boundary_ratio().max(w.even_minus.boundary_ratio()) * peak;
    if peak > 0.0 && edge * weight_edge > 1e-8 * peak {
        return Err(FvError::MomentOrder { order: k_p.max(k_q), boundary: edge * weight_edge / peak });
    }
    Ok(MomentReport {
        even_plus: w.even_plus.weighted_integral(k_p as u32, k_q as u32),
        even_minus: w.even_minus.weighted_integral(k_p as u32, k_q as u32),
        odd_plus: w.odd_plus.weighted_integral(k_p as u32, k_q as u32),
        odd_minus: w.odd_minus.weighted_integral(k_p as u32, k_q as u32),
    })
}

/// `integral W_alpha^beta dq` for every `p` (a vector over the `p` axis).
pub fn q_marginal(field: &PhaseField) -> Array1<C64> {
    let g = field.grid();
    let mut out = Array1::zeros(g.n_p());
    for i in 0..g.n_p() {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..g.n_q() {
            acc += field.values()[(i, j)];
        }
        out[i] = acc * g.dq();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn scales() -> PhysicalScales {
        PhysicalScales::canonical(0.0).unwrap()
    }

    fn axis() -> MomentumAxis {
        MomentumAxis::new(256, 8.0).unwrap()
    }

    #[test]
    fn energy_values() {
        let s = scales();
        assert!((energy_free(0.0, &s) - 1.0).abs() < 1e-15);
        assert!((energy_free(3.0f64.sqrt(), &s) - 2.0).abs() < 1e-14);
        let big = 1e6;
        assert!((energy_free(big, &s) / big - 1.0).abs() < 1e-9);
    }

    #[test]
    fn epsilon_chi_values() {
        let s = scales();
        let (e, c) = epsilon_chi(0.7, 0.7, &s);
        assert!((e - 1.0).abs() < 1e-15 && c.abs() < 1e-15);
        // E1 = mc^2, E2 = 2 mc^2: eps = 3/(2 sqrt2), chi = -1/(2 sqrt2)
        let p2 = 3.0f64.sqrt();
        let (e, c) = epsilon_chi(0.0, p2, &s);
        assert!((e - 3.0 / (2.0 * 2.0f64.sqrt())).abs() < 1e-14);
        assert!((c + 1.0 / (2.0 * 2.0f64.sqrt())).abs() < 1e-14);
        // symmetry / antisymmetry
        let (e1, c1) = epsilon_chi(1.3, -0.4, &s);
        let (e2, c2) = epsilon_chi(-0.4, 1.3, &s);
        assert!((e1 - e2).abs() < 1e-15 && (c1 + c2).abs() < 1e-15);
    }

    #[test]
    fn narrow_packet_matches_gaussian_wigner() {
        // sigma_p = 0.01 mc: relative deviation from the scalar Gaussian
        // Wigner function is O((sigma_p/mc)^2)
        let s = scales();
        let ax = MomentumAxis::new(256, 0.16).unwrap();
        let st = FvState::gaussian(ax, 0.0, 0.01, true).unwrap();
        let w = wigner_components(&st, &s).unwrap();
        let g = w.grid().clone();
        let mut worst = 0.0f64;
        let sig = 0.01;
        for i in 0..g.n_p() {
            for j in 0..g.n_q() {
                let (p, q) = (g.p(i), g.q(j));
                let want = (1.0 / (PI * s.hbar))
                    * (-p * p / (2.0 * sig * sig) - 2.0 * sig * sig * q * q / (s.hbar * s.hbar)).exp();
                worst = worst.max((w.even_plus.values()[(i, j)].re - want).abs());
            }
        }
        let peak = 1.0 / (PI * s.hbar);
        assert!(worst / peak <= 1e-3, "gaussian deviation {}", worst / peak);
        // psi_minus = 0: odd components vanish identically
        assert!(w.odd_plus.peak() == 0.0 && w.odd_minus.peak() == 0.0);
    }

    #[test]
    fn structure_invariants() {
        let s = scales();
        let ax = axis();
        let mut st = FvState::gaussian(ax.clone(), 0.8, 0.3, true).unwrap();
        // put something in psi_minus too
        let minus = FvState::gaussian(ax, -0.4, 0.25, false).unwrap();
        st.psi_minus = minus.psi_minus.mapv(|v| v * C64::new(0.5, 0.2));
        let w = wigner_components(&st, &s).unwrap();
        assert!(w.reality_defect() <= 1e-10);
        assert!(w.antisymmetry_defect() <= 1e-10);
        // marginals: int W_a^a dq = |psi_a(p)|^2, int W_a^{-a} dq = 0
        let mp = q_marginal(&w.even_plus);
        let mo = q_marginal(&w.odd_plus);
        let mut worst = 0.0f64;
        for i in 0..st.axis().n() {
            worst = worst.max((mp[i].re - st.psi_plus[i].norm_sqr()).abs());
            worst = worst.max(mp[i].im.abs());
            worst = worst.max(mo[i].norm());
        }
        assert!(worst <= 1e-10, "marginal defect {worst}");
        // normalization: integral W_a^a = <psi_a|psi_a>
        assert!((w.even_plus.integrate().re - st.norm_plus()).abs() <= 1e-9);
        assert!((w.even_minus.integrate().re - st.norm_minus()).abs() <= 1e-9);
    }

    #[test]
    fn two_packet_interference() {
        let s = scales();
        let (p1, p2) = (1.2, -0.6);
        let st = FvState::two_packet(axis(), p1, p2, 0.15).unwrap();
        let w = wigner_components(&st, &s).unwrap();
        let g = w.grid().clone();
        // the row at p = (p1+p2)/2 oscillates in q at wavenumber |p1-p2|/hbar
        let pm = 0.5 * (p1 + p2);
        let i = (pm / g.dp() + g.n_p() as f64 / 2.0).round() as usize;
        let row: Vec<C64> = (0..g.n_q()).map(|j| w.even_plus.values()[(i, j)]).collect();
        let mut buf = row.clone();
        let mut fft = CenteredFft::new();
        fft.forward(&mut buf);
        let t_peak = buf
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap()
            .0;
        let k_peak = g.k(t_peak).abs();
        let want = (p1 - p2).abs() / s.hbar;
        assert!(
            (k_peak - want).abs() <= 2.0 * g.dk(),
            "fringe wavenumber {k_peak} vs {want}"
        );
    }

    #[test]
    fn evolution_identity_and_composition() {
        let s = scales();
        let st = FvState::two_packet(axis(), 0.9, 0.1, 0.2).unwrap();
        let w = wigner_components(&st, &s).unwrap();
        let w0 = evolve_free(&w, 0.0, &s);
        assert!(w.even_plus.max_abs_diff(&w0.even_plus) <= 1e-13);
        let a = evolve_free(&evolve_free(&w, 1.3, &s), 2.1, &s);
        let b = evolve_free(&w, 3.4, &s);
        let scale = w.even_plus.peak();
        assert!(a.even_plus.max_abs_diff(&b.even_plus) <= 1e-11 * scale);
        assert!(a.odd_plus.max_abs_diff(&b.odd_plus) <= 1e-11 * scale);
    }

    #[test]
    fn stationary_packet_even_static() {
        let s = scales();
        // a packet so narrow that E(p+hk/2)-E(p-hk/2) vanishes on its support
        let st = FvState::gaussian(axis(), 0.5, 0.08, true).unwrap();
        let w = wigner_components(&st, &s).unwrap();
        let wt = evolve_free(&w, 5.0, &s);
        // total integral conserved component-wise and charge norm conserved
        assert!((wt.even_plus.integrate().re - w.even_plus.integrate().re).abs() <= 1e-10);
        assert!((wt.charge_norm() - w.charge_norm()).abs() <= 1e-10);
    }

    #[test]
    fn commuting_square_against_wavefunction_oracle() {
        let s = scales();
        let ax = axis();
        let mut st = FvState::two_packet(ax.clone(), 0.9, -0.3, 0.2).unwrap();
        let minus = FvState::gaussian(ax, 0.2, 0.3, false).unwrap();
        st.psi_minus = minus.psi_minus.mapv(|v| v * C64::new(0.4, -0.1));
        let t = 10.0;
        let path_a = evolve_free(&wigner_components(&st, &s).unwrap(), t, &s);
        let evolved = oracle::wavefunction_evolution_free(&st, t, &s);
        let path_b = wigner_components(&evolved, &s).unwrap();
        let scale = path_a.even_plus.peak();
        for (x, y) in [
            (&path_a.even_plus, &path_b.even_plus),
            (&path_a.even_minus, &path_b.even_minus),
            (&path_a.odd_plus, &path_b.odd_plus),
            (&path_a.odd_minus, &path_b.odd_minus),
        ] {
            assert!(x.max_abs_diff(y) <= 1e-10 * scale, "deviation {}", x.max_abs_diff(y));
        }
    }

    #[test]
    fn interference_frequencies() {
        // two narrow packets: the even cross term at the midpoint oscillates
        // at |E1 - E2|/hbar, the odd at (E1 + E2)/hbar
        let s = scales();
        let ax = axis();
        let (p1, p2) = (1.0, 0.2);
        let mut st = FvState::two_packet(ax.clone(), p1, p2, 0.1).unwrap();
        st.psi_minus = st.psi_plus.clone();
        let w = wigner_components(&st, &s).unwrap();
        let g = w.grid().clone();
        let i_mid = ((0.5 * (p1 + p2)) / g.dp() + g.n_p() as f64 / 2.0).round() as usize;
        let j_mid = g.n_q() / 2;
        let (e1, e2) = (energy_free(p1, &s), energy_free(p2, &s));
        let n_t = 256;
        let dt = 0.35 * 2.0 * PI / (e1 + e2); // resolves the fastest line
        let mut even_series = Vec::with_capacity(n_t);
        let mut odd_series = Vec::with_capacity(n_t);
        for k in 0..n_t {
            let wt = evolve_free(&w, k as f64 * dt, &s);
            even_series.push(wt.even_plus.values()[(i_mid, j_mid)]);
            odd_series.push(wt.odd_plus.values()[(i_mid, j_mid)]);
        }
        let dominant_freq = |series: &[C64]| -> f64 {
            let n = series.len();
            let mean = series.iter().sum::<C64>() / n as f64;
            let mut best = (0usize, 0.0f64);
            for m in 1..n / 2 {
                let mut acc = C64::new(0.0, 0.0);
                for (k, v) in series.iter().enumerate() {
                    let ph = -2.0 * PI * (m * k) as f64 / n as f64;
                    acc += (v - mean) * C64::new(0.0, ph).exp();
                }
                if acc.norm() > best.1 {
                    best = (m, acc.norm());
                }
            }
            2.0 * PI * best.0 as f64 / (n as f64 * dt)
        };
        let f_even = dominant_freq(&even_series);
        let f_odd = dominant_freq(&odd_series);
        let df = 2.0 * PI / (n_t as f64 * dt);
        assert!((f_even - (e1 - e2).abs()).abs() <= 1.5 * df, "even {f_even} vs {}", (e1 - e2).abs());
        assert!((f_odd - (e1 + e2)).abs() <= 1.5 * df, "odd {f_odd} vs {}", e1 + e2);
    }

    #[test]
    fn nonrelativistic_limit_shear() {
        // slow packet: relativistic evolution matches the nonrelativistic
        // shear propagator to O((p/mc)^4 t)
        let s = scales();
        let ax = MomentumAxis::new(256, 1.6).unwrap();
        let st = FvState::gaussian(ax, 0.06, 0.025, true).unwrap();
        let w = wigner_components(&st, &s).unwrap();
        let t = 2.0;
        let rel = evolve_free(&w, t, &s);
        let m = s.mass;
        let mc2 = s.rest_energy();
        let nr = evolve_with_energy(&w, t, &s, &|p| mc2 + p * p / (2.0 * m));
        let dev = rel.even_plus.max_abs_diff(&nr.even_plus) / w.even_plus.peak();
        assert!(dev <= 1e-4, "nonrelativistic limit deviation {dev}");
    }

    #[test]
    fn moment_guards() {
        let s = scales();
        let st = FvState::gaussian(axis(), 0.4, 0.3, true).unwrap();
        let w = wigner_components(&st, &s).unwrap();
        assert!(moments(&w, 5, 0).is_err());
        let m00 = moments(&w, 0, 0).unwrap();
        assert!((m00.total().re - 1.0).abs() <= 1e-9);
        let m10 = moments(&w, 1, 0).unwrap();
        assert!((m10.even_plus.re - 0.4).abs() <= 1e-6);
        assert!(m10.even_plus.im.abs() <= 1e-12);
    }
}
