//! Groenewold–Moyal star product.
//!
//! Two routes, matching the two kinds of symbols that occur:
//!
//! * [`StarEngine`] — pseudo-spectral engine for decaying fields on square
//!   star-capable grids (`dp dq = 2 pi hbar / n`). It maps each symbol to its
//!   operator kernel `K(q, s) = (1/2 pi hbar) int A(q, p) e^{i p s/hbar} dp`,
//!   composes kernels (one `O(n^3)` contraction on a half-step position
//!   grid), and maps back. Exact for band-limited fields whose kernels decay
//!   inside the grid; wrap-around from the torus topology is the only error.
//! * [`star_polynomial`] — the bidifferential series on exact polynomial
//!   coefficients. The series terminates, so the small analytic identities
//!   (`q * p = q p + i hbar/2`, ...) hold to rounding.
//!
//! Sign convention: `A (*) B = A exp{(i hbar/2)(dq< dp> - dp< dq>)} B`, the
//! form whose sine part generates time evolution.

use super::fft::CenteredFft;
use super::grid::{PhaseField, PhaseGrid, Representation};
use crate::{FvError, PhysicalScales, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Boundary-decay contract for spectral star inputs.
pub const BOUNDARY_DECAY_CONTRACT: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct StarDiagnostics {
    /// Boundary magnitude of the left input relative to its peak.
    pub boundary_a: f64,
    /// Boundary magnitude of the right input relative to its peak.
    pub boundary_b: f64,
}

impl StarDiagnostics {
    /// True when either input violates the decay contract; the product is
    /// still returned (the caller decides what to do with the warning).
    pub fn decay_violated(&self) -> bool {
        self.boundary_a > BOUNDARY_DECAY_CONTRACT || self.boundary_b > BOUNDARY_DECAY_CONTRACT
    }
}

/// Reusable star-product engine bound to one star-capable grid.
pub struct StarEngine {
    grid: Arc<PhaseGrid>,
    fft: CenteredFft,
    ka: Array2<C64>,
    kb_t: Array2<C64>,
}

impl StarEngine {
    pub fn new(grid: Arc<PhaseGrid>) -> Result<Self> {
        grid.require_star_capable()?;
        let n = grid.n_p();
        Ok(Self {
            grid,
            fft: CenteredFft::new(),
            ka: Array2::zeros((2 * n, n)),
            kb_t: Array2::zeros((n, 2 * n)),
        })
    }

    pub fn grid(&self) -> &Arc<PhaseGrid> {
        &self.grid
    }

    /// Kernel transform: `K(q_mu, s_t)` on the half-step position grid
    /// `q_mu = (mu - n) dq/2`, `s_t = (t - n/2) dq`; stored `[mu][t]` for the
    /// left factor and transposed `[t][mu]` for the right factor.
    fn kernel_fine(&mut self, field: &Array2<C64>, into_b: bool) {
        let n = self.grid.n_p();
        let scale = self.grid.dp() / (2.0 * PI * self.grid.hbar());
        // K'(q_j, s_t): centered inverse transform over the p index, per column.
        let mut rows: Array2<C64> = Array2::zeros((n, n)); // [j][t]
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                buf[i] = field[(i, j)];
            }
            self.fft.inverse(&mut buf);
            for t in 0..n {
                rows[(j, t)] = buf[t] * scale;
            }
        }
        // interpolate to the half-step q grid per s column (band-limited zero-pad)
        let inv_n = 1.0 / n as f64; // unnormalized forward+inverse pair leaves a factor n
        let mut coarse = vec![C64::new(0.0, 0.0); n];
        let mut fine = vec![C64::new(0.0, 0.0); 2 * n];
        for t in 0..n {
            for j in 0..n {
                coarse[j] = rows[(j, t)];
            }
            self.fft.forward(&mut coarse);
            for v in fine.iter_mut() {
                *v = C64::new(0.0, 0.0);
            }
            // coarse mode index tt (wavenumber (tt - n/2) dk) -> fine index tt + n/2,
            // with the edge mode split over the two fine modes it aliases into
            for (tt, v) in coarse.iter().enumerate().skip(1) {
                fine[tt + n / 2] = *v;
            }
            fine[n / 2] = coarse[0] * 0.5;
            fine[3 * n / 2] = coarse[0] * 0.5;
            self.fft.inverse(&mut fine);
            if into_b {
                for (mu, v) in fine.iter().enumerate() {
                    self.kb_t[(t, mu)] = v * inv_n;
                }
            } else {
                for (mu, v) in fine.iter().enumerate() {
                    self.ka[(mu, t)] = v * inv_n;
                }
            }
        }
    }

    /// `A (*) B` with boundary diagnostics.
    pub fn product_with_diagnostics(
        &mut self,
        a: &PhaseField,
        b: &PhaseField,
    ) -> Result<(PhaseField, StarDiagnostics)> {
        if !a.same_grid(b) || a.grid().as_ref() != self.grid.as_ref() {
            return Err(FvError::GridMismatch);
        }
        assert_eq!(a.representation(), Representation::Direct);
        assert_eq!(b.representation(), Representation::Direct);
        let diag = StarDiagnostics { boundary_a: a.boundary_ratio(), boundary_b: b.boundary_ratio() };

        let n = self.grid.n_p();
        let mask_n = n - 1;
        let mask_2n = 2 * n - 1;
        self.kernel_fine(a.values(), false);
        self.kernel_fine(b.values(), true);

        // C'(q_j, s) = dq * sum_v K_A(q_j + v/2, s - v) K_B(q_j - (s - v)/2, v)
        let mut cp: Array2<C64> = Array2::zeros((n, n)); // [j][s index]
        let ka = &self.ka;
        let kbt = &self.kb_t;
        for j in 0..n {
            let cp_row = cp.row_mut(j).into_slice().expect("contiguous");
            for ti in 0..n {
                let a_row = ka.row((2 * j + ti + 2 * n - n / 2) & mask_2n); // 2j + (ti - n/2) mod 2n
                let a_row = a_row.to_slice().expect("contiguous");
                let b_row = kbt.row(ti);
                let b_row = b_row.to_slice().expect("contiguous");
                let base = 2 * j + ti + 2 * n; // b index = base - si (mod 2n), si = n/2 eliminated below
                for si in 0..n {
                    // signed sigma - tau = si - ti; A column (si - ti + n/2) mod n
                    let a_col = (si + n / 2).wrapping_sub(ti) & mask_n;
                    let b_idx = (base - si) & mask_2n; // (2j + ti - si) mod 2n
                    cp_row[si] += a_row[a_col] * b_row[b_idx];
                }
            }
        }

        // back: C(p_i, q_j) = dq * sum_t C'(j, t) e^{-i p_i s_t / hbar}
        let mut values: Array2<C64> = Array2::zeros((n, n));
        let mut buf = vec![C64::new(0.0, 0.0); n];
        let dq = self.grid.dq();
        for j in 0..n {
            for t in 0..n {
                buf[t] = cp[(j, t)];
            }
            self.fft.forward(&mut buf);
            for i in 0..n {
                values[(i, j)] = buf[i] * dq * dq; // one dq from the v integral, one from ds
            }
        }
        let field = PhaseField::from_values(self.grid.clone(), values, Representation::Direct)?;
        Ok((field, diag))
    }

    pub fn product(&mut self, a: &PhaseField, b: &PhaseField) -> Result<PhaseField> {
        Ok(self.product_with_diagnostics(a, b)?.0)
    }
}

/// One-shot star product (builds a transient engine).
pub fn star_product(a: &PhaseField, b: &PhaseField, scales: &PhysicalScales) -> Result<PhaseField> {
    if (a.grid().hbar() - scales.hbar).abs() > 1e-15 * scales.hbar {
        return Err(FvError::InvalidScales("grid was built with a different hbar".into()));
    }
    StarEngine::new(a.grid().clone())?.product(a, b)
}

/// Exact polynomial phase-space symbol `sum c[(i,j)] q^i p^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    /// Coefficient of `q^i p^j` at `[(i, j)]`.
    pub coeffs: Array2<C64>,
}

impl Poly2 {
    pub fn from_coeffs(coeffs: Array2<C64>) -> Self {
        Self { coeffs }
    }

    /// The monomial `q^i p^j`.
    pub fn monomial(i: usize, j: usize) -> Self {
        let mut coeffs = Array2::zeros((i + 1, j + 1));
        coeffs[(i, j)] = C64::from(1.0);
        Self { coeffs }
    }

    pub fn eval(&self, q: f64, p: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for ((i, j), c) in self.coeffs.indexed_iter() {
            acc += c * q.powi(i as i32) * p.powi(j as i32);
        }
        acc
    }

    fn deriv(&self, wrt_q: bool) -> Self {
        let (nq, np) = self.coeffs.dim();
        if (wrt_q && nq <= 1) || (!wrt_q && np <= 1) {
            return Self { coeffs: Array2::zeros((1, 1)) };
        }
        let dim = if wrt_q { (nq - 1, np) } else { (nq, np - 1) };
        let mut out = Array2::zeros(dim);
        for ((i, j), c) in self.coeffs.indexed_iter() {
            if wrt_q && i > 0 {
                out[(i - 1, j)] += c * i as f64;
            } else if !wrt_q && j > 0 {
                out[(i, j - 1)] += c * j as f64;
            }
        }
        Self { coeffs: out }
    }

    fn mul(&self, other: &Self) -> Self {
        let (aq, ap) = self.coeffs.dim();
        let (bq, bp) = other.coeffs.dim();
        let mut out = Array2::zeros((aq + bq - 1, ap + bp - 1));
        for ((i, j), c) in self.coeffs.indexed_iter() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for ((k, l), d) in other.coeffs.indexed_iter() {
                out[(i + k, j + l)] += c * d;
            }
        }
        Self { coeffs: out }
    }

    fn add_scaled(&mut self, other: &Self, s: C64) {
        let (bq, bp) = other.coeffs.dim();
        let (aq, ap) = self.coeffs.dim();
        if bq > aq || bp > ap {
            let mut grown = Array2::zeros((aq.max(bq), ap.max(bp)));
            for ((i, j), c) in self.coeffs.indexed_iter() {
                grown[(i, j)] = *c;
            }
            self.coeffs = grown;
        }
        for ((i, j), c) in other.coeffs.indexed_iter() {
            self.coeffs[(i, j)] += c * s;
        }
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let (aq, ap) = self.coeffs.dim();
        let (bq, bp) = other.coeffs.dim();
        let mut worst = 0.0f64;
        for i in 0..aq.max(bq) {
            for j in 0..ap.max(bp) {
                let a = if i < aq && j < ap { self.coeffs[(i, j)] } else { C64::new(0.0, 0.0) };
                let b = if i < bq && j < bp { other.coeffs[(i, j)] } else { C64::new(0.0, 0.0) };
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }
}

/// Star product of two polynomial symbols; the bidifferential series
/// terminates at the smaller total degree, so this is exact.
pub fn star_polynomial(a: &Poly2, b: &Poly2, scales: &PhysicalScales) -> Poly2 {
    let hbar = scales.hbar;
    let max_order = {
        let (aq, ap) = a.coeffs.dim();
        let (bq, bp) = b.coeffs.dim();
        (aq + ap).min(bq + bp)
    };
    let mut out = Poly2::from_coeffs(Array2::zeros((1, 1)));
    let mut coef = C64::from(1.0);
    for j in 0..=max_order {
        if j > 0 {
            coef *= C64::new(0.0, hbar / 2.0) / C64::from(j as f64);
        }
        // (dq< dp> - dp< dq>)^j expanded binomially
        let mut binom = 1.0f64;
        for r in 0..=j {
            if r > 0 {
                binom *= (j - r + 1) as f64 / r as f64;
            }
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            let mut da = a.clone();
            for _ in 0..j - r {
                da = da.deriv(true);
            }
            for _ in 0..r {
                da = da.deriv(false);
            }
            let mut db = b.clone();
            for _ in 0..j - r {
                db = db.deriv(false);
            }
            for _ in 0..r {
                db = db.deriv(true);
            }
            out.add_scaled(&da.mul(&db), coef * (sign * binom));
        }
    }
    out
}
