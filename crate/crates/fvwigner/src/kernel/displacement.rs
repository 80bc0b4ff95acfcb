//! Harmonic-oscillator displacement and quasi-probability matrix elements.
//!
//! Conventions (fixed once, validated against the quadrature oracle):
//! the displacement operator is `D(beta) = exp(beta a+ - beta* a)` with
//! `beta = (Q/a + i a P / hbar) / sqrt(2)` and `a = sqrt(hbar/(m omega_c))`,
//! so `D = exp(i (P qhat - Q phat) / hbar)`.
//!
//! `T_{m,n}(p,q)` is the Wigner transform of `|m><n|`; through the
//! Grossmann–Royer reflection identity
//! `T_{m,n}(p,q) = (-1)^m / (pi hbar) <n| D(2 z) |m>` with
//! `z = (q/a + i a p / hbar) / sqrt(2)`.

use super::special::{factorial_ratio_sqrt, scaled_laguerre_seq};
use crate::{FvError, PhysicalScales, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Dense truncated operator in the oscillator Fock basis.
#[derive(Debug, Clone)]
pub struct FockMatrix {
    entries: Array2<C64>,
}

impl FockMatrix {
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c || r < 2 {
            return Err(FvError::Domain(format!("FockMatrix must be square with N >= 2, got {r}x{c}")));
        }
        Ok(Self { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    /// `max_mn |(A - A^dagger)_{mn}|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for m in 0..n {
            for k in m..n {
                worst = worst.max((self.entries[(m, k)] - self.entries[(k, m)].conj()).norm());
            }
        }
        worst
    }

    /// `max_n |1 - sum_m |A_{mn}|^2|` over the first `cols` columns.
    pub fn column_norm_defect(&self, cols: usize) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for col in 0..cols.min(n) {
            let s: f64 = (0..n).map(|m| self.entries[(m, col)].norm_sqr()).sum();
            worst = worst.max((1.0 - s).abs());
        }
        worst
    }
}

/// `<m| D(beta) |n>` for a single `beta`, all `m, n < count`.
fn displacement_from_beta(beta: C64, count: usize) -> Array2<C64> {
    let x = beta.norm_sqr();
    let mut out = Array2::zeros((count, count));
    let mut lag = vec![0.0; count];
    // alpha = m - n >= 0 block and its n > m counterpart
    for alpha in 0..count {
        scaled_laguerre_seq(alpha as i64, x, &mut lag[..count - alpha]);
        let bp = beta.powu(alpha as u32);
        let bm = (-beta.conj()).powu(alpha as u32);
        for lo in 0..count - alpha {
            let hi = lo + alpha;
            let pref = factorial_ratio_sqrt(lo, hi) * lag[lo];
            out[(hi, lo)] = bp * pref; // m = hi >= n = lo
            if alpha > 0 {
                out[(lo, hi)] = bm * pref; // m = lo < n = hi
            }
        }
    }
    out
}

/// Dimensionless displacement amplitude for a phase-space shift `(P, Q)`.
pub fn beta_of(p_shift: f64, q_shift: f64, scales: &PhysicalScales) -> Result<C64> {
    let a = scales.osc_length()?;
    Ok(C64::new(q_shift / a, a * p_shift / scales.hbar) / C64::from(2.0f64.sqrt()))
}

/// Matrix elements `D_{m,n}(P, Q)` of the displacement operator on the
/// oscillator eigenbasis, truncated to `count x count`.
pub fn displacement_elements(
    p_shift: f64,
    q_shift: f64,
    count: usize,
    scales: &PhysicalScales,
) -> Result<FockMatrix> {
    if count < 2 {
        return Err(FvError::Domain(format!("truncation must be >= 2, got {count}")));
    }
    let beta = beta_of(p_shift, q_shift, scales)?;
    FockMatrix::new(displacement_from_beta(beta, count))
}

/// Matrix elements `T_{m,n}(p, q)` of the quasi-probability operator:
/// the Wigner transform of `|m><n|` evaluated at the phase-space point.
pub fn quasiprob_elements(
    p: f64,
    q: f64,
    count: usize,
    scales: &PhysicalScales,
) -> Result<FockMatrix> {
    if count < 2 {
        return Err(FvError::Domain(format!("truncation must be >= 2, got {count}")));
    }
    let two_z = beta_of(p, q, scales)? * 2.0;
    let d = displacement_from_beta(two_z, count);
    let scale = 1.0 / (PI * scales.hbar);
    let mut out = Array2::zeros((count, count));
    for m in 0..count {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        for n in 0..count {
            // <n| D(2z) |m> = d[(n, m)]
            out[(m, n)] = d[(n, m)] * (sign * scale);
        }
    }
    FockMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scales() -> PhysicalScales {
        PhysicalScales::canonical(1.0).unwrap()
    }

    #[test]
    fn identity_at_origin() {
        let d = displacement_elements(0.0, 0.0, 12, &scales()).unwrap();
        for m in 0..12 {
            for n in 0..12 {
                let want = if m == n { 1.0 } else { 0.0 };
                assert!((d.entries()[(m, n)] - C64::from(want)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn ground_state_overlap() {
        // D_{0,0}(beta) = exp(-|beta|^2/2)
        let (p, q) = (0.7, -1.2);
        let d = displacement_elements(p, q, 4, &scales()).unwrap();
        let b = beta_of(p, q, &scales()).unwrap();
        let want = (-b.norm_sqr() / 2.0).exp();
        assert!((d.entries()[(0, 0)] - C64::from(want)).norm() < 1e-14);
        // D(beta)|0> is the coherent state: D_{1,0} = beta e^{-|b|^2/2}
        assert!((d.entries()[(1, 0)] - b * want).norm() < 1e-14);
    }

    #[test]
    fn unitarity_tail() {
        // column norms -> 1 for |beta| <= 2 at N = 64
        let d = displacement_elements(1.6, 1.6, 64, &scales()).unwrap();
        assert!(d.column_norm_defect(8) <= 1e-10);
    }

    #[test]
    fn adjoint_pair() {
        // D(-P,-Q) = D(P,Q)^dagger up to truncation tail
        let n = 32;
        let d1 = displacement_elements(0.9, -0.4, n, &scales()).unwrap();
        let d2 = displacement_elements(-0.9, 0.4, n, &scales()).unwrap();
        let mut worst = 0.0f64;
        for m in 0..n / 2 {
            for k in 0..n / 2 {
                worst = worst.max((d1.entries()[(m, k)] - d2.entries()[(k, m)].conj()).norm());
            }
        }
        assert!(worst < 1e-12, "adjoint defect {worst}");
    }

    #[test]
    fn quasiprob_structure() {
        let s = scales();
        let t = quasiprob_elements(0.4, -0.8, 10, &s).unwrap();
        // hermitian as a matrix function: T_{m,n} = conj(T_{n,m})
        assert!(t.hermiticity_defect() < 1e-14);
        // T_00 = (1/pi hbar) exp(-q^2/a^2 - p^2 a^2 / hbar^2)
        let a = s.osc_length().unwrap();
        let want = (1.0 / (PI * s.hbar))
            * (-(0.8f64 * 0.8) / (a * a) - 0.4f64 * 0.4 * a * a / (s.hbar * s.hbar)).exp();
        assert!((t.entries()[(0, 0)] - C64::from(want)).norm() < 1e-14);
        // diagonal real
        for n in 0..10 {
            assert!(t.entries()[(n, n)].im.abs() < 1e-15);
        }
    }
}
