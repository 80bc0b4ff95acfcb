//! Centered discrete Fourier transforms.
//!
//! Grids in this crate are index-centered: axis value at index `j` is
//! `(j - n/2) * d`. The transforms here absorb the `n/2` offsets on both
//! sides, so for `n` divisible by 4 (guaranteed by the grid constructor)
//!
//!   forward:  X_t = sum_j x_j exp(-2 pi i (j - n/2)(t - n/2) / n)
//!   inverse:  x_j = (1/n) sum_t X_t exp(+2 pi i (j - n/2)(t - n/2) / n)
//!
//! are plain FFTs conjugated by (-1)^index sign flips.

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::Arc;

pub struct CenteredFft {
    planner: FftPlanner<f64>,
    fwd: HashMap<usize, Arc<dyn Fft<f64>>>,
    inv: HashMap<usize, Arc<dyn Fft<f64>>>,
    scratch: Vec<C64>,
}

impl CenteredFft {
    pub fn new() -> Self {
        Self { planner: FftPlanner::new(), fwd: HashMap::new(), inv: HashMap::new(), scratch: Vec::new() }
    }

    fn plan_fwd(&mut self, n: usize) -> Arc<dyn Fft<f64>> {
        let planner = &mut self.planner;
        self.fwd.entry(n).or_insert_with(|| planner.plan_fft_forward(n)).clone()
    }

    fn plan_inv(&mut self, n: usize) -> Arc<dyn Fft<f64>> {
        let planner = &mut self.planner;
        self.inv.entry(n).or_insert_with(|| planner.plan_fft_inverse(n)).clone()
    }

    fn flip_signs(buf: &mut [C64]) {
        for (j, v) in buf.iter_mut().enumerate() {
            if j % 2 == 1 {
                *v = -*v;
            }
        }
    }

    /// In-place centered forward transform (kernel `exp(-i ...)`), unnormalized.
    pub fn forward(&mut self, buf: &mut [C64]) {
        let n = buf.len();
        debug_assert_eq!(n % 4, 0, "centered transforms need n divisible by 4");
        let plan = self.plan_fwd(n);
        Self::flip_signs(buf);
        self.scratch.resize(plan.get_inplace_scratch_len(), C64::new(0.0, 0.0));
        plan.process_with_scratch(buf, &mut self.scratch);
        Self::flip_signs(buf);
    }

    /// In-place centered inverse transform (kernel `exp(+i ...)`), unnormalized:
    /// `inverse(forward(x)) = n * x`.
    pub fn inverse(&mut self, buf: &mut [C64]) {
        let n = buf.len();
        debug_assert_eq!(n % 4, 0, "centered transforms need n divisible by 4");
        let plan = self.plan_inv(n);
        Self::flip_signs(buf);
        self.scratch.resize(plan.get_inplace_scratch_len(), C64::new(0.0, 0.0));
        plan.process_with_scratch(buf, &mut self.scratch);
        Self::flip_signs(buf);
    }
}

impl Default for CenteredFft {
    fn default() -> Self {
        Self::new()
    }
}
