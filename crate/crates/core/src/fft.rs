//! Shared FFT plans. Every fast kernel in the crate (circulant embedding,
//! sine transforms, tau eigenvalues) runs through these.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Clone)]
pub(crate) struct FftPair {
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
}

impl FftPair {
    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }
}

impl std::fmt::Debug for FftPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPair").field("len", &self.len()).finish()
    }
}

struct PlanCache {
    planner: FftPlanner<f64>,
    pairs: HashMap<usize, FftPair>,
}

pub(crate) fn plan(len: usize) -> FftPair {
    static CACHE: OnceLock<Mutex<PlanCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        Mutex::new(PlanCache {
            planner: FftPlanner::new(),
            pairs: HashMap::new(),
        })
    });
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    if let Some(p) = guard.pairs.get(&len) {
        return p.clone();
    }
    let pair = FftPair {
        forward: guard.planner.plan_fft_forward(len),
        inverse: guard.planner.plan_fft_inverse(len),
    };
    guard.pairs.insert(len, pair.clone());
    pair
}

/// Real part of the forward DFT of a real sequence.
pub(crate) fn real_dft_re(x: &[f64]) -> Vec<f64> {
    let p = plan(x.len());
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    p.forward.process(&mut buf);
    buf.into_iter().map(|z| z.re).collect()
}
