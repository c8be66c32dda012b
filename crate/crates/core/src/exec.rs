//! Execution strategy for the data-parallel loops: exhaustive codeword
//! enumeration and batched property sweeps.
//!
//! With the `parallel` feature (default) work is spread over rayon's global
//! pool; without it [`Exec::Parallel`] silently runs sequentially. Results
//! never depend on the strategy.

use crate::gf::Felt;
use crate::matgf::MatGF;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Maps `f` over `0..len`, returning results in index order.
pub fn map_indices<R, F>(exec: Exec, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..len).into_par_iter().map(f).collect()
        }
        _ => (0..len).map(f).collect(),
    }
}

/// `q^k`, saturating.
pub fn message_count(q: u32, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, _| acc.saturating_mul(q as u128))
}

/// Visits every codeword `m G` (including zero) and folds them into an
/// accumulator per chunk; chunks are then merged with `merge`.
///
/// The message space is split on its leading digits; inside a chunk the
/// trailing digits run as an odometer, so each step costs one row update.
pub(crate) fn fold_codewords<A, I, V, M>(g: &MatGF, exec: Exec, init: I, visit: V, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &[Felt]) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let f = g.field();
    let q = f.order() as usize;
    let k = g.rows();
    let n = g.cols();

    // leading digits fixed per chunk: enough chunks to keep a pool busy
    let mut lead = 0;
    while lead < k && q.pow(lead as u32) < 256 {
        lead += 1;
    }
    let inner = k - lead;
    let chunks = q.pow(lead as u32);

    let run_chunk = |chunk: usize| -> A {
        let mut acc = init();
        let mut word = vec![Felt::ZERO; n];
        let mut t = chunk;
        for r in inner..k {
            let digit = Felt::from_code((t % q) as u16);
            t /= q;
            if !digit.is_zero() {
                for (w, &x) in word.iter_mut().zip(g.row(r)) {
                    *w = f.add(*w, f.mul(digit, x));
                }
            }
        }
        let mut digits = vec![0usize; inner];
        loop {
            visit(&mut acc, &word);
            let mut i = 0;
            loop {
                if i == inner {
                    return acc;
                }
                let old = digits[i];
                let new = if old + 1 == q { 0 } else { old + 1 };
                digits[i] = new;
                let delta = f.sub(Felt::from_code(new as u16), Felt::from_code(old as u16));
                for (w, &x) in word.iter_mut().zip(g.row(i)) {
                    *w = f.add(*w, f.mul(delta, x));
                }
                if new != 0 {
                    break;
                }
                i += 1;
            }
        }
    };

    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..chunks).into_par_iter().map(run_chunk).reduce(&init, &merge)
        }
        _ => (0..chunks).map(run_chunk).fold(init(), merge),
    }
}
