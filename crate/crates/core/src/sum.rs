//! Compensated accumulation and a reduction that does not depend on the
//! number of worker threads.

use rayon::prelude::*;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}

/// Block size used by [`block_reduce`]. Fixed so the partition never depends
/// on the worker count.
pub const BLOCK: usize = 512;

/// Splits `0..n` into fixed blocks, maps each block on the rayon pool and
/// combines the per-block partials left to right. The result is bit-identical
/// for any thread count.
pub fn block_reduce<A, M, C>(n: usize, init: impl Fn() -> A + Sync, map: M, combine: C) -> A
where
    A: Send,
    M: Fn(std::ops::Range<usize>, &mut A) + Sync,
    C: Fn(&mut A, A),
{
    let blocks = n.div_ceil(BLOCK);
    let partials: Vec<A> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            let lo = b * BLOCK;
            map(lo..(lo + BLOCK).min(n), &mut acc);
            acc
        })
        .collect();
    let mut total = init();
    for p in partials {
        combine(&mut total, p);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn block_reduce_is_thread_count_independent() {
        let xs: Vec<f64> = (0..10_000).map(|i| ((i as f64) * 0.37).sin() / (1.0 + i as f64)).collect();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                block_reduce(
                    xs.len(),
                    NeumaierSum::new,
                    |r, acc| r.for_each(|i| acc.add(xs[i])),
                    |acc, p| acc.merge(&p),
                )
                .value()
            })
        };
        let one = run(1);
        assert_eq!(one.to_bits(), run(3).to_bits());
        assert_eq!(one.to_bits(), run(8).to_bits());
    }
}
