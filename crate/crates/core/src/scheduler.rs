//! Static partitioning of flat iteration spaces and the fixed-order merge.
//!
//! Workers receive contiguous disjoint ranges, read only shared immutable
//! inputs, and return private partial results. Partials come back in worker
//! order whether or not the `parallel` feature is enabled, so a reduction over
//! them is reproducible for a fixed worker count.

use std::ops::Range;

use crate::error::{ModalError, Result};
use crate::gamma::GammaMatrix;

/// Contiguous balanced split of `[0, total)` across `worker_count` workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkPlan {
    worker_count: usize,
    total: usize,
    ranges: Vec<Range<usize>>,
}

impl ChunkPlan {
    pub fn worker_count(&self) -> usize {
        self.worker_count
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    /// Runs `work` once per range and returns the results in worker order.
    ///
    /// With the `parallel` feature and more than one worker the ranges run on
    /// a dedicated rayon pool of `worker_count` threads.
    pub fn execute<T, F>(&self, work: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, Range<usize>) -> T + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.worker_count > 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.worker_count)
                .build()
                .expect("failed to build worker pool");
            return pool.install(|| {
                self.ranges
                    .par_iter()
                    .enumerate()
                    .map(|(w, r)| work(w, r.clone()))
                    .collect()
            });
        }
        self.ranges.iter().enumerate().map(|(w, r)| work(w, r.clone())).collect()
    }
}

/// The first `total % workers` workers get one extra iteration.
pub fn make_plan(total: usize, worker_count: usize) -> Result<ChunkPlan> {
    if worker_count == 0 {
        return Err(ModalError::InvalidParameter("worker count must be at least 1".into()));
    }
    let base = total / worker_count;
    let extra = total % worker_count;
    let mut ranges = Vec::with_capacity(worker_count);
    let mut start = 0;
    for w in 0..worker_count {
        let len = base + usize::from(w < extra);
        ranges.push(start..start + len);
        start += len;
    }
    debug_assert_eq!(start, total);
    Ok(ChunkPlan { worker_count, total, ranges })
}

/// Entrywise sum of the partials, added in list order.
pub fn merge_partials(partials: Vec<GammaMatrix>) -> Result<GammaMatrix> {
    let mut iter = partials.into_iter();
    let mut acc = iter
        .next()
        .ok_or_else(|| ModalError::MergeMismatch("no partial matrices to merge".into()))?;
    for (k, part) in iter.enumerate() {
        if part.n_max() != acc.n_max() {
            return Err(ModalError::MergeMismatch(format!(
                "partial {} is {}x{}, expected {}x{}",
                k + 1,
                part.n_max(),
                part.n_max(),
                acc.n_max(),
                acc.n_max()
            )));
        }
        if part.meta() != acc.meta() {
            return Err(ModalError::MergeMismatch(format!(
                "partial {} has different metadata or input fingerprints",
                k + 1
            )));
        }
        for (a, b) in acc.as_mut_slice().iter_mut().zip(part.as_slice()) {
            *a += b;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::{EngineId, GammaMeta};
    use crate::quadrature::Integrator;
    use proptest::prelude::*;

    fn sizes(plan: &ChunkPlan) -> Vec<usize> {
        plan.ranges().iter().map(|r| r.len()).collect()
    }

    #[test]
    fn plan_examples() {
        assert_eq!(sizes(&make_plan(6, 4).unwrap()), vec![2, 2, 1, 1]);
        let single = make_plan(6, 1).unwrap();
        assert_eq!(single.ranges().len(), 1);
        assert_eq!(single.ranges()[0], 0..6);
        assert_eq!(make_plan(0, 3).unwrap().ranges(), &[0..0, 0..0, 0..0]);
        assert!(make_plan(5, 0).is_err());
    }

    proptest! {
        #[test]
        fn plan_covers_disjointly(total in 0usize..1_000_000, workers in 1usize..=256) {
            let plan = make_plan(total, workers).unwrap();
            prop_assert_eq!(plan.ranges().len(), workers);
            let mut next = 0;
            for r in plan.ranges() {
                prop_assert_eq!(r.start, next);
                next = r.end;
            }
            prop_assert_eq!(next, total);
            let s = sizes(&plan);
            let (lo, hi) = (s.iter().min().unwrap(), s.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
            prop_assert_eq!(plan, make_plan(total, workers).unwrap());
        }
    }

    #[test]
    fn execute_returns_worker_order() {
        let plan = make_plan(103, 7).unwrap();
        let out = plan.execute(|w, r| (w, r.start, r.end));
        let expect: Vec<_> =
            plan.ranges().iter().enumerate().map(|(w, r)| (w, r.start, r.end)).collect();
        assert_eq!(out, expect);
    }

    fn meta(fp: u64) -> GammaMeta {
        GammaMeta {
            engine: EngineId::Modal3d,
            l_min: 2,
            l_max: 4,
            p_max: 1,
            integrator: Integrator::Trapezium,
            h2: None,
            grid_fingerprint: fp,
            mapping_fingerprint: 0,
            basis_fingerprint: 0,
        }
    }

    #[test]
    fn merge_examples() {
        let a = GammaMatrix::from_data(2, vec![1.0, -2.0, 0.5, 3.0], meta(1)).unwrap();
        assert_eq!(merge_partials(vec![a.clone()]).unwrap(), a);

        let neg = GammaMatrix::from_data(2, a.as_slice().iter().map(|x| -x).collect(), meta(1))
            .unwrap();
        let zero = merge_partials(vec![a.clone(), neg]).unwrap();
        assert!(zero.as_slice().iter().all(|&x| x == 0.0));

        let other = GammaMatrix::zeros(2, meta(2));
        assert!(merge_partials(vec![a.clone(), other]).is_err());
        assert!(merge_partials(vec![a, GammaMatrix::zeros(3, meta(1))]).is_err());
        assert!(merge_partials(vec![]).is_err());
    }
}
