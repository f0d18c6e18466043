//! Multi-threaded versions of the exhaustive counters.

use hkzeta_core::counting::{count_component, UCounter};
use hkzeta_core::curve::CurveData;
use hkzeta_core::hkgeom::{Component, HKVariety, LineBundle};
use hkzeta_core::{Error, Result};
use rayon::prelude::*;

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))
}

fn field(curve: &CurveData) -> Result<&hkzeta_core::ffq::FqField> {
    match (curve.genus(), curve.field()) {
        (0, Some(f)) => Ok(f),
        _ => Err(Error::Unsupported("exhaustive counting needs the rational function field".into())),
    }
}

/// [`hkzeta_core::counting::count_u`] split over `jobs` threads. The result does not depend on `jobs`.
pub fn count_u_parallel(v: &HKVariety, l: &LineBundle, curve: &CurveData, mmax: u32, jobs: usize) -> Result<Vec<u64>> {
    let counter = UCounter::new(v, l, field(curve)?, mmax)?;
    let n = counter.first_len();
    let chunks = (jobs.max(1) * 8).min(n.max(1));
    let ranges: Vec<_> = (0..chunks).map(|i| (i * n / chunks)..((i + 1) * n / chunks)).collect();
    let hists = pool(jobs)?.install(|| ranges.into_par_iter().map(|r| counter.count_range(r)).collect::<Vec<_>>());
    let mut out = vec![0u64; mmax as usize + 1];
    for h in hists {
        for (a, b) in out.iter_mut().zip(h) {
            *a += b;
        }
    }
    Ok(out)
}

/// Counts of one decomposition piece; good open pieces with `a_r > 0` run in parallel.
pub fn count_component_parallel(comp: &Component, curve: &CurveData, mmax: u32, jobs: usize) -> Result<Vec<u64>> {
    match comp {
        Component::Good { variety, bundle } if variety.a_r() > 0 => {
            count_u_parallel(variety, bundle, curve, mmax, jobs)
        }
        _ => count_component(comp, curve, mmax),
    }
}
