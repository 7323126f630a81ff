use super::EchelonAccumulator;
use crate::error::Result;

/// Sequential streaming rank: rows are produced on demand by `gen(i, buf)`
/// for i in 0..nrows (fixed lexicographic order) and absorbed immediately.
pub fn rank_streaming_seq<F>(
    p: u64,
    cols: usize,
    nrows: usize,
    gen: F,
) -> Result<EchelonAccumulator>
where
    F: Fn(usize, &mut [u64]),
{
    let mut acc = EchelonAccumulator::new(p, cols);
    let mut buf = vec![0u64; cols];
    for i in 0..nrows {
        buf.iter_mut().for_each(|c| *c = 0);
        gen(i, &mut buf);
        acc.absorb_row(&buf)?;
    }
    Ok(acc)
}

/// Parallel streaming rank. Row generation is partitioned into contiguous
/// chunks, each absorbed into a worker-local accumulator; the partial bases
/// are then merged in chunk order. Because the reduced echelon basis of a row
/// space is unique, the result is identical to the sequential path for any
/// worker count.
#[cfg(feature = "parallel")]
pub fn rank_streaming_par<F>(
    p: u64,
    cols: usize,
    nrows: usize,
    gen: F,
) -> Result<EchelonAccumulator>
where
    F: Fn(usize, &mut [u64]) + Sync,
{
    use rayon::prelude::*;

    let chunk = (nrows / (rayon::current_num_threads() * 4).max(1)).max(256);
    let partials: Vec<Result<EchelonAccumulator>> = (0..nrows)
        .into_par_iter()
        .chunks(chunk)
        .map(|idxs| {
            let mut acc = EchelonAccumulator::new(p, cols);
            let mut buf = vec![0u64; cols];
            for i in idxs {
                buf.iter_mut().for_each(|c| *c = 0);
                gen(i, &mut buf);
                acc.absorb_row(&buf)?;
            }
            Ok(acc)
        })
        .collect();

    let mut acc = EchelonAccumulator::new(p, cols);
    for part in partials {
        acc.merge(&part?)?;
    }
    Ok(acc)
}

/// Streaming rank; parallel when the `parallel` feature is enabled.
pub fn rank_streaming<F>(p: u64, cols: usize, nrows: usize, gen: F) -> Result<EchelonAccumulator>
where
    F: Fn(usize, &mut [u64]) + Sync,
{
    #[cfg(feature = "parallel")]
    {
        rank_streaming_par(p, cols, nrows, gen)
    }
    #[cfg(not(feature = "parallel"))]
    {
        rank_streaming_seq(p, cols, nrows, gen)
    }
}
