use crate::error::{Error, Result};
use crate::model::{SensorField, TargetSet};

/// Largest instance (real plus gap sensors) the oracle will enumerate.
pub const ORACLE_LIMIT: usize = 20;

/// Exact minimum number of sensors of `field` (gap sensors included) whose
/// intervals cover every target at least `k` times, by exhaustive subset
/// enumeration in order of size. `Ok(None)` when even all sensors fall short.
pub fn brute_force_min_kcover(
    field: &SensorField,
    targets: &TargetSet,
    k: usize,
) -> Result<Option<usize>> {
    if k < 1 {
        return Err(Error::param("k must be at least 1"));
    }
    let n = field.len();
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge { sensors: n, limit: ORACLE_LIMIT });
    }
    // covering[t] = bitmask of sensors containing target t
    let covering: Vec<u32> = targets
        .xs()
        .iter()
        .map(|&x| {
            field
                .intervals()
                .iter()
                .enumerate()
                .filter(|(_, iv)| iv.contains(x))
                .fold(0u32, |mask, (i, _)| mask | (1 << i))
        })
        .collect();
    let feasible = |mask: u32| covering.iter().all(|&c| (c & mask).count_ones() as usize >= k);

    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    if !feasible(full) {
        return Ok(None);
    }
    for size in 0..=n {
        if size == 0 {
            if feasible(0) {
                return Ok(Some(0));
            }
            continue;
        }
        // Gosper's hack: all n-bit masks with `size` bits set, ascending
        let mut mask: u32 = (1 << size) - 1;
        while mask <= full {
            if feasible(mask) {
                return Ok(Some(size));
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    Ok(None)
}
