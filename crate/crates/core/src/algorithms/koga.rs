use crate::error::{Error, Result};
use crate::model::{SensorField, TargetSet};

use super::augment::augment_with_gap_sensors;
use super::oga::{check_targets, discrete_pass, CoverageTable};
use super::result::{SelectionBuilder, SelectionResult};

/// Minimum-cardinality K-cover of the targets.
///
/// Round `s` runs an OGA pass over the targets still covered fewer than `s`
/// times, restricted to sensors not selected in earlier rounds. Coverage
/// counts are refreshed from every selected sensor after each round, so
/// incidental overlaps from earlier rounds are credited.
pub fn k_oga(field: &SensorField, targets: &TargetSet, k: usize) -> Result<SelectionResult> {
    if k < 1 {
        return Err(Error::param("k must be at least 1"));
    }
    check_targets(field, targets)?;
    let augmented = augment_with_gap_sensors(field, targets, k)?;
    let table = CoverageTable::new(&augmented, targets);
    let m = targets.len();
    let mut available = vec![true; augmented.len()];
    let mut coverage = vec![0usize; m];
    let mut out = SelectionBuilder::default();

    for round in 1..=k {
        let needed: Vec<usize> = (0..m).filter(|&t| coverage[t] < round).collect();
        out.comparisons += m as u64;
        if needed.is_empty() {
            continue;
        }
        let chosen = discrete_pass(
            &augmented,
            targets,
            &table,
            &needed,
            &mut available,
            Some(round),
            &mut out,
        )?;
        let mut diff = vec![0isize; m + 1];
        for idx in chosen {
            diff[table.lo[idx]] += 1;
            diff[table.hi[idx]] -= 1;
        }
        let mut running = 0isize;
        for (c, d) in coverage.iter_mut().zip(&diff) {
            running += d;
            *c += running as usize;
        }
    }
    if let Some(t) = coverage.iter().position(|&c| c < k) {
        return Err(Error::Invariant(format!("target {t} left below {k}-coverage")));
    }
    Ok(out.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::oga;
    use crate::model::{Domain, ProjectedInterval, SensorId};

    fn field(ivs: &[(u32, f64, f64)]) -> SensorField {
        let ivs = ivs.iter().map(|&(id, u, v)| ProjectedInterval::new(SensorId(id), u, v)).collect();
        SensorField::from_intervals(ivs, Domain::new(0.0, 10.0).unwrap()).unwrap()
    }

    #[test]
    fn two_cover_example() {
        // a=[0,4] b=[0,2] c=[2,4] d=[1,3]
        let f = field(&[(0, 0.0, 4.0), (1, 0.0, 2.0), (2, 2.0, 4.0), (3, 1.0, 3.0)]);
        let t = TargetSet::new(vec![1.0, 2.0, 3.0]).unwrap();
        let r = k_oga(&f, &t, 2).unwrap();
        assert_eq!(r.selected_ids, vec![SensorId(0), SensorId(3)]);
        assert_eq!(r.count, 2);
        assert!(r.fully_covered);
        r.validate().unwrap();
    }

    #[test]
    fn k1_matches_oga() {
        let f = field(&[(0, 0.0, 3.0), (1, 2.0, 6.0), (2, 1.0, 2.0), (3, 5.0, 9.0)]);
        let t = TargetSet::new(vec![1.0, 2.0, 3.0, 4.0, 5.0, 8.5, 9.5]).unwrap();
        let a = k_oga(&f, &t, 1).unwrap();
        let mut b = oga(&f, &t).unwrap();
        for s in &mut b.trace {
            s.round = Some(1);
        }
        assert_eq!(a.selected_ids, b.selected_ids);
        assert_eq!(a.gap_sensors, b.gap_sensors);
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn missing_multiplicity_filled_by_gap_sensor() {
        let f = field(&[(0, 0.0, 2.0)]);
        let t = TargetSet::new(vec![1.0]).unwrap();
        let r = k_oga(&f, &t, 2).unwrap();
        assert_eq!(r.selected_ids[0], SensorId(0));
        assert_eq!(r.count, 2);
        assert_eq!(r.virtual_count(), 1);
        assert!(!r.fully_covered);
    }

    #[test]
    fn zero_k_rejected() {
        let f = field(&[(0, 0.0, 2.0)]);
        let t = TargetSet::new(vec![1.0]).unwrap();
        assert!(k_oga(&f, &t, 0).is_err());
    }
}
