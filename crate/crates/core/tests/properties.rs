use std::collections::BTreeSet;
use std::f64::consts::PI;

use linecover::algorithms::{find_gaps, k_oga, logm, markov_violation, oga, oga_continuous, SelectionResult};
use linecover::baselines::{brute_force_min_kcover, build_barrier_graph, greedy_max_coverage, k_disjoint_paths, Node};
use linecover::model::{discretize, project, Domain, ProjectedInterval, Sensor, SensorField, SensorId, TargetSet};
use proptest::prelude::*;

const WIDTH: f64 = 20.0;

/// Intervals on a half-unit grid so that touching endpoints are common.
fn grid_field(parts: &[(u8, u8)]) -> SensorField {
    let ivs = parts
        .iter()
        .enumerate()
        .map(|(i, &(u, len))| {
            let u = f64::from(u) / 2.0;
            ProjectedInterval::new(SensorId(i as u32), u, (u + f64::from(len) / 2.0).min(WIDTH))
        })
        .collect();
    SensorField::from_intervals(ivs, Domain::new(0.0, WIDTH).unwrap()).unwrap()
}

fn parts(max: usize) -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((0u8..40, 0u8..16), 1..=max)
}

/// A random field that always covers `[0, WIDTH]`: an overlapping chain of
/// intervals plus random extras.
fn covering_parts() -> impl Strategy<Value = Vec<(u8, u8)>> {
    (prop::collection::vec(3u8..16, 12), parts(12)).prop_map(|(lens, extra)| {
        let mut out = Vec::new();
        let mut start = 0u8;
        for len in lens {
            out.push((start, len));
            if start + len >= 40 {
                break;
            }
            start += len - 1;
        }
        out.push((start.min(39), 40 - start.min(39)));
        out.extend(extra);
        out
    })
}

fn targets() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=40, 1..=20)
}

fn target_set(raw: &[u8]) -> TargetSet {
    let mut xs: Vec<f64> = raw.iter().map(|&t| f64::from(t) / 2.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    TargetSet::new(xs).unwrap()
}

/// Does the union of the closed intervals contain every point of `[a, b]`?
fn covers_segment(ivs: &[ProjectedInterval], a: f64, b: f64) -> bool {
    let mut sorted: Vec<_> = ivs.iter().map(|iv| (iv.u, iv.v)).collect();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut reach = a;
    let mut started = false;
    for (u, v) in sorted {
        if v < a {
            continue;
        }
        if (!started && u > a) || (started && u > reach) {
            return false;
        }
        started = true;
        reach = reach.max(v);
        if reach >= b {
            return true;
        }
    }
    false
}

fn real_count(r: &SelectionResult) -> usize {
    r.real_count()
}

fn fully_coverable(field: &SensorField, t: &TargetSet) -> bool {
    t.xs().iter().all(|&x| field.intervals().iter().any(|iv| iv.contains(x)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_contains_footprint_and_is_tight(
        x in -50.0f64..50.0,
        y in -50.0f64..50.0,
        radius in 0.5f64..20.0,
        fov in 1.0f64..=360.0,
        direction in 0.0f64..360.0,
        omni in any::<bool>(),
    ) {
        let sensor = if omni {
            Sensor::omni(0, x, y, radius)
        } else {
            Sensor::directional(0, x, y, radius, fov, direction)
        };
        let iv = project(&sensor).unwrap();
        let (first, span) = if omni { (0.0, 360.0) } else { (direction - fov / 2.0, fov) };
        // apex plus 10^4 points along the arc; every footprint extreme lies on these
        let mut lo = x;
        let mut hi = x;
        for i in 0..=10_000 {
            let theta = (first + span * f64::from(i) / 10_000.0) * PI / 180.0;
            let px = x + radius * theta.cos();
            prop_assert!(px >= iv.u - 1e-6 && px <= iv.v + 1e-6);
            lo = lo.min(px);
            hi = hi.max(px);
        }
        prop_assert!((lo - iv.u).abs() <= 1e-6, "u = {} but footprint reaches {}", iv.u, lo);
        prop_assert!((hi - iv.v).abs() <= 1e-6, "v = {} but footprint reaches {}", iv.v, hi);
    }

    #[test]
    fn discretized_targets_decide_segment_cover(p in parts(8)) {
        let field = grid_field(&p);
        let t = discretize(&field).unwrap();
        let d = field.domain();
        let n = field.len();
        for mask in 0u32..(1 << n) {
            let subset: Vec<ProjectedInterval> =
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| field.intervals()[i]).collect();
            let discrete = t.xs().iter().all(|&x| subset.iter().any(|iv| iv.contains(x)));
            prop_assert_eq!(discrete, covers_segment(&subset, d.start, d.end), "mask {:b}", mask);
        }
    }

    #[test]
    fn input_order_does_not_change_selection(p in parts(12), raw in targets(), rot in 0usize..12) {
        let field = grid_field(&p);
        let mut ivs = field.intervals().to_vec();
        ivs.reverse();
        let len = ivs.len();
        ivs.rotate_left(rot % len);
        let shuffled = SensorField::from_intervals(ivs, field.domain()).unwrap();
        prop_assert_eq!(field.intervals(), shuffled.intervals());
        let t = target_set(&raw);
        prop_assert_eq!(oga(&field, &t).unwrap(), oga(&shuffled, &t).unwrap());
        prop_assert_eq!(
            oga_continuous(&field, &field.domain()).unwrap(),
            oga_continuous(&shuffled, &field.domain()).unwrap()
        );
    }

    #[test]
    fn selections_are_markov(p in parts(12), raw in targets()) {
        let field = grid_field(&p);
        let t = target_set(&raw);
        let r = oga(&field, &t).unwrap();
        let ivs = r.intervals(&field).unwrap();
        prop_assert_eq!(markov_violation(&ivs, &t), None);
    }

    #[test]
    fn reach_is_monotone_and_no_target_is_skipped(p in parts(12), raw in targets()) {
        let field = grid_field(&p);
        let t = target_set(&raw);
        let r = oga(&field, &t).unwrap();
        let ivs = r.intervals(&field).unwrap();
        for w in r.trace.windows(2) {
            prop_assert!(w[1].reach > w[0].reach);
        }
        for (step, trace) in r.trace.iter().enumerate() {
            let current = trace.current_target.unwrap();
            for &x in &t.xs()[..current] {
                prop_assert!(ivs[..step].iter().any(|iv| iv.contains(x)), "target {} skipped", x);
            }
        }
        for &x in t.xs() {
            prop_assert!(ivs.iter().any(|iv| iv.contains(x)));
        }

        let c = oga_continuous(&field, &field.domain()).unwrap();
        for w in c.trace.windows(2) {
            prop_assert!(w[1].reach > w[0].reach);
            prop_assert_eq!(w[1].current, w[0].reach);
        }
    }

    #[test]
    fn continuous_and_discrete_counts_agree(p in parts(16)) {
        let field = grid_field(&p);
        let continuous = oga_continuous(&field, &field.domain()).unwrap();
        let discrete = oga(&field, &discretize(&field).unwrap()).unwrap();
        prop_assert_eq!(continuous.count, discrete.count);
        prop_assert_eq!(continuous.virtual_count(), discrete.virtual_count());
    }

    #[test]
    fn count_is_monotone_in_segment_end(p in parts(16)) {
        let field = grid_field(&p);
        let mut last = 0;
        for i in 1..=80 {
            let beta = WIDTH * f64::from(i) / 80.0;
            let count = oga_continuous(&field, &Domain::new(0.0, beta).unwrap()).unwrap().count;
            prop_assert!(count >= last, "beta {}: {} < {}", beta, count, last);
            last = count;
        }
    }

    #[test]
    fn oga_matches_exhaustive_minimum(p in parts(12), raw in targets()) {
        let field = grid_field(&p);
        let t = target_set(&raw);
        let r = oga(&field, &t).unwrap();
        let augmented = linecover::algorithms::augment_with_gap_sensors(&field, &t, 1).unwrap();
        prop_assume!(augmented.len() <= linecover::baselines::ORACLE_LIMIT);
        prop_assert_eq!(Some(r.count), brute_force_min_kcover(&augmented, &t, 1).unwrap());
    }

    #[test]
    fn greedy_never_beats_oga(p in parts(16), raw in targets()) {
        let field = grid_field(&p);
        let t = target_set(&raw);
        prop_assume!(fully_coverable(&field, &t));
        let g = greedy_max_coverage(&field, &t).unwrap();
        let o = oga(&field, &t).unwrap();
        prop_assert!(o.fully_covered);
        prop_assert!(g.count >= o.count, "greedy {} < oga {}", g.count, o.count);
    }

    #[test]
    fn one_path_benchmark_matches_oga_without_gaps(p in covering_parts()) {
        let field = grid_field(&p);
        let o = oga_continuous(&field, &field.domain()).unwrap();
        prop_assert!(o.fully_covered);
        let paths = k_disjoint_paths(&build_barrier_graph(&field, &field.domain()), 1).unwrap();
        prop_assert_eq!(paths.virtual_count(), 0);
        prop_assert!(real_count(&paths) >= o.count);
        prop_assert_eq!(real_count(&paths), o.count);
    }

    #[test]
    fn oracle_minimum_grows_with_k(p in parts(12), raw in targets()) {
        let field = grid_field(&p);
        let t = target_set(&raw);
        let mut last = 0;
        for k in 1..=3 {
            match brute_force_min_kcover(&field, &t, k).unwrap() {
                Some(m) => {
                    prop_assert!(m >= last);
                    last = m;
                }
                None => break,
            }
        }
    }

    #[test]
    fn k_oga_matches_exhaustive_minimum(p in parts(8), raw in targets(), k in 1usize..=3) {
        let field = grid_field(&p);
        let t = target_set(&raw);
        let augmented = linecover::algorithms::augment_with_gap_sensors(&field, &t, k).unwrap();
        prop_assume!(augmented.len() <= linecover::baselines::ORACLE_LIMIT);
        let r = k_oga(&field, &t, k).unwrap();
        prop_assert_eq!(Some(r.count), brute_force_min_kcover(&augmented, &t, k).unwrap());
    }

    #[test]
    fn graph_weights_are_symmetric_and_zero_on_overlap(p in parts(12)) {
        let field = grid_field(&p);
        let g = build_barrier_graph(&field, &field.domain());
        let nodes = g.nodes();
        prop_assert_eq!(nodes.len(), field.len() + 2);
        for &a in &nodes {
            for &b in &nodes {
                if a == b {
                    continue;
                }
                prop_assert_eq!(g.weight(a, b), g.weight(b, a));
                if let (Node::Sensor(x), Node::Sensor(y)) = (a, b) {
                    let overlap = field.interval(x).unwrap().overlaps(field.interval(y).unwrap());
                    prop_assert_eq!(g.weight(a, b) == Some(0), overlap);
                    prop_assert!(g.weight(a, b).is_some());
                }
            }
        }
    }

    #[test]
    fn mending_stays_within_bounds(p in parts(16), spare in parts(16), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..=4)) {
        let mut all = p.clone();
        all.extend(spare);
        let field = grid_field(&all);
        let domain = field.domain();
        let previous = oga_continuous(&field, &domain).unwrap();
        let reals: Vec<SensorId> = previous
            .selected_ids
            .iter()
            .copied()
            .filter(|id| !previous.virtual_ids.contains(id))
            .collect();
        prop_assume!(!reals.is_empty());
        let failed: BTreeSet<SensorId> = picks.iter().map(|i| reals[i.index(reals.len())]).collect();
        let m = failed.len();
        let gaps = find_gaps(&previous, &failed, &field, &domain).unwrap();
        let mended = logm(&previous, &failed, &gaps, &field).unwrap();
        mended.validate().unwrap();
        let removed: Vec<SensorId> = failed.iter().copied().collect();
        let fresh = oga_continuous(&field.without(&removed), &domain).unwrap();
        let diff = real_count(&mended) as i64 - real_count(&fresh) as i64;
        prop_assert!(diff >= 0, "mended {} < fresh {}", real_count(&mended), real_count(&fresh));
        let bound = 2 * m as i64 - 1;
        prop_assert!(diff <= bound, "m = {}, diff = {}", m, diff);
        // the mended selection still covers everything the survivors and spares can
        let ivs = mended.intervals(&field).unwrap();
        prop_assert!(covers_segment(&ivs, domain.start, domain.end));
    }
}

#[test]
fn spare_sensor_mends_single_gap() {
    let ivs = [(1, 0.0, 4.0), (2, 3.0, 7.0), (3, 6.0, 10.0), (4, 2.0, 6.0), (5, 5.0, 9.0)]
        .iter()
        .map(|&(id, u, v)| ProjectedInterval::new(SensorId(id), u, v))
        .collect();
    let field = SensorField::from_intervals(ivs, Domain::new(0.0, 10.0).unwrap()).unwrap();
    let domain = field.domain();
    let previous = oga_continuous(&field, &domain).unwrap();
    assert_eq!(previous.selected_ids, vec![SensorId(1), SensorId(2), SensorId(3)]);
    let failed = BTreeSet::from([SensorId(2)]);
    let gaps = find_gaps(&previous, &failed, &field, &domain).unwrap();
    assert_eq!(gaps.len(), 1);
    assert_eq!((gaps[0].u_g, gaps[0].v_g), (4.0, 6.0));
    let mended = logm(&previous, &failed, &gaps, &field).unwrap();
    let chosen: BTreeSet<SensorId> = mended.selected_ids.iter().copied().collect();
    assert_eq!(chosen, BTreeSet::from([SensorId(1), SensorId(3), SensorId(4)]));
    let fresh = oga_continuous(&field.without(&[SensorId(2)]), &domain).unwrap();
    assert_eq!(fresh.count, 3);
    // no cover of [0, 10] without sensor 2 uses fewer than 3 intervals
    let t = discretize(&field.without(&[SensorId(2)])).unwrap();
    assert_eq!(brute_force_min_kcover(&field.without(&[SensorId(2)]), &t, 1).unwrap(), Some(3));
}
