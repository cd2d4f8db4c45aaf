use hullwalk::closed_forms::{face_prob_bridge, face_prob_walk, vertex_prob_walk};
use hullwalk::montecarlo::{
    compare_with_rerun, estimate_face_prob, estimate_shift_average, ComparisonReport, McConfig, PathModel,
    ShiftMode, Z_THRESHOLD,
};
use hullwalk::sampling::{BridgeSpec, WalkSpec};

fn passes(report: (ComparisonReport, bool)) -> bool {
    report.0.pass
}

#[test]
fn bridge_diagonal_is_a_face_half_the_time() {
    let model = PathModel::Bridge(BridgeSpec::new(4, 2).unwrap());
    let exact = face_prob_bridge(4, 2, &[0, 2]).unwrap();
    let r = compare_with_rerun(&exact, &McConfig::new(50_000, 21), Z_THRESHOLD, |c| {
        estimate_face_prob(&model, &[0, 2], c)
    })
    .unwrap();
    assert!(passes(r));
}

#[test]
fn time_reversed_tuples_agree() {
    let model = PathModel::Walk(WalkSpec::symmetric(6, 2).unwrap());
    let a = estimate_face_prob(&model, &[1, 4], &McConfig::new(40_000, 22)).unwrap();
    let b = estimate_face_prob(&model, &[2, 5], &McConfig::new(40_000, 23)).unwrap();
    let z = (a.p_hat - b.p_hat) / (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    assert!(z.abs() < 4.0, "z = {z}");
    assert_eq!(face_prob_walk(6, 2, &[1, 4]).unwrap(), face_prob_walk(6, 2, &[2, 5]).unwrap());
}

#[test]
fn large_noise_recovers_the_symmetric_vertex_probability() {
    let model = PathModel::Walk(WalkSpec::nonsymmetric(5, 2, 100.0).unwrap());
    let exact = vertex_prob_walk(5, 2, 0).unwrap();
    let r = compare_with_rerun(&exact, &McConfig::new(20_000, 24), Z_THRESHOLD, |c| {
        estimate_face_prob(&model, &[0], c)
    })
    .unwrap();
    assert!(passes(r));
}

#[test]
fn symmetric_shift_average_of_vertices_is_the_mean_vertex_probability() {
    let n = 5;
    let d = 2;
    let spec = WalkSpec::symmetric(n, d).unwrap();
    let mean = (0..=n).map(|i| vertex_prob_walk(n, d, i).unwrap()).sum::<hullwalk::BigRational>()
        / hullwalk::BigInt::from(n + 1);
    // k = 0 has no lags; the windowed and cyclic averages coincide
    let r = compare_with_rerun(&mean, &McConfig::new(20_000, 25), Z_THRESHOLD, |c| {
        estimate_shift_average(&spec, &[], ShiftMode::Windowed, c)
    })
    .unwrap();
    assert!(passes(r));
}
