use hullwalk::geometry::{count_faces, is_face, is_vertex, origin_in_hull, PointSet, DEFAULT_EPS};
use proptest::prelude::*;

fn point_set(dim: usize, min: usize, max: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, dim), min..=max)
        .prop_map(move |pts| PointSet::new(dim, &pts).unwrap())
}

fn rotate(ps: &PointSet, angle: f64, shift: [f64; 2]) -> PointSet {
    let (s, c) = angle.sin_cos();
    let pts: Vec<Vec<f64>> =
        ps.points().map(|p| vec![c * p[0] - s * p[1] + shift[0], s * p[0] + c * p[1] + shift[1]]).collect();
    PointSet::new(2, &pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polygons_have_as_many_edges_as_vertices(ps in point_set(2, 3, 9)) {
        let f0 = count_faces(&ps, 0, DEFAULT_EPS);
        let f1 = count_faces(&ps, 1, DEFAULT_EPS);
        if let (Ok(f0), Ok(f1)) = (f0, f1) {
            prop_assert_eq!(f0, f1);
            prop_assert!(f0 >= 3);
        }
    }

    #[test]
    fn single_point_faces_are_vertices(ps in point_set(3, 1, 8)) {
        for i in 0..ps.len() {
            prop_assert_eq!(is_face(&ps, &[i], DEFAULT_EPS).unwrap(), is_vertex(i, &ps, DEFAULT_EPS).unwrap());
        }
    }

    #[test]
    fn vertex_count_is_invariant_under_rigid_motion(ps in point_set(2, 3, 9), angle in 0.0f64..6.3, dx in -5.0f64..5.0, dy in -5.0f64..5.0) {
        let moved = rotate(&ps, angle, [dx, dy]);
        prop_assert_eq!(count_faces(&ps, 0, DEFAULT_EPS).unwrap(), count_faces(&moved, 0, DEFAULT_EPS).unwrap());
    }

    #[test]
    fn face_status_is_invariant_under_relabelling(ps in point_set(3, 5, 8), seed in 0usize..1000) {
        let n = ps.len();
        let perm: Vec<usize> = (0..n).map(|i| (i * 3 + seed) % n).collect();
        // perm is a bijection only when gcd(3, n) = 1
        prop_assume!(n % 3 != 0);
        let pts: Vec<Vec<f64>> = perm.iter().map(|&j| ps.point(j).to_vec()).collect();
        let shuffled = PointSet::new(3, &pts).unwrap();
        for (i, &j) in perm.iter().enumerate() {
            for (i2, &j2) in perm.iter().enumerate() {
                if i < i2 && j < j2 {
                    let a = is_face(&shuffled, &[i, i2], DEFAULT_EPS);
                    let b = is_face(&ps, &[j, j2], DEFAULT_EPS);
                    if let (Ok(a), Ok(b)) = (a, b) {
                        prop_assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn generic_hulls_in_space_satisfy_euler(ps in point_set(3, 4, 8)) {
        let f: Vec<usize> = (0..3).map(|k| count_faces(&ps, k, DEFAULT_EPS).unwrap()).collect();
        prop_assert_eq!(f[0] as i64 - f[1] as i64 + f[2] as i64, 2);
        // simplicial polytope: every facet has three edges, each shared twice
        prop_assert_eq!(2 * f[1], 3 * f[2]);
    }

    #[test]
    fn hull_contains_its_centroid(ps in point_set(3, 1, 8)) {
        let n = ps.len() as f64;
        let centroid: Vec<f64> = (0..3).map(|j| ps.points().map(|p| p[j]).sum::<f64>() / n).collect();
        let pts: Vec<Vec<f64>> = ps.points().map(|p| p.iter().zip(&centroid).map(|(a, b)| a - b).collect()).collect();
        prop_assert!(origin_in_hull(&PointSet::new(3, &pts).unwrap(), DEFAULT_EPS).unwrap());
    }

    #[test]
    fn points_on_one_side_exclude_the_origin(ps in point_set(2, 1, 8)) {
        let pts: Vec<Vec<f64>> = ps.points().map(|p| vec![p[0].abs() + 0.5, p[1]]).collect();
        prop_assert!(!origin_in_hull(&PointSet::new(2, &pts).unwrap(), DEFAULT_EPS).unwrap());
    }
}
