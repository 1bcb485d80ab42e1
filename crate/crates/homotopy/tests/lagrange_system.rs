use nalgebra::Matrix3;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vedkit_homotopy::edlagrange::*;

fn random_point(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..NUM_VARS).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect()
}

#[test]
fn gradient_matches_central_differences() {
    let det = det_polynomial();
    let grads = grad_det_polynomials();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let h = 1e-5;
    for _ in 0..20 {
        let x = random_point(&mut rng);
        for (k, g) in grads.iter().enumerate() {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[k] += h;
            minus[k] -= h;
            let fd = (det.eval(&plus) - det.eval(&minus)) / (2.0 * h);
            let exact = g.eval(&x);
            let rel = (fd - exact).norm() / exact.norm().max(1.0);
            assert!(rel < 1e-6, "coordinate {k}: relative error {rel:e}");
        }
    }
}

#[test]
fn determinant_is_cubic_homogeneous() {
    let det = det_polynomial();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..20 {
        let x = random_point(&mut rng);
        let s = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let scaled: Vec<_> = x.iter().map(|z| z * s).collect();
        let lhs = det.eval(&scaled);
        let rhs = det.eval(&x) * s.powu(3);
        assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
    }
}

#[test]
fn determinant_matches_symmetric_matrix() {
    let det = det_polynomial();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let x = random_point(&mut rng);
    let m = Matrix3::from_fn(|i, j| x[coord_index(i, j)]);
    assert!((det.eval(&x) - m.determinant()).norm() < 1e-12);
}

#[test]
fn bw_pairing_of_powers_is_power_of_dot_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..50 {
        let d = rng.gen_range(1..=4);
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let w: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let dot: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let pairing =
            bw_product(&SymTensor::power_of_linear_form(&v, d), &SymTensor::power_of_linear_form(&w, d)).unwrap();
        assert!((pairing - dot.powi(d as i32)).abs() < 1e-12);
    }
}

#[test]
fn bw_pairing_with_power_evaluates_polynomial() {
    // <f, (v.x)^2> = f(v) for f = 3 x0^2 - x0 x2 + 0.5 x1^2
    let f =
        SymTensor::from_polynomial(3, 2, &[(vec![2, 0, 0], 3.0), (vec![1, 0, 1], -1.0), (vec![0, 2, 0], 0.5)]).unwrap();
    let v = [0.4, -1.5, 2.0];
    let value = 3.0 * v[0] * v[0] - v[0] * v[2] + 0.5 * v[1] * v[1];
    let pairing = bw_product(&f, &SymTensor::power_of_linear_form(&v, 2)).unwrap();
    assert!((pairing - value).abs() < 1e-12);
}

#[test]
fn bw_gram_is_bw_pairing_on_quadrics() {
    // Coordinates x_ij pair as the coefficients of the quadric sum x_ij y_i y_j.
    let g = bw_gram();
    let diag_ok = (0..3).all(|i| g[coord_index(i, i)][coord_index(i, i)] == 1.0);
    let off_ok = (0..3).all(|i| (i + 1..3).all(|j| g[coord_index(i, j)][coord_index(i, j)] == 2.0));
    assert!(diag_ok && off_ok);
}

#[test]
fn metric_json_roundtrip() {
    let m = random_metric(7).unwrap();
    let text = serde_json::to_string(&m).unwrap();
    let back: MetricSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(m, back);
    let bad = r#"{"gram": [[1,0,0,0,0,0],[0,1,0,0,0,0],[0,0,1,0,0,0],[0,0,0,1,0,0],[0,0,0,0,1,0],[0,0,0,0,0,0]]}"#;
    assert!(serde_json::from_str::<MetricSpec>(bad).is_err());
}

#[test]
fn bezout_number_is_3_to_the_7() {
    let sys = build_system(&MetricSpec::identity(), &TargetPoint::random(1)).unwrap();
    assert_eq!(sys.degrees(), vec![3; 7]);
    assert_eq!(sys.bezout_number(), 2187);
}

proptest! {
    #[test]
    fn quadratic_form_matches_gram(v in proptest::array::uniform6(-3.0f64..3.0), seed in 0u64..50) {
        let m = random_metric(seed).unwrap();
        let direct: f64 = (0..6).map(|i| (0..6).map(|j| m.gram[i][j] * v[i] * v[j]).sum::<f64>()).sum();
        prop_assert!((m.quadratic_form(&v) - direct).abs() < 1e-9);
    }
}
