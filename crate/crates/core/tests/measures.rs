use diluted_spectra::generating::{hat_coefficients, named_series, DSource};
use diluted_spectra::measures::{
    density_eval, density_moments_exact, dilate, form_moment_exact, moment_match_numerator, quadrature_moment,
    recover_density, stieltjes_eval, DensityForm, Sign, Transform,
};
use diluted_spectra::{Error, Rational};
use num_complex::Complex64;
use proptest::prelude::*;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

#[test]
fn quadrature_agrees_with_exact_moments() {
    let forms = [
        DensityForm::sigma(),
        DensityForm::sigma1(),
        DensityForm::sigma_hat1(Sign::Positive),
        DensityForm::sigma_hat2(Sign::Positive),
    ];
    for f in &forms {
        for k in 0..=6 {
            let exact = form_moment_exact(f, k).unwrap().to_f64();
            let quad = quadrature_moment(f, k, 1e-10).unwrap();
            assert!((exact - quad).abs() < 1e-9 * exact.abs().max(1.0), "{} k={k}", f.name);
        }
    }
}

#[test]
fn rescaled_kesten_mckay_moments() {
    // x^{2k} convention: m_2 = 1 and m_4 = (2c - 1)/c.
    let km = DensityForm::kesten_mckay(r(3, 1), true).unwrap();
    assert!((quadrature_moment(&km, 1, 1e-8).unwrap() - 1.0).abs() < 1e-8);
    assert!((quadrature_moment(&km, 2, 1e-8).unwrap() - 5.0 / 3.0).abs() < 1e-8);
    let arcsine = DensityForm::kesten_mckay(r(2, 1), false).unwrap();
    let want = 1.0 / (std::f64::consts::PI * 3f64.sqrt());
    assert!((density_eval(&arcsine, 1.0).unwrap() - want).abs() < 1e-7);
}

#[test]
fn hat_tables_come_from_the_positive_numerators() {
    let (bh, dh) = hat_coefficients(8, DSource::ClosedForm).unwrap();
    let q1 = moment_match_numerator(&bh.values[..3], 4).unwrap();
    assert_eq!(q1, DensityForm::sigma_hat1(Sign::Positive).numerator().unwrap());
    let q2 = moment_match_numerator(&dh.values[..5], 8).unwrap();
    assert_eq!(q2, DensityForm::sigma_hat2(Sign::Positive).numerator().unwrap());
    assert!(matches!(moment_match_numerator(&bh.values, 2), Err(Error::NoSolution { .. })));
}

#[test]
fn sigma1_moments_are_s1() {
    let s1 = named_series("S1", 13, None).unwrap();
    let q = DensityForm::sigma1();
    for k in 0..13 {
        assert_eq!(density_moments_exact(q.numerator().unwrap(), k).unwrap(), s1.coeff(k));
    }
}

#[test]
fn dilated_semicircle_edge() {
    let lam = r(41, 40);
    let d = dilate(&DensityForm::sigma(), &lam).unwrap();
    assert!((d.support_edge() - 2.05).abs() < 1e-12);
    assert_eq!(form_moment_exact(&d, 1).unwrap(), lam.pow(2));
    assert_eq!(density_eval(&d, 2.06).unwrap(), 0.0);
}

#[test]
fn recovered_densities_match_closed_forms() {
    for (t, f) in [(Transform::H, DensityForm::sigma()), (Transform::HHatB, DensityForm::sigma_hat1(Sign::Positive))] {
        for i in -18..=18 {
            let x = i as f64 / 10.0;
            let got = recover_density(t, x, 1e-8).unwrap();
            let want = density_eval(&f, x).unwrap();
            assert!((got - want).abs() < 1e-5, "{t:?} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn second_order_transform_is_the_d_series() {
    // (1/z) D(1/z^2) at a large real z.
    let z = 7.0f64;
    let d = named_series("D", 40, None).unwrap();
    let want = d.eval_f64(1.0 / (z * z)) / z;
    let got = stieltjes_eval(Transform::H2, Complex64::new(z, 0.0)).unwrap();
    assert!((got.re - want).abs() < 1e-14 && got.im.abs() < 1e-14);
}

proptest! {
    #[test]
    fn moment_match_round_trips(q in proptest::collection::vec(-20i64..20, 4)) {
        let mut num = vec![Rational::zero(); 7];
        for (j, v) in q.iter().enumerate() {
            num[2 * j] = Rational::from_int(*v);
        }
        let moments: Vec<Rational> = (0..6).map(|k| density_moments_exact(&num, k).unwrap()).collect();
        prop_assert_eq!(moment_match_numerator(&moments, 6).unwrap(), num);
    }

    #[test]
    fn h_solves_its_quadratic(re in -5.0f64..5.0, im in 0.01f64..5.0, flip in any::<bool>()) {
        let z = Complex64::new(re, if flip { -im } else { im });
        let h = stieltjes_eval(Transform::H, z).unwrap();
        prop_assert!((h * h - z * h + 1.0).norm() < 1e-12);
        prop_assert!(h.norm() < 1.0);
        prop_assert!(h.im * z.im <= 0.0);
    }
}
