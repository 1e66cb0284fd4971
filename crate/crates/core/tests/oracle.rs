use curved_landau::oracle::{
    compare_radial, compare_z, radial_fd_eigen, z_fd_eigen, Expectation, GridSpec, RadialScheme,
};
use curved_landau::spectra::{enumerate_states, EnumerateOptions};
use curved_landau::wavefunctions::ZVariant;
use curved_landau::{FieldParams, TwiceM};

fn tm(v: i64) -> TwiceM {
    TwiceM::new(v).unwrap()
}

fn assert_close(got: &[f64], want: &[f64], rel: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= rel * w.abs().max(1.0), "{got:?} vs {want:?}");
    }
}

#[test]
fn radial_towers_at_four_thousand_points() {
    let grid = GridSpec::radial(1000, 3);
    let fd = radial_fd_eigen(tm(3), 2.0, &grid, 4, RadialScheme::HalfDensity).unwrap();
    assert_close(&fd.extrapolated, &[0.0, 5.0, 12.0, 21.0], 1e-3);
    let fd = radial_fd_eigen(tm(1), 0.0, &grid, 3, RadialScheme::HalfDensity).unwrap();
    assert_close(&fd.extrapolated, &[1.0, 4.0, 9.0], 1e-3);
    for order in fd.observed_order.unwrap() {
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }
    let fd = radial_fd_eigen(tm(3), 0.0, &grid, 3, RadialScheme::HalfDensity).unwrap();
    assert_close(&fd.extrapolated, &[4.0, 9.0, 16.0], 1e-3);
}

#[test]
fn clamped_scheme_is_fine_away_from_the_double_exponent() {
    let fd = radial_fd_eigen(tm(3), 0.0, &GridSpec::radial(1000, 3), 3, RadialScheme::Clamped).unwrap();
    assert_close(&fd.extrapolated, &[4.0, 9.0, 16.0], 1e-3);
    // at m = 1/2 the end-point exponents coincide and the clamped scheme stalls
    let fd = radial_fd_eigen(tm(1), 0.0, &GridSpec::radial(1000, 3), 1, RadialScheme::Clamped).unwrap();
    assert!((fd.extrapolated[0] - 1.0).abs() > 1e-2);
}

#[test]
fn radial_oracle_is_complete() {
    let grid = GridSpec::radial(500, 3);
    let cases = [
        (3, 2.0),
        (1, 0.0),
        (3, 0.0),
        (-1, 2.0),
        (1, 0.3),
        (-3, 0.7),
        (1, 2.0),
        (5, 0.2),
        (-1, 0.5),
        (3, 1.0),
    ];
    for (twice_m, b) in cases {
        let cmp = compare_radial(tm(twice_m), b, &grid, 30.0, RadialScheme::HalfDensity, 1e-3).unwrap();
        assert!(cmp.pass, "twice_m = {twice_m}, B = {b}: {cmp:#?}");
    }
}

#[test]
fn subdominant_towers_are_absent() {
    let cmp = compare_radial(tm(1), 0.3, &GridSpec::radial(500, 3), 20.0, RadialScheme::HalfDensity, 1e-3).unwrap();
    assert!(cmp.pass);
    assert!(cmp.entries.iter().any(|e| e.status == Expectation::NotExpectedUnderDirichlet));
}

#[test]
fn z_pencil_examples() {
    let grid = GridSpec::polar(128, 2);
    let fd = z_fd_eigen(2.0, &grid, 6).unwrap();
    assert_close(&fd.extrapolated, &[-4.5, -3.5, -2.5, 2.5, 3.5, 4.5], 1e-3);
    let fd = z_fd_eigen(1.0, &grid, 4).unwrap();
    assert_close(&fd.extrapolated, &[-2.5, -1.5, 1.5, 2.5], 1e-3);
}

#[test]
fn z_pencil_has_no_variant_three_values() {
    for lambda in [1.0, 2.0, 5f64.sqrt()] {
        let cmp = compare_z(lambda, &GridSpec::polar(128, 2), 2, 1e-3).unwrap();
        assert!(cmp.pass, "{cmp:#?}");
    }
}

#[test]
fn z_pencil_is_orientation_invariant_and_symmetric() {
    let grid = GridSpec::polar(96, 2);
    let a = z_fd_eigen(1.7, &grid, 6).unwrap();
    let b = z_fd_eigen(1.7, &grid.reversed(), 6).unwrap();
    for (x, y) in a.extrapolated.iter().zip(&b.extrapolated) {
        assert!((x - y).abs() < 1e-6);
    }
    let n = a.extrapolated.len();
    for j in 0..n {
        assert!((a.extrapolated[j] + a.extrapolated[n - 1 - j]).abs() < 1e-8);
    }
}

#[test]
fn normalizability_matches_the_z_variant() {
    let opts = EnumerateOptions::default();
    for b in [0.5, 1.0, 2.5] {
        let params = FieldParams::new(b, 1.0).unwrap();
        let recs = enumerate_states(params, &[tm(-3), tm(-1), tm(1), tm(3)], 3, 2, &opts).unwrap();
        for rec in recs {
            assert_eq!(rec.normalizable, rec.z_variant == ZVariant::V4, "{rec:?}");
        }
    }
}
