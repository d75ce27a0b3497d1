use num_complex::Complex64;
use num_traits::Zero;
use twistchar::characters::numeric::{elliptic_gamma, partition3d_factor, partition3d_truncated, theta0, ComplexParams};
use twistchar::characters::{
    free_character, free_character_pe, potential_character, potential_spec, potential_via_su2, specialize_to_potential,
    su2_character, su2_spec, su2_to_torus, torus_spec, unsigned, Convention, FlavorWeights,
};
use twistchar::operators::brute_supercharacter;
use twistchar::rational::q_int;
use twistchar::{Error, FugacitySpec, Substitution, TruncatedSeries};

#[test]
fn free_character_low_coefficients() {
    let spec = torus_spec(3, 3, 2).unwrap();
    let chi = free_character(&FlavorWeights::uniform(1), &spec).unwrap();
    assert_eq!(chi.constant_term(), q_int(1));
    assert_eq!(chi.coeff_int(&[("z", 1)]).unwrap(), q_int(1));
    assert_eq!(chi.coeff_int(&[("u", 1), ("q1", 1), ("q2", 1)]).unwrap(), q_int(-1));
    // The same operators counted by the oracle.
    let brute = brute_supercharacter(&spec, &FlavorWeights::uniform(1)).unwrap();
    assert_eq!(brute.coeff_int(&[("z", 1)]).unwrap(), q_int(1));
    assert_eq!(brute.coeff_int(&[("u", 1), ("q1", 1), ("q2", 1)]).unwrap(), q_int(-1));
}

#[test]
fn free_character_requires_its_variables() {
    let spec = FugacitySpec::builder().var("q1", 0, 2).var("z", 0, 2).build().unwrap();
    assert!(matches!(free_character(&FlavorWeights::uniform(1), &spec), Err(Error::MissingVariable(_))));
}

#[test]
fn product_and_plethystic_constructions_agree() {
    let spec = torus_spec(4, 4, 2).unwrap();
    for dim in 1..=3 {
        let w = FlavorWeights::uniform(dim);
        assert_eq!(free_character(&w, &spec).unwrap(), free_character_pe(&w, &spec).unwrap(), "dim V = {dim}");
    }
    let two_u1 = FlavorWeights::new(vec![vec![1, 0], vec![1, 2]]).unwrap();
    let spec2 = FugacitySpec::builder()
        .var("q1", 0, 3)
        .var("q2", 0, 3)
        .var("z1", -2, 3)
        .var("z2", -2, 3)
        .var("u", 0, 2)
        .mode(&["q1", "q2"], 3)
        .build()
        .unwrap();
    let lp = free_character(&two_u1, &spec2).unwrap();
    assert_eq!(lp, free_character_pe(&two_u1, &spec2).unwrap());
    assert_eq!(lp, brute_supercharacter(&spec2, &two_u1).unwrap());
}

#[test]
fn unsigned_count_is_nonnegative() {
    let spec = torus_spec(4, 4, 3).unwrap();
    let chi = free_character(&FlavorWeights::uniform(2), &spec).unwrap();
    let flipped = chi.substitute(&unsigned(), &spec).unwrap();
    assert!(flipped.is_nonnegative());
    assert!(!chi.is_nonnegative());
}

#[test]
fn su2_character_examples() {
    let spec = su2_spec(4, 4, 2).unwrap();
    let chi = su2_character(1, &spec).unwrap();
    // Only the m = 0 factor (1 − u z⁻¹q²)/(1 − z) reaches q⁰ and u z⁻¹q² p⁰.
    for k in 0..=4 {
        assert_eq!(chi.coeff_int(&[("z", k)]).unwrap(), q_int(1));
    }
    assert_eq!(chi.coeff_int(&[("u", 1), ("z", -1), ("q", 2)]).unwrap(), q_int(-1));
    assert_eq!(chi.coeff_int(&[("u", 1), ("z", 0), ("q", 2)]).unwrap(), q_int(-1));
}

#[test]
fn su2_matches_torus_after_change_of_variables() {
    for dim in 1..=2 {
        let m = 5;
        let su2 = su2_character(dim, &su2_spec(m, 4, 2).unwrap()).unwrap();
        let torus = torus_spec(m, 4, 2).unwrap();
        let mapped = su2.substitute(&su2_to_torus(), &torus).unwrap();
        assert_eq!(mapped, free_character(&FlavorWeights::uniform(dim), &torus).unwrap(), "dim V = {dim}");
    }
}

#[test]
fn potential_character_examples() {
    let spec = potential_spec(5, 6).unwrap();
    assert_eq!(potential_character(1, &spec).unwrap(), TruncatedSeries::one(&spec));
    let chi2 = potential_character(2, &spec).unwrap();
    assert_eq!(chi2.coeff_int(&[("z", 1)]).unwrap(), q_int(1));
    assert_eq!(chi2.coeff_int(&[("z", 2)]).unwrap(), q_int(0));
    assert!(matches!(potential_character(0, &spec), Err(Error::InvalidArgument(_))));
}

#[test]
fn z_form_specialization_reproduces_the_potential_character() {
    let target = potential_spec(4, 5).unwrap();
    for n in 1..=3 {
        let via = potential_via_su2(n, Convention::ZForm, &target).unwrap();
        assert_eq!(via, potential_character(n, &target).unwrap(), "N = {n}");
    }
    let one = potential_via_su2(1, Convention::ZForm, &target).unwrap();
    assert_eq!(one, TruncatedSeries::one(&target));
}

#[test]
fn p_form_specialization_does_not() {
    let target = potential_spec(4, 5).unwrap();
    for n in 2..=3 {
        let via = potential_via_su2(n, Convention::PForm, &target).unwrap();
        assert_ne!(via, potential_character(n, &target).unwrap(), "N = {n}");
    }
}

#[test]
fn identity_specialization_is_identity() {
    let spec = su2_spec(3, 3, 2).unwrap();
    let chi = su2_character(1, &spec).unwrap();
    assert_eq!(chi.substitute(&Substitution::identity(), &spec).unwrap(), chi);
    assert!(specialize_to_potential(&chi, 0, Convention::ZForm, &spec).is_err());
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

const POINTS: [(f64, f64, f64, f64, f64, f64); 5] = [
    (0.3, 0.1, -0.2, 0.25, 0.6, 0.3),
    (0.4, 0.0, 0.35, 0.0, 0.5, -0.5),
    (-0.1, 0.3, 0.2, -0.2, 1.3, 0.4),
    (0.05, -0.38, 0.1, 0.1, -0.7, 0.2),
    (0.25, 0.25, -0.3, -0.1, 0.3, 1.1),
];

#[test]
fn elliptic_gamma_is_symmetric_and_shifts_by_theta() {
    for &(a, b, cc, d, e, f) in &POINTS {
        let p = ComplexParams::new(c(a, b), c(cc, d), c(e, f));
        let g = elliptic_gamma(&p).unwrap();
        assert!(rel(elliptic_gamma(&p.swapped()).unwrap(), g) < 1e-13);
        let shifted1 = elliptic_gamma(&ComplexParams { z: p.q1 * p.z, ..p }).unwrap();
        let th2 = theta0(p.z, p.q2, 1e-17, 10_000).unwrap();
        assert!(rel(shifted1, th2 * g) < 1e-10);
        let shifted2 = elliptic_gamma(&ComplexParams { z: p.q2 * p.z, ..p }).unwrap();
        let th1 = theta0(p.z, p.q1, 1e-17, 10_000).unwrap();
        assert!(rel(shifted2, th1 * g) < 1e-10);
    }
}

#[test]
fn elliptic_gamma_errors() {
    let p = ComplexParams::new(c(0.3, 0.0), c(0.2, 0.0), c(1.0, 0.0));
    assert_eq!(elliptic_gamma(&p), Err(Error::PoleWithinTolerance));
    let bad = ComplexParams::new(c(1.0, 0.0), c(0.2, 0.0), c(0.5, 0.0));
    assert!(matches!(elliptic_gamma(&bad), Err(Error::NonConvergent(_))));
    assert_eq!(Error::PoleWithinTolerance.to_string(), "pole within tolerance");
}

#[test]
fn series_expansion_matches_numeric_product() {
    let (q1, q2, z) = (c(0.05, 0.02), c(0.04, -0.03), c(0.2, 0.1));
    let spec = FugacitySpec::builder()
        .var("q1", 0, 9)
        .var("q2", 0, 9)
        .var("z", -5, 14)
        .var("u", 0, 5)
        .mode(&["q1", "q2"], 9)
        .build()
        .unwrap();
    let chi = free_character(&FlavorWeights::uniform(1), &spec).unwrap();
    let one = c(1.0, 0.0);
    let series = chi.evaluate(&[("q1", q1), ("q2", q2), ("z", z), ("u", one)]).unwrap();
    let numeric = elliptic_gamma(&ComplexParams::new(q1, q2, z)).unwrap();
    assert!(rel(series, numeric) < 1e-8, "{series} vs {numeric}");
}

#[test]
fn partition3d_structure() {
    let (t1, t2, a) = (c(0.3, 0.9), c(-0.2, 1.4), c(0.37, 0.11));
    let i = Complex64::i();
    let single = partition3d_truncated(t1, t2, a, 0, 0, 1e-14).unwrap();
    assert!(rel(single, (-i * (t1 + t2) + i * a) / (-i * a)) < 1e-14);
    let z12 = partition3d_truncated(t1, t2, a, 3, 4, 1e-14).unwrap();
    let z21 = partition3d_truncated(t2, t1, a, 3, 4, 1e-14).unwrap();
    assert!(rel(z12, z21) < 1e-12);
    // Windings ±n at one lattice point, against a direct recomputation.
    let (n1, n2, n) = (2u32, 1u32, 3i64);
    let (np, dp) = partition3d_factor(t1, t2, a, n1, n2, n);
    let (nm, dm) = partition3d_factor(t1, t2, a, n1, n2, -n);
    let base = t1 * 2.0 + t2;
    let direct = (base + 3.0 - i * (t1 + t2) + i * a) / (base + 3.0 - i * a)
        * ((base - 3.0 - i * (t1 + t2) + i * a) / (base - 3.0 - i * a));
    assert!(rel(np / dp * (nm / dm), direct) < 1e-14);
    // a pole: n1 τ1 + n2 τ2 + n = i a_f at (0,0,0) when a_f = 0
    assert_eq!(partition3d_truncated(t1, t2, c(0.0, 0.0), 1, 1, 1e-12), Err(Error::PoleInPartialProduct(0, 0, 0)));
    assert!(!single.is_zero());
}
