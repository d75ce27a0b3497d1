use num_rational::Rational64;
use proptest::prelude::*;
use twistchar::rational::{q_int, Q};
use twistchar::series::lattice_product;
use twistchar::{Error, FugacitySpec, SignedMonomial, Substitution, TruncatedSeries};

fn qz(qmax: i64, zmin: i64, zmax: i64) -> FugacitySpec {
    FugacitySpec::builder().var("q", 0, qmax).var("z", zmin, zmax).mode(&["q"], qmax).build().unwrap()
}

fn mono(spec: &FugacitySpec, q: i64, z: i64, c: i64) -> TruncatedSeries {
    TruncatedSeries::monomial_int(spec, &[("q", q), ("z", z)], c).unwrap()
}

fn from_terms(spec: &FugacitySpec, terms: &[(i64, i64, i64)]) -> TruncatedSeries {
    terms.iter().fold(TruncatedSeries::zero(spec), |acc, &(q, z, c)| acc.add(&mono(spec, q, z, c)).unwrap())
}

#[test]
fn difference_of_squares() {
    let s = qz(2, -3, 3);
    let a = from_terms(&s, &[(0, 0, 1), (0, 1, 1)]);
    let b = from_terms(&s, &[(0, 0, 1), (0, 1, -1)]);
    assert_eq!(a.multiply(&b).unwrap(), from_terms(&s, &[(0, 0, 1), (0, 2, -1)]));
    assert_eq!(a.multiply(&TruncatedSeries::one(&s)).unwrap(), a);
}

#[test]
fn truncated_square() {
    let s = qz(2, 0, 0);
    let a = from_terms(&s, &[(0, 0, 1), (1, 0, 1), (2, 0, 1)]);
    assert_eq!(a.multiply(&a).unwrap(), from_terms(&s, &[(0, 0, 1), (1, 0, 2), (2, 0, 3)]));
}

#[test]
fn mismatched_specs_are_rejected() {
    let a = TruncatedSeries::one(&qz(2, 0, 1));
    let b = TruncatedSeries::one(&qz(3, 0, 1));
    assert_eq!(a.multiply(&b), Err(Error::IncompatibleSpecs));
    assert_eq!(Error::IncompatibleSpecs.to_string(), "incompatible fugacity specs");
}

#[test]
fn geometric_inverse() {
    let s = qz(0, 0, 4);
    let inv = from_terms(&s, &[(0, 0, 1), (0, 1, -1)]).invert().unwrap();
    assert_eq!(inv, from_terms(&s, &(0..=4).map(|k| (0, k, 1)).collect::<Vec<_>>()));
    assert_eq!(TruncatedSeries::one(&s).invert().unwrap(), TruncatedSeries::one(&s));

    let s4 = FugacitySpec::builder()
        .var("q1", 0, 3)
        .var("q2", 0, 3)
        .var("z", -3, 0)
        .var("u", 0, 3)
        .mode(&["q1", "q2"], 6)
        .build()
        .unwrap();
    let m = |k: i64| TruncatedSeries::monomial_int(&s4, &[("q1", k), ("q2", k), ("z", -k), ("u", k)], 1).unwrap();
    let a = TruncatedSeries::one(&s4).sub(&m(1)).unwrap();
    let expected = (1..=3).fold(TruncatedSeries::one(&s4), |acc, k| acc.add(&m(k)).unwrap());
    assert_eq!(a.invert().unwrap(), expected);
}

#[test]
fn two_sided_windows_lose_associativity() {
    // z^-1 * z^-2 falls out of [-2, 2] before z can bring it back.
    let s = qz(0, -2, 2);
    let (a, b, c) = (mono(&s, 0, -1, 1), mono(&s, 0, -2, 1), mono(&s, 0, 1, 1));
    assert!(a.multiply(&b).unwrap().multiply(&c).unwrap().is_zero());
    assert_eq!(a.multiply(&b.multiply(&c).unwrap()).unwrap(), mono(&s, 0, -2, 1));
}

#[test]
fn inversion_failures() {
    let s = qz(2, -2, 2);
    assert_eq!(mono(&s, 1, 0, 1).invert(), Err(Error::NonUnit));
    // z + 1/z keeps producing z^0 terms, so the geometric series never leaves the box.
    let a = from_terms(&s, &[(0, 0, 1), (0, 1, 1), (0, -1, 1)]);
    assert_eq!(a.invert(), Err(Error::DivergentInversion));
}

#[test]
fn substitution_examples() {
    let s = FugacitySpec::builder().var("q", -2, 2).var("z", -4, 4).build().unwrap();
    let zq = TruncatedSeries::monomial_int(&s, &[("q", 1), ("z", 1)], 1).unwrap();
    let rules = Substitution::identity().rule("z", SignedMonomial::int(&[("z", 3), ("q", -2)]));
    let out = zq.substitute(&rules, &s).unwrap();
    assert_eq!(out, TruncatedSeries::monomial_int(&s, &[("q", -1), ("z", 3)], 1).unwrap());

    let src = FugacitySpec::builder().var("q", 0, 4).build().unwrap();
    let half = Rational64::new(1, 2);
    let target = FugacitySpec::builder().half_var("q1", 0.into(), 2.into()).half_var("q2", 0.into(), 2.into()).build().unwrap();
    let rules = Substitution::identity().rule("q", SignedMonomial::new(1, &[("q1", half), ("q2", half)]));
    let q2 = TruncatedSeries::monomial_int(&src, &[("q", 2)], 1).unwrap();
    assert_eq!(
        q2.substitute(&rules, &target).unwrap(),
        TruncatedSeries::monomial(&target, &[("q1", 1.into()), ("q2", 1.into())], q_int(1)).unwrap()
    );

    // Integer-lattice target cannot host q^(1/2).
    let int_target = FugacitySpec::builder().var("q1", 0, 2).var("q2", 0, 2).build().unwrap();
    let q1 = TruncatedSeries::monomial_int(&src, &[("q", 1)], 1).unwrap();
    assert!(matches!(q1.substitute(&rules, &int_target), Err(Error::LatticeViolation { .. })));

    let uy = FugacitySpec::builder().var("u", 0, 2).var("y", 0, 2).build().unwrap();
    let a = TruncatedSeries::one_minus(&uy, &[("u", 1), ("y", 1)]).unwrap();
    let flip = Substitution::identity().rule("u", SignedMonomial::int(&[("u", 1)]).negated());
    let b = TruncatedSeries::one(&uy).add(&TruncatedSeries::monomial_int(&uy, &[("u", 1), ("y", 1)], 1).unwrap()).unwrap();
    assert_eq!(a.substitute(&flip, &uy).unwrap(), b);
}

#[test]
fn lattice_product_examples() {
    // Partitions oracle: coefficient of z^a q^n in prod 1/(1 - z q^k) counts multisets of a
    // nonnegative parts summing to n.
    let s = qz(2, 0, 2);
    let p = lattice_product(
        &s,
        (2, 0),
        |n, _| TruncatedSeries::one_minus(&s, &[("z", 1), ("q", n as i64)])?.invert(),
        |_, _| false,
    )
    .unwrap();
    let count = |a: i64, n: i64| -> i64 {
        fn go(parts_left: i64, total: i64, max_part: i64) -> i64 {
            if parts_left == 0 {
                return (total == 0) as i64;
            }
            (0..=max_part.min(total)).map(|k| go(parts_left - 1, total - k, k)).sum()
        }
        go(a, n, n)
    };
    for a in 0..=2 {
        for n in 0..=2 {
            assert_eq!(p.coeff_int(&[("z", a), ("q", n)]).unwrap(), q_int(count(a, n)), "z^{a} q^{n}");
        }
    }
    assert_eq!(p.coeff_int(&[("z", 2), ("q", 2)]).unwrap(), q_int(2));

    let empty = lattice_product(&s, (3, 3), |_, _| unreachable!(), |_, _| true).unwrap();
    assert_eq!(empty, TruncatedSeries::one(&s));

    let bad = lattice_product(&s, (0, 0), |_, _| Ok(mono(&s, 0, 0, 2)), |_, _| false);
    assert_eq!(bad, Err(Error::NonUnitalFactor(0, 0)));
}

#[test]
fn plethystic_examples() {
    let s = FugacitySpec::builder().var("q", 0, 3).var("z", 0, 3).var("y", 0, 3).mode(&["q"], 3).build().unwrap();
    let zero = TruncatedSeries::zero(&s);
    assert_eq!(zero.plethystic_exp().unwrap(), TruncatedSeries::one(&s));

    let y = TruncatedSeries::monomial_int(&s, &[("y", 1)], 1).unwrap();
    assert_eq!(y.neg().plethystic_exp().unwrap(), TruncatedSeries::one(&s).sub(&y).unwrap());
    assert_eq!(TruncatedSeries::one(&s).plethystic_exp(), Err(Error::PeUndefined));

    // PE[z/(1-q)] against the product of geometric series.
    let letter = TruncatedSeries::monomial_int(&s, &[("z", 1)], 1)
        .unwrap()
        .multiply(&TruncatedSeries::one_minus(&s, &[("q", 1)]).unwrap().invert().unwrap())
        .unwrap();
    let via_pe = letter.plethystic_exp().unwrap();
    let via_product = lattice_product(
        &s,
        (3, 0),
        |n, _| TruncatedSeries::one_minus(&s, &[("z", 1), ("q", n as i64)])?.invert(),
        |_, _| false,
    )
    .unwrap();
    assert_eq!(via_pe, via_product);
}

#[test]
fn json_schema_shape() {
    let s = FugacitySpec::builder().half_var("q1", 0.into(), 2.into()).var("z", -1, 1).build().unwrap();
    let a = TruncatedSeries::monomial(&s, &[("q1", Rational64::new(3, 2)), ("z", (-1).into())], Q::new(2.into(), 3.into()))
        .unwrap();
    let text = a.to_json();
    assert_eq!(
        text,
        r#"{"spec":{"variables":[{"name":"q1","denominator":2,"min":"0","max":"2"},{"name":"z","denominator":1,"min":"-1","max":"1"}],"mode_bound":null},"terms":[{"exp":{"q1":"3/2","z":"-1"},"coeff":"2/3"}]}"#
    );
    assert_eq!(TruncatedSeries::from_json(&text).unwrap(), a);
}

// Truncation commutes with products only when exponents cannot come back into the window,
// so the random box is one-sided in every variable.
fn box_spec() -> FugacitySpec {
    FugacitySpec::builder().var("q", 0, 3).var("z", 0, 4).mode(&["q"], 3).build().unwrap()
}

fn series_strategy(unital: bool) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((0i64..=3, 0i64..=4, -3i64..=3), 0..8).prop_map(move |terms| {
        let s = box_spec();
        let mut a = from_terms(&s, &terms);
        if unital {
            // keep only q-positive terms so the geometric series terminates, then add a unit
            a = from_terms(&s, &terms.iter().filter(|t| t.0 > 0).cloned().collect::<Vec<_>>());
            a = a.add(&TruncatedSeries::constant(&s, q_int(2))).unwrap();
        }
        a
    })
}

fn letter_strategy() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((0i64..=3, 0i64..=2, -2i64..=2), 0..5).prop_map(|terms| {
        let s = box_spec();
        from_terms(&s, &terms.into_iter().filter(|t| t.0 > 0 || t.1 > 0).collect::<Vec<_>>())
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in series_strategy(false), b in series_strategy(false), c in series_strategy(false)) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(&ab, &b.multiply(&a).unwrap());
        prop_assert_eq!(ab.multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
        let lhs = a.multiply(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, ab.add(&a.multiply(&c).unwrap()).unwrap());
    }

    #[test]
    fn inverse_is_two_sided(a in series_strategy(true)) {
        let inv = a.invert().unwrap();
        prop_assert_eq!(a.multiply(&inv).unwrap(), TruncatedSeries::one(a.spec()));
    }

    #[test]
    fn pe_is_multiplicative(f in letter_strategy(), g in letter_strategy()) {
        let lhs = f.add(&g).unwrap().plethystic_exp().unwrap();
        let rhs = f.plethystic_exp().unwrap().multiply(&g.plethystic_exp().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_respects_products(a in series_strategy(false), b in series_strategy(false)) {
        let s = box_spec();
        let rules = Substitution::identity().rule("z", SignedMonomial::int(&[("z", 1), ("q", 1)]).negated());
        let lhs = a.multiply(&b).unwrap().substitute(&rules, &s).unwrap();
        let rhs = a.substitute(&rules, &s).unwrap().multiply(&b.substitute(&rules, &s).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip_is_bit_exact(a in series_strategy(false)) {
        let text = a.to_json();
        let back = TruncatedSeries::from_json(&text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_json(), text);
    }
}
