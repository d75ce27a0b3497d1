//! Dispatch: compute each command's JSON result, verify it on request, and render it.

use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use twistchar::characters::numeric::{elliptic_gamma, partition3d_truncated, theta0, ComplexParams};
use twistchar::characters::{
    free_character, free_character_pe, potential_character, potential_spec, potential_via_su2, su2_character,
    su2_spec, su2_to_torus, torus_spec, Convention, FlavorWeights,
};
use twistchar::current_algebra::{
    a2_cohomology, current_bracket_report, ell3, parse_aelement, predicted_cohomology, CubicInvariant, FlavorMatrix,
};
use twistchar::koszul::{cohomology_table, Basis, CohomologyBounds, Superpotential};
use twistchar::operators::{brute_supercharacter, enumerate_weight_space, enumerate_weight_space_with, Traversal};
use twistchar::rational::{format_q, parse_q, Q};
use twistchar::reduction::{
    hodge_derham_dims, reduced_character, surface_cohomology, DeformedComplexParams, DifferentialSign, TargetSpectrum,
};
use twistchar::series::lattice_product;
use twistchar::{Error, FugacitySpec, TruncatedSeries};

use crate::cache::Cache;
use crate::render::render;
use crate::*;

pub enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome<()> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(msg()))
    }
}

pub fn run(command: &Command, global: &GlobalArgs) -> Outcome<String> {
    let (operation, params) = describe(command);
    let cache_dir = std::env::var_os("TWISTCHAR_CACHE").map(PathBuf::from).or_else(|| global.cache_dir.clone());
    let cache = cache_dir.as_deref().map(Cache::new);
    let key = Cache::key(operation, &params);
    let value = match cache.as_ref().and_then(|c| c.load(&key)) {
        Some(v) => v,
        None => {
            let v = compute(command)?;
            if let Some(c) = &cache {
                if let Err(e) = c.store(&key, &v) {
                    eprintln!("warning: could not write cache entry: {e}");
                }
            }
            v
        }
    };
    if global.verify {
        let note = verify(command, &value, global.seed)?;
        eprintln!("verified: {note}");
    }
    Ok(render(&value, global.format))
}

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn describe(command: &Command) -> (&'static str, Value) {
    match command {
        Command::Char(CharCommand::Free(a)) => ("char free", params(a)),
        Command::Char(CharCommand::Su2(a)) => ("char su2", params(a)),
        Command::Char(CharCommand::Potential(a)) => ("char potential", params(a)),
        Command::Char(CharCommand::Gamma(a)) => ("char gamma", params(a)),
        Command::Jacobi(a) => ("jacobi", params(a)),
        Command::Operators(OperatorsCommand::Enumerate(a)) => ("operators enumerate", params(a)),
        Command::Current(CurrentCommand::Bracket(a)) => ("current bracket", params(a)),
        Command::Current(CurrentCommand::Ell3(a)) => ("current ell3", params(a)),
        Command::Current(CurrentCommand::Cohomology(a)) => ("current cohomology", params(a)),
        Command::Reduce(ReduceCommand::T2(a)) => ("reduce t2", params(a)),
        Command::Reduce(ReduceCommand::P1(a)) => ("reduce p1", params(a)),
        Command::Reduce(ReduceCommand::Surface(a)) => ("reduce surface", params(a)),
        Command::Reduce(ReduceCommand::Plane(a)) => ("reduce plane", params(a)),
        Command::Partition3d(a) => ("partition3d", params(a)),
    }
}

fn compute(command: &Command) -> Outcome<Value> {
    match command {
        Command::Char(CharCommand::Free(a)) => {
            let (flavors, spec) = free_setup(a)?;
            let s = if a.pe { free_character_pe(&flavors, &spec)? } else { free_character(&flavors, &spec)? };
            Ok(series_value(&s))
        }
        Command::Char(CharCommand::Su2(a)) => {
            if a.charges.is_some() {
                return Err(input("--charges is not supported for the SU(2) character"));
            }
            Ok(series_value(&su2_character(a.dim_v, &su2_spec(a.q_max, a.z_max, a.u_max)?)?))
        }
        Command::Char(CharCommand::Potential(a)) => {
            let spec = potential_spec(a.q_max, a.z_max)?;
            let s = match a.convention {
                None => potential_character(a.degree, &spec)?,
                Some(c) => potential_via_su2(a.degree, convention(c), &spec)?,
            };
            Ok(series_value(&s))
        }
        Command::Char(CharCommand::Gamma(a)) => {
            let params = gamma_params(a)?;
            let g = elliptic_gamma(&params)?;
            Ok(json!({ "q1": a.q1, "q2": a.q2, "z": a.z, "value": complex_value(g), "abs": num(g.norm()) }))
        }
        Command::Jacobi(a) => jacobi(a),
        Command::Operators(OperatorsCommand::Enumerate(a)) => {
            let weight = parse_pair(&a.weight)?;
            let weight = (to_u32(weight.0)?, to_u32(weight.1)?);
            let monos = enumerate_weight_space(weight, a.z_min..=a.z_max, a.u_min..=a.u_max, a.dim_v);
            let rows: Vec<Value> = monos
                .iter()
                .map(|m| json!({ "operator": m.to_string(), "z": m.unit_z_charge(), "u": m.u_charge(), "sign": if m.u_charge() % 2 == 0 { 1 } else { -1 } }))
                .collect();
            Ok(json!({ "weight": a.weight, "count": monos.len(), "rows": rows }))
        }
        Command::Current(CurrentCommand::Bracket(a)) => {
            let n = algebra_size(&a.algebra)?;
            let (x, y) = (matrix(&a.x, n)?, matrix(&a.y, n)?);
            let level = parse_q(&a.level)?;
            let report = current_bracket_report(&x, &y, parse_pair(&a.m)?, parse_pair(&a.n)?, &level)?;
            let linear: serde_json::Map<String, Value> =
                report.linear.iter().map(|(s, m)| (format!("{},{}", s.0, s.1), json!(m.to_string()))).collect();
            Ok(json!({
                "X": x.to_string(),
                "Y": y.to_string(),
                "m": a.m,
                "n": a.n,
                "level": format_q(&level),
                "linear": linear,
                "central": format_q(&report.central),
                "residual": report.residual.to_string(),
            }))
        }
        Command::Current(CurrentCommand::Ell3(a)) => {
            let n = algebra_size(&a.algebra)?;
            let (x, y, z) = (matrix(&a.x, n)?, matrix(&a.y, n)?, matrix(&a.z, n)?);
            let theta = match a.theta {
                ThetaArg::Trace => CubicInvariant::symmetrized_trace(n),
                ThetaArg::Traceless => CubicInvariant::traceless_trace(n),
                ThetaArg::Zero => CubicInvariant::zero(n),
            };
            let (ea, eb, ec) = (parse_aelement(&a.a)?, parse_aelement(&a.b)?, parse_aelement(&a.c)?);
            let value = ell3(&ea, &eb, &ec, &x, &y, &z, &theta);
            Ok(json!({ "theta": format_q(&theta.evaluate(&x, &y, &z)), "value": format_q(&value) }))
        }
        Command::Current(CurrentCommand::Cohomology(a)) => {
            let table = a2_cohomology(a.max_weight, a.jet);
            let rows: Vec<Value> = table
                .iter()
                .map(|(w, h)| {
                    let p = predicted_cohomology(*w);
                    json!({
                        "p1": w.0, "p2": w.1, "h0": h.0, "h1": h.1,
                        "predicted_h0": p.0, "predicted_h1": p.1,
                        "exact": w.0.unsigned_abs() + w.1.unsigned_abs() <= a.jet,
                    })
                })
                .collect();
            Ok(json!({ "max_weight": a.max_weight, "jet": a.jet, "rows": rows }))
        }
        Command::Reduce(ReduceCommand::T2(a)) => {
            let target = TargetSpectrum::torus(&FlavorWeights::uniform(a.dim_v))?;
            Ok(series_value(&reduced_character(&target, &reduce_spec(a)?)?))
        }
        Command::Reduce(ReduceCommand::P1(a)) => {
            let target = TargetSpectrum::projective_line(a.bundle_degree, &FlavorWeights::uniform(a.bounds.dim_v))?;
            Ok(series_value(&reduced_character(&target, &reduce_spec(&a.bounds)?)?))
        }
        Command::Reduce(ReduceCommand::Surface(a)) => {
            let over = a.h0.zip(a.h1);
            let (h0, h1) = surface_cohomology(a.genus, a.degree, over)?;
            Ok(json!({
                "genus": a.genus, "degree": a.degree, "h0": h0, "h1": h1,
                "euler": h0 as i64 - h1 as i64,
            }))
        }
        Command::Reduce(ReduceCommand::Plane(a)) => {
            let dims = hodge_derham_dims(&plane_params(a)?);
            let rows: Vec<Value> = (0..3)
                .map(|d| json!({ "form_degree": d, "chain_dim": dims.chain_dims[d], "cohomology_dim": dims.dims[d] }))
                .collect();
            Ok(json!({
                "eps_plus": a.eps_plus, "eps_minus": a.eps_minus, "jets": a.jets,
                "sign": match a.sign { SignArg::Plus => "plus", SignArg::Minus => "minus" },
                "total": dims.total(), "rows": rows,
            }))
        }
        Command::Partition3d(a) => {
            let (t1, t2, af) = (parse_complex(&a.tau1)?, parse_complex(&a.tau2)?, parse_complex(&a.a_f)?);
            let v = partition3d_truncated(t1, t2, af, a.n_cutoff, a.mode_cutoff, a.tolerance)?;
            Ok(json!({ "value": complex_value(v), "abs": num(v.norm()), "regularized": false }))
        }
    }
}

fn verify(command: &Command, value: &Value, seed: u64) -> Outcome<String> {
    match command {
        Command::Char(CharCommand::Free(a)) => {
            let (flavors, spec) = free_setup(a)?;
            let got = series_from(value)?;
            let brute = brute_supercharacter(&spec, &flavors)?;
            check(got == brute, || "free character differs from the operator count".into())?;
            let other = if a.pe { free_character(&flavors, &spec)? } else { free_character_pe(&flavors, &spec)? };
            check(got == other, || "product and plethystic constructions differ".into())?;
            Ok(format!("{} coefficients match the operator count", got.len()))
        }
        Command::Char(CharCommand::Su2(a)) => {
            let got = series_from(value)?;
            let torus = torus_spec(a.q_max, a.z_max, a.u_max)?;
            let mapped = got.substitute(&su2_to_torus(), &torus)?;
            check(mapped == free_character(&FlavorWeights::uniform(a.dim_v), &torus)?, || {
                "SU(2) character does not map to the torus character".into()
            })?;
            Ok("matches the free character after the change of variables".into())
        }
        Command::Char(CharCommand::Potential(a)) => {
            let got = series_from(value)?;
            let n = a.degree;
            let w = Superpotential::parse(&format!("x^{}/{}", n + 1, n + 1))?;
            let table = cohomology_table(&w, &CohomologyBounds::total(a.q_max as u32, a.z_max as u32), Basis::Taylor);
            let mut sectors = 0;
            for (&(sa, sb, sz), s) in &table.sectors {
                let q = (sa + sb) as i64;
                let coeff = got.coeff_int(&[("q", q), ("p", sa as i64 - sb as i64), ("z", sz as i64)])?;
                check(coeff == Q::from_integer(s.euler().into()), || {
                    format!("sector ({sa},{sb},{sz}): character {} but Koszul Euler characteristic {}", format_q(&coeff), s.euler())
                })?;
                sectors += 1;
            }
            Ok(format!("{sectors} sectors match the Koszul complex"))
        }
        Command::Char(CharCommand::Gamma(a)) => {
            let p = gamma_params(a)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut points = vec![p];
            for _ in 0..3 {
                let mut sample = |r: f64| Complex64::from_polar(rng.gen_range(0.05..r), rng.gen_range(0.0..std::f64::consts::TAU));
                points.push(ComplexParams::new(sample(0.4), sample(0.4), sample(0.9) + 0.3));
            }
            for p in points {
                let g = elliptic_gamma(&p)?;
                let shifted = elliptic_gamma(&ComplexParams { z: p.z * p.q1, ..p })?;
                let theta = theta0(p.z, p.q2, p.tolerance, p.cutoff)?;
                let rel = (shifted - theta * g).norm() / (theta * g).norm();
                check(rel <= 1e-10, || format!("shift identity off by {rel:e} at {:?}", (p.q1, p.q2, p.z)))?;
                let sym = (elliptic_gamma(&p.swapped())? - g).norm() / g.norm();
                check(sym <= 1e-12, || format!("q1 <-> q2 symmetry off by {sym:e}"))?;
            }
            Ok(format!("shift identity and symmetry hold at 4 points (seed {seed})"))
        }
        Command::Jacobi(_) => {
            let rows = value["sectors"].as_array().cloned().unwrap_or_default();
            for r in &rows {
                check(r["euler"] == r["chain_euler"], || format!("Euler characteristic mismatch in {r}"))?;
            }
            Ok(format!("{} sectors have matching chain and homology Euler characteristics", rows.len()))
        }
        Command::Operators(OperatorsCommand::Enumerate(a)) => {
            let weight = parse_pair(&a.weight)?;
            let weight = (to_u32(weight.0)?, to_u32(weight.1)?);
            let rev = enumerate_weight_space_with(weight, a.z_min..=a.z_max, a.u_min..=a.u_max, a.dim_v, Traversal::Reverse);
            let listed: Vec<String> = value["rows"].as_array().into_iter().flatten().map(|r| r["operator"].as_str().unwrap_or("").to_string()).collect();
            let again: Vec<String> = rev.iter().map(|m| m.to_string()).collect();
            check(listed == again, || "enumeration depends on traversal order".into())?;
            Ok(format!("{} operators, traversal-independent", listed.len()))
        }
        Command::Current(CurrentCommand::Bracket(a)) => {
            let n = algebra_size(&a.algebra)?;
            let (x, y) = (matrix(&a.x, n)?, matrix(&a.y, n)?);
            let (m, nn) = (parse_pair(&a.m)?, parse_pair(&a.n)?);
            let level = parse_q(&a.level)?;
            check(value["residual"] == "0", || "bracket does not close on currents".into())?;
            let comm = x.commutator(&y).scale(&level);
            let mut expected = serde_json::Map::new();
            if m.0 <= nn.0 && m.1 <= nn.1 && !comm.is_zero() {
                expected.insert(format!("{},{}", nn.0 - m.0, nn.1 - m.1), json!(comm.to_string()));
            }
            check(value["linear"] == Value::Object(expected), || "linear part is not K·[X,Y] at mode n − m".into())?;
            Ok("bracket is K·J_[X,Y](n − m)".into())
        }
        Command::Current(CurrentCommand::Ell3(a)) => {
            let n = algebra_size(&a.algebra)?;
            let (x, y, z) = (matrix(&a.x, n)?, matrix(&a.y, n)?, matrix(&a.z, n)?);
            let theta = CubicInvariant::symmetrized_trace(n);
            let (ea, eb, ec) = (parse_aelement(&a.a)?, parse_aelement(&a.b)?, parse_aelement(&a.c)?);
            let base = ell3(&ea, &eb, &ec, &x, &y, &z, &theta);
            let swapped = ell3(&ea, &ec, &eb, &x, &z, &y, &theta);
            check(base == -swapped, || "ℓ₃ is not antisymmetric in its last two slots".into())?;
            Ok("antisymmetric under exchange of the last two slots".into())
        }
        Command::Current(CurrentCommand::Cohomology(_)) => {
            let rows = value["rows"].as_array().cloned().unwrap_or_default();
            let mut exact = 0;
            for r in rows.iter().filter(|r| r["exact"] == true) {
                check(r["h0"] == r["predicted_h0"] && r["h1"] == r["predicted_h1"], || format!("unexpected cohomology {r}"))?;
                exact += 1;
            }
            Ok(format!("{exact} weights covered by the jet match the predicted cohomology"))
        }
        Command::Reduce(ReduceCommand::T2(_)) => {
            let got = series_from(value)?;
            let unsigned_sigma = got.spec().index_of("sigma").is_none();
            if unsigned_sigma {
                check(got == TruncatedSeries::one(got.spec()), || "T² reduction is not 1".into())?;
            }
            Ok("T² reduction equals 1".into())
        }
        Command::Reduce(ReduceCommand::P1(a)) => {
            let got = series_from(value)?;
            let (h0, h1) = surface_cohomology(0, a.bundle_degree, None)?;
            if h1 == 0 && a.bounds.sigma.is_none() {
                let expected = betagamma_power(a.bounds.dim_v, h0 as u32, got.spec())?;
                check(got == expected, || "P¹ reduction is not a power of the 1d character".into())?;
            }
            Ok(format!("equals {h0} copies of the one-dimensional βγ character"))
        }
        Command::Reduce(ReduceCommand::Surface(a)) => {
            let chi = value["euler"].as_i64().unwrap_or(i64::MIN);
            check(chi == a.degree - a.genus as i64 + 1, || "Riemann–Roch fails".into())?;
            Ok("Riemann–Roch holds".into())
        }
        Command::Reduce(ReduceCommand::Plane(a)) => {
            let p = plane_params(a)?;
            let dims = hodge_derham_dims(&p);
            check(dims.euler() == 1, || "Euler characteristic is not 1".into())?;
            let generic = p.eps_plus != Q::from_integer(0.into()) && p.eps_minus != Q::from_integer(0.into());
            if generic {
                check(dims.total() == 1, || "generic point does not give de Rham cohomology".into())?;
            }
            Ok("Euler characteristic 1".into())
        }
        Command::Partition3d(a) => {
            let (t1, t2, af) = (parse_complex(&a.tau1)?, parse_complex(&a.tau2)?, parse_complex(&a.a_f)?);
            let v = partition3d_truncated(t1, t2, af, a.n_cutoff, a.mode_cutoff, a.tolerance)?;
            let w = partition3d_truncated(t2, t1, af, a.n_cutoff, a.mode_cutoff, a.tolerance)?;
            check((v - w).norm() <= 1e-10 * v.norm().max(1.0), || "partial product is not symmetric in τ".into())?;
            Ok("symmetric under τ1 <-> τ2".into())
        }
    }
}

fn jacobi(a: &JacobiArgs) -> Outcome<Value> {
    let w = match (&a.weights, a.total_degree) {
        (Some(ws), Some(d)) => {
            let weights = ws.split(',').map(|s| s.trim().parse::<u32>()).collect::<Result<Vec<_>, _>>()
                .map_err(|_| input(format!("bad weights `{ws}`")))?;
            Superpotential::parse_weighted(&a.potential, weights, d)?
        }
        (None, None) => Superpotential::parse(&a.potential)?,
        _ => return Err(input("--weights and --total-degree go together")),
    };
    let basis = match a.basis {
        BasisArg::Taylor => Basis::Taylor,
        BasisArg::Derivative => Basis::Derivative,
    };
    let table = cohomology_table(&w, &CohomologyBounds::total(a.max_weight, a.z_max), basis);
    let rows: Vec<Value> = table
        .entries()
        .map(|(k, dim)| json!({ "a": k.a, "b": k.b, "z": k.z, "degree": k.degree, "dim": dim }))
        .collect();
    let sectors: Vec<Value> = table
        .sectors
        .iter()
        .filter(|(_, s)| s.chain_dims.iter().any(|&d| d > 0))
        .map(|(&(sa, sb, sz), s)| {
            let (even, odd) = s.z2();
            json!({ "a": sa, "b": sb, "z": sz, "homology": s.homology, "even": even, "odd": odd, "euler": s.euler(), "chain_euler": s.chain_euler() })
        })
        .collect();
    Ok(json!({
        "potential": a.potential,
        "weights": w.weights(),
        "degree": w.degree(),
        "max_weight": a.max_weight,
        "z_max": a.z_max,
        "max_homological_degree": table.max_degree(),
        "sectors": sectors,
        "rows": rows,
    }))
}

fn series_value(s: &TruncatedSeries) -> Value {
    serde_json::from_str(&s.to_json()).expect("series JSON parses")
}

fn series_from(value: &Value) -> Outcome<TruncatedSeries> {
    Ok(TruncatedSeries::from_json(&value.to_string())?)
}

fn num(x: f64) -> String {
    format!("{x:.14e}")
}

fn complex_value(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

fn parse_complex(text: &str) -> Outcome<Complex64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || input(format!("bad complex number `{text}`; use `re,im`"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn parse_pair(text: &str) -> Outcome<(i64, i64)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || input(format!("bad pair `{text}`; use `a,b`"));
    match parts.as_slice() {
        [a, b] => Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn to_u32(x: i64) -> Outcome<u32> {
    u32::try_from(x).map_err(|_| input(format!("expected a nonnegative integer, got {x}")))
}

fn algebra_size(name: &str) -> Outcome<usize> {
    name.strip_prefix("gl")
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| input(format!("unknown algebra `{name}`; use glN")))
}

fn matrix(text: &str, n: usize) -> Outcome<FlavorMatrix> {
    let m = FlavorMatrix::parse(text)?;
    if m.size() != n {
        return Err(input(format!("matrix `{text}` is {0}x{0} but the algebra is gl{n}", m.size())));
    }
    Ok(m)
}

fn convention(c: ConventionArg) -> Convention {
    match c {
        ConventionArg::Z => Convention::ZForm,
        ConventionArg::P => Convention::PForm,
    }
}

fn gamma_params(a: &GammaArgs) -> Outcome<ComplexParams> {
    Ok(ComplexParams::new(parse_complex(&a.q1)?, parse_complex(&a.q2)?, parse_complex(&a.z)?)
        .with_tolerance(a.tolerance)
        .with_cutoff(a.cutoff))
}

fn free_setup(a: &FreeArgs) -> Outcome<(FlavorWeights, FugacitySpec)> {
    let flavors = match &a.charges {
        Some(text) => {
            let charges = text
                .split(';')
                .map(|v| v.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| input(format!("bad charges `{text}`; use e.g. `1;2` or `1,0;0,1`")))?;
            FlavorWeights::new(charges)?
        }
        None => FlavorWeights::uniform(a.dim_v),
    };
    let spec = if flavors.rank() == 1 {
        torus_spec(a.q_max, a.z_max, a.u_max)?
    } else {
        let mut b = FugacitySpec::builder().var("q1", 0, a.q_max).var("q2", 0, a.q_max);
        for name in flavors.fugacity_names() {
            b = b.var(&name, -a.z_max, a.z_max);
        }
        b.var("u", 0, a.u_max).mode(&["q1", "q2"], a.q_max).build()?
    };
    Ok((flavors, spec))
}

fn reduce_spec(a: &ReduceBoxArgs) -> Outcome<FugacitySpec> {
    let mut b = FugacitySpec::builder().var("q", 0, a.q_max).var("z", -a.z_max, a.z_max).var("u", 0, a.u_max);
    if let Some(s) = a.sigma {
        b = b.var("sigma", 0, s);
    }
    Ok(b.build()?)
}

fn plane_params(a: &PlaneArgs) -> Outcome<DeformedComplexParams> {
    let sign = match a.sign {
        SignArg::Plus => DifferentialSign::Plus,
        SignArg::Minus => DifferentialSign::Minus,
    };
    Ok(DeformedComplexParams::new(parse_q(&a.eps_plus)?, parse_q(&a.eps_minus)?, a.jets).with_sign(sign))
}

/// `∏_{n≥0} [(1 − u z⁻¹ q^{n+1}) / (1 − z q^n)]^{dim_v·copies}` in a box wide enough to be exact.
fn betagamma_power(dim_v: usize, copies: u32, target: &FugacitySpec) -> Outcome<TruncatedSeries> {
    let q_max = target.effective_max("q").map(|x| x.floor().to_integer()).unwrap_or(0).max(0);
    let u_max = target.effective_max("u").map(|x| x.floor().to_integer()).unwrap_or(0).max(0);
    let z_max = target.effective_max("z").map(|x| x.floor().to_integer()).unwrap_or(0);
    let wide = FugacitySpec::builder()
        .var("q", 0, q_max)
        .var("z", -u_max, z_max + u_max)
        .var("u", 0, u_max)
        .build()?;
    let power = dim_v as u32 * copies;
    let product = lattice_product(
        &wide,
        (q_max as u32, 0),
        |n, _| {
            let n = n as i64;
            let beta = TruncatedSeries::one_minus(&wide, &[("u", 1), ("z", -1), ("q", n + 1)])?;
            let gamma = TruncatedSeries::one_minus(&wide, &[("z", 1), ("q", n)])?.invert()?;
            beta.multiply(&gamma)?.pow(power)
        },
        |_, _| false,
    )?;
    Ok(product.restrict(target)?)
}
