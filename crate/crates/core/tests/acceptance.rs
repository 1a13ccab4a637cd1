//! Acceptance suite: one PASS/FAIL line per criterion, every comparison exact.
//!
//! Each criterion is its own test; `cargo test --test acceptance -- --nocapture`
//! shows the PASS/FAIL lines.

use std::path::PathBuf;
use std::process::Command;

use locrr::exact_arith::{int, rat, root_of_unity, Cyclotomic, Rational};
use locrr::lambda_ops::{exterior_power_ch, twisted_euler_class, ChernCharacter, EigenSummand};
use locrr::oracle::{burnside_invariant_dimension, standard_battery, weighted_monomial_count, BatteryCase};
use locrr::rr_engine::{
    chi_polynomial_pqs, class_aggregation_pqs, class_polynomials_pqs, coarse_todd_wps, euler_characteristic_pqs,
    euler_characteristic_wps, sector_contributions_pqs, sector_contributions_wps, RationalPolynomial,
};
use locrr::series::{exp_nilpotent, todd_factor, GradedPoly, GradedRingSpec};
use locrr::stacks::{support_wps, PermutationGroup, PermutationQuotientStack, RootOfUnity, Sector, WeightedProjectiveStack};

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn wps(w: &[u64]) -> WeightedProjectiveStack {
    WeightedProjectiveStack::new(w.to_vec()).unwrap()
}

fn poly(coeffs: &[Rational]) -> RationalPolynomial {
    RationalPolynomial::new(coeffs.to_vec())
}

fn h_poly(coeffs: &[Rational]) -> GradedPoly {
    let ring = GradedRingSpec::univariate("H", 3);
    coeffs.iter().enumerate().fold(GradedPoly::zero(&ring), |acc, (k, c)| {
        &acc + &GradedPoly::monomial(&ring, vec![k as u32], Cyclotomic::from_rational(c.clone()))
    })
}

fn normal_class(eigenvalues: &[Cyclotomic]) -> GradedPoly {
    let ring = GradedRingSpec::univariate("H", 3);
    let t = ChernCharacter::tangent_projective(&ring, 0, 2);
    let summands: Vec<_> = eigenvalues
        .iter()
        .map(|z| EigenSummand { base: t.clone(), eigenvalue: z.clone() })
        .collect();
    twisted_euler_class(&ring, &summands).unwrap().into_value()
}

fn criterion_1() -> Check {
    let s = wps(&[1, 2]);
    for l in -10..=10i64 {
        let expected = rat(2 * l + 3 + if l % 2 == 0 { 1 } else { -1 }, 4);
        let got = euler_characteristic_wps(&s, l).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("l = {l}: got {got}, want {expected}"))?;
    }
    for (l, v) in [(0, 1), (1, 1), (2, 2)] {
        ensure(euler_characteristic_wps(&s, l).unwrap() == int(v), || format!("chi(L^{l}) != {v}"))?;
    }
    Ok(())
}

fn criterion_2() -> Check {
    let s = wps(&[1, 2]);
    for l in -10..=10i64 {
        let cs = sector_contributions_wps(&s, l).map_err(|e| e.to_string())?;
        ensure(cs.len() == 2, || format!("l = {l}: {} sectors", cs.len()))?;
        let id = Cyclotomic::from_rational(rat(2 * l + 3, 4));
        let minus = Cyclotomic::from_rational(rat(if l % 2 == 0 { 1 } else { -1 }, 4));
        ensure(cs[0].sector.to_string() == "(1, 0)" && cs[0].value == id, || {
            format!("l = {l}: identity sector {} = {}", cs[0].sector, cs[0].value)
        })?;
        ensure(cs[1].sector.to_string() == "(2, 1)" && cs[1].value == minus, || {
            format!("l = {l}: -1 sector {} = {}", cs[1].sector, cs[1].value)
        })?;
    }
    Ok(())
}

fn criterion_3() -> Check {
    let s = wps(&[4, 6]);
    let roots: Vec<RootOfUnity> = support_wps(&s).into_iter().map(|x| x.root).collect();
    let expected: Vec<RootOfUnity> = [(1, 0), (2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (6, 1), (6, 5)]
        .iter()
        .map(|&(n, k)| RootOfUnity::new(n, k))
        .collect();
    ensure(roots == expected, || format!("support {roots:?}"))?;
    for k in 0..=36i64 {
        let engine = euler_characteristic_wps(&s, k).map_err(|e| e.to_string())?;
        let oracle = int(weighted_monomial_count(s.weights(), k).unwrap() as i64);
        ensure(engine == oracle, || format!("k = {k}: engine {engine}, oracle {oracle}"))?;
    }
    ensure(euler_characteristic_wps(&s, 12).unwrap() == int(2), || "k = 12 is not 2".into())
}

fn criterion_4() -> Check {
    let s = PermutationQuotientStack::new(2, 3, PermutationGroup::cyclic(3, 3).unwrap()).unwrap();
    let chi = chi_polynomial_pqs(&s).map_err(|e| e.to_string())?;
    let want = poly(&[int(1), rat(5, 2), rat(37, 12), rat(21, 8), rat(11, 8), rat(3, 8), rat(1, 24)]);
    ensure(chi == want, || format!("chi(m) = {chi}"))?;
    for (m, v) in [(0, 1), (1, 11), (2, 76), (3, 340)] {
        let got = euler_characteristic_pqs(&s, m).unwrap();
        ensure(got == int(v), || format!("m = {m}: {got}"))?;
    }
    let classes = class_polynomials_pqs(&s).map_err(|e| e.to_string())?;
    let identity = poly(&[int(1), rat(9, 2), rat(33, 4), rat(63, 8), rat(33, 8), rat(9, 8), rat(1, 8)]).scale(&rat(1, 3));
    ensure(classes[0].0 == vec![1, 1, 1] && classes[0].1 == identity, || {
        format!("identity piece {}", classes[0].1)
    })?;
    let omega = normal_class(&[root_of_unity(3, 1), root_of_unity(3, 2)]);
    ensure(omega == h_poly(&[int(9), int(-27), rat(99, 2)]), || format!("omega integrand {omega}"))
}

fn criterion_5() -> Check {
    let s = PermutationQuotientStack::new(2, 3, PermutationGroup::symmetric(3, 3).unwrap()).unwrap();
    let chi = chi_polynomial_pqs(&s).map_err(|e| e.to_string())?;
    let want = poly(&[int(1), rat(11, 4), rat(19, 6), rat(33, 16), rat(13, 16), rat(3, 16), rat(1, 48)]);
    ensure(chi == want, || format!("chi(m) = {chi}"))?;
    let classes = class_polynomials_pqs(&s).map_err(|e| e.to_string())?;
    let transp = poly(&[int(1), int(3), rat(13, 4), rat(3, 2), rat(1, 4)]).scale(&rat(1, 2));
    ensure(classes[1].0 == vec![2, 1] && classes[1].1 == transp, || {
        format!("transposition piece {}", classes[1].1)
    })?;
    let t = normal_class(&[root_of_unity(2, 1)]);
    ensure(t == h_poly(&[int(4), int(-6), int(6)]), || format!("transposition integrand {t}"))
}

fn criterion_6() -> Check {
    let td = coarse_todd_wps(&wps(&[1, 1, 2])).map_err(|e| e.to_string())?;
    let rational = |cs: &[Cyclotomic]| cs.iter().map(|c| c.to_rational().unwrap()).collect::<Vec<_>>();
    ensure(td.sectors.len() == 2, || format!("{} sectors", td.sectors.len()))?;
    let id = rational(&td.sectors[0].1);
    ensure(id == vec![int(1), int(2), rat(21, 24)], || format!("identity piece {id:?}"))?;
    let minus = rational(&td.sectors[1].1);
    ensure(minus == vec![int(0), int(0), rat(1, 8)], || format!("-1 piece {minus:?}"))?;
    ensure(td.coefficients == vec![int(1), int(2), int(1)], || format!("total {:?}", td.coefficients))
}

fn criterion_7() -> Check {
    let mut wps_cases = Vec::new();
    let mut pqs_cases = Vec::new();
    for case in standard_battery() {
        match case {
            BatteryCase::Wps(s) => wps_cases.push(s),
            BatteryCase::Pqs(s) => pqs_cases.push(s),
        }
    }
    // (a), (b), (d), (e)
    for s in &wps_cases {
        let n = s.dimension() as u32;
        for l in -10..=10i64 {
            let v = euler_characteristic_wps(s, l).map_err(|e| format!("{s} l = {l}: {e}"))?;
            ensure(v.is_integer(), || format!("(a) {s} l = {l}: {v}"))?;
            if l >= 0 {
                let o = int(weighted_monomial_count(s.weights(), l).unwrap() as i64);
                ensure(v == o, || format!("(b) {s} l = {l}: {v} vs {o}"))?;
            }
            let dual = euler_characteristic_wps(s, -(s.weight_sum() as i64) - l).unwrap();
            ensure(v == dual * int((-1i64).pow(n)), || format!("(e) {s} l = {l}"))?;
            let cs = sector_contributions_wps(s, l).unwrap();
            for c in &cs {
                let Sector::Wps(x) = &c.sector else { unreachable!() };
                let partner = cs
                    .iter()
                    .find(|o| matches!(&o.sector, Sector::Wps(y) if y.root == x.root.inverse()))
                    .ok_or_else(|| format!("(d) {s}: no partner for {}", x.root))?;
                ensure(c.value.conj() == partner.value, || format!("(d) {s} l = {l} at {}", x.root))?;
            }
        }
    }
    // (a), (b), (c)
    for s in &pqs_cases {
        for m in -10..=10i64 {
            let v = euler_characteristic_pqs(s, m).map_err(|e| format!("{s} m = {m}: {e}"))?;
            ensure(v.is_integer(), || format!("(a) {s} m = {m}: {v}"))?;
            if m >= 0 {
                let o = Rational::from_integer(burnside_invariant_dimension(s, m).unwrap());
                ensure(v == o, || format!("(b) {s} m = {m}: {v} vs {o}"))?;
            }
            let elements = sector_contributions_pqs(s, m)
                .unwrap()
                .iter()
                .fold(Cyclotomic::zero(), |acc, c| &acc + &c.value)
                .to_rational()
                .unwrap()
                / int(s.group().order() as i64);
            let classes: Rational = class_aggregation_pqs(s, m).unwrap().into_iter().map(|c| c.value).sum();
            ensure(elements == classes && classes == v, || format!("(c) {s} m = {m}"))?;
        }
    }
    // (f)
    let ring = GradedRingSpec::univariate("H", 5);
    let h = GradedPoly::variable(&ring, 0);
    let line = |a: i64| ChernCharacter::line_bundle(&h.scale_rational(&int(a))).unwrap();
    let bundle = line(1).add(&line(-2)).add(&line(3));
    let e2 = exterior_power_ch(&bundle, 2).unwrap();
    let want = line(-1).add(&line(4)).add(&line(1));
    ensure(e2 == want, || "(f) exterior square of O(1)+O(-2)+O(3)".into())?;
    for d in 2..=12u64 {
        let prod = (1..d as i64).fold(Cyclotomic::one(), |acc, j| &acc * &(&Cyclotomic::one() - &root_of_unity(d, j)));
        ensure(prod == Cyclotomic::from_int(d as i64), || format!("(f) prod (1 - zeta_{d}^j) = {prod}"))?;
    }
    for k in 1..=10 {
        let r = GradedRingSpec::univariate("x", k + 1);
        let x = GradedPoly::variable(&r, 0);
        let one_minus = &GradedPoly::one(&r) - &exp_nilpotent(&-&x).unwrap();
        ensure(&todd_factor(&x).unwrap() * &one_minus == x, || format!("(f) todd identity mod x^{}", k + 1))?;
    }
    Ok(())
}

fn criterion_8() -> Check {
    let golden_dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden"].iter().collect();
    let cases: [(&[&str], &str); 3] = [
        (&["chi", "--wps", "1,2", "--range", "0..3"], "chi_wps_1_2_range_0_3.txt"),
        (&["sectors", "--wps", "1,2", "--twist", "1"], "sectors_wps_1_2_twist_1.txt"),
        (&["todd-coarse", "--wps", "1,1,2"], "todd_coarse_wps_1_1_2.txt"),
    ];
    for (args, file) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_locrr")).args(args).output().map_err(|e| e.to_string())?;
        let want = std::fs::read(golden_dir.join(file)).map_err(|e| format!("{file}: {e}"))?;
        ensure(out.status.success() && out.stdout == want, || format!("locrr {} differs from {file}", args.join(" ")))?;
    }
    let check = Command::new(env!("CARGO_BIN_EXE_locrr")).arg("check").output().map_err(|e| e.to_string())?;
    ensure(check.status.code() == Some(0), || format!("check exited {:?}", check.status.code()))
}

fn report(number: u32, name: &str, result: Check) {
    match result {
        Ok(()) => println!("PASS criterion {number}: {name}"),
        Err(why) => {
            println!("FAIL criterion {number}: {name}: {why}");
            panic!("criterion {number} failed: {why}");
        }
    }
}

macro_rules! criterion_test {
    ($test:ident, $number:expr, $check:ident, $name:expr) => {
        #[test]
        fn $test() {
            report($number, $name, $check());
        }
    };
}

criterion_test!(c1_p12_chi_formula, 1, criterion_1, "chi(P(1,2), O(l)) = (2l+3+(-1)^l)/4 for l in -10..10");
criterion_test!(c2_p12_sector_values, 2, criterion_2, "P(1,2) sector values (2l+3)/4 and (-1)^l/4");
criterion_test!(c3_p46_support_and_counts, 3, criterion_3, "P(4,6) has 8 sectors and matches monomial counts for k in 0..36");
criterion_test!(c4_z3_quotient, 4, criterion_4, "[(P^2)^3/Z3] chi polynomial, values, identity piece, rotation integrand");
criterion_test!(c5_s3_quotient, 5, criterion_5, "[(P^2)^3/S3] chi polynomial, transposition piece and integrand");
criterion_test!(c6_p112_coarse_todd, 6, criterion_6, "coarse Todd class of P(1,1,2) = 1 + 2 W1 + W2");
criterion_test!(
    c7_property_battery,
    7,
    criterion_7,
    "property battery: integrality, oracle, class sums, conjugates, Serre, lambda identities"
);
criterion_test!(c8_cli_goldens_and_check, 8, criterion_8, "CLI golden outputs and check on the full battery");
