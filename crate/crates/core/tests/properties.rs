//! Property-based checks of the structural identities.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use proptest::prelude::*;

use gp_spectra::arith::{divisors, prime_powers_upto};
use gp_spectra::classify::{
    energy_check, is_integral_pred, is_semiprimitive_pair, srg_params, waring_number,
};
use gp_spectra::cyclotomic::{expand_linear_factors, gaussian_periods, CycInt};
use gp_spectra::field::Field;
use gp_spectra::graph::{srg_by_counting, GpGraph, Variant};
use gp_spectra::oracle::{character_sum_eigenvalues, compare_spectra, DEFAULT_TOL};
use gp_spectra::report::sig12;
use gp_spectra::spectra::{
    closed_form, spectrum_complement, spectrum_of_periods, spectrum_sum_graph, Eigenvalue, Spectrum,
};

/// Every `(p, m, k)` with `q = p^m <= cap` and `k | q - 1`.
fn instances(cap: u64) -> Vec<(u64, u32, u64)> {
    prime_powers_upto(cap)
        .into_iter()
        .flat_map(|(p, m, q)| divisors(q - 1).into_iter().map(move |k| (p, m, k)))
        .collect()
}

fn small() -> &'static [(u64, u32, u64)] {
    static CELL: OnceLock<Vec<(u64, u32, u64)>> = OnceLock::new();
    CELL.get_or_init(|| instances(1024))
}

fn field(p: u64, m: u32) -> Arc<Field> {
    Arc::new(Field::new(p, m).expect("field"))
}

fn instance() -> impl Strategy<Value = (u64, u32, u64)> {
    prop::sample::select(small())
}

fn field_with_elems() -> impl Strategy<Value = (Arc<Field>, u32, u32, u32)> {
    prop::sample::select(prime_powers_upto(3000)).prop_flat_map(|(p, m, q)| {
        let f = field(p, m);
        (Just(f), 0..q as u32, 0..q as u32, 0..q as u32)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((f, a, b, c) in field_with_elems()) {
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.exp(f.log(a) as u64), a);
        }
    }

    #[test]
    fn trace_is_additive((f, a, b, _c) in field_with_elems()) {
        let p = f.p() as u32;
        prop_assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % p);
        prop_assert_eq!(f.trace(f.exp(f.p() * f.log(a.max(1)) as u64)), f.trace(a.max(1)));
    }

    #[test]
    fn periods_sum_to_minus_one((p, m, k) in instance()) {
        let periods = gaussian_periods(&field(p, m), k).unwrap();
        prop_assert_eq!(periods.len() as u64, k);
        let total = periods.iter().fold(CycInt::zero(p), |a, c| &a + c);
        prop_assert_eq!(total, CycInt::from_int(p, -1));
    }

    #[test]
    fn spectrum_trace_vanishes((p, m, k) in instance()) {
        let f = field(p, m);
        let q = f.q();
        let spec = spectrum_of_periods(&gaussian_periods(&f, k).unwrap(), (q - 1) / k);
        prop_assert_eq!(spec.total(), q);
        prop_assert!(spec.trace().norm() <= 1e-8);
        let n = ((q - 1) / k) as f64;
        let second: f64 = spec.complex_entries().iter().map(|(z, mult)| z.norm_sqr() * *mult as f64).sum();
        prop_assert!((second - q as f64 * n).abs() <= 1e-9 * q as f64 * n);
    }

    #[test]
    fn integrality_criterion((p, m, k) in instance()) {
        let periods = gaussian_periods(&field(p, m), k).unwrap();
        let integral = periods.iter().all(|c| c.as_integer().is_some());
        prop_assert_eq!(integral, is_integral_pred(p, m, k));
        if integral {
            for c in &periods {
                prop_assert_eq!((k as i64 * c.as_integer().unwrap() + 1).rem_euclid(p as i64), 0);
            }
        }
    }

    #[test]
    fn period_polynomial_is_integral((p, m, k) in instance().prop_filter("small degree", |&(p, _, k)| k * p <= 200)) {
        let periods = gaussian_periods(&field(p, m), k).unwrap();
        let psi = expand_linear_factors(p, &periods).unwrap();
        prop_assert_eq!(psi.degree(), k as usize);
        prop_assert_eq!(psi.coeff(k as usize), BigInt::from(1));
        prop_assert_eq!(psi.coeff(k as usize - 1), BigInt::from(1));
    }

    #[test]
    fn generator_independence((p, m, k) in instance().prop_filter("q <= 512", |&(p, m, _)| p.pow(m) <= 512)) {
        let f = field(p, m);
        let q = f.q();
        let order = q - 1;
        let alt = (2..q as u32).find(|&x| x != f.omega() && num_integer::gcd(f.log(x) as u64, order) == 1);
        if let Some(g) = alt {
            let other = f.rebased(g).unwrap();
            let mut a: Vec<Vec<i64>> = gaussian_periods(&f, k).unwrap().iter().map(|c| c.counts().to_vec()).collect();
            let mut b: Vec<Vec<i64>> =
                gaussian_periods(&other, k).unwrap().iter().map(|c| c.counts().to_vec()).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn character_sums_match_periods((p, m, k) in instance().prop_filter("q <= 512", |&(p, m, _)| p.pow(m) <= 512)) {
        let f = field(p, m);
        let spec = spectrum_of_periods(&gaussian_periods(&f, k).unwrap(), (f.q() - 1) / k);
        let rep = compare_spectra(&spec, &character_sum_eigenvalues(&f, k).unwrap(), DEFAULT_TOL);
        prop_assert!(rep.matched, "{:?}", rep);
    }

    #[test]
    fn closed_forms_match_periods((p, m, k) in instance()) {
        let forms = closed_form(p, m, k).unwrap();
        if !forms.is_empty() {
            let f = field(p, m);
            let spec = spectrum_of_periods(&gaussian_periods(&f, k).unwrap(), (f.q() - 1) / k);
            for form in forms {
                prop_assert!(form.spectrum.matches(&spec, 1e-8), "{}: {} vs {}", form.method, form.spectrum, spec);
            }
        }
    }

    #[test]
    fn complement_is_an_involution((p, m, k) in instance()) {
        let f = field(p, m);
        let spec = spectrum_of_periods(&gaussian_periods(&f, k).unwrap(), (f.q() - 1) / k);
        let comp = spectrum_complement(&spec);
        prop_assert_eq!(comp.total(), spec.total());
        prop_assert_eq!(comp.principal(), f.q() as i64 - 1 - spec.principal());
        if spec.principal_multiplicity() == 1 {
            prop_assert!(spectrum_complement(&comp).matches(&spec, 0.0));
        }
    }

    #[test]
    fn sum_graph_squares_match((p, m, k) in instance()) {
        let f = field(p, m);
        let spec = spectrum_of_periods(&gaussian_periods(&f, k).unwrap(), (f.q() - 1) / k);
        if let Ok(sum) = spectrum_sum_graph(&spec) {
            prop_assert_eq!(sum.total(), spec.total());
            let sq = |s: &Spectrum| -> f64 { s.complex_entries().iter().map(|(z, m)| z.norm_sqr() * *m as f64).sum() };
            prop_assert!((sq(&sum) - sq(&spec)).abs() <= 1e-6 * sq(&spec).max(1.0));
        }
    }

    #[test]
    fn merging_ignores_order(values in prop::collection::vec((-20i64..20, 1u64..5), 0..12), seed in any::<u64>()) {
        let entries: Vec<(Eigenvalue, u64)> = values.iter().map(|&(v, m)| (Eigenvalue::Int(v), m)).collect();
        let mut shuffled = entries.clone();
        let len = shuffled.len().max(1);
        shuffled.rotate_left((seed as usize) % len);
        shuffled.reverse();
        let a = Spectrum::new(50, entries);
        let b = Spectrum::new(50, shuffled);
        prop_assert_eq!(a.entries(), b.entries());
        prop_assert_eq!(a.total(), 1 + values.iter().map(|v| v.1).sum::<u64>());
    }

    #[test]
    fn energy_divisible_on_integral((p, m, k) in instance()) {
        let f = field(p, m);
        let spec = spectrum_of_periods(&gaussian_periods(&f, k).unwrap(), (f.q() - 1) / k);
        if spec.is_integral() {
            let (_, divisible) = energy_check(&spec).unwrap();
            prop_assert!(divisible);
        }
    }

    #[test]
    fn waring_number_bounds((p, m, k) in instance().prop_filter("q <= 512", |&(p, m, _)| p.pow(m) <= 512)) {
        let f = field(p, m);
        let spec = spectrum_of_periods(&gaussian_periods(&f, k).unwrap(), (f.q() - 1) / k);
        let g = waring_number(&f, k);
        let graph = GpGraph::new(f.clone(), k, Variant::Standard).unwrap();
        prop_assert_eq!(g.is_some(), graph.is_connected());
        if let Some(g) = g {
            prop_assert_eq!(graph.diameter().unwrap(), g);
            prop_assert!((g as usize) < spec.distinct() && spec.distinct() as u64 - 1 <= k);
        }
    }

    #[test]
    fn sig12_is_idempotent(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let y = sig12(x);
        prop_assert_eq!(sig12(y), y);
        prop_assert!((y - x).abs() <= 1e-11 * x.abs());
    }
}

#[test]
fn srg_counting_matches_semiprimitive_parameters() {
    for (p, m, k) in instances(256) {
        if is_semiprimitive_pair(k, p, m).is_none() {
            continue;
        }
        let params = srg_params(k, p, m).unwrap();
        let graph = GpGraph::new(field(p, m), k, Variant::Standard).unwrap();
        let (e, d) = srg_by_counting(&graph).unwrap().expect("strongly regular");
        assert_eq!(
            (e as i64, d as i64),
            (params.graph.e, params.graph.d),
            "Gamma({k}, {p}^{m})"
        );
    }
}
