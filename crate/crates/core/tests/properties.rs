use proptest::prelude::*;

use renyi::constructions::{
    analytic_entropy_vector, spike_classical, spike_quantum_lt1, upset_classical_lt1, upward_closure, indicator_vector,
};
use renyi::entropy::{entropy_vector, renyi_entropy, schatten_norm};
use renyi::inequalities::{
    audenaert_report, check_monotonicity, convergence_sweep, SweepTemplate,
};
use renyi::random::{random_classical, random_density, rng_from_seed};
use renyi::state::C64;
use renyi::{
    marginalize_classical, partial_trace_dense, reduced_spectrum_pure, spectrum_dense, DensityMatrix, RenyiOrder,
    SparsePureState, SubsetMask, WeightedSpectrum,
};

fn order_from(a: f64) -> RenyiOrder {
    RenyiOrder::finite(a).unwrap()
}

/// Normalized sparse pure state from raw labelled amplitudes.
fn sparse_state(dims: &[u64], raw: &[(Vec<u64>, f64, f64)]) -> Option<SparsePureState> {
    let amps: Vec<(Vec<u64>, C64)> = raw
        .iter()
        .map(|(x, re, im)| (x.iter().zip(dims).map(|(v, d)| v % d).collect(), C64::new(*re, *im)))
        .collect();
    let mut merged = std::collections::BTreeMap::<Vec<u64>, C64>::new();
    for (x, a) in &amps {
        *merged.entry(x.clone()).or_default() += a;
    }
    let norm: f64 = merged.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-3 {
        return None;
    }
    SparsePureState::new(dims.to_vec(), merged.into_iter().map(|(x, a)| (x, a / norm)).collect()).ok()
}

fn pure_strategy(max_total: u64) -> impl Strategy<Value = SparsePureState> {
    prop::collection::vec(1u64..=4, 2..=4)
        .prop_filter("total dimension", move |d| d.iter().product::<u64>() <= max_total)
        .prop_flat_map(|dims| {
            let n = dims.len();
            let entry = (prop::collection::vec(0u64..4, n), -1.0f64..1.0, -1.0f64..1.0);
            (Just(dims), prop::collection::vec(entry, 1..12))
        })
        .prop_filter_map("degenerate amplitudes", |(dims, raw)| sparse_state(&dims, &raw))
}

fn spectrum_strategy() -> impl Strategy<Value = WeightedSpectrum> {
    prop::collection::vec(0.0f64..1.0, 1..64).prop_filter_map("zero weights", |w| {
        let total: f64 = w.iter().sum();
        if total <= 1e-6 {
            return None;
        }
        WeightedSpectrum::from_probabilities(&w.iter().map(|x| x / total).collect::<Vec<_>>()).ok()
    })
}

fn proper_subset(n: usize, bits: u32) -> SubsetMask {
    let full = (1u32 << n) - 1;
    let b = 1 + bits % (full - 1);
    SubsetMask::new(b, n).unwrap()
}

/// Rényi entropy straight from the definition, on expanded probabilities.
fn oracle_entropy(p: &[f64], alpha: f64) -> f64 {
    let p: Vec<f64> = p.iter().copied().filter(|&x| x > 0.0).collect();
    if alpha == 1.0 {
        -p.iter().map(|x| x * x.log2()).sum::<f64>()
    } else if alpha.is_infinite() {
        -p.iter().cloned().fold(0.0, f64::max).log2()
    } else {
        p.iter().map(|x| x.powf(alpha)).sum::<f64>().log2() / (1.0 - alpha)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complementary_duality(psi in pure_strategy(4096), bits in any::<u32>()) {
        let j = proper_subset(psi.n(), bits);
        let a = reduced_spectrum_pure(&psi, j).unwrap();
        let b = reduced_spectrum_pure(&psi, j.complement().unwrap()).unwrap();
        prop_assert!(a.distance(&b) <= 1e-10, "{:?} vs {:?}", a, b);
    }

    #[test]
    fn sparse_matches_dense_oracle(psi in pure_strategy(256), bits in any::<u32>()) {
        let full = (1u32 << psi.n()) - 1;
        let j = SubsetMask::new(1 + bits % full, psi.n()).unwrap();
        let sparse = reduced_spectrum_pure(&psi, j).unwrap();
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let dense = spectrum_dense(&partial_trace_dense(&rho, j).unwrap()).unwrap();
        prop_assert!(sparse.distance(&dense) <= 1e-10);
    }

    #[test]
    fn marginal_consistency(seed in any::<u64>(), sizes in prop::collection::vec(1u64..=3, 2..=4), bi in any::<u32>(), bj in any::<u32>()) {
        let n = sizes.len();
        let mut rng = rng_from_seed(seed);
        let p = random_classical(&sizes, 2.0, &mut rng).unwrap();
        let full = (1u32 << n) - 1;
        let j_bits = 1 + bj % full;
        // I is a nonempty subset of J
        let i_bits = {
            let x = (1 + bi % full) & j_bits;
            if x == 0 { j_bits & j_bits.wrapping_neg() } else { x }
        };
        let j = SubsetMask::new(j_bits, n).unwrap();
        let i = SubsetMask::new(i_bits, n).unwrap();
        let local: Vec<usize> = j
            .parties()
            .iter()
            .enumerate()
            .filter(|(_, party)| i.contains(**party))
            .map(|(k, _)| k + 1)
            .collect();
        let i_in_j = SubsetMask::from_parties(&local, j.len()).unwrap();
        let nested = marginalize_classical(&marginalize_classical(&p, j).unwrap(), i_in_j).unwrap();
        let direct = marginalize_classical(&p, i).unwrap();
        prop_assert_eq!(nested.alphabet_sizes(), direct.alphabet_sizes());
        prop_assert_eq!(nested.atoms().len(), direct.atoms().len());
        for ((x, a), (y, b)) in nested.atoms().iter().zip(direct.atoms()) {
            prop_assert_eq!(x, y);
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn partial_trace_keeps_unit_trace(seed in any::<u64>(), dims in prop::collection::vec(1usize..=4, 1..=3), bits in any::<u32>()) {
        let n = dims.len();
        let mut rng = rng_from_seed(seed);
        let rho = random_density(&dims, &mut rng).unwrap();
        let j = SubsetMask::new(1 + bits % ((1u32 << n) - 1), n).unwrap();
        let tr: f64 = partial_trace_dense(&rho, j).unwrap().matrix().diagonal().iter().map(|z| z.re).sum();
        prop_assert!((tr - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn entropy_nonincreasing_in_alpha(spec in spectrum_strategy(), a in 0.0f64..6.0, b in 0.0f64..6.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let orders = [order_from(lo), order_from(hi), RenyiOrder::Infinity];
        let s: Vec<f64> = orders.iter().map(|&o| renyi_entropy(&spec, o).unwrap().value()).collect();
        prop_assert!(s[0] >= s[1] - 1e-10);
        prop_assert!(s[1] >= s[2] - 1e-10);
        prop_assert!(renyi_entropy(&spec, RenyiOrder::Zero).unwrap().value() >= s[0] - 1e-10);
    }

    #[test]
    fn entropy_matches_definition(spec in spectrum_strategy(), a in prop::sample::select(vec![0.3, 0.5, 0.99, 1.0, 1.5, 2.0, 7.0, f64::INFINITY])) {
        let p = spec.expand(1 << 16).unwrap();
        let got = renyi_entropy(&spec, order_from(a)).unwrap().value();
        prop_assert!((got - oracle_entropy(&p, a)).abs() <= 1e-9);
    }

    #[test]
    fn extensive_on_products(s1 in any::<u64>(), s2 in any::<u64>(), a in prop::sample::select(vec![0.5, 1.0, 2.0, f64::INFINITY])) {
        let order = order_from(a);
        let p = random_classical(&[2, 3], 2.0, &mut rng_from_seed(s1)).unwrap();
        let q = random_classical(&[3], 4.0, &mut rng_from_seed(s2)).unwrap();
        let pq = p.product(&q).unwrap();
        let vp = entropy_vector(&p, order).unwrap();
        let vq = entropy_vector(&q, order).unwrap();
        let v = entropy_vector(&pq, order).unwrap();
        for (mask, value) in v.iter() {
            let low = mask.bits() & 0b011;
            let high = mask.bits() >> 2;
            let mut expect = 0.0;
            if low != 0 { expect += vp.get(SubsetMask::new(low, 2).unwrap()); }
            if high != 0 { expect += vq.get(SubsetMask::new(high, 1).unwrap()); }
            prop_assert!((value - expect).abs() <= 1e-9, "{}: {} vs {}", mask, value, expect);
        }
    }

    #[test]
    fn continuous_at_one(spec in spectrum_strategy()) {
        let one = renyi_entropy(&spec, RenyiOrder::One).unwrap().value();
        for a in [1.0 - 1e-6, 1.0 + 1e-6] {
            let near = renyi_entropy(&spec, RenyiOrder::Finite(a)).unwrap().value();
            prop_assert!((near - one).abs() <= 1e-4);
        }
    }

    #[test]
    fn zero_iff_pure(spec in spectrum_strategy(), a in prop::sample::select(vec![0.0, 0.5, 1.0, 2.0, f64::INFINITY])) {
        let s = renyi_entropy(&spec, order_from(a)).unwrap().value();
        prop_assert_eq!(s == 0.0, spec.is_pure());
        prop_assert_eq!(renyi_entropy(&WeightedSpectrum::pure(), order_from(a)).unwrap().value(), 0.0);
    }

    #[test]
    fn schatten_identity(spec in spectrum_strategy(), a in 1.01f64..20.0) {
        let o = RenyiOrder::Finite(a);
        let s = renyi_entropy(&spec, o).unwrap().value();
        let norm = schatten_norm(&spec, o).unwrap();
        prop_assert!((s - a / (1.0 - a) * norm.log2()).abs() <= 1e-10);
    }

    #[test]
    fn audenaert_chain(seed in any::<u64>(), da in 1usize..=4, db in 1usize..=4, a in prop::sample::select(vec![1.5, 2.0, 3.0, f64::INFINITY])) {
        let rho = random_density(&[da, db], &mut rng_from_seed(seed)).unwrap();
        let r = audenaert_report(&rho, order_from(a)).unwrap();
        prop_assert!(r.lhs <= r.bound_plus + 1e-9);
        prop_assert!(r.bound_plus <= r.bound_classic + 1e-9);
        prop_assert!((r.kappa_star - r.m_alpha.max(r.norm_ab.sqrt())).abs() <= 1e-15);
        if r.equality_flags.lhs_equals_classic {
            prop_assert!(r.equality_flags.rho_a_pure || r.equality_flags.rho_b_pure);
        }
    }

    #[test]
    fn audenaert_equality_with_pure_marginal(seed in any::<u64>(), db in 1usize..=4, a in prop::sample::select(vec![1.5, 2.0, 3.0, f64::INFINITY])) {
        let mut rng = rng_from_seed(seed);
        let pure_a = DensityMatrix::from_vector(vec![2], &[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let rho = pure_a.tensor(&random_density(&[db], &mut rng).unwrap()).unwrap();
        let r = audenaert_report(&rho, order_from(a)).unwrap();
        prop_assert!(r.equality_flags.rho_a_pure);
        prop_assert!(r.equality_flags.lhs_equals_classic);
    }

    #[test]
    fn kappa_star_is_local_minimum(seed in any::<u64>(), da in 1usize..=4, db in 1usize..=4, a in prop::sample::select(vec![1.5, 2.0, 3.0, f64::INFINITY])) {
        let rho = random_density(&[da, db], &mut rng_from_seed(seed)).unwrap();
        let r = audenaert_report(&rho, order_from(a)).unwrap();
        let at = r.bound_at(r.kappa_star);
        prop_assert!((at - r.bound_plus).abs() <= 1e-12);
        for f in [1.0 - 1e-3, 1.0 + 1e-3] {
            let k = r.kappa_star * f;
            if k >= r.m_alpha {
                prop_assert!(at <= r.bound_at(k) + 1e-15);
            }
        }
    }

    // Near α = 1 the off-target entries first rise with M before decaying,
    // so the strict decrease is only claimed for α ≤ 0.75.
    #[test]
    fn spike_off_target_decreases(s in 0.5f64..4.0, a in 0.1f64..=0.75) {
        let order = RenyiOrder::Finite(a);
        let mut prev: Option<Vec<f64>> = None;
        for m in [4u64, 16, 64, 256] {
            let v = spike_classical(2, s, order, &[m, m]).unwrap().analytic(order).unwrap();
            let off = vec![v.get_label("1").unwrap(), v.get_label("2").unwrap()];
            if let Some(p) = &prev {
                prop_assert!(off[0] < p[0] && off[1] < p[1]);
            }
            prev = Some(off);
        }
    }

    #[test]
    fn spike_sweep_error_nonincreasing(s in 0.5f64..4.0, a in 0.1f64..=0.75) {
        let order = RenyiOrder::Finite(a);
        let t = SweepTemplate::Spike { n: 2, subset: SubsetMask::full(2).unwrap(), s };
        let target = t.natural_target(order).unwrap();
        let schedule: Vec<u64> = (3..=16).map(|k| 1u64 << k).collect();
        let e = convergence_sweep(&t, &schedule, order, &target).unwrap().errors();
        prop_assert!(e.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{:?}", e);
    }

    #[test]
    fn classical_constructions_are_monotone(s in 0.5f64..3.0, a in 0.2f64..0.9, m in 2u64..6, gens in prop::collection::vec(1u32..8, 1..3)) {
        let order = RenyiOrder::Finite(a);
        let spike = spike_classical(3, s, order, &[m * 8, m * 8, m * 8]).unwrap();
        prop_assert!(check_monotonicity(&spike.explicit(order).unwrap().unwrap()).passed());
        let gens: Vec<SubsetMask> = gens.into_iter().map(|b| SubsetMask::new(b, 3).unwrap()).collect();
        if let Ok(c) = upset_classical_lt1(3, &gens, s, order, &[m * 16; 3]) {
            prop_assert!(check_monotonicity(&c.analytic(order).unwrap()).passed());
        }
        let upset = upward_closure(3, &gens).unwrap();
        prop_assert_eq!(upward_closure(3, upset.members()).unwrap(), upset.clone());
        prop_assert!(check_monotonicity(&indicator_vector(&upset)).passed());
    }

    #[test]
    fn quantum_spike_is_pure_and_dual(bits in 1u32..7, m in 2u64..=3, a in 0.3f64..0.9) {
        let order = RenyiOrder::Finite(a);
        let subset = SubsetMask::new(bits, 3).unwrap();
        let s = 0.5;
        let c = spike_quantum_lt1(3, subset, s, order, m).unwrap();
        let Some(renyi::State::Pure(psi)) = &c.state else { return Err(TestCaseError::fail("no explicit state")); };
        let explicit = entropy_vector(psi, order).unwrap();
        let analytic = analytic_entropy_vector(&c.descriptor, order).unwrap();
        prop_assert!(explicit.sup_distance(&analytic).unwrap() <= 1e-9);
        for (j, v) in explicit.iter() {
            if let Some(jc) = j.complement() {
                prop_assert!((v - explicit.get(jc)).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn spike_off_target_can_rise_near_one() {
    let order = RenyiOrder::Finite(0.9);
    let off = |m: u64| spike_classical(2, 3.0, order, &[m, m]).unwrap().analytic(order).unwrap().get_label("1").unwrap();
    assert!(off(16) > off(4));
    assert!(off(1 << 20) < off(256));
}
