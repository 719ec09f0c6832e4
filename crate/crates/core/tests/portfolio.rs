use lastmile_core::estimators::{count_births, indices};
use lastmile_core::portfolio::*;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn family(id: u64, omega: f64, delta: f64, k: f64) -> TaskFamily {
    TaskFamily::new(id, omega, delta, k, 0).unwrap()
}

fn weights_strategy(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05..5.0f64, 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closed_form_agrees_with_bisection(w in weights_strategy(20), beta in 0.1..0.9f64, total in 0.01..50.0f64) {
        let tech = CodificationTech::Power { beta };
        let cf = allocate_with_weights(&w, &tech, total, AllocationMethod::ClosedForm).unwrap();
        let bi = allocate_with_weights(&w, &tech, total, AllocationMethod::Bisection).unwrap();
        for (a, b) in cf.labor.iter().zip(&bi.labor) {
            prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(total / w.len() as f64));
        }
        prop_assert!(cf.kkt_residual < 1e-10 && bi.kkt_residual < 1e-10);
        let sum: f64 = bi.labor.iter().sum();
        prop_assert!((sum - total).abs() <= 1e-12 * total.max(1.0));
    }

    #[test]
    fn log_technology_satisfies_kkt(w in weights_strategy(20), theta in 0.1..10.0f64, total in 0.0..20.0f64) {
        let tech = CodificationTech::Logarithmic { theta };
        let a = allocate_with_weights(&w, &tech, total, AllocationMethod::Auto).unwrap();
        prop_assert!(a.kkt_residual < 1e-10);
        prop_assert!(a.labor.iter().all(|&l| l >= 0.0));
        // Inactive families have marginal value at zero no larger than ν.
        if let Some(nu) = a.multiplier {
            for (wj, &l) in w.iter().zip(&a.labor) {
                if l == 0.0 {
                    prop_assert!(wj * tech.g_prime(0.0) <= nu * (1.0 + 1e-10));
                }
            }
        }
    }

    #[test]
    fn allocation_beats_grid_search(w in prop::collection::vec(0.1..3.0f64, 3), total in 0.1..5.0f64, theta in 0.2..5.0f64) {
        for tech in [CodificationTech::Power { beta: 0.5 }, CodificationTech::Logarithmic { theta }] {
            let a = allocate_with_weights(&w, &tech, total, AllocationMethod::Auto).unwrap();
            let value = a.value(&w, &tech);
            let n = 200;
            let mut best = f64::NEG_INFINITY;
            for i in 0..=n {
                for j in 0..=(n - i) {
                    let l = [total * i as f64 / n as f64, total * j as f64 / n as f64, total * (n - i - j) as f64 / n as f64];
                    let v: f64 = w.iter().zip(&l).map(|(wj, &lj)| wj * tech.g(lj)).sum();
                    best = best.max(v);
                }
            }
            prop_assert!(value >= best - 1e-6);
        }
    }

    #[test]
    fn ces_euler_identity(
        omega in prop::collection::vec(0.1..3.0f64, 1..10),
        seed_k in prop::collection::vec(0.01..10.0f64, 10),
        rho in prop_oneof![-3.0..-0.05f64, 0.05..0.95f64],
    ) {
        let k = &seed_k[..omega.len()];
        let agg = Aggregator::Ces { rho, epsilon_floor: 1e-9 };
        let total = agg.combine(&omega, k);
        let euler: f64 = agg.gradient(&omega, k).iter().zip(k).map(|(d, kj)| d * kj).sum();
        prop_assert!((euler - total).abs() <= 1e-10 * total);
    }

    #[test]
    fn ces_approaches_additive(omega in prop::collection::vec(0.1..3.0f64, 1..8), seed_k in prop::collection::vec(0.1..5.0f64, 8)) {
        let k = &seed_k[..omega.len()];
        let add = Aggregator::Additive.combine(&omega, k);
        let near = Aggregator::ces(1.0 - 1e-8).combine(&omega, k);
        prop_assert!((near - add).abs() <= 1e-6 * add);
    }

    #[test]
    fn own_weight_falls_with_own_maturity(
        omega in prop::collection::vec(0.1..3.0f64, 2..8),
        seed_k in prop::collection::vec(0.05..5.0f64, 8),
        rho in prop_oneof![-2.0..-0.05f64, 0.05..0.95f64],
        bump in 1.01..3.0f64,
    ) {
        let k: Vec<f64> = seed_k[..omega.len()].to_vec();
        let agg = Aggregator::ces(rho);
        let before = agg.gradient(&omega, &k)[0];
        let mut k2 = k.clone();
        k2[0] *= bump;
        prop_assert!(agg.gradient(&omega, &k2)[0] < before);
    }

    #[test]
    fn maintenance_labor_holds_maturity(k in 0.01..10.0f64, delta in 0.01..0.5f64, beta in 0.2..0.8f64) {
        let tech = CodificationTech::Power { beta };
        let f = family(0, 1.0, delta, k);
        let l = maintenance_labor(&f, &tech);
        let p = Portfolio::new(vec![f], Aggregator::Additive, tech, 1.0).unwrap();
        let alloc = AllocationResult { labor: vec![l], multiplier: None, kkt_residual: 0.0, total: l };
        let ctx = StepContext { seed: 0, period: 0, tech_window: false, org_window: false };
        let entry = EntryConfig { mu: 0.0, ..Default::default() };
        let shocks = DriftShocks { env: 0.0, tech: 0.0, org: 0.0, severity: 0.5 };
        let next = step_portfolio(&p, &alloc, &entry, &shocks, &ctx).unwrap();
        prop_assert!((next.portfolio.families()[0].maturity - k).abs() <= 1e-12 * k.max(1.0));
    }
}

#[test]
fn zero_labor_decays_within_bound() {
    for delta in [0.05f64, 0.1, 0.2, 0.5] {
        let periods = (1e-6f64.ln() / (1.0 - delta).ln()).ceil() as u64;
        let fams = vec![family(0, 1.0, delta, 3.0), family(1, 2.0, delta, 0.5)];
        let initial = Portfolio::new(fams, Aggregator::Additive, CodificationTech::default(), 1.0).unwrap();
        let spec = ScenarioSpec {
            initial,
            budget: LaborBudget::Constant(0.0),
            labor_endowment: 1.0,
            entry: EntryConfig { mu: 0.0, ..Default::default() },
            shocks: DriftShocks { env: 0.0, tech: 0.0, org: 0.0, severity: 0.5 },
            windows: DriftWindows::default(),
            periods: periods + 1,
            seed: 3,
        };
        let run = run_portfolio_scenario(&spec).unwrap();
        let at_end: Vec<_> = run.panel.records().iter().filter(|r| r.period == periods).collect();
        for r in at_end {
            let k0 = if r.family_id == 0 { 3.0 } else { 0.5 };
            assert!(r.maturity < 1e-6 * k0, "delta {delta}: {} after {periods}", r.maturity);
        }
    }
}

#[test]
fn entrant_takes_the_largest_allocation() {
    for seed in 0..50u64 {
        let incumbents: Vec<TaskFamily> = (0..5).map(|i| family(i, 1.0, 0.1, 0.5 + i as f64)).collect();
        let mut p = Portfolio::new(incumbents, Aggregator::ces(0.5), CodificationTech::default(), 1.0).unwrap();
        let k_seed = 0.5 * (1.0 + (seed % 7) as f64) / 8.0;
        p.push(TaskFamily::new(99, 1.0, 0.1, k_seed, 1).unwrap()).unwrap();
        let a = allocate_labor(&p, 1.0 + seed as f64 * 0.1).unwrap();
        let top = a.labor[5];
        assert!(a.labor[..5].iter().all(|&l| l < top), "seed {seed}");
    }
}

#[test]
fn poisson_births_have_the_right_mean() {
    let initial = Portfolio::new(vec![family(0, 1.0, 0.1, 1.0)], Aggregator::Additive, CodificationTech::default(), 1.0).unwrap();
    let spec = ScenarioSpec {
        initial,
        budget: LaborBudget::Constant(0.0),
        labor_endowment: 1.0,
        entry: EntryConfig { mu: 2.0, ..Default::default() },
        shocks: DriftShocks { env: 0.0, tech: 0.0, org: 0.0, severity: 0.5 },
        windows: DriftWindows::default(),
        periods: 1000,
        seed: 11,
    };
    let run = run_portfolio_scenario(&spec).unwrap();
    let births = count_births(&run.registry, 1000).unwrap();
    let mean = births[1..].iter().sum::<u64>() as f64 / 1000.0;
    assert!((1.9..=2.1).contains(&mean), "mean births {mean}");
    let from_summary: u64 = run.summary.iter().map(|s| s.births).sum();
    assert_eq!(from_summary, births.iter().sum::<u64>() - 1);
}

#[test]
fn panel_share_matches_simulator() {
    let fams = (0..4).map(|i| family(i, 1.0 + i as f64, 0.1, 1.0)).collect();
    let initial = Portfolio::new(fams, Aggregator::ces(0.5), CodificationTech::default(), 1.0).unwrap();
    let spec = ScenarioSpec {
        initial,
        budget: LaborBudget::Path((0..30).map(|t| 0.5 + 0.01 * t as f64).collect()),
        labor_endowment: 3.0,
        entry: EntryConfig { mu: 0.7, ..Default::default() },
        shocks: DriftShocks { env: 0.05, tech: 0.0, org: 0.0, severity: 0.5 },
        windows: DriftWindows::default(),
        periods: 30,
        seed: 5,
    };
    let run = run_portfolio_scenario(&spec).unwrap();
    let weights: BTreeMap<u64, f64> = [(0, 1.0)].into();
    for s in &run.summary {
        let ix = indices(&run.panel, s.t, &weights, 3.0).unwrap();
        assert_eq!(ix.structured_share, s.share);
    }
}
