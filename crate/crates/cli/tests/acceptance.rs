//! Acceptance suite: one check per criterion, one PASS/FAIL line each.
//! Exits non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use lastmile_core::baseline::*;
use lastmile_core::calibration::*;
use lastmile_core::estimators::*;
use lastmile_core::portfolio::*;
use lastmile_core::rng::{self, StreamTag};
use lastmile_core::roy::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Keyed uniform draw for test instances, independent of the model streams.
struct Draws(rand_xoshiro::Xoshiro256PlusPlus);

impl Draws {
    fn new(case: u64) -> Self {
        Draws(rng::stream(0xACCE, StreamTag::Scenario, &[case]))
    }
    fn u(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * rng::unit(&mut self.0)
    }
    fn prior_box(&mut self) -> (f64, f64, f64, f64) {
        (self.u(0.33, 0.40), self.u(0.02, 0.08), self.u(0.03, 0.05), self.u(0.08, 0.25))
    }
}

// 1 ------------------------------------------------------------------------

/// Extreme shares over the 16 corners of the prior box.
fn corner_extremes(p: &PriorSpec) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for mask in 0..16u32 {
        let pick = |i: u32, iv: Interval| if mask >> i & 1 == 1 { iv.hi } else { iv.lo };
        let s = structured_share(pick(0, p.alpha), pick(1, p.gamma), pick(2, p.r), pick(3, p.delta_k));
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

fn criterion_1() -> Check {
    let mut notes = Vec::new();
    for seed in [0u64, 7, 2024] {
        let priors = PriorSpec { seed, ..PriorSpec::default() };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let start = Instant::now();
        let r = pool.install(|| run_monte_carlo(&priors)).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        let pct = |x: f64| 100.0 * x;
        let within = |name: &str, x: f64, lo: f64, hi: f64| ensure((lo..=hi).contains(&x), || format!("seed {seed}: {name} = {x:.4} outside [{lo}, {hi}]"));
        within("mean %", pct(r.mean), 5.80, 5.90)?;
        within("median %", pct(r.median), 5.80, 5.90)?;
        within("sd pp", pct(r.std_dev), 1.93, 2.03)?;
        within("P10 %", pct(r.quantiles.p10), 3.08, 3.18)?;
        within("P90 %", pct(r.quantiles.p90), 8.48, 8.58)?;
        within("P2.5 %", pct(r.quantiles.p2_5), 2.53, 2.63)?;
        within("P97.5 %", pct(r.quantiles.p97_5), 9.25, 9.35)?;
        within("Pr(s>5%) %", pct(r.prob_above_5pct), 62.2, 63.2)?;
        within("Pr(s>8%) %", pct(r.prob_above_8pct), 16.6, 17.6)?;
        let (lo, hi) = corner_extremes(&priors);
        ensure((lo - 0.0180).abs() < 5e-5 && (hi - 0.1064).abs() < 5e-5, || format!("corner bounds {lo} {hi}"))?;
        let b = share_bounds(&priors).map_err(|e| e.to_string())?;
        ensure(b.min == lo && b.max == hi, || "share_bounds disagrees with the corner search".into())?;
        ensure(r.min >= lo && r.max <= hi, || format!("sample range [{}, {}] escapes [{lo}, {hi}]", r.min, r.max))?;
        ensure(secs < 10.0, || format!("took {secs:.2}s on one thread"))?;
        notes.push(format!("seed {seed}: mean {:.3}% sd {:.3}pp ({secs:.2}s/1 thread)", pct(r.mean), pct(r.std_dev)));
    }
    Ok(notes.join("; "))
}

// 2 ------------------------------------------------------------------------

fn criterion_2() -> Check {
    let priors = PriorSpec { gamma: Interval::new(0.02, 0.12), ..PriorSpec::default() };
    let r = run_monte_carlo(&priors).map_err(|e| e.to_string())?;
    let m = 100.0 * r.mean;
    ensure((7.4..=8.6).contains(&m), || format!("mean {m:.3}% outside [7.4, 8.6]"))?;
    Ok(format!("mean {m:.3}% with gamma in [0.02, 0.12]"))
}

// 3 ------------------------------------------------------------------------

/// Bisection on the wage-equalization condition
/// `ηγ/(r+δ) · L_U/k = 1-α` with `k = η L_S / δ`, in terms of the share.
fn proof_equation_share(alpha: f64, gamma: f64, r: f64, delta: f64, eta: f64) -> f64 {
    let labor = 1.0;
    let gap = |s: f64| {
        let (ls, lu) = (s * labor, (1.0 - s) * labor);
        let k = eta * ls / delta;
        eta * gamma / (r + delta) * lu / k - (1.0 - alpha)
    };
    let (mut lo, mut hi) = (1e-300f64, 1.0 - 1e-16);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_3() -> Check {
    let (mut worst_sim, mut worst_bis) = (0.0f64, 0.0f64);
    for case in 0..100 {
        let mut d = Draws::new(300 + case);
        let (a, g, r, delta) = d.prior_box();
        let eta = d.u(0.05, 1.0);
        let p = BaselineParams::from_shares(a, g, r, delta).and_then(|p| p.with_eta(eta)).map_err(|e| e.to_string())?;
        let ss = steady_state(&p);
        let k0 = ss.k_star * d.u(0.1, 10.0);
        let path = simulate_transition(&p, k0, d.u(0.0, 1.0), &TransitionSettings::default()).map_err(|e| e.to_string())?;
        ensure(path.converged, || format!("case {case}: transition did not converge"))?;
        let last = path.records.last().unwrap();
        worst_sim = worst_sim.max(rel(last.structured / p.labor(), ss.s_star));
        worst_bis = worst_bis.max(rel(proof_equation_share(a, g, r, delta, eta), ss.s_star));
    }
    ensure(worst_sim < 1e-6, || format!("transition error {worst_sim:e}"))?;
    ensure(worst_bis < 1e-10, || format!("bisection error {worst_bis:e}"))?;
    Ok(format!("100 draws: max rel error transition {worst_sim:.1e}, proof-equation bisection {worst_bis:.1e}"))
}

// 4 ------------------------------------------------------------------------

fn criterion_4() -> Check {
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let mut d = Draws::new(4000 + case);
        let (a, g, r, delta) = d.prior_box();
        let cs = comparative_statics(&BaselineParams::from_shares(a, g, r, delta).map_err(|e| e.to_string())?);
        let h = 1e-6;
        let fd = [
            (structured_share(a, g + h, r, delta) - structured_share(a, g - h, r, delta)) / (2.0 * h),
            (structured_share(a, g, r + h, delta) - structured_share(a, g, r - h, delta)) / (2.0 * h),
            (structured_share(a, g, r, delta + h) - structured_share(a, g, r, delta - h)) / (2.0 * h),
        ];
        let an = [cs.ds_dgamma, cs.ds_dr, cs.ds_ddelta];
        for i in 0..3 {
            worst = worst.max(rel(an[i], fd[i]));
        }
        ensure(an[0] > 0.0 && an[1] < 0.0 && an[2] > 0.0, || format!("case {case}: signs {an:?}"))?;
    }
    ensure(worst < 1e-6, || format!("max rel FD error {worst:e}"))?;
    for &delta in &[1e-12, 1e-6, 0.01, 0.5, 0.999] {
        for &(a, g, r) in &[(0.01, 1e-4, 0.5), (0.99, 0.99, 0.0), (0.36, 0.05, 0.04)] {
            let s = structured_share(a, g, r, delta);
            ensure(s > 0.0, || format!("s* = {s} at delta {delta}"))?;
        }
    }
    Ok(format!("1000 draws: max rel FD error {worst:.1e}, signs (+,-,+), s*>0 on drift grid"))
}

// 5 ------------------------------------------------------------------------

fn criterion_5() -> Check {
    let (mut worst_kkt, mut worst_gap) = (0.0f64, 0.0f64);
    for case in 0..500 {
        let mut d = Draws::new(5000 + case);
        let j = 1 + (d.u(0.0, 20.0) as usize).min(19);
        let w: Vec<f64> = (0..j).map(|_| d.u(0.05, 5.0)).collect();
        let total = d.u(0.01, 50.0);
        let beta = d.u(0.1, 0.9);
        let power = CodificationTech::Power { beta };
        let log = CodificationTech::Logarithmic { theta: d.u(0.1, 10.0) };
        let cf = allocate_with_weights(&w, &power, total, AllocationMethod::ClosedForm).map_err(|e| e.to_string())?;
        let bi = allocate_with_weights(&w, &power, total, AllocationMethod::Bisection).map_err(|e| e.to_string())?;
        let lg = allocate_with_weights(&w, &log, total, AllocationMethod::Auto).map_err(|e| e.to_string())?;
        worst_kkt = worst_kkt.max(cf.kkt_residual).max(bi.kkt_residual).max(lg.kkt_residual);
        for (a, b) in cf.labor.iter().zip(&bi.labor) {
            worst_gap = worst_gap.max((a - b).abs() / a.max(1e-300));
        }
    }
    ensure(worst_kkt < 1e-10, || format!("KKT residual {worst_kkt:e}"))?;
    ensure(worst_gap < 1e-8, || format!("closed form vs bisection {worst_gap:e}"))?;

    let mut worst_shortfall = f64::NEG_INFINITY;
    for case in 0..50 {
        let mut d = Draws::new(5500 + case);
        let w = [d.u(0.1, 3.0), d.u(0.1, 3.0), d.u(0.1, 3.0)];
        let total = d.u(0.1, 5.0);
        let tech = if case % 2 == 0 { CodificationTech::Power { beta: d.u(0.2, 0.8) } } else { CodificationTech::Logarithmic { theta: d.u(0.2, 5.0) } };
        let a = allocate_with_weights(&w, &tech, total, AllocationMethod::Auto).map_err(|e| e.to_string())?;
        let value = a.value(&w, &tech);
        let n = 400;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=n {
            for k in 0..=(n - i) {
                let l = [i, k, n - i - k].map(|x| total * x as f64 / n as f64);
                best = best.max((0..3).map(|m| w[m] * tech.g(l[m])).sum());
            }
        }
        worst_shortfall = worst_shortfall.max(best - value);
    }
    ensure(worst_shortfall <= 1e-6, || format!("grid beats solver by {worst_shortfall:e}"))?;
    Ok(format!("max KKT {worst_kkt:.1e}, closed-form gap {worst_gap:.1e}, grid excess {worst_shortfall:.1e}"))
}

// 6 ------------------------------------------------------------------------

fn criterion_6() -> Check {
    let (mut euler, mut limit) = (0.0f64, 0.0f64);
    for case in 0..500 {
        let mut d = Draws::new(6000 + case);
        let j = 2 + (d.u(0.0, 9.0) as usize).min(8);
        let omega: Vec<f64> = (0..j).map(|_| d.u(0.1, 3.0)).collect();
        let k: Vec<f64> = (0..j).map(|_| d.u(0.01, 10.0)).collect();
        let rho = if case % 2 == 0 { d.u(-3.0, -0.05) } else { d.u(0.05, 0.95) };
        let agg = Aggregator::Ces { rho, epsilon_floor: 1e-12 };
        let total = agg.combine(&omega, &k);
        let sum: f64 = agg.gradient(&omega, &k).iter().zip(&k).map(|(g, x)| g * x).sum();
        euler = euler.max(rel(sum, total));
        let add = Aggregator::Additive.combine(&omega, &k);
        limit = limit.max(rel(Aggregator::ces(1.0 - 1e-9).combine(&omega, &k), add));

        let own = |kj: f64| {
            let mut kk = k.clone();
            kk[0] = kj;
            agg.gradient(&omega, &kk)[0]
        };
        let grid: Vec<f64> = (0..20).map(|i| 0.05 * 1.4f64.powi(i)).collect();
        for pair in grid.windows(2) {
            ensure(own(pair[1]) < own(pair[0]), || format!("case {case}: weight not decreasing at rho {rho}"))?;
        }
    }
    ensure(euler < 1e-10, || format!("Euler error {euler:e}"))?;
    ensure(limit < 1e-6, || format!("rho->1 error {limit:e}"))?;
    Ok(format!("Euler {euler:.1e}, rho->1 {limit:.1e}, own weight strictly decreasing"))
}

// 7 ------------------------------------------------------------------------

fn quiet_shocks() -> DriftShocks {
    DriftShocks { env: 0.0, tech: 0.0, org: 0.0, severity: 0.5 }
}

fn criterion_7() -> Check {
    let mut worst = 0.0f64;
    for case in 0..200 {
        let mut d = Draws::new(7000 + case);
        let tech = if case % 2 == 0 { CodificationTech::Power { beta: d.u(0.2, 0.8) } } else { CodificationTech::Logarithmic { theta: d.u(0.2, 5.0) } };
        let fams: Vec<TaskFamily> = (0..4).map(|i| TaskFamily::new(i, d.u(0.5, 2.0), d.u(0.01, 0.5), d.u(0.01, 10.0), 0).unwrap()).collect();
        let labor: Vec<f64> = fams.iter().map(|f| maintenance_labor(f, &tech)).collect();
        let p = Portfolio::new(fams.clone(), Aggregator::Additive, tech, 1.0).map_err(|e| e.to_string())?;
        let alloc = AllocationResult { total: labor.iter().sum(), labor, multiplier: None, kkt_residual: 0.0 };
        let ctx = StepContext { seed: case, period: 0, tech_window: false, org_window: false };
        let next = step_portfolio(&p, &alloc, &EntryConfig::default(), &quiet_shocks(), &ctx).map_err(|e| e.to_string())?;
        for (a, b) in fams.iter().zip(next.portfolio.families()) {
            worst = worst.max((a.maturity - b.maturity).abs() / a.maturity.max(1.0));
        }
    }
    ensure(worst <= 1e-12, || format!("stationarity error {worst:e}"))?;

    let mut checked = 0;
    for &delta in &[0.02, 0.05, 0.1, 0.25, 0.5, 0.9] {
        let bound = (1e-6f64.ln() / (1.0f64 - delta).ln()).ceil() as u64;
        let k0 = [0.3, 1.0, 7.0];
        let fams = k0.iter().enumerate().map(|(i, &k)| TaskFamily::new(i as u64, 1.0, delta, k, 0).unwrap()).collect();
        let spec = ScenarioSpec {
            initial: Portfolio::new(fams, Aggregator::ces(0.5), CodificationTech::default(), 1.0).unwrap(),
            budget: LaborBudget::Constant(0.0),
            labor_endowment: 1.0,
            entry: EntryConfig::default(),
            shocks: quiet_shocks(),
            windows: DriftWindows::default(),
            periods: bound + 1,
            seed: 1,
        };
        let run = run_portfolio_scenario(&spec).map_err(|e| e.to_string())?;
        for r in run.panel.records().iter().filter(|r| r.period == bound) {
            let start = k0[r.family_id as usize];
            ensure(r.maturity < 1e-6 * start, || format!("delta {delta}: {} not below 1e-6 x {start} after {bound} periods", r.maturity))?;
            checked += 1;
        }
    }
    ensure(checked == 18, || format!("only {checked} decay checks ran"))?;
    Ok(format!("stationarity error {worst:.1e}; all maturities below 1e-6 of initial within the bound"))
}

// 8 ------------------------------------------------------------------------

fn criterion_8() -> Check {
    for trial in 0..50u64 {
        let mut d = Draws::new(8000 + trial);
        let j = 2 + (d.u(0.0, 7.0) as u64).min(6);
        let fams: Vec<TaskFamily> = (0..j).map(|i| TaskFamily::new(i, 1.0, d.u(0.05, 0.25), d.u(0.2, 3.0), 0).unwrap()).collect();
        let min_k = fams.iter().map(|f| f.maturity).fold(f64::INFINITY, f64::min);
        let p = Portfolio::new(fams, Aggregator::ces(0.5), CodificationTech::default(), 1.0).map_err(|e| e.to_string())?;
        let budget = d.u(0.1, 2.0);
        // One period of dynamics, then an entrant at or below the lowest
        // incumbent maturity (measured before the step).
        let alloc = allocate_labor(&p, budget).map_err(|e| e.to_string())?;
        let ctx = StepContext { seed: trial, period: 0, tech_window: false, org_window: false };
        let mut next = step_portfolio(&p, &alloc, &EntryConfig::default(), &quiet_shocks(), &ctx).map_err(|e| e.to_string())?.portfolio;
        let min_now = next.families().iter().map(|f| f.maturity).fold(min_k, f64::min);
        let k_seed = min_now * d.u(0.0, 1.0).max(1e-3).min(0.999);
        next.push(TaskFamily::new(1_000_000, 1.0, 0.1, k_seed, 1).unwrap()).map_err(|e| e.to_string())?;
        let a = allocate_labor(&next, budget).map_err(|e| e.to_string())?;
        let entrant = *a.labor.last().unwrap();
        let best_incumbent = a.labor[..a.labor.len() - 1].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        ensure(entrant > best_incumbent, || format!("trial {trial}: entrant {entrant} vs incumbent {best_incumbent}"))?;
    }
    Ok("entrant strictly largest in 50/50 trials".into())
}

// 9 ------------------------------------------------------------------------

fn criterion_9() -> Check {
    // 5 workers, 2 families: enumerate all 32 assignments.
    let rows = vec![vec![3.0, 0.5], vec![2.5, 0.6], vec![1.0, 0.8], vec![0.4, 2.0], vec![0.3, 3.0]];
    let skills = WorkerSkillMatrix::from_rows(vec![0, 1], rows).map_err(|e| e.to_string())?;
    let fams = vec![TaskFamily::new(0, 1.0, 0.1, 1.0, 0).unwrap(), TaskFamily::new(1, 1.0, 0.1, 1.0, 0).unwrap()];
    let p = Portfolio::new(fams, Aggregator::ces(0.5), CodificationTech::default(), 1.0).map_err(|e| e.to_string())?;
    let settings = RoySettings::default();
    let mut fixed = Vec::new();
    for mask in 0u32..32 {
        let asg: Vec<usize> = (0..5).map(|i| (mask >> i & 1) as usize).collect();
        let ones = asg.iter().sum::<usize>() as f64;
        let prices = family_prices(&p, &[5.0 - ones, ones], settings.labor_floor).map_err(|e| e.to_string())?.0;
        if (0..5).all(|i| (0..2).all(|j| prices[j] * skills.row(i)[j] <= prices[asg[i]] * skills.row(i)[asg[i]])) {
            fixed.push(asg);
        }
    }
    let eq = solve_roy(&skills, &p, &settings).map_err(|e| e.to_string())?;
    ensure(eq.converged && fixed.contains(&eq.assignment), || format!("solver {:?} not among {fixed:?}", eq.assignment))?;

    for lambda in [1e-3, 0.5, 7.0, 1e4] {
        let scaled = solve_roy(&skills, &p.with_lambda(lambda).unwrap(), &settings).map_err(|e| e.to_string())?;
        ensure(scaled.assignment == eq.assignment, || format!("assignment changed at lambda {lambda}"))?;
    }
    let mut larger = Vec::new();
    for w in 0..40 {
        let mut d = Draws::new(9000 + w);
        larger.push((0..3).map(|_| d.u(0.1, 5.0)).collect::<Vec<f64>>());
    }
    let big = WorkerSkillMatrix::from_rows(vec![0, 1, 2], larger).unwrap();
    let fams3: Vec<TaskFamily> = (0..3).map(|i| TaskFamily::new(i, 1.0 + i as f64, 0.1, 0.5 + i as f64, 0).unwrap()).collect();
    let p3 = Portfolio::new(fams3, Aggregator::ces(0.5), CodificationTech::default(), 1.0).unwrap();
    let cap = RoySettings { max_iterations: 200, ..RoySettings::default() };
    let base3 = solve_roy(&big, &p3, &cap).map_err(|e| e.to_string())?;
    for lambda in [0.01, 3.0, 250.0] {
        let s = solve_roy(&big, &p3.with_lambda(lambda).unwrap(), &cap).map_err(|e| e.to_string())?;
        ensure(s.assignment == base3.assignment, || format!("40-worker assignment changed at lambda {lambda}"))?;
    }

    let base = SortingScenario::reference();
    let mut notes = vec![format!("fixed point among {} exhaustive equilibria; Lambda-invariant", fixed.len())];
    for t in [Treatment::Entry(2.0), Treatment::Drift(2.0)] {
        let r = dispersion_experiment(&base, t, 20, 2024).map_err(|e| e.to_string())?;
        ensure(r.strictly_higher >= 18, || format!("{t:?}: only {}/20 higher", r.strictly_higher))?;
        notes.push(format!("{t:?} {}/20 higher (mean diff {:.4})", r.strictly_higher, r.mean_log_variance_diff));
    }
    Ok(notes.join("; "))
}

// 10 -----------------------------------------------------------------------

fn synthetic_panel(families: u64, periods: u64, seed: u64) -> Result<MaturityPanel, String> {
    let fams = (0..families).map(|i| TaskFamily::new(i, 1.0, 0.02, 1.0, 0).unwrap()).collect();
    let spec = ScenarioSpec {
        initial: Portfolio::new(fams, Aggregator::Additive, CodificationTech::default(), 1.0).map_err(|e| e.to_string())?,
        budget: LaborBudget::Constant(0.1),
        labor_endowment: 10.0,
        entry: EntryConfig::default(),
        shocks: DriftShocks { env: 0.05, tech: 0.10, org: 0.03, severity: 0.6 },
        windows: DriftWindows {
            tech: DriftWindows::periodic(4, 2, 0, periods),
            org: DriftWindows::periodic(6, 3, 1, periods),
        },
        periods,
        seed,
    };
    Ok(run_portfolio_scenario(&spec).map_err(|e| e.to_string())?.panel)
}

fn criterion_10() -> Check {
    let mut notes = Vec::new();
    for (families, periods, tol) in [(20u64, 501u64, 0.01), (100, 1001, 0.005)] {
        let panel = synthetic_panel(families, periods, 0)?;
        let flags = detect_degradation(&panel, &DegradationRule::default()).map_err(|e| e.to_string())?;
        let est = estimate_hazard_decomposition(&flags).map_err(|e| e.to_string())?;
        let got = [est.raw.env, est.raw.tech, est.raw.org].map(|x| x.unwrap_or(f64::NAN));
        let errs = [got[0] - 0.05, got[1] - 0.10, got[2] - 0.03];
        ensure(errs.iter().all(|e| e.abs() <= tol), || format!("{} family-periods: errors {errs:?} exceed {tol}", est.observations))?;
        for c in &est.cells {
            let cell: Vec<_> = flags.iter().filter(|f| (f.tech_window, f.org_window) == (c.tech_window, c.org_window)).collect();
            let freq = cell.iter().filter(|f| f.degraded).count() as f64 / cell.len() as f64;
            ensure((c.fitted - freq).abs() <= 1e-12, || format!("cell {:?} fitted {} vs {freq}", (c.tech_window, c.org_window), c.fitted))?;
        }
        notes.push(format!(
            "n={}: env {:.4} tech {:.4} org {:.4}",
            est.observations, got[0], got[1], got[2]
        ));
    }
    Ok(notes.join("; ") + "; cell fits exact")
}

// 11 -----------------------------------------------------------------------

fn run_cli(args: &[&str], threads: &str) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lastmile"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .env_remove("LASTMILE_OUT")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

fn criterion_11() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = tmp.path().join("run.toml");
    std::fs::write(&cfg, "seed = 11\n[roy]\nreplications = 3\nworkers = 120\n[portfolio]\nperiods = 25\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let mut files = 0;
    for cmd in ["steady-state", "simulate", "calibrate", "portfolio", "roy", "estimate"] {
        let mut snaps = Vec::new();
        for (run, threads) in [("a", "1"), ("b", "1"), ("c", "4")] {
            let dir = tmp.path().join(format!("{cmd}-{run}"));
            run_cli(&[cmd, "--config", cfg, "--out", dir.to_str().unwrap(), "-q"], threads)?;
            snaps.push(snapshot(&dir));
        }
        ensure(snaps[0] == snaps[1], || format!("{cmd}: repeated runs differ"))?;
        ensure(snaps[0] == snaps[2], || format!("{cmd}: 1 vs 4 threads differ"))?;
        files += snaps[0].len();
    }
    let priors = PriorSpec { n_draws: 50_000, seed: 3, ..PriorSpec::default() };
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| sample_shares(&priors)).unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| sample_shares(&priors)).unwrap();
    ensure(one.iter().map(|x| x.to_bits()).eq(four.iter().map(|x| x.to_bits())), || "in-process draws differ across pools".into())?;
    Ok(format!("{files} CSV/JSON files byte-identical across 2 runs and 1/4 threads"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("calibration reproduction", criterion_1),
        ("gamma-extension sensitivity", criterion_2),
        ("steady-state oracle equivalence", criterion_3),
        ("comparative statics", criterion_4),
        ("allocation optimality", criterion_5),
        ("CES correctness", criterion_6),
        ("maintenance and saturation", criterion_7),
        ("frontier reallocation", criterion_8),
        ("Roy equilibrium and dispersion", criterion_9),
        ("estimator recovery", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(note) => println!("PASS {:>2} {name} ({secs:.1}s): {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
