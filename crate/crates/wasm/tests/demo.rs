use lastmile_core::baseline::structured_share;
use lastmile_wasm::demo;

#[test]
fn transition_reaches_the_closed_form_share() {
    let t = demo::transition(0.36, 0.05, 0.04, 0.16, 0.2, 400).unwrap();
    let s = 0.05 * 0.16 / (0.05 * 0.16 + 0.64 * 0.2);
    assert!((t.s_star - s).abs() < 1e-15);
    assert!(t.converged_at.is_some());
    assert!((t.share.last().unwrap() - s).abs() < 1e-8);
    assert!((t.k_ratio[0] - 0.2).abs() < 1e-12);
    assert_eq!(t.share.len(), t.k_ratio.len());
}

#[test]
fn short_horizon_reports_no_convergence() {
    let t = demo::transition(0.36, 0.05, 0.04, 0.16, 0.2, 3).unwrap();
    assert_eq!(t.converged_at, None);
}

#[test]
fn invalid_inputs_become_messages() {
    assert!(demo::transition(1.5, 0.05, 0.04, 0.16, 1.0, 10).unwrap_err().contains("alpha"));
    assert!(demo::transition(0.36, 0.05, 0.04, 0.16, -1.0, 10).is_err());
    assert!(demo::calibration(0.08, 0.02, 100, 10, 0).is_err());
    assert!(demo::portfolio(2.0, 1.0, 0.05, 1.0, 10, 0).is_err());
}

#[test]
fn histogram_covers_every_draw_inside_the_bounds() {
    let h = demo::calibration(0.02, 0.08, 20_000, 40, 3).unwrap();
    assert_eq!(h.counts.len(), 40);
    assert_eq!(h.counts.iter().sum::<f64>(), 20_000.0);
    assert!((h.lo - structured_share(0.33, 0.02, 0.05, 0.08)).abs() < 1e-15);
    assert!((h.hi - structured_share(0.40, 0.08, 0.03, 0.25)).abs() < 1e-15);
    assert!(h.lo < h.p10 && h.p10 < h.median && h.median < h.p90 && h.p90 < h.hi);
}

#[test]
fn portfolio_run_is_seeded() {
    let a = demo::portfolio(0.5, 1.0, 0.05, 1.0, 30, 4).unwrap();
    let b = demo::portfolio(0.5, 1.0, 0.05, 1.0, 30, 4).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.families.len(), 30);
    assert!(a.families.last().unwrap() > &a.families[0]);
    let additive = demo::portfolio(1.0, 0.0, 0.0, 1.0, 5, 0).unwrap();
    assert_eq!(additive.families, vec![6.0; 5]);
}
