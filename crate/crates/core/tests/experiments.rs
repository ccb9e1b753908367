mod common;

use common::rng;
use rand::Rng;
use spinflow::experiments::*;

#[test]
fn efficiency_ordering_holds_for_entropy_increasing_decoders() {
    let mut r = rng(31);
    let mut decoders = vec![ToyDecoder::peaked()];
    for _ in 0..30 {
        let c = r.gen_range(0.5..3.0);
        let s = r.gen_range(0.05..c / 2.0);
        let k = r.gen_range(3..6);
        decoders.push(
            ToyDecoder::new("random-peaked", k, move |y| {
                let mut logits = vec![0.0; k];
                logits[0] = c - s * y.abs();
                logits
            })
            .unwrap(),
        );
    }
    for dec in &decoders {
        for w in [0.0, 0.5, 1.0, 1.5].windows(2) {
            assert!(dec.entropy(w[1]).unwrap() > dec.entropy(w[0]).unwrap());
        }
        let t = toy1_run(dec).unwrap();
        assert!(t.ndm_sssp.efficiency >= t.hjb_like.efficiency);
        assert!(t.hjb_like.efficiency >= t.linear.efficiency);
    }
}

#[test]
fn leapfrog_energy_error_stays_bounded_over_long_runs() {
    let cfg = Toy3Config { horizon: 1e4, step: 0.1, damping: 0.0 };
    let rep = run_variant(OscillatorVariant::Leapfrog, &cfg).unwrap();
    assert_eq!(rep.steps, 100_000);
    assert!(rep.eps_h_max <= 2e-2, "{}", rep.eps_h_max);
}

#[test]
fn euler_radius_follows_closed_form() {
    let cfg = Toy3Config::default();
    let rep = run_variant(OscillatorVariant::Euler, &cfg).unwrap();
    let radius = rep.final_state.0.hypot(rep.final_state.1);
    let expected = (1.0 + cfg.step * cfg.step).powf(cfg.steps() as f64 / 2.0);
    assert!((radius / expected - 1.0).abs() <= 1e-3, "{radius} vs {expected}");
}

#[test]
fn damped_radius_follows_envelope() {
    for damping in [0.02, 0.05] {
        let cfg = Toy3Config { damping, ..Toy3Config::default() };
        let rep = run_variant(OscillatorVariant::DampedLeapfrog, &cfg).unwrap();
        let radius = rep.final_state.0.hypot(rep.final_state.1);
        let envelope = (-damping * cfg.horizon / 2.0).exp();
        assert!((radius / envelope - 1.0).abs() <= 0.02, "λ = {damping}: {radius} vs {envelope}");
    }
}

#[test]
fn table_emitters_are_deterministic() {
    let dec = ToyDecoder::default();
    let cfg = Toy3Config::default();
    for _ in 0..3 {
        assert_eq!(table1(&dec).unwrap().0.to_csv(), table1(&dec).unwrap().0.to_csv());
        assert_eq!(table2(&dec).unwrap().0.to_csv(), table2(&dec).unwrap().0.to_csv());
        assert_eq!(table3(&cfg).unwrap().0.to_csv(), table3(&cfg).unwrap().0.to_csv());
        assert_eq!(table3(&cfg).unwrap().1.to_markdown(), table3(&cfg).unwrap().1.to_markdown());
    }
}

#[test]
fn toy_costs_and_paths() {
    let t1 = toy1_run(&ToyDecoder::default()).unwrap();
    assert!((t1.linear.cost - 3.4).abs() < 1e-12);
    // 2.0 + 0.5 + 0.125 + 0.03125 + 0.0078125 + 0.001953125 halves, trapezoid of ½y²
    let hjb: f64 = geometric_path(2.0, 0.5, 5).windows(2).map(|w| 0.25 * (w[0] * w[0] + w[1] * w[1])).sum();
    assert!((t1.hjb_like.cost - hjb).abs() < 1e-15);
    assert_eq!(t1.ndm_sssp.path, vec![2.0, 0.0]);
    assert_eq!(t1.ndm_sssp.cost, 1.0);

    let t2 = toy2_run(&ToyDecoder::default()).unwrap();
    assert_eq!(*t2.hjb_only.path.last().unwrap(), 0.25);
    assert!((t2.ctm_style.path.last().unwrap() - 2.0 * 0.6f64.powi(6)).abs() < 1e-15);
}
