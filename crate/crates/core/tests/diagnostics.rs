use netrecon::diagnostics::*;
use netrecon::inverse::*;
use netrecon::sim::*;
use netrecon::*;
use rand::{Rng, SeedableRng};

fn systems(n: usize, seed: u64, horizon: f64) -> (NetworkConfig, Vec<NeuronSystem>) {
    let w = if seed % 2 == 0 {
        generate_symmetric_connectivity(n)
    } else {
        generate_nonsymmetric_connectivity(n)
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let s0 = (0..n).map(|_| rng.random::<f64>()).collect();
    let cfg = NetworkConfig::uniform_input(horizon, 1.0, 0.01, s0, ExternalInput::constant(0.1), seed);
    let sched = extract_firing_schedule(&simulate_exact(&cfg, &w).unwrap());
    let drive = build_drive(&sched, &cfg.s0, cfg.tau_d).unwrap();
    let sys = (0..n)
        .filter(|&i| usable_onsets(&sched, i).len() >= 2)
        .map(|i| assemble_system(&sched, &drive, &cfg.inputs[i], i, cfg.tau_d).unwrap())
        .collect();
    (cfg, sys)
}

#[test]
fn singular_value_bounds_on_simulated_systems() {
    let mut checked_cond = 0;
    for seed in 0..6 {
        let (cfg, all) = systems(6, seed, 100.0);
        for sys in all {
            let d = spectrum_diagnostics(&sys, &cfg.s0, cfg.horizon).unwrap();
            assert!(d.sigma1_bound_holds);
            if let Some(ok) = d.sigma_r_bound_holds {
                assert!(ok, "neuron {}: σ_r = {} above {:?}", d.neuron, d.sigma[d.rank - 1], d.sigma_r_upper);
            }
            // square subsystem from the first n onsets
            if sys.rows() >= 6 {
                let drive_sys = NeuronSystem {
                    neuron: sys.neuron,
                    a: sys.a.rows(0, 6).into_owned(),
                    b: sys.b.rows(0, 6).into_owned(),
                    t_starts: sys.t_starts[..6].to_vec(),
                };
                let d = spectrum_diagnostics(&drive_sys, &cfg.s0, cfg.horizon).unwrap();
                if d.invertible {
                    assert_eq!(d.cond_bound_holds, Some(true));
                    checked_cond += 1;
                }
            }
        }
    }
    assert!(checked_cond > 0);
}

#[test]
fn shrinking_gap_raises_lower_bound() {
    let (cfg, all) = systems(5, 1, 40.0);
    let sys = all.into_iter().find(|s| s.rows() >= 3).unwrap();
    let base = spectrum_diagnostics(&sys, &cfg.s0, cfg.horizon).unwrap();
    let mut squeezed = sys.clone();
    let q = base.q.unwrap();
    squeezed.t_starts[q + 1] = squeezed.t_starts[q] + 0.5 * base.h_i.unwrap();
    let d = spectrum_diagnostics(&squeezed, &cfg.s0, cfg.horizon).unwrap();
    assert!(d.cond_lower_bound.unwrap() >= base.cond_lower_bound.unwrap());
}

#[test]
fn decay_fit_on_simulated_spectrum() {
    let (_, all) = systems(10, 3, 200.0);
    let sys = all.iter().max_by_key(|s| s.rows()).unwrap();
    let fit = fit_decay(&ThinSvd::new(&sys.a).unwrap().sigma).unwrap();
    assert!(fit.algebraic.alpha > 0.0 && fit.exponential.alpha > 0.0);
    assert!((0.0..=1.0).contains(&fit.r2_algebraic) && (0.0..=1.0).contains(&fit.r2_exponential));
}
