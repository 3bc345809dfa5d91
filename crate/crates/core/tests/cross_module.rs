use swap_tur_core::density::{self, Gate, Qubit};
use swap_tur_core::engine::{self, NU1_KHZ, NU2_KHZ};
use swap_tur_core::tur::{self, Bound};
use swap_tur_core::units::{self, FlipAngle, Frequency};
use swap_tur_core::{mc, DensityMatrix, EngineParams, Regime};

#[test]
fn prepared_state_runs_the_same_cycle() {
    let nu1 = Frequency::new(NU1_KHZ).unwrap();
    let nu2 = Frequency::new(NU2_KHZ).unwrap();
    let prep = density::thermal_prep(
        FlipAngle::new(1.1).unwrap(),
        FlipAngle::new(0.7).unwrap(),
        nu1,
        nu2,
    );
    let swapped = density::apply_gate(&prep.state, &Gate::Swap);
    let h2 = density::Hamiltonian::zeeman(Qubit::Two, nu2);
    let q2 = -density::energy_change(&prep.state, &swapped, &h2);
    assert!((q2 - engine::avg_heat_q2(&prep.params)).abs() < 1e-12);
}

#[test]
fn sampler_reproduces_enumeration_distribution() {
    let p = EngineParams::from_raw(NU1_KHZ, NU2_KHZ, 0.289, 0.05).unwrap();
    let d = engine::enumerate_tpm(&p);
    let r = mc::sample(&p, 400_000, 99).unwrap();
    for (k, o) in d.outcomes.iter().enumerate() {
        let freq = r.counts[k] as f64 / r.n as f64;
        let se = (o.prob * (1.0 - o.prob) / r.n as f64).sqrt();
        assert!((freq - o.prob).abs() < 5.0 * se, "outcome {k}");
    }
}

#[test]
fn pps_preparation_is_a_valid_state() {
    let rho = density::pps_state(0.3).unwrap();
    let out = density::apply_circuit(
        &rho,
        &[
            Gate::RotX(Qubit::One, 0.4),
            Gate::CNot {
                control: Qubit::One,
                target: Qubit::Two,
            },
        ],
    );
    assert!(DensityMatrix::new(*out.matrix()).is_ok());
    assert!((out.purity() - rho.purity()).abs() < 1e-14);
}

#[test]
fn boundary_matches_a_direct_status_flip() {
    let b1 = units::kelvin_to_beta_h(300.0).unwrap();
    let q1 = engine::QubitSpec::new(Frequency::new(NU1_KHZ).unwrap(), b1);
    let e2 = Frequency::new(NU2_KHZ).unwrap();
    let found = tur::violation_boundary(q1, e2, 1e-3, 1.0, Bound::Tur1, 500).unwrap();
    assert_eq!(found.len(), 1);
    let b = found[0].value();
    let at = |x: f64| {
        tur::evaluate(&EngineParams::new(
            q1,
            engine::QubitSpec::new(e2, units::InverseTemperature::new(x).unwrap()),
        ))
    };
    assert!(at(b * (1.0 - 1e-6)).tur1_violated);
    assert!(!at(b * (1.0 + 1e-6)).tur1_violated);
    let params = EngineParams::new(
        q1,
        engine::QubitSpec::new(e2, units::InverseTemperature::new(b).unwrap()),
    );
    assert_eq!(engine::classify_regime(&params), Regime::Refrigerator);
}
