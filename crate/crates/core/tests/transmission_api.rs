use std::f64::consts::PI;

use roughharm::transmission::{
    classical_jump_integral, default_t_grid, direction_grid, termwise_jump, PairingRules,
};
use roughharm::*;

const BASEL: f64 = PI * PI / 6.0;

#[test]
fn psi_and_inverse_examples() {
    assert_eq!(psi(0.5), 0.5);
    assert_eq!(psi(2.0), 8.0);
    assert_eq!(psi(-1.0), -1.0);
    assert!((invert_id_plus_psi(1.0, 1e-14).unwrap() - 0.5).abs() < 1e-14);
    assert!((invert_id_plus_psi(10.0, 1e-14).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn boundary_function_examples() {
    let e1 = [1.0, 0.0, 0.0];
    let one = TransmissionInstance::new(TransmissionVariant::Tilde, 3, 1 << 10, Some(1.0)).unwrap();
    // The j^-2 tail limits the reachable accuracy; 1e-3 is certified.
    let v = one.phi_eval(&e1, 1e-3).unwrap();
    assert!(!v.warning && v.tail_bound <= 1e-3);
    assert!((v.value - BASEL).abs() <= v.tail_bound);
    let half = TransmissionInstance::new(TransmissionVariant::Tilde, 3, 1 << 10, Some(0.5)).unwrap();
    let x = [0.48, 0.6, 0.64];
    let a = one.phi_eval(&x, 1e-10).unwrap().value;
    let b = half.phi_eval(&x, 1e-10).unwrap().value;
    assert_eq!(b, 0.5 * a);
    for theta in direction_grid(3, 200, 1) {
        assert!(one.phi(&theta).abs() <= one.rho() * one.sup_bound().bound + 1e-12);
    }
}

#[test]
fn nonlinearities() {
    let flat = TransmissionInstance::new(TransmissionVariant::Tilde, 2, 256, None).unwrap();
    for theta in direction_grid(2, 32, 0) {
        assert_eq!(flat.g_eval(&theta, 3.0), 0.0);
    }
    let inst = TransmissionInstance::new(TransmissionVariant::Holder { alpha: 0.5 }, 3, 256, None).unwrap();
    for theta in direction_grid(3, 32, 2) {
        let phi = inst.phi(&theta);
        assert!(phi.abs() <= 1.0);
        let (f, g) = inst.f_g_eval(&theta, phi);
        assert!((f + phi).abs() < 1e-15);
        assert_eq!(g, inst.g_eval(&theta, -7.0));
        // Psi(t) = 2 Phi: the identity branch or the cube root.
        let t = if (2.0 * phi).abs() <= 1.0 { 2.0 * phi } else { (2.0 * phi).cbrt() };
        assert!(inst.f_eval(&theta, t).abs() < 1e-12);
        let y = 0.37 + 3.0 * theta[1];
        let s = inst.invert_id_plus_f(&theta, y, 1e-13).unwrap();
        assert!((s + inst.f_eval(&theta, s) - y).abs() < 1e-12);
    }
}

#[test]
fn growth_certificates() {
    let tilde = TransmissionInstance::new(TransmissionVariant::Tilde, 3, 1 << 10, Some(1.0)).unwrap();
    let cert = certify_growth(&tilde, &default_t_grid(101), &direction_grid(3, 64, 3));
    assert!((cert.c1 - 3.0 / (PI * PI)).abs() < 1e-15);
    assert!((cert.c2 - BASEL).abs() < 1e-15);
    assert!(cert.pass);
    let flat = TransmissionInstance::new(TransmissionVariant::Tilde, 2, 1 << 10, None).unwrap();
    assert_eq!(certify_growth(&flat, &default_t_grid(11), &direction_grid(2, 8, 0)).c2, 0.0);
    let holder = TransmissionInstance::new(TransmissionVariant::Holder { alpha: 0.5 }, 3, 1 << 10, None).unwrap();
    let cert = certify_growth(&holder, &default_t_grid(201), &direction_grid(3, 128, 4));
    assert!(cert.pass && cert.min_slack_f >= 0.0 && cert.min_slack_g >= 0.0);
}

#[test]
fn hoelder_preservation_report() {
    let inst = TransmissionInstance::new(TransmissionVariant::Holder { alpha: 0.5 }, 3, 1 << 10, None).unwrap();
    let rep = condition3_check(&inst, None, 20_000, 5).unwrap();
    assert!((0.45..=0.55).contains(&rep.phi_exponent), "{}", rep.phi_exponent);
    assert!(rep.inverse_exponent >= 0.45);
    assert!(rep.pass);
    let tilde = TransmissionInstance::new(TransmissionVariant::Tilde, 3, 64, None).unwrap();
    assert!(condition3_check(&tilde, None, 100, 0).is_err());
}

#[test]
fn pairing_oracles() {
    // Green's identity: a bump inside the ball sees no jump.
    let inner = BallSeries::custom_highest_weight(3, &[(2, 0.8), (5, -0.3)], 1.0).unwrap();
    let outer = inner.kelvin_transform().unwrap().negated();
    let inside = BumpTestFunction::new(vec![0.2, 0.1, -0.1], 0.5).unwrap();
    let rules = PairingRules::for_bump(3, 5, &inside).unwrap();
    assert!(weak_jump_pairing(&outer, &inner, &inside, &rules).unwrap().value.abs() < 1e-10);

    // Single mode: pairing equals (n - 2) a int Y_k phi.
    let mode = BallSeries::custom_highest_weight(3, &[(3, 1.25)], 1.0).unwrap();
    let mode_out = mode.kelvin_transform().unwrap().negated();
    let bump = BumpTestFunction::new(vec![0.9, 0.3, 0.2], 0.5).unwrap();
    let rules = PairingRules::for_bump(3, 3, &bump).unwrap();
    let p = weak_jump_pairing(&mode_out, &mode, &bump, &rules).unwrap().value;
    let classical = classical_jump_integral(&mode_out, &mode, &bump, &rules.angular);
    let direct = rules.angular.integrate(|x| 1.25 * highest_weight_eval(3, x) * bump.value(x));
    assert!((p - classical).abs() < 1e-8);
    assert!((classical - direct).abs() < 1e-12);
    assert!(direct.abs() > 1e-3);

    // Same harmonic polynomial on both sides: no jump.
    let poly = BallSeries::custom_highest_weight(3, &[(2, 1.0)], 1.0).unwrap();
    assert!(weak_jump_pairing(&poly, &poly, &bump, &rules).unwrap().value.abs() < 1e-6);

    // Support reaching the outer sphere is rejected.
    let wide = BumpTestFunction::new(vec![1.6, 0.0, 0.0], 0.5).unwrap();
    assert!(weak_jump_pairing(&outer, &inner, &wide, &PairingRules::for_bump(3, 5, &wide).unwrap()).is_err());
}

#[test]
fn closed_form_jump_and_outer_datum() {
    let inst = TransmissionInstance::new(TransmissionVariant::Tilde, 3, 1 << 10, None).unwrap();
    for (_, jump, want) in inst.closed_form_jump() {
        assert!((jump - want).abs() < 1e-12);
    }
    let rho = inst.rho();
    for (k, h) in inst.h_coefficients() {
        let a = rho / ((k.trailing_zeros() as f64).powi(2));
        let want = -a * 2f64.powf(-1.0 - k as f64);
        assert!((h - want).abs() <= 1e-15 * want.abs());
    }
    assert_eq!(termwise_jump(inst.outer(), inst.inner()).len(), 10);
}

#[test]
fn small_verification_passes() {
    let inst = TransmissionInstance::new(TransmissionVariant::Tilde, 2, 64, None).unwrap();
    let bumps = standard_bumps(2, 5).unwrap();
    let tol = VerifyTolerances {
        directions: 64,
        ..VerifyTolerances::default()
    };
    let rep = verify_instance(&inst, &bumps, &tol).unwrap();
    assert!(rep.pass, "{:?}", rep.witnesses());
    assert!(rep.bumps.iter().all(|b| b.right_hand_side == 0.0));
    let json = serde_json::to_string(&rep).unwrap();
    assert!(json.contains("weak_jump"));
}

#[test]
fn unit_scale_emits_diagnostic() {
    let inst = TransmissionInstance::new(TransmissionVariant::Tilde, 2, 64, Some(1.0)).unwrap();
    let tol = VerifyTolerances {
        directions: 32,
        ..VerifyTolerances::default()
    };
    let rep = verify_instance(&inst, &standard_bumps(2, 2).unwrap(), &tol).unwrap();
    let diag = rep.diagnostics.iter().find(|d| d.name == "interface_residual_at_e1").unwrap();
    assert!((diag.value - (BASEL.powi(3) - BASEL)).abs() < 1e-3);
    assert!(!rep.pass);
}

#[test]
fn instance_json_round_trip() {
    let inst = TransmissionInstance::new(TransmissionVariant::Example { seed: 8 }, 3, 64, None).unwrap();
    let back = TransmissionInstance::from_json(&inst.to_json().unwrap()).unwrap();
    let x = [0.0, 0.6, 0.8];
    assert_eq!(back.phi(&x), inst.phi(&x));
    assert_eq!(back.rho(), inst.rho());
}
