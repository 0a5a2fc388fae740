use rand::Rng;
use superlens::fields::{
    expand_source_to_multipoles, maxwell_residual, silver_muller_residual, FieldPair, FnPair, MultipoleCoefficients,
    MultipoleExpansion, MultipoleKind, SourceSpec,
};
use superlens::geometry::{lens_radii, Point};
use superlens::materials::{assemble_hat_medium, assemble_lens_medium, LayeredMedium, ObjectMedium, RadialTensor, Shell};
use superlens::modesolver::{
    hat_spectrum, limit_solution_via_reflection, mie_isotropic_oracle, reconstruct_fields, solve_layered,
    IsotropicLayer, LayeredSolution, SolveOptions, SolvedField,
};
use superlens::sampling::{point_in_shell, rng};
use superlens::{CVec3, C64};

fn layered(layers: &[IsotropicLayer]) -> LayeredMedium {
    let shells = layers
        .iter()
        .map(|l| Shell {
            outer_radius: l.outer_radius,
            eps: RadialTensor::isotropic(l.eps),
            mu: RadialTensor::isotropic(l.mu),
        })
        .collect();
    LayeredMedium::new(shells, 0.0, None).unwrap()
}

fn zero() -> CVec3 {
    CVec3::zeros()
}

#[test]
fn ode_matches_transfer_matrix_oracle_on_random_layers() {
    let mut g = rng(11);
    for case in 0..12 {
        let k = g.random_range(0.5..2.0);
        let outer = g.random_range(1.0..(10.0 / k));
        let mut radii = [g.random_range(0.1..0.9), g.random_range(0.1..0.9), 1.0];
        radii[..2].sort_by(|a, b| a.partial_cmp(b).unwrap());
        if radii[1] - radii[0] < 0.05 {
            radii[1] = radii[0] + 0.05;
        }
        let layers: Vec<IsotropicLayer> = radii
            .iter()
            .map(|&t| IsotropicLayer {
                outer_radius: t * outer,
                eps: C64::new(g.random_range(0.5..4.0), g.random_range(0.0..0.5)),
                mu: C64::new(g.random_range(0.5..3.0), g.random_range(0.0..0.5)),
            })
            .collect();
        let n_max = 20;
        let oracle = mie_isotropic_oracle(&layers, k, n_max).unwrap();
        let ode = solve_layered(&layered(&layers), k, n_max, &SolveOptions::default()).unwrap();
        for (mode, s) in &oracle.s {
            let d = (ode.spectrum.s[mode] - s).norm();
            assert!(d < 1e-8, "case {case} {mode:?}: |Δs| = {d:e}");
        }
    }
}

#[test]
fn hat_spectrum_matches_assembled_hat_medium() {
    let lens = lens_radii(2.0, 1.0, 3.0).unwrap();
    let object = ObjectMedium::isotropic(C64::new(3.0, 0.2), 1.5);
    let hat = assemble_hat_medium(&lens, &object).unwrap();
    let k = 1.1;
    let ode = solve_layered(&hat, k, 12, &SolveOptions::default()).unwrap();
    let oracle = hat_spectrum(&lens, C64::new(3.0, 0.2), C64::new(1.5, 0.0), k, 12).unwrap();
    for (mode, s) in &oracle.s {
        assert!((ode.spectrum.s[mode] - s).norm() < 1e-9);
    }
}

#[test]
fn lossless_spectrum_is_unitary() {
    let layers = [
        IsotropicLayer {
            outer_radius: 0.6,
            eps: C64::new(5.0, 0.0),
            mu: C64::new(1.0, 0.0),
        },
        IsotropicLayer {
            outer_radius: 1.4,
            eps: C64::new(1.5, 0.0),
            mu: C64::new(2.0, 0.0),
        },
    ];
    let sol = solve_layered(&layered(&layers), 2.0, 15, &SolveOptions::default()).unwrap();
    for s in sol.spectrum.s.values() {
        assert!(((C64::new(1.0, 0.0) + 2.0 * s).norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn matched_object_is_cloaked_as_loss_vanishes() {
    // Object (mI, mI) has vacuum as magnified image, so the lens spectrum
    // tends to zero with the loss.
    let lens = lens_radii(2.0, 1.0, 2.0).unwrap();
    let object = ObjectMedium::isotropic(2.0, 2.0);
    let mut prev = f64::INFINITY;
    for delta in [1e-1, 1e-2, 1e-3] {
        let medium = assemble_lens_medium(&lens, delta, &object).unwrap();
        let s = solve_layered(&medium, 1.0, 6, &SolveOptions::default())
            .unwrap()
            .spectrum
            .max_abs();
        assert!(s < prev, "delta {delta}: {s} not below {prev}");
        prev = s;
    }
    assert!(prev < 1e-2);
}

fn solved_plane_wave(medium: &LayeredMedium, k: f64, n_max: usize) -> (LayeredSolution, MultipoleCoefficients) {
    let sol = solve_layered(medium, k, n_max, &SolveOptions::default()).unwrap();
    let inc = expand_source_to_multipoles(&SourceSpec::default_plane_wave(), k, n_max, 1.0, 1e-10).unwrap();
    (sol, inc)
}

#[test]
fn reconstructed_field_solves_maxwell_in_every_layer() {
    let layers = [
        IsotropicLayer {
            outer_radius: 0.5,
            eps: C64::new(3.0, 0.1),
            mu: C64::new(1.0, 0.0),
        },
        IsotropicLayer {
            outer_radius: 0.9,
            eps: C64::new(1.5, 0.0),
            mu: C64::new(2.0, 0.3),
        },
    ];
    let medium = layered(&layers);
    let (sol, inc) = solved_plane_wave(&medium, 1.5, 14);
    let pair = SolvedField {
        solution: &sol,
        incident: &inc,
    };
    let eps = medium.field(superlens::materials::Material::Eps);
    let mu = medium.field(superlens::materials::Material::Mu);
    let mut g = rng(5);
    for (a, b) in [(0.05, 0.45), (0.55, 0.85), (0.95, 2.5)] {
        for _ in 0..6 {
            let x = point_in_shell(&mut g, a, b);
            let (e, h) = pair.eval(&x).unwrap();
            let (re, rh) = maxwell_residual(&pair, &eps, &mu, |_| zero(), &x, 1e-4).unwrap();
            let scale = e.norm() + h.norm();
            assert!(re.norm() + rh.norm() < 1e-5 * scale, "r = {}", x.norm());
        }
    }
}

#[test]
fn tangential_traces_are_continuous_across_interfaces() {
    let layers = [IsotropicLayer {
        outer_radius: 0.8,
        eps: C64::new(4.0, 0.0),
        mu: C64::new(1.0, 0.0),
    }];
    let (sol, inc) = solved_plane_wave(&layered(&layers), 2.0, 14);
    let mut g = rng(3);
    for _ in 0..10 {
        let d = superlens::sampling::unit_vector(&mut g);
        let nu = d.map(|v| C64::new(v, 0.0));
        let (ei, hi) = reconstruct_fields(&sol, &inc, &(d * (0.8 - 1e-9))).unwrap();
        let (eo, ho) = reconstruct_fields(&sol, &inc, &(d * (0.8 + 1e-9))).unwrap();
        assert!((ei.cross(&nu) - eo.cross(&nu)).norm() < 1e-7);
        assert!((hi.cross(&nu) - ho.cross(&nu)).norm() < 1e-7);
    }
}

#[test]
fn scattered_field_is_outgoing() {
    let layers = [IsotropicLayer {
        outer_radius: 0.7,
        eps: C64::new(2.5, 0.0),
        mu: C64::new(1.0, 0.0),
    }];
    let k = 1.0;
    let (sol, inc) = solved_plane_wave(&layered(&layers), k, 10);
    let incident = MultipoleExpansion {
        coefficients: &inc,
        kind: MultipoleKind::Regular,
    };
    let scattered = FnPair {
        k,
        f: |x: &Point| {
            let (e, h) = reconstruct_fields(&sol, &inc, x)?;
            let (e0, h0) = incident.eval(x)?;
            Ok((e - e0, h - h0))
        },
    };
    let x = Point::new(0.3, -0.5, 0.8).normalize();
    let near = silver_muller_residual(&scattered, &(x * 20.0)).unwrap();
    let far = silver_muller_residual(&scattered, &(x * 80.0)).unwrap();
    assert!(far < near / 8.0, "{near} {far}");
}

#[test]
fn rotated_incidence_gives_rotated_field() {
    let layers = [IsotropicLayer {
        outer_radius: 0.9,
        eps: C64::new(3.0, 0.5),
        mu: C64::new(1.2, 0.0),
    }];
    let medium = layered(&layers);
    let k = 1.3;
    let n_max = 14;
    let sol = solve_layered(&medium, k, n_max, &SolveOptions::default()).unwrap();
    let rot = nalgebra::Rotation3::from_axis_angle(&nalgebra::Vector3::z_axis(), 0.7);
    let base = SourceSpec::default_plane_wave();
    let p = rot * Point::new(1.0, 0.0, 0.0);
    let turned = SourceSpec::PlaneWave {
        direction: [0.0, 0.0, 1.0],
        polarization: [[p.x, 0.0], [p.y, 0.0], [p.z, 0.0]],
    };
    let a = expand_source_to_multipoles(&base, k, n_max, 1.0, 1e-10).unwrap();
    let b = expand_source_to_multipoles(&turned, k, n_max, 1.0, 1e-10).unwrap();
    let rc = rot.matrix().map(|v| C64::new(v, 0.0));
    for x in [Point::new(0.2, 0.3, -0.1), Point::new(1.1, -0.4, 0.6)] {
        let (e0, _) = reconstruct_fields(&sol, &a, &x).unwrap();
        let (e1, _) = reconstruct_fields(&sol, &b, &(rot * x)).unwrap();
        assert!((rc * e0 - e1).norm() < 1e-8 * e0.norm());
    }
}

#[test]
fn reflected_limit_field_solves_lens_equations() {
    let lens = lens_radii(2.0, 1.0, 3.0).unwrap();
    let object = ObjectMedium::isotropic(C64::new(3.0, 0.0), 1.0);
    let hat = assemble_hat_medium(&lens, &object).unwrap();
    let k = 1.0;
    let (sol, inc) = solved_plane_wave(&hat, k, 12);
    let hat_pair = SolvedField {
        solution: &sol,
        incident: &inc,
    };
    let lossless = assemble_lens_medium(&lens, 0.0, &object).unwrap();
    let eps = lossless.field(superlens::materials::Material::Eps);
    let mu = lossless.field(superlens::materials::Material::Mu);
    let (f, g) = (lens.fold(), lens.unfold());
    let limit = FnPair {
        k,
        f: |x: &Point| limit_solution_via_reflection(&hat_pair, &f, &g, x),
    };
    let mut gen = rng(9);
    for (a, b) in [(0.1, 0.95 * lens.r1), (1.05 * lens.r1, 0.95 * lens.r2), (1.05 * lens.r2, 3.0 * lens.r3)] {
        for _ in 0..5 {
            let x = point_in_shell(&mut gen, a, b);
            let (e, h) = limit.eval(&x).unwrap();
            let (re, rh) = maxwell_residual(&limit, &eps, &mu, |_| zero(), &x, 1e-5 * x.norm()).unwrap();
            assert!(re.norm() + rh.norm() < 1e-5 * (e.norm() + h.norm()), "r = {}", x.norm());
        }
    }
    assert!(limit_solution_via_reflection(&hat_pair, &f, &g, &Point::new(0.0, 0.0, lens.r2)).is_err());
}
