//! Property-based invariants: configuration round-trips, structural
//! sign identities, quadrature linearity/additivity, and scale
//! consistency of the cutoff.

use casimir_densities::boundary;
use casimir_densities::cavity;
use casimir_densities::config::{
    parse_config, BoundaryConfig, CavityConfig, CavityCutoff, CavityDimensionless,
    PhysicalConstants, RunConfig, SourceConfig,
};
use casimir_densities::point_source;
use casimir_densities::quadrature::{self, Domain};
use proptest::prelude::*;

fn cavity_dimensionless(omega_hat: f64, mu: f64, n_modes: usize) -> CavityDimensionless {
    CavityDimensionless {
        omega_hat,
        mu,
        n_modes,
    }
}

fn run_config_strategy() -> impl Strategy<Value = RunConfig> {
    (
        (1e-18..1e-15f64, 0.0..0.5f64, 1.0..10.0f64, 2usize..500),
        (0.01..10.0f64, 1e-9..1.0f64, 0.01..1.0f64, 10.0..1e4f64),
        (2usize..400, any::<bool>()),
        (1e-7..1e-4f64, 1e-13..1e-9f64, 1e4..1e7f64),
        (1usize..200, 0.0..0.4f64, 0.6..1.0f64, 2usize..300),
        proptest::option::of(0.001..0.1f64),
    )
        .prop_map(
            |(
                (eta, z_min, z_span, z_samples),
                (alpha, gamma_c, r_min, r_span),
                (r_samples, log_spacing),
                (l0, mass, omega_osc),
                (n_modes, x_min, x_max, x_samples),
                sigma,
            )| {
                RunConfig {
                    constants: PhysicalConstants::default(),
                    boundary: BoundaryConfig {
                        eta,
                        z_min,
                        z_max: z_min + z_span,
                        samples: z_samples,
                    },
                    source: SourceConfig {
                        alpha,
                        gamma_c,
                        r_min,
                        r_max: r_min + r_span,
                        samples: r_samples,
                        log_spacing,
                    },
                    cavity: CavityConfig {
                        l0,
                        mass,
                        omega_osc,
                        cutoff: CavityCutoff::NModes(n_modes),
                        sigma_over_l0: sigma,
                        x_min,
                        x_max,
                        samples: x_samples,
                    },
                }
            },
        )
}

proptest! {
    /// Serializing a configuration and re-parsing it reproduces every
    /// field exactly.
    #[test]
    fn config_round_trip(cfg in run_config_strategy()) {
        let text = cfg.to_text();
        let parsed = parse_config(&text).expect("serialized config must parse");
        prop_assert_eq!(parsed, cfg);
    }

    /// The magnetic wall profile is the bitwise negation of the
    /// electric one at every position.
    #[test]
    fn boundary_pointwise_cancellation(z in 0.0..1e6f64) {
        let e = boundary::e2_renorm(z).unwrap();
        let b = boundary::b2_renorm(z).unwrap();
        prop_assert_eq!(b.to_bits(), (-e).to_bits());
        prop_assert_eq!(e + b, 0.0);
    }

    /// Splitting a finite quadrature domain changes the result by at
    /// most twice the requested tolerance.
    #[test]
    fn quadrature_interval_additivity(split in 0.05..2.95f64) {
        let f = |x: f64| 1.0 / (1.0 + x * x);
        let tol = 1e-10;
        let whole = quadrature::integrate(f, Domain::finite(0.0, 3.0), tol).unwrap().value;
        let left = quadrature::integrate(f, Domain::finite(0.0, split), tol).unwrap().value;
        let right = quadrature::integrate(f, Domain::finite(split, 3.0), tol).unwrap().value;
        prop_assert!((whole - (left + right)).abs() <= 2.0 * tol * whole.abs());
    }

    /// Quadrature is linear within twice the tolerance.
    #[test]
    fn quadrature_linearity(alpha in -10.0..10.0f64, beta in -10.0..10.0f64) {
        let f = |t: f64| (-t).exp();
        let g = |t: f64| 1.0 / (1.0 + t * t).powi(2);
        let tol = 1e-10;
        let dom = Domain::semi_infinite(0.0, 1.0);
        let fi = quadrature::integrate(f, dom, tol).unwrap().value;
        let gi = quadrature::integrate(g, dom, tol).unwrap().value;
        let combined = quadrature::integrate(|t| alpha * f(t) + beta * g(t), dom, tol)
            .unwrap()
            .value;
        let scale = (alpha * fi).abs() + (beta * gi).abs();
        prop_assert!((combined - (alpha * fi + beta * gi)).abs() <= 2.0 * tol * scale + 1e-14);
    }

    /// The source cutoff is a pure length scale: computing with a
    /// rescaled lower limit and rescaled radius reproduces the
    /// reference result after an exact power-law factor.
    #[test]
    fn source_cutoff_is_a_length_scale(
        g in 0.3..3.0f64,
        r in 0.0..50.0f64,
    ) {
        let scaled = point_source::u_electric_with_cutoff(r * g, g).unwrap();
        let reference = point_source::u_electric(r).unwrap() / g.powi(7);
        prop_assert!(
            (scaled - reference).abs() <= 1e-12 * reference.abs(),
            "g {} r {}: {:e} vs {:e}", g, r, scaled, reference
        );
    }

    /// The wall excitation is exactly linear in the fluctuation
    /// parameter (hence in the inverse mirror mass).
    #[test]
    fn excitation_scales_bitwise_with_mu(mu in 1e-8..1e-2f64) {
        let base = cavity::wall_excitation(&cavity_dimensionless(0.3, mu, 15));
        let doubled = cavity::wall_excitation(&cavity_dimensionless(0.3, 2.0 * mu, 15));
        prop_assert_eq!(doubled.n_b.to_bits(), (2.0 * base.n_b).to_bits());
    }

    /// The density change is nonnegative at every cavity position.
    #[test]
    fn cavity_density_nonnegative(x in 0.0..=1.0f64) {
        let params = cavity_dimensionless(1.0617e-9, 1.0, 25);
        let s = cavity::delta_density_fast(x, &params).unwrap();
        prop_assert!(s >= 0.0);
    }
}
