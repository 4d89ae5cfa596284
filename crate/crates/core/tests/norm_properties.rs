use proptest::prelude::*;

use orlicz_kit::measure::WeightedStructure;
use orlicz_kit::norms::{amemiya_norm, luxemburg_norm, modular, Weight, AMEMIYA_TOL, LUXEMBURG_TOL};
use orlicz_kit::sample::{self, SpaceShape};
use orlicz_kit::{MeasureSpace, OrliczFunction, PieceSet, SimpleFunction};

struct Case {
    space: MeasureSpace,
    phi: OrliczFunction,
    f: SimpleFunction,
    g: SimpleFunction,
    tau_seed: u64,
}

fn case(seed: u64) -> Case {
    use rand::Rng;
    let mut rng = sample::rng(seed);
    let shape = SpaceShape {
        atoms: rng.random_range(1..=5),
        segment: rng.random_bool(0.6),
        family: rng.random_bool(0.5),
    };
    let space = sample::space(&mut rng, shape);
    Case {
        phi: sample::phi(&mut rng),
        f: sample::function(&mut rng, &space),
        g: sample::function(&mut rng, &space),
        tau_seed: rng.random(),
        space,
    }
}

fn lux(f: &SimpleFunction, phi: &OrliczFunction, w: Weight<'_>) -> f64 {
    luxemburg_norm(f, phi, w, LUXEMBURG_TOL).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogeneous(seed in any::<u64>(), k in -8.0f64..8.0) {
        let c = case(seed);
        let w: Weight<'_> = (&c.space).into();
        let a = lux(&c.f.scale(k), &c.phi, w);
        let b = k.abs() * lux(&c.f, &c.phi, w);
        prop_assert!((a - b).abs() <= 1e-8 * a.max(b).max(1e-300), "{a} vs {b}");
    }

    #[test]
    fn triangle(seed in any::<u64>()) {
        let c = case(seed);
        let w: Weight<'_> = (&c.space).into();
        // family rules with different profiles have no representable sum
        let off_family = PieceSet::family_only(c.space.family_universe()).complement(&c.space);
        let g = c.g.restrict(&off_family);
        let sum = lux(&c.f.add(&g).unwrap(), &c.phi, w);
        let bound = lux(&c.f, &c.phi, w) + lux(&g, &c.phi, w);
        prop_assert!(sum <= bound * (1.0 + 1e-9), "{sum} > {bound}");
    }

    #[test]
    fn monotone_in_absolute_value(seed in any::<u64>(), t in 0.0f64..1.0) {
        let c = case(seed);
        let w: Weight<'_> = (&c.space).into();
        let smaller = c.f.scale(t);
        prop_assert!(lux(&smaller, &c.phi, w) <= lux(&c.f, &c.phi, w));
    }

    #[test]
    fn weighted_sandwich(seed in any::<u64>()) {
        let c = case(seed);
        let mut rng = sample::rng(c.tau_seed);
        let ws = WeightedStructure::derive(&c.space, sample::transformation(&mut rng, &c.space)).unwrap();
        let w: Weight<'_> = (&ws).into();
        let l = lux(&c.f, &c.phi, w);
        let a = amemiya_norm(&c.f, &c.phi, w, AMEMIYA_TOL).unwrap().value;
        prop_assert!(l <= a * (1.0 + 1e-8) && a <= 2.0 * l * (1.0 + 1e-8), "{l} {a}");
        // the norm is the least scale with modular at most one
        if l > 0.0 {
            let inside = modular(&c.f.scale(1.0 / l), &c.phi, w).unwrap().value;
            prop_assert!(inside <= 1.0 + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `φ(x) = x^p/p` gives `(1/p)^(1/p) ||f||_p`; plain `x^p` gives `||f||_p`.
    #[test]
    fn power_normalizations(seed in any::<u64>(), p in 1.1f64..5.0) {
        let mut rng = sample::rng(seed);
        let space = sample::space(&mut rng, SpaceShape { atoms: 8, segment: true, family: false });
        let f = sample::function(&mut rng, &space);
        let w: Weight<'_> = (&space).into();
        let mut sum = 0.0;
        for (v, a) in f.atoms().iter().zip(space.atoms()) {
            sum += v.abs().powf(p) * a.mass;
        }
        let cell = space.cell_mass(f.depth());
        for &(a, b, v) in f.runs() {
            sum += v.abs().powf(p) * cell * (b - a) as f64;
        }
        let p_norm = sum.powf(1.0 / p);
        let plain = lux(&f, &OrliczFunction::power(p, 1.0).unwrap(), w);
        let scaled = lux(&f, &OrliczFunction::power(p, 1.0 / p).unwrap(), w);
        prop_assert!((plain - p_norm).abs() <= 1e-8 * p_norm.max(1e-300));
        let expected = (1.0 / p).powf(1.0 / p) * p_norm;
        prop_assert!((scaled - expected).abs() <= 1e-8 * expected.max(1e-300), "{scaled} vs {expected}");
    }
}
