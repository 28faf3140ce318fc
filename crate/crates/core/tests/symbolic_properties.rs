use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tamedet::sampling::{random_point, random_polynomial, random_symbol};
use tamedet::symbolic::roots_of_polynomial;
use tamedet::{parse_symbol, Polynomial, Symbol, C64};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_is_multiplicative(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (a, b): (Symbol, Symbol) = (random_symbol(&mut g), random_symbol(&mut g));
        let ab = a.multiply(&b);
        for _ in 0..100 {
            let r = g.gen_range(0.0..4.0);
            let w: C64 = random_point(&mut g, r);
            let (Ok(x), Ok(y), Ok(xy)) = (a.eval(w), b.eval(w), ab.eval(w)) else { continue };
            prop_assert!((xy - x * y).norm() <= 1e-12 * (x * y).norm());
        }
    }

    #[test]
    fn leading_order_matches_order_at(seed in any::<u64>()) {
        let mut g = rng(seed);
        let s: Symbol = random_symbol(&mut g);
        for f in s.factors() {
            prop_assert_eq!(s.leading_laurent(f.root).order, s.order_at(f.root));
            prop_assert_eq!(s.order_at(f.root), f.mult);
        }
        for _ in 0..10 {
            let z: C64 = random_point(&mut g, 1.1);
            prop_assert_eq!(s.order_at(z), 0);
            prop_assert_eq!(s.leading_laurent(z).order, 0);
        }
    }

    #[test]
    fn roots_account_for_degree(seed in any::<u64>(), degree in 1usize..=12) {
        let p: Polynomial<f64> = random_polynomial(&mut rng(seed), degree);
        let roots = roots_of_polynomial(&p).unwrap();
        prop_assert_eq!(roots.iter().map(|r| r.1 as usize).sum::<usize>(), degree);
        for (r, _) in roots {
            prop_assert!(p.eval(r).norm() <= 1e-9 * p.norm_inf());
        }
    }

    #[test]
    fn invert_is_an_involution(seed in any::<u64>()) {
        let s: Symbol = random_symbol(&mut rng(seed));
        let back = s.invert().invert();
        prop_assert!(back.canonical_eq(&s));
        prop_assert_eq!(back.factors(), s.factors());
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let s: Symbol = random_symbol(&mut rng(seed));
        let once: Symbol = parse_symbol(&s.to_string()).unwrap();
        let twice: Symbol = parse_symbol(&once.to_string()).unwrap();
        prop_assert_eq!(&once, &s);
        prop_assert_eq!(twice, once);
    }
}

#[test]
fn algebraically_equal_inputs_share_a_canonical_form() {
    let pairs = [
        ("(z-0.3)/(z+0.4)", "(z+0.4)^-1*(z-0.3)"),
        ("z^2-0.8*z+0.15", "(z-0.5)*(z-0.3)"),
        ("(z-0.5)^2*3", "3*z^2-3*z+0.75"),
    ];
    for (a, b) in pairs {
        let (x, y): (Symbol, Symbol) = (parse_symbol(a).unwrap(), parse_symbol(b).unwrap());
        assert!(x.canonical_eq(&y), "{a} vs {b}: {x} vs {y}");
    }
}
