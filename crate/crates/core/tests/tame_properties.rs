use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tamedet::sampling::random_symbol;
use tamedet::tame::{pi_product, pi_product_with, winding_number, SignConvention};
use tamedet::{parse_symbol, Symbol, C64};

fn pi(a: &Symbol, b: &Symbol) -> C64 {
    pi_product(a, b).pi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pi_is_bimultiplicative_and_antisymmetric(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let (f, h, k): (Symbol, Symbol, Symbol) = (random_symbol(&mut g), random_symbol(&mut g), random_symbol(&mut g));
        let left = pi(&f.multiply(&h), &k);
        let right = pi(&f, &k) * pi(&h, &k);
        prop_assert!((left - right).norm() <= 1e-10 * right.norm().max(1.0));
        prop_assert!((pi(&f, &k) * pi(&k, &f) - 1.0).norm() < 1e-10);
    }

    #[test]
    fn winding_is_additive(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let (f, h): (Symbol, Symbol) = (random_symbol(&mut g), random_symbol(&mut g));
        prop_assert_eq!(winding_number(&f.multiply(&h)), winding_number(&f) + winding_number(&h));
    }
}

#[test]
fn sign_is_load_bearing_on_repeated_roots() {
    let a: Symbol = parse_symbol("z-0.3").unwrap();
    assert!((pi(&a, &a) + 1.0).norm() < 1e-15);
    assert!((pi_product_with(&a, &a, SignConvention::Unsigned).pi - 1.0).norm() < 1e-15);
}
