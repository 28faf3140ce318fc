use nalgebra::DMatrix;
use tamedet::ktheory::{build_lift_r, build_lift_s, inverse_defect};
use tamedet::toeplitz::{
    commutator_determinant, fourier_coeffs, fourier_coeffs_fft, perturbed_commutator_determinant, ToeplitzInverse,
    ToeplitzOp,
};
use tamedet::{parse_symbol, Matrix, PerturbedToeplitz, Symbol, C64};

fn sym(s: &str) -> Symbol {
    parse_symbol(s).unwrap()
}

fn singular_values(m: &Matrix) -> Vec<f64> {
    let d = DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)]);
    let mut s: Vec<f64> = d.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

#[test]
fn hankel_corner_of_linear_lift_has_rank_one() {
    let r = build_lift_r(&sym("z-0.3"), 64).unwrap();
    let s = singular_values(&r.blocks()[0][1].entries);
    assert!(s[0] > 0.1, "{}", s[0]);
    assert!(s[1] < 1e-10, "{}", s[1]);
}

#[test]
fn closed_form_inverses_at_buffer_256() {
    for text in ["(z-0.3)/(z+0.4)", "z-0.5", "(z-(0.2+0.5i))^2*(z-2)^-1", "3+z"] {
        let s = sym(text);
        assert!(inverse_defect(&build_lift_r(&s, 256).unwrap()) < 1e-10, "{text}");
        assert!(inverse_defect(&build_lift_s(&s, 256).unwrap()) < 1e-10, "{text}");
    }
}

#[test]
fn inverse_blocks_match_the_display() {
    // R^{-1} = [[v, 1 - vu], [uv - 1, 2u - uvu]] on blocks (0, 1)
    let phi = sym("(z-0.4)^2/(z+1.5)");
    let r = build_lift_r(&phi, 24).unwrap();
    let inv = r.inverse_blocks();
    let fwd = r.blocks();
    assert!(inv[0][0].entries.sub(&fwd[1][1].entries).max_abs() < 1e-13);
    assert!(inv[1][1].entries.sub(&fwd[0][0].entries).max_abs() < 1e-13);
    assert!(inv[0][1].entries.sub(&fwd[1][0].entries).max_abs() < 1e-13);
    assert!(inv[1][0].entries.sub(&fwd[0][1].entries).max_abs() < 1e-13);
    assert!(inv[2][2].entries.sub(&Matrix::identity(24)).max_abs() == 0.0);
}

#[test]
fn wiener_hopf_inverse_inverts_the_operator() {
    let phi = sym("(z-0.3)*(z-2)/((z+0.4)*(z-1.5i))");
    let dim = 200;
    let t = ToeplitzOp::of_symbol(&phi, dim).unwrap();
    let inv = ToeplitzInverse::new(&phi, dim).unwrap();
    // away from the far edge, T^{-1} T e_k = e_k
    for k in [0usize, 1, 5, 20] {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[k] = C64::new(1.0, 0.0);
        let back = inv.apply(&t.apply(&e));
        let err = back[..dim / 2].iter().zip(&e).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "column {k}: {err:e}");
    }
}

#[test]
fn sampled_coefficients_agree_with_analytic() {
    for text in ["1/(z-0.3)", "(z-0.5)^2/((z+0.25)*(z-2i))", "(z-(0.1+0.7i))^-2*(z-1.4)"] {
        let s = sym(text);
        let exact = fourier_coeffs(&s, 100).unwrap();
        let (fft, tail) = fourier_coeffs_fft(&s, 100).unwrap();
        assert!(tail < 1e-12, "{text}");
        assert!(exact.max_discrepancy(&fft) < 1e-12, "{text}");
    }
}

#[test]
fn zero_correction_is_bit_identical_for_both_operands() {
    let (a, b) = (sym("(z-0.3)/(z+0.4)"), sym("z-3"));
    let pa = PerturbedToeplitz::new(a.clone(), Matrix::zeros(16, 16)).unwrap();
    let pb = PerturbedToeplitz::new(b.clone(), Matrix::zeros(3, 3)).unwrap();
    assert_eq!(pa.symbol(), &a);
    let plain = commutator_determinant(&a, &b, 32, 192).unwrap();
    assert_eq!(perturbed_commutator_determinant(&pa, &pb, 32, 192).unwrap(), plain);
    assert!(PerturbedToeplitz::new(a, Matrix::zeros(17, 17)).is_err());
}
