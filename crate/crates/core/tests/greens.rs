use foldylax_core::greens::{dyadic_pi, grad_phi, phi, Kernel, Wavenumber};
use foldylax_core::{Complex64, Error, Vec3};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-2.0f64..2.0)
}

fn wavenumber() -> impl Strategy<Value = Wavenumber> {
    (0.0f64..3.0, 0.0f64..1.0).prop_map(|(re, im)| Wavenumber::new(Complex64::new(re, im)).unwrap())
}

fn shifted(x: Vec3, axis: usize, h: f64) -> Vec3 {
    let mut y = x;
    y[axis] += h;
    y
}

/// Hessian of `phi` in `x` by central differences.
fn fd_hessian(k: Wavenumber, x: Vec3, y: Vec3, h: f64) -> [[Complex64; 3]; 3] {
    let f = |p: Vec3| phi(k, p, y).unwrap();
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            out[a][b] = if a == b {
                (f(shifted(x, a, h)) - 2.0 * f(x) + f(shifted(x, a, -h))) / (h * h)
            } else {
                (f(shifted(shifted(x, a, h), b, h)) - f(shifted(shifted(x, a, h), b, -h))
                    - f(shifted(shifted(x, a, -h), b, h))
                    + f(shifted(shifted(x, a, -h), b, -h)))
                    / (4.0 * h * h)
            };
        }
    }
    out
}

fn frobenius(m: &[[Complex64; 3]; 3]) -> f64 {
    m.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn kernel_value_at_distance_two() {
    let v = phi(Wavenumber::real(1.0), [2.0, 0.0, 0.0], [0.0; 3]).unwrap();
    let expected = Complex64::new(0.0, 2.0).exp() / (8.0 * std::f64::consts::PI);
    assert!((v - expected).norm() < 1e-16);
}

#[test]
fn gradient_matches_finite_differences() {
    let k = Wavenumber::real(1.0);
    let (x, y) = ([0.0, 0.0, 2.0], [0.0; 3]);
    let g = grad_phi(k, x, y).unwrap();
    let h = 1e-5;
    for a in 0..3 {
        let fd = (phi(k, shifted(x, a, h), y).unwrap() - phi(k, shifted(x, a, -h), y).unwrap()) / (2.0 * h);
        assert!((fd - g[a]).norm() <= 1e-6 * g[2].norm(), "component {a}");
    }
}

#[test]
fn static_dyadic_example() {
    let d = dyadic_pi(Wavenumber::real(0.0), [1.0, 0.0, 0.0], [0.0; 3]).unwrap();
    let c = 1.0 / (4.0 * std::f64::consts::PI);
    let expected = [2.0 * c, -c, -c];
    for a in 0..3 {
        for b in 0..3 {
            let e = if a == b { expected[a] } else { 0.0 };
            assert!((d.0[a][b] - e).norm() < 1e-15);
        }
    }
    let fd = fd_hessian(Wavenumber::real(0.0), [1.0, 0.0, 0.0], [0.0; 3], 1e-4);
    assert!((fd[0][0].re - 2.0 * c).abs() < 1e-6);
}

#[test]
fn configurable_floor() {
    let kernel = Kernel::with_floor(Wavenumber::real(1.0), 1e-3);
    assert!(matches!(
        kernel.phi([0.0; 3], [1e-4, 0.0, 0.0]),
        Err(Error::CoincidentPoints { .. })
    ));
    assert!(kernel.phi([0.0; 3], [1e-2, 0.0, 0.0]).is_ok());
}

#[test]
fn dyadic_against_fd_on_100_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x: Vec3 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let y: Vec3 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let r = foldylax_core::vector::distance(x, y);
        if r < 0.1 {
            continue;
        }
        let k = Wavenumber::new(Complex64::new(rng.gen_range(0.0..3.0), rng.gen_range(0.0..1.0))).unwrap();
        let d = dyadic_pi(k, x, y).unwrap();
        let mut fd = fd_hessian(k, x, y, 1e-4 * r);
        let ph = phi(k, x, y).unwrap();
        let k2 = k.value() * k.value();
        for (a, row) in fd.iter_mut().enumerate() {
            row[a] += k2 * ph;
        }
        let mut diff = d.0;
        for a in 0..3 {
            for b in 0..3 {
                diff[a][b] -= fd[a][b];
            }
        }
        worst = worst.max(frobenius(&diff) / d.frobenius());
    }
    assert!(worst <= 1e-5, "worst relative deviation {worst:e}");
}

#[test]
fn attenuated_kernel_decays_monotonically() {
    let k = Wavenumber::new(Complex64::new(1.5, 0.8)).unwrap();
    let start = 1.0 / k.abs();
    let mut previous = f64::INFINITY;
    for n in 0..40 {
        let r = start * 1.2f64.powi(n);
        let v = phi(k, [r, 0.0, 0.0], [0.0; 3]).unwrap().norm();
        assert!(v < previous);
        previous = v;
    }
}

proptest! {
    #[test]
    fn gradient_is_antisymmetric(x in point(), y in point(), k in wavenumber()) {
        prop_assume!(foldylax_core::vector::distance(x, y) > 1e-3);
        let a = grad_phi(k, x, y).unwrap();
        let b = grad_phi(k, y, x).unwrap();
        for c in 0..3 {
            prop_assert!((a[c] + b[c]).norm() <= 1e-14 * a[c].norm().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn dyadic_is_symmetric_in_indices_and_arguments(x in point(), y in point(), k in wavenumber()) {
        prop_assume!(foldylax_core::vector::distance(x, y) > 1e-3);
        let a = dyadic_pi(k, x, y).unwrap();
        let b = dyadic_pi(k, y, x).unwrap();
        prop_assert!(a.asymmetry() <= 1e-13);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((a.0[i][j] - b.0[i][j]).norm() <= 1e-13 * a.frobenius());
            }
        }
    }

    #[test]
    fn static_dyadic_is_traceless(x in point(), y in point()) {
        prop_assume!(foldylax_core::vector::distance(x, y) > 1e-2);
        let d = dyadic_pi(Wavenumber::real(0.0), x, y).unwrap();
        let tr = d.0[0][0] + d.0[1][1] + d.0[2][2];
        prop_assert!(tr.norm() <= 1e-13 * d.frobenius());
    }
}
