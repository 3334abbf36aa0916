//! Hand-written oracles shared by the integration tests.
#![allow(dead_code)]

pub type Scalar = fn(f64) -> f64;

pub fn kdv(k: f64) -> f64 {
    1.0 + k * k
}

pub fn whitham(k: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        (k.tanh() / k).sqrt()
    }
}

pub fn close(got: f64, want: f64, what: &str) {
    assert!(
        (got - want).abs() <= 1e-10 * want.abs(),
        "{what}: got {got:e}, want {want:e}"
    );
}

/// Hand-transcribed table entries: (η_N as (mode, value) pairs, τ, c_τ).
pub fn table(n: u32, alpha: f64, j: Scalar, rho: f64) -> (Vec<(usize, f64)>, usize, f64) {
    let d = |m: f64| j(rho) - j(m * rho);
    let d0 = j(rho) - 1.0;
    match n {
        3 => (vec![(3, alpha / (4.0 * d(3.0)))], 2, 0.75 * alpha),
        5 => (
            vec![
                (3, 5.0 * alpha / (16.0 * d(3.0))),
                (5, alpha / (16.0 * d(5.0))),
            ],
            4,
            5.0 * alpha / 8.0,
        ),
        7 => (
            vec![
                (3, 21.0 * alpha / (64.0 * d(3.0))),
                (5, 7.0 * alpha / (64.0 * d(5.0))),
                (7, alpha / (64.0 * d(7.0))),
            ],
            6,
            35.0 * alpha / 64.0,
        ),
        2 => (
            vec![(0, 1.0 / (2.0 * d0)), (2, 1.0 / (2.0 * d(2.0)))],
            2,
            1.0 / d0 + 1.0 / (2.0 * d(2.0)),
        ),
        4 => (
            vec![
                (0, 3.0 / (8.0 * d0)),
                (2, 1.0 / (2.0 * d(2.0))),
                (4, 1.0 / (8.0 * d(4.0))),
            ],
            6,
            9.0 / (8.0 * d0) + 1.0 / d(2.0) + 1.0 / (16.0 * d(4.0)),
        ),
        6 => (
            vec![
                (0, 5.0 / (16.0 * d0)),
                (2, 15.0 / (32.0 * d(2.0))),
                (4, 3.0 / (16.0 * d(4.0))),
                (6, 1.0 / (32.0 * d(6.0))),
            ],
            10,
            3.0 / 16.0
                * (25.0 / (4.0 * d0)
                    + 225.0 / (32.0 * d(2.0))
                    + 9.0 / (8.0 * d(4.0))
                    + 1.0 / (32.0 * d(6.0))),
        ),
        _ => unreachable!(),
    }
}

pub fn kdv_prime(k: f64) -> f64 {
    2.0 * k
}

pub fn whitham_prime(k: f64) -> f64 {
    let t = k.tanh();
    (k * (1.0 - t * t) - t) / (k * k) / (2.0 * (t / k).sqrt())
}

/// (ρȷ′ + 3ȷ(ρ) − 2ȷ(2ρ) − 1) / ((ȷ(ρ) − ȷ(2ρ))(ρȷ′ + ȷ(ρ) − 1)), with ȷ′
/// supplied in closed form.
pub fn quadratic_lambda_f(j: impl Fn(f64) -> f64, dj: impl Fn(f64) -> f64, rho: f64) -> f64 {
    let rj = rho * dj(rho);
    (rj + 3.0 * j(rho) - 2.0 * j(2.0 * rho) - 1.0) / ((j(rho) - j(2.0 * rho)) * (rj + j(rho) - 1.0))
}
