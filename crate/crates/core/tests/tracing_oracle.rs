use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topodyn::shadowing::{trace_finite_bruteforce, trace_linear_hyperbolic, Extension, GridPoint, ModularTorus, PseudoOrbit};
use topodyn::systems::{DynamicalSystem, TorusAutomorphism};
use topodyn::Entourage;

const CAT: [[i64; 2]; 2] = [[2, 1], [1, 1]];
const CAT_INV: [[i64; 2]; 2] = [[1, -1], [-1, 2]];
/// Pseudo-orbit points lie on the grid `(1/BASE)ℤ²`.
const BASE: i64 = 256;
/// Tracing radius; twice it is below the expansive constant of the cat map.
const E: f64 = 0.05;

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut r = [[0; 2]; 2];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Exponent of `ℤ² / (Aᵖ − I)ℤ²`, which clears every denominator of a
/// period-`p` point whose defects lie on the integer lattice.
fn period_exponent(p: usize) -> i64 {
    let mut m = [[1, 0], [0, 1]];
    for _ in 0..p {
        m = mat_mul(m, CAT);
    }
    let b = [[m[0][0] - 1, m[0][1]], [m[1][0], m[1][1] - 1]];
    let det = (b[0][0] * b[1][1] - b[0][1] * b[1][0]).abs();
    let g = gcd(gcd(b[0][0], b[0][1]), gcd(b[1][0], b[1][1]));
    det / g
}

#[test]
fn linear_periodic_solve_matches_bruteforce_on_invariant_grids() {
    let cat = TorusAutomorphism::cat_map();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in 1..=6usize {
        let m = BASE * period_exponent(p);
        let grid = ModularTorus::new(CAT, CAT_INV, m as u32);
        let ball = Entourage::ball("torus", grid.metric().clone(), E);
        let scale = (m / BASE) as u32;
        for _ in 0..3 {
            // small lattice offsets around the fixed point at the origin
            let offsets: Vec<[i64; 2]> = (0..p).map(|_| [rng.random_range(-1..=1), rng.random_range(-1..=1)]).collect();
            let coarse: Vec<GridPoint> = offsets.iter().map(|o| [o[0].rem_euclid(BASE) as u32, o[1].rem_euclid(BASE) as u32]).collect();
            let window: Vec<[f64; 2]> = coarse.iter().map(|c| [c[0] as f64 / BASE as f64, c[1] as f64 / BASE as f64]).collect();
            let po = PseudoOrbit::new(&cat, window, Extension::Periodic(p));
            let traced = trace_linear_hyperbolic(&cat, &po).unwrap();
            let y = traced.point;
            let y_grid: Vec<f64> = y.iter().map(|c| c * m as f64).collect();
            assert!(y_grid.iter().all(|c| (c - c.round()).abs() < 1e-6), "p={p}: {y:?} is off the 1/{m} grid");
            let y_grid: GridPoint = [y_grid[0].round().rem_euclid(m as f64) as u32, y_grid[1].round().rem_euclid(m as f64) as u32];

            let fine: Vec<GridPoint> = coarse.iter().map(|c| [c[0] * scale, c[1] * scale]).collect();
            let gpo = PseudoOrbit::new(&grid, fine, Extension::Periodic(p));
            let reach = (E * m as f64).ceil() as i64;
            let x0 = gpo.window[0];
            let candidates = (-reach..=reach).flat_map(|i| {
                (-reach..=reach).map(move |j| [(x0[0] as i64 + i).rem_euclid(m) as u32, (x0[1] as i64 + j).rem_euclid(m) as u32])
            });
            let found = trace_finite_bruteforce(&grid, candidates, &gpo, &ball).unwrap();
            assert_eq!(found, vec![y_grid], "p={p} offsets={offsets:?}");
            assert!(traced.error_bound < E);
        }
    }
}
