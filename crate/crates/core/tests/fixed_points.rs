use mcg_core::{jacobian, vector_field, ModelParams, State};
use nalgebra::{Matrix3, Vector3};

fn newton(p: &ModelParams, mut s: State) -> Option<State> {
    for _ in 0..100 {
        let f = vector_field(&s, p).ok()?;
        let j = Matrix3::from_fn(|r, c| jacobian(&s, p)[r][c]);
        let dx = j.lu().solve(&Vector3::new(f.x, f.y, f.z))?;
        s = State::new(s.x - dx[0], s.y - dx[1], s.z - dx[2]);
        if !s.is_finite() || s.max_abs() > 1e6 {
            return None;
        }
        if dx.norm() < 1e-14 {
            return Some(s);
        }
    }
    None
}

#[test]
fn origin_is_the_only_equilibrium() {
    for alpha in [0.05, 0.5, 1.2, 7.5] {
        let p = ModelParams::study(alpha).unwrap();
        let grid: Vec<f64> = (0..=10).map(|i| -5.0 + i as f64).collect();
        let mut converged = 0;
        for &x in &grid {
            for &y in &grid {
                for &z in &grid {
                    if let Some(root) = newton(&p, State::new(x, y, z)) {
                        converged += 1;
                        assert!(root.max_abs() < 1e-10, "alpha={alpha}: spurious root {root:?}");
                    }
                }
            }
        }
        assert!(converged > 1000, "alpha={alpha}: only {converged} starts converged");
    }
}
