//! Derivative-free minimization over qubit measurement directions.

use std::f64::consts::PI;

use crate::correlations::MeasurementDirection;
use crate::exec::{argmin, Exec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub initial_step: f64,
    /// Stop when the spread of simplex values drops below this.
    pub ftol: f64,
    pub max_iter: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            initial_step: 0.05,
            ftol: 1e-8,
            max_iter: 400,
        }
    }
}

/// Minimize `f` starting from `x0`. Returns the best point and its value.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], opts: &NelderMead) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        simplex.push(x);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();

    for _ in 0..opts.max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if (values[n] - values[0]).abs() <= opts.ftol {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|x| x[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
        } else {
            let (xc, fc) = if fr < values[n] {
                let xc = along(-0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                for i in 1..=n {
                    let shrunk: Vec<f64> = simplex[0]
                        .iter()
                        .zip(&simplex[i])
                        .map(|(b, x)| b + 0.5 * (x - b))
                        .collect();
                    values[i] = f(&shrunk);
                    simplex[i] = shrunk;
                }
            }
        }
    }
    let best = argmin(&values).unwrap_or(0);
    (simplex[best].clone(), values[best])
}

/// Grid seed over (θ, φ) followed by local Nelder–Mead refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSearch {
    /// Polar samples on `[0, π]`, both poles included.
    pub theta_points: usize,
    /// Azimuthal samples on `[0, 2π)`.
    pub phi_points: usize,
    /// Number of best grid points used as refinement seeds.
    pub refine_seeds: usize,
    pub simplex: NelderMead,
}

impl Default for SphereSearch {
    fn default() -> Self {
        Self {
            theta_points: 32,
            phi_points: 64,
            refine_seeds: 3,
            simplex: NelderMead::default(),
        }
    }
}

impl SphereSearch {
    pub fn with_grid(theta_points: usize, phi_points: usize) -> Self {
        Self {
            theta_points,
            phi_points,
            ..Self::default()
        }
    }

    fn grid_angles(&self, index: usize) -> (f64, f64) {
        let nt = self.theta_points.max(2);
        let np = self.phi_points.max(1);
        let (i, j) = (index / np, index % np);
        (PI * i as f64 / (nt - 1) as f64, 2.0 * PI * j as f64 / np as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereMinimum {
    pub direction: MeasurementDirection,
    pub value: f64,
}

/// Minimize `f` over unit vectors. Grid evaluations are independent; the
/// result does not depend on the order in which they run.
pub fn minimize_on_sphere<F>(f: F, search: &SphereSearch, exec: Exec) -> SphereMinimum
where
    F: Fn(&MeasurementDirection) -> f64 + Sync + Send,
{
    let total = search.theta_points.max(2) * search.phi_points.max(1);
    let grid: Vec<f64> = exec.map(total, |k| {
        let (t, p) = search.grid_angles(k);
        f(&MeasurementDirection::from_angles(t, p))
    });

    let mut order: Vec<usize> = (0..total).filter(|&k| !grid[k].is_nan()).collect();
    order.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]).then(a.cmp(&b)));
    let seeds: Vec<usize> = order.into_iter().take(search.refine_seeds.max(1)).collect();

    let refined: Vec<(Vec<f64>, f64)> = exec.map(seeds.len(), |s| {
        let (t, p) = search.grid_angles(seeds[s]);
        nelder_mead(
            |x| f(&MeasurementDirection::from_angles(x[0], x[1])),
            &[t, p],
            &search.simplex,
        )
    });

    let mut best = SphereMinimum {
        direction: MeasurementDirection::from_angles(0.0, 0.0),
        value: f64::INFINITY,
    };
    if let Some(&k) = seeds.first() {
        let (t, p) = search.grid_angles(k);
        best = SphereMinimum {
            direction: MeasurementDirection::from_angles(t, p),
            value: grid[k],
        };
    }
    for (x, v) in refined {
        if v < best.value {
            best = SphereMinimum {
                direction: MeasurementDirection::from_angles(x[0], x[1]),
                value: v,
            };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let (x, v) = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2),
            &[0.0, 0.0],
            &NelderMead {
                ftol: 1e-14,
                max_iter: 2000,
                ..Default::default()
            },
        );
        assert!(v < 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] + 0.5).abs() < 1e-5);
    }

    #[test]
    fn sphere_search_locates_off_grid_direction() {
        let target = MeasurementDirection::from_angles(1.1, 2.3);
        let min = minimize_on_sphere(
            |d| 1.0 - d.dot(&target),
            &SphereSearch::with_grid(8, 16),
            Exec::Sequential,
        );
        assert!(min.value < 1e-7, "value {}", min.value);
    }
}
