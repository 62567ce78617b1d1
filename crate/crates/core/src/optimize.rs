//! Derivative-free minimization.

/// Result of a local minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder–Mead simplex search with the standard coefficients
/// (reflection 1, expansion 2, contraction ½, shrink ½).
///
/// The initial simplex is `x0` plus one vertex displaced by `step[i]` along each axis.
/// Iteration stops once the spread of objective values over the simplex drops below
/// `tolerance`, or after `max_iterations`.
pub fn nelder_mead<const N: usize, F>(
    mut f: F,
    x0: [f64; N],
    step: [f64; N],
    tolerance: f64,
    max_iterations: usize,
) -> Minimum<N>
where
    F: FnMut(&[f64; N]) -> f64,
{
    let mut evaluations = 0;
    let mut eval = |x: &[f64; N]| {
        evaluations += 1;
        f(x)
    };

    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((x0, eval(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += step[i];
        let fx = eval(&x);
        simplex.push((x, fx));
    }

    let mut converged = false;
    for _ in 0..max_iterations {
        simplex.sort_by(|p, q| p.1.total_cmp(&q.1));
        let best = simplex[0].1;
        let worst = simplex[N].1;
        if (worst - best).abs() <= tolerance {
            converged = true;
            break;
        }

        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for i in 0..N {
                centroid[i] += x[i] / N as f64;
            }
        }
        let along = |t: f64| -> [f64; N] {
            std::array::from_fn(|i| centroid[i] + t * (simplex[N].0[i] - centroid[i]))
        };

        let reflected = along(-1.0);
        let f_reflected = eval(&reflected);
        if f_reflected < best {
            let expanded = along(-2.0);
            let f_expanded = eval(&expanded);
            simplex[N] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < simplex[N - 1].1 {
            simplex[N] = (reflected, f_reflected);
            continue;
        }

        let (contracted, f_contracted) = if f_reflected < worst {
            let x = along(-0.5);
            let fx = eval(&x);
            (x, fx)
        } else {
            let x = along(0.5);
            let fx = eval(&x);
            (x, fx)
        };
        if f_contracted < worst.min(f_reflected) {
            simplex[N] = (contracted, f_contracted);
            continue;
        }

        let anchor = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            let x: [f64; N] = std::array::from_fn(|i| anchor[i] + 0.5 * (vertex.0[i] - anchor[i]));
            *vertex = (x, eval(&x));
        }
    }

    simplex.sort_by(|p, q| p.1.total_cmp(&q.1));
    let (x, value) = simplex[0];
    Minimum {
        x,
        value,
        evaluations,
        converged,
    }
}
