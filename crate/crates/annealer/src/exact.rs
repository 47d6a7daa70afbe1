use qdecomp_core::{Qubo, Solution};

use crate::{AnnealerError, Result};

/// Largest problem `exact_solve` will enumerate.
pub const EXACT_MAX_VARS: usize = 22;

/// Global minimum by Gray-code enumeration.
///
/// Energies are tracked incrementally; every assignment within a small
/// tolerance of the running best is kept and re-evaluated from scratch at the
/// end, so rounding drift cannot pick the wrong state. Among exact ties the
/// assignment with the smallest integer code `sum_i bits[i] 2^i` wins, so
/// `[1, 0]` is preferred over `[0, 1]`.
pub fn exact_solve(qubo: &Qubo) -> Result<Solution> {
    let n = qubo.num_vars();
    if n > EXACT_MAX_VARS {
        return Err(AnnealerError::CapacityExceeded {
            requested: n,
            capacity: EXACT_MAX_VARS,
        });
    }
    let scale = 1.0
        + qubo.offset().abs()
        + qubo.linear_slice().iter().map(|a| a.abs()).sum::<f64>()
        + qubo.couplings().iter().map(|c| c.value.abs()).sum::<f64>();
    let tol = 1e-9 * scale;

    let mut bits = vec![false; n];
    let mut field: Vec<f64> = qubo.linear_slice().to_vec();
    let mut energy = qubo.offset();
    let mut code: u64 = 0;
    let mut best = energy;
    let mut candidates: Vec<u64> = vec![0];

    for step in 1u64..(1u64 << n) {
        let i = step.trailing_zeros() as usize;
        let up = !bits[i];
        energy += if up { field[i] } else { -field[i] };
        bits[i] = up;
        code ^= 1 << i;
        let sign = if up { 1.0 } else { -1.0 };
        for &(j, b) in qubo.neighbors(i) {
            field[j] += sign * b;
        }
        if energy < best - tol {
            best = energy;
            candidates.clear();
            candidates.push(code);
        } else if energy <= best + tol {
            if energy < best {
                best = energy;
            }
            candidates.push(code);
        }
    }

    let mut winner: Option<(f64, u64, Vec<bool>)> = None;
    for c in candidates {
        let b: Vec<bool> = (0..n).map(|k| c >> k & 1 == 1).collect();
        let e = qubo.energy_unchecked(&b);
        let better = match &winner {
            None => true,
            Some((we, wc, _)) => e < *we || (e == *we && c < *wc),
        };
        if better {
            winner = Some((e, c, b));
        }
    }
    let (energy, _, bits) = winner.expect("at least one assignment");
    Ok(Solution { bits, energy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdecomp_core::QuboBuilder;

    #[test]
    fn single_variable() {
        let mut b = QuboBuilder::new(1);
        b.add_linear(0, -2.0);
        let s = exact_solve(&b.build()).unwrap();
        assert_eq!(s.bits, vec![true]);
        assert_eq!(s.energy, -2.0);
    }

    #[test]
    fn symmetric_pair_tie_break() {
        let mut b = QuboBuilder::new(2);
        b.add_linear(0, -0.1).add_linear(1, -0.1).add_quadratic(0, 1, 1.0);
        let s = exact_solve(&b.build()).unwrap();
        assert_eq!(s.bits, vec![true, false]);
        assert_eq!(s.energy, -0.1);
    }

    #[test]
    fn empty_and_zero() {
        assert_eq!(exact_solve(&Qubo::zero(0)).unwrap().energy, 0.0);
        let s = exact_solve(&Qubo::zero(5)).unwrap();
        assert_eq!(s.bits, vec![false; 5]);
    }

    #[test]
    fn too_large() {
        assert!(matches!(
            exact_solve(&Qubo::zero(23)),
            Err(AnnealerError::CapacityExceeded { requested: 23, capacity: 22 })
        ));
    }
}
