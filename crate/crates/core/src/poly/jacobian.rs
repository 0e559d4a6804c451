use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::polynomial::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobianRank {
    pub rank: usize,
    /// Variables carrying a pivot of the row reduction.
    pub pivots: Vec<usize>,
    /// The remaining variables, on which the linear system is solved.
    pub free: Vec<usize>,
}

fn linear_matrix(gens: &[Poly], columns: &[usize]) -> Vec<Vec<BigRational>> {
    gens.iter()
        .map(|g| {
            let lin = g.linear_part();
            columns.iter().map(|&c| lin[c].clone()).collect()
        })
        .collect()
}

/// Row reduces in the given column order and returns the pivot columns
/// (as positions in `columns`).
fn pivot_columns(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(r) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, r);
        let pivot_row = rows[next_row].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != next_row && !row[col].is_zero() {
                let factor = &row[col] / &pivot_row[col];
                for (entry, above) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *entry -= above * &factor;
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of the linear parts at the origin. Pivots are taken preferably
/// outside `prefer_free`, so that those variables end up free when possible.
pub fn jacobian_rank_at_origin(gens: &[Poly], vars: &[usize], prefer_free: &[usize]) -> JacobianRank {
    let mut columns: Vec<usize> = vars.iter().copied().filter(|v| !prefer_free.contains(v)).collect();
    columns.extend(vars.iter().copied().filter(|v| prefer_free.contains(v)));
    let positions = pivot_columns(linear_matrix(gens, &columns), columns.len());
    let mut pivots: Vec<usize> = positions.iter().map(|&p| columns[p]).collect();
    pivots.sort_unstable();
    let free = vars.iter().copied().filter(|v| !pivots.contains(v)).collect();
    JacobianRank { rank: pivots.len(), pivots, free }
}

/// Whether the linear parts restricted to `columns` form an invertible
/// system of full rank.
pub fn invertible_on(gens: &[Poly], columns: &[usize]) -> bool {
    let all: Vec<usize> = (0..gens.first().map_or(0, Poly::nvars)).collect();
    let full = pivot_columns(linear_matrix(gens, &all), all.len()).len();
    let sub = pivot_columns(linear_matrix(gens, columns), columns.len()).len();
    sub == columns.len() && sub == full
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, VarTable};

    #[test]
    fn rank_and_free_choice() {
        let vars = VarTable::new("t", &["x", "y", "z"]).unwrap();
        let gens: Vec<Poly> = ["x - y + z^2", "2*x - 2*y"].iter().map(|s| parse_poly(s, &vars).unwrap()).collect();
        let j = jacobian_rank_at_origin(&gens, &[0, 1, 2], &[0]);
        assert_eq!(j.rank, 1);
        assert_eq!(j.pivots, vec![1]);
        assert_eq!(j.free, vec![0, 2]);
        assert!(invertible_on(&gens, &[0]));
        assert!(!invertible_on(&gens, &[2]));
    }

    #[test]
    fn no_linear_part() {
        let vars = VarTable::new("t", &["x", "y"]).unwrap();
        let gens: Vec<Poly> = ["x^2", "x*y"].iter().map(|s| parse_poly(s, &vars).unwrap()).collect();
        assert_eq!(jacobian_rank_at_origin(&gens, &[0, 1], &[]).rank, 0);
    }
}
