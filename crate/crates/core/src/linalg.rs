//! Gaussian elimination over a [`Scalar`] field.

use crate::scalar::Scalar;

/// Row-reduce in place and return the rank.
pub fn row_reduce<S: Scalar>(rows: &mut [Vec<S>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        // Largest pivot keeps the float backend stable; any nonzero works exactly.
        let pivot = (rank..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .max_by(|&a, &b| {
                rows[a][col]
                    .to_f64()
                    .abs()
                    .partial_cmp(&rows[b][col].to_f64().abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(pivot) = pivot else { continue };
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].clone() / p.clone();
        }
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for c in col..ncols {
                let v = rows[r][c].clone() - f.clone() * rows[rank][c].clone();
                rows[r][c] = v;
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut rows = rows.to_vec();
    row_reduce(&mut rows)
}

/// Dimension of the solution space of `rows · x = 0`.
pub fn nullity<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> usize {
    ncols - rank(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 0, 0], &[0, 0, 1], &[1, 0, 1]])), 2);
        assert_eq!(rank::<Rational>(&[]), 0);
        assert_eq!(nullity(&m(&[&[1, 1, 1]]), 3), 2);
    }
}
