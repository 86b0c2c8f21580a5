use crate::error::{Result, SimError};

/// Sylvester-construction Walsh–Hadamard matrix of the given order.
///
/// Entry `(i, j)` is `(-1)^popcount(i & j)`, which is exactly what the
/// recursion `H_2n = [[H_n, H_n], [H_n, -H_n]]` produces.
pub fn walsh_hadamard_matrix(order: usize) -> Result<Vec<Vec<i8>>> {
    if order == 0 || !order.is_power_of_two() {
        return Err(SimError::invalid("order", format!("{order} is not a power of two")));
    }
    Ok((0..order)
        .map(|i| (0..order).map(|j| walsh_entry(i, j)).collect())
        .collect())
}

#[inline]
pub(crate) fn walsh_entry(row: usize, col: usize) -> i8 {
    if (row & col).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(walsh_hadamard_matrix(1).unwrap(), vec![vec![1]]);
        assert_eq!(walsh_hadamard_matrix(2).unwrap(), vec![vec![1, 1], vec![1, -1]]);
    }

    #[test]
    fn matches_sylvester_recursion() {
        let h4 = walsh_hadamard_matrix(4).unwrap();
        let h8 = walsh_hadamard_matrix(8).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(h8[i][j], h4[i][j]);
                assert_eq!(h8[i][j + 4], h4[i][j]);
                assert_eq!(h8[i + 4][j], h4[i][j]);
                assert_eq!(h8[i + 4][j + 4], -h4[i][j]);
            }
        }
    }

    #[test]
    fn rows_pairwise_orthogonal() {
        for order in [4usize, 16, 64] {
            let h = walsh_hadamard_matrix(order).unwrap();
            for a in 0..order {
                for b in 0..order {
                    let dot: i64 = (0..order).map(|j| (h[a][j] as i64) * (h[b][j] as i64)).sum();
                    assert_eq!(dot, if a == b { order as i64 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert!(walsh_hadamard_matrix(0).is_err());
        assert!(walsh_hadamard_matrix(3).is_err());
        assert!(walsh_hadamard_matrix(12).is_err());
    }
}
