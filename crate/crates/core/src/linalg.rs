//! Small dense kernels shared by the engines.

/// Permanent of a 3x3 matrix, written as the six products
/// `m00 m11 m22 + m00 m12 m21 + m01 m10 m22 + m01 m12 m20 + m02 m10 m21 + m02 m11 m20`.
#[inline(always)]
pub fn permanent3(m: &[[f64; 3]; 3]) -> f64 {
    let s1 = m[0][0] * m[1][1] * m[2][2];
    let s2 = m[0][0] * m[1][2] * m[2][1];
    let s3 = m[0][1] * m[1][0] * m[2][2];
    let s4 = m[0][1] * m[1][2] * m[2][0];
    let s5 = m[0][2] * m[1][0] * m[2][1];
    let s6 = m[0][2] * m[1][1] * m[2][0];
    s1 + s2 + s3 + s4 + s5 + s6
}

/// Column tile width for [`accumulate_at_b`].
const TILE: usize = 64;

/// `C += A^T B` where `A` is `k x m`, `B` is `k x n` and `C` is `m x n`, all
/// row-major.
///
/// Each `C[i][j]` receives its `k` contributions in ascending `l` order no
/// matter how the loops are tiled, so the result does not depend on how the
/// caller splits `k` into blocks.
pub fn accumulate_at_b(c: &mut [f64], a: &[f64], b: &[f64], k: usize, m: usize, n: usize) {
    assert_eq!(a.len(), k * m, "A has wrong shape");
    assert_eq!(b.len(), k * n, "B has wrong shape");
    assert_eq!(c.len(), m * n, "C has wrong shape");
    for j0 in (0..n).step_by(TILE) {
        let j1 = (j0 + TILE).min(n);
        for l in 0..k {
            let a_row = &a[l * m..(l + 1) * m];
            let b_tile = &b[l * n + j0..l * n + j1];
            for (i, &a_li) in a_row.iter().enumerate() {
                let c_tile = &mut c[i * n + j0..i * n + j1];
                for (cij, &blj) in c_tile.iter_mut().zip(b_tile) {
                    *cij += a_li * blj;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const PERMUTATIONS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

    fn permanent_by_permutations(m: &[[f64; 3]; 3]) -> f64 {
        PERMUTATIONS.iter().map(|p| m[0][p[0]] * m[1][p[1]] * m[2][p[2]]).sum()
    }

    #[test]
    fn six_terms_equal_the_permanent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let mut m = [[0.0; 3]; 3];
            for row in &mut m {
                for v in row.iter_mut() {
                    *v = rng.gen_range(-2.0..2.0);
                }
            }
            let a = permanent3(&m);
            let b = permanent_by_permutations(&m);
            assert!((a - b).abs() <= 1e-14 * (1.0 + b.abs()), "{a} vs {b}");
        }
        assert_eq!(permanent3(&[[1.0; 3]; 3]), 6.0);
    }

    #[test]
    fn permanent_column_swap_with_equal_rows() {
        let row = [0.3, -1.7, 2.2];
        let m = [row, row, row];
        let swapped = [[row[1], row[0], row[2]]; 3];
        assert_eq!(permanent3(&m), permanent3(&swapped));
    }

    #[test]
    fn at_b_matches_direct_sum_and_is_block_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (k, m, n) = (37, 5, 131);
        let a: Vec<f64> = (0..k * m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..k * n).map(|_| rng.gen_range(-1.0..1.0)).collect();

        let mut whole = vec![0.0; m * n];
        accumulate_at_b(&mut whole, &a, &b, k, m, n);

        for i in 0..m {
            for j in 0..n {
                let direct: f64 = (0..k).map(|l| a[l * m + i] * b[l * n + j]).sum();
                assert!((whole[i * n + j] - direct).abs() < 1e-13);
            }
        }

        for block in [1, 4, 16, 64] {
            let mut blocked = vec![0.0; m * n];
            for start in (0..k).step_by(block) {
                let len = block.min(k - start);
                accumulate_at_b(
                    &mut blocked,
                    &a[start * m..(start + len) * m],
                    &b[start * n..(start + len) * n],
                    len,
                    m,
                    n,
                );
            }
            assert_eq!(blocked, whole, "block {block}");
        }
    }
}
