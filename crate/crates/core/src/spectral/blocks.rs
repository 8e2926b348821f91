use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::SymMatrix;

/// The two 2×2 blocks of the standing-wave Hessian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// Coordinates `(Re φ₁, Im φ₂)`, coupling `−c`.
    Real,
    /// Coordinates `(Im φ₁, Re φ₂)`, coupling `+c`.
    Imag,
}

/// `[[L + c², g], [g, 1]]` on `2N` unknowns, with `g = ∓c` for the real/imaginary block.
pub fn block_operator(scalar: &SymMatrix, c: f64, kind: BlockKind) -> SymMatrix {
    let n = scalar.dim();
    let g = match kind {
        BlockKind::Real => -c,
        BlockKind::Imag => c,
    };
    let mut m = SymMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = scalar[(i, j)];
        }
        m[(i, i)] += c * c;
        m[(i, n + i)] = g;
        m[(n + i, i)] = g;
        m[(n + i, n + i)] = 1.0;
    }
    m
}

/// Orthonormal basis `(e_j − e_{N−j})/√2`, `j = 1..N/2−1`, of odd grid functions.
pub fn odd_basis(n: usize) -> Vec<Vec<f64>> {
    (1..n / 2)
        .map(|j| {
            let mut v = vec![0.0; n];
            v[j] = FRAC_1_SQRT_2;
            v[n - j] = -FRAC_1_SQRT_2;
            v
        })
        .collect()
}

/// Restriction of an operator on `blocks` stacked length-`n` components to
/// functions that are odd in every component.
pub fn odd_projection(m: &SymMatrix, blocks: usize) -> SymMatrix {
    let n = m.dim() / blocks;
    let single = odd_basis(n);
    let mut columns = Vec::with_capacity(blocks * single.len());
    for b in 0..blocks {
        for v in &single {
            let mut col = vec![0.0; blocks * n];
            col[b * n..(b + 1) * n].copy_from_slice(v);
            columns.push(col);
        }
    }
    m.congruence(&columns)
}
