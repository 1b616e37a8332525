//! Smith normal form of integer relation matrices.
//!
//! A matrix with `r` rows and `c` columns is read as `r` relations on `c`
//! generators; its cokernel is `Z^c / rowspace`. Only the column transform is
//! tracked, which is all that is needed to map a vector of `Z^c` to its class.

use super::abelian::{FiniteAbelianGroup, GroupElement};
use super::matrix::IntegerMatrix;
use super::IntScalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm<T> {
    /// Nonzero diagonal entries, positive, each dividing the next.
    diagonal: Vec<T>,
    /// Unimodular V with U·M·V = D.
    col_transform: IntegerMatrix<T>,
    generators: usize,
}

impl<T: IntScalar> SmithForm<T> {
    pub fn compute(m: &IntegerMatrix<T>) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let mut a = m.clone();
        let mut v = IntegerMatrix::identity(cols);
        let mut t = 0;

        'outer: while t < rows.min(cols) {
            loop {
                let Some((pi, pj)) = min_abs_entry(&a, t) else {
                    break 'outer;
                };
                a.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                if a[(t, t)].is_negative() {
                    a.negate_row(t);
                }
                let pivot = a[(t, t)].clone();

                let mut dirty = false;
                for i in t + 1..rows {
                    if !a[(i, t)].is_zero() {
                        let q = a[(i, t)].div_floor(&pivot);
                        a.add_row_multiple(i, t, &-q);
                        dirty |= !a[(i, t)].is_zero();
                    }
                }
                for j in t + 1..cols {
                    if !a[(t, j)].is_zero() {
                        let q = a[(t, j)].div_floor(&pivot);
                        a.add_col_multiple(j, t, &-q.clone());
                        v.add_col_multiple(j, t, &-q);
                        dirty |= !a[(t, j)].is_zero();
                    }
                }
                if dirty {
                    continue;
                }
                // pivot must divide the whole remaining block
                let bad_row = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
                match bad_row {
                    Some(i) => a.add_row_multiple(t, i, &T::one()),
                    None => break,
                }
            }
            t += 1;
        }

        let diagonal = (0..t).map(|i| a[(i, i)].clone()).collect();
        Self {
            diagonal,
            col_transform: v,
            generators: cols,
        }
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diagonal
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn free_rank(&self) -> usize {
        self.generators - self.rank()
    }

    pub fn col_transform(&self) -> &IntegerMatrix<T> {
        &self.col_transform
    }

    pub fn torsion(&self) -> FiniteAbelianGroup<T> {
        let factors: Vec<T> = self
            .diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        FiniteAbelianGroup::new(factors).expect("Smith diagonal forms a divisibility chain")
    }

    /// Class of `x ∈ Z^c` in the torsion part of the cokernel, plus its free
    /// coordinates.
    pub fn classify(&self, x: &[T]) -> (GroupElement<T>, Vec<T>) {
        let y = self.col_transform.left_apply(x);
        let torsion: Vec<T> = self
            .diagonal
            .iter()
            .zip(&y)
            .filter(|(d, _)| !d.is_one())
            .map(|(_, c)| c.clone())
            .collect();
        let free = y[self.rank()..].to_vec();
        (self.torsion().element(&torsion), free)
    }
}

fn min_abs_entry<T: IntScalar>(a: &IntegerMatrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| x < *b) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Torsion invariant factors and free rank of the cokernel of `m`.
pub fn smith_normal_form<T: IntScalar>(m: &IntegerMatrix<T>) -> (FiniteAbelianGroup<T>, usize) {
    let s = SmithForm::compute(m);
    (s.torsion(), s.free_rank())
}
