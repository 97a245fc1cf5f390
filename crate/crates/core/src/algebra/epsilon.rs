//! The sign table threading the para/complex differences through every
//! formula. Axes are 0-based: index 0, 1, 2 stands for s = 1, 2, 3, so
//! axes 0 and 1 are paracomplex and axis 2 is complex.

use crate::scalar::{int, Rat};

pub const EPS: [i64; 3] = [1, 1, -1];

/// The three cyclic orderings `(i, j, k)` of the axes.
pub const CYCLIC: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

pub fn eps(s: usize) -> i64 {
    EPS[s]
}

pub fn eps_rat(s: usize) -> Rat {
    int(EPS[s])
}

/// The cyclic triple starting at `i`.
pub fn cyclic_from(i: usize) -> (usize, usize, usize) {
    CYCLIC[i]
}

/// Checks `ε_i ε_j = -ε_k` for every cyclic triple.
pub fn table_is_consistent() -> bool {
    CYCLIC.iter().all(|&(i, j, k)| EPS[i] * EPS[j] == -EPS[k])
}
