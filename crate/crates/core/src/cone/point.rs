//! Spectrum vectors and the layouts that produce them.

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::ConeError;
use crate::symmat::{SymMat, MAX_DIM};

/// How a matrix is turned into a vector of eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layout {
    /// Ascending eigenvalues of the whole matrix.
    #[default]
    Full,
    /// Ascending eigenvalues of the leading `k × k` block followed by those of
    /// the trailing `l × l` block.
    Block { k: usize, l: usize },
}

impl Layout {
    pub fn check(&self, n: usize) -> Result<(), ConeError> {
        if n == 0 || n > MAX_DIM {
            return Err(ConeError::UnsupportedDimension(n));
        }
        if let Layout::Block { k, l } = *self {
            if k == 0 || l == 0 || k + l != n {
                return Err(ConeError::InvalidParameter(format!(
                    "block split ({k}, {l}) does not partition dimension {n}"
                )));
            }
        }
        Ok(())
    }

    /// Index ranges of the sorted blocks.
    pub fn blocks(&self, n: usize) -> Vec<(usize, usize)> {
        match *self {
            Layout::Full => vec![(0, n)],
            Layout::Block { k, .. } => vec![(0, k), (k, n)],
        }
    }

    /// Maps sorted index `i` to its mirror within the same block.
    pub(crate) fn mirror_index(&self, n: usize, i: usize) -> usize {
        for (lo, hi) in self.blocks(n) {
            if i >= lo && i < hi {
                return lo + hi - 1 - i;
            }
        }
        unreachable!("index {i} outside dimension {n}")
    }

    /// The spectrum of `a` under this layout.
    pub fn spectrum(&self, a: &SymMat) -> Pt {
        match *self {
            Layout::Full => Pt::from_slice(a.eigenvalues()),
            Layout::Block { k, .. } => {
                let (x, y) = a.blocks(k);
                let mut p = Pt::zeros(a.n());
                p[..k].copy_from_slice(x.eigenvalues());
                p[k..].copy_from_slice(y.eigenvalues());
                p
            }
        }
    }

    /// A matrix whose spectrum under this layout is `p` (sorted within blocks).
    pub fn realize(&self, p: &Pt) -> SymMat {
        let mut q = *p;
        self.sort(&mut q);
        SymMat::diag(&q)
    }

    /// Sorts ascending within each block.
    pub fn sort(&self, p: &mut Pt) {
        let n = p.len();
        for (lo, hi) in self.blocks(n) {
            p[lo..hi].sort_by(f64::total_cmp);
        }
    }

    /// `sort(−p)` for a block-sorted `p`: negate and reverse each block.
    pub fn reflect(&self, p: &Pt) -> Pt {
        let n = p.len();
        let mut q = Pt::zeros(n);
        for i in 0..n {
            q[i] = -p[self.mirror_index(n, i)];
        }
        q
    }
}

/// A point of `ℝᵐ`, `m ≤ 4`, stored inline.
#[derive(Clone, Copy, PartialEq)]
pub struct Pt {
    v: [f64; MAX_DIM],
    m: usize,
}

impl Pt {
    pub fn zeros(m: usize) -> Pt {
        assert!(m <= MAX_DIM);
        Pt {
            v: [0.0; MAX_DIM],
            m,
        }
    }

    pub fn from_slice(s: &[f64]) -> Pt {
        let mut p = Pt::zeros(s.len());
        p.v[..s.len()].copy_from_slice(s);
        p
    }

    pub fn splat(m: usize, t: f64) -> Pt {
        let mut p = Pt::zeros(m);
        p.iter_mut().for_each(|x| *x = t);
        p
    }

    pub fn shifted(&self, t: f64) -> Pt {
        let mut p = *self;
        p.iter_mut().for_each(|x| *x += t);
        p
    }

    pub fn sum(&self) -> f64 {
        self.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl Deref for Pt {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.v[..self.m]
    }
}

impl DerefMut for Pt {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.v[..self.m]
    }
}

impl std::fmt::Debug for Pt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}
