//! Cluster transfer matrices on marked connectivity states.
//!
//! The block `T_l` acts on states with exactly `l` marks. A column of the
//! strip is the ordered product of one operator per bond:
//!
//! * a vertical bond `{i, i+1}` is either absent (weight 1) or present
//!   (weight `v`, joining the blocks of `i` and `i+1`);
//! * a horizontal bond at site `i` is either present (weight `v`, site `i`
//!   carries its block into the next column) or absent, in which case site
//!   `i` restarts as a fresh singleton. If that leaves its old block empty,
//!   an unmarked block is a finished cluster (weight `Q`) while a marked
//!   block is a bridge that ended.
//!
//! Transitions that lower the number of marks (two bridges merging, a bridge
//! ending) leave the block `T_l` and are dropped. The trace of `T_l^N` is the
//! character `K_{1,2l+1}`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{CyclicStrip, EdgeOp};
use crate::ncpart::{
    count_states, enumerate_states, enumerate_two_slice, ConnectivityState, DetachOutcome,
    TwoSliceDetach, TwoSliceState,
};
use crate::poly::MultiPoly;

/// Dense square matrix of polynomials. Entry `(i, j)` is the weight of the
/// transition from basis state `i` to basis state `j`, so products compose
/// left to right in the order operators are applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn zeros(dim: usize) -> Self {
        PolyMatrix {
            dim,
            entries: vec![MultiPoly::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = PolyMatrix::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = MultiPoly::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, from: usize, to: usize) -> &MultiPoly {
        &self.entries[from * self.dim + to]
    }

    fn add_to(&mut self, from: usize, to: usize, w: &MultiPoly) {
        self.entries[from * self.dim + to] += w;
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let entries: Vec<MultiPoly> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                (0..n).map(move |k| {
                    let mut acc = MultiPoly::zero();
                    for j in 0..n {
                        let a = self.get(i, j);
                        if a.is_zero() {
                            continue;
                        }
                        let b = rhs.get(j, k);
                        if !b.is_zero() {
                            acc += &(a * b);
                        }
                    }
                    acc
                })
            })
            .collect();
        PolyMatrix { dim: n, entries }
    }

    pub fn pow(&self, n: u32) -> PolyMatrix {
        let mut result = PolyMatrix::identity(self.dim);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn trace(&self) -> MultiPoly {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }
}

/// The sub-block `T_l` (or one bond operator restricted to it).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferBlock {
    width: usize,
    marks: usize,
    basis: Vec<ConnectivityState>,
    matrix: PolyMatrix,
}

impl TransferBlock {
    fn empty(width: usize, marks: usize) -> Self {
        let basis = enumerate_states(width, marks);
        let matrix = PolyMatrix::zeros(basis.len());
        TransferBlock {
            width,
            marks,
            basis,
            matrix,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn marks(&self) -> usize {
        self.marks
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ConnectivityState] {
        &self.basis
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn index_of(&self, s: &ConnectivityState) -> Option<usize> {
        self.basis.binary_search(s).ok()
    }

    pub fn entry(&self, from: &ConnectivityState, to: &ConnectivityState) -> Option<&MultiPoly> {
        Some(self.matrix.get(self.index_of(from)?, self.index_of(to)?))
    }

    fn add(&mut self, from: usize, to: &ConnectivityState, w: &MultiPoly) -> Result<()> {
        let j = self
            .index_of(to)
            .ok_or_else(|| Error::BasisClosure(to.to_string()))?;
        self.matrix.add_to(from, j, w);
        Ok(())
    }

    /// Operator product, `self` applied first.
    pub fn then(&self, next: &TransferBlock) -> TransferBlock {
        assert_eq!((self.width, self.marks), (next.width, next.marks));
        TransferBlock {
            matrix: self.matrix.mul(&next.matrix),
            ..self.clone()
        }
    }
}

fn check_op(width: usize, op: EdgeOp) -> Result<()> {
    let ok = match op {
        EdgeOp::Vertical(i) => i >= 1 && i < width,
        EdgeOp::Horizontal(i) => i >= 1 && i <= width,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidLattice(format!(
            "{op:?} out of range for width {width}"
        )))
    }
}

/// One bond operator restricted to states with `marks` marks.
pub fn edge_operator(width: usize, marks: usize, op: EdgeOp) -> Result<TransferBlock> {
    check_op(width, op)?;
    let mut block = TransferBlock::empty(width, marks);
    let one = MultiPoly::one();
    let v = MultiPoly::v();
    let q = MultiPoly::q();
    let basis = block.basis.clone();
    for (i, s) in basis.iter().enumerate() {
        match op {
            EdgeOp::Vertical(site) => {
                block.add(i, s, &one)?;
                let joined = s.join(site, site + 1)?;
                if joined.mark_count() == marks {
                    block.add(i, &joined, &v)?;
                }
            }
            EdgeOp::Horizontal(site) => {
                block.add(i, s, &v)?;
                match s.detach(site)? {
                    DetachOutcome::StillPopulated(t) => block.add(i, &t, &one)?,
                    DetachOutcome::CompletedUnmarked(t) => block.add(i, &t, &q)?,
                    DetachOutcome::TerminatedMarked => {}
                }
            }
        }
    }
    Ok(block)
}

/// Transfer block of one full column: the product of the bond operators in
/// program order.
pub fn column_transfer(strip: &CyclicStrip, marks: usize) -> Result<TransferBlock> {
    let mut acc = TransferBlock::empty(strip.width(), marks);
    acc.matrix = PolyMatrix::identity(acc.dim());
    for &op in strip.program() {
        acc = acc.then(&edge_operator(strip.width(), marks, op)?);
    }
    Ok(acc)
}

/// `K_{1,2l+1} = Tr (T_l)^N`, zero for `l > L`.
pub fn character_k(strip: &CyclicStrip, marks: usize) -> Result<MultiPoly> {
    if marks > strip.width() {
        return Ok(MultiPoly::zero());
    }
    let t = column_transfer(strip, marks)?;
    Ok(t.matrix.pow(strip.length() as u32).trace())
}

/// All characters `K_{1,1}, K_{1,3}, ..., K_{1,2L+1}`, indexed by `l`.
/// Blocks are built concurrently.
pub fn all_characters(strip: &CyclicStrip) -> Result<Vec<MultiPoly>> {
    (0..=strip.width())
        .into_par_iter()
        .map(|l| character_k(strip, l))
        .collect()
}

/// Outcome of checking the block structure of the full two-slice transfer
/// matrix against the reduced blocks `T_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructureReport {
    pub width: usize,
    /// Size of the two-slice basis.
    pub basis_size: usize,
    /// No transition raises the number of bridges.
    pub lower_triangular: bool,
    /// Observed number of diagonal sub-blocks `N_l` for each `l`.
    pub sub_block_counts: Vec<usize>,
    /// For each `l`: the diagonal block splits into identical sub-blocks,
    /// each equal to `T_l`.
    pub sub_blocks_equal: Vec<bool>,
    /// First problem found, if any.
    pub failure: Option<String>,
}

impl BlockStructureReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
            && self.lower_triangular
            && self.sub_blocks_equal.iter().all(|&b| b)
            && self
                .sub_block_counts
                .iter()
                .enumerate()
                .all(|(l, &n)| n as u128 == count_states(self.width, l))
    }
}

type SparseRow = BTreeMap<usize, MultiPoly>;

/// The full column transfer on two-slice states, as sparse rows over the
/// basis returned by [`enumerate_two_slice`].
pub fn two_slice_transfer(strip: &CyclicStrip) -> Result<(Vec<TwoSliceState>, Vec<SparseRow>)> {
    let basis = enumerate_two_slice(strip.width());
    let v = MultiPoly::v();
    let q = MultiPoly::q();
    let rows = basis
        .par_iter()
        .map(|s| -> Result<SparseRow> {
            let mut comb: BTreeMap<TwoSliceState, MultiPoly> = BTreeMap::new();
            comb.insert(s.clone(), MultiPoly::one());
            for &op in strip.program() {
                let mut next: BTreeMap<TwoSliceState, MultiPoly> = BTreeMap::new();
                let mut add = |t: TwoSliceState, w: MultiPoly| {
                    *next.entry(t).or_default() += &w;
                };
                for (t, w) in &comb {
                    match op {
                        EdgeOp::Vertical(i) => {
                            add(t.clone(), w.clone());
                            add(t.join_right(i, i + 1)?, w * &v);
                        }
                        EdgeOp::Horizontal(i) => {
                            add(t.clone(), w * &v);
                            match t.detach_right(i)? {
                                TwoSliceDetach::Completed(u) => add(u, w * &q),
                                TwoSliceDetach::StillPopulated(u)
                                | TwoSliceDetach::BridgeEnded(u) => add(u, w.clone()),
                            }
                        }
                    }
                }
                next.retain(|_, w| !w.is_zero());
                comb = next;
            }
            comb.into_iter()
                .map(|(t, w)| {
                    let j = basis
                        .binary_search(&t)
                        .map_err(|_| Error::BasisClosure(t.to_string()))?;
                    Ok((j, w))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((basis, rows))
}

/// Build the full two-slice column transfer and check that it is block
/// lower-triangular in the bridge count, and that each diagonal block is a
/// direct sum of `n(L,l)` copies of `T_l`.
pub fn verify_block_structure(strip: &CyclicStrip) -> Result<BlockStructureReport> {
    let width = strip.width();
    if width > 4 {
        return Err(Error::Precondition(format!(
            "block structure check supports L <= 4, got {width}"
        )));
    }
    let (basis, rows) = two_slice_transfer(strip)?;
    let bridges: Vec<usize> = basis.iter().map(|s| s.bridge_count()).collect();
    let signatures: Vec<ConnectivityState> = basis.iter().map(|s| s.left_signature()).collect();
    let mut failure: Option<String> = None;
    let mut note = |msg: String| {
        failure.get_or_insert(msg);
    };

    let mut lower_triangular = true;
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            if bridges[j] > bridges[i] {
                lower_triangular = false;
                note(format!(
                    "{} -> {} raises the bridge count",
                    basis[i], basis[j]
                ));
            }
            if bridges[j] == bridges[i] && signatures[j] != signatures[i] {
                note(format!("{} -> {} leaves its sub-block", basis[i], basis[j]));
            }
        }
    }

    let mut sub_block_counts = Vec::with_capacity(width + 1);
    let mut sub_blocks_equal = Vec::with_capacity(width + 1);
    for l in 0..=width {
        let reduced = column_transfer(strip, l)?;
        let mut groups: BTreeMap<&ConnectivityState, Vec<usize>> = BTreeMap::new();
        for (i, sig) in signatures.iter().enumerate() {
            if bridges[i] == l {
                groups.entry(sig).or_default().push(i);
            }
        }
        sub_block_counts.push(groups.len());
        let mut equal = true;
        for (sig, members) in &groups {
            let proj: Vec<usize> = members
                .iter()
                .map(|&i| {
                    reduced
                        .index_of(&basis[i].right_projection())
                        .unwrap_or(usize::MAX)
                })
                .collect();
            let mut sorted = proj.clone();
            sorted.sort_unstable();
            if sorted != (0..reduced.dim()).collect::<Vec<_>>() {
                equal = false;
                note(format!(
                    "sub-block {sig} does not project onto the basis of T_{l}"
                ));
                continue;
            }
            for (a, &i) in members.iter().enumerate() {
                for (b, &j) in members.iter().enumerate() {
                    let full = rows[i].get(&j).cloned().unwrap_or_default();
                    if &full != reduced.matrix.get(proj[a], proj[b]) {
                        equal = false;
                        note(format!(
                            "sub-block {sig}: entry {} -> {} is {full}, T_{l} has {}",
                            basis[i],
                            basis[j],
                            reduced.matrix.get(proj[a], proj[b])
                        ));
                    }
                }
            }
        }
        sub_blocks_equal.push(equal);
    }

    Ok(BlockStructureReport {
        width,
        basis_size: basis.len(),
        lower_triangular,
        sub_block_counts,
        sub_blocks_equal,
        failure,
    })
}
