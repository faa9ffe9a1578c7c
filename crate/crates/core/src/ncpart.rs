//! Connectivity states of the cluster transfer matrix.
//!
//! A [`ConnectivityState`] is a non-crossing partition of the `L` sites of a
//! time slice in which some blocks carry a mark. A marked block is one that
//! is still connected to the initial time slice (a bridge). Only blocks that
//! are not enclosed by another block can carry a mark, because a bridge has to
//! reach the initial slice without crossing anything.
//!
//! A [`TwoSliceState`] keeps the full picture: a non-crossing partition of
//! the `2L` points `1', ..., L', L, ..., 1` read around the boundary of the
//! two-slice strip. It is only used to check the block structure of the full
//! transfer matrix.
//!
//! Sites are labelled `1..=L` everywhere in the public API, matching the
//! text rendering `(12•)(3)`.

use std::fmt;
use std::str::FromStr;

use crate::combinat::binomial;
use crate::error::{Error, Result};

const MARK: u8 = 0x80;
const LABEL: u8 = 0x7f;

/// Largest supported width. Labels must fit in seven bits.
pub const MAX_WIDTH: usize = 120;

/// Non-crossing partition of `1..=L` with marked (bridge) blocks.
///
/// Internally the state *is* its canonical code: one byte per site holding
/// the block label (blocks numbered by first occurrence) with the high bit
/// set on marked blocks. The derived order is therefore the lexicographic
/// order on codes, which fixes the basis order of every transfer block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConnectivityState {
    code: Vec<u8>,
}

/// A block of a connectivity state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Sites in increasing order, 1-based.
    pub sites: Vec<usize>,
    pub marked: bool,
}

/// Result of removing a site from its block and restarting it as a fresh
/// unmarked singleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DetachOutcome {
    /// The old block still has other sites.
    StillPopulated(ConnectivityState),
    /// The old block was unmarked and is gone: a cluster was completed.
    CompletedUnmarked(ConnectivityState),
    /// The old block was a bridge and is gone: the bridge terminated.
    TerminatedMarked,
}

/// Relabel by first occurrence.
fn canonical_labels(labels: &[usize]) -> Vec<u8> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|&l| match seen.iter().position(|&s| s == l) {
            Some(k) => k as u8,
            None => {
                seen.push(l);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

/// Span `(first, last)` of each label.
fn spans(labels: &[u8]) -> Vec<(usize, usize)> {
    let nblocks = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut out = vec![(usize::MAX, 0); nblocks];
    for (i, &l) in labels.iter().enumerate() {
        let s = &mut out[l as usize];
        s.0 = s.0.min(i);
        s.1 = s.1.max(i);
    }
    out
}

/// True if no two blocks cross, i.e. there are no `a < b < c < d` with
/// `a, c` in one block and `b, d` in another.
pub(crate) fn is_noncrossing(labels: &[u8]) -> bool {
    let sp = spans(labels);
    let mut last_seen: Vec<Option<usize>> = vec![None; sp.len()];
    for (i, &l) in labels.iter().enumerate() {
        if let Some(prev) = last_seen[l as usize] {
            // every block touched strictly between prev and i must stay inside
            for &m in &labels[prev + 1..i] {
                let (lo, hi) = sp[m as usize];
                if lo < prev || hi > i {
                    return false;
                }
            }
        }
        last_seen[l as usize] = Some(i);
    }
    true
}

/// Whether each block is enclosed by the span of another block.
pub(crate) fn nested_flags(labels: &[u8]) -> Vec<bool> {
    let sp = spans(labels);
    sp.iter()
        .enumerate()
        .map(|(b, &(lo, hi))| {
            sp.iter()
                .enumerate()
                .any(|(a, &(alo, ahi))| a != b && alo < lo && hi < ahi)
        })
        .collect()
}

/// All non-crossing partitions of `n` points as first-occurrence label
/// vectors, in lexicographic order.
pub(crate) fn noncrossing_partitions(n: usize) -> Vec<Vec<u8>> {
    // Stack of blocks that may still receive points. Adding point k to block
    // b closes every block opened above b.
    fn rec(
        k: usize,
        n: usize,
        labels: &mut Vec<u8>,
        stack: &mut Vec<u8>,
        next: u8,
        out: &mut Vec<Vec<u8>>,
    ) {
        if k == n {
            out.push(labels.clone());
            return;
        }
        // existing blocks first: smaller labels sort first
        let mut options: Vec<(u8, usize)> =
            stack.iter().enumerate().map(|(pos, &b)| (b, pos)).collect();
        options.sort_unstable();
        for (b, pos) in options {
            let saved: Vec<u8> = stack.drain(pos + 1..).collect();
            labels.push(b);
            rec(k + 1, n, labels, stack, next, out);
            labels.pop();
            stack.extend(saved);
        }
        labels.push(next);
        stack.push(next);
        rec(k + 1, n, labels, stack, next + 1, out);
        stack.pop();
        labels.pop();
    }
    let mut out = Vec::new();
    rec(
        0,
        n,
        &mut Vec::with_capacity(n),
        &mut Vec::new(),
        0,
        &mut out,
    );
    out
}

fn check_site(site: usize, width: usize) -> Result<()> {
    if site == 0 || site > width {
        Err(Error::SiteOutOfRange { site, width })
    } else {
        Ok(())
    }
}

impl ConnectivityState {
    /// Build from block labels per site (any labelling) and a mark per label.
    fn from_parts(labels: &[usize], marked: impl Fn(usize) -> bool) -> Self {
        let canon = canonical_labels(labels);
        let code = canon
            .iter()
            .zip(labels)
            .map(|(&c, &l)| if marked(l) { c | MARK } else { c })
            .collect();
        ConnectivityState { code }
    }

    /// Build from explicit blocks of 1-based sites. Validates the partition,
    /// planarity and mark placement.
    pub fn from_blocks(width: usize, blocks: &[Block]) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::MalformedCode(format!(
                "width {width} exceeds {MAX_WIDTH}"
            )));
        }
        let mut labels = vec![usize::MAX; width];
        for (b, block) in blocks.iter().enumerate() {
            if block.sites.is_empty() {
                return Err(Error::MalformedCode("empty block".into()));
            }
            for &s in &block.sites {
                check_site(s, width)?;
                if labels[s - 1] != usize::MAX {
                    return Err(Error::MalformedCode(format!("site {s} appears twice")));
                }
                labels[s - 1] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::MalformedCode("not every site is covered".into()));
        }
        let state = ConnectivityState::from_parts(&labels, |l| blocks[l].marked);
        ConnectivityState::decode(&state.code)
    }

    /// All sites in separate unmarked blocks.
    pub fn singletons(width: usize) -> Self {
        let labels: Vec<usize> = (0..width).collect();
        ConnectivityState::from_parts(&labels, |_| false)
    }

    pub fn width(&self) -> usize {
        self.code.len()
    }

    fn label(&self, site: usize) -> u8 {
        self.code[site - 1] & LABEL
    }

    fn labels(&self) -> Vec<u8> {
        self.code.iter().map(|c| c & LABEL).collect()
    }

    pub fn is_marked_site(&self, site: usize) -> bool {
        self.code[site - 1] & MARK != 0
    }

    /// Blocks ordered by their smallest site.
    pub fn blocks(&self) -> Vec<Block> {
        let n = self
            .labels()
            .iter()
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(0);
        let mut blocks: Vec<Block> = (0..n)
            .map(|_| Block {
                sites: Vec::new(),
                marked: false,
            })
            .collect();
        for (i, &c) in self.code.iter().enumerate() {
            let b = &mut blocks[(c & LABEL) as usize];
            b.sites.push(i + 1);
            b.marked |= c & MARK != 0;
        }
        blocks
    }

    pub fn block_count(&self) -> usize {
        self.code
            .iter()
            .map(|&c| (c & LABEL) as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Number of marked blocks.
    pub fn mark_count(&self) -> usize {
        self.blocks().iter().filter(|b| b.marked).count()
    }

    /// Whether sites `a` and `b` lie in the same block.
    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.label(a) == self.label(b)
    }

    /// Merge the blocks of two adjacent sites. The merged block is marked if
    /// either part was.
    pub fn join(&self, a: usize, b: usize) -> Result<Self> {
        check_site(a, self.width())?;
        check_site(b, self.width())?;
        if a.abs_diff(b) != 1 {
            return Err(Error::NonAdjacentJoin { a, b });
        }
        let (la, lb) = (self.label(a), self.label(b));
        if la == lb {
            return Ok(self.clone());
        }
        let marked = self.is_marked_site(a) || self.is_marked_site(b);
        let labels: Vec<usize> = self
            .labels()
            .iter()
            .map(|&l| if l == lb { la as usize } else { l as usize })
            .collect();
        let code = &self.code;
        Ok(ConnectivityState::from_parts(&labels, |l| {
            if l == la as usize {
                marked
            } else {
                code.iter()
                    .any(|&c| (c & LABEL) as usize == l && c & MARK != 0)
            }
        }))
    }

    /// Remove `site` from its block and restart it as an unmarked singleton.
    pub fn detach(&self, site: usize) -> Result<DetachOutcome> {
        check_site(site, self.width())?;
        let old = self.label(site);
        let alone = self.labels().iter().filter(|&&l| l == old).count() == 1;
        if alone {
            return Ok(if self.is_marked_site(site) {
                DetachOutcome::TerminatedMarked
            } else {
                DetachOutcome::CompletedUnmarked(self.clone())
            });
        }
        let fresh = usize::MAX;
        let labels: Vec<usize> = self
            .labels()
            .iter()
            .enumerate()
            .map(|(i, &l)| if i + 1 == site { fresh } else { l as usize })
            .collect();
        let code = &self.code;
        let state = ConnectivityState::from_parts(&labels, |l| {
            l != fresh
                && code
                    .iter()
                    .any(|&c| (c & LABEL) as usize == l && c & MARK != 0)
        });
        Ok(DetachOutcome::StillPopulated(state))
    }

    /// Canonical byte encoding; see the type docs.
    pub fn code(&self) -> &[u8] {
        &self.code
    }

    /// Inverse of [`code`](Self::code). Rejects anything that is not the code
    /// of a valid state.
    pub fn decode(code: &[u8]) -> Result<Self> {
        if code.is_empty() {
            return Err(Error::MalformedCode("empty code".into()));
        }
        if code.len() > MAX_WIDTH {
            return Err(Error::MalformedCode(format!(
                "width {} exceeds {MAX_WIDTH}",
                code.len()
            )));
        }
        let labels: Vec<u8> = code.iter().map(|c| c & LABEL).collect();
        let mut next = 0u8;
        for &l in &labels {
            if l > next {
                return Err(Error::MalformedCode(
                    "labels not in first-occurrence order".into(),
                ));
            }
            if l == next {
                next += 1;
            }
        }
        let mut mark_of: Vec<Option<bool>> = vec![None; next as usize];
        for &c in code {
            let m = c & MARK != 0;
            match mark_of[(c & LABEL) as usize] {
                Some(prev) if prev != m => {
                    return Err(Error::MalformedCode("block is partially marked".into()))
                }
                _ => mark_of[(c & LABEL) as usize] = Some(m),
            }
        }
        if !is_noncrossing(&labels) {
            return Err(Error::MalformedCode("blocks cross".into()));
        }
        let nested = nested_flags(&labels);
        for (b, m) in mark_of.iter().enumerate() {
            if m == &Some(true) && nested[b] {
                return Err(Error::MalformedCode("a marked block is nested".into()));
            }
        }
        Ok(ConnectivityState {
            code: code.to_vec(),
        })
    }
}

/// Closed form for the number of states of width `width` with `marks`
/// marked blocks: `C(2L, L-l) - C(2L, L-l-1)`.
pub fn count_states(width: usize, marks: usize) -> u128 {
    if marks > width {
        return 0;
    }
    let (l, m) = (width as i64, marks as i64);
    binomial(2 * l, l - m) - binomial(2 * l, l - m - 1)
}

/// Every state of the given width with exactly `marks` marked blocks, in
/// canonical order. Empty when `marks > width`.
pub fn enumerate_states(width: usize, marks: usize) -> Vec<ConnectivityState> {
    if marks > width {
        return Vec::new();
    }
    let mut out = Vec::new();
    for labels in noncrossing_partitions(width) {
        let nested = nested_flags(&labels);
        let free: Vec<u8> = (0..nested.len() as u8)
            .filter(|&b| !nested[b as usize])
            .collect();
        for_each_subset(&free, marks, &mut |chosen| {
            let code = labels
                .iter()
                .map(|&l| if chosen.contains(&l) { l | MARK } else { l })
                .collect();
            out.push(ConnectivityState { code });
        });
    }
    out.sort();
    out
}

fn for_each_subset(items: &[u8], k: usize, f: &mut impl FnMut(&[u8])) {
    fn rec(items: &[u8], k: usize, start: usize, cur: &mut Vec<u8>, f: &mut impl FnMut(&[u8])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::new(), f);
}

fn write_site(f: &mut fmt::Formatter<'_>, site: usize, wide: bool, first: bool) -> fmt::Result {
    if wide && !first {
        f.write_str(",")?;
    }
    write!(f, "{site}")
}

impl fmt::Display for ConnectivityState {
    /// Blocks in order of their first site, marks shown as `•`:
    /// `(12•)(3)`. Widths of ten or more separate sites with commas.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.width() >= 10;
        for b in self.blocks() {
            f.write_str("(")?;
            for (k, &s) in b.sites.iter().enumerate() {
                write_site(f, s, wide, k == 0)?;
            }
            if b.marked {
                f.write_str("•")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Split `(..)(..)` into the contents of each group.
fn paren_groups(s: &str) -> Result<Vec<&str>> {
    let mut groups = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
        let close = inner
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
        groups.push(&inner[..close]);
        rest = inner[close + 1..].trim_start();
    }
    Ok(groups)
}

/// Site tokens of one group: digits (one per site) or comma separated
/// numbers, each optionally followed by `'`.
fn group_sites(group: &str) -> Result<Vec<(usize, bool)>> {
    let mut out = Vec::new();
    if group.contains(',') {
        for tok in group.split(',') {
            let tok = tok.trim();
            let (num, primed) = match tok.strip_suffix('\'') {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let n = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad site {tok:?}")))?;
            out.push((n, primed));
        }
    } else {
        let mut chars = group.chars().peekable();
        while let Some(c) = chars.next() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("bad site {c:?} in {group:?}")))?;
            let primed = chars.next_if_eq(&'\'').is_some();
            out.push((d as usize, primed));
        }
    }
    Ok(out)
}

impl FromStr for ConnectivityState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for g in paren_groups(s)? {
            let (body, marked) = match g.strip_suffix('•') {
                Some(b) => (b, true),
                None => (g, false),
            };
            let sites = group_sites(body)?;
            if sites.iter().any(|&(_, p)| p) {
                return Err(Error::Parse(
                    "primed sites belong to two-slice states".into(),
                ));
            }
            blocks.push(Block {
                sites: sites.into_iter().map(|(n, _)| n).collect(),
                marked,
            });
        }
        let width = blocks.iter().map(|b| b.sites.len()).sum();
        ConnectivityState::from_blocks(width, &blocks)
    }
}

/// Non-crossing partition of the boundary points `1', ..., L', L, ..., 1`.
///
/// Labels are stored per boundary position: position `k-1` is the left
/// point `k'`, position `2L-i` is the right point `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoSliceState {
    labels: Vec<u8>,
}

/// Outcome of detaching a right point in the two-slice picture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoSliceDetach {
    /// The old block still has other right points.
    StillPopulated(TwoSliceState),
    /// The old block had no other point: a cluster was completed.
    Completed(TwoSliceState),
    /// The old block keeps only left points: a bridge ended.
    BridgeEnded(TwoSliceState),
}

impl TwoSliceState {
    fn from_raw(labels: &[usize]) -> Self {
        TwoSliceState {
            labels: canonical_labels(labels),
        }
    }

    /// The initial state: every right point connected to its left copy.
    pub fn identity(width: usize) -> Self {
        let labels: Vec<usize> = (0..2 * width)
            .map(|p| if p < width { p } else { 2 * width - 1 - p })
            .collect();
        TwoSliceState::from_raw(&labels)
    }

    pub fn width(&self) -> usize {
        self.labels.len() / 2
    }

    fn right_pos(&self, site: usize) -> usize {
        2 * self.width() - site
    }

    /// Parse the rendering used by [`Display`](fmt::Display), e.g.
    /// `(1'12)(2')(35)(4)`.
    pub fn parse(width: usize, s: &str) -> Result<Self> {
        let mut labels = vec![usize::MAX; 2 * width];
        for (b, g) in paren_groups(s)?.into_iter().enumerate() {
            for (site, primed) in group_sites(g)? {
                check_site(site, width)?;
                let pos = if primed { site - 1 } else { 2 * width - site };
                if labels[pos] != usize::MAX {
                    return Err(Error::Parse(format!("point {site} appears twice")));
                }
                labels[pos] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::Parse("not every point is covered".into()));
        }
        let state = TwoSliceState::from_raw(&labels);
        if !is_noncrossing(&state.labels) {
            return Err(Error::Parse("blocks cross".into()));
        }
        Ok(state)
    }

    fn block_has_left(&self, label: u8) -> bool {
        self.labels[..self.width()].contains(&label)
    }

    fn block_has_right(&self, label: u8) -> bool {
        self.labels[self.width()..].contains(&label)
    }

    /// Number of blocks containing both left and right points.
    pub fn bridge_count(&self) -> usize {
        let n = self
            .labels
            .iter()
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(0);
        (0..n as u8)
            .filter(|&b| self.block_has_left(b) && self.block_has_right(b))
            .count()
    }

    /// Right-slice connectivity with bridges shown as marks.
    pub fn right_projection(&self) -> ConnectivityState {
        let w = self.width();
        let labels: Vec<usize> = (1..=w)
            .map(|i| self.labels[self.right_pos(i)] as usize)
            .collect();
        ConnectivityState::from_parts(&labels, |l| self.block_has_left(l as u8))
    }

    /// Left-slice connectivity with the left ends of bridges marked. Two
    /// states lie in the same diagonal sub-block exactly when their
    /// signatures agree.
    pub fn left_signature(&self) -> ConnectivityState {
        let w = self.width();
        let labels: Vec<usize> = (0..w).map(|p| self.labels[p] as usize).collect();
        ConnectivityState::from_parts(&labels, |l| self.block_has_right(l as u8))
    }

    /// Merge the blocks of adjacent right points `a` and `b`.
    pub fn join_right(&self, a: usize, b: usize) -> Result<Self> {
        check_site(a, self.width())?;
        check_site(b, self.width())?;
        if a.abs_diff(b) != 1 {
            return Err(Error::NonAdjacentJoin { a, b });
        }
        let la = self.labels[self.right_pos(a)];
        let lb = self.labels[self.right_pos(b)];
        let labels: Vec<usize> = self
            .labels
            .iter()
            .map(|&l| if l == lb { la as usize } else { l as usize })
            .collect();
        Ok(TwoSliceState::from_raw(&labels))
    }

    /// Remove right point `site` from its block and restart it alone.
    pub fn detach_right(&self, site: usize) -> Result<TwoSliceDetach> {
        check_site(site, self.width())?;
        let pos = self.right_pos(site);
        let old = self.labels[pos];
        let mut labels: Vec<usize> = self.labels.iter().map(|&l| l as usize).collect();
        labels[pos] = usize::MAX;
        let others_right = self.labels[self.width()..]
            .iter()
            .enumerate()
            .any(|(k, &l)| l == old && self.width() + k != pos);
        let next = TwoSliceState::from_raw(&labels);
        Ok(if others_right {
            TwoSliceDetach::StillPopulated(next)
        } else if self.block_has_left(old) {
            TwoSliceDetach::BridgeEnded(next)
        } else {
            TwoSliceDetach::Completed(next)
        })
    }
}

/// Every two-slice state of width `width`, in canonical order.
pub fn enumerate_two_slice(width: usize) -> Vec<TwoSliceState> {
    noncrossing_partitions(2 * width)
        .into_iter()
        .map(|labels| TwoSliceState { labels })
        .collect()
}

impl fmt::Display for TwoSliceState {
    /// Blocks by first boundary position; inside a block, left points
    /// ascending then right points ascending: `(1'12)(2')(35)(4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.width();
        let wide = w >= 10;
        let n = self
            .labels
            .iter()
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(0);
        for b in 0..n as u8 {
            f.write_str("(")?;
            let mut first = true;
            for k in 1..=w {
                if self.labels[k - 1] == b {
                    write_site(f, k, wide, first)?;
                    f.write_str("'")?;
                    first = false;
                }
            }
            for i in 1..=w {
                if self.labels[self.right_pos(i)] == b {
                    write_site(f, i, wide, first)?;
                    first = false;
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}
