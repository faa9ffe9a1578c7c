//! Strip geometry: a width-`L` column repeated `N` times around a cycle.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;

/// One bond of the column program. Sites are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeOp {
    /// Bond between sites `i` and `i + 1` of the current column.
    Vertical(usize),
    /// Bond between site `i` of the current column and site `i` of the next.
    Horizontal(usize),
}

/// An edge of the expanded lattice.
///
/// Vertices are numbered `column * L + (site - 1)`. `winding` is the number
/// of times the edge crosses the seam between column `N - 1` and column `0`
/// when walked from `a` to `b`; it is what lets the oracle see clusters that
/// wrap around the periodic direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub winding: i32,
}

/// Lattice of width `L` and length `N`, free across the width and periodic
/// along the length. Every column runs the same program of bonds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicStrip {
    width: usize,
    length: usize,
    program: Vec<EdgeOp>,
}

impl CyclicStrip {
    /// Square lattice strip: all vertical bonds of a column, then all
    /// horizontal bonds to the next column.
    pub fn square(width: usize, length: usize) -> Result<Self> {
        if width == 0 || length == 0 {
            return Err(Error::InvalidLattice(format!(
                "square strip needs L >= 1 and N >= 1, got {width}x{length}"
            )));
        }
        let program = (1..width)
            .map(EdgeOp::Vertical)
            .chain((1..=width).map(EdgeOp::Horizontal))
            .collect();
        Ok(CyclicStrip {
            width,
            length,
            program,
        })
    }

    /// Strip with an arbitrary column program.
    pub fn with_program(width: usize, length: usize, program: Vec<EdgeOp>) -> Result<Self> {
        if width == 0 || length == 0 {
            return Err(Error::InvalidLattice("empty strip".into()));
        }
        for op in &program {
            let ok = match *op {
                EdgeOp::Vertical(i) => i >= 1 && i < width,
                EdgeOp::Horizontal(i) => i >= 1 && i <= width,
            };
            if !ok {
                return Err(Error::InvalidLattice(format!(
                    "{op:?} out of range for width {width}"
                )));
            }
        }
        Ok(CyclicStrip {
            width,
            length,
            program,
        })
    }

    /// The same strip with the column program rotated left by `k` ops. The
    /// edge set is unchanged up to a shift of the seam.
    pub fn rotated(&self, k: usize) -> Self {
        let mut program = self.program.clone();
        if !program.is_empty() {
            let k = k % program.len();
            program.rotate_left(k);
        }
        CyclicStrip {
            program,
            ..self.clone()
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn program(&self) -> &[EdgeOp] {
        &self.program
    }

    pub fn is_square(&self) -> bool {
        Some(self) == CyclicStrip::square(self.width, self.length).ok().as_ref()
    }

    pub fn vertex_count(&self) -> usize {
        self.width * self.length
    }

    pub fn edge_count(&self) -> usize {
        self.length * self.program.len()
    }

    /// Faces of the embedding on the sphere, both exterior faces included.
    pub fn face_count(&self) -> usize {
        self.edge_count() + 2 - self.vertex_count()
    }

    pub fn vertex(&self, column: usize, site: usize) -> usize {
        column * self.width + site - 1
    }

    /// All edges, column by column in program order. Parallel edges and
    /// self-loops (`N = 1`, `N = 2`) are kept as distinct edges.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.length;
        let mut out = Vec::with_capacity(self.edge_count());
        for c in 0..n {
            for op in &self.program {
                out.push(match *op {
                    EdgeOp::Vertical(i) => Edge {
                        a: self.vertex(c, i),
                        b: self.vertex(c, i + 1),
                        winding: 0,
                    },
                    EdgeOp::Horizontal(i) => Edge {
                        a: self.vertex(c, i),
                        b: self.vertex((c + 1) % n, i),
                        winding: i32::from(c + 1 == n),
                    },
                });
            }
        }
        out
    }
}

impl fmt::Display for CyclicStrip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_square() {
            write!(f, "square:{}x{}", self.width, self.length)
        } else {
            write!(f, "custom:{}x{}", self.width, self.length)
        }
    }
}

impl FromStr for CyclicStrip {
    type Err = Error;

    /// Parses `square:LxN`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLattice(format!("expected square:LxN, got {s:?}"));
        let dims = s.strip_prefix("square:").ok_or_else(bad)?;
        let (l, n) = dims.split_once('x').ok_or_else(bad)?;
        let l = l.parse().map_err(|_| bad())?;
        let n = n.parse().map_err(|_| bad())?;
        CyclicStrip::square(l, n)
    }
}

/// Square strip of width `L` whose first and last rows are pinned to a
/// common spin value. Only rows `2..L-1` carry free spins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedBoundaryLattice {
    strip: CyclicStrip,
}

impl FixedBoundaryLattice {
    pub fn new(width: usize, length: usize) -> Result<Self> {
        if width < 2 {
            return Err(Error::InvalidLattice(format!(
                "fixed-boundary lattice needs L >= 2, got {width}"
            )));
        }
        Ok(FixedBoundaryLattice {
            strip: CyclicStrip::square(width, length)?,
        })
    }

    pub fn width(&self) -> usize {
        self.strip.width
    }

    pub fn length(&self) -> usize {
        self.strip.length
    }

    /// Underlying square strip, fixed rows included.
    pub fn strip(&self) -> &CyclicStrip {
        &self.strip
    }

    pub fn is_fixed_site(&self, site: usize) -> bool {
        site == 1 || site == self.width()
    }

    pub fn fixed_site_count(&self) -> usize {
        2 * self.length()
    }

    pub fn free_site_count(&self) -> usize {
        (self.width() - 2) * self.length()
    }

    /// `(1 + v)^(2N)`: the horizontal bonds inside the two fixed rows always
    /// join equal spins.
    pub fn boundary_factor(&self) -> MultiPoly {
        (&MultiPoly::one() + &MultiPoly::v()).pow(2 * self.length() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_data() {
        let s = CyclicStrip::square(1, 2).unwrap();
        assert_eq!(
            (s.vertex_count(), s.edge_count(), s.face_count()),
            (2, 2, 2)
        );
        let s = CyclicStrip::square(3, 4).unwrap();
        assert_eq!(
            (s.vertex_count(), s.edge_count(), s.face_count()),
            (12, 20, 10)
        );
        let s = CyclicStrip::square(2, 1).unwrap();
        assert_eq!(
            (s.vertex_count(), s.edge_count(), s.face_count()),
            (2, 3, 3)
        );
        for l in 1..6 {
            for n in 1..6 {
                let s = CyclicStrip::square(l, n).unwrap();
                let euler = s.vertex_count() as i64 - s.edge_count() as i64 + s.face_count() as i64;
                assert_eq!(euler, 2);
                assert_eq!(s.edges().len(), n * (2 * l - 1));
            }
        }
    }

    #[test]
    fn rejects_empty() {
        assert!(CyclicStrip::square(0, 2).is_err());
        assert!(CyclicStrip::square(2, 0).is_err());
        assert!("square:0x2".parse::<CyclicStrip>().is_err());
        assert!("triangular:2x2".parse::<CyclicStrip>().is_err());
        assert!(CyclicStrip::with_program(2, 2, vec![EdgeOp::Vertical(2)]).is_err());
    }

    #[test]
    fn parse_and_display() {
        let s: CyclicStrip = "square:3x4".parse().unwrap();
        assert_eq!((s.width(), s.length()), (3, 4));
        assert_eq!(s.to_string(), "square:3x4");
        assert_eq!(s.rotated(2).to_string(), "custom:3x4");
    }

    #[test]
    fn seam_edges_wind() {
        let s = CyclicStrip::square(2, 3).unwrap();
        let winding: Vec<i32> = s.edges().iter().map(|e| e.winding).collect();
        assert_eq!(winding.iter().sum::<i32>(), 2);
        // N = 1 horizontal bonds are self-loops that wind once
        let s = CyclicStrip::square(2, 1).unwrap();
        let loops: Vec<_> = s.edges().into_iter().filter(|e| e.a == e.b).collect();
        assert_eq!(loops.len(), 2);
        assert!(loops.iter().all(|e| e.winding == 1));
    }

    #[test]
    fn fixed_boundary_counts() {
        assert!(FixedBoundaryLattice::new(1, 3).is_err());
        let f = FixedBoundaryLattice::new(2, 3).unwrap();
        assert_eq!(f.free_site_count(), 0);
        assert_eq!(
            FixedBoundaryLattice::new(3, 2).unwrap().free_site_count(),
            2
        );
        let f = FixedBoundaryLattice::new(3, 3).unwrap();
        assert_eq!(f.free_site_count(), 3);
        assert_eq!(f.fixed_site_count(), 6);
        assert_eq!(f.boundary_factor().degree(crate::poly::Var::V), 6);
    }
}
