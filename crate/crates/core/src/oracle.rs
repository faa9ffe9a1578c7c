//! Brute-force ground truth, independent of the transfer matrices.
//!
//! * [`FkCounts`] enumerates every edge subset of a strip and tallies the
//!   number of clusters, wrapping clusters and occupied edges.
//! * [`spin_z`] and [`zff_oracle`] sum over spin assignments at integer `Q`.
//! * [`duality_witness_check`] builds the dual configuration of every direct
//!   one and checks the per-configuration duality relation.

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{CyclicStrip, EdgeOp, FixedBoundaryLattice};
use crate::poly::{rational_pow, Monomial, MultiPoly, RationalFunction, Var};
use crate::winding::WindingUnionFind;

/// Largest edge count accepted by the subset enumeration.
pub const FK_EDGE_BUDGET: usize = 24;
/// Largest edge count accepted by the duality witness check.
pub const DUALITY_EDGE_BUDGET: usize = 20;
/// Largest number of spin assignments summed by the spin oracles.
pub const SPIN_BUDGET: u128 = 10_000_000;

const CHUNK: u64 = 1 << 12;

/// Cluster statistics of one edge subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FkConfig {
    pub clusters: usize,
    pub occupied: usize,
    /// Clusters that wrap the periodic direction.
    pub ntc: usize,
}

impl FkConfig {
    pub fn trivial(&self) -> usize {
        self.clusters - self.ntc
    }
}

/// Analyse one subset, given as a bit mask over `strip.edges()`.
pub fn fk_config(strip: &CyclicStrip, mask: u64) -> FkConfig {
    let edges = strip.edges();
    let mut uf = WindingUnionFind::new(strip.vertex_count());
    for (k, e) in edges.iter().enumerate() {
        if mask >> k & 1 == 1 {
            uf.union(e.a, e.b, e.winding);
        }
    }
    FkConfig {
        clusters: uf.components(),
        occupied: mask.count_ones() as usize,
        ntc: uf.wrapping_components(),
    }
}

/// Number of edge subsets for every `(ntc, clusters, occupied)` triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FkCounts {
    width: usize,
    vertices: usize,
    edges: usize,
    counts: Vec<u64>,
}

impl FkCounts {
    fn index(&self, j: usize, n: usize, b: usize) -> usize {
        (j * (self.vertices + 1) + n) * (self.edges + 1) + b
    }

    pub fn get(&self, ntc: usize, clusters: usize, occupied: usize) -> u64 {
        self.counts[self.index(ntc, clusters, occupied)]
    }

    /// Enumerate all `2^E` subsets. Subset ranges are processed in parallel;
    /// the tallies are integers, so the result does not depend on how the
    /// range was split.
    pub fn enumerate(strip: &CyclicStrip) -> Result<Self> {
        let e = strip.edge_count();
        if e > FK_EDGE_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "edge-subset enumeration",
                needed: 1u128 << e,
                budget: 1u128 << FK_EDGE_BUDGET,
            });
        }
        let edges = strip.edges();
        let v = strip.vertex_count();
        let shape = FkCounts {
            width: strip.width(),
            vertices: v,
            edges: e,
            counts: vec![0; (strip.width() + 1) * (v + 1) * (e + 1)],
        };
        let total = 1u64 << e;
        let chunks = total.div_ceil(CHUNK);
        let counts = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut local = vec![0u64; shape.counts.len()];
                let mut uf = WindingUnionFind::new(v);
                for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    uf.reset();
                    for (k, edge) in edges.iter().enumerate() {
                        if mask >> k & 1 == 1 {
                            uf.union(edge.a, edge.b, edge.winding);
                        }
                    }
                    let idx = shape.index(
                        uf.wrapping_components(),
                        uf.components(),
                        mask.count_ones() as usize,
                    );
                    local[idx] += 1;
                }
                local
            })
            .reduce(
                || vec![0u64; shape.counts.len()],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        Ok(FkCounts { counts, ..shape })
    }

    fn triples(&self) -> impl Iterator<Item = (usize, usize, usize, u64)> + '_ {
        (0..=self.width).flat_map(move |j| {
            (0..=self.vertices).flat_map(move |n| {
                (0..=self.edges).filter_map(move |b| {
                    let c = self.get(j, n, b);
                    (c > 0).then_some((j, n, b, c))
                })
            })
        })
    }

    /// `Z_{2j+1}` for every `j`.
    pub fn spectrum(&self) -> NtcSpectrum {
        let mut parts = vec![MultiPoly::zero(); self.width + 1];
        for (j, n, b, c) in self.triples() {
            parts[j].add_term(
                Monomial::new(n as u32, b as u32, 0),
                BigRational::from_integer(c.into()),
            );
        }
        NtcSpectrum { parts }
    }

    /// Direct-lattice form of the dual partition function with exterior
    /// weight `Q0`: one wrapping cluster (if any) weighs `Q0` instead of `Q`.
    pub fn dual_weighted(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (j, n, b, c) in self.triples() {
            let m = if j == 0 {
                Monomial::new(n as u32, b as u32, 0)
            } else {
                Monomial::new(n as u32 - 1, b as u32, 1)
            };
            out.add_term(m, BigRational::from_integer(c.into()));
        }
        out
    }
}

/// Partition function split by the number of wrapping clusters: entry `j`
/// is `Z_{2j+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NtcSpectrum {
    parts: Vec<MultiPoly>,
}

impl NtcSpectrum {
    pub fn from_parts(parts: Vec<MultiPoly>) -> Self {
        NtcSpectrum { parts }
    }

    /// Largest possible `j`, i.e. the strip width.
    pub fn max_ntc(&self) -> usize {
        self.parts.len() - 1
    }

    /// `Z_{2j+1}`; zero beyond the width.
    pub fn get(&self, j: usize) -> MultiPoly {
        self.parts.get(j).cloned().unwrap_or_default()
    }

    pub fn parts(&self) -> &[MultiPoly] {
        &self.parts
    }

    pub fn z(&self) -> MultiPoly {
        self.parts.iter().cloned().sum()
    }

    /// `Z_{2j+1} / Q^j`. Every configuration with `j` wrapping clusters has
    /// at least `j` clusters, so failure signals a bug upstream.
    pub fn reduced(&self, j: usize) -> Result<MultiPoly> {
        self.get(j)
            .div_monomial(Monomial::of(Var::Q, j as u32))
            .ok_or(Error::NotDivisible { j })
    }
}

pub fn fk_enumerate(strip: &CyclicStrip) -> Result<NtcSpectrum> {
    Ok(FkCounts::enumerate(strip)?.spectrum())
}

pub fn fk_z(strip: &CyclicStrip) -> Result<MultiPoly> {
    Ok(fk_enumerate(strip)?.z())
}

/// `Q^{2-F} v^E / Q0 * Z~_{Q0}(Q/v)`, assembled from direct configurations.
pub fn dual_oracle(strip: &CyclicStrip) -> Result<MultiPoly> {
    Ok(FkCounts::enumerate(strip)?.dual_weighted())
}

/// Histogram of the number of satisfied bonds over all spin assignments.
/// `fixed[v]` pins vertex `v` to spin 0.
fn spin_histogram(strip: &CyclicStrip, q: u32, fixed: &[bool]) -> Result<Vec<u64>> {
    let free: Vec<usize> = (0..strip.vertex_count()).filter(|&v| !fixed[v]).collect();
    let needed = (q as u128)
        .checked_pow(free.len() as u32)
        .unwrap_or(u128::MAX);
    if needed > SPIN_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "spin enumeration",
            needed,
            budget: SPIN_BUDGET,
        });
    }
    let edges = strip.edges();
    let total = needed as u64;
    let chunks = total.div_ceil(CHUNK);
    let hist = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = vec![0u64; edges.len() + 1];
            let mut spins = vec![0u32; strip.vertex_count()];
            let start = c * CHUNK;
            let mut rest = start;
            for &v in &free {
                spins[v] = (rest % q as u64) as u32;
                rest /= q as u64;
            }
            for _ in start..((c + 1) * CHUNK).min(total) {
                let k = edges.iter().filter(|e| spins[e.a] == spins[e.b]).count();
                local[k] += 1;
                for &v in &free {
                    spins[v] += 1;
                    if spins[v] < q {
                        break;
                    }
                    spins[v] = 0;
                }
            }
            local
        })
        .reduce(
            || vec![0u64; edges.len() + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(hist)
}

fn sum_histogram(hist: &[u64], v: &BigRational) -> BigRational {
    let base = v + BigRational::from_integer(1.into());
    hist.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| BigRational::from_integer(c.into()) * rational_pow(&base, k as u32))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Spin-representation partition function `sum_sigma prod_edges (1 + v delta)`
/// at integer `Q`.
pub fn spin_z(strip: &CyclicStrip, q: u32, v: &BigRational) -> Result<BigRational> {
    if q == 0 {
        return Err(Error::Precondition("spin oracle needs Q >= 1".into()));
    }
    let hist = spin_histogram(strip, q, &vec![false; strip.vertex_count()])?;
    Ok(sum_histogram(&hist, v))
}

/// Spin sum on the width-`L` square strip with rows 1 and `L` pinned to a
/// common value, all bonds included.
pub fn zff_oracle(width: usize, length: usize, q: u32, v: &BigRational) -> Result<BigRational> {
    if width < 3 {
        return Err(Error::Precondition(format!(
            "fixed-boundary oracle needs L >= 3, got {width}"
        )));
    }
    if q == 0 {
        return Err(Error::Precondition("spin oracle needs Q >= 1".into()));
    }
    let lattice = FixedBoundaryLattice::new(width, length)?;
    let strip = lattice.strip();
    let fixed: Vec<bool> = (0..strip.vertex_count())
        .map(|v| lattice.is_fixed_site(v % width + 1))
        .collect();
    let hist = spin_histogram(strip, q, &fixed)?;
    Ok(sum_histogram(&hist, v))
}

/// Direct and dual statistics of one configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualityWitness {
    pub mask: u64,
    pub direct_ntc: usize,
    pub direct_trivial: usize,
    pub direct_edges: usize,
    pub dual_ntc: usize,
    pub dual_trivial: usize,
    pub dual_edges: usize,
}

/// Result of [`duality_witness_check`].
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub configurations: u64,
    /// Configurations violating the dual NTC count or the weight relation.
    pub failures: Vec<DualityWitness>,
    /// `Q^{1-F} v^E Z~(Q/v) = Z(v)` summed over all configurations.
    pub aggregate_holds: bool,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.aggregate_holds
    }
}

/// Dual lattice of a square strip: one vertex per interior face plus the
/// two exterior faces. Dual edge `k` crosses direct edge `k`.
struct DualLattice {
    vertices: usize,
    bottom: usize,
    top: usize,
    edges: Vec<(usize, usize, i32)>,
}

fn dual_lattice(strip: &CyclicStrip) -> DualLattice {
    let (l, n) = (strip.width(), strip.length());
    let interior = (l - 1) * n;
    let bottom = interior;
    let top = interior + 1;
    // row r lies between sites r and r+1; rows 0 and L are the exteriors
    let face = |r: usize, c: usize| -> usize {
        if r == 0 {
            bottom
        } else if r == l {
            top
        } else {
            (r - 1) * n + c
        }
    };
    let mut edges = Vec::with_capacity(strip.edge_count());
    for c in 0..n {
        for op in strip.program() {
            edges.push(match *op {
                EdgeOp::Vertical(i) => {
                    let prev = (c + n - 1) % n;
                    (face(i, prev), face(i, c), i32::from(c == 0))
                }
                EdgeOp::Horizontal(i) => (face(i - 1, c), face(i, c), 0),
            });
        }
    }
    DualLattice {
        vertices: interior + 2,
        bottom,
        top,
        edges,
    }
}

/// For every direct configuration on a square strip, build the complementary
/// dual configuration and check that it has one more non-trivial cluster than
/// the direct one, and that the weights match under `v~ = Q/v`. Also checks
/// the summed duality relation against [`fk_z`].
pub fn duality_witness_check(strip: &CyclicStrip) -> Result<DualityReport> {
    if !strip.is_square() {
        return Err(Error::Precondition(
            "duality check needs a square strip".into(),
        ));
    }
    let e = strip.edge_count();
    if e > DUALITY_EDGE_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "duality witness check",
            needed: 1u128 << e,
            budget: 1u128 << DUALITY_EDGE_BUDGET,
        });
    }
    let f = strip.face_count() as i64;
    let direct_edges = strip.edges();
    let dual = dual_lattice(strip);
    let mut failures = Vec::new();
    let mut dual_z = MultiPoly::zero();
    let mut uf = WindingUnionFind::new(strip.vertex_count());
    let mut duf = WindingUnionFind::new(dual.vertices);
    for mask in 0..1u64 << e {
        uf.reset();
        duf.reset();
        for (k, (d, &(a, b, w))) in direct_edges.iter().zip(&dual.edges).enumerate() {
            if mask >> k & 1 == 1 {
                uf.union(d.a, d.b, d.winding);
            } else {
                duf.union(a, b, w);
            }
        }
        let j = uf.wrapping_components();
        let t = uf.components() - j;
        let b = mask.count_ones() as usize;
        let bottom_root = duf.find(dual.bottom).0;
        let top_root = duf.find(dual.top).0;
        let mut dual_ntc = 0;
        for x in 0..dual.vertices {
            if duf.find(x).0 == x && (duf.wraps(x) || x == bottom_root || x == top_root) {
                dual_ntc += 1;
            }
        }
        let dual_trivial = duf.components() - dual_ntc;
        let bt = e - b;
        let witness = DualityWitness {
            mask,
            direct_ntc: j,
            direct_trivial: t,
            direct_edges: b,
            dual_ntc,
            dual_trivial,
            dual_edges: bt,
        };
        // Q^{1-F} v^E Q^{j+1} Q^{t~} (Q/v)^{b~}  =  Q^j Q^t v^b
        let lhs = RationalFunction::laurent_monomial(
            1 - f + (j + 1 + dual_trivial + bt) as i64,
            e as i64 - bt as i64,
        );
        let rhs = RationalFunction::laurent_monomial((j + t) as i64, b as i64);
        if dual_ntc != j + 1 || lhs != rhs {
            failures.push(witness);
        }
        dual_z.add_term(
            Monomial::new(duf.components() as u32, bt as u32, 0),
            BigRational::from_integer(1.into()),
        );
    }
    let dual_temp = RationalFunction::new(MultiPoly::q(), MultiPoly::v())?;
    let scaled = &RationalFunction::laurent_monomial(1 - f, e as i64)
        * &dual_z.substitute(Var::V, &dual_temp);
    let aggregate_holds = scaled == RationalFunction::from_poly(fk_z(strip)?);
    Ok(DualityReport {
        configurations: 1u64 << e,
        failures,
        aggregate_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> MultiPoly {
        MultiPoly::q()
    }
    fn v() -> MultiPoly {
        MultiPoly::v()
    }
    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn two_cycle_by_hand() {
        let s = CyclicStrip::square(1, 2).unwrap();
        let spectrum = fk_enumerate(&s).unwrap();
        assert_eq!(
            spectrum.get(0),
            &q().pow(2) + &(MultiPoly::int(2) * q() * v())
        );
        assert_eq!(spectrum.get(1), q() * v().pow(2));
        assert_eq!(
            dual_oracle(&s).unwrap(),
            &(&q().pow(2) + &(MultiPoly::int(2) * q() * v())) + &(MultiPoly::q0() * v().pow(2))
        );
    }

    #[test]
    fn cycle_closed_form() {
        for n in 1..=6u32 {
            let s = CyclicStrip::square(1, n as usize).unwrap();
            let expected = &(&q() + &v()).pow(n) + &(&(&q() - &MultiPoly::one()) * &v().pow(n));
            assert_eq!(fk_z(&s).unwrap(), expected);
        }
    }

    #[test]
    fn extreme_terms() {
        let s = CyclicStrip::square(2, 3).unwrap();
        let z = fk_z(&s).unwrap();
        assert_eq!(z.coeff(&Monomial::new(6, 0, 0)), rat(1, 1));
        assert_eq!(z.coeff(&Monomial::new(1, 9, 0)), rat(1, 1));
        let spectrum = fk_enumerate(&s).unwrap();
        assert_eq!(
            spectrum.get(2),
            MultiPoly::term(Monomial::new(2, 6, 0), rat(1, 1))
        );
        for j in 0..=2 {
            assert!(spectrum.reduced(j).is_ok());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = CyclicStrip::square(3, 5).unwrap();
        assert!(matches!(
            fk_enumerate(&s),
            Err(Error::BudgetExceeded { .. })
        ));
        let s = CyclicStrip::square(4, 4).unwrap();
        assert!(matches!(
            spin_z(&s, 3, &rat(1, 1)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn spin_edge_cases() {
        let s = CyclicStrip::square(2, 3).unwrap();
        assert_eq!(
            spin_z(&s, 1, &rat(1, 2)).unwrap(),
            rational_pow(&rat(3, 2), 9)
        );
        assert_eq!(spin_z(&s, 3, &rat(0, 1)).unwrap(), rat(729, 1));
        let a = crate::poly::Assignment::new()
            .with_int(Var::Q, 2)
            .with_int(Var::V, 1);
        let s = CyclicStrip::square(2, 2).unwrap();
        assert_eq!(
            spin_z(&s, 2, &rat(1, 1)).unwrap(),
            fk_z(&s).unwrap().eval(&a).unwrap()
        );
    }

    #[test]
    fn zff_edge_cases() {
        assert!(zff_oracle(2, 3, 2, &rat(1, 1)).is_err());
        assert_eq!(zff_oracle(3, 3, 3, &rat(0, 1)).unwrap(), rat(27, 1));
        let e = CyclicStrip::square(3, 2).unwrap().edge_count() as u32;
        assert_eq!(
            zff_oracle(3, 2, 1, &rat(2, 1)).unwrap(),
            rational_pow(&rat(3, 1), e)
        );
    }

    #[test]
    fn duality_on_small_strips() {
        let s = CyclicStrip::square(2, 2).unwrap();
        let r = duality_witness_check(&s).unwrap();
        assert_eq!(r.configurations, 64);
        assert!(r.passed(), "{:?}", r.failures.first());
    }

    #[test]
    fn empty_and_full_configurations() {
        let s = CyclicStrip::square(2, 2).unwrap();
        let dual = dual_lattice(&s);
        // empty direct configuration: every dual edge present, one dual cluster
        let mut duf = WindingUnionFind::new(dual.vertices);
        for &(a, b, w) in &dual.edges {
            duf.union(a, b, w);
        }
        assert_eq!(duf.components(), 1);
        // full direct configuration: no dual edges at all
        let full = fk_config(&s, (1 << s.edge_count()) - 1);
        assert_eq!((full.clusters, full.ntc, full.occupied), (1, 1, 6));
    }
}
