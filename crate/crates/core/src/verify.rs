//! Batch identity checks over a grid of square strips.
//!
//! Each check compares a character-side expression with an oracle-side
//! expression and records the polynomial difference when they disagree.
//! Checks whose oracle would exceed its enumeration budget are reported as
//! skipped, never as passed.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::characters::{
    amp_b, amp_c, big_f, chi, decompose_z, dual_decomposition, k_from_z2j, z2j_from_k, z_ff_from,
    BerahaParam, CharacterSet,
};
use crate::error::{Error, Result};
use crate::lattice::CyclicStrip;
use crate::oracle::{duality_witness_check, zff_oracle, FkCounts};
use crate::poly::{Assignment, MultiPoly, RationalFunction, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Cyclic,
    Dual,
    Minimal,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "cyclic" => Ok(Suite::Cyclic),
            "dual" => Ok(Suite::Dual),
            "minimal" => Ok(Suite::Minimal),
            _ => Err(Error::Parse(format!("unknown suite {s:?}"))),
        }
    }
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Passed,
    /// Printable difference `lhs - rhs`.
    Failed(String),
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: String,
    pub strip: String,
    pub status: Status,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, Status::Failed(_))
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Passed => write!(f, "PASS {} {}", self.strip, self.id),
            Status::Failed(d) => write!(f, "FAIL {} {}: difference {}", self.strip, self.id, d),
            Status::Skipped(r) => write!(f, "SKIP {} {}: {}", self.strip, self.id, r),
        }
    }
}

struct Recorder {
    strip: String,
    out: Vec<CheckOutcome>,
}

impl Recorder {
    fn poly(&mut self, id: impl Into<String>, lhs: &MultiPoly, rhs: &MultiPoly) {
        let status = if lhs == rhs {
            Status::Passed
        } else {
            Status::Failed((lhs - rhs).to_string())
        };
        self.push(id, status);
    }

    fn rational(&mut self, id: impl Into<String>, lhs: &RationalFunction, rhs: &RationalFunction) {
        let status = if lhs == rhs {
            Status::Passed
        } else {
            Status::Failed((lhs - rhs).to_string())
        };
        self.push(id, status);
    }

    fn number(&mut self, id: impl Into<String>, lhs: &BigRational, rhs: &BigRational) {
        let status = if lhs == rhs {
            Status::Passed
        } else {
            Status::Failed((lhs - rhs).to_string())
        };
        self.push(id, status);
    }

    fn flag(&mut self, id: impl Into<String>, ok: bool, why: impl FnOnce() -> String) {
        let status = if ok {
            Status::Passed
        } else {
            Status::Failed(why())
        };
        self.push(id, status);
    }

    fn error(&mut self, id: impl Into<String>, e: Error) {
        let status = match e {
            Error::BudgetExceeded { .. } => Status::Skipped(e.to_string()),
            _ => Status::Failed(e.to_string()),
        };
        self.push(id, status);
    }

    fn push(&mut self, id: impl Into<String>, status: Status) {
        self.out.push(CheckOutcome {
            id: id.into(),
            strip: self.strip.clone(),
            status,
        });
    }
}

/// Run a suite over square strips `1 <= L <= lmax`, `1 <= N <= nmax`.
/// The result order is fixed by `(L, N)` and does not depend on the
/// number of worker threads.
pub fn run_suite(suite: Suite, lmax: usize, nmax: usize) -> Result<Vec<CheckOutcome>> {
    let grid: Vec<(usize, usize)> = (1..=lmax)
        .flat_map(|l| (1..=nmax).map(move |n| (l, n)))
        .collect();
    let per_strip: Vec<Vec<CheckOutcome>> = grid
        .par_iter()
        .map(|&(l, n)| check_strip(suite, &CyclicStrip::square(l, n)?))
        .collect::<Result<_>>()?;
    Ok(per_strip.into_iter().flatten().collect())
}

/// All checks of `suite` on one strip.
pub fn check_strip(suite: Suite, strip: &CyclicStrip) -> Result<Vec<CheckOutcome>> {
    let chars = CharacterSet::compute(strip)?;
    let mut rec = Recorder {
        strip: strip.to_string(),
        out: Vec::new(),
    };
    let counts = match FkCounts::enumerate(strip) {
        Ok(c) => Some(c),
        Err(e) => {
            rec.error("fk-oracle", e);
            None
        }
    };
    if suite.includes(Suite::Cyclic) {
        cyclic_checks(&mut rec, &chars, counts.as_ref());
    }
    if suite.includes(Suite::Minimal) {
        if let Some(c) = &counts {
            minimal_checks(&mut rec, &chars, c);
        }
    }
    if suite.includes(Suite::Dual) {
        dual_checks(&mut rec, &chars, counts.as_ref());
    }
    Ok(rec.out)
}

fn cyclic_checks(rec: &mut Recorder, chars: &CharacterSet, counts: Option<&FkCounts>) {
    let strip = chars.strip();
    let (width, length) = (strip.width(), strip.length());
    let v = MultiPoly::v();
    rec.poly(
        "K_1,1(1,N) closed form",
        &chars.k(0),
        &if width == 1 {
            (&MultiPoly::q() + &v).pow(length as u32)
        } else {
            chars.k(0)
        },
    );
    rec.poly(
        format!("K_1,{} top character", 2 * width + 1),
        &chars.k(width),
        &v.pow((width * length) as u32),
    );
    let Some(counts) = counts else { return };
    let spectrum = counts.spectrum();
    rec.poly("Z", &decompose_z(chars).term_sum(), &spectrum.z());
    for j in 0..=width {
        rec.poly(
            format!("Z_{}", 2 * j + 1),
            &z2j_from_k(chars, j),
            &spectrum.get(j),
        );
    }
    let alternating: MultiPoly = (0..=width)
        .map(|l| {
            let k = chars.k(l);
            if l % 2 == 0 {
                k
            } else {
                -k
            }
        })
        .sum();
    rec.poly("Z_1 alternating sum", &alternating, &spectrum.get(0));
    for l in 0..=width {
        match k_from_z2j(&spectrum, l) {
            Ok(k) => rec.poly(format!("K_1,{} from Z_2j+1", 2 * l + 1), &k, &chars.k(l)),
            Err(e) => rec.error(format!("K_1,{} from Z_2j+1", 2 * l + 1), e),
        }
        match (big_f(&spectrum, l), big_f(&spectrum, l + 1)) {
            (Ok(a), Ok(b)) => rec.poly(
                format!("F_{} - F_{}", 2 * l + 1, 2 * l + 3),
                &(&a - &b),
                &chars.k(l),
            ),
            (Err(e), _) | (_, Err(e)) => rec.error(format!("F_{}", 2 * l + 1), e),
        }
    }
}

fn minimal_checks(rec: &mut Recorder, chars: &CharacterSet, counts: &FkCounts) {
    let spectrum = counts.spectrum();
    let z = spectrum.z();
    for q in [2u32, 3] {
        let p = BerahaParam::for_q(q).expect("Q = 2, 3 are Beraha numbers");
        let qv = p.q_value();
        let mut sum = MultiPoly::zero();
        let mut ok = true;
        for l in 0..p.kac_len() {
            match chi(chars, l, p) {
                Ok(x) => sum += &(&amp_c(l).specialize(Var::Q, &qv) * &x),
                Err(e) => {
                    rec.error(format!("Z = sum c chi at Q={q}"), e);
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            rec.poly(
                format!("Z = sum c chi at Q={q}"),
                &sum,
                &z.specialize(Var::Q, &qv),
            );
        }
    }
    let p4 = BerahaParam::new(4).expect("p = 4 is supported");
    let two = p4.q_value();
    let z1: Result<MultiPoly> = (0..p4.kac_len())
        .map(|l| {
            let x = chi(chars, l, p4)?;
            Ok(if l % 2 == 0 { x } else { -x })
        })
        .sum();
    match z1 {
        Ok(z1) => rec.poly(
            "Z_1 = sum (-1)^l chi at Q=2",
            &z1,
            &spectrum.get(0).specialize(Var::Q, &two),
        ),
        Err(e) => rec.error("Z_1 = sum (-1)^l chi at Q=2", e),
    }
}

fn dual_checks(rec: &mut Recorder, chars: &CharacterSet, counts: Option<&FkCounts>) {
    let strip = chars.strip();
    rec.poly("b^(0) = 1", &amp_b(0), &MultiPoly::one());
    if let Some(counts) = counts {
        let decomposition = dual_decomposition(chars).term_sum();
        rec.poly(
            "dual decomposition",
            &decomposition,
            &counts.dual_weighted(),
        );
        let at_q = decomposition.substitute(Var::Q0, &MultiPoly::q().into());
        rec.rational("dual at Q0 = Q", &at_q, &counts.spectrum().z().into());
        rec.poly(
            "dual at Q0 = 0",
            &decomposition.specialize(Var::Q0, &BigRational::zero()),
            &counts.spectrum().get(0),
        );
    }
    match duality_witness_check(strip) {
        Ok(report) => rec.flag("duality witness", report.passed(), || {
            format!(
                "{} of {} configurations violate the duality map (aggregate holds: {})",
                report.failures.len(),
                report.configurations,
                report.aggregate_holds
            )
        }),
        Err(e) => rec.error("duality witness", e),
    }
    let width = strip.width() + 1;
    if width >= 3 {
        let zff = z_ff_from(chars);
        let half = BigRational::new(1.into(), 2.into());
        let values = [
            BigRational::one(),
            BigRational::from_integer(2.into()),
            half,
        ];
        for q in [2u32, 3] {
            for v in &values {
                let id = format!("Z_ff at Q={q}, v={v}");
                let assignment = Assignment::new()
                    .with_int(Var::Q, q as i64)
                    .with(Var::V, v.clone());
                match (
                    zff.value.eval(&assignment),
                    zff_oracle(width, strip.length(), q, v),
                ) {
                    (Ok(lhs), Ok(rhs)) => rec.number(id, &lhs, &rhs),
                    (Err(e), _) | (_, Err(e)) => rec.error(id, e),
                }
            }
        }
    }
}

/// First failing check, if any.
pub fn first_failure(outcomes: &[CheckOutcome]) -> Option<&CheckOutcome> {
    outcomes.iter().find(|o| o.failed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert_eq!("minimal".parse::<Suite>().unwrap(), Suite::Minimal);
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn small_grid_is_green() {
        let out = run_suite(Suite::All, 2, 2).unwrap();
        assert!(!out.is_empty());
        for o in &out {
            assert!(!o.failed(), "{o}");
        }
    }

    #[test]
    fn failure_is_rendered_as_difference() {
        let mut rec = Recorder {
            strip: "square:1x1".into(),
            out: Vec::new(),
        };
        rec.poly("x", &MultiPoly::q(), &MultiPoly::v());
        let line = rec.out[0].to_string();
        assert_eq!(line, "FAIL square:1x1 x: difference Q - v");
        assert!(first_failure(&rec.out).is_some());
    }
}
