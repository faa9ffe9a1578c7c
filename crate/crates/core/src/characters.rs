//! Amplitudes and the decompositions built on the characters `K_{1,2l+1}`.
//!
//! Everything here is a finite linear combination of characters with
//! polynomial amplitudes:
//!
//! | quantity            | amplitude of `K_{1,2l+1}`                  |
//! |---------------------|--------------------------------------------|
//! | `Z`                 | `c^(l) = sum_j (-1)^(l-j) C(l+j, l-j) Q^j` |
//! | `Z_{2j+1}`          | `c_j^(l) = (-1)^(l-j) C(l+j, l-j) Q^j`     |
//! | dual with `Q0`      | `b^(l)`, i.e. `c^(l)` with `Q^j -> Q0 Q^(j-1)` for `j >= 1` |
//!
//! The inverse direction (characters from the oracle's `Z_{2j+1}`) is in
//! [`k_from_z2j`] and [`big_f`].

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::combinat::binomial;
use crate::error::{Error, Result};
use crate::lattice::CyclicStrip;
use crate::ncpart::count_states;
use crate::oracle::NtcSpectrum;
use crate::poly::{Monomial, MultiPoly, RationalFunction, Var};
use crate::transfer::all_characters;

fn signed_binomial(l: usize, j: usize) -> BigRational {
    let c = BigRational::from_integer(binomial((l + j) as i64, l as i64 - j as i64).into());
    if (l - j).is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// `c_j^(l) = (-1)^(l-j) C(l+j, l-j) Q^j`; zero when `j > l`.
pub fn amp_cj(j: usize, l: usize) -> MultiPoly {
    if j > l {
        return MultiPoly::zero();
    }
    MultiPoly::term(Monomial::of(Var::Q, j as u32), signed_binomial(l, j))
}

/// `c^(l) = (2l+1)_q`, a degree-`l` polynomial in `Q`.
pub fn amp_c(l: usize) -> MultiPoly {
    (0..=l).map(|j| amp_cj(j, l)).sum()
}

/// `b^(l) = (-1)^l + sum_{j>=1} (-1)^(l-j) C(l+j, l-j) Q0 Q^(j-1)`.
pub fn amp_b(l: usize) -> MultiPoly {
    let mut out = MultiPoly::int(if l.is_multiple_of(2) { 1 } else { -1 });
    for j in 1..=l {
        out.add_term(Monomial::new(j as u32 - 1, 0, 1), signed_binomial(l, j));
    }
    out
}

/// Integer `p` with rational `Q = 4 cos^2(pi/p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BerahaParam {
    p: u32,
}

impl BerahaParam {
    pub fn new(p: u32) -> Result<Self> {
        match p {
            2 | 3 | 4 | 6 => Ok(BerahaParam { p }),
            _ => Err(Error::UnsupportedBeraha(p)),
        }
    }

    /// The parameter matching an integer `Q` in `0..=3`.
    pub fn for_q(q: u32) -> Result<Self> {
        match q {
            0 => Ok(BerahaParam { p: 2 }),
            1 => Ok(BerahaParam { p: 3 }),
            2 => Ok(BerahaParam { p: 4 }),
            3 => Ok(BerahaParam { p: 6 }),
            _ => Err(Error::Precondition(format!(
                "Q = {q} is not a Beraha number"
            ))),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q_int(&self) -> u32 {
        match self.p {
            2 => 0,
            3 => 1,
            4 => 2,
            _ => 3,
        }
    }

    pub fn q_value(&self) -> BigRational {
        BigRational::from_integer(self.q_int().into())
    }

    /// Number of minimal characters in the reduced sums, `floor((p-2)/2) + 1`.
    pub fn kac_len(&self) -> usize {
        (self.p as usize - 2) / 2 + 1
    }
}

/// The characters `K_{1,2l+1}`, `l = 0..=L`, of one strip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSet {
    strip: CyclicStrip,
    k: Vec<MultiPoly>,
}

impl CharacterSet {
    pub fn compute(strip: &CyclicStrip) -> Result<Self> {
        Ok(CharacterSet {
            strip: strip.clone(),
            k: all_characters(strip)?,
        })
    }

    pub fn strip(&self) -> &CyclicStrip {
        &self.strip
    }

    pub fn width(&self) -> usize {
        self.strip.width()
    }

    /// `K_{1,2l+1}`, zero for `l > L`.
    pub fn k(&self, l: usize) -> MultiPoly {
        self.k.get(l).cloned().unwrap_or_default()
    }

    pub fn all(&self) -> &[MultiPoly] {
        &self.k
    }
}

/// What a [`DecompositionResult`] decomposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Z,
    Z2j(usize),
    BigF(usize),
    Dual,
    Zff,
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::Z => write!(f, "Z"),
            Target::Z2j(j) => write!(f, "Z_{}", 2 * j + 1),
            Target::BigF(l) => write!(f, "F_{}", 2 * l + 1),
            Target::Dual => write!(f, "dual"),
            Target::Zff => write!(f, "Z_ff"),
        }
    }
}

/// `amplitude * K_{1,2l+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub l: usize,
    pub amplitude: MultiPoly,
    pub character: MultiPoly,
}

/// A quantity written as `prefactor * sum_l amplitude_l * K_{1,2l+1}`.
///
/// When `dual_temperature` is set, the characters are evaluated at
/// `v -> Q/v` before summing.
#[derive(Clone, Debug)]
pub struct DecompositionResult {
    pub target: Target,
    pub terms: Vec<Term>,
    pub prefactor: RationalFunction,
    pub dual_temperature: bool,
    pub value: RationalFunction,
}

/// `v -> Q/v`.
pub fn dual_temperature() -> RationalFunction {
    RationalFunction::new(MultiPoly::q(), MultiPoly::v()).expect("v is nonzero")
}

impl DecompositionResult {
    fn assemble(
        target: Target,
        terms: Vec<Term>,
        prefactor: RationalFunction,
        dual_temperature: bool,
    ) -> Self {
        let mut r = DecompositionResult {
            target,
            terms,
            prefactor,
            dual_temperature,
            value: RationalFunction::from_poly(MultiPoly::zero()),
        };
        r.value = r.recompute();
        r
    }

    fn linear(target: Target, terms: Vec<Term>) -> Self {
        DecompositionResult::assemble(target, terms, MultiPoly::one().into(), false)
    }

    /// `sum_l amplitude_l * K_l` before the temperature map and prefactor.
    pub fn term_sum(&self) -> MultiPoly {
        self.terms.iter().map(|t| &t.amplitude * &t.character).sum()
    }

    /// Value rebuilt from the term list.
    pub fn recompute(&self) -> RationalFunction {
        let sum = self.term_sum();
        let sum = if self.dual_temperature {
            sum.substitute(Var::V, &dual_temperature())
        } else {
            sum.into()
        };
        &self.prefactor * &sum
    }

    /// The value as a polynomial, when it is one.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.value.as_poly()
    }

    /// Rewrite the term list in minimal characters at an even `p`:
    /// `sum_l a_l K_l = sum_{l <= (p-2)/2} a_l chi_l`, valid when the
    /// amplitudes have the mirror symmetry `a_l = -a_{p-1+np-l} = a_{np+l}`
    /// at `Q = Q(p)`. Extra variables (`Q0`) stay formal. The rewrite is
    /// checked polynomially against the `K` form; an error means the
    /// amplitudes do not reduce.
    pub fn minimal_terms(
        &self,
        chars: &CharacterSet,
        p: BerahaParam,
    ) -> Result<Vec<(usize, MultiPoly)>> {
        let qv = p.q_value();
        let amp = |l: usize| -> MultiPoly {
            self.terms
                .iter()
                .find(|t| t.l == l)
                .map(|t| t.amplitude.specialize(Var::Q, &qv))
                .unwrap_or_default()
        };
        let reduced: Vec<(usize, MultiPoly)> = (0..p.kac_len()).map(|l| (l, amp(l))).collect();
        let via_chi: MultiPoly = reduced
            .iter()
            .map(|(l, a)| Ok(a * &chi(chars, *l, p)?))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        let via_k: MultiPoly = self
            .terms
            .iter()
            .map(|t| &t.amplitude * &t.character)
            .sum::<MultiPoly>()
            .specialize(Var::Q, &qv);
        if via_chi != via_k {
            return Err(Error::Precondition(format!(
                "{} does not reduce to minimal characters at p = {}",
                self.target,
                p.p()
            )));
        }
        Ok(reduced)
    }
}

/// `Z = sum_l c^(l) K_{1,2l+1}`.
pub fn z_from_k(chars: &CharacterSet) -> MultiPoly {
    decompose_z(chars).term_sum()
}

pub fn decompose_z(chars: &CharacterSet) -> DecompositionResult {
    let terms = (0..=chars.width())
        .map(|l| Term {
            l,
            amplitude: amp_c(l),
            character: chars.k(l),
        })
        .collect();
    DecompositionResult::linear(Target::Z, terms)
}

/// `Z_{2j+1} = sum_{l>=j} c_j^(l) K_{1,2l+1}`.
pub fn z2j_from_k(chars: &CharacterSet, j: usize) -> MultiPoly {
    decompose_z2j(chars, j).term_sum()
}

pub fn decompose_z2j(chars: &CharacterSet, j: usize) -> DecompositionResult {
    let terms = (j..=chars.width())
        .map(|l| Term {
            l,
            amplitude: amp_cj(j, l),
            character: chars.k(l),
        })
        .collect();
    DecompositionResult::linear(Target::Z2j(j), terms)
}

/// `K_{1,2l+1} = sum_{j>=l} n(j,l) Z_{2j+1} / Q^j` from the oracle spectrum.
pub fn k_from_z2j(spectrum: &NtcSpectrum, l: usize) -> Result<MultiPoly> {
    let mut out = MultiPoly::zero();
    for j in l..=spectrum.max_ntc() {
        let n = BigRational::from_integer(count_states(j, l).into());
        out += &spectrum.reduced(j)?.scale(&n);
    }
    Ok(out)
}

/// `F_{2l+1} = sum_{j>=l} C(2j, j-l) Z_{2j+1} / Q^j`.
pub fn big_f(spectrum: &NtcSpectrum, l: usize) -> Result<MultiPoly> {
    let mut out = MultiPoly::zero();
    for j in l..=spectrum.max_ntc() {
        let c = BigRational::from_integer(binomial(2 * j as i64, j as i64 - l as i64).into());
        out += &spectrum.reduced(j)?.scale(&c);
    }
    Ok(out)
}

/// `F_{2l+1}` in characters: `sum_{l'>=l} K_{1,2l'+1}`.
pub fn decompose_big_f(chars: &CharacterSet, l: usize) -> DecompositionResult {
    let terms = (l..=chars.width())
        .map(|m| Term {
            l: m,
            amplitude: MultiPoly::one(),
            character: chars.k(m),
        })
        .collect();
    DecompositionResult::linear(Target::BigF(l), terms)
}

/// Minimal character
/// `chi_{1,2l+1} = sum_{n>=0} K_{1,2(np+l)+1} - K_{1,2((n+1)p-1-l)+1}`
/// with `Q` set to its value at `p`. Requires `l <= p - 2`.
pub fn chi(chars: &CharacterSet, l: usize, p: BerahaParam) -> Result<MultiPoly> {
    let pp = p.p() as usize;
    if l + 2 > pp {
        return Err(Error::Precondition(format!(
            "chi_{} needs l <= p - 2 = {}",
            2 * l + 1,
            pp - 2
        )));
    }
    let mut out = MultiPoly::zero();
    let mut n = 0;
    while n * pp + l <= chars.width() {
        out += &chars.k(n * pp + l);
        out -= &chars.k((n + 1) * pp - 1 - l);
        n += 1;
    }
    Ok(out.specialize(Var::Q, &p.q_value()))
}

/// `sum_l b^(l) K_{1,2l+1}`, which equals `Q^{2-F} v^E / Q0 * Z~_{Q0}(Q/v)`.
pub fn dual_decomposition(chars: &CharacterSet) -> DecompositionResult {
    let terms = (0..=chars.width())
        .map(|l| Term {
            l,
            amplitude: amp_b(l),
            character: chars.k(l),
        })
        .collect();
    DecompositionResult::linear(Target::Dual, terms)
}

/// Partition function of the width-`L` square strip with both boundary rows
/// fixed to one spin value, from the characters of the width-`(L-1)` strip
/// at the dual temperature:
///
/// `Z_ff(v) = (1+v)^{2N} Q^{F-2} (Q/v)^{-E} sum_l b^(l)|_{Q0=1} K_l(Q/v)`
///
/// with `E`, `F` those of the width-`(L-1)` strip.
pub fn z_ff(width: usize, length: usize) -> Result<DecompositionResult> {
    if width < 3 {
        return Err(Error::Precondition(format!(
            "Z_ff needs L >= 3, got {width}"
        )));
    }
    let strip = CyclicStrip::square(width - 1, length)?;
    let chars = CharacterSet::compute(&strip)?;
    Ok(z_ff_from(&chars))
}

/// [`z_ff`] for an already computed width-`(L-1)` character set.
pub fn z_ff_from(chars: &CharacterSet) -> DecompositionResult {
    let strip = chars.strip();
    let one = BigRational::one();
    let terms = (0..=chars.width())
        .map(|l| Term {
            l,
            amplitude: amp_b(l).specialize(Var::Q0, &one),
            character: chars.k(l),
        })
        .collect();
    let e = strip.edge_count() as i64;
    let f = strip.face_count() as i64;
    let boundary = (&MultiPoly::one() + &MultiPoly::v()).pow(2 * strip.length() as u32);
    let prefactor =
        &RationalFunction::from_poly(boundary) * &RationalFunction::laurent_monomial(f - 2 - e, e);
    DecompositionResult::assemble(Target::Zff, terms, prefactor, true)
}

/// Characters for many strips at once.
pub fn character_sets(strips: &[CyclicStrip]) -> Result<Vec<CharacterSet>> {
    strips.par_iter().map(CharacterSet::compute).collect()
}

/// True when `p` leaves a zero at the given amplitude index.
pub fn amplitude_vanishes(a: &MultiPoly, p: BerahaParam) -> bool {
    a.specialize(Var::Q, &p.q_value()).is_zero()
}
