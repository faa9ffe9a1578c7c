//! Acceptance criteria, run as a plain binary: one PASS/FAIL line per
//! criterion, nonzero exit if any fails. All comparisons are exact.

use std::process::ExitCode;
use std::time::Instant;

use cyclic_potts::characters::{decompose_z, z_ff_from};
use cyclic_potts::combinat::catalan;
use cyclic_potts::{
    amp_b, amp_c, big_f, chi, count_states, dual_oracle, duality_witness_check, enumerate_states,
    fk_enumerate, k_from_z2j, verify_block_structure, z2j_from_k, z_from_k, zff_oracle, Assignment,
    BerahaParam, CharacterSet, CyclicStrip, MultiPoly, RationalFunction, Var,
};
use num_rational::BigRational;
use num_traits::{One, Zero};

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(what: &str, lhs: &MultiPoly, rhs: &MultiPoly) -> Check {
    ensure(lhs == rhs, || format!("{what}: difference {}", lhs - rhs))
}

fn chars(l: usize, n: usize) -> Result<CharacterSet, String> {
    let strip = CyclicStrip::square(l, n).map_err(|e| e.to_string())?;
    CharacterSet::compute(&strip).map_err(|e| e.to_string())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn dimension_formula() -> Check {
    for l in 0..=6 {
        let mut squares = 0u128;
        for m in 0..=l {
            let n = count_states(l, m);
            let listed = enumerate_states(l, m).len() as u128;
            ensure(n == listed, || {
                format!("L={l} l={m}: formula {n}, enumeration {listed}")
            })?;
            squares += n * n;
        }
        ensure(squares == catalan(2 * l), || {
            format!(
                "L={l}: sum of squares {squares} != Catalan {}",
                catalan(2 * l)
            )
        })?;
    }
    Ok(())
}

fn block_structure() -> Check {
    for l in 1..=3 {
        let strip = CyclicStrip::square(l, 1).map_err(|e| e.to_string())?;
        let report = verify_block_structure(&strip).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("L={l}: {report:?}"))?;
    }
    Ok(())
}

fn grid() -> impl Iterator<Item = (usize, usize)> {
    (1..=3).flat_map(|l| (1..=4).map(move |n| (l, n)))
}

fn main_decomposition() -> Check {
    for (l, n) in grid() {
        let c = chars(l, n)?;
        let z = cyclic_potts::fk_z(c.strip()).map_err(|e| e.to_string())?;
        same(&c.strip().to_string(), &z_from_k(&c), &z)?;
    }
    Ok(())
}

fn constrained_decomposition() -> Check {
    for (l, n) in grid() {
        let c = chars(l, n)?;
        let spectrum = fk_enumerate(c.strip()).map_err(|e| e.to_string())?;
        let tag = c.strip().to_string();
        for j in 0..=l {
            same(
                &format!("{tag} Z_{}", 2 * j + 1),
                &z2j_from_k(&c, j),
                &spectrum.get(j),
            )?;
            let k = k_from_z2j(&spectrum, j).map_err(|e| e.to_string())?;
            same(&format!("{tag} K_1,{} inverse", 2 * j + 1), &k, &c.k(j))?;
        }
        let alternating: MultiPoly = (0..=l)
            .map(|m| if m % 2 == 0 { c.k(m) } else { -c.k(m) })
            .sum();
        same(
            &format!("{tag} Z_1 alternating"),
            &alternating,
            &spectrum.get(0),
        )?;
    }
    Ok(())
}

fn f_identities() -> Check {
    for (l, n) in grid() {
        let c = chars(l, n)?;
        let spectrum = fk_enumerate(c.strip()).map_err(|e| e.to_string())?;
        for m in 0..=l {
            let a = big_f(&spectrum, m).map_err(|e| e.to_string())?;
            let b = big_f(&spectrum, m + 1).map_err(|e| e.to_string())?;
            same(
                &format!("{} F_{}", c.strip(), 2 * m + 1),
                &(&a - &b),
                &c.k(m),
            )?;
        }
    }
    Ok(())
}

fn amplitude_symmetries() -> Check {
    let patterns: [(i64, [i64; 9]); 2] = [
        (2, [1, 1, -1, -1, 1, 1, -1, -1, 1]),
        (3, [1, 2, 1, -1, -2, -1, 1, 2, 1]),
    ];
    for (q, pattern) in patterns {
        let a = Assignment::new().with_int(Var::Q, q);
        for (l, &want) in pattern.iter().enumerate() {
            let got = amp_c(l).eval(&a).map_err(|e| e.to_string())?;
            ensure(got == rat(want, 1), || {
                format!("c^({l}) at Q={q} is {got}, expected {want}")
            })?;
        }
    }
    let b: Vec<MultiPoly> = (0..=8)
        .map(|l| amp_b(l).specialize(Var::Q, &rat(2, 1)))
        .collect();
    let p = 4;
    for l in 0..p {
        for n in 0..3 {
            if n * p + l <= 8 {
                same(
                    &format!("b^({}) vs b^({l})", n * p + l),
                    &b[n * p + l],
                    &b[l],
                )?;
            }
            let m = p - 1 + n * p - l;
            if m <= 8 {
                same(&format!("b^({m}) vs -b^({l})"), &b[m], &-b[l].clone())?;
            }
        }
    }
    Ok(())
}

fn minimal_characters() -> Check {
    let p4 = BerahaParam::new(4).map_err(|e| e.to_string())?;
    for l in 2..=3 {
        for n in 2..=4 {
            let c = chars(l, n)?;
            let spectrum = fk_enumerate(c.strip()).map_err(|e| e.to_string())?;
            let tag = c.strip().to_string();
            for q in [2u32, 3] {
                let p = BerahaParam::for_q(q).map_err(|e| e.to_string())?;
                let qv = p.q_value();
                let mut sum = MultiPoly::zero();
                for m in 0..p.kac_len() {
                    let x = chi(&c, m, p).map_err(|e| e.to_string())?;
                    sum += &(&amp_c(m).specialize(Var::Q, &qv) * &x);
                }
                same(
                    &format!("{tag} Z at Q={q}"),
                    &sum,
                    &spectrum.z().specialize(Var::Q, &qv),
                )?;
            }
            let chi0 = chi(&c, 0, p4).map_err(|e| e.to_string())?;
            let chi1 = chi(&c, 1, p4).map_err(|e| e.to_string())?;
            same(
                &format!("{tag} Z_1 at Q=2"),
                &(&chi0 - &chi1),
                &spectrum.get(0).specialize(Var::Q, &rat(2, 1)),
            )?;
        }
    }
    Ok(())
}

fn duality() -> Check {
    for (l, n) in [(1, 2), (2, 2), (2, 3)] {
        let strip = CyclicStrip::square(l, n).map_err(|e| e.to_string())?;
        let report = duality_witness_check(&strip).map_err(|e| e.to_string())?;
        ensure(report.configurations == 1u64 << strip.edge_count(), || {
            format!(
                "{strip}: only {} configurations visited",
                report.configurations
            )
        })?;
        ensure(report.failures.is_empty(), || {
            format!("{strip}: first violation {:?}", report.failures[0])
        })?;
        ensure(report.aggregate_holds, || {
            format!("{strip}: aggregate relation fails")
        })?;
    }
    Ok(())
}

fn dual_decomposition() -> Check {
    same("b^(1)", &amp_b(1), &(&MultiPoly::q0() - &MultiPoly::one()))?;
    for l in 1..=2 {
        for n in 2..=3 {
            let c = chars(l, n)?;
            let tag = c.strip().to_string();
            let d = cyclic_potts::dual_decomposition(&c).term_sum();
            let oracle = dual_oracle(c.strip()).map_err(|e| e.to_string())?;
            same(&format!("{tag} dual"), &d, &oracle)?;
            let at_q = d.substitute(Var::Q0, &MultiPoly::q().into());
            let z: RationalFunction = decompose_z(&c).term_sum().into();
            ensure(at_q == z, || format!("{tag}: Q0 -> Q gives {at_q}"))?;
            same(
                &format!("{tag} Q0 -> 0"),
                &d.specialize(Var::Q0, &BigRational::zero()),
                &z2j_from_k(&c, 0),
            )?;
        }
    }
    Ok(())
}

fn fixed_boundaries() -> Check {
    let values = [BigRational::one(), rat(2, 1), rat(1, 2)];
    for (n, qs) in [(2usize, vec![2u32, 3]), (3, vec![2])] {
        let c = chars(2, n)?;
        let zff = z_ff_from(&c);
        for &q in &qs {
            for v in &values {
                let a = Assignment::new()
                    .with_int(Var::Q, q as i64)
                    .with(Var::V, v.clone());
                let lhs = zff.value.eval(&a).map_err(|e| e.to_string())?;
                let rhs = zff_oracle(3, n, q, v).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("N={n} Q={q} v={v}: {lhs} != {rhs}"))?;
            }
        }
        for (q, want) in [(2u32, vec![0usize]), (3, vec![0, 2])] {
            let p = BerahaParam::for_q(q).map_err(|e| e.to_string())?;
            let terms = zff.minimal_terms(&c, p).map_err(|e| e.to_string())?;
            let present: Vec<usize> = terms
                .iter()
                .filter(|(_, a)| !a.is_zero())
                .map(|(l, _)| *l)
                .collect();
            ensure(present == want, || {
                format!("N={n} Q={q}: minimal characters {present:?}")
            })?;
            ensure(terms.iter().all(|(_, a)| a.is_zero() || a.is_one()), || {
                format!("N={n} Q={q}: amplitudes {terms:?}")
            })?;
        }
    }
    Ok(())
}

fn closed_forms() -> Check {
    let (q, v) = (MultiPoly::q(), MultiPoly::v());
    for n in 1..=4 {
        let c = chars(1, n)?;
        same(&format!("K_1,1(1,{n})"), &c.k(0), &(&q + &v).pow(n as u32))?;
        same(&format!("K_1,3(1,{n})"), &c.k(1), &v.pow(n as u32))?;
    }
    for l in 1..=3 {
        for n in 1..=4 {
            let c = chars(l, n)?;
            same(
                &format!("K_1,{}({l},{n})", 2 * l + 1),
                &c.k(l),
                &v.pow((l * n) as u32),
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("dimension formula", dimension_formula),
        ("block structure", block_structure),
        ("main decomposition", main_decomposition),
        ("constrained decomposition", constrained_decomposition),
        ("F identities", f_identities),
        ("amplitude symmetries", amplitude_symmetries),
        ("minimal characters", minimal_characters),
        ("duality", duality),
        ("dual decomposition", dual_decomposition),
        ("fixed boundaries", fixed_boundaries),
        ("closed forms", closed_forms),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
