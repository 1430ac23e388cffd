//! Verification suites behind `isofractal verify`.

use isofractal::fractal::verify_fractal;
use isofractal::gf::PrimeField;
use isofractal::incidence::{incidence_equivalence, verify_configuration, verify_l_equals_a};
use isofractal::plucker::{contraction, decompose, plucker_matrix};
use isofractal::report::Report;
use isofractal::variety::{expected_count, oracle_points, rational_points, Mode, DEFAULT_BUDGET};
use isofractal::{binomial, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::Suite;

#[derive(Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub failed: usize,
    pub suites: Vec<Report>,
}

pub fn run(suite: Suite, seed: u64) -> Result<VerifyReport> {
    let mut suites = Vec::new();
    if matches!(suite, Suite::Fractal | Suite::All) {
        suites.push(fractal()?);
    }
    if matches!(suite, Suite::Incidence | Suite::All) {
        suites.push(incidence()?);
    }
    if matches!(suite, Suite::Plucker | Suite::All) {
        suites.push(plucker(seed)?);
    }
    if matches!(suite, Suite::Points | Suite::All) {
        suites.push(points()?);
    }
    let failed = suites.iter().map(|s| s.failures().count()).sum();
    Ok(VerifyReport { passed: failed == 0, failed, suites })
}

fn fractal() -> Result<Report> {
    let mut r = verify_fractal(6, 6)?.to_report();
    r.subject = "fractal".into();
    Ok(r)
}

fn incidence() -> Result<Report> {
    let mut r = Report::new("incidence");
    for n in 2..=10 {
        for k in (2..=n).step_by(2) {
            r.absorb(verify_configuration(n, k)?);
        }
    }
    for n in 2..=10 {
        for k in 2..=n {
            let e = incidence_equivalence(n, k)?;
            r.check(
                format!("n={n} k={k} equivalent to A_{}^{}", e.fractal.k, e.fractal.ell),
                e.passed(),
                if e.bit_exact { "bit-exact" } else { "" },
            );
        }
    }
    for m in [8, 10, 12] {
        let l = verify_l_equals_a(m)?;
        r.check(
            format!("m={m} L_{} equivalent to A_{}^{}", l.r, l.r, l.r - 1),
            l.passed(),
            format!("triangle order bit-exact: {}", l.triangle_bit_exact),
        );
    }
    Ok(r)
}

fn plucker(seed: u64) -> Result<Report> {
    let mut r = Report::new("plucker");
    for (n, k) in [(2, 2), (3, 3), (4, 4), (5, 4), (7, 7)] {
        let d = decompose(n, k)?;
        let flags = d.flags.len();
        r.absorb(d.consistency);
        if flags > 0 {
            r.check(format!("n={n} k={k} theorem flags recorded"), true, format!("{flags} flags"));
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for (n, k) in [(2, 2), (3, 2), (3, 3), (4, 3), (5, 4)] {
        let signed = plucker_matrix(n, k, true)?;
        let unsigned = plucker_matrix(n, k, false)?;
        for p in [2u64, 3, 5] {
            let f = PrimeField::new(p)?;
            let mut agree = true;
            for _ in 0..200 {
                let w: Vec<u32> =
                    (0..binomial(2 * n, k)).map(|_| rng.gen_range(0..p as u32)).collect();
                let direct = contraction(n, k, f, &w)?;
                agree &= direct == signed.apply(f, &w)?;
                if p == 2 {
                    agree &= direct == unsigned.apply(f, &w)?;
                }
            }
            r.check(format!("n={n} k={k} GF({p}) contraction equals signed B_f"), agree, "200 vectors");
        }
    }
    Ok(r)
}

fn points() -> Result<Report> {
    let mut r = Report::new("points");
    for (n, k, q) in [(2, 2, 2), (2, 2, 3), (2, 2, 5), (3, 2, 2), (3, 3, 2)] {
        let s = rational_points(n, k, q, Mode::Signed, DEFAULT_BUDGET)?;
        let o = oracle_points(n, k, q, DEFAULT_BUDGET)?;
        let want = expected_count(n, k, q)?;
        r.check(
            format!("n={n} k={k} q={q} count"),
            want == s.len().into(),
            format!("{} found, {want} expected", s.len()),
        );
        r.check(format!("n={n} k={k} q={q} equals oracle"), s.points == o.points, "");
        if q == 2 {
            let u = rational_points(n, k, q, Mode::Unsigned, DEFAULT_BUDGET)?;
            r.check(format!("n={n} k={k} q=2 modes agree"), s.points == u.points, "");
        }
    }
    Ok(r)
}
