//! Named reproduction experiments. Each one runs a list of claims and records
//! pass/fail with a short detail line and its timing.

use std::time::Instant;

use serde::Serialize;

use crate::catalog::{cross_validation_corpus, gold_with, random_quadratic, random_table, FamilySpec};
use crate::dproperty::{
    applicable_methods, d_check, d_check_bruteforce, dimension_bounds, omega_report, verify_moment_identities,
    CheckOptions, DReport, IdentityStatus, Method,
};
use crate::error::{Error, Result};
use crate::gf2n::FieldCtx;
use crate::spectra::{aff_plane_count, differential_uniformity, is_apn, phi_image, vector_plane_count, PlaneKind};
use crate::vbf::Vbf;

pub const EXPERIMENTS: [&str; 10] = [
    "dillon-baseline",
    "remark-n7",
    "family-even",
    "family-odd",
    "extension-17",
    "bounds",
    "strongly-plateaued",
    "n2-negative",
    "moment-identities",
    "cross-validate",
];

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub claims: Vec<Claim>,
    pub elapsed_ms: u128,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.claims {
            s.push_str(&format!(
                "{} {:<44} {:>8} ms  {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.elapsed_ms,
                c.detail
            ));
        }
        s.push_str(&format!(
            "{}: {} ({}/{} claims, {} ms)\n",
            self.experiment,
            if self.passed() { "PASS" } else { "FAIL" },
            self.claims.iter().filter(|c| c.pass).count(),
            self.claims.len(),
            self.elapsed_ms
        ));
        s
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub threads: usize,
    pub modulus: Option<u64>,
}

struct Runner {
    claims: Vec<Claim>,
}

impl Runner {
    /// Runs one claim; an error counts as a failure with the error as detail.
    fn claim(&mut self, name: impl Into<String>, body: impl FnOnce() -> Result<(bool, String)>) {
        let t = Instant::now();
        let (pass, detail) = match body() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        self.claims.push(Claim { name: name.into(), pass, detail, elapsed_ms: t.elapsed().as_millis() });
    }
}

fn opts(run: &RunOptions) -> CheckOptions {
    CheckOptions { threads: run.threads, full_missing: true, ..Default::default() }
}

fn modulus_for(run: &RunOptions, n1: u32) -> Option<u64> {
    run.modulus.filter(|m| 63 - m.leading_zeros() == n1)
}

fn restricted(name: &str, run: &RunOptions, n1: u32) -> Result<Vbf> {
    name.parse::<FamilySpec>()?.build(modulus_for(run, n1))
}

/// Runs every applicable method and checks they agree on verdict and missing set.
pub fn all_methods(f: &Vbf, opts: &CheckOptions) -> Result<Vec<DReport>> {
    let opts = CheckOptions { full_missing: true, ..opts.clone() };
    applicable_methods(f).into_iter().map(|m| d_check(f, m, &opts)).collect()
}

pub fn agree(reports: &[DReport]) -> bool {
    reports.windows(2).all(|w| w[0].verdict == w[1].verdict && w[0].missing == w[1].missing)
}

fn hex_list(v: &[u32]) -> String {
    let s: Vec<String> = v.iter().map(|w| format!("{w:#x}")).collect();
    format!("[{}]", s.join(" "))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn run_experiment(name: &str, run: &RunOptions) -> Result<ExperimentReport> {
    let t = Instant::now();
    let mut r = Runner { claims: Vec::new() };
    match name {
        "dillon-baseline" => dillon_baseline(&mut r, run),
        "remark-n7" => remark_n7(&mut r, run),
        "family-even" => family_even(&mut r, run),
        "family-odd" => family_odd(&mut r, run, &[9, 11, 13, 15]),
        "extension-17" => family_odd(&mut r, run, &[17]),
        "bounds" => bounds(&mut r),
        "strongly-plateaued" => strongly_plateaued(&mut r, run),
        "n2-negative" => n2_negative(&mut r, run),
        "moment-identities" => moment_identities(&mut r, run),
        "cross-validate" => cross_validate(&mut r, run, 2024, 500),
        _ => {
            return Err(Error::InvalidArguments(format!(
                "unknown experiment {name:?}; choose one of {}",
                EXPERIMENTS.join(", ")
            )))
        }
    }
    Ok(ExperimentReport { experiment: name.to_string(), claims: r.claims, elapsed_ms: t.elapsed().as_millis() })
}

fn dillon_baseline(r: &mut Runner, run: &RunOptions) {
    for n in 3..=8u32 {
        for i in (1..n).filter(|&i| gcd(i, n) == 1) {
            r.claim(format!("gold({n},{i}) APN and D for every method"), || {
                let f = gold_with(n, i, modulus_for(run, n))?;
                let apn = is_apn(&f);
                let reports = all_methods(&f, &opts(run))?;
                let all_d = reports.iter().all(DReport::is_d);
                Ok((apn && all_d, format!("apn={apn}, {} methods, all D={all_d}", reports.len())))
            });
        }
    }
}

fn remark_n7(r: &mut Runner, run: &RunOptions) {
    r.claim("restricted gold(7,1): (6,7), delta=2, not D", || {
        let f = restricted("gold:n=7,i=1,restrict=t0", run, 7)?;
        let delta = differential_uniformity(&f);
        let rep = d_check(&f, Method::HyperplaneQuadratic, &opts(run))?;
        let pass = (f.n(), f.m()) == (6, 7) && delta == 2 && !rep.is_d() && rep.missing_total > 0;
        Ok((
            pass,
            format!(
                "({},{}) delta={delta} verdict={} missing={} modulus={:#x}",
                f.n(),
                f.m(),
                rep.verdict,
                hex_list(&rep.missing),
                rep.modulus.unwrap_or(0)
            ),
        ))
    });
}

fn family_even(r: &mut Runner, run: &RunOptions) {
    for (n1, i) in [(6, 1), (8, 1), (8, 3), (10, 1), (10, 3)] {
        r.claim(format!("restricted gold({n1},{i}) is D"), || {
            let f = restricted(&format!("gold:n={n1},i={i},restrict=t0"), run, n1)?;
            let rep = d_check(&f, Method::HyperplaneQuadratic, &opts(run))?;
            Ok((rep.is_d(), format!("covered {}/{}", rep.covered, 1u64 << rep.m)))
        });
    }
}

fn family_odd(r: &mut Runner, run: &RunOptions, dims: &[u32]) {
    for &n1 in dims {
        for (label, spec) in
            [("gold", format!("gold:n={n1},i=1,restrict=t0")), ("x3tr9", format!("x3tr9:n={n1},restrict=t0"))]
        {
            r.claim(format!("restricted {label}({n1}) is D"), || {
                let f = restricted(&spec, run, n1)?;
                let rep = d_check(&f, Method::HyperplaneQuadratic, &opts(run))?;
                Ok((rep.is_d(), format!("covered {}/{}", rep.covered, 1u64 << rep.m)))
            });
        }
    }
}

fn bounds(r: &mut Runner) {
    for n in 3..=10u32 {
        r.claim(format!("general bound n={n}"), || {
            let b = dimension_bounds(n, false)?;
            let count = aff_plane_count(n);
            let tight = (1u128 << b.m_max) - 1 <= count && (1u128 << (b.m_max + 1)) - 1 > count;
            Ok((tight && b.m_max < 3 * n - 4, format!("m in [{}, {}], 3n-4 = {}", b.m_min, b.m_max, 3 * n - 4)))
        });
    }
    for n in 4..=10u32 {
        r.claim(format!("quadratic bound n={n}"), || {
            let b = dimension_bounds(n, true)?;
            let count = vector_plane_count(n);
            let fits = (1u128 << b.m_max) - 1 <= count;
            Ok((fits && b.m_max < 2 * n - 2, format!("m in [{}, {}], 2n-2 = {}", b.m_min, b.m_max, 2 * n - 2)))
        });
    }
    for n in 2..=8u32 {
        r.claim(format!("plane counts by enumeration n={n}"), || {
            let f = Vbf::from_truth_table(n, 1, vec![0; 1 << n])?;
            let aff = phi_image(&f, PlaneKind::Affine)?.planes_visited as u128;
            let vec = phi_image(&f, PlaneKind::Vector)?.planes_visited as u128;
            let pass = aff == aff_plane_count(n) && vec == vector_plane_count(n);
            Ok((pass, format!("|AFF|={aff} |V|={vec}")))
        });
    }
}

fn strongly_plateaued(r: &mut Runner, run: &RunOptions) {
    for n1 in [5u32, 7] {
        r.claim(format!("omega report on restricted gold({n1},1)"), || {
            let f = restricted(&format!("gold:n={n1},i=1,restrict=t0"), run, n1)?;
            let om = omega_report(&f)?;
            let brute = d_check_bruteforce(&f, &opts(run))?;
            Ok((
                om.verdict == brute.verdict,
                format!(
                    "|B|={} |NB|={} sum(2^l-1)={} min|Omega|={} verdict={} bruteforce={}",
                    om.bent_count, om.nonbent_count, om.ell_sum, om.min_omega, om.verdict, brute.verdict
                ),
            ))
        });
    }
    r.claim("plateaued method agrees with bruteforce on corpus quadratics", || {
        let corpus = cross_validation_corpus(7, 200)?;
        let mut checked = 0;
        for f in corpus.iter().filter(|f| f.is_quadratic()) {
            let a = d_check(f, Method::Plateaued, &opts(run))?;
            let b = d_check_bruteforce(f, &opts(run))?;
            if a.verdict != b.verdict || a.missing != b.missing {
                return Ok((false, format!("disagreement on {}", f.provenance().description)));
            }
            checked += 1;
        }
        Ok((true, format!("{checked} quadratics")))
    });
}

fn n2_negative(r: &mut Runner, run: &RunOptions) {
    for i in [1u32, 2] {
        r.claim(format!("gold(3,{i}) on every hyperplane is not D"), || {
            let ctx = FieldCtx::new(3, modulus_for(run, 3))?;
            let f = gold_with(3, i, Some(ctx.modulus()))?;
            let mut verdicts = Vec::new();
            for alpha in 1..8 {
                let g = f.restrict(&ctx.hyperplane_basis(alpha)?)?;
                verdicts.push(d_check_bruteforce(&g, &opts(run))?.is_d());
            }
            Ok((verdicts.iter().all(|d| !d), format!("{} hyperplanes, none D", verdicts.len())))
        });
    }
}

fn moment_identities(r: &mut Runner, run: &RunOptions) {
    r.claim("identities on 50 random functions (n<=4, m<=5)", || {
        let mut counts = [0usize; 3];
        for k in 0..50u64 {
            let n = 2 + (k % 3) as u32;
            let m = 1 + (k % 5) as u32;
            let f = if k % 2 == 0 { random_table(n, m, k)? } else { Vbf::from_anf(&random_quadratic(n, m, k, None)?) };
            let rep = verify_moment_identities(&f, None)?;
            for (c, id) in counts.iter_mut().zip(&rep.identities) {
                match &id.status {
                    IdentityStatus::Holds { .. } => *c += 1,
                    IdentityStatus::Fails { at, lhs, rhs } => {
                        return Ok((false, format!("{} fails at {at:#x}: {lhs} != {rhs} (seed {k})", id.name)))
                    }
                    IdentityStatus::Skipped { .. } => {}
                }
            }
        }
        Ok((counts.iter().all(|&c| c > 0), format!("held on {}/{}/{} functions", counts[0], counts[1], counts[2])))
    });
    for n1 in [4u32, 5] {
        r.claim(format!("b=0 constant 2^(n+m)(3*2^n-2) for gold({n1},1)"), || {
            let f = gold_with(n1, 1, modulus_for(run, n1))?;
            let rep = verify_moment_identities(&f, Some(&[0]))?;
            let m3 = crate::dproperty::moment3_transform(&f)?[0];
            let expected = (1i128 << (n1 + f.m())) * (3 * (1i128 << n1) - 2);
            let pass = is_apn(&f) && rep.identities[1].status.holds() && m3 == expected;
            Ok((pass, format!("value {m3}, expected {expected}")))
        });
    }
}

fn cross_validate(r: &mut Runner, run: &RunOptions, seed: u64, size: usize) {
    r.claim(format!("all methods agree on a {size}-function corpus"), || {
        let corpus = cross_validation_corpus(seed, size)?;
        let mut runs = 0;
        for f in &corpus {
            let reports = all_methods(f, &opts(run))?;
            if !agree(&reports) {
                let v: Vec<String> = reports.iter().map(DReport::summary).collect();
                return Ok((false, format!("{}: {}", f.provenance().description, v.join("; "))));
            }
            runs += reports.len();
        }
        Ok((true, format!("{} functions, {runs} checker runs", corpus.len())))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_experiment() {
        assert!(run_experiment("nope", &RunOptions::default()).is_err());
    }

    #[test]
    fn small_experiments_pass() {
        let run = RunOptions { threads: 1, modulus: None };
        for name in ["remark-n7", "n2-negative"] {
            let rep = run_experiment(name, &run).unwrap();
            assert!(rep.passed(), "{}", rep.to_text());
        }
    }
}
