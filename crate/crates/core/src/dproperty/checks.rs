//! The D-property checkers. Every checker returns the same [`DReport`] shape
//! so results from different characterizations can be compared directly.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use super::report::{Coverage, DReport, Method, Verdict, Witness, MISSING_LIST_LIMIT};
use crate::error::{Error, Result};
use crate::gf2n::SubspaceBasis;
use crate::limits;
use crate::spectra::{ddt_support, fwht, plateaued_profile, walsh_row, PlateauedProfile};
use crate::vbf::{QuadraticAnf, Vbf};

/// Knobs shared by every checker.
#[derive(Debug, Clone, Default)]
pub struct CheckOptions {
    /// record one (a, b, x) per attained value
    pub witnesses: bool,
    /// list every missing value instead of the first 32
    pub full_missing: bool,
    /// 1 = sequential and witness-deterministic; 0 = ambient rayon pool
    pub threads: usize,
    /// hyperplane K for the hyperplane checker (default: span of e_0..e_{n-2})
    pub k_basis: Option<SubspaceBasis>,
}

impl CheckOptions {
    pub fn sequential() -> Self {
        CheckOptions { threads: 1, ..Default::default() }
    }
}

struct Started {
    at: Instant,
}

fn start(f: &Vbf) -> Result<Started> {
    limits::check("coverage bitset over F_2^m", f.m(), limits::OUTPUT_BITS, "")?;
    Ok(Started { at: Instant::now() })
}

fn effective_threads(opts: &CheckOptions) -> usize {
    match opts.threads {
        1 => 1,
        0 => rayon::current_num_threads(),
        t => t,
    }
}

fn finish(f: &Vbf, method: Method, started: Started, mut cov: Coverage, opts: &CheckOptions, note: String) -> DReport {
    let limit = (!opts.full_missing).then_some(MISSING_LIST_LIMIT);
    let (missing, missing_total) = cov.missing(limit);
    let verdict = if cov.is_full() { Verdict::DFunction } else { Verdict::NotDFunction };
    DReport {
        n: f.n(),
        m: f.m(),
        method,
        verdict,
        covered: cov.covered(),
        missing_total,
        missing_truncated: (missing.len() as u64) < missing_total,
        missing,
        witnesses: cov.take_witnesses(),
        modulus: f.provenance().modulus,
        provenance: f.provenance().description.clone(),
        threads: effective_threads(opts),
        elapsed_ms: started.at.elapsed().as_millis(),
        runtime_note: note,
    }
}

/// Runs `body(outer, coverage)` for `outer` in `0..outer_len`, stopping once
/// every value of F_2^m is covered. Sequential when `threads == 1`; otherwise
/// blocks run on a rayon pool and their coverages are merged by union.
fn scan<B>(m: u32, outer_len: u64, opts: &CheckOptions, body: B) -> Coverage
where
    B: Fn(u64, &mut Coverage) + Sync,
{
    if opts.threads == 1 || outer_len < 2 {
        let mut cov = Coverage::new(m, opts.witnesses);
        for o in 0..outer_len {
            body(o, &mut cov);
            if cov.is_full() {
                break;
            }
        }
        return cov;
    }
    let run = || {
        let blocks = (rayon::current_num_threads() as u64 * 8).clamp(1, outer_len);
        let shared = Mutex::new(Coverage::new(m, opts.witnesses));
        let done = AtomicBool::new(false);
        (0..blocks).into_par_iter().for_each(|blk| {
            let lo = outer_len * blk / blocks;
            let hi = outer_len * (blk + 1) / blocks;
            let mut local = Coverage::new(m, opts.witnesses);
            for o in lo..hi {
                if done.load(Ordering::Relaxed) {
                    break;
                }
                body(o, &mut local);
                if local.is_full() {
                    break;
                }
            }
            let mut g = shared.lock().expect("coverage lock");
            g.merge(&local);
            if g.is_full() {
                done.store(true, Ordering::Relaxed);
            }
        });
        shared.into_inner().expect("coverage lock")
    };
    if opts.threads == 0 {
        run()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    }
}

fn require_quadratic(f: &Vbf, method: Method) -> Result<()> {
    if !f.is_quadratic() {
        return Err(Error::Precondition(format!(
            "{method} needs a function of degree <= 2, got degree {}",
            f.degree()
        )));
    }
    Ok(())
}

/// Literal definition: quadratic functions scan D^2_{a,b}F(0) over all (a,b);
/// anything else scans F(x)+F(y)+F(z)+F(x+y+z) over unordered triples.
pub fn d_check_bruteforce(f: &Vbf, opts: &CheckOptions) -> Result<DReport> {
    let started = start(f)?;
    let g = f.normalize();
    let t = g.table();
    let size = g.domain_size() as u64;
    if g.is_quadratic() {
        let cov = scan(g.m(), size, opts, |a, cov| {
            let a = a as u32;
            let fa = t[a as usize];
            for b in 0..size as u32 {
                cov.insert(fa ^ t[b as usize] ^ t[(a ^ b) as usize], || Witness::at_zero(a, b));
            }
        });
        return Ok(finish(f, Method::Bruteforce, started, cov, opts, "quadratic pair scan".into()));
    }
    limits::check(
        "general triple scan",
        3 * f.n(),
        limits::TRIPLE_SCAN_BITS,
        "; use the ddt or moment4 method instead",
    )?;
    let cov = scan(g.m(), size, opts, |x, cov| {
        let x = x as u32;
        let fx = t[x as usize];
        for y in x..size as u32 {
            let fxy = fx ^ t[y as usize];
            for z in y..size as u32 {
                let w = x ^ y ^ z;
                cov.insert(fxy ^ t[z as usize] ^ t[w as usize], || Witness { a: x ^ y, b: x ^ z, x });
            }
        }
    });
    Ok(finish(f, Method::Bruteforce, started, cov, opts, "general triple scan".into()))
}

/// Union over alpha != 0 of {b1 + b2 : DDT(alpha,b1), DDT(alpha,b2) != 0}.
pub fn d_check_ddt(f: &Vbf, opts: &CheckOptions) -> Result<DReport> {
    let started = start(f)?;
    let size = f.domain_size() as u64;
    let cov = scan(f.m(), size - 1, opts, |o, cov| {
        let alpha = o as u32 + 1;
        let support = ddt_support(f, alpha);
        for (i, &(b1, _, x1)) in support.iter().enumerate() {
            for &(b2, _, x2) in &support[i..] {
                cov.insert(b1 ^ b2, || Witness { a: alpha, b: x1 ^ x2, x: x1 });
            }
        }
    });
    Ok(finish(f, Method::Ddt, started, cov, opts, String::new()))
}

/// sum_u W_F(u,v)^k for every component v.
fn walsh_power_sums(f: &Vbf, k: u32) -> Vec<i128> {
    (0..f.codomain_size() as u32)
        .into_par_iter()
        .map(|v| walsh_row(f, v).values.iter().map(|&w| (w as i128).pow(k)).sum())
        .collect()
}

/// Fourier–Hadamard transform of H_{4,F}: value at b is
/// sum_{(u,v)} (-1)^{v.b} W_F(u,v)^4 = 2^{n+m} #{(x,y,z) : F(x)+F(y)+F(z)+F(x+y+z) = b}.
pub fn moment4_transform(f: &Vbf) -> Result<Vec<i128>> {
    limits::check("fourth-moment transform", f.n() + f.m(), limits::SPECTRAL_BITS, "")?;
    let mut h = walsh_power_sums(f, 4);
    fwht(&mut h);
    Ok(h)
}

/// Fourier–Hadamard transform of H_{3,F} for the normalized function: value at
/// b is sum_{(u,v)} W_{F+b}(u,v)^3 = 2^{n+m} #{(x,y) : F(x)+F(y)+F(x+y) = b}.
pub fn moment3_transform(f: &Vbf) -> Result<Vec<i128>> {
    limits::check("third-moment transform", f.n() + f.m(), limits::SPECTRAL_BITS, "")?;
    let mut h = walsh_power_sums(&f.normalize(), 3);
    fwht(&mut h);
    Ok(h)
}

/// Fourier–Hadamard transform of Lambda (Lambda(0) = 2^{2n}, Lambda(v) =
/// lambda_v^2): value at w is 2^m #{(a,b) : D^2_{a,b}F(x) = w}, for any x.
pub fn plateaued_transform(profile: &PlateauedProfile) -> Result<Vec<i128>> {
    if !profile.is_plateaued {
        return Err(Error::Precondition("function is not plateaued".into()));
    }
    let mut lambda = Vec::with_capacity(1 << profile.m);
    lambda.push(1i128 << (2 * profile.n));
    for c in &profile.components {
        let l = c.amplitude.expect("plateaued") as i128;
        lambda.push(l * l);
    }
    fwht(&mut lambda);
    Ok(lambda)
}

/// Coverage from a transform whose value at b is `scale` times a count.
fn coverage_from_counts(f: &Vbf, transform: &[i128], scale: i128, what: &str) -> Coverage {
    let mut cov = Coverage::new(f.m(), false);
    for (b, &t) in transform.iter().enumerate() {
        assert!(t >= 0 && t % scale == 0, "{what} at {b:#x} is {t}, not a non-negative multiple of {scale}");
        if t > 0 {
            cov.insert(b as u32, || unreachable!());
        }
    }
    cov
}

pub fn d_check_moment4(f: &Vbf, opts: &CheckOptions) -> Result<DReport> {
    let started = start(f)?;
    let t = moment4_transform(f)?;
    let cov = coverage_from_counts(f, &t, 1i128 << (f.n() + f.m()), "fourth-moment transform");
    let note = format!("b=0 value {}", t[0]);
    Ok(finish(f, Method::Moment4, started, cov, &CheckOptions { witnesses: false, ..opts.clone() }, note))
}

pub fn d_check_moment3_quadratic(f: &Vbf, opts: &CheckOptions) -> Result<DReport> {
    require_quadratic(f, Method::Moment3Quadratic)?;
    let started = start(f)?;
    let t = moment3_transform(f)?;
    let cov = coverage_from_counts(f, &t, 1i128 << (f.n() + f.m()), "third-moment transform");
    let note = format!("b=0 value {}", t[0]);
    Ok(finish(f, Method::Moment3Quadratic, started, cov, &CheckOptions { witnesses: false, ..opts.clone() }, note))
}

/// Scans D^2_{alpha,beta}F(0) for alpha in a hyperplane K (Gray-code order)
/// and all beta.
pub fn d_check_hyperplane_quadratic(f: &Vbf, opts: &CheckOptions) -> Result<DReport> {
    require_quadratic(f, Method::HyperplaneQuadratic)?;
    let n = f.n();
    let k = match &opts.k_basis {
        Some(b) => {
            if b.ambient_n() != n || b.dim() != n - 1 {
                return Err(Error::InvalidBasis(format!(
                    "hyperplane needs {} independent vectors of F_2^{n}, got {} in F_2^{}",
                    n - 1,
                    b.dim(),
                    b.ambient_n()
                )));
            }
            b.clone()
        }
        None => SubspaceBasis::standard(n, n - 1),
    };
    let started = start(f)?;
    let g = f.normalize();
    let t = g.table();
    let size = g.domain_size() as u32;
    let cov = scan(g.m(), 1u64 << k.dim(), opts, |idx, cov| {
        let gray = (idx ^ (idx >> 1)) as u32;
        let alpha = k.element(gray);
        let fa = t[alpha as usize];
        for beta in 0..size {
            cov.insert(fa ^ t[beta as usize] ^ t[(alpha ^ beta) as usize], || Witness::at_zero(alpha, beta));
        }
    });
    Ok(finish(f, Method::HyperplaneQuadratic, started, cov, opts, format!("K basis {:x?}", k.vectors())))
}

/// Union over J subset of {x_1..x_{n-1}} of the span of
/// g_i(J) = sum_{j in J, j != i} a_{i,j}, i = 1..n.
pub fn d_check_anf_span(anf: &QuadraticAnf, opts: &CheckOptions) -> Result<DReport> {
    let n = anf.n();
    limits::check("ANF subset loop", n - 1, limits::ANF_SUBSET_BITS, "")?;
    let f = Vbf::from_anf(anf);
    let started = start(&f)?;
    let cov = scan(anf.m(), 1u64 << (n - 1), opts, |j_mask, cov| {
        let alpha = j_mask as u32;
        // Reduced echelon basis of the span, each vector tagged with the beta producing it.
        let mut basis: Vec<(u32, u32)> = Vec::new();
        for i in 0..n {
            let gen = anf.second_derivative_at_zero(alpha, 1 << i);
            let (mut v, mut beta) = (gen, 1u32 << i);
            for &(bv, bb) in &basis {
                if v ^ bv < v {
                    v ^= bv;
                    beta ^= bb;
                }
            }
            if v != 0 {
                basis.push((v, beta));
                basis.sort_unstable_by_key(|p| std::cmp::Reverse(p.0));
            }
        }
        for c in 0..1u32 << basis.len() {
            let (mut v, mut beta) = (0u32, 0u32);
            let mut bits = c;
            while bits != 0 {
                let (bv, bb) = basis[bits.trailing_zeros() as usize];
                v ^= bv;
                beta ^= bb;
                bits &= bits - 1;
            }
            cov.insert(v, || Witness::at_zero(alpha, beta));
            if cov.is_full() {
                return;
            }
        }
    });
    Ok(finish(&f, Method::AnfSpan, started, cov, opts, String::new()))
}

/// Amplitude criterion 2^{2n} + sum_{v != 0} lambda_v^2 (-1)^{v.w} > 0 for all w.
pub fn d_check_plateaued(f: &Vbf, opts: &CheckOptions) -> Result<DReport> {
    let started = start(f)?;
    let profile = plateaued_profile(f)?;
    if !profile.is_plateaued {
        return Err(Error::Precondition("plateaued method needs a plateaued function".into()));
    }
    let t = plateaued_transform(&profile)?;
    let cov = coverage_from_counts(f, &t, 1i128 << f.m(), "amplitude transform");
    Ok(finish(f, Method::Plateaued, started, cov, &CheckOptions { witnesses: false, ..opts.clone() }, String::new()))
}

/// Runs one named method. Quadratic-only methods reject other inputs.
pub fn d_check(f: &Vbf, method: Method, opts: &CheckOptions) -> Result<DReport> {
    match method {
        Method::Bruteforce => d_check_bruteforce(f, opts),
        Method::Ddt => d_check_ddt(f, opts),
        Method::Moment4 => d_check_moment4(f, opts),
        Method::Moment3Quadratic => d_check_moment3_quadratic(f, opts),
        Method::HyperplaneQuadratic => d_check_hyperplane_quadratic(f, opts),
        Method::AnfSpan => {
            require_quadratic(f, Method::AnfSpan)?;
            let anf = f.to_quadratic_anf()?;
            let mut r = d_check_anf_span(&anf, opts)?;
            r.modulus = f.provenance().modulus;
            r.provenance = f.provenance().description.clone();
            Ok(r)
        }
        Method::Plateaued => d_check_plateaued(f, opts),
    }
}

/// Picks hyperplane-quadratic for quadratics, the literal scan for tiny
/// inputs and the DDT route otherwise.
pub fn route(f: &Vbf) -> Method {
    if f.is_quadratic() {
        Method::HyperplaneQuadratic
    } else if f.n() <= 4 {
        Method::Bruteforce
    } else {
        Method::Ddt
    }
}

pub fn check_d(f: &Vbf, opts: &CheckOptions) -> Result<DReport> {
    d_check(f, route(f), opts)
}
