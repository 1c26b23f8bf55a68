use std::collections::BTreeSet;

use serde::Serialize;

use super::checks::plateaued_transform;
use super::report::Verdict;
use crate::error::{Error, Result};
use crate::spectra::{is_apn, plateaued_profile, PlateauedProfile};
use crate::vbf::{dot, QuadraticAnf, Vbf};

/// A non-empty set I of off-diagonal index pairs such that (i,j), (l,k) in I
/// with i != k implies (i,k) in I. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UltraTransitiveSet {
    pub n: u32,
    pub pairs: BTreeSet<(u32, u32)>,
}

impl UltraTransitiveSet {
    pub fn new(n: u32, pairs: BTreeSet<(u32, u32)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidArguments("ultra-transitive sets are non-empty".into()));
        }
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i == j || i >= n || j >= n) {
            return Err(Error::InvalidArguments(format!("pair ({i},{j}) is diagonal or out of range")));
        }
        for &(i, _) in &pairs {
            for &(_, k) in &pairs {
                if i != k && !pairs.contains(&(i, k)) {
                    return Err(Error::InvalidArguments(format!("missing ({i},{k}) required by ultra-transitivity")));
                }
            }
        }
        Ok(UltraTransitiveSet { n, pairs })
    }

    /// (Supp(alpha) x Supp(beta)) minus the diagonal.
    pub fn from_supports(n: u32, alpha: u32, beta: u32) -> Result<Self> {
        let mut pairs = BTreeSet::new();
        for i in (0..n).filter(|&i| alpha >> i & 1 == 1) {
            for j in (0..n).filter(|&j| beta >> j & 1 == 1 && j != i) {
                pairs.insert((i, j));
            }
        }
        UltraTransitiveSet::new(n, pairs)
    }

    /// I with every symmetric pair {(i,j),(j,i)} contained in I removed.
    pub fn reduced(&self) -> BTreeSet<(u32, u32)> {
        self.pairs.iter().copied().filter(|&(i, j)| !self.pairs.contains(&(j, i))).collect()
    }

    /// sum over the reduced set of a_{i,j}.
    pub fn coefficient_sum(&self, anf: &QuadraticAnf) -> u32 {
        self.reduced().iter().fold(0, |acc, &(i, j)| acc ^ anf.quad(i, j))
    }
}

/// Result of the ANF-side APN test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnfApnResult {
    pub apn: bool,
    /// directions (alpha, beta) with D^2_{alpha,beta}F(0) = 0, and the set they induce
    pub witness: Option<(u32, u32, UltraTransitiveSet)>,
}

/// A quadratic function is APN iff for every nonzero alpha the kernel of
/// beta -> D^2_{alpha,beta}F(0) is exactly {0, alpha}.
pub fn apn_check_anf(anf: &QuadraticAnf) -> AnfApnResult {
    let n = anf.n();
    for alpha in 1..1u32 << n {
        // Gaussian elimination on the images of e_i, tracking combinations.
        let mut basis: Vec<(u32, u32)> = Vec::new();
        let mut kernel: Vec<u32> = Vec::new();
        for i in 0..n {
            let (mut v, mut comb) = (anf.second_derivative_at_zero(alpha, 1 << i), 1u32 << i);
            for &(bv, bc) in &basis {
                if v ^ bv < v {
                    v ^= bv;
                    comb ^= bc;
                }
            }
            if v == 0 {
                kernel.push(comb);
            } else {
                basis.push((v, comb));
                basis.sort_unstable_by_key(|p| std::cmp::Reverse(p.0));
            }
        }
        if kernel.len() > 1 {
            // kernel has dimension >= 2: some element is neither 0 nor alpha
            let beta = kernel.iter().copied().find(|&k| k != alpha).expect("two independent kernel vectors");
            let set =
                UltraTransitiveSet::from_supports(n, alpha, beta).expect("supports of distinct nonzero directions");
            return AnfApnResult { apn: false, witness: Some((alpha, beta, set)) };
        }
    }
    AnfApnResult { apn: true, witness: None }
}

/// Strongly plateaued APN (n, n+1) criterion via the sizes of
/// Omega_w = {v non-bent : v.w = 0}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaReport {
    pub n: u32,
    /// |Omega_w| for every w in F_2^{n+1}
    pub omega_sizes: Vec<u64>,
    pub min_omega: u64,
    /// (2^n - 1) / 3, compared strictly as 3 |Omega_w| > 2^n - 1
    pub threshold: f64,
    pub verdict: Verdict,
    pub bent_count: u64,
    pub nonbent_count: u64,
    pub ell_sum: u64,
}

fn mismatch(what: String) -> Error {
    Error::StructuralMismatch(what)
}

pub fn omega_report(f: &Vbf) -> Result<OmegaReport> {
    let n = f.n();
    if f.m() != n + 1 {
        return Err(mismatch(format!("expected an (n, n+1)-function, got ({}, {})", n, f.m())));
    }
    if !n.is_multiple_of(2) {
        return Err(mismatch(format!("n must be even, got {n}")));
    }
    if !is_apn(f) {
        return Err(mismatch("function is not APN".into()));
    }
    let profile = plateaued_profile(f)?;
    if !profile.is_strongly_plateaued {
        return Err(mismatch("function is not strongly plateaued".into()));
    }
    structural_checks(&profile)?;

    let full = 1u64 << n;
    let omega_sizes: Vec<u64> =
        (0..1u32 << (n + 1)).map(|w| profile.nonbent_set.iter().filter(|&&v| dot(v, w) == 0).count() as u64).collect();

    // 2^{2n} + sum lambda_v^2 (-1)^{v.w} = 2^{n+1} (3 |Omega_w| - (2^n - 1)) for w != 0;
    // at w = 0 the character sum over v != 0 adds a further 2^{2n+1}.
    let transform = plateaued_transform(&profile)?;
    for (w, (&t, &om)) in transform.iter().zip(&omega_sizes).enumerate() {
        let at_zero = if w == 0 { 1i128 << (2 * n + 1) } else { 0 };
        let expected = (1i128 << (n + 1)) * (3 * om as i128 - (full as i128 - 1)) + at_zero;
        if t != expected {
            return Err(mismatch(format!("amplitude sum at w={w:#x} is {t}, Omega count predicts {expected}")));
        }
    }

    let min_omega = *omega_sizes.iter().min().expect("nonempty");
    let verdict = if 3 * min_omega > full - 1 { Verdict::DFunction } else { Verdict::NotDFunction };
    Ok(OmegaReport {
        n,
        omega_sizes,
        min_omega,
        threshold: (full - 1) as f64 / 3.0,
        verdict,
        bent_count: profile.bent_set.len() as u64,
        nonbent_count: profile.nonbent_set.len() as u64,
        ell_sum: profile.components.iter().map(|c| (1u64 << c.linear_structure_dim) - 1).sum(),
    })
}

fn structural_checks(p: &PlateauedProfile) -> Result<()> {
    let n = p.n;
    let full = 1u64 << n;
    if p.bent_set.len() as u64 != full {
        return Err(mismatch(format!("|B| = {}, expected 2^n = {full}", p.bent_set.len())));
    }
    if p.nonbent_set.len() as u64 != full - 1 {
        return Err(mismatch(format!("|NB| = {}, expected 2^n - 1 = {}", p.nonbent_set.len(), full - 1)));
    }
    for &v in &p.nonbent_set {
        let ell = p.component(v).linear_structure_dim;
        if ell != 2 {
            return Err(mismatch(format!("l_v = {ell} for non-bent component {v:#x}, expected 2")));
        }
    }
    for c in &p.components {
        let l = c.amplitude.expect("strongly plateaued implies plateaued");
        if l * l != 1u64 << (n + c.linear_structure_dim) {
            return Err(mismatch(format!("lambda_v^2 = {} != 2^(n+l_v) for v={:#x}", l * l, c.v)));
        }
    }
    let sum: u64 = p.components.iter().map(|c| (1u64 << c.linear_structure_dim) - 1).sum();
    if sum != 3 * (full - 1) {
        return Err(mismatch(format!("sum (2^l_v - 1) = {sum}, expected 3(2^n - 1) = {}", 3 * (full - 1))));
    }
    Ok(())
}
