//! Function families and seeded corpora.
//!
//! Family strings:
//! ```text
//! gold:n=9,i=1[,restrict=t0|restrict=h<hex alpha>]
//! x3tr9:n=9[,restrict=...]
//! uni:n=5,terms=3:1/5:2[,restrict=...]     exponent:coefficient pairs
//! tt:<path>                                 truth-table file
//! anf:<path>                                quadratic ANF file
//! rand2:n=6,m=8,seed=42[,d=0.5]             seeded random quadratic
//! ```
//! Random generation uses ChaCha8 seeded through `SeedableRng::seed_from_u64`
//! (rand_chacha 0.3), so a seed names the same function on every platform.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formats::{read_anf, read_truth_table};
use crate::gf2n::FieldCtx;
use crate::vbf::{Provenance, QuadraticAnf, Vbf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// kernel of the absolute trace
    TraceZero,
    /// {x : Tr(alpha x) = 0}
    Hyperplane(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Gold { n1: u32, i: u32 },
    X3Tr9 { n1: u32 },
    Univariate { n1: u32, terms: Vec<(u64, u32)> },
    TruthTable(PathBuf),
    Anf(PathBuf),
    RandomQuadratic { n: u32, m: u32, seed: u64, density: Option<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub restriction: Option<Restriction>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn field(n1: u32, modulus: Option<u64>) -> Result<FieldCtx> {
    FieldCtx::new(n1, modulus)
}

/// X^{2^i + 1} over GF(2^{n1}).
pub fn gold(n1: u32, i: u32) -> Result<Vbf> {
    gold_with(n1, i, None)
}

pub fn gold_with(n1: u32, i: u32, modulus: Option<u64>) -> Result<Vbf> {
    if n1 < 3 || i == 0 || i >= n1 {
        return Err(Error::InvalidArguments(format!("gold needs n1 >= 3 and 1 <= i < n1, got n1={n1}, i={i}")));
    }
    let ctx = field(n1, modulus)?;
    let f = Vbf::from_univariate(&ctx, &[((1u64 << i) + 1, 1)])?;
    Ok(f.with_provenance(Provenance {
        description: format!("gold:n={n1},i={i}"),
        modulus: Some(ctx.modulus()),
        ..Default::default()
    }))
}

/// X^3 + Tr(X^9) over GF(2^{n1}), the trace bit embedded as the field's 0 or 1.
pub fn x3_tr9(n1: u32) -> Result<Vbf> {
    x3_tr9_with(n1, None)
}

pub fn x3_tr9_with(n1: u32, modulus: Option<u64>) -> Result<Vbf> {
    if n1 < 3 {
        return Err(Error::InvalidArguments(format!("x3tr9 needs n1 >= 3, got {n1}")));
    }
    let ctx = field(n1, modulus)?;
    let cube = Vbf::from_univariate(&ctx, &[(3, 1)])?;
    let table = (0..ctx.order() as u32).map(|x| cube.eval(x) ^ ctx.abs_trace(ctx.pow(x, 9))).collect();
    Ok(Vbf::from_truth_table(n1, n1, table)?.with_provenance(Provenance {
        description: format!("x3tr9:n={n1}"),
        modulus: Some(ctx.modulus()),
        ..Default::default()
    }))
}

/// Seeded quadratic ANF with a_0 = 0. Without a density every coefficient is
/// uniform in F_2^m; with one, each coefficient is nonzero with that
/// probability and then uniform among nonzero words.
pub fn random_quadratic(n: u32, m: u32, seed: u64, density: Option<f64>) -> Result<QuadraticAnf> {
    if n < 2 {
        return Err(Error::InvalidArguments(format!("random quadratic needs n >= 2, got {n}")));
    }
    if let Some(d) = density {
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::InvalidArguments(format!("density must lie in [0, 1], got {d}")));
        }
    }
    let mut anf = QuadraticAnf::zero(n, m)?;
    let mask = ((1u64 << m) - 1) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| match density {
        None => rng.gen::<u32>() & mask,
        Some(d) if rng.gen_bool(d) => rng.gen_range(1..=mask),
        Some(_) => 0,
    };
    for i in 0..n {
        for j in i + 1..n {
            let w = draw(&mut rng);
            anf.set_quad(i, j, w)?;
        }
    }
    for k in 0..n {
        let w = draw(&mut rng);
        anf.set_lin(k, w)?;
    }
    Ok(anf)
}

/// Seeded function of degree <= 3 (every monomial of degree <= 3 gets a
/// uniform coefficient, constant term 0).
pub fn random_cubic(n: u32, m: u32, seed: u64) -> Result<Vbf> {
    let mask = ((1u64 << m) - 1) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs =
        (0..1u32 << n).map(|s| if s != 0 && s.count_ones() <= 3 { rng.gen::<u32>() & mask } else { 0 }).collect();
    Ok(Vbf::from_anf_table(n, m, coeffs)?
        .with_provenance(Provenance::described(format!("random cubic n={n} m={m} seed={seed}"))))
}

/// Seeded uniformly random truth table.
pub fn random_table(n: u32, m: u32, seed: u64) -> Result<Vbf> {
    let mask = ((1u64 << m) - 1) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = (0..1u32 << n).map(|_| rng.gen::<u32>() & mask).collect();
    Ok(Vbf::from_truth_table(n, m, table)?
        .with_provenance(Provenance::described(format!("random table n={n} m={m} seed={seed}"))))
}

/// Mixed corpus for cross-validation: quadratics, cubics, random tables and
/// restricted catalog functions, all with n <= 6 and m <= 8.
pub fn cross_validation_corpus(seed: u64, size: usize) -> Result<Vec<Vbf>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(size);
    for spec in [
        "gold:n=5,i=1,restrict=t0",
        "gold:n=5,i=2,restrict=t0",
        "gold:n=7,i=1,restrict=t0",
        "gold:n=7,i=3,restrict=t0",
        "x3tr9:n=7,restrict=t0",
        "gold:n=6,i=1,restrict=t0",
        "gold:n=3,i=1,restrict=t0",
        "gold:n=3,i=2,restrict=h3",
        "gold:n=4,i=1,restrict=t0",
        "gold:n=6,i=2,restrict=t0",
    ] {
        out.push(spec.parse::<FamilySpec>()?.build(None)?);
    }
    for (n1, i) in [(3, 1), (4, 1), (5, 1), (5, 2), (6, 1), (6, 5)] {
        out.push(gold(n1, i)?);
    }
    let mut k = 0u64;
    while out.len() < size {
        k += 1;
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(1..=8);
        let s = seed.wrapping_mul(1_000_003).wrapping_add(k);
        let f = match k % 4 {
            0 | 1 => {
                let density = if k % 8 == 1 { Some(rng.gen_range(0.1..0.6)) } else { None };
                let anf = random_quadratic(n, m, s, density)?;
                let spec = FamilySpec { family: Family::RandomQuadratic { n, m, seed: s, density }, restriction: None };
                Vbf::from_anf(&anf).with_provenance(Provenance::described(spec.to_string()))
            }
            2 => random_cubic(n, m, s)?,
            _ => random_table(n, m, s)?,
        };
        out.push(f);
    }
    Ok(out)
}

impl FamilySpec {
    /// Builds the function. `modulus` replaces the default field polynomial
    /// for field-based families and restrictions.
    pub fn build(&self, modulus: Option<u64>) -> Result<Vbf> {
        let base = match &self.family {
            Family::Gold { n1, i } => gold_with(*n1, *i, modulus)?,
            Family::X3Tr9 { n1 } => x3_tr9_with(*n1, modulus)?,
            Family::Univariate { n1, terms } => {
                let ctx = field(*n1, modulus)?;
                Vbf::from_univariate(&ctx, terms)?
            }
            Family::TruthTable(p) => read_truth_table(p)?,
            Family::Anf(p) => Vbf::from_anf(&read_anf(p)?),
            Family::RandomQuadratic { n, m, seed, density } => {
                Vbf::from_anf(&random_quadratic(*n, *m, *seed, *density)?)
            }
        };
        let base_prov = Provenance { description: self.base_string(), ..base.provenance().clone() };
        let base = base.with_provenance(base_prov);
        let Some(r) = self.restriction else {
            return Ok(base);
        };
        let ctx = field(base.n(), modulus)?;
        let basis = match r {
            Restriction::TraceZero => ctx.trace_zero_basis(),
            Restriction::Hyperplane(alpha) => ctx.hyperplane_basis(alpha)?,
        };
        let restricted = base.restrict(&basis)?;
        let prov = Provenance {
            description: self.to_string(),
            modulus: Some(ctx.modulus()),
            basis: Some(basis.vectors().to_vec()),
            normalized: false,
        };
        Ok(restricted.with_provenance(prov))
    }

    /// Human-readable cautions, e.g. a Gold exponent that is not APN.
    pub fn warnings(&self) -> Vec<String> {
        match self.family {
            Family::Gold { n1, i } if gcd(i, n1) != 1 => {
                vec![format!("gcd(i={i}, n={n1}) = {} != 1: gold function is not APN", gcd(i, n1))]
            }
            _ => Vec::new(),
        }
    }

    fn base_string(&self) -> String {
        match &self.family {
            Family::Gold { n1, i } => format!("gold:n={n1},i={i}"),
            Family::X3Tr9 { n1 } => format!("x3tr9:n={n1}"),
            Family::Univariate { n1, terms } => {
                let t: Vec<String> = terms.iter().map(|(e, c)| format!("{e}:{c:#x}")).collect();
                format!("uni:n={n1},terms={}", t.join("/"))
            }
            Family::TruthTable(p) => format!("tt:{}", p.display()),
            Family::Anf(p) => format!("anf:{}", p.display()),
            Family::RandomQuadratic { n, m, seed, density } => match density {
                Some(d) => format!("rand2:n={n},m={m},seed={seed},d={d}"),
                None => format!("rand2:n={n},m={m},seed={seed}"),
            },
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base_string())?;
        match self.restriction {
            Some(Restriction::TraceZero) => f.write_str(",restrict=t0"),
            Some(Restriction::Hyperplane(a)) => write!(f, ",restrict=h{a:x}"),
            None => Ok(()),
        }
    }
}

fn parse_u32(key: &str, v: &str) -> Result<u32> {
    v.parse().map_err(|_| Error::Parse(format!("{key}: expected an integer, got {v:?}")))
}

fn parse_word(v: &str) -> Result<u32> {
    let r = match v.strip_prefix("0x") {
        Some(h) => u32::from_str_radix(h, 16),
        None => v.parse(),
    };
    r.map_err(|_| Error::Parse(format!("expected a number, got {v:?}")))
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("missing family prefix in {s:?}")))?;
        match kind {
            "tt" | "anf" => {
                if rest.is_empty() {
                    return Err(Error::Parse(format!("{kind}: missing path")));
                }
                let p = PathBuf::from(rest);
                let family = if kind == "tt" { Family::TruthTable(p) } else { Family::Anf(p) };
                return Ok(FamilySpec { family, restriction: None });
            }
            "gold" | "x3tr9" | "uni" | "rand2" => {}
            _ => return Err(Error::Parse(format!("unknown family {kind:?}"))),
        }
        let mut n = None;
        let mut i = None;
        let mut m = None;
        let mut seed = None;
        let mut density = None;
        let mut terms = None;
        let mut restriction = None;
        for field in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) =
                field.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {field:?}")))?;
            match k {
                "n" => n = Some(parse_u32(k, v)?),
                "i" => i = Some(parse_u32(k, v)?),
                "m" => m = Some(parse_u32(k, v)?),
                "seed" => seed = Some(v.parse::<u64>().map_err(|_| Error::Parse(format!("seed: bad value {v:?}")))?),
                "d" => density = Some(v.parse::<f64>().map_err(|_| Error::Parse(format!("d: bad value {v:?}")))?),
                "terms" => {
                    let mut t = Vec::new();
                    for term in v.split('/') {
                        let (e, c) = term
                            .split_once(':')
                            .ok_or_else(|| Error::Parse(format!("term {term:?} is not exp:coeff")))?;
                        let e = e.parse::<u64>().map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
                        t.push((e, parse_word(c)?));
                    }
                    terms = Some(t);
                }
                "restrict" => {
                    restriction = Some(match v {
                        "t0" => Restriction::TraceZero,
                        _ => match v.strip_prefix('h') {
                            Some(h) => Restriction::Hyperplane(
                                u32::from_str_radix(h, 16)
                                    .map_err(|_| Error::Parse(format!("bad hyperplane {v:?}")))?,
                            ),
                            None => return Err(Error::Parse(format!("restrict must be t0 or h<hex>, got {v:?}"))),
                        },
                    })
                }
                _ => return Err(Error::Parse(format!("unknown key {k:?} for {kind}"))),
            }
        }
        let need = |x: Option<u32>, key: &str| x.ok_or_else(|| Error::Parse(format!("{kind}: missing {key}=")));
        let allowed: &[&str] = match kind {
            "gold" => &["n", "i"],
            "x3tr9" => &["n"],
            "uni" => &["n", "terms"],
            _ => &["n", "m", "seed", "d"],
        };
        let given = [
            ("i", i.is_some()),
            ("m", m.is_some()),
            ("seed", seed.is_some()),
            ("d", density.is_some()),
            ("terms", terms.is_some()),
        ];
        if let Some((k, _)) = given.iter().find(|(k, set)| *set && !allowed.contains(k)) {
            return Err(Error::Parse(format!("key {k:?} does not apply to {kind}")));
        }
        let family = match kind {
            "gold" => Family::Gold { n1: need(n, "n")?, i: need(i, "i")? },
            "x3tr9" => Family::X3Tr9 { n1: need(n, "n")? },
            "uni" => Family::Univariate {
                n1: need(n, "n")?,
                terms: terms.ok_or_else(|| Error::Parse("uni: missing terms=".into()))?,
            },
            _ => {
                if restriction.is_some() {
                    return Err(Error::Parse("rand2 does not take a restriction".into()));
                }
                Family::RandomQuadratic {
                    n: need(n, "n")?,
                    m: need(m, "m")?,
                    seed: seed.ok_or_else(|| Error::Parse("rand2: missing seed=".into()))?,
                    density,
                }
            }
        };
        Ok(FamilySpec { family, restriction })
    }
}
