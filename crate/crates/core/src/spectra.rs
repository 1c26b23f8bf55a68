//! Walsh spectrum, difference distribution table and everything derived from
//! them: differential uniformity, nonlinearity, plateaued and bent
//! classification, linear structures and the Phi map over 2-flats.
//!
//! Nothing here materializes a full 2^n x 2^m table; work is row by row.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Sub};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits;
use crate::vbf::{dot, Vbf};

/// In-place unnormalized Walsh–Hadamard butterfly.
pub fn fwht<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for start in (0..len).step_by(2 * h) {
            for i in start..start + h {
                let (a, b) = (data[i], data[i + h]);
                data[i] = a + b;
                data[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Fourier–Hadamard transform of a pseudo-Boolean function given by its
/// values on F_2^k: result(w) = sum_v phi(v) (-1)^{v.w}.
pub fn fourier_hadamard(values: &[i128]) -> Vec<i128> {
    let mut out = values.to_vec();
    fwht(&mut out);
    out
}

/// Walsh coefficients W_F(u, v) for one component v, indexed by u.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalshRow {
    pub v: u32,
    pub values: Vec<i64>,
}

impl WalshRow {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,value\n");
        for (u, w) in self.values.iter().enumerate() {
            let _ = writeln!(s, "{u},{w}");
        }
        s
    }

    pub fn max_abs(&self) -> u64 {
        self.values.iter().map(|w| w.unsigned_abs()).max().unwrap_or(0)
    }
}

pub fn walsh_row(f: &Vbf, v: u32) -> WalshRow {
    let mut values: Vec<i64> = f.table().iter().map(|&y| 1 - 2 * dot(v, y) as i64).collect();
    fwht(&mut values);
    WalshRow { v, values }
}

fn check_component(f: &Vbf, v: u32) -> Result<()> {
    if v as u64 >= f.codomain_size() {
        return Err(Error::InvalidArguments(format!("component {v:#x} outside F_2^{}", f.m())));
    }
    Ok(())
}

/// Walsh row with range checking of v.
pub fn walsh_row_checked(f: &Vbf, v: u32) -> Result<WalshRow> {
    check_component(f, v)?;
    Ok(walsh_row(f, v))
}

/// nl(F) = 2^{n-1} - max_{u, v != 0} |W_F(u,v)| / 2.
pub fn nonlinearity(f: &Vbf) -> Result<u64> {
    limits::check("nonlinearity", f.n() + f.m(), limits::SPECTRAL_BITS, "")?;
    let max = (1..f.codomain_size() as u32).into_par_iter().map(|v| walsh_row(f, v).max_abs()).max().unwrap_or(0);
    Ok((1u64 << (f.n() - 1)) - max / 2)
}

/// DDT_F(a, b) for every b.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DdtRow {
    pub a: u32,
    pub counts: Vec<u32>,
}

impl DdtRow {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,value\n");
        for (b, c) in self.counts.iter().enumerate() {
            let _ = writeln!(s, "{b},{c}");
        }
        s
    }

    pub fn sum(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

fn check_difference(f: &Vbf, a: u32) -> Result<()> {
    if a == 0 || a as usize >= f.domain_size() {
        return Err(Error::InvalidArguments(format!(
            "difference must be a nonzero element of F_2^{}, got {a:#x}",
            f.n()
        )));
    }
    Ok(())
}

pub fn ddt_row(f: &Vbf, a: u32) -> Result<DdtRow> {
    check_difference(f, a)?;
    limits::check("dense DDT row", f.m(), limits::OUTPUT_BITS, "")?;
    let mut counts = vec![0u32; f.codomain_size() as usize];
    for x in 0..f.domain_size() as u32 {
        counts[f.derivative(a, x) as usize] += 1;
    }
    Ok(DdtRow { a, counts })
}

/// Nonzero entries of a DDT row as sorted (b, DDT(a,b), first x with D_aF(x) = b).
pub fn ddt_support(f: &Vbf, a: u32) -> Vec<(u32, u32, u32)> {
    let mut pairs: Vec<(u32, u32)> = (0..f.domain_size() as u32).map(|x| (f.derivative(a, x), x)).collect();
    pairs.sort_unstable();
    let mut out: Vec<(u32, u32, u32)> = Vec::new();
    for (b, x) in pairs {
        match out.last_mut() {
            Some(last) if last.0 == b => last.1 += 1,
            _ => out.push((b, 1, x)),
        }
    }
    out
}

/// delta_F = max over a != 0 and b of DDT_F(a, b).
pub fn differential_uniformity(f: &Vbf) -> u32 {
    (1..f.domain_size() as u32)
        .into_par_iter()
        .map(|a| ddt_support(f, a).iter().map(|e| e.1).max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

pub fn is_apn(f: &Vbf) -> bool {
    differential_uniformity(f) == 2
}

/// Per-component data of a plateaued profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentProfile {
    pub v: u32,
    /// lambda_v when every |W_F(u,v)| lies in {0, lambda_v}
    pub amplitude: Option<u64>,
    /// dim V(v), V(v) = {a : D_a F_v constant}
    pub linear_structure_dim: u32,
    /// every derivative of F_v is balanced or constant
    pub partially_bent: bool,
    pub bent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlateauedProfile {
    pub n: u32,
    pub m: u32,
    /// components v = 1 .. 2^m - 1, in order
    pub components: Vec<ComponentProfile>,
    pub is_plateaued: bool,
    pub is_strongly_plateaued: bool,
    pub bent_set: Vec<u32>,
    pub nonbent_set: Vec<u32>,
}

impl PlateauedProfile {
    pub fn component(&self, v: u32) -> &ComponentProfile {
        &self.components[v as usize - 1]
    }

    pub fn amplitude(&self, v: u32) -> Option<u64> {
        self.component(v).amplitude
    }

    pub fn bent_set_size(&self) -> usize {
        self.bent_set.len()
    }

    /// Histogram amplitude -> number of components (plateaued components only).
    pub fn amplitude_histogram(&self) -> BTreeMap<u64, usize> {
        let mut h = BTreeMap::new();
        for c in &self.components {
            if let Some(l) = c.amplitude {
                *h.entry(l).or_insert(0) += 1;
            }
        }
        h
    }
}

fn component_profile(f: &Vbf, v: u32) -> ComponentProfile {
    let n = f.n();
    let size = 1i64 << n;
    let row = walsh_row(f, v);
    let mut amplitude = None;
    let mut plateaued = true;
    for w in &row.values {
        let a = w.unsigned_abs();
        if a == 0 {
            continue;
        }
        match amplitude {
            None => amplitude = Some(a),
            Some(l) if l == a => {}
            Some(_) => plateaued = false,
        }
    }
    // Parseval forbids an all-zero row.
    assert!(amplitude.is_some(), "Walsh row of component {v:#x} is identically zero");
    // Autocorrelation AC(a) = sum_x (-1)^{D_a F_v(x)} = 2^{-n} sum_u W(u)^2 (-1)^{u.a}.
    let mut ac: Vec<i64> = row.values.iter().map(|w| w * w).collect();
    fwht(&mut ac);
    let mut structures = 0u32;
    let mut partially_bent = true;
    for &c in &ac {
        let c = c >> n;
        if c.abs() == size {
            structures += 1;
        } else if c != 0 {
            partially_bent = false;
        }
    }
    let half = if n.is_multiple_of(2) { Some(1u64 << (n / 2)) } else { None };
    let bent = half.is_some() && row.values.iter().all(|w| Some(w.unsigned_abs()) == half);
    ComponentProfile {
        v,
        amplitude: if plateaued { amplitude } else { None },
        linear_structure_dim: structures.trailing_zeros(),
        partially_bent,
        bent,
    }
}

pub fn plateaued_profile(f: &Vbf) -> Result<PlateauedProfile> {
    limits::check("plateaued profile", f.n() + f.m(), limits::SPECTRAL_BITS, "")?;
    let components: Vec<ComponentProfile> =
        (1..f.codomain_size() as u32).into_par_iter().map(|v| component_profile(f, v)).collect();
    let is_plateaued = components.iter().all(|c| c.amplitude.is_some());
    let is_strongly_plateaued = components.iter().all(|c| c.partially_bent);
    let bent_set = components.iter().filter(|c| c.bent).map(|c| c.v).collect();
    let nonbent_set = components.iter().filter(|c| !c.bent).map(|c| c.v).collect();
    Ok(PlateauedProfile { n: f.n(), m: f.m(), components, is_plateaued, is_strongly_plateaued, bent_set, nonbent_set })
}

/// Delta_a = {v : D_a F_v constant}, sorted. Always a subspace containing 0.
pub fn delta_set(f: &Vbf, a: u32) -> Result<Vec<u32>> {
    check_difference(f, a)?;
    limits::check("delta set", f.m(), limits::OUTPUT_BITS, "")?;
    let base = f.derivative(a, 0);
    let mut rows: Vec<u32> = Vec::new();
    for x in 0..f.domain_size() as u32 {
        let mut d = f.derivative(a, x) ^ base;
        for &r in &rows {
            d = d.min(d ^ r);
        }
        if d != 0 {
            rows.push(d);
            rows.sort_unstable_by(|p, q| q.cmp(p));
        }
    }
    Ok((0..f.codomain_size() as u32).filter(|&v| rows.iter().all(|&r| dot(v, r) == 0)).collect())
}

/// Which 2-dimensional flats the Phi map ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneKind {
    /// all 2-dimensional affine subspaces
    Affine,
    /// 2-dimensional vector subspaces only
    Vector,
}

/// Image of Phi_F(A) = sum_{x in A} F(x) with one witness plane per value,
/// recorded as (x, p, q) for A = {x, x+p, x+q, x+p+q}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiImage {
    pub kind: PlaneKind,
    pub planes_visited: u64,
    pub values: BTreeMap<u32, (u32, u32, u32)>,
}

pub fn aff_plane_count(n: u32) -> u128 {
    let q = 1u128 << n;
    q * (q - 1) * (q / 2 - 1) / 12
}

pub fn vector_plane_count(n: u32) -> u128 {
    let q = 1u128 << n;
    (q - 1) * (q / 2 - 1) / 3
}

/// Visits each plane once through its canonical representative: the direction
/// space {0, p, q, p+q} by its two smallest nonzero elements p < q, the coset
/// by its smallest element.
pub fn phi_image(f: &Vbf, kind: PlaneKind) -> Result<PhiImage> {
    limits::check("plane enumeration", 3 * f.n(), limits::PLANE_BITS, "")?;
    let size = f.domain_size() as u32;
    let mut values = BTreeMap::new();
    let mut planes_visited = 0u64;
    for p in 1..size {
        for q in p + 1..size {
            if p ^ q < q {
                continue;
            }
            let r = p ^ q;
            let cosets: Box<dyn Iterator<Item = u32>> = match kind {
                PlaneKind::Vector => Box::new(std::iter::once(0)),
                PlaneKind::Affine => Box::new((0..size).filter(move |&x| x < x ^ p && x < x ^ q && x < x ^ r)),
            };
            for x in cosets {
                planes_visited += 1;
                values.entry(f.second_derivative(p, q, x)).or_insert((x, p, q));
            }
        }
    }
    Ok(PhiImage { kind, planes_visited, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2n::FieldCtx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gold(n: u32, i: u32) -> Vbf {
        let f = FieldCtx::new(n, None).unwrap();
        Vbf::from_univariate(&f, &[((1u64 << i) + 1, 1)]).unwrap()
    }

    fn random_table(n: u32, m: u32, rng: &mut ChaCha8Rng) -> Vbf {
        Vbf::from_truth_table(n, m, (0..1u32 << n).map(|_| rng.gen::<u32>() & ((1 << m) - 1)).collect()).unwrap()
    }

    fn walsh_direct(f: &Vbf, u: u32, v: u32) -> i64 {
        (0..f.domain_size() as u32).map(|x| 1 - 2 * (dot(v, f.eval(x)) ^ dot(u, x)) as i64).sum()
    }

    #[test]
    fn walsh_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let f = random_table(5, 6, &mut rng);
            for v in 0..64 {
                let row = walsh_row(&f, v);
                assert_eq!(row.values.iter().map(|w| w * w).sum::<i64>(), 1 << 10);
                for u in 0..32 {
                    assert_eq!(row.values[u as usize], walsh_direct(&f, u, v));
                }
            }
        }
    }

    #[test]
    fn walsh_examples() {
        let g = gold(3, 1);
        let zero = walsh_row(&g, 0);
        assert_eq!(zero.values[0], 8);
        assert!(zero.values[1..].iter().all(|&w| w == 0));
        for v in 1..8 {
            assert!(walsh_row(&g, v).values.iter().all(|w| [0, 4, -4].contains(w)));
        }
        assert!(walsh_row_checked(&g, 8).is_err());
    }

    #[test]
    fn nonlinearity_examples() {
        assert_eq!(nonlinearity(&gold(3, 1)).unwrap(), 2);
        let affine = Vbf::from_truth_table(3, 2, vec![1, 3, 1, 3, 0, 2, 0, 2]).unwrap();
        assert_eq!(nonlinearity(&affine).unwrap(), 0);
    }

    #[test]
    fn ddt_examples() {
        let g = gold(3, 1);
        for a in 1..8 {
            let row = ddt_row(&g, a).unwrap();
            assert_eq!(row.sum(), 8);
            assert_eq!(row.counts.iter().filter(|&&c| c == 2).count(), 4);
            assert!(row.counts.iter().all(|c| c % 2 == 0));
        }
        let linear = Vbf::from_truth_table(2, 2, vec![0, 1, 2, 3]).unwrap();
        let row = ddt_row(&linear, 3).unwrap();
        assert_eq!(row.counts, vec![0, 0, 0, 4]);
        assert!(matches!(ddt_row(&g, 0), Err(Error::InvalidArguments(_))));
    }

    #[test]
    fn differential_uniformity_examples() {
        assert_eq!(differential_uniformity(&gold(5, 1)), 2);
        assert_eq!(differential_uniformity(&gold(4, 1)), 2);
        assert!(!is_apn(&gold(4, 2)));
        let affine = Vbf::from_truth_table(3, 3, vec![1, 3, 5, 7, 0, 2, 4, 6]).unwrap();
        assert_eq!(differential_uniformity(&affine), 8);
    }

    #[test]
    fn ddt_support_agrees_with_dense_row() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_table(5, 4, &mut rng);
        for a in 1..32 {
            let dense = ddt_row(&f, a).unwrap();
            let sparse = ddt_support(&f, a);
            for &(b, c, x) in &sparse {
                assert_eq!(dense.counts[b as usize], c);
                assert_eq!(f.derivative(a, x), b);
            }
            assert_eq!(sparse.len(), dense.counts.iter().filter(|&&c| c > 0).count());
        }
    }

    /// Direct scan: a is a linear structure of F_v when D_a F_v is constant.
    fn linear_structures_direct(f: &Vbf, v: u32) -> (u32, bool) {
        let size = f.domain_size() as u32;
        let mut count = 0u32;
        let mut pb = true;
        for a in 0..size {
            let ones = (0..size).filter(|&x| dot(v, f.derivative(a, x)) == 1).count() as u32;
            if ones == 0 || ones == size {
                count += 1;
            } else if ones != size / 2 {
                pb = false;
            }
        }
        (count.trailing_zeros(), pb)
    }

    #[test]
    fn profile_matches_direct_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut fs = vec![gold(5, 1), gold(4, 1), gold(6, 1)];
        fs.extend((0..5).map(|_| random_table(4, 4, &mut rng)));
        for f in &fs {
            let p = plateaued_profile(f).unwrap();
            for c in &p.components {
                let (ell, pb) = linear_structures_direct(f, c.v);
                assert_eq!(c.linear_structure_dim, ell);
                assert_eq!(c.partially_bent, pb);
            }
        }
    }

    #[test]
    fn quadratic_profile() {
        let g = gold(6, 1);
        let p = plateaued_profile(&g).unwrap();
        assert!(p.is_plateaued && p.is_strongly_plateaued);
        for c in &p.components {
            let l = c.amplitude.unwrap();
            assert_eq!(l * l, 1u64 << (6 + c.linear_structure_dim));
        }
        // x^3 on GF(2^6): components Tr(v x^3) are bent unless v is a cube
        assert_eq!(p.bent_set.len() + p.nonbent_set.len(), 63);
        let odd = plateaued_profile(&gold(5, 1)).unwrap();
        assert!(odd.bent_set.is_empty());
    }

    #[test]
    fn non_plateaued_random_cubic() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut found = false;
        for _ in 0..20 {
            let f = random_table(4, 4, &mut rng);
            if f.degree() == 3 && !plateaued_profile(&f).unwrap().is_plateaued {
                found = true;
                break;
            }
        }
        assert!(found);
    }

    #[test]
    fn delta_sets() {
        let linear = Vbf::from_truth_table(2, 3, vec![0, 5, 6, 3]).unwrap();
        assert_eq!(delta_set(&linear, 1).unwrap(), (0..8).collect::<Vec<_>>());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let f = random_table(4, 5, &mut rng);
            for a in 1..16 {
                let ds = delta_set(&f, a).unwrap();
                let direct: Vec<u32> = (0..32)
                    .filter(|&v| (0..16).all(|x| dot(v, f.derivative(a, x)) == dot(v, f.derivative(a, 0))))
                    .collect();
                assert_eq!(ds, direct);
                assert!(ds.contains(&0));
                for &p in &ds {
                    for &q in &ds {
                        assert!(ds.contains(&(p ^ q)));
                    }
                }
            }
        }
    }

    #[test]
    fn plane_counts() {
        assert_eq!(aff_plane_count(3), 14);
        assert_eq!(vector_plane_count(3), 7);
        for n in 2..=8 {
            let f = Vbf::from_truth_table(n, 1, vec![0; 1 << n]).unwrap();
            let aff = phi_image(&f, PlaneKind::Affine).unwrap();
            let vec = phi_image(&f, PlaneKind::Vector).unwrap();
            assert_eq!(aff.planes_visited as u128, aff_plane_count(n));
            assert_eq!(vec.planes_visited as u128, vector_plane_count(n));
            assert_eq!(aff.values.keys().copied().collect::<Vec<_>>(), vec![0]);
        }
    }

    #[test]
    fn apn_iff_phi_avoids_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut fs = vec![gold(3, 1), gold(5, 1), gold(4, 2), gold(6, 1)];
        fs.extend((0..40).map(|_| {
            let n = rng.gen_range(2..=5);
            random_table(n, rng.gen_range(n..=7), &mut rng)
        }));
        for f in &fs {
            let img = phi_image(f, PlaneKind::Affine).unwrap();
            assert_eq!(is_apn(f), !img.values.contains_key(&0));
            for (&w, &(x, p, q)) in &img.values {
                assert_eq!(f.second_derivative(p, q, x), w);
            }
        }
    }
}
