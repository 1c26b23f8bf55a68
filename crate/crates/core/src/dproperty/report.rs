use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::vbf::Vbf;

/// Missing values listed in a report unless the full list is requested.
pub const MISSING_LIST_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Bruteforce,
    Ddt,
    Moment4,
    Moment3Quadratic,
    HyperplaneQuadratic,
    AnfSpan,
    Plateaued,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Bruteforce,
        Method::Ddt,
        Method::Moment4,
        Method::Moment3Quadratic,
        Method::HyperplaneQuadratic,
        Method::AnfSpan,
        Method::Plateaued,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Bruteforce => "bruteforce",
            Method::Ddt => "ddt",
            Method::Moment4 => "moment4",
            Method::Moment3Quadratic => "moment3-quadratic",
            Method::HyperplaneQuadratic => "hyperplane-quadratic",
            Method::AnfSpan => "anf-span",
            Method::Plateaued => "plateaued",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == s)
    }

    /// Only valid on functions of degree at most 2.
    pub fn needs_quadratic(self) -> bool {
        matches!(self, Method::Moment3Quadratic | Method::HyperplaneQuadratic | Method::AnfSpan)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    DFunction,
    NotDFunction,
}

impl Verdict {
    pub fn is_d(self) -> bool {
        self == Verdict::DFunction
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::DFunction => "D-function",
            Verdict::NotDFunction => "not-D-function",
        })
    }
}

/// A value is attained as D^2_{a,b}F(x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub a: u32,
    pub b: u32,
    pub x: u32,
}

impl Witness {
    pub fn at_zero(a: u32, b: u32) -> Self {
        Witness { a, b, x: 0 }
    }

    pub fn replays(&self, f: &Vbf, value: u32) -> bool {
        f.second_derivative(self.a, self.b, self.x) == value
    }
}

/// Verdict of one D-property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DReport {
    pub n: u32,
    pub m: u32,
    pub method: Method,
    pub verdict: Verdict,
    /// number of attained values in F_2^m
    pub covered: u64,
    pub missing_total: u64,
    /// unattained values, truncated to [`MISSING_LIST_LIMIT`] unless requested in full
    pub missing: Vec<u32>,
    pub missing_truncated: bool,
    pub witnesses: Option<BTreeMap<u32, Witness>>,
    pub modulus: Option<u64>,
    pub provenance: String,
    pub threads: usize,
    pub elapsed_ms: u128,
    pub runtime_note: String,
}

impl DReport {
    pub fn is_d(&self) -> bool {
        self.verdict.is_d()
    }

    /// JSON document, schema "dreport/1".
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DReportJson::from(self)).expect("report serializes")
    }

    /// Same document without the timing field, for determinism comparisons.
    pub fn to_json_untimed(&self) -> serde_json::Value {
        let mut v = self.to_json();
        if let Some(o) = v.as_object_mut() {
            o.remove("elapsed_ms");
        }
        v
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{:<21} {:<15} covered {}/{}",
            self.method.name(),
            self.verdict.to_string(),
            self.covered,
            1u64 << self.m
        );
        if self.missing_total > 0 {
            let shown: Vec<String> = self.missing.iter().map(|w| format!("{w:#x}")).collect();
            s.push_str(&format!(
                ", missing {} [{}{}]",
                self.missing_total,
                shown.join(" "),
                if self.missing_truncated { " ..." } else { "" }
            ));
        }
        s
    }
}

#[derive(Serialize)]
struct WitnessJson {
    a: String,
    b: String,
    x: String,
}

#[derive(Serialize)]
struct DReportJson {
    schema: &'static str,
    n: u32,
    m: u32,
    method: Method,
    verdict: Verdict,
    covered: u64,
    missing_total: u64,
    missing: Vec<String>,
    missing_truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<BTreeMap<String, WitnessJson>>,
    modulus: Option<String>,
    provenance: String,
    threads: usize,
    runtime_note: String,
    elapsed_ms: u128,
}

pub(crate) fn hex(w: u32) -> String {
    format!("{w:#x}")
}

impl From<&DReport> for DReportJson {
    fn from(r: &DReport) -> Self {
        DReportJson {
            schema: "dreport/1",
            n: r.n,
            m: r.m,
            method: r.method,
            verdict: r.verdict,
            covered: r.covered,
            missing_total: r.missing_total,
            missing: r.missing.iter().map(|&w| hex(w)).collect(),
            missing_truncated: r.missing_truncated,
            witnesses: r.witnesses.as_ref().map(|ws| {
                ws.iter().map(|(&v, w)| (hex(v), WitnessJson { a: hex(w.a), b: hex(w.b), x: hex(w.x) })).collect()
            }),
            modulus: r.modulus.map(|m| format!("{m:#x}")),
            provenance: r.provenance.clone(),
            threads: r.threads,
            runtime_note: r.runtime_note.clone(),
            elapsed_ms: r.elapsed_ms,
        }
    }
}

/// One bit per element of F_2^m, with optional first witness per value.
#[derive(Debug, Clone)]
pub(crate) struct Coverage {
    bits: Vec<u64>,
    covered: u64,
    target: u64,
    witnesses: Option<BTreeMap<u32, Witness>>,
}

impl Coverage {
    pub(crate) fn new(m: u32, witnesses: bool) -> Self {
        let target = 1u64 << m;
        Coverage {
            bits: vec![0; target.div_ceil(64) as usize],
            covered: 0,
            target,
            witnesses: witnesses.then(BTreeMap::new),
        }
    }

    #[inline]
    pub(crate) fn insert(&mut self, value: u32, witness: impl FnOnce() -> Witness) {
        let (word, bit) = ((value >> 6) as usize, value & 63);
        let w = &mut self.bits[word];
        if *w >> bit & 1 == 0 {
            *w |= 1 << bit;
            self.covered += 1;
            if let Some(ws) = self.witnesses.as_mut() {
                ws.insert(value, witness());
            }
        }
    }

    #[inline]
    pub(crate) fn is_full(&self) -> bool {
        self.covered == self.target
    }

    pub(crate) fn contains(&self, value: u32) -> bool {
        self.bits[(value >> 6) as usize] >> (value & 63) & 1 == 1
    }

    /// Union; witnesses already present in `self` win.
    pub(crate) fn merge(&mut self, other: &Coverage) {
        let mut covered = 0u64;
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
            covered += a.count_ones() as u64;
        }
        self.covered = covered;
        if let (Some(mine), Some(theirs)) = (self.witnesses.as_mut(), other.witnesses.as_ref()) {
            for (&v, &w) in theirs {
                mine.entry(v).or_insert(w);
            }
        }
    }

    pub(crate) fn covered(&self) -> u64 {
        self.covered
    }

    pub(crate) fn missing(&self, limit: Option<usize>) -> (Vec<u32>, u64) {
        let total = self.target - self.covered;
        let cap = limit.unwrap_or(usize::MAX);
        let mut out = Vec::new();
        if total > 0 {
            for v in 0..self.target {
                if out.len() >= cap {
                    break;
                }
                if !self.contains(v as u32) {
                    out.push(v as u32);
                }
            }
        }
        (out, total)
    }

    pub(crate) fn take_witnesses(&mut self) -> Option<BTreeMap<u32, Witness>> {
        self.witnesses.take()
    }
}
