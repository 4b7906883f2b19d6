//! Sweeps over grids of real weights, checking every placed shape.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::{build_graph, components_and_shapes};
use crate::error::{Error, Result};
use crate::io::{Schema, WeightRepr};
use crate::relations::verify_defining_relations;
use crate::roots::{CartanKind, RootSystem};
use crate::scalar::{format_rational, parse_rational, FieldElem};
use crate::skew::{build_skew_module, irreducibility_certificate, skew_check};
use crate::torus::{j_label, real_weight};
use crate::weyl::default_cap;

fn default_kinds() -> Vec<String> {
    vec!["A2".into(), "C2".into(), "G2".into()]
}

fn default_max_denominator() -> u32 {
    3
}

fn default_min() -> String {
    "0".into()
}

fn default_max() -> String {
    "2".into()
}

fn default_max_cases() -> usize {
    100_000
}

/// Sweep configuration, read from TOML.
///
/// ```toml
/// kinds = ["A2", "C2", "G2"]
/// max_denominator = 3
/// min = "0"
/// max = "2"
/// cap = 50000
/// max_cases = 100000
/// output_dir = "sweep-out"
/// corrupt_every = 5
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_kinds")]
    pub kinds: Vec<String>,
    /// Exponents `c_i = p/q` with `1 ≤ q ≤ max_denominator`.
    #[serde(default = "default_max_denominator")]
    pub max_denominator: u32,
    /// Inclusive bounds on each `c_i`, as rational strings.
    #[serde(default = "default_min")]
    pub min: String,
    #[serde(default = "default_max")]
    pub max: String,
    /// Weyl group enumeration cap; defaults to `HECKE_WEYL_CAP` or 50000.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    /// Refuse grids larger than this.
    #[serde(default = "default_max_cases")]
    pub max_cases: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Negative control: corrupt one module in every `n`-th case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrupt_every: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            kinds: default_kinds(),
            max_denominator: default_max_denominator(),
            min: default_min(),
            max: default_max(),
            cap: None,
            max_cases: default_max_cases(),
            output_dir: None,
            corrupt_every: None,
        }
    }
}

impl SweepConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        let c: SweepConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if self.kinds.is_empty() {
            return bad("kinds must be nonempty");
        }
        for k in &self.kinds {
            CartanKind::parse(k)?;
        }
        if self.max_denominator == 0 {
            return bad("max_denominator must be positive");
        }
        if self.cap == Some(0) || self.max_cases == 0 || self.corrupt_every == Some(0) {
            return bad("caps must be positive");
        }
        if parse_rational(&self.min)? > parse_rational(&self.max)? {
            return bad("min exceeds max");
        }
        Ok(())
    }

    pub fn cap(&self) -> usize {
        self.cap.unwrap_or_else(default_cap)
    }

    /// The admissible exponent values, sorted.
    pub fn values(&self) -> Result<Vec<BigRational>> {
        let (lo, hi) = (parse_rational(&self.min)?, parse_rational(&self.max)?);
        let mut out = BTreeSet::new();
        for q in 1..=i64::from(self.max_denominator) {
            let qb = BigRational::from_integer(q.into());
            let start = (&lo * &qb).ceil().to_integer();
            let end = (&hi * &qb).floor().to_integer();
            let mut p = start;
            while p <= end {
                out.insert(BigRational::new(p.clone(), q.into()));
                p += 1;
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Every `(kind, c)` in the grid, in a fixed order.
    pub fn cases(&self) -> Result<Vec<(CartanKind, Vec<BigRational>)>> {
        self.validate()?;
        let values = self.values()?;
        let mut out = Vec::new();
        for k in &self.kinds {
            let kind = CartanKind::parse(k)?;
            let total = values.len().checked_pow(kind.rank as u32).unwrap_or(usize::MAX);
            if out.len().saturating_add(total) > self.max_cases {
                return Err(Error::Config(format!(
                    "grid exceeds max_cases = {}",
                    self.max_cases
                )));
            }
            let n = values.len();
            for code in 0..total {
                let mut c = vec![BigRational::default(); kind.rank];
                let mut rest = code;
                for slot in c.iter_mut().rev() {
                    *slot = values[rest % n].clone();
                    rest /= n;
                }
                out.push((kind, c));
            }
        }
        Ok(out)
    }
}

/// The full input of one case, enough to rerun it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseInput {
    #[serde(rename = "type")]
    pub kind: String,
    pub weight: WeightRepr,
    pub cap: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeResult {
    #[serde(rename = "J")]
    pub j: String,
    pub skew: bool,
    /// `|F^(t,J)|`.
    pub tableaux: usize,
    /// Dimension of the built module, for skew shapes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed_checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<bool>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub corrupted: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: usize,
    #[serde(rename = "type")]
    pub kind: String,
    pub gamma: Vec<String>,
    pub orbit_size: usize,
    pub components: usize,
    pub partition_agrees: bool,
    pub shapes: Vec<ShapeResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub passed: bool,
    /// Present exactly when the case failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<CaseInput>,
    pub micros: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub cases: usize,
    pub shapes: usize,
    pub skew_shapes: usize,
    pub modules_built: usize,
    pub failed_cases: usize,
    /// Case ids that were deliberately corrupted.
    pub injected: Vec<usize>,
    /// Case ids that failed.
    pub failed: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: SweepConfig,
    pub cases: Vec<CaseResult>,
    pub summary: Summary,
    pub millis: u64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.summary.failed_cases == 0
    }

    /// In corrupted-fixture mode: the failures are exactly the injected ones.
    pub fn failures_match_injected(&self) -> bool {
        !self.summary.injected.is_empty() && self.summary.injected == self.summary.failed
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

impl Schema for RunReport {
    const KIND: &'static str = "run-report";
    type Repr = RunReport;

    fn to_repr(&self) -> RunReport {
        self.clone()
    }

    fn from_repr(r: RunReport) -> Result<Self> {
        Ok(r)
    }
}

/// Runs one case: the partition of `Γ(t)` agrees with grouping by `J`,
/// and every skew shape builds a module of dimension `|F^(t,J)|` that
/// satisfies all relations and the irreducibility certificate.
pub fn run_case(id: usize, kind: CartanKind, c: &[BigRational], cap: usize, corrupt: bool) -> CaseResult {
    let start = Instant::now();
    let mut res = CaseResult {
        id,
        kind: kind.to_string(),
        gamma: c.iter().map(format_rational).collect(),
        orbit_size: 0,
        components: 0,
        partition_agrees: false,
        shapes: Vec::new(),
        error: None,
        passed: false,
        input: None,
        micros: 0,
    };
    if let Err(e) = check_case(&mut res, kind, c, cap, corrupt) {
        res.error = Some(e.to_string());
    }
    res.passed = res.error.is_none() && res.partition_agrees && res.shapes.iter().all(|s| s.passed);
    if !res.passed {
        res.input = Some(CaseInput {
            kind: kind.to_string(),
            weight: crate::torus::Weight::from_gamma(c.to_vec()).to_repr(),
            cap,
        });
    }
    res.micros = start.elapsed().as_micros() as u64;
    res
}

fn check_case(res: &mut CaseResult, kind: CartanKind, c: &[BigRational], cap: usize, corrupt: bool) -> Result<()> {
    let rs = RootSystem::new(kind)?;
    let t = real_weight(&rs, c)?;
    let g = build_graph(&rs, &t, cap)?;
    let comps = components_and_shapes(&rs, &g);
    res.orbit_size = g.len();
    res.components = comps.components.len();
    res.partition_agrees = comps.agree;
    let mut corrupt_pending = corrupt;
    for comp in &comps.by_j {
        let check = skew_check(&rs, &t, &comp.j, cap)?;
        let mut shape = ShapeResult {
            j: j_label(&rs, &comp.j),
            skew: check.is_skew(),
            tableaux: check.tableaux.len(),
            dim: None,
            failed_checks: Vec::new(),
            irreducible: None,
            corrupted: false,
            passed: check.tableaux.len() == comp.vertices.len(),
        };
        if shape.skew {
            let mut module = build_skew_module(&rs, &t, &comp.j, cap, true)?;
            if std::mem::take(&mut corrupt_pending) {
                let m = &mut module.rep.t[0];
                let bumped = m.get(0, 0).add_ref(&FieldElem::one());
                m.set(0, 0, bumped);
                module.report = verify_defining_relations(&rs, &module.rep);
                shape.corrupted = true;
            }
            let cert = irreducibility_certificate(&module.rep, &g)?;
            shape.dim = Some(module.dim());
            shape.failed_checks = module.report.failures().iter().map(|c| c.name.clone()).collect();
            shape.irreducible = Some(cert.holds(module.dim()));
            shape.passed &= module.dim() == shape.tableaux
                && shape.failed_checks.is_empty()
                && shape.irreducible == Some(true);
        }
        res.shapes.push(shape);
    }
    Ok(())
}

/// Runs the sweep in parallel over cases; writes `report.json` and one
/// file per failing case when `output_dir` is set.
pub fn run_sweep(config: &SweepConfig) -> Result<RunReport> {
    let start = Instant::now();
    let cases = config.cases()?;
    let cap = config.cap();
    let every = config.corrupt_every;
    let results: Vec<CaseResult> = cases
        .par_iter()
        .enumerate()
        .map(|(id, (kind, c))| {
            let corrupt = every.is_some_and(|n| id % n == 0);
            run_case(id, *kind, c, cap, corrupt)
        })
        .collect();
    let mut summary = Summary {
        cases: results.len(),
        ..Summary::default()
    };
    for r in &results {
        summary.shapes += r.shapes.len();
        summary.skew_shapes += r.shapes.iter().filter(|s| s.skew).count();
        summary.modules_built += r.shapes.iter().filter(|s| s.dim.is_some()).count();
        if r.shapes.iter().any(|s| s.corrupted) {
            summary.injected.push(r.id);
        }
        if !r.passed {
            summary.failed.push(r.id);
        }
    }
    summary.failed_cases = summary.failed.len();
    let report = RunReport {
        config: config.clone(),
        cases: results,
        summary,
        millis: start.elapsed().as_millis() as u64,
    };
    if let Some(dir) = &config.output_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), crate::io::serialize(&report)?)?;
        for f in report.failures() {
            std::fs::write(
                dir.join(format!("failure-{}.json", f.id)),
                serde_json::to_string_pretty(f)?,
            )?;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn grid_values() {
        let c = SweepConfig::default();
        let v = c.values().unwrap();
        let expect = [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1), (4, 3), (3, 2), (5, 3), (2, 1)];
        assert_eq!(v, expect.iter().map(|&(p, q)| rat(p, q)).collect::<Vec<_>>());
        assert_eq!(c.cases().unwrap().len(), 3 * 81);
    }

    #[test]
    fn config_parsing() {
        let c = SweepConfig::from_toml("kinds = [\"B3\"]\nmax_denominator = 2\n").unwrap();
        assert_eq!(c.values().unwrap().len(), 5);
        assert_eq!(c.cases().unwrap().len(), 125);
        assert!(SweepConfig::from_toml("kinds = [\"Q2\"]").is_err());
        assert!(SweepConfig::from_toml("cap = 0").is_err());
        assert!(SweepConfig::from_toml("min = \"3\"").is_err());
        assert!(SweepConfig::from_toml("colour = 1").is_err());
        let tiny = SweepConfig {
            max_cases: 10,
            ..SweepConfig::default()
        };
        assert!(tiny.cases().is_err());
    }

    #[test]
    fn degenerate_case() {
        let kind = CartanKind::parse("A2").unwrap();
        let r = run_case(0, kind, &[rat(0, 1), rat(0, 1)], 100, false);
        assert!(r.passed, "{r:?}");
        assert_eq!((r.orbit_size, r.shapes.len()), (1, 1));
        // every root takes the value 1, so the lone shape is not skew
        assert!(!r.shapes[0].skew);
        assert_eq!(r.shapes[0].dim, None);
        assert!(r.input.is_none());
    }

    #[test]
    fn corruption_is_detected() {
        let config = SweepConfig {
            kinds: vec!["A2".into()],
            max_denominator: 1,
            corrupt_every: Some(3),
            ..SweepConfig::default()
        };
        let report = run_sweep(&config).unwrap();
        assert_eq!(report.summary.cases, 9);
        assert!(!report.passed());
        assert!(report.failures_match_injected(), "{:?}", report.summary);
        for f in report.failures() {
            assert!(f.input.is_some());
        }
    }
}
