//! Declarative pipelines: a TOML file of named steps, each one typed module operation with
//! literal inputs or references to earlier steps, plus expected outputs and cross-checks.
//!
//! Steps run in dependency order (file order breaks ties). Every Betti table produced is
//! checked for Poincare duality and nonnegativity. Steps that inject geometric facts rather
//! than compute them must carry a citation.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::assembly::{b_shift, blowup_correction, extra_term, main_term, semistable_series, StratumContribution};
use crate::eisenstein::{boundary_betti, BoundaryFactor, BoundarySpec};
use crate::error::{invalid, Error, Result};
use crate::invariants::{close_group, molien, wreath_symmetrize, wreath_symmetrize_table, DEFAULT_GROUP_CAP};
use crate::orbits::{coordinate_weights, df_relation_count, normal_rep_of, MultiPoly, NormalRep};
use crate::rational::{qi, to_i64, Q};
use crate::series::{duality_check, duality_complete, gf_expand, lincomb, parse_polynomial, projective_space, BettiTable, TruncatedSeries};
use crate::strata::{instability_index_set, normal_rep_strata, weyl_fiber_count, BetaStratum, GroupModel, Weyl};
use crate::weights::hypersurface_weights;

pub const BUILTIN: &[(&str, &str)] = &[
    ("cubic3fold", include_str!("../scenarios/cubic3fold.toml")),
    ("cubicsurf", include_str!("../scenarios/cubicsurf.toml")),
    ("cubiccurve", include_str!("../scenarios/cubiccurve.toml")),
    ("binary12", include_str!("../scenarios/binary12.toml")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub title: String,
    /// Default truncation order of every series step.
    pub order: usize,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(rename = "step")]
    pub steps: Vec<Step>,
    #[serde(default, rename = "row")]
    pub rows: Vec<Row>,
    #[serde(default, rename = "check")]
    pub checks: Vec<CheckSpec>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Step {
    pub id: String,
    #[serde(default)]
    pub cite: String,
    pub order: Option<usize>,
    #[serde(flatten)]
    pub op: Op,
    /// Series: every coefficient. Table: every Betti number.
    pub expect: Option<Vec<i64>>,
    /// Series or table: even-degree values, with odd degrees required to vanish.
    pub expect_even: Option<Vec<i64>>,
    pub expect_min_codim: Option<i64>,
    /// `[codim, count]` pairs over the nonzero strata.
    pub expect_codim_counts: Option<Vec<(i64, usize)>>,
    /// `[codim, w]` pairs: every item of that codimension has that Weyl share.
    pub expect_w: Option<Vec<(usize, usize)>>,
    pub expect_dim: Option<usize>,
    pub expect_relations: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Op {
    /// Instability strata of degree-`d` hypersurfaces in `n+1` variables under SL(n+1).
    Strata { n: usize, d: usize },
    /// Normal-slice weights at a form fixed by the torus spanned by `torus` (ambient coordinates).
    NormalRep {
        form: String,
        torus: Vec<Vec<i64>>,
        #[serde(default)]
        extra_tangents: Vec<String>,
    },
    /// Strata of the projectivized normal slice under its stabilizer.
    SliceStrata {
        rep: String,
        model: SliceModel,
        #[serde(default)]
        positive: Vec<i64>,
    },
    /// Stratum contributions with declared series per codimension; Weyl shares are computed.
    Items { strata: String, series: Vec<(usize, String)> },
    Semistable {
        ambient_dim: usize,
        exponents: Vec<usize>,
        #[serde(default)]
        items: Option<String>,
    },
    GfExpand { factors: Vec<(usize, usize)> },
    Projective { dim: usize },
    Molien { generators: Vec<Vec<Vec<i64>>>, degree: usize },
    Polynomial { text: String },
    Table { even: Vec<i64> },
    Product { of: Vec<String> },
    /// `[coefficient, shift, step]` terms.
    Lincomb { terms: Vec<(i64, usize, String)> },
    Complete { of: String, dim: usize },
    MainTerm {
        p: String,
        #[serde(default)]
        rank: Option<usize>,
        #[serde(default)]
        rank_from: Option<String>,
    },
    ExtraTerm { items: String },
    /// Shift rule; when `rep` is given the table dimension must be `dim rep - 1 - group_dim`.
    BShift {
        table: String,
        #[serde(default)]
        rep: Option<String>,
        #[serde(default)]
        group_dim: usize,
    },
    Blowup { exceptional: String, dim: usize },
    Boundary {
        factors: Vec<BoundaryFactor>,
        #[serde(default)]
        trivial_symmetries: Vec<String>,
    },
    Wreath { of: String, n: usize },
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SliceModel {
    Torus,
    RankOne,
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::Strata { .. } => "strata",
            Op::NormalRep { .. } => "normal_rep",
            Op::SliceStrata { .. } => "slice_strata",
            Op::Items { .. } => "items",
            Op::Semistable { .. } => "semistable",
            Op::GfExpand { .. } => "gf_expand",
            Op::Projective { .. } => "projective",
            Op::Molien { .. } => "molien",
            Op::Polynomial { .. } => "polynomial",
            Op::Table { .. } => "table",
            Op::Product { .. } => "product",
            Op::Lincomb { .. } => "lincomb",
            Op::Complete { .. } => "complete",
            Op::MainTerm { .. } => "main_term",
            Op::ExtraTerm { .. } => "extra_term",
            Op::BShift { .. } => "b_shift",
            Op::Blowup { .. } => "blowup",
            Op::Boundary { .. } => "boundary",
            Op::Wreath { .. } => "wreath",
        }
    }

    /// Ops whose inputs are geometric facts rather than computations.
    pub fn is_declared(&self) -> bool {
        matches!(
            self,
            Op::Items { .. } | Op::Semistable { .. } | Op::Polynomial { .. } | Op::Table { .. } | Op::Boundary { .. }
        )
    }

    pub fn references(&self) -> Vec<&str> {
        match self {
            Op::Strata { .. }
            | Op::NormalRep { .. }
            | Op::GfExpand { .. }
            | Op::Projective { .. }
            | Op::Molien { .. }
            | Op::Polynomial { .. }
            | Op::Table { .. }
            | Op::Boundary { .. } => vec![],
            Op::SliceStrata { rep, .. } => vec![rep],
            Op::Items { strata, series } => {
                let mut v = vec![strata.as_str()];
                v.extend(series.iter().map(|(_, s)| s.as_str()));
                v
            }
            Op::Semistable { items, .. } => items.iter().map(String::as_str).collect(),
            Op::Product { of } => of.iter().map(String::as_str).collect(),
            Op::Lincomb { terms } => terms.iter().map(|(_, _, s)| s.as_str()).collect(),
            Op::Complete { of, .. } | Op::Wreath { of, .. } => vec![of],
            Op::MainTerm { p, rank_from, .. } => {
                let mut v = vec![p.as_str()];
                v.extend(rank_from.iter().map(String::as_str));
                v
            }
            Op::ExtraTerm { items } => vec![items],
            Op::BShift { table, rep, .. } => {
                let mut v = vec![table.as_str()];
                v.extend(rep.iter().map(String::as_str));
                v
            }
            Op::Blowup { exceptional, .. } => vec![exceptional],
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Row {
    pub label: String,
    pub step: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    /// Two series agree through the smaller order, or two tables agree exactly.
    Equal { left: String, right: String },
    /// Every coefficient is at most zero.
    Nonpositive { of: String },
}

#[derive(Clone, Debug)]
pub enum Value {
    Series(TruncatedSeries),
    Table(BettiTable),
    Strata { ambient: usize, strata: Vec<BetaStratum> },
    Rep { rep: NormalRep, relations: usize },
    Items(Vec<StratumContribution>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Series(_) => "series",
            Value::Table(_) => "table",
            Value::Strata { .. } => "strata",
            Value::Rep { .. } => "rep",
            Value::Items(_) => "items",
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let v = match self {
            Value::Series(s) => serde_json::to_value(s),
            Value::Table(t) => serde_json::to_value(t),
            Value::Strata { ambient, strata } => serde_json::to_value(serde_json::json!({
                "ambient": ambient,
                "count": strata.len(),
                "min_nonzero_codim": crate::strata::min_nonzero_codim(strata),
                "strata": strata,
            })),
            Value::Rep { rep, relations } => serde_json::to_value(serde_json::json!({
                "rep": rep,
                "dim": rep.dim(),
                "relations": relations,
            })),
            Value::Items(items) => serde_json::to_value(items),
        };
        v.expect("report values serialize")
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub id: String,
    pub op: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub cite: String,
    pub kind: String,
    pub value: serde_json::Value,
    pub outcomes: Vec<Outcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub label: String,
    pub step: String,
    pub table: BettiTable,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub step: String,
    pub op: String,
    pub cite: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    pub title: String,
    pub order: usize,
    pub passed: bool,
    pub rows: Vec<RowReport>,
    pub checks: Vec<Outcome>,
    pub steps: Vec<StepReport>,
    pub provenance: Vec<Provenance>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn failures(&self) -> Vec<&Outcome> {
        self.steps.iter().flat_map(|s| s.outcomes.iter()).chain(&self.checks).filter(|o| !o.passed).collect()
    }

    pub fn row(&self, label: &str) -> Option<&BettiTable> {
        self.rows.iter().find(|r| r.label == label).map(|r| &r.table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The rows as a LaTeX array with one column per even degree.
    pub fn to_latex(&self) -> String {
        let dim = self.rows.iter().map(|r| r.table.complex_dim()).max().unwrap_or(0);
        let odd = self.rows.iter().any(|r| !r.table.odd_vanishes());
        let degrees: Vec<usize> = (0..=2 * dim).filter(|j| odd || j % 2 == 0).collect();
        let mut out = String::new();
        let _ = writeln!(out, "% {}", self.title);
        let _ = writeln!(out, "\\begin{{array}}{{r|{}}}", "c".repeat(degrees.len()));
        let head: Vec<String> = degrees.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "j&{}\\\\\\hline", head.join("&"));
        for r in &self.rows {
            let cells: Vec<String> = degrees
                .iter()
                .map(|&j| r.table.betti().get(j).map_or(String::new(), |b| b.to_string()))
                .collect();
            let _ = writeln!(out, "\\text{{{}}}&{}\\\\", r.label, cells.join("&"));
        }
        out.push_str("\\end{array}\n");
        out
    }

    /// Drops series coefficients above degree `k` in the step values.
    pub fn truncate_series(&mut self, k: usize) {
        for s in &mut self.steps {
            if s.kind == "series" {
                if let Ok(series) = serde_json::from_value::<TruncatedSeries>(s.value.clone()) {
                    s.value = serde_json::to_value(series.truncate_at_most(k)).expect("series serializes");
                }
            }
        }
    }
}

pub fn parse(text: &str) -> Result<Scenario> {
    let sc: Scenario = toml::from_str(text).map_err(|e| Error::Parse(format!("scenario: {e}")))?;
    validate(&sc)?;
    Ok(sc)
}

/// A built-in name or a path to a scenario file.
pub fn load(name_or_path: &str) -> Result<Scenario> {
    match builtin(name_or_path) {
        Some(text) => parse(text),
        None => {
            let text = std::fs::read_to_string(Path::new(name_or_path))
                .map_err(|e| Error::Parse(format!("cannot read scenario {name_or_path:?}: {e}")))?;
            parse(&text)
        }
    }
}

fn validate(sc: &Scenario) -> Result<()> {
    let mut seen = HashMap::new();
    for (i, s) in sc.steps.iter().enumerate() {
        if seen.insert(s.id.as_str(), i).is_some() {
            return Err(Error::Parse(format!("duplicate step id {:?}", s.id)));
        }
        if s.op.is_declared() && s.cite.trim().is_empty() {
            return Err(invalid!("step {:?} declares a geometric input without a citation", s.id));
        }
    }
    for s in &sc.steps {
        for r in s.op.references() {
            if !seen.contains_key(r) {
                return Err(Error::Parse(format!("step {:?} refers to unknown step {r:?}", s.id)));
            }
        }
    }
    for r in &sc.rows {
        if !seen.contains_key(r.step.as_str()) {
            return Err(Error::Parse(format!("row {:?} refers to unknown step {:?}", r.label, r.step)));
        }
    }
    for c in &sc.checks {
        let refs: Vec<&str> = match c {
            CheckSpec::Equal { left, right } => vec![left, right],
            CheckSpec::Nonpositive { of } => vec![of],
        };
        for r in refs {
            if !seen.contains_key(r) {
                return Err(Error::Parse(format!("check refers to unknown step {r:?}")));
            }
        }
    }
    topological_order(sc).map(|_| ())
}

/// Kahn's algorithm, always taking the earliest ready step in file order.
fn topological_order(sc: &Scenario) -> Result<Vec<usize>> {
    let index: HashMap<&str, usize> = sc.steps.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
    let n = sc.steps.len();
    let mut indegree = vec![0usize; n];
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, s) in sc.steps.iter().enumerate() {
        for r in s.op.references() {
            let j = index[r];
            indegree[i] += 1;
            users[j].push(i);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &u in &users[i] {
            indegree[u] -= 1;
            if indegree[u] == 0 {
                ready.insert(u);
            }
        }
    }
    if order.len() != n {
        return Err(Error::Parse("scenario step graph has a cycle".into()));
    }
    Ok(order)
}

struct Env<'a> {
    values: HashMap<&'a str, Value>,
}

impl<'a> Env<'a> {
    fn get(&self, id: &str) -> Result<&Value> {
        self.values.get(id).ok_or_else(|| invalid!("step {id:?} has no value yet"))
    }

    fn series(&self, id: &str) -> Result<&TruncatedSeries> {
        match self.get(id)? {
            Value::Series(s) => Ok(s),
            v => Err(invalid!("step {id:?} is a {}, expected a series", v.kind())),
        }
    }

    fn table(&self, id: &str) -> Result<&BettiTable> {
        match self.get(id)? {
            Value::Table(t) => Ok(t),
            v => Err(invalid!("step {id:?} is a {}, expected a table", v.kind())),
        }
    }

    fn rep(&self, id: &str) -> Result<&NormalRep> {
        match self.get(id)? {
            Value::Rep { rep, .. } => Ok(rep),
            v => Err(invalid!("step {id:?} is a {}, expected a normal representation", v.kind())),
        }
    }

    fn items(&self, id: &str) -> Result<&[StratumContribution]> {
        match self.get(id)? {
            Value::Items(i) => Ok(i),
            v => Err(invalid!("step {id:?} is a {}, expected stratum items", v.kind())),
        }
    }
}

fn to_q_vec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| qi(x)).collect()
}

fn eval(step: &Step, order: usize, env: &Env) -> Result<Value> {
    Ok(match &step.op {
        Op::Strata { n, d } => {
            let ws = hypersurface_weights(*n, *d)?;
            Value::Strata { ambient: n + 1, strata: instability_index_set(&ws, Weyl::FullSymmetric)? }
        }
        Op::NormalRep { form, torus, extra_tangents } => {
            let nvars = torus.first().map(Vec::len).ok_or_else(|| invalid!("normal_rep needs a torus basis"))?;
            let f = MultiPoly::parse(form, nvars)?;
            let extra = extra_tangents.iter().map(|e| MultiPoly::parse(e, nvars)).collect::<Result<Vec<_>>>()?;
            let basis: Vec<Vec<Q>> = torus.iter().map(|v| to_q_vec(v)).collect();
            let cw = coordinate_weights(&basis)?;
            let split = normal_rep_of(&f, &cw, &extra, torus.len())?;
            Value::Rep { rep: split.normal, relations: df_relation_count(&f) }
        }
        Op::SliceStrata { rep, model, positive } => {
            let rep = env.rep(rep)?;
            let model = match model {
                SliceModel::Torus => GroupModel::Torus,
                SliceModel::RankOne => {
                    if positive.is_empty() {
                        return Err(invalid!("rank-one slice model needs a positive direction"));
                    }
                    GroupModel::RankOne { positive: to_q_vec(positive) }
                }
            };
            let ambient = rep.weights.first().map_or(0, Vec::len);
            Value::Strata { ambient, strata: normal_rep_strata(rep, &model)? }
        }
        Op::Items { strata, series } => {
            let Value::Strata { ambient, strata } = env.get(strata)? else {
                return Err(invalid!("items need a strata step"));
            };
            let by_codim: BTreeMap<usize, &TruncatedSeries> =
                series.iter().map(|(d, s)| Ok((*d, env.series(s)?))).collect::<Result<_>>()?;
            let nonzero: Vec<&BetaStratum> = strata.iter().filter(|s| !s.is_zero()).collect();
            let betas: Vec<Vec<Q>> = nonzero.iter().map(|s| s.beta.clone()).collect();
            let mut items = Vec::new();
            for s in nonzero {
                let d = usize::try_from(s.codim_expected)
                    .ok()
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| Error::Check(format!("stratum with codimension {} below 1", s.codim_expected)))?;
                if 2 * d > order {
                    continue;
                }
                let sr = by_codim
                    .get(&d)
                    .ok_or_else(|| invalid!("step {:?} has no declared series for codimension {d}", step.id))?;
                let w = weyl_fiber_count(&s.beta, *ambient, &betas)?;
                items.push(StratumContribution::new(d, w, (*sr).clone(), step.cite.clone())?);
            }
            Value::Items(items)
        }
        Op::Semistable { ambient_dim, exponents, items } => {
            let items = match items {
                Some(i) => env.items(i)?.to_vec(),
                None => Vec::new(),
            };
            Value::Series(semistable_series(*ambient_dim, exponents, &items, order)?)
        }
        Op::GfExpand { factors } => Value::Series(gf_expand(factors, order)?),
        Op::Projective { dim } => Value::Series(projective_space(*dim, order)),
        Op::Molien { generators, degree } => {
            let gens: Vec<Vec<Vec<Q>>> = generators.iter().map(|m| m.iter().map(|r| to_q_vec(r)).collect()).collect();
            let group = close_group(&gens, DEFAULT_GROUP_CAP)?;
            Value::Series(molien(&group, *degree, order)?)
        }
        Op::Polynomial { text } => Value::Series(parse_polynomial(text, order)?),
        Op::Table { even } => Value::Table(BettiTable::from_even(even)?),
        Op::Product { of } => {
            let first = of.first().ok_or_else(|| invalid!("empty product"))?;
            match env.get(first)? {
                Value::Table(_) => {
                    let mut t = BettiTable::point();
                    for r in of {
                        t = t.product(env.table(r)?);
                    }
                    Value::Table(t)
                }
                _ => {
                    let mut s = TruncatedSeries::one(order);
                    for r in of {
                        s = &s * env.series(r)?;
                    }
                    Value::Series(s)
                }
            }
        }
        Op::Lincomb { terms } => {
            let resolved: Vec<(Q, usize, &TruncatedSeries)> =
                terms.iter().map(|(c, k, r)| Ok((qi(*c), *k, env.series(r)?))).collect::<Result<_>>()?;
            Value::Series(lincomb(&resolved)?.truncate_at_most(order))
        }
        Op::Complete { of, dim } => Value::Table(duality_complete(env.series(of)?, *dim)?),
        Op::MainTerm { p, rank, rank_from } => {
            let r = match (rank, rank_from) {
                (Some(r), None) => *r,
                (None, Some(rep)) => env.rep(rep)?.dim(),
                _ => return Err(invalid!("main_term needs exactly one of rank and rank_from")),
            };
            Value::Series(main_term(env.series(p)?, r, order)?)
        }
        Op::ExtraTerm { items } => Value::Series(extra_term(env.items(items)?, order)?),
        Op::BShift { table, rep, group_dim } => {
            let t = env.table(table)?;
            if let Some(rep) = rep {
                let c = env.rep(rep)?.dim().checked_sub(1 + group_dim);
                if c != Some(t.complex_dim()) {
                    return Err(Error::Check(format!(
                        "table of dimension {} does not match dim N - 1 - dim R = {:?}",
                        t.complex_dim(),
                        c
                    )));
                }
            }
            Value::Series(b_shift(t, order)?)
        }
        Op::Blowup { exceptional, dim } => {
            Value::Series(blowup_correction(env.table(exceptional)?, *dim)?.truncate_at_most(order))
        }
        Op::Boundary { factors, trivial_symmetries } => {
            let spec = BoundarySpec { factors: factors.clone(), extra: vec![], trivial_symmetries: trivial_symmetries.clone() };
            Value::Table(boundary_betti(&spec, DEFAULT_GROUP_CAP)?.table)
        }
        Op::Wreath { of, n } => match env.get(of)? {
            Value::Table(t) => Value::Table(wreath_symmetrize_table(t, *n)?),
            Value::Series(s) => Value::Series(wreath_symmetrize(s, *n)?.truncate_at_most(order)),
            v => return Err(invalid!("cannot symmetrize a {}", v.kind())),
        },
    })
}

fn ints(xs: &[Q]) -> Option<Vec<i64>> {
    xs.iter().map(to_i64).collect()
}

fn outcome(name: &str, passed: bool, detail: String) -> Outcome {
    Outcome { name: name.to_string(), passed, detail }
}

fn expectations(step: &Step, value: &Value) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let mismatch = |what: &str| invalid!("step {:?}: {what} does not apply to a {}", step.id, value.kind());
    if let Value::Table(t) = value {
        let r = duality_check(t);
        out.push(outcome("duality", r.passed, format!("{:?}", r.first_violation)));
    }
    if let Some(exp) = &step.expect {
        let got = match value {
            Value::Series(s) => ints(s.coeffs()),
            Value::Table(t) => Some(t.betti().to_vec()),
            _ => return Err(mismatch("expect")),
        };
        out.push(outcome("expect", got.as_ref() == Some(exp), format!("expected {exp:?}, got {got:?}")));
    }
    if let Some(exp) = &step.expect_even {
        let (even, odd_zero) = match value {
            Value::Series(s) => (ints(&s.even_coeffs()), s.odd_part_vanishes()),
            Value::Table(t) => (Some(t.even()), t.odd_vanishes()),
            _ => return Err(mismatch("expect_even")),
        };
        let passed = even.as_ref() == Some(exp) && odd_zero;
        out.push(outcome("expect_even", passed, format!("expected {exp:?}, got {even:?} (odd vanish: {odd_zero})")));
    }
    if let Some(exp) = step.expect_min_codim {
        let Value::Strata { strata, .. } = value else { return Err(mismatch("expect_min_codim")) };
        let got = crate::strata::min_nonzero_codim(strata);
        out.push(outcome("expect_min_codim", got == Some(exp), format!("expected {exp}, got {got:?}")));
    }
    if let Some(exp) = &step.expect_codim_counts {
        let Value::Strata { strata, .. } = value else { return Err(mismatch("expect_codim_counts")) };
        let got: Vec<(i64, usize)> = exp
            .iter()
            .map(|&(d, _)| (d, strata.iter().filter(|s| !s.is_zero() && s.codim_expected == d).count()))
            .collect();
        out.push(outcome("expect_codim_counts", &got == exp, format!("expected {exp:?}, got {got:?}")));
    }
    if let Some(exp) = &step.expect_w {
        let Value::Items(items) = value else { return Err(mismatch("expect_w")) };
        let mut passed = true;
        for &(d, w) in exp {
            let of_d: Vec<usize> = items.iter().filter(|i| i.codim == d).map(|i| i.weyl_share).collect();
            passed &= !of_d.is_empty() && of_d.iter().all(|&x| x == w);
        }
        let got: Vec<(usize, usize)> = items.iter().map(|i| (i.codim, i.weyl_share)).collect();
        out.push(outcome("expect_w", passed, format!("expected {exp:?}, got {got:?}")));
    }
    if let Some(exp) = step.expect_dim {
        let got = match value {
            Value::Rep { rep, .. } => rep.dim(),
            Value::Table(t) => t.complex_dim(),
            Value::Items(i) => i.len(),
            _ => return Err(mismatch("expect_dim")),
        };
        out.push(outcome("expect_dim", got == exp, format!("expected {exp}, got {got}")));
    }
    if let Some(exp) = step.expect_relations {
        let Value::Rep { relations, .. } = value else { return Err(mismatch("expect_relations")) };
        out.push(outcome("expect_relations", *relations == exp, format!("expected {exp}, got {relations}")));
    }
    Ok(out)
}

fn run_check(c: &CheckSpec, env: &Env) -> Result<Outcome> {
    Ok(match c {
        CheckSpec::Equal { left, right } => {
            let name = format!("{left} = {right}");
            match (env.get(left)?, env.get(right)?) {
                (Value::Series(a), Value::Series(b)) => {
                    let o = a.order().min(b.order());
                    let (a, b) = (a.truncate(o)?, b.truncate(o)?);
                    outcome(&name, a == b, format!("{a} vs {b} mod t^{}", o + 1))
                }
                (Value::Table(a), Value::Table(b)) => outcome(&name, a == b, format!("{:?} vs {:?}", a.betti(), b.betti())),
                (a, b) => return Err(invalid!("cannot compare a {} with a {}", a.kind(), b.kind())),
            }
        }
        CheckSpec::Nonpositive { of } => {
            let s = env.series(of)?;
            outcome(&format!("{of} <= 0"), s.is_nonpositive(), format!("{s}"))
        }
    })
}

pub fn run(sc: &Scenario) -> Result<Report> {
    let order = topological_order(sc)?;
    let mut env = Env { values: HashMap::new() };
    let mut reports: Vec<Option<StepReport>> = vec![None; sc.steps.len()];
    for i in order {
        let step = &sc.steps[i];
        let step_order = step.order.unwrap_or(sc.order);
        let value = eval(step, step_order, &env).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("step {:?}: {m}", step.id)),
            Error::Check(m) => Error::Check(format!("step {:?}: {m}", step.id)),
            Error::Resource(m) => Error::Resource(format!("step {:?}: {m}", step.id)),
            Error::Invalid(m) => Error::Invalid(format!("step {:?}: {m}", step.id)),
        })?;
        let outcomes = expectations(step, &value)?;
        reports[i] = Some(StepReport {
            id: step.id.clone(),
            op: step.op.name().to_string(),
            cite: step.cite.clone(),
            kind: value.kind().to_string(),
            value: value.to_json(),
            outcomes,
        });
        env.values.insert(step.id.as_str(), value);
    }
    let checks = sc.checks.iter().map(|c| run_check(c, &env)).collect::<Result<Vec<_>>>()?;
    let rows = sc
        .rows
        .iter()
        .map(|r| Ok(RowReport { label: r.label.clone(), step: r.step.clone(), table: env.table(&r.step)?.clone() }))
        .collect::<Result<Vec<_>>>()?;
    let steps: Vec<StepReport> = reports.into_iter().map(|r| r.expect("every step ran")).collect();
    let provenance = sc
        .steps
        .iter()
        .filter(|s| !s.cite.is_empty())
        .map(|s| Provenance { step: s.id.clone(), op: s.op.name().to_string(), cite: s.cite.clone() })
        .collect();
    let mut report = Report {
        scenario: sc.name.clone(),
        title: sc.title.clone(),
        order: sc.order,
        passed: true,
        rows,
        checks,
        steps,
        provenance,
        notes: sc.notes.clone(),
    };
    report.passed = report.failures().is_empty();
    Ok(report)
}

pub fn run_named(name_or_path: &str) -> Result<Report> {
    run(&load(name_or_path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"
name = "tiny"
title = "tiny"
order = 4

[[step]]
id = "p"
op = "projective"
dim = 1
expect_even = [1, 1, 0]

[[step]]
id = "t"
op = "complete"
of = "p"
dim = 1
expect_even = [1, 1]

[[row]]
label = "line"
step = "t"
"#;

    #[test]
    fn tiny_scenario_runs() {
        let r = run(&parse(TINY).unwrap()).unwrap();
        assert!(r.passed, "{:?}", r.failures());
        assert_eq!(r.row("line").unwrap().even(), vec![1, 1]);
        assert!(r.to_latex().contains("\\text{line}&1&1\\\\"));
    }

    #[test]
    fn wrong_expectation_fails_without_error() {
        let text = TINY.replace("expect_even = [1, 1]", "expect_even = [1, 2]");
        let r = run(&parse(&text).unwrap()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failures().len(), 1);
    }

    #[test]
    fn validation_errors() {
        let dup = TINY.replace("id = \"t\"", "id = \"p\"");
        assert!(matches!(parse(&dup), Err(Error::Parse(_))));
        let unknown = TINY.replace("of = \"p\"", "of = \"q\"");
        assert!(matches!(parse(&unknown), Err(Error::Parse(_))));
        let uncited = TINY.replace("op = \"projective\"\ndim = 1", "op = \"polynomial\"\ntext = \"1+t^2\"");
        assert!(matches!(parse(&uncited), Err(Error::Invalid(_))));
        assert!(matches!(parse("name = 1"), Err(Error::Parse(_))));
    }

    #[test]
    fn cycles_are_rejected() {
        let text = r#"
name = "c"
title = "c"
order = 2
[[step]]
id = "a"
op = "product"
of = ["b"]
[[step]]
id = "b"
op = "product"
of = ["a"]
"#;
        assert!(matches!(parse(text), Err(Error::Parse(m)) if m.contains("cycle")));
    }

    #[test]
    fn builtins_parse() {
        for (name, text) in BUILTIN {
            let sc = parse(text).unwrap();
            assert_eq!(&sc.name, name);
        }
    }
}
