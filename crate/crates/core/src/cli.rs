//! Experiment runner: JSON config in, deterministic CSV / JSON / plot data out.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{Dyadic, Interval};
use crate::completion::PrecisionPolicy;
use crate::contfrac::{convergent_stream, growth_check, PartialQuotients, XiSource};
use crate::error::{Error, Result};
use crate::extremal::{construct, cover, exponent_profile, ratio_limit_check, Construction, GoldenRatio, TraceRecord, Verdict};
use crate::logmag::LogMag;
use crate::oracle::{default_grid, dependence_sweep, ladder, scan_candidates, HeightBound, Oracle};
use crate::ring::{element_from_json, Domain, DomainKind, RingElement};

pub const TOOL: &str = concat!("fibext ", env!("CARGO_PKG_VERSION"));

pub const CSV_HEADER: &str = "i,lambda_lo,lambda_hi,mu_lo,mu_hi,log_r_lo,log_r_hi,exp_est_lo,exp_est_hi,det3,cert";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: DomainKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    /// `log X_max`; negative means an empty range.
    pub max_log_height: f64,
    #[serde(default)]
    pub primitive_only: bool,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<u64>,
}

fn default_grid_points() -> usize {
    40
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum C2Choice {
    /// `c₃ c₄^{1/γ} / c₅`
    #[default]
    Literal,
    /// `c₃ c₅ / c₄^{1/γ}`
    Sound,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default)]
    pub c2: C2Choice,
    #[serde(default = "default_cover_points")]
    pub cover_points: usize,
    #[serde(default = "default_i_min")]
    pub i_min: usize,
}

fn default_cover_points() -> usize {
    100
}

fn default_i_min() -> usize {
    12
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { c2: C2Choice::Literal, cover_points: 100, i_min: 12 }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub a: Value,
    pub b: Value,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default = "default_convergents")]
    pub convergents: usize,
}

fn default_convergents() -> usize {
    30
}

/// A validated config.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub domain: Domain,
    pub a: RingElement,
    pub b: RingElement,
    pub policy: PrecisionPolicy,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Parse elements and reject `a = b` or `ρ ≤ 1` up front.
    pub fn validate(self, cap_override: Option<u64>) -> Result<Experiment> {
        let domain = Domain::from_kind(self.domain.kind, self.domain.p)?;
        let a = element_from_json(domain, &self.a)?;
        let b = element_from_json(domain, &self.b)?;
        if a == b {
            return Err(Error::EqualQuotients);
        }
        PartialQuotients::fibonacci(&a, &b)?;
        if self.n < 6 {
            return Err(Error::Config(format!("N must be at least 6, got {}", self.n)));
        }
        let policy = match cap_override.or(self.precision_cap) {
            Some(bits) => PrecisionPolicy::with_cap_bits(bits),
            None => PrecisionPolicy::default(),
        };
        Ok(Experiment { config: self, domain, a, b, policy })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Construct,
    Oracle,
    Verify,
    Convergents,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Construct => "construct",
            Command::Oracle => "oracle",
            Command::Verify => "verify",
            Command::Convergents => "convergents",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub unknown: usize,
    pub fail: usize,
}

impl Summary {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Unknown => self.unknown += 1,
            Verdict::Fail => self.fail += 1,
        }
    }

    /// 0 clean, 1 any failure, 2 unknowns under `--strict`.
    pub fn exit_code(&self, strict: bool) -> i32 {
        if self.fail > 0 {
            1
        } else if strict && self.unknown > 0 {
            2
        } else {
            0
        }
    }
}

/// A real number rendered with 17 significant digits, rounded outward.
fn lower(d: &Dyadic) -> f64 {
    let v = d.to_f64();
    if v.is_finite() && &Dyadic::from_f64(v) > d {
        next_toward(v, f64::NEG_INFINITY)
    } else {
        v
    }
}

fn upper(d: &Dyadic) -> f64 {
    let v = d.to_f64();
    if v.is_finite() && &Dyadic::from_f64(v) < d {
        next_toward(v, f64::INFINITY)
    } else {
        v
    }
}

fn next_toward(v: f64, dir: f64) -> f64 {
    if v == 0.0 {
        return if dir > 0.0 { f64::from_bits(1) } else { -f64::from_bits(1) };
    }
    let bits = v.to_bits();
    let up = (dir > v) == (v > 0.0);
    f64::from_bits(if up { bits + 1 } else { bits - 1 })
}

fn num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Bracket {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl Bracket {
    fn of_interval(iv: &Interval) -> Bracket {
        Bracket { lo: Some(lower(iv.lo())), hi: Some(upper(iv.hi())) }
    }

    /// `None` stands for `−∞`.
    fn of_log(l: &LogMag) -> Bracket {
        Bracket { lo: l.lo().map(lower), hi: l.hi().map(upper) }
    }

    fn none() -> Bracket {
        Bracket { lo: None, hi: None }
    }

    fn csv(&self, neg_inf_when_missing: bool) -> (String, String) {
        let f = |v: Option<f64>| match v {
            Some(x) => num(x),
            None if neg_inf_when_missing => "-inf".into(),
            None => String::new(),
        };
        (f(self.lo), f(self.hi))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordRow {
    pub i: usize,
    pub lambda: Bracket,
    pub mu: Bracket,
    pub log_r: Bracket,
    pub exp_est: Bracket,
    pub det3: Option<String>,
    pub cert: Verdict,
}

impl RecordRow {
    pub fn from_record(r: &TraceRecord) -> RecordRow {
        RecordRow {
            i: r.index,
            lambda: Bracket::of_log(&r.lambda),
            mu: Bracket::of_log(&r.mu),
            log_r: r.log_r.as_ref().map_or_else(Bracket::none, Bracket::of_interval),
            exp_est: r.exp_est.as_ref().map_or_else(Bracket::none, Bracket::of_interval),
            det3: r.det3.as_ref().map(|d| d.to_string()),
            cert: r.cert,
        }
    }
}

pub fn records_csv(rows: &[RecordRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let (l0, l1) = r.lambda.csv(true);
        let (m0, m1) = r.mu.csv(true);
        let (r0, r1) = r.log_r.csv(false);
        let (e0, e1) = r.exp_est.csv(false);
        let det = r.det3.as_deref().map(csv_field).unwrap_or_default();
        writeln!(out, "{},{l0},{l1},{m0},{m1},{r0},{r1},{e0},{e1},{det},{}", r.i, r.cert.as_str()).unwrap();
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantsJson {
    pub rho: f64,
    pub c0: f64,
    pub xi_abs: f64,
    pub c3: f64,
    pub log_c3: Bracket,
    pub log_theta: Bracket,
    pub log_c4: f64,
    pub log_c5: f64,
    pub log_c2: f64,
    pub log_c2_sound: f64,
    pub band_entry: Option<usize>,
    pub parity: String,
    pub sandwich_violations: Vec<usize>,
}

impl ConstantsJson {
    fn of(run: &Construction) -> ConstantsJson {
        let c = &run.constants;
        ConstantsJson {
            rho: lower(&c.rho),
            c0: upper(&c.c0),
            xi_abs: upper(&c.xi_abs),
            c3: upper(&c.c3),
            log_c3: Bracket::of_interval(&c.log_c3),
            log_theta: Bracket::of_log(&c.log_theta),
            log_c4: lower(&c.log_c4),
            log_c5: upper(&c.log_c5),
            log_c2: lower(&c.log_c2),
            log_c2_sound: lower(&c.log_c2_sound),
            band_entry: c.band_entry,
            parity: format!("{:?}", run.parity),
            sandwich_violations: run.sandwich_violations.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverRow {
    pub log_x: f64,
    pub index: usize,
    pub height: Verdict,
    pub error: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverSummary {
    pub log_c2: f64,
    pub summary: Summary,
    pub rows: Vec<CoverRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyJson {
    pub c2_used: C2Choice,
    pub convergents_checked: usize,
    pub growth_min_log_ratio: f64,
    pub ratio_max_abs_log_deviation: f64,
    pub ratio_within_1pct: Verdict,
    pub exponent_within_001: Verdict,
    pub cover_literal: CoverSummary,
    pub cover_sound: CoverSummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderRow {
    pub log_x: Bracket,
    pub log_ell: Bracket,
    pub x0: String,
    pub x1: String,
    pub x2: String,
    pub primitive: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRowJson {
    pub log_x: Bracket,
    pub log_ell: Bracket,
    pub log_scaled: Bracket,
}

#[derive(Clone, Debug, Serialize)]
pub struct AgreementRow {
    pub i: usize,
    pub constructed: String,
    pub witness: String,
    pub agrees: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleJson {
    pub candidates: usize,
    pub exhaustive: bool,
    pub ladder: Vec<LadderRow>,
    pub scan: Vec<ScanRowJson>,
    pub floor_log: Option<f64>,
    pub c1_estimate_log: Option<f64>,
    pub limsup_proxy_log: Option<f64>,
    pub degrading: bool,
    pub stabilizes_at: Option<usize>,
    pub agreement: Vec<AgreementRow>,
    pub dependence_checked: usize,
    pub dependence_skipped: usize,
    pub dependence_violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergentRow {
    pub j: usize,
    pub p: String,
    pub q: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub command: Command,
    pub config: ExperimentConfig,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsJson>,
    pub records: Vec<RecordRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub convergents: Vec<ConvergentRow>,
}

impl RunReport {
    fn empty(command: Command, ex: &Experiment) -> RunReport {
        RunReport {
            tool: TOOL,
            command,
            config: ex.config.clone(),
            summary: Summary::default(),
            constants: None,
            records: vec![],
            verify: None,
            oracle: None,
            convergents: vec![],
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn with_records(command: Command, ex: &Experiment, run: &Construction) -> RunReport {
    let mut rep = RunReport::empty(command, ex);
    for r in &run.records {
        rep.summary.add(r.cert);
    }
    // θ ≠ 0 is certified by construction; record it as one more certificate.
    rep.summary.add(Verdict::Pass);
    rep.records = run.records.iter().map(RecordRow::from_record).collect();
    rep.constants = Some(ConstantsJson::of(run));
    rep
}

pub fn run_construct(ex: &Experiment) -> Result<RunReport> {
    let run = construct(&ex.a, &ex.b, ex.config.n, &ex.policy)?;
    Ok(with_records(Command::Construct, ex, &run))
}

/// `count` log-uniform points strictly inside `(log X_2, log X_{N−1})`.
pub fn cover_grid(run: &Construction, count: usize) -> Vec<Interval> {
    let lo = run.log_height(2).mid_f64();
    let hi = run.log_height(run.n - 1).mid_f64();
    (0..count)
        .map(|k| {
            let t = lo + (hi - lo) * (k as f64 + 0.5) / count as f64;
            Interval::point(Dyadic::from_f64(t))
        })
        .collect()
}

fn cover_all(run: &Construction, grid: &[Interval], log_c2: &Dyadic, policy: &PrecisionPolicy) -> Result<CoverSummary> {
    let mut summary = Summary::default();
    let mut rows = Vec::new();
    for x in grid {
        let c = cover(x, run, log_c2, policy)?;
        summary.add(c.verdict());
        rows.push(CoverRow { log_x: x.mid_f64(), index: c.index, height: c.height, error: c.error });
    }
    Ok(CoverSummary { log_c2: lower(log_c2), summary, rows })
}

pub fn run_verify(ex: &Experiment) -> Result<RunReport> {
    let run = construct(&ex.a, &ex.b, ex.config.n, &ex.policy)?;
    let mut rep = with_records(Command::Verify, ex, &run);
    let vc = &ex.config.verify;

    let convs = convergent_stream(&run.pq, ex.config.convergents)?;
    let growth = growth_check(&run.pq, &convs)?;
    rep.summary.add(Verdict::Pass);

    let i_min = vc.i_min.min(ex.config.n);
    let ratio = ratio_limit_check(&run.records, &run.constants.log_theta, i_min.max(3))?;
    let ratio_ok = Verdict::from_checks(ratio.within_relative(0.01), false);
    rep.summary.add(ratio_ok);

    let inv = GoldenRatio::new().inv;
    let tol = Interval::point(Dyadic::from_f64(0.01));
    let (lo, hi) = (inv.sub(&tol), inv.add(&tol));
    let mut exp_ok = Verdict::Pass;
    for (i, e) in exponent_profile(&run.records) {
        if i >= i_min {
            let holds = lo.hi() <= e.lo() && e.hi() <= hi.lo();
            let refuted = e.hi() < lo.lo() || e.lo() > hi.hi();
            exp_ok = exp_ok.and(Verdict::from_checks(holds, refuted));
        }
    }
    rep.summary.add(exp_ok);

    let grid = cover_grid(&run, vc.cover_points);
    let cover_literal = cover_all(&run, &grid, run.c2_literal(), &ex.policy)?;
    let cover_sound = cover_all(&run, &grid, run.c2_sound(), &ex.policy)?;
    let counted = match vc.c2 {
        C2Choice::Literal => &cover_literal.summary,
        C2Choice::Sound => &cover_sound.summary,
    };
    rep.summary.pass += counted.pass;
    rep.summary.unknown += counted.unknown;
    rep.summary.fail += counted.fail;

    rep.verify = Some(VerifyJson {
        c2_used: vc.c2,
        convergents_checked: convs.len(),
        growth_min_log_ratio: growth.min_ratio_log(),
        ratio_max_abs_log_deviation: ratio.max_abs.to_f64(),
        ratio_within_1pct: ratio_ok,
        exponent_within_001: exp_ok,
        cover_literal,
        cover_sound,
    });
    Ok(rep)
}

/// `log X_max` as an exact bound: `deg ≤ floor(h)` or `N ≤ floor(e^{2h})`.
pub fn bound_for(domain: Domain, h: f64) -> Option<HeightBound> {
    if h < 0.0 || !h.is_finite() {
        return None;
    }
    Some(match domain {
        Domain::PolyFp(_) => HeightBound::Degree(h.floor() as u32),
        _ => HeightBound::from_real(h.exp()),
    })
}

pub fn run_oracle(ex: &Experiment) -> Result<RunReport> {
    let oc = ex
        .config
        .oracle
        .clone()
        .ok_or_else(|| Error::Config("oracle command needs an \"oracle\" section".into()))?;
    let pq = PartialQuotients::fibonacci(&ex.a, &ex.b)?;
    let mut oracle = Oracle::new(XiSource { pq }, ex.policy).primitive_only(oc.primitive_only)?;
    if let Some(l) = oc.limit {
        oracle.limit = l as u128;
    }
    let mut rep = RunReport::empty(Command::Oracle, ex);
    let Some(bound) = bound_for(ex.domain, oc.max_log_height) else {
        rep.oracle = Some(OracleJson {
            candidates: 0,
            exhaustive: true,
            ladder: vec![],
            scan: vec![],
            floor_log: None,
            c1_estimate_log: None,
            limsup_proxy_log: None,
            degrading: false,
            stabilizes_at: None,
            agreement: vec![],
            dependence_checked: 0,
            dependence_skipped: 0,
            dependence_violations: 0,
        });
        return Ok(rep);
    };

    let cands = oracle.search(&bound)?;
    let steps = ladder(&oracle, &cands)?;

    let grid: Vec<HeightBound> = default_grid(ex.domain, oc.max_log_height, oc.grid_points)
        .into_iter()
        .filter(|g| g.log().hi_f64() <= bound.log().hi_f64())
        .collect();

    // Dependence criterion at every ladder and grid height.
    let mut heights: Vec<HeightBound> = steps.iter().map(|p| p.bound.clone()).chain(grid.iter().cloned()).collect();
    heights.dedup();
    let dep = dependence_sweep(&oracle, &cands, &heights, 6)?;
    for _ in 0..dep.checked {
        rep.summary.add(Verdict::Pass);
    }
    for _ in 0..dep.violations {
        rep.summary.add(Verdict::Fail);
    }

    // Agreement with the construction at every constructed height in range.
    let run = construct(&ex.a, &ex.b, ex.config.n, &ex.policy)?;
    let mut agreement = Vec::new();
    for i in 1..=run.n {
        let x = run.stream.get(i).triple();
        let at = HeightBound::of(&x.x0);
        if !bound.admits(&x.x0) {
            break;
        }
        if oracle.primitive_only && !crate::ring::is_primitive(&[x.x0.clone(), x.x1.clone(), x.x2.clone()])? {
            continue;
        }
        let best = oracle.best_among(&cands, &at)?.expect("x_i itself is a candidate");
        let agrees = Verdict::from_checks(best.triple.equal_up_to_unit(&x), !best.triple.equal_up_to_unit(&x));
        rep.summary.add(agrees);
        agreement.push(AgreementRow { i, constructed: x.to_string(), witness: best.triple.to_string(), agrees });
    }

    let scan = scan_candidates(&oracle, &cands, &grid)?;
    let floor_ok = Verdict::from_checks(scan.rows.iter().all(|r| r.log_ell.is_bounded()), false);
    if !scan.rows.is_empty() {
        rep.summary.add(floor_ok);
    }

    rep.oracle = Some(OracleJson {
        candidates: cands.len(),
        exhaustive: true,
        ladder: steps
            .iter()
            .map(|p| LadderRow {
                log_x: Bracket::of_log(&p.log_x),
                log_ell: Bracket::of_log(&p.log_ell),
                x0: p.witness.x0.to_string(),
                x1: p.witness.x1.to_string(),
                x2: p.witness.x2.to_string(),
                primitive: p.primitive,
            })
            .collect(),
        scan: scan
            .rows
            .iter()
            .map(|r| ScanRowJson {
                log_x: Bracket::of_interval(&r.log_x),
                log_ell: Bracket::of_log(&r.log_ell),
                log_scaled: Bracket::of_interval(&r.log_scaled),
            })
            .collect(),
        floor_log: scan.floor.as_ref().map(lower),
        c1_estimate_log: scan.c1_estimate.as_ref().map(lower),
        limsup_proxy_log: scan.limsup_proxy.as_ref().map(upper),
        degrading: scan.degrading,
        stabilizes_at: scan.stabilizes_at,
        agreement,
        dependence_checked: dep.checked,
        dependence_skipped: dep.skipped,
        dependence_violations: dep.violations,
    });
    Ok(rep)
}

pub fn run_convergents(ex: &Experiment) -> Result<RunReport> {
    let pq = PartialQuotients::fibonacci(&ex.a, &ex.b)?;
    let convs = convergent_stream(&pq, ex.config.convergents)?;
    let mut rep = RunReport::empty(Command::Convergents, ex);
    rep.summary.add(Verdict::Pass);
    rep.convergents = convs.iter().map(|c| ConvergentRow { j: c.j, p: c.p.to_string(), q: c.q.to_string() }).collect();
    Ok(rep)
}

pub fn run(command: Command, ex: &Experiment) -> Result<RunReport> {
    match command {
        Command::Construct => run_construct(ex),
        Command::Oracle => run_oracle(ex),
        Command::Verify => run_verify(ex),
        Command::Convergents => run_convergents(ex),
    }
}

/// Two columns: `log X` and `ℓ(X)·X^{1/γ}`.
pub fn plot_data(o: &OracleJson) -> String {
    let mut out = String::from("# X_log ell_times_X_gamma\n");
    for r in &o.scan {
        let mid = |b: &Bracket| (b.lo.unwrap_or(f64::NEG_INFINITY) + b.hi.unwrap_or(f64::NEG_INFINITY)) / 2.0;
        writeln!(out, "{} {}", num(mid(&r.log_x)), num(mid(&r.log_scaled).exp())).unwrap();
    }
    out
}

pub fn ladder_csv(o: &OracleJson) -> String {
    let mut out = String::from("log_x_lo,log_x_hi,log_ell_lo,log_ell_hi,x0,x1,x2,primitive\n");
    for r in &o.ladder {
        let (a, b) = r.log_x.csv(true);
        let (c, d) = r.log_ell.csv(true);
        let prim = r.primitive.map_or(String::new(), |p| p.to_string());
        writeln!(out, "{a},{b},{c},{d},{},{},{},{prim}", csv_field(&r.x0), csv_field(&r.x1), csv_field(&r.x2)).unwrap();
    }
    out
}

pub fn convergents_csv(rows: &[ConvergentRow]) -> String {
    let mut out = String::from("j,p,q\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.j, csv_field(&r.p), csv_field(&r.q)).unwrap();
    }
    out
}

/// Write every artifact of a report into `dir`; returns the paths written.
pub fn export(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files: Vec<(String, String)> = vec![(format!("{}.json", report.command.name()), report.to_json())];
    if !report.records.is_empty() {
        files.push(("trace.csv".into(), records_csv(&report.records)));
    }
    if let Some(o) = &report.oracle {
        files.push(("ladder.csv".into(), ladder_csv(o)));
        files.push(("scan.dat".into(), plot_data(o)));
    }
    if !report.convergents.is_empty() {
        files.push(("convergents.csv".into(), convergents_csv(&report.convergents)));
    }
    let mut written = Vec::new();
    for (name, body) in files {
        let p = dir.join(name);
        fs::write(&p, body)?;
        written.push(p);
    }
    Ok(written)
}
