//! Library side of the `weaving` command-line tool: state files, the four
//! commands, and their JSON/CSV reports.
//!
//! All reported numbers are rounded to 12 significant digits before they
//! are stored in a report, so the emitted JSON parses back to exactly the
//! values held in memory.

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::closed_forms::{cf_scaling_sweep, ClosedFormFamily};
use crate::correlations::{
    neural_complexity, profile_with_cache, weaving, FillPolicy, SearchMode, SubsetEntropyCache,
    WeightRule,
};
use crate::error::{arg, Error, Result};
use crate::families::StateFamily;
use crate::limits::max_enum_n;
use crate::properties::{run_suite, SuiteConfig, SuiteReport};
use crate::state::{DensityState, ProbTable, Repr, C64};
use crate::VERSION;

pub const UNITS: &str = "bits";
/// Closed form and matrix pipeline must agree to this many bits.
pub const AGREEMENT_TOL: f64 = 1e-8;
/// Largest N for which `table` also runs the matrix pipeline.
pub const TABLE_MATRIX_MAX_N: usize = 8;

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn sig12_all(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(sig12).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
    Classical,
}

/// On-disk state description (UTF-8 JSON).
///
/// * `pure`: `payload` is a list of `[re, im]` amplitudes.
/// * `mixed`: `payload` is the density matrix, row-major, either as a flat
///   list of `[re, im]` entries or as a list of rows.
/// * `classical`: `payload` maps digit strings (one character `'0'..'9'` per
///   subsystem, radix `dims[i]`) to probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFileSpec {
    pub dims: Vec<usize>,
    pub kind: StateKind,
    pub payload: Value,
}

fn complex_at(v: &Value, ctx: &str) -> Result<C64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(Error::Parse(format!("{ctx}: [re, im] entries must be numbers"))),
        },
        _ => Err(Error::Parse(format!("{ctx}: expected a [re, im] pair"))),
    }
}

impl StateFileSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state file: {e}")))
    }

    pub fn to_state(&self) -> Result<DensityState> {
        let dims = self.dims.clone();
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::Parse(format!("dims: {dims:?} must be a nonempty list of values >= 2")));
        }
        let dim = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        match self.kind {
            StateKind::Pure => {
                let items = self.payload.as_array().ok_or_else(|| {
                    Error::Parse("payload: pure states need a list of [re, im] amplitudes".into())
                })?;
                if Some(items.len()) != dim {
                    return Err(Error::Parse(format!(
                        "payload: {} amplitudes for dims {dims:?}",
                        items.len()
                    )));
                }
                let amps = items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| complex_at(v, &format!("payload[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                DensityState::from_amplitudes(dims, DVector::from_vec(amps))
            }
            StateKind::Mixed => {
                let dim = dim.ok_or_else(|| Error::Parse("dims: product overflows".into()))?;
                let items = self.payload.as_array().ok_or_else(|| {
                    Error::Parse("payload: mixed states need a row-major matrix".into())
                })?;
                let mut entries = Vec::with_capacity(dim * dim);
                if items.len() == dim * dim {
                    for (i, v) in items.iter().enumerate() {
                        entries.push(complex_at(v, &format!("payload[{i}]"))?);
                    }
                } else if items.len() == dim {
                    for (i, row) in items.iter().enumerate() {
                        let row = row.as_array().filter(|r| r.len() == dim).ok_or_else(|| {
                            Error::Parse(format!("payload[{i}]: expected a row of {dim} [re, im] entries"))
                        })?;
                        for (j, v) in row.iter().enumerate() {
                            entries.push(complex_at(v, &format!("payload[{i}][{j}]"))?);
                        }
                    }
                } else {
                    return Err(Error::Parse(format!(
                        "payload: expected {dim} rows or {} entries for dims {dims:?}",
                        dim * dim
                    )));
                }
                DensityState::from_density_matrix(dims, DMatrix::from_row_slice(dim, dim, &entries))
            }
            StateKind::Classical => {
                let map = self.payload.as_object().ok_or_else(|| {
                    Error::Parse("payload: classical states need an object of digit strings".into())
                })?;
                let mut table = ProbTable::new();
                for (key, p) in map {
                    let ctx = format!("payload[\"{key}\"]");
                    let p = p.as_f64().ok_or_else(|| Error::Parse(format!("{ctx}: probability must be a number")))?;
                    if key.chars().count() != dims.len() {
                        return Err(Error::Parse(format!("{ctx}: expected {} digits", dims.len())));
                    }
                    let digits = key
                        .chars()
                        .zip(&dims)
                        .map(|(c, &radix)| match c.to_digit(10) {
                            Some(x) if (x as usize) < radix => Ok(x as u8),
                            _ => Err(Error::Parse(format!("{ctx}: '{c}' is not a digit below {radix}"))),
                        })
                        .collect::<Result<Vec<u8>>>()?;
                    *table.entry(digits).or_insert(0.0) += p;
                }
                DensityState::from_probabilities(dims, table)
            }
        }
    }

    /// File description of `state`.
    pub fn from_state(state: &DensityState) -> Result<Self> {
        let pair = |z: &C64| Value::from(vec![z.re, z.im]);
        let (kind, payload) = match state.repr() {
            Repr::Pure(v) => (StateKind::Pure, Value::from(v.iter().map(pair).collect::<Vec<_>>())),
            Repr::Dense(m) => (
                StateKind::Mixed,
                Value::from(
                    (0..m.nrows())
                        .map(|i| Value::from((0..m.ncols()).map(|j| pair(&m[(i, j)])).collect::<Vec<_>>()))
                        .collect::<Vec<_>>(),
                ),
            ),
            Repr::Classical(t) => {
                if state.dims().iter().any(|&d| d > 10) {
                    return arg("classical state files support radix up to 10");
                }
                let map: serde_json::Map<String, Value> = t
                    .iter()
                    .map(|(k, &p)| (k.iter().map(|d| char::from(b'0' + d)).collect(), Value::from(p)))
                    .collect();
                (StateKind::Classical, Value::Object(map))
            }
        };
        Ok(StateFileSpec { dims: state.dims().to_vec(), kind, payload })
    }
}

pub fn load_state_file(path: &Path) -> Result<DensityState> {
    let text = std::fs::read_to_string(path)?;
    StateFileSpec::parse(&text)
        .and_then(|s| s.to_state())
        .map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
}

/// Where a state comes from: a family string like `dicke:4:2` or a JSON file.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSource {
    Family(StateFamily),
    File(PathBuf),
}

impl std::str::FromStr for StateSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let path = Path::new(s);
        if path.exists() || s.ends_with(".json") {
            return Ok(StateSource::File(path.to_path_buf()));
        }
        Ok(StateSource::Family(s.parse()?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => arg(format!("unknown output format '{s}' (expected json or csv)")),
        }
    }
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Numeric(format!("JSON encoding: {e}")))
}

// ---------------------------------------------------------------- profile

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub file: Option<String>,
    #[serde(rename = "N")]
    pub n: usize,
    /// Local dimension when all subsystems share it.
    pub d: Option<usize>,
    pub dims: Vec<usize>,
    pub units: String,
    pub dist: Vec<f64>,
    pub genuine: Vec<f64>,
    pub total: f64,
    pub weaving: f64,
    pub neural_complexity: Option<f64>,
    pub argmin: Vec<String>,
    pub weights: String,
    pub mode: String,
    pub version: String,
}

#[derive(Clone, Debug)]
pub struct ProfileOptions {
    pub state: StateSource,
    pub weights: WeightRule,
    pub mode: SearchMode,
}

pub fn cmd_profile(opts: &ProfileOptions) -> Result<ProfileReport> {
    let (state, family, file) = match &opts.state {
        StateSource::Family(f) => (f.build()?, Some(f.to_string()), None),
        StateSource::File(p) => (load_state_file(p)?, None, Some(p.display().to_string())),
    };
    let n = state.n();
    let cache = SubsetEntropyCache::new(
        &state,
        if opts.mode == SearchMode::Brute { FillPolicy::Auto } else { FillPolicy::Lazy },
    )?;
    let prof = profile_with_cache(&cache, opts.mode)?;
    let w = weaving(&prof, &opts.weights.for_n(n)?)?;
    let nc = if n <= max_enum_n() && (state.is_classical() || n <= 12) {
        Some(sig12(neural_complexity(&cache)?))
    } else {
        None
    };
    let dims = state.dims().to_vec();
    Ok(ProfileReport {
        family,
        file,
        n,
        d: dims.iter().all(|&d| d == dims[0]).then_some(dims[0]),
        dims,
        units: UNITS.into(),
        dist: sig12_all(&prof.dist),
        genuine: sig12_all(&prof.genuine),
        total: sig12(prof.total),
        weaving: sig12(w),
        neural_complexity: nc,
        argmin: prof.argmin.unwrap_or_default().iter().map(ToString::to_string).collect(),
        weights: opts.weights.name(),
        mode: opts.mode.name().into(),
        version: VERSION.into(),
    })
}

impl ProfileReport {
    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn to_csv(&self) -> Result<String> {
        csv_string(
            &["source", "N", "d", "units", "dist", "genuine", "total", "weaving", "neural_complexity", "weights", "mode", "version"],
            vec![vec![
                self.family.clone().or_else(|| self.file.clone()).unwrap_or_default(),
                self.n.to_string(),
                self.d.map(|d| d.to_string()).unwrap_or_default(),
                self.units.clone(),
                join(&self.dist),
                join(&self.genuine),
                self.total.to_string(),
                self.weaving.to_string(),
                self.neural_complexity.map(|x| x.to_string()).unwrap_or_default(),
                self.weights.clone(),
                self.mode.clone(),
                self.version.clone(),
            ]],
        )
    }
}

// ------------------------------------------------------------------ table

/// Values of one benchmark row: `S^k` for `2 ≤ k < N`, `S^N`, `S^{1→N}`, `W_S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowValues {
    pub dist: Vec<f64>,
    pub genuine_below_n: Vec<f64>,
    pub s_n: f64,
    pub total: f64,
    pub weaving: f64,
}

impl RowValues {
    fn from_dist(dist: &[f64], weaving: f64) -> Self {
        let n = dist.len();
        let genuine: Vec<f64> = (1..n).map(|i| (dist[i - 1] - dist[i]).max(0.0)).collect();
        let (s_n, below) = match genuine.split_last() {
            Some((last, rest)) => (*last, rest.to_vec()),
            None => (0.0, Vec::new()),
        };
        RowValues {
            dist: sig12_all(dist),
            genuine_below_n: sig12_all(&below),
            s_n: sig12(s_n),
            total: sig12(dist[0]),
            weaving: sig12(weaving),
        }
    }

    fn flat(&self) -> Vec<f64> {
        let mut v = self.dist.clone();
        v.extend(&self.genuine_below_n);
        v.extend([self.s_n, self.total, self.weaving]);
        v
    }

    /// Largest absolute difference over every value.
    pub fn max_diff(&self, other: &RowValues) -> f64 {
        self.flat().iter().zip(other.flat()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub family: String,
    pub state: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub d: usize,
    pub closed_form: RowValues,
    pub matrix: Option<RowValues>,
    pub max_disagreement: Option<f64>,
    pub agree: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub d: usize,
    pub units: String,
    pub weights: String,
    pub mode: String,
    pub closed_form_only: bool,
    pub rows: Vec<TableRow>,
    /// Families that do not exist at this N, with the reason.
    pub skipped: Vec<String>,
    pub version: String,
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    pub n: usize,
    pub d: usize,
    pub weights: WeightRule,
    pub mode: SearchMode,
    pub closed_form_only: bool,
}

/// The eight benchmark families at `(n, d)`: qubit rows first, then the
/// qudit rows of local dimension `d`.
pub fn table_families(n: usize, d: usize) -> Vec<(StateFamily, ClosedFormFamily)> {
    vec![
        (StateFamily::ClassicalPairProduct { n }, ClosedFormFamily::ClassicalPairProduct { n }),
        (StateFamily::Classical { n, d: 2 }, ClosedFormFamily::Classical { n, d: 2 }),
        (StateFamily::BellProduct { n, d: 2 }, ClosedFormFamily::BellProduct { n, d: 2 }),
        (StateFamily::Ghz { n, d: 2 }, ClosedFormFamily::Ghz { n }),
        (StateFamily::Dicke { n, m: 1 }, ClosedFormFamily::Dicke1 { n }),
        (StateFamily::Dicke { n, m: n / 2 }, ClosedFormFamily::DickeHalf { n }),
        (StateFamily::QuditClassical { n, d }, ClosedFormFamily::QuditClassical { n, d }),
        (StateFamily::QuditBellProduct { n, d }, ClosedFormFamily::QuditBellProduct { n, d }),
    ]
}

pub fn cmd_table(opts: &TableOptions) -> Result<TableReport> {
    if opts.n < 2 {
        return arg("table needs N >= 2");
    }
    let run_matrix = !opts.closed_form_only && opts.n <= TABLE_MATRIX_MAX_N;
    if !opts.closed_form_only && opts.n > TABLE_MATRIX_MAX_N {
        return Err(Error::Capacity(format!(
            "matrix pipeline runs up to N = {TABLE_MATRIX_MAX_N}; pass --closed-form-only for N = {}",
            opts.n
        )));
    }
    let w = opts.weights.for_n(opts.n)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (sf, cf) in table_families(opts.n, opts.d) {
        if let Err(e) = cf.validate() {
            skipped.push(format!("{}: {e}", cf.id()));
            continue;
        }
        let closed = RowValues::from_dist(&cf.dist_profile()?, cf.cf_weaving(&w)?);
        let matrix = if run_matrix {
            let state = sf.build()?;
            let cache = SubsetEntropyCache::new(&state, FillPolicy::Auto)?;
            let prof = profile_with_cache(&cache, opts.mode)?;
            Some(RowValues::from_dist(&prof.dist, weaving(&prof, &w)?))
        } else {
            None
        };
        let max_disagreement = matrix.as_ref().map(|m| sig12(m.max_diff(&closed)));
        rows.push(TableRow {
            family: cf.id().into(),
            state: sf.to_string(),
            n: opts.n,
            d: cf.d(),
            closed_form: closed,
            matrix,
            agree: max_disagreement.map(|x| x <= AGREEMENT_TOL),
            max_disagreement,
        });
    }
    Ok(TableReport {
        n: opts.n,
        d: opts.d,
        units: UNITS.into(),
        weights: opts.weights.name(),
        mode: opts.mode.name().into(),
        closed_form_only: !run_matrix,
        rows,
        skipped,
        version: VERSION.into(),
    })
}

impl TableReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree != Some(false))
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let cf = &r.closed_form;
                vec![
                    r.family.clone(),
                    r.n.to_string(),
                    r.d.to_string(),
                    self.units.clone(),
                    join(&cf.genuine_below_n),
                    cf.s_n.to_string(),
                    cf.total.to_string(),
                    cf.weaving.to_string(),
                    r.max_disagreement.map(|x| x.to_string()).unwrap_or_default(),
                    r.agree.map(|x| x.to_string()).unwrap_or_default(),
                ]
            })
            .collect();
        csv_string(
            &["family", "N", "d", "units", "S_k(k=2..N-1)", "S_N", "S_1toN", "W_S", "max_disagreement", "agree"],
            rows,
        )
    }
}

// ---------------------------------------------------------------- scaling

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub weaving: f64,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub family: String,
    pub d: usize,
    pub units: String,
    pub weights: String,
    /// Normalizer of the coefficient column.
    pub law: String,
    pub points: Vec<ScalingRow>,
    pub version: String,
}

#[derive(Clone, Debug)]
pub struct ScalingOptions {
    pub family: String,
    pub d: usize,
    pub a: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub weights: WeightRule,
}

/// `n_min, 2·n_min, 4·n_min, …` up to `n_max`.
pub fn doubling_range(n_min: usize, n_max: usize) -> Vec<usize> {
    std::iter::successors(Some(n_min.max(1)), |&n| n.checked_mul(2)).take_while(|&n| n <= n_max).collect()
}

pub fn cmd_scaling(opts: &ScalingOptions) -> Result<ScalingReport> {
    if opts.n_min == 0 || opts.n_min > opts.n_max {
        return arg(format!("invalid N range {}..{}", opts.n_min, opts.n_max));
    }
    let family = ClosedFormFamily::from_id(&opts.family, opts.n_min, opts.d, opts.a)?;
    let ns = doubling_range(opts.n_min, opts.n_max);
    let points = cf_scaling_sweep(&family, &ns, &opts.weights)?
        .into_iter()
        .map(|p| ScalingRow { n: p.n, weaving: sig12(p.weaving), coefficient: sig12(p.coefficient) })
        .collect();
    Ok(ScalingReport {
        family: family.id().into(),
        d: family.d(),
        units: UNITS.into(),
        weights: opts.weights.name(),
        law: family.scaling_law().name().into(),
        points,
        version: VERSION.into(),
    })
}

impl ScalingReport {
    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows = self
            .points
            .iter()
            .map(|p| {
                vec![
                    self.family.clone(),
                    p.n.to_string(),
                    p.weaving.to_string(),
                    p.coefficient.to_string(),
                    self.law.clone(),
                    self.units.clone(),
                ]
            })
            .collect();
        csv_string(&["family", "N", "weaving", "coefficient", "law", "units"], rows)
    }
}

// ------------------------------------------------------------------ check

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    #[serde(flatten)]
    pub suite: SuiteReport,
    pub version: String,
}

pub fn cmd_check(seed: u64, trials: usize) -> Result<CheckReport> {
    let mut suite = run_suite(&SuiteConfig { seed, trials, fault: None })?;
    for p in &mut suite.properties {
        p.worst_margin = sig12(p.worst_margin);
    }
    Ok(CheckReport { suite, version: VERSION.into() })
}

impl CheckReport {
    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows = self
            .suite
            .properties
            .iter()
            .map(|p| {
                vec![
                    p.name.clone(),
                    p.trials.to_string(),
                    p.violations.to_string(),
                    p.worst_margin.to_string(),
                    p.passed.to_string(),
                ]
            })
            .collect();
        csv_string(&["property", "trials", "violations", "worst_margin", "passed"], rows)
    }
}
