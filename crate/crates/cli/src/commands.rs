//! One function per subcommand. Each returns a [`Output`] holding the JSON
//! result, a plain-text table, and whether validation passed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use lhl_core::complex::{degeneration_check, spectral_sequence, totals, CochainComplex, FilteredComplex};
use lhl_core::conecx::{build_cone_complex, ConeComplex, IntersectionData};
use lhl_core::linalg::{format_rational, parse_rational, rational_rows, Rational, RationalMatrix};
use lhl_core::localmodel::{koszul_local_cohomology, obstruction_stalk, LocalModel, Source};
use lhl_core::monodromy::{monodromy_report, NilpotentOperator, OperatorData};
use lhl_core::toric::{
    divisor_cohomology, e1_sum_check, log_hodge_numbers, weight_divisor, Fan, FanData, QDivisor,
};
use lhl_core::trop::{tropical_cohomology, weight_filtration_ss, weighted_complex, Bidegree, TropError};
use lhl_core::weights::{
    face_compatibility, validate_convexity, validate_positivity, CellWeights, WeightError, WeightFunction,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::io::{check_dim, load, Loaded};

pub struct Output {
    pub result: Value,
    pub table: String,
    pub ok: bool,
    pub inputs: Vec<(String, String)>,
    pub options: BTreeMap<String, Value>,
}

impl Output {
    fn new(result: impl Serialize, table: String) -> Self {
        Self {
            result: serde_json::to_value(result).expect("reports serialize"),
            table,
            ok: true,
            inputs: Vec::new(),
            options: BTreeMap::new(),
        }
    }

    fn input<T>(mut self, l: &Loaded<T>) -> Self {
        self.inputs.push((l.name.clone(), l.sha256.clone()));
        self
    }

    fn option(mut self, key: &str, value: impl Serialize) -> Self {
        self.options.insert(
            key.to_string(),
            serde_json::to_value(value).expect("option serializes"),
        );
        self
    }

    fn failed_if(mut self, bad: bool) -> Self {
        self.ok = !bad;
        self
    }
}

fn dims_line(h: &BTreeMap<i64, usize>) -> String {
    let parts: Vec<String> = h.iter().map(|(k, d)| format!("H^{k} = {d}")).collect();
    parts.join(", ")
}

fn key(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn load_complex(path: &Path) -> Result<(Loaded<IntersectionData>, ConeComplex), CliError> {
    let data: Loaded<IntersectionData> = load(path)?;
    let c = build_cone_complex(&data.value).map_err(CliError::invalid)?;
    check_dim(c.cell_counts().into_iter().max().unwrap_or(0))?;
    Ok((data, c))
}

fn load_fan(path: &Path) -> Result<(Loaded<FanData>, Fan), CliError> {
    let data: Loaded<FanData> = load(path)?;
    let fan = Fan::try_from(data.value.clone()).map_err(CliError::invalid)?;
    check_dim(fan.rays().len())?;
    Ok((data, fan))
}

/// Label -> rational string.
#[derive(Deserialize)]
#[serde(transparent)]
struct WeightsFile(#[serde(with = "lhl_core::linalg::rational_map")] BTreeMap<String, Rational>);

fn load_weights(path: &Path) -> Result<Loaded<WeightsFile>, CliError> {
    load(path)
}

fn cell_weights(c: &ConeComplex, w: &WeightsFile) -> Result<CellWeights, CliError> {
    CellWeights::resolve(c, &w.0).map_err(CliError::invalid)
}

pub fn parse_rationals(option: &str, raw: &[String]) -> Result<Vec<Rational>, CliError> {
    raw.iter()
        .map(|s| {
            parse_rational(s).map_err(|e| CliError::Option {
                option: option.to_string(),
                message: format!("{s:?}: {e}"),
            })
        })
        .collect()
}

#[derive(Serialize)]
struct ConeComplexResult {
    components: Vec<String>,
    cell_counts: Vec<usize>,
    cells: Vec<Vec<String>>,
    cohomology: BTreeMap<i64, usize>,
    euler_characteristic: i64,
}

pub fn cone_complex(input: &Path) -> Result<Output, CliError> {
    let (data, c) = load_complex(input)?;
    let cells: Vec<Vec<String>> = (0..=c.max_dim())
        .map(|d| {
            c.cell_ids()
                .filter(|id| id.dim == d)
                .map(|id| c.label(id))
                .collect()
        })
        .collect();
    let res = ConeComplexResult {
        components: c.components().to_vec(),
        cell_counts: c.cell_counts(),
        cells,
        cohomology: c.simplicial_cohomology(),
        euler_characteristic: c.euler_characteristic(),
    };
    let mut t = String::new();
    for (d, cs) in res.cells.iter().enumerate() {
        let _ = writeln!(t, "{d}-cells ({}): {}", cs.len(), cs.join(" | "));
    }
    let _ = writeln!(t, "cohomology: {}", dims_line(&res.cohomology));
    let _ = writeln!(t, "euler characteristic: {}", res.euler_characteristic);
    Ok(Output::new(res, t).input(&data))
}

#[derive(Serialize)]
struct FaceCoefficient {
    face: String,
    coefficient: String,
}

#[derive(Serialize)]
struct Compatibility {
    cell: String,
    faces: Vec<FaceCoefficient>,
}

pub fn validate_weights(complex: &Path, weights: &Path) -> Result<Output, CliError> {
    let (cdata, c) = load_complex(complex)?;
    let wdata = load_weights(weights)?;
    let labels: BTreeMap<String, _> = c.cell_ids().map(|id| (c.label(id), id)).collect();
    if let Some(k) = wdata.value.0.keys().find(|k| !labels.contains_key(*k)) {
        return Err(CliError::invalid(WeightError::UnknownCell(k.clone())));
    }
    let rays: BTreeMap<String, Rational> = wdata
        .value
        .0
        .iter()
        .filter(|(k, _)| labels[*k].dim == 0)
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let w = WeightFunction::new(rays);
    let positivity = validate_positivity(&w, &c).map_err(CliError::invalid)?;
    let convexity = match validate_convexity(&w, &c) {
        Ok(r) => Some(r),
        Err(WeightError::MissingRayCoordinates) => None,
        Err(e) => return Err(CliError::invalid(e)),
    };
    let compat: Vec<Compatibility> = if positivity.is_valid() {
        let cw = cell_weights(&c, &wdata.value)?;
        face_compatibility(&c, &cw)
            .into_iter()
            .map(|(id, faces)| Compatibility {
                cell: c.label(id),
                faces: faces
                    .into_iter()
                    .map(|(f, q)| FaceCoefficient {
                        face: c.label(f),
                        coefficient: format_rational(&q),
                    })
                    .collect(),
            })
            .collect()
    } else {
        Vec::new()
    };
    let valid = positivity.is_valid() && convexity.as_ref().is_none_or(|r| r.is_valid());
    let mut t = String::new();
    let _ = writeln!(
        t,
        "positivity: {}",
        if positivity.is_valid() { "PASS" } else { "FAIL" }
    );
    for (ray, v) in &positivity.non_positive {
        let _ = writeln!(t, "  w({ray}) = {} is not positive", format_rational(v));
    }
    match &convexity {
        None => {
            let _ = writeln!(t, "convexity: skipped (no ray coordinates)");
        }
        Some(r) => {
            let _ = writeln!(
                t,
                "convexity: {} ({} pairs checked, {} skipped)",
                if r.is_valid() { "PASS" } else { "FAIL" },
                r.pairs_checked,
                r.pairs_skipped
            );
            for v in &r.violations {
                let _ = writeln!(
                    t,
                    "  violated: l_{{{}}}({}) = {} > w({}) = {} (neighbour {})",
                    v.cone,
                    v.ray,
                    format_rational(&v.linear_value),
                    v.ray,
                    format_rational(&v.weight),
                    v.neighbour
                );
            }
        }
    }
    for cc in &compat {
        let faces: Vec<String> = cc
            .faces
            .iter()
            .map(|f| format!("{}: {}", f.face, f.coefficient))
            .collect();
        let _ = writeln!(t, "compatibility {}: {}", cc.cell, faces.join(", "));
    }
    let _ = writeln!(t, "verdict: {}", if valid { "ACCEPT" } else { "REJECT" });
    let res = json!({
        "valid": valid,
        "positivity": { "valid": positivity.is_valid(), "report": positivity },
        "convexity": convexity.as_ref().map(|r| json!({ "valid": r.is_valid(), "report": r })),
        "compatibility": compat,
    });
    Ok(Output::new(res, t).input(&cdata).input(&wdata).failed_if(!valid))
}

#[derive(Serialize)]
struct TropResult {
    cohomology: BTreeMap<i64, usize>,
    cell_weights: BTreeMap<String, String>,
    expected: Option<BTreeMap<i64, usize>>,
    matches_expected: Option<bool>,
}

fn weight_labels(c: &ConeComplex, w: &CellWeights) -> BTreeMap<String, String> {
    c.cell_ids()
        .map(|id| (c.label(id), format_rational(w.get(id))))
        .collect()
}

pub fn trop_cohomology(
    complex: &Path,
    weights: &Path,
    expected: Option<&[usize]>,
) -> Result<Output, CliError> {
    let (cdata, c) = load_complex(complex)?;
    let wdata = load_weights(weights)?;
    let w = cell_weights(&c, &wdata.value)?;
    let t = weighted_complex(&c, &w);
    let h = tropical_cohomology(&t);
    let expected_raw = expected;
    let expected: Option<BTreeMap<i64, usize>> =
        expected.map(|e| e.iter().enumerate().map(|(k, &d)| (k as i64, d)).collect());
    let matches = expected.as_ref().map(|e| {
        let nz = |m: &BTreeMap<i64, usize>| {
            m.iter()
                .filter(|(_, &d)| d > 0)
                .map(|(&k, &d)| (k, d))
                .collect::<Vec<_>>()
        };
        nz(e) == nz(&h)
    });
    let mut table = format!("tropical cohomology: {}\n", dims_line(&h));
    if let (Some(e), Some(m)) = (&expected, matches) {
        let _ = writeln!(
            table,
            "expected: {} ({})",
            dims_line(e),
            if m { "match" } else { "differs" }
        );
    }
    let res = TropResult {
        cohomology: h,
        cell_weights: weight_labels(&c, &w),
        expected,
        matches_expected: matches,
    };
    let mut out = Output::new(res, table).input(&cdata).input(&wdata);
    if let Some(e) = expected_raw {
        out = out.option("expected", e);
    }
    Ok(out)
}

fn bidegree_table(entries: &[Bidegree]) -> String {
    entries
        .iter()
        .map(|b| format!("({},{}): {}", b.p, b.q, b.dim))
        .collect::<Vec<_>>()
        .join("  ")
}

pub fn trop_ss(complex: &Path, weights: &Path, thresholds: Option<&[String]>) -> Result<Output, CliError> {
    let (cdata, c) = load_complex(complex)?;
    let wdata = load_weights(weights)?;
    let w = cell_weights(&c, &wdata.value)?;
    let th = thresholds
        .map(|t| parse_rationals("--thresholds", t))
        .transpose()?;
    let t = weighted_complex(&c, &w);
    let report = weight_filtration_ss(&t, th.as_deref()).map_err(|e| match e {
        TropError::NotSubcomplex { .. } | TropError::UnsortedThresholds { .. } => {
            CliError::Failed(e.to_string())
        }
        other => CliError::invalid(other),
    })?;
    let mut table = format!("thresholds: {}\n", report.thresholds.join(", "));
    for page in &report.pages {
        let _ = writeln!(
            table,
            "E_{}: {}{}",
            page.r,
            bidegree_table(&page.entries),
            if page.nonzero_differential {
                "  (d nonzero)"
            } else {
                ""
            }
        );
    }
    let _ = writeln!(table, "E_inf: {}", bidegree_table(&report.e_infinity));
    let _ = writeln!(table, "cohomology: {}", dims_line(&report.cohomology));
    let _ = writeln!(table, "degenerates at E_1: {}", report.degenerates_at_e1);
    let out = Output::new(&report, table)
        .input(&cdata)
        .input(&wdata)
        .option("thresholds", &report.thresholds);
    Ok(out)
}

#[derive(Serialize)]
struct LogHodgeResult {
    rank: usize,
    twist: Vec<String>,
    floor: Vec<i64>,
    /// `rows[q][p] = h^q(Ω^p(log D)(twist))`.
    rows: Vec<Vec<usize>>,
    e1_sum: BTreeMap<usize, lhl_core::toric::E1SumRow>,
    e1_sum_pass: bool,
}

pub fn log_hodge(fan_path: &Path, twist: &str, weights: Option<&Path>) -> Result<Output, CliError> {
    let (fdata, fan) = load_fan(fan_path)?;
    let mut wdata = None;
    let divisor = match twist {
        "zero" => QDivisor::zero(&fan),
        "weight" => {
            let path = weights.ok_or_else(|| CliError::Option {
                option: "--twist".into(),
                message: "weight twist needs --weights".into(),
            })?;
            let w = load_weights(path)?;
            let d =
                weight_divisor(&WeightFunction::new(w.value.0.clone()), &fan).map_err(CliError::invalid)?;
            wdata = Some(w);
            d
        }
        list => {
            let parts: Vec<String> = list.split(',').map(|s| s.trim().to_string()).collect();
            QDivisor::new(parse_rationals("--twist", &parts)?)
        }
    };
    let table = log_hodge_numbers(&fan, &divisor, "fan", twist).map_err(CliError::invalid)?;
    let check = e1_sum_check(&table);
    let n = table.rank;
    let rows: Vec<Vec<usize>> = (0..=n)
        .map(|q| (0..=n).map(|p| table.get(p, q)).collect())
        .collect();
    let pass = check.values().all(|r| r.pass);
    let mut t = String::new();
    let _ = writeln!(
        t,
        "q\\p {}",
        (0..=n).map(|p| format!("{p:>4}")).collect::<String>()
    );
    for (q, row) in rows.iter().enumerate() {
        let _ = writeln!(
            t,
            "{q:>3} {}",
            row.iter().map(|h| format!("{h:>4}")).collect::<String>()
        );
    }
    let _ = writeln!(t, "e1-sum: {}", if pass { "PASS" } else { "FAIL" });
    let res = LogHodgeResult {
        rank: n,
        twist: divisor.coefficients().iter().map(format_rational).collect(),
        floor: divisor.floor(),
        rows,
        e1_sum: check,
        e1_sum_pass: pass,
    };
    let mut out = Output::new(res, t).input(&fdata).option("twist", twist);
    if let Some(w) = &wdata {
        out = out.input(w);
    }
    Ok(out.failed_if(twist == "zero" && !pass))
}

pub fn divisor_cohomology_cmd(fan_path: &Path, divisor: &[i64]) -> Result<Output, CliError> {
    let (fdata, fan) = load_fan(fan_path)?;
    let h = divisor_cohomology(&fan, divisor).map_err(CliError::invalid)?;
    let euler: i64 = h
        .iter()
        .enumerate()
        .map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum();
    let table = format!(
        "{}\neuler characteristic: {euler}\n",
        h.iter()
            .enumerate()
            .map(|(q, d)| format!("h^{q} = {d}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let res = json!({ "divisor": divisor, "cohomology": h, "euler_characteristic": euler });
    Ok(Output::new(res, table).input(&fdata).option("divisor", divisor))
}

fn model(n: usize, r: usize, window: i64) -> Result<LocalModel, CliError> {
    LocalModel::new(n, r, window).map_err(CliError::invalid)
}

fn keyed<K: AsRef<[T]>, T: ToString, V: Clone>(m: &BTreeMap<K, V>) -> BTreeMap<String, V> {
    m.iter()
        .map(|(k, v)| {
            (
                k.as_ref().iter().map(T::to_string).collect::<Vec<_>>().join(","),
                v.clone(),
            )
        })
        .collect()
}

pub fn obstruction_stalk_cmd(n: usize, r: usize, window: i64, source: Source) -> Result<Output, CliError> {
    let m = model(n, r, window)?;
    check_dim((1usize << n) * 3usize.pow(r as u32))?;
    let rep = obstruction_stalk(&m, source);
    let mut t = String::new();
    let _ = writeln!(t, "direct cone:  {}", dims_line(&rep.direct.dims));
    let _ = writeln!(t, "assembled:    {}", dims_line(&rep.assembled.dims));
    for (i, h) in &rep.assembled.contributions {
        let label: Vec<String> = i.iter().map(usize::to_string).collect();
        let _ = writeln!(t, "  support {{{}}}: {}", label.join(","), dims_line(h));
    }
    for (md, h) in &rep.direct.by_multidegree {
        let _ = writeln!(t, "  multidegree ({}): {}", key(md), dims_line(h));
    }
    let _ = writeln!(t, "match: {}", rep.matches);
    let res = json!({
        "model": rep.model,
        "source": rep.source,
        "direct": { "dims": rep.direct.dims, "by_multidegree": keyed(&rep.direct.by_multidegree) },
        "assembled": {
            "dims": rep.assembled.dims,
            "by_multidegree": keyed(&rep.assembled.by_multidegree),
            "contributions": keyed(&rep.assembled.contributions),
        },
        "matches": rep.matches,
    });
    let flavor = match source {
        Source::Holomorphic => "holo",
        Source::Logarithmic => "log",
    };
    Ok(Output::new(res, t)
        .option("n", n)
        .option("r", r)
        .option("window", window)
        .option("flavor", flavor)
        .failed_if(!rep.matches))
}

pub fn local_cohomology_cmd(
    n: usize,
    r: usize,
    window: i64,
    subset: &[usize],
    degree: usize,
) -> Result<Output, CliError> {
    let m = model(n, r, window)?;
    check_dim(1 << subset.len())?;
    let rep = koszul_local_cohomology(&m, subset, degree).map_err(CliError::invalid)?;
    let mut t = String::new();
    let _ = writeln!(
        t,
        "H^{} with support {:?}, {}-forms: total {}",
        rep.support_degree,
        rep.subset,
        rep.form_degree,
        rep.total()
    );
    for (a, d) in &rep.cech {
        let _ = writeln!(t, "  ({}): {d}", key(a));
    }
    let _ = writeln!(
        t,
        "methods agree: {}, concentrated: {}",
        rep.agree, rep.concentrated
    );
    let res = json!({
        "subset": rep.subset,
        "form_degree": rep.form_degree,
        "support_degree": rep.support_degree,
        "total": rep.total(),
        "cech": keyed(&rep.cech),
        "monomials": keyed(&rep.monomials),
        "agree": rep.agree,
        "concentrated": rep.concentrated,
    });
    Ok(Output::new(res, t)
        .option("n", n)
        .option("r", r)
        .option("window", window)
        .option("subset", subset)
        .option("degree", degree)
        .failed_if(!(rep.agree && rep.concentrated)))
}

pub fn monodromy_cmd(input: &Path, center: i64) -> Result<Output, CliError> {
    let data: Loaded<OperatorData> = load(input)?;
    check_dim(data.value.matrix.len())?;
    let op = NilpotentOperator::try_from(data.value.clone()).map_err(CliError::invalid)?;
    let rep = monodromy_report(&op, center);
    let mut t = String::new();
    let _ = writeln!(t, "jordan type: {:?}", rep.jordan_type);
    let _ = writeln!(t, "stratum weight: {}", format_rational(&rep.stratum_weight));
    let _ = writeln!(t, "{:>4} {:>6} {:>4}", "l", "dim W", "Gr");
    for (l, d) in &rep.filtration_dims {
        let _ = writeln!(
            t,
            "{l:>4} {d:>6} {:>4}",
            rep.graded_dims.get(l).copied().unwrap_or(0)
        );
    }
    let _ = writeln!(t, "axioms: {}", if rep.axioms.holds() { "PASS" } else { "FAIL" });
    let ok = rep.axioms.holds();
    Ok(Output::new(&rep, t)
        .input(&data)
        .option("center", center)
        .failed_if(!ok))
}

/// Filtration levels: `levels[i][k - lo]` lists spanning vectors of `F^{start+i}` in degree `k`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationData {
    pub start: i64,
    pub levels: Vec<Vec<RowsOf>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(transparent)]
pub struct RowsOf(#[serde(with = "rational_rows")] pub Vec<Vec<Rational>>);

/// A cochain complex: differential `k` has `dims[k+1-lo]` rows of `dims[k-lo]` entries.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexData {
    pub lo: i64,
    pub dims: Vec<usize>,
    pub differentials: Vec<RowsOf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<FiltrationData>,
}

fn dense(rows: usize, cols: usize, data: &[Vec<Rational>], what: &str) -> Result<RationalMatrix, CliError> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(CliError::Invalid(format!("{what} must be {rows}x{cols}")));
    }
    let mut m = RationalMatrix::zeros(rows, cols);
    for (i, r) in data.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FiltrationKind {
    Stupid,
    Trivial,
}

pub fn spectral_sequence_cmd(input: &Path, kind: Option<FiltrationKind>) -> Result<Output, CliError> {
    let data: Loaded<ComplexData> = load(input)?;
    let d = &data.value;
    check_dim(d.dims.iter().copied().max().unwrap_or(0))?;
    if d.dims.is_empty() || d.differentials.len() + 1 != d.dims.len() {
        return Err(CliError::Invalid(format!(
            "{} degrees need {} differentials, found {}",
            d.dims.len(),
            d.dims.len().saturating_sub(1),
            d.differentials.len()
        )));
    }
    let diffs = d
        .differentials
        .iter()
        .enumerate()
        .map(|(i, m)| {
            dense(
                d.dims[i + 1],
                d.dims[i],
                &m.0,
                &format!("differential {}", d.lo + i as i64),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let complex = CochainComplex::new(d.lo, d.dims.clone(), diffs).map_err(CliError::invalid)?;
    let (fc, used) = match (kind, &d.filtration) {
        (Some(FiltrationKind::Trivial), _) => (FilteredComplex::trivial(complex), "trivial"),
        (Some(FiltrationKind::Stupid), _) | (None, None) => (FilteredComplex::stupid(complex), "stupid"),
        (None, Some(f)) => {
            let levels = f
                .levels
                .iter()
                .map(|level| {
                    level
                        .iter()
                        .zip(&d.dims)
                        .map(|(vs, &n)| {
                            if vs.0.iter().any(|v| v.len() != n) {
                                return Err(CliError::Invalid(format!(
                                    "filtration vectors must have length {n}"
                                )));
                            }
                            Ok(RationalMatrix::from_columns(n, &vs.0))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            (
                FilteredComplex::new(complex, f.start, levels).map_err(CliError::invalid)?,
                "given",
            )
        }
    };
    let ss = spectral_sequence(&fc, fc.length().max(1));
    let deg = degeneration_check(&fc);
    let to_list = |m: &BTreeMap<(i64, i64), usize>| -> Vec<Bidegree> {
        m.iter()
            .filter(|(_, &v)| v > 0)
            .map(|(&(p, q), &dim)| Bidegree { p, q, dim })
            .collect()
    };
    let pages: Vec<Value> = ss
        .pages
        .iter()
        .map(|p| json!({ "r": p.r, "entries": to_list(&p.entries), "nonzero_differential": p.has_nonzero_differential() }))
        .collect();
    let cohomology = fc.complex().cohomology_dims();
    let mut t = String::new();
    let _ = writeln!(t, "filtration: {used}");
    for p in &ss.pages {
        let _ = writeln!(t, "E_{}: {}", p.r, bidegree_table(&to_list(&p.entries)));
    }
    let _ = writeln!(t, "E_inf: {}", bidegree_table(&to_list(&ss.e_infinity)));
    let _ = writeln!(t, "cohomology: {}", dims_line(&cohomology));
    let _ = writeln!(t, "degenerates at E_1: {}", deg.degenerates_at_e1);
    let res = json!({
        "filtration": used,
        "pages": pages,
        "e_infinity": to_list(&ss.e_infinity),
        "e_infinity_totals": totals(&ss.e_infinity),
        "cohomology": cohomology,
        "degenerates_at_e1": deg.degenerates_at_e1,
        "first_nonzero_differential": deg.first_nonzero_differential,
    });
    Ok(Output::new(res, t).input(&data).option("filtration", used))
}
