//! Report construction for the command-line front end.
//!
//! Every report serializes to JSON with `--json` and otherwise renders as
//! `key: value` lines whose keys are the JSON field paths.

use std::time::Instant;

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use crate::document::ProblemDocument;
use crate::error::{Error, Result};
use crate::kostant::{self, GradedReport, HighestWeight};
use crate::operator::PolySection;
use crate::oracle::{self, ConnectionCheck, SolutionProfile};
use crate::poly::Polynomial;
use crate::prolong::{self, ContactSymbol, Verdict, DEFAULT_LEVEL_CAP};
use crate::symplectic::{sperp_dim, sym_dim, SymplecticSpace, TensorIndex};
use crate::{QOperator, QSymplecticSpace, Rational};

pub const REPORT_FORMAT_VERSION: u32 = 1;
pub const DEFAULT_ORACLE_DEGREE: usize = 6;
pub const STABILIZATION_WINDOW: usize = 2;

/// Command-line overrides shared by all subcommands.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub lmax: Option<usize>,
    pub nmax: Option<usize>,
    pub timings: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub n: usize,
    pub order: usize,
    pub rank_e: usize,
    pub rank_f: usize,
    pub terms: Vec<String>,
}

impl InputEcho {
    fn new(doc: &ProblemDocument) -> Self {
        let terms = doc
            .terms
            .iter()
            .map(|t| {
                let word = if t.word.is_empty() { "1".to_string() } else { t.word.join("") };
                let rows: Vec<String> = t.coeff.iter().map(|r| format!("[{}]", r.join(", "))).collect();
                format!("{word}: [{}]", rows.join(", "))
            })
            .collect();
        InputEcho {
            n: doc.n,
            order: doc.order,
            rank_e: doc.rank_e,
            rank_f: doc.rank_f,
            terms,
        }
    }
}

/// Wall-clock milliseconds per stage; only present when requested, so that
/// default reports are byte-identical across runs.
#[derive(Clone, Debug, Default)]
pub struct Timings(pub Vec<(String, f64)>);

impl Serialize for Timings {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct Clock {
    enabled: bool,
    start: Instant,
    stages: Vec<(String, f64)>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock {
            enabled,
            start: Instant::now(),
            stages: Vec::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        if self.enabled {
            let ms = self.start.elapsed().as_secs_f64() * 1e3;
            self.stages.push((stage.to_string(), (ms * 1e3).round() / 1e3));
            self.start = Instant::now();
        }
    }

    fn finish(self) -> Option<Timings> {
        self.enabled.then_some(Timings(self.stages))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SperpReport {
    pub format_version: u32,
    pub command: &'static str,
    pub n: usize,
    pub l: usize,
    pub ambient_dim: usize,
    pub dim: usize,
    pub expected_dim: usize,
    /// `dim ⊙^l, dim ⊙^{l-2}, ..`
    pub decomposition: Vec<usize>,
    pub basis_nnz: usize,
    /// Leading tensor index of each basis vector.
    pub pivots: Vec<String>,
}

pub fn sperp(n: usize, l: usize) -> Result<SperpReport> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let space = QSymplecticSpace::new(n);
    let s = space.sperp(l);
    let d = space.dim();
    let pivots = s
        .pivots()
        .into_iter()
        .map(|p| {
            let idx = TensorIndex::unflatten(p, l, d).0;
            idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
        })
        .collect();
    Ok(SperpReport {
        format_version: REPORT_FORMAT_VERSION,
        command: "sperp",
        n,
        l,
        ambient_dim: s.ambient_dim(),
        dim: s.dim(),
        expected_dim: sperp_dim(n, l),
        decomposition: (0..=l / 2).map(|j| sym_dim(d, l - 2 * j)).collect(),
        basis_nnz: s.basis().iter().map(|v| v.nnz()).sum(),
        pivots,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolReport {
    pub format_version: u32,
    pub command: &'static str,
    pub input: InputEcho,
    pub weighted_order: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub surjective: bool,
    pub kernel_dim: usize,
    /// Rows indexed by `F`, columns by (canonical `S⊥^k` basis vector, `E`
    /// basis vector).
    pub matrix: Vec<Vec<String>>,
}

fn load(doc: &ProblemDocument) -> Result<(QOperator, QSymplecticSpace)> {
    let op: QOperator = doc.to_operator()?;
    Ok((op, SymplecticSpace::new(doc.n)))
}

pub fn symbol(doc: &ProblemDocument) -> Result<SymbolReport> {
    let (op, space) = load(doc)?;
    let sym = ContactSymbol::from_operator(&space, &op)?;
    let rank = sym.matrix.rank();
    Ok(SymbolReport {
        format_version: REPORT_FORMAT_VERSION,
        command: "symbol",
        input: InputEcho::new(doc),
        weighted_order: op.weighted_order(),
        rows: sym.matrix.nrows(),
        cols: sym.matrix.ncols(),
        rank,
        surjective: rank == sym.matrix.nrows(),
        kernel_dim: sym.matrix.ncols() - rank,
        matrix: sym
            .matrix
            .to_dense()
            .into_iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub level_cap: usize,
    pub dim_kh: usize,
    pub levels: Vec<usize>,
    pub verdict: Verdict,
    pub rank_t: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionReport {
    pub total_rank: usize,
    pub block_dims: Vec<usize>,
    pub check: ConnectionCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub max_degree: usize,
    pub dims_by_degree: Vec<usize>,
    pub stabilized_dim: Option<usize>,
    /// Oracle dimension at the degree cap is at most `rank_t`.
    pub within_bound: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KostantSummary {
    pub e_weight: HighestWeight,
    pub bound_weight: HighestWeight,
    pub weyl_dim: u128,
    pub matches_rank_t: Option<bool>,
    pub graded: Option<GradedReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProlongReport {
    pub format_version: u32,
    pub command: &'static str,
    pub input: InputEcho,
    pub symbol_rank: usize,
    pub chain: ChainReport,
    pub connection: Option<ConnectionReport>,
    pub oracle: OracleSummary,
    pub kostant: Option<KostantSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Timings>,
}

impl ProlongReport {
    pub fn verdict(&self) -> Verdict {
        self.chain.verdict
    }
}

fn weyl_u128(w: &HighestWeight) -> Result<u128> {
    kostant::weyl_dim(w)
        .to_u128()
        .ok_or_else(|| Error::Precondition(format!("dimension of {w} overflows u128")))
}

/// Level cap: command line, then document, then the Cartan-type default
/// when a kostant block is present, then [`DEFAULT_LEVEL_CAP`].
fn level_cap(doc: &ProblemDocument, settings: &Settings) -> usize {
    settings.lmax.or(doc.options.lmax).unwrap_or_else(|| match &doc.kostant {
        Some(k) => {
            let largest = k.weight.iter().copied().max().unwrap_or(0).max(k.m) as usize;
            kostant::cartan_level_cap(doc.n, doc.order.max(1), largest)
        }
        None => DEFAULT_LEVEL_CAP,
    })
}

pub fn prolong(doc: &ProblemDocument, settings: &Settings) -> Result<ProlongReport> {
    let mut clock = Clock::new(settings.timings);
    let (op, space) = load(doc)?;
    let sym = ContactSymbol::from_operator(&space, &op)?;
    let symbol_rank = sym.matrix.rank();
    clock.lap("symbol");

    let cap = level_cap(doc, settings);
    let chain = prolong::contact_chain_canonical(&space, &sym, cap)?;
    debug_assert!(chain.tail_vanishes());
    clock.lap("chain");

    // Polynomial solutions have weighted degree below k + #(nonzero
    // levels); the window is added on top so stabilization is visible.
    let default_degree = match chain.verdict {
        Verdict::FiniteType => op.order() + chain.graded_tail().len() + STABILIZATION_WINDOW,
        _ => DEFAULT_ORACLE_DEGREE,
    };
    let max_degree = settings.nmax.or(doc.options.nmax).unwrap_or(default_degree);

    let connection = if doc.n >= 2
        && op.order() == 1
        && chain.verdict == Verdict::FiniteType
        && op.is_homogeneous_constant()
    {
        let conn = prolong::build_flat_connection(&space, &op, &chain)?;
        let mut block_dims: Vec<usize> = conn.block_offsets.windows(2).map(|w| w[1] - w[0]).collect();
        block_dims.push(conn.total_rank - conn.block_offsets.last().copied().unwrap_or(0));
        let check = oracle::check_connection(&op, &conn, max_degree)?;
        clock.lap("connection");
        Some(ConnectionReport {
            total_rank: conn.total_rank,
            block_dims,
            check,
        })
    } else {
        None
    };

    let profile = oracle::stabilized_dim(&op, max_degree.max(STABILIZATION_WINDOW), STABILIZATION_WINDOW)?;
    clock.lap("oracle");
    let within_bound = chain
        .rank_t
        .map(|r| profile.dims_by_degree.last().is_some_and(|&d| d <= r));

    let kostant = match &doc.kostant {
        None => None,
        Some(k) => {
            if k.weight.len() != doc.n {
                return Err(Error::Document(format!(
                    "kostant weight has {} labels, expected n = {}",
                    k.weight.len(),
                    doc.n
                )));
            }
            let e_weight = HighestWeight::new(k.weight.clone());
            let bound = kostant::bound_weight(&e_weight, op.order())?;
            let weyl_dim = weyl_u128(&bound)?;
            let graded = Some(kostant::graded_check(
                &space,
                op.order(),
                k.m as usize,
                kostant::cartan_level_cap(doc.n, op.order(), k.m as usize),
            )?);
            clock.lap("kostant");
            Some(KostantSummary {
                e_weight,
                bound_weight: bound,
                weyl_dim,
                matches_rank_t: chain.rank_t.map(|r| r as u128 == weyl_dim),
                graded,
            })
        }
    };

    Ok(ProlongReport {
        format_version: REPORT_FORMAT_VERSION,
        command: "prolong",
        input: InputEcho::new(doc),
        symbol_rank,
        chain: ChainReport {
            level_cap: cap,
            dim_kh: chain.dim_kh,
            levels: chain.levels,
            verdict: chain.verdict,
            rank_t: chain.rank_t,
        },
        connection,
        oracle: OracleSummary {
            max_degree: profile.dims_by_degree.len() - 1,
            dims_by_degree: profile.dims_by_degree,
            stabilized_dim: profile.stabilized_dim,
            within_bound,
        },
        kostant,
        timings_ms: clock.finish(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub format_version: u32,
    pub command: &'static str,
    pub n: usize,
    pub order: usize,
    pub e_weight: HighestWeight,
    pub bound_weight: HighestWeight,
    pub weyl_dim: u128,
}

pub fn bound(n: usize, order: usize, weight: &[u32]) -> Result<BoundReport> {
    if weight.len() != n {
        return Err(Error::WeightRankMismatch {
            left: weight.len(),
            right: n,
        });
    }
    let e_weight = HighestWeight::new(weight.to_vec());
    let bound_weight = kostant::bound_weight(&e_weight, order)?;
    let weyl_dim = weyl_u128(&bound_weight)?;
    Ok(BoundReport {
        format_version: REPORT_FORMAT_VERSION,
        command: "bound",
        n,
        order,
        e_weight,
        bound_weight,
        weyl_dim,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub format_version: u32,
    pub command: &'static str,
    pub level_cap: usize,
    #[serde(flatten)]
    pub graded: GradedReport,
}

pub fn check(n: usize, order: usize, m: usize, settings: &Settings) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let space = QSymplecticSpace::new(n);
    let cap = settings.lmax.unwrap_or_else(|| kostant::cartan_level_cap(n, order, m));
    Ok(CheckReport {
        format_version: REPORT_FORMAT_VERSION,
        command: "check",
        level_cap: cap,
        graded: kostant::graded_check(&space, order, m, cap)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub format_version: u32,
    pub command: &'static str,
    pub input: InputEcho,
    pub max_degree: usize,
    pub window: usize,
    pub unknowns: usize,
    #[serde(flatten)]
    pub profile: SolutionProfile,
}

pub fn run_oracle(doc: &ProblemDocument, settings: &Settings) -> Result<OracleReport> {
    let (op, _) = load(doc)?;
    let max_degree = settings.nmax.or(doc.options.nmax).unwrap_or(DEFAULT_ORACLE_DEGREE);
    let profile = oracle::stabilized_dim(&op, max_degree, STABILIZATION_WINDOW)?;
    Ok(OracleReport {
        format_version: REPORT_FORMAT_VERSION,
        command: "oracle",
        input: InputEcho::new(doc),
        max_degree,
        window: STABILIZATION_WINDOW,
        unknowns: oracle::unknown_count(&op, max_degree),
        profile,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub format_version: u32,
    pub command: &'static str,
    pub input: InputEcho,
    pub section: Vec<String>,
    pub image: Vec<String>,
    pub solves: bool,
}

pub fn verify(doc: &ProblemDocument, components: &[String]) -> Result<VerifyReport> {
    let (op, _) = load(doc)?;
    let polys = components
        .iter()
        .map(|c| Polynomial::<Rational>::parse(doc.n, c))
        .collect::<Result<Vec<_>>>()?;
    let section = PolySection::new(polys);
    let image = op.apply(&section)?;
    Ok(VerifyReport {
        format_version: REPORT_FORMAT_VERSION,
        command: "verify",
        input: InputEcho::new(doc),
        section: section.components.iter().map(ToString::to_string).collect(),
        image: image.components.iter().map(ToString::to_string).collect(),
        solves: image.is_zero(),
    })
}

/// Renders a report as pretty JSON or as `path: value` lines.
pub fn render<T: Serialize>(report: &T, json: bool) -> Result<String> {
    let value = serde_json::to_value(report)?;
    if json {
        return Ok(serde_json::to_string_pretty(&value)? + "\n");
    }
    let mut out = String::new();
    render_text(&value, "", &mut out);
    Ok(out)
}

fn render_text(value: &Value, path: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                render_text(v, &key, out);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for (i, v) in items.iter().enumerate() {
                render_text(v, &format!("{path}[{i}]"), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{path}: {s}\n")),
        Value::Null => out.push_str(&format!("{path}: none\n")),
        other => out.push_str(&format!("{path}: {other}\n")),
    }
}
