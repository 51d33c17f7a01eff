//! JSON wire formats. Rationals travel as `"p/q"` strings (plain integers
//! and decimals are accepted on input).

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bodies::{AxisBox, Body, Interval, VPolytope, Zonotope};
use crate::error::{Error, Result};
use crate::inequalities::{Certificate, Report};
use crate::mixed::{volume_polynomial, BodyTuple, MultiIndex, VolumePolynomial};
use crate::numerics::{Matrix, SymMatrix};
use crate::rational::{Rational, RationalStr};
use crate::search::{Finding, SearchOutcome};

type Row = Vec<RationalStr>;

fn unwrap_row(r: Row) -> Vec<Rational> {
    r.into_iter().map(|x| x.0).collect()
}

fn wrap_row(r: &[Rational]) -> Row {
    r.iter().cloned().map(RationalStr).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodyJson {
    Box {
        intervals: Vec<[RationalStr; 2]>,
    },
    Zonotope {
        generators: Vec<Row>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        origin: Option<Row>,
        /// Only needed when there are no generators.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dimension: Option<usize>,
    },
    Vpolytope {
        vertices: Vec<Row>,
    },
}

impl BodyJson {
    pub fn into_body(self) -> Result<Body> {
        Ok(match self {
            BodyJson::Box { intervals } => Body::Box(AxisBox::new(
                intervals
                    .into_iter()
                    .map(|[lo, hi]| Interval::new(lo.0, hi.0))
                    .collect::<Result<_>>()?,
            )?),
            BodyJson::Zonotope { generators, origin, dimension } => {
                let generators: Vec<_> = generators.into_iter().map(unwrap_row).collect();
                let dim = origin
                    .as_ref()
                    .map(Vec::len)
                    .or(dimension)
                    .or_else(|| generators.first().map(Vec::len))
                    .ok_or_else(|| Error::Parse("zonotope without generators needs a dimension or origin".into()))?;
                let origin = origin.map(unwrap_row).unwrap_or_else(|| vec![Rational::default(); dim]);
                if origin.len() != dim {
                    return Err(Error::Dimension("zonotope origin and dimension disagree".into()));
                }
                Body::Zonotope(Zonotope::with_origin(origin, generators)?)
            }
            BodyJson::Vpolytope { vertices } => {
                Body::Polytope(VPolytope::new(vertices.into_iter().map(unwrap_row).collect())?)
            }
        })
    }

    pub fn from_body(b: &Body) -> Self {
        match b {
            Body::Box(bx) => BodyJson::Box {
                intervals: bx
                    .sides()
                    .iter()
                    .map(|s| [RationalStr(s.lo().clone()), RationalStr(s.hi().clone())])
                    .collect(),
            },
            Body::Zonotope(z) => BodyJson::Zonotope {
                generators: z.generators().iter().map(|g| wrap_row(g)).collect(),
                origin: Some(wrap_row(z.origin())),
                dimension: None,
            },
            Body::Polytope(p) => BodyJson::Vpolytope { vertices: p.vertices().iter().map(|v| wrap_row(v)).collect() },
        }
    }
}

/// A list of bodies in a common ambient dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleJson {
    pub dimension: usize,
    pub bodies: Vec<BodyJson>,
}

impl TupleJson {
    pub fn into_bodies(self) -> Result<Vec<Body>> {
        let bodies: Vec<Body> = self.bodies.into_iter().map(BodyJson::into_body).collect::<Result<_>>()?;
        if let Some(b) = bodies.iter().find(|b| b.dim() != self.dimension) {
            return Err(Error::Dimension(format!(
                "a {} of dimension {} in a tuple of dimension {}",
                b.kind(),
                b.dim(),
                self.dimension
            )));
        }
        Ok(bodies)
    }

    pub fn into_tuple(self) -> Result<BodyTuple> {
        BodyTuple::new(self.into_bodies()?)
    }

    pub fn from_bodies(bodies: &[Body]) -> Self {
        TupleJson {
            dimension: bodies.first().map_or(0, Body::dim),
            bodies: bodies.iter().map(BodyJson::from_body).collect(),
        }
    }
}

/// A matrix as row-major rational strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Row>);

impl MatrixJson {
    pub fn into_matrix(self) -> Result<Matrix> {
        Matrix::from_rows(self.0.into_iter().map(unwrap_row).collect())
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixJson(m.to_rows().iter().map(|r| wrap_row(r)).collect())
    }
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// Takes `key` out of an object, or the whole value if it is not an object.
fn unwrap_key(v: Value, key: &str) -> Result<Value> {
    match v {
        Value::Object(mut o) => o.remove(key).ok_or_else(|| Error::Parse(format!("expected a {key:?} field"))),
        other => Ok(other),
    }
}

/// Bare rows or `{"matrix": rows}`.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    from_value::<MatrixJson>(unwrap_key(parse(text)?, "matrix")?, "matrix")?.into_matrix()
}

/// A list of symmetric matrices, bare or `{"matrices": [...]}`.
pub fn parse_sym_matrices(text: &str) -> Result<Vec<SymMatrix>> {
    let list: Vec<MatrixJson> = from_value(unwrap_key(parse(text)?, "matrices")?, "matrices")?;
    list.into_iter().map(|m| SymMatrix::new(m.into_matrix()?)).collect()
}

/// Bodies given as a tuple document, as box side lengths
/// (`{"sides": rows}`, one box per row) or as segments from the origin
/// (`{"segments": rows}`).
pub fn parse_bodies(text: &str) -> Result<Vec<Body>> {
    bodies_from_value(parse(text)?)
}

pub fn bodies_from_value(v: Value) -> Result<Vec<Body>> {
    let Value::Object(mut o) = v else {
        return Err(Error::Parse("expected an object with \"bodies\", \"sides\" or \"segments\"".into()));
    };
    if let Some(sides) = o.remove("sides") {
        let m = from_value::<MatrixJson>(sides, "sides")?.into_matrix()?;
        return (0..m.rows()).map(|i| Ok(Body::Box(AxisBox::from_lengths(m.row(i))?))).collect();
    }
    if let Some(segs) = o.remove("segments") {
        let rows: Vec<_> = from_value::<Vec<Row>>(segs, "segments")?.into_iter().map(unwrap_row).collect();
        if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(Error::Dimension("segments of different dimensions".into()));
        }
        return rows.into_iter().map(|v| Ok(Body::Zonotope(Zonotope::segment(v)?))).collect();
    }
    if o.contains_key("bodies") {
        return from_value::<TupleJson>(Value::Object(o), "tuple document")?.into_bodies();
    }
    Err(Error::Parse("expected an object with \"bodies\", \"sides\" or \"segments\"".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub index: Vec<usize>,
    pub value: RationalStr,
}

/// Coefficients in lexicographic index order.
pub fn polynomial_to_json(vp: &VolumePolynomial) -> Vec<TermJson> {
    vp.iter().map(|(i, v)| TermJson { index: i.0.clone(), value: RationalStr(v.clone()) }).collect()
}

/// Missing indices are read as zero.
pub fn polynomial_from_json(k: usize, n: usize, terms: Vec<TermJson>) -> Result<VolumePolynomial> {
    let mut map = std::collections::BTreeMap::new();
    for t in terms {
        if map.insert(MultiIndex(t.index.clone()), t.value.0).is_some() {
            return Err(Error::Parse(format!("repeated index {:?}", t.index)));
        }
    }
    VolumePolynomial::new(k, n, map)
}

/// A volume polynomial document: `{"k": .., "n": .., "coefficients": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialJson {
    pub k: usize,
    pub n: usize,
    pub coefficients: Vec<TermJson>,
}

impl PolynomialJson {
    pub fn from_polynomial(vp: &VolumePolynomial) -> Self {
        PolynomialJson { k: vp.k(), n: vp.n(), coefficients: polynomial_to_json(vp) }
    }

    pub fn into_polynomial(self) -> Result<VolumePolynomial> {
        polynomial_from_json(self.k, self.n, self.coefficients)
    }
}

/// A polynomial document, a bare coefficient list (`k` and `n` read off
/// the first index), or bodies whose polynomial is computed.
pub fn parse_polynomial(text: &str) -> Result<VolumePolynomial> {
    match parse::<Value>(text)? {
        Value::Array(terms) => {
            let terms: Vec<TermJson> = from_value(Value::Array(terms), "coefficients")?;
            let first = terms.first().ok_or_else(|| Error::Parse("empty coefficient list".into()))?;
            let (k, n) = (first.index.len(), first.index.iter().sum());
            polynomial_from_json(k, n, terms)
        }
        Value::Object(o) if o.contains_key("coefficients") => {
            from_value::<PolynomialJson>(Value::Object(o), "volume polynomial")?.into_polynomial()
        }
        other => volume_polynomial(&BodyTuple::new(bodies_from_value(other)?)?),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportJson {
    pub index: Vec<usize>,
    pub weight: RationalStr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub center: Vec<usize>,
    pub support: Vec<SupportJson>,
    pub lhs: RationalStr,
    pub rhs: RationalStr,
    pub comparison: String,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        CertificateJson {
            center: c.center.0.clone(),
            support: c
                .support
                .iter()
                .map(|(i, w)| SupportJson { index: i.0.clone(), weight: RationalStr(w.clone()) })
                .collect(),
            lhs: RationalStr(c.lhs.clone()),
            rhs: RationalStr(c.rhs.clone()),
            comparison: c.comparison.clone(),
        }
    }
}

impl CertificateJson {
    pub fn into_certificate(self) -> Certificate {
        Certificate {
            center: MultiIndex(self.center),
            support: self.support.into_iter().map(|s| (MultiIndex(s.index), s.weight.0)).collect(),
            lhs: self.lhs.0,
            rhs: self.rhs.0,
            comparison: self.comparison,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub verdict: String,
    pub checked_count: usize,
    pub certificates: Vec<CertificateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tightest: Option<CertificateJson>,
}

impl From<&Report> for ReportJson {
    fn from(r: &Report) -> Self {
        ReportJson {
            verdict: r.verdict.as_str().to_string(),
            checked_count: r.checked_count,
            certificates: r.certificates.iter().map(Into::into).collect(),
            tightest: r.tightest.as_ref().map(Into::into),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FindingJson {
    pub side_matrix: Vec<Row>,
    pub target: String,
    pub certificate: CertificateJson,
    pub violation_ratio: RationalStr,
}

impl From<&Finding> for FindingJson {
    fn from(f: &Finding) -> Self {
        FindingJson {
            side_matrix: f.side_matrix.to_rows().iter().map(|r| wrap_row(r)).collect(),
            target: f.target.as_str().to_string(),
            certificate: (&f.certificate).into(),
            violation_ratio: RationalStr(f.violation_ratio.clone()),
        }
    }
}

impl FindingJson {
    pub fn into_finding(self) -> Result<Finding> {
        Ok(Finding {
            side_matrix: Matrix::from_rows(self.side_matrix.into_iter().map(unwrap_row).collect())?,
            target: self.target.parse()?,
            certificate: self.certificate.into_certificate(),
            violation_ratio: self.violation_ratio.0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryJson {
    pub evaluations: u64,
    pub findings: usize,
    pub best_ratio: Option<RationalStr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct SummaryRecord {
    summary: SummaryJson,
}

/// One finding per line, then a `{"summary": ...}` line.
pub fn write_search_jsonl(out: &SearchOutcome, w: &mut impl std::io::Write) -> std::io::Result<()> {
    for f in &out.findings {
        serde_json::to_writer(&mut *w, &FindingJson::from(f))?;
        writeln!(w)?;
    }
    let summary = SummaryRecord {
        summary: SummaryJson {
            evaluations: out.evaluations,
            findings: out.findings.len(),
            best_ratio: out.best_ratio().cloned().map(RationalStr),
        },
    };
    serde_json::to_writer(&mut *w, &summary)?;
    writeln!(w)
}

/// Reads findings from JSON lines, skipping blank lines and summary records.
/// A single JSON array of findings is accepted as well.
pub fn read_findings(text: &str) -> Result<Vec<Finding>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let list: Vec<FindingJson> = serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        return list.into_iter().map(FindingJson::into_finding).collect();
    }
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        if serde_json::from_str::<SummaryRecord>(line).is_ok() {
            continue;
        }
        let f: FindingJson =
            serde_json::from_str(line).map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
        out.push(f.into_finding()?);
    }
    Ok(out)
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
