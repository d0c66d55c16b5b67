//! Flat record tables in CSV or JSON-lines form.
//!
//! Both formats start with a header line naming the columns, use LF line
//! endings and print floats with 17 significant digits, so every value
//! parses back to the identical `f64`.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::correlators::LGResult;
use crate::extrema::ExtremumRoot;
use crate::noise::NoiseChannel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "jsonl" => Some(Format::Jsonl),
            _ => None,
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Text,
    Num,
    Flag,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Text(String),
    Num(f64),
    Flag(bool),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A row type with a fixed column layout.
pub trait Record: Sized {
    const COLUMNS: &'static [(&'static str, Kind)];

    fn values(&self) -> Vec<Value>;

    /// Rebuilds the record from values matching [`Record::COLUMNS`].
    fn from_values(values: Vec<Value>) -> Self;
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_line<R: Record>(r: &R) -> String {
    let cells: Vec<String> = r
        .values()
        .into_iter()
        .map(|v| match v {
            Value::Text(s) => s,
            Value::Num(x) => num(x),
            Value::Flag(b) => b.to_string(),
        })
        .collect();
    cells.join(",")
}

fn json_line<R: Record>(r: &R) -> String {
    let mut out = String::from("{");
    for (i, ((name, _), v)) in R::COLUMNS.iter().zip(r.values()).enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "\"{name}\":");
        match v {
            Value::Text(s) => out.push_str(&serde_json::Value::String(s).to_string()),
            Value::Num(x) if x.is_finite() => out.push_str(&num(x)),
            Value::Num(_) => out.push_str("null"),
            Value::Flag(b) => out.push_str(if b { "true" } else { "false" }),
        }
    }
    out.push('}');
    out
}

/// Header line without the trailing newline.
pub fn header<R: Record>(format: Format) -> String {
    let names: Vec<&str> = R::COLUMNS.iter().map(|(n, _)| *n).collect();
    match format {
        Format::Csv => names.join(","),
        Format::Jsonl => serde_json::to_string(&names).expect("column names serialize"),
    }
}

pub fn write_records<'a, R: Record + 'a, W: Write>(
    w: &mut W,
    format: Format,
    records: impl IntoIterator<Item = &'a R>,
) -> io::Result<()> {
    writeln!(w, "{}", header::<R>(format))?;
    for r in records {
        let line = match format {
            Format::Csv => csv_line(r),
            Format::Jsonl => json_line(r),
        };
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn to_string<R: Record>(format: Format, records: &[R]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, format, records).expect("writing to memory");
    String::from_utf8(buf).expect("records are UTF-8")
}

fn parse_cell(kind: Kind, cell: &str) -> Option<Value> {
    match kind {
        Kind::Text => Some(Value::Text(cell.to_string())),
        Kind::Num => cell.parse().ok().map(Value::Num),
        Kind::Flag => cell.parse().ok().map(Value::Flag),
    }
}

fn parse_json_cell(kind: Kind, v: &serde_json::Value) -> Option<Value> {
    match (kind, v) {
        (Kind::Text, serde_json::Value::String(s)) => Some(Value::Text(s.clone())),
        (Kind::Num, serde_json::Value::Number(n)) => n.as_f64().map(Value::Num),
        (Kind::Num, serde_json::Value::Null) => Some(Value::Num(f64::NAN)),
        (Kind::Flag, serde_json::Value::Bool(b)) => Some(Value::Flag(*b)),
        _ => None,
    }
}

/// Parses a table written by [`write_records`], header included.
pub fn read_records<R: Record>(text: &str, format: Format) -> Result<Vec<R>, ParseError> {
    let mut lines = text.split('\n').enumerate().filter(|(_, l)| !l.is_empty());
    let err = |line: usize, message: String| ParseError { line: line + 1, message };
    match lines.next() {
        Some((_, h)) if h == header::<R>(format) => {}
        Some((i, h)) => return Err(err(i, format!("unexpected header '{h}'"))),
        None => return Err(err(0, "missing header".into())),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let values: Vec<Value> = match format {
            Format::Csv => {
                let cells: Vec<&str> = line.split(',').collect();
                if cells.len() != R::COLUMNS.len() {
                    return Err(err(i, format!("expected {} cells, got {}", R::COLUMNS.len(), cells.len())));
                }
                R::COLUMNS
                    .iter()
                    .zip(cells)
                    .map(|((name, kind), cell)| {
                        parse_cell(*kind, cell).ok_or_else(|| err(i, format!("bad value '{cell}' for {name}")))
                    })
                    .collect::<Result<_, _>>()?
            }
            Format::Jsonl => {
                let obj: serde_json::Map<String, serde_json::Value> =
                    serde_json::from_str(line).map_err(|e| err(i, e.to_string()))?;
                if obj.len() != R::COLUMNS.len() {
                    return Err(err(i, format!("expected {} keys, got {}", R::COLUMNS.len(), obj.len())));
                }
                R::COLUMNS
                    .iter()
                    .map(|(name, kind)| {
                        obj.get(*name)
                            .and_then(|v| parse_json_cell(*kind, v))
                            .ok_or_else(|| err(i, format!("missing or bad value for {name}")))
                    })
                    .collect::<Result<_, _>>()?
            }
        };
        out.push(R::from_values(values));
    }
    Ok(out)
}

struct Take(std::vec::IntoIter<Value>);

impl Take {
    fn text(&mut self) -> String {
        match self.0.next() {
            Some(Value::Text(s)) => s,
            other => panic!("expected text, got {other:?}"),
        }
    }

    fn num(&mut self) -> f64 {
        match self.0.next() {
            Some(Value::Num(x)) => x,
            other => panic!("expected number, got {other:?}"),
        }
    }

    fn flag(&mut self) -> bool {
        match self.0.next() {
            Some(Value::Flag(b)) => b,
            other => panic!("expected flag, got {other:?}"),
        }
    }
}

/// One sweep cell. `p1`, `p2` are (a, γ) for RTN, (Γ, γ) for OUN and
/// (Ω, 0) for the unitary channel.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputRecord {
    pub channel: String,
    pub p1: f64,
    pub p2: f64,
    pub regime: String,
    pub time_axis: String,
    pub dt: f64,
    pub theta: f64,
    pub phi: f64,
    pub c01: f64,
    pub c12: f64,
    pub c02: f64,
    pub k3: f64,
    pub k3_prime: f64,
}

impl OutputRecord {
    pub fn new(channel: &NoiseChannel, time_axis: &str, r: &LGResult) -> Self {
        let (p1, p2) = channel.parameters();
        Self {
            channel: channel.kind_name().to_string(),
            p1,
            p2,
            regime: r.regime.as_str().to_string(),
            time_axis: time_axis.to_string(),
            dt: r.dt,
            theta: r.theta,
            phi: r.phi,
            c01: r.triple.c01,
            c12: r.triple.c12,
            c02: r.triple.c02,
            k3: r.k3,
            k3_prime: r.k3_prime,
        }
    }
}

impl Record for OutputRecord {
    const COLUMNS: &'static [(&'static str, Kind)] = &[
        ("channel", Kind::Text),
        ("p1", Kind::Num),
        ("p2", Kind::Num),
        ("regime", Kind::Text),
        ("time_axis", Kind::Text),
        ("dt", Kind::Num),
        ("theta", Kind::Num),
        ("phi", Kind::Num),
        ("c01", Kind::Num),
        ("c12", Kind::Num),
        ("c02", Kind::Num),
        ("k3", Kind::Num),
        ("k3prime", Kind::Num),
    ];

    fn values(&self) -> Vec<Value> {
        vec![
            Value::Text(self.channel.clone()),
            Value::Num(self.p1),
            Value::Num(self.p2),
            Value::Text(self.regime.clone()),
            Value::Text(self.time_axis.clone()),
            Value::Num(self.dt),
            Value::Num(self.theta),
            Value::Num(self.phi),
            Value::Num(self.c01),
            Value::Num(self.c12),
            Value::Num(self.c02),
            Value::Num(self.k3),
            Value::Num(self.k3_prime),
        ]
    }

    fn from_values(values: Vec<Value>) -> Self {
        let mut t = Take(values.into_iter());
        Self {
            channel: t.text(),
            p1: t.num(),
            p2: t.num(),
            regime: t.text(),
            time_axis: t.text(),
            dt: t.num(),
            theta: t.num(),
            phi: t.num(),
            c01: t.num(),
            c12: t.num(),
            c02: t.num(),
            k3: t.num(),
            k3_prime: t.num(),
        }
    }
}

/// One cell of a (θ, φ, Δt) surface; `argmax` marks the largest K3.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceRecord {
    pub time_axis: String,
    pub dt: f64,
    pub theta: f64,
    pub phi: f64,
    pub k3: f64,
    pub k3_prime: f64,
    pub argmax: bool,
}

impl Record for SurfaceRecord {
    const COLUMNS: &'static [(&'static str, Kind)] = &[
        ("time_axis", Kind::Text),
        ("dt", Kind::Num),
        ("theta", Kind::Num),
        ("phi", Kind::Num),
        ("k3", Kind::Num),
        ("k3prime", Kind::Num),
        ("argmax", Kind::Flag),
    ];

    fn values(&self) -> Vec<Value> {
        vec![
            Value::Text(self.time_axis.clone()),
            Value::Num(self.dt),
            Value::Num(self.theta),
            Value::Num(self.phi),
            Value::Num(self.k3),
            Value::Num(self.k3_prime),
            Value::Flag(self.argmax),
        ]
    }

    fn from_values(values: Vec<Value>) -> Self {
        let mut t = Take(values.into_iter());
        Self {
            time_axis: t.text(),
            dt: t.num(),
            theta: t.num(),
            phi: t.num(),
            k3: t.num(),
            k3_prime: t.num(),
            argmax: t.flag(),
        }
    }
}

/// One stationary point of K3 along Δt.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremaRecord {
    pub family: String,
    pub time_axis: String,
    pub dt: f64,
    pub residual: f64,
    pub k3: f64,
    pub dk3: f64,
    pub is_max: bool,
    pub stationary: bool,
}

impl ExtremaRecord {
    /// `dt` is expressed on the requested axis: ν when `nu` is set.
    pub fn new(time_axis: &str, root: &ExtremumRoot) -> Self {
        let dt = match (time_axis, root.nu) {
            ("nu", Some(nu)) => nu,
            _ => root.dt,
        };
        Self {
            family: root.family.as_str().to_string(),
            time_axis: time_axis.to_string(),
            dt,
            residual: root.residual,
            k3: root.k3,
            dk3: root.dk3,
            is_max: root.is_maximum,
            stationary: root.stationary,
        }
    }
}

impl Record for ExtremaRecord {
    const COLUMNS: &'static [(&'static str, Kind)] = &[
        ("family", Kind::Text),
        ("time_axis", Kind::Text),
        ("dt", Kind::Num),
        ("residual", Kind::Num),
        ("k3", Kind::Num),
        ("dk3", Kind::Num),
        ("is_max", Kind::Flag),
        ("stationary", Kind::Flag),
    ];

    fn values(&self) -> Vec<Value> {
        vec![
            Value::Text(self.family.clone()),
            Value::Text(self.time_axis.clone()),
            Value::Num(self.dt),
            Value::Num(self.residual),
            Value::Num(self.k3),
            Value::Num(self.dk3),
            Value::Flag(self.is_max),
            Value::Flag(self.stationary),
        ]
    }

    fn from_values(values: Vec<Value>) -> Self {
        let mut t = Take(values.into_iter());
        Self {
            family: t.text(),
            time_axis: t.text(),
            dt: t.num(),
            residual: t.num(),
            k3: t.num(),
            dk3: t.num(),
            is_max: t.flag(),
            stationary: t.flag(),
        }
    }
}

/// One oracle-check case: chain and closed-form correlators side by side.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleRecord {
    pub case: f64,
    pub ti: f64,
    pub tj: f64,
    pub theta: f64,
    pub phi: f64,
    pub chain: f64,
    pub closed: f64,
    pub deviation: f64,
}

impl Record for OracleRecord {
    const COLUMNS: &'static [(&'static str, Kind)] = &[
        ("case", Kind::Num),
        ("ti", Kind::Num),
        ("tj", Kind::Num),
        ("theta", Kind::Num),
        ("phi", Kind::Num),
        ("chain", Kind::Num),
        ("closed", Kind::Num),
        ("deviation", Kind::Num),
    ];

    fn values(&self) -> Vec<Value> {
        [self.case, self.ti, self.tj, self.theta, self.phi, self.chain, self.closed, self.deviation]
            .into_iter()
            .map(Value::Num)
            .collect()
    }

    fn from_values(values: Vec<Value>) -> Self {
        let mut t = Take(values.into_iter());
        Self {
            case: t.num(),
            ti: t.num(),
            tj: t.num(),
            theta: t.num(),
            phi: t.num(),
            chain: t.num(),
            closed: t.num(),
            deviation: t.num(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> OutputRecord {
        OutputRecord {
            channel: "rtn".into(),
            p1: 0.05,
            p2: 0.001,
            regime: "non-markovian".into(),
            time_axis: "t".into(),
            dt: 0.1,
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
            c01: 1.0 / 3.0,
            c12: -2.5e-300,
            c02: 1e300,
            k3: 1.1,
            k3_prime: -0.0,
        }
    }

    #[test]
    fn csv_layout() {
        let text = to_string(Format::Csv, &[sample()]);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "channel,p1,p2,regime,time_axis,dt,theta,phi,c01,c12,c02,k3,k3prime"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("rtn,5.0000000000000003e-2,"));
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn jsonl_lines_are_json() {
        let text = to_string(Format::Jsonl, &[sample(), sample()]);
        for line in text.lines() {
            serde_json::from_str::<serde_json::Value>(line).unwrap();
        }
        assert!(text.starts_with("[\"channel\",\"p1\""));
    }

    #[test]
    fn bad_rows_report_line() {
        let text = format!("{}\nrtn,1\n", header::<OutputRecord>(Format::Csv));
        let e = read_records::<OutputRecord>(&text, Format::Csv).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(read_records::<OutputRecord>("nope\n", Format::Csv).is_err());
    }

    #[test]
    fn negative_zero_survives() {
        for format in [Format::Csv, Format::Jsonl] {
            let back: Vec<OutputRecord> = read_records(&to_string(format, &[sample()]), format).unwrap();
            assert!(back[0].k3_prime.is_sign_negative());
        }
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![
            any::<f64>().prop_filter("finite", |x| x.is_finite()),
            -10.0..10.0f64,
        ]
    }

    proptest! {
        #[test]
        fn output_records_round_trip(
            nums in proptest::collection::vec(finite(), 10),
            jsonl in any::<bool>(),
        ) {
            let r = OutputRecord {
                channel: "oun".into(),
                p1: nums[0], p2: nums[1],
                regime: "intermediate".into(),
                time_axis: "t".into(),
                dt: nums[2], theta: nums[3], phi: nums[4],
                c01: nums[5], c12: nums[6], c02: nums[7],
                k3: nums[8], k3_prime: nums[9],
            };
            let format = if jsonl { Format::Jsonl } else { Format::Csv };
            let back: Vec<OutputRecord> = read_records(&to_string(format, std::slice::from_ref(&r)), format).unwrap();
            prop_assert_eq!(back.len(), 1);
            for (a, b) in r.values().iter().zip(back[0].values()) {
                if let (Value::Num(x), Value::Num(y)) = (a, &b) {
                    prop_assert_eq!(x.to_bits(), y.to_bits());
                } else {
                    prop_assert_eq!(a, &b);
                }
            }
        }

        #[test]
        fn extrema_records_round_trip(x in finite(), y in finite(), m in any::<bool>()) {
            let r = ExtremaRecord {
                family: "condition".into(),
                time_axis: "nu".into(),
                dt: x, residual: y.abs(), k3: x * 0.5, dk3: y,
                is_max: m, stationary: !m,
            };
            for format in [Format::Csv, Format::Jsonl] {
                let back: Vec<ExtremaRecord> = read_records(&to_string(format, std::slice::from_ref(&r)), format).unwrap();
                prop_assert_eq!(&back[0], &r);
            }
        }
    }
}
