//! Wire formats for tables, multiplicity matrices and verification reports.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use wkl_core::heckemod::{Basis, ModuleElement};
use wkl_core::{
    CartanDatum, CartanType, CosetId, KlTable, LaurentPoly, MultiplicityMatrix, ParabolicQuotient, TableKind,
    ThetaSubset, VerifyReport, WeylGroup,
};

use crate::job::Format;

pub const COSET_ORDER: &str = "whittaker-coset-order-v1";

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed table JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported coset order {0:?}")]
    Order(String),
    #[error("{0}")]
    Shape(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct CosetRecord {
    i: u32,
    min_word: Vec<usize>,
    max_word: Vec<usize>,
    max_len: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryRecord {
    c: u32,
    d: u32,
    poly: LaurentPoly,
}

#[derive(Debug, Serialize, Deserialize)]
struct MultEntryRecord {
    c: u32,
    d: u32,
    lambda: i64,
    mu: i64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Envelope<E> {
    cartan: String,
    theta: Vec<usize>,
    order: String,
    cosets: Vec<CosetRecord>,
    entries: Vec<E>,
}

/// 1-based generator labels of the ShortLex word.
fn word(g: &WeylGroup, w: wkl_core::ElementId) -> Vec<usize> {
    g.reduced_word(w).into_iter().map(|s| s + 1).collect()
}

fn envelope<E>(q: &ParabolicQuotient, entries: Vec<E>) -> Envelope<E> {
    let g = q.group();
    Envelope {
        cartan: g.cartan_type().to_string(),
        theta: q.theta().labels(),
        order: COSET_ORDER.to_string(),
        cosets: q
            .cosets()
            .map(|c| CosetRecord {
                i: c.0,
                min_word: word(g, q.min_rep(c)),
                max_word: word(g, q.max_rep(c)),
                max_len: q.max_length(c),
            })
            .collect(),
        entries,
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable");
    out.push(b'\n');
    out
}

fn write_csv(rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

fn grid(header: &str, cells: &[Vec<String>]) -> String {
    let n = cells.len();
    let index_width = n.saturating_sub(1).to_string().len().max(1);
    let width = cells.iter().flatten().map(String::len).chain((0..n).map(|i| i.to_string().len())).max().unwrap_or(1);
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    out.push_str(&" ".repeat(index_width));
    for j in 0..n {
        out.push_str(&format!("  {j:>width$}"));
    }
    out.push('\n');
    for (i, row) in cells.iter().enumerate() {
        out.push_str(&format!("{i:>index_width$}"));
        for cell in row {
            out.push_str(&format!("  {cell:>width$}"));
        }
        out.push('\n');
    }
    out
}

fn coset_lines(q: &ParabolicQuotient) -> String {
    let g = q.group();
    let mut out = String::from("cosets (index: length, longest word)\n");
    for c in q.cosets() {
        let w: Vec<String> = word(g, q.max_rep(c)).iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("  {}: {}, [{}]\n", c.0, q.max_length(c), w.join(",")));
    }
    out
}

pub fn export_table(table: &KlTable, format: Format) -> Vec<u8> {
    let q = table.quotient();
    let n = table.len();
    match format {
        Format::Json => {
            let entries = table
                .entries()
                .map(|(c, d, p)| EntryRecord {
                    c: c.0,
                    d: d.0,
                    poly: p.clone(),
                })
                .collect();
            to_json(&envelope(q, entries))
        }
        Format::Csv => {
            let mut rows = vec![std::iter::once(String::new()).chain((0..n).map(|j| j.to_string())).collect()];
            for c in q.cosets() {
                let mut row = vec![c.0.to_string()];
                row.extend(q.cosets().map(|d| table.get(c, d).map(|p| p.to_string()).unwrap_or_default()));
                rows.push(row);
            }
            write_csv(rows)
        }
        Format::Text => {
            let cells: Vec<Vec<String>> = q
                .cosets()
                .map(|c| q.cosets().map(|d| table.get(c, d).map_or(".".to_string(), |p| p.to_string())).collect())
                .collect();
            let header = format!(
                "{} {} theta={} ({} cosets, {} nonzero entries)",
                table.kind(),
                q.group().cartan_type(),
                q.theta(),
                n,
                table.nonzero_count()
            );
            let mut out = grid(&header, &cells);
            out.push_str(&coset_lines(q));
            out.into_bytes()
        }
    }
}

pub fn export_multiplicities(q: &ParabolicQuotient, m: &MultiplicityMatrix, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut entries = Vec::new();
            for c in q.cosets() {
                for d in q.cosets() {
                    let (lambda, mu) = (m.lambda(c, d), m.mu(c, d));
                    if lambda != 0 || mu != 0 {
                        entries.push(MultEntryRecord { c: c.0, d: d.0, lambda, mu });
                    }
                }
            }
            to_json(&envelope(q, entries))
        }
        Format::Csv => {
            let mut rows = vec![std::iter::once(String::new()).chain(q.cosets().map(|j| j.0.to_string())).collect()];
            for c in q.cosets() {
                let mut row = vec![c.0.to_string()];
                row.extend(q.cosets().map(|d| m.mu(c, d).to_string()));
                rows.push(row);
            }
            write_csv(rows)
        }
        Format::Text => {
            let matrix = |f: &dyn Fn(CosetId, CosetId) -> i64| -> Vec<Vec<String>> {
                q.cosets().map(|c| q.cosets().map(|d| f(c, d).to_string()).collect()).collect()
            };
            let title = format!("{} theta={}", q.group().cartan_type(), q.theta());
            let mut out = grid(&format!("lambda {title}"), &matrix(&|c, d| m.lambda(c, d)));
            out.push('\n');
            out.push_str(&grid(&format!("mu {title}"), &matrix(&|c, d| m.mu(c, d))));
            out.push_str(&coset_lines(q));
            out.into_bytes()
        }
    }
}

pub fn export_report(report: &VerifyReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let mut rows = vec![["check", "status", "millis", "c", "d", "lhs", "rhs", "detail"].map(String::from).to_vec()];
            for (name, o) in report.iter() {
                let status = if o.passed() { "pass" } else { "fail" };
                let mut row = vec![name.to_string(), status.to_string(), o.millis.to_string()];
                match &o.counterexample {
                    Some(x) => row.extend([x.c.to_string(), x.d.to_string(), x.lhs.clone(), x.rhs.clone(), x.detail.clone()]),
                    None => row.extend(std::iter::repeat_n(String::new(), 5)),
                }
                rows.push(row);
            }
            write_csv(rows)
        }
        Format::Text => {
            let mut out = String::new();
            for (name, o) in report.iter() {
                let status = if o.passed() { "pass" } else { "FAIL" };
                out.push_str(&format!("{name:<12} {status} ({} ms)\n", o.millis));
                if let Some(x) = &o.counterexample {
                    out.push_str(&format!("    at ({}, {}): {} vs {}: {}\n", x.c, x.d, x.lhs, x.rhs, x.detail));
                }
            }
            out.into_bytes()
        }
    }
}

fn rebuild_quotient<E>(env: &Envelope<E>) -> Result<Arc<ParabolicQuotient>, ParseError> {
    if env.order != COSET_ORDER {
        return Err(ParseError::Order(env.order.clone()));
    }
    let cartan: CartanType = env.cartan.parse().map_err(|e| ParseError::Shape(format!("{e}")))?;
    let group = WeylGroup::enumerate(&CartanDatum::new(cartan)).map_err(|e| ParseError::Shape(e.to_string()))?;
    let rank = group.rank();
    if env.theta.iter().any(|&k| k == 0 || k > rank) {
        return Err(ParseError::Shape(format!("theta {:?} out of range", env.theta)));
    }
    let theta = ThetaSubset::new(env.theta.iter().map(|k| k - 1).collect(), rank).expect("checked range");
    let q = ParabolicQuotient::new(Arc::new(group), theta);
    if env.cosets.len() != q.len() {
        return Err(ParseError::Shape(format!("expected {} cosets, found {}", q.len(), env.cosets.len())));
    }
    let g = q.group();
    for (c, rec) in q.cosets().zip(&env.cosets) {
        if rec.i != c.0
            || rec.min_word != word(g, q.min_rep(c))
            || rec.max_word != word(g, q.max_rep(c))
            || rec.max_len != q.max_length(c)
        {
            return Err(ParseError::Shape(format!("coset record {} does not match the coset order", rec.i)));
        }
    }
    Ok(Arc::new(q))
}

/// Parses a JSON table. The kind is not part of the wire format and must be
/// supplied by the caller.
pub fn parse_table(bytes: &[u8], kind: TableKind) -> Result<KlTable, ParseError> {
    let env: Envelope<EntryRecord> = serde_json::from_slice(bytes)?;
    let q = rebuild_quotient(&env)?;
    let n = q.len() as u32;
    let mut rows: Vec<BTreeMap<CosetId, LaurentPoly>> = vec![BTreeMap::new(); q.len()];
    for e in env.entries {
        if e.c >= n || e.d >= n {
            return Err(ParseError::Shape(format!("entry ({}, {}) out of range", e.c, e.d)));
        }
        if e.poly.is_zero() || rows[e.c as usize].insert(CosetId(e.d), e.poly).is_some() {
            return Err(ParseError::Shape(format!("zero or duplicate entry ({}, {})", e.c, e.d)));
        }
    }
    let rows = rows.into_iter().map(|r| ModuleElement::from_terms(Basis::Delta, r)).collect();
    Ok(KlTable::from_rows(q, kind, rows))
}

/// Parses a JSON multiplicity file.
pub fn parse_multiplicities(bytes: &[u8]) -> Result<(Arc<ParabolicQuotient>, MultiplicityMatrix), ParseError> {
    let env: Envelope<MultEntryRecord> = serde_json::from_slice(bytes)?;
    let q = rebuild_quotient(&env)?;
    let n = q.len();
    let mut lambda = vec![0; n * n];
    let mut mu = vec![0; n * n];
    for e in &env.entries {
        let (c, d) = (e.c as usize, e.d as usize);
        if c >= n || d >= n {
            return Err(ParseError::Shape(format!("entry ({c}, {d}) out of range")));
        }
        lambda[c * n + d] = e.lambda;
        mu[c * n + d] = e.mu;
    }
    Ok((q, MultiplicityMatrix::from_dense(n, lambda, mu)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use wkl_core::{compute_whittaker_kl, multiplicities, KlOptions};

    fn quotient(t: &str, theta: &str) -> Arc<ParabolicQuotient> {
        let g = Arc::new(WeylGroup::enumerate(&CartanDatum::new(t.parse().unwrap())).unwrap());
        let theta = ThetaSubset::parse(theta, g.rank()).unwrap();
        Arc::new(ParabolicQuotient::new(g, theta))
    }

    #[test]
    fn full_theta_json() {
        let t = compute_whittaker_kl(&quotient("B2", "all"), KlOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&export_table(&t, Format::Json)).unwrap();
        assert_eq!(v["entries"], serde_json::json!([{"c": 0, "d": 0, "poly": {"0": 1}}]));
        assert_eq!(v["cosets"].as_array().unwrap().len(), 1);
        assert_eq!(v["theta"], serde_json::json!([1, 2]));
        assert_eq!(v["order"], COSET_ORDER);
    }

    #[test]
    fn a1_json_and_key_order() {
        let t = compute_whittaker_kl(&quotient("A1", "none"), KlOptions::default()).unwrap();
        let bytes = export_table(&t, Format::Json);
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert!(v["entries"].as_array().unwrap().contains(&serde_json::json!({"c": 1, "d": 0, "poly": {"1": 1}})));
        let s = String::from_utf8(bytes).unwrap();
        let pos = |k: &str| s.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("cartan") < pos("theta") && pos("theta") < pos("order"));
        assert!(pos("order") < pos("cosets") && pos("cosets") < pos("entries"));
    }

    #[test]
    fn a2_csv_and_text() {
        let t = compute_whittaker_kl(&quotient("A2", "1"), KlOptions::default()).unwrap();
        let csv = String::from_utf8(export_table(&t, Format::Csv)).unwrap();
        assert_eq!(csv, ",0,1,2\n0,1,,\n1,q,1,\n2,,q,1\n");
        let text = String::from_utf8(export_table(&t, Format::Text)).unwrap();
        assert!(text.contains("whittaker A2 theta=1"));
        let m = multiplicities(&t).unwrap();
        let csv = String::from_utf8(export_multiplicities(t.quotient(), &m, Format::Csv)).unwrap();
        assert_eq!(csv, ",0,1,2\n0,1,0,0\n1,1,1,0\n2,1,1,1\n");
    }

    #[test]
    fn round_trip() {
        for (ty, theta) in [("A2", "1"), ("B3", "none"), ("G2", "2"), ("C3", "1,3"), ("A1", "all")] {
            let q = quotient(ty, theta);
            let t = compute_whittaker_kl(&q, KlOptions::default()).unwrap();
            let bytes = export_table(&t, Format::Json);
            let back = parse_table(&bytes, TableKind::Whittaker).unwrap();
            assert!(back.same_entries(&t));
            assert_eq!(export_table(&back, Format::Json), bytes);

            let m = multiplicities(&t).unwrap();
            let bytes = export_multiplicities(&q, &m, Format::Json);
            let (q2, m2) = parse_multiplicities(&bytes).unwrap();
            assert_eq!(m2, m);
            assert_eq!(export_multiplicities(&q2, &m2, Format::Json), bytes);
        }
    }

    #[test]
    fn parse_rejects_tampering() {
        let t = compute_whittaker_kl(&quotient("A2", "1"), KlOptions::default()).unwrap();
        let s = String::from_utf8(export_table(&t, Format::Json)).unwrap();
        assert!(matches!(
            parse_table(s.replace(COSET_ORDER, "other-order").as_bytes(), TableKind::Whittaker),
            Err(ParseError::Order(_))
        ));
        assert!(parse_table(s.replace("\"A2\"", "\"A3\"").as_bytes(), TableKind::Whittaker).is_err());
        assert!(parse_table(b"{not json", TableKind::Whittaker).is_err());
    }
}
