//! Serialized forms: canonical JSON for codes and verification reports,
//! CSV summaries, and the one-line text form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::VerificationReport;
use crate::charsum::SweepRow;
use crate::codes::{weight_enumerator, DefiningSet, Family, WeightDistribution};
use crate::error::{Error, Result};
use crate::field::{parse_mask, poly_to_string, Field};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusInfo {
    pub mask: String,
    pub poly: String,
}

impl ModulusInfo {
    pub fn of(field: &Field) -> Self {
        ModulusInfo {
            mask: format!("{:#x}", field.modulus()),
            poly: poly_to_string(field.modulus()),
        }
    }

    pub fn mask_value(&self) -> Option<u32> {
        parse_mask(&self.mask)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCount {
    pub w: u32,
    #[serde(rename = "A")]
    pub a: u64,
}

impl WeightCount {
    pub fn list(w: &WeightDistribution) -> Vec<WeightCount> {
        w.counts
            .iter()
            .map(|(&w, &a)| WeightCount { w, a })
            .collect()
    }
}

/// One code with its measured distribution; the canonical JSON record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub family: Family,
    pub m: u32,
    pub d: u64,
    pub modulus: ModulusInfo,
    pub n: u64,
    pub k: u32,
    pub counts: Vec<WeightCount>,
}

impl CodeReport {
    pub fn new(set: &DefiningSet<'_>, w: &WeightDistribution) -> Self {
        CodeReport {
            family: set.family(),
            m: set.field().degree(),
            d: set.d(),
            modulus: ModulusInfo::of(set.field()),
            n: w.n,
            k: w.k,
            counts: WeightCount::list(w),
        }
    }

    pub fn distribution(&self) -> WeightDistribution {
        let counts: BTreeMap<u32, u64> = self.counts.iter().map(|c| (c.w, c.a)).collect();
        WeightDistribution {
            n: self.n,
            k: self.k,
            counts,
        }
    }

    /// `[n,k,d]  enumerator`
    pub fn text_line(&self) -> String {
        let w = self.distribution();
        format!("{}  {}", w.parameters(), weight_enumerator(&w))
    }
}

/// Pretty JSON with a trailing newline. Key order follows the struct
/// definitions, so output is byte-stable.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

pub fn parse_code_report(json: &str) -> Result<CodeReport> {
    serde_json::from_str(json).map_err(|e| Error::Config(format!("code report: {e}")))
}

fn write_csv<R: Serialize>(rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

#[derive(Serialize)]
struct WeightRow {
    family: Family,
    m: u32,
    d: u64,
    modulus: String,
    n: u64,
    k: u32,
    w: u32,
    #[serde(rename = "A")]
    a: u64,
}

/// One row per weight, across all reports.
pub fn code_reports_csv(reports: &[CodeReport]) -> String {
    write_csv(reports.iter().flat_map(|r| {
        r.counts.iter().map(move |c| WeightRow {
            family: r.family,
            m: r.m,
            d: r.d,
            modulus: r.modulus.mask.clone(),
            n: r.n,
            k: r.k,
            w: c.w,
            a: c.a,
        })
    }))
}

#[derive(Serialize)]
struct SummaryRow {
    family: Family,
    m: u32,
    d: u64,
    modulus: String,
    n: u64,
    k: u32,
    d_min: u32,
    theorem_scope: bool,
    distribution_match: String,
    projective: bool,
    minimal_ratio: bool,
    minimal_exhaustive: String,
    pless_ok: bool,
    dimension_ok: bool,
    griesmer_optimal: bool,
    status: &'static str,
}

fn opt_bool(v: Option<bool>) -> String {
    v.map_or_else(|| "n/a".to_string(), |b| b.to_string())
}

/// One summary row per `(family, m, d)` report.
pub fn verification_csv(reports: &[VerificationReport]) -> String {
    write_csv(reports.iter().map(|r| SummaryRow {
        family: r.family,
        m: r.m,
        d: r.d,
        modulus: r.modulus.mask.clone(),
        n: r.n,
        k: r.k,
        d_min: r.d_min,
        theorem_scope: r.theorem_scope,
        distribution_match: opt_bool(r.distribution_match),
        projective: r.projective,
        minimal_ratio: r.minimal_ratio,
        minimal_exhaustive: opt_bool(r.minimal_exhaustive),
        pless_ok: r.pless_ok,
        dimension_ok: r.dimension_ok,
        griesmer_optimal: r.griesmer_optimal,
        status: if r.passed() { "pass" } else { "fail" },
    }))
}

pub fn verification_text(r: &VerificationReport) -> String {
    let scope = if r.theorem_scope {
        "in theorem scope"
    } else {
        "out of theorem scope, measured only"
    };
    let status = if r.passed() {
        "PASS".to_string()
    } else {
        format!("FAIL ({})", r.failures.join(", "))
    };
    format!(
        "{} m={} d={} [{},{},{}] {}: distribution={} projective={} minimal_ratio={} \
         minimal_exhaustive={} pless={} dimension={} griesmer_optimal={}  {}",
        r.family,
        r.m,
        r.d,
        r.n,
        r.k,
        r.d_min,
        scope,
        opt_bool(r.distribution_match),
        r.projective,
        r.minimal_ratio,
        opt_bool(r.minimal_exhaustive),
        r.pless_ok,
        r.dimension_ok,
        r.griesmer_optimal,
        status
    )
}

#[derive(Serialize)]
struct SweepCsvRow {
    sum_id: String,
    m: u32,
    d: u64,
    a: String,
    b: String,
    direct: i64,
    predicted_set: String,
    ok: bool,
}

/// Lemma check matrix; rows without a closed-form case are left out.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    write_csv(rows.iter().filter_map(|r| {
        r.predicted.as_ref().map(|p| SweepCsvRow {
            sum_id: r.sum_id.to_string(),
            m: r.m,
            d: r.d,
            a: r.a.to_string(),
            b: r.b.to_string(),
            direct: r.direct,
            predicted_set: p.to_string(),
            ok: r.ok(),
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{weight_distribution, Enumeration};

    #[test]
    fn json_round_trip_and_text() {
        let f = Field::new(3).unwrap();
        let set = DefiningSet::new(Family::D1, &f, 1).unwrap();
        let w = weight_distribution(&set, &Enumeration::default()).unwrap();
        let report = CodeReport::new(&set, &w);
        let json = to_canonical_json(&report);
        assert!(json.starts_with("{\n  \"family\": \"D1\",\n  \"m\": 3,"));
        let back = parse_code_report(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.distribution(), w);
        assert_eq!(back.modulus.mask_value(), Some(0xb));
        assert_eq!(
            report.text_line(),
            "[24,6,10]  1+24z^10+12z^12+24z^14+3z^16"
        );
    }

    #[test]
    fn csv_shapes() {
        let f = Field::new(3).unwrap();
        let set = DefiningSet::new(Family::D3, &f, 1).unwrap();
        let w = weight_distribution(&set, &Enumeration::default()).unwrap();
        let csv = code_reports_csv(&[CodeReport::new(&set, &w)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "family,m,d,modulus,n,k,w,A");
        assert_eq!(lines[1], "D3,3,1,0xb,12,6,0,1");
        assert_eq!(lines.len(), 6);
    }
}
