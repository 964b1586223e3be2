//! Series given on the command line as `kind:arguments`.

use std::path::Path;

use congrlab::fixtures::NewformFixture;
use congrlab::qseries::{
    eisenstein_e, eisenstein_label, eisenstein_level, eta_product, AnySeries, QSeries, Rationals, SeriesJson,
};
use congrlab::{Error, Result};

/// A rational series with an optional `(k, p)` for the Sturm bound.
pub struct Resolved {
    pub label: String,
    pub series: QSeries<Rationals>,
    pub level: Option<(i64, u64)>,
}

fn bad(spec: &str, why: &str) -> Error {
    Error::Parse(format!("series spec {spec:?}: {why}"))
}

fn nums<T: std::str::FromStr>(spec: &str, body: &str) -> Result<Vec<T>> {
    body.split(',')
        .map(|t| t.trim().trim_start_matches('+').parse().map_err(|_| bad(spec, "expected numbers")))
        .collect()
}

/// Parses `fixture:NAME`, `eta:D^R,...`, `eisenstein:K`, `eisenstein:K,P,EPS` or `json:PATH`.
pub fn resolve(spec: &str, prec: usize) -> Result<Resolved> {
    let (kind, body) = spec.split_once(':').ok_or_else(|| bad(spec, "expected kind:arguments"))?;
    match kind {
        "fixture" => {
            let fx = NewformFixture::load(Path::new(body))?;
            match fx.series()? {
                AnySeries::Rational(series) => {
                    Ok(Resolved { label: fx.label.clone(), series, level: Some((fx.k, fx.p)) })
                }
                _ => Err(Error::BadParameters(format!(
                    "fixture {} has coefficients in a number field; use verify-nf",
                    fx.label
                ))),
            }
        }
        "eta" => {
            let mut terms = Vec::new();
            for t in body.split(',') {
                let (d, r) = t.split_once('^').ok_or_else(|| bad(spec, "expected D^R terms"))?;
                let d = d.trim().parse().map_err(|_| bad(spec, "bad eta level"))?;
                let r = r.trim().parse().map_err(|_| bad(spec, "bad eta exponent"))?;
                terms.push((d, r));
            }
            Ok(Resolved { label: format!("eta[{body}]"), series: eta_product(&terms, prec)?, level: None })
        }
        "eisenstein" => {
            let v: Vec<i64> = nums(spec, body)?;
            match v[..] {
                [k] => Ok(Resolved { label: format!("E_{k}"), series: eisenstein_e(k, prec)?, level: Some((k, 1)) }),
                [k, p, eps] if p > 0 => Ok(Resolved {
                    label: eisenstein_label(k, p as u64, eps),
                    series: eisenstein_level(k, p as u64, eps, prec)?,
                    level: Some((k, p as u64)),
                }),
                _ => Err(bad(spec, "expected K or K,P,EPS")),
            }
        }
        "json" => {
            let text = std::fs::read_to_string(body).map_err(|e| Error::Parse(format!("{body}: {e}")))?;
            let j: SeriesJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            match AnySeries::from_json(&j)? {
                AnySeries::Rational(series) => Ok(Resolved { label: body.to_string(), series, level: None }),
                _ => Err(Error::BadParameters("only rational series can be verified here".into())),
            }
        }
        _ => Err(bad(spec, "unknown kind")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_resolve() {
        let r = resolve("eta:1^8,2^8", 10).unwrap();
        assert_eq!(r.series.prec(), 10);
        let r = resolve("eisenstein:8,2,+1", 10).unwrap();
        assert_eq!(r.level, Some((8, 2)));
        let r = resolve("fixture:ex4", 5).unwrap();
        assert_eq!(r.series.prec(), 10);
        assert!(matches!(resolve("fixture:ex1", 5), Err(Error::BadParameters(_))));
        assert!(matches!(resolve("nope", 5), Err(Error::Parse(_))));
        assert!(matches!(resolve("eisenstein:1,2", 5), Err(Error::Parse(_))));
    }
}
