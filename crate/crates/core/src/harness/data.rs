//! CSV ingestion and instance windowing for the experiment protocol.

use std::io::Read;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::search::PriceSequence;

/// Daily closing prices keyed by date, sorted and deduplicated at load time.
#[derive(Debug, Clone, PartialEq)]
pub struct DatedSeries {
    rows: Vec<(NaiveDate, f64)>,
}

impl DatedSeries {
    pub fn new(mut rows: Vec<(NaiveDate, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySeries);
        }
        for &(date, price) in &rows {
            if !price.is_finite() || price <= 0.0 {
                return Err(Error::InvalidInput(format!("non-positive price {price} on {date}")));
            }
        }
        rows.sort_by_key(|&(date, _)| date);
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput(format!("duplicate date {}", w[0].0)));
        }
        Ok(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[(NaiveDate, f64)] {
        &self.rows
    }

    pub fn closes(&self) -> Vec<f64> {
        self.rows.iter().map(|&(_, p)| p).collect()
    }
}

/// Parses a `date,close` CSV (ISO-8601 dates, decimal prices) into a sorted
/// series. Rows may arrive out of order; duplicates and non-positive prices
/// are rejected.
pub fn load_prices(source: impl Read) -> Result<DatedSeries> {
    let mut text = String::new();
    let mut source = source;
    source.read_to_string(&mut text)?;

    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptySeries)?;
    let normalized: String = header.split(',').map(str::trim).collect::<Vec<_>>().join(",");
    if normalized != "date,close" {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header 'date,close', got '{header}'"),
        });
    }

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (date_field, close_field) = match (fields.next(), fields.next(), fields.next()) {
            (Some(d), Some(c), None) => (d.trim(), c.trim()),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected two fields, got '{line}'"),
                })
            }
        };
        let date = NaiveDate::parse_from_str(date_field, "%Y-%m-%d").map_err(|e| Error::Parse {
            line: line_no,
            message: format!("bad date '{date_field}': {e}"),
        })?;
        let close: f64 = close_field.parse().map_err(|e| Error::Parse {
            line: line_no,
            message: format!("bad price '{close_field}': {e}"),
        })?;
        if !close.is_finite() || close <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "non-positive price {close} at line {line_no}"
            )));
        }
        rows.push((date, close));
    }
    DatedSeries::new(rows)
}

/// A set of fixed-length windows cut from one series, each carrying its own
/// realized min/max as bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSet {
    windows: Vec<PriceSequence>,
    window_length: usize,
}

impl InstanceSet {
    pub fn windows(&self) -> &[PriceSequence] {
        &self.windows
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }
}

/// Cuts `count` windows of `length` consecutive days with evenly spaced
/// starting offsets floor(i * (T - length) / (count - 1)). Windows overlap
/// whenever count * length exceeds the series.
pub fn make_instances(series: &DatedSeries, count: usize, length: usize) -> Result<InstanceSet> {
    if count == 0 || length == 0 {
        return Err(Error::InvalidParameter(
            "instance count and length must be positive".into(),
        ));
    }
    let total = series.len();
    if total < length {
        return Err(Error::InsufficientData(format!(
            "series has {total} days, need at least {length}"
        )));
    }
    let closes = series.closes();
    let span = total - length;
    let offsets: Vec<usize> = if count == 1 {
        vec![0]
    } else {
        (0..count).map(|i| i * span / (count - 1)).collect()
    };
    let windows = offsets
        .into_iter()
        .map(|s| PriceSequence::from_prices(closes[s..s + length].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(InstanceSet {
        windows,
        window_length: length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_two_row_file() {
        let s = load_prices("date,close\n2018-01-01,100.5\n2018-01-02,99.0".as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.closes(), vec![100.5, 99.0]);
    }

    #[test]
    fn empty_body_is_an_empty_series() {
        assert!(matches!(load_prices("date,close\n".as_bytes()), Err(Error::EmptySeries)));
        assert!(matches!(load_prices("".as_bytes()), Err(Error::EmptySeries)));
    }

    #[test]
    fn out_of_order_rows_are_sorted() {
        let s = load_prices("date,close\n2018-01-03,3.0\n2018-01-01,1.0\n2018-01-02,2.0".as_bytes())
            .unwrap();
        assert_eq!(s.closes(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn malformed_rows_carry_line_numbers() {
        let err = load_prices("date,close\n2018-01-01,1.0\nnot-a-date,2.0".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
        let err = load_prices("date,close\n2018-01-01,-4".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn duplicate_dates_are_rejected() {
        let err = load_prices("date,close\n2018-01-01,1.0\n2018-01-01,2.0".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    fn series_of(n: usize) -> DatedSeries {
        let start = NaiveDate::from_ymd_opt(2018, 1, 1).unwrap();
        DatedSeries::new(
            (0..n)
                .map(|i| (start + chrono::Days::new(i as u64), 100.0 + (i % 7) as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn offsets_match_the_formula() {
        let s = series_of(1339);
        let set = make_instances(&s, 20, 200).unwrap();
        assert_eq!(set.len(), 20);
        // s_0 = 0, s_19 = 1139, gaps of 59-60 days.
        let expected: Vec<usize> = (0..20).map(|i| i * 1139 / 19).collect();
        assert_eq!(expected[0], 0);
        assert_eq!(expected[19], 1139);
        for w in expected.windows(2) {
            let gap = w[1] - w[0];
            assert!(gap == 59 || gap == 60);
        }
    }

    #[test]
    fn single_window_and_degenerate_lengths() {
        let s = series_of(300);
        let set = make_instances(&s, 1, 200).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.windows()[0].prices()[0], 100.0);

        let exact = make_instances(&s, 5, 300).unwrap();
        assert_eq!(exact.len(), 5);
        assert!(exact.windows().iter().all(|w| w.len() == 300));

        assert!(make_instances(&s, 3, 301).is_err());
    }

    #[test]
    fn window_bounds_are_realized_min_max() {
        let s = series_of(250);
        let set = make_instances(&s, 3, 200).unwrap();
        for w in set.windows() {
            let min = w.prices().iter().copied().fold(f64::INFINITY, f64::min);
            let max = w.prices().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(w.bounds().min(), min);
            assert_eq!(w.bounds().max(), max);
        }
    }
}
