use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Dataset, Param, SlabSample};
use crate::error::{Error, Result};

/// Exact header every input file must carry.
pub const CSV_HEADER: &str =
    "id,source,d_mm,c_mm,av_over_d,fy_mpa,rho_percent,fc_mpa,v_exp_kn,m_fs_knmm,b_mm";

const COLUMNS: usize = 11;

pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file)
}

/// Parses a dataset from any reader. `rho_percent` is converted to a
/// fraction; the two trailing columns may be empty.
pub fn read_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    let found = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if found != CSV_HEADER {
        return Err(Error::Header {
            expected: CSV_HEADER.to_string(),
            found,
        });
    }

    let mut samples = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record?;
        if record.len() != COLUMNS {
            return Err(Error::Field {
                row,
                field: "*",
                message: format!("expected {COLUMNS} columns, found {}", record.len()),
            });
        }
        let num = |idx: usize, param: Param| -> Result<f64> {
            let raw = record[idx].trim();
            raw.parse::<f64>().map_err(|_| Error::Field {
                row,
                field: param.column(),
                message: format!("not a number: `{raw}`"),
            })
        };
        let opt = |idx: usize, param: Param| -> Result<Option<f64>> {
            if record[idx].trim().is_empty() {
                Ok(None)
            } else {
                num(idx, param).map(Some)
            }
        };
        let sample = SlabSample {
            id: record[0].to_string(),
            source: record[1].to_string(),
            d: num(2, Param::D)?,
            c: num(3, Param::C)?,
            av_d: num(4, Param::AvD)?,
            fy: num(5, Param::Fy)?,
            rho: num(6, Param::Rho)? / 100.0,
            fc: num(7, Param::Fc)?,
            v_exp: num(8, Param::VExp)?,
            m_fs: opt(9, Param::MFs)?,
            b: opt(10, Param::B)?,
        };
        sample.validate(row)?;
        samples.push(sample);
    }
    Ok(Dataset { samples })
}

/// Writes a dataset in the ingestion schema (`rho` back to percent).
pub fn write_csv<W: Write>(ds: &Dataset, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(CSV_HEADER.split(','))?;
    let fmt_opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for s in ds {
        wtr.write_record([
            s.id.clone(),
            s.source.clone(),
            s.d.to_string(),
            s.c.to_string(),
            s.av_d.to_string(),
            s.fy.to_string(),
            (s.rho * 100.0).to_string(),
            s.fc.to_string(),
            s.v_exp.to_string(),
            fmt_opt(s.m_fs),
            fmt_opt(s.b),
        ])?;
    }
    wtr.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SELECTED: &str = "\
id,source,d_mm,c_mm,av_over_d,fy_mpa,rho_percent,fc_mpa,v_exp_kn,m_fs_knmm,b_mm
S1,Kotsovos et al.,205,255,6.2,655,0.085,24.25,600,,
S3,Kotsovos et al.,205,255,6.2,665,0.345,24.25,700,,
C1,Caldentey et al. 2013,255,455,5.6,555,1.075,33.95,1200,,
";

    #[test]
    fn loads_three_selected_samples() {
        let ds = read_csv(SELECTED.as_bytes()).unwrap();
        assert_eq!(ds.len(), 3);
        let depths: Vec<f64> = ds.iter().map(|s| s.d).collect();
        assert_eq!(depths, vec![205.0, 205.0, 255.0]);
        assert!((ds.samples[0].rho - 0.00085).abs() < 1e-15);
        assert_eq!(ds.samples[2].m_fs, None);
    }

    #[test]
    fn header_only_is_empty_dataset() {
        let ds = read_csv(format!("{CSV_HEADER}\n").as_bytes()).unwrap();
        assert!(ds.is_empty());
    }

    #[test]
    fn negative_fc_names_row_and_field() {
        let text = format!("{CSV_HEADER}\nX,src,205,255,6.2,655,0.085,-5,600,,\n");
        let err = read_csv(text.as_bytes()).unwrap_err();
        match err {
            Error::Field { row, field, .. } => {
                assert_eq!(row, 1);
                assert_eq!(field, "fc_mpa");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rejects_wrong_header() {
        let text = "id,source,d_mm\nS1,x,205\n";
        assert!(matches!(
            read_csv(text.as_bytes()),
            Err(Error::Header { .. })
        ));
    }

    #[test]
    fn rejects_non_numeric_cell() {
        let text = format!("{CSV_HEADER}\nX,src,abc,255,6.2,655,0.085,24,600,,\n");
        let err = read_csv(text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Field { field: "d_mm", .. }), "{err}");
    }

    #[test]
    fn rejects_missing_column() {
        let text = format!("{CSV_HEADER}\nX,src,205,255,6.2,655,0.085,24,600,\n");
        assert!(matches!(
            read_csv(text.as_bytes()),
            Err(Error::Field { row: 1, .. })
        ));
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_csv("/nonexistent/slabs.csv").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/slabs.csv"));
    }

    #[test]
    fn write_then_read_preserves_samples() {
        let ds = read_csv(SELECTED.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in ds.iter().zip(&back) {
            assert_eq!(a.id, b.id);
            assert!((a.rho - b.rho).abs() <= 1e-15);
            assert_eq!(a.d, b.d);
        }
    }
}
