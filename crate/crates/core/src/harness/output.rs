//! CSV and JSON emission.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which is
//! enough for every `f64` to read back bit-for-bit.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::phase_grid::{MacroFields, MacroState};

use super::diagnostics::ErrorTable;
use super::run::RunReport;

pub const FIELDS_HEADER: [&str; 5] = ["x", "rho", "u", "T", "p"];
pub const ENTROPY_HEADER: [&str; 2] = ["t", "H"];
pub const ERRORS_HEADER: [&str; 7] = [
    "N_x", "rho_err", "u_err", "T_err", "rho_order", "u_order", "T_order",
];

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

fn read_table<R: Read>(r: R, header: &[&str]) -> Result<Vec<Vec<String>>> {
    let mut rd = csv::ReaderBuilder::new().from_reader(r);
    let h = rd.headers().map_err(csv_err)?;
    if h.iter().ne(header.iter().copied()) {
        return Err(Error::Parse(format!("expected header {header:?}, found {h:?}")));
    }
    rd.records()
        .map(|rec| Ok(rec.map_err(csv_err)?.iter().map(str::to_owned).collect()))
        .collect()
}

pub fn write_fields<W: Write>(w: W, x: &[f64], fields: &MacroFields) -> Result<()> {
    let mut out = writer(w);
    out.write_record(FIELDS_HEADER).map_err(csv_err)?;
    let p = fields.pressure();
    for i in 0..fields.len() {
        out.write_record([
            fmt_f64(x[i]),
            fmt_f64(fields.rho[i]),
            fmt_f64(fields.u[i]),
            fmt_f64(fields.temperature[i]),
            fmt_f64(p[i]),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Positions and fields; the pressure column is not read back.
pub fn read_fields<R: Read>(r: R) -> Result<(Vec<f64>, MacroFields)> {
    let mut x = Vec::new();
    let mut fields = MacroFields::default();
    for row in read_table(r, &FIELDS_HEADER)? {
        x.push(parse_f64(&row[0])?);
        fields.push(MacroState::new(
            parse_f64(&row[1])?,
            parse_f64(&row[2])?,
            parse_f64(&row[3])?,
        ));
    }
    Ok((x, fields))
}

pub fn write_entropy<W: Write>(w: W, series: &[(f64, f64)]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(ENTROPY_HEADER).map_err(csv_err)?;
    for &(t, h) in series {
        out.write_record([fmt_f64(t), fmt_f64(h)]).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_entropy<R: Read>(r: R) -> Result<Vec<(f64, f64)>> {
    read_table(r, &ENTROPY_HEADER)?
        .iter()
        .map(|row| Ok((parse_f64(&row[0])?, parse_f64(&row[1])?)))
        .collect()
}

/// One row per resolution; the order columns are empty on the first row.
pub fn write_error_table<W: Write>(w: W, table: &ErrorTable) -> Result<()> {
    let mut out = writer(w);
    out.write_record(ERRORS_HEADER).map_err(csv_err)?;
    for row in &table.rows {
        let mut rec = vec![row.n_x.to_string()];
        rec.extend(row.errors.iter().map(|&e| fmt_f64(e)));
        match row.orders {
            Some(o) => rec.extend(o.iter().map(|&v| fmt_f64(v))),
            None => rec.extend(std::iter::repeat_n(String::new(), 3)),
        }
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_report_json<W: Write>(mut w: W, report: &RunReport) -> Result<()> {
    let text = serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string()))?;
    w.write_all(text.as_bytes())?;
    w.write_all(b"\n")?;
    Ok(())
}

/// Write `fields.csv`, `entropy.csv` and `report.json` into `dir`.
pub fn write_run(dir: &Path, report: &RunReport) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_fields(File::create(dir.join("fields.csv"))?, &report.x, &report.fields)?;
    write_entropy(File::create(dir.join("entropy.csv"))?, &report.entropy)?;
    write_report_json(File::create(dir.join("report.json"))?, report)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::diagnostics::ErrorRow;

    #[test]
    fn fields_roundtrip_bitwise() {
        let x = vec![-1.0, -0.1 - 0.2, 1.0 / 3.0];
        let fields = MacroFields {
            rho: vec![1.0, 0.125, std::f64::consts::PI],
            u: vec![0.0, -1e-300, 2.0f64.sqrt()],
            temperature: vec![0.8, 1e-7 / 3.0, 5e300],
        };
        let mut buf = Vec::new();
        write_fields(&mut buf, &x, &fields).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,rho,u,T,p\n"));
        assert!(!text.contains('\r'));
        let (x2, f2) = read_fields(&buf[..]).unwrap();
        assert_eq!(x2, x);
        assert_eq!(f2, fields);
    }

    #[test]
    fn entropy_roundtrip() {
        let s = vec![(0.0, -2.837877066409345), (0.1 + 0.2, -2.8e-17)];
        let mut buf = Vec::new();
        write_entropy(&mut buf, &s).unwrap();
        assert_eq!(read_entropy(&buf[..]).unwrap(), s);
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(read_entropy(&b"t,S\n0,1\n"[..]).is_err());
    }

    #[test]
    fn error_table_layout() {
        let table = ErrorTable {
            rows: vec![
                ErrorRow {
                    n_x: 20,
                    errors: [1e-3, 2e-3, 3e-3],
                    orders: None,
                },
                ErrorRow {
                    n_x: 40,
                    errors: [2.5e-4, 5e-4, 7.5e-4],
                    orders: Some([2.0, 2.0, 2.0]),
                },
            ],
        };
        let mut buf = Vec::new();
        write_error_table(&mut buf, &table).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "N_x,rho_err,u_err,T_err,rho_order,u_order,T_order");
        assert!(lines[1].starts_with("20,1.0000000000000000e-3,") && lines[1].ends_with(",,"));
        assert!(lines[2].ends_with(",2.0000000000000000e0"));
    }
}
