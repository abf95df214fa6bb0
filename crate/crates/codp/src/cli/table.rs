//! StageTable ingestion and emission.
//!
//! The on-disk format is a CSV file with one row per stage and a fixed set of
//! column names. Header matching is case-insensitive but otherwise exact, and
//! column order is free. `inventory_adjustment` is the only optional column
//! and the only one allowed to be negative.

use std::fmt::Write as _;
use std::path::Path;

use crate::production::{ProductionLine, StageProfile};

use super::commands::CliError;

const REQUIRED_COLUMNS: [&str; 9] = [
    "stage_index",
    "time_mean",
    "time_std",
    "generic_unit_cost",
    "custom_unit_cost",
    "modification_cost",
    "holding_cost",
    "turnover",
    "std_inventory",
];

const OPTIONAL_COLUMN: &str = "inventory_adjustment";

/// Column positions for one parsed header, indexed like `REQUIRED_COLUMNS`.
struct HeaderMap {
    required: [usize; 9],
    adjustment: Option<usize>,
}

fn parse_header(headers: &csv::StringRecord, path: &Path) -> Result<HeaderMap, CliError> {
    let mut required = [usize::MAX; 9];
    let mut adjustment = None;
    for (idx, raw) in headers.iter().enumerate() {
        let name = raw.trim().to_ascii_lowercase();
        let slot = REQUIRED_COLUMNS.iter().position(|c| *c == name);
        if let Some(slot) = slot {
            if required[slot] != usize::MAX {
                return Err(CliError::parse(
                    path,
                    1,
                    &name,
                    "column appears more than once",
                ));
            }
            required[slot] = idx;
        } else if name == OPTIONAL_COLUMN {
            if adjustment.is_some() {
                return Err(CliError::parse(
                    path,
                    1,
                    &name,
                    "column appears more than once",
                ));
            }
            adjustment = Some(idx);
        } else {
            return Err(CliError::parse(
                path,
                1,
                raw.trim(),
                "unknown column name",
            ));
        }
    }
    for (slot, col) in required.iter().zip(REQUIRED_COLUMNS.iter()) {
        if *slot == usize::MAX {
            return Err(CliError::parse(path, 1, col, "required column is missing"));
        }
    }
    Ok(HeaderMap {
        required,
        adjustment,
    })
}

fn record_line(record: &csv::StringRecord, fallback: u64) -> u64 {
    record.position().map_or(fallback, |p| p.line())
}

fn parse_cell(path: &Path, line: u64, column: &str, raw: &str) -> Result<f64, CliError> {
    let value: f64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::parse(path, line, column, format!("not a number: {raw:?}")))?;
    if !value.is_finite() {
        return Err(CliError::parse(
            path,
            line,
            column,
            format!("not a finite number: {raw:?}"),
        ));
    }
    Ok(value)
}

/// Reads a StageTable from `path`. Rows may appear in any order; stage
/// indices must form `1..=n` once sorted, which the line constructor enforces
/// downstream. Negative values in any column other than
/// `inventory_adjustment` are rejected here with the offending row cited.
pub fn read_stage_table(path: &Path) -> Result<Vec<StageProfile>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::open(path, &e))?;
    let header = parse_header(reader.headers().map_err(|e| CliError::open(path, &e))?, path)?;

    let mut stages = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let fallback_line = row_idx as u64 + 2;
        let record = record.map_err(|e| {
            CliError::parse(path, fallback_line, "-", format!("malformed row: {e}"))
        })?;
        let line = record_line(&record, fallback_line);
        let cell = |slot: usize| -> Result<&str, CliError> {
            record.get(header.required[slot]).ok_or_else(|| {
                CliError::parse(path, line, REQUIRED_COLUMNS[slot], "missing value")
            })
        };

        let stage_index_raw = cell(0)?;
        let stage_index: usize = stage_index_raw.parse().map_err(|_| {
            CliError::parse(
                path,
                line,
                "stage_index",
                format!("not a positive integer: {stage_index_raw:?}"),
            )
        })?;

        let mut numeric = [0.0_f64; 8];
        for slot in 1..9 {
            let value = parse_cell(path, line, REQUIRED_COLUMNS[slot], cell(slot)?)?;
            if value < 0.0 {
                return Err(CliError::validation(format!(
                    "row {line}: {} must be non-negative, got {value}",
                    REQUIRED_COLUMNS[slot]
                )));
            }
            numeric[slot - 1] = value;
        }
        let inventory_adjustment = match header.adjustment {
            Some(idx) => match record.get(idx) {
                Some(raw) if !raw.is_empty() => {
                    parse_cell(path, line, OPTIONAL_COLUMN, raw)?
                }
                _ => 0.0,
            },
            None => 0.0,
        };

        stages.push(StageProfile {
            index: stage_index,
            time_mean: numeric[0],
            time_std: numeric[1],
            generic_unit_cost: numeric[2],
            custom_unit_cost: numeric[3],
            modification_cost: numeric[4],
            holding_cost: numeric[5],
            turnover: numeric[6],
            std_inventory: numeric[7],
            inventory_adjustment,
        });
    }
    if stages.is_empty() {
        return Err(CliError::validation(format!(
            "{}: no stage rows after the header",
            path.display()
        )));
    }
    Ok(stages)
}

/// Renders the line's stages back into StageTable text. Floats use the
/// shortest representation that round-trips, so reading the output with the
/// same frontier and demand settings reconstructs an identical line.
pub fn write_stage_table(line: &ProductionLine) -> String {
    let mut out = String::new();
    for (i, col) in REQUIRED_COLUMNS.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(col);
    }
    out.push(',');
    out.push_str(OPTIONAL_COLUMN);
    out.push('\n');
    for s in line.stages() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            s.index,
            s.time_mean,
            s.time_std,
            s.generic_unit_cost,
            s.custom_unit_cost,
            s.modification_cost,
            s.holding_cost,
            s.turnover,
            s.std_inventory,
            s.inventory_adjustment,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::production::build_line;
    use std::io::Write as _;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const HEADER: &str = "stage_index,time_mean,time_std,generic_unit_cost,custom_unit_cost,\
                          modification_cost,holding_cost,turnover,std_inventory,inventory_adjustment";

    #[test]
    fn reads_well_formed_table() {
        let f = write_temp(&format!(
            "{HEADER}\n1,1.0,0.1,10,5,2,0.5,10,50,0\n2,2.0,0.2,20,3,4,0.6,8,40,-5\n"
        ));
        let stages = read_stage_table(f.path()).unwrap();
        assert_eq!(stages.len(), 2);
        assert_eq!(stages[0].index, 1);
        assert_eq!(stages[1].time_mean, 2.0);
        assert_eq!(stages[1].inventory_adjustment, -5.0);
    }

    #[test]
    fn header_match_is_case_insensitive_and_order_free() {
        let f = write_temp(
            "Turnover,STAGE_INDEX,time_mean,time_std,generic_unit_cost,custom_unit_cost,\
             modification_cost,holding_cost,std_inventory\n\
             10,1,1.0,0.1,10,5,2,0.5,50\n",
        );
        let stages = read_stage_table(f.path()).unwrap();
        assert_eq!(stages[0].turnover, 10.0);
        assert_eq!(stages[0].inventory_adjustment, 0.0);
    }

    #[test]
    fn missing_column_names_the_column() {
        let f = write_temp(
            "stage_index,time_mean,time_std,generic_unit_cost,custom_unit_cost,\
             modification_cost,holding_cost,std_inventory\n\
             1,1.0,0.1,10,5,2,0.5,50\n",
        );
        let err = read_stage_table(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("turnover"), "{msg}");
        assert!(msg.contains("missing"), "{msg}");
    }

    #[test]
    fn unknown_column_is_rejected() {
        let f = write_temp(&format!("{HEADER},surprise\n1,1,0,1,1,1,1,1,1,0,9\n"));
        let err = read_stage_table(f.path()).unwrap_err();
        assert!(err.to_string().contains("surprise"), "{err}");
    }

    #[test]
    fn bad_cell_cites_row_and_column() {
        let f = write_temp(&format!(
            "{HEADER}\n1,1.0,0.1,10,5,2,0.5,10,50,0\n2,fast,0.2,20,3,4,0.6,8,40,0\n"
        ));
        let err = read_stage_table(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("time_mean"), "{msg}");
    }

    #[test]
    fn negative_value_cites_row() {
        let f = write_temp(&format!(
            "{HEADER}\n1,1.0,0.1,10,5,2,0.5,10,50,0\n2,-2.0,0.2,20,3,4,0.6,8,40,0\n"
        ));
        let err = read_stage_table(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 3"), "{msg}");
        assert!(msg.contains("time_mean"), "{msg}");
    }

    #[test]
    fn negative_adjustment_is_allowed_but_nan_is_not() {
        let f = write_temp(&format!("{HEADER}\n1,1.0,0.1,10,5,2,0.5,10,50,NaN\n"));
        let err = read_stage_table(f.path()).unwrap_err();
        assert!(err.to_string().contains("inventory_adjustment"), "{err}");
    }

    #[test]
    fn missing_file_reports_path() {
        let err = read_stage_table(Path::new("/nonexistent/stages.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/stages.csv"), "{err}");
    }

    #[test]
    fn empty_adjustment_cell_defaults_to_zero() {
        let f = write_temp(&format!("{HEADER}\n1,1.0,0.1,10,5,2,0.5,10,50,\n"));
        let stages = read_stage_table(f.path()).unwrap();
        assert_eq!(stages[0].inventory_adjustment, 0.0);
    }

    #[test]
    fn written_table_round_trips_to_an_identical_line() {
        let f = write_temp(&format!(
            "{HEADER}\n1,1.25,0.15,33.6,184.68,7.77,0.45,10.5,60.5,0.125\n\
             2,0.75,0.1,39.36,128.47,9.82,0.5,9.0,55.0,-3.5\n\
             3,1.0,0.2,49.13,91.35,12.77,0.55,11.0,70.0,0\n"
        ));
        let stages = read_stage_table(f.path()).unwrap();
        let line = build_line(stages, 3, 120.0, 10.0).unwrap();

        let rendered = write_stage_table(&line);
        let f2 = write_temp(&rendered);
        let reread = read_stage_table(f2.path()).unwrap();
        let line2 = build_line(reread, 3, 120.0, 10.0).unwrap();

        for (a, b) in line.stages().iter().zip(line2.stages()) {
            assert_eq!(a.index, b.index);
            assert!(a.time_mean.to_bits() == b.time_mean.to_bits());
            assert!(a.time_std.to_bits() == b.time_std.to_bits());
            assert!(a.generic_unit_cost.to_bits() == b.generic_unit_cost.to_bits());
            assert!(a.custom_unit_cost.to_bits() == b.custom_unit_cost.to_bits());
            assert!(a.modification_cost.to_bits() == b.modification_cost.to_bits());
            assert!(a.holding_cost.to_bits() == b.holding_cost.to_bits());
            assert!(a.turnover.to_bits() == b.turnover.to_bits());
            assert!(a.std_inventory.to_bits() == b.std_inventory.to_bits());
            assert!(a.inventory_adjustment.to_bits() == b.inventory_adjustment.to_bits());
        }
    }

    #[test]
    fn rows_in_any_order_are_accepted() {
        let f = write_temp(&format!(
            "{HEADER}\n3,1.0,0.2,49.13,91.35,12.77,0.55,11.0,70.0,0\n\
             1,1.25,0.15,33.6,184.68,7.77,0.45,10.5,60.5,0\n\
             2,0.75,0.1,39.36,128.47,9.82,0.5,9.0,55.0,0\n"
        ));
        let stages = read_stage_table(f.path()).unwrap();
        let line = build_line(stages, 2, 100.0, 5.0).unwrap();
        assert_eq!(line.stages()[0].index, 1);
        assert_eq!(line.stages()[2].index, 3);
    }
}
