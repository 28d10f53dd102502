//! PON technology catalog: builtin standards plus CSV load and serialization.

use serde::Serialize;

use crate::error::{Error, Result};

/// Exact CSV header for catalog files.
pub const CATALOG_HEADER: &str = "name,upstream_mbps,downstream_mbps,max_split,ratified";

/// One PON standard and its capacity/split limits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PonTechnology {
    pub name: String,
    /// Shared upstream capacity in Mb/s — the binding constraint for the
    /// feasibility rule.
    pub upstream_mbps: f64,
    /// Shared downstream capacity in Mb/s (informational).
    pub downstream_mbps: f64,
    /// Largest split ratio permitted by the standard; a power of two >= 4.
    pub max_split: u32,
    /// Ratification year (informational).
    pub ratified: i32,
}

/// An ordered set of technologies with unique names.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    techs: Vec<PonTechnology>,
}

impl Catalog {
    /// Validates and wraps a list of technologies. Duplicate or malformed
    /// entries are reported against their 1-based list position.
    pub fn new(techs: Vec<PonTechnology>) -> Result<Self> {
        if techs.is_empty() {
            return Err(Error::InvalidInput("catalog must not be empty".into()));
        }
        for (i, t) in techs.iter().enumerate() {
            validate_tech(t).map_err(|msg| {
                Error::InvalidInput(format!("catalog entry {}: {msg}", i + 1))
            })?;
            if techs[..i].iter().any(|prev| prev.name == t.name) {
                return Err(Error::InvalidInput(format!(
                    "catalog entry {}: duplicate technology name {:?}",
                    i + 1,
                    t.name
                )));
            }
        }
        Ok(Self { techs })
    }

    pub fn technologies(&self) -> &[PonTechnology] {
        &self.techs
    }

    pub fn names(&self) -> Vec<String> {
        self.techs.iter().map(|t| t.name.clone()).collect()
    }

    /// Looks a technology up by name; the error lists every available name.
    pub fn get(&self, name: &str) -> Result<&PonTechnology> {
        self.techs
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| Error::UnknownTech {
                name: name.to_string(),
                available: self.names(),
            })
    }
}

fn validate_tech(t: &PonTechnology) -> std::result::Result<(), String> {
    if t.name.is_empty() {
        return Err("name must not be empty".into());
    }
    if t.name.contains(',') || t.name.contains('\n') || t.name.starts_with('#') {
        return Err(format!(
            "name {:?} must not contain commas or newlines or start with '#'",
            t.name
        ));
    }
    if t.upstream_mbps <= 0.0 || t.upstream_mbps.is_nan() {
        return Err(format!(
            "upstream capacity must be positive, got {}",
            t.upstream_mbps
        ));
    }
    if t.downstream_mbps <= 0.0 || t.downstream_mbps.is_nan() {
        return Err(format!(
            "downstream capacity must be positive, got {}",
            t.downstream_mbps
        ));
    }
    if !t.max_split.is_power_of_two() || t.max_split < 4 {
        return Err(format!(
            "max split must be a power of two >= 4, got {}",
            t.max_split
        ));
    }
    Ok(())
}

fn tech(name: &str, up: f64, down: f64, max_split: u32, ratified: i32) -> PonTechnology {
    PonTechnology {
        name: name.to_string(),
        upstream_mbps: up,
        downstream_mbps: down,
        max_split,
        ratified,
    }
}

/// The builtin catalog of standardized PON generations.
pub fn builtin_catalog() -> Catalog {
    Catalog::new(vec![
        tech("GPON", 1_250.0, 2_488.0, 128, 2003),
        tech("XG-PON", 2_500.0, 10_000.0, 256, 2010),
        tech("XGS-PON", 10_000.0, 10_000.0, 256, 2016),
        tech("10G-EPON", 10_000.0, 10_000.0, 256, 2009),
        tech("25G-PON", 25_000.0, 25_000.0, 256, 2020),
        tech("NG-PON2", 40_000.0, 40_000.0, 256, 2015),
        tech("100G-EPON", 100_000.0, 100_000.0, 256, 2020),
    ])
    .expect("builtin catalog is valid")
}

/// Parses catalog CSV. Blank lines are skipped and `#` starts a comment
/// line; the first content line must be the exact header. Errors name the
/// 1-based line and field column.
pub fn load_catalog(text: &str) -> Result<Catalog> {
    let parse_err = |line: usize, column: usize, message: String| Error::CatalogParse {
        line,
        column,
        message,
    };
    let mut techs: Vec<PonTechnology> = Vec::new();
    let mut rows: Vec<usize> = Vec::new(); // source line of each entry
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !header_seen {
            if trimmed != CATALOG_HEADER {
                return Err(parse_err(
                    line_no,
                    1,
                    format!("expected header {CATALOG_HEADER:?}, got {trimmed:?}"),
                ));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(parse_err(
                line_no,
                fields.len().min(5),
                format!("expected 5 fields, got {}", fields.len()),
            ));
        }
        let number = |col: usize, what: &str| -> Result<f64> {
            fields[col - 1].parse::<f64>().map_err(|_| {
                parse_err(
                    line_no,
                    col,
                    format!("{what} must be a number, got {:?}", fields[col - 1]),
                )
            })
        };
        let name = fields[0].to_string();
        if name.is_empty() {
            return Err(parse_err(line_no, 1, "name must not be empty".into()));
        }
        if let Some(prev) = techs.iter().position(|t| t.name == name) {
            return Err(parse_err(
                line_no,
                1,
                format!(
                    "duplicate technology name {:?} (first defined on line {})",
                    name, rows[prev]
                ),
            ));
        }
        let upstream_mbps = number(2, "upstream_mbps")?;
        if upstream_mbps <= 0.0 || upstream_mbps.is_nan() {
            return Err(parse_err(
                line_no,
                2,
                format!("upstream_mbps must be positive, got {upstream_mbps}"),
            ));
        }
        let downstream_mbps = number(3, "downstream_mbps")?;
        if downstream_mbps <= 0.0 || downstream_mbps.is_nan() {
            return Err(parse_err(
                line_no,
                3,
                format!("downstream_mbps must be positive, got {downstream_mbps}"),
            ));
        }
        let max_split: u32 = fields[3].parse().map_err(|_| {
            parse_err(
                line_no,
                4,
                format!("max_split must be an integer, got {:?}", fields[3]),
            )
        })?;
        if !max_split.is_power_of_two() || max_split < 4 {
            return Err(parse_err(
                line_no,
                4,
                format!("max_split must be a power of two >= 4, got {max_split}"),
            ));
        }
        let ratified: i32 = fields[4].parse().map_err(|_| {
            parse_err(
                line_no,
                5,
                format!("ratified must be a year, got {:?}", fields[4]),
            )
        })?;
        techs.push(PonTechnology {
            name,
            upstream_mbps,
            downstream_mbps,
            max_split,
            ratified,
        });
        rows.push(line_no);
    }
    if !header_seen {
        return Err(parse_err(1, 1, "catalog text has no header line".into()));
    }
    if techs.is_empty() {
        return Err(parse_err(1, 1, "catalog defines no technologies".into()));
    }
    Catalog::new(techs)
}

/// Serializes a catalog back to the CSV format `load_catalog` accepts.
pub fn serialize_catalog(catalog: &Catalog) -> String {
    let mut out = String::from(CATALOG_HEADER);
    out.push('\n');
    for t in catalog.technologies() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            t.name, t.upstream_mbps, t.downstream_mbps, t.max_split, t.ratified
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_reference_capacities() {
        let cat = builtin_catalog();
        assert_eq!(cat.get("GPON").unwrap().upstream_mbps, 1_250.0);
        assert_eq!(cat.get("GPON").unwrap().max_split, 128);
        assert_eq!(cat.get("XGS-PON").unwrap().upstream_mbps, 10_000.0);
        assert_eq!(cat.get("NG-PON2").unwrap().upstream_mbps, 40_000.0);
        assert_eq!(cat.get("XG-PON").unwrap().upstream_mbps, 2_500.0);
        assert_eq!(cat.get("25G-PON").unwrap().upstream_mbps, 25_000.0);
        assert_eq!(cat.technologies().len(), 7);
    }

    #[test]
    fn builtin_passes_user_catalog_validation() {
        // Serializing and re-loading applies every rule user catalogs face.
        let cat = builtin_catalog();
        let reloaded = load_catalog(&serialize_catalog(&cat)).unwrap();
        assert_eq!(cat, reloaded);
    }

    #[test]
    fn unknown_name_lists_alternatives() {
        let err = builtin_catalog().get("FOO-PON").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("FOO-PON"));
        assert!(msg.contains("GPON") && msg.contains("XGS-PON"));
    }

    #[test]
    fn single_row_catalog_parses() {
        let text = format!("{CATALOG_HEADER}\nGPON,1250,2488,128,2003\n");
        let cat = load_catalog(&text).unwrap();
        assert_eq!(cat.technologies().len(), 1);
        assert_eq!(cat.get("GPON").unwrap().ratified, 2003);
    }

    #[test]
    fn comments_blank_lines_and_crlf_are_tolerated() {
        let text = format!(
            "# access technologies\r\n\r\n{CATALOG_HEADER}\r\n\r\n# 10G side\r\nXGS-PON,10000,10000,256,2016\r\n"
        );
        let cat = load_catalog(&text).unwrap();
        assert_eq!(cat.get("XGS-PON").unwrap().downstream_mbps, 10_000.0);
    }

    #[test]
    fn errors_name_line_and_column() {
        let check = |text: String, want_line: usize, want_col: usize, needle: &str| {
            match load_catalog(&text).unwrap_err() {
                Error::CatalogParse {
                    line,
                    column,
                    message,
                } => {
                    assert_eq!((line, column), (want_line, want_col), "{message}");
                    assert!(message.contains(needle), "{message}");
                }
                other => panic!("unexpected error {other:?}"),
            }
        };
        let h = CATALOG_HEADER;
        check(
            format!("{h}\nGPON,1250,2488,128,2003\nGPON,1,1,4,2003\n"),
            3,
            1,
            "duplicate",
        );
        check(format!("{h}\nGPON,0,2488,128,2003\n"), 2, 2, "positive");
        check(format!("{h}\nGPON,x,2488,128,2003\n"), 2, 2, "number");
        check(format!("{h}\nGPON,1250,2488,100,2003\n"), 2, 4, "power of two");
        check(format!("{h}\nGPON,1250,2488,2,2003\n"), 2, 4, "power of two");
        check(format!("{h}\nGPON,1250,2488,128\n"), 2, 4, "5 fields");
        check(format!("{h}\nGPON,1250,2488,128,03-12\n"), 2, 5, "year");
        check("name,upstream\nGPON,1250\n".to_string(), 1, 1, "header");
        check(String::new(), 1, 1, "no header");
        check(format!("{h}\n# nothing\n"), 1, 1, "no technologies");
    }

    #[test]
    fn round_trip_preserves_catalogs() {
        let mut cat = builtin_catalog();
        // Mutate into a custom catalog to exercise non-builtin values.
        cat = Catalog::new(
            cat.technologies()
                .iter()
                .cloned()
                .map(|mut t| {
                    t.upstream_mbps *= 1.5;
                    t
                })
                .collect(),
        )
        .unwrap();
        let text = serialize_catalog(&cat);
        assert_eq!(load_catalog(&text).unwrap(), cat);
    }

    #[test]
    fn constructor_rejects_bad_entries() {
        assert!(Catalog::new(vec![]).is_err());
        let bad_split = vec![tech("A", 1.0, 1.0, 3, 2000)];
        assert!(Catalog::new(bad_split).is_err());
        let dup = vec![tech("A", 1.0, 1.0, 4, 2000), tech("A", 2.0, 2.0, 8, 2001)];
        assert!(Catalog::new(dup).is_err());
        let comma = vec![tech("A,B", 1.0, 1.0, 4, 2000)];
        assert!(Catalog::new(comma).is_err());
    }
}
