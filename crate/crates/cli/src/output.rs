//! Tab-separated records and patterns files.
//!
//! A file is a sequence of blocks. Each block opens with a `#` header line
//! describing the run, followed by a column line and data rows. Skipped
//! attribute sets are listed as `# skipped` comment lines after the rows.

use std::io::{self, Write};

use scpm_core::{AttributeSet, AttributedGraph, CorrelationRecord, PatternRecord};

pub const RECORD_COLUMNS: &str = "attribute_set\tsupport\teps\teps_exp\tdelta\tcovered_count";
pub const PATTERN_COLUMNS: &str = "attribute_set\tsize\tdensity\tvertices";

/// Separator between the tokens of an attribute set.
pub const SET_SEPARATOR: &str = "|";

pub fn format_delta(delta: f64) -> String {
    if delta.is_infinite() {
        "inf".into()
    } else {
        format!("{delta:.5e}")
    }
}

fn set_tokens(g: &AttributedGraph, s: &AttributeSet) -> String {
    s.display_with(g, SET_SEPARATOR)
}

pub fn format_record(g: &AttributedGraph, r: &CorrelationRecord) -> String {
    format!(
        "{}\t{}\t{:.6}\t{:.5e}\t{}\t{}",
        set_tokens(g, &r.attribute_set),
        r.support,
        r.eps,
        r.eps_exp.value,
        format_delta(r.delta),
        r.covered.len()
    )
}

pub fn format_pattern(g: &AttributedGraph, p: &PatternRecord) -> String {
    let ids: Vec<String> = p
        .quasi_clique
        .vertices()
        .iter()
        .map(|&v| g.original_id(v).to_string())
        .collect();
    format!(
        "{}\t{}\t{:.2}\t{}",
        set_tokens(g, &p.attribute_set),
        p.quasi_clique.size(),
        p.quasi_clique.density_f64(),
        ids.join(",")
    )
}

pub fn write_records_block<W: Write>(
    w: &mut W,
    header: &str,
    g: &AttributedGraph,
    records: &[CorrelationRecord],
    skipped: &[AttributeSet],
) -> io::Result<()> {
    writeln!(w, "{header}")?;
    writeln!(w, "{RECORD_COLUMNS}")?;
    for r in records {
        writeln!(w, "{}", format_record(g, r))?;
    }
    for s in skipped {
        writeln!(w, "# skipped\t{}", set_tokens(g, s))?;
    }
    Ok(())
}

pub fn write_patterns_block<W: Write>(
    w: &mut W,
    header: &str,
    g: &AttributedGraph,
    patterns: &[PatternRecord],
) -> io::Result<()> {
    writeln!(w, "{header}")?;
    writeln!(w, "{PATTERN_COLUMNS}")?;
    for p in patterns {
        writeln!(w, "{}", format_pattern(g, p))?;
    }
    Ok(())
}

/// One records row as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordRow {
    pub attribute_set: Vec<String>,
    pub support: usize,
    pub eps: f64,
    pub eps_exp: f64,
    pub delta: f64,
    pub covered_count: usize,
}

impl RecordRow {
    /// The row a record serializes to, with values at file precision.
    pub fn project(g: &AttributedGraph, r: &CorrelationRecord) -> Self {
        Self::parse(&format_record(g, r)).expect("formatted rows parse")
    }

    pub fn parse(line: &str) -> Result<Self, String> {
        let f: Vec<&str> = line.split('\t').collect();
        let [set, support, eps, eps_exp, delta, covered] = f[..] else {
            return Err(format!("expected 6 columns, found {}", f.len()));
        };
        let num = |name: &str, v: &str| v.parse::<f64>().map_err(|_| format!("bad {name} `{v}`"));
        let int = |name: &str, v: &str| v.parse::<usize>().map_err(|_| format!("bad {name} `{v}`"));
        Ok(Self {
            attribute_set: split_set(set),
            support: int("support", support)?,
            eps: num("eps", eps)?,
            eps_exp: num("eps_exp", eps_exp)?,
            delta: if delta == "inf" { f64::INFINITY } else { num("delta", delta)? },
            covered_count: int("covered_count", covered)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternRow {
    pub attribute_set: Vec<String>,
    pub size: usize,
    pub density: f64,
    pub vertices: Vec<u64>,
}

impl PatternRow {
    pub fn project(g: &AttributedGraph, p: &PatternRecord) -> Self {
        Self::parse(&format_pattern(g, p)).expect("formatted rows parse")
    }

    pub fn parse(line: &str) -> Result<Self, String> {
        let f: Vec<&str> = line.split('\t').collect();
        let [set, size, density, vertices] = f[..] else {
            return Err(format!("expected 4 columns, found {}", f.len()));
        };
        let vertices = vertices
            .split(',')
            .filter(|v| !v.is_empty())
            .map(|v| v.parse::<u64>().map_err(|_| format!("bad vertex `{v}`")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            attribute_set: split_set(set),
            size: size.parse().map_err(|_| format!("bad size `{size}`"))?,
            density: density.parse().map_err(|_| format!("bad density `{density}`"))?,
            vertices,
        })
    }
}

fn split_set(s: &str) -> Vec<String> {
    s.split(SET_SEPARATOR).map(str::to_string).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block<R> {
    pub header: String,
    pub rows: Vec<R>,
    pub skipped: Vec<Vec<String>>,
}

fn parse_blocks<R>(
    text: &str,
    kind: &str,
    columns: &str,
    parse: impl Fn(&str) -> Result<R, String>,
) -> Result<Vec<Block<R>>, String> {
    let mut blocks: Vec<Block<R>> = Vec::new();
    let mut lines = text.lines().enumerate();
    while let Some((i, line)) = lines.next() {
        let at = |m: String| format!("line {}: {m}", i + 1);
        if let Some(rest) = line.strip_prefix("# skipped\t") {
            let block = blocks.last_mut().ok_or_else(|| at("skip note before any header".into()))?;
            block.skipped.push(split_set(rest));
        } else if line.starts_with("# scpm ") {
            if !line.starts_with(&format!("# scpm {kind}")) {
                return Err(at(format!("not a {kind} block")));
            }
            match lines.next() {
                Some((_, c)) if c == columns => {}
                _ => return Err(at("header is not followed by the column line".into())),
            }
            blocks.push(Block {
                header: line.to_string(),
                rows: Vec::new(),
                skipped: Vec::new(),
            });
        } else if line.starts_with('#') || line.is_empty() {
            continue;
        } else {
            let block = blocks.last_mut().ok_or_else(|| at("data row before any header".into()))?;
            block.rows.push(parse(line).map_err(at)?);
        }
    }
    Ok(blocks)
}

pub fn parse_records(text: &str) -> Result<Vec<Block<RecordRow>>, String> {
    parse_blocks(text, "records", RECORD_COLUMNS, RecordRow::parse)
}

pub fn parse_patterns(text: &str) -> Result<Vec<Block<PatternRow>>, String> {
    parse_blocks(text, "patterns", PATTERN_COLUMNS, PatternRow::parse)
}
