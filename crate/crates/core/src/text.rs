//! Line-oriented text format for arrays.
//!
//! Line 1: `d n q` (space-separated decimals). Line 2, only for non-cube
//! domains: `domain=minus-first` or `domain=minus-last`. Remaining lines
//! carry the symbols in serialization order, `n^(d-1)` per line; the line
//! holding a missing corner is one symbol short. LF endings, no trailing
//! whitespace.

use crate::array::NdArray;
use crate::coord::CoordSet;
use crate::error::{Error, Result};

pub fn format_array(x: &NdArray) -> String {
    let d = x.dim();
    let (n, domain_tag) = match x.domain() {
        CoordSet::Cube { n, .. } => (*n, None),
        CoordSet::CubeMinusFirst { n, .. } => (*n, Some("minus-first")),
        CoordSet::CubeMinusLast { n, .. } => (*n, Some("minus-last")),
        other => panic!("text format supports cube-based domains, got {other:?}"),
    };
    let mut out = format!("{} {} {}\n", d, n, x.q());
    if let Some(tag) = domain_tag {
        out.push_str(&format!("domain={tag}\n"));
    }
    let per_line = n.pow(d as u32 - 1);
    let vals = x.values();
    // the first line is short for minus-first domains, the last for minus-last
    let first_line = if matches!(x.domain(), CoordSet::CubeMinusFirst { .. }) {
        per_line - 1
    } else {
        per_line
    };
    let mut i = 0;
    let mut line_len = first_line;
    while i < vals.len() {
        let end = (i + line_len).min(vals.len());
        let line: Vec<String> = vals[i..end].iter().map(|s| s.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
        i = end;
        line_len = per_line;
    }
    out
}

pub fn parse_array(input: &str) -> Result<NdArray> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "header must be `d n q`, got {header:?}"
        )));
    }
    let d: usize = parts[0]
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension {:?}", parts[0])))?;
    let n: usize = parts[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad side length {:?}", parts[1])))?;
    let q: usize = parts[2]
        .parse()
        .map_err(|_| Error::Parse(format!("bad alphabet size {:?}", parts[2])))?;
    if d == 0 || n == 0 {
        return Err(Error::Parse("d and n must be positive".into()));
    }

    let mut rest: Vec<&str> = lines.collect();
    let domain = if let Some(first) = rest.first() {
        if let Some(tag) = first.trim().strip_prefix("domain=") {
            let dom = match tag {
                "cube" => CoordSet::Cube { d, n },
                "minus-first" => CoordSet::CubeMinusFirst { d, n },
                "minus-last" => CoordSet::CubeMinusLast { d, n },
                other => return Err(Error::Parse(format!("unknown domain {other:?}"))),
            };
            rest.remove(0);
            dom
        } else {
            CoordSet::Cube { d, n }
        }
    } else {
        CoordSet::Cube { d, n }
    };

    let mut values = Vec::with_capacity(domain.len());
    for line in rest {
        for tok in line.split_whitespace() {
            let s: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad symbol {tok:?}")))?;
            if s >= q {
                return Err(Error::SymbolOutOfRange(s, q));
            }
            values.push(s as u8);
        }
    }
    NdArray::new(domain, q, values)
}
