use std::collections::HashMap;

use crate::idyll::Idyll;
use crate::matroid::{Candidate, FMatroid, GroundSet, MatroidError};
use crate::subset::{self, Subset};

use super::{format_literal, format_set, lines, parse_idyll_name, parse_literal, parse_set, syntax, Line, ParseError};

/// Parsed header and value lines of a matroid block, before verification.
pub(crate) struct MatroidBlock {
    pub candidate: Candidate,
}

/// Reads the `idyll`, `rank`, `ground` headers and `{subset} = literal`
/// lines. Lines for which `other` returns true are skipped (used by the
/// sheaf format).
pub(crate) fn parse_block(lines: &[Line<'_>], other: impl Fn(&str) -> bool) -> Result<MatroidBlock, ParseError> {
    let mut idyll: Option<Idyll> = None;
    let mut rank: Option<usize> = None;
    let mut ground: Option<GroundSet> = None;
    let mut seen: HashMap<Subset, usize> = HashMap::new();
    let mut entries = Vec::new();
    for line in lines {
        let (head, rest) = line.text.split_once(char::is_whitespace).unwrap_or((line.text, ""));
        let rest = rest.trim();
        match head {
            "idyll" => idyll = Some(parse_idyll_name(rest).map_err(|m| line.err(rest, m))?),
            "rank" => rank = Some(rest.parse().map_err(|_| line.err(rest, "rank must be a nonnegative integer"))?),
            "ground" => {
                let labels: Vec<String> = rest.split_whitespace().map(String::from).collect();
                ground = Some(GroundSet::from_labels(labels).map_err(|e| line.err(rest, e.to_string()))?);
            }
            _ if other(head) => {}
            _ if line.text.starts_with('{') => entries.push(line),
            _ => return Err(line.err(line.text, format!("unexpected line {:?}", line.text))),
        }
    }
    let first = lines.first().map(|l| l.no).unwrap_or(1);
    let idyll = idyll.ok_or_else(|| syntax(first, 1, "missing `idyll` header"))?;
    let rank = rank.ok_or_else(|| syntax(first, 1, "missing `rank` header"))?;
    let ground = ground.ok_or_else(|| syntax(first, 1, "missing `ground` header"))?;
    let mut c = Candidate::new(idyll, ground, rank);
    for line in entries {
        let (lhs, rhs) = line
            .text
            .split_once('=')
            .ok_or_else(|| line.err(line.text, "expected `{subset} = literal`"))?;
        let labels = parse_set(line, lhs)?;
        let rhs = rhs.trim();
        let value = parse_literal(&c.idyll, rhs).map_err(|m| line.err(rhs, m))?;
        let mut pointed = false;
        for l in &labels {
            match c.ground.lookup(l) {
                None => return Err(line.err(lhs, format!("label {l:?} is not in the ground set"))),
                Some(None) => pointed = true,
                Some(Some(_)) => {}
            }
        }
        if pointed {
            if !value.is_zero() {
                return Err(line.err(lhs, "pointed condition: subsets containing the basepoint must be zero"));
            }
            continue;
        }
        let m = c.ground.mask_of(&labels).map_err(|e| line.err(lhs, e.to_string()))?;
        if let Some(prev) = seen.insert(Subset(m), line.no) {
            return Err(ParseError::Duplicate { what: format_set(&labels), first: prev, second: line.no });
        }
        if labels.len() != rank || subset::size(m) != labels.len() {
            return Err(line.err(lhs, format!("subset must have {rank} distinct labels")));
        }
        c.set(&labels, value).map_err(|e| line.err(lhs, e.to_string()))?;
    }
    Ok(MatroidBlock { candidate: c })
}

pub(crate) fn verify_block(c: Candidate) -> Result<FMatroid, ParseError> {
    FMatroid::new_with_limits(c, subset::MAX_ELEMENTS, subset::MAX_ELEMENTS).map_err(|e| match e {
        MatroidError::NotGp(v) => ParseError::Semantic(format!("not a matroid: {v}")),
        other => ParseError::Semantic(other.to_string()),
    })
}

/// Parses without verifying the Grassmann-Plücker relations.
pub fn parse_candidate(text: &str) -> Result<Candidate, ParseError> {
    Ok(parse_block(&lines(text), |_| false)?.candidate)
}

pub fn parse_matroid(text: &str) -> Result<FMatroid, ParseError> {
    let ls = lines(text);
    let block = parse_block(&ls, |_| false)?;
    verify_block(block.candidate)
}

pub(crate) fn write_block(m: &FMatroid, out: &mut String) {
    out.push_str(&format!("idyll {}\n", m.idyll().name()));
    out.push_str(&format!("rank {}\n", m.rank()));
    out.push_str(&format!("ground {}\n", m.ground().labels().join(" ")));
    for (s, v) in m.values() {
        out.push_str(&format!("{} = {}\n", format_set(&m.ground().names(s)), format_literal(m.idyll(), v)));
    }
}

/// Canonical text: headers, then one line per basis in lexicographic order.
pub fn serialize_matroid(m: &FMatroid) -> String {
    let mut out = String::new();
    write_block(m, &mut out);
    out
}
