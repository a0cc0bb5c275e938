use std::collections::HashMap;
use std::sync::Arc;

use crate::matroid::FMatroid;
use crate::morphism::SubmonomialMap;

use super::{format_literal, lines, parse_literal, ParseError};

/// Parses `map <src> -> <tgt> coeff <literal>` lines (`map <src> -> *`
/// sends an element to the basepoint) and an optional `shift (u1,...)`
/// line. Unlisted source elements go to the basepoint.
pub fn parse_morphism(
    text: &str,
    source: &Arc<FMatroid>,
    target: &Arc<FMatroid>,
) -> Result<(SubmonomialMap, Option<Vec<i64>>), ParseError> {
    let mut assign = vec![None; source.len()];
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut shift = None;
    for line in lines(text) {
        let (head, rest) = line.text.split_once(char::is_whitespace).unwrap_or((line.text, ""));
        let rest = rest.trim();
        match head {
            "shift" => shift = Some(parse_vector(&line, rest)?),
            "map" => {
                let (src, tail) = rest.split_once("->").ok_or_else(|| line.err(rest, "expected `<src> -> <tgt>`"))?;
                let src = src.trim();
                let i = match source.ground().lookup(src) {
                    Some(Some(i)) => i,
                    Some(None) => return Err(line.err(src, "the basepoint always maps to the basepoint")),
                    None => return Err(line.err(src, format!("{src:?} is not in the source ground set"))),
                };
                if let Some(prev) = seen.insert(i, line.no) {
                    return Err(ParseError::Duplicate { what: src.to_string(), first: prev, second: line.no });
                }
                let tail = tail.trim();
                let (tgt, coeff) = match tail.split_once(" coeff ") {
                    Some((t, c)) => (t.trim(), Some(c.trim())),
                    None => (tail, None),
                };
                match target.ground().lookup(tgt) {
                    Some(Some(j)) => {
                        let c = coeff.ok_or_else(|| line.err(tgt, "missing `coeff <literal>`"))?;
                        let e = parse_literal(target.idyll(), c).map_err(|m| line.err(c, m))?;
                        if e.is_zero() {
                            return Err(line.err(c, "coefficient must be a unit"));
                        }
                        assign[i] = Some((j, e));
                    }
                    Some(None) => {}
                    None => return Err(line.err(tgt, format!("{tgt:?} is not in the target ground set"))),
                }
            }
            _ => return Err(line.err(line.text, format!("unexpected line {:?}", line.text))),
        }
    }
    let f = SubmonomialMap::new(source.clone(), target.clone(), assign).map_err(|e| ParseError::Semantic(e.to_string()))?;
    Ok((f, shift))
}

/// Parses `(a,b,...)` into integers.
pub(crate) fn parse_vector(line: &super::Line<'_>, s: &str) -> Result<Vec<i64>, ParseError> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| line.err(s, "expected a vector in parentheses"))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<i64>().map_err(|_| line.err(p, format!("invalid integer {p:?}"))))
        .collect()
}

pub fn format_vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

/// One line per assigned element, in source order.
pub fn serialize_morphism(f: &SubmonomialMap, shift: Option<&[i64]>) -> String {
    let mut out = String::new();
    for (i, a) in f.assignment().iter().enumerate() {
        if let Some((j, c)) = a {
            out.push_str(&format!(
                "map {} -> {} coeff {}\n",
                f.source().ground().label(i),
                f.target().ground().label(*j),
                format_literal(f.idyll(), c)
            ));
        }
    }
    if let Some(u) = shift {
        out.push_str(&format!("shift {}\n", format_vector(u)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idyll::Idyll;
    use crate::matroid::uniform;

    #[test]
    fn round_trip_and_errors() {
        let m = Arc::new(uniform(Idyll::Sign, 2, 3).unwrap());
        let text = "map e1 -> e1 coeff S:-1\nmap e2 -> e2 coeff S:-1\nmap e3 -> e3 coeff S:-1\n";
        let (f, u) = parse_morphism(text, &m, &m).unwrap();
        assert!(f.is_isomorphism());
        assert_eq!(u, None);
        assert_eq!(serialize_morphism(&f, None), text);
        let dup = "map e1 -> e1 coeff S:1\nmap e1 -> e2 coeff S:1\n";
        assert_eq!(
            parse_morphism(dup, &m, &m).unwrap_err(),
            ParseError::Duplicate { what: "e1".into(), first: 1, second: 2 }
        );
        let bad = "map e1 -> zz coeff S:1\n";
        assert!(matches!(parse_morphism(bad, &m, &m), Err(ParseError::Syntax { line: 1, col: 11, .. })));
        let (z, s) = parse_morphism("map e1 -> *\nshift (1,-2)\n", &m, &m).unwrap();
        assert!(z.is_zero_map());
        assert_eq!(s, Some(vec![1, -2]));
    }
}
