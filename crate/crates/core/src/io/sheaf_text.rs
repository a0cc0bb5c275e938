use std::collections::HashMap;
use std::sync::Arc;

use crate::idyll::Q;
use crate::trs::{Fan, FlagChain, Ray, Trs};

use super::matroid_text::{parse_block, verify_block, write_block};
use super::morphism_text::{format_vector, parse_vector};
use super::{format_set, lines, parse_set, syntax, Line, ParseError};

fn is_fan_line(head: &str) -> bool {
    matches!(head, "dim" | "ray" | "cone")
}

fn parse_fan_lines(ls: &[Line<'_>]) -> Result<Fan, ParseError> {
    let mut dim: Option<usize> = None;
    let mut rays: Vec<Ray> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut cones: Vec<(usize, Vec<String>, usize)> = Vec::new();
    for line in ls {
        let (head, rest) = line.text.split_once(char::is_whitespace).unwrap_or((line.text, ""));
        let rest = rest.trim();
        match head {
            "dim" => dim = Some(rest.parse().map_err(|_| line.err(rest, "dim must be a nonnegative integer"))?),
            "ray" => {
                let (name, tail) = rest.split_once('=').ok_or_else(|| line.err(rest, "expected `ray <name> = (v) h=<q>`"))?;
                let name = name.trim();
                let tail = tail.trim();
                let close = tail.find(')').ok_or_else(|| line.err(tail, "expected a vector in parentheses"))?;
                let v = parse_vector(line, &tail[..=close])?;
                let hpart = tail[close + 1..].trim();
                let h = match hpart.strip_prefix("h=") {
                    Some(q) => q.trim().parse::<Q>().map_err(|_| line.err(q, "invalid rational polarization"))?,
                    None if hpart.is_empty() => Q::from_integer(1),
                    None => return Err(line.err(hpart, "expected `h=<rational>`")),
                };
                if let Some(prev) = seen.insert(name.to_string(), line.no) {
                    return Err(ParseError::Duplicate { what: format!("ray {name}"), first: prev, second: line.no });
                }
                rays.push(Ray { name: name.to_string(), v, h });
            }
            "cone" => {
                let set = rest.strip_prefix('=').map(str::trim).unwrap_or(rest);
                let names = parse_set(line, set)?.into_iter().map(String::from).collect();
                cones.push((line.no, names, line.col_of(set)));
            }
            _ => {}
        }
    }
    let first = ls.first().map_or(1, |l| l.no);
    let dim = dim.ok_or_else(|| syntax(first, 1, "missing `dim` header"))?;
    let mut cone_ix = Vec::new();
    for (no, names, col) in cones {
        let ix: Result<Vec<usize>, ParseError> = names
            .iter()
            .map(|n| rays.iter().position(|r| &r.name == n).ok_or_else(|| syntax(no, col, format!("unknown ray {n:?}"))))
            .collect();
        cone_ix.push(ix?);
    }
    Fan::new(dim, rays, cone_ix).map_err(|e| ParseError::Semantic(e.to_string()))
}

/// Parses `dim`, `ray` and `cone` lines.
pub fn parse_fan(text: &str) -> Result<Fan, ParseError> {
    let ls = lines(text);
    if let Some(l) = ls.iter().find(|l| !is_fan_line(l.text.split_whitespace().next().unwrap_or(""))) {
        return Err(l.err(l.text, format!("unexpected line {:?}", l.text)));
    }
    parse_fan_lines(&ls)
}

fn write_fan(f: &Fan, out: &mut String) {
    out.push_str(&format!("dim {}\n", f.dim()));
    for r in f.rays() {
        out.push_str(&format!("ray {} = {} h={}\n", r.name, format_vector(&r.v), r.h));
    }
    for c in f.cones() {
        let names: Vec<&str> = c.iter().map(|&i| f.rays()[i].name.as_str()).collect();
        out.push_str(&format!("cone = {}\n", format_set(&names)));
    }
}

pub fn serialize_fan(f: &Fan) -> String {
    let mut out = String::new();
    write_fan(f, &mut out);
    out
}

/// A fan, a tropical matroid block, and `flag <ray>: j>=<k> -> {flat}`
/// lines; `{*}` or `{}` is the basepoint flat.
pub fn parse_sheaf(text: &str) -> Result<Trs, ParseError> {
    let ls = lines(text);
    let fan = parse_fan_lines(&ls)?;
    let block = parse_block(&ls, |h| is_fan_line(h) || h == "flag")?;
    let matroid = Arc::new(verify_block(block.candidate)?);
    let ground = matroid.ground();
    let mut steps: Vec<Vec<(i64, u32)>> = vec![Vec::new(); fan.rays().len()];
    let mut seen: HashMap<(usize, i64), usize> = HashMap::new();
    for line in &ls {
        let Some(rest) = line.text.strip_prefix("flag") else { continue };
        if !rest.starts_with(char::is_whitespace) {
            continue;
        }
        let rest = rest.trim();
        let (name, tail) = rest.split_once(':').ok_or_else(|| line.err(rest, "expected `flag <ray>: j>=<k> -> {flat}`"))?;
        let name = name.trim();
        let r = fan.ray_index(name).ok_or_else(|| line.err(name, format!("unknown ray {name:?}")))?;
        let (cond, set) = tail.split_once("->").ok_or_else(|| line.err(tail, "expected `->`"))?;
        let cond = cond.trim();
        let k_text = cond.strip_prefix("j>=").ok_or_else(|| line.err(cond, "expected `j>=<k>`"))?.trim();
        let k: i64 = k_text.parse().map_err(|_| line.err(k_text, "invalid integer"))?;
        if let Some(prev) = seen.insert((r, k), line.no) {
            return Err(ParseError::Duplicate { what: format!("flag {name} j>={k}"), first: prev, second: line.no });
        }
        let labels = parse_set(line, set)?;
        let mut mask = 0u32;
        for l in labels {
            match ground.lookup(l) {
                Some(Some(i)) => mask |= 1 << i,
                Some(None) => {}
                None => return Err(line.err(set.trim(), format!("label {l:?} is not in the ground set"))),
            }
        }
        steps[r].push((k, mask));
    }
    let all = ground.all();
    let flags = steps.into_iter().map(|s| FlagChain::new(s, all)).collect();
    Trs::new(Arc::new(fan), matroid, flags).map_err(|e| ParseError::Semantic(e.to_string()))
}

pub fn serialize_sheaf(e: &Trs) -> String {
    let mut out = String::new();
    write_fan(e.fan(), &mut out);
    write_block(e.matroid(), &mut out);
    let g = e.matroid().ground();
    for (ray, chain) in e.fan().rays().iter().zip(e.flags()) {
        for &(k, f) in chain.steps() {
            let names = if f == 0 { vec![g.basepoint().to_string()] } else { g.names(f) };
            out.push_str(&format!("flag {}: j>={} -> {}\n", ray.name, k, format_set(&names)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const P1: &str = "\
dim 1
ray p = (1) h=1
ray m = (-1) h=1
cone = {p}
cone = {m}
idyll T
rank 2
ground * e1 e2
{e1,e2} = T:0
flag p: j>=1 -> {e1}
flag p: j>=3 -> {*}
flag m: j>=1 -> {*}
";

    #[test]
    fn sheaf_round_trip() {
        let e = parse_sheaf(P1).unwrap();
        assert_eq!(e.degree(), Q::from_integer(2));
        assert_eq!(serialize_sheaf(&e), P1);
        assert_eq!(parse_fan(&serialize_fan(e.fan())).unwrap(), **e.fan());
    }

    #[test]
    fn sheaf_errors() {
        let bad_flat = P1.replace("{e1}", "{e1,zz}");
        assert!(matches!(parse_sheaf(&bad_flat), Err(ParseError::Syntax { line: 10, .. })));
        let dup = format!("{P1}flag p: j>=1 -> {{e2}}\n");
        assert_eq!(
            parse_sheaf(&dup).unwrap_err(),
            ParseError::Duplicate { what: "flag p j>=1".into(), first: 10, second: 13 }
        );
        let bad_ray = P1.replace("ray m = (-1)", "ray m = (-2)");
        assert!(matches!(parse_sheaf(&bad_ray), Err(ParseError::Semantic(m)) if m.contains("primitive")));
        let krasner = P1.replace("idyll T", "idyll K").replace("T:0", "K:1");
        assert!(matches!(parse_sheaf(&krasner), Err(ParseError::Semantic(_))));
        assert!(matches!(parse_fan("dim 1\nray p = (1)\nfoo\n"), Err(ParseError::Syntax { line: 3, col: 1, .. })));
    }
}
