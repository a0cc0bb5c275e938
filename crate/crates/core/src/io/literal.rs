use crate::idyll::{Elem, Idyll, Q};

/// Parses an idyll header name: `K`, `S`, `F1pm`, `T`, `FT:<name>`.
pub fn parse_idyll_name(s: &str) -> Result<Idyll, String> {
    match s {
        "K" => Ok(Idyll::Krasner),
        "S" => Ok(Idyll::Sign),
        "F1pm" => Ok(Idyll::Regular),
        "T" => Ok(Idyll::Tropical),
        _ => match s.strip_prefix("FT:") {
            Some(name) => Idyll::table_by_name(name).map_err(|e| e.to_string()),
            None => Err(format!("unknown idyll {s:?}")),
        },
    }
}

/// Parses a literal such as `S:-1`, `T:3/2`, `T:inf`, `FT:F3:2`. The idyll
/// prefix must match `idyll`.
pub fn parse_literal(idyll: &Idyll, s: &str) -> Result<Elem, String> {
    let (prefix, body) = s.rsplit_once(':').ok_or_else(|| format!("literal {s:?} lacks an idyll prefix"))?;
    if prefix != idyll.name() {
        return Err(format!("literal {s:?} does not belong to idyll {}", idyll.name()));
    }
    let bad = || format!("invalid {} literal {s:?}", idyll.name());
    match idyll {
        Idyll::Krasner => match body {
            "0" => Ok(Elem::Zero),
            "1" => Ok(Elem::One),
            _ => Err(bad()),
        },
        Idyll::Sign | Idyll::Regular => match body {
            "0" => Ok(Elem::Zero),
            "1" | "+1" => Ok(Elem::Pos),
            "-1" => Ok(Elem::Neg),
            _ => Err(bad()),
        },
        Idyll::Tropical => {
            if body == "inf" {
                return Ok(Elem::Zero);
            }
            body.parse::<Q>().map(Elem::Trop).map_err(|_| bad())
        }
        Idyll::Table(t) => {
            let k: usize = body.parse().map_err(|_| bad())?;
            match k {
                0 => Ok(Elem::Zero),
                k if k <= t.order() => Ok(Elem::Unit((k - 1) as u16)),
                _ => Err(bad()),
            }
        }
    }
}

pub fn format_literal(idyll: &Idyll, e: &Elem) -> String {
    let body = match (idyll, e) {
        (Idyll::Tropical, Elem::Zero) => "inf".to_string(),
        (_, Elem::Zero) => "0".to_string(),
        (_, Elem::One | Elem::Pos) => "1".to_string(),
        (_, Elem::Neg) => "-1".to_string(),
        (_, Elem::Trop(q)) => q.to_string(),
        (_, Elem::Unit(i)) => (i + 1).to_string(),
    };
    format!("{}:{body}", idyll.name())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let f3 = parse_idyll_name("FT:F3").unwrap();
        for (idyll, text) in [
            (Idyll::Krasner, "K:1"),
            (Idyll::Krasner, "K:0"),
            (Idyll::Sign, "S:-1"),
            (Idyll::Regular, "F1pm:1"),
            (Idyll::Tropical, "T:inf"),
            (Idyll::Tropical, "T:-3/2"),
            (f3.clone(), "FT:F3:2"),
            (f3, "FT:F3:0"),
        ] {
            let e = parse_literal(&idyll, text).unwrap();
            assert_eq!(format_literal(&idyll, &e), text);
        }
        assert!(parse_literal(&Idyll::Sign, "K:1").is_err());
        assert!(parse_literal(&Idyll::Krasner, "K:2").is_err());
        assert!(parse_idyll_name("Q").is_err());
    }
}
