//! Text and JSON encodings of a covering system.
//!
//! Text: one `residue modulus` pair per line, `#` starts a comment, blank
//! lines are ignored. JSON: `{"classes": [[a, n], ...]}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ecs::{Ecs, ResidueClass};
use crate::error::{Error, Result};

pub fn parse_text(input: &str) -> Result<Ecs> {
    let mut classes = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut fields = Vec::new();
        let mut col = 0usize;
        for tok in body.split_whitespace() {
            // column of this token, 1-based
            col = body[col..].find(tok).map(|off| col + off).unwrap_or(col);
            fields.push((col + 1, tok));
            col += tok.len();
        }
        match fields.as_slice() {
            [] => continue,
            [(ca, a), (cn, n)] => {
                let a = parse_int(a, line_no, *ca)?;
                let n = parse_int(n, line_no, *cn)?;
                let class = crate::ecs::normalize(a, n).map_err(|e| Error::Parse {
                    line: line_no,
                    column: *cn,
                    message: e.to_string(),
                })?;
                classes.push(class);
            }
            [_] => {
                return Err(Error::Parse {
                    line: line_no,
                    column: body.len() + 1,
                    message: "expected `residue modulus`, found one field".into(),
                })
            }
            [_, _, (c, _), ..] => {
                return Err(Error::Parse {
                    line: line_no,
                    column: *c,
                    message: "unexpected trailing field".into(),
                })
            }
        }
    }
    if classes.is_empty() {
        return Err(Error::Parse {
            line: input.lines().count().max(1),
            column: 1,
            message: "no residue classes found".into(),
        });
    }
    Ecs::new(classes)
}

fn parse_int(tok: &str, line: usize, column: usize) -> Result<i64> {
    tok.parse::<i64>().map_err(|e| Error::Parse {
        line,
        column,
        message: format!("invalid integer `{tok}`: {e}"),
    })
}

pub fn to_text(ecs: &Ecs) -> String {
    let mut out = String::new();
    for c in ecs.classes() {
        let _ = writeln!(out, "{} {}", c.residue(), c.modulus());
    }
    out
}

#[derive(Serialize, Deserialize)]
struct EcsJson {
    classes: Vec<(i64, i64)>,
}

pub fn parse_json(input: &str) -> Result<Ecs> {
    let doc: EcsJson = serde_json::from_str(input).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ecs::from_pairs(&doc.classes)
}

pub fn to_json(ecs: &Ecs) -> String {
    let doc = EcsJson {
        classes: ecs
            .classes()
            .iter()
            .map(|c| (c.residue() as i64, c.modulus() as i64))
            .collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// Picks JSON when the first non-blank character is `{`, text otherwise.
pub fn parse_auto(input: &str) -> Result<Ecs> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

impl serde::Serialize for Ecs {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EcsJson {
            classes: self
                .classes()
                .iter()
                .map(|c| (c.residue() as i64, c.modulus() as i64))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Ecs {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = EcsJson::deserialize(d)?;
        let classes = doc
            .classes
            .into_iter()
            .map(ResidueClass::try_from)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ecs::new(classes).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecs::irreducible_example;

    #[test]
    fn text_with_comments() {
        let src = "# a system\n0 2\n\n  1 4   # odd quarter\n-1 4\n";
        let a = parse_text(src).unwrap();
        assert_eq!(a, Ecs::from_pairs(&[(0, 2), (1, 4), (3, 4)]).unwrap());
        assert_eq!(to_text(&a), "0 2\n1 4\n3 4\n");
    }

    #[test]
    fn text_errors_have_positions() {
        match parse_text("0 2\n1 x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match parse_text("0 2\n  5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_text("0 2 9\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("{other:?}"),
        }
        match parse_text("3 0\n") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_text("# nothing\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let a = irreducible_example();
        let j = to_json(&a);
        assert_eq!(parse_json(&j).unwrap(), a);
        assert_eq!(parse_auto(&j).unwrap(), a);
        assert_eq!(parse_auto(&to_text(&a)).unwrap(), a);
        let b: Ecs = serde_json::from_str(r#"{"classes": [[7, 4], [0, 2], [1, 4]]}"#).unwrap();
        assert_eq!(b, Ecs::from_pairs(&[(0, 2), (1, 4), (3, 4)]).unwrap());
    }

    #[test]
    fn json_errors() {
        assert!(matches!(
            parse_json("{\"classes\": [[1]]}"),
            Err(Error::Parse { .. })
        ));
        assert_eq!(parse_json("{\"classes\": []}"), Err(Error::EmptySystem));
        assert_eq!(
            parse_json("{\"classes\": [[0, 0]]}"),
            Err(Error::InvalidModulus(0))
        );
    }
}
