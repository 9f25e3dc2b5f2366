use super::{Gluing, Perm4, TriangulationError};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> TriangulationError {
    TriangulationError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Reads `tet <i>: <n>/<perm> x4` lines. Unglued faces may be written `-` and are
/// reported as such by validation; anything else malformed is a syntax error.
pub(super) fn parse_rows(text: &str) -> Result<Vec<[Gluing; 4]>, TriangulationError> {
    let mut rows: Vec<[Gluing; 4]> = Vec::new();
    let mut unglued: Option<(usize, usize)> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let (col, kw) = toks[0];
        if kw != "tet" {
            return Err(syntax(lineno, col, format!("expected `tet`, found `{kw}`")));
        }
        let Some(&(col, label)) = toks.get(1) else {
            return Err(syntax(lineno, line.len() + 1, "missing tetrahedron label"));
        };
        let Some(index) = label.strip_suffix(':') else {
            return Err(syntax(lineno, col, "tetrahedron label must end with `:`"));
        };
        let index: usize = index
            .parse()
            .map_err(|_| syntax(lineno, col, format!("bad tetrahedron index `{index}`")))?;
        if index != rows.len() {
            return Err(syntax(
                lineno,
                col,
                format!("expected tetrahedron {}, found {index}", rows.len()),
            ));
        }
        if toks.len() != 6 {
            let column = toks.get(6).map_or(line.len() + 1, |t| t.0);
            return Err(syntax(
                lineno,
                column,
                format!("expected 4 gluings, found {}", toks.len().saturating_sub(2)),
            ));
        }
        let mut row = [Gluing {
            tet: 0,
            perm: Perm4::IDENTITY,
        }; 4];
        for (face, &(col, tok)) in toks[2..].iter().enumerate() {
            if tok == "-" {
                unglued.get_or_insert((index, face));
                continue;
            }
            let Some((n, p)) = tok.split_once('/') else {
                return Err(syntax(
                    lineno,
                    col,
                    format!("expected `<tet>/<perm>`, found `{tok}`"),
                ));
            };
            let tet: usize = n
                .parse()
                .map_err(|_| syntax(lineno, col, format!("bad neighbour index `{n}`")))?;
            let digits: Vec<u8> = p.bytes().map(|b| b.wrapping_sub(b'0')).collect();
            let perm = <[u8; 4]>::try_from(digits.as_slice())
                .ok()
                .and_then(Perm4::from_images)
                .ok_or_else(|| {
                    syntax(
                        lineno,
                        col + n.len() + 1,
                        format!("`{p}` is not a permutation of 0123"),
                    )
                })?;
            row[face] = Gluing { tet, perm };
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(TriangulationError::Empty);
    }
    if let Some((tet, face)) = unglued {
        return Err(TriangulationError::Unglued { tet, face });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::super::Triangulation;
    use super::*;

    #[test]
    fn reports_line_and_column() {
        let err = parse_rows("tet 0: 0/1023 0/1023 1/0132\n").unwrap_err();
        assert!(
            matches!(err, TriangulationError::Syntax { line: 1, .. }),
            "{err}"
        );
        let err = parse_rows("# header\ntet 0: 0/1023 0/10x3 1/0132 1/2310\n").unwrap_err();
        assert_eq!(
            err,
            TriangulationError::Syntax {
                line: 2,
                column: 17,
                message: "`10x3` is not a permutation of 0123".into()
            }
        );
    }

    #[test]
    fn unglued_face_is_named() {
        let err = Triangulation::parse("tet 0: - 0/1023 0/0132 0/0213\n").unwrap_err();
        assert_eq!(err, TriangulationError::Unglued { tet: 0, face: 0 });
    }

    #[test]
    fn out_of_order_labels_are_syntax_errors() {
        let err = parse_rows("tet 1: 0/1023 0/1023 1/0132 1/2310\n").unwrap_err();
        assert!(err.is_syntax());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "\n# c\ntet 0: 0/1023 0/1023 1/0132 1/2310 # trailing\n\ntet 1: 0/3201 1/1230 1/3012 0/0132\n";
        assert_eq!(parse_rows(text).unwrap().len(), 2);
    }
}
