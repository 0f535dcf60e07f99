use super::diag::{DiagCode, Diagnostic, Span};

/// Maximum list nesting accepted by the reader.
pub const MAX_DEPTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Atom(String, Span),
    List(Vec<SExpr>, Span),
}

impl SExpr {
    pub fn span(&self) -> Span {
        match self {
            SExpr::Atom(_, s) | SExpr::List(_, s) => *s,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(a, _) => Some(a),
            SExpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            SExpr::Atom(..) => None,
        }
    }

    /// The keyword heading a list such as `(:objects ...)`.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '~' | '.' | '?' | ':' | '+' | '*' | '/')
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn here(&self) -> Span {
        Span {
            start: self.pos,
            end: self.pos,
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == ';' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }
}

/// Reads every top-level form. Never panics; stops at the first error.
pub fn read_all(text: &str) -> Result<Vec<SExpr>, Diagnostic> {
    let mut lx = Lexer {
        text,
        pos: 0,
        line: 1,
        col: 1,
    };
    // explicit stack: (items, span of the opening paren)
    let mut stack: Vec<(Vec<SExpr>, Span)> = Vec::new();
    let mut top = Vec::new();
    loop {
        lx.skip_trivia();
        let start = lx.here();
        let Some(c) = lx.peek() else { break };
        match c {
            '(' => {
                if stack.len() >= MAX_DEPTH {
                    return Err(Diagnostic::error(
                        DiagCode::TooDeep,
                        start,
                        format!("lists nest deeper than {MAX_DEPTH} levels"),
                    ));
                }
                lx.bump();
                stack.push((Vec::new(), start));
            }
            ')' => {
                lx.bump();
                let Some((items, open)) = stack.pop() else {
                    return Err(Diagnostic::error(
                        DiagCode::Syntax,
                        Span {
                            end: lx.pos,
                            ..start
                        },
                        "unbalanced `)`",
                    ));
                };
                let span = Span {
                    end: lx.pos,
                    ..open
                };
                let expr = SExpr::List(items, span);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(expr),
                    None => top.push(expr),
                }
            }
            c if is_ident_char(c) => {
                while let Some(c) = lx.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    lx.bump();
                }
                let span = Span {
                    end: lx.pos,
                    ..start
                };
                let expr = SExpr::Atom(text[start.start..lx.pos].to_string(), span);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(expr),
                    None => top.push(expr),
                }
            }
            other => {
                lx.bump();
                return Err(Diagnostic::error(
                    DiagCode::Syntax,
                    Span {
                        end: lx.pos,
                        ..start
                    },
                    format!("unexpected character {other:?}"),
                ));
            }
        }
    }
    if let Some((_, open)) = stack.pop() {
        return Err(Diagnostic::error(
            DiagCode::Syntax,
            Span {
                end: open.start + 1,
                ..open
            },
            "unclosed `(`",
        ));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists_with_comments() {
        let forms = read_all("; hi\n(a (b ?c) d~1) ; trailing\n(e)").unwrap();
        assert_eq!(forms.len(), 2);
        let first = forms[0].as_list().unwrap();
        assert_eq!(first[0].as_atom(), Some("a"));
        assert_eq!(first[1].head(), Some("b"));
        assert_eq!(first[2].as_atom(), Some("d~1"));
        assert_eq!(forms[0].span().line, 2);
        assert_eq!(forms[1].span().col, 1);
        assert_eq!(forms[1].span().line, 3);
    }

    #[test]
    fn errors_carry_positions() {
        let e = read_all("(a\n  b))").unwrap_err();
        assert_eq!((e.line, e.column, e.code), (2, 5, DiagCode::Syntax));
        let e = read_all("  (a").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        let e = read_all("(a \"q\")").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
    }

    #[test]
    fn depth_limit() {
        let deep = "(".repeat(MAX_DEPTH + 1);
        assert_eq!(read_all(&deep).unwrap_err().code, DiagCode::TooDeep);
        let ok = format!("{}{}", "(".repeat(MAX_DEPTH), ")".repeat(MAX_DEPTH));
        assert!(read_all(&ok).is_ok());
    }
}
