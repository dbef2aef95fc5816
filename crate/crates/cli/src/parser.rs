//! Recursive-descent parser, one token of lookahead.

use std::collections::BTreeMap;

use svlab_core::rational::frac;
use svlab_core::Q;

use crate::ast::*;
use crate::error::{Pos, ScriptError};
use crate::lexer::{lex, Tok, Token};

pub fn parse(src: &str) -> Result<Script, ScriptError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, at: 0 };
    let script = p.script()?;
    check_bindings(&script)?;
    Ok(script)
}

fn check_bindings(script: &Script) -> Result<(), ScriptError> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for s in &script.statements {
        if let Some(name) = s.stmt.binds() {
            if let Some(&first) = seen.get(name) {
                return Err(ScriptError::Duplicate {
                    pos: s.pos,
                    name: name.to_string(),
                    first,
                });
            }
            seen.insert(name, s.pos.line);
        }
    }
    Ok(())
}

const CALLS: &[&str] = &["double", "connsum", "product", "disjoint", "reverse", "glue", "cover"];

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.tokens[(self.at + 1).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ScriptError> {
        Err(ScriptError::Syntax {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ScriptError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(&[&t.to_string()])
        }
    }

    fn ident(&mut self) -> Result<String, ScriptError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn uint(&mut self) -> Result<u64, ScriptError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(n as u64)
            }
            _ => self.error(&["integer"]),
        }
    }

    fn int(&mut self) -> Result<i64, ScriptError> {
        let neg = self.eat(&Tok::Minus);
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => self.error(&["integer"]),
        }
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek(), Tok::Newline | Tok::Comment(_)) {
            self.bump();
        }
    }

    fn script(&mut self) -> Result<Script, ScriptError> {
        let mut statements = Vec::new();
        loop {
            let pos = self.pos();
            let stmt = match self.peek().clone() {
                Tok::Eof => break,
                Tok::Newline => {
                    self.bump();
                    statements.push(Statement {
                        pos,
                        stmt: Stmt::Blank,
                        trailing: None,
                    });
                    continue;
                }
                Tok::Comment(c) => {
                    self.bump();
                    Stmt::Comment(c)
                }
                _ => self.statement()?,
            };
            let trailing = match self.peek().clone() {
                Tok::Comment(c) if !matches!(stmt, Stmt::Comment(_)) => {
                    self.bump();
                    Some(c)
                }
                _ => None,
            };
            match self.peek() {
                Tok::Newline => {
                    self.bump();
                }
                Tok::Eof => {}
                _ => return self.error(&["newline"]),
            }
            statements.push(Statement { pos, stmt, trailing });
        }
        Ok(Script { statements })
    }

    fn statement(&mut self) -> Result<Stmt, ScriptError> {
        const STATEMENTS: [&str; 6] = ["`manifold`", "`let`", "`certify`", "`assert`", "`query`", "`cobordism`"];
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.error(&STATEMENTS),
        };
        match kw.as_str() {
            "manifold" => {
                self.bump();
                let name = self.ident()?;
                let attrs = self.block(KEYS)?;
                Ok(Stmt::Manifold { name, attrs })
            }
            "let" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Assign)?;
                let expr = self.expr()?;
                Ok(Stmt::Let { name, expr })
            }
            "certify" => {
                self.bump();
                let name = self.ident()?;
                let stable = match self.peek() {
                    Tok::Ident(s) if s == "stable" => {
                        self.bump();
                        self.expect(Tok::LParen)?;
                        let cocycle = self.ident()?;
                        self.expect(Tok::Comma)?;
                        let degrees = self.list(|p| p.uint())?;
                        self.expect(Tok::RParen)?;
                        Some(Stable { cocycle, degrees })
                    }
                    _ => None,
                };
                Ok(Stmt::Certify { name, stable })
            }
            "assert" => {
                self.bump();
                self.assertion().map(Stmt::Assert)
            }
            "query" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Dot)?;
                let pos = self.pos();
                let invariant = self.ident()?;
                if !QUERIES.contains(&invariant.as_str()) {
                    return Err(ScriptError::Syntax {
                        pos,
                        expected: QUERIES.iter().map(|s| format!("`{s}`")).collect(),
                        found: format!("identifier `{invariant}`"),
                    });
                }
                Ok(Stmt::Query { name, invariant })
            }
            "cobordism" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Assign)?;
                let def = if matches!(self.peek(), Tok::Ident(_)) && *self.peek2() == Tok::LBracket {
                    let body = self.ident()?;
                    let incoming = self.list(|p| p.uint().map(|n| n as usize))?;
                    self.expect(Tok::Arrow)?;
                    let outgoing = self.list(|p| p.uint().map(|n| n as usize))?;
                    CobDef::Explicit {
                        body,
                        incoming,
                        outgoing,
                    }
                } else {
                    CobDef::Word(self.word()?)
                };
                Ok(Stmt::Cobordism { name, def })
            }
            _ => self.error(&STATEMENTS),
        }
    }

    /// `[a, b, ...]`, possibly empty.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Parser) -> Result<T, ScriptError>) -> Result<Vec<T>, ScriptError> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(&Tok::RBracket) {
                return Ok(out);
            }
            if !self.eat(&Tok::Comma) {
                return self.error(&["`,`", "`]`"]);
            }
        }
    }

    /// `{ key: value ... }` with entries separated by commas or newlines.
    fn block(&mut self, keys: &[&str]) -> Result<Vec<Attr>, ScriptError> {
        self.expect(Tok::LBrace)?;
        let mut attrs = Vec::new();
        loop {
            self.skip_newlines();
            if self.eat(&Tok::RBrace) {
                return Ok(attrs);
            }
            let pos = self.pos();
            let key = self.ident()?;
            if !keys.contains(&key.as_str()) {
                return Err(ScriptError::UnknownKey {
                    pos,
                    key,
                    allowed: keys.iter().map(|s| s.to_string()).collect(),
                });
            }
            if attrs.iter().any(|a: &Attr| a.key == key) {
                return Err(ScriptError::Invalid {
                    pos,
                    msg: format!("attribute `{key}` given twice"),
                });
            }
            self.expect(Tok::Colon)?;
            let value = self.value(&key)?;
            attrs.push(Attr { key, value });
            if !self.eat(&Tok::Comma) && !matches!(self.peek(), Tok::Newline | Tok::Comment(_) | Tok::RBrace) {
                return self.error(&["`,`", "newline", "`}`"]);
            }
        }
    }

    fn value(&mut self, key: &str) -> Result<Value, ScriptError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                match s.as_str() {
                    "true" => Ok(Value::Bool(true)),
                    "false" => Ok(Value::Bool(false)),
                    "unknown" => Ok(Value::Unknown),
                    _ if *self.peek() == Tok::LBrace && key == "boundary" => {
                        Ok(Value::Tagged(s, self.block(BOUNDARY_KEYS)?))
                    }
                    _ if *self.peek() == Tok::LBracket && key == "triangulation" => {
                        self.bump();
                        let n = self.uint()?;
                        self.expect(Tok::RBracket)?;
                        Ok(Value::Ident(format!("{s}[{n}]")))
                    }
                    _ => Ok(Value::Ident(s)),
                }
            }
            Tok::Int(_) | Tok::Minus => Ok(Value::Int(self.int()?)),
            Tok::LBracket => {
                self.bump();
                let mut out = Vec::new();
                loop {
                    self.skip_newlines();
                    if self.eat(&Tok::RBracket) {
                        return Ok(Value::List(out));
                    }
                    out.push(self.value(key)?);
                    self.skip_newlines();
                    if !self.eat(&Tok::Comma) && *self.peek() != Tok::RBracket {
                        return self.error(&["`,`", "`]`"]);
                    }
                }
            }
            Tok::LBrace if key == "fibre" => Ok(Value::Block(self.block(FIBRE_KEYS)?)),
            _ => self.error(&["`true`", "`false`", "`unknown`", "integer", "identifier", "`[`", "`{`"]),
        }
    }

    fn expr(&mut self) -> Result<Expr, ScriptError> {
        let name = self.ident()?;
        match self.peek() {
            Tok::LParen if CALLS.contains(&name.as_str()) => {
                self.bump();
                let e = self.call(&name)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                self.bump();
                let n = self.uint()?;
                self.expect(Tok::RBracket)?;
                Ok(Expr::Indexed(name, n))
            }
            _ => Ok(Expr::Name(name)),
        }
    }

    fn call(&mut self, f: &str) -> Result<Expr, ScriptError> {
        let arg = |p: &mut Parser| p.expr().map(Box::new);
        Ok(match f {
            "double" => Expr::Double(arg(self)?),
            "reverse" => Expr::Reverse(arg(self)?),
            "connsum" | "product" | "disjoint" => {
                let a = arg(self)?;
                self.expect(Tok::Comma)?;
                let b = arg(self)?;
                match f {
                    "connsum" => Expr::ConnSum(a, b),
                    "product" => Expr::Product(a, b),
                    _ => Expr::Disjoint(a, b),
                }
            }
            "glue" => {
                let (left, left_component) = self.port()?;
                self.expect(Tok::Comma)?;
                let (right, right_component) = self.port()?;
                let map = if self.eat(&Tok::Comma) {
                    Some(self.list(|p| {
                        p.expect(Tok::LParen)?;
                        let u = p.uint()? as usize;
                        p.expect(Tok::Comma)?;
                        let v = p.uint()? as usize;
                        p.expect(Tok::RParen)?;
                        Ok((u, v))
                    })?)
                } else {
                    None
                };
                Expr::Glue {
                    left: Box::new(left),
                    left_component,
                    right: Box::new(right),
                    right_component,
                    map,
                }
            }
            "cover" => {
                let base = arg(self)?;
                self.expect(Tok::Comma)?;
                let cocycle = self.ident()?;
                self.expect(Tok::Comma)?;
                let degree = self.uint()?;
                Expr::Cover { base, cocycle, degree }
            }
            _ => unreachable!("not a call: {f}"),
        })
    }

    /// `E.bN`
    fn port(&mut self) -> Result<(Expr, usize), ScriptError> {
        let e = self.expr()?;
        self.expect(Tok::Dot)?;
        let pos = self.pos();
        let b = self.ident()?;
        match b.strip_prefix('b').and_then(|n| n.parse().ok()) {
            Some(k) => Ok((e, k)),
            None => Err(ScriptError::Syntax {
                pos,
                expected: vec!["boundary index `bN`".into()],
                found: format!("identifier `{b}`"),
            }),
        }
    }

    fn word(&mut self) -> Result<Word, ScriptError> {
        let mut w = self.term()?;
        while self.eat(&Tok::Semi) {
            w = Word::Compose(Box::new(w), Box::new(self.term()?));
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word, ScriptError> {
        let mut w = self.atom()?;
        while self.eat(&Tok::Star) {
            w = Word::Tensor(Box::new(w), Box::new(self.atom()?));
        }
        Ok(w)
    }

    fn atom(&mut self) -> Result<Word, ScriptError> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let w = self.word()?;
                self.expect(Tok::RParen)?;
                Ok(w)
            }
            Tok::Ident(_) => Ok(Word::Name(self.ident()?)),
            _ => self.error(&["identifier", "`(`"]),
        }
    }

    fn assertion(&mut self) -> Result<Assertion, ScriptError> {
        let pos = self.pos();
        let func = self.ident()?;
        if !FUNCS.contains(&func.as_str()) {
            return Err(ScriptError::Syntax {
                pos,
                expected: FUNCS.iter().map(|s| format!("`{s}`")).collect(),
                found: format!("identifier `{func}`"),
            });
        }
        self.expect(Tok::LParen)?;
        let arg = self.ident()?;
        self.expect(Tok::RParen)?;
        let op = match self.peek() {
            Tok::Eq => Op::Eq,
            Tok::Ne => Op::Ne,
            Tok::Le => Op::Le,
            Tok::Ge => Op::Ge,
            Tok::Lt => Op::Lt,
            Tok::Gt => Op::Gt,
            _ => return self.error(&["`==`", "`!=`", "`<=`", "`>=`", "`<`", "`>`"]),
        };
        self.bump();
        let expected = self.expected()?;
        Ok(Assertion {
            func,
            arg,
            op,
            expected,
        })
    }

    fn rational(&mut self) -> Result<Q, ScriptError> {
        let n = self.int()?;
        if self.eat(&Tok::Slash) {
            let pos = self.pos();
            let d = self.uint()?;
            if d == 0 {
                return Err(ScriptError::Invalid {
                    pos,
                    msg: "zero denominator".into(),
                });
            }
            Ok(frac(n, d as i64))
        } else {
            Ok(frac(n, 1))
        }
    }

    fn is_inf(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "inf")
    }

    fn expected(&mut self) -> Result<Expected, ScriptError> {
        match self.peek().clone() {
            Tok::Int(_) | Tok::Minus => Ok(Expected::Number(self.rational()?)),
            Tok::Ident(s) if s == "inf" => {
                self.bump();
                Ok(Expected::Inf)
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expected::Ident(s))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expected::Ident(s))
            }
            Tok::LBracket | Tok::LParen => {
                let strict = self.bump().tok == Tok::LParen;
                let lo = self.rational()?;
                if !strict && self.eat(&Tok::RBracket) {
                    return self.error(&["`,`"]);
                }
                let mut rest = Vec::new();
                let mut hi = None;
                while self.eat(&Tok::Comma) {
                    if self.is_inf() {
                        self.bump();
                        hi = Some(None);
                        break;
                    }
                    let x = self.rational()?;
                    rest.push(x.clone());
                    hi = Some(Some(x));
                }
                match self.peek() {
                    Tok::RBracket if rest.len() <= 1 && hi.is_some() => {
                        self.bump();
                        Ok(Expected::Interval {
                            lo,
                            strict,
                            hi: hi.flatten(),
                        })
                    }
                    Tok::RParen if strict && !matches!(hi, Some(None)) => {
                        self.bump();
                        Ok(Expected::Tuple(std::iter::once(lo).chain(rest).collect()))
                    }
                    _ => self.error(&["`]`", "`)`", "`,`"]),
                }
            }
            _ => self.error(&["number", "`inf`", "interval", "tuple", "identifier"]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_binding() {
        let s = parse("let D = double(PuncturedTorus)\n").unwrap();
        assert_eq!(
            s.kinds(),
            vec![&Stmt::Let {
                name: "D".into(),
                expr: Expr::Double(Box::new(Expr::Name("PuncturedTorus".into())))
            }]
        );
    }

    #[test]
    fn missing_operand_has_a_position() {
        let e = parse("let X = connsum(T2, )").unwrap_err();
        match e {
            ScriptError::Syntax { pos, expected, .. } => {
                assert_eq!(pos, Pos { line: 1, col: 21 });
                assert_eq!(expected, vec!["identifier"]);
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn unknown_keys_and_duplicates() {
        let e = parse("manifold A { dim: 2, closd: true }").unwrap_err();
        assert!(
            matches!(e, ScriptError::UnknownKey { ref key, .. } if key == "closd"),
            "{e}"
        );
        let e = parse("manifold A { dim: 1, boundary: [B { injective: true }] }").unwrap_err();
        assert!(
            matches!(e, ScriptError::UnknownKey { ref key, .. } if key == "injective"),
            "{e}"
        );
        let e = parse("let A = Torus7\nlet A = Torus7\n").unwrap_err();
        assert!(matches!(e, ScriptError::Duplicate { first: 1, .. }), "{e}");
    }

    #[test]
    fn assertion_values() {
        let rhs = |s: &str| match &parse(&format!("assert sv(A) == {s}")).unwrap().kinds()[0] {
            Stmt::Assert(a) => a.expected.clone(),
            _ => unreachable!(),
        };
        assert_eq!(rhs("-3/6"), Expected::Number(frac(-1, 2)));
        assert_eq!(
            rhs("[1/7, inf]"),
            Expected::Interval {
                lo: frac(1, 7),
                strict: false,
                hi: None
            }
        );
        assert_eq!(
            rhs("(0, 2]"),
            Expected::Interval {
                lo: frac(0, 1),
                strict: true,
                hi: Some(frac(2, 1))
            }
        );
        assert_eq!(rhs("(4, 0)"), Expected::Tuple(vec![frac(4, 1), frac(0, 1)]));
        assert_eq!(rhs("vacuous"), Expected::Ident("vacuous".into()));
        assert!(parse("assert sv(A) == [1, 2, 3]").is_err());
        assert!(parse("assert volume(A) == 0").is_err());
    }

    #[test]
    fn words_and_explicit_cobordisms() {
        let s = parse("cobordism P = Pants [0] -> [1, 2]\ncobordism W = a ; b * c ; (d ; e)\n").unwrap();
        let k = s.kinds();
        assert!(
            matches!(k[0], Stmt::Cobordism { def: CobDef::Explicit { outgoing, .. }, .. } if outgoing == &vec![1, 2])
        );
        let n = |s: &str| Box::new(Word::Name(s.into()));
        let expected = Word::Compose(
            Box::new(Word::Compose(n("a"), Box::new(Word::Tensor(n("b"), n("c"))))),
            Box::new(Word::Compose(n("d"), n("e"))),
        );
        assert!(matches!(k[1], Stmt::Cobordism { def: CobDef::Word(w), .. } if *w == expected));
    }

    #[test]
    fn multiline_blocks() {
        let src = "manifold W {\n  dim: 4 # four\n  boundary: [TB { pi1_injective: true }]\n  chi: 1\n}\n";
        let s = parse(src).unwrap();
        match s.kinds()[0] {
            Stmt::Manifold { attrs, .. } => assert_eq!(attrs.len(), 3),
            _ => unreachable!(),
        }
    }
}
