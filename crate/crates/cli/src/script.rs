//! The `.mfk` script language: lexer, parser and AST.
//!
//! Statements are semicolon-terminated; comments run from `#` to end of
//! line; matrices are bracketed row lists; rationals are `p/q`. Polynomial
//! expressions are captured as token spans and handed to the core parser
//! once the ambient ring is known. Names must be declared before use and
//! may not be redeclared; both are parse-time errors with positions.

use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
    Arrow,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < bytes.len() && bytes[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                s.push(bytes[i]);
                i += 1;
                col += 1;
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line,
                col: start_col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                s.push(bytes[i]);
                i += 1;
                col += 1;
            }
            out.push(Token {
                tok: Tok::Int(s),
                line,
                col: start_col,
            });
            continue;
        }
        if c == '-' && i + 1 < bytes.len() && bytes[i + 1] == '>' {
            out.push(Token {
                tok: Tok::Arrow,
                line,
                col: start_col,
            });
            i += 2;
            col += 2;
            continue;
        }
        if "()[]{},;=^*+-/:".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line,
                col: start_col,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError {
            line,
            col,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldAst {
    Rationals,
    Prime(u64),
}

pub type MatrixAst = Vec<Vec<String>>;

#[derive(Debug, Clone)]
pub enum MfExpr {
    Koszul {
        pot: String,
        a: Vec<String>,
        b: Vec<String>,
    },
    Literal {
        e1: MatrixAst,
        e0: MatrixAst,
        pot: String,
    },
    Tensor(String, String),
    Hom(String, String),
    Dual(String),
    Shift(String),
    Sum(String, String),
    GPlus(usize, usize, String),
    BaseChange {
        obj: String,
        ring: String,
        substs: Vec<(String, String)>,
    },
}

#[derive(Debug, Clone)]
pub enum CommandAst {
    Check(String),
    Ext(String, String, u8),
    Contractible(String),
    HomotopyIso(String),
    Dual(String),
    Tensor(String, String),
    Hom(String, String),
    Koszul {
        pot: String,
        a: Vec<String>,
        b: Vec<String>,
    },
    Cok(String),
    PeriodicCheck(String, usize),
    Pncoh(usize, i64),
    ExcTable(usize),
    KoszulKe(usize),
    BlowupVerify {
        ring: String,
        f: String,
        w: String,
        m1: MatrixAst,
        m0: MatrixAst,
    },
}

#[derive(Debug, Clone)]
pub enum Stmt {
    Version(u64),
    RingDecl {
        name: String,
        field: FieldAst,
        vars: Vec<String>,
        ideal: Vec<String>,
    },
    PotDecl {
        name: String,
        expr: String,
        ring: String,
    },
    MfDecl {
        name: String,
        expr: MfExpr,
    },
    MorphDecl {
        name: String,
        source: String,
        target: String,
        f1: MatrixAst,
        f0: MatrixAst,
    },
    Command(CommandAst),
}

#[derive(Debug, Clone)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ring,
    Pot,
    Mf,
    Morph,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    names: HashMap<String, Kind>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn err_here<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self
            .peek()
            .map(|t| (t.line, t.col))
            .or_else(|| self.tokens.last().map(|t| (t.line, t.col + 1)))
            .unwrap_or((1, 1));
        Err(ParseError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.tok == Tok::Sym(c) => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err_here(format!("expected `{c}`")),
        }
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err_here("expected identifier"),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err_here(format!("expected `{kw}`")),
        }
    }

    fn expect_uint(&mut self) -> Result<u64, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Int(s)) => {
                self.pos += 1;
                s.parse()
                    .map_err(|_| ParseError {
                        line: 0,
                        col: 0,
                        msg: "integer out of range".into(),
                    })
            }
            _ => self.err_here("expected integer"),
        }
    }

    fn expect_int(&mut self) -> Result<i64, ParseError> {
        let neg = matches!(self.peek().map(|t| t.tok.clone()), Some(Tok::Sym('-')));
        if neg {
            self.pos += 1;
        }
        let n = self.expect_uint()? as i64;
        Ok(if neg { -n } else { n })
    }

    fn declare(&mut self, name: &str, kind: Kind) -> Result<(), ParseError> {
        if self.names.contains_key(name) {
            return self.err_here(format!("`{name}` is already declared"));
        }
        self.names.insert(name.to_string(), kind);
        Ok(())
    }

    fn use_name(&mut self, name: &str, kind: Kind) -> Result<(), ParseError> {
        match self.names.get(name) {
            Some(k) if *k == kind => Ok(()),
            Some(_) => self.err_here(format!("`{name}` has the wrong kind here")),
            None => self.err_here(format!("unknown name `{name}`")),
        }
    }

    /// Captures tokens up to (not including) a top-level delimiter from
    /// `stops` or the keyword `over`, re-rendered as an expression string.
    fn capture_expr(&mut self, stops: &[char]) -> Result<String, ParseError> {
        let mut depth = 0i32;
        let mut parts: Vec<String> = Vec::new();
        loop {
            let Some(t) = self.peek() else {
                return self.err_here("unterminated expression");
            };
            match &t.tok {
                Tok::Sym(c) if depth == 0 && stops.contains(c) => break,
                Tok::Ident(s) if depth == 0 && s == "over" => break,
                Tok::Sym(c) => {
                    if *c == '(' || *c == '[' {
                        depth += 1;
                    }
                    if *c == ')' || *c == ']' {
                        if depth == 0 {
                            break;
                        }
                        depth -= 1;
                    }
                    parts.push(c.to_string());
                    self.pos += 1;
                }
                Tok::Ident(s) => {
                    parts.push(s.clone());
                    self.pos += 1;
                }
                Tok::Int(s) => {
                    parts.push(s.clone());
                    self.pos += 1;
                }
                Tok::Arrow => return self.err_here("unexpected `->` in expression"),
            }
        }
        if parts.is_empty() {
            return self.err_here("empty expression");
        }
        Ok(parts.join(" "))
    }

    /// `[expr, expr, ...]`, possibly empty.
    fn parse_vector(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect_sym('[')?;
        let mut out = Vec::new();
        if matches!(self.peek().map(|t| t.tok.clone()), Some(Tok::Sym(']'))) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.capture_expr(&[',', ']'])?);
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Sym(',')) => {
                    self.pos += 1;
                }
                Some(Tok::Sym(']')) => {
                    self.pos += 1;
                    break;
                }
                _ => return self.err_here("expected `,` or `]`"),
            }
        }
        Ok(out)
    }

    /// `[[...],[...]]`; `[]` is the 0x0 matrix.
    fn parse_matrix(&mut self) -> Result<MatrixAst, ParseError> {
        self.expect_sym('[')?;
        let mut rows = Vec::new();
        if matches!(self.peek().map(|t| t.tok.clone()), Some(Tok::Sym(']'))) {
            self.pos += 1;
            return Ok(rows);
        }
        loop {
            rows.push(self.parse_vector()?);
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Sym(',')) => {
                    self.pos += 1;
                }
                Some(Tok::Sym(']')) => {
                    self.pos += 1;
                    break;
                }
                _ => return self.err_here("expected `,` or `]`"),
            }
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return self.err_here("ragged matrix rows");
        }
        Ok(rows)
    }

    fn parse_mf_expr(&mut self) -> Result<MfExpr, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Sym('{')) => {
                self.pos += 1;
                self.expect_keyword("e1")?;
                self.expect_sym('=')?;
                let e1 = self.parse_matrix()?;
                self.expect_sym(',')?;
                self.expect_keyword("e0")?;
                self.expect_sym('=')?;
                let e0 = self.parse_matrix()?;
                self.expect_sym('}')?;
                self.expect_keyword("of")?;
                let pot = self.expect_ident()?;
                self.use_name(&pot, Kind::Pot)?;
                Ok(MfExpr::Literal { e1, e0, pot })
            }
            Some(Tok::Ident(head)) => {
                self.pos += 1;
                match head.as_str() {
                    "koszul" => {
                        let (pot, a, b) = self.parse_koszul_args()?;
                        Ok(MfExpr::Koszul { pot, a, b })
                    }
                    "tensor" | "hom" | "sum" => {
                        self.expect_sym('(')?;
                        let x = self.expect_ident()?;
                        self.use_name(&x, Kind::Mf)?;
                        self.expect_sym(',')?;
                        let y = self.expect_ident()?;
                        self.use_name(&y, Kind::Mf)?;
                        self.expect_sym(')')?;
                        Ok(match head.as_str() {
                            "tensor" => MfExpr::Tensor(x, y),
                            "hom" => MfExpr::Hom(x, y),
                            _ => MfExpr::Sum(x, y),
                        })
                    }
                    "dual" | "shift" => {
                        self.expect_sym('(')?;
                        let x = self.expect_ident()?;
                        self.use_name(&x, Kind::Mf)?;
                        self.expect_sym(')')?;
                        Ok(if head == "dual" {
                            MfExpr::Dual(x)
                        } else {
                            MfExpr::Shift(x)
                        })
                    }
                    "g_plus" => {
                        self.expect_sym('(')?;
                        let n0 = self.expect_uint()? as usize;
                        self.expect_sym(',')?;
                        let n1 = self.expect_uint()? as usize;
                        self.expect_sym(',')?;
                        let pot = self.expect_ident()?;
                        self.use_name(&pot, Kind::Pot)?;
                        self.expect_sym(')')?;
                        Ok(MfExpr::GPlus(n0, n1, pot))
                    }
                    "base_change" => {
                        self.expect_sym('(')?;
                        let obj = self.expect_ident()?;
                        self.use_name(&obj, Kind::Mf)?;
                        self.expect_sym(';')?;
                        let ring = self.expect_ident()?;
                        self.use_name(&ring, Kind::Ring)?;
                        self.expect_sym(';')?;
                        let mut substs = Vec::new();
                        loop {
                            let v = self.expect_ident()?;
                            match self.peek().map(|t| t.tok.clone()) {
                                Some(Tok::Arrow) => {
                                    self.pos += 1;
                                }
                                _ => return self.err_here("expected `->`"),
                            }
                            let expr = self.capture_expr(&[',', ')'])?;
                            substs.push((v, expr));
                            match self.peek().map(|t| t.tok.clone()) {
                                Some(Tok::Sym(',')) => {
                                    self.pos += 1;
                                }
                                Some(Tok::Sym(')')) => {
                                    self.pos += 1;
                                    break;
                                }
                                _ => return self.err_here("expected `,` or `)`"),
                            }
                        }
                        Ok(MfExpr::BaseChange { obj, ring, substs })
                    }
                    other => self.err_here(format!("unknown constructor `{other}`")),
                }
            }
            _ => self.err_here("expected a factorization expression"),
        }
    }

    fn parse_koszul_args(&mut self) -> Result<(String, Vec<String>, Vec<String>), ParseError> {
        self.expect_sym('(')?;
        let pot = self.expect_ident()?;
        self.use_name(&pot, Kind::Pot)?;
        self.expect_sym(';')?;
        let a = self.parse_vector()?;
        self.expect_sym(',')?;
        let b = self.parse_vector()?;
        self.expect_sym(')')?;
        if a.len() != b.len() || a.is_empty() {
            return self.err_here("koszul needs two equal-length nonempty vectors");
        }
        Ok((pot, a, b))
    }

    fn parse_stmt(&mut self) -> Result<Stmt, ParseError> {
        let head = self.expect_ident()?;
        let stmt = match head.as_str() {
            "version" => {
                let v = self.expect_uint()?;
                if v != 1 {
                    return self.err_here(format!("unsupported script version {v}"));
                }
                Stmt::Version(v)
            }
            "ring" => {
                let name = self.expect_ident()?;
                self.expect_sym('=')?;
                let field = match self.expect_ident()?.as_str() {
                    "QQ" => FieldAst::Rationals,
                    "FP" => {
                        self.expect_sym('(')?;
                        let p = self.expect_uint()?;
                        self.expect_sym(')')?;
                        FieldAst::Prime(p)
                    }
                    other => return self.err_here(format!("unknown field `{other}`")),
                };
                self.expect_sym('[')?;
                let mut vars = Vec::new();
                if !matches!(self.peek().map(|t| t.tok.clone()), Some(Tok::Sym(']'))) {
                    loop {
                        vars.push(self.expect_ident()?);
                        match self.peek().map(|t| t.tok.clone()) {
                            Some(Tok::Sym(',')) => {
                                self.pos += 1;
                            }
                            Some(Tok::Sym(']')) => break,
                            _ => return self.err_here("expected `,` or `]`"),
                        }
                    }
                }
                self.expect_sym(']')?;
                let mut ideal = Vec::new();
                if matches!(self.peek().map(|t| t.tok.clone()), Some(Tok::Sym('/'))) {
                    self.pos += 1;
                    self.expect_sym('(')?;
                    loop {
                        ideal.push(self.capture_expr(&[',', ')'])?);
                        match self.peek().map(|t| t.tok.clone()) {
                            Some(Tok::Sym(',')) => {
                                self.pos += 1;
                            }
                            Some(Tok::Sym(')')) => {
                                self.pos += 1;
                                break;
                            }
                            _ => return self.err_here("expected `,` or `)`"),
                        }
                    }
                }
                self.declare(&name, Kind::Ring)?;
                Stmt::RingDecl {
                    name,
                    field,
                    vars,
                    ideal,
                }
            }
            "potential" => {
                let name = self.expect_ident()?;
                self.expect_sym('=')?;
                let expr = self.capture_expr(&[';'])?;
                self.expect_keyword("over")?;
                let ring = self.expect_ident()?;
                self.use_name(&ring, Kind::Ring)?;
                self.declare(&name, Kind::Pot)?;
                Stmt::PotDecl { name, expr, ring }
            }
            "mf" => {
                let name = self.expect_ident()?;
                self.expect_sym('=')?;
                let expr = self.parse_mf_expr()?;
                self.declare(&name, Kind::Mf)?;
                Stmt::MfDecl { name, expr }
            }
            "morphism" => {
                let name = self.expect_ident()?;
                self.expect_sym(':')?;
                let source = self.expect_ident()?;
                self.use_name(&source, Kind::Mf)?;
                match self.peek().map(|t| t.tok.clone()) {
                    Some(Tok::Arrow) => {
                        self.pos += 1;
                    }
                    _ => return self.err_here("expected `->`"),
                }
                let target = self.expect_ident()?;
                self.use_name(&target, Kind::Mf)?;
                self.expect_sym('=')?;
                self.expect_sym('{')?;
                self.expect_keyword("f1")?;
                self.expect_sym('=')?;
                let f1 = self.parse_matrix()?;
                self.expect_sym(',')?;
                self.expect_keyword("f0")?;
                self.expect_sym('=')?;
                let f0 = self.parse_matrix()?;
                self.expect_sym('}')?;
                self.declare(&name, Kind::Morph)?;
                Stmt::MorphDecl {
                    name,
                    source,
                    target,
                    f1,
                    f0,
                }
            }
            "check" | "contractible" | "cok" | "dual" => {
                let x = self.expect_ident()?;
                self.use_name(&x, Kind::Mf)?;
                Stmt::Command(match head.as_str() {
                    "check" => CommandAst::Check(x),
                    "contractible" => CommandAst::Contractible(x),
                    "cok" => CommandAst::Cok(x),
                    _ => CommandAst::Dual(x),
                })
            }
            "homotopy_iso" => {
                let m = self.expect_ident()?;
                self.use_name(&m, Kind::Morph)?;
                Stmt::Command(CommandAst::HomotopyIso(m))
            }
            "ext" => {
                let p = self.expect_ident()?;
                self.use_name(&p, Kind::Mf)?;
                let q = self.expect_ident()?;
                self.use_name(&q, Kind::Mf)?;
                let d = self.expect_uint()?;
                if d > 1 {
                    return self.err_here("ext degree must be 0 or 1");
                }
                Stmt::Command(CommandAst::Ext(p, q, d as u8))
            }
            "tensor" | "hom" => {
                let p = self.expect_ident()?;
                self.use_name(&p, Kind::Mf)?;
                let q = self.expect_ident()?;
                self.use_name(&q, Kind::Mf)?;
                Stmt::Command(if head == "tensor" {
                    CommandAst::Tensor(p, q)
                } else {
                    CommandAst::Hom(p, q)
                })
            }
            "koszul" => {
                let (pot, a, b) = self.parse_koszul_args()?;
                Stmt::Command(CommandAst::Koszul { pot, a, b })
            }
            "periodic_check" => {
                let x = self.expect_ident()?;
                self.use_name(&x, Kind::Mf)?;
                let n = self.expect_uint()? as usize;
                if n < 2 {
                    return self.err_here("periodic_check needs n >= 2");
                }
                Stmt::Command(CommandAst::PeriodicCheck(x, n))
            }
            "pncoh" => {
                let n = self.expect_uint()? as usize;
                if n < 1 {
                    return self.err_here("pncoh needs n >= 1");
                }
                let d = self.expect_int()?;
                Stmt::Command(CommandAst::Pncoh(n, d))
            }
            "exc_table" => {
                let n = self.expect_uint()? as usize;
                if n < 1 {
                    return self.err_here("exc_table needs n >= 1");
                }
                Stmt::Command(CommandAst::ExcTable(n))
            }
            "koszul_ke" => {
                let r = self.expect_uint()? as usize;
                if r < 1 {
                    return self.err_here("koszul_ke needs r >= 1");
                }
                Stmt::Command(CommandAst::KoszulKe(r))
            }
            "blowup_verify" => {
                self.expect_sym('(')?;
                let ring = self.expect_ident()?;
                self.use_name(&ring, Kind::Ring)?;
                self.expect_sym(';')?;
                let f = self.capture_expr(&[';'])?;
                self.expect_sym(';')?;
                let w = self.capture_expr(&[';'])?;
                self.expect_sym(';')?;
                let m1 = self.parse_matrix()?;
                self.expect_sym(',')?;
                let m0 = self.parse_matrix()?;
                self.expect_sym(')')?;
                Stmt::Command(CommandAst::BlowupVerify { ring, f, w, m1, m0 })
            }
            other => return self.err_here(format!("unknown statement `{other}`")),
        };
        self.expect_sym(';')?;
        Ok(stmt)
    }
}

pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        names: HashMap::new(),
    };
    let mut stmts = Vec::new();
    while parser.peek().is_some() {
        stmts.push(parser.parse_stmt()?);
    }
    Ok(Script { stmts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_basic_script() {
        let s = parse_script(
            "ring A = QQ[x,y];\n\
             potential W = x*y^2 over A;\n\
             mf K = koszul(W; [x],[y^2]);\n\
             check K;\n",
        )
        .unwrap();
        assert_eq!(s.stmts.len(), 4);
    }

    #[test]
    fn parses_literal_mf() {
        let s = parse_script(
            "ring A = QQ[x,y];\n\
             potential W = x*y^2 over A;\n\
             mf K = { e1 = [[x]], e0 = [[y]] } of W;\n",
        )
        .unwrap();
        assert_eq!(s.stmts.len(), 3);
    }

    #[test]
    fn position_annotated_errors() {
        let e = parse_script("ring A = QQ[x,y];\nring A = QQ[z];\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_script("check K;").unwrap_err();
        assert!(e.msg.contains("unknown name"));
        let e = parse_script("ring A = QQ[x]; potential W = x over A; mf K = koszul(W; [x],[x,x]);")
            .unwrap_err();
        assert!(e.msg.contains("equal-length"));
        let e = parse_script("ring A @ QQ[x];").unwrap_err();
        assert!(e.msg.contains("unexpected character"));
    }
}
