//! Untyped syntax trees for TPTP statements, produced by a recursive-descent
//! parser. Typing happens later in [`super::elaborate`].

use super::lexer::{Spanned, Tok};
use super::{Language, ParseError};

#[derive(Clone, Debug, PartialEq)]
pub enum TypeAst {
    Name(String),
    Fun(Box<TypeAst>, Box<TypeAst>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    And,
    Or,
    Implies,
    RevImplies,
    Iff,
    Xor,
    Nor,
    Nand,
    Eq,
    Neq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quant {
    Forall,
    Exists,
    Lambda,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Var(String, Pos),
    /// Constant or defined word (`$true`), possibly applied FOF-style.
    Fun(String, Vec<Ast>, Pos),
    App(Box<Ast>, Box<Ast>, Pos),
    Not(Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>, Pos),
    Quant(Quant, Vec<(String, Option<TypeAst>)>, Box<Ast>, Pos),
    /// A connective used as a term: `(~)`, `(&)`, `!!`, ...
    Connective(ConnTerm, Pos),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnTerm {
    Not,
    Bin(BinOp),
    Pi,
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub enum Statement {
    Formula {
        lang: Language,
        name: String,
        role: String,
        body: FormulaBody,
        pos: Pos,
    },
    Include {
        file: String,
        selection: Option<Vec<String>>,
    },
}

#[derive(Clone, Debug)]
pub enum FormulaBody {
    Formula(Ast),
    /// `name : type`, or `name : $tType`.
    TypeDecl(String, TypeAst),
}

pub struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    lang: Language,
}

impl Parser {
    pub fn new(toks: Vec<Spanned>) -> Parser {
        Parser {
            toks,
            pos: 0,
            lang: Language::Thf,
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> Pos {
        let s = &self.toks[self.pos];
        Pos {
            line: s.line,
            col: s.col,
        }
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let p = self.here();
        Err(ParseError::syntax(p.line, p.col, msg))
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.advance();
            Ok(())
        } else {
            self.err(format!("expected {t:?}, found {:?}", self.peek()))
        }
    }

    pub fn statements(&mut self) -> Result<Vec<Statement>, ParseError> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            out.push(self.statement()?);
        }
        Ok(out)
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.advance() {
            Tok::Lower(s) | Tok::Quoted(s) | Tok::Number(s) | Tok::Upper(s) => Ok(s),
            other => {
                self.pos -= 1;
                self.err(format!("expected a name, found {other:?}"))
            }
        }
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let pos = self.here();
        let kw = match self.advance() {
            Tok::Lower(s) => s,
            other => {
                self.pos -= 1;
                return self.err(format!("expected an annotated formula, found {other:?}"));
            }
        };
        self.expect(Tok::LParen)?;
        if kw == "include" {
            let file = match self.advance() {
                Tok::Quoted(s) => s,
                _ => {
                    self.pos -= 1;
                    return self.err("expected quoted file name in include");
                }
            };
            let mut selection = None;
            if *self.peek() == Tok::Comma {
                self.advance();
                self.expect(Tok::LBrack)?;
                let mut names = Vec::new();
                while *self.peek() != Tok::RBrack {
                    names.push(self.name()?);
                    if *self.peek() == Tok::Comma {
                        self.advance();
                    }
                }
                self.advance();
                selection = Some(names);
            }
            self.expect(Tok::RParen)?;
            self.expect(Tok::Dot)?;
            return Ok(Statement::Include { file, selection });
        }
        let lang = match kw.as_str() {
            "thf" => Language::Thf,
            "fof" => Language::Fof,
            "cnf" => Language::Cnf,
            "tff" | "tcf" => return self.err("TFF input is not supported"),
            _ => return self.err(format!("unknown statement kind `{kw}`")),
        };
        self.lang = lang;
        let name = self.name()?;
        self.expect(Tok::Comma)?;
        let role = match self.advance() {
            Tok::Lower(s) => s,
            _ => {
                self.pos -= 1;
                return self.err("expected a formula role");
            }
        };
        self.expect(Tok::Comma)?;
        let body = if role == "type" {
            self.type_decl()?
        } else {
            FormulaBody::Formula(self.formula()?)
        };
        // annotations are skipped
        if *self.peek() == Tok::Comma {
            self.skip_annotations()?;
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Dot)?;
        Ok(Statement::Formula {
            lang,
            name,
            role,
            body,
            pos,
        })
    }

    fn skip_annotations(&mut self) -> Result<(), ParseError> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return self.err("unterminated annotations"),
                Tok::LParen | Tok::LBrack => depth += 1,
                Tok::RParen | Tok::RBrack => {
                    if depth == 0 {
                        return Ok(());
                    }
                    depth -= 1;
                }
                _ => {}
            }
            self.advance();
        }
    }

    fn type_decl(&mut self) -> Result<FormulaBody, ParseError> {
        if *self.peek() == Tok::LParen {
            self.advance();
            let d = self.type_decl()?;
            self.expect(Tok::RParen)?;
            return Ok(d);
        }
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let ty = self.type_expr()?;
        Ok(FormulaBody::TypeDecl(name, ty))
    }

    fn type_expr(&mut self) -> Result<TypeAst, ParseError> {
        let lhs = self.type_atom()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let rhs = self.type_expr()?;
            return Ok(TypeAst::Fun(Box::new(lhs), Box::new(rhs)));
        }
        if *self.peek() == Tok::Star {
            return self.err("product types are not part of THF0");
        }
        Ok(lhs)
    }

    fn type_atom(&mut self) -> Result<TypeAst, ParseError> {
        match self.advance() {
            Tok::LParen => {
                let t = self.type_expr()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Dollar(s) | Tok::Lower(s) | Tok::Quoted(s) => Ok(TypeAst::Name(s)),
            other => {
                self.pos -= 1;
                self.err(format!("expected a type, found {other:?}"))
            }
        }
    }

    pub fn formula(&mut self) -> Result<Ast, ParseError> {
        self.level_equiv()
    }

    fn level_equiv(&mut self) -> Result<Ast, ParseError> {
        let lhs = self.level_or()?;
        let op = match self.peek() {
            Tok::Iff => BinOp::Iff,
            Tok::Implies => BinOp::Implies,
            Tok::RevImplies => BinOp::RevImplies,
            Tok::Xor => BinOp::Xor,
            Tok::Nor => BinOp::Nor,
            Tok::Nand => BinOp::Nand,
            _ => return Ok(lhs),
        };
        let pos = self.here();
        self.advance();
        // right-associative
        let rhs = self.level_equiv()?;
        Ok(Ast::Bin(op, Box::new(lhs), Box::new(rhs), pos))
    }

    fn level_or(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.level_and()?;
        while *self.peek() == Tok::Pipe {
            let pos = self.here();
            self.advance();
            let rhs = self.level_and()?;
            lhs = Ast::Bin(BinOp::Or, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn level_and(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.level_eq()?;
        while *self.peek() == Tok::Amp {
            let pos = self.here();
            self.advance();
            let rhs = self.level_eq()?;
            lhs = Ast::Bin(BinOp::And, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn level_eq(&mut self) -> Result<Ast, ParseError> {
        let lhs = self.level_app()?;
        let op = match self.peek() {
            Tok::Eq => BinOp::Eq,
            Tok::Neq => BinOp::Neq,
            _ => return Ok(lhs),
        };
        let pos = self.here();
        self.advance();
        let rhs = self.level_app()?;
        Ok(Ast::Bin(op, Box::new(lhs), Box::new(rhs), pos))
    }

    fn level_app(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::At {
            let pos = self.here();
            self.advance();
            let rhs = self.unary()?;
            lhs = Ast::App(Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        let pos = self.here();
        match self.peek().clone() {
            Tok::Tilde => {
                self.advance();
                let body = self.level_app()?;
                Ok(Ast::Not(Box::new(body)))
            }
            Tok::Bang | Tok::Question | Tok::Caret => {
                let q = match self.advance() {
                    Tok::Bang => Quant::Forall,
                    Tok::Question => Quant::Exists,
                    _ => Quant::Lambda,
                };
                self.expect(Tok::LBrack)?;
                let mut vars = Vec::new();
                loop {
                    let v = match self.advance() {
                        Tok::Upper(s) => s,
                        other => {
                            self.pos -= 1;
                            return self.err(format!("expected a variable, found {other:?}"));
                        }
                    };
                    let ty = if *self.peek() == Tok::Colon {
                        self.advance();
                        Some(self.type_expr()?)
                    } else {
                        None
                    };
                    vars.push((v, ty));
                    match self.advance() {
                        Tok::Comma => continue,
                        Tok::RBrack => break,
                        other => {
                            self.pos -= 1;
                            return self.err(format!("expected `,` or `]`, found {other:?}"));
                        }
                    }
                }
                self.expect(Tok::Colon)?;
                let body = self.level_app()?;
                Ok(Ast::Quant(q, vars, Box::new(body), pos))
            }
            Tok::LParen => {
                // connective as a term: (~), (&), (=) ...
                let conn = match (self.peek_at(1), self.peek_at(2)) {
                    (Tok::Tilde, Tok::RParen) => Some(ConnTerm::Not),
                    (t, Tok::RParen) => bin_of(t).map(ConnTerm::Bin),
                    _ => None,
                };
                if let Some(c) = conn {
                    self.advance();
                    self.advance();
                    self.advance();
                    return Ok(Ast::Connective(c, pos));
                }
                self.advance();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::PiPi => {
                self.advance();
                Ok(Ast::Connective(ConnTerm::Pi, pos))
            }
            Tok::SigmaSigma => {
                self.advance();
                Ok(Ast::Connective(ConnTerm::Sigma, pos))
            }
            Tok::Upper(v) => {
                self.advance();
                Ok(Ast::Var(v, pos))
            }
            Tok::Lower(s) | Tok::Quoted(s) | Tok::Dollar(s) | Tok::Number(s) => {
                self.advance();
                let args = self.fof_args()?;
                Ok(Ast::Fun(s, args, pos))
            }
            Tok::Distinct(s) => {
                self.advance();
                Ok(Ast::Fun(format!("\"{s}\""), Vec::new(), pos))
            }
            other => self.err(format!("unexpected token {other:?}")),
        }
    }

    fn fof_args(&mut self) -> Result<Vec<Ast>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen && self.lang != Language::Thf {
            self.advance();
            loop {
                args.push(self.formula()?);
                match self.advance() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    other => {
                        self.pos -= 1;
                        return self.err(format!("expected `,` or `)`, found {other:?}"));
                    }
                }
            }
        }
        Ok(args)
    }
}

fn bin_of(t: &Tok) -> Option<BinOp> {
    Some(match t {
        Tok::Amp => BinOp::And,
        Tok::Pipe => BinOp::Or,
        Tok::Implies => BinOp::Implies,
        Tok::RevImplies => BinOp::RevImplies,
        Tok::Iff => BinOp::Iff,
        Tok::Xor => BinOp::Xor,
        Tok::Eq => BinOp::Eq,
        Tok::Neq => BinOp::Neq,
        _ => return None,
    })
}
