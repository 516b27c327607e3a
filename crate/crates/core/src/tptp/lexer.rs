use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    Quoted(String),
    Distinct(String),
    Number(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Colon,
    At,
    Caret,
    Bang,
    Question,
    PiPi,
    SigmaSigma,
    Tilde,
    Amp,
    Pipe,
    Eq,
    Neq,
    Implies,
    RevImplies,
    Iff,
    Xor,
    Nor,
    Nand,
    Arrow,
    Star,
    Plus,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let (l0, c0) = (line, col);
            bump!();
            bump!();
            loop {
                if i >= chars.len() {
                    return Err(ParseError::syntax(l0, c0, "unterminated block comment"));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump!();
                    bump!();
                    break;
                }
                bump!();
            }
            continue;
        }
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok: Tok| out.push(Spanned { tok, line: l0, col: c0 });

        if c.is_ascii_alphabetic() || c == '$' {
            let start = i;
            bump!();
            if c == '$' && chars.get(i) == Some(&'$') {
                bump!();
            }
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump!();
            }
            let word: String = chars[start..i].iter().collect();
            let tok = if c == '$' {
                Tok::Dollar(word)
            } else if c.is_ascii_uppercase() {
                Tok::Upper(word)
            } else {
                Tok::Lower(word)
            };
            push(&mut out, tok);
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || matches!(chars[i], '.' | '/' | 'e' | 'E')) {
                // a trailing '.' ends the statement, not the number
                if chars[i] == '.' && !chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    break;
                }
                bump!();
            }
            push(&mut out, Tok::Number(chars[start..i].iter().collect()));
            continue;
        }
        if c == '\'' || c == '"' {
            let quote = c;
            bump!();
            let mut s = String::new();
            loop {
                if i >= chars.len() {
                    return Err(ParseError::syntax(l0, c0, "unterminated quoted token"));
                }
                let d = chars[i];
                if d == '\\' && i + 1 < chars.len() {
                    bump!();
                    s.push(chars[i]);
                    bump!();
                    continue;
                }
                bump!();
                if d == quote {
                    break;
                }
                s.push(d);
            }
            push(
                &mut out,
                if quote == '\'' {
                    Tok::Quoted(s)
                } else {
                    Tok::Distinct(s)
                },
            );
            continue;
        }
        let rest: String = chars[i..(i + 3).min(chars.len())].iter().collect();
        let (tok, len) = if rest.starts_with("<=>") {
            (Tok::Iff, 3)
        } else if rest.starts_with("<~>") {
            (Tok::Xor, 3)
        } else if rest.starts_with("=>") {
            (Tok::Implies, 2)
        } else if rest.starts_with("<=") {
            (Tok::RevImplies, 2)
        } else if rest.starts_with("~|") {
            (Tok::Nor, 2)
        } else if rest.starts_with("~&") {
            (Tok::Nand, 2)
        } else if rest.starts_with("!=") {
            (Tok::Neq, 2)
        } else if rest.starts_with("!!") {
            (Tok::PiPi, 2)
        } else if rest.starts_with("??") {
            (Tok::SigmaSigma, 2)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                '@' => Tok::At,
                '^' => Tok::Caret,
                '!' => Tok::Bang,
                '?' => Tok::Question,
                '~' => Tok::Tilde,
                '&' => Tok::Amp,
                '|' => Tok::Pipe,
                '=' => Tok::Eq,
                '>' => Tok::Arrow,
                '*' => Tok::Star,
                '+' => Tok::Plus,
                other => return Err(ParseError::syntax(l0, c0, format!("unexpected character `{other}`"))),
            };
            (t, 1)
        };
        for _ in 0..len {
            bump!();
        }
        push(&mut out, tok);
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}
