use crate::ast::Pos;
use crate::diagnostic::Code;

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Keyword(Keyword),
    Int(i64),
    Real(f64),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Dot,
    Assign,
    EqEq,
    Bang,
    NotEq,
    Question,
    Arrow,
    FatArrow,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Keyword(k) => format!("keyword `{}`", k.as_str()),
            TokenKind::Int(i) => format!("integer `{i}`"),
            TokenKind::Real(r) => format!("real `{r}`"),
            TokenKind::Str(_) => "string literal".to_string(),
            TokenKind::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::Colon => ":",
            TokenKind::Semi => ";",
            TokenKind::Comma => ",",
            TokenKind::Dot => ".",
            TokenKind::Assign => "=",
            TokenKind::EqEq => "==",
            TokenKind::Bang => "!",
            TokenKind::NotEq => "!=",
            TokenKind::Question => "?",
            TokenKind::Arrow => "->",
            TokenKind::FatArrow => "=>",
            TokenKind::Lt => "<",
            TokenKind::Le => "<=",
            TokenKind::Gt => ">",
            TokenKind::Ge => ">=",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            TokenKind::Percent => "%",
            _ => "?",
        }
    }
}

macro_rules! keywords {
    ($($variant:ident => $text:literal,)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq)]
        pub enum Keyword {
            $($variant,)*
        }

        impl Keyword {
            pub fn as_str(self) -> &'static str {
                match self {
                    $(Keyword::$variant => $text,)*
                }
            }

            pub fn lookup(word: &str) -> Option<Keyword> {
                match word {
                    $($text => Some(Keyword::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

keywords! {
    Thing => "thing",
    Property => "property",
    Message => "message",
    Provided => "provided",
    Required => "required",
    Port => "port",
    Sends => "sends",
    Receives => "receives",
    Statechart => "statechart",
    Init => "init",
    State => "state",
    Entry => "entry",
    Exit => "exit",
    Transition => "transition",
    Event => "event",
    Guard => "guard",
    Internal => "internal",
    Action => "action",
    DataAnalytics => "data_analytics",
    Features => "features",
    Label => "label",
    Dataset => "dataset",
    Algorithm => "algorithm",
    Prediction => "prediction",
    Configuration => "configuration",
    Instance => "instance",
    Connector => "connector",
    Var => "var",
    If => "if",
    Else => "else",
    While => "while",
    Print => "print",
    DaPreprocess => "da_preprocess",
    DaTrain => "da_train",
    DaPredict => "da_predict",
    DaSave => "da_save",
    And => "and",
    Or => "or",
    Not => "not",
    True => "true",
    False => "false",
    Int => "Int",
    Real => "Real",
    Bool => "Bool",
    String => "String",
    Now => "Now",
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LexError {
    pub code: Code,
    pub pos: Pos,
    pub message: String,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl Cursor<'_> {
    fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }
}

/// Splits source text into tokens. Lexing continues past errors; the token
/// stream always ends with [`TokenKind::Eof`].
pub fn tokenize(source: &str) -> (Vec<Token>, Vec<LexError>) {
    let mut cur = Cursor {
        chars: source.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut errors = Vec::new();

    loop {
        // whitespace and comments
        loop {
            match cur.peek() {
                Some(c) if c.is_whitespace() => {
                    cur.bump();
                }
                Some('/') if cur.peek2() == Some('/') => {
                    while !matches!(cur.peek(), None | Some('\n')) {
                        cur.bump();
                    }
                }
                _ => break,
            }
        }

        let pos = cur.pos();
        let Some(c) = cur.bump() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                pos,
            });
            break;
        };

        let kind = match c {
            '{' => TokenKind::LBrace,
            '}' => TokenKind::RBrace,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            ':' => TokenKind::Colon,
            ';' => TokenKind::Semi,
            ',' => TokenKind::Comma,
            '.' => TokenKind::Dot,
            '?' => TokenKind::Question,
            '+' => TokenKind::Plus,
            '*' => TokenKind::Star,
            '/' => TokenKind::Slash,
            '%' => TokenKind::Percent,
            '-' if cur.eat('>') => TokenKind::Arrow,
            '-' => TokenKind::Minus,
            '=' if cur.eat('=') => TokenKind::EqEq,
            '=' if cur.eat('>') => TokenKind::FatArrow,
            '=' => TokenKind::Assign,
            '!' if cur.eat('=') => TokenKind::NotEq,
            '!' => TokenKind::Bang,
            '<' if cur.eat('=') => TokenKind::Le,
            '<' => TokenKind::Lt,
            '>' if cur.eat('=') => TokenKind::Ge,
            '>' => TokenKind::Gt,
            '"' => match lex_string(&mut cur) {
                Some(s) => TokenKind::Str(s),
                None => {
                    errors.push(LexError {
                        code: Code::P002,
                        pos,
                        message: "unterminated string literal".to_string(),
                    });
                    TokenKind::Str(String::new())
                }
            },
            c if c.is_ascii_digit() => lex_number(&mut cur, c, pos, &mut errors),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::from(c);
                while let Some(n) = cur.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' {
                        word.push(n);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                match Keyword::lookup(&word) {
                    Some(k) => TokenKind::Keyword(k),
                    None => TokenKind::Ident(word),
                }
            }
            other => {
                errors.push(LexError {
                    code: Code::P001,
                    pos,
                    message: format!("unexpected character `{}`", other.escape_default()),
                });
                continue;
            }
        };
        tokens.push(Token { kind, pos });
    }

    (tokens, errors)
}

fn lex_string(cur: &mut Cursor<'_>) -> Option<String> {
    let mut out = String::new();
    loop {
        match cur.bump()? {
            '"' => return Some(out),
            '\\' => match cur.bump()? {
                'n' => out.push('\n'),
                't' => out.push('\t'),
                'r' => out.push('\r'),
                other => out.push(other),
            },
            c => out.push(c),
        }
    }
}

fn lex_number(
    cur: &mut Cursor<'_>,
    first: char,
    pos: Pos,
    errors: &mut Vec<LexError>,
) -> TokenKind {
    let mut text = String::from(first);
    while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
        text.push(d);
        cur.bump();
    }
    let is_real = cur.peek() == Some('.') && cur.peek2().is_some_and(|c| c.is_ascii_digit());
    if !is_real {
        return match text.parse::<i64>() {
            Ok(v) => TokenKind::Int(v),
            Err(_) => {
                errors.push(LexError {
                    code: Code::P003,
                    pos,
                    message: format!("integer literal `{text}` does not fit in 64 bits"),
                });
                TokenKind::Int(0)
            }
        };
    }
    text.push('.');
    cur.bump();
    while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
        text.push(d);
        cur.bump();
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        let mut ahead = cur.chars.clone();
        ahead.next();
        let mut exp = String::from("e");
        if let Some(s @ ('+' | '-')) = ahead.peek().copied() {
            exp.push(s);
            ahead.next();
        }
        if ahead.peek().is_some_and(|c| c.is_ascii_digit()) {
            for _ in 0..exp.len() {
                cur.bump();
            }
            text.push_str(&exp);
            while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                text.push(d);
                cur.bump();
            }
        }
    }
    // digits, one '.', optional exponent: always a valid float
    TokenKind::Real(text.parse().expect("well-formed real literal"))
}
