use super::{CstKind, SourceSpan};
use crate::error::LexError;

/// A lexical token. Token texts concatenate back to the lexed source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: CstKind,
    pub text: String,
    pub span: SourceSpan,
}

pub const KEYWORDS: &[&str] = &[
    "abstract",
    "boolean",
    "byte",
    "char",
    "class",
    "double",
    "else",
    "extends",
    "final",
    "float",
    "for",
    "if",
    "implements",
    "import",
    "int",
    "long",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "this",
    "void",
    "while",
];

const LITERAL_WORDS: &[&str] = &["true", "false", "null"];

// Longest first so that greedy matching picks `==` over `=`.
const OPERATORS: &[&str] = &[
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "+", "-", "*",
    "/", "%", "<", ">", "=", "!", "&", "|", "^", "~",
];

const PUNCTUATION: &[char] = &['(', ')', '{', '}', '[', ']', ';', ',', '.', '@', '?', ':'];

/// Splits `source` into tokens covering every byte exactly once.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    Lexer::new(source).run()
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    tokens: Vec<Token>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            pos: 0,
            line: 1,
            tokens: Vec::new(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn error(&self, at: usize, message: impl Into<String>) -> LexError {
        // `at` is always on the current line or an earlier one we can recount.
        let before = &self.src[..at];
        let line = before.matches('\n').count() + 1;
        let line_begin = before.rfind('\n').map_or(0, |i| i + 1);
        LexError {
            line,
            column: self.src[line_begin..at].chars().count() + 1,
            message: message.into(),
        }
    }

    fn run(mut self) -> Result<Vec<Token>, LexError> {
        while let Some(c) = self.peek() {
            let start = self.pos;
            let kind = if c.is_whitespace() {
                self.eat_while(char::is_whitespace);
                CstKind::WhiteSpace
            } else if self.rest().starts_with("//") {
                self.eat_while(|c| c != '\n');
                CstKind::LineComment
            } else if self.rest().starts_with("/*") {
                match self.rest()[2..].find("*/") {
                    Some(i) => self.pos += 2 + i + 2,
                    None => return Err(self.error(start, "unterminated block comment")),
                }
                CstKind::BlockComment
            } else if c.is_alphabetic() || c == '_' || c == '$' {
                self.eat_while(|c| c.is_alphanumeric() || c == '_' || c == '$');
                let word = &self.src[start..self.pos];
                if KEYWORDS.contains(&word) {
                    CstKind::Keyword
                } else if LITERAL_WORDS.contains(&word) {
                    CstKind::Literal
                } else {
                    CstKind::Identifier
                }
            } else if c.is_ascii_digit()
                || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()))
            {
                self.number();
                CstKind::Literal
            } else if c == '"' || c == '\'' {
                self.quoted(c)?;
                CstKind::Literal
            } else if let Some(op) = OPERATORS.iter().find(|op| self.rest().starts_with(**op)) {
                self.pos += op.len();
                CstKind::Operator
            } else if PUNCTUATION.contains(&c) {
                self.pos += c.len_utf8();
                CstKind::Punctuation
            } else {
                return Err(self.error(start, format!("unexpected character {c:?}")));
            };
            self.push(kind, start);
        }
        Ok(self.tokens)
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) {
        let len: usize = self
            .rest()
            .chars()
            .take_while(|&c| pred(c))
            .map(char::len_utf8)
            .sum();
        self.pos += len;
    }

    fn number(&mut self) {
        let digits = |c: char| c.is_ascii_digit() || c == '_';
        if self.rest().starts_with("0x") || self.rest().starts_with("0X") {
            self.pos += 2;
            self.eat_while(|c| c.is_ascii_hexdigit() || c == '_');
        } else {
            self.eat_while(digits);
            if self.peek() == Some('.') && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                self.pos += 1;
                self.eat_while(digits);
            }
            if matches!(self.peek(), Some('e' | 'E')) {
                let sign = usize::from(matches!(self.peek_at(1), Some('+' | '-')));
                if self.peek_at(1 + sign).is_some_and(|d| d.is_ascii_digit()) {
                    self.pos += 1 + sign;
                    self.eat_while(digits);
                }
            }
        }
        if matches!(self.peek(), Some('l' | 'L' | 'f' | 'F' | 'd' | 'D')) {
            self.pos += 1;
        }
    }

    fn quoted(&mut self, quote: char) -> Result<(), LexError> {
        let start = self.pos;
        self.pos += 1;
        loop {
            match self.peek() {
                None | Some('\n') => {
                    let what = if quote == '"' { "string" } else { "character" };
                    return Err(self.error(start, format!("unterminated {what} literal")));
                }
                Some('\\') => {
                    self.pos += 1;
                    if let Some(c) = self.peek() {
                        if c != '\n' {
                            self.pos += c.len_utf8();
                        }
                    }
                }
                Some(c) => {
                    self.pos += c.len_utf8();
                    if c == quote {
                        return Ok(());
                    }
                }
            }
        }
    }

    fn push(&mut self, kind: CstKind, start: usize) {
        let text = &self.src[start..self.pos];
        let line_start = self.line;
        let newlines = text.matches('\n').count();
        // The last byte of a token ending in '\n' still sits on the earlier line.
        let line_end = line_start + newlines - usize::from(text.ends_with('\n'));
        self.line += newlines;
        self.tokens.push(Token {
            kind,
            text: text.to_owned(),
            span: SourceSpan {
                start,
                end: self.pos,
                line_start,
                line_end,
            },
        });
    }
}
