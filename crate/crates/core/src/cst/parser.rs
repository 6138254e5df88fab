use super::lexer::{tokenize, Token};
use super::{CstKind, CstNode, SourceSpan};
use crate::error::{ParseError, SourceError};

const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "double", "float", "int", "long", "short",
];
const MODIFIERS: &[&str] = &[
    "public",
    "private",
    "protected",
    "static",
    "final",
    "abstract",
];
const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%="];
const BINARY_LEVELS: &[&[&str]] = &[
    &["||"],
    &["&&"],
    &["|"],
    &["^"],
    &["&"],
    &["==", "!="],
    &["<", ">", "<=", ">="],
    &["+", "-"],
    &["*", "/", "%"],
];

/// Parses one source file into a lossless CST rooted at `FILE`.
///
/// `path` is only used for diagnostics.
pub fn parse_file(source: &str, path: &str) -> Result<CstNode, SourceError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser::new(source, tokens);
    parser.file()?;
    let root = parser.finish();
    log::trace!("parsed {path}: {} nodes", root.count());
    Ok(root)
}

type PResult<T = ()> = Result<T, ParseError>;

struct Parser<'s> {
    source: &'s str,
    tokens: Vec<Option<Token>>,
    /// Indices of non-trivia tokens.
    significant: Vec<usize>,
    /// Next significant token (index into `significant`).
    cursor: usize,
    /// Next raw token not yet attached to the tree.
    emitted: usize,
    stack: Vec<(CstKind, Vec<CstNode>)>,
}

impl<'s> Parser<'s> {
    fn new(source: &'s str, tokens: Vec<Token>) -> Self {
        let significant = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.kind.is_trivia())
            .map(|(i, _)| i)
            .collect();
        Self {
            source,
            tokens: tokens.into_iter().map(Some).collect(),
            significant,
            cursor: 0,
            emitted: 0,
            stack: vec![(CstKind::File, Vec::new())],
        }
    }

    // ---- token access ----

    fn nth(&self, n: usize) -> Option<&Token> {
        let idx = *self.significant.get(self.cursor + n)?;
        self.tokens[idx].as_ref()
    }

    fn at(&self, kind: CstKind, text: &str) -> bool {
        self.nth_is(0, kind, text)
    }

    fn nth_is(&self, n: usize, kind: CstKind, text: &str) -> bool {
        self.nth(n).is_some_and(|t| t.kind == kind && t.text == text)
    }

    fn at_punct(&self, p: &str) -> bool {
        self.at(CstKind::Punctuation, p)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        self.at(CstKind::Keyword, kw)
    }

    fn at_op(&self, ops: &[&str]) -> bool {
        self.nth(0)
            .is_some_and(|t| t.kind == CstKind::Operator && ops.contains(&t.text.as_str()))
    }

    fn at_eof(&self) -> bool {
        self.cursor >= self.significant.len()
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let (offset, found) = match self.nth(0) {
            Some(t) => (t.span.start, format!("`{}`", t.text)),
            None => (self.source.len(), "end of file".to_owned()),
        };
        let before = &self.source[..offset];
        let line = before.matches('\n').count() + 1;
        let line_begin = before.rfind('\n').map_or(0, |i| i + 1);
        ParseError {
            line,
            column: self.source[line_begin..offset].chars().count() + 1,
            expected: expected.into(),
            found,
        }
    }

    // ---- tree building ----

    fn push_raw(&mut self, upto: usize) {
        while self.emitted < upto {
            let token = self.tokens[self.emitted].take().expect("token emitted twice");
            self.emitted += 1;
            self.stack.last_mut().unwrap().1.push(CstNode::leaf(token));
        }
    }

    /// Attaches pending whitespace/comments to the currently open node.
    fn flush_trivia(&mut self) {
        let upto = self
            .significant
            .get(self.cursor)
            .copied()
            .unwrap_or(self.tokens.len());
        self.push_raw(upto);
    }

    fn bump(&mut self) {
        let idx = self.significant[self.cursor];
        self.push_raw(idx + 1);
        self.cursor += 1;
    }

    fn expect(&mut self, kind: CstKind, text: &str) -> PResult {
        if self.at(kind, text) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("`{text}`")))
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult {
        self.expect(CstKind::Punctuation, p)
    }

    fn expect_ident(&mut self) -> PResult<String> {
        match self.nth(0) {
            Some(t) if t.kind == CstKind::Identifier => {
                let name = t.text.clone();
                self.bump();
                Ok(name)
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn checkpoint(&mut self) -> usize {
        self.flush_trivia();
        self.stack.last().unwrap().1.len()
    }

    fn start(&mut self, kind: CstKind) {
        self.flush_trivia();
        self.stack.push((kind, Vec::new()));
    }

    /// Opens `kind` around everything added to the current node since `checkpoint`.
    fn start_at(&mut self, checkpoint: usize, kind: CstKind) {
        let wrapped = self.stack.last_mut().unwrap().1.split_off(checkpoint);
        self.stack.push((kind, wrapped));
    }

    fn finish_node(&mut self) {
        let (kind, children) = self.stack.pop().expect("unbalanced finish");
        let fallback = if children.is_empty() {
            self.position()
        } else {
            SourceSpan::default()
        };
        let node = internal(kind, children, fallback);
        self.stack.last_mut().unwrap().1.push(node);
    }

    /// Empty span at the next unconsumed token, for nodes without children.
    fn position(&self) -> SourceSpan {
        let offset = self
            .tokens
            .get(self.emitted)
            .and_then(Option::as_ref)
            .map_or(self.source.len(), |t| t.span.start);
        let line = self.source[..offset].matches('\n').count() + 1;
        SourceSpan::empty_at(offset, line)
    }

    fn finish(mut self) -> CstNode {
        self.push_raw(self.tokens.len());
        let (kind, children) = self.stack.pop().unwrap();
        debug_assert!(self.stack.is_empty());
        internal(kind, children, SourceSpan::empty_at(0, 1))
    }

    // ---- grammar: declarations ----

    fn file(&mut self) -> PResult {
        while self.at_keyword("package") || self.at_keyword("import") {
            // Header lines stay as raw tokens directly under FILE.
            while !self.at_punct(";") {
                if self.at_eof() {
                    return Err(self.error("`;`"));
                }
                self.bump();
            }
            self.bump();
        }
        while !self.at_eof() {
            self.class_decl()?;
        }
        Ok(())
    }

    fn class_decl(&mut self) -> PResult {
        self.start(CstKind::ClassDecl);
        self.modifiers()?;
        self.expect(CstKind::Keyword, "class")?;
        let name = self.expect_ident()?;
        if self.at_keyword("extends") {
            self.bump();
            self.type_list()?;
        }
        if self.at_keyword("implements") {
            self.bump();
            self.type_list()?;
        }
        self.expect_punct("{")?;
        while !self.at_punct("}") {
            if self.at_eof() {
                return Err(self.error("`}`"));
            }
            self.member(&name)?;
        }
        self.bump();
        self.finish_node();
        Ok(())
    }

    fn type_list(&mut self) -> PResult {
        self.type_ref()?;
        while self.at_punct(",") {
            self.bump();
            self.type_ref()?;
        }
        Ok(())
    }

    fn at_modifier(&self) -> bool {
        self.at_punct("@")
            || self
                .nth(0)
                .is_some_and(|t| t.kind == CstKind::Keyword && MODIFIERS.contains(&t.text.as_str()))
    }

    /// MODIFIER_LIST, only emitted when at least one modifier or annotation is present.
    fn modifiers(&mut self) -> PResult {
        if !self.at_modifier() {
            return Ok(());
        }
        self.start(CstKind::ModifierList);
        while self.at_modifier() {
            if self.at_punct("@") {
                self.start(CstKind::Annotation);
                self.bump();
                self.expect_ident()?;
                while self.at_punct(".") {
                    self.bump();
                    self.expect_ident()?;
                }
                self.finish_node();
            } else {
                self.start(CstKind::Modifier);
                self.bump();
                self.finish_node();
            }
        }
        self.finish_node();
        Ok(())
    }

    fn member(&mut self, class_name: &str) -> PResult {
        let cp = self.checkpoint();
        self.modifiers()?;
        let is_constructor = self.nth(0).is_some_and(|t| {
            t.kind == CstKind::Identifier && t.text == class_name
        }) && self.nth_is(1, CstKind::Punctuation, "(");
        if is_constructor {
            self.start_at(cp, CstKind::ConstructorDecl);
            self.bump();
            self.parameter_list()?;
            self.block()?;
            self.finish_node();
            return Ok(());
        }
        self.type_ref()?;
        self.expect_ident()?;
        if self.at_punct("(") {
            self.start_at(cp, CstKind::MethodDecl);
            self.parameter_list()?;
            if self.at_punct(";") {
                self.bump();
            } else {
                self.block()?;
            }
        } else {
            self.start_at(cp, CstKind::FieldDecl);
            if self.at_op(&["="]) {
                self.bump();
                self.expression()?;
            }
            self.expect_punct(";")?;
        }
        self.finish_node();
        Ok(())
    }

    fn type_ref(&mut self) -> PResult {
        let first = match self.nth(0) {
            Some(t) => t,
            None => return Err(self.error("type")),
        };
        let is_builtin = first.kind == CstKind::Keyword
            && (first.text == "void" || PRIMITIVES.contains(&first.text.as_str()));
        if !is_builtin && first.kind != CstKind::Identifier {
            return Err(self.error("type"));
        }
        self.start(CstKind::TypeRef);
        self.bump();
        if !is_builtin {
            while self.at_punct(".") && self.nth(1).is_some_and(|t| t.kind == CstKind::Identifier) {
                self.bump();
                self.bump();
            }
            if self.at_op(&["<"]) {
                let mut depth = 0usize;
                loop {
                    match self.nth(0) {
                        None => return Err(self.error("`>`")),
                        Some(t) if t.kind == CstKind::Operator && t.text == "<" => depth += 1,
                        Some(t) if t.kind == CstKind::Operator && t.text == ">" => depth -= 1,
                        Some(t)
                            if t.kind == CstKind::Punctuation
                                && matches!(t.text.as_str(), ";" | "{" | "}" | "(" | ")") =>
                        {
                            return Err(self.error("`>`"));
                        }
                        Some(_) => {}
                    }
                    self.bump();
                    if depth == 0 {
                        break;
                    }
                }
            }
        }
        while self.at_punct("[") && self.nth_is(1, CstKind::Punctuation, "]") {
            self.bump();
            self.bump();
        }
        self.finish_node();
        Ok(())
    }

    fn parameter_list(&mut self) -> PResult {
        self.start(CstKind::ParameterList);
        self.expect_punct("(")?;
        if !self.at_punct(")") {
            loop {
                self.start(CstKind::Parameter);
                self.modifiers()?;
                self.type_ref()?;
                self.expect_ident()?;
                self.finish_node();
                if !self.at_punct(",") {
                    break;
                }
                self.bump();
            }
        }
        self.expect_punct(")")?;
        self.finish_node();
        Ok(())
    }

    // ---- grammar: statements ----

    fn block(&mut self) -> PResult {
        self.start(CstKind::CodeBlock);
        self.expect_punct("{")?;
        while !self.at_punct("}") {
            if self.at_eof() {
                return Err(self.error("`}`"));
            }
            self.statement()?;
        }
        self.bump();
        self.finish_node();
        Ok(())
    }

    fn statement(&mut self) -> PResult {
        if self.at_punct("{") {
            return self.block();
        }
        if self.at_keyword("if") {
            self.start(CstKind::IfStmt);
            self.bump();
            self.condition()?;
            self.statement()?;
            if self.at_keyword("else") {
                self.bump();
                self.statement()?;
            }
        } else if self.at_keyword("while") {
            self.start(CstKind::WhileStmt);
            self.bump();
            self.condition()?;
            self.statement()?;
        } else if self.at_keyword("for") {
            self.start(CstKind::ForStmt);
            self.bump();
            self.expect_punct("(")?;
            if !self.at_punct(";") {
                if self.looks_like_declaration() {
                    self.local_var_decl(false)?;
                } else {
                    self.expression()?;
                }
            }
            self.expect_punct(";")?;
            if !self.at_punct(";") {
                self.expression()?;
            }
            self.expect_punct(";")?;
            if !self.at_punct(")") {
                self.expression()?;
            }
            self.expect_punct(")")?;
            self.statement()?;
        } else if self.at_keyword("return") {
            self.start(CstKind::ReturnStmt);
            self.bump();
            if !self.at_punct(";") {
                self.expression()?;
            }
            self.expect_punct(";")?;
        } else if self.looks_like_declaration() {
            return self.local_var_decl(true);
        } else {
            self.start(CstKind::ExprStmt);
            self.expression()?;
            self.expect_punct(";")?;
        }
        self.finish_node();
        Ok(())
    }

    fn condition(&mut self) -> PResult {
        self.expect_punct("(")?;
        self.expression()?;
        self.expect_punct(")")
    }

    fn local_var_decl(&mut self, with_semicolon: bool) -> PResult {
        self.start(CstKind::LocalVarDecl);
        self.modifiers()?;
        self.type_ref()?;
        self.expect_ident()?;
        if self.at_op(&["="]) {
            self.bump();
            self.expression()?;
        }
        if with_semicolon {
            self.expect_punct(";")?;
        }
        self.finish_node();
        Ok(())
    }

    /// Bounded scan for `Type name`: a dotted name with optional balanced
    /// generic arguments and `[]` pairs, followed by an identifier.
    fn looks_like_declaration(&self) -> bool {
        let Some(first) = self.nth(0) else {
            return false;
        };
        match first.kind {
            CstKind::Keyword if PRIMITIVES.contains(&first.text.as_str()) => return true,
            CstKind::Keyword if first.text == "final" => return true,
            CstKind::Punctuation if first.text == "@" => return true,
            CstKind::Identifier => {}
            _ => return false,
        }
        let mut i = 1;
        while self.nth_is(i, CstKind::Punctuation, ".")
            && self.nth(i + 1).is_some_and(|t| t.kind == CstKind::Identifier)
        {
            i += 2;
        }
        if self.nth_is(i, CstKind::Operator, "<") {
            let mut depth = 0usize;
            loop {
                match self.nth(i) {
                    None => return false,
                    Some(t) if t.kind == CstKind::Operator && t.text == "<" => depth += 1,
                    Some(t) if t.kind == CstKind::Operator && t.text == ">" => depth -= 1,
                    Some(t) if matches!(t.kind, CstKind::Identifier | CstKind::Keyword) => {}
                    Some(t)
                        if t.kind == CstKind::Punctuation
                            && matches!(t.text.as_str(), "," | "." | "?" | "[" | "]") => {}
                    Some(_) => return false,
                }
                i += 1;
                if depth == 0 {
                    break;
                }
            }
        }
        while self.nth_is(i, CstKind::Punctuation, "[")
            && self.nth_is(i + 1, CstKind::Punctuation, "]")
        {
            i += 2;
        }
        self.nth(i).is_some_and(|t| t.kind == CstKind::Identifier)
    }

    // ---- grammar: expressions ----

    fn expression(&mut self) -> PResult {
        let cp = self.checkpoint();
        self.binary(0)?;
        if self.at_op(ASSIGN_OPS) {
            self.start_at(cp, CstKind::AssignmentExpr);
            self.bump();
            self.expression()?;
            self.finish_node();
        }
        Ok(())
    }

    fn binary(&mut self, level: usize) -> PResult {
        let Some(ops) = BINARY_LEVELS.get(level) else {
            return self.unary();
        };
        let cp = self.checkpoint();
        self.binary(level + 1)?;
        while self.at_op(ops) {
            self.start_at(cp, CstKind::BinaryExpr);
            self.bump();
            self.binary(level + 1)?;
            self.finish_node();
        }
        Ok(())
    }

    fn unary(&mut self) -> PResult {
        if self.at_op(&["-", "+", "!", "~", "++", "--"]) {
            self.start(CstKind::UnaryExpr);
            self.bump();
            self.unary()?;
            self.finish_node();
            return Ok(());
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult {
        let cp = self.checkpoint();
        self.primary()?;
        loop {
            if self.at_punct(".") {
                self.start_at(cp, CstKind::ReferenceExpr);
                self.bump();
                self.expect_ident()?;
                self.finish_node();
                self.maybe_call(cp)?;
            } else if self.at_punct("[") {
                self.start_at(cp, CstKind::ArrayAccessExpr);
                self.bump();
                self.expression()?;
                self.expect_punct("]")?;
                self.finish_node();
            } else if self.at_op(&["++", "--"]) {
                self.start_at(cp, CstKind::UnaryExpr);
                self.bump();
                self.finish_node();
            } else {
                return Ok(());
            }
        }
    }

    fn maybe_call(&mut self, cp: usize) -> PResult {
        if self.at_punct("(") {
            self.start_at(cp, CstKind::MethodCall);
            self.argument_list()?;
            self.finish_node();
        }
        Ok(())
    }

    fn primary(&mut self) -> PResult {
        let cp = self.checkpoint();
        match self.nth(0) {
            Some(t) if t.kind == CstKind::Literal => {
                self.bump();
                Ok(())
            }
            Some(t)
                if t.kind == CstKind::Identifier
                    || (t.kind == CstKind::Keyword && t.text == "this") =>
            {
                self.start(CstKind::ReferenceExpr);
                self.bump();
                self.finish_node();
                self.maybe_call(cp)
            }
            Some(t) if t.kind == CstKind::Keyword && t.text == "new" => {
                self.start(CstKind::NewExpr);
                self.bump();
                self.type_ref()?;
                if self.at_punct("(") {
                    self.argument_list()?;
                } else if self.at_punct("[") {
                    while self.at_punct("[") {
                        self.bump();
                        self.expression()?;
                        self.expect_punct("]")?;
                    }
                } else {
                    return Err(self.error("`(` or `[`"));
                }
                self.finish_node();
                Ok(())
            }
            Some(t) if t.kind == CstKind::Punctuation && t.text == "(" => {
                self.start(CstKind::ParenExpr);
                self.bump();
                self.expression()?;
                self.expect_punct(")")?;
                self.finish_node();
                Ok(())
            }
            _ => Err(self.error("expression")),
        }
    }

    fn argument_list(&mut self) -> PResult {
        self.start(CstKind::ArgumentList);
        self.expect_punct("(")?;
        if !self.at_punct(")") {
            self.expression()?;
            while self.at_punct(",") {
                self.bump();
                self.expression()?;
            }
        }
        self.expect_punct(")")?;
        self.finish_node();
        Ok(())
    }
}

fn internal(kind: CstKind, children: Vec<CstNode>, fallback: SourceSpan) -> CstNode {
    let span = match (children.first(), children.last()) {
        (Some(first), Some(last)) => first.span.cover(&last.span),
        _ => fallback,
    };
    CstNode {
        kind,
        span,
        text: None,
        children,
    }
}
