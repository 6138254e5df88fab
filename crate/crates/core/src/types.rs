//! Identifier type enrichment through a scoped symbol table.
//!
//! Resolution is confined to one file. Anything that cannot be resolved
//! gets [`NO_TYPE`]; that is data, not an error.

use std::collections::HashMap;
use std::fmt;

use crate::ast::AstNode;
use crate::cst::CstKind;

pub const NO_TYPE: &str = "NO_TYPE";

/// A type string, or the [`NO_TYPE`] sentinel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResolvedType(String);

impl ResolvedType {
    pub fn new(text: impl Into<String>) -> Self {
        let text = text.into();
        if text.is_empty() {
            Self::unknown()
        } else {
            Self(text)
        }
    }

    pub fn unknown() -> Self {
        Self(NO_TYPE.to_owned())
    }

    pub fn is_unknown(&self) -> bool {
        self.0 == NO_TYPE
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for ResolvedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScopeKind {
    Class,
    Method,
    Block,
}

#[derive(Debug, Clone)]
pub struct Scope {
    pub kind: ScopeKind,
    bindings: HashMap<String, String>,
}

impl Scope {
    pub fn new(kind: ScopeKind) -> Self {
        Self {
            kind,
            bindings: HashMap::new(),
        }
    }

    pub fn bind(&mut self, name: impl Into<String>, ty: impl Into<String>) {
        self.bindings.insert(name.into(), ty.into());
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.bindings.get(name).map(String::as_str)
    }
}

/// Nested scopes, innermost last. Each scope's parent is the one before it.
#[derive(Debug, Clone, Default)]
pub struct ScopeChain {
    scopes: Vec<Scope>,
}

impl ScopeChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, kind: ScopeKind) {
        self.scopes.push(Scope::new(kind));
    }

    pub fn pop(&mut self) -> Option<Scope> {
        self.scopes.pop()
    }

    /// Binds in the innermost scope.
    pub fn bind(&mut self, name: impl Into<String>, ty: impl Into<String>) {
        if let Some(scope) = self.scopes.last_mut() {
            scope.bind(name, ty);
        }
    }

    pub fn innermost(&self) -> Option<&Scope> {
        self.scopes.last()
    }

    fn class_scope(&self) -> Option<&Scope> {
        self.scopes.iter().rev().find(|s| s.kind == ScopeKind::Class)
    }
}

/// Nearest enclosing binding of `name`, else [`NO_TYPE`].
pub fn resolve_identifier(name: &str, scopes: &ScopeChain) -> ResolvedType {
    scopes
        .scopes
        .iter()
        .rev()
        .find_map(|s| s.get(name))
        .map_or_else(ResolvedType::unknown, ResolvedType::new)
}

/// Literal token → type name.
pub fn literal_type(token: &str) -> ResolvedType {
    let t = match token {
        "true" | "false" => "boolean",
        "null" => NO_TYPE,
        _ if token.starts_with('"') => "String",
        _ if token.starts_with('\'') => "char",
        _ => {
            let lower = token.to_ascii_lowercase();
            let hex = lower.starts_with("0x");
            if lower.ends_with('l') {
                "long"
            } else if !hex && lower.ends_with('f') {
                "float"
            } else if !hex && (lower.contains('.') || lower.contains('e') || lower.ends_with('d')) {
                "double"
            } else {
                "int"
            }
        }
    };
    ResolvedType::new(t)
}

/// Fills `resolved_type` on identifier, literal and type leaves.
///
/// Declaration names get the declared entity's type (the class name for a
/// class or constructor, the return type for a method). References resolve
/// through locals, parameters and fields, innermost first; a local is only
/// visible from its declaration onwards. Calls resolve to the return type of
/// a same-named method of the enclosing class. Tree shape is untouched.
pub fn annotate_types(mut tree: AstNode) -> AstNode {
    let mut resolver = Resolver {
        scopes: ScopeChain::new(),
        class: None,
    };
    resolver.node(&mut tree);
    tree
}

struct ClassInfo {
    name: String,
    methods: HashMap<String, String>,
}

struct Resolver {
    scopes: ScopeChain,
    class: Option<ClassInfo>,
}

fn set(node: &mut AstNode, ty: impl Into<String>) {
    node.resolved_type = Some(ResolvedType::new(ty).into_string());
}

fn type_of(node: &AstNode) -> String {
    node.child(CstKind::TypeRef)
        .and_then(|t| t.token.clone())
        .unwrap_or_else(|| NO_TYPE.to_owned())
}

fn is_this(node: &AstNode) -> bool {
    node.is(CstKind::ReferenceExpr)
        && match node.children.as_slice() {
            [] => node.token.as_deref() == Some("this"),
            [only] => only.token.as_deref() == Some("this"),
            _ => false,
        }
}

impl Resolver {
    fn class_name(&self) -> String {
        self.class
            .as_ref()
            .map_or_else(|| NO_TYPE.to_owned(), |c| c.name.clone())
    }

    fn method_return(&self, name: &str) -> String {
        self.class
            .as_ref()
            .and_then(|c| c.methods.get(name).cloned())
            .unwrap_or_else(|| NO_TYPE.to_owned())
    }

    fn field_type(&self, name: &str) -> String {
        self.scopes
            .class_scope()
            .and_then(|s| s.get(name))
            .map_or_else(|| NO_TYPE.to_owned(), str::to_owned)
    }

    fn children(&mut self, node: &mut AstNode) {
        for c in &mut node.children {
            self.node(c);
        }
    }

    fn children_except(&mut self, node: &mut AstNode, skip: Option<usize>) {
        for (i, c) in node.children.iter_mut().enumerate() {
            if Some(i) != skip {
                self.node(c);
            }
        }
    }

    fn node(&mut self, node: &mut AstNode) {
        match node.base_type() {
            "CLASS_DECL" => self.class_decl(node),
            "FIELD_DECL" | "LOCAL_VAR_DECL" | "PARAMETER" => self.variable(node),
            "METHOD_DECL" | "CONSTRUCTOR_DECL" => self.method(node),
            "CODE_BLOCK" | "FOR_STMT" => {
                self.scopes.push(ScopeKind::Block);
                self.children(node);
                self.scopes.pop();
            }
            "ANNOTATION" => node.visit_mut(&mut |n| {
                if n.is_leaf() && n.is(CstKind::Identifier) {
                    set(n, NO_TYPE);
                }
            }),
            "REFERENCE_EXPR" => self.reference(node, false),
            "METHOD_CALL" => {
                if let Some((callee, rest)) = node.children.split_first_mut() {
                    if callee.is(CstKind::ReferenceExpr) {
                        self.reference(callee, true);
                    } else {
                        self.node(callee);
                    }
                    for c in rest {
                        self.node(c);
                    }
                }
            }
            "LITERAL" if node.is_leaf() => {
                let ty = literal_type(node.token.as_deref().unwrap_or_default());
                set(node, ty.into_string());
            }
            "TYPE_REF" if node.is_leaf() => {
                let text = node.token.clone().unwrap_or_default();
                set(node, text);
            }
            "IDENTIFIER" if node.is_leaf() => {
                let ty = resolve_identifier(node.token.as_deref().unwrap_or_default(), &self.scopes);
                set(node, ty.into_string());
            }
            _ => self.children(node),
        }
    }

    fn class_decl(&mut self, node: &mut AstNode) {
        let name_idx = node
            .children
            .iter()
            .position(|c| c.is(CstKind::Identifier) && c.is_leaf());
        let name = name_idx
            .and_then(|i| node.children[i].token.clone())
            .unwrap_or_else(|| NO_TYPE.to_owned());

        let mut methods = HashMap::new();
        self.scopes.push(ScopeKind::Class);
        // Fields and methods are visible throughout the class body.
        for member in &node.children {
            let Some(i) = member.declared_name_index() else { continue };
            let member_name = member.children[i].token.clone().unwrap_or_default();
            if member.is(CstKind::FieldDecl) {
                self.scopes.bind(member_name, type_of(member));
            } else if member.is(CstKind::MethodDecl) {
                methods.entry(member_name).or_insert_with(|| type_of(member));
            }
        }
        let outer = self.class.replace(ClassInfo {
            name: name.clone(),
            methods,
        });
        if let Some(i) = name_idx {
            set(&mut node.children[i], name);
        }
        self.children_except(node, name_idx);
        self.class = outer;
        self.scopes.pop();
    }

    /// Fields, locals and parameters: bind the name, then walk the rest
    /// (type, modifiers, initializer) in order.
    fn variable(&mut self, node: &mut AstNode) {
        let ty = type_of(node);
        let name_idx = node.declared_name_index();
        if let Some(i) = name_idx {
            let name = node.children[i].token.clone().unwrap_or_default();
            set(&mut node.children[i], ty.clone());
            if !node.is(CstKind::FieldDecl) {
                self.scopes.bind(name, ty);
            }
        }
        self.children_except(node, name_idx);
    }

    fn method(&mut self, node: &mut AstNode) {
        let ctor = node.is(CstKind::ConstructorDecl);
        let name_idx = if ctor {
            node.children
                .iter()
                .position(|c| c.is(CstKind::Identifier) && c.is_leaf())
        } else {
            node.declared_name_index()
        };
        if let Some(i) = name_idx {
            let ty = if ctor { self.class_name() } else { type_of(node) };
            set(&mut node.children[i], ty);
        }
        self.scopes.push(ScopeKind::Method);
        self.children_except(node, name_idx);
        self.scopes.pop();
    }

    /// `x`, `this`, `a.b`, and callee references when `callee` is set.
    fn reference(&mut self, node: &mut AstNode, callee: bool) {
        if is_this(node) {
            let class = self.class_name();
            node.visit_mut(&mut |n| {
                if n.is_leaf() {
                    set(n, class.clone());
                }
            });
            return;
        }
        let Some(last) = node.children.len().checked_sub(1) else {
            return;
        };
        let qualified = last > 0;
        let through_this = qualified && node.children[..last].iter().any(is_this);
        for c in &mut node.children[..last] {
            self.node(c);
        }
        let target = &mut node.children[last];
        if !(target.is_leaf() && target.is(CstKind::Identifier)) {
            self.node(target);
            return;
        }
        let name = target.token.clone().unwrap_or_default();
        let ty = match (callee, qualified) {
            (true, false) => self.method_return(&name),
            (true, true) if through_this => self.method_return(&name),
            (false, false) => resolve_identifier(&name, &self.scopes).into_string(),
            (false, true) if through_this => self.field_type(&name),
            _ => NO_TYPE.to_owned(),
        };
        set(target, ty);
    }
}
