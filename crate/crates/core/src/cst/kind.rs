use std::fmt;
use std::str::FromStr;

macro_rules! cst_kinds {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Node kinds of the concrete syntax tree.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CstKind {
            $($variant),*
        }

        impl CstKind {
            pub const ALL: &'static [CstKind] = &[$(CstKind::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(CstKind::$variant => $name),*
                }
            }
        }

        impl FromStr for CstKind {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(CstKind::$variant),)*
                    other => Err(format!("unknown node kind `{other}`")),
                }
            }
        }
    };
}

cst_kinds! {
    File => "FILE",
    ClassDecl => "CLASS_DECL",
    ModifierList => "MODIFIER_LIST",
    Modifier => "MODIFIER",
    Annotation => "ANNOTATION",
    FieldDecl => "FIELD_DECL",
    MethodDecl => "METHOD_DECL",
    ConstructorDecl => "CONSTRUCTOR_DECL",
    ParameterList => "PARAMETER_LIST",
    Parameter => "PARAMETER",
    TypeRef => "TYPE_REF",
    CodeBlock => "CODE_BLOCK",
    LocalVarDecl => "LOCAL_VAR_DECL",
    IfStmt => "IF_STMT",
    WhileStmt => "WHILE_STMT",
    ForStmt => "FOR_STMT",
    ReturnStmt => "RETURN_STMT",
    ExprStmt => "EXPR_STMT",
    AssignmentExpr => "ASSIGNMENT_EXPR",
    BinaryExpr => "BINARY_EXPR",
    UnaryExpr => "UNARY_EXPR",
    MethodCall => "METHOD_CALL",
    ArgumentList => "ARGUMENT_LIST",
    ReferenceExpr => "REFERENCE_EXPR",
    NewExpr => "NEW_EXPR",
    ArrayAccessExpr => "ARRAY_ACCESS_EXPR",
    ParenExpr => "PAREN_EXPR",
    Literal => "LITERAL",
    Identifier => "IDENTIFIER",
    Keyword => "KEYWORD",
    Operator => "OPERATOR",
    Punctuation => "PUNCTUATION",
    WhiteSpace => "WHITE_SPACE",
    LineComment => "LINE_COMMENT",
    BlockComment => "BLOCK_COMMENT",
}

impl CstKind {
    /// Kinds produced by the lexer; nodes of these kinds are always leaves.
    pub fn is_token(self) -> bool {
        matches!(
            self,
            CstKind::Literal
                | CstKind::Identifier
                | CstKind::Keyword
                | CstKind::Operator
                | CstKind::Punctuation
                | CstKind::WhiteSpace
                | CstKind::LineComment
                | CstKind::BlockComment
        )
    }

    pub fn is_trivia(self) -> bool {
        matches!(
            self,
            CstKind::WhiteSpace | CstKind::LineComment | CstKind::BlockComment
        )
    }

    pub fn is_comment(self) -> bool {
        matches!(self, CstKind::LineComment | CstKind::BlockComment)
    }
}

impl fmt::Display for CstKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for &kind in CstKind::ALL {
            assert_eq!(kind.name().parse::<CstKind>(), Ok(kind));
        }
        assert_eq!(CstKind::ALL.len(), 35);
    }

    #[test]
    fn unknown_name_is_rejected() {
        assert!("PSI_WHITE_SPACE".parse::<CstKind>().is_err());
    }
}
