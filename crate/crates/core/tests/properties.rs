use proptest::prelude::*;

use psiminer::ast::{build_ast, count_nodes, AstNode, IgnoreList};
use psiminer::cst::{parse_file, CstKind, CstNode};
use psiminer::filters::{apply_all, FilterSpec};
use psiminer::granularity::{split, Granularity};
use psiminer::label::{extract_method_name, LabelExtractor};
use psiminer::paths::{enumerate_paths, sample_contexts, MinerLimits, PathContext};
use psiminer::storage::{code2seq_line, jsonl_line};
use psiminer::types::annotate_types;

// ---- random programs ----

fn ident() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("a".to_owned()),
        Just("count".to_owned()),
        Just("itemList".to_owned()),
        Just("max_value".to_owned()),
        Just("f".to_owned()),
        "[a-z][a-zA-Z0-9_]{0,6}".prop_filter("not a keyword", |s| {
            !psiminer::cst::KEYWORDS.contains(&s.as_str())
                && !["true", "false", "null"].contains(&s.as_str())
        }),
    ]
}

fn gap() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => Just(" ".to_owned()),
        1 => Just("".to_owned()),
        1 => Just("\n\t".to_owned()),
        1 => Just(" /* c */ ".to_owned()),
        1 => Just(" // note\n".to_owned()),
        1 => Just("\r\n  ".to_owned()),
    ]
}

fn literal() -> impl Strategy<Value = String> {
    prop_oneof![
        (0u32..1000).prop_map(|n| n.to_string()),
        Just("12L".to_owned()),
        Just("0.5f".to_owned()),
        Just("1e3".to_owned()),
        Just("0x1F".to_owned()),
        Just("'q'".to_owned()),
        Just("\"s, t|u\"".to_owned()),
        Just("true".to_owned()),
        Just("null".to_owned()),
    ]
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![literal(), ident(), Just("this".to_owned())];
    leaf.prop_recursive(4, 24, 3, |inner| {
        let op = prop_oneof![
            Just("+"), Just("-"), Just("*"), Just("/"), Just("%"), Just("<"), Just(">="),
            Just("=="), Just("!="), Just("&&"), Just("||"), Just("&"), Just("|"), Just("^"),
        ];
        prop_oneof![
            (inner.clone(), gap(), op, gap(), inner.clone())
                .prop_map(|(a, g1, o, g2, b)| format!("{a}{g1}{o}{g2}{b}")),
            (prop_oneof![Just("-"), Just("!"), Just("~")], inner.clone())
                .prop_map(|(o, e)| format!("{o}({e})")),
            inner.clone().prop_map(|e| format!("({e})")),
            (ident(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(f, args)| format!("{f}({})", args.join(", "))),
            (ident(), ident()).prop_map(|(a, b)| format!("{a}.{b}")),
            (ident(), inner.clone()).prop_map(|(a, i)| format!("{a}[{i}]")),
            (ident(), prop::collection::vec(inner, 0..2))
                .prop_map(|(t, args)| format!("new {}({})", t.to_uppercase(), args.join(","))),
        ]
    })
}

fn statement() -> impl Strategy<Value = String> {
    let simple = prop_oneof![
        (ident(), expr()).prop_map(|(v, e)| format!("int {v} = {e};")),
        (ident(), expr()).prop_map(|(v, e)| format!("{v} += {e};")),
        (ident(), expr()).prop_map(|(v, e)| format!("{v} = {e};")),
        ident().prop_map(|v| format!("{v}++;")),
        expr().prop_map(|e| format!("return {e};")),
        (ident(), expr()).prop_map(|(f, e)| format!("{f}({e});")),
        Just("List<Map<String, int[]>> xs = null;".to_owned()),
    ];
    simple.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (expr(), inner.clone()).prop_map(|(c, s)| format!("if ({c}) {s}")),
            (expr(), inner.clone(), inner.clone())
                .prop_map(|(c, a, b)| format!("if ({c}) {{ {a} }} else {b}")),
            (expr(), inner.clone()).prop_map(|(c, s)| format!("while ({c}) {{ {s} }}")),
            (ident(), expr(), inner.clone())
                .prop_map(|(v, e, s)| format!("for (int {v} = 0; {v} < {e}; {v}++) {s}")),
            prop::collection::vec(inner, 0..3).prop_map(|ss| format!("{{ {} }}", ss.join(" "))),
        ]
    })
}

fn method() -> impl Strategy<Value = String> {
    (
        prop_oneof![Just(""), Just("public "), Just("private static "), Just("@Override ")],
        prop_oneof![Just("int"), Just("void"), Just("String[]"), Just("List<Integer>")],
        ident(),
        prop::collection::vec((prop_oneof![Just("int"), Just("long"), Just("Node")], ident()), 0..3),
        prop::collection::vec(statement(), 0..4),
        gap(),
    )
        .prop_map(|(mods, ret, name, params, body, g)| {
            let params: Vec<String> = params.iter().map(|(t, n)| format!("{t} {n}")).collect();
            format!(
                "{mods}{ret} {name}({}){g}{{\n{}\n}}",
                params.join(", "),
                body.join(&g)
            )
        })
}

fn program() -> impl Strategy<Value = String> {
    (
        prop_oneof![Just(""), Just("package p.q;\nimport java.util.List;\n")],
        prop::collection::vec(method(), 0..4),
        prop::collection::vec((ident(), literal()), 0..3),
        gap(),
    )
        .prop_map(|(header, methods, fields, g)| {
            let fields: Vec<String> = fields.iter().map(|(n, v)| format!("int {n} = {v};")).collect();
            format!(
                "{header}public class Gen extends Base {{{g}{}{g}Gen() {{ }}\n{}\n}}{g}",
                fields.join(&g),
                methods.join(&g)
            )
        })
}

fn parsed(src: &str) -> (CstNode, AstNode) {
    let cst = parse_file(src, "Gen.java").unwrap_or_else(|e| panic!("{e}\n{src}"));
    let ast = annotate_types(build_ast(&cst, &IgnoreList::default()));
    (cst, ast)
}

fn shape(t: &AstNode) -> String {
    let mut s = format!("{}({:?})[", t.node_type, t.token);
    for c in &t.children {
        s.push_str(&shape(c));
    }
    s.push(']');
    s
}

// ---- random plain trees ----

fn tree() -> impl Strategy<Value = AstNode> {
    let leaf = ("[a-z]{1,3}", prop_oneof![Just(None), Just(Some("int"))]).prop_map(|(tok, ty)| {
        let l = AstNode::leaf("IDENTIFIER", tok);
        match ty {
            Some(t) => l.with_type(t),
            None => l,
        }
    });
    leaf.prop_recursive(5, 40, 4, |inner| {
        (prop_oneof![Just("A"), Just("B"), Just("C")], prop::collection::vec(inner, 1..4))
            .prop_map(|(ty, kids)| AstNode::internal(ty, kids))
    })
}

fn is_subsequence(small: &[PathContext], big: &[PathContext]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_programs_round_trip(src in program()) {
        let cst = parse_file(&src, "Gen.java").unwrap_or_else(|e| panic!("{e}\n{src}"));
        prop_assert_eq!(cst.reconstruct(), src.clone());
        let again = parse_file(&src, "Gen.java").unwrap();
        prop_assert_eq!(cst, again);
    }

    #[test]
    fn ast_leaves_are_a_subsequence_of_cst_leaves(src in program()) {
        let (cst, ast) = parsed(&src);
        let cst_tokens: Vec<String> = cst.leaves().iter().filter_map(|l| l.text.clone()).collect();
        let mut it = cst_tokens.iter();
        for leaf in ast.leaves() {
            if leaf.is(CstKind::Identifier) || leaf.is(CstKind::Literal) {
                let tok = leaf.token.as_deref().unwrap();
                prop_assert!(it.any(|t| t == tok), "{tok} out of order");
            }
        }
        prop_assert!(count_nodes(&ast) >= ast.leaves().len());
    }

    #[test]
    fn typing_is_total_and_pure(src in program()) {
        let cst = parse_file(&src, "Gen.java").unwrap();
        let plain = build_ast(&cst, &IgnoreList::default());
        let typed = annotate_types(plain.clone());
        prop_assert_eq!(shape(&plain), shape(&typed));
        let mut untyped = 0;
        typed.visit(&mut |n| {
            if (n.is(CstKind::Identifier) || n.is(CstKind::Literal)) && n.resolved_type.is_none() {
                untyped += 1;
            }
        });
        prop_assert_eq!(untyped, 0);
    }

    #[test]
    fn labeling_preserves_shape_and_hides_the_name(src in program()) {
        let (_, ast) = parsed(&src);
        for unit in split(&ast, Granularity::Method) {
            let nodes = count_nodes(&unit);
            let labeled = extract_method_name(unit.clone()).unwrap();
            prop_assert_eq!(count_nodes(&labeled.tree), nodes);
            let none = LabelExtractor::None.extract(unit).unwrap();
            prop_assert_eq!(count_nodes(&none.tree), nodes);
            let mut callee_leaks = 0;
            labeled.tree.visit(&mut |n| {
                if n.is(CstKind::MethodCall) {
                    if let Some(callee) = n.children.first() {
                        let id = callee.children.last().unwrap_or(callee);
                        if id.token.as_deref() == Some(labeled.label.as_str()) {
                            callee_leaks += 1;
                        }
                    }
                }
            });
            prop_assert_eq!(callee_leaks, 0);
        }
    }

    #[test]
    fn filter_order_is_irrelevant(src in program(), max_nodes in 5usize..80, max_lines in 1usize..6) {
        let (_, ast) = parsed(&src);
        let specs = vec![
            FilterSpec::TreeSize { max_nodes, min_nodes: None },
            FilterSpec::CodeLines { max_lines },
            FilterSpec::OverrideMethod,
            FilterSpec::Constructor,
            FilterSpec::AbstractMethod,
        ];
        let mut reversed = specs.clone();
        reversed.reverse();
        for unit in split(&ast, Granularity::Method) {
            prop_assert_eq!(
                apply_all(&unit, &unit.span, &specs).unwrap(),
                apply_all(&unit, &unit.span, &reversed).unwrap()
            );
        }
    }

    #[test]
    fn tightening_limits_never_adds_contexts(
        t in tree(),
        nodes in 3usize..12,
        width in 0usize..4,
        dn in 0usize..3,
        dw in 0usize..2,
    ) {
        let loose = MinerLimits { max_path_nodes: nodes + dn, max_path_width: width + dw, ..MinerLimits::unlimited() };
        let tight = MinerLimits { max_path_nodes: nodes, max_path_width: width, ..MinerLimits::unlimited() };
        let a = enumerate_paths(&t, &loose);
        let b = enumerate_paths(&t, &tight);
        prop_assert!(is_subsequence(&b, &a));
        for ctx in &b {
            prop_assert!(ctx.path.len() <= nodes);
        }
        prop_assert_eq!(enumerate_paths(&t, &tight), b);
    }

    #[test]
    fn sampling_is_a_deterministic_ordered_subset(t in tree(), max in 1usize..20, seed in any::<u64>()) {
        let all = enumerate_paths(&t, &MinerLimits::unlimited());
        let limits = MinerLimits { max_contexts: max, rng_seed: seed, ..MinerLimits::unlimited() };
        let s1 = sample_contexts(all.clone(), &limits, "k#1");
        let s2 = sample_contexts(all.clone(), &limits, "k#1");
        prop_assert_eq!(&s1, &s2);
        prop_assert_eq!(s1.len(), all.len().min(max));
        prop_assert!(is_subsequence(&s1, &all));
    }

    #[test]
    fn serialized_lines_respect_the_delimiter_grammar(src in program()) {
        let (_, ast) = parsed(&src);
        for unit in split(&ast, Granularity::Method) {
            let labeled = extract_method_name(unit).unwrap();
            let contexts = enumerate_paths(&labeled.tree, &MinerLimits::default());
            for (typed, parts) in [(false, 3), (true, 5)] {
                let line = code2seq_line(&labeled.label, &contexts, typed);
                prop_assert!(line.ends_with('\n'));
                let fields: Vec<&str> = line.trim_end_matches('\n').split(' ').collect();
                prop_assert_eq!(fields.len(), 1 + contexts.len());
                for f in &fields[1..] {
                    prop_assert_eq!(f.split(',').count(), parts, "{}", f);
                }
            }
            let json: serde_json::Value = serde_json::from_str(&jsonl_line(&labeled)).unwrap();
            let nodes = json.as_array().unwrap();
            prop_assert_eq!(nodes.len(), count_nodes(&labeled.tree));
        }
    }
}
