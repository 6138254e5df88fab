macro_rules! example_test {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                run_example();
            }
        }
    };
}

example_test!(parse_lossless);
example_test!(build_ast);
example_test!(resolve_types);
example_test!(filter_and_label);
example_test!(mine_paths);
example_test!(write_datasets);
example_test!(run_pipeline);
