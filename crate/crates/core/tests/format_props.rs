// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use aigsynth::aig::Aig;
use aigsynth::bench::{parse_bench, write_bench};
use aigsynth::equiv::exhaustive_equiv;
use aigsynth::gen::random_aig;
use aigsynth::graphml::write_graphml;

fn graph() -> impl Strategy<Value = Aig> {
    (1usize..=10, 0usize..=80, 1usize..=5, any::<u64>()).prop_map(|(i, n, o, s)| random_aig(i, n, o, s))
}

fn count_data(xml: &str, key: &str, value: &str) -> usize {
    xml.matches(&format!("<data key=\"{key}\">{value}</data>")).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bench_round_trip_is_exact(g in graph()) {
        let text = write_bench(&g);
        let back = parse_bench(&text).unwrap();
        prop_assert!(exhaustive_equiv(&g, &back, 16).unwrap().equivalent);
        prop_assert_eq!(back.stats(), g.stats());
        prop_assert_eq!(write_bench(&back), text);
    }

    #[test]
    fn graphml_matches_stats(g in graph()) {
        let xml = write_graphml(&g);
        let s = g.stats();
        prop_assert_eq!(count_data(&xml, "node_type", "0"), s.pi_count);
        prop_assert_eq!(count_data(&xml, "node_type", "1"), s.po_count);
        prop_assert_eq!(count_data(&xml, "node_type", "2"), s.and_count);
        prop_assert!(count_data(&xml, "node_type", "3") <= 1);
        prop_assert_eq!(xml.matches("<edge ").count(), s.edge_count);
        prop_assert_eq!(count_data(&xml, "edge_type", "1"), s.inverted_edge_count);
        prop_assert_eq!(write_graphml(&g), xml);
    }
}

#[test]
fn parser_reports_line_numbers() {
    let err = parse_bench("INPUT(a)\nOUTPUT(y)\n\ny = FOO(a)\n").unwrap_err();
    assert!(err.to_string().contains('4'), "{err}");
    assert!(parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, q)\n").is_err());
    assert!(parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, z)\nz = AND(a, y)\n").is_err());
}
