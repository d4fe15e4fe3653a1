// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/aigsynth.h")).unwrap();
    for f in [
        "aig_last_error",
        "aig_parse_bench",
        "aig_free",
        "aig_stats",
        "aig_write_bench",
        "aig_write_graphml",
        "aig_string_free",
        "aig_library_new",
        "aig_library_free",
        "aig_apply_recipe",
        "aig_equiv",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing");
    }
    assert!(header.contains("typedef struct AigHandle AigHandle;"));
    assert!(header.contains("AIG_STATUS_OK = 0"));
}
