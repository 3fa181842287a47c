use std::path::PathBuf;

use apg_core::fixtures;
use apg_core::format::{read_graph, write_graph};
use apg_core::migrate::{read_mapping, typecheck_mapping, write_mapping};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read(name: &str) -> String {
    let path = dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn graph_files_match_the_builders() {
    for (name, g) in fixtures::all() {
        let text = read(&format!("{name}.apg"));
        assert_eq!(read_graph(&text).unwrap(), g, "{name}");
        // files are kept in canonical form
        assert_eq!(write_graph(&g), text, "{name}");
    }
}

#[test]
fn mapping_file_matches_the_builder() {
    let text = read("mapping.apgm");
    let m = read_mapping(&text).unwrap();
    assert_eq!(m, fixtures::mapping());
    assert_eq!(write_mapping(&m), text);
    assert!(typecheck_mapping(&m).is_empty());
}

#[test]
fn no_stray_files() {
    let mut expected: Vec<String> = fixtures::all()
        .iter()
        .map(|(n, _)| format!("{n}.apg"))
        .collect();
    expected.push("mapping.apgm".into());
    expected.sort();
    let mut found: Vec<String> = std::fs::read_dir(dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    found.sort();
    assert_eq!(found, expected);
}
