use std::path::PathBuf;

use shg_core::{render_ascii, render_latex, DiagramPair, ProcessVector};

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("SHG_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} differs from golden file");
}

fn worked_pair() -> DiagramPair {
    DiagramPair::new(ProcessVector::new(vec![2, 1, 4, 1]).unwrap(), ProcessVector::new(vec![4]).unwrap()).unwrap()
}

#[test]
fn worked_example_ascii() {
    golden("worked_example.txt", &render_ascii(&worked_pair()));
}

#[test]
fn worked_example_latex() {
    golden("worked_example.tex", &render_latex(&worked_pair()));
}

#[test]
fn second_order_ascii() {
    let pair = DiagramPair::new(ProcessVector::identity(), ProcessVector::new(vec![1, 1]).unwrap()).unwrap();
    golden("second_order_a.txt", &render_ascii(&pair));
}
