use std::io::Write;

use fermikernel::zeta::{find_zeros, load_zeros_file, write_zero_table, ZeroScan};
use fermikernel::Error;

fn fixture(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn published_prefix_is_reproduced() {
    let f = fixture(
        "# first zeros\n14.134725141734693790\n21.022039638771554993\n25.010857580145688763\n",
    );
    let table = load_zeros_file(f.path()).unwrap();
    let computed = find_zeros(&ZeroScan::new(10.0, 26.0)).unwrap();
    assert_eq!(computed.zeros.len(), 3);
    for (a, b) in table.heights().iter().zip(computed.zeros.heights()) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn empty_table_is_valid() {
    let f = fixture("# nothing yet\n\n");
    assert!(load_zeros_file(f.path()).unwrap().is_empty());
}

#[test]
fn non_monotonic_table_is_rejected() {
    let f = fixture("14.1347\n21.0220\n20.0\n");
    match load_zeros_file(f.path()) {
        Err(Error::Ordering { index, .. }) => assert_eq!(index, 2),
        other => panic!("expected an ordering error, got {other:?}"),
    }
}

#[test]
fn malformed_line_reports_its_number() {
    let f = fixture("# header\n14.1347\nabc\n");
    match load_zeros_file(f.path()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn written_table_loads_back() {
    let computed = find_zeros(&ZeroScan::new(10.0, 60.0)).unwrap();
    let f = tempfile::NamedTempFile::new().unwrap();
    write_zero_table(&computed.zeros, &["test".to_string()], f.reopen().unwrap()).unwrap();
    let back = load_zeros_file(f.path()).unwrap();
    assert_eq!(back.heights(), computed.zeros.heights());
}
