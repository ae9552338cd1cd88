use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::wrap_pymodule;

fn with_module(code: &std::ffi::CStr) {
    Python::initialize();
    Python::attach(|py| {
        let module = wrap_pymodule!(versal::versal)(py);
        let globals = PyDict::new(py);
        globals.set_item("versal", module).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.print(py);
            panic!("python check failed");
        }
    });
}

#[test]
fn points_round_trip() {
    with_module(
        c"
import json
pt = versal.finite_field_point(2, 1, 3)
assert versal.verify_point(pt) == (True, [])
v = json.loads(pt)
v['h'][1] = [1, 1]
ok, failed = versal.verify_point(json.dumps(v))
assert not ok and failed
ok, _ = versal.verify_point(versal.cyclotomic_point(5))
assert ok
",
    );
}

#[test]
fn counts_and_fingerprints() {
    with_module(
        c"
import json
assert len(json.loads(versal.root_data(2))) == 13
assert versal.hom_class_count('Z2', 'S3') == 2
assert versal.h1_trivial_action('Z2', 'S3') == (4, 2)
assert versal.twist_fingerprint('sl3', 2, 1, 2, 'flip') == (216, 3, 4, True)
assert versal.twist_fingerprint('gm', 3, 1, 2, 'inverse') == (4, 4, 4, True)
",
    );
}

#[test]
fn errors_map_to_exception_classes() {
    with_module(
        c"
for call, exc in [
    (lambda: versal.root_data(9), versal.UnsupportedError),
    (lambda: versal.twist_fingerprint('sl3', 3, 1, 2), versal.SizeLimitError),
    (lambda: versal.twist_fingerprint('sl2', 2, 1, 2, 'sideways'), versal.VersalError),
    (lambda: versal.verify_point('{'), versal.VersalError),
]:
    try:
        call()
    except exc:
        pass
    else:
        raise AssertionError(call)
assert issubclass(versal.SizeLimitError, versal.VersalError)
",
    );
}

#[test]
fn catalog_verifies() {
    with_module(
        c"
text = versal.catalog(1, 3)
assert text == versal.catalog(1, 3)
fps = versal.verify_catalog(text)
assert sorted(fps) == sorted([(2, 2, 2, True), (4, 4, 4, True), (24, 2, 3, True), (24, 1, 2, True)])
",
    );
}
