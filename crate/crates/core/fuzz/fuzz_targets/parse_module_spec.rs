#![no_main]
use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use quivhom::quiver::{parse_module_spec, parse_spec, QuiverSpec};

fn base() -> &'static QuiverSpec {
    static SPEC: OnceLock<QuiverSpec> = OnceLock::new();
    SPEC.get_or_init(|| {
        parse_spec(
            b"truncate 3\nvertices 1 2 3\narrows\n  a: 1 -> 2\n  b: 2 -> 3\n  x: 3 -> 3\nrelations\n  x*x\n  x*b*a\n",
        )
        .unwrap()
    })
}

fuzz_target!(|data: &[u8]| {
    let _ = parse_module_spec(data, base());
});
