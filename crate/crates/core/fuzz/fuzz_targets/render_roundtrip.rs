#![no_main]
use libfuzzer_sys::fuzz_target;
use quivhom::quiver::parse_spec;

// Every accepted spec renders to text that parses back to the same spec.
fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = parse_spec(data) {
        let text = spec.render();
        let again = parse_spec(text.as_bytes()).expect("rendered spec parses");
        assert_eq!(again, spec);
    }
});
