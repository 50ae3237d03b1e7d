#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Err(e) = quivhom::quiver::parse_spec(data) {
        let _ = e.to_string();
    }
});
