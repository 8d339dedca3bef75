#![no_main]

use libfuzzer_sys::fuzz_target;
use paritylane::io::parse_params;

fuzz_target!(|data: &[u8]| {
    let _ = parse_params(data);
});
