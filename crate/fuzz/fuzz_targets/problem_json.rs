#![no_main]

use libfuzzer_sys::fuzz_target;
use paritylane::io::parse_problem;

fuzz_target!(|data: &[u8]| {
    let _ = parse_problem(data);
});
