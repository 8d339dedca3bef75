#![no_main]

use libfuzzer_sys::fuzz_target;
use paritylane::qasm::parse_qasm_bytes;

fuzz_target!(|data: &[u8]| {
    let _ = parse_qasm_bytes(data);
});
