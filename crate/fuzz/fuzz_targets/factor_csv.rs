#![no_main]

use libfuzzer_sys::fuzz_target;
use odsymnmf::matcore::io;

fuzz_target!(|data: &[u8]| {
    if let Ok(h) = io::read_factor(data) {
        let mut buf = Vec::new();
        io::write_factor(&h, &mut buf).unwrap();
        assert_eq!(io::read_factor(buf.as_slice()).unwrap(), h);
    }
});
