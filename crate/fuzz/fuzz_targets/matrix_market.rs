#![no_main]

use libfuzzer_sys::fuzz_target;
use odsymnmf::matcore::io::{self, MatrixMarket};

const MAX_DIM: usize = 1 << 12;

fuzz_target!(|data: &[u8]| {
    let Ok(mm) = MatrixMarket::parse(data) else {
        return;
    };
    if mm.rows > MAX_DIM || mm.cols > MAX_DIM {
        return;
    }
    if let Ok(a) = mm.into_symmetric() {
        let mut buf = Vec::new();
        io::write_matrix(&a, &mut buf).unwrap();
        assert_eq!(io::read_matrix(buf.as_slice()).unwrap(), a);
    }
});
