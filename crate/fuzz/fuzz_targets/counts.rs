#![no_main]

use libfuzzer_sys::fuzz_target;
use odsymnmf::matcore::{cosine_similarity, io::MatrixMarket};

const MAX_DIM: usize = 1 << 10;

fuzz_target!(|data: &[u8]| {
    let Ok(mm) = MatrixMarket::parse(data) else {
        return;
    };
    if mm.rows > MAX_DIM || mm.cols > MAX_DIM {
        return;
    }
    if let Ok(x) = mm.into_counts() {
        if let Ok(a) = cosine_similarity(&x) {
            for (i, j, v) in a.upper_entries() {
                assert!(v.is_finite() && v >= 0.0, "({i}, {j}) = {v}");
            }
        }
    }
});
