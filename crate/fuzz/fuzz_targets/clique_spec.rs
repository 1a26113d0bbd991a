#![no_main]

use libfuzzer_sys::fuzz_target;
use odsymnmf::bench::{make_cliques, CliqueSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = text.parse::<CliqueSpec>() {
        if spec.n() <= 512 {
            let (a, truth) = make_cliques(&spec);
            assert_eq!(a.n(), spec.n());
            assert_eq!(truth.ncols(), spec.rank());
        }
    }
});
