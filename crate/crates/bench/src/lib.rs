//! Fixed parameter sets shared by the benchmarks.

use prodsurf::{GridSpec, KadiyalaParams, VesParams};

pub fn ves_fixture() -> VesParams {
    VesParams::new(1.5, 0.4, 0.8, 1.7).expect("valid fixture")
}

pub fn kadiyala_fixture() -> KadiyalaParams {
    KadiyalaParams::new(0.2, 0.2, 0.4, 1.3, 0.6, 1.7).expect("valid fixture")
}

pub fn small_grid() -> GridSpec {
    "0.1,10,8,0.1,10,8,log".parse().expect("valid grid")
}
