use std::sync::OnceLock;

use super::{bootstrap, run_tower, unipotent, Budget, TowerParams, TowerState};
use crate::words::{Factor, GeneratorTable};

/// `H = ⟨u⟩` with `u` the 6×6 unipotent Jordan block.
pub fn h6() -> GeneratorTable {
    let mut h = GeneratorTable::new();
    h.push("u", Factor::Base, unipotent(6)).unwrap();
    h
}

pub fn boot() -> &'static TowerState {
    static S: OnceLock<TowerState> = OnceLock::new();
    S.get_or_init(|| bootstrap(&h6(), &[], 4, TowerParams::default(), 7, "test").unwrap())
}

pub fn three() -> &'static TowerState {
    static S: OnceLock<TowerState> = OnceLock::new();
    S.get_or_init(|| {
        let mut s = boot().clone();
        run_tower(&mut s, Budget { stages: 3 }, |_| Ok(())).unwrap();
        s
    })
}
