#![allow(dead_code)]

use std::sync::OnceLock;

use alequot::{Family, FlatModule, GroupLabel, Tolerances};

pub const SMALL: [(Family, u32); 5] = [
    (Family::A, 1),
    (Family::A, 2),
    (Family::A, 3),
    (Family::D, 2),
    (Family::D, 3),
];

/// Modules for [`SMALL`], built once per test binary.
pub fn small_module(i: usize) -> &'static FlatModule {
    static CELLS: [OnceLock<FlatModule>; 5] = [const { OnceLock::new() }; 5];
    CELLS[i].get_or_init(|| {
        let (f, k) = SMALL[i];
        FlatModule::build(GroupLabel::new(f, k).unwrap(), &Tolerances::default()).unwrap()
    })
}

pub fn e6_module() -> &'static FlatModule {
    static CELL: OnceLock<FlatModule> = OnceLock::new();
    CELL.get_or_init(|| FlatModule::build(GroupLabel::new(Family::E6, 0).unwrap(), &Tolerances::default()).unwrap())
}
