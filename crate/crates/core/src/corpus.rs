//! Bundled example presentations used by `selftest` and the regression tests.

use crate::error::{Error, Result};
use crate::format::{parse, AlgebraSpec};

pub const FIXTURES: &[(&str, &str)] = &[
    ("exam1", include_str!("../fixtures/exam1.quiv")),
    ("exam1_opp", include_str!("../fixtures/exam1_opp.quiv")),
    ("exam2", include_str!("../fixtures/exam2.quiv")),
    ("exam3", include_str!("../fixtures/exam3.quiv")),
    ("magicexam", include_str!("../fixtures/magicexam.quiv")),
    ("exam4", include_str!("../fixtures/exam4.quiv")),
    ("exam4_opp", include_str!("../fixtures/exam4_opp.quiv")),
];

pub fn text(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn spec(name: &str) -> Result<AlgebraSpec> {
    parse(text(name).ok_or_else(|| Error::InvalidArgument(format!("no fixture named {name}")))?)
}
