//! Algebra files shipped with the tool, addressable by name.

pub const FIXTURES: &[(&str, &str)] = &[
    ("example1", include_str!("../fixtures/example1.alg")),
    ("example2", include_str!("../fixtures/example2.alg")),
    ("example3", include_str!("../fixtures/example3.alg")),
    ("truncated3", include_str!("../fixtures/truncated3.alg")),
    ("a2", include_str!("../fixtures/a2.alg")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
