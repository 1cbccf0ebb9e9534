//! Built-in example sessions, also used as the golden corpus.

pub const CORPUS: &[(&str, &str)] = &[
    ("square_zero", include_str!("../corpus/square_zero.json")),
    ("dual_numbers", include_str!("../corpus/dual_numbers.json")),
    ("cubic", include_str!("../corpus/cubic.json")),
    ("ground", include_str!("../corpus/ground.json")),
];

pub fn get(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
