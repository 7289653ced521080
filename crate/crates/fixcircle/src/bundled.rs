//! Scenarios shipped with the tool, one per worked example and figure.

/// `(name, JSON)` pairs in reproduction order.
pub const BUNDLED: &[(&str, &str)] = &[
    ("exm1_thm6", include_str!("../scenarios/exm1_thm6.json")),
    ("exm2_converse", include_str!("../scenarios/exm2_converse.json")),
    ("exm6_t1", include_str!("../scenarios/exm6_t1.json")),
    ("exm7_t3", include_str!("../scenarios/exm7_t3.json")),
    ("exm8_t4", include_str!("../scenarios/exm8_t4.json")),
    ("exm9_t5", include_str!("../scenarios/exm9_t5.json")),
    ("exm10_t7", include_str!("../scenarios/exm10_t7.json")),
    ("exm11_t8", include_str!("../scenarios/exm11_t8.json")),
    ("exm12_t9", include_str!("../scenarios/exm12_t9.json")),
    ("exm13_t2", include_str!("../scenarios/exm13_t2.json")),
    ("exm14_t6", include_str!("../scenarios/exm14_t6.json")),
    ("exm15_t10", include_str!("../scenarios/exm15_t10.json")),
    ("intro_inversion", include_str!("../scenarios/intro_inversion.json")),
    ("fig5_symskew2d", include_str!("../scenarios/fig5_symskew2d.json")),
    ("fig6_exp2d", include_str!("../scenarios/fig6_exp2d.json")),
];

pub fn get(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}
