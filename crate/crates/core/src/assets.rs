//! Data files compiled into the library and the binary.

pub const EXAMPLE4: &str = include_str!("../assets/example4.json");
pub const SEPARATION_PAIR: &str = include_str!("../assets/separation_pair.json");
pub const CATALOGUE_SECTION34: &str = include_str!("../assets/catalogue_section34.txt");

/// Bundled proofs as `(name, json)`.
pub const PROOFS: [(&str, &str); 6] = [
    ("explicit_to_ek", include_str!("../assets/proofs/explicit_to_ek.json")),
    ("gi_example", include_str!("../assets/proofs/gi_example.json")),
    ("explicit_truth", include_str!("../assets/proofs/explicit_truth.json")),
    ("implicit_distribution", include_str!("../assets/proofs/implicit_distribution.json")),
    ("ek_distribution", include_str!("../assets/proofs/ek_distribution.json")),
    ("sim_generalization", include_str!("../assets/proofs/sim_generalization.json")),
];

/// The bundled two-agent model of the geometry example.
pub fn example4() -> crate::model::EpistemicModel {
    crate::model::model_from_json(EXAMPLE4, Default::default()).expect("bundled model loads")
}
