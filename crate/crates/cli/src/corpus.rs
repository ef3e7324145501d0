//! System files bundled into the binary for `selftest`.

macro_rules! bundle {
    ($($f:literal),* $(,)?) => {
        &[$(($f, include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../systems/", $f)))),*]
    };
}

/// `(file name, contents)` of the corpus in `systems/`.
pub fn bundled() -> &'static [(&'static str, &'static str)] {
    bundle!(
        "double.system",
        "henon.system",
        "identity.system",
        "lyness.json",
        "mobius.system",
        "monomial.system",
        "negation.system",
        "scaling.system",
        "shear.system",
        "shift.system",
        "swap.system",
        "translation2.system",
    )
}
