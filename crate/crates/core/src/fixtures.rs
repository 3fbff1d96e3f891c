//! Bundled networks of the four Wnt signaling models and the augmented
//! Schmitz variants.

use crate::error::{Error, Result};
use crate::network::{parse_network, Network};

pub const LEE: &str = include_str!("../fixtures/lee.crn");
pub const FAL: &str = include_str!("../fixtures/fal.crn");
pub const MACLEAN: &str = include_str!("../fixtures/maclean.crn");
pub const SCHMITZ: &str = include_str!("../fixtures/schmitz.crn");
pub const SCHMITZ_AUGMENTED: &str = include_str!("../fixtures/schmitz-augmented.crn");
pub const SCHMITZ_REDUCED: &str = include_str!("../fixtures/schmitz-reduced.crn");

pub const NAMES: [&str; 6] = [
    "lee",
    "fal",
    "maclean",
    "schmitz",
    "schmitz-augmented",
    "schmitz-reduced",
];

/// Source text of a bundled fixture.
pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "lee" => LEE,
        "fal" => FAL,
        "maclean" => MACLEAN,
        "schmitz" => SCHMITZ,
        "schmitz-augmented" => SCHMITZ_AUGMENTED,
        "schmitz-reduced" => SCHMITZ_REDUCED,
        _ => return None,
    })
}

/// Parses a bundled fixture by name.
pub fn load(name: &str) -> Result<Network> {
    let text = source(name).ok_or_else(|| Error::Invalid(format!("unknown fixture {name:?}")))?;
    parse_network(text)
}

pub fn lee() -> Network {
    load("lee").expect("bundled fixture parses")
}

pub fn fal() -> Network {
    load("fal").expect("bundled fixture parses")
}

pub fn maclean() -> Network {
    load("maclean").expect("bundled fixture parses")
}

pub fn schmitz() -> Network {
    load("schmitz").expect("bundled fixture parses")
}

pub fn schmitz_augmented() -> Network {
    load("schmitz-augmented").expect("bundled fixture parses")
}

pub fn schmitz_reduced() -> Network {
    load("schmitz-reduced").expect("bundled fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse_and_round_trip() {
        for name in NAMES {
            let net = load(name).unwrap();
            let again = parse_network(&net.to_crn()).unwrap();
            assert_eq!(again, net, "{name}");
        }
    }

    #[test]
    fn reaction_counts() {
        assert_eq!(lee().num_reactions(), 22);
        assert_eq!(fal().num_reactions(), 23);
        assert_eq!(schmitz().num_reactions(), 17);
        assert_eq!(maclean().num_reactions(), 31);
        assert_eq!(schmitz_augmented().num_reactions(), 20);
        assert_eq!(schmitz_reduced().num_reactions(), 18);
    }
}
