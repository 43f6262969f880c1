//! Built-in test polygons.

use crate::error::{Error, Result};
use crate::io::{parse_polygon, PolygonInput};

const FIXTURES: [(&str, &str); 4] = [
    ("m-like", include_str!("../fixtures/m-like.json")),
    ("s-like", include_str!("../fixtures/s-like.json")),
    ("t-like", include_str!("../fixtures/t-like.json")),
    ("star", include_str!("../fixtures/star.json")),
];

/// Names accepted by [`fixture`].
pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}

/// Raw JSON document of a built-in polygon.
pub fn fixture_source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn fixture(name: &str) -> Result<PolygonInput> {
    let src = fixture_source(name).ok_or_else(|| {
        Error::InvalidInput(format!("unknown fixture '{name}' (known: {})", names().collect::<Vec<_>>().join(", ")))
    })?;
    parse_polygon(src.as_bytes())
}
