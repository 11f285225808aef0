//! Bundled example networks (also shipped as files under `fixtures/`).

use crate::network::{parse_network, FlowNetwork};

pub const FIXTURES: &[(&str, &str)] = &[
    ("fig1", include_str!("../../../fixtures/fig1.net")),
    ("fig2a", include_str!("../../../fixtures/fig2a.net")),
    ("fig2b", include_str!("../../../fixtures/fig2b.net")),
    ("fig3a", include_str!("../../../fixtures/fig3a.net")),
    ("fig3b", include_str!("../../../fixtures/fig3b.net")),
    ("fig4", include_str!("../../../fixtures/fig4.net")),
    ("fig5", include_str!("../../../fixtures/fig5.net")),
    ("fig6_ci", include_str!("../../../fixtures/fig6_ci.net")),
    ("fig6_cii", include_str!("../../../fixtures/fig6_cii.net")),
    ("fig7_si", include_str!("../../../fixtures/fig7_si.net")),
    ("fig7_sii", include_str!("../../../fixtures/fig7_sii.net")),
    ("fig7_siii", include_str!("../../../fixtures/fig7_siii.net")),
    ("fig9", include_str!("../../../fixtures/fig9.net")),
    ("neither", include_str!("../../../fixtures/neither.net")),
];

pub fn text(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load(name: &str) -> Option<FlowNetwork> {
    text(name).map(|t| parse_network(t).expect("bundled fixture parses"))
}

pub fn all() -> Vec<(&'static str, FlowNetwork)> {
    FIXTURES
        .iter()
        .map(|(n, t)| (*n, parse_network(t).expect("bundled fixture parses")))
        .collect()
}

macro_rules! fixture_fns {
    ($($name:ident),*) => {
        $(pub fn $name() -> FlowNetwork {
            load(stringify!($name)).expect("bundled fixture")
        })*
    };
}

fixture_fns!(
    fig1, fig2a, fig2b, fig3a, fig3b, fig4, fig5, fig6_ci, fig6_cii, fig7_si, fig7_sii, fig7_siii,
    fig9, neither
);
