//! Graph parameters: functions on loop-free multigraphs, invariant under
//! isomorphism, with exact rational values.

mod chromatic;
mod flows;
mod matching;

use std::path::Path;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::hom::hom_fast;
use crate::rational::{self, ratio, Rational};
use crate::target::WeightedTarget;

pub use chromatic::{bell_bounded, chromatic, chromatic_polynomial, ChromaticCache, Poly};
pub use flows::{
    character_sums, count_flows, count_flows_oriented, flow_target, FiniteAbelianGroup, FlowSpec,
};
pub use matching::{partial_matchings, perfect_matchings};

pub trait GraphParameter: Send + Sync {
    fn name(&self) -> String;

    fn eval(&self, g: &MultiGraph) -> Result<Rational>;

    /// Declared multiplicativity over disjoint unions.
    fn multiplicative(&self) -> bool;

    /// Whether the parameter reacts to edge multiplicities in a way that
    /// simple-graph slices miss; default slices then include parallel edges.
    fn multiplicity_sensitive(&self) -> bool {
        false
    }
}

impl<P: GraphParameter + ?Sized> GraphParameter for Arc<P> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn eval(&self, g: &MultiGraph) -> Result<Rational> {
        (**self).eval(g)
    }
    fn multiplicative(&self) -> bool {
        (**self).multiplicative()
    }
    fn multiplicity_sensitive(&self) -> bool {
        (**self).multiplicity_sensitive()
    }
}

/// `2^{-|E(G')|}` where `G'` keeps one edge per parallel class.
pub fn simple_support_param(g: &MultiGraph) -> Rational {
    let e = g.simple_support().edge_count();
    Rational::new(One::one(), num_traits::pow(num_bigint::BigInt::from(2), e))
}

/// 1 if every degree (with multiplicity) is even, else 0.
pub fn eulerian_indicator(g: &MultiGraph) -> Rational {
    if g.degrees().iter().all(|d| d % 2 == 0) {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// The built-in parameters, addressed by name from the command line.
#[derive(Clone)]
pub enum Param {
    Matchings,
    Flows(FlowSpec),
    Chromatic { x: Rational, cache: Arc<ChromaticCache> },
    SimpleSupport,
    Eulerian,
    Hom { name: String, target: WeightedTarget },
}

impl Param {
    pub fn chromatic(x: Rational) -> Self {
        Param::Chromatic {
            x,
            cache: Arc::new(ChromaticCache::default()),
        }
    }

    pub fn hom(name: impl Into<String>, target: WeightedTarget) -> Self {
        Param::Hom {
            name: name.into(),
            target,
        }
    }

    /// Parses a registry name:
    /// `matchings`, `eulerian`, `simple-support`, `chromatic@<x>`,
    /// `flows@<specfile>`, `hom@<targetfile>` or `hom@builtin:<name>` where
    /// `<name>` is one of `eulerian`, `independent-set`, `single-loop-half`,
    /// `single-loop-two`, `complete:<x>`.
    pub fn parse(name: &str) -> Result<Self> {
        let (head, arg) = match name.split_once('@') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        match (head, arg) {
            ("matchings", None) => Ok(Param::Matchings),
            ("eulerian", None) => Ok(Param::Eulerian),
            ("simple-support", None) => Ok(Param::SimpleSupport),
            ("chromatic", Some(x)) => Ok(Param::chromatic(rational::parse(x)?)),
            ("flows", Some(path)) => {
                let text = std::fs::read_to_string(path)?;
                Ok(Param::Flows(FlowSpec::parse(&text)?))
            }
            ("hom", Some(arg)) => match arg.strip_prefix("builtin:") {
                Some(b) => Ok(Param::hom(name, builtin_target(b)?)),
                None => Ok(Param::hom(name, read_target(Path::new(arg))?)),
            },
            _ => Err(Error::UnknownParameter(name.to_string())),
        }
    }
}

pub fn read_target(path: &Path) -> Result<WeightedTarget> {
    WeightedTarget::from_json(&std::fs::read_to_string(path)?)
}

/// Named targets: `eulerian`, `independent-set`, `single-loop-half` (hom is
/// `2^{-|E|}` on simple graphs), `single-loop-two` (hom is `2^{|E|}`) and
/// `complete:<x>` (proper `x`-colorings).
pub fn builtin_target(name: &str) -> Result<WeightedTarget> {
    match name {
        "eulerian" => Ok(WeightedTarget::eulerian()),
        "independent-set" => Ok(WeightedTarget::independent_set()),
        "single-loop-half" => WeightedTarget::single_loop(Rational::one(), ratio(1, 2)),
        "single-loop-two" => WeightedTarget::single_loop(Rational::one(), rational::int(2)),
        _ => match name.strip_prefix("complete:").map(str::parse::<usize>) {
            Some(Ok(x)) if x >= 1 => Ok(WeightedTarget::complete(x)),
            _ => Err(Error::UnknownParameter(format!("hom@builtin:{name}"))),
        },
    }
}

impl GraphParameter for Param {
    fn name(&self) -> String {
        match self {
            Param::Matchings => "matchings".into(),
            Param::Flows(spec) => format!("flows[{spec}]"),
            Param::Chromatic { x, .. } => format!("chromatic@{}", rational::format(x)),
            Param::SimpleSupport => "simple-support".into(),
            Param::Eulerian => "eulerian".into(),
            Param::Hom { name, .. } => name.clone(),
        }
    }

    fn eval(&self, g: &MultiGraph) -> Result<Rational> {
        Ok(match self {
            Param::Matchings => perfect_matchings(g),
            Param::Flows(spec) => count_flows(g, spec),
            Param::Chromatic { x, cache } => cache.polynomial(g).eval(x),
            Param::SimpleSupport => simple_support_param(g),
            Param::Eulerian => eulerian_indicator(g),
            Param::Hom { target, .. } => hom_fast(g, target),
        })
    }

    fn multiplicative(&self) -> bool {
        true
    }

    fn multiplicity_sensitive(&self) -> bool {
        matches!(self, Param::SimpleSupport)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::hom;
    use crate::rational::int;

    #[test]
    fn simple_support_values() {
        assert_eq!(simple_support_param(&MultiGraph::empty(0)), int(1));
        let double = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(simple_support_param(&double), ratio(1, 2));
        assert_eq!(simple_support_param(&MultiGraph::complete(3)), ratio(1, 8));
    }

    #[test]
    fn single_loop_targets_on_simple_graphs() {
        let half = builtin_target("single-loop-half").unwrap();
        let two = builtin_target("single-loop-two").unwrap();
        for g in [MultiGraph::complete(4), MultiGraph::cycle(5), MultiGraph::path(3)] {
            assert_eq!(hom(&g, &half), simple_support_param(&g));
            assert_eq!(hom(&g, &two), rational::pow(&int(2), g.edge_count() as u32));
        }
        // On multigraphs the two differ: the target sees every parallel copy.
        let double = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(hom(&double, &half), ratio(1, 4));
    }

    #[test]
    fn eulerian_values() {
        assert_eq!(eulerian_indicator(&MultiGraph::cycle(3)), int(1));
        assert_eq!(eulerian_indicator(&MultiGraph::complete(2)), int(0));
        let double = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(eulerian_indicator(&double), int(1));
    }

    #[test]
    fn registry_names() {
        for name in ["matchings", "eulerian", "simple-support", "chromatic@5/2", "hom@builtin:complete:3"] {
            assert!(Param::parse(name).is_ok(), "{name}");
        }
        assert!(matches!(Param::parse("nope"), Err(Error::UnknownParameter(_))));
        assert!(Param::parse("hom@builtin:nope").is_err());
        assert_eq!(Param::parse("chromatic@5/2").unwrap().name(), "chromatic@5/2");
    }
}
