//! Parsing of command-line values into library objects.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use conemeans::chains::{build_builtin_chain, BuiltinChain, Chain, ChainPricing, ChainWire};
use conemeans::groups::{Element, GroupHandle, Measure};
use conemeans::order::{FunctionalSpec, Space, Vector};
use conemeans::pricing::{DynPricing, FaithfulQuotient, SampleConfig};
use conemeans::rational::{parse_rational, Rational};
use conemeans::{Error, Result};

use crate::{Backend, BackendArgs, Common};

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn inline_or_file(s: &str) -> Result<String> {
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(s.to_string());
    }
    let p = Path::new(s);
    if p.is_file() {
        return read_file(p);
    }
    Ok(s.to_string())
}

pub fn from_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("artifacts serialize")
}

pub fn parse_space(s: &str) -> Result<Space> {
    let n = s
        .strip_prefix('X')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| Error::Parse(format!("space must look like X6, got {s:?}")))?;
    Space::finite(n)
}

/// JSON (inline or file) or comma-separated coordinates of `Q^X`.
pub fn parse_vector(s: &str, space: &Space) -> Result<Vector> {
    let text = inline_or_file(s)?;
    if text.trim_start().starts_with('{') {
        let v: Vector = from_json(&text)?;
        if v.space() != space {
            return Err(Error::SpaceMismatch(v.space().to_string(), space.to_string()));
        }
        return Ok(v);
    }
    let coords = text.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
    Vector::from_coords(space, &coords)
}

pub fn parse_group(s: &str) -> Result<GroupHandle> {
    let text = inline_or_file(s)?;
    if text.trim_start().starts_with('{') {
        return from_json(&text);
    }
    text.parse()
}

pub fn parse_measure(s: &str, group: &GroupHandle) -> Result<Measure> {
    match s {
        "srw" => Measure::simple_random_walk(group),
        "lazy" => Measure::lazy_random_walk(group),
        "uniform" => Measure::uniform(group),
        other => {
            let mu: Measure = from_json(&inline_or_file(other)?)?;
            if mu.group() != group {
                return Err(Error::GroupMismatch(mu.group().to_string(), group.to_string()));
            }
            Ok(mu)
        }
    }
}

fn parse_rows(s: &str) -> Result<Vec<Vec<Rational>>> {
    s.split('|').map(|row| row.split(',').map(parse_rational).collect()).collect()
}

pub fn parse_measures(s: &str) -> Result<Vec<Vec<Rational>>> {
    parse_rows(s)
}

fn parse_blocks(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split('|')
        .map(|b| {
            b.split(',').map(|i| i.trim().parse().map_err(|_| Error::Parse(format!("bad block index {i:?}")))).collect()
        })
        .collect()
}

/// Pairs of consecutive coordinates, weighted `1, 2, .., n`.
fn default_lex(size: usize) -> BuiltinChain {
    let blocks = (0..size).collect::<Vec<_>>().chunks(2).map(<[usize]>::to_vec).collect();
    let weights = (1..=size as i64).map(|i| Rational::from_integer(i.into())).collect();
    BuiltinChain::Lexicographic { size, blocks, weights: Some(weights) }
}

/// A pricing selected on the command line, with its sampling setup.
pub struct Selected {
    pub pricing: DynPricing,
    pub chain: Option<Chain>,
    pub space: Space,
    pub pool: Option<Vec<Element>>,
}

impl Selected {
    pub fn config(&self, common: &Common) -> SampleConfig {
        let cfg = SampleConfig::new(common.seed, common.samples);
        match &self.pool {
            Some(p) => cfg.within(p.clone()),
            None => cfg,
        }
    }
}

pub fn select_chain(args: &BackendArgs) -> Result<Chain> {
    match args.backend {
        Backend::Lex => {
            let space = parse_space(&args.space)?;
            let Space::FiniteCoord { size } = space else { unreachable!() };
            let kind = match &args.blocks {
                Some(b) => BuiltinChain::Lexicographic { size, blocks: parse_blocks(b)?, weights: None },
                None => default_lex(size),
            };
            build_builtin_chain(&kind)
        }
        Backend::Density => build_builtin_chain(&BuiltinChain::DensityZ),
        Backend::Rightmost => build_builtin_chain(&BuiltinChain::RightmostZ { window: args.window }),
        Backend::Chain => {
            let path =
                args.chain.as_ref().ok_or_else(|| Error::InvalidInput("--backend chain needs --chain".into()))?;
            from_json::<ChainWire>(&read_file(path)?)?.into_chain()
        }
        Backend::Faithful => Err(Error::InvalidInput("the faithful backend is not a chain".into())),
    }
}

pub fn select(args: &BackendArgs) -> Result<Selected> {
    if args.backend == Backend::Faithful {
        let space = parse_space(&args.space)?;
        let pricing: DynPricing = Arc::new(FaithfulQuotient::new(&space, FunctionalSpec::Counting)?);
        return Ok(Selected { pricing, chain: None, space, pool: None });
    }
    let chain = select_chain(args)?;
    let space = chain.space().clone();
    let pool = match args.backend {
        Backend::Rightmost => Some((-args.window..=args.window).map(Element::z).collect()),
        _ => None,
    };
    let pricing: DynPricing = Arc::new(ChainPricing::new(chain.clone()));
    Ok(Selected { pricing, chain: Some(chain), space, pool })
}
