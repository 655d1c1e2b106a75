use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use sse_core::theorems::Instance;
use sse_core::{FamilySpec, Graph};

/// Exactly one of `--graph` or `--family` (with its size flags).
#[derive(Debug, Clone, Args)]
pub struct GraphSource {
    /// Edge-list file; a leading `file:` is accepted.
    #[arg(long, value_name = "PATH")]
    pub graph: Option<String>,

    /// Built-in family: complete, cycle, hypercube, clique_union, random_regular,
    /// or a full spec such as `hypercube:3`.
    #[arg(long, value_name = "NAME")]
    pub family: Option<String>,

    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Seed for random_regular; defaults to the command's `--seed`.
    #[arg(long = "graph-seed", value_name = "SEED")]
    pub graph_seed: Option<u64>,
}

impl GraphSource {
    pub fn is_given(&self) -> bool {
        self.graph.is_some() || self.family.is_some()
    }

    pub fn spec(&self, seed: u64) -> Result<FamilySpec> {
        let family = self.family.as_deref().context("no --family given")?;
        if family.contains(':') {
            return family.parse().map_err(Into::into);
        }
        let need = |x: Option<usize>, flag: &str| x.with_context(|| format!("--family {family} needs --{flag}"));
        let spec = match family {
            "complete" => FamilySpec::Complete { n: need(self.n, "n")? },
            "cycle" => FamilySpec::Cycle { n: need(self.n, "n")? },
            "hypercube" => FamilySpec::Hypercube { k: need(self.k, "k")? },
            "clique_union" => FamilySpec::CliqueUnion { m: need(self.m, "m")?, k: need(self.k, "k")? },
            "random_regular" => {
                FamilySpec::RandomRegular { n: need(self.n, "n")?, d: need(self.d, "d")?, seed: Some(self.graph_seed.unwrap_or(seed)) }
            }
            other => bail!("unknown family `{other}`"),
        };
        Ok(spec)
    }

    pub fn load(&self, seed: u64) -> Result<(String, Graph)> {
        match (&self.graph, &self.family) {
            (Some(_), Some(_)) => bail!("give exactly one of --graph and --family"),
            (None, None) => bail!("a graph is required: --graph PATH or --family NAME"),
            (Some(path), None) => {
                let path = PathBuf::from(path.strip_prefix("file:").unwrap_or(path));
                let bytes = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
                let g = Graph::load_edge_list(&bytes).with_context(|| format!("parsing {}", path.display()))?;
                Ok((format!("file:{}", path.display()), g))
            }
            (None, Some(_)) => {
                let spec = self.spec(seed)?;
                Ok((spec.to_string(), spec.generate()?))
            }
        }
    }

    pub fn instance(&self, seed: u64) -> Result<Instance> {
        let (label, g) = self.load(seed)?;
        Ok(Instance::new(label, g)?)
    }
}
