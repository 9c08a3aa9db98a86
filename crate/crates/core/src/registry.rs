//! Runtime registries for the two strategy families: model variants
//! (`m1`..`m4b`) and frontier methods (`eps-cost`, `eps-pref`, `wbs`).
//! The command line resolves names against these tables; adding a variant
//! means adding a unit struct and one registry entry.

use crate::biobjective::{
    epsilon_constraint, weighting_binary_search, Direction, EnumerateConfig, Frontier,
    FrontierInputs,
};
use crate::instance::Instance;
use crate::models::{
    add_valid_inequalities, assemble_m1, assemble_m3, assemble_m4, assemble_m4b,
    AssembleError, AssembledProblem, ViLevel,
};
use crate::multigraph::{
    build_graph_m1, build_graph_m2, build_graph_m3, build_graph_m4, reduce_graph, Graph,
};

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub vi: ViLevel,
    /// Merge equal-weight interval duplicates before assembling (the
    /// time-expanded variants only).
    pub reduce: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            vi: ViLevel::None,
            reduce: true,
        }
    }
}

pub struct VariantOutput {
    pub graph: Graph,
    pub problem: AssembledProblem,
}

/// One model variant: builds its graph and assembles its program.
pub trait VariantStrategy: Sync {
    fn name(&self) -> &'static str;
    fn build(&self, instance: &Instance, options: &BuildOptions)
        -> Result<VariantOutput, AssembleError>;
    /// Whether solves must attach the lazy infeasible-path separation.
    fn needs_separation(&self) -> bool {
        false
    }
}

struct M1;
struct M2;
struct M3;
struct M4;
struct M4b;

impl VariantStrategy for M1 {
    fn name(&self) -> &'static str {
        "m1"
    }

    fn build(&self, instance: &Instance, _options: &BuildOptions)
        -> Result<VariantOutput, AssembleError> {
        // fixed sequences take no valid inequalities beyond the base rows
        let graph = build_graph_m1(instance);
        let problem = assemble_m1(&graph, instance)?;
        Ok(VariantOutput { graph, problem })
    }
}

impl VariantStrategy for M2 {
    fn name(&self) -> &'static str {
        "m2"
    }

    fn build(&self, instance: &Instance, _options: &BuildOptions)
        -> Result<VariantOutput, AssembleError> {
        let graph = build_graph_m2(instance);
        let problem = assemble_m1(&graph, instance)?;
        Ok(VariantOutput { graph, problem })
    }
}

impl VariantStrategy for M3 {
    fn name(&self) -> &'static str {
        "m3"
    }

    fn build(&self, instance: &Instance, options: &BuildOptions)
        -> Result<VariantOutput, AssembleError> {
        let graph = build_graph_m3(instance);
        let mut problem = assemble_m3(&graph, instance)?;
        add_valid_inequalities(&mut problem, &graph, instance, options.vi.cap_m3());
        Ok(VariantOutput { graph, problem })
    }
}

impl VariantStrategy for M4 {
    fn name(&self) -> &'static str {
        "m4"
    }

    fn build(&self, instance: &Instance, options: &BuildOptions)
        -> Result<VariantOutput, AssembleError> {
        let graph = timed_graph(instance, options);
        let mut problem = assemble_m4(&graph, instance)?;
        add_valid_inequalities(&mut problem, &graph, instance, options.vi);
        Ok(VariantOutput { graph, problem })
    }
}

impl VariantStrategy for M4b {
    fn name(&self) -> &'static str {
        "m4b"
    }

    fn build(&self, instance: &Instance, options: &BuildOptions)
        -> Result<VariantOutput, AssembleError> {
        let graph = timed_graph(instance, options);
        let mut problem = assemble_m4b(&graph, instance)?;
        add_valid_inequalities(&mut problem, &graph, instance, options.vi);
        Ok(VariantOutput { graph, problem })
    }

    fn needs_separation(&self) -> bool {
        true
    }
}

fn timed_graph(instance: &Instance, options: &BuildOptions) -> Graph {
    let expanded = build_graph_m4(instance);
    if options.reduce {
        reduce_graph(&expanded)
    } else {
        expanded
    }
}

impl ViLevel {
    /// The interval families need interval-bearing legs.
    fn cap_m3(self) -> ViLevel {
        match self {
            ViLevel::M4Set => ViLevel::M3Set,
            other => other,
        }
    }
}

static VARIANTS: [&dyn VariantStrategy; 5] = [&M1, &M2, &M3, &M4, &M4b];

pub fn variants() -> &'static [&'static dyn VariantStrategy] {
    &VARIANTS
}

pub fn variant(name: &str) -> Option<&'static dyn VariantStrategy> {
    VARIANTS.iter().copied().find(|v| v.name() == name)
}

/// One frontier enumeration scheme.
pub trait FrontierMethod: Sync {
    fn name(&self) -> &'static str;
    fn enumerate(&self, inputs: &FrontierInputs<'_>, config: &EnumerateConfig) -> Frontier;
}

struct EpsCost;
struct EpsPref;
struct Wbs;

impl FrontierMethod for EpsCost {
    fn name(&self) -> &'static str {
        "eps-cost"
    }

    fn enumerate(&self, inputs: &FrontierInputs<'_>, config: &EnumerateConfig) -> Frontier {
        epsilon_constraint(inputs, Direction::CostFirst, config)
    }
}

impl FrontierMethod for EpsPref {
    fn name(&self) -> &'static str {
        "eps-pref"
    }

    fn enumerate(&self, inputs: &FrontierInputs<'_>, config: &EnumerateConfig) -> Frontier {
        epsilon_constraint(inputs, Direction::PrefFirst, config)
    }
}

impl FrontierMethod for Wbs {
    fn name(&self) -> &'static str {
        "wbs"
    }

    fn enumerate(&self, inputs: &FrontierInputs<'_>, config: &EnumerateConfig) -> Frontier {
        weighting_binary_search(inputs, config)
    }
}

static METHODS: [&dyn FrontierMethod; 3] = [&EpsCost, &EpsPref, &Wbs];

pub fn methods() -> &'static [&'static dyn FrontierMethod] {
    &METHODS
}

pub fn method(name: &str) -> Option<&'static dyn FrontierMethod> {
    METHODS.iter().copied().find(|m| m.name() == name)
}
