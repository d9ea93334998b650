//! Machine-diffable report structures for the CLI.
//!
//! Reports serialize to JSON with a versioned schema. Every numeric value is
//! an exact rational string ("p/q" or "p", "inf" for the extended value);
//! field order is fixed by the struct definitions, so identical inputs and
//! configuration produce byte-identical reports.

use serde::Serialize;

use crate::complex::{Cochain, ComplexSkeleton};
use crate::homotopy::{CellStep, HomotopyRun, Outcome};
use crate::metrics::{ExpansionReport, MuThreshold};
use crate::overlap::OverlapResult;
use crate::rational::fmt_rat;
use crate::Rat;

pub const SCHEMA_VERSION: u32 = 1;

/// Configuration echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<String>,
    pub norm: String,
    pub budget_coset: usize,
    pub budget_subsets: usize,
    pub perturb_denom: u32,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct ComplexSummary {
    pub dim: usize,
    pub cells_per_dim: Vec<usize>,
}

impl ComplexSummary {
    pub fn of(x: &ComplexSkeleton) -> Self {
        ComplexSummary { dim: x.dim(), cells_per_dim: x.cell_counts() }
    }
}

#[derive(Debug, Serialize)]
pub struct MuReport {
    pub mu_max: String,
    pub binding_k: usize,
    pub s_table: Vec<String>,
    pub eps_zero_recursion: String,
    pub final_display_bound: String,
    /// The recursion-derived eps->0 value is half the final displayed
    /// bound; both are reported deliberately.
    pub factor_two_note: String,
}

impl MuReport {
    pub fn of(t: &MuThreshold) -> Self {
        MuReport {
            mu_max: fmt_rat(&t.mu_max),
            binding_k: t.binding_k,
            s_table: t.s_table.iter().map(fmt_rat).collect(),
            eps_zero_recursion: fmt_rat(&t.eps_zero_recursion),
            final_display_bound: fmt_rat(&t.final_display_bound),
            factor_two_note: "eps_zero_recursion = min(theta,1)/(2(d+1)!L^d) is what the budget \
                              recursion yields; final_display_bound = theta/((d+1)!L^d) is the \
                              summary bound the recursion is usually quoted as; they differ by \
                              a factor of 2 and both are reported"
                .to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub complex: ComplexSummary,
    /// L_k for k = 1..=dim.
    pub cofilling: Vec<String>,
    /// eta_k for k = 1..=dim.
    pub expansion: Vec<String>,
    /// theta_j for j = 0..=dim.
    pub cosystole: Vec<String>,
    pub local_sparsity: String,
    pub betti: Vec<usize>,
    pub mu: Option<MuReport>,
    pub mu_unavailable: Option<String>,
}

impl AnalyzeReport {
    pub fn of(config: RunConfig, x: &ComplexSkeleton, r: &ExpansionReport) -> Self {
        AnalyzeReport {
            schema_version: SCHEMA_VERSION,
            config,
            complex: ComplexSummary::of(x),
            cofilling: r.cofilling.iter().map(fmt_rat).collect(),
            expansion: r.expansion.iter().map(|e| e.to_string()).collect(),
            cosystole: r.cosystole.iter().map(|e| e.to_string()).collect(),
            local_sparsity: fmt_rat(&r.local_sparsity),
            betti: r.betti.clone(),
            mu: r.mu.as_ref().ok().map(MuReport::of),
            mu_unavailable: r.mu.as_ref().err().cloned(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PairingReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub complex: ComplexSummary,
    pub triangulation: Vec<String>,
    pub refinement_splits: usize,
    pub chain_cochain_ok: bool,
    pub violation: Option<String>,
    pub fundamental_class_support: Vec<String>,
    pub fundamental_class_is_all_ones: bool,
    /// The pairing matrices in the text matrix format.
    pub pairing: String,
}

#[derive(Debug, Serialize)]
pub struct OverlapReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub complex: ComplexSummary,
    pub value: String,
    pub witness: Vec<String>,
    pub covering_cells: Vec<String>,
}

impl OverlapReport {
    pub fn of(
        config: RunConfig,
        x: &ComplexSkeleton,
        result: &OverlapResult,
    ) -> Self {
        let d = x.dim() as isize;
        OverlapReport {
            schema_version: SCHEMA_VERSION,
            config,
            complex: ComplexSummary::of(x),
            value: fmt_rat(&result.value),
            witness: result.witness.iter().map(fmt_rat).collect(),
            covering_cells: result
                .covering
                .iter()
                .map(|&i| x.cell_name(d, i).to_string())
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StepReport {
    pub k: usize,
    pub cell: String,
    pub f_norm: String,
    pub sparsity_bound: String,
    pub boundary_norm: String,
    pub z_norm: Option<String>,
    pub z_bound: Option<String>,
    pub h_norm: String,
    pub budget: String,
    pub within_budget: bool,
    pub identity_ok: bool,
}

impl StepReport {
    fn of(s: &CellStep) -> Self {
        StepReport {
            k: s.k,
            cell: s.cell.clone(),
            f_norm: fmt_rat(&s.f_norm),
            sparsity_bound: fmt_rat(&s.sparsity_bound),
            boundary_norm: fmt_rat(&s.boundary_norm),
            z_norm: s.z_norm.as_ref().map(fmt_rat),
            z_bound: s.z_bound.as_ref().map(fmt_rat),
            h_norm: fmt_rat(&s.h_norm),
            budget: fmt_rat(&s.budget),
            within_budget: s.within_budget,
            identity_ok: s.identity_ok,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OutcomeReport {
    pub kind: String,
    pub k: Option<usize>,
    pub cell: Option<String>,
    pub cocycle_support: Option<Vec<String>>,
    pub cocycle_norm: Option<String>,
    pub theta: Option<String>,
    pub value: Option<String>,
    pub budget: Option<String>,
    pub f_class_norm: Option<String>,
}

impl OutcomeReport {
    fn of(outcome: &Outcome, x: &ComplexSkeleton) -> Self {
        let mut r = OutcomeReport {
            kind: String::new(),
            k: None,
            cell: None,
            cocycle_support: None,
            cocycle_norm: None,
            theta: None,
            value: None,
            budget: None,
            f_class_norm: None,
        };
        match outcome {
            Outcome::Completed => r.kind = "completed".into(),
            Outcome::FundamentalClassContradiction { f_class_norm } => {
                r.kind = "fundamental_class_contradiction".into();
                r.f_class_norm = Some(fmt_rat(f_class_norm));
            }
            Outcome::CosystolicObstruction { k, cell, z, z_norm, theta } => {
                r.kind = "cosystolic_obstruction".into();
                r.k = Some(*k);
                r.cell = Some(cell.clone());
                r.cocycle_support = Some(cochain_support(z, x));
                r.cocycle_norm = Some(fmt_rat(z_norm));
                r.theta = Some(theta.to_string());
            }
            Outcome::BudgetObstruction { k, cell, value, budget } => {
                r.kind = "budget_obstruction".into();
                r.k = Some(*k);
                r.cell = Some(cell.clone());
                r.value = Some(fmt_rat(value));
                r.budget = Some(fmt_rat(budget));
            }
        }
        r
    }
}

fn cochain_support(c: &Cochain, x: &ComplexSkeleton) -> Vec<String> {
    if c.dim > x.dim() as isize {
        Vec::new()
    } else {
        c.support_names(x)
    }
}

#[derive(Debug, Serialize)]
pub struct HomotopyReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub complex: ComplexSummary,
    pub d: usize,
    pub base_vertex: String,
    pub m0: String,
    pub mu: String,
    pub l: String,
    pub theta: Vec<String>,
    pub eps: String,
    pub s_table: Vec<String>,
    pub target_closed: bool,
    pub outcome: OutcomeReport,
    pub f_class_support: Vec<String>,
    pub rhs_class_support: Vec<String>,
    pub steps: Vec<StepReport>,
}

impl HomotopyReport {
    pub fn of(config: RunConfig, x: &ComplexSkeleton, run: &HomotopyRun) -> Self {
        HomotopyReport {
            schema_version: SCHEMA_VERSION,
            config,
            complex: ComplexSummary::of(x),
            d: run.d,
            base_vertex: run.base_vertex_name.clone(),
            m0: fmt_rat(&run.m0),
            mu: fmt_rat(&run.constants.mu),
            l: fmt_rat(&run.constants.l),
            theta: run.constants.theta.iter().map(|t| t.to_string()).collect(),
            eps: fmt_rat(&run.constants.eps),
            s_table: run.s_table.iter().map(fmt_rat).collect(),
            target_closed: run.target_closed,
            outcome: OutcomeReport::of(&run.outcome, x),
            f_class_support: cochain_support(&run.f_class, x),
            rhs_class_support: cochain_support(&run.rhs_class, x),
            steps: run.steps.iter().map(StepReport::of).collect(),
        }
    }
}

/// Canonical rendering: pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports are serializable");
    s.push('\n');
    s
}

/// Convenience for tests constructing witness strings.
pub fn rat_strings(values: &[Rat]) -> Vec<String> {
    values.iter().map(fmt_rat).collect()
}
