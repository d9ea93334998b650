//! The chain-cochain homotopy engine.
//!
//! Given a chain-cochain map F over a closed target triangulation T and a
//! complex X, the engine attempts to build a homotopy H from F to the
//! constant map G (G(v) = F(v₀) on vertices, 0 above), processing chains
//! dimension by dimension exactly as the inductive construction prescribes:
//! minimum-norm cofillings at every step, budgets s_k tracked against the
//! recursion s_0 = 2Lμ, s_k = L(dε + (k+1)s_{k-1}).
//!
//! The homotopy lives over the non-augmented chain complex of T, so the top
//! dimension has no room: H on d-chains is identically zero. A d-cell whose
//! forced coboundary z is the all-ones cochain therefore leaves the homotopy
//! identity unsatisfiable there, and the run ends in the fundamental-class
//! contradiction — the certificate that the assumed overlap bound μ is
//! untenable. Budget violations are logged per cell and never halt the
//! construction; a cocycle that is not a coboundary does halt it (nothing
//! can be cofilled) and is returned as the cosystolic obstruction together
//! with its norm certificate.

use num::{One, Zero};
use thiserror::Error;

use crate::complex::{Cochain, ComplexError, ComplexSkeleton, WeightedNorm};
use crate::gf2::{Gf2Matrix, Gf2Vec};
use crate::metrics::{min_cofilling, s_table_recursive, Budgets, MetricsError};
use crate::pairing::{ChainCochainMap, PairingError, TargetComplex};
use crate::rational::Ext;
use crate::Rat;

#[derive(Debug, Error)]
pub enum HomotopyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("target complex has no vertices")]
    NoVertices,
    #[error("target is disconnected ({components} components): the base step is unsolvable")]
    DisconnectedTarget { components: usize },
    #[error("target dimension {t} does not match the pairing dimension {f}")]
    DimensionMismatch { f: usize, t: usize },
    #[error("need theta entries for cochain dimensions 0..={want}, got {got}")]
    ThetaCount { got: usize, want: usize },
    #[error("base-step cofilling failed at vertex {vertex}: F(v) - F(v0) is not a coboundary")]
    BaseStepUnsolvable { vertex: String },
}

/// Constants driving the budget bookkeeping of a run.
#[derive(Clone, Debug)]
pub struct HomotopyConstants {
    /// The assumed overlap bound μ the run tries to certify against.
    pub mu: Rat,
    /// Cofilling constant L used by the budget recursion.
    pub l: Rat,
    /// ϑ_j for cochain dimensions j = 0..=d−1 (obstruction certificates).
    pub theta: Vec<Ext>,
    /// Local sparsity ε.
    pub eps: Rat,
}

/// Log entry for one processed cell of T.
#[derive(Clone, Debug)]
pub struct CellStep {
    pub k: usize,
    pub cell: String,
    /// ‖F(τ)‖ (for k = 0 this is ‖F(v) − G(v)‖, the cofilled target).
    pub f_norm: Rat,
    /// dε, the sparsity bound claimed for ‖F(τ)‖ at k >= 1.
    pub sparsity_bound: Rat,
    /// ‖H(∂τ)‖ (zero at k = 0).
    pub boundary_norm: Rat,
    /// ‖z‖ and its proof-side bound dε + (k+1)s_{k−1}, for k >= 1.
    pub z_norm: Option<Rat>,
    pub z_bound: Option<Rat>,
    /// ‖H(τ)‖ (zero at k = d, where H is forced to vanish).
    pub h_norm: Rat,
    /// The budget this cell is checked against: s_k for k < d, 1 for k = d.
    pub budget: Rat,
    pub within_budget: bool,
    /// The homotopy identity F − G = H∂ + δH re-checked on this cell.
    pub identity_ok: bool,
}

/// Why a run ended the way it did.
#[derive(Clone, Debug)]
pub enum Outcome {
    /// Homotopy completed, identity holds everywhere, budgets respected.
    Completed,
    /// Homotopy completed except on d-cells with z = all-ones; the
    /// fundamental class pairs to a nonzero cochain while the homotopy
    /// forces zero.
    FundamentalClassContradiction { f_class_norm: Rat },
    /// A forced cocycle z is not a coboundary: construction stuck, with the
    /// cosystolic certificate ‖z‖ >= ϑ.
    CosystolicObstruction { k: usize, cell: String, z: Cochain, z_norm: Rat, theta: Ext },
    /// Construction and identity fine, but some cell exceeded its s_k
    /// budget (first such cell reported).
    BudgetObstruction { k: usize, cell: String, value: Rat, budget: Rat },
}

/// A full run of the engine, sufficient to replay and verify every step.
#[derive(Clone, Debug)]
pub struct HomotopyRun {
    pub d: usize,
    pub base_vertex: usize,
    pub base_vertex_name: String,
    /// ‖F(v₀)‖.
    pub m0: Rat,
    pub constants: HomotopyConstants,
    /// s_0..s_d from the recursion at μ.
    pub s_table: Vec<Rat>,
    pub g: ChainCochainMap,
    /// h[k]: C_k(T) -> C^{d−1−k}(X) for k = 0..=d−1; H on d-chains is zero.
    pub h: Vec<Gf2Matrix>,
    pub steps: Vec<CellStep>,
    pub outcome: Outcome,
    /// F([M]) and the homotopy side G([M]) + H(∂[M]) + δH([M]).
    pub f_class: Cochain,
    pub rhs_class: Cochain,
    pub target_closed: bool,
}

/// The vertex minimizing ‖F(v)‖ (ties to the first in vertex order),
/// together with the minimum m₀.
pub fn choose_base_vertex(
    f: &ChainCochainMap,
    t: &TargetComplex,
    x: &ComplexSkeleton,
    n: &WeightedNorm,
) -> Result<(usize, Rat), HomotopyError> {
    if t.n_cells(0) == 0 {
        return Err(HomotopyError::NoVertices);
    }
    let d = f.d as isize;
    let mut best: Option<(usize, Rat)> = None;
    for v in 0..t.n_cells(0) {
        let w = weigh(x, n, d, &f.mats[0].column(v));
        if best.as_ref().is_none_or(|(_, bw)| w < *bw) {
            best = Some((v, w));
        }
    }
    Ok(best.unwrap())
}

/// Norm of a cochain that may live above the dimension of X (where the
/// cochain spaces are zero).
fn weigh(x: &ComplexSkeleton, n: &WeightedNorm, dim: isize, bits: &Gf2Vec) -> Rat {
    if dim > x.dim() as isize {
        debug_assert_eq!(bits.len(), 0);
        Rat::zero()
    } else {
        n.table(dim).weigh(bits)
    }
}

/// Minimum-norm cofilling that tolerates dimensions above dim X (where
/// everything is zero and the empty cofilling is exact).
fn cofill(
    x: &ComplexSkeleton,
    n: &WeightedNorm,
    k: isize,
    beta: &Gf2Vec,
    budgets: Budgets,
) -> Result<Option<(Rat, Gf2Vec)>, HomotopyError> {
    if k > x.dim() as isize + 1 {
        // delta: 0 -> 0; only the zero cochain exists on either side.
        debug_assert_eq!(beta.len(), 0);
        return Ok(Some((Rat::zero(), Gf2Vec::zero(0))));
    }
    if k == x.dim() as isize + 1 {
        // delta: C^dim -> 0 is the zero map, so every cochain cofills the
        // empty target; the minimum is the zero cochain.
        debug_assert_eq!(beta.len(), 0);
        return Ok(Some((Rat::zero(), Gf2Vec::zero(x.n_cells(x.dim() as isize)))));
    }
    Ok(min_cofilling(x, n, k, beta, budgets)?.map(|(w, c)| (w, c.bits)))
}

/// Builds the chain-cochain homotopy between F and the constant map G,
/// logging every norm and budget along the way.
pub fn build_homotopy(
    f: &ChainCochainMap,
    t: &TargetComplex,
    x: &ComplexSkeleton,
    n: &WeightedNorm,
    constants: HomotopyConstants,
    budgets: Budgets,
) -> Result<HomotopyRun, HomotopyError> {
    let d = f.d;
    if t.d() != d {
        return Err(HomotopyError::DimensionMismatch { f: d, t: t.d() });
    }
    f.check_shapes(t, x)?;
    assert!(d >= 1, "the homotopy engine needs a positive-dimensional target");
    if constants.theta.len() < d {
        return Err(HomotopyError::ThetaCount { got: constants.theta.len(), want: d - 1 });
    }
    if t.n_cells(0) == 0 {
        return Err(HomotopyError::NoVertices);
    }
    let components = t.n_cells(0) - t.boundary(1).rank();
    if components > 1 {
        return Err(HomotopyError::DisconnectedTarget { components });
    }

    let s_table = s_table_recursive(d, &constants.l, &constants.eps, &constants.mu);
    let d_eps = Rat::from_integer(d.into()) * &constants.eps;

    let (base_vertex, m0) = choose_base_vertex(f, t, x, n)?;
    let f_v0 = f.mats[0].column(base_vertex);

    // G: every vertex to F(v0), zero above.
    let mut g_mats = Vec::with_capacity(d + 1);
    let mut g0 = Gf2Matrix::zero(f.mats[0].rows(), t.n_cells(0));
    for v in 0..t.n_cells(0) {
        for r in f_v0.support() {
            g0.set(r, v, true);
        }
    }
    g_mats.push(g0);
    for k in 1..=d {
        g_mats.push(Gf2Matrix::zero(x.n_cells(d as isize - k as isize), t.n_cells(k)));
    }
    let g = ChainCochainMap::new(d, g_mats);

    let h_dim = |k: usize| d as isize - 1 - k as isize; // cochain dimension of H_k
    let mut h: Vec<Gf2Matrix> = (0..d)
        .map(|k| Gf2Matrix::zero(x.n_cells(h_dim(k)), t.n_cells(k)))
        .collect();

    let mut steps: Vec<CellStep> = Vec::new();
    let mut first_budget_violation: Option<(usize, String, Rat, Rat)> = None;
    let mut cosystolic: Option<(usize, String, Gf2Vec, Rat)> = None;

    // k = 0: cofill F(v) − G(v) for every vertex.
    for v in 0..t.n_cells(0) {
        let target = f.mats[0].column(v).xor(&f_v0);
        let target_norm = weigh(x, n, d as isize, &target);
        let Some((h_norm, filling)) = cofill(x, n, d as isize, &target, budgets)? else {
            return Err(HomotopyError::BaseStepUnsolvable {
                vertex: t.cell_names[0][v].clone(),
            });
        };
        for r in filling.support() {
            h[0].set(r, v, true);
        }
        let within = h_norm < s_table[0];
        if !within && first_budget_violation.is_none() {
            first_budget_violation =
                Some((0, t.cell_names[0][v].clone(), h_norm.clone(), s_table[0].clone()));
        }
        // Identity on vertices: delta H(v) = F(v) − G(v), exact by
        // construction of the cofilling.
        let identity_ok = {
            let delta = virtual_coboundary(x, d as isize)?;
            delta.mul_vec(&filling) == target
        };
        steps.push(CellStep {
            k: 0,
            cell: t.cell_names[0][v].clone(),
            f_norm: target_norm,
            sparsity_bound: d_eps.clone(),
            boundary_norm: Rat::zero(),
            z_norm: None,
            z_bound: None,
            h_norm,
            budget: s_table[0].clone(),
            within_budget: within,
            identity_ok,
        });
    }

    // k = 1..=d: z := F(τ) + H(∂τ) is a cocycle; cofill it (k < d) or force
    // H(τ) = 0 (k = d).
    let mut fc_violations = 0usize;
    'levels: for k in 1..=d {
        let cochain_dim = d as isize - k as isize;
        for ci in 0..t.n_cells(k) {
            let boundary_col = t.boundary(k).column(ci);
            let h_boundary = h[k - 1].mul_vec(&boundary_col);
            let f_col = f.mats[k].column(ci);
            let z = f_col.xor(&h_boundary);
            let f_norm = weigh(x, n, cochain_dim, &f_col);
            let boundary_norm = weigh(x, n, cochain_dim, &h_boundary);
            let z_norm = weigh(x, n, cochain_dim, &z);
            let z_bound = &d_eps
                + Rat::from_integer((k + 1).into()) * &s_table[k - 1];
            let cell = t.cell_names[k][ci].clone();

            if k < d {
                match cofill(x, n, cochain_dim, &z, budgets)? {
                    None => {
                        // The obstruction certificate asserts a nontrivial
                        // cocycle class; z is one whenever F commutes with
                        // the boundaries (the engine's precondition).
                        let delta_out = virtual_coboundary(x, cochain_dim + 1)?;
                        assert!(
                            delta_out.mul_vec(&z).is_zero(),
                            "obstruction at {cell} is not a cocycle: F is not a chain-cochain map"
                        );
                        cosystolic = Some((k, cell.clone(), z.clone(), z_norm.clone()));
                        steps.push(CellStep {
                            k,
                            cell,
                            f_norm,
                            sparsity_bound: d_eps.clone(),
                            boundary_norm,
                            z_norm: Some(z_norm),
                            z_bound: Some(z_bound),
                            h_norm: Rat::zero(),
                            budget: s_table[k].clone(),
                            within_budget: false,
                            identity_ok: false,
                        });
                        break 'levels;
                    }
                    Some((h_norm, filling)) => {
                        for r in filling.support() {
                            h[k].set(r, ci, true);
                        }
                        let within = h_norm < s_table[k];
                        if !within && first_budget_violation.is_none() {
                            first_budget_violation =
                                Some((k, cell.clone(), h_norm.clone(), s_table[k].clone()));
                        }
                        let identity_ok = {
                            let delta = virtual_coboundary(x, cochain_dim)?;
                            delta.mul_vec(&filling).xor(&h_boundary) == f_col
                        };
                        steps.push(CellStep {
                            k,
                            cell,
                            f_norm,
                            sparsity_bound: d_eps.clone(),
                            boundary_norm,
                            z_norm: Some(z_norm),
                            z_bound: Some(z_bound),
                            h_norm,
                            budget: s_table[k].clone(),
                            within_budget: within,
                            identity_ok,
                        });
                    }
                }
            } else {
                // Top dimension: z is a 0-cocycle that must be an augmented
                // coboundary (0 or all-ones). The homotopy has no room here,
                // so H(τ) = 0 and the identity holds iff z = 0.
                let is_zero = z.is_zero();
                let is_ones = z == Gf2Vec::ones(z.len());
                if !is_zero && !is_ones {
                    cosystolic = Some((k, cell.clone(), z.clone(), z_norm.clone()));
                    steps.push(CellStep {
                        k,
                        cell,
                        f_norm,
                        sparsity_bound: d_eps.clone(),
                        boundary_norm,
                        z_norm: Some(z_norm),
                        z_bound: Some(z_bound),
                        h_norm: Rat::zero(),
                        budget: Rat::one(),
                        within_budget: false,
                        identity_ok: false,
                    });
                    break 'levels;
                }
                let within = z_norm < Rat::one();
                if !is_zero {
                    fc_violations += 1;
                }
                if !within && first_budget_violation.is_none() {
                    first_budget_violation =
                        Some((k, cell.clone(), z_norm.clone(), Rat::one()));
                }
                steps.push(CellStep {
                    k,
                    cell,
                    f_norm,
                    sparsity_bound: d_eps.clone(),
                    boundary_norm,
                    z_norm: Some(z_norm),
                    z_bound: Some(z_bound),
                    h_norm: Rat::zero(),
                    budget: Rat::one(),
                    within_budget: within,
                    identity_ok: is_zero,
                });
            }
        }
    }

    // Fundamental-class accounting: F([M]) against G([M]) + H(∂[M]) + δH([M]).
    let fundamental = t.fundamental_class();
    let f_class = f.apply(d, &fundamental);
    let mut rhs_bits = g.mats[d].mul_vec(&fundamental);
    if d >= 1 {
        let boundary_of_m = t.boundary(d).mul_vec(&fundamental);
        rhs_bits.xor_assign(&h[d - 1].mul_vec(&boundary_of_m));
        // δH([M]) vanishes: H is zero on d-chains.
    }
    let rhs_class = Cochain { dim: 0, bits: rhs_bits };
    let target_closed = t.is_closed();

    let outcome = if let Some((k, cell, z, z_norm)) = cosystolic {
        let theta = constants.theta[d - k].clone();
        Outcome::CosystolicObstruction {
            k,
            cell,
            z: Cochain { dim: d as isize - k as isize, bits: z },
            z_norm,
            theta,
        }
    } else if f_class.bits != rhs_class.bits {
        debug_assert!(fc_violations % 2 == 1 || !target_closed);
        Outcome::FundamentalClassContradiction {
            f_class_norm: weigh(x, n, 0, &f_class.bits),
        }
    } else if let Some((k, cell, value, budget)) = first_budget_violation {
        Outcome::BudgetObstruction { k, cell, value, budget }
    } else {
        Outcome::Completed
    };

    Ok(HomotopyRun {
        d,
        base_vertex,
        base_vertex_name: t.cell_names[0][base_vertex].clone(),
        m0,
        constants,
        s_table,
        g,
        h,
        steps,
        outcome,
        f_class,
        rhs_class,
        target_closed,
    })
}

/// The coboundary matrix entering dimension k, extended by zero maps above
/// the dimension of X.
fn virtual_coboundary(x: &ComplexSkeleton, k: isize) -> Result<Gf2Matrix, ComplexError> {
    if k > x.dim() as isize + 1 {
        Ok(Gf2Matrix::zero(0, 0))
    } else {
        x.coboundary(k)
    }
}

/// Checks the homotopy identity F − G = H∂ + δH on every cell of every
/// dimension; returns the first violating (k, cell index), or None.
///
/// `h[k]` maps C_k(T) to C^{d−1−k}(X) for k = 0..=d−1; H on d-chains is
/// taken as zero (the homotopy targets the non-augmented complex).
pub fn verify_homotopy(
    f: &ChainCochainMap,
    g: &ChainCochainMap,
    h: &[Gf2Matrix],
    t: &TargetComplex,
    x: &ComplexSkeleton,
) -> Result<Option<(usize, usize)>, HomotopyError> {
    let d = f.d;
    for k in 0..=d {
        let cochain_dim = d as isize - k as isize;
        for ci in 0..t.n_cells(k) {
            let mut lhs = f.mats[k].column(ci);
            lhs.xor_assign(&g.mats[k].column(ci));
            let mut rhs = Gf2Vec::zero(lhs.len());
            if k >= 1 {
                let boundary_col = t.boundary(k).column(ci);
                rhs.xor_assign(&h[k - 1].mul_vec(&boundary_col));
            }
            if k < d {
                let delta = virtual_coboundary(x, cochain_dim)?;
                rhs.xor_assign(&delta.mul_vec(&h[k].column(ci)));
            }
            if lhs != rhs {
                return Ok(Some((k, ci)));
            }
        }
    }
    Ok(None)
}
