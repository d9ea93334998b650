//! Expansion constants of a complex: cofilling constants L_k, cohomological
//! expansion η_k, cosystoles ϑ_j, local sparsity ε, reduced cohomology
//! dimensions, and the overlap threshold μ derived from them.
//!
//! Everything here is exact rational arithmetic; minima and maxima over
//! cochain spaces are exhaustive enumerations guarded by explicit budgets.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::{Cochain, ComplexError, ComplexSkeleton, WeightedNorm};
use crate::gf2::{coset_min_weight, Echelon, Gf2Error, Gf2Vec};
use crate::rational::{factorial, Ext};
use crate::Rat;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{context}: {source}")]
    Linear { context: String, source: Gf2Error },
    #[error("enumeration budget exceeded in dimension {k}: {count} basis vectors > budget {budget}")]
    Budget { k: isize, count: usize, budget: usize },
    #[error("invalid constants: {0}")]
    InvalidConstants(String),
    #[error("not sparse enough: the threshold recursion admits no positive mu (mu_max = {mu_max})")]
    NotSparseEnough { mu_max: Rat },
}

/// Enumeration budgets for the exhaustive searches.
#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    /// Cap on subspace dimension in minimum-weight coset searches (2^dim work).
    pub coset_dim: usize,
    /// Cap on the point/cell count in general-position subset enumerations.
    pub subsets: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { coset_dim: 24, subsets: 10 }
    }
}

fn lin(context: &str, k: isize, source: Gf2Error) -> MetricsError {
    match source {
        Gf2Error::Budget { dim, budget } => MetricsError::Budget { k, count: dim, budget },
        e => MetricsError::Linear { context: context.to_string(), source: e },
    }
}

/// Guards a 2^count enumeration against the budget (and the u64 counter).
fn check_enum(k: isize, count: usize, budgets: Budgets) -> Result<(), MetricsError> {
    let cap = budgets.coset_dim.min(62);
    if count > cap {
        return Err(MetricsError::Budget { k, count, budget: cap });
    }
    Ok(())
}

/// Minimum-norm cofilling of a coboundary: solves δx = beta in C^{k-1} and
/// minimizes the norm over the solution coset x + Z^{k-1}.
///
/// Returns None if beta is not a coboundary.
pub fn min_cofilling(
    x: &ComplexSkeleton,
    n: &WeightedNorm,
    k: isize,
    beta: &Gf2Vec,
    budgets: Budgets,
) -> Result<Option<(Rat, Cochain)>, MetricsError> {
    let delta = x.coboundary(k)?;
    let particular = match delta.solve(beta).map_err(|e| lin("cofilling solve", k, e))? {
        Some(p) => p,
        None => return Ok(None),
    };
    let kernel = delta.kernel_basis();
    let (w, argmin) = coset_min_weight(&kernel, &particular, n.table(k - 1), budgets.coset_dim)
        .map_err(|e| lin("cofilling coset search", k - 1, e))?;
    Ok(Some((w, Cochain { dim: k - 1, bits: argmin })))
}

/// The cofilling (coisoperimetric) constant L_k: the worst ratio of a best
/// cofilling norm to the coboundary norm, over all nonzero coboundaries.
/// Returns 0 when B^k is trivial.
pub fn cofilling_constant(
    x: &ComplexSkeleton,
    n: &WeightedNorm,
    k: isize,
    budgets: Budgets,
) -> Result<Rat, MetricsError> {
    if k < 1 || k > x.dim() as isize {
        return Err(ComplexError::DimOutOfRange { k, dim: x.dim() }.into());
    }
    let delta = x.coboundary(k)?;
    let image = delta.image_basis();
    check_enum(k, image.len(), budgets)?;
    let mut best = Rat::zero();
    for mask in 1u64..(1u64 << image.len()) {
        let mut beta = Gf2Vec::zero(x.n_cells(k));
        for (i, b) in image.iter().enumerate() {
            if mask >> i & 1 == 1 {
                beta.xor_assign(b);
            }
        }
        let beta_norm = n.table(k).weigh(&beta);
        let (fill_norm, _) = min_cofilling(x, n, k, &beta, budgets)?
            .expect("image basis elements are coboundaries");
        let ratio = fill_norm / beta_norm;
        if ratio > best {
            best = ratio;
        }
    }
    Ok(best)
}

/// Cohomological expansion η_k: the least ratio ‖δα‖ / ‖[α]‖ over cochains
/// with nonzero class norm, where ‖[α]‖ is the distance to B^{k-1} (the
/// augmented coboundaries when k = 1). Infinite when C^{k-1} = B^{k-1}.
pub fn expansion_constant(
    x: &ComplexSkeleton,
    n: &WeightedNorm,
    k: isize,
    budgets: Budgets,
) -> Result<Ext, MetricsError> {
    if k < 1 || k > x.dim() as isize {
        return Err(ComplexError::DimOutOfRange { k, dim: x.dim() }.into());
    }
    let len = x.n_cells(k - 1);
    let cob_basis = x.coboundary(k - 1)?.image_basis();
    let cob = Echelon::from_vectors(len, &cob_basis);
    let reps = cob.complement_units();
    check_enum(k - 1, reps.len(), budgets)?;
    let delta = x.coboundary(k)?;
    let mut best: Option<Rat> = None;
    // One representative per class of C^{k-1}/B^{k-1}; the zero class is
    // skipped since its class norm vanishes. ‖δα‖ is constant on a class.
    for mask in 1u64..(1u64 << reps.len()) {
        let mut alpha = Gf2Vec::zero(len);
        for (i, r) in reps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                alpha.xor_assign(r);
            }
        }
        let (class_norm, _) =
            coset_min_weight(&cob_basis, &alpha, n.table(k - 1), budgets.coset_dim)
                .map_err(|e| lin("class norm coset search", k - 1, e))?;
        debug_assert!(class_norm.is_positive(), "nonzero class has positive distance to B");
        let delta_norm = n.table(k).weigh(&delta.mul_vec(&alpha));
        let ratio = delta_norm / class_norm;
        if best.as_ref().is_none_or(|b| ratio < *b) {
            best = Some(ratio);
        }
    }
    Ok(best.map_or(Ext::Infinite, Ext::Finite))
}

/// The cosystole ϑ_j: minimum norm of a cohomologically nontrivial
/// j-cocycle, together with one minimizer; infinite when H^j = 0.
pub fn cosystole(
    x: &ComplexSkeleton,
    n: &WeightedNorm,
    j: isize,
    budgets: Budgets,
) -> Result<(Ext, Option<Cochain>), MetricsError> {
    if j < 0 || j > x.dim() as isize {
        return Err(ComplexError::DimOutOfRange { k: j, dim: x.dim() }.into());
    }
    let len = x.n_cells(j);
    let cocycles = x.coboundary(j + 1)?.kernel_basis();
    check_enum(j, cocycles.len(), budgets)?;
    let cob = Echelon::from_vectors(len, &x.coboundary(j)?.image_basis());
    let mut best: Option<(Rat, Gf2Vec)> = None;
    for mask in 1u64..(1u64 << cocycles.len()) {
        let mut z = Gf2Vec::zero(len);
        for (i, b) in cocycles.iter().enumerate() {
            if mask >> i & 1 == 1 {
                z.xor_assign(b);
            }
        }
        if cob.contains(&z) {
            continue;
        }
        let w = n.table(j).weigh(&z);
        let better = match &best {
            None => true,
            Some((bw, bv)) => w < *bw || (w == *bw && z.lex_cmp(bv) == std::cmp::Ordering::Less),
        };
        if better {
            best = Some((w, z));
        }
    }
    Ok(match best {
        None => (Ext::Infinite, None),
        Some((w, z)) => (Ext::Finite(w), Some(Cochain { dim: j, bits: z })),
    })
}

/// Local sparsity ε: the largest norm of an incidence cochain ι^k_τ over all
/// nonempty cells τ and all dimensions k.
pub fn local_sparsity(x: &ComplexSkeleton, n: &WeightedNorm) -> Result<Rat, MetricsError> {
    let mut eps = Rat::zero();
    for tau_dim in 0..=x.dim() as isize {
        for tau_idx in 0..x.n_cells(tau_dim) {
            for k in 0..=x.dim() as isize {
                let iota = x.incidence_cochain((tau_dim, tau_idx), k)?;
                let w = n.norm(&iota)?;
                if w > eps {
                    eps = w;
                }
            }
        }
    }
    Ok(eps)
}

/// Reduced cohomology dimensions dim H^k for k = 0..=dim (coboundaries in
/// dimension 0 include the augmentation).
pub fn betti(x: &ComplexSkeleton) -> Result<Vec<usize>, MetricsError> {
    let mut out = Vec::new();
    for k in 0..=x.dim() as isize {
        let z = x.coboundary(k + 1)?.kernel_basis().len();
        let b = x.coboundary(k)?.rank();
        out.push(z - b);
    }
    Ok(out)
}

/// The overlap threshold computed from the budget recursion
/// s_0 = 2Lμ, s_k = L(dε + (k+1) s_{k-1}), requiring
/// dε + (k+1) s_{k-1}(μ) < min(ϑ, 1) for every k = 1..=d.
#[derive(Clone, Debug)]
pub struct MuThreshold {
    pub d: usize,
    /// Largest admissible μ; the complex is topologically μ-overlapping for
    /// every μ < mu_max.
    pub mu_max: Rat,
    /// Which step k of the recursion binds the threshold.
    pub binding_k: usize,
    /// s_0..s_d evaluated at μ = mu_max.
    pub s_table: Vec<Rat>,
    /// Threshold in the ε -> 0 limit as the recursion yields it:
    /// min(ϑ,1) / (2 (d+1)! L^d).
    pub eps_zero_recursion: Rat,
    /// The summary bound ϑ / ((d+1)! L^d) the recursion is usually quoted
    /// as. It differs from the recursion value by a factor of 2; both are
    /// reported side by side rather than reconciled.
    pub final_display_bound: Rat,
}

/// The summary form s_k = dε (L + ... + L^k) + (k+1)! L^{k+1} · 2μ.
///
/// This agrees with the recursion exactly when ε = 0 (and for k <= 1); for
/// ε > 0 the recursion produces larger ε-coefficients ((k+1)!/(j+1)! instead
/// of 1 on L^{k+1-j}), so the recursion value dominates this one. The
/// recursion is what the construction actually consumes; this form is kept
/// for comparison.
pub fn s_closed_form(d: usize, l: &Rat, eps: &Rat, mu: &Rat, k: usize) -> Rat {
    let mut geom = Rat::zero();
    let mut lp = Rat::one();
    for _ in 1..=k {
        lp *= l;
        geom += &lp;
    }
    let d_rat = Rat::from_integer(d.into());
    let lk1 = num::pow::pow(l.clone(), k + 1);
    d_rat * eps * geom + factorial(k + 1) * lk1 * Rat::from_integer(2.into()) * mu
}

/// The s_k budget table evaluated by the recursion itself (used to
/// cross-check the closed form and by the homotopy engine).
pub fn s_table_recursive(d: usize, l: &Rat, eps: &Rat, mu: &Rat) -> Vec<Rat> {
    let d_rat = Rat::from_integer(d.into());
    let mut table = Vec::with_capacity(d + 1);
    let mut s = Rat::from_integer(2.into()) * l * mu;
    table.push(s.clone());
    for k in 1..=d {
        s = l * (&d_rat * eps + Rat::from_integer((k + 1).into()) * &s);
        table.push(s.clone());
    }
    table
}

pub fn mu_threshold(
    d: usize,
    l: &Rat,
    theta: &Ext,
    eps: &Rat,
) -> Result<MuThreshold, MetricsError> {
    if d == 0 {
        return Err(MetricsError::InvalidConstants("d must be at least 1".into()));
    }
    if !l.is_positive() {
        return Err(MetricsError::InvalidConstants(format!("L must be positive, got {l}")));
    }
    if !theta.is_positive() {
        return Err(MetricsError::InvalidConstants(format!("theta must be positive, got {theta}")));
    }
    if eps.is_negative() {
        return Err(MetricsError::InvalidConstants(format!(
            "epsilon must be nonnegative, got {eps}"
        )));
    }
    let bound = theta.min_with_one();
    let d_rat = Rat::from_integer(d.into());
    // Each s_j is linear in μ. Carrying (constant, slope) through the
    // recursion keeps the step-k condition
    //   dε + (k+1) s_{k-1}(μ) < bound
    // an exact linear inequality in μ, so the cap per k is a single division.
    let mut mu_max: Option<(Rat, usize)> = None;
    let mut s_const = Rat::zero();
    let mut s_slope = Rat::from_integer(2.into()) * l; // s_0 = 2Lμ
    for k in 1..=d {
        let k1 = Rat::from_integer((k + 1).into());
        let lhs_const = &d_rat * eps + &k1 * &s_const;
        let lhs_slope = &k1 * &s_slope;
        let cap = (bound.clone() - lhs_const) / lhs_slope;
        if mu_max.as_ref().is_none_or(|(m, _)| cap < *m) {
            mu_max = Some((cap, k));
        }
        s_const = l * (&d_rat * eps + &k1 * s_const);
        s_slope = l * k1 * s_slope;
    }
    let (mu_max, binding_k) = mu_max.expect("d >= 1");
    let eps_zero_recursion =
        bound / (Rat::from_integer(2.into()) * factorial(d + 1) * num::pow::pow(l.clone(), d));
    let final_display_bound = match theta {
        Ext::Infinite => Rat::one(),
        Ext::Finite(t) => t.clone(),
    } / (factorial(d + 1) * num::pow::pow(l.clone(), d));
    if !mu_max.is_positive() {
        return Err(MetricsError::NotSparseEnough { mu_max });
    }
    let s_table = s_table_recursive(d, l, eps, &mu_max);
    Ok(MuThreshold { d, mu_max, binding_k, s_table, eps_zero_recursion, final_display_bound })
}

/// Everything the overlap-theorem hypothesis asks of a complex, in one report.
#[derive(Clone, Debug)]
pub struct ExpansionReport {
    pub dim: usize,
    pub cell_counts: Vec<usize>,
    /// L_k for k = 1..=dim (index 0 is L_1).
    pub cofilling: Vec<Rat>,
    /// η_k for k = 1..=dim.
    pub expansion: Vec<Ext>,
    /// ϑ_j for j = 0..=dim.
    pub cosystole: Vec<Ext>,
    pub local_sparsity: Rat,
    /// dim H^k for k = 0..=dim (reduced).
    pub betti: Vec<usize>,
    /// Threshold recursion outcome at L = max L_k, ϑ = min over j < dim,
    /// ε = local sparsity; an explanation string when no threshold exists.
    pub mu: Result<MuThreshold, String>,
}

pub fn analyze(
    x: &ComplexSkeleton,
    n: &WeightedNorm,
    budgets: Budgets,
) -> Result<ExpansionReport, MetricsError> {
    let d = x.dim();
    let mut cofilling = Vec::new();
    let mut expansion = Vec::new();
    for k in 1..=d as isize {
        cofilling.push(cofilling_constant(x, n, k, budgets)?);
        expansion.push(expansion_constant(x, n, k, budgets)?);
    }
    let mut cosys = Vec::new();
    for j in 0..=d as isize {
        cosys.push(cosystole(x, n, j, budgets)?.0);
    }
    let eps = local_sparsity(x, n)?;
    let betti = betti(x)?;
    let mu = if d == 0 {
        Err("0-dimensional complex has no overlap threshold".to_string())
    } else {
        let l_max = cofilling.iter().max().cloned().unwrap_or_else(Rat::zero);
        let theta_min = cosys[..d].iter().min().cloned().unwrap_or(Ext::Infinite);
        if l_max.is_zero() {
            Err("all cofilling constants are zero".to_string())
        } else {
            mu_threshold(d, &l_max, &theta_min, &eps).map_err(|e| e.to_string())
        }
    };
    Ok(ExpansionReport {
        dim: d,
        cell_counts: x.cell_counts(),
        cofilling,
        expansion,
        cosystole: cosys,
        local_sparsity: eps,
        betti,
        mu,
    })
}
