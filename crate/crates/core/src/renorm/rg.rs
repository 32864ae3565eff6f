//! Iterative block growth: Wilson's numerical RG and infinite-system DMRG.
//!
//! Both keep a block Hamiltonian and the Pauli operators of the block's
//! boundary site in a truncated basis, conjugating each by the isometry
//! (`O -> W†OW`) after every step.

use num_complex::Complex;

use super::{top_eigenspace, Isometry, RenormError};
use crate::densemath::{hermitian_eig, hermitian_eig_lowest, kron, ComplexMatrix};
use crate::lattice::{build_hamiltonian, pauli, Axis, Boundary, ModelSpec, MAX_SITES};
use crate::scalar::Real;
use crate::states::{Bipartition, PureState};

/// One growth step.
#[derive(Clone, Debug, PartialEq)]
pub struct RgStep<T> {
    /// Sites described by the state whose energy is recorded.
    pub sites: usize,
    /// Retained block dimension after the step.
    pub kept: usize,
    pub energy: T,
    pub energy_per_site: T,
    /// `|e_k - e_{k-1}|` for the energy per site; `None` on the first step.
    pub delta: Option<T>,
    /// Discarded reduced-density-matrix weight (DMRG only).
    pub discarded_weight: Option<T>,
    /// The cut split a degenerate multiplet (DMRG only).
    pub degenerate_cut: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RgRunReport<T> {
    pub steps: Vec<RgStep<T>>,
    /// Stopped because `delta` fell below the threshold.
    pub converged: bool,
}

impl<T: Real> RgRunReport<T> {
    pub fn last(&self) -> &RgStep<T> {
        self.steps.last().expect("runs record at least one step")
    }

    /// Ground-energy estimate for the largest system reached.
    pub fn final_energy(&self) -> T {
        self.last().energy
    }
}

/// Truncated block: Hamiltonian plus boundary-site Paulis.
struct Block<T> {
    h: ComplexMatrix<T>,
    edge: Vec<(Axis, ComplexMatrix<T>)>,
    sites: usize,
}

impl<T: Real> Block<T> {
    fn dim(&self) -> usize {
        self.h.rows()
    }

    /// Block plus one site appended on the boundary side.
    fn enlarge(&self, spec: &ModelSpec<T>) -> Block<T> {
        let d = self.dim();
        let id2 = ComplexMatrix::identity(2);
        let mut h = kron(&self.h, &id2);
        if self.sites > 0 {
            for &(axis, c) in &spec.bond_terms() {
                if let Some((_, e)) = self.edge.iter().find(|(a, _)| *a == axis) {
                    h = &h + &kron(e, &pauli(axis)).scaled(c);
                }
            }
        }
        for (axis, c) in spec.site_terms() {
            h = &h + &kron(&ComplexMatrix::identity(d), &pauli(axis)).scaled(c);
        }
        let edge = Axis::ALL
            .iter()
            .map(|&a| (a, kron(&ComplexMatrix::identity(d), &pauli(a))))
            .collect();
        Block {
            h,
            edge,
            sites: self.sites + 1,
        }
    }

    fn truncate(&self, w: &Isometry<T>) -> Block<T> {
        Block {
            h: w.compress(&self.h).hermitian_part(),
            edge: self.edge.iter().map(|(a, e)| (*a, w.compress(e))).collect(),
            sites: self.sites,
        }
    }
}

fn check_spec<T: Real>(spec: &ModelSpec<T>, m: usize) -> Result<(), RenormError> {
    spec.validate()?;
    if spec.boundary != Boundary::Open {
        return Err(RenormError::PeriodicUnsupported);
    }
    let full = 1usize << spec.sites;
    if m == 0 || m > full {
        return Err(RenormError::InvalidRank { m, d: full });
    }
    Ok(())
}

fn record<T: Real>(steps: &mut Vec<RgStep<T>>, mut step: RgStep<T>) -> T {
    step.delta = steps.last().map(|p| (step.energy_per_site - p.energy_per_site).abs());
    let delta = step.delta.unwrap_or(T::infinity());
    steps.push(step);
    delta
}

/// Wilson's numerical RG: diagonalize the block, keep its `m` lowest
/// eigenstates, append one site, repeat until `spec.sites` sites are
/// described, `max_iters` growth steps were taken, or the energy per site
/// changes by less than `conv_threshold`.
pub fn wilson_run<T: Real>(
    spec: &ModelSpec<T>,
    m: usize,
    block_init: usize,
    max_iters: usize,
    conv_threshold: Option<T>,
) -> Result<RgRunReport<T>, RenormError> {
    check_spec(spec, m)?;
    if block_init == 0 || block_init > spec.sites {
        return Err(RenormError::InvalidRun(format!(
            "initial block of {block_init} sites for a {}-site chain",
            spec.sites
        )));
    }
    let mut block = if block_init == 1 {
        Block {
            h: ComplexMatrix::zeros(1, 1),
            edge: Vec::new(),
            sites: 0,
        }
        .enlarge(spec)
    } else {
        let h = build_hamiltonian(&spec.clone().with_sites(block_init))?;
        let edge = Axis::ALL
            .iter()
            .map(|&a| {
                let mut e = ComplexMatrix::zeros(h.rows(), h.cols());
                crate::lattice::add_pauli_string(&mut e, block_init, &[(block_init - 1, a)], T::one());
                (a, e)
            })
            .collect();
        Block {
            h,
            edge,
            sites: block_init,
        }
    };

    let mut steps = Vec::new();
    let mut converged = false;
    let mut iters = 0;
    loop {
        let eig = hermitian_eig(&block.h)?;
        let k = m.min(block.dim());
        let energy = eig.values[0];
        let delta = record(
            &mut steps,
            RgStep {
                sites: block.sites,
                kept: k,
                energy,
                energy_per_site: energy / T::from_usize_lossy(block.sites),
                delta: None,
                discarded_weight: None,
                degenerate_cut: false,
            },
        );
        if conv_threshold.is_some_and(|t| delta < t) {
            converged = true;
            break;
        }
        if block.sites >= spec.sites || iters >= max_iters {
            break;
        }
        let cols: Vec<Vec<Complex<T>>> = (0..k).map(|j| eig.vector(j)).collect();
        let w = Isometry::from_trusted(ComplexMatrix::from_columns(block.dim(), &cols));
        block = block.truncate(&w).enlarge(spec);
        iters += 1;
    }
    Ok(RgRunReport { steps, converged })
}

/// Infinite-system DMRG with a reflected environment: the superblock is
/// `A • s • s' • A^R`, the block `A • s` is renormalized onto the `m`
/// dominant eigenvectors of its reduced density matrix, and the chain grows
/// by two sites per step until `spec.sites` (even) is reached.
pub fn dmrg_run<T: Real>(
    spec: &ModelSpec<T>,
    m: usize,
    max_iters: usize,
    conv_threshold: Option<T>,
) -> Result<RgRunReport<T>, RenormError> {
    check_spec(spec, m)?;
    if spec.sites % 2 != 0 {
        return Err(RenormError::InvalidRun(format!(
            "reflected-environment growth needs an even number of sites, got {}",
            spec.sites
        )));
    }
    let max_dim = 1usize << MAX_SITES;
    let mut block = Block {
        h: ComplexMatrix::zeros(1, 1),
        edge: Vec::new(),
        sites: 0,
    };
    let mut steps = Vec::new();
    let mut converged = false;
    let mut iters = 0;
    loop {
        let sys = block.enlarge(spec);
        let ds = sys.dim();
        let dim = ds * ds;
        if dim > max_dim {
            return Err(RenormError::SuperblockTooLarge { dim, max: max_dim });
        }
        // system ⊗ mirrored system, joined across the two free sites
        let ids = ComplexMatrix::identity(ds);
        let mut h = &kron(&sys.h, &ids) + &kron(&ids, &mirror(&sys, &block, spec));
        for &(axis, c) in &spec.bond_terms() {
            let left = &sys.edge.iter().find(|(a, _)| *a == axis).expect("edge op").1;
            let right = mirrored_edge(&block, axis);
            h = &h + &kron(left, &right).scaled(c);
        }
        let sites = 2 * sys.sites;
        let eig = hermitian_eig_lowest(&h, |_| 1)?;
        let energy = eig.values[0];
        let psi = PureState::normalized(vec![ds, ds], eig.vector(0))?;
        let proj = top_eigenspace(
            &{
                let mat = psi.split_matrix(&Bipartition::contiguous(1, 2)?)?;
                mat.matmul(&mat.adjoint()).hermitian_part()
            },
            m.min(ds),
        )?;
        let discarded = (T::one() - proj.retained()).max(T::zero());
        let delta = record(
            &mut steps,
            RgStep {
                sites,
                kept: proj.isometry.m(),
                energy,
                energy_per_site: energy / T::from_usize_lossy(sites),
                delta: None,
                discarded_weight: Some(discarded),
                degenerate_cut: proj.degenerate_cut,
            },
        );
        if conv_threshold.is_some_and(|t| delta < t) {
            converged = true;
            break;
        }
        if sites >= spec.sites || iters >= max_iters {
            break;
        }
        block = sys.truncate(&proj.isometry);
        iters += 1;
    }
    Ok(RgRunReport { steps, converged })
}

/// Hamiltonian of the reflected `s' • A^R` block, acting on `(s', A^R)`.
fn mirror<T: Real>(sys: &Block<T>, block: &Block<T>, spec: &ModelSpec<T>) -> ComplexMatrix<T> {
    // In its own basis the reflected block has the same matrices; only the
    // factor order flips, so rebuild with the new site first.
    let d = block.dim();
    let mut h = kron(&ComplexMatrix::identity(2), &block.h);
    if block.sites > 0 {
        for &(axis, c) in &spec.bond_terms() {
            let e = &block.edge.iter().find(|(a, _)| *a == axis).expect("edge op").1;
            h = &h + &kron(&pauli(axis), e).scaled(c);
        }
    }
    for (axis, c) in spec.site_terms() {
        h = &h + &kron(&pauli(axis), &ComplexMatrix::identity(d)).scaled(c);
    }
    debug_assert_eq!(h.rows(), sys.dim());
    h
}

/// Pauli on the free site `s'` of the reflected block.
fn mirrored_edge<T: Real>(block: &Block<T>, axis: Axis) -> ComplexMatrix<T> {
    kron(&pauli(axis), &ComplexMatrix::identity(block.dim()))
}
