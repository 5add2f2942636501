//! Index-vector lattices: Hermite bases, membership, coset groups, residues,
//! full sets and unit transfers.
//!
//! Run with: cargo run --example lattice_basics

use hypermatch::lattice::{coset_group, is_full, CosetContext, IntegerLattice};
use hypermatch::partition::{compositions, IndexVector};

fn main() -> hypermatch::Result<()> {
    let gens = vec![IndexVector(vec![3, 0]), IndexVector(vec![1, 2])];
    let l = IntegerLattice::from_generators(2, &gens)?;
    println!("generators {:?} → Hermite basis {:?}", gens, l.basis());
    for probe in [vec![2, 1], vec![4, 2], vec![2, -2]] {
        let v = IndexVector(probe);
        println!("  contains {v:?}: {}", l.contains(&v)?);
    }

    // quotient of the ambient divisibility lattice (r = 3)
    let group = coset_group(&l, 3)?;
    println!(
        "coset group: invariant factors {:?}, size {:?}",
        group.invariant_factors, group.size
    );
    let ctx = CosetContext::new(&l, 3)?;
    for v in [vec![2, 1], vec![0, 3], vec![3, 0]] {
        let v = IndexVector(v);
        println!("  residue of {v:?}: {:?}", ctx.residue(&v)?);
    }
    println!(
        "  class representatives: {:?}",
        ctx.class_representatives(64)?
    );

    // full sets of 3-vectors force small quotients and unit transfers
    let all = compositions(2, 3);
    println!(
        "all 3-vectors in dimension 2: {all:?}  (full: {})",
        is_full(&all, 3, 2)?
    );
    let full_lattice = IntegerLattice::from_generators(2, &all)?;
    println!(
        "|Q| for the full family: {:?}",
        coset_group(&full_lattice, 3)?.size
    );
    let v = IndexVector(vec![4, 2]);
    for i in 0..2 {
        println!(
            "  transfer of {v:?} at part {i}: {:?}",
            full_lattice.transfer_index(&v, i)?
        );
    }
    Ok(())
}
