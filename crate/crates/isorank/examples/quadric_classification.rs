//! Trace-zero symmetric matrices: isotropic-rank classification from the
//! normal sequence, and explicit decompositions for every supported shape.
//! The lone exceptional family — one nilpotent 3-block plus 2-blocks —
//! jumps to rank + 2; everything else meets its rank.
//!
//!     cargo run --example quadric_classification

use isorank::field::{Field, TowerField};
use isorank::quadrics::{
    classify_irk, decompose_normal_sequence, normal_blocks_matrix, NormalSequence,
};

fn show(fld: &TowerField, blocks: &[(i64, usize)]) {
    let seq = NormalSequence::new(
        fld.clone(),
        blocks.iter().map(|(l, s)| (fld.from_i64(*l), *s)).collect(),
    )
    .unwrap();
    let h = normal_blocks_matrix(&seq);
    let c = classify_irk(&h);
    let label: Vec<String> = blocks.iter().map(|(l, s)| format!("{}^({})", l, s)).collect();
    print!(
        "seq ({:24}) rank {} irk {}",
        label.join(", "),
        c.rank,
        c.irk
    );
    match decompose_normal_sequence(&seq) {
        Ok(out) => {
            println!(
                "  -> {} isotropic squares over a depth-{} tower, verified",
                out.decomposition.size(),
                out.field.depth()
            );
        }
        Err(e) => println!("  -> {}", e),
    }
}

fn main() {
    let fld = TowerField::qi();
    // The exceptional nilpotent block and its family.
    show(&fld, &[(0, 3)]);
    show(&fld, &[(0, 3), (0, 2)]);
    show(&fld, &[(0, 3), (0, 2), (0, 2)]);
    // Two 3-blocks lose the obstruction.
    show(&fld, &[(0, 3), (0, 3)]);
    // Larger nilpotent blocks meet their rank.
    show(&fld, &[(0, 5)]);
    show(&fld, &[(0, 6)]);
    // Mixing the 3-block with a bigger block or a nondegenerate part.
    show(&fld, &[(0, 4), (0, 3)]);
    show(&fld, &[(0, 3), (1, 1), (-1, 1)]);
    // Plain diagonal matrices go through the merge.
    show(&fld, &[(1, 1), (1, 1), (-2, 1)]);
    show(&fld, &[(1, 1), (1, 1), (1, 1), (-3, 1)]);
    // Nonzero eigenvalues in blocks of size >= 2 are classified but have no
    // constructive decomposition here.
    show(&fld, &[(1, 2), (-1, 2)]);
}
