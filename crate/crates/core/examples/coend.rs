//! Coend of a diagram file, lifted coactions and the unit comparison.
//!
//! `cargo run --example coend -- examples/data/full_endo_gr42.txt`

use tannaka_forge::tannaka::{self, PairVerdict};
use tannaka_forge::text;

fn main() -> tannaka_forge::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/two_lines.txt").into());
    let src = std::fs::read_to_string(&path).expect("readable input");
    let doc = text::parse_document(&src)?;
    let d = doc.diagram.expect("objects and homs");
    let cr = tannaka::coend(&d)?;
    println!("L has R-rank {} with exps {:?}", cr.rank(), cr.presentation.carrier().exps());
    println!("Δ = {}", cr.coalgebra.comult().format());
    println!("ε = {}", cr.coalgebra.counit().format());
    let lifted = tannaka::lift_coaction(&d, &cr)?;
    for (o, m) in d.objects().iter().zip(&lifted) {
        println!("ρ_{} = {}", o.name, m.rho().format());
    }
    let pairs = tannaka::unit_fully_faithful_check(&d, &lifted)?;
    let equal = pairs.iter().filter(|p| p.verdict == PairVerdict::Equal).count();
    println!("Hom_D = Hom_L on {equal} of {} pairs; L flat: {}", pairs.len(), tannaka::flatness_check(&cr.coalgebra));
    Ok(())
}
