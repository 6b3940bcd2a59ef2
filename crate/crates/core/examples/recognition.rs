//! Recognition checks on a diagram that passes i) and ii) and on two that
//! fail, with their witnesses.

use tannaka_forge::tannaka::{recognition, DiagramCategory};
use tannaka_forge::{suite, Matrix};

fn show(name: &str, d: &DiagramCategory) -> tannaka_forge::Result<()> {
    let rep = recognition::recognition_check(d, 1 << 16)?;
    println!("{name}:");
    println!("  i)   {}", rep.reflects_isos.to_json(d));
    println!("  ii)  {}", rep.cofiltered.to_json(d));
    println!("  iii) {}", rep.rigid_colimits.to_json(d));
    Ok(())
}

fn main() -> tannaka_forge::Result<()> {
    let alg = suite::alg_for(2, 2, 2);
    show("B = GR(4,2) acting on itself", &suite::full_endomorphism_diagram(&alg))?;

    let alg = suite::alg_for(2, 1, 1);
    let mut d = DiagramCategory::new(&alg);
    d.add_object("A", 1)?;
    d.add_object("B", 1)?;
    d.add_hom(0, 1, Matrix::from_ints(alg.b(), &[&[1]]))?;
    show("A -> B without inverse", &d.with_identities())?;
    show("two unrelated lines", &suite::grouplike_diagram(&alg, 2))?;
    Ok(())
}
