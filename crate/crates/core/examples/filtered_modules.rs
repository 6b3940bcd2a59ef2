//! Tate objects over W_2(F_2) = Z/4: M̄, φ̄, morphisms, a colimit and the
//! coend of the family.

use tannaka_forge::mf::{self, ColimitVerdict};
use tannaka_forge::{suite, tannaka, Matrix, Ring};

fn main() -> tannaka_forge::Result<()> {
    let w = Ring::new(2, 2, 1)?;
    let family = suite::mf_family(&w, &[&[0], &[1], &[0, 1]])?;
    for (name, x) in &family {
        let mb = mf::mbar(x)?;
        let (surj, inj) = mf::phibar_status(x)?;
        println!("{name}: len M = {}, len M̄ = {}, φ̄ onto {surj} injective {inj}", x.module().length(), mb.mbar.length());
    }
    for (a, x) in &family {
        for (b, y) in &family {
            let h = mf::mf_hom(x, y)?;
            println!("Hom({a}, {b}) ≅ exps {:?}", h.module.exps());
        }
    }

    let (_, m0) = &family[0];
    let id = Matrix::identity(&w, 1);
    let v = mf::mf_colimit_probe(&[m0.clone(), m0.clone()], &[(0, 1, id.clone()), (0, 1, id.scale(&w.from_int(3)))])?;
    match &v {
        ColimitVerdict::Verified { colimit, .. } => println!("coeq(1, 3) on M(0): exps {:?}", colimit.module().exps()),
        other => println!("coeq(1, 3) on M(0): {}", other.label()),
    }

    let d = mf::mf_to_diagram(&family)?;
    let cr = tannaka::coend(&d)?;
    println!("coend of the family: rank {}, flat {}", cr.rank(), tannaka::flatness_check(&cr.coalgebra));
    Ok(())
}
