//! Finite modules over Z/4 in canonical form and a generated submodule.

use tannaka_forge::module::{FinModule, Submodule};
use tannaka_forge::{Matrix, Ring};

fn main() -> tannaka_forge::Result<()> {
    let r = Ring::integers_mod(2, 2)?;
    let m = FinModule::new(&r, &[2, 2, 1])?;
    println!("M = ⊕ Z/2^e, e = {:?}: {} elements, length {}", m.exps(), m.cardinality().unwrap(), m.length());
    let gens = Matrix::from_ints(&r, &[&[2, 1], &[0, 2], &[1, 1]]);
    let s = Submodule::generated(&m, &gens);
    println!("<g1, g2> ≅ exps {:?}, length {}", s.module().exps(), s.module().length());
    println!("projective: M {}, free part {}", m.is_projective(), FinModule::free(&r, 2).is_projective());
    let v = m.reduce(&[r.from_int(5), r.from_int(7), r.from_int(3)]);
    println!("(5, 7, 3) reduces to {:?}", v.iter().map(|e| r.format(e)).collect::<Vec<_>>());
    Ok(())
}
