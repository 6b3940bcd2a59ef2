//! The comatrix coalgebra is recovered from its standard comodule.

use std::sync::Arc;

use tannaka_forge::coalgebra::Coalgebra;
use tannaka_forge::{suite, tannaka};

fn main() -> tannaka_forge::Result<()> {
    for p in [2, 3] {
        let alg = suite::alg_for(p, 1, 1);
        for r in 1..=3 {
            let c = Arc::new(Coalgebra::comatrix(&alg, r));
            let v = suite::standard_comodule(&c, r)?;
            let cu = tannaka::counit_map(&c, &[v])?;
            println!(
                "F_{p}, r = {r}: rank L = {}, ν iso {}, coalgebra map {}",
                cu.coend.rank(),
                cu.iso,
                cu.coalgebra_morphism
            );
        }
    }
    Ok(())
}
