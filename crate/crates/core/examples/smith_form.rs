//! Diagonal normal form over Z/8, then kernel and cokernel.

use tannaka_forge::{linalg, Matrix, Ring};

fn main() -> tannaka_forge::Result<()> {
    let r = Ring::integers_mod(2, 3)?;
    let a = Matrix::from_ints(&r, &[&[2, 4, 6], &[4, 0, 4], &[6, 4, 2]]);
    let sf = linalg::smith(&a);
    println!("A = {}", a.format());
    println!("D = {}  invariants {:?}", sf.d.format(), sf.invariants);
    assert_eq!(sf.u.mul(&sf.d).mul(&sf.v), a);

    let k = linalg::kernel(&a);
    println!("kernel generators (columns): {}", k.format());
    let ck = linalg::cokernel_of(&a);
    let summands: Vec<String> = ck.exps.iter().map(|e| format!("Z/{}", 1u64 << e)).collect();
    println!("coker A = {}", summands.join(" ⊕ "));

    let b = a.mul_vec(&[r.one(), r.from_int(3), r.zero()]);
    let x = linalg::solve(&a, &b)?.expect("in the image");
    println!("A x = {:?} solved by x = {:?}", b.iter().map(|e| r.format(e)).collect::<Vec<_>>(),
        x.iter().map(|e| r.format(e)).collect::<Vec<_>>());
    Ok(())
}
