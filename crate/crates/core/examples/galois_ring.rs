//! Arithmetic in GR(4, 2) = W_2(F_4): units, Teichmüller digits, Frobenius.

use tannaka_forge::Ring;

fn main() -> tannaka_forge::Result<()> {
    let r = Ring::new(2, 2, 2)?;
    println!("{r}: {} elements, {} units", r.size().unwrap(), r.unit_group_order());
    let a = r.parse_elem("1+3x")?;
    let b = r.parse_elem("2+x")?;
    println!("a = {}, b = {}", r.format(&a), r.format(&b));
    println!("a*b = {}, a^-1 = {}", r.format(&r.mul(&a, &b)), r.format(&r.inv(&a)?));
    println!("val(2x) = {}", r.val(&r.parse_elem("2x")?));

    let digits: Vec<String> = r.teichmuller_digits(&a).iter().map(|d| r.format(d)).collect();
    println!("a = sum 2^i [d_i] with d = {digits:?}");

    let s = r.frobenius(&a);
    println!("σ(a) = {}, σ²(a) = {}", r.format(&s), r.format(&r.frobenius(&s)));
    println!("σ(a) - a² = {} (divisible by 2)", r.format(&r.sub(&s, &r.mul(&a, &a))));
    Ok(())
}
