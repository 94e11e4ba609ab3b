use zeta_forms_core::forms::*;
fn main() {
    for n in 4..=21usize {
        let t = apery_zeta3_form(n, 80);
        let v = t.abs_upper();
        // crude decimal of the n-th root via f64
        let f: f64 = v.numer().to_string().parse::<f64>().unwrap() / v.denom().to_string().parse::<f64>().unwrap();
        println!("n={:2} t={:.3e} root={:.6}", n, f, f.powf(1.0 / n as f64));
    }
}
