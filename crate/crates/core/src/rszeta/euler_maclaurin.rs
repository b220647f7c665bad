use num_complex::Complex64;

use crate::sum::NeumaierSum;

// B_{2k} / (2k)! for k = 1..=15.
const BERNOULLI_OVER_FACTORIAL: [f64; 15] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    3.3068783068783069e-5,
    -8.2671957671957672e-7,
    2.0876756987868099e-8,
    -5.2841901386874932e-10,
    1.3382536530684679e-11,
    -3.3896802963225829e-13,
    8.5860620562778446e-15,
    -2.1748686985580619e-16,
    5.5090028283602295e-18,
    -1.3954464685812523e-19,
    3.5347070396294675e-21,
    -8.9535174270375469e-23,
    2.2679524523376831e-24,
];

/// Largest accepted correction depth.
pub const MAX_CORRECTIONS: usize = BERNOULLI_OVER_FACTORIAL.len();

/// ζ(s) by Euler–Maclaurin summation with `cutoff` explicit terms and
/// `corrections` Bernoulli tail terms.
pub fn zeta_euler_maclaurin(s: Complex64, cutoff: usize, corrections: usize) -> Complex64 {
    let n_cut = cutoff.max(2);
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for n in 1..n_cut {
        let ln_n = (n as f64).ln();
        let mag = (-s.re * ln_n).exp();
        let (sin, cos) = (s.im * ln_n).sin_cos();
        re.add(mag * cos);
        im.add(-mag * sin);
    }
    let nf = n_cut as f64;
    let ln_nf = nf.ln();
    let n_pow_neg_s = Complex64::from_polar((-s.re * ln_nf).exp(), -s.im * ln_nf);
    let mut tail = n_pow_neg_s * nf / (s - 1.0) + 0.5 * n_pow_neg_s;

    // Term k: B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s;
    let mut power = n_pow_neg_s / nf;
    for (k, c) in BERNOULLI_OVER_FACTORIAL.iter().take(corrections).enumerate() {
        if k > 0 {
            let j = (2 * k) as f64;
            rising *= (s + (j - 1.0)) * (s + j);
            power /= nf * nf;
        }
        tail += rising * power * *c;
    }
    re.add(tail.re);
    im.add(tail.im);
    Complex64::new(re.value(), im.value())
}
