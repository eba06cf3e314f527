//! Gauss–Legendre rules and compensated summation.

/// Nodes and weights on `[-1, 1]` for orders 1 through 5.
pub fn gauss_legendre(order: usize) -> (&'static [f64], &'static [f64]) {
    const X1: [f64; 1] = [0.0];
    const W1: [f64; 1] = [2.0];
    const X2: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];
    const W2: [f64; 2] = [1.0, 1.0];
    const X3: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const W3: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    const X4: [f64; 4] = [
        -0.861_136_311_594_052_6,
        -0.339_981_043_584_856_3,
        0.339_981_043_584_856_3,
        0.861_136_311_594_052_6,
    ];
    const W4: [f64; 4] = [
        0.347_854_845_137_453_9,
        0.652_145_154_862_546_1,
        0.652_145_154_862_546_1,
        0.347_854_845_137_453_9,
    ];
    const X5: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const W5: [f64; 5] = [
        0.236_926_885_056_189_1,
        0.478_628_670_499_366_5,
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
    ];
    match order {
        0 | 1 => (&X1, &W1),
        2 => (&X2, &W2),
        3 => (&X3, &W3),
        4 => (&X4, &W4),
        _ => (&X5, &W5),
    }
}

/// `∫_a^b g` with the Gauss rule of the given order.
pub fn gauss<F: FnMut(f64) -> f64>(a: f64, b: f64, order: usize, mut g: F) -> f64 {
    let (xs, ws) = gauss_legendre(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = 0.0;
    for (x, w) in xs.iter().zip(ws) {
        s += w * g(mid + half * x);
    }
    s * half
}

/// Composite Gauss rule over consecutive breakpoints.
pub fn gauss_composite<F: FnMut(f64) -> f64>(breaks: &[f64], order: usize, mut g: F) -> f64 {
    let parts: Vec<f64> = breaks.windows(2).map(|w| gauss(w[0], w[1], order, &mut g)).collect();
    pairwise_sum(&parts)
}

/// Pairwise summation; deterministic and with `O(log n)` error growth.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let m = v.len() / 2;
    pairwise_sum(&v[..m]) + pairwise_sum(&v[m..])
}

/// Golden-section search for the maximiser of a unimodal `g` on `[lo, hi]`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut lo: f64, mut hi: f64, tol: f64, mut g: F) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..200 {
        if (hi - lo).abs() < tol {
            break;
        }
        if gc > gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - r * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + r * (hi - lo);
            gd = g(d);
        }
    }
    if gc > gd {
        (c, gc)
    } else {
        (d, gd)
    }
}
