/// Multiplicative gradient ascent for ratio programs of the form
///
///   maximize  sum(w) / sup(w)^{1/degree}   over  w > 0,
///
/// where sup(w) is a max of constraint functionals, each homogeneous of the
/// stated degree in w. The objective is homogeneous of degree zero, so the
/// ascent searches directions only; callers rescale the answer onto the
/// constraint boundary afterwards.
pub struct RatioAscent {
    pub weights: Vec<f64>,
    pub ratio: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn ratio_ascent(
    n: usize,
    degree: f64,
    max_iter: usize,
    tol: f64,
    mut eval: impl FnMut(&[f64]) -> (f64, usize),
    mut grad: impl FnMut(&[f64], usize, &mut [f64]),
) -> RatioAscent {
    let mut w = vec![1.0f64; n];
    let ratio_of = |w: &[f64], sup: f64| -> f64 {
        let mass: f64 = w.iter().sum();
        mass / sup.powf(1.0 / degree)
    };
    let (mut sup, mut argmax) = eval(&w);
    let mut ratio = ratio_of(&w, sup);
    let mut best = RatioAscent {
        weights: w.clone(),
        ratio,
        iterations: 0,
        converged: false,
    };
    let mut g = vec![0.0f64; n];
    let mut eta = 0.25f64;
    let mut flat_steps = 0usize;
    let mut window_best = ratio;
    for iter in 0..max_iter {
        grad(&w, argmax, &mut g);
        let mass: f64 = w.iter().sum();
        // Gradient of log(ratio); multiplying by w_i preserves positivity
        // under the exponential update and makes the step dimensionless.
        let mut moved = false;
        while eta > 1e-14 {
            let cand: Vec<f64> = (0..n)
                .map(|i| {
                    let dlog = 1.0 / mass - g[i] / (degree * sup);
                    (w[i] * (eta * dlog * mass).exp()).min(1e150)
                })
                .collect();
            let (s2, a2) = eval(&cand);
            if s2 > 0.0 {
                let r2 = ratio_of(&cand, s2);
                if r2 > ratio {
                    moved = true;
                    flat_steps = if r2 <= ratio * (1.0 + tol) { flat_steps + 1 } else { 0 };
                    w = cand;
                    sup = s2;
                    argmax = a2;
                    ratio = r2;
                    eta = (eta * 1.4).min(4.0);
                    break;
                }
            }
            eta *= 0.5;
        }
        if ratio > best.ratio {
            best.weights = w.clone();
            best.ratio = ratio;
        }
        best.iterations = iter + 1;
        if !moved || flat_steps >= 4 {
            best.converged = true;
            break;
        }
        // Plateau check: the per-step gain can hover above tol while the
        // argmax cycles between tied probes, so also watch the windowed
        // progress of the incumbent.
        if (iter + 1) % 50 == 0 {
            if best.ratio <= window_best * (1.0 + 50.0 * tol) {
                best.converged = true;
                break;
            }
            window_best = best.ratio;
        }
    }
    best
}
