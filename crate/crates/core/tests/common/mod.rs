//! Independent oracles shared by the integration suites. None of these call
//! into the code they check.

#![allow(dead_code)]

/// `erf` by its Maclaurin series with compensated summation; accurate for
/// `|t| <= 3`.
pub fn erf_series(t: f64) -> f64 {
    let mut term = t;
    let mut sum = t;
    let mut comp = 0.0;
    let t2 = t * t;
    for n in 1..200 {
        term *= -t2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        let y = add - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if add.abs() < 1e-20 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

/// `erfc(t)` for `t >= 0` as `2/sqrt(pi)` times the integral of
/// `exp(-s^2)` over `[t, t + 9]`; the cut-off tail is below 1e-35.
pub fn erfc_quadrature(t: f64) -> f64 {
    2.0 / std::f64::consts::PI.sqrt() * simpson(|s| (-s * s).exp(), t, t + 9.0, 40_000)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Lognormal density written out directly.
pub fn lognormal_pdf(c: f64, n: f64, mu: f64, sigma: f64) -> f64 {
    let z = (c.ln() - mu) / sigma;
    n / (c * sigma * (2.0 * std::f64::consts::PI).sqrt()) * (-0.5 * z * z).exp()
}

/// Papers above `c0` by integrating the density in `u = ln c`, where it is a
/// smooth Gaussian bump.
pub fn papers_above(c0: f64, n: f64, mu: f64, sigma: f64) -> f64 {
    let lo = if c0 > 0.0 { c0.ln() } else { mu - 40.0 * sigma };
    let hi = mu + 40.0 * sigma;
    if lo >= hi {
        return 0.0;
    }
    simpson(
        |u| lognormal_pdf(u.exp(), n, mu, sigma) * u.exp(),
        lo,
        hi,
        20_000,
    )
}

/// Ordinary least squares of `lg y` on `lg x` from the 2x2 normal equations
/// solved by Cramer's rule. Returns `(A, alpha)`.
pub fn normal_equations_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let (mut s1, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (u, v) = (x.log10(), y.log10());
        s1 += 1.0;
        sx += u;
        sxx += u * u;
        sy += v;
        sxy += u * v;
    }
    let det = s1 * sxx - sx * sx;
    let intercept = (sy * sxx - sx * sxy) / det;
    let slope = (s1 * sxy - sx * sy) / det;
    (10f64.powf(intercept), slope)
}

/// Expected actor papers in the first `boundary` places, over every
/// ordering of the world list that is sorted by citations descending.
/// Papers are `(citations, is_actor)`. Returns `(total, orderings)` so the
/// expectation is `total / orderings`.
pub fn tie_expectation(papers: &[(u32, bool)], boundary: usize) -> (u128, u128) {
    let mut sorted = papers.to_vec();
    sorted.sort_by_key(|p| std::cmp::Reverse(p.0));
    let blocks: Vec<Vec<bool>> = sorted
        .chunk_by(|a, b| a.0 == b.0)
        .map(|blk| blk.iter().map(|p| p.1).collect())
        .collect();
    let mut total = 0u128;
    let mut orderings = 0u128;
    let mut prefix = Vec::with_capacity(papers.len());
    walk(
        &blocks,
        0,
        &mut prefix,
        boundary,
        &mut total,
        &mut orderings,
    );
    (total, orderings)
}

fn walk(
    blocks: &[Vec<bool>],
    i: usize,
    prefix: &mut Vec<bool>,
    boundary: usize,
    total: &mut u128,
    orderings: &mut u128,
) {
    if i == blocks.len() {
        *orderings += 1;
        *total += prefix[..boundary].iter().filter(|a| **a).count() as u128;
        return;
    }
    let base = prefix.len();
    for perm in permutations(blocks[i].len()) {
        prefix.truncate(base);
        prefix.extend(perm.iter().map(|&k| blocks[i][k]));
        walk(blocks, i + 1, prefix, boundary, total, orderings);
    }
    prefix.truncate(base);
}

/// All permutations of `0..n` by Heap's algorithm.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// Every world list of `n` papers over citation values `0..values` with
/// every choice of how many papers at each value belong to the actor, up to
/// reordering. Papers are `(citations, is_actor)`.
pub fn tie_fixtures(n: usize, values: u32) -> Vec<Vec<(u32, bool)>> {
    let mut out = Vec::new();
    let mut counts = vec![0usize; values as usize];
    compositions(n, 0, &mut counts, &mut |counts| {
        let mut actors = vec![0usize; counts.len()];
        loop {
            let mut papers = Vec::with_capacity(n);
            for (v, (&k, &a)) in counts.iter().zip(&actors).enumerate() {
                for j in 0..k {
                    papers.push((v as u32, j < a));
                }
            }
            out.push(papers);
            let mut i = 0;
            loop {
                if i == actors.len() {
                    return;
                }
                if actors[i] < counts[i] {
                    actors[i] += 1;
                    break;
                }
                actors[i] = 0;
                i += 1;
            }
        }
    });
    out
}

fn compositions(left: usize, i: usize, counts: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if i + 1 == counts.len() {
        counts[i] = left;
        f(counts);
        return;
    }
    for k in 0..=left {
        counts[i] = k;
        compositions(left - k, i + 1, counts, f);
    }
}

/// Percentile whose boundary in a world of `n` is exactly `b` papers.
pub fn percentile_for_boundary(b: usize, n: usize) -> f64 {
    100.0 * b as f64 / n as f64
}
