//! Globally adaptive cubature over axis-aligned boxes.
//!
//! Each box is integrated with a tensor Gauss-Kronrod rule. Because the Gauss
//! nodes are a subset of the Kronrod nodes, one set of function values yields
//! the Kronrod estimate, the Gauss estimate, and for every axis the mixed rule
//! that uses Gauss weights along that axis only. The axis whose mixed rule
//! disagrees most with the Kronrod estimate is the one that gets bisected.
//!
//! The worklist is a max-heap on error with ties broken by creation order, and
//! a fixed number of boxes is refined per round, so the result is identical for
//! any thread count.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use rayon::prelude::*;

/// Abscissae of the 15-point Kronrod rule on `[0, 1]`, outermost first.
/// Odd positions (and the centre) are the 7-point Gauss nodes.
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const XGK7: [f64; 4] = [
    0.960_491_268_708_020_3,
    0.774_596_669_241_483_4,
    0.434_243_749_346_802_56,
    0.0,
];
const WGK7: [f64; 4] = [
    0.104_656_226_026_467_27,
    0.268_488_089_868_333_44,
    0.401_397_414_775_962_2,
    0.450_916_538_658_474_1,
];
const WG3: [f64; 2] = [0.555_555_555_555_555_6, 0.888_888_888_888_888_9];

/// A one-dimensional embedded pair on `[-1, 1]`, expanded to all nodes.
#[derive(Debug, Clone)]
pub struct EmbeddedRule {
    nodes: Vec<f64>,
    kronrod: Vec<f64>,
    /// Gauss weight at each node, zero where the node is Kronrod-only.
    gauss: Vec<f64>,
}

impl EmbeddedRule {
    fn expand(x: &[f64], wk: &[f64], wg: &[f64]) -> Self {
        let half = x.len() - 1;
        let mut nodes = Vec::with_capacity(2 * half + 1);
        let mut kronrod = Vec::with_capacity(2 * half + 1);
        let mut gauss = Vec::with_capacity(2 * half + 1);
        let gauss_at = |j: usize| -> f64 {
            // Gauss nodes sit at odd positions counted from the outside, plus the centre
            if j % 2 == 1 {
                wg[j / 2]
            } else {
                0.0
            }
        };
        for j in 0..half {
            nodes.push(-x[j]);
            kronrod.push(wk[j]);
            gauss.push(gauss_at(j));
        }
        nodes.push(0.0);
        kronrod.push(wk[half]);
        gauss.push(wg[wg.len() - 1]);
        for j in (0..half).rev() {
            nodes.push(x[j]);
            kronrod.push(wk[j]);
            gauss.push(gauss_at(j));
        }
        EmbeddedRule {
            nodes,
            kronrod,
            gauss,
        }
    }

    /// 7-point Gauss embedded in 15-point Kronrod.
    pub fn gk15() -> Self {
        Self::expand(&XGK15, &WGK15, &WG7)
    }

    /// 3-point Gauss embedded in 7-point Kronrod.
    pub fn gk7() -> Self {
        Self::expand(&XGK7, &WGK7, &WG3)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CubatureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    /// Boxes bisected per round.
    pub batch: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct CubatureOutcome {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
struct Region {
    lower: Vec<f64>,
    upper: Vec<f64>,
    value: Complex64,
    error: f64,
    split_axis: usize,
    seq: u64,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Region {}
impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn eval_region<F>(f: &F, rule: &EmbeddedRule, lower: &[f64], upper: &[f64], seq: u64) -> Region
where
    F: Fn(&[f64]) -> Complex64 + ?Sized,
{
    let k = lower.len();
    let m = rule.len();
    let centre: Vec<f64> = lower
        .iter()
        .zip(upper)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let half: Vec<f64> = lower
        .iter()
        .zip(upper)
        .map(|(a, b)| 0.5 * (b - a))
        .collect();
    let vol: f64 = half.iter().product();

    let total = m.pow(k as u32);
    let mut idx = vec![0usize; k];
    let mut x = vec![0.0; k];
    let mut values = Vec::with_capacity(total);
    let mut wk_all = Vec::with_capacity(total);

    let mut q_k = Complex64::new(0.0, 0.0);
    let mut q_g = Complex64::new(0.0, 0.0);
    let mut q_mixed = vec![Complex64::new(0.0, 0.0); k];
    let mut res_abs = 0.0;

    for _ in 0..total {
        for d in 0..k {
            x[d] = centre[d] + half[d] * rule.nodes[idx[d]];
        }
        let fx = f(&x);
        let mut wk = 1.0;
        let mut wg = 1.0;
        for d in 0..k {
            wk *= rule.kronrod[idx[d]];
            wg *= rule.gauss[idx[d]];
        }
        q_k += fx * wk;
        q_g += fx * wg;
        res_abs += fx.norm() * wk;
        for d in 0..k {
            let g = rule.gauss[idx[d]];
            if g != 0.0 {
                q_mixed[d] += fx * (wk / rule.kronrod[idx[d]] * g);
            }
        }
        values.push(fx);
        wk_all.push(wk);
        // odometer increment
        for d in (0..k).rev() {
            idx[d] += 1;
            if idx[d] < m {
                break;
            }
            idx[d] = 0;
        }
    }

    let mean = q_k / wk_all.iter().sum::<f64>();
    let res_asc: f64 = values
        .iter()
        .zip(&wk_all)
        .map(|(v, w)| (v - mean).norm() * w)
        .sum();

    let raw = (q_k - q_g).norm() * vol;
    let error = rescale_error(raw, res_abs * vol, res_asc * vol);
    let split_axis = (0..k)
        .max_by(|&a, &b| {
            let ea = (q_k - q_mixed[a]).norm();
            let eb = (q_k - q_mixed[b]).norm();
            ea.total_cmp(&eb).then_with(|| b.cmp(&a))
        })
        .unwrap_or(0);

    let value = q_k * vol;
    let error = if value.re.is_finite() && value.im.is_finite() {
        error
    } else {
        f64::INFINITY
    };
    Region {
        lower: lower.to_vec(),
        upper: upper.to_vec(),
        value,
        error,
        split_axis,
        seq,
    }
}

/// Integrate `f` over the box `[lower, upper]`.
pub fn integrate_box<F>(
    f: &F,
    lower: &[f64],
    upper: &[f64],
    rule: &EmbeddedRule,
    opts: &CubatureOptions,
) -> CubatureOutcome
where
    F: Fn(&[f64]) -> Complex64 + Sync + ?Sized,
{
    assert_eq!(lower.len(), upper.len());
    let k = lower.len();
    if k == 0 {
        let v = f(&[]);
        return CubatureOutcome {
            value: v,
            error: 0.0,
            panels: 1,
            converged: v.re.is_finite() && v.im.is_finite(),
        };
    }
    let tolerance = |v: Complex64| opts.abs_tol.max(opts.rel_tol * v.norm());

    let mut seq = 0u64;
    let first = eval_region(f, rule, lower, upper, seq);
    seq += 1;
    let mut value = first.value;
    let mut error = first.error;
    let mut panels = 1usize;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    let parallel = k >= 2;
    let mut exhausted = false;
    loop {
        if !error.is_finite() {
            break;
        }
        if error <= tolerance(value) {
            // resum to remove drift before accepting
            value = heap.iter().map(|r| r.value).sum();
            error = heap.iter().map(|r| r.error).sum();
            if error <= tolerance(value) {
                return CubatureOutcome {
                    value,
                    error,
                    panels,
                    converged: true,
                };
            }
        }
        if panels >= opts.max_panels {
            break;
        }
        let take = opts
            .batch
            .max(1)
            .min(heap.len())
            .min(opts.max_panels - panels);
        let take = take.max(1);
        let mut jobs = Vec::with_capacity(2 * take);
        for _ in 0..take {
            let Some(r) = heap.pop() else { break };
            value -= r.value;
            error -= r.error;
            let d = r.split_axis;
            let mid = 0.5 * (r.lower[d] + r.upper[d]);
            let scale = r.lower[d].abs().max(r.upper[d].abs()).max(1.0);
            if r.upper[d] - r.lower[d] <= 256.0 * f64::EPSILON * scale {
                // cannot resolve further in floating point
                value += r.value;
                error += r.error;
                heap.push(r);
                exhausted = true;
                break;
            }
            let mut left_upper = r.upper.clone();
            left_upper[d] = mid;
            let mut right_lower = r.lower.clone();
            right_lower[d] = mid;
            jobs.push((r.lower.clone(), left_upper, seq));
            jobs.push((right_lower, r.upper, seq + 1));
            seq += 2;
        }
        if exhausted && jobs.is_empty() {
            break;
        }
        let children: Vec<Region> = if parallel {
            jobs.par_iter()
                .map(|(lo, hi, s)| eval_region(f, rule, lo, hi, *s))
                .collect()
        } else {
            jobs.iter()
                .map(|(lo, hi, s)| eval_region(f, rule, lo, hi, *s))
                .collect()
        };
        for c in children {
            value += c.value;
            error += c.error;
            heap.push(c);
            panels += 1;
        }
        if error < 0.0 {
            error = heap.iter().map(|r| r.error).sum();
        }
        if exhausted {
            break;
        }
    }
    let value: Complex64 = heap.iter().map(|r| r.value).sum();
    let error: f64 = heap.iter().map(|r| r.error).sum();
    CubatureOutcome {
        value,
        error,
        panels,
        converged: !exhausted && error.is_finite() && error <= tolerance(value),
    }
}
