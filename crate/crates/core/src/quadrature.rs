//! Vector-valued adaptive Gauss–Kronrod (10/21 point) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("quadrature did not reach tolerance after {subdivisions} subdivisions (error estimate {error:e})")]
pub struct QuadratureFailure {
    pub subdivisions: usize,
    pub error: f64,
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525644942,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, ..., 9).
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone)]
struct Segment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: Vec<f64>,
    /// Largest per-component ratio of error to allowance at the time of the split decision.
    priority: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21<F: Fn(f64) -> Vec<f64>>(f: &F, a: f64, b: f64, dim: usize) -> (Vec<f64>, Vec<f64>) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = vec![0.0; dim];
    let mut gauss = vec![0.0; dim];
    let fc = f(c);
    for d in 0..dim {
        kronrod[d] = WGK[10] * fc[d];
    }
    for i in 0..10 {
        let x = h * XGK[i];
        let f1 = f(c - x);
        let f2 = f(c + x);
        for d in 0..dim {
            let s = f1[d] + f2[d];
            kronrod[d] += WGK[i] * s;
            if i % 2 == 1 {
                gauss[d] += WG[i / 2] * s;
            }
        }
    }
    let value: Vec<f64> = kronrod.iter().map(|k| k * h).collect();
    let error: Vec<f64> = kronrod
        .iter()
        .zip(&gauss)
        .map(|(k, g)| ((k - g) * h).abs())
        .collect();
    (value, error)
}

/// Options for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

/// Integrates the `dim`-component function `f` over the consecutive
/// intervals defined by `breakpoints` (ascending). Each component must meet
/// `max(abs_tol, rel_tol * |I|)`. Nodes never touch the breakpoints.
pub fn integrate<F>(f: F, breakpoints: &[f64], dim: usize, opts: QuadOptions) -> Result<Vec<f64>, QuadratureFailure>
where
    F: Fn(f64) -> Vec<f64>,
{
    let mut heap = BinaryHeap::new();
    let mut total = vec![0.0; dim];
    let mut total_err = vec![0.0; dim];
    for w in breakpoints.windows(2) {
        let (value, error) = gk21(&f, w[0], w[1], dim);
        for d in 0..dim {
            total[d] += value[d];
            total_err[d] += error[d];
        }
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
            priority: 0.0,
        });
    }
    let allowance = |total: &[f64], d: usize| opts.abs_tol.max(opts.rel_tol * total[d].abs());
    let reprioritize = |heap: BinaryHeap<Segment>, total: &[f64]| -> BinaryHeap<Segment> {
        heap.into_iter()
            .map(|mut s| {
                s.priority = (0..dim)
                    .map(|d| s.error[d] / allowance(total, d))
                    .fold(0.0, f64::max);
                s
            })
            .collect()
    };
    heap = reprioritize(heap, &total);
    let mut subdivisions = 0;
    let mut since_refresh = 0;
    loop {
        let converged = (0..dim).all(|d| total_err[d] <= allowance(&total, d));
        if converged {
            break;
        }
        if subdivisions >= opts.max_subdivisions {
            let worst = (0..dim)
                .map(|d| total_err[d])
                .fold(0.0, f64::max);
            return Err(QuadratureFailure {
                subdivisions,
                error: worst,
            });
        }
        let seg = heap.pop().expect("at least one segment");
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            return Err(QuadratureFailure {
                subdivisions,
                error: (0..dim).map(|d| total_err[d]).fold(0.0, f64::max),
            });
        }
        let (v1, e1) = gk21(&f, seg.a, mid, dim);
        let (v2, e2) = gk21(&f, mid, seg.b, dim);
        for d in 0..dim {
            total[d] += v1[d] + v2[d] - seg.value[d];
            total_err[d] += e1[d] + e2[d] - seg.error[d];
        }
        for (a, b, value, error) in [(seg.a, mid, v1, e1), (mid, seg.b, v2, e2)] {
            let priority = (0..dim)
                .map(|d| error[d] / allowance(&total, d))
                .fold(0.0, f64::max);
            heap.push(Segment {
                a,
                b,
                value,
                error,
                priority,
            });
        }
        subdivisions += 1;
        since_refresh += 1;
        if since_refresh == 50 {
            // Allowances move with the running total; keep priorities honest.
            heap = reprioritize(heap, &total);
            since_refresh = 0;
        }
    }
    // Re-sum in interval order so the result does not depend on refinement history.
    let mut segs = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut out = vec![0.0; dim];
    for s in &segs {
        for d in 0..dim {
            out[d] += s.value[d];
        }
    }
    Ok(out)
}
