//! Finite-difference gradient battery over every differentiable operation.
//!
//! Each case builds a random small instance and checks the implementation's
//! analytic gradients against central finite differences taken on an
//! independent f64 shadow evaluation of the same function (direct loops,
//! no shared code with the graph engine). The shadow is grounded by
//! asserting it agrees with the f32 forward at the base point, then supplies
//! the 64-bit accumulation the difference quotient needs for a per-entry
//! 1e-3 relative comparison.

use asr_core::numerics::{gradcheck, Graph, Tensor, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub const UNIT_TOL: f64 = 1e-3;
pub const FD_STEP: f32 = 1e-3;

/// Random tensor with entries in [lo, hi], nudged away from zero so ReLU
/// and max kinks stay clear of the finite-difference step.
pub fn rand_tensor(shape: &[usize], rng: &mut ChaCha12Rng, lo: f32, hi: f32) -> Tensor {
    let n: usize = shape.iter().product();
    let data: Vec<f32> = (0..n)
        .map(|_| {
            let mut v = rng.gen_range(lo..hi);
            if v.abs() < 0.05 {
                v += if v >= 0.0 { 0.05 } else { -0.05 };
            }
            v
        })
        .collect();
    Tensor::new(shape, data).unwrap()
}

fn widen(t: &Tensor) -> Vec<f64> {
    t.data().iter().map(|&v| f64::from(v)).collect()
}

/// Checks analytic gradients of `build`'s scalar output for every input.
///
/// `shadow` must evaluate the same scalar function from f64 copies of the
/// inputs. Returns the worst relative error observed.
pub fn check_grad<FB, FS>(inputs: &[Tensor], build: FB, shadow: FS, tol: f64) -> f64
where
    FB: Fn(&mut Graph, &[Var]) -> Var,
    FS: Fn(&[Vec<f64>]) -> f64,
{
    let mut g = Graph::new();
    let vars: Vec<Var> = inputs
        .iter()
        .map(|t| g.leaf(t.clone().requires_grad(true)))
        .collect();
    let loss = build(&mut g, &vars);
    assert_eq!(g.value(loss).numel(), 1, "loss must be scalar");
    let graph_loss = f64::from(g.value(loss).data()[0]);
    g.backward(loss).unwrap();
    let analytic: Vec<Vec<f32>> = vars.iter().map(|&v| g.grad(v)).collect();

    // Ground the shadow against the implementation at the base point.
    let base: Vec<Vec<f64>> = inputs.iter().map(widen).collect();
    let shadow_loss = shadow(&base);
    let denom = graph_loss.abs().max(shadow_loss.abs()).max(1e-3);
    assert!(
        (graph_loss - shadow_loss).abs() / denom < 2e-4,
        "shadow forward disagrees with graph forward: {graph_loss} vs {shadow_loss}"
    );

    let mut worst = 0.0f64;
    for i in 0..inputs.len() {
        let fd = gradcheck::finite_diff(
            |x| {
                let mut probe = base.clone();
                probe[i] = x.iter().map(|&v| f64::from(v)).collect();
                shadow(&probe)
            },
            inputs[i].data(),
            FD_STEP,
        );
        let err = gradcheck::max_rel_err(&analytic[i], &fd);
        assert!(
            err < tol,
            "gradient mismatch on input {i}: rel err {err:.3e} (tol {tol:.0e})"
        );
        worst = worst.max(err);
    }
    worst
}

/// Projects a tensor-valued node to a scalar with a fixed vector.
pub fn project(g: &mut Graph, v: Var, proj: &[f32]) -> Var {
    let n = g.value(v).numel();
    assert_eq!(n, proj.len());
    let flat = g.reshape(v, &[1, n]).unwrap();
    let p = g.constant(Tensor::new(&[n, 1], proj.to_vec()).unwrap());
    let prod = g.matmul(flat, p).unwrap();
    g.gather(prod, 0).unwrap()
}

fn dot64(a: &[f64], proj: &[f32]) -> f64 {
    a.iter().zip(proj).map(|(x, &p)| x * f64::from(p)).sum()
}

fn proj_vec(n: usize, rng: &mut ChaCha12Rng) -> Vec<f32> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn matmul64(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * n];
    for i in 0..m {
        for p in 0..k {
            let av = a[i * k + p];
            for j in 0..n {
                out[i * n + j] += av * b[p * n + j];
            }
        }
    }
    out
}

/// One named gradient case per differentiable operation.
pub fn op_cases() -> Vec<(&'static str, fn(u64) -> f64)> {
    vec![
        ("matmul", case_matmul),
        ("conv2d", case_conv2d),
        ("add", case_add),
        ("add_row_bias", case_add_row_bias),
        ("add_chan_bias", case_add_chan_bias),
        ("mul", case_mul),
        ("scale", case_scale),
        ("relu", case_relu),
        ("sigmoid", case_sigmoid),
        ("rsqrt", case_rsqrt),
        ("global_avg_pool", case_global_avg_pool),
        ("max_pool2d", case_max_pool2d),
        ("mean_rows", case_mean_rows),
        ("max_rows", case_max_rows),
        ("row_sum", case_row_sum),
        ("scale_rows", case_scale_rows),
        ("scale_cols", case_scale_cols),
        ("softmax", case_softmax),
        ("softmax_cross_entropy", case_softmax_xent),
        ("stack_rows", case_stack_rows),
        ("scatter_square", case_scatter_square),
        ("huber_to_const", case_huber),
        ("weighted_sum", case_weighted_sum),
    ]
}

fn case_matmul(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[4, 3], &mut rng, -1.0, 1.0);
    let b = rand_tensor(&[3, 2], &mut rng, -1.0, 1.0);
    let proj = proj_vec(8, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a, b],
        |g, v| {
            let out = g.matmul(v[0], v[1]).unwrap();
            project(g, out, &proj)
        },
        move |x| dot64(&matmul64(&x[0], &x[1], 4, 3, 2), &pr),
        UNIT_TOL,
    )
}

fn case_conv2d(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let stride = 1 + (seed % 2) as usize;
    let pad = (seed % 2) as usize;
    let (c, h, w, f, kh, kw) = (2usize, 6usize, 6usize, 3usize, 3usize, 3usize);
    let input = rand_tensor(&[c, h, w], &mut rng, -1.0, 1.0);
    let kernels = rand_tensor(&[f, c, kh, kw], &mut rng, -0.7, 0.7);
    let oh = (h + 2 * pad - kh) / stride + 1;
    let ow = (w + 2 * pad - kw) / stride + 1;
    let proj = proj_vec(f * oh * ow, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[input, kernels],
        |g, v| {
            let out = g.conv2d(v[0], v[1], stride, pad).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let (inp, ker) = (&x[0], &x[1]);
            let mut out = vec![0.0f64; f * oh * ow];
            for fi in 0..f {
                for oy in 0..oh {
                    for ox in 0..ow {
                        let mut s = 0.0;
                        for ci in 0..c {
                            for ky in 0..kh {
                                for kx in 0..kw {
                                    let iy = (oy * stride + ky) as isize - pad as isize;
                                    let ix = (ox * stride + kx) as isize - pad as isize;
                                    if iy >= 0 && iy < h as isize && ix >= 0 && ix < w as isize {
                                        s += inp[ci * h * w + iy as usize * w + ix as usize]
                                            * ker[fi * c * kh * kw + ci * kh * kw + ky * kw + kx];
                                    }
                                }
                            }
                        }
                        out[fi * oh * ow + oy * ow + ox] = s;
                    }
                }
            }
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_add(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[3, 4], &mut rng, -1.0, 1.0);
    let b = rand_tensor(&[3, 4], &mut rng, -1.0, 1.0);
    let proj = proj_vec(12, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a, b],
        |g, v| {
            let out = g.add(v[0], v[1]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let sum: Vec<f64> = x[0].iter().zip(&x[1]).map(|(p, q)| p + q).collect();
            dot64(&sum, &pr)
        },
        UNIT_TOL,
    )
}

fn case_add_row_bias(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[3, 4], &mut rng, -1.0, 1.0);
    let b = rand_tensor(&[4], &mut rng, -1.0, 1.0);
    let proj = proj_vec(12, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a, b],
        |g, v| {
            let out = g.add_row_bias(v[0], v[1]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = x[0]
                .iter()
                .enumerate()
                .map(|(i, p)| p + x[1][i % 4])
                .collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_add_chan_bias(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[3, 2, 2], &mut rng, -1.0, 1.0);
    let b = rand_tensor(&[3], &mut rng, -1.0, 1.0);
    let proj = proj_vec(12, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a, b],
        |g, v| {
            let out = g.add_chan_bias(v[0], v[1]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = x[0]
                .iter()
                .enumerate()
                .map(|(i, p)| p + x[1][i / 4])
                .collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_mul(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[2, 5], &mut rng, -1.0, 1.0);
    let b = rand_tensor(&[2, 5], &mut rng, -1.0, 1.0);
    let proj = proj_vec(10, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a, b],
        |g, v| {
            let out = g.mul(v[0], v[1]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = x[0].iter().zip(&x[1]).map(|(p, q)| p * q).collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_scale(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[7], &mut rng, -1.0, 1.0);
    let k = rng.gen_range(-2.0..2.0f32);
    let proj = proj_vec(7, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a],
        |g, v| {
            let out = g.scale(v[0], k);
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = x[0].iter().map(|p| p * f64::from(k)).collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_relu(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[3, 3], &mut rng, -1.0, 1.0);
    let proj = proj_vec(9, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a],
        |g, v| {
            let out = g.relu(v[0]);
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = x[0].iter().map(|p| p.max(0.0)).collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_sigmoid(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[6], &mut rng, -2.0, 2.0);
    let proj = proj_vec(6, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a],
        |g, v| {
            let out = g.sigmoid(v[0]);
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = x[0].iter().map(|p| 1.0 / (1.0 + (-p).exp())).collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_rsqrt(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[5], &mut rng, 0.5, 4.0);
    let proj = proj_vec(5, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a],
        |g, v| {
            let out = g.rsqrt(v[0]);
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = x[0].iter().map(|p| 1.0 / p.sqrt()).collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_global_avg_pool(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[3, 4, 4], &mut rng, -1.0, 1.0);
    let proj = proj_vec(3, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a],
        |g, v| {
            let out = g.global_avg_pool(v[0]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = (0..3)
                .map(|c| x[0][c * 16..(c + 1) * 16].iter().sum::<f64>() / 16.0)
                .collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_max_pool2d(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // Well-separated values keep the argmax stable under the FD step.
    let n = 2 * 4 * 4;
    let mut vals: Vec<f32> = (0..n).map(|i| i as f32 * 0.11 - 1.5).collect();
    for v in vals.iter_mut() {
        *v += rng.gen_range(-0.02..0.02);
    }
    let a = Tensor::new(&[2, 4, 4], vals).unwrap();
    let proj = proj_vec(2 * 2 * 2, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a],
        |g, v| {
            let out = g.max_pool2d(v[0]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let mut out = vec![f64::NEG_INFINITY; 8];
            for c in 0..2 {
                for oy in 0..2 {
                    for ox in 0..2 {
                        for dy in 0..2 {
                            for dx in 0..2 {
                                let v = x[0][c * 16 + (oy * 2 + dy) * 4 + ox * 2 + dx];
                                let o = c * 4 + oy * 2 + ox;
                                if v > out[o] {
                                    out[o] = v;
                                }
                            }
                        }
                    }
                }
            }
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_mean_rows(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[4, 3], &mut rng, -1.0, 1.0);
    let proj = proj_vec(3, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a],
        |g, v| {
            let out = g.mean_rows(v[0]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = (0..3)
                .map(|c| (0..4).map(|r| x[0][r * 3 + c]).sum::<f64>() / 4.0)
                .collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_max_rows(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut vals: Vec<f32> = (0..12).map(|i| i as f32 * 0.17 - 1.0).collect();
    for v in vals.iter_mut() {
        *v += rng.gen_range(-0.03..0.03);
    }
    let a = Tensor::new(&[4, 3], vals).unwrap();
    let proj = proj_vec(3, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a],
        |g, v| {
            let out = g.max_rows(v[0]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = (0..3)
                .map(|c| (0..4).map(|r| x[0][r * 3 + c]).fold(f64::NEG_INFINITY, f64::max))
                .collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_row_sum(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[4, 4], &mut rng, -1.0, 1.0);
    let proj = proj_vec(4, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a],
        |g, v| {
            let out = g.row_sum(v[0]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = (0..4).map(|r| x[0][r * 4..(r + 1) * 4].iter().sum()).collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_scale_rows(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[3, 4], &mut rng, -1.0, 1.0);
    let v = rand_tensor(&[3], &mut rng, -1.0, 1.0);
    let proj = proj_vec(12, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a, v],
        |g, vars| {
            let out = g.scale_rows(vars[0], vars[1]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = x[0]
                .iter()
                .enumerate()
                .map(|(i, p)| p * x[1][i / 4])
                .collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_scale_cols(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[3, 4], &mut rng, -1.0, 1.0);
    let v = rand_tensor(&[4], &mut rng, -1.0, 1.0);
    let proj = proj_vec(12, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a, v],
        |g, vars| {
            let out = g.scale_cols(vars[0], vars[1]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let out: Vec<f64> = x[0]
                .iter()
                .enumerate()
                .map(|(i, p)| p * x[1][i % 4])
                .collect();
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn softmax64(row: &[f64], out: &mut [f64]) {
    let maxv = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, x) in out.iter_mut().zip(row) {
        *o = (x - maxv).exp();
        sum += *o;
    }
    for o in out.iter_mut() {
        *o /= sum;
    }
}

fn case_softmax(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[2, 5], &mut rng, -2.0, 2.0);
    let proj = proj_vec(10, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a],
        |g, v| {
            let out = g.softmax(v[0]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let mut out = vec![0.0f64; 10];
            for r in 0..2 {
                softmax64(&x[0][r * 5..(r + 1) * 5], &mut out[r * 5..(r + 1) * 5]);
            }
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_softmax_xent(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let logits = rand_tensor(&[3, 5], &mut rng, -2.0, 2.0);
    let labels: Vec<usize> = (0..3).map(|_| rng.gen_range(0..5)).collect();
    let lab = labels.clone();
    check_grad(
        &[logits],
        |g, v| g.softmax_cross_entropy(v[0], &labels).unwrap(),
        move |x| {
            let mut loss = 0.0;
            for r in 0..3 {
                let row = &x[0][r * 5..(r + 1) * 5];
                let maxv = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lse = row.iter().map(|v| (v - maxv).exp()).sum::<f64>().ln() + maxv;
                loss += lse - row[lab[r]];
            }
            loss / 3.0
        },
        UNIT_TOL,
    )
}

fn case_stack_rows(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[4], &mut rng, -1.0, 1.0);
    let b = rand_tensor(&[4], &mut rng, -1.0, 1.0);
    let c = rand_tensor(&[4], &mut rng, -1.0, 1.0);
    let proj = proj_vec(12, &mut rng);
    let pr = proj.clone();
    check_grad(
        &[a, b, c],
        |g, v| {
            let out = g.stack_rows(&[v[0], v[1], v[2]]).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let mut out = Vec::with_capacity(12);
            for xi in x {
                out.extend_from_slice(xi);
            }
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_scatter_square(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let k = 3;
    let positions: Vec<(usize, usize)> = (0..k)
        .flat_map(|r| (0..k).filter(move |&c| c != r).map(move |c| (r, c)))
        .collect();
    let values = rand_tensor(&[positions.len()], &mut rng, 0.1, 0.9);
    let proj = proj_vec(k * k, &mut rng);
    let pr = proj.clone();
    let pos = positions.clone();
    check_grad(
        &[values],
        |g, v| {
            let out = g.scatter_square(v[0], &positions, k, 1.0).unwrap();
            project(g, out, &proj)
        },
        move |x| {
            let mut out = vec![0.0f64; k * k];
            for i in 0..k {
                out[i * k + i] = 1.0;
            }
            for (&(r, c), &v) in pos.iter().zip(&x[0]) {
                out[r * k + c] = v;
            }
            dot64(&out, &pr)
        },
        UNIT_TOL,
    )
}

fn case_huber(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[6], &mut rng, -3.0, 3.0);
    // Targets placed so |error| stays away from the delta kink.
    let targets: Vec<f32> = a
        .data()
        .iter()
        .map(|&v| v - rng.gen_range(0.2..0.8) * if rng.gen_bool(0.5) { 1.0f32 } else { -1.0 })
        .collect();
    let tg = targets.clone();
    check_grad(
        &[a],
        |g, v| g.huber_to_const(v[0], &targets, 1.0).unwrap(),
        move |x| {
            let mut loss = 0.0;
            for (p, &t) in x[0].iter().zip(&tg) {
                let e = p - f64::from(t);
                loss += if e.abs() <= 1.0 {
                    0.5 * e * e
                } else {
                    e.abs() - 0.5
                };
            }
            loss / 6.0
        },
        UNIT_TOL,
    )
}

fn case_weighted_sum(seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let a = rand_tensor(&[1], &mut rng, -1.0, 1.0);
    let b = rand_tensor(&[1], &mut rng, -1.0, 1.0);
    let (wa, wb) = (rng.gen_range(0.1..2.0f32), rng.gen_range(0.1..2.0f32));
    check_grad(
        &[a, b],
        |g, v| g.weighted_sum(&[(v[0], wa), (v[1], wb)]).unwrap(),
        move |x| x[0][0] * f64::from(wa) + x[1][0] * f64::from(wb),
        UNIT_TOL,
    )
}
