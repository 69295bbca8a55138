//! Define-by-run computation graph with reverse-mode differentiation.
//!
//! Nodes are appended in execution order, so the node index order is a
//! valid topological order: backward walks the node list once in reverse,
//! visiting each node after all of its consumers.

use super::{NumericsError, Result, Tensor};

/// Handle to a node in a [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

struct Node {
    value: Tensor,
    grad: Option<Vec<f32>>,
    needs_grad: bool,
    op: Op,
}

enum Op {
    Leaf,
    MatMul {
        a: Var,
        b: Var,
    },
    Add {
        a: Var,
        b: Var,
    },
    /// `[m x n] + [n]`, bias broadcast over rows.
    AddRowBias {
        a: Var,
        bias: Var,
    },
    /// `[C x H x W] + [C]`, bias broadcast over each channel plane.
    AddChanBias {
        a: Var,
        bias: Var,
        plane: usize,
    },
    Mul {
        a: Var,
        b: Var,
    },
    Scale {
        a: Var,
        k: f32,
    },
    Relu {
        a: Var,
    },
    Sigmoid {
        a: Var,
    },
    Rsqrt {
        a: Var,
    },
    Conv2d {
        kernels: Var,
        input: Var,
        cols: Vec<f32>,
        kdims: (usize, usize, usize, usize),
        in_hw: (usize, usize),
        out_hw: (usize, usize),
        stride: usize,
        pad: usize,
    },
    GlobalAvgPool {
        a: Var,
        plane: usize,
    },
    MaxPool2d {
        a: Var,
        argmax: Vec<usize>,
    },
    MeanRows {
        a: Var,
    },
    MaxRows {
        a: Var,
        argmax: Vec<usize>,
    },
    RowSum {
        a: Var,
    },
    ScaleRows {
        a: Var,
        v: Var,
    },
    ScaleCols {
        a: Var,
        v: Var,
    },
    Softmax {
        a: Var,
    },
    SoftmaxXent {
        logits: Var,
        labels: Vec<usize>,
        probs: Vec<f32>,
    },
    StackRows {
        parts: Vec<Var>,
    },
    ScatterSquare {
        values: Var,
        positions: Vec<(usize, usize)>,
        k: usize,
    },
    Gather {
        a: Var,
        index: usize,
    },
    HuberToConst {
        a: Var,
        targets: Vec<f32>,
        delta: f32,
    },
    WeightedSum {
        terms: Vec<(Var, f32)>,
    },
    Reshape {
        a: Var,
    },
}

/// A recorded computation: build ops forward, then call [`Graph::backward`].
#[derive(Default)]
pub struct Graph {
    nodes: Vec<Node>,
}

impl Graph {
    pub fn new() -> Self {
        Self { nodes: Vec::new() }
    }

    fn push(&mut self, value: Tensor, needs_grad: bool, op: Op) -> Var {
        self.nodes.push(Node {
            value,
            grad: None,
            needs_grad,
            op,
        });
        Var(self.nodes.len() - 1)
    }

    fn needs(&self, v: Var) -> bool {
        self.nodes[v.0].needs_grad
    }

    /// Inserts a tensor as a leaf; gradients are tracked iff the tensor's
    /// `requires_grad` flag is set.
    pub fn leaf(&mut self, tensor: Tensor) -> Var {
        let needs = tensor.wants_grad();
        self.push(tensor, needs, Op::Leaf)
    }

    /// Constant leaf regardless of the tensor flag.
    pub fn constant(&mut self, tensor: Tensor) -> Var {
        self.push(tensor.requires_grad(false), false, Op::Leaf)
    }

    pub fn value(&self, v: Var) -> &Tensor {
        &self.nodes[v.0].value
    }

    pub fn shape(&self, v: Var) -> &[usize] {
        self.nodes[v.0].value.shape()
    }

    /// Gradient of the last `backward` root with respect to `v`.
    ///
    /// Zero-filled if the node participates but received no gradient.
    pub fn grad(&self, v: Var) -> Vec<f32> {
        match &self.nodes[v.0].grad {
            Some(g) => g.clone(),
            None => vec![0.0; self.nodes[v.0].value.numel()],
        }
    }

    // ── ops ──────────────────────────────────────────────────────────

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let (sa, sb) = (self.shape(a).to_vec(), self.shape(b).to_vec());
        if sa.len() != 2 || sb.len() != 2 || sa[1] != sb[0] {
            return Err(NumericsError::DimensionMismatch {
                op: "matmul",
                lhs: sa,
                rhs: sb,
            });
        }
        let (m, k, n) = (sa[0], sa[1], sb[1]);
        let mut out = vec![0.0f32; m * n];
        matmul_raw(
            self.value(a).data(),
            self.value(b).data(),
            m,
            k,
            n,
            &mut out,
        );
        let needs = self.needs(a) || self.needs(b);
        Ok(self.push(
            Tensor::new(&[m, n], out)?,
            needs,
            Op::MatMul { a, b },
        ))
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        if self.shape(a) != self.shape(b) {
            return Err(NumericsError::DimensionMismatch {
                op: "add",
                lhs: self.shape(a).to_vec(),
                rhs: self.shape(b).to_vec(),
            });
        }
        let data: Vec<f32> = self
            .value(a)
            .data()
            .iter()
            .zip(self.value(b).data())
            .map(|(x, y)| x + y)
            .collect();
        let shape = self.shape(a).to_vec();
        let needs = self.needs(a) || self.needs(b);
        Ok(self.push(Tensor::new(&shape, data)?, needs, Op::Add { a, b }))
    }

    /// `[m x n] + [n]` row-broadcast bias.
    pub fn add_row_bias(&mut self, a: Var, bias: Var) -> Result<Var> {
        let (sa, sb) = (self.shape(a).to_vec(), self.shape(bias).to_vec());
        if sa.len() != 2 || sb.len() != 1 || sa[1] != sb[0] {
            return Err(NumericsError::DimensionMismatch {
                op: "add_row_bias",
                lhs: sa,
                rhs: sb,
            });
        }
        let n = sa[1];
        let bd = self.value(bias).data().to_vec();
        let data: Vec<f32> = self
            .value(a)
            .data()
            .iter()
            .enumerate()
            .map(|(i, x)| x + bd[i % n])
            .collect();
        let needs = self.needs(a) || self.needs(bias);
        Ok(self.push(
            Tensor::new(&sa, data)?,
            needs,
            Op::AddRowBias { a, bias },
        ))
    }

    /// `[C x H x W] + [C]` channel bias.
    pub fn add_chan_bias(&mut self, a: Var, bias: Var) -> Result<Var> {
        let (sa, sb) = (self.shape(a).to_vec(), self.shape(bias).to_vec());
        if sa.len() != 3 || sb.len() != 1 || sa[0] != sb[0] {
            return Err(NumericsError::DimensionMismatch {
                op: "add_chan_bias",
                lhs: sa,
                rhs: sb,
            });
        }
        let plane = sa[1] * sa[2];
        let bd = self.value(bias).data().to_vec();
        let data: Vec<f32> = self
            .value(a)
            .data()
            .iter()
            .enumerate()
            .map(|(i, x)| x + bd[i / plane])
            .collect();
        let needs = self.needs(a) || self.needs(bias);
        Ok(self.push(
            Tensor::new(&sa, data)?,
            needs,
            Op::AddChanBias { a, bias, plane },
        ))
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var> {
        if self.shape(a) != self.shape(b) {
            return Err(NumericsError::DimensionMismatch {
                op: "mul",
                lhs: self.shape(a).to_vec(),
                rhs: self.shape(b).to_vec(),
            });
        }
        let data: Vec<f32> = self
            .value(a)
            .data()
            .iter()
            .zip(self.value(b).data())
            .map(|(x, y)| x * y)
            .collect();
        let shape = self.shape(a).to_vec();
        let needs = self.needs(a) || self.needs(b);
        Ok(self.push(Tensor::new(&shape, data)?, needs, Op::Mul { a, b }))
    }

    pub fn scale(&mut self, a: Var, k: f32) -> Var {
        let data: Vec<f32> = self.value(a).data().iter().map(|x| x * k).collect();
        let shape = self.shape(a).to_vec();
        let needs = self.needs(a);
        self.push(
            Tensor::new(&shape, data).expect("same shape"),
            needs,
            Op::Scale { a, k },
        )
    }

    pub fn relu(&mut self, a: Var) -> Var {
        let data: Vec<f32> = self.value(a).data().iter().map(|x| x.max(0.0)).collect();
        let shape = self.shape(a).to_vec();
        let needs = self.needs(a);
        self.push(
            Tensor::new(&shape, data).expect("same shape"),
            needs,
            Op::Relu { a },
        )
    }

    pub fn sigmoid(&mut self, a: Var) -> Var {
        let data: Vec<f32> = self
            .value(a)
            .data()
            .iter()
            .map(|x| 1.0 / (1.0 + (-x).exp()))
            .collect();
        let shape = self.shape(a).to_vec();
        let needs = self.needs(a);
        self.push(
            Tensor::new(&shape, data).expect("same shape"),
            needs,
            Op::Sigmoid { a },
        )
    }

    /// Elementwise `1/sqrt(x)`; inputs must be strictly positive.
    pub fn rsqrt(&mut self, a: Var) -> Var {
        let data: Vec<f32> = self
            .value(a)
            .data()
            .iter()
            .map(|x| 1.0 / x.max(1e-12).sqrt())
            .collect();
        let shape = self.shape(a).to_vec();
        let needs = self.needs(a);
        self.push(
            Tensor::new(&shape, data).expect("same shape"),
            needs,
            Op::Rsqrt { a },
        )
    }

    /// 2D cross-correlation: input `[C x H x W]`, kernels `[F x C x kh x kw]`.
    ///
    /// Output height is `(H + 2 pad - kh) / stride + 1`, same for width.
    pub fn conv2d(&mut self, input: Var, kernels: Var, stride: usize, pad: usize) -> Result<Var> {
        let si = self.shape(input).to_vec();
        let sk = self.shape(kernels).to_vec();
        if si.len() != 3 || sk.len() != 4 || si[0] != sk[1] {
            return Err(NumericsError::DimensionMismatch {
                op: "conv2d",
                lhs: si,
                rhs: sk,
            });
        }
        let (c, h, w) = (si[0], si[1], si[2]);
        let (f, kh, kw) = (sk[0], sk[2], sk[3]);
        if kh > h + 2 * pad || kw > w + 2 * pad || stride == 0 {
            return Err(NumericsError::InvalidShape {
                op: "conv2d",
                shape: sk,
                reason: format!("kernel {kh}x{kw} larger than padded input {h}x{w} + 2*{pad}, or stride 0"),
            });
        }
        let oh = (h + 2 * pad - kh) / stride + 1;
        let ow = (w + 2 * pad - kw) / stride + 1;
        let mut cols = vec![0.0f32; c * kh * kw * oh * ow];
        im2col(
            self.value(input).data(),
            c,
            h,
            w,
            kh,
            kw,
            stride,
            pad,
            oh,
            ow,
            &mut cols,
        );
        let mut out = vec![0.0f32; f * oh * ow];
        matmul_raw(
            self.value(kernels).data(),
            &cols,
            f,
            c * kh * kw,
            oh * ow,
            &mut out,
        );
        let needs = self.needs(input) || self.needs(kernels);
        Ok(self.push(
            Tensor::new(&[f, oh, ow], out)?,
            needs,
            Op::Conv2d {
                kernels,
                input,
                cols,
                kdims: (f, c, kh, kw),
                in_hw: (h, w),
                out_hw: (oh, ow),
                stride,
                pad,
            },
        ))
    }

    /// `[C x H x W]` -> `[C]` mean over each channel plane.
    pub fn global_avg_pool(&mut self, a: Var) -> Result<Var> {
        let s = self.shape(a).to_vec();
        if s.len() != 3 {
            return Err(NumericsError::InvalidShape {
                op: "global_avg_pool",
                shape: s,
                reason: "expected rank 3".into(),
            });
        }
        let plane = s[1] * s[2];
        let data: Vec<f32> = (0..s[0])
            .map(|ci| {
                let sl = &self.value(a).data()[ci * plane..(ci + 1) * plane];
                sl.iter().sum::<f32>() / plane as f32
            })
            .collect();
        let needs = self.needs(a);
        Ok(self.push(
            Tensor::new(&[s[0]], data)?,
            needs,
            Op::GlobalAvgPool { a, plane },
        ))
    }

    /// Non-overlapping 2x2 max pool over `[C x H x W]` (H, W even).
    pub fn max_pool2d(&mut self, a: Var) -> Result<Var> {
        let s = self.shape(a).to_vec();
        if s.len() != 3 || s[1] % 2 != 0 || s[2] % 2 != 0 {
            return Err(NumericsError::InvalidShape {
                op: "max_pool2d",
                shape: s,
                reason: "expected rank 3 with even H, W".into(),
            });
        }
        let (c, h, w) = (s[0], s[1], s[2]);
        let (oh, ow) = (h / 2, w / 2);
        let src = self.value(a).data();
        let mut out = vec![0.0f32; c * oh * ow];
        let mut argmax = vec![0usize; c * oh * ow];
        for ci in 0..c {
            for oy in 0..oh {
                for ox in 0..ow {
                    let mut best = f32::NEG_INFINITY;
                    let mut best_idx = 0;
                    for dy in 0..2 {
                        for dx in 0..2 {
                            let idx = ci * h * w + (oy * 2 + dy) * w + ox * 2 + dx;
                            if src[idx] > best {
                                best = src[idx];
                                best_idx = idx;
                            }
                        }
                    }
                    let o = ci * oh * ow + oy * ow + ox;
                    out[o] = best;
                    argmax[o] = best_idx;
                }
            }
        }
        let needs = self.needs(a);
        Ok(self.push(
            Tensor::new(&[c, oh, ow], out)?,
            needs,
            Op::MaxPool2d { a, argmax },
        ))
    }

    /// `[k x d]` -> `[d]` mean over rows (node-axis mean pool).
    pub fn mean_rows(&mut self, a: Var) -> Result<Var> {
        let s = self.shape(a).to_vec();
        if s.len() != 2 || s[0] == 0 {
            return Err(NumericsError::InvalidShape {
                op: "mean_rows",
                shape: s,
                reason: "expected non-empty rank-2".into(),
            });
        }
        let (k, d) = (s[0], s[1]);
        let src = self.value(a).data();
        let mut out = vec![0.0f32; d];
        for r in 0..k {
            for c in 0..d {
                out[c] += src[r * d + c];
            }
        }
        for v in &mut out {
            *v /= k as f32;
        }
        let needs = self.needs(a);
        Ok(self.push(Tensor::new(&[d], out)?, needs, Op::MeanRows { a }))
    }

    /// `[k x d]` -> `[d]` max over rows (node-axis max pool).
    pub fn max_rows(&mut self, a: Var) -> Result<Var> {
        let s = self.shape(a).to_vec();
        if s.len() != 2 || s[0] == 0 {
            return Err(NumericsError::InvalidShape {
                op: "max_rows",
                shape: s,
                reason: "expected non-empty rank-2".into(),
            });
        }
        let (k, d) = (s[0], s[1]);
        let src = self.value(a).data();
        let mut out = vec![f32::NEG_INFINITY; d];
        let mut argmax = vec![0usize; d];
        for r in 0..k {
            for c in 0..d {
                if src[r * d + c] > out[c] {
                    out[c] = src[r * d + c];
                    argmax[c] = r * d + c;
                }
            }
        }
        let needs = self.needs(a);
        Ok(self.push(
            Tensor::new(&[d], out)?,
            needs,
            Op::MaxRows { a, argmax },
        ))
    }

    /// `[k x k]` -> `[k]` row sums (degree vector of an adjacency).
    pub fn row_sum(&mut self, a: Var) -> Result<Var> {
        let s = self.shape(a).to_vec();
        if s.len() != 2 {
            return Err(NumericsError::InvalidShape {
                op: "row_sum",
                shape: s,
                reason: "expected rank 2".into(),
            });
        }
        let (k, n) = (s[0], s[1]);
        let src = self.value(a).data();
        let out: Vec<f32> = (0..k).map(|r| src[r * n..(r + 1) * n].iter().sum()).collect();
        let needs = self.needs(a);
        Ok(self.push(Tensor::new(&[k], out)?, needs, Op::RowSum { a }))
    }

    /// `out[i, j] = a[i, j] * v[i]`.
    pub fn scale_rows(&mut self, a: Var, v: Var) -> Result<Var> {
        let (sa, sv) = (self.shape(a).to_vec(), self.shape(v).to_vec());
        if sa.len() != 2 || sv.len() != 1 || sa[0] != sv[0] {
            return Err(NumericsError::DimensionMismatch {
                op: "scale_rows",
                lhs: sa,
                rhs: sv,
            });
        }
        let n = sa[1];
        let vd = self.value(v).data().to_vec();
        let data: Vec<f32> = self
            .value(a)
            .data()
            .iter()
            .enumerate()
            .map(|(i, x)| x * vd[i / n])
            .collect();
        let needs = self.needs(a) || self.needs(v);
        Ok(self.push(Tensor::new(&sa, data)?, needs, Op::ScaleRows { a, v }))
    }

    /// `out[i, j] = a[i, j] * v[j]`.
    pub fn scale_cols(&mut self, a: Var, v: Var) -> Result<Var> {
        let (sa, sv) = (self.shape(a).to_vec(), self.shape(v).to_vec());
        if sa.len() != 2 || sv.len() != 1 || sa[1] != sv[0] {
            return Err(NumericsError::DimensionMismatch {
                op: "scale_cols",
                lhs: sa,
                rhs: sv,
            });
        }
        let n = sa[1];
        let vd = self.value(v).data().to_vec();
        let data: Vec<f32> = self
            .value(a)
            .data()
            .iter()
            .enumerate()
            .map(|(i, x)| x * vd[i % n])
            .collect();
        let needs = self.needs(a) || self.needs(v);
        Ok(self.push(Tensor::new(&sa, data)?, needs, Op::ScaleCols { a, v }))
    }

    /// Row-wise softmax of a `[m x n]` tensor (or a rank-1 vector).
    pub fn softmax(&mut self, a: Var) -> Result<Var> {
        let s = self.shape(a).to_vec();
        let (m, n) = match s.len() {
            1 => (1, s[0]),
            2 => (s[0], s[1]),
            _ => {
                return Err(NumericsError::InvalidShape {
                    op: "softmax",
                    shape: s,
                    reason: "expected rank 1 or 2".into(),
                })
            }
        };
        if n == 0 {
            return Err(NumericsError::InvalidShape {
                op: "softmax",
                shape: s,
                reason: "softmax over empty axis".into(),
            });
        }
        let src = self.value(a).data();
        let mut data = vec![0.0f32; m * n];
        for r in 0..m {
            softmax_row(&src[r * n..(r + 1) * n], &mut data[r * n..(r + 1) * n]);
        }
        let needs = self.needs(a);
        Ok(self.push(Tensor::new(&s, data)?, needs, Op::Softmax { a }))
    }

    /// Mean softmax cross-entropy of `[m x n]` logits against class labels.
    pub fn softmax_cross_entropy(&mut self, logits: Var, labels: &[usize]) -> Result<Var> {
        let s = self.shape(logits).to_vec();
        if s.len() != 2 || s[0] != labels.len() || s[1] == 0 {
            return Err(NumericsError::InvalidShape {
                op: "softmax_cross_entropy",
                shape: s,
                reason: format!("expected [m x n] logits with m == {} labels", labels.len()),
            });
        }
        let (m, n) = (s[0], s[1]);
        let src = self.value(logits).data();
        let mut probs = vec![0.0f32; m * n];
        let mut loss = 0.0f64;
        for r in 0..m {
            let row = &src[r * n..(r + 1) * n];
            softmax_row(row, &mut probs[r * n..(r + 1) * n]);
            let maxv = row.iter().cloned().fold(f32::NEG_INFINITY, f32::max);
            let lse: f32 = row.iter().map(|x| (x - maxv).exp()).sum::<f32>().ln() + maxv;
            loss += f64::from(lse - row[labels[r]]);
        }
        let value = (loss / m as f64) as f32;
        let needs = self.needs(logits);
        Ok(self.push(
            Tensor::scalar(value),
            needs,
            Op::SoftmaxXent {
                logits,
                labels: labels.to_vec(),
                probs,
            },
        ))
    }

    /// Stacks rank-1 `[d]` (or `[1 x d]`) vars into a `[k x d]` matrix.
    pub fn stack_rows(&mut self, parts: &[Var]) -> Result<Var> {
        if parts.is_empty() {
            return Err(NumericsError::InvalidShape {
                op: "stack_rows",
                shape: vec![0],
                reason: "no rows".into(),
            });
        }
        let d = self.value(parts[0]).numel();
        let mut data = Vec::with_capacity(parts.len() * d);
        let mut needs = false;
        for &p in parts {
            if self.value(p).numel() != d {
                return Err(NumericsError::DimensionMismatch {
                    op: "stack_rows",
                    lhs: vec![d],
                    rhs: self.shape(p).to_vec(),
                });
            }
            needs |= self.needs(p);
            data.extend_from_slice(self.value(p).data());
        }
        Ok(self.push(
            Tensor::new(&[parts.len(), d], data)?,
            needs,
            Op::StackRows {
                parts: parts.to_vec(),
            },
        ))
    }

    /// Builds a `[k x k]` matrix with `diag` on the diagonal and the given
    /// values scattered at off-diagonal positions. Unset entries are zero.
    pub fn scatter_square(
        &mut self,
        values: Var,
        positions: &[(usize, usize)],
        k: usize,
        diag: f32,
    ) -> Result<Var> {
        if self.value(values).numel() != positions.len() {
            return Err(NumericsError::DimensionMismatch {
                op: "scatter_square",
                lhs: self.shape(values).to_vec(),
                rhs: vec![positions.len()],
            });
        }
        let mut data = vec![0.0f32; k * k];
        for i in 0..k {
            data[i * k + i] = diag;
        }
        for (&(r, c), &v) in positions.iter().zip(self.value(values).data()) {
            assert!(r < k && c < k && r != c, "scatter_square: bad position");
            data[r * k + c] = v;
        }
        let needs = self.needs(values);
        Ok(self.push(
            Tensor::new(&[k, k], data)?,
            needs,
            Op::ScatterSquare {
                values,
                positions: positions.to_vec(),
                k,
            },
        ))
    }

    /// Extracts one element of a flat tensor as a scalar node.
    pub fn gather(&mut self, a: Var, index: usize) -> Result<Var> {
        if index >= self.value(a).numel() {
            return Err(NumericsError::InvalidShape {
                op: "gather",
                shape: self.shape(a).to_vec(),
                reason: format!("index {index} out of range"),
            });
        }
        let v = self.value(a).data()[index];
        let needs = self.needs(a);
        Ok(self.push(Tensor::scalar(v), needs, Op::Gather { a, index }))
    }

    /// Mean Huber loss of a flat prediction vector against fixed targets.
    pub fn huber_to_const(&mut self, a: Var, targets: &[f32], delta: f32) -> Result<Var> {
        if self.value(a).numel() != targets.len() {
            return Err(NumericsError::DimensionMismatch {
                op: "huber_to_const",
                lhs: self.shape(a).to_vec(),
                rhs: vec![targets.len()],
            });
        }
        let mut loss = 0.0f64;
        for (p, t) in self.value(a).data().iter().zip(targets) {
            let e = p - t;
            loss += if e.abs() <= delta {
                0.5 * f64::from(e) * f64::from(e)
            } else {
                f64::from(delta) * (f64::from(e.abs()) - 0.5 * f64::from(delta))
            };
        }
        let value = (loss / targets.len() as f64) as f32;
        let needs = self.needs(a);
        Ok(self.push(
            Tensor::scalar(value),
            needs,
            Op::HuberToConst {
                a,
                targets: targets.to_vec(),
                delta,
            },
        ))
    }

    /// Scalar `sum_i w_i * term_i`; every term must be a scalar node.
    pub fn weighted_sum(&mut self, terms: &[(Var, f32)]) -> Result<Var> {
        let mut value = 0.0f64;
        let mut needs = false;
        for &(v, w) in terms {
            if self.value(v).numel() != 1 {
                return Err(NumericsError::InvalidShape {
                    op: "weighted_sum",
                    shape: self.shape(v).to_vec(),
                    reason: "terms must be scalars".into(),
                });
            }
            value += f64::from(self.value(v).data()[0]) * f64::from(w);
            needs |= self.needs(v);
        }
        Ok(self.push(
            Tensor::scalar(value as f32),
            needs,
            Op::WeightedSum {
                terms: terms.to_vec(),
            },
        ))
    }

    /// Shape-only view with identical data.
    pub fn reshape(&mut self, a: Var, shape: &[usize]) -> Result<Var> {
        let t = self.value(a).clone().reshaped(shape)?;
        let needs = self.needs(a);
        Ok(self.push(t, needs, Op::Reshape { a }))
    }

    // ── backward ─────────────────────────────────────────────────────

    /// Backpropagates from a scalar root, filling gradients of every node
    /// that requires them. Each node is visited exactly once.
    pub fn backward(&mut self, root: Var) -> Result<()> {
        if self.nodes[root.0].value.numel() != 1 {
            return Err(NumericsError::InvalidShape {
                op: "backward",
                shape: self.nodes[root.0].value.shape().to_vec(),
                reason: "root must be scalar".into(),
            });
        }
        for node in &mut self.nodes {
            node.grad = None;
        }
        self.nodes[root.0].grad = Some(vec![1.0]);
        for idx in (0..=root.0).rev() {
            if self.nodes[idx].grad.is_none() || !self.nodes[idx].needs_grad {
                continue;
            }
            self.propagate(idx)?;
        }
        Ok(())
    }

    fn add_grad(&mut self, v: Var, contrib: &[f32]) {
        if !self.nodes[v.0].needs_grad {
            return;
        }
        let numel = self.nodes[v.0].value.numel();
        let g = self.nodes[v.0].grad.get_or_insert_with(|| vec![0.0; numel]);
        debug_assert_eq!(g.len(), contrib.len());
        for (gv, cv) in g.iter_mut().zip(contrib) {
            *gv += cv;
        }
    }

    fn propagate(&mut self, idx: usize) -> Result<()> {
        // Take the op out so we can borrow self mutably while dispatching.
        let grad = self.nodes[idx].grad.clone().expect("grad present");
        let op = std::mem::replace(&mut self.nodes[idx].op, Op::Leaf);
        match &op {
            Op::Leaf => {}
            Op::MatMul { a, b } => {
                let (m, k) = (self.shape(*a)[0], self.shape(*a)[1]);
                let n = self.shape(*b)[1];
                if self.needs(*a) {
                    // dA = dOut . B^T
                    let mut da = vec![0.0f32; m * k];
                    let bd = self.value(*b).data();
                    for i in 0..m {
                        for p in 0..k {
                            let mut s = 0.0;
                            let brow = &bd[p * n..(p + 1) * n];
                            let grow = &grad[i * n..(i + 1) * n];
                            for j in 0..n {
                                s += grow[j] * brow[j];
                            }
                            da[i * k + p] = s;
                        }
                    }
                    self.add_grad(*a, &da);
                }
                if self.needs(*b) {
                    // dB = A^T . dOut
                    let mut db = vec![0.0f32; k * n];
                    let ad = self.value(*a).data().to_vec();
                    for i in 0..m {
                        for p in 0..k {
                            let av = ad[i * k + p];
                            if av == 0.0 {
                                continue;
                            }
                            let grow = &grad[i * n..(i + 1) * n];
                            let drow = &mut db[p * n..(p + 1) * n];
                            for j in 0..n {
                                drow[j] += av * grow[j];
                            }
                        }
                    }
                    self.add_grad(*b, &db);
                }
            }
            Op::Add { a, b } => {
                self.add_grad(*a, &grad);
                self.add_grad(*b, &grad);
            }
            Op::AddRowBias { a, bias } => {
                self.add_grad(*a, &grad);
                if self.needs(*bias) {
                    let n = self.value(*bias).numel();
                    let mut db = vec![0.0f32; n];
                    for (i, g) in grad.iter().enumerate() {
                        db[i % n] += g;
                    }
                    self.add_grad(*bias, &db);
                }
            }
            Op::AddChanBias { a, bias, plane } => {
                self.add_grad(*a, &grad);
                if self.needs(*bias) {
                    let n = self.value(*bias).numel();
                    let mut db = vec![0.0f32; n];
                    for (i, g) in grad.iter().enumerate() {
                        db[i / plane] += g;
                    }
                    self.add_grad(*bias, &db);
                }
            }
            Op::Mul { a, b } => {
                if self.needs(*a) {
                    let da: Vec<f32> = grad
                        .iter()
                        .zip(self.value(*b).data())
                        .map(|(g, y)| g * y)
                        .collect();
                    self.add_grad(*a, &da);
                }
                if self.needs(*b) {
                    let db: Vec<f32> = grad
                        .iter()
                        .zip(self.value(*a).data())
                        .map(|(g, x)| g * x)
                        .collect();
                    self.add_grad(*b, &db);
                }
            }
            Op::Scale { a, k } => {
                let da: Vec<f32> = grad.iter().map(|g| g * k).collect();
                self.add_grad(*a, &da);
            }
            Op::Relu { a } => {
                let da: Vec<f32> = grad
                    .iter()
                    .zip(self.value(*a).data())
                    .map(|(g, x)| if *x > 0.0 { *g } else { 0.0 })
                    .collect();
                self.add_grad(*a, &da);
            }
            Op::Sigmoid { a } => {
                let out = self.nodes[idx].value.data().to_vec();
                let da: Vec<f32> = grad
                    .iter()
                    .zip(out.iter())
                    .map(|(g, y)| g * y * (1.0 - y))
                    .collect();
                self.add_grad(*a, &da);
            }
            Op::Rsqrt { a } => {
                let out = self.nodes[idx].value.data().to_vec();
                // d(x^-1/2)/dx = -1/2 x^-3/2 = -y^3 / 2
                let da: Vec<f32> = grad
                    .iter()
                    .zip(out.iter())
                    .map(|(g, y)| g * (-0.5 * y * y * y))
                    .collect();
                self.add_grad(*a, &da);
            }
            Op::Conv2d {
                kernels,
                input,
                cols,
                kdims,
                in_hw,
                out_hw,
                stride,
                pad,
            } => {
                let (f, c, kh, kw) = *kdims;
                let (h, w) = *in_hw;
                let (oh, ow) = *out_hw;
                let ck = c * kh * kw;
                let on = oh * ow;
                if self.needs(*kernels) {
                    // dK = dOut . cols^T
                    let mut dk = vec![0.0f32; f * ck];
                    for fi in 0..f {
                        for p in 0..ck {
                            let mut s = 0.0;
                            let grow = &grad[fi * on..(fi + 1) * on];
                            let crow = &cols[p * on..(p + 1) * on];
                            for j in 0..on {
                                s += grow[j] * crow[j];
                            }
                            dk[fi * ck + p] = s;
                        }
                    }
                    self.add_grad(*kernels, &dk);
                }
                if self.needs(*input) {
                    // dcols = K^T . dOut, then col2im scatter-add.
                    let kd = self.value(*kernels).data().to_vec();
                    let mut dcols = vec![0.0f32; ck * on];
                    for fi in 0..f {
                        for p in 0..ck {
                            let kv = kd[fi * ck + p];
                            if kv == 0.0 {
                                continue;
                            }
                            let grow = &grad[fi * on..(fi + 1) * on];
                            let drow = &mut dcols[p * on..(p + 1) * on];
                            for j in 0..on {
                                drow[j] += kv * grow[j];
                            }
                        }
                    }
                    let mut dinput = vec![0.0f32; c * h * w];
                    col2im(
                        &dcols,
                        c,
                        h,
                        w,
                        kh,
                        kw,
                        *stride,
                        *pad,
                        oh,
                        ow,
                        &mut dinput,
                    );
                    self.add_grad(*input, &dinput);
                }
            }
            Op::GlobalAvgPool { a, plane } => {
                let n = self.value(*a).numel();
                let mut da = vec![0.0f32; n];
                for (i, d) in da.iter_mut().enumerate() {
                    *d = grad[i / plane] / *plane as f32;
                }
                self.add_grad(*a, &da);
            }
            Op::MaxPool2d { a, argmax } => {
                let n = self.value(*a).numel();
                let mut da = vec![0.0f32; n];
                for (o, &src_idx) in argmax.iter().enumerate() {
                    da[src_idx] += grad[o];
                }
                self.add_grad(*a, &da);
            }
            Op::MeanRows { a } => {
                let s = self.shape(*a).to_vec();
                let (k, d) = (s[0], s[1]);
                let mut da = vec![0.0f32; k * d];
                for r in 0..k {
                    for c in 0..d {
                        da[r * d + c] = grad[c] / k as f32;
                    }
                }
                self.add_grad(*a, &da);
            }
            Op::MaxRows { a, argmax } => {
                let n = self.value(*a).numel();
                let mut da = vec![0.0f32; n];
                for (c, &src_idx) in argmax.iter().enumerate() {
                    da[src_idx] += grad[c];
                }
                self.add_grad(*a, &da);
            }
            Op::RowSum { a } => {
                let s = self.shape(*a).to_vec();
                let (k, n) = (s[0], s[1]);
                let mut da = vec![0.0f32; k * n];
                for r in 0..k {
                    for c in 0..n {
                        da[r * n + c] = grad[r];
                    }
                }
                self.add_grad(*a, &da);
            }
            Op::ScaleRows { a, v } => {
                let s = self.shape(*a).to_vec();
                let n = s[1];
                if self.needs(*a) {
                    let vd = self.value(*v).data().to_vec();
                    let da: Vec<f32> = grad
                        .iter()
                        .enumerate()
                        .map(|(i, g)| g * vd[i / n])
                        .collect();
                    self.add_grad(*a, &da);
                }
                if self.needs(*v) {
                    let ad = self.value(*a).data();
                    let mut dv = vec![0.0f32; s[0]];
                    for (i, g) in grad.iter().enumerate() {
                        dv[i / n] += g * ad[i];
                    }
                    self.add_grad(*v, &dv);
                }
            }
            Op::ScaleCols { a, v } => {
                let s = self.shape(*a).to_vec();
                let n = s[1];
                if self.needs(*a) {
                    let vd = self.value(*v).data().to_vec();
                    let da: Vec<f32> = grad
                        .iter()
                        .enumerate()
                        .map(|(i, g)| g * vd[i % n])
                        .collect();
                    self.add_grad(*a, &da);
                }
                if self.needs(*v) {
                    let ad = self.value(*a).data();
                    let mut dv = vec![0.0f32; n];
                    for (i, g) in grad.iter().enumerate() {
                        dv[i % n] += g * ad[i];
                    }
                    self.add_grad(*v, &dv);
                }
            }
            Op::Softmax { a } => {
                let s = self.shape(*a).to_vec();
                let (m, n) = if s.len() == 1 { (1, s[0]) } else { (s[0], s[1]) };
                let y = self.nodes[idx].value.data().to_vec();
                let mut da = vec![0.0f32; m * n];
                for r in 0..m {
                    let yr = &y[r * n..(r + 1) * n];
                    let gr = &grad[r * n..(r + 1) * n];
                    let dot: f32 = yr.iter().zip(gr).map(|(yv, gv)| yv * gv).sum();
                    for c in 0..n {
                        da[r * n + c] = yr[c] * (gr[c] - dot);
                    }
                }
                self.add_grad(*a, &da);
            }
            Op::SoftmaxXent {
                logits,
                labels,
                probs,
            } => {
                let m = labels.len();
                let n = probs.len() / m;
                let g = grad[0] / m as f32;
                let mut da = vec![0.0f32; m * n];
                for r in 0..m {
                    for c in 0..n {
                        let onehot = if c == labels[r] { 1.0 } else { 0.0 };
                        da[r * n + c] = g * (probs[r * n + c] - onehot);
                    }
                }
                self.add_grad(*logits, &da);
            }
            Op::StackRows { parts } => {
                let d = grad.len() / parts.len();
                for (r, &p) in parts.iter().enumerate() {
                    self.add_grad(p, &grad[r * d..(r + 1) * d]);
                }
            }
            Op::ScatterSquare {
                values,
                positions,
                k,
            } => {
                let dv: Vec<f32> = positions.iter().map(|&(r, c)| grad[r * k + c]).collect();
                self.add_grad(*values, &dv);
            }
            Op::Gather { a, index } => {
                let n = self.value(*a).numel();
                let mut da = vec![0.0f32; n];
                da[*index] = grad[0];
                self.add_grad(*a, &da);
            }
            Op::HuberToConst { a, targets, delta } => {
                let g = grad[0] / targets.len() as f32;
                let da: Vec<f32> = self
                    .value(*a)
                    .data()
                    .iter()
                    .zip(targets)
                    .map(|(p, t)| g * (p - t).clamp(-delta, *delta))
                    .collect();
                self.add_grad(*a, &da);
            }
            Op::WeightedSum { terms } => {
                for &(v, w) in terms {
                    self.add_grad(v, &[grad[0] * w]);
                }
            }
            Op::Reshape { a } => {
                self.add_grad(*a, &grad);
            }
        }
        self.nodes[idx].op = op;
        Ok(())
    }
}

fn softmax_row(row: &[f32], out: &mut [f32]) {
    let maxv = row.iter().cloned().fold(f32::NEG_INFINITY, f32::max);
    let mut sum = 0.0f32;
    for (o, x) in out.iter_mut().zip(row) {
        let e = (x - maxv).exp();
        *o = e;
        sum += e;
    }
    for o in out.iter_mut() {
        *o /= sum;
    }
}

/// `out += a[m x k] . b[k x n]` with `out` zeroed by the caller.
pub(crate) fn matmul_raw(a: &[f32], b: &[f32], m: usize, k: usize, n: usize, out: &mut [f32]) {
    for i in 0..m {
        let arow = &a[i * k..(i + 1) * k];
        let orow = &mut out[i * n..(i + 1) * n];
        for (p, &av) in arow.iter().enumerate() {
            if av == 0.0 {
                continue;
            }
            let brow = &b[p * n..(p + 1) * n];
            for j in 0..n {
                orow[j] += av * brow[j];
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn im2col(
    input: &[f32],
    c: usize,
    h: usize,
    w: usize,
    kh: usize,
    kw: usize,
    stride: usize,
    pad: usize,
    oh: usize,
    ow: usize,
    cols: &mut [f32],
) {
    let on = oh * ow;
    let mut row = 0;
    for ci in 0..c {
        let plane = &input[ci * h * w..(ci + 1) * h * w];
        for ky in 0..kh {
            for kx in 0..kw {
                let dst = &mut cols[row * on..(row + 1) * on];
                for oy in 0..oh {
                    let iy = (oy * stride + ky) as isize - pad as isize;
                    if iy < 0 || iy >= h as isize {
                        continue; // already zero
                    }
                    let src_row = &plane[iy as usize * w..(iy as usize + 1) * w];
                    for ox in 0..ow {
                        let ix = (ox * stride + kx) as isize - pad as isize;
                        if ix >= 0 && ix < w as isize {
                            dst[oy * ow + ox] = src_row[ix as usize];
                        }
                    }
                }
                row += 1;
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn col2im(
    dcols: &[f32],
    c: usize,
    h: usize,
    w: usize,
    kh: usize,
    kw: usize,
    stride: usize,
    pad: usize,
    oh: usize,
    ow: usize,
    dinput: &mut [f32],
) {
    let on = oh * ow;
    let mut row = 0;
    for ci in 0..c {
        for ky in 0..kh {
            for kx in 0..kw {
                let src = &dcols[row * on..(row + 1) * on];
                for oy in 0..oh {
                    let iy = (oy * stride + ky) as isize - pad as isize;
                    if iy < 0 || iy >= h as isize {
                        continue;
                    }
                    for ox in 0..ow {
                        let ix = (ox * stride + kx) as isize - pad as isize;
                        if ix >= 0 && ix < w as isize {
                            dinput[ci * h * w + iy as usize * w + ix as usize] +=
                                src[oy * ow + ox];
                        }
                    }
                }
                row += 1;
            }
        }
    }
}
