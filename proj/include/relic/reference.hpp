// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "relic/dense.hpp"
#include "relic/ir.hpp"

namespace relic {

// Dense reference semantics for every modeled operator. Everything here is
// plain arithmetic with double accumulation; it is the ground truth the SQL
// path is tested against, and the evaluator constant folding uses.

DenseTensor ref_matmul(const DenseTensor &a, const DenseTensor &b);
DenseTensor ref_transpose(const DenseTensor &a);
DenseTensor ref_softmax_rows(const DenseTensor &a);
DenseTensor ref_rmsnorm(const DenseTensor &x, const DenseTensor &gamma, double eps);
DenseTensor ref_sigmoid(const DenseTensor &a);
DenseTensor ref_silu(const DenseTensor &a);

// (h W1 + b1) element-wise-times Swish(h W2 + b2); the W2 branch is gated.
DenseTensor ref_swiglu(const DenseTensor &h, const DenseTensor &w1, const DenseTensor &b1,
                       const DenseTensor &w2, const DenseTensor &b2);

// Rotary tables for positions [0, n). cos/sin are [n, head_dim]; the sin
// table carries the rotation sign baked in so that
//   rotated = x * cos + lane_rotate(x, head_dim/2) * sin.
struct RopeTables {
    DenseTensor cos;
    DenseTensor sin_signed;
};
RopeTables ref_rope_tables(int64_t positions, int64_t head_dim, double theta);

// Apply rotary embedding to x laid out [n, heads*head_dim].
DenseTensor ref_rope_apply(const DenseTensor &x, int64_t head_dim, const RopeTables &tables);

// Grouped-query attention over full sequences. q is [n, H*dk], k/v are
// [n, G*dk]; heads h use group h / (H/G). Returns [n, H*dk].
DenseTensor ref_attention_gqa(const DenseTensor &q, const DenseTensor &k, const DenseTensor &v,
                              int64_t heads, int64_t kv_groups, bool causal, double scale);

struct ExpertWeights {
    DenseTensor w_gate; // [d, f]
    DenseTensor w_up;   // [d, f]
    DenseTensor w_down; // [f, d]
};

// Softmax router over expert logits, top_k selection renormalized, ties on
// gate scores broken by smallest expert id.
DenseTensor ref_moe_router(const DenseTensor &gate_logits, int64_t top_k);
DenseTensor ref_moe_ffn(const DenseTensor &h, const DenseTensor &w_router,
                        const std::vector<ExpertWeights> &experts, int64_t top_k);

// 2-D convolution, NCHW single image [C,H,W], kernels [OC,C,KH,KW]. The
// direct path and the im2col-lowered path are independent implementations.
DenseTensor ref_conv2d_direct(const DenseTensor &input, const DenseTensor &kernels,
                              int64_t stride, int64_t pad);
DenseTensor ref_conv2d_im2col(const DenseTensor &input, const DenseTensor &kernels,
                              int64_t stride, int64_t pad);

// ---------------------------------------------------------------------------
// Graph evaluation. Values are dense tensors whose leading (key) axis sizes
// follow the data, not the nominal declaration, mirroring how relations are
// cardinality-agnostic. Token inputs hold token ids.
// ---------------------------------------------------------------------------

using TensorEnv = std::map<std::string, DenseTensor>;

// Execute every node in topological order; returns the full environment
// (inputs, intermediates and outputs).
TensorEnv ref_graph_forward(const Graph &g, const TensorEnv &inputs);

// Evaluate a single node given its input values.
DenseTensor ref_eval_node(const Graph &g, const OpNode &node,
                          const std::vector<const DenseTensor *> &ins,
                          const DenseTensor *gate_value);

} // namespace relic
