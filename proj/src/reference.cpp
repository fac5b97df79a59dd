// SPDX-License-Identifier: Apache-2.0
#include "relic/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace relic {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double apply_elem_fn(ElemFn fn, double x) {
    switch (fn) {
    case ElemFn::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case ElemFn::silu: return x / (1.0 + std::exp(-x));
    case ElemFn::exp: return std::exp(x);
    case ElemFn::relu: return x > 0 ? x : 0.0;
    case ElemFn::square: return x * x;
    case ElemFn::identity: return x;
    case ElemFn::neg: return -x;
    }
    return x;
}

double apply_arith(ArithFn fn, double a, double b) {
    switch (fn) {
    case ArithFn::add: return a + b;
    case ArithFn::sub: return a - b;
    case ArithFn::mul: return a * b;
    }
    return 0.0;
}
} // namespace

DenseTensor ref_matmul(const DenseTensor &a, const DenseTensor &b) {
    if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
        throw std::invalid_argument("ref_matmul: incompatible shapes");
    }
    int64_t m = a.dim(0), r = a.dim(1), n = b.dim(1);
    DenseTensor c({m, n});
    for (int64_t i = 0; i < m; ++i) {
        for (int64_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int64_t k = 0; k < r; ++k) {
                acc += static_cast<double>(a.at2(i, k)) * b.at2(k, j);
            }
            c.at2(i, j) = static_cast<float>(acc);
        }
    }
    return c;
}

DenseTensor ref_transpose(const DenseTensor &a) {
    if (a.rank() != 2) {
        throw std::invalid_argument("ref_transpose: rank-2 only");
    }
    DenseTensor t({a.dim(1), a.dim(0)});
    for (int64_t i = 0; i < a.dim(0); ++i) {
        for (int64_t j = 0; j < a.dim(1); ++j) {
            t.at2(j, i) = a.at2(i, j);
        }
    }
    return t;
}

DenseTensor ref_softmax_rows(const DenseTensor &a) {
    if (a.rank() != 2) {
        throw std::invalid_argument("ref_softmax_rows: rank-2 only");
    }
    DenseTensor out(a.shape());
    for (int64_t i = 0; i < a.dim(0); ++i) {
        double mx = kNegInf;
        for (int64_t j = 0; j < a.dim(1); ++j) {
            mx = std::max(mx, static_cast<double>(a.at2(i, j)));
        }
        double sum = 0.0;
        for (int64_t j = 0; j < a.dim(1); ++j) {
            sum += std::exp(static_cast<double>(a.at2(i, j)) - mx);
        }
        for (int64_t j = 0; j < a.dim(1); ++j) {
            out.at2(i, j) = static_cast<float>(std::exp(static_cast<double>(a.at2(i, j)) - mx) / sum);
        }
    }
    return out;
}

DenseTensor ref_rmsnorm(const DenseTensor &x, const DenseTensor &gamma, double eps) {
    if (x.rank() != 2 || gamma.size() != x.dim(1)) {
        throw std::invalid_argument("ref_rmsnorm: shape mismatch");
    }
    DenseTensor out(x.shape());
    int64_t d = x.dim(1);
    for (int64_t i = 0; i < x.dim(0); ++i) {
        double ms = 0.0;
        for (int64_t j = 0; j < d; ++j) {
            ms += static_cast<double>(x.at2(i, j)) * x.at2(i, j);
        }
        ms = ms / static_cast<double>(d);
        double inv = 1.0 / std::sqrt(ms + eps);
        for (int64_t j = 0; j < d; ++j) {
            out.at2(i, j) = static_cast<float>(static_cast<double>(x.at2(i, j)) * inv *
                                               gamma.data()[j]);
        }
    }
    return out;
}

DenseTensor ref_sigmoid(const DenseTensor &a) {
    DenseTensor out(a.shape());
    for (int64_t i = 0; i < a.size(); ++i) {
        out.data()[i] = static_cast<float>(apply_elem_fn(ElemFn::sigmoid, a.data()[i]));
    }
    return out;
}

DenseTensor ref_silu(const DenseTensor &a) {
    DenseTensor out(a.shape());
    for (int64_t i = 0; i < a.size(); ++i) {
        out.data()[i] = static_cast<float>(apply_elem_fn(ElemFn::silu, a.data()[i]));
    }
    return out;
}

DenseTensor ref_swiglu(const DenseTensor &h, const DenseTensor &w1, const DenseTensor &b1,
                       const DenseTensor &w2, const DenseTensor &b2) {
    DenseTensor lin = ref_matmul(h, w1);
    DenseTensor gate = ref_matmul(h, w2);
    for (int64_t i = 0; i < lin.dim(0); ++i) {
        for (int64_t j = 0; j < lin.dim(1); ++j) {
            double a = static_cast<double>(lin.at2(i, j)) + b1.data()[j];
            double g = static_cast<double>(gate.at2(i, j)) + b2.data()[j];
            lin.at2(i, j) = static_cast<float>(a * apply_elem_fn(ElemFn::silu, g));
        }
    }
    return lin;
}

RopeTables ref_rope_tables(int64_t positions, int64_t head_dim, double theta) {
    if (head_dim % 2 != 0) {
        throw std::invalid_argument("rope: head_dim must be even");
    }
    int64_t half = head_dim / 2;
    RopeTables t{DenseTensor({positions, head_dim}), DenseTensor({positions, head_dim})};
    for (int64_t p = 0; p < positions; ++p) {
        for (int64_t l = 0; l < head_dim; ++l) {
            int64_t pair = l < half ? l : l - half;
            double angle = static_cast<double>(p) *
                           std::pow(theta, -2.0 * static_cast<double>(pair) / head_dim);
            t.cos.at2(p, l) = static_cast<float>(std::cos(angle));
            // sign of the rotated term folded into the table
            double s = std::sin(angle);
            t.sin_signed.at2(p, l) = static_cast<float>(l < half ? -s : s);
        }
    }
    return t;
}

DenseTensor ref_rope_apply(const DenseTensor &x, int64_t head_dim, const RopeTables &tables) {
    if (x.rank() != 2 || x.dim(1) % head_dim != 0) {
        throw std::invalid_argument("rope: width must be a multiple of head_dim");
    }
    int64_t half = head_dim / 2;
    DenseTensor out(x.shape());
    for (int64_t p = 0; p < x.dim(0); ++p) {
        for (int64_t c = 0; c < x.dim(1); c += head_dim) {
            for (int64_t l = 0; l < head_dim; ++l) {
                int64_t rot = (l + half) % head_dim;
                double v = static_cast<double>(x.at2(p, c + l)) * tables.cos.at2(p, l) +
                           static_cast<double>(x.at2(p, c + rot)) * tables.sin_signed.at2(p, l);
                out.at2(p, c + l) = static_cast<float>(v);
            }
        }
    }
    return out;
}

DenseTensor ref_attention_gqa(const DenseTensor &q, const DenseTensor &k, const DenseTensor &v,
                              int64_t heads, int64_t kv_groups, bool causal, double scale) {
    int64_t n = q.dim(0);
    int64_t dk = q.dim(1) / heads;
    if (heads % kv_groups != 0 || k.dim(1) != kv_groups * dk || v.dim(1) != kv_groups * dk) {
        throw std::invalid_argument("gqa: inconsistent head layout");
    }
    int64_t ratio = heads / kv_groups;
    DenseTensor out({n, heads * dk});
    for (int64_t h = 0; h < heads; ++h) {
        int64_t g = h / ratio;
        for (int64_t i = 0; i < n; ++i) {
            // scores for query i against all keys in group g
            std::vector<double> row(static_cast<size_t>(n), kNegInf);
            double mx = kNegInf;
            for (int64_t j = 0; j < n; ++j) {
                if (causal && j > i) {
                    continue;
                }
                double s = 0.0;
                for (int64_t l = 0; l < dk; ++l) {
                    s += static_cast<double>(q.at2(i, h * dk + l)) * k.at2(j, g * dk + l);
                }
                row[static_cast<size_t>(j)] = s * scale;
                mx = std::max(mx, s * scale);
            }
            double denom = 0.0;
            for (int64_t j = 0; j < n; ++j) {
                if (row[static_cast<size_t>(j)] != kNegInf) {
                    denom += std::exp(row[static_cast<size_t>(j)] - mx);
                }
            }
            for (int64_t l = 0; l < dk; ++l) {
                double acc = 0.0;
                for (int64_t j = 0; j < n; ++j) {
                    if (row[static_cast<size_t>(j)] == kNegInf) {
                        continue;
                    }
                    double w = std::exp(row[static_cast<size_t>(j)] - mx) / denom;
                    acc += w * v.at2(j, g * dk + l);
                }
                out.at2(i, h * dk + l) = static_cast<float>(acc);
            }
        }
    }
    return out;
}

DenseTensor ref_moe_router(const DenseTensor &gate_logits, int64_t top_k) {
    DenseTensor probs = ref_softmax_rows(gate_logits);
    int64_t n = probs.dim(0), e_count = probs.dim(1);
    DenseTensor route({n, e_count});
    for (int64_t i = 0; i < n; ++i) {
        std::vector<int64_t> order(static_cast<size_t>(e_count));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
            float pa = probs.at2(i, a), pb = probs.at2(i, b);
            if (pa != pb) {
                return pa > pb;
            }
            return a < b; // ties: smallest expert id wins
        });
        double denom = 0.0;
        for (int64_t r = 0; r < std::min(top_k, e_count); ++r) {
            denom += probs.at2(i, order[static_cast<size_t>(r)]);
        }
        for (int64_t r = 0; r < std::min(top_k, e_count); ++r) {
            int64_t e = order[static_cast<size_t>(r)];
            route.at2(i, e) = static_cast<float>(probs.at2(i, e) / denom);
        }
    }
    return route;
}

DenseTensor ref_moe_ffn(const DenseTensor &h, const DenseTensor &w_router,
                        const std::vector<ExpertWeights> &experts, int64_t top_k) {
    DenseTensor route = ref_moe_router(ref_matmul(h, w_router), top_k);
    int64_t n = h.dim(0), d = h.dim(1);
    DenseTensor out({n, d});
    DenseTensor zero_bias_f, zero_bias_d;
    for (size_t e = 0; e < experts.size(); ++e) {
        const auto &ex = experts[e];
        DenseTensor b1 = DenseTensor::zeros({ex.w_up.dim(1)});
        DenseTensor act = ref_swiglu(h, ex.w_up, b1, ex.w_gate, b1);
        DenseTensor y = ref_matmul(act, ex.w_down);
        for (int64_t i = 0; i < n; ++i) {
            double w = route.at2(i, static_cast<int64_t>(e));
            if (w == 0.0) {
                continue;
            }
            for (int64_t j = 0; j < d; ++j) {
                out.at2(i, j) = static_cast<float>(out.at2(i, j) + w * y.at2(i, j));
            }
        }
    }
    return out;
}

DenseTensor ref_conv2d_direct(const DenseTensor &input, const DenseTensor &kernels,
                              int64_t stride, int64_t pad) {
    int64_t c_in = input.dim(0), h_in = input.dim(1), w_in = input.dim(2);
    int64_t oc = kernels.dim(0), kh = kernels.dim(2), kw = kernels.dim(3);
    if (kernels.dim(1) != c_in) {
        throw std::invalid_argument("conv2d: channel mismatch");
    }
    int64_t oh = (h_in + 2 * pad - kh) / stride + 1;
    int64_t ow = (w_in + 2 * pad - kw) / stride + 1;
    DenseTensor out({oc, oh, ow});
    for (int64_t o = 0; o < oc; ++o) {
        for (int64_t y = 0; y < oh; ++y) {
            for (int64_t x = 0; x < ow; ++x) {
                double acc = 0.0;
                for (int64_t c = 0; c < c_in; ++c) {
                    for (int64_t ky = 0; ky < kh; ++ky) {
                        for (int64_t kx = 0; kx < kw; ++kx) {
                            int64_t iy = y * stride + ky - pad;
                            int64_t ix = x * stride + kx - pad;
                            if (iy < 0 || iy >= h_in || ix < 0 || ix >= w_in) {
                                continue;
                            }
                            acc += static_cast<double>(input.at({c, iy, ix})) *
                                   kernels.at({o, c, ky, kx});
                        }
                    }
                }
                out.at({o, y, x}) = static_cast<float>(acc);
            }
        }
    }
    return out;
}

DenseTensor ref_conv2d_im2col(const DenseTensor &input, const DenseTensor &kernels,
                              int64_t stride, int64_t pad) {
    int64_t c_in = input.dim(0), h_in = input.dim(1), w_in = input.dim(2);
    int64_t oc = kernels.dim(0), kh = kernels.dim(2), kw = kernels.dim(3);
    int64_t oh = (h_in + 2 * pad - kh) / stride + 1;
    int64_t ow = (w_in + 2 * pad - kw) / stride + 1;
    int64_t patch = c_in * kh * kw;
    // Unroll input patches into rows, kernels into columns, then multiply.
    DenseTensor cols({oh * ow, patch});
    for (int64_t y = 0; y < oh; ++y) {
        for (int64_t x = 0; x < ow; ++x) {
            for (int64_t c = 0; c < c_in; ++c) {
                for (int64_t ky = 0; ky < kh; ++ky) {
                    for (int64_t kx = 0; kx < kw; ++kx) {
                        int64_t iy = y * stride + ky - pad;
                        int64_t ix = x * stride + kx - pad;
                        float v = 0.0f;
                        if (iy >= 0 && iy < h_in && ix >= 0 && ix < w_in) {
                            v = input.at({c, iy, ix});
                        }
                        cols.at2(y * ow + x, (c * kh + ky) * kw + kx) = v;
                    }
                }
            }
        }
    }
    DenseTensor kmat({patch, oc});
    for (int64_t o = 0; o < oc; ++o) {
        for (int64_t c = 0; c < c_in; ++c) {
            for (int64_t ky = 0; ky < kh; ++ky) {
                for (int64_t kx = 0; kx < kw; ++kx) {
                    kmat.at2((c * kh + ky) * kw + kx, o) = kernels.at({o, c, ky, kx});
                }
            }
        }
    }
    DenseTensor prod = ref_matmul(cols, kmat); // [oh*ow, oc]
    DenseTensor out({oc, oh, ow});
    for (int64_t o = 0; o < oc; ++o) {
        for (int64_t y = 0; y < oh; ++y) {
            for (int64_t x = 0; x < ow; ++x) {
                out.at({o, y, x}) = prod.at2(y * ow + x, o);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Graph interpreter
// ---------------------------------------------------------------------------

namespace {

// Iterate every coordinate of `shape`, calling fn with the index vector.
template <typename Fn>
void for_each_index(const std::vector<int64_t> &shape, Fn &&fn) {
    std::vector<int64_t> idx(shape.size(), 0);
    if (shape.empty()) {
        return;
    }
    for (int64_t d : shape) {
        if (d == 0) {
            return;
        }
    }
    while (true) {
        fn(idx);
        int64_t axis = static_cast<int64_t>(shape.size()) - 1;
        while (axis >= 0) {
            if (++idx[static_cast<size_t>(axis)] < shape[static_cast<size_t>(axis)]) {
                break;
            }
            idx[static_cast<size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) {
            return;
        }
    }
}

size_t flat_offset(const std::vector<int64_t> &shape, const std::vector<int64_t> &idx) {
    size_t off = 0;
    for (size_t i = 0; i < shape.size(); ++i) {
        off = off * static_cast<size_t>(shape[i]) + static_cast<size_t>(idx[i]);
    }
    return off;
}

struct MatmulPlan {
    enum class Form { weight, pretransposed, row } form = Form::weight;
    int64_t b_contract = 0;
    std::vector<int64_t> b_col_axes; // B axes emitted as output coordinates
};

MatmulPlan plan_matmul(const Graph &g, const OpNode &node) {
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &b = g.tensor(node.inputs[1]);
    MatmulPlan plan;
    const std::string &shared = a.chunked_axis().name;
    std::set<std::string> eliminated;
    for (const auto &bk : node.matmul.batch) {
        eliminated.insert(bk.b_axis);
    }
    if (b.kind == TensorKind::weight || b.kind == TensorKind::constant) {
        plan.form = MatmulPlan::Form::weight;
        plan.b_contract = b.axis_index(shared);
    } else if (b.chunked_axis().name == shared) {
        plan.form = MatmulPlan::Form::pretransposed;
        plan.b_contract = b.rank() - 1;
    } else {
        plan.form = MatmulPlan::Form::row;
        plan.b_contract = b.axis_index(shared);
    }
    if (plan.form == MatmulPlan::Form::row) {
        for (int64_t i = 0; i < b.rank() - 1; ++i) {
            if (i != plan.b_contract && !eliminated.count(b.axes[static_cast<size_t>(i)].name)) {
                plan.b_col_axes.push_back(i);
            }
        }
        plan.b_col_axes.push_back(b.rank() - 1); // chunked axis carries through
    } else {
        for (int64_t i = 0; i < b.rank(); ++i) {
            if (i != plan.b_contract && !eliminated.count(b.axes[static_cast<size_t>(i)].name)) {
                plan.b_col_axes.push_back(i);
            }
        }
    }
    return plan;
}

DenseTensor eval_matmul(const Graph &g, const OpNode &node, const DenseTensor &av,
                        const DenseTensor &bv, const DenseTensor *gate_value) {
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &b = g.tensor(node.inputs[1]);
    MatmulPlan plan = plan_matmul(g, node);

    int64_t a_keys = a.rank() - 1;
    std::vector<int64_t> out_shape;
    for (int64_t i = 0; i < a_keys; ++i) {
        out_shape.push_back(av.dim(i));
    }
    for (int64_t bi : plan.b_col_axes) {
        out_shape.push_back(bv.dim(bi));
    }

    // Map batch keys: A axis index and divisor per B axis.
    struct BatchBind {
        int64_t a_axis;
        int64_t b_axis;
        int64_t div;
    };
    std::vector<BatchBind> batch;
    for (const auto &bk : node.matmul.batch) {
        batch.push_back(BatchBind{a.axis_index(bk.a_axis), b.axis_index(bk.b_axis), bk.a_div});
    }
    std::optional<std::pair<int64_t, int64_t>> mask; // (a axis, output pos of b axis)
    if (node.matmul.mask) {
        int64_t a_axis = a.axis_index(node.matmul.mask->a_axis);
        int64_t b_axis = b.axis_index(node.matmul.mask->b_axis);
        int64_t out_pos = -1;
        for (size_t i = 0; i < plan.b_col_axes.size(); ++i) {
            if (plan.b_col_axes[i] == b_axis) {
                out_pos = a_keys + static_cast<int64_t>(i);
            }
        }
        if (out_pos < 0) {
            throw GraphError(fmt::format("matmul '{}': mask axis is not an output axis", node.id));
        }
        mask = {a_axis, out_pos};
    }
    std::optional<std::pair<int64_t, int64_t>> gate_bind; // (a key axis, b output axis pos)
    if (node.matmul.gate) {
        int64_t a_axis = a.axis_index(node.matmul.gate->a_key);
        int64_t b_axis = b.axis_index(node.matmul.gate->b_key);
        int64_t out_pos = -1;
        for (size_t i = 0; i < plan.b_col_axes.size(); ++i) {
            if (plan.b_col_axes[i] == b_axis) {
                out_pos = a_keys + static_cast<int64_t>(i);
            }
        }
        if (out_pos < 0) {
            throw GraphError(fmt::format("matmul '{}': gate axis is not an output axis", node.id));
        }
        gate_bind = {a_axis, out_pos};
    }

    int64_t contract_len = std::min(av.dim(a.rank() - 1), bv.dim(plan.b_contract));

    DenseTensor out(out_shape);
    std::vector<int64_t> a_idx(static_cast<size_t>(a.rank()));
    std::vector<int64_t> b_idx(static_cast<size_t>(b.rank()));
    for_each_index(out_shape, [&](const std::vector<int64_t> &oidx) {
        // masked-out coordinates are "absent": -inf so softmax drops them
        if (mask) {
            int64_t lhs = oidx[static_cast<size_t>(mask->first)];
            int64_t rhs = oidx[static_cast<size_t>(mask->second)];
            if (!(rhs <= lhs)) {
                out.values()[flat_offset(out_shape, oidx)] =
                    -std::numeric_limits<float>::infinity();
                return;
            }
        }
        double gate_w = 1.0;
        if (gate_bind && gate_value) {
            int64_t key = oidx[static_cast<size_t>(gate_bind->first)];
            int64_t choice = oidx[static_cast<size_t>(gate_bind->second)];
            gate_w = gate_value->at2(key, choice);
            if (gate_w == 0.0) {
                return; // unselected: stays zero
            }
            if (!node.matmul.gate->weighted) {
                gate_w = 1.0;
            }
        }
        for (int64_t i = 0; i < a_keys; ++i) {
            a_idx[static_cast<size_t>(i)] = oidx[static_cast<size_t>(i)];
        }
        for (size_t i = 0; i < plan.b_col_axes.size(); ++i) {
            b_idx[static_cast<size_t>(plan.b_col_axes[i])] = oidx[a_keys + i];
        }
        for (const auto &bb : batch) {
            b_idx[static_cast<size_t>(bb.b_axis)] =
                oidx[static_cast<size_t>(bb.a_axis)] / bb.div;
        }
        double acc = 0.0;
        for (int64_t r = 0; r < contract_len; ++r) {
            a_idx[static_cast<size_t>(a.rank() - 1)] = r;
            b_idx[static_cast<size_t>(plan.b_contract)] = r;
            acc += static_cast<double>(av.values()[flat_offset(av.shape(), a_idx)]) *
                   bv.values()[flat_offset(bv.shape(), b_idx)];
        }
        out.values()[flat_offset(out_shape, oidx)] = static_cast<float>(acc * gate_w);
    });
    return out;
}

DenseTensor eval_normalization(const OpNode &node, const DenseTensor &av) {
    const auto &attr = node.normalization;
    std::vector<int64_t> shape = av.shape();
    int64_t n = shape.back();
    int64_t groups = av.size() / n;

    if (attr.agg == AggFn::top_k) {
        DenseTensor out(shape);
        for (int64_t grp = 0; grp < groups; ++grp) {
            const float *row = av.data() + grp * n;
            std::vector<int64_t> order(static_cast<size_t>(n));
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int64_t x, int64_t y) {
                if (row[x] != row[y]) {
                    return row[x] > row[y];
                }
                return x < y;
            });
            int64_t k = std::min(attr.top_k, n);
            double denom = 0.0;
            for (int64_t r = 0; r < k; ++r) {
                denom += row[order[static_cast<size_t>(r)]];
            }
            for (int64_t r = 0; r < k; ++r) {
                int64_t e = order[static_cast<size_t>(r)];
                out.data()[grp * n + e] = static_cast<float>(row[e] / denom);
            }
        }
        return out;
    }

    bool reduced = attr.g == PostFn::identity;
    std::vector<int64_t> out_shape = shape;
    if (reduced) {
        out_shape.back() = 1;
    }
    DenseTensor out(out_shape);
    for (int64_t grp = 0; grp < groups; ++grp) {
        const float *row = av.data() + grp * n;
        // stable shift applies only to the exp/div (softmax) pipeline
        double shift = 0.0;
        if (attr.f == ElemFn::exp && attr.stable) {
            double mx = kNegInf;
            for (int64_t j = 0; j < n; ++j) {
                mx = std::max(mx, static_cast<double>(row[j]));
            }
            shift = mx;
        }
        double agg = attr.agg == AggFn::max ? kNegInf : 0.0;
        for (int64_t j = 0; j < n; ++j) {
            double fx = apply_elem_fn(attr.f, static_cast<double>(row[j]) - shift);
            if (attr.agg == AggFn::max) {
                agg = std::max(agg, fx);
            } else {
                agg += fx;
            }
        }
        agg /= attr.agg_divisor;
        switch (attr.g) {
        case PostFn::identity:
            out.data()[grp] = static_cast<float>(agg + shift);
            break;
        case PostFn::div:
            for (int64_t j = 0; j < n; ++j) {
                double fx = apply_elem_fn(attr.f, static_cast<double>(row[j]) - shift);
                out.data()[grp * n + j] = static_cast<float>(fx / agg);
            }
            break;
        case PostFn::div_sqrt_eps:
            for (int64_t j = 0; j < n; ++j) {
                out.data()[grp * n + j] =
                    static_cast<float>(static_cast<double>(row[j]) / std::sqrt(agg + attr.epsilon));
            }
            break;
        }
    }
    return out;
}

DenseTensor eval_reshape(const OpNode &node, const DenseTensor &av) {
    DenseTensor cur = av;
    for (const auto &step : node.reshape.steps) {
        std::vector<int64_t> shape = cur.shape();
        size_t ax = static_cast<size_t>(step.axis);
        switch (step.kind) {
        case ReshapeStep::Kind::flatten: {
            // merge axis with its successor; row-major layout is untouched
            std::vector<int64_t> ns(shape.begin(), shape.end());
            ns[ax] = shape[ax] * shape[ax + 1];
            ns.erase(ns.begin() + static_cast<int64_t>(ax) + 1);
            cur = cur.reshaped(ns);
            break;
        }
        case ReshapeStep::Kind::split: {
            std::vector<int64_t> ns(shape.begin(), shape.end());
            ns[ax] = shape[ax] / step.arg;
            ns.insert(ns.begin() + static_cast<int64_t>(ax) + 1, step.arg);
            cur = cur.reshaped(ns);
            break;
        }
        case ReshapeStep::Kind::permute: {
            std::vector<int64_t> ns;
            for (int64_t p : step.perm) {
                ns.push_back(shape[static_cast<size_t>(p)]);
            }
            DenseTensor next(ns);
            for_each_index(shape, [&](const std::vector<int64_t> &idx) {
                std::vector<int64_t> oidx(idx.size());
                for (size_t i = 0; i < step.perm.size(); ++i) {
                    oidx[i] = idx[static_cast<size_t>(step.perm[i])];
                }
                next.values()[flat_offset(ns, oidx)] = cur.values()[flat_offset(shape, idx)];
            });
            cur = next;
            break;
        }
        case ReshapeStep::Kind::shift: {
            std::vector<int64_t> ns = shape;
            ns[ax] = step.bound;
            DenseTensor next(ns);
            for_each_index(shape, [&](const std::vector<int64_t> &idx) {
                int64_t moved = idx[ax] - step.arg;
                if (moved < 0 || moved >= step.bound) {
                    return;
                }
                std::vector<int64_t> oidx = idx;
                oidx[ax] = moved;
                next.values()[flat_offset(ns, oidx)] = cur.values()[flat_offset(shape, idx)];
            });
            cur = next;
            break;
        }
        case ReshapeStep::Kind::stride: {
            std::vector<int64_t> ns = shape;
            ns[ax] = step.bound;
            DenseTensor next(ns);
            for_each_index(shape, [&](const std::vector<int64_t> &idx) {
                if (idx[ax] % step.arg != 0) {
                    return;
                }
                int64_t moved = idx[ax] / step.arg;
                if (moved >= step.bound) {
                    return;
                }
                std::vector<int64_t> oidx = idx;
                oidx[ax] = moved;
                next.values()[flat_offset(ns, oidx)] = cur.values()[flat_offset(shape, idx)];
            });
            cur = next;
            break;
        }
        }
    }
    return cur;
}

DenseTensor eval_slice(const OpNode &node, const DenseTensor &av) {
    const auto &attr = node.slice;
    std::vector<int64_t> shape = av.shape();
    std::vector<int64_t> out_shape = shape;
    out_shape[static_cast<size_t>(attr.axis)] = attr.end - attr.begin;
    DenseTensor out(out_shape);
    for_each_index(out_shape, [&](const std::vector<int64_t> &idx) {
        std::vector<int64_t> src = idx;
        src[static_cast<size_t>(attr.axis)] += attr.begin;
        out.values()[flat_offset(out_shape, idx)] = av.values()[flat_offset(shape, src)];
    });
    if (attr.squeeze && attr.end - attr.begin == 1) {
        std::vector<int64_t> ns = out_shape;
        ns.erase(ns.begin() + attr.axis);
        out = out.reshaped(ns);
    }
    return out;
}

DenseTensor eval_concat(const OpNode &node, const std::vector<const DenseTensor *> &ins) {
    const auto axis = static_cast<size_t>(node.concat.axis);
    std::vector<int64_t> out_shape = ins[0]->shape();
    for (size_t i = 1; i < ins.size(); ++i) {
        out_shape[axis] += ins[i]->dim(static_cast<int64_t>(axis));
    }
    DenseTensor out(out_shape);
    int64_t offset = 0;
    for (const DenseTensor *t : ins) {
        std::vector<int64_t> shape = t->shape();
        for_each_index(shape, [&](const std::vector<int64_t> &idx) {
            std::vector<int64_t> oidx = idx;
            oidx[axis] += offset;
            out.values()[flat_offset(out_shape, oidx)] = t->values()[flat_offset(shape, idx)];
        });
        offset += t->dim(static_cast<int64_t>(axis));
    }
    return out;
}

DenseTensor eval_transpose(const OpNode &node, const DenseTensor &av) {
    if (node.transpose.mode == TransposeAttr::Mode::transpose) {
        return ref_transpose(av);
    }
    const auto &perm = node.transpose.perm;
    int64_t period = static_cast<int64_t>(perm.size());
    std::vector<int64_t> shape = av.shape();
    int64_t width = shape.back();
    DenseTensor out(shape);
    int64_t rows = av.size() / width;
    for (int64_t r = 0; r < rows; ++r) {
        for (int64_t gstart = 0; gstart < width; gstart += period) {
            for (int64_t l = 0; l < period; ++l) {
                out.data()[r * width + gstart + l] =
                    av.data()[r * width + gstart + perm[static_cast<size_t>(l)]];
            }
        }
    }
    return out;
}

DenseTensor eval_lookup(const Graph &g, const OpNode &node, const DenseTensor &table,
                        const DenseTensor &keys) {
    const TensorDecl &table_decl = g.tensor(node.inputs[0]);
    int64_t key_axis = table_decl.axis_index(node.lookup.table_key);
    if (key_axis != 0) {
        throw GraphError(fmt::format("lookup '{}': table key must be the leading axis", node.id));
    }
    bool positional = node.lookup.input_key == "pos";
    int64_t n = keys.dim(0);
    std::vector<int64_t> out_shape = table.shape();
    out_shape[0] = n;
    DenseTensor out(out_shape);
    int64_t row_width = table.size() / table.dim(0);
    for (int64_t i = 0; i < n; ++i) {
        int64_t key = positional ? i : static_cast<int64_t>(keys.data()[i]);
        std::copy(table.data() + key * row_width, table.data() + (key + 1) * row_width,
                  out.data() + i * row_width);
    }
    return out;
}

} // namespace

DenseTensor ref_eval_node(const Graph &g, const OpNode &node,
                          const std::vector<const DenseTensor *> &ins,
                          const DenseTensor *gate_value) {
    switch (node.category) {
    case OpCategory::matmul:
        return eval_matmul(g, node, *ins.at(0), *ins.at(1), gate_value);
    case OpCategory::elementwise_fn: {
        DenseTensor out(ins.at(0)->shape());
        for (int64_t i = 0; i < out.size(); ++i) {
            out.data()[i] =
                static_cast<float>(apply_elem_fn(node.elem_fn.fn, ins.at(0)->data()[i]));
        }
        return out;
    }
    case OpCategory::elementwise_arith: {
        const DenseTensor &a = *ins.at(0);
        const DenseTensor &b = *ins.at(1);
        const TensorDecl &ad = g.tensor(node.inputs[0]);
        const TensorDecl &bd = g.tensor(node.inputs[1]);
        DenseTensor out(a.shape());
        if (b.rank() == 1 && b.dim(0) == 1) {
            for (int64_t i = 0; i < a.size(); ++i) {
                out.data()[i] = static_cast<float>(
                    apply_arith(node.elem_arith.fn, a.data()[i], b.data()[0]));
            }
            return out;
        }
        // align rhs axes to lhs axes by name; missing axes broadcast
        std::vector<int64_t> b_axis_of_a(static_cast<size_t>(ad.rank()), -1);
        for (int64_t i = 0; i < bd.rank(); ++i) {
            b_axis_of_a[static_cast<size_t>(ad.axis_index(bd.axes[static_cast<size_t>(i)].name))] =
                i;
        }
        std::vector<int64_t> a_shape = a.shape();
        std::vector<int64_t> b_idx(static_cast<size_t>(bd.rank()));
        for_each_index(a_shape, [&](const std::vector<int64_t> &idx) {
            for (size_t i = 0; i < b_axis_of_a.size(); ++i) {
                if (b_axis_of_a[i] >= 0) {
                    b_idx[static_cast<size_t>(b_axis_of_a[i])] = idx[i];
                }
            }
            out.values()[flat_offset(a_shape, idx)] = static_cast<float>(
                apply_arith(node.elem_arith.fn, a.values()[flat_offset(a_shape, idx)],
                            b.values()[flat_offset(b.shape(), b_idx)]));
        });
        return out;
    }
    case OpCategory::reshape:
        return eval_reshape(node, *ins.at(0));
    case OpCategory::normalization:
        return eval_normalization(node, *ins.at(0));
    case OpCategory::lookup:
        return eval_lookup(g, node, *ins.at(0), *ins.at(1));
    case OpCategory::slice:
        return eval_slice(node, *ins.at(0));
    case OpCategory::concat:
        return eval_concat(node, ins);
    case OpCategory::transpose_fallback:
        return eval_transpose(node, *ins.at(0));
    }
    throw GraphError("unreachable");
}

TensorEnv ref_graph_forward(const Graph &g, const TensorEnv &inputs) {
    TensorEnv env = inputs;
    for (const auto &id : topo_sort(g)) {
        const OpNode &node = g.node(id);
        std::vector<const DenseTensor *> ins;
        for (const auto &in : node.inputs) {
            auto it = env.find(in);
            if (it == env.end()) {
                throw GraphError(fmt::format("evaluation of '{}': missing input '{}'", id, in));
            }
            ins.push_back(&it->second);
        }
        const DenseTensor *gate_value = nullptr;
        if (node.matmul.gate) {
            auto it = env.find(node.matmul.gate->relation);
            if (it == env.end()) {
                throw GraphError(
                    fmt::format("evaluation of '{}': missing gate '{}'", id, node.matmul.gate->relation));
            }
            gate_value = &it->second;
        }
        env[node.output] = ref_eval_node(g, node, ins, gate_value);
    }
    return env;
}

} // namespace relic
