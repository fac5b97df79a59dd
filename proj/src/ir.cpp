// SPDX-License-Identifier: Apache-2.0
#include "relic/ir.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

using nlohmann::json;

namespace relic {

int64_t TensorDecl::axis_index(const std::string &axis_name) const {
    for (size_t i = 0; i < axes.size(); ++i) {
        if (axes[i].name == axis_name) {
            return static_cast<int64_t>(i);
        }
    }
    throw GraphError(fmt::format("tensor '{}' has no axis '{}'", name, axis_name));
}

std::vector<int64_t> TensorDecl::shape() const {
    std::vector<int64_t> s;
    s.reserve(axes.size());
    for (const auto &a : axes) {
        s.push_back(a.size);
    }
    return s;
}

const TensorDecl &Graph::tensor(const std::string &name) const {
    auto it = tensors.find(name);
    if (it == tensors.end()) {
        throw GraphError(fmt::format("unknown tensor '{}'", name));
    }
    return it->second;
}

const OpNode *Graph::producer(const std::string &tensor_name) const {
    for (const auto &n : nodes) {
        if (n.output == tensor_name) {
            return &n;
        }
    }
    return nullptr;
}

std::vector<const OpNode *> Graph::consumers(const std::string &tensor_name) const {
    std::vector<const OpNode *> out;
    for (const auto &n : nodes) {
        if (std::find(n.inputs.begin(), n.inputs.end(), tensor_name) != n.inputs.end()) {
            out.push_back(&n);
        }
    }
    return out;
}

const OpNode &Graph::node(const std::string &id) const {
    for (const auto &n : nodes) {
        if (n.id == id) {
            return n;
        }
    }
    throw GraphError(fmt::format("unknown node '{}'", id));
}

// --- enum string tables ------------------------------------------------------

namespace {

template <typename E, size_t N>
const char *enum_name(E v, const std::array<std::pair<E, const char *>, N> &table) {
    for (const auto &[e, s] : table) {
        if (e == v) {
            return s;
        }
    }
    return "?";
}

template <typename E, size_t N>
E enum_value(const std::string &s, const std::array<std::pair<E, const char *>, N> &table,
             const char *what) {
    for (const auto &[e, name] : table) {
        if (s == name) {
            return e;
        }
    }
    throw GraphError(fmt::format("unsupported {} '{}'", what, s));
}

constexpr std::array<std::pair<OpCategory, const char *>, 9> kCategories{{
    {OpCategory::matmul, "matmul"},
    {OpCategory::elementwise_fn, "elementwise_fn"},
    {OpCategory::elementwise_arith, "elementwise_arith"},
    {OpCategory::reshape, "reshape"},
    {OpCategory::normalization, "normalization"},
    {OpCategory::lookup, "lookup"},
    {OpCategory::slice, "slice"},
    {OpCategory::concat, "concat"},
    {OpCategory::transpose_fallback, "transpose_fallback"},
}};

constexpr std::array<std::pair<ElemFn, const char *>, 7> kElemFns{{
    {ElemFn::sigmoid, "sigmoid"},
    {ElemFn::silu, "silu"},
    {ElemFn::exp, "exp"},
    {ElemFn::relu, "relu"},
    {ElemFn::square, "square"},
    {ElemFn::identity, "identity"},
    {ElemFn::neg, "neg"},
}};

constexpr std::array<std::pair<ArithFn, const char *>, 3> kArithFns{{
    {ArithFn::add, "add"},
    {ArithFn::sub, "sub"},
    {ArithFn::mul, "mul"},
}};

constexpr std::array<std::pair<AggFn, const char *>, 3> kAggFns{{
    {AggFn::sum, "SUM"},
    {AggFn::max, "MAX"},
    {AggFn::top_k, "TOP_K"},
}};

constexpr std::array<std::pair<PostFn, const char *>, 3> kPostFns{{
    {PostFn::div, "div"},
    {PostFn::div_sqrt_eps, "div_sqrt_eps"},
    {PostFn::identity, "identity"},
}};

constexpr std::array<std::pair<TensorKind, const char *>, 5> kKinds{{
    {TensorKind::weight, "weight"},
    {TensorKind::constant, "constant"},
    {TensorKind::input, "input"},
    {TensorKind::intermediate, "intermediate"},
    {TensorKind::output, "output"},
}};

constexpr std::array<std::pair<ReshapeStep::Kind, const char *>, 5> kReshapeKinds{{
    {ReshapeStep::Kind::flatten, "flatten"},
    {ReshapeStep::Kind::split, "split"},
    {ReshapeStep::Kind::permute, "permute"},
    {ReshapeStep::Kind::shift, "shift"},
    {ReshapeStep::Kind::stride, "stride"},
}};

} // namespace

const char *to_string(OpCategory c) { return enum_name(c, kCategories); }
OpCategory op_category_from_string(const std::string &s) {
    return enum_value(s, kCategories, "operator");
}
const char *to_string(ElemFn f) { return enum_name(f, kElemFns); }
ElemFn elem_fn_from_string(const std::string &s) { return enum_value(s, kElemFns, "function"); }
const char *to_string(ArithFn f) { return enum_name(f, kArithFns); }
ArithFn arith_fn_from_string(const std::string &s) {
    return enum_value(s, kArithFns, "arithmetic function");
}
const char *to_string(AggFn f) { return enum_name(f, kAggFns); }
AggFn agg_fn_from_string(const std::string &s) { return enum_value(s, kAggFns, "aggregate"); }
const char *to_string(PostFn f) { return enum_name(f, kPostFns); }
PostFn post_fn_from_string(const std::string &s) {
    return enum_value(s, kPostFns, "post function");
}

// --- categorize ---------------------------------------------------------------

namespace {

DimLabel dim(const std::string &tensor, const std::string &axis) { return DimLabel{tensor, axis}; }

// The contracted axis pair of a matmul, derived from operand layouts.
// A always contracts its chunked (last) axis. B contracts:
//   - its first axis when B is a stored weight/constant (natural [r, cols...]
//     orientation; preprocessing transposes the physical layout), or
//   - its chunked axis when B is an intermediate already keyed by output
//     columns (attention K), or
//   - a leading key axis when the contraction runs over B's rows and A holds
//     per-element scalars (attention probs x V, expert mixing); this requires
//     A.chunk_size == 1.
struct MatmulForm {
    enum class Kind { weight, pretransposed, row } kind = Kind::weight;
    int64_t b_contract_axis = 0;
};

MatmulForm deduce_matmul_form(const Graph &g, const OpNode &node) {
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &b = g.tensor(node.inputs[1]);
    const TensorDecl &out = g.tensor(node.output);

    std::set<std::string> batch_b;
    for (const auto &bk : node.matmul.batch) {
        batch_b.insert(bk.b_axis);
    }
    if (node.matmul.gate && !node.matmul.gate->weighted) {
        // gate restriction: the gate's b-side key stays a B output axis
    }

    // Candidate: weight form, contract on the axis of B that matches A's
    // chunked axis by name.
    const std::string &shared = a.chunked_axis().name;
    if (b.kind == TensorKind::weight || b.kind == TensorKind::constant) {
        return MatmulForm{MatmulForm::Kind::weight, b.axis_index(shared)};
    }
    // Intermediate B: if B's chunked axis matches A's chunked axis, the
    // operand is already keyed by output columns.
    if (b.chunked_axis().name == shared) {
        return MatmulForm{MatmulForm::Kind::pretransposed, b.rank() - 1};
    }
    // Row contraction: B carries the shared axis as a key column.
    for (int64_t i = 0; i + 1 < b.rank(); ++i) {
        if (b.axes[static_cast<size_t>(i)].name == shared) {
            if (a.chunk_size != 1) {
                throw GraphError(fmt::format(
                    "matmul '{}': row-contraction over '{}' requires scalar lhs (chunk_size 1)",
                    node.id, shared));
            }
            return MatmulForm{MatmulForm::Kind::row, i};
        }
    }
    throw GraphError(fmt::format("matmul '{}': operand '{}' does not carry shared axis '{}'",
                                 node.id, b.name, shared));
    (void)out;
    (void)batch_b;
}

void categorize_matmul(const Graph &g, OpNode &node) {
    if (node.inputs.size() != 2 && !(node.inputs.size() == 3 && node.matmul.gate)) {
        throw GraphError(fmt::format("matmul '{}' expects two operands", node.id));
    }
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &b = g.tensor(node.inputs[1]);
    const TensorDecl &out = g.tensor(node.output);
    MatmulForm form = deduce_matmul_form(g, node);

    node.free_dims.clear();
    node.shared_dims = {{dim(a.name, a.chunked_axis().name),
                         dim(b.name, b.axes[static_cast<size_t>(form.b_contract_axis)].name)}};

    std::set<std::string> b_eliminated;
    b_eliminated.insert(b.axes[static_cast<size_t>(form.b_contract_axis)].name);
    for (const auto &bk : node.matmul.batch) {
        a.axis_index(bk.a_axis);
        b.axis_index(bk.b_axis);
        b_eliminated.insert(bk.b_axis);
    }
    if (node.matmul.gate) {
        const TensorDecl &gate = g.tensor(node.matmul.gate->relation);
        gate.axis_index(node.matmul.gate->a_key); // routing key column must exist there
    }

    node.group_dims.clear();
    for (int64_t i = 0; i + 1 < a.rank(); ++i) {
        node.group_dims.push_back(dim(a.name, a.axes[static_cast<size_t>(i)].name));
    }
    if (form.kind == MatmulForm::Kind::row) {
        for (int64_t i = 0; i < b.rank() - 1; ++i) {
            const std::string &ax = b.axes[static_cast<size_t>(i)].name;
            if (!b_eliminated.count(ax)) {
                node.group_dims.push_back(dim(b.name, ax));
            }
        }
        node.group_dims.push_back(dim(b.name, b.chunked_axis().name));
    } else {
        for (int64_t i = 0; i < b.rank(); ++i) {
            const std::string &ax = b.axes[static_cast<size_t>(i)].name;
            if (i != form.b_contract_axis && !b_eliminated.count(ax)) {
                node.group_dims.push_back(dim(b.name, ax));
            }
        }
    }
    if (node.group_dims.size() < 2) {
        throw GraphError(fmt::format("matmul '{}' must group by at least two dims", node.id));
    }
    // Output rank must match the grouped dims plus, for non-row forms, the
    // re-chunked column axis folded into the last group dim.
    if (out.rank() != static_cast<int64_t>(node.group_dims.size())) {
        throw GraphError(fmt::format("matmul '{}': output rank {} does not match {} group dims",
                                     node.id, out.rank(), node.group_dims.size()));
    }
}

void categorize_elem_fn(const Graph &g, OpNode &node) {
    if (node.inputs.size() != 1) {
        throw GraphError(fmt::format("elementwise_fn '{}' expects one operand", node.id));
    }
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &out = g.tensor(node.output);
    if (a.shape() != out.shape()) {
        throw GraphError(fmt::format("elementwise_fn '{}' must preserve shape", node.id));
    }
    node.free_dims.clear();
    for (const auto &ax : a.axes) {
        node.free_dims.push_back(dim(a.name, ax.name));
    }
    node.shared_dims.clear();
    node.group_dims.clear();
}

void categorize_elem_arith(const Graph &g, OpNode &node) {
    if (node.inputs.size() != 2) {
        throw GraphError(fmt::format("elementwise_arith '{}' expects two operands", node.id));
    }
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &b = g.tensor(node.inputs[1]);
    const TensorDecl &out = g.tensor(node.output);
    if (a.shape() != out.shape()) {
        throw GraphError(fmt::format("elementwise_arith '{}' output shape must match lhs", node.id));
    }
    node.free_dims.clear();
    node.group_dims.clear();
    node.shared_dims.clear();
    bool scalar_rhs = b.rank() == 1 && b.axes[0].size == 1;
    if (!scalar_rhs) {
        // Pair rhs axes with lhs axes by name; lhs axes without a partner
        // broadcast. Both chunked axes must pair with each other.
        for (const auto &ax : b.axes) {
            int64_t ai = a.axis_index(ax.name); // throws when absent
            const Axis &aa = a.axes[static_cast<size_t>(ai)];
            if (aa.size != ax.size) {
                throw GraphError(fmt::format(
                    "elementwise_arith '{}': axis '{}' sizes differ ({} vs {})", node.id, ax.name,
                    aa.size, ax.size));
            }
            node.shared_dims.emplace_back(dim(a.name, ax.name), dim(b.name, ax.name));
        }
        if (b.chunked_axis().name != a.chunked_axis().name) {
            throw GraphError(fmt::format(
                "elementwise_arith '{}': operands must agree on the chunked axis", node.id));
        }
        if (b.chunk_size != a.chunk_size) {
            throw GraphError(fmt::format("elementwise_arith '{}': chunk_size mismatch", node.id));
        }
    }
}

void categorize_reshape(const Graph &g, OpNode &node) {
    if (node.inputs.size() != 1) {
        throw GraphError(fmt::format("reshape '{}' expects one operand", node.id));
    }
    const TensorDecl &a = g.tensor(node.inputs[0]);
    node.free_dims.clear();
    node.shared_dims.clear();
    node.group_dims.clear();
    for (const auto &ax : a.axes) {
        node.group_dims.push_back(dim(a.name, ax.name));
    }
    for (const auto &step : node.reshape.steps) {
        int64_t key_rank = a.rank() - 1; // steps act on key axes only
        switch (step.kind) {
        case ReshapeStep::Kind::flatten:
        case ReshapeStep::Kind::split:
        case ReshapeStep::Kind::shift:
        case ReshapeStep::Kind::stride:
            if (step.axis < 0 || step.axis >= key_rank + 1) {
                throw GraphError(fmt::format("reshape '{}': step axis out of range", node.id));
            }
            break;
        case ReshapeStep::Kind::permute:
            break;
        }
    }
}

void categorize_normalization(const Graph &g, OpNode &node) {
    if (node.inputs.size() != 1) {
        throw GraphError(fmt::format("normalization '{}' expects one operand", node.id));
    }
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const auto &attr = node.normalization;
    if (attr.epsilon == 0.0 && attr.g == PostFn::div_sqrt_eps) {
        throw GraphError(
            fmt::format("normalization '{}': div_sqrt_eps requires epsilon > 0", node.id));
    }
    if (attr.agg == AggFn::top_k && attr.top_k <= 0) {
        throw GraphError(fmt::format("normalization '{}': TOP_K needs top_k >= 1", node.id));
    }
    // Aggregation always runs over the chunked axis; remaining axes group.
    node.free_dims = {dim(a.name, a.chunked_axis().name)};
    node.group_dims.clear();
    node.shared_dims.clear();
    for (int64_t i = 0; i + 1 < a.rank(); ++i) {
        const std::string &ax = a.axes[static_cast<size_t>(i)].name;
        node.group_dims.push_back(dim(a.name, ax));
        node.shared_dims.emplace_back(dim(a.name, ax), dim(a.name, ax));
    }
}

void categorize_lookup(const Graph &g, OpNode &node) {
    if (node.inputs.size() != 2) {
        throw GraphError(fmt::format("lookup '{}' expects (table, keys)", node.id));
    }
    const TensorDecl &table = g.tensor(node.inputs[0]);
    const TensorDecl &keys = g.tensor(node.inputs[1]);
    table.axis_index(node.lookup.table_key);
    node.shared_dims = {
        {dim(table.name, node.lookup.table_key), dim(keys.name, node.lookup.input_key)}};
    node.free_dims.clear();
    const TensorDecl &out = g.tensor(node.output);
    for (const auto &ax : out.axes) {
        node.free_dims.push_back(dim(out.name, ax.name));
    }
    node.group_dims.clear();
}

void categorize_slice(const Graph &g, OpNode &node) {
    const TensorDecl &a = g.tensor(node.inputs.at(0));
    const auto &attr = node.slice;
    if (attr.axis < 0 || attr.axis >= a.rank()) {
        throw GraphError(fmt::format("slice '{}': axis out of range", node.id));
    }
    int64_t n = a.axes[static_cast<size_t>(attr.axis)].size;
    if (attr.begin < 0 || attr.end <= attr.begin || attr.end > n) {
        throw GraphError(fmt::format("slice '{}': bad range [{}, {})", node.id, attr.begin,
                                     attr.end));
    }
    node.free_dims.clear();
    for (const auto &ax : a.axes) {
        node.free_dims.push_back(dim(a.name, ax.name));
    }
}

void categorize_concat(const Graph &g, OpNode &node) {
    if (node.inputs.size() < 2) {
        throw GraphError(fmt::format("concat '{}' expects two or more operands", node.id));
    }
    const TensorDecl &first = g.tensor(node.inputs[0]);
    for (const auto &in : node.inputs) {
        const TensorDecl &t = g.tensor(in);
        if (t.rank() != first.rank()) {
            throw GraphError(fmt::format("concat '{}': rank mismatch on '{}'", node.id, in));
        }
    }
    node.free_dims.clear();
    for (const auto &ax : first.axes) {
        node.free_dims.push_back(dim(first.name, ax.name));
    }
}

void categorize_transpose(const Graph &g, OpNode &node) {
    const TensorDecl &a = g.tensor(node.inputs.at(0));
    if (node.transpose.mode == TransposeAttr::Mode::transpose) {
        if (a.rank() != 2) {
            throw GraphError(fmt::format("transpose_fallback '{}' needs a rank-2 operand", node.id));
        }
    } else {
        const auto &perm = node.transpose.perm;
        int64_t period = static_cast<int64_t>(perm.size());
        if (period <= 0 || a.chunked_axis().size % period != 0) {
            throw GraphError(fmt::format(
                "transpose_fallback '{}': permutation period {} does not divide axis width {}",
                node.id, period, a.chunked_axis().size));
        }
        std::vector<bool> seen(perm.size(), false);
        for (int64_t p : perm) {
            if (p < 0 || p >= static_cast<int64_t>(perm.size()) || seen[static_cast<size_t>(p)]) {
                throw GraphError(
                    fmt::format("transpose_fallback '{}': not a permutation", node.id));
            }
            seen[static_cast<size_t>(p)] = true;
        }
    }
    node.free_dims.clear();
    node.shared_dims.clear();
    node.group_dims.clear();
}

} // namespace

void categorize(const Graph &g, OpNode &node) {
    switch (node.category) {
    case OpCategory::matmul: categorize_matmul(g, node); break;
    case OpCategory::elementwise_fn: categorize_elem_fn(g, node); break;
    case OpCategory::elementwise_arith: categorize_elem_arith(g, node); break;
    case OpCategory::reshape: categorize_reshape(g, node); break;
    case OpCategory::normalization: categorize_normalization(g, node); break;
    case OpCategory::lookup: categorize_lookup(g, node); break;
    case OpCategory::slice: categorize_slice(g, node); break;
    case OpCategory::concat: categorize_concat(g, node); break;
    case OpCategory::transpose_fallback: categorize_transpose(g, node); break;
    }
}

// --- topo sort -----------------------------------------------------------------

std::vector<std::string> topo_sort(const Graph &g) {
    std::map<std::string, std::vector<std::string>> succ; // node -> consumers
    std::map<std::string, int64_t> indegree;
    std::map<std::string, std::string> produced_by;
    for (const auto &n : g.nodes) {
        indegree[n.id] = 0;
        produced_by[n.output] = n.id;
    }
    for (const auto &n : g.nodes) {
        for (const auto &in : n.inputs) {
            auto it = produced_by.find(in);
            if (it != produced_by.end()) {
                succ[it->second].push_back(n.id);
                ++indegree[n.id];
            }
        }
        if (n.matmul.gate) {
            auto it = produced_by.find(n.matmul.gate->relation);
            if (it != produced_by.end()) {
                succ[it->second].push_back(n.id);
                ++indegree[n.id];
            }
        }
    }
    // Kahn with an ordered frontier: ties resolve to the smallest node id.
    std::set<std::string> ready;
    for (const auto &[id, deg] : indegree) {
        if (deg == 0) {
            ready.insert(id);
        }
    }
    std::vector<std::string> order;
    while (!ready.empty()) {
        std::string id = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(id);
        for (const auto &s : succ[id]) {
            if (--indegree[s] == 0) {
                ready.insert(s);
            }
        }
    }
    if (order.size() != g.nodes.size()) {
        std::string cycle;
        for (const auto &[id, deg] : indegree) {
            if (deg > 0) {
                cycle += cycle.empty() ? id : (", " + id);
            }
        }
        throw GraphError(fmt::format("graph contains a cycle through: {}", cycle));
    }
    return order;
}

// --- JSON parse / serialize ------------------------------------------------------

namespace {

ReshapeStep parse_reshape_step(const json &j) {
    ReshapeStep s;
    s.kind = enum_value(j.at("kind").get<std::string>(), kReshapeKinds, "reshape step");
    s.axis = j.value("axis", int64_t{0});
    s.arg = j.value("arg", int64_t{0});
    s.bound = j.value("bound", int64_t{0});
    if (j.contains("perm")) {
        s.perm = j.at("perm").get<std::vector<int64_t>>();
    }
    return s;
}

json reshape_step_json(const ReshapeStep &s) {
    json j;
    j["kind"] = enum_name(s.kind, kReshapeKinds);
    j["axis"] = s.axis;
    if (s.arg != 0) j["arg"] = s.arg;
    if (s.bound != 0) j["bound"] = s.bound;
    if (!s.perm.empty()) j["perm"] = s.perm;
    return j;
}

void parse_attr(const json &j, OpNode &node) {
    const json attr = j.value("attr", json::object());
    switch (node.category) {
    case OpCategory::matmul: {
        for (const auto &b : attr.value("batch", json::array())) {
            node.matmul.batch.push_back(BatchKey{b.at("a").get<std::string>(),
                                                 b.at("b").get<std::string>(),
                                                 b.value("a_div", int64_t{1})});
        }
        if (attr.contains("mask")) {
            const auto &m = attr.at("mask");
            node.matmul.mask = MaskPredicate{m.at("a").get<std::string>(),
                                             m.at("b").get<std::string>(),
                                             m.value("cmp", std::string("<="))};
        }
        if (attr.contains("gate")) {
            const auto &ga = attr.at("gate");
            node.matmul.gate =
                GateSpec{ga.at("relation").get<std::string>(), ga.at("a_key").get<std::string>(),
                         ga.at("b_key").get<std::string>(), ga.value("weighted", false)};
        }
        break;
    }
    case OpCategory::elementwise_fn:
        node.elem_fn.fn = elem_fn_from_string(attr.at("fn").get<std::string>());
        break;
    case OpCategory::elementwise_arith:
        node.elem_arith.fn = arith_fn_from_string(attr.at("fn").get<std::string>());
        break;
    case OpCategory::reshape:
        for (const auto &s : attr.value("steps", json::array())) {
            node.reshape.steps.push_back(parse_reshape_step(s));
        }
        break;
    case OpCategory::normalization: {
        auto &n = node.normalization;
        n.f = elem_fn_from_string(attr.value("f", std::string("identity")));
        n.agg = agg_fn_from_string(attr.value("agg", std::string("SUM")));
        n.g = post_fn_from_string(attr.value("g", std::string("identity")));
        n.epsilon = attr.value("epsilon", 0.0);
        n.agg_divisor = attr.value("agg_divisor", 1.0);
        n.top_k = attr.value("top_k", int64_t{0});
        n.stable = attr.value("stable", true);
        break;
    }
    case OpCategory::lookup:
        node.lookup.table_key = attr.at("table_key").get<std::string>();
        node.lookup.input_key = attr.at("input_key").get<std::string>();
        break;
    case OpCategory::slice:
        node.slice.axis = attr.at("axis").get<int64_t>();
        node.slice.begin = attr.at("begin").get<int64_t>();
        node.slice.end = attr.at("end").get<int64_t>();
        node.slice.squeeze = attr.value("squeeze", false);
        break;
    case OpCategory::concat:
        node.concat.axis = attr.at("axis").get<int64_t>();
        break;
    case OpCategory::transpose_fallback:
        if (attr.value("mode", std::string("transpose")) == "lane_perm") {
            node.transpose.mode = TransposeAttr::Mode::lane_perm;
            node.transpose.perm = attr.at("perm").get<std::vector<int64_t>>();
        }
        break;
    }
}

json attr_json(const OpNode &node) {
    json attr = json::object();
    switch (node.category) {
    case OpCategory::matmul: {
        if (!node.matmul.batch.empty()) {
            json arr = json::array();
            for (const auto &b : node.matmul.batch) {
                json e;
                e["a"] = b.a_axis;
                e["b"] = b.b_axis;
                if (b.a_div != 1) e["a_div"] = b.a_div;
                arr.push_back(e);
            }
            attr["batch"] = arr;
        }
        if (node.matmul.mask) {
            attr["mask"] = {{"a", node.matmul.mask->a_axis},
                            {"b", node.matmul.mask->b_axis},
                            {"cmp", node.matmul.mask->cmp}};
        }
        if (node.matmul.gate) {
            attr["gate"] = {{"relation", node.matmul.gate->relation},
                            {"a_key", node.matmul.gate->a_key},
                            {"b_key", node.matmul.gate->b_key},
                            {"weighted", node.matmul.gate->weighted}};
        }
        break;
    }
    case OpCategory::elementwise_fn:
        attr["fn"] = to_string(node.elem_fn.fn);
        break;
    case OpCategory::elementwise_arith:
        attr["fn"] = to_string(node.elem_arith.fn);
        break;
    case OpCategory::reshape: {
        json arr = json::array();
        for (const auto &s : node.reshape.steps) {
            arr.push_back(reshape_step_json(s));
        }
        attr["steps"] = arr;
        break;
    }
    case OpCategory::normalization: {
        const auto &n = node.normalization;
        attr["f"] = to_string(n.f);
        attr["agg"] = to_string(n.agg);
        attr["g"] = to_string(n.g);
        if (n.epsilon != 0.0) attr["epsilon"] = n.epsilon;
        if (n.agg_divisor != 1.0) attr["agg_divisor"] = n.agg_divisor;
        if (n.top_k != 0) attr["top_k"] = n.top_k;
        if (!n.stable) attr["stable"] = false;
        break;
    }
    case OpCategory::lookup:
        attr["table_key"] = node.lookup.table_key;
        attr["input_key"] = node.lookup.input_key;
        break;
    case OpCategory::slice:
        attr["axis"] = node.slice.axis;
        attr["begin"] = node.slice.begin;
        attr["end"] = node.slice.end;
        if (node.slice.squeeze) attr["squeeze"] = true;
        break;
    case OpCategory::concat:
        attr["axis"] = node.concat.axis;
        break;
    case OpCategory::transpose_fallback:
        attr["mode"] =
            node.transpose.mode == TransposeAttr::Mode::lane_perm ? "lane_perm" : "transpose";
        if (!node.transpose.perm.empty()) attr["perm"] = node.transpose.perm;
        break;
    }
    return attr;
}

void validate_graph(Graph &g) {
    for (auto &[name, t] : g.tensors) {
        if (t.axes.empty()) {
            throw GraphError(fmt::format("tensor '{}' has no axes", name));
        }
        for (const auto &ax : t.axes) {
            if (ax.size <= 0) {
                throw GraphError(fmt::format("tensor '{}': axis '{}' must be positive", name,
                                             ax.name));
            }
        }
        if (t.chunk_size <= 0 || t.chunked_axis().size % t.chunk_size != 0) {
            throw GraphError(fmt::format(
                "tensor '{}': chunked axis width {} not divisible by chunk_size {}", name,
                t.chunked_axis().size, t.chunk_size));
        }
        std::set<std::string> ax_names;
        for (const auto &ax : t.axes) {
            if (!ax_names.insert(ax.name).second) {
                throw GraphError(fmt::format("tensor '{}': duplicate axis '{}'", name, ax.name));
            }
        }
    }
    std::set<std::string> ids;
    std::set<std::string> produced;
    for (auto &n : g.nodes) {
        if (!ids.insert(n.id).second) {
            throw GraphError(fmt::format("duplicate node id '{}'", n.id));
        }
        for (const auto &in : n.inputs) {
            g.tensor(in);
        }
        const TensorDecl &out = g.tensor(n.output);
        if (out.kind == TensorKind::weight || out.kind == TensorKind::constant ||
            out.kind == TensorKind::input) {
            throw GraphError(fmt::format("node '{}' writes non-intermediate tensor '{}'", n.id,
                                         n.output));
        }
        if (!produced.insert(n.output).second) {
            throw GraphError(fmt::format("tensor '{}' produced by more than one node", n.output));
        }
    }
    for (auto &n : g.nodes) {
        for (const auto &in : n.inputs) {
            const TensorDecl &t = g.tensor(in);
            if (t.kind == TensorKind::intermediate || t.kind == TensorKind::output) {
                if (!produced.count(in)) {
                    throw GraphError(
                        fmt::format("node '{}' reads unproduced tensor '{}'", n.id, in));
                }
            }
        }
    }
    for (const auto &o : g.outputs) {
        g.tensor(o);
    }
    for (const auto &p : g.persistent) {
        g.tensor(p);
    }
    for (auto &n : g.nodes) {
        categorize(g, n);
    }
    topo_sort(g); // throws on cycles
}

} // namespace

Graph parse_graph(const std::string &json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception &e) {
        throw GraphError(fmt::format("graph document is not valid JSON: {}", e.what()));
    }
    Graph g;
    try {
        for (const auto &tj : j.at("tensors")) {
            TensorDecl t;
            t.name = tj.at("name").get<std::string>();
            for (const auto &aj : tj.at("axes")) {
                t.axes.push_back(Axis{aj.at("name").get<std::string>(),
                                      aj.at("size").get<int64_t>()});
            }
            t.kind = enum_value(tj.at("kind").get<std::string>(), kKinds, "tensor kind");
            t.chunk_size = tj.value("chunk_size", int64_t{1});
            if (tj.value("encoding", std::string("dense")) == "token") {
                t.encoding = InputEncoding::token;
            }
            if (g.tensors.count(t.name)) {
                throw GraphError(fmt::format("duplicate tensor '{}'", t.name));
            }
            g.tensors[t.name] = std::move(t);
        }
        for (const auto &nj : j.at("nodes")) {
            OpNode n;
            n.id = nj.at("id").get<std::string>();
            n.category = op_category_from_string(nj.at("op").get<std::string>());
            n.inputs = nj.at("inputs").get<std::vector<std::string>>();
            n.output = nj.at("output").get<std::string>();
            parse_attr(nj, n);
            g.nodes.push_back(std::move(n));
        }
        g.outputs = j.at("outputs").get<std::vector<std::string>>();
        for (const auto &p : j.value("persistent", json::array())) {
            g.persistent.insert(p.get<std::string>());
        }
    } catch (const json::exception &e) {
        throw GraphError(fmt::format("graph document schema violation: {}", e.what()));
    }
    validate_graph(g);
    return g;
}

std::string serialize_graph(const Graph &g) {
    json j;
    j["tensors"] = json::array();
    for (const auto &[name, t] : g.tensors) {
        json tj;
        tj["name"] = t.name;
        tj["axes"] = json::array();
        for (const auto &ax : t.axes) {
            tj["axes"].push_back({{"name", ax.name}, {"size", ax.size}});
        }
        tj["kind"] = enum_name(t.kind, kKinds);
        tj["chunk_size"] = t.chunk_size;
        if (t.encoding == InputEncoding::token) {
            tj["encoding"] = "token";
        }
        j["tensors"].push_back(tj);
    }
    j["nodes"] = json::array();
    for (const auto &n : g.nodes) {
        json nj;
        nj["id"] = n.id;
        nj["op"] = to_string(n.category);
        nj["inputs"] = n.inputs;
        nj["output"] = n.output;
        json attr = attr_json(n);
        if (!attr.empty()) {
            nj["attr"] = attr;
        }
        j["nodes"].push_back(nj);
    }
    j["outputs"] = g.outputs;
    j["persistent"] = json::array();
    for (const auto &p : g.persistent) {
        j["persistent"].push_back(p);
    }
    return j.dump(2) + "\n";
}

uint64_t graph_hash(const Graph &g) {
    std::string s = serialize_graph(g);
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace relic
