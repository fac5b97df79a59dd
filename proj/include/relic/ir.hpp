// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

// ---------------------------------------------------------------------------
// Computation-graph IR.
//
// Every tensor is stored relationally as one record per (leading keys...,
// chunk_id) with a fixed-length vector of values. The last declared axis is
// the chunked axis; all other axes become integer key columns named after
// the axis. chunk_size == 1 degenerates to one value per (keys..., col_id).
// ---------------------------------------------------------------------------

struct Axis {
    std::string name;
    int64_t size = 0;
};

enum class TensorKind { weight, constant, input, intermediate, output };

enum class InputEncoding { dense, token };

struct TensorDecl {
    std::string name;
    std::vector<Axis> axes;
    TensorKind kind = TensorKind::intermediate;
    int64_t chunk_size = 1;
    InputEncoding encoding = InputEncoding::dense;

    int64_t rank() const { return static_cast<int64_t>(axes.size()); }
    const Axis &chunked_axis() const { return axes.back(); }
    int64_t chunk_count() const { return axes.back().size / chunk_size; }
    int64_t axis_index(const std::string &axis_name) const;
    std::vector<int64_t> shape() const;
};

enum class OpCategory {
    matmul,
    elementwise_fn,
    elementwise_arith,
    reshape,
    normalization,
    lookup,
    slice,
    concat,
    transpose_fallback,
};

const char *to_string(OpCategory c);
OpCategory op_category_from_string(const std::string &s);

// Scalar functions available to element-wise templates. Closed registry;
// anything else is rejected at parse time.
enum class ElemFn { sigmoid, silu, exp, relu, square, identity, neg };
const char *to_string(ElemFn f);
ElemFn elem_fn_from_string(const std::string &s);

enum class ArithFn { add, sub, mul };
const char *to_string(ArithFn f);
ArithFn arith_fn_from_string(const std::string &s);

// --- category attributes ----------------------------------------------------

// Extra equi-join key between matmul operands, with integer divisors so a
// head index can join a coarser group index (GQA: a_axis/a_div = b_axis).
struct BatchKey {
    std::string a_axis;
    std::string b_axis;
    int64_t a_div = 1;
};

// Join-predicate mask, e.g. causal attention key_pos <= query_pos.
struct MaskPredicate {
    std::string a_axis; // query-side axis
    std::string b_axis; // key-side axis
    std::string cmp;    // "<=" is the only comparison in use
};

// Restrict (and optionally weight) the rhs operand through a routing
// relation, used for mixture-of-experts expert selection.
struct GateSpec {
    std::string relation; // routing tensor: (keys..., choice, weight)
    std::string a_key;    // axis of A joined to the routing key column
    std::string b_key;    // axis of B joined to the routing choice column
    bool weighted = false;
};

struct MatmulAttr {
    std::vector<BatchKey> batch;
    std::optional<MaskPredicate> mask;
    std::optional<GateSpec> gate;
};

struct ElemFnAttr {
    ElemFn fn = ElemFn::identity;
};

struct ElemArithAttr {
    ArithFn fn = ArithFn::add;
};

// Reshape steps are closed-form, invertible index rewrites on key axes.
struct ReshapeStep {
    enum class Kind { flatten, split, permute, shift, stride } kind = Kind::flatten;
    // flatten: axes a,b -> a*size(b)+b     (a = axis, b = axis+1)
    // split:   axis a -> (a/arg, a%arg)
    // permute: reorder key axes by perm
    // shift:   axis a -> a - arg, rows falling outside [0, bound) dropped
    // stride:  axis a -> a / arg, rows with a % arg != 0 dropped
    int64_t axis = 0;
    int64_t arg = 0;
    int64_t bound = 0;
    std::vector<int64_t> perm;
};

struct ReshapeAttr {
    std::vector<ReshapeStep> steps;
};

enum class AggFn { sum, max, top_k };
const char *to_string(AggFn f);
AggFn agg_fn_from_string(const std::string &s);

enum class PostFn { div, div_sqrt_eps, identity };
const char *to_string(PostFn f);
PostFn post_fn_from_string(const std::string &s);

// Normalize_{f,agg,g}: apply f per element, aggregate over the shared axes,
// then combine each element with the aggregate through g.
struct NormalizationAttr {
    ElemFn f = ElemFn::identity;
    AggFn agg = AggFn::sum;
    PostFn g = PostFn::identity;
    double epsilon = 0.0;
    double agg_divisor = 1.0; // divides the aggregate (mean = sum / n)
    int64_t top_k = 0;        // only for agg == top_k
    bool stable = true;       // softmax: subtract the row max before exp
};

struct LookupAttr {
    std::string table_key; // key column of the table relation
    std::string input_key; // matching column of the key relation
};

struct SliceAttr {
    int64_t axis = 0;
    int64_t begin = 0;
    int64_t end = 0;
    bool squeeze = false; // drop the axis when end - begin == 1
};

struct ConcatAttr {
    int64_t axis = 0;
};

struct TransposeAttr {
    enum class Mode { transpose, lane_perm } mode = Mode::transpose;
    std::vector<int64_t> perm; // lane_perm: out[l] = in[perm[l]]
};

// --- node -------------------------------------------------------------------

// Qualified dimension label "<tensor>.<axis>".
struct DimLabel {
    std::string tensor;
    std::string axis;
    std::string str() const { return tensor + "." + axis; }
    bool operator==(const DimLabel &) const = default;
    auto operator<=>(const DimLabel &) const = default;
};

struct OpNode {
    std::string id;
    OpCategory category = OpCategory::elementwise_fn;
    std::vector<std::string> inputs;
    std::string output;

    // F/S/G parameterization: free dims carried through untouched, shared
    // dims joined (and eliminated by aggregation where the template says so),
    // group dims emitted as grouping keys.
    std::vector<DimLabel> free_dims;
    std::vector<std::pair<DimLabel, DimLabel>> shared_dims;
    std::vector<DimLabel> group_dims;

    MatmulAttr matmul;
    ElemFnAttr elem_fn;
    ElemArithAttr elem_arith;
    ReshapeAttr reshape;
    NormalizationAttr normalization;
    LookupAttr lookup;
    SliceAttr slice;
    ConcatAttr concat;
    TransposeAttr transpose;
};

struct Graph {
    std::map<std::string, TensorDecl> tensors;
    std::vector<OpNode> nodes;
    std::vector<std::string> outputs;
    std::set<std::string> persistent;

    const TensorDecl &tensor(const std::string &name) const;
    const OpNode *producer(const std::string &tensor_name) const;
    std::vector<const OpNode *> consumers(const std::string &tensor_name) const;
    const OpNode &node(const std::string &id) const;
};

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse and fully validate a graph document (JSON text). Checks the schema,
// tensor invariants (divisible chunked axis, unique names), per-category
// F/S/G rules and acyclicity; throws GraphError naming the offender.
Graph parse_graph(const std::string &json_text);

// Serialize back to the document format (canonical field order, so equal
// graphs serialize byte-identically).
std::string serialize_graph(const Graph &g);

// Populate category and F/S/G for a raw node against declared tensors.
// Unknown operator names are an error, never a silent fallback.
void categorize(const Graph &g, OpNode &node);

// Deterministic topological order; ties broken by ascending node id.
std::vector<std::string> topo_sort(const Graph &g);

// FNV-1a hash of the canonical serialization; stamped on emitted scripts.
uint64_t graph_hash(const Graph &g);

} // namespace relic
