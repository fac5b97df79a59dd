// SPDX-License-Identifier: Apache-2.0
#include "relic/sqlgen.hpp"

#include <algorithm>
#include <regex>

#include <fmt/format.h>

namespace relic {

Dialect Dialect::array() { return Dialect{}; }

Dialect Dialect::scalar() {
    Dialect d;
    d.id = Id::scalar;
    d.dot_fn.clear();
    return d;
}

std::string rename_relation(const std::string &sql, const std::string &from,
                            const std::string &to) {
    std::regex re("\\b" + from + "\\b");
    return std::regex_replace(sql, re, to);
}

std::string elem_fn_sql(ElemFn fn, const std::string &x) {
    switch (fn) {
    case ElemFn::sigmoid: return fmt::format("1.0 / (1.0 + exp(-({})))", x);
    case ElemFn::silu: return fmt::format("({0}) / (1.0 + exp(-({0})))", x);
    case ElemFn::exp: return fmt::format("exp({})", x);
    case ElemFn::relu: return fmt::format("greatest({}, 0.0)", x);
    case ElemFn::square: return fmt::format("({0}) * ({0})", x);
    case ElemFn::identity: return x;
    case ElemFn::neg: return fmt::format("-({})", x);
    }
    return x;
}

namespace {

struct Emitter {
    const Preprocessed &pp;
    const Dialect &dialect;
    const ScriptBindings &binds;
    SqlUnit unit;

    const StoredRelation &layout(const std::string &tensor) const {
        return pp.layout.at(tensor);
    }

    // Relation name an operand is read from, with dependency bookkeeping.
    std::string resolve(const std::string &tensor) {
        const TensorDecl &t = pp.graph.tensor(tensor);
        std::string rel;
        if (t.kind == TensorKind::weight || t.kind == TensorKind::constant) {
            rel = layout(tensor).table;
        } else if (t.kind == TensorKind::input) {
            auto it = binds.input_relation.find(tensor);
            if (it == binds.input_relation.end()) {
                throw CodegenError(fmt::format("no runtime binding for input '{}'", tensor));
            }
            rel = it->second;
        } else {
            const OpNode *prod = pp.graph.producer(tensor);
            if (!prod) {
                throw CodegenError(fmt::format("tensor '{}' has no producer", tensor));
            }
            unit.depends_on.insert(prod->id);
            auto it = binds.persistent_table.find(tensor);
            if (it != binds.persistent_table.end()) {
                rel = it->second;
            } else {
                rel = "v_" + prod->id;
            }
        }
        unit.referenced.insert(rel);
        return rel;
    }

    // Column carrying a (non-chunked) axis of a tensor.
    std::string col(const std::string &tensor, const std::string &axis) const {
        const StoredRelation &sr = layout(tensor);
        for (const auto &c : sr.key_cols) {
            if (c.decl_axis == axis) {
                return c.column;
            }
        }
        throw CodegenError(
            fmt::format("tensor '{}': axis '{}' is not a key column", tensor, axis));
    }

    std::string chunk_col(const std::string &tensor) const {
        return layout(tensor).chunk_size == 1 ? "col_id" : "chunk_id";
    }
    std::string val_col(const std::string &tensor) const {
        return layout(tensor).chunk_size == 1 ? "value" : "vec";
    }

    std::string lambda1(const std::string &body_with_x) const {
        return dialect.lambda_arrow ? fmt::format("x -> {}", body_with_x)
                                    : fmt::format("lambda x: {}", body_with_x);
    }
    std::string lambda2(const std::string &body_with_x_i) const {
        return dialect.lambda_arrow ? fmt::format("(x, i) -> {}", body_with_x_i)
                                    : fmt::format("lambda x, i: {}", body_with_x_i);
    }
};

std::string join_list(const std::vector<std::string> &parts, const std::string &sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

// --- matmul -------------------------------------------------------------------

// Mirrors the oracle's operand analysis: the same three matmul forms.
struct SqlMatmulPlan {
    enum class Form { weight, pretransposed, row } form = Form::weight;
    std::string b_contract_axis;
    std::vector<std::string> b_col_axes; // decl axis names emitted as output columns
};

SqlMatmulPlan sql_plan_matmul(const Graph &g, const OpNode &node) {
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &b = g.tensor(node.inputs[1]);
    SqlMatmulPlan plan;
    const std::string &shared = a.chunked_axis().name;
    std::set<std::string> eliminated{shared};
    for (const auto &bk : node.matmul.batch) {
        eliminated.insert(bk.b_axis);
    }
    if (b.kind == TensorKind::weight || b.kind == TensorKind::constant) {
        plan.form = SqlMatmulPlan::Form::weight;
    } else if (b.chunked_axis().name == shared) {
        plan.form = SqlMatmulPlan::Form::pretransposed;
    } else {
        plan.form = SqlMatmulPlan::Form::row;
    }
    plan.b_contract_axis = shared;
    if (plan.form == SqlMatmulPlan::Form::row) {
        for (int64_t i = 0; i + 1 < b.rank(); ++i) {
            const std::string &ax = b.axes[static_cast<size_t>(i)].name;
            if (!eliminated.count(ax)) {
                plan.b_col_axes.push_back(ax);
            }
        }
        plan.b_col_axes.push_back(b.chunked_axis().name);
    } else {
        for (const auto &ax : b.axes) {
            if (!eliminated.count(ax.name)) {
                plan.b_col_axes.push_back(ax.name);
            }
        }
    }
    return plan;
}

void gen_matmul(Emitter &e, const OpNode &node) {
    const Graph &g = e.pp.graph;
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &b = g.tensor(node.inputs[1]);
    const TensorDecl &out = g.tensor(node.output);
    const StoredRelation &sa = e.layout(a.name);
    const StoredRelation &sb = e.layout(b.name);
    if (sa.chunk_size != sb.chunk_size &&
        sql_plan_matmul(g, node).form != SqlMatmulPlan::Form::row) {
        throw CodegenError(fmt::format("matmul '{}': chunk_size mismatch ({} vs {})", node.id,
                                       sa.chunk_size, sb.chunk_size));
    }
    SqlMatmulPlan plan = sql_plan_matmul(g, node);

    std::string ra = e.resolve(a.name);
    std::string rb = e.resolve(b.name);

    std::vector<std::string> join_conds;
    std::vector<std::string> select_keys; // projected key columns AS output names
    std::vector<std::string> group_keys;

    int64_t a_keys = a.rank() - 1;
    for (int64_t i = 0; i < a_keys; ++i) {
        std::string expr =
            fmt::format("a.{}", e.col(a.name, a.axes[static_cast<size_t>(i)].name));
        select_keys.push_back(
            fmt::format("{} AS {}", expr, out.axes[static_cast<size_t>(i)].name));
        group_keys.push_back(expr);
    }

    for (const auto &bk : node.matmul.batch) {
        std::string lhs = fmt::format("a.{}", e.col(a.name, bk.a_axis));
        if (bk.a_div != 1) {
            lhs = fmt::format("({} // {})", lhs, bk.a_div);
        }
        join_conds.push_back(fmt::format("{} = b.{}", lhs, e.col(b.name, bk.b_axis)));
    }
    if (node.matmul.mask) {
        join_conds.push_back(fmt::format("b.{} {} a.{}",
                                         e.col(b.name, node.matmul.mask->b_axis),
                                         node.matmul.mask->cmp,
                                         e.col(a.name, node.matmul.mask->a_axis)));
    }
    std::string gate_join;
    std::string gate_factor;
    if (node.matmul.gate) {
        const GateSpec &gs = *node.matmul.gate;
        std::string rg = e.resolve(gs.relation);
        gate_join = fmt::format(" JOIN {} rt ON rt.{} = a.{} AND rt.col_id = b.{}", rg,
                                e.col(gs.relation, gs.a_key), e.col(a.name, gs.a_key),
                                e.col(b.name, gs.b_key));
        if (gs.weighted) {
            gate_factor = " * rt.value";
        }
    }

    if (plan.form == SqlMatmulPlan::Form::row) {
        // contraction over B's rows: the lhs holds one scalar per shared
        // index, so each output lane is a plain SUM
        join_conds.push_back(fmt::format("b.{} = a.{}", e.col(b.name, plan.b_contract_axis),
                                         e.chunk_col(a.name)));
        size_t out_axis = static_cast<size_t>(a_keys);
        for (size_t i = 0; i + 1 < plan.b_col_axes.size(); ++i, ++out_axis) {
            std::string expr = fmt::format("b.{}", e.col(b.name, plan.b_col_axes[i]));
            select_keys.push_back(fmt::format("{} AS {}", expr, out.axes[out_axis].name));
            group_keys.push_back(expr);
        }
        int64_t cs_b = sb.chunk_size;
        std::string chunk_expr = fmt::format("b.{}", e.chunk_col(b.name));
        group_keys.push_back(chunk_expr);
        std::string vec_expr;
        if (cs_b == 1) {
            vec_expr = fmt::format("SUM(a.value * b.value{}) AS value", gate_factor);
            select_keys.push_back(chunk_expr + " AS col_id");
        } else {
            std::vector<std::string> lanes;
            for (int64_t l = 1; l <= cs_b; ++l) {
                lanes.push_back(fmt::format("SUM(a.value * b.vec[{}]{})", l, gate_factor));
            }
            vec_expr = fmt::format("[{}] AS vec", join_list(lanes, ", "));
            select_keys.push_back(chunk_expr + " AS chunk_id");
        }
        e.unit.body = fmt::format("SELECT {}, {}\nFROM {} a JOIN {} b ON {}{}\nGROUP BY {}",
                                  join_list(select_keys, ", "), vec_expr, ra, rb,
                                  join_list(join_conds, " AND "), gate_join,
                                  join_list(group_keys, ", "));
        return;
    }

    // chunk-aligned contraction: join on the chunk index, SUM of per-chunk
    // dot products, grouped by the output dims
    join_conds.insert(join_conds.begin(),
                      fmt::format("a.{} = b.{}", e.chunk_col(a.name), e.chunk_col(b.name)));
    std::string prod;
    if (sa.chunk_size == 1) {
        prod = "a.value * b.value";
    } else {
        prod = fmt::format("{}(a.vec, b.vec)", e.dialect.dot_fn);
    }

    size_t out_axis = static_cast<size_t>(a_keys);
    for (size_t i = 0; i + 1 < plan.b_col_axes.size(); ++i, ++out_axis) {
        std::string expr = fmt::format("b.{}", e.col(b.name, plan.b_col_axes[i]));
        select_keys.push_back(fmt::format("{} AS {}", expr, out.axes[out_axis].name));
        group_keys.push_back(expr);
    }
    std::string col_expr = fmt::format("b.{}", e.col(b.name, plan.b_col_axes.back()));
    group_keys.push_back(col_expr);

    std::string stage1 = fmt::format(
        "SELECT {}{}{} AS col_key, SUM({}{}) AS value\nFROM {} a JOIN {} b ON {}{}\nGROUP BY {}",
        join_list(select_keys, ", "), select_keys.empty() ? "" : ", ", col_expr, prod,
        gate_factor, ra, rb, join_list(join_conds, " AND "), gate_join,
        join_list(group_keys, ", "));

    int64_t out_cs = e.layout(out.name).chunk_size;
    if (out_cs == 1) {
        e.unit.body = rename_relation(stage1, "col_key", "col_id");
        return;
    }
    // re-chunk the scalar result into the output layout
    std::vector<std::string> outer_keys;
    for (size_t i = 0; i + 1 < out.axes.size(); ++i) {
        outer_keys.push_back(out.axes[i].name);
    }
    std::string outer_sel = outer_keys.empty() ? "" : join_list(outer_keys, ", ") + ", ";
    e.unit.body = fmt::format(
        "SELECT {0}col_key // {1} AS chunk_id, list(value ORDER BY col_key) AS vec\nFROM "
        "(\n{2}\n)\nGROUP BY {0}col_key // {1}",
        outer_sel, out_cs, stage1);
}

// --- element-wise -----------------------------------------------------------------

void gen_elementwise_fn(Emitter &e, const OpNode &node) {
    const TensorDecl &a = e.pp.graph.tensor(node.inputs[0]);
    std::string ra = e.resolve(a.name);
    std::vector<std::string> cols;
    for (size_t i = 0; i + 1 < a.axes.size(); ++i) {
        cols.push_back(fmt::format("a.{}", e.col(a.name, a.axes[i].name)));
    }
    cols.push_back(fmt::format("a.{}", e.chunk_col(a.name)));
    std::string value;
    if (node.elem_fn.fn == ElemFn::identity) {
        value = fmt::format("a.{}", e.val_col(a.name));
    } else if (e.layout(a.name).chunk_size == 1) {
        value = elem_fn_sql(node.elem_fn.fn, "a.value") + " AS value";
    } else {
        value = fmt::format("list_transform(a.vec, {}) AS vec",
                            e.lambda1(elem_fn_sql(node.elem_fn.fn, "x")));
    }
    e.unit.body = fmt::format("SELECT {}, {}\nFROM {} a", join_list(cols, ", "), value, ra);
}

const char *arith_op(ArithFn fn) {
    switch (fn) {
    case ArithFn::add: return "+";
    case ArithFn::sub: return "-";
    case ArithFn::mul: return "*";
    }
    return "+";
}

void gen_elementwise_arith(Emitter &e, const OpNode &node) {
    const Graph &g = e.pp.graph;
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &b = g.tensor(node.inputs[1]);
    std::string ra = e.resolve(a.name);
    std::string rb = e.resolve(b.name);
    const char *op = arith_op(node.elem_arith.fn);
    int64_t cs = e.layout(a.name).chunk_size;

    std::vector<std::string> cols;
    for (size_t i = 0; i + 1 < a.axes.size(); ++i) {
        cols.push_back(fmt::format("a.{}", e.col(a.name, a.axes[i].name)));
    }
    cols.push_back(fmt::format("a.{}", e.chunk_col(a.name)));

    bool scalar_rhs = b.rank() == 1 && b.axes[0].size == 1;
    std::string value;
    std::string from;
    if (scalar_rhs) {
        from = fmt::format("{} a CROSS JOIN {} b", ra, rb);
        value = cs == 1 ? fmt::format("a.value {} b.value AS value", op)
                        : fmt::format("list_transform(a.vec, {}) AS vec",
                                      e.lambda1(fmt::format("x {} b.value", op)));
    } else {
        std::vector<std::string> conds;
        for (const auto &ax : b.axes) {
            if (ax.name == b.chunked_axis().name) {
                conds.push_back(fmt::format("a.{0} = b.{0}", e.chunk_col(a.name)));
            } else {
                conds.push_back(
                    fmt::format("a.{} = b.{}", e.col(a.name, ax.name), e.col(b.name, ax.name)));
            }
        }
        from = fmt::format("{} a JOIN {} b ON {}", ra, rb, join_list(conds, " AND "));
        value = cs == 1 ? fmt::format("a.value {} b.value AS value", op)
                        : fmt::format("list_transform(a.vec, {}) AS vec",
                                      e.lambda2(fmt::format("x {} b.vec[i]", op)));
    }
    e.unit.body = fmt::format("SELECT {}, {}\nFROM {}", join_list(cols, ", "), value, from);
}

// --- reshape ----------------------------------------------------------------------

void gen_reshape(Emitter &e, const OpNode &node) {
    const Graph &g = e.pp.graph;
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &out = g.tensor(node.output);
    std::string ra = e.resolve(a.name);
    int64_t cs = e.layout(a.name).chunk_size;

    // virtual columns: every axis as an expression; the chunked axis is
    // tracked at chunk granularity
    struct VC {
        int64_t size; // axis extent; for the chunked axis, the chunk count
        std::string expr;
        bool is_chunk;
    };
    std::vector<VC> vcs;
    for (size_t i = 0; i + 1 < a.axes.size(); ++i) {
        vcs.push_back(
            VC{a.axes[i].size, fmt::format("a.{}", e.col(a.name, a.axes[i].name)), false});
    }
    vcs.push_back(
        VC{a.chunked_axis().size / cs, fmt::format("a.{}", e.chunk_col(a.name)), true});

    std::vector<std::string> guards;
    for (const auto &step : node.reshape.steps) {
        size_t ax = static_cast<size_t>(step.axis);
        switch (step.kind) {
        case ReshapeStep::Kind::flatten: {
            if (ax + 1 >= vcs.size()) {
                throw CodegenError(fmt::format("reshape '{}': flatten out of range", node.id));
            }
            VC &hi = vcs[ax];
            VC &lo = vcs[ax + 1];
            lo.expr = fmt::format("({} * {} + {})", hi.expr, lo.size, lo.expr);
            lo.size = hi.size * lo.size;
            vcs.erase(vcs.begin() + static_cast<int64_t>(ax));
            break;
        }
        case ReshapeStep::Kind::split: {
            VC &vc = vcs[ax];
            int64_t inner = step.arg;
            if (vc.is_chunk) {
                if (cs > 1 && inner % cs != 0) {
                    throw CodegenError(fmt::format(
                        "reshape '{}': split at {} not aligned to chunk_size {}", node.id,
                        inner, cs));
                }
                int64_t inner_chunks = cs == 1 ? inner : inner / cs;
                VC head{vc.size / inner_chunks,
                        fmt::format("({} // {})", vc.expr, inner_chunks), false};
                vc.expr = fmt::format("({} % {})", vc.expr, inner_chunks);
                vc.size = inner_chunks;
                vcs.insert(vcs.begin() + static_cast<int64_t>(ax), head);
            } else {
                VC head{vc.size / inner, fmt::format("({} // {})", vc.expr, inner), false};
                vc.expr = fmt::format("({} % {})", vc.expr, inner);
                vc.size = inner;
                vcs.insert(vcs.begin() + static_cast<int64_t>(ax), head);
            }
            break;
        }
        case ReshapeStep::Kind::permute: {
            std::vector<VC> next;
            for (int64_t p : step.perm) {
                next.push_back(vcs[static_cast<size_t>(p)]);
            }
            if (!next.back().is_chunk) {
                throw CodegenError(fmt::format(
                    "reshape '{}': permute must keep the chunked axis last", node.id));
            }
            vcs = std::move(next);
            break;
        }
        case ReshapeStep::Kind::shift: {
            VC &vc = vcs[ax];
            if (vc.is_chunk) {
                throw CodegenError(
                    fmt::format("reshape '{}': shift on chunked axis", node.id));
            }
            vc.expr = fmt::format("({} - {})", vc.expr, step.arg);
            guards.push_back(fmt::format("{} BETWEEN 0 AND {}", vc.expr, step.bound - 1));
            vc.size = step.bound;
            break;
        }
        case ReshapeStep::Kind::stride: {
            VC &vc = vcs[ax];
            if (vc.is_chunk) {
                throw CodegenError(
                    fmt::format("reshape '{}': stride on chunked axis", node.id));
            }
            guards.push_back(fmt::format("{} % {} = 0", vc.expr, step.arg));
            vc.expr = fmt::format("({} // {})", vc.expr, step.arg);
            guards.push_back(fmt::format("{} < {}", vc.expr, step.bound));
            vc.size = step.bound;
            break;
        }
        }
    }
    if (vcs.size() != out.axes.size()) {
        throw CodegenError(fmt::format("reshape '{}': produced {} axes, output declares {}",
                                       node.id, vcs.size(), out.axes.size()));
    }
    std::vector<std::string> cols;
    for (size_t i = 0; i + 1 < vcs.size(); ++i) {
        cols.push_back(fmt::format("{} AS {}", vcs[i].expr, out.axes[i].name));
    }
    cols.push_back(fmt::format("{} AS {}", vcs.back().expr, cs == 1 ? "col_id" : "chunk_id"));
    cols.push_back(fmt::format("a.{}", e.val_col(a.name)));
    std::string where = guards.empty() ? "" : "\nWHERE " + join_list(guards, " AND ");
    e.unit.body = fmt::format("SELECT {}\nFROM {} a{}", join_list(cols, ", "), ra, where);
}

// --- normalization -----------------------------------------------------------------

void gen_normalization(Emitter &e, const OpNode &node) {
    const Graph &g = e.pp.graph;
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const auto &attr = node.normalization;
    std::string ra = e.resolve(a.name);
    int64_t cs = e.layout(a.name).chunk_size;

    std::vector<std::string> keys;
    for (size_t i = 0; i + 1 < a.axes.size(); ++i) {
        keys.push_back(e.col(a.name, a.axes[i].name));
    }
    auto qualified = [&](const char *alias) {
        std::vector<std::string> out;
        for (const auto &k : keys) {
            out.push_back(fmt::format("{}.{}", alias, k));
        }
        return out;
    };
    auto on_keys = [&](const char *la, const char *rb) {
        if (keys.empty()) {
            return std::string("TRUE");
        }
        std::vector<std::string> conds;
        for (const auto &k : keys) {
            conds.push_back(fmt::format("{}.{} = {}.{}", la, k, rb, k));
        }
        return join_list(conds, " AND ");
    };

    if (attr.agg == AggFn::top_k) {
        // k rounds of the MAX pattern with smallest-id tie breaks, then the
        // chosen entries renormalized by their sum
        if (cs != 1) {
            throw CodegenError(
                fmt::format("normalization '{}': TOP_K needs scalar layout", node.id));
        }
        std::string key_sel = keys.empty() ? "" : join_list(qualified("p"), ", ") + ", ";
        std::string key_grp =
            keys.empty() ? "" : " GROUP BY " + join_list(qualified("p"), ", ");
        std::vector<std::string> ctes;
        std::string prev = "src";
        ctes.push_back(fmt::format("src AS (SELECT * FROM {})", ra));
        std::vector<std::string> sel_names;
        for (int64_t r = 0; r < attr.top_k; ++r) {
            std::string mx = fmt::format("mx{}", r);
            std::string sel = fmt::format("sel{}", r);
            std::string ex = fmt::format("ex{}", r);
            ctes.push_back(fmt::format("{} AS (SELECT {}MAX(p.value) AS m FROM {} p{})", mx,
                                       key_sel, prev, key_grp));
            ctes.push_back(fmt::format(
                "{} AS (SELECT {}MIN(p.col_id) AS e FROM {} p JOIN {} m ON {} AND p.value = "
                "m.m{})",
                sel, key_sel, prev, mx, on_keys("p", "m"), key_grp));
            ctes.push_back(
                fmt::format("{} AS (SELECT p.* FROM {} p JOIN {} s ON {} AND p.col_id <> s.e)",
                            ex, prev, sel, on_keys("p", "s")));
            sel_names.push_back(sel);
            prev = ex;
        }
        std::vector<std::string> chosen_parts;
        for (const auto &s : sel_names) {
            std::string cols = keys.empty() ? "e" : join_list(keys, ", ") + ", e";
            chosen_parts.push_back(fmt::format("SELECT {} FROM {}", cols, s));
        }
        ctes.push_back(fmt::format("chosen AS ({})", join_list(chosen_parts, " UNION ALL ")));
        ctes.push_back(fmt::format(
            "denom AS (SELECT {}SUM(p.value) AS total FROM src p JOIN chosen c ON {} AND "
            "p.col_id = c.e{})",
            key_sel, on_keys("p", "c"), key_grp));
        std::string final_keys = keys.empty() ? "" : join_list(qualified("p"), ", ") + ", ";
        e.unit.body = fmt::format(
            "WITH {}\nSELECT {}p.col_id, p.value / d.total AS value\nFROM src p JOIN chosen c "
            "ON {} AND p.col_id = c.e JOIN denom d ON {}",
            join_list(ctes, ",\n"), final_keys, on_keys("p", "c"), on_keys("p", "d"));
        return;
    }

    bool stable_shift = attr.f == ElemFn::exp && attr.stable;
    auto f_of = [&](const std::string &x) {
        return elem_fn_sql(attr.f, stable_shift ? fmt::format("({}) - m.m", x) : x);
    };

    // per-chunk inner aggregate composed with the cross-chunk outer aggregate
    std::string inner_agg;
    if (cs == 1) {
        inner_agg = f_of("p.value");
    } else if (attr.f == ElemFn::identity && !stable_shift) {
        inner_agg = attr.agg == AggFn::max ? "list_max(p.vec)" : "list_sum(p.vec)";
    } else {
        inner_agg = fmt::format("{}(list_transform(p.vec, {}))",
                                attr.agg == AggFn::max ? "list_max" : "list_sum",
                                e.lambda1(f_of("x")));
    }
    std::string outer = attr.agg == AggFn::max ? "MAX" : "SUM";
    std::string agg_expr = fmt::format("{}({})", outer, inner_agg);
    if (attr.agg_divisor != 1.0) {
        agg_expr = fmt::format("{} / {}", agg_expr, attr.agg_divisor);
    }

    std::vector<std::string> ctes;
    std::string agg_join_max;
    std::string key_sel_p = keys.empty() ? "" : join_list(qualified("p"), ", ") + ", ";
    std::string key_grp_p = keys.empty() ? "" : " GROUP BY " + join_list(qualified("p"), ", ");
    if (stable_shift) {
        std::string max_inner = cs == 1 ? "p.value" : "list_max(p.vec)";
        ctes.push_back(fmt::format("nmax AS (SELECT {}MAX({}) AS m FROM {} p{})", key_sel_p,
                                   max_inner, ra, key_grp_p));
        agg_join_max = fmt::format(" JOIN nmax m ON {}", on_keys("p", "m"));
    }
    std::string agg_group;
    if (stable_shift) {
        agg_group = keys.empty() ? " GROUP BY m.m"
                                 : " GROUP BY " + join_list(qualified("p"), ", ") + ", m.m";
    } else {
        agg_group = key_grp_p;
    }
    ctes.push_back(fmt::format("nagg AS (SELECT {}{} AS agg FROM {} p{}{})", key_sel_p,
                               agg_expr, ra, agg_join_max, agg_group));

    if (attr.g == PostFn::identity) {
        // pure reduction: one value per group
        std::string cols = keys.empty() ? "" : join_list(qualified("g"), ", ") + ", ";
        e.unit.body = fmt::format("WITH {}\nSELECT {}0 AS col_id, g.agg AS value\nFROM nagg g",
                                  join_list(ctes, ",\n"), cols);
        return;
    }

    std::string value;
    if (attr.g == PostFn::div) {
        value = cs == 1 ? fmt::format("{} / g.agg AS value", f_of("p.value"))
                        : fmt::format("list_transform(p.vec, {}) AS vec",
                                      e.lambda1(fmt::format("{} / g.agg", f_of("x"))));
    } else { // div_sqrt_eps
        std::string denom = fmt::format("sqrt(g.agg + {})", attr.epsilon);
        value = cs == 1 ? fmt::format("p.value / {} AS value", denom)
                        : fmt::format("list_transform(p.vec, {}) AS vec",
                                      e.lambda1(fmt::format("x / {}", denom)));
    }
    std::string maxjoin =
        stable_shift ? fmt::format(" JOIN nmax m ON {}", on_keys("p", "m")) : "";
    std::string cols = keys.empty() ? "" : join_list(qualified("p"), ", ") + ", ";
    e.unit.body =
        fmt::format("WITH {}\nSELECT {}p.{}, {}\nFROM {} p JOIN nagg g ON {}{}",
                    join_list(ctes, ",\n"), cols, cs == 1 ? "col_id" : "chunk_id", value, ra,
                    on_keys("p", "g"), maxjoin);
}

// --- lookup, slice, concat ------------------------------------------------------------

void gen_lookup(Emitter &e, const OpNode &node) {
    const Graph &g = e.pp.graph;
    const TensorDecl &table = g.tensor(node.inputs[0]);
    const TensorDecl &out = g.tensor(node.output);
    std::string rt = e.resolve(table.name);
    std::string rk = e.resolve(node.inputs[1]);
    // table rows are keyed row_id; the key relation carries (pos, token)
    std::vector<std::string> cols{fmt::format("k.pos AS {}", out.axes[0].name)};
    for (size_t i = 1; i + 1 < out.axes.size(); ++i) {
        cols.push_back(fmt::format("t.{}", e.col(table.name, out.axes[i].name)));
    }
    cols.push_back(fmt::format("t.{}", e.chunk_col(table.name)));
    cols.push_back(fmt::format("t.{}", e.val_col(table.name)));
    e.unit.body =
        fmt::format("SELECT {}\nFROM {} k JOIN {} t ON t.row_id = k.{}", join_list(cols, ", "),
                    rk, rt, node.lookup.input_key);
}

void gen_slice(Emitter &e, const OpNode &node) {
    const Graph &g = e.pp.graph;
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &out = g.tensor(node.output);
    const auto &attr = node.slice;
    std::string ra = e.resolve(a.name);
    int64_t cs = e.layout(a.name).chunk_size;
    bool on_chunk = attr.axis == a.rank() - 1;

    std::vector<std::string> cols;
    std::string where;
    size_t out_i = 0;
    for (int64_t i = 0; i + 1 < a.rank(); ++i) {
        std::string c = fmt::format("a.{}", e.col(a.name, a.axes[static_cast<size_t>(i)].name));
        if (i == attr.axis) {
            where = fmt::format("{} BETWEEN {} AND {}", c, attr.begin, attr.end - 1);
            if (attr.squeeze && attr.end - attr.begin == 1) {
                continue; // axis dropped from the projection
            }
            cols.push_back(fmt::format("{} - {} AS {}", c, attr.begin, out.axes[out_i++].name));
        } else {
            cols.push_back(fmt::format("{} AS {}", c, out.axes[out_i++].name));
        }
    }
    if (on_chunk) {
        if (cs > 1 && (attr.begin % cs != 0 || attr.end % cs != 0)) {
            throw CodegenError(fmt::format(
                "slice '{}': boundaries [{}, {}) not aligned to chunk_size {}; use the scalar "
                "dialect",
                node.id, attr.begin, attr.end, cs));
        }
        std::string c = fmt::format("a.{}", e.chunk_col(a.name));
        int64_t lo = cs == 1 ? attr.begin : attr.begin / cs;
        int64_t hi = cs == 1 ? attr.end - 1 : attr.end / cs - 1;
        where = fmt::format("{} BETWEEN {} AND {}", c, lo, hi);
        cols.push_back(fmt::format("{} - {} AS {}", c, lo, e.chunk_col(a.name)));
    } else {
        cols.push_back(fmt::format("a.{}", e.chunk_col(a.name)));
    }
    cols.push_back(fmt::format("a.{}", e.val_col(a.name)));
    e.unit.body =
        fmt::format("SELECT {}\nFROM {} a\nWHERE {}", join_list(cols, ", "), ra, where);
}

// The persistent form appends the fresh part into the cache table; the guard
// keeps re-execution from double-inserting a position.
void gen_concat(Emitter &e, const OpNode &node) {
    const Graph &g = e.pp.graph;
    const TensorDecl &out = g.tensor(node.output);
    const auto axis = node.concat.axis;
    bool on_chunk = axis == out.rank() - 1;
    int64_t cs = e.layout(out.name).chunk_size;

    bool persistent = g.persistent.count(node.output) &&
                      g.tensor(node.inputs[0]).kind == TensorKind::input;
    if (persistent) {
        auto it = e.binds.persistent_table.find(node.output);
        if (it == e.binds.persistent_table.end()) {
            throw CodegenError(fmt::format("no cache table bound for '{}'", node.output));
        }
        const std::string &target = it->second;
        const TensorDecl &part = g.tensor(node.inputs[1]);
        std::string rp = e.resolve(part.name);
        std::vector<std::string> cols;
        std::string axis_col;
        std::string axis_name;
        for (int64_t i = 0; i + 1 < part.rank(); ++i) {
            std::string name = e.col(part.name, part.axes[static_cast<size_t>(i)].name);
            std::string c = fmt::format("a.{}", name);
            if (i == axis) {
                axis_col = c;
                axis_name = name;
            }
            cols.push_back(c);
        }
        cols.push_back(fmt::format("a.{}", e.chunk_col(part.name)));
        cols.push_back(fmt::format("a.{}", e.val_col(part.name)));
        e.unit.kind = UnitKind::insert;
        e.unit.insert_target = target;
        e.unit.output_relation = target;
        e.unit.referenced.insert(target);
        e.unit.body = fmt::format(
            "SELECT {}\nFROM {} a\nWHERE {} > (SELECT COALESCE(MAX({}), -1) FROM {})",
            join_list(cols, ", "), rp, axis_col, axis_name, target);
        return;
    }

    std::vector<std::string> parts;
    int64_t offset = 0;
    for (const auto &in : node.inputs) {
        const TensorDecl &t = g.tensor(in);
        std::string rp = e.resolve(in);
        std::vector<std::string> cols;
        size_t out_i = 0;
        for (int64_t i = 0; i + 1 < t.rank(); ++i, ++out_i) {
            std::string c =
                fmt::format("a.{}", e.col(t.name, t.axes[static_cast<size_t>(i)].name));
            if (i == axis && offset > 0) {
                c = fmt::format("{} + {}", c, offset);
            }
            cols.push_back(fmt::format("{} AS {}", c, out.axes[out_i].name));
        }
        std::string chunk = fmt::format("a.{}", e.chunk_col(t.name));
        if (on_chunk) {
            int64_t width = t.chunked_axis().size;
            if (cs > 1 && width % cs != 0) {
                throw CodegenError(fmt::format(
                    "concat '{}': part width {} not aligned to chunk_size {}; use the scalar "
                    "dialect",
                    node.id, width, cs));
            }
            if (offset > 0) {
                chunk = fmt::format("{} + {}", chunk, cs == 1 ? offset : offset / cs);
            }
        }
        cols.push_back(fmt::format("{} AS {}", chunk, cs == 1 ? "col_id" : "chunk_id"));
        cols.push_back(fmt::format("a.{}", e.val_col(t.name)));
        parts.push_back(fmt::format("SELECT {} FROM {} a", join_list(cols, ", "), rp));
        offset += t.axes[static_cast<size_t>(axis)].size;
    }
    e.unit.body = join_list(parts, "\nUNION ALL\n");
}

// --- transpose fallback -----------------------------------------------------------------

void gen_transpose_fallback(Emitter &e, const OpNode &node) {
    const Graph &g = e.pp.graph;
    const TensorDecl &a = g.tensor(node.inputs[0]);
    const TensorDecl &out = g.tensor(node.output);
    std::string ra = e.resolve(a.name);
    int64_t cs = e.layout(a.name).chunk_size;

    if (node.transpose.mode == TransposeAttr::Mode::transpose) {
        int64_t out_cs = e.layout(out.name).chunk_size;
        std::string row = fmt::format("a.{}", e.col(a.name, a.axes[0].name));
        if (cs == 1) {
            e.unit.body =
                fmt::format("SELECT a.col_id AS {}, {} AS col_id, a.value\nFROM {} a",
                            out.axes[0].name, row, ra);
            return;
        }
        // unnest to (row, col, value), swap the indices, re-aggregate
        std::string flat = fmt::format(
            "SELECT a.chunk_id * {} + off.i AS c, {} AS r, a.vec[off.i + 1] AS v\nFROM {} a "
            "CROSS JOIN (SELECT unnest(range({})) AS i) off",
            cs, row, ra, cs);
        if (out_cs == 1) {
            e.unit.body = fmt::format("SELECT c AS {}, r AS col_id, v AS value\nFROM (\n{}\n)",
                                      out.axes[0].name, flat);
        } else {
            e.unit.body = fmt::format(
                "SELECT c AS {0}, r // {1} AS chunk_id, list(v ORDER BY r) AS vec\nFROM "
                "(\n{2}\n)\nGROUP BY c, r // {1}",
                out.axes[0].name, out_cs, flat);
        }
        return;
    }

    // lane permutation within aligned groups of `period` values
    const auto &perm = node.transpose.perm;
    int64_t period = static_cast<int64_t>(perm.size());
    std::vector<std::string> cols;
    for (size_t i = 0; i + 1 < a.axes.size(); ++i) {
        cols.push_back(fmt::format("a.{}", e.col(a.name, a.axes[i].name)));
    }
    if (cs == 1) {
        // output lane l reads input lane perm[l]; as a projection over input
        // rows, input lane c lands at the l with perm[l] = c
        std::vector<std::string> cases;
        for (int64_t c = 0; c < period; ++c) {
            int64_t l = 0;
            for (int64_t j = 0; j < period; ++j) {
                if (perm[static_cast<size_t>(j)] == c) {
                    l = j;
                }
            }
            cases.push_back(fmt::format("WHEN {} THEN {}", c, l));
        }
        cols.push_back(
            fmt::format("(a.col_id // {0}) * {0} + (CASE a.col_id % {0} {1} END) AS col_id",
                        period, join_list(cases, " ")));
        cols.push_back("a.value");
        e.unit.body = fmt::format("SELECT {}\nFROM {} a", join_list(cols, ", "), ra);
        return;
    }
    if (cs != period) {
        throw CodegenError(fmt::format(
            "transpose_fallback '{}': lane permutation needs chunk_size == period ({} != {}); "
            "use the scalar dialect",
            node.id, cs, period));
    }
    std::vector<std::string> lanes;
    for (int64_t l = 0; l < period; ++l) {
        lanes.push_back(fmt::format("a.vec[{}]", perm[static_cast<size_t>(l)] + 1));
    }
    cols.push_back("a.chunk_id");
    cols.push_back(fmt::format("[{}] AS vec", join_list(lanes, ", ")));
    e.unit.body = fmt::format("SELECT {}\nFROM {} a", join_list(cols, ", "), ra);
}

} // namespace

SqlUnit gen_unit(const Preprocessed &pp, const OpNode &node, const Dialect &dialect,
                 const ScriptBindings &bindings) {
    Emitter e{pp, dialect, bindings, SqlUnit{}};
    e.unit.node_id = node.id;
    e.unit.kind = UnitKind::view;
    e.unit.output_relation = "v_" + node.id;
    switch (node.category) {
    case OpCategory::matmul: gen_matmul(e, node); break;
    case OpCategory::elementwise_fn: gen_elementwise_fn(e, node); break;
    case OpCategory::elementwise_arith: gen_elementwise_arith(e, node); break;
    case OpCategory::reshape: gen_reshape(e, node); break;
    case OpCategory::normalization: gen_normalization(e, node); break;
    case OpCategory::lookup: gen_lookup(e, node); break;
    case OpCategory::slice: gen_slice(e, node); break;
    case OpCategory::concat: gen_concat(e, node); break;
    case OpCategory::transpose_fallback: gen_transpose_fallback(e, node); break;
    }
    return std::move(e.unit);
}

std::vector<SqlUnit> gen_all_units(const Preprocessed &pp, const Dialect &dialect,
                                   const ScriptBindings &bindings) {
    std::vector<SqlUnit> units;
    std::map<std::string, const OpNode *> by_id;
    for (const auto &n : pp.graph.nodes) {
        by_id[n.id] = &n;
    }
    for (const auto &id : topo_sort(pp.graph)) {
        units.push_back(gen_unit(pp, *by_id.at(id), dialect, bindings));
    }
    return units;
}

SqlUnit gen_argmax_unit(const Preprocessed &pp, const std::string &logits_tensor,
                        const Dialect &dialect, const std::vector<SqlUnit> &units,
                        bool prefill) {
    (void)dialect;
    const OpNode *prod = pp.graph.producer(logits_tensor);
    if (!prod) {
        throw CodegenError(fmt::format("logits tensor '{}' has no producer", logits_tensor));
    }
    if (pp.layout.at(logits_tensor).chunk_size != 1) {
        throw CodegenError("argmax expects scalar-layout logits");
    }
    std::string rel = "v_" + prod->id;
    for (const auto &u : units) {
        if (u.node_id == prod->id) {
            rel = u.output_relation;
        }
    }
    const TensorDecl &t = pp.graph.tensor(logits_tensor);
    std::string pos_col = t.axes[0].name;
    SqlUnit u;
    u.node_id = "select_token";
    u.kind = UnitKind::insert;
    u.insert_target = "output_token_table";
    u.output_relation = "output_token_table";
    u.depends_on.insert(prod->id);
    u.referenced.insert(rel);
    u.referenced.insert("output_token_table");
    std::string step =
        prefill ? "0" : "(SELECT COALESCE(MAX(step), -1) + 1 FROM output_token_table)";
    std::string guard = prefill ? "\nWHERE NOT EXISTS (SELECT 1 FROM output_token_table)" : "";
    u.body = fmt::format(
        "WITH lm AS (SELECT col_id, value FROM {0} WHERE {1} = (SELECT MAX({1}) FROM {0})),\n"
        "     mx AS (SELECT MAX(value) AS m FROM lm)\n"
        "SELECT {2} AS step, (SELECT MIN(lm.col_id) FROM lm, mx WHERE lm.value = mx.m) AS "
        "token{3}",
        rel, pos_col, step, guard);
    return u;
}

std::string Script::text() const {
    std::string out = header;
    for (const auto &s : statements) {
        out += s;
        out += ";\n\n";
    }
    return out;
}

Script assemble_script(const std::vector<SqlUnit> &units, const Graph &g,
                       const Dialect &dialect, const std::string &flags_note) {
    std::set<std::string> have;
    for (const auto &u : units) {
        have.insert(u.node_id);
    }
    for (const auto &n : g.nodes) {
        if (!have.count(n.id)) {
            throw CodegenError(fmt::format("assembly: no SQL unit for node '{}'", n.id));
        }
    }
    Script script;
    script.header = fmt::format("-- graph {:016x}\n-- dialect {}\n-- {}\n\n", graph_hash(g),
                                dialect.id == Dialect::Id::array ? "array" : "scalar",
                                flags_note);
    // step-scoped materialized tables are dropped up front so re-execution
    // starts clean
    for (const auto &u : units) {
        if (u.kind == UnitKind::materialized_table) {
            script.statements.push_back(
                fmt::format("DROP TABLE IF EXISTS {}", u.output_relation));
        }
    }
    for (const auto &u : units) {
        switch (u.kind) {
        case UnitKind::view:
            script.statements.push_back(
                fmt::format("CREATE OR REPLACE VIEW {} AS\n{}", u.output_relation, u.body));
            break;
        case UnitKind::materialized_table:
            script.statements.push_back(
                fmt::format("CREATE TABLE {} AS\n{}", u.output_relation, u.body));
            break;
        case UnitKind::insert:
            script.statements.push_back(
                fmt::format("INSERT INTO {}\n{}", u.insert_target, u.body));
            break;
        }
    }
    return script;
}

std::string runtime_schema_sql(const Preprocessed &pp, const ScriptBindings &bindings,
                               const Dialect &dialect) {
    (void)dialect;
    std::string sql;
    sql += "CREATE TABLE IF NOT EXISTS input_token_table (pos BIGINT, token BIGINT);\n";
    sql += "CREATE TABLE IF NOT EXISTS output_token_table (step BIGINT, token BIGINT);\n";
    sql += "CREATE TABLE IF NOT EXISTS param_position (pos BIGINT);\n";
    std::set<std::string> done;
    for (const auto &[tensor, table] : bindings.persistent_table) {
        if (!done.insert(table).second || !pp.graph.tensors.count(tensor)) {
            continue;
        }
        const StoredRelation &sr = pp.layout.at(tensor);
        std::string cols;
        for (const auto &c : sr.key_cols) {
            cols += fmt::format("{} BIGINT, ", c.column);
        }
        if (sr.chunk_size == 1) {
            cols += "col_id BIGINT, value FLOAT";
        } else {
            cols += "chunk_id BIGINT, vec FLOAT[]";
        }
        sql += fmt::format("CREATE TABLE IF NOT EXISTS {} ({});\n", table, cols);
    }
    sql += "CREATE OR REPLACE VIEW v_cur_token AS\n"
           "SELECT p.pos AS pos, o.token AS token\n"
           "FROM param_position p, output_token_table o\n"
           "WHERE o.step = (SELECT MAX(step) FROM output_token_table);\n";
    return sql;
}

} // namespace relic
