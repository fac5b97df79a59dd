// SPDX-License-Identifier: Apache-2.0
#include "relic/optimizer.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace relic {

const char *to_string(CriticalReason r) {
    switch (r) {
    case CriticalReason::multi_consumer: return "multi_consumer";
    case CriticalReason::persistent_kv: return "persistent_kv";
    case CriticalReason::residual_source: return "residual_source";
    case CriticalReason::graph_output: return "graph_output";
    }
    return "?";
}

std::string PassLog::tsv() const {
    std::string out = "node_id\tpass\tapplied\treason\n";
    for (const auto &d : decisions) {
        out += fmt::format("{}\t{}\t{}\t{}\n", d.node_id, d.pass, d.applied ? "yes" : "no",
                           d.reason);
    }
    return out;
}

CriticalityReport find_critical_nodes(const Graph &g) {
    CriticalityReport report;
    std::set<std::string> output_set(g.outputs.begin(), g.outputs.end());
    for (const auto &n : g.nodes) {
        Criticality c;
        auto consumers = g.consumers(n.output);
        // gate references count as consumption
        for (const auto &m : g.nodes) {
            if (m.matmul.gate && m.matmul.gate->relation == n.output) {
                consumers.push_back(&m);
            }
        }
        if (g.persistent.count(n.output)) {
            c = {true, CriticalReason::persistent_kv};
        } else if (output_set.count(n.output)) {
            c = {true, CriticalReason::graph_output};
        } else if (consumers.size() > 1) {
            bool feeds_residual = false;
            for (const auto *m : consumers) {
                if (m->category == OpCategory::elementwise_arith &&
                    m->elem_arith.fn == ArithFn::add) {
                    feeds_residual = true;
                }
            }
            c = {true, feeds_residual ? CriticalReason::residual_source
                                      : CriticalReason::multi_consumer};
        }
        report[n.id] = c;
    }
    return report;
}

// --- temporary view elimination ------------------------------------------------

namespace {

// Fragments (by node id) transitively required by `unit` among the pending
// non-critical chain.
std::vector<size_t> reachable_chain(const SqlUnit &unit,
                                    const std::vector<SqlUnit> &chain) {
    std::map<std::string, size_t> by_relation;
    for (size_t i = 0; i < chain.size(); ++i) {
        by_relation[chain[i].output_relation] = i;
    }
    std::vector<bool> needed(chain.size(), false);
    // seed from the unit, then close over fragment-to-fragment references
    std::vector<size_t> stack;
    for (const auto &ref : unit.referenced) {
        auto it = by_relation.find(ref);
        if (it != by_relation.end() && !needed[it->second]) {
            needed[it->second] = true;
            stack.push_back(it->second);
        }
    }
    while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        for (const auto &ref : chain[i].referenced) {
            auto it = by_relation.find(ref);
            if (it != by_relation.end() && !needed[it->second]) {
                needed[it->second] = true;
                stack.push_back(it->second);
            }
        }
    }
    std::vector<size_t> order;
    for (size_t i = 0; i < chain.size(); ++i) {
        if (needed[i]) {
            order.push_back(i);
        }
    }
    return order;
}

std::string with_clause(const std::vector<SqlUnit> &chain, const std::vector<size_t> &members) {
    std::string with;
    for (size_t idx : members) {
        const SqlUnit &f = chain[idx];
        // a fragment whose body already starts WITH folds its own CTEs in
        std::string body = f.body;
        with += with.empty() ? "WITH " : ",\n";
        with += fmt::format("{} AS (\n{}\n)", f.output_relation, body);
    }
    return with;
}

} // namespace

std::vector<SqlUnit> eliminate_temp_views(const std::vector<SqlUnit> &units,
                                          const CriticalityReport &report,
                                          const CtePassOptions &opt, PassLog *log) {
    std::vector<SqlUnit> out;
    std::vector<SqlUnit> chain; // pending non-critical fragments, topo order
    std::map<std::string, std::string> renamed; // v_x -> t_x for materialized nodes

    auto apply_renames = [&](std::string sql) {
        for (const auto &[from, to] : renamed) {
            if (sql.find(from) != std::string::npos) {
                sql = rename_relation(sql, from, to);
            }
        }
        return sql;
    };

    auto is_critical = [&](const SqlUnit &u) {
        if (u.kind == UnitKind::insert) {
            return true; // side effects always materialize the pending reads
        }
        auto it = report.find(u.node_id);
        return it != report.end() && it->second.is_critical;
    };

    for (const auto &unit_in : units) {
        SqlUnit u = unit_in;
        u.body = apply_renames(u.body);
        if (!is_critical(u)) {
            if (log) {
                log->decisions.push_back({u.node_id, "cte", true, "merged into next critical"});
            }
            chain.push_back(std::move(u));
            continue;
        }
        auto members = reachable_chain(u, chain);
        std::string with = with_clause(chain, members);

        if (opt.literal_chain_statements && !members.empty()) {
            // literal reading: the merged chain materializes separately, as
            // the table of its final fragment
            const SqlUnit &tail = chain[members.back()];
            SqlUnit chain_unit;
            chain_unit.node_id = tail.node_id;
            chain_unit.kind = UnitKind::materialized_table;
            chain_unit.output_relation = "t_" + tail.node_id;
            std::vector<size_t> heads(members.begin(), members.end() - 1);
            std::string head_with = with_clause(chain, heads);
            chain_unit.body = head_with.empty()
                                  ? tail.body
                                  : fmt::format("{}\n{}", head_with, tail.body);
            renamed[tail.output_relation] = chain_unit.output_relation;
            out.push_back(chain_unit);
            u.body = apply_renames(u.body);
            // fragments other than the tail may still be referenced by the
            // critical statement; keep them as its WITH clauses
            std::vector<size_t> still = reachable_chain(u, chain);
            std::string still_with = with_clause(chain, still);
            if (!still_with.empty()) {
                u.body = fmt::format("{}\n{}", still_with, u.body);
            }
        } else if (!with.empty()) {
            u.body = fmt::format("{}\n{}", with, u.body);
        }
        // drop consumed fragments from the chain
        std::vector<SqlUnit> rest;
        std::set<size_t> used(members.begin(), members.end());
        for (size_t i = 0; i < chain.size(); ++i) {
            if (!used.count(i)) {
                rest.push_back(chain[i]);
            }
        }
        chain = std::move(rest);

        if (u.kind == UnitKind::view) {
            u.kind = UnitKind::materialized_table;
            std::string table = "t_" + u.node_id;
            renamed[u.output_relation] = table;
            u.output_relation = table;
        }
        if (log) {
            log->decisions.push_back({u.node_id, "cte", false, "materialized (critical)"});
        }
        out.push_back(std::move(u));
    }
    if (!chain.empty()) {
        // terminal flush for trailing non-critical fragments
        const SqlUnit &tail = chain.back();
        SqlUnit flush;
        flush.node_id = tail.node_id;
        flush.kind = UnitKind::materialized_table;
        flush.output_relation = "t_" + tail.node_id;
        std::vector<size_t> heads;
        for (size_t i = 0; i + 1 < chain.size(); ++i) {
            heads.push_back(i);
        }
        std::string with = with_clause(chain, heads);
        flush.body = with.empty() ? tail.body : fmt::format("{}\n{}", with, tail.body);
        out.push_back(std::move(flush));
    }
    return out;
}

// --- ROW2COL ---------------------------------------------------------------------

std::string pivot_sql(const std::string &rel, const std::string &row_col, int64_t chunks,
                      const Dialect &dialect, bool scalar_values) {
    const char *chunk_col = scalar_values ? "col_id" : "chunk_id";
    const char *val_col = scalar_values ? "value" : "vec";
    if (dialect.has_pivot_syntax) {
        std::string in;
        for (int64_t c = 0; c < chunks; ++c) {
            in += fmt::format(c ? ", {}" : "{}", c);
        }
        std::string proj;
        for (int64_t c = 0; c < chunks; ++c) {
            proj += fmt::format(", \"{}\" AS chunk{}", c, c);
        }
        return fmt::format("SELECT {}{}\nFROM (PIVOT {} ON {} IN ({}) USING first({}) GROUP BY "
                           "{})",
                           row_col, proj, rel, chunk_col, in, val_col, row_col);
    }
    // conditional aggregation with CASE
    std::string proj;
    for (int64_t c = 0; c < chunks; ++c) {
        proj += fmt::format(", MAX(CASE WHEN {} = {} THEN {} END) AS chunk{}", chunk_col, c,
                            val_col, c);
    }
    return fmt::format("SELECT {}{}\nFROM {}\nGROUP BY {}", row_col, proj, rel, row_col);
}

std::string row2col_matmul_sql(const std::string &rel_a, const std::string &rel_b,
                               int64_t chunks, int64_t chunk_size, const Row2ColConfig &cfg,
                               const Dialect &dialect, const std::string &row_a,
                               const std::string &row_b) {
    int64_t p = cfg.projections_per_subquery;
    int64_t s_q = cfg.subquery_count;
    if (p * s_q != chunks) {
        throw CodegenError(fmt::format(
            "ROW2COL config {}x{} does not cover {} chunks", p, s_q, chunks));
    }
    std::vector<std::string> ctes;
    ctes.push_back(fmt::format("pa AS (\n{}\n)",
                               pivot_sql(rel_a, row_a, chunks, dialect, chunk_size == 1)));
    ctes.push_back(fmt::format("pb AS (\n{}\n)",
                               pivot_sql(rel_b, row_b, chunks, dialect, chunk_size == 1)));
    for (int64_t s = 0; s < s_q; ++s) {
        std::string projs;
        for (int64_t k = 0; k < p; ++k) {
            int64_t c = s * p + k;
            std::string dot = chunk_size == 1
                                  ? fmt::format("pa.chunk{0} * pb.chunk{0}", c)
                                  : fmt::format("{}(pa.chunk{}, pb.chunk{})", dialect.dot_fn, c,
                                                c);
            projs += fmt::format(", {} AS v{}", dot, c);
        }
        ctes.push_back(fmt::format(
            "c{} AS (SELECT pa.{} AS a_row, pb.{} AS b_row{}\nFROM pa CROSS JOIN pb\nORDER BY "
            "pa.{}, pb.{})",
            s, row_a, row_b, projs, row_a, row_b));
    }
    std::string sum;
    for (int64_t c = 0; c < chunks; ++c) {
        sum += fmt::format(c ? " + v{}" : "v{}", c);
    }
    std::string joins = "c0";
    for (int64_t s = 1; s < s_q; ++s) {
        if (dialect.has_positional_join) {
            joins += fmt::format(" POSITIONAL JOIN c{}", s);
        } else {
            // pre-ordered subqueries align on their row keys (sort-merge class)
            joins += fmt::format(" JOIN c{0} ON c{0}.a_row = c0.a_row AND c{0}.b_row = c0.b_row",
                                 s);
        }
    }
    return fmt::format("WITH {}\nSELECT c0.a_row AS a_row, c0.b_row AS b_row, {} AS value\nFROM "
                       "{}",
                       fmt::format("{}", fmt::join(ctes, ",\n")), sum, joins);
}

Row2ColDecision choose_row2col(const Preprocessed &pp, const OpNode &node,
                               const Row2ColConfig &cfg) {
    Row2ColDecision d;
    if (node.category != OpCategory::matmul) {
        d.reason = "not a matmul";
        return d;
    }
    if (!node.matmul.batch.empty() || node.matmul.mask || node.matmul.gate) {
        d.reason = "matmul carries batch/mask/gate joins";
        return d;
    }
    const TensorDecl &a = pp.graph.tensor(node.inputs[0]);
    const TensorDecl &b = pp.graph.tensor(node.inputs[1]);
    const TensorDecl &out = pp.graph.tensor(node.output);
    const StoredRelation &sa = pp.layout.at(a.name);
    const StoredRelation &sb = pp.layout.at(b.name);
    if (a.rank() != 2 || b.rank() != 2) {
        d.reason = "operands are not plain matrices";
        return d;
    }
    if (b.kind != TensorKind::weight && b.kind != TensorKind::constant &&
        b.chunked_axis().name != a.chunked_axis().name) {
        d.reason = "row-contraction operand is not pivotable";
        return d;
    }
    if (pp.layout.at(out.name).chunk_size != 1) {
        d.reason = "output needs re-chunk aggregation";
        return d;
    }
    int64_t cs = sa.chunk_size;
    if (cs != sb.chunk_size) {
        d.reason = "operand chunk sizes differ";
        return d;
    }
    int64_t chunks = a.chunked_axis().size / cs;
    if (chunks > cfg.max_width) {
        d.reason = fmt::format("pivot width {} exceeds max {}", chunks, cfg.max_width);
        return d;
    }
    if (cs > cfg.max_chunk) {
        d.reason = fmt::format("chunk_size {} exceeds max {}", cs, cfg.max_chunk);
        return d;
    }
    int64_t rows_a = 1, rows_b = 1;
    for (size_t i = 0; i + 1 < a.axes.size(); ++i) {
        rows_a *= a.axes[i].size;
    }
    for (const auto &ax : b.axes) {
        if (ax.name != a.chunked_axis().name) {
            rows_b = ax.size;
        }
    }
    if (rows_a > cfg.max_rows || rows_b > cfg.max_rows) {
        d.reason = fmt::format("operand rows {}x{} above pivot-cost threshold", rows_a, rows_b);
        return d;
    }
    // fit the configuration to this chunk count
    int64_t s_q = std::min(cfg.subquery_count, chunks);
    while (chunks % s_q != 0) {
        --s_q;
    }
    d.enabled = true;
    d.subqueries = s_q;
    d.projections = chunks / s_q;
    d.reason = fmt::format("C={} cs={} config {}x{}", chunks, cs, d.projections, d.subqueries);
    return d;
}

std::vector<SqlUnit> apply_row2col(const Preprocessed &pp, const std::vector<SqlUnit> &units,
                                   const Row2ColConfig &cfg, const Dialect &dialect,
                                   PassLog *log) {
    std::map<std::string, const OpNode *> by_id;
    for (const auto &n : pp.graph.nodes) {
        by_id[n.id] = &n;
    }
    std::vector<SqlUnit> out;
    for (const auto &unit : units) {
        auto it = by_id.find(unit.node_id);
        if (it == by_id.end()) {
            out.push_back(unit);
            continue;
        }
        const OpNode &node = *it->second;
        Row2ColDecision d = choose_row2col(pp, node, cfg);
        if (log && node.category == OpCategory::matmul) {
            log->decisions.push_back({node.id, "row2col", d.enabled, d.reason});
        }
        if (!d.enabled) {
            out.push_back(unit);
            continue;
        }
        const TensorDecl &a = pp.graph.tensor(node.inputs[0]);
        const TensorDecl &b = pp.graph.tensor(node.inputs[1]);
        const TensorDecl &o = pp.graph.tensor(node.output);
        const StoredRelation &sa = pp.layout.at(a.name);
        const StoredRelation &sb = pp.layout.at(b.name);
        int64_t cs = sa.chunk_size;
        int64_t chunks = a.chunked_axis().size / cs;

        // operand relations as referenced by the original unit body
        SqlUnit u = unit;
        std::string rel_a, rel_b;
        {
            // rebuild the names the emitter used
            const TensorDecl &ta = a;
            (void)ta;
            auto rel_of = [&](const std::string &tensor) -> std::string {
                const TensorDecl &t = pp.graph.tensor(tensor);
                if (t.kind == TensorKind::weight || t.kind == TensorKind::constant) {
                    return pp.layout.at(tensor).table;
                }
                const OpNode *prod = pp.graph.producer(tensor);
                return "v_" + prod->id;
            };
            rel_a = rel_of(node.inputs[0]);
            rel_b = rel_of(node.inputs[1]);
        }
        Row2ColConfig local = cfg;
        local.projections_per_subquery = d.projections;
        local.subquery_count = d.subqueries;
        std::string row_a = sa.key_cols.at(0).column;
        std::string row_b = sb.key_cols.at(0).column;
        std::string core = row2col_matmul_sql(rel_a, rel_b, chunks, cs, local, dialect, row_a,
                                              row_b);
        // project to the unit's output schema
        u.body = fmt::format("SELECT a_row AS {}, b_row AS col_id, value\nFROM (\n{}\n)",
                             o.axes[0].name, core);
        out.push_back(std::move(u));
    }
    return out;
}

} // namespace relic
