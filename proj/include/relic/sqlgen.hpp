// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "relic/chunk.hpp"
#include "relic/ir.hpp"

namespace relic {

// ---------------------------------------------------------------------------
// Template-based SQL generation: one statement per operator node, assembled
// into a dependency-ordered script of view/table/insert statements.
// ---------------------------------------------------------------------------

struct Dialect {
    enum class Id { array, scalar } id = Id::array;
    std::string dot_fn = "list_dot_product";
    bool has_positional_join = true;
    bool has_pivot_syntax = true;
    // lambda spelling differs between engine versions
    bool lambda_arrow = false; // true: "x -> e", false: "lambda x: e"

    static Dialect array();
    static Dialect scalar();
};

enum class UnitKind { view, materialized_table, insert };

struct SqlUnit {
    std::string node_id;
    std::string body; // SELECT text; the statement wrapper is chosen later
    UnitKind kind = UnitKind::view;
    std::string output_relation;     // v_<node_id> / t_<node_id> / insert target
    std::string insert_target;       // set for kind == insert
    std::set<std::string> depends_on;  // producing node ids
    std::set<std::string> referenced;  // relation names read by the body
};

struct CodegenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Where phase-dependent inputs come from: tensor name -> relation name.
// Token inputs bind to input_token_table (prefill) or the newest-token view
// (decode); persistent tensors bind to their cache tables.
struct ScriptBindings {
    std::map<std::string, std::string> input_relation;
    std::map<std::string, std::string> persistent_table;
};

// Per-node template instantiation. `pp` supplies the storage layout.
SqlUnit gen_unit(const Preprocessed &pp, const OpNode &node, const Dialect &dialect,
                 const ScriptBindings &bindings);

std::vector<SqlUnit> gen_all_units(const Preprocessed &pp, const Dialect &dialect,
                                   const ScriptBindings &bindings);

// Final token selection: MAX pattern over the logits relation plus a
// min-token-id tie break, appended to the output token table.
SqlUnit gen_argmax_unit(const Preprocessed &pp, const std::string &logits_tensor,
                        const Dialect &dialect, const std::vector<SqlUnit> &units, bool prefill);

// Orders units topologically, renders each as CREATE OR REPLACE VIEW /
// CREATE OR REPLACE TABLE / INSERT, prepends the step-scoped DROP preamble
// and a header comment recording graph hash, dialect and flags.
struct Script {
    std::string header;
    std::vector<std::string> statements;
    std::string text() const;
};
Script assemble_script(const std::vector<SqlUnit> &units, const Graph &g,
                       const Dialect &dialect, const std::string &flags_note);

// DDL for runtime tables (token input/output, parameter table, KV caches).
std::string runtime_schema_sql(const Preprocessed &pp, const ScriptBindings &bindings,
                               const Dialect &dialect);

// Helpers shared with the optimizer.
std::string rename_relation(const std::string &sql, const std::string &from,
                            const std::string &to);
std::string elem_fn_sql(ElemFn fn, const std::string &x);

} // namespace relic
