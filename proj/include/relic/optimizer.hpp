// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relic/sqlgen.hpp"

namespace relic {

// ---------------------------------------------------------------------------
// Post-optimization passes over the SQL unit list: temporary-view
// elimination by CTE merging, and ROW2COL pivoting of matmul queries.
// (Weight fusion runs at graph level in preprocess.)
// ---------------------------------------------------------------------------

enum class CriticalReason { multi_consumer, persistent_kv, residual_source, graph_output };
const char *to_string(CriticalReason r);

struct Criticality {
    bool is_critical = false;
    CriticalReason reason = CriticalReason::multi_consumer;
};

using CriticalityReport = std::map<std::string, Criticality>; // node id -> verdict

CriticalityReport find_critical_nodes(const Graph &g);

// One report line per (node, pass) decision, written to the pass log.
struct PassDecision {
    std::string node_id;
    std::string pass;
    bool applied = false;
    std::string reason;
};

struct PassLog {
    std::vector<PassDecision> decisions;
    std::string tsv() const;
};

// Temporary-view elimination. In the folding interpretation (default) every
// accumulated non-critical fragment rides along as a WITH clause of the next
// critical statement that (transitively) needs it, and only critical nodes
// materialize. The literal interpretation materializes the merged chain as
// its own statement before the critical one.
struct CtePassOptions {
    bool literal_chain_statements = false;
};
std::vector<SqlUnit> eliminate_temp_views(const std::vector<SqlUnit> &units,
                                          const CriticalityReport &report,
                                          const CtePassOptions &opt, PassLog *log = nullptr);

// ROW2COL: pivot both matmul operands to one row per row_id with chunk
// columns, compute per-chunk dot products in subquery_count ordered
// subqueries of projections_per_subquery projections each, and combine them
// with a positional join. No GROUP BY remains in the rewritten query.
struct Row2ColConfig {
    int64_t projections_per_subquery = 16;
    int64_t subquery_count = 4;
    int64_t max_width = 256;     // widest pivot considered
    int64_t max_chunk = 256;     // largest chunk_size considered
    int64_t max_rows = 100000;   // pivot-cost threshold per operand
};

struct Row2ColDecision {
    bool enabled = false;
    std::string reason;
    int64_t projections = 0;
    int64_t subqueries = 0;
};

// Heuristic gate; pure function of the matmul's static shape data.
Row2ColDecision choose_row2col(const Preprocessed &pp, const OpNode &node,
                               const Row2ColConfig &cfg);

std::vector<SqlUnit> apply_row2col(const Preprocessed &pp, const std::vector<SqlUnit> &units,
                                   const Row2ColConfig &cfg, const Dialect &dialect,
                                   PassLog *log = nullptr);

// The standalone rewritten matmul body (exposed for the bench harness and
// structural tests): computes A x B over pivoted relations.
std::string row2col_matmul_sql(const std::string &rel_a, const std::string &rel_b,
                               int64_t chunks, int64_t chunk_size, const Row2ColConfig &cfg,
                               const Dialect &dialect, const std::string &row_a,
                               const std::string &row_b);

// Pivot statement for one relation: (row?, chunk_id, vec) -> (row?, chunk0..).
std::string pivot_sql(const std::string &rel, const std::string &row_col, int64_t chunks,
                      const Dialect &dialect, bool scalar_values);

} // namespace relic
