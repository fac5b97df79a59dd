// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relic/dense.hpp"
#include "relic/ir.hpp"

namespace relic {

// ---------------------------------------------------------------------------
// Chunked relational representation of tensors, plus the preprocessing
// pipeline that turns graph weights into loadable tables: constant folding,
// physical transposition of matmul right-hand sides, weight fusion, expert
// indexing and export.
// ---------------------------------------------------------------------------

struct ChunkRecord {
    std::vector<int64_t> keys; // leading key columns (row_id, or expert_id/flag + row_id)
    int64_t chunk_id = 0;
    std::vector<float> vec;
};

struct ChunkedRelation {
    std::string name;
    std::vector<std::string> key_columns; // names for ChunkRecord::keys
    std::vector<ChunkRecord> records;
    int64_t m = 0;          // logical row count
    int64_t n = 0;          // logical (chunked) column count
    int64_t chunk_size = 1;
    bool transposed = false;
    std::vector<std::string> fusion_flag_domain; // member tensor names when fused
    bool expert_indexed = false;
};

// Alg: split each matrix row into n/chunk_size chunks of chunk_size values.
// Width must be divisible; the error names the tensor and width.
ChunkedRelation chunk_matrix(const DenseTensor &matrix, int64_t chunk_size,
                             const std::string &name);

// Inverse of chunk_matrix; exact element-for-element reconstruction.
DenseTensor dechunk(const ChunkedRelation &rel);

// --- storage layout ---------------------------------------------------------

// How one graph tensor is materialized as a relation. Key columns map decl
// axes to SQL columns in storage order; the chunk axis is stored as
// (chunk_id, vec) or, when chunk_size == 1, as (col_id, value).
struct StoredRelation {
    std::string table;
    struct Col {
        std::string column;
        std::string decl_axis;
    };
    std::vector<Col> key_cols;
    std::string chunk_axis;
    int64_t chunk_size = 1;
    bool transposed = false;
    bool fused = false;
    bool expert_indexed = false;
    std::vector<std::pair<std::string, int64_t>> flag_members; // (original tensor, width)
};

using WeightMap = std::map<std::string, DenseTensor>;

struct Preprocessed {
    Graph graph;
    WeightMap weights;                            // logical-layout values
    std::map<std::string, StoredRelation> layout; // every tensor in the graph
};

// Full pipeline: fold constants, fuse projections sharing an input, mark
// right-hand matmul weights transposed, derive the storage layout.
struct PreprocessOptions {
    bool fuse = true;
    bool fold = true;
    int64_t force_chunk_size = 0; // >0 rewrites every decl (scalar dialect uses 1)
};
Preprocessed preprocess(const Graph &g, const WeightMap &weights, const PreprocessOptions &opt);

// Individual passes, exposed for tests.
std::pair<Graph, WeightMap> fold_constants(const Graph &g, const WeightMap &weights);

// Fused tensor name -> (member tensor, output width) in flag order.
struct FusionInfo {
    std::map<std::string, std::vector<std::pair<std::string, int64_t>>> members;
};
std::pair<Graph, WeightMap> fuse_weights(const Graph &g, const WeightMap &weights,
                                         FusionInfo *info = nullptr);

// Layout for one tensor given the (post-rewrite) graph; transposition of
// matmul right-hand weight operands happens here.
std::map<std::string, StoredRelation> derive_layout(const Graph &g);

// Materialize the chunked records for a stored weight/constant tensor.
ChunkedRelation materialize(const TensorDecl &decl, const StoredRelation &sr,
                            const DenseTensor &value);

// Index DDL on expert identifiers; empty when the relation has none.
std::string build_expert_index(const StoredRelation &sr);

// --- export -----------------------------------------------------------------

struct ExportResult {
    std::filesystem::path ddl_file;                 // schema.sql
    std::vector<std::filesystem::path> data_files;  // one w_<tensor>.tbl per relation
    std::string ddl;
};

// One CREATE TABLE per stored weight relation plus one data file each.
// chunk_size 1 relations use the (row_id, col_id, value) schema.
ExportResult export_weights(const Preprocessed &pp, const std::filesystem::path &out_dir);

// Re-import a .tbl data file (tests the round trip).
ChunkedRelation import_table(const std::filesystem::path &file, const StoredRelation &sr);

// Render one record line / parse it back; shortest round-trip float text.
std::string render_record(const ChunkRecord &rec, int64_t chunk_size);

} // namespace relic
