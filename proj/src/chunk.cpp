// SPDX-License-Identifier: Apache-2.0
#include "relic/chunk.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "relic/reference.hpp"

namespace relic {

ChunkedRelation chunk_matrix(const DenseTensor &matrix, int64_t chunk_size,
                             const std::string &name) {
    if (matrix.rank() != 2 || matrix.size() == 0) {
        throw GraphError(fmt::format("chunk_matrix '{}': non-empty matrix required", name));
    }
    int64_t m = matrix.dim(0), n = matrix.dim(1);
    if (chunk_size <= 0 || n % chunk_size != 0) {
        throw GraphError(fmt::format("chunk_matrix '{}': width {} not divisible by chunk_size {}",
                                     name, n, chunk_size));
    }
    ChunkedRelation rel;
    rel.name = name;
    rel.key_columns = {"row_id"};
    rel.m = m;
    rel.n = n;
    rel.chunk_size = chunk_size;
    int64_t chunks = n / chunk_size;
    rel.records.reserve(static_cast<size_t>(m * chunks));
    for (int64_t i = 0; i < m; ++i) {
        for (int64_t c = 0; c < chunks; ++c) {
            ChunkRecord rec;
            rec.keys = {i};
            rec.chunk_id = c;
            rec.vec.assign(matrix.data() + i * n + c * chunk_size,
                           matrix.data() + i * n + (c + 1) * chunk_size);
            rel.records.push_back(std::move(rec));
        }
    }
    return rel;
}

DenseTensor dechunk(const ChunkedRelation &rel) {
    DenseTensor out({rel.m, rel.n});
    for (const auto &rec : rel.records) {
        int64_t i = rec.keys.at(0);
        int64_t base = rec.chunk_id * rel.chunk_size;
        for (int64_t l = 0; l < rel.chunk_size; ++l) {
            out.at2(i, base + l) = rec.vec[static_cast<size_t>(l)];
        }
    }
    return out;
}

// --- constant folding ---------------------------------------------------------

namespace {

bool is_static_kind(TensorKind k) {
    return k == TensorKind::weight || k == TensorKind::constant;
}

void prune_unused_statics(Graph &g, WeightMap &weights) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::string> referenced;
        for (const auto &n : g.nodes) {
            for (const auto &in : n.inputs) {
                referenced.insert(in);
            }
            if (n.matmul.gate) {
                referenced.insert(n.matmul.gate->relation);
            }
        }
        for (const auto &o : g.outputs) {
            referenced.insert(o);
        }
        for (auto it = g.tensors.begin(); it != g.tensors.end();) {
            if (is_static_kind(it->second.kind) && !referenced.count(it->first) &&
                !g.persistent.count(it->first)) {
                weights.erase(it->first);
                it = g.tensors.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
}

// Absorb a scalar multiplier adjacent to a matmul into the weight operand.
bool absorb_scalar_into_weight(Graph &g, WeightMap &weights) {
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        OpNode &mul = g.nodes[i];
        if (mul.category != OpCategory::elementwise_arith || mul.elem_arith.fn != ArithFn::mul ||
            mul.inputs.size() != 2) {
            continue;
        }
        const TensorDecl &c = g.tensor(mul.inputs[1]);
        if (!is_static_kind(c.kind) || c.rank() != 1 || c.axes[0].size != 1) {
            continue;
        }
        const OpNode *prod = g.producer(mul.inputs[0]);
        if (!prod || prod->category != OpCategory::matmul) {
            continue;
        }
        const TensorDecl &w = g.tensor(prod->inputs[1]);
        if (!is_static_kind(w.kind) || g.consumers(mul.inputs[0]).size() != 1) {
            continue;
        }
        float scale = weights.at(c.name).data()[0];
        DenseTensor &wv = weights.at(w.name);
        for (int64_t j = 0; j < wv.size(); ++j) {
            wv.data()[j] = static_cast<float>(static_cast<double>(wv.data()[j]) * scale);
        }
        // rewire: the matmul now produces the multiplier's output directly
        std::string dropped = mul.inputs[0];
        std::string kept = mul.output;
        for (auto &n : g.nodes) {
            if (n.output == dropped) {
                n.output = kept;
            }
        }
        g.nodes.erase(g.nodes.begin() + static_cast<int64_t>(i));
        g.tensors.erase(dropped);
        return true;
    }
    return false;
}

} // namespace

std::pair<Graph, WeightMap> fold_constants(const Graph &graph, const WeightMap &w_in) {
    Graph g = graph;
    WeightMap weights = w_in;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            const OpNode &n = g.nodes[i];
            bool all_static = true;
            std::vector<const DenseTensor *> ins;
            for (const auto &in : n.inputs) {
                if (!is_static_kind(g.tensor(in).kind) || !weights.count(in)) {
                    all_static = false;
                    break;
                }
                ins.push_back(&weights.at(in));
            }
            if (!all_static || n.matmul.gate) {
                continue;
            }
            if (g.persistent.count(n.output)) {
                continue;
            }
            DenseTensor value = ref_eval_node(g, n, ins, nullptr);
            weights[n.output] = std::move(value);
            g.tensors.at(n.output).kind = TensorKind::constant;
            g.nodes.erase(g.nodes.begin() + static_cast<int64_t>(i));
            changed = true;
            break;
        }
        if (!changed) {
            changed = absorb_scalar_into_weight(g, weights);
        }
    }
    prune_unused_statics(g, weights);
    return {std::move(g), std::move(weights)};
}

// --- weight fusion --------------------------------------------------------------

std::pair<Graph, WeightMap> fuse_weights(const Graph &graph, const WeightMap &w_in,
                                         FusionInfo *info) {
    Graph g = graph;
    WeightMap weights = w_in;

    // Group plain weight matmuls by (lhs tensor, contract axis, chunk sizes).
    struct Key {
        std::string lhs;
        std::string contract;
        int64_t contract_size;
        int64_t w_chunk;
        int64_t out_chunk;
        auto operator<=>(const Key &) const = default;
    };
    std::map<Key, std::vector<std::string>> groups; // node ids in graph order
    for (const auto &n : g.nodes) {
        if (n.category != OpCategory::matmul || n.inputs.size() != 2) {
            continue;
        }
        if (!n.matmul.batch.empty() || n.matmul.mask || n.matmul.gate) {
            continue;
        }
        const TensorDecl &a = g.tensor(n.inputs[0]);
        const TensorDecl &b = g.tensor(n.inputs[1]);
        const TensorDecl &out = g.tensor(n.output);
        if (!is_static_kind(b.kind) || b.rank() != 2 || !weights.count(b.name)) {
            continue;
        }
        if (g.consumers(b.name).size() != 1) {
            continue;
        }
        Key key{n.inputs[0], a.chunked_axis().name, a.chunked_axis().size, b.chunk_size,
                out.chunk_size};
        groups[key].push_back(n.id);
    }

    for (auto &[key, member_ids] : groups) {
        if (member_ids.size() < 2) {
            continue;
        }
        // preserve graph order
        std::vector<const OpNode *> members;
        for (const auto &n : g.nodes) {
            if (std::find(member_ids.begin(), member_ids.end(), n.id) != member_ids.end()) {
                members.push_back(&n);
            }
        }
        int64_t f_count = static_cast<int64_t>(members.size());
        int64_t max_width = 0;
        for (const auto *m : members) {
            const TensorDecl &b = g.tensor(m->inputs[1]);
            max_width = std::max(max_width, b.axes[1].size);
        }
        std::string fused_name = g.tensor(members[0]->inputs[1]).name + "_fused";
        std::string fused_out = fused_name + "_out";

        // fused weight decl + zero-padded value, logical layout [flag, d, out]
        TensorDecl fw;
        fw.name = fused_name;
        fw.kind = TensorKind::weight;
        fw.chunk_size = g.tensor(members[0]->inputs[1]).chunk_size;
        fw.axes = {Axis{"flag", f_count}, Axis{key.contract, key.contract_size},
                   Axis{"fused_out", max_width}};
        DenseTensor fv({f_count, key.contract_size, max_width});
        std::vector<std::pair<std::string, int64_t>> flag_members;
        for (int64_t f = 0; f < f_count; ++f) {
            const TensorDecl &b = g.tensor(members[static_cast<size_t>(f)]->inputs[1]);
            const DenseTensor &bv = weights.at(b.name);
            for (int64_t r = 0; r < b.axes[0].size; ++r) {
                for (int64_t c = 0; c < b.axes[1].size; ++c) {
                    fv.at({f, r, c}) = bv.at2(r, c);
                }
            }
            flag_members.emplace_back(b.name, b.axes[1].size);
        }
        g.tensors[fused_name] = fw;
        weights[fused_name] = std::move(fv);

        // fused matmul output decl [lhs keys..., flag, fused_out]
        const TensorDecl &a = g.tensor(key.lhs);
        const TensorDecl &out0 = g.tensor(members[0]->output);
        TensorDecl fo;
        fo.name = fused_out;
        fo.kind = TensorKind::intermediate;
        fo.chunk_size = out0.chunk_size;
        for (int64_t i = 0; i + 1 < a.rank(); ++i) {
            fo.axes.push_back(a.axes[static_cast<size_t>(i)]);
        }
        fo.axes.push_back(Axis{"flag", f_count});
        fo.axes.push_back(Axis{"fused_out", max_width});
        g.tensors[fused_out] = fo;

        OpNode fused_node;
        fused_node.id = members[0]->id + "_fused";
        fused_node.category = OpCategory::matmul;
        fused_node.inputs = {key.lhs, fused_name};
        fused_node.output = fused_out;

        int64_t a_keys = a.rank() - 1;
        std::vector<OpNode> splits;
        for (int64_t f = 0; f < f_count; ++f) {
            const OpNode *m = members[static_cast<size_t>(f)];
            int64_t width = flag_members[static_cast<size_t>(f)].second;
            OpNode split;
            split.id = m->id + "_split";
            split.category = OpCategory::slice;
            split.inputs = {fused_out};
            split.slice = SliceAttr{a_keys, f, f + 1, true};
            if (width == max_width) {
                split.output = m->output;
            } else {
                std::string wide = m->output + "_wide";
                TensorDecl wd;
                wd.name = wide;
                wd.kind = TensorKind::intermediate;
                wd.chunk_size = out0.chunk_size;
                for (int64_t i = 0; i + 1 < a.rank(); ++i) {
                    wd.axes.push_back(a.axes[static_cast<size_t>(i)]);
                }
                wd.axes.push_back(Axis{"fused_out", max_width});
                g.tensors[wide] = wd;
                split.output = wide;

                OpNode narrow;
                narrow.id = m->id + "_narrow";
                narrow.category = OpCategory::slice;
                narrow.inputs = {wide};
                narrow.output = m->output;
                narrow.slice = SliceAttr{a_keys, 0, width, false};
                splits.push_back(narrow);
            }
            splits.push_back(split);
        }

        // replace the first member in place, drop the rest
        std::vector<OpNode> new_nodes;
        for (auto &n : g.nodes) {
            if (n.id == members[0]->id) {
                new_nodes.push_back(fused_node);
                for (auto &s : splits) {
                    new_nodes.push_back(s);
                }
            } else if (std::find(member_ids.begin(), member_ids.end(), n.id) ==
                       member_ids.end()) {
                new_nodes.push_back(n);
            }
        }
        g.nodes = std::move(new_nodes);
        if (info) {
            info->members[fused_name] = flag_members;
        }
        for (const auto &[name, width] : flag_members) {
            g.tensors.erase(name);
            weights.erase(name);
        }
    }
    // re-derive F/S/G for rewritten nodes
    for (auto &n : g.nodes) {
        categorize(g, n);
    }
    return {std::move(g), std::move(weights)};
}

// --- layout ----------------------------------------------------------------------

std::map<std::string, StoredRelation> derive_layout(const Graph &g) {
    std::map<std::string, StoredRelation> layout;

    // Which static tensors appear as matmul right-hand operands, and their
    // contract axis. A conflicting second use is rejected.
    std::map<std::string, std::string> contract_axis;
    for (const auto &n : g.nodes) {
        if (n.category != OpCategory::matmul) {
            continue;
        }
        const TensorDecl &a = g.tensor(n.inputs[0]);
        const TensorDecl &b = g.tensor(n.inputs[1]);
        if (!is_static_kind(b.kind)) {
            continue;
        }
        const std::string &shared = a.chunked_axis().name;
        auto [it, inserted] = contract_axis.emplace(b.name, shared);
        if (!inserted && it->second != shared) {
            throw GraphError(fmt::format("weight '{}' used with conflicting contract axes",
                                         b.name));
        }
    }

    for (const auto &[name, t] : g.tensors) {
        StoredRelation sr;
        sr.table = name;
        sr.chunk_size = t.chunk_size;
        auto cit = contract_axis.find(name);
        if (is_static_kind(t.kind) && cit != contract_axis.end()) {
            // stored transposed: chunk over the contracted axis, remaining
            // axes become keys with the trailing one named row_id
            int64_t contract = t.axis_index(cit->second);
            sr.transposed = contract != t.rank() - 1;
            std::vector<int64_t> keys;
            for (int64_t i = 0; i < t.rank(); ++i) {
                if (i != contract) {
                    keys.push_back(i);
                }
            }
            for (size_t i = 0; i < keys.size(); ++i) {
                const Axis &ax = t.axes[static_cast<size_t>(keys[i])];
                std::string col = i + 1 == keys.size() ? "row_id" : ax.name;
                sr.key_cols.push_back({col, ax.name});
            }
            sr.chunk_axis = cit->second;
            const Axis &chunk_ax = t.axes[static_cast<size_t>(contract)];
            if (chunk_ax.size % t.chunk_size != 0) {
                throw GraphError(
                    fmt::format("tensor '{}': contract width {} not divisible by chunk_size {}",
                                name, chunk_ax.size, t.chunk_size));
            }
            if (t.axes[0].name == "flag") {
                sr.fused = true;
            }
            if (t.axes[0].name == "expert_id") {
                sr.expert_indexed = true;
            }
        } else if (is_static_kind(t.kind)) {
            // natural layout: leading axes keyed, last axis chunked; the
            // trailing key is row_id so lookups join a uniform schema
            for (int64_t i = 0; i + 1 < t.rank(); ++i) {
                const Axis &ax = t.axes[static_cast<size_t>(i)];
                std::string col = (i == t.rank() - 2) ? "row_id" : ax.name;
                sr.key_cols.push_back({col, ax.name});
            }
            sr.chunk_axis = t.chunked_axis().name;
        } else {
            for (int64_t i = 0; i + 1 < t.rank(); ++i) {
                const Axis &ax = t.axes[static_cast<size_t>(i)];
                sr.key_cols.push_back({ax.name, ax.name});
            }
            sr.chunk_axis = t.chunked_axis().name;
        }
        layout[name] = std::move(sr);
    }
    return layout;
}

Preprocessed preprocess(const Graph &g_in, const WeightMap &w_in, const PreprocessOptions &opt) {
    Graph g = g_in;
    WeightMap weights = w_in;
    if (opt.force_chunk_size > 0) {
        for (auto &[name, t] : g.tensors) {
            t.chunk_size = opt.force_chunk_size;
        }
    }
    if (opt.fold) {
        std::tie(g, weights) = fold_constants(g, weights);
    }
    FusionInfo fusion;
    if (opt.fuse) {
        std::tie(g, weights) = fuse_weights(g, weights, &fusion);
    }
    Preprocessed pp;
    pp.layout = derive_layout(g);
    for (auto &[name, sr] : pp.layout) {
        auto it = fusion.members.find(name);
        if (it != fusion.members.end()) {
            sr.flag_members = it->second;
        }
    }
    pp.graph = std::move(g);
    pp.weights = std::move(weights);
    return pp;
}

// --- materialization and export ---------------------------------------------------

ChunkedRelation materialize(const TensorDecl &decl, const StoredRelation &sr,
                            const DenseTensor &value) {
    ChunkedRelation rel;
    rel.name = sr.table;
    for (const auto &c : sr.key_cols) {
        rel.key_columns.push_back(c.column);
    }
    rel.chunk_size = sr.chunk_size;
    rel.transposed = sr.transposed;
    rel.expert_indexed = sr.expert_indexed;
    for (const auto &[member, width] : sr.flag_members) {
        rel.fusion_flag_domain.push_back(member);
    }

    int64_t chunk_axis = decl.axis_index(sr.chunk_axis);
    int64_t chunk_width = decl.axes[static_cast<size_t>(chunk_axis)].size;
    int64_t chunks = chunk_width / sr.chunk_size;
    std::vector<int64_t> key_axes;
    int64_t key_card = 1;
    for (const auto &c : sr.key_cols) {
        int64_t ai = decl.axis_index(c.decl_axis);
        key_axes.push_back(ai);
        key_card *= decl.axes[static_cast<size_t>(ai)].size;
    }
    rel.m = key_card;
    rel.n = chunk_width;

    std::vector<int64_t> strides(static_cast<size_t>(decl.rank()), 1);
    for (int64_t i = decl.rank() - 2; i >= 0; --i) {
        strides[static_cast<size_t>(i)] =
            strides[static_cast<size_t>(i + 1)] * decl.axes[static_cast<size_t>(i + 1)].size;
    }

    std::vector<int64_t> key_idx(key_axes.size(), 0);
    bool done = key_axes.empty() && key_card == 1;
    while (true) {
        // fused relations are ragged: rows beyond a member's width are padding
        bool skip = false;
        if (!sr.flag_members.empty() && key_idx.size() >= 2) {
            int64_t flag = key_idx[0];
            int64_t row = key_idx.back();
            skip = row >= sr.flag_members[static_cast<size_t>(flag)].second;
        }
        if (!skip) {
            for (int64_t c = 0; c < chunks; ++c) {
                ChunkRecord rec;
                rec.keys = key_idx;
                rec.chunk_id = c;
                rec.vec.resize(static_cast<size_t>(sr.chunk_size));
                int64_t base = 0;
                for (size_t i = 0; i < key_axes.size(); ++i) {
                    base += key_idx[i] * strides[static_cast<size_t>(key_axes[i])];
                }
                for (int64_t l = 0; l < sr.chunk_size; ++l) {
                    rec.vec[static_cast<size_t>(l)] =
                        value.data()[base + (c * sr.chunk_size + l) *
                                               strides[static_cast<size_t>(chunk_axis)]];
                }
                rel.records.push_back(std::move(rec));
            }
        }
        // advance key odometer
        int64_t axis = static_cast<int64_t>(key_axes.size()) - 1;
        while (axis >= 0) {
            size_t ai = static_cast<size_t>(key_axes[static_cast<size_t>(axis)]);
            if (++key_idx[static_cast<size_t>(axis)] < decl.axes[ai].size) {
                break;
            }
            key_idx[static_cast<size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0 || done) {
            break;
        }
    }
    return rel;
}

std::string build_expert_index(const StoredRelation &sr) {
    if (!sr.expert_indexed) {
        return "";
    }
    return fmt::format("CREATE INDEX IF NOT EXISTS idx_{}_expert ON {} (expert_id);", sr.table,
                       sr.table);
}

std::string render_record(const ChunkRecord &rec, int64_t chunk_size) {
    std::string line;
    for (int64_t k : rec.keys) {
        line += fmt::format("{}|", k);
    }
    if (chunk_size == 1) {
        line += fmt::format("{}|{}", rec.chunk_id, rec.vec.at(0));
    } else {
        line += fmt::format("{}|[", rec.chunk_id);
        for (size_t i = 0; i < rec.vec.size(); ++i) {
            if (i) {
                line += ",";
            }
            line += fmt::format("{}", rec.vec[i]);
        }
        line += "]";
    }
    return line;
}

ExportResult export_weights(const Preprocessed &pp, const std::filesystem::path &out_dir) {
    std::filesystem::create_directories(out_dir);
    ExportResult res;
    std::string ddl;
    for (const auto &[name, sr] : pp.layout) {
        const TensorDecl &t = pp.graph.tensor(name);
        if (!is_static_kind(t.kind) || !pp.weights.count(name)) {
            continue;
        }
        std::string cols;
        for (const auto &c : sr.key_cols) {
            cols += fmt::format("{} BIGINT, ", c.column);
        }
        if (sr.chunk_size == 1) {
            cols += "col_id BIGINT, value FLOAT";
        } else {
            cols += "chunk_id BIGINT, vec FLOAT[]";
        }
        ddl += fmt::format("CREATE TABLE {} ({});\n", sr.table, cols);
        std::string idx = build_expert_index(sr);
        if (!idx.empty()) {
            ddl += idx + "\n";
        }

        ChunkedRelation rel = materialize(t, sr, pp.weights.at(name));
        // fused relations drop padded rows beyond each member's width
        std::filesystem::path data = out_dir / fmt::format("w_{}.tbl", name);
        std::ofstream out(data);
        if (!out) {
            throw GraphError(fmt::format("cannot write {}", data.string()));
        }
        for (const auto &rec : rel.records) {
            out << render_record(rec, sr.chunk_size) << "\n";
        }
        if (!out.good()) {
            throw GraphError(fmt::format("I/O failure writing {}", data.string()));
        }
        res.data_files.push_back(data);
    }
    res.ddl = ddl;
    res.ddl_file = out_dir / "schema.sql";
    std::ofstream sf(res.ddl_file);
    sf << ddl;
    if (!sf.good()) {
        throw GraphError(fmt::format("I/O failure writing {}", res.ddl_file.string()));
    }
    return res;
}

ChunkedRelation import_table(const std::filesystem::path &file, const StoredRelation &sr) {
    std::ifstream in(file);
    if (!in) {
        throw GraphError(fmt::format("cannot open {}", file.string()));
    }
    ChunkedRelation rel;
    rel.name = sr.table;
    rel.chunk_size = sr.chunk_size;
    for (const auto &c : sr.key_cols) {
        rel.key_columns.push_back(c.column);
    }
    std::string line;
    int64_t max_key0 = -1, max_chunk = -1;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        ChunkRecord rec;
        size_t pos = 0;
        for (size_t k = 0; k < sr.key_cols.size() + 1; ++k) {
            size_t bar = line.find('|', pos);
            std::string field = line.substr(pos, bar - pos);
            if (k < sr.key_cols.size()) {
                rec.keys.push_back(std::stoll(field));
            } else {
                rec.chunk_id = std::stoll(field);
            }
            pos = bar + 1;
        }
        std::string tail = line.substr(pos);
        if (sr.chunk_size == 1) {
            rec.vec.push_back(std::strtof(tail.c_str(), nullptr));
        } else {
            // bracketed comma-separated list
            const char *p = tail.c_str() + 1;
            char *end = nullptr;
            while (*p && *p != ']') {
                rec.vec.push_back(std::strtof(p, &end));
                p = end;
                if (*p == ',') {
                    ++p;
                }
            }
        }
        if (!rec.keys.empty()) {
            max_key0 = std::max(max_key0, rec.keys.back());
        }
        max_chunk = std::max(max_chunk, rec.chunk_id);
        rel.records.push_back(std::move(rec));
    }
    rel.m = max_key0 + 1;
    rel.n = (max_chunk + 1) * sr.chunk_size;
    return rel;
}

} // namespace relic
