// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relic/chunk.hpp"
#include "relic/ir.hpp"
#include "relic/reference.hpp"
#include "relic/sqlgen.hpp"

namespace relic {

struct MoeConfig {
    int64_t experts = 8;
    int64_t top_k = 2;
};

struct RopeConfig {
    double theta = 10000.0;
    int64_t table_length = 128;
};

struct ModelManifest {
    std::string name = "model";
    int64_t layers = 2;
    int64_t d_model = 64;
    int64_t heads = 4;
    int64_t kv_groups = 2;
    int64_t head_dim = 16;
    int64_t ffn_hidden = 32;
    int64_t vocab_size = 256;
    int64_t chunk_size = 16;
    std::optional<MoeConfig> moe;
    RopeConfig rope;
    uint64_t seed = 0x52454c4943ull;

    void validate() const; // H mod G = 0, d_model = H * head_dim
};

ModelManifest tiny_dense_manifest();
ModelManifest tiny_moe_manifest();

std::string manifest_json(const ModelManifest &m);
ModelManifest manifest_from_json(const std::string &text);

// The canonical computation graph for one end-to-end forward pass. The same
// graph serves prefill and decoding; only the token-input binding differs.
Graph build_model_graph(const ModelManifest &m);

// Deterministic weights for every weight/constant tensor of the graph.
WeightMap build_model_weights(const ModelManifest &m, const Graph &g);

ScriptBindings model_bindings(const ModelManifest &m, const Graph &g, bool prefill);

// Closed-form forward pass (independent of the graph interpreter): embeds
// tokens, runs every layer with GQA attention + rotary embedding and the
// (possibly expert-routed) gated FFN, and returns [n, vocab] logits.
DenseTensor manifest_forward(const ModelManifest &m, const WeightMap &w,
                             const std::vector<int64_t> &tokens);

std::vector<int64_t> manifest_greedy_decode(const ModelManifest &m, const WeightMap &w,
                                            const std::vector<int64_t> &prompt, int64_t steps);

// Smallest logit margin between the argmax token and the runner-up across
// the whole greedy decode; fixtures keep this above the flip threshold.
double manifest_decode_margin(const ModelManifest &m, const WeightMap &w,
                              const std::vector<int64_t> &prompt, int64_t steps);

std::vector<int64_t> byte_tokens(const std::string &text);

// --- convolution fixture -----------------------------------------------------

struct ConvSpec {
    int64_t channels_in = 3;
    int64_t channels_out = 4;
    int64_t image = 16;   // square input
    int64_t kernel = 3;   // square kernel
    int64_t stride = 1;
    int64_t pad = 0;
    int64_t chunk_size = 0; // 0: pick channels_in
    uint64_t seed = 7;

    int64_t out_size() const { return (image + 2 * pad - kernel) / stride + 1; }
};

// im2col lowering: one shifted projection per kernel offset, concatenated
// along the patch axis, multiplied against the unrolled kernel matrix.
Graph build_conv_graph(const ConvSpec &spec);
WeightMap build_conv_weights(const ConvSpec &spec, const Graph &g);

// Dense image/kernel values matching build_conv_weights' seed.
DenseTensor conv_input(const ConvSpec &spec);
DenseTensor conv_kernels(const ConvSpec &spec);

// --- CTE fixture ---------------------------------------------------------------

// A decoder-layer-shaped graph with exactly 38 operator nodes per layer
// (projection/rotary/attention/gated-FFN decomposition), used by the
// temporary-view-elimination structure checks.
Graph build_layer_fixture_graph(int64_t layers);
int64_t layer_fixture_nodes_per_layer();

} // namespace relic
