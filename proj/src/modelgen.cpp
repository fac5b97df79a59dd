// SPDX-License-Identifier: Apache-2.0
#include "relic/modelgen.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

using nlohmann::json;

namespace relic {

void ModelManifest::validate() const {
    if (heads % kv_groups != 0) {
        throw GraphError("manifest: heads must be divisible by kv_groups");
    }
    if (d_model != heads * head_dim) {
        throw GraphError("manifest: d_model must equal heads * head_dim");
    }
    if (d_model % chunk_size != 0 || ffn_hidden % chunk_size != 0) {
        throw GraphError("manifest: dims must be divisible by chunk_size");
    }
    if (head_dim % 2 != 0) {
        throw GraphError("manifest: head_dim must be even for rotary pairing");
    }
}

ModelManifest tiny_dense_manifest() {
    ModelManifest m;
    m.name = "tiny_dense";
    m.layers = 2;
    m.d_model = 64;
    m.heads = 4;
    m.kv_groups = 2;
    m.head_dim = 16;
    m.ffn_hidden = 32;
    m.vocab_size = 256;
    m.chunk_size = 16;
    m.rope.table_length = 128;
    m.seed = 0x52454c4943ull;
    return m;
}

ModelManifest tiny_moe_manifest() {
    ModelManifest m = tiny_dense_manifest();
    m.name = "tiny_moe";
    m.moe = MoeConfig{8, 2};
    m.seed = 0x4d4f45313ull;
    return m;
}

std::string manifest_json(const ModelManifest &m) {
    json j;
    j["name"] = m.name;
    j["layers"] = m.layers;
    j["d_model"] = m.d_model;
    j["heads"] = m.heads;
    j["kv_groups"] = m.kv_groups;
    j["head_dim"] = m.head_dim;
    j["ffn_hidden"] = m.ffn_hidden;
    j["vocab_size"] = m.vocab_size;
    j["chunk_size"] = m.chunk_size;
    if (m.moe) {
        j["moe"] = {{"experts", m.moe->experts}, {"top_k", m.moe->top_k}};
    }
    j["rope"] = {{"theta", m.rope.theta}, {"table_length", m.rope.table_length}};
    j["seed"] = m.seed;
    return j.dump(2) + "\n";
}

ModelManifest manifest_from_json(const std::string &text) {
    json j = json::parse(text);
    ModelManifest m;
    m.name = j.value("name", std::string("model"));
    m.layers = j.at("layers").get<int64_t>();
    m.d_model = j.at("d_model").get<int64_t>();
    m.heads = j.at("heads").get<int64_t>();
    m.kv_groups = j.at("kv_groups").get<int64_t>();
    m.head_dim = j.at("head_dim").get<int64_t>();
    m.ffn_hidden = j.at("ffn_hidden").get<int64_t>();
    m.vocab_size = j.at("vocab_size").get<int64_t>();
    m.chunk_size = j.at("chunk_size").get<int64_t>();
    if (j.contains("moe")) {
        m.moe = MoeConfig{j["moe"].at("experts").get<int64_t>(),
                          j["moe"].at("top_k").get<int64_t>()};
    }
    if (j.contains("rope")) {
        m.rope.theta = j["rope"].value("theta", 10000.0);
        m.rope.table_length = j["rope"].value("table_length", int64_t{128});
    }
    m.seed = j.value("seed", uint64_t{1});
    m.validate();
    return m;
}

// --- graph construction ---------------------------------------------------------

namespace {

struct GraphBuilder {
    Graph g;

    TensorDecl &decl(const std::string &name, std::vector<Axis> axes, TensorKind kind,
                     int64_t cs, InputEncoding enc = InputEncoding::dense) {
        TensorDecl t;
        t.name = name;
        t.axes = std::move(axes);
        t.kind = kind;
        t.chunk_size = cs;
        t.encoding = enc;
        g.tensors[name] = std::move(t);
        return g.tensors[name];
    }

    OpNode &node(const std::string &id, OpCategory cat, std::vector<std::string> inputs,
                 const std::string &output) {
        OpNode n;
        n.id = id;
        n.category = cat;
        n.inputs = std::move(inputs);
        n.output = output;
        g.nodes.push_back(std::move(n));
        return g.nodes.back();
    }

    OpNode &fn(const std::string &id, const std::string &in, const std::string &out, ElemFn f) {
        OpNode &n = node(id, OpCategory::elementwise_fn, {in}, out);
        n.elem_fn.fn = f;
        return n;
    }
    OpNode &arith(const std::string &id, const std::string &a, const std::string &b,
                  const std::string &out, ArithFn f) {
        OpNode &n = node(id, OpCategory::elementwise_arith, {a, b}, out);
        n.elem_arith.fn = f;
        return n;
    }
};

std::vector<int64_t> rotate_half_perm(int64_t dk) {
    std::vector<int64_t> perm(static_cast<size_t>(dk));
    for (int64_t l = 0; l < dk; ++l) {
        perm[static_cast<size_t>(l)] = (l + dk / 2) % dk;
    }
    return perm;
}

} // namespace

Graph build_model_graph(const ModelManifest &m) {
    m.validate();
    GraphBuilder b;
    int64_t n = m.rope.table_length; // nominal position extent
    int64_t d = m.d_model, dk = m.head_dim, h_count = m.heads, grp = m.kv_groups;
    int64_t qd = h_count * dk, kd = grp * dk, cs = m.chunk_size, f = m.ffn_hidden;

    b.decl("tokens", {{"pos", n}}, TensorKind::input, 1, InputEncoding::token);
    b.decl("embed", {{"token", m.vocab_size}, {"d", d}}, TensorKind::weight, cs);
    b.decl("rope_cos", {{"rpos", n}, {"dk", dk}}, TensorKind::constant, std::min(cs, dk));
    b.decl("rope_sin", {{"rpos", n}, {"dk", dk}}, TensorKind::constant, std::min(cs, dk));
    b.decl("scale_q", {{"unit", 1}}, TensorKind::constant, 1);

    b.decl("x0", {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
    {
        OpNode &lk = b.node("embed_lookup", OpCategory::lookup, {"embed", "tokens"}, "x0");
        lk.lookup = LookupAttr{"token", "token"};
    }

    std::string x = "x0";
    for (int64_t l = 0; l < m.layers; ++l) {
        auto name = [&](const std::string &s) { return fmt::format("l{}_{}", l, s); };
        auto id = name;

        b.decl(name("norm1"), {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
        b.decl(name("norm1s"), {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
        b.decl(name("g1"), {{"d", d}}, TensorKind::weight, cs);
        {
            OpNode &nm = b.node(id("norm1"), OpCategory::normalization, {x}, name("norm1"));
            nm.normalization = NormalizationAttr{ElemFn::square, AggFn::sum,
                                                 PostFn::div_sqrt_eps, 1e-5,
                                                 static_cast<double>(d), 0, true};
        }
        b.arith(id("norm1s"), name("norm1"), name("g1"), name("norm1s"), ArithFn::mul);

        // projections; the attention scale rides on Q until folding absorbs it
        b.decl(name("wq"), {{"d", d}, {"qd", qd}}, TensorKind::weight, cs);
        b.decl(name("wk"), {{"d", d}, {"kd", kd}}, TensorKind::weight, cs);
        b.decl(name("wv"), {{"d", d}, {"kd", kd}}, TensorKind::weight, cs);
        b.decl(name("q_raw"), {{"pos", n}, {"qd", qd}}, TensorKind::intermediate, cs);
        b.decl(name("q"), {{"pos", n}, {"qd", qd}}, TensorKind::intermediate, cs);
        b.decl(name("k"), {{"pos", n}, {"kd", kd}}, TensorKind::intermediate, cs);
        b.decl(name("v"), {{"pos", n}, {"kd", kd}}, TensorKind::intermediate, cs);
        b.node(id("q_proj"), OpCategory::matmul, {name("norm1s"), name("wq")}, name("q_raw"));
        b.arith(id("q_scale"), name("q_raw"), "scale_q", name("q"), ArithFn::mul);
        b.node(id("k_proj"), OpCategory::matmul, {name("norm1s"), name("wk")}, name("k"));
        b.node(id("v_proj"), OpCategory::matmul, {name("norm1s"), name("wv")}, name("v"));

        // head split: the chunked feature axis divides into (head, dk)
        b.decl(name("q_h"), {{"pos", n}, {"head", h_count}, {"dk", dk}},
               TensorKind::intermediate, std::min(cs, dk));
        b.decl(name("k_h"), {{"pos", n}, {"grp", grp}, {"dk", dk}}, TensorKind::intermediate,
               std::min(cs, dk));
        b.decl(name("v_h"), {{"pos", n}, {"grp", grp}, {"dk", dk}}, TensorKind::intermediate,
               std::min(cs, dk));
        {
            OpNode &r1 = b.node(id("q_heads"), OpCategory::reshape, {name("q")}, name("q_h"));
            r1.reshape.steps = {ReshapeStep{ReshapeStep::Kind::split, 1, dk, 0, {}}};
            OpNode &r2 = b.node(id("k_heads"), OpCategory::reshape, {name("k")}, name("k_h"));
            r2.reshape.steps = {ReshapeStep{ReshapeStep::Kind::split, 1, dk, 0, {}}};
            OpNode &r3 = b.node(id("v_heads"), OpCategory::reshape, {name("v")}, name("v_h"));
            r3.reshape.steps = {ReshapeStep{ReshapeStep::Kind::split, 1, dk, 0, {}}};
        }

        // rotary embedding: per-position cos/sin rows joined in, the rotated
        // half supplied by a lane permutation (sign lives in the sin table)
        for (const char *side : {"q", "k"}) {
            b.decl(name(fmt::format("cos_{}", side)), {{"pos", n}, {"dk", dk}},
                   TensorKind::intermediate, std::min(cs, dk));
            b.decl(name(fmt::format("sin_{}", side)), {{"pos", n}, {"dk", dk}},
                   TensorKind::intermediate, std::min(cs, dk));
            OpNode &lc = b.node(id(fmt::format("cos_{}", side)), OpCategory::lookup,
                                {"rope_cos", "tokens"}, name(fmt::format("cos_{}", side)));
            lc.lookup = LookupAttr{"rpos", "pos"};
            OpNode &ls = b.node(id(fmt::format("sin_{}", side)), OpCategory::lookup,
                                {"rope_sin", "tokens"}, name(fmt::format("sin_{}", side)));
            ls.lookup = LookupAttr{"rpos", "pos"};
        }
        auto rope = [&](const std::string &src, const std::string &side, int64_t nheads,
                        const char *head_axis) {
            std::vector<Axis> axes{{"pos", n}, {head_axis, nheads}, {"dk", dk}};
            b.decl(name(side + "_cos"), axes, TensorKind::intermediate, std::min(cs, dk));
            b.decl(name(side + "_rot"), axes, TensorKind::intermediate, std::min(cs, dk));
            b.decl(name(side + "_sin"), axes, TensorKind::intermediate, std::min(cs, dk));
            b.decl(name(side + "_rope"), axes, TensorKind::intermediate, std::min(cs, dk));
            b.arith(id(side + "_mul_cos"), src, name("cos_" + side), name(side + "_cos"),
                    ArithFn::mul);
            OpNode &rot = b.node(id(side + "_rot"), OpCategory::transpose_fallback, {src},
                                 name(side + "_rot"));
            rot.transpose.mode = TransposeAttr::Mode::lane_perm;
            rot.transpose.perm = rotate_half_perm(dk);
            b.arith(id(side + "_mul_sin"), name(side + "_rot"), name("sin_" + side),
                    name(side + "_sin"), ArithFn::mul);
            b.arith(id(side + "_rope"), name(side + "_cos"), name(side + "_sin"),
                    name(side + "_rope"), ArithFn::add);
        };
        rope(name("q_h"), "q", h_count, "head");
        rope(name("k_h"), "k", grp, "grp");

        // KV cache append: cached part union fresh part, persisted
        b.decl(name("k_cache"), {{"kpos", n}, {"grp", grp}, {"dk", dk}}, TensorKind::input,
               std::min(cs, dk));
        b.decl(name("v_cache"), {{"kpos", n}, {"grp", grp}, {"dk", dk}}, TensorKind::input,
               std::min(cs, dk));
        b.decl(name("k_all"), {{"kpos", n}, {"grp", grp}, {"dk", dk}},
               TensorKind::intermediate, std::min(cs, dk));
        b.decl(name("v_all"), {{"kpos", n}, {"grp", grp}, {"dk", dk}},
               TensorKind::intermediate, std::min(cs, dk));
        {
            OpNode &ck = b.node(id("k_cat"), OpCategory::concat,
                                {name("k_cache"), name("k_rope")}, name("k_all"));
            ck.concat.axis = 0;
            OpNode &cv = b.node(id("v_cat"), OpCategory::concat,
                                {name("v_cache"), name("v_h")}, name("v_all"));
            cv.concat.axis = 0;
        }
        b.g.persistent.insert(name("k_all"));
        b.g.persistent.insert(name("v_all"));

        // attention: masked scores against all cached positions, softmax,
        // probability-weighted sum of values
        b.decl(name("scores"), {{"pos", n}, {"head", h_count}, {"kpos", n}},
               TensorKind::intermediate, 1);
        b.decl(name("probs"), {{"pos", n}, {"head", h_count}, {"kpos", n}},
               TensorKind::intermediate, 1);
        b.decl(name("attn"), {{"pos", n}, {"head", h_count}, {"dk", dk}},
               TensorKind::intermediate, std::min(cs, dk));
        b.decl(name("attn_flat"), {{"pos", n}, {"qd", qd}}, TensorKind::intermediate, cs);
        {
            OpNode &sc = b.node(id("scores"), OpCategory::matmul,
                                {name("q_rope"), name("k_all")}, name("scores"));
            sc.matmul.batch = {BatchKey{"head", "grp", h_count / grp}};
            sc.matmul.mask = MaskPredicate{"pos", "kpos", "<="};
            OpNode &sm = b.node(id("softmax"), OpCategory::normalization, {name("scores")},
                                name("probs"));
            sm.normalization = NormalizationAttr{ElemFn::exp, AggFn::sum, PostFn::div, 0.0, 1.0,
                                                 0, true};
            OpNode &av = b.node(id("attn"), OpCategory::matmul,
                                {name("probs"), name("v_all")}, name("attn"));
            av.matmul.batch = {BatchKey{"head", "grp", h_count / grp}};
            OpNode &fl = b.node(id("attn_flat"), OpCategory::reshape, {name("attn")},
                                name("attn_flat"));
            fl.reshape.steps = {ReshapeStep{ReshapeStep::Kind::flatten, 1, 0, 0, {}}};
        }

        b.decl(name("wo"), {{"qd", qd}, {"d", d}}, TensorKind::weight, cs);
        b.decl(name("o"), {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
        b.decl(name("resid1"), {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
        b.node(id("o_proj"), OpCategory::matmul, {name("attn_flat"), name("wo")}, name("o"));
        b.arith(id("resid1"), x, name("o"), name("resid1"), ArithFn::add);

        b.decl(name("norm2"), {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
        b.decl(name("norm2s"), {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
        b.decl(name("g2"), {{"d", d}}, TensorKind::weight, cs);
        {
            OpNode &nm = b.node(id("norm2"), OpCategory::normalization, {name("resid1")},
                                name("norm2"));
            nm.normalization = NormalizationAttr{ElemFn::square, AggFn::sum,
                                                 PostFn::div_sqrt_eps, 1e-5,
                                                 static_cast<double>(d), 0, true};
        }
        b.arith(id("norm2s"), name("norm2"), name("g2"), name("norm2s"), ArithFn::mul);

        b.decl(name("ffn_out"), {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
        if (!m.moe) {
            b.decl(name("wgate"), {{"d", d}, {"f", f}}, TensorKind::weight, cs);
            b.decl(name("wup"), {{"d", d}, {"f", f}}, TensorKind::weight, cs);
            b.decl(name("wdown"), {{"f", f}, {"d", d}}, TensorKind::weight, cs);
            b.decl(name("gate_p"), {{"pos", n}, {"f", f}}, TensorKind::intermediate, cs);
            b.decl(name("up_p"), {{"pos", n}, {"f", f}}, TensorKind::intermediate, cs);
            b.decl(name("gate_sig"), {{"pos", n}, {"f", f}}, TensorKind::intermediate, cs);
            b.decl(name("gate_act"), {{"pos", n}, {"f", f}}, TensorKind::intermediate, cs);
            b.decl(name("ffn_h"), {{"pos", n}, {"f", f}}, TensorKind::intermediate, cs);
            b.node(id("gate_proj"), OpCategory::matmul, {name("norm2s"), name("wgate")},
                   name("gate_p"));
            b.node(id("up_proj"), OpCategory::matmul, {name("norm2s"), name("wup")},
                   name("up_p"));
            b.fn(id("gate_sig"), name("gate_p"), name("gate_sig"), ElemFn::sigmoid);
            b.arith(id("gate_act"), name("gate_p"), name("gate_sig"), name("gate_act"),
                    ArithFn::mul);
            b.arith(id("ffn_h"), name("gate_act"), name("up_p"), name("ffn_h"), ArithFn::mul);
            b.node(id("down_proj"), OpCategory::matmul, {name("ffn_h"), name("wdown")},
                   name("ffn_out"));
        } else {
            int64_t e_count = m.moe->experts;
            b.decl(name("wrouter"), {{"d", d}, {"expert_id", e_count}}, TensorKind::weight, cs);
            b.decl(name("wup_e"), {{"expert_id", e_count}, {"d", d}, {"f", f}},
                   TensorKind::weight, cs);
            b.decl(name("wgate_e"), {{"expert_id", e_count}, {"d", d}, {"f", f}},
                   TensorKind::weight, cs);
            b.decl(name("wdown_e"), {{"expert_id", e_count}, {"f", f}, {"d", d}},
                   TensorKind::weight, cs);
            b.decl(name("router_logits"), {{"pos", n}, {"expert_id", e_count}},
                   TensorKind::intermediate, 1);
            b.decl(name("router_probs"), {{"pos", n}, {"expert_id", e_count}},
                   TensorKind::intermediate, 1);
            b.decl(name("route"), {{"pos", n}, {"expert_id", e_count}},
                   TensorKind::intermediate, 1);
            b.node(id("router"), OpCategory::matmul, {name("norm2s"), name("wrouter")},
                   name("router_logits"));
            {
                OpNode &sm = b.node(id("router_softmax"), OpCategory::normalization,
                                    {name("router_logits")}, name("router_probs"));
                sm.normalization = NormalizationAttr{ElemFn::exp, AggFn::sum, PostFn::div, 0.0,
                                                     1.0, 0, true};
                OpNode &tk = b.node(id("route"), OpCategory::normalization,
                                    {name("router_probs")}, name("route"));
                tk.normalization =
                    NormalizationAttr{ElemFn::identity, AggFn::top_k, PostFn::identity, 0.0,
                                      1.0, m.moe->top_k, true};
            }
            std::vector<Axis> ef_axes{{"pos", n}, {"expert_id", e_count}, {"f", f}};
            b.decl(name("h_up"), ef_axes, TensorKind::intermediate, cs);
            b.decl(name("h_gate"), ef_axes, TensorKind::intermediate, cs);
            b.decl(name("h_sig"), ef_axes, TensorKind::intermediate, cs);
            b.decl(name("h_act"), ef_axes, TensorKind::intermediate, cs);
            b.decl(name("h_ffn"), ef_axes, TensorKind::intermediate, cs);
            b.decl(name("expert_out"), {{"pos", n}, {"expert_id", e_count}, {"d", d}},
                   TensorKind::intermediate, cs);
            GateSpec gate{name("route"), "pos", "expert_id", false};
            {
                OpNode &up = b.node(id("up_e"), OpCategory::matmul,
                                    {name("norm2s"), name("wup_e")}, name("h_up"));
                up.matmul.gate = gate;
                OpNode &ga = b.node(id("gate_e"), OpCategory::matmul,
                                    {name("norm2s"), name("wgate_e")}, name("h_gate"));
                ga.matmul.gate = gate;
            }
            b.fn(id("h_sig"), name("h_gate"), name("h_sig"), ElemFn::sigmoid);
            b.arith(id("h_act"), name("h_gate"), name("h_sig"), name("h_act"), ArithFn::mul);
            b.arith(id("h_ffn"), name("h_act"), name("h_up"), name("h_ffn"), ArithFn::mul);
            {
                OpNode &dn = b.node(id("down_e"), OpCategory::matmul,
                                    {name("h_ffn"), name("wdown_e")}, name("expert_out"));
                dn.matmul.batch = {BatchKey{"expert_id", "expert_id", 1}};
                OpNode &mix = b.node(id("mix"), OpCategory::matmul,
                                     {name("route"), name("expert_out")}, name("ffn_out"));
                mix.matmul.batch = {BatchKey{"pos", "pos", 1}};
            }
        }

        b.decl(name("resid2"), {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
        b.arith(id("resid2"), name("resid1"), name("ffn_out"), name("resid2"), ArithFn::add);
        x = name("resid2");
    }

    b.decl("final_norm", {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
    b.decl("final_norms", {{"pos", n}, {"d", d}}, TensorKind::intermediate, cs);
    b.decl("final_g", {{"d", d}}, TensorKind::weight, cs);
    {
        OpNode &nm = b.node("final_norm", OpCategory::normalization, {x}, "final_norm");
        nm.normalization = NormalizationAttr{ElemFn::square, AggFn::sum, PostFn::div_sqrt_eps,
                                             1e-5, static_cast<double>(m.d_model), 0, true};
    }
    b.arith("final_norms", "final_norm", "final_g", "final_norms", ArithFn::mul);
    b.decl("w_lm", {{"d", d}, {"vocab", m.vocab_size}}, TensorKind::weight, cs);
    b.decl("logits", {{"pos", n}, {"vocab", m.vocab_size}}, TensorKind::output, 1);
    b.node("lm_head", OpCategory::matmul, {"final_norms", "w_lm"}, "logits");
    b.g.outputs = {"logits"};

    for (auto &nd : b.g.nodes) {
        categorize(b.g, nd);
    }
    topo_sort(b.g);
    return b.g;
}

Graph build_layer_fixture_graph(int64_t layers) {
    ModelManifest m = tiny_dense_manifest();
    m.name = "layer_fixture";
    m.layers = layers;
    return build_model_graph(m);
}

int64_t layer_fixture_nodes_per_layer() { return 38; }

// --- weights ---------------------------------------------------------------------

WeightMap build_model_weights(const ModelManifest &m, const Graph &g) {
    WeightMap w;
    double d_scale = 1.0 / std::sqrt(static_cast<double>(m.d_model));
    double f_scale = 1.0 / std::sqrt(static_cast<double>(m.ffn_hidden));
    RopeTables rt = ref_rope_tables(m.rope.table_length, m.head_dim, m.rope.theta);

    for (const auto &[name, t] : g.tensors) {
        if (t.kind != TensorKind::weight && t.kind != TensorKind::constant) {
            continue;
        }
        if (name == "rope_cos") {
            w[name] = rt.cos;
        } else if (name == "rope_sin") {
            w[name] = rt.sin_signed;
        } else if (name == "scale_q") {
            w[name] = DenseTensor({1}, {static_cast<float>(
                                           1.0 / std::sqrt(static_cast<double>(m.head_dim)))});
        } else if (name == "embed") {
            w[name] = random_normal(t.shape(), m.seed, name, 0.8);
        } else if (name.ends_with("g1") || name.ends_with("g2") || name == "final_g") {
            DenseTensor gamma = random_normal(t.shape(), m.seed, name, 0.1);
            for (auto &v : gamma.values()) {
                v += 1.0f;
            }
            w[name] = std::move(gamma);
        } else if (name.ends_with("wdown") || name.ends_with("wdown_e")) {
            w[name] = random_normal(t.shape(), m.seed, name, f_scale);
        } else {
            w[name] = random_normal(t.shape(), m.seed, name, d_scale);
        }
    }
    return w;
}

ScriptBindings model_bindings(const ModelManifest &m, const Graph &g, bool prefill) {
    ScriptBindings binds;
    binds.input_relation["tokens"] = prefill ? "input_token_table" : "v_cur_token";
    for (int64_t l = 0; l < m.layers; ++l) {
        binds.input_relation[fmt::format("l{}_k_cache", l)] = fmt::format("kv_cache_k_{}", l);
        binds.input_relation[fmt::format("l{}_v_cache", l)] = fmt::format("kv_cache_v_{}", l);
        binds.persistent_table[fmt::format("l{}_k_all", l)] = fmt::format("kv_cache_k_{}", l);
        binds.persistent_table[fmt::format("l{}_v_all", l)] = fmt::format("kv_cache_v_{}", l);
    }
    (void)g;
    return binds;
}

// --- closed-form forward -----------------------------------------------------------

namespace {

DenseTensor slice_rows(const DenseTensor &t, int64_t rows) {
    DenseTensor out({rows, t.dim(1)});
    std::copy(t.data(), t.data() + rows * t.dim(1), out.data());
    return out;
}

} // namespace

DenseTensor manifest_forward(const ModelManifest &m, const WeightMap &w,
                             const std::vector<int64_t> &tokens) {
    int64_t n = static_cast<int64_t>(tokens.size());
    int64_t d = m.d_model, dk = m.head_dim;
    const DenseTensor &embed = w.at("embed");
    DenseTensor x({n, d});
    for (int64_t i = 0; i < n; ++i) {
        std::copy(embed.data() + tokens[static_cast<size_t>(i)] * d,
                  embed.data() + (tokens[static_cast<size_t>(i)] + 1) * d, x.data() + i * d);
    }
    RopeTables rt{slice_rows(w.at("rope_cos"), n), slice_rows(w.at("rope_sin"), n)};
    double scale = 1.0 / std::sqrt(static_cast<double>(dk));

    for (int64_t l = 0; l < m.layers; ++l) {
        auto name = [&](const std::string &s) { return fmt::format("l{}_{}", l, s); };
        DenseTensor norm1 = ref_rmsnorm(x, w.at(name("g1")), 1e-5);
        DenseTensor q = ref_matmul(norm1, w.at(name("wq")));
        for (auto &v : q.values()) {
            v = static_cast<float>(v * scale);
        }
        DenseTensor k = ref_matmul(norm1, w.at(name("wk")));
        DenseTensor v = ref_matmul(norm1, w.at(name("wv")));
        DenseTensor q_rope = ref_rope_apply(q, dk, rt);
        DenseTensor k_rope = ref_rope_apply(k, dk, rt);
        DenseTensor attn =
            ref_attention_gqa(q_rope, k_rope, v, m.heads, m.kv_groups, true, 1.0);
        DenseTensor o = ref_matmul(attn, w.at(name("wo")));
        for (int64_t i = 0; i < x.size(); ++i) {
            x.data()[i] = static_cast<float>(static_cast<double>(x.data()[i]) + o.data()[i]);
        }
        DenseTensor norm2 = ref_rmsnorm(x, w.at(name("g2")), 1e-5);
        DenseTensor ffn;
        if (!m.moe) {
            DenseTensor zero_b = DenseTensor::zeros({m.ffn_hidden});
            DenseTensor act =
                ref_swiglu(norm2, w.at(name("wup")), zero_b, w.at(name("wgate")), zero_b);
            ffn = ref_matmul(act, w.at(name("wdown")));
        } else {
            std::vector<ExpertWeights> experts;
            for (int64_t e = 0; e < m.moe->experts; ++e) {
                ExpertWeights ew;
                const DenseTensor &wg = w.at(name("wgate_e"));
                const DenseTensor &wu = w.at(name("wup_e"));
                const DenseTensor &wd = w.at(name("wdown_e"));
                ew.w_gate = DenseTensor({d, m.ffn_hidden});
                ew.w_up = DenseTensor({d, m.ffn_hidden});
                ew.w_down = DenseTensor({m.ffn_hidden, d});
                std::copy(wg.data() + e * d * m.ffn_hidden,
                          wg.data() + (e + 1) * d * m.ffn_hidden, ew.w_gate.data());
                std::copy(wu.data() + e * d * m.ffn_hidden,
                          wu.data() + (e + 1) * d * m.ffn_hidden, ew.w_up.data());
                std::copy(wd.data() + e * d * m.ffn_hidden,
                          wd.data() + (e + 1) * d * m.ffn_hidden, ew.w_down.data());
                experts.push_back(std::move(ew));
            }
            ffn = ref_moe_ffn(norm2, w.at(name("wrouter")), experts, m.moe->top_k);
        }
        for (int64_t i = 0; i < x.size(); ++i) {
            x.data()[i] = static_cast<float>(static_cast<double>(x.data()[i]) + ffn.data()[i]);
        }
    }
    DenseTensor fin = ref_rmsnorm(x, w.at("final_g"), 1e-5);
    return ref_matmul(fin, w.at("w_lm"));
}

std::vector<int64_t> manifest_greedy_decode(const ModelManifest &m, const WeightMap &w,
                                            const std::vector<int64_t> &prompt, int64_t steps) {
    std::vector<int64_t> toks = prompt;
    std::vector<int64_t> out;
    for (int64_t s = 0; s < steps; ++s) {
        DenseTensor logits = manifest_forward(m, w, toks);
        int64_t last = logits.dim(0) - 1;
        int64_t best = 0;
        float best_v = logits.at2(last, 0);
        for (int64_t t = 1; t < logits.dim(1); ++t) {
            if (logits.at2(last, t) > best_v) {
                best_v = logits.at2(last, t);
                best = t;
            }
        }
        out.push_back(best);
        toks.push_back(best);
    }
    return out;
}

double manifest_decode_margin(const ModelManifest &m, const WeightMap &w,
                              const std::vector<int64_t> &prompt, int64_t steps) {
    std::vector<int64_t> toks = prompt;
    double margin = 1e30;
    for (int64_t s = 0; s < steps; ++s) {
        DenseTensor logits = manifest_forward(m, w, toks);
        int64_t last = logits.dim(0) - 1;
        double best = -1e30, second = -1e30;
        int64_t best_t = 0;
        for (int64_t t = 0; t < logits.dim(1); ++t) {
            double v = logits.at2(last, t);
            if (v > best) {
                second = best;
                best = v;
                best_t = t;
            } else if (v > second) {
                second = v;
            }
        }
        margin = std::min(margin, best - second);
        toks.push_back(best_t);
    }
    return margin;
}

std::vector<int64_t> byte_tokens(const std::string &text) {
    std::vector<int64_t> toks;
    for (unsigned char c : text) {
        toks.push_back(static_cast<int64_t>(c));
    }
    return toks;
}

// --- convolution fixture --------------------------------------------------------------

DenseTensor conv_input(const ConvSpec &spec) {
    return random_uniform({spec.channels_in, spec.image, spec.image}, spec.seed, "image", -1.0,
                          1.0);
}

DenseTensor conv_kernels(const ConvSpec &spec) {
    return random_uniform({spec.channels_out, spec.channels_in, spec.kernel, spec.kernel},
                          spec.seed, "kernels", -1.0, 1.0);
}

Graph build_conv_graph(const ConvSpec &spec) {
    GraphBuilder b;
    int64_t c_in = spec.channels_in, k = spec.kernel, s = spec.stride, pad = spec.pad;
    int64_t oh = spec.out_size();
    int64_t cs = spec.chunk_size > 0 ? spec.chunk_size : c_in;
    int64_t ckk = c_in * k * k;
    int64_t shift_bound = s * (oh - 1) + 1;

    b.decl("image", {{"y", spec.image}, {"x", spec.image}, {"c", c_in}}, TensorKind::input, cs);
    std::vector<std::string> parts;
    for (int64_t ky = 0; ky < k; ++ky) {
        for (int64_t kx = 0; kx < k; ++kx) {
            std::string part = fmt::format("part_{}_{}", ky, kx);
            b.decl(part, {{"y", shift_bound}, {"x", shift_bound}, {"c", c_in}},
                   TensorKind::intermediate, cs);
            OpNode &nd = b.node(part, OpCategory::reshape, {"image"}, part);
            nd.reshape.steps.push_back(
                ReshapeStep{ReshapeStep::Kind::shift, 0, ky - pad, shift_bound, {}});
            nd.reshape.steps.push_back(
                ReshapeStep{ReshapeStep::Kind::shift, 1, kx - pad, shift_bound, {}});
            parts.push_back(part);
        }
    }
    std::vector<std::string> strided;
    if (s > 1) {
        for (const auto &part : parts) {
            std::string sp = part + "_s";
            b.decl(sp, {{"y", oh}, {"x", oh}, {"c", c_in}}, TensorKind::intermediate, cs);
            OpNode &nd = b.node(sp, OpCategory::reshape, {part}, sp);
            nd.reshape.steps.push_back(ReshapeStep{ReshapeStep::Kind::stride, 0, s, oh, {}});
            nd.reshape.steps.push_back(ReshapeStep{ReshapeStep::Kind::stride, 1, s, oh, {}});
            strided.push_back(sp);
        }
    } else {
        strided = parts;
    }
    b.decl("im2col", {{"y", oh}, {"x", oh}, {"ckk", ckk}}, TensorKind::intermediate, cs);
    {
        OpNode &cat = b.node("im2col", OpCategory::concat, strided, "im2col");
        cat.concat.axis = 2;
    }
    b.decl("patches", {{"patch", oh * oh}, {"ckk", ckk}}, TensorKind::intermediate, cs);
    {
        OpNode &fl = b.node("patches", OpCategory::reshape, {"im2col"}, "patches");
        fl.reshape.steps = {ReshapeStep{ReshapeStep::Kind::flatten, 0, 0, 0, {}}};
    }
    b.decl("kernel", {{"ckk", ckk}, {"oc", spec.channels_out}}, TensorKind::weight, cs);
    b.decl("convout", {{"patch", oh * oh}, {"oc", spec.channels_out}}, TensorKind::output, 1);
    b.node("conv", OpCategory::matmul, {"patches", "kernel"}, "convout");
    b.g.outputs = {"convout"};
    for (auto &nd : b.g.nodes) {
        categorize(b.g, nd);
    }
    return b.g;
}

WeightMap build_conv_weights(const ConvSpec &spec, const Graph &g) {
    (void)g;
    DenseTensor kernels = conv_kernels(spec);
    int64_t c_in = spec.channels_in, k = spec.kernel;
    DenseTensor kmat({c_in * k * k, spec.channels_out});
    for (int64_t o = 0; o < spec.channels_out; ++o) {
        for (int64_t ky = 0; ky < k; ++ky) {
            for (int64_t kx = 0; kx < k; ++kx) {
                for (int64_t c = 0; c < c_in; ++c) {
                    kmat.at2((ky * k + kx) * c_in + c, o) = kernels.at({o, c, ky, kx});
                }
            }
        }
    }
    WeightMap w;
    w["kernel"] = std::move(kmat);
    return w;
}

} // namespace relic
