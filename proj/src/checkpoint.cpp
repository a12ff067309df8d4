#include "bge/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace bge {

namespace {

using nlohmann::json;

constexpr int kVersion = 1;

json mat_json(const Mat& m) {
    return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.a}};
}

Mat mat_from(const json& j) {
    Mat m(j.at("rows").get<int>(), j.at("cols").get<int>());
    m.a = j.at("data").get<std::vector<double>>();
    if (m.a.size() != static_cast<size_t>(m.rows) * m.cols)
        throw Error("bad-checkpoint", "matrix payload size mismatch");
    return m;
}

json cmat_json(const CMat& m) {
    std::vector<double> flat(m.size() * 2);
    for (size_t i = 0; i < m.size(); ++i) {
        flat[2 * i] = m.a[i].real();
        flat[2 * i + 1] = m.a[i].imag();
    }
    return {{"rows", m.rows}, {"cols", m.cols}, {"data", flat}};
}

CMat cmat_from(const json& j) {
    CMat m(j.at("rows").get<int>(), j.at("cols").get<int>());
    const auto flat = j.at("data").get<std::vector<double>>();
    if (flat.size() != m.size() * 2)
        throw Error("bad-checkpoint", "complex matrix payload size mismatch");
    for (size_t i = 0; i < m.size(); ++i) m.a[i] = {flat[2 * i], flat[2 * i + 1]};
    return m;
}

json encoder_json(const EncoderState& st) {
    json modes = json::array();
    for (const auto& sel : st.modes) modes.push_back(sel.indices);
    json phi = json::array();
    for (const auto& layer : st.phi) {
        json lj = json::array();
        for (const auto& m : layer) lj.push_back(cmat_json(m));
        phi.push_back(lj);
    }
    json w = json::array(), wa = json::array(), b = json::array(), ba = json::array();
    for (const auto& m : st.w) w.push_back(mat_json(m));
    for (const auto& m : st.wa) wa.push_back(mat_json(m));
    for (const auto& v : st.b) b.push_back(v);
    for (const auto& v : st.ba) ba.push_back(v);
    return {{"config",
             {{"d0", st.cfg.d0},
              {"layers", st.cfg.layers},
              {"modes_per_layer", st.cfg.modes_per_layer},
              {"alpha_bgc", st.cfg.alpha_bgc},
              {"policy", st.cfg.policy == SamplingPolicy::Lowest ? "lowest" : "random"},
              {"sampling_seed", st.cfg.sampling_seed},
              {"fs", st.cfg.fs}}},
            {"n_in", st.n_in},
            {"n_nodes", st.n_nodes},
            {"width", st.d0},
            {"scaler_w", mat_json(st.scaler_w)},
            {"node_bias", mat_json(st.node_bias)},
            {"modes", modes},
            {"phi", phi},
            {"w", w},
            {"b", b},
            {"wa", wa},
            {"ba", ba}};
}

EncoderState encoder_from(const json& j) {
    EncoderState st;
    const json& c = j.at("config");
    st.cfg.d0 = c.at("d0").get<int>();
    st.cfg.layers = c.at("layers").get<int>();
    st.cfg.modes_per_layer = c.at("modes_per_layer").get<std::vector<int>>();
    st.cfg.alpha_bgc = c.at("alpha_bgc").get<double>();
    st.cfg.policy = c.at("policy").get<std::string>() == "lowest" ? SamplingPolicy::Lowest
                                                                  : SamplingPolicy::SeededRandom;
    st.cfg.sampling_seed = c.at("sampling_seed").get<uint64_t>();
    st.cfg.fs = c.at("fs").get<double>();
    st.n_in = j.at("n_in").get<int>();
    st.n_nodes = j.at("n_nodes").get<int>();
    st.d0 = j.at("width").get<int>();
    st.scaler_w = mat_from(j.at("scaler_w"));
    st.node_bias = mat_from(j.at("node_bias"));
    for (const auto& sel : j.at("modes")) {
        ModeSelection s;
        s.indices = sel.get<std::vector<int>>();
        st.modes.push_back(std::move(s));
    }
    for (const auto& lj : j.at("phi")) {
        std::vector<CMat> layer;
        for (const auto& mj : lj) layer.push_back(cmat_from(mj));
        st.phi.push_back(std::move(layer));
    }
    for (const auto& mj : j.at("w")) st.w.push_back(mat_from(mj));
    for (const auto& mj : j.at("wa")) st.wa.push_back(mat_from(mj));
    for (const auto& vj : j.at("b")) st.b.push_back(vj.get<Vec>());
    for (const auto& vj : j.at("ba")) st.ba.push_back(vj.get<Vec>());
    return st;
}

json head_json(const HeadState& st) {
    json w1 = json::array(), b1 = json::array(), w2 = json::array(), b2 = json::array();
    for (const auto& m : st.w1) w1.push_back(mat_json(m));
    for (const auto& v : st.b1) b1.push_back(v);
    for (const auto& m : st.w2) w2.push_back(mat_json(m));
    for (const auto& v : st.b2) b2.push_back(v);
    return {{"kind", st.kind == HeadKind::Linear ? "linear" : "mlp"},
            {"channels", st.channels},
            {"in_dim", st.in_dim},
            {"out_dim", st.out_dim},
            {"hidden", st.hidden},
            {"w1", w1},
            {"b1", b1},
            {"w2", w2},
            {"b2", b2}};
}

HeadState head_from(const json& j) {
    HeadState st;
    st.kind = j.at("kind").get<std::string>() == "linear" ? HeadKind::Linear : HeadKind::MLP;
    st.channels = j.at("channels").get<int>();
    st.in_dim = j.at("in_dim").get<int>();
    st.out_dim = j.at("out_dim").get<int>();
    st.hidden = j.at("hidden").get<int>();
    for (const auto& mj : j.at("w1")) st.w1.push_back(mat_from(mj));
    for (const auto& vj : j.at("b1")) st.b1.push_back(vj.get<Vec>());
    for (const auto& mj : j.at("w2")) st.w2.push_back(mat_from(mj));
    for (const auto& vj : j.at("b2")) st.b2.push_back(vj.get<Vec>());
    return st;
}

}  // namespace

void save_checkpoint(const std::string& path, const Model& m) {
    json j;
    j["version"] = kVersion;
    j["informed"] = m.informed;
    j["scenario"] = {{"n_in", m.scenario.n_in}, {"k_out", m.scenario.k_out}};
    json stats = json::array();
    for (const auto& s : m.stats) stats.push_back({{"mean", s.mean}, {"stdev", s.stdev}});
    j["stats"] = stats;
    j["head"] = head_json(m.head);
    if (m.informed) {
        j["graph"] = dual_graph_json(m.graph);
        j["encoder"] = encoder_json(m.enc);
    }
    std::ofstream f(path);
    if (!f) throw Error("io-error", "cannot open " + path + " for writing");
    f << j.dump();
}

Model load_checkpoint(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("io-error", "cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw Error("bad-checkpoint", std::string("cannot parse ") + path + ": " + e.what());
    }
    if (j.at("version").get<int>() != kVersion)
        throw Error("bad-checkpoint", "unsupported checkpoint version");
    Model m;
    m.informed = j.at("informed").get<bool>();
    m.scenario.n_in = j.at("scenario").at("n_in").get<int>();
    m.scenario.k_out = j.at("scenario").at("k_out").get<int>();
    for (const auto& sj : j.at("stats"))
        m.stats.push_back({sj.at("mean").get<double>(), sj.at("stdev").get<double>()});
    m.head = head_from(j.at("head"));
    if (m.informed) {
        m.graph = dual_graph_from_json(j.at("graph"));
        m.rt = make_runtime(m.graph);
        m.enc = encoder_from(j.at("encoder"));
    }
    return m;
}

}  // namespace bge
