#include "affdec/serialize.hpp"

#include "affdec/errors.hpp"

#include <cmath>
#include <limits>

namespace affdec {

namespace {

Json point(const Point2& p) { return Json::array({number_to_json(p[0]), number_to_json(p[1])}); }
Point2 point_from(const Json& j) { return {number_from_json(j.at(0)), number_from_json(j.at(1))}; }

Json witnesses(const AdmissibilityWitnesses& w) {
    return {{"det_sup_2omega", number_to_json(w.det_sup_2omega)},
            {"det_inf_2omega", number_to_json(w.det_inf_2omega)},
            {"phi_t_norm", number_to_json(w.phi_t_norm)},
            {"bar_det_inf", number_to_json(w.bar_det_inf)},
            {"bar_det_sup", number_to_json(w.bar_det_sup)},
            {"bar_deriv_sup", number_to_json(w.bar_deriv_sup)}};
}

AdmissibilityWitnesses witnesses_from(const Json& j) {
    AdmissibilityWitnesses w;
    w.det_sup_2omega = number_from_json(j.at("det_sup_2omega"));
    w.det_inf_2omega = number_from_json(j.at("det_inf_2omega"));
    w.phi_t_norm = number_from_json(j.at("phi_t_norm"));
    w.bar_det_inf = number_from_json(j.at("bar_det_inf"));
    w.bar_det_sup = number_from_json(j.at("bar_det_sup"));
    w.bar_deriv_sup = number_from_json(j.at("bar_deriv_sup"));
    return w;
}

Admissibility admissibility_from(const std::string& s) {
    for (auto a : {Admissibility::FlatAdmissible, Admissibility::CurvedAdmissible, Admissibility::NotAdmissible})
        if (to_string(a) == s) return a;
    throw InvalidArgument("unknown admissibility class '" + s + "'");
}

Json numbers(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) out.push_back(number_to_json(x));
    return out;
}

std::string hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 15];
    return s;
}

}  // namespace

Json number_to_json(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double number_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw InvalidArgument("expected a number, got " + j.dump());
}

Json to_json(const Poly2& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back({e.first, e.second, number_to_json(c)});
    return {{"degree", p.max_degree()}, {"terms", terms}};
}

Poly2 poly_from_json(const Json& j) {
    Poly2 p(j.at("degree").get<int>());
    for (const auto& t : j.at("terms")) {
        const int a = t.at(0).get<int>(), b = t.at(1).get<int>();
        if (a < 0 || b < 0 || a + b > p.max_degree()) throw InvalidArgument("polynomial term exceeds its degree");
        p.add(a, b, number_from_json(t.at(2)));
    }
    return p;
}

Json to_json(const Parallelogram& omega) {
    return {{"center", point(omega.center())}, {"u", point(omega.u())}, {"v", point(omega.v())}};
}

Parallelogram parallelogram_from_json(const Json& j) {
    return Parallelogram::from_edges(point_from(j.at("center")), point_from(j.at("u")), point_from(j.at("v")));
}

Json to_json(const AdmissibilityConstants& c) {
    return {{"C1", c.C1}, {"C2", c.C2}, {"c3", c.c3}, {"C3", c.C3}, {"c4", c.c4},
            {"C4", c.C4}, {"C5", c.C5}, {"rel_slack", c.rel_slack}};
}

AdmissibilityConstants constants_from_json(const Json& j) {
    AdmissibilityConstants c;
    c.C1 = j.at("C1").get<double>();
    c.C2 = j.at("C2").get<double>();
    c.c3 = j.at("c3").get<double>();
    c.C3 = j.at("C3").get<double>();
    c.c4 = j.at("c4").get<double>();
    c.C4 = j.at("C4").get<double>();
    c.C5 = j.at("C5").get<double>();
    c.rel_slack = j.at("rel_slack").get<double>();
    return c;
}

Json to_json(const DecomposeConfig& c) {
    return {{"K", c.K},
            {"alpha", c.alpha},
            {"custom_constants", c.custom_constants},
            {"constants", to_json(c.consts)},
            {"band_ratio", c.band_ratio},
            {"max_steps", c.max_steps},
            {"max_refine", c.max_refine},
            {"domain", c.domain}};
}

DecomposeConfig decompose_config_from_json(const Json& j) {
    DecomposeConfig c;
    c.K = j.at("K").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.custom_constants = j.at("custom_constants").get<bool>();
    c.consts = constants_from_json(j.at("constants"));
    c.band_ratio = j.at("band_ratio").get<double>();
    c.max_steps = j.at("max_steps").get<int>();
    c.max_refine = j.at("max_refine").get<int>();
    c.domain = j.at("domain").get<std::array<double, 4>>();
    return c;
}

Json to_json(const DecompositionResult& r) {
    Json families = Json::array();
    for (const auto& [e, leaves] : r.families) {
        Json list = Json::array();
        for (const auto& leaf : leaves)
            list.push_back({{"omega", to_json(leaf.omega)},
                            {"sigma_exp", leaf.sigma_exp},
                            {"verdict", to_string(leaf.verdict)},
                            {"witnesses", witnesses(leaf.w)},
                            {"stop_reason", to_string(leaf.stop_reason)},
                            {"node", leaf.node}});
        families.push_back({{"sigma_exp", e}, {"sigma", number_to_json(sigma_of(e))}, {"leaves", list}});
    }
    Json tree = Json::array();
    for (const auto& n : r.tree)
        tree.push_back({{"id", n.id},
                        {"parent", n.parent},
                        {"branch", to_string(n.branch)},
                        {"depth", n.depth},
                        {"omega", to_json(n.omega)},
                        {"sigma_exp", n.sigma_exp},
                        {"H", number_to_json(n.H)},
                        {"containment", number_to_json(n.containment)}});
    return {{"R", r.R},
            {"eps", r.eps},
            {"config", to_json(r.cfg)},
            {"constants", to_json(r.consts)},
            {"degree", r.degree},
            {"tiny_bound", number_to_json(r.tiny_bound)},
            {"tiny_exp", r.tiny_exp},
            {"det_scale", number_to_json(r.det_scale)},
            {"families", families},
            {"tree", tree}};
}

DecompositionResult decomposition_from_json(const Json& j) {
    DecompositionResult r;
    r.R = j.at("R").get<double>();
    r.eps = j.at("eps").get<double>();
    r.cfg = decompose_config_from_json(j.at("config"));
    r.consts = constants_from_json(j.at("constants"));
    r.degree = j.at("degree").get<int>();
    r.tiny_bound = number_from_json(j.at("tiny_bound"));
    r.tiny_exp = j.at("tiny_exp").get<int>();
    r.det_scale = number_from_json(j.at("det_scale"));
    for (const auto& fam : j.at("families")) {
        auto& leaves = r.families[fam.at("sigma_exp").get<int>()];
        for (const auto& l : fam.at("leaves")) {
            DecompositionLeaf leaf;
            leaf.omega = parallelogram_from_json(l.at("omega"));
            leaf.sigma_exp = l.at("sigma_exp").get<int>();
            leaf.verdict = admissibility_from(l.at("verdict").get<std::string>());
            leaf.w = witnesses_from(l.at("witnesses"));
            leaf.stop_reason = stop_reason_from_string(l.at("stop_reason").get<std::string>());
            leaf.node = l.at("node").get<int>();
            leaves.push_back(leaf);
        }
    }
    for (const auto& t : j.at("tree")) {
        TreeNode n;
        n.id = t.at("id").get<int>();
        n.parent = t.at("parent").get<int>();
        n.branch = branch_from_string(t.at("branch").get<std::string>());
        n.depth = t.at("depth").get<int>();
        n.omega = parallelogram_from_json(t.at("omega"));
        n.sigma_exp = t.at("sigma_exp").get<int>();
        n.H = number_from_json(t.at("H"));
        n.containment = number_from_json(t.at("containment"));
        r.tree.push_back(n);
    }
    return r;
}

Json to_json(const ValidationReport& v) {
    Json overlap = Json::array();
    for (const auto& [e, m] : v.overlap50)
        overlap.push_back({{"sigma_exp", e},
                           {"overlap50", m},
                           {"overlap_scaled", number_to_json(v.overlap_scaled.count(e) ? v.overlap_scaled.at(e) : 0)}});
    return {{"ok", v.ok()},
            {"coverage_ok", v.coverage_ok},
            {"coverage_fraction", number_to_json(v.coverage_fraction)},
            {"uncovered_witness", point(v.uncovered_witness)},
            {"width_ok", v.width_ok},
            {"min_width", number_to_json(v.min_width)},
            {"width_witness", v.width_witness},
            {"admissible_ok", v.admissible_ok},
            {"admissibility_failures", v.admissibility_failures},
            {"tiny_ok", v.tiny_ok},
            {"depth_ok", v.depth_ok},
            {"max_depth", v.max_depth},
            {"depth_bound", number_to_json(v.depth_bound)},
            {"telescoping_ok", v.telescoping_ok},
            {"max_containment_product", number_to_json(v.max_containment_product)},
            {"max_formal_product", number_to_json(v.max_formal_product)},
            {"overlap", overlap}};
}

Json to_json(const RatioReport& r, bool timings) {
    Json extra = Json::object();
    for (const auto& [k, v] : r.extra) extra[k] = number_to_json(v);
    Json j = {{"name", r.name},
              {"value", number_to_json(r.value)},
              {"inputs_hash", hex(r.inputs_hash)},
              {"grid_n", r.grid_n},
              {"zero_input", r.zero_input},
              {"extra", extra}};
    if (timings) j["runtime"] = r.runtime;
    return j;
}

Json to_json(const EnsembleReport& r, bool timings) {
    Json j = {{"name", r.name},
              {"R", r.R},
              {"nodes", r.nodes},
              {"grid_n", r.grid_n},
              {"inputs_hash", hex(r.inputs_hash)},
              {"values", numbers(r.values)},
              {"max", number_to_json(r.max)},
              {"min", number_to_json(r.min)},
              {"mean", number_to_json(r.mean)}};
    if (timings) j["runtime"] = r.runtime;
    return j;
}

Json to_json(const DecouplingEnsemble& d, bool timings) {
    Json families = Json::array();
    for (const auto& f : d.families)
        families.push_back({{"sigma_exp", f.sigma_exp},
                            {"sigma", number_to_json(f.sigma)},
                            {"pieces", f.pieces},
                            {"nodes", f.nodes},
                            {"inputs_hash", hex(f.inputs_hash)},
                            {"ratios", numbers(f.ratios)},
                            {"scaled", numbers(f.scaled)},
                            {"max_ratio", number_to_json(f.max_ratio)},
                            {"max_scaled", number_to_json(f.max_scaled)},
                            {"cs_ok", f.cs_ok}});
    Json j = {{"R", d.R}, {"eps", d.eps}, {"p", d.p}, {"grid_n", d.grid_n}, {"families", families}};
    if (timings) j["runtime"] = d.runtime;
    return j;
}

Json to_json(const CounterexampleScan& s, bool timings) {
    Json rows = Json::array();
    for (const auto& r : s.rows)
        rows.push_back({{"n", r.n},
                        {"I", number_to_json(r.I)},
                        {"lower", number_to_json(r.lower)},
                        {"ratio", number_to_json(r.ratio)},
                        {"ratio_mean", number_to_json(r.ratio_mean)}});
    Json j = {{"k", s.k},
              {"q", s.q},
              {"p_prime", s.p_prime},
              {"rows", rows},
              {"c_min", number_to_json(s.c_min)},
              {"c_max", number_to_json(s.c_max)},
              {"increasing", s.increasing},
              {"slope", number_to_json(s.slope)},
              {"slope_mean", number_to_json(s.slope_mean)},
              {"slope_direct", number_to_json(s.slope_direct)},
              {"slope_displayed", number_to_json(s.slope_displayed)},
              {"tail_bound", number_to_json(s.tail_bound)},
              {"pieces", s.pieces}};
    if (timings) j["runtime"] = s.runtime;
    return j;
}

Json artifact(const std::string& command, const Json& config, const Json& result) {
    return {{"schema", kSchemaVersion}, {"build", AFFDEC_BUILD_ID}, {"command", command}, {"config", config},
            {"result", result}};
}

void check_schema(const Json& j) {
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != kSchemaVersion)
        throw InvalidArgument(std::string("artifact schema is not ") + kSchemaVersion);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace affdec
