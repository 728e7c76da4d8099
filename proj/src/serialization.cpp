#include "phe/serialization.hpp"

#include <charconv>
#include <sstream>

namespace phe {

Json to_json(const IntervalPartition& m) {
    Json j;
    j["kind"] = "interval";
    Json bps = Json::array();
    for (const auto& b : m.breakpoints()) bps.push_back(Json{{"num", b.num}, {"level", b.level}});
    j["breakpoints"] = std::move(bps);
    return j;
}

IntervalPartition interval_partition_from_json(const nlohmann::json& j) {
    if (j.at("kind").get<std::string>() != "interval")
        throw std::invalid_argument("expected an interval partition");
    std::vector<DyadicPoint> breaks;
    for (const auto& b : j.at("breakpoints"))
        breaks.emplace_back(b.at("num").get<std::uint64_t>(), b.at("level").get<unsigned>());
    return IntervalPartition(std::move(breaks));
}

namespace {

Json cube_to_json(const DyadicCube& c) {
    Json j = Json::array();
    j.push_back(c.level);
    for (auto i : c.idx) j.push_back(i);
    return j;
}

DyadicCube cube_from_json(const nlohmann::json& j) {
    const unsigned level = j.at(0).get<unsigned>();
    std::vector<std::uint32_t> idx;
    for (std::size_t d = 1; d < j.size(); ++d) idx.push_back(j.at(d).get<std::uint32_t>());
    return DyadicCube(level, std::move(idx));
}

}  // namespace

Json to_json(const CubePartition& m) {
    Json j;
    j["kind"] = "cube";
    j["k"] = m.dim();
    Json cells = Json::array();
    for (const auto& c : m.cells()) {
        Json cell;
        cell["outer"] = cube_to_json(c.outer);
        Json holes = Json::array();
        for (const auto& h : c.holes) holes.push_back(cube_to_json(h));
        cell["holes"] = std::move(holes);
        cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    return j;
}

CubePartition cube_partition_from_json(const nlohmann::json& j) {
    if (j.at("kind").get<std::string>() != "cube")
        throw std::invalid_argument("expected a cube partition");
    const unsigned k = j.at("k").get<unsigned>();
    std::vector<CubeCell> cells;
    for (const auto& cj : j.at("cells")) {
        CubeCell cell;
        cell.outer = cube_from_json(cj.at("outer"));
        for (const auto& hj : cj.at("holes")) cell.holes.push_back(cube_from_json(hj));
        cells.push_back(std::move(cell));
    }
    return CubePartition(k, std::move(cells));
}

Json to_json(const VectorPartition& m) {
    Json j;
    j["kind"] = "vector";
    j["n"] = m.ground_size();
    j["blocks"] = m.blocks();
    return j;
}

VectorPartition vector_partition_from_json(const nlohmann::json& j) {
    if (j.at("kind").get<std::string>() != "vector")
        throw std::invalid_argument("expected a vector partition");
    return VectorPartition(j.at("n").get<std::uint32_t>(),
                           j.at("blocks").get<std::vector<std::vector<std::uint32_t>>>());
}

namespace {

Json tree_nodes_to_json(const std::vector<std::uint8_t>& pre, std::size_t& pos, std::size_t arity) {
    const bool internal = pre[pos++] != 0;
    if (!internal) return Json(0);
    Json node = Json::array();
    for (std::size_t c = 0; c < arity; ++c) node.push_back(tree_nodes_to_json(pre, pos, arity));
    return node;
}

void tree_nodes_from_json(const nlohmann::json& node, std::vector<std::uint8_t>& pre,
                          std::size_t arity) {
    if (node.is_number()) {
        pre.push_back(0);
        return;
    }
    if (!node.is_array() || node.size() != arity)
        throw std::invalid_argument("tree node must be 0 or an array of children");
    pre.push_back(1);
    for (const auto& child : node) tree_nodes_from_json(child, pre, arity);
}

}  // namespace

Json to_json(const TreePartition& m) {
    Json j;
    j["kind"] = "tree";
    j["k"] = m.dim();
    std::size_t pos = 0;
    j["nodes"] = tree_nodes_to_json(m.preorder(), pos, std::size_t{1} << m.dim());
    return j;
}

TreePartition tree_partition_from_json(const nlohmann::json& j) {
    if (j.at("kind").get<std::string>() != "tree")
        throw std::invalid_argument("expected a tree partition");
    const unsigned k = j.at("k").get<unsigned>();
    std::vector<std::uint8_t> pre;
    tree_nodes_from_json(j.at("nodes"), pre, std::size_t{1} << k);
    return TreePartition(k, std::move(pre));
}

Histogram<IntervalPartition> interval_histogram_from_json(const nlohmann::json& j) {
    Histogram<IntervalPartition> h{interval_partition_from_json(j.at("partition")),
                                   j.at("levels").get<std::vector<double>>(),
                                   {}};
    if (h.levels.size() != h.partition.size())
        throw std::invalid_argument("histogram: level count does not match the partition");
    h.refresh_sqrt();
    return h;
}

Json to_json(const SelectionSummary& s) {
    Json j;
    j["framework"] = s.framework;
    if (s.framework == "counting") j["gamma_bound"] = s.gamma_bound;
    j["epsilon"] = s.epsilon;
    j["selected"] = s.selected;
    j["min_criterion"] = s.min_criterion;
    j["penalties"] = s.penalties;
    j["weights"] = s.weights;
    j["criterion"] = s.criterion;
    j["rejected"] = s.rejected;
    j["randomized_ties"] = s.randomized_ties;
    if (!s.tests.empty()) j["tests"] = s.tests;
    if (!s.distances.empty()) j["distances"] = s.distances;
    return j;
}

Json to_json(const RiskEstimate& r) {
    Json j;
    j["mean"] = r.mean;
    j["stderr"] = r.stderr;
    j["replicates"] = r.replicates;
    j["per_replicate"] = r.per_replicate;
    return j;
}

Json to_json(const TailCheck& t) {
    Json j;
    j["replicates"] = t.replicates;
    j["pilot_mean"] = t.pilot_mean;
    j["pass"] = t.pass;
    Json pts = Json::array();
    for (const auto& p : t.points) {
        Json pj;
        pj["x"] = p.x;
        pj["bound"] = p.bound;
        pj["upper_threshold"] = p.upper_threshold;
        pj["lower_threshold"] = p.lower_threshold;
        pj["upper_freq"] = p.upper_freq;
        pj["lower_freq"] = p.lower_freq;
        pj["slack"] = p.slack;
        pj["upper_pass"] = p.upper_pass;
        pj["lower_pass"] = p.lower_pass;
        pts.push_back(std::move(pj));
    }
    j["points"] = std::move(pts);
    return j;
}

Json to_json(const OracleVerdict& v) {
    Json j;
    j["claim"] = "selected-risk <= 390 (inf bias+pen + a*b*Sigma^2/2) + eps";
    j["bound"] = v.rhs;
    j["empirical"] = v.risk.mean;
    j["stderr"] = v.risk.stderr;
    j["pass"] = v.pass;
    j["inf_bias_pen"] = v.inf_bias_pen;
    j["sigma"] = v.sigma;
    j["ratio"] = v.ratio;
    j["best_model"] = v.best_model;
    j["per_model_mean_risk"] = v.per_model_mean_risk;
    j["risk"] = to_json(v.risk);
    return j;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string step_csv(const Histogram<IntervalPartition>& h) {
    std::ostringstream os;
    os << "x,y\n";
    for (std::size_t i = 0; i < h.levels.size(); ++i) {
        const auto cell = h.partition.cell(i);
        os << format_double(cell.lo.value()) << ',' << format_double(h.levels[i]) << '\n';
        os << format_double(cell.hi.value()) << ',' << format_double(h.levels[i]) << '\n';
    }
    return os.str();
}

std::string tail_check_csv(const TailCheck& t) {
    std::ostringstream os;
    os << "x,bound,upper_threshold,upper_freq,lower_threshold,lower_freq,slack\n";
    for (const auto& p : t.points) {
        os << format_double(p.x) << ',' << format_double(p.bound) << ','
           << format_double(p.upper_threshold) << ',' << format_double(p.upper_freq) << ','
           << format_double(p.lower_threshold) << ',' << format_double(p.lower_freq) << ','
           << format_double(p.slack) << '\n';
    }
    return os.str();
}

}  // namespace phe
