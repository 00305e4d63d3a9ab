#pragma once
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubature2d.hpp"
#include "errors.hpp"
#include "version.hpp"

namespace mincuba {

inline constexpr int kSchemaVersion = 1;

/**
 * Rule document, schema 1. Field order is fixed; doubles are written as the
 * shortest decimal string that reads back to the same value.
 */
inline std::string export_json(const CubatureRule& r) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["family"] = std::string(to_string(r.weight.family));
    doc["alpha"] = r.weight.params.alpha;
    doc["beta"] = r.weight.params.beta;
    doc["gamma"] = r.weight.gamma;
    doc["n"] = r.n;
    doc["degree"] = r.degree;
    doc["domain"] = std::string(to_string(r.domain));
    auto nodes = nlohmann::ordered_json::array();
    for (const Point2& p : r.nodes) nodes.push_back({p.a, p.b});
    doc["nodes"] = std::move(nodes);
    doc["weights"] = r.weights;
    auto orb = nlohmann::ordered_json::array();
    for (const OrbitIndex& o : r.orbit) orb.push_back({o.j, o.k, o.branch});
    doc["orbits"] = std::move(orb);
    doc["provenance"] = {{"library", "mincuba"}, {"version", kVersion}};
    return doc.dump(1) + "\n";
}

inline CubatureRule import_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("rule document is not valid JSON: ") + e.what());
    }
    CubatureRule r;
    try {
        if (doc.at("schema_version").get<int>() != kSchemaVersion) throw input_error("unsupported schema_version");
        r.weight.family = family_from_string(doc.at("family").get<std::string>());
        r.weight.params = {doc.at("alpha").get<double>(), doc.at("beta").get<double>()};
        r.weight.gamma = doc.at("gamma").get<double>();
        r.n = doc.at("n").get<int>();
        r.degree = doc.at("degree").get<int>();
        r.domain = domain_from_string(doc.at("domain").get<std::string>());
        for (const auto& p : doc.at("nodes")) {
            if (p.size() != 2) throw input_error("node rows must have two coordinates");
            r.nodes.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        r.weights = doc.at("weights").get<std::vector<double>>();
        for (const auto& o : doc.at("orbits")) {
            if (o.size() != 3) throw input_error("orbit rows must have three entries");
            r.orbit.push_back({o[0].get<int>(), o[1].get<int>(), o[2].get<int>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("malformed rule document: ") + e.what());
    }
    try {
        r.weight.validate();
    } catch (const parameter_error& e) {
        throw input_error(std::string("rule document: ") + e.what());
    }
    if (r.domain != domain_of(r.weight.family)) throw input_error("domain does not match the weight family");
    if (r.weights.size() != r.nodes.size() || r.orbit.size() != r.nodes.size())
        throw input_error("nodes, weights and orbits must have equal length");
    for (double w : r.weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw input_error("weights must be positive and finite");
    return r;
}

namespace detail {
inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
} // namespace detail

inline std::string export_csv(const CubatureRule& r) {
    std::string out = "x,y,w,j,k,branch\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        const OrbitIndex& o = r.orbit[i];
        out += detail::g17(r.nodes[i].a) + ',' + detail::g17(r.nodes[i].b) + ',' + detail::g17(r.weights[i]) + ',' +
               std::to_string(o.j) + ',' + std::to_string(o.k) + ',' + std::to_string(o.branch) + '\n';
    }
    return out;
}

// "x y" lines, one blank-line separated block per orbit (gnuplot "index" blocks)
inline std::string export_plotdata(const CubatureRule& r) {
    std::ostringstream os;
    os << "# domain=" << to_string(r.domain) << " family=" << to_string(r.weight.family)
       << " alpha=" << detail::g17(r.weight.params.alpha) << " beta=" << detail::g17(r.weight.params.beta)
       << " gamma=" << detail::g17(r.weight.gamma) << " n=" << r.n << " degree=" << r.degree
       << " nodes=" << r.size() << "\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0 && (r.orbit[i].j != r.orbit[i - 1].j || r.orbit[i].k != r.orbit[i - 1].k)) os << "\n\n";
        os << detail::g17(r.nodes[i].a) << ' ' << detail::g17(r.nodes[i].b) << '\n';
    }
    return os.str();
}

} // namespace mincuba
