#include "grm/json_io.hpp"

#include <json.hpp>

#include "grm/errors.hpp"
#include "grm/version.hpp"

namespace grm {

using nlohmann::json;

namespace {

std::string dump_doc(const json& doc) { return doc.dump(2) + "\n"; }

json rational_node(const Rational& q) { return rational_str(q); }

json poly_node(const Polynomial& f) {
    json terms = json::array();
    for (const auto& [exps, coeff] : f.terms()) {
        json term;
        term["coeff"] = static_cast<int>(coeff);
        term["exps"] = json::array();
        for (uint8_t e : exps) term["exps"].push_back(static_cast<int>(e));
        terms.push_back(std::move(term));
    }
    json node;
    node["p"] = f.field().p();
    node["m"] = f.vars();
    node["terms"] = std::move(terms);
    return node;
}

Polynomial poly_from_node(const json& node) {
    FieldParams field(node.at("p").get<int>());
    int vars = node.at("m").get<int>();
    Polynomial f(field, vars);
    for (const auto& term : node.at("terms")) {
        Exponents exps;
        for (const auto& e : term.at("exps")) exps.push_back(e.get<uint8_t>());
        f.add_term(exps, term.at("coeff").get<int>());
    }
    return f;
}

json decomposition_node(const Decomposition& d) {
    json node;
    node["factors"] = json::array();
    for (const auto& g : d.factors) node["factors"].push_back(poly_node(g));
    node["combiner"] = json::array();
    for (uint8_t v : d.combiner) node["combiner"].push_back(static_cast<int>(v));
    node["factor_degree_bound"] = d.factor_degree_bound;
    return node;
}

json certificate_node(const RegularityCertificate& cert) {
    auto kind_str = [](RegularityCertificate::ComboKind kind) {
        switch (kind) {
            case RegularityCertificate::ComboKind::nonconstant_linear: return "nonconstant-linear";
            case RegularityCertificate::ComboKind::rank_above_threshold: return "rank-above-threshold";
            case RegularityCertificate::ComboKind::violation_zero: return "violation-zero";
            case RegularityCertificate::ComboKind::violation_constant: return "violation-constant";
            case RegularityCertificate::ComboKind::violation_low_rank: return "violation-low-rank";
            case RegularityCertificate::ComboKind::inconclusive: return "inconclusive";
        }
        return "inconclusive";
    };
    json node;
    node["threshold"] = cert.threshold;
    switch (cert.verdict) {
        case RegularityCertificate::Verdict::regular: node["verdict"] = "regular"; break;
        case RegularityCertificate::Verdict::violation: node["verdict"] = "violation"; break;
        case RegularityCertificate::Verdict::unconfirmed: node["verdict"] = "unconfirmed"; break;
    }
    node["combinations"] = json::array();
    for (const auto& rec : cert.records) {
        json row;
        row["coeffs"] = json::array();
        for (uint8_t a : rec.coeffs) row["coeffs"].push_back(static_cast<int>(a));
        row["degree"] = rec.degree.str();
        row["kind"] = kind_str(rec.kind);
        if (rec.rank_value) row["rank"] = *rec.rank_value;
        node["combinations"].push_back(std::move(row));
    }
    if (cert.first_violation) node["first_violation"] = *cert.first_violation;
    return node;
}

json rank_node(const RankResult& result) {
    json node;
    switch (result.status) {
        case RankResult::Status::exact: node["status"] = "exact"; break;
        case RankResult::Status::lower_bound: node["status"] = "lower_bound"; break;
        case RankResult::Status::search_exhausted: node["status"] = "search_exhausted"; break;
    }
    if (result.infinite) {
        node["value"] = "inf";
    } else {
        node["value"] = result.value;
    }
    if (result.status == RankResult::Status::search_exhausted) {
        node["upper_bound"] = result.upper_bound;
    }
    if (result.witness) node["witness"] = decomposition_node(*result.witness);
    return node;
}

json distribution_node(const Distribution& d) {
    json node;
    node["p"] = d.field.p();
    node["c"] = d.arity;
    node["masses"] = json::array();
    for (const auto& mass : d.masses) node["masses"].push_back(rational_str(mass));
    return node;
}

json parse_doc(const std::string& text, const char* what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError(std::string("malformed ") + what + " JSON");
    return doc;
}

}  // namespace

std::string to_json(const Polynomial& f) { return dump_doc(poly_node(f)); }

Polynomial polynomial_from_json(const std::string& text) {
    return poly_from_node(parse_doc(text, "polynomial"));
}

std::string spectrum_payload_json(const WeightSpectrum& spectrum) {
    json node;
    node["p"] = spectrum.params.field.p();
    node["r"] = spectrum.params.order;
    node["m"] = spectrum.params.vars;
    node["dim"] = spectrum.params.dimension();
    node["mode"] = mode_str(spectrum.mode);
    node["tool_version"] = spectrum.tool_version;
    node["counts"] = json::array();
    for (const auto& [w, count] : spectrum.counts) {
        node["counts"].push_back(json::array({w, count.get_str()}));
    }
    return dump_doc(node);
}

WeightSpectrum spectrum_from_payload_json(const std::string& text) {
    json node = parse_doc(text, "spectrum");
    WeightSpectrum spectrum;
    spectrum.params = CodeParams{FieldParams(node.at("p").get<int>()), node.at("r").get<int>(),
                                 node.at("m").get<int>()};
    spectrum.mode = mode_from_str(node.at("mode").get<std::string>());
    spectrum.tool_version = node.at("tool_version").get<std::string>();
    spectrum.worker_partitions = 1;
    for (const auto& entry : node.at("counts")) {
        uint64_t w = entry.at(0).get<uint64_t>();
        spectrum.counts[w] = BigInt(entry.at(1).get<std::string>());
    }
    if (node.at("dim").get<uint64_t>() != spectrum.params.dimension()) {
        throw ParseError("spectrum dim field disagrees with (p, r, m)");
    }
    return spectrum;
}

std::string weight_set_json(const WeightSpectrum& spectrum) {
    json node;
    node["p"] = spectrum.params.field.p();
    node["r"] = spectrum.params.order;
    node["m"] = spectrum.params.vars;
    node["mode"] = mode_str(spectrum.mode);
    node["weights"] = json::array();
    for (const auto& w : weight_set(spectrum)) node["weights"].push_back(w.str());
    return dump_doc(node);
}

std::string gap_report_json(const GapReport& report) {
    json node;
    node["alpha"] = report.alpha.str();
    node["p"] = report.p;
    node["r"] = report.order;
    node["max_m"] = report.max_m;
    node["per_m"] = json::array();
    for (const auto& row : report.per_m) {
        json entry;
        entry["m"] = row.vars;
        entry["nearest"] = row.nearest.str();
        entry["distance"] = rational_str(row.distance);
        entry["mode"] = mode_str(row.mode);
        node["per_m"].push_back(std::move(entry));
    }
    node["overall_gap"] = rational_str(report.overall_gap);
    node["attained"] = report.attained;
    node["complete"] = report.complete;
    return dump_doc(node);
}

std::string ax_check_json(const CodeParams& params, const AxCheckResult& result) {
    json node;
    node["p"] = params.field.p();
    node["r"] = params.order;
    node["m"] = params.vars;
    node["divisor"] = result.divisor.get_str();
    node["ok"] = result.ok;
    node["violations"] = json::array();
    for (uint64_t w : result.violations) node["violations"].push_back(w);
    return dump_doc(node);
}

std::string min_weight_json(const CodeParams& params, const std::string& mode,
                            const BigInt& value) {
    json node;
    node["p"] = params.field.p();
    node["r"] = params.order;
    node["m"] = params.vars;
    node["mode"] = mode;
    node["min_weight"] = value.get_str();
    return dump_doc(node);
}

std::string rank_json(const RankResult& result) { return dump_doc(rank_node(result)); }

std::string decomposition_json(const Decomposition& decomposition) {
    return dump_doc(decomposition_node(decomposition));
}

std::string regularity_certificate_json(const RegularityCertificate& certificate) {
    return dump_doc(certificate_node(certificate));
}

std::string regularize_json(const RegularizeResult& result) {
    json node;
    node["decomposition"] = decomposition_node(result.decomposition);
    node["certificate"] = certificate_node(result.certificate);
    node["confirmed"] = result.confirmed;
    node["refinement_steps"] = result.refinement_steps;
    return dump_doc(node);
}

std::string compress_json(const CompressResult& result) {
    json node;
    node["c"] = result.arity;
    node["function_table"] = json::array();
    for (uint8_t v : result.function_table) node["function_table"].push_back(static_cast<int>(v));
    node["f_relative_weight"] = rational_node(result.f_relative_weight);
    node["g_relative_weight"] = rational_node(result.g_relative_weight);
    node["achieved_error"] = rational_node(result.achieved_error);
    node["error_budget"] = rational_node(result.error_budget);
    node["distribution_distance"] = rational_node(result.distribution_distance);
    node["ok"] = result.ok;
    node["confirmed_regular"] = result.regularization.confirmed;
    node["factors"] = json::array();
    for (const auto& g : result.regularization.decomposition.factors) {
        node["factors"].push_back(poly_node(g));
    }
    return dump_doc(node);
}

std::string distribution_json(const Distribution& distribution) {
    return dump_doc(distribution_node(distribution));
}

Distribution distribution_from_json(const std::string& text) {
    json node = parse_doc(text, "distribution");
    Distribution d{FieldParams(node.at("p").get<int>()), node.at("c").get<int>(), {}};
    for (const auto& mass : node.at("masses")) {
        d.masses.push_back(parse_rational(mass.get<std::string>()));
    }
    d.validate();
    return d;
}

std::string distance_json(const Distribution& d1, const Distribution& d2, const Rational& value) {
    json node;
    node["p"] = d1.field.p();
    node["c"] = d1.arity;
    node["first"] = distribution_node(d1);
    node["second"] = distribution_node(d2);
    node["distance"] = rational_node(value);
    return dump_doc(node);
}

std::string approximation_json(const ApproximationResult& result) {
    json node;
    node["target"] = distribution_node(result.target);
    node["r_max"] = result.r_max;
    node["m_max"] = result.m_max;
    node["complete"] = result.complete;
    node["best_distance"] = rational_node(result.best_distance);
    node["best_order"] = result.best_order;
    node["per_degree"] = json::array();
    for (const auto& slice : result.per_degree) {
        json entry;
        entry["r"] = slice.order;
        entry["distance"] = rational_node(slice.best_distance);
        entry["witness"] = poly_node(approximation_witness(slice, result.target.field));
        entry["vars_searched"] = slice.witness_vars;
        entry["exhausted"] = slice.exhausted;
        node["per_degree"].push_back(std::move(entry));
    }
    return dump_doc(node);
}

std::string bias_scan_json(const BiasRankScan& scan) {
    json node;
    node["p"] = scan.field.p();
    node["r"] = scan.order;
    node["m"] = scan.vars;
    node["rows"] = json::array();
    for (const auto& row : scan.rows) {
        json entry;
        entry["distance"] = rational_node(row.distance);
        if (row.rank_infinite) {
            entry["rank"] = "inf";
        } else {
            entry["rank"] = row.rank_value;
        }
        node["rows"].push_back(std::move(entry));
    }
    node["epsilon_to_max_rank"] = json::array();
    for (const auto& threshold : scan.eps_to_max_rank) {
        json entry;
        entry["epsilon"] = rational_node(threshold.epsilon);
        if (threshold.infinite) {
            entry["max_rank"] = "inf";
        } else {
            entry["max_rank"] = threshold.max_rank;
        }
        node["epsilon_to_max_rank"].push_back(std::move(entry));
    }
    return dump_doc(node);
}

std::string spectrum_csv(const WeightSpectrum& spectrum) {
    std::string out = "weight,count\n";
    for (const auto& [w, count] : spectrum.counts) {
        out += std::to_string(w) + "," + count.get_str() + "\n";
    }
    return out;
}

std::string bias_scan_csv(const BiasRankScan& scan) {
    std::string out = "distance,rank\n";
    for (const auto& row : scan.rows) {
        out += rational_str(row.distance) + ",";
        out += row.rank_infinite ? "inf" : std::to_string(row.rank_value);
        out += "\n";
    }
    return out;
}

std::string weight_set_csv(const WeightSpectrum& spectrum) {
    std::string out = "relative_weight\n";
    for (const auto& w : weight_set(spectrum)) out += w.str() + "\n";
    return out;
}

}  // namespace grm
