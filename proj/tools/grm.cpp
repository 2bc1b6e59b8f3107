// grm: exact weight spectra, density gap scans and decomposition machinery
// for Generalized Reed-Muller codes at desk scale. One subcommand per
// library operation; all machine output is exact-rational JSON or CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "grm/cache.hpp"
#include "grm/density.hpp"
#include "grm/distributions.hpp"
#include "grm/errors.hpp"
#include "grm/json_io.hpp"
#include "grm/spectrum.hpp"
#include "grm/structure.hpp"
#include "grm/version.hpp"

namespace {

using namespace grm;

struct CommonOptions {
    int prime = 2;
    uint64_t budget = EnumerationBudget{}.max_codewords;
    int workers = 1;
    std::string format = "json";
    std::string cache_policy = "use";
    std::string out_path;
};

EnumerationBudget enumeration_budget(const CommonOptions& common) {
    EnumerationBudget budget;
    budget.max_codewords = common.budget;
    return budget;
}

SearchBudget search_budget(const CommonOptions& common) {
    SearchBudget budget;
    budget.max_candidates = common.budget;
    return budget;
}

void emit(const CommonOptions& common, const std::string& document) {
    if (common.out_path.empty()) {
        std::cout << document;
        return;
    }
    std::ofstream out(common.out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + common.out_path);
    out << document;
}

int infer_vars(const std::string& poly_text) {
    static const std::regex var_re("x([0-9]+)");
    int vars = 0;
    for (auto it = std::sregex_iterator(poly_text.begin(), poly_text.end(), var_re);
         it != std::sregex_iterator(); ++it) {
        vars = std::max(vars, std::stoi((*it)[1].str()));
    }
    return vars;
}

Polynomial parse_poly_arg(const std::string& text, int prime, int vars_flag) {
    FieldParams field(prime);
    int vars = vars_flag > 0 ? vars_flag : infer_vars(text);
    return Polynomial::parse(text, field, vars);
}

// Threshold maps accepted on the command line: "N", "c", or "c+N".
std::function<int(int)> parse_threshold_map(const std::string& text) {
    static const std::regex plain_re("[0-9]+"), linear_re("c(\\+([0-9]+))?");
    std::smatch match;
    if (std::regex_match(text, match, plain_re)) {
        int value = std::stoi(text);
        return [value](int) { return value; };
    }
    if (std::regex_match(text, match, linear_re)) {
        int offset = match[2].matched ? std::stoi(match[2].str()) : 0;
        return [offset](int c) { return c + offset; };
    }
    throw ParseError("threshold map must be 'N', 'c' or 'c+N', got '" + text + "'");
}

Distribution parse_target_arg(const std::string& text, int prime) {
    FieldParams field(prime);
    Distribution d{field, 1, {}};
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) d.masses.push_back(parse_rational(item));
    d.validate();
    return d;
}

std::string human_spectrum(const WeightSpectrum& spectrum) {
    std::string out = "RM_" + std::to_string(spectrum.params.field.p()) + "(" +
                      std::to_string(spectrum.params.order) + "," +
                      std::to_string(spectrum.params.vars) + ")  dim=" +
                      std::to_string(spectrum.params.dimension()) + "  mode=" +
                      mode_str(spectrum.mode) + "\n";
    for (const auto& [w, count] : spectrum.counts) {
        out += "  weight " + std::to_string(w) + ": " + count.get_str() + "\n";
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Generalized Reed-Muller weight spectra and density toolkit"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CommonOptions common;
    int order = 1, vars = 0, max_m = 1, factor_degree = -1, r_max = 1, m_max = 1;
    std::string alpha_text, poly_text, poly2_text, tmap_text = "c", target_text;
    std::string error_text, error_geom_text, minweight_mode = "formula";
    bool reduced = false;

    auto add_common = [&](CLI::App* cmd, bool with_cache = false) {
        cmd->add_option("-p,--prime", common.prime, "field prime (2, 3, 5 or 7)");
        cmd->add_option("--budget", common.budget, "enumeration/search budget");
        cmd->add_option("--workers", common.workers, "parallel worker partitions")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--format", common.format, "output format: json, csv or human")
            ->check(CLI::IsMember({"json", "csv", "human"}));
        cmd->add_option("--out", common.out_path, "write the document to PATH");
        if (with_cache) {
            cmd->add_option("--cache", common.cache_policy, "cache policy: use, refresh or off")
                ->check(CLI::IsMember({"use", "refresh", "off"}));
        }
    };

    CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "exact weight spectrum of RM_p(r,m)");
    add_common(spectrum_cmd, true);
    spectrum_cmd->add_option("-r,--order", order)->required();
    spectrum_cmd->add_option("-m,--vars", vars)->required();
    spectrum_cmd->add_flag("--reduced", reduced, "symmetry-reduced mode (weight set only)");

    CLI::App* weightset_cmd = app.add_subcommand("weightset", "relative weight set of RM_p(r,m)");
    add_common(weightset_cmd, true);
    weightset_cmd->add_option("-r,--order", order)->required();
    weightset_cmd->add_option("-m,--vars", vars)->required();
    weightset_cmd->add_flag("--reduced", reduced);

    CLI::App* gap_cmd = app.add_subcommand("gap", "empirical weight gap around alpha");
    add_common(gap_cmd, true);
    gap_cmd->add_option("--alpha", alpha_text, "exact rational target a/b")->required();
    gap_cmd->add_option("-r,--order", order)->required();
    gap_cmd->add_option("--max-m", max_m)->required();

    CLI::App* ax_cmd = app.add_subcommand("ax-check", "Ax divisibility validation of a spectrum");
    add_common(ax_cmd, true);
    ax_cmd->add_option("-r,--order", order)->required();
    ax_cmd->add_option("-m,--vars", vars)->required();

    CLI::App* minweight_cmd = app.add_subcommand("minweight", "minimum nonzero codeword weight");
    add_common(minweight_cmd, true);
    minweight_cmd->add_option("-r,--order", order)->required();
    minweight_cmd->add_option("-m,--vars", vars)->required();
    minweight_cmd->add_option("--mode", minweight_mode, "formula or enumerate")
        ->check(CLI::IsMember({"formula", "enumerate"}));

    CLI::App* rank_cmd = app.add_subcommand("rank", "minimal factor count of a decomposition");
    add_common(rank_cmd);
    rank_cmd->add_option("--poly", poly_text)->required();
    rank_cmd->add_option("-m,--vars", vars);
    rank_cmd->add_option("-d,--factor-degree", factor_degree,
                         "factor degree bound (default: degree of f minus 1)");

    CLI::App* regularize_cmd = app.add_subcommand("regularize", "refine f into a regular factor set");
    add_common(regularize_cmd);
    regularize_cmd->add_option("--poly", poly_text)->required();
    regularize_cmd->add_option("-m,--vars", vars);
    regularize_cmd->add_option("--tmap", tmap_text, "threshold map: N, c or c+N");

    CLI::App* compress_cmd = app.add_subcommand("compress", "compress f to a few-input function");
    add_common(compress_cmd);
    compress_cmd->add_option("--poly", poly_text)->required();
    compress_cmd->add_option("-m,--vars", vars);
    compress_cmd->add_option("--error", error_text, "constant error map E(c) = a/b");
    compress_cmd->add_option("--error-geom", error_geom_text, "geometric error map E(c) = (a/b)^c");

    CLI::App* approx_cmd = app.add_subcommand("approx", "best approximation of a distribution");
    add_common(approx_cmd);
    approx_cmd->add_option("--target", target_text, "p comma-separated exact masses")->required();
    approx_cmd->add_option("--r-max", r_max)->required();
    approx_cmd->add_option("--m-max", m_max)->required();

    CLI::App* bias_cmd = app.add_subcommand("bias-scan", "distance-to-uniform vs rank survey");
    add_common(bias_cmd);
    bias_cmd->add_option("-r,--order", order)->required();
    bias_cmd->add_option("-m,--vars", vars)->required();

    CLI::App* distance_cmd = app.add_subcommand("distance", "statistical distance of two outputs");
    add_common(distance_cmd);
    distance_cmd->add_option("--poly", poly_text)->required();
    distance_cmd->add_option("--poly2", poly2_text, "second polynomial (default: uniform)");
    distance_cmd->add_option("-m,--vars", vars);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto csv_unsupported = [&]() -> int {
        std::cerr << "csv is offered only for tabular outputs (spectrum, weightset, bias-scan)\n";
        return 2;
    };

    try {
        EnumerationBudget ebudget = enumeration_budget(common);
        SearchBudget sbudget = search_budget(common);
        SpectrumCache cache(SpectrumCache::policy_from_str(common.cache_policy));

        if (*spectrum_cmd || *weightset_cmd || *ax_cmd) {
            CodeParams params{FieldParams(common.prime), order, vars};
            WeightSpectrum spectrum =
                reduced ? enumerate_spectrum(params, ebudget, common.workers,
                                             EnumerationMode::symmetry_reduced)
                        : cache.get_or_compute(params, ebudget, common.workers);
            if (*spectrum_cmd) {
                if (common.format == "csv") {
                    emit(common, spectrum_csv(spectrum));
                } else if (common.format == "human") {
                    emit(common, human_spectrum(spectrum));
                } else {
                    emit(common, spectrum_payload_json(spectrum));
                }
            } else if (*weightset_cmd) {
                if (common.format == "csv") {
                    emit(common, weight_set_csv(spectrum));
                } else {
                    emit(common, weight_set_json(spectrum));
                }
            } else {
                if (common.format == "csv") return csv_unsupported();
                emit(common, ax_check_json(params, ax_check(spectrum)));
            }
            return 0;
        }
        if (common.format == "csv" && !*bias_cmd) return csv_unsupported();

        if (*gap_cmd) {
            TargetValue alpha = TargetValue::parse(alpha_text);
            GapReport report = gap_scan(alpha, FieldParams(common.prime), order, max_m, ebudget,
                                        common.workers, cache.provider(ebudget, common.workers));
            emit(common, gap_report_json(report));
            return 0;
        }
        if (*minweight_cmd) {
            CodeParams params{FieldParams(common.prime), order, vars};
            MinWeightMode mode;
            if (minweight_mode == "formula") {
                mode = MinWeightMode::formula;
            } else if (minweight_mode == "enumerate") {
                mode = MinWeightMode::enumerate_code;
            } else {
                std::cerr << "--mode must be formula or enumerate\n";
                return 2;
            }
            BigInt value =
                min_weight(params, mode, ebudget, cache.provider(ebudget, common.workers));
            emit(common, min_weight_json(params, minweight_mode, value));
            return 0;
        }
        if (*rank_cmd) {
            Polynomial f = parse_poly_arg(poly_text, common.prime, vars);
            int d = factor_degree;
            if (d < 0) {
                TotalDegree deg = f.total_degree();
                if (deg.is_zero_polynomial() || deg.value() < 1) {
                    throw std::invalid_argument("rank requires a nonconstant polynomial");
                }
                d = deg.value() - 1;
            }
            emit(common, rank_json(rank(f, d, sbudget)));
            return 0;
        }
        if (*regularize_cmd) {
            Polynomial f = parse_poly_arg(poly_text, common.prime, vars);
            emit(common, regularize_json(regularize(f, parse_threshold_map(tmap_text), sbudget)));
            return 0;
        }
        if (*compress_cmd) {
            Polynomial f = parse_poly_arg(poly_text, common.prime, vars);
            std::function<Rational(int)> error_map;
            if (!error_text.empty()) {
                Rational e = parse_rational(error_text);
                error_map = [e](int) { return e; };
            } else if (!error_geom_text.empty()) {
                Rational base = parse_rational(error_geom_text);
                error_map = [base](int c) {
                    Rational e(1);
                    for (int i = 0; i < c; ++i) e *= base;
                    return e;
                };
            } else {
                std::cerr << "compress needs --error or --error-geom\n";
                return 2;
            }
            emit(common, compress_json(compress(f, error_map, sbudget)));
            return 0;
        }
        if (*approx_cmd) {
            Distribution target = parse_target_arg(target_text, common.prime);
            emit(common, approximation_json(best_approximation(target, r_max, m_max, ebudget)));
            return 0;
        }
        if (*bias_cmd) {
            BiasRankScan scan = bias_rank_scan(FieldParams(common.prime), order, vars, sbudget);
            emit(common, common.format == "csv" ? bias_scan_csv(scan) : bias_scan_json(scan));
            return 0;
        }
        if (*distance_cmd) {
            Polynomial f = parse_poly_arg(poly_text, common.prime, vars);
            std::vector<Polynomial> first{f};
            Distribution d1 = distribution_of(first, ebudget.max_table_bytes);
            Distribution d2 = uniform_distribution(f.field(), 1);
            if (!poly2_text.empty()) {
                Polynomial g = parse_poly_arg(poly2_text, common.prime,
                                              vars > 0 ? vars : f.vars());
                std::vector<Polynomial> second{g};
                d2 = distribution_of(second, ebudget.max_table_bytes);
            }
            emit(common, distance_json(d1, d2, statistical_distance(d1, d2)));
            return 0;
        }
        return 2;
    } catch (const BudgetError& e) {
        nlohmann::json err{{"error", {{"type", "budget"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        std::cerr << "budget error: " << e.what() << "\n";
        return 1;
    } catch (const CacheError& e) {
        nlohmann::json err{{"error", {{"type", "cache"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        std::cerr << "cache error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        nlohmann::json err{{"error", {{"type", "parse"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", {{"type", "domain"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
