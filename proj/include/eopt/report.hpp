#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eopt/design.hpp"
#include "eopt/tcheb.hpp"
#include "eopt/weight.hpp"

namespace eopt {

struct ReportRequest {
    std::string weight_text;
    int m = 3;
    double a = -1.0;
    double b = 1.0;
    std::string method = "approx";  // "approx" | "jacobi"
    int nodes = InnerProductSpec::kDefaultNodeCount;
    int grid = 20001;
    bool with_efficiency = false;
    long budget = 200000;
    std::uint64_t seed = 1;
    int workers = 4;
};

struct ReferenceInfo {
    std::string method;  // "jacobi" | "random_search"
    double lambda_min = 0.0;
    double one_minus_efficiency = 0.0;
};

struct DesignReport {
    ReportRequest request;
    Design design;
    double lambda_min = 0.0;
    CriteriaValues criteria;
    double mass_sum_raw = 0.0;
    double equioscillation_gap = 0.0;
    double quadrature_delta = 0.0;
    std::optional<ReferenceInfo> reference;
    TchebPoints points;  // alternation points of the constructed kappa
    TchebFunction function;
};

inline constexpr int kMaxModelSize = 16;

inline void validate_request(const ReportRequest& req) {
    if (req.m < 2 || req.m > kMaxModelSize)
        throw std::domain_error("m must be between 2 and " + std::to_string(kMaxModelSize));
    if (!(req.a < req.b)) throw std::domain_error("interval must satisfy a < b");
    if (req.method != "approx" && req.method != "jacobi")
        throw std::domain_error("method must be 'approx' or 'jacobi'");
    if (req.nodes < 1) throw std::domain_error("nodes must be >= 1");
    if (req.grid < 3) throw std::domain_error("grid must be >= 3");
    if (req.budget < 1) throw std::domain_error("budget must be >= 1");
}

inline TchebFunction build_tcheb_function(const ReportRequest& req, const WeightFn& w) {
    if (req.method == "jacobi") {
        const auto exponents = jacobi_weight_exponents(w);
        if (!exponents)
            throw std::domain_error(
                "method 'jacobi' requires a weight of the form (1-x)^a(1+x)^b with a,b in {0,1}");
        if (req.a != -1.0 || req.b != 1.0)
            throw std::domain_error("method 'jacobi' is defined on the interval [-1, 1]");
        return exact_tcheb_function(req.m, exponents->first, exponents->second, req.grid);
    }
    TchebOptions opt;
    opt.node_count = req.nodes;
    opt.grid = req.grid;
    return approx_tcheb_function(req.m, w, req.a, req.b, opt);
}

inline DesignReport build_design_report(const ReportRequest& req) {
    validate_request(req);
    const WeightFn w = WeightFn::parse(req.weight_text);

    DesignReport rep;
    rep.request = req;
    rep.function = build_tcheb_function(req, w);
    rep.points = find_tcheb_points(rep.function, req.m, req.grid);

    double lo = 1e300, hi = 0.0;
    for (double v : rep.points.values) {
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
    }
    rep.equioscillation_gap = hi - lo;
    rep.quadrature_delta = rep.function.quadrature_delta;

    TchebDesignResult dr = tcheb_design(rep.function, rep.points);
    rep.design = std::move(dr.design);
    rep.mass_sum_raw = dr.mass_sum_raw;
    rep.criteria = criteria(rep.design, req.m, &w);
    rep.lambda_min = rep.criteria.e_value;

    if (req.with_efficiency) {
        ReferenceInfo ref;
        Design ref_design;
        const auto exponents = jacobi_weight_exponents(w);
        if (exponents && req.a == -1.0 && req.b == 1.0) {
            const TchebFunction exact =
                exact_tcheb_function(req.m, exponents->first, exponents->second, req.grid);
            ref_design = tcheb_design(exact, find_tcheb_points(exact, req.m, req.grid)).design;
            ref.method = "jacobi";
        } else {
            ref_design = random_search_baseline(req.m, w, req.a, req.b, req.budget, req.seed,
                                                req.workers);
            ref.method = "random_search";
        }
        ref.lambda_min = min_eigenvalue(fisher_matrix(ref_design, req.m, &w));
        ref.one_minus_efficiency = 1.0 - e_efficiency(rep.design, ref_design, req.m, &w);
        rep.reference = ref;
    }
    return rep;
}

inline nlohmann::ordered_json to_json(const DesignReport& rep) {
    nlohmann::ordered_json j;
    j["request"] = {{"weight", rep.request.weight_text},
                    {"m", rep.request.m},
                    {"interval", {rep.request.a, rep.request.b}},
                    {"method", rep.request.method}};
    j["design"] = {{"support", rep.design.support}, {"masses", rep.design.masses}};
    j["lambda_min"] = rep.lambda_min;
    j["criteria"] = {{"e", rep.criteria.e_value},
                     {"d", rep.criteria.d_value},
                     {"a", rep.criteria.a_value ? nlohmann::ordered_json(*rep.criteria.a_value)
                                                : nlohmann::ordered_json(nullptr)}};
    j["diagnostics"] = {{"mass_sum_raw", rep.mass_sum_raw},
                        {"equioscillation_gap", rep.equioscillation_gap},
                        {"quadrature_delta", rep.quadrature_delta}};
    if (rep.reference) {
        j["reference"] = {{"method", rep.reference->method},
                          {"lambda_min", rep.reference->lambda_min},
                          {"one_minus_efficiency", rep.reference->one_minus_efficiency}};
    } else {
        j["reference"] = nullptr;
    }
    return j;
}

namespace detail {

inline std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string sig4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace detail

inline std::string to_csv(const DesignReport& rep) {
    std::string out = "x,rho\n";
    for (std::size_t i = 0; i < rep.design.support.size(); ++i)
        out += detail::full(rep.design.support[i]) + "," + detail::full(rep.design.masses[i]) + "\n";
    out += "# lambda_min," + detail::full(rep.lambda_min) + "\n";
    out += "# mass_sum_raw," + detail::full(rep.mass_sum_raw) + "\n";
    out += "# equioscillation_gap," + detail::full(rep.equioscillation_gap) + "\n";
    out += "# quadrature_delta," + detail::full(rep.quadrature_delta) + "\n";
    if (rep.reference)
        out += "# one_minus_efficiency," + detail::full(rep.reference->one_minus_efficiency) + "\n";
    return out;
}

/// Display form with the 4-significant-digit rounding used in printed tables.
inline std::string to_table(const DesignReport& rep) {
    std::string out = "w(x) = " + rep.request.weight_text + ", m = " + std::to_string(rep.request.m) +
                      ", method = " + rep.request.method + "\n";
    for (std::size_t i = 0; i < rep.design.support.size(); ++i)
        out += "  x_" + std::to_string(i + 1) + " = " + detail::sig4(rep.design.support[i]) +
               ", rho_" + std::to_string(i + 1) + " = " + detail::sig4(rep.design.masses[i]) + "\n";
    out += "  lambda_min = " + detail::sig4(rep.lambda_min) + "\n";
    if (rep.reference)
        out += "  1 - eff = " + detail::sig4(rep.reference->one_minus_efficiency) + " (reference: " +
               rep.reference->method + ")\n";
    return out;
}

/// CSV samples of kappa over the interval (uniform, endpoints included)
/// followed by a comment block listing the alternation points.
inline std::string plotdata_csv(const ReportRequest& req, int samples) {
    validate_request(req);
    if (samples < 2) throw std::domain_error("samples must be >= 2");
    const WeightFn w = WeightFn::parse(req.weight_text);
    const TchebFunction tf = build_tcheb_function(req, w);
    const TchebPoints pts = find_tcheb_points(tf, req.m, req.grid);

    std::string out = "x,kappa\n";
    for (int i = 0; i < samples; ++i) {
        const double x = req.a + (req.b - req.a) * static_cast<double>(i) / (samples - 1);
        out += detail::full(x) + "," + detail::full(tf.kappa(x)) + "\n";
    }
    out += "# tcheb_points\n# s,kappa\n";
    for (int i = 0; i < pts.m(); ++i)
        out += "# " + detail::full(pts.points[static_cast<std::size_t>(i)]) + "," +
               detail::full(pts.values[static_cast<std::size_t>(i)]) + "\n";
    return out;
}

}  // namespace eopt
