// Command-line front end: builds E-optimal (Tchebycheff) designs for
// weighted polynomial regression and emits machine-readable reports.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eopt/eopt.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitPipeline = 3;

const char* kWeightGrammar =
    "Weight expressions accept real literals, the variable x, the operators\n"
    "+ - * / ^ (with ^ right associative), unary minus, exp(...), and\n"
    "parentheses. Examples: \"1\", \"1-x\", \"(1-x)^0.5*(2+x)^0.5\", \"exp(x)\".";

void add_common_flags(CLI::App* cmd, eopt::ReportRequest& req, std::vector<double>& interval) {
    cmd->add_option("--weight", req.weight_text, "weight function w(x)")->required();
    cmd->add_option("--interval", interval, "design interval a b")->expected(2);
    cmd->add_option("--nodes", req.nodes, "quadrature node count");
    cmd->add_option("--grid", req.grid, "extremum scan grid size");
}

void apply_interval(eopt::ReportRequest& req, const std::vector<double>& interval) {
    if (interval.size() == 2) {
        req.a = interval[0];
        req.b = interval[1];
    }
}

int run(int argc, char** argv) {
    CLI::App app{std::string("Tchebycheff designs for weighted polynomial regression.\n\n") +
                 kWeightGrammar};
    app.require_subcommand(1);

    eopt::ReportRequest req;
    std::vector<double> interval;
    std::string format = "json";
    std::vector<int> m_list;
    int samples = 2001;

    CLI::App* design = app.add_subcommand("design", "compute one design");
    add_common_flags(design, req, interval);
    design->add_option("--m", req.m, "number of model parameters")->required();
    design->add_option("--method", req.method, "construction method: approx | jacobi")
        ->check(CLI::IsMember({"approx", "jacobi"}));
    design->add_option("--format", format, "output format: json | csv | table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    design->add_flag("--with-efficiency", req.with_efficiency,
                     "also compute a reference design and the efficiency gap");
    design->add_option("--budget", req.budget, "reference search iteration budget");
    design->add_option("--seed", req.seed, "reference search seed");
    design->add_option("--workers", req.workers, "threads for the reference search shards");

    CLI::App* table = app.add_subcommand("table", "compute designs for several m");
    add_common_flags(table, req, interval);
    table->add_option("--m-list", m_list, "model sizes to run")->required()->expected(-1);
    table->add_option("--method", req.method, "construction method: approx | jacobi")
        ->check(CLI::IsMember({"approx", "jacobi"}));
    table->add_option("--format", format, "output format: json | table")
        ->check(CLI::IsMember({"json", "table"}));
    table->add_flag("--with-efficiency", req.with_efficiency,
                    "also compute reference designs and efficiency gaps");
    table->add_option("--budget", req.budget, "reference search iteration budget");
    table->add_option("--seed", req.seed, "reference search seed");
    table->add_option("--workers", req.workers, "threads for the reference search shards");

    CLI::App* plotdata = app.add_subcommand("plotdata", "sample kappa(x) as CSV");
    add_common_flags(plotdata, req, interval);
    plotdata->add_option("--m", req.m, "number of model parameters")->required();
    plotdata->add_option("--method", req.method, "construction method: approx | jacobi")
        ->check(CLI::IsMember({"approx", "jacobi"}));
    plotdata->add_option("--samples", samples, "number of uniform samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    apply_interval(req, interval);

    try {
        if (design->parsed()) {
            const eopt::DesignReport rep = eopt::build_design_report(req);
            if (format == "csv")
                std::cout << eopt::to_csv(rep);
            else if (format == "table")
                std::cout << eopt::to_table(rep);
            else
                std::cout << eopt::to_json(rep).dump(2) << "\n";
        } else if (table->parsed()) {
            std::vector<eopt::DesignReport> reports;
            reports.reserve(m_list.size());
            for (int m : m_list) {
                req.m = m;
                try {
                    reports.push_back(eopt::build_design_report(req));
                } catch (const std::exception& e) {
                    std::cerr << "error at m = " << m << ": " << e.what() << "\n";
                    throw;
                }
            }
            if (format == "table") {
                for (const eopt::DesignReport& rep : reports) std::cout << eopt::to_table(rep) << "\n";
            } else {
                nlohmann::ordered_json rows = nlohmann::ordered_json::array();
                for (const eopt::DesignReport& rep : reports) rows.push_back(eopt::to_json(rep));
                std::cout << rows.dump(2) << "\n";
            }
        } else if (plotdata->parsed()) {
            std::cout << eopt::plotdata_csv(req, samples);
        }
    } catch (const eopt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPipeline;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
