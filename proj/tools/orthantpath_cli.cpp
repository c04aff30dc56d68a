#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "orthantpath/csv.hpp"
#include "orthantpath/dataset.hpp"
#include "orthantpath/enet.hpp"
#include "orthantpath/errors.hpp"
#include "orthantpath/lasso.hpp"
#include "orthantpath/oracle.hpp"

namespace {

namespace op = orthantpath;

struct FitRequest {
    std::string method = "lasso";
    std::string input_path;
    std::string response_column;
    bool center = true;
    double scale = 1.0;
    std::optional<double> gamma;
    std::optional<double> alpha;
    double tol = 1e-8;
    std::string solver = "bisection";
    int trajectory_samples = 0;
    std::string output_path;  // empty = standard output
};

struct OracleRequest {
    std::string method = "lasso";
    std::string input_path;
    std::string response_column;
    bool center = true;
    double scale = 1.0;
    std::optional<double> gamma;
    std::optional<double> alpha;
    double tol = 1e-8;
    std::string solver = "bisection";
    std::string grid_range;  // start:stop:step
    std::string grid_list;   // v1,v2,...
    std::string output_path;
    std::string moves_path;
    int max_p = static_cast<int>(op::kOracleDefaultCap);
};

void check_method_params(const std::string& method, const std::optional<double>& gamma,
                         const std::optional<double>& alpha) {
    if (method == "adaptive" && !gamma) {
        throw std::invalid_argument("--method adaptive requires --gamma");
    }
    if (method != "adaptive" && gamma) {
        throw std::invalid_argument("--gamma is only valid with --method adaptive");
    }
    if (method == "enet" && !alpha) {
        throw std::invalid_argument("--method enet requires --alpha");
    }
    if (method != "enet" && alpha) {
        throw std::invalid_argument("--alpha is only valid with --method enet");
    }
}

op::RootSolver parse_solver(const std::string& solver) {
    return solver == "secant" ? op::RootSolver::Secant : op::RootSolver::Bisection;
}

op::PrepareResult load_and_prepare(const std::string& input, const std::string& response,
                                   bool center, double scale) {
    const op::RawData raw = op::load_csv(input, response);
    op::PrepareResult pr = op::prepare(raw.x, raw.y, center, scale);
    if (center && pr.shifted) {
        std::cerr << "note: input was centered (column means subtracted)\n";
    }
    return pr;
}

void write_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw op::Error("cannot write " + path);
    fn(out);
    out.flush();
    if (!out) throw op::Error("failed writing " + path);
}

std::string trajectory_path(const std::string& output) {
    const std::string suffix = ".csv";
    if (output.size() > suffix.size() &&
        output.compare(output.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return output.substr(0, output.size() - suffix.size()) + "_trajectory.csv";
    }
    return output + "_trajectory.csv";
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

double parse_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": '" + s + "' is not a number");
    }
    if (used != s.size()) {
        throw std::invalid_argument(what + ": '" + s + "' is not a number");
    }
    return v;
}

// Grid values at or insignificantly above lambda_max land exactly on it, so
// ranges like 0:14:0.5 include the terminal breakpoint.
double clamp_to_lambda_max(double v, double lambda_max) {
    if (v > lambda_max && v <= lambda_max + 1e-12 * (1.0 + lambda_max)) return lambda_max;
    return v;
}

std::vector<double> build_grid(const std::string& range, const std::string& list,
                               double lambda_max) {
    if (!range.empty() && !list.empty()) {
        throw std::invalid_argument("--grid and --grid-list are mutually exclusive");
    }
    std::vector<double> values;
    if (!range.empty()) {
        const std::vector<std::string> parts = split_on(range, ':');
        if (parts.size() != 3) {
            throw std::invalid_argument("--grid expects start:stop:step");
        }
        const double start = parse_number(parts[0], "--grid start");
        const double stop = parse_number(parts[1], "--grid stop");
        const double step = parse_number(parts[2], "--grid step");
        if (!(step > 0.0)) throw std::invalid_argument("--grid step must be positive");
        if (stop < start) throw std::invalid_argument("--grid stop must be at least start");
        const double slack = 1e-9 * std::max(1.0, std::abs(stop));
        for (int k = 0;; ++k) {
            const double v = start + k * step;
            if (v > stop + slack) break;
            values.push_back(clamp_to_lambda_max(v, lambda_max));
        }
    } else {
        for (const std::string& part : split_on(list, ',')) {
            values.push_back(clamp_to_lambda_max(parse_number(part, "--grid-list value"),
                                                 lambda_max));
        }
    }
    return values;
}

int run_fit(const FitRequest& req) {
    check_method_params(req.method, req.gamma, req.alpha);
    if (req.trajectory_samples > 0 && req.output_path.empty()) {
        throw std::invalid_argument("--trajectory requires --output");
    }
    const op::PrepareResult pr =
        load_and_prepare(req.input_path, req.response_column, req.center, req.scale);
    const op::Dataset& data = pr.data;
    const op::GramMask gm = op::GramMask::from(data);

    op::PenaltyWeights w = op::PenaltyWeights::ones(data.p());
    op::EnetConfig cfg;
    op::RegPath path;
    if (req.method == "lasso") {
        path = op::lasso_path(data, w);
    } else if (req.method == "adaptive") {
        w = op::adaptive_weights(data, *req.gamma);
        path = op::lasso_path(data, w);
    } else {
        cfg = op::EnetConfig(*req.alpha, req.tol, parse_solver(req.solver));
        path = op::enet_path(data, cfg);
    }

    write_output(req.output_path, [&](std::ostream& out) { op::write_breakpoints(out, path); });
    if (req.trajectory_samples > 0) {
        write_output(trajectory_path(req.output_path), [&](std::ostream& out) {
            op::write_trajectory(out, path, gm, w, cfg, req.trajectory_samples);
        });
    }
    return 0;
}

int run_oracle(const OracleRequest& req) {
    check_method_params(req.method, req.gamma, req.alpha);
    if (req.grid_range.empty() && req.grid_list.empty() && req.moves_path.empty()) {
        throw std::invalid_argument("oracle needs --grid, --grid-list, or --moves");
    }
    if (req.max_p < 1) throw std::invalid_argument("--max-p must be at least 1");
    const op::PrepareResult pr =
        load_and_prepare(req.input_path, req.response_column, req.center, req.scale);
    const op::Dataset& data = pr.data;
    const op::GramMask gm = op::GramMask::from(data);
    const Eigen::Index cap = req.max_p;

    op::OracleMode mode;
    double lambda_max = 0.0;
    if (req.method == "enet") {
        mode = op::OracleMode::enet(op::EnetConfig(*req.alpha, req.tol, parse_solver(req.solver)));
        lambda_max = op::lambda_max_enet(gm, *req.alpha);
    } else {
        op::PenaltyWeights w = req.method == "adaptive"
                                   ? op::adaptive_weights(data, *req.gamma)
                                   : op::PenaltyWeights::ones(data.p());
        lambda_max = op::lambda_max_lasso(gm, w);
        mode = op::OracleMode::lasso(std::move(w));
    }

    if (!req.grid_range.empty() || !req.grid_list.empty()) {
        const op::LambdaGrid grid(build_grid(req.grid_range, req.grid_list, lambda_max),
                                  lambda_max);
        const std::vector<op::OrthantFit> fits = op::all_orthant_path(data, grid, mode, cap);
        write_output(req.output_path, [&](std::ostream& out) { op::write_oracle_fits(out, fits); });
    }
    if (!req.moves_path.empty()) {
        const std::vector<op::OrthantMove> moves = op::enumerate_valid_moves(data, mode, cap);
        write_output(req.moves_path, [&](std::ostream& out) { op::write_moves(out, moves); });
    }
    return 0;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const op::InvalidAlpha& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const op::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const op::MissingColumn& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const op::RankDeficient& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const op::DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const op::DimensionCap& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const op::ZeroOlsCoefficient& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const op::SingularSubmatrix& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const op::NoValidCandidate& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const op::ConvergenceFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const op::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact lasso, adaptive-lasso, and elastic-net regularization paths "
                 "via orthant decomposition"};
    app.require_subcommand(1);

    FitRequest fit_req;
    CLI::App* fit = app.add_subcommand("fit", "Trace the full regularization path");
    fit->add_option("--method", fit_req.method, "lasso, adaptive, or enet")
        ->required()
        ->check(CLI::IsMember({"lasso", "adaptive", "enet"}));
    fit->add_option("--input", fit_req.input_path, "input CSV (header required)")->required();
    fit->add_option("--response", fit_req.response_column,
                    "response column name or 0-based index (default: last column)");
    fit->add_flag("--no-center", [&fit_req](std::int64_t) { fit_req.center = false; },
                  "skip centering of X columns and Y");
    fit->add_option("--scale", fit_req.scale, "divide X and Y entries by this constant");
    fit->add_option("--gamma", [&fit_req](const std::vector<std::string>& v) {
                        fit_req.gamma = parse_number(v.front(), "--gamma");
                        return true;
                    },
                    "adaptive-weight exponent (adaptive method only)")
        ->type_name("FLOAT")
        ->expected(1);
    fit->add_option("--alpha", [&fit_req](const std::vector<std::string>& v) {
                        fit_req.alpha = parse_number(v.front(), "--alpha");
                        return true;
                    },
                    "elastic-net mixing in (0, 1] (enet method only)")
        ->type_name("FLOAT")
        ->expected(1);
    fit->add_option("--tol", fit_req.tol, "breakpoint root tolerance (enet)");
    fit->add_option("--solver", fit_req.solver, "breakpoint root solver (enet)")
        ->check(CLI::IsMember({"bisection", "secant"}));
    fit->add_option("--trajectory", fit_req.trajectory_samples,
                    "samples per segment for a long-format trajectory CSV (0 = off)");
    fit->add_option("--output", fit_req.output_path,
                    "breakpoint CSV path (default: standard output)");

    OracleRequest oracle_req;
    CLI::App* oracle =
        app.add_subcommand("oracle", "Exhaustive all-orthant minimizer on a lambda grid");
    oracle->add_option("--method", oracle_req.method, "lasso, adaptive, or enet")
        ->required()
        ->check(CLI::IsMember({"lasso", "adaptive", "enet"}));
    oracle->add_option("--input", oracle_req.input_path, "input CSV (header required)")
        ->required();
    oracle->add_option("--response", oracle_req.response_column,
                       "response column name or 0-based index (default: last column)");
    oracle->add_flag("--no-center", [&oracle_req](std::int64_t) { oracle_req.center = false; },
                     "skip centering of X columns and Y");
    oracle->add_option("--scale", oracle_req.scale, "divide X and Y entries by this constant");
    oracle->add_option("--gamma", [&oracle_req](const std::vector<std::string>& v) {
                           oracle_req.gamma = parse_number(v.front(), "--gamma");
                           return true;
                       },
                       "adaptive-weight exponent (adaptive method only)")
        ->type_name("FLOAT")
        ->expected(1);
    oracle->add_option("--alpha", [&oracle_req](const std::vector<std::string>& v) {
                           oracle_req.alpha = parse_number(v.front(), "--alpha");
                           return true;
                       },
                       "elastic-net mixing in (0, 1] (enet method only)")
        ->type_name("FLOAT")
        ->expected(1);
    oracle->add_option("--tol", oracle_req.tol, "breakpoint root tolerance (enet)");
    oracle->add_option("--solver", oracle_req.solver, "breakpoint root solver (enet)")
        ->check(CLI::IsMember({"bisection", "secant"}));
    oracle->add_option("--grid", oracle_req.grid_range, "lambda grid as start:stop:step");
    oracle->add_option("--grid-list", oracle_req.grid_list,
                       "lambda grid as comma-separated values");
    oracle->add_option("--output", oracle_req.output_path,
                       "oracle CSV path (default: standard output)");
    oracle->add_option("--moves", oracle_req.moves_path,
                       "also write every valid orthant move to this CSV");
    oracle->add_option("--max-p", oracle_req.max_p,
                       "override the column-count cap on the 3^p search");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (fit->parsed()) return run_guarded([&] { return run_fit(fit_req); });
    return run_guarded([&] { return run_oracle(oracle_req); });
}
