#include "orthantpath/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orthantpath/errors.hpp"

namespace orthantpath {

namespace {

std::string trim(const std::string& s) {
    const std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

ParseError cell_error(const std::string& name, std::size_t line, std::size_t col,
                      const std::string& detail) {
    return ParseError(line, col,
                      name + " line " + std::to_string(line) + " column " +
                          std::to_string(col) + ": " + detail);
}

double parse_cell(const std::string& raw, const std::string& name, std::size_t line,
                  std::size_t col) {
    const std::string cell = trim(raw);
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (first != last && *first == '+') ++first;
    double v = 0.0;
    const std::from_chars_result res = std::from_chars(first, last, v);
    if (cell.empty() || res.ec != std::errc() || res.ptr != last) {
        throw cell_error(name, line, col, "'" + raw + "' is not a number");
    }
    if (!std::isfinite(v)) {
        throw cell_error(name, line, col, "'" + raw + "' is not finite");
    }
    return v;
}

}  // namespace

RawTable read_csv(std::istream& in, const std::string& name) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) {
        throw ParseError(1, 1, name + " line 1 column 1: missing header row");
    }

    RawTable table;
    const std::vector<std::string> header = split_line(lines.front());
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string h = trim(header[c]);
        if (h.empty()) throw cell_error(name, 1, c + 1, "empty column name");
        table.columns.push_back(h);
    }

    const std::size_t ncol = table.columns.size();
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const std::size_t lineno = r + 1;
        if (lines[r].empty()) throw cell_error(name, lineno, 1, "empty line");
        const std::vector<std::string> cells = split_line(lines[r]);
        if (cells.size() != ncol) {
            throw cell_error(name, lineno, std::min(cells.size(), ncol) + 1,
                             "expected " + std::to_string(ncol) + " columns, found " +
                                 std::to_string(cells.size()));
        }
        std::vector<double> row(ncol);
        for (std::size_t c = 0; c < ncol; ++c) {
            row[c] = parse_cell(cells[c], name, lineno, c + 1);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(lines.size(), 1, name + ": no data rows");
    }

    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncol));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < ncol; ++c) {
            table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return table;
}

RawTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_csv(in, path);
}

RawData split_response(const RawTable& table, const std::string& response_column) {
    const std::size_t ncol = table.columns.size();
    if (ncol < 2) {
        throw DimensionMismatch("CSV needs a response and at least one predictor column");
    }
    std::size_t yidx = ncol - 1;
    if (!response_column.empty()) {
        bool found = false;
        for (std::size_t c = 0; c < ncol; ++c) {
            if (table.columns[c] == response_column) {
                yidx = c;
                found = true;
                break;
            }
        }
        if (!found) {
            unsigned long idx = 0;
            const char* first = response_column.data();
            const char* last = response_column.data() + response_column.size();
            const std::from_chars_result res = std::from_chars(first, last, idx);
            if (res.ec != std::errc() || res.ptr != last) {
                throw MissingColumn("no column named '" + response_column + "'");
            }
            if (idx >= ncol) {
                throw MissingColumn("response column index " + response_column +
                                    " is out of range for " + std::to_string(ncol) + " columns");
            }
            yidx = idx;
        }
    }

    RawData raw;
    const Eigen::Index n = table.values.rows();
    raw.x.resize(n, static_cast<Eigen::Index>(ncol - 1));
    raw.y = table.values.col(static_cast<Eigen::Index>(yidx));
    raw.y_name = table.columns[yidx];
    Eigen::Index out = 0;
    for (std::size_t c = 0; c < ncol; ++c) {
        if (c == yidx) continue;
        raw.x.col(out++) = table.values.col(static_cast<Eigen::Index>(c));
        raw.x_names.push_back(table.columns[c]);
    }
    return raw;
}

RawData load_csv(const std::string& path, const std::string& response_column) {
    return split_response(read_csv_file(path), response_column);
}

PrepareResult prepare(const Eigen::MatrixXd& raw_x, const Eigen::VectorXd& raw_y, bool center,
                      double scale) {
    if (!std::isfinite(scale) || !(scale > 0.0)) {
        throw std::invalid_argument("scale must be positive");
    }
    if (raw_x.rows() < 1 || raw_x.cols() < 1) {
        throw DimensionMismatch("dataset needs at least one row and one column");
    }
    if (raw_x.rows() != raw_y.size()) {
        throw DimensionMismatch("X row count and Y length differ");
    }
    Eigen::MatrixXd x = raw_x;
    Eigen::VectorXd y = raw_y;
    bool shifted = false;
    if (center) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            const double colmax = x.col(j).cwiseAbs().maxCoeff();
            const double mean = x.col(j).mean();
            if (std::abs(mean) > 1e-12 * std::max(1.0, colmax)) shifted = true;
            x.col(j).array() -= mean;
        }
        const double ymean = y.mean();
        if (std::abs(ymean) > 1e-12 * std::max(1.0, y.cwiseAbs().maxCoeff())) shifted = true;
        y.array() -= ymean;
    }
    if (scale != 1.0) {
        x /= scale;
        y /= scale;
    }
    return {Dataset(std::move(x), std::move(y), center, scale), shifted};
}

std::string format_double(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_breakpoints(std::ostream& out, const RegPath& path) {
    if (path.breakpoints.empty()) throw std::invalid_argument("path has no breakpoints");
    const Eigen::Index p = path.breakpoints.front().beta.size();
    out << "lambda";
    for (Eigen::Index j = 0; j < p; ++j) out << ",beta_" << (j + 1);
    out << ",criterion\n";
    for (const PathBreakpoint& bp : path.breakpoints) {
        out << format_double(bp.lambda);
        for (Eigen::Index j = 0; j < p; ++j) out << ',' << format_double(bp.beta[j]);
        out << ',' << format_double(bp.criterion) << '\n';
    }
}

void write_trajectory(std::ostream& out, const RegPath& path, const GramMask& gm,
                      const PenaltyWeights& w, const EnetConfig& cfg, int samples_per_segment) {
    if (samples_per_segment < 2) {
        throw std::invalid_argument("trajectory needs at least two samples per segment");
    }
    if (path.breakpoints.empty()) throw std::invalid_argument("path has no breakpoints");
    out << "lambda,coef_index,value,orthant\n";
    const bool enet = path.method == Method::ElasticNet;
    EnetConfig ecfg = cfg;
    if (enet && ecfg.alpha != path.alpha) {
        ecfg = EnetConfig(path.alpha, cfg.tol, cfg.solver, cfg.max_iters);
    }
    for (std::size_t k = 1; k < path.breakpoints.size(); ++k) {
        const PathBreakpoint& lo = path.breakpoints[k - 1];
        const PathBreakpoint& hi = path.breakpoints[k];
        const OrthantSign& seg = hi.segment_orthant;
        const std::string seg_str = seg.str();
        for (int s = 0; s < samples_per_segment; ++s) {
            const double t = static_cast<double>(s) / (samples_per_segment - 1);
            const double lambda = lo.lambda + t * (hi.lambda - lo.lambda);
            const Eigen::VectorXd beta = enet ? beta_hat_enet(seg, lambda, gm, ecfg)
                                              : beta_hat_lasso(seg, lambda, gm, w);
            for (Eigen::Index j = 0; j < beta.size(); ++j) {
                out << format_double(lambda) << ',' << (j + 1) << ',' << format_double(beta[j])
                    << ',' << seg_str << '\n';
            }
        }
    }
}

void write_oracle_fits(std::ostream& out, const std::vector<OrthantFit>& fits) {
    if (fits.empty()) throw std::invalid_argument("no fits to write");
    const Eigen::Index p = fits.front().beta.size();
    out << "lambda,orthant";
    for (Eigen::Index j = 0; j < p; ++j) out << ",beta_" << (j + 1);
    out << ",criterion\n";
    for (const OrthantFit& fit : fits) {
        out << format_double(fit.lambda) << ',' << fit.orthant.str();
        for (Eigen::Index j = 0; j < p; ++j) out << ',' << format_double(fit.beta[j]);
        out << ',' << format_double(fit.criterion) << '\n';
    }
}

void write_moves(std::ostream& out, const std::vector<OrthantMove>& moves) {
    out << "lambda,coef_index,from,to\n";
    for (const OrthantMove& mv : moves) {
        out << format_double(mv.lambda) << ',' << (mv.coordinate + 1) << ',' << mv.from.str()
            << ',' << mv.to.str() << '\n';
    }
}

std::vector<PathBreakpoint> read_breakpoints(std::istream& in) {
    const RawTable table = read_csv(in, "<breakpoints>");
    const std::size_t ncol = table.columns.size();
    if (ncol < 3 || table.columns.front() != "lambda" || table.columns.back() != "criterion") {
        throw ParseError(1, 1, "breakpoint CSV must have columns lambda,beta_*,criterion");
    }
    const Eigen::Index p = static_cast<Eigen::Index>(ncol) - 2;
    std::vector<PathBreakpoint> bps;
    for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
        PathBreakpoint bp;
        bp.lambda = table.values(r, 0);
        bp.beta = table.values.row(r).segment(1, p).transpose();
        bp.criterion = table.values(r, static_cast<Eigen::Index>(ncol) - 1);
        bp.segment_orthant = OrthantSign::zeros(p);
        bps.push_back(std::move(bp));
    }
    return bps;
}

}  // namespace orthantpath
