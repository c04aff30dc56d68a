#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "orthantpath/dataset.hpp"
#include "orthantpath/enet.hpp"
#include "orthantpath/lasso.hpp"
#include "orthantpath/oracle.hpp"

namespace orthantpath {

struct RawTable {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;  // rows x columns
};

// Comma-separated, header required, '.' decimal separator. ParseError names
// the offending cell by file line and 1-based column.
RawTable read_csv(std::istream& in, const std::string& name = "<input>");
RawTable read_csv_file(const std::string& path);

struct RawData {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    std::vector<std::string> x_names;
    std::string y_name;
};

// response_column: a header name, or a 0-based column index given as an
// integer string; empty selects the last column.
RawData load_csv(const std::string& path, const std::string& response_column = "");
RawData split_response(const RawTable& table, const std::string& response_column);

struct PrepareResult {
    Dataset data;
    bool shifted;  // centering changed at least one column
};

// Center (subtract column means of X and the mean of Y), then divide all
// entries by scale. Scaling divides both X and Y by k, which leaves OLS
// unchanged and divides every breakpoint lambda by k^2; beta at matching
// lambda values is identical.
PrepareResult prepare(const Eigen::MatrixXd& raw_x, const Eigen::VectorXd& raw_y,
                      bool center, double scale);

// Decimal serialization with 17 significant digits: written values re-read
// to identical doubles.
std::string format_double(double v);

void write_breakpoints(std::ostream& out, const RegPath& path);
void write_trajectory(std::ostream& out, const RegPath& path, const GramMask& gm,
                      const PenaltyWeights& w, const EnetConfig& cfg, int samples_per_segment);
void write_oracle_fits(std::ostream& out, const std::vector<OrthantFit>& fits);
void write_moves(std::ostream& out, const std::vector<OrthantMove>& moves);

// Re-reads a breakpoint CSV written by write_breakpoints.
std::vector<PathBreakpoint> read_breakpoints(std::istream& in);

}  // namespace orthantpath
