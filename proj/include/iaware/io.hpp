#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "iaware/filter.hpp"
#include "iaware/scenario.hpp"

namespace iaware {

/// Parse failure in a delimited text file, carrying the 1-based line number
/// and 1-based field column of the offending cell.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, int line, int column, const std::string& message);

    [[nodiscard]] const std::string& file() const { return file_; }
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }

private:
    std::string file_;
    int line_;
    int column_;
};

/// One per-frame extracted estimate row as written by the tracker.
struct EstimateRow {
    int frame = 0;
    Label label;
    StateVector state;
    double r = 0.0;
};

// All files are comma-delimited text with one header line; reals carry 17
// significant digits so read(write(x)) == x exactly. Labels serialize as
// "birth_time:birth_index".

void write_truth(const std::string& path, const std::vector<GroundTruthTrack>& truth);
std::vector<GroundTruthTrack> read_truth(const std::string& path);

void write_scans(const std::string& path, const std::vector<Scan>& scans);
std::vector<Scan> read_scans(const std::string& path);

void write_estimates(const std::string& path, const std::vector<EstimateRow>& rows);
std::vector<EstimateRow> read_estimates(const std::string& path);

/// %.17g rendering used across every output file.
std::string format_double(double value);

}  // namespace iaware
