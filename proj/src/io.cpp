#include "iaware/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace iaware {

namespace {

std::string location(const std::string& file, int line, int column) {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

/// Line-oriented reader that tracks position for error reporting.
class TableReader {
public:
    TableReader(const std::string& path, const std::string& expected_header) : path_(path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path + " for reading");
        std::string line;
        if (!std::getline(in, line)) {
            throw ParseError(path_, 1, 1, "missing header line");
        }
        if (line != expected_header) {
            throw ParseError(path_, 1, 1, "unexpected header, want \"" + expected_header + "\"");
        }
        line_no_ = 1;
        while (std::getline(in, line)) {
            ++line_no_;
            if (line.empty()) continue;
            rows_.emplace_back(line_no_, split_fields(line));
        }
    }

    [[nodiscard]] const std::vector<std::pair<int, std::vector<std::string>>>& rows() const {
        return rows_;
    }

    double as_double(const std::pair<int, std::vector<std::string>>& row, std::size_t col) const {
        const std::string& cell = field(row, col);
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end != cell.c_str() + cell.size() || cell.empty() || errno == ERANGE) {
            throw ParseError(path_, row.first, static_cast<int>(col) + 1,
                             "not a real number: \"" + cell + "\"");
        }
        return v;
    }

    int as_int(const std::pair<int, std::vector<std::string>>& row, std::size_t col) const {
        const std::string& cell = field(row, col);
        errno = 0;
        char* end = nullptr;
        const long v = std::strtol(cell.c_str(), &end, 10);
        if (end != cell.c_str() + cell.size() || cell.empty() || errno == ERANGE) {
            throw ParseError(path_, row.first, static_cast<int>(col) + 1,
                             "not an integer: \"" + cell + "\"");
        }
        return static_cast<int>(v);
    }

    Label as_label(const std::pair<int, std::vector<std::string>>& row, std::size_t col) const {
        const std::string& cell = field(row, col);
        const auto sep = cell.find(':');
        if (sep == std::string::npos) {
            throw ParseError(path_, row.first, static_cast<int>(col) + 1,
                             "not a label (want \"birth_time:birth_index\"): \"" + cell + "\"");
        }
        try {
            return {std::stoi(cell.substr(0, sep)), std::stoi(cell.substr(sep + 1))};
        } catch (const std::exception&) {
            throw ParseError(path_, row.first, static_cast<int>(col) + 1,
                             "not a label (want \"birth_time:birth_index\"): \"" + cell + "\"");
        }
    }

    const std::string& field(const std::pair<int, std::vector<std::string>>& row,
                             std::size_t col) const {
        if (col >= row.second.size()) {
            throw ParseError(path_, row.first, static_cast<int>(col) + 1, "missing field");
        }
        return row.second[col];
    }

private:
    std::string path_;
    int line_no_ = 0;
    std::vector<std::pair<int, std::vector<std::string>>> rows_;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

}  // namespace

ParseError::ParseError(std::string file, int line, int column, const std::string& message)
    : std::runtime_error(location(file, line, column) + ": " + message),
      file_(std::move(file)),
      line_(line),
      column_(column) {}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_truth(const std::string& path, const std::vector<GroundTruthTrack>& truth) {
    struct Row {
        int frame;
        Label label;
        StateVector state;
    };
    std::vector<Row> rows;
    for (const GroundTruthTrack& t : truth) {
        for (const auto& [frame, s] : t.states) rows.push_back({frame, t.label, s});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.frame, a.label) < std::tie(b.frame, b.label);
    });

    std::ofstream out = open_out(path);
    out << "frame,label,px,vx,py,vy\n";
    for (const Row& r : rows) {
        out << r.frame << ',' << to_string(r.label) << ',' << format_double(r.state.px) << ','
            << format_double(r.state.vx) << ',' << format_double(r.state.py) << ','
            << format_double(r.state.vy) << '\n';
    }
}

std::vector<GroundTruthTrack> read_truth(const std::string& path) {
    TableReader reader(path, "frame,label,px,vx,py,vy");
    std::map<Label, GroundTruthTrack> by_label;
    for (const auto& row : reader.rows()) {
        const int frame = reader.as_int(row, 0);
        const Label label = reader.as_label(row, 1);
        StateVector s{reader.as_double(row, 2), reader.as_double(row, 3), reader.as_double(row, 4),
                      reader.as_double(row, 5)};
        GroundTruthTrack& t = by_label[label];
        t.label = label;
        if (t.states.count(frame) != 0) {
            throw ParseError(path, row.first, 1,
                             "duplicate state for label " + to_string(label) + " at frame " +
                                 std::to_string(frame));
        }
        t.states[frame] = s;
    }

    std::vector<GroundTruthTrack> truth;
    truth.reserve(by_label.size());
    for (auto& [label, t] : by_label) {
        t.birth_frame = t.states.begin()->first;
        t.death_frame = t.states.rbegin()->first + 1;
        if (static_cast<int>(t.states.size()) != t.death_frame - t.birth_frame) {
            throw std::runtime_error(path + ": track " + to_string(label) +
                                     " has gaps in its frame range");
        }
        truth.push_back(std::move(t));
    }
    return truth;
}

void write_scans(const std::string& path, const std::vector<Scan>& scans) {
    std::vector<const Scan*> ordered;
    ordered.reserve(scans.size());
    for (const Scan& s : scans) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const Scan* a, const Scan* b) { return a->frame < b->frame; });

    std::ofstream out = open_out(path);
    out << "frame,zx,zy\n";
    for (const Scan* s : ordered) {
        for (const Measurement& m : s->measurements) {
            out << s->frame << ',' << format_double(m.z(0)) << ',' << format_double(m.z(1))
                << '\n';
        }
    }
}

std::vector<Scan> read_scans(const std::string& path) {
    TableReader reader(path, "frame,zx,zy");
    std::map<int, Scan> by_frame;
    for (const auto& row : reader.rows()) {
        const int frame = reader.as_int(row, 0);
        Measurement m;
        m.z = {reader.as_double(row, 1), reader.as_double(row, 2)};
        Scan& scan = by_frame[frame];
        scan.frame = frame;
        scan.measurements.push_back(m);
    }
    std::vector<Scan> scans;
    scans.reserve(by_frame.size());
    for (auto& [frame, scan] : by_frame) scans.push_back(std::move(scan));
    return scans;
}

void write_estimates(const std::string& path, const std::vector<EstimateRow>& rows) {
    std::ofstream out = open_out(path);
    out << "frame,label,px,vx,py,vy,r\n";
    for (const EstimateRow& r : rows) {
        out << r.frame << ',' << to_string(r.label) << ',' << format_double(r.state.px) << ','
            << format_double(r.state.vx) << ',' << format_double(r.state.py) << ','
            << format_double(r.state.vy) << ',' << format_double(r.r) << '\n';
    }
}

std::vector<EstimateRow> read_estimates(const std::string& path) {
    TableReader reader(path, "frame,label,px,vx,py,vy,r");
    std::vector<EstimateRow> rows;
    rows.reserve(reader.rows().size());
    for (const auto& row : reader.rows()) {
        EstimateRow r;
        r.frame = reader.as_int(row, 0);
        r.label = reader.as_label(row, 1);
        r.state = {reader.as_double(row, 2), reader.as_double(row, 3), reader.as_double(row, 4),
                   reader.as_double(row, 5)};
        r.r = reader.as_double(row, 6);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace iaware
