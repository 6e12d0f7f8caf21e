#include "shellrg/csv.hpp"

#include <cstdio>

namespace shellrg {

std::string formatG17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvFile::CsvFile(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw EvaluationError("cannot open CSV file for writing: " + path);
    row(header);
}

void CsvFile::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void writeTrajectoryCsv(const std::string& path, const Trajectory& traj,
                        const std::vector<double>& times) {
    CsvFile csv(path, {"t", "n", "re", "im"});
    for (double t : times) {
        const ShellState u = traj.sample(t);
        for (int n = 1; n <= u.shells(); ++n) {
            const Complex v = u.at(n);
            csv.row({formatG17(t), std::to_string(n), formatG17(v.real()), formatG17(v.imag())});
        }
    }
}

} // namespace shellrg
