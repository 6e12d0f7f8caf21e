#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "shellrg/trajectory.hpp"

namespace shellrg {

/// Shortest round-trip decimal form at 17 significant digits.
std::string formatG17(double x);

class CsvFile {
public:
    CsvFile(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
};

/// Long-format trajectory dump: one row (t, n, re, im) per sample time and
/// shell; the im column is zero for real models.
void writeTrajectoryCsv(const std::string& path, const Trajectory& traj,
                        const std::vector<double>& times);

} // namespace shellrg
