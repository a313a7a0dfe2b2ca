#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vfr {

/// Shortest decimal representation that parses back to the same double.
/// Infinities serialize as "inf"/"-inf". Used for every numeric text output
/// so that reruns are byte-identical.
std::string format_double(double v);

double parse_double(const std::string& s, const std::string& context);
long parse_long(const std::string& s, const std::string& context);

std::vector<std::string> split_csv_line(const std::string& line);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace vfr
