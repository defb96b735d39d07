#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fixtures {

// Single-column CSV with a header line, as shipped in data/.
inline std::vector<double> column(const std::string& file) {
  std::ifstream in(std::string(BIMODAL_DATA_DIR) + "/" + file);
  if (!in) throw std::runtime_error("missing fixture " + file);
  std::string line;
  std::getline(in, line);
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(std::stod(line));
  }
  return out;
}

}  // namespace fixtures
