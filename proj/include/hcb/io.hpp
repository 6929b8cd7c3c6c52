#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hcb/hamiltonian.hpp"
#include "hcb/types.hpp"

namespace hcb {

// Formats doubles with %.12g so reruns byte-match.
std::string format_double(double value);

// Minimal deterministic CSV writer: a header row, then format_double cells.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void write_row(const std::vector<double>& values);
  void write_row(const std::vector<std::string>& cells);

 private:
  std::filesystem::path path_;
  std::string buffer_;
  std::size_t columns_ = 0;

 public:
  ~CsvWriter();
};

// (row, col, value) triplet text dump for external verification.
void dump_operator(const SparseOperator& op, const std::filesystem::path& path);

// Dense grid of "re im" pairs, one matrix row per line.
void dump_matrix(const ComplexMatrix& matrix, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace hcb
