#include "hcb/io.hpp"

#include <cstdio>
#include <fstream>

#include "hcb/errors.hpp"

namespace hcb {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::write_row(const std::vector<double>& values) {
  if (values.size() != columns_) throw ValidationError("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_double(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw ValidationError("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
  std::ofstream out(path_);
  if (out) out << buffer_;
}

void dump_operator(const SparseOperator& op, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("dump_operator: cannot write " + path.string());
  for (const auto& e : op.entries) {
    out << e.row << ' ' << e.col << ' ' << format_double(e.value) << '\n';
  }
}

void dump_matrix(const ComplexMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("dump_matrix: cannot write " + path.string());
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(matrix(r, c).real()) << ' ' << format_double(matrix(r, c).imag());
    }
    out << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_text_file: cannot write " + path.string());
  out << contents;
}

}  // namespace hcb
