#pragma once

#include <string>
#include <vector>

namespace mupo::io {

/// Deterministic shortest round-trip-ish formatting, '.' decimal separator.
std::string format_double(double v);

/// Buffers rows and writes them atomically (temp file + rename) with a
/// header row and '\n' line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::string to_string() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Atomic small-file write used for every artifact the CLI emits.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mupo::io
