#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hadams/dimension.hpp"

namespace hadams {

// fixed 17-significant-digit float format used for every number that reaches
// an output file; printing at this width makes text round trips bit-exact
std::string fmt17(double x);

uint64_t fnv1a64(std::string_view data);
std::string hex64(uint64_t value);

// CSV with fmt17 cells; rows are flushed in insertion order
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);
  void add_row(const std::vector<double>& values);
  void add_row_mixed(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

// Minimal order-preserving JSON emitter.  Numbers go through fmt17 so reports
// are byte-identical for identical inputs; we only ever write these files.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key = "");
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(long long v);
  JsonWriter& value(bool v);
  JsonWriter& field(const std::string& k, double v);
  JsonWriter& field(const std::string& k, const std::string& v);
  JsonWriter& field(const std::string& k, long long v);
  JsonWriter& field(const std::string& k, bool v);
  std::string str() const { return out_; }

 private:
  void comma();
  std::string out_;
  std::vector<bool> first_in_scope_;
  bool after_key_ = false;
};

// the constant table embedded in every report
void write_constant_table(JsonWriter& w, const Dimension& dim);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hadams
