// Line-delimited run trace: one record per state transition as ordered
// key=value fields. Field names are part of the stable contract; golden
// tests diff these files byte for byte.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ego {

class TraceWriter {
 public:
  using Field = std::pair<std::string, std::string>;

  void emit(long clock, const std::string& op, std::vector<Field> fields = {});
  const std::string& text() const { return buffer_; }
  std::size_t lines() const { return lines_; }
  void clear() { buffer_.clear(); lines_ = 0; }

 private:
  std::string buffer_;
  std::size_t lines_ = 0;
};

}  // namespace ego
