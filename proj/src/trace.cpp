#include "ego/trace.hpp"

namespace ego {

void TraceWriter::emit(long clock, const std::string& op, std::vector<Field> fields) {
  buffer_ += "clock=" + std::to_string(clock) + " op=" + op;
  for (const auto& [key, value] : fields) {
    buffer_ += ' ';
    buffer_ += key;
    buffer_ += '=';
    buffer_ += value;
  }
  buffer_ += '\n';
  ++lines_;
}

}  // namespace ego
