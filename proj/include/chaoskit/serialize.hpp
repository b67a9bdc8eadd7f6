#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "chaoskit/chaos_vector.hpp"

namespace chaoskit {

/// JSON form of a chaos vector: truncation header plus an object mapping the
/// graded rank of each multi-index to its coefficient, ranks ascending.
std::string to_json(const ChaosVector& v);
/// Process form: coefficients are arrays; the grid rides in the header.
std::string to_json(const ChaosProcess& p);

ChaosVector chaos_vector_from_json(const std::string& text);
ChaosProcess chaos_process_from_json(const std::string& text);

/// CSV emitter: header row, comma separated, '.' decimal, %.17g values
/// (lossless round trip, reproducible bytes).
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(std::span<const double> values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

/// Shortest reproducible decimal form used across all CSV/JSON output.
std::string format_double(double value);

}  // namespace chaoskit
