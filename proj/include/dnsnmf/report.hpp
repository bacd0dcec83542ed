#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dnsnmf/clustering.hpp"
#include "dnsnmf/deep_nsnmf.hpp"

namespace dnsnmf {

/// Ordered "key = value" text report. Keys appear in insertion order and
/// doubles are printed with %.17g, so the same values always serialize to the
/// same bytes.
class KeyValueReport {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, std::int64_t value);

  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// %.17g rendering used everywhere a real number becomes text.
std::string format_real(double value);

/// Appends the metric block: accuracy, nmi, kmeans objective and restarts,
/// per-layer basis sparseness, encoding sparseness.
void append_metrics(KeyValueReport& out, const ClusteringReport& report);

/// Appends objective_trace.length and objective_trace.<i> entries (1-based).
void append_trace(KeyValueReport& out, const std::vector<double>& objective_trace);

/// Stand-alone metrics + sweep-trace report file.
void export_report(const ClusteringReport& report, const std::vector<SweepReport>& trace,
                   const std::string& path);

}  // namespace dnsnmf
