#include "dnsnmf/report.hpp"

#include <cstdio>
#include <fstream>

namespace dnsnmf {

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void KeyValueReport::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void KeyValueReport::add(const std::string& key, double value) {
  entries_.emplace_back(key, format_real(value));
}

void KeyValueReport::add(const std::string& key, std::int64_t value) {
  entries_.emplace_back(key, std::to_string(value));
}

std::string KeyValueReport::str() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

void KeyValueReport::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError(path + ": cannot open for writing");
  const std::string body = str();
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw DataFormatError(path + ": write failed");
}

void append_metrics(KeyValueReport& out, const ClusteringReport& report) {
  out.add("accuracy", report.accuracy);
  out.add("nmi", report.nmi);
  out.add("kmeans_objective", report.kmeans_objective);
  out.add("kmeans_restarts", static_cast<std::int64_t>(report.restarts_used));
  for (std::size_t i = 0; i < report.sparseness_z.size(); ++i) {
    out.add("sparseness_z." + std::to_string(i + 1), report.sparseness_z[i]);
  }
  out.add("sparseness_h", report.sparseness_h);
}

void append_trace(KeyValueReport& out, const std::vector<double>& objective_trace) {
  out.add("objective_trace.length", static_cast<std::int64_t>(objective_trace.size()));
  for (std::size_t i = 0; i < objective_trace.size(); ++i) {
    out.add("objective_trace." + std::to_string(i + 1), objective_trace[i]);
  }
}

void export_report(const ClusteringReport& report, const std::vector<SweepReport>& trace,
                   const std::string& path) {
  KeyValueReport kv;
  append_metrics(kv, report);
  std::vector<double> objectives;
  objectives.reserve(trace.size());
  for (const SweepReport& s : trace) objectives.push_back(s.objective);
  append_trace(kv, objectives);
  kv.write(path);
}

}  // namespace dnsnmf
