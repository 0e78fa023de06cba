#include "beastal/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace beastal {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

void append_block(std::vector<std::string>& row, const Eigen::VectorXd& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) row.push_back(format_double(values(i)));
}

void header_block(std::vector<std::string>& header, const std::string& prefix, int count) {
  for (int i = 0; i < count; ++i) header.push_back(prefix + std::to_string(i));
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_table_csv(const std::string& path, const nlohmann::json& metadata,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  auto out = open_for_write(path);
  out << "# " << metadata.dump() << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::invalid_argument("csv row width does not match the header");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << "\n";
  }
  finish(out, path);
}

void write_trace_csv(const std::string& path, const TrainingTrace& trace,
                     const NetworkTopology& topology, const nlohmann::json& metadata) {
  std::vector<std::string> header = {"t", "loss_norm"};
  header_block(header, "x", topology.n_inputs);
  header_block(header, "y", topology.n_outputs);
  header_block(header, "yhat", topology.n_outputs);
  header_block(header, "x_upd", topology.n_inputs);
  header_block(header, "y_upd", topology.n_outputs);
  header_block(header, "R", topology.edge_count());

  std::vector<std::vector<std::string>> rows;
  rows.reserve(trace.records.size());
  for (const TraceRecord& record : trace.records) {
    std::vector<std::string> row;
    row.reserve(header.size());
    row.push_back(std::to_string(record.t));
    row.push_back(format_double(record.loss_norm));
    append_block(row, record.x);
    append_block(row, record.y);
    append_block(row, record.desired);
    append_block(row, record.x_update);
    append_block(row, record.y_update);
    append_block(row, record.resistances);
    rows.push_back(std::move(row));
  }
  write_table_csv(path, metadata, header, rows);
}

void write_accuracy_csv(const std::string& path, const TrainingTrace& trace,
                        const nlohmann::json& metadata) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(trace.records.size());
  for (const TraceRecord& record : trace.records) {
    rows.push_back({std::to_string(record.t), format_double(record.accuracy)});
  }
  write_table_csv(path, metadata, {"t", "accuracy"}, rows);
}

void write_json(const std::string& path, const nlohmann::json& document) {
  auto out = open_for_write(path);
  out << document.dump(2) << "\n";
  finish(out, path);
}

nlohmann::json trace_summary(const TrainingTrace& trace) {
  nlohmann::json j;
  j["steps"] = trace.steps;
  j["record_stride"] = trace.record_stride;
  j["records"] = trace.records.size();
  j["clamp_events"] = trace.clamp_events;
  if (!trace.records.empty()) {
    j["final_loss"] = trace.records.back().loss_norm;
    j["trailing_mean_loss_100"] = trailing_mean_loss(trace, 100);
  }
  return j;
}

}  // namespace beastal
