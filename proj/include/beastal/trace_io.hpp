#pragma once

#include <string>
#include <vector>

#include "beastal/trainer.hpp"
#include "json.hpp"

namespace beastal {

/// 17 significant digits: enough to round-trip an IEEE double exactly, so
/// identical runs produce bitwise-identical CSV files.
std::string format_double(double value);

/// Generic CSV with a leading `# {json}` metadata comment line. Throws
/// std::runtime_error when the path cannot be written.
void write_table_csv(const std::string& path, const nlohmann::json& metadata,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

/// Full training trace: t, loss_norm, x..., y..., yhat..., x_upd...,
/// y_upd..., R..., one row per recorded step.
void write_trace_csv(const std::string& path, const TrainingTrace& trace,
                     const NetworkTopology& topology, const nlohmann::json& metadata);

/// Per-step test accuracy (classification traces): columns t, accuracy.
void write_accuracy_csv(const std::string& path, const TrainingTrace& trace,
                        const nlohmann::json& metadata);

void write_json(const std::string& path, const nlohmann::json& document);

/// Loss statistics of a finished run: step count, stride, clamp events,
/// last-record loss, and the trailing 100-record mean.
nlohmann::json trace_summary(const TrainingTrace& trace);

}  // namespace beastal
