#pragma once
// File output and record serialization. All writers emit UTF-8 with LF line
// endings and deterministic number formatting (shortest round-trip decimal),
// so identical inputs produce byte-identical files.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matchsim/coherent.hpp"
#include "matchsim/drift.hpp"
#include "matchsim/resource.hpp"

namespace matchsim::io {

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

// One CSV line from already-formatted fields (no quoting; fields must not
// contain commas or newlines).
std::string csv_row(const std::vector<std::string>& fields);

// Writes header + rows. Throws std::runtime_error naming the path when the
// file cannot be opened. An empty row set still writes the header.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows);

// Writes lines verbatim, one per line.
void write_lines(const std::string& path, const std::vector<std::string>& lines);

// Line-delimited JSON encoding of run records, one object per line.
std::string record_to_line(const coherent::RunRecord& record);
coherent::RunRecord record_from_line(const std::string& line);
std::vector<coherent::RunRecord> read_record_log(const std::string& path);

// Fixed CSV schemas.
inline constexpr const char* kResourceCsvHeader =
    "n,mu_opt,p_error,ti_quantum,ti_classical_best,ti_classical_lb,metric,protocol,"
    "post_selected";
std::string resource_csv_row(const resource::ResourcePoint& point,
                             resource::TiMetric metric, Protocol protocol,
                             bool post_selected);

inline constexpr const char* kDriftCsvHeader =
    "block,true_phase,estimate,residual,visibility";
std::string drift_csv_row(const drift::BlockRecord& record);

// Stats summary as a single JSON object (stable key order).
std::string stats_to_json(const coherent::RunStats& stats);

}  // namespace matchsim::io
