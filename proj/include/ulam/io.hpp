#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ulam/experiments.hpp"
#include "ulam/interval_maps.hpp"
#include "ulam/measures.hpp"
#include "ulam/stationary.hpp"
#include "ulam/ulam_matrix.hpp"

// Serialization of the pipeline artifacts. All external indices (cells,
// matrix coordinates) are 1-based; in-memory indices are 0-based.

namespace ulam::io {

using nlohmann::json;

json partition_to_json(const Partition& p);          // breakpoint array
Partition partition_from_json(const json& j);

json measure_to_json(const StepMeasure& mu);         // {atom0, breakpoints, densities}
StepMeasure measure_from_json(const json& j);

json matrix_to_json(const UlamMatrix& m);            // {n, map, params, partition, rows}
UlamMatrix matrix_from_json(const json& j);
void matrix_to_coo(const UlamMatrix& m, std::ostream& out); // "i j p" per line, 1-based

json family_report_to_json(const FamilyReport& rep);
json stationary_to_json(const StationaryResult& sol);
json sweep_record_to_json(const SweepRecord& rec);

/// Map described as {name?, params?, branches: [{domain:[a,b], kind, coefficients}]}
/// with kind "affine" (coefficients [c0, c1] for c0 + c1*x) or "power"
/// (coefficients [c0, c1, c2, p] for c0 + c1*x + c2*x^p).
IntervalMap map_from_json(const json& j);
json map_to_json(const IntervalMap& map);

/// Catalog lookup used by the CLI: "mp" (requires alpha) or "counterexample".
IntervalMap make_catalog_map(const std::string& name, double alpha);

/// CSV with the pinned sweep columns; the producing config is echoed as a
/// leading '#' comment line.
void write_sweep_csv(std::ostream& out, const json& config, std::span<const SweepRecord> records);
void write_counterexample_csv(std::ostream& out, const json& config,
                              std::span<const CounterexampleRecord> records);

} // namespace ulam::io
