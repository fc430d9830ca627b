#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "monolab/asymptotics.hpp"
#include "monolab/inverse.hpp"

namespace monolab {

/// Shortest 17-significant-digit decimal form (round-trips a double).
std::string fmt_g17(double v);

/// Write-temp-then-rename so readers never observe a partial file.
void atomic_write_text(const std::string& path, const std::string& content);

void write_json(const std::string& path, const nlohmann::json& j);

/// "x,y,value" rows, one per node.
void write_field_csv(const std::string& path, const ScalarField& field);

/// "epsilon,area,h1,l2,boundary" rows.
void write_rate_csv(const std::string& path, const RateStudy& study);

/// "node,x,y,w,g" rows per boundary-edge endpoint (corner nodes repeat with
/// the normal data of each adjacent side).
void write_measurement_csv(const std::string& path, const MeasurementSet& ms, int experiment);

/// Two-column gnuplot data file.
void write_xy_dat(const std::string& path, const std::vector<double>& x,
                  const std::vector<double>& y);

nlohmann::json grid_to_json(const Grid& grid);

}  // namespace monolab
