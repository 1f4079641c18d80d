#pragma once

#include <string>

#include "homext/energy.hpp"
#include "homext/snowflake.hpp"

#include "json.hpp"

namespace homext {

/// Round-trippable decimal formatting ("%.17g") for CSV cells.
std::string format_double(double v);

nlohmann::json mesh_to_json(const ExtensionMesh& mesh);
nlohmann::json energy_report_to_json(const EnergyReport& report);
nlohmann::json series_bound_to_json(const SeriesBound& bound);
nlohmann::json homeo_report_to_json(const HomeoReport& report);
nlohmann::json snowflake_to_json(const SnowflakeState& state);

/// One polygon per affine triangle, 9-significant-digit coordinates; the
/// y axis is flipped by a display transform only.
std::string mesh_to_svg(const ExtensionMesh& mesh, bool image_side);
std::string snowflake_to_svg(const SnowflakeState& state);

std::string energy_per_generation_csv(const EnergyReport& report);
std::string series_bound_csv(const SeriesBound& bound);
std::string snowflake_samples_csv(const SnowflakeState& state, int samples);

}  // namespace homext
