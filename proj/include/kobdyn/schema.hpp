#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "kobdyn/domain.hpp"
#include "kobdyn/holomap.hpp"
#include "kobdyn/orbit.hpp"

// Versioned wire formats; see docs/schema.md.

namespace kobdyn {

inline constexpr const char* kSchemaVersion = "1";

Complex parse_complex(const nlohmann::json& j, const std::string& where);
Point parse_point(const nlohmann::json& j, const std::string& where);
nlohmann::json point_to_json(const Point& p);

Domain parse_domain(const nlohmann::json& j);
nlohmann::json domain_to_json(const Domain& d);

// `hint` supplies the ambient domain for map kinds that do not pin one
// (scale, compose of such).
HolMap parse_map(const nlohmann::json& j, const std::optional<Domain>& hint = std::nullopt);

nlohmann::json orbit_to_json(const OrbitRecord& orbit);

// RFC 4180 CSV: header + CRLF rows, %.17g number formatting.
// Columns: n, re_z1, im_z1, ..., step, residual, t_n, s_n, gauge.
std::string orbit_to_csv(const OrbitRecord& orbit);

// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace kobdyn
