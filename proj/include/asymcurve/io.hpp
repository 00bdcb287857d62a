#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymcurve/construction.hpp"
#include "asymcurve/functionals.hpp"
#include "asymcurve/geometry.hpp"

namespace asymcurve {

// Curve CSV: header "x,y,s", one row per sample, %.17g. A closed curve ends
// with a copy of its first point at s = length, and a file whose last row
// repeats the first point reads back as closed.
void write_csv(std::ostream& out, const SampledCurve& curve);
void write_csv(const std::filesystem::path& path, const SampledCurve& curve);

/// Throws ParseError naming the 1-based file row on malformed input.
SampledCurve read_csv(std::istream& in);
SampledCurve read_csv(const std::filesystem::path& path);

/// One <path> element in y-up coordinates, viewBox = bounding box padded
/// by 5% of its larger side.
void write_svg(std::ostream& out, const SampledCurve& curve, double stroke = 0.002);
void write_svg(const std::filesystem::path& path, const SampledCurve& curve,
               double stroke = 0.002);

/// Coordinates of the first path element written by write_svg, and whether
/// it was closed.
SampledCurve read_svg_path(std::istream& in);

nlohmann::json build_manifest(const CurveStack& stack, int samples_per_bump,
                              std::size_t budget);

nlohmann::json to_json(const ScanResult& r);
nlohmann::json to_json(const UAResult& r);
nlohmann::json to_json(const ClassificationReport& rep);

/// %.17g, which round-trips every double.
std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace asymcurve
