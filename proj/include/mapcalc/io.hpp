#pragma once

#include "mapcalc/optimizer.hpp"

#include <string>

namespace mapcalc {

/// Sampled maps and sections are stored as CSV with a leading
/// "# {json header}" line describing atlas, target and resolution, then one
/// row per chart node: chart_id, node, grid indices, point coordinates (and
/// vector components for sections). Numbers use 17 significant digits so a
/// read-back is bit-identical. All functions throw IoError on file errors and
/// ParseError on malformed content.
void write_map_csv(const SampledMap& f, const std::string& path);
SampledMap read_map_csv(const std::string& path);

void write_section_csv(const PullbackSection& s, const std::string& path);
/// The base map is rebuilt from the stored base points.
PullbackSection read_section_csv(const std::string& path);

/// Header step,energy,grad_norm,step_size and one row per trace row.
void write_trace_csv(const DescentTrace& trace, const std::string& path);
DescentTrace read_trace_csv(const std::string& path);

/// Writes `j` pretty-printed with a trailing newline.
void write_json(const json& j, const std::string& path);
json read_json(const std::string& path);

}  // namespace mapcalc
