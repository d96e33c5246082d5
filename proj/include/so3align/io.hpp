#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "so3align/align.hpp"
#include "so3align/evaluation.hpp"

namespace so3align {

enum class QuatConvention { Hamilton, Jpl };

// Pose CSV layout. `columns` names the file's columns left to right; "_"
// skips a column, columns past the end of the list are ignored. The
// quaternion fields and t are required; x/y/z (translation) are accepted and
// discarded, since only orientations matter here.
struct CsvOptions {
  std::vector<std::string> columns = {"t", "x", "y", "z", "qx", "qy", "qz", "qw"};
  QuatConvention convention = QuatConvention::Hamilton;
  // Rows whose quaternion norm strays from 1 by more than this are errors.
  double unit_tolerance = 1e-3;
};

// Reads a pose CSV: '#' lines are comments, a non-numeric first data line is
// treated as a header and skipped, every subsequent row must parse. JPL
// quaternions are conjugated into Hamilton on the way in. Throws IoError,
// EmptyFile, ParseError (with 1-based row/column), NonUnitQuaternion.
RotationSet ingest_pose_csv(const std::string& path, const CsvOptions& opts = {});

// Writes "t,x,y,z,qx,qy,qz,qw" rows (Hamilton, zero translation) with a
// header line, full double precision. Timestamps default to the row index
// when the set has none.
void emit_pose_csv(const std::string& path, const RotationSet& set);

nlohmann::json alignment_to_json(const GlobalAlignment& ga);
// Rebuilds l_star / r_bar / scores from alignment_to_json output. Per-axis
// aligned point sets are not serialized and come back empty.
GlobalAlignment alignment_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ErrorReport& rep);
nlohmann::json scaling_to_json(const ScalingReport& rep);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

// "index_a,index_b,error_deg" rows for each evaluated pair.
void write_pairs_csv(const std::string& path, const std::vector<std::pair<int, int>>& pairs,
                     const ErrorReport& rep);
// "bin_lo_deg,bin_hi_deg,count" occupancy of the per-pair error histogram.
void write_error_histogram_csv(const std::string& path, const ErrorReport& rep,
                               double bin_width_deg = 0.5);

}  // namespace so3align
