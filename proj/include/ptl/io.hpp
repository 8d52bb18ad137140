#pragma once

#include "ptl/coreset.hpp"
#include "ptl/geometry.hpp"
#include "ptl/matching.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace ptl {

inline constexpr const char* kToolVersion = "0.1.0";

// All numeric fields are written with 17 significant digits so files
// round-trip losslessly through the readers.
std::string format_double(double x);

// Instance CSV: header "px,py,vx,vy,b" with optional "w" and "u" columns.
void write_instance_csv(std::ostream& os, const PairSet& A);
void write_weighted_csv(std::ostream& os, const WeightedPairSet& A,
                        const std::vector<double>* coreset_u = nullptr);

struct LoadedInstance {
  PairSet pairs;
  std::optional<std::vector<double>> weights;  // w column, when present
  std::optional<std::vector<double>> coreset;  // u column, when present
};

LoadedInstance read_instance_csv(std::istream& is);

// JSON alternative with the same fields.
std::string instance_to_json(const PairSet& A, const std::vector<double>* weights = nullptr);
LoadedInstance instance_from_json(const std::string& text);

LoadedInstance load_instance_file(const std::string& path);  // dispatches on extension
void save_instance_file(const std::string& path, const PairSet& A,
                        const std::vector<double>* weights = nullptr);

std::string alignment_to_json(const Alignment& a);
Alignment alignment_from_json(const std::string& text);

std::string match_result_to_json(const MatchResult& r);

// One stream record: "px,py,vx,vy,b,w". Returns nothing for blank lines.
std::optional<std::tuple<PlanarPoint, PlanarLine, double>> parse_stream_record(const std::string& line);

// Reproducibility manifest written next to CLI outputs.
void write_manifest(const std::string& path, const std::string& command,
                    const std::string& config_json, std::uint64_t seed);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ptl
