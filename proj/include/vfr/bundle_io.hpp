#pragma once

#include <filesystem>

#include "vfr/field.hpp"

namespace vfr {

/// Reads a bundle directory: mesh.json, bundle.json, frame_%04d.csv.
/// Every validation failure reports the offending file (and line for CSVs).
TimeVaryingField load_bundle(const std::filesystem::path& dir);

/// Writes a bundle directory in the same format. load_bundle followed by
/// save_bundle round-trips byte-identically.
void save_bundle(const TimeVaryingField& field, const std::filesystem::path& dir);

std::string frame_file_name(int index);

}  // namespace vfr
