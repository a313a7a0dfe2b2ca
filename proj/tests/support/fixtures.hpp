#pragma once

// Shared synthetic fixtures. Deterministic: generators are seeded, and random
// layouts are retried internally until the extracted critical point census
// meets the request, so tests see a stable inventory.

#include <filesystem>
#include <string>
#include <vector>

#include "vfr/critical_points.hpp"
#include "vfr/synth.hpp"

namespace vfr::testing {

struct RandomField {
  TimeVaryingField field;
  std::vector<CriticalPoint> cps;  // frame 0 extraction
};

/// Steady random superposition whose extracted census falls in
/// [min_cps, max_cps], with all critical points pairwise separated enough
/// for grid-oracle seeding.
RandomField make_random_field(unsigned seed, int min_cps, int max_cps, int resolution = 40);

/// Source + saddle pair: exactly two critical points with a finite
/// cancellation col between them.
RandomField make_pair_field(int resolution = 64);

/// Unit square split along the diagonal, with a uniform field value.
TimeVaryingField unit_square_field(Vec2 value);

/// Scratch directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace vfr::testing
