#pragma once

#include <string>
#include <vector>

#include "flipmap/semantics.hpp"

namespace flipmap::semantics {

class InsufficientData : public Error {
 public:
  using Error::Error;
};

struct ProjectedPoint {
  std::string prompt_id;
  codec::TransformMode mode = codec::TransformMode::IDENTITY;
  double x = 0.0;
  double y = 0.0;
};

struct ModeCentroid {
  codec::TransformMode mode = codec::TransformMode::IDENTITY;
  double x = 0.0;
  double y = 0.0;
  size_t count = 0;
};

struct CentroidDistance {
  codec::TransformMode a = codec::TransformMode::IDENTITY;
  codec::TransformMode b = codec::TransformMode::IDENTITY;
  double distance = 0.0;
};

struct Projection {
  std::vector<ProjectedPoint> points;
  std::vector<ModeCentroid> centroids;
  std::vector<CentroidDistance> centroid_distances;  // all unordered pairs
};

// Centers the vectors and projects them onto the top-2 principal axes.
// Output is plot-ready data, not an image. Requires >= 2 vectors of one
// shared dimension; eigenvector signs are fixed deterministically.
Projection project_2d(const std::vector<EmbeddingVector>& vectors);

std::string projection_csv(const Projection& projection);
std::string centroid_csv(const Projection& projection);

}  // namespace flipmap::semantics
