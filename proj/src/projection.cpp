#include "flipmap/projection.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <map>

namespace flipmap::semantics {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10f", v);
  return buf;
}

// Flip each axis so its largest-magnitude loading is positive; eigensolvers
// are free to return either sign.
void fix_sign(Eigen::VectorXd& axis) {
  Eigen::Index at = 0;
  axis.cwiseAbs().maxCoeff(&at);
  if (axis[at] < 0) axis = -axis;
}

}  // namespace

Projection project_2d(const std::vector<EmbeddingVector>& vectors) {
  if (vectors.size() < 2) {
    throw InsufficientData("projection requires at least 2 vectors, got " +
                           std::to_string(vectors.size()));
  }
  const size_t dim = vectors.front().values.size();
  if (dim == 0) {
    throw InsufficientData("projection requires nonempty vectors");
  }
  for (const auto& v : vectors) {
    if (v.values.size() != dim) {
      throw DimensionMismatch("vector for prompt " + v.prompt_id +
                              " has length " + std::to_string(v.values.size()) +
                              ", expected " + std::to_string(dim));
    }
  }

  const Eigen::Index n = static_cast<Eigen::Index>(vectors.size());
  const Eigen::Index d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd data(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      data(i, j) = vectors[static_cast<size_t>(i)].values[static_cast<size_t>(j)];
    }
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  data.rowwise() -= mean;

  Eigen::MatrixXd cov = (data.transpose() * data) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error("principal-axes eigendecomposition failed");
  }

  // Eigenvalues come back ascending; the last columns hold the top axes.
  Eigen::VectorXd axis1 = solver.eigenvectors().col(d - 1);
  fix_sign(axis1);
  Eigen::VectorXd axis2;
  if (d >= 2) {
    axis2 = solver.eigenvectors().col(d - 2);
    fix_sign(axis2);
  } else {
    axis2 = Eigen::VectorXd::Zero(d);
  }

  Projection projection;
  projection.points.reserve(vectors.size());
  std::map<codec::TransformMode, ModeCentroid> centroids;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = vectors[static_cast<size_t>(i)];
    ProjectedPoint p{v.prompt_id, v.mode, data.row(i).dot(axis1),
                     d >= 2 ? data.row(i).dot(axis2) : 0.0};
    auto& c = centroids[v.mode];
    c.mode = v.mode;
    c.x += p.x;
    c.y += p.y;
    ++c.count;
    projection.points.push_back(std::move(p));
  }
  for (auto& [mode, c] : centroids) {
    c.x /= static_cast<double>(c.count);
    c.y /= static_cast<double>(c.count);
    projection.centroids.push_back(c);
  }
  for (size_t i = 0; i < projection.centroids.size(); ++i) {
    for (size_t j = i + 1; j < projection.centroids.size(); ++j) {
      const auto& a = projection.centroids[i];
      const auto& b = projection.centroids[j];
      projection.centroid_distances.push_back(
          {a.mode, b.mode, std::hypot(a.x - b.x, a.y - b.y)});
    }
  }
  return projection;
}

std::string projection_csv(const Projection& projection) {
  std::string out = "prompt_id,mode,x,y\n";
  for (const auto& p : projection.points) {
    out += p.prompt_id + "," + std::string(codec::mode_name(p.mode)) + "," +
           fmt(p.x) + "," + fmt(p.y) + "\n";
  }
  return out;
}

std::string centroid_csv(const Projection& projection) {
  std::string out = "mode,count,x,y\n";
  for (const auto& c : projection.centroids) {
    out += std::string(codec::mode_name(c.mode)) + "," + std::to_string(c.count) +
           "," + fmt(c.x) + "," + fmt(c.y) + "\n";
  }
  out += "\npair_a,pair_b,centroid_distance\n";
  for (const auto& d : projection.centroid_distances) {
    out += std::string(codec::mode_name(d.a)) + "," +
           std::string(codec::mode_name(d.b)) + "," + fmt(d.distance) + "\n";
  }
  return out;
}

}  // namespace flipmap::semantics
