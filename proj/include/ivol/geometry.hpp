#ifndef IVOL_GEOMETRY_HPP
#define IVOL_GEOMETRY_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ivol/mc.hpp"

namespace ivol {

// Convex polytope with a simplicial facet decomposition. Vertices are stored
// as columns; every stored vertex is an extreme point of the hull. For
// affinely degenerate input `degenerate` is set, `affine_dim` carries the
// dimension of the affine hull, and the volume is 0.
struct Polytope {
  int dim = 0;
  Eigen::MatrixXd vertices;                // dim x n_vertices
  std::vector<std::vector<int>> facets;    // each of size dim, outward-oriented
  Eigen::VectorXd interior_point;
  bool degenerate = false;
  int affine_dim = 0;

  int vertex_count() const { return static_cast<int>(vertices.cols()); }
};

// Ordered generating vectors of a zonotope, stored as columns of a k x n
// matrix.
struct Generators {
  Eigen::MatrixXd vectors;  // ambient_dim x n

  int ambient_dim() const { return static_cast<int>(vectors.rows()); }
  int count() const { return static_cast<int>(vectors.cols()); }
};

// Incremental beneath-beyond convex hull, dimensions 1 through 6. Points
// within the coplanarity tolerance of a supporting hyperplane are classified
// beneath it by a deterministic rule, so the vertex set is exactly the set of
// extreme input points and facet counts are reproducible.
Polytope convex_hull(const Eigen::MatrixXd& points);

// Volume as the fan of signed simplices over the interior point.
double polytope_volume(const Polytope& poly);

// Half-perimeter of a 2-dimensional polytope (sum of edge lengths / 2).
double polytope_half_perimeter(const Polytope& poly);

// Monte Carlo first intrinsic volume via the Gaussian-width route:
// sqrt(2 pi) * E max_v <N, v> over standard Gaussian directions N.
McResult polytope_v1_sudakov(const Polytope& poly, long samples, std::uint64_t seed,
                             int workers = 1);

// Top-degree zonotope volume: sum over k-subsets of |det|. Returns 0 when
// there are fewer generators than dimensions.
double zonotope_volume(const Generators& gen);

// m-th intrinsic volume of a zonotope: sum over m-subsets of sqrt(det Gram);
// m = 0 gives 1.
double zonotope_intrinsic_volume(const Generators& gen, int m);

// Determinant of the Brownian covariance matrix with entries min(l_i, l_j),
// or the bridge variant min(l_i, l_j) - l_i l_j / n when a horizon is given.
double gram_det(const std::vector<int>& l, std::optional<long> horizon = std::nullopt);

// Distance from a point to a convex polytope (0 inside), dimensions <= 3.
double polytope_distance(const Polytope& poly, const Eigen::VectorXd& point);

// Monte Carlo Steiner fit: estimates the volumes of the parallel bodies
// T + r B by rejection sampling, then least-squares fits the Steiner
// polynomial with V_0 pinned to 1. Returns estimates of V_0 .. V_d.
// Throws std::runtime_error when the fit is ill-conditioned.
std::vector<double> steiner_fit(const Polytope& poly, const std::vector<double>& radii,
                                long samples, std::uint64_t seed, int workers = 1);

// Monte Carlo V_m through the projection-average formula: random m-frames
// from orthonormalized Gaussian matrices, hull volume of the projection,
// rescaled by binom(d,m) kappa_d / (kappa_m kappa_{d-m}).
McResult kubota_vm_mc(const Polytope& poly, int m, long samples, std::uint64_t seed,
                      int workers = 1);

}  // namespace ivol

#endif
