#include "ivol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "ivol/closed_forms.hpp"
#include "ivol/special_functions.hpp"

namespace ivol {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

struct Facet {
  std::vector<int> verts;      // d vertex indices
  std::vector<int> neighbors;  // neighbors[i] shares the ridge omitting verts[i]
  Eigen::VectorXd normal;      // outward unit normal
  double offset = 0.0;         // normal . x = offset on the facet plane
  bool alive = true;
};

// Outward plane through the given vertices; outward means the interior point
// lies strictly beneath. Returns false when the vertices are affinely
// dependent to working precision.
bool facet_plane(const Eigen::MatrixXd& pts, const std::vector<int>& verts,
                 const Eigen::VectorXd& interior, Eigen::VectorXd& normal, double& offset) {
  const int d = static_cast<int>(pts.rows());
  const Eigen::VectorXd v0 = pts.col(verts[0]);
  if (d == 2) {
    const Eigen::Vector2d e = pts.col(verts[1]) - v0;
    normal = Eigen::Vector2d(-e.y(), e.x());
  } else if (d == 3) {
    const Eigen::Vector3d a = pts.col(verts[1]) - v0;
    const Eigen::Vector3d b = pts.col(verts[2]) - v0;
    normal = Eigen::Vector3d(a).cross(Eigen::Vector3d(b));
  } else {
    Eigen::MatrixXd span(d, d - 1);
    for (int i = 1; i < d; ++i) span.col(i - 1) = pts.col(verts[i]) - v0;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
    normal = Eigen::MatrixXd(qr.householderQ()).col(d - 1);
  }
  const double len = normal.norm();
  if (!(len > 0.0)) return false;
  normal /= len;
  offset = normal.dot(v0);
  const double side = normal.dot(interior) - offset;
  if (side > 0.0) {
    normal = -normal;
    offset = -offset;
  }
  return std::abs(side) > 0.0;
}

Polytope hull_1d(const Eigen::MatrixXd& pts, double tol) {
  Polytope poly;
  poly.dim = 1;
  int lo = 0, hi = 0;
  for (int i = 1; i < pts.cols(); ++i) {
    if (pts(0, i) < pts(0, lo)) lo = i;
    if (pts(0, i) > pts(0, hi)) hi = i;
  }
  if (pts(0, hi) - pts(0, lo) <= tol) {
    poly.degenerate = true;
    poly.affine_dim = 0;
    poly.vertices = pts.col(lo);
    poly.interior_point = pts.col(lo);
    return poly;
  }
  poly.vertices.resize(1, 2);
  poly.vertices(0, 0) = pts(0, lo);
  poly.vertices(0, 1) = pts(0, hi);
  poly.facets = {{0}, {1}};
  poly.interior_point = 0.5 * (pts.col(lo) + pts.col(hi));
  poly.affine_dim = 1;
  return poly;
}

// Greedy affinely independent seed set: start from the lexicographic minimum,
// repeatedly take the point with the largest component orthogonal to the
// current affine span.
std::vector<int> seed_simplex(const Eigen::MatrixXd& pts, double tol, int& affine_dim) {
  const int d = static_cast<int>(pts.rows());
  const int n = static_cast<int>(pts.cols());
  int first = 0;
  for (int i = 1; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      if (pts(c, i) != pts(c, first)) {
        if (pts(c, i) < pts(c, first)) first = i;
        break;
      }
    }
  }
  std::vector<int> chosen = {first};
  Eigen::MatrixXd basis(d, d);  // orthonormal columns spanning the affine span
  int rank = 0;
  while (rank < d) {
    int best = -1;
    double best_norm = tol;
    Eigen::VectorXd best_residual;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd r = pts.col(i) - pts.col(first);
      for (int j = 0; j < rank; ++j) r -= basis.col(j).dot(r) * basis.col(j);
      const double nr = r.norm();
      if (nr > best_norm) {
        best_norm = nr;
        best = i;
        best_residual = r;
      }
    }
    if (best < 0) break;
    chosen.push_back(best);
    basis.col(rank++) = best_residual / best_norm;
  }
  affine_dim = rank;
  return chosen;
}

}  // namespace

Polytope convex_hull(const Eigen::MatrixXd& pts) {
  const int d = static_cast<int>(pts.rows());
  const int n = static_cast<int>(pts.cols());
  if (d < 1 || d > 6) throw std::domain_error("convex_hull: dimension must be in [1, 6]");
  if (n < 1) throw std::domain_error("convex_hull: empty point set");
  if (!pts.allFinite()) throw std::domain_error("convex_hull: non-finite coordinates");

  const double scale = std::max(1.0, pts.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;
  if (d == 1) return hull_1d(pts, tol);

  int affine_dim = 0;
  const std::vector<int> seed = seed_simplex(pts, tol, affine_dim);
  Polytope poly;
  poly.dim = d;
  if (affine_dim < d) {
    poly.degenerate = true;
    poly.affine_dim = affine_dim;
    poly.vertices.resize(d, static_cast<int>(seed.size()));
    for (std::size_t i = 0; i < seed.size(); ++i) poly.vertices.col(i) = pts.col(seed[i]);
    poly.interior_point = poly.vertices.rowwise().mean();
    return poly;
  }
  poly.affine_dim = d;

  Eigen::VectorXd interior = Eigen::VectorXd::Zero(d);
  for (int s : seed) interior += pts.col(s);
  interior /= static_cast<double>(seed.size());

  std::vector<Facet> facets(d + 1);
  for (int i = 0; i <= d; ++i) {
    Facet& f = facets[i];
    for (int j = 0; j <= d; ++j) {
      if (j == i) continue;
      f.verts.push_back(seed[j]);
      f.neighbors.push_back(j);  // ridge omitting seed[j] is shared with facet j
    }
    if (!facet_plane(pts, f.verts, interior, f.normal, f.offset)) {
      throw std::runtime_error("convex_hull: seed simplex facet is degenerate");
    }
  }

  std::vector<char> in_seed(n, 0);
  for (int s : seed) in_seed[s] = 1;

  std::vector<int> visible;
  for (int p = 0; p < n; ++p) {
    if (in_seed[p]) continue;
    const Eigen::VectorXd point = pts.col(p);
    visible.clear();
    for (std::size_t f = 0; f < facets.size(); ++f) {
      if (!facets[f].alive) continue;
      // Points within tol of a supporting hyperplane count as beneath it, so
      // non-extreme points never become vertices and the classification is
      // deterministic.
      if (facets[f].normal.dot(point) - facets[f].offset > tol) {
        visible.push_back(static_cast<int>(f));
      }
    }
    if (visible.empty()) continue;
    std::vector<char> is_visible(facets.size(), 0);
    for (int f : visible) is_visible[f] = 1;

    // Horizon ridges and the cone of new facets over them.
    std::map<std::vector<int>, std::pair<int, int>> open_ridges;  // key -> (facet, slot)
    std::vector<int> fresh;
    for (int fi : visible) {
      const Facet f = facets[fi];  // copy: facets vector reallocates below
      for (int i = 0; i < d; ++i) {
        const int nb = f.neighbors[i];
        if (is_visible[nb]) continue;
        Facet nf;
        nf.verts.reserve(d);
        for (int j = 0; j < d; ++j) {
          if (j != i) nf.verts.push_back(f.verts[j]);
        }
        nf.verts.push_back(p);
        nf.neighbors.assign(d, -1);
        if (!facet_plane(pts, nf.verts, interior, nf.normal, nf.offset)) {
          throw std::runtime_error("convex_hull: degenerate cone facet");
        }
        const int new_id = static_cast<int>(facets.size());
        // The ridge omitting the apex is the horizon ridge, shared with nb.
        nf.neighbors[d - 1] = nb;
        Facet& outside = facets[nb];
        for (int j = 0; j < d; ++j) {
          if (outside.neighbors[j] == fi) outside.neighbors[j] = new_id;
        }
        facets.push_back(std::move(nf));
        fresh.push_back(new_id);
      }
    }
    // Stitch the new facets to each other along ridges that contain the apex.
    for (int id : fresh) {
      Facet& f = facets[id];
      for (int i = 0; i < d - 1; ++i) {  // ridge omits f.verts[i], keeps apex
        std::vector<int> key;
        key.reserve(d - 1);
        for (int j = 0; j < d - 1; ++j) {
          if (j != i) key.push_back(f.verts[j]);
        }
        std::sort(key.begin(), key.end());
        auto [it, inserted] = open_ridges.try_emplace(key, id, i);
        if (!inserted) {
          auto [other, slot] = it->second;
          f.neighbors[i] = other;
          facets[other].neighbors[slot] = id;
          open_ridges.erase(it);
        }
      }
    }
    if (!open_ridges.empty()) {
      throw std::runtime_error("convex_hull: unmatched ridge during cone stitching");
    }
    for (int f : visible) facets[f].alive = false;
  }

  // Compact to the surviving facets and their vertex set.
  std::vector<int> vertex_map(n, -1);
  std::vector<int> vertex_list;
  std::vector<int> facet_map(facets.size(), -1);
  int alive_count = 0;
  for (std::size_t f = 0; f < facets.size(); ++f) {
    if (!facets[f].alive) continue;
    facet_map[f] = alive_count++;
    for (int v : facets[f].verts) {
      if (vertex_map[v] < 0) {
        vertex_map[v] = static_cast<int>(vertex_list.size());
        vertex_list.push_back(v);
      }
    }
  }
  poly.vertices.resize(d, static_cast<int>(vertex_list.size()));
  for (std::size_t i = 0; i < vertex_list.size(); ++i) {
    poly.vertices.col(i) = pts.col(vertex_list[i]);
  }
  poly.facets.reserve(alive_count);
  for (const Facet& f : facets) {
    if (!f.alive) continue;
    std::vector<int> remapped(d);
    for (int i = 0; i < d; ++i) remapped[i] = vertex_map[f.verts[i]];
    poly.facets.push_back(std::move(remapped));
  }
  poly.interior_point = interior;
  return poly;
}

double polytope_volume(const Polytope& poly) {
  if (poly.degenerate) return 0.0;
  const int d = poly.dim;
  double dfact = 1.0;
  for (int i = 2; i <= d; ++i) dfact *= i;
  Eigen::MatrixXd simplex(d, d);
  double total = 0.0;
  for (const auto& facet : poly.facets) {
    for (int i = 0; i < d; ++i) {
      simplex.col(i) = poly.vertices.col(facet[i]) - poly.interior_point;
    }
    total += std::abs(simplex.determinant());
  }
  return total / dfact;
}

double polytope_half_perimeter(const Polytope& poly) {
  if (poly.dim != 2) throw std::domain_error("polytope_half_perimeter: dimension must be 2");
  if (poly.degenerate) {
    // The hull collapses to a segment; V_1 of a segment is its length.
    if (poly.affine_dim == 0) return 0.0;
    double lo = 0.0, hi = 0.0;
    // Project onto the segment direction spanned by the stored basis points.
    const Eigen::VectorXd dir =
        (poly.vertices.col(1) - poly.vertices.col(0)).normalized();
    for (int i = 0; i < poly.vertex_count(); ++i) {
      const double t = dir.dot(poly.vertices.col(i) - poly.vertices.col(0));
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    return hi - lo;
  }
  double perim = 0.0;
  for (const auto& edge : poly.facets) {
    perim += (poly.vertices.col(edge[0]) - poly.vertices.col(edge[1])).norm();
  }
  return 0.5 * perim;
}

McResult polytope_v1_sudakov(const Polytope& poly, long samples, std::uint64_t seed,
                             int workers) {
  if (poly.vertex_count() == 0) throw std::domain_error("polytope_v1_sudakov: no vertices");
  const int d = poly.dim;
  const Eigen::MatrixXd& verts = poly.vertices;
  auto sampler = [&verts, d](RngStream& rng) {
    Eigen::VectorXd dir(d);
    for (int i = 0; i < d; ++i) dir(i) = rng.next_gaussian();
    return (verts.transpose() * dir).maxCoeff();
  };
  return mc_mean(sampler, samples, seed, workers).scaled(std::sqrt(kTwoPi));
}

namespace {

void check_subset_budget(int n, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= static_cast<double>(n - i) / (i + 1);
  if (c > 1e8) {
    throw budget_error("zonotope subset enumeration exceeds the 1e8 term budget");
  }
}

double subset_sum(const Eigen::MatrixXd& cols, int m,
                  const std::function<double(const Eigen::MatrixXd&)>& term) {
  const int n = static_cast<int>(cols.cols());
  check_subset_budget(n, m);
  Eigen::MatrixXd sub(cols.rows(), m);
  double total = 0.0;
  std::vector<int> idx(m);
  std::function<void(int, int)> descend = [&](int depth, int start) {
    if (depth == m) {
      for (int i = 0; i < m; ++i) sub.col(i) = cols.col(idx[i]);
      total += term(sub);
      return;
    }
    for (int i = start; i <= n - (m - depth); ++i) {
      idx[depth] = i;
      descend(depth + 1, i + 1);
    }
  };
  descend(0, 0);
  return total;
}

}  // namespace

double zonotope_volume(const Generators& gen) {
  const int k = gen.ambient_dim();
  if (gen.count() < k) return 0.0;
  return subset_sum(gen.vectors, k, [](const Eigen::MatrixXd& sub) {
    return std::abs(sub.determinant());
  });
}

double zonotope_intrinsic_volume(const Generators& gen, int m) {
  if (m < 0 || m > gen.count()) {
    throw std::domain_error("zonotope_intrinsic_volume: need 0 <= m <= n");
  }
  if (m == 0) return 1.0;
  return subset_sum(gen.vectors, m, [](const Eigen::MatrixXd& sub) {
    const double g = (sub.transpose() * sub).determinant();
    return g > 0.0 ? std::sqrt(g) : 0.0;
  });
}

double gram_det(const std::vector<int>& l, std::optional<long> horizon) {
  const int k = static_cast<int>(l.size());
  if (k == 0) throw std::domain_error("gram_det: empty index tuple");
  for (int i = 0; i < k; ++i) {
    if (l[i] < 1 || (i > 0 && l[i] <= l[i - 1])) {
      throw std::domain_error("gram_det: indices must be strictly increasing positive");
    }
  }
  if (horizon && l.back() > *horizon) {
    throw std::domain_error("gram_det: indices must not exceed the horizon");
  }
  Eigen::MatrixXd g(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double v = static_cast<double>(std::min(l[i], l[j]));
      if (horizon) v -= static_cast<double>(l[i]) * l[j] / static_cast<double>(*horizon);
      g(i, j) = v;
    }
  }
  return g.determinant();
}

namespace {

double point_segment_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                              const Eigen::VectorXd& b) {
  const Eigen::VectorXd ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp(ab.dot(p - a) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Closest-point distance to a triangle in R^3 (Ericson, Real-Time Collision
// Detection, 5.1.5).
double point_triangle_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                               const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return (p - a).norm();
  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return (p - b).norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return (p - (a + v * ab)).norm();
  }
  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return (p - c).norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return (p - (a + w * ac)).norm();
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + w * (c - b))).norm();
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return (p - (a + v * ab + w * ac)).norm();
}

}  // namespace

double polytope_distance(const Polytope& poly, const Eigen::VectorXd& point) {
  const int d = poly.dim;
  if (d > 3) throw std::domain_error("polytope_distance: supported for dimensions <= 3");
  if (poly.degenerate || poly.facets.empty()) {
    // Fall back to the nearest stored vertex / segment.
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < poly.vertex_count(); ++i) {
      best = std::min(best, (point - poly.vertices.col(i)).norm());
    }
    return best;
  }
  // Inside test: max over facet half-space violations.
  double max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& facet : poly.facets) {
    Eigen::VectorXd normal;
    double offset;
    // Recompute the plane; facets store indices only.
    if (!facet_plane(poly.vertices, facet, poly.interior_point, normal, offset)) continue;
    max_violation = std::max(max_violation, normal.dot(point) - offset);
  }
  if (max_violation <= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& facet : poly.facets) {
    double dist;
    if (d == 1) {
      dist = std::abs(point(0) - poly.vertices(0, facet[0]));
    } else if (d == 2) {
      dist = point_segment_distance(point, poly.vertices.col(facet[0]),
                                    poly.vertices.col(facet[1]));
    } else {
      dist = point_triangle_distance(point, poly.vertices.col(facet[0]),
                                     poly.vertices.col(facet[1]),
                                     poly.vertices.col(facet[2]));
    }
    best = std::min(best, dist);
  }
  return best;
}

std::vector<double> steiner_fit(const Polytope& poly, const std::vector<double>& radii,
                                long samples, std::uint64_t seed, int workers) {
  const int d = poly.dim;
  if (d > 3) throw std::domain_error("steiner_fit: supported for dimensions <= 3");
  if (static_cast<int>(radii.size()) < d + 1) {
    throw std::domain_error("steiner_fit: need at least dim + 1 radii");
  }
  for (double r : radii) {
    if (!(r > 0.0)) throw std::domain_error("steiner_fit: radii must be positive");
  }

  const Eigen::VectorXd lo0 = poly.vertices.rowwise().minCoeff();
  const Eigen::VectorXd hi0 = poly.vertices.rowwise().maxCoeff();
  std::vector<double> parallel_volumes(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double r = radii[j];
    const Eigen::VectorXd lo = lo0.array() - r;
    const Eigen::VectorXd hi = hi0.array() + r;
    const double box_volume = (hi - lo).prod();
    auto sampler = [&, r](RngStream& rng) {
      Eigen::VectorXd p(d);
      for (int i = 0; i < d; ++i) p(i) = lo(i) + (hi(i) - lo(i)) * rng.next_double();
      return polytope_distance(poly, p) <= r ? box_volume : 0.0;
    };
    parallel_volumes[j] = mc_mean(sampler, samples, derive_seed(seed, j), workers).estimate;
  }

  // Steiner fit with V_0 pinned to 1: vol(r) - kappa_d r^d is a polynomial
  // with coefficients kappa_{d-k} V_k, k = 1..d.
  Eigen::MatrixXd design(radii.size(), d);
  Eigen::VectorXd rhs(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) {
    rhs(j) = parallel_volumes[j] - ball_volume(d) * std::pow(radii[j], d);
    for (int k = 1; k <= d; ++k) {
      design(j, k - 1) = ball_volume(d - k) * std::pow(radii[j], d - k);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond =
      svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  if (!(cond < 1e8)) {
    throw std::runtime_error("steiner_fit: ill-conditioned design matrix (condition " +
                             std::to_string(cond) + ")");
  }
  const Eigen::VectorXd x = svd.solve(rhs);
  std::vector<double> result(d + 1);
  result[0] = 1.0;
  for (int k = 1; k <= d; ++k) result[k] = x(k - 1);
  return result;
}

McResult kubota_vm_mc(const Polytope& poly, int m, long samples, std::uint64_t seed,
                      int workers) {
  const int d = poly.dim;
  if (m < 1 || m > d) throw std::domain_error("kubota_vm_mc: need 1 <= m <= dim");
  const Eigen::MatrixXd& verts = poly.vertices;
  auto sampler = [&verts, d, m](RngStream& rng) {
    Eigen::MatrixXd gauss(d, m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < d; ++i) gauss(i, j) = rng.next_gaussian();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
    const Eigen::MatrixXd frame =
        qr.householderQ() * Eigen::MatrixXd::Identity(d, m);  // d x m orthonormal
    const Eigen::MatrixXd projected = frame.transpose() * verts;
    return polytope_volume(convex_hull(projected));
  };
  const double scale =
      binomial_general(d, m) * ball_volume(d) / (ball_volume(m) * ball_volume(d - m));
  return mc_mean(sampler, samples, seed, workers).scaled(scale);
}

}  // namespace ivol
