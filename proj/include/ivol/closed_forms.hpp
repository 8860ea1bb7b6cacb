#ifndef IVOL_CLOSED_FORMS_HPP
#define IVOL_CLOSED_FORMS_HPP

#include <stdexcept>
#include <string>

namespace ivol {

// A parameter combination with no closed form; maps to CLI exit code 2.
class unsupported_error : public std::domain_error {
 public:
  explicit unsupported_error(const std::string& what) : std::domain_error(what) {}
};

// An enumeration that would exceed the term budget; maps to CLI exit code 3.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

enum class SetClass { K, L };
enum class Star { BM, CBM, BB, CBB };
enum class PNorm { One, Two, Inf };

// Indexing convention for the Sobolev-type bodies: K is the full ball, L its
// monotone sub-ball; the star tag selects the boundary/centering condition.
struct BodyFamily {
  SetClass set_class;
  Star star;
  PNorm p;

  // The monotone class only admits the BM and BB conditions.
  bool admissible() const {
    return set_class == SetClass::K || star == Star::BM || star == Star::BB;
  }
};

enum class ContinuumFamily { L1_BM, L1_BB, Kinf_BM, Kinf_BB, Linf_BM, Linf_BB };
enum class WalkFamily { BM, BB };
enum class ZonoidMode { AsPrinted, ViaTsirelson };
enum class EllipsoidFamilyTag { E, F };

// All-order intrinsic volumes of the six bodies with a known full spectrum.
// k = 0 returns 1 for every family.
double vk_continuum(ContinuumFamily family, int k);

// First intrinsic volume of a Sobolev ball for p in {1, inf}; throws
// unsupported_error for combinations with no printed constant (p = 2 is
// handled by the ellipsoid machinery, p = 1 with centered stars has no value).
double v1_sobolev_exact(const BodyFamily& body);

// Intrinsic volumes of the discrete simplices T_{*,n}: exact enumeration of
// compositions (d_1, ..., d_k) of at most n.
double vk_simplex_discrete(int n, int k, WalkFamily family);

// Intrinsic volumes of the discrete parallelotopes F_{*,n}: exact enumeration
// of increasing index tuples l_1 < ... < l_k <= n.
double vk_zonotope_discrete(int n, int k, WalkFamily family);

// Expected volume of the convex hull of a k-dimensional Brownian path (BM) or
// bridge (BB) on [0, 1].
double expected_hull_volume(int k, WalkFamily family);

// Expected m-th intrinsic volume of the same hull, 0 <= m <= k.
double expected_hull_vm(int k, int m, WalkFamily family);

// Expected m-th intrinsic volume of the convex hull of an n-step Gaussian
// walk (or walk bridge) in R^k, 1 <= m <= k.
double expected_walk_hull(int n, int k, int m, WalkFamily family);

// Expected volume of the zonotope spanned by the steps of an n-step Gaussian
// walk (or walk bridge) in R^k.
double expected_walk_zonotope(int n, int k, WalkFamily family);

// Expected volume of the Brownian zonoid in R^k. AsPrinted evaluates the
// published display verbatim; ViaTsirelson composes the spectrum identity
// with the Lipschitz-ball intrinsic volumes. The two disagree by a factor
// kappa_k^2 (see README notes); both are exposed deliberately.
double expected_brownian_zonoid_volume(int k, WalkFamily family, ZonoidMode mode);

// First intrinsic volume of the ellipsoids E_d / F_d for the printed cases
// d in {2, 4}; throws unsupported_error otherwise.
double ellipsoid_v1_table(EllipsoidFamilyTag family, int d);

// Number of terms in the composition set A_{n,k} (= binom(n, k)), used for
// budget checks; throws budget_error above 1e8.
double composition_count(int n, int k);

}  // namespace ivol

#endif
