#ifndef IVOL_SPECIAL_FUNCTIONS_HPP
#define IVOL_SPECIAL_FUNCTIONS_HPP

#include <string_view>

namespace ivol {

// Gamma function on the positive half-line, Lanczos approximation (g = 607/128,
// 15 coefficients). Relative error is below 1e-13 throughout the range used
// here. Throws std::domain_error for x <= 0 or non-finite x.
double gamma_fn(double x);

// log Gamma(x) for x > 0, same Lanczos scheme; used to keep large-k formulas
// in log form.
double log_gamma(double x);

// Volume of the k-dimensional unit ball, kappa_k = pi^{k/2} / Gamma(k/2 + 1).
double ball_volume(int k);

// Named constants evaluated once from series with explicit truncation bounds:
// "catalan" and "zeta3". Throws std::domain_error for unknown names.
double constant(std::string_view name);

// Generalized binomial coefficient C(a, k) = Gamma(a+1) / (Gamma(k+1) Gamma(a-k+1)),
// evaluated in log form.
double binomial_general(double a, double k);

}  // namespace ivol

#endif
