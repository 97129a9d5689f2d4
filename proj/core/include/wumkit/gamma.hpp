#ifndef WUMKIT_GAMMA_HPP_
#define WUMKIT_GAMMA_HPP_

namespace wumkit {

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
/// Requires a > 0 and x >= 0; throws DomainError otherwise.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), evaluated
/// directly (continued fraction) where P is close to 1 so small tail
/// probabilities keep their relative accuracy.
double regularized_gamma_q(double a, double x);

}  // namespace wumkit

#endif  // WUMKIT_GAMMA_HPP_
