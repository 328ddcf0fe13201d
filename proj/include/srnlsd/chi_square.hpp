#pragma once

namespace srnlsd {

/// P(X <= x) for X ~ chi^2(dof), i.e. the regularized lower incomplete gamma P(dof/2, x/2).
[[nodiscard]] double chi_square_cdf(double x, double dof);

/// Upper tail P(X > x), computed directly to keep small p-values accurate.
[[nodiscard]] double chi_square_sf(double x, double dof);

/// x such that chi_square_cdf(x, dof) == probability, for probability in [0, 1).
[[nodiscard]] double chi_square_quantile(double probability, double dof);

}  // namespace srnlsd
