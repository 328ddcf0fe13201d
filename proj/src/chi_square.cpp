#include "srnlsd/chi_square.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "srnlsd/errors.hpp"

namespace srnlsd {

namespace {

void require_dof(double dof) {
    if (!(dof > 0.0) || !std::isfinite(dof)) {
        throw DomainError("chi-square degrees of freedom must be positive, got " + std::to_string(dof));
    }
}

}  // namespace

double chi_square_cdf(double x, double dof) {
    require_dof(dof);
    if (std::isnan(x)) throw DomainError("chi_square_cdf: x is NaN");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::gamma_p(0.5 * dof, 0.5 * x);
}

double chi_square_sf(double x, double dof) {
    require_dof(dof);
    if (std::isnan(x)) throw DomainError("chi_square_sf: x is NaN");
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

double chi_square_quantile(double probability, double dof) {
    require_dof(dof);
    if (!(probability >= 0.0 && probability < 1.0)) {
        throw DomainError("chi_square_quantile: probability must be in [0, 1), got " +
                          std::to_string(probability));
    }
    if (probability == 0.0) return 0.0;
    return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), probability);
}

}  // namespace srnlsd
