#ifndef CRNRD_DOMAIN_HPP
#define CRNRD_DOMAIN_HPP

#include <array>

namespace crnrd {

/// Axis-aligned interval (dim = 1) or rectangle (dim = 2).
struct Domain {
    int dim = 1;
    std::array<double, 2> lengths{1.0, 1.0};
};

} // namespace crnrd

#endif
