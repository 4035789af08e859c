#pragma once

#include "affdec/poly.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace affdec {

/// Built-in names: paraboloid, saddle, cylinder, quartic, monkey, perturbed-flat.
std::vector<std::string> catalog_names();

/// Coefficients of degree 2..degree uniform in [-1, 1], seeded.
Poly2 random_surface(std::uint64_t seed, int degree);

/// A catalog name or "random(seed,degree)"; throws InvalidArgument("unknown surface ...").
Poly2 surface_by_name(const std::string& name);

/// Rejects inline polynomials with ‖φ‖ > 10.
void check_inline_surface(const Poly2& phi);

}  // namespace affdec
