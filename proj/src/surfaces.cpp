#include "affdec/surfaces.hpp"

#include "affdec/errors.hpp"

#include <random>
#include <regex>

namespace affdec {

std::vector<std::string> catalog_names() {
    return {"paraboloid", "saddle", "cylinder", "quartic", "monkey", "perturbed-flat"};
}

Poly2 random_surface(std::uint64_t seed, int degree) {
    if (degree < 2 || degree > 12) throw InvalidArgument("random surface degree must lie in [2, 12]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Poly2 p(degree);
    for (int total = 2; total <= degree; ++total)
        for (int i = total; i >= 0; --i) p.set(i, total - i, u(rng));
    return p;
}

Poly2 surface_by_name(const std::string& name) {
    if (name == "paraboloid") return Poly2(2, {{{2, 0}, 0.5}, {{0, 2}, 0.5}});
    if (name == "saddle") return Poly2(2, {{{1, 1}, 1.0}});
    if (name == "cylinder") return Poly2(2, {{{2, 0}, 0.5}});
    if (name == "quartic") return Poly2(4, {{{4, 0}, 1.0}, {{0, 2}, 1.0}});
    if (name == "monkey") return Poly2(3, {{{3, 0}, 1.0}, {{1, 2}, -3.0}});
    if (name == "perturbed-flat") return Poly2(2, {{{2, 0}, 0.5}, {{0, 2}, std::exp2(-9.0)}});
    static const std::regex random_re(R"(random\(\s*(\d+)\s*,\s*(\d+)\s*\))");
    std::smatch m;
    if (std::regex_match(name, m, random_re)) return random_surface(std::stoull(m[1]), std::stoi(m[2]));
    throw InvalidArgument("unknown surface '" + name + "'");
}

void check_inline_surface(const Poly2& phi) {
    if (coeff_norm(phi) > 10) throw InvalidArgument("inline surface has coefficient norm above 10");
}

}  // namespace affdec
