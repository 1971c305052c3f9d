// Walk through the degree-2 Sidon source for a small t: its support, its
// entropy, and why no disperser built from sumsets or affine pieces can hit
// everything inside it.

#include <cstdio>
#include <cstdlib>
#include <random>

#include "f2ext/f2ext.hpp"

using namespace f2ext;

int main(int argc, char** argv) {
    const std::size_t t = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 3;
    const auto x = sidon_source(t);
    const auto supp = support_of(x);
    std::printf("Sidon source: t = %zu good bits, n = %zu, bad-polynomial degree %d\n", t, x.n, x.degree());
    for (std::size_t i = 0; i < x.bad_polys.size(); ++i) {
        std::printf("  x_%zu =", x.k + i);
        const auto& monos = x.bad_polys[i].monomials();
        if (monos.empty()) std::printf(" 0");
        for (std::size_t j = 0; j < monos.size(); ++j) {
            std::printf(j ? " +" : "");
            if (monos[j] == 0) std::printf(" 1");
            for (auto v : monomial_vars(monos[j])) std::printf(" x%zu", v);
        }
        std::printf("\n");
    }

    const auto h = exact_min_entropy(distribution_of(x.to_polymap()));
    std::printf("support size %zu, min-entropy %s\n", supp.size(), h ? to_string(*h).c_str() : "irrational");
    std::printf("Sidon (all pairwise sums distinct): %s\n", is_sidon(supp) ? "yes" : "no");

    const auto w = find_sumset_in_set(supp, 2, 3);
    std::printf("some |A| = 2, |B| = 3 with A + B inside the support: %s\n", w ? "yes" : "no");
    const auto aff = largest_affine_in_set(supp, 3);
    std::printf("largest affine subspace inside the support: dimension %zu\n", aff.dim);

    if (supp.n() <= 4) {
        std::mt19937_64 rng(0);
        const auto md = distance_from_sumset_mixtures(supp, 1, MixtureMode::exhaustive, rng);
        std::printf("best hit probability of a 2 + 2 sumset mixture: %s (distance bound %s)\n", to_string(md.delta).c_str(),
                    to_string(md.bound).c_str());
    }
    return 0;
}
