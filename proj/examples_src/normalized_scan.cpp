// Cubic-root optimum vs brute-force optimum of the exact rate for a few
// normalized (alpha, theta, xi, psi) combinations.
#include <cstdio>

#include <omnidris/omnidris.hpp>

int main()
{
    using namespace omnidris;

    struct Case { double alpha, theta, xi, psi; };
    for (const Case c : {Case{1, 1, 1, 1}, Case{5, 5, 5, 5}, Case{3, 1, 1, 1}, Case{1, 3, 1, 1}}) {
        const ReducedParams red{c.alpha, c.psi, c.xi};
        const OptimumReport o = optimize_fixed_theta(red, c.theta);
        const auto eq11 = closed_form_root_eq11(red, c.theta);
        std::printf("alpha=%g theta=%g xi=%g psi=%g: cubic N=%.4f f=%.4f | exact N=%.4f f=%.4f | closed form %.6f%+.1ei\n",
                    c.alpha, c.theta, c.xi, c.psi, o.n_star_cubic, o.f_at_cubic, o.n_star_exact, o.f_at_exact,
                    eq11.real, eq11.imag);
    }
}
