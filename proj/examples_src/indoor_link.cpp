// Link budget for the default indoor geometry, then the element count that
// maximizes the rate once alpha is calibrated to a peak at N = 180.
#include <cstdio>

#include <omnidris/omnidris.hpp>

int main()
{
    using namespace omnidris;

    const LinkGeometry geom;  // defaults: 1.52 m / 2.03 m links, r = 1
    const SystemParams sys;   // 1 MHz, 10 W, one LS, one user, PSD 2
    const double gain = channel_dc_gain(geom);
    const ReducedParams raw = reduce(sys, gain);
    std::printf("G_NLoS = %.6e, alpha = %.6e, psi = %g, xi = %g\n", gain, raw.alpha, raw.psi, raw.xi);

    ReducedParams red = raw;
    red.alpha = alpha_for_peak(180.0, red.psi);
    for (double active : {1.0, 0.75, 0.5}) {
        const OptimumReport o = optimize_proportional(red, active);
        std::printf("active %.2f: N* = %.2f, N' = %lld, N'' = %lld -> N = %lld (k = %d), %.2f Mbit/s\n", active,
                    o.n_star, static_cast<long long>(o.selection.lower), static_cast<long long>(o.selection.upper),
                    static_cast<long long>(o.selection.selected), o.selection.selected_bits,
                    o.selection.selected_rate / 1e6);
    }
}
