// Minimal tour: build a 3-path, solve its steady state, and compare the
// long-time behavior of the open, classical, and unitary walks.

#include <cstdio>

#include "ctoqw/ctoqw.hpp"

int main() {
    using namespace ctoqw;

    const Graph path3 = generate(GraphFamily::path, 3);
    const Liouvillian lio = build_liouvillian(path3);

    const SteadyStateReport report =
        classify_steady_state(path3, solve_steady_state(lio));
    std::printf("steady state of the open walk on the 3-path (%s):\n",
                to_string(report.classification));
    const ComplexMatrix& rho = report.rho_inf->matrix();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c)
            std::printf("  %+.6f%+.6fi", rho(r, c).real(), rho(r, c).imag());
        std::printf("\n");
    }
    std::printf("off-diagonal l1 coherence: %.6f\n\n", coherence(rho).l1_offdiag);

    const auto cmp = compare_processes(path3, InitialState::vertex(0), 100.0, 8);
    std::printf("%10s  %-28s %-28s %-28s\n", "t", "open", "classical", "unitary");
    for (std::size_t i = 0; i < cmp.times.size(); ++i) {
        std::printf("%10.3f  ", cmp.times[i]);
        for (const auto* dist : {&cmp.open_distribution[i], &cmp.classical_distribution[i],
                                 &cmp.unitary_distribution[i]}) {
            std::printf("(%.4f %.4f %.4f)%9s", (*dist)(0), (*dist)(1), (*dist)(2), "");
        }
        std::printf("\n");
    }
    std::printf("%10s  ", "avg");
    std::printf("%-29s%-29s", "", "");
    std::printf("(%.4f %.4f %.4f)\n", cmp.unitary_limiting_average(0),
                cmp.unitary_limiting_average(1), cmp.unitary_limiting_average(2));
    return 0;
}
